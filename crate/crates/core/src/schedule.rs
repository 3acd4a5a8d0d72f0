use std::fmt;

use serde::Serialize;

use crate::duration::Duration;
use crate::network::{NodeId, ProjectNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Exact,
    Ga,
    BruteForce,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Exact => "exact",
            Engine::Ga => "ga",
            Engine::BruteForce => "brute-force",
        })
    }
}

/// Earliest/latest event times of one node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeSchedule {
    pub node: String,
    pub earliest: Duration,
    pub latest: Duration,
    pub slack: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduleResult {
    pub engine: Engine,
    pub project_duration: Duration,
    /// Source-to-sink node labels, virtual terminals included.
    pub critical_path: Vec<String>,
    /// `critical_path` without virtual terminals.
    pub milestones: Vec<String>,
    /// Labels of the non-virtual arcs along `critical_path`.
    pub critical_activities: Vec<String>,
    /// Per-node times; only the exact engine fills these.
    pub schedules: Vec<NodeSchedule>,
}

impl ScheduleResult {
    /// Result for `path` on `network`; `path` must be a complete path.
    pub fn from_path(
        network: &ProjectNetwork,
        path: &[NodeId],
        engine: Engine,
        schedules: Vec<NodeSchedule>,
    ) -> Self {
        let project_duration = network
            .path_duration(path)
            .expect("result path follows present arcs");
        let critical_activities = path
            .windows(2)
            .filter_map(|w| network.arc(w[0], w[1]))
            .filter(|a| !a.is_virtual)
            .map(|a| a.name.clone())
            .collect();
        ScheduleResult {
            engine,
            project_duration,
            critical_path: network.path_labels(path),
            milestones: path
                .iter()
                .filter(|&&id| !network.is_virtual(id))
                .map(|&id| network.label(id).to_string())
                .collect(),
            critical_activities,
            schedules,
        }
    }

    /// Resolve `critical_path` against `network`, or `None` if any label is
    /// unknown or consecutive labels are not joined by an arc.
    pub fn path_ids(&self, network: &ProjectNetwork) -> Option<Vec<NodeId>> {
        let ids: Option<Vec<NodeId>> = self
            .critical_path
            .iter()
            .map(|l| network.node_id(l))
            .collect();
        let ids = ids?;
        ids.windows(2)
            .all(|w| network.arc(w[0], w[1]).is_some())
            .then_some(ids)
    }
}
