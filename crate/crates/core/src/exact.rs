//! Exact critical-path engine: forward/backward passes over a topological
//! order, longest-path extraction, and exhaustive path enumeration.

use std::borrow::Cow;

use thiserror::Error;

use crate::duration::Duration;
use crate::network::{NodeId, ProjectNetwork};
use crate::schedule::{Engine, NodeSchedule, ScheduleResult};

pub const DEFAULT_MAX_PATHS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("path enumeration exceeded the bound of {bound} paths")]
pub struct EnumerationOverflow {
    pub bound: usize,
}

/// Earliest event times, indexed by [`NodeId`]. Every source starts at zero.
pub fn forward_pass(network: &ProjectNetwork) -> Vec<Duration> {
    let mut earliest = vec![Duration::ZERO; network.node_count()];
    for &v in network.topo_order() {
        for &u in network.predecessors(v) {
            let candidate = earliest[u.index()] + network.duration(u, v).expect("arc");
            if candidate > earliest[v.index()] {
                earliest[v.index()] = candidate;
            }
        }
    }
    earliest
}

/// Latest event times given the project `horizon`, indexed by [`NodeId`].
pub fn backward_pass(network: &ProjectNetwork, horizon: Duration) -> Vec<Duration> {
    let mut latest = vec![horizon; network.node_count()];
    for &v in network.topo_order().iter().rev() {
        for &w in network.successors(v) {
            let candidate = latest[w.index()] - network.duration(v, w).expect("arc");
            if candidate < latest[v.index()] {
                latest[v.index()] = candidate;
            }
        }
    }
    latest
}

/// Per-node schedules from both passes, with `horizon = E(sink)`.
pub fn node_schedules(network: &ProjectNetwork) -> Vec<NodeSchedule> {
    let earliest = forward_pass(network);
    let horizon = earliest[network.sink().index()];
    let latest = backward_pass(network, horizon);
    network
        .node_ids()
        .map(|id| NodeSchedule {
            node: network.label(id).to_string(),
            earliest: earliest[id.index()],
            latest: latest[id.index()],
            slack: latest[id.index()] - earliest[id.index()],
        })
        .collect()
}

/// Longest source-to-sink path of the terminal-normalized network. Among
/// equally long paths the lexicographically smallest node sequence wins.
pub fn critical_path_exact(network: &ProjectNetwork) -> ScheduleResult {
    let network = normalized(network);
    let path = longest_path(&network);
    ScheduleResult::from_path(&network, &path, Engine::Exact, node_schedules(&network))
}

/// Longest path from `network.source()` to `network.sink()` with the
/// lexicographic tie rule. Nodes that cannot reach the sink are skipped.
pub fn longest_path(network: &ProjectNetwork) -> Vec<NodeId> {
    let sink = network.sink();
    // Longest remaining time from each node to the sink.
    let mut tail: Vec<Option<Duration>> = vec![None; network.node_count()];
    tail[sink.index()] = Some(Duration::ZERO);
    for &v in network.topo_order().iter().rev() {
        for &w in network.successors(v) {
            if let Some(rest) = tail[w.index()] {
                let candidate = rest + network.duration(v, w).expect("arc");
                if tail[v.index()].is_none_or(|t| candidate > t) {
                    tail[v.index()] = Some(candidate);
                }
            }
        }
    }
    let mut path = vec![network.source()];
    let mut v = network.source();
    while v != sink {
        let want = tail[v.index()].expect("source reaches sink");
        // successors are sorted, so the first match is the smallest label
        v = *network
            .successors(v)
            .iter()
            .find(|&&w| {
                tail[w.index()]
                    .is_some_and(|rest| rest + network.duration(v, w).expect("arc") == want)
            })
            .expect("a successor attains the longest tail");
        path.push(v);
    }
    path
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedPath {
    pub nodes: Vec<NodeId>,
    pub duration: Duration,
}

/// Every path from `network.source()` to `network.sink()`, in lexicographic
/// node order. Fails once more than `max_paths` paths have been found.
pub fn enumerate_paths(
    network: &ProjectNetwork,
    max_paths: usize,
) -> Result<Vec<EnumeratedPath>, EnumerationOverflow> {
    let source = network.source();
    let sink = network.sink();
    let mut out = Vec::new();
    let mut path = vec![source];
    let mut sums = vec![Duration::ZERO];
    // (node, index of next successor to try)
    let mut stack: Vec<(NodeId, usize)> = vec![(source, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        if v == sink {
            if out.len() == max_paths {
                return Err(EnumerationOverflow { bound: max_paths });
            }
            out.push(EnumeratedPath {
                nodes: path.clone(),
                duration: *sums.last().expect("nonempty"),
            });
            stack.pop();
            path.pop();
            sums.pop();
            continue;
        }
        match network.successors(v).get(next) {
            Some(&w) => {
                top.1 += 1;
                let d = *sums.last().expect("nonempty") + network.duration(v, w).expect("arc");
                stack.push((w, 0));
                path.push(w);
                sums.push(d);
            }
            None => {
                stack.pop();
                path.pop();
                sums.pop();
            }
        }
    }
    Ok(out)
}

/// Number of source-to-sink paths, saturating at `u128::MAX`.
pub fn count_paths(network: &ProjectNetwork) -> u128 {
    let mut count = vec![0u128; network.node_count()];
    count[network.sink().index()] = 1;
    for &v in network.topo_order().iter().rev() {
        for &w in network.successors(v) {
            count[v.index()] = count[v.index()].saturating_add(count[w.index()]);
        }
    }
    count[network.source().index()]
}

/// Critical path by exhaustive enumeration on the normalized network.
pub fn critical_path_brute_force(
    network: &ProjectNetwork,
    max_paths: usize,
) -> Result<ScheduleResult, EnumerationOverflow> {
    let network = normalized(network);
    let paths = enumerate_paths(&network, max_paths)?;
    let mut best: Option<&EnumeratedPath> = None;
    for p in &paths {
        // strict comparison keeps the lexicographically first maximum
        if best.is_none_or(|b| p.duration > b.duration) {
            best = Some(p);
        }
    }
    let best = best.expect("a normalized network has at least one path");
    Ok(ScheduleResult::from_path(
        &network,
        &best.nodes,
        Engine::BruteForce,
        Vec::new(),
    ))
}

pub(crate) fn normalized(network: &ProjectNetwork) -> Cow<'_, ProjectNetwork> {
    if network.is_normalized() {
        Cow::Borrowed(network)
    } else {
        Cow::Owned(network.normalize_terminals())
    }
}
