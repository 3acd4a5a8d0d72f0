//! Activity-on-arc project networks.
//!
//! A [`ProjectNetwork`] is built once from a list of [`Activity`] values,
//! validated, and then shared read-only by both engines. Node labels are
//! ordered naturally (`D2` before `D10`); that order is the one used for
//! every lexicographic tie-break downstream.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::duration::Duration;

/// Label used for the virtual source inserted by [`ProjectNetwork::normalize_terminals`].
pub const VIRTUAL_START: &str = "START";
/// Label used for the virtual sink inserted by [`ProjectNetwork::normalize_terminals`].
pub const VIRTUAL_FINISH: &str = "FINISH";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("three-point estimate out of order: require a <= m <= b, got a={a:?} m={m:?} b={b:?}")]
pub struct EstimateOrderError {
    pub a: Duration,
    pub m: Duration,
    pub b: Duration,
}

/// PERT expected time `(a + 4m + b) / 6`, exact.
pub fn expected_duration(
    a: Duration,
    m: Duration,
    b: Duration,
) -> Result<Duration, EstimateOrderError> {
    if a.is_negative() || a > m || m > b {
        return Err(EstimateOrderError { a, m, b });
    }
    let sum = a.ratio() + m.ratio() * 4 + b.ratio();
    let t = sum / 6;
    Ok(Duration::from_ratio(*t.numer(), *t.denom()))
}

/// How long an activity takes: a single CPM value or a PERT triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DurationSpec {
    Fixed(Duration),
    Estimate {
        optimistic: Duration,
        most_likely: Duration,
        pessimistic: Duration,
    },
}

impl DurationSpec {
    pub fn fixed(value: impl Into<Duration>) -> Self {
        DurationSpec::Fixed(value.into())
    }

    pub fn estimate(
        optimistic: impl Into<Duration>,
        most_likely: impl Into<Duration>,
        pessimistic: impl Into<Duration>,
    ) -> Self {
        DurationSpec::Estimate {
            optimistic: optimistic.into(),
            most_likely: most_likely.into(),
            pessimistic: pessimistic.into(),
        }
    }

    pub fn is_estimate(&self) -> bool {
        matches!(self, DurationSpec::Estimate { .. })
    }

    /// Effective duration; PERT triples collapse through [`expected_duration`].
    pub fn effective(&self) -> Result<Duration, EstimateOrderError> {
        match *self {
            DurationSpec::Fixed(d) => Ok(d),
            DurationSpec::Estimate {
                optimistic,
                most_likely,
                pessimistic,
            } => expected_duration(optimistic, most_likely, pessimistic),
        }
    }
}

/// A named arc between two events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activity {
    pub name: String,
    pub from: String,
    pub to: String,
    pub duration: DurationSpec,
}

impl Activity {
    pub fn new(
        name: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        duration: DurationSpec,
    ) -> Self {
        Activity {
            name: name.into(),
            from: from.into(),
            to: to.into(),
            duration,
        }
    }

    pub fn fixed(
        name: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        duration: impl Into<Duration>,
    ) -> Self {
        Self::new(name, from, to, DurationSpec::fixed(duration))
    }
}

/// Index of a node inside one [`ProjectNetwork`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    pub is_virtual: bool,
}

/// An arc after validation, with its collapsed duration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub name: String,
    pub from: NodeId,
    pub to: NodeId,
    pub duration: Duration,
    pub spec: DurationSpec,
    /// Zero-duration arc attached to a virtual terminal.
    pub is_virtual: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationError {
    EmptyNetwork,
    EmptyName {
        from: String,
        to: String,
    },
    EmptyNodeLabel {
        activity: String,
    },
    SelfLoop {
        activity: String,
        node: String,
    },
    DuplicateArc {
        from: String,
        to: String,
    },
    NegativeDuration {
        activity: String,
        value: Duration,
    },
    EstimateOrder {
        activity: String,
        source: EstimateOrderError,
    },
    Cycle {
        nodes: Vec<String>,
    },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::EmptyNetwork => write!(f, "network has no activities"),
            ValidationError::EmptyName { from, to } => {
                write!(f, "activity {from}->{to} has an empty name")
            }
            ValidationError::EmptyNodeLabel { activity } => {
                write!(f, "activity {activity} has an empty node label")
            }
            ValidationError::SelfLoop { activity, node } => {
                write!(f, "activity {activity} is a self-loop on {node}")
            }
            ValidationError::DuplicateArc { from, to } => {
                write!(f, "duplicate arc {from}->{to}")
            }
            ValidationError::NegativeDuration { activity, value } => {
                write!(
                    f,
                    "activity {activity} has negative duration {}",
                    value.to_literal()
                )
            }
            ValidationError::EstimateOrder { activity, source } => write!(
                f,
                "activity {activity}: estimate order violated (a={}, m={}, b={})",
                source.a.to_literal(),
                source.m.to_literal(),
                source.b.to_literal()
            ),
            ValidationError::Cycle { nodes } => {
                write!(f, "cycle found: {}", nodes.join(" -> "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationWarning {
    MultipleSources { nodes: Vec<String> },
    MultipleSinks { nodes: Vec<String> },
    UnreachableFromSource { node: String, source: String },
    CannotReachSink { node: String, sink: String },
}

impl fmt::Display for ValidationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationWarning::MultipleSources { nodes } => {
                write!(f, "multiple sources: {}", nodes.join(", "))
            }
            ValidationWarning::MultipleSinks { nodes } => {
                write!(f, "multiple sinks: {}", nodes.join(", "))
            }
            ValidationWarning::UnreachableFromSource { node, source } => {
                write!(f, "{node} unreachable from source {source}")
            }
            ValidationWarning::CannotReachSink { node, sink } => {
                write!(f, "{node} cannot reach sink {sink}")
            }
        }
    }
}

/// Outcome of validating an activity list. Errors make the network unusable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<ValidationError>,
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.errors {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown node `{0}`")]
pub struct UnknownNode(pub String);

/// A validated, acyclic activity-on-arc network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectNetwork {
    nodes: Vec<Node>,
    arcs: Vec<Arc>,
    // n*n cell -> arc index
    cells: Vec<Option<usize>>,
    successors: Vec<Vec<NodeId>>,
    predecessors: Vec<Vec<NodeId>>,
    topo: Vec<NodeId>,
    sources: Vec<NodeId>,
    sinks: Vec<NodeId>,
    warnings: Vec<ValidationWarning>,
}

struct RawArc {
    name: String,
    from: String,
    to: String,
    spec: DurationSpec,
    is_virtual: bool,
}

/// Validate `activities` and assemble the duration matrix.
pub fn build_network(activities: &[Activity]) -> Result<ProjectNetwork, ValidationReport> {
    ProjectNetwork::build(activities)
}

impl ProjectNetwork {
    pub fn build(activities: &[Activity]) -> Result<Self, ValidationReport> {
        let raw = activities
            .iter()
            .map(|a| RawArc {
                name: a.name.clone(),
                from: a.from.clone(),
                to: a.to.clone(),
                spec: a.duration,
                is_virtual: false,
            })
            .collect();
        Self::assemble(raw, None, None)
    }

    fn assemble(
        raw: Vec<RawArc>,
        virtual_start: Option<&str>,
        virtual_finish: Option<&str>,
    ) -> Result<Self, ValidationReport> {
        let mut report = ValidationReport::default();
        if raw.is_empty() {
            report.errors.push(ValidationError::EmptyNetwork);
            return Err(report);
        }

        let mut labels: Vec<&str> = raw
            .iter()
            .flat_map(|a| [a.from.as_str(), a.to.as_str()])
            .filter(|l| Some(*l) != virtual_start && Some(*l) != virtual_finish)
            .collect();
        labels.sort_by(|a, b| natural_cmp(a, b));
        labels.dedup();

        let mut nodes = Vec::with_capacity(labels.len() + 2);
        if let Some(s) = virtual_start {
            nodes.push(Node {
                label: s.to_string(),
                is_virtual: true,
            });
        }
        nodes.extend(labels.iter().map(|l| Node {
            label: l.to_string(),
            is_virtual: false,
        }));
        if let Some(f) = virtual_finish {
            nodes.push(Node {
                label: f.to_string(),
                is_virtual: true,
            });
        }
        let index: HashMap<&str, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.label.as_str(), NodeId(i)))
            .collect();

        let n = nodes.len();
        let mut cells = vec![None; n * n];
        let mut arcs = Vec::with_capacity(raw.len());
        for r in &raw {
            if r.name.trim().is_empty() {
                report.errors.push(ValidationError::EmptyName {
                    from: r.from.clone(),
                    to: r.to.clone(),
                });
            }
            if r.from.is_empty() || r.to.is_empty() {
                report.errors.push(ValidationError::EmptyNodeLabel {
                    activity: r.name.clone(),
                });
            }
            if r.from == r.to {
                report.errors.push(ValidationError::SelfLoop {
                    activity: r.name.clone(),
                    node: r.from.clone(),
                });
                continue;
            }
            let duration = match r.spec.effective() {
                Ok(d) => d,
                Err(source) => {
                    report.errors.push(ValidationError::EstimateOrder {
                        activity: r.name.clone(),
                        source,
                    });
                    continue;
                }
            };
            if duration.is_negative() {
                report.errors.push(ValidationError::NegativeDuration {
                    activity: r.name.clone(),
                    value: duration,
                });
                continue;
            }
            let from = index[r.from.as_str()];
            let to = index[r.to.as_str()];
            let cell = &mut cells[from.0 * n + to.0];
            if cell.is_some() {
                report.errors.push(ValidationError::DuplicateArc {
                    from: r.from.clone(),
                    to: r.to.clone(),
                });
                continue;
            }
            *cell = Some(arcs.len());
            arcs.push(Arc {
                name: r.name.clone(),
                from,
                to,
                duration,
                spec: r.spec,
                is_virtual: r.is_virtual,
            });
        }

        let mut successors = vec![Vec::new(); n];
        let mut predecessors = vec![Vec::new(); n];
        for arc in &arcs {
            successors[arc.from.0].push(arc.to);
            predecessors[arc.to.0].push(arc.from);
        }
        for list in successors.iter_mut().chain(predecessors.iter_mut()) {
            list.sort_unstable();
        }

        let topo = match topological_order(&successors, &predecessors) {
            Ok(t) => t,
            Err(cycle) => {
                report.errors.push(ValidationError::Cycle {
                    nodes: cycle.iter().map(|id| nodes[id.0].label.clone()).collect(),
                });
                Vec::new()
            }
        };
        if !report.errors.is_empty() {
            return Err(report);
        }

        let sources: Vec<NodeId> = (0..n)
            .filter(|&i| predecessors[i].is_empty())
            .map(NodeId)
            .collect();
        let sinks: Vec<NodeId> = (0..n)
            .filter(|&i| successors[i].is_empty())
            .map(NodeId)
            .collect();

        let mut network = ProjectNetwork {
            nodes,
            arcs,
            cells,
            successors,
            predecessors,
            topo,
            sources,
            sinks,
            warnings: Vec::new(),
        };
        network.warnings = network.reachability_warnings();
        Ok(network)
    }

    fn reachability_warnings(&self) -> Vec<ValidationWarning> {
        let mut warnings = Vec::new();
        if self.sources.len() > 1 {
            warnings.push(ValidationWarning::MultipleSources {
                nodes: self
                    .sources
                    .iter()
                    .map(|&s| self.label(s).to_string())
                    .collect(),
            });
        }
        if self.sinks.len() > 1 {
            warnings.push(ValidationWarning::MultipleSinks {
                nodes: self
                    .sinks
                    .iter()
                    .map(|&s| self.label(s).to_string())
                    .collect(),
            });
        }
        let source = self.source();
        let sink = self.sink();
        let forward = self.reach(source, &self.successors);
        let backward = self.reach(sink, &self.predecessors);
        for (i, node) in self.nodes.iter().enumerate() {
            if !forward[i] {
                warnings.push(ValidationWarning::UnreachableFromSource {
                    node: node.label.clone(),
                    source: self.label(source).to_string(),
                });
            }
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if !backward[i] {
                warnings.push(ValidationWarning::CannotReachSink {
                    node: node.label.clone(),
                    sink: self.label(sink).to_string(),
                });
            }
        }
        warnings
    }

    fn reach(&self, start: NodeId, adjacency: &[Vec<NodeId>]) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![start];
        seen[start.0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v.0] {
                if !seen[w.0] {
                    seen[w.0] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Insert a virtual START (FINISH) wired by zero-duration arcs to every
    /// source (sink) when there is more than one. No-op otherwise.
    pub fn normalize_terminals(&self) -> ProjectNetwork {
        if self.is_normalized() {
            return self.clone();
        }
        let start = (self.sources.len() > 1).then(|| self.fresh_label(VIRTUAL_START));
        let finish = (self.sinks.len() > 1).then(|| self.fresh_label(VIRTUAL_FINISH));

        let mut raw: Vec<RawArc> = self
            .arcs
            .iter()
            .map(|a| RawArc {
                name: a.name.clone(),
                from: self.label(a.from).to_string(),
                to: self.label(a.to).to_string(),
                spec: a.spec,
                is_virtual: a.is_virtual,
            })
            .collect();
        if let Some(start) = &start {
            for &s in &self.sources {
                raw.push(RawArc {
                    name: start.clone(),
                    from: start.clone(),
                    to: self.label(s).to_string(),
                    spec: DurationSpec::Fixed(Duration::ZERO),
                    is_virtual: true,
                });
            }
        }
        if let Some(finish) = &finish {
            for &t in &self.sinks {
                raw.push(RawArc {
                    name: finish.clone(),
                    from: self.label(t).to_string(),
                    to: finish.clone(),
                    spec: DurationSpec::Fixed(Duration::ZERO),
                    is_virtual: true,
                });
            }
        }
        let mut normalized = Self::assemble(raw, start.as_deref(), finish.as_deref())
            .expect("adding terminals to a valid network keeps it valid");
        // Nodes that were virtual in the input (re-normalizing) keep their flag.
        for node in normalized.nodes.iter_mut() {
            if let Some(id) = self.node_id(&node.label) {
                node.is_virtual |= self.nodes[id.0].is_virtual;
            }
        }
        normalized
    }

    fn fresh_label(&self, base: &str) -> String {
        let mut label = base.to_string();
        while self.node_id(&label).is_some() {
            label.push('*');
        }
        label
    }

    pub fn is_normalized(&self) -> bool {
        self.sources.len() == 1 && self.sinks.len() == 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.nodes[id.0].label
    }

    pub fn is_virtual(&self, id: NodeId) -> bool {
        self.nodes[id.0].is_virtual
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.label == label).map(NodeId)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Non-virtual arcs as activities, in input order.
    pub fn activities(&self) -> Vec<Activity> {
        self.arcs
            .iter()
            .filter(|a| !a.is_virtual)
            .map(|a| Activity::new(a.name.clone(), self.label(a.from), self.label(a.to), a.spec))
            .collect()
    }

    /// The arc `from -> to`, if present.
    pub fn arc(&self, from: NodeId, to: NodeId) -> Option<&Arc> {
        let n = self.nodes.len();
        self.cells[from.0 * n + to.0].map(|i| &self.arcs[i])
    }

    pub fn duration(&self, from: NodeId, to: NodeId) -> Option<Duration> {
        self.arc(from, to).map(|a| a.duration)
    }

    /// Matrix cell lookup by label. `Ok(None)` means no direct connection.
    pub fn adjacency(&self, from: &str, to: &str) -> Result<Option<Duration>, UnknownNode> {
        let i = self
            .node_id(from)
            .ok_or_else(|| UnknownNode(from.to_string()))?;
        let j = self
            .node_id(to)
            .ok_or_else(|| UnknownNode(to.to_string()))?;
        Ok(self.duration(i, j))
    }

    /// Dense duration table, rows and columns in node order.
    pub fn matrix(&self) -> Vec<Vec<Option<Duration>>> {
        self.node_ids()
            .map(|i| self.node_ids().map(|j| self.duration(i, j)).collect())
            .collect()
    }

    pub fn successors(&self, id: NodeId) -> &[NodeId] {
        &self.successors[id.0]
    }

    pub fn predecessors(&self, id: NodeId) -> &[NodeId] {
        &self.predecessors[id.0]
    }

    /// Topological order, smallest available node first.
    pub fn topo_order(&self) -> &[NodeId] {
        &self.topo
    }

    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    pub fn sinks(&self) -> &[NodeId] {
        &self.sinks
    }

    /// The first source in node order. Unique once normalized.
    pub fn source(&self) -> NodeId {
        self.sources[0]
    }

    /// The last sink in node order. Unique once normalized.
    pub fn sink(&self) -> NodeId {
        *self.sinks.last().expect("acyclic network has a sink")
    }

    pub fn warnings(&self) -> &[ValidationWarning] {
        &self.warnings
    }

    /// Validation report of a successfully built network (warnings only).
    pub fn report(&self) -> ValidationReport {
        ValidationReport {
            errors: Vec::new(),
            warnings: self.warnings.clone(),
        }
    }

    /// Whether `path` starts at the source, ends at the sink and follows present arcs.
    pub fn is_complete_path(&self, path: &[NodeId]) -> bool {
        path.first() == Some(&self.source())
            && path.last() == Some(&self.sink())
            && path.windows(2).all(|w| self.arc(w[0], w[1]).is_some())
    }

    /// Sum of arc durations along `path`, or `None` if an arc is missing.
    pub fn path_duration(&self, path: &[NodeId]) -> Option<Duration> {
        path.windows(2).map(|w| self.duration(w[0], w[1])).sum()
    }

    pub fn path_labels(&self, path: &[NodeId]) -> Vec<String> {
        path.iter().map(|&id| self.label(id).to_string()).collect()
    }
}

/// Kahn's algorithm with a min-heap so the order is deterministic. On failure
/// returns one directed cycle.
fn topological_order(
    successors: &[Vec<NodeId>],
    predecessors: &[Vec<NodeId>],
) -> Result<Vec<NodeId>, Vec<NodeId>> {
    let n = successors.len();
    let mut indegree: Vec<usize> = predecessors.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(NodeId(v));
        for &w in &successors[v] {
            indegree[w.0] -= 1;
            if indegree[w.0] == 0 {
                ready.push(Reverse(w.0));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover node has a leftover predecessor; walk back until one repeats.
    let mut v = (0..n).find(|&i| indegree[i] > 0).expect("leftover node");
    let mut visited_at = vec![usize::MAX; n];
    let mut walk = Vec::new();
    while visited_at[v] == usize::MAX {
        visited_at[v] = walk.len();
        walk.push(NodeId(v));
        v = predecessors[v]
            .iter()
            .find(|p| indegree[p.0] > 0)
            .expect("leftover node has leftover predecessor")
            .0;
    }
    let mut cycle: Vec<NodeId> = walk[visited_at[v]..].to_vec();
    cycle.reverse();
    cycle.push(cycle[0]);
    Err(cycle)
}

/// Compares labels with embedded digit runs numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut x = a.as_bytes();
    let mut y = b.as_bytes();
    loop {
        match (x.first(), y.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let xl = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let yl = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let xd = trim_zeros(&x[..xl]);
                let yd = trim_zeros(&y[..yl]);
                let ord = xd.len().cmp(&yd.len()).then_with(|| xd.cmp(yd));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[xl..];
                y = &y[yl..];
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(d);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let start = digits
        .iter()
        .position(|&d| d != b'0')
        .unwrap_or(digits.len());
    &digits[start..]
}
