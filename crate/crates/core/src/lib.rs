//! Critical path analysis for activity-on-arc project networks.
//!
//! Networks come from CPM durations or PERT three-point estimates and are
//! solved two ways: an exact longest-path engine ([`exact`]) and a
//! path-encoded genetic algorithm ([`ga`]). Exhaustive path enumeration is
//! available as an oracle for both.
//!
//! ```
//! use critpath::{build_network, critical_path_exact, parse_project};
//!
//! let doc = parse_project("critpath v1 cpm\nA 1 2 3\nB 2 3 4\nC 1 3 5\n").unwrap();
//! let network = build_network(&doc.activities).unwrap();
//! let result = critical_path_exact(&network);
//! assert_eq!(result.critical_activities, ["A", "B"]);
//! ```

pub mod duration;
pub mod exact;
pub mod examples;
pub mod format;
pub mod ga;
pub mod network;
pub mod random;
pub mod report;
pub mod run;
pub mod schedule;

pub use duration::Duration;
pub use exact::{
    backward_pass, critical_path_brute_force, critical_path_exact, enumerate_paths, forward_pass,
    EnumeratedPath, EnumerationOverflow, DEFAULT_MAX_PATHS,
};
pub use format::{parse_project, write_project, Mode, ParseError, ProjectDocument};
pub use ga::{evolve, extract_result, Chromosome, GaConfig, GaError, GaResult};
pub use network::{
    build_network, expected_duration, Activity, DurationSpec, NodeId, ProjectNetwork,
    ValidationReport,
};
pub use schedule::{Engine, NodeSchedule, ScheduleResult};
