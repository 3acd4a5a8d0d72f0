//! Bundled example projects.

use crate::format::{parse_project, ProjectDocument};
use crate::network::Activity;

/// The eleven-event example network (`data/sample.critpath`).
pub const SAMPLE_PROJECT: &str = include_str!("../data/sample.critpath");

/// A small PERT project with a dummy arc (`data/house.critpath`).
pub const HOUSE_PROJECT: &str = include_str!("../data/house.critpath");

pub fn sample_document() -> ProjectDocument {
    parse_project(SAMPLE_PROJECT).expect("bundled project parses")
}

pub fn sample_activities() -> Vec<Activity> {
    sample_document().activities
}

pub fn house_document() -> ProjectDocument {
    parse_project(HOUSE_PROJECT).expect("bundled project parses")
}
