//! Engine orchestration, the oracle check, and the exact-vs-GA benchmark.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::duration::Duration;
use crate::exact::{
    count_paths, critical_path_brute_force, critical_path_exact, EnumerationOverflow,
    DEFAULT_MAX_PATHS,
};
use crate::format::{parse_project, Mode, ParseError};
use crate::ga::{evolve, extract_result, GaConfig, GaError, GaResult};
use crate::network::{build_network, ProjectNetwork, ValidationReport};
use crate::report::{emit_dot, emit_table, ReportError};
use crate::schedule::{NodeSchedule, ScheduleResult};

pub const STRUCTURED_FORMAT: &str = "critpath-result v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineChoice {
    Exact,
    Ga,
    Both,
}

impl EngineChoice {
    fn runs_exact(self) -> bool {
        matches!(self, EngineChoice::Exact | EngineChoice::Both)
    }

    fn runs_ga(self) -> bool {
        matches!(self, EngineChoice::Ga | EngineChoice::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    Table,
    Structured,
    Dot,
}

/// GA population size: fixed, or sized from the network's path count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PopulationSize {
    Fixed(usize),
    /// `2 * paths`, clamped to `[8, 64]`.
    Auto,
}

impl PopulationSize {
    pub fn resolve(self, network: &ProjectNetwork) -> usize {
        match self {
            PopulationSize::Fixed(n) => n,
            PopulationSize::Auto => {
                let paths = count_paths(&network.normalize_terminals());
                paths.saturating_mul(2).clamp(8, 64) as usize
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectInput {
    Path(PathBuf),
    Text { label: String, text: String },
}

impl ProjectInput {
    pub fn label(&self) -> String {
        match self {
            ProjectInput::Path(p) => p.display().to_string(),
            ProjectInput::Text { label, .. } => label.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub input: ProjectInput,
    /// Expected document mode; `None` takes the mode from the file header.
    pub mode: Option<Mode>,
    pub engine: EngineChoice,
    pub population: PopulationSize,
    /// GA parameters; `population_size` is overwritten by `population`.
    pub ga: GaConfig,
    pub format: OutputFormat,
    pub oracle_check: bool,
    pub max_paths: usize,
}

impl RunSpec {
    pub fn new(input: ProjectInput) -> Self {
        RunSpec {
            input,
            mode: None,
            engine: EngineChoice::Exact,
            population: PopulationSize::Auto,
            ga: GaConfig::default(),
            format: OutputFormat::Table,
            oracle_check: false,
            max_paths: DEFAULT_MAX_PATHS,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("document mode is {found}, but {expected} was requested")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("{0}")]
    Validation(ValidationReport),
    #[error("{0}")]
    Ga(#[from] GaError),
    #[error("{0}")]
    Report(#[from] ReportError),
}

impl RunError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum OracleOutcome {
    Agreed {
        paths: usize,
        duration: Duration,
    },
    Disagreed {
        paths: usize,
        duration: Duration,
        mismatches: Vec<OracleMismatch>,
    },
    Overflow {
        bound: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleMismatch {
    pub engine: String,
    pub found: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRecord {
    pub project: String,
    pub nodes: usize,
    pub activities: usize,
    pub exact_duration: Duration,
    pub ga_duration: Duration,
    pub critical_path: Vec<String>,
    pub critical_activities: Vec<String>,
    pub agreement: bool,
    pub exact_seconds: f64,
    pub ga_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub label: String,
    pub mode: Mode,
    /// Warnings from validating the network before terminal normalization.
    pub warnings: Vec<String>,
    /// Terminal-normalized network the engines ran on.
    pub network: ProjectNetwork,
    pub exact: Option<ScheduleResult>,
    pub ga: Option<(ScheduleResult, GaResult, GaConfig)>,
    pub oracle: Option<OracleOutcome>,
    pub benchmark: Option<BenchmarkRecord>,
}

impl RunOutcome {
    pub fn results(&self) -> Vec<&ScheduleResult> {
        self.exact
            .iter()
            .chain(self.ga.as_ref().map(|g| &g.0))
            .collect()
    }

    /// 0 success, 2 oracle disagreement, 3 enumeration overflow.
    pub fn exit_code(&self) -> i32 {
        match self.oracle {
            None | Some(OracleOutcome::Agreed { .. }) => 0,
            Some(OracleOutcome::Disagreed { .. }) => 2,
            Some(OracleOutcome::Overflow { .. }) => 3,
        }
    }

    /// Human-readable problem with the oracle check, if any.
    pub fn oracle_message(&self) -> Option<String> {
        match &self.oracle {
            Some(OracleOutcome::Disagreed {
                duration,
                mismatches,
                ..
            }) => Some(
                mismatches
                    .iter()
                    .map(|m| {
                        format!(
                            "oracle disagreement: {} engine found {}, enumeration found {}",
                            m.engine,
                            m.found.to_fixed2(),
                            duration.to_fixed2()
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            ),
            Some(OracleOutcome::Overflow { bound }) => Some(format!(
                "oracle check skipped: path enumeration exceeded the bound of {bound} paths"
            )),
            _ => None,
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, RunError> {
        match format {
            OutputFormat::Table => {
                let mut out = String::new();
                for (i, r) in self.results().into_iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&emit_table(&self.network, r));
                }
                if let Some(b) = &self.benchmark {
                    let _ = writeln!(
                        out,
                        "\nAgreement: {}  (exact {:.6} s, ga {:.6} s)",
                        if b.agreement { "yes" } else { "no" },
                        b.exact_seconds,
                        b.ga_seconds
                    );
                }
                Ok(out)
            }
            OutputFormat::Dot => {
                let primary = self.results()[0];
                Ok(emit_dot(&self.network, primary)?)
            }
            OutputFormat::Structured => Ok(self.to_structured()),
        }
    }

    /// Machine-readable document. Wall-clock times are left out so equal
    /// inputs give byte-identical output.
    pub fn to_structured(&self) -> String {
        let doc = StructuredDoc {
            format: STRUCTURED_FORMAT,
            project: &self.label,
            mode: self.mode,
            warnings: &self.warnings,
            results: self
                .results()
                .into_iter()
                .map(StructuredResult::from)
                .collect(),
            ga: self.ga.as_ref().map(|(_, ga, cfg)| StructuredGa {
                seed: ga.seed_used,
                generator: ga.generator,
                config: cfg,
                best_iteration: ga.best_iteration,
                history: &ga.history,
                converged_to_exact: ga.converged_to_exact,
            }),
            agreement: self.benchmark.as_ref().map(|b| b.agreement),
            oracle: self.oracle.as_ref(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

#[derive(Serialize)]
struct StructuredDoc<'a> {
    format: &'static str,
    project: &'a str,
    mode: Mode,
    warnings: &'a [String],
    results: Vec<StructuredResult<'a>>,
    ga: Option<StructuredGa<'a>>,
    agreement: Option<bool>,
    oracle: Option<&'a OracleOutcome>,
}

#[derive(Serialize)]
struct StructuredResult<'a> {
    engine: crate::schedule::Engine,
    project_duration: Duration,
    project_duration_exact: String,
    critical_path: &'a [String],
    milestones: &'a [String],
    critical_activities: &'a [String],
    schedules: &'a [NodeSchedule],
}

impl<'a> From<&'a ScheduleResult> for StructuredResult<'a> {
    fn from(r: &'a ScheduleResult) -> Self {
        StructuredResult {
            engine: r.engine,
            project_duration: r.project_duration,
            project_duration_exact: r.project_duration.to_literal(),
            critical_path: &r.critical_path,
            milestones: &r.milestones,
            critical_activities: &r.critical_activities,
            schedules: &r.schedules,
        }
    }
}

#[derive(Serialize)]
struct StructuredGa<'a> {
    seed: u64,
    generator: &'static str,
    config: &'a GaConfig,
    best_iteration: usize,
    history: &'a [Duration],
    converged_to_exact: Option<bool>,
}

fn load(spec: &RunSpec) -> Result<(Mode, Vec<String>, ProjectNetwork), RunError> {
    let text = match &spec.input {
        ProjectInput::Path(p) => std::fs::read_to_string(p).map_err(|source| RunError::Io {
            path: p.display().to_string(),
            source,
        })?,
        ProjectInput::Text { text, .. } => text.clone(),
    };
    let doc = parse_project(&text)?;
    if let Some(expected) = spec.mode {
        if expected != doc.mode {
            return Err(RunError::ModeMismatch {
                expected,
                found: doc.mode,
            });
        }
    }
    let raw = build_network(&doc.activities).map_err(RunError::Validation)?;
    let warnings = raw.warnings().iter().map(ToString::to_string).collect();
    Ok((doc.mode, warnings, raw.normalize_terminals()))
}

/// Build the network, run the requested engines and the optional oracle.
pub fn run(spec: &RunSpec) -> Result<RunOutcome, RunError> {
    let (mode, warnings, network) = load(spec)?;

    let mut exact_seconds = 0.0;
    let exact = spec.engine.runs_exact().then(|| {
        let t = Instant::now();
        let r = critical_path_exact(&network);
        exact_seconds = t.elapsed().as_secs_f64();
        r
    });

    let mut ga_seconds = 0.0;
    let ga = if spec.engine.runs_ga() {
        let config = GaConfig {
            population_size: spec.population.resolve(&network),
            ..spec.ga.clone()
        };
        let t = Instant::now();
        let mut ga = evolve(&network, &config)?;
        let result = extract_result(&network, &ga);
        ga_seconds = t.elapsed().as_secs_f64();
        if let Some(e) = &exact {
            ga.converged_to_exact = Some(e.project_duration == result.project_duration);
        }
        Some((result, ga, config))
    } else {
        None
    };

    let mut outcome = RunOutcome {
        label: spec.input.label(),
        mode,
        warnings,
        network,
        exact,
        ga,
        oracle: None,
        benchmark: None,
    };

    if let (Some(e), Some((g, _, _))) = (&outcome.exact, &outcome.ga) {
        outcome.benchmark = Some(BenchmarkRecord {
            project: outcome.label.clone(),
            nodes: outcome
                .network
                .nodes()
                .iter()
                .filter(|n| !n.is_virtual)
                .count(),
            activities: outcome
                .network
                .arcs()
                .iter()
                .filter(|a| !a.is_virtual)
                .count(),
            exact_duration: e.project_duration,
            ga_duration: g.project_duration,
            critical_path: e.milestones.clone(),
            critical_activities: e.critical_activities.clone(),
            agreement: e.project_duration == g.project_duration,
            exact_seconds,
            ga_seconds,
        });
    }

    if spec.oracle_check {
        outcome.oracle = Some(oracle_check(&outcome, spec.max_paths));
    }
    Ok(outcome)
}

fn oracle_check(outcome: &RunOutcome, max_paths: usize) -> OracleOutcome {
    match critical_path_brute_force(&outcome.network, max_paths) {
        Err(EnumerationOverflow { bound }) => OracleOutcome::Overflow { bound },
        Ok(oracle) => {
            let paths = count_paths(&outcome.network) as usize;
            let mismatches: Vec<OracleMismatch> = outcome
                .results()
                .into_iter()
                .filter(|r| r.project_duration != oracle.project_duration)
                .map(|r| OracleMismatch {
                    engine: r.engine.to_string(),
                    found: r.project_duration,
                })
                .collect();
            if mismatches.is_empty() {
                OracleOutcome::Agreed {
                    paths,
                    duration: oracle.project_duration,
                }
            } else {
                OracleOutcome::Disagreed {
                    paths,
                    duration: oracle.project_duration,
                    mismatches,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchmarkError {
    #[error("benchmark needs at least one project")]
    Empty,
    #[error("benchmark project {0} must run both engines")]
    NotBoth(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkEntry {
    pub project: String,
    pub outcome: Result<BenchmarkRecord, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub entries: Vec<BenchmarkEntry>,
}

impl BenchmarkReport {
    pub fn records(&self) -> impl Iterator<Item = &BenchmarkRecord> {
        self.entries.iter().filter_map(|e| e.outcome.as_ref().ok())
    }

    pub fn total_exact_seconds(&self) -> f64 {
        self.records().map(|r| r.exact_seconds).sum()
    }

    pub fn total_ga_seconds(&self) -> f64 {
        self.records().map(|r| r.ga_seconds).sum()
    }

    pub fn all_agree(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.outcome.as_ref().is_ok_and(|r| r.agreement))
    }

    /// One row per project: duration, critical path, critical activities
    /// and per-engine time, followed by totals.
    pub fn summary(&self) -> String {
        let header = [
            "Project",
            "Nodes",
            "Acts",
            "Exact",
            "GA",
            "Agree",
            "Critical Path",
            "Critical Activities",
            "Exact (s)",
            "GA (s)",
        ];
        let mut rows: Vec<Vec<String>> = Vec::new();
        for e in &self.entries {
            rows.push(match &e.outcome {
                Ok(r) => vec![
                    r.project.clone(),
                    r.nodes.to_string(),
                    r.activities.to_string(),
                    r.exact_duration.to_fixed2(),
                    r.ga_duration.to_fixed2(),
                    if r.agreement { "yes" } else { "NO" }.to_string(),
                    r.critical_path.join("-"),
                    r.critical_activities.join("-"),
                    format!("{:.6}", r.exact_seconds),
                    format!("{:.6}", r.ga_seconds),
                ],
                Err(msg) => {
                    let mut row = vec![e.project.clone(), format!("FAILED: {msg}")];
                    row.resize(header.len(), String::new());
                    row
                }
            });
        }
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for row in &rows {
            // a failure message spans the rest of the row
            if row[2].is_empty() {
                continue;
            }
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let fmt_row = |out: &mut String, row: &[&str]| {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        };
        fmt_row(&mut out, &header);
        for row in &rows {
            let refs: Vec<&str> = row.iter().map(String::as_str).collect();
            fmt_row(&mut out, &refs);
        }
        let agreed = self.records().filter(|r| r.agreement).count();
        let _ = writeln!(
            out,
            "Total: {} projects, {} agree, exact {:.6} s, ga {:.6} s",
            self.entries.len(),
            agreed,
            self.total_exact_seconds(),
            self.total_ga_seconds()
        );
        out
    }
}

/// Run every project with both engines. Failures are recorded per project
/// and the harness moves on. Entries keep input order.
pub fn benchmark(specs: &[RunSpec]) -> Result<BenchmarkReport, BenchmarkError> {
    if specs.is_empty() {
        return Err(BenchmarkError::Empty);
    }
    if let Some(s) = specs.iter().find(|s| s.engine != EngineChoice::Both) {
        return Err(BenchmarkError::NotBoth(s.input.label()));
    }
    let entries = specs
        .iter()
        .map(|spec| {
            let outcome = run(spec)
                .map_err(|e| e.to_string())
                .and_then(|o| o.benchmark.ok_or_else(|| "no benchmark record".to_string()));
            BenchmarkEntry {
                project: spec.input.label(),
                outcome,
            }
        })
        .collect();
    Ok(BenchmarkReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{HOUSE_PROJECT, SAMPLE_PROJECT};
    use crate::format::write_project;
    use crate::format::ProjectDocument;
    use crate::random::{random_project, RandomProjectParams};

    fn spec(text: &str, engine: EngineChoice) -> RunSpec {
        RunSpec {
            engine,
            ..RunSpec::new(ProjectInput::Text {
                label: "t".into(),
                text: text.into(),
            })
        }
    }

    #[test]
    fn sample_both_engines_agree() {
        let mut s = spec(SAMPLE_PROJECT, EngineChoice::Both);
        s.oracle_check = true;
        let out = run(&s).unwrap();
        let b = out.benchmark.as_ref().unwrap();
        assert!(b.agreement);
        assert_eq!(b.exact_duration, Duration::from_int(51));
        assert_eq!(b.nodes, 11);
        assert_eq!(b.activities, 15);
        assert_eq!(out.exit_code(), 0);
        assert!(matches!(
            out.oracle,
            Some(OracleOutcome::Agreed { paths: 9, .. })
        ));
        assert_eq!(out.warnings.len(), 2);
        assert!(out
            .warnings
            .iter()
            .any(|w| w == "D10 unreachable from source D1"));
    }

    #[test]
    fn cyclic_input_is_a_validation_error() {
        let err = run(&spec(
            "critpath v1 cpm\nA 1 2 1\nB 2 1 1\n",
            EngineChoice::Exact,
        ))
        .unwrap_err();
        assert!(matches!(err, RunError::Validation(_)));
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("cycle found"));
    }

    #[test]
    fn mode_mismatch() {
        let mut s = spec(SAMPLE_PROJECT, EngineChoice::Exact);
        s.mode = Some(Mode::Pert);
        assert!(matches!(run(&s), Err(RunError::ModeMismatch { .. })));
    }

    #[test]
    fn overflow_exit_code() {
        let mut s = spec(SAMPLE_PROJECT, EngineChoice::Exact);
        s.oracle_check = true;
        s.max_paths = 3;
        let out = run(&s).unwrap();
        assert_eq!(out.exit_code(), 3);
        assert!(out.oracle_message().unwrap().contains('3'));
    }

    #[test]
    fn disagreement_exit_code() {
        let mut s = spec(SAMPLE_PROJECT, EngineChoice::Exact);
        s.oracle_check = true;
        let mut out = run(&s).unwrap();
        out.exact.as_mut().unwrap().project_duration = Duration::from_int(50);
        out.oracle = Some(oracle_check(&out, 100));
        assert_eq!(out.exit_code(), 2);
        let msg = out.oracle_message().unwrap();
        assert!(msg.contains("50.00") && msg.contains("51.00"), "{msg}");
    }

    #[test]
    fn ga_output_is_deterministic() {
        let mut s = spec(SAMPLE_PROJECT, EngineChoice::Ga);
        s.ga.seed = 99;
        let a = run(&s).unwrap();
        let b = run(&s).unwrap();
        assert_eq!(a.to_structured(), b.to_structured());
        assert_eq!(
            a.render(OutputFormat::Dot).unwrap(),
            b.render(OutputFormat::Dot).unwrap()
        );
    }

    #[test]
    fn structured_output_fields() {
        let mut s = spec(HOUSE_PROJECT, EngineChoice::Both);
        s.ga.seed = 5;
        let out = run(&s).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.to_structured()).unwrap();
        assert_eq!(v["format"], STRUCTURED_FORMAT);
        assert_eq!(v["mode"], "pert");
        assert_eq!(v["results"][0]["engine"], "exact");
        assert_eq!(v["results"][1]["engine"], "ga");
        assert_eq!(v["ga"]["seed"], 5);
        assert_eq!(v["ga"]["generator"], "chacha8");
        assert!(v["results"][0]["schedules"].as_array().unwrap().len() >= 7);
        assert!(v["agreement"].is_boolean());
        assert!(v["results"][0]["project_duration_exact"].is_string());
    }

    #[test]
    fn benchmark_records_failures_and_continues() {
        let good = spec(SAMPLE_PROJECT, EngineChoice::Both);
        let bad = spec("critpath v1 cpm\nA 1 2 1\nB 2 1 1\n", EngineChoice::Both);
        let report = benchmark(&[good.clone(), bad, good]).unwrap();
        assert_eq!(report.entries.len(), 3);
        assert!(report.entries[1].outcome.is_err());
        assert_eq!(report.records().count(), 2);
        let total: f64 = report.records().map(|r| r.exact_seconds).sum();
        assert_eq!(report.total_exact_seconds(), total);
        let summary = report.summary();
        assert!(summary.contains("FAILED"));
        assert!(summary
            .lines()
            .last()
            .unwrap()
            .starts_with("Total: 3 projects, 2 agree"));
    }

    #[test]
    fn benchmark_preconditions() {
        assert_eq!(benchmark(&[]), Err(BenchmarkError::Empty));
        let exact_only = spec(SAMPLE_PROJECT, EngineChoice::Exact);
        assert!(matches!(
            benchmark(&[exact_only]),
            Err(BenchmarkError::NotBoth(_))
        ));
    }

    #[test]
    fn benchmark_single_and_random_projects() {
        let report = benchmark(&[spec(SAMPLE_PROJECT, EngineChoice::Both)]).unwrap();
        assert_eq!(report.entries.len(), 1);
        assert_eq!(
            report.records().next().unwrap().exact_duration,
            Duration::from_int(51)
        );

        let params = RandomProjectParams {
            min_nodes: 9,
            max_nodes: 14,
            ..Default::default()
        };
        let specs: Vec<RunSpec> = (0..5)
            .map(|seed| {
                let doc = ProjectDocument {
                    mode: Mode::Cpm,
                    activities: random_project(&params, seed),
                };
                RunSpec {
                    engine: EngineChoice::Both,
                    ..RunSpec::new(ProjectInput::Text {
                        label: format!("P{}", seed + 1),
                        text: write_project(&doc).unwrap(),
                    })
                }
            })
            .collect();
        let report = benchmark(&specs).unwrap();
        assert_eq!(report.records().count(), 5);
        assert!(report.all_agree(), "{}", report.summary());
        for r in report.records() {
            assert!((9..=14).contains(&r.nodes));
        }
    }

    #[test]
    fn auto_population() {
        let net = build_network(&crate::examples::sample_activities()).unwrap();
        assert_eq!(PopulationSize::Auto.resolve(&net), 18);
        assert_eq!(PopulationSize::Fixed(5).resolve(&net), 5);
    }
}
