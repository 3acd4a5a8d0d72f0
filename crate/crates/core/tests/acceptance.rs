//! Acceptance suite. Prints one PASS/FAIL line per criterion; run with
//! `cargo test -p critpath --test acceptance -- --nocapture` to see them.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration as Elapsed, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use critpath::exact::count_paths;
use critpath::ga::GaConfig;
use critpath::random::{random_project, RandomProjectParams};
use critpath::run::{
    benchmark, run, EngineChoice, OutputFormat, PopulationSize, ProjectInput, RunSpec,
};
use critpath::{
    build_network, critical_path_exact, enumerate_paths, evolve, expected_duration, extract_result,
    parse_project, Duration, DEFAULT_MAX_PATHS,
};

const EXACT_BUDGET: Elapsed = Elapsed::from_millis(50);
const GA_RUN_BUDGET: Elapsed = Elapsed::from_millis(50);
const RANDOM_SUITE_BUDGET: Elapsed = Elapsed::from_secs(10);
const GA_MIN_HITS_SAMPLE: usize = 99;
const GA_MIN_RATE_RANDOM: f64 = 0.99;
const RANDOM_DAGS: u64 = 500;

const SAMPLE_PATH: [&str; 6] = ["D1", "D3", "D4", "D6", "D8", "D11"];
const SAMPLE_ACTIVITIES: [&str; 5] = ["C", "F", "H", "J", "L"];

fn sample_file() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sample.critpath")
}

fn sample_network() -> critpath::ProjectNetwork {
    let doc = parse_project(&std::fs::read_to_string(sample_file()).unwrap()).unwrap();
    build_network(&doc.activities).unwrap()
}

fn report(id: u32, ok: bool, detail: String) -> bool {
    println!(
        "[{}] criterion {id}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn c1_sample_exact() -> bool {
    let spec = RunSpec::new(ProjectInput::Path(sample_file()));
    let start = Instant::now();
    let outcome = run(&spec).unwrap();
    let elapsed = start.elapsed();
    let r = outcome.exact.as_ref().unwrap();
    let ok = r.project_duration == Duration::from_int(51)
        && r.milestones == SAMPLE_PATH
        && r.critical_activities == SAMPLE_ACTIVITIES
        && elapsed < EXACT_BUDGET;
    report(
        1,
        ok,
        format!(
            "sample exact duration {} path {} activities {} in {:.3} ms (budget {} ms)",
            r.project_duration.to_fixed2(),
            r.milestones.join("-"),
            r.critical_activities.join("-"),
            elapsed.as_secs_f64() * 1e3,
            EXACT_BUDGET.as_millis()
        ),
    )
}

fn c2_sample_ga() -> bool {
    let net = sample_network();
    let mut misses = Vec::new();
    let mut slowest = Elapsed::ZERO;
    for seed in 0..100u64 {
        let config = GaConfig {
            population_size: 8,
            elitism_rate: 0.25,
            generations: 10,
            iterations: 1,
            seed,
        };
        let start = Instant::now();
        let ga = evolve(&net, &config).unwrap();
        slowest = slowest.max(start.elapsed());
        let r = extract_result(&net, &ga);
        if r.project_duration != Duration::from_int(51) || r.milestones != SAMPLE_PATH {
            misses.push(format!(
                "seed {seed} -> {} {}",
                r.project_duration.to_fixed2(),
                r.milestones.join("-")
            ));
        }
    }
    let hits = 100 - misses.len();
    let ok = hits >= GA_MIN_HITS_SAMPLE && slowest < GA_RUN_BUDGET;
    let mut detail = format!(
        "sample GA (pop 8, elitism 0.25, 10 generations, 1 iteration) optimal on {hits}/100 seeds \
         (need {GA_MIN_HITS_SAMPLE}), slowest run {:.3} ms (budget {} ms)",
        slowest.as_secs_f64() * 1e3,
        GA_RUN_BUDGET.as_millis()
    );
    if !misses.is_empty() {
        detail.push_str(&format!("; misses: {}", misses.join(", ")));
    }
    report(2, ok, detail)
}

fn c3_sample_paths() -> bool {
    let net = sample_network();
    let paths = enumerate_paths(&net, DEFAULT_MAX_PATHS).unwrap();
    let mut sums: Vec<i64> = paths
        .iter()
        .map(|p| p.duration.ratio().to_integer())
        .collect();
    sums.sort_unstable();
    let ok = sums == [20, 22, 28, 31, 41, 42, 50, 51];
    report(
        3,
        ok,
        format!(
            "sample enumerates {} paths with durations {sums:?}",
            paths.len()
        ),
    )
}

fn c4_pert_bounds() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    for _ in 0..1000 {
        let mut v = [0i64; 3].map(|_| rng.random_range(0..=10_000));
        v.sort_unstable();
        let [a, m, b] = v;
        let t = expected_duration(a.into(), m.into(), b.into()).unwrap();
        let same = expected_duration(m.into(), m.into(), m.into()).unwrap();
        if t < Duration::from_int(a) || t > Duration::from_int(b) || same != Duration::from_int(m) {
            bad.push(format!("({a}, {m}, {b}) -> {t}"));
        }
    }
    report(
        4,
        bad.is_empty(),
        format!(
            "1000 random estimates satisfy a <= T <= b and T(m,m,m) = m; violations: {}",
            bad.len()
        ),
    )
}

fn c5_and_c6_random() -> (bool, bool) {
    let params = RandomProjectParams::default();
    let start = Instant::now();
    let mut exact_bad = Vec::new();
    let mut ga_misses = Vec::new();
    let mut exact_time = Elapsed::ZERO;
    for seed in 0..RANDOM_DAGS {
        let net = build_network(&random_project(&params, seed)).unwrap();
        let t0 = Instant::now();
        let exact = critical_path_exact(&net);
        exact_time += t0.elapsed();
        let best = enumerate_paths(&net.normalize_terminals(), DEFAULT_MAX_PATHS)
            .unwrap()
            .into_iter()
            .map(|p| p.duration)
            .max()
            .unwrap();
        if exact.project_duration != best {
            exact_bad.push(format!(
                "seed {seed}: exact {} vs {}",
                exact.project_duration, best
            ));
        }

        let paths = count_paths(&net.normalize_terminals());
        let config = GaConfig {
            population_size: paths.saturating_mul(2).min(64) as usize,
            elitism_rate: 0.25,
            generations: 20,
            iterations: 2,
            seed,
        };
        let ga = extract_result(&net, &evolve(&net, &config).unwrap());
        if ga.project_duration != best {
            ga_misses.push(format!(
                "seed {seed}: ga {} vs {}",
                ga.project_duration, best
            ));
        }
    }
    let suite = start.elapsed();

    let ok5 = exact_bad.is_empty() && suite < RANDOM_SUITE_BUDGET;
    let mut d5 = format!(
        "{RANDOM_DAGS} random DAGs, exact equals enumeration on {}/{RANDOM_DAGS} \
         (exact total {:.3} ms, suite {:.2} s, budget {} s)",
        RANDOM_DAGS as usize - exact_bad.len(),
        exact_time.as_secs_f64() * 1e3,
        suite.as_secs_f64(),
        RANDOM_SUITE_BUDGET.as_secs()
    );
    if !exact_bad.is_empty() {
        d5.push_str(&format!("; mismatches: {}", exact_bad.join(", ")));
    }

    let hits = RANDOM_DAGS as usize - ga_misses.len();
    let rate = hits as f64 / RANDOM_DAGS as f64;
    let ok6 = rate >= GA_MIN_RATE_RANDOM;
    let mut d6 = format!(
        "GA (pop min(64, 2 x paths), elitism 0.25, 20 generations, 2 iterations, seed = DAG seed) \
         optimal on {hits}/{RANDOM_DAGS} = {:.1}% (need {:.0}%)",
        rate * 100.0,
        GA_MIN_RATE_RANDOM * 100.0
    );
    if !ga_misses.is_empty() {
        d6.push_str(&format!("; misses: {}", ga_misses.join(", ")));
    }
    (report(5, ok5, d5), report(6, ok6, d6))
}

fn c7_reproducible_output() -> bool {
    let mut spec = RunSpec::new(ProjectInput::Path(sample_file()));
    spec.engine = EngineChoice::Both;
    spec.population = PopulationSize::Fixed(8);
    spec.ga.seed = 17;
    let render = |format| run(&spec).unwrap().render(format).unwrap();
    let in_process = render(OutputFormat::Structured) == render(OutputFormat::Structured)
        && render(OutputFormat::Dot) == render(OutputFormat::Dot);

    let cli = |format: &str| {
        Command::new(env!("CARGO_BIN_EXE_critpath"))
            .args([
                "run",
                sample_file().to_str().unwrap(),
                "--engine",
                "both",
                "--seed",
                "17",
                "--format",
                format,
            ])
            .output()
            .unwrap()
            .stdout
    };
    let structured = cli("structured");
    let dot = cli("dot");
    let across_processes = structured == cli("structured")
        && dot == cli("dot")
        && !structured.is_empty()
        && !dot.is_empty();
    report(
        7,
        in_process && across_processes,
        format!(
            "structured and DOT output byte-identical across repeated runs \
             (in process: {in_process}, separate processes: {across_processes})"
        ),
    )
}

fn c8_benchmark_table() -> bool {
    let params = RandomProjectParams {
        min_nodes: 9,
        max_nodes: 14,
        ..Default::default()
    };
    let specs: Vec<RunSpec> = (0..5u64)
        .map(|i| {
            let doc = critpath::ProjectDocument {
                mode: critpath::Mode::Cpm,
                activities: random_project(&params, 1 + i),
            };
            let mut spec = RunSpec::new(ProjectInput::Text {
                label: format!("P{}", i + 1),
                text: critpath::write_project(&doc).unwrap(),
            });
            spec.engine = EngineChoice::Both;
            spec
        })
        .collect();
    let report_ = benchmark(&specs).unwrap();
    let summary = report_.summary();
    let lines: Vec<&str> = summary.lines().collect();
    let header_ok = [
        "Project",
        "Nodes",
        "Acts",
        "Exact",
        "GA",
        "Agree",
        "Critical Path",
        "Critical Activities",
    ]
    .iter()
    .all(|h| lines[0].contains(h));
    let rows_ok =
        report_.records().count() == 5 && report_.records().all(|r| (9..=14).contains(&r.nodes));
    let ok = header_ok && rows_ok && lines.len() == 7 && lines[6].starts_with("Total: 5 projects");
    println!("{summary}");
    report(
        8,
        ok,
        format!(
            "benchmark table over 5 random 9-14 node projects: {}",
            lines.last().copied().unwrap_or("")
        ),
    )
}

#[test]
fn acceptance() {
    let mut results = vec![
        c1_sample_exact(),
        c2_sample_ga(),
        c3_sample_paths(),
        c4_pert_bounds(),
    ];
    let (c5, c6) = c5_and_c6_random();
    results.extend([c5, c6, c7_reproducible_output(), c8_benchmark_table()]);
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
