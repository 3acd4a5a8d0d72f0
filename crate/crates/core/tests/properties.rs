use proptest::prelude::*;

use critpath::exact::{count_paths, enumerate_paths, DEFAULT_MAX_PATHS};
use critpath::ga::GaConfig;
use critpath::random::{random_project, RandomProjectParams};
use critpath::{
    build_network, critical_path_brute_force, critical_path_exact, evolve, expected_duration,
    extract_result, parse_project, write_project, Activity, Duration, DurationSpec, Mode,
    ProjectDocument, ProjectNetwork,
};

fn small() -> RandomProjectParams {
    RandomProjectParams {
        min_nodes: 3,
        max_nodes: 10,
        min_arcs: 2,
        max_arcs: 20,
        ..Default::default()
    }
}

fn net(acts: &[Activity]) -> ProjectNetwork {
    build_network(acts).expect("generated projects validate")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn expected_time_lies_between_bounds(a in 0i64..1000, d1 in 0i64..1000, d2 in 0i64..1000) {
        let (a, m, b) = (a, a + d1, a + d1 + d2);
        let t = expected_duration(a.into(), m.into(), b.into()).unwrap();
        prop_assert!(Duration::from_int(a) <= t && t <= Duration::from_int(b));
        prop_assert_eq!(expected_duration(m.into(), m.into(), m.into()).unwrap(), Duration::from_int(m));
    }

    #[test]
    fn misordered_estimates_are_rejected(a in 1i64..100, m in 0i64..100) {
        prop_assume!(a > m);
        prop_assert!(expected_duration(a.into(), m.into(), (a + 1).into()).is_err());
    }

    #[test]
    fn exact_engine_matches_enumeration(seed in any::<u64>()) {
        let n = net(&random_project(&small(), seed));
        let exact = critical_path_exact(&n);
        let brute = critical_path_brute_force(&n, DEFAULT_MAX_PATHS).unwrap();
        prop_assert_eq!(exact.project_duration, brute.project_duration);

        let norm = n.normalize_terminals();
        let ids = exact.path_ids(&norm).unwrap();
        prop_assert!(norm.is_complete_path(&ids));
        prop_assert_eq!(norm.path_duration(&ids), Some(exact.project_duration));
    }

    #[test]
    fn slack_is_nonnegative_and_zero_on_the_critical_path(seed in any::<u64>()) {
        let n = net(&random_project(&small(), seed));
        let r = critical_path_exact(&n);
        for s in &r.schedules {
            prop_assert!(!s.slack.is_negative());
            prop_assert!(s.earliest <= s.latest);
            if r.critical_path.contains(&s.node) {
                prop_assert!(s.slack.is_zero(), "{} has slack {}", s.node, s.slack);
            }
        }
    }

    #[test]
    fn normalization_is_idempotent_with_single_terminals(seed in any::<u64>()) {
        let n = net(&random_project(&small(), seed));
        let once = n.normalize_terminals();
        prop_assert_eq!(once.sources().len(), 1);
        prop_assert_eq!(once.sinks().len(), 1);
        prop_assert_eq!(once.normalize_terminals(), once.clone());
        prop_assert_eq!(once.activities(), n.activities());
        // Virtual terminals only join paths up; none are lost.
        let before = enumerate_paths(&n, DEFAULT_MAX_PATHS).unwrap().len() as u128;
        prop_assert!(count_paths(&once) >= before);
    }

    #[test]
    fn matrix_mirrors_the_activity_list(seed in any::<u64>()) {
        let acts = random_project(&small(), seed);
        let n = net(&acts);
        for a in &acts {
            prop_assert_eq!(n.adjacency(&a.from, &a.to).unwrap(), Some(a.duration.effective().unwrap()));
            prop_assert_eq!(n.adjacency(&a.to, &a.from).unwrap(), None);
        }
        let present = n.matrix().iter().flatten().filter(|c| c.is_some()).count();
        prop_assert_eq!(present, acts.len());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), pert in any::<bool>()) {
        let mut acts = random_project(&small(), seed);
        if pert {
            for (i, a) in acts.iter_mut().enumerate().filter(|(i, _)| i % 2 == 0) {
                let m = a.duration.effective().unwrap().ratio().to_integer();
                a.duration = DurationSpec::estimate(m / 2, m, m + i as i64);
            }
        }
        let doc = ProjectDocument { mode: if pert { Mode::Pert } else { Mode::Cpm }, activities: acts };
        let text = write_project(&doc).unwrap();
        prop_assert_eq!(parse_project(&text).unwrap(), doc);
    }

    #[test]
    fn lengthening_an_activity_never_shortens_the_project(seed in any::<u64>(), pick in any::<usize>(), delta in 1i64..50) {
        let acts = random_project(&small(), seed);
        let base = critical_path_exact(&net(&acts));
        let k = pick % acts.len();
        let mut longer = acts.clone();
        let d = longer[k].duration.effective().unwrap();
        longer[k].duration = DurationSpec::Fixed(d + Duration::from_int(delta));
        let after = critical_path_exact(&net(&longer)).project_duration;
        prop_assert!(after >= base.project_duration);
        if base.critical_activities.contains(&acts[k].name) {
            prop_assert_eq!(after, base.project_duration + Duration::from_int(delta));
        }
    }

    #[test]
    fn ga_returns_a_valid_path_deterministically(seed in any::<u64>(), ga_seed in any::<u64>()) {
        let n = net(&random_project(&small(), seed));
        let config = GaConfig { population_size: 8, generations: 5, iterations: 1, seed: ga_seed, ..GaConfig::default() };
        let ga = evolve(&n, &config).unwrap();
        let norm = n.normalize_terminals();
        prop_assert!(norm.is_complete_path(ga.best.genes()));
        prop_assert_eq!(norm.path_duration(ga.best.genes()), Some(ga.best.fitness()));
        prop_assert!(ga.best.fitness() <= critical_path_exact(&n).project_duration);
        prop_assert_eq!(ga.history.len(), config.generations + 1);
        prop_assert!(ga.history.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(extract_result(&n, &ga), extract_result(&n, &evolve(&n, &config).unwrap()));
    }
}
