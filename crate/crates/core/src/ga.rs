//! Path-encoded genetic algorithm for the critical path.
//!
//! Each gene is a node and each chromosome a complete source-to-sink path.
//! Populations are seeded by random walks, parents breed by single-point
//! crossover cut after the first third of the first parent, and survivors
//! are chosen by elitism alone. There is no mutation operator.
//!
//! Each generation keeps the elites and refills the population with
//! offspring of an elite and a freshly walked partner. Both crossover
//! children of that pair are formed and the fitter one is kept. Breeding
//! elites only with each other collapses the population onto copies of one
//! path within a generation or two.
//!
//! `generations` counts evolution steps inside one run and `iterations`
//! counts independent restarts; the best chromosome over all restarts wins.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::duration::Duration;
use crate::exact::normalized;
use crate::network::{NodeId, ProjectNetwork};
use crate::schedule::{Engine, ScheduleResult};

/// Identifier of the random generator recorded in every [`GaResult`].
pub const GENERATOR: &str = "chacha8";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaError {
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),
    #[error("random walk reached dead end at {node}, which is not the sink")]
    DeadEnd { node: String },
    #[error("invalid chromosome: {0}")]
    InvalidChromosome(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub elitism_rate: f64,
    pub generations: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 32,
            elitism_rate: 0.25,
            generations: 20,
            iterations: 2,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        let bad = |m: &str| Err(GaError::InvalidConfig(m.to_string()));
        if self.population_size < 2 {
            return bad("population_size must be at least 2");
        }
        if !(self.elitism_rate > 0.0 && self.elitism_rate <= 1.0) {
            return bad("elitism_rate must lie in (0, 1]");
        }
        if self.generations < 1 {
            return bad("generations must be at least 1");
        }
        if self.iterations < 1 {
            return bad("iterations must be at least 1");
        }
        Ok(())
    }

    /// `ceil(elitism_rate * population_size)`, at least one.
    pub fn elite_count(&self) -> usize {
        // 1e-9 absorbs representation error such as 0.1 * 30 = 3.0000000000000004
        let raw = (self.elitism_rate * self.population_size as f64 - 1e-9).ceil();
        (raw.max(1.0) as usize).min(self.population_size)
    }
}

/// A complete source-to-sink path with its cached duration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    genes: Vec<NodeId>,
    fitness: Duration,
}

impl Chromosome {
    pub fn new(network: &ProjectNetwork, genes: Vec<NodeId>) -> Result<Self, GaError> {
        let fitness = fitness(network, &genes)?;
        Ok(Chromosome { genes, fitness })
    }

    pub fn genes(&self) -> &[NodeId] {
        &self.genes
    }

    pub fn fitness(&self) -> Duration {
        self.fitness
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }
}

/// Higher fitness first, then the lexicographically smaller gene sequence.
fn rank(a: &Chromosome, b: &Chromosome) -> Ordering {
    b.fitness
        .cmp(&a.fitness)
        .then_with(|| a.genes.cmp(&b.genes))
}

/// Path duration of `genes`, which must be a complete source-to-sink path.
pub fn fitness(network: &ProjectNetwork, genes: &[NodeId]) -> Result<Duration, GaError> {
    if genes.iter().any(|g| g.index() >= network.node_count()) {
        return Err(GaError::InvalidChromosome(
            "gene outside the network".into(),
        ));
    }
    if !network.is_complete_path(genes) {
        return Err(GaError::InvalidChromosome(format!(
            "{} is not a source-to-sink path",
            network.path_labels(genes).join("-")
        )));
    }
    Ok(network.path_duration(genes).expect("complete path"))
}

/// Extend `genes` by uniformly random successor steps until the sink.
fn walk_to_sink<R: Rng>(
    network: &ProjectNetwork,
    mut genes: Vec<NodeId>,
    rng: &mut R,
) -> Result<Chromosome, GaError> {
    let sink = network.sink();
    let mut v = *genes.last().expect("walk starts from a node");
    let mut fitness = network.path_duration(&genes).expect("prefix follows arcs");
    while v != sink {
        let next = network.successors(v);
        if next.is_empty() {
            return Err(GaError::DeadEnd {
                node: network.label(v).to_string(),
            });
        }
        let w = next[rng.random_range(0..next.len())];
        fitness += network.duration(v, w).expect("arc");
        genes.push(w);
        v = w;
    }
    Ok(Chromosome { genes, fitness })
}

pub fn random_walk_path<R: Rng>(
    network: &ProjectNetwork,
    rng: &mut R,
) -> Result<Chromosome, GaError> {
    walk_to_sink(network, vec![network.source()], rng)
}

pub fn init_population<R: Rng>(
    network: &ProjectNetwork,
    config: &GaConfig,
    rng: &mut R,
) -> Result<Vec<Chromosome>, GaError> {
    config.validate()?;
    (0..config.population_size)
        .map(|_| random_walk_path(network, rng))
        .collect()
}

/// Number of genes kept from the first parent: one third of its length, rounded up.
pub fn cut_point(len: usize) -> usize {
    len.div_ceil(3)
}

/// Genes of `chromosome` kept by [`crossover`]. Virtual terminals do not
/// count toward the length; a leading virtual START is always kept.
pub fn crossover_cut(network: &ProjectNetwork, chromosome: &Chromosome) -> usize {
    let lead = chromosome
        .genes
        .iter()
        .take_while(|&&g| network.is_virtual(g))
        .count();
    let real = chromosome
        .genes
        .iter()
        .filter(|&&g| !network.is_virtual(g))
        .count();
    (lead + cut_point(real)).min(chromosome.len() - 1)
}

/// Single-point crossover. The child keeps the first [`crossover_cut`] genes
/// of `parent1` and splices on the earliest suffix of `parent2` that attaches
/// by an arc and shares no node with that prefix. Without such a suffix the
/// child is completed by a random walk from the last kept gene.
pub fn crossover<R: Rng>(
    parent1: &Chromosome,
    parent2: &Chromosome,
    network: &ProjectNetwork,
    rng: &mut R,
) -> Chromosome {
    let cut = crossover_cut(network, parent1);
    let prefix = &parent1.genes[..cut];
    let last = prefix[cut - 1];
    let attach = parent2.genes.iter().enumerate().position(|(k, &g)| {
        network.arc(last, g).is_some() && parent2.genes[k..].iter().all(|s| !prefix.contains(s))
    });
    let mut genes = prefix.to_vec();
    match attach {
        Some(k) => {
            genes.extend_from_slice(&parent2.genes[k..]);
            let fitness = network
                .path_duration(&genes)
                .expect("spliced path follows arcs");
            Chromosome { genes, fitness }
        }
        None => walk_to_sink(network, genes, rng)
            .expect("repair walk on a normalized network reaches the sink"),
    }
}

/// Both children of `a` and `b` (`a` first, then `b` first); the fitter one
/// is returned, ties going to the smaller gene sequence.
pub fn breed<R: Rng>(
    a: &Chromosome,
    b: &Chromosome,
    network: &ProjectNetwork,
    rng: &mut R,
) -> Chromosome {
    let first = crossover(a, b, network, rng);
    let second = crossover(b, a, network, rng);
    if rank(&second, &first) == Ordering::Less {
        second
    } else {
        first
    }
}

/// The best `config.elite_count()` chromosomes, best first.
pub fn select_elites(population: &[Chromosome], config: &GaConfig) -> Vec<Chromosome> {
    let mut sorted = population.to_vec();
    sorted.sort_by(rank);
    sorted.truncate(config.elite_count().min(population.len()).max(1));
    sorted
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaResult {
    pub best: Chromosome,
    /// Best fitness of the initial population, then after each generation,
    /// for the restart that produced `best`.
    pub history: Vec<Duration>,
    pub best_iteration: usize,
    pub seed_used: u64,
    pub generator: &'static str,
    pub converged_to_exact: Option<bool>,
}

/// Random stream for restart `iteration`: same key, distinct stream.
pub fn iteration_rng(seed: u64, iteration: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration as u64);
    rng
}

fn run_once<R: Rng>(
    network: &ProjectNetwork,
    config: &GaConfig,
    rng: &mut R,
) -> Result<(Chromosome, Vec<Duration>), GaError> {
    let mut population = init_population(network, config, rng)?;
    let mut best = population
        .iter()
        .min_by(|a, b| rank(a, b))
        .expect("nonempty")
        .clone();
    let mut history = vec![best.fitness];
    for _ in 0..config.generations {
        let elites = select_elites(&population, config);
        let mut next = elites.clone();
        while next.len() < config.population_size {
            let elite = &elites[rng.random_range(0..elites.len())];
            let partner = random_walk_path(network, rng)?;
            next.push(breed(elite, &partner, network, rng));
        }
        population = next;
        let gen_best = population
            .iter()
            .min_by(|a, b| rank(a, b))
            .expect("nonempty");
        if rank(gen_best, &best) == Ordering::Less {
            best = gen_best.clone();
        }
        history.push(best.fitness);
    }
    Ok((best, history))
}

/// Run `config.iterations` independent restarts on the terminal-normalized
/// network and keep the best chromosome. Genes index the normalized network.
pub fn evolve(network: &ProjectNetwork, config: &GaConfig) -> Result<GaResult, GaError> {
    config.validate()?;
    let network = normalized(network);
    let mut result: Option<GaResult> = None;
    for iteration in 0..config.iterations {
        let mut rng = iteration_rng(config.seed, iteration);
        let (best, history) = run_once(&network, config, &mut rng)?;
        let better = result
            .as_ref()
            .is_none_or(|r| rank(&best, &r.best) == Ordering::Less);
        if better {
            result = Some(GaResult {
                best,
                history,
                best_iteration: iteration,
                seed_used: config.seed,
                generator: GENERATOR,
                converged_to_exact: None,
            });
        }
    }
    Ok(result.expect("at least one iteration"))
}

/// Map the GA's best chromosome to a schedule result. Per-node schedules
/// are left empty; the GA does not compute event times.
pub fn extract_result(network: &ProjectNetwork, ga: &GaResult) -> ScheduleResult {
    let network = normalized(network);
    ScheduleResult::from_path(&network, &ga.best.genes, Engine::Ga, Vec::new())
}
