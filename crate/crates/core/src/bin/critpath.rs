use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use critpath::exact::{enumerate_paths, DEFAULT_MAX_PATHS};
use critpath::format::{parse_project, write_project, Mode, ProjectDocument};
use critpath::ga::GaConfig;
use critpath::network::build_network;
use critpath::random::{random_project, RandomProjectParams};
use critpath::run::{
    benchmark, run, EngineChoice, OutputFormat, PopulationSize, ProjectInput, RunSpec,
};

#[derive(Parser)]
#[command(
    name = "critpath",
    version,
    about = "Critical path analysis for CPM/PERT networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one project file.
    Run(RunArgs),
    /// Validate a project file and print warnings.
    Validate { file: PathBuf },
    /// List every source-to-sink path of a project file with its duration.
    Paths {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_PATHS)]
        max_paths: usize,
    },
    /// Compare the exact engine and the GA on project files or random projects.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Exact,
    Ga,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    #[value(alias = "json")]
    Structured,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cpm,
    Pert,
}

#[derive(Args, Clone)]
struct GaArgs {
    /// Population size, or `auto` for twice the path count clamped to 8..=64.
    #[arg(long, default_value = "auto", value_parser = parse_pop_size)]
    pop_size: PopulationSize,
    #[arg(long, default_value_t = 0.25)]
    elitism_rate: f64,
    #[arg(long, default_value_t = 20)]
    generations: usize,
    #[arg(long, default_value_t = 2)]
    iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GaArgs {
    fn config(&self) -> GaConfig {
        GaConfig {
            population_size: match self.pop_size {
                PopulationSize::Fixed(n) => n,
                PopulationSize::Auto => GaConfig::default().population_size,
            },
            elitism_rate: self.elitism_rate,
            generations: self.generations,
            iterations: self.iterations,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    /// Require the document to declare this mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value = "exact")]
    engine: EngineArg,
    #[command(flatten)]
    ga: GaArgs,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Verify results against exhaustive path enumeration.
    #[arg(long)]
    oracle_check: bool,
    /// Cap on enumerated paths for the oracle check.
    #[arg(long, default_value_t = DEFAULT_MAX_PATHS)]
    max_paths: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Project files; random projects are generated when none are given.
    files: Vec<PathBuf>,
    #[arg(long, default_value_t = 5)]
    projects: usize,
    /// Seed for the random project generator.
    #[arg(long, default_value_t = 1)]
    project_seed: u64,
    #[arg(long, default_value_t = 9)]
    min_nodes: usize,
    #[arg(long, default_value_t = 14)]
    max_nodes: usize,
    #[command(flatten)]
    ga: GaArgs,
    /// Write the generated projects into this directory.
    #[arg(long)]
    save_projects: Option<PathBuf>,
}

fn parse_pop_size(s: &str) -> Result<PopulationSize, String> {
    if s == "auto" {
        return Ok(PopulationSize::Auto);
    }
    s.parse::<usize>()
        .map(PopulationSize::Fixed)
        .map_err(|_| format!("expected a count or `auto`, got `{s}`"))
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    // Exit status 2 is reserved for oracle disagreement, so usage errors
    // report as 1 instead of clap's default.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Validate { file } => cmd_validate(file),
        Command::Paths { file, max_paths } => cmd_paths(file, max_paths),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let spec = RunSpec {
        input: ProjectInput::Path(args.file),
        mode: args.mode.map(|m| match m {
            ModeArg::Cpm => Mode::Cpm,
            ModeArg::Pert => Mode::Pert,
        }),
        engine: match args.engine {
            EngineArg::Exact => EngineChoice::Exact,
            EngineArg::Ga => EngineChoice::Ga,
            EngineArg::Both => EngineChoice::Both,
        },
        population: args.ga.pop_size,
        ga: args.ga.config(),
        format: match args.format {
            FormatArg::Table => OutputFormat::Table,
            FormatArg::Structured => OutputFormat::Structured,
            FormatArg::Dot => OutputFormat::Dot,
        },
        oracle_check: args.oracle_check,
        max_paths: args.max_paths,
    };
    let outcome = match run(&spec) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return exit(e.exit_code());
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    match outcome.render(spec.format) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("{e}");
            return exit(e.exit_code());
        }
    }
    if let Some(msg) = outcome.oracle_message() {
        eprintln!("{msg}");
    }
    exit(outcome.exit_code())
}

fn load(file: &PathBuf) -> Result<ProjectDocument, ExitCode> {
    let text = std::fs::read_to_string(file).map_err(|e| {
        eprintln!("cannot read {}: {e}", file.display());
        exit(1)
    })?;
    parse_project(&text).map_err(|e| {
        eprintln!("{e}");
        exit(1)
    })
}

fn cmd_validate(file: PathBuf) -> ExitCode {
    let doc = match load(&file) {
        Ok(d) => d,
        Err(code) => return code,
    };
    match build_network(&doc.activities) {
        Ok(net) => {
            println!(
                "ok: {} mode, {} nodes, {} activities",
                doc.mode,
                net.node_count(),
                doc.activities.len()
            );
            for w in net.warnings() {
                println!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
        Err(report) => {
            eprintln!("{report}");
            exit(1)
        }
    }
}

fn cmd_paths(file: PathBuf, max_paths: usize) -> ExitCode {
    let doc = match load(&file) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let net = match build_network(&doc.activities) {
        Ok(n) => n,
        Err(report) => {
            eprintln!("{report}");
            return exit(1);
        }
    };
    match enumerate_paths(&net, max_paths) {
        Ok(paths) => {
            for p in &paths {
                println!(
                    "{:>10}  {}",
                    p.duration.to_fixed2(),
                    net.path_labels(&p.nodes).join("-")
                );
            }
            println!(
                "{} paths from {} to {}",
                paths.len(),
                net.label(net.source()),
                net.label(net.sink())
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            exit(3)
        }
    }
}

fn cmd_bench(args: BenchArgs) -> ExitCode {
    let mut inputs: Vec<ProjectInput> =
        args.files.iter().cloned().map(ProjectInput::Path).collect();
    if inputs.is_empty() {
        let params = RandomProjectParams {
            min_nodes: args.min_nodes,
            max_nodes: args.max_nodes,
            ..RandomProjectParams::default()
        };
        for i in 0..args.projects {
            let doc = ProjectDocument {
                mode: Mode::Cpm,
                activities: random_project(&params, args.project_seed.wrapping_add(i as u64)),
            };
            let text = write_project(&doc).expect("generated names are bare tokens");
            let label = format!("P{}", i + 1);
            if let Some(dir) = &args.save_projects {
                let path = dir.join(format!("{label}.critpath"));
                if let Err(e) =
                    std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, &text))
                {
                    eprintln!("cannot write {}: {e}", path.display());
                    return exit(1);
                }
            }
            inputs.push(ProjectInput::Text { label, text });
        }
    }
    let specs: Vec<RunSpec> = inputs
        .into_iter()
        .map(|input| RunSpec {
            engine: EngineChoice::Both,
            population: args.ga.pop_size,
            ga: args.ga.config(),
            ..RunSpec::new(input)
        })
        .collect();
    let report = match benchmark(&specs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return exit(1);
        }
    };
    print!("{}", report.summary());
    if report.entries.iter().any(|e| e.outcome.is_err()) {
        exit(1)
    } else if !report.all_agree() {
        exit(2)
    } else {
        ExitCode::SUCCESS
    }
}
