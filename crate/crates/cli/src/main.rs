use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hyperlap::{ExperimentConfig, Method, PropagationConfig};
use hyperlap_cli::inspect::inspect;
use hyperlap_cli::io::{render_annotations, render_expression};
use hyperlap_cli::{
    build_artifacts, generate_synthetic, load_expression, run, write_atomically, BuildConfig, RunConfig,
    SyntheticSpec, DEFAULT_CLUSTER_SEED, DEFAULT_FOLDS, DEFAULT_FOLD_SEED, DEFAULT_SYNTHETIC_SEED,
};

/// Hypergraph Laplacian label propagation for gene function prediction.
#[derive(Parser)]
#[command(name = "hyperlap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic expression table and module-aligned annotations.
    Generate(GenerateArgs),
    /// Write the hypergraph and co-expression graph built from expression data.
    Build(BuildArgs),
    /// Cross-validate the selected methods and write reports.
    Run(RunArgs),
    /// Print degree histograms and spectrum extremes.
    Inspect(InspectArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 300)]
    genes: usize,
    #[arg(long, default_value_t = 20)]
    experiments: usize,
    #[arg(long, default_value_t = 12)]
    modules: usize,
    #[arg(long, default_value_t = 6)]
    classes: usize,
    #[arg(long, default_value_t = 0.3)]
    noise: f64,
    #[arg(long, default_value_t = DEFAULT_SYNTHETIC_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    expression: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    #[arg(long, default_value_t = DEFAULT_CLUSTER_SEED)]
    cluster_seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct RunArgs {
    #[arg(long)]
    expression: PathBuf,
    #[arg(long)]
    annotations: PathBuf,
    /// Comma-separated subset of: graph, hypergraph-unnormalized,
    /// hypergraph-random-walk, hypergraph-symmetric.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    methods: Option<Vec<Method>>,
    /// Propagation weight, strictly inside (0, 1).
    #[arg(long, default_value_t = 0.85, value_parser = parse_alpha)]
    alpha: f64,
    /// Regularization weight, strictly positive.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    #[arg(long, default_value_t = DEFAULT_FOLDS)]
    folds: usize,
    #[arg(long, default_value_t = DEFAULT_CLUSTER_SEED)]
    cluster_seed: u64,
    #[arg(long, default_value_t = DEFAULT_FOLD_SEED)]
    fold_seed: u64,
    /// Stop iterating once successive iterates differ by less than this.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, default_value_t = 1000)]
    max_iterations: usize,
    /// Also write the thresholded co-expression graph.
    #[arg(long)]
    adjacency: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    expression: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    #[arg(long, default_value_t = DEFAULT_CLUSTER_SEED)]
    cluster_seed: u64,
    /// Largest gene count for which eigenvalues are computed.
    #[arg(long, default_value_t = 1000)]
    spectrum_limit: usize,
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::from_name(s.trim()).ok_or_else(|| {
        let known: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
        format!("unknown method '{s}', expected one of: {}", known.join(", "))
    })
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let alpha: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(format!("alpha must lie in the open interval (0, 1), got {alpha}"))
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let spec = SyntheticSpec {
        n_genes: args.genes,
        n_experiments: args.experiments,
        n_modules: args.modules,
        n_classes: args.classes,
        noise: args.noise,
        seed: args.seed,
    };
    let data = generate_synthetic(&spec)?;
    let modules = hyperlap_cli::io::render_assignments(data.expression.gene_ids(), &data.modules);
    let files = [
        ("expression.tsv", render_expression(&data.expression)),
        ("annotations.tsv", render_annotations(&data.annotations)),
        ("modules.tsv", modules),
    ];
    for path in write_atomically(&args.out, &files).with_context(|| format!("writing to {}", args.out.display()))? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_command(args: RunArgs) -> Result<()> {
    let cfg = RunConfig {
        expression: args.expression,
        annotations: args.annotations,
        methods: args.methods.unwrap_or_else(|| Method::ALL.to_vec()),
        experiment: ExperimentConfig {
            propagation: PropagationConfig {
                alpha: args.alpha,
                gamma: args.gamma,
                tolerance: args.tolerance,
                max_iterations: args.max_iterations,
            },
            threshold: args.threshold,
            cluster_seed: args.cluster_seed,
        },
        k_folds: args.folds,
        fold_seed: args.fold_seed,
        out: args.out,
        write_adjacency: args.adjacency,
    };
    let outcome = run(&cfg)?;
    for r in &outcome.report.results {
        match r.average_accuracy {
            Some(q) => println!("{:<28} {q:.4}", r.method.title()),
            None => println!("{:<28} n/a", r.method.title()),
        }
    }
    for c in &outcome.report.excluded_classes {
        println!("excluded class {} ({} positives, {} negatives)", c.class_id, c.positives, c.negatives);
    }
    for rec in outcome.report.metadata.convergence.iter().filter(|c| !c.converged) {
        eprintln!(
            "warning: {} did not converge on fold {} after {} iterations (last change {:e})",
            rec.method, rec.fold, rec.iterations, rec.last_change
        );
    }
    for path in &outcome.written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Build(args) => build_artifacts(&BuildConfig {
            expression: args.expression,
            cluster_seed: args.cluster_seed,
            threshold: args.threshold,
            out: args.out,
        })
        .map(|paths| paths.iter().for_each(|p| println!("wrote {}", p.display()))),
        Command::Run(args) => run_command(args),
        Command::Inspect(args) => load_expression(&args.expression)
            .map_err(anyhow::Error::from)
            .and_then(|x| inspect(&x, args.cluster_seed, args.threshold, args.spectrum_limit))
            .map(|summary| print!("{summary}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
