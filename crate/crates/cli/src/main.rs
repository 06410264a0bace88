mod manifest;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, ArgMatches, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hiertag::baselines::{extract_heymann, extract_schmitz, HeymannCentrality, HeymannParams, SchmitzParams};
use hiertag::benchmark::{self, BenchmarkConfig, FrequencyProfile, TagsPerObject, WalkLength};
use hiertag::corpus::{self, ObjectsFormat};
use hiertag::extract::{extract_a, extract_b, AlgoAParams, AlgoBParams};
use hiertag::hierarchy::{self, rewire, RewireOrder};
use hiertag::metrics::{decay_curve, default_grid, DEFAULT_RUNS};
use hiertag::{Hierarchy, QualityReport, TagCorpus};

use manifest::{manifest_path, RunManifest};

/// Tag hierarchy extraction and evaluation.
///
/// Input and output paths accept `-` for stdin; omitting `--out` writes to
/// stdout. Every run records a manifest next to its output file, or on
/// stderr when writing to stdout.
#[derive(Debug, Parser)]
#[command(name = "hiertag", version)]
struct Cli {
    /// Worker threads for counting, generation and curve estimation.
    #[arg(long, global = true, env = "HIERTAG_THREADS")]
    threads: Option<usize>,

    /// Re-run the invocation recorded in a manifest file.
    #[arg(long)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic objects file from a hierarchy.
    Generate(GenerateArgs),
    /// Extract a hierarchy from an objects file.
    Extract(ExtractArgs),
    /// Compare a reconstructed hierarchy with the exact one.
    Evaluate(EvaluateArgs),
    /// Estimate the NMI decay curve of a tree under rewiring.
    Curve(CurveArgs),
    /// Rewire a fraction of a tree's links.
    Randomize(RandomizeArgs),
}

#[derive(Debug, clap::Args)]
struct GenerateArgs {
    /// Exact hierarchy edge list.
    #[arg(long)]
    hierarchy: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    objects: usize,
    /// `poisson:MEAN` or `fixed:K`.
    #[arg(long, default_value = "poisson:3")]
    tags_per_object: TagsPerObject,
    /// Probability that a further tag comes from a random walk.
    #[arg(long, default_value_t = 0.5)]
    p_rw: f64,
    /// `uniform:A:B`.
    #[arg(long, default_value = "uniform:1:3")]
    walk: WalkLength,
    /// `linear-depth` or `power-law:EXPONENT`.
    #[arg(long, default_value = "linear-depth")]
    profile: FrequencyProfile,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    A,
    B,
    Heymann,
    Schmitz,
}

#[derive(Debug, clap::Args)]
struct ExtractArgs {
    /// Objects file, one object per line, tags separated by TAB.
    #[arg(long)]
    corpus: PathBuf,
    /// The first field of each line is an object id.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, require_equals = true,
          default_value_t = false, default_missing_value = "true")]
    with_ids: bool,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Algorithm A: per-tag threshold on the in-link weight share.
    #[arg(long, default_value_t = 0.4)]
    omega: f64,
    /// Algorithm B: minimum z-score of a kept link.
    #[arg(long, default_value_t = 10.0)]
    z_threshold: f64,
    /// Algorithm B: power iteration rounds.
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    /// Algorithm B: hang secondary roots under the most central one.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, require_equals = true,
          default_value_t = false, default_missing_value = "true")]
    force_single_root: bool,
    /// Heymann: minimum cosine similarity.
    #[arg(long, default_value_t = 0.1)]
    similarity_threshold: f64,
    /// Heymann: `degree-strength` or `closeness`.
    #[arg(long, default_value = "degree-strength")]
    centrality: HeymannCentrality,
    /// Heymann: write the synthetic root as well.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, require_equals = true,
          default_value_t = false, default_missing_value = "true")]
    keep_synthetic_root: bool,
    /// Schmitz: subsumption probability threshold.
    #[arg(long, default_value_t = 0.8)]
    t_subsume: f64,
    /// Schmitz: minimum co-occurrence count of a candidate link.
    #[arg(long, default_value_t = 10)]
    min_cooccurrence: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct EvaluateArgs {
    #[arg(long)]
    exact: PathBuf,
    #[arg(long)]
    recon: PathBuf,
    /// Also report LMI, from a decay curve estimated on the exact tree.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, require_equals = true,
          default_value_t = false, default_missing_value = "true")]
    lmi: bool,
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    curve_runs: usize,
    #[arg(long, default_value = "random")]
    curve_order: RewireOrder,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Treat exact-hierarchy tags absent from the reconstruction as isolated.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, require_equals = true,
          default_value_t = false, default_missing_value = "true")]
    allow_missing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct CurveArgs {
    #[arg(long)]
    hierarchy: PathBuf,
    /// `leaf-first`, `random` or `top-first`.
    #[arg(long, default_value = "random")]
    order: RewireOrder,
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct RandomizeArgs {
    #[arg(long)]
    hierarchy: PathBuf,
    /// Fraction of links to rewire.
    #[arg(long)]
    f: f64,
    #[arg(long, default_value = "random")]
    order: RewireOrder,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Arguments that never enter a manifest: they do not change any output.
const UNRECORDED: &[&str] = &["threads", "manifest"];

fn main() -> ExitCode {
    let matches = match Cli::command().try_get_matches() {
        Ok(m) => m,
        Err(e) => e.exit(),
    };
    match run(matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(mut matches: ArgMatches) -> Result<()> {
    let mut cli = Cli::from_arg_matches(&matches)?;
    if let Some(path) = cli.manifest.take() {
        if cli.command.is_some() {
            bail!("--manifest replays a recorded run and takes no subcommand");
        }
        let recorded = RunManifest::load(&path)?;
        let mut argv = vec!["hiertag".to_string()];
        if let Some(k) = cli.threads {
            argv.push(format!("--threads={k}"));
        }
        argv.extend(recorded.replay_args());
        matches = Cli::command()
            .try_get_matches_from(argv)
            .with_context(|| format!("replaying {}", path.display()))?;
        cli = Cli::from_arg_matches(&matches)?;
    }
    let Some(command) = cli.command else {
        Cli::command().print_help()?;
        bail!("no subcommand given");
    };
    if let Some(k) = cli.threads {
        if k == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring worker threads")?;
    }
    let (name, sub) = matches.subcommand().expect("subcommand present");
    let started = Instant::now();
    let (out, seed) = match &command {
        Command::Generate(a) => (cmd_generate(a)?, Some(a.seed)),
        Command::Extract(a) => (cmd_extract(a)?, None),
        Command::Evaluate(a) => (cmd_evaluate(a)?, a.lmi.then_some(a.seed)),
        Command::Curve(a) => (cmd_curve(a)?, Some(a.seed)),
        Command::Randomize(a) => (cmd_randomize(a)?, Some(a.seed)),
    };
    let manifest = RunManifest {
        subcommand: name.to_string(),
        args: recorded_args(name, sub),
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration: started.elapsed(),
    };
    match manifest_path(out) {
        Some(path) => std::fs::write(&path, manifest.render())
            .with_context(|| format!("writing manifest {}", path.display()))?,
        None => eprint!("{}", manifest.render()),
    }
    Ok(())
}

/// Resolved values of every argument, defaults included, as typed.
fn recorded_args(name: &str, sub: &ArgMatches) -> Vec<(String, String)> {
    let cmd = Cli::command();
    let Some(sc) = cmd.find_subcommand(name) else {
        return Vec::new();
    };
    sc.get_arguments()
        .map(|arg| arg.get_id().as_str())
        .filter(|id| !UNRECORDED.contains(id))
        .filter_map(|id| {
            let raw = sub.try_get_raw(id).ok()??.next()?;
            Some((id.replace('_', "-"), raw.to_string_lossy().into_owned()))
        })
        .collect()
}

fn reader(path: &Path) -> Result<Box<dyn BufRead>> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdin().lock()));
    }
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Box::new(BufReader::new(file)))
}

fn read_hierarchy(path: &Path) -> Result<Hierarchy> {
    hierarchy::parse_hierarchy(reader(path)?).with_context(|| format!("reading hierarchy {}", path.display()))
}

fn read_corpus(path: &Path, with_ids: bool) -> Result<TagCorpus> {
    corpus::parse_corpus(reader(path)?, ObjectsFormat { with_ids })
        .with_context(|| format!("reading objects {}", path.display()))
}

/// Writes through `emit` to `--out` or stdout; returns the file path, if any.
fn write_output(
    out: &Option<PathBuf>,
    emit: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<Option<&Path>> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            emit(&mut w).and_then(|_| w.flush()).with_context(|| format!("writing {}", path.display()))?;
            Ok(Some(path))
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            emit(&mut w).and_then(|_| w.flush()).context("writing to stdout")?;
            Ok(None)
        }
    }
}

fn cmd_generate(a: &GenerateArgs) -> Result<Option<&Path>> {
    let exact = read_hierarchy(&a.hierarchy)?;
    let config = BenchmarkConfig {
        object_count: a.objects,
        tags_per_object: a.tags_per_object,
        p_rw: a.p_rw,
        walk_length: a.walk,
        frequency_profile: a.profile.clone(),
        seed: a.seed,
    };
    let corpus = benchmark::generate(&exact, &config)?;
    write_output(&a.out, |w| corpus.write(w))
}

fn cmd_extract(a: &ExtractArgs) -> Result<Option<&Path>> {
    let corpus = read_corpus(&a.corpus, a.with_ids)?;
    let recon = match a.algorithm {
        Algorithm::Schmitz => extract_schmitz(
            &corpus,
            &SchmitzParams {
                t_subsume: a.t_subsume,
                min_cooccurrence: a.min_cooccurrence,
            },
        )?,
        algorithm => {
            let network = corpus::build_cooccurrence(&corpus);
            match algorithm {
                Algorithm::A => extract_a(&network, &AlgoAParams { omega: a.omega })?,
                Algorithm::B => extract_b(
                    &network,
                    &AlgoBParams {
                        z_threshold: a.z_threshold,
                        iterations: a.iterations,
                        force_single_root: a.force_single_root,
                    },
                )?,
                _ => {
                    let tree = extract_heymann(
                        &network,
                        &HeymannParams {
                            similarity_threshold: a.similarity_threshold,
                            centrality: a.centrality,
                        },
                    )?;
                    if a.keep_synthetic_root {
                        tree.tree
                    } else {
                        tree.without_synthetic_root()
                    }
                }
            }
        }
    };
    write_output(&a.out, |w| recon.write(w))
}

fn cmd_evaluate(a: &EvaluateArgs) -> Result<Option<&Path>> {
    let exact = read_hierarchy(&a.exact)?;
    let mut recon = read_hierarchy(&a.recon)?;
    if a.allow_missing {
        recon = recon.aligned_to(exact.vocab())?;
    }
    let curve = if a.lmi {
        Some(decay_curve(&exact, a.curve_order, a.curve_runs, &default_grid(), a.seed)?)
    } else {
        None
    };
    let report = QualityReport::evaluate(&exact, &recon, curve.as_ref())?;
    write_output(&a.out, |w| write!(w, "{report}"))
}

fn cmd_curve(a: &CurveArgs) -> Result<Option<&Path>> {
    let exact = read_hierarchy(&a.hierarchy)?;
    let curve = decay_curve(&exact, a.order, a.runs, &default_grid(), a.seed)?;
    write_output(&a.out, |w| w.write_all(curve.to_tsv().as_bytes()))
}

fn cmd_randomize(a: &RandomizeArgs) -> Result<Option<&Path>> {
    let exact = read_hierarchy(&a.hierarchy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let randomized = rewire(&exact, a.f, a.order, &mut rng)?;
    write_output(&a.out, |w| randomized.write(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn manifest_skips_thread_count() {
        let m = Cli::command()
            .try_get_matches_from(["hiertag", "--threads", "2", "curve", "--hierarchy", "h.tsv"])
            .unwrap();
        let (name, sub) = m.subcommand().unwrap();
        let args = recorded_args(name, sub);
        assert!(args.iter().all(|(k, _)| k != "threads"));
        assert_eq!(args[0], ("hierarchy".to_string(), "h.tsv".to_string()));
        assert!(args.contains(&("order".to_string(), "random".to_string())));
    }
}
