use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tanglegram::bound::{lower_bound_report, Cap};
use tanglegram::experiment::{
    fit_quadratic, format_sig6, parse_policy_pair, series, simulate, summarize, write_csv,
    write_summary, CapPolicy, SimulationConfig,
};
use tanglegram::families::{caterpillar_tanglegram, extend_family, grid_family};
use tanglegram::sampler::{random_tree, sample_rng, samples, Distribution, SampleConfig, RNG_NAME};
use tanglegram::solver::{exact_crt_with, SolverOptions, EXACT_CAP};
use tanglegram::tree::{balanced, caterpillar, BinaryTree};
use tanglegram::{parse, serialize, Error, Tanglegram};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "tgl",
    version,
    about = "Tangle crossing numbers of tanglegrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact tangle crossing number and an optimal layout.
    Crt {
        file: PathBuf,
        /// Largest size the exact solver accepts.
        #[arg(long, default_value_t = EXACT_CAP)]
        cap: usize,
        /// Enumerate every left switch vector instead of branch and bound.
        #[arg(long)]
        no_prune: bool,
    },
    /// Clade-partition lower bound.
    Bound {
        file: PathBuf,
        /// Left cap: an integer, a number, `sqrt` or `half`.
        #[arg(long)]
        cl: String,
        /// Right cap: an integer, a number, `sqrt` or `half`.
        #[arg(long)]
        cr: String,
    },
    /// Writes a member of a constructed family.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Writes seeded random tanglegrams.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = Distribution::default().name().to_string())]
        dist: String,
        /// One file per sample in this directory instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Lower-bound simulation over random tanglegrams, as CSV.
    Simulate {
        #[arg(long, default_value_t = 10)]
        nmin: usize,
        #[arg(long, default_value_t = 100)]
        nmax: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compute the exact crossing number up to this size.
        #[arg(long)]
        exact_upto: Option<usize>,
        /// Comma-separated cap policy pairs such as `ss,ml,ll`; all nine by default.
        #[arg(long, value_delimiter = ',')]
        policies: Vec<String>,
        #[arg(long, default_value_t = Distribution::default().name().to_string())]
        dist: String,
        /// Fill the runtime_s column.
        #[arg(long)]
        timing: bool,
        /// Row CSV destination; stdout by default.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-n mean and max CSV destination.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Family {
    /// `P_n`, the caterpillar tanglegram of size n >= 4.
    CaterpillarTanglegram {
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Grid family member of size k^2.
    Grid {
        k: usize,
        #[arg(long, value_enum, default_value_t = Components::Caterpillar)]
        components: Components,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Grid member of size k^2 grown to size n by random extra edges.
    Extended {
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Components::Caterpillar)]
        components: Components,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Components {
    Caterpillar,
    Balanced,
    Random,
}

/// Failure with its exit code: 2 parse or IO, 3 size cap, 4 bad arguments.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(path: &Path, e: io::Error) -> Self {
        Failure {
            code: 2,
            message: format!("{}: {e}", path.display()),
        }
    }

    fn args(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => 2,
            Error::SizeCap { .. } => 3,
            _ => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Outcome {
    let Ok(value) = std::env::var("TGL_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            Failure::args(format!(
                "TGL_THREADS must be a positive integer, got `{value}`"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::args(e.to_string()))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Crt {
            file,
            cap,
            no_prune,
        } => cmd_crt(&file, cap, !no_prune),
        Command::Bound { file, cl, cr } => cmd_bound(&file, &cl, &cr),
        Command::Gen { family } => cmd_gen(family),
        Command::Sample {
            n,
            count,
            seed,
            dist,
            out_dir,
        } => cmd_sample(n, count, seed, &dist, out_dir.as_deref()),
        Command::Simulate {
            nmin,
            nmax,
            samples,
            seed,
            exact_upto,
            policies,
            dist,
            timing,
            out,
            summary,
        } => {
            let policies = if policies.is_empty() {
                CapPolicy::all_pairs()
            } else {
                policies
                    .iter()
                    .map(|p| parse_policy_pair(p))
                    .collect::<Result<_, _>>()?
            };
            let cfg = SimulationConfig {
                nmin,
                nmax,
                samples,
                seed,
                distribution: dist.parse()?,
                policies,
                exact_upto,
                timing,
            };
            cmd_simulate(&cfg, out.as_deref(), summary.as_deref())
        }
    }
}

fn read_tanglegram(path: &Path) -> Result<Tanglegram, Failure> {
    let src = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse(&src).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn bits(s: &tanglegram::SwitchVector) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.to_string()
    }
}

fn cmd_crt(path: &Path, cap: usize, pruning: bool) -> Outcome {
    let t = read_tanglegram(path)?;
    let report = exact_crt_with(&t, SolverOptions { cap, pruning })?;
    let mut out = io::stdout().lock();
    writeln!(out, "crt: {}", report.crt)?;
    writeln!(out, "left: {}", bits(&report.witness.left))?;
    writeln!(out, "right: {}", bits(&report.witness.right))?;
    writeln!(
        out,
        "search: {} nodes, {} leaves, {} pruned",
        report.stats.nodes, report.stats.leaves, report.stats.pruned
    )?;
    writeln!(out, "time_s: {}", format_sig6(report.seconds()))?;
    Ok(())
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_bound(path: &Path, cl: &str, cr: &str) -> Outcome {
    let t = read_tanglegram(path)?;
    let cap_left = Cap::parse_expr(cl, t.n())?;
    let cap_right = Cap::parse_expr(cr, t.n())?;
    let report = lower_bound_report(&t, cap_left, cap_right)?;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "left parts (cap {cap_left}): {}",
        join(report.left.sizes())
    )?;
    writeln!(
        out,
        "right parts (cap {cap_right}): {}",
        join(report.right.sizes())
    )?;
    writeln!(out, "matrix:")?;
    for i in 0..report.matrix.rows() {
        writeln!(out, "{}", join(report.matrix.row(i)))?;
    }
    writeln!(out, "bound: {}", report.value)?;
    Ok(())
}

fn component_trees(
    k: usize,
    components: Components,
    seed: u64,
) -> Result<Vec<BinaryTree>, Failure> {
    if k < 2 {
        return Err(Failure::args(format!("grid family needs k >= 2, got {k}")));
    }
    let count = 2 * k + 2;
    let trees = match components {
        Components::Caterpillar => vec![caterpillar(k)?; count],
        Components::Balanced => vec![balanced(k, |i| format!("b{}", i + 1))?; count],
        Components::Random => {
            let mut rng = sample_rng(seed, k, 0);
            (0..count)
                .map(|_| random_tree(k, &mut rng))
                .collect::<Result<_, _>>()?
        }
    };
    Ok(trees)
}

fn emit(text: &str, output: Option<&Path>) -> Outcome {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn cmd_gen(family: Family) -> Outcome {
    let (t, output) = match family {
        Family::CaterpillarTanglegram { n, output } => (caterpillar_tanglegram(n)?, output),
        Family::Grid {
            k,
            components,
            seed,
            output,
        } => (grid_family(&component_trees(k, components, seed)?)?, output),
        Family::Extended {
            n,
            k,
            seed,
            components,
            output,
        } => {
            let base = grid_family(&component_trees(k, components, seed)?)?;
            let mut rng = sample_rng(seed, n, 1);
            (extend_family(&base, n, &mut rng)?, output)
        }
    };
    emit(&serialize(&t), output.as_deref())
}

fn cmd_sample(n: usize, count: usize, seed: u64, dist: &str, out_dir: Option<&Path>) -> Outcome {
    let cfg = SampleConfig {
        n,
        seed,
        count,
        distribution: dist.parse()?,
    };
    let ts = samples(&cfg)?;
    eprintln!(
        "tgl {VERSION}: rng {RNG_NAME}, seed {seed}, n {n}, count {count}, distribution {}",
        cfg.distribution
    );
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
            for (i, t) in ts.iter().enumerate() {
                let path = dir.join(format!("sample_n{n}_s{seed}_{i}.tgl"));
                fs::write(&path, serialize(t)).map_err(|e| Failure::io(&path, e))?;
            }
            Ok(())
        }
        None => {
            let mut out = BufWriter::new(io::stdout().lock());
            for t in &ts {
                out.write_all(serialize(t).as_bytes())?;
            }
            Ok(out.flush()?)
        }
    }
}

fn signed(x: f64) -> String {
    let sign = if x < 0.0 { '-' } else { '+' };
    format!("{sign} {}", format_sig6(x.abs()))
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, Failure> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::io(path, e))
}

fn cmd_simulate(cfg: &SimulationConfig, out: Option<&Path>, summary: Option<&Path>) -> Outcome {
    let rows = simulate(cfg)?;
    eprintln!(
        "tgl {VERSION}: rng {RNG_NAME}, seed {}, n {}..={}, {} samples per n, distribution {}",
        cfg.seed, cfg.nmin, cfg.nmax, cfg.samples, cfg.distribution
    );
    match out {
        Some(path) => {
            let mut w = create(path)?;
            write_csv(&rows, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            write_csv(&rows, &mut w)?;
            w.flush()?;
        }
    }
    let points = summarize(&rows);
    if let Some(path) = summary {
        let mut w = create(path)?;
        write_summary(&points, &mut w)?;
        w.flush()?;
    }
    let ll = (CapPolicy::Large, CapPolicy::Large);
    if cfg.policies.contains(&ll) && cfg.nmax - cfg.nmin >= 2 {
        let (mean, max) = series(&points, ll.0, ll.1);
        for (name, pts, reference) in [("mean", &mean, 0.055), ("max", &max, 0.08)] {
            let fit = fit_quadratic(pts)?;
            eprintln!(
                "ll {name} fit: {} n^2 {} n {} (reference leading coefficient {reference})",
                format_sig6(fit.a),
                signed(fit.b),
                signed(fit.c)
            );
        }
    }
    Ok(())
}
