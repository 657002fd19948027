use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use satstack::primary::primary_component;
use satstack::stf::{estf, estf_canonical, estf_inverse, estf_rest_size, stf, stf_inverse};
use satstack::table::{self, Family, Source};
use satstack::tree::{phi, phi_inv};
use satstack::verify::{self, Bounds, Suite};
use satstack::{oracle, Diagram};

const EXIT_USAGE: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_SCHEMA: u8 = 4;

#[derive(Parser)]
#[command(name = "satstack", version, about = "Exact enumeration of saturated simple stacks")]
struct Cli {
    /// Worker threads for table cells and oracle sweeps.
    #[arg(long, global = true, env = "SATSTACK_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the diagrams of a family, one row per n.
    Count {
        /// plain, plain-saturated, plain-k-saturated, extended,
        /// extended-saturated or extended-k-saturated.
        #[arg(long)]
        family: String,
        /// Minimum arc length.
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Vertex counts, `a..b` (inclusive) or a single value.
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<u32>,
        /// Arc counts (deficits for k-saturated families); all by default.
        #[arg(long, value_parser = parse_range)]
        k: Option<RangeInclusive<u32>>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// auto, formula or oracle.
        #[arg(long, default_value = "auto")]
        source: Source,
    },
    /// Run the cross-check suites and print a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Largest n swept by the oracle.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=14))]
        max_n: u32,
        /// Largest block-element count in the partition sweep.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=7))]
        max_l: u32,
        #[arg(long, default_value_t = Bounds::default().seed)]
        seed: u64,
        /// Random labelled trees for the forest roundtrip.
        #[arg(long, default_value_t = Bounds::default().random_trees)]
        trees: usize,
        /// Rejected mutants required from each forest checker.
        #[arg(long, default_value_t = Bounds::default().mutations)]
        mutations: usize,
    },
    /// Apply a bijection to a diagram given as JSON.
    Bijection {
        #[arg(long, value_enum)]
        map: Map,
        /// JSON array of labels: preorder labels for stf, remaining labels
        /// for estf.
        #[arg(long)]
        labelling: Option<PathBuf>,
        /// Apply the inverse and fail unless it recovers the input.
        #[arg(long)]
        roundtrip: bool,
        /// Diagram file; stdin when absent.
        input: Option<PathBuf>,
    },
    /// ELO(n,k) against k for each n, as CSV.
    Curves {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Arc counts; 3 up to n/2 by default.
        #[arg(long, value_parser = parse_range)]
        k: Option<RangeInclusive<u32>>,
    },
    /// Stream the diagrams of a family as JSON lines.
    Enumerate {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Arc count; every arc count when absent.
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Map {
    Phi,
    Stf,
    Estf,
}

/// Invalid arguments that clap cannot catch.
#[derive(Debug)]
struct Usage(String);

/// Input that does not describe a valid object for the requested map.
#[derive(Debug)]
struct Schema(String);

/// A suite or roundtrip that ran and failed.
#[derive(Debug)]
struct VerificationFailed(String);

macro_rules! marker_error {
    ($t:ty) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl std::error::Error for $t {}
    };
}
marker_error!(Usage);
marker_error!(Schema);
marker_error!(VerificationFailed);

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u32>, String> {
    let bound = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (bound(a)?, bound(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = bound(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

fn family(name: &str, m: u32) -> Result<Family> {
    if m == 0 {
        bail!(Usage("--m must be at least 1".into()));
    }
    Family::parse(name, m).ok_or_else(|| Usage(format!("unknown family {name:?}")).into())
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn schema<T, E: fmt::Display>(r: std::result::Result<T, E>, what: &str) -> Result<T> {
    r.map_err(|e| Schema(format!("{what}: {e}")).into())
}

fn count(cli_out: &Option<PathBuf>, cmd: &Command) -> Result<()> {
    let Command::Count { family: name, m, n, k, format, source } = cmd else { unreachable!() };
    if *n.start() == 0 {
        bail!(Usage("--n must start at 1 or above".into()));
    }
    let fam = family(name, *m)?;
    let t = table::build_table(fam, n.clone(), k.clone(), *source).map_err(|e| Usage(e.to_string()))?;
    let text = match format {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json(),
    };
    emit(cli_out, &text)
}

fn verify_cmd(out: &Option<PathBuf>, cmd: &Command) -> Result<()> {
    let Command::Verify { suite, max_n, max_l, seed, trees, mutations } = cmd else { unreachable!() };
    let bounds = Bounds {
        max_n: *max_n,
        max_l: *max_l,
        seed: *seed,
        random_trees: *trees,
        mutations: *mutations,
        ..Bounds::default()
    };
    let report = verify::run(*suite, &bounds);
    emit(out, &report.to_json())?;
    if !report.passed {
        let first = report
            .checks
            .iter()
            .find(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.first_failure.as_deref().unwrap_or("failed")))
            .unwrap_or_default();
        bail!(VerificationFailed(first));
    }
    Ok(())
}

fn labelling(path: &Option<PathBuf>) -> Result<Option<Vec<u32>>> {
    path.as_ref()
        .map(|p| {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            schema(serde_json::from_str::<Vec<u32>>(&text), "labelling")
        })
        .transpose()
}

fn bijection(out: &Option<PathBuf>, cmd: &Command) -> Result<()> {
    let Command::Bijection { map, labelling: lab, roundtrip, input } = cmd else { unreachable!() };
    let d: Diagram = schema(Diagram::from_json(&read_input(input)?), "diagram")?;
    let labels = labelling(lab)?;
    let mismatch = |what: &str| VerificationFailed(format!("{what} inverse does not recover {d}"));
    let text = match map {
        Map::Phi => {
            let t = schema(phi(&d), "phi")?;
            if *roundtrip && schema(phi_inv(&t, d.n()), "phi inverse")? != d {
                bail!(mismatch("phi"));
            }
            match labels {
                Some(l) => schema(t.with_preorder_labels(&l), "labelling")?.to_json(),
                None => t.to_json(),
            }
        }
        Map::Stf => {
            let size = schema(phi(&d), "stf")?.vertex_count() as u32;
            let l = labels.unwrap_or_else(|| (1..=size).collect());
            let f = schema(stf(&d, &l), "stf")?;
            if *roundtrip && schema(stf_inverse(&f), "stf inverse")? != (d.clone(), l) {
                bail!(mismatch("stf"));
            }
            f.to_json()
        }
        Map::Estf => {
            let f = match &labels {
                Some(l) => schema(estf(&d, l), "estf")?,
                None => schema(estf_canonical(&d), "estf")?,
            };
            if *roundtrip {
                schema(estf_rest_size(&d), "estf")?;
                let class = schema(primary_component(&d), "estf")?.class;
                if schema(estf_inverse(&f, class), "estf inverse")? != d {
                    bail!(mismatch("estf"));
                }
            }
            f.to_json()
        }
    };
    emit(out, &format!("{text}\n"))
}

fn curves(out: &Option<PathBuf>, cmd: &Command) -> Result<()> {
    let Command::Curves { n, k } = cmd else { unreachable!() };
    if let Some(&bad) = n.iter().find(|&&v| v < 6) {
        bail!(Usage(format!("n={bad} lies outside the formula domain n >= 6")));
    }
    let top = n.iter().max().copied().unwrap_or(6) / 2;
    let ks = k.clone().unwrap_or(3..=top);
    if *ks.start() < 3 {
        bail!(Usage("k must be at least 3 for the closed form".into()));
    }
    let cells = table::elo_curves(n, ks).map_err(|e| Usage(e.to_string()))?;
    emit(out, &table::curves_csv(&cells))
}

fn enumerate(out: &Option<PathBuf>, cmd: &Command) -> Result<()> {
    let Command::Enumerate { family: name, m, n, k } = cmd else { unreachable!() };
    if *n == 0 {
        bail!(Usage("--n must be at least 1".into()));
    }
    let fam = family(name, *m)?;
    if fam.k_saturated() {
        bail!(Usage("enumerate takes a plain or saturated family".into()));
    }
    let ks: Vec<usize> = match k {
        Some(k) => vec![*k],
        None => (0..=*n as usize / 2).collect(),
    };
    let mut text = String::new();
    for k in ks {
        for d in oracle::enumerate_diagrams(*n, k, fam.profile(), fam.saturated()) {
            text.push_str(&d.to_json());
            text.push('\n');
        }
    }
    emit(out, &text)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let out = &cli.output;
    match &cli.command {
        c @ Command::Count { .. } => count(out, c),
        c @ Command::Verify { .. } => verify_cmd(out, c),
        c @ Command::Bijection { .. } => bijection(out, c),
        c @ Command::Curves { .. } => curves(out, c),
        c @ Command::Enumerate { .. } => enumerate(out, c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.is::<Usage>() {
                EXIT_USAGE
            } else if e.is::<Schema>() {
                EXIT_SCHEMA
            } else if e.is::<VerificationFailed>() {
                EXIT_VERIFICATION
            } else {
                1
            };
            ExitCode::from(code)
        }
    }
}
