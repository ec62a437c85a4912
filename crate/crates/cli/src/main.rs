mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use digit_lattice::experiments::{boundary_growth_report, error_sweep, make_histogram, Limits};
use digit_lattice::lattice::{count_boundary, count_coprime_pairs, count_pairs, count_pairs_half_weight, k_max};
use digit_lattice::primes::{empirical_error_envelope, prime_pair_count, prime_sieve, theta_weighted_count};
use digit_lattice::{
    digit_constant, digit_constant_series, emit, CountResult, CountValue, Error, Format, PairSupport, Params, Report,
    WeightScheme,
};

use crate::config::FileDefaults;

const EXIT_IO: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "digit-lattice", version, about = "Exact digit counts for integer quotients n/m")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Worker threads ("auto" = available parallelism)
    #[arg(long, global = true)]
    threads: Option<String>,

    /// Largest T accepted by enumeration-based counts
    #[arg(long, global = true)]
    brute_cap: Option<u64>,

    /// Largest Möbius table
    #[arg(long, global = true)]
    table_cap: Option<u64>,

    /// Largest prime sieve
    #[arg(long, global = true)]
    sieve_guard: Option<u64>,

    /// Output file (report commands)
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,

    /// Output format: csv, json or svg
    #[arg(long, global = true)]
    format: Option<String>,

    /// Defaults file with key = value lines
    #[arg(long, global = true, env = "DIGIT_LATTICE_CONFIG")]
    config: Option<PathBuf>,

    /// Directory for report files when --output is not given
    #[arg(long, global = true, env = "DIGIT_LATTICE_OUT_DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DigitArgs {
    #[arg(short = 'b', long = "base")]
    base: u64,
    #[arg(short = 'r', long = "digit")]
    digit: u64,
    #[arg(short = 'i', long = "pos", default_value_t = 1)]
    position: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the limiting density c(b, r; i) for one digit or all digits
    Constant {
        #[arg(short = 'b', long = "base")]
        base: u64,
        #[arg(short = 'r', long = "digit")]
        digit: Option<u64>,
        #[arg(short = 'i', long = "pos", default_value_t = 1)]
        position: u32,
        /// Use the series truncated at this k instead of the closed form
        #[arg(long)]
        series: Option<u64>,
    },
    /// Count pairs (n, m) in [1, T]^2 whose quotient has digit r
    Count {
        #[arg(value_enum)]
        variant: CountVariant,
        #[command(flatten)]
        digit: DigitArgs,
        #[arg(short = 'T', long = "bound")]
        bound: u64,
        /// Skip pairs p = q (prime variants)
        #[arg(long)]
        no_diagonal: bool,
        /// Restrict boundary counts to gcd(n, m) = d
        #[arg(long)]
        gcd: Option<u64>,
    },
    /// Per-digit histogram with the c(b, r; i) overlay
    Histogram {
        #[arg(short = 'b', long = "base")]
        base: u64,
        #[arg(short = 'T', long = "bound")]
        bound: u64,
        #[arg(short = 'i', long = "pos", default_value_t = 1)]
        position: u32,
        #[arg(long, value_enum, default_value_t = SchemeArg::All)]
        scheme: SchemeArg,
        #[arg(long)]
        no_diagonal: bool,
    },
    /// Φ(T) − c·T² along a grid of T
    Sweep {
        #[command(flatten)]
        digit: DigitArgs,
        /// Comma-separated ascending values of T
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<u64>,
    },
    /// Boundary counts b{n/m} = r against ((b, r)/b)·T log T
    BoundaryReport {
        #[arg(short = 'b', long = "base")]
        base: u64,
        #[arg(short = 'r', long = "digit")]
        digit: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<u64>,
    },
    /// sup over 2 ≤ x ≤ X of |π(x) − li(x)|
    Envelope {
        #[arg(short = 'X', long = "limit")]
        limit: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CountVariant {
    Pairs,
    Coprime,
    PrimeWeighted,
    PrimeCount,
    Boundary,
    HalfWeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    All,
    Coprime,
    Half,
    CoprimeHalf,
    PrimeWeighted,
    PrimeCount,
    PrimeHalf,
}

impl SchemeArg {
    fn scheme(self, exclude_diagonal: bool) -> WeightScheme {
        match self {
            SchemeArg::All => WeightScheme::AllPairs,
            SchemeArg::Coprime => WeightScheme::Coprime,
            SchemeArg::Half => WeightScheme::HalfBoundary { support: PairSupport::All },
            SchemeArg::CoprimeHalf => WeightScheme::HalfBoundary { support: PairSupport::Coprime },
            SchemeArg::PrimeWeighted => WeightScheme::PrimeLogWeights { exclude_diagonal },
            SchemeArg::PrimeCount => WeightScheme::PrimeCount { exclude_diagonal },
            SchemeArg::PrimeHalf => WeightScheme::HalfBoundary { support: PairSupport::Primes { exclude_diagonal } },
        }
    }
}

/// Resolved settings: flags over config file over environment over defaults.
struct Settings {
    limits: Limits,
    format: Option<Format>,
    output: Option<PathBuf>,
    out_dir: PathBuf,
}

fn settings(g: &GlobalOpts) -> anyhow::Result<Settings> {
    let file = match &g.config {
        Some(path) => FileDefaults::load(path)?,
        None => FileDefaults::default(),
    };
    let defaults = Limits::default();
    let limits = Limits {
        brute_force_cap: g.brute_cap.or(file.brute_cap).unwrap_or(defaults.brute_force_cap),
        table_cap: g.table_cap.or(file.table_cap).unwrap_or(defaults.table_cap),
        sieve_guard: g.sieve_guard.or(file.sieve_guard).unwrap_or(defaults.sieve_guard),
    };
    let threads = match g.threads.as_deref() {
        None | Some("auto") => file.threads,
        Some(n) => Some(n.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(|| {
            Error::ParamRange(format!("--threads expects a positive integer or \"auto\", got {n:?}"))
        })?),
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::ParamRange("threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring thread pool")?;
    }
    let format = g.format.as_deref().or(file.format.as_deref()).map(str::parse::<Format>).transpose()?;
    Ok(Settings {
        limits,
        format,
        output: g.output.clone(),
        out_dir: g.out_dir.clone().or(file.out_dir).unwrap_or_else(|| PathBuf::from(".")),
    })
}

fn write_report(report: &impl Report, settings: &Settings, stem: &str) -> anyhow::Result<()> {
    let format = settings.format.unwrap_or(Format::Csv);
    let path = match &settings.output {
        Some(p) => p.clone(),
        None => settings.out_dir.join(format!("{stem}.{}", format.extension())),
    };
    // render before touching the file system so format errors leave nothing behind
    report.render(format)?;
    emit(report, format, &path)?;
    println!("{}", path.display());
    Ok(())
}

/// What `count` prints; boundary counts have no weight scheme or triangle range.
#[derive(serde::Serialize)]
struct CountOutput {
    params: Params,
    variant: String,
    value: CountValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_max_used: Option<u64>,
    elapsed_ns: u64,
}

impl From<CountResult> for CountOutput {
    fn from(r: CountResult) -> Self {
        CountOutput {
            params: r.params,
            variant: r.variant.to_string(),
            value: r.value,
            k_max_used: Some(r.k_max_used),
            elapsed_ns: r.elapsed_ns,
        }
    }
}

fn print_count(out: &CountOutput, settings: &Settings) -> anyhow::Result<()> {
    match settings.format {
        Some(Format::Json) => println!("{}", serde_json_pretty(out)?),
        Some(Format::Svg) => return Err(Error::Unsupported("count output is text or json".into()).into()),
        _ => {
            println!("{}", out.value);
            let p = &out.params;
            let k_max = out.k_max_used.map(|k| format!(" k_max={k}")).unwrap_or_default();
            eprintln!(
                "variant={} b={} r={} i={} T={}{k_max} elapsed_ns={}",
                out.variant,
                p.base(),
                p.digit(),
                p.position(),
                p.bound(),
                out.elapsed_ns
            );
        }
    }
    Ok(())
}

fn serde_json_pretty<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let settings = settings(&cli.global)?;
    match cli.command {
        Command::Constant { base, digit, position, series } => {
            let digits: Vec<u64> = match digit {
                Some(r) => vec![r],
                None => (0..base.max(2)).collect(),
            };
            let values = digits
                .iter()
                .map(|&r| match series {
                    Some(k) => digit_constant_series::<f64>(base, r, position, k),
                    None => digit_constant::<f64>(base, r, position),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if settings.format == Some(Format::Json) {
                println!("{}", serde_json_pretty(&values)?);
                return Ok(());
            }
            for c in &values {
                if series.is_some() {
                    println!("{} {} ± {}", c.digit, c.value, c.tail_bound);
                } else {
                    println!("{} {}", c.digit, c.value);
                }
            }
            if digit.is_none() {
                let sum: digit_lattice::CompensatedSum<f64> = values.iter().map(|c| c.value).collect();
                println!("sum {:.12}", sum.value());
            }
        }
        Command::Count { variant, digit, bound, no_diagonal, gcd } => {
            let params = Params::new(digit.base, digit.digit, digit.position, bound)?;
            let limits = settings.limits;
            let result: CountOutput = match variant {
                CountVariant::Pairs => count_pairs(&params)?.into(),
                CountVariant::Coprime => count_coprime_pairs(&params, limits.table_cap)?.into(),
                CountVariant::PrimeWeighted | CountVariant::PrimeCount => {
                    let table = prime_sieve(bound.max(2), limits.sieve_guard)?;
                    if matches!(variant, CountVariant::PrimeWeighted) {
                        theta_weighted_count(&params, no_diagonal, &table)?.into()
                    } else {
                        prime_pair_count(&params, no_diagonal, &table)?.into()
                    }
                }
                CountVariant::Boundary => {
                    let start = Instant::now();
                    let value = count_boundary(&params, gcd)?;
                    CountOutput {
                        params,
                        variant: match gcd {
                            Some(d) => format!("boundary-gcd{d}"),
                            None => "boundary".into(),
                        },
                        value: CountValue::Exact(value),
                        k_max_used: None,
                        elapsed_ns: start.elapsed().as_nanos() as u64,
                    }
                }
                CountVariant::HalfWeight => {
                    let start = Instant::now();
                    let halves = count_pairs_half_weight(params.base(), params.position(), bound, limits.brute_force_cap)?;
                    CountResult {
                        params,
                        variant: WeightScheme::HalfBoundary { support: PairSupport::All },
                        value: CountValue::HalfUnits(halves[params.digit() as usize]),
                        k_max_used: k_max(&params),
                        elapsed_ns: start.elapsed().as_nanos() as u64,
                    }
                    .into()
                }
            };
            print_count(&result, &settings)?;
        }
        Command::Histogram { base, bound, position, scheme, no_diagonal } => {
            let scheme = scheme.scheme(no_diagonal);
            let h = make_histogram(bound, base, position, scheme, &settings.limits)?;
            write_report(&h, &settings, &format!("histogram_{scheme}_b{base}_i{position}_T{bound}"))?;
        }
        Command::Sweep { digit, grid } => {
            let sweep = error_sweep(digit.base, digit.digit, digit.position, &grid)?;
            write_report(&sweep, &settings, &format!("sweep_b{}_r{}_i{}", digit.base, digit.digit, digit.position))?;
        }
        Command::BoundaryReport { base, digit, grid } => {
            let rep = boundary_growth_report(base, digit, &grid)?;
            write_report(&rep, &settings, &format!("boundary_b{base}_r{digit}"))?;
        }
        Command::Envelope { limit } => {
            let table = prime_sieve(limit.max(2), settings.limits.sieve_guard)?;
            let env = empirical_error_envelope(limit, &table)?;
            if settings.format == Some(Format::Json) {
                println!("{}", serde_json_pretty(&env)?);
            } else {
                println!("{} at x = {}", env.value, env.argmax_x);
            }
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::ResourceGuard { .. }) => EXIT_GUARD,
        Some(Error::Io { .. }) => EXIT_IO,
        Some(_) => EXIT_VALIDATION,
        None if err.downcast_ref::<std::io::Error>().is_some() => EXIT_IO,
        None => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            // core errors already embed their source in Display
            if err.downcast_ref::<Error>().is_some() {
                eprintln!("error: {err}");
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
