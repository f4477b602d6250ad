//! `sqlab`: runs one experiment and writes its report as JSON or CSV.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when an invariant
//! check fails or a numerical routine gives up.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sqlab_core::codec::{encode_sparse_collection_json, read_signal};
use sqlab_core::experiments::*;
use sqlab_core::ops::{IntervalZ, Signal};
use sqlab_core::report::ExperimentReport;
use sqlab_core::sparse::{sparse_decompose, DEFAULT_STOP_C};
use sqlab_core::Error;

#[derive(Parser, Debug)]
#[command(name = "sqlab", version, about = "Experiments on averages along the squares")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Overrides the command's invariant tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    Random,
    Squares,
    Interval,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form Gauss sums against direct summation.
    GaussCheck {
        #[arg(long)]
        q_max: Option<u64>,
    },
    /// Square-root counts, the H-sum identities and the support lemmas.
    HsumIdentities {
        /// Caps every modulus range of the audit.
        #[arg(long)]
        q_max: Option<u64>,
    },
    /// Dyadic scan of the low-pass average `S_J`.
    LowpassScan {
        /// Largest `J`.
        #[arg(long)]
        j: Option<u64>,
        #[arg(long)]
        x_max: Option<i64>,
        #[arg(long)]
        no_adversarial: bool,
    },
    /// Normalized FJK remainder on a frequency grid.
    FjkConstant {
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u64>>,
        #[arg(long)]
        grid: Option<u64>,
        /// Sample `(j + 1/2) / grid` instead of `j / grid`.
        #[arg(long)]
        half_offset: bool,
    },
    /// Grid supremum of the minor-arc multiplier `c_N` per cutoff `M`.
    MinorArc {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<u64>>,
        #[arg(long)]
        grid: Option<u64>,
    },
    /// Decay of `gamma_N` against `min(1, 1/(N sqrt|theta|))`.
    GammaDecay {
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u64>>,
    },
    /// Improving ratios for random indicator pairs and the extremal pair.
    ImprovingRatio {
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u64>>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Bilinear ratio against the Orlicz average `psi`.
    OrliczRatio {
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u64>>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Superlevel sets of `A_N chi_G` for `|G| = N`.
    Halfdim {
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        strategy: Option<Strategy>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// l2 ratio of the level-`s` maximal multiplier operator.
    Multifreq {
        /// `N_max`.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<u32>>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Improving table for a polynomial `p(k)` in place of `k^2`.
    PolyAverage {
        /// Coefficients, constant term first.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        coeffs: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u64>>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Sparse decomposition, audit and domination ratio on random inputs.
    SparseDemo {
        /// Sizes of `E`.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u64>>,
        #[arg(long)]
        c_stop: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// High/Low split of `A_N f`.
    HighLow {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        j: Option<Vec<u64>>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Sparse collection for a signal file (`.bin` binary, otherwise JSON),
    /// with `E = [0, e_len)` and `g` the indicator of `E`.
    SparseDecompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        e_len: u64,
        #[arg(long)]
        c_stop: Option<f64>,
    },
}

enum Output {
    Report(ExperimentReport),
    Raw(Vec<u8>),
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn run(cmd: Command, c: &Common) -> sqlab_core::Result<Output> {
    let seed = c.seed;
    let rep = match cmd {
        Command::GaussCheck { q_max } => {
            let mut p = GaussCheckParams::default();
            set(&mut p.q_max, q_max);
            set(&mut p.tol, c.tol);
            run_gauss_check(&p)?
        }
        Command::HsumIdentities { q_max } => {
            let mut p = HsumParams::default();
            if let Some(q) = q_max {
                for slot in [
                    &mut p.sqrt_q_max,
                    &mut p.h_eq_h1_q_max,
                    &mut p.h0_q_max,
                    &mut p.multiplicative_q_max,
                    &mut p.shift_q_max,
                    &mut p.support_q_max,
                    &mut p.divisor_q_max,
                ] {
                    *slot = (*slot).min(q);
                }
            }
            set(&mut p.tol, c.tol);
            run_hsum_identities(&p)?
        }
        Command::LowpassScan { j, x_max, no_adversarial } => {
            let mut p = LowpassParams::default();
            set(&mut p.j_max, j);
            set(&mut p.x_max, x_max);
            set(&mut p.tol, c.tol);
            p.adversarial = !no_adversarial;
            run_lowpass_scan(&p)?
        }
        Command::FjkConstant { n, grid, half_offset } => {
            let mut p = FjkParams::default();
            set(&mut p.n_list, n);
            set(&mut p.grid, grid);
            set(&mut p.tol, c.tol);
            p.half_offset = half_offset;
            run_fjk_constant(&p)?
        }
        Command::MinorArc { n, m, grid } => {
            let mut p = MinorArcParams::default();
            set(&mut p.n, n);
            set(&mut p.m_list, m);
            set(&mut p.grid, grid);
            run_minor_arc(&p)?
        }
        Command::GammaDecay { n } => {
            let mut p = GammaDecayParams::default();
            set(&mut p.n_list, n);
            set(&mut p.tol, c.tol);
            run_gamma_decay(&p)?
        }
        Command::ImprovingRatio { n, p: exp, trials } => {
            let mut p = ImprovingParams { seed, ..Default::default() };
            set(&mut p.n_list, n);
            set(&mut p.p, exp);
            set(&mut p.trials, trials);
            run_improving_ratio(&p)?
        }
        Command::OrliczRatio { n, trials } => {
            let mut p = OrliczParams { seed, ..Default::default() };
            set(&mut p.n_list, n);
            set(&mut p.trials, trials);
            run_orlicz_ratio(&p)?
        }
        Command::Halfdim { n, eps, strategy, trials } => {
            let mut p = HalfdimParams { seed, ..Default::default() };
            set(&mut p.n_list, n);
            set(&mut p.epsilons, eps);
            set(&mut p.trials, trials);
            if let Some(s) = strategy {
                p.strategy = match s {
                    Strategy::Random => GStrategy::Random,
                    Strategy::Squares => GStrategy::Squares,
                    Strategy::Interval => GStrategy::Interval,
                    Strategy::All => GStrategy::All,
                };
            }
            run_halfdim(&p)?
        }
        Command::Multifreq { n, s, trials } => {
            let mut p = MultifreqParams { seed, ..Default::default() };
            set(&mut p.n_max, n);
            set(&mut p.s_list, s);
            set(&mut p.trials, trials);
            run_multifreq(&p)?
        }
        Command::PolyAverage { coeffs, n, p: exp, trials } => {
            let mut p = PolyParams { seed, ..Default::default() };
            set(&mut p.coeffs, coeffs);
            set(&mut p.n_list, n);
            set(&mut p.p, exp);
            set(&mut p.trials, trials);
            run_poly_average(&p)?
        }
        Command::SparseDemo { n, c_stop, p: exp, trials } => {
            let mut p = SparseDemoParams { seed, ..Default::default() };
            set(&mut p.e_sizes, n);
            set(&mut p.c, c_stop);
            set(&mut p.p, exp);
            set(&mut p.trials, trials);
            run_sparse_demo(&p)?
        }
        Command::HighLow { n, j, trials } => {
            let mut p = HighLowParams { seed, ..Default::default() };
            set(&mut p.n, n);
            set(&mut p.j_list, j);
            set(&mut p.trials, trials);
            set(&mut p.tol, c.tol);
            run_high_low(&p)?
        }
        Command::SparseDecompose { input, e_len, c_stop } => {
            let f = read_signal(&input)?;
            let e = IntervalZ::with_len(0, e_len)?;
            let g = Signal::indicator_interval(e);
            let col = sparse_decompose(e, &f, &g, c_stop.unwrap_or(DEFAULT_STOP_C))?;
            return Ok(Output::Raw(encode_sparse_collection_json(&col)?));
        }
    };
    Ok(Output::Report(rep))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) | Error::Numeric(_) => 2,
        _ => 1,
    }
}

fn emit(bytes: &[u8], out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if cli.common.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.threads)
            .build_global()
        {
            eprintln!("sqlab: {e}");
            return ExitCode::from(1);
        }
    }
    let out = match run(cli.cmd, &cli.common) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("sqlab: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let (bytes, passed) = match out {
        Output::Raw(b) => (b, true),
        Output::Report(rep) => {
            let text = match cli.common.format {
                Format::Json => match rep.to_json() {
                    Ok(s) => s + "\n",
                    Err(e) => {
                        eprintln!("sqlab: {e}");
                        return ExitCode::from(1);
                    }
                },
                Format::Csv => rep.to_csv(),
            };
            for c in rep.checks.iter().filter(|c| !c.passed) {
                eprintln!(
                    "sqlab: check {} failed: value {:?} against limit {:?}",
                    c.name, c.value, c.limit
                );
            }
            (text.into_bytes(), rep.passed())
        }
    };
    if let Err(e) = emit(&bytes, &cli.common.out) {
        eprintln!("sqlab: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(if passed { 0 } else { 2 })
}
