use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use weighted_qr::bench::{run_bench, write_bench_csv, BenchConfig, BenchKind};
use weighted_qr::check::{check_bounds, Bound, BOUND_CONSTANT};
use weighted_qr::metrics::{loss_of_a_orthogonality, representation_error};
use weighted_qr::mm::{read_matrix_market, write_matrix_market, MmObject};
use weighted_qr::ortho::parse_method_list;
use weighted_qr::sweep::{
    parse_exponent_range, read_sweep_csv, run_sweep, write_sweep_csv, SweepConfig,
};
use weighted_qr::testbed::Case;
use weighted_qr::{factor, Error, Method};

/// Thin QR factorization in an spd-weighted inner product.
#[derive(Parser)]
#[command(name = "wqr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor Z = QR with QᵀAQ = I for matrices read from Matrix Market files.
    Factor {
        /// Symmetric positive definite weight matrix.
        #[arg(long)]
        a: PathBuf,
        /// Tall matrix whose columns are orthogonalized.
        #[arg(long)]
        z: PathBuf,
        /// `{mgs|cgs}-{naive|ha|hp}-{col|row}` or `cholqr`.
        #[arg(long)]
        method: Method,
        #[arg(long)]
        out_q: Option<PathBuf>,
        #[arg(long)]
        out_r: Option<PathBuf>,
        /// Print `mv_count,flops,loss_a_orth,rep_error_rel` to stdout.
        #[arg(long)]
        report: bool,
    },
    /// Run an accuracy sweep over a square grid of condition numbers.
    Sweep {
        #[arg(long)]
        case: Case,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// log10 range `lo:hi:step`, used for both κ(A) and κ(A^{1/2}Z).
        #[arg(long)]
        kappa_exp: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated method ids; `all` is the seven column methods.
        #[arg(long, default_value = "all")]
        methods: String,
        /// Output CSV; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time factorizations. Timings use the monotonic clock (nanosecond
    /// resolution on Linux); each (n, method) is timed after one warm-up run.
    Bench {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Problem size; for `laplacian` a perfect square (grid √m × √m).
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        methods: Option<String>,
        /// Timed runs per configuration; the minimum is reported.
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare sweep losses with the theoretical bounds.
    Check {
        #[arg(long)]
        sweep_csv: PathBuf,
        /// Row count m of the sweep problems (the CSV does not record it).
        #[arg(long, default_value_t = 100)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Dense,
    Laplacian,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Breakdown { .. }
        | Error::NotPositiveDefinite { .. }
        | Error::SingularMatrix { .. } => 3,
        _ => 2,
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            Error::Io {
                path: p.to_path_buf(),
                source,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn flush(mut w: Box<dyn Write>) -> Result<(), Error> {
    w.flush().map_err(|source| Error::Io {
        path: PathBuf::from("<output>"),
        source,
    })
}

fn cmd_factor(
    a: &Path,
    z: &Path,
    method: Method,
    out_q: Option<&Path>,
    out_r: Option<&Path>,
    report: bool,
) -> Result<(), Error> {
    eprintln!(
        "factor: a={} z={} method={method} out_q={} out_r={} report={report}",
        a.display(),
        z.display(),
        out_q.map_or("-".into(), |p| p.display().to_string()),
        out_r.map_or("-".into(), |p| p.display().to_string()),
    );
    let op = read_matrix_market(a)?.into_operator()?;
    let z = read_matrix_market(z)?.into_matrix();
    let res = match factor(method, &z, &op) {
        Ok(res) => res,
        Err(err @ Error::Breakdown { column, .. }) => {
            eprintln!("failing column: {column} (zero-based)");
            return Err(err);
        }
        Err(err @ Error::NotPositiveDefinite { pivot, .. }) => {
            eprintln!("failing column: {pivot} (zero-based)");
            return Err(err);
        }
        Err(err) => return Err(err),
    };
    if !res.diagnostics.tiny_pivots.is_empty() {
        eprintln!(
            "warning: tiny pivots at columns {:?}",
            res.diagnostics.tiny_pivots
        );
    }
    if let Some(p) = out_q {
        write_matrix_market(p, &MmObject::Dense(res.q.clone()))?;
    }
    if let Some(p) = out_r {
        write_matrix_market(p, &MmObject::Dense(res.r.clone()))?;
    }
    if report {
        let loss = loss_of_a_orthogonality(&res.q, &op)?;
        let (_, rel) = representation_error(&z, &res.q, &res.r)?;
        println!("mv_count,flops,loss_a_orth,rep_error_rel");
        println!(
            "{},{},{:e},{:e}",
            res.cost.mv_count, res.cost.flops, loss, rel
        );
    }
    Ok(())
}

fn cmd_sweep(config: &SweepConfig, out: Option<&Path>) -> Result<(), Error> {
    eprintln!(
        "sweep: {config} out={}",
        out.map_or("-".into(), |p| p.display().to_string())
    );
    let records = run_sweep(config)?;
    let mut w = output(out)?;
    write_sweep_csv(&records, &mut w)?;
    flush(w)
}

fn cmd_bench(config: &BenchConfig, out: Option<&Path>) -> Result<(), Error> {
    let methods: Vec<String> = config.methods.iter().map(Method::to_string).collect();
    eprintln!(
        "bench: kind={:?} m={} n_list={:?} seed={} methods={} repeats={} out={}",
        config.kind,
        config.m,
        config.n_list,
        config.seed,
        methods.join(","),
        config.repeats,
        out.map_or("-".into(), |p| p.display().to_string()),
    );
    let records = run_bench(config)?;
    let mut w = output(out)?;
    write_bench_csv(&records, &mut w)?;
    flush(w)
}

fn cmd_check(path: &Path, m: usize) -> Result<bool, Error> {
    eprintln!(
        "check: sweep_csv={} m={m} constant={BOUND_CONSTANT}",
        path.display()
    );
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let records = read_sweep_csv(&text)?;
    let report = check_bounds(&records, m);
    println!("method,bound,max_ratio,rows,enforced");
    for s in &report.summaries {
        for (name, slot, enforced) in [
            ("delta1", s.delta1, s.delta1_enforced),
            ("delta2", s.delta2, s.delta2_enforced),
        ] {
            if let Some((max, count)) = slot {
                if name == "delta1" || enforced {
                    println!("{},{name},{max:e},{count},{enforced}", s.method);
                }
            }
        }
    }
    for v in &report.violations {
        let bound = match v.bound {
            Bound::Delta1 => "delta1",
            Bound::Delta2 => "delta2",
        };
        let r = &v.record;
        println!(
            "violation: row {} method={} case={} kappa_a={:e} kappa_az={:e} {bound} ratio={:e}",
            v.row + 1,
            r.method,
            r.case,
            r.kappa_a_target,
            r.kappa_az_target,
            v.ratio
        );
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Factor {
            a,
            z,
            method,
            out_q,
            out_r,
            report,
        } => cmd_factor(&a, &z, method, out_q.as_deref(), out_r.as_deref(), report).map(|()| true),
        Command::Sweep {
            case,
            m,
            n,
            kappa_exp,
            seed,
            methods,
            out,
        } => parse_exponent_range(&kappa_exp)
            .and_then(|exps| {
                Ok(SweepConfig::square(
                    case,
                    m,
                    n,
                    exps,
                    seed,
                    parse_method_list(&methods)?,
                ))
            })
            .and_then(|config| cmd_sweep(&config, out.as_deref()).map(|()| true)),
        Command::Bench {
            kind,
            m,
            n_list,
            seed,
            methods,
            repeats,
            out,
        } => (|| {
            let config = BenchConfig {
                kind: match kind {
                    Kind::Dense => BenchKind::Dense,
                    Kind::Laplacian => BenchKind::Laplacian,
                },
                m,
                n_list,
                seed,
                methods: match methods {
                    Some(list) => parse_method_list(&list)?,
                    None => BenchConfig::default_methods(),
                },
                repeats,
            };
            cmd_bench(&config, out.as_deref()).map(|()| true)
        })(),
        Command::Check { sweep_csv, m } => cmd_check(&sweep_csv, m),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
