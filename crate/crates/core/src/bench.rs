//! Wall-clock comparison of the factorizations.
//!
//! Times come from `std::time::Instant` (monotonic, nanosecond resolution on
//! Linux). Each `(n, method)` pair is run once untimed, then `repeats` times;
//! the fastest run is reported.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::operator::SpdOperator;
use crate::ortho::{factor, Method};
use crate::rng::Rng;
use crate::testbed::{laplacian_spd, random_dense_spd};

pub const BENCH_CSV_HEADER: [&str; 6] = ["kind", "m", "n", "method", "seconds", "mv_count"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchKind {
    /// Random dense diagonally dominant spd matrix.
    Dense,
    /// 5-point Laplacian on a `√m x √m` grid.
    Laplacian,
}

impl fmt::Display for BenchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchKind::Dense => "dense",
            BenchKind::Laplacian => "laplacian",
        })
    }
}

impl FromStr for BenchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(BenchKind::Dense),
            "laplacian" => Ok(BenchKind::Laplacian),
            other => Err(Error::InvalidArgument(format!(
                "unknown bench kind `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub kind: BenchKind,
    pub m: usize,
    pub n_list: Vec<usize>,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub repeats: usize,
}

impl BenchConfig {
    /// The method set of the timing study.
    pub fn default_methods() -> Vec<Method> {
        vec![
            Method::MGS_NAIVE,
            Method::MGS_HA,
            Method::MGS_HP,
            Method::CholeskyQr,
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub kind: BenchKind,
    pub m: usize,
    pub n: usize,
    pub method: Method,
    pub seconds: f64,
    pub mv_count: u64,
}

pub fn bench_operator(kind: BenchKind, m: usize, seed: u64) -> Result<SpdOperator> {
    match kind {
        BenchKind::Dense => Ok(random_dense_spd(m, &mut Rng::derived(seed, &[0]))),
        BenchKind::Laplacian => {
            let side = (m as f64).sqrt().round() as usize;
            if side * side != m {
                return Err(Error::InvalidArgument(format!(
                    "laplacian bench needs a square m, got {m}"
                )));
            }
            laplacian_spd(side, side)
        }
    }
}

pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if config.repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    let op = bench_operator(config.kind, config.m, config.seed)?;
    let mut out = Vec::new();
    for &n in &config.n_list {
        if n == 0 || n > config.m {
            return Err(Error::InvalidArgument(format!(
                "n = {n} outside 1..={}",
                config.m
            )));
        }
        let z = Rng::derived(config.seed, &[1, n as u64]).normal_matrix(config.m, n);
        for &method in &config.methods {
            factor(method, &z, &op)?;
            let mut best = f64::INFINITY;
            let mut mv_count = 0;
            for _ in 0..config.repeats {
                let start = Instant::now();
                let res = factor(method, &z, &op)?;
                best = best.min(start.elapsed().as_secs_f64());
                mv_count = res.cost.mv_count;
            }
            out.push(BenchRecord {
                kind: config.kind,
                m: config.m,
                n,
                method,
                seconds: best,
                mv_count,
            });
        }
    }
    Ok(out)
}

pub fn write_bench_csv<W: std::io::Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.kind.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.method.to_string(),
            format!("{:e}", r.seconds),
            r.mv_count.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
