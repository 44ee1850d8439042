//! Condition-number sweeps over a grid of `(κ(A), κ(A^{1/2}Z))` targets and
//! their CSV representation.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::decomp::spectral_norm;
use crate::error::{Error, Result};
use crate::metrics::{
    delta_bounds, kappa_weighted, loss_of_a_orthogonality, representation_error_with_norm,
};
use crate::ortho::{factor, Method};
use crate::rng::Rng;
use crate::testbed::{build_spd, build_z, Case, CaseSpec};

/// Column header of the sweep CSV.
pub const SWEEP_CSV_HEADER: [&str; 11] = [
    "case",
    "kappa_a_target",
    "kappa_az_target",
    "kappa_a_measured",
    "kappa_az_measured",
    "method",
    "status",
    "loss_a_orth",
    "rep_error_rel",
    "delta1",
    "delta2",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub case: Case,
    pub m: usize,
    pub n: usize,
    /// log10 of the κ(A) targets, ascending.
    pub kappa_a_exponents: Vec<f64>,
    /// log10 of the κ(A^{1/2}Z) targets, ascending.
    pub kappa_az_exponents: Vec<f64>,
    pub seed: u64,
    pub methods: Vec<Method>,
}

impl SweepConfig {
    /// Square grid with the same exponents on both axes.
    pub fn square(
        case: Case,
        m: usize,
        n: usize,
        exponents: Vec<f64>,
        seed: u64,
        methods: Vec<Method>,
    ) -> Self {
        Self {
            case,
            m,
            n,
            kappa_a_exponents: exponents.clone(),
            kappa_az_exponents: exponents,
            seed,
            methods,
        }
    }
}

impl fmt::Display for SweepConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let methods: Vec<String> = self.methods.iter().map(Method::to_string).collect();
        write!(
            f,
            "case={} m={} n={} kappa_a_exp={:?} kappa_az_exp={:?} seed={} methods={}",
            self.case,
            self.m,
            self.n,
            self.kappa_a_exponents,
            self.kappa_az_exponents,
            self.seed,
            methods.join(",")
        )
    }
}

/// `lo, lo + step, ..., hi` (inclusive up to rounding), computed as
/// `lo + k·step` so no error accumulates.
pub fn exponent_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(Error::InvalidArgument(format!(
            "bad exponent range {lo}:{hi}:{step}"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

/// Parses `lo:hi:step`.
pub fn parse_exponent_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(Error::InvalidArgument(format!(
            "expected lo:hi:step, got `{s}`"
        )));
    };
    let p = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("bad number `{t}` in `{s}`")))
    };
    exponent_grid(p(lo)?, p(hi)?, p(step)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepStatus {
    Ok,
    Breakdown,
    NotPosDef,
    /// The κ(A^{1/2}Z) target is below what the selected eigenvalues allow.
    Infeasible,
    /// Any other numerical failure (e.g. a non-converged eigensolver).
    Error,
}

impl fmt::Display for SweepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepStatus::Ok => "ok",
            SweepStatus::Breakdown => "breakdown",
            SweepStatus::NotPosDef => "notposdef",
            SweepStatus::Infeasible => "infeasible",
            SweepStatus::Error => "error",
        })
    }
}

impl FromStr for SweepStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ok" => SweepStatus::Ok,
            "breakdown" => SweepStatus::Breakdown,
            "notposdef" => SweepStatus::NotPosDef,
            "infeasible" => SweepStatus::Infeasible,
            "error" => SweepStatus::Error,
            other => return Err(Error::InvalidArgument(format!("unknown status `{other}`"))),
        })
    }
}

/// One `(cell, method)` outcome. Loss and representation error are present
/// only for `status == Ok`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub case: Case,
    pub kappa_a_target: f64,
    pub kappa_az_target: f64,
    pub kappa_a_measured: f64,
    pub kappa_az_measured: Option<f64>,
    pub method: Method,
    pub status: SweepStatus,
    pub loss_a_orth: Option<f64>,
    pub rep_error_rel: Option<f64>,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
}

impl SweepRecord {
    pub fn is_ok(&self) -> bool {
        self.status == SweepStatus::Ok
    }
}

/// Runs every method on every grid cell. Cell failures become status rows;
/// output order is `κ(A)` outer, `κ(A^{1/2}Z)` inner, methods in config
/// order. Each cell draws from its own stream derived from the seed and the
/// cell's exponents, so a cell's records do not depend on the rest of the
/// grid.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    if config.methods.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one method".into(),
        ));
    }
    if config.n == 0 || config.n > config.m || config.m < 2 {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= m and 1 <= n <= m, got m = {}, n = {}",
            config.m, config.n
        )));
    }
    let mut out = Vec::with_capacity(
        config.kappa_a_exponents.len() * config.kappa_az_exponents.len() * config.methods.len(),
    );
    for &ea in &config.kappa_a_exponents {
        for &ez in &config.kappa_az_exponents {
            out.extend(run_cell(config, ea, ez)?);
        }
    }
    Ok(out)
}

/// Records for a single grid cell, identical to the corresponding slice of
/// [`run_sweep`].
pub fn run_cell(config: &SweepConfig, exp_a: f64, exp_az: f64) -> Result<Vec<SweepRecord>> {
    let kappa_a_target = 10f64.powf(exp_a);
    let kappa_az_target = 10f64.powf(exp_az);
    let mut rng = Rng::derived(
        config.seed,
        &[
            config.case.number() as u64,
            exp_a.to_bits(),
            exp_az.to_bits(),
        ],
    );
    let (factors, op) = build_spd(config.m, kappa_a_target, &mut rng)?;
    let kappa_a_measured = factors.kappa();
    let spec = CaseSpec {
        case: config.case,
        m: config.m,
        n: config.n,
        kappa_a_target,
        kappa_az_target,
        seed: config.seed,
    };
    let blank = |method: Method, status: SweepStatus, kaz: Option<f64>| {
        let deltas = kaz.map(|k| delta_bounds(kappa_a_measured, k));
        SweepRecord {
            case: config.case,
            kappa_a_target,
            kappa_az_target,
            kappa_a_measured,
            kappa_az_measured: kaz,
            method,
            status,
            loss_a_orth: None,
            rep_error_rel: None,
            delta1: deltas.map(|d| d.0),
            delta2: deltas.map(|d| d.1),
        }
    };

    let z = match build_z(&spec, &factors, &mut rng) {
        Ok(z) => z,
        Err(Error::InfeasibleTarget { .. }) => {
            return Ok(config
                .methods
                .iter()
                .map(|&m| blank(m, SweepStatus::Infeasible, None))
                .collect());
        }
        Err(e) => return Err(e),
    };
    let kaz = kappa_weighted(&factors, &z).ok();
    let z_norm = spectral_norm(&z)?;

    let mut records = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let mut rec = blank(method, SweepStatus::Ok, kaz);
        let measured = factor(method, &z, &op).and_then(|res| {
            let loss = loss_of_a_orthogonality(&res.q, &op)?;
            let (_, rel) = representation_error_with_norm(&z, z_norm, &res.q, &res.r)?;
            Ok((loss, rel))
        });
        match measured {
            Ok((loss, rel)) => {
                rec.loss_a_orth = Some(loss);
                rec.rep_error_rel = Some(rel);
            }
            Err(Error::Breakdown { .. }) => rec.status = SweepStatus::Breakdown,
            Err(Error::NotPositiveDefinite { .. }) => rec.status = SweepStatus::NotPosDef,
            Err(_) => rec.status = SweepStatus::Error,
        }
        records.push(rec);
    }
    Ok(records)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// Writes records as CSV. Numbers use shortest round-trip scientific
/// notation, independent of locale.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.case.to_string(),
            format!("{:e}", r.kappa_a_target),
            format!("{:e}", r.kappa_az_target),
            format!("{:e}", r.kappa_a_measured),
            fmt_opt(r.kappa_az_measured),
            r.method.to_string(),
            r.status.to_string(),
            fmt_opt(r.loss_a_orth),
            fmt_opt(r.rep_error_rel),
            fmt_opt(r.delta1),
            fmt_opt(r.delta2),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn sweep_csv_string(records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_sweep_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// Parses a sweep CSV produced by [`write_sweep_csv`].
pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    if header.iter().ne(SWEEP_CSV_HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "unexpected header `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut out = Vec::new();
    for (k, row) in rdr.records().enumerate() {
        let line = k + 2;
        let row = row?;
        let err = |what: &str, v: &str| Error::Parse {
            line,
            message: format!("bad {what} `{v}`"),
        };
        let num = |i: usize| -> Result<f64> {
            row[i]
                .parse::<f64>()
                .map_err(|_| err(SWEEP_CSV_HEADER[i], &row[i]))
        };
        let opt = |i: usize| -> Result<Option<f64>> {
            if row[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        out.push(SweepRecord {
            case: row[0].parse().map_err(|_| err("case", &row[0]))?,
            kappa_a_target: num(1)?,
            kappa_az_target: num(2)?,
            kappa_a_measured: num(3)?,
            kappa_az_measured: opt(4)?,
            method: row[5].parse().map_err(|_| err("method", &row[5]))?,
            status: row[6].parse().map_err(|_| err("status", &row[6]))?,
            loss_a_orth: opt(7)?,
            rep_error_rel: opt(8)?,
            delta1: opt(9)?,
            delta2: opt(10)?,
        });
    }
    Ok(out)
}
