//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.
//!
//! The two accuracy sweeps (m = 100, n = 20, κ exponents 0.5..14 step 0.5,
//! both cases, seven methods) are computed once and shared by criteria 5-8.

use std::time::Instant;

use weighted_qr::bench::{run_bench, BenchConfig, BenchKind};
use weighted_qr::metrics::UNIT_ROUNDOFF;
use weighted_qr::sweep::{
    exponent_grid, run_sweep, sweep_csv_string, SweepConfig, SweepRecord, SweepStatus,
};
use weighted_qr::testbed::{build_spd, random_dense_spd, Case};
use weighted_qr::{
    factor, gram_schmidt, Family, Matrix, Method, Orientation, Rng, SpdOperator, Variant,
};

const M: usize = 100;
const N: usize = 20;
const SEED: u64 = 2018;
const BOUND_C: f64 = 10.0;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, failures: Vec<String>, summary: String) -> Outcome {
    let pass = failures.is_empty();
    let detail = if pass {
        summary
    } else {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        format!(
            "{summary}; {} failure(s): {}",
            failures.len(),
            shown.join(" | ")
        )
    };
    Outcome { id, pass, detail }
}

fn bits(m: &Matrix) -> Vec<u64> {
    m.as_slice().iter().map(|v| v.to_bits()).collect()
}

/// Textbook MGS in the Euclidean inner product, written independently of the
/// library engine.
fn reference_mgs(z: &Matrix) -> (Matrix, Matrix) {
    let (m, n) = z.shape();
    let mut q = z.clone();
    let mut r = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..j {
            let mut s = 0.0;
            for k in 0..m {
                s += q[(k, i)] * q[(k, j)];
            }
            r[(i, j)] = s;
            for k in 0..m {
                let v = q[(k, i)];
                q[(k, j)] -= s * v;
            }
        }
        let mut s = 0.0;
        for k in 0..m {
            s += q[(k, j)] * q[(k, j)];
        }
        let d = s.sqrt();
        r[(j, j)] = d;
        for k in 0..m {
            q[(k, j)] /= d;
        }
    }
    (q, r)
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_1_mv_counts() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for &(m, n) in &[(30usize, 6usize), (100, 20), (500, 40)] {
        let mut rng = Rng::new(m as u64 * 7 + n as u64);
        let op = random_dense_spd(m, &mut rng);
        let z = rng.normal_matrix(m, n);
        for method in Method::all() {
            let before = op.mv_count();
            let res = factor(method, &z, &op).expect("well-conditioned instance");
            let delta = op.mv_count() - before;
            let expect = match method.variant() {
                Some(Variant::Naive) => 2 * n as u64,
                _ => n as u64,
            };
            runs += 1;
            if delta != expect || res.cost.mv_count != expect {
                failures.push(format!("{method} m={m} n={n}: {delta} (expected {expect})"));
            }
        }
    }
    outcome(
        "1",
        failures,
        format!("{runs} factorizations, naive = 2n, ha/hp/cholqr = n"),
    )
}

fn criterion_2_col_row_bitwise() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = Rng::new(SEED + 2);
    for k in 0..50 {
        let m = 2 + (rng.uniform() * 60.0) as usize;
        let n = 1 + (rng.uniform() * m as f64) as usize;
        let kappa = 10f64.powf(rng.uniform() * 8.0);
        let (_, op) = build_spd(m, kappa, &mut rng).unwrap();
        let z = rng.normal_matrix(m, n);
        let col = gram_schmidt(&z, &op, Family::Mgs, Variant::Naive, Orientation::Col);
        let row = gram_schmidt(&z, &op, Family::Mgs, Variant::Naive, Orientation::Row);
        match (col, row) {
            (Ok(c), Ok(r)) => {
                if bits(&c.q) != bits(&r.q) || bits(&c.r) != bits(&r.r) {
                    failures.push(format!("instance {k} (m={m}, n={n}) differs"));
                }
            }
            (c, r) => failures.push(format!("instance {k}: col {:?} row {:?}", c.err(), r.err())),
        }
    }
    outcome(
        "2",
        failures,
        "50 random instances, mgs-naive-col vs mgs-naive-row".into(),
    )
}

fn criterion_3_identity_reduction() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = Rng::new(SEED + 3);
    let mut worst_hp = 0.0_f64;
    for k in 0..20 {
        let m = 3 + (rng.uniform() * 80.0) as usize;
        let n = 1 + (rng.uniform() * m as f64) as usize;
        let z = rng.normal_matrix(m, n);
        let op = SpdOperator::identity(m);
        let (q_ref, r_ref) = reference_mgs(&z);
        let z_norm = weighted_qr::decomp::spectral_norm(&z).unwrap();
        for variant in [Variant::Naive, Variant::Ha, Variant::Hp] {
            for orientation in [Orientation::Col, Orientation::Row] {
                let res = gram_schmidt(&z, &op, Family::Mgs, variant, orientation).unwrap();
                let label = Method::gs(Family::Mgs, variant, orientation);
                if variant == Variant::Hp {
                    for j in 0..n {
                        let dq = res
                            .q
                            .col(j)
                            .iter()
                            .zip(q_ref.col(j))
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max);
                        let dr = res
                            .r
                            .col(j)
                            .iter()
                            .zip(r_ref.col(j))
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max);
                        worst_hp = worst_hp.max(dq).max(dr / z_norm);
                        if dq > 1e-14 * z_norm.max(1.0) || dr > 1e-14 * z_norm {
                            failures.push(format!("{label} instance {k} column {j}"));
                        }
                    }
                } else if bits(&res.q) != bits(&q_ref) || bits(&res.r) != bits(&r_ref) {
                    failures.push(format!("{label} instance {k} not bitwise equal"));
                }
            }
        }
    }
    outcome(
        "3",
        failures,
        format!("20 instances, naive/ha bitwise, hp max deviation {worst_hp:.1e}"),
    )
}

fn criterion_4_exact_oracle() -> Outcome {
    let z = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
    let op = SpdOperator::dense(Matrix::from_diag(&[1.0, 4.0])).unwrap();
    let q = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.5]]);
    let r = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 2.0]]);
    let mut failures = Vec::new();
    for method in Method::all() {
        match factor(method, &z, &op) {
            Ok(res) if res.q == q && res.r == r => {}
            Ok(res) => failures.push(format!(
                "{method}: Q={:?} R={:?}",
                res.q.as_slice(),
                res.r.as_slice()
            )),
            Err(e) => failures.push(format!("{method}: {e}")),
        }
    }
    outcome(
        "4",
        failures,
        "diag(1,4) instance exact for all 13 methods".into(),
    )
}

fn ok_rows<'a>(
    recs: &'a [SweepRecord],
    method: Method,
) -> impl Iterator<Item = &'a SweepRecord> + 'a {
    recs.iter().filter(move |r| r.method == method && r.is_ok())
}

fn slope_vs_kappa_az(recs: &[SweepRecord], method: Method) -> (f64, usize) {
    let pts: Vec<(f64, f64)> = ok_rows(recs, method)
        .filter_map(|r| {
            let k = r.kappa_az_measured?;
            let loss = r.loss_a_orth?;
            (1e2..=1e7).contains(&k).then(|| (k.log10(), loss.log10()))
        })
        .collect();
    (least_squares_slope(&pts), pts.len())
}

fn criterion_5_regimes(case1: &[SweepRecord]) -> Outcome {
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (method, target, tol) in [
        (Method::MGS_NAIVE, 1.0, 0.3),
        (Method::MGS_HA, 1.0, 0.3),
        (Method::MGS_HP, 1.0, 0.3),
        (Method::CGS_NAIVE, 2.0, 0.4),
        (Method::CholeskyQr, 2.0, 0.4),
    ] {
        let (slope, count) = slope_vs_kappa_az(case1, method);
        parts.push(format!("{method} slope {slope:.2} ({count} pts)"));
        if !((slope - target).abs() <= tol) {
            failures.push(format!(
                "{method} slope {slope:.3} not within {target}±{tol}"
            ));
        }
    }
    let mut fail_hi = 0;
    let mut ok_lo = 0;
    for r in case1.iter().filter(|r| r.method == Method::CholeskyQr) {
        let Some(k) = r.kappa_az_measured else {
            continue;
        };
        if k >= 1e9 {
            if r.status == SweepStatus::NotPosDef {
                fail_hi += 1;
            } else {
                failures.push(format!(
                    "cholqr {} at κ_AZ={k:.2e}, κ_A={:.1e}",
                    r.status, r.kappa_a_target
                ));
            }
        } else if k <= 1e7 {
            if r.is_ok() {
                ok_lo += 1;
            } else {
                failures.push(format!(
                    "cholqr {} at κ_AZ={k:.2e}, κ_A={:.1e}",
                    r.status, r.kappa_a_target
                ));
            }
        }
    }
    parts.push(format!(
        "cholqr: {fail_hi} notposdef cells at κ_AZ ≥ 1e9, {ok_lo} ok cells at κ_AZ ≤ 1e7"
    ));
    outcome("5", failures, parts.join("; "))
}

fn mgs_methods() -> [Method; 3] {
    [Method::MGS_NAIVE, Method::MGS_HA, Method::MGS_HP]
}

fn criterion_6_delta1(case1: &[SweepRecord], case2: &[SweepRecord]) -> Outcome {
    let scale = (M as f64).powf(1.5);
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    let mut count = 0;
    for r in case1.iter().chain(case2) {
        if !mgs_methods().contains(&r.method) || !r.is_ok() {
            continue;
        }
        let (Some(loss), Some(d1)) = (r.loss_a_orth, r.delta1) else {
            continue;
        };
        if d1 >= 1e-2 {
            continue;
        }
        count += 1;
        let ratio = loss / (scale * d1);
        worst = worst.max(ratio);
        if ratio > BOUND_C {
            failures.push(format!(
                "{} case {} κ_A={:.1e} κ_AZ={:.1e}: ratio {ratio:.2}",
                r.method, r.case, r.kappa_a_target, r.kappa_az_target
            ));
        }
    }
    outcome(
        "6",
        failures,
        format!("{count} rows, max loss/(m^1.5 δ1) = {worst:.2e} (limit {BOUND_C})"),
    )
}

fn criterion_7_ha_bound(case2: &[SweepRecord]) -> Outcome {
    let scale = (M as f64).powf(1.5);
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    let mut count = 0;
    for r in ok_rows(case2, Method::MGS_HA) {
        let (Some(loss), Some(d2)) = (r.loss_a_orth, r.delta2) else {
            continue;
        };
        if d2 >= 1e-2 {
            continue;
        }
        count += 1;
        let ratio = loss / (scale * d2);
        worst = worst.max(ratio);
        if ratio > BOUND_C {
            failures.push(format!(
                "κ_A={:.1e} κ_AZ={:.1e}: ratio {ratio:.2}",
                r.kappa_a_target, r.kappa_az_target
            ));
        }
    }
    let mut cells = 0;
    let mut ha_wins = 0;
    for ha in ok_rows(case2, Method::MGS_HA) {
        let (Some(kz), ka) = (ha.kappa_az_measured, ha.kappa_a_measured) else {
            continue;
        };
        if ka < 1e8 || kz < 1e8 {
            continue;
        }
        let naive = case2.iter().find(|r| {
            r.method == Method::MGS_NAIVE
                && r.kappa_a_target == ha.kappa_a_target
                && r.kappa_az_target == ha.kappa_az_target
        });
        let Some(naive) = naive.filter(|r| r.is_ok()) else {
            continue;
        };
        cells += 1;
        if ha.loss_a_orth <= naive.loss_a_orth {
            ha_wins += 1;
        }
    }
    let frac = if cells > 0 {
        ha_wins as f64 / cells as f64
    } else {
        0.0
    };
    if cells == 0 || frac < 0.8 {
        failures.push(format!(
            "mgs-ha ≤ mgs-naive on {ha_wins}/{cells} cells ({:.0}%)",
            100.0 * frac
        ));
    }
    outcome(
        "7",
        failures,
        format!(
            "{count} rows, max loss/(m^1.5 δ2) = {worst:.2e}; mgs-ha ≤ mgs-naive on {ha_wins}/{cells} ill-conditioned cells"
        ),
    )
}

fn criterion_8_representation(case1: &[SweepRecord], case2: &[SweepRecord]) -> Outcome {
    let limit = 100.0 * (N as f64).powf(1.5) * UNIT_ROUNDOFF;
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    let mut count = 0;
    for r in case1.iter().chain(case2).filter(|r| r.is_ok()) {
        let rel = r.rep_error_rel.expect("ok rows carry rep error");
        count += 1;
        worst = worst.max(rel);
        if rel > limit {
            failures.push(format!(
                "{} case {} κ_A={:.1e} κ_AZ={:.1e}: {rel:.2e}",
                r.method, r.case, r.kappa_a_target, r.kappa_az_target
            ));
        }
    }
    outcome(
        "8",
        failures,
        format!("{count} factorizations, max normalized error {worst:.2e} (limit {limit:.2e})"),
    )
}

fn criterion_9_timing() -> Outcome {
    let cfg = BenchConfig {
        kind: BenchKind::Dense,
        m: 2000,
        n_list: vec![50],
        seed: SEED,
        methods: vec![Method::MGS_NAIVE, Method::MGS_HA, Method::MGS_HP],
        repeats: 3,
    };
    let recs = run_bench(&cfg).expect("bench runs");
    let t = |m: Method| recs.iter().find(|r| r.method == m).unwrap().seconds;
    let (naive, ha, hp) = (t(Method::MGS_NAIVE), t(Method::MGS_HA), t(Method::MGS_HP));
    let mut failures = Vec::new();
    if !(ha < naive) {
        failures.push(format!("ha {ha:.4}s not faster than naive {naive:.4}s"));
    }
    if !(hp <= ha) {
        failures.push(format!("hp {hp:.4}s slower than ha {ha:.4}s"));
    }
    outcome(
        "9",
        failures,
        format!(
            "dense m=2000 n=50: naive {naive:.4}s, ha {ha:.4}s, hp {hp:.4}s; naive/ha = {:.2}x, naive/hp = {:.2}x",
            naive / ha,
            naive / hp
        ),
    )
}

fn criterion_10_determinism(case2: &[SweepRecord]) -> Outcome {
    let exps = exponent_grid(0.5, 14.0, 1.5).unwrap();
    let cfg = SweepConfig::square(Case::Smallest, M, N, exps, SEED, Method::standard_set());
    let a = sweep_csv_string(&run_sweep(&cfg).unwrap());
    let b = sweep_csv_string(&run_sweep(&cfg).unwrap());
    let mut failures = Vec::new();
    if a != b {
        failures.push("repeated sweep CSV differs".into());
    }
    // the same cells inside the full grid must be reproduced exactly
    let sub: Vec<SweepRecord> = case2
        .iter()
        .filter(|r| {
            cfg.kappa_a_exponents
                .iter()
                .any(|e| 10f64.powf(*e) == r.kappa_a_target)
                && cfg
                    .kappa_az_exponents
                    .iter()
                    .any(|e| 10f64.powf(*e) == r.kappa_az_target)
        })
        .cloned()
        .collect();
    if sweep_csv_string(&sub) != a {
        failures.push("sub-grid cells differ from the full sweep".into());
    }
    outcome(
        "10",
        failures,
        format!(
            "{} CSV bytes identical across runs and with the full grid",
            a.len()
        ),
    )
}

fn main() {
    let mut results = vec![
        criterion_1_mv_counts(),
        criterion_2_col_row_bitwise(),
        criterion_3_identity_reduction(),
        criterion_4_exact_oracle(),
    ];

    let exps = exponent_grid(0.5, 14.0, 0.5).unwrap();
    let start = Instant::now();
    let case1 = run_sweep(&SweepConfig::square(
        Case::Largest,
        M,
        N,
        exps.clone(),
        SEED,
        Method::standard_set(),
    ))
    .unwrap();
    let t1 = start.elapsed().as_secs_f64();
    let case2 = run_sweep(&SweepConfig::square(
        Case::Smallest,
        M,
        N,
        exps,
        SEED,
        Method::standard_set(),
    ))
    .unwrap();
    let t2 = start.elapsed().as_secs_f64() - t1;
    eprintln!(
        "sweeps: case 1 {t1:.1}s ({} rows), case 2 {t2:.1}s ({} rows)",
        case1.len(),
        case2.len()
    );

    let mut c5 = criterion_5_regimes(&case1);
    if t1 > 600.0 {
        c5.pass = false;
        c5.detail
            .push_str(&format!("; case-1 sweep took {t1:.0}s > 600s"));
    }
    results.push(c5);
    results.push(criterion_6_delta1(&case1, &case2));
    results.push(criterion_7_ha_bound(&case2));
    results.push(criterion_8_representation(&case1, &case2));
    results.push(criterion_9_timing());
    results.push(criterion_10_determinism(&case2));

    let mut failed = 0;
    for r in &results {
        println!(
            "[{}] criterion {:>2}: {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.detail
        );
        failed += usize::from(!r.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
