//! Empirical bound checks over sweep records.
//!
//! For every successful row whose bound quantity `δ` is below
//! [`VALIDITY_THRESHOLD`], the ratio `loss / (m^{3/2} δ)` is formed. The MGS
//! variants are held to `δ1 = u κ(A) κ(A^{1/2}Z)`; MGS-HA additionally to
//! `δ2 = u (κ(A) + κ(A^{1/2}Z))`. The unknown constant of the bound is
//! replaced by [`BOUND_CONSTANT`].

use std::collections::BTreeMap;

use crate::ortho::{Family, Method, Variant};
use crate::sweep::SweepRecord;

pub const BOUND_CONSTANT: f64 = 10.0;

/// Rows with `δ` at or above this are outside the regime where the bound
/// applies.
pub const VALIDITY_THRESHOLD: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    Delta1,
    Delta2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    /// Largest `loss / (m^{3/2} δ1)` and the number of rows it was taken over.
    pub delta1: Option<(f64, usize)>,
    pub delta2: Option<(f64, usize)>,
    pub delta1_enforced: bool,
    pub delta2_enforced: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub row: usize,
    pub bound: Bound,
    pub ratio: f64,
    pub record: SweepRecord,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub m: usize,
    pub summaries: Vec<MethodSummary>,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn delta1_applies(method: Method) -> bool {
    method.family() == Some(Family::Mgs)
}

pub fn delta2_applies(method: Method) -> bool {
    method.family() == Some(Family::Mgs) && method.variant() == Some(Variant::Ha)
}

/// Ratio `loss / (m^{3/2} δ)` for one record, if the record is in scope.
pub fn bound_ratio(record: &SweepRecord, m: usize, bound: Bound) -> Option<f64> {
    let loss = record.loss_a_orth?;
    let delta = match bound {
        Bound::Delta1 => record.delta1?,
        Bound::Delta2 => record.delta2?,
    };
    if !record.is_ok() || !(delta < VALIDITY_THRESHOLD) {
        return None;
    }
    Some(loss / ((m as f64).powf(1.5) * delta))
}

pub fn check_bounds(records: &[SweepRecord], m: usize) -> CheckReport {
    let mut per_method: BTreeMap<Method, MethodSummary> = BTreeMap::new();
    let mut violations = Vec::new();
    for (row, rec) in records.iter().enumerate() {
        let summary = per_method
            .entry(rec.method)
            .or_insert_with(|| MethodSummary {
                method: rec.method,
                delta1: None,
                delta2: None,
                delta1_enforced: delta1_applies(rec.method),
                delta2_enforced: delta2_applies(rec.method),
            });
        for (bound, slot, enforced) in [
            (Bound::Delta1, &mut summary.delta1, summary.delta1_enforced),
            (Bound::Delta2, &mut summary.delta2, summary.delta2_enforced),
        ] {
            let Some(ratio) = bound_ratio(rec, m, bound) else {
                continue;
            };
            let (max, count) = slot.get_or_insert((0.0, 0));
            *max = max.max(ratio);
            *count += 1;
            if enforced && !(ratio <= BOUND_CONSTANT) {
                violations.push(Violation {
                    row,
                    bound,
                    ratio,
                    record: rec.clone(),
                });
            }
        }
    }
    CheckReport {
        m,
        summaries: per_method.into_values().collect(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::UNIT_ROUNDOFF;
    use crate::sweep::SweepStatus;
    use crate::testbed::Case;

    fn record(method: Method, loss: f64, d1: f64, d2: f64) -> SweepRecord {
        SweepRecord {
            case: Case::Smallest,
            kappa_a_target: 1.0,
            kappa_az_target: 1.0,
            kappa_a_measured: 1.0,
            kappa_az_measured: Some(1.0),
            method,
            status: SweepStatus::Ok,
            loss_a_orth: Some(loss),
            rep_error_rel: Some(0.0),
            delta1: Some(d1),
            delta2: Some(d2),
        }
    }

    #[test]
    fn forced_violation_is_caught() {
        let u = UNIT_ROUNDOFF;
        let recs = vec![record(Method::MGS_NAIVE, 1.0, u, 2.0 * u)];
        let rep = check_bounds(&recs, 100);
        assert!(!rep.passed());
        assert_eq!(rep.violations[0].bound, Bound::Delta1);
    }

    #[test]
    fn ha_is_held_to_delta2_and_cgs_only_reported() {
        let u = UNIT_ROUNDOFF;
        let recs = vec![
            record(Method::MGS_HA, 1e-10, 1e-5, u),
            record(Method::CGS_NAIVE, 1.0, u, u),
        ];
        let rep = check_bounds(&recs, 10);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].bound, Bound::Delta2);
        let cgs = rep
            .summaries
            .iter()
            .find(|s| s.method == Method::CGS_NAIVE)
            .unwrap();
        assert!(!cgs.delta1_enforced);
        assert!(cgs.delta1.unwrap().0 > BOUND_CONSTANT);
    }

    #[test]
    fn rows_outside_validity_are_skipped() {
        let recs = vec![record(Method::MGS_HP, 1.0, 0.5, 0.5)];
        let rep = check_bounds(&recs, 100);
        assert!(rep.passed());
        assert_eq!(rep.summaries[0].delta1, None);
    }
}
