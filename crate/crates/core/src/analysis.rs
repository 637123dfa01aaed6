//! Closed-form thresholds for single-symbol redundancy, and exact
//! redundancy measurement over small instances.

use crate::error::{Error, Result};
use crate::minimal_boxes::box_count_constant;
use crate::oracle::{exhaustive_count, redundancy, ConstraintParams, Family};
use crate::zero_boxes::param_v;
use crate::zero_cubes::param_l;
use std::time::Instant;

/// A computed bound: the real-valued threshold, the least integer parameter
/// meeting it, and a tag naming the formula that produced it.
#[derive(Debug, Clone)]
pub struct ThresholdReport {
    pub family: Family,
    pub d: usize,
    pub q: usize,
    pub n: usize,
    pub bound: f64,
    pub minimal: usize,
    pub formula: &'static str,
}

fn log_q(q: usize, x: f64) -> f64 {
    x.ln() / (q as f64).ln()
}

/// Threshold on the cube side L above which the zero-cubes-free constraint
/// costs at most one redundancy symbol:
/// `(d log_q n + log_q(q/(q-1)))^(1/d)`.
pub fn threshold_l_zero_free(n: usize, d: usize, q: usize) -> Result<ThresholdReport> {
    check_nq(n, d, q)?;
    let bound = (d as f64 * log_q(q, n as f64) + log_q(q, q as f64 / (q - 1) as f64))
        .powf(1.0 / d as f64);
    // integer form: smallest L with (q-1) q^(L^d) >= q n^d
    let minimal = min_l_satisfying(n, d, q, 1);
    Ok(ThresholdReport {
        family: Family::ZeroCubesFree,
        d,
        q,
        n,
        bound,
        minimal,
        formula: "union-bound-zero-cubes",
    })
}

/// Threshold for the cubes-unique constraint:
/// `(2d log_q n + log_q(q/(q-1)))^(1/d)`.
pub fn threshold_l_unique(n: usize, d: usize, q: usize) -> Result<ThresholdReport> {
    check_nq(n, d, q)?;
    let bound = (2.0 * d as f64 * log_q(q, n as f64) + log_q(q, q as f64 / (q - 1) as f64))
        .powf(1.0 / d as f64);
    let minimal = min_l_satisfying(n, d, q, 2);
    Ok(ThresholdReport {
        family: Family::CubesUnique,
        d,
        q,
        n,
        bound,
        minimal,
        formula: "union-bound-cubes-unique",
    })
}

/// Smallest L with `(q-1) q^(L^d) >= q n^(mult*d)`, evaluated in exact
/// integer arithmetic.
fn min_l_satisfying(n: usize, d: usize, q: usize, mult: u32) -> usize {
    let rhs = (q as u128).saturating_mul((n as u128).saturating_pow(mult * d as u32));
    let mut l = 1usize;
    loop {
        let exp = (l as u128).saturating_pow(d as u32);
        let mut lhs = (q - 1) as u128;
        let mut ok = false;
        for _ in 0..exp {
            lhs = lhs.saturating_mul(q as u128);
            if lhs >= rhs {
                ok = true;
                break;
            }
        }
        if ok || lhs >= rhs {
            return l;
        }
        l += 1;
    }
}

/// Threshold on the box volume for the zero-boxes-free constraint, with the
/// order-one term instantiated by its explicit constant:
/// `d log_q n + (d-1)/d log_q log_q n + log_q(C_d (d+1)^((d-1)/d)) + log_q(q/(q-1))`.
pub fn threshold_v_zero_free(n: usize, d: usize, q: usize) -> Result<ThresholdReport> {
    threshold_v(n, d, q, 1)
}

/// Same with the doubled position term for the boxes-unique constraint.
pub fn threshold_v_unique(n: usize, d: usize, q: usize) -> Result<ThresholdReport> {
    threshold_v(n, d, q, 2)
}

fn threshold_v(n: usize, d: usize, q: usize, mult: usize) -> Result<ThresholdReport> {
    check_nq(n, d, q)?;
    if n < 4 {
        return Err(Error::InvalidParameter("volume thresholds need n >= 4".into()));
    }
    let frac = (d - 1) as f64 / d as f64;
    let loglog = if d == 1 {
        0.0
    } else {
        frac * log_q(q, log_q(q, n as f64))
    };
    let c = log_q(q, box_count_constant(d) * ((d + 1) as f64).powf(frac));
    let bound = (mult * d) as f64 * log_q(q, n as f64)
        + loglog
        + c
        + log_q(q, q as f64 / (q - 1) as f64);
    let minimal = bound.ceil().max(1.0) as usize;
    Ok(ThresholdReport {
        family: if mult == 1 {
            Family::ZeroBoxesFree
        } else {
            Family::BoxesUnique
        },
        d,
        q,
        n,
        bound,
        minimal,
        formula: if mult == 1 {
            "union-bound-zero-boxes"
        } else {
            "union-bound-boxes-unique"
        },
    })
}

fn check_nq(n: usize, d: usize, q: usize) -> Result<()> {
    if n < 2 || d == 0 || q < 2 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2, d >= 1, q >= 2; got n={n} d={d} q={q}"
        )));
    }
    Ok(())
}

/// Thresholds for one family, plus the matching codec parameter when the
/// family has an encoder.
pub fn bounds_report(family: Family, n: usize, d: usize, q: usize) -> Result<String> {
    let mut out = String::new();
    let rep = match family {
        Family::ZeroCubesFree => threshold_l_zero_free(n, d, q)?,
        Family::CubesUnique => threshold_l_unique(n, d, q)?,
        Family::ZeroBoxesFree => threshold_v_zero_free(n, d, q)?,
        Family::BoxesUnique => threshold_v_unique(n, d, q)?,
    };
    out.push_str(&format!(
        "family={} d={} q={} n={}\n",
        rep.family.name(),
        d,
        q,
        n
    ));
    out.push_str(&format!(
        "bound={:.6} minimal={} formula={}\n",
        rep.bound, rep.minimal, rep.formula
    ));
    match family {
        Family::ZeroCubesFree => {
            if let Ok(l) = param_l(n, d, q) {
                out.push_str(&format!("codec-param=L={l}\n"));
            }
            out.push_str("note: the constraint rate tends to one whenever the cube side grows without bound\n");
        }
        Family::CubesUnique => {
            if d == 2 && q == 2 {
                if let Ok(codec) = crate::squares_unique::params(n) {
                    out.push_str(&format!("codec-param=L={}\n", codec.square_side()));
                }
            }
        }
        Family::ZeroBoxesFree => {
            if let Ok(v) = param_v(n, d, q) {
                out.push_str(&format!("codec-param=V={v}\n"));
            }
        }
        Family::BoxesUnique => {}
    }
    Ok(out)
}

/// How the size parameter is chosen for each row of a redundancy table.
#[derive(Debug, Clone, Copy)]
pub enum ParamRule {
    Fixed(usize),
    /// the least integer meeting the family's union-bound threshold
    Threshold,
    /// the parameter the matching codec would use
    Codec,
}

#[derive(Debug, Clone)]
pub struct RedundancyRow {
    pub family: Family,
    pub d: usize,
    pub q: usize,
    pub n: usize,
    pub param: usize,
    /// None when the instance exceeded the enumeration budget
    pub count: Option<u64>,
    pub redundancy: Option<f64>,
    pub seconds: f64,
}

/// Six significant digits, plain decimal notation.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

impl RedundancyRow {
    pub fn csv(&self) -> String {
        match (self.count, self.redundancy) {
            (Some(c), Some(r)) => format!(
                "{},{},{},{},{},{},{},{:.3}",
                self.family.name(),
                self.d,
                self.q,
                self.n,
                self.param,
                c,
                sig6(r),
                self.seconds
            ),
            _ => format!(
                "{},{},{},{},{},skipped,,{:.3}",
                self.family.name(),
                self.d,
                self.q,
                self.n,
                self.param,
                self.seconds
            ),
        }
    }
}

pub const CSV_HEADER: &str = "family,d,q,n,param,count,redundancy,seconds";

/// Exact redundancy per side length over `[n_from, n_to]`. Rows over budget
/// are marked skipped, never estimated.
pub fn redundancy_table(
    family: Family,
    d: usize,
    q: usize,
    n_from: usize,
    n_to: usize,
    rule: ParamRule,
    budget: u128,
    workers: usize,
) -> Result<Vec<RedundancyRow>> {
    let mut rows = Vec::new();
    for n in n_from..=n_to {
        let started = Instant::now();
        let param = match rule {
            ParamRule::Fixed(p) => p,
            ParamRule::Threshold => match family {
                Family::ZeroCubesFree => threshold_l_zero_free(n, d, q)?.minimal,
                Family::CubesUnique => threshold_l_unique(n, d, q)?.minimal,
                Family::ZeroBoxesFree => threshold_v_zero_free(n, d, q)?.minimal,
                Family::BoxesUnique => threshold_v_unique(n, d, q)?.minimal,
            },
            ParamRule::Codec => match family {
                Family::ZeroCubesFree => param_l(n, d, q)?,
                Family::ZeroBoxesFree => param_v(n, d, q)?,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "no codec parameter rule for {}",
                        other.name()
                    )))
                }
            },
        };
        let params = ConstraintParams::new(family, d, q, n, param)?;
        let row = match exhaustive_count(&params, budget, workers) {
            Ok(count) => RedundancyRow {
                family,
                d,
                q,
                n,
                param,
                count: Some(count),
                redundancy: Some(redundancy(&params, count)),
                seconds: started.elapsed().as_secs_f64(),
            },
            Err(Error::BudgetExceeded { .. }) => RedundancyRow {
                family,
                d,
                q,
                n,
                param,
                count: None,
                redundancy: None,
                seconds: started.elapsed().as_secs_f64(),
            },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_free_threshold_examples() {
        let r = threshold_l_zero_free(4, 2, 2).unwrap();
        assert!((r.bound - 5f64.sqrt()).abs() < 1e-9);
        assert_eq!(r.minimal, 3);
        // d = 1 reduces to log2(2n)
        let r = threshold_l_zero_free(16, 1, 2).unwrap();
        assert!((r.bound - 5.0).abs() < 1e-9);
        assert_eq!(r.minimal, 5);
        let r = threshold_l_zero_free(7, 2, 2).unwrap();
        assert!((r.bound - (2.0 * 7f64.log2() + 1.0).sqrt()).abs() < 1e-9);
        assert_eq!(r.minimal, 3);
        // the codec's side is within 1 + 2^(1/d) of the bound
        let l = crate::zero_cubes::param_l(7, 2, 2).unwrap();
        assert_eq!(l, 3);
        assert!((l as f64) <= r.bound + 1.0 + 2f64.sqrt());
    }

    #[test]
    fn unique_threshold_examples() {
        let r = threshold_l_unique(16, 2, 2).unwrap();
        assert!((r.bound - 17f64.sqrt()).abs() < 1e-9);
        assert_eq!(r.minimal, 5);
        let r1 = threshold_l_unique(16, 1, 2).unwrap();
        assert!((r1.bound - 9.0).abs() < 1e-9);
        assert_eq!(r1.minimal, 9);
        // the two-dimensional codec's L = 8 is within sqrt(3) of the bound
        let codec = crate::squares_unique::params(16).unwrap();
        let ratio = codec.square_side() as f64 / r.bound;
        assert!(ratio < 3f64.sqrt() * 1.2, "ratio {ratio}");
    }

    #[test]
    fn volume_threshold_examples() {
        let r = threshold_v_zero_free(32, 2, 2).unwrap();
        let expect = 10.0 + 0.5 * 5f64.log2() + (2.0 * 3f64.sqrt()).log2() + 1.0;
        assert!((r.bound - expect).abs() < 1e-9, "{} vs {expect}", r.bound);
        assert!((r.bound - 13.95).abs() < 0.05);
        let u = threshold_v_unique(32, 2, 2).unwrap();
        assert!((u.bound - (r.bound + 10.0)).abs() < 1e-9);
        // the cube threshold at equal volume exceeds the box threshold by a
        // positive log-log gap for n >= 4
        for n in 4..40 {
            let cube = threshold_l_zero_free(n, 2, 2).unwrap().bound.powi(2);
            let boxv = threshold_v_zero_free(n, 2, 2).unwrap().bound;
            let delta = boxv - cube;
            let loglog = 0.5 * (n as f64).log2().log2();
            assert!(delta > 0.0 && delta >= loglog - 1e-9, "n={n}: {delta} vs {loglog}");
        }
    }

    #[test]
    fn unique_family_thresholds_meet_the_redundancy_target() {
        // the printed minimal parameter leaves at least q^(n^d - 1) arrays
        use crate::oracle::{exhaustive_count, ConstraintParams, Family};
        for n in [6usize, 8] {
            let l = threshold_l_unique(n, 1, 2).unwrap().minimal;
            if l <= n {
                let p = ConstraintParams::new(Family::CubesUnique, 1, 2, n, l).unwrap();
                let count = exhaustive_count(&p, 1 << 26, 1).unwrap();
                assert!(count as u128 >= 1u128 << (n - 1), "n={n} L={l}: {count}");
            }
            let v = threshold_v_unique(n, 1, 2).unwrap().minimal;
            if v <= n {
                let p = ConstraintParams::new(Family::BoxesUnique, 1, 2, n, v).unwrap();
                let count = exhaustive_count(&p, 1 << 26, 1).unwrap();
                assert!(count as u128 >= 1u128 << (n - 1), "n={n} V={v}: {count}");
            }
        }
    }

    #[test]
    fn fibonacci_table() {
        let rows = redundancy_table(
            Family::ZeroCubesFree,
            1,
            2,
            1,
            10,
            ParamRule::Fixed(2),
            1 << 26,
            1,
        )
        .unwrap();
        let counts: Vec<u64> = rows.iter().map(|r| r.count.unwrap()).collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
        // recurrence cross-check
        for i in 2..counts.len() {
            assert_eq!(counts[i], counts[i - 1] + counts[i - 2]);
        }
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.00282135423), "0.00282135");
        assert_eq!(sig6(0.678072), "0.678072");
        assert_eq!(sig6(12.3456789), "12.3457");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn threshold_count_at_n4() {
        use crate::oracle::{exhaustive_count, ConstraintParams, Family};
        let p = ConstraintParams::new(Family::ZeroCubesFree, 2, 2, 4, 3).unwrap();
        let count = exhaustive_count(&p, 1 << 26, 1).unwrap();
        assert!(count >= 1 << 15, "count {count}");
    }

    #[test]
    fn budget_marks_rows_skipped() {
        let rows = redundancy_table(
            Family::ZeroCubesFree,
            1,
            2,
            1,
            12,
            ParamRule::Fixed(2),
            1 << 10,
            1,
        )
        .unwrap();
        assert!(rows[9].count.is_some()); // 2^10 fits the budget exactly
        assert!(rows[10].count.is_none());
        assert!(rows[10].csv().contains("skipped"));
    }
}
