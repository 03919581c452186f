//! Genus-zero invariants of the plane blown up at one point, from the WDVV
//! equations of its quantum cohomology.
//!
//! Cohomology basis `T0 = 1, T1 = h, T2 = E, T3 = pt` with intersection
//! form `h·h = 1`, `E·E = -1`, `1·pt = 1`. Write a class as
//! `β = a·f + b·e`, so `h·β = a`, `E·β = -b` and `C_1(β) = 3a + b`; it
//! carries `n_β = 3a + b - 1` point constraints. The quantum part of the
//! potential is
//!
//! ```text
//! Γ(t1, t2, t3) = Σ_β N_β exp(t1·(h·β) + t2·(E·β)) t3^{n_β} / n_β!
//! ```
//!
//! and the classical part only has third derivatives with a `t0` index.
//! Associativity with indices `(h, h, pt, pt)` reads
//!
//! ```text
//! Γ333 = Γ113² - Γ123² - Γ111·Γ133 + Γ112·Γ233
//! ```
//!
//! (the minus signs on `Γ123²` and `Γ112·Γ233` come from `g^{EE} = -1`).
//! Taking the coefficient of `exp(β·t) t3^{n-3}/(n-3)!` gives, for every
//! class with `n = n_β ≥ 3`,
//!
//! ```text
//! N_β = Σ_{β1+β2=β} N_{β1} N_{β2} [ (a1² a2² - a1 a2 x1 x2) C(n-3, n1-1)
//!                                    - (a1³ a2 - a1² x1 x2) C(n-3, n1) ]
//! ```
//!
//! where `a_i = h·β_i`, `x_i = E·β_i`, `n_i = n_{β_i}`. Classes with
//! `n_β ≤ 2` are seeds: `N(e) = N(f - e) = N(f) = 1` and zero otherwise.
//!
//! The sum runs over the cone `{a ≥ 0, b + 2a ≥ 0}` spanned by `L - e` and
//! `e`. It contains the effective cone, and values outside the effective
//! cone come out as zero. Classes are filled in increasing `C_1`,
//! tie-broken by `(a, b)`, so each right-hand side only reads memoized values.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::memo::memo_key;
use super::{binomial, Oracle, OracleError};
use crate::lattice::{mori_decompose, CurveClass, Manifold};
use crate::rational::ExactRational;

const KEY: &str = "BlP2";

fn c1(a: i64, b: i64) -> i64 {
    3 * a + b
}

fn in_cone(a: i64, b: i64) -> bool {
    a >= 0 && b + 2 * a >= 0 && (a, b) != (0, 0)
}

fn seed(a: i64, b: i64) -> BigInt {
    match (a, b) {
        (0, 1) | (1, -1) | (1, 0) => BigInt::from(1),
        _ => BigInt::zero(),
    }
}

impl Oracle {
    /// `N(a·f + b·e)` on the blown-up plane: rational curves in the class
    /// through `3a + b - 1` general points.
    pub fn wdvv_f1(&self, a: i64, b: i64) -> Result<ExactRational, OracleError> {
        let blowup = Manifold::blowup_point(2)?;
        mori_decompose(&blowup, &CurveClass::new([a, b])).map_err(|_| OracleError::NotEffective)?;
        if (a, b) == (0, 0) || c1(a, b) < 1 {
            return Err(OracleError::NoPointConstraints { c1: c1(a, b) });
        }
        if let Some(v) = self.memo().get(&memo_key(KEY, &[a, b])) {
            return Ok(v);
        }

        let target_c1 = c1(a, b);
        let mut order: Vec<(i64, i64, i64)> = Vec::new();
        for x in 0..=a {
            for y in -2 * x..=target_c1 - 3 * x {
                if in_cone(x, y) {
                    order.push((c1(x, y), x, y));
                }
            }
        }
        order.sort_unstable();

        let mut values: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for &(c, x, y) in &order {
            let key = memo_key(KEY, &[x, y]);
            let value = match self.memo().get(&key).and_then(|v| v.to_integer()) {
                Some(v) => v,
                None => {
                    let v = if c - 1 <= 2 {
                        seed(x, y)
                    } else {
                        wdvv_step(x, y, &values)
                    };
                    self.memo().insert(key, v.clone().into())?;
                    v
                }
            };
            values.insert((x, y), value);
        }
        Ok(values[&(a, b)].clone().into())
    }
}

fn wdvv_step(a: i64, b: i64, lower: &BTreeMap<(i64, i64), BigInt>) -> BigInt {
    let n = c1(a, b) - 1;
    let m = n - 3;
    let mut total = BigInt::zero();
    // terms without an h-degree factor from β1 vanish
    for a1 in 1..=a {
        let a2 = a - a1;
        for b1 in -2 * a1..=b + 2 * a2 {
            let b2 = b - b1;
            if !in_cone(a1, b1) || !in_cone(a2, b2) {
                continue;
            }
            let (Some(n1v), Some(n2v)) = (lower.get(&(a1, b1)), lower.get(&(a2, b2))) else {
                unreachable!("split of ({a},{b}) into ({a1},{b1}) + ({a2},{b2}) not yet computed");
            };
            if n1v.is_zero() || n2v.is_zero() {
                continue;
            }
            let n1 = c1(a1, b1) - 1;
            let (x1, x2) = (-b1, -b2);
            let w1 = a1 * a1 * a2 * a2 - a1 * a2 * x1 * x2;
            let w2 = a1 * a1 * a1 * a2 - a1 * a1 * x1 * x2;
            let weight = BigInt::from(w1) * binomial(m, n1 - 1) - BigInt::from(w2) * binomial(m, n1);
            total += n1v * n2v * weight;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds() {
        let o = Oracle::new();
        assert_eq!(o.wdvv_f1(0, 1).unwrap(), 1.into());
        assert_eq!(o.wdvv_f1(1, -1).unwrap(), 1.into());
        assert_eq!(o.wdvv_f1(1, 0).unwrap(), 1.into());
    }

    #[test]
    fn cubics_through_the_point() {
        assert_eq!(Oracle::new().wdvv_f1(3, -1).unwrap(), 12.into());
    }

    #[test]
    fn rejects_non_effective_and_unconstrained() {
        let o = Oracle::new();
        assert!(matches!(o.wdvv_f1(-1, 0), Err(OracleError::NotEffective)));
        assert!(matches!(o.wdvv_f1(0, -1), Err(OracleError::NotEffective)));
        assert!(matches!(
            o.wdvv_f1(0, 0),
            Err(OracleError::NoPointConstraints { .. })
        ));
    }

    #[test]
    fn exceptional_multiples_vanish() {
        let o = Oracle::new();
        for r in 2..=6 {
            assert_eq!(o.wdvv_f1(0, r).unwrap(), 0.into(), "r = {r}");
        }
    }

    // f - 2e, 2f - 3e, 3f - 5e, ... lie in the summation cone but are not
    // effective on the blown-up plane.
    #[test]
    fn classes_outside_the_effective_cone_vanish() {
        let o = Oracle::new();
        for a in 1..=5 {
            for b in -2 * a..-a {
                if c1(a, b) >= 1 {
                    assert_eq!(o.wdvv_f1(a, b).unwrap(), 0.into(), "({a}, {b})");
                }
            }
        }
    }

    #[test]
    fn cold_and_warm_agree() {
        let cold = Oracle::new();
        let v = cold.wdvv_f1(5, -2).unwrap();
        let warm = Oracle::with_memo(cold.memo().clone());
        assert_eq!(warm.wdvv_f1(5, -2).unwrap(), v);
        assert_eq!(Oracle::new().wdvv_f1(5, -2).unwrap(), v);
    }
}
