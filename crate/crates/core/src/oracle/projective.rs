//! Genus-zero invariants of projective space: the Kontsevich recursion for
//! plane curves and the three-point invariants of hyperplane powers.

use num_bigint::BigInt;
use num_traits::Zero;

use super::memo::memo_key;
use super::{binomial, Oracle, OracleError};
use crate::rational::ExactRational;

impl Oracle {
    /// `N_d`, the number of rational plane curves of degree `d` through
    /// `3d - 1` general points:
    ///
    /// ```text
    /// N_d = Σ_{d1+d2=d} N_{d1} N_{d2} [ d1² d2² C(3d-4, 3d1-2) - d1³ d2 C(3d-4, 3d1-1) ]
    /// ```
    ///
    /// with `N_1 = 1`. Values are filled in increasing degree and memoized.
    pub fn kontsevich_p2(&self, d: i64) -> Result<ExactRational, OracleError> {
        if d < 1 {
            return Err(OracleError::InvalidDegree(d));
        }
        let key = |d: i64| memo_key("P2", &[d]);
        if let Some(v) = self.memo().get(&key(d)) {
            return Ok(v);
        }
        let mut values: Vec<BigInt> = vec![BigInt::zero()];
        for deg in 1..=d {
            let value = match self.memo().get(&key(deg)).and_then(|v| v.to_integer()) {
                Some(v) => v,
                None => {
                    let v = kontsevich_step(deg, &values);
                    self.memo().insert(key(deg), v.clone().into())?;
                    v
                }
            };
            values.push(value);
        }
        Ok(values[d as usize].clone().into())
    }
}

fn kontsevich_step(d: i64, lower: &[BigInt]) -> BigInt {
    if d == 1 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for d1 in 1..d {
        let d2 = d - d1;
        let weight = BigInt::from(d1 * d1 * d2 * d2) * binomial(3 * d - 4, 3 * d1 - 2)
            - BigInt::from(d1 * d1 * d1 * d2) * binomial(3 * d - 4, 3 * d1 - 1);
        total += &lower[d1 as usize] * &lower[d2 as usize] * weight;
    }
    total
}

/// Three-point genus-zero invariant `<H^a, H^b, H^c>_d` of `P^n`: one when
/// `d = 0, a+b+c = n` (cup product) or `d = 1, a+b+c = 2n+1` (one line
/// meets three general linear spaces of those codimensions), zero otherwise.
pub fn pn_three_point(n: u32, a: u32, b: u32, c: u32, d: i64) -> Result<ExactRational, OracleError> {
    if n < 2 {
        return Err(OracleError::Lattice(
            crate::lattice::LatticeError::DimensionTooSmall(n),
        ));
    }
    if let Some(&bad) = [a, b, c].iter().find(|&&k| k > n) {
        return Err(OracleError::ExponentOutOfRange { exponent: bad, n });
    }
    if d < 0 {
        return Err(OracleError::InvalidDegree(d));
    }
    let total = a + b + c;
    let hit = (d == 0 && total == n) || (d == 1 && total == 2 * n + 1);
    Ok(ExactRational::from(i64::from(hit)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        let o = Oracle::new();
        assert_eq!(o.kontsevich_p2(1).unwrap(), 1.into());
        assert_eq!(o.kontsevich_p2(2).unwrap(), 1.into());
        assert_eq!(o.kontsevich_p2(3).unwrap(), 12.into());
        assert!(matches!(o.kontsevich_p2(0), Err(OracleError::InvalidDegree(0))));
        assert!(o.kontsevich_p2(-2).is_err());
    }

    #[test]
    fn memoizes_every_lower_degree() {
        let o = Oracle::new();
        o.kontsevich_p2(5).unwrap();
        for d in 1..=5 {
            assert!(o.memo().contains(&memo_key("P2", &[d])));
        }
    }

    #[test]
    fn high_degree_needs_big_integers() {
        let o = Oracle::new();
        let n12 = o.kontsevich_p2(12).unwrap();
        assert!(n12.is_integer());
        assert!(n12.numer() > &BigInt::from(i64::MAX));
    }

    #[test]
    fn three_point_examples() {
        assert_eq!(pn_three_point(2, 1, 2, 2, 1).unwrap(), 1.into());
        assert_eq!(pn_three_point(3, 3, 3, 1, 1).unwrap(), 1.into());
        // H^3 is the point class of P^3
        assert_eq!(pn_three_point(3, 1, 1, 1, 0).unwrap(), 1.into());
        assert_eq!(pn_three_point(2, 1, 1, 1, 0).unwrap(), 0.into());
        assert_eq!(pn_three_point(3, 1, 1, 1, 1).unwrap(), 0.into());
        assert_eq!(pn_three_point(4, 0, 2, 2, 0).unwrap(), 1.into());
        assert_eq!(pn_three_point(2, 2, 2, 2, 2).unwrap(), 0.into());
        assert!(matches!(
            pn_three_point(2, 3, 0, 0, 0),
            Err(OracleError::ExponentOutOfRange { exponent: 3, n: 2 })
        ));
    }
}
