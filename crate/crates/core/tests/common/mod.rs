//! A generic genus-zero quantum cohomology model used as an independent
//! check on the recursions: it knows only the classical cup products, the
//! divisor pairings and the point-constraint count of each class, and
//! tests (or solves) the associativity equations coefficient by coefficient.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Class = Vec<i64>;

/// Basis `T_0 = 1, T_1..T_k` divisors, `T_{k+1} = pt`.
pub struct Frobenius {
    /// Number of divisor generators `k`.
    pub divisors: usize,
    /// `g_ij = ∫ T_i ∪ T_j`.
    pub metric: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
    /// `(T_i · β)` for each divisor `i = 1..=k`.
    pub pairings: fn(&Class) -> Vec<i64>,
    /// Number of point constraints `n_β`.
    pub points: fn(&Class) -> i64,
    /// Effective classes considered, each with its invariant.
    pub values: BTreeMap<Class, BigInt>,
}

impl Frobenius {
    pub fn size(&self) -> usize {
        self.divisors + 2
    }

    fn pt(&self) -> usize {
        self.divisors + 1
    }

    /// `∫ T_i T_j T_k` on a surface: only products with a unit factor survive.
    fn classical(&self, i: usize, j: usize, k: usize) -> i64 {
        let mut idx = [i, j, k];
        idx.sort_unstable();
        if idx[0] == 0 {
            self.metric[idx[1]][idx[2]]
        } else {
            0
        }
    }

    /// Coefficient `c` of `q^β t^s / s!` in `∂_i ∂_j ∂_k Φ`.
    pub fn third(&self, idx: [usize; 3], beta: &Class, s: i64) -> BigInt {
        if beta.iter().all(|&c| c == 0) {
            return if s == 0 {
                BigInt::from(self.classical(idx[0], idx[1], idx[2]))
            } else {
                BigInt::zero()
            };
        }
        let Some(n) = self.values.get(beta) else {
            return BigInt::zero();
        };
        if n.is_zero() || idx.contains(&0) {
            return BigInt::zero();
        }
        let pairings = (self.pairings)(beta);
        let mut factor = BigInt::one();
        let mut point_derivs = 0;
        for &i in &idx {
            if i == self.pt() {
                point_derivs += 1;
            } else {
                factor *= pairings[i - 1];
            }
        }
        if (self.points)(beta) - point_derivs != s {
            return BigInt::zero();
        }
        n * factor
    }

    fn splits(&self, beta: &Class) -> Vec<(Class, Class)> {
        let zero = vec![0; beta.len()];
        let mut parts: Vec<Class> = vec![zero];
        parts.extend(self.values.keys().cloned());
        let mut out = Vec::new();
        for b1 in &parts {
            let b2: Class = beta.iter().zip(b1).map(|(x, y)| x - y).collect();
            if b2.iter().all(|&c| c == 0) || self.values.contains_key(&b2) {
                out.push((b1.clone(), b2));
            }
        }
        out
    }

    /// Coefficient of `q^β t^s / s!` in `Σ_{e,f} Φ_{abe} g^{ef} Φ_{fcd}`.
    fn product(&self, splits: &[(Class, Class)], abcd: [usize; 4], s: i64) -> BigInt {
        let [a, b, c, d] = abcd;
        let mut total = BigInt::zero();
        for (b1, b2) in splits {
            for e in 0..self.size() {
                for f in 0..self.size() {
                    let g = self.inverse[e][f];
                    if g == 0 {
                        continue;
                    }
                    for s1 in 0..=s {
                        let left = self.third([a, b, e], b1, s1);
                        if left.is_zero() {
                            continue;
                        }
                        let right = self.third([f, c, d], b2, s - s1);
                        if right.is_zero() {
                            continue;
                        }
                        total += left * right * binomial(s, s1) * g;
                    }
                }
            }
        }
        total
    }

    /// `(ab|cd) - (ac|bd)` at one coefficient.
    pub fn residual(&self, q: [usize; 4], beta: &Class, s: i64) -> BigInt {
        let splits = self.splits(beta);
        self.residual_with(&splits, q, s)
    }

    fn residual_with(&self, splits: &[(Class, Class)], q: [usize; 4], s: i64) -> BigInt {
        let [a, b, c, d] = q;
        self.product(splits, [a, b, c, d], s) - self.product(splits, [a, c, b, d], s)
    }

    /// Every associativity equation at every coefficient of `q^β`.
    pub fn violations_at(&self, beta: &Class) -> Vec<([usize; 4], Class, i64)> {
        let splits = self.splits(beta);
        let mut out = Vec::new();
        let k = self.size();
        for s in 0..=(self.points)(beta) {
            for a in 0..k {
                for b in 0..k {
                    // (ab|cd) - (ac|bd) is antisymmetric in b, c
                    for c in b + 1..k {
                        for d in 0..k {
                            if !self.residual_with(&splits, [a, b, c, d], s).is_zero() {
                                out.push(([a, b, c, d], beta.clone(), s));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Checks every associativity equation for every stored class.
    pub fn violations(&self) -> Vec<([usize; 4], Class, i64)> {
        let classes: Vec<Class> = self.values.keys().cloned().collect();
        classes.iter().flat_map(|beta| self.violations_at(beta)).collect()
    }

    /// Fills in `values` for `order` (each class after everything it splits
    /// into), taking seeds as given and solving for each remaining class
    /// from equation `q` at `s = n_β - 3`, where the class enters linearly.
    pub fn solve(&mut self, order: &[Class], seeds: &BTreeMap<Class, BigInt>, q: [usize; 4]) {
        for beta in order {
            if let Some(v) = seeds.get(beta) {
                self.values.insert(beta.clone(), v.clone());
                continue;
            }
            let s = (self.points)(beta) - 3;
            self.values.insert(beta.clone(), BigInt::zero());
            let r0 = self.residual(q, beta, s);
            self.values.insert(beta.clone(), BigInt::one());
            let r1 = self.residual(q, beta, s) - &r0;
            assert!(!r1.is_zero(), "equation {q:?} does not determine {beta:?}");
            let x = -r0.clone() / &r1;
            assert_eq!(&x * &r1, -r0, "non-integral solution at {beta:?}");
            self.values.insert(beta.clone(), x);
        }
    }
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// `P^2` with basis `1, H, pt`.
pub fn plane() -> Frobenius {
    Frobenius {
        divisors: 1,
        metric: vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]],
        inverse: vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]],
        pairings: |b| vec![b[0]],
        points: |b| 3 * b[0] - 1,
        values: BTreeMap::new(),
    }
}

/// The blown-up plane with basis `1, h, E, pt`; a class `a·f + b·e` is
/// stored as `[a, b]`, so `h·β = a` and `E·β = -b`.
pub fn blown_up_plane() -> Frobenius {
    let g = vec![
        vec![0, 0, 0, 1],
        vec![0, 1, 0, 0],
        vec![0, 0, -1, 0],
        vec![1, 0, 0, 0],
    ];
    Frobenius {
        divisors: 2,
        metric: g.clone(),
        inverse: g,
        pairings: |b| vec![b[0], -b[1]],
        points: |b| 3 * b[0] + b[1] - 1,
        values: BTreeMap::new(),
    }
}

/// Classes `a·f + b·e` with `a ≥ 0`, `b ≥ -2a`, `0 < 3a + b ≤ max_c1`,
/// ordered by `C_1` then `(a, b)`.
pub fn blowup_classes(max_c1: i64) -> Vec<Class> {
    let mut out = Vec::new();
    for a in 0..=max_c1 {
        for b in -2 * a..=max_c1 - 3 * a {
            let c1 = 3 * a + b;
            if c1 >= 1 {
                out.push((c1, a, b));
            }
        }
    }
    out.sort_unstable();
    out.into_iter().map(|(_, a, b)| vec![a, b]).collect()
}

/// Seeds of the blown-up plane: classes with at most two point constraints.
pub fn blowup_seeds(classes: &[Class]) -> BTreeMap<Class, BigInt> {
    classes
        .iter()
        .filter(|c| 3 * c[0] + c[1] - 1 <= 2)
        .map(|c| {
            let v = matches!(c.as_slice(), [0, 1] | [1, -1] | [1, 0]);
            (c.clone(), BigInt::from(v as i64))
        })
        .collect()
}
