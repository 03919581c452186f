//! Numeric genus-zero invariants: queries, the reduction axioms, and the
//! dispatch onto the recursions for `P^2`, `P^n` and the blown-up plane.

mod blowup_plane;
pub mod memo;
mod projective;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::index::required_degree_sum;
use crate::lattice::{
    c1_eval, mori_decompose, pairing, CurveClass, DivisorClass, LatticeError, Manifold, ManifoldKind,
};
use crate::rational::ExactRational;
use crate::rules::exceptional_pullback_applies;

pub use memo::{memo_key, CacheError, MemoTable};
pub use projective::pn_three_point;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("degree {0} is not positive")]
    InvalidDegree(i64),
    #[error("class is not effective")]
    NotEffective,
    #[error("class has C_1 = {c1}, leaving no room for point constraints")]
    NoPointConstraints { c1: i64 },
    #[error("exponent {exponent} exceeds the dimension {n}")]
    ExponentOutOfRange { exponent: u32, n: u32 },
    #[error("malformed query: {0}")]
    Malformed(String),
    #[error("divisor axiom does not apply: {0}")]
    DivisorAxiom(&'static str),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// A cohomology class inserted into an invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Insertion {
    Unit,
    Divisor {
        class: DivisorClass,
    },
    Point,
    /// `k`-th power of the hyperplane class (pulled back on a blow-up).
    HyperplanePower {
        k: u32,
    },
    /// Poincaré dual of the exceptional divisor.
    ExcDual,
    /// Pullback of a class on the blow-down.
    Pullback {
        base: Box<Insertion>,
    },
    /// A class known only through its degree.
    Generic {
        label: String,
        degree: u32,
        #[serde(default)]
        away_from_locus: bool,
    },
}

impl Insertion {
    pub fn divisor(class: DivisorClass) -> Self {
        Insertion::Divisor { class }
    }

    pub fn pullback(base: Insertion) -> Self {
        Insertion::Pullback { base: Box::new(base) }
    }

    pub fn generic(label: &str, degree: u32) -> Self {
        Insertion::Generic {
            label: label.to_string(),
            degree,
            away_from_locus: false,
        }
    }

    /// Real degree on a manifold of complex dimension `n`.
    pub fn real_degree(&self, n: u32) -> u32 {
        match self {
            Insertion::Unit => 0,
            Insertion::Divisor { .. } | Insertion::ExcDual => 2,
            Insertion::Point => 2 * n,
            Insertion::HyperplanePower { k } => 2 * k,
            Insertion::Pullback { base } => base.real_degree(n),
            Insertion::Generic { degree, .. } => *degree,
        }
    }

    pub fn is_pullback(&self) -> bool {
        matches!(self, Insertion::Pullback { .. })
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Insertion::Point)
    }

    pub fn describe(&self, m: &Manifold) -> String {
        match self {
            Insertion::Unit => "1".into(),
            Insertion::Divisor { class } => {
                if class.len() == m.divisor_basis().len() {
                    m.format_divisor(class)
                } else {
                    format!("{:?}", class.coefficients())
                }
            }
            Insertion::Point => "pt".into(),
            Insertion::HyperplanePower { k } => format!("H^{k}"),
            Insertion::ExcDual => "PD(E)".into(),
            Insertion::Pullback { base } => match base_manifold(m) {
                Some(b) => format!("p*{}", base.describe(&b)),
                None => format!("p*{}", base.describe(m)),
            },
            Insertion::Generic {
                label,
                degree,
                away_from_locus,
            } => {
                let away = if *away_from_locus { "*" } else { "" };
                format!("{label}[{degree}]{away}")
            }
        }
    }
}

/// The manifold a blow-up blows down to.
pub fn base_manifold(m: &Manifold) -> Option<Manifold> {
    match m.kind() {
        ManifoldKind::BlowupPoint { n } => Manifold::proj_space(*n).ok(),
        ManifoldKind::BlowupAlong { base, .. } => Manifold::try_from((**base).clone()).ok(),
        _ => None,
    }
}

/// `Ψ^M_{(A,g)}(α_1, …, α_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantQuery {
    pub manifold: Manifold,
    pub class: CurveClass,
    pub genus: u32,
    pub insertions: Vec<Insertion>,
}

impl InvariantQuery {
    pub fn new(manifold: Manifold, class: CurveClass, genus: u32, insertions: Vec<Insertion>) -> Self {
        Self {
            manifold,
            class,
            genus,
            insertions,
        }
    }

    /// Genus-zero query with `count` point insertions.
    pub fn points(manifold: Manifold, class: CurveClass, count: usize) -> Self {
        Self::new(manifold, class, 0, vec![Insertion::Point; count])
    }

    pub fn total_degree(&self) -> i64 {
        let n = self.manifold.n();
        self.insertions.iter().map(|i| i.real_degree(n) as i64).sum()
    }

    /// Degree the insertions must sum to, when `C_1(A)` is computable.
    pub fn required_degree(&self) -> Option<i64> {
        let c1 = c1_eval(&self.manifold, &self.class).ok()?;
        Some(required_degree_sum(
            self.manifold.n() as i64,
            c1,
            self.genus as i64,
            self.insertions.len() as i64,
        ))
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.manifold;
        if m.has_lattice() {
            m.check_curve(&self.class)?;
        }
        for ins in &self.insertions {
            check_insertion(m, ins)?;
        }
        Ok(())
    }
}

fn check_insertion(m: &Manifold, ins: &Insertion) -> Result<()> {
    match ins {
        Insertion::Divisor { class } => m.check_divisor(class).map_err(Into::into),
        Insertion::HyperplanePower { k } if *k > m.n() => Err(OracleError::ExponentOutOfRange {
            exponent: *k,
            n: m.n(),
        }),
        Insertion::ExcDual if m.exceptional_divisor_index().is_none() => Err(OracleError::Malformed(
            format!("{} has no exceptional divisor", m.key()),
        )),
        Insertion::Pullback { base } => {
            let b = base_manifold(m)
                .ok_or_else(|| OracleError::Malformed(format!("{} is not a blow-up", m.key())))?;
            check_insertion(&b, base)
        }
        _ => Ok(()),
    }
}

impl fmt::Display for InvariantQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = if self.manifold.has_lattice() {
            self.manifold.format_curve(&self.class)
        } else {
            format!("{:?}", self.class.coefficients())
        };
        let ins: Vec<String> = self
            .insertions
            .iter()
            .map(|i| i.describe(&self.manifold))
            .collect();
        write!(
            f,
            "Psi^{}_({},g={})({})",
            self.manifold.key(),
            class,
            self.genus,
            ins.join(",")
        )
    }
}

/// Why an invariant is zero without evaluating it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroReason {
    #[serde(rename = "dimension")]
    Dimension,
    #[serde(rename = "Lemma 1.1")]
    ExceptionalPullback,
    #[serde(rename = "divisor-axiom")]
    DivisorAxiom,
    #[serde(rename = "fundamental-class")]
    FundamentalClass,
    #[serde(rename = "not-effective")]
    NotEffective,
}

impl ZeroReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroReason::Dimension => "dimension",
            ZeroReason::ExceptionalPullback => "Lemma 1.1",
            ZeroReason::DivisorAxiom => "divisor-axiom",
            ZeroReason::FundamentalClass => "fundamental-class",
            ZeroReason::NotEffective => "not-effective",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum Evaluation {
    Exact {
        value: ExactRational,
    },
    Zero {
        reason: ZeroReason,
    },
    /// No numeric route; `scalar` times the normalized query.
    Symbolic {
        scalar: ExactRational,
        query: InvariantQuery,
    },
}

impl Evaluation {
    /// The exact value when one is known; zero gates count as exact zero.
    pub fn value(&self) -> Option<ExactRational> {
        match self {
            Evaluation::Exact { value } => Some(value.clone()),
            Evaluation::Zero { .. } => Some(ExactRational::zero()),
            Evaluation::Symbolic { .. } => None,
        }
    }

    pub fn zero_reason(&self) -> Option<ZeroReason> {
        match self {
            Evaluation::Zero { reason } => Some(*reason),
            _ => None,
        }
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluation::Exact { value } => write!(f, "{value}"),
            Evaluation::Zero { .. } => f.write_str("0"),
            Evaluation::Symbolic { scalar, query } => {
                if *scalar == ExactRational::one() {
                    write!(f, "{query}")
                } else {
                    write!(f, "({scalar})*{query}")
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Apply the exceptional-class pullback gate before computing. Turning
    /// it off lets the recursions confirm that gate independently.
    pub pullback_gate: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { pullback_gate: true }
    }
}

/// Evaluator owning the memo table of recursion values.
#[derive(Debug, Default, Clone)]
pub struct Oracle {
    memo: MemoTable,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_memo(memo: MemoTable) -> Self {
        Self { memo }
    }

    pub fn memo(&self) -> &MemoTable {
        &self.memo
    }

    pub fn into_memo(self) -> MemoTable {
        self.memo
    }

    pub fn evaluate(&self, q: &InvariantQuery) -> Result<Evaluation> {
        self.evaluate_with(q, EvalOptions::default())
    }

    /// Dispatch: exceptional-pullback gate, degree gate, fundamental class
    /// and divisor reductions, then the numeric routes. Anything without a
    /// route comes back symbolic.
    pub fn evaluate_with(&self, q: &InvariantQuery, opts: EvalOptions) -> Result<Evaluation> {
        q.validate()?;
        let m = &q.manifold;
        let symbolic =
            |scalar: ExactRational, query: InvariantQuery| Ok(Evaluation::Symbolic { scalar, query });
        let Some(required) = q.required_degree() else {
            return symbolic(ExactRational::one(), q.clone());
        };
        if opts.pullback_gate && exceptional_pullback_applies(q) {
            return Ok(Evaluation::Zero {
                reason: ZeroReason::ExceptionalPullback,
            });
        }
        if q.total_degree() != required {
            return Ok(Evaluation::Zero {
                reason: ZeroReason::Dimension,
            });
        }

        let normalized = normalize(q)?;
        if normalized.genus != 0
            || normalized
                .insertions
                .iter()
                .any(|i| matches!(i, Insertion::Generic { .. }))
        {
            return symbolic(ExactRational::one(), normalized);
        }
        if normalized.class.is_zero() {
            return self.classical(normalized);
        }
        if normalized.insertions.contains(&Insertion::Unit) {
            return Ok(Evaluation::Zero {
                reason: ZeroReason::FundamentalClass,
            });
        }
        let (scalar, residual) = reduce_divisor(&normalized)?;
        if scalar.is_zero() {
            return Ok(Evaluation::Zero {
                reason: ZeroReason::DivisorAxiom,
            });
        }

        match m.kind() {
            ManifoldKind::ProjSpace { n } => {
                let n = *n;
                let d = residual.class.coefficients()[0];
                if d < 0 {
                    return Ok(Evaluation::Zero {
                        reason: ZeroReason::NotEffective,
                    });
                }
                let exps = exponents(n, &residual.insertions);
                let all_points = residual.insertions.iter().all(Insertion::is_point);
                let value = match (d, residual.insertions.len(), exps) {
                    // a unique line through two points
                    (1, 2, _) if all_points => Some(ExactRational::one()),
                    (1, 3, Some(e)) => Some(pn_three_point(n, e[0], e[1], e[2], 1)?),
                    _ if n == 2 && all_points => Some(self.kontsevich_p2(d)?),
                    _ => None,
                };
                match value {
                    Some(v) => Ok(exact(scalar * v)),
                    None => symbolic(scalar, residual),
                }
            }
            ManifoldKind::BlowupPoint { n: 2 } => {
                if !residual.insertions.iter().all(Insertion::is_point) {
                    return symbolic(scalar, residual);
                }
                let c = residual.class.coefficients();
                if mori_decompose(m, &residual.class).is_err() {
                    return Ok(Evaluation::Zero {
                        reason: ZeroReason::NotEffective,
                    });
                }
                Ok(exact(scalar * self.wdvv_f1(c[0], c[1])?))
            }
            _ => symbolic(scalar, residual),
        }
    }

    /// Degree-zero three-point invariants of `P^n` (cup products).
    fn classical(&self, q: InvariantQuery) -> Result<Evaluation> {
        if let (ManifoldKind::ProjSpace { n }, 3) = (q.manifold.kind(), q.insertions.len()) {
            let mut scalar = ExactRational::one();
            let mut exps = Vec::with_capacity(3);
            for ins in &q.insertions {
                match ins {
                    Insertion::Unit => exps.push(0),
                    Insertion::Divisor { class } => {
                        scalar = scalar * ExactRational::from(class.coefficients()[0]);
                        exps.push(1);
                    }
                    Insertion::HyperplanePower { k } => exps.push(*k),
                    Insertion::Point => exps.push(*n),
                    _ => {
                        return Ok(Evaluation::Symbolic {
                            scalar: ExactRational::one(),
                            query: q,
                        })
                    }
                }
            }
            let v = pn_three_point(*n, exps[0], exps[1], exps[2], 0)?;
            return Ok(exact(scalar * v));
        }
        Ok(Evaluation::Symbolic {
            scalar: ExactRational::one(),
            query: q,
        })
    }
}

fn exact(value: ExactRational) -> Evaluation {
    if value.is_zero() {
        Evaluation::Exact {
            value: ExactRational::zero(),
        }
    } else {
        Evaluation::Exact { value }
    }
}

fn exponents(n: u32, insertions: &[Insertion]) -> Option<Vec<u32>> {
    insertions
        .iter()
        .map(|i| match i {
            Insertion::Point => Some(n),
            Insertion::HyperplanePower { k } => Some(*k),
            Insertion::Unit => Some(0),
            _ => None,
        })
        .collect()
}

/// Rewrites pullbacks and hyperplane powers into the simplest equivalent
/// insertion on the query's own manifold.
fn normalize(q: &InvariantQuery) -> Result<InvariantQuery> {
    let m = &q.manifold;
    let insertions = q
        .insertions
        .iter()
        .map(|i| normalize_insertion(m, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantQuery {
        insertions,
        ..q.clone()
    })
}

fn normalize_insertion(m: &Manifold, ins: &Insertion) -> Result<Insertion> {
    Ok(match ins {
        Insertion::HyperplanePower { k: 0 } => Insertion::Unit,
        Insertion::HyperplanePower { k: 1 } if m.has_lattice() => {
            let mut h = m.zero_divisor();
            h.0[0] = 1;
            Insertion::divisor(h)
        }
        Insertion::HyperplanePower { k } if *k == m.n() && m.has_lattice() => Insertion::Point,
        Insertion::ExcDual => {
            let idx = m.exceptional_divisor_index().expect("validated");
            let mut e = m.zero_divisor();
            e.0[idx] = 1;
            Insertion::divisor(e)
        }
        Insertion::Pullback { base } => {
            let pulled = match &**base {
                Insertion::Divisor { class } => {
                    // p*D keeps the base coefficients and has none on E
                    let mut coeffs = class.coefficients().to_vec();
                    coeffs.push(0);
                    Insertion::divisor(DivisorClass(coeffs))
                }
                Insertion::Pullback { .. } | Insertion::ExcDual => {
                    return Err(OracleError::Malformed("nested pullback".into()))
                }
                other => other.clone(),
            };
            normalize_insertion(m, &pulled)?
        }
        other => other.clone(),
    })
}

fn divisor_of(m: &Manifold, ins: &Insertion) -> Result<Option<DivisorClass>> {
    Ok(match normalize_insertion(m, ins)? {
        Insertion::Divisor { class } => Some(class),
        _ => None,
    })
}

/// Divisor axiom: strips every degree-2 divisor insertion `D`, multiplying
/// by `D·A`. Genus zero and `A ≠ 0` only.
pub fn reduce_divisor(q: &InvariantQuery) -> Result<(ExactRational, InvariantQuery)> {
    if q.genus != 0 {
        return Err(OracleError::DivisorAxiom("genus is not zero"));
    }
    if q.class.is_zero() {
        return Err(OracleError::DivisorAxiom("class is zero"));
    }
    q.validate()?;
    let m = &q.manifold;
    let mut scalar = BigInt::from(1);
    let mut kept = Vec::with_capacity(q.insertions.len());
    for ins in &q.insertions {
        match divisor_of(m, ins)? {
            Some(d) => scalar *= pairing(m, &d, &q.class)?,
            None => kept.push(ins.clone()),
        }
    }
    Ok((
        ExactRational::from(scalar),
        InvariantQuery {
            insertions: kept,
            ..q.clone()
        },
    ))
}

/// `C(n, k)` as a big integer; zero outside `0 ≤ k ≤ n`.
pub(crate) fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}
