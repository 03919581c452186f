//! Fredholm-index bookkeeping for components of relative stable maps across
//! a symplectic cut, and the degree gates that exclude a component from the
//! gluing sum.
//!
//! A component is described by the data of its two sides: `l⁺` connected
//! pieces on the plus side carrying genus `g⁺`, `ν` ends with contact orders
//! `k_1, …, k_ν` along the common divisor, and the marked points split as
//! `m⁺ + m⁻`. All arithmetic is on exact integers; indices are real
//! dimensions.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IndexError {
    #[error("complex dimension {0} is below 2")]
    DimensionTooSmall(i64),
    #[error("contact order {0} is below 1")]
    ContactOrder(i64),
    #[error("sum of contact orders {sum_k} is below the number of ends {nu}")]
    ContactSum { sum_k: i64, nu: i64 },
    #[error("{l_plus} plus-side components cannot be attached along {nu} ends")]
    Components { l_plus: i64, nu: i64 },
    #[error("plus-side genus {g_plus} exceeds total genus {g}")]
    Genus { g_plus: i64, g: i64 },
    #[error("negative parameter `{0}`")]
    Negative(&'static str),
}

pub type Result<T> = std::result::Result<T, IndexError>;

/// Which cut the plus-side index formula belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Cut of `M` at a point: plus side `P^n`, plus components are lines
    /// of total degree `Σk`.
    PointBlowup,
    /// Cut of the point blow-up along `E` for the class `p!(A) - e`: plus
    /// side `P(O(-1) ⊕ O)`, components `Σk_j L + (Σk_j - 1) e`.
    #[serde(rename = "thm14-side")]
    PointConstraintCut,
    /// Cut of `M` along a curve of genus `g0 ≥ 1`: plus curves lie in fibres.
    CurveCase1,
    /// Cut along a rational curve with `C_1(M)(C) ≥ 0`; the plus index is a
    /// lower bound.
    CurveCase2LowerBound,
    /// Cut of the blow-up along `E` over a curve centre. Exact when
    /// `g0 ≥ 1`, a lower bound when `g0 = 0`; treated as a bound.
    BlowupExceptionalSide,
    /// Cut of `M` along a surface without rational curves.
    Surface,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::PointBlowup,
        Scenario::PointConstraintCut,
        Scenario::CurveCase1,
        Scenario::CurveCase2LowerBound,
        Scenario::BlowupExceptionalSide,
        Scenario::Surface,
    ];

    /// Whether `index_plus` is only a lower bound (and `index_minus` only
    /// an upper bound).
    pub fn is_bound(self) -> bool {
        matches!(
            self,
            Scenario::CurveCase2LowerBound | Scenario::BlowupExceptionalSide
        )
    }

    /// First Chern number of the class that is actually cut, given
    /// `c1A = C_1(M)(A)`. Only the `p!(A) - e` cut differs: `C_1(e) = n - 1`.
    pub fn cut_class_c1(self, n: i64, c1a: i64) -> i64 {
        match self {
            Scenario::PointConstraintCut => c1a - (n - 1),
            _ => c1a,
        }
    }
}

/// Index value tagged with whether it is exact or a one-sided bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexValue {
    pub value: i64,
    pub bound: Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Exact,
    Lower,
    Upper,
}

/// Additivity of the index across a cut:
/// `2(n-1)ν + 2C_1(A) + 2(3-n)(g-1)`.
pub fn index_sum(n: i64, nu: i64, c1a: i64, g: i64) -> i64 {
    2 * (n - 1) * nu + 2 * c1a + 2 * (3 - n) * (g - 1)
}

/// Real degree the insertions of a genus-`g`, `m`-point invariant in a class
/// with `C_1(A) = c1A` must add up to for the invariant to be nonzero.
pub fn required_degree_sum(n: i64, c1a: i64, g: i64, m: i64) -> i64 {
    2 * c1a + 2 * (3 - n) * (g - 1) + 2 * m
}

fn check_common(n: i64, g_plus: i64, l_plus: i64, sum_k: i64, nu: i64) -> Result<()> {
    if n < 2 {
        return Err(IndexError::DimensionTooSmall(n));
    }
    if g_plus < 0 {
        return Err(IndexError::Negative("g_plus"));
    }
    if nu < 0 {
        return Err(IndexError::Negative("nu"));
    }
    if sum_k < nu {
        return Err(IndexError::ContactSum { sum_k, nu });
    }
    if l_plus < 0 || l_plus > nu || (nu > 0 && l_plus == 0) {
        return Err(IndexError::Components { l_plus, nu });
    }
    Ok(())
}

/// Index of the plus side of a cut component.
///
/// The genus term is `2(3-n)(g⁺ - l⁺)`; for the genus-zero cuts this is
/// the `(2n-6)l⁺` term of the closed forms.
pub fn index_plus(
    scenario: Scenario,
    n: i64,
    g_plus: i64,
    l_plus: i64,
    sum_k: i64,
    nu: i64,
) -> Result<IndexValue> {
    check_common(n, g_plus, l_plus, sum_k, nu)?;
    let genus = 2 * (3 - n) * (g_plus - l_plus);
    let value = match scenario {
        Scenario::PointBlowup => genus + 2 * n * sum_k + 2 * nu,
        // each plus component has C_1 = (n+1)Σk_j - (n-1); 2nΣk - 4l⁺ + 2ν at g⁺ = 0
        Scenario::PointConstraintCut => genus + 2 * n * sum_k - 2 * (n - 1) * l_plus + 2 * nu,
        Scenario::CurveCase1 | Scenario::CurveCase2LowerBound => genus + 2 * (n - 1) * sum_k + 2 * nu,
        Scenario::BlowupExceptionalSide => genus + 2 * (2 * n - 3) * sum_k + 2 * nu,
        Scenario::Surface => genus + 2 * (n - 2) * sum_k + 2 * nu,
    };
    Ok(IndexValue {
        value,
        bound: if scenario.is_bound() {
            Bound::Lower
        } else {
            Bound::Exact
        },
    })
}

/// Index of the minus side, from its closed form per scenario. Here `c1a`
/// is `C_1(M)(A)` of the ambient class; for [`Scenario::PointConstraintCut`] the cut
/// class is `p!(A) - e`.
#[allow(clippy::too_many_arguments)]
pub fn index_minus(
    n: i64,
    c1a: i64,
    g: i64,
    g_plus: i64,
    l_plus: i64,
    nu: i64,
    sum_k: i64,
    scenario: Scenario,
) -> Result<IndexValue> {
    check_common(n, g_plus, l_plus, sum_k, nu)?;
    if g < 0 {
        return Err(IndexError::Negative("g"));
    }
    if g_plus > g {
        return Err(IndexError::Genus { g_plus, g });
    }
    let genus = 2 * (3 - n) * (g - g_plus + l_plus - 1);
    let value = match scenario {
        Scenario::PointBlowup => 2 * c1a + genus + 2 * (n - 2) * nu - 2 * n * sum_k,
        // 2C_1(A) + 4(l⁺-1) + 2(n-2)ν - 2nΣk at g = g⁺ = 0
        Scenario::PointConstraintCut => {
            2 * c1a + 4 * (l_plus - 1) + 2 * (n - 2) * nu - 2 * n * sum_k + 2 * (3 - n) * (g - g_plus)
        }
        Scenario::CurveCase1 | Scenario::CurveCase2LowerBound => {
            2 * c1a + genus + 2 * (n - 1) * (nu - sum_k) - 2 * nu
        }
        Scenario::BlowupExceptionalSide => 2 * c1a + genus + 2 * (n - 2) * nu - 2 * (2 * n - 3) * sum_k,
        Scenario::Surface => 2 * c1a + genus + 2 * (n - 2) * (nu - sum_k),
    };
    Ok(IndexValue {
        value,
        bound: if scenario.is_bound() {
            Bound::Upper
        } else {
            Bound::Exact
        },
    })
}

/// `2(3-n)(l⁺ - g⁺) - 2Σk - 2ν`; strictly negative under the point
/// blow-up hypotheses (`l⁺ ≥ 1`, `ν ≥ 1`, `k_i ≥ 1`, `g⁺ ≤ 1`, `l⁺ ≤ ν`).
pub fn point_blowup_slack(n: i64, l_plus: i64, g_plus: i64, sum_k: i64, nu: i64) -> i64 {
    2 * (3 - n) * (l_plus - g_plus) - 2 * sum_k - 2 * nu
}

/// Left side of the equality case for the `p!(A) - e` cut:
/// `4l⁺ + 2(n-2)(ν - Σk) - 4Σk`. Never positive when `l⁺ ≤ ν ≤ Σk`.
pub fn point_constraint_equality_slack(n: i64, l_plus: i64, sum_k: i64, nu: i64) -> i64 {
    4 * l_plus + 2 * (n - 2) * (nu - sum_k) - 4 * sum_k
}

/// Combinatorial data of one component in the gluing sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentProfile {
    pub n: i64,
    /// `C_1(M)(A)` of the total class.
    pub c1a: i64,
    pub g: i64,
    pub g_plus: i64,
    pub l_plus: i64,
    pub m_plus: i64,
    /// Contact orders of the ends; `ν = ks.len()`. Empty for the component
    /// that does not meet the cut.
    pub ks: Vec<i64>,
    /// Every insertion restricts to zero on the plus side (insertions are
    /// supported away from the centre of the blow-up).
    pub plus_insertions_vanish: bool,
}

impl ComponentProfile {
    pub fn nu(&self) -> i64 {
        self.ks.len() as i64
    }

    pub fn sum_k(&self) -> i64 {
        self.ks.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&k) = self.ks.iter().find(|&&k| k < 1) {
            return Err(IndexError::ContactOrder(k));
        }
        if self.m_plus < 0 {
            return Err(IndexError::Negative("m_plus"));
        }
        if self.g < 0 {
            return Err(IndexError::Negative("g"));
        }
        if self.g_plus > self.g {
            return Err(IndexError::Genus {
                g_plus: self.g_plus,
                g: self.g,
            });
        }
        check_common(self.n, self.g_plus, self.l_plus, self.sum_k(), self.nu())
    }
}

/// Why a component is (or is not) excluded from the gluing sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VanishReason {
    #[serde(rename = "support")]
    Support,
    #[serde(rename = "degree-vs-index")]
    DegreeVsIndex,
    #[serde(rename = "not-excluded")]
    NotExcluded,
}

impl VanishReason {
    pub fn as_str(self) -> &'static str {
        match self {
            VanishReason::Support => "support",
            VanishReason::DegreeVsIndex => "degree-vs-index",
            VanishReason::NotExcluded => "not-excluded",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vanishing {
    pub vanishes: bool,
    pub reason: VanishReason,
    /// Index of the minus side the degrees were compared against.
    pub index_minus: i64,
}

/// Decides whether a component contributes nothing, given the real degrees
/// of the insertions carried on the minus side.
///
/// A relative invariant vanishes when its insertions exceed the minus-side
/// index plus `2m`. For bound scenarios the minus index is an upper bound,
/// so the strict inequality against it is still conclusive.
pub fn component_vanishes(
    profile: &ComponentProfile,
    insertion_degrees: &[i64],
    scenario: Scenario,
) -> Result<Vanishing> {
    profile.validate()?;
    if let Some(&d) = insertion_degrees.iter().find(|&&d| d < 0 || d % 2 != 0) {
        return Err(IndexError::Negative(if d < 0 { "degree" } else { "odd degree" }));
    }
    let m = insertion_degrees.len() as i64;
    let index_minus = if profile.nu() == 0 {
        // no cut: the whole map lives on the minus side
        IndexValue {
            value: index_sum(profile.n, 0, profile.c1a, profile.g),
            bound: Bound::Exact,
        }
    } else {
        index_minus(
            profile.n,
            profile.c1a,
            profile.g,
            profile.g_plus,
            profile.l_plus,
            profile.nu(),
            profile.sum_k(),
            scenario,
        )?
    };
    if profile.m_plus > 0 && profile.plus_insertions_vanish {
        return Ok(Vanishing {
            vanishes: true,
            reason: VanishReason::Support,
            index_minus: index_minus.value,
        });
    }
    let total: i64 = insertion_degrees.iter().sum();
    let (vanishes, reason) = if total > index_minus.value + 2 * m {
        (true, VanishReason::DegreeVsIndex)
    } else {
        (false, VanishReason::NotExcluded)
    };
    Ok(Vanishing {
        vanishes,
        reason,
        index_minus: index_minus.value,
    })
}
