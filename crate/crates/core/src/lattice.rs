//! Intersection lattices of the manifolds that appear when cutting and
//! gluing along a blow-up: projective space, its one-point blow-up,
//! projectivised bundles (formal first Chern class only), and opaque
//! ambient manifolds together with their blow-ups along submanifolds.
//!
//! Curve classes and divisor classes are integer vectors over named bases.
//! Every manifold with a concrete lattice carries a divisor × curve pairing
//! table and its first Chern class as a divisor class.
//!
//! For the point blow-up of `P^n` the curve basis is `(f, e)` where `f` is
//! the total transform of a line and `e` a line inside the exceptional
//! divisor; the divisor basis is `(h, E)`. The proper transform of a line
//! through the blown-up point is `L = f - e`, with `L·E = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("complex dimension {0} is below 2")]
    DimensionTooSmall(u32),
    #[error("projective bundle rank must be at least 1")]
    RankTooSmall,
    #[error("inconsistent manifold descriptor: {0}")]
    Inconsistent(String),
    #[error("class has {got} coefficients but the {basis} basis has {expected}")]
    BasisMismatch {
        basis: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("manifold `{0}` has no concrete intersection lattice")]
    NoLattice(String),
    #[error("p! is not implemented from `{from}` to `{to}`")]
    UnsupportedPair { from: String, to: String },
    #[error("class is not in the cone generated by L - e and e")]
    NotEffective,
    #[error("unknown symbol `{0}` in formal divisor")]
    UnknownSymbol(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// Integer coefficients over a manifold's curve basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveClass(pub Vec<i64>);

/// Integer coefficients over a manifold's divisor basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(pub Vec<i64>);

macro_rules! lattice_vector {
    ($ty:ident) => {
        impl $ty {
            pub fn new(coefficients: impl Into<Vec<i64>>) -> Self {
                Self(coefficients.into())
            }

            pub fn zero(len: usize) -> Self {
                Self(vec![0; len])
            }

            pub fn coefficients(&self) -> &[i64] {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&c| c == 0)
            }

            fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
                assert_eq!(self.len(), other.len(), "basis length mismatch");
                Self(
                    self.0
                        .iter()
                        .zip(&other.0)
                        .map(|(&a, &b)| f(a, b))
                        .collect(),
                )
            }
        }

        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: Self) -> $ty {
                self.zip_with(rhs, |a, b| a + b)
            }
        }

        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: Self) -> $ty {
                &self + &rhs
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: Self) -> $ty {
                self.zip_with(rhs, |a, b| a - b)
            }
        }

        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: Self) -> $ty {
                &self - &rhs
            }
        }

        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(self.0.into_iter().map(|c| -c).collect())
            }
        }

        impl Mul<&$ty> for i64 {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                $ty(rhs.0.iter().map(|&c| self * c).collect())
            }
        }

        impl Mul<$ty> for i64 {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                self * &rhs
            }
        }
    };
}

lattice_vector!(CurveClass);
lattice_vector!(DivisorClass);

/// What a blow-up is centred on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum LocusKind {
    Point,
    /// A smooth curve of genus `g0` with `c1_m_on_c = C_1(M)(C)`.
    Curve {
        g0: u32,
        c1_m_on_c: i64,
    },
    Surface {
        shape: SurfaceShape,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceShape {
    /// `C_1 × C_2` with both factors of positive genus.
    ProductPositiveGenus,
    K3,
    Torus,
    /// Anything else; never satisfies the surface hypotheses.
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupLocus {
    #[serde(flatten)]
    pub kind: LocusKind,
    pub ambient_n: u32,
}

impl BlowupLocus {
    pub fn point(ambient_n: u32) -> Self {
        Self {
            kind: LocusKind::Point,
            ambient_n,
        }
    }

    pub fn curve(ambient_n: u32, g0: u32, c1_m_on_c: i64) -> Self {
        Self {
            kind: LocusKind::Curve { g0, c1_m_on_c },
            ambient_n,
        }
    }

    pub fn surface(ambient_n: u32, shape: SurfaceShape) -> Self {
        Self {
            kind: LocusKind::Surface { shape },
            ambient_n,
        }
    }

    /// Complex dimension of the centre.
    pub fn dim(&self) -> u32 {
        match self.kind {
            LocusKind::Point => 0,
            LocusKind::Curve { .. } => 1,
            LocusKind::Surface { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ambient_n < 2 {
            return Err(LatticeError::DimensionTooSmall(self.ambient_n));
        }
        if self.dim() >= self.ambient_n {
            return Err(LatticeError::Inconsistent(format!(
                "a {}-dimensional centre does not have positive codimension in dimension {}",
                self.dim(),
                self.ambient_n
            )));
        }
        Ok(())
    }
}

/// Serializable description of a manifold. Every variant carries the
/// complex dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ManifoldKind {
    ProjSpace {
        n: u32,
    },
    BlowupPoint {
        n: u32,
    },
    /// `P(V)` for a rank `rank` bundle `V` over a base of complex dimension
    /// `base_dim`. Only the formal first Chern class is modelled.
    ProjBundle {
        n: u32,
        base: String,
        base_dim: u32,
        rank: u32,
        c1_base: FormalDivisor,
        c1_bundle: FormalDivisor,
        #[serde(default = "default_xi")]
        xi: String,
    },
    /// An ambient manifold known only through the first Chern class of a
    /// chosen set of curve generators.
    Opaque {
        n: u32,
        name: String,
        curve_basis: Vec<String>,
        c1: Vec<i64>,
    },
    /// Blow-up of `base` along `locus`.
    BlowupAlong {
        n: u32,
        base: Box<ManifoldKind>,
        locus: BlowupLocus,
    },
}

fn default_xi() -> String {
    "xi".to_string()
}

impl ManifoldKind {
    pub fn n(&self) -> u32 {
        match self {
            ManifoldKind::ProjSpace { n }
            | ManifoldKind::BlowupPoint { n }
            | ManifoldKind::ProjBundle { n, .. }
            | ManifoldKind::Opaque { n, .. }
            | ManifoldKind::BlowupAlong { n, .. } => *n,
        }
    }

    /// Short key used in cache files and reports.
    pub fn key(&self) -> String {
        match self {
            ManifoldKind::ProjSpace { n } => format!("P{n}"),
            ManifoldKind::BlowupPoint { n } => format!("BlP{n}"),
            ManifoldKind::ProjBundle { base, rank, .. } => format!("P(V{rank}/{base})"),
            ManifoldKind::Opaque { name, .. } => name.clone(),
            ManifoldKind::BlowupAlong { base, locus, .. } => {
                let centre = match &locus.kind {
                    LocusKind::Point => "pt".to_string(),
                    LocusKind::Curve { g0, .. } => format!("C{g0}"),
                    LocusKind::Surface { shape } => format!("S:{shape:?}"),
                };
                format!("Bl[{centre}]{}", base.key())
            }
        }
    }
}

/// A manifold together with its intersection lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ManifoldKind", try_from = "ManifoldKind")]
pub struct Manifold {
    kind: ManifoldKind,
    curve_basis: Vec<String>,
    divisor_basis: Vec<String>,
    /// `pairing[d][c]` is divisor `d` paired with curve `c`.
    pairing: Vec<Vec<i64>>,
    c1: DivisorClass,
    formal_c1: Option<FormalDivisor>,
}

impl From<Manifold> for ManifoldKind {
    fn from(m: Manifold) -> Self {
        m.kind
    }
}

impl TryFrom<ManifoldKind> for Manifold {
    type Error = LatticeError;
    fn try_from(kind: ManifoldKind) -> Result<Self> {
        make_manifold(kind)
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind.key())
    }
}

impl Manifold {
    pub fn proj_space(n: u32) -> Result<Self> {
        make_manifold(ManifoldKind::ProjSpace { n })
    }

    pub fn blowup_point(n: u32) -> Result<Self> {
        make_manifold(ManifoldKind::BlowupPoint { n })
    }

    pub fn kind(&self) -> &ManifoldKind {
        &self.kind
    }

    /// Complex dimension.
    pub fn n(&self) -> u32 {
        self.kind.n()
    }

    pub fn real_dim(&self) -> u32 {
        2 * self.n()
    }

    pub fn key(&self) -> String {
        self.kind.key()
    }

    pub fn curve_basis(&self) -> &[String] {
        &self.curve_basis
    }

    pub fn divisor_basis(&self) -> &[String] {
        &self.divisor_basis
    }

    pub fn pairing_table(&self) -> &[Vec<i64>] {
        &self.pairing
    }

    pub fn c1(&self) -> &DivisorClass {
        &self.c1
    }

    pub fn formal_c1(&self) -> Option<&FormalDivisor> {
        self.formal_c1.as_ref()
    }

    pub fn has_lattice(&self) -> bool {
        !self.curve_basis.is_empty()
    }

    pub fn is_blowup_point(&self) -> bool {
        matches!(self.kind, ManifoldKind::BlowupPoint { .. })
    }

    pub fn is_proj_space(&self) -> bool {
        matches!(self.kind, ManifoldKind::ProjSpace { .. })
    }

    pub fn zero_curve(&self) -> CurveClass {
        CurveClass::zero(self.curve_basis.len())
    }

    pub fn zero_divisor(&self) -> DivisorClass {
        DivisorClass::zero(self.divisor_basis.len())
    }

    /// Basis curve class by name.
    pub fn curve(&self, name: &str) -> Option<CurveClass> {
        let i = self.curve_basis.iter().position(|b| b == name)?;
        let mut v = self.zero_curve();
        v.0[i] = 1;
        Some(v)
    }

    /// Basis divisor class by name.
    pub fn divisor(&self, name: &str) -> Option<DivisorClass> {
        let i = self.divisor_basis.iter().position(|b| b == name)?;
        let mut v = self.zero_divisor();
        v.0[i] = 1;
        Some(v)
    }

    /// The proper transform `L = f - e` of a line through the blown-up point.
    pub fn proper_line(&self) -> Option<CurveClass> {
        match self.kind {
            ManifoldKind::BlowupPoint { .. } => Some(CurveClass::new([1, -1])),
            _ => None,
        }
    }

    /// Index of the exceptional class `e` in the curve basis, if any.
    pub fn exceptional_curve_index(&self) -> Option<usize> {
        match self.kind {
            ManifoldKind::BlowupPoint { .. } | ManifoldKind::BlowupAlong { .. } => {
                Some(self.curve_basis.len() - 1)
            }
            _ => None,
        }
    }

    /// Index of the exceptional divisor `E` in the divisor basis, if any.
    pub fn exceptional_divisor_index(&self) -> Option<usize> {
        match self.kind {
            ManifoldKind::BlowupPoint { .. } | ManifoldKind::BlowupAlong { .. } => {
                Some(self.divisor_basis.len() - 1)
            }
            _ => None,
        }
    }

    /// True when `a` is `r·e` for some `r ≥ 1`.
    pub fn is_exceptional_multiple(&self, a: &CurveClass) -> bool {
        match self.exceptional_curve_index() {
            Some(ie) => {
                a.0.iter()
                    .enumerate()
                    .all(|(i, &c)| if i == ie { c >= 1 } else { c == 0 })
            }
            None => false,
        }
    }

    pub fn check_curve(&self, a: &CurveClass) -> Result<()> {
        if a.len() != self.curve_basis.len() {
            return Err(LatticeError::BasisMismatch {
                basis: "curve",
                expected: self.curve_basis.len(),
                got: a.len(),
            });
        }
        Ok(())
    }

    pub fn check_divisor(&self, d: &DivisorClass) -> Result<()> {
        if d.len() != self.divisor_basis.len() {
            return Err(LatticeError::BasisMismatch {
                basis: "divisor",
                expected: self.divisor_basis.len(),
                got: d.len(),
            });
        }
        Ok(())
    }

    /// Formats a curve class as e.g. `3f-1e`.
    pub fn format_curve(&self, a: &CurveClass) -> String {
        format_combination(&self.curve_basis, a.coefficients())
    }

    /// Formats a divisor class as e.g. `3h-1E`.
    pub fn format_divisor(&self, d: &DivisorClass) -> String {
        format_combination(&self.divisor_basis, d.coefficients())
    }
}

fn format_combination(basis: &[String], coefficients: &[i64]) -> String {
    let mut out = String::new();
    for (name, &c) in basis.iter().zip(coefficients) {
        if c == 0 {
            continue;
        }
        if c > 0 && !out.is_empty() {
            out.push('+');
        }
        out.push_str(&format!("{c}{name}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Builds a manifold from its descriptor, filling in the pairing table and
/// first Chern class.
pub fn make_manifold(kind: ManifoldKind) -> Result<Manifold> {
    let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match &kind {
        ManifoldKind::ProjSpace { n } => {
            let n = *n;
            if n < 2 {
                return Err(LatticeError::DimensionTooSmall(n));
            }
            Ok(Manifold {
                curve_basis: names(&["l"]),
                divisor_basis: names(&["H"]),
                pairing: vec![vec![1]],
                c1: DivisorClass::new([n as i64 + 1]),
                formal_c1: None,
                kind,
            })
        }
        ManifoldKind::BlowupPoint { n } => {
            let n = *n;
            if n < 2 {
                return Err(LatticeError::DimensionTooSmall(n));
            }
            let n = n as i64;
            Ok(Manifold {
                curve_basis: names(&["f", "e"]),
                divisor_basis: names(&["h", "E"]),
                // h·f = 1, h·e = 0, E·f = 0, E·e = -1
                pairing: vec![vec![1, 0], vec![0, -1]],
                c1: DivisorClass::new([n + 1, -(n - 1)]),
                formal_c1: None,
                kind,
            })
        }
        ManifoldKind::ProjBundle {
            n,
            base_dim,
            rank,
            c1_base,
            c1_bundle,
            xi,
            ..
        } => {
            if *rank < 1 {
                return Err(LatticeError::RankTooSmall);
            }
            if *n != base_dim + rank - 1 {
                return Err(LatticeError::Inconsistent(format!(
                    "P(V) over a {base_dim}-dimensional base with rank {rank} has dimension {}, not {n}",
                    base_dim + rank - 1
                )));
            }
            let formal = proj_bundle_c1(c1_base, c1_bundle, *rank as i64, xi)?;
            Ok(Manifold {
                curve_basis: Vec::new(),
                divisor_basis: Vec::new(),
                pairing: Vec::new(),
                c1: DivisorClass::default(),
                formal_c1: Some(formal),
                kind,
            })
        }
        ManifoldKind::Opaque {
            n, curve_basis, c1, ..
        } => {
            if *n < 2 {
                return Err(LatticeError::DimensionTooSmall(*n));
            }
            if curve_basis.is_empty() || curve_basis.len() != c1.len() {
                return Err(LatticeError::Inconsistent(
                    "opaque manifold needs one c1 value per curve generator".into(),
                ));
            }
            Ok(Manifold {
                curve_basis: curve_basis.clone(),
                divisor_basis: names(&["c1"]),
                pairing: vec![c1.clone()],
                c1: DivisorClass::new([1]),
                formal_c1: None,
                kind,
            })
        }
        ManifoldKind::BlowupAlong { n, base, locus } => {
            locus.validate()?;
            let base = make_manifold((**base).clone())?;
            if base.n() != *n || locus.ambient_n != *n {
                return Err(LatticeError::Inconsistent(format!(
                    "blow-up dimension {n}, base dimension {}, locus ambient dimension {}",
                    base.n(),
                    locus.ambient_n
                )));
            }
            if !base.has_lattice() {
                return Err(LatticeError::NoLattice(base.key()));
            }
            let mut curve_basis = base.curve_basis.clone();
            curve_basis.push("e".into());
            let mut divisor_basis = base.divisor_basis.clone();
            divisor_basis.push("E".into());
            let mut pairing: Vec<Vec<i64>> = base
                .pairing
                .iter()
                .map(|row| {
                    let mut row = row.clone();
                    row.push(0);
                    row
                })
                .collect();
            let mut e_row = vec![0; curve_basis.len()];
            *e_row.last_mut().unwrap() = -1;
            pairing.push(e_row);
            // C_1(M~) = p*C_1(M) - (codim - 1) E
            let codim = (*n - locus.dim()) as i64;
            let mut c1 = base.c1.0.clone();
            c1.push(-(codim - 1));
            Ok(Manifold {
                curve_basis,
                divisor_basis,
                pairing,
                c1: DivisorClass(c1),
                formal_c1: None,
                kind,
            })
        }
    }
}

/// Bilinear pairing of a divisor class with a curve class.
pub fn pairing(m: &Manifold, d: &DivisorClass, a: &CurveClass) -> Result<i64> {
    if !m.has_lattice() {
        return Err(LatticeError::NoLattice(m.key()));
    }
    m.check_divisor(d)?;
    m.check_curve(a)?;
    Ok(d.0
        .iter()
        .zip(&m.pairing)
        .map(|(&dc, row)| dc * row.iter().zip(&a.0).map(|(&p, &ac)| p * ac).sum::<i64>())
        .sum())
}

/// `C_1(M)` evaluated on a curve class.
pub fn c1_eval(m: &Manifold, a: &CurveClass) -> Result<i64> {
    pairing(m, &m.c1, a)
}

/// Coefficients `(a, b)` with `A = a(L - e) + b·e`, `a, b ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoriDecomposition {
    pub a: i64,
    pub b: i64,
}

/// Writes a class on the point blow-up in the cone spanned by `L - e` and
/// `e`. In the `(f, e)` basis `L - e = f - 2e`, so `A = a·f + (b - 2a)·e`.
pub fn mori_decompose(m: &Manifold, a: &CurveClass) -> Result<MoriDecomposition> {
    if !m.is_blowup_point() {
        return Err(LatticeError::Inconsistent(format!(
            "Mori decomposition needs a point blow-up, got {}",
            m.key()
        )));
    }
    m.check_curve(a)?;
    let (fc, ec) = (a.0[0], a.0[1]);
    let dec = MoriDecomposition {
        a: fc,
        b: ec + 2 * fc,
    };
    if dec.a < 0 || dec.b < 0 {
        return Err(LatticeError::NotEffective);
    }
    Ok(dec)
}

impl MoriDecomposition {
    /// Back to `(f, e)` coefficients.
    pub fn recompose(&self) -> CurveClass {
        CurveClass::new([self.a, self.b - 2 * self.a])
    }
}

/// `p!(A) = PD p* PD(A)` for the blow-up `p: Mtilde → M`.
///
/// For `P^n` and its point blow-up the class is found from the pairing
/// table of `Mtilde`: it is the unique curve class `x` with
/// `p*D · x = D · A` for every divisor `D` of `M` and `E · x = 0`.
/// For a blow-up along a submanifold the lattice of `Mtilde` extends that
/// of `M` and `p!` is the inclusion with zero exceptional coefficient.
pub fn p_shriek(m: &Manifold, mtilde: &Manifold, a: &CurveClass) -> Result<CurveClass> {
    m.check_curve(a)?;
    let unsupported = || LatticeError::UnsupportedPair {
        from: m.key(),
        to: mtilde.key(),
    };
    match (m.kind(), mtilde.kind()) {
        (ManifoldKind::ProjSpace { n }, ManifoldKind::BlowupPoint { n: nt }) if n == nt => {
            // p*H = h, and the exceptional divisor pairs to zero.
            let mut rhs = Vec::with_capacity(mtilde.divisor_basis.len());
            for j in 0..m.divisor_basis.len() {
                let d = m.divisor(&m.divisor_basis[j]).expect("basis divisor");
                rhs.push(pairing(m, &d, a)?);
            }
            rhs.push(0);
            solve_integral(&mtilde.pairing, &rhs).ok_or_else(unsupported)
        }
        (_, ManifoldKind::BlowupAlong { base, .. }) if **base == *m.kind() => {
            let mut coeffs = a.0.clone();
            coeffs.push(0);
            Ok(CurveClass(coeffs))
        }
        _ => Err(unsupported()),
    }
}

/// Solves the square system `matrix · x = rhs` over the rationals and
/// returns `x` when it is integral.
fn solve_integral(matrix: &[Vec<i64>], rhs: &[i64]) -> Option<CurveClass> {
    let size = rhs.len();
    if matrix.len() != size || matrix.iter().any(|row| row.len() != size) {
        return None;
    }
    let mut aug: Vec<Vec<Ratio<i64>>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            row.iter()
                .map(|&x| Ratio::from_integer(x))
                .chain(std::iter::once(Ratio::from_integer(b)))
                .collect()
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let p = aug[col][col];
        for x in aug[col].iter_mut() {
            *x /= p;
        }
        for r in 0..size {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col];
                let pivot_row = aug[col].clone();
                for (x, y) in aug[r].iter_mut().zip(pivot_row) {
                    *x -= factor * y;
                }
            }
        }
    }
    let mut out = Vec::with_capacity(size);
    for row in &aug {
        let x = row[size];
        if !x.denom().is_one() {
            return None;
        }
        out.push(*x.numer());
    }
    Some(CurveClass(out))
}

/// A formal integer combination of named divisor symbols, used where only
/// the first Chern class of a projectivised bundle is needed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FormalDivisor(BTreeMap<String, i64>);

impl FormalDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(name: &str) -> Self {
        Self::term(1, name)
    }

    pub fn term(coefficient: i64, name: &str) -> Self {
        let mut out = Self::default();
        out.add_term(coefficient, name);
        out
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (i64, &'a str)>) -> Self {
        let mut out = Self::default();
        for (c, name) in terms {
            out.add_term(c, name);
        }
        out
    }

    pub fn add_term(&mut self, coefficient: i64, name: &str) {
        let slot = self.0.entry(name.to_string()).or_insert(0);
        *slot += coefficient;
        if *slot == 0 {
            self.0.remove(name);
        }
    }

    pub fn coefficient(&self, name: &str) -> i64 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut out = Self::default();
        for (name, c) in self.terms() {
            out.add_term(k * c, name);
        }
        out
    }

    /// Substitutes a concrete divisor class for each symbol.
    pub fn realize(&self, m: &Manifold, assignment: &BTreeMap<String, DivisorClass>) -> Result<DivisorClass> {
        let mut out = m.zero_divisor();
        for (name, c) in self.terms() {
            let d = assignment
                .get(name)
                .ok_or_else(|| LatticeError::UnknownSymbol(name.to_string()))?;
            m.check_divisor(d)?;
            out = out + c * d;
        }
        Ok(out)
    }
}

impl Add for &FormalDivisor {
    type Output = FormalDivisor;
    fn add(self, rhs: Self) -> FormalDivisor {
        let mut out = self.clone();
        for (name, c) in rhs.terms() {
            out.add_term(c, name);
        }
        out
    }
}

impl Sub for &FormalDivisor {
    type Output = FormalDivisor;
    fn sub(self, rhs: Self) -> FormalDivisor {
        self + &rhs.scaled(-1)
    }
}

impl fmt::Display for FormalDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (name, c)) in self.terms().enumerate() {
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            f.write_str(name)?;
        }
        Ok(())
    }
}

/// First Chern class of `P(V)` for a rank-`r` bundle `V` over `X`:
/// `π*C_1(X) + π*C_1(V) - r·ξ_V`, where `ξ_V` is the first Chern class of the
/// tautological line bundle. Pulled-back symbols keep their names.
pub fn proj_bundle_c1(
    c1_base: &FormalDivisor,
    c1_bundle: &FormalDivisor,
    rank: i64,
    xi: &str,
) -> Result<FormalDivisor> {
    if rank < 1 {
        return Err(LatticeError::RankTooSmall);
    }
    if c1_base.coefficient(xi) != 0 || c1_bundle.coefficient(xi) != 0 {
        return Err(LatticeError::Inconsistent(format!(
            "tautological symbol `{xi}` already occurs in the input"
        )));
    }
    let mut out = c1_base + c1_bundle;
    out.add_term(-rank, xi);
    Ok(out)
}

/// The point blow-up of `P^n` seen as `P(O(-1) ⊕ O)` over `P^{n-1}`:
/// returns its formal first Chern class in the symbols `H'` (pulled back
/// hyperplane of `P^{n-1}`) and `xi`, and the identification of those
/// symbols with divisors of the blow-up: `H' ↦ h - E` (hyperplanes through
/// the centre) and `xi ↦ -h` (`O_{P(V)}(1)` is the pulled-back hyperplane).
pub fn point_blowup_bundle_model(n: u32) -> Result<(FormalDivisor, BTreeMap<String, DivisorClass>)> {
    let blowup = Manifold::blowup_point(n)?;
    let c1_base = FormalDivisor::term(n as i64, "H'");
    let c1_bundle = FormalDivisor::term(-1, "H'");
    let formal = proj_bundle_c1(&c1_base, &c1_bundle, 2, "xi")?;
    let h = blowup.divisor("h").expect("h");
    let e = blowup.divisor("E").expect("E");
    let mut assignment = BTreeMap::new();
    assignment.insert("H'".to_string(), &h - &e);
    assignment.insert("xi".to_string(), -h);
    Ok((formal, assignment))
}
