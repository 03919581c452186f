//! Blow-up identities as gated rewrites of invariant queries.
//!
//! Each rewrite checks its hypotheses, builds the blown-up query, and
//! evaluates both sides with the oracle. A rewrite whose hypotheses fail
//! never produces a target.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::index::{component_vanishes, ComponentProfile, Scenario};
use crate::lattice::{
    c1_eval, p_shriek, BlowupLocus, CurveClass, LatticeError, LocusKind, Manifold, ManifoldKind, SurfaceShape,
};
use crate::oracle::{EvalOptions, Insertion, InvariantQuery, Oracle, OracleError};
use crate::rational::ExactRational;

#[derive(Debug, thiserror::Error)]
pub enum RuleError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, RuleError>;

/// The identities, named on the command line by their short tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// Invariants in classes `r·e` with a pulled-back insertion vanish.
    #[serde(rename = "lemma1-1")]
    ExceptionalVanishing,
    /// Point blow-up preserves invariants, genus at most one.
    #[serde(rename = "thm1-2")]
    PointBlowup,
    /// Point blow-up preserves invariants of any genus in real dimension ≤ 6.
    #[serde(rename = "thm1-3")]
    LowDimensionBlowup,
    /// A point constraint becomes the class `p!(A) - e`.
    #[serde(rename = "thm1-4")]
    PointConstraint,
    /// Blow-up along a curve.
    #[serde(rename = "thm1-5")]
    CurveBlowup,
    /// Blow-up along a surface.
    #[serde(rename = "thm1-6")]
    SurfaceBlowup,
    /// Two exceptional-divisor insertions in the class `e` give 1.
    #[serde(rename = "corollary-e")]
    ExceptionalTwoPoint,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::ExceptionalVanishing,
        Rule::PointBlowup,
        Rule::LowDimensionBlowup,
        Rule::PointConstraint,
        Rule::CurveBlowup,
        Rule::SurfaceBlowup,
        Rule::ExceptionalTwoPoint,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Rule::ExceptionalVanishing => "lemma1-1",
            Rule::PointBlowup => "thm1-2",
            Rule::LowDimensionBlowup => "thm1-3",
            Rule::PointConstraint => "thm1-4",
            Rule::CurveBlowup => "thm1-5",
            Rule::SurfaceBlowup => "thm1-6",
            Rule::ExceptionalTwoPoint => "corollary-e",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Rule {
    type Err = RuleError;
    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.token() == s)
            .ok_or_else(|| RuleError::UnknownRule(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub passed: bool,
}

impl Gate {
    fn new(name: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            passed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum Target {
    Query {
        query: InvariantQuery,
    },
    Zero,
    /// A value fixed by a seed rather than a query.
    Seed {
        label: String,
        value: ExactRational,
    },
}

impl Target {
    pub fn describe(&self) -> String {
        match self {
            Target::Query { query } => query.to_string(),
            Target::Zero => "0".into(),
            Target::Seed { label, value } => format!("{label} = {value}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Verified {
        value: ExactRational,
    },
    /// The vanishing gate fired; `confirmed` when an ungated evaluation
    /// also gave zero.
    Zero {
        confirmed: bool,
    },
    GateFailed {
        gate: String,
    },
    SymbolicOnly,
    Mismatch {
        source: ExactRational,
        target: ExactRational,
    },
    /// A bookkeeping check on an otherwise valid rewrite failed.
    CheckFailed {
        check: String,
    },
    NotApplicable,
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Verified { .. } => "verified",
            Verdict::Zero { .. } => "zero",
            Verdict::GateFailed { .. } => "gate-failed",
            Verdict::SymbolicOnly => "symbolic-only",
            Verdict::Mismatch { .. } => "mismatch",
            Verdict::CheckFailed { .. } => "check-failed",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified { value } => write!(f, "verified({value})"),
            Verdict::Zero { confirmed: true } => f.write_str("zero"),
            Verdict::Zero { confirmed: false } => f.write_str("zero(unconfirmed)"),
            Verdict::GateFailed { gate } => write!(f, "gate-failed({gate})"),
            Verdict::SymbolicOnly => f.write_str("symbolic-only"),
            Verdict::Mismatch { source, target } => write!(f, "mismatch({source} != {target})"),
            Verdict::CheckFailed { check } => write!(f, "check-failed({check})"),
            Verdict::NotApplicable => f.write_str("not-applicable"),
        }
    }
}

/// Outcome of sweeping the component-vanishing gates over a grid of cut
/// profiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexAudit {
    pub scenarios: Vec<Scenario>,
    pub profiles: usize,
    /// Profiles the gates did not exclude.
    pub survivors: usize,
    /// Plus-side index of the smallest cut (`ν = l⁺ = k_1 = 1`) per scenario.
    pub budgets: Vec<(Scenario, i64)>,
}

impl IndexAudit {
    pub fn all_excluded(&self) -> bool {
        self.survivors == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleApplication {
    pub rule: Rule,
    pub source: InvariantQuery,
    pub target: Option<Target>,
    pub gates: Vec<Gate>,
    /// Consistency checks on the rewrite itself (degree bookkeeping).
    pub checks: Vec<Gate>,
    pub audit: Option<IndexAudit>,
    pub source_value: Option<ExactRational>,
    pub target_value: Option<ExactRational>,
    pub verdict: Verdict,
    /// Free-form remark surfaced in reports.
    pub note: Option<String>,
}

impl RuleApplication {
    fn gated(rule: Rule, source: InvariantQuery, gates: Vec<Gate>) -> Self {
        let failed = gates.iter().find(|g| !g.passed).map(|g| g.name.clone());
        Self {
            rule,
            source,
            target: None,
            gates,
            checks: Vec::new(),
            audit: None,
            source_value: None,
            target_value: None,
            verdict: match failed {
                Some(gate) => Verdict::GateFailed { gate },
                None => Verdict::NotApplicable,
            },
            note: None,
        }
    }

    pub fn gates_passed(&self) -> bool {
        self.gates.iter().all(|g| g.passed)
    }
}

/// Whether the exceptional-class vanishing applies: a point blow-up, a
/// class `r·e` with `r ≥ 1`, and at least one insertion pulled back from
/// the blow-down.
pub fn exceptional_pullback_applies(q: &InvariantQuery) -> bool {
    is_point_blowup(&q.manifold)
        && q.manifold.is_exceptional_multiple(&q.class)
        && q.insertions.iter().any(|i| is_pulled_back(&q.manifold, i))
}

/// Whether an insertion on a point blow-up lies in the image of `p*` with
/// positive degree: explicit pullbacks, hyperplane powers, the point class
/// and divisors without an `E` component.
fn is_pulled_back(m: &Manifold, ins: &Insertion) -> bool {
    match ins {
        Insertion::Pullback { .. } | Insertion::Point => true,
        Insertion::HyperplanePower { k } => *k >= 1,
        Insertion::Divisor { class } => m
            .exceptional_divisor_index()
            .is_some_and(|i| class.coefficients().get(i) == Some(&0)),
        Insertion::Unit | Insertion::ExcDual | Insertion::Generic { .. } => false,
    }
}

fn is_point_blowup(m: &Manifold) -> bool {
    match m.kind() {
        ManifoldKind::BlowupPoint { .. } => true,
        ManifoldKind::BlowupAlong { locus, .. } => locus.kind == LocusKind::Point,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaOutcome {
    Zero,
    NotApplicable,
}

pub fn apply_exceptional_vanishing(q: &InvariantQuery) -> LemmaOutcome {
    if exceptional_pullback_applies(q) {
        LemmaOutcome::Zero
    } else {
        LemmaOutcome::NotApplicable
    }
}

/// Runs the vanishing gate and confirms it by evaluating the query with the
/// gate switched off.
pub fn check_exceptional_vanishing(q: &InvariantQuery, oracle: &Oracle) -> Result<RuleApplication> {
    let gates = vec![
        Gate::new("point blow-up", is_point_blowup(&q.manifold)),
        Gate::new("A = r·e, r ≥ 1", q.manifold.is_exceptional_multiple(&q.class)),
        Gate::new(
            "pullback insertion",
            q.insertions.iter().any(Insertion::is_pullback),
        ),
    ];
    let mut app = RuleApplication::gated(Rule::ExceptionalVanishing, q.clone(), gates);
    if !app.gates_passed() {
        app.verdict = Verdict::NotApplicable;
        return Ok(app);
    }
    let ungated = oracle.evaluate_with(q, EvalOptions { pullback_gate: false })?;
    app.target = Some(Target::Zero);
    app.target_value = Some(ExactRational::zero());
    app.source_value = ungated.value();
    app.verdict = match app.source_value.clone() {
        Some(v) if v.is_zero() => Verdict::Zero { confirmed: true },
        Some(v) => Verdict::Mismatch {
            source: v,
            target: ExactRational::zero(),
        },
        None => Verdict::Zero { confirmed: false },
    };
    Ok(app)
}

/// The manifold obtained by blowing up `m` along `locus`.
pub fn blowup_of(m: &Manifold, locus: &BlowupLocus) -> Result<Manifold> {
    if locus.ambient_n != m.n() {
        return Err(RuleError::Unsupported(format!(
            "locus lives in dimension {}, manifold {} has dimension {}",
            locus.ambient_n,
            m.key(),
            m.n()
        )));
    }
    match (m.kind(), &locus.kind) {
        (ManifoldKind::ProjSpace { n }, LocusKind::Point) => Ok(Manifold::blowup_point(*n)?),
        (ManifoldKind::ProjSpace { .. } | ManifoldKind::Opaque { .. }, _) => {
            Ok(Manifold::try_from(ManifoldKind::BlowupAlong {
                n: m.n(),
                base: Box::new(m.kind().clone()),
                locus: locus.clone(),
            })?)
        }
        _ => Err(RuleError::Unsupported(format!("cannot blow up {}", m.key()))),
    }
}

fn pulled_back(insertions: &[Insertion]) -> Vec<Insertion> {
    insertions.iter().cloned().map(Insertion::pullback).collect()
}

/// Evaluates both sides and settles the verdict of a rewrite whose gates
/// passed.
fn settle(app: &mut RuleApplication, oracle: &Oracle) -> Result<()> {
    let Some(Target::Query { query }) = &app.target else {
        return Ok(());
    };
    let source = oracle.evaluate(&app.source)?;
    let target = oracle.evaluate(query)?;
    app.source_value = source.value();
    app.target_value = target.value();
    if let Some(check) = app.checks.iter().find(|c| !c.passed) {
        app.verdict = Verdict::CheckFailed {
            check: check.name.clone(),
        };
        return Ok(());
    }
    app.verdict = match (&app.source_value, &app.target_value) {
        (Some(s), Some(t)) if s == t => Verdict::Verified { value: s.clone() },
        (Some(s), Some(t)) => Verdict::Mismatch {
            source: s.clone(),
            target: t.clone(),
        },
        _ => Verdict::SymbolicOnly,
    };
    Ok(())
}

/// `required(source) = required(target) + shift`.
fn bookkeeping(source: &InvariantQuery, target: &InvariantQuery, shift: i64) -> Gate {
    let ok = match (source.required_degree(), target.required_degree()) {
        (Some(s), Some(t)) => s == t + shift,
        _ => false,
    };
    Gate::new("degree bookkeeping", ok)
}

fn point_blowup_rewrite(
    rule: Rule,
    q: &InvariantQuery,
    gates: Vec<Gate>,
    oracle: &Oracle,
) -> Result<RuleApplication> {
    let mut app = RuleApplication::gated(rule, q.clone(), gates);
    if !app.gates_passed() {
        return Ok(app);
    }
    let m = &q.manifold;
    let target_m = blowup_of(m, &BlowupLocus::point(m.n()))?;
    let class = p_shriek(m, &target_m, &q.class)?;
    let target = InvariantQuery::new(target_m, class, q.genus, pulled_back(&q.insertions));
    app.checks.push(bookkeeping(q, &target, 0));
    if rule == Rule::PointBlowup {
        app.audit = Some(audit(q, &[Scenario::PointBlowup], None)?);
    }
    app.target = Some(Target::Query { query: target });
    settle(&mut app, oracle)?;
    Ok(app)
}

/// Point blow-up for genus at most one.
pub fn transform_point_blowup(q: &InvariantQuery, oracle: &Oracle) -> Result<RuleApplication> {
    let gates = vec![Gate::new("g ≤ 1", q.genus <= 1)];
    point_blowup_rewrite(Rule::PointBlowup, q, gates, oracle)
}

/// Point blow-up for any genus in real dimension at most six. Numeric
/// agreement is only available at genus zero.
pub fn transform_low_dimension(q: &InvariantQuery, oracle: &Oracle) -> Result<RuleApplication> {
    let gates = vec![Gate::new("dim_R ≤ 6", q.manifold.real_dim() <= 6)];
    point_blowup_rewrite(Rule::LowDimensionBlowup, q, gates, oracle)
}

/// Trades the last point insertion for the class `p!(A) - e` on the point
/// blow-up.
pub fn transform_point_constraint(q: &InvariantQuery, oracle: &Oracle) -> Result<RuleApplication> {
    let Some(pos) = q.insertions.iter().rposition(Insertion::is_point) else {
        let mut app = RuleApplication::gated(
            Rule::PointConstraint,
            q.clone(),
            vec![Gate::new("point insertion", false)],
        );
        app.verdict = Verdict::NotApplicable;
        return Ok(app);
    };
    let gates = vec![
        Gate::new("point insertion", true),
        Gate::new("g = 0", q.genus == 0),
    ];
    let mut app = RuleApplication::gated(Rule::PointConstraint, q.clone(), gates);
    if !app.gates_passed() {
        return Ok(app);
    }
    let m = &q.manifold;
    let target_m = blowup_of(m, &BlowupLocus::point(m.n()))?;
    let mut class = p_shriek(m, &target_m, &q.class)?;
    let ie = target_m.exceptional_curve_index().expect("blow-up has e");
    class.0[ie] -= 1;
    let mut rest = q.insertions.clone();
    rest.remove(pos);
    let target = InvariantQuery::new(target_m, class, 0, pulled_back(&rest));
    app.checks.push(bookkeeping(q, &target, 2 * m.n() as i64));
    app.target = Some(Target::Query { query: target });
    settle(&mut app, oracle)?;
    Ok(app)
}

/// Divisor-axiom normalization of the insertions before a curve or surface
/// blow-up: degree-2 divisor insertions are stripped with their pairing
/// factor. Returns `None` when a unit insertion kills the invariant.
fn strip_divisors(q: &InvariantQuery) -> Result<Option<(ExactRational, InvariantQuery)>> {
    if q.class.is_zero() {
        return Ok(Some((ExactRational::one(), q.clone())));
    }
    if q.insertions.contains(&Insertion::Unit) {
        return Ok(None);
    }
    let mut scalar = ExactRational::one();
    let mut kept = Vec::new();
    for ins in &q.insertions {
        match ins {
            Insertion::Divisor { class } => {
                let factor = crate::lattice::pairing(&q.manifold, class, &q.class)?;
                scalar = scalar * ExactRational::from(factor);
            }
            other => kept.push(other.clone()),
        }
    }
    Ok(Some((
        scalar,
        InvariantQuery {
            insertions: kept,
            ..q.clone()
        },
    )))
}

/// Sweeps the vanishing gates over cut profiles with `ν ≤ 3`, `k_i ≤ 3`,
/// `l⁺ ≤ ν` at genus zero, once with every insertion on the minus side and
/// once with one on the plus side. `None` when the insertion degrees do not
/// meet the dimension constraint, since then both sides vanish anyway.
fn audit(q: &InvariantQuery, scenarios: &[Scenario], degrees: Option<Vec<i64>>) -> Result<IndexAudit> {
    let n = q.manifold.n() as i64;
    let c1a = c1_eval(&q.manifold, &q.class)?;
    let degrees = degrees.unwrap_or_else(|| {
        q.insertions
            .iter()
            .map(|i| i.real_degree(n as u32) as i64)
            .collect()
    });
    let mut profiles = 0;
    let mut survivors = 0;
    let mut budgets = Vec::new();
    for &scenario in scenarios {
        let smallest = crate::index::index_plus(scenario, n, 0, 1, 1, 1)
            .map_err(|e| RuleError::Unsupported(e.to_string()))?;
        budgets.push((scenario, smallest.value));
        for ks in contact_lists(3, 3) {
            let nu = ks.len() as i64;
            for l_plus in 1..=nu {
                for m_plus in [0, 1] {
                    let profile = ComponentProfile {
                        n,
                        c1a: scenario.cut_class_c1(n, c1a),
                        g: 0,
                        g_plus: 0,
                        l_plus,
                        m_plus,
                        ks: ks.clone(),
                        plus_insertions_vanish: true,
                    };
                    let v = component_vanishes(&profile, &degrees, scenario)
                        .map_err(|e| RuleError::Unsupported(e.to_string()))?;
                    profiles += 1;
                    if !v.vanishes {
                        survivors += 1;
                    }
                }
            }
        }
    }
    Ok(IndexAudit {
        scenarios: scenarios.to_vec(),
        profiles,
        survivors,
        budgets,
    })
}

/// All contact-order lists of length `1..=max_nu` with entries `1..=max_k`.
fn contact_lists(max_nu: usize, max_k: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..max_nu {
        let mut next = Vec::new();
        for ks in &frontier {
            for k in 1..=max_k {
                let mut longer = ks.clone();
                longer.push(k);
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn degree_matches(q: &InvariantQuery) -> bool {
    q.required_degree() == Some(q.total_degree())
}

/// Blow-up along a curve `C` of genus `g0`, assuming `g0 ≥ 1` or
/// `g0 = 0` with `C_1(M)(C) ≥ 0`. Genus-zero queries only.
pub fn transform_curve_blowup(
    q: &InvariantQuery,
    locus: &BlowupLocus,
    oracle: &Oracle,
) -> Result<RuleApplication> {
    let LocusKind::Curve { g0, c1_m_on_c } = locus.kind else {
        return Err(RuleError::Unsupported("curve blow-up needs a curve locus".into()));
    };
    locus.validate()?;
    let gates = vec![
        Gate::new("g = 0", q.genus == 0),
        Gate::new("g0 ≥ 1 or (g0 = 0 and C1(M)(C) ≥ 0)", g0 >= 1 || c1_m_on_c >= 0),
    ];
    let scenarios = if g0 >= 1 {
        [Scenario::CurveCase1, Scenario::BlowupExceptionalSide]
    } else {
        [Scenario::CurveCase2LowerBound, Scenario::BlowupExceptionalSide]
    };
    submanifold_rewrite(Rule::CurveBlowup, q, locus, gates, &scenarios, oracle)
}

/// Blow-up along a surface `S` that is a product of positive-genus curves,
/// a K3 surface or a torus. Insertions must have degree at least 2, and
/// degree exactly 2 only when supported away from `S`.
pub fn transform_surface_blowup(
    q: &InvariantQuery,
    locus: &BlowupLocus,
    oracle: &Oracle,
) -> Result<RuleApplication> {
    let LocusKind::Surface { shape } = locus.kind else {
        return Err(RuleError::Unsupported(
            "surface blow-up needs a surface locus".into(),
        ));
    };
    locus.validate()?;
    let n = q.manifold.n();
    let mut gates = vec![Gate::new(
        "S = C1×C2 with positive genera, K3 or torus",
        matches!(
            shape,
            SurfaceShape::ProductPositiveGenus | SurfaceShape::K3 | SurfaceShape::Torus
        ),
    )];
    for (i, ins) in q.insertions.iter().enumerate() {
        let deg = ins.real_degree(n);
        let away = matches!(
            ins,
            Insertion::Generic {
                away_from_locus: true,
                ..
            }
        );
        let ok = deg > 2 || (deg == 2 && away);
        gates.push(Gate::new(
            format!(
                "insertion {} ({}): deg > 2, or deg = 2 away from S",
                i + 1,
                ins.describe(&q.manifold)
            ),
            ok,
        ));
    }
    let mut app = submanifold_rewrite(Rule::SurfaceBlowup, q, locus, gates, &[Scenario::Surface], oracle)?;
    app.note = Some("degree-2 insertions are accepted only when flagged as supported away from S".into());
    Ok(app)
}

fn submanifold_rewrite(
    rule: Rule,
    q: &InvariantQuery,
    locus: &BlowupLocus,
    gates: Vec<Gate>,
    scenarios: &[Scenario],
    oracle: &Oracle,
) -> Result<RuleApplication> {
    let mut app = RuleApplication::gated(rule, q.clone(), gates);
    if !app.gates_passed() {
        return Ok(app);
    }
    let m = &q.manifold;
    let target_m = blowup_of(m, locus)?;
    let Some((scalar, reduced)) = strip_divisors(q)? else {
        app.target = Some(Target::Zero);
        app.source_value = Some(ExactRational::zero());
        app.target_value = Some(ExactRational::zero());
        app.verdict = Verdict::Verified {
            value: ExactRational::zero(),
        };
        app.note = Some("fundamental class insertion".into());
        return Ok(app);
    };
    let class = p_shriek(m, &target_m, &reduced.class)?;
    let target = InvariantQuery::new(target_m, class, 0, pulled_back(&reduced.insertions));
    app.checks.push(bookkeeping(&reduced, &target, 0));
    if degree_matches(&reduced) {
        app.audit = Some(audit(&reduced, scenarios, None)?);
    }
    if scalar != ExactRational::one() {
        app.note = Some(format!("divisor insertions stripped with factor {scalar}"));
    }
    app.target = Some(Target::Query { query: target });
    settle(&mut app, oracle)?;
    if app.verdict == Verdict::SymbolicOnly || matches!(app.verdict, Verdict::Verified { .. }) {
        // values are for the stripped queries; restore the factor
        app.source_value = app.source_value.map(|v| v * scalar.clone());
        app.target_value = app.target_value.map(|v| v * scalar.clone());
        if let Verdict::Verified { value } = &app.verdict {
            app.verdict = Verdict::Verified {
                value: value.clone() * scalar,
            };
        }
    }
    Ok(app)
}

/// `Ψ_e(PD(E), PD(E))` on the blown-up plane against its value 1.
///
/// For `n > 2` the insertion's degree is not determined (the dimension
/// constraint forces `2n - 2`, the divisor reading gives 2), so the row is
/// reported without a value.
pub fn exceptional_two_point(n: u32, oracle: &Oracle) -> Result<RuleApplication> {
    let m = Manifold::blowup_point(n)?;
    let e = m.curve("e").expect("e");
    let q = InvariantQuery::new(m, e, 0, vec![Insertion::ExcDual, Insertion::ExcDual]);
    let mut app = RuleApplication::gated(
        Rule::ExceptionalTwoPoint,
        q.clone(),
        vec![Gate::new("n = 2", n == 2)],
    );
    if n != 2 {
        app.verdict = Verdict::SymbolicOnly;
        app.note = Some(format!(
            "exceptional insertion degree ambiguous for n = {n}: 2 as PD(E), {} from the dimension constraint",
            2 * n - 2
        ));
        return Ok(app);
    }
    let seed = ExactRational::one();
    app.target = Some(Target::Seed {
        label: "N(e)".into(),
        value: seed.clone(),
    });
    app.target_value = Some(seed.clone());
    app.source_value = oracle.evaluate(&q)?.value();
    app.verdict = match &app.source_value {
        Some(v) if *v == seed => Verdict::Verified { value: seed },
        Some(v) => Verdict::Mismatch {
            source: v.clone(),
            target: seed,
        },
        None => Verdict::SymbolicOnly,
    };
    Ok(app)
}

/// Parameters of a verification sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyParams {
    /// Plane-curve degrees `1..=max_degree`.
    pub max_degree: i64,
    /// Multiples `r` of `e`, inclusive.
    pub r_range: (i64, i64),
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            max_degree: 6,
            r_range: (1, 5),
        }
    }
}

/// One parameter value of a sweep, with the verdict kind it must reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub rule: Rule,
    pub params: String,
    pub expected: &'static str,
    kind: CaseKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum CaseKind {
    Vanishing(i64),
    PlaneDegree(i64),
    Curve {
        g0: u32,
        c1: i64,
    },
    Surface {
        shape: SurfaceShape,
        variant: SurfaceInsertions,
    },
    TwoPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SurfaceInsertions {
    HighDegree,
    DegreeTwoAway,
    DegreeTwoMeeting,
}

impl SurfaceInsertions {
    fn label(self) -> &'static str {
        match self {
            SurfaceInsertions::HighDegree => "deg>=4",
            SurfaceInsertions::DegreeTwoAway => "deg2-away",
            SurfaceInsertions::DegreeTwoMeeting => "deg2-meeting",
        }
    }
}

fn plane() -> Manifold {
    Manifold::proj_space(2).expect("P2")
}

/// `Ψ^{P²}_{dℓ}` with `3d - 1` point insertions.
pub fn plane_points(d: i64) -> InvariantQuery {
    InvariantQuery::points(plane(), CurveClass::new([d]), (3 * d - 1).max(0) as usize)
}

/// The vanishing query for `r·e` on the blown-up plane: `(p*H)` for
/// `r = 1`, `(PD(E), p*pt, …, p*pt)` with `r - 1` points for `r ≥ 2`.
pub fn vanishing_query(r: i64) -> InvariantQuery {
    let m = Manifold::blowup_point(2).expect("BlP2");
    let insertions = if r == 1 {
        vec![Insertion::pullback(Insertion::divisor(
            crate::lattice::DivisorClass::new([1]),
        ))]
    } else {
        let mut v = vec![Insertion::ExcDual];
        v.extend(std::iter::repeat_n(
            Insertion::pullback(Insertion::Point),
            (r - 1).max(0) as usize,
        ));
        v
    };
    InvariantQuery::new(m, CurveClass::new([0, r]), 0, insertions)
}

/// A threefold known through one curve class `A` with `C_1(A) = 2`, and the
/// query `Ψ_A(c1, a4, a4)`.
pub fn threefold_query() -> InvariantQuery {
    let m = Manifold::try_from(ManifoldKind::Opaque {
        n: 3,
        name: "M3".into(),
        curve_basis: vec!["A".into()],
        c1: vec![2],
    })
    .expect("opaque threefold");
    InvariantQuery::new(
        m,
        CurveClass::new([1]),
        0,
        vec![
            Insertion::divisor(crate::lattice::DivisorClass::new([1])),
            Insertion::generic("a4", 4),
            Insertion::generic("a4", 4),
        ],
    )
}

/// A fourfold known through one curve class `A` with `C_1(A) = 1`.
fn fourfold_query(variant: SurfaceInsertions) -> InvariantQuery {
    let m = Manifold::try_from(ManifoldKind::Opaque {
        n: 4,
        name: "M4".into(),
        curve_basis: vec!["A".into()],
        c1: vec![1],
    })
    .expect("opaque fourfold");
    let mut insertions = vec![Insertion::generic("a4", 4), Insertion::generic("a4", 4)];
    match variant {
        SurfaceInsertions::HighDegree => {}
        SurfaceInsertions::DegreeTwoAway => insertions.push(Insertion::Generic {
            label: "a2".into(),
            degree: 2,
            away_from_locus: true,
        }),
        SurfaceInsertions::DegreeTwoMeeting => insertions.push(Insertion::generic("a2", 2)),
    }
    InvariantQuery::new(m, CurveClass::new([1]), 0, insertions)
}

/// The parameter values a sweep runs over, in report order.
pub fn plan(rule: Rule, params: &VerifyParams) -> Vec<Case> {
    let case = |params: String, expected, kind| Case {
        rule,
        params,
        expected,
        kind,
    };
    match rule {
        Rule::ExceptionalVanishing => (params.r_range.0..=params.r_range.1)
            .map(|r| case(format!("r={r}"), "zero", CaseKind::Vanishing(r)))
            .collect(),
        Rule::PointBlowup | Rule::LowDimensionBlowup | Rule::PointConstraint => (1..=params.max_degree)
            .map(|d| case(format!("d={d}"), "verified", CaseKind::PlaneDegree(d)))
            .collect(),
        Rule::CurveBlowup => {
            let mut out = Vec::new();
            for g0 in 0..=2u32 {
                for c1 in [-1i64, 0, 2] {
                    let expected = if g0 >= 1 || c1 >= 0 {
                        "symbolic-only"
                    } else {
                        "gate-failed"
                    };
                    out.push(case(
                        format!("n=3,g0={g0},c1={c1}"),
                        expected,
                        CaseKind::Curve { g0, c1 },
                    ));
                }
            }
            out
        }
        Rule::SurfaceBlowup => {
            let shapes = [
                SurfaceShape::ProductPositiveGenus,
                SurfaceShape::K3,
                SurfaceShape::Torus,
                SurfaceShape::Other,
            ];
            let variants = [
                SurfaceInsertions::HighDegree,
                SurfaceInsertions::DegreeTwoAway,
                SurfaceInsertions::DegreeTwoMeeting,
            ];
            let mut out = Vec::new();
            for shape in shapes {
                for variant in variants {
                    let ok = shape != SurfaceShape::Other && variant != SurfaceInsertions::DegreeTwoMeeting;
                    let expected = if ok { "symbolic-only" } else { "gate-failed" };
                    let label = serde_json::to_value(shape)
                        .expect("shape")
                        .as_str()
                        .unwrap_or("")
                        .to_string();
                    out.push(case(
                        format!("n=4,shape={label},{}", variant.label()),
                        expected,
                        CaseKind::Surface { shape, variant },
                    ));
                }
            }
            out
        }
        Rule::ExceptionalTwoPoint => vec![case("n=2".into(), "verified", CaseKind::TwoPoint)],
    }
}

impl Case {
    pub fn run(&self, oracle: &Oracle) -> Result<RuleApplication> {
        match &self.kind {
            CaseKind::Vanishing(r) => check_exceptional_vanishing(&vanishing_query(*r), oracle),
            CaseKind::PlaneDegree(d) => match self.rule {
                Rule::PointBlowup => transform_point_blowup(&plane_points(*d), oracle),
                Rule::LowDimensionBlowup => transform_low_dimension(&plane_points(*d), oracle),
                _ => {
                    // 3d - 2 points plus the distinguished one
                    transform_point_constraint(&plane_points(*d), oracle)
                }
            },
            CaseKind::Curve { g0, c1 } => {
                transform_curve_blowup(&threefold_query(), &BlowupLocus::curve(3, *g0, *c1), oracle)
            }
            CaseKind::Surface { shape, variant } => transform_surface_blowup(
                &fourfold_query(*variant),
                &BlowupLocus::surface(4, *shape),
                oracle,
            ),
            CaseKind::TwoPoint => exceptional_two_point(2, oracle),
        }
    }

    pub fn report(&self, oracle: &Oracle) -> Result<ReportRow> {
        let app = self.run(oracle)?;
        Ok(ReportRow::new(self, &app))
    }
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub rule: String,
    pub params: String,
    pub gates: Vec<Gate>,
    pub source: String,
    pub target: Option<String>,
    pub source_value: Option<String>,
    pub target_value: Option<String>,
    pub verdict: String,
    pub expected: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<Gate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub audit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl ReportRow {
    pub fn new(case: &Case, app: &RuleApplication) -> Self {
        let audit_ok = app.audit.as_ref().is_none_or(IndexAudit::all_excluded);
        let verdict = app.verdict.kind();
        Self {
            rule: case.rule.token().to_string(),
            params: case.params.clone(),
            gates: app.gates.clone(),
            source: app.source.to_string(),
            target: app.target.as_ref().map(Target::describe),
            source_value: app.source_value.as_ref().map(ToString::to_string),
            target_value: app.target_value.as_ref().map(ToString::to_string),
            verdict: app.verdict.to_string(),
            expected: case.expected.to_string(),
            ok: verdict == case.expected
                && audit_ok
                && !matches!(app.verdict, Verdict::Zero { confirmed: false }),
            checks: app.checks.clone(),
            audit: app.audit.as_ref().map(|a| {
                let budgets: Vec<String> = a
                    .budgets
                    .iter()
                    .map(|(s, b)| {
                        format!(
                            "{}:{b}",
                            serde_json::to_value(s)
                                .ok()
                                .and_then(|v| v.as_str().map(String::from))
                                .unwrap_or_default()
                        )
                    })
                    .collect();
                format!(
                    "{} profiles, {} not excluded; plus index {}",
                    a.profiles,
                    a.survivors,
                    budgets.join(" ")
                )
            }),
            note: app.note.clone(),
        }
    }
}

/// Runs a sweep sequentially.
pub fn verify_rule(rule: Rule, params: &VerifyParams, oracle: &Oracle) -> Result<Vec<ReportRow>> {
    plan(rule, params).iter().map(|c| c.report(oracle)).collect()
}
