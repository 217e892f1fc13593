//! Dimension-counting obstructions to high curvature, and the candidate
//! catalog they are run against.
//!
//! Every verdict stores the inequalities it evaluated, instantiated with the
//! candidate's integers, so a table of verdicts can be re-checked by hand.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::actions::{
    hopf, realify, realify_vec, sp1_h_imh, sp1sp1_h3h, spm_u1, su2_sym3_dual, sym6_real_form, sym_monomials,
    sym_power_group, so3_sym6_real, u1_weights, u2_c4, CMatrix, SphereAction, H3xH,
};
use crate::numkern::{Sampler, Vector};
use crate::oneill::{a_tensor, frame_at, is_totally_real, orbit_dim, plane_curvature, OneillError, TotallyReal};
use crate::numkern::RANK_TOL;

#[derive(Debug, Error)]
pub enum EliminatorError {
    #[error("candidate {name}: {reason}")]
    InvalidCandidate { name: String, reason: String },
    #[error("reading catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing catalog: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
    Quaternionic,
}

/// Which family of dimension bounds applies. Primed quantities refer to the
/// factor G' in G = U(1) x G' or Sp(1) x G'.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BoundFamily {
    Real,
    Complex { g_prime: u32, k_prime: u32 },
    Quaternionic { g_prime: u32, k_prime: u32 },
    /// Sp(2) x G2 on H^2 (x) H^s.
    QuaternionicTensor { g2: u32, k2: u32, s: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodimKind {
    /// Codimension of an orbit of G2 on the projective space.
    Projective,
    /// Codimension of an orbit of the lifted U(1) x G2 or Sp(1) x G2 on F^s.
    Lifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codim {
    pub value: u32,
    pub kind: CodimKind,
    /// dim_F V2, used to instantiate the orbit-dimension count.
    #[serde(default)]
    pub s: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactKind {
    PolarEnlargement,
    Polar,
    FoldingMap,
    CurvatureOneWitness,
}

impl fmt::Display for FactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactKind::PolarEnlargement => "polar_enlargement",
            FactKind::Polar => "polar",
            FactKind::FoldingMap => "folding_map",
            FactKind::CurvatureOneWitness => "curvature_one_witness",
        })
    }
}

/// A cited result that is not recomputed here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub kind: FactKind,
    pub eliminates: bool,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremCase {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
}

impl TheoremCase {
    pub const ALL: [TheoremCase; 5] = [TheoremCase::I, TheoremCase::II, TheoremCase::III, TheoremCase::IV, TheoremCase::V];
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremCase::I => "i",
            TheoremCase::II => "ii",
            TheoremCase::III => "iii",
            TheoremCase::IV => "iv",
            TheoremCase::V => "v",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Survives(TheoremCase),
    EliminatedBy(Rule),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub name: String,
    /// Group dimension.
    pub g: u32,
    /// Group rank.
    pub k: u32,
    /// Sphere dimension; V = R^(n+1).
    pub n: u32,
    /// Orbit space dimension.
    pub m: u32,
    pub field: Field,
    #[serde(default)]
    pub irreducible: bool,
    #[serde(default)]
    pub polar: bool,
    #[serde(default)]
    pub min_orbit_dim: Option<u32>,
    /// Orbit dimensions met by a regular horizontal geodesic of length < pi.
    #[serde(default)]
    pub orbit_dims: Vec<u32>,
    #[serde(default)]
    pub bound: Option<BoundFamily>,
    #[serde(default)]
    pub codim: Option<Codim>,
    #[serde(default)]
    pub facts: Vec<Fact>,
    /// Name of the built-in action this candidate was measured from.
    #[serde(default)]
    pub action: Option<String>,
    #[serde(default)]
    pub expected: Option<Expected>,
}

impl Candidate {
    pub fn new(name: &str, g: u32, k: u32, n: u32, m: u32, field: Field) -> Self {
        Self {
            name: name.into(),
            g,
            k,
            n,
            m,
            field,
            irreducible: true,
            polar: false,
            min_orbit_dim: None,
            orbit_dims: Vec::new(),
            bound: None,
            codim: None,
            facts: Vec::new(),
            action: None,
            expected: None,
        }
    }

    fn fact(mut self, kind: FactKind, note: &str) -> Self {
        self.facts.push(Fact { kind, eliminates: true, note: note.into() });
        self
    }

    fn expect(mut self, e: Expected) -> Self {
        self.expected = Some(e);
        self
    }

    pub fn dim_v(&self) -> i64 {
        self.n as i64 + 1
    }

    pub fn principal_orbit_dim(&self) -> i64 {
        self.n as i64 - self.m as i64
    }

    pub fn validate(&self) -> Result<(), EliminatorError> {
        let fail = |reason: String| Err(EliminatorError::InvalidCandidate { name: self.name.clone(), reason });
        if self.m > self.n {
            return fail(format!("m = {} exceeds n = {}", self.m, self.n));
        }
        if self.principal_orbit_dim() > self.g as i64 {
            return fail(format!("principal orbit dimension {} exceeds g = {}", self.principal_orbit_dim(), self.g));
        }
        if self.k > self.g || (self.g > 0 && self.k == 0) {
            return fail(format!("rank {} is incompatible with g = {}", self.k, self.g));
        }
        let top = self.principal_orbit_dim();
        if let Some(l) = self.orbit_dims.iter().chain(&self.min_orbit_dim).find(|&&l| l as i64 > top) {
            return fail(format!("orbit dimension {l} exceeds the principal orbit dimension {top}"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    MinOrbit,
    MainLemma,
    ImprovedLemma,
    RealBound,
    ComplexBound,
    QuaternionicBound,
    QuaternionicTensorBound,
    QuaternionicCodim,
    ComplexCodim,
    Fact(FactKind),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::MinOrbit => f.write_str("min_orbit"),
            Rule::MainLemma => f.write_str("main_lemma"),
            Rule::ImprovedLemma => f.write_str("improved_lemma"),
            Rule::RealBound => f.write_str("real_bound"),
            Rule::ComplexBound => f.write_str("complex_bound"),
            Rule::QuaternionicBound => f.write_str("quaternionic_bound"),
            Rule::QuaternionicTensorBound => f.write_str("quaternionic_tensor_bound"),
            Rule::QuaternionicCodim => f.write_str("quaternionic_codim"),
            Rule::ComplexCodim => f.write_str("complex_codim"),
            Rule::Fact(k) => write!(f, "fact:{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rel {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Rel {
    pub fn eval(self, a: i64, b: i64) -> bool {
        match self {
            Rel::Lt => a < b,
            Rel::Le => a <= b,
            Rel::Gt => a > b,
            Rel::Ge => a >= b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

/// One instantiated inequality. It is always stored in the direction that
/// holds; `fires` says whether it is the elimination (or violation) branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub statement: String,
    pub lhs: i64,
    pub rel: Rel,
    pub rhs: i64,
    pub fires: bool,
}

impl Inequality {
    pub fn holds(&self) -> bool {
        self.rel.eval(self.lhs, self.rhs)
    }

    /// `a >= b` is required; fires when it fails.
    fn require_ge(statement: &str, a: i64, b: i64) -> Self {
        if a >= b {
            Self { statement: statement.into(), lhs: a, rel: Rel::Ge, rhs: b, fires: false }
        } else {
            Self { statement: statement.into(), lhs: a, rel: Rel::Lt, rhs: b, fires: true }
        }
    }

    /// `a <= b` is required; fires when it fails, shown as `b < a`.
    fn require_le(statement: &str, a: i64, b: i64) -> Self {
        if a <= b {
            Self { statement: statement.into(), lhs: a, rel: Rel::Le, rhs: b, fires: false }
        } else {
            Self { statement: statement.into(), lhs: b, rel: Rel::Lt, rhs: a, fires: true }
        }
    }

    /// Fires when `a >= b` (or `a > b` if `strict`).
    fn obstruct(statement: &str, a: i64, b: i64, strict: bool) -> Self {
        let (yes, no) = if strict { (Rel::Gt, Rel::Le) } else { (Rel::Ge, Rel::Lt) };
        let fires = yes.eval(a, b);
        Self { statement: statement.into(), lhs: a, rel: if fires { yes } else { no }, rhs: b, fires }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel.symbol(), self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Eliminated,
    Passes,
    NotApplicable,
    /// A consistency check failed: the candidate data contradict a lemma.
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub rule: Rule,
    pub outcome: Outcome,
    pub checks: Vec<Inequality>,
    pub note: String,
}

impl Verdict {
    fn from_checks(rule: Rule, checks: Vec<Inequality>, note: String) -> Self {
        let outcome = if checks.iter().any(|c| c.fires) { Outcome::Eliminated } else { Outcome::Passes };
        Self { rule, outcome, checks, note }
    }

    fn not_applicable(rule: Rule, note: String) -> Self {
        Self { rule, outcome: Outcome::NotApplicable, checks: Vec::new(), note }
    }

    pub fn eliminated(&self) -> bool {
        self.outcome == Outcome::Eliminated
    }

    /// Every stored inequality holds and the outcome matches the firing ones.
    pub fn consistent(&self) -> bool {
        let any = self.checks.iter().any(|c| c.fires);
        self.checks.iter().all(Inequality::holds)
            && match self.outcome {
                Outcome::Eliminated => any || matches!(self.rule, Rule::Fact(_)),
                Outcome::Violated => any,
                Outcome::Passes => !any,
                Outcome::NotApplicable => self.checks.is_empty(),
            }
    }

    /// The firing inequalities, e.g. `55 < 56`.
    pub fn arithmetic(&self) -> String {
        let list: Vec<&Inequality> = self.checks.iter().filter(|c| c.fires).collect();
        let list = if list.is_empty() { self.checks.iter().collect() } else { list };
        list.iter().map(|c| format!("{c} [{}]", c.statement)).collect::<Vec<_>>().join("; ")
    }
}

pub fn check_minorbit(c: &Candidate) -> Verdict {
    let bound = c.g as i64 - c.k as i64 + 1;
    match c.min_orbit_dim {
        None => Verdict::not_applicable(Rule::MinOrbit, format!("smallest orbit dimension is at most g - k + 1 = {bound}")),
        Some(l) => {
            let ineq = Inequality::require_le("l_min <= g - k + 1", l as i64, bound);
            let outcome = if ineq.fires { Outcome::Violated } else { Outcome::Passes };
            Verdict { rule: Rule::MinOrbit, outcome, checks: vec![ineq], note: String::new() }
        }
    }
}

pub fn check_mainlem(c: &Candidate) -> Verdict {
    let (g, k, n, m) = (c.g as i64, c.k as i64, c.n as i64, c.m as i64);
    let mut checks = vec![Inequality::require_ge("2g + 2 - k >= n", 2 * g + 2 - k, n)];
    if let Some(l) = c.min_orbit_dim {
        checks.push(Inequality::require_ge("l >= m - 1", l as i64, m - 1));
    }
    Verdict::from_checks(Rule::MainLemma, checks, String::new())
}

pub fn check_improvedlem(c: &Candidate) -> Verdict {
    let s = c.orbit_dims.len();
    if s == 0 {
        return Verdict::not_applicable(Rule::ImprovedLemma, "no geodesic witness".into());
    }
    let (g, m, n) = (c.g as i64, c.m as i64, c.n as i64);
    if c.principal_orbit_dim() != g {
        return Verdict::not_applicable(Rule::ImprovedLemma, "principal isotropy is not finite".into());
    }
    let deficit: i64 = c.orbit_dims.iter().map(|&l| g - l as i64).sum();
    let mut checks = vec![Inequality::require_ge("g >= (m - 1) + sum(g - l_i)", g, m - 1 + deficit)];
    if s >= 2 {
        let pair = (c.orbit_dims[0] + c.orbit_dims[1]) as i64;
        checks.push(Inequality::require_ge("l_1 + l_2 >= n - 1", pair, n - 1));
    }
    let dims = c.orbit_dims.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ");
    Verdict::from_checks(Rule::ImprovedLemma, checks, format!("l = ({dims})"))
}

pub fn check_bounds(c: &Candidate) -> Verdict {
    let dim_v = c.dim_v();
    let (g, k) = (c.g as i64, c.k as i64);
    match c.bound {
        None => Verdict::not_applicable(Rule::RealBound, "no bound family".into()),
        Some(BoundFamily::Real) => Verdict::from_checks(
            Rule::RealBound,
            vec![
                Inequality::require_le("dim V <= 2g + 3 - k", dim_v, 2 * g + 3 - k),
                Inequality::require_le("dim V <= 2g + 2", dim_v, 2 * g + 2),
            ],
            String::new(),
        ),
        Some(BoundFamily::Complex { g_prime, k_prime }) => {
            let (gp, kp) = (g_prime as i64, k_prime as i64);
            let mut checks = vec![
                Inequality::require_le("g' + 7 <= dim V", gp + 7, dim_v),
                Inequality::require_le("dim V <= 2g' + 4 - k'", dim_v, 2 * gp + 4 - kp),
            ];
            // The window itself may be empty whatever dim V is.
            checks.push(Inequality::require_le("g' + 7 <= 2g' + 4 - k'", gp + 7, 2 * gp + 4 - kp));
            Verdict::from_checks(Rule::ComplexBound, checks, String::new())
        }
        Some(BoundFamily::Quaternionic { g_prime, k_prime }) => Verdict::from_checks(
            Rule::QuaternionicBound,
            vec![Inequality::require_le("dim V <= 2g' + 8 - k'", dim_v, 2 * g_prime as i64 + 8 - k_prime as i64)],
            String::new(),
        ),
        Some(BoundFamily::QuaternionicTensor { g2, k2, s }) => Verdict::from_checks(
            Rule::QuaternionicTensorBound,
            vec![Inequality::require_le("8s <= 2g2 + 21 - k2", 8 * s as i64, 2 * g2 as i64 + 21 - k2 as i64)],
            String::new(),
        ),
    }
}

pub fn check_codim(c: &Candidate) -> Verdict {
    let Some(codim) = c.codim else {
        return Verdict::not_applicable(Rule::QuaternionicCodim, "no codimension data".into());
    };
    let v = codim.value as i64;
    let n = c.n as i64;
    let (rule, ineq, count) = match (c.field, codim.kind) {
        (Field::Quaternionic, CodimKind::Lifted) => {
            (Rule::QuaternionicCodim, Inequality::obstruct("lifted codim >= 9", v, 9, false), quaternionic_count as fn(i64) -> (i64, i64))
        }
        (Field::Quaternionic, CodimKind::Projective) => {
            (Rule::QuaternionicCodim, Inequality::obstruct("projective codim >= 8", v, 8, false), quaternionic_count as fn(i64) -> (i64, i64))
        }
        (Field::Complex, CodimKind::Lifted) => {
            (Rule::ComplexCodim, Inequality::obstruct("lifted codim > 4", v, 4, true), complex_count as fn(i64) -> (i64, i64))
        }
        (Field::Complex, CodimKind::Projective) => {
            (Rule::ComplexCodim, Inequality::obstruct("projective codim >= 4", v, 4, false), complex_count as fn(i64) -> (i64, i64))
        }
        (Field::Real, _) => return Verdict::not_applicable(Rule::ComplexCodim, "codimension tests need F = C or H".into()),
    };
    let mut checks = vec![ineq];
    if checks[0].fires {
        if let Some(s) = codim.s {
            let (a, b) = count(s as i64);
            let holds = a + b < n - 1;
            checks.push(Inequality {
                statement: "sum of the two orbit dimensions < n - 1".into(),
                lhs: a + b,
                rel: if holds { Rel::Lt } else { Rel::Ge },
                rhs: n - 1,
                fires: holds,
            });
        }
    }
    Verdict::from_checks(rule, checks, String::new())
}

/// Orbit dimension bounds (4s + 2, 4s - 5) met by the pure-tensor geodesic.
fn quaternionic_count(s: i64) -> (i64, i64) {
    (4 * s + 2, 4 * s - 5)
}

/// The complex analogue (2s, 2s - 3).
fn complex_count(s: i64) -> (i64, i64) {
    (2 * s, 2 * s - 3)
}

pub fn check_facts(c: &Candidate) -> Vec<Verdict> {
    c.facts
        .iter()
        .map(|f| Verdict {
            rule: Rule::Fact(f.kind),
            outcome: if f.eliminates { Outcome::Eliminated } else { Outcome::Passes },
            checks: Vec::new(),
            note: f.note.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateReport {
    pub name: String,
    pub verdicts: Vec<Verdict>,
    pub eliminated: bool,
    pub eliminated_by: Vec<Rule>,
    pub expected: Option<Expected>,
    pub matches_expected: Option<bool>,
}

impl CandidateReport {
    pub fn survives_as(&self) -> Option<TheoremCase> {
        match (&self.expected, self.eliminated) {
            (Some(Expected::Survives(case)), false) => Some(*case),
            _ => None,
        }
    }
}

pub fn evaluate(c: &Candidate) -> Result<CandidateReport, EliminatorError> {
    c.validate()?;
    let mut verdicts = vec![check_minorbit(c), check_mainlem(c), check_improvedlem(c), check_bounds(c), check_codim(c)];
    verdicts.extend(check_facts(c));
    let eliminated_by: Vec<Rule> = verdicts.iter().filter(|v| v.eliminated()).map(|v| v.rule.clone()).collect();
    let eliminated = !eliminated_by.is_empty();
    let matches_expected = c.expected.as_ref().map(|e| match e {
        Expected::Survives(_) => !eliminated,
        Expected::EliminatedBy(rule) => eliminated_by.contains(rule),
    });
    Ok(CandidateReport {
        name: c.name.clone(),
        verdicts,
        eliminated,
        eliminated_by,
        expected: c.expected.clone(),
        matches_expected,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionReport {
    pub reports: Vec<CandidateReport>,
    pub survivors: Vec<(String, Option<TheoremCase>)>,
    pub mismatches: Vec<String>,
    pub inconsistent_verdicts: Vec<String>,
    /// Survivors cover exactly cases (i) to (v).
    pub survivors_match_theorem: bool,
}

impl RegressionReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.inconsistent_verdicts.is_empty() && self.survivors_match_theorem
    }
}

pub fn run_catalog(catalog: &[Candidate]) -> Result<RegressionReport, EliminatorError> {
    let reports = catalog.iter().map(evaluate).collect::<Result<Vec<_>, _>>()?;
    let mut mismatches = Vec::new();
    let mut inconsistent = Vec::new();
    let mut survivors = Vec::new();
    let mut cases = BTreeSet::new();
    for r in &reports {
        if r.matches_expected == Some(false) {
            mismatches.push(format!("{}: expected {:?}, eliminated by {:?}", r.name, r.expected, r.eliminated_by));
        }
        for v in r.verdicts.iter().filter(|v| !v.consistent()) {
            inconsistent.push(format!("{}: {}", r.name, v.rule));
        }
        if !r.eliminated {
            let case = r.survives_as();
            if let Some(c) = case {
                cases.insert(c);
            }
            survivors.push((r.name.clone(), case));
        }
    }
    let survivors_match_theorem =
        survivors.iter().all(|(_, c)| c.is_some()) && cases == TheoremCase::ALL.into_iter().collect();
    Ok(RegressionReport { reports, survivors, mismatches, inconsistent_verdicts: inconsistent, survivors_match_theorem })
}

pub fn load_catalog(path: &Path) -> Result<Vec<Candidate>, EliminatorError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Representatives for every branch of the classification, with the outcome
/// the dimension arguments are expected to reach.
pub fn builtin_catalog() -> Vec<Candidate> {
    use Expected::*;
    use Field::*;
    let mut out = Vec::new();

    let mut c = Candidate::new("U(2) on C^4", 4, 2, 7, 3, Complex);
    c.min_orbit_dim = Some(3);
    c.action = Some("u2_c4".into());
    out.push(c.expect(Survives(TheoremCase::I)));

    let mut c = Candidate::new("U(1) on C + C, weights (1,1)", 1, 1, 3, 2, Complex);
    c.irreducible = false;
    c.min_orbit_dim = Some(1);
    c.action = Some("hopf".into());
    out.push(c.expect(Survives(TheoremCase::II)));

    let mut c = Candidate::new("U(1) on C + C, weights (2,1)", 1, 1, 3, 2, Complex);
    c.irreducible = false;
    c.min_orbit_dim = Some(1);
    c.action = Some("u1_weights(2,1)".into());
    out.push(c.expect(Survives(TheoremCase::III)));

    let mut c = Candidate::new("SU(2) on C^2 + R^3", 3, 1, 6, 3, Real);
    c.irreducible = false;
    c.min_orbit_dim = Some(2);
    c.action = Some("sp1_h_imh".into());
    out.push(c.expect(Survives(TheoremCase::IV)));

    let mut c = Candidate::new("Sp(1) x U(1) on C^2 + C^2, weights (1,0)", 4, 2, 7, 3, Complex);
    c.irreducible = false;
    c.min_orbit_dim = Some(3);
    c.action = Some("spm_u1(1,1,0)".into());
    out.push(c.expect(Survives(TheoremCase::V)));

    let mut c = Candidate::new("SO(3) on R^7", 3, 1, 6, 3, Real);
    c.min_orbit_dim = Some(2);
    c.orbit_dims = vec![2, 2];
    c.action = Some("so3_sym6_real".into());
    out.push(c.expect(EliminatedBy(Rule::ImprovedLemma)));

    let mut c = Candidate::new("SU(2) on H^2", 3, 1, 7, 4, Quaternionic);
    c.min_orbit_dim = Some(3);
    c.action = Some("su2_sym3_dual".into());
    out.push(
        c.fact(FactKind::CurvatureOneWitness, "K(i ^ j) = 1 at t0 along the cohomogeneity-one geodesic")
            .expect(EliminatedBy(Rule::Fact(FactKind::CurvatureOneWitness))),
    );

    let mut c = Candidate::new("Sp(1) x Sp(1) on H^3 (x) H", 6, 2, 11, 5, Quaternionic);
    c.bound = Some(BoundFamily::Quaternionic { g_prime: 3, k_prime: 1 });
    c.action = Some("sp1sp1_h3h".into());
    out.push(
        c.fact(FactKind::CurvatureOneWitness, "double quotient through the left and right Sp(1) submersions")
            .expect(EliminatedBy(Rule::Fact(FactKind::CurvatureOneWitness))),
    );

    let mut c = Candidate::new("SO(8) on Lambda^3 R^8", 28, 4, 55, 27, Real);
    c.bound = Some(BoundFamily::Real);
    out.push(c.expect(EliminatedBy(Rule::RealBound)));

    let mut c = Candidate::new("Spin(15) on R^128", 105, 7, 127, 22, Real);
    c.bound = Some(BoundFamily::Real);
    out.push(c.fact(FactKind::PolarEnlargement, "enlarges to Spin(16) on R^128").expect(EliminatedBy(Rule::Fact(FactKind::PolarEnlargement))));

    let mut c = Candidate::new("G2 on S^2_0 R^7", 14, 2, 26, 12, Real);
    c.bound = Some(BoundFamily::Real);
    out.push(c.fact(FactKind::PolarEnlargement, "enlarges to SO(7) on S^2_0 R^7").expect(EliminatedBy(Rule::Fact(FactKind::PolarEnlargement))));

    let mut c = Candidate::new("SO(7) on Lambda^3 R^7", 21, 3, 34, 13, Real);
    c.bound = Some(BoundFamily::Real);
    out.push(
        c.fact(FactKind::FoldingMap, "maximal torus isotropy with 3-dimensional fixed set")
            .expect(EliminatedBy(Rule::Fact(FactKind::FoldingMap))),
    );

    let mut c = Candidate::new("U(1) x SU(2), complex type", 4, 2, 9, 5, Complex);
    c.bound = Some(BoundFamily::Complex { g_prime: 3, k_prime: 1 });
    out.push(c.expect(EliminatedBy(Rule::ComplexBound)));

    let mut c = Candidate::new("U(7) on Lambda^3 C^7", 49, 7, 69, 20, Complex);
    c.bound = Some(BoundFamily::Complex { g_prime: 48, k_prime: 6 });
    out.push(c.fact(FactKind::PolarEnlargement, "real form of SU(8) on Lambda^4 C^8").expect(EliminatedBy(Rule::Fact(FactKind::PolarEnlargement))));

    let mut c = Candidate::new("Sp(1) x Spin(11) on H (x) H^16", 58, 6, 63, 5, Quaternionic);
    c.bound = Some(BoundFamily::Quaternionic { g_prime: 55, k_prime: 5 });
    out.push(c.fact(FactKind::PolarEnlargement, "enlarges to Sp(1) x Spin(12)").expect(EliminatedBy(Rule::Fact(FactKind::PolarEnlargement))));

    let mut c = Candidate::new("Sp(1) x Spin(13) on H (x) H^32", 81, 7, 127, 46, Quaternionic);
    c.bound = Some(BoundFamily::Quaternionic { g_prime: 78, k_prime: 6 });
    out.push(c.fact(FactKind::PolarEnlargement, "enlarges to Spin(16) on R^128").expect(EliminatedBy(Rule::Fact(FactKind::PolarEnlargement))));

    let mut c = Candidate::new("Sp(2) x Sp(1) on H^2 (x) H^3", 13, 3, 23, 10, Quaternionic);
    c.bound = Some(BoundFamily::QuaternionicTensor { g2: 3, k2: 1, s: 3 });
    c.orbit_dims = vec![10, 10];
    out.push(c.expect(EliminatedBy(Rule::ImprovedLemma)));

    let mut c = Candidate::new("Sp(2) x Spin(11) on H^2 (x) H^16", 65, 7, 127, 62, Quaternionic);
    c.bound = Some(BoundFamily::QuaternionicTensor { g2: 55, k2: 5, s: 16 });
    out.push(c.expect(EliminatedBy(Rule::QuaternionicTensorBound)));

    let mut c = Candidate::new("Sp(2) x Sp(3) on H^2 (x) Lambda^3_0 C^6", 31, 5, 55, 24, Quaternionic);
    c.bound = Some(BoundFamily::QuaternionicTensor { g2: 21, k2: 3, s: 7 });
    c.codim = Some(Codim { value: 13, kind: CodimKind::Lifted, s: Some(7) });
    out.push(c.expect(EliminatedBy(Rule::QuaternionicCodim)));

    let mut c = Candidate::new("Sp(2) x SU(6) on H^2 (x) Lambda^3 C^6", 45, 7, 79, 34, Quaternionic);
    c.bound = Some(BoundFamily::QuaternionicTensor { g2: 35, k2: 5, s: 10 });
    c.codim = Some(Codim { value: 13, kind: CodimKind::Lifted, s: Some(10) });
    out.push(c.expect(EliminatedBy(Rule::QuaternionicCodim)));

    let mut c = Candidate::new("U(2) x SU(2) x SU(3) on C^2 (x) C^6", 15, 5, 23, 8, Complex);
    c.codim = Some(Codim { value: 5, kind: CodimKind::Lifted, s: Some(6) });
    out.push(c.expect(EliminatedBy(Rule::ComplexCodim)));

    let mut c = Candidate::new("U(2) x SU(5) on C^2 (x) Lambda^2 C^5", 28, 6, 39, 11, Complex);
    c.codim = Some(Codim { value: 7, kind: CodimKind::Lifted, s: Some(10) });
    out.push(c.expect(EliminatedBy(Rule::ComplexCodim)));

    let mut c = Candidate::new("U(2) x Spin(10) on C^2 (x) C^16", 49, 7, 63, 14, Complex);
    c.codim = Some(Codim { value: 11, kind: CodimKind::Lifted, s: Some(16) });
    out.push(c.expect(EliminatedBy(Rule::ComplexCodim)));

    let mut c = Candidate::new("U(2) x SU(3) on C^2 (x) S^2 C^3", 12, 4, 23, 11, Complex);
    c.codim = Some(Codim { value: 7, kind: CodimKind::Lifted, s: Some(6) });
    out.push(c.expect(EliminatedBy(Rule::ComplexCodim)));

    let mut c = Candidate::new("SO(2) x SO(3) on R^2 (x) R^5", 4, 2, 9, 5, Real);
    c.orbit_dims = vec![3, 4];
    out.push(c.expect(EliminatedBy(Rule::ImprovedLemma)));

    let c = Candidate::new("SO(3) x U(2) on R^3 (x) R^4", 7, 3, 11, 4, Real);
    out.push(c.fact(FactKind::PolarEnlargement, "restriction of SO(3) x SO(4)").expect(EliminatedBy(Rule::Fact(FactKind::PolarEnlargement))));

    out
}

/// Curvature data attached to each case of the classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kappa {
    /// Strictly greater than 1, no closed value.
    GreaterThanOne,
    Constant { value: f64 },
    /// 1 + 3 b^2 / a^2 for weights a >= b.
    WeightedLine,
    Exact { value: f64 },
    /// Quoted from a classification table, not recomputed.
    Quoted { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRecord {
    pub case: TheoremCase,
    pub description: &'static str,
    pub kappa: Kappa,
    /// CLI subcommand that certifies the value.
    pub certificate: &'static str,
}

impl CaseRecord {
    /// kappa for a weighted projective line with weights a >= b.
    pub fn kappa_for_weights(a: u32, b: u32) -> f64 {
        let (a, b) = (a.max(b) as f64, a.min(b) as f64);
        1.0 + 3.0 * b * b / (a * a)
    }
}

pub fn theorem_catalog() -> Vec<CaseRecord> {
    vec![
        CaseRecord {
            case: TheoremCase::I,
            description: "U(2) on C^4, n = 7",
            kappa: Kappa::GreaterThanOne,
            certificate: "thorpe-audit",
        },
        CaseRecord {
            case: TheoremCase::II,
            description: "good orbifold of constant curvature 4",
            kappa: Kappa::Constant { value: 4.0 },
            certificate: "kappa-scan --action hopf",
        },
        CaseRecord {
            case: TheoremCase::III,
            description: "complex weighted projective line, weights (a,b)",
            kappa: Kappa::WeightedLine,
            certificate: "wcp1",
        },
        CaseRecord {
            case: TheoremCase::IV,
            description: "SU(2) on C^2 + R^3, n = 6",
            kappa: Kappa::Exact { value: 1.75 },
            certificate: "c2r3",
        },
        CaseRecord {
            case: TheoremCase::V,
            description: "Sp(m) x U(1) on C^2m + C^2m, weights r != s",
            kappa: Kappa::Quoted { value: 4.0 },
            certificate: "kappa-scan --action spm-u1",
        },
    ]
}

fn normalize(q: &str) -> String {
    q.to_lowercase()
        .replace('⊕', "+")
        .replace('⁴', "4")
        .replace('²', "2")
        .replace('³', "3")
        .chars()
        .filter(|ch| !ch.is_whitespace() && !"(),".contains(*ch))
        .collect()
}

/// Looks up a case by a loose description such as "U(2) on C^4",
/// "SU(2), C^2+R^3" or "weights (a,b)".
pub fn query_case(q: &str) -> Option<CaseRecord> {
    let s = normalize(q);
    let case = if s.contains("weight") && !s.contains("sp") {
        TheoremCase::III
    } else if s.contains("c2+r3") || s.contains("c^2+r^3") {
        TheoremCase::IV
    } else if s.contains("u2onc4") || s.contains("u2onc^4") {
        TheoremCase::I
    } else if s.contains("spm") || s.contains("sp1xu1") || s.contains("spm×u1") || s.contains("spmxu1") {
        TheoremCase::V
    } else if s.contains("constantcurvature4") || s.contains("hopf") {
        TheoremCase::II
    } else {
        return None;
    };
    theorem_catalog().into_iter().find(|r| r.case == case)
}

/// Orbit dimensions measured on a built-in action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitData {
    pub action: String,
    pub n: u32,
    pub principal_dim: u32,
    pub m: u32,
    pub min_dim: u32,
    pub dims_seen: BTreeSet<u32>,
}

pub fn measure_orbit_data(action: &SphereAction, special: &[Vector], samples: usize, seed: u64) -> OrbitData {
    let sampler = Sampler::new(seed);
    let dim = action.ambient_dim;
    let random: Vec<u32> = (0..samples).map(|i| orbit_dim(action, &sampler.unit_vector(dim, i as u64)) as u32).collect();
    let principal = random.iter().copied().max().unwrap_or(0);
    let mut dims_seen: BTreeSet<u32> = random.into_iter().collect();
    dims_seen.extend(special.iter().map(|p| orbit_dim(action, &p.normalize()) as u32));
    let n = dim as u32 - 1;
    OrbitData {
        action: action.name.clone(),
        n,
        principal_dim: principal,
        m: n - principal,
        min_dim: *dims_seen.iter().next().unwrap_or(&0),
        dims_seen,
    }
}

fn basis_vector(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = 1.0;
    v
}

/// Built-in actions used by the catalog, with points on their smallest orbits.
pub fn catalog_action(name: &str) -> Option<(SphereAction, Vec<Vector>)> {
    let out = match name {
        "u2_c4" => (u2_c4(), vec![basis_vector(8, 0), basis_vector(8, 2)]),
        "hopf" => (hopf(), vec![basis_vector(4, 0)]),
        "u1_weights(2,1)" => (u1_weights(&[2, 1], 1).ok()?, vec![basis_vector(4, 0), basis_vector(4, 2)]),
        "sp1_h_imh" => (sp1_h_imh(), vec![basis_vector(7, 0), basis_vector(7, 4)]),
        "spm_u1(1,1,0)" => (spm_u1(1, 1, 0).ok()?, vec![basis_vector(8, 0), basis_vector(8, 4)]),
        "so3_sym6_real" => (so3_sym6_real(), vec![Vector::from_vec(so3_geodesic_witness().p)]),
        "su2_sym3_dual" => (su2_sym3_dual(), vec![basis_vector(8, 0), basis_vector(8, 2)]),
        "sp1sp1_h3h" => (sp1sp1_h3h().action, vec![basis_vector(12, 0)]),
        _ => return None,
    };
    Some(out)
}

/// The geodesic from p = i e1^3 e2^3 to q = g p in the real form of Sym^6.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicWitness {
    pub alpha_sq: f64,
    /// Coordinates in the real form R^7.
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Largest |<q, Z p>| / |Z p| over the generators.
    pub tangent_residual: f64,
    /// Distance of g p from the real form before projecting.
    pub real_form_residual: f64,
    pub cos_pq: f64,
    pub length: f64,
    pub orbit_dims: [u32; 2],
    pub midpoint_orbit_dim: u32,
}

pub fn so3_geodesic_witness() -> GeodesicWitness {
    let alpha_sq = 0.5 * (1.0 + 1.0 / 5f64.sqrt());
    let (a, b) = (alpha_sq.sqrt(), (1.0 - alpha_sq).sqrt());
    let g = CMatrix::from_row_slice(2, 2, &[Complex64::new(a, 0.0), Complex64::new(-b, 0.0), Complex64::new(b, 0.0), Complex64::new(a, 0.0)]);
    let basis = sym6_real_form();
    let p14 = realify_vec(&sym_monomials(6, &[(3, Complex64::new(0.0, 1.0))]));
    let q14 = realify(&sym_power_group(&g, 6)) * &p14;
    let p = (basis.transpose() * &p14).normalize();
    let q_coords = basis.transpose() * &q14;
    let real_form_residual = (&basis * &q_coords - &q14).norm();
    let q = q_coords.normalize();
    let action = so3_sym6_real();
    let tangent_residual = action
        .generators
        .iter()
        .map(|z| {
            let zp = z * &p;
            let n = zp.norm();
            if n > 0.0 { q.dot(&zp).abs() / n } else { 0.0 }
        })
        .fold(0.0, f64::max);
    let cos_pq = p.dot(&q);
    let mid = (&p + &q).normalize();
    GeodesicWitness {
        alpha_sq,
        tangent_residual,
        real_form_residual,
        cos_pq,
        length: cos_pq.acos(),
        orbit_dims: [orbit_dim(&action, &p) as u32, orbit_dim(&action, &q) as u32],
        midpoint_orbit_dim: orbit_dim(&action, &mid) as u32,
        p: p.as_slice().to_vec(),
        q: q.as_slice().to_vec(),
    }
}

/// Curvature of a fixed plane, projected to the horizontal space of the
/// full Sp(1) x Sp(1) action at points approaching e1^5.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachSample {
    pub distance: f64,
    pub vertical_dim: u32,
    pub curvature: f64,
}

/// A plane of monomials at p = e1^5 in Sym^5(C^2) = H^3 (x) H.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneWitness {
    /// Powers of e2 in the two spanning monomials.
    pub monomials: [usize; 2],
    /// |A_u v| for the left Sp(1) (Sym^5) submersion.
    pub a_left: f64,
    /// |A_u v| for the right Sp(1) (scalar quaternion) submersion.
    pub a_right: f64,
    pub totally_real: TotallyReal,
    /// Regular points p + eps J u with the projected plane.
    pub approach: Vec<ApproachSample>,
}

impl PlaneWitness {
    /// Curvatures decrease along the sequence.
    pub fn monotone(&self) -> bool {
        self.approach.windows(2).all(|w| w[1].curvature <= w[0].curvature)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoubleQuotientWitness {
    pub left_orbit_dim: u32,
    /// w1 = e1^2 e2^3, w2 = e1 e2^4.
    pub stated: PlaneWitness,
    /// e1^3 e2^2 = -J w1 in place of w1. Its torus weight differs from that
    /// of w2 by 4, so no Sp(1) generator pairs them.
    pub corrected: PlaneWitness,
}

/// Distances from e1^5 used for the approach sequence.
pub const APPROACH_STEPS: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];

fn monomial(k: usize) -> Vector {
    realify_vec(&sym_monomials(5, &[(k, Complex64::new(1.0, 0.0))])).normalize()
}

fn plane_witness(h: &H3xH, p: &Vector, ku: usize, kv: usize) -> Result<PlaneWitness, OneillError> {
    let (u, v) = (monomial(ku), monomial(kv));
    let a_norm = |action: &SphereAction| -> Result<f64, OneillError> {
        let frame = frame_at(action, p, RANK_TOL)?;
        Ok(a_tensor(action, &frame, &frame.horizontal_part(&u), &frame.horizontal_part(&v))?.norm())
    };
    let dir = h.quaternionic.apply(&u);
    let approach = APPROACH_STEPS
        .iter()
        .map(|&eps| {
            let q = (p + &dir * eps).normalize();
            let frame = frame_at(&h.action, &q, RANK_TOL)?;
            let (hu, hv) = (frame.horizontal_part(&u).normalize(), frame.horizontal_part(&v).normalize());
            let k = plane_curvature(&h.action, &frame, &hu, &hv)?;
            Ok(ApproachSample { distance: (&q - p).norm(), vertical_dim: frame.vertical_dim as u32, curvature: k.value })
        })
        .collect::<Result<_, OneillError>>()?;
    Ok(PlaneWitness {
        monomials: [ku, kv],
        a_left: a_norm(&h.left())?,
        a_right: a_norm(&h.right())?,
        totally_real: is_totally_real(&u, &v, &h.quaternionic),
        approach,
    })
}

pub fn double_quotient_witness() -> Result<DoubleQuotientWitness, OneillError> {
    let h = sp1sp1_h3h();
    let p = monomial(0);
    Ok(DoubleQuotientWitness {
        left_orbit_dim: orbit_dim(&h.left(), &p) as u32,
        stated: plane_witness(&h, &p, 3, 4)?,
        corrected: plane_witness(&h, &p, 2, 4)?,
    })
}
