//! Case analysis for rational surfaces of degree at most four in `P^3`.
//!
//! [`classify_case`] picks a construction from verified evidence and
//! [`run_pipeline`] runs it, producing a [`CaseReport`] whose steps are the
//! emitted maps with their certificates.

mod common;
mod cyclide;
mod double_conic;
mod double_line;
mod elliptic;
mod monoid;
mod twisted_cubic;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
use crate::gcd::multivariate_gcd;
use crate::linsys::{ideal_membership_certificate, CurveLabel, CurveParam};
use crate::maps::{InjectivityCertificate, RationalMap};
use crate::poly::{FpPoly, QPoly};
use crate::threshold::CorollaryCertificate;

pub use common::{
    cone_vertex, exact_image_forms, find_rational_points, plane_pulls_back_into_surface, point_multiplicity, push_chain,
    CoordinateChange,
};
pub use cyclide::{cyclide_decomposition, linearize_cyclide, residual_curve_parametrization, CyclideData};
pub use double_conic::linearize_double_conic;
pub use double_line::{linearize_double_line, linearize_double_line_fp};
pub use elliptic::{build_lambda_a, linearize_elliptic, match_elliptic_normal_form, LambdaA, TYPE1_WEIGHTS, TYPE2_WEIGHTS};
pub use monoid::{linearize_low_degree, linearize_monoid, monoid_map};
pub use twisted_cubic::{find_secants_on_s, linearize_twisted_cubic, SecantSearch};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    Monoid,
    DoubleLine,
    DoubleConic,
    TwistedCubic,
    EllipticType1,
    EllipticType2,
    CyclideExtraNode,
    CyclideSmooth,
    Cone,
    LowDegree,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 10] = [
        CaseLabel::Monoid,
        CaseLabel::DoubleLine,
        CaseLabel::DoubleConic,
        CaseLabel::TwistedCubic,
        CaseLabel::EllipticType1,
        CaseLabel::EllipticType2,
        CaseLabel::CyclideExtraNode,
        CaseLabel::CyclideSmooth,
        CaseLabel::Cone,
        CaseLabel::LowDegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::Monoid => "Monoid",
            CaseLabel::DoubleLine => "DoubleLine",
            CaseLabel::DoubleConic => "DoubleConic",
            CaseLabel::TwistedCubic => "TwistedCubic",
            CaseLabel::EllipticType1 => "EllipticType1",
            CaseLabel::EllipticType2 => "EllipticType2",
            CaseLabel::CyclideExtraNode => "CyclideExtraNode",
            CaseLabel::CyclideSmooth => "CyclideSmooth",
            CaseLabel::Cone => "Cone",
            CaseLabel::LowDegree => "LowDegree",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Certificate,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub prime: u64,
    pub seed: u64,
    pub samples: usize,
    pub mode: Mode,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            prime: DEFAULT_PRIME,
            seed: 1,
            samples: 200,
            mode: Mode::Exact,
        }
    }
}

/// A curve in the singular locus, given by a parametrization, by
/// generators of its ideal, or both.
#[derive(Clone, Debug)]
pub struct SingularCurve {
    pub label: CurveLabel,
    pub param: Option<CurveParam<Rationals>>,
    pub equations: Vec<QPoly>,
}

impl SingularCurve {
    pub fn degree(&self) -> Option<u32> {
        if let Some(p) = &self.param {
            return Some(p.degree());
        }
        self.label.expected_degree()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Hints {
    pub singular_curves: Vec<SingularCurve>,
    pub singular_points: Vec<Vec<BigRational>>,
    pub secants: Vec<CurveParam<Rationals>>,
    pub gamma: Option<CurveParam<Rationals>>,
    pub general_points: Vec<Vec<BigRational>>,
    pub case_override: Option<CaseLabel>,
    pub auxiliary_quadric: Option<QPoly>,
    pub valuation_weights: Option<Vec<u32>>,
}

/// A surface with verified hints.
#[derive(Clone, Debug)]
pub struct SurfaceInput {
    pub equation: QPoly,
    pub variables: Vec<String>,
    pub hints: Hints,
    pub options: Options,
}

impl SurfaceInput {
    /// Validate the equation and verify every hint exactly.
    pub fn new(equation: QPoly, variables: Vec<String>, hints: Hints, options: Options) -> Result<Self> {
        if equation.nvars() != 4 || variables.len() != 4 {
            return Err(Error::Usage("surfaces live in P^3: exactly four variables".into()));
        }
        if !equation.is_homogeneous() || equation.is_zero() {
            return Err(Error::Usage("the surface equation must be a nonzero form".into()));
        }
        let d = equation.degree().unwrap_or(0);
        if d == 0 {
            return Err(Error::Usage("constant equation".into()));
        }
        if d > 4 {
            return Err(Error::Unsupported(format!("degree {d} surfaces are outside the supported range")));
        }
        PrimeField::new(options.prime)?;
        if options.samples == 0 {
            return Err(Error::Usage("sample count must be positive".into()));
        }
        let input = SurfaceInput {
            equation,
            variables,
            hints,
            options,
        };
        input.check_squarefree()?;
        input.verify_hints()?;
        Ok(input)
    }

    pub fn simple(equation: QPoly) -> Result<Self> {
        Self::new(equation, crate::poly::default_var_names(4), Hints::default(), Options::default())
    }

    pub fn degree(&self) -> u32 {
        self.equation.degree().unwrap_or(0)
    }

    pub fn prime_field(&self) -> PrimeField {
        PrimeField::new(self.options.prime).expect("validated")
    }

    pub fn reduced(&self) -> Result<FpPoly> {
        let fp = self.prime_field();
        match self.equation.reduce(&fp) {
            Some(r) if r.degree() == self.equation.degree() => Ok(r),
            _ => Err(Error::Usage(format!(
                "the equation degenerates modulo {}; choose another prime",
                self.options.prime
            ))),
        }
    }

    /// A repeated factor shows up in `gcd(S, dS/dx_i)`.
    fn check_squarefree(&self) -> Result<()> {
        if self.degree() == 1 {
            return Ok(());
        }
        for i in 0..4 {
            let d = self.equation.partial(i)?;
            if d.is_zero() {
                continue;
            }
            let g = multivariate_gcd(&[self.equation.clone(), d])?;
            if !g.is_constant() {
                return Err(Error::Contract(format!(
                    "the equation has the repeated factor {g}; the surface must be reduced"
                )));
            }
        }
        Ok(())
    }

    /// Exact verification of every hint.
    pub fn verify_hints(&self) -> Result<()> {
        let s = &self.equation;
        let grads = s.gradient();
        for (i, c) in self.hints.singular_curves.iter().enumerate() {
            if c.param.is_none() && c.equations.is_empty() {
                return Err(Error::HintRejected(format!("singular curve {i} has neither a parametrization nor equations")));
            }
            if let Some(p) = &c.param {
                if p.ambient_vars() != 4 {
                    return Err(Error::HintRejected(format!("singular curve {i} is not in P^3")));
                }
                for f in std::iter::once(s).chain(&grads) {
                    if !p.pullback(f)?.is_zero() {
                        return Err(Error::HintRejected(format!(
                            "singular curve {i} is not contained in the singular locus"
                        )));
                    }
                }
            }
            if !c.equations.is_empty() {
                if c.equations.iter().any(|e| e.nvars() != 4 || !e.is_homogeneous()) {
                    return Err(Error::HintRejected(format!("singular curve {i} has malformed equations")));
                }
                if ideal_membership_certificate(s, &c.equations, 2)?.is_none() {
                    return Err(Error::HintRejected(format!(
                        "the surface is not in the square of the ideal of singular curve {i}"
                    )));
                }
            }
        }
        for (i, p) in self.hints.singular_points.iter().enumerate() {
            if p.len() != 4 || p.iter().all(|x| Rationals.is_zero(x)) {
                return Err(Error::HintRejected(format!("singular point {i} is not a point of P^3")));
            }
            if point_multiplicity(s, p) < 2 {
                return Err(Error::HintRejected(format!("point {i} is not a singular point of the surface")));
            }
        }
        for (i, l) in self.hints.secants.iter().enumerate() {
            if l.ambient_vars() != 4 || l.degree() != 1 || !l.pullback(s)?.is_zero() {
                return Err(Error::HintRejected(format!("secant {i} is not a line on the surface")));
            }
        }
        if let Some(g) = &self.hints.gamma {
            if g.ambient_vars() != 4 || !g.pullback(s)?.is_zero() {
                return Err(Error::HintRejected("the curve gamma does not lie on the surface".into()));
            }
        }
        for (i, p) in self.hints.general_points.iter().enumerate() {
            if p.len() != 4 || p.iter().all(|x| Rationals.is_zero(x)) || !Rationals.is_zero(&s.eval(p)?) {
                return Err(Error::HintRejected(format!("general point {i} does not lie on the surface")));
            }
        }
        if let Some(q) = &self.hints.auxiliary_quadric {
            if q.nvars() != 4 || !q.is_homogeneous() || q.degree() != Some(2) {
                return Err(Error::HintRejected("the auxiliary quadric must be a quadratic form".into()));
            }
        }
        if let Some(w) = &self.hints.valuation_weights {
            if w.len() != 3 || w.contains(&0) {
                return Err(Error::HintRejected("valuation weights must be three positive integers".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// An explicit chain of maps ending in a plane.
    Certified,
    /// Terminates at a good model with `0 < rho < 1`.
    CertifiedByCorollary,
    Inconclusive,
    OutOfScope,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::CertifiedByCorollary => "certified_by_corollary",
            Status::Inconclusive => "inconclusive",
            Status::OutOfScope => "out_of_scope",
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, Status::Certified | Status::CertifiedByCorollary)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldMode {
    ExactQ,
    CertificateFp,
}

impl FieldMode {
    pub fn name(self) -> &'static str {
        match self {
            FieldMode::ExactQ => "exact-Q",
            FieldMode::CertificateFp => "certificate-F_p",
        }
    }
}

#[derive(Clone, Debug)]
pub enum StepMap {
    Q(RationalMap<Rationals>),
    Fp(RationalMap<PrimeField>),
}

impl StepMap {
    pub fn source_dim(&self) -> usize {
        match self {
            StepMap::Q(m) => m.source_dim(),
            StepMap::Fp(m) => m.source_dim(),
        }
    }

    pub fn target_dim(&self) -> usize {
        match self {
            StepMap::Q(m) => m.target_dim(),
            StepMap::Fp(m) => m.target_dim(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            StepMap::Q(m) => m.degree(),
            StepMap::Fp(m) => m.degree(),
        }
    }

    pub fn form_strings(&self, names: &[String]) -> Vec<String> {
        match self {
            StepMap::Q(m) => m.forms().iter().map(|f| f.to_string_with(names)).collect(),
            StepMap::Fp(m) => m.forms().iter().map(|f| f.to_string_with(names)).collect(),
        }
    }

    pub fn field_name(&self) -> &'static str {
        match self {
            StepMap::Q(_) => "Q",
            StepMap::Fp(_) => "F_p",
        }
    }

    /// The map over `F_p`.
    pub fn over_fp(&self, fp: &PrimeField) -> Option<RationalMap<PrimeField>> {
        match self {
            StepMap::Q(m) => m.reduce(fp),
            StepMap::Fp(m) => (m.field() == fp).then(|| m.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct FitSummary {
    pub label: String,
    pub degree: u32,
    pub count: usize,
    pub forms: Vec<String>,
    pub held_out: usize,
}

#[derive(Clone, Debug)]
pub struct Step {
    pub name: String,
    pub map: StepMap,
    pub system_degree: u32,
    pub basis_size: usize,
    pub injectivity: Option<InjectivityCertificate>,
    pub image_degree: Option<u32>,
    pub fits: Vec<FitSummary>,
    pub checks: Vec<Check>,
}

impl Step {
    pub fn new(name: &str, map: StepMap) -> Self {
        let system_degree = map.degree();
        let basis_size = map.target_dim() + 1;
        Step {
            name: name.into(),
            map,
            system_degree,
            basis_size,
            injectivity: None,
            image_degree: None,
            fits: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, Default)]
pub struct FinalCertificate {
    /// Linear form cutting the final image, in the last step's target
    /// variables (or the input variables when there are no steps).
    pub plane_form: Option<String>,
    pub rho_certificate: Option<CorollaryCertificate>,
    pub verified_samples: usize,
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub label: CaseLabel,
    pub status: Status,
    pub field_mode: FieldMode,
    pub variables: Vec<String>,
    pub coordinate_changes: Vec<CoordinateChange>,
    pub steps: Vec<Step>,
    pub final_cert: FinalCertificate,
    pub notes: Vec<String>,
    pub seed: u64,
    pub prime: u64,
}

impl CaseReport {
    pub fn new(input: &SurfaceInput, label: CaseLabel, field_mode: FieldMode) -> Self {
        CaseReport {
            label,
            status: Status::Inconclusive,
            field_mode,
            variables: input.variables.clone(),
            coordinate_changes: Vec::new(),
            steps: Vec::new(),
            final_cert: FinalCertificate::default(),
            notes: Vec::new(),
            seed: input.options.seed,
            prime: input.options.prime,
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Mark inconclusive, naming the failing step.
    pub fn inconclusive(mut self, why: impl Into<String>) -> Self {
        self.status = Status::Inconclusive;
        self.notes.push(why.into());
        self
    }

    /// Target variable names of step `k`.
    pub fn target_names(&self, k: usize) -> Vec<String> {
        (0..=self.steps[k].map.target_dim()).map(|i| format!("y{i}")).collect()
    }

    /// Source variable names of step `k`.
    pub fn source_names(&self, k: usize) -> Vec<String> {
        if k == 0 {
            self.variables.clone()
        } else {
            self.target_names(k - 1)
        }
    }
}

/// Pick the construction for a surface from verified evidence.
pub fn classify_case(input: &SurfaceInput) -> Result<CaseLabel> {
    if let Some(c) = input.hints.case_override {
        return Ok(c);
    }
    let s = &input.equation;
    let d = input.degree();
    if d >= 2 && common::cone_vertex(s).is_some() {
        return Ok(CaseLabel::Cone);
    }
    if d <= 3 {
        return Ok(CaseLabel::LowDegree);
    }
    if common::monoid_point(input).is_some() {
        return Ok(CaseLabel::Monoid);
    }
    let curve_degrees: Vec<u32> = input.hints.singular_curves.iter().filter_map(SingularCurve::degree).collect();
    if curve_degrees.contains(&1) {
        return Ok(CaseLabel::DoubleLine);
    }
    if curve_degrees.contains(&3) {
        return Ok(CaseLabel::TwistedCubic);
    }
    if curve_degrees.contains(&2) {
        let conic = input
            .hints
            .singular_curves
            .iter()
            .find(|c| c.degree() == Some(2))
            .expect("present");
        if common::extra_node(input, conic).is_some() {
            return Ok(CaseLabel::CyclideExtraNode);
        }
        if input.hints.gamma.is_some() {
            return Ok(CaseLabel::CyclideSmooth);
        }
        return Ok(CaseLabel::DoubleConic);
    }
    if let Some((a, _)) = match_elliptic_normal_form(input)? {
        return Ok(if a == 1 { CaseLabel::EllipticType1 } else { CaseLabel::EllipticType2 });
    }
    Err(Error::Unclassified(
        "no triple point, no hinted singular curve and no elliptic normal form was found; \
         supply singular_curves or singular_points hints (singular loci are not computed automatically)"
            .into(),
    ))
}

/// Classify, dispatch and assemble the report.
pub fn run_pipeline(input: &SurfaceInput) -> Result<CaseReport> {
    let label = classify_case(input)?;
    match label {
        CaseLabel::LowDegree => linearize_low_degree(input),
        CaseLabel::Monoid => linearize_monoid(input),
        CaseLabel::DoubleLine => linearize_double_line(input),
        CaseLabel::DoubleConic => linearize_double_conic(input),
        CaseLabel::TwistedCubic => linearize_twisted_cubic(input),
        CaseLabel::EllipticType1 => linearize_elliptic(input, 1),
        CaseLabel::EllipticType2 => linearize_elliptic(input, 2),
        CaseLabel::CyclideExtraNode | CaseLabel::CyclideSmooth => linearize_cyclide(input),
        CaseLabel::Cone => {
            let mut r = CaseReport::new(input, CaseLabel::Cone, FieldMode::ExactQ);
            r.status = Status::OutOfScope;
            if let Some(v) = common::cone_vertex(&input.equation) {
                r.note(format!(
                    "cone with vertex [{}]; cones are delegated to the general theory of cones over rational curves and are not linearized here",
                    v.iter().map(crate::field::format_rational).collect::<Vec<_>>().join(", ")
                ));
            } else {
                r.note("case override: cone; cones are outside the supported constructions");
            }
            Ok(r)
        }
    }
}
