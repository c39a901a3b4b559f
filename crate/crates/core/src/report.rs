//! JSON interfaces: surface descriptors in, report documents out, and an
//! independent re-check of a report against fresh samples.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, PrimeField, Rationals};
use crate::linsys::{CurveLabel, CurveParam};
use crate::maps::{sample_rational_surface, RationalMap};
use crate::parse::parse_polynomial;
use crate::pipeline::{
    classify_case, plane_pulls_back_into_surface, push_chain, CaseLabel, CaseReport, Hints, Mode, Options,
    SingularCurve, Status, SurfaceInput,
};
use crate::poly::{FpPoly, QPoly};
use crate::threshold::{corollary_certificate, parse_class, PicardModel};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A rational coordinate: `"p/q"` string or a JSON integer.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coord {
    Int(i64),
    Text(String),
}

impl Coord {
    fn value(&self) -> Result<BigRational> {
        match self {
            Coord::Int(v) => Ok(BigRational::from_integer((*v).into())),
            Coord::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveHint {
    #[serde(rename = "type", default)]
    pub kind: Option<String>,
    /// Four forms in `s, t`.
    #[serde(default)]
    pub parametrization: Option<Vec<String>>,
    /// Generators of the ideal, in the surface variables.
    #[serde(default)]
    pub equations: Option<Vec<String>>,
    /// Two distinct points spanning a line.
    #[serde(default)]
    pub through: Option<Vec<Vec<Coord>>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HintsDoc {
    #[serde(default)]
    pub singular_curves: Vec<CurveHint>,
    #[serde(default)]
    pub singular_points: Vec<Vec<Coord>>,
    #[serde(default)]
    pub secants: Vec<CurveHint>,
    #[serde(default)]
    pub gamma: Option<CurveHint>,
    #[serde(default)]
    pub general_points: Vec<Vec<Coord>>,
    #[serde(default)]
    pub case_override: Option<String>,
    #[serde(default)]
    pub auxiliary_quadric: Option<String>,
    #[serde(default)]
    pub valuation_weights: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    pub prime: Option<u64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub mode: Option<String>,
}

/// The input document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDescriptor {
    pub variables: Vec<String>,
    pub polynomial: String,
    #[serde(default)]
    pub hints: HintsDoc,
    #[serde(default)]
    pub options: OptionsDoc,
}

/// Command-line overrides of the descriptor options.
#[derive(Clone, Debug, Default)]
pub struct OptionOverrides {
    pub prime: Option<u64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub mode: Option<Mode>,
}

pub fn parse_mode(s: &str) -> Result<Mode> {
    match s {
        "exact" => Ok(Mode::Exact),
        "certificate" => Ok(Mode::Certificate),
        _ => Err(Error::Usage(format!("mode must be exact or certificate, got {s:?}"))),
    }
}

fn point(coords: &[Coord], what: &str) -> Result<Vec<BigRational>> {
    if coords.len() != 4 {
        return Err(Error::Usage(format!("{what}: expected 4 coordinates, got {}", coords.len())));
    }
    coords.iter().map(Coord::value).collect()
}

fn curve_label(kind: Option<&str>) -> Result<Option<CurveLabel>> {
    Ok(Some(match kind {
        None => return Ok(None),
        Some("line") => CurveLabel::Line,
        Some("conic") => CurveLabel::Conic,
        Some("twisted_cubic") => CurveLabel::TwistedCubic,
        Some("rational_quartic") => CurveLabel::RationalQuartic,
        Some("custom") => CurveLabel::Custom,
        Some(other) => return Err(Error::Usage(format!("unknown curve type {other:?}"))),
    }))
}

fn parametrization(h: &CurveHint, label: CurveLabel, what: &str) -> Result<Option<CurveParam<Rationals>>> {
    if let Some(comps) = &h.parametrization {
        if comps.len() != 4 {
            return Err(Error::Usage(format!("{what}: a parametrization needs 4 forms in s, t")));
        }
        let forms = comps.iter().map(|c| parse_polynomial(c, &["s", "t"])).collect::<Result<Vec<_>>>()?;
        return CurveParam::new(forms, label).map(Some);
    }
    if let Some(pts) = &h.through {
        if pts.len() != 2 {
            return Err(Error::Usage(format!("{what}: 'through' takes two points")));
        }
        let (p, q) = (point(&pts[0], what)?, point(&pts[1], what)?);
        return CurveParam::line_through(&Rationals, &p, &q).map(Some);
    }
    Ok(None)
}

impl SurfaceDescriptor {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Usage(format!("descriptor: {e}")))
    }

    pub fn options(&self, over: &OptionOverrides) -> Result<Options> {
        let d = Options::default();
        let mode = match (&over.mode, &self.options.mode) {
            (Some(m), _) => *m,
            (None, Some(s)) => parse_mode(s)?,
            (None, None) => d.mode,
        };
        Ok(Options {
            prime: over.prime.or(self.options.prime).unwrap_or(d.prime),
            seed: over.seed.or(self.options.seed).unwrap_or(d.seed),
            samples: over.samples.or(self.options.samples).unwrap_or(d.samples),
            mode,
        })
    }

    fn hints(&self) -> Result<Hints> {
        let vars = &self.variables;
        let h = &self.hints;
        let mut curves = Vec::new();
        for (i, c) in h.singular_curves.iter().enumerate() {
            let what = format!("singular curve {i}");
            let label = curve_label(c.kind.as_deref())?.unwrap_or(CurveLabel::Custom);
            let param = parametrization(c, label, &what)?;
            let equations = c
                .equations
                .iter()
                .flatten()
                .map(|e| parse_polynomial(e, vars))
                .collect::<Result<Vec<_>>>()?;
            curves.push(SingularCurve { label, param, equations });
        }
        let secants = h
            .secants
            .iter()
            .enumerate()
            .map(|(i, c)| {
                parametrization(c, CurveLabel::Line, &format!("secant {i}"))?
                    .ok_or_else(|| Error::Usage(format!("secant {i}: give a parametrization or two points")))
            })
            .collect::<Result<Vec<_>>>()?;
        let gamma = match &h.gamma {
            Some(g) => {
                let label = curve_label(g.kind.as_deref())?.unwrap_or(CurveLabel::RationalQuartic);
                Some(parametrization(g, label, "gamma")?.ok_or_else(|| Error::Usage("gamma needs a parametrization".into()))?)
            }
            None => None,
        };
        let case_override = match &h.case_override {
            Some(s) => Some(CaseLabel::from_name(s).ok_or_else(|| Error::Usage(format!("unknown case {s:?}")))?),
            None => None,
        };
        Ok(Hints {
            singular_curves: curves,
            singular_points: h
                .singular_points
                .iter()
                .enumerate()
                .map(|(i, p)| point(p, &format!("singular point {i}")))
                .collect::<Result<_>>()?,
            secants,
            gamma,
            general_points: h
                .general_points
                .iter()
                .enumerate()
                .map(|(i, p)| point(p, &format!("general point {i}")))
                .collect::<Result<_>>()?,
            case_override,
            auxiliary_quadric: h.auxiliary_quadric.as_ref().map(|q| parse_polynomial(q, vars)).transpose()?,
            valuation_weights: h.valuation_weights.clone(),
        })
    }

    /// Parse, validate and verify the hints.
    pub fn to_input(&self, over: &OptionOverrides) -> Result<SurfaceInput> {
        if self.variables.len() != 4 {
            return Err(Error::Usage(format!("expected 4 variables, got {}", self.variables.len())));
        }
        let eq = parse_polynomial(&self.polynomial, &self.variables)?;
        SurfaceInput::new(eq, self.variables.clone(), self.hints()?, self.options(over)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InjectivityDoc {
    pub verdict: String,
    pub trials: usize,
    pub base_point_hits: usize,
    pub collisions: usize,
    pub full_rank_samples: usize,
    pub inverse_degree: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FitDoc {
    pub label: String,
    pub degree: u32,
    pub count: usize,
    pub forms: Vec<String>,
    pub held_out: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckDoc {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CertificatesDoc {
    pub injectivity: Option<InjectivityDoc>,
    pub image_degree: Option<u32>,
    pub fitted_forms: Vec<FitDoc>,
    pub checks: Vec<CheckDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StepDoc {
    pub name: String,
    /// `Q` or `F_p`.
    pub field: String,
    pub system_degree: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub source_variables: Vec<String>,
    pub target_variables: Vec<String>,
    pub forms: Vec<String>,
    pub certificates: CertificatesDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CoordinateChangeDoc {
    pub description: String,
    /// `x = A x'`, rows of `A`.
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RhoDoc {
    pub model: String,
    pub class: Vec<String>,
    pub rho: String,
    pub certifies_ce_to_plane: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FinalDoc {
    pub plane_form: Option<String>,
    pub rho_certificate: Option<RhoDoc>,
    pub verified_samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub seed: u64,
    pub prime: u64,
    pub tool_version: String,
}

/// The output document of `linearize`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportDocument {
    pub case: String,
    pub status: String,
    pub field_mode: String,
    pub variables: Vec<String>,
    pub coordinate_changes: Vec<CoordinateChangeDoc>,
    pub steps: Vec<StepDoc>,
    #[serde(rename = "final")]
    pub final_: FinalDoc,
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

fn provenance(seed: u64, prime: u64) -> Provenance {
    Provenance {
        seed,
        prime,
        tool_version: TOOL_VERSION.to_string(),
    }
}

impl ReportDocument {
    pub fn from_report(r: &CaseReport) -> Self {
        let steps = r
            .steps
            .iter()
            .enumerate()
            .map(|(k, st)| {
                let source_variables = r.source_names(k);
                StepDoc {
                    name: st.name.clone(),
                    field: st.map.field_name().to_string(),
                    system_degree: st.system_degree,
                    source_dim: st.map.source_dim(),
                    target_dim: st.map.target_dim(),
                    forms: st.map.form_strings(&source_variables),
                    source_variables,
                    target_variables: r.target_names(k),
                    certificates: CertificatesDoc {
                        injectivity: st.injectivity.as_ref().map(|c| InjectivityDoc {
                            verdict: c.verdict.name().to_string(),
                            trials: c.trials,
                            base_point_hits: c.base_point_hits,
                            collisions: c.collisions,
                            full_rank_samples: c.full_rank_samples,
                            inverse_degree: c.inverse_degree,
                        }),
                        image_degree: st.image_degree,
                        fitted_forms: st
                            .fits
                            .iter()
                            .map(|f| FitDoc {
                                label: f.label.clone(),
                                degree: f.degree,
                                count: f.count,
                                forms: f.forms.clone(),
                                held_out: f.held_out,
                            })
                            .collect(),
                        checks: st
                            .checks
                            .iter()
                            .map(|c| CheckDoc {
                                name: c.name.clone(),
                                passed: c.passed,
                                detail: c.detail.clone(),
                            })
                            .collect(),
                    },
                }
            })
            .collect();
        ReportDocument {
            case: r.label.name().to_string(),
            status: r.status.name().to_string(),
            field_mode: r.field_mode.name().to_string(),
            variables: r.variables.clone(),
            coordinate_changes: r
                .coordinate_changes
                .iter()
                .map(|c| CoordinateChangeDoc {
                    description: c.description.clone(),
                    matrix: c.matrix.iter().map(|row| row.iter().map(format_rational).collect()).collect(),
                })
                .collect(),
            steps,
            final_: FinalDoc {
                plane_form: r.final_cert.plane_form.clone(),
                rho_certificate: r.final_cert.rho_certificate.as_ref().map(|c| RhoDoc {
                    model: c.model.clone(),
                    class: c.class.clone(),
                    rho: c.rho.clone(),
                    certifies_ce_to_plane: c.certifies_ce_to_plane,
                }),
                verified_samples: r.final_cert.verified_samples,
            },
            notes: r.notes.clone(),
            provenance: provenance(r.seed, r.prime),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Usage(format!("report: {e}")))
    }

    pub fn is_success(&self) -> bool {
        matches!(self.status.as_str(), "certified" | "certified_by_corollary")
    }
}

/// The output document of `classify`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassificationDocument {
    pub case: Option<String>,
    pub status: String,
    pub degree: u32,
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

pub fn classify_document(input: &SurfaceInput) -> ClassificationDocument {
    let prov = provenance(input.options.seed, input.options.prime);
    let degree = input.degree();
    match classify_case(input) {
        Ok(CaseLabel::Cone) => {
            let mut notes = vec!["cones are outside the supported constructions".to_string()];
            if let Some(v) = crate::pipeline::cone_vertex(&input.equation) {
                notes.push(format!(
                    "vertex [{}]",
                    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                ));
            }
            ClassificationDocument {
                case: Some(CaseLabel::Cone.name().into()),
                status: Status::OutOfScope.name().into(),
                degree,
                notes,
                provenance: prov,
            }
        }
        Ok(c) => ClassificationDocument {
            case: Some(c.name().into()),
            status: "classified".into(),
            degree,
            notes: Vec::new(),
            provenance: prov,
        },
        Err(e) => ClassificationDocument {
            case: None,
            status: "unclassified".into(),
            degree,
            notes: vec![e.to_string()],
            provenance: prov,
        },
    }
}

/// The output document of `threshold`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ThresholdDocument {
    pub model: String,
    pub class: Vec<String>,
    pub rho: String,
    pub corollary_applies: bool,
    pub class_basis: String,
    pub tool_version: String,
}

pub fn threshold_document(model: &str, class: &str) -> Result<ThresholdDocument> {
    let m = PicardModel::by_name(model)?;
    let h = parse_class(class)?;
    let cert = corollary_certificate(&m, &h)?;
    Ok(ThresholdDocument {
        model: m.name.clone(),
        class: cert.class.clone(),
        rho: cert.rho.clone(),
        corollary_applies: cert.certifies_ce_to_plane,
        class_basis: m.class_basis_doc.clone(),
        tool_version: TOOL_VERSION.to_string(),
    })
}

/// Outcome of re-checking a report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerificationDocument {
    pub status: String,
    pub verified: bool,
    pub fresh_samples: usize,
    pub exact_check: Option<bool>,
    pub checks: BTreeMap<String, String>,
    pub provenance: Provenance,
}

fn parse_step_maps(doc: &ReportDocument, fp: &PrimeField) -> Result<(Vec<RationalMap<PrimeField>>, Option<Vec<RationalMap<Rationals>>>)> {
    let mut fp_maps = Vec::new();
    let mut q_maps = Vec::new();
    let mut all_q = true;
    for (k, st) in doc.steps.iter().enumerate() {
        let forms: Vec<QPoly> = st
            .forms
            .iter()
            .map(|f| parse_polynomial(f, &st.source_variables))
            .collect::<Result<_>>()
            .map_err(|e| Error::Usage(format!("step {k}: {e}")))?;
        let reduced: Vec<FpPoly> = forms
            .iter()
            .map(|f| f.reduce(fp))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Usage(format!("step {k}: a form has a denominator divisible by the prime")))?;
        fp_maps.push(RationalMap::new(reduced)?);
        if st.field == "Q" {
            q_maps.push(RationalMap::new(forms)?);
        } else {
            all_q = false;
        }
    }
    Ok((fp_maps, all_q.then_some(q_maps)))
}

/// Re-check a report independently of the run that produced it: the step
/// forms are re-parsed from their strings, fresh surface samples (seeded
/// away from the original run) are pushed through the chain and the plane
/// form must vanish on all of them. A threshold certificate is recomputed.
pub fn verify_document(input: &SurfaceInput, doc: &ReportDocument, samples: usize) -> Result<VerificationDocument> {
    let prime = doc.provenance.prime;
    let fp = PrimeField::new(prime)?;
    let seed = doc.provenance.seed.wrapping_add(0x5eed_0001);
    let mut checks = BTreeMap::new();
    let mut verified = doc.is_success();
    let mut exact_check = None;
    let mut fresh = 0;
    if !doc.is_success() {
        checks.insert("status".into(), format!("nothing to verify for status {}", doc.status));
    }
    if doc.variables != input.variables {
        return Err(Error::Usage("the report variables do not match the descriptor".into()));
    }
    if let Some(plane) = &doc.final_.plane_form {
        let (maps, q_maps) = parse_step_maps(doc, &fp)?;
        let names = doc.steps.last().map(|s| s.target_variables.clone()).unwrap_or_else(|| doc.variables.clone());
        let plane_q = parse_polynomial(plane, &names)?;
        let plane_fp = plane_q.reduce(&fp).ok_or_else(|| Error::Usage("plane form degenerates mod p".into()))?;
        if plane_q.degree() != Some(1) {
            verified = false;
            checks.insert("plane_degree".into(), format!("the final form has degree {:?}", plane_q.degree()));
        }
        let surf = sample_rational_surface(&input.equation, &fp, samples, seed, |_| true)?;
        let image = push_chain(&maps, &surf.points)?;
        fresh = image.len();
        let bad = image.iter().filter(|p| plane_fp.eval_unchecked(p) != 0).count();
        if bad > 0 || fresh < samples / 2 {
            verified = false;
        }
        checks.insert("fresh_samples".into(), format!("{fresh} image points, {bad} off the plane"));
        if doc.field_mode == "exact-Q" {
            if let Some(q) = q_maps {
                let ok = plane_pulls_back_into_surface(&q, &input.equation, &plane_q)?;
                exact_check = Some(ok);
                verified &= ok;
                checks.insert("exact".into(), format!("plane pulls back into the surface ideal: {ok}"));
            }
        }
    }
    if let Some(rho) = &doc.final_.rho_certificate {
        let m = PicardModel::by_name(&rho.model)?;
        let h = rho.class.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        let cert = corollary_certificate(&m, &h)?;
        let ok = cert.rho == rho.rho && cert.certifies_ce_to_plane == rho.certifies_ce_to_plane;
        verified &= ok && cert.certifies_ce_to_plane;
        checks.insert("rho".into(), format!("recomputed {} on {}, report says {}", cert.rho, m.name, rho.rho));
    }
    if doc.final_.plane_form.is_none() && doc.final_.rho_certificate.is_none() {
        verified = false;
        checks.insert("final".into(), "no final certificate".into());
    }
    Ok(VerificationDocument {
        status: doc.status.clone(),
        verified,
        fresh_samples: fresh,
        exact_check,
        checks,
        provenance: provenance(doc.provenance.seed, prime),
    })
}
