//! Projection from a point of multiplicity `d - 1`, and surfaces of
//! degree at most three.

use num_rational::BigRational;

use super::common::{
    exact_image_forms, fmt_point, monoid_point, move_point_to_e0, plane_pulls_back_into_surface, record_fit,
    record_image_degree, reduce_map, samples_for, smooth_at_samples, CoordinateChange,
};
use super::{CaseLabel, CaseReport, FieldMode, Mode, Status, Step, StepMap, SurfaceInput};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::maps::{
    birationality_certificate, fit_inverse_exact, fit_inverse_mod_p, push_forward, sample_rational_surface, Domain,
    RationalMap,
};
use crate::poly::{Polynomial, QPoly};
use crate::threshold::{corollary_certificate, PicardModel};

pub(crate) const INJECTIVITY_TRIALS: usize = 500;

/// The map `(x1 F, x2 F, x3 F, S)` after moving `p` to `e_0`, written in
/// the original coordinates. `S = x0 F + G` in the moved coordinates.
pub fn monoid_map(s: &QPoly, p: &[BigRational]) -> Result<(CoordinateChange, RationalMap<Rationals>)> {
    let d = s.degree().unwrap_or(0);
    let change = move_point_to_e0(p)?;
    let moved = change.pull(s)?;
    if moved.degree_in(0).unwrap_or(0) > 1 {
        return Err(Error::Contract(format!(
            "{} is not a point of multiplicity {} on the surface",
            fmt_point(p),
            d.saturating_sub(1)
        )));
    }
    let parts = moved.coefficients_in(0);
    let f = parts.get(1).cloned().unwrap_or_else(|| Polynomial::zero(Rationals, 4));
    if f.is_zero() {
        return Err(Error::Contract(format!("{} is a vertex: the surface is a cone", fmt_point(p))));
    }
    let mut forms: Vec<QPoly> = (1..4).map(|i| &Polynomial::var(Rationals, 4, i) * &f).collect();
    forms.push(moved);
    let forms = change.push_forms(&forms)?;
    let map = RationalMap::new(forms)?.normalize()?;
    if map.degree() != d {
        return Err(Error::Contract("the surface is reducible: the monoid forms share a factor".into()));
    }
    Ok((change, map))
}

/// A step sending `s` birationally onto a plane, with its certificates.
/// Returns the step, the exact map and the exact plane (if computed).
pub(crate) fn monoid_step(
    s: &QPoly,
    p: &[BigRational],
    fp: &PrimeField,
    seed: u64,
    exact: bool,
) -> Result<(Step, RationalMap<Rationals>, Option<QPoly>)> {
    let d = s.degree().unwrap_or(0);
    let (_, map) = monoid_map(s, p)?;
    let mut step = Step::new("monoid_projection", StepMap::Q(map.clone()));
    step.check("center", true, format!("projection from {} of multiplicity {}", fmt_point(p), d - 1));
    let map_fp = reduce_map(&map, fp)?;
    let inverse_degree = if exact {
        fit_inverse_exact(&map, d, seed)?.map(|inv| inv.degree)
    } else {
        fit_inverse_mod_p(&map_fp, d, seed)?.map(|inv| inv.degree)
    };
    step.check(
        "inverse",
        inverse_degree.is_some(),
        match inverse_degree {
            Some(e) => format!("verified inverse of degree {e} ({})", if exact { "over Q" } else { "over F_p" }),
            None => format!("no inverse of degree <= {d} found"),
        },
    );
    let cert = birationality_certificate(&map_fp, Domain::Projective, INJECTIVITY_TRIALS, seed, inverse_degree)?;
    step.check(
        "injectivity",
        cert.collisions == 0 && cert.full_rank_samples == cert.trials,
        format!("{} trials, {} collisions", cert.trials, cert.collisions),
    );
    step.injectivity = Some(cert);
    let plane = image_plane(&mut step, &map, &map_fp, s, fp, seed, exact)?;
    Ok((step, map, plane))
}

/// Fit the image of `s` under a map expected to send it onto a plane.
pub(crate) fn image_plane(
    step: &mut Step,
    map: &RationalMap<Rationals>,
    map_fp: &RationalMap<PrimeField>,
    s: &QPoly,
    fp: &PrimeField,
    seed: u64,
    exact: bool,
) -> Result<Option<QPoly>> {
    image_hypersurface(step, map, map_fp, s, fp, 1, seed, exact)
}

/// Fit the image of `s` under `map` and check it is a hypersurface of
/// degree `k`. With `exact`, the form is also solved for over `Q`.
#[allow(clippy::too_many_arguments)]
/// Surface samples behind every image fit; half of them are held out.
pub const IMAGE_SAMPLES: usize = 200;

pub(crate) fn image_hypersurface(
    step: &mut Step,
    map: &RationalMap<Rationals>,
    map_fp: &RationalMap<PrimeField>,
    s: &QPoly,
    fp: &PrimeField,
    k: u32,
    seed: u64,
    exact: bool,
) -> Result<Option<QPoly>> {
    let m = map.target_dim() + 1;
    let need = samples_for(m, k + 1).max(IMAGE_SAMPLES);
    let samples = sample_rational_surface(s, fp, need, seed ^ 0x5eed, |_| true)?;
    let image = push_forward(map_fp, &samples.points)?;
    if m == 4 {
        record_image_degree(step, fp, &image, m, k, seed)?;
    }
    let forms = record_fit(step, &format!("image_degree_{k}"), fp, &image, m, k)?;
    step.check("image_form_count", forms.len() == 1, format!("{} independent forms of degree {k}", forms.len()));
    if !exact || forms.len() != 1 {
        return Ok(None);
    }
    let exact_forms = exact_image_forms(map, s, k)?;
    if exact_forms.len() != 1 {
        step.check("exact_image_form", false, format!("{} exact forms of degree {k}", exact_forms.len()));
        return Ok(None);
    }
    let g = exact_forms[0].primitive_integer();
    let agrees = match g.reduce(fp) {
        Some(gr) => image.iter().all(|y| gr.eval_unchecked(y) == 0),
        None => false,
    };
    step.check("exact_image_form", agrees, "exact form over Q agrees with the F_p fit on all image samples");
    Ok(agrees.then_some(g))
}

fn mode_of(input: &SurfaceInput) -> FieldMode {
    match input.options.mode {
        Mode::Exact => FieldMode::ExactQ,
        Mode::Certificate => FieldMode::CertificateFp,
    }
}

/// Monoid case: a point of multiplicity `d - 1`.
pub fn linearize_monoid(input: &SurfaceInput) -> Result<CaseReport> {
    monoid_report(input, CaseLabel::Monoid)
}

fn monoid_report(input: &SurfaceInput, label: CaseLabel) -> Result<CaseReport> {
    let mut report = CaseReport::new(input, label, mode_of(input));
    let Some(p) = monoid_point(input) else {
        let d = input.degree();
        return Ok(report.inconclusive(format!(
            "no rational point of multiplicity {} found among hints, coordinate points and small-height points",
            d.saturating_sub(1)
        )));
    };
    let fp = input.prime_field();
    let exact = input.options.mode == Mode::Exact;
    let (change, _) = monoid_map(&input.equation, &p)?;
    report.coordinate_changes.push(change);
    let (step, map, plane) = monoid_step(&input.equation, &p, &fp, input.options.seed, exact)?;
    let ok = step.all_passed();
    let held = step.fits.last().map(|f| f.held_out).unwrap_or(0);
    let plane_str = step.fits.last().and_then(|f| f.forms.first().cloned());
    report.steps.push(step);
    conclude_plane(&mut report, &[map], &input.equation, plane, plane_str, held, ok, exact)?;
    Ok(report)
}

/// Set the final plane certificate and status.
#[allow(clippy::too_many_arguments)]
pub(crate) fn conclude_plane(
    report: &mut CaseReport,
    maps: &[RationalMap<Rationals>],
    s: &QPoly,
    plane: Option<QPoly>,
    plane_fp: Option<String>,
    held_out: usize,
    steps_ok: bool,
    exact: bool,
) -> Result<()> {
    if !steps_ok {
        let failed: Vec<String> = report
            .steps
            .iter()
            .flat_map(|st| st.checks.iter().filter(|c| !c.passed).map(move |c| format!("{}: {}", st.name, c.name)))
            .collect();
        report.status = Status::Inconclusive;
        report.note(format!("failed checks: {}", failed.join(", ")));
        return Ok(());
    }
    if exact {
        let Some(g) = plane else {
            report.status = Status::Inconclusive;
            report.note("no exact plane form over Q");
            return Ok(());
        };
        if !plane_pulls_back_into_surface(maps, s, &g)? {
            report.status = Status::Inconclusive;
            report.note("the plane form does not pull back into the ideal of the surface");
            return Ok(());
        }
        let names = report.target_names(report.steps.len() - 1);
        report.final_cert.plane_form = Some(g.to_string_with(&names));
        report.note("exact: the plane form composed with the chain is a multiple of the surface equation");
    } else {
        report.final_cert.plane_form = plane_fp;
        report.field_mode = FieldMode::CertificateFp;
    }
    report.final_cert.verified_samples = held_out;
    report.status = Status::Certified;
    Ok(())
}

/// Degree one: already a plane. Degree two: project from a rational
/// point. Degree three: a double point gives a monoid, otherwise the
/// cubic is a good model with threshold `3/4`.
pub fn linearize_low_degree(input: &SurfaceInput) -> Result<CaseReport> {
    let d = input.degree();
    match d {
        1 => {
            let mut r = CaseReport::new(input, CaseLabel::LowDegree, FieldMode::ExactQ);
            r.final_cert.plane_form = Some(input.equation.to_string_with(&input.variables));
            r.status = Status::Certified;
            r.note("the surface is a plane");
            Ok(r)
        }
        2 => monoid_report(input, CaseLabel::LowDegree),
        3 => {
            if monoid_point(input).is_some() {
                return monoid_report(input, CaseLabel::LowDegree);
            }
            let mut r = CaseReport::new(input, CaseLabel::LowDegree, FieldMode::CertificateFp);
            cubic_good_model(&mut r, &input.equation, &input.prime_field(), input.options.samples, input.options.seed)?;
            Ok(r)
        }
        _ => Err(Error::Usage(format!("low-degree handling covers degrees 1 to 3, got {d}"))),
    }
}

/// A cubic with no singular point found at the samples: the threshold
/// certificate on `(P^3, 3H)`.
pub(crate) fn cubic_good_model(
    report: &mut CaseReport,
    cubic: &QPoly,
    fp: &PrimeField,
    samples: usize,
    seed: u64,
) -> Result<()> {
    let pts = sample_rational_surface(cubic, fp, samples, seed ^ 0xc0b1c, |_| true)?;
    let red = cubic.reduce(fp).ok_or_else(|| Error::Usage("cubic degenerates mod p".into()))?;
    let smooth = smooth_at_samples(&red, &pts.points);
    report.note(format!(
        "no singular point found at {} samples over F_{} (gradient nonzero at {smooth}); smoothness is certified only at samples",
        pts.points.len(),
        fp.modulus()
    ));
    if smooth != pts.points.len() {
        report.status = Status::Inconclusive;
        report.note("a sample is singular; supply the singular point as a hint");
        return Ok(());
    }
    let cert = corollary_certificate(&PicardModel::by_name("p3")?, &[Rationals.from_i64(3)])?;
    report.status = if cert.certifies_ce_to_plane {
        Status::CertifiedByCorollary
    } else {
        Status::Inconclusive
    };
    report.final_cert.rho_certificate = Some(cert);
    report.final_cert.verified_samples = smooth;
    Ok(())
}
