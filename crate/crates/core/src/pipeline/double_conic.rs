//! Quartics double along a conic: quadrics through the conic and a point
//! send the surface to a cubic.

use num_rational::BigRational;
use num_traits::Zero;

use super::common::{
    apply_q, conic_equations, find_rational_points, fmt_point, point_multiplicity, reduce_map, system_with_dim,
};
use super::monoid::{conclude_plane, cubic_good_model, image_hypersurface, monoid_map, monoid_step, INJECTIVITY_TRIALS};
use super::{CaseLabel, CaseReport, FieldMode, Mode, SingularCurve, Status, Step, StepMap, SurfaceInput};
use crate::error::{Error, Result};
use crate::field::{PrimeField, Rationals};
use crate::linsys::LinearCondition;
use crate::maps::{birationality_certificate, fit_inverse_exact, fit_inverse_mod_p, Domain, RationalMap};
use crate::poly::QPoly;

/// A rational point of `s` off the curve cut by `avoid`, of multiplicity one.
pub(crate) fn general_rational_point(
    input: &SurfaceInput,
    avoid: &[QPoly],
    skip: &[Vec<BigRational>],
) -> Option<Vec<BigRational>> {
    let s = &input.equation;
    let ok = |p: &[BigRational]| {
        !avoid.iter().all(|f| f.eval_unchecked(p).is_zero())
            && point_multiplicity(s, p) == 1
            && !skip.iter().any(|q| crate::maps::projectively_equal(&Rationals, p, q))
    };
    input
        .hints
        .general_points
        .iter()
        .find(|p| ok(p))
        .cloned()
        .or_else(|| find_rational_points(std::slice::from_ref(s), 3, 1, ok).into_iter().next())
}

/// The quadro-quadric step: quadrics through the conic and `x`.
pub(crate) fn conic_point_step(
    s: &QPoly,
    conic: (&QPoly, &QPoly),
    x: &[BigRational],
    fp: &PrimeField,
    seed: u64,
    exact: bool,
) -> Result<(Step, RationalMap<Rationals>, Option<QPoly>)> {
    let conds = [
        LinearCondition::CurveIdeal {
            generators: vec![conic.0.clone(), conic.1.clone()],
            m: 1,
        },
        LinearCondition::PointMultiplicity { point: x.to_vec(), m: 1 },
    ];
    let basis = system_with_dim(&Rationals, 2, &conds, 4, "quadrics through the conic and a point")?;
    let map = RationalMap::new(basis)?.normalize()?;
    let mut step = Step::new("quadrics_through_conic_and_point", StepMap::Q(map.clone()));
    step.check("system_dimension", map.degree() == 2, format!("projective dimension 3, degree {}", map.degree()));
    let map_fp = reduce_map(&map, fp)?;
    let inv = if exact {
        fit_inverse_exact(&map, 3, seed)?.map(|i| i.degree)
    } else {
        fit_inverse_mod_p(&map_fp, 3, seed)?.map(|i| i.degree)
    };
    let cert = birationality_certificate(&map_fp, Domain::Projective, INJECTIVITY_TRIALS, seed, inv)?;
    step.check(
        "injectivity",
        cert.collisions == 0 && cert.full_rank_samples == cert.trials,
        format!("{} trials, {} collisions, inverse degree {:?}", cert.trials, cert.collisions, inv),
    );
    step.injectivity = Some(cert);
    let cubic = image_hypersurface(&mut step, &map, &map_fp, s, fp, 3, seed, true)?;
    Ok((step, map, cubic))
}

/// Finish on a cubic image: a double point gives a monoid step, otherwise
/// the threshold certificate.
pub(crate) fn finish_on_cubic(
    report: &mut CaseReport,
    maps: &mut Vec<RationalMap<Rationals>>,
    s: &QPoly,
    cubic: &QPoly,
    candidates: &[Vec<BigRational>],
    fp: &PrimeField,
    seed: u64,
    exact: bool,
) -> Result<()> {
    let mut double = candidates.iter().find(|y| point_multiplicity(cubic, y) == 2).cloned();
    if double.is_none() {
        let grads = cubic.gradient();
        double = find_rational_points(&grads, 2, 1, |p| point_multiplicity(cubic, p) == 2).into_iter().next();
    }
    match double {
        Some(y) => {
            if let Ok((change, _)) = monoid_map(cubic, &y) {
                report.coordinate_changes.push(change);
            }
            let (step, map, plane) = monoid_step(cubic, &y, fp, seed ^ 0x2, exact)?;
            let held = step.fits.last().map(|f| f.held_out).unwrap_or(0);
            let plane_fp = step.fits.last().and_then(|f| f.forms.first().cloned());
            report.note(format!("the cubic image has the double point {}", fmt_point(&y)));
            report.steps.push(step);
            maps.push(map);
            let ok = report.steps.iter().all(Step::all_passed);
            conclude_plane(report, maps, s, plane, plane_fp, held, ok, exact)
        }
        None => {
            if !report.steps.iter().all(Step::all_passed) {
                report.status = Status::Inconclusive;
                report.note("a step failed before the cubic stage");
                return Ok(());
            }
            cubic_good_model(report, cubic, fp, 200, seed ^ 0x3)
        }
    }
}

/// Double-conic case.
pub fn linearize_double_conic(input: &SurfaceInput) -> Result<CaseReport> {
    let exact = input.options.mode == Mode::Exact;
    let mut report = CaseReport::new(
        input,
        CaseLabel::DoubleConic,
        if exact { FieldMode::ExactQ } else { FieldMode::CertificateFp },
    );
    let conic: &SingularCurve = input
        .hints
        .singular_curves
        .iter()
        .find(|c| c.degree() == Some(2))
        .ok_or_else(|| Error::Contract("no singular conic hint".into()))?;
    let (l, q) = conic_equations(conic)?;
    let Some(x) = general_rational_point(input, &[l.clone(), q.clone()], &input.hints.singular_points) else {
        return Ok(report.inconclusive("no rational point off the conic found; supply general_points"));
    };
    report.note(format!("general point {}", fmt_point(&x)));
    let fp = input.prime_field();
    let seed = input.options.seed;
    let (step, map, cubic) = conic_point_step(&input.equation, (&l, &q), &x, &fp, seed, exact)?;
    report.steps.push(step);
    let Some(cubic) = cubic else {
        return Ok(report.inconclusive("the image cubic was not determined exactly"));
    };
    let candidates: Vec<Vec<BigRational>> = input
        .hints
        .singular_points
        .iter()
        .filter(|p| !(l.eval_unchecked(p).is_zero() && q.eval_unchecked(p).is_zero()))
        .filter_map(|p| apply_q(&map, p))
        .collect();
    let mut maps = vec![map];
    finish_on_cubic(&mut report, &mut maps, &input.equation, &cubic, &candidates, &fp, seed, exact)?;
    Ok(report)
}
