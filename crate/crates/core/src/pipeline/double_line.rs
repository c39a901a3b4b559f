//! Quartics double along a line, in certificate mode over `F_p`.
//!
//! Quadrics through the line `l` and a point `x` of the surface map `P^3`
//! onto `P^1 x P^2 ⊂ P^5` and the surface onto a surface of degree 7.
//! Singular points of the image are projected away one at a time: first
//! onto a quintic in a rank-4 quadric of `P^4`, then onto a cubic.

use super::common::{point_multiplicity, record_fit, reduce_curve, samples_for, smooth_at_samples};
use super::monoid::INJECTIVITY_TRIALS;
use super::{CaseLabel, CaseReport, FieldMode, FinalCertificate, Mode, Status, Step, StepMap, SurfaceInput};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::linsys::{solve_system, CurveLabel, CurveParam, LinearCondition};
use crate::maps::{
    birationality_certificate, image_degree_estimate, projection_matrix, projectively_equal, push_forward,
    random_point, sample_surface_points, Domain, MapValue, RationalMap, SampledSurface,
};
use crate::matrix::{rank_of, Matrix};
use crate::poly::{FpPoly, Polynomial};
use crate::threshold::{corollary_certificate, PicardModel};

/// Steps and verdict of a certificate-mode run.
#[derive(Clone, Debug)]
pub struct DlOutcome {
    pub steps: Vec<Step>,
    pub status: Status,
    pub final_cert: FinalCertificate,
    pub notes: Vec<String>,
}

impl DlOutcome {
    fn fail(mut self, why: impl Into<String>) -> Self {
        self.status = Status::Inconclusive;
        self.notes.push(why.into());
        self
    }
}

fn on_line(fp: &PrimeField, line: &CurveParam<PrimeField>, p: &[u64]) -> bool {
    let a = line.point(&1, &0);
    let b = line.point(&0, &1);
    rank_of(fp, &[a, b, p.to_vec()], p.len()) <= 2
}

/// Rank of the symmetric matrix of a quadric.
pub(crate) fn quadric_rank(q: &FpPoly) -> usize {
    let fp = *q.field();
    let n = q.nvars();
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let qi = q.partial(i).expect("index");
            (0..n).map(|j| qi.partial(j).expect("index").constant_term()).collect()
        })
        .collect();
    Matrix::from_rows(fp, n, rows).expect("shape").rank()
}

pub(crate) fn linear_map(fp: &PrimeField, rows: &[Vec<u64>]) -> Result<RationalMap<PrimeField>> {
    RationalMap::new(rows.iter().map(|r| Polynomial::linear(*fp, r)).collect())
}

/// Injectivity and immersion of the composed map on surface samples.
pub(crate) fn surface_injectivity(step: &mut Step, composed: &RationalMap<PrimeField>, surf: &SampledSurface, seed: u64) -> Result<()> {
    let cert = birationality_certificate(composed, Domain::Surface(surf), 200, seed, None)?;
    step.check(
        "surface_injectivity",
        cert.collisions == 0 && cert.full_rank_samples == cert.trials,
        format!(
            "{} pairs on the surface, {} collisions, immersive at {} samples",
            cert.trials, cert.collisions, cert.full_rank_samples
        ),
    );
    if step.injectivity.is_none() {
        step.injectivity = Some(cert);
    }
    Ok(())
}

fn degree_check(step: &mut Step, fp: &PrimeField, pts: &[Vec<u64>], nvars: usize, dim: usize, expected: u32, what: &str, seed: u64) -> bool {
    match image_degree_estimate(fp, pts, nvars, dim, expected + 1, seed) {
        Ok(e) => {
            if dim == 2 {
                step.image_degree = Some(e.degree);
            }
            step.check(what, e.degree == expected, format!("expected {expected}, estimated {}", e.degree))
        }
        Err(err) => step.check(what, false, format!("expected {expected}: {err}")),
    }
}

/// Images of the singular points under `map`, skipping base points.
fn images(map: &RationalMap<PrimeField>, pts: &[Vec<u64>]) -> Vec<Vec<u64>> {
    pts.iter()
        .filter_map(|p| match map.apply(p) {
            Ok(MapValue::Point(v)) => Some(crate::maps::normalize_point(map.field(), &v)),
            _ => None,
        })
        .collect()
}

fn corollary(out: &mut DlOutcome, model: &str, class: &[i64], why: &str) -> Result<()> {
    let class: Vec<_> = class.iter().map(|&c| Rationals.from_i64(c)).collect();
    let cert = corollary_certificate(&PicardModel::by_name(model)?, &class)?;
    out.notes.push(why.into());
    out.status = if cert.certifies_ce_to_plane {
        Status::CertifiedByCorollary
    } else {
        Status::Inconclusive
    };
    out.final_cert.rho_certificate = Some(cert);
    Ok(())
}

/// Run the double-line chain on a quartic over `F_p`.
pub fn linearize_double_line_fp(
    s: &FpPoly,
    line: &CurveParam<PrimeField>,
    singular: &[Vec<u64>],
    samples: usize,
    seed: u64,
) -> Result<DlOutcome> {
    let fp = *s.field();
    let mut out = DlOutcome {
        steps: Vec::new(),
        status: Status::Inconclusive,
        final_cert: FinalCertificate::default(),
        notes: Vec::new(),
    };
    let singular: Vec<Vec<u64>> = singular.iter().filter(|p| !on_line(&fp, line, p)).cloned().collect();
    let n_surf = samples.max(samples_for(4, 8));
    let surf = sample_surface_points(s, n_surf + 1, seed ^ 0xd1, |p| {
        !on_line(&fp, line, p) && !singular.iter().any(|q| projectively_equal(&fp, p, q))
    })?;
    let x = surf.points[0].clone();
    let surf = SampledSurface {
        points: surf.points[1..].to_vec(),
        ..surf
    };
    let conds = [
        LinearCondition::CurveMultiplicity { curve: line.clone(), m: 1 },
        LinearCondition::PointMultiplicity { point: x.clone(), m: 1 },
    ];
    let sys = solve_system(&fp, 4, 2, &conds)?;
    if sys.len() != 6 {
        return Ok(out.fail(format!("quadrics through the line and a point: dimension {}", sys.projective_dim)));
    }
    let phi = RationalMap::new(sys.basis)?.normalize()?;
    let mut step = Step::new("quadrics_through_line_and_point", StepMap::Fp(phi.clone()));
    // the image threefold: P^1 x P^2 in its Segre embedding
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed ^ 0xd2);
    let ambient: Vec<Vec<u64>> = (0..200).map(|_| random_point(&fp, 4, &mut rng)).collect();
    let z_pts = push_forward(&phi, &ambient)?;
    let z_quadrics = record_fit(&mut step, "threefold_quadrics", &fp, &z_pts, 6, 2)?;
    step.check("segre_quadrics", z_quadrics.len() == 3, format!("{} quadrics vanish on the image of P^3", z_quadrics.len()));
    degree_check(&mut step, &fp, &z_pts, 6, 3, 3, "threefold_degree", seed);
    let cert = birationality_certificate(&phi, Domain::Projective, INJECTIVITY_TRIALS, seed, None)?;
    step.check(
        "injectivity",
        cert.collisions == 0 && cert.full_rank_samples == cert.trials,
        format!("{} trials, {} collisions", cert.trials, cert.collisions),
    );
    step.injectivity = Some(cert);
    let s1 = push_forward(&phi, &surf.points)?;
    degree_check(&mut step, &fp, &s1, 6, 2, 7, "image_degree", seed);
    surface_injectivity(&mut step, &phi, &surf, seed)?;
    let ok = step.all_passed();
    out.steps.push(step);
    if !ok {
        return Ok(out.fail("the first double-line step failed a check"));
    }
    let sing1 = images(&phi, &singular);
    let Some(y) = sing1.first().cloned() else {
        corollary(
            &mut out,
            "p1xp2",
            &[3, 2],
            "no singular point of the degree-7 image found (immersion checked at samples); good model on P^1 x P^2",
        )?;
        return Ok(out);
    };
    // project from the singular point y
    let proj_y = linear_map(&fp, &projection_matrix(&fp, &y, 6)?)?;
    let mut step = Step::new("projection_from_singular_point", StepMap::Fp(proj_y.clone()));
    let z2 = push_forward(&proj_y, &z_pts)?;
    let q4 = record_fit(&mut step, "threefold_quadrics", &fp, &z2, 5, 2)?;
    let rank_ok = q4.len() == 1 && quadric_rank(&q4[0]) == 4;
    step.check("rank4_quadric", rank_ok, format!("{} quadrics, rank {:?}", q4.len(), q4.first().map(quadric_rank)));
    let s2 = push_forward(&proj_y, &s1)?;
    degree_check(&mut step, &fp, &s2, 5, 2, 5, "image_degree", seed);
    let comp2 = phi.compose_projection(&y)?;
    surface_injectivity(&mut step, &comp2, &surf, seed ^ 1)?;
    let ok = step.all_passed();
    out.steps.push(step);
    if !ok {
        return Ok(out.fail("projection from the singular point failed a check"));
    }
    let sing2: Vec<Vec<u64>> = images(&proj_y, &sing1[1..]);
    let Some(z) = sing2.first().cloned() else {
        corollary(
            &mut out,
            "quadric-cone-q4",
            &[3, -1],
            "no further singular point found; the quintic in the rank-4 quadric is a good model",
        )?;
        return Ok(out);
    };
    let proj_z = linear_map(&fp, &projection_matrix(&fp, &z, 5)?)?;
    let mut step = Step::new("projection_to_cubic", StepMap::Fp(proj_z.clone()));
    let s3 = push_forward(&proj_z, &s2)?;
    let cubic = record_fit(&mut step, "image_degree_3", &fp, &s3, 4, 3)?;
    degree_check(&mut step, &fp, &s3, 4, 2, 3, "image_degree", seed);
    let comp3 = comp2.compose_projection(&z)?;
    surface_injectivity(&mut step, &comp3, &surf, seed ^ 2)?;
    let ok = step.all_passed() && cubic.len() == 1;
    out.steps.push(step);
    if !ok {
        return Ok(out.fail("projection to the cubic failed a check"));
    }
    let cubic = &cubic[0];
    let sing3 = images(&proj_z, &sing2[1..]);
    if let Some(w) = sing3.iter().find(|w| point_multiplicity(cubic, w) == 2).cloned() {
        // projection from a double point onto a plane, padded to P^3
        let mut rows = projection_matrix(&fp, &w, 4)?;
        rows.push(vec![0; 4]);
        let proj_w = linear_map(&fp, &rows)?;
        let mut step = Step::new("projection_from_double_point", StepMap::Fp(proj_w.clone()));
        let comp4 = comp3.compose_projection(&w)?;
        surface_injectivity(&mut step, &comp4, &surf, seed ^ 3)?;
        let held = s3.len();
        let ok = step.all_passed();
        out.steps.push(step);
        if ok {
            out.status = Status::Certified;
            out.final_cert.plane_form = Some("y3".into());
            out.final_cert.verified_samples = held;
        } else {
            return Ok(out.fail("projection from the double point of the cubic failed"));
        }
        return Ok(out);
    }
    let smooth = smooth_at_samples(cubic, &s3);
    if smooth != s3.len() {
        return Ok(out.fail("the cubic is singular at a sample; no double point is known"));
    }
    corollary(&mut out, "p3", &[3], "the cubic has no singular point at the samples; good model (P^3, 3H)")?;
    Ok(out)
}

/// A line hint as a parametrization.
fn line_param(input: &SurfaceInput) -> Result<CurveParam<Rationals>> {
    let c = input
        .hints
        .singular_curves
        .iter()
        .find(|c| c.degree() == Some(1))
        .ok_or_else(|| Error::Contract("no singular line hint".into()))?;
    if let Some(p) = &c.param {
        return Ok(p.clone());
    }
    let rows: Vec<Vec<_>> = c
        .equations
        .iter()
        .filter(|e| e.degree() == Some(1))
        .map(|e| (0..4).map(|i| e.coefficient(&crate::poly::Monomial::var(4, i))).collect())
        .collect();
    let kernel = Matrix::from_rows(Rationals, 4, rows)?.nullspace();
    if kernel.len() != 2 {
        return Err(Error::HintRejected("line equations do not cut out a line".into()));
    }
    CurveParam::line_through(&Rationals, &kernel[0], &kernel[1]).inspect(|l| {
        debug_assert_eq!(l.label(), CurveLabel::Line);
    })
}

/// Double-line case, always run in certificate mode.
pub fn linearize_double_line(input: &SurfaceInput) -> Result<CaseReport> {
    let mut report = CaseReport::new(input, CaseLabel::DoubleLine, FieldMode::CertificateFp);
    if input.options.mode == Mode::Exact {
        report.note("the double-line construction runs in certificate mode over F_p");
    }
    let line = line_param(input)?;
    let fp = input.prime_field();
    // a line given by equations was not checked against the singular locus yet
    for f in std::iter::once(&input.equation).chain(input.equation.gradient().iter()) {
        if !line.pullback(f)?.is_zero() {
            return Err(Error::HintRejected("the line is not contained in the singular locus".into()));
        }
    }
    let s = input.reduced()?;
    let line_fp = reduce_curve(&line, &fp)?;
    let singular: Vec<Vec<u64>> = input
        .hints
        .singular_points
        .iter()
        .filter_map(|p| super::common::fp_point(&fp, p))
        .collect();
    let out = linearize_double_line_fp(&s, &line_fp, &singular, input.options.samples, input.options.seed)?;
    report.steps = out.steps;
    report.status = out.status;
    report.final_cert = out.final_cert;
    report.notes.extend(out.notes);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pipeline::Status;

    fn fp() -> PrimeField {
        PrimeField::new(10007).unwrap()
    }

    #[test]
    fn quadric_ranks() {
        let f = fp();
        let r = |src: &str| quadric_rank(&fixtures::parse_x(src).unwrap().reduce(&f).unwrap());
        assert_eq!(r("x0*x1 - x2*x3"), 4);
        assert_eq!(r("x0*x1 - x2^2"), 3);
        assert_eq!(r("x0^2 + 2*x0*x1 + x1^2"), 1);
    }

    #[test]
    fn points_on_a_line() {
        let f = fp();
        let line = CurveParam::line_through(&f, &[1, 0, 0, 0], &[0, 1, 0, 0]).unwrap();
        assert!(on_line(&f, &line, &[3, 5, 0, 0]));
        assert!(!on_line(&f, &line, &[3, 5, 1, 0]));
    }

    #[test]
    fn segre_route_ends_on_p1_x_p2() {
        let r = linearize_double_line(&fixtures::double_line().unwrap()).unwrap();
        assert_eq!(r.status, Status::CertifiedByCorollary);
        let cert = r.final_cert.rho_certificate.unwrap();
        assert_eq!(cert.model, "p1xp2");
        assert_eq!(cert.rho, "2/3");
        let step = &r.steps[0];
        assert_eq!(step.map.target_dim(), 5);
        assert_eq!(step.image_degree, Some(7));
    }

}
