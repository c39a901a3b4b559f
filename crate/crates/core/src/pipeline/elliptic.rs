//! Quartics with an elliptic double point in one of two normal forms:
//!
//! - type 1: `x0^2 x1^2 + x0 x1 Q2(x2, x3) + F4(x1, x2, x3)`
//! - type 2: `x0^2 x1^2 + x0 (x2^3 + x1 Q2) + F4(x1, x2, x3)`
//!
//! up to scalars and linear changes fixing `e_0`. Quadrics with a weighted
//! order condition at `e_0` give `P^3 ⇢ P^6` (type 1) or `P^5` (type 2).
//! The type-1 image is a quadric section of the cone `P(1,1,1,2)`; a node
//! of the image is projected away, then two general points, reaching a
//! quartic double along a line.

use num_rational::BigRational;
use num_traits::Zero;

use super::common::{
    fmt_point, fp_point, move_point_to_e0, point_multiplicity, qi, record_fit, reduce_map, samples_for,
    CoordinateChange,
};
use super::double_line::{linear_map, linearize_double_line_fp, quadric_rank, surface_injectivity};
use super::monoid::INJECTIVITY_TRIALS;
use super::{CaseLabel, CaseReport, FieldMode, Status, Step, StepMap, SurfaceInput};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::gcd::gcd_over_field;
use crate::linsys::{solve_system, CurveParam, LinearCondition, LinearSystemBasis};
use crate::maps::{
    birationality_certificate, fit_inverse_exact, image_degree_estimate, projection_matrix, push_forward,
    random_point, sample_rational_surface, Domain, MapValue, RationalMap,
};
use crate::matrix::Matrix;
use crate::poly::{FpPoly, Polynomial, QPoly};
use crate::threshold::{corollary_certificate, PicardModel};
use crate::univariate;

pub const TYPE1_WEIGHTS: [u32; 3] = [2, 1, 1];
pub const TYPE2_WEIGHTS: [u32; 3] = [3, 2, 1];

/// The weighted-order system at `e_0` in normal-form coordinates.
#[derive(Clone, Debug)]
pub struct LambdaA {
    pub a: u32,
    pub weights: Vec<u32>,
    pub order: u32,
    pub system: LinearSystemBasis<Rationals>,
}

fn var(i: usize) -> QPoly {
    Polynomial::var(Rationals, 4, i)
}

/// Quadrics of weighted order at least `a + 1` at `e_0`. Type 1 must give
/// seven quadrics; type 2 six, inside the type-1 system with codimension one.
pub fn build_lambda_a(a: u32, weights: Option<&[u32]>) -> Result<LambdaA> {
    let (default, order, expected) = match a {
        1 => (TYPE1_WEIGHTS, 2, 7),
        2 => (TYPE2_WEIGHTS, 3, 6),
        _ => return Err(Error::Usage(format!("elliptic type must be 1 or 2, got {a}"))),
    };
    let weights = weights.map(<[u32]>::to_vec).unwrap_or_else(|| default.to_vec());
    let e0 = vec![qi(1), qi(0), qi(0), qi(0)];
    let cond = LinearCondition::ValuationOrder { center: e0, weights: weights.clone(), m: order };
    let system = solve_system(&Rationals, 4, 2, &[cond])?;
    if system.len() != expected {
        return Err(Error::Contract(format!(
            "weighted quadrics of type {a}: expected {expected} forms, found {}",
            system.len()
        )));
    }
    if a == 2 {
        let l1 = build_lambda_a(1, None)?;
        if system.codim_in(&l1.system) != Some(1) {
            return Err(Error::Contract("the type-2 system is not a hyperplane in the type-1 system".into()));
        }
    }
    Ok(LambdaA { a, weights, order, system })
}

/// `Some(lambda, l)` with `q = lambda l^2` for a linear form `l`.
fn square_root_of_quadric(q: &QPoly) -> Option<(BigRational, QPoly)> {
    let k = (0..4).find(|&k| !q.coefficient(&crate::poly::Monomial::new(unit2(k))).is_zero())?;
    let alpha = q.coefficient(&crate::poly::Monomial::new(unit2(k)));
    let lt = q.partial(k).ok()?;
    // lt = 2 alpha l with l normalized to have coefficient one at x_k
    let l = lt.scale(&(qi(1) / (&alpha * qi(2))));
    ((&l * &l).scale(&alpha) == *q).then_some((alpha, l))
}

fn unit2(k: usize) -> Vec<u32> {
    let mut e = vec![0; 4];
    e[k] = 2;
    e
}

/// A linear change on `x1..x3` sending `x_target` to the linear form `l`
/// (so `l` becomes the coordinate `x_target`).
fn change_making_coordinate(l: &QPoly, target: usize, keep: &[usize]) -> Result<CoordinateChange> {
    // new coordinates x' with x'_target = l(x), others unchanged; A is the
    // inverse of that substitution
    let coeffs: Vec<BigRational> = (0..4).map(|i| l.coefficient(&crate::poly::Monomial::var(4, i))).collect();
    let Some(pivot) = (1..4).filter(|i| !keep.contains(i)).find(|&i| !coeffs[i].is_zero()) else {
        return Err(Error::Contract("linear form does not involve the free coordinates".into()));
    };
    // x' = B x where B is the identity with row `target` replaced by l;
    // reorder so that the pivot variable is replaced
    let mut b: Vec<Vec<BigRational>> = (0..4)
        .map(|r| (0..4).map(|c| if r == c { qi(1) } else { qi(0) }).collect())
        .collect();
    if pivot != target {
        b.swap(pivot, target);
    }
    b[target] = coeffs;
    let inv = Matrix::from_rows(Rationals, 4, b)?
        .inverse()?
        .ok_or_else(|| Error::Inconsistent("singular coordinate change".into()))?;
    CoordinateChange::new(
        (0..4).map(|i| inv.row(i).to_vec()).collect(),
        format!("x{target}' = {}", l),
    )
}

/// Compose two changes: first `a` then `b` (so `x = A B x''`).
fn then(a: &CoordinateChange, b: &CoordinateChange) -> Result<CoordinateChange> {
    let am = Matrix::from_rows(Rationals, 4, a.matrix.clone())?;
    let bm = Matrix::from_rows(Rationals, 4, b.matrix.clone())?;
    let m = am.mul(&bm)?;
    CoordinateChange::new(
        (0..4).map(|i| m.row(i).to_vec()).collect(),
        format!("{}; {}", a.description, b.description),
    )
}

/// Cube root of a binary cubic in `x2, x3` (other variables absent).
fn linear_cube_root(c: &QPoly) -> Option<QPoly> {
    if c.degree() != Some(3) {
        return None;
    }
    let g = gcd_over_field(&[c.clone(), c.partial(2).ok()?, c.partial(3).ok()?]).ok()?;
    if g.degree() != Some(2) {
        return None;
    }
    let m = c.exact_div(&g).ok()??;
    let m3 = m.pow(3);
    // c = kappa m^3
    let (lead, coef) = m3.leading_term()?;
    let kappa = c.coefficient(lead) / coef;
    (m3.scale(&kappa) == *c).then_some(m)
}

/// Detect a normal form at a double point: returns the type and the
/// coordinate change putting the point at `e_0` with the distinguished
/// coordinates in place.
pub fn match_elliptic_normal_form(input: &SurfaceInput) -> Result<Option<(u32, CoordinateChange)>> {
    let s = &input.equation;
    if s.degree() != Some(4) {
        return Ok(None);
    }
    let mut candidates: Vec<Vec<BigRational>> = input.hints.singular_points.clone();
    for i in 0..4 {
        let mut e = vec![qi(0); 4];
        e[i] = qi(1);
        candidates.push(e);
    }
    for p in candidates {
        if point_multiplicity(s, &p) != 2 {
            continue;
        }
        let c0 = move_point_to_e0(&p)?;
        let moved = c0.pull(s)?;
        if moved.degree_in(0) != Some(2) {
            continue;
        }
        let parts = moved.coefficients_in(0);
        let Some((_, l)) = square_root_of_quadric(&parts[2]) else { continue };
        let c1 = change_making_coordinate(&l, 1, &[])?;
        let change = then(&c0, &c1)?;
        let moved = change.pull(s)?;
        let parts = moved.coefficients_in(0);
        let cubic = &parts[1];
        let x1 = var(1);
        let (_, rem) = cubic.div_rem(&x1)?;
        if cubic.is_zero() || rem.is_zero() {
            return Ok(Some((1, change)));
        }
        // type 2: the cubic restricted to x1 = 0 is a cube
        let restricted = rem;
        if let Some(m) = linear_cube_root(&restricted) {
            let c2 = change_making_coordinate(&m, 2, &[1])?;
            return Ok(Some((2, then(&change, &c2)?)));
        }
    }
    Ok(None)
}

fn mode_note(report: &mut CaseReport, input: &SurfaceInput) {
    if input.options.mode == super::Mode::Exact {
        report.note("the elliptic chain runs in certificate mode over F_p after its first step");
    }
}

/// Elliptic double point of type `a`.
pub fn linearize_elliptic(input: &SurfaceInput, a: u32) -> Result<CaseReport> {
    let label = if a == 1 { CaseLabel::EllipticType1 } else { CaseLabel::EllipticType2 };
    let mut report = CaseReport::new(input, label, FieldMode::CertificateFp);
    mode_note(&mut report, input);
    let Some((found, change)) = match_elliptic_normal_form(input)? else {
        return Err(Error::Contract("no elliptic normal form was matched at any candidate double point".into()));
    };
    if found != a {
        return Err(Error::Contract(format!("the normal form is of type {found}, not {a}")));
    }
    report.coordinate_changes.push(change.clone());
    let lambda = build_lambda_a(a, input.hints.valuation_weights.as_deref())?;
    let forms = change.push_forms(&lambda.system.basis)?;
    let phi = RationalMap::new(forms)?.normalize()?;
    let fp = input.prime_field();
    let seed = input.options.seed;
    let s = &input.equation;
    let target = phi.target_dim() + 1;
    let mut step = Step::new("weighted_quadrics", StepMap::Q(phi.clone()));
    step.check(
        "system_dimension",
        true,
        format!("{} quadrics, weights {:?}, order {}", lambda.system.len(), lambda.weights, lambda.order),
    );
    let phi_fp = reduce_map(&phi, &fp)?;
    let inv = fit_inverse_exact(&phi, 2, seed)?.map(|i| i.degree);
    let cert = birationality_certificate(&phi_fp, Domain::Projective, INJECTIVITY_TRIALS, seed, inv)?;
    step.check(
        "injectivity",
        cert.collisions == 0 && cert.full_rank_samples == cert.trials,
        format!("{} trials, {} collisions, inverse degree {:?}", cert.trials, cert.collisions, inv),
    );
    step.injectivity = Some(cert);
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed ^ 0xe1);
    let ambient: Vec<Vec<u64>> = (0..samples_for(target, 2) + 20).map(|_| random_point(&fp, 4, &mut rng)).collect();
    let x_pts = push_forward(&phi_fp, &ambient)?;
    let x_quadrics = record_fit(&mut step, "threefold_quadrics", &fp, &x_pts, target, 2)?;
    step.check("threefold_quadrics", true, format!("{} quadrics vanish on the image of P^3", x_quadrics.len()));
    let want = input.options.samples.max(samples_for(4, 10));
    let surf = sample_rational_surface(s, &fp, want, seed ^ 0xe2, |p| p[1..].iter().any(|&c| c != 0))?;
    let s1 = push_forward(&phi_fp, &surf.points)?;
    let expected = if a == 1 { 8 } else { 6 };
    let est = image_degree_estimate(&fp, &s1, target, 2, 10, seed);
    let deg = est.as_ref().map(|e| e.degree).ok();
    step.image_degree = deg;
    let deg_ok = step.check(
        "image_degree",
        deg == Some(expected),
        format!("expected {expected}, estimated {deg:?}"),
    );
    surface_injectivity(&mut step, &phi_fp, &surf, seed)?;
    let ok = step.all_passed();
    report.steps.push(step);
    if !ok {
        let why = if deg_ok {
            "the weighted-quadric step failed a check".to_string()
        } else {
            format!(
                "degree ledger mismatch at the weighted-quadric step: expected image degree {expected}, found {deg:?}; \
                 the chain stops here"
            )
        };
        return Ok(report.inconclusive(why));
    }
    if a == 2 {
        return Ok(report.inconclusive("the type-2 chain beyond the first step is not implemented"));
    }
    // the node of S1: images of hinted singular points away from the elliptic point
    let e0 = change.matrix.iter().map(|r| r[0].clone()).collect::<Vec<_>>();
    let node = input
        .hints
        .singular_points
        .iter()
        .filter(|p| !crate::maps::projectively_equal(&Rationals, p, &e0))
        .find_map(|p| match phi.apply(p) {
            Ok(MapValue::Point(v)) => Some((p.clone(), v)),
            _ => None,
        });
    let Some((node_src, y)) = node else {
        let cert = corollary_certificate(&PicardModel::by_name("wps1112")?, &[Rationals.from_i64(4)])?;
        report.note("no singular point of the image found (immersion checked at samples); good model on P(1,1,1,2)");
        report.status = if cert.certifies_ce_to_plane { Status::CertifiedByCorollary } else { Status::Inconclusive };
        report.final_cert.rho_certificate = Some(cert);
        return Ok(report);
    };
    report.note(format!("node {} maps to {}", fmt_point(&node_src), fmt_point(&y)));
    // step 2: projection from the node, over Q
    let rows = projection_matrix(&Rationals, &y, target)?;
    let proj = RationalMap::new(rows.iter().map(|r| Polynomial::linear(Rationals, r)).collect())?;
    let mut step = Step::new("projection_from_node", StepMap::Q(proj.clone()));
    let proj_fp = reduce_map(&proj, &fp)?;
    let yf = fp_point(&fp, &y).ok_or_else(|| Error::Usage("node degenerates mod p".into()))?;
    let x2 = push_forward(&proj_fp, &x_pts)?;
    let q2 = record_fit(&mut step, "threefold_quadrics", &fp, &x2, target - 1, 2)?;
    step.check("threefold_quadrics", q2.len() == 3, format!("{} quadrics", q2.len()));
    let s2 = push_forward(&proj_fp, &s1)?;
    degree_check(&mut step, &fp, &s2, target - 1, 6, seed);
    let comp2 = phi_fp.compose_projection(&yf)?;
    surface_injectivity(&mut step, &comp2, &surf, seed ^ 1)?;
    let ok = step.all_passed();
    report.steps.push(step);
    if !ok {
        return Ok(report.inconclusive("projection from the node failed a check"));
    }
    // step 3: a general point of S2
    let g1 = s2[0].clone();
    let proj3 = linear_map(&fp, &projection_matrix(&fp, &g1, target - 1)?)?;
    let mut step = Step::new("projection_from_general_point", StepMap::Fp(proj3.clone()));
    let x3 = push_forward(&proj3, &x2)?;
    let q3 = record_fit(&mut step, "threefold_quadrics", &fp, &x3, target - 2, 2)?;
    let rank_ok = q3.len() == 1 && quadric_rank(&q3[0]) == 4;
    step.check("rank4_quadric", rank_ok, format!("{} quadrics, rank {:?}", q3.len(), q3.first().map(quadric_rank)));
    let s3: Vec<Vec<u64>> = push_forward(&proj3, &s2[1..])?;
    degree_check(&mut step, &fp, &s3, target - 2, 5, seed);
    let comp3 = comp2.compose_projection(&g1)?;
    surface_injectivity(&mut step, &comp3, &surf, seed ^ 2)?;
    let ok = step.all_passed();
    report.steps.push(step);
    if !ok {
        return Ok(report.inconclusive("projection from a general point failed a check"));
    }
    // step 4: a general point of the quintic, onto a quartic of P^3
    let g2 = s3[0].clone();
    let proj4 = linear_map(&fp, &projection_matrix(&fp, &g2, target - 2)?)?;
    let mut step = Step::new("projection_to_quartic", StepMap::Fp(proj4.clone()));
    let s4: Vec<Vec<u64>> = push_forward(&proj4, &s3[1..])?;
    let quartic = record_fit(&mut step, "image_degree_4", &fp, &s4, 4, 4)?;
    degree_check(&mut step, &fp, &s4, 4, 4, seed);
    let comp4 = comp3.compose_projection(&g2)?;
    surface_injectivity(&mut step, &comp4, &surf, seed ^ 3)?;
    let ok = step.all_passed() && quartic.len() == 1 && rank_ok;
    report.steps.push(step);
    if !ok {
        return Ok(report.inconclusive("projection to the quartic failed a check"));
    }
    let quartic = quartic[0].clone();
    // the double line passes through the image of the vertex and lies in
    // the image of the tangent hyperplane at the projection center
    let Some(line) = find_double_line(&quartic, &q3[0], &g2, &fp, seed)? else {
        return Ok(report.inconclusive("no double line of the quartic image was found"));
    };
    report.note("the quartic image is double along a line; continuing with the double-line construction");
    let out = linearize_double_line_fp(&quartic, &line, &[], input.options.samples, seed ^ 0x44)?;
    report.steps.extend(out.steps);
    report.status = out.status;
    report.final_cert = out.final_cert;
    report.notes.extend(out.notes);
    Ok(report)
}

fn degree_check(step: &mut Step, fp: &PrimeField, pts: &[Vec<u64>], nvars: usize, expected: u32, seed: u64) -> bool {
    match image_degree_estimate(fp, pts, nvars, 2, expected + 1, seed) {
        Ok(e) => {
            step.image_degree = Some(e.degree);
            step.check("image_degree", e.degree == expected, format!("expected {expected}, estimated {}", e.degree))
        }
        Err(err) => step.check("image_degree", false, format!("expected {expected}: {err}")),
    }
}

/// A line through `o` in the plane spanned by `o, r0, r1` along which every
/// partial derivative of `quartic` vanishes.
fn singular_line_in_pencil(
    quartic: &FpPoly,
    o: &[u64],
    r0: &[u64],
    r1: &[u64],
    seed: u64,
) -> Result<Option<CurveParam<PrimeField>>> {
    let fp = *quartic.field();
    // ring (a, b) for the point a o + b r, with r = lam r0 + mu r1 handled by
    // scanning the pencil parameter through a gcd of binary forms in (lam, mu)
    let grads = quartic.gradient();
    let lam = Polynomial::var(fp, 4, 0);
    let mu = Polynomial::var(fp, 4, 1);
    let a = Polynomial::var(fp, 4, 2);
    let b = Polynomial::var(fp, 4, 3);
    let pt: Vec<FpPoly> = (0..4)
        .map(|k| {
            let r = &lam.scale(&r0[k]) + &mu.scale(&r1[k]);
            &a.scale(&o[k]) + &(&b * &r)
        })
        .collect();
    let mut coeffs: Vec<FpPoly> = Vec::new();
    for g in &grads {
        let sub = g.substitute(&pt)?;
        for ca in sub.coefficients_in(2) {
            for cb in ca.coefficients_in(3) {
                if !cb.is_zero() {
                    coeffs.push(cb.restrict_vars(2)?);
                }
            }
        }
    }
    if coeffs.is_empty() {
        return Ok(None);
    }
    let g = gcd_over_field(&coeffs)?;
    if g.is_constant() {
        return Ok(None);
    }
    let d = g.degree().unwrap_or(0);
    let c: Vec<u64> = (0..=d)
        .map(|k| g.coefficient(&crate::poly::Monomial::new(vec![d - k, k])))
        .collect();
    for (l, m) in univariate::binary_form_roots(&fp, &c, seed)? {
        let r: Vec<u64> = (0..4).map(|k| fp.add(&fp.mul(&l, &r0[k]), &fp.mul(&m, &r1[k]))).collect();
        let Ok(line) = CurveParam::line_through(&fp, o, &r) else { continue };
        if grads.iter().all(|gr| line.pullback(gr).map(|p| p.is_zero()).unwrap_or(false)) {
            return Ok(Some(line));
        }
    }
    Ok(None)
}

/// The double line of the quartic obtained by projecting the quintic in a
/// rank-4 quadric `q` of `P^4` from its point `y`.
fn find_double_line(
    quartic: &FpPoly,
    q: &FpPoly,
    y: &[u64],
    fp: &PrimeField,
    seed: u64,
) -> Result<Option<CurveParam<PrimeField>>> {
    // vertex of q: kernel of its symmetric matrix
    let n = q.nvars();
    let hess: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let qi = q.partial(i).expect("index");
            (0..n).map(|j| qi.partial(j).expect("index").constant_term()).collect()
        })
        .collect();
    let kernel = Matrix::from_rows(*fp, n, hess)?.nullspace();
    if kernel.len() != 1 {
        return Ok(None);
    }
    let v = &kernel[0];
    let proj = projection_matrix(fp, y, n)?;
    let apply = |p: &[u64]| -> Vec<u64> { proj.iter().map(|r| crate::matrix::dot(fp, r, p)).collect() };
    let o = apply(v);
    if o.iter().all(|&c| c == 0) {
        return Ok(None);
    }
    // tangent hyperplane of q at y
    let normal: Vec<u64> = q.gradient().iter().map(|g| g.eval_unchecked(y)).collect();
    let tangent = Matrix::from_rows(*fp, n, vec![normal])?.nullspace();
    let imgs: Vec<Vec<u64>> = tangent.iter().map(|t| apply(t)).filter(|p| p.iter().any(|&c| c != 0)).collect();
    // two points completing o to a basis of the plane
    let mut basis: Vec<Vec<u64>> = vec![o.clone()];
    for p in imgs {
        let mut trial = basis.clone();
        trial.push(p.clone());
        if crate::matrix::rank_of(fp, &trial, 4) == trial.len() {
            basis.push(p);
        }
        if basis.len() == 3 {
            break;
        }
    }
    if basis.len() != 3 {
        return Ok(None);
    }
    singular_line_in_pencil(quartic, &o, &basis[1], &basis[2], seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_dimensions() {
        assert_eq!(build_lambda_a(1, None).unwrap().system.len(), 7);
        assert_eq!(build_lambda_a(2, None).unwrap().system.len(), 6);
        assert!(matches!(build_lambda_a(1, Some(&[1, 1, 1])), Err(Error::Contract(_))));
    }
}
