//! Quartics double along a conic of the shape `a (c^2 + L^2 q)`, where
//! `L = 0` is the plane of the conic.
//!
//! With an extra node `p`, a quadric `Q` through the conic and `p` cuts the
//! surface in the doubled conic plus a residual quartic `R` nodal at `p`.
//! Quartics singular along the conic and at `p`, through `R` and one more
//! point of the surface, map the surface onto a plane.

use num_rational::BigRational;
use num_traits::Zero;

use super::common::{conic_equations, find_rational_points, fmt_point, fp_point, qi, reduce_map, system_with_dim};
use super::double_conic::{general_rational_point, linearize_double_conic};
use super::monoid::{conclude_plane, image_plane, INJECTIVITY_TRIALS};
use super::{CaseLabel, CaseReport, FieldMode, Mode, SingularCurve, Status, Step, StepMap, SurfaceInput};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::gcd::gcd_over_field;
use crate::linsys::{ideal_membership_certificate, solve_system, CurveLabel, CurveParam, LinearCondition};
use crate::maps::{
    birationality_certificate, fit_image_forms, fit_inverse_exact, push_forward, random_point, sample_rational_surface,
    Domain, RationalMap,
};
use crate::poly::{FpPoly, Polynomial, QPoly};
use crate::resultant::resultant;
use crate::univariate;

/// `S = scale * (c^2 + L^2 q)` with `c` a quadric through the conic.
#[derive(Clone, Debug)]
pub struct CyclideData {
    pub plane: QPoly,
    pub conic_quadric: QPoly,
    pub c: QPoly,
    pub q: QPoly,
    pub scale: BigRational,
}

/// Decompose `s` against the conic `{l = 0, k = 0}`; `None` if `s` is not
/// of the required shape.
pub fn cyclide_decomposition(s: &QPoly, l: &QPoly, k: &QPoly) -> Result<Option<CyclideData>> {
    let Some(cof) = ideal_membership_certificate(s, &[l.clone(), k.clone()], 2)? else {
        return Ok(None);
    };
    // products are ordered l^2, l k, k^2
    let e = &cof[0];
    let b = &cof[1];
    let a = cof[2].constant_term();
    if a.is_zero() || !cof[2].is_constant() {
        return Ok(None);
    }
    let two_a = &a + &a;
    let c = k + &b.scale(&(qi(1) / &two_a));
    let q = &e.scale(&(qi(1) / &a)) - &(b * b).scale(&(qi(1) / (&two_a * &two_a)));
    let check = &(&c * &c) + &(&(l * l) * &q);
    if check.scale(&a) != *s {
        return Err(Error::Inconsistent("cyclide decomposition does not reproduce the surface".into()));
    }
    Ok(Some(CyclideData {
        plane: l.clone(),
        conic_quadric: k.clone(),
        c,
        q,
        scale: a,
    }))
}

/// Symmetric bilinear form of a quadric: `B(x, y)` with `B(x, x) = Q(x)`.
fn polar(qd: &QPoly, x: &[BigRational], y: &[QPoly]) -> Result<QPoly> {
    // B(x, y) = 1/2 sum_i x_i dQ/dx_i (y)
    let mut acc = Polynomial::zero(Rationals, y[0].nvars());
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let d = qd.partial(i)?.substitute(y)?;
        acc = &acc + &d.scale(xi);
    }
    Ok(acc.scale(&(qi(1) / qi(2))))
}

/// Parametrize the residual quartic `Q ∩ Q'` through its node `p`, using a
/// rational point on the conic of directions of the cone `Q' - mu Q`.
pub fn residual_curve_parametrization(
    qd: &QPoly,
    q2: &QPoly,
    p: &[BigRational],
) -> Result<Option<CurveParam<Rationals>>> {
    let gq: Vec<BigRational> = qd.gradient().iter().map(|g| g.eval_unchecked(p)).collect();
    let g2: Vec<BigRational> = q2.gradient().iter().map(|g| g.eval_unchecked(p)).collect();
    let Some(i) = gq.iter().position(|c| !c.is_zero()) else {
        return Ok(None);
    };
    let mu = &g2[i] / &gq[i];
    if gq.iter().zip(&g2).any(|(a, b)| *b != a * &mu) {
        return Ok(None);
    }
    let cone = q2 - &qd.scale(&mu);
    let Some(j) = p.iter().rposition(|c| !c.is_zero()) else {
        return Ok(None);
    };
    // directions d with d_j = 0: a ternary quadric
    let others: Vec<usize> = (0..4).filter(|&k| k != j).collect();
    let embed: Vec<QPoly> = (0..4)
        .map(|k| match others.iter().position(|&o| o == k) {
            Some(pos) => Polynomial::var(Rationals, 3, pos),
            None => Polynomial::zero(Rationals, 3),
        })
        .collect();
    let k3 = cone.substitute(&embed)?;
    if k3.is_zero() {
        return Ok(None);
    }
    for r in find_rational_points(std::slice::from_ref(&k3), 6, 40, |_| true) {
        // lines through r in the direction plane
        let mut basis: Vec<Vec<BigRational>> = Vec::new();
        for e in 0..3 {
            let mut v = vec![qi(0); 3];
            v[e] = qi(1);
            let mut trial = vec![r.clone()];
            trial.extend(basis.iter().cloned());
            trial.push(v.clone());
            if crate::matrix::rank_of(&Rationals, &trial, 3) == trial.len() {
                basis.push(v);
            }
            if basis.len() == 2 {
                break;
            }
        }
        let st = |c: usize| Polynomial::var(Rationals, 2, c);
        let v: Vec<QPoly> = (0..3)
            .map(|k| &st(0).scale(&basis[0][k]) + &st(1).scale(&basis[1][k]))
            .collect();
        let kv = k3.substitute(&v)?;
        // B_K(r, v)
        let mut bk = Polynomial::zero(Rationals, 2);
        for (idx, rc) in r.iter().enumerate() {
            if !rc.is_zero() {
                bk = &bk + &k3.partial(idx)?.substitute(&v)?.scale(rc);
            }
        }
        // point on the conic: K(v) r - 2 B(r, v) v, with 2B = sum r_i dK/dx_i (v)
        let conic_pt: Vec<QPoly> = (0..3)
            .map(|k| &kv.scale(&r[k]) - &(&bk * &v[k]))
            .collect();
        if conic_pt.iter().all(QPoly::is_zero) {
            continue;
        }
        let g = gcd_over_field(&conic_pt)?;
        let conic_pt: Vec<QPoly> = conic_pt
            .iter()
            .map(|c| c.exact_div(&g).map(|o| o.expect("gcd divides")))
            .collect::<Result<_>>()?;
        if conic_pt.iter().any(|c| !c.is_zero() && c.degree() != Some(2)) {
            continue;
        }
        let d: Vec<QPoly> = (0..4)
            .map(|k| match others.iter().position(|&o| o == k) {
                Some(pos) => conic_pt[pos].clone(),
                None => Polynomial::zero(Rationals, 2),
            })
            .collect();
        let qdv = qd.substitute(&d)?;
        let two_b = &polar(qd, p, &d)?.scale(&qi(2));
        let comps: Vec<QPoly> = (0..4)
            .map(|k| &qdv.scale(&p[k]) - &(two_b * &d[k]))
            .collect();
        if comps.iter().all(QPoly::is_zero) {
            continue;
        }
        let g = gcd_over_field(&comps)?;
        let comps: Vec<QPoly> = comps
            .iter()
            .map(|c| c.exact_div(&g).map(|o| o.expect("gcd divides")))
            .collect::<Result<_>>()?;
        let Ok(curve) = CurveParam::new(comps, CurveLabel::RationalQuartic) else {
            continue;
        };
        if curve.pullback(qd)?.is_zero() && curve.pullback(q2)?.is_zero() {
            return Ok(Some(curve));
        }
    }
    Ok(None)
}

/// Auxiliary quadrics `c + L (M + t x_j)` through `p`, with `M` running over
/// `p_j x_i - p_i x_j` and `t` fixing `Q(p) = 0`.
fn auxiliary_candidates(data: &CyclideData, p: &[BigRational]) -> Vec<(QPoly, QPoly)> {
    let Some(j) = p.iter().rposition(|c| !c.is_zero()) else {
        return Vec::new();
    };
    let lp = data.plane.eval_unchecked(p);
    if lp.is_zero() {
        return Vec::new();
    }
    let cp = data.c.eval_unchecked(p);
    let x = |k: usize| Polynomial::var(Rationals, 4, k);
    let corr = x(j).scale(&(-(cp / lp) / &p[j]));
    (0..4)
        .filter(|&i| i != j)
        .map(|i| {
            let m = &x(i).scale(&p[j]) - &x(j).scale(&p[i]);
            let ell = &m + &corr;
            let qd = &data.c + &(&data.plane * &ell);
            (qd, ell)
        })
        .collect()
}

/// The linear factor `ell` with `Q = lambda (c + L ell)` for a hinted quadric.
fn ell_of_hint(data: &CyclideData, qd: &QPoly) -> Result<Option<QPoly>> {
    let Some(cof) = ideal_membership_certificate(qd, &[data.plane.clone(), data.c.clone()], 1)? else {
        return Ok(None);
    };
    let lambda = cof[1].constant_term();
    if lambda.is_zero() || !cof[1].is_constant() {
        return Ok(None);
    }
    Ok(Some(cof[0].scale(&(qi(1) / lambda))))
}

fn find_conic(input: &SurfaceInput) -> Result<&SingularCurve> {
    input
        .hints
        .singular_curves
        .iter()
        .find(|c| c.degree() == Some(2))
        .ok_or_else(|| Error::Contract("no singular conic hint".into()))
}

/// Cyclide case, with or without an extra node.
pub fn linearize_cyclide(input: &SurfaceInput) -> Result<CaseReport> {
    let conic = find_conic(input)?;
    let (l, k) = conic_equations(conic)?;
    let Some(data) = cyclide_decomposition(&input.equation, &l, &k)? else {
        let mut r = linearize_double_conic(input)?;
        r.note("the surface is not of the form c^2 + L^2 q; handled as a quartic double along a conic");
        return Ok(r);
    };
    match super::common::extra_node(input, conic) {
        Some(p) => extra_node_case(input, &data, &p),
        None => smooth_case(input, &data),
    }
}

fn extra_node_case(input: &SurfaceInput, data: &CyclideData, p: &[BigRational]) -> Result<CaseReport> {
    let exact = input.options.mode == Mode::Exact;
    let mut report = CaseReport::new(
        input,
        CaseLabel::CyclideExtraNode,
        if exact { FieldMode::ExactQ } else { FieldMode::CertificateFp },
    );
    report.note(format!("extra node {}", fmt_point(p)));
    let s = &input.equation;
    let q_prime = |ell: &QPoly| &(ell * ell) + &data.q;
    let mut candidates = Vec::new();
    if let Some(h) = &input.hints.auxiliary_quadric {
        if !h.eval_unchecked(p).is_zero() {
            return Err(Error::HintRejected("the auxiliary quadric does not pass through the node".into()));
        }
        match ell_of_hint(data, h)? {
            Some(ell) => candidates.push((h.clone(), ell)),
            None => return Err(Error::HintRejected("the auxiliary quadric does not contain the conic".into())),
        }
    } else {
        candidates = auxiliary_candidates(data, p);
    }
    let mut found = None;
    for (qd, ell) in candidates {
        if let Some(curve) = residual_curve_parametrization(&qd, &q_prime(&ell), p)? {
            found = Some((qd, curve));
            break;
        }
    }
    let Some((qd, residual)) = found else {
        return Ok(report.inconclusive(
            "no auxiliary quadric gave a residual quartic with a rational parametrization; \
             the sampled residual fallback is not attempted for this case",
        ));
    };
    report.note(format!("auxiliary quadric {}", qd.to_string_with(&input.variables)));
    let skip = vec![p.to_vec()];
    let Some(x) = general_rational_point(input, &[data.plane.clone(), data.conic_quadric.clone(), qd.clone()], &skip)
    else {
        return Ok(report.inconclusive("no rational point off the base curves found; supply general_points"));
    };
    report.note(format!("general point {}", fmt_point(&x)));
    let conds = vec![
        LinearCondition::CurveIdeal {
            generators: vec![data.plane.clone(), data.conic_quadric.clone()],
            m: 2,
        },
        LinearCondition::PointMultiplicity { point: p.to_vec(), m: 2 },
        LinearCondition::CurveMultiplicity { curve: residual, m: 1 },
        LinearCondition::PointMultiplicity { point: x.clone(), m: 1 },
    ];
    let basis = system_with_dim(&Rationals, 4, &conds, 4, "quartics through 2C, 2p, R and a point")?;
    let sys = crate::linsys::LinearSystemBasis::from_basis(&Rationals, 4, 4, basis.clone())?;
    let map = RationalMap::new(basis)?.normalize()?;
    let fp = input.prime_field();
    let seed = input.options.seed;
    let mut step = Step::new("quartics_through_2C_2p_R_q", StepMap::Q(map.clone()));
    step.check("system_dimension", map.degree() == 4, format!("projective dimension 3, degree {}", map.degree()));
    step.check("surface_in_system", sys.contains(s), "the surface equation lies in the system");
    let map_fp = reduce_map(&map, &fp)?;
    let inv = if exact { fit_inverse_exact(&map, 6, seed)?.map(|i| i.degree) } else { None };
    let cert = birationality_certificate(&map_fp, Domain::Projective, INJECTIVITY_TRIALS, seed, inv)?;
    step.check(
        "injectivity",
        cert.collisions == 0 && cert.full_rank_samples == cert.trials,
        format!("{} trials, {} collisions", cert.trials, cert.collisions),
    );
    step.injectivity = Some(cert);
    let plane = image_plane(&mut step, &map, &map_fp, s, &fp, seed, exact)?;
    let held = step.fits.last().map(|f| f.held_out).unwrap_or(0);
    let plane_fp = step.fits.last().and_then(|f| f.forms.first().cloned());
    let ok = step.all_passed();
    report.steps.push(step);
    conclude_plane(&mut report, &[map], s, plane, plane_fp, held, ok, exact)?;
    Ok(report)
}

/// Points of `{s = 0, d = 0}` over `F_p` found on random planes.
fn curve_points(s: &FpPoly, d: &FpPoly, want: usize, seed: u64, keep: impl Fn(&[u64]) -> bool) -> Result<Vec<Vec<u64>>> {
    use rand::SeedableRng;
    let fp = *s.field();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<u64>> = Vec::new();
    for attempt in 0..(40 * want.max(1)) {
        if out.len() >= want {
            break;
        }
        let frame: Vec<Vec<u64>> = (0..3).map(|_| random_point(&fp, 4, &mut rng)).collect();
        // x = u0 a + u1 b + u2 c
        let lin: Vec<FpPoly> = (0..4)
            .map(|k| Polynomial::linear(fp, &[frame[0][k], frame[1][k], frame[2][k]]))
            .collect();
        let sr = s.substitute(&lin)?;
        let dr = d.substitute(&lin)?;
        let res = resultant(&sr, &dr, 2)?;
        if res.is_zero() {
            continue;
        }
        // binary form in (u0, u1): coefficients of u0^(n-k) u1^k
        let n = res.degree().unwrap_or(0);
        let coeffs: Vec<u64> = (0..=n)
            .map(|k| res.coefficient(&crate::poly::Monomial::new(vec![n - k, k, 0])))
            .collect();
        for (a, b) in univariate::binary_form_roots(&fp, &coeffs, seed ^ attempt as u64)? {
            // common roots in u2 of both restrictions
            let sub = |f: &FpPoly| -> Result<univariate::Dense> {
                let g = f.substitute(&[
                    Polynomial::constant(fp, 1, a),
                    Polynomial::constant(fp, 1, b),
                    Polynomial::var(fp, 1, 0),
                ])?;
                univariate::to_dense(&g)
            };
            let g = univariate::gcd(&fp, &sub(&sr)?, &sub(&dr)?);
            if g.len() <= 1 {
                continue;
            }
            for u2 in univariate::roots_dense(&fp, &g, seed)? {
                let pt: Vec<u64> = (0..4)
                    .map(|k| {
                        let v = fp.add(&fp.mul(&a, &frame[0][k]), &fp.mul(&b, &frame[1][k]));
                        fp.add(&v, &fp.mul(&u2, &frame[2][k]))
                    })
                    .collect();
                if pt.iter().all(|&c| c == 0) || !keep(&pt) {
                    continue;
                }
                let pt = crate::maps::normalize_point(&fp, &pt);
                if !out.contains(&pt) {
                    out.push(pt);
                }
            }
        }
    }
    if out.len() < want {
        return Err(Error::Sampling(format!("found {} of {want} points on the residual curve", out.len())));
    }
    Ok(out)
}

/// Without an extra node: sextics triple along the conic and at a point of
/// a rational quartic `gamma` on the surface, through `gamma`, cut a
/// residual octic; sextics triple along the conic and at the point through
/// that octic map the surface onto a plane. Certificate mode over `F_p`.
fn smooth_case(input: &SurfaceInput, data: &CyclideData) -> Result<CaseReport> {
    let mut report = CaseReport::new(input, CaseLabel::CyclideSmooth, FieldMode::CertificateFp);
    let Some(gamma) = input.hints.gamma.clone() else {
        return Ok(report.inconclusive(
            "cyclide without an extra node: the construction needs a rational quartic on the surface \
             (hint 'gamma'); finding one automatically is an open question",
        ));
    };
    let s = &input.equation;
    let fp = input.prime_field();
    let seed = input.options.seed;
    let Some(p0) = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1)]
        .iter()
        .map(|&(a, b)| gamma.point(&qi(a), &qi(b)))
        .find(|pt| !(data.plane.eval_unchecked(pt).is_zero() && data.conic_quadric.eval_unchecked(pt).is_zero()))
    else {
        return Ok(report.inconclusive("no rational point of gamma off the conic"));
    };
    report.note(format!("point of gamma {}", fmt_point(&p0)));
    let conic_ideal = LinearCondition::CurveIdeal {
        generators: vec![data.plane.clone(), data.conic_quadric.clone()],
        m: 3,
    };
    let sigma = solve_system(
        &Rationals,
        4,
        6,
        &[
            conic_ideal.clone(),
            LinearCondition::PointMultiplicity { point: p0.clone(), m: 3 },
            LinearCondition::CurveMultiplicity { curve: gamma.clone(), m: 1 },
        ],
    )?;
    if sigma.is_empty() {
        return Ok(report.inconclusive("the system of sextics through 3C, 3p and gamma is empty"));
    }
    // a general member over F_p
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xd);
    let mut dm = Polynomial::zero(fp, 4);
    for b in &sigma.basis {
        let br = b.reduce(&fp).ok_or_else(|| Error::Usage("system degenerates mod p".into()))?;
        dm = &dm + &br.scale(&fp.random_elem(&mut rng));
    }
    let sr = s.reduce(&fp).ok_or_else(|| Error::Usage("surface degenerates mod p".into()))?;
    let lr = data.plane.reduce(&fp).expect("integral");
    let kr = data.conic_quadric.reduce(&fp).expect("integral");
    let gamma_cubics: Vec<FpPoly> = solve_system(&Rationals, 4, 3, &[LinearCondition::CurveMultiplicity { curve: gamma.clone(), m: 1 }])?
        .basis
        .iter()
        .filter_map(|c| c.reduce(&fp))
        .collect();
    let p0r = fp_point(&fp, &p0).ok_or_else(|| Error::Usage("point degenerates mod p".into()))?;
    let keep = |x: &[u64]| {
        !(lr.eval_unchecked(x) == 0 && kr.eval_unchecked(x) == 0)
            && !gamma_cubics.iter().all(|c| c.eval_unchecked(x) == 0)
            && !crate::maps::projectively_equal(&fp, x, &p0r)
    };
    let want = 2 * 8 * 6 + 1;
    let residual = curve_points(&sr, &dm, want + 40, seed ^ 0xe, keep)?;
    let mut step_note = String::new();
    // rank stabilization: add points until the system dimension stops changing
    let mut used = want;
    let mut last_dim = i64::MAX;
    let mut lambda = None;
    while used <= residual.len() {
        let lam = solve_system(
            &fp,
            4,
            6,
            &[
                reduce_condition(&conic_ideal, &fp)?,
                LinearCondition::PointMultiplicity { point: p0r.clone(), m: 3 },
                LinearCondition::CurveThroughSamples { points: residual[..used].to_vec() },
            ],
        )?;
        if lam.projective_dim == last_dim {
            step_note = format!("rank stable at {used} residual samples");
            lambda = Some(lam);
            break;
        }
        last_dim = lam.projective_dim;
        used += 20;
    }
    let Some(lambda) = lambda else {
        return Ok(report.inconclusive("the residual system did not stabilize"));
    };
    if lambda.len() != 4 {
        return Ok(report.inconclusive(format!(
            "the residual system has projective dimension {}, expected 3",
            lambda.projective_dim
        )));
    }
    let map = RationalMap::new(lambda.basis.clone())?.normalize()?;
    let mut step = Step::new("sextics_through_3C_3p_R", StepMap::Fp(map.clone()));
    step.check("rank_stabilization", true, step_note);
    // the cone over the conic from p0 plus the surface is in the system
    let lp = data.plane.eval_unchecked(&p0);
    let x: Vec<QPoly> = (0..4).map(|k| Polynomial::var(Rationals, 4, k)).collect();
    let proj: Vec<QPoly> = (0..4)
        .map(|k| &x[k].scale(&lp) - &data.plane.scale(&p0[k]))
        .collect();
    let cone = data.conic_quadric.substitute(&proj)?;
    let es = (&cone * s).reduce(&fp).expect("integral");
    step.check("cone_plus_surface_in_system", lambda.contains(&es), "E + S lies in the system");
    let cert = birationality_certificate(&map, Domain::Projective, INJECTIVITY_TRIALS, seed, None)?;
    step.check(
        "injectivity",
        cert.collisions == 0 && cert.full_rank_samples == cert.trials,
        format!("{} trials, {} collisions", cert.trials, cert.collisions),
    );
    step.injectivity = Some(cert);
    let pts = sample_rational_surface(s, &fp, 60, seed ^ 0xf, |_| true)?;
    let image = push_forward(&map, &pts.points)?;
    let fit = fit_image_forms(&fp, &image, 4, 1)?;
    let names: Vec<String> = (0..4).map(|i| format!("y{i}")).collect();
    step.fits.push(super::FitSummary {
        label: "image_degree_1".into(),
        degree: 1,
        count: fit.forms.len(),
        forms: fit.forms.iter().map(|f| f.to_string_with(&names)).collect(),
        held_out: fit.held_out_points,
    });
    step.check("image_form_count", fit.forms.len() == 1, format!("{} linear forms", fit.forms.len()));
    let cone_r = cone.reduce(&fp).expect("integral");
    let cone_pts = crate::maps::sample_surface_points(&cone_r, 30, seed ^ 0x10, |_| true)?;
    let collapsed = cone_pts.points.iter().filter(|pt| map.jacobian_rank(pt, None) < 3).count();
    step.check(
        "cone_collapses",
        collapsed == cone_pts.points.len(),
        format!("differential rank below 3 at {collapsed} of {} cone samples", cone_pts.points.len()),
    );
    let ok = step.all_passed();
    let held = fit.held_out_points;
    report.final_cert.plane_form = fit.forms.first().map(|f| f.to_string_with(&names));
    report.steps.push(step);
    if ok && report.final_cert.plane_form.is_some() {
        report.status = Status::Certified;
        report.final_cert.verified_samples = held;
    } else {
        report.status = Status::Inconclusive;
        report.note("a check failed in the residual-octic construction");
    }
    Ok(report)
}

fn reduce_condition(c: &LinearCondition<Rationals>, fp: &PrimeField) -> Result<LinearCondition<PrimeField>> {
    let red = |f: &QPoly| f.reduce(fp).ok_or_else(|| Error::Usage("condition degenerates mod p".into()));
    Ok(match c {
        LinearCondition::CurveIdeal { generators, m } => LinearCondition::CurveIdeal {
            generators: generators.iter().map(red).collect::<Result<_>>()?,
            m: *m,
        },
        _ => return Err(Error::Usage("only ideal conditions are reduced here".into())),
    })
}
