//! Quartics double along a twisted cubic. Cubics through the curve and
//! three of its secants lying on the surface send the surface to a quadric.
//!
//! Secants of `gamma` are indexed by unordered parameter pairs `{t, u}`,
//! i.e. by `(t + u, t u)`. The secants on the surface form a curve in that
//! plane, cut out by the gcd of the coefficients of `S(a P1 + b P2)` with
//! `P1, P2` symmetric points spanning the secant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::common::{apply_q, fmt_point, point_multiplicity, qi, reduce_map, system_with_dim};
use super::monoid::{conclude_plane, image_hypersurface, monoid_map, monoid_step, INJECTIVITY_TRIALS};
use super::{CaseLabel, CaseReport, FieldMode, Mode, Step, StepMap, SurfaceInput};
use crate::error::{Error, Result};
use crate::field::{rational_height, PrimeField, Rationals};
use crate::gcd::multivariate_gcd;
use crate::linsys::{CurveParam, LinearCondition};
use crate::maps::{birationality_certificate, fit_inverse_exact, fit_inverse_mod_p, Domain, RationalMap};
use crate::poly::{Monomial, Polynomial, QPoly};

/// Secant lines of `gamma` contained in the surface.
#[derive(Clone, Debug)]
pub struct SecantSearch {
    /// Equation of the secant curve in `(t + u, t u)`; constant when no
    /// secant lies on the surface.
    pub secant_curve: QPoly,
    /// Rational points `(t + u, t u)` and their lines, lowest height first.
    pub rational: Vec<(BigRational, BigRational, CurveParam<Rationals>)>,
    /// Points of the secant curve over `F_p` (first coordinate scanned).
    pub fp_witnesses: Vec<(u64, u64)>,
}

/// Rows `A` with `gamma(1, t) = A (1, t, t^2, t^3)`.
fn cubic_matrix(gamma: &CurveParam<Rationals>) -> Vec<Vec<BigRational>> {
    gamma
        .components()
        .iter()
        .map(|c| (0..4u32).map(|k| c.coefficient(&Monomial::new(vec![3 - k, k]))).collect())
        .collect()
}

/// `A v` for a vector of polynomials.
fn apply_rows(a: &[Vec<BigRational>], v: &[QPoly]) -> Vec<QPoly> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Polynomial::zero(Rationals, v[0].nvars()), |acc, (c, p)| &acc + &p.scale(c))
        })
        .collect()
}

/// Symmetric spanning points of the secant with parameters `(s1, s2)`,
/// in the ring of `n` variables with `s1, s2` the first two.
fn secant_points(a: &[Vec<BigRational>], s1: &QPoly, s2: &QPoly) -> (Vec<QPoly>, Vec<QPoly>) {
    let n = s1.nvars();
    let c = |v: i64| Polynomial::constant(Rationals, n, qi(v));
    let s1sq = s1 * s1;
    // gamma(t) + gamma(u) and (gamma(t) - gamma(u)) / (t - u)
    let p1 = vec![
        c(2),
        s1.clone(),
        &s1sq - &s2.scale(&qi(2)),
        &(&s1sq * s1) - &(s1 * s2).scale(&qi(3)),
    ];
    let p2 = vec![c(0), c(1), s1.clone(), &s1sq - s2];
    (apply_rows(a, &p1), apply_rows(a, &p2))
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().clone(), q.denom().clone());
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == n && &rd * &rd == d).then(|| BigRational::new(rn, rd))
}

/// Secant lines of `gamma` on `s`.
pub fn find_secants_on_s(s: &QPoly, gamma: &CurveParam<Rationals>, fp: &PrimeField) -> Result<SecantSearch> {
    if gamma.degree() != 3 || gamma.ambient_vars() != 4 {
        return Err(Error::Usage("secant search needs a twisted cubic in P^3".into()));
    }
    let a = cubic_matrix(gamma);
    // ring (s1, s2, a, b)
    let v = |i: usize| Polynomial::var(Rationals, 4, i);
    let (p1, p2) = secant_points(&a, &v(0), &v(1));
    let comb: Vec<QPoly> = p1.iter().zip(&p2).map(|(x, y)| &(&v(2) * x) + &(&v(3) * y)).collect();
    let restricted = s.substitute(&comb)?;
    // coefficients in (a, b)
    let mut coeffs: Vec<QPoly> = Vec::new();
    for ca in restricted.coefficients_in(2) {
        for cb in ca.coefficients_in(3) {
            if !cb.is_zero() {
                coeffs.push(cb.restrict_vars(2)?);
            }
        }
    }
    let curve = if coeffs.is_empty() {
        Polynomial::zero(Rationals, 2)
    } else {
        multivariate_gcd(&coeffs)?
    };
    let mut rational: Vec<(BigRational, BigRational, CurveParam<Rationals>)> = Vec::new();
    let mut fp_witnesses = Vec::new();
    if curve.is_zero() || curve.is_constant() {
        return Ok(SecantSearch { secant_curve: curve, rational, fp_witnesses });
    }
    // scan s1 over small rationals, solve for s2
    let mut s1_values: Vec<BigRational> = Vec::new();
    for den in 1..=4i64 {
        for num in -12..=12i64 {
            let q = BigRational::new(num.into(), den.into());
            if !s1_values.contains(&q) {
                s1_values.push(q);
            }
        }
    }
    for s1 in &s1_values {
        let sub = curve.substitute(&[
            Polynomial::constant(Rationals, 1, s1.clone()),
            Polynomial::var(Rationals, 1, 0),
        ])?;
        let c: Vec<BigRational> = (0..=2u32).map(|k| sub.coefficient(&Monomial::new(vec![k]))).collect();
        if sub.degree().unwrap_or(0) > 2 {
            continue;
        }
        let roots: Vec<BigRational> = if sub.is_zero() {
            Vec::new()
        } else if c[2].is_zero() {
            if c[1].is_zero() {
                Vec::new()
            } else {
                vec![-&c[0] / &c[1]]
            }
        } else {
            let disc = &c[1] * &c[1] - qi(4) * &c[0] * &c[2];
            match rational_sqrt(&disc) {
                Some(r) => {
                    let two_a = &c[2] * qi(2);
                    let mut v = vec![(-&c[1] + &r) / &two_a];
                    if !r.is_zero() {
                        v.push((-&c[1] - &r) / &two_a);
                    }
                    v
                }
                None => Vec::new(),
            }
        };
        for s2 in roots {
            let k1 = Polynomial::constant(Rationals, 1, s1.clone());
            let k2 = Polynomial::constant(Rationals, 1, s2.clone());
            let (q1, q2) = secant_points(&a, &k1, &k2);
            let pa: Vec<BigRational> = q1.iter().map(QPoly::constant_term).collect();
            let pb: Vec<BigRational> = q2.iter().map(QPoly::constant_term).collect();
            let Ok(line) = CurveParam::line_through(&Rationals, &pa, &pb) else {
                continue;
            };
            if !line.pullback(s)?.is_zero() {
                continue;
            }
            rational.push((s1.clone(), s2, line));
        }
    }
    let h = |x: &BigRational, y: &BigRational| -> BigInt { rational_height(x).max(rational_height(y)) };
    rational.sort_by(|x, y| h(&x.0, &x.1).cmp(&h(&y.0, &y.1)).then(x.0.cmp(&y.0)));
    if let Some(red) = curve.reduce(fp) {
        for s1 in 0..fp.modulus().min(200) {
            let sub = red.substitute(&[
                Polynomial::constant(*fp, 1, s1),
                Polynomial::var(*fp, 1, 0),
            ])?;
            if sub.is_zero() || sub.is_constant() {
                continue;
            }
            for r in crate::univariate::univariate_roots_mod_p(&sub)? {
                fp_witnesses.push((s1, r));
            }
            if fp_witnesses.len() >= 10 {
                break;
            }
        }
    }
    Ok(SecantSearch {
        secant_curve: curve,
        rational,
        fp_witnesses,
    })
}

/// Twisted-cubic case.
pub fn linearize_twisted_cubic(input: &SurfaceInput) -> Result<CaseReport> {
    let exact = input.options.mode == Mode::Exact;
    let mut report = CaseReport::new(
        input,
        CaseLabel::TwistedCubic,
        if exact { FieldMode::ExactQ } else { FieldMode::CertificateFp },
    );
    let Some(gamma) = input
        .hints
        .singular_curves
        .iter()
        .filter(|c| c.degree() == Some(3))
        .find_map(|c| c.param.clone())
    else {
        return Ok(report.inconclusive("the twisted cubic must be given by a parametrization"));
    };
    let s = &input.equation;
    let fp = input.prime_field();
    let seed = input.options.seed;
    let mut lines: Vec<CurveParam<Rationals>> = input.hints.secants.clone();
    let search = find_secants_on_s(s, &gamma, &fp)?;
    report.note(format!(
        "secant curve {} with {} rational secants found",
        search.secant_curve.to_string_with(&["s1".to_string(), "s2".to_string()]),
        search.rational.len()
    ));
    for (_, _, l) in &search.rational {
        if !lines.iter().any(|m| same_line(m, l)) {
            lines.push(l.clone());
        }
    }
    if lines.len() < 3 {
        let wit: Vec<String> = search.fp_witnesses.iter().map(|(a, b)| format!("({a}, {b})")).collect();
        return Ok(report.inconclusive(format!(
            "fewer than three rational secants on the surface; F_p witnesses (t+u, tu): {}",
            wit.join(" ")
        )));
    }
    let gamma_cond = LinearCondition::CurveMultiplicity { curve: gamma.clone(), m: 1 };
    let mut chosen = None;
    let cand = lines.len().min(8);
    'outer: for i in 0..cand {
        for j in i + 1..cand {
            for k in j + 1..cand {
                let mut conds = vec![gamma_cond.clone()];
                for &idx in &[i, j, k] {
                    conds.push(LinearCondition::CurveMultiplicity { curve: lines[idx].clone(), m: 1 });
                }
                if let Ok(basis) = system_with_dim(&Rationals, 3, &conds, 4, "cubics through gamma and three secants") {
                    chosen = Some(([i, j, k], basis));
                    break 'outer;
                }
            }
        }
    }
    let Some((used, basis)) = chosen else {
        return Ok(report.inconclusive("no three secants give a system of projective dimension 3"));
    };
    for &i in &used {
        let p = lines[i].point(&qi(1), &qi(0));
        let q = lines[i].point(&qi(0), &qi(1));
        report.note(format!("secant through {} and {}", fmt_point(&p), fmt_point(&q)));
    }
    let map = RationalMap::new(basis)?.normalize()?;
    let mut step = Step::new("cubics_through_gamma_and_secants", StepMap::Q(map.clone()));
    step.check("system_dimension", map.degree() == 3, format!("projective dimension 3, degree {}", map.degree()));
    let map_fp = reduce_map(&map, &fp)?;
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
    let quadric = image_hypersurface(&mut step, &map, &map_fp, s, &fp, 2, seed, true)?;
    report.steps.push(step);
    let Some(quadric) = quadric else {
        return Ok(report.inconclusive("the image quadric was not determined"));
    };
    // rational points of the quadric: images of points on unused secants
    let mut y = None;
    'find: for (i, l) in lines.iter().enumerate() {
        if used.contains(&i) {
            continue;
        }
        for (a, b) in [(1, 1), (1, -1), (2, 1), (1, 2), (1, 0), (0, 1)] {
            let x = l.point(&qi(a), &qi(b));
            if point_multiplicity(s, &x) != 1 {
                continue;
            }
            if let Some(img) = apply_q(&map, &x) {
                if point_multiplicity(&quadric, &img) == 1 {
                    y = Some(img);
                    break 'find;
                }
            }
        }
    }
    if y.is_none() {
        y = super::common::find_rational_points(std::slice::from_ref(&quadric), 3, 1, |p| {
            point_multiplicity(&quadric, p) == 1
        })
        .into_iter()
        .next();
    }
    let Some(y) = y else {
        return Ok(report.inconclusive("no rational point on the image quadric was found"));
    };
    report.note(format!("image quadric {} through {}", quadric, fmt_point(&y)));
    if let Ok((change, _)) = monoid_map(&quadric, &y) {
        report.coordinate_changes.push(change);
    }
    let (step2, map2, plane) = monoid_step(&quadric, &y, &fp, seed ^ 0x7, exact)?;
    let held = step2.fits.last().map(|f| f.held_out).unwrap_or(0);
    let plane_fp = step2.fits.last().and_then(|f| f.forms.first().cloned());
    report.steps.push(step2);
    let ok = report.steps.iter().all(Step::all_passed);
    conclude_plane(&mut report, &[map, map2], s, plane, plane_fp, held, ok, exact)?;
    Ok(report)
}

fn same_line(a: &CurveParam<Rationals>, b: &CurveParam<Rationals>) -> bool {
    let pts = [
        a.point(&qi(1), &qi(0)),
        a.point(&qi(0), &qi(1)),
        b.point(&qi(1), &qi(0)),
        b.point(&qi(0), &qi(1)),
    ];
    crate::matrix::rank_of(&Rationals, &pts, 4) == 2
}
