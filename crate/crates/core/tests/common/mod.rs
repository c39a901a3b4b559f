//! Independent oracles and the property library shared by the property
//! tests and the acceptance target. The oracles here avoid the crate's own
//! linear algebra: they use a small modular elimination written for tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use cremona::gcd::multivariate_gcd;
use cremona::linsys::{solve_system, LinearCondition};
use cremona::maps::{fit_image_forms, projectively_equal, MapValue, RationalMap};
use cremona::matrix::Matrix;
use cremona::pipeline::{Hints, Options, SingularCurve, SurfaceInput};
use cremona::poly::{Monomial, Polynomial, QPoly};
use cremona::{fixtures, univariate, Error, Field, PrimeField, Rationals};

pub const ORACLE_PRIME: u64 = 1_000_003;

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Rank of an integer matrix modulo `p`, by plain Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<i128>], p: i128) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut b: i128, mut e: i128, p: i128) -> i128 {
    let mut r = 1;
    b = b.rem_euclid(p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Exponent vectors of total degree `d` in `n` variables.
pub fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .rev()
        .flat_map(|a| {
            exponents(n - 1, d - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

/// Dimension of the space of quadratic relations among monomial
/// coordinates: quadrics in the coordinates, minus the rank of their
/// expansion as polynomials in the parameters.
pub fn monomial_quadric_relations(coords: &[Vec<u32>]) -> usize {
    let n = coords.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let products: Vec<Vec<u32>> = pairs
        .iter()
        .map(|&(i, j)| coords[i].iter().zip(&coords[j]).map(|(a, b)| a + b).collect())
        .collect();
    let distinct: BTreeSet<Vec<u32>> = products.iter().cloned().collect();
    pairs.len() - distinct.len()
}

/// Brute-force count of quadric relations holding at sampled points,
/// computed with the test's own elimination.
pub fn quadric_relations_on_points(points: &[Vec<u64>], p: u64) -> usize {
    let n = points[0].len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    // rows: points; columns: quadric monomials; relations = nullity
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|pt| pairs.iter().map(|&(i, j)| (pt[i] as i128 * pt[j] as i128) % p as i128).collect())
        .collect();
    pairs.len() - rank_mod_p(&rows, p as i128)
}

fn small_poly(nvars: usize, max_deg: u32, homogeneous: bool) -> impl Strategy<Value = QPoly> {
    let monos: Vec<Vec<u32>> = if homogeneous {
        exponents(nvars, max_deg)
    } else {
        (0..=max_deg).flat_map(|d| exponents(nvars, d)).collect()
    };
    let k = monos.len();
    prop::collection::vec(-4i64..=4, k).prop_map(move |cs| {
        Polynomial::from_terms(
            Rationals,
            nvars,
            monos.iter().zip(cs).filter(|(_, c)| *c != 0).map(|(m, c)| (Monomial::new(m.clone()), q(c))),
        )
    })
}

fn eval_q(f: &QPoly, p: &[BigRational]) -> BigRational {
    f.eval(p).expect("arity")
}

fn int_point(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(-5i64..=5, n).prop_map(|v| v.into_iter().map(q).collect())
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Ring axioms checked through evaluation at integer points.
pub fn prop_ring_axioms(cases: u32) -> Result<(), String> {
    let s = (small_poly(3, 3, false), small_poly(3, 3, false), small_poly(3, 2, false), int_point(3));
    run(cases, s, |(f, g, h, x)| {
        let (fv, gv, hv) = (eval_q(&f, &x), eval_q(&g, &x), eval_q(&h, &x));
        prop_assert_eq!(eval_q(&(&(&f + &g) * &h), &x), (&fv + &gv) * &hv);
        prop_assert_eq!(eval_q(&(&(&f * &g) * &h), &x), &fv * &gv * &hv);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        Ok(())
    })
}

/// Euler's identity `sum x_i df/dx_i = deg(f) f` on forms.
pub fn prop_euler(cases: u32) -> Result<(), String> {
    let s = (1u32..=4).prop_flat_map(|d| (Just(d), small_poly(4, d, true)));
    run(cases, s, |(d, f)| {
        let mut sum = Polynomial::zero(Rationals, 4);
        for i in 0..4 {
            sum = &sum + &(&Polynomial::var(Rationals, 4, i) * &f.partial(i).unwrap());
        }
        prop_assert_eq!(sum, f.scale(&q(d as i64)));
        Ok(())
    })
}

/// Nullspace vectors annihilate the matrix and rank + nullity = columns,
/// with the rank taken from the test's own elimination.
pub fn prop_nullspace(cases: u32) -> Result<(), String> {
    let s = (1usize..7, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r));
    run(cases, s, |rows| {
        let cols = rows[0].len();
        let fp = PrimeField::new(ORACLE_PRIME).unwrap();
        let m = Matrix::from_rows(fp, cols, rows.iter().map(|r| r.iter().map(|&x| fp.from_i64(x)).collect()).collect())
            .unwrap();
        let ker = m.nullspace();
        for v in &ker {
            for r in &rows {
                let dot = r.iter().zip(v).fold(0i128, |acc, (&a, &b)| (acc + a as i128 * b as i128).rem_euclid(ORACLE_PRIME as i128));
                prop_assert_eq!(dot, 0);
            }
        }
        let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        prop_assert_eq!(rank_mod_p(&wide, ORACLE_PRIME as i128) + ker.len(), cols);
        // the same over Q
        let mq = Matrix::from_rows(Rationals, cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap();
        for v in mq.nullspace() {
            for r in &rows {
                let dot: BigRational = r.iter().zip(&v).map(|(&a, b)| q(a) * b).sum();
                prop_assert_eq!(dot, q(0));
            }
        }
        Ok(())
    })
}

/// `gcd(a c, b c)` is divisible by `c` and divides both products.
pub fn prop_gcd(cases: u32) -> Result<(), String> {
    let s = (small_poly(3, 2, true), small_poly(3, 1, true), small_poly(3, 1, true));
    run(cases, s, |(c, a, b)| {
        prop_assume!(!c.is_zero() && !a.is_zero() && !b.is_zero());
        let (ac, bc) = (&a * &c, &b * &c);
        let g = multivariate_gcd(&[ac.clone(), bc.clone()]).unwrap();
        prop_assert!(g.exact_div(&c).unwrap().is_some(), "c = {} does not divide gcd {}", c, g);
        prop_assert!(ac.exact_div(&g).unwrap().is_some());
        prop_assert!(bc.exact_div(&g).unwrap().is_some());
        Ok(())
    })
}

/// Roots of a product of linear factors and a random cofactor agree with
/// brute-force evaluation over a small field.
pub fn prop_roots(cases: u32) -> Result<(), String> {
    const P: u64 = 1009;
    let s = (prop::collection::vec(0u64..P, 0..6), prop::collection::vec(0u64..P, 0..4), any::<u64>());
    run(cases, s, |(roots, extra, seed)| {
        let fp = PrimeField::new(P).unwrap();
        let mut poly = vec![1u64];
        for r in &roots {
            poly = univariate::mul(&fp, &poly, &[fp.neg(r), 1]);
        }
        let mut cof = extra.clone();
        cof.push(1);
        poly = univariate::mul(&fp, &poly, &cof);
        let mut found = univariate::roots_dense(&fp, &poly, seed).unwrap();
        found.sort_unstable();
        found.dedup();
        let brute: Vec<u64> = (0..P).filter(|&x| univariate::eval(&fp, &poly, x) == 0).collect();
        prop_assert_eq!(found, brute);
        Ok(())
    })
}

/// Every basis element of a point-multiplicity system has the required
/// vanishing partials, checked by direct differentiation.
pub fn prop_linsys_posthoc(cases: u32) -> Result<(), String> {
    let s = (1u32..=3, prop::collection::vec((int_point(4), 1u32..=2), 1..4));
    run(cases, s, |(degree, conds)| {
        prop_assume!(conds.iter().all(|(p, _)| p.iter().any(|c| *c != q(0))));
        let lc: Vec<LinearCondition<Rationals>> = conds
            .iter()
            .map(|(p, m)| LinearCondition::PointMultiplicity { point: p.clone(), m: *m })
            .collect();
        let sys = solve_system(&Rationals, 4, degree, &lc).unwrap();
        for f in &sys.basis {
            for (p, m) in &conds {
                prop_assert_eq!(eval_q(f, p), q(0));
                if *m == 2 {
                    for i in 0..4 {
                        prop_assert_eq!(eval_q(&f.partial(i).unwrap(), p), q(0));
                    }
                }
            }
        }
        Ok(())
    })
}

/// Adding a condition never increases the dimension, and each condition
/// costs at most its number of linear equations.
pub fn prop_linsys_monotone(cases: u32) -> Result<(), String> {
    let s = (1u32..=3, prop::collection::vec((int_point(4), 1u32..=2), 1..4));
    run(cases, s, |(degree, conds)| {
        prop_assume!(conds.iter().all(|(p, _)| p.iter().any(|c| *c != q(0))));
        let full = exponents(4, degree).len();
        let mut prev = full;
        let mut cost = 0;
        for k in 1..=conds.len() {
            let lc: Vec<LinearCondition<Rationals>> = conds[..k]
                .iter()
                .map(|(p, m)| LinearCondition::PointMultiplicity { point: p.clone(), m: *m })
                .collect();
            let dim = solve_system(&Rationals, 4, degree, &lc).unwrap().len();
            cost += if conds[k - 1].1 == 1 { 1 } else { 5 };
            prop_assert!(dim <= prev);
            prop_assert!(dim + cost >= full);
            prev = dim;
        }
        Ok(())
    })
}

fn fp_forms(fp: PrimeField, coeffs: &[Vec<i64>], degree: u32) -> Vec<Polynomial<PrimeField>> {
    let monos = exponents(4, degree);
    coeffs
        .iter()
        .map(|cs| {
            Polynomial::from_terms(
                fp,
                4,
                monos.iter().zip(cs).filter(|(_, c)| **c != 0).map(|(m, c)| (Monomial::new(m.clone()), fp.from_i64(*c))),
            )
        })
        .collect()
}

/// `phi(lambda x)` and `phi(x)` are the same projective point.
pub fn prop_rescaling(cases: u32) -> Result<(), String> {
    let s = (
        prop::collection::vec(prop::collection::vec(-3i64..=3, 10), 4),
        prop::collection::vec(0u64..10007, 4),
        1u64..10007,
    );
    run(cases, s, |(coeffs, x, lambda)| {
        let fp = PrimeField::new(10007).unwrap();
        let forms = fp_forms(fp, &coeffs, 2);
        prop_assume!(forms.iter().any(|f| !f.is_zero()));
        let map = RationalMap::new(forms).unwrap();
        let y: Vec<u64> = x.iter().map(|c| fp.mul(c, &lambda)).collect();
        match (map.apply(&x).unwrap(), map.apply(&y).unwrap()) {
            (MapValue::Point(a), MapValue::Point(b)) => prop_assert!(projectively_equal(&fp, &a, &b)),
            (MapValue::BasePoint, MapValue::BasePoint) => {}
            _ => prop_assert!(false, "base locus not invariant under rescaling"),
        }
        Ok(())
    })
}

/// Fits on two disjoint sample sets of a quadric's image under a random
/// linear change agree.
pub fn prop_heldout_stability(cases: u32) -> Result<(), String> {
    let s = (prop::collection::vec(-3i64..=3, 16), any::<u64>());
    run(cases, s, |(mat, seed)| {
        use rand::SeedableRng;
        let fp = PrimeField::new(10007).unwrap();
        let rows: Vec<Vec<u64>> = mat.chunks(4).map(|r| r.iter().map(|&c| fp.from_i64(c)).collect()).collect();
        let m = Matrix::from_rows(fp, 4, rows.clone()).unwrap();
        prop_assume!(m.rank() == 4);
        let linear: Vec<Polynomial<PrimeField>> = rows
            .iter()
            .map(|r| {
                Polynomial::from_terms(fp, 4, (0..4).map(|i| (Monomial::var(4, i), r[i])))
            })
            .collect();
        let map = RationalMap::new(linear).unwrap();
        // points on x0 x1 = x2 x3 via (a, b, c) -> (a b, c, a, b c)... parametrize
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut sample = |k: usize| -> Vec<Vec<u64>> {
            (0..k)
                .filter_map(|_| {
                    let (a, b, c, d) = (
                        fp.random_elem(&mut rng),
                        fp.random_elem(&mut rng),
                        fp.random_elem(&mut rng),
                        fp.random_elem(&mut rng),
                    );
                    let p = vec![fp.mul(&a, &c), fp.mul(&b, &d), fp.mul(&a, &d), fp.mul(&b, &c)];
                    match map.apply(&p).ok()? {
                        MapValue::Point(v) => Some(v),
                        MapValue::BasePoint => None,
                    }
                })
                .collect()
        };
        let (s1, s2) = (sample(60), sample(60));
        prop_assume!(s1.len() >= 40 && s2.len() >= 40);
        let f1 = fit_image_forms(&fp, &s1, 4, 2).unwrap();
        let f2 = fit_image_forms(&fp, &s2, 4, 2).unwrap();
        prop_assert_eq!(f1.forms.len(), 1);
        prop_assert_eq!(f2.forms.len(), 1);
        let c1 = cremona::linsys::coefficient_vector(&f1.forms[0], 2);
        let c2 = cremona::linsys::coefficient_vector(&f2.forms[0], 2);
        prop_assert!(projectively_equal(&fp, &c1, &c2));
        Ok(())
    })
}

/// Corrupted hints on the named surfaces: every acceptance must be
/// genuinely valid according to an independent check, so false
/// acceptances are counted and must be zero.
pub fn hint_corruption(trials: usize, seed: u64) -> (usize, usize, usize) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let bases = [
        fixtures::dupin_cyclide().unwrap(),
        fixtures::tangent_developable().unwrap(),
        fixtures::double_line().unwrap(),
        fixtures::elliptic_type1().unwrap(),
    ];
    let (mut rejected, mut accepted_valid, mut false_accept) = (0, 0, 0);
    for t in 0..trials {
        let base = &bases[t % bases.len()];
        let mut hints: Hints = base.hints.clone();
        let kind = rng.gen_range(0..3);
        let bump = q(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 });
        match kind {
            0 if !hints.singular_points.is_empty() => {
                let k = rng.gen_range(0..hints.singular_points.len());
                let c = rng.gen_range(0..4);
                hints.singular_points[k][c] += bump;
            }
            1 if !hints.singular_curves.is_empty() => {
                let curve: &mut SingularCurve = &mut hints.singular_curves[0];
                let mut mutated = true;
                if let Some(p) = &curve.param {
                    let mut comps = p.components().to_vec();
                    let c = rng.gen_range(0..4);
                    let st = Polynomial::var(Rationals, 2, rng.gen_range(0..2)).pow(p.degree());
                    comps[c] = &comps[c] + &st.scale(&bump);
                    curve.param = Some(cremona::linsys::CurveParam::new(comps, p.label()).unwrap());
                } else if curve.equations.iter().all(|e| e.degree() == Some(1)) {
                    let c = rng.gen_range(0..curve.equations.len());
                    let v = Polynomial::var(Rationals, 4, rng.gen_range(0..4));
                    curve.equations[c] = &curve.equations[c] + &v.scale(&bump);
                } else {
                    mutated = false;
                }
                if !mutated {
                    // conics without rational points: corrupt a point hint instead
                    match hints.singular_points.first_mut() {
                        Some(p) => p[rng.gen_range(0..4)] += bump,
                        None => hints.singular_points.push(vec![q(1), q(1), q(0), q(0)]),
                    }
                }
            }
            _ => {
                let mut p: Vec<BigRational> = (0..4).map(|_| q(rng.gen_range(-3..=3))).collect();
                if p.iter().all(|c| *c == q(0)) {
                    p[0] = q(1);
                }
                hints.singular_points.push(p);
            }
        }
        match SurfaceInput::new(base.equation.clone(), base.variables.clone(), hints.clone(), Options::default()) {
            Err(Error::HintRejected(_)) => rejected += 1,
            Err(e) => panic!("unexpected error {e}"),
            Ok(_) => {
                if hints_truly_valid(&base.equation, &hints) {
                    accepted_valid += 1;
                } else {
                    false_accept += 1;
                }
            }
        }
    }
    (rejected, accepted_valid, false_accept)
}

/// Independent validity check: singular points kill S and its gradient;
/// curves are tested at more points than the degree of the restricted
/// polynomials, found by parametrization or by an integer search on lines.
fn hints_truly_valid(s: &QPoly, hints: &Hints) -> bool {
    let grads: Vec<QPoly> = (0..4).map(|i| s.partial(i).unwrap()).collect();
    let sing = |p: &[BigRational]| eval_q(s, p) == q(0) && grads.iter().all(|g| eval_q(g, p) == q(0));
    if !hints.singular_points.iter().all(|p| sing(p)) {
        return false;
    }
    for c in &hints.singular_curves {
        if let Some(p) = &c.param {
            // S restricted to a degree-e curve has degree 4e
            let n = 4 * p.degree() as i64 + 2;
            if !(0..n).all(|k| sing(&p.point(&q(1), &q(k)))) {
                return false;
            }
        } else {
            let Some((a, b)) = line_points(&c.equations) else { return false };
            for (u, v) in [(1, 0), (0, 1), (1, 1), (1, 2), (1, -1), (2, 1), (1, 3)] {
                let pt: Vec<BigRational> = a.iter().zip(&b).map(|(x, y)| q(u) * x + q(v) * y).collect();
                if !sing(&pt) {
                    return false;
                }
            }
        }
    }
    true
}

/// Two independent integer points on the line cut by two linear forms.
fn line_points(eqs: &[QPoly]) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
    if eqs.len() != 2 || eqs.iter().any(|e| e.degree() != Some(1)) {
        return None;
    }
    let mut found: Vec<Vec<i64>> = Vec::new();
    let r = -6i64..=6;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    let v = vec![a, b, c, d];
                    if v.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let vq: Vec<BigRational> = v.iter().map(|&x| q(x)).collect();
                    if eqs.iter().all(|e| eval_q(e, &vq) == q(0)) {
                        let independent = found.iter().all(|w| {
                            (0..4).any(|i| (0..4).any(|j| w[i] * v[j] != w[j] * v[i]))
                        });
                        if independent {
                            found.push(v);
                            if found.len() == 2 {
                                let conv = |w: &Vec<i64>| w.iter().map(|&x| q(x)).collect();
                                return Some((conv(&found[0]), conv(&found[1])));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// A form as plain `(exponents, coefficient mod p)` terms.
pub type TermList = Vec<(Vec<u32>, u64)>;

/// `a/b mod p` for a rational with denominator prime to `p`.
pub fn rational_mod(c: &BigRational, p: u64) -> u64 {
    let m = num_bigint::BigInt::from(p);
    let num = u64::try_from(((c.numer() % &m) + &m) % &m).unwrap() as i128;
    let den = u64::try_from(((c.denom() % &m) + &m) % &m).unwrap() as i128;
    assert!(den != 0, "denominator divisible by p");
    (num * pow_mod(den, p as i128 - 2, p as i128) % p as i128) as u64
}

pub fn terms_of_q(f: &QPoly, p: u64) -> TermList {
    f.terms().map(|(m, c)| (m.exponents().to_vec(), rational_mod(c, p))).collect()
}

pub fn terms_of_fp(f: &cremona::FpPoly) -> TermList {
    f.terms().map(|(m, c)| (m.exponents().to_vec(), *c)).collect()
}

/// The forms of a pipeline step, reduced modulo `p`.
pub fn step_terms(map: &cremona::pipeline::StepMap, p: u64) -> Vec<TermList> {
    match map {
        cremona::pipeline::StepMap::Q(m) => m.forms().iter().map(|f| terms_of_q(f, p)).collect(),
        cremona::pipeline::StepMap::Fp(m) => {
            assert_eq!(m.field().modulus(), p, "step computed over another prime");
            m.forms().iter().map(terms_of_fp).collect()
        }
    }
}

pub fn eval_terms(f: &TermList, x: &[u64], p: u64) -> u64 {
    let p = p as u128;
    let mut acc = 0u128;
    for (e, c) in f {
        let mut t = *c as u128;
        for (xi, &k) in x.iter().zip(e) {
            for _ in 0..k {
                t = t * *xi as u128 % p;
            }
        }
        acc = (acc + t) % p;
    }
    acc as u64
}

/// Images of `points` under a chain of maps; points landing on a base
/// locus are dropped.
pub fn push_terms(chain: &[Vec<TermList>], points: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    points
        .iter()
        .filter_map(|pt| {
            let mut cur = pt.clone();
            for forms in chain {
                cur = forms.iter().map(|f| eval_terms(f, &cur, p)).collect();
                if cur.iter().all(|&c| c == 0) {
                    return None;
                }
            }
            Some(cur)
        })
        .collect()
}

pub fn random_points(n: usize, count: usize, p: u64, seed: u64) -> Vec<Vec<u64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect()
}

/// Points of `s = 0` over `F_p`: draw `x1, x2, x3` at random and scan all
/// values of `x0`.
pub fn surface_points(s: &QPoly, count: usize, p: u64, seed: u64) -> Vec<Vec<u64>> {
    use rand::{Rng, SeedableRng};
    let f = terms_of_q(s, p);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let rest: Vec<u64> = (0..3).map(|_| rng.gen_range(0..p)).collect();
        let roots: Vec<u64> = (0..p)
            .filter(|&x0| {
                let mut pt = vec![x0];
                pt.extend_from_slice(&rest);
                eval_terms(&f, &pt, p) == 0
            })
            .collect();
        if roots.is_empty() {
            continue;
        }
        let x0 = roots[rng.gen_range(0..roots.len())];
        let mut pt = vec![x0];
        pt.extend_from_slice(&rest);
        out.push(pt);
    }
    out
}

/// Evaluations of all monomials of degree `d` at the points.
pub fn monomial_rows(points: &[Vec<u64>], d: u32, p: u64) -> Vec<Vec<i128>> {
    let n = points[0].len();
    let monos = exponents(n, d);
    points
        .iter()
        .map(|pt| monos.iter().map(|e| eval_terms(&vec![(e.clone(), 1)], pt, p) as i128).collect())
        .collect()
}

/// Number of independent forms of degree `d` vanishing at the points.
pub fn relations_of_degree(points: &[Vec<u64>], d: u32, p: u64) -> usize {
    let rows = monomial_rows(points, d, p);
    rows[0].len() - rank_mod_p(&rows, p as i128)
}

/// A basis of `{ v : rows v = 0 }` modulo `p`.
pub fn kernel_mod_p(rows: &[Vec<i128>], p: i128) -> Vec<Vec<i128>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0i128; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (-m[r][free]).rem_euclid(p);
            }
            v
        })
        .collect()
}

/// Rank over `Q` by fraction-based elimination.
pub fn rank_over_q(rows: &[Vec<BigRational>]) -> usize {
    use num_traits::Zero;
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..m.len() {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let t = &f * &m[rank][k];
                    m[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficient vector of a form in the monomial order of [`exponents`].
pub fn coefficients(f: &QPoly, d: u32) -> Vec<BigRational> {
    exponents(f.nvars(), d).into_iter().map(|e| f.coefficient(&Monomial::new(e))).collect()
}
