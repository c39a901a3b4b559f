//! Multivariate gcd.
//!
//! Homogeneous inputs over `Q` first try a modular test: reduce mod a
//! prime and restrict to a random line through a point where the first
//! input does not vanish. A constant gcd of the restrictions proves the
//! true gcd is constant. Otherwise the gcd comes from a recursive
//! primitive remainder sequence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{usage, Result};
use crate::field::{Field, PrimeField, Rationals, LIFTING_PRIME};
use crate::poly::{ensure_same_ring, Monomial, Polynomial, QPoly};
use crate::univariate;

/// Greatest common divisor of a non-empty list over `Q`, normalized to a
/// primitive integer polynomial with positive leading coefficient.
pub fn multivariate_gcd(fs: &[QPoly]) -> Result<QPoly> {
    ensure_same_ring(fs)?;
    let nonzero: Vec<&QPoly> = fs.iter().filter(|f| !f.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return usage("gcd of an all-zero list");
    };
    let n = first.nvars();
    let mono = common_monomial(nonzero.iter().copied());
    let stripped: Vec<QPoly> = nonzero
        .iter()
        .map(|f| strip_monomial(f, &f.monomial_content()))
        .collect();
    let fp = PrimeField::new(LIFTING_PRIME).expect("prime");
    let rest = if coprime_by_restriction(&stripped, &fp, |f| f.reduce(&fp)) {
        QPoly::one(Rationals, n)
    } else {
        let mut g = stripped[0].clone();
        for f in &stripped[1..] {
            if g.is_constant() {
                break;
            }
            g = gcd_pair(&g, f);
        }
        g
    };
    let out = rest.mul_monomial(&mono);
    Ok(out.primitive_integer())
}

/// Gcd over any field, normalized to be monic.
pub fn gcd_over_field<F: Field>(fs: &[Polynomial<F>]) -> Result<Polynomial<F>> {
    ensure_same_ring(fs)?;
    let nonzero: Vec<&Polynomial<F>> = fs.iter().filter(|f| !f.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return usage("gcd of an all-zero list");
    };
    let n = first.nvars();
    let field = first.field().clone();
    let mono = common_monomial(nonzero.iter().copied());
    let stripped: Vec<Polynomial<F>> = nonzero
        .iter()
        .map(|f| strip_monomial(f, &f.monomial_content()))
        .collect();
    let mut g = stripped[0].clone();
    for f in &stripped[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_pair(&g, f);
    }
    if g.is_constant() {
        g = Polynomial::one(field, n);
    }
    Ok(g.mul_monomial(&mono).monic())
}

/// Fields whose polynomial rings have a gcd routine.
pub trait PolyGcd: Field {
    fn poly_gcd(fs: &[Polynomial<Self>]) -> Result<Polynomial<Self>>;
}

impl PolyGcd for Rationals {
    fn poly_gcd(fs: &[Polynomial<Self>]) -> Result<Polynomial<Self>> {
        multivariate_gcd(fs)
    }
}

impl PolyGcd for PrimeField {
    fn poly_gcd(fs: &[Polynomial<Self>]) -> Result<Polynomial<Self>> {
        ensure_same_ring(fs)?;
        let nonzero: Vec<Polynomial<PrimeField>> = fs.iter().filter(|f| !f.is_zero()).cloned().collect();
        if let Some(first) = nonzero.first() {
            let fp = *first.field();
            if fp.modulus() > 1000 {
                let mono = common_monomial(nonzero.iter());
                let stripped: Vec<_> = nonzero.iter().map(|f| strip_monomial(f, &f.monomial_content())).collect();
                if coprime_by_restriction(&stripped, &fp, |f| Some(f.clone())) {
                    return Ok(Polynomial::one(fp, first.nvars()).mul_monomial(&mono));
                }
            }
        }
        gcd_over_field(fs)
    }
}

fn common_monomial<'a, F: Field + 'a>(fs: impl Iterator<Item = &'a Polynomial<F>>) -> Monomial {
    let mut acc: Option<Vec<u32>> = None;
    for f in fs {
        let m = f.monomial_content();
        acc = Some(match acc {
            None => m.exponents().to_vec(),
            Some(a) => a.iter().zip(m.exponents()).map(|(x, y)| *x.min(y)).collect(),
        });
    }
    Monomial::new(acc.unwrap_or_default())
}

fn strip_monomial<F: Field>(f: &Polynomial<F>, m: &Monomial) -> Polynomial<F> {
    Polynomial::from_terms(
        f.field().clone(),
        f.nvars(),
        f.terms().map(|(t, c)| (m.quotient_of(t), c.clone())),
    )
}

/// Modular line-restriction test. Returns `true` only when the gcd is
/// provably constant; `false` means "unknown".
pub(crate) fn coprime_by_restriction<F: Field>(
    fs: &[Polynomial<F>],
    fp: &PrimeField,
    reduce: impl Fn(&Polynomial<F>) -> Option<Polynomial<PrimeField>>,
) -> bool {
    if fs.len() < 2 || !fs.iter().all(Polynomial::is_homogeneous) {
        return false;
    }
    let Some(reduced) = fs.iter().map(&reduce).collect::<Option<Vec<_>>>() else {
        return false;
    };
    if reduced.iter().zip(fs).any(|(r, f)| r.degree() != f.degree()) {
        return false;
    }
    let n = fs[0].nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9cd);
    for _ in 0..3 {
        let a: Vec<u64> = (0..n).map(|_| fp.random_elem(&mut rng)).collect();
        if fp.is_zero(&reduced[0].eval_unchecked(&a)) {
            continue;
        }
        let b: Vec<u64> = (0..n).map(|_| fp.random_elem(&mut rng)).collect();
        let mut g: Option<univariate::Dense> = None;
        for r in &reduced {
            let u = restrict_to_line(fp, r, &a, &b);
            g = Some(match g {
                None => u,
                Some(prev) => univariate::gcd(fp, &prev, &u),
            });
            if g.as_ref().is_some_and(|d| d.len() == 1) {
                return true;
            }
        }
    }
    false
}

/// `f(s*a + b)` as a dense polynomial in `s`.
pub(crate) fn restrict_to_line(fp: &PrimeField, f: &Polynomial<PrimeField>, a: &[u64], b: &[u64]) -> univariate::Dense {
    let lines: Vec<univariate::Dense> = a.iter().zip(b).map(|(&ai, &bi)| univariate::trim(vec![bi, ai])).collect();
    let d = f.degree().unwrap_or(0) as usize;
    let powers: Vec<Vec<univariate::Dense>> = lines
        .iter()
        .map(|l| {
            let mut v = vec![vec![1u64]];
            for k in 1..=d {
                let next = univariate::mul(fp, &v[k - 1], l);
                v.push(next);
            }
            v
        })
        .collect();
    let mut acc: univariate::Dense = Vec::new();
    for (m, c) in f.terms() {
        let mut t = vec![*c];
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                t = univariate::mul(fp, &t, &powers[i][e as usize]);
            }
        }
        acc = univariate::add(fp, &acc, &t);
    }
    acc
}

fn pick_var<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Option<usize> {
    (0..f.nvars()).find(|&v| f.uses_var(v) || g.uses_var(v))
}

/// Gcd of two polynomials, up to a unit.
fn gcd_pair<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    let one = Polynomial::one(f.field().clone(), f.nvars());
    if f.is_constant() || g.is_constant() {
        return one;
    }
    let Some(v) = pick_var(f, g) else {
        return one;
    };
    if !f.uses_var(v) {
        return gcd_with_coeffs(g, v, f);
    }
    if !g.uses_var(v) {
        return gcd_with_coeffs(f, v, g);
    }
    let (cf, pf) = content_and_primitive(f, v);
    let (cg, pg) = content_and_primitive(g, v);
    let c = gcd_pair(&cf, &cg);
    let (mut a, mut b) = if pf.degree_in(v) >= pg.degree_in(v) { (pf, pg) } else { (pg, pf) };
    loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == Some(0) {
            b = one.clone();
            break;
        }
        a = b;
        b = content_and_primitive(&r, v).1;
    }
    let b = content_and_primitive(&b, v).1;
    (&c * &b).monic()
}

/// `gcd(g, f)` where `g` does not involve `v`: fold over the
/// coefficients of `f` in `v`.
fn gcd_with_coeffs<F: Field>(f: &Polynomial<F>, v: usize, g: &Polynomial<F>) -> Polynomial<F> {
    let mut acc = g.clone();
    for c in f.coefficients_in(v) {
        if c.is_zero() {
            continue;
        }
        acc = gcd_pair(&acc, &c);
        if acc.is_constant() {
            break;
        }
    }
    acc
}

/// Content with respect to `v` (a polynomial free of `v`) and the
/// primitive part.
fn content_and_primitive<F: Field>(f: &Polynomial<F>, v: usize) -> (Polynomial<F>, Polynomial<F>) {
    let coeffs: Vec<Polynomial<F>> = f.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    let mut c = coeffs[0].clone();
    for x in &coeffs[1..] {
        if c.is_constant() {
            break;
        }
        c = gcd_pair(&c, x);
    }
    if c.is_constant() {
        return (Polynomial::one(f.field().clone(), f.nvars()), f.clone());
    }
    let c = c.monic();
    let p = f
        .exact_div(&c)
        .expect("same ring")
        .expect("content divides");
    (c, p)
}

fn pseudo_rem<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>, v: usize) -> Polynomial<F> {
    let db = b.degree_in(v).unwrap_or(0);
    let bc = b.coefficients_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v).unwrap_or(0);
        if dr < db {
            break;
        }
        let lr = r.coefficients_in(v)[dr as usize].clone();
        let mut shift = vec![0; a.nvars()];
        shift[v] = dr - db;
        let t = (&lr * b).mul_monomial(&Monomial::new(shift));
        r = &(&lb * &r) - &t;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn q(s: &str) -> QPoly {
        parse_polynomial(s, &["x0", "x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn monomial_gcd() {
        assert_eq!(multivariate_gcd(&[q("x0*x1"), q("x0*x2")]).unwrap(), q("x0"));
    }

    #[test]
    fn gcd_with_one() {
        assert_eq!(multivariate_gcd(&[q("x0^2 + x1*x3"), q("1")]).unwrap(), q("1"));
    }

    #[test]
    fn all_zero_rejected() {
        assert!(multivariate_gcd(&[q("0"), q("0")]).is_err());
    }

    #[test]
    fn shared_nonmonomial_factor() {
        let h = q("x0*x1 - x2^2 + 3*x3^2");
        let a = &h * &q("x0 + 2*x3");
        let b = &h * &q("x1^2 - x0*x2");
        assert_eq!(multivariate_gcd(&[a.clone(), b.clone()]).unwrap(), h.primitive_integer());
        let ap = &a * &q("x1");
        assert_eq!(multivariate_gcd(&[ap, b]).unwrap(), h.primitive_integer());
    }

    #[test]
    fn inhomogeneous_inputs_use_prs() {
        let h = q("x0 + x1^2 + 1");
        let a = &h * &q("x2 - 1");
        let b = &h * &q("x2 + x3");
        assert_eq!(multivariate_gcd(&[a, b]).unwrap(), h.primitive_integer());
    }

    #[test]
    fn over_prime_field() {
        let fp = PrimeField::new(10007).unwrap();
        let h = q("x0 - 5*x3").reduce(&fp).unwrap();
        let a = &h * &q("x1^2 + x2*x3").reduce(&fp).unwrap();
        let b = &h * &q("x1 + x2").reduce(&fp).unwrap();
        assert_eq!(gcd_over_field(&[a, b]).unwrap(), h.monic());
    }
}
