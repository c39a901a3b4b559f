//! Sparse multivariate polynomials over a [`Field`].
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`] under graded
//! lexicographic order, so two polynomials are equal exactly when their
//! term maps are equal. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{usage, Error, Result};
use crate::field::{Field, PrimeField, Rationals};

/// Exponent vector. Ordered by total degree first, then lexicographically
/// with `x0` most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

pub type QPoly = Polynomial<Rationals>;
pub type FpPoly = Polynomial<PrimeField>;

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.nvars);
        f.write_str(&self.to_string_with(&names))
    }
}

pub fn default_var_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        Polynomial {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: F, nvars: usize) -> Self {
        let c = field.one();
        Self::constant(field, nvars, c)
    }

    pub fn var(field: F, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let c = field.one();
        Self::term(field, Monomial::var(nvars, i), c)
    }

    pub fn term(field: F, m: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(field, m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(field: F, nvars: usize, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(field: F, coeffs: &[F::Elem]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            field,
            n,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }

    pub fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = self.field.add(existing, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> F::Elem {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return usage(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            ));
        }
        if self.field != other.field {
            return usage(format!(
                "polynomials over {} and {}",
                self.field.name(),
                other.field.name()
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = self.field.mul(c1, c2);
                match acc.get_mut(&m) {
                    Some(e) => *e = self.field.add(e, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !self.field.is_zero(c));
        Ok(Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: acc,
        })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.nvars);
        }
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.clone(), self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return usage(format!(
                "point of length {} for a polynomial in {} variables",
                point.len(),
                self.nvars
            ));
        }
        Ok(self.eval_unchecked(point))
    }

    pub fn eval_unchecked(&self, point: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let maxdeg = self.terms.keys().map(|m| m.0.iter().copied().max().unwrap_or(0)).max().unwrap_or(0) as usize;
        let powers: Vec<Vec<F::Elem>> = point
            .iter()
            .map(|x| {
                let mut v = Vec::with_capacity(maxdeg + 1);
                v.push(f.one());
                for k in 1..=maxdeg {
                    let next = f.mul(&v[k - 1], x);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = f.mul(&t, &powers[i][e as usize]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return usage(format!("variable index {var} out of range"));
        }
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, f.mul(c, &f.from_u64(e as u64)));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i).expect("index in range")).collect()
    }

    /// Partial derivative with respect to a multi-index.
    pub fn derivative(&self, alpha: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.partial(i).expect("index in range");
            }
        }
        out
    }

    /// `self(g_0, ..., g_{n-1})`; the result lives in the ring of the `g_i`.
    pub fn substitute(&self, subs: &[Self]) -> Result<Self> {
        if subs.len() != self.nvars {
            return usage(format!(
                "substituting {} polynomials into {} variables",
                subs.len(),
                self.nvars
            ));
        }
        let Some(first) = subs.first() else {
            return Ok(self.clone());
        };
        let target_n = first.nvars;
        for s in subs {
            first.check_compatible(s)?;
        }
        if self.field != first.field {
            return usage("substitution across different fields");
        }
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(self.nvars);
        for (i, s) in subs.iter().enumerate() {
            let maxe = self.degree_in(i).unwrap_or(0) as usize;
            let mut v = vec![Self::one(self.field.clone(), target_n)];
            for k in 1..=maxe {
                let next = &v[k - 1] * s;
                v.push(next);
            }
            powers.push(v);
        }
        let mut acc: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        let f = &self.field;
        for (m, c) in &self.terms {
            let mut t = Self::constant(f.clone(), target_n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            for (tm, tc) in t.terms {
                match acc.get_mut(&tm) {
                    Some(x) => *x = f.add(x, &tc),
                    None => {
                        acc.insert(tm, tc);
                    }
                }
            }
        }
        acc.retain(|_, c| !f.is_zero(c));
        Ok(Polynomial {
            field: f.clone(),
            nvars: target_n,
            terms: acc,
        })
    }

    /// Substitute the linear forms given by the rows of `m` (row `i` is the
    /// image of variable `i`).
    pub fn linear_substitute(&self, rows: &[Vec<F::Elem>]) -> Result<Self> {
        let subs: Vec<Self> = rows
            .iter()
            .map(|r| Self::linear(self.field.clone(), r))
            .collect();
        self.substitute(&subs)
    }

    /// Coefficients with respect to `var`: `self = sum_k c_k * var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.field.clone(), self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out[k].add_term(m2, c.clone());
        }
        out
    }

    /// Embed into a ring with more variables (new ones appended).
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        Polynomial {
            field: self.field.clone(),
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(nvars, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Drop trailing variables that do not occur.
    pub fn restrict_vars(&self, nvars: usize) -> Result<Self> {
        if self.terms.keys().any(|m| m.0[nvars..].iter().any(|&e| e > 0)) {
            return usage("polynomial uses variables beyond the requested range");
        }
        Ok(Polynomial {
            field: self.field.clone(),
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(m.0[..nvars].to_vec()), c.clone()))
                .collect(),
        })
    }

    /// Division by a single polynomial under graded-lex order. The remainder
    /// is zero exactly when `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_compatible(divisor)?;
        let Some((lm, lc)) = divisor.leading_term() else {
            return usage("division by the zero polynomial");
        };
        let f = &self.field;
        let lc_inv = f.inv(lc).expect("nonzero");
        let mut rem = self.clone();
        let mut quot = Self::zero(f.clone(), self.nvars);
        let mut out_rem = Self::zero(f.clone(), self.nvars);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = f.mul(&c, &lc_inv);
                for (dm, dc) in &divisor.terms {
                    rem.add_term(dm.mul(&qm), f.neg(&f.mul(dc, &qc)));
                }
                quot.add_term(qm, qc);
            } else {
                rem.terms.remove(&m);
                out_rem.add_term(m, c);
            }
        }
        Ok((quot, out_rem))
    }

    /// `Some(q)` with `self = q * divisor`, or `None` if not divisible.
    pub fn exact_div(&self, divisor: &Self) -> Result<Option<Self>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(self.nvars);
        };
        let mut e = first.0.clone();
        for m in it {
            for (a, b) in e.iter_mut().zip(&m.0) {
                *a = (*a).min(*b);
            }
        }
        Monomial(e)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        assert!(names.len() >= self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], e)
                    }
                })
                .collect();
            let cs = self.field.format(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    /// Change the field of the coefficients through a homomorphism.
    pub fn map_coeffs<G: Field>(&self, target: &G, phi: impl Fn(&F::Elem) -> Option<G::Elem>) -> Option<Polynomial<G>> {
        let mut out = Polynomial::zero(target.clone(), self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), phi(c)?);
        }
        Some(out)
    }
}

impl Polynomial<Rationals> {
    /// Reduction mod `p`; `None` if some denominator vanishes mod `p`.
    pub fn reduce(&self, fp: &PrimeField) -> Option<Polynomial<PrimeField>> {
        self.map_coeffs(fp, |c| fp.from_rational(c))
    }

    /// Primitive integer multiple: integer coefficients with gcd 1 and a
    /// positive leading coefficient.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = (c * BigRational::from_integer(lcm.clone())).to_integer();
            g = g.gcd(&n);
        }
        let mut scale = BigRational::new(lcm, g);
        if self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            scale = -scale;
        }
        self.scale(&scale)
    }

    pub fn max_coeff_height(&self) -> BigInt {
        self.terms
            .values()
            .map(crate::field::rational_height)
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.checked_add(rhs).expect("incompatible polynomial operands")
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.checked_sub(rhs).expect("incompatible polynomial operands")
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.checked_mul(rhs).expect("incompatible polynomial operands")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        let m1 = self.field.neg(&self.field.one());
        self.scale(&m1)
    }
}

/// All monomials of exact total degree `degree` in `nvars` variables,
/// in decreasing graded-lex order (`x0^d` first).
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if n == 1 {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Convenience for building rational polynomials from integer data.
pub fn qpoly_from_ints(nvars: usize, terms: &[(&[u32], i64)]) -> QPoly {
    Polynomial::from_terms(
        Rationals,
        nvars,
        terms
            .iter()
            .map(|(e, c)| (Monomial::new(e.to_vec()), Rationals.from_i64(*c))),
    )
}

pub(crate) fn ensure_same_ring<F: Field>(polys: &[Polynomial<F>]) -> Result<()> {
    if let Some(first) = polys.first() {
        for p in polys {
            if p.nvars != first.nvars || p.field != first.field {
                return Err(Error::Usage("polynomials over different rings".into()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn q(src: &str) -> QPoly {
        parse_polynomial(src, &["x0", "x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = q("x0 + x1");
        let b = q("x0 - x1");
        assert_eq!(&a * &b, q("x0^2 - x1^2"));
    }

    #[test]
    fn mismatched_rings_are_usage_errors() {
        let a = q("x0");
        let b = parse_polynomial("x", &["x"]).unwrap();
        assert!(matches!(a.checked_add(&b), Err(Error::Usage(_))));
        let fp = PrimeField::new(101).unwrap();
        let c = a.reduce(&fp).unwrap();
        let fq = PrimeField::new(103).unwrap();
        let d = a.reduce(&fq).unwrap();
        assert!(matches!(c.checked_mul(&d), Err(Error::Usage(_))));
    }

    #[test]
    fn partials() {
        let f = q("x0^2*x1^2");
        assert_eq!(f.partial(0).unwrap(), q("2*x0*x1^2"));
        assert!(q("7").partial(0).unwrap().is_zero());
        assert!(f.partial(9).is_err());
    }

    #[test]
    fn homogeneous_scaling() {
        let f = q("x0^3 - 2*x1*x2*x3 + x3^3");
        let pt: Vec<BigRational> = [1, 2, -1, 3].iter().map(|&v| Rationals.from_i64(v)).collect();
        let lam = Rationals.from_i64(5);
        let scaled: Vec<BigRational> = pt.iter().map(|v| v * &lam).collect();
        let lhs = f.eval(&scaled).unwrap();
        let rhs = f.eval(&pt).unwrap() * Rationals.pow(&lam, 3);
        assert_eq!(lhs, rhs);
        assert!(f.eval(&pt[..3]).is_err());
    }

    #[test]
    fn division_detects_divisibility() {
        let a = q("x0^2 - x1^2");
        let b = q("x0 + x1");
        assert_eq!(a.exact_div(&b).unwrap(), Some(q("x0 - x1")));
        assert_eq!(q("x0^2 + x1^2").exact_div(&b).unwrap(), None);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(4, 2).len(), 10);
        assert_eq!(monomials_of_degree(4, 4).len(), 35);
        assert_eq!(monomials_of_degree(8, 2).len(), 36);
        let lin = monomials_of_degree(4, 1);
        assert_eq!(lin[0], Monomial::var(4, 0));
        assert_eq!(lin[3], Monomial::var(4, 3));
    }

    #[test]
    fn display_round_trip() {
        let f = q("-1/2*x0^2*x1 + 3*x2 - 7");
        let names: Vec<String> = ["x0", "x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
        let s = f.to_string_with(&names);
        assert_eq!(s, "-1/2*x0^2*x1 + 3*x2 - 7");
        assert_eq!(q(&s), f);
    }

    #[test]
    fn substitution_composes() {
        let f = q("x0*x1 - x2^2");
        let subs = vec![q("x0 + x1"), q("x0 - x1"), q("x3"), q("x2")];
        assert_eq!(f.substitute(&subs).unwrap(), q("x0^2 - x1^2 - x3^2"));
    }

    #[test]
    fn primitive_integer_normalizes() {
        let f = q("-2/3*x0 + 4/9*x1");
        assert_eq!(f.primitive_integer(), q("3*x0 - 2*x1"));
    }
}
