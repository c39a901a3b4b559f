//! Linear systems of forms with prescribed base conditions.
//!
//! A condition becomes a block of linear rows on the coefficient vector of
//! a degree-`d` form, indexed by [`monomial_basis`]. The system is the
//! exact nullspace of all rows, re-verified condition by condition with an
//! independent substitution check.

use crate::error::{usage, Error, Result};
use crate::field::Field;
use crate::gcd::gcd_over_field;
use crate::matrix::{rank_of, Matrix};
use crate::poly::{monomials_of_degree, Monomial, Polynomial};

pub use crate::poly::monomials_of_degree as monomial_basis;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveLabel {
    Line,
    Conic,
    TwistedCubic,
    RationalQuartic,
    Custom,
}

impl CurveLabel {
    pub fn expected_degree(self) -> Option<u32> {
        match self {
            CurveLabel::Line => Some(1),
            CurveLabel::Conic => Some(2),
            CurveLabel::TwistedCubic => Some(3),
            CurveLabel::RationalQuartic => Some(4),
            CurveLabel::Custom => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveLabel::Line => "line",
            CurveLabel::Conic => "conic",
            CurveLabel::TwistedCubic => "twisted_cubic",
            CurveLabel::RationalQuartic => "rational_quartic",
            CurveLabel::Custom => "custom",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "line" => CurveLabel::Line,
            "conic" => CurveLabel::Conic,
            "twisted_cubic" => CurveLabel::TwistedCubic,
            "rational_quartic" => CurveLabel::RationalQuartic,
            "custom" => CurveLabel::Custom,
            _ => return None,
        })
    }
}

/// A rational curve in `P^n` given by binary forms in `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveParam<F: Field> {
    components: Vec<Polynomial<F>>,
    degree: u32,
    label: CurveLabel,
}

impl<F: Field> CurveParam<F> {
    pub fn new(components: Vec<Polynomial<F>>, label: CurveLabel) -> Result<Self> {
        let Some(first) = components.iter().find(|c| !c.is_zero()) else {
            return usage("curve parametrization with all components zero");
        };
        let e = first.degree().unwrap_or(0);
        for c in &components {
            if c.nvars() != 2 {
                return usage("curve components must be binary forms in (s, t)");
            }
            if !c.is_zero() && (!c.is_homogeneous() || c.degree() != Some(e)) {
                return usage("curve components must be homogeneous of a common degree");
            }
        }
        if e == 0 {
            return usage("constant curve parametrization");
        }
        if let Some(want) = label.expected_degree() {
            if want != e {
                return Err(Error::Usage(format!(
                    "a {} needs parametrization degree {want}, got {e}",
                    label.name()
                )));
            }
        }
        let g = gcd_over_field(&components)?;
        if !g.is_constant() {
            return Err(Error::Usage(format!(
                "parametrization components share the factor {g}; the curve is degenerate"
            )));
        }
        Ok(CurveParam {
            components,
            degree: e,
            label,
        })
    }

    /// The line through two points.
    pub fn line_through(field: &F, p: &[F::Elem], q: &[F::Elem]) -> Result<Self> {
        let comps = p
            .iter()
            .zip(q)
            .map(|(a, b)| Polynomial::linear(field.clone(), &[a.clone(), b.clone()]))
            .collect();
        Self::new(comps, CurveLabel::Line)
    }

    pub fn components(&self) -> &[Polynomial<F>] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn label(&self) -> CurveLabel {
        self.label
    }

    pub fn ambient_vars(&self) -> usize {
        self.components.len()
    }

    pub fn field(&self) -> &F {
        self.components[0].field()
    }

    pub fn point(&self, s: &F::Elem, t: &F::Elem) -> Vec<F::Elem> {
        self.components
            .iter()
            .map(|c| c.eval_unchecked(&[s.clone(), t.clone()]))
            .collect()
    }

    /// `f(gamma(s, t))` as a binary form.
    pub fn pullback(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        f.substitute(&self.components)
    }

    pub fn map_field<G: Field>(&self, target: &G, phi: impl Fn(&F::Elem) -> Option<G::Elem>) -> Option<CurveParam<G>> {
        let comps = self
            .components
            .iter()
            .map(|c| c.map_coeffs(target, &phi))
            .collect::<Option<Vec<_>>>()?;
        Some(CurveParam {
            components: comps,
            degree: self.degree,
            label: self.label,
        })
    }
}

#[derive(Clone, Debug)]
pub enum LinearCondition<F: Field> {
    /// All partials of order `< m` vanish at the point.
    PointMultiplicity { point: Vec<F::Elem>, m: u32 },
    /// All partials of order `< m` vanish identically along the curve.
    CurveMultiplicity { curve: CurveParam<F>, m: u32 },
    /// Vanishing at each listed point.
    CurveThroughSamples { points: Vec<Vec<F::Elem>> },
    /// Membership in `I^m` for the ideal `I` generated by `generators`.
    /// Used for curves without a parametrization over the base field.
    CurveIdeal { generators: Vec<Polynomial<F>>, m: u32 },
    /// Weighted order `>= m` at a coordinate point. `weights` lists the
    /// weights of the remaining coordinates in index order.
    ValuationOrder { center: Vec<F::Elem>, weights: Vec<u32>, m: u32 },
    /// The given form must lie in the system.
    ContainsSurface { surface: Polynomial<F> },
}

impl<F: Field> LinearCondition<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            LinearCondition::PointMultiplicity { .. } => "point_multiplicity",
            LinearCondition::CurveMultiplicity { .. } => "curve_multiplicity",
            LinearCondition::CurveThroughSamples { .. } => "curve_through_samples",
            LinearCondition::CurveIdeal { .. } => "curve_ideal",
            LinearCondition::ValuationOrder { .. } => "valuation_order",
            LinearCondition::ContainsSurface { .. } => "contains_surface",
        }
    }

    fn validate(&self, field: &F, nvars: usize) -> Result<()> {
        match self {
            LinearCondition::PointMultiplicity { point, m } => {
                check_m(*m)?;
                if point.len() != nvars {
                    return usage("point arity does not match the ambient space");
                }
            }
            LinearCondition::CurveMultiplicity { curve, m } => {
                check_m(*m)?;
                if curve.ambient_vars() != nvars {
                    return usage("curve lives in a different ambient space");
                }
            }
            LinearCondition::CurveThroughSamples { points } => {
                if points.is_empty() {
                    return usage("empty sample list");
                }
                if points.iter().any(|p| p.len() != nvars) {
                    return usage("sample arity does not match the ambient space");
                }
            }
            LinearCondition::CurveIdeal { generators, m } => {
                check_m(*m)?;
                if generators.is_empty() || generators.iter().any(|g| g.nvars() != nvars || !g.is_homogeneous() || g.is_zero()) {
                    return usage("ideal generators must be nonzero forms in the ambient ring");
                }
            }
            LinearCondition::ValuationOrder { center, weights, m } => {
                check_m(*m)?;
                if center.len() != nvars || weights.len() + 1 != nvars {
                    return usage("valuation center or weights have the wrong arity");
                }
                if weights.contains(&0) {
                    return usage("valuation weights must be positive");
                }
                coordinate_index(field, center)?;
            }
            LinearCondition::ContainsSurface { surface } => {
                if surface.nvars() != nvars || !surface.is_homogeneous() || surface.is_zero() {
                    return usage("contained surface must be a nonzero form in the ambient ring");
                }
            }
        }
        Ok(())
    }
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        return usage("multiplicity must be at least 1");
    }
    Ok(())
}

/// Index of the unique nonzero coordinate of a coordinate point.
fn coordinate_index<F: Field>(field: &F, center: &[F::Elem]) -> Result<usize> {
    let nonzero: Vec<usize> = (0..center.len()).filter(|&i| !field.is_zero(&center[i])).collect();
    match nonzero.as_slice() {
        [k] => Ok(*k),
        _ => usage("valuation centers must be coordinate points; move the point to [1,0,0,0] first"),
    }
}

/// All multi-indices of total order `< m` in `n` variables.
pub fn multi_indices_below(n: usize, m: u32) -> Vec<Vec<u32>> {
    (0..m)
        .flat_map(|k| monomials_of_degree(n, k).into_iter().map(|mo| mo.exponents().to_vec()))
        .collect()
}

/// `d^alpha x^beta`, as a coefficient and a monomial; `None` if zero.
fn monomial_derivative<F: Field>(field: &F, beta: &Monomial, alpha: &[u32]) -> Option<(F::Elem, Monomial)> {
    let mut c = field.one();
    let mut e = beta.exponents().to_vec();
    for (i, &a) in alpha.iter().enumerate() {
        if a > e[i] {
            return None;
        }
        for k in 0..a {
            c = field.mul(&c, &field.from_u64((e[i] - k) as u64));
        }
        e[i] -= a;
    }
    if field.is_zero(&c) {
        return None;
    }
    Some((c, Monomial::new(e)))
}

/// Rows over the coefficient space of degree-`degree` forms.
pub fn condition_rows<F: Field>(field: &F, nvars: usize, degree: u32, cond: &LinearCondition<F>) -> Result<Vec<Vec<F::Elem>>> {
    cond.validate(field, nvars)?;
    let monos = monomials_of_degree(nvars, degree);
    let zero = field.zero();
    let rows = match cond {
        LinearCondition::PointMultiplicity { point, m } => multi_indices_below(nvars, *m)
            .iter()
            .map(|alpha| {
                monos
                    .iter()
                    .map(|beta| match monomial_derivative(field, beta, alpha) {
                        None => zero.clone(),
                        Some((c, mono)) => {
                            let v = Polynomial::term(field.clone(), mono, c);
                            v.eval_unchecked(point)
                        }
                    })
                    .collect()
            })
            .collect(),
        LinearCondition::CurveMultiplicity { curve, m } => {
            let mut rows = Vec::new();
            for alpha in multi_indices_below(nvars, *m) {
                let pulled: Vec<Polynomial<F>> = monos
                    .iter()
                    .map(|beta| match monomial_derivative(field, beta, &alpha) {
                        None => Ok(Polynomial::zero(field.clone(), 2)),
                        Some((c, mono)) => curve.pullback(&Polynomial::term(field.clone(), mono, c)),
                    })
                    .collect::<Result<_>>()?;
                let d = (degree - alpha.iter().sum::<u32>()) * curve.degree();
                for bm in monomials_of_degree(2, d) {
                    rows.push(pulled.iter().map(|p| p.coefficient(&bm)).collect());
                }
            }
            rows
        }
        LinearCondition::CurveThroughSamples { points } => points
            .iter()
            .map(|p| {
                monos
                    .iter()
                    .map(|beta| Polynomial::term(field.clone(), beta.clone(), field.one()).eval_unchecked(p))
                    .collect()
            })
            .collect(),
        LinearCondition::CurveIdeal { generators, m } => {
            let span = ideal_power_span(field, nvars, degree, generators, *m);
            // rows are the annihilator of the span
            if span.is_empty() {
                identity_rows(field, monos.len())
            } else {
                Matrix::from_rows(field.clone(), monos.len(), span)?.nullspace()
            }
        }
        LinearCondition::ValuationOrder { center, weights, m } => {
            let k = coordinate_index(field, center)?;
            monos
                .iter()
                .enumerate()
                .filter(|(_, beta)| weighted_order(beta, k, weights) < *m)
                .map(|(j, _)| {
                    let mut r = vec![zero.clone(); monos.len()];
                    r[j] = field.one();
                    r
                })
                .collect()
        }
        LinearCondition::ContainsSurface { .. } => Vec::new(),
    };
    Ok(rows)
}

fn identity_rows<F: Field>(field: &F, n: usize) -> Vec<Vec<F::Elem>> {
    (0..n)
        .map(|i| {
            let mut r = vec![field.zero(); n];
            r[i] = field.one();
            r
        })
        .collect()
}

/// Weighted order in the chart where coordinate `k` is 1.
pub fn weighted_order(beta: &Monomial, k: usize, weights: &[u32]) -> u32 {
    beta.exponents()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .zip(weights)
        .map(|((_, &e), &w)| e * w)
        .sum()
}

/// Products `g^alpha` with `|alpha| = m`.
fn generator_products<F: Field>(field: &F, nvars: usize, gens: &[Polynomial<F>], m: u32) -> Vec<Polynomial<F>> {
    monomials_of_degree(gens.len(), m)
        .iter()
        .map(|alpha| {
            let mut p = Polynomial::one(field.clone(), nvars);
            for (g, &a) in gens.iter().zip(alpha.exponents()) {
                if a > 0 {
                    p = &p * &g.pow(a);
                }
            }
            p
        })
        .collect()
}

/// Coefficient vectors spanning the degree-`degree` part of `I^m`.
fn ideal_power_span<F: Field>(field: &F, nvars: usize, degree: u32, gens: &[Polynomial<F>], m: u32) -> Vec<Vec<F::Elem>> {
    let monos = monomials_of_degree(nvars, degree);
    let mut out = Vec::new();
    for prod in generator_products(field, nvars, gens, m) {
        let dp = prod.degree().unwrap_or(0);
        if dp > degree {
            continue;
        }
        for mult in monomials_of_degree(nvars, degree - dp) {
            let f = prod.mul_monomial(&mult);
            out.push(monos.iter().map(|b| f.coefficient(b)).collect());
        }
    }
    out
}

/// Coefficient vector of a form in the [`monomial_basis`] order.
pub fn coefficient_vector<F: Field>(f: &Polynomial<F>, degree: u32) -> Vec<F::Elem> {
    monomials_of_degree(f.nvars(), degree)
        .iter()
        .map(|m| f.coefficient(m))
        .collect()
}

pub fn from_coefficient_vector<F: Field>(field: &F, nvars: usize, degree: u32, v: &[F::Elem]) -> Polynomial<F> {
    Polynomial::from_terms(field.clone(), nvars, monomials_of_degree(nvars, degree).into_iter().zip(v.iter().cloned()))
}

/// Independent check that `f` satisfies `cond`, by substitution.
pub fn satisfies<F: Field>(f: &Polynomial<F>, cond: &LinearCondition<F>) -> Result<bool> {
    let field = f.field();
    Ok(match cond {
        LinearCondition::PointMultiplicity { point, m } => multi_indices_below(f.nvars(), *m)
            .iter()
            .all(|alpha| field.is_zero(&f.derivative(alpha).eval_unchecked(point))),
        LinearCondition::CurveMultiplicity { curve, m } => {
            for alpha in multi_indices_below(f.nvars(), *m) {
                if !curve.pullback(&f.derivative(&alpha))?.is_zero() {
                    return Ok(false);
                }
            }
            true
        }
        LinearCondition::CurveThroughSamples { points } => points.iter().all(|p| field.is_zero(&f.eval_unchecked(p))),
        LinearCondition::CurveIdeal { generators, m } => ideal_membership_certificate(f, generators, *m)?.is_some(),
        LinearCondition::ValuationOrder { center, weights, m } => {
            let k = coordinate_index(field, center)?;
            f.terms().all(|(beta, _)| weighted_order(beta, k, weights) >= *m)
        }
        LinearCondition::ContainsSurface { .. } => true,
    })
}

/// Cofactors `a_alpha` with `f = sum a_alpha g^alpha`, checked by exact
/// multiplication. `None` when `f` is not in `I^m`.
pub fn ideal_membership_certificate<F: Field>(
    f: &Polynomial<F>,
    gens: &[Polynomial<F>],
    m: u32,
) -> Result<Option<Vec<Polynomial<F>>>> {
    if f.is_zero() {
        return Ok(Some(Vec::new()));
    }
    if !f.is_homogeneous() {
        return usage("ideal membership is tested for forms only");
    }
    let field = f.field().clone();
    let n = f.nvars();
    let d = f.degree().unwrap_or(0);
    let prods = generator_products(&field, n, gens, m);
    let mut columns: Vec<(usize, Monomial)> = Vec::new();
    let mut col_vecs: Vec<Vec<F::Elem>> = Vec::new();
    let monos = monomials_of_degree(n, d);
    for (i, p) in prods.iter().enumerate() {
        let dp = p.degree().unwrap_or(0);
        if dp > d {
            continue;
        }
        for mult in monomials_of_degree(n, d - dp) {
            let g = p.mul_monomial(&mult);
            col_vecs.push(monos.iter().map(|b| g.coefficient(b)).collect());
            columns.push((i, mult));
        }
    }
    if columns.is_empty() {
        return Ok(None);
    }
    let a = Matrix::from_rows(field.clone(), columns.len(), transpose(&col_vecs, monos.len()))?;
    let rhs: Vec<F::Elem> = monos.iter().map(|b| f.coefficient(b)).collect();
    let Some(x) = a.solve(&rhs)? else {
        return Ok(None);
    };
    let mut cof = vec![Polynomial::zero(field.clone(), n); prods.len()];
    for ((i, mult), c) in columns.into_iter().zip(x) {
        cof[i].add_term(mult, c);
    }
    let mut check = Polynomial::zero(field, n);
    for (c, p) in cof.iter().zip(&prods) {
        check = &check + &(c * p);
    }
    if check != *f {
        return Err(Error::Inconsistent("ideal membership cofactors do not reproduce the form".into()));
    }
    Ok(Some(cof))
}

fn transpose<E: Clone>(cols: &[Vec<E>], nrows: usize) -> Vec<Vec<E>> {
    (0..nrows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct LinearSystemBasis<F: Field> {
    pub degree: u32,
    pub nvars: usize,
    pub basis: Vec<Polynomial<F>>,
    /// `basis.len() - 1`; `-1` for the empty system.
    pub projective_dim: i64,
}

impl<F: Field> LinearSystemBasis<F> {
    pub fn from_basis(field: &F, nvars: usize, degree: u32, basis: Vec<Polynomial<F>>) -> Result<Self> {
        for b in &basis {
            if b.nvars() != nvars || b.field() != field || !b.is_homogeneous() || b.degree() != Some(degree) {
                return usage("basis elements must be forms of the stated degree");
            }
        }
        let vecs: Vec<_> = basis.iter().map(|b| coefficient_vector(b, degree)).collect();
        let len = monomials_of_degree(nvars, degree).len();
        if rank_of(field, &vecs, len) != basis.len() {
            return usage("basis elements are linearly dependent");
        }
        Ok(LinearSystemBasis {
            degree,
            nvars,
            projective_dim: basis.len() as i64 - 1,
            basis,
        })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn rank_with(&self, extra: &[Polynomial<F>]) -> usize {
        let Some(first) = self.basis.first().or(extra.first()) else {
            return 0;
        };
        let vecs: Vec<_> = self
            .basis
            .iter()
            .chain(extra)
            .map(|b| coefficient_vector(b, self.degree))
            .collect();
        rank_of(first.field(), &vecs, monomials_of_degree(self.nvars, self.degree).len())
    }

    /// Exact span membership.
    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        if f.is_zero() {
            return true;
        }
        if f.nvars() != self.nvars || !f.is_homogeneous() || f.degree() != Some(self.degree) {
            return false;
        }
        self.rank_with(std::slice::from_ref(f)) == self.basis.len()
    }

    /// Codimension of `self` inside `other`, or `None` if not a subspace.
    pub fn codim_in(&self, other: &Self) -> Option<usize> {
        if self.degree != other.degree || self.nvars != other.nvars {
            return None;
        }
        if !self.basis.iter().all(|b| other.contains(b)) {
            return None;
        }
        Some(other.len() - self.len())
    }
}

/// Exact nullspace of the stacked condition rows, re-verified.
pub fn solve_system<F: Field>(field: &F, nvars: usize, degree: u32, conditions: &[LinearCondition<F>]) -> Result<LinearSystemBasis<F>> {
    let ncols = monomials_of_degree(nvars, degree).len();
    let mut rows = Vec::new();
    for c in conditions {
        rows.extend(condition_rows(field, nvars, degree, c)?);
    }
    let kernel = if rows.is_empty() {
        identity_rows(field, ncols)
    } else {
        Matrix::from_rows(field.clone(), ncols, rows)?.nullspace()
    };
    let basis: Vec<Polynomial<F>> = kernel
        .iter()
        .map(|v| from_coefficient_vector(field, nvars, degree, v))
        .collect();
    for f in &basis {
        for c in conditions {
            if !satisfies(f, c)? {
                return Err(Error::Inconsistent(format!(
                    "basis element fails its {} condition on re-verification",
                    c.kind()
                )));
            }
        }
    }
    let sys = LinearSystemBasis {
        degree,
        nvars,
        projective_dim: basis.len() as i64 - 1,
        basis,
    };
    for c in conditions {
        if let LinearCondition::ContainsSurface { surface } = c {
            if !sys.contains(surface) {
                return Err(Error::Contract("the surface does not satisfy the base conditions of the system".into()));
            }
        }
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::parse::parse_polynomial;
    use crate::poly::QPoly;

    fn q(s: &str) -> QPoly {
        parse_polynomial(s, &["x0", "x1", "x2", "x3"]).unwrap()
    }

    fn st(s: &str) -> QPoly {
        parse_polynomial(s, &["s", "t"]).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<num_rational::BigRational> {
        v.iter().map(|&x| Rationals.from_i64(x)).collect()
    }

    #[test]
    fn basis_counts() {
        assert_eq!(monomial_basis(4, 2).len(), 10);
        assert_eq!(monomial_basis(4, 4).len(), 35);
        assert_eq!(monomial_basis(4, 1).len(), 4);
    }

    #[test]
    fn point_kills_one_coefficient() {
        let c = LinearCondition::PointMultiplicity { point: pt(&[1, 0, 0, 0]), m: 1 };
        let rows = condition_rows(&Rationals, 4, 2, &c).unwrap();
        assert_eq!(rows.len(), 1);
        let sys = solve_system(&Rationals, 4, 2, &[c]).unwrap();
        assert_eq!(sys.len(), 9);
        assert!(sys.basis.iter().all(|b| b.coefficient(&Monomial::new(vec![2, 0, 0, 0])) == Rationals.zero()));
    }

    #[test]
    fn quadrics_through_a_line() {
        let line = CurveParam::new(vec![st("s"), st("t"), st("0"), st("0")], CurveLabel::Line).unwrap();
        let c = LinearCondition::CurveMultiplicity { curve: line, m: 1 };
        assert_eq!(condition_rows(&Rationals, 4, 2, &c).unwrap().len(), 3);
        let sys = solve_system(&Rationals, 4, 2, &[c]).unwrap();
        assert_eq!(sys.len(), 7);
    }

    #[test]
    fn weighted_order_basis() {
        let c = LinearCondition::ValuationOrder { center: pt(&[1, 0, 0, 0]), weights: vec![2, 1, 1], m: 2 };
        let sys = solve_system(&Rationals, 4, 2, &[c]).unwrap();
        let want = ["x0*x1", "x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2"];
        assert_eq!(sys.len(), 7);
        for w in want {
            assert!(sys.contains(&q(w)), "{w}");
        }
    }

    #[test]
    fn non_coordinate_center_rejected() {
        let c = LinearCondition::ValuationOrder { center: pt(&[1, 1, 0, 0]), weights: vec![1, 1, 1], m: 2 };
        assert!(matches!(condition_rows(&Rationals, 4, 2, &c), Err(Error::Usage(_))));
    }

    #[test]
    fn degenerate_conic_rejected() {
        // (s^2, st, 0, 0) = s * (s, t, 0, 0) traces a line
        let r = CurveParam::new(vec![st("s^2"), st("s*t"), st("0"), st("0")], CurveLabel::Conic);
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn quadrics_through_a_conic_without_rational_points() {
        let c = LinearCondition::CurveIdeal { generators: vec![q("x3"), q("x0^2 + x1^2 + x2^2")], m: 1 };
        let sys = solve_system(&Rationals, 4, 2, &[c]).unwrap();
        assert_eq!(sys.projective_dim, 4);
        for w in ["x3*x0", "x3*x1", "x3*x2", "x3^2", "x0^2 + x1^2 + x2^2"] {
            assert!(sys.contains(&q(w)));
        }
    }

    #[test]
    fn contains_surface_is_enforced() {
        let pm = LinearCondition::PointMultiplicity { point: pt(&[1, 0, 0, 0]), m: 2 };
        let good = LinearCondition::ContainsSurface { surface: q("x1*x2 - x3^2") };
        assert!(solve_system(&Rationals, 4, 2, &[pm.clone(), good]).is_ok());
        let bad = LinearCondition::ContainsSurface { surface: q("x0*x1") };
        assert!(matches!(solve_system(&Rationals, 4, 2, &[pm, bad]), Err(Error::Contract(_))));
    }
}
