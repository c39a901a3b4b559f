//! Helpers shared by the per-case constructions.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{FitSummary, SingularCurve, Step, SurfaceInput};
use crate::error::{usage, Error, Result};
use crate::field::{format_rational, Field, PrimeField, Rationals};
use crate::linsys::{coefficient_vector, from_coefficient_vector, solve_system, CurveParam, LinearCondition};
use crate::maps::{fit_image_forms, image_degree_estimate, normalize_point, MapValue, RationalMap};
use crate::matrix::Matrix;
use crate::poly::{monomials_of_degree, FpPoly, Polynomial, QPoly};

pub(crate) fn qi(v: i64) -> BigRational {
    Rationals.from_i64(v)
}

pub(crate) fn qvec(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| qi(x)).collect()
}

pub(crate) fn fmt_point(p: &[BigRational]) -> String {
    format!("[{}]", p.iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

pub(crate) fn fp_point(fp: &PrimeField, p: &[BigRational]) -> Option<Vec<u64>> {
    let v: Vec<u64> = p.iter().map(|c| fp.from_rational(c)).collect::<Option<_>>()?;
    v.iter().any(|&x| x != 0).then_some(v)
}

/// Order of vanishing of `f` at `p`: the least `k` with a nonzero
/// derivative of order `k` at `p`.
pub fn point_multiplicity<F: Field>(f: &Polynomial<F>, p: &[F::Elem]) -> u32 {
    let field = f.field();
    let d = f.degree().unwrap_or(0);
    for k in 0..=d {
        for alpha in monomials_of_degree(f.nvars(), k) {
            if !field.is_zero(&f.derivative(alpha.exponents()).eval_unchecked(p)) {
                return k;
            }
        }
    }
    d + 1
}

/// All derivatives of order exactly `k`.
fn derivatives_of_order(f: &QPoly, k: u32) -> Vec<QPoly> {
    monomials_of_degree(f.nvars(), k)
        .iter()
        .map(|a| f.derivative(a.exponents()))
        .filter(|g| !g.is_zero())
        .collect()
}

/// Primitive integer points of `P^{n-1}` with entries in `[-h, h]`, first
/// nonzero entry positive, ordered by max-norm.
pub(crate) fn small_points(n: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let side = (2 * h + 1) as usize;
    let total = side.pow(n as u32);
    for idx in 0..total {
        let mut r = idx;
        let mut v = vec![0i64; n];
        for x in v.iter_mut() {
            *x = (r % side) as i64 - h;
            r /= side;
        }
        let Some(first) = v.iter().find(|&&x| x != 0) else { continue };
        if *first < 0 {
            continue;
        }
        let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if g != 1 {
            continue;
        }
        out.push(v);
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap_or(0), v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    out
}

/// Rational points of height at most `h` satisfying all of `fs` and `pred`.
pub fn find_rational_points(
    fs: &[QPoly],
    h: i64,
    limit: usize,
    pred: impl Fn(&[BigRational]) -> bool,
) -> Vec<Vec<BigRational>> {
    let n = fs.first().map(|f| f.nvars()).unwrap_or(4);
    let mut out = Vec::new();
    for v in small_points(n, h) {
        let p = qvec(&v);
        if fs.iter().all(|f| f.eval_unchecked(&p).is_zero()) && pred(&p) {
            out.push(p);
            if out.len() >= limit {
                break;
            }
        }
    }
    out
}

/// A point `v` with `sum v_i dS/dx_i = 0`, i.e. a vertex of a cone.
pub fn cone_vertex(s: &QPoly) -> Option<Vec<BigRational>> {
    let d = s.degree()?;
    if d == 0 {
        return None;
    }
    let cols: Vec<Vec<BigRational>> = (0..s.nvars())
        .map(|i| coefficient_vector(&s.partial(i).expect("index"), d - 1))
        .collect();
    let rows = monomials_of_degree(s.nvars(), d - 1).len();
    let m = Matrix::from_rows(
        Rationals,
        s.nvars(),
        (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect(),
    )
    .ok()?;
    m.nullspace().into_iter().next()
}

/// A rational point of multiplicity `deg S - 1`: hinted points, then
/// coordinate points, then a small-height scan.
pub(crate) fn monoid_point(input: &SurfaceInput) -> Option<Vec<BigRational>> {
    let s = &input.equation;
    let d = input.degree();
    if d < 2 {
        return None;
    }
    for p in &input.hints.singular_points {
        if point_multiplicity(s, p) == d - 1 {
            return Some(p.clone());
        }
    }
    if d == 2 {
        // any smooth rational point; the coordinate points and a small scan
        return find_rational_points(std::slice::from_ref(s), 3, 1, |p| point_multiplicity(s, p) == 1)
            .into_iter()
            .next()
            .or_else(|| input.hints.general_points.first().cloned());
    }
    let derivs = derivatives_of_order(s, d - 2);
    find_rational_points(&derivs, 3, 1, |p| point_multiplicity(s, p) == d - 1)
        .into_iter()
        .next()
}

/// Plane and quadric cutting out a conic, from equations or by
/// interpolating the parametrization.
pub(crate) fn conic_equations(c: &SingularCurve) -> Result<(QPoly, QPoly)> {
    let (plane, quadrics) = if !c.equations.is_empty() {
        let plane: Vec<QPoly> = c.equations.iter().filter(|e| e.degree() == Some(1)).cloned().collect();
        let quads: Vec<QPoly> = c.equations.iter().filter(|e| e.degree() == Some(2)).cloned().collect();
        (plane, quads)
    } else {
        let p = c.param.as_ref().expect("verified hint has a parametrization");
        let cond = [LinearCondition::CurveMultiplicity { curve: p.clone(), m: 1 }];
        let lin = solve_system(&Rationals, 4, 1, &cond)?.basis;
        let quads = solve_system(&Rationals, 4, 2, &cond)?.basis;
        (lin, quads)
    };
    if plane.len() != 1 {
        return Err(Error::HintRejected("a conic must span exactly one plane".into()));
    }
    let l = plane[0].clone();
    // a quadric generator not divisible by the plane
    for q in quadrics {
        let (_, r) = q.div_rem(&l)?;
        if !r.is_zero() {
            return Ok((l, q));
        }
    }
    Err(Error::HintRejected("no quadric equation for the conic".into()))
}

/// A hinted or small-height singular point off the given conic.
pub(crate) fn extra_node(input: &SurfaceInput, conic: &SingularCurve) -> Option<Vec<BigRational>> {
    let (l, q) = conic_equations(conic).ok()?;
    let off = |p: &[BigRational]| !(l.eval_unchecked(p).is_zero() && q.eval_unchecked(p).is_zero());
    let s = &input.equation;
    for p in &input.hints.singular_points {
        if off(p) && point_multiplicity(s, p) >= 2 {
            return Some(p.clone());
        }
    }
    let grads = s.gradient();
    find_rational_points(&grads, 2, 1, off).into_iter().next()
}

/// Invertible change of coordinates `x = A x'`.
#[derive(Clone, Debug)]
pub struct CoordinateChange {
    pub matrix: Vec<Vec<BigRational>>,
    pub inverse: Vec<Vec<BigRational>>,
    pub description: String,
}

impl CoordinateChange {
    pub fn new(matrix: Vec<Vec<BigRational>>, description: impl Into<String>) -> Result<Self> {
        let n = matrix.len();
        let inv = Matrix::from_rows(Rationals, n, matrix.clone())?
            .inverse()?
            .ok_or_else(|| Error::Inconsistent("coordinate change is singular".into()))?;
        Ok(CoordinateChange {
            inverse: (0..n).map(|i| inv.row(i).to_vec()).collect(),
            matrix,
            description: description.into(),
        })
    }

    /// `f(A x')`.
    pub fn pull(&self, f: &QPoly) -> Result<QPoly> {
        f.linear_substitute(&self.matrix)
    }

    /// Forms `g(A^{-1} x)` so that a map written in `x'` becomes a map in `x`.
    pub fn push_forms(&self, forms: &[QPoly]) -> Result<Vec<QPoly>> {
        forms.iter().map(|g| g.linear_substitute(&self.inverse)).collect()
    }

    /// `A^{-1} p`: coordinates of `p` in the primed system.
    pub fn to_primed(&self, p: &[BigRational]) -> Vec<BigRational> {
        self.inverse
            .iter()
            .map(|r| r.iter().zip(p).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }
}

/// A change sending `e_0` to `p`.
pub(crate) fn move_point_to_e0(p: &[BigRational]) -> Result<CoordinateChange> {
    let n = p.len();
    let Some(k) = p.iter().position(|c| !c.is_zero()) else {
        return usage("the zero vector is not a point");
    };
    // columns: p, then the unit vectors other than e_k
    let mut cols: Vec<Vec<BigRational>> = vec![p.to_vec()];
    for j in 0..n {
        if j != k {
            let mut e = vec![BigRational::zero(); n];
            e[j] = qi(1);
            cols.push(e);
        }
    }
    let matrix: Vec<Vec<BigRational>> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    CoordinateChange::new(matrix, format!("x = A x' with A e_0 = {}", fmt_point(p)))
}

/// Target forms `G` of degree `k` with `G ∘ map` in the ideal `(s)`:
/// an exact linear solve for `G` and a cofactor.
pub fn exact_image_forms(map: &RationalMap<Rationals>, s: &QPoly, k: u32) -> Result<Vec<QPoly>> {
    let n = map.source_dim() + 1;
    let m = map.target_dim() + 1;
    let d = map.degree();
    let ds = s.degree().unwrap_or(0);
    let total = k * d;
    let target_monos = monomials_of_degree(m, k);
    let mut columns: Vec<Vec<BigRational>> = Vec::new();
    for a in &target_monos {
        let mut prod = Polynomial::one(Rationals, n);
        for (f, &e) in map.forms().iter().zip(a.exponents()) {
            if e > 0 {
                prod = &prod * &f.pow(e);
            }
        }
        columns.push(coefficient_vector(&prod, total));
    }
    if total >= ds {
        for mono in monomials_of_degree(n, total - ds) {
            let g = -&s.mul_monomial(&mono);
            columns.push(coefficient_vector(&g, total));
        }
    }
    let rows = monomials_of_degree(n, total).len();
    let a = Matrix::from_rows(
        Rationals,
        columns.len(),
        (0..rows).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect(),
    )?;
    let kernel = a.nullspace();
    let g_parts: Vec<Vec<BigRational>> = kernel.iter().map(|v| v[..target_monos.len()].to_vec()).collect();
    if g_parts.is_empty() {
        return Ok(Vec::new());
    }
    let (r, _) = Matrix::from_rows(Rationals, target_monos.len(), g_parts)?.rref();
    Ok((0..r.rows())
        .map(|i| from_coefficient_vector(&Rationals, m, k, r.row(i)))
        .filter(|g| !g.is_zero())
        .collect())
}

/// Exact check that `plane ∘ maps[last] ∘ ... ∘ maps[0]` is divisible by `s`.
pub fn plane_pulls_back_into_surface(maps: &[RationalMap<Rationals>], s: &QPoly, plane: &QPoly) -> Result<bool> {
    let mut comp = maps[0].clone();
    for m in &maps[1..] {
        comp = m.compose(&comp)?;
    }
    let pulled = plane.substitute(comp.forms())?;
    if pulled.is_zero() {
        return Ok(false);
    }
    Ok(pulled.exact_div(s)?.is_some())
}

/// Push samples through a chain of `F_p` maps.
pub fn push_chain(maps: &[RationalMap<PrimeField>], points: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let mut cur = points.to_vec();
    for m in maps {
        let mut next = Vec::with_capacity(cur.len());
        for p in &cur {
            if let MapValue::Point(v) = m.apply(p)? {
                next.push(normalize_point(m.field(), &v));
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// Fit forms of `degree` through `points`, record the fit on `step`.
pub(crate) fn record_fit(
    step: &mut Step,
    label: &str,
    fp: &PrimeField,
    points: &[Vec<u64>],
    nvars: usize,
    degree: u32,
) -> Result<Vec<FpPoly>> {
    let fit = fit_image_forms(fp, points, nvars, degree)?;
    let names: Vec<String> = (0..nvars).map(|i| format!("y{i}")).collect();
    step.fits.push(FitSummary {
        label: label.into(),
        degree,
        count: fit.forms.len(),
        forms: fit.forms.iter().map(|f| f.to_string_with(&names)).collect(),
        held_out: fit.held_out_points,
    });
    Ok(fit.forms)
}

/// Degree of the image surface, recorded on `step`.
pub(crate) fn record_image_degree(
    step: &mut Step,
    fp: &PrimeField,
    image: &[Vec<u64>],
    nvars: usize,
    expected: u32,
    seed: u64,
) -> Result<bool> {
    match image_degree_estimate(fp, image, nvars, 2, expected.max(1) + 1, seed) {
        Ok(est) => {
            step.image_degree = Some(est.degree);
            Ok(step.check(
                "image_degree",
                est.degree == expected,
                format!("expected {expected}, estimated {} (line probes {:?})", est.degree, est.line_counts),
            ))
        }
        Err(e) => Ok(step.check("image_degree", false, format!("expected {expected}: {e}"))),
    }
}

/// Number of samples needed to fit degree-`k` forms in `n` variables.
pub(crate) fn samples_for(n: usize, k: u32) -> usize {
    2 * monomials_of_degree(n, k).len() + 10
}

/// Linear system of the given conditions; contract failure if the
/// dimension differs from `expected`.
pub(crate) fn system_with_dim<F: Field>(
    field: &F,
    degree: u32,
    conds: &[LinearCondition<F>],
    expected_len: usize,
    what: &str,
) -> Result<Vec<Polynomial<F>>> {
    let sys = solve_system(field, 4, degree, conds)?;
    if sys.len() != expected_len {
        return Err(Error::Contract(format!(
            "{what}: expected a system of projective dimension {}, found {}",
            expected_len as i64 - 1,
            sys.projective_dim
        )));
    }
    Ok(sys.basis)
}

/// Jacobian of `s` is nonzero at every sample.
pub(crate) fn smooth_at_samples(s: &FpPoly, points: &[Vec<u64>]) -> usize {
    let g = s.gradient();
    points
        .iter()
        .filter(|p| g.iter().any(|gi| gi.eval_unchecked(p) != 0))
        .count()
}

/// Map a step's `Q` map to `F_p` or fail as a usage error.
pub(crate) fn reduce_map(m: &RationalMap<Rationals>, fp: &PrimeField) -> Result<RationalMap<PrimeField>> {
    m.reduce(fp)
        .ok_or_else(|| Error::Usage(format!("the map degenerates modulo {}; choose another prime", fp.modulus())))
}

/// Reduce a parametrization mod `p`.
pub(crate) fn reduce_curve(c: &CurveParam<Rationals>, fp: &PrimeField) -> Result<CurveParam<PrimeField>> {
    c.map_field(fp, |x| fp.from_rational(x))
        .ok_or_else(|| Error::Usage(format!("a curve hint degenerates modulo {}", fp.modulus())))
}

/// Apply an exact map to a rational point.
pub(crate) fn apply_q(m: &RationalMap<Rationals>, p: &[BigRational]) -> Option<Vec<BigRational>> {
    match m.apply(p).ok()? {
        MapValue::Point(v) => Some(primitive_point(&v)),
        MapValue::BasePoint => None,
    }
}

/// Scale to the first nonzero coordinate being one.
pub(crate) fn primitive_point(v: &[BigRational]) -> Vec<BigRational> {
    let Some(k) = v.iter().position(|c| !c.is_zero()) else {
        return v.to_vec();
    };
    let c = v[k].clone();
    v.iter().map(|x| x / &c).collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::parse_x;

    #[test]
    fn multiplicities() {
        let s = parse_x("x0*x1^2 + x2^3 + x3^3").unwrap();
        assert_eq!(point_multiplicity(&s, &qvec(&[1, 0, 0, 0])), 2);
        assert_eq!(point_multiplicity(&s, &qvec(&[0, 1, 0, 0])), 1);
        assert_eq!(point_multiplicity(&s, &qvec(&[1, 1, 1, 1])), 0);
    }

    #[test]
    fn cone_vertices() {
        let v = cone_vertex(&parse_x("x0*x1 - x2^2").unwrap()).unwrap();
        assert!(crate::maps::projectively_equal(&Rationals, &v, &qvec(&[0, 0, 0, 1])));
        assert_eq!(cone_vertex(&parse_x("x0*x1 - x2*x3").unwrap()), None);
    }

    #[test]
    fn moving_a_point_to_e0() {
        let p = qvec(&[2, -1, 0, 3]);
        let c = move_point_to_e0(&p).unwrap();
        assert_eq!(c.to_primed(&p), qvec(&[1, 0, 0, 0]));
        let s = parse_x("x0 + 2*x1").unwrap();
        assert_eq!(c.pull(&s).unwrap().eval_unchecked(&qvec(&[1, 0, 0, 0])), qi(0));
        assert!(move_point_to_e0(&qvec(&[0, 0, 0, 0])).is_err());
    }

    #[test]
    fn exact_plane_of_a_quadric_projection() {
        let s = parse_x("x0*x1 - x2*x3").unwrap();
        let (_, map) = crate::pipeline::monoid_map(&s, &qvec(&[1, 0, 0, 0])).unwrap();
        let forms = exact_image_forms(&map, &s, 1).unwrap();
        assert_eq!(forms.len(), 1);
        assert!(plane_pulls_back_into_surface(std::slice::from_ref(&map), &s, &forms[0]).unwrap());
        let wrong = Polynomial::var(Rationals, 4, 0);
        assert!(!plane_pulls_back_into_surface(&[map], &s, &wrong).unwrap());
    }

    #[test]
    fn small_height_points_are_found() {
        let s = parse_x("x0^2 + x1^2 - 2*x2^2").unwrap();
        let pts = find_rational_points(std::slice::from_ref(&s), 1, 3, |_| true);
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| s.eval_unchecked(p).is_zero()));
    }
}
