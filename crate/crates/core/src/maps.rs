//! Rational maps between projective spaces, finite-field sampling,
//! implicitization by interpolation and injectivity certificates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{usage, Error, Result};
use crate::field::{rational_reconstruction, Field, PrimeField, Rationals, LIFTING_PRIME};
use crate::gcd::{restrict_to_line, PolyGcd};
use crate::linsys::{coefficient_vector, from_coefficient_vector};
use crate::matrix::Matrix;
use crate::poly::{monomials_of_degree, FpPoly, Polynomial, QPoly};
use crate::univariate;

/// Result of evaluating a map at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapValue<E> {
    Point(Vec<E>),
    /// Every form vanishes: the point is in the base locus.
    BasePoint,
}

/// `P^n ⇢ P^m` given by `m + 1` forms of a common degree in `n + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap<F: Field> {
    forms: Vec<Polynomial<F>>,
    source_dim: usize,
    target_dim: usize,
    normalized: bool,
}

impl<F: PolyGcd> RationalMap<F> {
    pub fn new(forms: Vec<Polynomial<F>>) -> Result<Self> {
        let Some(first) = forms.iter().find(|f| !f.is_zero()) else {
            return usage("a rational map needs at least one nonzero form");
        };
        let n = first.nvars();
        let d = first.degree();
        for f in &forms {
            if f.nvars() != n || f.field() != first.field() {
                return usage("map forms live in different rings");
            }
            if !f.is_zero() && (!f.is_homogeneous() || f.degree() != d) {
                return usage("map forms must be homogeneous of a common degree");
            }
        }
        if n == 0 || forms.len() < 2 {
            return usage("maps need a source and target of dimension at least 1");
        }
        Ok(RationalMap {
            source_dim: n - 1,
            target_dim: forms.len() - 1,
            forms,
            normalized: false,
        })
    }

    pub fn identity(field: F, nvars: usize) -> Self {
        let forms = (0..nvars).map(|i| Polynomial::var(field.clone(), nvars, i)).collect();
        RationalMap {
            forms,
            source_dim: nvars - 1,
            target_dim: nvars - 1,
            normalized: true,
        }
    }

    pub fn forms(&self) -> &[Polynomial<F>] {
        &self.forms
    }

    pub fn field(&self) -> &F {
        self.forms[0].field()
    }

    pub fn degree(&self) -> u32 {
        self.forms.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Divide all forms by their gcd.
    pub fn normalize(&self) -> Result<Self> {
        if self.normalized {
            return Ok(self.clone());
        }
        let g = F::poly_gcd(&self.forms)?;
        let forms = if g.is_constant() {
            self.forms.clone()
        } else {
            self.forms
                .iter()
                .map(|f| f.exact_div(&g)?.ok_or_else(|| Error::Inconsistent("gcd does not divide a form".into())))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(RationalMap {
            forms,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            normalized: true,
        })
    }

    pub fn apply(&self, point: &[F::Elem]) -> Result<MapValue<F::Elem>> {
        if point.len() != self.source_dim + 1 {
            return usage("point does not lie in the source space");
        }
        let field = self.field();
        let v: Vec<F::Elem> = self.forms.iter().map(|f| f.eval_unchecked(point)).collect();
        if v.iter().all(|x| field.is_zero(x)) {
            Ok(MapValue::BasePoint)
        } else {
            Ok(MapValue::Point(v))
        }
    }

    /// `self ∘ inner`, not normalized.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.target_dim != self.source_dim {
            return usage("composition of maps with mismatched dimensions");
        }
        let forms = self
            .forms
            .iter()
            .map(|f| f.substitute(&inner.forms))
            .collect::<Result<Vec<_>>>()?;
        Self::new(forms)
    }

    /// Follow the map with the linear projection from `center`, then
    /// normalize.
    pub fn compose_projection(&self, center: &[F::Elem]) -> Result<Self> {
        let proj = projection_matrix(self.field(), center, self.target_dim + 1)?;
        let forms = apply_linear(&proj, &self.forms);
        Self::new(forms)?.normalize()
    }

    /// Follow the map with a linear map given by its rows.
    pub fn compose_linear(&self, rows: &[Vec<F::Elem>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != self.target_dim + 1) {
            return usage("linear map rows have the wrong length");
        }
        Self::new(apply_linear(rows, &self.forms))?.normalize()
    }

    /// Rank of the Jacobian at `point`, optionally restricted to the span
    /// of `tangent` vectors.
    pub fn jacobian_rank(&self, point: &[F::Elem], tangent: Option<&[Vec<F::Elem>]>) -> usize {
        let field = self.field().clone();
        let n = self.source_dim + 1;
        let jac: Vec<Vec<F::Elem>> = self
            .forms
            .iter()
            .map(|f| (0..n).map(|j| f.partial(j).expect("index").eval_unchecked(point)).collect())
            .collect();
        let m = Matrix::from_rows(field.clone(), n, jac).expect("shape");
        match tangent {
            None => m.rank(),
            Some(vs) => {
                let t = Matrix::from_rows(field, n, vs.to_vec()).expect("shape").transpose();
                m.mul(&t).expect("shape").rank()
            }
        }
    }

    pub fn map_coeffs<G: PolyGcd>(&self, target: &G, phi: impl Fn(&F::Elem) -> Option<G::Elem>) -> Option<RationalMap<G>> {
        let forms = self
            .forms
            .iter()
            .map(|f| f.map_coeffs(target, &phi))
            .collect::<Option<Vec<_>>>()?;
        if forms.iter().all(Polynomial::is_zero) {
            return None;
        }
        Some(RationalMap {
            forms,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            normalized: false,
        })
    }
}

impl RationalMap<Rationals> {
    pub fn reduce(&self, fp: &PrimeField) -> Option<RationalMap<PrimeField>> {
        self.map_coeffs(fp, |c| fp.from_rational(c))
    }
}

fn apply_linear<F: Field>(rows: &[Vec<F::Elem>], forms: &[Polynomial<F>]) -> Vec<Polynomial<F>> {
    let field = forms[0].field().clone();
    let n = forms[0].nvars();
    rows.iter()
        .map(|r| {
            let mut acc = Polynomial::zero(field.clone(), n);
            for (c, f) in r.iter().zip(forms) {
                if !field.is_zero(c) {
                    acc = &acc + &f.scale(c);
                }
            }
            acc
        })
        .collect()
}

/// Rows of the linear projection `P^{m-1} ⇢ P^{m-2}` away from `center`.
/// With `k` the last nonzero coordinate of the center, row `i` (for
/// `i != k`) is `y_i - (c_i / c_k) y_k`.
pub fn projection_matrix<F: Field>(field: &F, center: &[F::Elem], m: usize) -> Result<Vec<Vec<F::Elem>>> {
    if center.len() != m {
        return usage("projection center does not lie in the target space");
    }
    let Some(k) = (0..m).rev().find(|&i| !field.is_zero(&center[i])) else {
        return usage("projection center is the zero vector");
    };
    let inv = field.inv(&center[k]).expect("nonzero");
    Ok((0..m)
        .filter(|&i| i != k)
        .map(|i| {
            let mut row = vec![field.zero(); m];
            row[i] = field.one();
            row[k] = field.neg(&field.mul(&center[i], &inv));
            row
        })
        .collect())
}

/// Scale so the first nonzero coordinate is one.
pub fn normalize_point<F: Field>(field: &F, p: &[F::Elem]) -> Vec<F::Elem> {
    match p.iter().find(|x| !field.is_zero(x)) {
        None => p.to_vec(),
        Some(lead) => {
            let inv = field.inv(lead).expect("nonzero");
            p.iter().map(|x| field.mul(x, &inv)).collect()
        }
    }
}

pub fn projectively_equal<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    normalize_point(field, a) == normalize_point(field, b)
}

pub fn random_point<R: Rng>(fp: &PrimeField, n: usize, rng: &mut R) -> Vec<u64> {
    loop {
        let v: Vec<u64> = (0..n).map(|_| fp.random_elem(rng)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// Points of a hypersurface over `F_p`.
#[derive(Clone, Debug)]
pub struct SampledSurface {
    pub equations: Vec<FpPoly>,
    pub points: Vec<Vec<u64>>,
    pub prime: u64,
    pub seed: u64,
}

/// Intersect `s = 0` with random lines until `count` distinct points
/// passing `keep` are found. The retry budget is `100 * count` lines.
pub fn sample_surface_points(
    s: &FpPoly,
    count: usize,
    seed: u64,
    keep: impl Fn(&[u64]) -> bool,
) -> Result<SampledSurface> {
    let fp = *s.field();
    if s.is_zero() || s.is_constant() {
        return usage("cannot sample the zero set of a constant");
    }
    let n = s.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<u64>> = Vec::with_capacity(count);
    let mut seen = std::collections::BTreeSet::new();
    let budget = 100 * count.max(1);
    for attempt in 0..budget {
        if points.len() >= count {
            break;
        }
        let a = random_point(&fp, n, &mut rng);
        let b = random_point(&fp, n, &mut rng);
        let u = restrict_to_line(&fp, s, &a, &b);
        if u.len() <= 1 {
            continue;
        }
        for r in univariate::roots_dense(&fp, &u, seed ^ attempt as u64)? {
            let p: Vec<u64> = a.iter().zip(&b).map(|(x, y)| fp.add(&fp.mul(&r, x), y)).collect();
            if p.iter().all(|&x| x == 0) || !keep(&p) {
                continue;
            }
            let key = normalize_point(&fp, &p);
            if seen.insert(key.clone()) {
                points.push(key);
                if points.len() >= count {
                    break;
                }
            }
        }
    }
    if points.len() < count {
        return Err(Error::Sampling(format!(
            "found {} of {count} points over F_{}; try a larger prime",
            points.len(),
            fp.modulus()
        )));
    }
    Ok(SampledSurface {
        equations: vec![s.clone()],
        points,
        prime: fp.modulus(),
        seed,
    })
}

/// Sample a rational surface after reduction mod `p`.
pub fn sample_rational_surface(
    s: &QPoly,
    fp: &PrimeField,
    count: usize,
    seed: u64,
    keep: impl Fn(&[u64]) -> bool,
) -> Result<SampledSurface> {
    let Some(r) = s.reduce(fp) else {
        return usage(format!("a denominator of the equation vanishes mod {}", fp.modulus()));
    };
    if r.is_zero() || r.degree() != s.degree() {
        return usage(format!("the equation degenerates mod {}", fp.modulus()));
    }
    sample_surface_points(&r, count, seed, keep)
}

/// Images of `points` under `map`, skipping base points.
pub fn push_forward(map: &RationalMap<PrimeField>, points: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        if let MapValue::Point(v) = map.apply(p)? {
            out.push(normalize_point(map.field(), &v));
        }
    }
    if out.is_empty() && !points.is_empty() {
        return Err(Error::DegenerateMap("every sample lies in the base locus".into()));
    }
    Ok(out)
}

/// Forms of one degree through a point set, with held-out checks.
#[derive(Clone, Debug)]
pub struct ImageFit<F: Field> {
    pub degree: u32,
    pub forms: Vec<Polynomial<F>>,
    pub fitting_points: usize,
    pub held_out_points: usize,
}

fn evaluation_row<F: Field>(field: &F, monos: &[crate::poly::Monomial], p: &[F::Elem]) -> Vec<F::Elem> {
    monos
        .iter()
        .map(|m| {
            let mut acc = field.one();
            for (x, &e) in p.iter().zip(m.exponents()) {
                if e > 0 {
                    acc = field.mul(&acc, &field.pow(x, e as u64));
                }
            }
            acc
        })
        .collect()
}

/// Fit on `fit`, verify on `check`.
pub fn fit_forms_split<F: Field>(
    field: &F,
    fit: &[Vec<F::Elem>],
    check: &[Vec<F::Elem>],
    nvars: usize,
    degree: u32,
) -> Result<ImageFit<F>> {
    let monos = monomials_of_degree(nvars, degree);
    if fit.iter().chain(check).any(|p| p.len() != nvars) {
        return usage("point arity does not match the ambient space");
    }
    let rows: Vec<Vec<F::Elem>> = fit.iter().map(|p| evaluation_row(field, &monos, p)).collect();
    let kernel = if rows.is_empty() {
        Vec::new()
    } else {
        Matrix::from_rows(field.clone(), monos.len(), rows)?.nullspace()
    };
    let forms: Vec<Polynomial<F>> = kernel
        .iter()
        .map(|v| from_coefficient_vector(field, nvars, degree, v))
        .collect();
    for p in check {
        for f in &forms {
            if !field.is_zero(&f.eval_unchecked(p)) {
                return Err(Error::Inconsistent(format!(
                    "a fitted degree-{degree} form fails on a held-out point; sampling is too sparse or the degree is wrong"
                )));
            }
        }
    }
    Ok(ImageFit {
        degree,
        forms,
        fitting_points: fit.len(),
        held_out_points: check.len(),
    })
}

/// Forms of the given degree vanishing on `points`: at least twice the
/// monomial count is required, half fits and half is held out.
pub fn fit_image_forms<F: Field>(field: &F, points: &[Vec<F::Elem>], nvars: usize, degree: u32) -> Result<ImageFit<F>> {
    let need = 2 * monomials_of_degree(nvars, degree).len();
    if points.len() < need {
        return Err(Error::Sampling(format!(
            "fitting degree {degree} in {nvars} variables needs {need} points, got {}",
            points.len()
        )));
    }
    let half = points.len().div_ceil(2);
    fit_forms_split(field, &points[..half], &points[half..], nvars, degree)
}

/// Outcome of a degree estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeEstimate {
    pub degree: u32,
    /// Degree of the fitted hypersurface restricted to each probe line.
    pub line_counts: Vec<u32>,
}

pub const DEGREE_PROBES: usize = 10;

/// Degree of a variety of dimension `dim` from sample points over `F_p`.
///
/// The samples are pushed to `P^{dim+1}` by a random linear projection,
/// which preserves the degree. The smallest `k` admitting a fitted form
/// is the candidate; it must be a single form whose restriction to each
/// of [`DEGREE_PROBES`] random lines has exactly `k` roots counted with
/// multiplicity over the algebraic closure.
pub fn image_degree_estimate(
    fp: &PrimeField,
    points: &[Vec<u64>],
    nvars: usize,
    dim: usize,
    max_degree: u32,
    seed: u64,
) -> Result<DegreeEstimate> {
    if dim + 2 > nvars {
        return usage("variety dimension must be below the ambient dimension");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = dim + 2;
    let projected: Vec<Vec<u64>> = if target == nvars {
        points.to_vec()
    } else {
        let rows: Vec<Vec<u64>> = (0..target).map(|_| random_point(fp, nvars, &mut rng)).collect();
        points
            .iter()
            .map(|p| rows.iter().map(|r| crate::matrix::dot(fp, r, p)).collect())
            .collect()
    };
    for k in 1..=max_degree {
        let fit = fit_image_forms(fp, &projected, target, k)?;
        match fit.forms.len() {
            0 => continue,
            1 => {
                let f = &fit.forms[0];
                let mut counts = Vec::with_capacity(DEGREE_PROBES);
                for _ in 0..DEGREE_PROBES {
                    let a = random_point(fp, target, &mut rng);
                    let b = random_point(fp, target, &mut rng);
                    let u = restrict_to_line(fp, f, &a, &b);
                    counts.push(univariate::degree(&u).unwrap_or(0) as u32);
                }
                if counts.iter().any(|&c| c != k) {
                    return Err(Error::Inconsistent(format!(
                        "line probes disagree with the fitted degree {k}: {counts:?}"
                    )));
                }
                return Ok(DegreeEstimate { degree: k, line_counts: counts });
            }
            n => {
                return Err(Error::Inconsistent(format!(
                    "{n} independent degree-{k} forms after projection; the samples do not span a hypersurface"
                )))
            }
        }
    }
    Err(Error::Inconsistent(format!("no hypersurface of degree <= {max_degree} fits the projected samples")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedBirational,
    CertifiedGenericallyInjective,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::CertifiedBirational => "certified_birational",
            Verdict::CertifiedGenericallyInjective => "certified_generically_injective",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct InjectivityCertificate {
    pub verdict: Verdict,
    pub trials: usize,
    pub base_point_hits: usize,
    pub collisions: usize,
    /// Samples at which the differential has full rank on the domain.
    pub full_rank_samples: usize,
    pub inverse_degree: Option<u32>,
    pub prime: u64,
}

/// Where to draw sample pairs from.
pub enum Domain<'a> {
    Projective,
    Surface(&'a SampledSurface),
}

/// Probabilistic injectivity on random pairs, plus a full-rank
/// differential at each sample. `inverse_degree` records an inverse found
/// separately (see [`fit_inverse_exact`], [`fit_inverse_mod_p`]).
pub fn birationality_certificate(
    map: &RationalMap<PrimeField>,
    domain: Domain<'_>,
    trials: usize,
    seed: u64,
    inverse_degree: Option<u32>,
) -> Result<InjectivityCertificate> {
    let fp = *map.field();
    let n = map.source_dim() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<u64> {
        match &domain {
            Domain::Projective => random_point(&fp, n, rng),
            Domain::Surface(s) => s.points[rng.gen_range(0..s.points.len())].clone(),
        }
    };
    let expected_rank = match &domain {
        Domain::Projective => n,
        Domain::Surface(_) => 3,
    };
    let grads: Option<Vec<FpPoly>> = match &domain {
        Domain::Surface(s) => Some(s.equations[0].gradient()),
        Domain::Projective => None,
    };
    let mut base_hits = 0;
    let mut collisions = 0;
    let mut full_rank = 0;
    let mut done = 0;
    let budget = 100 * trials.max(1);
    for _ in 0..budget {
        if done >= trials {
            break;
        }
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        if projectively_equal(&fp, &x, &y) {
            continue;
        }
        let (MapValue::Point(fx), MapValue::Point(fy)) = (map.apply(&x)?, map.apply(&y)?) else {
            base_hits += 1;
            continue;
        };
        done += 1;
        if projectively_equal(&fp, &fx, &fy) {
            collisions += 1;
        }
        let rank = match &grads {
            None => map.jacobian_rank(&x, None),
            Some(g) => {
                let normal: Vec<u64> = g.iter().map(|gi| gi.eval_unchecked(&x)).collect();
                let tangent = Matrix::from_rows(fp, n, vec![normal])?.nullspace();
                map.jacobian_rank(&x, Some(&tangent))
            }
        };
        if rank == expected_rank {
            full_rank += 1;
        }
    }
    if done == 0 {
        return Err(Error::DegenerateMap("all sampled pairs hit the base locus".into()));
    }
    let verdict = if inverse_degree.is_some() {
        Verdict::CertifiedBirational
    } else if done == trials && collisions == 0 && full_rank == done {
        Verdict::CertifiedGenericallyInjective
    } else {
        Verdict::Inconclusive
    };
    Ok(InjectivityCertificate {
        verdict,
        trials: done,
        base_point_hits: base_hits,
        collisions,
        full_rank_samples: full_rank,
        inverse_degree,
        prime: fp.modulus(),
    })
}

/// Unknown-count ceiling for inverse interpolation.
pub const INVERSE_UNKNOWN_LIMIT: usize = 1200;

/// Candidate inverses of degree `e` over `F_p`: a basis of the forms
/// `g` on the target with `g_i(f(x)) x_j = g_j(f(x)) x_i` on samples,
/// with the trivial solutions (those vanishing on the image) removed.
fn inverse_kernel(map: &RationalMap<PrimeField>, e: u32, seed: u64) -> Result<Vec<Vec<u64>>> {
    let fp = *map.field();
    let n = map.source_dim() + 1;
    let m = map.target_dim() + 1;
    let monos = monomials_of_degree(m, e);
    let block = monos.len();
    let unknowns = n * block;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    // each sample contributes n - 1 independent relations, but samples are
    // correlated through the inverse: add batches until the kernel is stable
    let batch = unknowns * n / (n - 1).max(1) + 4 * n;
    let mut tries = 0;
    let mut previous = usize::MAX;
    let kernel = loop {
        let want_rows = rows.len() + batch;
        while rows.len() < want_rows {
            tries += 1;
            if tries > 40 * batch {
                return Err(Error::DegenerateMap("too many base points while fitting an inverse".into()));
            }
            let x = random_point(&fp, n, &mut rng);
            let MapValue::Point(y) = map.apply(&x)? else { continue };
            let ev = evaluation_row(&fp, &monos, &y);
            for i in 0..n {
                let j = (i + 1) % n;
                if i == j {
                    continue;
                }
                let mut row = vec![0u64; unknowns];
                for (k, v) in ev.iter().enumerate() {
                    row[i * block + k] = fp.mul(v, &x[j]);
                    row[j * block + k] = fp.neg(&fp.mul(v, &x[i]));
                }
                rows.push(row);
            }
        }
        let kernel = Matrix::from_rows(fp, unknowns, rows.clone())?.nullspace();
        if kernel.is_empty() || kernel.len() == previous {
            break kernel;
        }
        previous = kernel.len();
    };
    // drop the part of the kernel vanishing on the image
    let mut vanish_rows = Vec::new();
    for _ in 0..(kernel.len() + 10) {
        let x = random_point(&fp, n, &mut rng);
        let MapValue::Point(y) = map.apply(&x)? else { continue };
        let ev = evaluation_row(&fp, &monos, &y);
        for i in 0..n {
            let mut row = vec![0u64; unknowns];
            row[i * block..(i + 1) * block].copy_from_slice(&ev);
            vanish_rows.push(row);
        }
    }
    // kernel vectors k with (vanish_rows · k) != 0 span the useful part;
    // reduce the kernel basis against the trivial subspace
    let kmat = Matrix::from_rows(fp, unknowns, kernel.clone())?;
    let v = Matrix::from_rows(fp, unknowns, vanish_rows)?;
    let images = v.mul(&kmat.transpose())?;
    let trivial = images.nullspace();
    let useful_dim = kernel.len() - trivial.len();
    if useful_dim == 0 {
        return Ok(Vec::new());
    }
    // canonical representatives: RREF of the kernel
    let (r, _) = kmat.rref();
    Ok((0..r.rows())
        .map(|i| r.row(i).to_vec())
        .filter(|vec| {
            let col = v.mul_vec(vec).expect("shape");
            col.iter().any(|&c| c != 0)
        })
        .collect())
}

fn split_inverse<F: Field>(field: &F, v: &[F::Elem], n: usize, m: usize, e: u32) -> Vec<Polynomial<F>> {
    let block = monomials_of_degree(m, e).len();
    (0..n)
        .map(|i| from_coefficient_vector(field, m, e, &v[i * block..(i + 1) * block]))
        .collect()
}

/// Common factor `h` with `g ∘ f = h · id`, or `None` if `g` is not an
/// inverse. Exact polynomial identity check.
pub fn verify_inverse<F: PolyGcd>(map: &RationalMap<F>, inverse: &[Polynomial<F>]) -> Result<Option<Polynomial<F>>> {
    let n = map.source_dim() + 1;
    if inverse.len() != n || inverse.iter().any(|g| g.nvars() != map.target_dim() + 1) {
        return usage("inverse has the wrong shape");
    }
    let comp: Vec<Polynomial<F>> = inverse
        .iter()
        .map(|g| g.substitute(map.forms()))
        .collect::<Result<_>>()?;
    let Some(k) = comp.iter().position(|c| !c.is_zero()) else {
        return Ok(None);
    };
    let xk = Polynomial::var(map.field().clone(), n, k);
    let Some(h) = comp[k].exact_div(&xk)? else {
        return Ok(None);
    };
    for (i, c) in comp.iter().enumerate() {
        let xi = Polynomial::var(map.field().clone(), n, i);
        if *c != &h * &xi {
            return Ok(None);
        }
    }
    Ok(Some(h))
}

/// A verified inverse.
#[derive(Clone, Debug)]
pub struct InverseMap<F: Field> {
    pub forms: Vec<Polynomial<F>>,
    pub degree: u32,
    /// `h` with `inverse ∘ map = h · id`.
    pub common_factor: Polynomial<F>,
}

/// Fit and verify an inverse over `F_p`, degrees `1..=max_degree`.
pub fn fit_inverse_mod_p(map: &RationalMap<PrimeField>, max_degree: u32, seed: u64) -> Result<Option<InverseMap<PrimeField>>> {
    let n = map.source_dim() + 1;
    let m = map.target_dim() + 1;
    for e in 1..=max_degree {
        if n * monomials_of_degree(m, e).len() > INVERSE_UNKNOWN_LIMIT {
            break;
        }
        for v in inverse_kernel(map, e, seed ^ e as u64)? {
            let forms = split_inverse(map.field(), &v, n, m, e);
            if let Some(h) = verify_inverse(map, &forms)? {
                return Ok(Some(InverseMap { forms, degree: e, common_factor: h }));
            }
        }
    }
    Ok(None)
}

/// Fit an inverse mod a large prime, lift coefficients by rational
/// reconstruction and verify the identity exactly over `Q`.
pub fn fit_inverse_exact(map: &RationalMap<Rationals>, max_degree: u32, seed: u64) -> Result<Option<InverseMap<Rationals>>> {
    let fp = PrimeField::new(LIFTING_PRIME).expect("prime");
    let Some(red) = map.reduce(&fp) else {
        return Ok(None);
    };
    let n = map.source_dim() + 1;
    let m = map.target_dim() + 1;
    for e in 1..=max_degree {
        if n * monomials_of_degree(m, e).len() > INVERSE_UNKNOWN_LIMIT {
            break;
        }
        for v in inverse_kernel(&red, e, seed ^ e as u64)? {
            let Some(lifted) = v
                .iter()
                .map(|&c| rational_reconstruction(c, LIFTING_PRIME))
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let forms = split_inverse(&Rationals, &lifted, n, m, e);
            if let Some(h) = verify_inverse(map, &forms)? {
                return Ok(Some(InverseMap { forms, degree: e, common_factor: h }));
            }
        }
    }
    Ok(None)
}

/// Lift an `F_p` vector to `Q` by rational reconstruction.
pub fn lift_vector(v: &[u64], p: u64) -> Option<Vec<num_rational::BigRational>> {
    v.iter().map(|&c| rational_reconstruction(c, p)).collect()
}

/// Fit forms over a large prime and lift them to `Q`. Returns `None` when
/// reconstruction fails; callers verify the lifted forms exactly.
pub fn fit_and_lift(points: &[Vec<u64>], fp: &PrimeField, nvars: usize, degree: u32) -> Result<Option<Vec<QPoly>>> {
    let fit = fit_image_forms(fp, points, nvars, degree)?;
    let mut out = Vec::new();
    for f in &fit.forms {
        let v = coefficient_vector(f, degree);
        let Some(q) = lift_vector(&v, fp.modulus()) else {
            return Ok(None);
        };
        out.push(from_coefficient_vector(&Rationals, nvars, degree, &q));
    }
    Ok(Some(out))
}
