//! Named surfaces used by tests, examples and the acceptance suite.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{Field, Rationals};
use crate::linsys::{CurveLabel, CurveParam};
use crate::parse::parse_polynomial;
use crate::pipeline::{Hints, Options, SingularCurve, SurfaceInput};
use crate::poly::{default_var_names, Monomial, Polynomial, QPoly};

pub const CYCLIDE_VARS: [&str; 4] = ["x", "y", "z", "w"];
pub const DUPIN_CYCLIDE: &str = "(x^2+y^2+z^2-w^2)^2 + w^2*((w-x)^2+y^2-z^2)";
pub const TANGENT_DEVELOPABLE: &str = "4*(x0*x2-x1^2)*(x1*x3-x2^2)-(x0*x3-x1*x2)^2";
pub const ELLIPTIC_TYPE1: &str = "x0^2*x1^2 + 2*x0*x1*x2^2 + x0*x1*x2*x3 - x0*x1*x3^2 - 77*x1^4 - 55*x1^3*x2 \
     + 68*x1^3*x3 - 2*x1^2*x2^2 + 4*x1^2*x2*x3 + 3*x1^2*x3^2 - 3*x1*x2^3 + 4*x1*x2*x3^2 + 2*x1*x3^3 \
     + 5*x2^4 + 4*x2^3*x3 - 4*x2^2*x3^2 + 4*x2*x3^3 - 5*x3^4";
/// `x2^2 A + x2 x3 B + x3^2 C` with quadrics `A, B, C`.
pub const DOUBLE_LINE: &str = "x2^2*(x0^2 + x1*x3) + x2*x3*(x0*x1 - x1^2 + x2*x3) + x3^2*(x1^2 + x0*x2 + 2*x0*x1)";
pub const QUADRIC: &str = "x0*x1 - x2*x3";
/// Double along the conic `x3 = x0 x1 - x2^2 = 0`, through `[0,0,1,-1]`.
pub const DOUBLE_CONIC: &str = "(x0*x1 - x2^2)^2 + x3^2*(x0^2 + 2*x1^2 + x0*x2 - x3^2)";

fn q(v: i64) -> BigRational {
    Rationals.from_i64(v)
}

fn qp(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| q(x)).collect()
}

fn xvars() -> Vec<String> {
    default_var_names(4)
}

pub fn parse_x(src: &str) -> Result<QPoly> {
    parse_polynomial(src, &xvars())
}

/// The twisted cubic `(s^3, s^2 t, s t^2, t^3)`.
pub fn twisted_cubic() -> Result<CurveParam<Rationals>> {
    let st = ["s", "t"];
    let comps = ["s^3", "s^2*t", "s*t^2", "t^3"]
        .iter()
        .map(|c| parse_polynomial(c, &st))
        .collect::<Result<Vec<_>>>()?;
    CurveParam::new(comps, CurveLabel::TwistedCubic)
}

/// Tangent line to the twisted cubic at `[s : t] = [a : b]`.
pub fn tangent_line(a: i64, b: i64) -> Result<CurveParam<Rationals>> {
    let p = qp(&[a * a * a, a * a * b, a * b * b, b * b * b]);
    // d/ds of the point
    let dp = qp(&[3 * a * a, 2 * a * b, b * b, 0]);
    let dir = if (a, b) == (0, 1) { qp(&[0, 0, 1, 0]) } else { dp };
    CurveParam::line_through(&Rationals, &p, &dir)
}

pub fn quadric() -> Result<SurfaceInput> {
    SurfaceInput::simple(parse_x(QUADRIC)?)
}

pub fn tangent_developable() -> Result<SurfaceInput> {
    let hints = Hints {
        singular_curves: vec![SingularCurve {
            label: CurveLabel::TwistedCubic,
            param: Some(twisted_cubic()?),
            equations: Vec::new(),
        }],
        ..Hints::default()
    };
    SurfaceInput::new(parse_x(TANGENT_DEVELOPABLE)?, xvars(), hints, Options::default())
}

/// The cyclide with its double conic `w = x^2 + y^2 + z^2 = 0`, the extra
/// node `[1,0,0,1]` and the point `[0,0,1,1]`.
pub fn dupin_cyclide() -> Result<SurfaceInput> {
    let vars: Vec<String> = CYCLIDE_VARS.iter().map(|s| s.to_string()).collect();
    let s = parse_polynomial(DUPIN_CYCLIDE, &vars)?;
    let conic = SingularCurve {
        label: CurveLabel::Conic,
        param: None,
        equations: vec![parse_polynomial("w", &vars)?, parse_polynomial("x^2+y^2+z^2", &vars)?],
    };
    let hints = Hints {
        singular_curves: vec![conic],
        singular_points: vec![qp(&[1, 0, 0, 1])],
        general_points: vec![qp(&[0, 0, 1, 1])],
        ..Hints::default()
    };
    SurfaceInput::new(s, vars, hints, Options::default())
}

/// The type-1 normal-form instance, with its node `(0,1,1,2)`.
pub fn elliptic_type1() -> Result<SurfaceInput> {
    let hints = Hints {
        singular_points: vec![qp(&[1, 0, 0, 0]), qp(&[0, 1, 1, 2])],
        ..Hints::default()
    };
    let options = Options {
        mode: crate::pipeline::Mode::Certificate,
        ..Options::default()
    };
    SurfaceInput::new(parse_x(ELLIPTIC_TYPE1)?, xvars(), hints, options)
}

/// The double-line quartic with its line `x2 = x3 = 0`.
pub fn double_line() -> Result<SurfaceInput> {
    let line = SingularCurve {
        label: CurveLabel::Line,
        param: None,
        equations: vec![parse_x("x2")?, parse_x("x3")?],
    };
    let hints = Hints {
        singular_curves: vec![line],
        ..Hints::default()
    };
    let options = Options {
        mode: crate::pipeline::Mode::Certificate,
        ..Options::default()
    };
    SurfaceInput::new(parse_x(DOUBLE_LINE)?, xvars(), hints, options)
}

pub fn double_conic() -> Result<SurfaceInput> {
    let conic = SingularCurve {
        label: CurveLabel::Conic,
        param: None,
        equations: vec![parse_x("x3")?, parse_x("x0*x1 - x2^2")?],
    };
    let hints = Hints {
        singular_curves: vec![conic],
        ..Hints::default()
    };
    SurfaceInput::new(parse_x(DOUBLE_CONIC)?, xvars(), hints, Options::default())
}

pub fn quadric_cone() -> Result<SurfaceInput> {
    SurfaceInput::simple(parse_x("x0*x1 - x2^2")?)
}

fn random_form(rng: &mut ChaCha8Rng, degree: u32, bound: i64) -> QPoly {
    let terms: Vec<(Monomial, BigRational)> = crate::poly::monomials_of_degree(3, degree)
        .into_iter()
        .filter_map(|m| {
            let c = rng.gen_range(-bound..=bound);
            (c != 0).then(|| {
                let mut e = vec![0];
                e.extend_from_slice(m.exponents());
                (Monomial::new(e), q(c))
            })
        })
        .collect();
    Polynomial::from_terms(Rationals, 4, terms)
}

/// `x0 F_{d-1}(x1,x2,x3) + F_d(x1,x2,x3)` with small random coefficients,
/// redrawn until the result is a reduced surface with a point of
/// multiplicity `d - 1` at `e_0` and no lower-degree degeneration.
pub fn random_monoid(degree: u32, seed: u64) -> Result<SurfaceInput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = Polynomial::var(Rationals, 4, 0);
    loop {
        let f = random_form(&mut rng, degree - 1, 3);
        let g = random_form(&mut rng, degree, 3);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let s = &(&x0 * &f) + &g;
        if let Ok(input) = SurfaceInput::new(s, xvars(), Hints::default(), Options::default()) {
            if crate::pipeline::monoid_map(&input.equation, &qp(&[1, 0, 0, 0])).is_ok() {
                return Ok(input);
            }
        }
    }
}
