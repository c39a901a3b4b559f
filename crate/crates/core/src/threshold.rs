//! Effective thresholds on small Picard lattices.
//!
//! `rho(T, H) = sup { m : H + m K_T is effective }`. With a simplicial
//! effective cone this is a one-variable problem: write `H` and `K` in the
//! ray basis and take the minimum of `h_i / (-k_i)` over rays where `K`
//! has a negative coordinate.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{format_rational, Field, Rationals};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardModel {
    pub name: String,
    pub rank: usize,
    pub canonical_class: Vec<BigRational>,
    /// Extreme rays of the effective cone, in the class basis.
    pub effective_cone: Vec<Vec<BigRational>>,
    pub class_basis_doc: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Value(BigRational),
    Infinite,
    NotEffective,
}

impl Threshold {
    pub fn describe(&self) -> String {
        match self {
            Threshold::Value(v) => format_rational(v),
            Threshold::Infinite => "+infinity".into(),
            Threshold::NotEffective => "not effective".into(),
        }
    }
}

fn q(v: i64) -> BigRational {
    Rationals.from_i64(v)
}

fn qv(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| q(x)).collect()
}

pub const MODEL_NAMES: [&str; 5] = ["p3", "blowup-p3-pt", "p1xp2", "wps1112", "quadric-cone-q4"];

impl PicardModel {
    pub fn new(
        name: &str,
        canonical_class: Vec<BigRational>,
        effective_cone: Vec<Vec<BigRational>>,
        class_basis_doc: &str,
    ) -> Result<Self> {
        let rank = canonical_class.len();
        if effective_cone.len() != rank || effective_cone.iter().any(|r| r.len() != rank) {
            return Err(Error::Unsupported(format!(
                "model {name}: effective cone must have exactly {rank} rays of length {rank}"
            )));
        }
        let m = Matrix::from_rows(Rationals, rank, effective_cone.clone())?;
        if m.rank() != rank {
            return Err(Error::Unsupported(format!("model {name}: effective cone is not simplicial")));
        }
        Ok(PicardModel {
            name: name.into(),
            rank,
            canonical_class,
            effective_cone,
            class_basis_doc: class_basis_doc.into(),
        })
    }

    /// Catalog lookup.
    pub fn by_name(name: &str) -> Result<Self> {
        let model = match name {
            "p3" => Self::new("p3", qv(&[-4]), vec![qv(&[1])], "basis (H): H the hyperplane class; K = -4H"),
            "blowup-p3-pt" => Self::new(
                "blowup-p3-pt",
                qv(&[-4, 2]),
                vec![qv(&[0, 1]), qv(&[1, -1])],
                "basis (h, e): h pullback of a plane, e exceptional divisor; K = -4h + 2e; \
                 effective rays e and h - e (strict transforms of planes through the point)",
            ),
            "p1xp2" => Self::new(
                "p1xp2",
                qv(&[-2, -3]),
                vec![qv(&[1, 0]), qv(&[0, 1])],
                "basis (a, b): pullbacks of O(1) from P^1 and P^2; a divisor of type (p, q) is pa + qb; K = (-2, -3)",
            ),
            "wps1112" => Self::new(
                "wps1112",
                qv(&[-5]),
                vec![qv(&[1])],
                "basis (O(1)) on P(1,1,1,2); K = O(-5); the quadric system pulls O(1) of P^6 back to O(2), \
                 so a quadric section is O(4)",
            ),
            "quadric-cone-q4" => Self::new(
                "quadric-cone-q4",
                qv(&[-3, 0]),
                vec![qv(&[0, 1]), qv(&[1, -1])],
                "small resolution T = P(O + O(1) + O(1)) over P^1 of the rank-4 quadric cone in P^4; \
                 basis (H, F): H pullback of a hyperplane, F a plane of one ruling (fiber over P^1); \
                 H^3 = 2, H^2 F = 1; K = -3H; effective rays F and H - F; a quintic surface \
                 through the vertex with class 3H - F has H^2 (3H - F) = 5",
            ),
            other => {
                return Err(Error::Usage(format!(
                    "unknown model '{other}'; known models: {}",
                    MODEL_NAMES.join(", ")
                )))
            }
        }?;
        Ok(model)
    }

    /// Coordinates of a class in the ray basis.
    pub fn ray_coordinates(&self, class: &[BigRational]) -> Result<Vec<BigRational>> {
        if class.len() != self.rank {
            return Err(Error::Usage(format!(
                "class has {} coordinates, model {} has rank {}",
                class.len(),
                self.name,
                self.rank
            )));
        }
        // columns are rays: solve R c = class
        let r = Matrix::from_rows(Rationals, self.rank, self.effective_cone.clone())?.transpose();
        r.solve(class)?
            .ok_or_else(|| Error::Inconsistent("simplicial cone basis is singular".into()))
    }
}

/// `sup { m : H + m K effective }` on a simplicial model.
pub fn effective_threshold(model: &PicardModel, h: &[BigRational]) -> Result<Threshold> {
    let hc = model.ray_coordinates(h)?;
    if hc.iter().any(Signed::is_negative) {
        return Ok(Threshold::NotEffective);
    }
    let kc = model.ray_coordinates(&model.canonical_class)?;
    let best = hc
        .iter()
        .zip(&kc)
        .filter(|(_, k)| k.is_negative())
        .map(|(hi, ki)| hi / (-ki))
        .min();
    Ok(match best {
        Some(v) => Threshold::Value(v),
        None => Threshold::Infinite,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryCertificate {
    pub model: String,
    pub class: Vec<String>,
    pub rho: String,
    pub certifies_ce_to_plane: bool,
}

/// Strict `0 < rho < 1`. The caller vouches that the pair is a good model.
pub fn corollary_certificate(model: &PicardModel, h: &[BigRational]) -> Result<CorollaryCertificate> {
    let t = effective_threshold(model, h)?;
    let ok = match &t {
        Threshold::Value(v) => v.is_positive() && *v < q(1),
        _ => false,
    };
    Ok(CorollaryCertificate {
        model: model.name.clone(),
        class: h.iter().map(format_rational).collect(),
        rho: t.describe(),
        certifies_ce_to_plane: ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Holds { source: BigRational, target: BigRational },
    Violated { source: BigRational, target: BigRational },
    NotApplicable { reason: String },
}

/// A source pair and a target pair declared to be birational models.
pub type LinkedPair<'a> = ((&'a PicardModel, Vec<BigRational>), (&'a PicardModel, Vec<BigRational>));

/// For source `rho >= 1`, the target threshold must be at least as large.
pub fn monotonicity_check(pairs: &[LinkedPair<'_>]) -> Result<Vec<Monotonicity>> {
    pairs
        .iter()
        .map(|((sm, sh), (tm, th))| {
            let s = effective_threshold(sm, sh)?;
            let t = effective_threshold(tm, th)?;
            Ok(match (s, t) {
                (Threshold::Value(s), _) if s < q(1) => Monotonicity::NotApplicable {
                    reason: format!("source threshold {} is below 1", format_rational(&s)),
                },
                (Threshold::Value(s), Threshold::Value(t)) => {
                    if t >= s {
                        Monotonicity::Holds { source: s, target: t }
                    } else {
                        Monotonicity::Violated { source: s, target: t }
                    }
                }
                (Threshold::Value(s), Threshold::Infinite) => Monotonicity::Holds {
                    target: s.clone() + q(1),
                    source: s,
                },
                (s, t) => Monotonicity::NotApplicable {
                    reason: format!("thresholds {} and {} are not both finite", s.describe(), t.describe()),
                },
            })
        })
        .collect()
}

/// Parse a comma-separated class such as `3,2` or `1/2,-1`.
pub fn parse_class(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(crate::field::parse_rational).collect()
}

pub fn is_zero_class(h: &[BigRational]) -> bool {
    h.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho(model: &str, class: &[i64]) -> Threshold {
        effective_threshold(&PicardModel::by_name(model).unwrap(), &qv(class)).unwrap()
    }

    fn frac(n: i64, d: i64) -> Threshold {
        Threshold::Value(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn catalog_values() {
        assert_eq!(rho("p3", &[1]), frac(1, 4));
        assert_eq!(rho("blowup-p3-pt", &[1, -1]), frac(0, 1));
        assert_eq!(rho("p3", &[3]), frac(3, 4));
        assert_eq!(rho("p3", &[4]), frac(1, 1));
        assert_eq!(rho("p1xp2", &[3, 2]), frac(2, 3));
        assert_eq!(rho("wps1112", &[4]), frac(4, 5));
        assert_eq!(rho("quadric-cone-q4", &[3, -1]), frac(2, 3));
    }

    #[test]
    fn outside_the_cone() {
        assert_eq!(rho("p3", &[-1]), Threshold::NotEffective);
        assert_eq!(rho("p1xp2", &[1, -1]), Threshold::NotEffective);
    }

    #[test]
    fn infinite_when_k_is_effective() {
        let m = PicardModel::new("toy", qv(&[1]), vec![qv(&[1])], "K effective").unwrap();
        assert_eq!(effective_threshold(&m, &qv(&[2])).unwrap(), Threshold::Infinite);
    }

    #[test]
    fn non_simplicial_is_unsupported() {
        let r = PicardModel::new("bad", qv(&[-1, -1]), vec![qv(&[1, 1]), qv(&[2, 2])], "");
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn corollary_boundaries() {
        let p1p2 = PicardModel::by_name("p1xp2").unwrap();
        assert!(corollary_certificate(&p1p2, &qv(&[3, 2])).unwrap().certifies_ce_to_plane);
        let w = PicardModel::by_name("wps1112").unwrap();
        assert!(corollary_certificate(&w, &qv(&[4])).unwrap().certifies_ce_to_plane);
        let b = PicardModel::by_name("blowup-p3-pt").unwrap();
        assert!(!corollary_certificate(&b, &qv(&[1, -1])).unwrap().certifies_ce_to_plane);
    }

    #[test]
    fn monotonicity_cases() {
        let p3 = PicardModel::by_name("p3").unwrap();
        let p1p2 = PicardModel::by_name("p1xp2").unwrap();
        let out = monotonicity_check(&[
            ((&p3, qv(&[4])), (&p3, qv(&[4]))),
            ((&p3, qv(&[3])), (&p1p2, qv(&[3, 2]))),
            ((&p3, qv(&[4])), (&p1p2, qv(&[4, 4]))),
        ])
        .unwrap();
        assert!(matches!(out[0], Monotonicity::Holds { .. }));
        assert!(matches!(out[1], Monotonicity::NotApplicable { .. }));
        assert!(matches!(out[2], Monotonicity::Holds { .. }));
    }
}
