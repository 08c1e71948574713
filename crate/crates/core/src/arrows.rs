//! k-arrows as a groupoid and the explicit third-order jet group in one variable.

use crate::algebra::linalg;
use crate::algebra::rational::format_rational;
use crate::algebra::{MultiIndex, Rational};
use crate::jetcore::{compose_truncated, invert_truncated, JetError, TruncatedMap};
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArrowError {
    #[error("arrows do not chain: first ends at {first_target}, second starts at {second_source}")]
    EndpointMismatch { first_target: String, second_source: String },
    #[error("arrow jet must have zero constant term")]
    NonCenteredJet,
    #[error("arrow jet is not invertible (linear part determinant {det})")]
    NotInvertible { det: Rational },
    #[error("point has dimension {got}, jet has n = {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("G3(1) element needs a1 != 0")]
    ZeroLinearCoefficient,
    #[error(transparent)]
    Jet(#[from] JetError),
}

fn fmt_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// `j_k(f)^{p,q}`: a centered jet carrying displacements at `source` to displacements at `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    source: Vec<Rational>,
    target: Vec<Rational>,
    jet: TruncatedMap,
}

impl Arrow {
    pub fn new(source: Vec<Rational>, target: Vec<Rational>, jet: TruncatedMap) -> Result<Self, ArrowError> {
        for p in [&source, &target] {
            if p.len() != jet.n() {
                return Err(ArrowError::PointDimension { expected: jet.n(), got: p.len() });
            }
        }
        if jet.offset().iter().any(|c| !c.is_zero()) {
            return Err(ArrowError::NonCenteredJet);
        }
        if jet.k() >= 1 {
            let det = linalg::det(&jet.linear_part());
            if det.is_zero() {
                return Err(ArrowError::NotInvertible { det });
            }
        }
        Ok(Arrow { source, target, jet })
    }

    pub fn identity(point: Vec<Rational>, k: u32) -> Self {
        let n = point.len();
        Arrow { target: point.clone(), source: point, jet: TruncatedMap::identity(n, k) }
    }

    pub fn source(&self) -> &[Rational] {
        &self.source
    }

    pub fn target(&self) -> &[Rational] {
        &self.target
    }

    pub fn jet(&self) -> &TruncatedMap {
        &self.jet
    }

    pub fn n(&self) -> usize {
        self.jet.n()
    }

    pub fn k(&self) -> u32 {
        self.jet.k()
    }
}

/// `second ∘ first`; requires `first.target == second.source`.
pub fn arrow_compose(second: &Arrow, first: &Arrow) -> Result<Arrow, ArrowError> {
    if first.target != second.source {
        return Err(ArrowError::EndpointMismatch {
            first_target: fmt_point(&first.target),
            second_source: fmt_point(&second.source),
        });
    }
    let jet = compose_truncated(&second.jet, &first.jet)?;
    Ok(Arrow { source: first.source.clone(), target: second.target.clone(), jet })
}

pub fn arrow_invert(a: &Arrow) -> Result<Arrow, ArrowError> {
    let jet = invert_truncated(&a.jet)?;
    Ok(Arrow { source: a.target.clone(), target: a.source.clone(), jet })
}

/// Element `(a₁, a₂, a₃)` of `G₃(1)`: the first three derivatives of a local
/// diffeomorphism of the line at its base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G3Jet {
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
}

impl G3Jet {
    pub fn new(a1: Rational, a2: Rational, a3: Rational) -> Result<Self, ArrowError> {
        if a1.is_zero() {
            return Err(ArrowError::ZeroLinearCoefficient);
        }
        Ok(G3Jet { a1, a2, a3 })
    }

    pub fn identity() -> Self {
        G3Jet { a1: Rational::one(), a2: Rational::zero(), a3: Rational::zero() }
    }

    /// The same element as a centered order-3 jet in one variable.
    pub fn to_map(&self) -> TruncatedMap {
        let d = [self.a1.clone(), self.a2.clone(), self.a3.clone()];
        TruncatedMap::from_derivatives(1, 3, |_, a| match a.order() {
            0 => Rational::zero(),
            o => d[o as usize - 1].clone(),
        })
    }

    pub fn from_map(f: &TruncatedMap) -> Result<Self, ArrowError> {
        let d = |o: u32| f.derivative(0, &MultiIndex::new(vec![o]));
        G3Jet::new(d(1), d(2), d(3))
    }
}

/// Chain-rule product: `a · b` is the jet of `a ∘ b`.
pub fn g3_compose(a: &G3Jet, b: &G3Jet) -> G3Jet {
    let three = Rational::from_integer(3.into());
    G3Jet {
        a1: &a.a1 * &b.a1,
        a2: &a.a1 * &b.a2 + &a.a2 * &b.a1 * &b.a1,
        a3: &a.a1 * &b.a3 + three * &a.a2 * &b.a1 * &b.a2 + &a.a3 * &b.a1 * &b.a1 * &b.a1,
    }
}

/// Group inverse, solved order by order from `g3_compose(inv, a) = e`.
pub fn g3_invert(a: &G3Jet) -> G3Jet {
    let c1 = Rational::one() / &a.a1;
    // c1 a2 + c2 a1² = 0
    let c2 = -(&c1 * &a.a2) / (&a.a1 * &a.a1);
    // c1 a3 + 3 c2 a1 a2 + c3 a1³ = 0
    let three = Rational::from_integer(3.into());
    let c3 = -(&c1 * &a.a3 + three * &c2 * &a.a1 * &a.a2) / (&a.a1 * &a.a1 * &a.a1);
    G3Jet { a1: c1, a2: c2, a3: c3 }
}

/// The splitting `G₂(1) → G₃(1)`, `(a₁, a₂) ↦ (a₁, a₂, 3a₂²/(2a₁))`.
pub fn mobius_split(a1: &Rational, a2: &Rational) -> Result<G3Jet, ArrowError> {
    if a1.is_zero() {
        return Err(ArrowError::ZeroLinearCoefficient);
    }
    let a3 = Rational::from_integer(3.into()) * a2 * a2 / (Rational::from_integer(2.into()) * a1);
    Ok(G3Jet { a1: a1.clone(), a2: a2.clone(), a3 })
}

/// Third entry of `split(a₁, a₂)⁻¹ · a`, whose first two entries are always `(1, 0)`.
pub fn schwarzian_defect(a: &G3Jet) -> Rational {
    let split = mobius_split(&a.a1, &a.a2).expect("G3Jet invariant a1 != 0");
    let q = g3_compose(&g3_invert(&split), a);
    debug_assert!(q.a1.is_one() && q.a2.is_zero());
    q.a3
}

/// G₂(1) product `(a₁b₁, a₁b₂ + a₂b₁²)`.
pub fn g2_compose(a: (&Rational, &Rational), b: (&Rational, &Rational)) -> (Rational, Rational) {
    (a.0 * b.0, a.0 * b.1 + a.1 * b.0 * b.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn g(a: i64, b: i64, c: i64) -> G3Jet {
        G3Jet::new(int(a), int(b), int(c)).unwrap()
    }

    #[test]
    fn product_values() {
        assert_eq!(g3_compose(&g(1, 1, 0), &g(2, 0, 1)), g(2, 4, 1));
        assert_eq!(g3_compose(&G3Jet::identity(), &g(2, 0, 1)), g(2, 0, 1));
        assert_eq!(g3_compose(&g3_invert(&g(1, 1, 0)), &g(1, 1, 0)), G3Jet::identity());
    }

    #[test]
    fn splitting_values() {
        assert_eq!(mobius_split(&int(2), &int(1)).unwrap(), G3Jet::new(int(2), int(1), rat(3, 4)).unwrap());
        assert_eq!(mobius_split(&int(1), &int(0)).unwrap(), G3Jet::identity());
        let e11 = mobius_split(&int(1), &int(1)).unwrap();
        assert_eq!(e11, G3Jet::new(int(1), int(1), rat(3, 2)).unwrap());
        let (p1, p2) = g2_compose((&int(1), &int(1)), (&int(1), &int(1)));
        assert_eq!(mobius_split(&p1, &p2).unwrap(), g(1, 2, 6));
        assert_eq!(g3_compose(&e11, &e11), g(1, 2, 6));
        assert_eq!(mobius_split(&int(0), &int(1)), Err(ArrowError::ZeroLinearCoefficient));
    }

    #[test]
    fn schwarzian_examples() {
        // −1/z at z = 1
        assert_eq!(schwarzian_defect(&g(1, -2, 6)), int(0));
        // z + z³ at z = 0
        assert_eq!(schwarzian_defect(&g(1, 0, 6)), int(6));
        let s = mobius_split(&rat(-3, 2), &rat(5, 7)).unwrap();
        assert_eq!(schwarzian_defect(&s), int(0));
    }

    #[test]
    fn arrow_endpoints() {
        let p = vec![int(0)];
        let q = vec![int(1)];
        let a = Arrow::new(p.clone(), q.clone(), g(2, 0, 1).to_map()).unwrap();
        let b = Arrow::new(q.clone(), p.clone(), g(1, 1, 0).to_map()).unwrap();
        let ba = arrow_compose(&b, &a).unwrap();
        assert_eq!(ba.source(), &p[..]);
        assert_eq!(G3Jet::from_map(ba.jet()).unwrap(), g(2, 4, 1));
        let err = arrow_compose(&a, &a).unwrap_err();
        assert!(matches!(err, ArrowError::EndpointMismatch { .. }));
        assert!(err.to_string().contains("(1/1)") && err.to_string().contains("(0/1)"));
        let inv = arrow_invert(&a).unwrap();
        assert_eq!(arrow_compose(&inv, &a).unwrap(), Arrow::identity(p.clone(), 3));
        assert_eq!(arrow_invert(&Arrow::identity(p.clone(), 3)).unwrap(), Arrow::identity(p, 3));
    }
}
