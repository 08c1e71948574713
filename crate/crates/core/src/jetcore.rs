//! Truncated multivariate Taylor arithmetic.
//!
//! A [`TruncatedMap`] stores, per component, the Taylor coefficients of order
//! at most `k` of a map in displacement variables. Stored values are Taylor
//! coefficients; [`TruncatedMap::derivative`] converts to derivative components
//! by multiplying with `α!`.

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::{MultiIndex, Poly, Rational};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("dimension mismatch: left has n = {left}, right has n = {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("truncation order mismatch: left has k = {left}, right has k = {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("linear part is singular (determinant {det})")]
    SingularLinearPart { det: Rational },
    #[error("projection order {r} outside 0..={k}")]
    ProjectionOutOfRange { r: u32, k: u32 },
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("coefficient of order {order} exceeds truncation order {k}")]
    CoefficientAboveOrder { order: u32, k: u32 },
}

/// Polynomial in `n` variables with no term of order above `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPoly {
    k: u32,
    poly: Poly,
}

impl TruncatedPoly {
    pub fn new(poly: Poly, k: u32) -> Self {
        TruncatedPoly { k, poly: poly.truncate(k) }
    }

    /// Like [`TruncatedPoly::new`] but rejects coefficients of order above `k`.
    pub fn try_new(poly: Poly, k: u32) -> Result<Self, JetError> {
        if let Some(d) = poly.degree() {
            if d > k {
                return Err(JetError::CoefficientAboveOrder { order: d, k });
            }
        }
        Ok(TruncatedPoly { k, poly })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn add(&self, o: &TruncatedPoly) -> TruncatedPoly {
        TruncatedPoly { k: self.k.min(o.k), poly: (&self.poly + &o.poly).truncate(self.k.min(o.k)) }
    }

    pub fn mul(&self, o: &TruncatedPoly) -> TruncatedPoly {
        let k = self.k.min(o.k);
        TruncatedPoly { k, poly: self.poly.mul_truncated(&o.poly, k) }
    }

    /// Derivative; the result is exact to order `k - 1` and carries that order.
    pub fn partial(&self, i: usize) -> TruncatedPoly {
        let k = self.k.saturating_sub(1);
        TruncatedPoly { k, poly: self.poly.partial(i).truncate(k) }
    }
}

/// Order-`k` Taylor data of a map `ℝⁿ → ℝⁿ`; the constant terms are the target offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedMap {
    n: usize,
    k: u32,
    components: Vec<Poly>,
}

impl TruncatedMap {
    pub fn new(components: Vec<Poly>, k: u32) -> Result<Self, JetError> {
        let n = components.first().map_or(0, Poly::nvars);
        if components.len() != n {
            return Err(JetError::ComponentCount { expected: n, got: components.len() });
        }
        for c in &components {
            if c.nvars() != n {
                return Err(JetError::DimensionMismatch { left: n, right: c.nvars() });
            }
            if let Some(d) = c.degree() {
                if d > k {
                    return Err(JetError::CoefficientAboveOrder { order: d, k });
                }
            }
        }
        Ok(TruncatedMap { n, k, components })
    }

    /// Truncates each component to order `k` instead of rejecting higher terms.
    pub fn truncating(components: Vec<Poly>, k: u32) -> Result<Self, JetError> {
        Self::new(components.into_iter().map(|p| p.truncate(k)).collect(), k)
    }

    pub fn identity(n: usize, k: u32) -> Self {
        Self::identity_at(&vec![Rational::zero(); n], k)
    }

    /// The identity map expanded about `c`: constant `c`, linear part `I`.
    pub fn identity_at(c: &[Rational], k: u32) -> Self {
        let n = c.len();
        let components = (0..n)
            .map(|i| {
                let p = if k >= 1 { Poly::var(n, i) } else { Poly::zero(n) };
                &p + &Poly::constant(n, c[i].clone())
            })
            .collect();
        TruncatedMap { n, k, components }
    }

    pub fn linear(m: &Matrix, k: u32) -> Self {
        let n = m.len();
        let components = m
            .iter()
            .map(|row| {
                Poly::from_terms(n, row.iter().enumerate().map(|(j, c)| (MultiIndex::unit(n, j), c.clone())))
            })
            .collect();
        TruncatedMap { n, k, components }
    }

    /// Builds a map from derivative components `∂^α fⁱ(0)`.
    pub fn from_derivatives(
        n: usize,
        k: u32,
        derivs: impl Fn(usize, &MultiIndex) -> Rational,
    ) -> Self {
        let idx = MultiIndex::all_up_to(n, k);
        let components = (0..n)
            .map(|i| {
                Poly::from_terms(
                    n,
                    idx.iter().map(|a| {
                        (a.clone(), derivs(i, a) / Rational::from_integer(a.factorial()))
                    }),
                )
            })
            .collect();
        TruncatedMap { n, k, components }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> TruncatedPoly {
        TruncatedPoly { k: self.k, poly: self.components[i].clone() }
    }

    pub fn offset(&self) -> Vec<Rational> {
        self.components.iter().map(Poly::constant_term).collect()
    }

    /// Taylor coefficient of `u^α` in component `i`.
    pub fn coeff(&self, i: usize, alpha: &MultiIndex) -> Rational {
        self.components[i].coeff(alpha)
    }

    /// Derivative component `∂^α fⁱ(0) = α! · coeff`.
    pub fn derivative(&self, i: usize, alpha: &MultiIndex) -> Rational {
        self.coeff(i, alpha) * Rational::from_integer(alpha.factorial())
    }

    /// `n × n` matrix of order-one coefficients, row = component.
    pub fn linear_part(&self) -> Matrix {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.coeff(i, &MultiIndex::unit(self.n, j))).collect())
            .collect()
    }

    fn check_compatible(&self, other: &TruncatedMap) -> Result<(), JetError> {
        if self.n != other.n {
            return Err(JetError::DimensionMismatch { left: self.n, right: other.n });
        }
        if self.k != other.k {
            return Err(JetError::OrderMismatch { left: self.k, right: other.k });
        }
        Ok(())
    }

    /// `self` with its constant term removed.
    pub fn centered(&self) -> TruncatedMap {
        let c = self.offset();
        TruncatedMap {
            n: self.n,
            k: self.k,
            components: self
                .components
                .iter()
                .zip(&c)
                .map(|(p, ci)| p - &Poly::constant(self.n, ci.clone()))
                .collect(),
        }
    }
}

/// Order-`k` truncation of `outer ∘ inner`.
///
/// `inner` is applied first; `outer` is read as an expansion about the constant
/// term of `inner`, i.e. the result is `outer(inner(u) − inner(0))`.
pub fn compose_truncated(outer: &TruncatedMap, inner: &TruncatedMap) -> Result<TruncatedMap, JetError> {
    outer.check_compatible(inner)?;
    let powers = PowerTable::new(inner);
    let components = outer.components.iter().map(|p| powers.substitute(p)).collect();
    Ok(TruncatedMap { n: outer.n, k: outer.k, components })
}

/// Order-`inner.k()` truncation of `p(inner(u) − inner(0))` for a single polynomial `p`.
pub fn substitute_truncated(p: &Poly, inner: &TruncatedMap) -> Result<Poly, JetError> {
    if p.nvars() != inner.n {
        return Err(JetError::DimensionMismatch { left: p.nvars(), right: inner.n });
    }
    Ok(PowerTable::new(inner).substitute(p))
}

/// `(innerᵢ − cᵢ)^e` truncated at order `k`, for `e ≤ k`.
struct PowerTable {
    n: usize,
    k: u32,
    powers: Vec<Vec<Poly>>,
}

impl PowerTable {
    fn new(inner: &TruncatedMap) -> Self {
        let (n, k) = (inner.n, inner.k);
        let powers = inner
            .centered()
            .components
            .iter()
            .map(|s| {
                let mut v = vec![Poly::one(n)];
                for e in 1..=k as usize {
                    let next = v[e - 1].mul_truncated(s, k);
                    v.push(next);
                }
                v
            })
            .collect();
        PowerTable { n, k, powers }
    }

    fn substitute(&self, p: &Poly) -> Poly {
        let mut acc = Poly::zero(self.n);
        for (alpha, c) in p.terms() {
            // shifted inner components have no constant term, so higher orders vanish
            if alpha.order() > self.k {
                continue;
            }
            let mut term = Poly::constant(self.n, c.clone());
            for (i, &e) in alpha.entries().iter().enumerate() {
                if e > 0 {
                    term = term.mul_truncated(&self.powers[i][e as usize], self.k);
                    if term.is_zero() {
                        break;
                    }
                }
            }
            acc = &acc + &term;
        }
        acc
    }
}

/// Truncated inverse: the map `g` with `compose_truncated(g, f) = id` to order `k`.
///
/// `g` sends displacements from the target offset of `f` back to displacements
/// at the source, so its constant term is zero.
pub fn invert_truncated(f: &TruncatedMap) -> Result<TruncatedMap, JetError> {
    let (n, k) = (f.n, f.k);
    if k == 0 {
        // G_0 is trivial: a centered 0-jet carries no data
        return Ok(f.clone());
    }
    let lin = f.linear_part();
    let lin_inv = linalg::inverse(&lin).ok_or_else(|| JetError::SingularLinearPart { det: linalg::det(&lin) })?;
    let l_map = TruncatedMap::linear(&lin, k);
    // nonlinear remainder N = f − c − L u
    let nonlinear = TruncatedMap {
        n,
        k,
        components: f
            .centered()
            .components
            .iter()
            .zip(&l_map.components)
            .map(|(a, b)| a - b)
            .collect(),
    };
    let apply_lin_inv = |v: &[Poly]| -> Vec<Poly> {
        lin_inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Poly::zero(n), |acc, (c, p)| &acc + &p.scale(c))
            })
            .collect()
    };
    let ident = TruncatedMap::identity(n, k);
    // g_{m+1} = L⁻¹ (v − N(g_m)); each pass fixes one more order
    let mut g = TruncatedMap { n, k, components: apply_lin_inv(&ident.components) };
    for _ in 1..k.max(1) {
        let ng = compose_truncated(&nonlinear, &g)?;
        let rhs: Vec<Poly> = ident.components.iter().zip(&ng.components).map(|(a, b)| a - b).collect();
        g = TruncatedMap { n, k, components: apply_lin_inv(&rhs) };
    }
    Ok(g)
}

/// Keeps coefficients of order at most `r`.
pub fn project_order(f: &TruncatedMap, r: u32) -> Result<TruncatedMap, JetError> {
    if r > f.k {
        return Err(JetError::ProjectionOutOfRange { r, k: f.k });
    }
    Ok(TruncatedMap { n: f.n, k: r, components: f.components.iter().map(|p| p.truncate(r)).collect() })
}

impl TruncatedMap {
    pub fn is_identity(&self) -> bool {
        *self == TruncatedMap::identity(self.n, self.k)
    }
}
