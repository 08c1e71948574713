//! Jet fields over a chart and the Spencer calculus: the operator `D`, the
//! algebraic bracket, the Spencer bracket, prolongation and jet pushforward.
//!
//! All jet coordinates are derivative components `ξⁱ_α`, so the prolongation
//! of a vector field `v` has `ξⁱ_α = ∂^α vⁱ`.

use crate::algebra::rational::format_rational;
use crate::algebra::{MultiIndex, Poly, RatFunc, Rational};
use crate::arrows::Arrow;
use crate::domain::Domain;
use crate::jetcore::{invert_truncated, project_order, substitute_truncated, JetError, TruncatedMap};
use num::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpencerError {
    #[error("the Spencer operator needs k >= 1")]
    OrderZero,
    #[error("base points differ: {left} vs {right}")]
    BasePointMismatch { left: String, right: String },
    #[error("jet orders differ: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("arrow order {arrow} must equal jet order {jet} + 1")]
    PushforwardOrder { arrow: u32, jet: u32 },
    #[error("kernel bracket needs jets with vanishing order-0 part")]
    NotKernel,
    #[error("missing component ({i}, {alpha:?})")]
    MissingComponent { i: usize, alpha: Vec<u32> },
    #[error("pole of a component at the evaluation point")]
    Pole,
    #[error("projection order {r} above {k}")]
    Projection { r: u32, k: u32 },
    #[error(transparent)]
    Jet(#[from] JetError),
}

fn fmt_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn factorial_q(a: &MultiIndex) -> Rational {
    Rational::from_integer(a.factorial())
}

/// Section of `J_k T` over a chart, with rational-function components.
#[derive(Clone, Debug)]
pub struct JetField {
    n: usize,
    k: u32,
    domain: Domain,
    comps: BTreeMap<(usize, MultiIndex), RatFunc>,
}

impl JetField {
    /// Fills every `(i, α)` with `|α| ≤ k` from `f`.
    pub fn from_fn(n: usize, k: u32, domain: Domain, mut f: impl FnMut(usize, &MultiIndex) -> RatFunc) -> Self {
        let mut comps = BTreeMap::new();
        for i in 0..n {
            for a in MultiIndex::all_up_to(n, k) {
                let v = f(i, &a);
                comps.insert((i, a), v);
            }
        }
        JetField { n, k, domain, comps }
    }

    /// Validates that the component set is exactly the multi-indices of order `≤ k`.
    pub fn from_components(
        n: usize,
        k: u32,
        domain: Domain,
        comps: BTreeMap<(usize, MultiIndex), RatFunc>,
    ) -> Result<Self, SpencerError> {
        for i in 0..n {
            for a in MultiIndex::all_up_to(n, k) {
                if !comps.contains_key(&(i, a.clone())) {
                    return Err(SpencerError::MissingComponent { i, alpha: a.entries().to_vec() });
                }
            }
        }
        if comps.len() != n * MultiIndex::all_up_to(n, k).len() {
            return Err(SpencerError::OrderMismatch { left: k, right: k + 1 });
        }
        Ok(JetField { n, k, domain, comps })
    }

    pub fn zero(n: usize, k: u32, domain: Domain) -> Self {
        Self::from_fn(n, k, domain, |_, _| RatFunc::zero(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn get(&self, i: usize, alpha: &MultiIndex) -> &RatFunc {
        &self.comps[&(i, alpha.clone())]
    }

    pub fn components(&self) -> impl Iterator<Item = (&(usize, MultiIndex), &RatFunc)> {
        self.comps.iter()
    }

    /// Vector field part `ξⁱ`.
    pub fn base(&self) -> Vec<RatFunc> {
        (0..self.n).map(|i| self.get(i, &MultiIndex::zeros(self.n)).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(RatFunc::is_zero)
    }

    fn zip_with(&self, other: &JetField, f: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> JetField {
        assert_eq!((self.n, self.k), (other.n, other.k), "jet field shape mismatch");
        let comps = self.comps.iter().map(|(key, v)| (key.clone(), f(v, &other.comps[key]))).collect();
        JetField { n: self.n, k: self.k, domain: self.domain.clone(), comps }
    }

    pub fn add(&self, other: &JetField) -> JetField {
        self.zip_with(other, RatFunc::add)
    }

    pub fn sub(&self, other: &JetField) -> JetField {
        self.zip_with(other, RatFunc::sub)
    }

    pub fn scale(&self, c: &Rational) -> JetField {
        let comps = self.comps.iter().map(|(key, v)| (key.clone(), v.scale(c))).collect();
        JetField { n: self.n, k: self.k, domain: self.domain.clone(), comps }
    }

    /// `π_{k,r}`: keeps components of order `≤ r`.
    pub fn project(&self, r: u32) -> Result<JetField, SpencerError> {
        if r > self.k {
            return Err(SpencerError::Projection { r, k: self.k });
        }
        let comps = self
            .comps
            .iter()
            .filter(|((_, a), _)| a.order() <= r)
            .map(|(key, v)| (key.clone(), v.clone()))
            .collect();
        Ok(JetField { n: self.n, k: r, domain: self.domain.clone(), comps })
    }

    /// Lift to order `k + 1` with the new top components given by `top`.
    pub fn lift_with(&self, mut top: impl FnMut(usize, &MultiIndex) -> RatFunc) -> JetField {
        let mut comps = self.comps.clone();
        for i in 0..self.n {
            for a in MultiIndex::of_order(self.n, self.k + 1) {
                let v = top(i, &a);
                comps.insert((i, a), v);
            }
        }
        JetField { n: self.n, k: self.k + 1, domain: self.domain.clone(), comps }
    }

    pub fn zero_lift(&self) -> JetField {
        let n = self.n;
        self.lift_with(|_, _| RatFunc::zero(n))
    }

    pub fn at(&self, p: &[Rational]) -> Result<PointJet, SpencerError> {
        let coeffs = self
            .comps
            .iter()
            .map(|(key, v)| v.eval(p).map(|x| (key.clone(), x)).ok_or(SpencerError::Pole))
            .collect::<Result<_, _>>()?;
        Ok(PointJet { n: self.n, k: self.k, base: p.to_vec(), coeffs })
    }
}

/// `pr_k v`: `ξⁱ_α = ∂^α vⁱ`.
pub fn prolong(v: &[Poly], k: u32, domain: Domain) -> JetField {
    let n = v.len();
    JetField::from_fn(n, k, domain, |i, a| RatFunc::from_poly(v[i].partial_multi(a)))
}

/// `Dξ`, indexed by the form direction `r`: `(Dξ)_r = (∂_r ξⁱ_α − ξⁱ_{α+e_r})_{|α| ≤ k−1}`.
#[derive(Clone, Debug)]
pub struct SpencerD {
    pub directions: Vec<JetField>,
}

impl SpencerD {
    pub fn is_zero(&self) -> bool {
        self.directions.iter().all(JetField::is_zero)
    }
}

pub fn spencer_d(xi: &JetField) -> Result<SpencerD, SpencerError> {
    if xi.k == 0 {
        return Err(SpencerError::OrderZero);
    }
    let directions = (0..xi.n)
        .map(|r| {
            JetField::from_fn(xi.n, xi.k - 1, xi.domain.clone(), |i, a| {
                xi.get(i, a).partial(r).sub(xi.get(i, &a.add_unit(r)))
            })
        })
        .collect();
    Ok(SpencerD { directions })
}

/// Fiber element of `J_k T` at `base`, in derivative components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointJet {
    n: usize,
    k: u32,
    base: Vec<Rational>,
    coeffs: BTreeMap<(usize, MultiIndex), Rational>,
}

impl PointJet {
    pub fn from_fn(base: Vec<Rational>, k: u32, mut f: impl FnMut(usize, &MultiIndex) -> Rational) -> Self {
        let n = base.len();
        let mut coeffs = BTreeMap::new();
        for i in 0..n {
            for a in MultiIndex::all_up_to(n, k) {
                coeffs.insert((i, a.clone()), f(i, &a));
            }
        }
        PointJet { n, k, base, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn get(&self, i: usize, alpha: &MultiIndex) -> Rational {
        self.coeffs.get(&(i, alpha.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&(usize, MultiIndex), &Rational)> {
        self.coeffs.iter()
    }

    /// In the kernel of `J_k T → T`: `ξⁱ = 0`.
    pub fn is_kernel(&self) -> bool {
        (0..self.n).all(|i| self.get(i, &MultiIndex::zeros(self.n)).is_zero())
    }

    pub fn add(&self, o: &PointJet) -> PointJet {
        let mut out = self.clone();
        for (key, v) in &o.coeffs {
            *out.coeffs.entry(key.clone()).or_insert_with(Rational::zero) += v;
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> PointJet {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn project(&self, r: u32) -> PointJet {
        PointJet::from_fn(self.base.clone(), r.min(self.k), |i, a| self.get(i, a))
    }

    /// Taylor-polynomial representative in displacement variables.
    pub fn representative(&self) -> Vec<Poly> {
        (0..self.n)
            .map(|i| {
                Poly::from_terms(
                    self.n,
                    MultiIndex::all_up_to(self.n, self.k)
                        .into_iter()
                        .map(|a| {
                            let c = self.get(i, &a) / factorial_q(&a);
                            (a, c)
                        }),
                )
            })
            .collect()
    }

    /// Jet of a polynomial vector field in displacement variables at the origin of those variables.
    pub fn from_representative(base: Vec<Rational>, k: u32, v: &[Poly]) -> PointJet {
        PointJet::from_fn(base, k, |i, a| v[i].coeff(a) * factorial_q(a))
    }
}

fn bracket_polys(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let n = a.len();
    (0..n)
        .map(|i| {
            let mut acc = Poly::zero(n);
            for c in 0..n {
                acc = &acc + &(&a[c] * &b[i].partial(c));
                acc = &acc - &(&b[c] * &a[i].partial(c));
            }
            acc
        })
        .collect()
}

fn check_pair(a: &PointJet, b: &PointJet) -> Result<(), SpencerError> {
    if a.base != b.base {
        return Err(SpencerError::BasePointMismatch { left: fmt_point(&a.base), right: fmt_point(&b.base) });
    }
    if a.k != b.k {
        return Err(SpencerError::OrderMismatch { left: a.k, right: b.k });
    }
    Ok(())
}

/// `{a, b}_p ∈ (J_{k−1}T)_p`: the `(k−1)`-jet of the bracket of Taylor representatives.
pub fn algebraic_bracket(a: &PointJet, b: &PointJet) -> Result<PointJet, SpencerError> {
    check_pair(a, b)?;
    if a.k == 0 {
        return Err(SpencerError::OrderZero);
    }
    let br = bracket_polys(&a.representative(), &b.representative());
    Ok(PointJet::from_representative(a.base.clone(), a.k - 1, &br))
}

/// Restriction of the algebraic bracket to kernel jets, which closes at order `k`.
pub fn kernel_bracket(a: &PointJet, b: &PointJet) -> Result<PointJet, SpencerError> {
    check_pair(a, b)?;
    if !a.is_kernel() || !b.is_kernel() {
        return Err(SpencerError::NotKernel);
    }
    let br = bracket_polys(&a.representative(), &b.representative());
    Ok(PointJet::from_representative(a.base.clone(), a.k, &br))
}

/// Pointwise algebraic bracket of `(k+1)`-jet fields through the Leibniz expansion
/// `{ξ,η}ⁱ_α = Σ_{β≤α} C(α,β) Σ_c (ξᶜ_β ηⁱ_{α−β+e_c} − ηᶜ_β ξⁱ_{α−β+e_c})`.
pub fn field_algebraic_bracket(xi: &JetField, eta: &JetField) -> Result<JetField, SpencerError> {
    if xi.k != eta.k {
        return Err(SpencerError::OrderMismatch { left: xi.k, right: eta.k });
    }
    if xi.k == 0 {
        return Err(SpencerError::OrderZero);
    }
    let n = xi.n;
    Ok(JetField::from_fn(n, xi.k - 1, xi.domain.clone(), |i, alpha| {
        let mut acc = RatFunc::zero(n);
        for beta in alpha.lower_set() {
            let binom = Rational::from_integer(alpha.binomial(&beta));
            let rest = alpha.checked_sub(&beta).unwrap();
            for c in 0..n {
                let up = rest.add_unit(c);
                let t = xi
                    .get(c, &beta)
                    .mul(eta.get(i, &up))
                    .sub(&eta.get(c, &beta).mul(xi.get(i, &up)));
                acc = acc.add(&t.scale(&binom));
            }
        }
        acc
    }))
}

/// `[ξ_k, η_k] = {ξ_{k+1}, η_{k+1}} + i(ξ₀)Dη_{k+1} − i(η₀)Dξ_{k+1}` for given lifts.
pub fn spencer_bracket_lifted(xi_lift: &JetField, eta_lift: &JetField) -> Result<JetField, SpencerError> {
    let alg = field_algebraic_bracket(xi_lift, eta_lift)?;
    let d_xi = spencer_d(xi_lift)?;
    let d_eta = spencer_d(eta_lift)?;
    let xi0 = xi_lift.base();
    let eta0 = eta_lift.base();
    let n = xi_lift.n;
    let contract = |v: &[RatFunc], d: &SpencerD, i: usize, a: &MultiIndex| {
        (0..n).fold(RatFunc::zero(n), |acc, r| acc.add(&v[r].mul(d.directions[r].get(i, a))))
    };
    Ok(JetField::from_fn(n, alg.k, alg.domain.clone(), |i, a| {
        alg.get(i, a)
            .add(&contract(&xi0, &d_eta, i, a))
            .sub(&contract(&eta0, &d_xi, i, a))
    }))
}

/// Spencer bracket computed with the zero-padding lift.
pub fn spencer_bracket(xi: &JetField, eta: &JetField) -> Result<JetField, SpencerError> {
    if xi.k != eta.k {
        return Err(SpencerError::OrderMismatch { left: xi.k, right: eta.k });
    }
    if xi.n != eta.n {
        return Err(SpencerError::DimensionMismatch { left: xi.n, right: eta.n });
    }
    spencer_bracket_lifted(&xi.zero_lift(), &eta.zero_lift())
}

/// Vector field bracket `[v, w]ⁱ = vᶜ ∂_c wⁱ − wᶜ ∂_c vⁱ`.
pub fn lie_bracket(v: &[Poly], w: &[Poly]) -> Vec<Poly> {
    bracket_polys(v, w)
}

/// Transport of a `k`-jet of a vector field along a `(k+1)`-arrow:
/// the `k`-jet at the target of `(Df ∘ f⁻¹)·(v ∘ f⁻¹)`.
pub fn jet_pushforward(a: &Arrow, v: &PointJet) -> Result<PointJet, SpencerError> {
    if a.k() != v.k + 1 {
        return Err(SpencerError::PushforwardOrder { arrow: a.k(), jet: v.k });
    }
    if a.n() != v.n {
        return Err(SpencerError::DimensionMismatch { left: a.n(), right: v.n });
    }
    if a.source() != v.base.as_slice() {
        return Err(SpencerError::BasePointMismatch { left: fmt_point(a.source()), right: fmt_point(&v.base) });
    }
    let (n, k) = (v.n, v.k);
    let f = a.jet();
    let g = project_order(&invert_truncated(f)?, k)?;
    let rep = v.representative();
    let v_g: Vec<Poly> = rep.iter().map(|p| substitute_truncated(p, &g)).collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = Poly::zero(n);
        for j in 0..n {
            let dfij = f.components()[i].partial(j).truncate(k);
            let dfij_g = substitute_truncated(&dfij, &g)?;
            acc = &acc + &dfij_g.mul_truncated(&v_g[j], k);
        }
        out.push(acc);
    }
    Ok(PointJet::from_representative(a.target().to_vec(), k, &out))
}

/// Linear part of the pushforward, as a matrix on the coefficient vector in
/// `(i, α)` graded-lex order.
pub fn pushforward_matrix(a: &Arrow) -> Result<Vec<Vec<Rational>>, SpencerError> {
    let k = a.k().checked_sub(1).ok_or(SpencerError::PushforwardOrder { arrow: 0, jet: 0 })?;
    let n = a.n();
    let keys: Vec<(usize, MultiIndex)> = (0..n)
        .flat_map(|i| MultiIndex::all_up_to(n, k).into_iter().map(move |a| (i, a)))
        .collect();
    let mut cols = Vec::with_capacity(keys.len());
    for key in &keys {
        let e = PointJet::from_fn(a.source().to_vec(), k, |i, al| {
            if (i, al.clone()) == *key { Rational::from_integer(1.into()) } else { Rational::zero() }
        });
        let img = jet_pushforward(a, &e)?;
        cols.push(keys.iter().map(|(i, al)| img.get(*i, al)).collect::<Vec<_>>());
    }
    Ok((0..keys.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect())
}

/// Builds an arrow from a truncated map with nonzero constant term by splitting off the offset.
pub fn arrow_from_map(source: Vec<Rational>, f: &TruncatedMap) -> Result<Arrow, crate::arrows::ArrowError> {
    let target: Vec<Rational> = source.iter().zip(f.offset()).map(|(s, c)| s + c).collect();
    Arrow::new(source, target, f.centered())
}
