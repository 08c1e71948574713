use super::multiindex::MultiIndex;
use super::rational::{to_f64, Rational};
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse multivariate polynomial with rational coefficients.
///
/// Terms are keyed by graded-lex [`MultiIndex`]; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zeros(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, i), Rational::one())
    }

    pub fn monomial(alpha: MultiIndex, c: Rational) -> Self {
        let nvars = alpha.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (a, c) in terms {
            assert_eq!(a.dim(), nvars, "monomial dimension mismatch");
            p.add_term(a, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|a| a.order() == 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.terms.get(alpha).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&MultiIndex::zeros(self.nvars))
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|a| a.order())
    }

    pub fn leading(&self) -> Option<(&MultiIndex, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    /// Drops every term of total degree above `k`.
    pub fn truncate(&self, k: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.order() <= k)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product with every term of total degree above `k` discarded on the fly.
    pub fn mul_truncated(&self, other: &Poly, k: u32) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (a, ca) in &self.terms {
            let oa = a.order();
            if oa > k {
                break;
            }
            for (b, cb) in &other.terms {
                if oa + b.order() > k {
                    break;
                }
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            let e = a.get(i);
            if e == 0 {
                continue;
            }
            out.add_term(a.sub_unit(i).unwrap(), c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// `∂^α`.
    pub fn partial_multi(&self, alpha: &MultiIndex) -> Poly {
        let mut p = self.clone();
        for (i, &e) in alpha.entries().iter().enumerate() {
            for _ in 0..e {
                p = p.partial(i);
            }
        }
        p
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Rational::zero();
        for (a, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(a.entries()) {
                if e > 0 {
                    t *= num::pow(xi.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| {
                a.entries()
                    .iter()
                    .zip(x)
                    .fold(to_f64(c), |t, (&e, xi)| t * xi.powi(e as i32))
            })
            .sum()
    }

    /// Substitutes `x_i -> x_i + shift_i` (re-expansion about a new origin).
    pub fn shift(&self, shift: &[Rational]) -> Poly {
        let n = self.nvars;
        let lin: Vec<Poly> = (0..n)
            .map(|i| &Poly::var(n, i) + &Poly::constant(n, shift[i].clone()))
            .collect();
        let mut out = Poly::zero(n);
        for (a, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &e) in a.entries().iter().enumerate() {
                if e > 0 {
                    t = &t * &lin[i].pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars);
        let (ld, lc) = d.leading()?;
        if self.is_zero() {
            return Some(Poly::zero(self.nvars));
        }
        if self.degree()? < d.degree()? {
            return None;
        }
        let (ld, lc) = (ld.clone(), lc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((lr, cr)) = rem.leading() {
            let shift = lr.checked_sub(&ld)?;
            let c = cr / &lc;
            let mut step = Poly::zero(self.nvars);
            for (a, cd) in &d.terms {
                step.add_term(a.add(&shift), cd * &c);
            }
            rem = &rem - &step;
            q.add_term(shift, c);
        }
        Some(q)
    }

    /// Largest monomial dividing every term, with its per-variable exponents.
    pub fn monomial_content(&self) -> Option<MultiIndex> {
        let mut it = self.terms.keys();
        let first = it.next()?.entries().to_vec();
        let m = it.fold(first, |acc, a| {
            acc.iter().zip(a.entries()).map(|(x, y)| *x.min(y)).collect()
        });
        Some(MultiIndex::new(m))
    }

    /// Divides by a monomial that is known to divide every term.
    pub fn div_monomial(&self, m: &MultiIndex) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.checked_sub(m).expect("monomial does not divide"), c.clone()))
                .collect(),
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (a, c) in &small.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn arithmetic_and_derivatives() {
        let p = &(&x(2, 0) * &x(2, 0)) + &x(2, 1); // x^2 + y
        let q = &p * &p;
        assert_eq!(q.degree(), Some(4));
        assert_eq!(q.partial(1), p.scale(&int(2)));
        assert_eq!(q.eval(&[int(1), int(2)]), int(9));
        assert!((q.eval_f64(&[1.0, 2.0]) - 9.0).abs() < 1e-12);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn exact_division() {
        let f = &Poly::one(2) + &(&x(2, 0) * &x(2, 0));
        let g = &x(2, 1) - &Poly::constant(2, rat(1, 3));
        let prod = &f * &g;
        assert_eq!(prod.div_exact(&f), Some(g.clone()));
        assert_eq!(prod.div_exact(&g), Some(f.clone()));
        assert_eq!(f.div_exact(&g), None);
        assert_eq!((&prod + &Poly::one(2)).div_exact(&f), None);
    }

    #[test]
    fn truncated_product_and_shift() {
        let p = &Poly::one(1) + &x(1, 0);
        let sq = p.mul_truncated(&p, 1);
        assert_eq!(sq, &Poly::one(1) + &x(1, 0).scale(&int(2)));
        let shifted = (&x(1, 0) * &x(1, 0)).shift(&[int(1)]);
        assert_eq!(shifted.eval(&[int(0)]), int(1));
        assert_eq!(shifted.eval(&[int(2)]), int(9));
    }

    #[test]
    fn monomial_content() {
        let p = &(&x(2, 0) * &x(2, 1)) + &(&x(2, 1) * &x(2, 1));
        let m = p.monomial_content().unwrap();
        assert_eq!(m.entries(), &[0, 1]);
        assert_eq!(p.div_monomial(&m), &x(2, 0) + &x(2, 1));
    }
}
