//! Scalar fields over a chart, with an exact and a sampled backend.
//!
//! The frame and form code is generic over [`Field`]. The exact backend is
//! [`RatFunc`]; the numeric backend [`NumField`] wraps real-valued evaluators
//! and differentiates by central finite differences.

use crate::algebra::rational::to_f64;
use crate::algebra::{RatFunc, Rational};
use crate::domain::GridPoint;
use num::Zero;
use std::fmt;
use std::sync::Arc;

pub trait Field: Clone + Send + Sync {
    type Ctx: Clone + Send + Sync;
    /// Whether zero tests are exact.
    const EXACT: bool;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn constant(ctx: &Self::Ctx, c: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    /// `None` only when the divisor is known to vanish identically.
    fn div(&self, o: &Self) -> Option<Self>;
    fn partial(&self, ctx: &Self::Ctx, r: usize) -> Self;
    /// True when the field is zero by construction.
    fn is_structurally_zero(&self) -> bool;
    /// Value at a grid point; `NaN` or an infinity at a pole.
    fn eval(&self, p: &GridPoint) -> f64;
    /// Exact value where the backend supports it.
    fn eval_exact(&self, _p: &GridPoint) -> Option<Rational> {
        None
    }
}

impl Field for RatFunc {
    type Ctx = usize;
    const EXACT: bool = true;

    fn zero(n: &usize) -> Self {
        RatFunc::zero(*n)
    }
    fn constant(n: &usize, c: &Rational) -> Self {
        RatFunc::constant(*n, c.clone())
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn scale(&self, c: &Rational) -> Self {
        RatFunc::scale(self, c)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        RatFunc::div(self, o)
    }
    fn partial(&self, _n: &usize, r: usize) -> Self {
        RatFunc::partial(self, r)
    }
    fn is_structurally_zero(&self) -> bool {
        self.is_zero()
    }
    fn eval(&self, p: &GridPoint) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        match RatFunc::eval(self, &p.exact) {
            Some(v) => to_f64(&v),
            None => f64::NAN,
        }
    }
    fn eval_exact(&self, p: &GridPoint) -> Option<Rational> {
        RatFunc::eval(self, &p.exact)
    }
}

/// Central difference stencils: five points (fourth order) or seven points (sixth order).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    Five,
    Seven,
}

impl Stencil {
    fn taps(self) -> &'static [(f64, f64)] {
        const FIVE: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];
        const SEVEN: [(f64, f64); 6] = [
            (-3.0, -1.0 / 60.0),
            (-2.0, 9.0 / 60.0),
            (-1.0, -45.0 / 60.0),
            (1.0, 45.0 / 60.0),
            (2.0, -9.0 / 60.0),
            (3.0, 1.0 / 60.0),
        ];
        match self {
            Stencil::Five => &FIVE,
            Stencil::Seven => &SEVEN,
        }
    }
}

/// Finite-difference settings of the numeric backend.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericCtx {
    pub n: usize,
    /// Step for derivatives of the chart's own entries.
    pub step: f64,
    /// Step for derivatives of already differentiated quantities.
    pub nested_step: f64,
    pub stencil: Stencil,
}

impl NumericCtx {
    pub const MAX_DIM: usize = 8;

    pub fn new(n: usize) -> Self {
        NumericCtx { n, step: 1e-4, nested_step: 1e-3, stencil: Stencil::Five }
    }
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Zero,
    Const(f64),
    Fun(Evaluator),
}

/// Sampled real field. `depth` counts the finite-difference levels already applied.
#[derive(Clone)]
pub struct NumField {
    repr: Repr,
    depth: u32,
}

impl fmt::Debug for NumField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "NumField(0)"),
            Repr::Const(c) => write!(f, "NumField({c})"),
            Repr::Fun(_) => write!(f, "NumField(<fn>, depth {})", self.depth),
        }
    }
}

impl NumField {
    pub fn from_fn(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        NumField { repr: Repr::Fun(Arc::new(f)), depth: 0 }
    }

    pub fn constant_f64(c: f64) -> Self {
        if c == 0.0 {
            NumField { repr: Repr::Zero, depth: 0 }
        } else {
            NumField { repr: Repr::Const(c), depth: 0 }
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.repr {
            Repr::Zero => 0.0,
            Repr::Const(c) => *c,
            Repr::Fun(f) => f(x),
        }
    }

    fn binary(&self, o: &Self, op: impl Fn(f64, f64) -> f64 + Send + Sync + Copy + 'static) -> Self {
        let depth = self.depth.max(o.depth);
        match (&self.repr, &o.repr) {
            (Repr::Fun(_), _) | (_, Repr::Fun(_)) => {
                let (a, b) = (self.clone(), o.clone());
                NumField { repr: Repr::Fun(Arc::new(move |x| op(a.value(x), b.value(x)))), depth }
            }
            _ => {
                let v = op(self.value(&[]), o.value(&[]));
                NumField { depth, ..NumField::constant_f64(v) }
            }
        }
    }

    fn map(&self, op: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        match &self.repr {
            Repr::Fun(f) => {
                let f = f.clone();
                NumField { repr: Repr::Fun(Arc::new(move |x| op(f(x)))), depth: self.depth }
            }
            _ => NumField { depth: self.depth, ..NumField::constant_f64(op(self.value(&[]))) },
        }
    }
}

impl Field for NumField {
    type Ctx = NumericCtx;
    const EXACT: bool = false;

    fn zero(_: &NumericCtx) -> Self {
        NumField::constant_f64(0.0)
    }
    fn constant(_: &NumericCtx, c: &Rational) -> Self {
        NumField::constant_f64(to_f64(c))
    }
    fn add(&self, o: &Self) -> Self {
        match (&self.repr, &o.repr) {
            (Repr::Zero, _) => NumField { depth: self.depth.max(o.depth), ..o.clone() },
            (_, Repr::Zero) => NumField { depth: self.depth.max(o.depth), ..self.clone() },
            _ => self.binary(o, |a, b| a + b),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        match (&self.repr, &o.repr) {
            (_, Repr::Zero) => NumField { depth: self.depth.max(o.depth), ..self.clone() },
            _ => self.binary(o, |a, b| a - b),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        match (&self.repr, &o.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => NumField { repr: Repr::Zero, depth: 0 },
            (Repr::Const(c), _) if *c == 1.0 => o.clone(),
            (_, Repr::Const(c)) if *c == 1.0 => self.clone(),
            _ => self.binary(o, |a, b| a * b),
        }
    }
    fn neg(&self) -> Self {
        self.map(|v| -v)
    }
    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return NumField::constant_f64(0.0);
        }
        let c = to_f64(c);
        if c == 1.0 {
            return self.clone();
        }
        self.map(move |v| c * v)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        match (&self.repr, &o.repr) {
            (_, Repr::Zero) => None,
            (Repr::Zero, _) => Some(self.clone()),
            _ => Some(self.binary(o, |a, b| a / b)),
        }
    }
    fn partial(&self, ctx: &NumericCtx, r: usize) -> Self {
        let f = match &self.repr {
            Repr::Fun(f) => f.clone(),
            _ => return NumField::constant_f64(0.0),
        };
        let h = if self.depth == 0 { ctx.step } else { ctx.nested_step };
        let taps = ctx.stencil.taps();
        let n = ctx.n;
        assert!(n <= NumericCtx::MAX_DIM, "numeric backend supports at most {} variables", NumericCtx::MAX_DIM);
        let g = move |x: &[f64]| {
            let mut y = [0.0f64; NumericCtx::MAX_DIM];
            y[..n].copy_from_slice(&x[..n]);
            let x0 = x[r];
            let mut acc = 0.0;
            for &(o, w) in taps {
                y[r] = x0 + o * h;
                acc += w * f(&y[..n]);
            }
            acc / h
        };
        NumField { repr: Repr::Fun(Arc::new(g)), depth: self.depth + 1 }
    }
    fn is_structurally_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }
    fn eval(&self, p: &GridPoint) -> f64 {
        self.value(&p.float)
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

pub fn mat_zero<F: Field>(ctx: &F::Ctx, n: usize) -> Matrix<F> {
    (0..n).map(|_| (0..n).map(|_| F::zero(ctx)).collect()).collect()
}

pub fn mat_identity<F: Field>(ctx: &F::Ctx, n: usize) -> Matrix<F> {
    let one = Rational::from_integer(1.into());
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::constant(ctx, &one) } else { F::zero(ctx) }).collect())
        .collect()
}

pub fn mat_mul<F: Field>(ctx: &F::Ctx, a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(F::zero(ctx), |acc, t| acc.add(&a[i][t].mul(&b[t][j]))))
                .collect()
        })
        .collect()
}

fn minor<F: Field>(m: &Matrix<F>, row: usize, col: usize) -> Matrix<F> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| v.clone()).collect())
        .collect()
}

/// Determinant by cofactor expansion along the first row, skipping zero entries.
pub fn det<F: Field>(ctx: &F::Ctx, m: &Matrix<F>) -> F {
    match m.len() {
        0 => F::constant(ctx, &Rational::from_integer(1.into())),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        n => {
            let mut acc = F::zero(ctx);
            for j in 0..n {
                if m[0][j].is_structurally_zero() {
                    continue;
                }
                let term = m[0][j].mul(&det(ctx, &minor(m, 0, j)));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Inverse through the adjugate; `None` if the determinant vanishes identically.
pub fn inverse<F: Field>(ctx: &F::Ctx, m: &Matrix<F>) -> Option<(Matrix<F>, F)> {
    let n = m.len();
    let d = det(ctx, m);
    if d.is_structurally_zero() {
        return None;
    }
    let mut inv = mat_zero::<F>(ctx, n);
    for i in 0..n {
        for j in 0..n {
            let c = det(ctx, &minor(m, j, i));
            let c = if (i + j) % 2 == 0 { c } else { c.neg() };
            inv[i][j] = c.div(&d)?;
        }
    }
    Some((inv, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::domain::Domain;

    #[test]
    fn stencils_differentiate_polynomials() {
        for stencil in [Stencil::Five, Stencil::Seven] {
            let ctx = NumericCtx { stencil, ..NumericCtx::new(2) };
            let f = NumField::from_fn(|x| x[0].powi(3) * x[1]);
            let d = f.partial(&ctx, 0);
            assert_eq!(d.depth(), 1);
            assert!((d.value(&[0.5, 2.0]) - 1.5).abs() < 1e-9);
            let dd = d.partial(&ctx, 1);
            assert!((dd.value(&[0.5, 2.0]) - 0.75).abs() < 1e-7);
        }
    }

    #[test]
    fn structural_zeros_propagate() {
        let ctx = NumericCtx::new(1);
        let z = NumField::zero(&ctx);
        let f = NumField::from_fn(|x| x[0].sin());
        assert!(z.mul(&f).is_structurally_zero());
        assert!(NumField::constant(&ctx, &int(3)).partial(&ctx, 0).is_structurally_zero());
        assert!(!f.add(&z).is_structurally_zero());
    }

    #[test]
    fn exact_inverse_of_rational_matrix() {
        let n = 2;
        let x = RatFunc::var(n, 0);
        let one = RatFunc::constant(n, int(1));
        let m = vec![vec![one.clone(), x.clone()], vec![RatFunc::zero(n), one.add(&x.mul(&x))]];
        let (inv, d) = inverse(&n, &m).unwrap();
        assert!(d.sub(&one.add(&x.mul(&x))).is_zero());
        let prod = mat_mul(&n, &m, &inv);
        let id = mat_identity::<RatFunc>(&n, 2);
        for i in 0..2 {
            for j in 0..2 {
                assert!(prod[i][j].sub(&id[i][j]).is_zero());
            }
        }
        let p = &Domain::symmetric_unit(2).grid(3)[4];
        assert_eq!(Field::eval(&d, p), 1.0);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let n = 1;
        let x = RatFunc::var(n, 0);
        let m = vec![vec![x.clone(), x.clone()], vec![x.clone(), x]];
        assert!(inverse(&n, &m).is_none());
    }
}
