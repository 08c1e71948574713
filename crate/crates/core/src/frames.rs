//! Frame charts and the pointwise geometry of a parallelism: the connection
//! `Γ`, torsion, the covariant derivative `∇̃`, and the curvatures `R̃` and `R`.
//!
//! A frame is a matrix field `e(x)` whose column `a` is the `a`-th frame vector;
//! row `i` is the coordinate component. The parallelism is
//! `ε(x, y) = e(y) e(x)⁻¹`.

use crate::algebra::rational::format_rational;
use crate::algebra::{RatFunc, Rational};
use crate::domain::{Domain, GridPoint};
use crate::expr::{Expr, ExprError};
use crate::field::{inverse, Field, Matrix, NumField, NumericCtx};
use crate::forms::HomForm;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("frame has {rows} rows but the chart dimension is {n}")]
    RowCount { rows: usize, n: usize },
    #[error("frame row {row} has {len} entries, expected {n}")]
    RowLength { row: usize, len: usize, n: usize },
    #[error("domain has {got} intervals, expected {n}")]
    DomainDimension { got: usize, n: usize },
    #[error("entry ({row}, {col}): {source}")]
    Entry { row: usize, col: usize, source: ExprError },
    #[error("entry ({row}, {col}) is not a rational function")]
    NotRational { row: usize, col: usize },
    #[error("frame determinant vanishes identically")]
    SingularEverywhere,
    #[error("frame is singular at ({point})")]
    SingularAt { point: String },
    #[error("dimension {n} exceeds the numeric backend limit {max}")]
    TooManyVariables { n: usize, max: usize },
}

/// A chart described by expression strings, independent of the backend.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartSpec {
    pub name: String,
    pub domain: Domain,
    pub entries: Vec<Vec<Expr>>,
}

impl ChartSpec {
    pub fn parse(name: &str, domain: Domain, rows: &[Vec<String>]) -> Result<Self, FrameError> {
        let n = domain.dim();
        if rows.len() != n {
            return Err(FrameError::RowCount { rows: rows.len(), n });
        }
        let mut entries = Vec::with_capacity(n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(FrameError::RowLength { row, len: r.len(), n });
            }
            let parsed = r
                .iter()
                .enumerate()
                .map(|(col, s)| Expr::parse(s, n).map_err(|source| FrameError::Entry { row, col, source }))
                .collect::<Result<Vec<_>, _>>()?;
            entries.push(parsed);
        }
        Ok(ChartSpec { name: name.to_string(), domain, entries })
    }

    pub fn n(&self) -> usize {
        self.domain.dim()
    }

    /// All entries are rational functions, so the exact backend applies.
    pub fn is_rational(&self) -> bool {
        self.entries.iter().flatten().all(Expr::is_rational)
    }

    pub fn exact_frame(&self, grid: usize) -> Result<Frame<RatFunc>, FrameError> {
        let n = self.n();
        let mut e = Vec::with_capacity(n);
        for (row, r) in self.entries.iter().enumerate() {
            let converted = r
                .iter()
                .enumerate()
                .map(|(col, x)| x.to_ratfunc(n).ok_or(FrameError::NotRational { row, col }))
                .collect::<Result<Vec<_>, _>>()?;
            e.push(converted);
        }
        Frame::new(&self.name, self.domain.clone(), n, e, grid)
    }

    pub fn numeric_frame(&self, ctx: NumericCtx, grid: usize) -> Result<Frame<NumField>, FrameError> {
        if self.n() > NumericCtx::MAX_DIM {
            return Err(FrameError::TooManyVariables { n: self.n(), max: NumericCtx::MAX_DIM });
        }
        let e = self.entries.iter().map(|r| r.iter().map(Expr::to_numeric).collect()).collect();
        Frame::new(&self.name, self.domain.clone(), ctx, e, grid)
    }
}

/// A frame field validated to be invertible on its evaluation grid.
#[derive(Clone)]
pub struct Frame<F: Field> {
    name: String,
    domain: Domain,
    ctx: F::Ctx,
    e: Matrix<F>,
    e_inv: Matrix<F>,
}

fn fmt_point(p: &GridPoint) -> String {
    p.exact.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

impl<F: Field> Frame<F> {
    pub fn new(name: &str, domain: Domain, ctx: F::Ctx, e: Matrix<F>, grid: usize) -> Result<Self, FrameError> {
        let n = domain.dim();
        if e.len() != n {
            return Err(FrameError::RowCount { rows: e.len(), n });
        }
        if let Some((row, r)) = e.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(FrameError::RowLength { row, len: r.len(), n });
        }
        let (e_inv, det) = inverse(&ctx, &e).ok_or(FrameError::SingularEverywhere)?;
        for p in domain.grid(grid) {
            let singular = if F::EXACT {
                det.eval_exact(&p).map_or(true, |v| v.is_zero())
            } else {
                let v = det.eval(&p);
                !v.is_finite() || v.abs() < 1e-12
            };
            if singular {
                return Err(FrameError::SingularAt { point: fmt_point(&p) });
            }
        }
        Ok(Frame { name: name.to_string(), domain, ctx, e, e_inv })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.e
    }

    pub fn inverse_matrix(&self) -> &Matrix<F> {
        &self.e_inv
    }

    /// Frame vector `a` as a vector field.
    pub fn column(&self, a: usize) -> Vec<F> {
        self.e.iter().map(|row| row[a].clone()).collect()
    }
}

/// `Γ^i_{jk}`: `j` is the differentiated slot, `k` the frame slot.
#[derive(Clone, Debug)]
pub struct Connection<F: Field> {
    n: usize,
    g: Vec<F>,
}

impl<F: Field> Connection<F> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> F) -> Self {
        let mut g = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    g.push(f(i, j, k));
                }
            }
        }
        Connection { n, g }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &F {
        &self.g[(i * self.n + j) * self.n + k]
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.g.iter()
    }

    /// `Γ^i_{jk} ↦ Γ^i_{kj}`.
    pub fn transposed(&self) -> Connection<F> {
        Connection::from_fn(self.n, |i, j, k| self.get(i, k, j).clone())
    }
}

/// `Γ^i_{jk} = Σ_a ∂_j e^i_a · (e⁻¹)^a_k`, the derivative of `ε(x, y)` in `y` at `y = x`.
pub fn gamma_from_frame<F: Field>(frame: &Frame<F>) -> Connection<F> {
    let n = frame.n();
    let ctx = frame.ctx();
    let de: Vec<Vec<Vec<F>>> = (0..n)
        .map(|j| frame.e.iter().map(|row| row.iter().map(|v| v.partial(ctx, j)).collect()).collect())
        .collect();
    Connection::from_fn(n, |i, j, k| {
        (0..n).fold(F::zero(ctx), |acc, a| {
            let d = &de[j][i][a];
            if d.is_structurally_zero() {
                acc
            } else {
                acc.add(&d.mul(&frame.e_inv[a][k]))
            }
        })
    })
}

/// Torsion as a `Hom(T,T)`-valued 1-form: `T_{(k)}^i{}_j = Γ^i_{kj} − Γ^i_{jk}`
/// (form index `k`, endomorphism index `j`).
pub fn torsion_of<F: Field>(g: &Connection<F>) -> HomForm<F> {
    let n = g.n();
    HomForm::from_fn(n, 1, |c| {
        let k = c[0];
        (0..n).map(|i| (0..n).map(|j| g.get(i, k, j).sub(g.get(i, j, k))).collect()).collect()
    })
}

fn curvature_with<F: Field>(
    ctx: &F::Ctx,
    g: &Connection<F>,
    f: impl Fn(usize, usize, usize, usize) -> F,
) -> HomForm<F> {
    let n = g.n();
    HomForm::from_fn(n, 2, |c| {
        let (r, j) = (c[0], c[1]);
        let _ = ctx;
        (0..n).map(|i| (0..n).map(|k| f(r, j, i, k).sub(&f(j, r, i, k))).collect()).collect()
    })
}

fn contract<F: Field>(ctx: &F::Ctx, n: usize, mut term: impl FnMut(usize) -> (F, F)) -> F {
    (0..n).fold(F::zero(ctx), |acc, a| {
        let (x, y) = term(a);
        if x.is_structurally_zero() || y.is_structurally_zero() {
            acc
        } else {
            acc.add(&x.mul(&y))
        }
    })
}

/// `R̃^i_{rj,k} = [∂_r Γ^i_{jk} + Γ^a_{rk} Γ^i_{ja}]_{[rj]}`; vanishes for every frame-derived `Γ`.
pub fn curvature_tilde_of<F: Field>(ctx: &F::Ctx, g: &Connection<F>) -> HomForm<F> {
    let n = g.n();
    curvature_with(ctx, g, |r, j, i, k| {
        g.get(i, j, k)
            .partial(ctx, r)
            .add(&contract(ctx, n, |a| (g.get(a, r, k).clone(), g.get(i, j, a).clone())))
    })
}

/// `R^i_{rj,k} = [∂_r Γ^i_{kj} + Γ^a_{kr} Γ^i_{aj}]_{[rj]}`, with form indices `r, j`
/// and endomorphism index `k`.
pub fn curvature_of<F: Field>(ctx: &F::Ctx, g: &Connection<F>) -> HomForm<F> {
    let n = g.n();
    curvature_with(ctx, g, |r, j, i, k| {
        g.get(i, k, j)
            .partial(ctx, r)
            .add(&contract(ctx, n, |a| (g.get(a, k, r).clone(), g.get(i, a, j).clone())))
    })
}

/// Tensor field `t^i_{l₁…l_q}` with one upper and `q` lower indices.
#[derive(Clone, Debug)]
pub struct Tensor<F: Field> {
    n: usize,
    lower: usize,
    comps: Vec<F>,
}

impl<F: Field> Tensor<F> {
    pub fn from_fn(n: usize, lower: usize, mut f: impl FnMut(usize, &[usize]) -> F) -> Self {
        let mut comps = Vec::with_capacity(n.pow(lower as u32 + 1));
        let mut idx = vec![0usize; lower];
        for i in 0..n {
            loop {
                comps.push(f(i, &idx));
                if !advance(&mut idx, n) {
                    break;
                }
            }
        }
        Tensor { n, lower, comps }
    }

    pub fn vector(v: Vec<F>) -> Self {
        Tensor { n: v.len(), lower: 0, comps: v }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    fn offset(&self, i: usize, l: &[usize]) -> usize {
        l.iter().fold(i, |acc, &x| acc * self.n + x)
    }

    pub fn get(&self, i: usize, l: &[usize]) -> &F {
        &self.comps[self.offset(i, l)]
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.comps.iter()
    }

    pub fn sub(&self, o: &Tensor<F>) -> Tensor<F> {
        Tensor { n: self.n, lower: self.lower, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect() }
    }
}

fn advance(idx: &mut [usize], n: usize) -> bool {
    for t in (0..idx.len()).rev() {
        idx[t] += 1;
        if idx[t] < n {
            return true;
        }
        idx[t] = 0;
    }
    false
}

/// `∇̃_r t^i_{l…} = ∂_r t^i_{l…} − Γ^i_{ra} t^a_{l…} + Σ_s Γ^a_{r l_s} t^i_{…a…}`.
///
/// Every lower slot is differentiated covariantly.
pub fn nabla_tilde<F: Field>(ctx: &F::Ctx, g: &Connection<F>, t: &Tensor<F>, r: usize) -> Tensor<F> {
    let n = t.n;
    Tensor::from_fn(n, t.lower, |i, l| {
        let mut v = t.get(i, l).partial(ctx, r);
        v = v.sub(&contract(ctx, n, |a| (g.get(i, r, a).clone(), t.get(a, l).clone())));
        for s in 0..l.len() {
            let mut ll = l.to_vec();
            v = v.add(&contract(ctx, n, |a| {
                ll[s] = a;
                (g.get(a, r, l[s]).clone(), t.get(i, &ll).clone())
            }));
        }
        v
    })
}

/// Rational witness used in reports: `R^i_{rj,k}` at a point, if exact.
pub fn exact_component(form: &HomForm<RatFunc>, idx: &[usize], i: usize, k: usize, p: &[Rational]) -> Option<Rational> {
    let n = form.n();
    form.entry(&n, idx, i, k).eval(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::forms::max_abs;

    fn spec(name: &str, rows: &[&[&str]], bounds: Vec<(i64, i64)>) -> ChartSpec {
        let domain = Domain::new(bounds.into_iter().map(|(a, b)| (int(a), int(b))).collect()).unwrap();
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        ChartSpec::parse(name, domain, &rows).unwrap()
    }

    fn deformed() -> ChartSpec {
        spec("deformed2", &[&["1", "0"], &["0", "1 + x1^2"]], vec![(-1, 1), (-1, 1)])
    }

    fn heisenberg() -> ChartSpec {
        spec("heisenberg3", &[&["1", "0", "0"], &["0", "1", "0"], &["0", "x1", "1"]], vec![(-1, 1); 3])
    }

    #[test]
    fn gamma_of_deformed_chart() {
        let f = deformed().exact_frame(5).unwrap();
        let g = gamma_from_frame(&f);
        let expected = RatFunc::var(2, 0).scale(&int(2)).div(&Expr::parse("1+x1^2", 2).unwrap().to_ratfunc(2).unwrap()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let v = g.get(i, j, k);
                    if (i, j, k) == (1, 0, 1) {
                        assert!(v.sub(&expected).is_zero());
                    } else {
                        assert!(v.is_zero());
                    }
                }
            }
        }
        let t = torsion_of(&g);
        assert!(t.entry(&2, &[0], 1, 1).sub(&expected).is_zero());
        assert!(t.entry(&2, &[1], 1, 0).add(&expected).is_zero());
    }

    #[test]
    fn heisenberg_gamma_and_flatness() {
        let f = heisenberg().exact_frame(3).unwrap();
        let g = gamma_from_frame(&f);
        let nonzero: Vec<(usize, usize, usize)> = (0..27)
            .map(|t| (t / 9, (t / 3) % 3, t % 3))
            .filter(|&(i, j, k)| !g.get(i, j, k).is_zero())
            .collect();
        assert_eq!(nonzero, vec![(2, 0, 1)]);
        assert!(curvature_tilde_of(&3, &g).entries().all(RatFunc::is_zero));
        assert!(curvature_of(&3, &g).entries().all(RatFunc::is_zero));
        for a in 0..3 {
            for r in 0..3 {
                let v = nabla_tilde(&3, &g, &Tensor::vector(f.column(a)), r);
                assert!(v.entries().all(RatFunc::is_zero));
            }
        }
    }

    #[test]
    fn deformed_curvature_witness() {
        let f = deformed().exact_frame(5).unwrap();
        let g = gamma_from_frame(&f);
        let r = curvature_of(&2, &g);
        assert_eq!(exact_component(&r, &[0, 1], 1, 0, &[int(0), int(0)]), Some(int(2)));
        assert!(curvature_tilde_of(&2, &g).entries().all(RatFunc::is_zero));
    }

    #[test]
    fn non_frame_connection_has_tilde_curvature() {
        // Γ²₁₂ = x2 is not produced by any frame; Γ²₁₂ = x1 would only enter at r = j
        let n = 2;
        let g = Connection::from_fn(n, |i, j, k| if (i, j, k) == (1, 0, 1) { RatFunc::var(n, 1) } else { RatFunc::zero(n) });
        let rt = curvature_tilde_of(&n, &g);
        let one = RatFunc::constant(n, int(1));
        assert!(rt.entry(&n, &[1, 0], 1, 1).sub(&one).is_zero());
        assert!(rt.entry(&n, &[0, 1], 1, 1).add(&one).is_zero());
        assert_eq!(rt.entries().filter(|e| !e.is_zero()).count(), 1);
    }

    #[test]
    fn right_constant_factor_leaves_gamma_unchanged() {
        let base = deformed().exact_frame(3).unwrap();
        let scaled = spec("scaled", &[&["2", "1"], &["1 + x1^2", "3 + 3*x1^2"]], vec![(-1, 1), (-1, 1)]);
        let g1 = gamma_from_frame(&base);
        let g2 = gamma_from_frame(&scaled.exact_frame(3).unwrap());
        assert!(g1.entries().zip(g2.entries()).all(|(a, b)| a.sub(b).is_zero()));
    }

    #[test]
    fn singular_frames_are_rejected() {
        let s = spec("flat", &[&["x1", "0"], &["0", "1"]], vec![(-1, 1), (-1, 1)]);
        assert!(matches!(s.exact_frame(5), Err(FrameError::SingularAt { .. })));
        let s = spec("rank1", &[&["1", "1"], &["1", "1"]], vec![(-1, 1), (-1, 1)]);
        assert_eq!(s.exact_frame(5).err(), Some(FrameError::SingularEverywhere));
    }

    #[test]
    fn numeric_backend_matches_exact_on_deformed_chart() {
        let s = deformed();
        let ex = s.exact_frame(5).unwrap();
        let nu = s.numeric_frame(NumericCtx::new(2), 5).unwrap();
        let ge = gamma_from_frame(&ex);
        let gn = gamma_from_frame(&nu);
        let grid = s.domain.grid(5);
        for (a, b) in ge.entries().zip(gn.entries()) {
            for p in &grid {
                assert!((Field::eval(a, p) - b.eval(p)).abs() < 1e-9);
            }
        }
        let rt = curvature_tilde_of(nu.ctx(), &gn);
        assert!(max_abs(rt.entries(), &grid) < 1e-7);
    }
}
