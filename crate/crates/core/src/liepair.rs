//! Pairs `(g, h)` of a finite-dimensional Lie algebra and a subalgebra: the
//! derived filtration `h = h₀ ⊇ h₁ ⊇ …`, the order of the pair, effectiveness,
//! the semidirect product `h ⋉ W` of a representation, and the representation of
//! `h` on `g/h`.

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::Rational;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("structure constants are not antisymmetric at ({i}, {j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("Jacobi identity fails for basis elements ({i}, {j}, {k})")]
    Jacobi { i: usize, j: usize, k: usize },
    #[error("vector has length {got}, algebra dimension is {dim}")]
    Dimension { got: usize, dim: usize },
    #[error("subalgebra basis is linearly dependent")]
    Dependent,
    #[error("bracket of subalgebra basis elements {i} and {j} leaves the span")]
    NotClosed { i: usize, j: usize },
    #[error("representation law fails for basis elements ({i}, {j})")]
    NotRepresentation { i: usize, j: usize },
    #[error("representation has {got} matrices for an algebra of dimension {dim}")]
    RepresentationSize { got: usize, dim: usize },
    #[error("matrix commutator leaves the span of the basis")]
    NotMatrixAlgebra,
}

/// Lie algebra given by `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    /// `c[i][j][k] = c^k_{ij}`
    c: Vec<Vec<Vec<Rational>>>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity exactly.
    pub fn new(c: Vec<Vec<Vec<Rational>>>) -> Result<Self, LieError> {
        let dim = c.len();
        for (i, row) in c.iter().enumerate() {
            if row.len() != dim {
                return Err(LieError::Dimension { got: row.len(), dim });
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != dim {
                    return Err(LieError::Dimension { got: v.len(), dim });
                }
                if (0..dim).any(|k| v[k] != -c[j][i][k].clone()) {
                    return Err(LieError::NotAntisymmetric { i, j });
                }
            }
        }
        let g = LieAlgebra { dim, c };
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let (ei, ej, ek) = (g.unit(i), g.unit(j), g.unit(k));
                    let s1 = g.bracket(&ei, &g.bracket(&ej, &ek));
                    let s2 = g.bracket(&ej, &g.bracket(&ek, &ei));
                    let s3 = g.bracket(&ek, &g.bracket(&ei, &ej));
                    if (0..dim).any(|t| !(&s1[t] + &s2[t] + &s3[t]).is_zero()) {
                        return Err(LieError::Jacobi { i, j, k });
                    }
                }
            }
        }
        Ok(g)
    }

    /// From the brackets `[e_i, e_j]` with `i < j`; the rest follows by antisymmetry.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<Rational>)]) -> Result<Self, LieError> {
        let mut c = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        for (i, j, v) in brackets {
            if *i >= dim || *j >= dim || v.len() != dim {
                return Err(LieError::Dimension { got: v.len().max(*i.max(j) + 1), dim });
            }
            if i == j {
                return Err(LieError::NotAntisymmetric { i: *i, j: *j });
            }
            c[*i][*j] = v.clone();
            c[*j][*i] = v.iter().map(|x| -x.clone()).collect();
        }
        LieAlgebra::new(c)
    }

    /// Structure constants of the matrix Lie algebra spanned by `basis` (under the commutator).
    pub fn from_matrices(basis: &[Matrix]) -> Result<Self, LieError> {
        let flat: Vec<Vec<Rational>> = basis.iter().map(|m| m.iter().flatten().cloned().collect()).collect();
        let dim = basis.len();
        let mut c = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let comm = linalg::sub(&linalg::matmul(&basis[i], &basis[j]), &linalg::matmul(&basis[j], &basis[i]));
                let v: Vec<Rational> = comm.into_iter().flatten().collect();
                c[i][j] = linalg::solve_in_span(&flat, &v).ok_or(LieError::NotMatrixAlgebra)?;
            }
        }
        LieAlgebra::new(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Rational>>] {
        &self.c
    }

    pub fn unit(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::from_integer(1.into());
        v
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let f = ui * vj;
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.c[i][j][k].is_zero() {
                        *o += &f * &self.c[i][j][k];
                    }
                }
            }
        }
        out
    }
}

/// Subspace given by a reduced (row echelon) basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subalgebra {
    dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subalgebra {
    /// Checks independence and closure under the bracket of `g`.
    pub fn new(g: &LieAlgebra, basis: Vec<Vec<Rational>>) -> Result<Self, LieError> {
        if let Some(v) = basis.iter().find(|v| v.len() != g.dim) {
            return Err(LieError::Dimension { got: v.len(), dim: g.dim });
        }
        if !basis.is_empty() && linalg::rank(&basis) < basis.len() {
            return Err(LieError::Dependent);
        }
        let s = Subalgebra { dim: g.dim, basis };
        for i in 0..s.basis.len() {
            for j in i + 1..s.basis.len() {
                if !s.contains(&g.bracket(&s.basis[i], &s.basis[j])) {
                    return Err(LieError::NotClosed { i, j });
                }
            }
        }
        Ok(Subalgebra { dim: g.dim, basis: linalg::row_basis(&s.basis, g.dim) })
    }

    pub fn zero(dim: usize) -> Self {
        Subalgebra { dim, basis: Vec::new() }
    }

    pub fn whole(g: &LieAlgebra) -> Self {
        Subalgebra { dim: g.dim, basis: (0..g.dim).map(|i| g.unit(i)).collect() }
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.iter().all(Zero::is_zero) || linalg::in_span(&self.basis, v)
    }

    pub fn contains_all(&self, other: &Subalgebra) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

/// `{ v ∈ s : [v, x] ∈ s for all x ∈ g }`.
pub fn next_stage(g: &LieAlgebra, s: &Subalgebra) -> Subalgebra {
    if s.is_zero() {
        return s.clone();
    }
    // linear forms vanishing on s detect membership
    let annihilator = linalg::kernel(&s.basis.to_vec(), g.dim);
    let m = s.basis.len();
    let mut rows: Matrix = Vec::new();
    for w in &annihilator {
        for b in 0..g.dim {
            let xb = g.unit(b);
            rows.push(
                s.basis
                    .iter()
                    .map(|u| g.bracket(u, &xb).iter().zip(w).fold(Rational::zero(), |acc, (a, c)| acc + a * c))
                    .collect(),
            );
        }
    }
    let coeffs = if rows.is_empty() {
        (0..m).map(|t| {
            let mut v = vec![Rational::zero(); m];
            v[t] = Rational::from_integer(1.into());
            v
        })
        .collect()
    } else {
        linalg::kernel(&rows, m)
    };
    let vectors: Vec<Vec<Rational>> = coeffs
        .iter()
        .map(|c| {
            (0..g.dim)
                .map(|k| c.iter().zip(&s.basis).fold(Rational::zero(), |acc, (ct, u)| acc + ct * &u[k]))
                .collect()
        })
        .collect();
    Subalgebra { dim: g.dim, basis: linalg::row_basis(&vectors, g.dim) }
}

/// The chain `h₀ = h ⊋ h₁ ⊋ …`, ending at `0` or at the first repeated stage.
pub fn filtration_of(g: &LieAlgebra, h: &Subalgebra) -> Vec<Subalgebra> {
    let mut chain = vec![h.clone()];
    loop {
        let last = chain.last().unwrap();
        if last.is_zero() {
            return chain;
        }
        let next = next_stage(g, last);
        if next.dim() == last.dim() {
            return chain;
        }
        chain.push(next);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    /// The filtration stops at this nonzero ideal of `g` contained in `h`.
    Ineffective(Subalgebra),
}

pub fn order_of(g: &LieAlgebra, h: &Subalgebra) -> Order {
    let chain = filtration_of(g, h);
    let last = chain.last().unwrap();
    if last.is_zero() {
        Order::Finite(chain.len() - 1)
    } else {
        Order::Ineffective(last.clone())
    }
}

/// `Ok(())` when `h` contains no nonzero ideal of `g`; otherwise the largest such ideal.
pub fn effective_check(g: &LieAlgebra, h: &Subalgebra) -> Result<(), Subalgebra> {
    match order_of(g, h) {
        Order::Finite(_) => Ok(()),
        Order::Ineffective(ideal) => Err(ideal),
    }
}

/// Matrices `ρ(b)` acting on `W = ℝ^{dim}` for each basis vector of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    dim: usize,
    mats: Vec<Matrix>,
}

impl Representation {
    /// Checks `ρ([e_a, e_b]) = [ρ(e_a), ρ(e_b)]` on basis pairs.
    pub fn new(h: &LieAlgebra, dim: usize, mats: Vec<Matrix>) -> Result<Self, LieError> {
        if mats.len() != h.dim {
            return Err(LieError::RepresentationSize { got: mats.len(), dim: h.dim });
        }
        if let Some(m) = mats.iter().find(|m| m.len() != dim || m.iter().any(|r| r.len() != dim)) {
            return Err(LieError::Dimension { got: m.len(), dim });
        }
        let rep = Representation { dim, mats };
        for a in 0..h.dim {
            for b in a + 1..h.dim {
                let lhs = rep.apply(&h.bracket(&h.unit(a), &h.unit(b)));
                let rhs = linalg::sub(&linalg::matmul(&rep.mats[a], &rep.mats[b]), &linalg::matmul(&rep.mats[b], &rep.mats[a]));
                if lhs != rhs {
                    return Err(LieError::NotRepresentation { i: a, j: b });
                }
            }
        }
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    /// `ρ(Σ c_a e_a) = Σ c_a ρ(e_a)`.
    pub fn apply(&self, coeffs: &[Rational]) -> Matrix {
        let mut out = linalg::zeros(self.dim, self.dim);
        for (c, m) in coeffs.iter().zip(&self.mats) {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(m) {
                for (x, y) in o.iter_mut().zip(r) {
                    *x += c * y;
                }
            }
        }
        out
    }

    /// Whether `ρ` is injective on `h`.
    pub fn is_faithful(&self) -> bool {
        let cols: Vec<Vec<Rational>> = self.mats.iter().map(|m| m.iter().flatten().cloned().collect()).collect();
        cols.is_empty() || linalg::rank(&cols) == cols.len()
    }
}

/// `g = h ⊕ W` with `[(a, w), (a', w')] = ([a, a'], ρ(a)w' − ρ(a')w)`; `h` sits in the
/// first `dim h` coordinates.
pub fn semidirect_from_rep(h: &LieAlgebra, rho: &Representation) -> Result<(LieAlgebra, Subalgebra), LieError> {
    let (m, w) = (h.dim, rho.dim);
    let d = m + w;
    let mut c = vec![vec![vec![Rational::zero(); d]; d]; d];
    for a in 0..m {
        for b in 0..m {
            c[a][b][..m].clone_from_slice(&h.c[a][b]);
        }
        for p in 0..w {
            for q in 0..w {
                c[a][m + p][m + q] = rho.mats[a][q][p].clone();
                c[m + p][a][m + q] = -rho.mats[a][q][p].clone();
            }
        }
    }
    let g = LieAlgebra::new(c)?;
    let sub = Subalgebra { dim: d, basis: (0..m).map(|a| g.unit(a)).collect() };
    Ok((g, sub))
}

/// The action `v ↦ [b, v] mod h` of `h` on `g/h`, written in the complement spanned by
/// the standard basis vectors returned alongside (the pivot completion of `h`'s basis).
pub fn relative_adjoint(g: &LieAlgebra, h: &Subalgebra) -> (Representation, Vec<usize>) {
    let complement = linalg::pivot_completion(&h.basis, g.dim);
    let mut cols: Vec<Vec<Rational>> = h.basis.clone();
    cols.extend(complement.iter().map(|&t| g.unit(t)));
    let w = complement.len();
    let m = h.basis.len();
    let mats = h
        .basis
        .iter()
        .map(|b| {
            let mut mat = linalg::zeros(w, w);
            for (p, &t) in complement.iter().enumerate() {
                let image = g.bracket(b, &g.unit(t));
                let coords = linalg::solve_in_span(&cols, &image).expect("h and its complement span g");
                for q in 0..w {
                    mat[q][p] = coords[m + q].clone();
                }
            }
            mat
        })
        .collect();
    (Representation { dim: w, mats }, complement)
}

/// Coordinates of the subalgebra's basis as an abstract Lie algebra.
pub fn as_algebra(g: &LieAlgebra, h: &Subalgebra) -> LieAlgebra {
    let m = h.basis.len();
    let mut c = vec![vec![vec![Rational::zero(); m]; m]; m];
    for a in 0..m {
        for b in 0..m {
            let v = g.bracket(&h.basis[a], &h.basis[b]);
            c[a][b] = linalg::solve_in_span(&h.basis, &v).expect("subalgebra is closed");
        }
    }
    LieAlgebra { dim: m, c }
}

/// `[s, t]` as a subspace.
pub fn bracket_space(g: &LieAlgebra, s: &Subalgebra, t: &Subalgebra) -> Subalgebra {
    let vectors: Vec<Vec<Rational>> = s
        .basis
        .iter()
        .flat_map(|u| t.basis.iter().map(move |v| g.bracket(u, v)))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    Subalgebra { dim: g.dim, basis: linalg::row_basis(&vectors, g.dim) }
}

/// Whether the lower central series of `s` reaches zero.
pub fn is_nilpotent(g: &LieAlgebra, s: &Subalgebra) -> bool {
    let mut cur = s.clone();
    for _ in 0..=s.dim() {
        if cur.is_zero() {
            return true;
        }
        let next = bracket_space(g, &cur, s);
        if next.dim() == cur.dim() {
            return false;
        }
        cur = next;
    }
    cur.is_zero()
}

pub fn is_ideal_of(g: &LieAlgebra, ambient: &Subalgebra, s: &Subalgebra) -> bool {
    ambient.contains_all(s) && ambient.contains_all(&bracket_space(g, ambient, s)) && s.contains_all(&bracket_space(g, ambient, s))
}
