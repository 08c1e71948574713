//! Alternating forms with `Hom(T,T)` or scalar values, and their exterior calculus
//! relative to a parallelism connection.
//!
//! Components are stored once per strictly increasing index tuple; access with
//! any other ordering applies the permutation sign, and repeated indices give zero.
//! A component `ω_{c₁…c_p}` is the value `ω(∂_{c₁}, …, ∂_{c_p})`.

pub mod identities;

use crate::domain::GridPoint;
use crate::field::{mat_identity, mat_mul, mat_zero, Field, Matrix};
use crate::frames::Connection;
use crate::algebra::Rational;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Sorts `idx`, returning the sorted tuple and the permutation sign, or `None`
/// when an index repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for a in 0..v.len() {
        for b in 0..v.len() - a - 1 {
            if v[b] == v[b + 1] {
                return None;
            }
            if v[b] > v[b + 1] {
                v.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Strictly increasing `p`-tuples from `0..n`, in lexicographic order.
pub fn increasing_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

fn all_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    out
}

fn permutations(p: usize) -> Vec<(Vec<usize>, i32)> {
    all_tuples(p, p)
        .into_iter()
        .filter_map(|t| sort_with_sign(&t).map(|(_, s)| (t, s)))
        .collect()
}

fn factorial(p: usize) -> i64 {
    (1..=p as i64).product()
}

/// Sign of the shuffle that puts the positions in `s` first, then the rest.
fn shuffle_sign(s: &[usize]) -> i32 {
    let moves: usize = s.iter().enumerate().map(|(t, &pos)| pos - t).sum();
    if moves % 2 == 0 {
        1
    } else {
        -1
    }
}

fn split_positions(len: usize, p: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    increasing_tuples(len, p)
        .into_iter()
        .map(|s| {
            let rest = (0..len).filter(|i| !s.contains(i)).collect();
            (s, rest)
        })
        .collect()
}

fn pick(c: &[usize], pos: &[usize]) -> Vec<usize> {
    pos.iter().map(|&t| c[t]).collect()
}

/// Degree-`p` form with `n × n` matrix values.
#[derive(Clone, Debug)]
pub struct HomForm<F: Field> {
    n: usize,
    p: usize,
    comps: BTreeMap<Vec<usize>, Matrix<F>>,
}

/// Degree-`p` form with scalar values.
#[derive(Clone, Debug)]
pub struct ScalarForm<F: Field> {
    n: usize,
    p: usize,
    comps: BTreeMap<Vec<usize>, F>,
}

impl<F: Field> HomForm<F> {
    /// Builds a form from its values on increasing tuples; `f` must describe an alternating form.
    pub fn from_fn(n: usize, p: usize, mut f: impl FnMut(&[usize]) -> Matrix<F>) -> Self {
        let comps = increasing_tuples(n, p).into_iter().map(|c| {
            let v = f(&c);
            (c, v)
        });
        HomForm { n, p, comps: comps.collect() }
    }

    /// Alternation `(1/p!) Σ_σ sgn σ f(c∘σ)` of an arbitrary multilinear assignment.
    pub fn alternate(ctx: &F::Ctx, n: usize, p: usize, mut f: impl FnMut(&[usize]) -> Matrix<F>) -> Self {
        let perms = permutations(p);
        let norm = Rational::new(1.into(), factorial(p).into());
        Self::from_fn(n, p, |c| {
            let mut acc = mat_zero::<F>(ctx, n);
            for (perm, s) in &perms {
                let idx: Vec<usize> = perm.iter().map(|&t| c[t]).collect();
                let m = f(&idx);
                acc = mat_axpy(&acc, &m, s);
            }
            acc.iter().map(|row| row.iter().map(|v| v.scale(&norm)).collect()).collect()
        })
    }

    pub fn zero(ctx: &F::Ctx, n: usize, p: usize) -> Self {
        Self::from_fn(n, p, |_| mat_zero::<F>(ctx, n))
    }

    /// Degree-0 form with the identity endomorphism as value.
    pub fn identity(ctx: &F::Ctx, n: usize) -> Self {
        Self::from_fn(n, 0, |_| mat_identity::<F>(ctx, n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    /// Stored components, keyed by increasing tuple.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Matrix<F>)> {
        self.comps.iter()
    }

    /// Matrix at an arbitrary index tuple, with the permutation sign applied.
    pub fn at(&self, ctx: &F::Ctx, idx: &[usize]) -> Matrix<F> {
        match sort_with_sign(idx) {
            None => mat_zero::<F>(ctx, self.n),
            Some((c, 1)) => self.comps[&c].clone(),
            Some((c, _)) => mat_neg(&self.comps[&c]),
        }
    }

    /// Entry `ωⁱ_{idx, j}` with sign.
    pub fn entry(&self, ctx: &F::Ctx, idx: &[usize], i: usize, j: usize) -> F {
        match sort_with_sign(idx) {
            None => F::zero(ctx),
            Some((c, 1)) => self.comps[&c][i][j].clone(),
            Some((c, _)) => self.comps[&c][i][j].neg(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.comps.values().flat_map(|m| m.iter().flatten())
    }

    fn zip(&self, o: &HomForm<F>, f: impl Fn(&F, &F) -> F) -> HomForm<F> {
        assert_eq!((self.n, self.p), (o.n, o.p), "form shape mismatch");
        let comps = self
            .comps
            .iter()
            .map(|(k, m)| {
                let other = &o.comps[k];
                let v = m.iter().zip(other).map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect()).collect();
                (k.clone(), v)
            })
            .collect();
        HomForm { n: self.n, p: self.p, comps }
    }

    pub fn add(&self, o: &HomForm<F>) -> HomForm<F> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &HomForm<F>) -> HomForm<F> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &Rational) -> HomForm<F> {
        let comps = self
            .comps
            .iter()
            .map(|(k, m)| (k.clone(), m.iter().map(|r| r.iter().map(|v| v.scale(c)).collect()).collect()))
            .collect();
        HomForm { n: self.n, p: self.p, comps }
    }
}

impl<F: Field> ScalarForm<F> {
    pub fn from_fn(n: usize, p: usize, mut f: impl FnMut(&[usize]) -> F) -> Self {
        let comps = increasing_tuples(n, p).into_iter().map(|c| {
            let v = f(&c);
            (c, v)
        });
        ScalarForm { n, p, comps: comps.collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &F)> {
        self.comps.iter()
    }

    pub fn at(&self, ctx: &F::Ctx, idx: &[usize]) -> F {
        match sort_with_sign(idx) {
            None => F::zero(ctx),
            Some((c, 1)) => self.comps[&c].clone(),
            Some((c, _)) => self.comps[&c].neg(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.comps.values()
    }

    pub fn sub(&self, o: &ScalarForm<F>) -> ScalarForm<F> {
        assert_eq!((self.n, self.p), (o.n, o.p), "form shape mismatch");
        let comps = self.comps.iter().map(|(k, v)| (k.clone(), v.sub(&o.comps[k]))).collect();
        ScalarForm { n: self.n, p: self.p, comps }
    }
}

fn mat_neg<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    m.iter().map(|r| r.iter().map(F::neg).collect()).collect()
}

/// `acc + s·m` for a sign `s`.
fn mat_axpy<F: Field>(acc: &Matrix<F>, m: &Matrix<F>, s: &i32) -> Matrix<F> {
    acc.iter()
        .zip(m)
        .map(|(r, q)| r.iter().zip(q).map(|(a, b)| if *s > 0 { a.add(b) } else { a.sub(b) }).collect())
        .collect()
}

/// Which lower slot of `Γ` is contracted with the value matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    /// `d̃_r M = ∂_r M − Γ^i_{ra} M^a_j + Γ^a_{rj} M^i_a`
    Tilde,
    /// `d_r M = ∂_r M − Γ^i_{ar} M^a_j + Γ^a_{jr} M^i_a`
    Lower,
}

fn covariant_matrix<F: Field>(ctx: &F::Ctx, g: &Connection<F>, slot: Slot, r: usize, m: &Matrix<F>) -> Matrix<F> {
    let n = m.len();
    let gam = |i: usize, a: usize| match slot {
        Slot::Tilde => g.get(i, r, a),
        Slot::Lower => g.get(i, a, r),
    };
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = m[i][j].partial(ctx, r);
                    for a in 0..n {
                        let left = gam(i, a);
                        if !left.is_structurally_zero() {
                            v = v.sub(&left.mul(&m[a][j]));
                        }
                        let right = gam(a, j);
                        if !right.is_structurally_zero() {
                            v = v.add(&right.mul(&m[i][a]));
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

fn exterior<F: Field>(ctx: &F::Ctx, g: &Connection<F>, slot: Slot, w: &HomForm<F>) -> HomForm<F> {
    HomForm::from_fn(w.n, w.p + 1, |c| {
        let r = c[0];
        let h = &c[1..];
        let mut acc = covariant_matrix(ctx, g, slot, r, &w.at(ctx, h));
        for m in 0..h.len() {
            let mut hh = h.to_vec();
            let hm = hh[m];
            hh[m] = r;
            let t = covariant_matrix(ctx, g, slot, hm, &w.at(ctx, &hh));
            acc = mat_axpy(&acc, &t, &-1);
        }
        acc
    })
}

/// `d̃ω`, the covariant exterior derivative for the connection `Γ`.
pub fn d_tilde<F: Field>(ctx: &F::Ctx, g: &Connection<F>, w: &HomForm<F>) -> HomForm<F> {
    exterior(ctx, g, Slot::Tilde, w)
}

/// `dω`, the same operator built from the transposed connection.
pub fn d_lower<F: Field>(ctx: &F::Ctx, g: &Connection<F>, w: &HomForm<F>) -> HomForm<F> {
    exterior(ctx, g, Slot::Lower, w)
}

/// `(ω∧ψ)_{c} = Σ_shuffles sgn · ω_{c_S} ∘ ψ_{c_{S^c}}`, the `1/(p!q!)`-normalized alternation.
pub fn wedge<F: Field>(ctx: &F::Ctx, w: &HomForm<F>, v: &HomForm<F>) -> HomForm<F> {
    assert_eq!(w.n, v.n, "forms on different dimensions");
    let (p, q) = (w.p, v.p);
    let splits = split_positions(p + q, p);
    HomForm::from_fn(w.n, p + q, |c| {
        let mut acc = mat_zero::<F>(ctx, w.n);
        for (s, rest) in &splits {
            let prod = mat_mul(ctx, &w.comps[&pick(c, s)], &v.comps[&pick(c, rest)]);
            acc = mat_axpy(&acc, &prod, &shuffle_sign(s));
        }
        acc
    })
}

/// `Tr ω = ω^a_{…,a}`.
pub fn trace_form<F: Field>(ctx: &F::Ctx, w: &HomForm<F>) -> ScalarForm<F> {
    ScalarForm::from_fn(w.n, w.p, |c| {
        let m = &w.comps[c];
        (0..w.n).fold(F::zero(ctx), |acc, a| acc.add(&m[a][a]))
    })
}

/// De Rham differential `(dω)_{c₀…c_p} = Σ_k (−1)^k ∂_{c_k} ω_{c₀…ĉ_k…c_p}`.
pub fn de_rham_d<F: Field>(ctx: &F::Ctx, w: &ScalarForm<F>) -> ScalarForm<F> {
    ScalarForm::from_fn(w.n, w.p + 1, |c| {
        let mut acc = F::zero(ctx);
        for k in 0..c.len() {
            let rest: Vec<usize> = c.iter().enumerate().filter(|(t, _)| *t != k).map(|(_, v)| *v).collect();
            let term = w.comps[&rest].partial(ctx, c[k]);
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    })
}

/// `T ∧ … ∧ T` (`i` factors); `i = 0` gives the identity form.
pub fn wedge_power<F: Field>(ctx: &F::Ctx, w: &HomForm<F>, i: usize) -> HomForm<F> {
    let mut acc = HomForm::identity(ctx, w.n);
    for _ in 0..i {
        acc = wedge(ctx, &acc, w);
    }
    acc
}

/// Largest `|value|` of the given fields over the grid: `0` when every field is
/// structurally zero, `∞` when some value is not finite.
pub fn max_abs<'a, F: Field + 'a>(fields: impl IntoIterator<Item = &'a F>, grid: &[GridPoint]) -> f64 {
    let live: Vec<&F> = fields.into_iter().filter(|f| !f.is_structurally_zero()).collect();
    if live.is_empty() {
        return 0.0;
    }
    let per_point: Vec<f64> = grid
        .par_iter()
        .map(|p| {
            live.iter().fold(0.0f64, |m, f| {
                let v = f.eval(p).abs();
                if v.is_finite() {
                    m.max(v)
                } else {
                    f64::INFINITY
                }
            })
        })
        .collect();
    per_point.into_iter().fold(0.0, f64::max)
}
