use num::{BigInt, One};
use std::cmp::Ordering;
use std::fmt;

/// Exponent vector over `n` variables, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(!entries.is_empty(), "multi-index needs at least one variable");
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn add_unit(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    pub fn sub_unit(&self, i: usize) -> Option<MultiIndex> {
        let mut v = self.0.clone();
        v[i] = v[i].checked_sub(1)?;
        Some(MultiIndex(v))
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `α! = Π αᵢ!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &a| {
            (1..=a).fold(acc, |acc, t| acc * BigInt::from(t))
        })
    }

    /// `C(α, β) = Π C(αᵢ, βᵢ)`, zero unless `β ≤ α`.
    pub fn binomial(&self, beta: &MultiIndex) -> BigInt {
        let mut out = BigInt::one();
        for (&a, &b) in self.0.iter().zip(&beta.0) {
            if b > a {
                return BigInt::from(0);
            }
            out *= binom(a, b);
        }
        out
    }

    /// All multi-indices `β ≤ α` (componentwise), in graded-lex order.
    pub fn lower_set(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=a).map(move |b| {
                        let mut p = prefix.clone();
                        p.push(b);
                        p
                    })
                })
                .collect();
        }
        let mut v: Vec<MultiIndex> = out.into_iter().map(MultiIndex).collect();
        v.sort();
        v
    }

    /// Every multi-index in `n` variables of order at most `k`, graded-lex ascending.
    pub fn all_up_to(n: usize, k: u32) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (0..=k).flat_map(|d| Self::of_order(n, d)).collect();
        out.sort();
        out
    }

    /// Every multi-index in `n` variables of order exactly `d`.
    pub fn of_order(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=d).rev() {
                prefix.push(a);
                rec(n, d - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut out = BigInt::one();
    for t in 0..k {
        out = out * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    out
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
