use crate::algebra::rational::to_f64;
use crate::algebra::Rational;
use num::Zero;

/// Axis-aligned box `Π [loᵢ, hiᵢ]` with rational bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    bounds: Vec<(Rational, Rational)>,
}

/// A grid point with both its exact coordinates and their `f64` images.
#[derive(Clone, Debug)]
pub struct GridPoint {
    pub index: Vec<usize>,
    pub exact: Vec<Rational>,
    pub float: Vec<f64>,
}

impl Domain {
    pub fn new(bounds: Vec<(Rational, Rational)>) -> Option<Self> {
        if bounds.is_empty() || bounds.iter().any(|(lo, hi)| lo > hi) {
            return None;
        }
        Some(Domain { bounds })
    }

    /// `[-1, 1]ⁿ`
    pub fn symmetric_unit(n: usize) -> Self {
        let one = Rational::from_integer(1.into());
        Domain { bounds: vec![(-one.clone(), one); n] }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(Rational, Rational)] {
        &self.bounds
    }

    pub fn center(&self) -> Vec<Rational> {
        let two = Rational::from_integer(2.into());
        self.bounds.iter().map(|(lo, hi)| (lo + hi) / &two).collect()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dim() && self.bounds.iter().zip(p).all(|((lo, hi), x)| lo <= x && x <= hi)
    }

    /// Tensor grid with `per_axis` equally spaced points per axis, endpoints
    /// included, enumerated with the last axis fastest.
    pub fn grid(&self, per_axis: usize) -> Vec<GridPoint> {
        let per_axis = per_axis.max(2);
        let axes: Vec<Vec<Rational>> = self
            .bounds
            .iter()
            .map(|(lo, hi)| {
                let step = (hi - lo) / Rational::from_integer((per_axis as i64 - 1).into());
                (0..per_axis)
                    .map(|t| lo + &step * Rational::from_integer((t as i64).into()))
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.dim()];
        loop {
            let exact: Vec<Rational> = idx.iter().enumerate().map(|(a, &t)| axes[a][t].clone()).collect();
            let float = exact.iter().map(to_f64).collect();
            out.push(GridPoint { index: idx.clone(), exact, float });
            let mut a = self.dim();
            loop {
                if a == 0 {
                    return out;
                }
                a -= 1;
                idx[a] += 1;
                if idx[a] < per_axis {
                    break;
                }
                idx[a] = 0;
            }
        }
    }

    pub fn origin_inside(&self) -> bool {
        self.contains(&vec![Rational::zero(); self.dim()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn grid_enumeration() {
        let d = Domain::new(vec![(int(0), int(1)), (int(-1), int(1))]).unwrap();
        let g = d.grid(3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[1].exact, vec![int(0), int(0)]);
        assert_eq!(g[8].exact, vec![int(1), int(1)]);
        assert_eq!(g[3].exact, vec![rat(1, 2), int(-1)]);
        assert!(Domain::new(vec![(int(1), int(0))]).is_none());
    }
}
