//! Seeded randomized check suites shared by the command-line tool and the tests.
//!
//! Every suite draws its cases from a `ChaCha8Rng` seeded by the caller, so a
//! fixed seed reproduces the same cases (and the same report) on every run.

use crate::algebra::rational::int;
use crate::algebra::{MultiIndex, Poly, RatFunc, Rational};
use crate::arrows::{g2_compose, g3_compose, mobius_split, schwarzian_defect, G3Jet};
use crate::domain::Domain;
use crate::forms::{d_tilde, de_rham_d, trace_form, HomForm};
use crate::frames::Connection;
use crate::jetcore::compose_truncated;
use crate::liepair::{filtration_of, order_of, LieAlgebra, Order, Subalgebra};
use crate::spencer::{
    kernel_bracket, lie_bracket, prolong, spencer_bracket, spencer_bracket_lifted, spencer_d, JetField, PointJet,
};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational with numerator in `[-range, range]` and denominator in `[1, den]`.
pub fn random_rational(rng: &mut impl Rng, range: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-range..=range).into(), rng.gen_range(1..=den).into())
}

pub fn random_nonzero(rng: &mut impl Rng, range: i64, den: i64) -> Rational {
    loop {
        let q = random_rational(rng, range, den);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Polynomial in `n` variables of total degree `≤ deg` with about `terms` random terms.
pub fn random_poly(rng: &mut impl Rng, n: usize, deg: u32, terms: usize) -> Poly {
    let monomials = MultiIndex::all_up_to(n, deg);
    let mut p = Poly::zero(n);
    for _ in 0..terms {
        let a = monomials[rng.gen_range(0..monomials.len())].clone();
        p.add_term(a, random_rational(rng, 3, 2));
    }
    p
}

pub fn random_vector_field(rng: &mut impl Rng, n: usize, deg: u32) -> Vec<Poly> {
    (0..n).map(|_| random_poly(rng, n, deg, 3)).collect()
}

pub fn random_jet_field(rng: &mut impl Rng, n: usize, k: u32, deg: u32) -> JetField {
    JetField::from_fn(n, k, Domain::symmetric_unit(n), |_, _| RatFunc::from_poly(random_poly(rng, n, deg, 2)))
}

pub fn random_kernel_jet(rng: &mut impl Rng, n: usize, k: u32) -> PointJet {
    PointJet::from_fn(vec![Rational::zero(); n], k, |_, a| {
        if a.order() == 0 {
            Rational::zero()
        } else {
            random_rational(rng, 3, 2)
        }
    })
}

/// Pass/fail tally of one randomized property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl Tally {
    fn run(name: &'static str, cases: usize, mut case: impl FnMut(usize) -> bool) -> Tally {
        let failures = (0..cases).filter(|&c| !case(c)).count();
        Tally { name, cases, failures }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn all_passed(tallies: &[Tally]) -> bool {
    tallies.iter().all(Tally::passed)
}

// ---------------------------------------------------------------------------
// jets of the line

fn random_g3(rng: &mut impl Rng) -> G3Jet {
    G3Jet::new(random_nonzero(rng, 5, 4), random_rational(rng, 5, 4), random_rational(rng, 5, 4)).unwrap()
}

/// 3-jet at 0 of `(az + b)/(cz + d) − b/d` with `ad − bc = 1`, `d ≠ 0`.
pub fn mobius_jet(a: &Rational, b: &Rational, c: &Rational) -> G3Jet {
    // d = (1 + bc)/a; f' = 1/(cz+d)², f'' = −2c/(cz+d)³, f''' = 6c²/(cz+d)⁴ at z = 0
    let d = (Rational::one() + b * c) / a;
    let inv = Rational::one() / &d;
    G3Jet::new(&inv * &inv, int(-2) * c * &inv * &inv * &inv, int(6) * c * c * &inv * &inv * &inv * &inv).unwrap()
}

fn random_mobius(rng: &mut impl Rng) -> G3Jet {
    loop {
        let a = random_nonzero(rng, 4, 3);
        let b = random_rational(rng, 4, 3);
        let c = random_rational(rng, 4, 3);
        if !(Rational::one() + &b * &c).is_zero() {
            return mobius_jet(&a, &b, &c);
        }
    }
}

/// `f‴/f′ − (3/2)(f″/f′)²`.
pub fn classical_schwarzian(a: &G3Jet) -> Rational {
    let r = &a.a2 / &a.a1;
    &a.a3 / &a.a1 - Rational::new(3.into(), 2.into()) * &r * &r
}

/// `g3_compose` against general truncated composition, and the splitting homomorphism.
pub fn groupoid_suite(seed: u64, pairs: usize, jets: usize) -> Vec<Tally> {
    let mut r = rng(seed);
    let oracle = Tally::run("g3_matches_truncated_composition", pairs, |_| {
        let (a, b) = (random_g3(&mut r), random_g3(&mut r));
        let general = compose_truncated(&a.to_map(), &b.to_map()).expect("same dimension and order");
        G3Jet::from_map(&general).ok() == Some(g3_compose(&a, &b))
    });
    let split = Tally::run("splitting_is_homomorphism", pairs, |_| {
        let a = (random_nonzero(&mut r, 5, 4), random_rational(&mut r, 5, 4));
        let b = (random_nonzero(&mut r, 5, 4), random_rational(&mut r, 5, 4));
        let ab = g2_compose((&a.0, &a.1), (&b.0, &b.1));
        let lhs = mobius_split(&ab.0, &ab.1).unwrap();
        let rhs = g3_compose(&mobius_split(&a.0, &a.1).unwrap(), &mobius_split(&b.0, &b.1).unwrap());
        lhs == rhs
    });
    let mobius = Tally::run("schwarzian_defect_vanishes_on_mobius", jets, |_| schwarzian_defect(&random_mobius(&mut r)).is_zero());
    let cubic = Tally::run("schwarzian_defect_is_classical", jets, |_| {
        let mut a = random_g3(&mut r);
        if a.a3 == Rational::new(3.into(), 2.into()) * &a.a2 * &a.a2 / &a.a1 {
            // keep the sample off the Möbius locus
            a.a3 += Rational::one();
        }
        schwarzian_defect(&a) == classical_schwarzian(&a)
    });
    vec![oracle, split, mobius, cubic]
}

// ---------------------------------------------------------------------------
// Spencer operator and brackets

pub fn spencer_suite(seed: u64, cases: usize) -> Vec<Tally> {
    let mut r = rng(seed);
    let d_prolong = Tally::run("spencer_d_annihilates_prolongations", cases, |c| {
        let n = 1 + c % 2;
        let k = 1 + (c % 3) as u32;
        let v = random_vector_field(&mut r, n, 3);
        spencer_d(&prolong(&v, k, Domain::symmetric_unit(n))).map(|d| d.is_zero()).unwrap_or(false)
    });
    let lifts = Tally::run("spencer_bracket_lift_independent", cases, |c| {
        let n = 1 + c % 2;
        let k = 1 + (c / 2 % 2) as u32;
        let xi = random_jet_field(&mut r, n, k, 2);
        let eta = random_jet_field(&mut r, n, k, 2);
        let zero = spencer_bracket(&xi, &eta).unwrap();
        let lift = |f: &JetField, r: &mut ChaCha8Rng| f.lift_with(|_, _| RatFunc::from_poly(random_poly(r, n, 2, 2)));
        let (xl, el) = (lift(&xi, &mut r), lift(&eta, &mut r));
        let other = spencer_bracket_lifted(&xl, &el).unwrap();
        other.sub(&zero).is_zero()
    });
    let commute = Tally::run("prolongation_commutes_with_bracket", cases, |c| {
        let n = 1 + c % 2;
        let k = (c % 3) as u32;
        let v = random_vector_field(&mut r, n, 3);
        let w = random_vector_field(&mut r, n, 3);
        let dom = Domain::symmetric_unit(n);
        let lhs = spencer_bracket(&prolong(&v, k, dom.clone()), &prolong(&w, k, dom.clone())).unwrap();
        lhs.sub(&prolong(&lie_bracket(&v, &w), k, dom)).is_zero()
    });
    let jacobi = Tally::run("kernel_bracket_jacobi", cases, |c| {
        let n = 1 + c % 2;
        let k = 1 + (c % 3) as u32;
        let [a, b, e] = [0, 1, 2].map(|_| random_kernel_jet(&mut r, n, k));
        let br = |x: &PointJet, y: &PointJet| kernel_bracket(x, y).unwrap();
        let sum = br(&a, &br(&b, &e)).add(&br(&b, &br(&e, &a))).add(&br(&e, &br(&a, &b)));
        let ok = sum.coefficients().all(|(_, v)| v.is_zero());
        ok
    });
    vec![d_prolong, lifts, commute, jacobi]
}

// ---------------------------------------------------------------------------
// exterior calculus

fn random_connection(rng: &mut impl Rng, n: usize) -> Connection<RatFunc> {
    Connection::from_fn(n, |_, _, _| RatFunc::from_poly(random_poly(rng, n, 2, 2)))
}

pub fn random_hom_form(rng: &mut impl Rng, n: usize, p: usize) -> HomForm<RatFunc> {
    HomForm::alternate(&n, n, p, |_| {
        (0..n).map(|_| (0..n).map(|_| RatFunc::from_poly(random_poly(rng, n, 2, 2))).collect()).collect()
    })
}

/// `Tr ∘ d̃ = d ∘ Tr` on random polynomial forms of each degree `p ≤ max_degree`.
pub fn trace_suite(seed: u64, cases: usize, max_degree: usize) -> Vec<Tally> {
    let mut r = rng(seed);
    let names = ["trace_intertwines_degree_0", "trace_intertwines_degree_1", "trace_intertwines_degree_2", "trace_intertwines_degree_3"];
    (0..=max_degree.min(3))
        .map(|p| {
            Tally::run(names[p], cases, |c| {
                let n = (p + 1).max(2) + c % 2;
                let g = random_connection(&mut r, n);
                let w = random_hom_form(&mut r, n, p);
                let lhs = trace_form(&n, &d_tilde(&n, &g, &w));
                let rhs = de_rham_d(&n, &trace_form(&n, &w));
                lhs.sub(&rhs).entries().all(RatFunc::is_zero)
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Lie pairs

/// `ord(g, h_i) = k − i` along the filtration of an effective pair of order `k`.
pub fn filtration_descends(g: &LieAlgebra, h: &Subalgebra) -> Option<bool> {
    let Order::Finite(k) = order_of(g, h) else {
        return None;
    };
    let chain = filtration_of(g, h);
    Some((0..=k).all(|i| {
        let stage = chain.get(i).cloned().unwrap_or_else(|| Subalgebra::zero(g.dim()));
        order_of(g, &stage) == Order::Finite(k - i)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_samples() {
        for t in groupoid_suite(7, 20, 5).iter().chain(&spencer_suite(7, 6)).chain(&trace_suite(7, 3, 2)) {
            assert!(t.passed(), "{t:?}");
        }
    }

    #[test]
    fn mobius_jet_has_unit_determinant_form() {
        let j = mobius_jet(&int(1), &int(0), &int(0));
        assert_eq!(j, G3Jet::identity());
        // f(z) = z/(z+1): f' = 1, f'' = -2, f''' = 6
        let j = mobius_jet(&int(1), &int(0), &int(1));
        assert_eq!((j.a1, j.a2, j.a3), (int(1), int(-2), int(6)));
    }

    #[test]
    fn seeds_reproduce() {
        assert_eq!(spencer_suite(3, 4), spencer_suite(3, 4));
        let mut a = rng(9);
        let mut b = rng(9);
        assert_eq!(random_poly(&mut a, 2, 3, 4), random_poly(&mut b, 2, 3, 4));
    }
}
