//! Hand-computed values checked against the library.

use flatcheck::algebra::rational::{int, rat};
use flatcheck::algebra::{MultiIndex, Poly, RatFunc, Rational};
use flatcheck::arrows::{arrow_compose, arrow_invert, g3_compose, schwarzian_defect, Arrow, G3Jet};
use flatcheck::catalog;
use flatcheck::forms::identities::{identity_report, Backend, Geometry, ReportConfig};
use flatcheck::frames::exact_component;
use flatcheck::jetcore::{compose_truncated, invert_truncated, project_order, TruncatedMap};
use flatcheck::liepair::{filtration_of, order_of, relative_adjoint, Order};
use flatcheck::spencer::{prolong, spencer_d, PointJet};

fn u(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

fn map(components: Vec<Poly>, k: u32) -> TruncatedMap {
    TruncatedMap::new(components, k).unwrap()
}

#[test]
fn one_variable_composition() {
    let x = u(1, 0);
    let f = map(vec![&x + &(&x * &x)], 3);
    let g = map(vec![x.scale(&int(2))], 3);
    // f(2u) = 2u + 4u², g(f(u)) = 2u + 2u²
    assert_eq!(compose_truncated(&f, &g).unwrap(), map(vec![&x.scale(&int(2)) + &(&x * &x).scale(&int(4))], 3));
    assert_eq!(compose_truncated(&g, &f).unwrap(), map(vec![&x.scale(&int(2)) + &(&x * &x).scale(&int(2))], 3));
}

#[test]
fn series_inverse_of_u_plus_u_squared() {
    // u + u² = w  ⇒  u = w − w² + 2w³ − 5w⁴ (Catalan numbers)
    let x = u(1, 0);
    let f = map(vec![&x + &(&x * &x)], 4);
    let g = invert_truncated(&f).unwrap();
    let coeffs: Vec<Rational> = (1..=4).map(|d| g.coeff(0, &MultiIndex::new(vec![d]))).collect();
    assert_eq!(coeffs, vec![int(1), int(-1), int(2), int(-5)]);
    assert_eq!(project_order(&g, 2).unwrap(), map(vec![&x - &(&x * &x)], 2));
}

#[test]
fn two_variable_composition_truncates() {
    let (a, b) = (u(2, 0), u(2, 1));
    let f = map(vec![&a + &(&b * &b), b.clone()], 2);
    let g = map(vec![a.clone(), &b + &(&a * &a)], 2);
    let fg = compose_truncated(&f, &g).unwrap();
    // (v + u²)² has no term of order ≤ 2 besides v²
    assert_eq!(fg, map(vec![&a + &(&b * &b), &b + &(&a * &a)], 2));
}

#[test]
fn arrows_compose_along_endpoints() {
    let x = u(1, 0);
    let a = Arrow::new(vec![int(0)], vec![int(1)], map(vec![x.scale(&int(3))], 1)).unwrap();
    let b = Arrow::new(vec![int(1)], vec![int(5)], map(vec![x.scale(&rat(1, 3))], 1)).unwrap();
    let ba = arrow_compose(&b, &a).unwrap();
    assert_eq!(ba.source(), &[int(0)]);
    assert_eq!(ba.target(), &[int(5)]);
    assert!(ba.jet().is_identity());
    assert!(arrow_compose(&a, &a).is_err());
    let inv = arrow_invert(&a).unwrap();
    assert_eq!(inv.source(), &[int(1)]);
    assert_eq!(inv.jet().coeff(0, &MultiIndex::new(vec![1])), rat(1, 3));
}

#[test]
fn g3_product_and_schwarzian_of_exp() {
    let a = G3Jet::new(int(2), int(1), int(0)).unwrap();
    let b = G3Jet::new(rat(1, 2), rat(-1, 3), int(1)).unwrap();
    let ab = g3_compose(&a, &b);
    assert_eq!((ab.a1, ab.a2, ab.a3), (int(1), rat(-5, 12), rat(3, 2)));
    // e^z − 1: all derivatives 1, Schwarzian 1 − 3/2
    assert_eq!(schwarzian_defect(&G3Jet::new(int(1), int(1), int(1)).unwrap()), rat(-1, 2));
    // z/(1 − z): Möbius
    assert_eq!(schwarzian_defect(&G3Jet::new(int(1), int(2), int(6)).unwrap()), int(0));
}

fn geometry(name: &str) -> Geometry<RatFunc> {
    Geometry::new(catalog::chart(name).unwrap().exact_frame(5).unwrap(), 5)
}

#[test]
fn deformed_chart_connection_and_witness() {
    let g = geometry("deformed2");
    let x = RatFunc::var(2, 0);
    let one_plus = RatFunc::constant(2, int(1)).add(&x.mul(&x));
    let expected = x.scale(&int(2)).div(&one_plus).unwrap();
    assert!(g.gamma.get(1, 0, 1).sub(&expected).is_zero());
    assert!(g.gamma.get(1, 1, 0).is_zero());
    let w = exact_component(&g.r, &[0, 1], 1, 0, &[int(0), int(0)]).unwrap();
    assert_eq!(num::abs(w), int(2));
    assert!(g.rtilde.entries().all(|e| e.is_zero()));
}

#[test]
fn hyperbolic_plane_is_a_lie_group() {
    let g = geometry("hyperbolic2");
    // e = y·I ⇒ Γ^i_{1k} = δ^i_k / y, all others zero
    let y_inv = RatFunc::constant(2, int(1)).div(&RatFunc::var(2, 1)).unwrap();
    for i in 0..2 {
        for k in 0..2 {
            let want = if i == k { y_inv.clone() } else { RatFunc::zero(2) };
            assert!(g.gamma.get(i, 1, k).sub(&want).is_zero());
            assert!(g.gamma.get(i, 0, k).is_zero());
        }
    }
    assert!(g.r.entries().all(|e| e.is_zero()));
    assert!(g.torsion.entries().any(|e| !e.is_zero()));
}

#[test]
fn su2_frame_is_flat_numerically() {
    let r = identity_report(&catalog::chart("su2-euler").unwrap(), &ReportConfig::default()).unwrap();
    assert_eq!(r.backend, Backend::Numeric);
    assert!(r.residuals.rtilde < 1e-7, "{}", r.residuals.rtilde);
    assert!(r.max_r < 1e-6);
    assert!(r.locally_homogeneous);
}

#[test]
fn spencer_operator_counts_the_holonomy_defect() {
    // ξ = (x, 0) in J_1 with Dξ_0 = ∂_x x − ξ_x = 1 − 0 when the first-order part is zero
    let n = 1;
    let xi = flatcheck::spencer::JetField::from_fn(n, 1, flatcheck::domain::Domain::symmetric_unit(1), |_, a| {
        if a.order() == 0 { RatFunc::var(1, 0) } else { RatFunc::zero(1) }
    });
    let d = spencer_d(&xi).unwrap();
    assert!(d.directions[0].get(0, &MultiIndex::zeros(1)).sub(&RatFunc::constant(1, int(1))).is_zero());
    let holonomic = prolong(&[&u(1, 0) * &u(1, 0)], 2, flatcheck::domain::Domain::symmetric_unit(1));
    assert!(spencer_d(&holonomic).unwrap().is_zero());
}

#[test]
fn point_jet_representatives_use_taylor_coefficients() {
    // ξ_α = ∂^α v with v = x²: components (0, 0, 2) at the origin
    let v = [&u(1, 0) * &u(1, 0)];
    let j = PointJet::from_representative(vec![int(0)], 2, &v);
    assert_eq!(j.get(0, &MultiIndex::new(vec![2])), int(2));
    assert_eq!(j.representative(), v.to_vec());
}

#[test]
fn lie_pair_filtrations() {
    let (g, h) = catalog::lie_pair("sl2/borel").unwrap();
    let dims: Vec<usize> = filtration_of(&g, &h).iter().map(|s| s.dim()).collect();
    assert_eq!(dims, vec![2, 1, 0]);
    let (g, h) = catalog::lie_pair("so3/so2").unwrap();
    assert_eq!(order_of(&g, &h), Order::Finite(1));
    let (rho, complement) = relative_adjoint(&g, &h);
    assert_eq!(complement, vec![0, 1]);
    assert_eq!(rho.matrices()[0], vec![vec![int(0), int(-1)], vec![int(1), int(0)]]);
    let (g, h) = catalog::lie_pair("sl3/borel").unwrap();
    let dims: Vec<usize> = filtration_of(&g, &h).iter().map(|s| s.dim()).collect();
    assert_eq!(dims, vec![5, 1, 0]);
}

fn g3_map(a: (i64, i64, i64)) -> TruncatedMap {
    G3Jet::new(int(a.0), int(a.1), int(a.2)).unwrap().to_map()
}

#[test]
fn derivative_triples_compose_by_the_chain_rule() {
    // (a∘b)' = a₁b₁, (a∘b)'' = a₁b₂ + a₂b₁², (a∘b)''' = a₁b₃ + 3a₂b₁b₂ + a₃b₁³
    let outer_first = compose_truncated(&g3_map((2, 0, 1)), &g3_map((1, 1, 0))).unwrap();
    assert_eq!(G3Jet::from_map(&outer_first).unwrap(), G3Jet::new(int(2), int(2), int(1)).unwrap());
    let swapped = compose_truncated(&g3_map((1, 1, 0)), &g3_map((2, 0, 1))).unwrap();
    assert_eq!(G3Jet::from_map(&swapped).unwrap(), G3Jet::new(int(2), int(4), int(1)).unwrap());
}

#[test]
fn non_invertible_inner_maps_still_compose() {
    let (x, y) = (u(2, 0), u(2, 1));
    let outer = map(vec![&x + &(&y * &y), y.clone()], 2);
    let inner = map(vec![&x + &y, &y * &y], 2);
    assert_eq!(compose_truncated(&outer, &inner).unwrap(), map(vec![&x + &y, &y * &y], 2));
}

#[test]
fn schwarzian_examples() {
    // −1/z at z = 1 and z + z³ at 0
    assert_eq!(schwarzian_defect(&G3Jet::new(int(1), int(-2), int(6)).unwrap()), int(0));
    assert_eq!(schwarzian_defect(&G3Jet::new(int(1), int(0), int(6)).unwrap()), int(6));
}
