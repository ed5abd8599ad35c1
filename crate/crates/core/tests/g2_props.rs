mod common;

use common::{matrix, q, rng, vector, Q};
use gstruct_core::exterior::{Bilinear, FrameSpace};
use gstruct_core::g2::G2Structure;
use gstruct_core::linalg::rank;
use gstruct_core::scalar::Scalar;

fn skew_basis() -> Vec<Bilinear<Q>> {
    let f = FrameSpace::standard(7);
    let mut out = Vec::new();
    for j in 0..7 {
        for k in j + 1..7 {
            let mut b = Bilinear::zero(&f);
            b.set(j, k, Q::one());
            b.set(k, j, -Q::one());
            out.push(b);
        }
    }
    out
}

#[test]
fn g2_and_complement_dimensions() {
    let g2 = G2Structure::<Q>::standard();
    let basis = skew_basis();
    // Rows: the seven conditions, columns: the 21 skew basis elements.
    let conditions: Vec<Vec<Q>> = (0..7).map(|i| basis.iter().map(|b| g2.g2_condition(b, i)).collect()).collect();
    assert_eq!(basis.len() - rank(&conditions), 14);
    let perp: Vec<Vec<Q>> = (0..7)
        .map(|i| g2.perp_bilinear(&gstruct_core::exterior::Vector::basis(g2.frame(), i)).entries().to_vec())
        .collect();
    assert_eq!(rank(&perp), 7);
}

#[test]
fn torsion_roundtrips() {
    let g2 = G2Structure::<Q>::standard();
    let f = g2.frame().clone();
    let mut r = rng(21);
    for _ in 0..100 {
        let a = matrix(&f, &mut r);
        assert_eq!(g2.rbar_of(&g2.alpha_from_a(&a)).unwrap(), a);
        let back = g2.rbar_from_derivatives(&g2.dphi_from_a(&a), &g2.dstarphi_from_a(&a)).unwrap();
        assert_eq!(back, a);
    }
}

#[test]
fn projection_is_orthogonal_and_idempotent() {
    let g2 = G2Structure::<Q>::standard();
    let f = g2.frame().clone();
    let g = Bilinear::<Q>::metric(&f);
    let mut r = rng(22);
    for _ in 0..30 {
        let a = matrix(&f, &mut r);
        let c = g2.g2_project(&a);
        assert_eq!(c.reconstruct(&g2), a);
        let parts = [g.scale(&c.lambda), c.s0.clone(), c.g2part.clone(), g2.perp_bilinear(&c.pvec)];
        for (i, x) in parts.iter().enumerate() {
            for y in &parts[i + 1..] {
                assert!(x.inner(y).unwrap().is_zero());
            }
        }
        let again = g2.g2_project(&c.g2part);
        assert_eq!(again.g2part, c.g2part);
        assert!(again.pvec.is_zero() && again.s0.is_zero() && again.lambda.is_zero());
        for i in 0..7 {
            assert!(g2.g2_condition(&c.g2part, i).is_zero());
        }
    }
}

#[test]
fn minimal_connection_annihilates_phi() {
    let g2 = G2Structure::<Q>::standard();
    let f = g2.frame().clone();
    let mut r = rng(23);
    for _ in 0..50 {
        let a = matrix(&f, &mut r);
        assert!(g2.minimal_connection_residual(&a).iter().all(|x| x.is_zero()));
    }
}

#[test]
fn p_dstar_of_perp_part() {
    let g2 = G2Structure::<Q>::standard();
    let f = g2.frame().clone();
    let mut r = rng(24);
    for _ in 0..20 {
        let v = vector(&f, &mut r);
        assert_eq!(g2.g2_project(&g2.perp_bilinear(&v)).p_dstar, v.scale(&q(-12, 1)));
    }
}
