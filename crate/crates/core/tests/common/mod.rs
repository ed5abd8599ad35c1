//! Randomized inputs shared by integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use gstruct_core::exterior::{Bilinear, ComplexStructure, FrameSpace, SignedIndex, Vector};
use gstruct_core::framegeom::{HypersurfaceSlice, TangentFrame};
use gstruct_core::g2::G2Structure;
use gstruct_core::pipeline::{induce_structure, AmbientData};
use gstruct_core::scalar::{Rational, Scalar};
use gstruct_core::su3::Phase;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = Rational;

pub fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small(rng: &mut impl Rng) -> Q {
    q(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

pub fn nonzero(rng: &mut impl Rng) -> Q {
    loop {
        let x = small(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// `((1-t²)/(1+t²), 2t/(1+t²))` for a small rational `t`.
pub fn circle_point(rng: &mut impl Rng) -> Phase<Q> {
    let t = q(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    let d = Q::one() + t.clone() * t.clone();
    Phase::new((Q::one() - t.clone() * t.clone()) / d.clone(), q(2, 1) * t / d).unwrap()
}

pub fn phase(rng: &mut impl Rng) -> Phase<Q> {
    match rng.gen_range(0..4) {
        0 => Phase::zero(),
        1 => Phase::half_pi(),
        _ => circle_point(rng),
    }
}

pub fn matrix(frame: &Arc<FrameSpace>, rng: &mut impl Rng) -> Bilinear<Q> {
    let n = frame.dim();
    let entries: Vec<Q> = (0..n * n).map(|_| small(rng)).collect();
    Bilinear::from_fn(frame, |i, j| entries[i * n + j].clone())
}

pub fn symmetric(frame: &Arc<FrameSpace>, rng: &mut impl Rng) -> Bilinear<Q> {
    matrix(frame, rng).symmetric_part()
}

pub fn vector(frame: &Arc<FrameSpace>, rng: &mut impl Rng) -> Vector<Q> {
    Vector::from_coeffs(frame, (0..frame.dim()).map(|_| small(rng)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Parallel,
    X1,
    X2,
    X3,
    X4,
}

/// Ambient torsion of the given pure type; `normal` lets X3/X4 samples hit the
/// special cases `r̄(ι·, n) = 0` and `p(n) = 0`.
pub fn ambient(family: Family, normal: SignedIndex, rng: &mut impl Rng) -> AmbientData<Q> {
    let g2 = G2Structure::<Q>::standard();
    let f = g2.frame().clone();
    let rbar = match family {
        Family::Parallel => Bilinear::zero(&f),
        Family::X1 => Bilinear::metric(&f).scale(&(nonzero(rng) / q(4, 1))),
        Family::X2 => {
            let m = matrix(&f, rng);
            g2.g2_project(&m.skew_part()).g2part
        }
        Family::X3 => {
            let mut s = symmetric(&f, rng);
            if rng.gen_bool(0.3) {
                for k in 0..7 {
                    if k != normal.index {
                        s.set(k, normal.index, Q::zero());
                        s.set(normal.index, k, Q::zero());
                    }
                }
            }
            g2.g2_project(&s).s0
        }
        Family::X4 => {
            let mut v = vector(&f, rng);
            if rng.gen_bool(0.4) {
                let mut c = v.coeffs().to_vec();
                c[normal.index] = Q::zero();
                v = Vector::from_coeffs(&f, c);
            }
            if v.is_zero() {
                v = Vector::basis(&f, (normal.index + 1) % 7);
            }
            g2.perp_bilinear(&v)
        }
    };
    AmbientData::new(g2, rbar)
}

pub fn random_normal(rng: &mut impl Rng) -> SignedIndex {
    let a = rng.gen_range(0..7);
    if rng.gen_bool(0.5) {
        SignedIndex::plus(a)
    } else {
        SignedIndex::minus(a)
    }
}

/// `α<·,·> + β·(I-invariant traceless) + γ·(I-anti-invariant)`, each term present with
/// probability 1/2, so the special shapes of the tables occur often.
pub fn structured_shape(local: &Arc<FrameSpace>, cx: &ComplexStructure<Q>, rng: &mut impl Rng) -> Bilinear<Q> {
    let g = Bilinear::metric(local);
    let x = symmetric(local, rng);
    let ix = x.i_all(cx).unwrap();
    let inv = x.add(&ix).unwrap();
    let inv0 = inv.sub(&g.scale(&(inv.trace() / q(6, 1)))).unwrap();
    let anti = x.sub(&ix).unwrap();
    let mut b = Bilinear::zero(local);
    for part in [g, inv0, anti] {
        if rng.gen_bool(0.5) {
            b = b.add(&part.scale(&small(rng))).unwrap();
        }
    }
    b
}

pub struct Sample {
    pub ambient: AmbientData<Q>,
    pub slice: HypersurfaceSlice<Q>,
    pub phase: Phase<Q>,
    pub dtheta: Vector<Q>,
}

/// `dθ` drawn so that the `dθ`-dependent rows are exercised in both directions.
pub fn sample(family: Family, rng: &mut impl Rng, allow_dtheta: bool) -> Sample {
    let normal = random_normal(rng);
    let ambient = ambient(family, normal, rng);
    let tangent = TangentFrame::new(ambient.g2.frame(), normal).unwrap();
    let su3 = induce_structure::<Q>(&tangent, Phase::zero()).unwrap();
    let b = structured_shape(tangent.local(), su3.complex_structure(), rng);
    let v = tangent.restrict_first(&ambient.rbar);
    let pt = tangent.pullback_vector(ambient.p_dstar());
    let local = tangent.local().clone();
    let dtheta = if !allow_dtheta || rng.gen_bool(0.5) {
        Vector::zero(&local)
    } else {
        match rng.gen_range(0..3) {
            0 => vector(&local, rng),
            1 => v,
            _ => su3.apply_i(&pt).scale(&q(-1, 12)),
        }
    };
    let phase = if dtheta.is_zero() { phase(rng) } else { circle_point(rng) };
    Sample {
        ambient,
        slice: HypersurfaceSlice::from_shape(tangent, b).unwrap(),
        phase,
        dtheta,
    }
}
