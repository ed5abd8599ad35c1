//! Type tables: each row states that the induced class lies within a bound
//! exactly when a pointwise geometric condition holds.

use std::collections::BTreeSet;

use super::{AmbientData, InducedData};
use crate::exterior::{Bilinear, Vector};
use crate::framegeom::HypersurfaceSlice;
use crate::g2::G2Type;
use crate::scalar::Scalar;
use crate::su3::{Phase, Su3Type};

use Su3Type::{W1Minus as W1M, W1Plus as W1P, W2Minus as W2M, W2Plus as W2P, W3, W4, W5};

/// Atomic conditions appearing in the tables. `B` is the shape tensor, `r̄` restricted
/// to the hypersurface is `ι*r̄`, `v = r̄(ι·, n)`, `p = p d*φ`, `(c, s) = (cos θ, sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cond {
    /// `dθ = 0`.
    ThetaConstant,
    IbEqB,
    IbEqMinusB,
    Minimal,
    TotallyUmbilic,
    TotallyGeodesic,
    /// `(1+I)B = 2h<·,·>`.
    HermUmbilic,
    SinHermUmbilic,
    CosHermUmbilic,
    /// `r̄ = 0`.
    AmbientParallel,
    /// `-4h s = k c` (X1 with `dφ = k∗φ`).
    X1NoW1Minus,
    /// `4h c = k s`.
    X1NoW1Plus,
    /// `v = 0`.
    RbarTnZero,
    /// `dθ = 2v`.
    DthetaEqTwoV,
    /// `dθ = v`.
    DthetaEqV,
    /// `(I_(1) - I_(2)) ι*r̄ + (1+I)B = 2h<·,·>`.
    X2Herm,
    X2SinHerm,
    X2CosHerm,
    /// `h s = 0`.
    HSinZero,
    /// `h c = 0`.
    HCosZero,
    /// `(I_(1) + I_(2)) ι*r̄ = (1-I)B`.
    X3Mixed,
    /// `3c(1+I)ι*r̄ + 3s(1+I)B = (6hs - c r̄(n,n))<·,·>`.
    X3NoW2Minus,
    /// `-3s(1+I)ι*r̄ + 3c(1+I)B = (6hc + s r̄(n,n))<·,·>`.
    X3NoW2Plus,
    /// `c r̄(n,n) = 6hs`.
    X3NoW1Minus,
    /// `s r̄(n,n) = -6hc`.
    X3NoW1Plus,
    /// `3(1+I)ι*r̄ = -r̄(n,n)<·,·>`.
    X3HermR,
    RnnZero,
    /// `ι*p = 12 I dθ`.
    X4PDtheta,
    /// `ι*p = 0`.
    PNormal,
    /// `s (p(n) - 12h) = 0`.
    X4SinP,
    /// `c (p(n) - 12h) = 0`.
    X4CosP,
    /// `p(n) = 12h`.
    PnEq12h,
}

/// Which ambient structures a table applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientReq {
    /// Class within X1 (includes parallel).
    X1,
    Parallel,
    X2,
    X3,
    X4,
    /// X4 with `p(n) = 0`.
    X4Tangent,
    X1X3,
    X2X4,
    X2X4Tangent,
}

/// Phase requirement of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaReq {
    Any,
    /// `θ = 0` or `θ = π/2`, constant.
    ZeroOrHalfPi,
}

/// One table row: `class ⊆ bound ⟺ when`.
#[derive(Debug, Clone, Copy)]
pub struct TableRule {
    pub id: &'static str,
    pub table: &'static str,
    pub ambient: AmbientReq,
    pub theta: ThetaReq,
    /// Bound at `θ = 0` (or for any θ).
    pub bound: &'static [Su3Type],
    pub when: &'static [Cond],
    /// Condition used at `θ = π/2` when the row gives a separate one.
    pub when_half_pi: Option<&'static [Cond]>,
    /// At `θ = π/2` the bound swaps W1± and W2±.
    pub swap_half_pi: bool,
    /// Excluded from randomized validation.
    pub ambiguous: bool,
    pub reading: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Agree,
    Conflict,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Agree => "AGREE",
            Verdict::Conflict => "CONFLICT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub rule: &'static str,
    pub predicate: bool,
    pub within_bound: bool,
    pub verdict: Verdict,
}

const T_X1: &str = "ambient X1";
const T_X1C: &str = "ambient X1, theta = 0 (pi/2) constant";
const T_PC: &str = "ambient P, theta = 0 (pi/2) constant";
const T_X2: &str = "ambient X2";
const T_X2C: &str = "ambient X2, theta = 0 (pi/2) constant";
const T_X3: &str = "ambient X3";
const T_X3C: &str = "ambient X3, theta = 0 (pi/2) constant";
const T_X4: &str = "ambient X4";
const T_X4C: &str = "ambient X4, theta = 0 (pi/2) constant";
const T_X4T: &str = "ambient X4, p tangent";
const T_MIX: &str = "composite ambient types";

const fn rule(
    id: &'static str,
    table: &'static str,
    ambient: AmbientReq,
    bound: &'static [Su3Type],
    when: &'static [Cond],
) -> TableRule {
    TableRule {
        id,
        table,
        ambient,
        theta: ThetaReq::Any,
        bound,
        when,
        when_half_pi: None,
        swap_half_pi: false,
        ambiguous: false,
        reading: "",
    }
}

/// Row of a `θ = 0 (π/2)` table whose bound is written with `±(∓)`.
const fn swapped(
    id: &'static str,
    table: &'static str,
    ambient: AmbientReq,
    bound: &'static [Su3Type],
    when: &'static [Cond],
) -> TableRule {
    TableRule {
        theta: ThetaReq::ZeroOrHalfPi,
        swap_half_pi: true,
        ..rule(id, table, ambient, bound, when)
    }
}

/// Row of a `θ = 0 (π/2)` table with a fixed bound and a parenthesized condition for `π/2`.
const fn idem(
    id: &'static str,
    table: &'static str,
    ambient: AmbientReq,
    bound: &'static [Su3Type],
    when: &'static [Cond],
    half_pi: &'static [Cond],
    ambiguous: bool,
    reading: &'static str,
) -> TableRule {
    TableRule {
        theta: ThetaReq::ZeroOrHalfPi,
        when_half_pi: Some(half_pi),
        ambiguous,
        reading,
        ..rule(id, table, ambient, bound, when)
    }
}

use AmbientReq as A;
use Cond as C;

pub static RULES: &[TableRule] = &[
    rule("X1.1", T_X1, A::X1, &[W1P, W1M, W2P, W2M, W3], &[C::ThetaConstant]),
    rule("X1.2", T_X1, A::X1, &[W1P, W1M, W2P, W2M, W5], &[C::IbEqB]),
    rule("X1.3", T_X1, A::X1, &[W1P, W1M, W2P, W3, W5], &[C::SinHermUmbilic]),
    rule("X1.4", T_X1, A::X1, &[W1P, W1M, W2M, W3, W5], &[C::CosHermUmbilic]),
    rule("X1.5", T_X1, A::X1, &[W1P, W2P, W2M, W3, W5], &[C::X1NoW1Minus]),
    rule("X1.6", T_X1, A::X1, &[W1M, W2P, W2M, W3, W5], &[C::X1NoW1Plus]),
    rule("X1.7", T_X1, A::X1, &[W1P, W1M, W3, W5], &[C::HermUmbilic]),
    rule("X1.8", T_X1, A::X1, &[W2P, W2M, W3, W5], &[C::Minimal, C::AmbientParallel]),
    rule("X1.9", T_X1, A::X1, &[W1P, W1M, W5], &[C::TotallyUmbilic]),
    rule("X1.10", T_X1, A::X1, &[W2P, W2M, W5], &[C::IbEqB, C::Minimal, C::AmbientParallel]),
    rule("X1.11", T_X1, A::X1, &[W3, W5], &[C::IbEqMinusB, C::AmbientParallel]),
    rule("X1.12", T_X1, A::X1, &[W5], &[C::TotallyGeodesic, C::AmbientParallel]),
    rule("X1.13", T_X1, A::X1, &[], &[C::TotallyGeodesic, C::ThetaConstant, C::AmbientParallel]),
    swapped("X1c.1", T_X1C, A::X1, &[W1P, W1M, W2P], &[C::IbEqB]),
    swapped("X1c.2", T_X1C, A::X1, &[W1P, W1M, W3], &[C::HermUmbilic]),
    swapped("X1c.3", T_X1C, A::X1, &[W1P, W2P, W3], &[C::AmbientParallel]),
    swapped("X1c.4", T_X1C, A::X1, &[W1M, W2P, W3], &[C::Minimal]),
    swapped("X1c.5", T_X1C, A::X1, &[W1P, W1M], &[C::TotallyUmbilic]),
    swapped("X1c.6", T_X1C, A::X1, &[W1P, W2P], &[C::IbEqB, C::AmbientParallel]),
    swapped("X1c.7", T_X1C, A::X1, &[W1M, W2P], &[C::IbEqB, C::Minimal]),
    swapped("X1c.8", T_X1C, A::X1, &[W1P, W3], &[C::HermUmbilic, C::AmbientParallel]),
    swapped("X1c.9", T_X1C, A::X1, &[W1M, W3], &[C::IbEqMinusB]),
    swapped("X1c.10", T_X1C, A::X1, &[W2P, W3], &[C::Minimal, C::AmbientParallel]),
    swapped("X1c.11", T_X1C, A::X1, &[W3], &[C::IbEqMinusB, C::AmbientParallel]),
    swapped("X1c.12", T_X1C, A::X1, &[W2P], &[C::IbEqB, C::Minimal, C::AmbientParallel]),
    swapped("X1c.13", T_X1C, A::X1, &[W1M], &[C::TotallyGeodesic]),
    swapped("X1c.14", T_X1C, A::X1, &[W1P], &[C::TotallyUmbilic, C::AmbientParallel]),
    swapped("X1c.15", T_X1C, A::X1, &[], &[C::TotallyGeodesic, C::AmbientParallel]),
    swapped("Pc.1", T_PC, A::Parallel, &[W1P, W2P], &[C::IbEqB]),
    swapped("Pc.2", T_PC, A::Parallel, &[W1P, W3], &[C::HermUmbilic]),
    swapped("Pc.3", T_PC, A::Parallel, &[W2P, W3], &[C::Minimal]),
    swapped("Pc.4", T_PC, A::Parallel, &[W3], &[C::IbEqMinusB]),
    swapped("Pc.5", T_PC, A::Parallel, &[W2P], &[C::IbEqB, C::Minimal]),
    swapped("Pc.6", T_PC, A::Parallel, &[W1P], &[C::TotallyUmbilic]),
    swapped("Pc.7", T_PC, A::Parallel, &[], &[C::TotallyGeodesic]),
    TableRule {
        reading: "printed as d theta = 2 r(i.,n); with d theta = 0 both readings reduce to r(i.,n) = 0",
        ..rule("X2.1", T_X2, A::X2, &[W1P, W1M, W2P, W2M, W3, W4], &[C::DthetaEqTwoV])
    },
    rule("X2.2", T_X2, A::X2, &[W1P, W1M, W2P, W2M, W3, W5], &[C::RbarTnZero]),
    rule("X2.3", T_X2, A::X2, &[W1P, W1M, W2P, W2M, W4, W5], &[C::IbEqB]),
    rule("X2.4", T_X2, A::X2, &[W1P, W1M, W2P, W3, W4, W5], &[C::X2SinHerm]),
    rule("X2.5", T_X2, A::X2, &[W1P, W1M, W2M, W3, W4, W5], &[C::X2CosHerm]),
    rule("X2.6", T_X2, A::X2, &[W1P, W2P, W2M, W3, W4, W5], &[C::HSinZero]),
    rule("X2.7", T_X2, A::X2, &[W1M, W2P, W2M, W3, W4, W5], &[C::HCosZero]),
    rule("X2.8", T_X2, A::X2, &[W1P, W1M, W2P, W2M, W3], &[C::RbarTnZero, C::ThetaConstant]),
    rule("X2.9", T_X2, A::X2, &[W1P, W1M, W3, W4, W5], &[C::X2Herm]),
    rule("X2.10", T_X2, A::X2, &[W2P, W2M, W3, W4, W5], &[C::Minimal]),
    swapped("X2c.1", T_X2C, A::X2, &[W1P, W2P, W3], &[C::RbarTnZero]),
    swapped("X2c.2", T_X2C, A::X2, &[W1P, W2P, W4, W5], &[C::IbEqB]),
    swapped("X2c.3", T_X2C, A::X2, &[W1P, W3, W4, W5], &[C::X2Herm]),
    TableRule {
        reading: "printed as 'h is a minimal variety'; read as M minimal",
        ..swapped("X2c.4", T_X2C, A::X2, &[W2P, W3, W4, W5], &[C::Minimal])
    },
    rule("X3.1", T_X3, A::X3, &[W1P, W1M, W2P, W2M, W3], &[C::DthetaEqV]),
    TableRule {
        reading: "r(phi) on the left read as its restriction to M",
        ..rule("X3.2", T_X3, A::X3, &[W1P, W1M, W2P, W2M, W5], &[C::X3Mixed])
    },
    rule("X3.3", T_X3, A::X3, &[W1P, W1M, W2P, W3, W5], &[C::X3NoW2Minus]),
    rule("X3.4", T_X3, A::X3, &[W1P, W1M, W2M, W3, W5], &[C::X3NoW2Plus]),
    rule("X3.5", T_X3, A::X3, &[W1P, W2P, W2M, W3, W5], &[C::X3NoW1Minus]),
    rule("X3.6", T_X3, A::X3, &[W1M, W2P, W2M, W3, W5], &[C::X3NoW1Plus]),
    rule("X3.7", T_X3, A::X3, &[W1P, W1M, W3, W5], &[C::X3HermR, C::HermUmbilic]),
    rule("X3.8", T_X3, A::X3, &[W2P, W2M, W3, W5], &[C::RnnZero, C::Minimal]),
    idem("X3c.1", T_X3C, A::X3, &[W1P, W1M, W2P, W2M, W3], &[C::RbarTnZero], &[C::RbarTnZero], false, "(idem): same condition at pi/2"),
    idem("X3c.2", T_X3C, A::X3, &[W1P, W1M, W2P, W2M, W5], &[C::X3Mixed], &[C::X3Mixed], false, "(idem): same condition at pi/2"),
    idem(
        "X3c.3",
        T_X3C,
        A::X3,
        &[W1P, W1M, W2P, W3, W5],
        &[C::X3HermR],
        &[C::HermUmbilic],
        true,
        "bound kept fixed; parenthesized condition taken at pi/2",
    ),
    idem(
        "X3c.4",
        T_X3C,
        A::X3,
        &[W1P, W1M, W2M, W3, W5],
        &[C::HermUmbilic],
        &[C::X3HermR],
        true,
        "bound kept fixed; parenthesized condition taken at pi/2",
    ),
    idem(
        "X3c.5",
        T_X3C,
        A::X3,
        &[W1P, W2P, W2M, W3, W5],
        &[C::RnnZero],
        &[C::Minimal],
        true,
        "bound kept fixed; parenthesized condition taken at pi/2",
    ),
    idem(
        "X3c.6",
        T_X3C,
        A::X3,
        &[W1M, W2P, W2M, W3, W5],
        &[C::Minimal],
        &[C::RnnZero],
        true,
        "bound kept fixed; parenthesized condition taken at pi/2",
    ),
    rule("X4.1", T_X4, A::X4, &[W1P, W1M, W2P, W2M, W3, W4], &[C::X4PDtheta]),
    rule("X4.2", T_X4, A::X4, &[W1P, W1M, W2P, W2M, W3, W5], &[C::PNormal]),
    rule("X4.3", T_X4, A::X4, &[W1P, W1M, W2P, W2M, W4, W5], &[C::IbEqB]),
    rule("X4.4", T_X4, A::X4, &[W1P, W1M, W2P, W3, W4, W5], &[C::SinHermUmbilic]),
    rule("X4.5", T_X4, A::X4, &[W1P, W1M, W2M, W3, W4, W5], &[C::CosHermUmbilic]),
    rule("X4.6", T_X4, A::X4, &[W1P, W2P, W2M, W3, W4, W5], &[C::X4SinP]),
    rule("X4.7", T_X4, A::X4, &[W1M, W2P, W2M, W3, W4, W5], &[C::X4CosP]),
    rule("X4.8", T_X4, A::X4, &[W1P, W1M, W3, W4, W5], &[C::HermUmbilic]),
    rule("X4.9", T_X4, A::X4, &[W2P, W2M, W3, W4, W5], &[C::PnEq12h]),
    rule("X4.10", T_X4, A::X4, &[W1P, W1M, W4, W5], &[C::TotallyUmbilic]),
    swapped("X4c.1", T_X4C, A::X4, &[W1P, W2P, W3], &[C::PNormal]),
    swapped("X4c.2", T_X4C, A::X4, &[W1P, W2P, W4, W5], &[C::IbEqB]),
    swapped("X4c.3", T_X4C, A::X4, &[W1P, W3, W4, W5], &[C::HermUmbilic]),
    swapped("X4c.4", T_X4C, A::X4, &[W2P, W3, W4, W5], &[C::PnEq12h]),
    swapped("X4c.5", T_X4C, A::X4, &[W1P, W4, W5], &[C::TotallyUmbilic]),
    rule("X4t.1", T_X4T, A::X4Tangent, &[W1P, W1M, W2P, W2M, W3, W4], &[C::X4PDtheta]),
    rule("X4t.2", T_X4T, A::X4Tangent, &[W1P, W1M, W2P, W2M, W4, W5], &[C::IbEqB]),
    rule("X4t.3", T_X4T, A::X4Tangent, &[W1P, W1M, W2P, W3, W4, W5], &[C::SinHermUmbilic]),
    rule("X4t.4", T_X4T, A::X4Tangent, &[W1P, W1M, W2M, W3, W4, W5], &[C::CosHermUmbilic]),
    rule("X4t.5", T_X4T, A::X4Tangent, &[W1P, W2P, W2M, W3, W4, W5], &[C::HSinZero]),
    rule("X4t.6", T_X4T, A::X4Tangent, &[W1M, W2P, W2M, W3, W4, W5], &[C::HCosZero]),
    rule("X4t.7", T_X4T, A::X4Tangent, &[W1P, W1M, W3, W4, W5], &[C::HermUmbilic]),
    rule("X4t.8", T_X4T, A::X4Tangent, &[W2P, W2M, W3, W4, W5], &[C::Minimal]),
    rule("X4t.9", T_X4T, A::X4Tangent, &[W1P, W1M, W4, W5], &[C::TotallyUmbilic]),
    rule("X4t.10", T_X4T, A::X4Tangent, &[W4, W5], &[C::TotallyGeodesic]),
    rule("mix.1", T_MIX, A::X1X3, &[W1P, W1M, W2P, W2M, W3, W5], &[]),
    rule("mix.2", T_MIX, A::X2X4Tangent, &[W2P, W2M, W3, W4, W5], &[C::Minimal]),
    rule("mix.3", T_MIX, A::X2X4, &[W1P, W1M, W2P, W2M, W4, W5], &[C::IbEqB]),
];

/// Phase position relevant to the constant-θ tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    Zero,
    HalfPi,
    Other,
}

/// Evaluated conditions for one hypersurface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facts {
    pub ambient: BTreeSet<G2Type>,
    pub p_tangent: bool,
    pub theta: ThetaKind,
    pub holds: BTreeSet<Cond>,
}

impl Facts {
    pub fn evaluate<S: Scalar>(
        ambient: &AmbientData<S>,
        induced: &InducedData<S>,
        slice: &HypersurfaceSlice<S>,
        phase: &Phase<S>,
        dtheta: &Vector<S>,
    ) -> Self {
        let t = slice.tangent();
        let su3 = &induced.su3;
        let cx = su3.complex_structure();
        let g = Bilinear::metric(t.local());
        let b = slice.shape();
        let h = slice.mean_curvature().clone();
        let (c, s) = (phase.cos().clone(), phase.sin().clone());
        let n = |x: i64| S::from_int(x);
        let rl = t.pullback_bilinear(&ambient.rbar);
        let v = t.restrict_first(&ambient.rbar);
        let rnn = t.normal_normal(&ambient.rbar);
        let p = ambient.p_dstar();
        let pn = p.dot(&t.normal_vector()).expect("frame");
        let pt = t.pullback_vector(p);
        let k = ambient.nearly_parallel_constant();

        let add = |x: &Bilinear<S>, y: &Bilinear<S>| x.add(y).expect("frame");
        let sub = |x: &Bilinear<S>, y: &Bilinear<S>| x.sub(y).expect("frame");
        let iall = |x: &Bilinear<S>| x.i_all(cx).expect("frame");
        let islot = |x: &Bilinear<S>, k: usize| x.i_slot(cx, k).expect("frame");
        let one_plus_i = |x: &Bilinear<S>| add(x, &iall(x));
        let ib = iall(b);
        let herm_b = one_plus_i(b);
        let two_h_g = g.scale(&(n(2) * h.clone()));
        let x2_lhs = add(&sub(&islot(&rl, 1), &islot(&rl, 2)), &herm_b);
        let herm_r = one_plus_i(&rl);
        let pn_12h = pn.clone() - n(12) * h.clone();

        let mut holds = BTreeSet::new();
        let mut put = |cond: Cond, value: bool| {
            if value {
                holds.insert(cond);
            }
        };
        put(Cond::ThetaConstant, dtheta.is_zero());
        put(Cond::IbEqB, &ib == b);
        put(Cond::IbEqMinusB, ib == b.scale(&-S::one()));
        put(Cond::Minimal, slice.minimal());
        put(Cond::TotallyUmbilic, slice.totally_umbilic());
        put(Cond::TotallyGeodesic, slice.totally_geodesic());
        put(Cond::HermUmbilic, herm_b == two_h_g);
        put(Cond::SinHermUmbilic, herm_b.scale(&s) == two_h_g.scale(&s));
        put(Cond::CosHermUmbilic, herm_b.scale(&c) == two_h_g.scale(&c));
        put(Cond::AmbientParallel, ambient.rbar.is_zero());
        put(Cond::X1NoW1Minus, (-n(4) * h.clone() * s.clone()).approx_eq(&(k.clone() * c.clone())));
        put(Cond::X1NoW1Plus, (n(4) * h.clone() * c.clone()).approx_eq(&(k * s.clone())));
        put(Cond::RbarTnZero, v.is_zero());
        put(Cond::DthetaEqTwoV, *dtheta == v.scale(&n(2)));
        put(Cond::DthetaEqV, *dtheta == v);
        put(Cond::X2Herm, x2_lhs == two_h_g);
        put(Cond::X2SinHerm, x2_lhs.scale(&s) == two_h_g.scale(&s));
        put(Cond::X2CosHerm, x2_lhs.scale(&c) == two_h_g.scale(&c));
        put(Cond::HSinZero, (h.clone() * s.clone()).is_zero());
        put(Cond::HCosZero, (h.clone() * c.clone()).is_zero());
        put(Cond::X3Mixed, add(&islot(&rl, 1), &islot(&rl, 2)) == sub(b, &ib));
        put(
            Cond::X3NoW2Minus,
            add(&herm_r.scale(&(n(3) * c.clone())), &herm_b.scale(&(n(3) * s.clone())))
                == g.scale(&(n(6) * h.clone() * s.clone() - c.clone() * rnn.clone())),
        );
        put(
            Cond::X3NoW2Plus,
            add(&herm_r.scale(&(-n(3) * s.clone())), &herm_b.scale(&(n(3) * c.clone())))
                == g.scale(&(n(6) * h.clone() * c.clone() + s.clone() * rnn.clone())),
        );
        put(Cond::X3NoW1Minus, (c.clone() * rnn.clone()).approx_eq(&(n(6) * h.clone() * s.clone())));
        put(Cond::X3NoW1Plus, (s.clone() * rnn.clone()).approx_eq(&(-n(6) * h.clone() * c.clone())));
        put(Cond::X3HermR, herm_r.scale(&n(3)) == g.scale(&-rnn.clone()));
        put(Cond::RnnZero, rnn.is_zero());
        put(Cond::X4PDtheta, pt == su3.apply_i(dtheta).scale(&n(12)));
        put(Cond::PNormal, pt.is_zero());
        put(Cond::X4SinP, (s.clone() * pn_12h.clone()).is_zero());
        put(Cond::X4CosP, (c.clone() * pn_12h.clone()).is_zero());
        put(Cond::PnEq12h, pn_12h.is_zero());

        let theta = if !dtheta.is_zero() {
            ThetaKind::Other
        } else if s.is_zero() && c == S::one() {
            ThetaKind::Zero
        } else if c.is_zero() && s == S::one() {
            ThetaKind::HalfPi
        } else {
            ThetaKind::Other
        };
        Facts {
            ambient: ambient.class.types.clone(),
            p_tangent: pn.is_zero(),
            theta,
            holds,
        }
    }

    fn ambient_within(&self, allowed: &[G2Type]) -> bool {
        self.ambient.iter().all(|t| allowed.contains(t))
    }

    pub fn applies(&self, rule: &TableRule) -> bool {
        use G2Type::*;
        let ambient_ok = match rule.ambient {
            AmbientReq::X1 => self.ambient_within(&[X1]),
            AmbientReq::Parallel => self.ambient.is_empty(),
            AmbientReq::X2 => self.ambient_within(&[X2]),
            AmbientReq::X3 => self.ambient_within(&[X3]),
            AmbientReq::X4 => self.ambient_within(&[X4]),
            AmbientReq::X4Tangent => self.ambient_within(&[X4]) && self.p_tangent,
            AmbientReq::X1X3 => self.ambient_within(&[X1, X3]),
            AmbientReq::X2X4 => self.ambient_within(&[X2, X4]),
            AmbientReq::X2X4Tangent => self.ambient_within(&[X2, X4]) && self.p_tangent,
        };
        let theta_ok = match rule.theta {
            ThetaReq::Any => true,
            ThetaReq::ZeroOrHalfPi => self.theta != ThetaKind::Other,
        };
        ambient_ok && theta_ok
    }

    /// `(predicate, bound)` for an applicable rule.
    pub fn instantiate(&self, rule: &TableRule) -> (bool, Vec<Su3Type>) {
        let half_pi = self.theta == ThetaKind::HalfPi;
        let conds = match (half_pi, rule.when_half_pi) {
            (true, Some(alt)) => alt,
            _ => rule.when,
        };
        let predicate = conds.iter().all(|c| self.holds.contains(c));
        let bound = if half_pi && rule.swap_half_pi {
            rule.bound.iter().map(|t| t.quarter_turn_partner()).collect()
        } else {
            rule.bound.to_vec()
        };
        (predicate, bound)
    }
}

/// Evaluate every applicable rule.
pub fn table_crosscheck<S: Scalar>(
    ambient: &AmbientData<S>,
    induced: &InducedData<S>,
    slice: &HypersurfaceSlice<S>,
    phase: &Phase<S>,
    dtheta: &Vector<S>,
) -> Vec<CrossCheck> {
    let facts = Facts::evaluate(ambient, induced, slice, phase, dtheta);
    RULES
        .iter()
        .filter(|r| facts.applies(r))
        .map(|r| {
            let (predicate, bound) = facts.instantiate(r);
            let within_bound = induced.class.within(&bound);
            CrossCheck {
                rule: r.id,
                predicate,
                within_bound,
                verdict: if predicate == within_bound { Verdict::Agree } else { Verdict::Conflict },
            }
        })
        .collect()
}

pub fn rule_by_id(id: &str) -> Option<&'static TableRule> {
    RULES.iter().find(|r| r.id == id)
}
