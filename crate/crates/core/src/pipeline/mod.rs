//! Hypersurface induction: the SU(3)-structure induced by a G2-structure and a
//! unit normal, its intrinsic torsion from the ambient data and the shape
//! tensor, and the resulting type.

use thiserror::Error;

use crate::exterior::{Bilinear, Form, SignedIndex, Vector};
use crate::framegeom::{CoframeDGA, GeometryError, HypersurfaceSlice, TangentFrame};
use crate::g2::{G2Class, G2Components, G2Structure, TorsionMatrix7};
use crate::scalar::Scalar;
use crate::su3::{ExteriorData, Phase, SU3Class, SU3Structure, SU3Torsion, Su3Error};

pub mod tables;

pub use tables::{table_crosscheck, CrossCheck, TableRule, Verdict, RULES};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InductionError {
    #[error("inconsistent induction: {equation} residual {residual}")]
    Inconsistent { equation: &'static str, residual: String },
    #[error("direct computation disagrees with the induced torsion: {0}")]
    DirectMismatch(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Su3(#[from] Su3Error),
}

pub type Result<T> = std::result::Result<T, InductionError>;

/// Ambient G2 data consumed by the induction.
#[derive(Debug, Clone)]
pub struct AmbientData<S: Scalar> {
    pub g2: G2Structure<S>,
    pub rbar: TorsionMatrix7<S>,
    pub components: G2Components<S>,
    pub class: G2Class<S>,
}

impl<S: Scalar> AmbientData<S> {
    pub fn new(g2: G2Structure<S>, rbar: TorsionMatrix7<S>) -> Self {
        let components = g2.g2_project(&rbar);
        let class = g2.g2_classify(&rbar);
        Self {
            g2,
            rbar,
            components,
            class,
        }
    }

    /// `p d*φ`.
    pub fn p_dstar(&self) -> &Vector<S> {
        &self.components.p_dstar
    }

    /// `k` with `r̄ = (k/4) <·,·>` on the X1 part.
    pub fn nearly_parallel_constant(&self) -> S {
        self.components.lambda.clone() * S::from_int(4)
    }
}

/// `I = P(n, ·)` on the tangent frame, with `ψ₊ + iψ₋ = e^{iθ}(ι*φ + i ι*(n⌟∗φ))`.
pub fn induce_structure<S: Scalar>(tangent: &TangentFrame, phase: Phase<S>) -> Result<SU3Structure<S>> {
    Ok(SU3Structure::new(tangent.local(), *tangent.adapted(), phase)?)
}

/// Residuals of the consistency equations of the induction; all vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct RrbResiduals<S: Scalar> {
    /// `2 I d*ω - ι*p + 2 r̄(n, I·) - 2 r̄(I·, n)`.
    pub rrb2: Vector<S>,
    /// `p(n) + 2c Tr r + 2s c_ω(r) - 12h`.
    pub rrb3: S,
    /// `Tr ι*r̄ + s Tr r - c c_ω(r)`.
    pub rrb4: S,
}

impl<S: Scalar> RrbResiduals<S> {
    pub fn all_zero(&self) -> bool {
        self.rrb2.is_zero() && self.rrb3.is_zero() && self.rrb4.is_zero()
    }
}

/// Induced SU(3) data on a hypersurface.
#[derive(Debug, Clone)]
pub struct InducedData<S: Scalar> {
    pub su3: SU3Structure<S>,
    pub torsion: SU3Torsion<S>,
    pub dstar_omega: Vector<S>,
    pub class: SU3Class<S>,
    pub residuals: RrbResiduals<S>,
}

/// `c_ω(b) = Σ b_ij ω_ij`.
pub fn c_omega<S: Scalar>(su3: &SU3Structure<S>, b: &Bilinear<S>) -> S {
    b.inner(&su3.omega_bilinear()).expect("frame")
}

/// Induced torsion from the ambient `r̄`, the shape tensor and `(θ, dθ)`.
pub fn rrb<S: Scalar>(
    ambient: &AmbientData<S>,
    slice: &HypersurfaceSlice<S>,
    phase: &Phase<S>,
    dtheta: &Vector<S>,
) -> Result<InducedData<S>> {
    let t = slice.tangent();
    let su3 = induce_structure(t, phase.clone())?;
    let cx = su3.complex_structure();
    let (c, s) = (phase.cos().clone(), phase.sin().clone());
    let b = slice.shape();
    let rl = t.pullback_bilinear(&ambient.rbar);
    let i2 = |m: &Bilinear<S>| m.i_slot(cx, 2).expect("frame");
    let r = i2(&rl)
        .scale(&-S::one())
        .add(b)
        .expect("frame")
        .scale(&c)
        .sub(&rl.add(&i2(b)).expect("frame").scale(&s))
        .expect("frame");
    // 3Iη = dθ - r̄(ι·, n), and I² = -1.
    let v = t.restrict_first(&ambient.rbar);
    let eta = su3.apply_i(&v.sub(dtheta).expect("frame")).scale(&S::from_ratio(1, 3));
    let dstar_omega = su3.dstar_omega(&r);

    // A 1-form x ↦ w(Ix) is -Iw.
    let w_n_first = t.restrict_second(&ambient.rbar);
    let lhs = su3.apply_i(&dstar_omega).scale(&S::from_int(2));
    let rhs = t
        .pullback_vector(ambient.p_dstar())
        .add(&su3.apply_i(&w_n_first).scale(&S::from_int(2)))
        .expect("frame")
        .sub(&su3.apply_i(&v).scale(&S::from_int(2)))
        .expect("frame");
    let tr = r.trace();
    let cw = c_omega(&su3, &r);
    let p_n = ambient.p_dstar().dot(&t.normal_vector()).expect("frame");
    let residuals = RrbResiduals {
        rrb2: lhs.sub(&rhs).expect("frame"),
        rrb3: p_n + S::from_int(2) * c.clone() * tr.clone() + S::from_int(2) * s.clone() * cw.clone()
            - S::from_int(12) * slice.mean_curvature().clone(),
        rrb4: rl.trace() + s * tr - c * cw,
    };
    let torsion = SU3Torsion { r, eta };
    let class = su3.su3_classify(&torsion);
    Ok(InducedData {
        su3,
        torsion,
        dstar_omega,
        class,
        residuals,
    })
}

/// Like [`rrb`], but fails on the first nonvanishing residual.
pub fn rrb_checked<S: Scalar>(
    ambient: &AmbientData<S>,
    slice: &HypersurfaceSlice<S>,
    phase: &Phase<S>,
    dtheta: &Vector<S>,
) -> Result<InducedData<S>> {
    let induced = rrb(ambient, slice, phase, dtheta)?;
    let res = &induced.residuals;
    if !res.rrb2.is_zero() {
        return Err(InductionError::Inconsistent {
            equation: "rrB2",
            residual: render_vector(&res.rrb2),
        });
    }
    for (name, value) in [("rrB3", &res.rrb3), ("rrB4", &res.rrb4)] {
        if !value.is_zero() {
            return Err(InductionError::Inconsistent {
                equation: name,
                residual: value.render(),
            });
        }
    }
    Ok(induced)
}

fn render_vector<S: Scalar>(v: &Vector<S>) -> String {
    v.coeffs().iter().map(Scalar::render).collect::<Vec<_>>().join(" ")
}

/// Intrinsic torsion computed on the leaf itself, from its own structure equations:
/// `r` from `∇ω` (Koszul connection of the leaf) and `η` from `dψ±`.
pub fn direct_torsion<S: Scalar>(dga: &CoframeDGA<S>, su3: &SU3Structure<S>, tangent: &TangentFrame) -> Result<SU3Torsion<S>> {
    let leaf = dga.restrict(tangent)?;
    let conn = leaf.koszul();
    let alpha: Vec<Form<S>> = (0..6).map(|i| conn.nabla_form(i, su3.omega())).collect();
    let r = su3.r_of(&alpha)?;
    let data = ExteriorData {
        domega: leaf.exterior_d(su3.omega()),
        dpsi_plus: leaf.exterior_d(su3.psi_plus()),
        dpsi_minus: leaf.exterior_d(su3.psi_minus()),
        dstar_omega: Vector::from_form(&leaf.codifferential(su3.omega())).map_err(GeometryError::from)?,
    };
    let recovered = su3.torsion_from_exterior(&data)?;
    if recovered.r != r {
        return Err(InductionError::DirectMismatch("r(omega) from nabla omega and from d omega, d psi differ".into()));
    }
    Ok(recovered)
}

/// Predicates on the shape tensor and ambient data used by the type tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapePredicates {
    pub totally_geodesic: bool,
    pub minimal: bool,
    pub totally_umbilic: bool,
    pub ib_eq_b: bool,
    pub ib_eq_minus_b: bool,
}

impl ShapePredicates {
    pub fn of<S: Scalar>(slice: &HypersurfaceSlice<S>, su3: &SU3Structure<S>) -> Self {
        let b = slice.shape();
        let ib = b.i_all(su3.complex_structure()).expect("frame");
        Self {
            totally_geodesic: slice.totally_geodesic(),
            minimal: slice.minimal(),
            totally_umbilic: slice.totally_umbilic(),
            ib_eq_b: &ib == b,
            ib_eq_minus_b: ib == b.scale(&-S::one()),
        }
    }
}

/// Everything known about one hypersurface.
#[derive(Debug, Clone)]
pub struct HypersurfaceReport<S: Scalar> {
    pub normal: SignedIndex,
    pub phase: Phase<S>,
    pub dtheta: Vector<S>,
    pub slice: HypersurfaceSlice<S>,
    pub predicates: ShapePredicates,
    pub induced: InducedData<S>,
    /// Torsion computed on the leaf from structure equations, when available.
    pub direct: Option<SU3Torsion<S>>,
    pub crosscheck: Vec<CrossCheck>,
}

impl<S: Scalar> HypersurfaceReport<S> {
    pub fn is_su3_kaehler(&self) -> bool {
        self.induced.class.is_kaehler()
    }
}

/// Induce, classify and cross-check one hypersurface. With `dga`, the torsion is also
/// computed directly on the leaf and must agree.
pub fn classify_hypersurface<S: Scalar>(
    ambient: &AmbientData<S>,
    slice: HypersurfaceSlice<S>,
    phase: Phase<S>,
    dtheta: Vector<S>,
    dga: Option<&CoframeDGA<S>>,
) -> Result<HypersurfaceReport<S>> {
    let induced = rrb_checked(ambient, &slice, &phase, &dtheta)?;
    let direct = match dga {
        Some(dga) if dtheta.is_zero() => {
            let d = direct_torsion(dga, &induced.su3, slice.tangent())?;
            if d != induced.torsion {
                return Err(InductionError::DirectMismatch(format!(
                    "leaf torsion r = {:?}, eta = {}",
                    d.r.rows().iter().map(|row| row.iter().map(Scalar::render).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>(),
                    render_vector(&d.eta)
                )));
            }
            Some(d)
        }
        _ => None,
    };
    let predicates = ShapePredicates::of(&slice, &induced.su3);
    let crosscheck = table_crosscheck(ambient, &induced, &slice, &phase, &dtheta);
    Ok(HypersurfaceReport {
        normal: slice.tangent().normal(),
        phase,
        dtheta,
        slice,
        predicates,
        induced,
        direct,
        crosscheck,
    })
}
