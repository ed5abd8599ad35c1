//! Invariant coframes: structure equations, the exterior derivative, the
//! Levi-Civita connection from the Koszul formula, and hypersurface slices.

use std::sync::Arc;

use thiserror::Error;

use crate::exterior::{check_frames, endo_action, hodge, wedge, Bilinear, ExteriorError, Form, FrameSpace, SignedIndex, Vector};
use crate::g2::{G2Error, G2Structure, TorsionMatrix7};
use crate::scalar::{Rational, Scalar};
use crate::su3::{Phase, SU3Structure, Su3Error};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("d of generator {generator} must be a 2-form, got grade {grade}")]
    NotTwoForm { generator: String, grade: usize },
    #[error("d(d {generator}) = {residual} != 0")]
    DSquaredNonzero { generator: String, residual: String },
    #[error("distribution orthogonal to {normal} is not integrable: d(n) ^ n = {form}")]
    NotIntegrable { normal: String, form: String },
    #[error("normal {0} is not a frame direction")]
    BadNormal(String),
    #[error("shape tensor is not symmetric")]
    AsymmetricShape,
    #[error("inconsistent geometry: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    G2(#[from] G2Error),
    #[error(transparent)]
    Su3(#[from] Su3Error),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// A coframe with constant structure constants: `d e_i` for every generator.
#[derive(Debug, Clone)]
pub struct CoframeDGA<S: Scalar> {
    frame: Arc<FrameSpace>,
    d: Vec<Form<S>>,
}

impl<S: Scalar> CoframeDGA<S> {
    /// Checks grades and `d∘d = 0` on every generator.
    pub fn new(frame: &Arc<FrameSpace>, d: Vec<Form<S>>) -> Result<Self> {
        assert_eq!(d.len(), frame.dim(), "one d entry per generator");
        for (i, f) in d.iter().enumerate() {
            check_frames(f.frame(), frame)?;
            if f.grade() != 2 {
                return Err(GeometryError::NotTwoForm {
                    generator: frame.label(i).to_string(),
                    grade: f.grade(),
                });
            }
        }
        let dga = Self { frame: frame.clone(), d };
        for i in 0..frame.dim() {
            let dd = dga.exterior_d(&dga.d[i]);
            if !dd.is_zero() {
                return Err(GeometryError::DSquaredNonzero {
                    generator: frame.label(i).to_string(),
                    residual: dd.to_string(),
                });
            }
        }
        Ok(dga)
    }

    pub fn abelian(frame: &Arc<FrameSpace>) -> Self {
        Self {
            frame: frame.clone(),
            d: vec![Form::zero(frame, 2); frame.dim()],
        }
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn d_generator(&self, i: usize) -> &Form<S> {
        &self.d[i]
    }

    /// `d` extended as a derivation of degree one.
    pub fn exterior_d(&self, a: &Form<S>) -> Form<S> {
        let mut out = Form::zero(&self.frame, a.grade() + 1);
        if a.grade() >= self.frame.dim() {
            return out;
        }
        for (blade, c) in a.terms() {
            let idx: Vec<usize> = blade.indices().collect();
            for (k, &i) in idx.iter().enumerate() {
                if self.d[i].is_zero() {
                    continue;
                }
                let left = Form::monomial(&self.frame, &idx[..k], S::one());
                let right = Form::monomial(&self.frame, &idx[k + 1..], S::one());
                let term = wedge(&wedge(&left, &self.d[i]).expect("frame"), &right).expect("frame");
                let sign = if k % 2 == 0 { c.clone() } else { -c.clone() };
                out = out.add(&term.scale(&sign)).expect("frame");
            }
        }
        out
    }

    /// The codifferential `-∗d∗` (valid for 2-forms in dimensions 6 and 7 and for 3-forms in dimension 7).
    pub fn codifferential(&self, a: &Form<S>) -> Form<S> {
        hodge(&self.exterior_d(&hodge(a))).neg()
    }

    /// `[e_j, e_k]`, read from `e_i([e_j, e_k]) = -d e_i(e_j, e_k)`.
    pub fn bracket(&self, j: usize, k: usize) -> Vector<S> {
        let coeffs = (0..self.frame.dim()).map(|i| -self.d[i].eval_basis(&[j, k])).collect();
        Vector::from_coeffs(&self.frame, coeffs)
    }

    /// Levi-Civita connection of the invariant orthonormal frame:
    /// `2<∇_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>`.
    pub fn koszul(&self) -> Connection<S> {
        let n = self.frame.dim();
        let c = |i: usize, j: usize, k: usize| -self.d[k].eval_basis(&[i, j]);
        let half = S::from_ratio(1, 2);
        let mut gamma = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let coeffs = (0..n)
                    .map(|k| (c(i, j, k) - c(j, k, i) + c(k, i, j)) * half.clone())
                    .collect();
                gamma.push(Vector::from_coeffs(&self.frame, coeffs));
            }
        }
        Connection {
            frame: self.frame.clone(),
            gamma,
        }
    }

    /// Structure equations of a leaf of the distribution orthogonal to `tangent`'s normal.
    pub fn restrict(&self, tangent: &TangentFrame) -> Result<CoframeDGA<S>> {
        tangent.check_ambient(&self.frame)?;
        let d = tangent.global.iter().map(|&g| tangent.pullback_form(&self.d[g])).collect();
        CoframeDGA::new(&tangent.local, d)
    }
}

/// `∇_{e_i} e_j = Γ(i, j)` in an invariant orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection<S: Scalar> {
    frame: Arc<FrameSpace>,
    gamma: Vec<Vector<S>>,
}

impl<S: Scalar> Connection<S> {
    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn gamma(&self, i: usize, j: usize) -> &Vector<S> {
        &self.gamma[self.frame.dim() * i + j]
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(Vector::is_zero)
    }

    /// The endomorphism `e_j ↦ Γ(i, j)` (column `j`).
    pub fn matrix(&self, i: usize) -> Bilinear<S> {
        Bilinear::from_fn(&self.frame, |k, j| self.gamma(i, j).get(k).clone())
    }

    /// `∇_{e_i} a` for a form with constant coefficients.
    pub fn nabla_form(&self, i: usize, a: &Form<S>) -> Form<S> {
        endo_action(&self.matrix(i), a).expect("same frame")
    }

    pub fn is_metric(&self) -> bool {
        let n = self.frame.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| (self.gamma(i, j).get(k).clone() + self.gamma(i, k).get(j).clone()).is_zero())))
    }

    pub fn is_torsion_free(&self, dga: &CoframeDGA<S>) -> bool {
        let n = self.frame.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let t = self.gamma(i, j).sub(self.gamma(j, i)).expect("frame");
                t == dga.bracket(i, j)
            })
        })
    }
}

/// `a_ij` of `∇̄φ`, cross-checked against `dφ` and `d*φ = -∗d∗φ` from the structure equations.
pub fn nabla_phi<S: Scalar>(dga: &CoframeDGA<S>, conn: &Connection<S>, g2: &G2Structure<S>) -> Result<TorsionMatrix7<S>> {
    let alpha: Vec<Form<S>> = (0..7).map(|i| conn.nabla_form(i, g2.phi())).collect();
    let a = g2.rbar_of(&alpha)?;
    let dphi = dga.exterior_d(g2.phi());
    if g2.dphi_from_a(&a) != dphi {
        return Err(GeometryError::Inconsistent(format!("d(phi) = {dphi} disagrees with the torsion matrix")));
    }
    let dstar = dga.codifferential(g2.phi());
    if g2.dstarphi_from_a(&a) != dstar {
        return Err(GeometryError::Inconsistent(format!("d*(phi) = {dstar} disagrees with the torsion matrix")));
    }
    Ok(a)
}

/// The tangent frame of a hypersurface with unit normal `±e_a` in a Cayley frame,
/// listed in adapted order for `Ix = P(n, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    ambient: Arc<FrameSpace>,
    normal: SignedIndex,
    local: Arc<FrameSpace>,
    global: [usize; 6],
    adapted: [SignedIndex; 6],
}

impl TangentFrame {
    pub fn new(ambient: &Arc<FrameSpace>, normal: SignedIndex) -> Result<Self> {
        if ambient.dim() != 7 {
            return Err(G2Error::WrongDimension(ambient.dim()).into());
        }
        if normal.index >= 7 {
            return Err(GeometryError::BadNormal(format!("index {}", normal.index)));
        }
        let g2 = G2Structure::<Rational>::new(ambient)?;
        let a = normal.index;
        let as_signed = |v: &Vector<Rational>| -> SignedIndex {
            let k = (0..7).find(|&k| !v.get(k).is_zero()).expect("cross product of orthonormal basis vectors");
            if rational_sign(v.get(k)) < 0 {
                SignedIndex::minus(k)
            } else {
                SignedIndex::plus(k)
            }
        };
        let cross = |x: SignedIndex, y: SignedIndex| {
            let v = g2.cross_basis(x.index, y.index);
            let s = x.negative != y.negative;
            let e = as_signed(v);
            if s {
                e.neg()
            } else {
                e
            }
        };
        let u1 = SignedIndex::plus((a + 1) % 7);
        let u2 = SignedIndex::plus((a + 2) % 7);
        let u3 = cross(u1, u2);
        let iu = [u1, u2, u3].map(|u| cross(normal, u));
        let mut global = [u1.index, u2.index, u3.index, iu[0].index, iu[1].index, iu[2].index];
        let mut adapted = [
            SignedIndex::plus(0),
            SignedIndex::plus(1),
            SignedIndex::plus(2),
            SignedIndex { index: 3, negative: iu[0].negative },
            SignedIndex { index: 4, negative: iu[1].negative },
            SignedIndex { index: 5, negative: iu[2].negative },
        ];
        let build = |global: &[usize; 6], adapted: &[SignedIndex; 6]| -> Result<(Arc<FrameSpace>, bool)> {
            let local = FrameSpace::new(global.iter().map(|&g| ambient.label(g).to_string()))?;
            match SU3Structure::<Rational>::new(&local, *adapted, Phase::zero()) {
                Ok(_) => Ok((local, true)),
                Err(Su3Error::WrongOrientation) => Ok((local, false)),
                Err(e) => Err(e.into()),
            }
        };
        let (mut local, oriented) = build(&global, &adapted)?;
        if !oriented {
            global.swap(4, 5);
            adapted.swap(4, 5);
            adapted[4].index = 4;
            adapted[5].index = 5;
            adapted.swap(4, 5);
            let (l, ok) = build(&global, &adapted)?;
            debug_assert!(ok, "swapping two tangent labels reverses orientation");
            local = l;
        }
        Ok(Self {
            ambient: ambient.clone(),
            normal,
            local,
            global,
            adapted,
        })
    }

    pub fn ambient(&self) -> &Arc<FrameSpace> {
        &self.ambient
    }

    pub fn normal(&self) -> SignedIndex {
        self.normal
    }

    /// The hypersurface frame, labels in adapted order.
    pub fn local(&self) -> &Arc<FrameSpace> {
        &self.local
    }

    /// Ambient index of each local frame vector.
    pub fn global(&self) -> &[usize; 6] {
        &self.global
    }

    /// Signed adapted frame `(u1, u2, u3, Iu1, Iu2, Iu3)` in local indices.
    pub fn adapted(&self) -> &[SignedIndex; 6] {
        &self.adapted
    }

    pub fn normal_vector<S: Scalar>(&self) -> Vector<S> {
        Vector::signed_basis(&self.ambient, self.normal)
    }

    fn local_index(&self, g: usize) -> Option<usize> {
        self.global.iter().position(|&x| x == g)
    }

    fn check_ambient(&self, frame: &Arc<FrameSpace>) -> Result<()> {
        Ok(check_frames(frame, &self.ambient)?)
    }

    /// `ι*a`.
    pub fn pullback_form<S: Scalar>(&self, a: &Form<S>) -> Form<S> {
        let mut out = Form::zero(&self.local, a.grade());
        'terms: for (blade, c) in a.terms() {
            let mut idx = Vec::with_capacity(blade.grade());
            for g in blade.indices() {
                match self.local_index(g) {
                    Some(l) => idx.push(l),
                    None => continue 'terms,
                }
            }
            out = out.add(&Form::monomial(&self.local, &idx, c.clone())).expect("frame");
        }
        out
    }

    /// `b(ι_* ·, ι_* ·)`.
    pub fn pullback_bilinear<S: Scalar>(&self, b: &Bilinear<S>) -> Bilinear<S> {
        Bilinear::from_fn(&self.local, |i, j| b.get(self.global[i], self.global[j]).clone())
    }

    /// The tangential part of an ambient vector (equivalently `ι*` of its dual 1-form).
    pub fn pullback_vector<S: Scalar>(&self, v: &Vector<S>) -> Vector<S> {
        Vector::from_coeffs(&self.local, self.global.iter().map(|&g| v.get(g).clone()).collect())
    }

    /// `ι_* x`.
    pub fn push_vector<S: Scalar>(&self, x: &Vector<S>) -> Vector<S> {
        let mut coeffs = vec![S::zero(); 7];
        for (l, &g) in self.global.iter().enumerate() {
            coeffs[g] = x.get(l).clone();
        }
        Vector::from_coeffs(&self.ambient, coeffs)
    }

    /// `n(ι_* ·)`-style restriction of a bilinear form with one slot on the normal:
    /// returns the 1-form `b(ι_* ·, n)`.
    pub fn restrict_first<S: Scalar>(&self, b: &Bilinear<S>) -> Vector<S> {
        let sign: S = self.normal.sign();
        Vector::from_coeffs(
            &self.local,
            self.global.iter().map(|&g| b.get(g, self.normal.index).clone() * sign.clone()).collect(),
        )
    }

    /// The 1-form `b(n, ι_* ·)`.
    pub fn restrict_second<S: Scalar>(&self, b: &Bilinear<S>) -> Vector<S> {
        self.restrict_first(&b.transpose())
    }

    /// `b(n, n)`.
    pub fn normal_normal<S: Scalar>(&self, b: &Bilinear<S>) -> S {
        b.get(self.normal.index, self.normal.index).clone()
    }
}

fn rational_sign(q: &Rational) -> i32 {
    crate::scalar::rational_signum(q)
}

/// Shape data of a hypersurface: `B(x, y) = <∇̄_x y, n>` and `6h = Tr B`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersurfaceSlice<S: Scalar> {
    tangent: TangentFrame,
    b: Bilinear<S>,
    h: S,
}

impl<S: Scalar> HypersurfaceSlice<S> {
    /// From an explicit (symmetric) shape tensor in the local frame.
    pub fn from_shape(tangent: TangentFrame, b: Bilinear<S>) -> Result<Self> {
        check_frames(b.frame(), tangent.local())?;
        if !b.is_symmetric() {
            return Err(GeometryError::AsymmetricShape);
        }
        let h = b.trace() / S::from_int(6);
        Ok(Self { tangent, b, h })
    }

    pub fn tangent(&self) -> &TangentFrame {
        &self.tangent
    }

    pub fn shape(&self) -> &Bilinear<S> {
        &self.b
    }

    pub fn mean_curvature(&self) -> &S {
        &self.h
    }

    pub fn totally_geodesic(&self) -> bool {
        self.b.is_zero()
    }

    pub fn minimal(&self) -> bool {
        self.h.is_zero()
    }

    pub fn totally_umbilic(&self) -> bool {
        self.b == Bilinear::metric(self.tangent.local()).scale(&self.h)
    }
}

/// Slice through a leaf of the distribution orthogonal to `normal`.
pub fn slice<S: Scalar>(dga: &CoframeDGA<S>, conn: &Connection<S>, normal: SignedIndex) -> Result<HypersurfaceSlice<S>> {
    let tangent = TangentFrame::new(dga.frame(), normal)?;
    let nf = Vector::<S>::signed_basis(dga.frame(), normal).to_form();
    let obstruction = wedge(&dga.exterior_d(&nf), &nf)?;
    if !obstruction.is_zero() {
        return Err(GeometryError::NotIntegrable {
            normal: normal.render(dga.frame()),
            form: obstruction.to_string(),
        });
    }
    let sign: S = normal.sign();
    let b = Bilinear::from_fn(tangent.local(), |i, j| {
        conn.gamma(tangent.global[i], tangent.global[j]).get(normal.index).clone() * sign.clone()
    });
    HypersurfaceSlice::from_shape(tangent, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    type Q = Rational;

    fn q(s: &str) -> Q {
        parse_rational(s).unwrap()
    }

    fn frame7() -> Arc<FrameSpace> {
        FrameSpace::standard(7)
    }

    fn dga(entries: &[(usize, &[(usize, usize, &str)])]) -> CoframeDGA<Q> {
        let f = frame7();
        let mut d = vec![Form::zero(&f, 2); 7];
        for (g, terms) in entries {
            for &(i, j, c) in *terms {
                d[*g] = d[*g].add(&Form::monomial(&f, &[i, j], q(c))).unwrap();
            }
        }
        CoframeDGA::new(&f, d).unwrap()
    }

    fn heisenberg() -> CoframeDGA<Q> {
        dga(&[(1, &[(4, 5, "-1")]), (6, &[(0, 5, "-1")])])
    }

    fn mk(k: &str) -> CoframeDGA<Q> {
        let mk = format!("-{k}");
        let mk: &str = Box::leak(mk.into_boxed_str());
        let k: &str = Box::leak(k.to_string().into_boxed_str());
        dga(&[(0, &[(0, 3, mk)]), (1, &[(1, 3, k)])])
    }

    fn vec7(pairs: &[(usize, &str)]) -> Vector<Q> {
        let mut c = vec![Q::zero(); 7];
        for &(i, s) in pairs {
            c[i] = q(s);
        }
        Vector::from_coeffs(&frame7(), c)
    }

    #[test]
    fn heisenberg_d_and_codifferential() {
        let d = heisenberg();
        let f = frame7();
        assert_eq!(d.exterior_d(&Form::basis(&f, &[1])), Form::monomial(&f, &[4, 5], q("-1")));
        let g2 = G2Structure::<Q>::standard();
        assert!(d.exterior_d(g2.phi()).is_zero());
        let expected = Form::basis(&f, &[0, 1]).sub(&Form::basis(&f, &[4, 6])).unwrap();
        assert_eq!(d.codifferential(g2.phi()), expected);
    }

    #[test]
    fn d_squared_is_rejected() {
        let f = frame7();
        let mut d = vec![Form::<Q>::zero(&f, 2); 7];
        d[0] = Form::basis(&f, &[1, 2]);
        d[1] = Form::basis(&f, &[3, 4]);
        let err = CoframeDGA::new(&f, d).unwrap_err();
        assert!(matches!(err, GeometryError::DSquaredNonzero { ref generator, .. } if generator == "e0"));
    }

    #[test]
    fn heisenberg_brackets_and_connection() {
        let d = heisenberg();
        assert_eq!(d.bracket(0, 5), vec7(&[(6, "1")]));
        assert_eq!(d.bracket(4, 5), vec7(&[(1, "1")]));
        let conn = d.koszul();
        let listed: [(usize, usize, usize, &str); 12] = [
            (0, 5, 6, "1/2"),
            (0, 6, 5, "-1/2"),
            (1, 4, 5, "-1/2"),
            (1, 5, 4, "1/2"),
            (4, 1, 5, "-1/2"),
            // Printed as -1/2 e1 in the source list; metric compatibility with Γ(4,1) forces +1/2.
            (4, 5, 1, "1/2"),
            (5, 0, 6, "-1/2"),
            (5, 1, 4, "1/2"),
            (5, 4, 1, "-1/2"),
            (5, 6, 0, "1/2"),
            (6, 0, 5, "-1/2"),
            (6, 5, 0, "1/2"),
        ];
        for i in 0..7 {
            for j in 0..7 {
                let expected = listed
                    .iter()
                    .find(|t| t.0 == i && t.1 == j)
                    .map(|t| vec7(&[(t.2, t.3)]))
                    .unwrap_or_else(|| Vector::zero(&frame7()));
                assert_eq!(conn.gamma(i, j), &expected, "Γ({i},{j})");
            }
        }
        assert!(conn.is_metric());
        assert!(conn.is_torsion_free(&d));
    }

    #[test]
    fn mk_connection() {
        let d = mk("1");
        let conn = d.koszul();
        assert_eq!(conn.gamma(0, 3), &vec7(&[(0, "1")]));
        assert_eq!(conn.gamma(0, 0), &vec7(&[(3, "-1")]));
        assert_eq!(conn.gamma(1, 3), &vec7(&[(1, "-1")]));
        assert_eq!(conn.gamma(1, 1), &vec7(&[(3, "1")]));
        let nonzero = (0..7).flat_map(|i| (0..7).map(move |j| (i, j))).filter(|&(i, j)| !conn.gamma(i, j).is_zero()).count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn abelian_is_flat_and_parallel() {
        let d = CoframeDGA::<Q>::abelian(&frame7());
        let conn = d.koszul();
        assert!(conn.is_zero());
        assert!(nabla_phi(&d, &conn, &G2Structure::standard()).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_rbar() {
        let d = heisenberg();
        let a = nabla_phi(&d, &d.koszul(), &G2Structure::standard()).unwrap();
        let mut expected = Bilinear::zero(&frame7());
        expected.set(0, 1, q("1/2"));
        expected.set(1, 0, q("-1/2"));
        expected.set(4, 6, q("-1/2"));
        expected.set(6, 4, q("1/2"));
        assert_eq!(a, expected);
    }

    #[test]
    fn mk_rbar_and_derivatives() {
        for k in ["1", "2"] {
            let d = mk(k);
            let g2 = G2Structure::<Q>::standard();
            let a = nabla_phi(&d, &d.koszul(), &g2).unwrap();
            // The structure equations give +k e0∨e1 by every route (∇̄φ, dφ, d*φ).
            let mut expected = Bilinear::zero(&frame7());
            expected.set(0, 1, q(k));
            expected.set(1, 0, q(k));
            assert_eq!(g2.rbar_from_derivatives(&d.exterior_d(g2.phi()), &d.codifferential(g2.phi())).unwrap(), expected);
            assert_eq!(a, expected);
            let dphi = d.exterior_d(g2.phi());
            assert!(wedge(&dphi, g2.phi()).unwrap().is_zero());
            assert!(d.exterior_d(g2.star_phi()).is_zero());
        }
    }

    #[test]
    fn adapted_order_for_e0() {
        let t = TangentFrame::new(&frame7(), SignedIndex::plus(0)).unwrap();
        assert_eq!(t.local().labels(), ["e1", "e2", "e4", "e3", "e6", "e5"]);
        assert_eq!(t.adapted(), &std::array::from_fn(SignedIndex::plus));
    }

    #[test]
    fn every_normal_gives_an_oriented_adapted_frame() {
        let g2 = G2Structure::<Q>::standard();
        for a in 0..7 {
            for normal in [SignedIndex::plus(a), SignedIndex::minus(a)] {
                let t = TangentFrame::new(&frame7(), normal).unwrap();
                let su3 = SU3Structure::<Q>::new(t.local(), *t.adapted(), Phase::zero()).unwrap();
                let n = t.normal_vector::<Q>();
                for l in 0..6 {
                    let x = t.push_vector(&Vector::basis(t.local(), l));
                    let ix = t.push_vector(&su3.apply_i(&Vector::basis(t.local(), l)));
                    assert_eq!(ix, g2.cross(&n, &x));
                }
                assert_eq!(su3.psi_plus(), &t.pullback_form(g2.phi()));
            }
        }
    }

    #[test]
    fn heisenberg_slices() {
        let d = heisenberg();
        let conn = d.koszul();
        let m1 = slice(&d, &conn, SignedIndex::plus(3)).unwrap();
        assert!(m1.totally_geodesic());

        let m2 = slice(&d, &conn, SignedIndex::plus(0)).unwrap();
        let l = m2.tangent().local().clone();
        let (i5, i6) = (l.index_of("e5").unwrap(), l.index_of("e6").unwrap());
        let mut b = Bilinear::zero(&l);
        b.set(i5, i6, q("1/2"));
        b.set(i6, i5, q("1/2"));
        assert_eq!(m2.shape(), &b);
        assert!(m2.minimal() && !m2.totally_geodesic());

        let m3 = slice(&d, &conn, SignedIndex::plus(5)).unwrap();
        let l = m3.tangent().local().clone();
        let ix = |s: &str| l.index_of(s).unwrap();
        let mut b = Bilinear::zero(&l);
        for (x, y) in [("e0", "e6"), ("e6", "e0"), ("e1", "e4"), ("e4", "e1")] {
            b.set(ix(x), ix(y), q("-1/2"));
        }
        assert_eq!(m3.shape(), &b);
        assert!(m3.minimal());
    }

    #[test]
    fn non_integrable_normal_names_the_form() {
        let d = heisenberg();
        let err = slice(&d, &d.koszul(), SignedIndex::plus(1)).unwrap_err();
        match err {
            GeometryError::NotIntegrable { normal, form } => {
                assert_eq!(normal, "+e1");
                assert_eq!(form, "-1 e1^e4^e5");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn restricted_dga_matches_gauss_formula() {
        let d = heisenberg();
        let conn = d.koszul();
        for a in [0, 3, 5] {
            let s = slice(&d, &conn, SignedIndex::plus(a)).unwrap();
            let t = s.tangent();
            let leaf = d.restrict(t).unwrap();
            let inner = leaf.koszul();
            for i in 0..6 {
                for j in 0..6 {
                    let tangential = t.pullback_vector(conn.gamma(t.global()[i], t.global()[j]));
                    assert_eq!(inner.gamma(i, j), &tangential);
                }
            }
        }
    }
}
