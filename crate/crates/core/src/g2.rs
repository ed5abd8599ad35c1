//! G2-structures on a 7-dimensional Cayley frame: φ, ∗φ, the cross product,
//! the torsion space, the r̄ map and the Fernández–Gray classes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exterior::{
    contract, contract_basis, endo_action, hodge, inner, wedge, Bilinear, ExteriorError, Form, FrameSpace, Vector,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum G2Error {
    #[error("a G2-structure needs a 7-dimensional frame, got {0}")]
    WrongDimension(usize),
    #[error("expected {expected} rows of forms, got {got}")]
    WrongRowCount { expected: usize, got: usize },
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

pub type Result<T> = std::result::Result<T, G2Error>;

/// The bilinear form `a_ij` (equivalently `r̄(φ)`).
pub type TorsionMatrix7<S> = Bilinear<S>;

const fn z7_table() -> [[usize; 7]; 7] {
    let mut t = [[0; 7]; 7];
    let mut i = 0;
    while i < 7 {
        let mut k = 0;
        while k < 7 {
            t[i][k] = (i + k) % 7;
            k += 1;
        }
        i += 1;
    }
    t
}

/// `Z7[i][k] = i + k mod 7`.
pub const Z7: [[usize; 7]; 7] = z7_table();

const fn phi_triples() -> [[usize; 3]; 7] {
    let mut t = [[0; 3]; 7];
    let mut i = 0;
    while i < 7 {
        t[i] = [i, Z7[i][1], Z7[i][3]];
        i += 1;
    }
    t
}

/// The triples `(i, i+1, i+3)`; `φ = Σ e_i ∧ e_{i+1} ∧ e_{i+3}`.
pub const PHI_TRIPLES: [[usize; 3]; 7] = phi_triples();

const fn phi_pairs() -> [[(usize, usize); 3]; 7] {
    let mut out = [[(0, 0); 3]; 7];
    let mut fill = [0usize; 7];
    let mut t = 0;
    while t < 7 {
        let [a, b, c] = PHI_TRIPLES[t];
        out[a][fill[a]] = (b, c);
        fill[a] += 1;
        out[b][fill[b]] = (c, a);
        fill[b] += 1;
        out[c][fill[c]] = (a, b);
        fill[c] += 1;
        t += 1;
    }
    out
}

/// For each `i`, the three ordered pairs `(j, k)` with `φ(e_i, e_j, e_k) = 1`.
pub const PHI_PAIRS: [[(usize, usize); 3]; 7] = phi_pairs();

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum G2Type {
    X1,
    X2,
    X3,
    X4,
}

impl G2Type {
    pub const ALL: [G2Type; 4] = [G2Type::X1, G2Type::X2, G2Type::X3, G2Type::X4];

    pub fn name(self) -> &'static str {
        match self {
            G2Type::X1 => "X1",
            G2Type::X2 => "X2",
            G2Type::X3 => "X3",
            G2Type::X4 => "X4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for G2Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A G2-structure in a Cayley frame.
#[derive(Debug, Clone)]
pub struct G2Structure<S: Scalar> {
    frame: Arc<FrameSpace>,
    phi: Form<S>,
    star_phi: Form<S>,
    /// `P(e_i, e_j)` at index `7 i + j`.
    cross: Vec<Vector<S>>,
    /// `e_j ⌟ ∗φ`.
    star_rows: Vec<Form<S>>,
    /// `e_k ⌟ φ`.
    phi_rows: Vec<Form<S>>,
    /// `|e_k ⌟ φ|²`, computed at construction.
    perp_norm: S,
}

impl<S: Scalar> G2Structure<S> {
    pub fn new(frame: &Arc<FrameSpace>) -> Result<Self> {
        if frame.dim() != 7 {
            return Err(G2Error::WrongDimension(frame.dim()));
        }
        let mut phi = Form::zero(frame, 3);
        for t in PHI_TRIPLES {
            phi = phi.add(&Form::basis(frame, &t))?;
        }
        let star_phi = hodge(&phi);
        let mut cross = Vec::with_capacity(49);
        for i in 0..7 {
            for j in 0..7 {
                let coeffs = (0..7).map(|k| phi.eval_basis(&[i, j, k])).collect();
                cross.push(Vector::from_coeffs(frame, coeffs));
            }
        }
        let star_rows = (0..7)
            .map(|j| contract_basis(j, &star_phi))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let phi_rows = (0..7)
            .map(|k| contract_basis(k, &phi))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let perp_norm = inner(&phi_rows[0], &phi_rows[0])?;
        Ok(Self {
            frame: frame.clone(),
            phi,
            star_phi,
            cross,
            star_rows,
            phi_rows,
            perp_norm,
        })
    }

    /// Structure on `e0 … e6`.
    pub fn standard() -> Self {
        Self::new(&FrameSpace::standard(7)).expect("standard frame is 7-dimensional")
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn phi(&self) -> &Form<S> {
        &self.phi
    }

    pub fn star_phi(&self) -> &Form<S> {
        &self.star_phi
    }

    pub fn cross_basis(&self, i: usize, j: usize) -> &Vector<S> {
        &self.cross[7 * i + j]
    }

    /// `P(x, y)` with `<P(x,y), z> = φ(x,y,z)`.
    pub fn cross(&self, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        let mut out = Vector::zero(&self.frame);
        for i in 0..7 {
            if x.get(i).is_zero() {
                continue;
            }
            for j in 0..7 {
                if y.get(j).is_zero() {
                    continue;
                }
                let c = x.get(i).clone() * y.get(j).clone();
                out = out.add(&self.cross_basis(i, j).scale(&c)).expect("same frame");
            }
        }
        out
    }

    /// Rows `Σ_j a_ij e_j ⌟ ∗φ`.
    pub fn alpha_from_a(&self, a: &TorsionMatrix7<S>) -> Vec<Form<S>> {
        (0..7)
            .map(|i| {
                let mut row = Form::zero(&self.frame, 3);
                for j in 0..7 {
                    if !a.get(i, j).is_zero() {
                        row = row.add(&self.star_rows[j].scale(a.get(i, j))).expect("same frame");
                    }
                }
                row
            })
            .collect()
    }

    /// `r̄(α)(e_i, e_j) = ¼ <α_i, e_j ⌟ ∗φ>`.
    pub fn rbar_of(&self, alpha: &[Form<S>]) -> Result<TorsionMatrix7<S>> {
        if alpha.len() != 7 {
            return Err(G2Error::WrongRowCount {
                expected: 7,
                got: alpha.len(),
            });
        }
        let quarter = S::from_ratio(1, 4);
        let mut out = Bilinear::zero(&self.frame);
        for (i, row) in alpha.iter().enumerate() {
            for j in 0..7 {
                out.set(i, j, inner(row, &self.star_rows[j])? * quarter.clone());
            }
        }
        Ok(out)
    }

    /// `dφ` from the torsion matrix, written out in the five cyclic families.
    pub fn dphi_from_a(&self, a: &TorsionMatrix7<S>) -> Form<S> {
        let at = |i: usize, x: usize, y: usize| a.get(Z7[i][x], Z7[i][y]).clone();
        let fr = &self.frame;
        let mut terms = Vec::with_capacity(35);
        for i in 0..7 {
            let z = &Z7[i];
            terms.push(Form::monomial(
                fr,
                &[z[2], z[4], z[5], z[6]],
                -(at(i, 2, 2) + at(i, 4, 4) + at(i, 5, 5) + at(i, 6, 6)),
            ));
            terms.push(Form::monomial(
                fr,
                &[z[0], z[1], z[2], z[4]],
                at(i, 4, 5) + at(i, 1, 3) + at(i, 2, 6),
            ));
            terms.push(Form::monomial(
                fr,
                &[z[0], z[2], z[3], z[5]],
                -at(i, 5, 4) - at(i, 3, 1) + at(i, 2, 6),
            ));
            terms.push(Form::monomial(
                fr,
                &[z[0], z[3], z[4], z[6]],
                at(i, 4, 5) - at(i, 3, 1) - at(i, 6, 2),
            ));
            terms.push(Form::monomial(
                fr,
                &[z[0], z[5], z[6], z[1]],
                -at(i, 5, 4) + at(i, 1, 3) - at(i, 6, 2),
            ));
        }
        Form::sum(fr, 4, &terms).expect("same frame")
    }

    /// `d*φ` from the torsion matrix, written out in the three cyclic families.
    pub fn dstarphi_from_a(&self, a: &TorsionMatrix7<S>) -> Form<S> {
        let at = |i: usize, x: usize, y: usize| a.get(Z7[i][x], Z7[i][y]).clone();
        let fr = &self.frame;
        let mut terms = Vec::with_capacity(21);
        for i in 0..7 {
            let z = &Z7[i];
            terms.push(Form::monomial(
                fr,
                &[z[1], z[3]],
                at(i, 5, 4) - at(i, 4, 5) + at(i, 6, 2) - at(i, 2, 6),
            ));
            terms.push(Form::monomial(
                fr,
                &[z[4], z[5]],
                at(i, 3, 1) - at(i, 1, 3) + at(i, 6, 2) - at(i, 2, 6),
            ));
            terms.push(Form::monomial(
                fr,
                &[z[2], z[6]],
                at(i, 3, 1) - at(i, 1, 3) + at(i, 5, 4) - at(i, 4, 5),
            ));
        }
        Form::sum(fr, 2, &terms).expect("same frame")
    }

    /// Recover `r̄(φ)` from `dφ` and `d*φ`:
    /// `4 r̄(X,Y) = <X⌟dφ, Y⌟∗φ> - <Y⌟(X∧∗φ), dφ> + 2 d*φ(X,Y)`.
    pub fn rbar_from_derivatives(&self, dphi: &Form<S>, dstarphi: &Form<S>) -> Result<TorsionMatrix7<S>> {
        check_grade(dphi, 4)?;
        check_grade(dstarphi, 2)?;
        let quarter = S::from_ratio(1, 4);
        let two = S::from_int(2);
        let mut out = Bilinear::zero(&self.frame);
        for x in 0..7 {
            let x_dphi = contract_basis(x, dphi)?;
            let x_star = wedge(&Form::basis(&self.frame, &[x]), &self.star_phi)?;
            for y in 0..7 {
                let first = inner(&x_dphi, &self.star_rows[y])?;
                let second = inner(&contract_basis(y, &x_star)?, dphi)?;
                let third = two.clone() * dstarphi.eval_basis(&[x, y]);
                out.set(x, y, (first - second + third) * quarter.clone());
            }
        }
        Ok(out)
    }

    /// `(v ⌟ φ)` as a bilinear form.
    pub fn perp_bilinear(&self, v: &Vector<S>) -> Bilinear<S> {
        let form = contract(v, &self.phi).expect("same frame");
        Bilinear::from_two_form(&form).expect("2-form")
    }

    /// `Σ b(e_j, e_k)` over the pairs with `φ(e_i, e_j, e_k) = 1`; zero for all `i` on g₂.
    pub fn g2_condition(&self, b: &Bilinear<S>, i: usize) -> S {
        PHI_PAIRS[i]
            .iter()
            .fold(S::zero(), |acc, &(j, k)| acc + b.get(j, k).clone())
    }

    pub fn g2_project(&self, b: &Bilinear<S>) -> G2Components<S> {
        let g = Bilinear::metric(&self.frame);
        let lambda = b.trace() / S::from_int(7);
        let sym = b.symmetric_part();
        let s0 = sym.sub(&g.scale(&lambda)).expect("same frame");
        let skew = b.skew_part();
        let skew_form = skew.to_two_form().expect("skew part is alternating");
        let pvec = Vector::from_coeffs(
            &self.frame,
            self.phi_rows
                .iter()
                .map(|row| inner(&skew_form, row).expect("same frame") / self.perp_norm.clone())
                .collect(),
        );
        let g2part = skew.sub(&self.perp_bilinear(&pvec)).expect("same frame");
        let minus_two = S::from_int(-2);
        let p_dstar = Vector::from_coeffs(
            &self.frame,
            (0..7)
                .map(|i| {
                    let s = PHI_PAIRS[i].iter().fold(S::zero(), |acc, &(j, k)| {
                        acc + b.get(j, k).clone() - b.get(k, j).clone()
                    });
                    minus_two.clone() * s
                })
                .collect(),
        );
        G2Components {
            lambda,
            s0,
            g2part,
            pvec,
            p_dstar,
        }
    }

    pub fn g2_classify(&self, r: &TorsionMatrix7<S>) -> G2Class<S> {
        G2Class::from_components(&self.g2_project(r), self)
    }

    /// `ξ_X Y = -⅓ Σ_i r̄(X, e_i) P(e_i, Y)`.
    pub fn xi_g2(&self, r: &TorsionMatrix7<S>, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        let rx = r.left(x);
        let mut out = Vector::zero(&self.frame);
        for i in 0..7 {
            if rx.get(i).is_zero() {
                continue;
            }
            let p = self.cross(&Vector::basis(&self.frame, i), y);
            out = out.add(&p.scale(rx.get(i))).expect("same frame");
        }
        out.scale(&S::from_ratio(-1, 3))
    }

    /// `ξ_{e_i}` as an endomorphism (column `j` is `ξ_{e_i} e_j`).
    pub fn xi_g2_endo(&self, r: &TorsionMatrix7<S>, i: usize) -> Bilinear<S> {
        let x = Vector::basis(&self.frame, i);
        let cols: Vec<Vector<S>> = (0..7)
            .map(|j| self.xi_g2(r, &x, &Vector::basis(&self.frame, j)))
            .collect();
        Bilinear::from_fn(&self.frame, |row, col| cols[col].get(row).clone())
    }

    /// `∇̃_{e_i} φ = ∇̄_{e_i} φ + ξ_{e_i}·φ` for `∇̄φ` given by `a`; vanishes for the minimal connection.
    pub fn minimal_connection_residual(&self, a: &TorsionMatrix7<S>) -> Vec<Form<S>> {
        let alpha = self.alpha_from_a(a);
        (0..7)
            .map(|i| {
                let xi_phi = endo_action(&self.xi_g2_endo(a, i), &self.phi).expect("same frame");
                alpha[i].add(&xi_phi).expect("same frame")
            })
            .collect()
    }
}

fn check_grade<S: Scalar>(f: &Form<S>, grade: usize) -> Result<()> {
    if f.grade() == grade {
        Ok(())
    } else {
        Err(ExteriorError::GradeMismatch {
            left: f.grade(),
            right: grade,
        }
        .into())
    }
}

/// Decomposition `⊗² = R + S₀² + g₂ + g₂⊥`.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Components<S: Scalar> {
    pub lambda: S,
    pub s0: Bilinear<S>,
    pub g2part: Bilinear<S>,
    /// The g₂⊥ part is `pvec ⌟ φ`.
    pub pvec: Vector<S>,
    /// `Σ -2 (b_jk - b_kj) e_i` over φ-pairs.
    pub p_dstar: Vector<S>,
}

impl<S: Scalar> G2Components<S> {
    pub fn reconstruct(&self, g2: &G2Structure<S>) -> Bilinear<S> {
        let g = Bilinear::metric(g2.frame());
        g.scale(&self.lambda)
            .add(&self.s0)
            .and_then(|b| b.add(&self.g2part))
            .and_then(|b| b.add(&g2.perp_bilinear(&self.pvec)))
            .expect("same frame")
    }
}

/// Fernández–Gray type with squared component norms.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Class<S: Scalar> {
    pub types: BTreeSet<G2Type>,
    /// `|component|²` for X1..X4, entrywise on the bilinear parts.
    pub norms_sq: [S; 4],
}

impl<S: Scalar> G2Class<S> {
    fn from_components(c: &G2Components<S>, g2: &G2Structure<S>) -> Self {
        let g = Bilinear::<S>::metric(g2.frame());
        let perp = g2.perp_bilinear(&c.pvec);
        let norms_sq = [
            g.scale(&c.lambda).norm_sq(),
            c.g2part.norm_sq(),
            c.s0.norm_sq(),
            perp.norm_sq(),
        ];
        let types = G2Type::ALL
            .into_iter()
            .zip(&norms_sq)
            .filter(|(_, n)| !n.is_zero())
            .map(|(t, _)| t)
            .collect();
        Self { types, norms_sq }
    }

    pub fn contains(&self, t: G2Type) -> bool {
        self.types.contains(&t)
    }

    /// Parallel structure (`r̄ = 0`).
    pub fn is_parallel(&self) -> bool {
        self.types.is_empty()
    }

    pub fn label(&self) -> String {
        if self.types.is_empty() {
            "P".to_string()
        } else {
            self.types.iter().map(|t| t.name()).collect::<Vec<_>>().join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn triples_and_pairs() {
        assert_eq!(PHI_TRIPLES[4], [4, 5, 0]);
        assert_eq!(PHI_TRIPLES[6], [6, 0, 2]);
        for (i, pairs) in PHI_PAIRS.iter().enumerate() {
            for &(j, k) in pairs {
                assert!(j != i && k != i && j != k);
            }
        }
    }

    #[test]
    fn phi_and_star_phi() {
        let g2 = G2Structure::<Q>::standard();
        assert_eq!(g2.phi().len(), 7);
        assert!(g2.phi().terms().all(|(_, c)| *c == q(1, 1)));
        let fr = g2.frame();
        let mut expected = Form::zero(fr, 4);
        for i in 0..7 {
            let z = &Z7[i];
            expected = expected.add(&Form::monomial(fr, &[z[2], z[4], z[5], z[6]], q(-1, 1))).unwrap();
        }
        assert_eq!(g2.star_phi(), &expected);
        assert_eq!(wedge(g2.phi(), g2.star_phi()).unwrap(), Form::volume(fr).scale(&q(7, 1)));
    }

    #[test]
    fn cayley_frame() {
        let g2 = G2Structure::<Q>::standard();
        let fr = g2.frame().clone();
        for i in 0..7 {
            assert_eq!(g2.cross_basis(i, Z7[i][1]), &Vector::basis(&fr, Z7[i][3]));
        }
        assert_eq!(g2.cross_basis(1, 0), &Vector::basis(&fr, 3).scale(&q(-1, 1)));
        assert_eq!(g2.cross_basis(0, 2), &Vector::basis(&fr, 6));
        assert!(g2.cross_basis(4, 4).is_zero());
    }

    #[test]
    fn rejects_wrong_dimension() {
        assert_eq!(
            G2Structure::<Q>::new(&FrameSpace::standard(6)).unwrap_err(),
            G2Error::WrongDimension(6)
        );
    }

    #[test]
    fn identity_torsion() {
        let g2 = G2Structure::<Q>::standard();
        let id = Bilinear::metric(g2.frame());
        assert_eq!(g2.dphi_from_a(&id), g2.star_phi().scale(&q(4, 1)));
        assert!(g2.dstarphi_from_a(&id).is_zero());
        assert_eq!(g2.rbar_from_derivatives(&g2.star_phi().scale(&q(4, 1)), &Form::zero(g2.frame(), 2)).unwrap(), id);
        let c = g2.g2_classify(&id.scale(&q(1, 1)));
        assert_eq!(c.types, BTreeSet::from([G2Type::X1]));
    }

    fn heisenberg_rbar(g2: &G2Structure<Q>) -> Bilinear<Q> {
        let mut b = Bilinear::zero(g2.frame());
        b.set(0, 1, q(1, 2));
        b.set(1, 0, q(-1, 2));
        b.set(4, 6, q(-1, 2));
        b.set(6, 4, q(1, 2));
        b
    }

    #[test]
    fn heisenberg_torsion_is_x2() {
        let g2 = G2Structure::<Q>::standard();
        let a = heisenberg_rbar(&g2);
        let fr = g2.frame();
        let expected = Form::basis(fr, &[0, 1]).sub(&Form::basis(fr, &[4, 6])).unwrap();
        assert_eq!(g2.dstarphi_from_a(&a), expected);
        assert!(g2.dphi_from_a(&a).is_zero());
        for i in 0..7 {
            assert!(g2.g2_condition(&a, i).is_zero());
        }
        let comps = g2.g2_project(&a);
        assert_eq!(comps.g2part, a);
        assert_eq!(g2.g2_classify(&a).types, BTreeSet::from([G2Type::X2]));
    }

    #[test]
    fn mk_torsion_is_x3() {
        let g2 = G2Structure::<Q>::standard();
        let mut a = Bilinear::zero(g2.frame());
        a.set(0, 1, q(-1, 1));
        a.set(1, 0, q(-1, 1));
        let comps = g2.g2_project(&a);
        assert_eq!(comps.s0, a);
        assert_eq!(g2.g2_classify(&a).types, BTreeSet::from([G2Type::X3]));
    }

    #[test]
    fn perp_vector_and_p_dstar() {
        let g2 = G2Structure::<Q>::standard();
        let v = Vector::basis(g2.frame(), 0);
        let b = g2.perp_bilinear(&v);
        let comps = g2.g2_project(&b);
        assert_eq!(comps.pvec, v);
        assert!(comps.g2part.is_zero());
        assert_eq!(comps.p_dstar, v.scale(&q(-12, 1)));
        assert_eq!(g2.g2_classify(&b).types, BTreeSet::from([G2Type::X4]));
    }

    #[test]
    fn xi_examples() {
        let g2 = G2Structure::<Q>::standard();
        let fr = g2.frame().clone();
        let a = heisenberg_rbar(&g2);
        let got = g2.xi_g2(&a, &Vector::basis(&fr, 0), &Vector::basis(&fr, 4));
        // r̄(e0, e1) = ½, P(e1, e4) = -e2 (triple (1,2,4))
        assert_eq!(got, Vector::basis(&fr, 2).scale(&q(1, 6)));
        let zero = Bilinear::zero(&fr);
        assert!(g2.xi_g2(&zero, &Vector::basis(&fr, 3), &Vector::basis(&fr, 5)).is_zero());
    }

    #[test]
    fn minimal_connection_for_examples() {
        let g2 = G2Structure::<Q>::standard();
        let a = heisenberg_rbar(&g2);
        assert!(g2.minimal_connection_residual(&a).iter().all(Form::is_zero));
        let id = Bilinear::metric(g2.frame());
        assert!(g2.minimal_connection_residual(&id).iter().all(Form::is_zero));
    }
}
