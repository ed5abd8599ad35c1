//! SU(3)-structures on a 6-dimensional frame: ω, ψ±, the r map, the
//! Gray–Hervella classes W1±, W2±, W3, W4, W5 and torsion recovery from
//! exterior derivatives.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exterior::{
    contract, contract_basis, endo_action, hodge, inner, islot_form, wedge, Bilinear, ComplexStructure,
    ExteriorError, Form, FrameSpace, SignedIndex, Vector,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Su3Error {
    #[error("an SU(3)-structure needs a 6-dimensional frame, got {0}")]
    WrongDimension(usize),
    #[error("invalid phase: c^2 + s^2 = {0}, expected 1")]
    InvalidPhase(String),
    #[error("adapted frame is not a signed permutation of the frame")]
    InvalidAdaptedFrame,
    #[error("adapted frame has the wrong orientation (omega^3 != 6 Vol)")]
    WrongOrientation,
    #[error("expected {expected} rows of forms, got {got}")]
    WrongRowCount { expected: usize, got: usize },
    #[error("inconsistent exterior data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

pub type Result<T> = std::result::Result<T, Su3Error>;

/// The phase `θ` as an exact pair `(cos θ, sin θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase<S: Scalar> {
    c: S,
    s: S,
}

impl<S: Scalar> Phase<S> {
    pub fn new(c: S, s: S) -> Result<Self> {
        let defect = c.clone() * c.clone() + s.clone() * s.clone() - S::one();
        if !defect.is_zero() {
            return Err(Su3Error::InvalidPhase((defect + S::one()).render()));
        }
        Ok(Self { c, s })
    }

    /// `θ = 0`.
    pub fn zero() -> Self {
        Self { c: S::one(), s: S::zero() }
    }

    /// `θ = π/2`.
    pub fn half_pi() -> Self {
        Self { c: S::zero(), s: S::one() }
    }

    pub fn cos(&self) -> &S {
        &self.c
    }

    pub fn sin(&self) -> &S {
        &self.s
    }

    /// `θ + π/2`.
    pub fn quarter_turn(&self) -> Self {
        Self {
            c: -self.s.clone(),
            s: self.c.clone(),
        }
    }

    pub fn render(&self) -> String {
        if self.s.is_zero() && self.c == S::one() {
            "0".into()
        } else if self.c.is_zero() && self.s == S::one() {
            "pi/2".into()
        } else {
            format!("cs {} {}", self.c.render(), self.s.render())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Su3Type {
    W1Plus,
    W1Minus,
    W2Plus,
    W2Minus,
    W3,
    W4,
    W5,
}

impl Su3Type {
    pub const ALL: [Su3Type; 7] = [
        Su3Type::W1Plus,
        Su3Type::W1Minus,
        Su3Type::W2Plus,
        Su3Type::W2Minus,
        Su3Type::W3,
        Su3Type::W4,
        Su3Type::W5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Su3Type::W1Plus => "W1+",
            Su3Type::W1Minus => "W1-",
            Su3Type::W2Plus => "W2+",
            Su3Type::W2Minus => "W2-",
            Su3Type::W3 => "W3",
            Su3Type::W4 => "W4",
            Su3Type::W5 => "W5",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    /// The partner under `θ → θ + π/2` (W1± and W2± swap).
    pub fn quarter_turn_partner(self) -> Self {
        match self {
            Su3Type::W1Plus => Su3Type::W1Minus,
            Su3Type::W1Minus => Su3Type::W1Plus,
            Su3Type::W2Plus => Su3Type::W2Minus,
            Su3Type::W2Minus => Su3Type::W2Plus,
            other => other,
        }
    }
}

impl fmt::Display for Su3Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parse a space-separated class such as `"W2+ W3"`; `"0"` or empty is the empty class.
pub fn parse_su3_class(text: &str) -> Option<BTreeSet<Su3Type>> {
    let text = text.trim();
    if text.is_empty() || text == "0" {
        return Some(BTreeSet::new());
    }
    text.split_whitespace().map(Su3Type::parse).collect()
}

pub fn render_su3_class(types: &BTreeSet<Su3Type>) -> String {
    if types.is_empty() {
        "0".into()
    } else {
        types.iter().map(|t| t.name()).collect::<Vec<_>>().join(" ")
    }
}

/// An SU(3)-structure with adapted frame `(u1, u2, u3, Iu1, Iu2, Iu3)`.
#[derive(Debug, Clone)]
pub struct SU3Structure<S: Scalar> {
    frame: Arc<FrameSpace>,
    adapted: [SignedIndex; 6],
    phase: Phase<S>,
    cx: ComplexStructure<S>,
    omega: Form<S>,
    psi_plus: Form<S>,
    psi_minus: Form<S>,
    /// `e_j ⌟ ψ₊`.
    psi_rows: Vec<Form<S>>,
}

impl<S: Scalar> SU3Structure<S> {
    pub fn new(frame: &Arc<FrameSpace>, adapted: [SignedIndex; 6], phase: Phase<S>) -> Result<Self> {
        if frame.dim() != 6 {
            return Err(Su3Error::WrongDimension(frame.dim()));
        }
        let mut seen = [false; 6];
        for e in adapted {
            if e.index >= 6 || seen[e.index] {
                return Err(Su3Error::InvalidAdaptedFrame);
            }
            seen[e.index] = true;
        }
        let u: Vec<Vector<S>> = adapted.iter().map(|&e| Vector::signed_basis(frame, e)).collect();
        // Column j of I is I e_j; e_j = ±u_m.
        let mut m = Bilinear::zero(frame);
        for (slot, e) in adapted.iter().enumerate() {
            let image = if slot < 3 { u[slot + 3].clone() } else { u[slot - 3].scale(&-S::one()) };
            let image = image.scale(&e.sign());
            for i in 0..6 {
                m.set(i, e.index, image.get(i).clone());
            }
        }
        let cx = ComplexStructure::new(m)?;
        let omega = cx.omega();
        let omega3 = wedge(&wedge(&omega, &omega)?, &omega)?;
        if omega3 != Form::volume(frame).scale(&S::from_int(6)) {
            return Err(Su3Error::WrongOrientation);
        }
        let f: Vec<Form<S>> = u.iter().map(Vector::to_form).collect();
        let w3 = |a: usize, b: usize, c: usize| wedge(&wedge(&f[a], &f[b]).expect("frame"), &f[c]).expect("frame");
        let psi_plus0 = Form::sum(frame, 3, &[w3(0, 1, 2), w3(3, 4, 2).neg(), w3(3, 1, 5).neg(), w3(0, 4, 5).neg()])?;
        let psi_minus0 = Form::sum(frame, 3, &[w3(3, 4, 5).neg(), w3(3, 1, 2), w3(0, 4, 2), w3(0, 1, 5)])?;
        let psi_plus = psi_plus0.scale(&phase.c).sub(&psi_minus0.scale(&phase.s))?;
        let psi_minus = psi_plus0.scale(&phase.s).add(&psi_minus0.scale(&phase.c))?;
        let psi_rows = (0..6)
            .map(|j| contract_basis(j, &psi_plus))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self {
            frame: frame.clone(),
            adapted,
            phase,
            cx,
            omega,
            psi_plus,
            psi_minus,
            psi_rows,
        })
    }

    /// Frame `e0 … e5` adapted in its own order.
    pub fn standard(phase: Phase<S>) -> Result<Self> {
        Self::new(&FrameSpace::standard(6), std::array::from_fn(SignedIndex::plus), phase)
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn adapted(&self) -> &[SignedIndex; 6] {
        &self.adapted
    }

    pub fn phase(&self) -> &Phase<S> {
        &self.phase
    }

    pub fn complex_structure(&self) -> &ComplexStructure<S> {
        &self.cx
    }

    pub fn omega(&self) -> &Form<S> {
        &self.omega
    }

    pub fn omega_bilinear(&self) -> Bilinear<S> {
        self.cx.omega_bilinear()
    }

    pub fn psi_plus(&self) -> &Form<S> {
        &self.psi_plus
    }

    pub fn psi_minus(&self) -> &Form<S> {
        &self.psi_minus
    }

    pub fn volume(&self) -> Form<S> {
        Form::volume(&self.frame)
    }

    pub fn apply_i(&self, x: &Vector<S>) -> Vector<S> {
        self.cx.apply(x)
    }

    /// `I` on a 1-form, via the metric identification.
    pub fn apply_i_form(&self, mu: &Form<S>) -> Form<S> {
        self.cx.apply(&Vector::from_form(mu).expect("1-form")).to_form()
    }

    /// Named pass/fail checks of the algebraic identities every SU(3)-structure satisfies.
    pub fn identity_checks(&self) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        let vol = self.volume();
        let (pp, pm, om) = (&self.psi_plus, &self.psi_minus, &self.omega);
        let w = |a: &Form<S>, b: &Form<S>| wedge(a, b).expect("frame");
        let zero5 = Form::zero(&self.frame, 5);
        let zero6 = Form::zero(&self.frame, 6);
        out.push(("psi+ ^ omega = 0".into(), w(pp, om) == zero5));
        out.push(("psi- ^ omega = 0".into(), w(pm, om) == zero5));
        out.push(("psi+ ^ psi- = -4 Vol".into(), w(pp, pm) == vol.scale(&S::from_int(-4))));
        out.push(("psi+ ^ psi+ = 0".into(), w(pp, pp) == zero6));
        out.push(("psi- ^ psi- = 0".into(), w(pm, pm) == zero6));
        out.push(("omega^3 = 6 Vol".into(), w(&w(om, om), om) == vol.scale(&S::from_int(6))));
        let cx = &self.cx;
        let islot = |a: &Form<S>, i: usize| islot_form(a, cx, i).expect("alternating");
        for i in 1..=3 {
            out.push((format!("I_({i}) psi+ = psi-"), islot(pp, i) == *pm));
        }
        for i in 1..=3 {
            for j in (i + 1)..=3 {
                let ok = |a: &Form<S>| {
                    let t = crate::exterior::Tensor::from_form(a)
                        .i_slot(cx, i)
                        .and_then(|t| t.i_slot(cx, j))
                        .and_then(|t| t.to_form())
                        .expect("alternating");
                    t == a.neg()
                };
                out.push((format!("I_({i}) I_({j}) psi+ = -psi+"), ok(pp)));
                out.push((format!("I_({i}) I_({j}) psi- = -psi-"), ok(pm)));
            }
        }
        for k in 0..6 {
            let x = Vector::basis(&self.frame, k);
            let ix = self.apply_i(&x);
            let xf = x.to_form();
            let ixf = ix.to_form();
            let a = w(&xf, pp);
            let b = w(&ixf, pm);
            let c = w(&contract(&ix, pp).expect("frame"), om).neg();
            out.push((format!("e{k} ^ psi+ = I e{k} ^ psi- = -(I e{k} _| psi+) ^ omega"), a == b && b == c));
            out.push((
                format!("e{k} _| psi+ = I e{k} _| psi-"),
                contract(&x, pp).expect("frame") == contract(&ix, pm).expect("frame"),
            ));
            let star = |a: &Form<S>, b: &Form<S>| hodge(&w(&hodge(a), b));
            let two = S::from_int(2);
            out.push((
                format!("*(*(e{k} ^ psi+) ^ psi+) = -2 e{k}"),
                star(&w(&xf, pp), pp) == xf.scale(&-two.clone()),
            ));
            out.push((
                format!("*(*(e{k} ^ psi-) ^ psi-) = -2 e{k}"),
                star(&w(&xf, pm), pm) == xf.scale(&-two.clone()),
            ));
            out.push((
                format!("*(*(e{k} ^ psi-) ^ psi+) = 2 I e{k}"),
                star(&w(&xf, pm), pp) == ixf.scale(&two),
            ));
            out.push((
                format!("*(*(e{k} ^ psi+) ^ psi-) = -2 I e{k}"),
                star(&w(&xf, pp), pm) == ixf.scale(&-two.clone()),
            ));
        }
        out
    }

    /// Rows `Σ_j a_ij e_j ⌟ ψ₊` of `∇ω`.
    pub fn alpha6_from_a(&self, a: &Bilinear<S>) -> Vec<Form<S>> {
        (0..6)
            .map(|i| {
                let mut row = Form::zero(&self.frame, 2);
                for j in 0..6 {
                    if !a.get(i, j).is_zero() {
                        row = row.add(&self.psi_rows[j].scale(a.get(i, j))).expect("frame");
                    }
                }
                row
            })
            .collect()
    }

    /// `r(α)(e_i, e_j) = ½ <α_i, e_j ⌟ ψ₊>`.
    pub fn r_of(&self, alpha: &[Form<S>]) -> Result<Bilinear<S>> {
        if alpha.len() != 6 {
            return Err(Su3Error::WrongRowCount {
                expected: 6,
                got: alpha.len(),
            });
        }
        let half = S::from_ratio(1, 2);
        let mut out = Bilinear::zero(&self.frame);
        for (i, row) in alpha.iter().enumerate() {
            for j in 0..6 {
                out.set(i, j, inner(row, &self.psi_rows[j])? * half.clone());
            }
        }
        Ok(out)
    }

    pub fn su3_project(&self, t: &SU3Torsion<S>) -> SU3Components<S> {
        let r = &t.r;
        let g = Bilinear::metric(&self.frame);
        let omega = self.omega_bilinear();
        let half = S::from_ratio(1, 2);
        let w1p = g.scale(&(r.trace() / S::from_int(6)));
        let w1m = omega.scale(&(r.inner(&omega).expect("frame") / omega.norm_sq()));
        let sym = r.symmetric_part();
        let skew = r.skew_part();
        let i_sym = sym.i_all(&self.cx).expect("frame");
        let i_skew = skew.i_all(&self.cx).expect("frame");
        let sym_inv = sym.add(&i_sym).expect("frame").scale(&half);
        let skew_inv = skew.add(&i_skew).expect("frame").scale(&half);
        SU3Components {
            w2p: sym_inv.sub(&w1p).expect("frame"),
            w2m: skew_inv.sub(&w1m).expect("frame"),
            w3: sym.sub(&i_sym).expect("frame").scale(&half),
            w4: skew.sub(&i_skew).expect("frame").scale(&half),
            w1p,
            w1m,
            w5: t.eta.clone(),
        }
    }

    pub fn su3_classify(&self, t: &SU3Torsion<S>) -> SU3Class<S> {
        self.su3_project(t).classify()
    }

    /// `d*ω(e_i) = Σ_{j,k} ψ₊(e_i, e_j, e_k) r(e_j, e_k)`; in the adapted frame this is
    /// the sum of `r_jk - r_kj` over pairs with `ψ₊(e_i, e_j, e_k) = 1`.
    pub fn dstar_omega(&self, r: &Bilinear<S>) -> Vector<S> {
        let coeffs = (0..6)
            .map(|i| {
                let mut acc = S::zero();
                for (blade, c) in self.psi_rows[i].terms() {
                    let mut it = blade.indices();
                    let (j, k) = (it.next().expect("2-blade"), it.next().expect("2-blade"));
                    acc = acc + c.clone() * (r.get(j, k).clone() - r.get(k, j).clone());
                }
                acc
            })
            .collect();
        Vector::from_coeffs(&self.frame, coeffs)
    }

    /// `ξ_X Y = -½ Σ r(X, e_i) ψ₊(e_i, e_j, Y) I e_j`.
    pub fn xi_su3(&self, r: &Bilinear<S>, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        let rx = r.left(x);
        let mut out = Vector::zero(&self.frame);
        for i in 0..6 {
            if rx.get(i).is_zero() {
                continue;
            }
            // (e_i ⌟ ψ₊)(e_j, Y) as a vector in j, i.e. -(Y ⌟ (e_i ⌟ ψ₊)).
            let row = contract(y, &self.psi_rows[i]).expect("frame");
            for j in 0..6 {
                let c = -row.eval_basis(&[j]);
                if c.is_zero() {
                    continue;
                }
                out = out
                    .add(&self.cx.apply_basis(j).scale(&(rx.get(i).clone() * c)))
                    .expect("frame");
            }
        }
        out.scale(&S::from_ratio(-1, 2))
    }

    /// `ξ_{e_i}` as an endomorphism (column `j` is `ξ_{e_i} e_j`).
    pub fn xi_endo(&self, r: &Bilinear<S>, i: usize) -> Bilinear<S> {
        let x = Vector::basis(&self.frame, i);
        let cols: Vec<Vector<S>> = (0..6)
            .map(|j| self.xi_su3(r, &x, &Vector::basis(&self.frame, j)))
            .collect();
        Bilinear::from_fn(&self.frame, |row, col| cols[col].get(row).clone())
    }

    /// `η_{e_i} = (Iη)(e_i) I`.
    pub fn eta_endo(&self, eta: &Vector<S>, i: usize) -> Bilinear<S> {
        let i_eta = self.apply_i(eta);
        self.cx.matrix().scale(i_eta.get(i))
    }

    /// `dω = a_ij e_i ∧ (e_j ⌟ ψ₊)`.
    pub fn domega_from_a(&self, a: &Bilinear<S>) -> Form<S> {
        let alpha = self.alpha6_from_a(a);
        let terms: Vec<Form<S>> = alpha
            .iter()
            .enumerate()
            .map(|(i, row)| wedge(&Form::basis(&self.frame, &[i]), row).expect("frame"))
            .collect();
        Form::sum(&self.frame, 3, &terms).expect("frame")
    }

    /// `((dψ₊)_ξ, (dψ₋)_ξ) = (-a_ij e_i∧e_j∧ω, -a_ij e_i∧Ie_j∧ω)`.
    pub fn dpsi_xi_from_a(&self, a: &Bilinear<S>) -> (Form<S>, Form<S>) {
        let mut plus = Form::zero(&self.frame, 2);
        let mut minus = Form::zero(&self.frame, 2);
        for i in 0..6 {
            let ei = Form::basis(&self.frame, &[i]);
            for j in 0..6 {
                let aij = a.get(i, j);
                if aij.is_zero() {
                    continue;
                }
                let ej = Form::basis(&self.frame, &[j]);
                let iej = self.cx.apply_basis(j).to_form();
                plus = plus.sub(&wedge(&ei, &ej).expect("frame").scale(aij)).expect("frame");
                minus = minus.sub(&wedge(&ei, &iej).expect("frame").scale(aij)).expect("frame");
            }
        }
        (
            wedge(&plus, &self.omega).expect("frame"),
            wedge(&minus, &self.omega).expect("frame"),
        )
    }

    /// `(dψ±)_{4,5} = -(3η + ½ I d*ω) ∧ ψ±`.
    pub fn d45_part(&self, eta: &Vector<S>, dstar_omega: &Vector<S>) -> (Form<S>, Form<S>) {
        let mu = eta
            .scale(&S::from_int(3))
            .add(&self.apply_i(dstar_omega).scale(&S::from_ratio(1, 2)))
            .expect("frame")
            .to_form()
            .neg();
        (
            wedge(&mu, &self.psi_plus).expect("frame"),
            wedge(&mu, &self.psi_minus).expect("frame"),
        )
    }

    /// Exterior data `(dω, dψ₊, dψ₋, d*ω)` of torsion `(a, η)`.
    pub fn exterior_from_torsion(&self, t: &SU3Torsion<S>) -> ExteriorData<S> {
        let (pxi, mxi) = self.dpsi_xi_from_a(&t.r);
        let three_eta = t.eta.scale(&S::from_int(3)).to_form();
        ExteriorData {
            domega: self.domega_from_a(&t.r),
            dpsi_plus: pxi.sub(&wedge(&three_eta, &self.psi_plus).expect("frame")).expect("frame"),
            dpsi_minus: mxi.sub(&wedge(&three_eta, &self.psi_minus).expect("frame")).expect("frame"),
            dstar_omega: self.dstar_omega(&t.r),
        }
    }

    /// The four expressions for `6η + I d*ω`.
    pub fn eta_expressions(&self, dpsi_plus: &Form<S>, dpsi_minus: &Form<S>) -> Result<[Vector<S>; 4]> {
        let star = |a: &Form<S>, b: &Form<S>| -> Result<Vector<S>> {
            Ok(Vector::from_form(&hodge(&wedge(&hodge(a), b)?))?)
        };
        Ok([
            star(dpsi_plus, &self.psi_plus)?,
            star(dpsi_minus, &self.psi_minus)?,
            self.apply_i(&star(dpsi_plus, &self.psi_minus)?).scale(&-S::one()),
            self.apply_i(&star(dpsi_minus, &self.psi_plus)?),
        ])
    }

    /// Recover `(r(ω), η)` from `dω`, `dψ±` and `d*ω`.
    pub fn torsion_from_exterior(&self, data: &ExteriorData<S>) -> Result<SU3Torsion<S>> {
        let exprs = self.eta_expressions(&data.dpsi_plus, &data.dpsi_minus)?;
        if exprs.iter().any(|e| *e != exprs[0]) {
            return Err(Su3Error::Inconsistent(
                "the four expressions for 6 eta + I d*omega disagree".into(),
            ));
        }
        let eta = exprs[0]
            .sub(&self.apply_i(&data.dstar_omega))?
            .scale(&S::from_ratio(1, 6));
        let three_eta = eta.scale(&S::from_int(3)).to_form();
        let pxi = data.dpsi_plus.add(&wedge(&three_eta, &self.psi_plus)?)?;
        let mxi = data.dpsi_minus.add(&wedge(&three_eta, &self.psi_minus)?)?;
        let r = self.r_from_exterior(&data.domega, &pxi, &mxi)?;
        if self.dstar_omega(&r) != data.dstar_omega {
            return Err(Su3Error::Inconsistent(
                "d*omega does not match the recovered r(omega)".into(),
            ));
        }
        Ok(SU3Torsion { r, eta })
    }

    /// `r(ω)` from `dω` and `(dψ±)_ξ`:
    /// `2 r(X,Y) = <X⌟dω, Y⌟ψ₊> - <(X∧Y)⌟(dψ₊)_ξ, ω> + <(IX∧Y)⌟(dψ₋)_ξ, ω>
    ///            - <dω, ψ₊> <X,Y> - <dω, ψ₋> ω(X,Y)`.
    pub fn r_from_exterior(&self, domega: &Form<S>, dpsi_plus_xi: &Form<S>, dpsi_minus_xi: &Form<S>) -> Result<Bilinear<S>> {
        let [t1, t2, t3] = self.r_pairings(domega, dpsi_plus_xi, dpsi_minus_xi)?;
        let trace_part = Bilinear::metric(&self.frame).scale(&inner(domega, &self.psi_plus)?);
        let omega_part = self.omega_bilinear().scale(&inner(domega, &self.psi_minus)?);
        let sum = t1.sub(&t2)?.add(&t3)?.sub(&trace_part)?.sub(&omega_part)?;
        Ok(sum.scale(&S::from_ratio(1, 2)))
    }

    /// The three pairings `<X⌟dω, Y⌟ψ₊>`, `<(X∧Y)⌟(dψ₊)_ξ, ω>`, `<(IX∧Y)⌟(dψ₋)_ξ, ω>`.
    pub fn r_pairings(&self, domega: &Form<S>, dpsi_plus_xi: &Form<S>, dpsi_minus_xi: &Form<S>) -> Result<[Bilinear<S>; 3]> {
        let mut out = [
            Bilinear::zero(&self.frame),
            Bilinear::zero(&self.frame),
            Bilinear::zero(&self.frame),
        ];
        for x in 0..6 {
            let ex = Vector::basis(&self.frame, x);
            let iex = self.cx.apply_basis(x);
            let x_domega = contract(&ex, domega)?;
            let x_plus = contract(&ex, dpsi_plus_xi)?;
            let ix_minus = contract(&iex, dpsi_minus_xi)?;
            for y in 0..6 {
                let ey = Vector::basis(&self.frame, y);
                out[0].set(x, y, inner(&x_domega, &self.psi_rows[y])?);
                out[1].set(x, y, inner(&contract(&ey, &x_plus)?, &self.omega)?);
                out[2].set(x, y, inner(&contract(&ey, &ix_minus)?, &self.omega)?);
            }
        }
        Ok(out)
    }

    /// `∇̃ = ∇ + η + ξ` applied to `(ω, ψ₊, ψ₋)` along each `e_i`, with `∇ω` from `r`
    /// and `∇ψ±` from the torsion identities; every entry vanishes.
    pub fn minimal_connection_residual(&self, t: &SU3Torsion<S>) -> Vec<[Form<S>; 3]> {
        let alpha = self.alpha6_from_a(&t.r);
        let half = S::from_ratio(1, 2);
        let three = S::from_int(3);
        let i_eta = self.apply_i(&t.eta);
        (0..6)
            .map(|i| {
                let nabla_omega = &alpha[i];
                // -ξ_X ψ₊ = ½ (e_j ⌟ ∇_X ω) ∧ (e_j ⌟ ψ₋), -ξ_X ψ₋ = -½ (e_j ⌟ ∇_X ω) ∧ (e_j ⌟ ψ₊)
                let mut xi_plus = Form::zero(&self.frame, 3);
                let mut xi_minus = Form::zero(&self.frame, 3);
                for j in 0..6 {
                    let a = contract_basis(j, nabla_omega).expect("frame");
                    xi_plus = xi_plus
                        .add(&wedge(&a, &contract_basis(j, &self.psi_minus).expect("frame")).expect("frame"))
                        .expect("frame");
                    xi_minus = xi_minus
                        .sub(&wedge(&a, &self.psi_rows[j]).expect("frame"))
                        .expect("frame");
                }
                let s = i_eta.get(i).clone() * three.clone();
                let nabla_plus = xi_plus.scale(&half).sub(&self.psi_minus.scale(&s)).expect("frame");
                let nabla_minus = xi_minus.scale(&half).add(&self.psi_plus.scale(&s)).expect("frame");
                let endo = self.xi_endo(&t.r, i).add(&self.eta_endo(&t.eta, i)).expect("frame");
                let act = |f: &Form<S>| endo_action(&endo, f).expect("frame");
                [
                    nabla_omega.add(&act(&self.omega)).expect("frame"),
                    nabla_plus.add(&act(&self.psi_plus)).expect("frame"),
                    nabla_minus.add(&act(&self.psi_minus)).expect("frame"),
                ]
            })
            .collect()
    }

    /// `Ξ±(∇ω)` rows: `±½ (e_j ⌟ ∇_{e_i} ω) ∧ (e_j ⌟ ψ∓)`.
    pub fn xi_maps(&self, a: &Bilinear<S>) -> (Vec<Form<S>>, Vec<Form<S>>) {
        let alpha = self.alpha6_from_a(a);
        let half = S::from_ratio(1, 2);
        let mut plus = Vec::with_capacity(6);
        let mut minus = Vec::with_capacity(6);
        for row in &alpha {
            let mut p = Form::zero(&self.frame, 3);
            let mut m = Form::zero(&self.frame, 3);
            for j in 0..6 {
                let c = contract_basis(j, row).expect("frame");
                p = p
                    .add(&wedge(&c, &contract_basis(j, &self.psi_minus).expect("frame")).expect("frame"))
                    .expect("frame");
                m = m.sub(&wedge(&c, &self.psi_rows[j]).expect("frame")).expect("frame");
            }
            plus.push(p.scale(&half));
            minus.push(m.scale(&half));
        }
        (plus, minus)
    }
}

/// Intrinsic SU(3)-torsion: `r(ω)` and the 1-form `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct SU3Torsion<S: Scalar> {
    pub r: Bilinear<S>,
    pub eta: Vector<S>,
}

/// Pointwise exterior data of an SU(3)-structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorData<S: Scalar> {
    pub domega: Form<S>,
    pub dpsi_plus: Form<S>,
    pub dpsi_minus: Form<S>,
    pub dstar_omega: Vector<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SU3Components<S: Scalar> {
    pub w1p: Bilinear<S>,
    pub w1m: Bilinear<S>,
    pub w2p: Bilinear<S>,
    pub w2m: Bilinear<S>,
    pub w3: Bilinear<S>,
    pub w4: Bilinear<S>,
    pub w5: Vector<S>,
}

impl<S: Scalar> SU3Components<S> {
    pub fn matrix_parts(&self) -> [&Bilinear<S>; 6] {
        [&self.w1p, &self.w1m, &self.w2p, &self.w2m, &self.w3, &self.w4]
    }

    pub fn recompose(&self) -> Bilinear<S> {
        let mut acc = self.w1p.clone();
        for part in &self.matrix_parts()[1..] {
            acc = acc.add(part).expect("frame");
        }
        acc
    }

    /// Squared norms; W5 uses `|3η|²`.
    pub fn norms_sq(&self) -> [S; 7] {
        let m = self.matrix_parts();
        let w5 = self.w5.scale(&S::from_int(3));
        [
            m[0].norm_sq(),
            m[1].norm_sq(),
            m[2].norm_sq(),
            m[3].norm_sq(),
            m[4].norm_sq(),
            m[5].norm_sq(),
            w5.dot(&w5).expect("frame"),
        ]
    }

    pub fn classify(&self) -> SU3Class<S> {
        let norms_sq = self.norms_sq();
        let types = Su3Type::ALL
            .into_iter()
            .zip(&norms_sq)
            .filter(|(_, n)| !n.is_zero())
            .map(|(t, _)| t)
            .collect();
        SU3Class { types, norms_sq }
    }
}

/// Gray–Hervella type with squared component norms (W5 as `|3η|²`).
#[derive(Debug, Clone, PartialEq)]
pub struct SU3Class<S: Scalar> {
    pub types: BTreeSet<Su3Type>,
    pub norms_sq: [S; 7],
}

impl<S: Scalar> SU3Class<S> {
    pub fn contains(&self, t: Su3Type) -> bool {
        self.types.contains(&t)
    }

    /// Vanishing intrinsic torsion.
    pub fn is_kaehler(&self) -> bool {
        self.types.is_empty()
    }

    /// Class is contained in `bound`.
    pub fn within(&self, bound: &[Su3Type]) -> bool {
        self.types.iter().all(|t| bound.contains(t))
    }

    pub fn label(&self) -> String {
        render_su3_class(&self.types)
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

    fn phases() -> Vec<Phase<Q>> {
        vec![Phase::zero(), Phase::half_pi(), Phase::new(q(3, 5), q(4, 5)).unwrap()]
    }

    #[test]
    fn phase_validation() {
        assert!(matches!(Phase::new(q(1, 2), q(1, 2)), Err(Su3Error::InvalidPhase(_))));
        assert_eq!(Phase::<Q>::zero().quarter_turn(), Phase::half_pi());
    }

    #[test]
    fn adapted_basis_values() {
        let s = SU3Structure::<Q>::standard(Phase::zero()).unwrap();
        assert_eq!(s.psi_plus().eval_basis(&[0, 1, 2]), q(1, 1));
        assert_eq!(s.psi_minus().eval_basis(&[0, 1, 2]), q(0, 1));
        let r = SU3Structure::<Q>::standard(Phase::half_pi()).unwrap();
        assert_eq!(r.psi_plus(), &s.psi_minus().neg());
        assert_eq!(r.psi_minus(), s.psi_plus());
    }

    #[test]
    fn identities_hold_for_all_phases() {
        for phase in phases() {
            let s = SU3Structure::<Q>::standard(phase).unwrap();
            for (name, ok) in s.identity_checks() {
                assert!(ok, "{name}");
            }
        }
    }

    #[test]
    fn signed_adapted_frame() {
        let fr = FrameSpace::standard(6);
        let adapted = [
            SignedIndex::plus(0),
            SignedIndex::plus(1),
            SignedIndex::plus(3),
            SignedIndex::plus(2),
            SignedIndex::minus(5),
            SignedIndex::minus(4),
        ];
        let s = SU3Structure::<Q>::new(&fr, adapted, Phase::zero()).unwrap();
        assert!(s.identity_checks().iter().all(|(_, ok)| *ok));
        let bad = [
            SignedIndex::plus(1),
            SignedIndex::plus(0),
            SignedIndex::plus(2),
            SignedIndex::plus(3),
            SignedIndex::plus(4),
            SignedIndex::plus(5),
        ];
        assert_eq!(
            SU3Structure::<Q>::new(&fr, bad, Phase::zero()).unwrap_err(),
            Su3Error::WrongOrientation
        );
    }

    #[test]
    fn projection_examples() {
        let p = Phase::new(q(3, 5), q(4, 5)).unwrap();
        let s = SU3Structure::<Q>::standard(p).unwrap();
        let g = Bilinear::metric(s.frame());
        let eta = Vector::zero(s.frame());
        let t = SU3Torsion {
            r: g.scale(&q(3, 5)).add(&s.omega_bilinear().scale(&q(4, 5))).unwrap(),
            eta,
        };
        let c = s.su3_project(&t);
        assert_eq!(c.recompose(), t.r);
        assert_eq!(c.classify().types, BTreeSet::from([Su3Type::W1Plus, Su3Type::W1Minus]));
        assert!(s.dstar_omega(&t.r).is_zero());
    }

    #[test]
    fn s6_exterior_data() {
        let s = SU3Structure::<Q>::standard(Phase::zero()).unwrap();
        let id = Bilinear::metric(s.frame());
        assert_eq!(s.domega_from_a(&id), s.psi_plus().scale(&q(3, 1)));
        let (p, m) = s.dpsi_xi_from_a(&id);
        assert!(p.is_zero());
        assert_eq!(m, wedge(s.omega(), s.omega()).unwrap().scale(&q(2, 1)));
    }

    fn sample(s: &SU3Structure<Q>, seed: i64) -> SU3Torsion<Q> {
        let r = Bilinear::from_fn(s.frame(), |i, j| q(((i as i64 * 7 + j as i64 * 3 + seed * 11) % 7) - 3, 1 + (i + j) as i64 % 3));
        let eta = Vector::from_coeffs(s.frame(), (0..6).map(|k| q(((k as i64 + seed) % 5) - 2, 2)).collect());
        SU3Torsion { r, eta }
    }

    #[test]
    fn torsion_roundtrip_through_exterior_data() {
        for phase in phases() {
            let s = SU3Structure::<Q>::standard(phase).unwrap();
            for seed in 0..3 {
                let t = sample(&s, seed);
                let data = s.exterior_from_torsion(&t);
                assert_eq!(s.torsion_from_exterior(&data).unwrap(), t);
            }
        }
    }

    #[test]
    fn s6_recovery() {
        let s = SU3Structure::<Q>::standard(Phase::zero()).unwrap();
        let om2 = wedge(s.omega(), s.omega()).unwrap();
        let data = ExteriorData {
            domega: s.psi_plus().scale(&q(3, 1)),
            dpsi_plus: Form::zero(s.frame(), 4),
            dpsi_minus: om2.scale(&q(2, 1)),
            dstar_omega: Vector::zero(s.frame()),
        };
        let t = s.torsion_from_exterior(&data).unwrap();
        assert_eq!(t.r, Bilinear::metric(s.frame()));
        assert!(t.eta.is_zero());
    }

    #[test]
    fn s6_quarter_turn_data() {
        // Same geometry as θ = 0 seen through the rotated forms: r = ω.
        let s = SU3Structure::<Q>::standard(Phase::half_pi()).unwrap();
        let om2 = wedge(s.omega(), s.omega()).unwrap();
        assert_eq!(s.dpsi_xi_from_a(&s.omega_bilinear()), (om2.scale(&q(-2, 1)), Form::zero(s.frame(), 4)));
        let data = ExteriorData {
            domega: s.psi_minus().scale(&q(3, 1)),
            dpsi_plus: om2.scale(&q(-2, 1)),
            dpsi_minus: Form::zero(s.frame(), 4),
            dstar_omega: Vector::zero(s.frame()),
        };
        assert_eq!(s.torsion_from_exterior(&data).unwrap().r, s.omega_bilinear());
    }

    #[test]
    fn pairings_per_component() {
        // 2a = T1 - T2 + T3 on W2±, W3, W4; the W1 parts need the trace corrections.
        let s = SU3Structure::<Q>::standard(Phase::zero()).unwrap();
        let g = Bilinear::metric(s.frame());
        let (p, m) = s.dpsi_xi_from_a(&g);
        let [t1, t2, t3] = s.r_pairings(&s.domega_from_a(&g), &p, &m).unwrap();
        assert_eq!(t1.sub(&t2).unwrap().add(&t3).unwrap(), g.scale(&q(14, 1)));
    }

    #[test]
    fn inconsistent_eta_is_rejected() {
        let s = SU3Structure::<Q>::standard(Phase::zero()).unwrap();
        let mut data = s.exterior_from_torsion(&sample(&s, 1));
        data.dpsi_minus = Form::zero(s.frame(), 4);
        assert!(matches!(s.torsion_from_exterior(&data), Err(Su3Error::Inconsistent(_))));
    }

    #[test]
    fn minimal_connection_annihilates_structure() {
        for phase in phases() {
            let s = SU3Structure::<Q>::standard(phase).unwrap();
            let t = sample(&s, 2);
            for row in s.minimal_connection_residual(&t) {
                assert!(row.iter().all(Form::is_zero));
            }
        }
    }

    #[test]
    fn r_map_roundtrip() {
        let s = SU3Structure::<Q>::standard(Phase::new(q(3, 5), q(-4, 5)).unwrap()).unwrap();
        let t = sample(&s, 4);
        assert_eq!(s.r_of(&s.alpha6_from_a(&t.r)).unwrap(), t.r);
    }

    #[test]
    fn d45_matches_eta_expressions() {
        let s = SU3Structure::<Q>::standard(Phase::zero()).unwrap();
        let t = sample(&s, 0);
        let (p, _) = s.d45_part(&t.eta, &s.dstar_omega(&t.r));
        let six_eta_plus = t.eta.scale(&q(6, 1)).add(&s.apply_i(&s.dstar_omega(&t.r))).unwrap();
        let exprs = s.eta_expressions(&p, &s.d45_part(&t.eta, &s.dstar_omega(&t.r)).1).unwrap();
        assert!(exprs.iter().all(|e| *e == six_eta_plus));
    }

    #[test]
    fn xi_matches_nabla_omega_form() {
        // ξ_X Y = -½ (∇_X ω)(e_j, Y) I e_j
        let s = SU3Structure::<Q>::standard(Phase::zero()).unwrap();
        let t = sample(&s, 3);
        let alpha = s.alpha6_from_a(&t.r);
        for x in 0..6 {
            for y in 0..6 {
                let mut expected = Vector::zero(s.frame());
                for j in 0..6 {
                    let c = alpha[x].eval_basis(&[j, y]);
                    expected = expected.add(&s.complex_structure().apply_basis(j).scale(&c)).unwrap();
                }
                let got = s.xi_su3(&t.r, &Vector::basis(s.frame(), x), &Vector::basis(s.frame(), y));
                assert_eq!(got, expected.scale(&q(-1, 2)));
            }
        }
    }
}

