//! Graded exterior algebra over an oriented orthonormal frame.
//!
//! Forms are stored sparsely, keyed by [`Blade`] (a strictly increasing index
//! tuple packed into a bitmask). The Hodge star is fixed by
//! `a ∧ *b = <a, b> Vol` with `Vol = e_0 ∧ … ∧ e_{n-1}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::scalar::Scalar;

/// Largest supported frame dimension (blades are packed into a `u16`).
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("frame mismatch: {left} vs {right}")]
    FrameMismatch { left: String, right: String },
    #[error("cannot contract a 0-form")]
    GradeUnderflow,
    #[error("grade mismatch: {left} vs {right}")]
    GradeMismatch { left: usize, right: usize },
    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),
    #[error("tensor is not alternating")]
    NotAlternating,
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
}

pub type Result<T> = std::result::Result<T, ExteriorError>;

/// An oriented orthonormal frame: the listed order is the orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrameSpace {
    labels: Vec<String>,
}

impl FrameSpace {
    pub fn new<I, L>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = L>,
        L: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_DIM {
            return Err(ExteriorError::InvalidFrame(format!(
                "dimension {} outside 1..={MAX_DIM}",
                labels.len()
            )));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(ExteriorError::InvalidFrame("empty label".into()));
            }
            if labels[..i].contains(label) {
                return Err(ExteriorError::InvalidFrame(format!("duplicate label {label}")));
            }
        }
        Ok(Arc::new(Self { labels }))
    }

    /// Frame `e0 … e{n-1}`.
    pub fn standard(n: usize) -> Arc<Self> {
        Self::new((0..n).map(|i| format!("e{i}"))).expect("standard frame is valid")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

pub(crate) fn check_frames(a: &Arc<FrameSpace>, b: &Arc<FrameSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(ExteriorError::FrameMismatch {
            left: a.labels.join(" "),
            right: b.labels.join(" "),
        })
    }
}

/// A strictly increasing index tuple, packed as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(u16);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_mask(mask: u16) -> Self {
        Blade(mask)
    }

    /// Sort `indices` into a blade, returning the permutation sign, or `None`
    /// when an index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<(Blade, i32)> {
        let mut mask = 0u16;
        let mut sign = 1;
        for &i in indices {
            debug_assert!(i < MAX_DIM);
            let bit = 1u16 << i;
            if mask & bit != 0 {
                return None;
            }
            // Each already-placed index above `i` is one transposition.
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Some((Blade(mask), sign))
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..MAX_DIM).filter(move |i| mask & (1 << i) != 0)
    }

    /// Sign of `e_self ∧ e_other`, or `None` when they share an index.
    pub fn wedge_sign(self, other: Blade) -> Option<i32> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let swaps: u32 = other.indices().map(|j| (self.0 >> (j + 1)).count_ones()).sum();
        Some(if swaps % 2 == 0 { 1 } else { -1 })
    }

    /// Sign of `e_k ⌟ e_self` (the index must be present).
    fn contract_sign(self, k: usize) -> i32 {
        let below = (self.0 & ((1u16 << k) - 1)).count_ones();
        if below % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn without(self, k: usize) -> Blade {
        Blade(self.0 & !(1 << k))
    }

    fn complement(self, n: usize) -> Blade {
        let full = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
        Blade(full & !self.0)
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A frame direction `±e_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedIndex {
    pub index: usize,
    pub negative: bool,
}

impl SignedIndex {
    pub fn plus(index: usize) -> Self {
        Self { index, negative: false }
    }

    pub fn minus(index: usize) -> Self {
        Self { index, negative: true }
    }

    pub fn neg(self) -> Self {
        Self {
            index: self.index,
            negative: !self.negative,
        }
    }

    pub fn sign<S: Scalar>(self) -> S {
        if self.negative {
            -S::one()
        } else {
            S::one()
        }
    }

    pub fn render(self, frame: &FrameSpace) -> String {
        format!("{}{}", if self.negative { "-" } else { "+" }, frame.label(self.index))
    }
}

/// A dense vector, identified with its dual 1-form.
#[derive(Debug, Clone)]
pub struct Vector<S: Scalar> {
    frame: Arc<FrameSpace>,
    coeffs: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn zero(frame: &Arc<FrameSpace>) -> Self {
        Self {
            frame: frame.clone(),
            coeffs: vec![S::zero(); frame.dim()],
        }
    }

    pub fn basis(frame: &Arc<FrameSpace>, i: usize) -> Self {
        let mut v = Self::zero(frame);
        v.coeffs[i] = S::one();
        v
    }

    pub fn signed_basis(frame: &Arc<FrameSpace>, e: SignedIndex) -> Self {
        let mut v = Self::zero(frame);
        v.coeffs[e.index] = e.sign();
        v
    }

    pub fn from_coeffs(frame: &Arc<FrameSpace>, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), frame.dim(), "vector length must match frame");
        Self {
            frame: frame.clone(),
            coeffs,
        }
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn get(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            frame: self.frame.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        check_frames(&self.frame, &other.frame)?;
        Ok(Self {
            frame: self.frame.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.clone() - b.clone())
    }

    pub fn dot(&self, other: &Self) -> Result<S> {
        check_frames(&self.frame, &other.frame)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    pub fn to_form(&self) -> Form<S> {
        let mut form = Form::zero(&self.frame, 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            form.add_term(Blade(1 << i), c.clone());
        }
        form
    }

    pub fn from_form(form: &Form<S>) -> Result<Self> {
        if form.grade != 1 {
            return Err(ExteriorError::GradeMismatch {
                left: form.grade,
                right: 1,
            });
        }
        let mut v = Self::zero(&form.frame);
        for (blade, c) in &form.terms {
            let i = blade.indices().next().expect("grade-1 blade");
            v.coeffs[i] = c.clone();
        }
        Ok(v)
    }
}

impl<S: Scalar> PartialEq for Vector<S> {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

/// A grade-`p` alternating form with sparse canonical coefficients.
#[derive(Debug, Clone)]
pub struct Form<S: Scalar> {
    frame: Arc<FrameSpace>,
    grade: usize,
    terms: BTreeMap<Blade, S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(frame: &Arc<FrameSpace>, grade: usize) -> Self {
        Self {
            frame: frame.clone(),
            grade,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(frame: &Arc<FrameSpace>, value: S) -> Self {
        let mut f = Self::zero(frame, 0);
        f.add_term(Blade::EMPTY, value);
        f
    }

    /// `coeff · e_{i_1} ∧ … ∧ e_{i_p}` for an arbitrary index order.
    pub fn monomial(frame: &Arc<FrameSpace>, indices: &[usize], coeff: S) -> Self {
        let mut f = Self::zero(frame, indices.len());
        assert!(indices.iter().all(|&i| i < frame.dim()), "index out of frame");
        if let Some((blade, sign)) = Blade::from_indices(indices) {
            f.add_term(blade, if sign < 0 { -coeff } else { coeff });
        }
        f
    }

    pub fn basis(frame: &Arc<FrameSpace>, indices: &[usize]) -> Self {
        Self::monomial(frame, indices, S::one())
    }

    pub fn volume(frame: &Arc<FrameSpace>) -> Self {
        let all: Vec<usize> = (0..frame.dim()).collect();
        Self::basis(frame, &all)
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Scalar::is_zero)
    }

    /// Coefficient of a sorted blade.
    pub fn coeff(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    /// `self(e_{i_1}, …, e_{i_p})` for any index order.
    pub fn eval_basis(&self, indices: &[usize]) -> S {
        debug_assert_eq!(indices.len(), self.grade);
        match Blade::from_indices(indices) {
            Some((blade, sign)) => {
                let c = self.coeff(blade);
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
            None => S::zero(),
        }
    }

    /// Full evaluation on `p` vectors.
    pub fn eval(&self, vectors: &[&Vector<S>]) -> Result<S> {
        if vectors.len() != self.grade {
            return Err(ExteriorError::GradeMismatch {
                left: self.grade,
                right: vectors.len(),
            });
        }
        let mut current = self.clone();
        for v in vectors {
            current = contract(v, &current)?;
        }
        Ok(current.coeff(Blade::EMPTY))
    }

    fn add_term(&mut self, blade: Blade, value: S) {
        debug_assert_eq!(blade.grade(), self.grade);
        if value.is_zero() {
            return;
        }
        match self.terms.get_mut(&blade) {
            Some(existing) => {
                let sum = existing.clone() + value;
                if sum.is_zero() {
                    self.terms.remove(&blade);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(blade, value);
            }
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(&self.frame, self.grade);
        for (b, c) in &self.terms {
            out.add_term(*b, c.clone() * s.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_frames(&self.frame, &other.frame)?;
        if self.grade != other.grade {
            return Err(ExteriorError::GradeMismatch {
                left: self.grade,
                right: other.grade,
            });
        }
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Sum of forms of one grade; `grade` fixes the result for an empty iterator.
    pub fn sum<'a>(frame: &Arc<FrameSpace>, grade: usize, forms: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut acc = Self::zero(frame, grade);
        for f in forms {
            acc = acc.add(f)?;
        }
        Ok(acc)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        wedge(self, other)
    }

    pub fn hodge(&self) -> Self {
        hodge(self)
    }

    /// Reinterpret the coefficients over another frame of the same dimension.
    pub fn relabel(&self, frame: &Arc<FrameSpace>) -> Self {
        assert_eq!(frame.dim(), self.dim());
        Self {
            frame: frame.clone(),
            grade: self.grade,
            terms: self.terms.clone(),
        }
    }

    pub(crate) fn from_parts(frame: &Arc<FrameSpace>, grade: usize, terms: impl IntoIterator<Item = (Blade, S)>) -> Self {
        let mut f = Self::zero(frame, grade);
        for (b, c) in terms {
            f.add_term(b, c);
        }
        f
    }
}

impl<S: Scalar> PartialEq for Form<S> {
    fn eq(&self, other: &Self) -> bool {
        self.grade == other.grade && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (blade, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let name: Vec<&str> = blade.indices().map(|i| self.frame.label(i)).collect();
            if name.is_empty() {
                write!(f, "{}", c.render())?;
            } else {
                write!(f, "{} {}", c.render(), name.join("^"))?;
            }
        }
        Ok(())
    }
}

/// Exterior product.
pub fn wedge<S: Scalar>(a: &Form<S>, b: &Form<S>) -> Result<Form<S>> {
    check_frames(&a.frame, &b.frame)?;
    let mut out = Form::zero(&a.frame, a.grade + b.grade);
    if a.grade + b.grade > a.dim() {
        return Ok(out);
    }
    for (ba, ca) in &a.terms {
        for (bb, cb) in &b.terms {
            if let Some(sign) = ba.wedge_sign(*bb) {
                let prod = ca.clone() * cb.clone();
                out.add_term(Blade(ba.0 | bb.0), if sign < 0 { -prod } else { prod });
            }
        }
    }
    Ok(out)
}

/// Interior product `x ⌟ a`, i.e. `(x⌟a)(v_2, …) = a(x, v_2, …)`.
pub fn contract<S: Scalar>(x: &Vector<S>, a: &Form<S>) -> Result<Form<S>> {
    check_frames(&x.frame, &a.frame)?;
    if a.grade == 0 {
        return Err(ExteriorError::GradeUnderflow);
    }
    let mut out = Form::zero(&a.frame, a.grade - 1);
    for (k, xk) in x.coeffs.iter().enumerate() {
        if xk.is_zero() {
            continue;
        }
        for (blade, c) in &a.terms {
            if blade.contains(k) {
                let v = xk.clone() * c.clone();
                out.add_term(blade.without(k), if blade.contract_sign(k) < 0 { -v } else { v });
            }
        }
    }
    Ok(out)
}

/// `e_k ⌟ a`.
pub fn contract_basis<S: Scalar>(k: usize, a: &Form<S>) -> Result<Form<S>> {
    contract(&Vector::basis(&a.frame, k), a)
}

/// Induced inner product: sorted monomials are orthonormal.
pub fn inner<S: Scalar>(a: &Form<S>, b: &Form<S>) -> Result<S> {
    check_frames(&a.frame, &b.frame)?;
    if a.grade != b.grade {
        return Err(ExteriorError::GradeMismatch {
            left: a.grade,
            right: b.grade,
        });
    }
    let mut acc = S::zero();
    for (blade, ca) in &a.terms {
        if let Some(cb) = b.terms.get(blade) {
            acc = acc + ca.clone() * cb.clone();
        }
    }
    Ok(acc)
}

/// Hodge star with `a ∧ *b = <a, b> Vol`.
pub fn hodge<S: Scalar>(a: &Form<S>) -> Form<S> {
    let n = a.dim();
    let mut out = Form::zero(&a.frame, n - a.grade);
    for (blade, c) in &a.terms {
        let comp = blade.complement(n);
        let sign = blade.wedge_sign(comp).expect("complement is disjoint");
        out.add_term(comp, if sign < 0 { -c.clone() } else { c.clone() });
    }
    out
}

/// Action of an endomorphism `m` (column `j` is `m e_j`) on a form as a derivation:
/// `(m·a)(v_1, …, v_p) = -Σ_s a(…, m v_s, …)`.
pub fn endo_action<S: Scalar>(m: &Bilinear<S>, a: &Form<S>) -> Result<Form<S>> {
    check_frames(m.frame(), &a.frame)?;
    let n = a.dim();
    let mut out = Form::zero(&a.frame, a.grade);
    for (blade, c) in &a.terms {
        let idx: Vec<usize> = blade.indices().collect();
        for slot in 0..idx.len() {
            // m·e^k = -Σ_j m[k][j] e^j
            let k = idx[slot];
            for j in 0..n {
                let mkj = m.get(k, j);
                if mkj.is_zero() {
                    continue;
                }
                let mut replaced = idx.clone();
                replaced[slot] = j;
                if let Some((b, sign)) = Blade::from_indices(&replaced) {
                    let v = -(c.clone() * mkj.clone());
                    out.add_term(b, if sign < 0 { -v } else { v });
                }
            }
        }
    }
    Ok(out)
}

/// An n×n covariant 2-tensor; row index is the first slot.
#[derive(Debug, Clone)]
pub struct Bilinear<S: Scalar> {
    frame: Arc<FrameSpace>,
    entries: Vec<S>,
}

impl<S: Scalar> Bilinear<S> {
    pub fn zero(frame: &Arc<FrameSpace>) -> Self {
        let n = frame.dim();
        Self {
            frame: frame.clone(),
            entries: vec![S::zero(); n * n],
        }
    }

    /// The metric `<·,·>`.
    pub fn metric(frame: &Arc<FrameSpace>) -> Self {
        Self::from_fn(frame, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(frame: &Arc<FrameSpace>, f: impl Fn(usize, usize) -> S) -> Self {
        let n = frame.dim();
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self {
            frame: frame.clone(),
            entries,
        }
    }

    pub fn from_rows(frame: &Arc<FrameSpace>, rows: &[Vec<S>]) -> Self {
        let n = frame.dim();
        assert!(rows.len() == n && rows.iter().all(|r| r.len() == n), "matrix must be {n}x{n}");
        Self::from_fn(frame, |i, j| rows[i][j].clone())
    }

    /// `b(x, y) = a(x, y)` for a 2-form `a`.
    pub fn from_two_form(a: &Form<S>) -> Result<Self> {
        if a.grade != 2 {
            return Err(ExteriorError::GradeMismatch {
                left: a.grade,
                right: 2,
            });
        }
        Ok(Self::from_fn(&a.frame, |i, j| a.eval_basis(&[i, j])))
    }

    /// The 2-form `Σ_{i<j} b_ij e_i∧e_j`; fails unless `b` is skew.
    pub fn to_two_form(&self) -> Result<Form<S>> {
        if !self.is_skew() {
            return Err(ExteriorError::NotAlternating);
        }
        let n = self.dim();
        let mut f = Form::zero(&self.frame, 2);
        for i in 0..n {
            for j in (i + 1)..n {
                f.add_term(Blade((1 << i) | (1 << j)), self.get(i, j).clone());
            }
        }
        Ok(f)
    }

    /// `u ⊗ v`.
    pub fn outer(u: &Vector<S>, v: &Vector<S>) -> Result<Self> {
        check_frames(&u.frame, &v.frame)?;
        Ok(Self::from_fn(&u.frame, |i, j| u.coeffs[i].clone() * v.coeffs[j].clone()))
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        let n = self.dim();
        self.entries[i * n + j] = value;
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.entries.chunks(self.dim()).map(<[S]>::to_vec).collect()
    }

    pub fn apply(&self, x: &Vector<S>, y: &Vector<S>) -> S {
        let n = self.dim();
        let mut acc = S::zero();
        for i in 0..n {
            if x.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n {
                acc = acc + x.coeffs[i].clone() * self.get(i, j).clone() * y.coeffs[j].clone();
            }
        }
        acc
    }

    /// The 1-form `b(x, ·)` as a vector.
    pub fn left(&self, x: &Vector<S>) -> Vector<S> {
        let n = self.dim();
        Vector::from_coeffs(
            &self.frame,
            (0..n)
                .map(|j| (0..n).fold(S::zero(), |acc, i| acc + x.coeffs[i].clone() * self.get(i, j).clone()))
                .collect(),
        )
    }

    /// The 1-form `b(·, y)` as a vector.
    pub fn right(&self, y: &Vector<S>) -> Vector<S> {
        self.transpose().left(y)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            frame: self.frame.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        check_frames(&self.frame, &other.frame)?;
        Ok(Self {
            frame: self.frame.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.frame, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> S {
        (0..self.dim()).fold(S::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Entrywise inner product `Σ b_ij c_ij`.
    pub fn inner(&self, other: &Self) -> Result<S> {
        check_frames(&self.frame, &other.frame)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self).expect("same frame")
    }

    pub fn symmetric_part(&self) -> Self {
        let half = S::from_ratio(1, 2);
        self.add(&self.transpose()).expect("same frame").scale(&half)
    }

    pub fn skew_part(&self) -> Self {
        let half = S::from_ratio(1, 2);
        self.sub(&self.transpose()).expect("same frame").scale(&half)
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub(&self.transpose()).expect("same frame").is_zero()
    }

    pub fn is_skew(&self) -> bool {
        self.add(&self.transpose()).expect("same frame").is_zero()
    }

    /// `I_(slot) b` with `slot ∈ {1, 2}`.
    pub fn i_slot(&self, cx: &ComplexStructure<S>, slot: usize) -> Result<Self> {
        Ok(Tensor::from_bilinear(self).i_slot(cx, slot)?.to_bilinear())
    }

    /// `I b (x, y) = b(Ix, Iy)`.
    pub fn i_all(&self, cx: &ComplexStructure<S>) -> Result<Self> {
        Ok(Tensor::from_bilinear(self).i_all(cx)?.to_bilinear())
    }

    /// Matrix product `self · other` (as endomorphism matrices).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_frames(&self.frame, &other.frame)?;
        let n = self.dim();
        Ok(Self::from_fn(&self.frame, |i, j| {
            (0..n).fold(S::zero(), |acc, k| acc + self.get(i, k).clone() * other.get(k, j).clone())
        }))
    }

    pub fn relabel(&self, frame: &Arc<FrameSpace>) -> Self {
        assert_eq!(frame.dim(), self.dim());
        Self {
            frame: frame.clone(),
            entries: self.entries.clone(),
        }
    }
}

impl<S: Scalar> PartialEq for Bilinear<S> {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

/// Orthogonal almost-complex structure. Column `j` of the matrix is `I e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure<S: Scalar> {
    matrix: Bilinear<S>,
}

impl<S: Scalar> ComplexStructure<S> {
    pub fn new(matrix: Bilinear<S>) -> Result<Self> {
        let n = matrix.dim();
        let square = matrix.matmul(&matrix)?;
        let minus_id = Bilinear::metric(matrix.frame()).scale(&-S::one());
        if square != minus_id {
            return Err(ExteriorError::InvalidComplexStructure("I^2 != -Id".into()));
        }
        if n % 2 != 0 {
            return Err(ExteriorError::InvalidComplexStructure("odd dimension".into()));
        }
        if !matrix.is_skew() {
            // Skew together with I^2 = -Id is orthogonality.
            return Err(ExteriorError::InvalidComplexStructure("I is not orthogonal".into()));
        }
        Ok(Self { matrix })
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        self.matrix.frame()
    }

    pub fn matrix(&self) -> &Bilinear<S> {
        &self.matrix
    }

    pub fn apply(&self, x: &Vector<S>) -> Vector<S> {
        let n = self.matrix.dim();
        Vector::from_coeffs(
            self.frame(),
            (0..n)
                .map(|i| (0..n).fold(S::zero(), |acc, j| acc + self.matrix.get(i, j).clone() * x.coeffs[j].clone()))
                .collect(),
        )
    }

    /// `I e_j`.
    pub fn apply_basis(&self, j: usize) -> Vector<S> {
        let n = self.matrix.dim();
        Vector::from_coeffs(self.frame(), (0..n).map(|i| self.matrix.get(i, j).clone()).collect())
    }

    /// Kähler form as a bilinear form, `ω(x, y) = <x, Iy>`.
    pub fn omega_bilinear(&self) -> Bilinear<S> {
        self.matrix.clone()
    }

    pub fn omega(&self) -> Form<S> {
        self.matrix.to_two_form().expect("orthogonal I is skew")
    }
}

/// Dense covariant `(0,s)`-tensor.
#[derive(Debug, Clone)]
pub struct Tensor<S: Scalar> {
    frame: Arc<FrameSpace>,
    order: usize,
    data: Vec<S>,
}

impl<S: Scalar> Tensor<S> {
    fn offset(&self, idx: &[usize]) -> usize {
        let n = self.frame.dim();
        idx.iter().fold(0, |acc, &i| acc * n + i)
    }

    fn multi_indices(n: usize, order: usize) -> impl Iterator<Item = Vec<usize>> {
        (0..n.pow(order as u32)).map(move |mut k| {
            let mut idx = vec![0; order];
            for slot in (0..order).rev() {
                idx[slot] = k % n;
                k /= n;
            }
            idx
        })
    }

    pub fn from_form(a: &Form<S>) -> Self {
        let n = a.dim();
        let data = Self::multi_indices(n, a.grade).map(|idx| a.eval_basis(&idx)).collect();
        Self {
            frame: a.frame.clone(),
            order: a.grade,
            data,
        }
    }

    pub fn from_bilinear(b: &Bilinear<S>) -> Self {
        Self {
            frame: b.frame.clone(),
            order: 2,
            data: b.entries.clone(),
        }
    }

    pub fn to_bilinear(&self) -> Bilinear<S> {
        assert_eq!(self.order, 2);
        Bilinear {
            frame: self.frame.clone(),
            entries: self.data.clone(),
        }
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.data[self.offset(idx)]
    }

    /// Back to a form; fails unless the tensor is alternating.
    pub fn to_form(&self) -> Result<Form<S>> {
        let n = self.frame.dim();
        let mut terms = Vec::new();
        for idx in Self::multi_indices(n, self.order) {
            let value = self.get(&idx).clone();
            match Blade::from_indices(&idx) {
                None => {
                    if !value.is_zero() {
                        return Err(ExteriorError::NotAlternating);
                    }
                }
                Some((blade, sign)) => {
                    let sorted: Vec<usize> = blade.indices().collect();
                    let reference = self.get(&sorted).clone();
                    let expected = if sign < 0 { -reference.clone() } else { reference.clone() };
                    if !(value.clone() - expected).is_zero() {
                        return Err(ExteriorError::NotAlternating);
                    }
                    if sign > 0 && idx == sorted {
                        terms.push((blade, reference));
                    }
                }
            }
        }
        Ok(Form::from_parts(&self.frame, self.order, terms))
    }

    /// `(I_(slot) b)(…, X_slot, …) = -b(…, I X_slot, …)`, slots numbered from 1.
    pub fn i_slot(&self, cx: &ComplexStructure<S>, slot: usize) -> Result<Self> {
        check_frames(&self.frame, cx.frame())?;
        assert!(slot >= 1 && slot <= self.order, "slot out of range");
        let n = self.frame.dim();
        let m = cx.matrix();
        let mut data = Vec::with_capacity(self.data.len());
        for idx in Self::multi_indices(n, self.order) {
            let j = idx[slot - 1];
            let mut acc = S::zero();
            let mut probe = idx.clone();
            for k in 0..n {
                let coeff = m.get(k, j);
                if coeff.is_zero() {
                    continue;
                }
                probe[slot - 1] = k;
                acc = acc + coeff.clone() * self.get(&probe).clone();
            }
            data.push(-acc);
        }
        Ok(Self {
            frame: self.frame.clone(),
            order: self.order,
            data,
        })
    }

    /// `(I b)(X_1, …, X_s) = (-1)^s b(IX_1, …, IX_s)`.
    pub fn i_all(&self, cx: &ComplexStructure<S>) -> Result<Self> {
        // Each I_(i) contributes a factor -1, so the product over all slots is
        // exactly (-1)^s b(IX_1, …, IX_s).
        let mut t = self.clone();
        for slot in 1..=self.order {
            t = t.i_slot(cx, slot)?;
        }
        Ok(t)
    }
}

impl<S: Scalar> PartialEq for Tensor<S> {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame
            && self.order == other.order
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b))
    }
}

/// `I_(slot)` applied to a form, returned as a form (fails if the result is not alternating).
pub fn islot_form<S: Scalar>(a: &Form<S>, cx: &ComplexStructure<S>, slot: usize) -> Result<Form<S>> {
    Tensor::from_form(a).i_slot(cx, slot)?.to_form()
}

/// `I` applied to all slots of a form.
pub fn iall_form<S: Scalar>(a: &Form<S>, cx: &ComplexStructure<S>) -> Result<Form<S>> {
    Tensor::from_form(a).i_all(cx)?.to_form()
}

/// Decomposition of a bilinear form relative to an almost-complex structure.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearSplit<S: Scalar> {
    pub sym: Bilinear<S>,
    pub skew: Bilinear<S>,
    pub trace: S,
    /// `<b, ω> / <ω, ω>`.
    pub omega_component: S,
    pub i_invariant: Bilinear<S>,
    pub i_anti_invariant: Bilinear<S>,
}

pub fn bilinear_split<S: Scalar>(b: &Bilinear<S>, cx: &ComplexStructure<S>) -> Result<BilinearSplit<S>> {
    check_frames(b.frame(), cx.frame())?;
    let omega = cx.omega_bilinear();
    let ib = b.i_all(cx)?;
    let half = S::from_ratio(1, 2);
    Ok(BilinearSplit {
        sym: b.symmetric_part(),
        skew: b.skew_part(),
        trace: b.trace(),
        omega_component: b.inner(&omega)? / omega.norm_sq(),
        i_invariant: b.add(&ib)?.scale(&half),
        i_anti_invariant: b.sub(&ib)?.scale(&half),
    })
}
