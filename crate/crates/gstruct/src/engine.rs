//! Runs a parsed manifest through the G2 → hypersurface pipeline.

use std::collections::BTreeMap;
use std::sync::Arc;

use gstruct_core::exterior::{Bilinear, Form, FrameSpace, Vector};
use gstruct_core::framegeom::{nabla_phi, slice, CoframeDGA, HypersurfaceSlice, TangentFrame};
use gstruct_core::g2::{G2Structure, G2Type, TorsionMatrix7};
use gstruct_core::pipeline::{self, classify_hypersurface, AmbientData};
use gstruct_core::scalar::{Float, Rational, Scalar};
use gstruct_core::su3::{Phase, Su3Type};
use thiserror::Error;

use crate::manifest::{Coef, HypersurfaceSpec, Injection, Manifest, Term, ThetaSpec};
use crate::report::{self, AmbientReport, ManifoldReport, Predicates, Report, Residuals, RuleCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

/// Inconsistent geometry or induction, with the manifold and hypersurface it concerns.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{context}: {message}")]
pub struct RunError {
    pub context: String,
    pub message: String,
}

fn fail(context: &str, message: impl ToString) -> RunError {
    RunError { context: context.to_string(), message: message.to_string() }
}

pub fn run(manifests: &[Manifest], backend: Backend) -> Result<Report, RunError> {
    let mut report = Report::new(backend.name());
    for m in manifests {
        report.manifolds.push(match backend {
            Backend::Exact => run_manifest::<Rational>(m)?,
            Backend::Float => run_manifest::<Float>(m)?,
        });
    }
    Ok(report)
}

fn value<S: Scalar>(text: &str) -> S {
    S::parse(text).expect("the parser only admits numbers both backends read")
}

fn coef<S: Scalar>(m: &Manifest, c: &Coef) -> S {
    let mut v = c.number.as_deref().map_or_else(S::one, value::<S>);
    if let Some(p) = &c.param {
        v = v * value::<S>(&m.params[p]);
    }
    if c.negative {
        -v
    } else {
        v
    }
}

fn form<S: Scalar>(m: &Manifest, frame: &Arc<FrameSpace>, terms: &[Term], grade: usize) -> Form<S> {
    let mut out = Form::zero(frame, grade);
    for t in terms {
        out = out.add(&Form::monomial(frame, &t.indices, coef::<S>(m, &t.coef))).expect("same frame");
    }
    out
}

fn render_vector<S: Scalar>(v: &Vector<S>) -> Vec<String> {
    v.coeffs().iter().map(Scalar::render).collect()
}

fn render_bilinear<S: Scalar>(b: &Bilinear<S>) -> Vec<Vec<String>> {
    b.rows().iter().map(|r| r.iter().map(Scalar::render).collect()).collect()
}

/// Signed sum of monomials, dropping coefficients that test as zero.
pub fn render_form<S: Scalar>(f: &Form<S>) -> String {
    let mut out = String::new();
    for (blade, c) in f.terms().filter(|(_, c)| !c.is_zero()) {
        let name: Vec<&str> = blade.indices().map(|i| f.frame().label(i)).collect();
        let negative = c.to_f64() < 0.0;
        let magnitude = if negative { -c.clone() } else { c.clone() };
        let sign = match (out.is_empty(), negative) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        out.push_str(&format!("{sign}{} {}", magnitude.render(), name.join("^")));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

struct Ambient<S: Scalar> {
    data: AmbientData<S>,
    dga: Option<CoframeDGA<S>>,
    source: &'static str,
}

fn ambient<S: Scalar>(m: &Manifest, frame: &Arc<FrameSpace>) -> Result<Ambient<S>, RunError> {
    let ctx = &m.name;
    let g2 = G2Structure::<S>::new(frame).map_err(|e| fail(ctx, e))?;
    match &m.inject {
        None => {
            let d = (0..7)
                .map(|g| m.d.get(&g).map_or_else(|| Form::zero(frame, 2), |t| form(m, frame, t, 2)))
                .collect();
            let dga = CoframeDGA::new(frame, d).map_err(|e| fail(ctx, e))?;
            let rbar = nabla_phi(&dga, &dga.koszul(), &g2).map_err(|e| fail(ctx, e))?;
            Ok(Ambient { data: AmbientData::new(g2, rbar), dga: Some(dga), source: "structure-equations" })
        }
        Some(Injection::Rbar(entries)) => {
            let rows: Vec<Vec<S>> = entries.chunks(7).map(|r| r.iter().map(|t| value::<S>(t)).collect()).collect();
            let rbar = Bilinear::from_rows(frame, &rows);
            Ok(Ambient { data: AmbientData::new(g2, rbar), dga: None, source: "inject-rbar" })
        }
        Some(Injection::Derivatives { dphi, dstarphi, dstarphi_grade }) => {
            let dphi = form::<S>(m, frame, dphi, 4);
            let given = form::<S>(m, frame, dstarphi, *dstarphi_grade);
            // d*φ = -∗d∗φ on 3-forms in dimension 7.
            let codiff = if *dstarphi_grade == 5 { given.hodge().neg() } else { given };
            let rbar: TorsionMatrix7<S> = g2.rbar_from_derivatives(&dphi, &codiff).map_err(|e| fail(ctx, e))?;
            if g2.dphi_from_a(&rbar) != dphi {
                return Err(fail(ctx, format!("injected dphi = {} is not the derivative of a G2-structure", render_form(&dphi))));
            }
            if g2.dstarphi_from_a(&rbar) != codiff {
                return Err(fail(ctx, format!("injected d*phi = {} is not the codifferential of a G2-structure", render_form(&codiff))));
            }
            Ok(Ambient { data: AmbientData::new(g2, rbar), dga: None, source: "inject-derivatives" })
        }
    }
}

fn phase<S: Scalar>(theta: &ThetaSpec) -> Result<Phase<S>, String> {
    match theta {
        ThetaSpec::Zero => Ok(Phase::zero()),
        ThetaSpec::HalfPi => Ok(Phase::half_pi()),
        ThetaSpec::Cs(c, s) => Phase::new(value::<S>(c), value::<S>(s)).map_err(|e| e.to_string()),
    }
}

/// `B` given in coframe order of the six tangent labels, moved to the adapted local order.
fn explicit_shape<S: Scalar>(tangent: &TangentFrame, entries: &[String]) -> Bilinear<S> {
    let n = tangent.normal().index;
    let rank = |g: usize| if g < n { g } else { g - 1 };
    let global = tangent.global();
    Bilinear::from_fn(tangent.local(), |i, j| value::<S>(&entries[rank(global[i]) * 6 + rank(global[j])]))
}

fn hypersurface<S: Scalar>(
    m: &Manifest,
    amb: &Ambient<S>,
    frame: &Arc<FrameSpace>,
    h: &HypersurfaceSpec,
) -> Result<report::HypersurfaceReport, RunError> {
    let ctx = format!("{} / {}", m.name, h.name);
    let tangent = TangentFrame::new(frame, h.normal).map_err(|e| fail(&ctx, e))?;
    let given = h.shape.as_ref().map(|b| explicit_shape::<S>(&tangent, b));
    let (sl, shape_source) = match (&amb.dga, given) {
        (Some(dga), given) => {
            let sl = slice(dga, &dga.koszul(), h.normal).map_err(|e| fail(&ctx, e))?;
            if let Some(b) = given {
                if &b != sl.shape() {
                    return Err(fail(&ctx, "explicit B disagrees with the shape tensor of the structure equations"));
                }
                (sl, "explicit")
            } else {
                (sl, "structure-equations")
            }
        }
        (None, Some(b)) => (HypersurfaceSlice::from_shape(tangent, b).map_err(|e| fail(&ctx, e))?, "explicit"),
        (None, None) => return Err(fail(&ctx, "injected torsion data needs an explicit B")),
    };
    let ph = phase::<S>(&h.theta).map_err(|e| fail(&ctx, e))?;
    let dtheta = Vector::zero(sl.tangent().local());
    let rep = classify_hypersurface(&amb.data, sl, ph, dtheta, amb.dga.as_ref()).map_err(|e| fail(&ctx, e))?;
    let ind = &rep.induced;
    let norms_sq = Su3Type::ALL
        .iter()
        .zip(&ind.class.norms_sq)
        .map(|(t, v)| (t.name().to_string(), v.render()))
        .collect();
    Ok(report::HypersurfaceReport {
        name: h.name.clone(),
        normal: m.label_of(h.normal),
        theta: rep.phase.render(),
        frame: rep.slice.tangent().local().labels().to_vec(),
        shape_source: shape_source.into(),
        b: render_bilinear(rep.slice.shape()),
        h: rep.slice.mean_curvature().render(),
        predicates: Predicates {
            totally_geodesic: rep.predicates.totally_geodesic,
            totally_umbilic: rep.predicates.totally_umbilic,
            minimal: rep.predicates.minimal,
            ib_eq_b: rep.predicates.ib_eq_b,
            ib_eq_minus_b: rep.predicates.ib_eq_minus_b,
        },
        r: render_bilinear(&ind.torsion.r),
        eta: render_vector(&ind.torsion.eta),
        dstar_omega: render_vector(&ind.dstar_omega),
        class: ind.class.label(),
        su3_kaehler: rep.is_su3_kaehler(),
        norms_sq,
        residuals: Residuals {
            rrb2: render_vector(&ind.residuals.rrb2),
            rrb3: ind.residuals.rrb3.render(),
            rrb4: ind.residuals.rrb4.render(),
        },
        direct: if rep.direct.is_some() { "agree" } else { "skipped" }.into(),
        crosscheck: rep
            .crosscheck
            .iter()
            .map(|c| RuleCheck {
                rule: c.rule.into(),
                predicate: c.predicate,
                within_bound: c.within_bound,
                verdict: c.verdict.name().into(),
            })
            .collect(),
    })
}

pub fn run_manifest<S: Scalar>(m: &Manifest) -> Result<ManifoldReport, RunError> {
    let frame = FrameSpace::new(m.coframe.iter().cloned()).map_err(|e| fail(&m.name, e))?;
    let amb = ambient::<S>(m, &frame)?;
    let a = &amb.data;
    let hypersurfaces = m
        .hypersurfaces
        .iter()
        .map(|h| hypersurface(m, &amb, &frame, h))
        .collect::<Result<Vec<_>, _>>()?;
    let norms_sq: BTreeMap<String, String> = G2Type::ALL
        .iter()
        .zip(&a.class.norms_sq)
        .map(|(t, v)| (t.name().to_string(), v.render()))
        .collect();
    Ok(ManifoldReport {
        name: m.name.clone(),
        coframe: m.coframe.clone(),
        params: m.params.clone(),
        source: amb.source.into(),
        ambient: AmbientReport {
            class: a.class.label(),
            norms_sq,
            rbar: render_bilinear(&a.rbar),
            p_dstar: render_vector(a.p_dstar()),
            dphi: render_form(&a.g2.dphi_from_a(&a.rbar)),
            dstarphi: render_form(&a.g2.dstarphi_from_a(&a.rbar)),
        },
        hypersurfaces,
    })
}

/// Every table verdict of a report agrees.
pub fn all_rules_agree(report: &Report) -> bool {
    let agree = pipeline::Verdict::Agree.name();
    report
        .manifolds
        .iter()
        .flat_map(|m| &m.hypersurfaces)
        .flat_map(|h| &h.crosscheck)
        .all(|c| c.verdict == agree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifest::parse_manifest;

    fn run_text(text: &str, backend: Backend) -> Result<Report, RunError> {
        run(&[parse_manifest(text).unwrap()], backend)
    }

    const HEAD: &str = "manifold t\ndim 7\ncoframe e0 e1 e2 e3 e4 e5 e6\n";

    #[test]
    fn empty_structure_is_a_parallel_torus() {
        let r = run_text(&format!("{HEAD}hypersurface a normal +e0 theta 0\n"), Backend::Exact).unwrap();
        let m = &r.manifolds[0];
        assert_eq!(m.ambient.class, "P");
        assert_eq!(m.ambient.dphi, "0");
        assert!(m.hypersurfaces[0].su3_kaehler);
        assert_eq!(m.hypersurfaces[0].direct, "agree");
    }

    #[test]
    fn d_squared_failure_names_the_generator() {
        let e = run_text(&format!("{HEAD}d e0 = 1 e1^e2\nd e1 = 1 e3^e4\n"), Backend::Exact).unwrap_err();
        assert!(e.message.contains("e0"), "{e}");
        assert_eq!(e.context, "t");
    }

    #[test]
    fn explicit_shape_must_match() {
        let zeros = vec!["0"; 36].join(" ");
        let text = format!("{HEAD}d e1 = -1 e4^e5\nd e6 = -1 e0^e5\nhypersurface M1 normal +e3 theta 0 B {zeros}\n");
        assert!(run_text(&text, Backend::Exact).is_ok());
        let text = format!("{HEAD}d e1 = -1 e4^e5\nd e6 = -1 e0^e5\nhypersurface M3 normal +e5 theta 0 B {zeros}\n");
        let e = run_text(&text, Backend::Exact).unwrap_err();
        assert_eq!(e.context, "t / M3");
        assert!(e.message.contains("explicit B"));
    }

    #[test]
    fn explicit_shape_is_read_in_coframe_order() {
        // B = -e0∨e6 - e1∨e4 on the leaf orthogonal to e5.
        let mut b = vec!["0".to_string(); 36];
        for (i, j) in [(0, 5), (5, 0), (1, 4), (4, 1)] {
            b[i * 6 + j] = "-1/2".into();
        }
        let text = format!(
            "{HEAD}d e1 = -1 e4^e5\nd e6 = -1 e0^e5\nhypersurface M3 normal +e5 theta 0 B {}\n",
            b.join(" ")
        );
        let r = run_text(&text, Backend::Exact).unwrap();
        assert!(r.manifolds[0].hypersurfaces[0].su3_kaehler);
    }

    #[test]
    fn float_only_circle_points_need_the_float_backend() {
        let text = format!("{HEAD}hypersurface a normal +e0 theta cs 0.7071067811865476 0.7071067811865476\n");
        assert!(run_text(&text, Backend::Exact).unwrap_err().message.contains("phase"));
        assert!(run_text(&text, Backend::Float).is_ok());
    }

    #[test]
    fn inconsistent_injection_is_reported() {
        let text = format!(
            "{HEAD}inject dphi = 1 e0^e1^e2^e3\ninject dstarphi = 0 e0^e1\nhypersurface a normal +e0 theta 0 B {}\n",
            vec!["0"; 36].join(" ")
        );
        let e = run_text(&text, Backend::Exact).unwrap_err();
        assert!(e.message.contains("dphi"), "{e}");
    }
}
