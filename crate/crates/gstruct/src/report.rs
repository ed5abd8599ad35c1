//! Classification reports and their text and machine (JSON) renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const TOOL: &str = "gstruct";

/// Output of one run. Scalars are canonical strings (`p/q` on the exact backend).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub backend: String,
    pub manifolds: Vec<ManifoldReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldReport {
    pub name: String,
    pub coframe: Vec<String>,
    pub params: BTreeMap<String, String>,
    /// `structure-equations`, `inject-rbar` or `inject-derivatives`.
    pub source: String,
    pub ambient: AmbientReport,
    pub hypersurfaces: Vec<HypersurfaceReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientReport {
    pub class: String,
    pub norms_sq: BTreeMap<String, String>,
    pub rbar: Vec<Vec<String>>,
    pub p_dstar: Vec<String>,
    pub dphi: String,
    pub dstarphi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicates {
    pub totally_geodesic: bool,
    pub totally_umbilic: bool,
    pub minimal: bool,
    pub ib_eq_b: bool,
    pub ib_eq_minus_b: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residuals {
    pub rrb2: Vec<String>,
    pub rrb3: String,
    pub rrb4: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub rule: String,
    pub predicate: bool,
    pub within_bound: bool,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceReport {
    pub name: String,
    pub normal: String,
    pub theta: String,
    /// Local frame in adapted order `(u1, u2, u3, Iu1, Iu2, Iu3)`.
    pub frame: Vec<String>,
    /// `structure-equations` or `explicit`.
    pub shape_source: String,
    pub b: Vec<Vec<String>>,
    pub h: String,
    pub predicates: Predicates,
    pub r: Vec<Vec<String>>,
    pub eta: Vec<String>,
    pub dstar_omega: Vec<String>,
    pub class: String,
    pub su3_kaehler: bool,
    pub norms_sq: BTreeMap<String, String>,
    pub residuals: Residuals,
    /// `agree` when the torsion was recomputed on the leaf, `skipped` otherwise.
    pub direct: String,
    pub crosscheck: Vec<RuleCheck>,
}

impl Report {
    pub fn new(backend: &str) -> Self {
        Self { tool: TOOL.into(), backend: backend.into(), manifolds: Vec::new() }
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_machine(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn from_machine(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} report, backend {}", self.tool, self.backend);
        for m in &self.manifolds {
            m.write_text(&mut out);
        }
        out
    }
}

fn row(values: &[String]) -> String {
    values.join(" ")
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn norms(map: &BTreeMap<String, String>) -> String {
    map.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

impl ManifoldReport {
    fn write_text(&self, out: &mut String) {
        let _ = writeln!(out);
        let _ = writeln!(out, "manifold {}", self.name);
        let _ = writeln!(out, "  coframe {}", row(&self.coframe));
        for (k, v) in &self.params {
            let _ = writeln!(out, "  param {k} = {v}");
        }
        let _ = writeln!(out, "  source {}", self.source);
        let a = &self.ambient;
        let _ = writeln!(out, "  ambient class {}", a.class);
        let _ = writeln!(out, "  ambient norms {}", norms(&a.norms_sq));
        let _ = writeln!(out, "  rbar");
        for r in &a.rbar {
            let _ = writeln!(out, "    {}", row(r));
        }
        let _ = writeln!(out, "  p_dstar {}", row(&a.p_dstar));
        let _ = writeln!(out, "  dphi {}", a.dphi);
        let _ = writeln!(out, "  dstarphi {}", a.dstarphi);
        for h in &self.hypersurfaces {
            h.write_text(out);
        }
    }
}

impl HypersurfaceReport {
    fn write_text(&self, out: &mut String) {
        let _ = writeln!(out, "  hypersurface {} normal {} theta {}", self.name, self.normal, self.theta);
        let _ = writeln!(out, "    frame {}", row(&self.frame));
        let _ = writeln!(out, "    B ({})", self.shape_source);
        for r in &self.b {
            let _ = writeln!(out, "      {}", row(r));
        }
        let _ = writeln!(out, "    h {}", self.h);
        let p = &self.predicates;
        let _ = writeln!(
            out,
            "    predicates totally_geodesic={} totally_umbilic={} minimal={} IB=B={} IB=-B={}",
            flag(p.totally_geodesic),
            flag(p.totally_umbilic),
            flag(p.minimal),
            flag(p.ib_eq_b),
            flag(p.ib_eq_minus_b)
        );
        let _ = writeln!(out, "    r");
        for r in &self.r {
            let _ = writeln!(out, "      {}", row(r));
        }
        let _ = writeln!(out, "    eta {}", row(&self.eta));
        let _ = writeln!(out, "    dstar_omega {}", row(&self.dstar_omega));
        let _ = writeln!(out, "    class {}", self.class);
        let _ = writeln!(out, "    su3_kaehler {}", flag(self.su3_kaehler));
        let _ = writeln!(out, "    norms {}", norms(&self.norms_sq));
        let res = &self.residuals;
        let _ = writeln!(out, "    residuals rrb2=[{}] rrb3={} rrb4={}", row(&res.rrb2), res.rrb3, res.rrb4);
        let _ = writeln!(out, "    direct {}", self.direct);
        for c in &self.crosscheck {
            let _ = writeln!(
                out,
                "    rule {} predicate={} bound={} {}",
                c.rule,
                flag(c.predicate),
                flag(c.within_bound),
                c.verdict
            );
        }
    }
}
