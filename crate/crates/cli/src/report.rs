//! Reports in two renderings: pretty JSON with a fixed field order and a
//! plain text summary. Coordinates are one-based in both.

use std::fmt::Write;

use logpoisson::actiondata::DatumPredicates;
use logpoisson::cartan::{CglCondition, CglReport};
use logpoisson::deform::{Deformation, Smoothing};
use logpoisson::linalg::RatMatrix;
use logpoisson::logcan::{LogCanonicalStructure, SmoothableWeight, SmoothingDiagram};
use logpoisson::multivec::Multivector;
use serde::Serialize;

use crate::job::{JobFile, Rat};
use crate::Command;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl Verdict {
    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive (level cap reached)",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Checks {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_log_symplectic: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w1: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w2: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobi: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cgl: Option<Verdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightEntry {
    pub border: [usize; 2],
    pub theta: Vec<i64>,
    /// `lambda theta = a (e_j - e_k)`.
    pub a: Rat,
}

impl WeightEntry {
    fn new(w: &SmoothableWeight) -> Self {
        WeightEntry { border: [w.border.0 + 1, w.border.1 + 1], theta: w.theta.0.clone(), a: Rat(w.scale.clone()) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermEntry {
    pub coefficient: Rat,
    pub exponents: Vec<u32>,
    pub dirs: Vec<usize>,
}

/// Terms in the multivector's canonical order.
pub fn terms(m: &Multivector) -> Vec<TermEntry> {
    m.iter()
        .map(|(mono, c)| TermEntry {
            coefficient: Rat(c.clone()),
            exponents: mono.exponents.clone(),
            dirs: mono.dirs.iter().map(|d| d + 1).collect(),
        })
        .collect()
}

pub fn matrix(m: &RatMatrix) -> Vec<Vec<Rat>> {
    (0..m.rows()).map(|i| m.row(i).into_iter().map(Rat).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramEntry {
    pub edges: Vec<[usize; 2]>,
    pub is_forest: bool,
}

impl DiagramEntry {
    pub fn new(d: &SmoothingDiagram) -> Self {
        DiagramEntry {
            edges: d.edges.iter().map(|e| [e.border.0 + 1, e.border.1 + 1]).collect(),
            is_forest: d.is_forest(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PredicatesEntry {
    pub distinguished: bool,
    pub integral: bool,
    pub strongly_integral: bool,
}

impl From<DatumPredicates> for PredicatesEntry {
    fn from(p: DatumPredicates) -> Self {
        PredicatesEntry { distinguished: p.distinguished, integral: p.integral, strongly_integral: p.strongly_integral }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothingEntry {
    pub border: [usize; 2],
    pub coefficient: Rat,
}

impl SmoothingEntry {
    pub fn new(s: &Smoothing) -> Self {
        SmoothingEntry {
            border: [s.weight.border.0 + 1, s.weight.border.1 + 1],
            coefficient: Rat(s.coefficient.clone()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderEntry {
    pub level: usize,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeformationEntry {
    pub orders: Vec<OrderEntry>,
    pub total: Vec<TermEntry>,
    #[serde(skip)]
    rendered: Vec<String>,
}

impl DeformationEntry {
    pub fn new(d: &Deformation) -> Self {
        DeformationEntry {
            orders: d.orders.iter().enumerate().map(|(level, m)| OrderEntry { level, terms: terms(m) }).collect(),
            total: terms(&d.total),
            rendered: d.orders.iter().chain(std::iter::once(&d.total)).map(|m| m.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CglFailureEntry {
    pub condition: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CglEntry {
    pub passes: bool,
    pub failures: Vec<CglFailureEntry>,
}

impl CglEntry {
    pub fn new(r: &CglReport) -> Self {
        let failures = r
            .failures
            .iter()
            .map(|f| CglFailureEntry {
                condition: match f.condition {
                    CglCondition::TorusWeights => "torus_weights",
                    CglCondition::Gram => "gram",
                    CglCondition::Triangular => "triangular",
                },
                detail: f.detail.clone(),
            })
            .collect();
        CglEntry { passes: r.passes, failures }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub input_echo: JobFile,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<Rat>>>,
    pub s_pi0: Vec<WeightEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicates: Option<PredicatesEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothings: Option<Vec<SmoothingEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformationEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pfaffian: Option<Vec<TermEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cgl: Option<CglEntry>,
    pub checks: Checks,
    #[serde(skip)]
    pfaffian_text: Option<String>,
}

impl Report {
    pub fn new(command: Command, job: &JobFile, structure: &LogCanonicalStructure, all: &[SmoothableWeight]) -> Self {
        Report {
            command: match command {
                Command::Analyze => "analyze",
                Command::Deform => "deform",
                Command::Pfaffian => "pfaffian",
                Command::CheckCgl => "check-cgl",
                Command::ExportDot => "export-dot",
            },
            input_echo: job.clone(),
            n: structure.dim(),
            lambda: None,
            s_pi0: all.iter().map(WeightEntry::new).collect(),
            diagram: None,
            predicates: None,
            smoothings: None,
            deformation: None,
            pfaffian: None,
            cgl: None,
            checks: Checks::default(),
            pfaffian_text: None,
        }
    }

    pub fn set_pfaffian(&mut self, pf: &Multivector) {
        self.pfaffian = Some(terms(pf));
        self.pfaffian_text = Some(pf.to_string());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}", self.n);
        if let Some(lambda) = &self.lambda {
            let _ = writeln!(s, "lambda:");
            for row in lambda {
                let cells: Vec<String> = row.iter().map(|v| format!("{:>4}", v.to_string())).collect();
                let _ = writeln!(s, "  [{}]", cells.join(" "));
            }
        }
        let _ = writeln!(s, "smoothable weights: {}", self.s_pi0.len());
        for w in &self.s_pi0 {
            let theta: Vec<String> = w.theta.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "  {}:{}  theta=({})  a={}", w.border[0], w.border[1], theta.join(","), w.a);
        }
        if let Some(d) = &self.diagram {
            let edges: Vec<String> = d.edges.iter().map(|[j, k]| format!("{j}--{k}")).collect();
            let _ = writeln!(
                s,
                "smoothing diagram: {} edge(s) [{}], {}",
                d.edges.len(),
                edges.join(" "),
                if d.is_forest { "forest" } else { "has a cycle" }
            );
        }
        if let Some(p) = &self.predicates {
            let _ = writeln!(
                s,
                "predicates: distinguished={} integral={} strongly_integral={}",
                p.distinguished, p.integral, p.strongly_integral
            );
        }
        if let Some(sm) = &self.smoothings {
            let items: Vec<String> =
                sm.iter().map(|e| format!("{}:{}={}", e.border[0], e.border[1], e.coefficient)).collect();
            let _ = writeln!(s, "coefficients: {}", if items.is_empty() { "none".into() } else { items.join(", ") });
        }
        if let Some(d) = &self.deformation {
            let (orders, total) = d.rendered.split_at(d.rendered.len() - 1);
            for (level, text) in orders.iter().enumerate() {
                let _ = writeln!(s, "order {level}: {text}");
            }
            let _ = writeln!(s, "total: {}", total[0]);
        }
        if let Some(text) = &self.pfaffian_text {
            let _ = writeln!(s, "pfaffian: {text}");
        }
        if let Some(c) = &self.cgl {
            let _ = writeln!(s, "cgl: {}", if c.passes { "PASS" } else { "FAIL" });
            for f in &c.failures {
                let _ = writeln!(s, "  {}: {}", f.condition, f.detail);
            }
        }
        let checks = [
            ("T-log-symplectic", self.checks.t_log_symplectic),
            ("W1", self.checks.w1),
            ("W2", self.checks.w2),
            ("oracle", self.checks.oracle),
            ("jacobi", self.checks.jacobi),
        ];
        for (name, v) in checks {
            if let Some(v) = v {
                let _ = writeln!(s, "{name}: {}", v.label());
            }
        }
        s
    }
}
