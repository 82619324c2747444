//! Orchestration of a full analysis and its text / JSON rendering.

use std::fmt::Write as _;

use serde::Serialize;

use crate::burnside::Element;
use crate::config::AnalysisConfig;
use crate::error::Result;
use crate::geometry::{check_conditions, Status, Verification};
use crate::lattice::AmalgamClass;
use crate::pipeline::{analyze, Engine, Problem};
use crate::rep::Component;
use crate::spectral::xi_lower_bound;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Certificates,
    NoCertificates,
    HypothesesFailed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElementDoc {
    pub text: String,
    pub terms: Vec<(String, i64)>,
}

impl From<&Element> for ElementDoc {
    fn from(e: &Element) -> Self {
        ElementDoc { text: e.to_string(), terms: e.to_pairs() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiDoc {
    pub k: usize,
    pub l: usize,
    pub value: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralDoc {
    pub cutoff: usize,
    pub xi: Vec<XiDoc>,
    pub negative: Vec<(usize, usize)>,
    pub degenerate: Vec<usize>,
    pub fold_s: Option<usize>,
    /// Lower bound on `xi_{K*+1,l}` over `l`, positive by construction.
    pub beyond_cutoff_lower_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasicDoc {
    pub component: String,
    pub degree: ElementDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreesDoc {
    pub basic: Vec<BasicDoc>,
    pub linearization: Option<ElementDoc>,
    pub omega: Option<ElementDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalDoc {
    pub mode: usize,
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateDoc {
    pub class: String,
    pub fold: usize,
    pub frak_n: usize,
    pub non_constant: bool,
    pub omega_coefficient: Option<i64>,
    pub extended_type: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub truncation_level: Option<usize>,
    /// Disagreements between levels `M` and `2M`; `None` when not run.
    pub stability_diff: Option<Vec<String>>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub group: String,
    pub representation: Vec<String>,
    pub watermark: Option<String>,
    pub conditions: Option<Verification>,
    pub spectral: Option<SpectralDoc>,
    pub degrees: Option<DegreesDoc>,
    pub maximal: Vec<MaximalDoc>,
    pub certificates: Vec<CertificateDoc>,
    pub diagnostics: Diagnostics,
    pub paper_notes: Vec<String>,
    pub outcome: Outcome,
}

/// Records a run must pass before any certificate is asserted.
pub fn hypotheses_hold(v: &Verification) -> bool {
    let ok = |n: &str| v.record(n).is_some_and(|r| r.status == Status::Pass);
    ["eta", "eta5", "A5", "A6'"].iter().all(|n| ok(n)) && (ok("A4") || ok("A4'"))
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunFlags {
    pub skip_geometry: bool,
    pub truncation: Option<usize>,
    pub grid: Option<usize>,
}

fn component_name(problem: &Problem, engine: &Engine, c: Component) -> String {
    let label = problem.reps.iter().find(|a| a.irrep == c.l).map(|a| a.label.as_str()).unwrap_or("");
    format!("V({},{}) [{}]", c.k, engine.irreps()[c.l].name, label)
}

pub fn run_analyze(cfg: &AnalysisConfig, flags: RunFlags) -> Result<ReportDocument> {
    let problem = cfg.problem()?;
    let mut opts = cfg.check_options();
    if let Some(g) = flags.grid {
        opts.grid = g;
    }
    let conditions = match cfg.family() {
        Some(fam) => Some(check_conditions(&fam, opts)?),
        None => None,
    };
    let hold = conditions.as_ref().is_some_and(hypotheses_hold);
    let mut paper_notes = Vec::new();
    if let (Some(v), Some(fam)) = (&conditions, cfg.family()) {
        let s = fam.abs_sum();
        paper_notes.push(format!(
            "curvature chain needs R * sum|mu_j| < min_C |grad eta| = {:.6} (here {:.6}); the condition sum|mu_j| > -4 is vacuous",
            v.stats.grad_min,
            fam.domain.radius * s
        ));
        paper_notes.push(format!(
            "growth constants used: A = {:.6}, B = {:.6}; the alternative reading A = {:.6}, B = {:.6} does not dominate |f|",
            v.constants.a, v.constants.b, v.alternative_ab.0, v.alternative_ab.1
        ));
        paper_notes.push(format!(
            "min over C of |grad eta| + kappa = {:.6} at theta = {:.6} with the directly computed gradient",
            v.stats.grad_plus_kappa_min, v.stats.grad_plus_kappa_at
        ));
    }
    paper_notes.push("xi_0 uses mu_0 .. mu_{m-1} (no mu_m term)".into());
    let representation = problem.reps.iter().map(|a| format!("{} x{} ({})", a.label, a.mult, a.irrep)).collect();
    let group = format!("O(2) x {} x Z2", match problem.shape {
        crate::characters::GammaShape::Dihedral(n) => format!("D{n}"),
        crate::characters::GammaShape::Cyclic(n) => format!("Z{n}"),
    });
    let mut doc = ReportDocument {
        schema: crate::config::SCHEMA,
        group,
        representation,
        watermark: None,
        conditions,
        spectral: None,
        degrees: None,
        maximal: Vec::new(),
        certificates: Vec::new(),
        diagnostics: Diagnostics { truncation_level: None, stability_diff: None, notes: Vec::new() },
        paper_notes,
        outcome: Outcome::HypothesesFailed,
    };
    if !hold {
        if !flags.skip_geometry {
            return Ok(doc);
        }
        doc.watermark = Some("hypotheses unverified".into());
    }
    let level = flags.truncation.or(cfg.options.truncation);
    let (mut engine, rep) = analyze(&problem, level)?;
    let sp = &rep.spectral;
    let mut xi = Vec::new();
    for k in 0..=sp.cutoff {
        for l in 0..problem.reps.len() {
            xi.push(XiDoc { k, l, value: sp.xi[k][l].to_string(), multiplicity: sp.mult[k][l] });
        }
    }
    let beyond = (0..problem.reps.len()).map(|l| xi_lower_bound(&problem.lin, sp.cutoff + 1, l)).fold(f64::INFINITY, f64::min);
    doc.spectral = Some(SpectralDoc {
        cutoff: sp.cutoff,
        xi,
        negative: sp.negative.clone(),
        degenerate: sp.degenerate.iter().copied().collect(),
        fold_s: rep.fold_s,
        beyond_cutoff_lower_bound: beyond,
    });
    doc.degrees = Some(DegreesDoc {
        basic: rep.basic.iter().map(|(c, e)| BasicDoc { component: component_name(&problem, &engine, *c), degree: e.into() }).collect(),
        linearization: rep.degree.as_ref().map(Into::into),
        omega: rep.omega.as_ref().map(Into::into),
    });
    doc.maximal = rep.maximal.iter().map(|(k, cs)| MaximalDoc { mode: *k, classes: cs.iter().map(|c| c.label().to_string()).collect() }).collect();
    doc.certificates = rep
        .certificates
        .iter()
        .map(|c| CertificateDoc {
            class: c.class.label().to_string(),
            fold: c.fold,
            frak_n: c.frak_n,
            non_constant: c.non_constant,
            omega_coefficient: c.omega_coeff,
            extended_type: if c.fold == 1 { c.class.label().to_string() } else { format!("{} up to {}-folding", c.class.label(), c.fold) },
        })
        .collect();
    doc.diagnostics.truncation_level = Some(rep.level);
    doc.diagnostics.notes = rep.notes.clone();
    if cfg.options.stability {
        doc.diagnostics.stability_diff = Some(stability(&mut engine, &problem, &rep)?);
    }
    doc.outcome = if !hold && !flags.skip_geometry {
        Outcome::HypothesesFailed
    } else if doc.certificates.is_empty() {
        Outcome::NoCertificates
    } else {
        Outcome::Certificates
    };
    Ok(doc)
}

/// Working set of a finished analysis and the generator pairs multiplied.
pub fn working_set(engine: &mut Engine, problem: &Problem, rep: &crate::pipeline::DegreeReport) -> Result<(Vec<AmalgamClass>, Vec<(AmalgamClass, AmalgamClass)>)> {
    let comps: Vec<Component> = problem.active(&rep.spectral).into_iter().map(|(c, _)| c).collect();
    let mut classes = engine.poset(&comps)?.classes().to_vec();
    for (_, cs) in &rep.maximal {
        for c in cs {
            if !classes.contains(c) {
                classes.push(c.clone());
            }
        }
    }
    let mut pairs = Vec::new();
    for (i, (_, a)) in rep.basic.iter().enumerate() {
        for (_, b) in &rep.basic[i..] {
            for x in a.support() {
                for y in b.support() {
                    let p = if x <= y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
                    if !pairs.contains(&p) {
                        pairs.push(p);
                    }
                }
            }
        }
    }
    Ok((classes, pairs))
}

pub fn stability(engine: &mut Engine, problem: &Problem, rep: &crate::pipeline::DegreeReport) -> Result<Vec<String>> {
    let (classes, pairs) = working_set(engine, problem, rep)?;
    engine.lattice().stability_diff(&classes, &pairs)
}

pub fn render_machine(doc: &ReportDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_text(doc: &ReportDocument) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "G = {}", doc.group);
    if let Some(w) = &doc.watermark {
        let _ = writeln!(o, "*** {w} ***");
    }
    let _ = writeln!(o, "V = {}", doc.representation.join(" + "));
    let _ = writeln!(o);
    match &doc.conditions {
        Some(v) => {
            let _ = writeln!(o, "Conditions");
            for r in &v.records {
                let w = r.witness.map(|t| format!(" at theta = {t:.6}")).unwrap_or_default();
                let _ = writeln!(o, "  {:<20} {:<12} {}{}", r.name, r.status.to_string(), r.detail, w);
            }
            let c = &v.constants;
            let _ = writeln!(o, "  constants: A = {:.6}, B = {:.6}, alpha = {:.6}, K = {:.6}", c.a, c.b, c.alpha, c.k);
            let _ = writeln!(o, "  a-priori bounds: log10 M = {:.6}, log10 N = {:.6}{}", c.m_log10, c.n_log10, if c.safe { " (safe side)" } else { "" });
        }
        None => {
            let _ = writeln!(o, "Conditions: no domain supplied");
        }
    }
    if let Some(sp) = &doc.spectral {
        let _ = writeln!(o, "\nSpectrum (cutoff K* = {}, xi beyond cutoff >= {:.6})", sp.cutoff, sp.beyond_cutoff_lower_bound);
        for x in &sp.xi {
            let _ = writeln!(o, "  xi_({},{}) = {}{}", x.k, x.l, x.value, if x.multiplicity > 0 { format!("  [m = {}]", x.multiplicity) } else { String::new() });
        }
        if !sp.degenerate.is_empty() {
            let _ = writeln!(o, "  degenerate modes {:?}; fold s = {}", sp.degenerate, sp.fold_s.map_or("none found".into(), |s| s.to_string()));
        }
    }
    if let Some(d) = &doc.degrees {
        let _ = writeln!(o, "\nDegrees");
        for b in &d.basic {
            let _ = writeln!(o, "  deg {} = {}", b.component, b.degree.text);
        }
        if let Some(e) = &d.linearization {
            let _ = writeln!(o, "  G-deg(A) = {}", e.text);
        }
        if let Some(e) = &d.omega {
            let _ = writeln!(o, "  omega = {}", e.text);
        }
    }
    for m in &doc.maximal {
        let _ = writeln!(o, "\nMaximal orbit types in mode {}: {}", m.mode, m.classes.join(", "));
    }
    if doc.outcome != Outcome::HypothesesFailed || doc.watermark.is_some() {
        let _ = writeln!(o, "\nCertificates ({})", doc.certificates.len());
        for c in &doc.certificates {
            let _ = writeln!(
                o,
                "  {} fold {} n = {} {} omega coefficient {}",
                c.extended_type,
                c.fold,
                c.frak_n,
                if c.non_constant { "non-constant" } else { "possibly constant" },
                c.omega_coefficient.map_or("n/a".into(), |v| v.to_string())
            );
        }
    }
    let _ = writeln!(o, "\nDiagnostics");
    if let Some(m) = doc.diagnostics.truncation_level {
        let _ = writeln!(o, "  truncation level M = {m}");
    }
    match &doc.diagnostics.stability_diff {
        Some(d) if d.is_empty() => {
            let _ = writeln!(o, "  stability at 2M: no differences");
        }
        Some(d) => {
            for x in d {
                let _ = writeln!(o, "  stability: {x}");
            }
        }
        None => {}
    }
    for n in &doc.diagnostics.notes {
        let _ = writeln!(o, "  {n}");
    }
    let _ = writeln!(o, "\nPaper notes");
    for n in &doc.paper_notes {
        let _ = writeln!(o, "  {n}");
    }
    let _ = writeln!(o, "\nOutcome: {}", serde_json::to_value(doc.outcome).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default());
    o
}
