use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use o2deg::burnside::Element;
use o2deg::characters::{minus_irreps, GammaShape};
use o2deg::config::{parse_config, AnalysisConfig, IrrepSelector};
use o2deg::geometry::{check_conditions, emit_figure_data};
use o2deg::group::{subgroup_classes, Group};
use o2deg::pipeline::{analyze, default_level, Engine};
use o2deg::rep::Component;
use o2deg::report::{hypotheses_hold, render_machine, render_text, run_analyze, stability, working_set, Outcome, RunFlags};
use o2deg::Error;

const EXIT_CERTIFICATES: u8 = 0;
const EXIT_NONE: u8 = 10;
const EXIT_HYPOTHESES: u8 = 20;
const EXIT_INTERNAL: u8 = 30;
const EXIT_CONFIG: u8 = 31;
const EXIT_CONSISTENCY: u8 = 32;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Parser)]
#[command(name = "o2deg", version, about = "Equivariant degree engine for O(2) x Gamma x Z2 and reversible delay systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline: geometry checks, spectrum, degrees, omega, certificates.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        /// Compute degrees even when hypotheses fail; the report is watermarked.
        #[arg(long)]
        unsafe_skip_geometry: bool,
    },
    /// Conjugacy classes of subgroups of Gamma x Z2 and the minus-type irreducibles.
    GroupInfo {
        /// `D<n>` or `Z<n>`.
        #[arg(long, default_value = "D8")]
        group: String,
        #[command(flatten)]
        common: Common,
    },
    /// Basic degree of one irreducible component.
    BasicDegree {
        #[arg(long, default_value = "D8")]
        group: String,
        /// Irreducible: name, `natural`, or index.
        #[arg(long, default_value = "natural")]
        irrep: String,
        #[arg(long, default_value_t = 1)]
        mode: usize,
        #[arg(long)]
        truncation: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Product of two Burnside elements. Operands are element expressions or
    /// `deg:<mode>:<irrep>` for a basic degree.
    BurnsideMul {
        #[arg(long, default_value = "D8")]
        group: String,
        a: String,
        b: String,
        /// Modes whose isotropy classes are registered for label lookup.
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        modes: Vec<usize>,
        #[arg(long)]
        truncation: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Condition checks on the configured domain and family.
    GeometryCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Boundary series (theta, r, kappa, |grad eta|, sum) as CSV.
    FigureData {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recomputes n-values, Weyl orders and products at 2M and prints differences.
    OracleStability {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        truncation: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_group(s: &str) -> anyhow::Result<GammaShape> {
    let (kind, n) = s.split_at(1);
    let n: usize = n.parse().with_context(|| format!("group {s:?}: expected D<n> or Z<n>"))?;
    match kind {
        "D" | "d" => Ok(GammaShape::Dihedral(n)),
        "Z" | "z" | "C" | "c" => Ok(GammaShape::Cyclic(n)),
        _ => bail!("group {s:?}: expected D<n> or Z<n>"),
    }
}

fn selector(s: &str) -> IrrepSelector {
    s.parse().map(IrrepSelector::Index).unwrap_or_else(|_| IrrepSelector::Name(s.to_string()))
}

fn load(path: &PathBuf) -> anyhow::Result<AnalysisConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_config(&text)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

fn engine_for(shape: GammaShape, modes: &[usize], truncation: Option<usize>) -> anyhow::Result<Engine> {
    let m = match truncation {
        Some(m) => m,
        None => default_level(shape, modes)?,
    };
    Ok(Engine::new(shape, m)?)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Analyze { config, common, truncation, grid, unsafe_skip_geometry } => {
            let cfg = load(&config)?;
            let doc = run_analyze(&cfg, RunFlags { skip_geometry: unsafe_skip_geometry, truncation, grid })?;
            let text = match common.format {
                Format::Text => render_text(&doc),
                Format::Machine => render_machine(&doc),
            };
            emit(&common.out, &text)?;
            if doc.outcome == Outcome::HypothesesFailed {
                eprintln!("hypotheses failed; rerun with --unsafe-skip-geometry to compute degrees anyway");
            }
            if doc.diagnostics.stability_diff.as_ref().is_some_and(|d| !d.is_empty()) {
                return Ok(EXIT_CONSISTENCY);
            }
            Ok(match doc.outcome {
                Outcome::Certificates => EXIT_CERTIFICATES,
                Outcome::NoCertificates => EXIT_NONE,
                Outcome::HypothesesFailed => EXIT_HYPOTHESES,
            })
        }
        Cmd::GroupInfo { group, common } => {
            let shape = parse_group(&group)?;
            let f = shape.build()?;
            let classes = subgroup_classes(&f)?;
            let irreps = minus_irreps(&f)?;
            let text = match common.format {
                Format::Text => {
                    let mut s = format!("{} ({} elements): {} conjugacy classes of subgroups\n", f.name(), f.order(), classes.len());
                    for c in &classes {
                        s += &format!("  {:>3} {:<8} order {:>3}  conjugates {:>2}  |W| = {}\n", c.id, c.name, c.representative.order(), c.size, c.weyl);
                    }
                    s += "minus-type irreducibles:\n";
                    for (i, r) in irreps.iter().enumerate() {
                        s += &format!("  {i} {} (dim {}){}\n", r.name, r.dim, if r.is_natural() { " natural" } else { "" });
                    }
                    s
                }
                Format::Machine => json(serde_json::json!({
                    "group": f.name(),
                    "order": f.order(),
                    "classes": classes.iter().map(|c| serde_json::json!({"id": c.id, "name": c.name, "order": c.representative.order(), "conjugates": c.size, "weyl": c.weyl})).collect::<Vec<_>>(),
                    "irreps": irreps.iter().map(|r| serde_json::json!({"name": r.name, "dim": r.dim, "natural": r.is_natural()})).collect::<Vec<_>>(),
                })),
            };
            emit(&common.out, &text)?;
            Ok(0)
        }
        Cmd::BasicDegree { group, irrep, mode, truncation, common } => {
            let shape = parse_group(&group)?;
            let (engine, (c, deg, max)) = Engine::with_level_retry(shape, truncation.map_or_else(|| default_level(shape, &[mode]), Ok)?, |e| {
                let l = selector(&irrep).resolve(e.irreps()).ok_or_else(|| Error::InvalidParameter(format!("unknown irrep {irrep:?}")))?;
                let c = Component::new(mode, l);
                Ok((c, e.basic_degree(c)?, e.maximal_orbit_types(c)?))
            })?;
            let name = &engine.irreps()[c.l].name;
            let text = match common.format {
                Format::Text => format!(
                    "deg V({mode},{name}) = {deg}\nmaximal orbit types: {}\ntruncation level M = {}\n",
                    max.iter().map(|c| c.label()).collect::<Vec<_>>().join(", "),
                    engine.level()
                ),
                Format::Machine => json(serde_json::json!({
                    "component": format!("V({mode},{name})"),
                    "degree": deg.to_string(),
                    "terms": deg.to_pairs(),
                    "maximal": max.iter().map(|c| c.label()).collect::<Vec<_>>(),
                    "level": engine.level(),
                })),
            };
            emit(&common.out, &text)?;
            Ok(0)
        }
        Cmd::BurnsideMul { group, a, b, modes, truncation, common } => {
            let shape = parse_group(&group)?;
            let mut e = engine_for(shape, &modes, truncation)?;
            for &k in &modes {
                for l in 0..e.irreps().len() {
                    e.isotropy(&[Component::new(k, l)])?;
                }
            }
            let mut operand = |s: &str| -> anyhow::Result<Element> {
                if let Some(rest) = s.strip_prefix("deg:") {
                    let (k, irrep) = rest.split_once(':').ok_or_else(|| anyhow!("expected deg:<mode>:<irrep>"))?;
                    let l = selector(irrep).resolve(e.irreps()).ok_or_else(|| anyhow!("unknown irrep {irrep:?}"))?;
                    return Ok(e.basic_degree(Component::new(k.parse()?, l))?);
                }
                let lat = e.lattice_ref();
                Ok(Element::parse(s, |label| if label == "G" { Some(lat.full_group()) } else { lat.by_label(label) })?)
            };
            let x = operand(&a)?;
            let y = operand(&b)?;
            let p = x.multiply(&y, e.lattice(), None)?;
            let text = match common.format {
                Format::Text => format!("{p}\n"),
                Format::Machine => json(serde_json::json!({"product": p.to_string(), "terms": p.to_pairs()})),
            };
            emit(&common.out, &text)?;
            Ok(0)
        }
        Cmd::GeometryCheck { config, grid, common } => {
            let cfg = load(&config)?;
            let fam = cfg.family().ok_or_else(|| anyhow!("configuration has no domain family"))?;
            let mut opts = cfg.check_options();
            if let Some(g) = grid {
                opts.grid = g;
            }
            let v = check_conditions(&fam, opts)?;
            let text = match common.format {
                Format::Text => {
                    let mut s = String::new();
                    for r in &v.records {
                        s += &format!("{:<20} {:<12} {}{}\n", r.name, r.status.to_string(), r.detail, r.witness.map(|t| format!(" at theta = {t:.6}")).unwrap_or_default());
                    }
                    let st = &v.stats;
                    s += &format!(
                        "|grad eta| on C in [{:.9}, {:.9}], kappa in [{:.9}, {:.9}], min(|grad eta| + kappa) = {:.9}\n",
                        st.grad_min, st.grad_max, st.kappa_min, st.kappa_max, st.grad_plus_kappa_min
                    );
                    let c = &v.constants;
                    s += &format!("A = {:.6}, B = {:.6}, alpha = {:.6}, K = {:.6}, log10 M = {:.6}, log10 N = {:.6}\n", c.a, c.b, c.alpha, c.k, c.m_log10, c.n_log10);
                    s
                }
                Format::Machine => json(serde_json::to_value(&v)?),
            };
            emit(&common.out, &text)?;
            Ok(if hypotheses_hold(&v) { 0 } else { EXIT_HYPOTHESES })
        }
        Cmd::FigureData { config, grid, out } => {
            let cfg = load(&config)?;
            let d = cfg.domain.ok_or_else(|| anyhow!("configuration has no domain"))?;
            emit(&out, &emit_figure_data(&d, grid)?)?;
            Ok(0)
        }
        Cmd::OracleStability { config, truncation, common } => {
            let cfg = load(&config)?;
            let problem = cfg.problem()?;
            let (mut e, rep) = analyze(&problem, truncation.or(cfg.options.truncation))?;
            let (classes, pairs) = working_set(&mut e, &problem, &rep)?;
            let diff = stability(&mut e, &problem, &rep)?;
            let text = match common.format {
                Format::Text => {
                    let mut s = format!("levels {} and {}: {} classes, {} products\n", e.level(), 2 * e.level(), classes.len(), pairs.len());
                    for d in &diff {
                        s += &format!("{d}\n");
                    }
                    s
                }
                Format::Machine => json(serde_json::json!({"level": e.level(), "classes": classes.len(), "products": pairs.len(), "diff": diff})),
            };
            emit(&common.out, &text)?;
            Ok(if diff.is_empty() { 0 } else { EXIT_CONSISTENCY })
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Config(_) | Error::Parse(_) | Error::InvalidParameter(_) | Error::NotStarShaped(_) | Error::VanishingGradient(_) | Error::Singularity(_)) => EXIT_CONFIG,
        Some(
            Error::Consistency(_) | Error::Instability(_) | Error::InconsistentDegree { .. } | Error::IncompleteLattice(_) | Error::ClassEscape(_),
        ) => EXIT_CONSISTENCY,
        _ => EXIT_INTERNAL,
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
