//! JSON analysis configuration (schema 1). Parsing collects every violation
//! before failing.

use serde::{Deserialize, Serialize};

use crate::characters::{minus_irreps, GammaShape, RealIrrep};
use crate::error::{Error, Result};
use crate::geometry::{CheckOptions, DomainSpec, FFamilySpec};
use crate::pipeline::{Assignment, Problem};
use crate::spectral::LinearizationSpec;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSpec {
    Dihedral(usize),
    Cyclic(usize),
}

impl GroupSpec {
    pub fn shape(self) -> GammaShape {
        match self {
            GroupSpec::Dihedral(n) => GammaShape::Dihedral(n),
            GroupSpec::Cyclic(n) => GammaShape::Cyclic(n),
        }
    }
}

/// Irreducible chosen by name (`"rho1"`), by `"natural"`, or by index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IrrepSelector {
    Index(usize),
    Name(String),
}

impl IrrepSelector {
    pub fn resolve(&self, irreps: &[RealIrrep]) -> Option<usize> {
        match self {
            IrrepSelector::Index(i) => (*i < irreps.len()).then_some(*i),
            IrrepSelector::Name(n) if n == "natural" => irreps.iter().position(|r| r.is_natural()),
            IrrepSelector::Name(n) => irreps.iter().position(|r| &r.name == n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepEntry {
    pub label: String,
    pub irrep: IrrepSelector,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    pub safe_side: bool,
    pub fold_bound: usize,
    pub truncation: Option<usize>,
    pub grid: usize,
    pub radial_grid: usize,
    pub stability: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { safe_side: false, fold_bound: 64, truncation: None, grid: 4096, radial_grid: 64, stability: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub schema: u32,
    pub group: GroupSpec,
    pub representation: Vec<RepEntry>,
    pub delays: usize,
    /// One row per representation entry, `mu[l][j]` for `j = 0..delays`.
    pub mu: Vec<Vec<f64>>,
    pub domain: Option<DomainSpec>,
    /// The domain drives the family `(|z|^2 + 1) grad eta + sum mu_j y^j`.
    #[serde(default = "yes")]
    pub family: bool,
    #[serde(default)]
    pub options: Options,
}

fn yes() -> bool {
    true
}

impl AnalysisConfig {
    /// Every problem with the configuration.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.schema != SCHEMA {
            v.push(format!("schema {} is not supported (expected {SCHEMA})", self.schema));
        }
        match self.group.shape().build().and_then(|f| minus_irreps(&f)) {
            Ok(irreps) => {
                for (i, e) in self.representation.iter().enumerate() {
                    if e.irrep.resolve(&irreps).is_none() {
                        let names: Vec<_> = irreps.iter().map(|r| r.name.as_str()).collect();
                        v.push(format!("representation[{i}] ({}): unknown irrep selector {:?}; available: natural, {}", e.label, e.irrep, names.join(", ")));
                    }
                }
            }
            Err(e) => v.push(format!("group: {e}")),
        }
        if self.representation.is_empty() {
            v.push("representation: at least one entry is required".into());
        }
        let lin = LinearizationSpec { m: self.delays, mu: self.mu.clone(), mult: self.representation.iter().map(|e| e.multiplicity).collect() };
        v.extend(lin.violations());
        if let Some(d) = &self.domain {
            v.extend(d.violations().into_iter().map(|x| format!("domain: {x}")));
            if self.family && self.mu.len() > 1 && self.mu.windows(2).any(|w| w[0] != w[1]) {
                v.push("domain family: the mu rows must agree (one scalar mu_j per delay)".into());
            }
        }
        if self.options.grid < 8 {
            v.push(format!("options.grid = {} is too small", self.options.grid));
        }
        if self.options.fold_bound == 0 {
            v.push("options.fold_bound must be positive".into());
        }
        v
    }

    pub fn problem(&self) -> Result<Problem> {
        let irreps = minus_irreps(&self.group.shape().build()?)?;
        let reps = self
            .representation
            .iter()
            .map(|e| {
                let irrep = e.irrep.resolve(&irreps).ok_or_else(|| Error::Config(vec![format!("unknown irrep {:?}", e.irrep)]))?;
                Ok(Assignment { label: e.label.clone(), irrep, mult: e.multiplicity })
            })
            .collect::<Result<Vec<_>>>()?;
        let lin = LinearizationSpec::new(self.delays, self.mu.clone(), reps.iter().map(|a| a.mult).collect())?;
        Ok(Problem { shape: self.group.shape(), reps, lin, fold_bound: self.options.fold_bound })
    }

    pub fn family(&self) -> Option<FFamilySpec> {
        let d = self.domain.clone()?;
        self.family.then(|| FFamilySpec { mu: self.mu.first().cloned().unwrap_or_default(), domain: d })
    }

    pub fn check_options(&self) -> CheckOptions {
        CheckOptions { grid: self.options.grid, radial: self.options.radial_grid, safe: self.options.safe_side }
    }
}

pub fn parse_config(text: &str) -> Result<AnalysisConfig> {
    let cfg: AnalysisConfig = serde_json::from_str(text).map_err(|e| Error::Config(vec![format!("schema: {e}")]))?;
    let v = cfg.violations();
    if v.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(v))
    }
}
