//! From isotypic components to degrees: basic degrees, the degree of the
//! linearization by two independent routes, `omega`, maximal orbit types,
//! parities and existence certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::burnside::{recurrence, Element};
use crate::characters::{minus_irreps, GammaShape, RealIrrep};
use crate::error::{Error, Result};
use crate::lattice::{AmalgamClass, ClassKey, ClassPoset, Lattice};
use crate::rep::{self, Component, Isotropy};
use crate::spectral::{degenerate_fold, spectral_summary, xi_paper_form, LinearizationSpec, SpectralSummary};

/// Degree machinery for one `Gamma` at one truncation level.
pub struct Engine {
    shape: GammaShape,
    lat: Lattice,
    irreps: Vec<RealIrrep>,
    fd: HashMap<(Component, ClassKey), usize>,
    iso: HashMap<Vec<Component>, Isotropy>,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Engine({:?}, M = {})", self.shape, self.lat.base_level())
    }
}

/// `4 * lcm(modes) * exp(Gamma x Z2)`: every fold occurring in mode `k`
/// divides `k * exp`, so this leaves room for `2n | M`.
pub fn default_level(shape: GammaShape, modes: &[usize]) -> Result<usize> {
    let f = shape.build()?;
    let l = modes.iter().filter(|&&k| k > 0).fold(1, |a, &k| num_integer::lcm(a, k));
    Ok(4 * l * f.exponent())
}

impl Engine {
    pub fn new(shape: GammaShape, level: usize) -> Result<Self> {
        let f = shape.build()?;
        let irreps = minus_irreps(&f)?;
        let lat = Lattice::new(f, level)?;
        Ok(Engine { shape, lat, irreps, fd: HashMap::new(), iso: HashMap::new() })
    }

    /// Runs `job` on an engine at `level`, doubling the level (up to three
    /// times) whenever a fold turns out inadmissible.
    pub fn with_level_retry<T>(shape: GammaShape, level: usize, mut job: impl FnMut(&mut Engine) -> Result<T>) -> Result<(Engine, T)> {
        let mut m = level;
        for _ in 0..4 {
            let mut e = Engine::new(shape, m)?;
            match job(&mut e) {
                Err(Error::InadmissibleLevel { fold, level }) => {
                    log::info!("fold {fold} inadmissible at M = {level}; doubling");
                    m *= 2;
                }
                r => return r.map(|t| (e, t)),
            }
        }
        Err(Error::Instability(format!("no admissible truncation level up to {m}")))
    }

    pub fn shape(&self) -> GammaShape {
        self.shape
    }
    pub fn lattice(&mut self) -> &mut Lattice {
        &mut self.lat
    }
    pub fn lattice_ref(&self) -> &Lattice {
        &self.lat
    }
    pub fn irreps(&self) -> &[RealIrrep] {
        &self.irreps
    }
    pub fn level(&self) -> usize {
        self.lat.base_level()
    }
    pub fn full(&self) -> AmalgamClass {
        self.lat.full_group()
    }
    pub fn unit(&self) -> Element {
        Element::generator(self.full())
    }

    pub fn fixed_dim(&mut self, c: Component, class: &AmalgamClass) -> Result<usize> {
        let key = (c, class.key().clone());
        if let Some(&d) = self.fd.get(&key) {
            return Ok(d);
        }
        let d = rep::fixed_dim(&mut self.lat, &self.irreps, c, class)?;
        self.fd.insert(key, d);
        Ok(d)
    }

    /// Isotropy lattice of `⊕ comps`, each taken once.
    pub fn isotropy(&mut self, comps: &[Component]) -> Result<Isotropy> {
        let mut key = comps.to_vec();
        key.sort();
        key.dedup();
        if let Some(i) = self.iso.get(&key) {
            return Ok(i.clone());
        }
        let i = rep::isotropy(&mut self.lat, &self.irreps, &key)?;
        self.iso.insert(key, i.clone());
        Ok(i)
    }

    pub fn poset(&mut self, comps: &[Component]) -> Result<ClassPoset> {
        let iso = self.isotropy(comps)?;
        self.lat.build_poset(&iso.classes)
    }

    /// `d_H = (-1)^{Σ m_c dim V_c^H}` over the poset.
    pub fn fixed_point_degrees(&mut self, comps: &[(Component, usize)], poset: &ClassPoset) -> Result<Vec<i64>> {
        let mut d = Vec::with_capacity(poset.len());
        for h in poset.classes() {
            let mut s = 0usize;
            for &(c, m) in comps {
                s += m * self.fixed_dim(c, h)?;
            }
            d.push(if s % 2 == 0 { 1 } else { -1 });
        }
        Ok(d)
    }

    /// `deg_{V_c}` via the recurrence.
    pub fn basic_degree(&mut self, c: Component) -> Result<Element> {
        let poset = self.poset(&[c])?;
        let d = self.fixed_point_degrees(&[(c, 1)], &poset)?;
        recurrence(&d, &poset)
    }

    /// `Π deg_{V_c}^{m_c}` reduced by parity, products taken in the
    /// truncation and checked against the working set of the odd part.
    pub fn degree_product(&mut self, comps: &[(Component, usize)]) -> Result<Element> {
        let odd = odd_part(comps);
        if odd.is_empty() {
            return Ok(self.unit());
        }
        let working: BTreeSet<AmalgamClass> = self.isotropy(&odd)?.classes.into_iter().chain([self.full()]).collect();
        let mut acc = self.unit();
        for c in odd {
            let b = self.basic_degree(c)?;
            acc = acc.multiply(&b, &mut self.lat, Some(&working))?;
        }
        Ok(acc)
    }

    /// The same degree straight from the recurrence on the isotropy lattice
    /// of the odd part.
    pub fn degree_direct(&mut self, comps: &[(Component, usize)]) -> Result<Element> {
        let odd = odd_part(comps);
        if odd.is_empty() {
            return Ok(self.unit());
        }
        let poset = self.poset(&odd)?;
        let d = self.fixed_point_degrees(comps, &poset)?;
        recurrence(&d, &poset)
    }

    /// Both routes; any disagreement is a consistency error.
    pub fn degree(&mut self, comps: &[(Component, usize)]) -> Result<Element> {
        let a = self.degree_product(comps)?;
        let b = self.degree_direct(comps)?;
        if a != b {
            return Err(Error::Consistency(format!("product route gives {a} but the recurrence gives {b}")));
        }
        Ok(a)
    }

    /// `omega = (G) - deg`.
    pub fn omega(&mut self, comps: &[(Component, usize)]) -> Result<Element> {
        if comps.iter().all(|&(_, m)| m == 0) {
            return Ok(Element::zero());
        }
        let d = self.degree(comps)?;
        Ok(self.unit().sub(&d))
    }

    /// Maximal orbit types of `V_c \ {0}`.
    pub fn maximal_orbit_types(&mut self, c: Component) -> Result<Vec<AmalgamClass>> {
        Ok(self.isotropy(&[c])?.maximal)
    }

    /// `Σ_l parity(dim V_{k,l}^H) m_{k,l}`.
    pub fn frak_n(&mut self, h: &AmalgamClass, k: usize, mult: &BTreeMap<Component, usize>) -> Result<usize> {
        let mut s = 0;
        for (&c, &m) in mult {
            if c.k == k && m > 0 {
                s += (self.fixed_dim(c, h)? % 2) * m;
            }
        }
        Ok(s)
    }
}

fn odd_part(comps: &[(Component, usize)]) -> Vec<Component> {
    let mut total: BTreeMap<Component, usize> = BTreeMap::new();
    for &(c, m) in comps {
        *total.entry(c).or_insert(0) += m;
    }
    total.into_iter().filter(|(_, m)| m % 2 == 1).map(|(c, _)| c).collect()
}

/// One entry of the representation assignment: `V` contains `mult` copies
/// of the minus-type irreducible `irrep`.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub label: String,
    pub irrep: usize,
    pub mult: usize,
}

/// Everything the degree side needs.
#[derive(Clone, Debug)]
pub struct Problem {
    pub shape: GammaShape,
    pub reps: Vec<Assignment>,
    pub lin: LinearizationSpec,
    /// Search bound for the fold `s` in the degenerate case.
    pub fold_bound: usize,
}

impl Problem {
    /// `(component, m_{k,l})` for every negative eigenvalue.
    pub fn active(&self, sp: &SpectralSummary) -> Vec<(Component, usize)> {
        sp.negative.iter().map(|&(k, l)| (Component::new(k, self.reps[l].irrep), sp.mult[k][l])).collect()
    }
    /// Components of the mode `k` subspace (each irreducible once).
    pub fn mode(&self, k: usize) -> Vec<Component> {
        let mut v: Vec<Component> = self.reps.iter().filter(|a| a.mult > 0).map(|a| Component::new(k, a.irrep)).collect();
        v.sort();
        v.dedup();
        v
    }
    /// `m_{k,l}` summed per irreducible.
    pub fn mult_at(&self, sp: &SpectralSummary, k: usize) -> BTreeMap<Component, usize> {
        let mut out = BTreeMap::new();
        if k <= sp.cutoff {
            for (l, a) in self.reps.iter().enumerate() {
                *out.entry(Component::new(k, a.irrep)).or_insert(0) += sp.mult[k][l];
            }
        }
        out
    }
}

/// An existence conclusion for one maximal-kind orbit type.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub class: AmalgamClass,
    pub fold: usize,
    pub frak_n: usize,
    pub non_constant: bool,
    pub omega_coeff: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub level: usize,
    pub spectral: SpectralSummary,
    /// Basic degrees of the active components.
    pub basic: Vec<(Component, Element)>,
    /// `G-deg(A)`, absent in the degenerate case.
    pub degree: Option<Element>,
    pub omega: Option<Element>,
    /// Maximal orbit types of each examined mode.
    pub maximal: Vec<(usize, Vec<AmalgamClass>)>,
    pub certificates: Vec<Certificate>,
    /// Degenerate case: the fold `s`, or `None` when the search ran out.
    pub fold_s: Option<usize>,
    pub notes: Vec<String>,
}

/// Modes the analysis will look at.
pub fn modes_needed(problem: &Problem, sp: &SpectralSummary) -> Vec<usize> {
    let mut ks: BTreeSet<usize> = sp.negative.iter().map(|&(k, _)| k).collect();
    if !sp.nondegenerate() {
        if let Some(s) = degenerate_fold(&sp.degenerate, problem.fold_bound) {
            ks.extend((1..).map(|j| (2 * j - 1) * s).take_while(|&p| p <= sp.cutoff));
        }
    }
    ks.into_iter().collect()
}

/// Theorems 6.1/6.2 decision procedure at the engine's level.
pub fn existence_analysis(engine: &mut Engine, problem: &Problem) -> Result<DegreeReport> {
    let sp = spectral_summary(&problem.lin)?;
    let mut notes = Vec::new();
    let active = problem.active(&sp);
    let mut basic = Vec::new();
    for &(c, _) in &active {
        if !basic.iter().any(|(d, _)| *d == c) {
            basic.push((c, engine.basic_degree(c)?));
        }
    }
    let (degree, omega, modes, fold_s) = if sp.nondegenerate() {
        let d = engine.degree(&active)?;
        let om = if active.is_empty() { Element::zero() } else { engine.unit().sub(&d) };
        let modes: Vec<usize> = sp.active_modes().into_iter().filter(|&k| k >= 1).collect();
        (Some(d), Some(om), modes, None)
    } else {
        let s = degenerate_fold(&sp.degenerate, problem.fold_bound);
        match s {
            Some(s) => {
                let modes = (1..).map(|j| (2 * j - 1) * s).take_while(|&p| p <= sp.cutoff).collect();
                (None, None, modes, Some(s))
            }
            None => {
                notes.push(format!("degenerate modes {:?}: no fold s <= {} avoids them", sp.degenerate, problem.fold_bound));
                (None, None, Vec::new(), None)
            }
        }
    };
    let mut maximal = Vec::new();
    let mut certificates = Vec::new();
    for k in modes {
        let comps = problem.mode(k);
        if comps.is_empty() {
            continue;
        }
        let iso = engine.isotropy(&comps)?;
        let mult = problem.mult_at(&sp, k);
        for h in &iso.maximal {
            let n = engine.frak_n(h, k, &mult)?;
            if n % 2 == 1 {
                let non_constant = !engine.lattice().contains_o2(h)?;
                let omega_coeff = omega.as_ref().map(|o| o.coeff(h));
                if omega_coeff == Some(0) {
                    notes.push(format!("odd parity at {} but zero omega coefficient", h.label()));
                }
                certificates.push(Certificate { class: h.clone(), fold: k, frak_n: n, non_constant, omega_coeff });
            }
        }
        maximal.push((k, iso.maximal));
    }
    if problem.lin.m % 2 == 0 {
        for k in 0..=sp.cutoff.min(1) {
            for l in 0..problem.reps.len() {
                let a = xi_paper_form(&problem.lin, k, l);
                let b = sp.xi[k][l].value;
                if (a - b).abs() > 1e-12 {
                    notes.push(format!("even m: xi_({k},{l}) = {b} from the exponential form; the simplified form gives {a}"));
                }
            }
        }
    }
    Ok(DegreeReport { level: engine.level(), spectral: sp, basic, degree, omega, maximal, certificates, fold_s, notes })
}

/// Runs the analysis at the default level for the modes it needs, retrying
/// at doubled levels on inadmissible folds.
pub fn analyze(problem: &Problem, level: Option<usize>) -> Result<(Engine, DegreeReport)> {
    let sp = spectral_summary(&problem.lin)?;
    let m = match level {
        Some(m) => m,
        None => default_level(problem.shape, &modes_needed(problem, &sp))?,
    };
    Engine::with_level_retry(problem.shape, m, |e| existence_analysis(e, problem))
}

/// Sign of `det A` on the `H`-fixed part of `V_0 ⊕ ... ⊕ V_{K*}`, computed on
/// an explicit matrix model (Fourier coefficients `(u, v)` of
/// `x(t) = u cos kt + v sin kt`, delays as shifts), independently of the
/// character machinery.
pub fn det_sign_oracle(engine: &mut Engine, problem: &Problem, cutoff: usize, class: &AmalgamClass) -> Result<i64> {
    let level = engine.level();
    let h = engine.lattice().truncate(class, level)?;
    let tg = engine.lattice().group_at(level);
    let irreps = engine.irreps().to_vec();
    // V as a Gamma x Z2 representation, with its mu per block.
    let mut blocks = Vec::new();
    for (l, a) in problem.reps.iter().enumerate() {
        for _ in 0..a.mult {
            blocks.push((l, &irreps[a.irrep]));
        }
    }
    let dv: usize = blocks.iter().map(|(_, r)| r.dim).sum();
    if dv == 0 {
        return Ok(1);
    }
    let rho_v = |f: usize| rep::block_diag(&blocks.iter().map(|(_, r)| r.matrix(f)).collect::<Vec<_>>());
    let m = problem.lin.m;
    let mut sign = 1i64;
    for k in 0..=cutoff {
        let two = k > 0;
        let n = if two { 2 * dv } else { dv };
        let mut p = DMatrix::<f64>::zeros(n, n);
        for &e in h.members() {
            let rv = rho_v(tg.f_part(e));
            let th = TAU * (k * tg.angle_index(e)) as f64 / level as f64;
            let g = if two {
                let (s, c) = th.sin_cos();
                let id = DMatrix::<f64>::identity(dv, dv);
                let mut t = DMatrix::zeros(n, n);
                t.view_mut((0, 0), (dv, dv)).copy_from(&(&id * c));
                t.view_mut((0, dv), (dv, dv)).copy_from(&(&id * s));
                t.view_mut((dv, 0), (dv, dv)).copy_from(&(&id * -s));
                t.view_mut((dv, dv), (dv, dv)).copy_from(&(&id * c));
                if tg.is_reflection(e) {
                    for i in dv..n {
                        for j in 0..n {
                            t[(j, i)] = -t[(j, i)];
                        }
                    }
                }
                t * DMatrix::<f64>::identity(2, 2).kronecker(&rv)
            } else {
                rv
            };
            p += g;
        }
        p /= h.order() as f64;
        let eig = SymmetricEigen::new((&p + p.transpose()) * 0.5);
        let cols: Vec<_> = (0..n).filter(|&i| (eig.eigenvalues[i] - 1.0).abs() < 1e-8).map(|i| eig.eigenvectors.column(i).into_owned()).collect();
        if cols.is_empty() {
            continue;
        }
        let b = DMatrix::from_columns(&cols);
        // A_k = id + (Σ_j mu_j S_j - id)/(k^2 + 1), block by block.
        let mut a = DMatrix::<f64>::zeros(n, n);
        let mut off = 0;
        for (l, r) in &blocks {
            let mu = &problem.lin.mu[*l];
            for j in 0..m {
                let tau = TAU * (j * k) as f64 / m as f64;
                let (s, c) = tau.sin_cos();
                for i in 0..r.dim {
                    let u = off + i;
                    if two {
                        let v = u + dv;
                        a[(u, u)] += mu[j] * c;
                        a[(u, v)] -= mu[j] * s;
                        a[(v, u)] += mu[j] * s;
                        a[(v, v)] += mu[j] * c;
                    } else {
                        a[(u, u)] += mu[j] * c;
                    }
                }
            }
            off += r.dim;
        }
        let id = DMatrix::<f64>::identity(n, n);
        let a = &id + (a - &id) / (1.0 + (k * k) as f64);
        let det = (b.transpose() * a * &b).determinant();
        if det.abs() < 1e-12 {
            return Err(Error::Precision(format!("restricted determinant {det:e} at k = {k}")));
        }
        if det < 0.0 {
            sign = -sign;
        }
    }
    Ok(sign)
}

/// `(-1)^{Σ m_{k,l} dim V_{k,l}^H}` from the characters.
pub fn predicted_sign(engine: &mut Engine, problem: &Problem, sp: &SpectralSummary, class: &AmalgamClass) -> Result<i64> {
    let mut s = 0;
    for (c, m) in problem.active(sp) {
        s += m * engine.fixed_dim(c, class)?;
    }
    Ok(if s % 2 == 0 { 1 } else { -1 })
}
