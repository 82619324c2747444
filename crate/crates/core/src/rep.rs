//! Isotypic components `W_k ⊗ V_l` of `O(2) x Gamma x Z2`, their fixed-space
//! dimensions and the isotropy lattice of a direct sum of them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::characters::{w_character, w_matrix, RealIrrep};
use crate::cyclotomic::Cyclo;
use crate::error::{Error, Result};
use crate::group::{self, Group};
use crate::lattice::{AmalgamClass, Lattice, O2Kind, TruncatedGroup};

/// `W_k ⊗ V_l`: Fourier mode `k`, minus-type irreducible `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub k: usize,
    pub l: usize,
}

impl Component {
    pub fn new(k: usize, l: usize) -> Self {
        Component { k, l }
    }
    pub fn dim(&self, irreps: &[RealIrrep]) -> usize {
        (if self.k == 0 { 1 } else { 2 }) * irreps[self.l].dim
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V({},{})", self.k, self.l)
    }
}

/// Exact character of a component at an element of the truncation.
pub fn character(tg: &TruncatedGroup, irreps: &[RealIrrep], c: Component, e: usize) -> Cyclo {
    let w = w_character(c.k, tg.level(), tg.angle_index(e), tg.is_reflection(e));
    w.mul(&irreps[c.l].character(tg.f_part(e)))
}

fn fixed_dim_at(lat: &mut Lattice, irreps: &[RealIrrep], c: Component, class: &AmalgamClass, level: usize) -> Result<usize> {
    let tg = lat.group_at(level);
    let h = lat.truncate(class, level)?;
    let mut s = Cyclo::zero(1);
    for &e in h.members() {
        s = s.add(&character(&tg, irreps, c, e));
    }
    let total = s
        .as_integer()
        .ok_or_else(|| Error::Consistency(format!("character sum of {c} over {} is not an integer", class.label())))?;
    let n = h.order() as i64;
    if total < 0 || total % n != 0 {
        return Err(Error::Consistency(format!("average of the {c} character over {} is {total}/{n}", class.label())));
    }
    Ok((total / n) as usize)
}

/// `dim (W_k ⊗ V_l)^H`, by character averaging over the truncation (and again
/// at twice the level when the lattice verifies).
pub fn fixed_dim(lat: &mut Lattice, irreps: &[RealIrrep], c: Component, class: &AmalgamClass) -> Result<usize> {
    if c.l >= irreps.len() {
        return Err(Error::InvalidParameter(format!("irrep index {} out of range", c.l)));
    }
    if c.k >= 1 && class.dim() == 1 {
        // SO(2) acts freely on W_k.
        return Ok(0);
    }
    let m = lcm_for(lat.base_level(), class);
    let d = fixed_dim_at(lat, irreps, c, class, m)?;
    if lat.verifies() {
        let d2 = fixed_dim_at(lat, irreps, c, class, 2 * m)?;
        if d != d2 {
            return Err(Error::Instability(format!("dim {c}^{} is {d} at M = {m} but {d2} at 2M", class.label())));
        }
    }
    Ok(d)
}

fn lcm_for(base: usize, class: &AmalgamClass) -> usize {
    match class.kind() {
        O2Kind::Dihedral(n) => num_integer::lcm(base, 2 * n),
        O2Kind::Cyclic(n) => num_integer::lcm(base, n),
        _ => base,
    }
}

/// Real matrix of `⊕ comps` at an element of the truncation.
pub fn matrix(tg: &TruncatedGroup, irreps: &[RealIrrep], comps: &[Component], e: usize) -> DMatrix<f64> {
    let blocks: Vec<DMatrix<f64>> = comps
        .iter()
        .map(|c| {
            let w = w_matrix(c.k, tg.level(), tg.angle_index(e), tg.is_reflection(e));
            w.kronecker(&irreps[c.l].matrix(tg.f_part(e)))
        })
        .collect();
    block_diag(&blocks)
}

pub fn block_diag(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = DMatrix::zeros(n, n);
    let mut o = 0;
    for b in blocks {
        m.view_mut((o, o), (b.nrows(), b.ncols())).copy_from(b);
        o += b.nrows();
    }
    m
}

const TOL: f64 = 1e-8;

/// A linear subspace, stored by an orthonormal basis and its projector.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub basis: DMatrix<f64>,
    pub proj: DMatrix<f64>,
}

impl Subspace {
    fn from_kernel_of_psd(q: &DMatrix<f64>) -> Self {
        let n = q.nrows();
        let eig = SymmetricEigen::new(q.clone());
        let cols: Vec<_> = (0..n).filter(|&i| eig.eigenvalues[i].abs() < TOL).map(|i| eig.eigenvectors.column(i).into_owned()).collect();
        let basis = if cols.is_empty() { DMatrix::zeros(n, 0) } else { DMatrix::from_columns(&cols) };
        let proj = &basis * basis.transpose();
        Subspace { basis, proj }
    }
    /// Fixed vectors of `a`.
    pub fn fixed(a: &DMatrix<f64>) -> Self {
        let d = a - DMatrix::identity(a.nrows(), a.ncols());
        Self::from_kernel_of_psd(&(d.transpose() * d))
    }
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
    /// `self ∩ ker d`, or `None` when `d` already kills `self`.
    fn cut(&self, d: &DMatrix<f64>) -> Option<Subspace> {
        if self.dim() == 0 {
            return None;
        }
        let m = d * &self.basis;
        if m.norm() < 1e-9 {
            return None;
        }
        let inner = Self::from_kernel_of_psd(&(m.transpose() * m));
        let basis = &self.basis * inner.basis;
        let proj = &basis * basis.transpose();
        Some(Subspace { basis, proj })
    }
    pub fn intersect(&self, o: &Subspace) -> Subspace {
        let n = self.proj.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        Self::from_kernel_of_psd(&((&id - &self.proj) + (&id - &o.proj)))
    }
    pub fn same(&self, o: &Subspace) -> bool {
        self.dim() == o.dim() && (&self.proj - &o.proj).norm() < 1e-6
    }
    pub fn within(&self, o: &Subspace) -> bool {
        (&o.proj * &self.basis - &self.basis).norm() < 1e-6
    }
}

/// Subspaces bucketed by their rounded projector; a near-boundary rounding
/// only costs a duplicate entry.
#[derive(Default)]
struct SubspaceSet {
    buckets: HashMap<Vec<i64>, Vec<DMatrix<f64>>>,
}

impl SubspaceSet {
    /// `true` when `s` is new.
    fn insert(&mut self, s: &Subspace) -> bool {
        let key: Vec<i64> = s.proj.iter().map(|x| (x * 1e6).round() as i64).collect();
        let b = self.buckets.entry(key).or_default();
        if b.iter().any(|p| (p - &s.proj).norm() < 1e-6) {
            return false;
        }
        b.push(s.proj.clone());
        true
    }
}

/// Orbit-type data of a representation.
#[derive(Clone, Debug)]
pub struct Isotropy {
    /// One fixed subspace per orbit type.
    pub subspaces: Vec<Subspace>,
    /// Candidate orbit types with finite Weyl group (a superset of the true
    /// orbit types is harmless for the recurrence).
    pub classes: Vec<AmalgamClass>,
    /// Isotropy classes of generic points of the minimal nonzero fixed
    /// subspaces, filtered to the maximal ones.
    pub maximal: Vec<AmalgamClass>,
}

/// Isotropy lattice of `⊕ comps` (each once), computed exactly over the
/// fixed subspaces of the truncation at the lattice's base level.
pub fn isotropy(lat: &mut Lattice, irreps: &[RealIrrep], comps: &[Component]) -> Result<Isotropy> {
    if comps.is_empty() {
        let full = lat.full_group();
        return Ok(Isotropy { subspaces: Vec::new(), classes: vec![full], maximal: Vec::new() });
    }
    let level = lat.base_level();
    let tg = lat.group_at(level);
    let mats: Vec<DMatrix<f64>> = (0..tg.order()).map(|e| matrix(&tg, irreps, comps, e)).collect();

    // Distinct point fixed spaces, kept as the kernels of `a - 1`.
    let mut seen = SubspaceSet::default();
    let mut moves: Vec<DMatrix<f64>> = Vec::new();
    for a in &mats {
        if seen.insert(&Subspace::fixed(a)) {
            moves.push(a - DMatrix::identity(a.nrows(), a.ncols()));
        }
    }
    let n = mats[0].nrows();

    // Every subspace of the intersection closure is the fixed space of its
    // own stabilizer, so orbits of subspaces match conjugacy classes of
    // stabilizers and one representative per class is enough to expand.
    let mut seen = SubspaceSet::default();
    let mut reps: Vec<(Subspace, AmalgamClass)> = Vec::new();
    let mut known = BTreeSet::new();
    let classify = |u: &Subspace, lat: &mut Lattice| -> Result<AmalgamClass> {
        let members: Vec<usize> =
            (0..tg.order()).filter(|&e| (&mats[e] * &u.basis - &u.basis).norm() < 1e-6).collect();
        let h = group::from_members(&*tg, &members);
        if h.order() != members.len() {
            return Err(Error::IncompleteLattice(format!("stabilizer of a {}-dimensional fixed subspace is not a group", u.dim())));
        }
        let c = lat.lift(&h, level)?;
        if let O2Kind::Dihedral(n) = c.kind() {
            if level % (2 * n) != 0 {
                return Err(Error::InadmissibleLevel { fold: n, level });
            }
        }
        Ok(c)
    };
    let whole = Subspace::fixed(&DMatrix::identity(n, n));
    seen.insert(&whole);
    let c = classify(&whole, lat)?;
    known.insert(c.clone());
    reps.push((whole, c));
    let mut is_min = Vec::new();
    let mut i = 0;
    while i < reps.len() {
        let mut min = reps[i].0.dim() > 0;
        for d in &moves {
            let Some(v) = reps[i].0.cut(d) else { continue };
            if v.dim() > 0 {
                min = false;
            }
            if seen.insert(&v) {
                let c = classify(&v, lat)?;
                if known.insert(c.clone()) {
                    reps.push((v, c));
                }
            }
        }
        is_min.push(min);
        i += 1;
    }
    log::debug!("{} orbit types ({} point fixed spaces) at M = {level}", reps.len(), moves.len());

    let mut classes = BTreeSet::new();
    let mut minimal = Vec::new();
    for (i, (u, c)) in reps.iter().enumerate() {
        if !c.finite_weyl() {
            continue;
        }
        let d: usize = comps.iter().map(|&cp| fixed_dim(lat, irreps, cp, c)).sum::<Result<usize>>()?;
        if d != u.dim() {
            return Err(Error::IncompleteLattice(format!("{} fixes a {}-dimensional subspace but its character gives {d}", c.label(), u.dim())));
        }
        classes.insert(c.clone());
        if is_min[i] {
            minimal.push(c.clone());
        }
    }
    let mut maximal = Vec::new();
    for c in &minimal {
        let mut dominated = false;
        for d in &minimal {
            if d != c && lat.n_count_amalgam(c, d)? > 0 {
                dominated = true;
            }
        }
        if !dominated {
            maximal.push(c.clone());
        }
    }
    maximal.sort();
    Ok(Isotropy { subspaces: reps.into_iter().map(|r| r.0).collect(), classes: classes.into_iter().collect(), maximal })
}
