//! Conjugacy classes of closed subgroups of `O(2) x F` (`F = Gamma x Z2`),
//! realized inside the dihedral truncation `D_M x F`.
//!
//! A class is identified by a level-independent [`ClassKey`]: its O(2)-type
//! plus a canonical form of its elements, where a dihedral fold `n` is written
//! in `D_n` coordinates and minimized over the normalizer `D_2n` and over
//! conjugation in `F`.  With `2n | M` every conjugacy, normalizer, containment
//! and double-coset computation in `D_M x F` agrees with the one in
//! `O(2) x F`; each result used downstream is recomputed at `2M` and compared.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{self, dihedral_mul, FiniteGroup, Group, Subgroup};

/// `D_m x F`; element `o * |F| + f`, with `o < m` the rotation `r^o` and
/// `m + a` the reflection `r^a s` (`r` = rotation by `2 pi / m`).
#[derive(Clone, Debug)]
pub struct TruncatedGroup {
    m: usize,
    nf: usize,
    f: Arc<FiniteGroup>,
}

impl TruncatedGroup {
    pub fn new(m: usize, f: Arc<FiniteGroup>) -> Self {
        let nf = f.order();
        TruncatedGroup { m, nf, f }
    }
    pub fn level(&self) -> usize {
        self.m
    }
    pub fn finite(&self) -> &FiniteGroup {
        &self.f
    }
    #[inline]
    pub fn o2_part(&self, e: usize) -> usize {
        e / self.nf
    }
    #[inline]
    pub fn f_part(&self, e: usize) -> usize {
        e % self.nf
    }
    #[inline]
    pub fn compose(&self, o: usize, f: usize) -> usize {
        o * self.nf + f
    }
    #[inline]
    pub fn is_reflection(&self, e: usize) -> bool {
        self.o2_part(e) >= self.m
    }
    /// Rotation angle index (`r^a` or `r^a s` both give `a`).
    #[inline]
    pub fn angle_index(&self, e: usize) -> usize {
        self.o2_part(e) % self.m
    }
}

impl Group for TruncatedGroup {
    fn order(&self) -> usize {
        2 * self.m * self.nf
    }
    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        let o = dihedral_mul(self.m, a / self.nf, b / self.nf);
        o * self.nf + self.f.mul(a % self.nf, b % self.nf)
    }
    #[inline]
    fn inv(&self, a: usize) -> usize {
        let o = a / self.nf;
        let oi = if o < self.m { (self.m - o) % self.m } else { o };
        oi * self.nf + self.f.inv(a % self.nf)
    }
    fn generators(&self) -> Vec<usize> {
        let mut g = vec![self.nf, self.m * self.nf];
        g.extend(self.f.generators());
        g
    }
}

/// O(2)-part of a closed subgroup, up to conjugacy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum O2Kind {
    FullO2,
    SO2,
    Dihedral(usize),
    Cyclic(usize),
}

impl O2Kind {
    pub fn finite_weyl(&self) -> bool {
        !matches!(self, O2Kind::Cyclic(_))
    }
    pub fn fold(&self) -> Option<usize> {
        match self {
            O2Kind::Dihedral(n) | O2Kind::Cyclic(n) => Some(*n),
            _ => None,
        }
    }
    pub fn name(&self) -> String {
        match self {
            O2Kind::FullO2 => "O(2)".into(),
            O2Kind::SO2 => "SO(2)".into(),
            O2Kind::Dihedral(n) => format!("D{n}"),
            O2Kind::Cyclic(n) => format!("Z{n}"),
        }
    }
}

/// Canonical, level-independent description of a conjugacy class.
///
/// `elems` lists `(reflection, index, f)`; for folds, `index` is the position
/// in `D_n` (rotation by `2 pi index / n`, or the reflection with axis angle
/// `pi index / n`); for the SO(2)/O(2) kinds it is 0 and the list is the
/// image in `Z2 x F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    pub kind: O2Kind,
    pub elems: Vec<(bool, u32, u32)>,
}

/// Goursat data `H ^Z x_L ^R K` of a class, names already resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goursat {
    pub h: String,
    pub z: String,
    pub l_order: usize,
    pub l: String,
    pub r: String,
    pub k: String,
    pub k_members: Vec<usize>,
    pub r_members: Vec<usize>,
}

struct ClassInner {
    key: ClassKey,
    label: String,
    goursat: Goursat,
}

/// A conjugacy class of `O(2) x Gamma x Z2` subgroups.  Ordered so that larger
/// classes come first: any `(H) < (K)` has `K` sorting before `H`, and the full
/// group sorts first of all.
#[derive(Clone)]
pub struct AmalgamClass(Arc<ClassInner>);

impl AmalgamClass {
    pub fn key(&self) -> &ClassKey {
        &self.0.key
    }
    pub fn kind(&self) -> O2Kind {
        self.0.key.kind
    }
    pub fn label(&self) -> &str {
        &self.0.label
    }
    pub fn goursat(&self) -> &Goursat {
        &self.0.goursat
    }
    /// 1 for classes containing SO(2), 0 for finite ones (-1 for cyclic folds,
    /// which never enter the Burnside ring).
    pub fn dim(&self) -> i32 {
        match self.kind() {
            O2Kind::FullO2 | O2Kind::SO2 => 1,
            O2Kind::Dihedral(_) => 0,
            O2Kind::Cyclic(_) => -1,
        }
    }
    /// Size of the finite description (the group order for folds).
    pub fn size(&self) -> usize {
        self.0.key.elems.len()
    }
    pub fn finite_weyl(&self) -> bool {
        self.kind().finite_weyl()
    }
    fn sort_key(&self) -> (Reverse<i32>, Reverse<usize>, &ClassKey) {
        (Reverse(self.dim()), Reverse(self.size()), &self.0.key)
    }
}

impl PartialEq for AmalgamClass {
    fn eq(&self, other: &Self) -> bool {
        self.0.key == other.0.key
    }
}
impl Eq for AmalgamClass {}
impl std::hash::Hash for AmalgamClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.key.hash(state)
    }
}
impl PartialOrd for AmalgamClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for AmalgamClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}
impl fmt::Debug for AmalgamClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
impl fmt::Display for AmalgamClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Weyl group order of a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weyl {
    Finite(usize),
    Infinite,
}

/// Partially ordered working set with everything the recurrence needs.
#[derive(Clone, Debug)]
pub struct ClassPoset {
    classes: Vec<AmalgamClass>,
    index: HashMap<ClassKey, usize>,
    n: Vec<Vec<usize>>,
    weyl: Vec<usize>,
}

impl ClassPoset {
    /// Classes in a linear extension of the order, largest first.
    pub fn classes(&self) -> &[AmalgamClass] {
        &self.classes
    }
    pub fn len(&self) -> usize {
        self.classes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
    pub fn position(&self, c: &AmalgamClass) -> Option<usize> {
        self.index.get(c.key()).copied()
    }
    pub fn contains(&self, c: &AmalgamClass) -> bool {
        self.index.contains_key(c.key())
    }
    /// `n(H, (K))` by positions.
    pub fn n_at(&self, h: usize, k: usize) -> usize {
        self.n[h][k]
    }
    pub fn weyl_at(&self, i: usize) -> usize {
        self.weyl[i]
    }
    pub fn leq(&self, h: usize, k: usize) -> bool {
        self.n[h][k] > 0
    }
}

/// Class registry plus truncation machinery for one `F = Gamma x Z2`.
pub struct Lattice {
    f: Arc<FiniteGroup>,
    f_conj: Vec<Vec<u32>>,
    f_names: HashMap<Vec<usize>, String>,
    base: usize,
    verify: bool,
    registry: HashMap<ClassKey, AmalgamClass>,
    labels: HashMap<String, ClassKey>,
    groups: HashMap<usize, Arc<TruncatedGroup>>,
    realized: HashMap<(usize, ClassKey), Arc<Subgroup>>,
    weyl_cache: HashMap<ClassKey, Weyl>,
    n_cache: HashMap<(ClassKey, ClassKey), usize>,
    product_cache: HashMap<(ClassKey, ClassKey), Vec<(AmalgamClass, i64)>>,
    full: Option<AmalgamClass>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(F = {}, M = {}, {} classes)", self.f.name(), self.base, self.registry.len())
    }
}

impl Lattice {
    /// `base` is the truncation level `M` (the rotation subgroup is `Z_M`).
    pub fn new(f: FiniteGroup, base: usize) -> Result<Self> {
        if base < 2 || base % 2 != 0 {
            return Err(Error::InvalidParameter(format!("truncation level must be even and >= 2, got {base}")));
        }
        let n = f.order();
        let f_conj = (0..n).map(|x| (0..n).map(|a| f.conj(x, a) as u32).collect()).collect();
        let classes = group::subgroup_classes(&f)?;
        let mut f_names = HashMap::new();
        for c in &classes {
            for s in group::conjugates(&f, &c.representative) {
                f_names.insert(s.members().to_vec(), c.name.clone());
            }
        }
        let mut lat = Lattice {
            f: Arc::new(f),
            f_conj,
            f_names,
            base,
            verify: true,
            registry: HashMap::new(),
            labels: HashMap::new(),
            groups: HashMap::new(),
            realized: HashMap::new(),
            weyl_cache: HashMap::new(),
            n_cache: HashMap::new(),
            product_cache: HashMap::new(),
            full: None,
        };
        let raw: Vec<_> = (0..n).flat_map(|x| [(false, 0, x), (true, 0, x)]).collect();
        let elems = lat.canonical(O2Kind::FullO2, &raw);
        let full = lat.register(ClassKey { kind: O2Kind::FullO2, elems });
        lat.full = Some(full);
        Ok(lat)
    }

    pub fn finite_group(&self) -> &FiniteGroup {
        &self.f
    }
    pub fn base_level(&self) -> usize {
        self.base
    }
    /// Turn the M-vs-2M comparison off (diagnostics only; on by default).
    pub fn set_verify(&mut self, on: bool) {
        self.verify = on;
    }
    pub fn verifies(&self) -> bool {
        self.verify
    }
    pub fn full_group(&self) -> AmalgamClass {
        self.full.clone().expect("registered in new")
    }
    pub fn class_count(&self) -> usize {
        self.registry.len()
    }
    pub fn by_label(&self, label: &str) -> Option<AmalgamClass> {
        self.labels.get(label).and_then(|k| self.registry.get(k)).cloned()
    }
    pub fn registered(&self) -> Vec<AmalgamClass> {
        let mut v: Vec<_> = self.registry.values().cloned().collect();
        v.sort();
        v
    }

    pub fn group_at(&mut self, m: usize) -> Arc<TruncatedGroup> {
        let f = self.f.clone();
        self.groups.entry(m).or_insert_with(|| Arc::new(TruncatedGroup::new(m, f))).clone()
    }

    fn levels(&self) -> Vec<usize> {
        if self.verify {
            vec![self.base, 2 * self.base]
        } else {
            vec![self.base]
        }
    }

    // -- keys -----------------------------------------------------------------

    fn canonical(&self, kind: O2Kind, raw: &[(bool, usize, usize)]) -> Vec<(bool, u32, u32)> {
        let nf = self.f.order();
        let moves: Vec<(bool, usize)> = match kind {
            O2Kind::Dihedral(n) => (0..n).flat_map(|t| [(false, t), (true, t)]).collect(),
            O2Kind::Cyclic(_) => vec![(false, 0), (true, 0)],
            _ => vec![(false, 0)],
        };
        let n = kind.fold().unwrap_or(1);
        let mut best: Option<Vec<(bool, u32, u32)>> = None;
        let mut buf = Vec::with_capacity(raw.len());
        for x in 0..nf {
            let cx = &self.f_conj[x];
            for &(neg, t) in &moves {
                buf.clear();
                buf.extend(raw.iter().map(|&(refl, i, f)| {
                    let mut j = if neg { (n - i % n) % n } else { i };
                    if refl {
                        j = (j + t) % n;
                    }
                    (refl, j as u32, cx[f])
                }));
                buf.sort_unstable();
                if best.as_ref().is_none_or(|b| buf < *b) {
                    best = Some(buf.clone());
                }
            }
        }
        best.unwrap_or_default()
    }

    fn key_of(&self, tg: &TruncatedGroup, h: &Subgroup) -> Result<ClassKey> {
        let m = tg.level();
        let nf = self.f.order();
        if h.contains(nf) {
            // Contains Z_M x 1: the SO(2)-containing kinds.
            let mut raw: Vec<(bool, usize, usize)> =
                h.members().iter().map(|&e| (tg.is_reflection(e), 0, tg.f_part(e))).collect();
            raw.sort_unstable();
            raw.dedup();
            let kind = if raw.iter().any(|r| r.0) { O2Kind::FullO2 } else { O2Kind::SO2 };
            let elems = self.canonical(kind, &raw);
            return Ok(ClassKey { kind, elems });
        }
        let mut rot = FixedBitSet::with_capacity(m);
        let mut first_refl = None;
        for &e in h.members() {
            if tg.is_reflection(e) {
                first_refl.get_or_insert(tg.angle_index(e));
            } else {
                rot.insert(tg.angle_index(e));
            }
        }
        let n = rot.count_ones(..);
        let step = m / n;
        let Some(j0) = first_refl else {
            let raw: Vec<_> = h.members().iter().map(|&e| (false, tg.angle_index(e) / step, tg.f_part(e))).collect();
            let kind = O2Kind::Cyclic(n);
            return Ok(ClassKey { kind, elems: self.canonical(kind, &raw) });
        };
        if step % 2 != 0 {
            return Err(Error::InadmissibleLevel { fold: n, level: m });
        }
        let j0 = j0 % step;
        let raw: Vec<_> = h
            .members()
            .iter()
            .map(|&e| {
                let a = tg.angle_index(e);
                if tg.is_reflection(e) {
                    (true, ((a + m - j0) % m) / step, tg.f_part(e))
                } else {
                    (false, a / step, tg.f_part(e))
                }
            })
            .collect();
        let kind = O2Kind::Dihedral(n);
        Ok(ClassKey { kind, elems: self.canonical(kind, &raw) })
    }

    fn goursat(&self, key: &ClassKey) -> Goursat {
        let mut k: Vec<usize> = key.elems.iter().map(|e| e.2 as usize).collect();
        k.sort_unstable();
        k.dedup();
        let r: Vec<usize> = key.elems.iter().filter(|e| !e.0 && e.1 == 0).map(|e| e.2 as usize).collect();
        let fname = |s: &[usize]| self.f_names.get(s).cloned().unwrap_or_else(|| format!("H{}", s.len()));
        let l_order = k.len() / r.len();
        let (z, l) = match key.kind {
            O2Kind::FullO2 => {
                let full_kernel = key.elems.contains(&(true, 0, 0));
                (if full_kernel { "O(2)" } else { "SO(2)" }.to_string(), l_name(l_order, false))
            }
            O2Kind::SO2 => ("SO(2)".to_string(), l_name(l_order, false)),
            O2Kind::Dihedral(_) | O2Kind::Cyclic(_) => {
                let zr = key.elems.iter().filter(|e| e.2 == 0 && !e.0).count();
                let zrefl = key.elems.iter().any(|e| e.2 == 0 && e.0);
                let z = if zrefl { format!("D{zr}") } else { format!("Z{zr}") };
                (z, l_name(l_order, !zrefl && matches!(key.kind, O2Kind::Dihedral(_))))
            }
        };
        Goursat { h: key.kind.name(), z, l_order, l, r: fname(&r), k: fname(&k), k_members: k, r_members: r }
    }

    fn register(&mut self, key: ClassKey) -> AmalgamClass {
        if let Some(c) = self.registry.get(&key) {
            return c.clone();
        }
        let g = self.goursat(&key);
        let is_full = key.kind == O2Kind::FullO2 && g.l_order == 1 && g.k_members.len() == self.f.order();
        let base = if is_full {
            "(G)".to_string()
        } else if g.l_order == 1 {
            format!("({} × {})", g.h, g.k)
        } else {
            format!("({} ^{{{}}}×_{{{}}}^{{{}}} {})", g.h, g.z, g.l, g.r, g.k)
        };
        let mut label = base.clone();
        let mut i = 2;
        while self.labels.contains_key(&label) {
            label = format!("{}#{i})", &base[..base.len() - 1]);
            i += 1;
        }
        if label != base {
            log::debug!("label {base} shared by non-conjugate classes; registered as {label}");
        }
        let class = AmalgamClass(Arc::new(ClassInner { key: key.clone(), label: label.clone(), goursat: g }));
        self.labels.insert(label, key.clone());
        self.registry.insert(key, class.clone());
        class
    }

    // -- truncate / lift --------------------------------------------------------

    /// Realizes `class` inside `D_level x F`.
    pub fn truncate(&mut self, class: &AmalgamClass, level: usize) -> Result<Arc<Subgroup>> {
        let ck = (level, class.key().clone());
        if let Some(s) = self.realized.get(&ck) {
            return Ok(s.clone());
        }
        let tg = self.group_at(level);
        let m = level;
        let key = class.key();
        let mut members = Vec::new();
        match key.kind {
            O2Kind::FullO2 | O2Kind::SO2 => {
                if m % 2 != 0 {
                    return Err(Error::InvalidParameter(format!("odd truncation level {m}")));
                }
                for &(refl, _, f) in &key.elems {
                    for a in 0..m {
                        let o = if refl { m + a } else { a };
                        members.push(tg.compose(o, f as usize));
                    }
                }
            }
            O2Kind::Dihedral(n) | O2Kind::Cyclic(n) => {
                let need = if matches!(key.kind, O2Kind::Dihedral(_)) { 2 * n } else { n };
                if m % need != 0 {
                    return Err(Error::InadmissibleLevel { fold: n, level: m });
                }
                let step = m / n;
                for &(refl, i, f) in &key.elems {
                    let a = i as usize * step;
                    let o = if refl { m + a } else { a };
                    members.push(tg.compose(o, f as usize));
                }
            }
        }
        members.sort_unstable();
        let sub = Arc::new(group::from_members(&*tg, &members));
        self.realized.insert(ck, sub.clone());
        Ok(sub)
    }

    /// Class of a subgroup of `D_level x F`.
    pub fn lift(&mut self, h: &Subgroup, level: usize) -> Result<AmalgamClass> {
        let tg = self.group_at(level);
        let key = self.key_of(&tg, h)?;
        Ok(self.register(key))
    }

    // -- counts -------------------------------------------------------------------

    fn weyl_at(&mut self, c: &AmalgamClass, level: usize) -> Result<usize> {
        let tg = self.group_at(level);
        let h = self.truncate(c, level)?;
        Ok(group::weyl_order(&*tg, &h))
    }

    /// `|W(H)|`, or the infinite flag when it grows with the level.
    pub fn weyl_order_amalgam(&mut self, c: &AmalgamClass) -> Result<Weyl> {
        if let Some(w) = self.weyl_cache.get(c.key()) {
            return Ok(*w);
        }
        let a = self.weyl_at(c, self.base)?;
        let b = self.weyl_at(c, 2 * self.base)?;
        let w = if a == b {
            Weyl::Finite(a)
        } else if c.finite_weyl() {
            return Err(Error::Instability(format!("|W{}| is {a} at M = {} but {b} at 2M", c.label(), self.base)));
        } else {
            Weyl::Infinite
        };
        self.weyl_cache.insert(c.key().clone(), w);
        Ok(w)
    }

    pub fn weyl_finite(&mut self, c: &AmalgamClass) -> Result<usize> {
        match self.weyl_order_amalgam(c)? {
            Weyl::Finite(w) => Ok(w),
            Weyl::Infinite => Err(Error::Consistency(format!("{} has infinite Weyl group", c.label()))),
        }
    }

    fn n_at(&mut self, h: &AmalgamClass, k: &AmalgamClass, level: usize) -> Result<usize> {
        let tg = self.group_at(level);
        let hs = self.truncate(h, level)?;
        let ks = self.truncate(k, level)?;
        Ok(group::containment_count_rep(&*tg, &hs, &ks))
    }

    /// `n(H, (K))`: number of conjugates of `K` containing a fixed `H`.
    pub fn n_count_amalgam(&mut self, h: &AmalgamClass, k: &AmalgamClass) -> Result<usize> {
        let ck = (h.key().clone(), k.key().clone());
        if let Some(&v) = self.n_cache.get(&ck) {
            return Ok(v);
        }
        let v = if h == k {
            1
        } else if k.key() == self.full_group().key() {
            1
        } else if k.dim() < h.dim() || (k.dim() == h.dim() && k.size() <= h.size()) {
            0
        } else {
            let mut vals = Vec::new();
            for lv in self.levels() {
                vals.push(self.n_at(h, k, lv)?);
            }
            if vals.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Instability(format!(
                    "n({}, {}) = {:?} across levels {:?}",
                    h.label(),
                    k.label(),
                    vals,
                    self.levels()
                )));
            }
            vals[0]
        };
        self.n_cache.insert(ck, v);
        Ok(v)
    }

    pub fn build_poset(&mut self, classes: &[AmalgamClass]) -> Result<ClassPoset> {
        let mut cl: Vec<AmalgamClass> = classes.to_vec();
        cl.push(self.full_group());
        cl.sort();
        cl.dedup();
        let len = cl.len();
        let mut n = vec![vec![0usize; len]; len];
        let mut weyl = Vec::with_capacity(len);
        for i in 0..len {
            weyl.push(self.weyl_finite(&cl[i])?);
            for j in 0..=i {
                n[i][j] = self.n_count_amalgam(&cl[i], &cl[j])?;
            }
        }
        let index = cl.iter().enumerate().map(|(i, c)| (c.key().clone(), i)).collect();
        Ok(ClassPoset { classes: cl, index, n, weyl })
    }

    // -- products -----------------------------------------------------------------

    fn product_at(&mut self, a: &AmalgamClass, b: &AmalgamClass, level: usize) -> Result<BTreeMap<AmalgamClass, i64>> {
        let tg = self.group_at(level);
        let h = self.truncate(a, level)?;
        let k = self.truncate(b, level)?;
        let order = tg.order();
        let mut seen = FixedBitSet::with_capacity(order);
        let mut out: BTreeMap<AmalgamClass, i64> = BTreeMap::new();
        let mut stack = Vec::new();
        for g in 0..order {
            if seen.contains(g) {
                continue;
            }
            // Flood-fill the double coset HgK.
            seen.insert(g);
            stack.push(g);
            while let Some(x) = stack.pop() {
                for &s in h.gens() {
                    let y = tg.mul(s, x);
                    if !seen.contains(y) {
                        seen.insert(y);
                        stack.push(y);
                    }
                }
                for &s in k.gens() {
                    let y = tg.mul(x, s);
                    if !seen.contains(y) {
                        seen.insert(y);
                        stack.push(y);
                    }
                }
            }
            // H ∩ gKg^-1
            let gi = tg.inv(g);
            let members: Vec<usize> =
                h.members().iter().copied().filter(|&x| k.contains(tg.mul(tg.mul(gi, x), g))).collect();
            let sub = group::from_members(&*tg, &members);
            let c = self.lift(&sub, level)?;
            if c.finite_weyl() {
                *out.entry(c).or_insert(0) += 1;
            } else {
                log::trace!("dropping {} (infinite Weyl group) from {} * {}", c.label(), a.label(), b.label());
            }
        }
        Ok(out)
    }

    /// `(H)·(K)` as a list of `(L, n_L)`.
    pub fn product(&mut self, a: &AmalgamClass, b: &AmalgamClass) -> Result<Vec<(AmalgamClass, i64)>> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let ck = (a.key().clone(), b.key().clone());
        if let Some(v) = self.product_cache.get(&ck) {
            return Ok(v.clone());
        }
        let full = self.full_group();
        let v: Vec<(AmalgamClass, i64)> = if *a == full {
            vec![(b.clone(), 1)]
        } else {
            let mut results = Vec::new();
            for lv in self.levels() {
                results.push(self.product_at(a, b, lv)?);
            }
            if results.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Instability(format!("{} * {} differs between levels", a.label(), b.label())));
            }
            results.swap_remove(0).into_iter().collect()
        };
        self.product_cache.insert(ck, v.clone());
        Ok(v)
    }

    /// Recomputes Weyl orders, n-values and products at `M` and `2M`
    /// independently and lists every disagreement.
    pub fn stability_diff(&mut self, classes: &[AmalgamClass], products: &[(AmalgamClass, AmalgamClass)]) -> Result<Vec<String>> {
        let (m1, m2) = (self.base, 2 * self.base);
        let mut diff = Vec::new();
        for c in classes {
            if !c.finite_weyl() {
                continue;
            }
            let (a, b) = (self.weyl_at(c, m1)?, self.weyl_at(c, m2)?);
            if a != b {
                diff.push(format!("|W{}|: {a} vs {b}", c.label()));
            }
        }
        for h in classes {
            for k in classes {
                let (a, b) = (self.n_at(h, k, m1)?, self.n_at(h, k, m2)?);
                if a != b {
                    diff.push(format!("n({}, {}): {a} vs {b}", h.label(), k.label()));
                }
            }
        }
        for (a, b) in products {
            let (x, y) = (self.product_at(a, b, m1)?, self.product_at(a, b, m2)?);
            if x != y {
                diff.push(format!("{} * {}: {:?} vs {:?}", a.label(), b.label(), x, y));
            }
        }
        Ok(diff)
    }

    /// Whether the class contains `O(2) x 1 x 1`, tested on its realization.
    pub fn contains_o2(&mut self, c: &AmalgamClass) -> Result<bool> {
        let m = self.base;
        let tg = self.group_at(m);
        let h = self.truncate(c, m)?;
        Ok(h.contains(tg.compose(1, 0)) && h.contains(tg.compose(m, 0)))
    }

    /// Class of the subgroup `S x K` for an O(2)-kind `S` and `K <= F`.
    pub fn product_class(&mut self, kind: O2Kind, k_members: &[usize]) -> Result<AmalgamClass> {
        let level = match kind {
            O2Kind::Dihedral(n) => lcm_level(self.base, 2 * n),
            O2Kind::Cyclic(n) => lcm_level(self.base, n),
            _ => self.base,
        };
        let tg = self.group_at(level);
        let os: Vec<usize> = match kind {
            O2Kind::FullO2 => (0..2 * level).collect(),
            O2Kind::SO2 => (0..level).collect(),
            O2Kind::Dihedral(n) => (0..n).flat_map(|i| [i * level / n, level + i * level / n]).collect(),
            O2Kind::Cyclic(n) => (0..n).map(|i| i * level / n).collect(),
        };
        let mut members: Vec<usize> = os.iter().flat_map(|&o| k_members.iter().map(move |&f| (o, f))).map(|(o, f)| tg.compose(o, f)).collect();
        members.sort_unstable();
        let sub = group::from_members(&*tg, &members);
        self.lift(&sub, level)
    }
}

fn lcm_level(base: usize, need: usize) -> usize {
    num_integer::lcm(base, need)
}

fn l_name(order: usize, dihedral_quotient: bool) -> String {
    match order {
        1 => "Z1".into(),
        2 => "Z2".into(),
        o if dihedral_quotient => format!("D{}", o / 2),
        o => format!("Z{o}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, make_cyclic, make_dihedral};

    fn d8z2() -> FiniteGroup {
        direct_product(&make_dihedral(8).unwrap(), &make_cyclic(2).unwrap())
    }

    fn trivial_f() -> FiniteGroup {
        direct_product(&make_cyclic(1).unwrap(), &make_cyclic(2).unwrap())
    }

    #[test]
    fn truncated_group_is_a_group() {
        let f = Arc::new(make_cyclic(2).unwrap());
        let tg = TruncatedGroup::new(4, f);
        let n = tg.order();
        assert_eq!(n, 16);
        for a in 0..n {
            assert_eq!(tg.mul(a, tg.inv(a)), 0);
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(tg.mul(tg.mul(a, b), c), tg.mul(a, tg.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn full_group_truncates_to_everything() {
        let mut lat = Lattice::new(d8z2(), 16).unwrap();
        let g = lat.full_group();
        assert_eq!(g.label(), "(G)");
        let s = lat.truncate(&g, 16).unwrap();
        assert_eq!(s.order(), 32 * 32);
        let tg = lat.group_at(16);
        assert_eq!(lat.lift(&group::whole(&*tg), 16).unwrap(), g);
    }

    #[test]
    fn so2_plain_product() {
        let mut lat = Lattice::new(d8z2(), 8).unwrap();
        let c = lat.product_class(O2Kind::SO2, &[0]).unwrap();
        assert_eq!(c.kind(), O2Kind::SO2);
        assert_eq!(c.label(), "(SO(2) × Z1)");
        let s = lat.truncate(&c, 8).unwrap();
        assert_eq!(s.order(), 8);
        // The same class lifted at a different level.
        let tg16 = lat.group_at(16);
        let sub = group::closure(&*tg16, &[tg16.compose(1, 0)]);
        assert_eq!(lat.lift(&sub, 16).unwrap(), c);
        // Weyl group of SO(2) x 1 is O(2)/SO(2) x F.
        assert_eq!(lat.weyl_order_amalgam(&c).unwrap(), Weyl::Finite(2 * 32));
        let o2 = lat.product_class(O2Kind::FullO2, &[0]).unwrap();
        assert_eq!(lat.n_count_amalgam(&c, &o2).unwrap(), 1);
    }

    #[test]
    fn cyclic_fold_has_infinite_weyl() {
        let mut lat = Lattice::new(trivial_f(), 8).unwrap();
        let c = lat.product_class(O2Kind::Cyclic(1), &[0]).unwrap();
        assert_eq!(lat.weyl_order_amalgam(&c).unwrap(), Weyl::Infinite);
        assert_eq!(lat.weyl_order_amalgam(&lat.full_group()).unwrap(), Weyl::Finite(1));
    }

    #[test]
    fn conjugate_subgroups_lift_to_one_class() {
        let mut lat = Lattice::new(d8z2(), 16).unwrap();
        let tg = lat.group_at(16);
        // D2 generated by r^8 and a reflection, with a twist into F.
        let h = group::closure(&*tg, &[tg.compose(8, 0), tg.compose(16, 1)]);
        let c0 = lat.lift(&h, 16).unwrap();
        for x in [1usize, 5, 17 * 32 + 3, 200] {
            let hx = group::conjugate(&*tg, &h, x);
            assert_eq!(lat.lift(&hx, 16).unwrap(), c0);
        }
        // Off-grid reflection (odd index) is O(2)-conjugate to the on-grid one.
        let off = group::closure(&*tg, &[tg.compose(8, 0), tg.compose(17, 1)]);
        assert_eq!(lat.lift(&off, 16).unwrap(), c0);
        // Round trip at two levels.
        for lv in [16, 32] {
            let t = lat.truncate(&c0, lv).unwrap();
            assert_eq!(lat.lift(&t, lv).unwrap(), c0);
        }
    }

    #[test]
    fn goursat_order_formula() {
        let mut lat = Lattice::new(d8z2(), 16).unwrap();
        let tg = lat.group_at(16);
        let h = group::closure(&*tg, &[tg.compose(8, 1), tg.compose(16, 0)]);
        let c = lat.lift(&h, 16).unwrap();
        let g = c.goursat().clone();
        let hm = match c.kind() {
            O2Kind::Dihedral(n) => 2 * n,
            _ => unreachable!(),
        };
        let t = lat.truncate(&c, 16).unwrap();
        assert_eq!(t.order(), hm * g.k_members.len() / g.l_order);
    }

    #[test]
    fn so2_squares() {
        // O(2)-only subring: F trivial up to the Z2 factor.
        let mut lat = Lattice::new(trivial_f(), 8).unwrap();
        let so2 = lat.product_class(O2Kind::SO2, &[0, 1]).unwrap();
        let p = lat.product(&so2, &so2).unwrap();
        assert_eq!(p, vec![(so2.clone(), 2)]);
        let g = lat.full_group();
        assert_eq!(lat.product(&g, &so2).unwrap(), vec![(so2, 1)]);
    }
}
