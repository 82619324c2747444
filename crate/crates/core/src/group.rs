//! Finite groups given by product tables, subgroups as member sets, and the
//! conjugacy bookkeeping (normalizers, Weyl groups, containment counts) built
//! on top of them.
//!
//! The algorithms here are generic over [`Group`] so the same code serves the
//! small table groups `Gamma x Z2` and the much larger dihedral truncations of
//! `O(2) x Gamma x Z2` (see [`crate::lattice`]).

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Default cap on the order of groups whose full subgroup lattice is enumerated.
pub const ENUMERATION_CAP: usize = 10_000;

/// A finite group with elements `0..order`; element 0 is the identity.
pub trait Group {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn generators(&self) -> Vec<usize>;

    /// `x h x^-1`
    fn conj(&self, x: usize, h: usize) -> usize {
        self.mul(self.mul(x, h), self.inv(x))
    }

    fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut p = a;
        while p != 0 {
            p = self.mul(p, a);
            k += 1;
        }
        k
    }
}

/// Structural description, used for naming and for character tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Cyclic(usize),
    Dihedral(usize),
    Product(Box<Shape>, Box<Shape>),
}

#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    gens: Vec<usize>,
    shape: Shape,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl Group for FiniteGroup {
    fn order(&self) -> usize {
        self.order
    }
    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }
    #[inline]
    fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }
    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }
}

impl FiniteGroup {
    fn from_fn(name: String, order: usize, gens: Vec<usize>, shape: Shape, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = vec![0u32; order * order];
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                let c = f(a, b);
                table[a * order + b] = c as u32;
                if c == 0 {
                    inverse[a] = b as u32;
                }
            }
        }
        FiniteGroup { name, order, table, inverse, gens, shape }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Checks associativity, identity and inverses against the table.
    pub fn verify_axioms(&self) -> bool {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a || self.mul(a, self.inv(a)) != 0 {
                return false;
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Conjugacy classes of elements, each sorted, ordered by smallest member.
    pub fn element_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for a in 0..self.order {
            if seen[a] {
                continue;
            }
            let mut cls: Vec<usize> = (0..self.order).map(|x| self.conj(x, a)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &c in &cls {
                seen[c] = true;
            }
            out.push(cls);
        }
        out
    }

    /// Exponent (lcm of element orders).
    pub fn exponent(&self) -> usize {
        (0..self.order).map(|a| self.element_order(a)).fold(1, num_integer::lcm)
    }
}

/// `D_n = <r, s | r^n = s^2 = 1, srs = r^-1>`; `a < n` is `r^a`, `n + a` is `r^a s`.
pub fn make_dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidParameter("dihedral parameter must be >= 1".into()));
    }
    let gens = if n == 1 { vec![1] } else { vec![1, n] };
    Ok(FiniteGroup::from_fn(format!("D{n}"), 2 * n, gens, Shape::Dihedral(n), move |a, b| {
        dihedral_mul(n, a, b)
    }))
}

#[inline]
pub(crate) fn dihedral_mul(n: usize, a: usize, b: usize) -> usize {
    let (ra, sa) = (a % n, a >= n);
    let (rb, sb) = (b % n, b >= n);
    let r = if sa { (ra + n - rb) % n } else { (ra + rb) % n };
    if sa != sb {
        n + r
    } else {
        r
    }
}

pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclic parameter must be >= 1".into()));
    }
    let gens = if n == 1 { vec![] } else { vec![1] };
    Ok(FiniteGroup::from_fn(format!("Z{n}"), n, gens, Shape::Cyclic(n), move |a, b| (a + b) % n))
}

/// Index of `(x, y)` is `x * |b| + y`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let nb = b.order;
    let mut gens: Vec<usize> = a.gens.iter().map(|&g| g * nb).collect();
    gens.extend(b.gens.iter().copied());
    FiniteGroup::from_fn(
        format!("{}x{}", a.name, b.name),
        a.order * nb,
        gens,
        Shape::Product(Box::new(a.shape.clone()), Box::new(b.shape.clone())),
        |x, y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb),
    )
}

/// A subgroup: sorted members, membership bitset and a small generating set.
#[derive(Clone)]
pub struct Subgroup {
    members: Vec<usize>,
    set: FixedBitSet,
    gens: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}
impl Eq for Subgroup {}
impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, gens {:?})", self.members.len(), self.gens)
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }
    pub fn members(&self) -> &[usize] {
        &self.members
    }
    pub fn gens(&self) -> &[usize] {
        &self.gens
    }
    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.set.contains(x)
    }
    pub fn bits(&self) -> &FixedBitSet {
        &self.set
    }
    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        other.order() % self.order() == 0 && self.gens.iter().all(|&g| other.contains(g))
    }
}

/// Subgroup generated by `gens`; redundant generators are dropped.
pub fn closure<G: Group>(g: &G, gens: &[usize]) -> Subgroup {
    let n = g.order();
    let mut set = FixedBitSet::with_capacity(n);
    set.insert(0);
    let mut members = vec![0usize];
    let mut kept: Vec<usize> = Vec::new();
    for &s in gens {
        if set.contains(s) {
            continue;
        }
        kept.push(s);
        // Re-close: every old member times every kept generator, breadth first.
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &t in &kept {
                let y = g.mul(x, t);
                if !set.contains(y) {
                    set.insert(y);
                    members.push(y);
                }
            }
            i += 1;
        }
    }
    members.sort_unstable();
    Subgroup { members, set, gens: kept }
}

pub fn trivial<G: Group>(g: &G) -> Subgroup {
    closure(g, &[])
}

pub fn whole<G: Group>(g: &G) -> Subgroup {
    closure(g, &g.generators())
}

/// Builds a subgroup from a member list known to be closed.
pub fn from_members<G: Group>(g: &G, members: &[usize]) -> Subgroup {
    // Prefer high-order elements as generators to keep the set short.
    let mut order_sorted: Vec<(usize, usize)> = members.iter().map(|&m| (g.element_order(m), m)).collect();
    order_sorted.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut gens = Vec::new();
    let mut cur = trivial(g);
    for (_, m) in order_sorted {
        if cur.order() == members.len() {
            break;
        }
        if !cur.contains(m) {
            gens.push(m);
            cur = closure(g, &gens);
        }
    }
    debug_assert_eq!(cur.order(), members.len());
    cur
}

/// `x H x^-1`
pub fn conjugate<G: Group>(g: &G, h: &Subgroup, x: usize) -> Subgroup {
    let n = g.order();
    let xi = g.inv(x);
    let mut set = FixedBitSet::with_capacity(n);
    let mut members: Vec<usize> = h
        .members
        .iter()
        .map(|&m| {
            let y = g.mul(g.mul(x, m), xi);
            set.insert(y);
            y
        })
        .collect();
    members.sort_unstable();
    let gens = h.gens.iter().map(|&m| g.mul(g.mul(x, m), xi)).collect();
    Subgroup { members, set, gens }
}

/// True if `x H x^-1 <= K`.
#[inline]
pub fn conj_within<G: Group>(g: &G, h: &Subgroup, x: usize, k: &Subgroup) -> bool {
    let xi = g.inv(x);
    h.gens.iter().all(|&m| k.contains(g.mul(g.mul(x, m), xi)))
}

pub fn normalizer<G: Group>(g: &G, h: &Subgroup) -> Subgroup {
    let members: Vec<usize> = (0..g.order()).filter(|&x| conj_within(g, h, x, h)).collect();
    from_members(g, &members)
}

pub fn normalizer_order<G: Group>(g: &G, h: &Subgroup) -> usize {
    (0..g.order()).filter(|&x| conj_within(g, h, x, h)).count()
}

pub fn intersection<G: Group>(g: &G, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let members: Vec<usize> = a.members.iter().copied().filter(|&x| b.contains(x)).collect();
    from_members(g, &members)
}

pub fn is_conjugate<G: Group>(g: &G, h1: &Subgroup, h2: &Subgroup) -> bool {
    h1.order() == h2.order() && (0..g.order()).any(|x| conj_within(g, h1, x, h2))
}

/// All distinct conjugates of `h`, in order of first appearance.
pub fn conjugates<G: Group>(g: &G, h: &Subgroup) -> Vec<Subgroup> {
    let norm = normalizer(g, h);
    let mut covered = FixedBitSet::with_capacity(g.order());
    let mut out = Vec::new();
    for x in 0..g.order() {
        if covered.contains(x) {
            continue;
        }
        // The coset xN yields the same conjugate.
        for &m in norm.members() {
            covered.insert(g.mul(x, m));
        }
        out.push(conjugate(g, h, x));
    }
    out
}

/// `|N(H)| / |H|`
pub fn weyl_order<G: Group>(g: &G, h: &Subgroup) -> usize {
    normalizer_order(g, h) / h.order()
}

/// Number of conjugates of the class representative that contain `h`.
pub fn containment_count<G: Group>(g: &G, h: &Subgroup, kclass: &SubgroupClass) -> usize {
    containment_count_rep(g, h, &kclass.representative)
}

pub fn containment_count_rep<G: Group>(g: &G, h: &Subgroup, k: &Subgroup) -> usize {
    if k.order() % h.order() != 0 {
        return 0;
    }
    // #{x : x^-1 H x <= K} / |N(K)|
    let hits = (0..g.order()).filter(|&x| conj_within(g, h, g.inv(x), k)).count();
    hits / normalizer_order(g, k)
}

#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub id: usize,
    pub representative: Subgroup,
    /// Number of conjugates.
    pub size: usize,
    pub weyl: usize,
    pub name: String,
}

/// Every subgroup, by joining cyclic subgroups until nothing new appears.
pub fn all_subgroups<G: Group>(g: &G, cap: usize) -> Result<Vec<Subgroup>> {
    if g.order() > cap {
        return Err(Error::EnumerationTooLarge { order: g.order(), cap });
    }
    let mut cyclic: Vec<Subgroup> = Vec::new();
    let mut seen: HashSet<Subgroup> = HashSet::new();
    for x in 0..g.order() {
        let c = closure(g, &[x]);
        if seen.insert(c.clone()) {
            cyclic.push(c);
        }
    }
    let mut all: Vec<Subgroup> = cyclic.clone();
    let mut i = 0;
    while i < all.len() {
        let h = all[i].clone();
        for c in &cyclic {
            if c.is_subgroup_of(&h) {
                continue;
            }
            let mut gens = h.gens.clone();
            gens.extend_from_slice(&c.gens);
            let j = closure(g, &gens);
            if seen.insert(j.clone()) {
                all.push(j);
            }
        }
        i += 1;
    }
    all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    Ok(all)
}

pub fn subgroup_classes(g: &FiniteGroup) -> Result<Vec<SubgroupClass>> {
    subgroup_classes_capped(g, ENUMERATION_CAP)
}

pub fn subgroup_classes_capped(g: &FiniteGroup, cap: usize) -> Result<Vec<SubgroupClass>> {
    let subs = all_subgroups(g, cap)?;
    let mut assigned: HashSet<Subgroup> = HashSet::new();
    let mut classes: Vec<(Subgroup, usize)> = Vec::new();
    // `subs` is sorted, so the first unassigned member of a class is its
    // lexicographically smallest conjugate of that order.
    for h in &subs {
        if assigned.contains(h) {
            continue;
        }
        let conjs = conjugates(g, h);
        let size = conjs.len();
        assigned.extend(conjs);
        classes.push((h.clone(), size));
    }
    let names = class_names(g, &classes.iter().map(|(h, _)| h.clone()).collect::<Vec<_>>());
    Ok(classes
        .into_iter()
        .zip(names)
        .enumerate()
        .map(|(id, ((rep, size), name))| SubgroupClass { id, weyl: weyl_order(g, &rep), representative: rep, size, name })
        .collect())
}

/// Index of the class containing `h` (by conjugacy test).
pub fn find_class<G: Group>(g: &G, classes: &[SubgroupClass], h: &Subgroup) -> Option<usize> {
    classes
        .iter()
        .position(|c| c.representative.order() == h.order() && is_conjugate(g, &c.representative, h))
}

// ---------------------------------------------------------------------------
// Naming

/// Label of a subgroup of `D_n` (or `Z_n` when `dihedral` is false) given by
/// its element indices.
pub(crate) fn gamma_subgroup_name(n: usize, dihedral: bool, elems: &[usize]) -> String {
    let d = elems.iter().filter(|&&e| e < n).count();
    let refl: Vec<usize> = elems.iter().filter(|&&e| e >= n).map(|&e| e - n).collect();
    if !dihedral || refl.is_empty() {
        return format!("Z{d}");
    }
    let step = n / d;
    // Two classes of D_d in D_n exactly when n/d is even.
    let tilde = step % 2 == 0 && refl[0] % 2 == 1;
    format!("D{d}{}", if tilde { "t" } else { "" })
}

/// Names for subgroups of `Gamma x Z2` (Gamma dihedral or cyclic) in the
/// plain / product / twisted scheme; anything else gets `H{order}_{i}`.
pub fn class_names(g: &FiniteGroup, reps: &[Subgroup]) -> Vec<String> {
    let raw: Vec<String> = match g.shape() {
        Shape::Product(a, b) if **b == Shape::Cyclic(2) => match **a {
            Shape::Dihedral(n) => reps.iter().map(|h| gamma_z2_name(n, true, h.members())).collect(),
            Shape::Cyclic(n) => reps.iter().map(|h| gamma_z2_name(n, false, h.members())).collect(),
            _ => generic_names(reps),
        },
        Shape::Dihedral(n) => reps.iter().map(|h| gamma_subgroup_name(*n, true, h.members())).collect(),
        Shape::Cyclic(n) => reps.iter().map(|h| gamma_subgroup_name(*n, false, h.members())).collect(),
        _ => generic_names(reps),
    };
    disambiguate(raw)
}

fn generic_names(reps: &[Subgroup]) -> Vec<String> {
    let mut counter = std::collections::BTreeMap::new();
    reps.iter()
        .map(|h| {
            let c = counter.entry(h.order()).or_insert(0usize);
            *c += 1;
            format!("H{}_{}", h.order(), c)
        })
        .collect()
}

pub(crate) fn disambiguate(raw: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(raw.len());
    for (i, name) in raw.iter().enumerate() {
        let dup = raw.iter().filter(|r| *r == name).count() > 1;
        if dup {
            let k = raw[..=i].iter().filter(|r| *r == name).count();
            log::debug!("class name {name} is shared; using suffix _{k}");
            out.push(format!("{name}_{k}"));
        } else {
            out.push(name.clone());
        }
    }
    out
}

/// Element `2*gamma + z` of `Gamma x Z2`.
pub(crate) fn gamma_z2_name(n: usize, dihedral: bool, members: &[usize]) -> String {
    let mut s: Vec<usize> = members.iter().map(|&e| e / 2).collect();
    s.sort_unstable();
    s.dedup();
    let mut k0: Vec<usize> = members.iter().filter(|&&e| e % 2 == 0).map(|&e| e / 2).collect();
    k0.sort_unstable();
    let sname = gamma_subgroup_name(n, dihedral, &s);
    if k0.len() == members.len() {
        return sname;
    }
    if k0.len() == s.len() {
        return format!("{sname}p");
    }
    // Twisted: graph of an epimorphism S -> Z2 with kernel K0.
    let s_dihedral = s.iter().any(|&e| e >= n) && dihedral;
    if !s_dihedral {
        return if s.len() == 2 { "Z2m".to_string() } else { format!("{sname}d") };
    }
    let k0_dihedral = k0.iter().any(|&e| e >= n);
    if !k0_dihedral {
        return format!("{sname}z");
    }
    let kname = gamma_subgroup_name(n, dihedral, &k0);
    if s.len() == 2 * n && kname.ends_with('t') {
        return format!("D{}dh", n / 2);
    }
    format!("{sname}d")
}
