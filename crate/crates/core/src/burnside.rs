//! The Burnside ring as a sparse free module, with products delegated to a
//! [`ProductTable`] and the recurrence that turns fixed-point degrees into
//! coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{self, FiniteGroup, Group, SubgroupClass};
use crate::lattice::{AmalgamClass, ClassPoset, Lattice};

/// Finitely supported integer combination of classes.  Zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BurnsideElement<C: Ord> {
    terms: BTreeMap<C, i64>,
}

impl<C: Ord + Clone> Default for BurnsideElement<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Ord + Clone> BurnsideElement<C> {
    pub fn zero() -> Self {
        BurnsideElement { terms: BTreeMap::new() }
    }
    pub fn generator(c: C) -> Self {
        Self::from_terms([(c, 1)])
    }
    pub fn from_terms(it: impl IntoIterator<Item = (C, i64)>) -> Self {
        let mut e = Self::zero();
        for (c, v) in it {
            e.add_term(c, v);
        }
        e
    }
    pub fn add_term(&mut self, c: C, v: i64) {
        if v == 0 {
            return;
        }
        let slot = self.terms.entry(c.clone()).or_insert(0);
        *slot += v;
        if *slot == 0 {
            self.terms.remove(&c);
        }
    }
    pub fn coeff(&self, c: &C) -> i64 {
        self.terms.get(c).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (&C, i64)> {
        self.terms.iter().map(|(c, &v)| (c, v))
    }
    pub fn support(&self) -> impl Iterator<Item = &C> {
        self.terms.keys()
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut e = self.clone();
        for (c, v) in o.iter() {
            e.add_term(c.clone(), v);
        }
        e
    }
    pub fn neg(&self) -> Self {
        self.scale(-1)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.iter().map(|(c, v)| (c.clone(), v * k)))
    }

    /// Bilinear product.  With a working set, any product class outside it
    /// is reported as a class escape.
    pub fn multiply<T: ProductTable<C>>(&self, o: &Self, table: &mut T, working: Option<&BTreeSet<C>>) -> Result<Self> {
        let mut out = Self::zero();
        let mut escaped = BTreeSet::new();
        for (a, x) in self.iter() {
            for (b, y) in o.iter() {
                for (c, n) in table.product(a, b)? {
                    if let Some(w) = working {
                        if !w.contains(&c) {
                            escaped.insert(table.describe(&c));
                        }
                    }
                    out.add_term(c, x * y * n);
                }
            }
        }
        if !escaped.is_empty() {
            return Err(Error::ClassEscape(escaped.into_iter().collect()));
        }
        Ok(out)
    }

    /// `self^n`.
    pub fn pow<T: ProductTable<C>>(&self, n: u32, unit: &Self, table: &mut T) -> Result<Self> {
        let mut acc = unit.clone();
        for _ in 0..n {
            acc = acc.multiply(self, table, None)?;
        }
        Ok(acc)
    }
}

/// Source of generator products `(H)·(K) = Σ n_L (L)`.
pub trait ProductTable<C> {
    fn product(&mut self, a: &C, b: &C) -> Result<Vec<(C, i64)>>;
    fn describe(&self, c: &C) -> String;
}

impl ProductTable<AmalgamClass> for Lattice {
    fn product(&mut self, a: &AmalgamClass, b: &AmalgamClass) -> Result<Vec<(AmalgamClass, i64)>> {
        Lattice::product(self, a, b)
    }
    fn describe(&self, c: &AmalgamClass) -> String {
        c.label().to_string()
    }
}

pub type Element = BurnsideElement<AmalgamClass>;

impl fmt::Display for BurnsideElement<AmalgamClass> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (c, v)) in self.iter().enumerate() {
            let sign = if v < 0 { "-" } else { "+" };
            match (i, v.abs()) {
                (0, _) if v < 0 => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if v.abs() != 1 {
                write!(f, "{}", v.abs())?;
            }
            f.write_str(c.label())?;
        }
        Ok(())
    }
}

impl<C: Ord + fmt::Debug> fmt::Debug for BurnsideElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl Element {
    /// `(label, coefficient)` pairs in display order.
    pub fn to_pairs(&self) -> Vec<(String, i64)> {
        self.iter().map(|(c, v)| (c.label().to_string(), v)).collect()
    }

    /// Inverse of `Display`, resolving labels through `lookup`.
    pub fn parse(text: &str, lookup: impl Fn(&str) -> Option<AmalgamClass>) -> Result<Self> {
        let s = text.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let b = s.as_bytes();
        let mut out = Self::zero();
        let mut i = 0;
        let err = |m: &str, at: usize| Error::Parse(format!("{m} at byte {at} in {s:?}"));
        let mut first = true;
        while i < b.len() {
            while i < b.len() && b[i] == b' ' {
                i += 1;
            }
            let mut sign = 1;
            if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
                if b[i] == b'-' {
                    sign = -1;
                }
                i += 1;
                while i < b.len() && b[i] == b' ' {
                    i += 1;
                }
            } else if !first {
                return Err(err("expected + or -", i));
            }
            first = false;
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: i64 = if i > start { s[start..i].parse().map_err(|_| err("bad coefficient", start))? } else { 1 };
            if i >= b.len() || b[i] != b'(' {
                return Err(err("expected '('", i));
            }
            let open = i;
            let mut depth = 0;
            while i < b.len() {
                match b[i] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            if depth != 0 {
                return Err(err("unbalanced parentheses", open));
            }
            let label = &s[open..=i];
            let c = lookup(label).ok_or_else(|| Error::Parse(format!("unknown class {label}")))?;
            out.add_term(c, sign * coeff);
            i += 1;
        }
        Ok(out)
    }
}

/// Coefficients from fixed-point degrees:
/// `n_H = (d_H - Σ_{L > H} n_L n(H, L) |W(L)|) / |W(H)|`, largest classes
/// first.  An inexact division is an error.
pub fn recurrence(d: &[i64], poset: &ClassPoset) -> Result<Element> {
    if d.len() != poset.len() {
        return Err(Error::InvalidParameter(format!("{} degrees for {} classes", d.len(), poset.len())));
    }
    let mut n = vec![0i64; poset.len()];
    for i in 0..poset.len() {
        let mut num = d[i];
        for (j, &nj) in n.iter().enumerate().take(i) {
            if nj != 0 {
                num -= nj * poset.n_at(i, j) as i64 * poset.weyl_at(j) as i64;
            }
        }
        let w = poset.weyl_at(i) as i64;
        if num % w != 0 {
            return Err(Error::InconsistentDegree { class: poset.classes()[i].label().to_string(), numerator: num, weyl: w });
        }
        n[i] = num / w;
    }
    Ok(Element::from_terms(poset.classes().iter().cloned().zip(n)))
}

/// `d_H = Σ_{L >= H} n_L n(H, L) |W(L)|`; the inverse of [`recurrence`].
pub fn reconstruct(e: &Element, poset: &ClassPoset) -> Result<Vec<i64>> {
    let mut d = vec![0i64; poset.len()];
    for (c, v) in e.iter() {
        let j = poset
            .position(c)
            .ok_or_else(|| Error::ClassEscape(vec![c.label().to_string()]))?;
        for (i, di) in d.iter_mut().enumerate().skip(j) {
            *di += v * poset.n_at(i, j) as i64 * poset.weyl_at(j) as i64;
        }
    }
    Ok(d)
}

/// Burnside ring of a finite group, indexed by subgroup-class position.
pub struct FiniteBurnside<'a> {
    pub group: &'a FiniteGroup,
    pub classes: Vec<SubgroupClass>,
}

impl<'a> FiniteBurnside<'a> {
    pub fn new(group: &'a FiniteGroup) -> Result<Self> {
        Ok(FiniteBurnside { group, classes: group::subgroup_classes(group)? })
    }
}

impl ProductTable<usize> for FiniteBurnside<'_> {
    /// Double cosets `HgK`, each contributing the class of `H ∩ gKg^-1`.
    fn product(&mut self, a: &usize, b: &usize) -> Result<Vec<(usize, i64)>> {
        let g = self.group;
        let h = &self.classes[*a].representative;
        let k = &self.classes[*b].representative;
        let mut seen = vec![false; g.order()];
        let mut out = BTreeMap::new();
        for x in 0..g.order() {
            if seen[x] {
                continue;
            }
            for &hh in h.members() {
                for &kk in k.members() {
                    seen[g.mul(g.mul(hh, x), kk)] = true;
                }
            }
            let xi = g.inv(x);
            let members: Vec<usize> =
                h.members().iter().copied().filter(|&y| k.contains(g.mul(g.mul(xi, y), x))).collect();
            let sub = group::from_members(g, &members);
            let c = group::find_class(g, &self.classes, &sub)
                .ok_or_else(|| Error::Consistency("intersection outside the class list".into()))?;
            *out.entry(c).or_insert(0) += 1;
        }
        Ok(out.into_iter().collect())
    }
    fn describe(&self, c: &usize) -> String {
        self.classes[*c].name.clone()
    }
}
