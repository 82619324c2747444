//! Characters and real irreducible representations of `Gamma x Z2` for
//! dihedral or cyclic `Gamma`, plus the O(2)-modes `W_k`.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use nalgebra::DMatrix;

use crate::cyclotomic::Cyclo;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Group, Shape};

/// The shape `Gamma x Z2` that everything downstream assumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaShape {
    Dihedral(usize),
    Cyclic(usize),
}

impl GammaShape {
    pub fn of(f: &FiniteGroup) -> Result<Self> {
        match f.shape() {
            Shape::Product(a, b) if **b == Shape::Cyclic(2) => match **a {
                Shape::Dihedral(n) => Ok(GammaShape::Dihedral(n)),
                Shape::Cyclic(n) => Ok(GammaShape::Cyclic(n)),
                _ => Err(Error::UnsupportedGroup(f.name().to_string())),
            },
            _ => Err(Error::UnsupportedGroup(format!("{} is not Gamma x Z2", f.name()))),
        }
    }
    /// `Gamma x Z2` as a table group.
    pub fn build(&self) -> Result<FiniteGroup> {
        let g = match self {
            GammaShape::Dihedral(n) => crate::group::make_dihedral(*n)?,
            GammaShape::Cyclic(n) => crate::group::make_cyclic(*n)?,
        };
        Ok(crate::group::direct_product(&g, &crate::group::make_cyclic(2)?))
    }
    pub fn n(&self) -> usize {
        match self {
            GammaShape::Dihedral(n) | GammaShape::Cyclic(n) => *n,
        }
    }
    /// `(rotation power, is reflection)` of a Gamma element index.
    fn decode(&self, g: usize) -> (usize, bool) {
        let n = self.n();
        (g % n, g >= n)
    }
}

/// Complex character table; rows are irreducibles, columns element classes.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub rows: Vec<Vec<Cyclo>>,
    pub order: usize,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn degree(&self, i: usize) -> i64 {
        self.rows[i][self.class_of[0]].as_integer().expect("degree is an integer")
    }
    /// First and second orthogonality, exactly.
    pub fn orthogonal(&self) -> bool {
        let h = self.rows.len();
        for i in 0..h {
            for j in 0..h {
                let mut s = Cyclo::zero(1);
                for (c, cls) in self.classes.iter().enumerate() {
                    s = s.add(&self.rows[i][c].mul(&self.rows[j][c].conj()).scale(cls.len() as i64));
                }
                let want = if i == j { self.order as i64 } else { 0 };
                if s.as_integer() != Some(want) {
                    return false;
                }
            }
        }
        for a in 0..self.classes.len() {
            for b in 0..self.classes.len() {
                let mut s = Cyclo::zero(1);
                for row in &self.rows {
                    s = s.add(&row[a].mul(&row[b].conj()));
                }
                let want = if a == b { (self.order / self.classes[a].len()) as i64 } else { 0 };
                if s.as_integer() != Some(want) {
                    return false;
                }
            }
        }
        true
    }
}

fn cmp_char(a: &[Cyclo], b: &[Cyclo]) -> Ordering {
    let q = |z: &Cyclo| {
        let (re, im) = z.to_complex();
        ((re * 1e9).round() as i64, (im * 1e9).round() as i64)
    };
    // Descending, so the trivial character leads.
    a.iter().map(q).cmp(b.iter().map(q)).reverse()
}

fn gamma_chars(shape: GammaShape) -> Vec<Box<dyn Fn(usize) -> Cyclo>> {
    let n = shape.n();
    let mut out: Vec<Box<dyn Fn(usize) -> Cyclo>> = Vec::new();
    match shape {
        GammaShape::Cyclic(_) => {
            for j in 0..n {
                out.push(Box::new(move |g| Cyclo::root(n, (j * g) as i64)));
            }
        }
        GammaShape::Dihedral(_) => {
            out.push(Box::new(|_| Cyclo::int(1, 1)));
            out.push(Box::new(move |g| Cyclo::int(1, if g >= n { -1 } else { 1 })));
            if n % 2 == 0 {
                for sign_s in [1i64, -1] {
                    out.push(Box::new(move |g| {
                        let (a, refl) = (g % n, g >= n);
                        let v = if a % 2 == 0 { 1 } else { -1 };
                        Cyclo::int(1, if refl { v * sign_s } else { v })
                    }));
                }
            }
            for j in 1..n.div_ceil(2) {
                if 2 * j == n {
                    continue;
                }
                out.push(Box::new(move |g| {
                    if g >= n {
                        Cyclo::zero(n)
                    } else {
                        Cyclo::two_cos(n, (j * g) as i64)
                    }
                }));
            }
        }
    }
    out
}

/// Character table of `Gamma x Z2`, rows ordered by degree then descending
/// character vector.
pub fn character_table(f: &FiniteGroup) -> Result<CharacterTable> {
    let shape = GammaShape::of(f)?;
    let classes = f.element_classes();
    let mut class_of = vec![0; f.order()];
    for (i, c) in classes.iter().enumerate() {
        for &e in c {
            class_of[e] = i;
        }
    }
    let mut rows = Vec::new();
    for chi in gamma_chars(shape) {
        for eps in [1i64, -1] {
            let row: Vec<Cyclo> = classes
                .iter()
                .map(|c| {
                    let e = c[0];
                    let z = if e % 2 == 1 { eps } else { 1 };
                    chi(e / 2).scale(z)
                })
                .collect();
            rows.push(row);
        }
    }
    let deg = |r: &Vec<Cyclo>| r[0].as_integer().unwrap_or(0);
    rows.sort_by(|a, b| deg(a).cmp(&deg(b)).then_with(|| cmp_char(a, b)));
    Ok(CharacterTable { classes, class_of, rows, order: f.order() })
}

/// A real irreducible representation of `Gamma x Z2` on which `Z2` acts by -1.
#[derive(Clone, Debug)]
pub struct RealIrrep {
    pub name: String,
    pub dim: usize,
    shape: GammaShape,
    /// 0 for one-dimensional ones; `j` for the plane `r -> R(2 pi j / n)`.
    j: usize,
    /// For one-dimensional ones: sign on `r`, sign on `s`.
    signs: (i64, i64),
}

impl RealIrrep {
    pub fn is_gamma_trivial(&self) -> bool {
        self.dim == 1 && self.signs == (1, 1)
    }
    /// The plane on which `r` acts by rotation through `2 pi / n`.
    pub fn is_natural(&self) -> bool {
        self.dim == 2 && self.j == 1
    }
    /// Exact character value at an element of `Gamma x Z2`.
    pub fn character(&self, e: usize) -> Cyclo {
        let n = self.shape.n();
        let z = if e % 2 == 1 { -1 } else { 1 };
        let (a, refl) = self.shape.decode(e / 2);
        let v = if self.dim == 1 {
            let r = if a % 2 == 1 { self.signs.0 } else { 1 };
            Cyclo::int(1, if refl { r * self.signs.1 } else { r })
        } else if refl {
            Cyclo::zero(n)
        } else {
            Cyclo::two_cos(n, (self.j * a) as i64)
        };
        v.scale(z)
    }
    /// Orthogonal matrix of an element of `Gamma x Z2`.
    pub fn matrix(&self, e: usize) -> DMatrix<f64> {
        let z = if e % 2 == 1 { -1.0 } else { 1.0 };
        let (a, refl) = self.shape.decode(e / 2);
        if self.dim == 1 {
            let r = if a % 2 == 1 { self.signs.0 } else { 1 };
            let v = if refl { r * self.signs.1 } else { r };
            return DMatrix::from_element(1, 1, z * v as f64);
        }
        let t = TAU * (self.j * a) as f64 / self.shape.n() as f64;
        let m = rotation(t);
        let m = if refl { m * reflection() } else { m };
        m * z
    }
}

pub fn rotation(t: f64) -> DMatrix<f64> {
    let (s, c) = t.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

pub fn reflection() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Real irreducibles with antipodal `Z2`, the `Gamma`-trivial one first.
pub fn minus_irreps(f: &FiniteGroup) -> Result<Vec<RealIrrep>> {
    let shape = GammaShape::of(f)?;
    let n = shape.n();
    let mut out = Vec::new();
    let mk = |name: String, dim, j, signs| RealIrrep { name, dim, shape, j, signs };
    out.push(mk("trivial".into(), 1, 0, (1, 1)));
    match shape {
        GammaShape::Dihedral(_) => {
            out.push(mk("sign".into(), 1, 0, (1, -1)));
            if n % 2 == 0 {
                out.push(mk("alt".into(), 1, 0, (-1, 1)));
                out.push(mk("alt-sign".into(), 1, 0, (-1, -1)));
            }
        }
        GammaShape::Cyclic(_) => {
            if n % 2 == 0 {
                out.push(mk("alt".into(), 1, 0, (-1, 1)));
            }
        }
    }
    for j in 1..n.div_ceil(2) {
        if 2 * j != n {
            out.push(mk(format!("rho{j}"), 2, j, (1, 1)));
        }
    }
    // Order by degree, then descending character vector over element classes.
    let classes = f.element_classes();
    let cv = |r: &RealIrrep| classes.iter().map(|c| r.character(c[0])).collect::<Vec<_>>();
    out.sort_by(|a, b| {
        a.dim.cmp(&b.dim).then_with(|| b.is_gamma_trivial().cmp(&a.is_gamma_trivial())).then_with(|| cmp_char(&cv(a), &cv(b)))
    });
    Ok(out)
}

/// Character of `W_k` at a truncated O(2) element (`a` = angle index at
/// level `m`): `2cos(2 pi k a / m)` on rotations, 0 on reflections; `W_0`
/// is the trivial line.
pub fn w_character(k: usize, m: usize, a: usize, refl: bool) -> Cyclo {
    if k == 0 {
        Cyclo::int(1, 1)
    } else if refl {
        Cyclo::zero(1)
    } else {
        Cyclo::two_cos(m, (k * a) as i64)
    }
}

/// Matrix of `W_k`: rotation by `k` times the angle, `kappa` as conjugation.
pub fn w_matrix(k: usize, m: usize, a: usize, refl: bool) -> DMatrix<f64> {
    if k == 0 {
        return DMatrix::from_element(1, 1, 1.0);
    }
    let r = rotation(TAU * ((k * a) % m) as f64 / m as f64);
    if refl {
        r * reflection()
    } else {
        r
    }
}
