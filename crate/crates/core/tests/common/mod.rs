#![allow(dead_code)]

use o2deg::characters::{minus_irreps, GammaShape};
use o2deg::pipeline::{Assignment, Problem};
use o2deg::spectral::LinearizationSpec;
use std::collections::BTreeMap;

use o2deg::group::{self, find_class, FiniteGroup, Group};
use rand::Rng;

pub const NATURAL: usize = 4;

pub const DEG01: &str = "(G) - (O(2) × D2d) - (O(2) × D2td) + (O(2) × Z2m)";

pub const DEG11: &str = "(G) - (D8 ^{Z1}×_{D8}^{Z2m} D8p) - (D2 ^{D1}×_{Z2}^{D2d} D2p) - (D2 ^{D1}×_{Z2}^{D2td} D2tp) \
+ (D2 ^{D1}×_{Z2}^{Z2m} Z2p) + (D2 ^{Z1}×_{D2}^{Z2m} D2p) + (D2 ^{Z1}×_{D2}^{Z2m} D2tp)";

pub const OMEGA: &str = "(O(2) × D2d) + (O(2) × D2td) - (O(2) × Z2m) + (D8 ^{Z1}×_{D8}^{Z2m} D8p) \
+ (D2 ^{D1}×_{Z2}^{D2d} D2p) + (D2 ^{D1}×_{Z2}^{D2td} D2tp) - (D1 × D2d) - (D1 × D2td) \
- (D2 ^{D1}×_{Z2}^{Z2m} Z2p) - (D2 ^{Z1}×_{D2}^{Z2m} D2p) - (D2 ^{Z1}×_{D2}^{Z2m} D2tp) \
- (D2 ^{D1}×_{Z2}^{Z2m} D2d) - (D2 ^{D1}×_{Z2}^{Z2m} D2td) + 2(D1 × Z2m) \
+ (D1 ^{Z1}×_{Z2}^{Z2m} D2d) + (D1 ^{Z1}×_{Z2}^{Z2m} D2td)";

/// As printed in the source display (coefficients -2/+2 at three classes).
pub const DEG11_PRINTED: &str = "(G) - 2(D8 ^{Z1}×_{D8}^{Z2m} D8p) - (D2 ^{D1}×_{Z2}^{D2d} D2p) - (D2 ^{D1}×_{Z2}^{D2td} D2tp) \
+ (D2 ^{D1}×_{Z2}^{Z2m} Z2p) + 2(D2 ^{Z1}×_{D2}^{Z2m} D2p) + 2(D2 ^{Z1}×_{D2}^{Z2m} D2tp)";

pub const OMEGA_PRINTED: &str = "(O(2) × D2d) + (O(2) × D2td) - (O(2) × Z2m) + 2(D8 ^{Z1}×_{D8}^{Z2m} D8p) \
+ (D2 ^{D1}×_{Z2}^{D2d} D2p) + (D2 ^{D1}×_{Z2}^{D2td} D2tp) - (D1 × D2d) - (D1 × D2td) \
- (D2 ^{D1}×_{Z2}^{Z2m} Z2p) - 2(D2 ^{Z1}×_{D2}^{Z2m} D2p) - 2(D2 ^{Z1}×_{D2}^{Z2m} D2tp) \
- (D2 ^{D1}×_{Z2}^{Z2m} D2d) - (D2 ^{D1}×_{Z2}^{Z2m} D2td) + 2(D1 × Z2m) \
+ 2(D1 ^{Z1}×_{Z2}^{Z2m} D2d) + 2(D1 ^{Z1}×_{Z2}^{Z2m} D2td)";

pub const MAX_ORB: [&str; 3] = ["(D8 ^{Z1}×_{D8}^{Z2m} D8p)", "(D2 ^{D1}×_{Z2}^{D2d} D2p)", "(D2 ^{D1}×_{Z2}^{D2td} D2tp)"];

pub fn problem(shape: GammaShape, reps: &[(usize, usize)], m: usize, mu: Vec<Vec<f64>>) -> Problem {
    let lin = LinearizationSpec::new(m, mu, reps.iter().map(|r| r.1).collect()).unwrap();
    Problem {
        shape,
        reps: reps.iter().map(|&(irrep, mult)| Assignment { label: format!("irrep {irrep}"), irrep, mult }).collect(),
        lin,
        fold_bound: 64,
    }
}

/// Natural D8 plane, one copy, with one delay table.
pub fn paper(m: usize, mu: &[f64]) -> Problem {
    problem(GammaShape::Dihedral(8), &[(NATURAL, 1)], m, vec![mu.to_vec()])
}

/// A reversible row with entries in quarter steps and `sum |mu| <= cap`.
pub fn random_row(rng: &mut impl Rng, m: usize, cap: f64) -> Vec<f64> {
    loop {
        let mut row = vec![0.0; m];
        row[0] = rng.gen_range(-12..=2) as f64 / 4.0;
        for j in 1..m {
            if 2 * j <= m {
                let v = rng.gen_range(-6..=6) as f64 / 4.0;
                row[j] = v;
                row[m - j] = v;
            }
        }
        if row.iter().map(|x| x.abs()).sum::<f64>() <= cap {
            return row;
        }
    }
}

/// Random nondegenerate-or-not spec over small dihedral groups; the caller
/// filters as needed.
pub fn random_problem(rng: &mut impl Rng) -> Problem {
    let ms = [1, 2, 3, 4, 6];
    let m = ms[rng.gen_range(0..ms.len())];
    let shapes = [GammaShape::Dihedral(8), GammaShape::Dihedral(4), GammaShape::Dihedral(3)];
    let shape = shapes[rng.gen_range(0..shapes.len())];
    let count = minus_irreps(&shape.build().unwrap()).unwrap().len();
    let entries = rng.gen_range(1..=2);
    let mut reps: Vec<(usize, usize)> = Vec::new();
    while reps.len() < entries {
        let l = rng.gen_range(0..count);
        if reps.iter().all(|r| r.0 != l) {
            // mostly odd, so degrees do not collapse to the unit
            reps.push((l, [1, 1, 1, 2, 3][rng.gen_range(0..5)]));
        }
    }
    let mu = reps.iter().map(|_| random_row(rng, m, 3.75)).collect();
    problem(shape, &reps, m, mu)
}

/// `G`-orbits on `G/H x G/K` by direct partition of the point set.
pub fn orbit_product(g: &FiniteGroup, classes: &[group::SubgroupClass], a: usize, b: usize) -> Vec<(usize, i64)> {
    let cosets = |h: &group::Subgroup| {
        let mut index = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in 0..g.order() {
            if index[x] == usize::MAX {
                for &m in h.members() {
                    index[g.mul(x, m)] = reps.len();
                }
                reps.push(x);
            }
        }
        (index, reps)
    };
    let (h, k) = (&classes[a].representative, &classes[b].representative);
    let (hi, hr) = cosets(h);
    let (ki, kr) = cosets(k);
    let mut seen = vec![false; hr.len() * kr.len()];
    let mut out = BTreeMap::new();
    for p in 0..seen.len() {
        if seen[p] {
            continue;
        }
        let (x, y) = (hr[p / kr.len()], kr[p % kr.len()]);
        for z in 0..g.order() {
            seen[hi[g.mul(z, x)] * kr.len() + ki[g.mul(z, y)]] = true;
        }
        let stab: Vec<usize> = (0..g.order()).filter(|&z| hi[g.mul(z, x)] == hi[x] && ki[g.mul(z, y)] == ki[y]).collect();
        let sub = group::from_members(g, &stab);
        *out.entry(find_class(g, classes, &sub).unwrap()).or_insert(0) += 1;
    }
    out.into_iter().collect()
}
