//! Eigenvalues `xi_{k,l}` of the linearization on the isotypic components,
//! the negative spectrum, multiplicities and the degenerate-mode search.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::cyclotomic_poly;
use crate::error::{Error, Result};

/// Delay count `m` and the table `mu[l][j]`, `j = 0..m`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationSpec {
    pub m: usize,
    pub mu: Vec<Vec<f64>>,
    /// `m^l`: how many copies of the `l`-th irreducible `V` contains.
    pub mult: Vec<usize>,
}

impl LinearizationSpec {
    pub fn new(m: usize, mu: Vec<Vec<f64>>, mult: Vec<usize>) -> Result<Self> {
        let s = LinearizationSpec { m, mu, mult };
        s.validate()?;
        Ok(s)
    }

    /// Every violation, not just the first.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.m == 0 {
            v.push("m must be at least 1".into());
        }
        if self.mu.len() != self.mult.len() {
            v.push(format!("{} mu rows for {} representation entries", self.mu.len(), self.mult.len()));
        }
        for (l, row) in self.mu.iter().enumerate() {
            if row.len() != self.m {
                v.push(format!("mu row {l} has {} entries, expected m = {}", row.len(), self.m));
                continue;
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                v.push(format!("mu[{l}][{j}] is not finite"));
            }
            for j in (1..self.m).filter(|&j| 2 * j < self.m) {
                if row[j] != row[self.m - j] {
                    v.push(format!("reversibility: mu[{l}][{j}] = {} but mu[{l}][{}] = {}", row[j], self.m - j, row[self.m - j]));
                }
            }
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }

    pub fn abs_sum(&self, l: usize) -> f64 {
        self.mu[l].iter().map(|x| x.abs()).sum()
    }
}

/// A certified eigenvalue.  `exact` is present when all cosines are
/// rational.
#[derive(Clone, Debug, PartialEq)]
pub struct Xi {
    pub value: f64,
    pub exact: Option<BigRational>,
    pub sign: i8,
}

impl fmt::Display for Xi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) if q.denom() == &BigInt::one() => write!(f, "{}", q.numer()),
            Some(q) => write!(f, "{q} (= {})", self.value),
            None => write!(f, "{}", self.value),
        }
    }
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite by validation")
}

/// `cos(2 pi t / m)` when it is rational.
fn rational_cos(t: usize, m: usize) -> Option<BigRational> {
    let t = t % m;
    let half = || BigRational::new(1.into(), 2.into());
    // 2pi t/m as a fraction of a full turn, reduced.
    let g = num_integer::gcd(t, m);
    let (a, b) = (t / g, m / g);
    Some(match (a, b) {
        (0, _) => BigRational::one(),
        (1, 2) => -BigRational::one(),
        (1, 4) | (3, 4) => BigRational::zero(),
        (1, 3) | (2, 3) => -half(),
        (1, 6) | (5, 6) => half(),
        _ => return None,
    })
}

/// Exact zero test of `Σ_j a_j (ζ^{jk} + ζ^{-jk}) + c` in `Z[ζ_m]`.
fn cyclo_zero(m: usize, k: usize, a: &[BigInt], c: &BigInt) -> bool {
    let mut v = vec![BigInt::zero(); m];
    for (j, aj) in a.iter().enumerate() {
        v[(j * k) % m] += aj;
        v[(m - (j * k) % m) % m] += aj;
    }
    v[0] += c;
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    for top in (deg..v.len()).rev() {
        let q = v[top].clone();
        if q.is_zero() {
            continue;
        }
        for (i, &p) in phi.iter().enumerate() {
            v[top - deg + i] -= &q * p;
        }
    }
    v.iter().all(|x| x.is_zero())
}

/// `xi_{k,l} = 1 + (Σ_j cos(2 pi j k / m) mu_j - 1) / (1 + k^2)`.
pub fn xi(spec: &LinearizationSpec, k: usize, l: usize) -> Result<Xi> {
    let m = spec.m;
    let mu = &spec.mu[l];
    let kk = (k * k) as f64;
    let s: f64 = (0..m).map(|j| (TAU * ((j * k) % m) as f64 / m as f64).cos() * mu[j]).sum();
    let value = 1.0 + (s - 1.0) / (1.0 + kk);

    let exact: Option<BigRational> = (0..m)
        .map(|j| rational_cos(j * k, m).map(|c| c * rat(mu[j])))
        .sum::<Option<BigRational>>()
        .map(|s| BigRational::one() + (s - BigRational::one()) / BigRational::from_integer(BigInt::from(1 + k * k)));
    if let Some(q) = exact {
        let sign = if q.is_zero() { 0 } else if q.is_positive() { 1 } else { -1 };
        return Ok(Xi { value: q.to_f64().unwrap_or(value), exact: Some(q), sign });
    }

    // xi = 0 exactly iff Σ mu_j cos(..) = -k^2.
    let qs: Vec<BigRational> = mu.iter().map(|&x| rat(x)).collect();
    let den = qs.iter().fold(BigInt::one(), |d, q| num_integer::lcm(d, q.denom().clone()));
    let a: Vec<BigInt> = qs.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let c = BigInt::from(2 * k * k) * &den;
    if cyclo_zero(m, k, &a, &c) {
        return Ok(Xi { value: 0.0, exact: Some(BigRational::zero()), sign: 0 });
    }
    // Nonzero: the f64 sign is trusted only beyond the rounding bound.
    let bound = 8.0 * (m as f64 + 2.0) * f64::EPSILON * (1.0 + spec.abs_sum(l) + kk) / (1.0 + kk);
    if value.abs() <= bound {
        return Err(Error::Precision(format!("xi_({k},{l}) = {value:e} within rounding bound {bound:e}")));
    }
    Ok(Xi { value, exact: None, sign: if value > 0.0 { 1 } else { -1 } })
}

/// The paper-form simplification of `A_k` (with `r = floor((m-1)/2)`), kept
/// only for comparison on even `m`.
pub fn xi_paper_form(spec: &LinearizationSpec, k: usize, l: usize) -> f64 {
    let m = spec.m;
    let mu = &spec.mu[l];
    let r = (m - 1) / 2;
    let eps = if m % 2 == 0 { 1.0 } else { 0.0 };
    let mut s = mu[0];
    for (j, x) in mu.iter().enumerate().take(r + 1).skip(1) {
        s += 2.0 * (TAU * (j * k) as f64 / m as f64).cos() * x;
    }
    s -= eps * mu[r];
    1.0 + (s - 1.0) / (1.0 + (k * k) as f64)
}

/// `K*`: the largest `k` with `k^2 <= max_l Σ|mu|`.  For `k > K*`,
/// `xi >= 1 - (1 + Σ|mu|)/(1 + k^2) > 0`.
pub fn cutoff(spec: &LinearizationSpec) -> usize {
    let smax = spec
        .mu
        .iter()
        .map(|row| row.iter().map(|&x| rat(x.abs())).sum::<BigRational>())
        .max()
        .unwrap_or_else(BigRational::zero);
    let mut k = smax.to_f64().unwrap_or(0.0).sqrt().floor() as usize;
    let sq = |k: usize| BigRational::from_integer(BigInt::from(k * k));
    while sq(k + 1) <= smax {
        k += 1;
    }
    while k > 0 && sq(k) > smax {
        k -= 1;
    }
    k
}

/// Lower bound on `xi_{k,l}` used to justify the cutoff.
pub fn xi_lower_bound(spec: &LinearizationSpec, k: usize, l: usize) -> f64 {
    1.0 - (1.0 + spec.abs_sum(l)) / (1.0 + (k * k) as f64)
}

#[derive(Clone, Debug)]
pub struct SpectralSummary {
    pub cutoff: usize,
    /// `xi[k][l]` for `k <= cutoff`.
    pub xi: Vec<Vec<Xi>>,
    /// `(k, l)` with `xi_{k,l} < 0`.
    pub negative: Vec<(usize, usize)>,
    /// `m_{k,l}` for `k <= cutoff`.
    pub mult: Vec<Vec<usize>>,
    /// Modes with a zero eigenvalue.
    pub degenerate: BTreeSet<usize>,
}

impl SpectralSummary {
    pub fn nondegenerate(&self) -> bool {
        self.degenerate.is_empty()
    }
    pub fn active_modes(&self) -> BTreeSet<usize> {
        self.negative.iter().map(|&(k, _)| k).collect()
    }
}

pub fn spectral_summary(spec: &LinearizationSpec) -> Result<SpectralSummary> {
    spec.validate()?;
    let cutoff = cutoff(spec);
    let mut xis = Vec::new();
    let mut mult = Vec::new();
    let mut negative = Vec::new();
    let mut degenerate = BTreeSet::new();
    for k in 0..=cutoff {
        let mut row = Vec::new();
        let mut mrow = Vec::new();
        for l in 0..spec.mu.len() {
            let x = xi(spec, k, l)?;
            let active = x.sign < 0 && spec.mult[l] > 0;
            if x.sign == 0 && spec.mult[l] > 0 {
                degenerate.insert(k);
            }
            if active {
                negative.push((k, l));
            }
            mrow.push(if active { spec.mult[l] } else { 0 });
            row.push(x);
        }
        xis.push(row);
        mult.push(mrow);
    }
    Ok(SpectralSummary { cutoff, xi: xis, negative, mult, degenerate })
}

/// Smallest `s <= bound` with `{(2k - 1) s : k >= 1}` disjoint from `modes`.
pub fn degenerate_fold(modes: &BTreeSet<usize>, bound: usize) -> Option<usize> {
    (1..=bound).find(|&s| modes.iter().all(|&c| c == 0 || c % s != 0 || (c / s) % 2 == 0))
}
