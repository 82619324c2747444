//! Integers of cyclotomic fields, enough for exact character arithmetic.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// `sum c[i] * zeta_n^i` (redundant power basis; equality goes through
/// [`Cyclo::reduced`]).
#[derive(Clone, Debug)]
pub struct Cyclo {
    n: usize,
    c: Vec<i64>,
}

impl Cyclo {
    pub fn zero(n: usize) -> Self {
        Cyclo { n, c: vec![0; n] }
    }
    pub fn int(n: usize, v: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = v;
        z
    }
    /// `zeta_n^e` (negative exponents allowed).
    pub fn root(n: usize, e: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[e.rem_euclid(n as i64) as usize] = 1;
        z
    }
    /// `zeta^e + zeta^-e`, i.e. `2 cos(2 pi e / n)`.
    pub fn two_cos(n: usize, e: i64) -> Self {
        Self::root(n, e).add(&Self::root(n, -e))
    }
    pub fn order(&self) -> usize {
        self.n
    }
    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }
    /// Re-express in `Q(zeta_n2)`; `n` must divide `n2`.
    pub fn embed(&self, n2: usize) -> Self {
        assert_eq!(n2 % self.n, 0, "cannot embed zeta_{} into zeta_{n2}", self.n);
        let s = n2 / self.n;
        let mut z = Self::zero(n2);
        for (i, &v) in self.c.iter().enumerate() {
            z.c[i * s] += v;
        }
        z
    }
    fn common(&self, o: &Self) -> (Self, Self) {
        if self.n == o.n {
            return (self.clone(), o.clone());
        }
        let l = num_integer::lcm(self.n, o.n);
        (self.embed(l), o.embed(l))
    }
    pub fn add(&self, o: &Self) -> Self {
        let (mut a, b) = self.common(o);
        for (x, y) in a.c.iter_mut().zip(&b.c) {
            *x += y;
        }
        a
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }
    pub fn scale(&self, k: i64) -> Self {
        Cyclo { n: self.n, c: self.c.iter().map(|v| v * k).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        let n = a.n;
        let mut z = Self::zero(n);
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y != 0 {
                    z.c[(i + j) % n] += x * y;
                }
            }
        }
        z
    }
    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        let mut z = Self::zero(self.n);
        for (i, &v) in self.c.iter().enumerate() {
            z.c[(self.n - i) % self.n] += v;
        }
        z
    }
    /// Unique representative modulo the cyclotomic polynomial.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_poly(self.n);
        let deg = phi.len() - 1;
        let mut r = self.c.clone();
        // phi is monic: eliminate the top coefficients.
        for top in (deg..r.len()).rev() {
            let q = r[top];
            if q == 0 {
                continue;
            }
            for (i, &p) in phi.iter().enumerate() {
                r[top - deg + i] -= q * p;
            }
        }
        r.truncate(deg.max(1));
        r
    }
    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&v| v == 0)
    }
    pub fn eq_value(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduced();
        r[1..].iter().all(|&v| v == 0).then_some(r[0])
    }
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, &v) in self.c.iter().enumerate() {
            if v != 0 {
                let t = std::f64::consts::TAU * i as f64 / self.n as f64;
                re += v as f64 * t.cos();
                im += v as f64 * t.sin();
            }
        }
        (re, im)
    }
}

/// Integer coefficients of `Phi_n`, lowest degree first.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("poisoned").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for the proper divisors d.
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    cache.lock().expect("poisoned").insert(n, p.clone());
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd] / den[dd];
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            r[i + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&v| v == 0));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn sum_of_roots_vanishes() {
        for n in [2usize, 3, 5, 8, 12, 32] {
            let mut s = Cyclo::zero(n);
            for e in 0..n as i64 {
                s = s.add(&Cyclo::root(n, e));
            }
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn two_cos_values() {
        // 2cos(pi/3) = 1, 2cos(pi/2) = 0, (2cos(pi/4))^2 = 2
        assert_eq!(Cyclo::two_cos(6, 1).as_integer(), Some(1));
        assert_eq!(Cyclo::two_cos(4, 1).as_integer(), Some(0));
        let s = Cyclo::two_cos(8, 1);
        assert_eq!(s.mul(&s).as_integer(), Some(2));
        assert_eq!(s.as_integer(), None);
        let (re, im) = s.to_complex();
        assert!((re - 2f64.sqrt()).abs() < 1e-12 && im.abs() < 1e-12);
    }

    #[test]
    fn mixed_orders() {
        let a = Cyclo::root(4, 1);
        let b = Cyclo::root(6, 1);
        let p = a.mul(&b);
        assert_eq!(p.order(), 12);
        assert!(p.eq_value(&Cyclo::root(12, 5)));
        assert!(a.mul(&a.conj()).eq_value(&Cyclo::int(1, 1)));
    }
}
