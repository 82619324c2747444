//! Planar symmetric domains `D = {eta < 0}`: evaluation, boundary
//! parametrization, curvature, grid-certified condition checks and the
//! a-priori derivative bounds.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Cos,
    Sin,
}

/// `c * r^p * cos(q theta)` or `c * r^p * sin(q theta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub c: f64,
    pub p: u32,
    pub q: u32,
    pub phase: Phase,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarTrigPolynomial {
    pub terms: Vec<Term>,
}

/// Value and polar partials `(f, f_r, f_t, f_rr, f_rt, f_tt)`.
type Polar = [f64; 6];

impl PolarTrigPolynomial {
    pub fn new(terms: Vec<Term>) -> Self {
        PolarTrigPolynomial { terms }
    }

    /// `2 r^4 - r^4 cos 8t - 1`.
    pub fn flower8() -> Self {
        Self::new(vec![
            Term { c: 2.0, p: 4, q: 0, phase: Phase::Cos },
            Term { c: -1.0, p: 4, q: 8, phase: Phase::Cos },
            Term { c: -1.0, p: 0, q: 0, phase: Phase::Cos },
        ])
    }

    /// `r^2 - r0^2`.
    pub fn circle(r0: f64) -> Self {
        Self::new(vec![Term { c: 1.0, p: 2, q: 0, phase: Phase::Cos }, Term { c: -r0 * r0, p: 0, q: 0, phase: Phase::Cos }])
    }

    pub fn polar(&self, r: f64, t: f64) -> Polar {
        let mut out = [0.0; 6];
        for term in &self.terms {
            let (p, q) = (term.p as i32, term.q as f64);
            let (a, da, dda) = match term.phase {
                Phase::Cos => ((q * t).cos(), -q * (q * t).sin(), -q * q * (q * t).cos()),
                Phase::Sin => ((q * t).sin(), q * (q * t).cos(), -q * q * (q * t).sin()),
            };
            let rp = if p == 0 { 1.0 } else { r.powi(p) };
            let rp1 = if p >= 1 { p as f64 * r.powi(p - 1) } else { 0.0 };
            let rp2 = if p >= 2 { (p * (p - 1)) as f64 * r.powi(p - 2) } else { 0.0 };
            out[0] += term.c * rp * a;
            out[1] += term.c * rp1 * a;
            out[2] += term.c * rp * da;
            out[3] += term.c * rp2 * a;
            out[4] += term.c * rp1 * da;
            out[5] += term.c * rp * dda;
        }
        out
    }

    pub fn eval_polar(&self, r: f64, t: f64) -> f64 {
        self.polar(r, t)[0]
    }

    fn at_origin(&self) -> f64 {
        self.terms.iter().filter(|t| t.p == 0 && t.q == 0 && t.phase == Phase::Cos).map(|t| t.c).sum()
    }

    /// Radial degree of the lowest term that is not constant.
    fn min_degree(&self) -> Option<u32> {
        self.terms.iter().filter(|t| t.c != 0.0 && !(t.p == 0 && t.q == 0)).map(|t| t.p).min()
    }

    /// Coefficient bound on `sup |grad eta|` over the ball of radius `r`.
    pub fn gradient_coefficient_bound(&self, r: f64) -> f64 {
        let (mut a, mut b) = (0.0, 0.0);
        for t in &self.terms {
            if t.p >= 1 {
                a += t.c.abs() * t.p as f64 * r.powi(t.p as i32 - 1);
                b += t.c.abs() * t.q as f64 * r.powi(t.p as i32 - 1);
            }
        }
        a.hypot(b)
    }
}

fn to_polar(x: f64, y: f64) -> (f64, f64) {
    (x.hypot(y), y.atan2(x))
}

pub fn eval_eta(eta: &PolarTrigPolynomial, x: f64, y: f64) -> Result<f64> {
    let (r, t) = to_polar(x, y);
    if r == 0.0 {
        if eta.terms.iter().any(|t| t.p == 0 && t.q != 0 && t.c != 0.0) {
            return Err(Error::Singularity("angular term of radial degree 0".into()));
        }
        return Ok(eta.at_origin());
    }
    Ok(eta.eval_polar(r, t))
}

pub fn grad_eta(eta: &PolarTrigPolynomial, x: f64, y: f64) -> Result<[f64; 2]> {
    let (r, t) = to_polar(x, y);
    if r == 0.0 {
        return match eta.min_degree() {
            Some(d) if d < 2 => Err(Error::Singularity(format!("term of radial degree {d}"))),
            _ => Ok([0.0, 0.0]),
        };
    }
    let f = eta.polar(r, t);
    let (s, c) = t.sin_cos();
    Ok([c * f[1] - s / r * f[2], s * f[1] + c / r * f[2]])
}

pub fn hess_eta(eta: &PolarTrigPolynomial, x: f64, y: f64) -> Result<[[f64; 2]; 2]> {
    let (r, t) = to_polar(x, y);
    if r == 0.0 {
        let mut h = [[0.0; 2]; 2];
        for term in eta.terms.iter().filter(|t| t.c != 0.0 && !(t.p == 0 && t.q == 0)) {
            match (term.p, term.q, term.phase) {
                (p, _, _) if p >= 3 => {}
                (2, 0, Phase::Cos) => {
                    h[0][0] += 2.0 * term.c;
                    h[1][1] += 2.0 * term.c;
                }
                (2, 2, Phase::Cos) => {
                    h[0][0] += 2.0 * term.c;
                    h[1][1] -= 2.0 * term.c;
                }
                (2, 2, Phase::Sin) => {
                    h[0][1] += 2.0 * term.c;
                    h[1][0] += 2.0 * term.c;
                }
                (p, q, _) => return Err(Error::Singularity(format!("second derivatives of r^{p} trig({q} theta)"))),
            }
        }
        return Ok(h);
    }
    let f = eta.polar(r, t);
    let (s, c) = t.sin_cos();
    let (fr, ft, frr, frt, ftt) = (f[1], f[2], f[3], f[4], f[5]);
    let xx = c * c * frr + s * s / r * fr + s * s / (r * r) * ftt - 2.0 * s * c / r * frt + 2.0 * s * c / (r * r) * ft;
    let yy = s * s * frr + c * c / r * fr + c * c / (r * r) * ftt + 2.0 * s * c / r * frt - 2.0 * s * c / (r * r) * ft;
    let xy = s * c * frr - s * c / r * fr - s * c / (r * r) * ftt + (c * c - s * s) / r * frt - (c * c - s * s) / (r * r) * ft;
    Ok([[xx, xy], [xy, yy]])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub eta: PolarTrigPolynomial,
    /// Declared dihedral symmetry order.
    pub symmetry: usize,
    /// `D` lies in the ball of this radius.
    pub radius: f64,
    #[serde(default = "yes")]
    pub star_shaped: bool,
    /// Optional declared bound on `|grad eta|` over the closed domain; it is
    /// checked against the computed maximum and then used for the constants.
    #[serde(default)]
    pub gradient_bound: Option<f64>,
}

fn yes() -> bool {
    true
}

impl DomainSpec {
    pub fn new(eta: PolarTrigPolynomial, symmetry: usize, radius: f64) -> Self {
        DomainSpec { eta, symmetry, radius, star_shaped: true, gradient_bound: None }
    }

    /// Static violations: sign at the origin, symmetry, radius.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.radius > 0.0) {
            v.push(format!("radius must be positive, got {}", self.radius));
            return v;
        }
        match eval_eta(&self.eta, 0.0, 0.0) {
            Ok(x) if x >= 0.0 => v.push(format!("(eta4) violated: eta(0) = {x} is not negative")),
            Err(e) => v.push(format!("(eta1) {e}")),
            _ => {}
        }
        if self.eta.min_degree() == Some(1) {
            v.push("(eta1) term of radial degree 1 makes eta non-smooth at the origin".into());
        }
        let n = self.symmetry.max(1);
        for i in 0..64 {
            let t = TAU * i as f64 / 64.0 + 0.1;
            for r in [0.3 * self.radius, self.radius] {
                let f = self.eta.eval_polar(r, t);
                let checks = [
                    ("(eta2) rotation", self.eta.eval_polar(r, t + TAU / n as f64)),
                    ("(eta2) reflection", self.eta.eval_polar(r, -t)),
                    ("(eta3) antipodal", self.eta.eval_polar(r, t + PI)),
                ];
                for (what, g) in checks {
                    if (f - g).abs() > 1e-9 * (1.0 + f.abs()) {
                        v.push(format!("{what} invariance fails at r = {r}, theta = {t:.4}"));
                        return v;
                    }
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

    pub fn point(&self, t: f64) -> Result<(f64, f64)> {
        let r = boundary_radius(self, t)?;
        Ok((r * t.cos(), r * t.sin()))
    }
}

/// The positive root of `eta(., theta)` on `(0, R]`.
pub fn boundary_radius(spec: &DomainSpec, t: f64) -> Result<f64> {
    if !spec.star_shaped {
        return Err(Error::NotStarShaped(t));
    }
    let f = |r: f64| spec.eta.eval_polar(r, t);
    // first sign change on a scan, then bisection polished by Newton
    let n = 256;
    let mut lo = 0.0;
    let mut flo = eval_eta(&spec.eta, 0.0, 0.0)?;
    let mut hi = None;
    for i in 1..=n {
        let r = spec.radius * i as f64 / n as f64;
        let fr = f(r);
        if flo < 0.0 && fr >= 0.0 {
            hi = Some(r);
            break;
        }
        lo = r;
        flo = fr;
    }
    let Some(mut hi) = hi else { return Err(Error::NotStarShaped(t)) };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..3 {
        let p = spec.eta.polar(r, t);
        if p[1] != 0.0 {
            let next = r - p[0] / p[1];
            if next > lo - 1e-12 && next < hi + 1e-12 {
                r = next;
            }
        }
    }
    if f(r).abs() > 1e-12 * (1.0 + spec.eta.terms.iter().map(|t| t.c.abs()).sum::<f64>()) {
        return Err(Error::Precision(format!("boundary root residual {:e} at theta = {t}", f(r))));
    }
    Ok(r)
}

/// Gradient norm at the boundary point in direction `theta`.
pub fn grad_norm_on_c(spec: &DomainSpec, t: f64) -> Result<f64> {
    let (x, y) = spec.point(t)?;
    let g = grad_eta(&spec.eta, x, y)?;
    Ok(g[0].hypot(g[1]))
}

/// Curvature of the boundary with the outward normal `grad eta / |grad eta|`,
/// positive where `D` is locally convex.
pub fn curvature(spec: &DomainSpec, t: f64) -> Result<f64> {
    let (x, y) = spec.point(t)?;
    let g = grad_eta(&spec.eta, x, y)?;
    let h = hess_eta(&spec.eta, x, y)?;
    let n = g[0].hypot(g[1]);
    if n < 1e-12 {
        return Err(Error::VanishingGradient(t));
    }
    Ok((g[1] * g[1] * h[0][0] - 2.0 * g[0] * g[1] * h[0][1] + g[0] * g[0] * h[1][1]) / (n * n * n))
}

/// `II_x(z) = -kappa |z|^2` for a tangent vector of length `z`.
pub fn second_fundamental(spec: &DomainSpec, t: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(-curvature(spec, t)? * z * z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub name: String,
    pub status: Status,
    /// Certified quantity (a minimum for inequalities).
    pub value: f64,
    /// Angle attaining it, when meaningful.
    pub witness: Option<f64>,
    pub detail: String,
}

/// Grid minimum of a boundary quantity, with a sampled Lipschitz estimate
/// from a 4x refined grid (safety factor 2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMin {
    pub min: f64,
    pub at: f64,
    pub lipschitz: f64,
    pub step: f64,
}

impl GridMin {
    pub fn slack(&self) -> f64 {
        self.lipschitz * self.step / 2.0
    }

    /// `> 0` strictly, or `>= 0` when `strict` is false.
    pub fn status(&self, strict: bool) -> Status {
        let bad = if strict { self.min <= 0.0 } else { self.min < 0.0 };
        if bad {
            Status::Fail
        } else if self.min - self.slack() > 0.0 || (!strict && self.min - self.slack() >= 0.0) {
            Status::Pass
        } else {
            Status::Inconclusive
        }
    }
}

pub fn grid_min(n: usize, f: impl Fn(f64) -> Result<f64>) -> Result<GridMin> {
    let n = n.max(8);
    let fine = 4 * n;
    let h = TAU / fine as f64;
    let vals: Vec<f64> = (0..fine).map(|i| f(i as f64 * h)).collect::<Result<_>>()?;
    let mut lip: f64 = 0.0;
    for i in 0..fine {
        lip = lip.max((vals[(i + 1) % fine] - vals[i]).abs() / h);
    }
    let (mut min, mut at) = (f64::INFINITY, 0.0);
    for (i, &v) in vals.iter().enumerate() {
        if v < min {
            min = v;
            at = i as f64 * h;
        }
    }
    Ok(GridMin { min, at, lipschitz: 2.0 * lip, step: TAU / n as f64 })
}

/// Boundary statistics over a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryStats {
    pub grad_min: f64,
    pub grad_max: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub grad_plus_kappa_min: f64,
    pub grad_plus_kappa_at: f64,
}

pub fn boundary_stats(spec: &DomainSpec, n: usize) -> Result<BoundaryStats> {
    let mut s = BoundaryStats {
        grad_min: f64::INFINITY,
        grad_max: f64::NEG_INFINITY,
        kappa_min: f64::INFINITY,
        kappa_max: f64::NEG_INFINITY,
        grad_plus_kappa_min: f64::INFINITY,
        grad_plus_kappa_at: 0.0,
    };
    for i in 0..n {
        let t = TAU * i as f64 / n as f64;
        let g = grad_norm_on_c(spec, t)?;
        let k = curvature(spec, t)?;
        s.grad_min = s.grad_min.min(g);
        s.grad_max = s.grad_max.max(g);
        s.kappa_min = s.kappa_min.min(k);
        s.kappa_max = s.kappa_max.max(k);
        if g + k < s.grad_plus_kappa_min {
            s.grad_plus_kappa_min = g + k;
            s.grad_plus_kappa_at = t;
        }
    }
    Ok(s)
}

/// The family `f(x, y, z) = (|z|^2 + 1) grad eta(x) + mu_0 x + sum mu_j y^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FFamilySpec {
    pub mu: Vec<f64>,
    pub domain: DomainSpec,
}

impl FFamilySpec {
    pub fn abs_sum(&self) -> f64 {
        self.mu.iter().map(|x| x.abs()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AprioriConstants {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub k: f64,
    pub m: f64,
    pub n: f64,
    /// `log10 M` and `log10 N`, finite even when the bounds overflow `f64`.
    pub m_log10: f64,
    pub n_log10: f64,
    pub p: f64,
    pub safe: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub records: Vec<ConditionRecord>,
    pub stats: BoundaryStats,
    /// Maximum of `|grad eta|` over the closed domain (grid).
    pub grad_max_domain: f64,
    /// Gradient bound used for the constants (declared or computed).
    pub grad_bound: f64,
    pub constants: AprioriConstants,
    /// The `(A, B)` pair as the growth condition is usually stated for this
    /// family, kept for comparison.
    pub alternative_ab: (f64, f64),
}

impl Verification {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }
    pub fn record(&self, name: &str) -> Option<&ConditionRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    pub grid: usize,
    pub radial: usize,
    pub safe: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { grid: 2048, radial: 64, safe: false }
    }
}

fn rec(name: &str, g: &GridMin, strict: bool, detail: String) -> ConditionRecord {
    ConditionRecord { name: name.into(), status: g.status(strict), value: g.min, witness: Some(g.at), detail }
}

/// Grid verification of the boundary, growth and Nagumo conditions for the
/// family, plus the derived constants.
pub fn check_conditions(fam: &FFamilySpec, opts: CheckOptions) -> Result<Verification> {
    let d = &fam.domain;
    let mut records = Vec::new();
    let static_v = d.violations();
    records.push(ConditionRecord {
        name: "eta".into(),
        status: if static_v.is_empty() { Status::Pass } else { Status::Fail },
        value: eval_eta(&d.eta, 0.0, 0.0).unwrap_or(f64::NAN),
        witness: None,
        detail: if static_v.is_empty() { "origin inside, symmetric, smooth".into() } else { static_v.join("; ") },
    });
    if !static_v.is_empty() {
        return Err(Error::Config(static_v));
    }
    let r = d.radius;
    let s = fam.abs_sum();
    let stats = boundary_stats(d, opts.grid)?;

    let g = grid_min(opts.grid, |t| grad_norm_on_c(d, t))?;
    records.push(rec("eta5", &g, true, format!("min |grad eta| on C = {:.6}", g.min)));

    let a = grid_min(opts.grid, |t| Ok(grad_norm_on_c(d, t)? - r * s))?;
    records.push(rec("A4 gradient margin", &a, true, format!("min |grad eta| - R sum|mu| = {:.6}", a.min)));
    let b = grid_min(opts.grid, |t| Ok(grad_norm_on_c(d, t)? + curvature(d, t)?))?;
    records.push(rec("A4 curvature margin", &b, true, format!("min |grad eta| + kappa = {:.6}", b.min)));
    let a4 = match (a.status(true), b.status(true)) {
        (Status::Pass, Status::Pass) => Status::Pass,
        (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
        _ => Status::Inconclusive,
    };
    // witness: the failing margin if any, else the smaller one
    let w = if b.status(true) == Status::Fail || (a.status(true) != Status::Fail && b.min < a.min) { &b } else { &a };
    records.push(ConditionRecord {
        name: "A4".into(),
        status: a4,
        value: w.min,
        witness: Some(w.at),
        detail: "sufficient chain: both margins positive".into(),
    });
    let a4p = grid_min(opts.grid, |t| Ok(grad_norm_on_c(d, t)? - r * s + curvature(d, t)?))?;
    records.push(rec("A4'", &a4p, false, format!("min |grad eta| - R sum|mu| + kappa = {:.6}", a4p.min)));

    // sup |grad eta| and inf <x, grad eta> over the closed domain
    let (mut gmax, mut radial_min, mut radial_at) = (0.0f64, f64::INFINITY, 0.0);
    for i in 0..opts.grid {
        let t = TAU * i as f64 / opts.grid as f64;
        let rb = boundary_radius(d, t)?;
        for j in 1..=opts.radial {
            let rr = rb * j as f64 / opts.radial as f64;
            let (x, y) = (rr * t.cos(), rr * t.sin());
            let gr = grad_eta(&d.eta, x, y)?;
            gmax = gmax.max(gr[0].hypot(gr[1]));
            let xr = x * gr[0] + y * gr[1];
            if xr < radial_min {
                radial_min = xr;
                radial_at = t;
            }
        }
    }
    // the grid maximum is padded by the sampled variation between rings
    let pad = gmax * (2.0 / opts.radial as f64 + TAU / opts.grid as f64);
    let gmax_padded = gmax + pad;
    let (grad_bound, a5) = match d.gradient_bound {
        Some(declared) if declared >= gmax_padded => (declared, Status::Pass),
        Some(declared) if declared >= gmax => (declared, Status::Inconclusive),
        Some(declared) => (declared, Status::Fail),
        None => (gmax_padded, Status::Pass),
    };
    let big_a = grad_bound + r * s;
    let big_b = grad_bound;
    records.push(ConditionRecord {
        name: "A5".into(),
        status: a5,
        value: gmax,
        witness: None,
        detail: format!("phi(s) = A + B s^2 with A = {big_a:.6}, B = {big_b:.6}; grid max |grad eta| on D = {gmax:.6}"),
    });
    let alpha = d.eta.gradient_coefficient_bound(r);
    let a6 = if radial_min >= -1e-12 && alpha >= gmax_padded { Status::Pass } else { Status::Fail };
    let k = (1.0 + alpha) * big_a;
    records.push(ConditionRecord {
        name: "A6'".into(),
        status: a6,
        value: radial_min,
        witness: Some(radial_at),
        detail: format!("alpha = {alpha:.6} (needs <x, grad eta> >= 0 on D and alpha >= sup |grad eta|), K = {k:.6}"),
    });
    let p = TAU;
    let m = apriori_m(big_a, big_b, alpha, k, p, r, opts.safe);
    let n = apriori_n(grad_bound, r, s, m);
    let m_log10 = apriori_m_log10(big_a, big_b, alpha, k, p, r, opts.safe);
    let n_log10 = apriori_n_log10(grad_bound, r, s, m_log10);
    Ok(Verification {
        records,
        stats,
        grad_max_domain: gmax,
        grad_bound,
        constants: AprioriConstants { a: big_a, b: big_b, alpha, k, m, n, m_log10, n_log10, p, safe: opts.safe },
        alternative_ab: (grad_bound, s),
    })
}

/// `Phi(w) = int_0^w u / (A + B u^2) du`.
pub fn phi(a: f64, b: f64, w: f64) -> f64 {
    if b == 0.0 {
        w * w / (2.0 * a)
    } else {
        (b / a * w * w).ln_1p() / (2.0 * b)
    }
}

pub fn phi_inv(a: f64, b: f64, y: f64) -> f64 {
    if b == 0.0 {
        (2.0 * a * y).sqrt()
    } else {
        (a / b * (2.0 * b * y).exp_m1()).sqrt()
    }
}

/// First-derivative bound `M = Phi^{-1}(K p^2 / 2 + alpha R^2 + Phi(K p / 2))`;
/// `safe` doubles the growth function and uses `K + 1`.
pub fn apriori_m(a: f64, b: f64, alpha: f64, k: f64, p: f64, r: f64, safe: bool) -> f64 {
    let (a, b, y) = m_argument(a, b, alpha, k, p, r, safe);
    phi_inv(a, b, y)
}

fn m_argument(a: f64, b: f64, alpha: f64, k: f64, p: f64, r: f64, safe: bool) -> (f64, f64, f64) {
    let (a, b, k) = if safe { (2.0 * a, 2.0 * b, k + 1.0) } else { (a, b, k) };
    (a, b, 0.5 * k * p * p + alpha * r * r + phi(a, b, 0.5 * k * p))
}

/// `log10 M`, computed without forming `exp(2 B y)`.
pub fn apriori_m_log10(a: f64, b: f64, alpha: f64, k: f64, p: f64, r: f64, safe: bool) -> f64 {
    let (a, b, y) = m_argument(a, b, alpha, k, p, r, safe);
    if y <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let ln = if b == 0.0 {
        0.5 * (2.0 * a * y).ln()
    } else {
        let t = 2.0 * b * y;
        // ln(e^t - 1) = t + ln(1 - e^{-t})
        0.5 * ((a / b).ln() + t + (-(-t).exp()).ln_1p())
    };
    ln / std::f64::consts::LN_10
}

/// `log10 N` from `log10 M`.
pub fn apriori_n_log10(grad_bound: f64, r: f64, mu_abs_sum: f64, m_log10: f64) -> f64 {
    if m_log10 < 100.0 {
        return apriori_n(grad_bound, r, mu_abs_sum, 10f64.powf(m_log10)).log10();
    }
    // the other terms are below double precision relative to M^2 G
    2.0 * m_log10 + grad_bound.log10()
}

/// Second-derivative bound `N = (M^2 + 1) G + R sum|mu|`.
pub fn apriori_n(grad_bound: f64, r: f64, mu_abs_sum: f64, m: f64) -> f64 {
    (m * m + 1.0) * grad_bound + r * mu_abs_sum
}

pub const FIGURE_HEADER: &str = "theta,r,kappa,grad_norm,grad_plus_kappa";

/// Comma-separated boundary series over `n` equally spaced angles.
pub fn emit_figure_data(spec: &DomainSpec, n: usize) -> Result<String> {
    let mut out = String::from(FIGURE_HEADER);
    out.push('\n');
    for i in 0..n {
        let t = TAU * i as f64 / n as f64;
        let r = boundary_radius(spec, t)?;
        let k = curvature(spec, t)?;
        let g = grad_norm_on_c(spec, t)?;
        out.push_str(&format!("{t:.12},{r:.12},{k:.12},{g:.12},{:.12}\n", g + k));
    }
    Ok(out)
}
