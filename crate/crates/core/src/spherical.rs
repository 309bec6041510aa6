//! The spherical function `phi_s` of `SL(3,R)` evaluated by three independent
//! integral formulas, together with the c-function, the Plancherel density and
//! the leading term of its expansion in the chamber.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{
    character_eval, genericity_obstruction, DiagonalElement, GroupElement, SpectralParameter,
    WeylElement,
};
use crate::quad::{adaptive_gk, ln_gamma, KRule, Rule};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Base node count per axis.
    pub nodes: usize,
    /// Relative tolerance of adaptive stages.
    pub tolerance: f64,
    /// Truncation of improper integrals, in logarithmic units.
    pub radius: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { nodes: 32, tolerance: 1e-9, radius: 24.0 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 8 {
            return Err(Error::Domain(format!("node count {} below 8", self.nodes)));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-2) {
            return Err(Error::Domain(format!("tolerance {} outside (0, 1e-2]", self.tolerance)));
        }
        if !(self.radius > 0.0) {
            return Err(Error::Domain(format!("radius {} must be positive", self.radius)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphericalValue {
    pub value: Complex64,
    pub error: f64,
}

/// Node counts for the `K`-integral at a point whose largest root is `alpha3`.
fn k_rule_for(alpha3: f64, s: &SpectralParameter, q: &QuadratureConfig) -> KRule {
    let osc = (s.s1.im.abs() + s.s2.im.abs() + s.s1.re.abs() + s.s2.re.abs()) * alpha3.ln().max(0.0);
    let n = q.nodes + (4.0 * alpha3.sqrt() + 2.0 * osc).ceil() as usize;
    KRule::new(n, 2 * n, 2 * n, true)
}

fn direct_integrand(
    s: &SpectralParameter,
    ginv: &nalgebra::Matrix3<f64>,
    gt: &nalgebra::Matrix3<f64>,
    k1: &[f64; 3],
    k3: &[f64; 3],
) -> Complex64 {
    let v1 = ginv * nalgebra::Vector3::new(k1[0], k1[1], k1[2]);
    let v3 = gt * nalgebra::Vector3::new(k3[0], k3[1], k3[2]);
    let l1 = v1.norm().ln();
    let l3 = v3.norm().ln();
    (-(s.s1 + 1.0) * l1 - (s.s2 + 1.0) * l3).exp()
}

/// `phi_s(g) = int_K (p_s delta^{1/2})(A(k g)) dk`, using
/// `A(kg)_3 = |g^T k_3|` and `A(kg)_2 A(kg)_3 = |g^{-1} k_1|`.
pub fn spherical_direct(s: &SpectralParameter, g: &GroupElement, q: &QuadratureConfig) -> Result<SphericalValue> {
    q.validate()?;
    let c = crate::lie::cartan_decompose(g);
    let rule = k_rule_for(c.b.alpha3(), s, q);
    let ginv = g.inverse().m;
    let gt = g.m.transpose();
    let value = rule.integrate(|k1, k3| direct_integrand(s, &ginv, &gt, k1, k3));
    // a refinement with fewer nodes gives the error estimate
    let coarse = KRule::new(
        rule.cos_theta.len() * 3 / 4,
        rule.phi.len() * 3 / 4,
        rule.psi.len() * 3 / 4,
        true,
    )
    .integrate(|k1, k3| direct_integrand(s, &ginv, &gt, k1, k3));
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Convergence("non-finite K-integral".into()));
    }
    Ok(SphericalValue { value, error: (value - coarse).norm() })
}

pub fn spherical_direct_diag(s: &SpectralParameter, a: &DiagonalElement, q: &QuadratureConfig) -> Result<SphericalValue> {
    spherical_direct(s, &GroupElement::from_diagonal(a), q)
}

/// Outer rule on `[0, R]` for the `sinh` substituted variables.
fn outer_rule(q: &QuadratureConfig, scale: f64) -> Rule {
    let inner_end = (8.0 + scale).min(q.radius);
    let mut r = Rule::composite(8, (inner_end * 2.0).ceil() as usize, 0.0, inner_end);
    if q.radius > inner_end {
        let tail = Rule::composite(10, ((q.radius - inner_end) / 2.0).ceil() as usize, inner_end, q.radius);
        r.nodes.extend(tail.nodes);
        r.weights.extend(tail.weights);
    }
    r
}

/// Evaluation of the triple integral over `R^3` for one `a`.
fn third_integral(s: &SpectralParameter, alpha: (f64, f64), q: &QuadratureConfig) -> Result<(Complex64, f64)> {
    let (a1, a2) = alpha;
    let a3 = a1 * a2;
    let e1 = (-s.s1 - 1.0) / 2.0;
    let e2 = (-s.s2 - 1.0) / 2.0;
    let e3 = (s.s1 - 1.0) / 2.0;
    let e4 = (s.s2 - 1.0) / 2.0;
    let rule = outer_rule(q, a3.ln());
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let inner_tol = q.tolerance * 0.1;
    for (&xi, &wx) in rule.nodes.iter().zip(&rule.weights) {
        let x = xi.sinh();
        let jx = xi.cosh() * wx;
        for (&ze, &wz) in rule.nodes.iter().zip(&rule.weights) {
            let z = ze.sinh();
            let jz = ze.cosh() * wz;
            let p = 1.0 + x * x + z * z;
            let xp = x / a1;
            let zp = z / a3;
            let pp = 1.0 + xp * xp + zp * zp;
            let base = e1 * p.ln() + e3 * pp.ln();
            // Q = A (y - y0)^2 + m, similarly for the scaled copy
            let big_a = 1.0 + x * x;
            let y0 = x * z / big_a;
            let m = p / big_a;
            let big_ap = (1.0 + xp * xp) / (a2 * a2);
            let y0p = a2 * xp * zp / (1.0 + xp * xp);
            let mp = pp / (1.0 + xp * xp);
            let width = (m / big_a).sqrt().min((mp / big_ap).sqrt());
            // y = (y0 + y0p) / 2 + scale sinh(eta), offsets kept exact
            let half = 0.5 * (y0p - y0);
            let scale = width.max(1e-300);
            let g = |eta: f64| {
                let sh = scale * eta.sinh();
                let qv = big_a * (half + sh) * (half + sh) + m;
                let qpv = big_ap * (sh - half) * (sh - half) + mp;
                (base + e2 * qv.ln() + e4 * qpv.ln()).exp() * (scale * eta.cosh())
            };
            // Cauchy-Schwarz bound for the size of the inner integral
            let mag = base.re.exp() * PI / (big_a * m * big_ap * mp).powf(0.25);
            let span = 2.0 * ((y0 - y0p).abs() / scale + 1.0).asinh() + 40.0;
            let (v, e) = adaptive_gk(g, -span, span, 8, inner_tol, inner_tol * mag, 4000)?;
            total += v * (jx * jz);
            err += e * jx * jz;
        }
    }
    Ok((total * 4.0, err * 4.0))
}

/// Third integral formula, normalized at the identity.
#[derive(Clone, Debug)]
pub struct ThirdFormula {
    pub s: SpectralParameter,
    pub kappa: f64,
    pub q: QuadratureConfig,
}

impl ThirdFormula {
    pub fn new(s: SpectralParameter, q: QuadratureConfig) -> Result<Self> {
        q.validate()?;
        if !(s.s1.re.is_finite() && s.s2.re.is_finite() && s.s1.im.is_finite() && s.s2.im.is_finite()) {
            return Err(Error::Domain("spectral parameter must be finite".into()));
        }
        let (i, _) = third_integral(&s, (1.0, 1.0), &q)?;
        Ok(Self { s, kappa: 1.0 / i.re, q })
    }

    pub fn eval(&self, a: &DiagonalElement) -> Result<SphericalValue> {
        let (a1, a2) = a.alphas();
        let (v, e) = third_integral(&self.s, (a1, a2), &self.q)?;
        let pref = character_eval(&self.s.add(&SpectralParameter::real(-1.0, -1.0)), a) * self.kappa;
        let value = pref * v;
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::Domain("integrand is not integrable for this parameter".into()));
        }
        Ok(SphericalValue { value, error: pref.norm() * e })
    }
}

/// Convenience wrapper calibrating `kappa` on each call.
pub fn spherical_third(s: &SpectralParameter, a: &DiagonalElement, q: &QuadratureConfig) -> Result<SphericalValue> {
    ThirdFormula::new(*s, *q)?.eval(a)
}

/// Which wall of the chamber the point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Wall {
    /// `alpha_1(a) = 1`.
    First,
    /// `alpha_2(a) = 1`.
    Second,
}

/// Returns the wall integral `int int theta(U, V) e^{(s1 U + s2 V)/2} dU dV` on the
/// triangle `-2L <= U <= L`, `-L <= V <= U + L`.
fn wall_integral(s: &SpectralParameter, l: f64, n: usize) -> Complex64 {
    // U = X - 2L, V = -L + X w; w = (1 - cos(pi sigma))/2, X = 3L (1 - eta^2)
    let rs = Rule::gauss(n, 0.0, 1.0);
    let re = Rule::gauss(n, 0.0, 1.0);
    let big = 3.0 * l;
    let mut total = Complex64::new(0.0, 0.0);
    for (&eta, &we) in re.nodes.iter().zip(&re.weights) {
        let x = big * (1.0 - eta * eta);
        // e^{3L - X} - 1 = e^{3L eta^2} - 1, divided by 3L eta^2
        let t3 = big * eta * eta;
        let f3 = if t3 > 1e-12 { t3.exp_m1() / t3 } else { 1.0 + t3 / 2.0 };
        let u = x - 2.0 * l;
        for (&sg, &ws) in rs.nodes.iter().zip(&rs.weights) {
            let w = 0.5 * (1.0 - (PI * sg).cos());
            let v = -l + x * w;
            let t1 = x * w;
            let t2 = x * (1.0 - w);
            let f1 = if t1 > 1e-12 { t1.exp_m1() / t1 } else { 1.0 + t1 / 2.0 };
            let f2 = if t2 > 1e-12 { t2.exp_m1() / t2 } else { 1.0 + t2 / 2.0 };
            // theta X dX dw = X dX dw / sqrt(X^2 w (1-w) f1 f2 (3L-X) f3)
            //   = (pi dsigma) (2 sqrt(3L) deta) / sqrt(f1 f2 f3)
            let jac = PI * 2.0 * big.sqrt() / (f1 * f2 * f3).sqrt();
            let ex = ((s.s1 * u + s.s2 * v) * 0.5).exp();
            total += ex * (jac * we * ws);
        }
    }
    total
}

/// Spherical function on a wall of the chamber; `alpha` is the root that is not 1.
///
/// The change of variables to `(U, V)` turns the powers of the two ratios into
/// `e^{s1 U / 2}` and `e^{s2 V / 2}`; the exponent carries the factor 1/2.
pub fn spherical_wall(
    s: &SpectralParameter,
    alpha: f64,
    wall: Wall,
    kappa: f64,
    q: &QuadratureConfig,
) -> Result<SphericalValue> {
    q.validate()?;
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!("wall point needs alpha > 1, got {alpha}")));
    }
    let s_eff = match wall {
        Wall::First => *s,
        Wall::Second => SpectralParameter::new(s.s2, s.s1),
    };
    let l = 2.0 * alpha.ln() / 3.0;
    let n = q.nodes.max(16) + (8.0 * l * (s.s1.norm() + s.s2.norm())).ceil() as usize;
    let v = wall_integral(&s_eff, l, n);
    let coarse = wall_integral(&s_eff, l, n * 2 / 3);
    let pref = PI * kappa * alpha / (alpha * alpha - 1.0).sqrt();
    Ok(SphericalValue { value: v * pref, error: (v - coarse).norm() * pref })
}

/// `t1 t2 (t1 + t2) tanh(pi t1) tanh(pi t2) tanh(pi (t1 + t2))`.
pub fn plancherel_density(t: (f64, f64)) -> f64 {
    let (t1, t2) = t;
    let t3 = t1 + t2;
    t1 * t2 * t3 * (PI * t1).tanh() * (PI * t2).tanh() * (PI * t3).tanh()
}

/// Rank one factor `Gamma(z / 2) / Gamma((z + 1) / 2)` as a logarithm.
fn ln_rank_one(z: Complex64) -> Complex64 {
    ln_gamma(z / 2.0) - ln_gamma((z + 1.0) / 2.0)
}

/// Harish-Chandra c-function `c(s) = c0 prod_alpha Gamma(s_alpha / 2) / Gamma((s_alpha + 1) / 2)`
/// over `s_alpha in {s1, s2, s1 + s2}`, normalized by `c(1, 1) = 1`.
pub fn c_function(s: &SpectralParameter) -> Result<Complex64> {
    for (i, z) in s.root_values().iter().enumerate() {
        // poles of Gamma(z/2) at z = 0, -2, -4, ...
        let k = -z.re / 2.0;
        if z.im.abs() < 1e-12 && k > -1e-12 && (k - k.round()).abs() < 1e-12 {
            return Err(Error::Domain(format!("pole of the c-function factor {}", i + 1)));
        }
    }
    let norm = 2.0 * ln_rank_one(ONE) + ln_rank_one(ONE * 2.0);
    let sum: Complex64 = s.root_values().iter().map(|&z| ln_rank_one(z)).sum();
    Ok((sum - norm).exp())
}

/// Ratio `|c(2 i t)|^{-2} / plancherel_density(t)`; it does not depend on `t`.
pub fn plancherel_constant() -> f64 {
    let c = c_function(&SpectralParameter::imaginary(2.0, 2.0)).expect("no pole on the tempered axis");
    1.0 / c.norm_sqr() / plancherel_density((1.0, 1.0))
}

/// `Delta(a) = (alpha1 alpha2)^2 (alpha1^2 - 1)(alpha2^2 - 1)(alpha3^2 - 1)`.
pub fn chamber_density(a: &DiagonalElement) -> f64 {
    let (a1, a2) = a.alphas();
    let a3 = a1 * a2;
    (a1 * a2).powi(2) * (a1 * a1 - 1.0) * (a2 * a2 - 1.0) * (a3 * a3 - 1.0)
}

/// Leading term of the expansion of `phi_s(a)` deep in the chamber:
/// `Delta(a)^{-1/2} p_{(2,2)}(a) sum_w c(w.s) p_{w.s}(a)`.
pub fn gangolli_leading(s: &SpectralParameter, a: &DiagonalElement, depth: u32) -> Result<Complex64> {
    if let Some(h) = genericity_obstruction(s, depth) {
        return Err(Error::NotGeneric(h));
    }
    let (a1, a2) = a.alphas();
    if !(a1 > 1.0 && a2 > 1.0) {
        return Err(Error::Domain(format!("point ({a1}, {a2}) is not inside the open chamber")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for w in WeylElement::ALL {
        let ws = s.weyl(w);
        sum += c_function(&ws)? * character_eval(&ws, a);
    }
    let pre = character_eval(&SpectralParameter::real(2.0, 2.0), a).re / chamber_density(a).sqrt();
    Ok(sum * pre)
}

/// `|c(it)|^{-2}` in closed form: `(pi / 2) prod_alpha t_alpha tanh(pi t_alpha / 2)`.
pub fn spectral_density(t: (f64, f64)) -> f64 {
    let f = |x: f64| x * (PI * x / 2.0).tanh();
    PI / 2.0 * f(t.0) * f(t.1) * f(t.0 + t.1)
}
