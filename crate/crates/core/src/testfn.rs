//! Compactly supported test functions on `a`, the spectral window built from them
//! and the bi-K-invariant kernel obtained from the window by spherical inversion.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{DiagonalElement, LieVector, SpectralParameter, WeylElement};
use crate::quad::Rule;
use crate::spherical::{spectral_density, spherical_direct_diag, QuadratureConfig};

/// Largest admissible support radius of `h = g * g`.
pub const SUPPORT_LIMIT: f64 = 1.0 / 3.0;

/// Bessel function `J_0`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 40.0 {
        // J0(x) = (1/pi) int_0^pi cos(x sin t) dt, trapezoid is spectrally accurate
        let n = 64;
        let mut s = 0.0;
        for j in 0..n {
            s += (x * (PI * (j as f64 + 0.5) / n as f64).sin()).cos();
        }
        return s / n as f64;
    }
    // Hankel expansion, terms a_k = prod (2j-1)^2 / (k! (8x)^k)
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0f64;
    for k in 1..80 {
        let m = (2 * k - 1) as f64;
        let next = a * m * m / (k as f64 * 8.0 * x);
        if next > a || next < 1e-18 {
            break;
        }
        a = next;
        match k % 4 {
            1 => q -= a,
            2 => p -= a,
            3 => q += a,
            _ => p += a,
        }
    }
    let chi = x - PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Norm of `lambda_{i t}` for `t = (t1, t2)`.
pub fn spectral_norm(t: (f64, f64)) -> f64 {
    (2.0 / 3.0 * (t.0 * t.0 + t.0 * t.1 + t.1 * t.1)).max(0.0).sqrt()
}

/// `v = L (x, y)` maps Euclidean polar coordinates onto the norm of `spectral_norm`;
/// `det L = sqrt(3)`.
fn norm_frame(x: f64, y: f64) -> (f64, f64) {
    (1.5f64.sqrt() * x - y / 2f64.sqrt(), 2f64.sqrt() * y)
}

/// Radial bump `g(H) = C exp(-1 / (1 - (|H| / r')^2))` with `int g dH = 2`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BumpProfile {
    pub radius: f64,
    pub scale: f64,
}

fn raw_bump(x: f64) -> f64 {
    if x >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

pub fn build_bump(r_prime: f64) -> Result<BumpProfile> {
    if !(r_prime > 0.0 && 2.0 * r_prime <= SUPPORT_LIMIT + 1e-15) {
        return Err(Error::Domain(format!("bump radius {r_prime} outside (0, 1/6]")));
    }
    let mut b = BumpProfile { radius: r_prime, scale: 1.0 };
    b.scale = 2.0 / b.integral();
    Ok(b)
}

impl BumpProfile {
    pub fn radial(&self, r: f64) -> f64 {
        self.scale * raw_bump(r / self.radius)
    }

    pub fn value(&self, h: &LieVector) -> f64 {
        self.radial(h.norm())
    }

    /// `2 pi int_0^r' g(r) r dr`.
    pub fn integral(&self) -> f64 {
        let rule = Rule::composite(16, 16, 0.0, self.radius);
        2.0 * PI * rule.integrate(|r| Complex64::new(self.radial(r) * r, 0.0)).re
    }

    /// Radial Fourier transform `2 pi int g(r) J0(rho r) r dr`.
    pub fn fourier_radial(&self, rho: f64) -> f64 {
        let panels = 16 + (rho * self.radius / 4.0).ceil() as usize;
        let rule = Rule::composite(12, panels, 0.0, self.radius);
        2.0 * PI
            * rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&r, &w)| w * self.radial(r) * bessel_j0(rho * r) * r)
                .sum::<f64>()
    }
}

/// `h = g * g`, with `F(h) = F(g)^2` tabulated along the radius.
#[derive(Clone, Debug)]
pub struct ConvolvedBump {
    pub g: BumpProfile,
    fg: Vec<f64>,
    fg_step: f64,
}

const FG_STEP: f64 = 0.05;
const FG_MAX: f64 = 1000.0;

impl ConvolvedBump {
    pub fn new(g: BumpProfile) -> Self {
        // F(g)(rho) = 2 int_0^r' p(x) cos(rho x) dx with p the projection of g onto a line
        let xs = Rule::composite(12, 64, 0.0, g.radius);
        let px: Vec<f64> = xs
            .nodes
            .iter()
            .zip(&xs.weights)
            .map(|(&x, &wx)| {
                let ymax = (g.radius * g.radius - x * x).max(0.0).sqrt();
                let ys = Rule::composite(12, 8, 0.0, ymax);
                let p: f64 = ys.nodes.iter().zip(&ys.weights).map(|(&y, &wy)| wy * g.radial((x * x + y * y).sqrt())).sum();
                4.0 * p * wx
            })
            .collect();
        let n = (FG_MAX / FG_STEP).ceil() as usize + 3;
        let fg: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let rho = i as f64 * FG_STEP;
                xs.nodes.iter().zip(&px).map(|(&x, &p)| p * (rho * x).cos()).sum()
            })
            .collect();
        Self { g, fg, fg_step: FG_STEP }
    }

    pub fn support_radius(&self) -> f64 {
        2.0 * self.g.radius
    }

    /// `F(g)` at radius `rho` of the tempered spectrum.
    pub fn fourier_g(&self, rho: f64) -> f64 {
        let x = rho.abs() / self.fg_step;
        let i = x.floor() as usize;
        if i + 2 >= self.fg.len() {
            return self.g.fourier_radial(rho);
        }
        let f = x - i as f64;
        if i == 0 {
            // even function: mirror
            let ym = self.fg[1];
            return lagrange4([ym, self.fg[0], self.fg[1], self.fg[2]], f);
        }
        lagrange4([self.fg[i - 1], self.fg[i], self.fg[i + 1], self.fg[i + 2]], f)
    }

    pub fn fourier_h(&self, rho: f64) -> f64 {
        let v = self.fourier_g(rho);
        v * v
    }

    /// `h(H)` by direct quadrature of the convolution.
    pub fn value(&self, h: &LieVector) -> f64 {
        self.value_radial(h.norm())
    }

    pub fn value_radial(&self, r: f64) -> f64 {
        let rp = self.g.radius;
        if r >= 2.0 * rp {
            return 0.0;
        }
        let rr = Rule::composite(12, 8, 0.0, rp);
        let rt = Rule::periodic(256, 0.0, 2.0 * PI);
        let mut s = 0.0;
        for (&p, &wp) in rr.nodes.iter().zip(&rr.weights) {
            let gp = self.g.radial(p);
            if gp == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for (&t, &wt) in rt.nodes.iter().zip(&rt.weights) {
                let d2 = p * p + r * r - 2.0 * p * r * t.cos();
                inner += wt * self.g.radial(d2.max(0.0).sqrt());
            }
            s += wp * p * gp * inner;
        }
        s
    }
}

/// Cubic Lagrange interpolation on nodes `-1, 0, 1, 2` at `0 <= f < 1`.
#[inline]
fn lagrange_weights(f: f64) -> [f64; 4] {
    [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    ]
}

#[inline]
fn lagrange4(y: [f64; 4], f: f64) -> f64 {
    let w = lagrange_weights(f);
    w[0] * y[0] + w[1] * y[1] + w[2] * y[2] + w[3] * y[3]
}

/// Fourier transform `int f(H) e^{lambda(H)} dH` of a function supported in
/// `|H| <= radius`, by polar Gauss quadrature in a B-orthonormal frame.
pub fn fourier_on_a<F: Fn(&LieVector) -> f64>(f: F, radius: f64, lambda: &SpectralParameter, n: usize) -> Result<Complex64> {
    let growth = lambda.s1.re.abs().max(lambda.s2.re.abs()) * 2.0 * radius;
    if growth > 600.0 {
        return Err(Error::Domain(format!("real part of lambda too large, exp({growth:.0}) overflows")));
    }
    let e1 = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
    let e2 = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
    let rr = Rule::composite(n, 4, 0.0, radius);
    let rt = Rule::periodic(4 * n, 0.0, 2.0 * PI);
    let mut s = Complex64::new(0.0, 0.0);
    for (&r, &wr) in rr.nodes.iter().zip(&rr.weights) {
        for (&t, &wt) in rt.nodes.iter().zip(&rt.weights) {
            let (sn, cs) = t.sin_cos();
            let h = LieVector::new(
                r * (cs * e1[0] + sn * e2[0]),
                r * (cs * e1[1] + sn * e2[1]),
                r * (cs * e1[2] + sn * e2[2]),
            );
            let v = f(&h);
            if v != 0.0 {
                s += lambda.eval(&h).exp() * (v * r * wr * wt);
            }
        }
    }
    Ok(s)
}

/// `F(h_T^W)(it) = sum_w F(h)(it - w.mu_T)` with `mu_T = 3iT (lambda_1 + lambda_2)`.
#[derive(Clone, Debug)]
pub struct SpectralWindow {
    pub t_param: f64,
    /// `mu_T = i center`.
    pub center: (f64, f64),
    pub bump: Arc<ConvolvedBump>,
}

/// Image of `t` under the Weyl element, acting on `s = i t`.
pub fn weyl_t(w: WeylElement, t: (f64, f64)) -> (f64, f64) {
    let m = w.matrix();
    (m[0][0] as f64 * t.0 + m[0][1] as f64 * t.1, m[1][0] as f64 * t.0 + m[1][1] as f64 * t.1)
}

/// Parameters `nu` with `lambda = 3 nu_1 lambda_1 + 3 nu_2 lambda_2` map to `t = 3 nu`.
pub fn nu_to_t(nu: (f64, f64)) -> (f64, f64) {
    (3.0 * nu.0, 3.0 * nu.1)
}

pub fn spectral_window(t_param: f64, bump: Arc<ConvolvedBump>) -> Result<SpectralWindow> {
    if !(t_param > 0.0) {
        return Err(Error::Domain(format!("T must be positive, got {t_param}")));
    }
    Ok(SpectralWindow { t_param, center: nu_to_t((t_param, t_param)), bump })
}

impl SpectralWindow {
    pub fn orbit(&self) -> Vec<(f64, f64)> {
        WeylElement::ALL.iter().map(|&w| weyl_t(w, self.center)).collect()
    }

    pub fn value(&self, t: (f64, f64)) -> f64 {
        self.orbit()
            .iter()
            .map(|c| self.bump.fourier_h(spectral_norm((t.0 - c.0, t.1 - c.1))))
            .sum()
    }

    /// Distance from `t` to the nearest point of the orbit of the centre.
    pub fn orbit_distance(&self, t: (f64, f64)) -> f64 {
        self.orbit().iter().map(|c| spectral_norm((t.0 - c.0, t.1 - c.1))).fold(f64::INFINITY, f64::min)
    }

    /// `int F(h_T^W)(t) |c(it)|^{-2} dt` over all of `R^2`, which is `k(I)`.
    pub fn plancherel_mass(&self, rho_max: f64) -> f64 {
        let c = self.center;
        let rr = Rule::composite(8, (rho_max / 4.0).ceil() as usize, 0.0, rho_max);
        let rt = Rule::periodic(96, 0.0, 2.0 * PI);
        let mut s = 0.0;
        for (&r, &wr) in rr.nodes.iter().zip(&rr.weights) {
            let fh = self.bump.fourier_h(r);
            let mut inner = 0.0;
            for (&th, &wt) in rt.nodes.iter().zip(&rt.weights) {
                let (sn, cs) = th.sin_cos();
                let v = norm_frame(r * cs, r * sn);
                inner += wt * spectral_density((c.0 + v.0, c.1 + v.1));
            }
            s += wr * r * fh * inner;
        }
        // six Weyl images contribute equally, sqrt(3) from the frame
        6.0 * 3f64.sqrt() * s
    }
}

/// Numerical parameters of the kernel construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelConfig {
    /// Spectral truncation radius; chosen from the tail estimate when absent.
    pub v_max: Option<f64>,
    /// Bound on the neglected spectral tail relative to `k(I)`.
    pub tail_target: f64,
    /// Sampling step of the spectral grid.
    pub dv: f64,
    /// Step of the envelope table on `a`.
    pub du: f64,
    /// Half width of the tables on `a` (in `u`-coordinates).
    pub u_max: f64,
    /// Step of the table of the Abel-side function.
    pub dg: f64,
    /// Minimal node count of the integral over `K`.
    pub k_nodes: usize,
    /// Nodes per radian of phase across `K`.
    pub k_density: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            v_max: None,
            tail_target: 1e-6,
            dv: 0.25,
            du: 0.004,
            u_max: 1.5,
            dg: 0.002,
            k_nodes: 24,
            k_density: 0.9,
        }
    }
}

/// Square table on `[-half, half]^2` with cubic interpolation.
#[derive(Clone, Debug)]
struct Grid2<T> {
    half: f64,
    step: f64,
    n: usize,
    data: Vec<T>,
}

impl<T: Copy + Default + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>> Grid2<T> {
    fn interp(&self, u1: f64, u2: f64) -> T {
        let x = (u1 + self.half) / self.step;
        let y = (u2 + self.half) / self.step;
        let (i, j) = (x.floor(), y.floor());
        if i < 1.0 || j < 1.0 || i + 2.0 >= self.n as f64 || j + 2.0 >= self.n as f64 {
            return T::default();
        }
        let (i, j) = (i as usize, j as usize);
        let wx = lagrange_weights(x - i as f64);
        let wy = lagrange_weights(y - j as f64);
        let mut acc = T::default();
        for a in 0..4 {
            let row = (i + a - 1) * self.n + j - 1;
            let r = self.data[row] * wy[0] + self.data[row + 1] * wy[1] + self.data[row + 2] * wy[2] + self.data[row + 3] * wy[3];
            acc = acc + r * wx[a];
        }
        acc
    }
}

/// `k = H^{-1}(F(h_T^W))`, evaluated through the Abel side:
/// `k(a) = int_K e^{rho(u)} G(u) dk` with `u = log A(k a)` and
/// `G(u) = int F(h_T^W)(t) |c(it)|^{-2} e^{i t.u} dt`.
#[derive(Clone, Debug)]
pub struct KernelFunction {
    pub window: SpectralWindow,
    pub config: KernelConfig,
    pub v_eff: f64,
    /// Largest frequency present in `G`.
    pub frequency: f64,
    envelope: Grid2<Complex64>,
    abel: Grid2<f64>,
}

fn taper(x: f64) -> f64 {
    if x <= 0.75 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        0.5 * (1.0 + (PI * (x - 0.75) / 0.25).cos())
    }
}

/// Relative size of the window beyond radius `v`, weighted by the `|t|^{-3/2}`
/// decay of spherical functions away from the identity.
pub fn spectral_tail(window: &SpectralWindow, v: f64) -> f64 {
    let c = spectral_norm(window.center);
    let f = |lo: f64, hi: f64, p: f64| {
        let rule = Rule::composite(8, ((hi - lo) / 2.0).ceil() as usize, lo, hi);
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&r, &w)| w * window.bump.fourier_h(r) * r * (c + r).powf(p))
            .sum::<f64>()
    };
    let total = f(0.0, 1000.0, 0.0) * c.powi(3);
    f(v, 1000.0, 1.5) / total
}

impl KernelFunction {
    pub fn build(window: SpectralWindow, config: KernelConfig) -> Result<Self> {
        let v_eff = match config.v_max {
            Some(v) => v,
            None => {
                let mut v = 40.0;
                while v < 400.0 && spectral_tail(&window, v) > config.tail_target {
                    v += 20.0;
                }
                v
            }
        };
        let envelope = Self::envelope_table(&window, v_eff, &config);
        let c = window.center;
        let frequency = 2.0 * c.0.abs().max(c.1.abs()) + 2f64.sqrt() * v_eff;
        let mut k = Self {
            window,
            config,
            v_eff,
            frequency,
            envelope,
            abel: Grid2 { half: 0.0, step: 1.0, n: 0, data: vec![] },
        };
        k.abel = k.abel_table();
        Ok(k)
    }

    /// `E(u) = int F(h)(v) taper(|v|/V) |c(i(c+v))|^{-2} e^{i v.u} dv` by a separable
    /// direct transform from the spectral grid to the `u`-grid.
    fn envelope_table(window: &SpectralWindow, v_eff: f64, cfg: &KernelConfig) -> Grid2<Complex64> {
        let c = window.center;
        let bound = 2f64.sqrt() * v_eff;
        let nv_half = (bound / cfg.dv).ceil() as usize;
        let nv = 2 * nv_half + 1;
        let vs: Vec<f64> = (0..nv).map(|j| (j as f64 - nv_half as f64) * cfg.dv).collect();
        let nu_half = (cfg.u_max / cfg.du).ceil() as usize;
        let nu = 2 * nu_half + 1;
        let us: Vec<f64> = (0..nu).map(|m| (m as f64 - nu_half as f64) * cfg.du).collect();
        let phase: Vec<Complex64> = vs
            .iter()
            .flat_map(|&v| us.iter().map(move |&u| Complex64::from_polar(1.0, v * u)))
            .collect();
        let w = cfg.dv * cfg.dv;
        // stage one: sum over v2 for each v1 row
        let stage: Vec<Vec<Complex64>> = (0..nv)
            .into_par_iter()
            .map(|j1| {
                let v1 = vs[j1];
                let mut out = vec![Complex64::new(0.0, 0.0); nu];
                for (j2, &v2) in vs.iter().enumerate() {
                    let r = spectral_norm((v1, v2));
                    if r >= v_eff {
                        continue;
                    }
                    let f = window.bump.fourier_h(r) * taper(r / v_eff) * spectral_density((c.0 + v1, c.1 + v2)) * w;
                    if f == 0.0 {
                        continue;
                    }
                    let ph = &phase[j2 * nu..(j2 + 1) * nu];
                    for (o, p) in out.iter_mut().zip(ph) {
                        *o += p * f;
                    }
                }
                out
            })
            .collect();
        // stage two over v1; E(-u) = conj E(u) fills the lower half
        let upper: Vec<Vec<Complex64>> = (nu_half..nu)
            .into_par_iter()
            .map(|m1| {
                let mut row = vec![Complex64::new(0.0, 0.0); nu];
                for (j1, st) in stage.iter().enumerate() {
                    let p = phase[j1 * nu + m1];
                    for (o, s) in row.iter_mut().zip(st) {
                        *o += p * s;
                    }
                }
                row
            })
            .collect();
        let mut data = vec![Complex64::new(0.0, 0.0); nu * nu];
        for (k, row) in upper.iter().enumerate() {
            let m1 = nu_half + k;
            for m2 in 0..nu {
                data[m1 * nu + m2] = row[m2];
                data[(nu - 1 - m1) * nu + (nu - 1 - m2)] = row[m2].conj();
            }
        }
        Grid2 { half: nu_half as f64 * cfg.du, step: cfg.du, n: nu, data }
    }

    /// `G(u) = sum_w e^{i c.(M_w^T u)} E(M_w^T u)` (real by Weyl symmetry).
    pub fn abel_side(&self, u: (f64, f64)) -> f64 {
        let c = self.window.center;
        let mut s = 0.0;
        for w in WeylElement::ALL {
            let m = w.matrix();
            let x = m[0][0] as f64 * u.0 + m[1][0] as f64 * u.1;
            let y = m[0][1] as f64 * u.0 + m[1][1] as f64 * u.1;
            let e = self.envelope.interp(x, y);
            let ph = Complex64::from_polar(1.0, c.0 * x + c.1 * y);
            s += (ph * e).re;
        }
        s
    }

    fn abel_table(&self) -> Grid2<f64> {
        let cfg = &self.config;
        let half_n = ((cfg.u_max - 3.0 * cfg.du) / cfg.dg).floor() as usize;
        let n = 2 * half_n + 1;
        let upper: Vec<Vec<f64>> = (half_n..n)
            .into_par_iter()
            .map(|i| {
                let u1 = (i as f64 - half_n as f64) * cfg.dg;
                (0..n).map(|j| self.abel_side((u1, (j as f64 - half_n as f64) * cfg.dg))).collect()
            })
            .collect();
        let mut data = vec![0.0; n * n];
        for (k, row) in upper.iter().enumerate() {
            let i = half_n + k;
            for j in 0..n {
                data[i * n + j] = row[j];
                data[(n - 1 - i) * n + (n - 1 - j)] = row[j];
            }
        }
        Grid2 { half: half_n as f64 * cfg.dg, step: cfg.dg, n, data }
    }

    /// Tabulated `G(u)`.
    pub fn abel_interp(&self, u: (f64, f64)) -> f64 {
        self.abel.interp(u.0, u.1)
    }

    pub fn support_radius(&self) -> f64 {
        self.window.bump.support_radius()
    }

    /// Node count per axis of the `K`-integral at `a`.
    pub fn k_nodes(&self, a: &DiagonalElement) -> usize {
        let h = a.log();
        let hmax = h.h.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        self.config.k_nodes + (self.config.k_density * self.frequency * hmax).ceil() as usize
    }

    /// Whether the tables reach every `u` met by the integral at `a`.
    pub fn covers(&self, a: &DiagonalElement) -> bool {
        let hmax = a.log().h.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        hmax < self.abel.half - 2.0 * self.abel.step
    }

    /// `k(a)`; depends only on the Cartan projection of `a`. Outside the reach
    /// of the tables the support certificate `d(a, I) > 2r'` gives zero.
    pub fn value(&self, a: &DiagonalElement) -> f64 {
        if !self.covers(a) && a.distance_to_identity() > self.support_radius() {
            return 0.0;
        }
        self.value_with_nodes(a, self.k_nodes(a))
    }

    pub fn value_with_nodes(&self, a: &DiagonalElement, n: usize) -> f64 {
        if a.distance_to_identity() < 1e-14 {
            return self.abel_interp((0.0, 0.0));
        }
        k_average(a, n, |row| row.iter().map(|&(u1, u2, w)| w * self.abel.interp(u1, u2)).sum::<f64>())
            .into_iter()
            .sum()
    }

    /// `k(I)` including the full spectral tail.
    pub fn identity_value(&self) -> f64 {
        self.window.plancherel_mass(1000.0)
    }

    /// Values on the grid `(log alpha1, log alpha2) = (i, j) * log_max / (n - 1)`.
    pub fn tabulate(&self, n: usize, log_max: f64) -> ChamberTable {
        let step = log_max / (n - 1).max(1) as f64;
        let mut values = vec![0.0; n * n];
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
        let vals: Vec<f64> = cells
            .iter()
            .map(|&(i, j)| {
                let a = DiagonalElement::from_alphas((i as f64 * step).exp(), (j as f64 * step).exp());
                if a.distance_to_identity() > self.support_radius() + 1e-9 {
                    0.0
                } else {
                    self.value(&a)
                }
            })
            .collect();
        for (&(i, j), v) in cells.iter().zip(vals) {
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
        ChamberTable { n, step, values }
    }
}

/// Integral over `K` of a function of `u = (-log|a^{-1} k e_1|, -log|a^T k e_3|)`
/// against `e^{u_1 + u_2} dk`. Nodes cover one octant of the sphere for `k e_3`
/// and half of the circle for `k e_1`, which suffices because both norms are
/// invariant under coordinate sign changes. `per_row` receives `(u1, u2, weight)`
/// for one Gauss node in `cos theta`; the weights of all rows sum to the integral.
pub fn k_average<R: Send, F: Fn(&[(f64, f64, f64)]) -> R + Sync>(a: &DiagonalElement, n: usize, per_row: F) -> Vec<R> {
    let a = a.dominant();
    let inv = a.a.map(|x| 1.0 / x);
    let sq = |v: [f64; 3], d: [f64; 3]| (v[0] * d[0]).powi(2) + (v[1] * d[1]).powi(2) + (v[2] * d[2]).powi(2);
    let ct = Rule::gauss(n, 0.0, 1.0);
    let m = n.max(2);
    // phi on [0, pi/2]: trapezoid nodes of a periodic rule with 4m points
    let phis: Vec<(f64, f64)> = (0..=m)
        .map(|j| {
            let w = if j == 0 || j == m { 0.5 } else { 1.0 };
            (j as f64 * PI / (2.0 * m as f64), w * PI / (2.0 * m as f64))
        })
        .collect();
    let psis = Rule::periodic(n, 0.0, PI);
    let psi_sc: Vec<(f64, f64)> = psis.nodes.iter().map(|p| p.sin_cos()).collect();
    let norm = psis.weights[0] * 2.0 / (PI * PI);
    ct.nodes
        .par_iter()
        .zip(&ct.weights)
        .map(|(&cth, &wt)| {
            let sth = (1.0 - cth * cth).max(0.0).sqrt();
            let mut row = Vec::with_capacity(phis.len() * psi_sc.len());
            for &(ph, wp) in &phis {
                let (sp, cp) = ph.sin_cos();
                let k3 = [sth * cp, sth * sp, cth];
                let u2 = -0.5 * sq(k3, a.a).ln();
                let ea = [cth * cp, cth * sp, -sth];
                let eb = [-sp, cp, 0.0];
                for &(s, c) in &psi_sc {
                    let k1 = [c * ea[0] + s * eb[0], c * ea[1] + s * eb[1], c * ea[2] + s * eb[2]];
                    let u1 = -0.5 * sq(k1, inv).ln();
                    row.push((u1, u2, (u1 + u2).exp() * wp * wt * norm));
                }
            }
            per_row(&row)
        })
        .collect()
}

/// `phi_{-it}(a)` for several `t` from one set of nodes over `K`.
pub fn spherical_batch(ts: &[(f64, f64)], a: &DiagonalElement, n: usize) -> Vec<Complex64> {
    let rows = k_average(a, n, |row| {
        let mut acc = vec![Complex64::new(0.0, 0.0); ts.len()];
        for &(u1, u2, w) in row {
            for (o, t) in acc.iter_mut().zip(ts) {
                *o += Complex64::from_polar(w, -(t.0 * u1 + t.1 * u2));
            }
        }
        acc
    });
    let mut out = vec![Complex64::new(0.0, 0.0); ts.len()];
    for r in rows {
        for (o, v) in out.iter_mut().zip(r) {
            *o += v;
        }
    }
    out
}

/// `k` sampled on a square grid in `(log alpha1, log alpha2)`.
#[derive(Clone, Debug, Serialize)]
pub struct ChamberTable {
    pub n: usize,
    pub step: f64,
    pub values: Vec<f64>,
}

impl ChamberTable {
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n).map(move |j| (i as f64 * self.step, j as f64 * self.step, self.values[i * self.n + j]))
        })
    }

    /// Bilinear interpolation; zero outside the table.
    pub fn interpolate(&self, l1: f64, l2: f64) -> f64 {
        let x = l1 / self.step;
        let y = l2 / self.step;
        if x < 0.0 || y < 0.0 || x > (self.n - 1) as f64 || y > (self.n - 1) as f64 {
            return 0.0;
        }
        let i = (x.floor() as usize).min(self.n - 2);
        let j = (y.floor() as usize).min(self.n - 2);
        let (fx, fy) = (x - i as f64, y - j as f64);
        let v = |a: usize, b: usize| self.values[a * self.n + b];
        (1.0 - fx) * ((1.0 - fy) * v(i, j) + fy * v(i, j + 1)) + fx * ((1.0 - fy) * v(i + 1, j) + fy * v(i + 1, j + 1))
    }
}

/// `prod_{alpha > 0} sinh(alpha(H))`, the radial part of Haar measure.
pub fn haar_radial_density(h: &LieVector) -> f64 {
    (h.h[0] - h.h[1]).sinh() * (h.h[1] - h.h[2]).sinh() * (h.h[0] - h.h[2]).sinh()
}

/// Polar Gauss rule over `{H in closed chamber, |H| <= radius}`; weights include
/// the Haar density.
pub fn chamber_rule(radius: f64, n_r: usize, n_theta: usize) -> Vec<(DiagonalElement, f64)> {
    let u0 = [2.0 / 6f64.sqrt(), -1.0 / 6f64.sqrt(), -1.0 / 6f64.sqrt()];
    let u1 = [0.0, 1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt()];
    let rr = Rule::gauss(n_r, 0.0, radius);
    let rt = Rule::gauss(n_theta, 0.0, PI / 3.0);
    let mut out = Vec::with_capacity(n_r * n_theta);
    for (&r, &wr) in rr.nodes.iter().zip(&rr.weights) {
        for (&th, &wt) in rt.nodes.iter().zip(&rt.weights) {
            let (s, c) = th.sin_cos();
            let h = LieVector::new(
                r * (c * u0[0] + s * u1[0]),
                r * (c * u0[1] + s * u1[1]),
                r * (c * u0[2] + s * u1[2]),
            );
            out.push((h.exp(), wr * wt * r * haar_radial_density(&h)));
        }
    }
    out
}

/// Radial and angular node counts of the chamber rule that resolve the
/// oscillation of `phi_{-it}` for `|t|` up to a few `T`.
pub fn forward_nodes(t_param: f64) -> usize {
    (1.6 * t_param).ceil().max(16.0) as usize
}

/// Normalization of the forward transform `int_{A+} k(a) phi_{-it}(a) J(a) dH`
/// (with `dH` Lebesgue in a Killing-orthonormal frame and `J` the product of
/// `sinh` over positive roots) that inverts the inversion integral in `dt_1 dt_2`.
pub fn helgason_normalization() -> f64 {
    1.0 / (3.0 * 3f64.sqrt() * PI * PI)
}

/// Unnormalized `int_{A+} k(a) phi_{-it}(a) J(a) dH` at several `t`.
pub fn forward_helgason_raw(kernel: &KernelFunction, ts: &[(f64, f64)], n_r: usize, n_theta: usize) -> Vec<Complex64> {
    let rule = chamber_rule(kernel.support_radius() * 1.02, n_r, n_theta);
    let tmax = ts.iter().fold(0.0f64, |m, t| m.max(t.0.abs() + t.1.abs()));
    let mut out = vec![Complex64::new(0.0, 0.0); ts.len()];
    for (a, w) in &rule {
        let k = kernel.value(a);
        if k == 0.0 {
            continue;
        }
        let hmax = a.log().h.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let n = kernel.config.k_nodes + (kernel.config.k_density * 2.0 * tmax * hmax).ceil() as usize;
        for (o, phi) in out.iter_mut().zip(spherical_batch(ts, a, n)) {
            *o += phi * (k * w);
        }
    }
    out
}

/// Forward Helgason transform of the kernel.
pub fn forward_helgason(kernel: &KernelFunction, ts: &[(f64, f64)], n_r: usize, n_theta: usize) -> Vec<Complex64> {
    let c = helgason_normalization();
    forward_helgason_raw(kernel, ts, n_r, n_theta).into_iter().map(|v| v * c).collect()
}

/// Normalization measured by requiring an exact round trip at the window centre,
/// as a check on `helgason_normalization`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HelgasonCalibration {
    pub constant: f64,
    pub t_param: f64,
    /// `constant / helgason_normalization() - 1`.
    pub deviation: f64,
}

impl HelgasonCalibration {
    pub fn calibrate(kernel: &KernelFunction, n_r: usize, n_theta: usize) -> Self {
        let c = kernel.window.center;
        let raw = forward_helgason_raw(kernel, &[c], n_r, n_theta)[0];
        let constant = kernel.window.value(c) / raw.re;
        Self { constant, t_param: kernel.window.t_param, deviation: constant / helgason_normalization() - 1.0 }
    }
}

/// Literal spherical inversion `6 int F(h)(t - c) phi_{it}(a) |c(it)|^{-2} dt`
/// over `|t - c| <= v_max`, with `phi` from the direct formula.
pub fn inverse_helgason_quadrature(
    window: &SpectralWindow,
    a: &DiagonalElement,
    v_max: f64,
    n_r: usize,
    n_theta: usize,
    q: &QuadratureConfig,
) -> Result<f64> {
    let c = window.center;
    let rr = Rule::composite(8, n_r.div_ceil(8), 0.0, v_max);
    let rt = Rule::periodic(n_theta, 0.0, 2.0 * PI);
    let mut s = 0.0;
    for (&r, &wr) in rr.nodes.iter().zip(&rr.weights) {
        let fh = window.bump.fourier_h(r) * taper(r / v_max);
        if fh == 0.0 {
            continue;
        }
        for (&th, &wt) in rt.nodes.iter().zip(&rt.weights) {
            let (sn, cs) = th.sin_cos();
            let v = norm_frame(r * cs, r * sn);
            let t = (c.0 + v.0, c.1 + v.1);
            let phi = spherical_direct_diag(&SpectralParameter::imaginary(t.0, t.1), a, q)?.value;
            s += wr * wt * r * fh * spectral_density(t) * phi.re;
        }
    }
    Ok(6.0 * 3f64.sqrt() * s)
}

/// One row of the regime report.
#[derive(Clone, Debug, Serialize)]
pub struct RegimeRow {
    pub regime: u8,
    pub t_param: f64,
    pub sup_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegimeReport {
    pub rows: Vec<RegimeRow>,
    /// Per regime: largest-T ratio divided by smallest-T ratio.
    pub growth: [f64; 4],
    pub flat: [bool; 4],
}

/// Bound of the regime containing `(alpha1, alpha2)` for parameter `t`, with
/// walls of width `wall / T`.
pub fn regime_bound(alpha1: f64, alpha2: f64, t: f64, wall: f64) -> (u8, f64) {
    let near1 = alpha1 <= 1.0 + wall / t;
    let near2 = alpha2 <= 1.0 + wall / t;
    let a3 = alpha1 * alpha2;
    match (near1, near2) {
        (true, true) => (1, t.powi(3)),
        (true, false) => (2, t * t / (alpha2 * alpha2 - 1.0)),
        (false, true) => (3, t * t / (alpha1 * alpha1 - 1.0)),
        (false, false) => (4, t.powf(1.5) / ((alpha1 * alpha1 - 1.0) * (alpha2 * alpha2 - 1.0) * (a3 * a3 - 1.0)).sqrt()),
    }
}

/// Suprema of `|k(a)| / bound(a)` per regime and `T`, on grids scaled with `1/T`
/// near the walls and fixed inside the chamber.
pub fn verify_regime_bounds(kernels: &[KernelFunction], interior: &[f64], wall: f64) -> RegimeReport {
    let mut rows = Vec::new();
    for k in kernels {
        let t = k.window.t_param;
        let mut sup = [0.0f64; 4];
        let near: Vec<f64> = [0.0, 0.5, 1.0].iter().map(|x| 1.0 + wall * x / t).collect();
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for &x in &near {
            for &y in &near {
                pts.push((x, y));
            }
            for &y in interior {
                pts.push((x, y));
                pts.push((y, x));
            }
        }
        for &x in interior {
            for &y in interior {
                pts.push((x, y));
            }
        }
        for (a1, a2) in pts {
            let (reg, bound) = regime_bound(a1, a2, t, wall);
            let v = k.value(&DiagonalElement::from_alphas(a1, a2)).abs();
            sup[reg as usize - 1] = sup[reg as usize - 1].max(v / bound);
        }
        for (i, s) in sup.iter().enumerate() {
            rows.push(RegimeRow { regime: i as u8 + 1, t_param: t, sup_ratio: *s });
        }
    }
    let mut growth = [0.0; 4];
    let mut flat = [false; 4];
    for r in 0..4 {
        let series: Vec<&RegimeRow> = rows.iter().filter(|x| x.regime as usize == r + 1).collect();
        let lo = series.iter().min_by(|a, b| a.t_param.total_cmp(&b.t_param));
        let hi = series.iter().max_by(|a, b| a.t_param.total_cmp(&b.t_param));
        if let (Some(lo), Some(hi)) = (lo, hi) {
            growth[r] = if lo.sup_ratio > 0.0 { hi.sup_ratio / lo.sup_ratio } else { f64::NAN };
            flat[r] = growth[r] <= 1.5;
        }
    }
    RegimeReport { rows, growth, flat }
}
