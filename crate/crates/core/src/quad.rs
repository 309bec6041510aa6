//! Quadrature rules and special functions shared by the analytic modules.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Fixed rule on an interval.
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn gauss(n: usize, a: f64, b: f64) -> Self {
        let (x, w) = gauss_legendre(n);
        let (m, r) = ((a + b) / 2.0, (b - a) / 2.0);
        Self { nodes: x.iter().map(|t| m + r * t).collect(), weights: w.iter().map(|v| v * r).collect() }
    }

    /// `panels` equal Gauss panels of `n` nodes each.
    pub fn composite(n: usize, panels: usize, a: f64, b: f64) -> Self {
        let h = (b - a) / panels as f64;
        let mut out = Self { nodes: vec![], weights: vec![] };
        for p in 0..panels {
            let r = Self::gauss(n, a + p as f64 * h, a + (p + 1) as f64 * h);
            out.nodes.extend(r.nodes);
            out.weights.extend(r.weights);
        }
        out
    }

    /// Periodic trapezoid rule on `[a, a + period)`.
    pub fn periodic(n: usize, a: f64, period: f64) -> Self {
        let h = period / n as f64;
        Self { nodes: (0..n).map(|i| a + i as f64 * h).collect(), weights: vec![h; n] }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w).sum()
    }
}

const GK_X: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GK_WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WK[7];
    let mut g = fc * GK_WG[3];
    for i in 0..7 {
        let dx = h * GK_X[i];
        let s = f(c - dx) + f(c + dx);
        k += s * GK_WK[i];
        if i % 2 == 1 {
            g += s * GK_WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Globally adaptive Gauss-Kronrod (7, 15) integration of a complex function.
pub fn adaptive_gk<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<(Complex64, f64)> {
    let mut panels: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    let step = (b - a) / initial_panels as f64;
    for i in 0..initial_panels {
        let (lo, hi) = (a + i as f64 * step, a + (i + 1) as f64 * step);
        let (v, e) = gk15(&mut f, lo, hi);
        panels.push((lo, hi, v, e));
    }
    loop {
        let total: Complex64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if panels.len() >= max_panels {
            return Err(Error::Convergence(format!(
                "adaptive quadrature on [{a}, {b}] stopped at error {err:.3e} for value {:.3e}",
                total.norm()
            )));
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal branch of `log Gamma(z)`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection
        let pi = Complex64::new(PI, 0.0);
        return pi.ln() - (pi * z).sin().ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Product rule for integrals over `SO(3)` of functions of the first and third
/// rows `(k1, k3)`: `k3` on the sphere, `k1` on the great circle orthogonal to it.
#[derive(Clone, Debug)]
pub struct KRule {
    pub cos_theta: Rule,
    pub phi: Rule,
    pub psi: Rule,
    /// The integrand only depends on `k1` and `k3` up to sign.
    pub even: bool,
}

impl KRule {
    pub fn new(n_theta: usize, n_phi: usize, n_psi: usize, even: bool) -> Self {
        if even {
            Self {
                cos_theta: Rule::gauss(n_theta, 0.0, 1.0),
                phi: Rule::periodic(n_phi, 0.0, 2.0 * PI),
                psi: Rule::periodic(n_psi, 0.0, PI),
                even,
            }
        } else {
            Self {
                cos_theta: Rule::gauss(n_theta, -1.0, 1.0),
                phi: Rule::periodic(n_phi, 0.0, 2.0 * PI),
                psi: Rule::periodic(n_psi, 0.0, 2.0 * PI),
                even,
            }
        }
    }

    pub fn size(&self) -> usize {
        self.cos_theta.len() * self.phi.len() * self.psi.len()
    }

    /// Normalized Haar integral of `f(k1, k3)`.
    pub fn integrate<F: FnMut(&[f64; 3], &[f64; 3]) -> Complex64>(&self, mut f: F) -> Complex64 {
        let norm = if self.even { 1.0 / (2.0 * PI * PI) } else { 1.0 / (8.0 * PI * PI) };
        let mut total = Complex64::new(0.0, 0.0);
        for (&ct, &wt) in self.cos_theta.nodes.iter().zip(&self.cos_theta.weights) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for (&ph, &wp) in self.phi.nodes.iter().zip(&self.phi.weights) {
                let (sp, cp) = ph.sin_cos();
                let k3 = [st * cp, st * sp, ct];
                // orthonormal frame of k3^perp
                let ea = [ct * cp, ct * sp, -st];
                let eb = [-sp, cp, 0.0];
                let mut inner = Complex64::new(0.0, 0.0);
                for (&ps, &wq) in self.psi.nodes.iter().zip(&self.psi.weights) {
                    let (s, c) = ps.sin_cos();
                    let k1 = [c * ea[0] + s * eb[0], c * ea[1] + s * eb[1], c * ea[2] + s * eb[2]];
                    inner += f(&k1, &k3) * wq;
                }
                total += inner * (wt * wp);
            }
        }
        total * norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let r = Rule::gauss(10, 0.0, 2.0);
        let v = r.integrate(|x| Complex64::new(x.powi(19), 0.0));
        assert_abs_diff_eq!(v.re, 2f64.powi(20) / 20.0, epsilon = 1e-7);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let f = |x: f64| Complex64::new(1e-3 / (x * x + 1e-6), 0.0);
        let (v, _) = adaptive_gk(f, -1.0, 1.0, 4, 1e-12, 0.0, 2000).unwrap();
        assert_abs_diff_eq!(v.re, 2.0 * (1e3f64).atan(), epsilon = 1e-9);
    }

    #[test]
    fn ln_gamma_matches_known_values() {
        assert_abs_diff_eq!(ln_gamma(Complex64::new(5.0, 0.0)).re, 24f64.ln(), epsilon = 1e-13);
        assert_abs_diff_eq!(ln_gamma(Complex64::new(0.5, 0.0)).re, PI.sqrt().ln(), epsilon = 1e-13);
        // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
        let t = 3.7;
        let g = ln_gamma(Complex64::new(0.5, t)).re * 2.0;
        assert_abs_diff_eq!(g, (PI / (PI * t).cosh()).ln(), epsilon = 1e-12);
        // |Gamma(i t)|^2 = pi / (t sinh(pi t))
        let g = ln_gamma(Complex64::new(0.0, t)).re * 2.0;
        assert_abs_diff_eq!(g, (PI / (t * (PI * t).sinh())).ln(), epsilon = 1e-12);
    }

    #[test]
    fn k_rule_has_unit_mass_and_correct_moments() {
        for even in [true, false] {
            let r = KRule::new(12, 16, 16, even);
            let one = r.integrate(|_, _| Complex64::new(1.0, 0.0));
            assert_abs_diff_eq!(one.re, 1.0, epsilon = 1e-13);
            // E[k_{1x}^2] = 1/3, E[k_{1x}^2 k_{3y}^2] = 2/15 (orthogonal rows)
            let m = r.integrate(|k1, k3| Complex64::new(k1[0] * k1[0] * k3[1] * k3[1], 0.0));
            assert_abs_diff_eq!(m.re, 2.0 / 15.0, epsilon = 1e-12);
        }
    }
}
