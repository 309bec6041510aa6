use std::str::FromStr;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use num_complex::Complex64;
use serde_json::json;
use sl3::counting::{
    count_matrices, counting_bound, final_bound_terms, geometric_side, optimize_amplifier_exponent, sup_norm_exponent,
    BasePoint, CompactPoint, CountQuery,
};
use sl3::hecke::{coset_count_brute, rational, verify_linearizations, DivisorTriple};
use sl3::lie::{DiagonalElement, SpectralParameter, WeylElement};
use sl3::spherical::{c_function, spherical_direct_diag, spherical_wall, ThirdFormula, Wall};
use sl3::testfn::{build_bump, spectral_window, verify_regime_bounds, ConvolvedBump, KernelFunction};

use crate::config::RunConfig;
use crate::report::{write_csv, Check, Report};
use crate::{CountArgs, GeomArgs, KernelArgs, SphericalArgs, SupnormArgs};

/// Malformed input, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "usage: {}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Parses `2`, `-1.5`, `i2`, `-i2`, `2i` or `1+2i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    let moved = if let Some(rest) = t.strip_prefix("-i") {
        format!("-{rest}i")
    } else if let Some(rest) = t.strip_prefix('i') {
        format!("{rest}i")
    } else {
        t.to_string()
    };
    Complex64::from_str(&moved).map_err(|_| usage(format!("cannot parse '{s}' as a complex number")))
}

pub fn parse_parameter(s: &str) -> Result<SpectralParameter> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(usage(format!("spectral parameter needs two components, got '{s}'")));
    }
    Ok(SpectralParameter::new(parse_complex(parts[0])?, parse_complex(parts[1])?))
}

fn chamber_grid(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![2.0];
    }
    (0..n).map(|i| 1.2 + 1.8 * i as f64 / (n - 1) as f64).collect()
}

pub fn spherical(cfg: &RunConfig, a: &SphericalArgs) -> Result<Report> {
    let s = parse_parameter(&a.s)?;
    if a.grid == 0 {
        return Err(usage("grid must have at least one point"));
    }
    cfg.validate()?;
    let q = cfg.quadrature;
    let mut r = Report::new("spherical", cfg);
    let grid = chamber_grid(a.grid);
    let third = r.time("calibration", || ThirdFormula::new(s, q))?;
    let one = Complex64::new(1.0, 0.0);
    let at_id = third.eval(&DiagonalElement::identity())?.value;
    r.checks.push(Check::close("third formula at identity", "normalization", 1.0, (at_id - one).norm() + 1.0, 1e-6));

    let mut rows = Vec::new();
    let mut worst_rel: f64 = 0.0;
    let mut worst_weyl: f64 = 0.0;
    let start = std::time::Instant::now();
    for &a1 in &grid {
        for &a2 in &grid {
            let pt = DiagonalElement::from_alphas(a1, a2);
            let d = spherical_direct_diag(&s, &pt, &q)?.value;
            let t = third.eval(&pt)?.value;
            let rel = (d - t).norm() / d.norm().max(1e-300);
            worst_rel = worst_rel.max(rel);
            let mut weyl: f64 = 0.0;
            for w in WeylElement::ALL {
                let dw = spherical_direct_diag(&s.weyl(w), &pt, &q)?.value;
                weyl = weyl.max((dw - d).norm());
            }
            worst_weyl = worst_weyl.max(weyl);
            rows.push(json!({"alpha1": a1, "alpha2": a2, "direct": [d.re, d.im], "third": [t.re, t.im], "relative": rel, "weyl": weyl}));
        }
    }
    r.timings.insert("grid".into(), start.elapsed().as_secs_f64());
    r.checks.push(Check::new("direct vs third", "third integral formula", 0.0, worst_rel, 1e-3, worst_rel < 1e-3));
    r.checks.push(Check::new("Weyl invariance", "direct formula at w.s", 0.0, worst_weyl, 1e-4, worst_weyl < 1e-4));

    let mut walls = Vec::new();
    let mut worst_wall: f64 = 0.0;
    for alpha in [1.5, 2.0, 4.0] {
        for (wall, pt) in [(Wall::First, DiagonalElement::from_alphas(1.0, alpha)), (Wall::Second, DiagonalElement::from_alphas(alpha, 1.0))] {
            let w = spherical_wall(&s, alpha, wall, third.kappa, &q)?.value;
            let t = third.eval(&pt)?.value;
            let rel = (w - t).norm() / t.norm().max(1e-300);
            worst_wall = worst_wall.max(rel);
            walls.push(json!({"wall": format!("{wall:?}"), "alpha": alpha, "wall_value": [w.re, w.im], "third": [t.re, t.im], "relative": rel}));
        }
    }
    r.checks.push(Check::new("wall vs third", "third integral formula", 0.0, worst_wall, 1e-3, worst_wall < 1e-3));

    let trivial = (s.s1 + 1.0).norm() < 1e-14 && (s.s2 + 1.0).norm() < 1e-14;
    if trivial {
        let dev = rows
            .iter()
            .filter_map(|row| row["direct"].as_array().map(|v| (v[0].as_f64().unwrap_or(f64::NAN) - 1.0).abs().max(v[1].as_f64().unwrap_or(f64::NAN).abs())))
            .fold(0.0f64, f64::max);
        r.checks.push(Check::new("constant function", "phi_(-1,-1) = 1", 1.0, 1.0 + dev, 1e-6, dev < 1e-6));
    }
    r.data = json!({"s": [[s.s1.re, s.s1.im], [s.s2.re, s.s2.im]], "kappa": third.kappa, "grid": rows, "walls": walls});
    Ok(r)
}

pub fn hecke_linearize(cfg: &RunConfig, p: u64, q: u64) -> Result<Report> {
    let mut r = Report::new("hecke", cfg);
    let lin = r.time("linearize", || verify_linearizations(p, q)).map_err(|e| usage(e.to_string()))?;
    for id in &lin.identities {
        r.checks.push(Check::new(&id.name, "exact Hecke multiplication", &id.rhs, &id.lhs, "exact", id.pass));
    }
    r.data = serde_json::to_value(&lin)?;
    Ok(r)
}

fn build_kernels(cfg: &RunConfig, ts: &[f64]) -> Result<Vec<KernelFunction>> {
    let bump = Arc::new(ConvolvedBump::new(build_bump(cfg.bump_radius)?));
    ts.iter()
        .map(|&t| KernelFunction::build(spectral_window(t, bump.clone())?, cfg.kernel).map_err(Into::into))
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

pub fn kernel(cfg: &mut RunConfig, a: &KernelArgs) -> Result<Report> {
    if let Some(t) = &a.t {
        if t.is_empty() {
            return Err(usage("empty T-list"));
        }
        cfg.t_list = t.clone();
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let mut r = Report::new("kernel", cfg);
    let ts = cfg.t_list.clone();
    let kernels = r.time("build", || build_kernels(cfg, &ts))?;
    let mut rows = Vec::new();
    for k in &kernels {
        let ki = k.value(&DiagonalElement::identity());
        rows.push(json!({"T": k.window.t_param, "k_identity": ki, "plancherel_mass": k.identity_value(), "v_max": k.v_eff}));
    }
    if ts.len() >= 2 {
        let ks: Vec<f64> = kernels.iter().map(|k| k.value(&DiagonalElement::identity())).collect();
        let slope = log_slope(&ts, &ks);
        r.checks.push(Check::new("k(I) growth exponent", "T^3 regime", 3.0, slope, 0.2, (slope - 3.0).abs() <= 0.2));
    }
    let regimes = r.time("regimes", || verify_regime_bounds(&kernels, &[1.05, 1.1, 1.15], cfg.wall_width));
    if a.export {
        for k in &kernels {
            let table = k.tabulate(a.table, 2.0 * k.support_radius());
            let rows: Vec<Vec<String>> = table.rows().map(|(x, y, v)| vec![format!("{x:.6}"), format!("{y:.6}"), format!("{v:.9e}")]).collect();
            let path = cfg.output_dir.join(format!("kernel_T{}.csv", k.window.t_param));
            write_csv(&path, &["log_alpha1", "log_alpha2", "k"], &rows)?;
        }
    }
    r.data = json!({"kernels": rows, "regimes": regimes});
    Ok(r)
}

fn base_point(cfg: &RunConfig, a: &CountArgs) -> Result<BasePoint> {
    match &a.compact {
        Some(v) => {
            if v.len() != 5 {
                return Err(usage("compact point needs five values x1,x2,x3,b1,b2"));
            }
            let c = CompactPoint::new([v[0], v[1], v[2]], [v[3], v[4]], cfg.count.b_max).map_err(|e| usage(e.to_string()))?;
            Ok(BasePoint::Compact(c))
        }
        None => Ok(BasePoint::Identity),
    }
}

pub fn count(cfg: &RunConfig, a: &CountArgs) -> Result<Report> {
    let base = base_point(cfg, a)?;
    let q = CountQuery::new(a.l, a.n, [a.d1, a.d2], base).map_err(|e| usage(e.to_string()))?;
    let mut r = Report::new("count", cfg);
    let res = r.time("count", || count_matrices(&q, &cfg.count))?;
    let bound = counting_bound(&q, &cfg.count);
    let mut data = json!({"count": res.count, "bound": bound, "constant": res.count as f64 / bound});
    if a.witnesses {
        data["witnesses"] = serde_json::to_value(&res.witnesses)?;
    }
    if a.scatter {
        let mut rows = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let d = [a.d1 * i as f64 / 3.0, a.d2 * j as f64 / 3.0];
                let qq = CountQuery::new(a.l, a.n, d, base)?;
                let c = count_matrices(&qq, &cfg.count)?.count;
                rows.push(vec![a.l.to_string(), a.n.to_string(), format!("{}", d[0]), format!("{}", d[1]), c.to_string(), format!("{:.9e}", counting_bound(&qq, &cfg.count))]);
            }
        }
        write_csv(&cfg.output_dir.join("count_scatter.csv"), &["l", "n", "d1", "d2", "count", "bound"], &rows)?;
    }
    r.data = data;
    Ok(r)
}

fn geometric(cfg: &mut RunConfig, l: Option<u64>, t: Option<f64>, r: &mut Report) -> Result<sl3::counting::GeometricSide> {
    if let Some(l) = l {
        cfg.l = l;
    }
    if let Some(t) = t {
        cfg.t_list = vec![t];
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let k = r.time("kernel", || build_kernels(cfg, &cfg.t_list[..1]))?.remove(0);
    r.time("geometric side", || geometric_side(&BasePoint::Identity, cfg.l, &k, cfg.alpha_bound, &cfg.count))
        .with_context(|| format!("geometric side for L = {}", cfg.l))
}

pub fn geomside(cfg: &mut RunConfig, a: &GeomArgs) -> Result<Report> {
    let mut r = Report::new("geomside", &*cfg);
    let g = geometric(cfg, a.l, a.t, &mut r)?;
    r.config = serde_json::to_value(&*cfg)?;
    if a.export {
        let rows: Vec<Vec<String>> = g.terms.iter().map(|t| vec![t.index.to_string(), format!("\"{}\"", t.label), format!("{:.9e}", t.value)]).collect();
        write_csv(&cfg.output_dir.join("geomside.csv"), &["index", "label", "value"], &rows)?;
    }
    r.checks.push(Check::new("total is finite", "sum of sixteen terms", "finite", g.total, "none", g.total.is_finite()));
    r.data = serde_json::to_value(&g)?;
    Ok(r)
}

fn optimizer_checks(r: &mut Report) -> Result<serde_json::Value> {
    let (x, v) = optimize_amplifier_exponent(&final_bound_terms()).map_err(|e| anyhow!(e))?;
    let e = sup_norm_exponent(&v);
    r.checks.push(Check::new("optimal L exponent", "L = T^(1/15)", "1/15", x.to_string(), "exact", x == rational(1, 15)));
    r.checks.push(Check::new("optimal exponent", "T^(44/15)", "44/15", v.to_string(), "exact", v == rational(44, 15)));
    let target = (rational(3, 4) - rational(1, 60)) * rational(2, 1);
    r.checks.push(Check::new("sup-norm exponent", "2 (3/4 - 1/60)", target.to_string(), e.to_string(), "exact", e == target));
    Ok(json!({"x": x.to_string(), "exponent": v.to_string(), "sup_norm_exponent": e.to_string()}))
}

pub fn supnorm(cfg: &mut RunConfig, a: &SupnormArgs) -> Result<Report> {
    let mut r = Report::new("supnorm", &*cfg);
    let opt = optimizer_checks(&mut r)?;
    if a.optimize {
        r.data = json!({"optimizer": opt});
        return Ok(r);
    }
    let g = geometric(cfg, a.l, a.t, &mut r)?;
    r.config = serde_json::to_value(&*cfg)?;
    r.data = json!({"optimizer": opt, "geometric_side": g});
    Ok(r)
}

pub fn selftest(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new("selftest", cfg);
    for p in [2u64, 3] {
        let t = DivisorTriple::from_diagonal(1, 1, p)?;
        let n = coset_count_brute(t)?;
        r.checks.push(Check::new(&format!("cosets of diag(1,1,{p})"), "p^2+p+1", p * p + p + 1, n, "exact", n == p * p + p + 1));
    }
    let lin = verify_linearizations(2, 2)?;
    r.checks.push(Check::new("Hecke identities at (2,2)", "exact Hecke multiplication", true, lin.all_pass(), "exact", lin.all_pass()));
    let q = CountQuery::new(1, 1, [0.0, 0.0], BasePoint::Identity)?;
    let c = count_matrices(&q, &cfg.count)?.count;
    r.checks.push(Check::new("automorphs of the identity", "signed permutations of determinant 1", 24, c, "exact", c == 24));
    let c11 = c_function(&SpectralParameter::real(1.0, 1.0))?;
    r.checks.push(Check::close("c(1,1)", "normalization", 1.0, c11.re, 1e-12));
    let quick = sl3::spherical::QuadratureConfig { nodes: 16, tolerance: 1e-7, radius: 20.0 };
    let s = SpectralParameter::real(-1.0, -1.0);
    let v = spherical_direct_diag(&s, &DiagonalElement::from_alphas(1.5, 2.0), &quick)?.value;
    r.checks.push(Check::close("phi_(-1,-1)", "constant function", 1.0, v.re, 1e-8));
    let data = optimizer_checks(&mut r)?;
    r.data = json!({"optimizer": data});
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("i2").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i2").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(parse_complex("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert!(parse_complex("two").is_err());
        assert!(parse_parameter("i1").is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [10.0, 20.0, 40.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 5.0 * x.powi(3)).collect();
        assert!((log_slope(&xs, &ys) - 3.0).abs() < 1e-12);
    }
}
