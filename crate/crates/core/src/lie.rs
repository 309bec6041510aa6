//! Root data of type A2, the Weyl group, characters of the diagonal torus and the
//! Iwasawa / Cartan decompositions of `SL(3,R)`.

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Condition number above which a decomposition is refused.
pub const MAX_CONDITION: f64 = 1e12;
/// Margin used when testing membership in a hyperplane.
pub const GENERIC_TOL: f64 = 1e-9;

/// Traceless real diagonal matrix, stored as its three diagonal entries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieVector {
    pub h: [f64; 3],
}

impl LieVector {
    pub fn new(h1: f64, h2: f64, h3: f64) -> Self {
        Self { h: [h1, h2, h3] }
    }

    /// Projects an arbitrary triple onto the trace zero plane.
    pub fn traceless(h: [f64; 3]) -> Self {
        let m = (h[0] + h[1] + h[2]) / 3.0;
        Self { h: [h[0] - m, h[1] - m, h[2] - m] }
    }

    pub fn trace(&self) -> f64 {
        self.h.iter().sum()
    }

    pub fn exp(&self) -> DiagonalElement {
        DiagonalElement { a: self.h.map(f64::exp) }
    }

    pub fn norm(&self) -> f64 {
        killing_form(self, self).sqrt()
    }

    pub fn permuted(&self, w: WeylElement) -> Self {
        let p = w.perm();
        Self { h: [self.h[p[0]], self.h[p[1]], self.h[p[2]]] }
    }
}

/// `B(H, H') = Tr(H H')`.
pub fn killing_form(h: &LieVector, hp: &LieVector) -> f64 {
    h.h[0] * hp.h[0] + h.h[1] * hp.h[1] + h.h[2] * hp.h[2]
}

/// The fixed bases of `a` and `a*` used throughout.
#[derive(Clone, Copy, Debug, Default)]
pub struct RootSystemA2;

impl RootSystemA2 {
    pub const H12: LieVector = LieVector { h: [1.0, -1.0, 0.0] };
    pub const H23: LieVector = LieVector { h: [0.0, 1.0, -1.0] };

    /// Positive roots `alpha_1 = h1 - h2`, `alpha_2 = h2 - h3`, `alpha_3 = h1 - h3`.
    pub fn positive_root(i: usize, h: &LieVector) -> f64 {
        match i {
            1 => h.h[0] - h.h[1],
            2 => h.h[1] - h.h[2],
            3 => h.h[0] - h.h[2],
            _ => panic!("root index {i} out of range"),
        }
    }

    /// `lambda_1(H) = h1`, `lambda_2(H) = h1 + h2`.
    pub fn fundamental_weight(i: usize, h: &LieVector) -> f64 {
        match i {
            1 => h.h[0],
            2 => h.h[0] + h.h[1],
            _ => panic!("weight index {i} out of range"),
        }
    }

    /// B-dual of `lambda_i`.
    pub fn weight_vector(i: usize) -> LieVector {
        match i {
            1 => LieVector::new(2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0),
            2 => LieVector::new(1.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0),
            _ => panic!("weight index {i} out of range"),
        }
    }

    /// B-dual of the positive root `alpha_i`.
    pub fn root_vector(i: usize) -> LieVector {
        match i {
            1 => Self::H12,
            2 => Self::H23,
            3 => LieVector::new(1.0, 0.0, -1.0),
            _ => panic!("root index {i} out of range"),
        }
    }

    /// Half sum of positive roots, which is the parameter `s = (1, 1)`.
    pub fn rho() -> SpectralParameter {
        SpectralParameter::real(1.0, 1.0)
    }
}

/// Positive diagonal matrix of determinant one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalElement {
    pub a: [f64; 3],
}

impl DiagonalElement {
    pub fn identity() -> Self {
        Self { a: [1.0; 3] }
    }

    /// Rescales a positive triple to determinant one.
    pub fn new(a: [f64; 3]) -> Result<Self> {
        if a.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::Domain(format!("diagonal entries must be positive, got {a:?}")));
        }
        let c = (a[0] * a[1] * a[2]).cbrt();
        Ok(Self { a: a.map(|x| x / c) })
    }

    /// The element with `alpha_1(a) = alpha1`, `alpha_2(a) = alpha2`.
    pub fn from_alphas(alpha1: f64, alpha2: f64) -> Self {
        let l1 = alpha1.ln();
        let l2 = alpha2.ln();
        LieVector::new((2.0 * l1 + l2) / 3.0, (l2 - l1) / 3.0, -(l1 + 2.0 * l2) / 3.0).exp()
    }

    pub fn alphas(&self) -> (f64, f64) {
        (self.a[0] / self.a[1], self.a[1] / self.a[2])
    }

    pub fn alpha3(&self) -> f64 {
        self.a[0] / self.a[2]
    }

    pub fn p1(&self) -> f64 {
        self.a[0]
    }

    pub fn p2(&self) -> f64 {
        self.a[0] * self.a[1]
    }

    pub fn log(&self) -> LieVector {
        LieVector::traceless(self.a.map(f64::ln))
    }

    pub fn in_closed_chamber(&self) -> bool {
        self.a[0] >= self.a[1] && self.a[1] >= self.a[2]
    }

    /// Sorts the entries into the closed positive chamber.
    pub fn dominant(&self) -> Self {
        let mut a = self.a;
        a.sort_by(|x, y| y.total_cmp(x));
        Self { a }
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&self.a.into())
    }

    pub fn distance_to_identity(&self) -> f64 {
        self.log().norm()
    }
}

/// Parameter `s = (s1, s2)` of the character `p_s(a) = p1(a)^s1 p2(a)^s2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralParameter {
    pub s1: Complex64,
    pub s2: Complex64,
}

impl SpectralParameter {
    pub fn new(s1: Complex64, s2: Complex64) -> Self {
        Self { s1, s2 }
    }

    pub fn real(s1: f64, s2: f64) -> Self {
        Self::new(Complex64::new(s1, 0.0), Complex64::new(s2, 0.0))
    }

    /// `s = i t`.
    pub fn imaginary(t1: f64, t2: f64) -> Self {
        Self::new(Complex64::new(0.0, t1), Complex64::new(0.0, t2))
    }

    /// Diagonal entries of `H_{lambda_s}`.
    pub fn h_vector(&self) -> [Complex64; 3] {
        let (s1, s2) = (self.s1, self.s2);
        [(2.0 * s1 + s2) / 3.0, (s2 - s1) / 3.0, -(s1 + 2.0 * s2) / 3.0]
    }

    pub fn from_h_vector(h: [Complex64; 3]) -> Self {
        Self::new(h[0] - h[1], h[1] - h[2])
    }

    /// `lambda_s(H) = s1 h1 + s2 (h1 + h2)`.
    pub fn eval(&self, h: &LieVector) -> Complex64 {
        self.s1 * h.h[0] + self.s2 * (h.h[0] + h.h[1])
    }

    /// `sqrt(|lambda_R|^2 + |lambda_I|^2)` for the trace form.
    pub fn norm(&self) -> f64 {
        let (a, b) = (self.s1, self.s2);
        (2.0 / 3.0 * (a.norm_sqr() + (a * b.conj()).re + b.norm_sqr())).max(0.0).sqrt()
    }

    pub fn weyl(&self, w: WeylElement) -> Self {
        weyl_act(w, *self)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.s1 + o.s1, self.s2 + o.s2)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.s1 * c, self.s2 * c)
    }

    /// Values of the three positive coroots: `s1`, `s2`, `s1 + s2`.
    pub fn root_values(&self) -> [Complex64; 3] {
        [self.s1, self.s2, self.s1 + self.s2]
    }
}

/// Element of the Weyl group `S_3`, acting on `a` by `(w.H)_i = h_{sigma(i)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeylElement {
    Identity,
    T12,
    T13,
    T23,
    C123,
    C132,
}

impl WeylElement {
    pub const ALL: [WeylElement; 6] = [
        WeylElement::Identity,
        WeylElement::T12,
        WeylElement::T13,
        WeylElement::T23,
        WeylElement::C123,
        WeylElement::C132,
    ];

    /// Zero based `sigma`, so that `(w.H)_i = H_{sigma(i)}`.
    pub fn perm(self) -> [usize; 3] {
        match self {
            WeylElement::Identity => [0, 1, 2],
            WeylElement::T12 => [1, 0, 2],
            WeylElement::T13 => [2, 1, 0],
            WeylElement::T23 => [0, 2, 1],
            WeylElement::C123 => [1, 2, 0],
            WeylElement::C132 => [2, 0, 1],
        }
    }

    pub fn from_perm(p: [usize; 3]) -> Self {
        *Self::ALL.iter().find(|w| w.perm() == p).expect("not a permutation of 0..3")
    }

    /// `(self * other).s = self.(other.s)`.
    pub fn compose(self, other: Self) -> Self {
        let (a, b) = (self.perm(), other.perm());
        Self::from_perm([b[a[0]], b[a[1]], b[a[2]]])
    }

    pub fn inverse(self) -> Self {
        let p = self.perm();
        let mut q = [0; 3];
        for i in 0..3 {
            q[p[i]] = i;
        }
        Self::from_perm(q)
    }

    pub fn sign(self) -> i32 {
        match self {
            WeylElement::Identity | WeylElement::C123 | WeylElement::C132 => 1,
            _ => -1,
        }
    }

    /// Integer matrix `M` with `(w.s)^T = M s^T` on `(s1, s2)`.
    pub fn matrix(self) -> [[i32; 2]; 2] {
        match self {
            WeylElement::Identity => [[1, 0], [0, 1]],
            WeylElement::T12 => [[-1, 0], [1, 1]],
            WeylElement::T13 => [[0, -1], [-1, 0]],
            WeylElement::T23 => [[1, 1], [0, -1]],
            WeylElement::C123 => [[0, 1], [-1, -1]],
            WeylElement::C132 => [[-1, -1], [1, 0]],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WeylElement::Identity => "e",
            WeylElement::T12 => "(1,2)",
            WeylElement::T13 => "(1,3)",
            WeylElement::T23 => "(2,3)",
            WeylElement::C123 => "(1,2,3)",
            WeylElement::C132 => "(1,3,2)",
        }
    }
}

pub fn weyl_act(w: WeylElement, s: SpectralParameter) -> SpectralParameter {
    let m = w.matrix();
    SpectralParameter::new(
        s.s1 * m[0][0] as f64 + s.s2 * m[0][1] as f64,
        s.s1 * m[1][0] as f64 + s.s2 * m[1][1] as f64,
    )
}

/// `p_s(a) = p1(a)^{s1} p2(a)^{s2}`.
pub fn character_eval(s: &SpectralParameter, a: &DiagonalElement) -> Complex64 {
    (s.s1 * a.p1().ln() + s.s2 * a.p2().ln()).exp()
}

/// Modular function `delta = p_{(1,1)}^2`.
pub fn modulus(a: &DiagonalElement) -> f64 {
    (a.p1() * a.p2()).powi(2)
}

/// Real 3x3 matrix of determinant one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    pub m: Matrix3<f64>,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self { m: Matrix3::identity() }
    }

    /// Rescales a matrix of positive determinant to determinant one.
    pub fn normalized(m: Matrix3<f64>) -> Result<Self> {
        let d = m.determinant();
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Domain(format!("determinant {d} is not positive")));
        }
        Ok(Self { m: m / d.cbrt() })
    }

    pub fn from_diagonal(a: &DiagonalElement) -> Self {
        Self { m: a.matrix() }
    }

    pub fn inverse(&self) -> Self {
        Self { m: self.m.try_inverse().expect("determinant one matrix is invertible") }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { m: self.m * o.m }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Iwasawa {
    pub n: Matrix3<f64>,
    pub a: DiagonalElement,
    pub k: Matrix3<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct Cartan {
    pub k1: Matrix3<f64>,
    pub b: DiagonalElement,
    pub k2: Matrix3<f64>,
}

fn condition_number(m: &Matrix3<f64>) -> f64 {
    let sv = m.singular_values();
    let (mx, mn) = sv.iter().fold((0.0f64, f64::INFINITY), |(a, b), &x| (a.max(x), b.min(x)));
    mx / mn
}

/// `g = n a k` with `n` upper unipotent, `a` positive diagonal and `k` in `SO(3)`.
pub fn iwasawa_decompose(g: &GroupElement) -> Result<Iwasawa> {
    let cond = condition_number(&g.m);
    if !(cond < MAX_CONDITION) {
        return Err(Error::DecompositionUnstable(cond));
    }
    let j = Matrix3::new(0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0);
    // (J g)^T = Q R  gives  g = (J R^T J)(J Q^T) with J R^T J upper triangular.
    let qr = (j * g.m).transpose().qr();
    let mut u = j * qr.r().transpose() * j;
    let mut k = j * qr.q().transpose();
    for i in 0..3 {
        if u[(i, i)] < 0.0 {
            for c in 0..3 {
                u[(c, i)] = -u[(c, i)];
                k[(i, c)] = -k[(i, c)];
            }
        }
    }
    let d = [u[(0, 0)], u[(1, 1)], u[(2, 2)]];
    let mut n = u;
    for c in 0..3 {
        for r in 0..3 {
            n[(r, c)] /= d[c];
        }
    }
    Ok(Iwasawa { n, a: DiagonalElement { a: d }, k })
}

/// `g = k1 b k2` with `k1, k2` in `SO(3)` and `b1 >= b2 >= b3 > 0`.
pub fn cartan_decompose(g: &GroupElement) -> Cartan {
    let svd = g.m.svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let sv = svd.singular_values;
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&x, &y| sv[y].total_cmp(&sv[x]));
    let mut k1 = Matrix3::zeros();
    let mut k2 = Matrix3::zeros();
    let mut b = [0.0; 3];
    for (new, &old) in idx.iter().enumerate() {
        b[new] = sv[old];
        k1.set_column(new, &u.column(old));
        k2.set_row(new, &vt.row(old));
    }
    if k1.determinant() < 0.0 {
        for r in 0..3 {
            k1[(r, 2)] = -k1[(r, 2)];
            k2[(2, r)] = -k2[(2, r)];
        }
    }
    Cartan { k1, b: DiagonalElement { a: b }, k2 }
}

/// `d(g, I)` for the Riemannian metric induced by the trace form.
pub fn distance_to_identity(g: &GroupElement) -> f64 {
    cartan_decompose(g).b.distance_to_identity()
}

/// `d(a, I)^2` written through the two multiplicative roots.
pub fn distance_from_alphas(alpha1: f64, alpha2: f64) -> f64 {
    let (l1, l2) = (alpha1.ln(), alpha2.ln());
    (2.0 / 3.0 * (l1 * l1 + l1 * l2 + l2 * l2)).sqrt()
}

/// Linear equation `c1 s1 + c2 s2 = rhs` defining a complex hyperplane.
#[derive(Clone, Copy, Debug)]
struct Hyperplane {
    c1: f64,
    c2: f64,
    rhs: f64,
}

impl Hyperplane {
    fn residual(&self, s: &SpectralParameter) -> f64 {
        (s.s1 * self.c1 + s.s2 * self.c2 - self.rhs).norm()
    }

    fn contains(&self, s: &SpectralParameter) -> bool {
        if self.c1 == 0.0 && self.c2 == 0.0 {
            return self.rhs.abs() <= GENERIC_TOL;
        }
        self.residual(s) <= GENERIC_TOL * (1.0 + self.rhs.abs())
    }
}

/// The pair of equations defining `tau_(m1, m2)(w1, w2)`, with `H_1 = H12` and
/// `H_2 = H23`.
fn tau_equations(m1: i64, m2: i64, w1: WeylElement, w2: WeylElement) -> [Hyperplane; 2] {
    let coeff = |lam: usize, basis: &LieVector| {
        let v = RootSystemA2::weight_vector(lam);
        killing_form(&v.permuted(w1), basis) - killing_form(&v.permuted(w2), basis)
    };
    let h1 = RootSystemA2::H12;
    let h2 = RootSystemA2::H23;
    [
        Hyperplane { c1: coeff(1, &h1), c2: coeff(2, &h1), rhs: (2 * m1 - m2) as f64 },
        Hyperplane { c1: coeff(1, &h2), c2: coeff(2, &h2), rhs: (2 * m2 - m1) as f64 },
    ]
}

/// Names the first excluded set containing `s`, if any.
pub fn genericity_obstruction(s: &SpectralParameter, depth: u32) -> Option<String> {
    let gammas = [
        ("gamma_1", Hyperplane { c1: 1.0, c2: 0.0, rhs: 0.0 }),
        ("gamma_2", Hyperplane { c1: 0.0, c2: 1.0, rhs: 0.0 }),
        ("gamma_3", Hyperplane { c1: 1.0, c2: 1.0, rhs: 0.0 }),
    ];
    for (name, hp) in gammas {
        if hp.contains(s) {
            return Some(name.to_string());
        }
    }
    let depth = depth as i64;
    for m1 in 1..=depth {
        for m2 in 1..=depth {
            let sigma = Hyperplane {
                c1: m1 as f64,
                c2: m2 as f64,
                rhs: (m1 * m1 + m2 * m2 - 2 * m1 * m2) as f64,
            };
            for w in WeylElement::ALL {
                if sigma.contains(&s.weyl(w.inverse())) {
                    return Some(format!("{}.sigma_({m1},{m2})", w.label()));
                }
            }
            for w1 in WeylElement::ALL {
                for w2 in WeylElement::ALL {
                    let [e1, e2] = tau_equations(m1, m2, w1, w2);
                    if e1.contains(s) && e2.contains(s) {
                        return Some(format!("tau_({m1},{m2})({},{})", w1.label(), w2.label()));
                    }
                }
            }
        }
    }
    None
}

pub fn is_generic(s: &SpectralParameter, depth: u32) -> bool {
    genericity_obstruction(s, depth).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn weyl_formulas_match_listed_action() {
        let s = SpectralParameter::new(c(0.3, 1.1), c(-0.7, 2.0));
        let (s1, s2) = (s.s1, s.s2);
        let expect = [
            (WeylElement::T12, (-s1, s1 + s2)),
            (WeylElement::T13, (-s2, -s1)),
            (WeylElement::T23, (s1 + s2, -s2)),
            (WeylElement::C123, (s2, -s1 - s2)),
            (WeylElement::C132, (-s1 - s2, s1)),
            (WeylElement::Identity, (s1, s2)),
        ];
        for (w, (e1, e2)) in expect {
            let t = s.weyl(w);
            assert!((t.s1 - e1).norm() < 1e-15 && (t.s2 - e2).norm() < 1e-15, "{w:?}");
        }
    }

    #[test]
    fn weyl_action_permutes_h_vector() {
        let s = SpectralParameter::new(c(0.4, -1.3), c(2.5, 0.2));
        for w in WeylElement::ALL {
            let h = s.h_vector();
            let p = w.perm();
            let expect = [h[p[0]], h[p[1]], h[p[2]]];
            let got = s.weyl(w).h_vector();
            for i in 0..3 {
                assert!((got[i] - expect[i]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn composition_is_a_homomorphism() {
        let s = SpectralParameter::new(c(0.1, 0.7), c(-1.9, 0.4));
        for a in WeylElement::ALL {
            for b in WeylElement::ALL {
                let lhs = s.weyl(a.compose(b));
                let rhs = s.weyl(b).weyl(a);
                assert!((lhs.s1 - rhs.s1).norm() < 1e-14 && (lhs.s2 - rhs.s2).norm() < 1e-14);
            }
            assert_eq!(a.compose(a.inverse()), WeylElement::Identity);
        }
        // (1,2)(2,3) is a 3-cycle
        let w = WeylElement::T12.compose(WeylElement::T23);
        assert!(matches!(w, WeylElement::C123 | WeylElement::C132));
    }

    #[test]
    fn killing_form_examples() {
        assert_eq!(killing_form(&RootSystemA2::H12, &RootSystemA2::H12), 2.0);
        assert_eq!(killing_form(&RootSystemA2::H12, &RootSystemA2::H23), -1.0);
    }

    #[test]
    fn weights_are_dual_to_simple_roots() {
        for i in 1..=2 {
            for j in 1..=2 {
                let b = killing_form(&RootSystemA2::weight_vector(i), &RootSystemA2::root_vector(j));
                assert_abs_diff_eq!(b, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
        let h = LieVector::new(0.3, 0.5, -0.8);
        assert_abs_diff_eq!(
            RootSystemA2::positive_root(3, &h),
            RootSystemA2::positive_root(1, &h) + RootSystemA2::positive_root(2, &h),
            epsilon = 1e-15
        );
    }

    #[test]
    fn character_examples() {
        let a = DiagonalElement::new([3.0, 1.0, 1.0 / 3.0]).unwrap();
        let p = character_eval(&SpectralParameter::real(2.0, 0.0), &a);
        assert_abs_diff_eq!(p.re, 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(character_eval(&SpectralParameter::imaginary(3.0, 4.0), &DiagonalElement::identity()).re, 1.0);
        let b = DiagonalElement::from_alphas(2.5, 1.7);
        let r = character_eval(&RootSystemA2::rho(), &b).re;
        assert_abs_diff_eq!(r * r, modulus(&b), epsilon = 1e-12);
    }

    #[test]
    fn iwasawa_of_diagonal_is_trivial() {
        let g = GroupElement::from_diagonal(&DiagonalElement::new([2.0, 1.0, 0.5]).unwrap());
        let d = iwasawa_decompose(&g).unwrap();
        assert!((d.n - Matrix3::identity()).norm() < 1e-14);
        assert!((d.k - Matrix3::identity()).norm() < 1e-14);
        assert_abs_diff_eq!(d.a.a[0], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn cartan_sorts_into_chamber() {
        let g = GroupElement::from_diagonal(&DiagonalElement::new([0.5, 1.0, 2.0]).unwrap());
        let c = cartan_decompose(&g);
        assert_abs_diff_eq!(c.b.a[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.b.a[2], 0.5, epsilon = 1e-14);
        assert!((c.k1 * c.b.matrix() * c.k2 - g.m).norm() < 1e-14);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance_to_identity(&GroupElement::identity()), 0.0);
        let e = std::f64::consts::E;
        let g = GroupElement::from_diagonal(&DiagonalElement::new([e, 1.0, 1.0 / e]).unwrap());
        assert_abs_diff_eq!(distance_to_identity(&g), 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn genericity_examples() {
        assert!(!is_generic(&SpectralParameter::real(0.0, 5.0), 10));
        assert!(!is_generic(&SpectralParameter::real(1.0, -1.0), 10));
        assert!(is_generic(&SpectralParameter::imaginary(2f64.sqrt(), 3f64.sqrt()), 10));
        // sigma_(1,1): s1 + s2 = 0 coincides with gamma_3, sigma_(2,1): 2 s1 + s2 = 1
        assert!(!is_generic(&SpectralParameter::real(0.25, 0.5), 4));
    }

    #[test]
    fn tau_equations_are_empty_on_the_diagonal() {
        for w in WeylElement::ALL {
            let [e1, e2] = tau_equations(1, 2, w, w);
            assert_eq!((e1.c1, e1.c2, e2.c1, e2.c2), (0.0, 0.0, 0.0, 0.0));
        }
    }
}
