//! Exact Hecke algebra of `GL_3(Z)` double cosets.
//!
//! Double cosets are keyed by determinantal divisors. Operators `T_g` only see `g`
//! up to scalars (the `det^{-1/3}` normalization), so products are reduced to
//! primitive classes with `d_1 = 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest determinant accepted by the coset enumerator.
pub const ENUMERATION_BUDGET: u64 = 20_000;

/// 3x3 integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix3 {
    pub entries: [[BigInt; 3]; 3],
    det: BigInt,
}

fn det3<T>(m: &[[T; 3]; 3]) -> T
where
    T: Clone + std::ops::Mul<Output = T> + std::ops::Sub<Output = T> + std::ops::Add<Output = T>,
{
    let c = |i: usize, j: usize| m[i][j].clone();
    c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1)) - c(0, 1) * (c(1, 0) * c(2, 2) - c(1, 2) * c(2, 0))
        + c(0, 2) * (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0))
}

impl IntegerMatrix3 {
    pub fn new(entries: [[BigInt; 3]; 3]) -> Self {
        let det = det3(&entries);
        Self { entries, det }
    }

    pub fn from_i64(m: [[i64; 3]; 3]) -> Self {
        Self::new(m.map(|r| r.map(BigInt::from)))
    }

    pub fn diag(a: i64, b: i64, c: i64) -> Self {
        Self::from_i64([[a, 0, 0], [0, b, 0], [0, 0, c]])
    }

    pub fn identity() -> Self {
        Self::diag(1, 1, 1)
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r: [[BigInt; 3]; 3] = Default::default();
        for (i, row) in r.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| &self.entries[i][k] * &o.entries[k][j]).sum();
            }
        }
        Self::new(r)
    }

    pub fn to_i64(&self) -> Option<[[i64; 3]; 3]> {
        let mut r = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = self.entries[i][j].to_i64()?;
            }
        }
        Some(r)
    }
}

impl fmt::Display for IntegerMatrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(f, "[[{},{},{}],[{},{},{}],[{},{},{}]]", e[0][0], e[0][1], e[0][2], e[1][0], e[1][1], e[1][2], e[2][0], e[2][1], e[2][2])
    }
}

/// Determinantal divisors `(d_1, d_2, d_3)` of a nonsingular integer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorTriple {
    pub d: [u64; 3],
}

impl DivisorTriple {
    /// Checks `d_1 | d_2`, `d_2^2 | d_1 d_3` and `d_1^3 | d_3`.
    pub fn new(d1: u64, d2: u64, d3: u64) -> Result<Self> {
        let ok = d1 > 0
            && d2 > 0
            && d3 > 0
            && d2 % d1 == 0
            && (d1 as u128 * d3 as u128) % (d2 as u128 * d2 as u128) == 0
            && d3 as u128 % (d1 as u128).pow(3) == 0;
        if !ok {
            return Err(Error::Domain(format!("({d1}, {d2}, {d3}) is not a divisor triple")));
        }
        Ok(Self { d: [d1, d2, d3] })
    }

    /// Class of `diag(e1, e2, e3)` with `e1 | e2 | e3`.
    pub fn from_diagonal(e1: u64, e2: u64, e3: u64) -> Result<Self> {
        if e1 == 0 || e2 % e1 != 0 || e3 % e2 != 0 {
            return Err(Error::Domain(format!("diag({e1}, {e2}, {e3}) is not in Smith form")));
        }
        Ok(Self { d: [e1, e1 * e2, e1 * e2 * e3] })
    }

    pub fn identity() -> Self {
        Self { d: [1, 1, 1] }
    }

    /// Elementary divisors `e_1 | e_2 | e_3`.
    pub fn elementary(&self) -> [u64; 3] {
        [self.d[0], self.d[1] / self.d[0], self.d[2] / self.d[1]]
    }

    pub fn det(&self) -> u64 {
        self.d[2]
    }

    /// Class of `g / d_1`, equal to `g` as a Hecke operator.
    pub fn primitive(&self) -> Self {
        let c = self.d[0];
        Self { d: [1, self.d[1] / (c * c), self.d[2] / (c * c * c)] }
    }

    /// Class of `e_3 g^{-1}`, which gives the operator `T_{g^{-1}}`.
    pub fn dual(&self) -> Self {
        let [e1, e2, e3] = self.elementary();
        Self::from_diagonal(1, e3 / e2, e3 / e1).expect("dual of a Smith form")
    }

    /// Restriction to the prime `p`.
    fn local(&self, p: u64) -> Self {
        let e = self.elementary().map(|x| p.pow(valuation(x, p)));
        Self::from_diagonal(e[0], e[1], e[2]).expect("local part of a Smith form")
    }
}

impl fmt::Display for DivisorTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.elementary();
        write!(f, "diag({a},{b},{c})")
    }
}

fn valuation(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Prime factors of `n` by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

fn minors2<T>(m: &[[T; 3]; 3]) -> Vec<T>
where
    T: Clone + std::ops::Mul<Output = T> + std::ops::Sub<Output = T>,
{
    let mut out = Vec::with_capacity(9);
    for (r0, r1) in [(0, 1), (0, 2), (1, 2)] {
        for (c0, c1) in [(0, 1), (0, 2), (1, 2)] {
            out.push(m[r0][c0].clone() * m[r1][c1].clone() - m[r0][c1].clone() * m[r1][c0].clone());
        }
    }
    out
}

pub fn determinantal_divisors(m: &IntegerMatrix3) -> Result<DivisorTriple> {
    if m.det.is_zero() {
        return Err(Error::Domain("singular matrix has no divisor triple".into()));
    }
    let g1 = m.entries.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
    let g2 = minors2(&m.entries).iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let g3 = m.det.abs();
    let conv = |x: BigInt| x.to_u64().ok_or_else(|| Error::Budget(format!("divisor {x} exceeds 64 bits")));
    DivisorTriple::new(conv(g1)?, conv(g2)?, conv(g3)?)
}

/// Fast path for small entries; `None` when singular.
pub(crate) fn divisors_i64(m: &[[i64; 3]; 3]) -> Option<DivisorTriple> {
    let d3 = det3(m).unsigned_abs();
    if d3 == 0 {
        return None;
    }
    let d1 = m.iter().flatten().fold(0i64, |g, &x| g.gcd(&x)).unsigned_abs();
    let d2 = minors2(m).iter().fold(0i64, |g, x| g.gcd(x)).unsigned_abs();
    Some(DivisorTriple { d: [d1, d2, d3] })
}

pub fn same_double_coset(a: &IntegerMatrix3, b: &IntegerMatrix3) -> Result<bool> {
    Ok(determinantal_divisors(a)? == determinantal_divisors(b)?)
}

/// Row Hermite normal form: upper triangular, positive diagonal, entries above a
/// pivot reduced into `[0, pivot)`. Canonical for the left action of `GL_3(Z)`.
pub fn hermite_normal_form(m: &IntegerMatrix3) -> Result<IntegerMatrix3> {
    if m.det.is_zero() {
        return Err(Error::Domain("singular matrix".into()));
    }
    let mut a = m.entries.clone();
    for col in 0..3 {
        // gcd-eliminate the column below the pivot row
        for row in col + 1..3 {
            if a[row][col].is_zero() {
                continue;
            }
            let eg = a[col][col].extended_gcd(&a[row][col]);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let u = &a[col][col] / &g;
            let v = &a[row][col] / &g;
            for j in 0..3 {
                let top = &x * &a[col][j] + &y * &a[row][j];
                let bot = &u * &a[row][j] - &v * &a[col][j];
                a[col][j] = top;
                a[row][j] = bot;
            }
        }
        if a[col][col].is_negative() {
            for j in 0..3 {
                a[col][j] = -a[col][j].clone();
            }
        }
    }
    for col in 1..3 {
        let p = a[col][col].clone();
        for row in 0..col {
            let q = a[row][col].div_floor(&p);
            for j in 0..3 {
                let t = &q * &a[col][j];
                a[row][j] -= t;
            }
        }
    }
    Ok(IntegerMatrix3::new(a))
}

/// Representatives of `GL_3(Z) \ GL_3(Z) g GL_3(Z)` in row Hermite normal form.
#[derive(Clone, Debug)]
pub struct CosetList {
    pub triple: DivisorTriple,
    pub reps: Vec<IntegerMatrix3>,
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Visits every upper-triangular HNF of determinant `t.det()` whose divisor triple is `t`.
fn for_each_hnf<F: FnMut([[i64; 3]; 3])>(t: DivisorTriple, mut visit: F) {
    let n = t.det();
    let d1 = t.d[0];
    for a in divisors(n) {
        for d in divisors(n / a) {
            let f = n / (a * d);
            if a % d1 != 0 || d % d1 != 0 || f % d1 != 0 {
                continue;
            }
            let (a, d, f) = (a as i64, d as i64, f as i64);
            for b in 0..d {
                for c in 0..f {
                    for e in 0..f {
                        let m = [[a, b, c], [0, d, e], [0, 0, f]];
                        if divisors_i64(&m) == Some(t) {
                            visit(m);
                        }
                    }
                }
            }
        }
    }
}

fn check_budget(t: DivisorTriple) -> Result<()> {
    if t.det() > ENUMERATION_BUDGET {
        return Err(Error::Budget(format!("determinant {} beyond enumeration budget {ENUMERATION_BUDGET}", t.det())));
    }
    Ok(())
}

pub fn enumerate_left_cosets(t: DivisorTriple) -> Result<CosetList> {
    check_budget(t)?;
    let mut reps = Vec::new();
    for_each_hnf(t, |m| reps.push(IntegerMatrix3::from_i64(m)));
    Ok(CosetList { triple: t, reps })
}

/// Number of left cosets in the class, by brute-force enumeration.
pub fn coset_count_brute(t: DivisorTriple) -> Result<u64> {
    check_budget(t)?;
    let mut n = 0;
    for_each_hnf(t, |_| n += 1);
    Ok(n)
}

/// Number of left cosets in the class. The count is multiplicative over the
/// primes dividing the determinant, so only prime-power classes are enumerated.
pub fn coset_count(t: DivisorTriple) -> Result<u64> {
    let mut total = 1u64;
    for p in prime_factors(t.det()) {
        total *= coset_count_brute(t.local(p))?;
    }
    Ok(total)
}

/// Finite rational combination of double cosets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElement {
    terms: BTreeMap<DivisorTriple, BigRational>,
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(t: DivisorTriple) -> Self {
        Self::term(t, BigRational::one())
    }

    pub fn identity() -> Self {
        Self::basis(DivisorTriple::identity())
    }

    pub fn term(t: DivisorTriple, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(t, c);
        e
    }

    /// Adds `c [t]`; `t` is reduced to its primitive class.
    pub fn add_term(&mut self, t: DivisorTriple, c: BigRational) {
        let key = t.primitive();
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (t, c) in &o.terms {
            r.add_term(*t, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut r = Self::zero();
        for (t, v) in &self.terms {
            r.add_term(*t, v * c);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, t: DivisorTriple) -> BigRational {
        self.terms.get(&t.primitive()).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DivisorTriple, &BigRational)> {
        self.terms.iter()
    }

    /// `diag(...)` class names mapped to fraction strings.
    pub fn coefficient_map(&self) -> BTreeMap<String, String> {
        self.terms.iter().map(|(t, c)| (t.to_string(), c.to_string())).collect()
    }

    /// Product in the Hecke algebra (composition of operators).
    pub fn compose(&self, o: &Self, alg: &HeckeAlgebra) -> Result<Self> {
        let mut r = Self::zero();
        for (t1, c1) in &self.terms {
            for (t2, c2) in &o.terms {
                let prod = alg.multiply(*t1, *t2)?;
                r = r.add(&prod.scale(&(c1 * c2)));
            }
        }
        Ok(r)
    }
}

impl Serialize for HeckeElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map = self.coefficient_map();
        let mut m = s.serialize_map(Some(map.len()))?;
        for (k, v) in &map {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("({c}) T_{t}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Caches coset lists and structure constants.
#[derive(Default)]
pub struct HeckeAlgebra {
    cosets: Mutex<HashMap<DivisorTriple, Vec<[[i64; 3]; 3]>>>,
    products: Mutex<HashMap<(DivisorTriple, DivisorTriple), HeckeElement>>,
}

impl HeckeAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    fn reps(&self, t: DivisorTriple) -> Result<Vec<[[i64; 3]; 3]>> {
        if let Some(r) = self.cosets.lock().expect("coset cache").get(&t) {
            return Ok(r.clone());
        }
        check_budget(t)?;
        let mut reps = Vec::new();
        for_each_hnf(t, |m| reps.push(m));
        self.cosets.lock().expect("coset cache").insert(t, reps.clone());
        Ok(reps)
    }

    /// `[t1][t2] = sum_K c_K [K]` with `c_K` the number of pairs `(i, j)` with
    /// `a_i b_j` in a fixed left coset of `K`.
    pub fn multiply(&self, t1: DivisorTriple, t2: DivisorTriple) -> Result<HeckeElement> {
        let key = (t1.primitive(), t2.primitive());
        if let Some(r) = self.products.lock().expect("product cache").get(&key) {
            return Ok(r.clone());
        }
        let r = multiply_reps(&self.reps(key.0)?, &self.reps(key.1)?)?;
        self.products.lock().expect("product cache").insert(key, r.clone());
        Ok(r)
    }
}

fn mul_i64(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut r = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    r
}

/// Structure constants from explicit left-coset representatives of both factors.
pub fn multiply_reps(left: &[[[i64; 3]; 3]], right: &[[[i64; 3]; 3]]) -> Result<HeckeElement> {
    let counts: HashMap<DivisorTriple, u64> = left
        .par_iter()
        .map(|a| {
            let mut local = HashMap::new();
            for b in right {
                let t = divisors_i64(&mul_i64(a, b)).expect("product of nonsingular matrices");
                *local.entry(t).or_insert(0u64) += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut x, y| {
            for (k, v) in y {
                *x.entry(k).or_insert(0) += v;
            }
            x
        });
    let mut out = HeckeElement::zero();
    let mut keys: Vec<_> = counts.keys().copied().collect();
    keys.sort();
    for k in keys {
        let n = counts[&k];
        let deg = coset_count(k)?;
        if n % deg != 0 {
            return Err(Error::Convergence(format!("{n} products in {k} not a multiple of its degree {deg}")));
        }
        out.add_term(k, BigRational::from_integer(BigInt::from(n / deg)));
    }
    Ok(out)
}

pub fn multiply_double_cosets(t1: DivisorTriple, t2: DivisorTriple) -> Result<HeckeElement> {
    HeckeAlgebra::new().multiply(t1, t2)
}

/// Divisor chains `y1 | y2 | y3` with `y1 y2 y3 = n`.
pub fn divisor_chains(n: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for y1 in divisors(n) {
        for y2 in divisors(n / y1) {
            let y3 = n / (y1 * y2);
            if y2 % y1 == 0 && y3 % y2 == 0 {
                out.push([y1, y2, y3]);
            }
        }
    }
    out
}

/// `T_n = (1/n) sum_{y1|y2|y3, y1 y2 y3 = n} T_{diag(y)}`.
pub fn normalized_hecke(n: u64) -> Result<HeckeElement> {
    hecke_sum(n, false)
}

/// `T_n^* = (1/n) sum T_{diag(y)^{-1}}`.
pub fn normalized_hecke_dual(n: u64) -> Result<HeckeElement> {
    hecke_sum(n, true)
}

fn hecke_sum(n: u64, dual: bool) -> Result<HeckeElement> {
    if n == 0 {
        return Err(Error::Domain("T_0 is undefined".into()));
    }
    let w = BigRational::new(BigInt::one(), BigInt::from(n));
    let mut e = HeckeElement::zero();
    for [y1, y2, y3] in divisor_chains(n) {
        let t = DivisorTriple::from_diagonal(y1, y2, y3)?;
        e.add_term(if dual { t.dual() } else { t }, w.clone());
    }
    Ok(e)
}

/// One identity of the linearization check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: HeckeElement,
    pub rhs: HeckeElement,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearizationReport {
    pub p: u64,
    pub q: u64,
    pub identities: Vec<IdentityCheck>,
}

impl LinearizationReport {
    pub fn all_pass(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }
}

fn d(e1: u64, e2: u64, e3: u64) -> DivisorTriple {
    DivisorTriple::from_diagonal(e1, e2, e3).expect("Smith form")
}

/// Checks the six composition identities for `T_p`, `T_q` and their duals.
pub fn verify_linearizations(p: u64, q: u64) -> Result<LinearizationReport> {
    verify_linearizations_with(p, q, &HeckeAlgebra::new())
}

pub fn verify_linearizations_with(p: u64, q: u64, alg: &HeckeAlgebra) -> Result<LinearizationReport> {
    for x in [p, q] {
        if !is_prime(x) {
            return Err(Error::Domain(format!("{x} is not prime")));
        }
    }
    let (pi, qi) = (p as i64, q as i64);
    let same = p == q;
    let r = rational;
    let id = HeckeElement::identity();
    let tp = normalized_hecke(p)?;
    let tq = normalized_hecke(q)?;
    let tps = normalized_hecke_dual(p)?;
    let tqs = normalized_hecke_dual(q)?;
    let mq = tq.compose(&tqs, alg)?.sub(&id);
    let mp = tp.compose(&tps, alg)?.sub(&id);

    let term = |t: DivisorTriple, c: BigRational| HeckeElement::term(t, c);
    let delta = |e: HeckeElement| if same { e } else { HeckeElement::zero() };

    let mut out = Vec::new();
    let mut push = |name: &str, lhs: HeckeElement, rhs: HeckeElement| {
        let pass = lhs == rhs;
        out.push(IdentityCheck { name: name.into(), lhs, rhs, pass });
    };

    push(
        "T_p T_q",
        tp.compose(&tq, alg)?,
        term(d(1, 1, p * q), r(1, pi * qi)).add(&delta(term(d(1, p, p), r(pi + 1, pi * pi)))),
    );
    push(
        "T_p* T_q",
        tps.compose(&tq, alg)?,
        term(d(1, p, p * q), r(1, pi * qi)).add(&delta(id.scale(&r(pi * pi + pi + 1, pi * pi)))),
    );
    push(
        "T_p* T_q*",
        tps.compose(&tqs, alg)?,
        term(d(1, p * q, p * q), r(1, pi * qi)).add(&delta(term(d(1, 1, p), r(pi + 1, pi * pi)))),
    );
    push(
        "T_p (T_q T_q* - id)",
        tp.compose(&mq, alg)?,
        term(d(1, 1, p), r(qi + 1, pi * qi * qi))
            .add(&term(d(1, q, p * q * q), r(1, pi * qi * qi)))
            .add(&delta(term(d(1, p * p, p * p), r(pi + 1, pi.pow(3))).add(&term(d(1, 1, p), r(pi + 1, pi * pi))))),
    );
    push(
        "T_p* (T_q T_q* - id)",
        tps.compose(&mq, alg)?,
        term(d(1, p, p), r(qi + 1, pi * qi * qi))
            .add(&term(d(1, p * q, p * q * q), r(1, pi * qi * qi)))
            .add(&delta(term(d(1, 1, p * p), r(pi + 1, pi.pow(3))).add(&term(d(1, p, p), r(pi + 1, pi * pi))))),
    );
    let pq2 = pi * pi * qi * qi;
    let p4 = pi.pow(4);
    push(
        "(T_p T_p* - id)(T_q T_q* - id)",
        mp.compose(&mq, alg)?,
        term(d(1, p * q, p * p * q * q), r(1, pq2))
            .add(&term(d(1, p, p * p), r(qi + 1, pq2)))
            .add(&term(d(1, q, q * q), r(pi + 1, pq2)))
            .add(&id.scale(&r((pi + 1) * (qi + 1), pq2)))
            .add(&delta(
                term(d(1, p.pow(3), p.pow(3)), r(pi + 1, p4))
                    .add(&term(d(1, 1, p.pow(3)), r(pi + 1, p4)))
                    .add(&term(d(1, p, p * p), r((pi + 1) * (2 * pi - 1), p4)))
                    .add(&id.scale(&r(pi * (pi + 1) * (1 + pi + pi * pi), p4))),
            )),
    );
    Ok(LinearizationReport { p, q, identities: out })
}

/// Amplifier over the primes in `[L, 2L]`.
#[derive(Clone, Debug, Serialize)]
pub struct Amplifier {
    pub l: u64,
    pub primes: Vec<u64>,
    /// Lower bound `2 #{L <= p <= 2L}` for `A_{j_0}(alpha)`.
    pub a_count: u64,
}

impl Amplifier {
    /// `T_{p,1} = T_p`.
    pub fn t_p1(p: u64) -> Result<HeckeElement> {
        normalized_hecke(p)
    }

    /// `T_{1,p} = T_p^*`.
    pub fn t_1p(p: u64) -> Result<HeckeElement> {
        normalized_hecke_dual(p)
    }

    /// `T_{p,p} = T_p T_p^* - id`.
    pub fn t_pp(p: u64, alg: &HeckeAlgebra) -> Result<HeckeElement> {
        Ok(Self::t_p1(p)?.compose(&Self::t_1p(p)?, alg)?.sub(&HeckeElement::identity()))
    }

    /// `T_{p,1} T_{1,p} - id - T_{p,p}`, which must vanish so that the eigenvalue
    /// identity `a(1,p) a(p,1) - a(p,p) = 1` holds for every Hecke eigenform.
    pub fn eigen_identity_defect(p: u64, alg: &HeckeAlgebra) -> Result<HeckeElement> {
        let lhs = Self::t_p1(p)?.compose(&Self::t_1p(p)?, alg)?.sub(&HeckeElement::identity());
        Ok(lhs.sub(&Self::t_pp(p, alg)?))
    }

    /// Coefficient of the index `(m, n)` given the Fourier coefficients of the
    /// targeted form at `(1, p)` and `(p, 1)`.
    pub fn alpha<T: Clone + From<i8>>(m: u64, n: u64, p: u64, a_1p: T, a_p1: T) -> T {
        match (m == p, n == p, m == 1, n == 1) {
            (true, false, _, true) => a_1p,
            (false, true, true, _) => a_p1,
            (true, true, _, _) => T::from(-2),
            _ => T::from(0),
        }
    }
}

pub fn amplifier(l: u64) -> Result<Amplifier> {
    if l < 2 {
        return Err(Error::Domain(format!("amplifier length must be at least 2, got {l}")));
    }
    let primes: Vec<u64> = (l..=2 * l).filter(|&n| is_prime(n)).collect();
    if primes.is_empty() {
        return Err(Error::Domain(format!("no primes in [{l}, {}]", 2 * l)));
    }
    let a_count = 2 * primes.len() as u64;
    Ok(Amplifier { l, primes, a_count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_of_diagonals() {
        let t = determinantal_divisors(&IntegerMatrix3::diag(1, 3, 12)).unwrap();
        assert_eq!(t.d, [1, 3, 36]);
        assert_eq!(determinantal_divisors(&IntegerMatrix3::diag(2, 2, 2)).unwrap().d, [2, 4, 8]);
        // unsorted diagonal
        assert_eq!(determinantal_divisors(&IntegerMatrix3::diag(2, 1, 2)).unwrap(), d(1, 2, 2));
        assert!(determinantal_divisors(&IntegerMatrix3::diag(1, 0, 2)).is_err());
        assert!(DivisorTriple::new(1, 2, 2).is_err());
    }

    #[test]
    fn distinct_shapes_are_distinct_cosets() {
        assert!(!same_double_coset(&IntegerMatrix3::diag(1, 1, 4), &IntegerMatrix3::diag(1, 2, 2)).unwrap());
    }

    #[test]
    fn hnf_is_canonical() {
        let m = IntegerMatrix3::from_i64([[2, 3, 1], [4, -1, 5], [0, 7, 3]]);
        let u = IntegerMatrix3::from_i64([[1, 2, 0], [0, 1, 0], [3, 7, 1]]);
        let h1 = hermite_normal_form(&m).unwrap();
        let h2 = hermite_normal_form(&u.mul(&m)).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.entries[1][0], BigInt::zero());
        assert_eq!(h1.det(), &m.det().abs());
    }

    #[test]
    fn hecke_degrees() {
        for p in [2u64, 3, 5] {
            let n = p * p + p + 1;
            assert_eq!(enumerate_left_cosets(d(1, 1, p)).unwrap().reps.len() as u64, n);
            assert_eq!(enumerate_left_cosets(d(1, p, p)).unwrap().reps.len() as u64, n);
        }
        assert_eq!(enumerate_left_cosets(DivisorTriple::identity()).unwrap().reps.len(), 1);
    }

    #[test]
    fn degree_is_multiplicative() {
        for t in [d(1, 1, 6), d(1, 2, 6), d(1, 6, 6), d(1, 2, 12), d(1, 3, 18)] {
            assert_eq!(coset_count(t).unwrap(), coset_count_brute(t).unwrap(), "{t}");
        }
    }

    #[test]
    fn normalized_operators() {
        let t1 = normalized_hecke(1).unwrap();
        assert_eq!(t1, HeckeElement::identity());
        let t4 = normalized_hecke(4).unwrap();
        assert_eq!(t4.coefficient(d(1, 1, 4)), rational(1, 4));
        assert_eq!(t4.coefficient(d(1, 2, 2)), rational(1, 4));
        let t2s = normalized_hecke_dual(2).unwrap();
        assert_eq!(t2s, HeckeElement::term(d(1, 2, 2), rational(1, 2)));
    }

    #[test]
    fn identity_is_neutral() {
        let r = multiply_double_cosets(d(1, 1, 3), DivisorTriple::identity()).unwrap();
        assert_eq!(r, HeckeElement::basis(d(1, 1, 3)));
    }

    #[test]
    fn scalar_classes_reduce() {
        assert_eq!(d(2, 2, 2).primitive(), DivisorTriple::identity());
        assert_eq!(d(2, 4, 4).primitive(), d(1, 2, 2));
        assert_eq!(d(1, 1, 5).dual(), d(1, 5, 5));
    }

    #[test]
    fn amplifier_primes() {
        let a = amplifier(10).unwrap();
        assert_eq!(a.primes, vec![11, 13, 17, 19]);
        assert_eq!(a.a_count, 8);
        assert_eq!(amplifier(2).unwrap().a_count, 4);
        assert!(amplifier(1).is_err());
        assert_eq!(Amplifier::alpha(5, 1, 5, 7i64, 9i64), 7);
        assert_eq!(Amplifier::alpha(1, 5, 5, 7i64, 9i64), 9);
        assert_eq!(Amplifier::alpha(5, 5, 5, 7i64, 9i64), -2);
        assert_eq!(Amplifier::alpha(2, 3, 5, 7i64, 9i64), 0);
        assert!(Amplifier::eigen_identity_defect(3, &HeckeAlgebra::new()).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_primes() {
        assert!(verify_linearizations(1, 3).is_err());
        assert!(verify_linearizations(4, 3).is_err());
    }
}
