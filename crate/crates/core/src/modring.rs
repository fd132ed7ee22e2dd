//! Exact arithmetic over Z_n and the groups SL(2, Z_n) / ESL(2, Z_n).
//!
//! Symplectic matrices for dimension `d` live modulo `d̄` (`d` for odd `d`,
//! `2d` for even `d`). Everything here is integer arithmetic; no tolerances.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;
use std::sync::{Arc, Mutex, OnceLock};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Representative of `x` in `[0, n)`.
pub fn rem(x: i64, n: u64) -> u64 {
    (x as i128).rem_euclid(n as i128) as u64
}

/// Multiplicative inverse of `x` modulo `n`, if `gcd(x, n) = 1`.
pub fn mod_inverse(x: i64, n: u64) -> Option<u64> {
    assert!(n >= 1, "modulus must be positive");
    if n == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (rem(x, n) as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

fn pow_mod(base: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    let mut b = base % n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % n;
        }
        b = b * b % n;
        e >>= 1;
    }
    acc
}

/// Euler's criterion for a nonzero residue modulo an odd prime.
pub fn is_quadratic_residue(x: u64, p: u64) -> bool {
    let x = x % p;
    x != 0 && pow_mod(x, (p - 1) / 2, p) == 1
}

/// `d` together with `d̄`, the modulus governing symplectic matrices and τ
/// exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    d: u64,
    dbar: u64,
}

impl Modulus {
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Modulus { d, dbar: dbar(d) })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn dbar(&self) -> u64 {
        self.dbar
    }
}

pub fn dbar(d: u64) -> u64 {
    if d % 2 == 1 {
        d
    } else {
        2 * d
    }
}

/// 2×2 matrix over Z_n with determinant ±1, entries `[[m1, m2], [m3, m4]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SympMat {
    m: [u64; 4],
    n: u64,
}

impl SympMat {
    pub fn new(entries: [i64; 4], n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let m = entries.map(|x| rem(x, n));
        let s = SympMat { m, n };
        let det = s.det();
        if det != 1 % n && det != n - 1 {
            return Err(Error::NotSymplectic { det, modulus: n });
        }
        Ok(s)
    }

    fn raw(m: [u64; 4], n: u64) -> Self {
        SympMat { m, n }
    }

    pub fn identity(n: u64) -> Self {
        Self::raw([1 % n, 0, 0, 1 % n], n)
    }

    /// Symplectic matrix of the Fourier matrix, `[[0, −1], [1, 0]]`.
    pub fn fourier(n: u64) -> Self {
        Self::raw([0, rem(-1, n), 1 % n, 0], n)
    }

    /// Symplectic matrix of Zauner's unitary, `[[0, −1], [1, −1]]`.
    pub fn zauner(n: u64) -> Self {
        Self::raw([0, rem(-1, n), 1 % n, rem(-1, n)], n)
    }

    /// `[[0, −k⁻¹], [k, −1]]`, the symplectic matrix of 𝔷_k.
    pub fn zauner_k(k: i64, n: u64) -> Result<Self> {
        let kinv = mod_inverse(k, n).ok_or(Error::NotInvertible {
            value: k,
            modulus: n,
        })?;
        Ok(Self::raw(
            [0, rem(-(kinv as i64), n), rem(k, n), rem(-1, n)],
            n,
        ))
    }

    /// `diag(1, −1)`, the matrix of the anti-unitary Ĵ.
    pub fn conjugation_flip(n: u64) -> Self {
        Self::raw([1 % n, 0, 0, rem(-1, n)], n)
    }

    pub fn entries(&self) -> [u64; 4] {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn m1(&self) -> u64 {
        self.m[0]
    }

    pub fn m2(&self) -> u64 {
        self.m[1]
    }

    pub fn m3(&self) -> u64 {
        self.m[2]
    }

    pub fn m4(&self) -> u64 {
        self.m[3]
    }

    pub fn det(&self) -> u64 {
        let [a, b, c, d] = self.m.map(|x| x as i128);
        (a * d - b * c).rem_euclid(self.n as i128) as u64
    }

    /// True for det +1, false for det −1.
    pub fn is_symplectic(&self) -> bool {
        self.det() == 1 % self.n
    }

    pub fn trace(&self) -> u64 {
        (self.m[0] + self.m[3]) % self.n
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m.map(|x| x as i64);
        // det is ±1, its own inverse
        let det = if self.is_symplectic() { 1 } else { -1 };
        let n = self.n;
        Self::raw(
            [
                rem(det * d, n),
                rem(-det * b, n),
                rem(-det * c, n),
                rem(det * a, n),
            ],
            n,
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::identity(self.n);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `s · self · s⁻¹`.
    pub fn conjugated_by(&self, s: &SympMat) -> Self {
        *s * *self * s.inverse()
    }

    /// Entries multiplied by the scalar `c` (the result must still have det ±1).
    pub fn scaled(&self, c: i64) -> Result<Self> {
        let m = self.m.map(|x| x as i64 * c);
        Self::new(m, self.n)
    }

    /// The same matrix read modulo a divisor of the current modulus.
    pub fn reduce(&self, modulus: u64) -> Result<Self> {
        if modulus == 0 || !self.n.is_multiple_of(modulus) {
            return Err(Error::ModulusMismatch {
                expected: self.n,
                got: modulus,
            });
        }
        Ok(Self::raw(self.m.map(|x| x % modulus), modulus))
    }

    /// Integer action on a column vector, reduced modulo the matrix modulus.
    pub fn apply(&self, a: (i64, i64)) -> (u64, u64) {
        let [m1, m2, m3, m4] = self.m.map(|x| x as i128);
        let (x, y) = (a.0 as i128, a.1 as i128);
        let n = self.n as i128;
        (
            (m1 * x + m2 * y).rem_euclid(n) as u64,
            (m3 * x + m4 * y).rem_euclid(n) as u64,
        )
    }

    pub fn rows(&self) -> [[u64; 2]; 2] {
        [[self.m[0], self.m[1]], [self.m[2], self.m[3]]]
    }
}

impl Mul for SympMat {
    type Output = SympMat;

    fn mul(self, rhs: SympMat) -> SympMat {
        assert_eq!(self.n, rhs.n, "multiplying matrices over different moduli");
        let n = self.n;
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = rhs.m;
        SympMat::raw(
            [
                (a * e + b * g) % n,
                (a * f + b * h) % n,
                (c * e + d * g) % n,
                (c * f + d * h) % n,
            ],
            n,
        )
    }
}

impl fmt::Display for SympMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.n)
    }
}

impl Serialize for SympMat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SympMat", 2)?;
        s.serialize_field("rows", &self.rows())?;
        s.serialize_field("modulus", &self.n)?;
        s.end()
    }
}

fn expect_modulus(m: &SympMat, d: u64) -> Result<()> {
    let want = dbar(d);
    if m.modulus() != want {
        return Err(Error::ModulusMismatch {
            expected: want,
            got: m.modulus(),
        });
    }
    Ok(())
}

/// Clifford trace `tr(M) mod d` of a matrix over Z_d̄.
pub fn clifford_trace(m: &SympMat, d: u64) -> Result<u64> {
    expect_modulus(m, d)?;
    if !m.is_symplectic() {
        return Err(Error::AntiSymplectic);
    }
    Ok(m.trace() % d)
}

/// det ≡ 1 (mod d̄) and Clifford trace ≡ −1 (mod d).
///
/// In dimension three the identity also has trace −1; it is not of order
/// three and is excluded.
pub fn is_canonical_order3(m: &SympMat, d: u64) -> bool {
    if m.modulus() != dbar(d) || !m.is_symplectic() {
        return false;
    }
    if m.trace() % d != (d - 1) % d {
        return false;
    }
    if d == 3 && m.is_identity() {
        return false;
    }
    if d % 2 == 1 {
        // Cayley–Hamilton: M² + M + I ≡ 0 ⇒ M³ ≡ I
        debug_assert!(m.pow(3).is_identity(), "{m} has trace −1 but M³ ≠ I");
    }
    true
}

/// The lift of a canonical `M` whose trace is −1 modulo d̄ itself.
///
/// For even `d` a matrix with trace `d − 1 (mod 2d)` is replaced by
/// `(1 + d)·M`, which has trace `−1 (mod 2d)` and the same symplectic
/// unitary up to phase. For odd `d` this is the identity map.
pub fn canonical_lift(m: &SympMat, d: u64) -> Result<SympMat> {
    if !is_canonical_order3(m, d) {
        return Err(Error::NotCanonical { d });
    }
    let n = m.modulus();
    if m.trace() == n - 1 {
        Ok(*m)
    } else {
        m.scaled(1 + d as i64)
    }
}

/// Bound on the modulus of exhaustive scans over SL(2, Z_n).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanLimit(pub u64);

impl ScanLimit {
    pub const ENV_VAR: &'static str = "SIC333_MAX_BRUTE";

    /// Reads the limit from `SIC333_MAX_BRUTE`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(ScanLimit)
            .unwrap_or_default()
    }

    fn check(&self, n: u64) -> Result<()> {
        if n > self.0 {
            return Err(Error::ScaleGuard { n, limit: self.0 });
        }
        Ok(())
    }
}

impl Default for ScanLimit {
    fn default() -> Self {
        ScanLimit(24)
    }
}

static SL_CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<SympMat>>>>> = OnceLock::new();

/// All of SL(2, Z_n) in lexicographic order of entries.
pub fn special_linear_group(n: u64, limit: ScanLimit) -> Result<Arc<Vec<SympMat>>> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    limit.check(n)?;
    let cache = SL_CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().unwrap().get(&n) {
        return Ok(Arc::clone(g));
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if (a * d + n * n - b * c % n) % n == 1 % n {
                        out.push(SympMat::raw([a, b, c, d], n));
                    }
                }
            }
        }
    }
    let out = Arc::new(out);
    cache.lock().unwrap().insert(n, Arc::clone(&out));
    Ok(out)
}

/// Every canonical order-three matrix over Z_d̄, sorted lexicographically.
pub fn enumerate_canonical_order3(d: u64, limit: ScanLimit) -> Result<Vec<SympMat>> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    limit.check(d)?;
    let n = dbar(d);
    let mut out = Vec::new();
    for a in 0..n {
        let m4 = rem(d as i64 - 1 - a as i64, d);
        // trace ≡ −1 (mod d) leaves n/d choices for m4 mod n
        for lift in 0..n / d {
            let m4 = m4 + lift * d;
            for b in 0..n {
                for c in 0..n {
                    let m = SympMat::raw([a, b, c, m4], n);
                    if m.is_symplectic() && is_canonical_order3(&m, d) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// First `S ∈ SL(2, Z_n)` in lexicographic order with `S·M1·S⁻¹ = M2`.
pub fn brute_force_conjugate(
    m1: &SympMat,
    m2: &SympMat,
    limit: ScanLimit,
) -> Result<Option<SympMat>> {
    if m1.modulus() != m2.modulus() {
        return Err(Error::ModulusMismatch {
            expected: m1.modulus(),
            got: m2.modulus(),
        });
    }
    let group = special_linear_group(m1.modulus(), limit)?;
    Ok(group.iter().copied().find(|s| *s * *m1 == *m2 * *s))
}

fn inv(x: u64, n: u64) -> u64 {
    mod_inverse(x as i64, n).expect("residue is invertible modulo a prime")
}

/// Explicit `S ∈ SL(2, Z_d)` with `S·M·S⁻¹ = M_𝔷` for prime `d > 3`.
///
/// Built as a product of elementary conjugations, never by search:
/// a shear that makes `m2` nonzero, a lower shear reaching `M_𝔷_k`, then a
/// diagonal rescaling `𝔷_k ≃ 𝔷_{kl²}`, routed through the `a² + a + 1`
/// family when `k` is a non-residue.
pub fn prime_conjugator(m: &SympMat, d: u64) -> Result<SympMat> {
    if d <= 3 || !is_prime(d) {
        return Err(Error::NotPrimeAbove3(d));
    }
    if !is_canonical_order3(m, d) {
        return Err(Error::NotCanonical { d });
    }
    let n = d;
    let sm = |e: [i64; 4]| SympMat::raw(e.map(|x| rem(x, n)), n);
    let shear = |a: u64| sm([a as i64, 1, 0, inv(a, n) as i64]);

    let mut s = SympMat::identity(n);
    let mut cur = *m;

    if cur.m2() == 0 {
        // m4 − m1 ≠ 0 for d > 3; the new upper-right entry is a(m4 − m1) − m3
        let diff = rem(cur.m4() as i64 - cur.m1() as i64, n);
        let preferred = (cur.m3() + n - 1) % n * inv(diff, n) % n;
        let a = if preferred != 0 {
            preferred
        } else {
            (1..n)
                .find(|&a| !(a * diff % n + n - cur.m3()).is_multiple_of(n))
                .expect("some shear parameter works")
        };
        let t = shear(a);
        cur = cur.conjugated_by(&t);
        s = t * s;
    }

    let to_zauner_k = |x: &SympMat| sm([1, 0, (x.m1() * inv(x.m2(), n) % n) as i64, 1]);
    let l = to_zauner_k(&cur);
    cur = cur.conjugated_by(&l);
    s = l * s;
    let k = cur.m3();

    let kinv = inv(k, n);
    let diag = |l: u64| sm([inv(l, n) as i64, 0, 0, l as i64]);
    let sqrt = |x: u64| (1..n).find(|&l| l * l % n == x);
    if is_quadratic_residue(k, n) {
        let l = sqrt(kinv).expect("inverse of a residue is a residue");
        s = diag(l) * s;
    } else {
        let a = (1..n)
            .find(|&a| !is_quadratic_residue((a * a + a + 1) % n, n))
            .expect("a² + a + 1 takes a non-residue value for prime d > 3");
        let t = shear(a);
        let via = SympMat::zauner(n).conjugated_by(&t);
        let g = to_zauner_k(&via) * t;
        let k2 = SympMat::zauner(n).conjugated_by(&g).m3();
        let l = sqrt(k2 * kinv % n).expect("ratio of non-residues is a residue");
        s = g.inverse() * diag(l) * s;
    }

    if !s.is_symplectic() || m.conjugated_by(&s) != SympMat::zauner(n) {
        return Err(Error::Verification(format!(
            "prime conjugator {s} does not map {m} to M_Z"
        )));
    }
    Ok(s)
}

/// Conjugacy-class representatives of canonical order-three unitaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConjugacyClass {
    Z,
    Z2,
    M1,
    M2,
}

impl ConjugacyClass {
    /// Representative matrix over Z_d̄ (trace −1 modulo d̄).
    pub fn representative(&self, d: u64) -> SympMat {
        let n = dbar(d);
        let di = d as i64;
        let sm = |e: [i64; 4]| SympMat::new(e, n).expect("representatives have det 1");
        match self {
            ConjugacyClass::Z => SympMat::zauner(n),
            ConjugacyClass::Z2 => SympMat::zauner(n).pow(2),
            ConjugacyClass::M1 => sm([1, 3, (4 * di - 3) / 3, -2]),
            ConjugacyClass::M2 => sm([1, 3, (2 * di - 3) / 3, -2]),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ConjugacyClass::Z => "Z",
            ConjugacyClass::Z2 => "Z2",
            ConjugacyClass::M1 => "M1",
            ConjugacyClass::M2 => "M2",
        }
    }
}

/// Representative set for dimension `d`, keyed on `d mod 9`.
pub fn representatives(d: u64) -> Vec<ConjugacyClass> {
    use ConjugacyClass::*;
    if !d.is_multiple_of(3) {
        vec![Z]
    } else if d.is_multiple_of(9) || d == 3 {
        vec![Z, Z2]
    } else if d % 9 == 3 {
        vec![Z, Z2, M1]
    } else {
        vec![Z, Z2, M2]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: ConjugacyClass,
    pub representative: SympMat,
    /// The matrix actually compared (trace −1 modulo d̄).
    pub lift: SympMat,
    /// `S` with `S · representative · S⁻¹ = lift`.
    pub certificate: SympMat,
}

pub fn classify_conjugacy(m: &SympMat, d: u64, limit: ScanLimit) -> Result<Classification> {
    let lift = canonical_lift(m, d)?;
    for class in representatives(d) {
        let rep = class.representative(d);
        if let Some(s) = brute_force_conjugate(&rep, &lift, limit)? {
            if rep.conjugated_by(&s) != lift {
                return Err(Error::Verification(format!(
                    "certificate {s} does not conjugate {rep} to {lift}"
                )));
            }
            return Ok(Classification {
                class,
                representative: rep,
                lift,
                certificate: s,
            });
        }
    }
    Err(Error::Unclassified { d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(e: [i64; 4], n: u64) -> SympMat {
        SympMat::new(e, n).unwrap()
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, 7), Some(1));
        assert_eq!(mod_inverse(3, 5), Some(2));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(-1, 10), Some(9));
    }

    #[test]
    fn rejects_bad_determinant() {
        assert!(matches!(
            SympMat::new([2, 0, 0, 2], 7),
            Err(Error::NotSymplectic { det: 4, modulus: 7 })
        ));
        let flip = SympMat::conjugation_flip(5);
        assert!(!flip.is_symplectic());
        assert_eq!(flip * flip.inverse(), SympMat::identity(5));
    }

    #[test]
    fn clifford_trace_examples() {
        for d in 1..=12 {
            let z = SympMat::zauner(dbar(d));
            assert_eq!(clifford_trace(&z, d).unwrap(), (d - 1) % d);
        }
        assert_eq!(clifford_trace(&SympMat::fourier(5), 5).unwrap(), 0);
        assert_eq!(clifford_trace(&SympMat::identity(7), 7).unwrap(), 2);
        let flip = SympMat::conjugation_flip(7);
        assert_eq!(clifford_trace(&flip, 7), Err(Error::AntiSymplectic));
        assert!(clifford_trace(&SympMat::identity(6), 6).is_err());
    }

    #[test]
    fn canonical_examples() {
        assert!(is_canonical_order3(&SympMat::zauner(5), 5));
        assert!(!is_canonical_order3(&SympMat::fourier(5), 5));
        assert!(is_canonical_order3(&sm([1, 3, 15, 22], 24), 12));
        assert!(!is_canonical_order3(&SympMat::identity(3), 3));
    }

    #[test]
    fn enumerate_small() {
        let l = ScanLimit::default();
        let two = enumerate_canonical_order3(2, l).unwrap();
        assert!(two.contains(&sm([0, 3, 1, 3], 4)));
        let three = enumerate_canonical_order3(3, l).unwrap();
        let z = SympMat::zauner(3);
        assert!(three.contains(&z) && three.contains(&z.pow(2)));
        assert!(three.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(
            enumerate_canonical_order3(25, l),
            Err(Error::ScaleGuard { .. })
        ));
    }

    #[test]
    fn brute_force_examples() {
        let l = ScanLimit::default();
        let z = SympMat::zauner(3);
        assert_eq!(brute_force_conjugate(&z, &z.pow(2), l).unwrap(), None);
        let m = sm([1, 3, 2, 0], 7);
        let s = brute_force_conjugate(&m, &m, l).unwrap().unwrap();
        assert!(s <= SympMat::identity(7));
        assert_eq!(m.conjugated_by(&s), m);
        let z1 = SympMat::zauner_k(1, 5).unwrap();
        let z2 = SympMat::zauner_k(2, 5).unwrap();
        let s = brute_force_conjugate(&z1, &z2, l).unwrap().unwrap();
        assert_eq!(z1.conjugated_by(&s), z2);
        assert!(matches!(
            brute_force_conjugate(&SympMat::identity(25), &SympMat::identity(25), l),
            Err(Error::ScaleGuard { .. })
        ));
    }

    #[test]
    fn prime_conjugator_examples() {
        assert_eq!(
            prime_conjugator(&SympMat::zauner(5), 5)
                .map(|s| SympMat::zauner(5).conjugated_by(&s))
                .unwrap(),
            SympMat::zauner(5)
        );
        let z4 = SympMat::zauner_k(4, 5).unwrap();
        assert_eq!(prime_conjugator(&z4, 5).unwrap(), sm([3, 0, 0, 2], 5));
        // m2 = 0 canonical matrices need −3 to be a square, so d = 7
        let m = sm([2, 0, 5, 4], 7);
        assert!(is_canonical_order3(&m, 7));
        let s = prime_conjugator(&m, 7).unwrap();
        assert_eq!(m.conjugated_by(&s), SympMat::zauner(7));
        assert_eq!(
            prime_conjugator(&SympMat::zauner(3), 3),
            Err(Error::NotPrimeAbove3(3))
        );
        assert_eq!(
            prime_conjugator(&SympMat::zauner(9), 9),
            Err(Error::NotPrimeAbove3(9))
        );
        assert_eq!(
            prime_conjugator(&SympMat::fourier(5), 5),
            Err(Error::NotCanonical { d: 5 })
        );
    }

    #[test]
    fn classification_examples() {
        let l = ScanLimit::default();
        let c = classify_conjugacy(&SympMat::zauner(7), 7, l).unwrap();
        assert_eq!(c.class, ConjugacyClass::Z);
        let c = classify_conjugacy(&sm([1, 3, 15, 22], 24), 12, l).unwrap();
        assert_eq!(c.class, ConjugacyClass::M1);
        let c = classify_conjugacy(&sm([1, 3, 3, 10], 12), 6, l).unwrap();
        assert_eq!(c.class, ConjugacyClass::M2);
        assert_eq!(c.representative.conjugated_by(&c.certificate), c.lift);
    }

    #[test]
    fn even_lift_has_full_trace() {
        let l = ScanLimit::default();
        for d in [2u64, 4, 6] {
            for m in enumerate_canonical_order3(d, l).unwrap() {
                let lift = canonical_lift(&m, d).unwrap();
                assert_eq!(lift.trace(), 2 * d - 1);
                assert!(lift.pow(3).is_identity());
                assert_eq!(lift.reduce(d).unwrap(), m.reduce(d).unwrap());
            }
        }
    }
}
