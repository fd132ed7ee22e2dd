//! Clock, shift and displacement operators of the Weyl–Heisenberg group.
//!
//! `D_a = τ^{a1·a2} X^{a1} Z^{a2}` acts as `D_a|k⟩ = τ^{a1·a2 + 2·a2·k} |k + a1⟩`,
//! so every entry is an exact power of τ. For even `d` the phase depends on the
//! integer lift of `a`, not only on its residue mod `d`; [`displacement_lift`]
//! takes lifts and [`DispIndex`] always uses the representative in `[0, d)`.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{UMatrix, ZERO};
use crate::modring::{dbar, rem};
use crate::phase::Phase;

/// ω = exp(2πi/d), τ = −exp(πi/d) and ω₃ = exp(2πi/3).
pub fn roots(d: u64) -> Result<(Complex64, Complex64, Complex64)> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok((
        Phase::omega(d).to_complex(),
        Phase::tau(d).to_complex(),
        Phase::omega3().to_complex(),
    ))
}

/// τ^e as an exact phase.
pub fn tau_pow(d: u64, e: i64) -> Phase {
    Phase::tau(d).pow(e)
}

/// `Z = diag(1, ω, …, ω^{d−1})`.
pub fn clock(d: u64) -> UMatrix {
    let n = d as usize;
    let w = Phase::omega(d);
    let diag: Vec<Complex64> = (0..d).map(|k| w.pow(k as i64).to_complex()).collect();
    debug_assert_eq!(diag.len(), n);
    UMatrix::diagonal(&diag)
}

/// `X|k⟩ = |k + 1⟩`.
pub fn shift(d: u64) -> UMatrix {
    let n = d as usize;
    UMatrix::from_fn(n, |r, c| {
        if r == (c + 1) % n {
            Complex64::new(1.0, 0.0)
        } else {
            ZERO
        }
    })
}

/// Displacement label `(a1, a2) ∈ Z_d²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DispIndex {
    pub a1: u64,
    pub a2: u64,
    d: u64,
}

impl DispIndex {
    pub fn new(a1: i64, a2: i64, d: u64) -> Self {
        assert!(d >= 1, "dimension must be positive");
        DispIndex {
            a1: rem(a1, d),
            a2: rem(a2, d),
            d,
        }
    }

    pub fn zero(d: u64) -> Self {
        Self::new(0, 0, d)
    }

    pub fn dim(&self) -> u64 {
        self.d
    }

    pub fn neg(&self) -> Self {
        Self::new(-(self.a1 as i64), -(self.a2 as i64), self.d)
    }

    pub fn add(&self, other: &DispIndex) -> Self {
        Self::new(
            (self.a1 + other.a1) as i64,
            (self.a2 + other.a2) as i64,
            self.d,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.a1 == 0 && self.a2 == 0
    }

    /// All `d²` labels in row-major order.
    pub fn all(d: u64) -> impl Iterator<Item = DispIndex> {
        (0..d * d).map(move |i| DispIndex::new((i / d) as i64, (i % d) as i64, d))
    }

    pub fn as_pair(&self) -> (i64, i64) {
        (self.a1 as i64, self.a2 as i64)
    }
}

impl Serialize for DispIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a1, self.a2].serialize(serializer)
    }
}

/// `D_a` for a label reduced into `[0, d)`.
pub fn displacement(a: &DispIndex) -> UMatrix {
    let (a1, a2) = a.as_pair();
    displacement_lift(a1, a2, a.dim())
}

/// `τ^{a1·a2} X^{a1} Z^{a2}` for integer exponents (no reduction of `a`).
pub fn displacement_lift(a1: i64, a2: i64, d: u64) -> UMatrix {
    let n = d as usize;
    let di = d as i64;
    let mut m = UMatrix::identity(n).into_matrix();
    m.fill(ZERO);
    for k in 0..di {
        let row = (k + a1).rem_euclid(di) as usize;
        let e = a1 as i128 * a2 as i128 + 2 * a2 as i128 * k as i128;
        let e = e.rem_euclid(2 * di as i128) as i64;
        m[(row, k as usize)] = tau_pow(d, e).to_complex();
    }
    UMatrix::from_matrix(m)
}

/// `⟨a, b⟩ = a2·b1 − b2·a1 (mod d̄)`, so that `D_a D_b = τ^{⟨a,b⟩} D_{a+b}`
/// with `a + b` taken as an integer sum of the lifts.
pub fn symp_form(a: &DispIndex, b: &DispIndex) -> u64 {
    let (a1, a2) = a.as_pair();
    let (b1, b2) = b.as_pair();
    symp_form_lift((a1, a2), (b1, b2), a.dim())
}

pub fn symp_form_lift(a: (i64, i64), b: (i64, i64), d: u64) -> u64 {
    let v = a.1 as i128 * b.0 as i128 - b.1 as i128 * a.0 as i128;
    v.rem_euclid(dbar(d) as i128) as u64
}

/// Exponent `e (mod 2d)` with `D_p = τ^e D_r`, where `r` is `p` reduced mod `d`.
pub fn lift_phase_exponent(p: (i64, i64), d: u64) -> u64 {
    let r = DispIndex::new(p.0, p.1, d);
    let e = p.0 as i128 * p.1 as i128 - r.a1 as i128 * r.a2 as i128;
    e.rem_euclid(2 * d as i128) as u64
}

/// `D_a D_b = τ^e D_c` with `c = a + b` reduced; returns `(c, e mod 2d)`.
pub fn compose(a: &DispIndex, b: &DispIndex) -> (DispIndex, u64) {
    let d = a.dim();
    let sum = (a.a1 as i64 + b.a1 as i64, a.a2 as i64 + b.a2 as i64);
    let e = symp_form(a, b) + lift_phase_exponent(sum, d);
    (DispIndex::new(sum.0, sum.1, d), e % (2 * d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_small() {
        let (w, t, _) = roots(2).unwrap();
        assert!((t - c(0.0, -1.0)).norm() < 1e-15);
        assert!((w - c(-1.0, 0.0)).norm() < 1e-15);
        let (w3, t3, _) = roots(3).unwrap();
        assert!((t3 - w3 * w3).norm() < 1e-15);
        let (w1, t1, _) = roots(1).unwrap();
        assert!((w1 - c(1.0, 0.0)).norm() < 1e-15 && (t1 - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(roots(0), Err(Error::ZeroDimension));
    }

    #[test]
    fn qubit_operators() {
        let z = clock(2);
        let x = shift(2);
        assert!(z.max_diff(&UMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)])) < 1e-15);
        assert_eq!(x.get(0, 1), c(1.0, 0.0));
        assert_eq!(x.get(1, 0), c(1.0, 0.0));
        let d11 = displacement(&DispIndex::new(1, 1, 2));
        let want = UMatrix::from_fn(2, |r, cc| match (r, cc) {
            (0, 1) => c(0.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => ZERO,
        });
        assert!(d11.max_diff(&want) < 1e-15);
    }

    #[test]
    fn unit_displacements() {
        for d in 1..=6 {
            assert!(displacement(&DispIndex::new(1, 0, d)).max_diff(&shift(d)) < 1e-15);
            assert!(displacement(&DispIndex::new(0, 1, d)).max_diff(&clock(d)) < 1e-15);
            assert!(
                displacement(&DispIndex::zero(d)).max_diff(&UMatrix::identity(d as usize)) < 1e-15
            );
        }
    }

    #[test]
    fn symp_form_examples() {
        let e1 = DispIndex::new(1, 0, 5);
        let e2 = DispIndex::new(0, 1, 5);
        assert_eq!(symp_form(&e2, &e1), 1);
        assert_eq!(symp_form(&e1, &e2), 4);
        assert_eq!(symp_form(&e1, &DispIndex::new(1, 0, 4)), 0);
        assert_eq!(
            symp_form(&DispIndex::new(1, 0, 4), &DispIndex::new(0, 1, 4)),
            7
        );
    }

    #[test]
    fn compose_matches_matrices() {
        for d in [2u64, 3, 4] {
            for a in DispIndex::all(d) {
                for b in DispIndex::all(d) {
                    let (c, e) = compose(&a, &b);
                    let lhs = &displacement(&a) * &displacement(&b);
                    let rhs = displacement(&c).scale(tau_pow(d, e as i64).to_complex());
                    assert!(lhs.max_diff(&rhs) < 1e-12, "d={d} a={a:?} b={b:?}");
                }
            }
        }
    }
}
