//! Symplectic unitaries, the Fourier and Zauner unitaries, order-three phase
//! fixing, and the extended Clifford action including the anti-unitary Ĵ.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{CVector, UMatrix};
use crate::modring::{dbar, mod_inverse, SympMat};
use crate::phase::Phase;
use crate::whgroup::{lift_phase_exponent, symp_form_lift, tau_pow, DispIndex};

fn check_modulus(m: &SympMat, d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if m.modulus() != dbar(d) {
        return Err(Error::ModulusMismatch {
            expected: dbar(d),
            got: m.modulus(),
        });
    }
    if !m.is_symplectic() {
        return Err(Error::AntiSymplectic);
    }
    Ok(())
}

/// Direct formula, valid when `m2` is invertible modulo d̄.
fn direct_unitary(m: &SympMat, d: u64, m2inv: u64) -> UMatrix {
    let n = d as usize;
    let two_d = 2 * d as i128;
    let [m1, _, _, m4] = m.entries().map(|x| x as i128);
    let scale = 1.0 / (d as f64).sqrt();
    UMatrix::from_fn(n, |r, s| {
        let (r, s) = (r as i128, s as i128);
        let e = (m2inv as i128 * (m1 * s * s - 2 * r * s + m4 * r * r)).rem_euclid(two_d);
        tau_pow(d, e as i64).to_complex() * scale
    })
}

/// `A_M`, the Clifford unitary with `A_M D_p A_M† = D_{Mp}`.
///
/// When `m2` is not invertible modulo d̄ the matrix is factored as
/// `(M·S_a⁻¹)·S_a` with `S_a = [[a, 1], [a − 1, 1]]` and the two direct
/// unitaries are multiplied.
pub fn symplectic_unitary(m: &SympMat, d: u64) -> Result<UMatrix> {
    check_modulus(m, d)?;
    let n = m.modulus();
    if let Some(inv) = mod_inverse(m.m2() as i64, n) {
        return Ok(direct_unitary(m, d, inv));
    }
    for a in 0..n as i64 {
        let s = SympMat::new([a, 1, a - 1, 1], n)?;
        let left = *m * s.inverse();
        if let Some(inv) = mod_inverse(left.m2() as i64, n) {
            // S_a has upper-right entry 1, its own inverse
            return Ok(&direct_unitary(&left, d, inv) * &direct_unitary(&s, d, 1));
        }
    }
    Err(Error::Verification(format!(
        "no factorization found for {m}"
    )))
}

/// The discrete Fourier matrix `F[r][s] = ω^{rs}/√d`, the unitary of `M_F`.
pub fn fourier(d: u64) -> UMatrix {
    let n = d as usize;
    let scale = 1.0 / (d as f64).sqrt();
    UMatrix::from_fn(n, |r, s| {
        Phase::omega(d).pow((r * s) as i64).to_complex() * scale
    })
}

/// Zauner's unitary `e^{iπ(d−1)/12} · diag(τ^{r²}) · F`, of order exactly three.
pub fn zauner(d: u64) -> UMatrix {
    let n = d as usize;
    let pre = Phase::new(d as i64 - 1, 24);
    let scale = 1.0 / (d as f64).sqrt();
    UMatrix::from_fn(n, |r, s| {
        let p = pre * tau_pow(d, (r * r) as i64) * Phase::omega(d).pow((r * s) as i64);
        p.to_complex() * scale
    })
}

/// `A_{M_𝔷_k}` with the principal phase making its cube the identity.
pub fn zauner_k(d: u64, k: i64) -> Result<UMatrix> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if mod_inverse(k, d).is_none() {
        return Err(Error::NotInvertible {
            value: k,
            modulus: d,
        });
    }
    let m = SympMat::zauner_k(k, dbar(d))?;
    let a = symplectic_unitary(&m, d)?;
    Ok(normalize_order3(&a)?.principal().clone())
}

/// Unit scalar snapped to an exact root of unity of order dividing `den`
/// when it lies within `1e−9` of one.
pub(crate) fn snap_phase(c: Complex64, den: i64) -> Option<Phase> {
    let turns = c.arg() / std::f64::consts::TAU;
    let num = (turns * den as f64).round() as i64;
    let p = Phase::new(num, den);
    ((p.to_complex() - c).norm() < 1e-9).then_some(p)
}

/// The three order-three phase choices of an operator whose cube is scalar.
#[derive(Clone, Debug)]
pub struct Order3Variants {
    /// `ω₃^j · s · A` for `j = 0, 1, 2`, with `s` the principal `c^{−1/3}`.
    pub variants: [UMatrix; 3],
    /// Variant with the largest eigenvalue-1 eigenspace, smallest `j` on ties.
    pub canonical: usize,
    /// Eigenvalue-1 multiplicity of each variant.
    pub fixed_dims: [usize; 3],
    /// `A³ = c·I`.
    pub cube: Complex64,
}

impl Order3Variants {
    pub fn principal(&self) -> &UMatrix {
        &self.variants[0]
    }

    pub fn canonical_variant(&self) -> &UMatrix {
        &self.variants[self.canonical]
    }
}

/// Multiplicities of the eigenvalues `1, ω₃, ω₃²` of an operator with `A³ = I`,
/// read off the traces of the spectral projectors `(1/3) Σ_t (ω₃^{−m} A)^t`.
pub fn order3_multiplicities(a: &UMatrix) -> [usize; 3] {
    let n = a.dim() as f64;
    let t1 = a.trace();
    let t2 = a.pow(2).trace();
    let mut out = [0; 3];
    for (m, slot) in out.iter_mut().enumerate() {
        let w = Phase::omega3().pow(-(m as i64)).to_complex();
        let tr = (Complex64::new(n, 0.0) + w * t1 + w * w * t2) / 3.0;
        *slot = tr.re.round().max(0.0) as usize;
    }
    out
}

pub fn normalize_order3(a: &UMatrix) -> Result<Order3Variants> {
    let (c, res) = a.pow(3).scalar_part();
    if res > a.tolerance() || (c.norm() - 1.0).abs() > a.tolerance() {
        return Err(Error::NotOrderThree(res.max((c.norm() - 1.0).abs())));
    }
    // exact roots of unity keep the branch choice stable under rounding
    let dim = a.dim() as i64;
    let s = match snap_phase(c, 48 * dim.max(1)) {
        Some(p) => p.inv().principal_root(3).to_complex(),
        None => Complex64::from_polar(1.0, -c.arg() / 3.0),
    };
    let base = a.scale(s);
    let mults = order3_multiplicities(&base);
    let w3 = Phase::omega3().to_complex();
    let variants = [base.clone(), base.scale(w3), base.scale(w3 * w3)];
    // ω₃^j·A fixes exactly the ω₃^{−j} eigenspace of A
    let fixed_dims = [mults[0], mults[2], mults[1]];
    let mut canonical = 0;
    for j in 1..3 {
        if fixed_dims[j] > fixed_dims[canonical] {
            canonical = j;
        }
    }
    Ok(Order3Variants {
        variants,
        canonical,
        fixed_dims,
        cube: c,
    })
}

/// Element `phase · D_b · A_M · Ĵ^{jflag}` of the extended Clifford group.
///
/// `m` is always the det +1 part; the ESL matrix of the element is
/// `m · diag(1, −1)` when `jflag` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CliffordElem {
    pub jflag: bool,
    pub b: DispIndex,
    pub m: SympMat,
    pub phase: Phase,
}

impl CliffordElem {
    pub fn new(jflag: bool, b: DispIndex, m: SympMat, phase: Phase) -> Result<Self> {
        check_modulus(&m, b.dim())?;
        Ok(CliffordElem { jflag, b, m, phase })
    }

    /// `[M, b]` for `M ∈ ESL(2, Z_d̄)`; det −1 input sets the Ĵ flag.
    pub fn from_esl(m: SympMat, b: DispIndex) -> Result<Self> {
        if m.is_symplectic() {
            Self::new(false, b, m, Phase::ONE)
        } else {
            let unitary = m * SympMat::conjugation_flip(m.modulus());
            Self::new(true, b, unitary, Phase::ONE)
        }
    }

    pub fn symplectic(m: SympMat, d: u64) -> Result<Self> {
        Self::new(false, DispIndex::zero(d), m, Phase::ONE)
    }

    pub fn displacement(b: DispIndex) -> Self {
        let d = b.dim();
        CliffordElem {
            jflag: false,
            b,
            m: SympMat::identity(dbar(d)),
            phase: Phase::ONE,
        }
    }

    /// Ĵ alone.
    pub fn conjugation(d: u64) -> Self {
        CliffordElem {
            jflag: true,
            ..Self::displacement(DispIndex::zero(d))
        }
    }

    pub fn dim(&self) -> u64 {
        self.b.dim()
    }

    pub fn esl_matrix(&self) -> SympMat {
        if self.jflag {
            self.m * SympMat::conjugation_flip(self.m.modulus())
        } else {
            self.m
        }
    }

    /// The linear factor `phase · D_b · A_M`.
    pub fn unitary_part(&self) -> Result<UMatrix> {
        let a = symplectic_unitary(&self.m, self.dim())?;
        Ok((&crate::whgroup::displacement(&self.b) * &a).scale(self.phase.to_complex()))
    }

    /// `O v`.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        let u = self.unitary_part()?;
        Ok(if self.jflag {
            u.apply(&apply_antiunitary(v))
        } else {
            u.apply(v)
        })
    }

    /// `O X O⁻¹` as a dense matrix.
    pub fn conjugate_matrix(&self, x: &UMatrix) -> Result<UMatrix> {
        let u = self.unitary_part()?;
        let x = if self.jflag { x.conjugate() } else { x.clone() };
        Ok(u.conjugate_by(&x))
    }
}

/// Index-level action `O D_a O⁻¹ = phase · D_{a'}`, returning `(a', phase)`.
pub fn conjugate_displacement(e: &CliffordElem, a: &DispIndex) -> (DispIndex, Phase) {
    let d = e.dim();
    let n = dbar(d) as i64;
    let (a1, a2) = a.as_pair();
    // Ĵ D_{(a1,a2)} Ĵ = D_{(a1,−a2)} exactly for integer lifts
    let p = if e.jflag { (a1, -a2) } else { (a1, a2) };
    let [m1, m2, m3, m4] = e.m.entries().map(|x| x as i64);
    let q = (
        (m1 * p.0 + m2 * p.1).rem_euclid(n),
        (m3 * p.0 + m4 * p.1).rem_euclid(n),
    );
    // D_b D_q D_b† = τ^{2⟨b,q⟩} D_q
    let b = e.b.as_pair();
    let exp = 2 * symp_form_lift(b, q, d) + lift_phase_exponent(q, d);
    (DispIndex::new(q.0, q.1, d), tau_pow(d, exp as i64))
}

/// Ĵ: entrywise complex conjugation of a vector.
pub fn apply_antiunitary(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

/// Largest residual of `A D_a A† ∝ D_{Ma}` over all `a`, minimized over the
/// unit scalar in each case.
pub fn action_residual(a: &UMatrix, m: &SympMat, d: u64) -> f64 {
    DispIndex::all(d)
        .map(|idx| {
            let lhs = a.conjugate_by(&crate::whgroup::displacement(&idx));
            let img = m.apply(idx.as_pair());
            let rhs = crate::whgroup::displacement_lift(img.0 as i64, img.1 as i64, d);
            lhs.phase_relative_to(&rhs).1
        })
        .fold(0.0, f64::max)
}
