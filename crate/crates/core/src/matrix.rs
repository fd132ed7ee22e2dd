//! Dense complex matrices and vectors with their JSON wire format.

use std::ops::Mul;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance for algebraic identities between exactly-built operators.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix carrying an operator.
///
/// Unitarity is a predicate, not a construction invariant: intermediate
/// products are allowed to be scaled.
#[derive(Clone, Debug, PartialEq)]
pub struct UMatrix {
    inner: CMatrix,
    tol: f64,
}

impl UMatrix {
    pub fn from_matrix(inner: CMatrix) -> Self {
        assert!(inner.is_square(), "UMatrix must be square");
        UMatrix {
            inner,
            tol: DEFAULT_TOL,
        }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self::from_matrix(CMatrix::from_fn(n, n, f))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix(CMatrix::identity(n, n))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        Self::from_matrix(CMatrix::from_diagonal(&CVector::from_column_slice(entries)))
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.inner[(r, c)]
    }

    pub fn adjoint(&self) -> Self {
        self.map_inner(|m| m.adjoint())
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> Self {
        self.map_inner(|m| m.conjugate())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_inner(|m| m * c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = CMatrix::identity(self.dim(), self.dim());
        let mut base = self.inner.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        UMatrix {
            inner: acc,
            tol: self.tol,
        }
    }

    pub fn kron(&self, other: &UMatrix) -> Self {
        self.map_inner(|m| m.kronecker(&other.inner))
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.inner * v
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_diff(&self, other: &UMatrix) -> f64 {
        max_abs(&(&self.inner - &other.inner))
    }

    /// ‖U†U − I‖_max.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        max_abs(&(self.inner.adjoint() * &self.inner - CMatrix::identity(n, n)))
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_residual() <= self.tol
    }

    /// Best scalar `c` with `self ≈ c·I`, and the residual ‖self − c·I‖_max.
    pub fn scalar_part(&self) -> (Complex64, f64) {
        let n = self.dim();
        let c = self.inner.trace() / n as f64;
        let res = max_abs(&(&self.inner - CMatrix::identity(n, n) * c));
        (c, res)
    }

    /// Unit scalar `c` with `self ≈ c·other` when the two differ by a phase
    /// only, together with the residual ‖self − c·other‖_max.
    pub fn phase_relative_to(&self, other: &UMatrix) -> (Complex64, f64) {
        let ip: Complex64 = other
            .inner
            .iter()
            .zip(self.inner.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let c = if ip.norm() > 0.0 { ip / ip.norm() } else { ONE };
        let res = max_abs(&(&self.inner - &other.inner * c));
        (c, res)
    }

    /// Conjugation `self · m · self†`.
    pub fn conjugate_by(&self, m: &UMatrix) -> UMatrix {
        UMatrix {
            inner: &self.inner * &m.inner * self.inner.adjoint(),
            tol: self.tol,
        }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[&UMatrix]) -> UMatrix {
        let n: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut out = CMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            let k = b.dim();
            out.view_mut((off, off), (k, k)).copy_from(&b.inner);
            off += k;
        }
        UMatrix::from_matrix(out)
    }

    fn map_inner(&self, f: impl FnOnce(&CMatrix) -> CMatrix) -> Self {
        UMatrix {
            inner: f(&self.inner),
            tol: self.tol,
        }
    }
}

impl Mul<&UMatrix> for &UMatrix {
    type Output = UMatrix;

    fn mul(self, rhs: &UMatrix) -> UMatrix {
        UMatrix {
            inner: &self.inner * &rhs.inner,
            tol: self.tol,
        }
    }
}

impl Mul for UMatrix {
    type Output = UMatrix;

    fn mul(self, rhs: UMatrix) -> UMatrix {
        &self * &rhs
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    dim: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct VectorWire {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for UMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let rows = (0..n)
            .map(|r| (0..n).map(|c| pair(&self.inner[(r, c)])).collect())
            .collect();
        MatrixWire { dim: n, rows }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let w = MatrixWire::deserialize(deserializer)?;
        if w.rows.len() != w.dim || w.rows.iter().any(|r| r.len() != w.dim) {
            return Err(D::Error::custom("matrix rows do not match \"dim\""));
        }
        Ok(UMatrix::from_fn(w.dim, |r, c| {
            let [re, im] = w.rows[r][c];
            Complex64::new(re, im)
        }))
    }
}

/// Wire form of a complex vector: `{"dim": d, "entries": [[re, im], ...]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorJson(pub CVector);

impl Serialize for VectorJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VectorWire {
            dim: self.0.len(),
            entries: self.0.iter().map(pair).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VectorJson {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let w = VectorWire::deserialize(deserializer)?;
        if w.entries.len() != w.dim {
            return Err(D::Error::custom("vector length does not match \"dim\""));
        }
        Ok(VectorJson(CVector::from_iterator(
            w.dim,
            w.entries.iter().map(|[re, im]| Complex64::new(*re, *im)),
        )))
    }
}

pub fn check_square_same(mats: &[&UMatrix]) -> Result<usize> {
    let n = mats.first().map(|m| m.dim()).unwrap_or(0);
    for m in mats {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.dim(),
            });
        }
    }
    Ok(n)
}
