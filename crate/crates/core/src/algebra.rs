//! Commutants, intertwiners and randomized block diagonalization.
//!
//! The intertwiner space `{X : X·G1 = G2·X}` is the null space of the
//! stacked maps `X ↦ X·G1 − G2·X`. Its Gram operator `K = Σ S†S` is assembled
//! entrywise in O(n⁴) per generator instead of through Kronecker products.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{max_abs, CMatrix, UMatrix};

/// Largest matrix dimension accepted by the commutant routines.
pub const MAX_COMMUTANT_DIM: usize = 40;

/// Eigenvalues of the Gram operator below this count as zero.
pub const NULL_TOL: f64 = 1e-7;

pub const DEFAULT_SEED: u64 = 0x5eed_0333;

const MAX_RETRIES: u64 = 5;

fn gram(pairs: &[(&UMatrix, &UMatrix)], n: usize) -> CMatrix {
    let nn = n * n;
    let mut k = CMatrix::zeros(nn, nn);
    let idx = |i: usize, j: usize| i * n + j;
    for (g1, g2) in pairs {
        let g1 = g1.matrix();
        let g2 = g2.matrix();
        let g1g1h = g1 * g1.adjoint();
        let g2hg2 = g2.adjoint() * g2;
        for i in 0..n {
            for j in 0..n {
                let row = idx(i, j);
                for l in 0..n {
                    k[(row, idx(i, l))] += g1g1h[(l, j)];
                }
                for kk in 0..n {
                    k[(row, idx(kk, j))] += g2hg2[(i, kk)];
                }
                for kk in 0..n {
                    let a = g2[(i, kk)];
                    let b = g2[(kk, i)].conj();
                    for l in 0..n {
                        k[(row, idx(kk, l))] -= a * g1[(j, l)].conj() + b * g1[(l, j)];
                    }
                }
            }
        }
    }
    k
}

fn check_pairs(pairs: &[(&UMatrix, &UMatrix)]) -> Result<usize> {
    let n = pairs
        .first()
        .map(|(g, _)| g.dim())
        .ok_or_else(|| Error::InvalidParameters("no generators".into()))?;
    for (g1, g2) in pairs {
        for g in [g1, g2] {
            if g.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.dim(),
                });
            }
        }
    }
    if n > MAX_COMMUTANT_DIM {
        return Err(Error::InvalidParameters(format!(
            "dimension {n} exceeds the commutant limit {MAX_COMMUTANT_DIM}"
        )));
    }
    Ok(n)
}

/// Orthonormal basis (Frobenius inner product) of `{X : X·G1_i = G2_i·X ∀i}`.
pub fn intertwiner_basis(g1: &[&UMatrix], g2: &[&UMatrix]) -> Result<Vec<CMatrix>> {
    if g1.len() != g2.len() {
        return Err(Error::InvalidParameters(
            "generator lists differ in length".into(),
        ));
    }
    let pairs: Vec<_> = g1.iter().copied().zip(g2.iter().copied()).collect();
    let n = check_pairs(&pairs)?;
    let eig = SymmetricEigen::new(gram(&pairs, n));
    let mut out = Vec::new();
    for (c, ev) in eig.eigenvalues.iter().enumerate() {
        if ev.abs() < NULL_TOL {
            let col = eig.eigenvectors.column(c);
            out.push(CMatrix::from_fn(n, n, |i, j| col[i * n + j]));
        }
    }
    Ok(out)
}

pub fn intertwiner_dimension(g1: &[&UMatrix], g2: &[&UMatrix]) -> Result<usize> {
    Ok(intertwiner_basis(g1, g2)?.len())
}

/// Dimension of the commutant of a set of square matrices.
pub fn commutant_dimension(gens: &[&UMatrix]) -> Result<usize> {
    intertwiner_dimension(gens, gens)
}

/// An invariant subspace: orthonormal columns `Q` and the restricted
/// generators `Q† G Q`.
#[derive(Clone, Debug)]
pub struct Block {
    pub basis: CMatrix,
    pub restricted: Vec<UMatrix>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

fn random_hermitian(basis: &[CMatrix], rng: &mut ChaCha8Rng) -> CMatrix {
    let n = basis[0].nrows();
    let mut h = CMatrix::zeros(n, n);
    for b in basis {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        let c = Complex64::new(re, im);
        h += b * c;
    }
    (&h + h.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Splits into irreducible invariant subspaces using the eigenspaces of a
/// random self-adjoint commutant element. Retries with derived seeds when
/// an accidental eigenvalue collision leaves a reducible block.
pub fn decompose(gens: &[&UMatrix], seed: u64) -> Result<Vec<Block>> {
    let basis = intertwiner_basis(gens, gens)?;
    let n = gens[0].dim();
    if basis.len() == 1 {
        return Ok(vec![restrict(gens, CMatrix::identity(n, n))]);
    }
    for attempt in 0..MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let h = random_hermitian(&basis, &mut rng);
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let spread = eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1.0);
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match clusters.last_mut() {
                Some(c)
                    if (eig.eigenvalues[i] - eig.eigenvalues[*c.last().unwrap()]).abs()
                        < 1e-6 * spread =>
                {
                    c.push(i)
                }
                _ => clusters.push(vec![i]),
            }
        }
        let blocks: Vec<Block> = clusters
            .iter()
            .map(|c| {
                let q = CMatrix::from_fn(n, c.len(), |r, k| eig.eigenvectors[(r, c[k])]);
                restrict(gens, q)
            })
            .collect();
        let irreducible = blocks.iter().all(|b| {
            let r: Vec<&UMatrix> = b.restricted.iter().collect();
            commutant_dimension(&r).map(|k| k == 1).unwrap_or(false)
        });
        if irreducible && invariance_residual(gens, &blocks) < 1e-8 {
            return Ok(blocks);
        }
    }
    Err(Error::Decomposition(format!(
        "no irreducible splitting after {MAX_RETRIES} seeds"
    )))
}

fn restrict(gens: &[&UMatrix], q: CMatrix) -> Block {
    let qh = q.adjoint();
    let restricted = gens
        .iter()
        .map(|g| UMatrix::from_matrix(&qh * g.matrix() * &q))
        .collect();
    Block {
        basis: q,
        restricted,
    }
}

/// Largest `‖G·Q − Q·(Q†GQ)‖_max` over generators and blocks.
pub fn invariance_residual(gens: &[&UMatrix], blocks: &[Block]) -> f64 {
    let mut worst = 0.0f64;
    for b in blocks {
        for (g, r) in gens.iter().zip(&b.restricted) {
            let lhs = g.matrix() * &b.basis;
            let rhs = &b.basis * r.matrix();
            worst = worst.max(max_abs(&(lhs - rhs)));
        }
    }
    worst
}

/// Unitary `T` (up to normalization) with `T·G1 = G2·T` when one exists with
/// full rank; both generator sets must be irreducible for it to be unique.
pub fn unitary_intertwiner(g1: &[&UMatrix], g2: &[&UMatrix]) -> Result<Option<UMatrix>> {
    let basis = intertwiner_basis(g1, g2)?;
    let Some(t) = basis.first() else {
        return Ok(None);
    };
    let n = t.nrows() as f64;
    let tht = t.adjoint() * t;
    let scale = (tht.trace().re / n).sqrt();
    if scale == 0.0 {
        return Ok(None);
    }
    let u = UMatrix::from_matrix(t * Complex64::new(1.0 / scale, 0.0));
    Ok(u.is_unitary().then_some(u))
}
