//! SIC fiducial verification, eigenspace-constrained search, and state
//! reconstruction from SIC probabilities.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::normalize_order3;
use crate::clifford::symplectic_unitary;
use crate::error::{Error, Result};
use crate::matrix::{max_abs, CMatrix, CVector, UMatrix, VectorJson};
use crate::modring::{canonical_lift, dbar, SympMat};
use crate::phase::Phase;
use crate::whgroup::{displacement, DispIndex};

/// Norm tolerance on input vectors.
pub const NORM_TOL: f64 = 1e-10;

/// Acceptance tolerance for search output.
pub const SEARCH_TOL: f64 = 1e-6;

/// Tolerance for verifying externally supplied fiducials.
pub const VERIFY_TOL: f64 = 1e-8;

/// Largest dimension accepted by [`search_fiducial`].
pub const MAX_SEARCH_DIM: u64 = 8;

fn check_unit(f: &CVector) -> Result<()> {
    let n = f.norm();
    if f.is_empty() || (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// `{D_a f}` over all `a` in row-major order.
pub fn wh_orbit(f: &CVector) -> Result<Vec<CVector>> {
    check_unit(f)?;
    let d = f.len() as u64;
    Ok(DispIndex::all(d)
        .map(|a| displacement(&a).apply(f))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Symmetry {
    #[serde(rename = "M")]
    pub m: SympMat,
    pub eigenvalue: Phase,
    /// `‖A f − eigenvalue · f‖`.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiducialReport {
    pub d: u64,
    pub vector: VectorJson,
    pub overlap_target: f64,
    pub max_equiangular_dev: f64,
    pub frame_residual: f64,
    /// `Σ_{a≠0} (|⟨f|D_a f⟩|² − 1/(d+1))²`.
    pub objective: f64,
    pub tol: f64,
    pub is_sic: bool,
    pub symmetry: Option<Symmetry>,
}

/// Checks the SIC conditions on the Weyl–Heisenberg orbit of `f`.
pub fn verify_fiducial(f: &CVector, tol: f64) -> Result<FiducialReport> {
    check_unit(f)?;
    let d = f.len() as u64;
    let n = d as usize;
    let kappa = 1.0 / (d as f64 + 1.0);
    let mut dev = 0.0f64;
    let mut objective = 0.0;
    let mut frame = CMatrix::zeros(n, n);
    for a in DispIndex::all(d) {
        let v = displacement(&a).apply(f);
        frame += &v * v.adjoint();
        if !a.is_zero() {
            let o = f.dotc(&v).norm_sqr() - kappa;
            dev = dev.max(o.abs());
            objective += o * o;
        }
    }
    let frame_residual =
        max_abs(&(frame - CMatrix::identity(n, n) * Complex64::new(d as f64, 0.0)));
    Ok(FiducialReport {
        d,
        vector: VectorJson(f.clone()),
        overlap_target: kappa,
        max_equiangular_dev: dev,
        frame_residual,
        objective,
        tol,
        is_sic: dev <= tol,
        symmetry: None,
    })
}

fn spectral_projector(a: &UMatrix, eigval: Phase) -> Result<CMatrix> {
    let n = a.dim();
    if a.pow(3).max_diff(&UMatrix::identity(n)) > a.tolerance() {
        return Err(Error::NotOrderThree(
            a.pow(3).max_diff(&UMatrix::identity(n)),
        ));
    }
    if eigval.pow(3) != Phase::ONE {
        return Err(Error::InvalidParameters(format!(
            "{eigval} is not a cube root of unity"
        )));
    }
    let w = eigval.inv().to_complex();
    let p = (CMatrix::identity(n, n) + a.matrix() * w + a.pow(2).matrix() * (w * w))
        * Complex64::new(1.0 / 3.0, 0.0);
    if p.trace().re < 0.5 {
        return Err(Error::EmptyEigenspace);
    }
    Ok(p)
}

/// Orthogonal projection onto `ker(A − eigval)` for `A³ = I`, through the
/// exact spectral projector `(1/3) Σ_t (eigval⁻¹ A)^t`.
pub fn project_to_eigenspace(a: &UMatrix, eigval: Phase, v: &CVector) -> Result<CVector> {
    Ok(spectral_projector(a, eigval)? * v)
}

/// Orthonormal basis of the `eigval` eigenspace of `A` (`A³ = I`) as columns.
pub fn eigenspace_basis(a: &UMatrix, eigval: Phase) -> Result<CMatrix> {
    let p = spectral_projector(a, eigval)?;
    let n = p.nrows();
    let eig = SymmetricEigen::new(p);
    let cols: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    Ok(CMatrix::from_fn(n, cols.len(), |r, c| {
        eig.eigenvectors[(r, cols[c])]
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOptions {
    pub seed: u64,
    /// Gradient iterations per restart.
    pub budget: usize,
    pub restarts: usize,
    /// Search the `ω₃^eigen_index` eigenspace of the canonical variant.
    pub eigen_index: u8,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seed: 0,
            budget: 5000,
            restarts: 64,
            eigen_index: 0,
        }
    }
}

/// Objective on the coefficient sphere `f = Q c`.
struct Objective {
    g: Vec<CMatrix>,
    kappa: f64,
}

impl Objective {
    fn new(q: &CMatrix, d: u64) -> Self {
        let qh = q.adjoint();
        let g = DispIndex::all(d)
            .filter(|a| !a.is_zero())
            .map(|a| &qh * displacement(&a).matrix() * q)
            .collect();
        Objective {
            g,
            kappa: 1.0 / (d as f64 + 1.0),
        }
    }

    fn value(&self, c: &CVector) -> f64 {
        self.g
            .iter()
            .map(|g| {
                let o = c.dotc(&(g * c)).norm_sqr() - self.kappa;
                o * o
            })
            .sum()
    }

    /// Value and Riemannian gradient.
    fn value_grad(&self, c: &CVector) -> (f64, CVector) {
        let mut val = 0.0;
        let mut grad = CVector::zeros(c.len());
        for g in &self.g {
            let gc = g * c;
            let ghc = g.adjoint() * c;
            let z = c.dotc(&gc);
            let o = z.norm_sqr() - self.kappa;
            val += o * o;
            grad += (gc * z.conj() + ghc * z) * Complex64::new(4.0 * o, 0.0);
        }
        let radial = c.dotc(&grad).re;
        grad -= c * Complex64::new(radial, 0.0);
        (val, grad)
    }
}

impl Objective {
    /// Residuals `|⟨c|G_a c⟩|² − κ` and their Jacobian in the real
    /// coordinates `(Re c, Im c)`.
    fn residual_jacobian(&self, c: &CVector) -> (DVector<f64>, DMatrix<f64>) {
        let r = c.len();
        let mut res = DVector::zeros(self.g.len());
        let mut jac = DMatrix::zeros(self.g.len(), 2 * r);
        for (row, g) in self.g.iter().enumerate() {
            let u = g * c;
            let w = g.adjoint() * c;
            let z = c.dotc(&u);
            res[row] = z.norm_sqr() - self.kappa;
            let i = Complex64::new(0.0, 1.0);
            for k in 0..r {
                let dre = u[k] + w[k].conj();
                let dim = -i * u[k] + i * w[k].conj();
                jac[(row, k)] = 2.0 * (z.conj() * dre).re;
                jac[(row, r + k)] = 2.0 * (z.conj() * dim).re;
            }
        }
        (res, jac)
    }

    /// Gauss–Newton steps from the end of gradient descent. Where the zero
    /// set is a manifold (d = 3) plain descent stalls at a linear rate.
    fn polish(&self, mut c: CVector, mut val: f64) -> (f64, CVector) {
        if val > 1e-6 {
            return (val, c);
        }
        let r = c.len();
        for _ in 0..POLISH_STEPS {
            if val < 1e-28 {
                break;
            }
            let (res, jac) = self.residual_jacobian(&c);
            let Ok(step) = jac.svd(true, true).solve(&(-res), 1e-10) else {
                break;
            };
            let mut trial = CVector::from_fn(r, |k, _| c[k] + Complex64::new(step[k], step[r + k]));
            trial /= Complex64::new(trial.norm(), 0.0);
            let tv = self.value(&trial);
            if tv >= val {
                break;
            }
            (c, val) = (trial, tv);
        }
        (val, c)
    }
}

const POLISH_STEPS: usize = 20;

fn descend(obj: &Objective, mut c: CVector, budget: usize) -> (f64, CVector) {
    let mut step = 0.1;
    let (mut val, mut grad) = obj.value_grad(&c);
    for _ in 0..budget {
        let gn = grad.norm_squared();
        if val < 1e-28 || gn < 1e-30 {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let mut trial = &c - &grad * Complex64::new(step, 0.0);
            trial /= Complex64::new(trial.norm(), 0.0);
            let tv = obj.value(&trial);
            if tv <= val - 1e-4 * step * gn {
                c = trial;
                step *= 2.0;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        (val, grad) = obj.value_grad(&c);
    }
    obj.polish(c, val)
}

fn random_unit(r: usize, rng: &mut ChaCha8Rng) -> CVector {
    let v = CVector::from_fn(r, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

fn restart_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 step keeps per-restart streams independent of the chunking
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const CHUNK: usize = 8;

/// Minimizes the squared overlap deviation over unit vectors in the chosen
/// eigenspace of the canonical order-three variant of `A_M` (whole sphere
/// without `M`). Restarts run in parallel chunks; the best result is the
/// one with the smallest objective, then the smallest restart index.
pub fn search_fiducial(
    d: u64,
    m: Option<&SympMat>,
    opts: &SearchOptions,
) -> Result<FiducialReport> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if d > MAX_SEARCH_DIM {
        return Err(Error::InvalidParameters(format!(
            "search is limited to d <= {MAX_SEARCH_DIM}"
        )));
    }
    if opts.eigen_index > 2 {
        return Err(Error::InvalidParameters(
            "eigenspace index must lie in 0..=2".into(),
        ));
    }
    let n = d as usize;
    let eigval = Phase::omega3().pow(opts.eigen_index as i64);
    let (q, sym) = match m {
        Some(m) => {
            if m.modulus() != dbar(d) {
                return Err(Error::ModulusMismatch {
                    expected: dbar(d),
                    got: m.modulus(),
                });
            }
            let lift = canonical_lift(m, d)?;
            let a = normalize_order3(&symplectic_unitary(&lift, d)?)?
                .canonical_variant()
                .clone();
            (eigenspace_basis(&a, eigval)?, Some((*m, a)))
        }
        None => (CMatrix::identity(n, n), None),
    };
    if q.ncols() == 0 {
        return Err(Error::EmptyEigenspace);
    }
    let obj = Objective::new(&q, d);
    let mut best: Option<(f64, usize, CVector)> = None;
    let mut start = 0;
    while start < opts.restarts.max(1) {
        let end = (start + CHUNK).min(opts.restarts.max(1));
        let results: Vec<(f64, usize, CVector)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(opts.seed, i));
                let c0 = random_unit(q.ncols(), &mut rng);
                let (v, c) = descend(&obj, c0, opts.budget);
                (v, i, c)
            })
            .collect();
        for r in results {
            if best.as_ref().is_none_or(|b| (r.0, r.1) < (b.0, b.1)) {
                best = Some(r);
            }
        }
        if best.as_ref().is_some_and(|b| b.0 < 1e-20) {
            break;
        }
        start = end;
    }
    let (_, _, c) = best.expect("at least one restart");
    let mut f = &q * c;
    let norm = f.norm();
    f /= Complex64::new(norm, 0.0);
    let mut report = verify_fiducial(&f, SEARCH_TOL)?;
    if let Some((m, a)) = sym {
        let residual = (a.apply(&f) - &f * eigval.to_complex()).norm();
        report.symmetry = Some(Symmetry {
            m,
            eigenvalue: eigval,
            residual,
        });
    }
    Ok(report)
}

/// A density matrix with its SIC probabilities `p_i = tr(ρ M_i)`,
/// `M_i = (1/d)|v_i⟩⟨v_i|`.
#[derive(Clone, Debug, Serialize)]
pub struct PovmState {
    pub rho: UMatrix,
    pub probabilities: Vec<f64>,
}

/// SIC probabilities of `rho` for the orbit of `f`.
pub fn povm_probabilities(rho: &UMatrix, f: &CVector) -> Result<PovmState> {
    let orbit = wh_orbit(f)?;
    let d = f.len();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: rho.dim(),
        });
    }
    let tr = rho.trace();
    if (tr - 1.0).norm() > 1e-10 || rho.max_diff(&rho.adjoint()) > 1e-10 {
        return Err(Error::InvalidParameters(
            "density matrix must be Hermitian with unit trace".into(),
        ));
    }
    let probabilities = orbit
        .iter()
        .map(|v| v.dotc(&rho.apply(v)).re / d as f64)
        .collect();
    Ok(PovmState {
        rho: rho.clone(),
        probabilities,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub rho: UMatrix,
    pub condition_number: f64,
    /// `max_i |tr(ρ M_i) − p_i|` for the returned `ρ`.
    pub residual: f64,
}

/// Solves `tr(ρ M_i) = p_i` for `ρ` by SVD of the `d² × d²` system.
pub fn reconstruct_state(probabilities: &[f64], f: &CVector) -> Result<Reconstruction> {
    let check = verify_fiducial(f, SEARCH_TOL)?;
    if !check.is_sic {
        return Err(Error::NotSic(check.max_equiangular_dev));
    }
    let d = f.len();
    let dd = d * d;
    if probabilities.len() != dd {
        return Err(Error::DimensionMismatch {
            expected: dd,
            got: probabilities.len(),
        });
    }
    let orbit = wh_orbit(f)?;
    let scale = 1.0 / d as f64;
    // row i, column (r, s): coefficient of ρ[r][s] in tr(ρ M_i)
    let sys = CMatrix::from_fn(dd, dd, |i, col| {
        let (r, s) = (col / d, col % d);
        orbit[i][s] * orbit[i][r].conj() * scale
    });
    let rhs = CVector::from_iterator(dd, probabilities.iter().map(|&p| Complex64::new(p, 0.0)));
    let svd = SVD::new(sys.clone(), true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| {
        (hi.max(s), lo.min(s))
    });
    let condition_number = smax / smin;
    let x = svd
        .solve(&rhs, 1e-12 * smax)
        .map_err(|e| Error::Verification(e.to_string()))?;
    let residual = (sys * &x - rhs).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let rho = UMatrix::from_fn(d, |r, s| x[r * d + s]);
    Ok(Reconstruction {
        rho,
        condition_number,
        residual,
    })
}
