//! Projective unitary representations of the triangle group Δ(3,3,3).
//!
//! A representation is a triple `(A, B, C)` with `A³ = B³ = C³ = I` and
//! `ABC = λI`. Writing `U = A²B`, `V = ABA`, `W = BA²` gives a triple with
//! `UV = μVU`, `VW = μWV`, `WU = μUW`, `UVW = μI`, `WVU = I` where `μ = λ³`.
//! The irreducible `(U, V, W)` are `(αZ^k, βX, γD_{(−1,−k)})` with
//! `αβγ = τ^k`, and `A` permutes three copies of them cyclically.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{self, decompose, intertwiner_dimension, DEFAULT_SEED};
use crate::clifford::{normalize_order3, zauner_k};
use crate::error::{Error, Result};
use crate::matrix::{max_abs, CMatrix, UMatrix, ZERO};
use crate::modring::{gcd, rem};
use crate::phase::Phase;
use crate::whgroup::{clock, displacement_lift, shift};

/// Tolerance on scalar constraints between user-supplied parameters.
pub const PARAM_TOL: f64 = 1e-9;

/// Tolerance when comparing `d`-th powers, which amplify argument error by `d`.
pub const SINGULAR_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    Generic3d,
    Singular { j: u8, l: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriRepParams {
    pub d: u64,
    pub k: i64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub lambda: Complex64,
    pub variant: Variant,
}

fn unit_check(name: &str, z: Complex64) -> Result<()> {
    if (z.norm() - 1.0).abs() > PARAM_TOL {
        return Err(Error::InvalidParameters(format!(
            "{name} = {z} is not a unit scalar"
        )));
    }
    Ok(())
}

impl TriRepParams {
    pub fn new(
        d: u64,
        k: i64,
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        lambda: Complex64,
    ) -> Result<Self> {
        let p = TriRepParams {
            d,
            k,
            alpha,
            beta,
            gamma,
            lambda,
            variant: Variant::Generic3d,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters from exact phases, with `γ = τ^k/(αβ)` and the principal
    /// cube root `λ` of `ω^k`.
    pub fn from_phases(d: u64, k: i64, alpha: Phase, beta: Phase) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        let gamma = Phase::tau(d).pow(k) / (alpha * beta);
        let lambda = Phase::omega(d).pow(k).principal_root(3);
        Self::new(
            d,
            k,
            alpha.to_complex(),
            beta.to_complex(),
            gamma.to_complex(),
            lambda.to_complex(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::ZeroDimension);
        }
        if gcd(rem(self.k, self.d), self.d) != 1 {
            return Err(Error::NotInvertible {
                value: self.k,
                modulus: self.d,
            });
        }
        for (name, z) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("lambda", self.lambda),
        ] {
            unit_check(name, z)?;
        }
        let tk = Phase::tau(self.d).pow(self.k).to_complex();
        let prod = self.alpha * self.beta * self.gamma;
        if (prod - tk).norm() > PARAM_TOL {
            return Err(Error::InvalidParameters(format!(
                "alpha*beta*gamma = {prod} differs from tau^k = {tk}"
            )));
        }
        if (self.lambda.powu(3) - self.mu()).norm() > PARAM_TOL {
            return Err(Error::InvalidParameters(format!(
                "lambda^3 differs from omega^k = {}",
                self.mu()
            )));
        }
        Ok(())
    }

    /// μ = ω^k.
    pub fn mu(&self) -> Complex64 {
        Phase::omega(self.d).pow(self.k).to_complex()
    }

    pub fn powers(&self) -> [Complex64; 3] {
        let d = self.d as i32;
        [self.alpha.powi(d), self.beta.powi(d), self.gamma.powi(d)]
    }
}

/// `(αZ^k, βX, γD_{(−1,−k)})`.
pub fn uvw_irrep(p: &TriRepParams) -> Result<(UMatrix, UMatrix, UMatrix)> {
    p.validate()?;
    let d = p.d;
    let u = clock(d).pow(rem(p.k, d) as u32).scale(p.alpha);
    let v = shift(d).scale(p.beta);
    let w = displacement_lift(-1, -p.k, d).scale(p.gamma);
    Ok((u, v, w))
}

/// A representation together with its derived `(U, V, W)` triple.
#[derive(Clone, Debug)]
pub struct TriRep {
    pub a: UMatrix,
    pub b: UMatrix,
    pub c: UMatrix,
    pub u: UMatrix,
    pub v: UMatrix,
    pub w: UMatrix,
    pub lambda: Complex64,
    pub mu: Complex64,
    pub params: Option<TriRepParams>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Residuals {
    pub a_cubed: f64,
    pub b_cubed: f64,
    pub c_cubed: f64,
    pub abc: f64,
    pub uv: f64,
    pub vw: f64,
    pub wu: f64,
    pub uvw: f64,
    pub wvu: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        [
            self.a_cubed,
            self.b_cubed,
            self.c_cubed,
            self.abc,
            self.uv,
            self.vw,
            self.wu,
            self.uvw,
            self.wvu,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn scalar_residual(m: &UMatrix, c: Complex64) -> f64 {
    let n = m.dim();
    max_abs(&(m.matrix() - CMatrix::identity(n, n) * c))
}

impl TriRep {
    /// Derives `U = A²B`, `V = ABA`, `W = BA²` and `μ = λ³`.
    pub fn from_generators(
        a: UMatrix,
        b: UMatrix,
        c: UMatrix,
        lambda: Complex64,
        params: Option<TriRepParams>,
    ) -> Result<Self> {
        crate::matrix::check_square_same(&[&a, &b, &c])?;
        let a2 = a.pow(2);
        let u = &a2 * &b;
        let v = &(&a * &b) * &a;
        let w = &b * &a2;
        Ok(TriRep {
            a,
            b,
            c,
            u,
            v,
            w,
            lambda,
            mu: lambda.powu(3),
            params,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn residuals(&self) -> Residuals {
        let id = Complex64::new(1.0, 0.0);
        let mu = self.mu;
        let comm = |x: &UMatrix, y: &UMatrix| max_abs(&((x * y).matrix() - (y * x).matrix() * mu));
        Residuals {
            a_cubed: scalar_residual(&self.a.pow(3), id),
            b_cubed: scalar_residual(&self.b.pow(3), id),
            c_cubed: scalar_residual(&self.c.pow(3), id),
            abc: scalar_residual(&(&(&self.a * &self.b) * &self.c), self.lambda),
            uv: comm(&self.u, &self.v),
            vw: comm(&self.v, &self.w),
            wu: comm(&self.w, &self.u),
            uvw: scalar_residual(&(&(&self.u * &self.v) * &self.w), mu),
            wvu: scalar_residual(&(&(&self.w * &self.v) * &self.u), id),
        }
    }

    pub fn generators(&self) -> [&UMatrix; 3] {
        [&self.a, &self.b, &self.c]
    }
}

fn block_matrix(blocks: [[Option<&UMatrix>; 3]; 3], d: usize) -> UMatrix {
    let mut m = CMatrix::from_element(3 * d, 3 * d, ZERO);
    for (r, row) in blocks.iter().enumerate() {
        for (c, blk) in row.iter().enumerate() {
            if let Some(b) = blk {
                m.view_mut((r * d, c * d), (d, d)).copy_from(b.matrix());
            }
        }
    }
    UMatrix::from_matrix(m)
}

/// The 3d-dimensional representation built from one `(U, V, W)` irrep.
pub fn abc_rep_3d(p: &TriRepParams) -> Result<TriRep> {
    if p.variant != Variant::Generic3d {
        return Err(Error::InvalidParameters(
            "3d construction takes generic parameters".into(),
        ));
    }
    let (u, v, w) = uvw_irrep(p)?;
    let d = p.d as usize;
    let id = UMatrix::identity(d);
    let a = block_matrix(
        [
            [None, None, Some(&id)],
            [Some(&id), None, None],
            [None, Some(&id), None],
        ],
        d,
    );
    let b = block_matrix(
        [
            [None, None, Some(&w)],
            [Some(&u), None, None],
            [None, Some(&v), None],
        ],
        d,
    );
    let (uh, vh, wh) = (u.adjoint(), v.adjoint(), w.adjoint());
    let c = block_matrix(
        [
            [None, None, Some(&uh)],
            [Some(&vh), None, None],
            [None, Some(&wh), None],
        ],
        d,
    )
    .scale(p.lambda);
    TriRep::from_generators(a, b, c, p.lambda, Some(*p))
}

/// `(−1)^{k(d−1)} · ω₃^l`, the common `d`-th power at singular point `l`.
pub fn singular_power(d: u64, k: i64, l: u8) -> Phase {
    Phase::new(k * (d as i64 - 1), 2) * Phase::omega3().pow(l as i64)
}

/// Index `l` of the singular point when `α^d = β^d = γ^d`.
pub fn is_singular(p: &TriRepParams) -> Option<u8> {
    let [x, y, z] = p.powers();
    if (x - y).norm() > SINGULAR_TOL || (y - z).norm() > SINGULAR_TOL {
        return None;
    }
    (0..3u8).find(|&l| (x - singular_power(p.d, p.k, l).to_complex()).norm() <= SINGULAR_TOL)
}

/// Exact singular parameters `(a, b2)` with `α = β = a`, `γ = a·ω^{−b2}`
/// and `a^d = (−1)^{k(d−1)} ω₃^l`.
///
/// When `3 ∤ d`, `a` is the cube root of `τ^k` with the right `d`-th power
/// and `b2 = 0`. When `3 | d` no cube root of `τ^k` reaches every `l`, so
/// `a` is the principal `d`-th root and `ω^{b2} = a³τ^{−k}`.
fn singular_scalars(d: u64, k: i64, l: u8) -> (Phase, u64) {
    let target = singular_power(d, k, l);
    let tk = Phase::tau(d).pow(k);
    if !d.is_multiple_of(3) {
        let a = (0..3)
            .map(|b| tk.root(3, b))
            .find(|a| a.pow(d as i64) == target)
            .expect("cube roots of tau^k cover all three singular powers");
        (a, 0)
    } else {
        let a = target.principal_root(d);
        let c = a.pow(3) / tk;
        debug_assert_eq!(d as i64 % c.den(), 0);
        (a, (c.num() * (d as i64 / c.den())) as u64)
    }
}

/// The `d`-dimensional irreducible representation at singular point `l` with
/// `A = ω₃^j · (Z^{b2} 𝔷_k)`, `B = AU`, `C = λU†A`.
pub fn abc_rep_singular(d: u64, k: i64, j: u8, l: u8) -> Result<TriRep> {
    if j > 2 || l > 2 {
        return Err(Error::InvalidParameters(format!(
            "j = {j}, l = {l} must lie in 0..=2"
        )));
    }
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let (a_s, b2) = singular_scalars(d, k, l);
    let tk = Phase::tau(d).pow(k);
    let gamma = tk / (a_s * a_s);
    let lambda = Phase::omega(d).pow(k).principal_root(3);
    let mut params = TriRepParams::new(
        d,
        k,
        a_s.to_complex(),
        a_s.to_complex(),
        gamma.to_complex(),
        lambda.to_complex(),
    )?;
    params.variant = Variant::Singular { j, l };
    let (u, _, _) = uvw_irrep(&params)?;
    let zk = zauner_k(d, k)?;
    let shifted = &clock(d).pow(b2 as u32) * &zk;
    let base = normalize_order3(&shifted)?.principal().clone();
    let a = base.scale(Phase::omega3().pow(j as i64).to_complex());
    let b = &a * &u;
    let c = (&u.adjoint() * &a).scale(params.lambda);
    TriRep::from_generators(a, b, c, params.lambda, Some(params))
}

/// A singular point found on the `(α^d, β^d)` grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularPoint {
    pub l: u8,
    pub params: TriRepParams,
}

/// Scans `α^d, β^d` over the `3d` points `(−1)^{k(d−1)} e^{2πi m/(3d)}`,
/// with `γ` fixed by `αβγ = τ^k`, and returns the singular points.
pub fn singular_torus_scan(d: u64, k: i64) -> Result<Vec<SingularPoint>> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let res = 3 * d as i64;
    let sign = Phase::new(k * (d as i64 - 1), 2);
    let mut out = Vec::new();
    for mx in 0..res {
        for my in 0..res {
            let alpha = (sign * Phase::new(mx, res)).principal_root(d);
            let beta = (sign * Phase::new(my, res)).principal_root(d);
            let p = TriRepParams::from_phases(d, k, alpha, beta)?;
            if let Some(l) = is_singular(&p) {
                out.push(SingularPoint { l, params: p });
            }
        }
    }
    Ok(out)
}

pub fn commutant_dimension(gens: &[&UMatrix]) -> Result<usize> {
    algebra::commutant_dimension(gens)
}

/// One irreducible block of a `(U, V, W)` triple.
#[derive(Clone, Debug, Serialize)]
pub struct UvwBlock {
    #[serde(skip)]
    pub basis: CMatrix,
    pub dim: usize,
    /// `(U^{d'}, V^{d'}, W^{d'})` on the block, each a scalar.
    pub powers: [Complex64; 3],
    pub singular: bool,
}

/// Multiplicative order of a root of unity, up to `max`.
fn root_order(z: Complex64, max: usize) -> Option<usize> {
    (1..=max).find(|&m| (z.powu(m as u32) - 1.0).norm() < SINGULAR_TOL)
}

fn sort_key(p: &[Complex64; 3]) -> [i64; 3] {
    p.map(|z| {
        let t = z.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU;
        ((t * 1e6).round() as i64) % 1_000_000
    })
}

/// Splits a `(U, V, W)` triple into irreducible blocks, each of dimension
/// equal to the order `d'` of `μ`, and reports `(U^{d'}, V^{d'}, W^{d'})`.
pub fn decompose_uvw(u: &UMatrix, v: &UMatrix, w: &UMatrix, seed: u64) -> Result<Vec<UvwBlock>> {
    crate::matrix::check_square_same(&[u, v, w])?;
    let n = u.dim();
    let (mu, res) = (&(u * v) * w).scalar_part();
    let wvu = scalar_residual(&(&(w * v) * u), Complex64::new(1.0, 0.0));
    let uv = max_abs(&((u * v).matrix() - (v * u).matrix() * mu));
    if res.max(wvu).max(uv) > SINGULAR_TOL {
        return Err(Error::Verification(format!(
            "triple does not satisfy the commutation relations (residual {:e})",
            res.max(wvu).max(uv)
        )));
    }
    let dp = root_order(mu, n).ok_or_else(|| {
        Error::Decomposition(format!(
            "mu = {mu} is not a root of unity of order at most {n}"
        ))
    })?;
    let blocks = decompose(&[u, v, w], seed)?;
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        if b.dim() != dp {
            return Err(Error::Decomposition(format!(
                "irreducible block of dimension {} but mu has order {dp}",
                b.dim()
            )));
        }
        let mut powers = [Complex64::new(0.0, 0.0); 3];
        for (slot, g) in powers.iter_mut().zip(&b.restricted) {
            let (c, r) = g.pow(dp as u32).scalar_part();
            if r > SINGULAR_TOL {
                return Err(Error::Decomposition(format!(
                    "block power is not scalar (residual {r:e})"
                )));
            }
            *slot = c;
        }
        let singular = (powers[0] - powers[1]).norm() < SINGULAR_TOL
            && (powers[1] - powers[2]).norm() < SINGULAR_TOL;
        out.push(UvwBlock {
            dim: b.dim(),
            basis: b.basis,
            powers,
            singular,
        });
    }
    out.sort_by_key(|b| sort_key(&b.powers));
    Ok(out)
}

fn close(a: &[Complex64; 3], b: &[Complex64; 3]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < SINGULAR_TOL)
}

fn multiset_eq<T>(xs: &[T], ys: &[T], eq: impl Fn(&T, &T) -> bool) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut used = vec![false; ys.len()];
    xs.iter().all(
        |x| match (0..ys.len()).find(|&i| !used[i] && eq(x, &ys[i])) {
            Some(i) => {
                used[i] = true;
                true
            }
            None => false,
        },
    )
}

/// `(l, j)` labels of the `d`-dimensional singular `(A, B, C)`-irreducible
/// blocks, found by intertwining `(A, B)` with the reference family.
fn singular_labels(r: &TriRep, seed: u64) -> Result<Vec<(u8, u8)>> {
    let n = r.dim();
    let mu = r.mu;
    let dp = root_order(mu, n)
        .ok_or_else(|| Error::Decomposition("mu is not a root of unity".into()))?;
    let d = dp as u64;
    let k0 = (0..d as i64)
        .find(|&k| (Phase::omega(d).pow(k).to_complex() - mu).norm() < SINGULAR_TOL)
        .expect("mu has order d");
    let mut labels = Vec::new();
    for blk in decompose(&[&r.a, &r.b, &r.c], seed)? {
        if blk.dim() != dp {
            continue;
        }
        let (ab, bb) = (&blk.restricted[0], &blk.restricted[1]);
        let mut found = None;
        'search: for l in 0..3u8 {
            for j in 0..3u8 {
                let reference = abc_rep_singular(d, k0, j, l)?;
                if intertwiner_dimension(&[ab, bb], &[&reference.a, &reference.b])? == 1 {
                    found = Some((l, j));
                    break 'search;
                }
            }
        }
        labels.push(found.ok_or_else(|| {
            Error::Decomposition("d-dimensional block matches no singular representation".into())
        })?);
    }
    labels.sort_unstable();
    Ok(labels)
}

/// Equivalence test via invariants: equal `λ`, equal multisets of block
/// power-triples of `(U, V, W)`, and in singular cases equal `ω₃^j` labels.
pub fn equivalence_invariant(r1: &TriRep, r2: &TriRep) -> Result<bool> {
    if r1.dim() != r2.dim() {
        return Ok(false);
    }
    if (r1.lambda - r2.lambda).norm() > SINGULAR_TOL {
        return Ok(false);
    }
    let b1 = decompose_uvw(&r1.u, &r1.v, &r1.w, DEFAULT_SEED)?;
    let b2 = decompose_uvw(&r2.u, &r2.v, &r2.w, DEFAULT_SEED)?;
    let p1: Vec<_> = b1.iter().map(|b| b.powers).collect();
    let p2: Vec<_> = b2.iter().map(|b| b.powers).collect();
    if !multiset_eq(&p1, &p2, close) {
        return Ok(false);
    }
    if b1.iter().any(|b| b.singular) {
        return Ok(singular_labels(r1, DEFAULT_SEED)? == singular_labels(r2, DEFAULT_SEED)?);
    }
    Ok(true)
}
