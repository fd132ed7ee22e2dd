//! Canonical order-three Clifford unitaries as triangle-group representations.
//!
//! For a canonical `M` (det 1, trace −1) the triple
//! `(A, B, C) = (A_M, ε·A_M·Z, λ·ε⁻¹·Z⁻¹·A_M)` with `ε³ = τ^{−m2}` and
//! `λ³ = ω^{−m2}` represents Δ(3,3,3); its `(U, V, W)` are
//! `(εZ, εD_{(−m2,m1)}, εD_{(m2,m4)})`. All of this is done with the trace −1
//! lift of `M` modulo d̄ (see [`canonical_lift`]).

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{DEFAULT_SEED, MAX_COMMUTANT_DIM};
use crate::clifford::{normalize_order3, symplectic_unitary};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, UMatrix, DEFAULT_TOL};
use crate::modring::{
    brute_force_conjugate, canonical_lift, dbar, gcd, is_canonical_order3, mod_inverse, rem,
    ScanLimit, SympMat,
};
use crate::phase::Phase;
use crate::trianglerep::{decompose_uvw, TriRep};
use crate::whgroup::{displacement, displacement_lift, tau_pow, DispIndex};

fn require_canonical(m: &SympMat, d: u64) -> Result<SympMat> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if m.modulus() != dbar(d) {
        return Err(Error::ModulusMismatch {
            expected: dbar(d),
            got: m.modulus(),
        });
    }
    canonical_lift(m, d)
}

/// `τ^{−a1²m3 + a1a2(m1−m4) + a2²m2}`.
pub fn lemma_closed_form(m: &SympMat, a: &DispIndex) -> Phase {
    let d = a.dim();
    let [m1, m2, m3, m4] = m.entries().map(|x| x as i128);
    let (a1, a2) = (a.a1 as i128, a.a2 as i128);
    let e = -a1 * a1 * m3 + a1 * a2 * (m1 - m4) + a2 * a2 * m2;
    tau_pow(d, e.rem_euclid(2 * d as i128) as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaProduct {
    /// `c` with `D_a · (A D_a A†) · (A² D_a A²†) = c·I`.
    pub scalar: Complex64,
    pub closed_form: Phase,
    /// Scalar of the product taken in reverse order.
    pub reversed: Complex64,
    /// Largest of the non-scalar residual and the two scalar mismatches.
    pub residual: f64,
}

fn lemma_with(a_m: &UMatrix, m: &SympMat, a: &DispIndex) -> Result<LemmaProduct> {
    let da = displacement(a);
    let a2 = a_m.pow(2);
    let f1 = a_m.conjugate_by(&da);
    let f2 = a2.conjugate_by(&da);
    let (c, r1) = (&(&da * &f1) * &f2).scalar_part();
    let (cr, r2) = (&(&f2 * &f1) * &da).scalar_part();
    let closed = lemma_closed_form(m, a);
    let residual = r1
        .max(r2)
        .max((c - closed.to_complex()).norm())
        .max((c * cr - 1.0).norm());
    if r1.max(r2) > DEFAULT_TOL {
        return Err(Error::Verification(format!(
            "triple product is not scalar (residual {:e})",
            r1.max(r2)
        )));
    }
    Ok(LemmaProduct {
        scalar: c,
        closed_form: closed,
        reversed: cr,
        residual,
    })
}

/// Triple-product scalar for one displacement, computed densely.
pub fn lemma_product(m: &SympMat, a: &DispIndex) -> Result<LemmaProduct> {
    let d = a.dim();
    let lift = require_canonical(m, d)?;
    let a_m = symplectic_unitary(&lift, d)?;
    lemma_with(&a_m, &lift, a)
}

/// [`lemma_product`] for every `a ∈ Z_d²`, in row-major order.
pub fn lemma_table(m: &SympMat, d: u64) -> Result<Vec<(DispIndex, LemmaProduct)>> {
    let lift = require_canonical(m, d)?;
    let a_m = symplectic_unitary(&lift, d)?;
    DispIndex::all(d)
        .map(|a| Ok((a, lemma_with(&a_m, &lift, &a)?)))
        .collect()
}

/// `H_i = {i + m2·l mod d}` for `i < n = gcd(m2, d)`, each sorted.
pub fn invariant_subspaces(m2: i64, d: u64) -> Vec<Vec<u64>> {
    let r = rem(m2, d);
    let n = gcd(r, d);
    (0..n)
        .map(|i| {
            let mut h: Vec<u64> = (0..d / n).map(|l| (i + r * l) % d).collect();
            h.sort_unstable();
            h
        })
        .collect()
}

/// Closed-form `(α_i^N, β_i^N, γ_i^N)`, `N = d/n`, for the lift of `M`.
pub fn block_parameters(m: &SympMat, d: u64, epsilon: Phase) -> Result<Vec<[Phase; 3]>> {
    let lift = require_canonical(m, d)?;
    let [m1, m2, _, m4] = lift.entries().map(|x| x as i64);
    if epsilon.pow(3) != Phase::tau(d).pow(-m2) {
        return Err(Error::InvalidParameters(format!(
            "epsilon^3 must equal tau^(-{m2})"
        )));
    }
    let di = d as i64;
    let n = gcd(rem(m2, d), d) as i64;
    let big_n = di / n;
    let q = m2 / n;
    let en = epsilon.pow(big_n);
    let sign = |mx: i64| Phase::new((di - 1) * q * mx * big_n, 2);
    let wn = Phase::omega(n as u64);
    Ok((0..n)
        .map(|i| {
            [
                en * wn.pow(i),
                en * wn.pow(i * m1) * sign(m1),
                en * wn.pow(i * m4) * sign(m4),
            ]
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockInfo {
    pub indices: Vec<u64>,
    pub powers: [Phase; 3],
    pub singular: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyCertificate {
    pub target: SympMat,
    /// `S` with `S · target · S⁻¹` equal to the analysed matrix.
    pub certificate: SympMat,
}

#[derive(Clone, Debug, Serialize)]
pub struct Canon3Analysis {
    pub d: u64,
    #[serde(rename = "M")]
    pub m: SympMat,
    pub lift: SympMat,
    pub n: u64,
    pub epsilon: Phase,
    pub lambda: Phase,
    pub blocks: Vec<BlockInfo>,
    /// Largest gap between the closed-form and the matrix-level block data.
    pub oracle_residual: f64,
    pub conjugacy: Option<ConjugacyCertificate>,
}

fn restrict_to(m: &UMatrix, idx: &[u64]) -> UMatrix {
    let k = idx.len();
    UMatrix::from_matrix(CMatrix::from_fn(k, k, |r, c| {
        m.get(idx[r] as usize, idx[c] as usize)
    }))
}

/// Builds the representation with the principal cube roots `ε`, `λ`.
pub fn abc_from_canonical(m: &SympMat, d: u64) -> Result<(TriRep, Canon3Analysis)> {
    abc_from_canonical_branch(m, d, 0, ScanLimit::from_env())
}

/// As [`abc_from_canonical`] with `ε = τ^{−m2/3} · ω₃^branch`.
pub fn abc_from_canonical_branch(
    m: &SympMat,
    d: u64,
    branch: u8,
    limit: ScanLimit,
) -> Result<(TriRep, Canon3Analysis)> {
    let lift = require_canonical(m, d)?;
    let [m1, m2, _, m4] = lift.entries().map(|x| x as i64);
    let epsilon = Phase::tau(d).pow(-m2).root(3, branch as u64);
    let lambda = Phase::omega(d).pow(-m2).principal_root(3);
    let (eps, lam) = (epsilon.to_complex(), lambda.to_complex());

    let a = normalize_order3(&symplectic_unitary(&lift, d)?)?
        .principal()
        .clone();
    let z = displacement(&DispIndex::new(0, 1, d));
    let u = z.scale(eps);
    let b = &a * &u;
    let c = (&u.adjoint() * &a).scale(lam);
    let rep = TriRep::from_generators(a, b, c, lam, None)?;

    let v_closed = displacement_lift(-m2, m1, d).scale(eps);
    let w_closed = displacement_lift(m2, m4, d).scale(eps);
    let mut oracle = rep.v.max_diff(&v_closed).max(rep.w.max_diff(&w_closed));

    let hs = invariant_subspaces(m2, d);
    let params = block_parameters(&lift, d, epsilon)?;
    let big_n = (d / hs.len() as u64) as u32;
    let mut blocks = Vec::with_capacity(hs.len());
    for (h, p) in hs.into_iter().zip(params) {
        for (g, want) in [&rep.u, &rep.v, &rep.w].iter().zip(p) {
            let (s, r) = restrict_to(g, &h).pow(big_n).scalar_part();
            oracle = oracle.max(r).max((s - want.to_complex()).norm());
        }
        let singular = p[0] == p[1] && p[1] == p[2];
        blocks.push(BlockInfo {
            indices: h,
            powers: p,
            singular,
        });
    }
    if (d as usize) <= MAX_COMMUTANT_DIM {
        oracle = oracle.max(decomposition_gap(&rep, &blocks)?);
    }
    if oracle > 1e-8 {
        return Err(Error::Verification(format!(
            "block parameters disagree with the matrix oracle (gap {oracle:e})"
        )));
    }

    let conjugacy = if blocks.len() == 1 {
        let target = SympMat::zauner_k(-m2, dbar(d))?;
        match brute_force_conjugate(&target, &lift, limit) {
            Ok(Some(s)) => Some(ConjugacyCertificate {
                target,
                certificate: s,
            }),
            Ok(None) => {
                return Err(Error::Verification(format!(
                    "{lift} is not conjugate to {target}"
                )))
            }
            Err(Error::ScaleGuard { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let n = blocks.len() as u64;
    Ok((
        rep,
        Canon3Analysis {
            d,
            m: *m,
            lift,
            n,
            epsilon,
            lambda,
            blocks,
            oracle_residual: oracle,
            conjugacy,
        },
    ))
}

/// Largest distance between the closed-form power triples and the ones
/// extracted by randomized block decomposition of `(U, V, W)`.
pub fn decomposition_gap(rep: &TriRep, blocks: &[BlockInfo]) -> Result<f64> {
    let found = decompose_uvw(&rep.u, &rep.v, &rep.w, DEFAULT_SEED)?;
    if found.len() != blocks.len() {
        return Err(Error::Verification(format!(
            "{} blocks predicted, {} found",
            blocks.len(),
            found.len()
        )));
    }
    let mut used = vec![false; found.len()];
    let mut worst = 0.0f64;
    for b in blocks {
        let want = b.powers.map(|p| p.to_complex());
        let gap = |f: &[Complex64; 3]| {
            f.iter()
                .zip(&want)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max)
        };
        let best = (0..found.len())
            .filter(|&i| !used[i])
            .min_by(|&i, &j| gap(&found[i].powers).total_cmp(&gap(&found[j].powers)))
            .expect("as many found blocks as predicted");
        used[best] = true;
        worst = worst.max(gap(&found[best].powers));
    }
    Ok(worst)
}

/// Coprime factorization `d = n1·n2` with the basis permutation
/// `σ(i) = (i mod n1, i mod n2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TensorSplit {
    pub n1: u64,
    pub n2: u64,
    /// `n1⁻¹ mod n2`.
    pub inv1: u64,
    /// `n2⁻¹ mod n1`.
    pub inv2: u64,
}

impl TensorSplit {
    pub fn new(n1: u64, n2: u64) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n1.is_multiple_of(2) || n2.is_multiple_of(2) || gcd(n1, n2) != 1 {
            return Err(Error::BadTensorFactors { n1, n2 });
        }
        Ok(TensorSplit {
            n1,
            n2,
            inv1: mod_inverse(n1 as i64, n2).expect("coprime"),
            inv2: mod_inverse(n2 as i64, n1).expect("coprime"),
        })
    }

    pub fn dim(&self) -> u64 {
        self.n1 * self.n2
    }

    pub fn sigma(&self, i: u64) -> (u64, u64) {
        (i % self.n1, i % self.n2)
    }

    /// Position of `σ(i)` in the Kronecker basis of `C^{n1} ⊗ C^{n2}`.
    pub fn kron_index(&self, i: u64) -> usize {
        let (x, y) = self.sigma(i);
        (x * self.n2 + y) as usize
    }

    /// `A ⊗̂ B`: the Kronecker product read in the permuted basis.
    pub fn tensor(&self, a: &UMatrix, b: &UMatrix) -> UMatrix {
        let k = a.kron(b);
        let n = self.dim() as usize;
        let idx: Vec<usize> = (0..self.dim()).map(|i| self.kron_index(i)).collect();
        UMatrix::from_fn(n, |r, c| k.get(idx[r], idx[c]))
    }
}

/// `D_{(a,b)} = D_{(a, n2⁻¹b)} ⊗̂ D_{(a, n1⁻¹b)}`.
pub fn tensor_split_displacement(
    a: &DispIndex,
    split: &TensorSplit,
) -> Result<(DispIndex, DispIndex)> {
    if a.dim() != split.dim() {
        return Err(Error::DimensionMismatch {
            expected: split.dim() as usize,
            got: a.dim() as usize,
        });
    }
    let (a1, a2) = a.as_pair();
    Ok((
        DispIndex::new(a1, a2 * split.inv2 as i64, split.n1),
        DispIndex::new(a1, a2 * split.inv1 as i64, split.n2),
    ))
}

/// Inverse of [`tensor_split_displacement`]:
/// `(p, q), (r, s) ↦ (p·n2·n2⁻¹ + r·n1·n1⁻¹, q·n2 + s·n1)`.
pub fn tensor_merge_displacement(x: &DispIndex, y: &DispIndex, split: &TensorSplit) -> DispIndex {
    let (p, q) = x.as_pair();
    let (r, s) = y.as_pair();
    let (n1, n2) = (split.n1 as i64, split.n2 as i64);
    let (i1, i2) = (split.inv1 as i64, split.inv2 as i64);
    DispIndex::new(p * n2 * i2 + r * n1 * i1, q * n2 + s * n1, split.dim())
}

fn check_factor(m: &SympMat, n: u64) -> Result<()> {
    if m.modulus() != n {
        return Err(Error::ModulusMismatch {
            expected: n,
            got: m.modulus(),
        });
    }
    if !m.is_symplectic() {
        return Err(Error::AntiSymplectic);
    }
    Ok(())
}

/// `M = n2·diag(n2⁻¹,1)·M′·diag(1,n2⁻¹) + n1·diag(n1⁻¹,1)·M″·diag(1,n1⁻¹)`.
pub fn tensor_merge_symplectic(m1: &SympMat, m2: &SympMat, split: &TensorSplit) -> Result<SympMat> {
    check_factor(m1, split.n1)?;
    check_factor(m2, split.n2)?;
    let part = |m: &SympMat, n: i64, inv: i64| {
        let [a, b, c, d] = m.entries().map(|x| x as i64);
        [n * inv * a, n * inv * inv * b, n * c, n * inv * d]
    };
    let p = part(m1, split.n2 as i64, split.inv2 as i64);
    let q = part(m2, split.n1 as i64, split.inv1 as i64);
    SympMat::new(
        [p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]],
        split.dim(),
    )
}

/// Inverse of [`tensor_merge_symplectic`].
pub fn tensor_split_symplectic(m: &SympMat, split: &TensorSplit) -> Result<(SympMat, SympMat)> {
    check_factor(m, split.dim())?;
    let part = |n: u64, other: u64, inv: u64| {
        let r = m.reduce(n)?;
        let [a, b, c, d] = r.entries().map(|x| x as i64);
        SympMat::new([a, b * other as i64, c * inv as i64, d], n)
    };
    Ok((
        part(split.n1, split.n2, split.inv2)?,
        part(split.n2, split.n1, split.inv1)?,
    ))
}

/// `‖A_M − c·(A_{M′} ⊗̂ A_{M″})‖_max` minimized over the unit scalar `c`.
pub fn tensor_residual(
    m: &SympMat,
    m1: &SympMat,
    m2: &SympMat,
    split: &TensorSplit,
) -> Result<f64> {
    let a = symplectic_unitary(m, split.dim())?;
    let t = split.tensor(
        &symplectic_unitary(m1, split.n1)?,
        &symplectic_unitary(m2, split.n2)?,
    );
    Ok(a.phase_relative_to(&t).1)
}

/// Report for `M = [[1, 3], [(d−3)/3, −2]]` in dimension `d = 3(3k+1)`.
#[derive(Clone, Debug, Serialize)]
pub struct Case33Report {
    pub d: u64,
    pub k: u64,
    #[serde(rename = "M")]
    pub m: SympMat,
    pub m_prime: SympMat,
    pub m_double_prime: SympMat,
    pub epsilon: Phase,
    pub blocks: Vec<BlockInfo>,
    pub all_singular: bool,
    pub conjugacy: ConjugacyCertificate,
    /// `A_M ∝ A_{M′} ⊗̂ I₃`.
    pub tensor_residual: f64,
    /// `A_M` restricted to each `H_i` against `A_{M′}`, up to phase.
    pub block_residuals: Vec<f64>,
}

pub fn case_3_3kplus1(d: u64, limit: ScanLimit) -> Result<Case33Report> {
    if d <= 3 || d.is_multiple_of(2) || d % 9 != 3 {
        return Err(Error::NotInFamily(d));
    }
    let k = (d / 3 - 1) / 3;
    let di = d as i64;
    let m = SympMat::new([1, 3, (di - 3) / 3, -2], d)?;
    if !is_canonical_order3(&m, d) {
        return Err(Error::Verification(format!("{m} is not canonical")));
    }
    let split = TensorSplit::new(d / 3, 3)?;
    let (mp, mpp) = tensor_split_symplectic(&m, &split)?;
    let epsilon = Phase::tau(d).inv();
    let powers = block_parameters(&m, d, epsilon)?;
    let blocks: Vec<BlockInfo> = invariant_subspaces(3, d)
        .into_iter()
        .zip(powers)
        .map(|(h, p)| BlockInfo {
            indices: h,
            powers: p,
            singular: p[0] == p[1] && p[1] == p[2],
        })
        .collect();
    let all_singular = blocks.iter().all(|b| b.singular);

    let target = SympMat::zauner_k(-1, d / 3)?;
    let certificate = brute_force_conjugate(&target, &mp, limit)?
        .ok_or_else(|| Error::Verification(format!("{mp} is not conjugate to {target}")))?;

    let tensor_res = tensor_residual(&m, &mp, &mpp, &split)?;
    let a = symplectic_unitary(&m, d)?;
    let ap = symplectic_unitary(&mp, d / 3)?;
    let block_residuals = blocks
        .iter()
        .map(|b| {
            // order H_i by the first tensor factor's index j mod d/3
            let mut idx = b.indices.clone();
            idx.sort_by_key(|j| j % (d / 3));
            restrict_to(&a, &idx).phase_relative_to(&ap).1
        })
        .collect();

    Ok(Case33Report {
        d,
        k,
        m,
        m_prime: mp,
        m_double_prime: mpp,
        epsilon,
        blocks,
        all_singular,
        conjugacy: ConjugacyCertificate {
            target,
            certificate,
        },
        tensor_residual: tensor_res,
        block_residuals,
    })
}
