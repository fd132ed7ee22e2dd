//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use sic333::algebra::{decompose, DEFAULT_SEED};
use sic333::canonical3::{
    abc_from_canonical, block_parameters, case_3_3kplus1, tensor_merge_symplectic,
    tensor_split_symplectic, TensorSplit,
};
use sic333::clifford::{symplectic_unitary, zauner};
use sic333::modring::{
    brute_force_conjugate, canonical_lift, classify_conjugacy, clifford_trace, dbar,
    enumerate_canonical_order3, is_prime, prime_conjugator, ConjugacyClass, ScanLimit, SympMat,
};
use sic333::sicfid::{reconstruct_state, search_fiducial, verify_fiducial, SearchOptions};
use sic333::trianglerep::{
    abc_rep_3d, abc_rep_singular, commutant_dimension, decompose_uvw, is_singular,
    singular_torus_scan, TriRepParams,
};
use sic333::whgroup::{clock, displacement_lift, shift};
use sic333::{CVector, Phase, UMatrix};

type M = DMatrix<Complex64>;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cis(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * turns)
}

/// τ^e computed from scratch.
fn tau(d: u64, e: i64) -> Complex64 {
    let two_d = 2 * d as i64;
    cis((d as f64 + 1.0) * e.rem_euclid(two_d) as f64 / two_d as f64)
}

/// D_a|k⟩ = τ^{a1a2 + 2a2k}|k + a1⟩ for the integer pair (a1, a2).
fn oracle_disp(a1: i64, a2: i64, d: u64) -> M {
    let n = d as usize;
    let mut m = M::zeros(n, n);
    for k in 0..d as i64 {
        let row = (k + a1).rem_euclid(d as i64) as usize;
        m[(row, k as usize)] = tau(d, a1 * a2 + 2 * a2 * k);
    }
    m
}

fn max_abs(m: &M) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn scalar_residual(m: &M, c: Complex64) -> f64 {
    let n = m.nrows();
    max_abs(&(m - M::identity(n, n) * c))
}

/// Residual of `x = c·y` for the best unit `c`, and `||c| − 1|`.
fn proportional(x: &M, y: &M) -> (f64, f64) {
    let c = (y.adjoint() * x).trace() / (y.adjoint() * y).trace();
    (max_abs(&(x - y * c)), (c.norm() - 1.0).abs())
}

fn mul2(a: [i64; 4], b: [i64; 4], n: i64) -> [i64; 4] {
    [
        (a[0] * b[0] + a[1] * b[2]).rem_euclid(n),
        (a[0] * b[1] + a[1] * b[3]).rem_euclid(n),
        (a[2] * b[0] + a[3] * b[2]).rem_euclid(n),
        (a[2] * b[1] + a[3] * b[3]).rem_euclid(n),
    ]
}

fn ints(m: &SympMat) -> [i64; 4] {
    m.entries().map(|x| x as i64)
}

/// `S·X·S⁻¹ = Y` checked as `S·X = Y·S` with `det S = 1`.
fn certifies(s: &SympMat, x: &SympMat, y: &SympMat) -> bool {
    let n = s.modulus() as i64;
    let se = ints(s);
    (se[0] * se[3] - se[1] * se[2]).rem_euclid(n) == 1
        && mul2(se, ints(x), n) == mul2(ints(y), se, n)
}

fn random_symp(n: u64, rng: &mut ChaCha8Rng) -> SympMat {
    let t = SympMat::new([1, 1, 0, 1], n).unwrap();
    let f = SympMat::fourier(n);
    let mut m = SympMat::identity(n);
    for _ in 0..24 {
        m = if rng.random_bool(0.5) {
            m * t.pow(rng.random_range(1..=n as u32))
        } else {
            m * f
        };
    }
    m
}

fn random_state(d: usize, rng: &mut ChaCha8Rng) -> M {
    let g = M::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let p = &g * g.adjoint();
    let tr = p.trace();
    p / tr
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=12u64 {
        let di = d as i64;
        let id = M::identity(d as usize, d as usize);
        for a1 in 0..di {
            for a2 in 0..di {
                let da = displacement_lift(a1, a2, d);
                worst = worst.max(max_abs(&(da.matrix() - oracle_disp(a1, a2, d))));
                let neg = displacement_lift(-a1, -a2, d);
                worst = worst.max(max_abs(&(da.adjoint().matrix() - neg.matrix())));
                for b1 in 0..di {
                    for b2 in 0..di {
                        let lhs = da.matrix() * oracle_disp(b1, b2, d);
                        let rhs = oracle_disp(a1 + b1, a2 + b2, d) * tau(d, a2 * b1 - a1 * b2);
                        worst = worst.max(max_abs(&(lhs - rhs)));
                    }
                }
            }
        }
        let (z, x) = (clock(d), shift(d));
        let w = cis(1.0 / d as f64);
        worst = worst.max(max_abs(
            &(z.matrix() * x.matrix() - x.matrix() * z.matrix() * w),
        ));
        worst = worst.max(max_abs(&(z.pow(d as u32).matrix() - &id)));
        worst = worst.max(max_abs(&(x.pow(d as u32).matrix() - &id)));
    }
    ensure(worst <= 1e-10, || format!("residual {worst:.2e}"))?;
    Ok(format!("d=2..12, max residual {worst:.2e}"))
}

fn action_residual(a: &UMatrix, image: impl Fn(i64, i64) -> (i64, i64), d: u64) -> (f64, f64) {
    let (mut res, mut unit) = (0.0f64, 0.0f64);
    let am = a.matrix();
    for a1 in 0..d as i64 {
        for a2 in 0..d as i64 {
            let lhs = am * oracle_disp(a1, a2, d) * am.adjoint();
            let (b1, b2) = image(a1, a2);
            let (r, u) = proportional(&lhs, &oracle_disp(b1, b2, d));
            res = res.max(r);
            unit = unit.max(u);
        }
    }
    (res, unit)
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut res, mut unit) = (0.0f64, 0.0f64);
    for d in 2..=8u64 {
        for _ in 0..50 {
            let m = random_symp(dbar(d), &mut rng);
            let a = symplectic_unitary(&m, d).map_err(|e| e.to_string())?;
            let [m1, m2, m3, m4] = ints(&m);
            let (r, u) = action_residual(&a, |x, y| (m1 * x + m2 * y, m3 * x + m4 * y), d);
            res = res.max(r);
            unit = unit.max(u);
        }
    }
    ensure(res <= 1e-10 && unit <= 1e-10, || {
        format!("residual {res:.2e}, scalar off unit circle by {unit:.2e}")
    })?;
    Ok(format!("350 matrices, max residual {res:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=24u64 {
        let z = zauner(d);
        let id = M::identity(d as usize, d as usize);
        worst = worst.max(max_abs(&(z.pow(3).matrix() - id)));
        let (r, u) = action_residual(&z, |a1, a2| (-a2, a1 - a2), d);
        worst = worst.max(r).max(u);
        let t = clifford_trace(&SympMat::zauner(dbar(d)), d).map_err(|e| e.to_string())?;
        ensure(t == d - 1, || format!("Clifford trace {t} at d={d}"))?;
    }
    ensure(worst <= 1e-10, || format!("residual {worst:.2e}"))?;
    Ok(format!("d=2..24, max residual {worst:.2e}, trace -1"))
}

fn criterion_4() -> Outcome {
    let cases = [(2u64, 1i64), (3, 1), (3, 2), (4, 1), (5, 1), (5, 2), (7, 3)];
    for (d, k) in cases {
        let di = d as i64;
        let scan = singular_torus_scan(d, k).map_err(|e| e.to_string())?;
        let mut classes: Vec<u8> = scan.iter().map(|p| p.l).collect();
        classes.sort_unstable();
        classes.dedup();
        ensure(classes == [0, 1, 2], || {
            format!("(d,k)=({d},{k}): classes {classes:?}")
        })?;
        for p in &scan {
            let q = &p.params;
            let x = q.alpha.powi(di as i32);
            ensure(
                (x - q.beta.powi(di as i32)).norm() < 1e-9
                    && (x - q.gamma.powi(di as i32)).norm() < 1e-9,
                || format!("(d,k)=({d},{k}): scan point is not singular"),
            )?;
        }
        for l in 0..3u8 {
            let p = &scan.iter().find(|p| p.l == l).unwrap().params;
            let rep = abc_rep_3d(p).map_err(|e| e.to_string())?;
            let dim = commutant_dimension(&rep.generators()).map_err(|e| e.to_string())?;
            ensure(dim == 3, || {
                format!("(d,k)=({d},{k}), l={l}: singular commutant {dim}")
            })?;
            let blocks = decompose(&rep.generators(), DEFAULT_SEED).map_err(|e| e.to_string())?;
            ensure(
                blocks.len() == 3 && blocks.iter().all(|b| b.dim() == d as usize),
                || format!("(d,k)=({d},{k}), l={l}: {} blocks", blocks.len()),
            )?;
            for j in 0..3u8 {
                let irr = abc_rep_singular(d, k, j, l).map_err(|e| e.to_string())?;
                let c = commutant_dimension(&irr.generators()).map_err(|e| e.to_string())?;
                ensure(c == 1 && irr.residuals().max() <= 1e-10, || {
                    format!("(d,k)=({d},{k}), j={j}, l={l}: commutant {c}")
                })?;
            }
        }
        let generic =
            TriRepParams::from_phases(d, k, Phase::new(1, 7 * di + 2), Phase::new(3, 11 * di + 5))
                .map_err(|e| e.to_string())?;
        ensure(is_singular(&generic).is_none(), || {
            "generic point is singular".into()
        })?;
        let rep = abc_rep_3d(&generic).map_err(|e| e.to_string())?;
        let dim = commutant_dimension(&rep.generators()).map_err(|e| e.to_string())?;
        ensure(dim == 1, || {
            format!("(d,k)=({d},{k}): generic commutant {dim}")
        })?;
    }
    Ok("7 (d,k) pairs: 3 classes x 3 irreps, generic 1, singular 3".into())
}

fn canonical(d: u64) -> Result<Vec<SympMat>, String> {
    enumerate_canonical_order3(d, ScanLimit::default()).map_err(|e| e.to_string())
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for d in 2..=12u64 {
        let di = d as i64;
        for m in canonical(d)? {
            let lift = canonical_lift(&m, d).map_err(|e| e.to_string())?;
            let [m1, m2, m3, m4] = ints(&lift);
            let a = symplectic_unitary(&lift, d).map_err(|e| e.to_string())?;
            let (am, am2) = (a.matrix().clone(), a.pow(2).matrix().clone());
            for a1 in 0..di {
                for a2 in 0..di {
                    let da = oracle_disp(a1, a2, d);
                    let x1 = &am * &da * am.adjoint();
                    let x2 = &am2 * &da * am2.adjoint();
                    let expect = tau(d, -a1 * a1 * m3 + a1 * a2 * (m1 - m4) + a2 * a2 * m2);
                    worst = worst.max(scalar_residual(&(&da * &x1 * &x2), expect));
                    worst = worst.max(scalar_residual(&(&da * &x2 * &x1), expect.inv()));
                }
            }
            count += 1;
        }
    }
    ensure(worst <= 1e-10, || format!("residual {worst:.2e}"))?;
    Ok(format!(
        "{count} canonical matrices, max residual {worst:.2e}"
    ))
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for d in 2..=12u64 {
        for m in canonical(d)? {
            let (rep, analysis) = abc_from_canonical(&m, d).map_err(|e| e.to_string())?;
            let id = M::identity(d as usize, d as usize);
            let (a, b, c) = (rep.a.matrix(), rep.b.matrix(), rep.c.matrix());
            for g in [a, b, c] {
                worst = worst.max(max_abs(&(g * g * g - &id)));
            }
            worst = worst.max(scalar_residual(&(a * b * c), rep.lambda));
            let m2 = analysis.lift.m2() as f64;
            worst = worst.max((rep.lambda.powi(3) - cis(-m2 / d as f64)).norm());
            count += 1;
        }
    }
    ensure(worst <= 1e-10, || format!("residual {worst:.2e}"))?;
    Ok(format!(
        "{count} canonical matrices, max residual {worst:.2e}"
    ))
}

fn criterion_7() -> Outcome {
    use ConjugacyClass::*;
    let limit = ScanLimit::default();
    for d in [5u64, 6, 7, 9, 11, 12, 15, 21] {
        let expected: Vec<ConjugacyClass> = match d % 9 {
            _ if d % 3 != 0 => vec![Z],
            0 => vec![Z, Z2],
            3 => vec![Z, Z2, M1],
            _ => vec![Z, Z2, M2],
        };
        let mut seen = Vec::new();
        for m in canonical(d)? {
            let c = classify_conjugacy(&m, d, limit).map_err(|e| format!("d={d}, {m}: {e}"))?;
            ensure(
                certifies(&c.certificate, &c.representative, &c.lift),
                || format!("d={d}: bad certificate for {m}"),
            )?;
            ensure(c.lift.reduce(d).ok() == m.reduce(d).ok(), || {
                format!("d={d}: lift of {m}")
            })?;
            if !seen.contains(&c.class) {
                seen.push(c.class);
            }
        }
        seen.sort();
        ensure(seen == expected, || {
            format!("d={d}: classes {seen:?}, expected {expected:?}")
        })?;
    }
    let mut checked = 0usize;
    for d in (5..=23u64).filter(|&d| is_prime(d)) {
        let z = SympMat::zauner(d);
        for m in canonical(d)? {
            let s = prime_conjugator(&m, d).map_err(|e| format!("d={d}, {m}: {e}"))?;
            let brute = brute_force_conjugate(&m, &z, limit)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("d={d}: brute force finds no conjugator for {m}"))?;
            ensure(certifies(&s, &m, &z) && certifies(&brute, &m, &z), || {
                format!("d={d}: certificates disagree for {m}")
            })?;
            // two conjugators differ by an element of the centralizer of M_Z
            let c = s * brute.inverse();
            ensure(certifies(&c, &z, &z), || format!("d={d}: {m}"))?;
            checked += 1;
        }
    }
    Ok(format!(
        "8 class tables match, {checked} prime conjugators verified"
    ))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    let mut coprime = 0usize;
    for d in 2..=12u64 {
        for m in canonical(d)? {
            let (rep, analysis) = abc_from_canonical(&m, d).map_err(|e| e.to_string())?;
            let closed = block_parameters(&m, d, analysis.epsilon).map_err(|e| e.to_string())?;
            let blocks =
                decompose_uvw(&rep.u, &rep.v, &rep.w, DEFAULT_SEED).map_err(|e| e.to_string())?;
            ensure(blocks.len() == closed.len(), || {
                format!(
                    "d={d}, {m}: {} blocks vs {} closed-form",
                    blocks.len(),
                    closed.len()
                )
            })?;
            let mut used = vec![false; blocks.len()];
            for p in &closed {
                let p = p.map(|x| x.to_complex());
                let dist = |b: &sic333::trianglerep::UvwBlock| {
                    (0..3).fold(0.0f64, |acc, i| acc.max((b.powers[i] - p[i]).norm()))
                };
                let (i, gap) = blocks
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !used[*i])
                    .map(|(i, b)| (i, dist(b)))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .unwrap();
                used[i] = true;
                worst = worst.max(gap);
            }
            let m2 = analysis.lift.m2() % d;
            if sic333::modring::gcd(m2, d) == 1 {
                ensure(blocks.len() == 1 && blocks[0].singular, || {
                    format!("d={d}, {m}: coprime m2 should give one singular block")
                })?;
                coprime += 1;
            }
        }
    }
    ensure(worst <= 1e-8, || format!("gap {worst:.2e}"))?;
    Ok(format!(
        "max gap {worst:.2e}, {coprime} coprime cases single-block singular"
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for (n1, n2) in [(5u64, 3u64), (7, 3)] {
        let split = TensorSplit::new(n1, n2).map_err(|e| e.to_string())?;
        let d = n1 * n2;
        for _ in 0..20 {
            let (m1, m2) = (random_symp(n1, &mut rng), random_symp(n2, &mut rng));
            let m = tensor_merge_symplectic(&m1, &m2, &split).map_err(|e| e.to_string())?;
            let back = tensor_split_symplectic(&m, &split).map_err(|e| e.to_string())?;
            ensure(back == (m1, m2), || format!("split of merged {m} differs"))?;
            let a = symplectic_unitary(&m, d).map_err(|e| e.to_string())?;
            let a1 = symplectic_unitary(&m1, n1).map_err(|e| e.to_string())?;
            let a2 = symplectic_unitary(&m2, n2).map_err(|e| e.to_string())?;
            // (A1 ⊗̂ A2)[i, j] = A1[i mod n1, j mod n1] · A2[i mod n2, j mod n2]
            let t = M::from_fn(d as usize, d as usize, |i, j| {
                let (i, j) = (i as u64, j as u64);
                a1.get((i % n1) as usize, (j % n1) as usize)
                    * a2.get((i % n2) as usize, (j % n2) as usize)
            });
            let (r, u) = proportional(a.matrix(), &t);
            worst = worst.max(r).max(u);
        }
    }
    ensure(worst <= 1e-10, || format!("residual {worst:.2e}"))?;
    let case = case_3_3kplus1(21, ScanLimit::default()).map_err(|e| e.to_string())?;
    let expect = SympMat::new([1, 2, 2, 5], 7).unwrap();
    ensure(case.m_prime == expect, || format!("M' = {}", case.m_prime))?;
    ensure(case.all_singular && case.blocks.len() == 3, || {
        "d=21 blocks not all singular".into()
    })?;
    let cert = &case.conjugacy;
    ensure(cert.target == SympMat::zauner_k(-1, 7).unwrap(), || {
        "wrong target".into()
    })?;
    ensure(
        certifies(&cert.certificate, &cert.target, &case.m_prime),
        || "d=21 conjugacy certificate fails".into(),
    )?;
    let block_worst = case.block_residuals.iter().fold(0.0f64, |a, &b| a.max(b));
    ensure(
        case.tensor_residual <= 1e-10 && block_worst <= 1e-10,
        || {
            format!(
                "d=21 residuals {:.2e}, {block_worst:.2e}",
                case.tensor_residual
            )
        },
    )?;
    Ok(format!(
        "40 pairs, max residual {worst:.2e}; d=21 M'=[[1,2],[2,5]] mod 7"
    ))
}

fn fiducial(d: u64) -> Result<CVector, String> {
    let r = search_fiducial(d, None, &SearchOptions::default()).map_err(|e| e.to_string())?;
    Ok(r.vector.0)
}

/// Largest `||⟨f|D_a f⟩|² − 1/(d+1)|` over `a ≠ 0`, from scratch.
fn overlap_deviation(f: &CVector) -> f64 {
    let d = f.len() as u64;
    let target = 1.0 / (d as f64 + 1.0);
    let mut worst = 0.0f64;
    for a1 in 0..d as i64 {
        for a2 in 0..d as i64 {
            if a1 == 0 && a2 == 0 {
                continue;
            }
            let ov = f.dotc(&(oracle_disp(a1, a2, d) * f)).norm_sqr();
            worst = worst.max((ov - target).abs());
        }
    }
    worst
}

fn criterion_10() -> Outcome {
    let mut lines = Vec::new();
    for d in 2..=7u64 {
        let t0 = Instant::now();
        let r = search_fiducial(d, None, &SearchOptions::default()).map_err(|e| e.to_string())?;
        let secs = t0.elapsed().as_secs_f64();
        let dev = overlap_deviation(&r.vector.0);
        let v = verify_fiducial(&r.vector.0, 1e-6).map_err(|e| e.to_string())?;
        ensure(
            dev <= 1e-6 && r.max_equiangular_dev <= 1e-6 && r.frame_residual <= 1e-6 && v.is_sic,
            || format!("d={d}: deviation {dev:.2e}, frame {:.2e}", r.frame_residual),
        )?;
        ensure(
            (v.overlap_target - 1.0 / (d as f64 + 1.0)).abs() < 1e-15,
            || "target".into(),
        )?;
        ensure(secs < 300.0, || format!("d={d}: {secs:.1}s"))?;
        lines.push(format!("d={d} {dev:.1e} {secs:.2}s"));
    }
    Ok(lines.join(", "))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for d in 2..=4u64 {
        let f = fiducial(d)?;
        let n = d as usize;
        for _ in 0..100 {
            let rho = random_state(n, &mut rng);
            // p_a = ⟨f|D_a† ρ D_a|f⟩ / d
            let mut probs = Vec::with_capacity(n * n);
            for a1 in 0..d as i64 {
                for a2 in 0..d as i64 {
                    let g = oracle_disp(a1, a2, d) * &f;
                    probs.push(g.dotc(&(&rho * &g)).re / d as f64);
                }
            }
            let r = reconstruct_state(&probs, &f).map_err(|e| e.to_string())?;
            worst = worst.max(max_abs(&(r.rho.matrix() - &rho)));
        }
    }
    ensure(worst <= 1e-8, || format!("error {worst:.2e}"))?;
    Ok(format!("300 states, max entry error {worst:.2e}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Weyl-Heisenberg relations", criterion_1),
        ("Clifford action", criterion_2),
        ("Zauner unitary", criterion_3),
        ("singular triangle representations", criterion_4),
        ("triple-product lemma", criterion_5),
        ("order-three (A,B,C) construction", criterion_6),
        ("conjugacy classes", criterion_7),
        ("block parameters", criterion_8),
        ("tensor splitting", criterion_9),
        ("SIC search", criterion_10),
        ("reconstruction", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = f();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "[PASS] criterion {:>2} {name}: {detail} ({secs:.1}s)",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "[FAIL] criterion {:>2} {name}: {detail} ({secs:.1}s)",
                    i + 1
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
