use proptest::prelude::*;

use num_complex::Complex64;
use sic333::canonical3::{
    tensor_merge_displacement, tensor_merge_symplectic, tensor_split_displacement,
    tensor_split_symplectic, TensorSplit,
};
use sic333::clifford::{conjugate_displacement, symplectic_unitary, CliffordElem};
use sic333::modring::{
    classify_conjugacy, dbar, enumerate_canonical_order3, prime_conjugator, ScanLimit, SympMat,
};
use sic333::sicfid::{povm_probabilities, reconstruct_state, search_fiducial, SearchOptions};
use sic333::whgroup::{displacement, DispIndex};
use sic333::{CVector, UMatrix};

fn word(n: u64, steps: &[(bool, u32)]) -> SympMat {
    let t = SympMat::new([1, 1, 0, 1], n).unwrap();
    let f = SympMat::fourier(n);
    steps.iter().fold(SympMat::identity(n), |m, &(shear, e)| {
        if shear {
            m * t.pow(e)
        } else {
            m * f
        }
    })
}

fn steps() -> impl Strategy<Value = Vec<(bool, u32)>> {
    prop::collection::vec((any::<bool>(), 1u32..30), 1..16)
}

fn fiducial(d: u64) -> CVector {
    search_fiducial(d, None, &SearchOptions::default())
        .unwrap()
        .vector
        .0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classification_is_conjugation_invariant(
        d in prop::sample::select(vec![5u64, 6, 7, 9, 12]),
        idx in any::<prop::sample::Index>(),
        s in steps(),
    ) {
        let all = enumerate_canonical_order3(d, ScanLimit::default()).unwrap();
        let m = all[idx.index(all.len())];
        let g = word(dbar(d), &s);
        let conj = m.conjugated_by(&g);
        let c1 = classify_conjugacy(&m, d, ScanLimit::default()).unwrap();
        let c2 = classify_conjugacy(&conj, d, ScanLimit::default()).unwrap();
        prop_assert_eq!(c1.class, c2.class);
    }

    #[test]
    fn prime_conjugator_is_exact(
        d in prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23]),
        idx in any::<prop::sample::Index>(),
    ) {
        let all = enumerate_canonical_order3(d, ScanLimit::default()).unwrap();
        let m = all[idx.index(all.len())];
        let s = prime_conjugator(&m, d).unwrap();
        prop_assert!(s.is_symplectic());
        prop_assert_eq!(s * m, SympMat::zauner(d) * s);
    }

    #[test]
    fn symplectic_map_is_projective_homomorphism(
        d in 2u64..=7,
        s1 in steps(),
        s2 in steps(),
    ) {
        let n = dbar(d);
        let (m1, m2) = (word(n, &s1), word(n, &s2));
        let a1 = symplectic_unitary(&m1, d).unwrap();
        let a2 = symplectic_unitary(&m2, d).unwrap();
        let a12 = symplectic_unitary(&(m1 * m2), d).unwrap();
        let (c, res) = (&a1 * &a2).phase_relative_to(&a12);
        prop_assert!(res < 1e-10, "residual {res}");
        prop_assert!((c.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn clifford_action_matches_conjugation(
        d in 2u64..=6,
        s in steps(),
        a1 in 0i64..6,
        a2 in 0i64..6,
    ) {
        let m = word(dbar(d), &s);
        let e = CliffordElem::symplectic(m, d).unwrap();
        let a = DispIndex::new(a1, a2, d);
        let (img, ph) = conjugate_displacement(&e, &a);
        let lhs = e.conjugate_matrix(&displacement(&a)).unwrap();
        let rhs = displacement(&img).scale(ph.to_complex());
        prop_assert!(lhs.max_diff(&rhs) < 1e-10);
    }

    #[test]
    fn tensor_split_then_merge_is_identity(
        pair in prop::sample::select(vec![(5u64, 3u64), (7, 3), (3, 11), (5, 7), (9, 5)]),
        s1 in steps(),
        s2 in steps(),
        x in 0i64..200,
        y in 0i64..200,
    ) {
        let (n1, n2) = pair;
        let split = TensorSplit::new(n1, n2).unwrap();
        let (m1, m2) = (word(n1, &s1), word(n2, &s2));
        let merged = tensor_merge_symplectic(&m1, &m2, &split).unwrap();
        prop_assert_eq!(tensor_split_symplectic(&merged, &split).unwrap(), (m1, m2));
        let a = DispIndex::new(x, y, n1 * n2);
        let (p, q) = tensor_split_displacement(&a, &split).unwrap();
        prop_assert_eq!(tensor_merge_displacement(&p, &q, &split), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reconstruction_is_linear(
        d in 2u64..=4,
        t in 0.0f64..1.0,
        seed_a in prop::collection::vec(-1.0f64..1.0, 32),
        seed_b in prop::collection::vec(-1.0f64..1.0, 32),
    ) {
        let n = d as usize;
        let f = fiducial(d);
        let state = |v: &[f64]| {
            let g = UMatrix::from_fn(n, |i, j| Complex64::new(v[2 * (i * n + j)], v[2 * (i * n + j) + 1]));
            let p = &g * &g.adjoint();
            let tr = p.trace();
            p.scale(Complex64::new(1.0, 0.0) / tr)
        };
        let (ra, rb) = (state(&seed_a), state(&seed_b));
        prop_assume!(ra.trace().norm() > 0.5 && rb.trace().norm() > 0.5);
        let mix = UMatrix::from_matrix(ra.matrix() * Complex64::new(t, 0.0) + rb.matrix() * Complex64::new(1.0 - t, 0.0));
        let pa = povm_probabilities(&ra, &f).unwrap().probabilities;
        let pb = povm_probabilities(&rb, &f).unwrap().probabilities;
        let pm: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| t * x + (1.0 - t) * y).collect();
        let r = reconstruct_state(&pm, &f).unwrap();
        prop_assert!(r.rho.max_diff(&mix) < 1e-8);
    }

    #[test]
    fn sic_is_clifford_covariant(
        d in 2u64..=5,
        s in steps(),
        b1 in 0i64..5,
        b2 in 0i64..5,
    ) {
        let f = fiducial(d);
        let m = word(dbar(d), &s);
        let u = symplectic_unitary(&m, d).unwrap();
        let g = displacement(&DispIndex::new(b1, b2, d)).apply(&u.apply(&f));
        let r = sic333::sicfid::verify_fiducial(&g, 1e-8).unwrap();
        prop_assert!(r.is_sic, "deviation {}", r.max_equiangular_dev);
    }
}
