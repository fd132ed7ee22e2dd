use sic333::canonical3::{abc_from_canonical, tensor_merge_symplectic, TensorSplit};
use sic333::clifford::symplectic_unitary;
use sic333::modring::{
    clifford_trace, enumerate_canonical_order3, is_canonical_order3, ScanLimit, SympMat,
};

#[test]
fn symplectic_certificates_agree_with_dense_unitaries() {
    let mut checked = 0;
    for d in 2..=8u64 {
        for m in enumerate_canonical_order3(d, ScanLimit::default()).unwrap() {
            let (_, analysis) = abc_from_canonical(&m, d).unwrap();
            let Some(cert) = analysis.conjugacy else {
                continue;
            };
            let s = symplectic_unitary(&cert.certificate, d).unwrap();
            let t = symplectic_unitary(&cert.target, d).unwrap();
            let a = symplectic_unitary(&analysis.lift, d).unwrap();
            let conj = &(&s * &t) * &s.adjoint();
            let (c, res) = a.phase_relative_to(&conj);
            assert!(res < 1e-10, "d={d}, {m}: residual {res}");
            assert!((c.norm() - 1.0).abs() < 1e-10);
            checked += 1;
        }
    }
    assert!(checked > 100);
}

fn all_symplectic(n: u64) -> Vec<SympMat> {
    let mut out = Vec::new();
    for a in 0..n as i64 {
        for b in 0..n as i64 {
            for c in 0..n as i64 {
                for e in 0..n as i64 {
                    if let Ok(m) = SympMat::new([a, b, c, e], n) {
                        if m.det() == 1 {
                            out.push(m);
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn merged_trace_follows_factors() {
    for (n1, n2) in [(5u64, 3u64), (7, 3)] {
        let split = TensorSplit::new(n1, n2).unwrap();
        let d = n1 * n2;
        let left: Vec<SympMat> = all_symplectic(n1)
            .into_iter()
            .filter(|m| m.is_identity() || is_canonical_order3(m, n1))
            .collect();
        let right: Vec<SympMat> = all_symplectic(n2)
            .into_iter()
            .filter(|m| m.is_identity() || is_canonical_order3(m, n2))
            .collect();
        for m1 in &left {
            for m2 in &right {
                let m = tensor_merge_symplectic(m1, m2, &split).unwrap();
                let t = clifford_trace(&m, d).unwrap();
                // the trace reduces to each factor's trace
                assert_eq!(t % n1, m1.trace() % n1);
                assert_eq!(t % n2, m2.trace() % n2);
                // I mod 3 has trace 2 ≡ −1, so it counts as a canonical factor
                let canonical = m1.trace() % n1 == n1 - 1 && m2.trace() % n2 == n2 - 1;
                assert_eq!(is_canonical_order3(&m, d), canonical, "{m1} ⊗ {m2}");
            }
        }
    }
}
