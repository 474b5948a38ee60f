//! Property tests for the algebraic invariants that hold on all inputs, not
//! just the bundled examples.

use nalgebra::DMatrix;
use proptest::prelude::*;

use spectrahedra::hadamard;
use spectrahedra::linalg;
use spectrahedra::pencil::SymmetricPencil;
use spectrahedra::perron;
use spectrahedra::sampling::SplitMix64;
use spectrahedra::Tolerances;

fn entry() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

/// Random symmetric pencil of size m over R^k, built from upper triangles.
fn pencil(m: usize, k: usize) -> impl Strategy<Value = SymmetricPencil> {
    let tri = m * (m + 1) / 2;
    proptest::collection::vec(entry(), tri * (k + 1)).prop_map(move |vals| {
        let mut mats = Vec::with_capacity(k + 1);
        let mut it = vals.into_iter();
        for _ in 0..=k {
            let mut mat = DMatrix::zeros(m, m);
            for i in 0..m {
                for j in i..m {
                    let v = it.next().unwrap();
                    mat[(i, j)] = v;
                    mat[(j, i)] = v;
                }
            }
            mats.push(mat);
        }
        let a0 = mats.remove(0);
        SymmetricPencil::new(a0, mats).expect("construction is exact")
    })
}

proptest! {
    #[test]
    fn evaluate_affine_and_symmetric(
        p in pencil(3, 2),
        x in proptest::collection::vec(entry(), 2),
        y in proptest::collection::vec(entry(), 2),
        s in 0.0..1.0f64,
    ) {
        let mix: Vec<f64> = x.iter().zip(&y).map(|(a, b)| s * a + (1.0 - s) * b).collect();
        let qm = p.evaluate(&mix).unwrap();
        prop_assert_eq!(linalg::asymmetry(&qm), 0.0);
        let rhs = p.evaluate(&x).unwrap() * s + p.evaluate(&y).unwrap() * (1.0 - s);
        let scale = linalg::max_abs_entry(&qm).max(1.0);
        prop_assert!(linalg::max_abs_entry(&(qm - rhs)) <= 1e-12 * scale);
    }

    #[test]
    fn hadamard_inverse_is_entrywise_reciprocal(
        vals in proptest::collection::vec(0.1..5.0f64, 9),
    ) {
        let t = Tolerances::default();
        let m = DMatrix::from_fn(3, 3, |i, j| {
            let v = vals[i * 3 + j];
            if i <= j { v } else { vals[j * 3 + i] }
        });
        let inv = hadamard::hadamard_inverse(&m, &t).unwrap();
        let prod = linalg::hadamard_product(&m, &inv);
        prop_assert!(linalg::max_abs_entry(&(prod - linalg::ones(3))) < 1e-14);
    }

    #[test]
    fn read_criterion_implies_psd_inverse(seed in any::<u64>(), n in 1usize..9) {
        let t = Tolerances::default();
        let mut rng = SplitMix64::new(seed);
        let m = hadamard::random_read_instance(n, &mut rng);
        let check = hadamard::hadamard_inverse_psd_criterion(&m, &t).unwrap();
        prop_assert!(check.satisfies_criterion);
        prop_assert_eq!(check.hadamard_inverse_psd, Some(true));
    }

    #[test]
    fn perron_bounds_hold(seed in any::<u64>(), n in 1usize..10) {
        let t = Tolerances::default();
        let mut rng = SplitMix64::new(seed);
        let a = perron::random_positive_symmetric(n, 0.5, 3.0, &mut rng);
        let pd = perron::perron_eigenpair(&a, &t).unwrap();
        prop_assert!(perron::verify_perron_bounds(&pd, &t).is_ok());
    }

    #[test]
    fn povm_hypothesis_forces_equality(seed in any::<u64>()) {
        let t = Tolerances::default();
        let mut rng = SplitMix64::new(seed);
        let h = 2 + rng.next_usize(8);
        let n = 1 + rng.next_usize(h.min(5));
        let pvm = spectrahedra::povm::random_pvm(h, n, &mut rng);
        let povm = spectrahedra::povm::perturbed_povm(&pvm, 0.2 * t.abs, &mut rng);
        let hyp = spectrahedra::povm::hypothesis_holds(&pvm, &povm, &t).unwrap();
        if hyp.holds {
            prop_assert!(spectrahedra::povm::conclude_equality_check(&pvm, &povm, &t).unwrap());
        }
    }
}
