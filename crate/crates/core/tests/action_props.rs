mod common;

use common::{config, sparse, PRESETS};
use genpi_core::algebra::{builtin, StructureAlgebra};
use genpi_core::waction::{action_from_subalgebra, preset, semidirect_product};
use proptest::prelude::*;

#[test]
fn ideals_and_blocks_are_invariant() {
    for name in PRESETS {
        let h = preset(name).unwrap();
        assert!(h.radical_invariance().unwrap().holds, "{name}");
        assert!(h.block_invariance().unwrap().holds, "{name}");
    }
}

#[test]
fn semidirect_products_embed_a() {
    for name in PRESETS {
        let h = preset(name).unwrap();
        let sd = semidirect_product(&h).unwrap();
        let alg = &sd.algebra;
        // re-validate from raw structure constants
        let unit = alg.unit().map(|u| u.to_dense(alg.dim()));
        StructureAlgebra::new(alg.labels().to_vec(), alg.constants(), unit).unwrap();
        let a = h.a();
        assert!(alg.is_ideal(&sd.a_part()), "{name}");
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let e = |t: usize| a.basis_element(t).coords().to_vec();
                let (x, y) = (
                    genpi_core::linalg::SparseVec::from_dense(&e(i)),
                    genpi_core::linalg::SparseVec::from_dense(&e(j)),
                );
                assert_eq!(alg.mul_sparse(&sd.i2(&x), &sd.i2(&y)), sd.i2(&a.mul_sparse(&x, &y)), "{name}");
            }
        }
        // every w in W acts on i2(A) through its image in the first summand
        let eff = h.effective_image();
        for w in 0..h.w().dim() {
            let img = sd.i1(&eff.projection[w]);
            for j in 0..a.dim() {
                let x = genpi_core::linalg::SparseVec::from_dense(a.basis_element(j).coords());
                assert_eq!(alg.mul_sparse(&img, &sd.i2(&x)), sd.i2(&h.lambda(w).apply_sparse(&x)), "{name} w{w}");
                assert_eq!(alg.mul_sparse(&sd.i2(&x), &img), sd.i2(&h.rho(w).apply_sparse(&x)), "{name} w{w}");
            }
        }
    }
}

proptest! {
    #![proptest_config(config(48, 0xac7))]

    /// The subalgebra generated by the unit and a random element, acting by
    /// multiplication, has an image algebra with the same structure constants.
    #[test]
    fn subalgebra_actions_round_trip(name in proptest::sample::select(vec!["ut:2", "ut:3", "mat:2", "block_ut:1,2", "grassmann_unital:3"]), seed in sparse(9)) {
        let a = builtin(name).unwrap();
        let x = genpi_core::linalg::SparseVec::from_entries(seed.entries().iter().filter(|e| e.0 < a.dim()).cloned().collect());
        let b = a.subalgebra_closure([a.unit().unwrap().clone(), x]);
        let elems: Vec<_> = b.basis().iter().map(|v| a.element_sparse(v)).collect();
        let labels = (0..elems.len()).map(|i| format!("b{i}")).collect();
        let h = action_from_subalgebra(&a, &elems, labels).unwrap();
        let eff = h.effective_image();
        prop_assert_eq!(eff.dim(), b.dim());
        prop_assert_eq!(eff.image_algebra.constants(), h.w().constants());
        prop_assert!(h.radical_invariance().unwrap().holds);
    }
}
