mod common;

use std::collections::HashMap;

use common::{config, small_rat, sparse};
use genpi_core::algebra::builtin;
use genpi_core::codim::{
    codimension, consequences_span, format_identity, identity_kernel_basis, variety_contains, Budget, ConsequenceMode,
};
use genpi_core::genpoly::{enumerate_basis, evaluate, is_identity, monomial_count, parse};
use genpi_core::linalg::SparseVec;
use genpi_core::waction::{full_action, preset};
use proptest::prelude::*;

/// Generators and consequences appearing in the identity lists of UT_2 and
/// of the Grassmann algebra.
const CORPUS: [&str; 16] = [
    "w2*x1",
    "x1*w2",
    "[x1,x2][x3,x4]",
    "[x1,x2] - [x1,x2,w1]",
    "w1[x1,x2]",
    "[x1,x2]w1",
    "[x1,x2,x3]",
    "[e1,x1,x2]",
    "[e2,x1,x2]",
    "e3*x1",
    "x1*e3",
    "[x1,x2][x3,x4] + [x1,x4][x3,x2]",
    "[e1,x2][x3,x4] + [e1,x4][x3,x2]",
    "[x1,x2,e1]",
    "[e1,x1][e2,x2] + 2[x1,x2]e1e2",
    "[e1, x1*e2] - [e1,x1]*e2 - 2*x1*e1*e2",
];

#[test]
fn parse_print_round_trip() {
    for s in CORPUS {
        let f = parse(s).unwrap();
        let printed = f.to_string();
        assert_eq!(parse(&printed).unwrap(), f, "{s} printed as {printed}");
        assert_eq!(parse(&printed).unwrap().to_string(), printed);
    }
}

#[test]
fn basis_counts() {
    for n in 1..=4 {
        for s in 1..=3 {
            assert_eq!(enumerate_basis(n, s).count() as u128, monomial_count(n, s).unwrap(), "n={n} s={s}");
        }
    }
}

fn assign(vals: &[SparseVec]) -> HashMap<u32, SparseVec> {
    vals.iter().enumerate().map(|(i, v)| (i as u32 + 1, v.clone())).collect()
}

proptest! {
    #![proptest_config(config(64, 0x9e7))]

    #[test]
    fn evaluation_is_multilinear(
        f in proptest::sample::select(vec!["[x1,x2][x3,x4]", "[x1,x2] - [x1,x2,w1]", "w1[x1,x2]x3", "x1*w2*x2 + 1/2*w2*x3*x1*x2"]),
        a in sparse(3), b in sparse(3), y in sparse(3), z in sparse(3), u in sparse(3), c in small_rat(),
    ) {
        let h = preset("ut2full").unwrap();
        let f = parse(f).unwrap();
        let combo = a.axpy(&c, &b);
        let lhs = evaluate(&f, &h, &assign(&[combo, y.clone(), z.clone(), u.clone()])).unwrap();
        let fa = evaluate(&f, &h, &assign(&[a, y.clone(), z.clone(), u.clone()])).unwrap();
        let fb = evaluate(&f, &h, &assign(&[b, y, z, u])).unwrap();
        prop_assert_eq!(lhs, fa.axpy(&c, &fb));
    }

    #[test]
    fn sandwich_matches_products(name in proptest::sample::select(vec!["ut:2", "mat:2", "ut:3"]), i in 0usize..9, j in 0usize..9, x in sparse(9)) {
        let a = builtin(name).unwrap();
        let (i, j) = (i % a.dim(), j % a.dim());
        let x = SparseVec::from_entries(x.entries().iter().filter(|e| e.0 < a.dim()).cloned().collect());
        let h = full_action(a.clone()).unwrap();
        let f = parse(&format!("w{i}*x1*w{j}")).unwrap();
        let got = evaluate(&f, &h, &assign(std::slice::from_ref(&x))).unwrap();
        let bi = SparseVec::from_dense(a.basis_element(i).coords());
        let bj = SparseVec::from_dense(a.basis_element(j).coords());
        prop_assert_eq!(got, a.mul_sparse(&a.mul_sparse(&bi, &x), &bj));
    }
}

#[test]
fn consequences_are_identities() {
    let cases = [
        ("ut2D", vec!["[x1,x2] - [x1,x2,w1]"], 3),
        ("ut2C", vec!["[x1,x2][x3,x4]", "w1[x1,x2]", "[x1,x2]w1"], 3),
        ("grassmann_Ek(1,5)", vec!["[x1,x2,x3]", "[e1,x1,x2]"], 2),
    ];
    for (name, gens, n) in cases {
        let h = preset(name).unwrap();
        let g: Vec<_> = gens.iter().map(|s| parse(s).unwrap()).collect();
        assert!(g.iter().all(|f| is_identity(f, &h).unwrap().holds), "{name}");
        let span = consequences_span(&g, &h, n, ConsequenceMode::InnerCoefficients, &Budget::default()).unwrap();
        let kernel = identity_kernel_basis(&h, n, &Budget::default()).unwrap();
        assert!(kernel.contains(&span).unwrap(), "{name}");
        // spot-check the printed form of a few consequences directly
        for v in span.basis().iter().step_by(span.dim() / 5 + 1) {
            let text = format_identity(v, n, &h);
            assert!(is_identity(&parse(&text).unwrap(), &h).unwrap().holds, "{name}: {text}");
        }
    }
}

#[test]
fn codimension_complements_kernel_and_containment_is_reflexive() {
    for name in common::PRESETS {
        let h = preset(name).unwrap();
        let s = h.effective_image().alphabet_size();
        for n in 1..=2 {
            let c = codimension(&h, n, &Budget::default()).unwrap();
            let k = identity_kernel_basis(&h, n, &Budget::default()).unwrap().dim();
            assert_eq!((c + k) as u128, monomial_count(n, s).unwrap(), "{name} n={n}");
            if h.w0_is_unit() {
                assert!(variety_contains(&h, &h, n, &Budget::default()).unwrap().holds, "{name}");
            }
        }
    }
}
