//! Acceptance checks. Each test prints a single PASS/FAIL line and then
//! asserts, so `cargo test --test acceptance -- --nocapture` gives a summary.
//! All comparisons are exact equalities unless a time limit is stated.

use std::time::{Duration, Instant};

use genpi_core::algebra::builtin;
use genpi_core::codim::{
    codimension, consequences_span, grassmann_codim_stabilized, identity_kernel_basis, variety_contains,
    verify_generating_set, Budget, ConsequenceMode,
};
use genpi_core::genpoly::{is_identity, monomial_coordinates, monomial_count, multilinearize, parse, Expr, Letter};
use genpi_core::multiplier::{mu_map, multiplier_algebra, permutability_check};
use genpi_core::structure::{jacobson_radical, multiplier_radical_invariance, pi_exponent, wedderburn_malcev};
use genpi_core::waction::{align_actions, is_w_simple, preset, semidirect_product, semisimple_part_action, ActingHom};

fn report(id: u32, failures: &[String], summary: &str) {
    if failures.is_empty() {
        println!("criterion {id}: PASS ({summary})");
    } else {
        println!("criterion {id}: FAIL ({})", failures.join("; "));
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn budget() -> Budget {
    Budget::default()
}

fn gens(list: &[&str]) -> Vec<Expr> {
    list.iter().map(|s| parse(s).unwrap()).collect()
}

#[test]
fn criterion_1_codimension_tables() {
    let f = |n: u32| (n as i64 - 2) * 2i64.pow(n - 1) + 2;
    let d = |n: u32| n as i64 * 2i64.pow(n - 1) + 2;
    let full = |n: u32| (n as i64 + 2) * 2i64.pow(n - 1) + 2;
    let table: [(&str, u32, &dyn Fn(u32) -> i64, Duration); 4] = [
        ("ut2F", 6, &f, Duration::from_secs(10)),
        ("ut2D", 6, &d, Duration::from_secs(60)),
        ("ut2C", 5, &d, Duration::from_secs(60)),
        ("ut2full", 5, &full, Duration::from_secs(15 * 60)),
    ];
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (name, n_max, formula, limit) in table {
        let h = preset(name).unwrap();
        let t = Instant::now();
        let got: Vec<i64> = (1..=n_max).map(|n| codimension(&h, n as usize, &budget()).unwrap() as i64).collect();
        let elapsed = t.elapsed();
        let want: Vec<i64> = (1..=n_max).map(formula).collect();
        if got != want {
            failures.push(format!("{name}: got {got:?}, expected {want:?}"));
        }
        if elapsed > limit {
            failures.push(format!("{name}: {elapsed:?} exceeds {limit:?}"));
        }
        parts.push(format!("{name} {got:?} in {:.2}s", elapsed.as_secs_f64()));
    }
    report(1, &failures, &parts.join(", "));
}

/// Verdict of a generator list, and for each single deletion either the first
/// failing degree or a proof that the deleted generator is redundant.
fn check_list(
    name: &str,
    h: &ActingHom,
    list: &[&str],
    n: usize,
    mode: ConsequenceMode,
    failures: &mut Vec<String>,
    notes: &mut Vec<String>,
) {
    let all = verify_generating_set(&gens(list), h, n, mode, &budget()).unwrap();
    if !all.holds {
        failures.push(format!("{name}: generators fail at degree {:?}", all.failing_degree));
    }
    for drop in 0..list.len() {
        let rest: Vec<&str> = list.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, g)| *g).collect();
        let r = verify_generating_set(&gens(&rest), h, n, mode, &budget()).unwrap();
        if !r.holds {
            notes.push(format!("{name} without {} fails at n={}", list[drop], r.failing_degree.unwrap()));
            continue;
        }
        // still generating: the dropped polynomial must be a consequence of the rest
        let dropped = parse(list[drop]).unwrap();
        let redundant = multilinearize(&dropped).iter().all(|comp| {
            let d = comp.variables().len();
            let span = consequences_span(&gens(&rest), h, d, mode, &budget()).unwrap();
            let renamed = renumber(comp);
            let v = monomial_coordinates(&renamed, d, h, &h.effective_image()).unwrap();
            span.contains_sparse(&v)
        });
        if redundant {
            notes.push(format!("{name}: {} is redundant", list[drop]));
        } else {
            failures.push(format!("{name}: dropping {} keeps the verdict", list[drop]));
        }
    }
}

fn renumber(p: &genpi_core::genpoly::WordPoly) -> genpi_core::genpoly::WordPoly {
    let vars = p.variables();
    let mut out = genpi_core::genpoly::WordPoly::zero();
    for (w, c) in p.terms() {
        let nw = w
            .iter()
            .map(|l| match l {
                Letter::X(v) => Letter::X(vars.iter().position(|x| x == v).unwrap() as u32 + 1),
                other => other.clone(),
            })
            .collect();
        out.add_term(nw, c.clone());
    }
    out
}

#[test]
fn criterion_2_generating_sets() {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let inner = ConsequenceMode::InnerCoefficients;
    check_list("UT2^F", &preset("ut2F").unwrap(), &["[x1,x2][x3,x4]"], 4, inner, &mut failures, &mut notes);
    check_list("UT2^D", &preset("ut2D").unwrap(), &["[x1,x2] - [x1,x2,w1]"], 4, inner, &mut failures, &mut notes);
    check_list("UT2", &preset("ut2full").unwrap(), &["[x1,x2] - [x1,x2,w1]"], 4, inner, &mut failures, &mut notes);
    check_list(
        "UT2^C",
        &preset("ut2C").unwrap(),
        &["[x1,x2][x3,x4]", "w1[x1,x2]", "[x1,x2]w1"],
        4,
        inner,
        &mut failures,
        &mut notes,
    );
    let m = grassmann_codim_stabilized(1, 3, &budget()).unwrap().levels.last().unwrap().0;
    let e1 = preset(&format!("grassmann_Ek(1,{m})")).unwrap();
    check_list("E^(1)", &e1, &["[x1,x2,x3]", "[e1,x1,x2]"], 3, inner, &mut failures, &mut notes);
    report(2, &failures, &notes.join(", "));
}

#[test]
fn criterion_3_grassmann() {
    let mut failures = Vec::new();
    let mut got = Vec::new();
    for k in 1..=2usize {
        for n in 1..=3usize {
            let c = grassmann_codim_stabilized(k, n, &budget()).unwrap().value;
            let want = (1usize << (n - 1)) * ((1usize << (k + 1)) - 1);
            if c != want {
                failures.push(format!("k={k} n={n}: got {c}, expected {want}"));
            }
            got.push(c);
        }
    }
    // consequences of the generators [x1,x2,x3] and [e_i,x1,x2]
    let lemma: [(usize, &str); 4] = [
        (1, "[x1,x2][x3,x4] + [x1,x4][x3,x2]"),
        (1, "[e1,x2][x3,x4] + [e1,x4][x3,x2]"),
        (1, "[x1,x2,e1]"),
        (2, "[e1,x1][e2,x2] + 2[x1,x2]e1e2"),
    ];
    for (k, text) in lemma {
        let g: Vec<String> =
            std::iter::once("[x1,x2,x3]".to_string()).chain((1..=k).map(|i| format!("[e{i},x1,x2]"))).collect();
        let g: Vec<&str> = g.iter().map(|s| s.as_str()).collect();
        let target = parse(text).unwrap().expand();
        let target = renumber(&target);
        let d = target.variables().len();
        let h = preset(&format!("grassmann_Ek({k},{})", 2 * d + k)).unwrap();
        let span = consequences_span(&gens(&g), &h, d, ConsequenceMode::InnerCoefficients, &budget()).unwrap();
        let v = monomial_coordinates(&target, d, &h, &h.effective_image()).unwrap();
        if v.is_zero() || !span.contains_sparse(&v) {
            failures.push(format!("{text} is not a consequence"));
        }
    }
    let e5 = preset("grassmann_full(5)").unwrap();
    for i in 1..=5 {
        for j in 1..=5 {
            let f = parse(&format!("[e{i}, x1*e{j}] - [e{i},x1]*e{j} - 2*x1*e{i}*e{j}")).unwrap();
            if !is_identity(&f, &e5).unwrap().holds {
                failures.push(format!("commutator identity with i={i}, j={j} fails on grassmann_unital(5)"));
            }
        }
    }
    report(3, &failures, &format!("codimensions {got:?}, 4 consequences, 25 identity instances"));
}

#[test]
fn criterion_4_full_grassmann_growth() {
    let mut failures = Vec::new();
    let mut got = Vec::new();
    for m in 1..=3u32 {
        let c = codimension(&preset(&format!("grassmann_full({m})")).unwrap(), 1, &budget()).unwrap();
        let want = (1usize << (m + 1)) - 1;
        if c != want {
            failures.push(format!("M={m}: c_1 = {c}, expected {want}"));
        }
        got.push(c);
    }
    if !got.windows(2).all(|w| w[0] < w[1]) {
        failures.push(format!("not strictly increasing: {got:?}"));
    }
    report(4, &failures, &format!("c_1 = {got:?}"));
}

const ALGEBRAS: [&str; 5] = ["ut:2", "ut:3", "mat:2", "grassmann_unital:2", "block_ut:1,2"];

#[test]
fn criterion_5_multipliers() {
    let mut failures = Vec::new();
    for name in ALGEBRAS {
        let a = builtin(name).unwrap();
        let ma = multiplier_algebra(&a).unwrap();
        let mu = mu_map(&a, &ma).unwrap();
        if ma.dim() != a.dim() || !mu.injective || !mu.surjective {
            failures.push(format!("{name}: dim M = {}, mu bijective = {}", ma.dim(), mu.injective && mu.surjective));
        }
        if !permutability_check(&ma).holds {
            failures.push(format!("{name}: not permutable"));
        }
    }
    let z = builtin("zero_mult:2").unwrap();
    let mz = multiplier_algebra(&z).unwrap();
    let mu = mu_map(&z, &mz).unwrap();
    let perm = permutability_check(&mz);
    if !mu.matrix.is_zero() {
        failures.push("zero_mult:2: mu is not zero".into());
    }
    if perm.holds || perm.witness.is_none() {
        failures.push("zero_mult:2: permutability should fail with a witness".into());
    }
    report(5, &failures, &format!("5 unital algebras, zero_mult:2 dim M = {}", mz.dim()));
}

#[test]
fn criterion_6_structure() {
    // (radical dim, block degrees, exponent)
    let expected: [(&str, usize, Vec<usize>, usize); 5] = [
        ("ut:2", 1, vec![1, 1], 2),
        ("ut:3", 3, vec![1, 1, 1], 3),
        ("mat:2", 0, vec![2], 4),
        ("grassmann_unital:2", 3, vec![1], 1),
        ("block_ut:1,2", 2, vec![1, 2], 3),
    ];
    let mut failures = Vec::new();
    for (name, jdim, degrees, exp) in expected {
        let a = builtin(name).unwrap();
        let j = jacobson_radical(&a).unwrap();
        let wm = wedderburn_malcev(&a).unwrap();
        let mut got_deg: Vec<usize> = wm.block_degrees().into_iter().map(|d| d.unwrap_or(0)).collect();
        got_deg.sort_unstable();
        let e = pi_exponent(&a).unwrap();
        if j.dim() != jdim {
            failures.push(format!("{name}: dim J = {}, expected {jdim}", j.dim()));
        }
        if got_deg != degrees {
            failures.push(format!("{name}: blocks {got_deg:?}, expected {degrees:?}"));
        }
        if e != exp {
            failures.push(format!("{name}: exp = {e}, expected {exp}"));
        }
        let ma = multiplier_algebra(&a).unwrap();
        if !multiplier_radical_invariance(&a, &ma).unwrap().holds {
            failures.push(format!("{name}: radical not invariant under M(A)"));
        }
    }
    report(6, &failures, "radicals, blocks and exponents");
}

const PRESETS: [&str; 11] = [
    "ut2F",
    "ut2D",
    "ut2C",
    "ut2full",
    "grassmann_Ek(1,3)",
    "grassmann_Ek(2,4)",
    "grassmann_full(2)",
    "ordinary:ut:3",
    "full:ut:3",
    "full:mat:2",
    "full:block_ut:1,2",
];

#[test]
fn criterion_7_actions() {
    let mut failures = Vec::new();
    for name in PRESETS {
        let h = preset(name).unwrap();
        if !h.radical_invariance().unwrap().holds {
            failures.push(format!("{name}: radical is not a W-ideal"));
        }
        let sd = semidirect_product(&h).unwrap();
        let eff = h.effective_image();
        let unit = eff.image_algebra.unit().map(|u| sd.i1(u));
        if sd.algebra.unit() != unit.as_ref() || unit.is_none() {
            failures.push(format!("{name}: semidirect product unit is not (1, 0)"));
        }
    }
    if !is_w_simple(&preset("full:mat:2").unwrap()).unwrap().w_simple {
        failures.push("mat(2) with the full action is not W-simple".into());
    }
    for name in ["ut2F", "ut2D", "ut2C", "ut2full"] {
        if is_w_simple(&preset(name).unwrap()).unwrap().w_simple {
            failures.push(format!("{name}: ut(2) reported W-simple"));
        }
    }
    report(7, &failures, &format!("{} presets", PRESETS.len()));
}

#[test]
fn criterion_8_containment() {
    let mut failures = Vec::new();
    let cases = [("ut2full", "ut2D", true), ("ut2C", "ut2F", true), ("ut2F", "ut2D", false)];
    for (a, b, want) in cases {
        let (ha, hb) = align_actions(&preset(a).unwrap(), &preset(b).unwrap()).unwrap();
        let r = variety_contains(&ha, &hb, 3, &budget()).unwrap();
        if r.holds != want {
            failures.push(format!("contains({a}, {b}) = {}, expected {want}", r.holds));
        }
    }
    let ss = semisimple_part_action(&preset("ut2C").unwrap()).unwrap();
    if ss.image_dim != 1 {
        failures.push(format!("semisimple part of UT2^C has image dim {}", ss.image_dim));
    }
    let f = preset("ut2F").unwrap();
    let (x, y) = align_actions(&ss.action, &f).unwrap();
    for n in 1..=3 {
        if codimension(&x, n, &budget()).unwrap() != codimension(&y, n, &budget()).unwrap()
            || !variety_contains(&x, &y, n, &budget()).unwrap().holds
            || !variety_contains(&y, &x, n, &budget()).unwrap().holds
        {
            failures.push(format!("semisimple part differs from UT2^F at n={n}"));
        }
    }
    report(8, &failures, "3 containments, semisimple part of UT2^C matches UT2^F");
}

#[test]
fn criterion_9_codim_invariants() {
    let t = Instant::now();
    let mut failures = Vec::new();
    // rank + kernel = number of monomials
    for (name, n_max) in [("ut2F", 4), ("ut2D", 3), ("ut2C", 3), ("ut2full", 3), ("grassmann_Ek(1,5)", 2)] {
        let h = preset(name).unwrap();
        let s = h.effective_image().alphabet_size();
        for n in 1..=n_max {
            let c = codimension(&h, n, &budget()).unwrap();
            let k = identity_kernel_basis(&h, n, &budget()).unwrap().dim();
            if c + k != monomial_count(n, s).unwrap() as usize {
                failures.push(format!("{name} n={n}: {c} + {k} is not the monomial count"));
            }
        }
    }
    // consequences of identities are identities
    let h = preset("ut2D").unwrap();
    let span =
        consequences_span(&gens(&["[x1,x2] - [x1,x2,w1]"]), &h, 3, ConsequenceMode::InnerCoefficients, &budget())
            .unwrap();
    let kernel = identity_kernel_basis(&h, 3, &budget()).unwrap();
    if !kernel.contains(&span).unwrap() {
        failures.push("consequence span leaves the identity kernel".into());
    }
    // truncation monotonicity
    for k in 1..=2usize {
        for n in 1..=3usize {
            let mut prev = 0;
            let start = 2 * n + k;
            let mut values = Vec::new();
            for m in start..start + 2 {
                let c = codimension(&preset(&format!("grassmann_Ek({k},{m})")).unwrap(), n, &budget()).unwrap();
                values.push(c);
                if c < prev {
                    failures.push(format!("k={k} n={n}: codimension drops at M={m}"));
                }
                prev = c;
            }
            if values.windows(2).any(|w| w[0] != w[1]) {
                failures.push(format!("k={k} n={n}: not stable from M={start}: {values:?}"));
            }
        }
    }
    // reflexivity and transitivity on (full, D, D)
    let full = preset("ut2full").unwrap();
    let d = preset("ut2D").unwrap();
    let (fa, da) = align_actions(&full, &d).unwrap();
    for (x, y) in [(&fa, &fa), (&da, &da), (&fa, &da)] {
        if !variety_contains(x, y, 3, &budget()).unwrap().holds {
            failures.push("containment fails on the (full, D, D) triple".into());
        }
    }
    let elapsed = t.elapsed();
    if elapsed > Duration::from_secs(30 * 60) {
        failures.push(format!("took {elapsed:?}"));
    }
    report(9, &failures, &format!("codim invariants in {:.2}s", elapsed.as_secs_f64()));
}
