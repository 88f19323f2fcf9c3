use genpi_core::algebra::{AlgebraRef, StructureAlgebra};
use genpi_core::codim::{
    codimension, format_identity, grassmann_codim_stabilized, growth_report, identity_kernel_basis, matrix_shape,
    variety_contains, verify_generating_set, ConsequenceMode,
};
use genpi_core::genpoly::{is_identity, parse};
use genpi_core::multiplier::{inner_ideal_check, mu_map, multiplier_algebra, permutability_check, permutes_with_inner};
use genpi_core::structure::{jacobson_radical, pi_exponent, radical_powers, wedderburn_malcev};
use genpi_core::waction::{
    align_actions, is_w_simple, preset, semidirect_product, semisimple_part_action, ActingHom, ActionFile,
};
use genpi_core::{Error, Result};
use serde_json::json;

use crate::report::Report;
use crate::{
    ActionArg, ActionCmd, AlgebraArg, AlgebraCmd, Cmd, CodimCmd, Config, ModeArg, MultiplierCmd, PolyCmd, StructureCmd,
};

fn load_algebra(arg: &AlgebraArg) -> Result<StructureAlgebra> {
    match arg {
        AlgebraArg::Name(n) => AlgebraRef::Name(n.clone()).resolve(),
        AlgebraArg::Path(p) => AlgebraRef::Path(p.clone()).resolve(),
    }
}

fn load_action(arg: &ActionArg) -> Result<ActingHom> {
    match arg {
        ActionArg::Preset(n) => preset(n),
        ActionArg::Path(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))?;
            ActionFile::parse(&text, p.parent())
        }
    }
}

fn action_name(arg: &ActionArg) -> String {
    match arg {
        ActionArg::Preset(n) => n.clone(),
        ActionArg::Path(p) => p.display().to_string(),
    }
}

fn algebra_name(arg: &AlgebraArg) -> String {
    match arg {
        AlgebraArg::Name(n) => n.clone(),
        AlgebraArg::Path(p) => p.display().to_string(),
    }
}

fn check_degree(n: usize, config: &Config) -> Result<()> {
    if n == 0 || n > config.max_degree {
        return Err(Error::Invalid(format!("degree must be between 1 and {}", config.max_degree)));
    }
    Ok(())
}

/// Runs one subcommand; returns its name (for error reports) and the report.
pub fn run(cmd: &Cmd, config: &Config) -> (&'static str, Result<Report>) {
    match cmd {
        Cmd::Algebra(c) => match c {
            AlgebraCmd::Info { algebra } => ("algebra info", algebra_info(algebra)),
            AlgebraCmd::Validate { algebra } => ("algebra validate", algebra_validate(algebra)),
        },
        Cmd::Multiplier(MultiplierCmd::Compute { algebra }) => ("multiplier compute", multiplier_compute(algebra)),
        Cmd::Structure(c) => match c {
            StructureCmd::Radical { algebra } => ("structure radical", structure_radical(algebra)),
            StructureCmd::Wm { algebra } => ("structure wm", structure_wm(algebra)),
            StructureCmd::Exponent { algebra } => ("structure exponent", structure_exponent(algebra)),
        },
        Cmd::Action(c) => match c {
            ActionCmd::Validate { action } => ("action validate", action_validate(action)),
            ActionCmd::Semidirect { action } => ("action semidirect", action_semidirect(action)),
            ActionCmd::SsPart { action } => ("action ss-part", action_ss_part(action)),
        },
        Cmd::Poly(PolyCmd::Check { action, polynomial }) => ("poly check", poly_check(action, polynomial)),
        Cmd::Codim(c) => match c {
            CodimCmd::Compute { action, n } => ("codim compute", codim_compute(action, *n, config)),
            CodimCmd::Kernel { action, n } => ("codim kernel", codim_kernel(action, *n, config)),
            CodimCmd::VerifyGens { action, n, generators, mode } => {
                ("codim verify-gens", codim_verify(action, *n, generators, *mode, config))
            }
            CodimCmd::Contains { a, b, n } => ("codim contains", codim_contains(a, b, *n, config)),
            CodimCmd::Grassmann { k, n } => ("codim grassmann", codim_grassmann(*k, *n, config)),
            CodimCmd::Growth { action, max } => ("codim growth", codim_growth(action, *max, config)),
        },
    }
}

fn algebra_info(arg: &AlgebraArg) -> Result<Report> {
    let a = load_algebra(arg)?;
    let mut r = Report::new("algebra info");
    r.put("algebra", algebra_name(arg))
        .put("dim", a.dim())
        .put("basis", a.labels())
        .put("unit", a.unit().map(|u| a.format_vector(u)))
        .put("nonzero_products", a.nonzero_products().len())
        .put("idempotent", a.is_idempotent())
        .put("non_degenerate", a.is_non_degenerate())
        .put("center_dim", a.center().dim())
        .put("annihilator_dim", a.annihilator().dim());
    Ok(r)
}

fn algebra_validate(arg: &AlgebraArg) -> Result<Report> {
    let a = load_algebra(arg)?;
    let mut r = Report::new("algebra validate");
    r.put("algebra", algebra_name(arg)).put("valid", true).put("dim", a.dim()).put("unit", a.unit().is_some());
    Ok(r)
}

fn multiplier_compute(arg: &AlgebraArg) -> Result<Report> {
    let a = load_algebra(arg)?;
    let ma = multiplier_algebra(&a)?;
    let mu = mu_map(&a, &ma)?;
    let perm = permutability_check(&ma);
    let mut r = Report::new("multiplier compute");
    r.put("algebra", algebra_name(arg))
        .put("dim_a", a.dim())
        .put("dim_m", ma.dim())
        .put("mu_kernel_dim", mu.kernel.dim())
        .put("mu_injective", mu.injective)
        .put("mu_surjective", mu.surjective)
        .put("inner_ideal", inner_ideal_check(&a, &ma).holds)
        .put("permutable", perm.holds)
        .put("permutability_witness", perm.witness)
        .put("permutes_with_inner", permutes_with_inner(&a, &ma).holds);
    Ok(r)
}

fn structure_radical(arg: &AlgebraArg) -> Result<Report> {
    let a = load_algebra(arg)?;
    let j = jacobson_radical(&a)?;
    let powers = radical_powers(&a, &j)?;
    let mut r = Report::new("structure radical");
    r.put("algebra", algebra_name(arg))
        .put("dim", j.dim())
        .put("basis", j.basis().iter().map(|v| a.format_vector(v)).collect::<Vec<_>>())
        .put("power_dims", powers.iter().map(|p| p.dim()).collect::<Vec<_>>())
        .put("nilpotency_index", powers.len());
    Ok(r)
}

fn structure_wm(arg: &AlgebraArg) -> Result<Report> {
    let a = load_algebra(arg)?;
    let wm = wedderburn_malcev(&a)?;
    let blocks: Vec<_> = wm
        .blocks
        .iter()
        .zip(wm.block_degrees())
        .zip(&wm.block_units)
        .map(|((b, deg), u)| json!({ "dim": b.dim(), "degree": deg, "unit": a.format_vector(u) }))
        .collect();
    let mut r = Report::new("structure wm");
    r.put("algebra", algebra_name(arg))
        .put("radical_dim", wm.radical.dim())
        .put("complement_dim", wm.complement.dim())
        .put("complement", wm.complement.basis().iter().map(|v| a.format_vector(v)).collect::<Vec<_>>())
        .put("blocks", blocks);
    Ok(r)
}

fn structure_exponent(arg: &AlgebraArg) -> Result<Report> {
    let a = load_algebra(arg)?;
    let mut r = Report::new("structure exponent");
    r.put("algebra", algebra_name(arg)).put("exponent", pi_exponent(&a)?);
    Ok(r)
}

fn action_validate(arg: &ActionArg) -> Result<Report> {
    let h = load_action(arg)?;
    let eff = h.effective_image();
    let ws = is_w_simple(&h)?;
    let mut r = Report::new("action validate");
    r.put("action", action_name(arg))
        .put("valid", true)
        .put("w_dim", h.w().dim())
        .put("w_basis", h.w().labels())
        .put("a_dim", h.a().dim())
        .put("effective_dim", eff.dim())
        .put("alphabet_size", eff.alphabet_size())
        .put("kernel_tail", h.kernel_tail())
        .put("radical_invariant", h.radical_invariance()?.holds)
        .put("blocks_invariant", h.block_invariance()?.holds)
        .put("w_simple", ws.w_simple);
    Ok(r)
}

fn action_semidirect(arg: &ActionArg) -> Result<Report> {
    let h = load_action(arg)?;
    let sd = semidirect_product(&h)?;
    let alg = &sd.algebra;
    let mut r = Report::new("action semidirect");
    r.put("action", action_name(arg))
        .put("dim", alg.dim())
        .put("w_part_dim", sd.w_dim)
        .put("a_part_dim", sd.a_dim)
        .put("unit", alg.unit().map(|u| alg.format_vector(u)))
        .put("a_is_ideal", alg.is_ideal(&sd.a_part()));
    Ok(r)
}

fn action_ss_part(arg: &ActionArg) -> Result<Report> {
    let h = load_action(arg)?;
    let ss = semisimple_part_action(&h)?;
    let mut r = Report::new("action ss-part");
    r.put("action", action_name(arg))
        .put("image_dim", h.effective_image().dim())
        .put("semisimple_image_dim", ss.image_dim)
        .put("image_radical_dim", ss.radical_dim)
        .put("radical_acts_inner", ss.hypothesis_holds);
    Ok(r)
}

fn poly_check(arg: &ActionArg, text: &str) -> Result<Report> {
    let h = load_action(arg)?;
    let f = parse(text)?;
    let c = is_identity(&f, &h)?;
    let mut r = Report::new("poly check");
    r.put("action", action_name(arg)).put("polynomial", f.to_string()).put("identity", c.holds);
    if let Some(w) = &c.witness {
        let assignment: Vec<String> = w.assignment.iter().map(|(x, b)| format!("{x}={b}")).collect();
        r.put("witness", json!({ "component": w.component, "assignment": assignment.join(" "), "value": w.value }));
    }
    r.verdict(c.holds);
    Ok(r)
}

fn codim_compute(arg: &ActionArg, n: usize, config: &Config) -> Result<Report> {
    check_degree(n, config)?;
    let h = load_action(arg)?;
    let (rows, cols) = matrix_shape(&h, n);
    let c = codimension(&h, n, &config.budget)?;
    let mut r = Report::new("codim compute");
    r.put("action", action_name(arg))
        .put("n", n)
        .put("rows", rows as u64)
        .put("columns", cols as u64)
        .put("codimension", c);
    Ok(r)
}

fn codim_kernel(arg: &ActionArg, n: usize, config: &Config) -> Result<Report> {
    check_degree(n, config)?;
    let h = load_action(arg)?;
    let k = identity_kernel_basis(&h, n, &config.budget)?;
    let ids: Vec<String> = k.basis().iter().map(|v| format_identity(v, n, &h)).collect();
    let mut r = Report::new("codim kernel");
    r.put("action", action_name(arg)).put("n", n).put("dim", k.dim()).put("identities", ids);
    Ok(r)
}

fn codim_verify(arg: &ActionArg, n: usize, gens: &[String], mode: ModeArg, config: &Config) -> Result<Report> {
    check_degree(n, config)?;
    let h = load_action(arg)?;
    let parsed = gens.iter().map(|g| parse(g)).collect::<Result<Vec<_>>>()?;
    let mode = match mode {
        ModeArg::Inner => ConsequenceMode::InnerCoefficients,
        ModeArg::Strict => ConsequenceMode::Strict,
    };
    let c = verify_generating_set(&parsed, &h, n, mode, &config.budget)?;
    let degrees: Vec<_> = c
        .degrees
        .iter()
        .map(|d| json!({ "n": d.degree, "kernel_dim": d.kernel_dim, "span_dim": d.span_dim, "generated": d.generated }))
        .collect();
    let mut r = Report::new("codim verify-gens");
    r.put("action", action_name(arg))
        .put("generators", parsed.iter().map(|g| g.to_string()).collect::<Vec<_>>())
        .put("mode", if mode == ConsequenceMode::Strict { "strict" } else { "inner" })
        .put("degrees", degrees)
        .put("non_identities", c.non_identities.iter().map(|i| i + 1).collect::<Vec<_>>())
        .put("failing_degree", c.failing_degree)
        .put("generated", c.holds);
    r.verdict(c.holds);
    Ok(r)
}

fn codim_contains(a: &ActionArg, b: &ActionArg, n: usize, config: &Config) -> Result<Report> {
    check_degree(n, config)?;
    let (ha, hb) = align_actions(&load_action(a)?, &load_action(b)?)?;
    let rep = variety_contains(&ha, &hb, n, &config.budget)?;
    let ranks: Vec<_> =
        rep.ranks.iter().map(|(d, ra, rab)| json!({ "n": d, "rank_a": ra, "rank_joint": rab })).collect();
    let mut r = Report::new("codim contains");
    r.put("a", action_name(a)).put("b", action_name(b)).put("w_basis", ha.w().labels()).put("ranks", ranks);
    r.put("contains", rep.holds);
    if let Some(d) = rep.failing_degree {
        r.put(
            "explanation",
            format!("some identity of degree {d} of the first action is not an identity of the second"),
        );
    }
    r.verdict(rep.holds);
    Ok(r)
}

fn codim_grassmann(k: usize, n: usize, config: &Config) -> Result<Report> {
    check_degree(n, config)?;
    let s = grassmann_codim_stabilized(k, n, &config.budget)?;
    let levels: Vec<_> = s.levels.iter().map(|(m, c)| json!({ "m": m, "codimension": c })).collect();
    let mut r = Report::new("codim grassmann");
    r.put("k", k).put("n", n).put("levels", levels).put("codimension", s.value);
    Ok(r)
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn codim_growth(arg: &ActionArg, max: usize, config: &Config) -> Result<Report> {
    check_degree(max, config)?;
    let h = load_action(arg)?;
    let g = growth_report(&h, max, &config.budget)?;
    let rows: Vec<_> = g
        .degrees
        .iter()
        .enumerate()
        .map(|(i, d)| {
            json!({
                "n": d,
                "codimension": g.values[i],
                "ratio": g.ratios[i].map(round4),
                "root": g.roots[i].map(round4),
            })
        })
        .collect();
    let mut r = Report::new("codim growth");
    r.put("action", action_name(arg)).put("degrees", rows).put("exponent", g.exponent);
    Ok(r)
}
