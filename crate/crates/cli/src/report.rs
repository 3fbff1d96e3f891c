//! Table and JSON rendering for each command.

use std::fmt::Write;

use crnkit::concord::{
    check_concordance, conservation_certificate, m3cr, positive_dependence, verify_witness,
    M3crReport, Maximality,
};
use crnkit::decomp::{decomposition_numbers, fid as finest, is_independent};
use crnkit::makin::{acr_scan, blockwise_residuals, Model, RateAssignment};
use crnkit::structure::{
    deficiency_zero_report, kinetic_subspace_coincides, network_numbers, structural_flags,
    KineticSubspace, NetworkNumbers, StructuralFlags,
};
use crnkit::transform;
use crnkit::{Network, Rational, Reaction};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::Failure;

pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit_code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            exit_code: 0,
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn reaction_line(net: &Network, r: &Reaction) -> String {
    format!(
        "{}: {}",
        r.label.as_deref().unwrap_or("-"),
        net.format_reaction(r)
    )
}

fn reaction_lines(net: &Network, rs: &[Reaction]) -> Vec<String> {
    rs.iter().map(|r| reaction_line(net, r)).collect()
}

fn all_reactions(net: &Network) -> Vec<String> {
    reaction_lines(net, net.reactions())
}

fn list(out: &mut String, title: &str, lines: &[String]) {
    writeln!(out, "{title} ({}):", lines.len()).unwrap();
    if lines.is_empty() {
        writeln!(out, "  none").unwrap();
    }
    for l in lines {
        writeln!(out, "  {l}").unwrap();
    }
}

/// One row per network number, one column per network.
fn numbers_table(out: &mut String, headers: &[String], columns: &[NetworkNumbers]) {
    let label = |i: usize| {
        format!(
            "{} ({})",
            NetworkNumbers::ROW_NAMES[i],
            NetworkNumbers::SYMBOLS[i]
        )
    };
    let width = (0..13).map(|i| label(i).len()).max().unwrap();
    let cols: Vec<[usize; 13]> = columns.iter().map(NetworkNumbers::as_array).collect();
    let cw: Vec<usize> = headers.iter().map(|h| h.len().max(3)).collect();
    write!(out, "{:width$}", "").unwrap();
    for (h, w) in headers.iter().zip(&cw) {
        write!(out, "  {h:>w$}").unwrap();
    }
    out.push('\n');
    for i in 0..13 {
        write!(out, "{:width$}", label(i)).unwrap();
        for (c, w) in cols.iter().zip(&cw) {
            write!(out, "  {:>w$}", c[i]).unwrap();
        }
        out.push('\n');
    }
}

fn numbers_json(x: &NetworkNumbers) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn analyze(input: &str, net: &Network) -> Report {
    let x = network_numbers(net);
    let flags = structural_flags(net);
    let ks = kinetic_subspace_coincides(net);
    let dz = deficiency_zero_report(net);

    let mut t = format!("Network: {input}\n\n");
    numbers_table(&mut t, &["value".into()], &[x]);
    t.push_str("\nStructural flags:\n");
    let values = flags.as_array();
    let width = StructuralFlags::ROWS
        .iter()
        .map(|(n, c)| n.len() + c.len() + 3)
        .max()
        .unwrap();
    for ((name, cond), v) in StructuralFlags::ROWS.iter().zip(values) {
        writeln!(t, "  {:width$}  {}", format!("{name} ({cond})"), yes_no(v)).unwrap();
    }
    let ks_text = match ks {
        KineticSubspace::Yes => "yes (t = l)",
        KineticSubspace::Unknown => "undetermined (t > l)",
    };
    writeln!(
        t,
        "\nKinetic subspace equals stoichiometric subspace: {ks_text}"
    )
    .unwrap();
    writeln!(
        t,
        "Deficiency zero theorem: {} (deficiency {}, weakly reversible: {}, reversible: {})",
        if dz.applies {
            "applies"
        } else {
            "does not apply"
        },
        dz.deficiency,
        yes_no(dz.weakly_reversible),
        yes_no(dz.reversible)
    )
    .unwrap();

    let flag_json: serde_json::Map<String, Value> = StructuralFlags::ROWS
        .iter()
        .zip(values)
        .map(|((name, _), v)| (name.to_lowercase().replace([' ', '-'], "_"), Value::Bool(v)))
        .collect();
    let json = json!({
        "command": "analyze",
        "input": input,
        "numbers": numbers_json(&x),
        "flags": flag_json,
        "kinetic_subspace": ks,
        "deficiency_zero": dz,
    });
    Report::ok(t, json)
}

pub fn fid(input: &str, net: &Network) -> Report {
    let d = finest(net);
    let independent = is_independent(&d);
    let mut t = format!("Network: {input}\n");
    writeln!(
        t,
        "Finest independent decomposition: {} blocks (independent: {})\n",
        d.len(),
        yes_no(independent)
    )
    .unwrap();
    let blocks: Vec<Vec<String>> = (0..d.len()).map(|i| d.block_labels(i)).collect();
    for (i, labels) in blocks.iter().enumerate() {
        writeln!(t, "N{}: {}", i + 1, labels.join(" ")).unwrap();
    }
    t.push('\n');
    let numbers = decomposition_numbers(&d);
    let headers: Vec<String> = std::iter::once("N".to_string())
        .chain((1..=d.len()).map(|i| format!("N{i}")))
        .collect();
    numbers_table(&mut t, &headers, &numbers);

    let json = json!({
        "command": "fid",
        "input": input,
        "independent": independent,
        "blocks": blocks.iter().zip(&numbers[1..]).map(|(labels, x)| json!({
            "reactions": labels,
            "numbers": numbers_json(x),
        })).collect::<Vec<_>>(),
        "parent": numbers_json(&numbers[0]),
    });
    Report::ok(t, json)
}

pub fn concordance(input: &str, net: &Network, budget: u64) -> Report {
    let v = check_concordance(net, budget);
    let dep = positive_dependence(net);
    let cons = conservation_certificate(net);
    let mut t = format!("Network: {input}\n");
    writeln!(
        t,
        "Concordant: {}",
        match v.label() {
            "concordant" => "yes",
            "discordant" => "no",
            _ => "unknown (node budget exhausted)",
        }
    )
    .unwrap();
    writeln!(t, "Nodes explored: {} (budget {budget})", v.nodes).unwrap();
    writeln!(t, "Positive dependent: {}", yes_no(dep.is_some())).unwrap();
    writeln!(t, "Conservative: {}", yes_no(cons.is_some())).unwrap();

    let mut witness = Value::Null;
    if let Some(w) = v.witness() {
        let verified = verify_witness(net, w).unwrap_or(false);
        writeln!(t, "\nWitness (verified: {}):", yes_no(verified)).unwrap();
        let alpha: Vec<String> = (0..net.num_reactions())
            .filter(|&j| !w.alpha[j].is_zero())
            .map(|j| format!("{} = {}", net.label(j), w.alpha[j]))
            .collect();
        let sigma: Vec<String> = net
            .species()
            .iter()
            .zip(&w.sigma)
            .filter(|(_, s)| !s.is_zero())
            .map(|(s, v)| format!("{s} = {v}"))
            .collect();
        writeln!(
            t,
            "  alpha (nonzero): {}",
            if alpha.is_empty() {
                "none".into()
            } else {
                alpha.join(", ")
            }
        )
        .unwrap();
        writeln!(t, "  sigma (nonzero): {}", sigma.join(", ")).unwrap();
        witness = json!({
            "alpha": rationals(&w.alpha),
            "sigma": rationals(&w.sigma),
            "verified": verified,
        });
    }
    let json = json!({
        "command": "concordance",
        "input": input,
        "verdict": v.label(),
        "nodes": v.nodes,
        "budget": budget,
        "witness": witness,
        "positive_dependence": dep.as_deref().map(rationals),
        "conservation_law": cons.as_deref().map(rationals),
        "reactions": (0..net.num_reactions()).map(|j| net.label(j)).collect::<Vec<_>>(),
        "species": net.species().iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    Report {
        text: t,
        json,
        exit_code: if v.is_unknown() { 2 } else { 0 },
    }
}

pub fn csen(inputs: [&str; 2], a: &Network, b: &Network) -> Result<Report, Failure> {
    let rep = transform::csen(a, b)?;
    let species: Vec<String> = rep.common_species.iter().map(ToString::to_string).collect();
    let common = reaction_lines(&rep.embedded1, &rep.common_original);
    let derived = reaction_lines(&rep.embedded1, &rep.embedding_derived);
    let u1 = reaction_lines(&rep.embedded1, &rep.unique1);
    let u2 = reaction_lines(&rep.embedded2, &rep.unique2);

    let mut t = format!("Networks: {} and {}\n", inputs[0], inputs[1]);
    writeln!(
        t,
        "Common species ({}): {}\n",
        species.len(),
        species.join(", ")
    )
    .unwrap();
    list(&mut t, "Common reactions of the original networks", &common);
    list(&mut t, "Common reactions derived by embedding", &derived);
    list(
        &mut t,
        &format!("Reactions unique to the embedded {}", inputs[0]),
        &u1,
    );
    list(
        &mut t,
        &format!("Reactions unique to the embedded {}", inputs[1]),
        &u2,
    );

    let json = json!({
        "command": "compare",
        "mode": "csen",
        "inputs": inputs,
        "common_species": species,
        "embedded": [all_reactions(&rep.embedded1), all_reactions(&rep.embedded2)],
        "common_original": common,
        "embedding_derived": derived,
        "unique": [u1, u2],
    });
    Ok(Report::ok(t, json))
}

pub fn core(inputs: [&str; 2], a: &Network, b: &Network) -> Result<Report, Failure> {
    let rep = transform::core(a, b)?;
    let reactions = all_reactions(&rep.core);
    let mut t = format!("Networks: {} and {}\n\n", inputs[0], inputs[1]);
    list(&mut t, "Core reactions", &reactions);
    writeln!(t, "\nReversible: {}", yes_no(rep.reversible)).unwrap();
    writeln!(t, "Deficiency: {}", rep.deficiency).unwrap();
    writeln!(t, "Rank: {}", rep.rank).unwrap();
    for (input, p) in inputs.iter().zip(&rep.parents) {
        writeln!(t, "\nIn {input}:").unwrap();
        for (i, labels) in p.blocks.iter().zip(&p.block_labels) {
            writeln!(t, "  FID block N{}: {}", i + 1, labels.join(" ")).unwrap();
        }
        writeln!(t, "  Rank of the block union: {}", p.union_rank).unwrap();
        writeln!(
            t,
            "  Rank of the union without the core: {}",
            p.complement_rank
        )
        .unwrap();
        writeln!(
            t,
            "  Core independent inside the union: {}",
            yes_no(p.independent_inside_union)
        )
        .unwrap();
    }
    let parents: Vec<Value> = rep
        .parents
        .iter()
        .map(|p| {
            json!({
                "fid_blocks": p.blocks.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "block_reactions": p.block_labels,
                "union_rank": p.union_rank,
                "complement_rank": p.complement_rank,
                "independent_inside_union": p.independent_inside_union,
            })
        })
        .collect();
    let json = json!({
        "command": "compare",
        "mode": "core",
        "inputs": inputs,
        "core": reactions,
        "reversible": rep.reversible,
        "deficiency": rep.deficiency,
        "rank": rep.rank,
        "parents": parents,
    });
    Ok(Report::ok(t, json))
}

fn m3cr_section(t: &mut String, input: &str, net: &Network, rep: &M3crReport) -> Value {
    let discordance = reaction_lines(net, &rep.discordance_set);
    let reverse_excluded: Vec<String> = (0..net.num_reactions())
        .filter(|j| !rep.reverse_container.contains(j))
        .map(|j| reaction_line(net, &net.reactions()[j]))
        .collect();
    writeln!(t, "\nIn {input}:").unwrap();
    writeln!(
        t,
        "  Container: {} of {} reactions",
        rep.container.num_reactions(),
        net.num_reactions()
    )
    .unwrap();
    writeln!(t, "  Maximality: {}", maximality(rep.maximality)).unwrap();
    let mut body = String::new();
    list(&mut body, "Discordance set", &discordance);
    if rep.order_dependent {
        list(
            &mut body,
            "Reverse-order discordance set",
            &reverse_excluded,
        );
    }
    for line in body.lines() {
        writeln!(t, "  {line}").unwrap();
    }
    json!({
        "container_size": rep.container.num_reactions(),
        "container": all_reactions(&rep.container),
        "discordance_set": discordance,
        "maximality": rep.maximality,
        "order_dependent": rep.order_dependent,
        "reverse_discordance_set": reverse_excluded,
        "undecided_checks": rep.undecided_checks,
    })
}

fn maximality(m: Maximality) -> &'static str {
    match m {
        Maximality::Verified => "verified",
        Maximality::Undecided => "undecided (node budget exhausted)",
        Maximality::Failed => "failed",
    }
}

pub fn compare_m3cr(
    inputs: [&str; 2],
    a: &Network,
    b: &Network,
    budget: u64,
) -> Result<Report, Failure> {
    let common = a.common_reactions(b);
    if common.is_empty() {
        return Err(crnkit::Error::NoCommonReactions.into());
    }
    let reps = [m3cr(a, &common, budget)?, m3cr(b, &common, budget)?];
    let mut t = format!("Networks: {} and {}\n", inputs[0], inputs[1]);
    writeln!(t, "Mandatory set: the {} common reactions", common.len()).unwrap();
    let parents: Vec<Value> = inputs
        .iter()
        .zip([a, b])
        .zip(&reps)
        .map(|((input, net), rep)| m3cr_section(&mut t, input, net, rep))
        .collect();
    let undecided = reps.iter().any(|r| r.maximality == Maximality::Undecided);
    let json = json!({
        "command": "compare",
        "mode": "m3cr",
        "inputs": inputs,
        "budget": budget,
        "mandatory_size": common.len(),
        "parents": parents,
    });
    Ok(Report {
        text: t,
        json,
        exit_code: if undecided { 2 } else { 0 },
    })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn equilibria(model: Model, samples: usize, seed: u64) -> Result<Report, Failure> {
    let net = model.network();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut whole = Vec::with_capacity(samples);
    let mut blocks = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (k, x) = model.random_point(&mut rng)?;
        let (w, b) = blockwise_residuals(&net, &k, &x)?;
        whole.push(w);
        blocks.push(b.into_iter().fold(0.0, f64::max));
    }
    let whole_max = whole.iter().copied().fold(0.0, f64::max);
    let block_max = blocks.iter().copied().fold(0.0, f64::max);
    let whole_median = median(&mut whole);

    let k = RateAssignment::random(&net, &mut rng);
    let scan = acr_scan(model, &k, samples, seed)?;
    let constant: Vec<&str> = scan
        .iter()
        .filter(|e| e.constant)
        .map(|e| e.species.as_str())
        .collect();

    let mut t = format!("Model: {model} (seed {seed}, {samples} samples)\n");
    writeln!(
        t,
        "Free parameters: {}",
        model.free_parameter_names().join(", ")
    )
    .unwrap();
    writeln!(
        t,
        "Relative residual, full network: max {whole_max:.3e}, median {whole_median:.3e}"
    )
    .unwrap();
    writeln!(t, "Relative residual, FID blocks: max {block_max:.3e}").unwrap();
    writeln!(t, "\nACR scan (constant when relative spread < 1e-9):").unwrap();
    let width = scan.iter().map(|e| e.species.len()).max().unwrap_or(0);
    for e in &scan {
        writeln!(
            t,
            "  {:width$}  {:8}  spread {:.3e}",
            e.species,
            if e.constant { "constant" } else { "varies" },
            e.spread
        )
        .unwrap();
    }
    writeln!(
        t,
        "ACR species: {}",
        if constant.is_empty() {
            "none".into()
        } else {
            constant.join(", ")
        }
    )
    .unwrap();

    let json = json!({
        "command": "equilibria",
        "model": model,
        "samples": samples,
        "seed": seed,
        "residual": {
            "max": whole_max,
            "median": whole_median,
            "block_max": block_max,
        },
        "acr": scan,
        "acr_species": constant,
    });
    Ok(Report::ok(t, json))
}
