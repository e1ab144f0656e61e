use std::fmt::Write as _;

use clique_spectra::enumeration::{argmax_energy, EnumSpec};
use clique_spectra::graph::GraphFile;
use clique_spectra::lemmas::path_radius;
use clique_spectra::quotient::{
    cliquepath_graph, cliquepath_partition, quotient_matrix, verify_radius_transfer,
};
use clique_spectra::report::{fmt_sig, reports_to_csv, summarize, Relation, VerificationReport};
use clique_spectra::spectra::{distance_energy, distance_spectrum, inertia, perron_pair};
use clique_spectra::{distance_matrix, sweep, CliqueTree, Result};
use serde_json::json;

use crate::output::Rendered;

fn join_sig(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_sig(x)).collect::<Vec<_>>().join(" ")
}

fn sizes_str(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn spectrum(g: &CliqueTree) -> Result<Rendered> {
    let d = distance_matrix(g);
    let s = distance_spectrum(&d)?;
    let inert = inertia(&s);
    let energy = distance_energy(&s);
    let json = json!({
        "n": g.vertex_count(),
        "block_sizes": g.block_sizes(),
        "path_sizes": g.path_sizes(),
        "eigenvalues": s.eigenvalues,
        "spectral_radius": s.largest(),
        "energy": energy,
        "inertia": inert,
        "residual": s.residual,
        "zero_threshold": s.zero_threshold,
    });

    let mut csv = String::from("index,eigenvalue\n");
    for (i, &x) in s.eigenvalues.iter().enumerate() {
        writeln!(csv, "{i},{}", fmt_sig(x)).unwrap();
    }

    let mut text = String::new();
    writeln!(text, "n: {}", g.vertex_count()).unwrap();
    writeln!(text, "block sizes: {}", sizes_str(&g.block_sizes())).unwrap();
    writeln!(text, "eigenvalues: {}", join_sig(&s.eigenvalues)).unwrap();
    writeln!(text, "spectral radius: {}", fmt_sig(s.largest())).unwrap();
    writeln!(text, "energy: {}", fmt_sig(energy)).unwrap();
    writeln!(text, "inertia: ({}, {}, {})", inert.positive, inert.zero, inert.negative).unwrap();
    writeln!(text, "residual: {}", fmt_sig(s.residual)).unwrap();
    Ok(Rendered {
        json,
        csv,
        text,
        pass: true,
    })
}

pub fn graph(g: &CliqueTree) -> Rendered {
    let file = GraphFile::from_tree(g);
    let d = distance_matrix(g);
    let mut csv = String::from("u,v\n");
    for (u, v) in g.edges() {
        writeln!(csv, "{u},{v}").unwrap();
    }
    let mut text = String::new();
    writeln!(text, "n: {}", g.vertex_count()).unwrap();
    for (i, b) in g.blocks().iter().enumerate() {
        writeln!(text, "block {i}: {}", sizes_str(b)).unwrap();
    }
    writeln!(text, "distance matrix:").unwrap();
    for row in d.to_rows() {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(text, "  {}", cells.join(" ")).unwrap();
    }
    Rendered {
        json: serde_json::to_value(&file).expect("graph file serializes"),
        csv,
        text,
        pass: true,
    }
}

fn relation_str(r: Relation) -> String {
    match r {
        Relation::Equal(tol) => format!("== (tol {})", fmt_sig(tol)),
        Relation::Less => "<".into(),
        Relation::LessEqual => "<=".into(),
        Relation::Greater => ">".into(),
        Relation::GreaterEqual => ">=".into(),
    }
}

pub fn reports(target: &str, reports: Vec<VerificationReport>) -> Rendered {
    let summary = summarize(&reports);
    let mut text = String::new();
    for r in &reports {
        let margin = r.min_margin().map(fmt_sig).unwrap_or_else(|| "-".into());
        writeln!(
            text,
            "{} {} {} min margin {margin}",
            if r.pass { "PASS" } else { "FAIL" },
            r.lemma,
            r.params_string()
        )
        .unwrap();
        for c in r.failed_checks() {
            writeln!(
                text,
                "  failed: {}: {} {} {} (margin {})",
                c.name,
                fmt_sig(c.lhs),
                relation_str(c.relation),
                fmt_sig(c.rhs),
                fmt_sig(c.margin)
            )
            .unwrap();
        }
        if let Some(note) = &r.note {
            writeln!(text, "  note: {note}").unwrap();
        }
    }
    writeln!(
        text,
        "{target}: {}/{} reports passed",
        summary.passed, summary.total
    )
    .unwrap();
    Rendered {
        json: json!({ "target": target, "summary": summary, "reports": reports }),
        csv: reports_to_csv(&reports),
        text,
        pass: summary.failed == 0,
    }
}

pub fn quotient(n1: usize, k: usize, n2: usize) -> Result<Rendered> {
    let g = cliquepath_graph(n1, k, n2)?;
    let d = distance_matrix(&g);
    let qs = quotient_matrix(&d, &cliquepath_partition(&g, n1, k, n2)?)?;
    let b = qs.quotient_f64();
    let lambda_b = perron_pair(&b)?.0;
    let lambda_d = distance_spectrum(&d)?.largest();
    let transfer = verify_radius_transfer(&g, &qs)?;
    let rows: Vec<Vec<String>> = qs
        .quotient
        .iter()
        .map(|row| row.iter().map(|q| q.to_string()).collect())
        .collect();
    let integer = qs.quotient_integer();
    let matrix = match &integer {
        Some(m) => json!(m),
        None => json!(rows),
    };
    let json = json!({
        "n1": n1,
        "k": k,
        "n2": n2,
        "n": g.vertex_count(),
        "block_sizes": g.block_sizes(),
        "cell_sizes": qs.partition.cell_sizes(),
        "quotient": matrix,
        "equitable": qs.equitable,
        "lambda_quotient": lambda_b,
        "lambda_distance": lambda_d,
        "difference": lambda_b - lambda_d,
        "lambda_path": path_radius(k)?,
        "pass": transfer.pass,
    });

    let mut csv = String::new();
    for row in &rows {
        writeln!(csv, "{}", row.join(",")).unwrap();
    }

    let mut text = String::new();
    writeln!(text, "block sizes: {}", sizes_str(&g.block_sizes())).unwrap();
    writeln!(text, "cell sizes: {}", sizes_str(&qs.partition.cell_sizes())).unwrap();
    writeln!(text, "quotient:").unwrap();
    for row in &rows {
        writeln!(text, "  [{}]", row.join(", ")).unwrap();
    }
    writeln!(text, "equitable: {}", qs.equitable).unwrap();
    writeln!(text, "lambda(quotient): {}", fmt_sig(lambda_b)).unwrap();
    writeln!(text, "lambda(distance): {}", fmt_sig(lambda_d)).unwrap();
    writeln!(text, "difference: {}", fmt_sig(lambda_b - lambda_d)).unwrap();
    Ok(Rendered {
        json,
        csv,
        text,
        pass: transfer.pass,
    })
}

pub fn extremal(spec: &EnumSpec) -> Result<Rendered> {
    let res = argmax_energy(spec)?;
    let mut text = String::new();
    writeln!(text, "search: {}", res.reading).unwrap();
    writeln!(
        text,
        "classes: {} (raw attachment stream: {})",
        res.isomorphism_classes, res.sequential_attachment_count
    )
    .unwrap();
    match &res.winner_path_sizes {
        Some(p) => writeln!(text, "winner: clique path {}", sizes_str(p)).unwrap(),
        None => writeln!(text, "winner: block sizes {}", sizes_str(&res.winner.block_sizes())).unwrap(),
    }
    writeln!(text, "energy: {}", fmt_sig(res.winner_energy)).unwrap();
    writeln!(text, "spectral radius: {}", fmt_sig(res.winner_radius)).unwrap();
    if let Some(r) = res.runner_up_energy {
        writeln!(text, "runner-up energy: {}", fmt_sig(r)).unwrap();
    }
    writeln!(text, "ties: {}", res.ties.len()).unwrap();
    if let Some(c) = &res.conjecture {
        writeln!(
            text,
            "balanced clique path {}: {}",
            sizes_str(&c.balanced_sizes),
            if c.holds { "maximal" } else { "not maximal" }
        )
        .unwrap();
    }
    let pass = res.conjecture.as_ref().is_none_or(|c| c.holds)
        && res.inertia_violations == 0
        && res.energy_identity_violations == 0;
    Ok(Rendered {
        json: serde_json::to_value(&res).expect("result serializes"),
        csv: res.certificates_csv(),
        text,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    Inertia,
    Energy,
    Quotient,
    Lemmas,
    Monotonicity,
    Multiset,
    Conjecture,
    GrahamPollak,
}

#[derive(Debug, Clone, Default)]
pub struct Ranges {
    pub n_max: Option<usize>,
    pub k_max: Option<usize>,
    pub n1_max: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
}

pub fn verify(target: Target, r: &Ranges) -> Result<Vec<VerificationReport>> {
    Ok(match target {
        Target::Inertia => sweep::inertia_reports(&sweep::clique_tree_population(2, r.n_max.unwrap_or(8))?),
        Target::Energy => sweep::energy_reports(&sweep::clique_tree_population(2, r.n_max.unwrap_or(8))?),
        Target::Quotient => sweep::quotient_sweep(r.n1_max.unwrap_or(5), r.k_max.unwrap_or(8))?,
        Target::Lemmas => {
            let k_max = r.k_max.unwrap_or(12);
            let mut out = sweep::norm_identity_sweep(3, k_max.max(3));
            out.extend(sweep::resolvent_identity_sweep(3, k_max)?);
            out.extend(sweep::gamma_difference_sweep(2, k_max)?);
            out.extend(sweep::factorization_sweep(r.n1_max.unwrap_or(5), k_max)?);
            out.extend(sweep::path_radius_bound_sweep(3, k_max)?);
            out.extend(sweep::gamma_chain_sweep(3, k_max)?);
            out.extend(sweep::perron_sweep(3, k_max)?);
            out
        }
        Target::Monotonicity => sweep::monotonicity_sweep(2, r.k_max.unwrap_or(6), 2, r.n_max.unwrap_or(10))?,
        Target::Multiset => sweep::multiset_maximiser_sweep(r.n_max.unwrap_or(8))?,
        Target::Conjecture => match (r.n, r.k) {
            (Some(n), Some(k)) => vec![sweep::conjecture_point(n, k)?],
            (Some(n), None) => (2..n).map(|k| sweep::conjecture_point(n, k)).collect::<Result<_>>()?,
            _ => sweep::conjecture_sweep(4, r.n_max.unwrap_or(9))?,
        },
        Target::GrahamPollak => sweep::graham_pollak_sweep(r.n_max.unwrap_or(9))?,
    })
}

pub fn target_name(t: Target) -> &'static str {
    match t {
        Target::Inertia => "inertia",
        Target::Energy => "energy",
        Target::Quotient => "quotient",
        Target::Lemmas => "lemmas",
        Target::Monotonicity => "monotonicity",
        Target::Multiset => "multiset",
        Target::Conjecture => "conjecture",
        Target::GrahamPollak => "graham-pollak",
    }
}
