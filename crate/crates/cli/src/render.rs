use std::fmt::Write;

use quivhom::evidence::EvidenceReport;
use quivhom::pathcat::PathCategory;
use quivhom::sie::{SieCertificate, Witness};
use serde_json::{Map, Value};

fn table(pc: &PathCategory, dim: impl Fn(usize, usize) -> usize) -> String {
    let c = pc.category();
    let n = c.num_objects();
    let w = c.objects().iter().map(|s| s.len()).max().unwrap_or(1).max(3);
    let mut out = format!("{:>w$} |", "");
    for y in 0..n {
        write!(out, " {:>w$}", c.object_name(y)).unwrap();
    }
    out.push('\n');
    for x in 0..n {
        write!(out, "{:>w$} |", c.object_name(x)).unwrap();
        for y in 0..n {
            write!(out, " {:>w$}", dim(x, y)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn build(pc: &PathCategory, body: &Map<String, Value>) -> String {
    let c = pc.category();
    let mut out = format!(
        "category {} over {}: {} objects, total dimension {}\n",
        body["category"].as_str().unwrap_or(""),
        c.field(),
        c.num_objects(),
        c.total_dim()
    );
    let adm = &body["admissibility"];
    writeln!(
        out,
        "admissible: paths of length {} lie in the relation ideal ({} checked)",
        adm["l_max"], adm["paths_at_bound"]
    )
    .unwrap();
    out.push_str("hom dimensions (row x, column y: dim C(x, y))\n");
    out.push_str(&table(pc, |x, y| c.dim(x, y)));
    if let Some(Value::Object(ideals)) = body.get("ideals") {
        for (name, dims) in ideals {
            let total: u64 = dims.as_object().map_or(0, |m| m.values().filter_map(Value::as_u64).sum());
            writeln!(out, "ideal {name}: dimension {total}").unwrap();
        }
    }
    if let Some(Value::Object(mods)) = body.get("modules") {
        for (name, dims) in mods {
            writeln!(out, "module {name}: dims {dims}").unwrap();
        }
    }
    out
}

pub fn ext(body: &Map<String, Value>) -> String {
    let mut out = format!(
        "Ext^i({}, {}), projective dimension of {}: {}\n",
        body["left"].as_str().unwrap_or(""),
        body["right"].as_str().unwrap_or(""),
        body["left"].as_str().unwrap_or(""),
        body["left_projective_dimension"].as_str().unwrap_or("")
    );
    if let Some(dims) = body["dims"].as_array() {
        for (i, d) in dims.iter().enumerate() {
            writeln!(out, "  i = {i}: {d}").unwrap();
        }
    }
    out
}

fn witness(w: &Witness) -> String {
    let mut s = format!("{} in degree {}", w.module, w.degree);
    if let Some(o) = &w.object {
        write!(s, " at {o}").unwrap();
    }
    write!(s, ", dimension {}", w.dimension).unwrap();
    if let Some(other) = w.compared_with {
        write!(s, " vs {other}").unwrap();
    }
    s
}

pub fn certificate(category: &str, ideal: &str, cert: &SieCertificate) -> String {
    let mut out = format!("strong idempotency of {ideal} in {category}, degrees up to {}\n", cert.degree_checked);
    writeln!(out, "  ideal dimension: {}", cert.ideal_dims).unwrap();
    match &cert.idempotency_witness {
        None => writeln!(out, "  idempotent: yes").unwrap(),
        Some(w) => writeln!(out, "  idempotent: no, {w} lies outside I∘I").unwrap(),
    }
    writeln!(out, "  slices I(c, -) projective: {}", if cert.slices_projective { "yes" } else { "no" }).unwrap();
    for c in &cert.criteria {
        write!(out, "  ({}) {:<14} {}", c.id, c.verdict.to_string(), c.statement).unwrap();
        if let Some(w) = &c.witness {
            write!(out, " [witness: {}]", witness(w)).unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "  criteria consistent: {}", if cert.consistent { "yes" } else { "NO" }).unwrap();
    let how = if cert.via_shortcut { " (projective slices)" } else { "" };
    writeln!(out, "verdict: {}{how}", cert.verdict).unwrap();
    out
}

pub fn report(r: &EvidenceReport) -> String {
    let mut out = format!("evidence for {} modulo {}, degree {}\n", r.category, r.ideal, r.degree);
    writeln!(out, "objects: {}", r.objects.join(" ")).unwrap();
    let h = &r.hypotheses;
    writeln!(
        out,
        "hypotheses:\n  strong idempotency: {}{}",
        h.strong_idempotency.verdict,
        if h.strong_idempotency.via_shortcut { " (projective slices)" } else { "" }
    )
    .unwrap();
    writeln!(
        out,
        "  projective dimension of C/I as a bimodule: {} (ranks {:?})",
        h.bimodule_projective_dimension, h.bimodule_resolution_ranks
    )
    .unwrap();
    let c = &r.consequences;
    out.push_str("consequences:\n");
    for e in &c.perfect_preservation.entries {
        writeln!(out, "  pd over C of {}: {}", e.module, e.projective_dimension).unwrap();
    }
    let bad: Vec<_> = c.ext_comparison.iter().filter(|row| !row.iso).collect();
    writeln!(
        out,
        "  Ext comparisons: {} of {} isomorphisms",
        c.ext_comparison.len() - bad.len(),
        c.ext_comparison.len()
    )
    .unwrap();
    for row in bad.iter().take(5) {
        writeln!(
            out,
            "    Ext^{}({}, {}): {} over C/I, {} over C",
            row.degree, row.left, row.right, row.quotient_dim, row.parent_dim
        )
        .unwrap();
    }
    writeln!(out, "  gl.dim C {}, gl.dim C/I {}", c.gldim_parent, c.gldim_quotient).unwrap();
    writeln!(
        out,
        "  singularity categories vanish: {}",
        if c.singularity_categories_vanish { "yes" } else { "not shown" }
    )
    .unwrap();
    if let Some(op) = &r.one_point {
        out.push_str("one-point extension:\n");
        writeln!(
            out,
            "  kernel slices are representable and projective: {}",
            yes(op.slices.iter().all(|s| s.projective && s.equals_representable != Some(false)))
        )
        .unwrap();
        writeln!(out, "  bimodule projectivity: {}", yes(op.bimodule.holds())).unwrap();
        writeln!(out, "  quotient is the base category: {}", yes(op.quotient_is_base)).unwrap();
        if let Some(p) = &op.presentation {
            writeln!(out, "  matches the quiver presentation: {}", yes(p.holds())).unwrap();
        }
    }
    for n in &r.notes {
        writeln!(out, "note: {n}").unwrap();
    }
    writeln!(out, "verdict: {}", r.verdict).unwrap();
    out
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "NO"
    }
}
