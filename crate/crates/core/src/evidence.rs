//! Evidence that restriction along `C → C/I` induces a singular equivalence:
//! the hypotheses (strong idempotency, finite projective dimension of `I` as
//! a bimodule) and the consequences that can be observed in bounded degree.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::bimod::{bimodule_resolution, ideal_bimodule, Enveloping};
use crate::error::Result;
use crate::matrixcat::{
    kernel_ideal, match_staircase, verify_bimodule_projectivity, verify_representable_slices, BimoduleProjectivity,
    PresentationMatch, SliceCheck, TriangularCategory,
};
use crate::modcat::{resolve, simple, yoneda_projective, ProjDim};
use crate::pathcat::{PathCategory, PresentedCategory};
use crate::sie::{
    check_strongly_idempotent, Comparison, IdealContext, SieCertificate, TestModule, TestModules, Verdict,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PdEntry {
    pub module: String,
    pub projective_dimension: ProjDim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectPreservation {
    /// `pd_C π_* P` for each representable `P` of `C/I`.
    pub entries: Vec<PdEntry>,
    pub all_finite: bool,
    pub max_pd: Option<usize>,
}

pub fn check_perfect_preservation(ctx: &IdealContext, n: usize) -> Result<PerfectPreservation> {
    let q = ctx.q();
    let mut entries = Vec::new();
    for c in q.nonzero_objects() {
        let p = Arc::new(ctx.pullback(&yoneda_projective(q, c)));
        entries.push(PdEntry {
            module: format!("P({})", q.object_name(c)),
            projective_dimension: resolve(&p, n)?.projective_dimension(),
        });
    }
    let all_finite = entries.iter().all(|e| e.projective_dimension.exact().is_some());
    let max_pd = if all_finite { entries.iter().filter_map(|e| e.projective_dimension.exact()).max() } else { None };
    Ok(PerfectPreservation { entries, all_finite, max_pd })
}

/// A bound on the global dimension from the simples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlDimBound {
    AtMost(usize),
    Exceeds(usize),
}

impl GlDimBound {
    pub fn is_finite(&self) -> bool {
        matches!(self, GlDimBound::AtMost(_))
    }
}

impl fmt::Display for GlDimBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlDimBound::AtMost(k) => write!(f, "≤ {k}"),
            GlDimBound::Exceeds(n) => write!(f, "> {n}"),
        }
    }
}

impl Serialize for GlDimBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn gldim_bound(cat: &Arc<PresentedCategory>, n: usize) -> Result<GlDimBound> {
    let mut max = 0;
    for x in cat.nonzero_objects() {
        match resolve(&Arc::new(simple(cat, x)?), n)?.projective_dimension() {
            ProjDim::Exactly(k) => max = max.max(k),
            ProjDim::Exceeds(_) => return Ok(GlDimBound::Exceeds(n)),
        }
    }
    Ok(GlDimBound::AtMost(max))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtRow {
    pub left: String,
    pub right: String,
    pub degree: usize,
    pub quotient_dim: usize,
    pub parent_dim: usize,
    pub iso: bool,
}

/// `φ^i` on each pair in each degree of `degrees`.
pub fn stable_ext_comparison(
    ctx: &IdealContext,
    pairs: &[(TestModule, TestModule)],
    degrees: std::ops::RangeInclusive<usize>,
) -> Result<Vec<ExtRow>> {
    let top = *degrees.end();
    let mut cache: Vec<(String, Comparison)> = Vec::new();
    let mut rows = Vec::new();
    for (f, f2) in pairs {
        let idx = match cache.iter().position(|(name, _)| *name == f.name) {
            Some(i) => i,
            None => {
                cache.push((f.name.clone(), Comparison::new(ctx, &f.rep, top)?));
                cache.len() - 1
            }
        };
        for i in degrees.clone() {
            let m = cache[idx].1.phi(ctx, &f2.rep, i)?;
            rows.push(ExtRow {
                left: f.name.clone(),
                right: f2.name.clone(),
                degree: i,
                quotient_dim: m.quotient_dim,
                parent_dim: m.parent_dim,
                iso: m.iso,
            });
        }
    }
    Ok(rows)
}

/// All ordered pairs of simples of `C/I` at nonzero objects.
pub fn simple_pairs(ctx: &IdealContext) -> Vec<(TestModule, TestModule)> {
    let simples: Vec<TestModule> =
        TestModules::standard(ctx).left.into_iter().filter(|m| m.name.starts_with('S')).collect();
    simples.iter().flat_map(|a| simples.iter().map(move |b| (a.clone(), b.clone()))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportVerdict {
    Supported,
    RefutedHypothesis,
    Inconclusive(usize),
}

impl fmt::Display for ReportVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportVerdict::Supported => f.write_str("SUPPORTED"),
            ReportVerdict::RefutedHypothesis => f.write_str("REFUTED-HYPOTHESIS"),
            ReportVerdict::Inconclusive(n) => write!(f, "INCONCLUSIVE({n})"),
        }
    }
}

impl Serialize for ReportVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypotheses {
    pub strong_idempotency: SieCertificate,
    pub bimodule_projective_dimension: ProjDim,
    /// Number of generators of each term of the bimodule resolution of `I`.
    pub bimodule_resolution_ranks: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Consequences {
    pub perfect_preservation: PerfectPreservation,
    pub ext_comparison: Vec<ExtRow>,
    pub gldim_parent: GlDimBound,
    pub gldim_quotient: GlDimBound,
    /// Both global dimensions are finite, so both singularity categories are zero.
    pub singularity_categories_vanish: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OnePointEvidence {
    pub slices: Vec<SliceCheck>,
    pub bimodule: BimoduleProjectivity,
    pub quotient_is_base: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationMatch>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvidenceReport {
    pub schema: u32,
    pub category: String,
    pub ideal: String,
    pub degree: usize,
    pub objects: Vec<String>,
    pub hom_dims: BTreeMap<String, usize>,
    pub ideal_dims: BTreeMap<String, usize>,
    pub quotient_hom_dims: BTreeMap<String, usize>,
    pub hypotheses: Hypotheses,
    pub consequences: Consequences,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_point: Option<OnePointEvidence>,
    pub verdict: ReportVerdict,
    pub notes: Vec<String>,
}

fn pair_table(cat: &PresentedCategory, dim: impl Fn(usize, usize) -> usize) -> BTreeMap<String, usize> {
    let n = cat.num_objects();
    let mut out = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            out.insert(format!("{}->{}", cat.object_name(x), cat.object_name(y)), dim(x, y));
        }
    }
    out
}

/// Combines the component results into a verdict.
pub fn decide(h: &Hypotheses, c: &Consequences, n: usize) -> ReportVerdict {
    if h.strong_idempotency.verdict == Verdict::Fail {
        return ReportVerdict::RefutedHypothesis;
    }
    let pd_ok = matches!(h.bimodule_projective_dimension, ProjDim::Exactly(k) if k <= n);
    let consequences_ok = c.perfect_preservation.all_finite && c.ext_comparison.iter().all(|r| r.iso);
    if pd_ok && consequences_ok {
        ReportVerdict::Supported
    } else {
        ReportVerdict::Inconclusive(n)
    }
}

pub fn build_report(ctx: &IdealContext, category: &str, ideal: &str, n: usize) -> Result<EvidenceReport> {
    let cat = &ctx.cat;
    let q = ctx.q();
    let sie = check_strongly_idempotent(ctx, n, &TestModules::standard(ctx))?;
    let env = Enveloping::new(cat);
    let (ib, _) = ideal_bimodule(&env, &ctx.ideal)?;
    let res = bimodule_resolution(&ib, n)?;
    let hypotheses = Hypotheses {
        strong_idempotency: sie,
        bimodule_projective_dimension: res.projective_dimension(),
        bimodule_resolution_ranks: res.terms().iter().map(|t| t.rank()).collect(),
    };
    let gldim_parent = gldim_bound(cat, n)?;
    let gldim_quotient = gldim_bound(q, n)?;
    let consequences = Consequences {
        perfect_preservation: check_perfect_preservation(ctx, n)?,
        ext_comparison: stable_ext_comparison(ctx, &simple_pairs(ctx), 0..=n)?,
        gldim_parent,
        gldim_quotient,
        singularity_categories_vanish: gldim_parent.is_finite() && gldim_quotient.is_finite(),
    };
    let verdict = decide(&hypotheses, &consequences, n);
    let mut notes = vec![format!("all checks are bounded: degrees up to {n}, resolutions truncated at length {n}")];
    if verdict == ReportVerdict::Supported && consequences.singularity_categories_vanish {
        notes.push(format!(
            "both global dimensions are finite (C: {gldim_parent}, C/I: {gldim_quotient}); both singularity categories are zero, so the equivalence holds trivially here"
        ));
    }
    if !hypotheses.strong_idempotency.consistent {
        notes.push("the equivalent strong-idempotency criteria disagreed".into());
    }
    Ok(EvidenceReport {
        schema: SCHEMA_VERSION,
        category: category.into(),
        ideal: ideal.into(),
        degree: n,
        objects: cat.objects().to_vec(),
        hom_dims: pair_table(cat, |x, y| cat.dim(x, y)),
        ideal_dims: pair_table(cat, |x, y| ctx.ideal.dim(x, y)),
        quotient_hom_dims: pair_table(q, |x, y| q.dim(x, y)),
        hypotheses,
        consequences,
        one_point: None,
        verdict,
        notes,
    })
}

/// The report for `Λ` and its kernel ideal, with the checks specific to
/// one-point extensions. `presented` is a quiver presentation to match against `Λ`.
pub fn build_one_point_report(
    tri: &TriangularCategory,
    category: &str,
    n: usize,
    presented: Option<&PathCategory>,
) -> Result<EvidenceReport> {
    let k = kernel_ideal(tri)?;
    let ctx = IdealContext::new(&k.ideal)?;
    let mut report = build_report(&ctx, category, "kernel", n)?;
    let slices = verify_representable_slices(tri, &k)?;
    let bimodule = verify_bimodule_projectivity(tri, &k, n)?;
    let quotient_is_base = k.check(tri).is_ok();
    let presentation = presented.map(|p| match_staircase(p, tri)).transpose()?;
    let structure_holds = slices.iter().all(|s| s.projective)
        && bimodule.holds()
        && quotient_is_base
        && presentation.as_ref().is_none_or(PresentationMatch::holds);
    if !structure_holds && report.verdict == ReportVerdict::Supported {
        report.verdict = ReportVerdict::Inconclusive(n);
        report.notes.push("a structural check on the one-point extension failed".into());
    }
    report.one_point = Some(OnePointEvidence { slices, bimodule, quotient_is_base, presentation });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathcat::build_category;
    use crate::quiver::parse_spec;

    fn cat(src: &str) -> Arc<PresentedCategory> {
        build_category(&parse_spec(src.as_bytes()).unwrap()).unwrap().category().clone()
    }

    #[test]
    fn gldim_examples() {
        assert_eq!(gldim_bound(&cat("vertices 1 2 3; arrows a: 1 -> 2, b: 2 -> 3"), 4).unwrap(), GlDimBound::AtMost(1));
        assert_eq!(gldim_bound(&cat("vertices 1 2"), 4).unwrap(), GlDimBound::AtMost(0));
        let d = cat("truncate 2; vertices p; arrows x: p -> p; relations x*x");
        assert_eq!(gldim_bound(&d, 5).unwrap().to_string(), "> 5");
    }

    #[test]
    fn verdict_strings() {
        assert_eq!(ReportVerdict::Inconclusive(8).to_string(), "INCONCLUSIVE(8)");
        assert_eq!(serde_json::to_string(&ReportVerdict::RefutedHypothesis).unwrap(), "\"REFUTED-HYPOTHESIS\"");
    }
}
