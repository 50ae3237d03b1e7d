use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, NormalForm, Scalar};
use crate::quiver::{Combination, Path, QuiverSpec};

use super::category::{HomBasisElem, PresentedCategory};

/// Upper bound on the number of paths enumerated up to the truncation length.
pub const MAX_PATHS: usize = 200_000;

/// Evidence that every path of length `l_max` lies in the relation ideal.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AdmissibilityCertificate {
    pub l_max: usize,
    /// Number of paths of length exactly `l_max` checked.
    pub paths_at_bound: usize,
    /// Dimension of the relation ideal inside the span of paths of length at most `l_max`.
    pub ideal_dim: usize,
}

/// Paths `s → t` of length at most `l_max`, ordered by (length, arrow names).
#[derive(Debug, Clone)]
struct Block {
    paths: Vec<Path>,
    index: HashMap<Vec<usize>, usize>,
    /// Number of paths of length `< l_max` (a prefix of `paths`).
    short: usize,
    reducer: NormalForm,
}

/// The category presented by a quiver with relations, with the path data needed
/// to translate path combinations into hom-space coordinates.
#[derive(Debug, Clone)]
pub struct PathCategory {
    spec: QuiverSpec,
    cat: Arc<PresentedCategory>,
    blocks: Vec<Block>,
    certificate: AdmissibilityCertificate,
}

fn enumerate_paths(spec: &QuiverSpec, l: usize) -> Result<Vec<Vec<Path>>> {
    let n = spec.vertices.len();
    let mut blocks: Vec<Vec<Path>> = vec![Vec::new(); n * n];
    let mut layer: Vec<Path> = (0..n).map(Path::identity).collect();
    let mut total = 0;
    for len in 0..=l {
        let names = |p: &Path| -> Vec<String> { p.arrows.iter().map(|&a| spec.arrows[a].name.clone()).collect() };
        let mut sorted = layer.clone();
        sorted.sort_by_cached_key(names);
        total += sorted.len();
        if total > MAX_PATHS {
            return Err(Error::Invalid(format!(
                "more than {MAX_PATHS} paths of length at most {l}; lower the truncation"
            )));
        }
        for p in sorted {
            blocks[p.source * n + p.target].push(p);
        }
        if len == l {
            break;
        }
        let mut next = Vec::new();
        for p in &layer {
            for (i, a) in spec.arrows.iter().enumerate() {
                if a.source == p.target {
                    let mut q = p.clone();
                    q.arrows.push(i);
                    q.target = a.target;
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    Ok(blocks)
}

fn concat(first: &Path, then: &Path) -> Vec<usize> {
    let mut v = first.arrows.clone();
    v.extend_from_slice(&then.arrows);
    v
}

struct Analysis {
    blocks: Vec<Block>,
    certificate: AdmissibilityCertificate,
}

fn analyse(spec: &QuiverSpec) -> Result<Analysis> {
    spec.validate()?;
    let n = spec.vertices.len();
    let l = spec.l_max();
    let raw = enumerate_paths(spec, l)?;
    let field = spec.field;

    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(n * n);
    for paths in &raw {
        index.push(paths.iter().enumerate().map(|(i, p)| (p.arrows.clone(), i)).collect());
    }
    // Paths grouped by target (for the right-hand factor q of p·ρ·q) and by source.
    let mut into: Vec<Vec<&Path>> = vec![Vec::new(); n];
    let mut out_of: Vec<Vec<&Path>> = vec![Vec::new(); n];
    for paths in &raw {
        for p in paths {
            into[p.target].push(p);
            out_of[p.source].push(p);
        }
    }

    let mut cert_gens: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n * n];
    let mut trunc_gens: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n * n];
    let short: Vec<usize> = raw.iter().map(|b| b.iter().take_while(|p| p.len() < l).count()).collect();
    for rel in &spec.relations {
        let (s, t) = (rel.source(), rel.target());
        let maxlen = rel.terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
        let minlen = rel.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0);
        for q in &into[s] {
            for p in &out_of[t] {
                let outer = q.len() + p.len();
                let b = q.source * n + p.target;
                if outer + maxlen <= l {
                    let mut vec = vec![field.zero(); raw[b].len()];
                    for (c, w) in &rel.terms {
                        let full = [&q.arrows[..], &w.arrows[..], &p.arrows[..]].concat();
                        let i = index[b][&full];
                        vec[i] = &vec[i] + c;
                    }
                    cert_gens[b].push(vec);
                }
                if outer + minlen < l {
                    let mut vec = vec![field.zero(); short[b]];
                    for (c, w) in &rel.terms {
                        if outer + w.len() >= l {
                            continue;
                        }
                        let full = [&q.arrows[..], &w.arrows[..], &p.arrows[..]].concat();
                        let i = index[b][&full];
                        vec[i] = &vec[i] + c;
                    }
                    trunc_gens[b].push(vec);
                }
            }
        }
    }

    let mut paths_at_bound = 0;
    let mut ideal_dim = 0;
    let mut blocks = Vec::with_capacity(n * n);
    for (b, paths) in raw.into_iter().enumerate() {
        let cert = NormalForm::new(&Matrix::from_columns(field, paths.len(), &cert_gens[b]));
        ideal_dim += cert.rank();
        for (i, p) in paths.iter().enumerate().skip(short[b]) {
            paths_at_bound += 1;
            let mut e = vec![field.zero(); paths.len()];
            e[i] = field.one();
            if !cert.contains(&e) {
                return Err(Error::NotFiniteDimensional { witness: spec.path_label(p) });
            }
        }
        let reducer = NormalForm::new(&Matrix::from_columns(field, short[b], &trunc_gens[b]));
        blocks.push(Block { index: std::mem::take(&mut index[b]), paths, short: short[b], reducer });
    }
    Ok(Analysis { blocks, certificate: AdmissibilityCertificate { l_max: l, paths_at_bound, ideal_dim } })
}

/// Certifies that every path of length `l_max` lies in the relation ideal.
pub fn check_admissible(spec: &QuiverSpec) -> Result<AdmissibilityCertificate> {
    Ok(analyse(spec)?.certificate)
}

/// Builds the category presented by the quiver and its relations.
pub fn build_category(spec: &QuiverSpec) -> Result<PathCategory> {
    let Analysis { blocks, certificate } = analyse(spec)?;
    let n = spec.vertices.len();
    let l = certificate.l_max;
    let field = spec.field;
    let mut bases = Vec::with_capacity(n * n);
    for b in &blocks {
        bases.push(
            b.reducer
                .complement()
                .iter()
                .map(|&i| HomBasisElem { label: spec.path_label(&b.paths[i]), radical: !b.paths[i].is_empty() })
                .collect::<Vec<_>>(),
        );
    }
    let identities = (0..n)
        .map(|x| {
            let b = &blocks[x * n + x];
            b.index.get(&Vec::new()).and_then(|&i| b.reducer.complement_position(i))
        })
        .collect();
    let cat = PresentedCategory::from_parts(field, spec.vertices.clone(), bases, identities, |x, y, z, g, f| {
        let fp = &blocks[x * n + y].paths[blocks[x * n + y].reducer.complement()[f]];
        let gp = &blocks[y * n + z].paths[blocks[y * n + z].reducer.complement()[g]];
        let target = &blocks[x * n + z];
        let arrows = concat(fp, gp);
        if arrows.len() >= l {
            return vec![field.zero(); target.reducer.complement().len()];
        }
        target.reducer.project_basis(target.index[&arrows])
    });
    Ok(PathCategory { spec: spec.clone(), cat: Arc::new(cat), blocks, certificate })
}

impl PathCategory {
    pub fn spec(&self) -> &QuiverSpec {
        &self.spec
    }

    pub fn category(&self) -> &Arc<PresentedCategory> {
        &self.cat
    }

    pub fn certificate(&self) -> &AdmissibilityCertificate {
        &self.certificate
    }

    pub fn l_max(&self) -> usize {
        self.certificate.l_max
    }

    /// The path representing basis element `i` of `C(x, y)`.
    pub fn basis_path(&self, x: usize, y: usize, i: usize) -> &Path {
        let b = &self.blocks[x * self.spec.vertices.len() + y];
        &b.paths[b.reducer.complement()[i]]
    }

    /// Coordinates of a path in `C(source, target)`.
    pub fn path_element(&self, p: &Path) -> Vec<Scalar> {
        let n = self.spec.vertices.len();
        let b = &self.blocks[p.source * n + p.target];
        if p.len() >= self.l_max() {
            return vec![self.spec.field.zero(); b.reducer.complement().len()];
        }
        b.reducer.project_basis(b.index[&p.arrows])
    }

    /// Coordinates of a combination of parallel paths, with its endpoints.
    pub fn element(&self, c: &Combination) -> Result<(usize, usize, Vec<Scalar>)> {
        self.spec.check_combination(c, false).map_err(Error::Invalid)?;
        let (x, y) = (c.source(), c.target());
        let n = self.spec.vertices.len();
        let b = &self.blocks[x * n + y];
        let mut v = vec![self.spec.field.zero(); b.short];
        for (coef, p) in &c.terms {
            if p.len() < self.l_max() {
                let i = b.index[&p.arrows];
                v[i] = &v[i] + coef;
            }
        }
        Ok((x, y, b.reducer.project(&v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{parse_spec, RelationPolicy};

    fn build(src: &str) -> Result<PathCategory> {
        build_category(&parse_spec(src.as_bytes()).unwrap())
    }

    #[test]
    fn a2_hom_dimensions() {
        let c = build("vertices 1 2; arrow a: 1 -> 2").unwrap();
        let k = c.category();
        assert_eq!((k.dim(0, 0), k.dim(0, 1), k.dim(1, 1), k.dim(1, 0)), (1, 1, 1, 0));
        assert_eq!(k.basis(0, 1)[0].label, "a");
        k.check_axioms().unwrap();
    }

    #[test]
    fn dual_numbers_from_loop() {
        let c = build("truncate 3; vertices p; arrows x: p -> p; relations x*x").unwrap();
        let k = c.category();
        assert_eq!(k.dim(0, 0), 2);
        let labels: Vec<_> = k.basis(0, 0).iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, ["id(p)", "x"]);
        k.check_axioms().unwrap();
        assert_eq!(c.certificate().paths_at_bound, 1);
    }

    #[test]
    fn free_loop_is_not_finite_dimensional() {
        let e = build("truncate 10; vertices p; arrows x: p -> p").unwrap_err();
        match e {
            Error::NotFiniteDimensional { witness } => {
                assert_eq!(witness, ["x"; 10].join("*"));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn acyclic_default_bound_certifies() {
        let c = build("vertices 1 2 3 4; arrows a: 1 -> 2, b: 2 -> 3, c: 3 -> 4").unwrap();
        assert_eq!(c.l_max(), 4);
        assert_eq!(c.certificate().paths_at_bound, 0);
        assert_eq!(c.category().dim(0, 3), 1);
    }

    #[test]
    fn non_homogeneous_relation_is_not_certified_by_truncation() {
        // x^2 - x^3 generates an ideal containing x^2 = x^3 = x^4 = ..., none of which vanish.
        let e = build("truncate 4; vertices p; arrows x: p -> p; relations x*x - x*x*x").unwrap_err();
        assert!(matches!(e, Error::NotFiniteDimensional { .. }));
    }

    #[test]
    fn non_homogeneous_relation_with_vanishing_tail() {
        // x^2 = x^3 together with x^3 = 0 gives K[x]/(x^2).
        let c = build("truncate 3; vertices p; arrows x: p -> p; relations x*x - x*x*x, x*x*x").unwrap();
        assert_eq!(c.category().dim(0, 0), 2);
        c.category().check_axioms().unwrap();
    }

    #[test]
    fn commutative_square() {
        let c =
            build("field q\nvertices 1 2 3 4\narrows a: 1 -> 2, b: 2 -> 4, c: 1 -> 3, d: 3 -> 4\nrelations b*a - d*c")
                .unwrap();
        let k = c.category();
        assert_eq!(k.dim(0, 3), 1);
        k.check_axioms().unwrap();
        let ba = c.path_element(&c.spec().path_from_names(&["b", "a"]).unwrap());
        let dc = c.path_element(&c.spec().path_from_names(&["d", "c"]).unwrap());
        assert_eq!(ba, dc);
    }

    /// Oracle: rank of the relation span inside the length-≤2 path space 0 → 3.
    #[test]
    fn truncated_staircase_n3_hom_dimension() {
        let mut spec =
            parse_spec(b"field q\nvertices 0 1 2 3\narrows a1: 1 -> 2, a2: 2 -> 3, b1: 0 -> 2, b2: 0 -> 3").unwrap();
        let rel = Combination {
            terms: vec![
                (spec.field.one(), spec.path_from_names(&["a2", "b1"]).unwrap()),
                (-spec.field.one(), spec.path_from_names(&["b2"]).unwrap()),
            ],
        };
        spec.relations.push(rel);
        spec.relation_policy = RelationPolicy::AllowShortPaths;
        let c = build_category(&spec).unwrap();
        // Paths 0 -> 3: b2 and a2*b1; the relation span has rank 1.
        let paths = Matrix::identity(spec.field, 2);
        let relation_span = Matrix::from_i64(spec.field, &[&[-1], &[1]]);
        assert_eq!(paths.rank() - relation_span.rank(), 1);
        assert_eq!(c.category().dim(0, 3), 1);
        assert_eq!(c.category().basis(0, 3)[0].label, "b2");
        c.category().check_axioms().unwrap();
    }

    #[test]
    fn combination_coordinates() {
        let c = build("field q\nvertices 1 2 3\narrows a: 1 -> 2, b: 2 -> 3").unwrap();
        let spec = c.spec();
        let comb = Combination { terms: vec![(spec.field.from_i64(3), spec.path_from_names(&["b", "a"]).unwrap())] };
        let (x, y, v) = c.element(&comb).unwrap();
        assert_eq!((x, y), (0, 2));
        assert_eq!(v, vec![spec.field.from_i64(3)]);
    }
}
