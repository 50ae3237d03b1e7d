//! Triangular matrix categories `Λ = [T 0; M U]`, one-point extensions, and
//! the ideal of morphisms out of the `T` part.
//!
//! `Λ` is stored with indecomposable objects: the objects of `T` first, then
//! those of `U`. `Λ(t, t') = T(t, t')`, `Λ(t, u) = M(t, u)`, `Λ(u, u') = U(u, u')`
//! and `Λ(u, t) = 0`.

use std::sync::Arc;

use serde::Serialize;

use crate::bimod::{bimodule_pd_bound, canonical_sequence, ideal_bimodule, CanonicalSequence, Enveloping};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Scalar};
use crate::modcat::{projective_cover, yoneda_projective, FreeModule, ProjDim, Rep};
use crate::pathcat::{
    build_category, opposite, quotient_category, tensor, HomBasisElem, IdealData, LinearFunctor, PathCategory,
    PresentedCategory, Quotient,
};
use crate::quiver::{Arrow, Combination, ModuleSpec, Path, QuiverSpec, RelationPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Part {
    T,
    M,
    U,
}

#[derive(Clone, Debug)]
pub struct TriangularCategory {
    cat: Arc<PresentedCategory>,
    t: Arc<PresentedCategory>,
    u: Arc<PresentedCategory>,
    /// `M` as a module over `T^op ⊗ U`.
    bifunctor: Arc<Rep>,
}

impl TriangularCategory {
    pub fn category(&self) -> &Arc<PresentedCategory> {
        &self.cat
    }

    pub fn t(&self) -> &Arc<PresentedCategory> {
        &self.t
    }

    pub fn u(&self) -> &Arc<PresentedCategory> {
        &self.u
    }

    pub fn bifunctor(&self) -> &Arc<Rep> {
        &self.bifunctor
    }

    pub fn t_count(&self) -> usize {
        self.t.num_objects()
    }

    pub fn u_object(&self, j: usize) -> usize {
        self.t_count() + j
    }

    pub fn part(&self, x: usize, y: usize) -> Option<Part> {
        let nt = self.t_count();
        match (x < nt, y < nt) {
            (true, true) => Some(Part::T),
            (true, false) => Some(Part::M),
            (false, false) => Some(Part::U),
            (false, true) => None,
        }
    }

    /// `T` is a single object with endomorphisms `K`.
    pub fn is_one_point_extension(&self) -> bool {
        self.t.num_objects() == 1 && self.t.dim(0, 0) == 1 && self.t.identity(0).is_some()
    }
}

/// Builds `Λ` from `T`, `U` and a bimodule `M` over `T^op ⊗ U`.
pub fn triangular_matrix_category(
    t: &Arc<PresentedCategory>,
    u: &Arc<PresentedCategory>,
    m: &Rep,
) -> Result<TriangularCategory> {
    if t.field() != u.field() {
        return Err(Error::Invalid("T and U are over different fields".into()));
    }
    let env = Arc::new(tensor(&opposite(t), u));
    if **m.category() != *env {
        return Err(Error::BimoduleAxiomViolation("M is not given over T^op ⊗ U".into()));
    }
    m.check().map_err(Error::BimoduleAxiomViolation)?;
    let (nt, nu) = (t.num_objects(), u.num_objects());
    let n = nt + nu;
    let field = t.field();
    let mobj = |ti: usize, uj: usize| ti * nu + uj;

    let mut objects: Vec<String> = t.objects().to_vec();
    objects.extend(u.objects().iter().cloned());
    for (i, o) in objects.iter().enumerate() {
        if objects[..i].contains(o) {
            return Err(Error::Invalid(format!("object name `{o}` occurs in both T and U")));
        }
    }
    let mut bases = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            bases.push(match (x < nt, y < nt) {
                (true, true) => t.basis(x, y).to_vec(),
                (true, false) => {
                    let uy = y - nt;
                    (0..m.dim(mobj(x, uy)))
                        .map(|k| HomBasisElem {
                            label: format!("m{k}:{}->{}", t.object_name(x), u.object_name(uy)),
                            radical: true,
                        })
                        .collect()
                }
                (false, false) => u.basis(x - nt, y - nt).to_vec(),
                (false, true) => Vec::new(),
            });
        }
    }
    let d = |x: usize, y: usize| bases[x * n + y].len();
    let dims: Vec<usize> = (0..n * n).map(|i| d(i / n, i % n)).collect();
    let mut identities: Vec<Option<usize>> = (0..nt).map(|x| t.identity(x)).collect();
    identities.extend((0..nu).map(|j| u.identity(j)));

    let cat = PresentedCategory::from_parts(field, objects, bases.clone(), identities, |x, y, z, g, f| {
        let len = dims[x * n + z];
        match (x < nt, y < nt, z < nt) {
            (true, true, true) => t.compose_basis(x, y, z, g, f).to_vec(),
            (false, false, false) => u.compose_basis(x - nt, y - nt, z - nt, g, f).to_vec(),
            // g ∈ M(y, z), f ∈ T(x, y) = T^op(y, x): g • f over (y, z) → (x, z).
            (true, true, false) => match u.identity(z - nt) {
                Some(idz) => {
                    let k = f * u.dim(z - nt, z - nt) + idz;
                    m.act(mobj(y, z - nt), mobj(x, z - nt), k).column(g)
                }
                None => vec![field.zero(); len],
            },
            // g ∈ U(y, z), f ∈ M(x, y): g • f over (x, y) → (x, z).
            (true, false, false) => match t.identity(x) {
                Some(idx) => {
                    let k = idx * u.dim(y - nt, z - nt) + g;
                    m.act(mobj(x, y - nt), mobj(x, z - nt), k).column(f)
                }
                None => vec![field.zero(); len],
            },
            _ => vec![field.zero(); len],
        }
    });
    cat.check_axioms().map_err(Error::BimoduleAxiomViolation)?;
    Ok(TriangularCategory { cat: Arc::new(cat), t: t.clone(), u: u.clone(), bifunctor: Arc::new(m.clone()) })
}

fn fresh_name(u: &PresentedCategory) -> String {
    let taken = |s: &str| u.object_index(s).is_some();
    ["0", "N"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..).map(|k| format!("N{k}")))
        .find(|s| !taken(s))
        .expect("unbounded supply of names")
}

/// `[K 0; M U]` for a `U`-module `M`.
pub fn one_point_extension(u: &Arc<PresentedCategory>, m: &Rep) -> Result<TriangularCategory> {
    if **m.category() != **u {
        return Err(Error::Invalid("the module is not over U".into()));
    }
    let t = Arc::new(PresentedCategory::point(u.field(), &fresh_name(u)));
    let env = Arc::new(tensor(&opposite(&t), u));
    triangular_matrix_category(&t, u, &m.rebase(env))
}

/// `𝓘`: morphisms out of objects of `T`, with the quotient `Λ/𝓘` and the
/// identification of `U` with it.
#[derive(Clone, Debug)]
pub struct KernelIdeal {
    pub ideal: IdealData,
    pub quotient: Quotient,
    pub sequence: CanonicalSequence,
    /// `U → Λ/𝓘`, object `j` to object `|T| + j`.
    pub comparison: LinearFunctor,
}

pub fn kernel_ideal(tri: &TriangularCategory) -> Result<KernelIdeal> {
    let cat = &tri.cat;
    let n = cat.num_objects();
    let nt = tri.t_count();
    let spaces = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            let d = cat.dim(x, y);
            if x < nt {
                Matrix::identity(cat.field(), d)
            } else {
                Matrix::zeros(cat.field(), d, 0)
            }
        })
        .collect();
    let ideal = IdealData::from_spaces(cat, spaces);
    ideal.check_saturated().map_err(Error::Invalid)?;
    let quotient = quotient_category(&ideal)?;
    let env = Enveloping::new(cat);
    let sequence = canonical_sequence(&env, &quotient, &ideal)?;
    let u = &tri.u;
    let nu = u.num_objects();
    let mut maps = Vec::with_capacity(nu * nu);
    for a in 0..nu {
        for b in 0..nu {
            let (x, y) = (a + nt, b + nt);
            let cols: Vec<Vec<Scalar>> = (0..u.dim(a, b))
                .map(|k| {
                    let mut e = vec![cat.field().zero(); cat.dim(x, y)];
                    e[k] = cat.field().one();
                    quotient.project(x, y, &e)
                })
                .collect();
            maps.push(Matrix::from_columns(cat.field(), quotient.category().dim(x, y), &cols));
        }
    }
    let comparison = LinearFunctor::new(u.clone(), quotient.category().clone(), (nt..n).collect(), maps);
    Ok(KernelIdeal { ideal, quotient, sequence, comparison })
}

impl KernelIdeal {
    /// Saturation, exactness of `0 → 𝓘 → Λ → H → 0`, and `U ≅ Λ/𝓘` away from
    /// the zero objects left by `T`.
    pub fn check(&self, tri: &TriangularCategory) -> std::result::Result<(), String> {
        self.ideal.check_saturated()?;
        self.sequence.check_exact()?;
        self.comparison.check()?;
        let q = self.quotient.category();
        for x in 0..tri.t_count() {
            if !q.is_zero_object(x) {
                return Err(format!("`{}` survives in the quotient", q.object_name(x)));
            }
        }
        let nt = tri.t_count();
        for x in nt..q.num_objects() {
            for y in nt..q.num_objects() {
                let m = self.comparison.map(x - nt, y - nt);
                if m.rows() != m.cols() || m.rank() != m.rows() {
                    return Err(format!("U → Λ/𝓘 is not bijective on ({}, {})", q.object_name(x), q.object_name(y)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceCheck {
    pub object: String,
    pub dims: Vec<usize>,
    /// `𝓘(x, −) = Λ(x, −)` for `x` in `T`; `None` for `U` objects (zero slice).
    pub equals_representable: Option<bool>,
    pub projective: bool,
}

pub fn verify_representable_slices(tri: &TriangularCategory, k: &KernelIdeal) -> Result<Vec<SliceCheck>> {
    let cat = &tri.cat;
    let n = cat.num_objects();
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let rep = yoneda_projective(cat, x);
        let bases = (0..n).map(|y| k.ideal.space(x, y).clone()).collect();
        let (slice, inclusion) = rep.submodule(bases)?;
        let equals_representable = (x < tri.t_count()).then(|| inclusion.is_isomorphism());
        let projective = projective_cover(&Arc::new(slice.clone()))?.kernel.is_zero();
        out.push(SliceCheck {
            object: cat.object_name(x).to_string(),
            dims: slice.dims().to_vec(),
            equals_representable,
            projective,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairDims {
    pub source: String,
    pub target: String,
    pub ideal: usize,
    /// `dim Λ(x, 𝔑)`.
    pub into_point: usize,
    /// `dim Λ(𝔑, y)`.
    pub out_of_point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BimoduleProjectivity {
    pub point: String,
    pub pairs: Vec<PairDims>,
    pub dims_match: bool,
    /// `Λ^e((𝔑, 𝔑), −) → 𝓘`, `f ⊗ g ↦ g ∘ f`.
    pub map_natural: bool,
    pub map_iso: bool,
    pub projective_dimension: ProjDim,
}

impl BimoduleProjectivity {
    pub fn holds(&self) -> bool {
        self.dims_match && self.map_natural && self.map_iso && self.projective_dimension == ProjDim::Exactly(0)
    }
}

pub fn verify_bimodule_projectivity(
    tri: &TriangularCategory,
    k: &KernelIdeal,
    degree: usize,
) -> Result<BimoduleProjectivity> {
    if !tri.is_one_point_extension() {
        return Err(Error::NotOnePointExtension("T is not a single object with endomorphisms K".into()));
    }
    let cat = &tri.cat;
    let n = cat.num_objects();
    let p = 0;
    let env = Enveloping::new(cat);
    let (ib, _) = ideal_bimodule(&env, &k.ideal)?;
    let mut pairs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            pairs.push(PairDims {
                source: cat.object_name(x).to_string(),
                target: cat.object_name(y).to_string(),
                ideal: ib.dim(x, y),
                into_point: cat.dim(x, p),
                out_of_point: cat.dim(p, y),
            });
        }
    }
    let dims_match = pairs.iter().all(|d| d.ideal == d.into_point * d.out_of_point);
    let id = k.ideal.space(p, p).solve(&cat.identity_vector(p))?;
    let free = FreeModule::new(&env.env, vec![env.object(p, p)]);
    let phi = free.morphism(&[id], ib.rep());
    Ok(BimoduleProjectivity {
        point: cat.object_name(p).to_string(),
        pairs,
        dims_match,
        map_natural: phi.check_natural().is_ok(),
        map_iso: phi.is_isomorphism(),
        projective_dimension: bimodule_pd_bound(&ib, degree)?,
    })
}

// ---- the staircase family ----

fn arrow_path(spec: &QuiverSpec, names: &[&str]) -> Path {
    spec.path_from_names(names).expect("arrow of the staircase quiver")
}

/// The linear quiver `1 → 2 → … → n` with the module `0 → K → … → K`
/// (identity maps) declared as `M`.
pub fn staircase_base_spec(n: usize, field: Field) -> QuiverSpec {
    let mut s = QuiverSpec::new(field);
    s.vertices = (1..=n).map(|i| i.to_string()).collect();
    s.arrows = (1..n).map(|i| Arrow { name: format!("a{i}"), source: i - 1, target: i }).collect();
    let mut dims = vec![1; n];
    dims[0] = 0;
    let maps = (1..n).map(|i| (i > 1).then(|| Matrix::identity(field, 1))).collect();
    s.modules.push(ModuleSpec { name: "M".into(), dims, maps });
    s
}

/// Vertices `0, 1, …, n`; arrows `a_i: i → i+1` and `b_i: 0 → i+1`; relations
/// `a_{i+1} b_i − b_{i+1}`.
pub fn staircase_spec(n: usize, field: Field) -> QuiverSpec {
    let mut s = QuiverSpec::new(field);
    s.vertices = (0..=n).map(|i| i.to_string()).collect();
    for i in 1..n {
        s.arrows.push(Arrow { name: format!("a{i}"), source: i, target: i + 1 });
    }
    for i in 1..n {
        s.arrows.push(Arrow { name: format!("b{i}"), source: 0, target: i + 1 });
    }
    for i in 1..n.saturating_sub(1) {
        let (a, b, b2) = (format!("a{}", i + 1), format!("b{i}"), format!("b{}", i + 1));
        let long = arrow_path(&s, &[&a, &b]);
        let short = arrow_path(&s, &[&b2]);
        s.relations.push(Combination { terms: vec![(field.one(), long), (-field.one(), short)] });
    }
    s.relation_policy = RelationPolicy::AllowShortPaths;
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationMatch {
    pub hom_dims_match: bool,
    pub functor_valid: bool,
    pub isomorphism: bool,
}

impl PresentationMatch {
    pub fn holds(&self) -> bool {
        self.hom_dims_match && self.functor_valid && self.isomorphism
    }
}

/// The staircase quiver category mapped into the one-point extension:
/// `a_i` to the arrow of `U`, `b_i` to the basis element of `M(i+1)`.
pub fn match_staircase(presented: &PathCategory, tri: &TriangularCategory) -> Result<PresentationMatch> {
    let spec = presented.spec();
    let lam = tri.category();
    let qc = presented.category();
    let n = qc.num_objects();
    if n != lam.num_objects() || !tri.is_one_point_extension() {
        return Err(Error::NotOnePointExtension("object counts differ".into()));
    }
    let hom_dims_match = (0..n).all(|x| (0..n).all(|y| qc.dim(x, y) == lam.dim(x, y)));
    let field = lam.field();
    let images = spec
        .arrows
        .iter()
        .map(|a| {
            let d = lam.dim(a.source, a.target);
            let mut v = vec![field.zero(); d];
            if d != 1 {
                return Err(Error::Invalid(format!("Λ({}, {}) is not one-dimensional", a.source, a.target)));
            }
            v[0] = field.one();
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let f = LinearFunctor::from_arrow_images(presented, lam.clone(), (0..n).collect(), &images)?;
    Ok(PresentationMatch { hom_dims_match, functor_valid: f.check().is_ok(), isomorphism: f.is_isomorphism() })
}

/// The staircase example at truncation `n`: `U`, `M`, `Λ` and the presented quiver category.
#[derive(Clone, Debug)]
pub struct Staircase {
    pub base: PathCategory,
    pub module: Rep,
    pub extension: TriangularCategory,
    pub presented: PathCategory,
}

pub fn staircase(n: usize, field: Field) -> Result<Staircase> {
    if n < 2 {
        return Err(Error::Invalid("the staircase needs at least two vertices".into()));
    }
    let base = build_category(&staircase_base_spec(n, field))?;
    let module = Rep::from_spec(&base, &base.spec().modules[0])?;
    let extension = one_point_extension(base.category(), &module)?;
    let presented = build_category(&staircase_spec(n, field))?;
    Ok(Staircase { base, module, extension, presented })
}
