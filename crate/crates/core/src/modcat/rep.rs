use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Scalar, Subquotient};
use crate::pathcat::{LinearFunctor, PathCategory, PresentedCategory};
use crate::quiver::ModuleSpec;

/// A left module over a presented category: a covariant K-linear functor into
/// finite-dimensional vector spaces, stored by its action on hom bases.
#[derive(Clone, PartialEq, Eq)]
pub struct Rep {
    cat: Arc<PresentedCategory>,
    dims: Vec<usize>,
    /// `acts[x * n + y][f]` is the matrix of basis element `f ∈ C(x, y)`,
    /// of shape `dim(y) × dim(x)`.
    acts: Vec<Vec<Matrix>>,
}

impl std::fmt::Debug for Rep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Rep{:?}", self.dims)
    }
}

impl Rep {
    /// Assembles a module without checking functoriality; see [`Rep::check`].
    pub fn from_parts(cat: Arc<PresentedCategory>, dims: Vec<usize>, acts: Vec<Vec<Matrix>>) -> Rep {
        let n = cat.num_objects();
        assert_eq!(dims.len(), n);
        assert_eq!(acts.len(), n * n);
        Rep { cat, dims, acts }
    }

    /// Builds the action of every basis element from `act(x, y, f)`.
    pub fn from_fn(
        cat: Arc<PresentedCategory>,
        dims: Vec<usize>,
        mut act: impl FnMut(usize, usize, usize) -> Matrix,
    ) -> Rep {
        let n = cat.num_objects();
        let mut acts = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                acts.push((0..cat.dim(x, y)).map(|f| act(x, y, f)).collect());
            }
        }
        Rep::from_parts(cat, dims, acts)
    }

    pub fn zero(cat: &Arc<PresentedCategory>) -> Rep {
        let n = cat.num_objects();
        Rep::from_fn(cat.clone(), vec![0; n], |_, _, _| Matrix::zeros(cat.field(), 0, 0))
    }

    /// The representation of a quiver given by a module declaration; every
    /// relation must act as zero.
    pub fn from_spec(pc: &PathCategory, m: &ModuleSpec) -> Result<Rep> {
        let spec = pc.spec();
        let cat = pc.category();
        let field = spec.field;
        if m.dims.len() != spec.vertices.len() {
            return Err(Error::Invalid(format!("module `{}` does not match the quiver", m.name)));
        }
        let arrows: Vec<Matrix> = (0..spec.arrows.len()).map(|a| m.map_or_zero(spec, a)).collect();
        let eval = |p: &crate::quiver::Path| {
            let mut cur = Matrix::identity(field, m.dims[p.source]);
            for &a in &p.arrows {
                cur = arrows[a].mul(&cur);
            }
            cur
        };
        for rel in &spec.relations {
            let (s, t) = (rel.source(), rel.target());
            let mut sum = Matrix::zeros(field, m.dims[t], m.dims[s]);
            for (c, p) in &rel.terms {
                sum.add_scaled(c, &eval(p));
            }
            if !sum.is_zero() {
                return Err(Error::RelationViolated(spec_label(pc, rel)));
            }
        }
        Ok(Rep::from_fn(cat.clone(), m.dims.clone(), |x, y, f| eval(pc.basis_path(x, y, f))))
    }

    pub fn category(&self) -> &Arc<PresentedCategory> {
        &self.cat
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn act(&self, x: usize, y: usize, f: usize) -> &Matrix {
        &self.acts[x * self.cat.num_objects() + y][f]
    }

    /// Action of an arbitrary element of `C(x, y)` given by coordinates.
    pub fn act_vec(&self, x: usize, y: usize, v: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.cat.field(), self.dims[y], self.dims[x]);
        for (f, c) in v.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(c, self.act(x, y, f));
            }
        }
        m
    }

    /// Checks shapes, the identity action and functoriality on basis pairs.
    pub fn check(&self) -> std::result::Result<(), String> {
        let c = &self.cat;
        let n = c.num_objects();
        let field = c.field();
        for x in 0..n {
            for y in 0..n {
                for f in 0..c.dim(x, y) {
                    let m = self.act(x, y, f);
                    if m.rows() != self.dims[y] || m.cols() != self.dims[x] {
                        return Err(format!("action of `{}` has the wrong shape", c.basis(x, y)[f].label));
                    }
                }
            }
            let id = self.act_vec(x, x, &c.identity_vector(x));
            if id != Matrix::identity(field, self.dims[x]) {
                return Err(format!("identity of `{}` does not act as the identity", c.object_name(x)));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for g in 0..c.dim(y, z) {
                        for f in 0..c.dim(x, y) {
                            let lhs = self.act_vec(x, z, c.compose_basis(x, y, z, g, f));
                            let rhs = self.act(y, z, g).mul(self.act(x, y, f));
                            if lhs != rhs {
                                return Err(format!(
                                    "action of `{}` ∘ `{}` is not the composite",
                                    c.basis(y, z)[g].label,
                                    c.basis(x, y)[f].label
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Columns spanning `rad M(x)`: images of all radical basis morphisms into `x`.
    pub fn radical_span(&self, x: usize) -> Matrix {
        let c = &self.cat;
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for y in 0..c.num_objects() {
            for (f, b) in c.basis(y, x).iter().enumerate() {
                if b.radical && self.dims[y] > 0 {
                    cols.extend(self.act(y, x, f).columns());
                }
            }
        }
        Matrix::from_columns(c.field(), self.dims[x], &cols)
    }

    /// Dimension of the top `M(x) / rad M(x)`.
    pub fn top_dim(&self, x: usize) -> usize {
        self.dims[x] - self.radical_span(x).rank()
    }

    /// The submodule with `M'(x)` spanned by the (independent) columns of
    /// `bases[x]`. Returns it with its inclusion; fails if not stable.
    pub fn submodule(&self, bases: Vec<Matrix>) -> Result<(Rep, RepMorphism)> {
        let c = &self.cat;
        let n = c.num_objects();
        let lefts: Vec<Matrix> = bases.iter().map(Matrix::left_inverse).collect();
        let mut acts = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut v = Vec::with_capacity(c.dim(x, y));
                for f in 0..c.dim(x, y) {
                    let img = self.act(x, y, f).mul(&bases[x]);
                    let a = lefts[y].mul(&img);
                    if bases[y].mul(&a) != img {
                        return Err(Error::Invalid("subspaces are not stable under the action".into()));
                    }
                    v.push(a);
                }
                acts.push(v);
            }
        }
        let dims = bases.iter().map(Matrix::cols).collect();
        let sub = Rep::from_parts(c.clone(), dims, acts);
        Ok((sub.clone(), RepMorphism::new(Arc::new(sub), Arc::new(self.clone()), bases)))
    }

    /// The quotient `M / N` for a stable family of subspaces `N(x)` (spanning columns).
    pub fn quotient(&self, subspaces: &[Matrix]) -> (Rep, RepMorphism) {
        let c = &self.cat;
        let n = c.num_objects();
        let sq: Vec<Subquotient> = subspaces.iter().map(Subquotient::cokernel).collect();
        let mut acts = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                acts.push((0..c.dim(x, y)).map(|f| sq[x].induced_map(self.act(x, y, f), &sq[y])).collect());
            }
        }
        let dims = sq.iter().map(Subquotient::dim).collect();
        let q = Rep::from_parts(c.clone(), dims, acts);
        let proj = sq.iter().map(|s| s.coordinates_matrix(&Matrix::identity(c.field(), s.ambient_dim()))).collect();
        (q.clone(), RepMorphism::new(Arc::new(self.clone()), Arc::new(q), proj))
    }

    /// Restriction of scalars along `F: C → D`, for `self` a `D`-module.
    pub fn pullback(&self, f: &LinearFunctor) -> Rep {
        assert!(Arc::ptr_eq(f.target(), &self.cat) || **f.target() == *self.cat, "pullback along a foreign functor");
        let src = f.source().clone();
        let dims = (0..src.num_objects()).map(|x| self.dims[f.object(x)]).collect();
        Rep::from_fn(src, dims, |x, y, b| self.act_vec(f.object(x), f.object(y), &f.map(x, y).column(b)))
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        let c = &self.cat;
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        Rep::from_fn(c.clone(), dims.clone(), |x, y, f| {
            let mut m = Matrix::zeros(c.field(), dims[y], dims[x]);
            m.set_block(0, 0, self.act(x, y, f));
            m.set_block(self.dims[y], self.dims[x], other.act(x, y, f));
            m
        })
    }

    /// Same data viewed over a structurally identical category.
    pub fn rebase(&self, cat: Arc<PresentedCategory>) -> Rep {
        assert_eq!(cat.num_objects(), self.cat.num_objects());
        Rep { cat, dims: self.dims.clone(), acts: self.acts.clone() }
    }
}

fn spec_label(pc: &PathCategory, rel: &crate::quiver::Combination) -> String {
    rel.terms.iter().map(|(c, p)| format!("{c}*{}", pc.spec().path_label(p))).collect::<Vec<_>>().join(" + ")
}

/// A morphism of modules, one matrix per object.
#[derive(Clone, Debug)]
pub struct RepMorphism {
    pub source: Arc<Rep>,
    pub target: Arc<Rep>,
    comps: Vec<Matrix>,
}

impl RepMorphism {
    pub fn new(source: Arc<Rep>, target: Arc<Rep>, comps: Vec<Matrix>) -> RepMorphism {
        assert_eq!(comps.len(), source.cat.num_objects());
        RepMorphism { source, target, comps }
    }

    pub fn identity(m: &Arc<Rep>) -> RepMorphism {
        let f = m.cat.field();
        let comps = m.dims.iter().map(|&d| Matrix::identity(f, d)).collect();
        RepMorphism::new(m.clone(), m.clone(), comps)
    }

    pub fn comp(&self, x: usize) -> &Matrix {
        &self.comps[x]
    }

    pub fn comps(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    pub fn compose(&self, first: &RepMorphism) -> RepMorphism {
        let comps = self.comps.iter().zip(&first.comps).map(|(a, b)| a.mul(b)).collect();
        RepMorphism::new(first.source.clone(), self.target.clone(), comps)
    }

    pub fn check_natural(&self) -> std::result::Result<(), String> {
        let c = &self.source.cat;
        let n = c.num_objects();
        for x in 0..n {
            let m = &self.comps[x];
            if m.rows() != self.target.dims[x] || m.cols() != self.source.dims[x] {
                return Err(format!("component at `{}` has the wrong shape", c.object_name(x)));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for f in 0..c.dim(x, y) {
                    let l = self.comps[y].mul(self.source.act(x, y, f));
                    let r = self.target.act(x, y, f).mul(&self.comps[x]);
                    if l != r {
                        return Err(format!("not natural with respect to `{}`", c.basis(x, y)[f].label));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kernel(&self) -> (Rep, RepMorphism) {
        let bases = self.comps.iter().map(Matrix::kernel_basis).collect();
        self.source.submodule(bases).expect("kernels are submodules")
    }

    pub fn image_dims(&self) -> Vec<usize> {
        self.comps.iter().map(Matrix::rank).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().zip(&self.target.dims).all(|(m, &d)| m.rank() == d)
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().zip(&self.source.dims).all(|(m, &d)| m.rank() == d)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// A basis of `Hom(M, N)`, obtained by solving the naturality equations.
pub fn hom_space(m: &Arc<Rep>, n: &Arc<Rep>) -> Vec<RepMorphism> {
    let c = &m.cat;
    let k = c.num_objects();
    let field = c.field();
    // Unknowns: entries of each component, row-major, object by object.
    let mut offsets = Vec::with_capacity(k + 1);
    let mut total = 0;
    for x in 0..k {
        offsets.push(total);
        total += m.dims[x] * n.dims[x];
    }
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for x in 0..k {
        for y in 0..k {
            let (dmx, dny) = (m.dims[x], n.dims[y]);
            if dmx * dny == 0 {
                continue;
            }
            for f in 0..c.dim(x, y) {
                let (ma, na) = (m.act(x, y, f), n.act(x, y, f));
                // (h_y · M(f) − N(f) · h_x)[i][j] = 0
                for i in 0..dny {
                    for j in 0..dmx {
                        let mut row = Vec::new();
                        for t in 0..m.dims[y] {
                            let v = ma.get(t, j);
                            if !v.is_zero() {
                                row.push((offsets[y] + i * m.dims[y] + t, v.clone()));
                            }
                        }
                        for t in 0..n.dims[x] {
                            let v = na.get(i, t);
                            if !v.is_zero() {
                                row.push((offsets[x] + t * dmx + j, -v));
                            }
                        }
                        if !row.is_empty() {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    let mut a = Matrix::zeros(field, rows.len(), total);
    for (r, row) in rows.iter().enumerate() {
        for (col, v) in row {
            let cur = a.get(r, *col).clone();
            a.set(r, *col, &cur + v);
        }
    }
    let ker = a.kernel_basis();
    (0..ker.cols())
        .map(|col| {
            let comps = (0..k)
                .map(|x| {
                    let mut h = Matrix::zeros(field, n.dims[x], m.dims[x]);
                    for i in 0..n.dims[x] {
                        for j in 0..m.dims[x] {
                            h.set(i, j, ker.get(offsets[x] + i * m.dims[x] + j, col).clone());
                        }
                    }
                    h
                })
                .collect();
            RepMorphism::new(m.clone(), n.clone(), comps)
        })
        .collect()
}
