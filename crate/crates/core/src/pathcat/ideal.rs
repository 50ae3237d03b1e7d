use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{contains, Matrix, NormalForm, Scalar};

use super::category::{HomBasisElem, PresentedCategory};
use super::functor::LinearFunctor;

/// A two-sided ideal: for each pair `(x, y)` a subspace of `C(x, y)`, stored
/// as independent coordinate columns.
#[derive(Debug, Clone)]
pub struct IdealData {
    parent: Arc<PresentedCategory>,
    spaces: Vec<Matrix>,
}

impl IdealData {
    pub fn zero(parent: &Arc<PresentedCategory>) -> IdealData {
        let n = parent.num_objects();
        let f = parent.field();
        let spaces = (0..n * n).map(|i| Matrix::zeros(f, parent.dim(i / n, i % n), 0)).collect();
        IdealData { parent: parent.clone(), spaces }
    }

    /// Builds an ideal from explicit subspaces without closing them.
    pub fn from_spaces(parent: &Arc<PresentedCategory>, spaces: Vec<Matrix>) -> IdealData {
        let n = parent.num_objects();
        assert_eq!(spaces.len(), n * n);
        let spaces = spaces.iter().map(|s| s.column_space_basis()).collect();
        IdealData { parent: parent.clone(), spaces }
    }

    pub fn parent(&self) -> &Arc<PresentedCategory> {
        &self.parent
    }

    pub fn space(&self, x: usize, y: usize) -> &Matrix {
        &self.spaces[x * self.parent.num_objects() + y]
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.space(x, y).cols()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(Matrix::cols).sum()
    }

    pub fn contains(&self, x: usize, y: usize, v: &[Scalar]) -> bool {
        contains(self.space(x, y), &Matrix::column_vector(self.parent.field(), v))
    }

    /// The largest subspaces reachable from `self` by one composition step.
    fn closure_step(&self) -> Vec<Matrix> {
        let c = &self.parent;
        let n = c.num_objects();
        let mut acc: Vec<Matrix> = self.spaces.clone();
        for x in 0..n {
            for y in 0..n {
                let s = self.space(x, y);
                if s.cols() == 0 {
                    continue;
                }
                for z in 0..n {
                    for g in 0..c.dim(y, z) {
                        let img = c.left_mul_matrix(x, y, z, g).mul(s);
                        acc[x * n + z] = acc[x * n + z].hstack(&img);
                    }
                }
                for u in 0..n {
                    for h in 0..c.dim(u, x) {
                        let img = c.right_mul_matrix(u, x, y, h).mul(s);
                        acc[u * n + y] = acc[u * n + y].hstack(&img);
                    }
                }
            }
        }
        acc.iter().map(Matrix::column_space_basis).collect()
    }

    /// Closes under composition with all morphisms until a fixpoint is reached.
    pub fn saturate(&self) -> IdealData {
        let mut cur = self.clone();
        loop {
            let next = cur.closure_step();
            let grew = next.iter().zip(&cur.spaces).any(|(a, b)| a.cols() != b.cols());
            cur.spaces = next;
            if !grew {
                return cur;
            }
        }
    }

    /// Checks closure under left and right composition by rank tests.
    pub fn check_saturated(&self) -> std::result::Result<(), String> {
        let c = &self.parent;
        let n = c.num_objects();
        for x in 0..n {
            for y in 0..n {
                let s = self.space(x, y);
                if s.cols() == 0 {
                    continue;
                }
                for z in 0..n {
                    for g in 0..c.dim(y, z) {
                        if !contains(self.space(x, z), &c.left_mul_matrix(x, y, z, g).mul(s)) {
                            return Err(format!(
                                "`{}` ∘ I({}, {}) leaves the ideal",
                                c.basis(y, z)[g].label,
                                c.object_name(x),
                                c.object_name(y)
                            ));
                        }
                    }
                }
                for u in 0..n {
                    for h in 0..c.dim(u, x) {
                        if !contains(self.space(u, y), &c.right_mul_matrix(u, x, y, h).mul(s)) {
                            return Err(format!(
                                "I({}, {}) ∘ `{}` leaves the ideal",
                                c.object_name(x),
                                c.object_name(y),
                                c.basis(u, x)[h].label
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `I ∘ J`: spanned by composites `g ∘ f` with `f ∈ J(x, y)`, `g ∈ I(y, z)`.
    pub fn compose_with(&self, j: &IdealData) -> IdealData {
        let c = &self.parent;
        let n = c.num_objects();
        let f = c.field();
        let mut spaces: Vec<Matrix> = (0..n * n).map(|i| Matrix::zeros(f, c.dim(i / n, i % n), 0)).collect();
        for x in 0..n {
            for y in 0..n {
                let js = j.space(x, y);
                if js.cols() == 0 {
                    continue;
                }
                for z in 0..n {
                    let is = self.space(y, z);
                    for gi in 0..is.cols() {
                        let g = is.column(gi);
                        for fi in 0..js.cols() {
                            let v = c.compose(x, y, z, &g, &js.column(fi));
                            let col = Matrix::column_vector(f, &v);
                            spaces[x * n + z] = spaces[x * n + z].hstack(&col);
                        }
                    }
                }
            }
        }
        IdealData::from_spaces(c, spaces)
    }

    pub fn same_as(&self, other: &IdealData) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| crate::exactlin::same_span(a, b))
    }
}

/// Smallest two-sided ideal containing the given morphisms `(x, y, coordinates)`.
pub fn ideal_from_generators(parent: &Arc<PresentedCategory>, gens: &[(usize, usize, Vec<Scalar>)]) -> IdealData {
    let n = parent.num_objects();
    let mut ideal = IdealData::zero(parent);
    for (x, y, v) in gens {
        let col = Matrix::column_vector(parent.field(), v);
        let i = x * n + y;
        ideal.spaces[i] = ideal.spaces[i].hstack(&col).column_space_basis();
    }
    ideal.saturate()
}

/// `C/I` together with the projection functor `π: C → C/I`.
#[derive(Debug, Clone)]
pub struct Quotient {
    parent: Arc<PresentedCategory>,
    cat: Arc<PresentedCategory>,
    /// Parent basis indices kept as basis of `(C/I)(x, y)`.
    reps: Vec<Vec<usize>>,
    proj: Vec<Matrix>,
}

/// Forms `C/I`; the basis of `(C/I)(x, y)` consists of the lowest-indexed parent
/// basis elements independent modulo `I(x, y)`.
pub fn quotient_category(ideal: &IdealData) -> Result<Quotient> {
    let parent = ideal.parent().clone();
    let n = parent.num_objects();
    let field = parent.field();
    let mut reps = Vec::with_capacity(n * n);
    let mut proj = Vec::with_capacity(n * n);
    let mut bases = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let nf = NormalForm::new(ideal.space(x, y));
            let kept = nf.complement().to_vec();
            let p = nf.projection_matrix();
            let basis: Vec<HomBasisElem> = kept.iter().map(|&i| parent.basis(x, y)[i].clone()).collect();
            for (b, elem) in parent.basis(x, y).iter().enumerate() {
                if !elem.radical {
                    continue;
                }
                if (0..basis.len()).any(|k| !basis[k].radical && !p.get(k, b).is_zero()) {
                    return Err(Error::Invalid(format!(
                        "radical element `{}` does not stay radical modulo the ideal",
                        elem.label
                    )));
                }
            }
            reps.push(kept);
            proj.push(p);
            bases.push(basis);
        }
    }
    let mut identities = Vec::with_capacity(n);
    for x in 0..n {
        let p = &proj[x * n + x];
        let id = match parent.identity(x) {
            None => None,
            Some(i) => {
                let col = p.column(i);
                let nonzero: Vec<usize> = (0..col.len()).filter(|&k| !col[k].is_zero()).collect();
                match nonzero.as_slice() {
                    [] => None,
                    [k] if col[*k].is_one() => Some(*k),
                    _ => {
                        return Err(Error::Invalid(format!(
                            "identity of `{}` is not a basis element of the quotient",
                            parent.object_name(x)
                        )))
                    }
                }
            }
        };
        identities.push(id);
    }
    let cat = PresentedCategory::from_parts(field, parent.objects().to_vec(), bases, identities, |x, y, z, g, f| {
        let gp = reps[y * n + z][g];
        let fp = reps[x * n + y][f];
        proj[x * n + z].mul_vec(parent.compose_basis(x, y, z, gp, fp))
    });
    Ok(Quotient { parent, cat: Arc::new(cat), reps, proj })
}

impl Quotient {
    pub fn parent(&self) -> &Arc<PresentedCategory> {
        &self.parent
    }

    pub fn category(&self) -> &Arc<PresentedCategory> {
        &self.cat
    }

    /// Matrix of `π: C(x, y) → (C/I)(x, y)`.
    pub fn projection(&self, x: usize, y: usize) -> &Matrix {
        &self.proj[x * self.parent.num_objects() + y]
    }

    /// Parent basis indices representing the basis of `(C/I)(x, y)`.
    pub fn representatives(&self, x: usize, y: usize) -> &[usize] {
        &self.reps[x * self.parent.num_objects() + y]
    }

    pub fn project(&self, x: usize, y: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.projection(x, y).mul_vec(v)
    }

    /// `π: C → C/I` as a linear functor (identity on objects).
    pub fn functor(&self) -> LinearFunctor {
        let n = self.parent.num_objects();
        LinearFunctor::new(self.parent.clone(), self.cat.clone(), (0..n).collect(), self.proj.clone())
    }

    /// `π^op: C^op → (C/I)^op` over the given opposite categories.
    pub fn opposite_functor(
        &self,
        parent_op: &Arc<PresentedCategory>,
        quotient_op: &Arc<PresentedCategory>,
    ) -> LinearFunctor {
        let n = self.parent.num_objects();
        let maps = (0..n * n).map(|i| self.projection(i % n, i / n).clone()).collect();
        LinearFunctor::new(parent_op.clone(), quotient_op.clone(), (0..n).collect(), maps)
    }

    /// `π` is full and respects composition on all basis pairs.
    pub fn check_functor(&self) -> std::result::Result<(), String> {
        let c = &self.parent;
        let n = c.num_objects();
        for x in 0..n {
            for y in 0..n {
                if self.projection(x, y).rank() != self.cat.dim(x, y) {
                    return Err(format!("π is not surjective on ({x}, {y})"));
                }
                for z in 0..n {
                    for g in 0..c.dim(y, z) {
                        for f in 0..c.dim(x, y) {
                            let lhs = self.project(x, z, c.compose_basis(x, y, z, g, f));
                            let pg = self.projection(y, z).column(g);
                            let pf = self.projection(x, y).column(f);
                            if lhs != self.cat.compose(x, y, z, &pg, &pf) {
                                return Err(format!(
                                    "π does not respect `{}` ∘ `{}`",
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
}
