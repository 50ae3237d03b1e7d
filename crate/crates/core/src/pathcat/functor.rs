use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Scalar};

use super::build::PathCategory;
use super::category::PresentedCategory;

/// A K-linear functor given on objects and on hom bases.
#[derive(Debug, Clone)]
pub struct LinearFunctor {
    source: Arc<PresentedCategory>,
    target: Arc<PresentedCategory>,
    objects: Vec<usize>,
    /// `maps[x * n + y]` sends `C(x, y)` to `D(Fx, Fy)`.
    maps: Vec<Matrix>,
}

impl LinearFunctor {
    pub fn new(
        source: Arc<PresentedCategory>,
        target: Arc<PresentedCategory>,
        objects: Vec<usize>,
        maps: Vec<Matrix>,
    ) -> LinearFunctor {
        let n = source.num_objects();
        assert_eq!(objects.len(), n);
        assert_eq!(maps.len(), n * n);
        LinearFunctor { source, target, objects, maps }
    }

    /// The functor out of a path category determined by images of the arrows.
    pub fn from_arrow_images(
        source: &PathCategory,
        target: Arc<PresentedCategory>,
        objects: Vec<usize>,
        arrow_images: &[Vec<Scalar>],
    ) -> Result<LinearFunctor> {
        let spec = source.spec();
        let cat = source.category();
        let n = cat.num_objects();
        if objects.len() != n || arrow_images.len() != spec.arrows.len() {
            return Err(Error::Invalid("functor data does not match the quiver".into()));
        }
        for (a, img) in spec.arrows.iter().zip(arrow_images) {
            if img.len() != target.dim(objects[a.source], objects[a.target]) {
                return Err(Error::Invalid(format!("image of `{}` has the wrong length", a.name)));
            }
        }
        let mut maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut cols = Vec::with_capacity(cat.dim(x, y));
                for i in 0..cat.dim(x, y) {
                    let p = source.basis_path(x, y, i);
                    let mut cur = target.identity_vector(objects[x]);
                    let mut at = x;
                    for &a in &p.arrows {
                        let arrow = &spec.arrows[a];
                        cur = target.compose(
                            objects[at],
                            objects[arrow.source],
                            objects[arrow.target],
                            &arrow_images[a],
                            &cur,
                        );
                        at = arrow.target;
                    }
                    cols.push(cur);
                }
                maps.push(Matrix::from_columns(target.field(), target.dim(objects[x], objects[y]), &cols));
            }
        }
        let f = LinearFunctor::new(cat.clone(), target, objects, maps);
        for (ai, a) in spec.arrows.iter().enumerate() {
            let coords = source.path_element(&spec.path_from_names(&[a.name.as_str()]).expect("arrow"));
            if f.apply(a.source, a.target, &coords) != arrow_images[ai] {
                return Err(Error::Invalid(format!("image of `{}` is inconsistent with the relations", a.name)));
            }
        }
        Ok(f)
    }

    pub fn source(&self) -> &Arc<PresentedCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedCategory> {
        &self.target
    }

    pub fn object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn map(&self, x: usize, y: usize) -> &Matrix {
        &self.maps[x * self.source.num_objects() + y]
    }

    pub fn apply(&self, x: usize, y: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.map(x, y).mul_vec(v)
    }

    /// Checks preservation of identities and of composition on basis pairs.
    pub fn check(&self) -> std::result::Result<(), String> {
        let (s, t) = (&self.source, &self.target);
        let n = s.num_objects();
        for x in 0..n {
            if self.apply(x, x, &s.identity_vector(x)) != t.identity_vector(self.objects[x]) {
                return Err(format!("identity of `{}` is not preserved", s.object_name(x)));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for g in 0..s.dim(y, z) {
                        for f in 0..s.dim(x, y) {
                            let lhs = self.apply(x, z, s.compose_basis(x, y, z, g, f));
                            let rhs = t.compose(
                                self.objects[x],
                                self.objects[y],
                                self.objects[z],
                                &self.map(y, z).column(g),
                                &self.map(x, y).column(f),
                            );
                            if lhs != rhs {
                                return Err(format!(
                                    "composition `{}` ∘ `{}` is not preserved",
                                    s.basis(y, z)[g].label,
                                    s.basis(x, y)[f].label
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Bijective on objects and an isomorphism on every hom space.
    pub fn is_isomorphism(&self) -> bool {
        let n = self.source.num_objects();
        if n != self.target.num_objects() {
            return false;
        }
        let mut seen = vec![false; n];
        for &o in &self.objects {
            if seen[o] {
                return false;
            }
            seen[o] = true;
        }
        self.maps.iter().all(|m| m.rows() == m.cols() && m.rank() == m.rows())
    }
}
