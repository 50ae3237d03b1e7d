use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Scalar};
use crate::pathcat::PresentedCategory;

use super::rep::{Rep, RepMorphism};

/// `⊕_h C(c_h, −)`: a finite direct sum of representables. An element of
/// `P(x)` is the concatenation over `h` of coordinates in `C(c_h, x)`.
#[derive(Clone, Debug)]
pub struct FreeModule {
    cat: Arc<PresentedCategory>,
    gens: Vec<usize>,
    rep: Arc<Rep>,
}

impl FreeModule {
    pub fn new(cat: &Arc<PresentedCategory>, gens: Vec<usize>) -> FreeModule {
        let n = cat.num_objects();
        let field = cat.field();
        let dims: Vec<usize> = (0..n).map(|x| gens.iter().map(|&c| cat.dim(c, x)).sum()).collect();
        let rep = Rep::from_fn(cat.clone(), dims.clone(), |x, y, f| {
            let mut m = Matrix::zeros(field, dims[y], dims[x]);
            let (mut r0, mut c0) = (0, 0);
            for &c in &gens {
                m.set_block(r0, c0, &cat.left_mul_matrix(c, x, y, f));
                r0 += cat.dim(c, y);
                c0 += cat.dim(c, x);
            }
            m
        });
        FreeModule { cat: cat.clone(), gens, rep: Arc::new(rep) }
    }

    pub fn category(&self) -> &Arc<PresentedCategory> {
        &self.cat
    }

    /// Object of each generator.
    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn rep(&self) -> &Arc<Rep> {
        &self.rep
    }

    /// Offset of the summand `C(c_h, x)` inside `P(x)`.
    pub fn offset(&self, h: usize, x: usize) -> usize {
        self.gens[..h].iter().map(|&c| self.cat.dim(c, x)).sum()
    }

    /// The generator `h` as an element of `P(c_h)`.
    pub fn generator(&self, h: usize) -> Vec<Scalar> {
        let c = self.gens[h];
        let mut v = vec![self.cat.field().zero(); self.rep.dim(c)];
        if let Some(i) = self.cat.identity(c) {
            v[self.offset(h, c) + i] = self.cat.field().one();
        }
        v
    }

    /// Component at `x` of the morphism to `target` sending generator `h` to `images[h] ∈ target(c_h)`.
    pub fn morphism_component(&self, images: &[Vec<Scalar>], target: &Rep, x: usize) -> Matrix {
        let field = self.cat.field();
        let mut m = Matrix::zeros(field, target.dim(x), self.rep.dim(x));
        let mut col = 0;
        for (h, &c) in self.gens.iter().enumerate() {
            for e in 0..self.cat.dim(c, x) {
                let v = target.act(c, x, e).mul_vec(&images[h]);
                for (r, s) in v.into_iter().enumerate() {
                    m.set(r, col, s);
                }
                col += 1;
            }
        }
        m
    }

    pub fn morphism(&self, images: &[Vec<Scalar>], target: &Arc<Rep>) -> RepMorphism {
        let comps = (0..self.cat.num_objects()).map(|x| self.morphism_component(images, target, x)).collect();
        RepMorphism::new(self.rep.clone(), target.clone(), comps)
    }
}

/// A morphism out of a free module, given by the images of its generators.
#[derive(Clone, Debug)]
pub struct FreeMap {
    /// `images[h]` lies in the target evaluated at the object of generator `h`.
    pub images: Vec<Vec<Scalar>>,
}

impl FreeMap {
    /// For a map `P → Q` of free modules: the component `u_{h,k} ∈ C(c'_k, c_h)`
    /// of the image of generator `h` along generator `k` of `Q`.
    pub fn entry<'a>(&'a self, source: &FreeModule, target: &FreeModule, h: usize, k: usize) -> &'a [Scalar] {
        let c = source.gens[h];
        let off = target.offset(k, c);
        &self.images[h][off..off + target.cat.dim(target.gens[k], c)]
    }
}

/// A projective cover `ε: P → M` with its kernel.
#[derive(Clone, Debug)]
pub struct Cover {
    pub free: FreeModule,
    /// Images of the generators in `M`.
    pub augmentation: FreeMap,
    pub kernel: Arc<Rep>,
    /// Inclusion `Ω → P`.
    pub inclusion: RepMorphism,
}

/// Generators: at each object, the standard vectors complementing the radical
/// (non-pivot columns of the reduced radical span).
pub fn top_generators(m: &Rep) -> Vec<(usize, Vec<Scalar>)> {
    let field = m.category().field();
    let mut out = Vec::new();
    for x in 0..m.category().num_objects() {
        let d = m.dim(x);
        if d == 0 {
            continue;
        }
        let rad = m.radical_span(x).transpose();
        let (_, pivots) = rad.rref();
        for j in 0..d {
            if pivots.binary_search(&j).is_err() {
                let mut v = vec![field.zero(); d];
                v[j] = field.one();
                out.push((x, v));
            }
        }
    }
    out
}

/// Projective cover of `M` from its top, together with the first syzygy.
pub fn projective_cover(m: &Arc<Rep>) -> Result<Cover> {
    let cat = m.category();
    let gens = top_generators(m);
    let free = FreeModule::new(cat, gens.iter().map(|(x, _)| *x).collect());
    let augmentation = FreeMap { images: gens.into_iter().map(|(_, v)| v).collect() };
    let eps = free.morphism(&augmentation.images, m);
    if !eps.is_surjective() {
        return Err(Error::Invalid("the top does not generate the module (radical is not nilpotent)".into()));
    }
    let (kernel, inclusion) = eps.kernel();
    Ok(Cover { free, augmentation, kernel: Arc::new(kernel), inclusion })
}

/// The representable `C(c, −)`.
pub fn yoneda_projective(cat: &Arc<PresentedCategory>, c: usize) -> Rep {
    (**FreeModule::new(cat, vec![c]).rep()).clone()
}

/// The simple module at `x`: one-dimensional at `x`, radical acting by zero.
pub fn simple(cat: &Arc<PresentedCategory>, x: usize) -> Result<Rep> {
    if cat.identity(x).is_none() {
        return Err(Error::Invalid(format!("object `{}` has zero identity", cat.object_name(x))));
    }
    let n = cat.num_objects();
    let field = cat.field();
    let dims: Vec<usize> = (0..n).map(|y| usize::from(y == x)).collect();
    Ok(Rep::from_fn(cat.clone(), dims.clone(), |a, b, f| {
        let mut m = Matrix::zeros(field, dims[b], dims[a]);
        if a == x && b == x && !cat.basis(x, x)[f].radical {
            // Non-radical endomorphisms of a basic object are multiples of the identity.
            let v = if Some(f) == cat.identity(x) { field.one() } else { field.zero() };
            m.set(0, 0, v);
        }
        m
    }))
}
