//! Bimodules over a presented category, stored as modules over its enveloping
//! category `C^e = C^op ⊗ C`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::modcat::{projective_cover, resolve, ProjDim, Rep, RepMorphism, Resolution};
use crate::pathcat::{opposite, pair_index, tensor, IdealData, PresentedCategory, Quotient};

/// `C` together with `C^op` and `C^e`, sharing object and basis numbering.
#[derive(Debug)]
pub struct Enveloping {
    pub cat: Arc<PresentedCategory>,
    pub op: Arc<PresentedCategory>,
    pub env: Arc<PresentedCategory>,
}

impl Enveloping {
    pub fn new(cat: &Arc<PresentedCategory>) -> Arc<Enveloping> {
        let op = Arc::new(opposite(cat));
        let env = Arc::new(tensor(&op, cat));
        Arc::new(Enveloping { cat: cat.clone(), op, env })
    }

    /// Object `(a, b)` of `C^e`.
    pub fn object(&self, a: usize, b: usize) -> usize {
        pair_index(self.cat.num_objects(), a, b)
    }

    pub fn split(&self, x: usize) -> (usize, usize) {
        let n = self.cat.num_objects();
        (x / n, x % n)
    }

    /// Basis index of `f ⊗ g` in `C^e((a, b), (a2, b2))` for `f ∈ C(a2, a)`, `g ∈ C(b, b2)`.
    pub fn basis_index(&self, b: usize, b2: usize, f: usize, g: usize) -> usize {
        f * self.cat.dim(b, b2) + g
    }
}

/// A `C`-bimodule `(a, b) ↦ B(a, b)`, contravariant in `a`, covariant in `b`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    env: Arc<Enveloping>,
    rep: Arc<Rep>,
}

impl Bimodule {
    pub fn new(env: &Arc<Enveloping>, rep: Rep) -> Bimodule {
        assert_eq!(**rep.category(), *env.env, "bimodule over a foreign enveloping category");
        Bimodule { env: env.clone(), rep: Arc::new(rep) }
    }

    pub fn enveloping(&self) -> &Arc<Enveloping> {
        &self.env
    }

    pub fn rep(&self) -> &Arc<Rep> {
        &self.rep
    }

    pub fn dim(&self, a: usize, b: usize) -> usize {
        self.rep.dim(self.env.object(a, b))
    }

    /// `d ↦ B(c, d)` as a `C`-module.
    pub fn slice_right(&self, c: usize) -> Rep {
        let e = &self.env;
        let n = e.cat.num_objects();
        let dims = (0..n).map(|d| self.dim(c, d)).collect();
        Rep::from_fn(e.cat.clone(), dims, |d, d2, g| match e.cat.identity(c) {
            Some(id) => self.rep.act(e.object(c, d), e.object(c, d2), e.basis_index(d, d2, id, g)).clone(),
            None => Matrix::zeros(e.cat.field(), 0, 0),
        })
    }

    /// `a ↦ B(a, c)` as a `C^op`-module.
    pub fn slice_left(&self, c: usize) -> Rep {
        let e = &self.env;
        let n = e.cat.num_objects();
        let dims = (0..n).map(|a| self.dim(a, c)).collect();
        Rep::from_fn(e.op.clone(), dims, |a, a2, f| match e.cat.identity(c) {
            Some(id) => self.rep.act(e.object(a, c), e.object(a2, c), e.basis_index(c, c, f, id)).clone(),
            None => Matrix::zeros(e.cat.field(), 0, 0),
        })
    }
}

/// `C(−, −)` with `f ⊗ g` acting by `h ↦ g ∘ h ∘ f`.
pub fn regular_bimodule(env: &Arc<Enveloping>) -> Bimodule {
    let c = &env.cat;
    let n = c.num_objects();
    let dims = (0..n * n).map(|x| c.dim(x / n, x % n)).collect();
    let rep = Rep::from_fn(env.env.clone(), dims, |x, y, k| {
        let ((a, b), (a2, b2)) = (env.split(x), env.split(y));
        let d = c.dim(b, b2);
        let (f, g) = (k / d, k % d);
        c.left_mul_matrix(a2, b, b2, g).mul(&c.right_mul_matrix(a2, a, b, f))
    });
    Bimodule::new(env, rep)
}

/// The sub-bimodule `I ⊆ C(−, −)` with its inclusion.
pub fn ideal_bimodule(env: &Arc<Enveloping>, ideal: &IdealData) -> Result<(Bimodule, RepMorphism)> {
    let reg = regular_bimodule(env);
    let n = env.cat.num_objects();
    let bases = (0..n * n).map(|x| ideal.space(x / n, x % n).clone()).collect();
    let (sub, inc) = reg.rep.submodule(bases).map_err(|_| Error::Invalid("the ideal is not two-sided".into()))?;
    Ok((Bimodule::new(env, sub), inc))
}

/// `H = (C/I)(−, −)` viewed over `C^e`, in the quotient basis.
pub fn quotient_bimodule(env: &Arc<Enveloping>, q: &Quotient) -> Bimodule {
    let c = &env.cat;
    let qc = q.category();
    let n = c.num_objects();
    let dims = (0..n * n).map(|x| qc.dim(x / n, x % n)).collect();
    let rep = Rep::from_fn(env.env.clone(), dims, |x, y, k| {
        let ((a, b), (a2, b2)) = (env.split(x), env.split(y));
        let d = c.dim(b, b2);
        let (pf, pg) = (q.projection(a2, a).column(k / d), q.projection(b, b2).column(k % d));
        let cols: Vec<_> = (0..qc.dim(a, b))
            .map(|h| {
                let mut e = vec![qc.field().zero(); qc.dim(a, b)];
                e[h] = qc.field().one();
                qc.compose(a2, b, b2, &pg, &qc.compose(a2, a, b, &e, &pf))
            })
            .collect();
        Matrix::from_columns(qc.field(), qc.dim(a2, b2), &cols)
    });
    Bimodule::new(env, rep)
}

/// `0 → I → C → H → 0` in bimodules.
#[derive(Clone, Debug)]
pub struct CanonicalSequence {
    pub ideal: Bimodule,
    pub regular: Bimodule,
    pub quotient: Bimodule,
    pub inclusion: RepMorphism,
    /// `Γ(π)`: `f ↦ π(f)`.
    pub gamma: RepMorphism,
}

pub fn canonical_sequence(env: &Arc<Enveloping>, q: &Quotient, ideal: &IdealData) -> Result<CanonicalSequence> {
    let (ib, inclusion) = ideal_bimodule(env, ideal)?;
    let regular = regular_bimodule(env);
    let quotient = quotient_bimodule(env, q);
    let n = env.cat.num_objects();
    let comps = (0..n * n).map(|x| q.projection(x / n, x % n).clone()).collect();
    let gamma = RepMorphism::new(regular.rep.clone(), quotient.rep.clone(), comps);
    let inclusion = RepMorphism::new(ib.rep.clone(), regular.rep.clone(), inclusion.comps().to_vec());
    Ok(CanonicalSequence { ideal: ib, regular, quotient, inclusion, gamma })
}

impl CanonicalSequence {
    /// Naturality of both maps and exactness at all three spots, by ranks.
    pub fn check_exact(&self) -> std::result::Result<(), String> {
        self.inclusion.check_natural()?;
        self.gamma.check_natural()?;
        if !self.inclusion.is_injective() {
            return Err("I → C is not injective".into());
        }
        if !self.gamma.is_surjective() {
            return Err("Γ(π) is not surjective".into());
        }
        if !self.gamma.compose(&self.inclusion).is_zero() {
            return Err("Γ(π) does not vanish on I".into());
        }
        let env = &self.regular.env;
        for x in 0..env.env.num_objects() {
            let (a, b) = env.split(x);
            if self.gamma.comp(x).nullity() != self.ideal.rep.dim(x) {
                return Err(format!("not exact at C({}, {})", env.cat.object_name(a), env.cat.object_name(b)));
            }
        }
        Ok(())
    }
}

/// Projective dimension of a bimodule over `C^e`, resolved up to degree `n`.
pub fn bimodule_resolution(b: &Bimodule, n: usize) -> Result<Resolution> {
    resolve(b.rep(), n)
}

pub fn bimodule_pd_bound(b: &Bimodule, n: usize) -> Result<ProjDim> {
    Ok(bimodule_resolution(b, n)?.projective_dimension())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceVerdict {
    pub object: String,
    pub right_projective: bool,
    pub left_projective: bool,
}

fn is_projective(m: Rep) -> Result<bool> {
    Ok(projective_cover(&Arc::new(m))?.kernel.is_zero())
}

/// For each object `c`, whether `B(c, −)` and `B(−, c)` are projective
/// (first syzygy zero).
pub fn slice_projectivity(b: &Bimodule) -> Result<Vec<SliceVerdict>> {
    let cat = &b.env.cat;
    (0..cat.num_objects())
        .map(|c| {
            Ok(SliceVerdict {
                object: cat.object_name(c).to_string(),
                right_projective: is_projective(b.slice_right(c))?,
                left_projective: is_projective(b.slice_left(c))?,
            })
        })
        .collect()
}
