use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::Scalar;

use super::free::{projective_cover, FreeMap, FreeModule};
use super::rep::{Rep, RepMorphism};

/// Projective dimension as far as it was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ProjDim {
    /// Some syzygy vanished: the projective dimension is exactly this.
    Exactly(usize),
    /// The resolution was computed to this length without terminating.
    Exceeds(usize),
}

impl ProjDim {
    pub fn exact(&self) -> Option<usize> {
        match self {
            ProjDim::Exactly(k) => Some(*k),
            ProjDim::Exceeds(_) => None,
        }
    }
}

impl fmt::Display for ProjDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjDim::Exactly(k) => write!(f, "= {k}"),
            ProjDim::Exceeds(n) => write!(f, "> {n}"),
        }
    }
}

/// A minimal projective resolution `… → P_1 → P_0 → M`, possibly truncated.
#[derive(Clone, Debug)]
pub struct Resolution {
    module: Arc<Rep>,
    terms: Vec<FreeModule>,
    augmentation: FreeMap,
    /// `diffs[i]: P_{i+1} → P_i`.
    diffs: Vec<FreeMap>,
    /// Kernel of the last map computed.
    syzygy: Arc<Rep>,
    terminated: bool,
}

/// Resolves `M` up to `P_n`, stopping early when a syzygy vanishes.
pub fn resolve(m: &Arc<Rep>, n: usize) -> Result<Resolution> {
    let cover = projective_cover(m)?;
    let mut terms = vec![cover.free];
    let augmentation = cover.augmentation;
    let mut diffs = Vec::new();
    let mut omega = cover.kernel;
    let mut inclusion = cover.inclusion;
    for _ in 1..=n {
        if omega.is_zero() {
            break;
        }
        let c = projective_cover(&omega)?;
        let images =
            c.augmentation.images.iter().zip(c.free.gens()).map(|(v, &x)| inclusion.comp(x).mul_vec(v)).collect();
        diffs.push(FreeMap { images });
        terms.push(c.free);
        omega = c.kernel;
        inclusion = c.inclusion;
    }
    let terminated = omega.is_zero();
    Ok(Resolution { module: m.clone(), terms, augmentation, diffs, syzygy: omega, terminated })
}

impl Resolution {
    pub fn module(&self) -> &Arc<Rep> {
        &self.module
    }

    /// Index of the last computed term.
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, i: usize) -> Option<&FreeModule> {
        self.terms.get(i)
    }

    pub fn terms(&self) -> &[FreeModule] {
        &self.terms
    }

    pub fn augmentation(&self) -> &FreeMap {
        &self.augmentation
    }

    /// `d_i: P_i → P_{i−1}` for `i ≥ 1`.
    pub fn differential(&self, i: usize) -> Option<&FreeMap> {
        i.checked_sub(1).and_then(|j| self.diffs.get(j))
    }

    /// Kernel of the last computed map; zero iff the resolution terminated.
    pub fn last_syzygy(&self) -> &Arc<Rep> {
        &self.syzygy
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// Whether degree `i` is determined (computed, or beyond the end of a finite resolution).
    pub fn covers_degree(&self, i: usize) -> bool {
        self.terminated || i <= self.length()
    }

    pub fn projective_dimension(&self) -> ProjDim {
        if self.terminated {
            ProjDim::Exactly(self.length())
        } else {
            ProjDim::Exceeds(self.length())
        }
    }

    pub fn augmentation_morphism(&self) -> RepMorphism {
        self.terms[0].morphism(&self.augmentation.images, &self.module)
    }

    pub fn differential_morphism(&self, i: usize) -> Option<RepMorphism> {
        let d = self.differential(i)?;
        Some(self.terms[i].morphism(&d.images, self.terms[i - 1].rep()))
    }

    /// Verifies `d ∘ d = 0`, surjectivity of the augmentation and exactness by ranks.
    pub fn check_exact(&self) -> std::result::Result<(), String> {
        let n = self.module.category().num_objects();
        let eps = self.augmentation_morphism();
        if !eps.is_surjective() {
            return Err("augmentation is not surjective".into());
        }
        let mut prev = eps;
        for i in 1..=self.length() {
            let d = self.differential_morphism(i).expect("differential");
            if !prev.compose(&d).is_zero() {
                return Err(format!("d_{} ∘ d_{i} ≠ 0", i - 1));
            }
            for x in 0..n {
                let ker = prev.comp(x).nullity();
                if ker != d.comp(x).rank() {
                    return Err(format!("not exact at P_{} over `{}`", i - 1, self.module.category().object_name(x)));
                }
            }
            prev = d;
        }
        for x in 0..n {
            if prev.comp(x).nullity() != self.syzygy.dim(x) {
                return Err("last syzygy has the wrong dimension".into());
            }
        }
        Ok(())
    }

    /// The resolution as an augmented complex of modules.
    pub fn complex(&self) -> AugmentedComplex {
        AugmentedComplex {
            terms: self.terms.iter().map(|t| t.rep().clone()).collect(),
            diffs: (1..=self.length()).map(|i| self.differential_morphism(i).unwrap()).collect(),
            augmentation: self.augmentation_morphism(),
        }
    }
}

/// An exact complex `… → T_1 → T_0 → N` of modules; terms beyond the end are zero.
#[derive(Clone, Debug)]
pub struct AugmentedComplex {
    pub terms: Vec<Arc<Rep>>,
    /// `diffs[i]: T_{i+1} → T_i`.
    pub diffs: Vec<RepMorphism>,
    pub augmentation: RepMorphism,
}

/// Lifts `f: M → N` to a chain map from the resolution of `M` into `target`,
/// in degrees `0..=up_to` (as images of the generators of each `P_k`).
pub fn lift_chain_map(
    source: &Resolution,
    target: &AugmentedComplex,
    f: &RepMorphism,
    up_to: usize,
) -> Result<Vec<FreeMap>> {
    let mut out: Vec<FreeMap> = Vec::new();
    for k in 0..=up_to.min(source.length()) {
        let p = &source.terms[k];
        let Some(t) = target.terms.get(k) else {
            // The target vanishes from here on.
            let images = p.gens().iter().map(|_| Vec::new()).collect();
            out.push(FreeMap { images });
            continue;
        };
        let mut images = Vec::with_capacity(p.rank());
        for (h, &c) in p.gens().iter().enumerate() {
            let (want, map) = if k == 0 {
                (f.comp(c).mul_vec(&source.augmentation.images[h]), &target.augmentation)
            } else {
                let prev_term = &source.terms[k - 1];
                let prev_target = &target.terms[k - 1];
                let comp = prev_term.morphism_component(&out[k - 1].images, prev_target, c);
                let dp = &source.diffs[k - 1].images[h];
                let Some(map) = target.diffs.get(k - 1) else {
                    return Err(Error::LiftFailure(format!("target complex has no differential in degree {k}")));
                };
                (comp.mul_vec(dp), map)
            };
            let sol: Vec<Scalar> = map
                .comp(c)
                .solve(&want)
                .map_err(|_| Error::LiftFailure(format!("no lift in degree {k} at generator {h}")))?;
            debug_assert_eq!(sol.len(), t.dim(c));
            images.push(sol);
        }
        out.push(FreeMap { images });
    }
    Ok(out)
}
