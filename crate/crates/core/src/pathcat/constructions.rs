use crate::exactlin::Scalar;

use super::category::{HomBasisElem, PresentedCategory};

/// `C^op`: `C^op(x, y) = C(y, x)` with the same basis indices.
pub fn opposite(c: &PresentedCategory) -> PresentedCategory {
    let n = c.num_objects();
    let mut bases = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            bases.push(c.basis(y, x).to_vec());
        }
    }
    let identities = (0..n).map(|x| c.identity(x)).collect();
    PresentedCategory::from_parts(c.field(), c.objects().to_vec(), bases, identities, |x, y, z, g, f| {
        // g ∈ C(z, y), f ∈ C(y, x): g ∘op f = f ∘ g ∈ C(z, x).
        c.compose_basis(z, y, x, f, g).to_vec()
    })
}

/// `C ⊗_K D`: objects are pairs `(a, b)` indexed `a * |D| + b`; the basis of a
/// hom space is `f ⊗ g` indexed `i * dim + j`.
pub fn tensor(c: &PresentedCategory, d: &PresentedCategory) -> PresentedCategory {
    assert_eq!(c.field(), d.field(), "tensor of categories over different fields");
    let (n1, n2) = (c.num_objects(), d.num_objects());
    let n = n1 * n2;
    let split = |x: usize| (x / n2, x % n2);
    let objects = (0..n)
        .map(|x| {
            let (a, b) = split(x);
            format!("({},{})", c.object_name(a), d.object_name(b))
        })
        .collect();
    let mut bases = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let ((a, b), (a2, b2)) = (split(x), split(y));
            let mut basis = Vec::with_capacity(c.dim(a, a2) * d.dim(b, b2));
            for f in c.basis(a, a2) {
                for g in d.basis(b, b2) {
                    basis.push(HomBasisElem {
                        label: format!("{}⊗{}", f.label, g.label),
                        radical: f.radical || g.radical,
                    });
                }
            }
            bases.push(basis);
        }
    }
    let identities = (0..n)
        .map(|x| {
            let (a, b) = split(x);
            Some(c.identity(a)? * d.dim(b, b) + d.identity(b)?)
        })
        .collect();
    PresentedCategory::from_parts(c.field(), objects, bases, identities, |x, y, z, g, f| {
        let ((a1, b1), (a2, b2), (a3, b3)) = (split(x), split(y), split(z));
        let (d12, d23, d13) = (d.dim(b1, b2), d.dim(b2, b3), d.dim(b1, b3));
        let (f1, g1) = (f / d12, f % d12);
        let (f2, g2) = (g / d23, g % d23);
        let left = c.compose_basis(a1, a2, a3, f2, f1);
        let right = d.compose_basis(b1, b2, b3, g2, g1);
        let mut out = vec![c.field().zero(); c.dim(a1, a3) * d13];
        for (i, u) in left.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            for (j, v) in right.iter().enumerate() {
                if !v.is_zero() {
                    out[i * d13 + j] = u * v;
                }
            }
        }
        out
    })
}

/// `C^e = C^op ⊗ C`. A module over it is a `C`-bimodule `(a, b) ↦ B(a, b)`,
/// contravariant in `a` and covariant in `b`.
pub fn enveloping(c: &PresentedCategory) -> PresentedCategory {
    tensor(&opposite(c), c)
}

/// Index of the object `(a, b)` of `C ⊗ D`.
pub fn pair_index(d_objects: usize, a: usize, b: usize) -> usize {
    a * d_objects + b
}

/// The elementary tensor `u ⊗ v` in the coordinates of a tensor hom space.
pub fn tensor_vector(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}
