use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{Field, Matrix, Scalar};

/// One element of a chosen basis of a hom space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomBasisElem {
    pub label: String,
    /// Lies in the radical of the category.
    pub radical: bool,
}

/// A finite-dimensional K-linear category given by hom bases and structure
/// constants of composition.
///
/// Objects are `0..n`. The hom space `C(x, y)` has basis `basis(x, y)`; the
/// composite of `g ∈ C(y, z)` and `f ∈ C(x, y)` is stored in the block of the
/// triple `(x, y, z)` in row-major order `[g][f][k]`, `k` ranging over `C(x, z)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PresentedCategory {
    field: Field,
    objects: Vec<String>,
    bases: Vec<Vec<HomBasisElem>>,
    identities: Vec<Option<usize>>,
    tables: Vec<Vec<Scalar>>,
}

impl std::fmt::Debug for PresentedCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PresentedCategory({} objects, total dim {})", self.objects.len(), self.total_dim())
    }
}

impl PresentedCategory {
    /// Assembles a category; `compose(x, y, z, g, f)` returns the coordinates of
    /// `g ∘ f` in `basis(x, z)`. Axioms are not checked here.
    pub fn from_parts(
        field: Field,
        objects: Vec<String>,
        bases: Vec<Vec<HomBasisElem>>,
        identities: Vec<Option<usize>>,
        mut compose: impl FnMut(usize, usize, usize, usize, usize) -> Vec<Scalar>,
    ) -> PresentedCategory {
        let n = objects.len();
        assert_eq!(bases.len(), n * n);
        assert_eq!(identities.len(), n);
        let mut tables = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (dxy, dyz, dxz) = (bases[x * n + y].len(), bases[y * n + z].len(), bases[x * n + z].len());
                    let mut t = Vec::new();
                    if dxy * dyz * dxz > 0 {
                        t.reserve(dxy * dyz * dxz);
                        for g in 0..dyz {
                            for f in 0..dxy {
                                let v = compose(x, y, z, g, f);
                                debug_assert_eq!(v.len(), dxz);
                                t.extend(v);
                            }
                        }
                    }
                    tables.push(t);
                }
            }
        }
        PresentedCategory { field, objects, bases, identities, tables }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.bases[x * self.objects.len() + y].len()
    }

    pub fn basis(&self, x: usize, y: usize) -> &[HomBasisElem] {
        &self.bases[x * self.objects.len() + y]
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    /// Index of `id_x` in `basis(x, x)`, or `None` when `id_x = 0`.
    pub fn identity(&self, x: usize) -> Option<usize> {
        self.identities[x]
    }

    pub fn identity_vector(&self, x: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim(x, x)];
        if let Some(i) = self.identities[x] {
            v[i] = self.field.one();
        }
        v
    }

    /// `id_x = 0`, i.e. every hom space at `x` vanishes.
    pub fn is_zero_object(&self, x: usize) -> bool {
        self.identities[x].is_none()
    }

    pub fn nonzero_objects(&self) -> Vec<usize> {
        (0..self.num_objects()).filter(|&x| !self.is_zero_object(x)).collect()
    }

    /// The one-object category with endomorphisms `K`.
    pub fn point(field: Field, name: &str) -> PresentedCategory {
        let basis = vec![vec![HomBasisElem { label: format!("id({name})"), radical: false }]];
        PresentedCategory::from_parts(field, vec![name.to_string()], basis, vec![Some(0)], |_, _, _, _, _| {
            vec![field.one()]
        })
    }

    /// `v ∈ C(x, y)` as a linear combination of basis labels, e.g. `2*b - a`.
    pub fn render_element(&self, x: usize, y: usize, v: &[Scalar]) -> String {
        let mut out = String::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let label = &self.basis(x, y)[i].label;
            let neg = -c;
            // Negative residues print with a minus sign when they are small.
            let (sign, mag) = match c {
                Scalar::Mod { value, modulus } if *value > modulus / 2 => ("-", neg),
                Scalar::Rat(r) if r.numer() < &num_bigint::BigInt::from(0) => ("-", neg),
                _ => ("+", c.clone()),
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if mag.is_one() {
                out.push_str(label);
            } else {
                out.push_str(&format!("{mag}*{label}"));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    /// Coordinates of `g ∘ f` for basis elements `g ∈ C(y, z)`, `f ∈ C(x, y)`.
    pub fn compose_basis(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> &[Scalar] {
        let n = self.objects.len();
        let dxy = self.dim(x, y);
        let dxz = self.dim(x, z);
        let t = &self.tables[(x * n + y) * n + z];
        let off = (g * dxy + f) * dxz;
        &t[off..off + dxz]
    }

    /// Composite of arbitrary vectors `g ∈ C(y, z)` and `f ∈ C(x, y)`.
    pub fn compose(&self, x: usize, y: usize, z: usize, g: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim(x, z)];
        for (gi, gc) in g.iter().enumerate() {
            if gc.is_zero() {
                continue;
            }
            for (fi, fc) in f.iter().enumerate() {
                if fc.is_zero() {
                    continue;
                }
                let c = gc * fc;
                for (o, s) in out.iter_mut().zip(self.compose_basis(x, y, z, gi, fi)) {
                    if !s.is_zero() {
                        *o = &*o + &(&c * s);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `f ↦ g ∘ f` from `C(x, y)` to `C(x, z)` for a basis element `g ∈ C(y, z)`.
    pub fn left_mul_matrix(&self, x: usize, y: usize, z: usize, g: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim(x, z), self.dim(x, y));
        for f in 0..self.dim(x, y) {
            for (k, s) in self.compose_basis(x, y, z, g, f).iter().enumerate() {
                m.set(k, f, s.clone());
            }
        }
        m
    }

    /// Matrix of `g ↦ g ∘ f` from `C(y, z)` to `C(x, z)` for a basis element `f ∈ C(x, y)`.
    pub fn right_mul_matrix(&self, x: usize, y: usize, z: usize, f: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim(x, z), self.dim(y, z));
        for g in 0..self.dim(y, z) {
            for (k, s) in self.compose_basis(x, y, z, g, f).iter().enumerate() {
                m.set(k, g, s.clone());
            }
        }
        m
    }

    /// Verifies associativity and the unit laws: exhaustively when the total
    /// basis size is at most 200, otherwise on a deterministic sample.
    pub fn check_axioms(&self) -> Result<(), String> {
        let n = self.num_objects();
        for x in 0..n {
            for y in 0..n {
                for f in 0..self.dim(x, y) {
                    let mut e = vec![self.field.zero(); self.dim(x, y)];
                    e[f] = self.field.one();
                    if self.compose(x, y, y, &self.identity_vector(y), &e) != e
                        || self.compose(x, x, y, &e, &self.identity_vector(x)) != e
                    {
                        return Err(format!(
                            "unit law fails for `{}` in ({}, {})",
                            self.basis(x, y)[f].label,
                            self.objects[x],
                            self.objects[y]
                        ));
                    }
                }
            }
        }
        let check = |w: usize, x: usize, y: usize, z: usize, h: usize, g: usize, f: usize| {
            // h ∈ C(y, z), g ∈ C(x, y), f ∈ C(w, x)
            let hg = self.compose_basis(x, y, z, h, g);
            let gf = self.compose_basis(w, x, y, g, f);
            let mut ef = vec![self.field.zero(); self.dim(w, x)];
            ef[f] = self.field.one();
            let mut eh = vec![self.field.zero(); self.dim(y, z)];
            eh[h] = self.field.one();
            let left = self.compose(w, x, z, hg, &ef);
            let right = self.compose(w, y, z, &eh, gf);
            if left != right {
                Err(format!(
                    "associativity fails for ({}, {}, {})",
                    self.basis(y, z)[h].label,
                    self.basis(x, y)[g].label,
                    self.basis(w, x)[f].label
                ))
            } else {
                Ok(())
            }
        };
        if self.total_dim() <= 200 {
            for w in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            if self.dim(w, x) * self.dim(x, y) * self.dim(y, z) == 0 {
                                continue;
                            }
                            for h in 0..self.dim(y, z) {
                                for g in 0..self.dim(x, y) {
                                    for f in 0..self.dim(w, x) {
                                        check(w, x, y, z, h, g, f)?;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let mut done = 0;
            let mut tries = 0;
            while done < 20_000 && tries < 200_000 {
                tries += 1;
                let (w, x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                let (a, b, c) = (self.dim(w, x), self.dim(x, y), self.dim(y, z));
                if a * b * c == 0 {
                    continue;
                }
                check(w, x, y, z, rng.gen_range(0..c), rng.gen_range(0..b), rng.gen_range(0..a))?;
                done += 1;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// K[x]/(x^2) on one object.
    fn dual_numbers() -> PresentedCategory {
        let q = Field::Rational;
        let basis = vec![
            HomBasisElem { label: "id".into(), radical: false },
            HomBasisElem { label: "x".into(), radical: true },
        ];
        PresentedCategory::from_parts(q, vec!["*".into()], vec![basis], vec![Some(0)], |_, _, _, g, f| match g + f {
            0 => vec![q.one(), q.zero()],
            1 => vec![q.zero(), q.one()],
            _ => vec![q.zero(), q.zero()],
        })
    }

    #[test]
    fn dual_numbers_satisfy_axioms() {
        let c = dual_numbers();
        assert_eq!(c.dim(0, 0), 2);
        c.check_axioms().unwrap();
        let x = [Field::Rational.zero(), Field::Rational.one()];
        assert!(c.compose(0, 0, 0, &x, &x).iter().all(Scalar::is_zero));
        let l = c.left_mul_matrix(0, 0, 0, 1);
        assert_eq!(l, Matrix::from_i64(Field::Rational, &[&[0, 0], &[1, 0]]));
    }

    #[test]
    fn broken_unit_is_detected() {
        let q = Field::Rational;
        let basis = vec![
            HomBasisElem { label: "id".into(), radical: false },
            HomBasisElem { label: "x".into(), radical: true },
        ];
        let c = PresentedCategory::from_parts(q, vec!["*".into()], vec![basis], vec![Some(0)], |_, _, _, _, _| {
            vec![q.one(), q.zero()]
        });
        assert!(c.check_axioms().is_err());
    }
}
