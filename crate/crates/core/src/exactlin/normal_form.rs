use super::matrix::Matrix;
use super::scalar::{Field, Scalar};

/// Normal forms modulo a subspace `W ⊆ K^n`.
///
/// Pivots are chosen on the highest coordinates, so the complement (the basis
/// of `K^n / W`) consists of the lowest-indexed standard vectors.
#[derive(Clone, Debug)]
pub struct NormalForm {
    field: Field,
    dim: usize,
    /// Reduced rows in original coordinates; row `i` has a 1 at `pivots[i]`.
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    complement: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl NormalForm {
    /// `generators` holds spanning vectors of `W` as columns.
    pub fn new(generators: &Matrix) -> NormalForm {
        let field = generators.field();
        let dim = generators.rows();
        let mut rev = Matrix::zeros(field, generators.cols(), dim);
        for c in 0..generators.cols() {
            for r in 0..dim {
                let v = generators.get(r, c);
                if !v.is_zero() {
                    rev.set(c, dim - 1 - r, v.clone());
                }
            }
        }
        let (rr, piv) = rev.rref();
        let mut rows = Vec::with_capacity(piv.len());
        let mut pivots = Vec::with_capacity(piv.len());
        for (i, &p) in piv.iter().enumerate() {
            let row: Vec<Scalar> = (0..dim).map(|j| rr.get(i, dim - 1 - j).clone()).collect();
            rows.push(row);
            pivots.push(dim - 1 - p);
        }
        let mut position = vec![None; dim];
        let mut complement = Vec::new();
        let mut is_pivot = vec![false; dim];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for j in 0..dim {
            if !is_pivot[j] {
                position[j] = Some(complement.len());
                complement.push(j);
            }
        }
        NormalForm { field, dim, rows, pivots, complement, position }
    }

    /// The zero subspace of `K^dim`.
    pub fn zero(field: Field, dim: usize) -> NormalForm {
        NormalForm::new(&Matrix::zeros(field, dim, 0))
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Indices of the standard vectors forming a basis of the quotient.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Position of standard vector `j` in the complement, if it belongs to it.
    pub fn complement_position(&self, j: usize) -> Option<usize> {
        self.position[j]
    }

    /// Spanning rows of `W` in reduced form.
    pub fn subspace_basis(&self) -> Matrix {
        Matrix::from_columns(self.field, self.dim, &self.rows)
    }

    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim);
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = &*o - &(&c * r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates of the class of `v` on the complement basis.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.reduce(v);
        self.complement.iter().map(|&j| r[j].clone()).collect()
    }

    /// Coordinates of the class of the standard vector `e_j`.
    pub fn project_basis(&self, j: usize) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.complement.len()];
        if let Some(p) = self.position[j] {
            out[p] = self.field.one();
            return out;
        }
        let i = self.pivots.iter().position(|&p| p == j).expect("pivot");
        for (k, &c) in self.complement.iter().enumerate() {
            let r = &self.rows[i][c];
            if !r.is_zero() {
                out[k] = -r;
            }
        }
        out
    }

    /// Matrix of the projection `K^dim → K^dim / W` in complement coordinates.
    pub fn projection_matrix(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.project_basis(j)).collect();
        Matrix::from_columns(self.field, self.complement.len(), &cols)
    }
}
