use super::matrix::Matrix;
use super::scalar::{Field, Scalar};

/// A subquotient `Z / B` of `K^n` with a fixed basis of representatives.
///
/// `B` and `Z` may be given by dependent spanning columns; `B` must lie inside `Z`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    boundary_rank: usize,
    reps: Matrix,
    coords: Matrix,
}

impl Subquotient {
    pub fn new(boundaries: &Matrix, cycles: &Matrix) -> Subquotient {
        assert_eq!(boundaries.rows(), cycles.rows(), "subquotient ambient mismatch");
        let field = cycles.field();
        let ambient = cycles.rows();
        let all = boundaries.hstack(cycles);
        let pivots = all.independent_columns();
        let b_cols: Vec<usize> = pivots.iter().copied().filter(|&c| c < boundaries.cols()).collect();
        let z_cols: Vec<usize> = pivots.iter().copied().filter(|&c| c >= boundaries.cols()).collect();
        let basis = all.select_columns(&b_cols).hstack(&all.select_columns(&z_cols));
        let reps = all.select_columns(&z_cols);
        let coords = if basis.cols() == 0 {
            Matrix::zeros(field, 0, ambient)
        } else {
            let l = basis.left_inverse();
            l.block(b_cols.len(), 0, z_cols.len(), ambient)
        };
        Subquotient { ambient, boundary_rank: b_cols.len(), reps, coords }
    }

    /// The quotient `K^n / im(boundaries)`.
    pub fn cokernel(image: &Matrix) -> Subquotient {
        let n = image.rows();
        Subquotient::new(image, &Matrix::identity(image.field(), n))
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundary_rank
    }

    pub fn field(&self) -> Field {
        self.reps.field()
    }

    /// Representatives: column `j` is a vector of `Z` projecting to basis element `j`.
    pub fn representatives(&self) -> &Matrix {
        &self.reps
    }

    /// Coordinates of the class of `v` (which must lie in `Z`).
    pub fn coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.coords.mul_vec(v)
    }

    /// Coordinates of the classes of the columns of `m`.
    pub fn coordinates_matrix(&self, m: &Matrix) -> Matrix {
        self.coords.mul(m)
    }

    /// Matrix of the map induced by `f: ambient(self) -> ambient(target)` on subquotients.
    pub fn induced_map(&self, f: &Matrix, target: &Subquotient) -> Matrix {
        target.coordinates_matrix(&f.mul(&self.reps))
    }
}

/// Column space of `m` as an independent set of its own columns.
pub fn span(m: &Matrix) -> Matrix {
    m.column_space_basis()
}

/// Whether every column of `v` lies in the column space of `basis`.
pub fn contains(basis: &Matrix, v: &Matrix) -> bool {
    basis.rank() == basis.hstack(v).rank()
}

pub fn same_span(a: &Matrix, b: &Matrix) -> bool {
    let ra = a.rank();
    ra == b.rank() && ra == a.hstack(b).rank()
}
