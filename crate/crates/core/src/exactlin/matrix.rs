use std::fmt;

use super::scalar::{mod_inv, Field, Scalar};

/// The right-hand side is not in the column space of the coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("linear system has no solution")]
pub struct NoSolution;

/// Dense matrix over a [`Field`], stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { field, rows: r, cols: c, data }
    }

    /// Convenience constructor from small integers (tests, examples).
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(field, rows.iter().map(|row| row.iter().map(|&v| field.from_i64(v)).collect()).collect())
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn column_vector(field: Field, v: &[Scalar]) -> Matrix {
        Matrix::from_columns(field, v.len(), &[v.to_vec()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        if let Field::Prime(p) = self.field {
            let p = p as u64;
            let a: Vec<u64> = self.data.iter().map(Scalar::residue).collect();
            let b: Vec<u64> = rhs.data.iter().map(Scalar::residue).collect();
            let mut out = vec![0u64; n * m];
            for i in 0..n {
                for t in 0..k {
                    let x = a[i * k + t];
                    if x == 0 {
                        continue;
                    }
                    let row = &b[t * m..(t + 1) * m];
                    let dst = &mut out[i * m..(i + 1) * m];
                    for (d, &y) in dst.iter_mut().zip(row) {
                        *d = (*d + x * y) % p;
                    }
                }
            }
            return Matrix::from_residues(self.field, n, m, out);
        }
        let mut out = Matrix::zeros(self.field, n, m);
        for i in 0..n {
            for t in 0..k {
                let x = self.get(i, t);
                if x.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let y = rhs.get(t, j);
                    if !y.is_zero() {
                        let cur = &out.data[i * m + j] + &(x * y);
                        out.data[i * m + j] = cur;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// `self += s * other`, skipping the work when `s` is zero.
    pub fn add_scaled(&mut self, s: &Scalar, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = &*a + &(s * b);
            }
        }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.data[r * cols + c] = self.get(r0 + r, c0 + c).clone();
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c).clone();
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, rhs);
        out
    }

    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix { field: self.field, rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    fn from_residues(field: Field, rows: usize, cols: usize, data: Vec<u64>) -> Matrix {
        let p = match field {
            Field::Prime(p) => p,
            Field::Rational => unreachable!(),
        };
        Matrix {
            field,
            rows,
            cols,
            data: data.into_iter().map(|v| Scalar::Mod { value: v as u32, modulus: p }).collect(),
        }
    }

    /// Reduced row echelon form together with the strictly increasing pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        if let Field::Prime(p) = self.field {
            let mut res: Vec<u64> = self.data.iter().map(Scalar::residue).collect();
            let pivots = rref_mod(&mut res, self.rows, self.cols, p as u64);
            *self = Matrix::from_residues(self.field, self.rows, self.cols, res);
            return pivots;
        }
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..cols {
                let v = &self.data[r * cols + j] * &inv;
                self.data[r * cols + j] = v;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let prod = &factor * &self.data[r * cols + j];
                    if !prod.is_zero() {
                        let v = &self.data[i * cols + j] - &prod;
                        self.data[i * cols + j] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Columns form a basis of the null space, one per free column of the reduced form.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| pivots.binary_search(c).is_err()).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, self.field.one());
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                if !v.is_zero() {
                    k.set(pc, j, -v);
                }
            }
        }
        k
    }

    /// Exact solution of `self * x = b` (free variables set to zero).
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>, NoSolution> {
        let x = self.solve_matrix(&Matrix::column_vector(self.field, b))?;
        Ok(x.column(0))
    }

    /// Exact solution of `self * X = rhs`.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Result<Matrix, NoSolution> {
        assert_eq!(self.rows, rhs.rows, "solve shape mismatch");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(NoSolution);
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(i, self.cols + j).clone());
            }
        }
        Ok(x)
    }

    /// Indices of a greedy left-to-right maximal independent set of columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// A basis of the column space drawn from the columns themselves.
    pub fn column_space_basis(&self) -> Matrix {
        self.select_columns(&self.independent_columns())
    }

    /// Left inverse `L` with `L * self = I` for a matrix of full column rank.
    pub fn left_inverse(&self) -> Matrix {
        let aug = self.hstack(&Matrix::identity(self.field, self.rows));
        let (r, pivots) = aug.rref();
        assert!(
            pivots.len() >= self.cols && pivots[..self.cols].iter().enumerate().all(|(i, &p)| i == p),
            "left inverse requires full column rank"
        );
        r.block(0, self.cols, self.cols, self.rows)
    }
}

fn rref_mod(m: &mut [u64], rows: usize, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = mod_inv(m[r * cols + c], p);
        for j in c..cols {
            m[r * cols + j] = m[r * cols + j] * inv % p;
        }
        let (before, rest) = m.split_at_mut(r * cols);
        let (pivot_row, after) = rest.split_at_mut(cols);
        for row in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for j in c..cols {
                row[j] = (row[j] + nf * pivot_row[j]) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    const Q: Field = Field::Rational;

    #[test]
    fn rref_identity_is_fixed() {
        let i = Matrix::identity(Q, 2);
        let (r, p) = i.rref();
        assert_eq!(r, i);
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let a = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let (r, p) = a.rref();
        assert_eq!(r, Matrix::from_i64(Q, &[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_is_idempotent_on_random_gf7() {
        let f = Field::Prime(7);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let rows: Vec<Vec<Scalar>> =
                (0..20).map(|_| (0..20).map(|_| f.from_i64(rng.gen_range(0..7))).collect()).collect();
            let a = Matrix::from_rows(f, rows);
            let (r1, p1) = a.rref();
            let (r2, p2) = r1.rref();
            assert_eq!(r1, r2);
            assert_eq!(p1, p2);
        }
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        let z = Matrix::zeros(Q, 3, 3);
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
        assert_eq!(Matrix::identity(Q, 4).kernel_basis().cols(), 0);
    }

    #[test]
    fn kernel_of_sum_row_gf5() {
        let f = Field::Prime(5);
        let a = Matrix::from_i64(f, &[&[1, 1]]);
        let k = a.kernel_basis();
        assert_eq!(k.cols(), 1);
        // x + y = 0 over GF(5): (4, 1) after normalising the free coordinate.
        assert_eq!(k.column(0), vec![f.from_i64(4), f.from_i64(1)]);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn solve_examples() {
        let b = vec![Q.from_i64(3), Q.from_i64(-2)];
        assert_eq!(Matrix::identity(Q, 2).solve(&b).unwrap(), b);
        assert_eq!(Matrix::zeros(Q, 2, 2).solve(&b), Err(NoSolution));
        let a = Matrix::from_i64(Q, &[&[1, 2], &[0, 1]]);
        let x = a.solve(&[Q.from_i64(3), Q.from_i64(1)]).unwrap();
        assert_eq!(x, vec![Q.from_i64(1), Q.from_i64(1)]);
    }

    #[test]
    fn left_inverse_of_tall_matrix() {
        let a = Matrix::from_i64(Q, &[&[1, 0], &[2, 1], &[0, 3]]);
        let l = a.left_inverse();
        assert_eq!(l.mul(&a), Matrix::identity(Q, 2));
    }

    fn random_matrix(f: Field, rows: usize, cols: usize, seed: u64, density: f64) -> Matrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::zeros(f, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    let v = match f {
                        Field::Rational => {
                            Q.from_ratio(&rng.gen_range(-5i64..6).into(), &rng.gen_range(1i64..4).into()).unwrap()
                        }
                        _ => f.from_i64(rng.gen_range(0..1000)),
                    };
                    m.set(r, c, v);
                }
            }
        }
        m
    }

    proptest! {
        #[test]
        fn rank_nullity_and_kernel(
            rows in 0usize..7, cols in 0usize..7, seed in any::<u64>(),
            rational in any::<bool>(), density in 0.1f64..0.9,
        ) {
            let f = if rational { Q } else { Field::Prime(32003) };
            let a = random_matrix(f, rows, cols, seed, density);
            let k = a.kernel_basis();
            prop_assert_eq!(a.rank() + k.cols(), cols);
            prop_assert!(a.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_is_exact_or_rank_jumps(
            rows in 1usize..6, cols in 1usize..6, seed in any::<u64>(), rational in any::<bool>(),
        ) {
            let f = if rational { Q } else { Field::Prime(7) };
            let a = random_matrix(f, rows, cols, seed, 0.5);
            let b = random_matrix(f, rows, 1, seed ^ 0xabcdef, 0.7).column(0);
            match a.solve(&b) {
                Ok(x) => prop_assert_eq!(a.mul_vec(&x), b),
                Err(NoSolution) => {
                    let aug = a.hstack(&Matrix::column_vector(f, &b));
                    prop_assert!(aug.rank() > a.rank());
                }
            }
        }
    }
}
