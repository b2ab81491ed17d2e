use crate::error::{Error, Result};
use crate::field::Field;
use crate::mat::Mat;

/// Dense (possibly rectangular) matrix over a field, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> FieldMat<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        FieldMat {
            data: vec![field.zero(); rows * cols],
            field: field.clone(),
            rows,
            cols,
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_elems(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadLength {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(FieldMat {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Stacks equal-length row vectors; `cols` is needed when `rows` is empty.
    pub fn from_rows(field: &F, cols: usize, rows: &[Vec<F::Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(r.len(), cols));
            }
            data.extend(r.iter().cloned());
        }
        Self::from_elems(field, rows.len(), cols, data)
    }

    pub fn from_ints(field: &F, rows: usize, cols: usize, vals: &[i128]) -> Result<Self> {
        let data = vals.iter().map(|&v| field.from_int(v)).collect();
        Self::from_elems(field, rows, cols, data)
    }

    pub fn from_mat(field: &F, a: &Mat) -> Self {
        let n = a.n();
        let data = a.entries().iter().map(|&v| field.from_int(v)).collect();
        FieldMat {
            field: field.clone(),
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.field.is_zero(self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn mul(&self, other: &FieldMat<F>) -> Result<FieldMat<F>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other.get(l, j));
                    let cell = &mut out.data[i * other.cols + j];
                    *cell = f.add(cell, &t);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &FieldMat<F>) -> Result<FieldMat<F>> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(self.rows, other.rows));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Self::from_elems(&self.field, self.rows, self.cols, data)
    }

    pub fn transpose(&self) -> FieldMat<F> {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Row vector times matrix: `v^T * self`.
    pub fn left_apply(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(v.len(), self.rows));
        }
        let f = &self.field;
        Ok((0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .fold(f.zero(), |acc, (i, x)| f.add(&acc, &f.mul(x, self.get(i, j))))
            })
            .collect())
    }

    /// Reduced row echelon form and the (0-based, increasing) pivot columns.
    ///
    /// Pivot entries are 1 and every other entry of a pivot column is 0.
    pub fn rref(&self) -> (FieldMat<F>, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Entries formatted by the field (`"a/b"` for non-integral rationals).
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| self.field.format(e)).collect())
            .collect()
    }
}

/// Basis of the left null space `{v : v^T a = 0}`.
///
/// One vector per free column of `rref(a^T)`, with a 1 in that position.
pub fn left_null_basis<F: Field>(a: &FieldMat<F>) -> Vec<Vec<F::Elem>> {
    let f = a.field();
    let t = a.transpose();
    let (r, pivots) = t.rref();
    let len = t.cols();
    let free: Vec<usize> = (0..len).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); len];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, fc));
            }
            v
        })
        .collect()
}
