//! Dense integer matrices and the Smith normal form.

use std::fmt;

use super::int::Int;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Int::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + j].add_mul(k, &s);
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                self.data[i * self.cols + dst].add_mul(k, &s);
            }
        }
    }

    fn neg_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Result of a Smith decomposition: `u * m * v = d`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl Smith {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

/// Diagonal of the Smith form without transforms.
pub fn smith_diagonal(m: &Matrix) -> Vec<Int> {
    let mut d = m.clone();
    reduce(&mut d, None, None);
    (0..d.rows.min(d.cols))
        .map(|i| d[(i, i)].clone())
        .take_while(|x| !x.is_zero())
        .collect()
}

/// Full decomposition with unimodular `u`, `v`. The identity `u*m*v = d` is
/// asserted in debug builds.
pub fn snf(m: &Matrix) -> Smith {
    let mut d = m.clone();
    let mut u = Matrix::identity(m.rows);
    let mut v = Matrix::identity(m.cols);
    reduce(&mut d, Some(&mut u), Some(&mut v));
    debug_assert!(u.mul(m).mul(&v) == d, "Smith transform check failed");
    Smith { u, d, v }
}

fn reduce(d: &mut Matrix, mut u: Option<&mut Matrix>, mut v: Option<&mut Matrix>) {
    let (rows, cols) = (d.rows, d.cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &d[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            break;
        };
        d.swap_rows(t, pi);
        if let Some(u) = u.as_deref_mut() {
            u.swap_rows(t, pi);
        }
        d.swap_cols(t, pj);
        if let Some(v) = v.as_deref_mut() {
            v.swap_cols(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.add_row(i, t, &q);
                }
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                if let Some(v) = v.as_deref_mut() {
                    v.add_col(j, t, &q);
                }
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // Divisibility: fold in any row whose entries the pivot does not divide.
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !d[(t, t)].divides(&d[(i, j)])));
                match bad {
                    None => break,
                    Some(i) => {
                        d.add_row(t, i, &Int::ONE);
                        if let Some(u) = u.as_deref_mut() {
                            u.add_row(t, i, &Int::ONE);
                        }
                    }
                }
            }
            // Move the smallest remaining entry of row/column t into the pivot.
            let mut best = (t, t);
            for i in t..rows {
                let x = &d[(i, t)];
                if !x.is_zero() && x.abs() < d[best].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                let x = &d[(t, j)];
                if !x.is_zero() && x.abs() < d[best].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                d.swap_rows(t, best.0);
                if let Some(u) = u.as_deref_mut() {
                    u.swap_rows(t, best.0);
                }
            } else if best.1 != t {
                d.swap_cols(t, best.1);
                if let Some(v) = v.as_deref_mut() {
                    v.swap_cols(t, best.1);
                }
            }
        }
        if d[(t, t)].is_negative() {
            d.neg_row(t);
            if let Some(u) = u.as_deref_mut() {
                u.neg_row(t);
            }
        }
        t += 1;
    }
}
