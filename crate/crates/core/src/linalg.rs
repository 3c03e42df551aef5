//! Exact dense linear algebra over any coefficient field: reduced row
//! echelon form, rank, nullspace bases, and determinants. Pivots are chosen
//! as the first nonzero entry in column order, which keeps every result
//! deterministic.

use crate::rings::{Field, RingError};

#[derive(Clone, Debug)]
pub struct Matrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, field: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = field.zero();
                for c in 0..self.cols {
                    if !field.is_zero(self.at(r, c)) && !field.is_zero(&v[c]) {
                        acc = field.add(&acc, &field.mul(self.at(r, c), &v[c]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Delete one column (used by maximal-minor extraction).
    pub fn without_column(&self, field: &F, col: usize) -> Self {
        let mut out = Matrix::zero(field, self.rows, self.cols - 1);
        for r in 0..self.rows {
            let mut cc = 0;
            for c in 0..self.cols {
                if c == col {
                    continue;
                }
                out.set(r, cc, self.at(r, c).clone());
                cc += 1;
            }
        }
        out
    }
}

pub struct Echelon<F: Field> {
    pub mat: Matrix<F>,
    pub rank: usize,
    /// Column index of each pivot, in row order.
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form by exact Gauss-Jordan elimination.
pub fn rref<F: Field>(field: &F, mut m: Matrix<F>) -> Echelon<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !field.is_zero(m.at(i, c))) else {
            continue;
        };
        m.swap_rows(r, pr);
        let inv = field
            .inv(m.at(r, c))
            .expect("pivot is nonzero by construction");
        for cc in 0..m.cols {
            let v = field.mul(m.at(r, cc), &inv);
            m.set(r, cc, v);
        }
        for i in 0..m.rows {
            if i != r && !field.is_zero(m.at(i, c)) {
                let f = m.at(i, c).clone();
                for cc in 0..m.cols {
                    let v = field.sub(m.at(i, cc), &field.mul(&f, m.at(r, cc)));
                    m.set(i, cc, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon {
        mat: m,
        rank: r,
        pivots,
    }
}

pub fn rank<F: Field>(field: &F, m: Matrix<F>) -> usize {
    rref(field, m).rank
}

/// Basis of the right nullspace, one vector per free column; deterministic
/// because free columns are visited in increasing order.
pub fn nullspace<F: Field>(field: &F, m: Matrix<F>) -> Vec<Vec<F::Elem>> {
    let cols = m.cols;
    let ech = rref(field, m);
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (row, &c) in ech.pivots.iter().enumerate() {
            v[c] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut vec = vec![field.zero(); cols];
        vec[free] = field.one();
        for (c, p) in pivot_of_col.iter().enumerate() {
            if let Some(row) = p {
                vec[c] = field.neg(ech.mat.at(*row, free));
            }
        }
        basis.push(vec);
    }
    basis
}

/// Determinant of a square matrix by exact elimination; the product of
/// pivots with the row-swap sign.
pub fn determinant<F: Field>(field: &F, mut m: Matrix<F>) -> F::Elem {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !field.is_zero(m.at(i, c))) else {
            return field.zero();
        };
        if pr != c {
            m.swap_rows(c, pr);
            det = field.neg(&det);
        }
        let pivot = m.at(c, c).clone();
        det = field.mul(&det, &pivot);
        let inv = field.inv(&pivot).expect("nonzero pivot");
        for i in c + 1..n {
            if field.is_zero(m.at(i, c)) {
                continue;
            }
            let f = field.mul(m.at(i, c), &inv);
            for cc in c..n {
                let v = field.sub(m.at(i, cc), &field.mul(&f, m.at(c, cc)));
                m.set(i, cc, v);
            }
        }
    }
    det
}

/// Solves M x = b; requires a consistent system, errors on inconsistency.
/// Underdetermined systems return the solution with free variables zero.
pub fn solve<F: Field>(
    field: &F,
    m: Matrix<F>,
    b: &[F::Elem],
) -> Result<Vec<F::Elem>, RingError> {
    assert_eq!(m.rows, b.len());
    let cols = m.cols;
    let mut aug = Matrix::zero(field, m.rows, cols + 1);
    for r in 0..m.rows {
        for c in 0..cols {
            aug.set(r, c, m.at(r, c).clone());
        }
        aug.set(r, cols, b[r].clone());
    }
    let ech = rref(field, aug);
    // inconsistent iff a pivot lands in the rhs column
    if ech.pivots.last() == Some(&cols) {
        return Err(RingError::DivisionByZero);
    }
    let mut x = vec![field.zero(); cols];
    for (row, &c) in ech.pivots.iter().enumerate() {
        x[c] = ech.mat.at(row, cols).clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{rat, Rationals, Ring};

    fn m(rows: Vec<Vec<i64>>) -> Matrix<Rationals> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| rat(x, 1)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_nullspace() {
        let q = Rationals;
        let a = m(vec![vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(rank(&q, a.clone()), 2);
        let ns = nullspace(&q, a);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn determinant_3x3() {
        let q = Rationals;
        let a = m(vec![vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]);
        // det = 2(1*1-0*3) - 0 + 1(1*3-1*0) = 2 + 3 = 5
        assert_eq!(determinant(&q, a), rat(5, 1));
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let q = Rationals;
        let a = m(vec![vec![1, 2, 3, 0], vec![0, 1, 1, -1]]);
        for v in nullspace(&q, a.clone()) {
            let out = a.apply(&q, &v);
            assert!(out.iter().all(|x| q.is_zero(x)));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let q = Rationals;
        let a = m(vec![vec![1, 1], vec![1, -1]]);
        let x = solve(&q, a, &[rat(3, 1), rat(1, 1)]).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(1, 1)]);
        let bad = m(vec![vec![1, 1], vec![2, 2]]);
        assert!(solve(&q, bad, &[rat(0, 1), rat(1, 1)]).is_err());
    }
}
