//! Small dense square matrices over `F_q`.

use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;

use crate::fields::{BaseField, Field, FieldError, FqElem};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    n: usize,
    data: Vec<FqElem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.n).map(|i| &self.data[i * self.n..(i + 1) * self.n]))
            .finish()
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = FqElem;
    fn index(&self, (i, j): (usize, usize)) -> &FqElem {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FqElem {
        &mut self.data[i * self.n + j]
    }
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        Mat {
            n,
            data: vec![FqElem::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m[(i, i)] = FqElem::ONE;
        }
        m
    }

    /// Panics unless all rows have length `rows.len()`.
    pub fn from_rows<R: AsRef<[FqElem]>>(rows: &[R]) -> Mat {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.as_ref().len(), n, "matrix must be square");
            data.extend_from_slice(r.as_ref());
        }
        Mat { n, data }
    }

    pub fn from_cols<C: AsRef<[FqElem]>>(cols: &[C]) -> Mat {
        Mat::from_rows(cols).transpose()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[FqElem] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn col(&self, j: usize) -> Vec<FqElem> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, col: &[FqElem]) {
        assert_eq!(col.len(), self.n);
        for (i, &v) in col.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, k: &BaseField, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n);
        let mut out = Mat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = FqElem::ZERO;
                for l in 0..self.n {
                    acc += k.mul(self[(i, l)], rhs[(l, j)]);
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, k: &BaseField, v: &[FqElem]) -> Vec<FqElem> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(FqElem::ZERO, |acc, (&a, &b)| acc + k.mul(a, b))
            })
            .collect()
    }

    /// Block-diagonal sum of square blocks.
    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Mat::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m[(off + i, off + j)] = b[(i, j)];
                }
            }
            off += b.n;
        }
        m
    }

    pub fn scalar(n: usize, s: FqElem) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m[(i, i)] = s;
        }
        m
    }

    pub fn det(&self, k: &BaseField) -> FqElem {
        let n = self.n;
        let mut a = self.clone();
        let mut det = FqElem::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return FqElem::ZERO;
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a[(c, c)];
            det = k.mul(det, piv);
            let pinv = k.inv(piv).expect("nonzero pivot");
            for r in c + 1..n {
                let f = k.mul(a[(r, c)], pinv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = k.mul(f, a[(c, j)]);
                    a[(r, j)] += t;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self, k: &BaseField) -> bool {
        !self.det(k).is_zero()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self, k: &BaseField) -> Result<Mat, FieldError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[(r, c)].is_zero())
                .ok_or(FieldError::SingularMatrix)?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let pinv = k.inv(a[(c, c)])?;
            for j in 0..n {
                a[(c, j)] = k.mul(a[(c, j)], pinv);
                inv[(c, j)] = k.mul(inv[(c, j)], pinv);
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)];
                for j in 0..n {
                    let t = k.mul(f, a[(c, j)]);
                    a[(r, j)] += t;
                    let t = k.mul(f, inv[(c, j)]);
                    inv[(r, j)] += t;
                }
            }
        }
        Ok(inv)
    }

    pub fn random<R: Rng + ?Sized>(k: &BaseField, n: usize, rng: &mut R) -> Mat {
        Mat {
            n,
            data: (0..n * n).map(|_| k.random(rng)).collect(),
        }
    }

    /// Rejection-samples until the draw is invertible.
    pub fn random_invertible<R: Rng + ?Sized>(k: &BaseField, n: usize, rng: &mut R) -> Mat {
        loop {
            let m = Mat::random(k, n, rng);
            if m.is_invertible(k) {
                return m;
            }
        }
    }
}
