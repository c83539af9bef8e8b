//! Exact dense linear algebra: rational matrices with Gaussian
//! elimination for rank and nullspace, and integer matrices with a
//! Smith-style reduction. No floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix dimensions do not compose");
        RatMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rat::zero();
            for k in 0..self.cols {
                if !self.get(i, k).is_zero() && !other.get(k, j).is_zero() {
                    acc += self.get(i, k) * other.get(k, j);
                }
            }
            acc
        })
    }

    /// The matrix `[self | other]` with the same row count.
    pub fn hstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, other.rows, "row counts differ");
        RatMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Reduced row echelon form together with the pivot columns.
    fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let a = m.get(row, j).clone();
                let b = m.get(p, j).clone();
                m.set(row, j, b);
                m.set(p, j, a);
            }
            let inv = m.get(row, col).recip();
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = m.get(i, j) - m.get(row, j) * &factor;
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right nullspace, one vector of length `cols` per
    /// free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Clears denominators row by row; the integer matrix has the same
    /// rank.
    pub fn clear_denominators(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            let mut scale = BigInt::one();
            for j in 0..self.cols {
                scale = lcm(&scale, self.get(i, j).denom());
            }
            for j in 0..self.cols {
                let e = self.get(i, j);
                data.push(e.numer() * (&scale / e.denom()));
            }
        }
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

/// Row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

fn gcd(a: BigInt, b: BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / gcd(a.clone(), b.clone())
}

impl IntMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    /// The invariant factors: the nonzero diagonal of the Smith normal
    /// form, each dividing the next.
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let (r, c) = (self.rows, self.cols);
        let mut diag = Vec::new();
        let mut t = 0;
        while t < r && t < c {
            // Smallest nonzero entry of the trailing submatrix becomes
            // the pivot; truncated division leaves remainders smaller
            // than it, so the cleaning loop terminates.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    if best
                        .map(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                        .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            loop {
                let mut clean = true;
                for i in t + 1..r {
                    if m[i][t].is_zero() {
                        continue;
                    }
                    let q = &m[i][t] / &m[t][t];
                    if !q.is_zero() {
                        for j in t..c {
                            let v = &m[t][j] * &q;
                            m[i][j] -= v;
                        }
                    }
                    if !m[i][t].is_zero() {
                        m.swap(t, i);
                        clean = false;
                    }
                }
                for j in t + 1..c {
                    if m[t][j].is_zero() {
                        continue;
                    }
                    let q = &m[t][j] / &m[t][t];
                    if !q.is_zero() {
                        for i in t..r {
                            let v = &m[i][t] * &q;
                            m[i][j] -= v;
                        }
                    }
                    if !m[t][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            diag.push(m[t][t].abs());
            t += 1;
        }
        // Repair the divisibility chain: diag(a, b) is equivalent to
        // diag(gcd, lcm).
        loop {
            let mut settled = true;
            for i in 1..diag.len() {
                if (&diag[i] % &diag[i - 1]).is_zero() {
                    continue;
                }
                let g = gcd(diag[i - 1].clone(), diag[i].clone());
                let l = (&diag[i - 1] * &diag[i]) / &g;
                diag[i - 1] = g;
                diag[i] = l;
                settled = false;
            }
            if settled {
                break;
            }
        }
        diag
    }

    pub fn rank(&self) -> usize {
        self.smith_invariants().len()
    }
}
