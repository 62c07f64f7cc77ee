//! Dense linear algebra over F_p.

use serde::{Deserialize, Serialize};

use crate::field;

/// A linear map F_p^cols -> F_p^rows stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

pub type FpLinearMap = FpMatrix;

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1 % p);
        }
        m
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>], cols: usize) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    /// Matrix whose j-th column is `cols[j]`.
    pub fn from_columns(p: u32, columns: &[Vec<u32>], rows: usize) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn compose(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = FpMatrix::zeros(self.p, self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let c = self.apply(&rhs.column(j));
            for (i, v) in c.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.p, self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i).to_vec());
        }
        e.rank()
    }

    /// Basis of the null space {x : Mx = 0}.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let (rref, pivots) = self.rref();
        let p = self.p;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field::neg(rref.get(r, free), p);
            }
            basis.push(v);
        }
        basis
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = field::inv(m.get(r, c), p);
            for j in 0..m.cols {
                let v = field::mul(m.get(r, j), inv, p);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let f = m.get(i, c);
                if i != r && f != 0 {
                    for j in 0..m.cols {
                        let v = field::sub(m.get(i, j), field::mul(f, m.get(r, j), p), p);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

/// Solve `m x = rhs`. Free variables are set to zero, so the answer is
/// deterministic for a fixed matrix.
pub fn solve_linear(m: &FpMatrix, rhs: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(rhs.len(), m.rows);
    let p = m.p;
    let mut aug = FpMatrix::zeros(p, m.rows, m.cols + 1);
    for (i, &r) in rhs.iter().enumerate() {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, m.cols, r % p);
    }
    let (rref, pivots) = aug.rref();
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![0; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rref.get(r, m.cols);
    }
    debug_assert_eq!(m.apply(&x), rhs.iter().map(|v| v % p).collect::<Vec<_>>());
    Some(x)
}

/// Incrementally built row-echelon basis of a subspace of F_p^dim.
///
/// Every stored row remembers how it was obtained from the inserted
/// vectors, so membership queries can return an explicit combination.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<u32>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(p: u32, dim: usize) -> Self {
        Self {
            p,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the stored rows. Returns the remainder and the
    /// combination (over inserted vectors) that was subtracted.
    pub fn reduce_with_combo(&self, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let p = self.p;
        let mut r: Vec<u32> = v.iter().map(|x| x % p).collect();
        let mut combo = vec![0; self.inserted];
        for (row, (&pc, c)) in self.rows.iter().zip(self.pivots.iter().zip(&self.combos)) {
            let f = r[pc];
            if f != 0 {
                for (a, &b) in r.iter_mut().zip(row) {
                    *a = field::sub(*a, field::mul(f, b, p), p);
                }
                for (a, &b) in combo.iter_mut().zip(c) {
                    *a = field::add(*a, field::mul(f, b, p), p);
                }
            }
        }
        (r, combo)
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut r: Vec<u32> = v.iter().map(|x| x % p).collect();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = r[pc];
            if f != 0 {
                for (a, &b) in r.iter_mut().zip(row) {
                    *a = field::sub(*a, field::mul(f, b, p), p);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coefficients c with sum c_i * inserted_i = v, if v lies in the span.
    pub fn express(&self, v: &[u32]) -> Option<Vec<u32>> {
        let (r, combo) = self.reduce_with_combo(v);
        r.iter().all(|&x| x == 0).then_some(combo)
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.dim);
        let p = self.p;
        let idx = self.inserted;
        self.inserted += 1;
        for c in &mut self.combos {
            c.push(0);
        }
        let (mut r, combo) = self.reduce_with_combo(&v);
        // combo expresses the subtracted part; the new row is v - combo.
        let mut own: Vec<u32> = combo.iter().map(|&x| field::neg(x, p)).collect();
        own[idx] = 1;
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = field::inv(r[pc], p);
        for a in r.iter_mut() {
            *a = field::mul(*a, inv, p);
        }
        for a in own.iter_mut() {
            *a = field::mul(*a, inv, p);
        }
        // keep rows fully reduced on pivot columns
        for (row, c) in self.rows.iter_mut().zip(self.combos.iter_mut()) {
            let f = row[pc];
            if f != 0 {
                for (a, &b) in row.iter_mut().zip(&r) {
                    *a = field::sub(*a, field::mul(f, b, p), p);
                }
                for (a, &b) in c.iter_mut().zip(&own) {
                    *a = field::sub(*a, field::mul(f, b, p), p);
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(pc);
        self.combos.push(own);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_solves_to_rhs() {
        let m = FpMatrix::identity(7, 4);
        assert_eq!(solve_linear(&m, &[1, 2, 3, 6]), Some(vec![1, 2, 3, 6]));
    }

    #[test]
    fn zero_map_inconsistent() {
        let m = FpMatrix::zeros(5, 3, 3);
        assert_eq!(solve_linear(&m, &[0, 1, 0]), None);
        assert_eq!(solve_linear(&m, &[0, 0, 0]), Some(vec![0, 0, 0]));
    }

    #[test]
    fn random_rank_seven_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = 5;
        // product of 10x7 and 7x10 random matrices, rank 7 with high probability
        let mut rank = 0;
        let mut m = FpMatrix::zeros(p, 10, 10);
        while rank != 7 {
            let a: Vec<Vec<u32>> = (0..10).map(|_| (0..7).map(|_| rng.gen_range(0..p)).collect()).collect();
            let b: Vec<Vec<u32>> = (0..7).map(|_| (0..10).map(|_| rng.gen_range(0..p)).collect()).collect();
            let a = FpMatrix::from_rows(p, &a, 7);
            let b = FpMatrix::from_rows(p, &b, 10);
            m = a.compose(&b);
            rank = m.rank();
        }
        let x0: Vec<u32> = (0..10).map(|_| rng.gen_range(0..p)).collect();
        let rhs = m.apply(&x0);
        let x = solve_linear(&m, &rhs).expect("consistent by construction");
        assert_eq!(m.apply(&x), rhs);
        assert_eq!(m.kernel().len(), 3);
        for k in m.kernel() {
            assert!(m.apply(&k).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn echelon_expresses_combinations() {
        let p = 3;
        let mut e = Echelon::new(p, 4);
        let vs = [vec![1, 2, 0, 1], vec![0, 1, 1, 0], vec![1, 1, 2, 1]];
        for v in &vs {
            e.insert(v.clone());
        }
        assert_eq!(e.rank(), 2);
        let target = vec![2, 2, 1, 2];
        let c = e.express(&target).expect("in span");
        let mut sum = vec![0; 4];
        for (ci, v) in c.iter().zip(&vs) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s = field::add(*s, field::mul(*ci, *x, p), p);
            }
        }
        assert_eq!(sum, target);
        assert!(e.express(&[0, 0, 0, 1]).is_none());
    }
}
