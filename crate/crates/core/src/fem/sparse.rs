//! Compressed sparse row storage with deterministic assembly.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::io::Write;
use std::ops::{AddAssign, Mul};

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;

pub trait Entry:
    nalgebra::Scalar + Copy + Zero + AddAssign + Mul<Output = Self> + Debug + Send + Sync
{
}

impl Entry for f64 {}
impl Entry for Complex64 {}

/// Accumulates `(i, j, v)` contributions in call order.
#[derive(Clone, Debug)]
pub struct TripletBuilder<T> {
    n: usize,
    rows: Vec<BTreeMap<usize, T>>,
}

impl<T: Entry> TripletBuilder<T> {
    pub fn new(n: usize) -> Self {
        TripletBuilder {
            n,
            rows: vec![BTreeMap::new(); n],
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        *self.rows[i].entry(j).or_insert_with(T::zero) += v;
    }

    pub fn build(self) -> Csr<T> {
        let mut row_ptr = Vec::with_capacity(self.n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in self.rows {
            for (j, v) in row {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Csr {
            n: self.n,
            row_ptr,
            cols,
            vals,
        }
    }
}

/// Square sparse matrix in CSR form with sorted column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Csr<T> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Entry> Csr<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .copied()
            .zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => T::zero(),
        }
    }

    /// Stored entries as `(i, j, v)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = T::zero();
                for (j, v) in self.row(i) {
                    acc += v * x[j];
                }
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut d = DMatrix::from_element(self.n, self.n, T::zero());
        for (i, j, v) in self.triplets() {
            d[(i, j)] = v;
        }
        d
    }

    /// Whether `self[i,j] == self[j,i]` bit for bit.
    pub fn is_symmetric(&self) -> bool {
        self.triplets().all(|(i, j, v)| self.get(j, i) == v)
    }

    pub fn map<U: Entry>(&self, f: impl Fn(T) -> U) -> Csr<U> {
        Csr {
            n: self.n,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl Csr<f64> {
    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Writes the matrix in Matrix Market coordinate format.
    pub fn write_matrix_market(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(out, "{} {} {}", self.n, self.n, self.nnz())?;
        for (i, j, v) in self.triplets() {
            writeln!(out, "{} {} {:e}", i + 1, j + 1, v)?;
        }
        Ok(())
    }
}

impl Csr<Complex64> {
    pub fn write_matrix_market(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "%%MatrixMarket matrix coordinate complex general")?;
        writeln!(out, "{} {} {}", self.n, self.n, self.nnz())?;
        for (i, j, v) in self.triplets() {
            writeln!(out, "{} {} {:e} {:e}", i + 1, j + 1, v.re, v.im)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulates_and_queries() {
        let mut b = TripletBuilder::new(3);
        b.add(0, 0, 1.0);
        b.add(2, 1, 2.0);
        b.add(0, 0, 0.5);
        b.add(1, 2, 2.0);
        let m = b.build();
        assert_eq!(m.get(0, 0), 1.5);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]), vec![1.5, 2.0, 2.0]);
        assert!(m.is_symmetric());
        let mut out = Vec::new();
        m.write_matrix_market(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(
            text.starts_with("%%MatrixMarket matrix coordinate real general\n3 3 3\n1 1 1.5e0\n")
        );
    }
}
