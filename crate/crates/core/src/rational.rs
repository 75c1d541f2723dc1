//! Exact big-rational matrices and univariate polynomials.
//!
//! Everything here is exact; floating point enters only through the
//! explicit `to_f64` conversions.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::DMatrix;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::{BigInt, BigRational};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// `self − λ·other`
    pub fn sub_scaled(&self, lambda: &Rational, other: &RationalMatrix) -> Self {
        assert_eq!(self.dims(), other.dims());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - lambda * b)
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Exact determinant by Gaussian elimination.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] / &p;
                for j in col..n {
                    let v = &f * &a[col * n + j];
                    a[r * n + j] -= v;
                }
            }
        }
        det
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(self.get(i, j)))
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Univariate polynomial with exact rational coefficients, ascending
/// degree, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Unique polynomial of degree `< xs.len()` through the points.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let mut out = Self::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::constant(Rational::one());
            let mut denom = Rational::one();
            for (j, xj) in xs.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&Self::new(vec![-xj.clone(), Rational::one()]));
                denom *= xi - xj;
            }
            out = out.add(&basis.scale(&(yi / denom)));
        }
        out
    }

    /// Sturm sequence `p, p', −rem(p, p'), …`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()));
        }
        seq.retain(|p| !p.is_zero());
        seq
    }

    /// Number of distinct real roots in `(a, b]`; `b = None` means `+∞`.
    pub fn count_roots(&self, a: &Rational, b: Option<&Rational>) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let seq = self.sturm_sequence();
        let va = variations(seq.iter().map(|p| p.eval(a).cmp(&Rational::zero())));
        let vb = match b {
            Some(b) => variations(seq.iter().map(|p| p.eval(b).cmp(&Rational::zero()))),
            None => variations(
                seq.iter()
                    .map(|p| p.leading().unwrap().cmp(&Rational::zero())),
            ),
        };
        va.saturating_sub(vb)
    }

    /// Number of distinct positive real roots.
    pub fn count_positive_roots(&self) -> usize {
        self.count_roots(&Rational::zero(), None)
    }

    /// Whether every coefficient is strictly positive (or every one
    /// strictly negative).
    pub fn coefficients_have_constant_sign(&self) -> bool {
        !self.coeffs.is_empty()
            && (self.coeffs.iter().all(Signed::is_positive)
                || self.coeffs.iter().all(Signed::is_negative))
    }
}

fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl fmt::Display for RationalPoly {
    /// Ascending powers of `λ`, e.g. `-16/3 - 16/9*λ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*λ")?,
                _ => write!(f, "{mag}*λ^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn determinant_small() {
        let m = RationalMatrix::from_rows(vec![vec![int(0), int(2)], vec![int(3), int(4)]]);
        assert_eq!(m.determinant(), int(-6));
        let s = RationalMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
        assert_eq!(s.determinant(), int(0));
    }

    #[test]
    fn division_and_interpolation() {
        let p = RationalPoly::from_ints(&[-1, 0, 1]); // λ² − 1
        let d = RationalPoly::from_ints(&[1, 1]);
        let (q, r) = p.div_rem(&d);
        assert_eq!(q, RationalPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let xs: Vec<_> = (0..3).map(int).collect();
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(RationalPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn sturm_counts() {
        // (λ − 1)(λ − 2)(λ + 3)
        let p = RationalPoly::from_ints(&[-1, 1])
            .mul(&RationalPoly::from_ints(&[-2, 1]))
            .mul(&RationalPoly::from_ints(&[3, 1]));
        assert_eq!(p.count_positive_roots(), 2);
        assert_eq!(p.count_roots(&int(-10), None), 3);
        assert_eq!(p.count_roots(&int(0), Some(&rat(3, 2))), 1);
        // repeated root counted once
        assert_eq!(p.mul(&p).count_positive_roots(), 2);
        assert_eq!(
            RationalPoly::from_ints(&[1, 0, 1]).count_roots(&int(-5), None),
            0
        );
    }

    #[test]
    fn display() {
        let p = RationalPoly::new(vec![rat(-16, 3), rat(-16, 9)]);
        assert_eq!(p.to_string(), "-16/3 - 16/9*λ");
        assert_eq!(RationalPoly::from_ints(&[0, 0, 2]).to_string(), "2*λ^2");
    }

    proptest! {
        #[test]
        fn div_rem_reconstructs(a in prop::collection::vec(-20i64..20, 1..7), b in prop::collection::vec(-20i64..20, 1..4)) {
            let p = RationalPoly::from_ints(&a);
            let d = RationalPoly::from_ints(&b);
            prop_assume!(!d.is_zero());
            let (q, r) = p.div_rem(&d);
            prop_assert_eq!(q.mul(&d).add(&r), p);
            prop_assert!(r.degree().is_none_or(|dr| dr < d.degree().unwrap()));
        }
    }
}
