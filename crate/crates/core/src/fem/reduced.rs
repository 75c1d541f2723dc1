use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational, RationalMatrix};

/// Exact polynomial in `x, y` keyed by exponent pair.
#[derive(Clone, Debug, Default)]
struct Poly2(BTreeMap<(u32, u32), Rational>);

impl Poly2 {
    fn from_terms(terms: &[(i64, u32, u32)]) -> Self {
        let mut out = Poly2::default();
        for &(c, i, j) in terms {
            out.add_term((i, j), int(c));
        }
        out
    }

    fn add_term(&mut self, key: (u32, u32), c: Rational) {
        let slot = self.0.entry(key).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&key);
        }
    }

    fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::default();
        for (&(a, b), c) in &self.0 {
            for (&(d, e), f) in &other.0 {
                out.add_term((a + d, b + e), c * f);
            }
        }
        out
    }

    fn dx(&self) -> Poly2 {
        let mut out = Poly2::default();
        for (&(i, j), c) in &self.0 {
            if i > 0 {
                out.add_term((i - 1, j), c * int(i as i64));
            }
        }
        out
    }

    fn dy(&self) -> Poly2 {
        let mut out = Poly2::default();
        for (&(i, j), c) in &self.0 {
            if j > 0 {
                out.add_term((i, j - 1), c * int(j as i64));
            }
        }
        out
    }

    /// Integral over `[-1, 1]²`.
    fn integrate(&self) -> Rational {
        let one_d = |a: u32| {
            if a.is_multiple_of(2) {
                Rational::new(2.into(), (a as i64 + 1).into())
            } else {
                Rational::zero()
            }
        };
        self.0
            .iter()
            .map(|(&(i, j), c)| c * one_d(i) * one_d(j))
            .fold(Rational::zero(), |s, t| s + t)
    }
}

/// Exact `S` and `Mr` of the reduced local equation on `[-1, 1]²`.
///
/// With `b_i = (1+x)(1+y)`, `b_o = (1−x)(1−y)` and monomials `xⁱyʲ`
/// (`0 ≤ i, j < p`, index `i·p + j`):
/// `S[r][c] = ∫ ∇(b_i m_r)·∇(b_o m_c)` and `Mr[r][c] = ∫ b_i m_r · b_o m_c`.
pub fn reduced_quad_local_matrices(p: usize) -> Result<(RationalMatrix, RationalMatrix)> {
    if !(1..=4).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "reduced matrices need p in 1..=4, got {p}"
        )));
    }
    let bi = Poly2::from_terms(&[(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)]);
    let bo = Poly2::from_terms(&[(1, 0, 0), (-1, 1, 0), (-1, 0, 1), (1, 1, 1)]);
    let monos: Vec<Poly2> = (0..p as u32)
        .flat_map(|i| (0..p as u32).map(move |j| (i, j)))
        .map(|key| {
            let mut m = Poly2::default();
            m.add_term(key, Rational::one());
            m
        })
        .collect();
    let inner: Vec<Poly2> = monos.iter().map(|m| bi.mul(m)).collect();
    let outer: Vec<Poly2> = monos.iter().map(|m| bo.mul(m)).collect();
    let n = p * p;
    let mut s = RationalMatrix::zeros(n, n);
    let mut mr = RationalMatrix::zeros(n, n);
    for r in 0..n {
        let (ux, uy) = (inner[r].dx(), inner[r].dy());
        for c in 0..n {
            let grad = ux.mul(&outer[c].dx());
            let mut grad = grad;
            for (&key, v) in &uy.mul(&outer[c].dy()).0 {
                grad.add_term(key, v.clone());
            }
            s.set(r, c, grad.integrate());
            mr.set(r, c, inner[r].mul(&outer[c]).integrate());
        }
    }
    Ok((s, mr))
}
