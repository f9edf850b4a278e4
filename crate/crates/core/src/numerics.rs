//! Exact combinatorics, half-integer arithmetic and small dense symmetric
//! linear algebra.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`binom`] and [`multinom`].
pub const MAX_COMBINATORIAL_N: u32 = 64;

/// Largest matrix handled by the eigen and determinant routines.
pub const MAX_WITNESS_DIM: usize = 16;

/// An element of ½ℤ, stored as twice its value so that arithmetic and
/// class tests stay exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(k: i64) -> Self {
        HalfInt { twice: 2 * k }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub const fn is_nonnegative(self) -> bool {
        self.twice >= 0
    }

    /// The integer value, if this is a whole number.
    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub fn as_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Exact conversion from a float that is a multiple of one half.
    pub fn from_f64(x: f64) -> Option<Self> {
        let t = 2.0 * x;
        if t.is_finite() && t.fract() == 0.0 && t.abs() < 1e15 {
            Some(HalfInt { twice: t as i64 })
        } else {
            None
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + rhs.twice,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - rhs.twice,
        }
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt {
            twice: self.twice * rhs,
        }
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        iter.fold(HalfInt::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"3"`, `"3/2"` or a decimal such as `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad half-integer '{s}'")))?;
            return match den.trim() {
                "1" => Ok(HalfInt::from_int(num)),
                "2" => Ok(HalfInt::from_twice(num)),
                _ => Err(Error::domain(format!("'{s}' is not a multiple of 1/2"))),
            };
        }
        let x: f64 = s
            .parse()
            .map_err(|_| Error::domain(format!("bad half-integer '{s}'")))?;
        HalfInt::from_f64(x).ok_or_else(|| Error::domain(format!("'{s}' is not a multiple of 1/2")))
    }
}

/// Binomial coefficient `C(n, k)`, exact for `n <= 64`.
pub fn binom(n: u32, k: u32) -> Result<u128> {
    if n > MAX_COMBINATORIAL_N || k > n {
        return Err(Error::domain(format!(
            "binom({n}, {k}) requires k <= n <= {MAX_COMBINATORIAL_N}"
        )));
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n - i) / (i + 1);
    }
    Ok(acc)
}

/// Multinomial coefficient `n! / (parts[0]! ... parts[K]!)`.
pub fn multinom(n: u32, parts: &[u32]) -> Result<u128> {
    let total: u64 = parts.iter().map(|&p| p as u64).sum();
    if total != n as u64 {
        return Err(Error::domain(format!(
            "multinom: parts {parts:?} sum to {total}, expected {n}"
        )));
    }
    if n > MAX_COMBINATORIAL_N {
        return Err(Error::domain(format!(
            "multinom requires n <= {MAX_COMBINATORIAL_N}"
        )));
    }
    let mut remaining = n;
    let mut acc: u128 = 1;
    for &p in parts {
        let b = binom(remaining, p)?;
        acc = acc
            .checked_mul(b)
            .ok_or_else(|| Error::Overflow(format!("multinom({n}, {parts:?})")))?;
        remaining -= p;
    }
    Ok(acc)
}

/// Falling factorial `x (x-1) ... (x-m+1)` in floating point.
pub fn falling_factorial(x: u32, m: u32) -> f64 {
    if m > x {
        return 0.0;
    }
    (0..m).map(|i| (x - i) as f64).product()
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Dense real symmetric matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds the matrix from its upper triangle; `f(i, j)` is called once
    /// per `i <= j` and mirrored.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(dim >= 1, "SymMatrix needs dim >= 1");
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        SymMatrix { dim, data }
    }

    /// Fallible variant of [`SymMatrix::from_fn`].
    pub fn try_from_fn<E>(
        dim: usize,
        mut f: impl FnMut(usize, usize) -> std::result::Result<f64, E>,
    ) -> std::result::Result<Self, E> {
        assert!(dim >= 1, "SymMatrix needs dim >= 1");
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j)?;
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        Ok(SymMatrix { dim, data })
    }

    /// Builds from full rows; fails unless the rows are square and exactly
    /// symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::domain("matrix rows must form a non-empty square"));
        }
        for i in 0..dim {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::domain(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SymMatrix {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        SymMatrix::from_fn(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `D A D` for a diagonal `D` given by its entries.
    pub fn congruence_diag(&self, d: &[f64]) -> SymMatrix {
        assert_eq!(d.len(), self.dim);
        SymMatrix::from_fn(self.dim, |i, j| d[i] * self.get(i, j) * d[j])
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.dim)).finish()
    }
}

fn check_witness_matrix(m: &SymMatrix, what: &'static str) -> Result<()> {
    if m.dim() > MAX_WITNESS_DIM {
        return Err(Error::domain(format!(
            "{what}: dimension {} exceeds {MAX_WITNESS_DIM}",
            m.dim()
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite(what));
    }
    Ok(())
}

/// All eigenvalues, ascending, by cyclic Jacobi rotations.
pub fn eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    check_witness_matrix(m, "eigenvalues")?;
    let n = m.dim();
    let mut a = m.data.clone();
    let frob = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    if frob == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let negligible = 1e-18 * frob;

    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= negligible {
                    continue;
                }
                rotated = true;
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
        if !rotated {
            break;
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    Ok(eig)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?[0])
}

/// Determinant by LU decomposition with partial pivoting.
pub fn determinant(m: &SymMatrix) -> Result<f64> {
    check_witness_matrix(m, "determinant")?;
    Ok(det_of_block(m, m.dim()))
}

fn det_of_block(m: &SymMatrix, k: usize) -> f64 {
    let mut a: Vec<f64> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j))
        .collect();
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&x, &y| {
                a[x * k + col]
                    .abs()
                    .partial_cmp(&a[y * k + col].abs())
                    .unwrap_or(Ordering::Equal)
            })
            .unwrap();
        if a[pivot * k + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..k {
                a.swap(pivot * k + j, col * k + j);
            }
            det = -det;
        }
        let d = a[col * k + col];
        det *= d;
        for i in (col + 1)..k {
            let factor = a[i * k + col] / d;
            for j in col..k {
                a[i * k + j] -= factor * a[col * k + j];
            }
        }
    }
    det
}

/// Determinants of the leading principal blocks 1×1, 2×2, …, dim×dim.
pub fn leading_minors(m: &SymMatrix) -> Result<Vec<f64>> {
    check_witness_matrix(m, "leading_minors")?;
    Ok((1..=m.dim()).map(|k| det_of_block(m, k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_small_values() {
        assert_eq!(binom(4, 2).unwrap(), 6);
        assert_eq!(binom(5, 0).unwrap(), 1);
        assert_eq!(binom(5, 5).unwrap(), 1);
        assert_eq!(binom(64, 1).unwrap(), 64);
    }

    #[test]
    fn binom_rejects_out_of_range() {
        assert!(binom(3, 4).is_err());
        assert!(binom(65, 1).is_err());
    }

    #[test]
    fn multinom_values() {
        assert_eq!(multinom(4, &[4, 0, 0]).unwrap(), 1);
        assert_eq!(multinom(4, &[2, 1, 1]).unwrap(), 12);
        assert_eq!(multinom(4, &[1, 1, 2]).unwrap(), 12);
        assert!(matches!(multinom(4, &[1, 1, 1]), Err(Error::Domain(_))));
    }

    #[test]
    fn multinom_overflow_is_reported() {
        let parts = vec![1u32; 64];
        assert!(matches!(multinom(64, &parts), Err(Error::Overflow(_))));
    }

    #[test]
    fn halfint_basics() {
        let a: HalfInt = "3/2".parse().unwrap();
        let b: HalfInt = "0.5".parse().unwrap();
        assert!(!a.is_integer());
        assert_eq!((a + b).to_integer(), Some(2));
        assert_eq!(a.to_string(), "3/2");
        assert_eq!(HalfInt::from_int(2).to_string(), "2");
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
    }

    #[test]
    fn eigen_trivial_cases() {
        assert_eq!(min_eigenvalue(&SymMatrix::identity(3)).unwrap(), 1.0);
        let ones = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(min_eigenvalue(&ones).unwrap().abs() < 1e-15);
    }

    #[test]
    fn eigen_rejects_non_finite() {
        let m = SymMatrix::diagonal(&[1.0, f64::NAN]);
        assert!(matches!(min_eigenvalue(&m), Err(Error::NonFinite(_))));
    }

    #[test]
    fn minors_examples() {
        assert_eq!(leading_minors(&SymMatrix::identity(3)).unwrap(), vec![1.0, 1.0, 1.0]);
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let minors = leading_minors(&m).unwrap();
        assert_eq!(minors[0], 2.0);
        assert!((minors[1] - 3.0).abs() < 1e-15);
        let d = SymMatrix::diagonal(&[1.0, -1.0]);
        assert_eq!(leading_minors(&d).unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn from_rows_rejects_asymmetric() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).is_err());
    }
}
