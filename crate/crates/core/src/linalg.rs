//! Exact rational linear algebra.
//!
//! Dense row-major matrices over arbitrary-precision fractions. Elimination
//! pivots on the first nonzero entry in column order, so the reduced row
//! echelon form and everything built from it (kernel bases, particular
//! solutions) is canonical.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular (rank {rank} < {size})")]
    Singular { rank: usize, size: usize },
    #[error("system is infeasible")]
    Infeasible,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or `p`. The result is normalized; zero denominators and
/// anything else are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, LinalgError> {
    let bad = || LinalgError::BadRational(text.to_owned());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows. All rows must have the same length; an empty
    /// row list gives a 0x`cols` matrix.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::ShapeMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_rows(data, cols).expect("rectangular literal")
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

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Submatrix keeping the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::ShapeMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// `row[target] -= factor * row[source]`, touching only nonzero entries of
    /// the source row from column `from` on.
    fn eliminate(&mut self, target: usize, source: usize, factor: &Rational, from: usize) {
        let cols = self.cols;
        for c in from..cols {
            let s = &self.data[source * cols + c];
            if s.is_zero() {
                continue;
            }
            let delta = factor * s;
            self.data[target * cols + c] -= delta;
        }
    }

    fn scale_row(&mut self, r: usize, factor: &Rational, from: usize) {
        for c in from..self.cols {
            let v = &mut self.data[r * self.cols + c];
            if !v.is_zero() {
                *v *= factor;
            }
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(format_rational).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. `limit` bounds the columns eligible as pivots
/// (used for augmented systems).
fn gauss_jordan(mut m: Matrix, limit: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..limit {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = m.get(row, col).recip();
        m.scale_row(row, &inv, col);
        for r in 0..m.rows {
            if r != row && !m.get(r, col).is_zero() {
                let factor = m.get(r, col).clone();
                m.eliminate(r, row, &factor, col);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref {
        rank: pivots.len(),
        reduced: m,
        pivots,
    }
}

pub fn rref(m: &Matrix) -> Rref {
    gauss_jordan(m.clone(), m.cols)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank
}

/// Basis of `{v : Mv = 0}`: one vector per free column, with that column set
/// to one, the other free columns to zero, and pivot columns read off the
/// reduced form.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Rational>> {
    let Rref {
        reduced, pivots, ..
    } = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); m.cols];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(r, free).clone();
            }
            v
        })
        .collect()
}

/// One exact solution of `Mv = b`, with every free variable set to zero.
pub fn solve(m: &Matrix, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::ShapeMismatch {
            expected: m.rows,
            found: b.len(),
        });
    }
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for (r, rhs) in b.iter().enumerate() {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols, rhs.clone());
    }
    let Rref {
        reduced,
        rank,
        pivots,
    } = gauss_jordan(aug, m.cols);
    if (rank..m.rows).any(|r| !reduced.get(r, m.cols).is_zero()) {
        return Err(LinalgError::Infeasible);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = reduced.get(r, m.cols).clone();
    }
    Ok(x)
}

/// Exact inverse. The product with the input is checked against the
/// identity on both sides before returning.
pub fn invert(m: &Matrix) -> Result<Matrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut aug = Matrix::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, n + r, Rational::one());
    }
    let Rref { reduced, rank, .. } = gauss_jordan(aug, n);
    if rank < n {
        return Err(LinalgError::Singular { rank, size: n });
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    let rows: Vec<usize> = (0..n).collect();
    let inv = reduced.select(&rows, &cols);
    let left = m.mul(&inv)?;
    let right = inv.mul(m)?;
    assert!(
        left.is_identity() && right.is_identity(),
        "exact inverse failed its identity check"
    );
    Ok(inv)
}

/// Per-row sum of absolute values.
pub fn abs_row_sums(m: &Matrix) -> Vec<Rational> {
    (0..m.rows)
        .map(|r| m.row(r).iter().map(|v| v.abs()).sum())
        .collect()
}

/// Per-row signed sum.
pub fn row_sums(m: &Matrix) -> Vec<Rational> {
    (0..m.rows).map(|r| m.row(r).iter().sum()).collect()
}

/// Scales a nonzero vector to the primitive integer vector on the same ray
/// whose first nonzero entry is positive.
pub fn primitive_integer(v: &[Rational]) -> Vec<Rational> {
    let lcm = v
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = scaled
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    let sign = if scaled.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    scaled
        .into_iter()
        .map(|x| Rational::from_integer(x / &gcd * &sign))
        .collect()
}
