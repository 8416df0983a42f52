//! Exact linear algebra over the rationals via fraction-free (Bareiss) elimination.
//!
//! Pivots are chosen column by column; within a column the entry of smallest
//! absolute value is used, ties broken by the lowest row index, so every solve
//! is reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense rational matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix from column vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &x[j])
            })
            .collect()
    }

    pub fn to_csv(&self, row_labels: &[String], col_labels: &[String]) -> String {
        let mut s = String::from("row");
        for c in col_labels {
            s.push(',');
            s.push_str(c);
        }
        s.push('\n');
        for i in 0..self.rows {
            s.push_str(&row_labels[i]);
            for j in 0..self.cols {
                s.push(',');
                s.push_str(&crate::rational::format_rational(self.get(i, j)));
            }
            s.push('\n');
        }
        s
    }
}

/// Row-echelon form over the integers produced by Bareiss elimination.
struct Echelon {
    /// Integer rows (augmented by one right-hand-side column when solving).
    rows: Vec<Vec<BigInt>>,
    /// `(row, column)` of every pivot, in order.
    pivots: Vec<(usize, usize)>,
    /// Number of row transpositions performed.
    swaps: usize,
}

/// Scales a rational row to integers by the lcm of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
}

fn bareiss(mut rows: Vec<Vec<BigInt>>, pivot_cols: usize) -> Echelon {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut swaps = 0;
    for c in 0..pivot_cols {
        if r == nrows {
            break;
        }
        let best = (r..nrows)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()).then(a.cmp(&b)));
        let Some(p) = best else { continue };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let width = rows[r].len();
        for i in (r + 1)..nrows {
            let factor = rows[i][c].clone();
            for jj in (c + 1)..width {
                let v = (&rows[r][c] * &rows[i][jj] - &factor * &rows[r][jj]) / &prev;
                rows[i][jj] = v;
            }
            rows[i][c] = BigInt::zero();
        }
        // Rows above the current pivot row keep their entries; only rows below
        // are eliminated, so exact division by the previous pivot is valid.
        prev = rows[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    Echelon { rows, pivots, swaps }
}

/// Rank of a rational matrix.
pub fn rank(m: &Matrix) -> usize {
    let rows: Vec<Vec<BigInt>> =
        (0..m.rows).map(|i| integer_row(&m.data[i * m.cols..(i + 1) * m.cols])).collect();
    bareiss(rows, m.cols).pivots.len()
}

/// Determinant of a square rational matrix.
pub fn determinant(m: &Matrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::Domain(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    if m.rows == 0 {
        return Ok(Rational::one());
    }
    let mut scale = Rational::one();
    let rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let row = &m.data[i * m.cols..(i + 1) * m.cols];
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale /= Rational::from_integer(l.clone());
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    let e = bareiss(rows, m.cols);
    if e.pivots.len() < m.rows {
        return Ok(Rational::zero());
    }
    let last = e.rows[m.rows - 1][m.cols - 1].clone();
    let sign = if e.swaps % 2 == 0 { Rational::one() } else { -Rational::one() };
    Ok(sign * Rational::from_integer(last) * scale)
}

/// Result of an exact solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub x: Vec<Rational>,
    /// Columns without a pivot; their unknowns are set to zero.
    pub free_columns: Vec<usize>,
    pub rank: usize,
}

/// Solves `A x = b` exactly. Free unknowns are pinned to zero; an inconsistent
/// system yields a degeneracy error.
pub fn solve(a: &Matrix, b: &[Rational]) -> Result<Solution> {
    if b.len() != a.rows {
        return Err(Error::Domain(format!(
            "right-hand side has {} entries for {} rows",
            b.len(),
            a.rows
        )));
    }
    let rows: Vec<Vec<BigInt>> = (0..a.rows)
        .map(|i| {
            let mut row = a.data[i * a.cols..(i + 1) * a.cols].to_vec();
            row.push(b[i].clone());
            integer_row(&row)
        })
        .collect();
    let e = bareiss(rows, a.cols);
    let rank = e.pivots.len();
    for row in e.rows.iter().skip(rank) {
        if !row[a.cols].is_zero() {
            return Err(Error::Degeneracy("linear system is inconsistent".into()));
        }
    }
    let mut x = vec![Rational::zero(); a.cols];
    for &(r, c) in e.pivots.iter().rev() {
        let row = &e.rows[r];
        let mut acc = Rational::from_integer(row[a.cols].clone());
        for (jj, v) in row.iter().enumerate().take(a.cols).skip(c + 1) {
            if !v.is_zero() && !x[jj].is_zero() {
                acc -= Rational::from_integer(v.clone()) * &x[jj];
            }
        }
        x[c] = acc / Rational::from_integer(row[c].clone());
    }
    let pivot_cols: Vec<usize> = e.pivots.iter().map(|&(_, c)| c).collect();
    let free_columns = (0..a.cols).filter(|c| !pivot_cols.contains(c)).collect();
    Ok(Solution { x, free_columns, rank })
}

/// Dense determinant by cofactor expansion; a slow, independent check for
/// small matrices.
pub fn determinant_cofactor(m: &Matrix) -> Rational {
    fn rec(m: &Matrix, rows: &[usize], cols: &[usize]) -> Rational {
        if rows.is_empty() {
            return Rational::one();
        }
        let r = rows[0];
        let mut acc = Rational::zero();
        for (idx, &c) in cols.iter().enumerate() {
            let v = m.get(r, c);
            if v.is_zero() {
                continue;
            }
            let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = v * rec(m, &rows[1..], &sub);
            if idx % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    let rows: Vec<usize> = (0..m.rows).collect();
    let cols: Vec<usize> = (0..m.cols).collect();
    rec(m, &rows, &cols)
}
