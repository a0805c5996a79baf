//! Exact linear algebra over the fraction field of the expression ring.
//!
//! Inputs are first brought to ring entries by scaling each row with the
//! product of its denominators; elimination then never divides. The only
//! divisions happen when a result is read off, and the divisors are reported
//! as pivot denominators.

use thiserror::Error;

use crate::symexpr::{Coefficient, Fraction, ScalarExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular: no nonzero pivot in column {column}")]
    Singular { column: usize },
    #[error("matrix is not square")]
    NotSquare,
}

/// Result of inverting a matrix.
#[derive(Clone, Debug)]
pub struct Inverse {
    pub entries: Vec<Vec<Fraction>>,
    /// Distinct non-constant denominators of the reduced entries; the inverse
    /// is valid off their zero locus.
    pub pivot_denominators: Vec<ScalarExpr>,
}

type Rows = Vec<Vec<ScalarExpr>>;

/// Row `i` scaled by the product of its denominators, plus the scale factor.
fn clear_row(row: &[Fraction]) -> (Vec<ScalarExpr>, ScalarExpr) {
    let dens: Vec<&ScalarExpr> = row.iter().map(|f| f.denom()).collect();
    let scale = dens.iter().fold(ScalarExpr::one(), |acc, d| acc.mul_ref(d));
    let out = row
        .iter()
        .enumerate()
        .map(|(j, f)| {
            dens.iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .fold(f.numer().clone(), |acc, (_, d)| acc.mul_ref(d))
        })
        .collect();
    (out, scale)
}

/// Prefers constant pivots, then the sparsest candidate.
fn choose_pivot(rows: &Rows, col: usize, candidates: impl Iterator<Item = usize>) -> Option<usize> {
    candidates
        .filter(|&r| !rows[r][col].is_zero())
        .min_by_key(|&r| {
            let e = &rows[r][col];
            (e.as_constant().is_none(), e.len(), r)
        })
}

/// Division-free Gauss–Jordan. Returns, per pivot, `(row, column)`.
fn reduce(rows: &mut Rows) -> Vec<(usize, usize)> {
    let (n, m) = (rows.len(), rows.first().map_or(0, Vec::len));
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..m {
        if next_row == n {
            break;
        }
        let Some(r) = choose_pivot(rows, col, next_row..n) else {
            continue;
        };
        rows.swap(next_row, r);
        let piv = rows[next_row][col].clone();
        for i in 0..n {
            if i == next_row || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            let pivot_row = rows[next_row].clone();
            for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                *x = piv.mul_ref(x).sub_ref(&factor.mul_ref(p));
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
    }
    pivots
}

fn record(pivots: &mut Vec<ScalarExpr>, e: &ScalarExpr) {
    if e.as_constant().is_none() && !pivots.contains(e) {
        pivots.push(e.clone());
    }
}

pub fn inverse(matrix: &[Vec<Fraction>]) -> Result<Inverse, LinalgError> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(LinalgError::NotSquare);
    }
    let mut scales = Vec::with_capacity(n);
    let mut rows: Rows = Vec::with_capacity(n);
    for (i, row) in matrix.iter().enumerate() {
        let (mut r, s) = clear_row(row);
        r.extend((0..n).map(|j| if i == j { ScalarExpr::one() } else { ScalarExpr::zero() }));
        rows.push(r);
        scales.push(s);
    }
    let pivots = reduce(&mut rows);
    // pivots in the augmented half mean a missing pivot on the left
    if let Some(column) = (0..n).find(|&k| pivots.get(k).map(|p| p.1) != Some(k)) {
        return Err(LinalgError::Singular { column });
    }
    // Scaled rows: A' = S·A, so A⁻¹ = A'⁻¹·S and column j picks up scales[j].
    let mut denominators = Vec::new();
    let mut entries = vec![vec![Fraction::zero(); n]; n];
    for i in 0..n {
        let d = rows[i][i].clone();
        for j in 0..n {
            let num = rows[i][n + j].mul_ref(&scales[j]);
            entries[i][j] = Fraction::new(num, d.clone());
            record(&mut denominators, entries[i][j].denom());
        }
    }
    Ok(Inverse {
        entries,
        pivot_denominators: denominators,
    })
}

/// Spanning set of the right null space, one vector per free column.
pub fn null_space(matrix: &[Vec<Fraction>]) -> Vec<Vec<Fraction>> {
    let m = matrix.first().map_or(0, Vec::len);
    let mut rows: Rows = matrix.iter().map(|r| clear_row(r).0).collect();
    let pivots = reduce(&mut rows);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let diag: Vec<ScalarExpr> = pivots.iter().map(|&(r, c)| rows[r][c].clone()).collect();
    let all = diag.iter().fold(ScalarExpr::one(), |acc, d| acc.mul_ref(d));
    let mut out = Vec::new();
    for free in (0..m).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![ScalarExpr::zero(); m];
        v[free] = all.clone();
        for (k, &(r, c)) in pivots.iter().enumerate() {
            let others = diag
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .fold(ScalarExpr::one(), |acc, (_, d)| acc.mul_ref(d));
            v[c] = rows[r][free].mul_ref(&others).neg_ref();
        }
        // scale so the free entry is 1 when that keeps everything polynomial
        let lead = Fraction::from(v[free].clone());
        let normalized: Vec<Fraction> = v
            .iter()
            .map(|x| Fraction::from(x.clone()).div(&lead).expect("free entry is nonzero"))
            .collect();
        if normalized.iter().all(|f| f.to_expr().is_some()) {
            out.push(normalized);
        } else {
            out.push(v.into_iter().map(Fraction::from).collect());
        }
    }
    out
}

pub fn rank(matrix: &[Vec<Fraction>]) -> usize {
    let mut rows: Rows = matrix.iter().map(|r| clear_row(r).0).collect();
    reduce(&mut rows).len()
}

/// Cofactor expansion along the first row; meant for the small matrices here.
pub fn determinant<C: Coefficient>(matrix: &[Vec<C>]) -> C {
    let n = matrix.len();
    match n {
        0 => C::one(),
        1 => matrix[0][0].clone(),
        _ => {
            let mut acc = C::zero();
            for (j, a) in matrix[0].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<C>> = matrix[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let t = a.times(&determinant(&minor));
                acc = if j % 2 == 0 { acc.plus(&t) } else { acc.minus(&t) };
            }
            acc
        }
    }
}
