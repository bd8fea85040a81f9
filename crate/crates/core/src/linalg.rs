//! Exact matrix rank by fraction-free (Bareiss) elimination.
//!
//! Entries are integers. The elimination first runs on `i128` with checked
//! arithmetic and restarts on `BigInt` if any intermediate overflows.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

/// Rank of an integer matrix given as rows of equal length.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let small: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    if let Some(r) = bareiss_i128(small) {
        return r;
    }
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    bareiss_big(big)
}

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    let cols = m[0].len();
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c];
        for i in r + 1..rows {
            let factor = m[i][c];
            for j in c..cols {
                let lhs = pivot.checked_mul(m[i][j])?;
                let rhs = factor.checked_mul(m[r][j])?;
                m[i][j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = pivot;
        r += 1;
    }
    Some(r)
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            let factor = m[i][c].clone();
            for j in c..cols {
                let v = (&pivot * &m[i][j] - &factor * &m[r][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = pivot;
        r += 1;
    }
    r
}
