//! Exact rational LP feasibility (dense Phase-I simplex with Bland's rule).
//!
//! Used by the integer-feasibility core to prune branch-and-bound nodes
//! soundly: if the rational relaxation of a node's system is infeasible, so
//! is the integer system.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A constraint `Σ coeffs[j]·x_j ≤ rhs` over `x ≥ 0`.
#[derive(Debug, Clone)]
pub(crate) struct LpRow {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

/// Returns a rational point satisfying all rows with `x ≥ 0`, or `None` if
/// the system is infeasible over the rationals.
pub(crate) fn lp_feasible(rows: &[LpRow], n: usize) -> Option<Vec<BigRational>> {
    let m = rows.len();
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // Columns: n structural, m slacks, up to m artificials, then RHS.
    let mut art_of_row: Vec<Option<usize>> = vec![None; m];
    let mut art_count = 0usize;
    for (i, row) in rows.iter().enumerate() {
        if row.rhs < 0 {
            art_of_row[i] = Some(art_count);
            art_count += 1;
        }
    }
    let cols = n + m + art_count;
    let rat = |v: i64| BigRational::from(BigInt::from(v));

    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let mut r = vec![BigRational::zero(); cols + 1];
        let neg = row.rhs < 0;
        for (j, &c) in row.coeffs.iter().enumerate() {
            r[j] = if neg { rat(-c) } else { rat(c) };
        }
        r[n + i] = if neg { -BigRational::one() } else { BigRational::one() };
        r[cols] = rat(row.rhs.abs());
        if let Some(a) = art_of_row[i] {
            r[n + m + a] = BigRational::one();
            basis.push(n + m + a);
        } else {
            basis.push(n + i);
        }
        t.push(r);
    }

    // Objective: minimize the sum of artificials. Work with reduced costs of
    // -Σ(artificial rows); entering columns have positive price.
    let mut obj = vec![BigRational::zero(); cols + 1];
    for (i, row) in t.iter().enumerate() {
        if art_of_row[i].is_some() {
            for j in 0..=cols {
                obj[j] += row[j].clone();
            }
        }
    }
    // Artificial columns start priced out.
    for a in 0..art_count {
        obj[n + m + a] = BigRational::zero();
    }

    loop {
        // Bland: smallest-index column with positive reduced price.
        let entering = (0..cols).find(|&j| obj[j].is_positive());
        let Some(e) = entering else { break };
        // Ratio test (Bland tie-break by row index).
        let mut pivot_row: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &t[i][cols] / &t[i][e];
                let take = match &best {
                    None => true,
                    Some(b) => &ratio < b,
                };
                if take {
                    best = Some(ratio);
                    pivot_row = Some(i);
                }
            }
        }
        let Some(p) = pivot_row else {
            // Unbounded phase-one objective cannot happen (bounded below by 0),
            // but guard anyway.
            return None;
        };
        // Pivot.
        let piv = t[p][e].clone();
        for j in 0..=cols {
            t[p][j] = &t[p][j] / &piv;
        }
        for i in 0..m {
            if i != p && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..=cols {
                    let delta = &f * &t[p][j];
                    t[i][j] = &t[i][j] - delta;
                }
            }
        }
        if !obj[e].is_zero() {
            let f = obj[e].clone();
            for j in 0..=cols {
                let delta = &f * &t[p][j];
                obj[j] = &obj[j] - delta;
            }
        }
        basis[p] = e;
    }

    // Feasible iff all artificials ended at zero.
    for (i, &b) in basis.iter().enumerate() {
        if b >= n + m && !t[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[i][cols].clone();
        }
    }
    Some(x)
}
