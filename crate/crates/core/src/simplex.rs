//! Exact primal simplex for `max cᵀy  s.t.  A y <= b, y >= 0` with `b >= 0`.
//!
//! The origin is feasible under `b >= 0`, so no phase 1 is needed. Bland's
//! rule (smallest entering index, smallest leaving basic index on ratio
//! ties) guarantees termination. At the optimum the reduced costs of the
//! slack columns are an optimal solution of the dual
//! `min bᵀx  s.t.  Aᵀx >= c, x >= 0`.

use num_traits::{Signed, Zero};

use crate::error::{FlowError, Result};
use crate::rational::{zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        /// Optimal `y`.
        primal: Vec<Rational>,
        /// Optimal solution of the dual program, one entry per row.
        dual: Vec<Rational>,
    },
    Unbounded,
}

pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(FlowError::Precondition("LP dimensions disagree".into()));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(FlowError::Precondition(
            "LP right-hand side must be non-negative".into(),
        ));
    }
    let width = n + m;
    // rows[i] = [A | I | b]; objective row holds reduced costs and -value
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..m).map(|j| {
                if i == j {
                    Rational::from_integer(1.into())
                } else {
                    zero()
                }
            }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut objective: Vec<Rational> = c.iter().map(|x| -x.clone()).collect();
    objective.extend((0..=m).map(|_| zero()));
    let mut basis: Vec<usize> = (n..width).collect();

    while let Some(enter) = (0..width).find(|&j| objective[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !rows[i][enter].is_positive() {
                continue;
            }
            let ratio = &rows[i][width] / &rows[i][enter];
            let better = match &leave {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return Ok(LpOutcome::Unbounded);
        };
        let pivot = rows[r][enter].clone();
        for x in rows[r].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        let f = objective[enter].clone();
        for (x, p) in objective.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
        basis[r] = enter;
    }

    let mut primal = vec![zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            primal[var] = rows[i][width].clone();
        }
    }
    Ok(LpOutcome::Optimal {
        value: objective[width].clone(),
        primal,
        dual: objective[n..width].to_vec(),
    })
}
