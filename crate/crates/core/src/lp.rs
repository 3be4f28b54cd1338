//! Small exact-rational simplex for `max c·x  s.t.  A x <= b, x >= 0` with
//! `b >= 0`, so the origin is a feasible starting vertex.
//!
//! Several objectives can be given; they are optimized lexicographically (the
//! second only breaks ties of the first, and so on). Bland's smallest-index
//! rule on both the entering and the leaving variable rules out cycling.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<Q>, values: Vec<Q> },
    Unbounded,
}

fn lex_positive(column: impl Iterator<Item = Q>) -> bool {
    for v in column {
        if v.is_positive() {
            return true;
        }
        if v.is_negative() {
            return false;
        }
    }
    false
}

/// Panics if `b` has a negative entry or the shapes disagree.
pub(crate) fn maximize_lex(a: &[Vec<Q>], b: &[Q], objectives: &[Vec<Q>]) -> LpOutcome {
    let rows = a.len();
    let cols = objectives.first().map_or(0, Vec::len);
    assert_eq!(b.len(), rows);
    assert!(b.iter().all(|v| !v.is_negative()), "origin must be feasible");
    assert!(a.iter().all(|r| r.len() == cols));

    // variable ids: 0..cols are the decision variables, cols.. the slacks
    let mut nonbasic: Vec<usize> = (0..cols).collect();
    let mut basic: Vec<usize> = (cols..cols + rows).collect();
    let mut tab: Vec<Vec<Q>> = a.to_vec();
    let mut beta: Vec<Q> = b.to_vec();
    let mut obj: Vec<Vec<Q>> = objectives.to_vec();
    let mut obj_value: Vec<Q> = vec![Q::zero(); objectives.len()];

    loop {
        let entering = (0..cols)
            .filter(|&j| lex_positive(obj.iter().map(|row| row[j].clone())))
            .min_by_key(|&j| nonbasic[j]);
        let Some(s) = entering else { break };

        let mut leave: Option<(usize, Q)> = None;
        for i in 0..rows {
            if !tab[i][s].is_positive() {
                continue;
            }
            let ratio = &beta[i] / &tab[i][s];
            let better = match &leave {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basic[i] < basic[*r]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return LpOutcome::Unbounded;
        };

        let pivot = tab[r][s].clone();
        for j in 0..cols {
            if j != s {
                tab[r][j] = &tab[r][j] / &pivot;
            }
        }
        tab[r][s] = Q::from_integer(1.into()) / &pivot;
        beta[r] = &beta[r] / &pivot;

        for i in 0..rows {
            if i == r || tab[i][s].is_zero() {
                continue;
            }
            let factor = tab[i][s].clone();
            for j in 0..cols {
                tab[i][j] = if j == s {
                    -(&factor * &tab[r][s])
                } else {
                    &tab[i][j] - &factor * &tab[r][j]
                };
            }
            beta[i] = &beta[i] - &factor * &beta[r];
        }
        for (row, value) in obj.iter_mut().zip(obj_value.iter_mut()) {
            let factor = row[s].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..cols {
                row[j] = if j == s {
                    -(&factor * &tab[r][s])
                } else {
                    &row[j] - &factor * &tab[r][j]
                };
            }
            *value += &factor * &beta[r];
        }
        core::mem::swap(&mut nonbasic[s], &mut basic[r]);
    }

    let mut x = vec![Q::zero(); cols];
    for (i, &var) in basic.iter().enumerate() {
        if var < cols {
            x[var] = beta[i].clone();
        }
    }
    LpOutcome::Optimal { x, values: obj_value }
}
