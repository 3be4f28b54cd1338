//! Explicit geometry of the polyhedral TIN region.
//!
//! The region is cut out by one bound per user, `d_i <= ᾱ_ii`, and one bound per
//! cyclic sequence `(i_1, ..., i_m)` of distinct users,
//! `Σ_j d_{i_j} <= Σ_j (ᾱ_{i_j i_j} - ᾱ_{i_j i_{j+1}})`, all evaluated on the
//! regular counterpart. Cycles over the same user subset share a left-hand
//! side, so only the tightest one per subset is kept.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::channel::CompoundChannel;
use crate::gdof::{GdofError, GdofTuple};
use crate::lp::{maximize_lex, LpOutcome};
use crate::rational::{render, Q};

/// Largest user count for which cyclic sequences are enumerated. Beyond this,
/// feasibility goes through [`crate::graph::shortest_paths`] instead.
pub const MAX_USERS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionError {
    #[error("{users} users exceeds the cyclic-sequence limit of {MAX_USERS}")]
    TooManyUsers { users: usize },
    #[error("user count must be positive")]
    NoUsers,
    #[error(transparent)]
    Gdof(#[from] GdofError),
    #[error("the polyhedral TIN region is empty (a cyclic bound is negative)")]
    EmptyRegion,
    #[error("target lies outside the region, violating {0}")]
    NotMember(Constraint),
}

/// A cyclically ordered list of distinct users, rotated to start at its
/// smallest index. Indices are 0-based; `Display` prints them 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicSequence(Vec<usize>);

impl CyclicSequence {
    pub fn users(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for CyclicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, u) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", u + 1)?;
        }
        f.write_str(")")
    }
}

fn check_guard(users: usize) -> Result<(), RegionError> {
    if users == 0 {
        return Err(RegionError::NoUsers);
    }
    if users > MAX_USERS {
        return Err(RegionError::TooManyUsers { users });
    }
    Ok(())
}

fn next_permutation(items: &mut [usize]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let Some(i) = (0..items.len() - 1).rev().find(|&i| items[i] < items[i + 1]) else {
        return false;
    };
    let j = (i + 1..items.len()).rev().find(|&j| items[j] > items[i]).expect("pivot exists");
    items.swap(i, j);
    items[i + 1..].reverse();
    true
}

/// Subsets of `0..users` with at least two members, by size then
/// lexicographically, each as an ascending index list.
fn subsets_by_size(users: usize, min_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in min_size..=users {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(combo.clone());
            let Some(i) = (0..size).rev().find(|&i| combo[i] != i + users - size) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

/// Calls `visit` with every cyclic sequence of `subset` (ascending list).
fn for_each_cycle_of(subset: &[usize], mut visit: impl FnMut(&[usize])) {
    let mut order = subset.to_vec();
    loop {
        visit(&order);
        if !next_permutation(&mut order[1..]) {
            break;
        }
    }
}

/// All cyclic sequences over subsets of size `>= 2`, each once in canonical
/// rotation; by subset size, then subset, then rotation order.
pub fn enumerate_cycles(users: usize) -> Result<Vec<CyclicSequence>, RegionError> {
    check_guard(users)?;
    let mut out = Vec::new();
    for subset in subsets_by_size(users, 2) {
        for_each_cycle_of(&subset, |c| out.push(CyclicSequence(c.to_vec())));
    }
    Ok(out)
}

/// `Σ_{m=2..K} C(K, m) (m - 1)!`.
pub fn cycle_count(users: usize) -> usize {
    let mut total = 0usize;
    let mut binom = 1usize;
    for m in 1..=users {
        binom = binom * (users - m + 1) / m;
        if m >= 2 {
            total += binom * (1..m).product::<usize>();
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoundOrigin {
    User(usize),
    Cycle(CyclicSequence),
}

/// `Σ_{i in users} d_i <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    users: Vec<usize>,
    rhs: Q,
    origin: BoundOrigin,
}

impl Constraint {
    /// Participating users, ascending.
    pub fn users(&self) -> &[usize] {
        &self.users
    }

    pub fn rhs(&self) -> &Q {
        &self.rhs
    }

    pub fn origin(&self) -> &BoundOrigin {
        &self.origin
    }

    pub fn involves(&self, user: usize) -> bool {
        self.users.binary_search(&user).is_ok()
    }

    pub fn lhs(&self, d: &GdofTuple) -> Q {
        self.users.iter().map(|&i| &d[i]).sum()
    }

    pub fn holds(&self, d: &GdofTuple) -> bool {
        self.lhs(d) <= self.rhs
    }

    pub fn coefficients(&self, users: usize) -> Vec<Q> {
        (0..users)
            .map(|i| Q::from_integer(i64::from(self.involves(i)).into()))
            .collect()
    }

    /// `c1*d1 + ... + cK*dK <= rhs`.
    pub fn export(&self, users: usize) -> String {
        let mut out = String::new();
        for i in 0..users {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(if self.involves(i) { "1" } else { "0" });
            out.push_str("*d");
            out.push_str(&alloc::format!("{}", i + 1));
        }
        out.push_str(" <= ");
        out.push_str(&render(&self.rhs));
        out
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, i) in self.users.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "d{}", i + 1)?;
        }
        write!(f, " <= {}", render(&self.rhs))
    }
}

/// The explicit inequality list of the polyhedral TIN region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionConstraints {
    users: usize,
    constraints: Vec<Constraint>,
}

/// Outcome of a membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside(Constraint),
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside)
    }
}

impl RegionConstraints {
    pub fn user_count(&self) -> usize {
        self.users
    }

    /// Deduplicated inequalities: the `K` per-user bounds first, then one
    /// (tightest) bound per user subset, by subset size then lexicographically.
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Size of the raw list before merging cycles with equal left-hand sides.
    pub fn raw_count(&self) -> usize {
        self.users + cycle_count(self.users)
    }

    pub fn is_empty_region(&self) -> bool {
        self.constraints.iter().any(|c| c.rhs.is_negative())
    }

    pub fn check(&self, d: &GdofTuple) -> Result<Membership, RegionError> {
        d.check_users(self.users)?;
        Ok(match self.constraints.iter().find(|c| !c.holds(d)) {
            Some(c) => Membership::Outside(c.clone()),
            None => Membership::Inside,
        })
    }

    /// Membership in the union over deactivated-user sets. Deactivating a user
    /// only removes the bounds it takes part in, so the decisive set is the
    /// whole zero set of `d`: the test keeps the bounds supported on `d > 0`.
    pub fn check_star(&self, d: &GdofTuple) -> Result<bool, RegionError> {
        d.check_users(self.users)?;
        Ok(self
            .constraints
            .iter()
            .filter(|c| c.users.iter().all(|&i| d[i].is_positive()))
            .all(|c| c.holds(d)))
    }

    /// Per-coordinate slack: how far `d_k` alone can grow before some bound binds.
    pub fn slack(&self, d: &GdofTuple, user: usize) -> Q {
        self.constraints
            .iter()
            .filter(|c| c.involves(user))
            .map(|c| &c.rhs - c.lhs(d))
            .min()
            .expect("every user has its own bound")
    }

    pub fn pareto(&self, d: &GdofTuple) -> Result<bool, RegionError> {
        if let Membership::Outside(c) = self.check(d)? {
            return Err(RegionError::NotMember(c));
        }
        Ok((0..self.users).all(|k| self.slack(d, k).is_zero()))
    }

    /// Maximum sum-GDoF with its lexicographically greatest maximizer.
    pub fn sum_gdof(&self) -> Result<(Q, GdofTuple), RegionError> {
        if self.is_empty_region() {
            return Err(RegionError::EmptyRegion);
        }
        let a: Vec<Vec<Q>> = self.constraints.iter().map(|c| c.coefficients(self.users)).collect();
        let b: Vec<Q> = self.constraints.iter().map(|c| c.rhs.clone()).collect();
        let one = Q::from_integer(1.into());
        let mut objectives = vec![vec![one.clone(); self.users]];
        for k in 0..self.users {
            let mut e = vec![Q::zero(); self.users];
            e[k] = one.clone();
            objectives.push(e);
        }
        match maximize_lex(&a, &b, &objectives) {
            LpOutcome::Optimal { x, mut values } => {
                let total = values.swap_remove(0);
                Ok((total, GdofTuple::new(x).expect("simplex keeps x >= 0")))
            }
            LpOutcome::Unbounded => unreachable!("every user has an upper bound"),
        }
    }

    /// Largest `t` with `(t, ..., t)` in the region.
    pub fn symmetric_gdof(&self) -> Result<Q, RegionError> {
        if self.is_empty_region() {
            return Err(RegionError::EmptyRegion);
        }
        Ok(self
            .constraints
            .iter()
            .map(|c| &c.rhs / Q::from_integer(c.users.len().into()))
            .min()
            .expect("at least one bound"))
    }
}

/// Builds the inequality list from the regular counterpart of `channel`.
pub fn region_constraints(channel: &CompoundChannel) -> Result<RegionConstraints, RegionError> {
    let users = channel.user_count();
    check_guard(users)?;
    let counterpart = channel.regular_counterpart();
    // gain[i][j] = ᾱ_ii - ᾱ_ij
    let gain: Vec<Vec<Q>> = (0..users)
        .map(|i| {
            (0..users)
                .map(|j| counterpart.alpha(i, i) - counterpart.alpha(i, j))
                .collect()
        })
        .collect();

    let mut constraints: Vec<Constraint> = (0..users)
        .map(|i| Constraint {
            users: vec![i],
            rhs: counterpart.alpha(i, i).clone(),
            origin: BoundOrigin::User(i),
        })
        .collect();
    for subset in subsets_by_size(users, 2) {
        let mut best: Option<(Q, Vec<usize>)> = None;
        for_each_cycle_of(&subset, |cycle| {
            let total: Q = (0..cycle.len())
                .map(|n| &gain[cycle[n]][cycle[(n + 1) % cycle.len()]])
                .sum();
            if best.as_ref().is_none_or(|(b, _)| &total < b) {
                best = Some((total, cycle.to_vec()));
            }
        });
        let (rhs, cycle) = best.expect("subset has at least one cycle");
        constraints.push(Constraint {
            users: subset,
            rhs,
            origin: BoundOrigin::Cycle(CyclicSequence(cycle)),
        });
    }
    Ok(RegionConstraints { users, constraints })
}

pub fn member(channel: &CompoundChannel, d: &GdofTuple) -> Result<Membership, RegionError> {
    region_constraints(channel)?.check(d)
}

pub fn member_star(channel: &CompoundChannel, d: &GdofTuple) -> Result<bool, RegionError> {
    region_constraints(channel)?.check_star(d)
}

pub fn pareto(channel: &CompoundChannel, d: &GdofTuple) -> Result<bool, RegionError> {
    region_constraints(channel)?.pareto(d)
}

pub fn sum_gdof(channel: &CompoundChannel) -> Result<(Q, GdofTuple), RegionError> {
    region_constraints(channel)?.sum_gdof()
}

pub fn symmetric_gdof(channel: &CompoundChannel) -> Result<Q, RegionError> {
    region_constraints(channel)?.symmetric_gdof()
}
