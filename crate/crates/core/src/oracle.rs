//! Brute-force grid search over power allocations, used to cross-check the
//! global optimality of the power-control algorithms.
//!
//! Every quantity is scaled to a common integer grid so the search runs in
//! plain machine integers and shares no code with [`crate::power`].

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::channel::CompoundChannel;
use crate::gdof::GdofTuple;
use crate::power::PowerExponents;
use crate::rational::Q;

/// Largest number of grid points a search may visit.
pub const MAX_GRID_POINTS: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("grid step must be positive")]
    Step,
    #[error("grid floor must be negative")]
    Floor,
    #[error("grid has {points} points, above the limit of {MAX_GRID_POINTS}")]
    TooLarge { points: u64 },
    #[error("inputs do not fit the integer grid")]
    Overflow,
    #[error("dimension mismatch between channel, target and allocation")]
    Dimension,
}

struct Scaled {
    users: usize,
    /// Common denominator of every input.
    unit: BigInt,
    /// `alpha[k][l][j]`
    alpha: Vec<Vec<Vec<i64>>>,
    d: Vec<i64>,
    /// Grid exponents, from 0 downwards.
    levels: Vec<i64>,
}

fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scale(v: &Q, by: &BigInt) -> Result<i64, OracleError> {
    let n = v.numer() * by;
    let (quot, rem) = n.div_rem(v.denom());
    debug_assert!(rem.is_zero());
    quot.to_i64()
        .filter(|x| x.abs() < (1 << 40))
        .ok_or(OracleError::Overflow)
}

impl Scaled {
    fn new(channel: &CompoundChannel, d: &GdofTuple, extra: &[&Q], step: &Q, floor: &Q) -> Result<Self, OracleError> {
        if !step.is_positive() {
            return Err(OracleError::Step);
        }
        if !floor.is_negative() {
            return Err(OracleError::Floor);
        }
        let users = channel.user_count();
        if d.len() != users {
            return Err(OracleError::Dimension);
        }
        let all_alpha = channel.receivers().iter().flatten().flatten();
        let unit = lcm_of_denominators(
            all_alpha
                .chain(d.values())
                .chain(extra.iter().copied())
                .chain([step, floor]),
        );
        let per_axis = (-floor / step).floor().to_integer().to_u64().ok_or(OracleError::Overflow)? + 1;
        let points = (0..users).try_fold(1u64, |acc, _| acc.checked_mul(per_axis));
        match points {
            Some(p) if p <= MAX_GRID_POINTS => {}
            Some(p) => return Err(OracleError::TooLarge { points: p }),
            None => return Err(OracleError::TooLarge { points: u64::MAX }),
        }
        let step_i = scale(step, &unit)?;
        let levels = (0..per_axis as i64).map(|n| -n * step_i).collect();
        let alpha = channel
            .receivers()
            .iter()
            .map(|states| {
                states
                    .iter()
                    .map(|s| s.iter().map(|v| scale(v, &unit)).collect())
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let d = d.values().iter().map(|v| scale(v, &unit)).collect::<Result<_, _>>()?;
        Ok(Self {
            users,
            unit,
            alpha,
            d,
            levels,
        })
    }

    fn achieves(&self, r: &[i64]) -> bool {
        (0..self.users).all(|k| {
            self.alpha[k].iter().all(|s| {
                let noise_or_interference = (0..self.users)
                    .filter(|&j| j != k)
                    .map(|j| s[j] + r[j])
                    .fold(0, i64::max);
                (s[k] + r[k] - noise_or_interference).max(0) >= self.d[k]
            })
        })
    }

    /// Calls `visit` with every grid allocation reaching the target.
    fn for_each_achieving(&self, mut visit: impl FnMut(&[i64])) {
        let mut index = vec![0usize; self.users];
        let mut r = vec![0i64; self.users];
        loop {
            for k in 0..self.users {
                r[k] = self.levels[index[k]];
            }
            if self.achieves(&r) {
                visit(&r);
            }
            let Some(k) = (0..self.users).find(|&k| index[k] + 1 < self.levels.len()) else {
                return;
            };
            index[k] += 1;
            for slot in &mut index[..k] {
                *slot = 0;
            }
        }
    }
}

/// True iff `r` reaches `d` and no grid allocation in `[floor, 0]^K` reaching
/// `d` is strictly below `r` in any coordinate.
pub fn oracle_globally_optimal(
    channel: &CompoundChannel,
    r: &PowerExponents,
    d: &GdofTuple,
    grid_step: &Q,
    floor: &Q,
) -> Result<bool, OracleError> {
    if r.len() != channel.user_count() {
        return Err(OracleError::Dimension);
    }
    let extra: Vec<&Q> = r.values().iter().collect();
    let grid = Scaled::new(channel, d, &extra, grid_step, floor)?;
    let target: Vec<i64> = r.values().iter().map(|v| scale(v, &grid.unit)).collect::<Result<_, _>>()?;
    if !grid.achieves(&target) {
        return Ok(false);
    }
    let mut undercut = false;
    grid.for_each_achieving(|candidate| {
        undercut |= candidate.iter().zip(&target).any(|(c, t)| c < t);
    });
    Ok(!undercut)
}

/// Componentwise minimum over all achieving grid allocations, or `None` if
/// the grid holds none.
pub fn grid_minimum(channel: &CompoundChannel, d: &GdofTuple, grid_step: &Q, floor: &Q) -> Result<Option<Vec<Q>>, OracleError> {
    let grid = Scaled::new(channel, d, &[], grid_step, floor)?;
    let mut best: Option<Vec<i64>> = None;
    grid.for_each_achieving(|candidate| match &mut best {
        None => best = Some(candidate.to_vec()),
        Some(b) => {
            for (slot, &c) in b.iter_mut().zip(candidate) {
                *slot = (*slot).min(c);
            }
        }
    });
    Ok(best.map(|b| b.into_iter().map(|v| Q::new(v.into(), grid.unit.clone())).collect()))
}
