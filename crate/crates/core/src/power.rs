//! Achieved GDoF of a power allocation and the power-control algorithms.
//!
//! Transmitter `k` sends with power `P^{r_k}`, `r_k <= 0`. Three solvers are
//! provided: the synchronous fixed-point iteration (locally optimal), the
//! globally optimal greedy update for regular channels, and its compound
//! variant. All run on exact rationals.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::channel::{CompoundChannel, RegularChannel};
use crate::gdof::{write_tuple, GdofError, GdofTuple};
use crate::graph::{build_full, shortest_paths, ShortestPathResult};
use crate::rational::{positive_part, render, Q};

/// Iteration cap for [`gsfpc`].
pub const GSFPC_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PowerError {
    #[error(transparent)]
    Gdof(#[from] GdofError),
    #[error("power exponent of user {} is positive", .user + 1)]
    PositiveExponent { user: usize },
    #[error("allocation has {found} entries, channel has {expected} users")]
    Dimension { expected: usize, found: usize },
    #[error("target is infeasible: circuit {} has length {}", .cycle.join(" -> "), render(.length))]
    Infeasible { cycle: Vec<String>, length: Q },
    #[error("target of user {} is zero; remove silent users first", .user + 1)]
    ZeroTarget { user: usize },
    #[error("user {} in state {} gets a negative polyhedral GDoF", .user + 1, .state + 1)]
    PolyhedralViolation { user: usize, state: usize },
    #[error("user {} does not reach its target under the given allocation", .user + 1)]
    TargetNotAchieved { user: usize },
    #[error("fixed-point iteration did not converge within {iterations} iterations")]
    NotConverged { iterations: usize },
}

/// Power exponents `r`, one per user, all `<= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerExponents(Vec<Q>);

impl PowerExponents {
    pub fn new(values: Vec<Q>) -> Result<Self, PowerError> {
        if let Some(user) = values.iter().position(Signed::is_positive) {
            return Err(PowerError::PositiveExponent { user });
        }
        Ok(Self(values))
    }

    /// Full power for every user.
    pub fn zeros(users: usize) -> Self {
        Self(vec![Q::zero(); users])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Q] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Q> {
        self.0
    }

    /// Componentwise `self <= other`.
    pub fn below(&self, other: &PowerExponents) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn check_users(&self, users: usize) -> Result<(), PowerError> {
        if self.0.len() != users {
            return Err(PowerError::Dimension {
                expected: users,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

impl core::ops::Index<usize> for PowerExponents {
    type Output = Q;

    fn index(&self, index: usize) -> &Q {
        &self.0[index]
    }
}

impl fmt::Display for PowerExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Strongest interference seen by receiver `k` in `state`, relative to
/// noise: `(max_{j≠k, j active} (α_kj + r_j))^+`. Silent users are `None`.
fn interference(channel: &CompoundChannel, k: usize, state: usize, r: &[Option<&Q>]) -> Q {
    let levels = channel.states(k)[state].iter();
    let strongest = levels
        .zip(r)
        .enumerate()
        .filter(|&(j, _)| j != k)
        .filter_map(|(_, (alpha, rj))| rj.map(|rj| alpha + rj))
        .max();
    strongest.map_or_else(Q::zero, positive_part)
}

/// Per-state polyhedral GDoF `α_kk + r_k - (max_{j≠k}(α_kj + r_j))^+`.
fn polyhedral_levels<'a>(
    channel: &'a CompoundChannel,
    k: usize,
    r: &'a [Option<&'a Q>],
) -> impl Iterator<Item = Q> + 'a {
    let rk = r[k].expect("active user");
    (0..channel.state_count(k)).map(move |l| channel.level(k, l, k) + rk - interference(channel, k, l, r))
}

/// Achieved GDoF with some users possibly silent (`None`, zero GDoF and no
/// interference).
pub(crate) fn achieved_partial(channel: &CompoundChannel, r: &[Option<&Q>]) -> Vec<Q> {
    (0..channel.user_count())
        .map(|k| match r[k] {
            None => Q::zero(),
            Some(_) => positive_part(polyhedral_levels(channel, k, r).min().expect("nonempty state set")),
        })
        .collect()
}

fn as_active(r: &PowerExponents) -> Vec<Option<&Q>> {
    r.0.iter().map(Some).collect()
}

/// Worst-state GDoF of each user when all interference is treated as noise.
pub fn achieved_gdof(channel: &CompoundChannel, r: &PowerExponents) -> Result<GdofTuple, PowerError> {
    r.check_users(channel.user_count())?;
    Ok(GdofTuple::new(achieved_partial(channel, &as_active(r))).expect("nonnegative by construction"))
}

/// Like [`achieved_gdof`] without clamping at zero; fails if some user's
/// worst state would be negative.
pub fn achieved_gdof_polyhedral(channel: &CompoundChannel, r: &PowerExponents) -> Result<GdofTuple, PowerError> {
    r.check_users(channel.user_count())?;
    let active = as_active(r);
    let mut values = Vec::with_capacity(channel.user_count());
    for k in 0..channel.user_count() {
        let (state, worst) = polyhedral_levels(channel, k, &active)
            .enumerate()
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("nonempty state set");
        if worst.is_negative() {
            return Err(PowerError::PolyhedralViolation { user: k, state });
        }
        values.push(worst);
    }
    Ok(GdofTuple::new(values).expect("checked nonnegative"))
}

/// Smallest `r_k` reaching `d_k` with all other exponents held:
/// `d_k - min_l (α_kk - (max_{j≠k}(α_kj + r_j))^+)`.
fn best_response(channel: &CompoundChannel, k: usize, r: &[Option<&Q>], d: &Q) -> Q {
    let margin = (0..channel.state_count(k))
        .map(|l| channel.level(k, l, k) - interference(channel, k, l, r))
        .min()
        .expect("nonempty state set");
    d - margin
}

fn require_positive(d: &GdofTuple) -> Result<(), PowerError> {
    match d.values().iter().position(Zero::is_zero) {
        Some(user) => Err(PowerError::ZeroTarget { user }),
        None => Ok(()),
    }
}

/// Shortest-path allocation `l_dst` from the potential graph, or the negative
/// circuit proving `d` infeasible.
pub fn shortest_path_allocation(channel: &CompoundChannel, d: &GdofTuple) -> Result<PowerExponents, PowerError> {
    let graph = build_full(channel, d)?;
    match shortest_paths(&graph) {
        ShortestPathResult::Feasible { l_dst } => Ok(PowerExponents::new(l_dst).expect("paths from u are <= 0")),
        ShortestPathResult::Infeasible { cycle, length } => Err(PowerError::Infeasible {
            cycle: cycle.iter().map(|&v| graph.label(v)).collect(),
            length,
        }),
    }
}

/// True iff no user can lower its own exponent and still reach its target.
pub fn locally_optimal(channel: &CompoundChannel, r: &PowerExponents, d: &GdofTuple) -> Result<bool, PowerError> {
    d.check_users(channel.user_count())?;
    require_positive(d)?;
    let achieved = achieved_gdof(channel, r)?;
    if let Some(user) = (0..d.len()).find(|&k| achieved[k] < d[k]) {
        return Err(PowerError::TargetNotAchieved { user });
    }
    let active = as_active(r);
    Ok((0..d.len()).all(|k| best_response(channel, k, &active, &d[k]) == r[k]))
}

/// Iterates of the synchronous fixed-point update.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsfpcTrace {
    /// `r(0), r(1), ...`, ending at the fixed point when converged.
    pub iterates: Vec<PowerExponents>,
    pub converged: bool,
    /// Number of updates that changed the allocation.
    pub iterations: usize,
}

/// Every user simultaneously plays its best response, starting from the
/// shortest-path allocation.
pub fn gsfpc(channel: &CompoundChannel, d: &GdofTuple) -> Result<(PowerExponents, GsfpcTrace), PowerError> {
    d.check_users(channel.user_count())?;
    require_positive(d)?;
    let mut r = shortest_path_allocation(channel, d)?;
    let mut iterates = vec![r.clone()];
    for iteration in 0..GSFPC_MAX_ITERATIONS {
        let active = as_active(&r);
        let next: Vec<Q> = (0..d.len()).map(|k| best_response(channel, k, &active, &d[k])).collect();
        if next == r.0 {
            let trace = GsfpcTrace {
                iterates,
                converged: true,
                iterations: iteration,
            };
            return Ok((r, trace));
        }
        debug_assert!(next.iter().zip(&r.0).all(|(a, b)| a <= b));
        r = PowerExponents(next);
        iterates.push(r.clone());
    }
    Err(PowerError::NotConverged {
        iterations: GSFPC_MAX_ITERATIONS,
    })
}

/// One update of the greedy global algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GgpcUpdate {
    /// Power reduction applied to every user not yet fixed.
    pub step: Q,
    /// Users fixed by this update (ascending).
    pub fixed: Vec<usize>,
    pub allocation: PowerExponents,
    pub achieved: GdofTuple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GgpcTrace {
    pub initial: PowerExponents,
    pub updates: Vec<GgpcUpdate>,
}

/// Globally optimal (componentwise minimal) allocation reaching `d` on a
/// regular channel.
pub fn ggpc(channel: &RegularChannel, d: &GdofTuple) -> Result<(PowerExponents, GgpcTrace), PowerError> {
    ggpc_compound(channel.as_compound(), d)
}

/// Globally optimal allocation on a compound channel; each step takes the
/// worst state of every receiver.
pub fn ggpc_compound(channel: &CompoundChannel, d: &GdofTuple) -> Result<(PowerExponents, GgpcTrace), PowerError> {
    d.check_users(channel.user_count())?;
    require_positive(d)?;
    let users = channel.user_count();
    let initial = shortest_path_allocation(channel, d)?;
    let mut r = initial.0.clone();
    let mut fixed = vec![false; users];
    let mut updates = Vec::new();

    while fixed.contains(&false) {
        let slack = |i: usize| -> Q {
            (0..channel.state_count(i))
                .map(|l| {
                    let from_fixed = (0..users)
                        .filter(|&m| m != i && fixed[m])
                        .map(|m| channel.level(i, l, m) + &r[m])
                        .max()
                        .map_or_else(Q::zero, positive_part);
                    &r[i] + channel.level(i, l, i) - &d[i] - from_fixed
                })
                .min()
                .expect("nonempty state set")
        };
        let slacks: Vec<(usize, Q)> = (0..users).filter(|&i| !fixed[i]).map(|i| (i, slack(i))).collect();
        let step = slacks.iter().map(|(_, s)| s).min().expect("an active user").clone();
        debug_assert!(!step.is_negative());
        let newly: Vec<usize> = slacks.iter().filter(|(_, s)| *s == step).map(|&(i, _)| i).collect();
        for i in (0..users).filter(|&i| !fixed[i]) {
            r[i] -= &step;
        }
        for &i in &newly {
            fixed[i] = true;
        }
        let allocation = PowerExponents(r.clone());
        let achieved = achieved_gdof(channel, &allocation)?;
        updates.push(GgpcUpdate {
            step,
            fixed: newly,
            allocation,
            achieved,
        });
    }
    Ok((PowerExponents(r), GgpcTrace { initial, updates }))
}

/// Exponent of one user in an allocation that may switch users off.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UserPower {
    Exponent(Q),
    /// Transmitter switched off (`r = -∞`).
    Silent,
}

impl UserPower {
    pub fn exponent(&self) -> Option<&Q> {
        match self {
            UserPower::Exponent(r) => Some(r),
            UserPower::Silent => None,
        }
    }
}

impl fmt::Display for UserPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UserPower::Exponent(r) => f.write_str(&render(r)),
            UserPower::Silent => f.write_str("silent"),
        }
    }
}

/// Achieved GDoF of an allocation with silent users.
pub fn achieved_gdof_with_silent(channel: &CompoundChannel, r: &[UserPower]) -> Result<GdofTuple, PowerError> {
    if r.len() != channel.user_count() {
        return Err(PowerError::Dimension {
            expected: channel.user_count(),
            found: r.len(),
        });
    }
    if let Some(user) = r.iter().position(|p| p.exponent().is_some_and(Signed::is_positive)) {
        return Err(PowerError::PositiveExponent { user });
    }
    let active: Vec<Option<&Q>> = r.iter().map(UserPower::exponent).collect();
    Ok(GdofTuple::new(achieved_partial(channel, &active)).expect("nonnegative by construction"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Shortest-path allocation `l_dst`.
    ShortestPath,
    Gsfpc,
    /// Greedy global algorithm; compound channels go through the regular
    /// counterpart.
    Ggpc,
    GgpcCompound,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::ShortestPath,
        Algorithm::Gsfpc,
        Algorithm::Ggpc,
        Algorithm::GgpcCompound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ShortestPath => "sp",
            Algorithm::Gsfpc => "gsfpc",
            Algorithm::Ggpc => "ggpc",
            Algorithm::GgpcCompound => "ggpc-c",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveTrace {
    None,
    Gsfpc(GsfpcTrace),
    Ggpc(GgpcTrace),
}

/// Output of [`solve`]. Traces are indexed over `active` users only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub allocation: Vec<UserPower>,
    /// Users with a positive target, ascending; trace index `i` is user `active[i]`.
    pub active: Vec<usize>,
    pub trace: SolveTrace,
    /// Set when the algorithm ran on the regular counterpart.
    pub via_counterpart: bool,
    pub achieved: GdofTuple,
}

/// Runs `algorithm` after switching off every user with a zero target and
/// restricting the channel to the others.
pub fn solve(channel: &CompoundChannel, d: &GdofTuple, algorithm: Algorithm) -> Result<Solution, PowerError> {
    d.check_users(channel.user_count())?;
    let active: Vec<usize> = (0..d.len()).filter(|&k| !d[k].is_zero()).collect();
    let sub = channel.subnetwork(&active);
    let sub_d = GdofTuple::new(active.iter().map(|&k| d[k].clone()).collect()).expect("nonnegative");
    let mut via_counterpart = false;
    let (r, trace) = if active.is_empty() {
        (PowerExponents(Vec::new()), SolveTrace::None)
    } else {
        match algorithm {
            Algorithm::ShortestPath => (shortest_path_allocation(&sub, &sub_d)?, SolveTrace::None),
            Algorithm::Gsfpc => {
                let (r, t) = gsfpc(&sub, &sub_d)?;
                (r, SolveTrace::Gsfpc(t))
            }
            Algorithm::Ggpc => {
                let regular = match RegularChannel::from_compound(sub.clone()) {
                    Some(regular) => regular,
                    None => {
                        via_counterpart = true;
                        sub.regular_counterpart()
                    }
                };
                let (r, t) = ggpc(&regular, &sub_d)?;
                (r, SolveTrace::Ggpc(t))
            }
            Algorithm::GgpcCompound => {
                let (r, t) = ggpc_compound(&sub, &sub_d)?;
                (r, SolveTrace::Ggpc(t))
            }
        }
    };
    let mut allocation = vec![UserPower::Silent; d.len()];
    for (i, &k) in active.iter().enumerate() {
        allocation[k] = UserPower::Exponent(r[i].clone());
    }
    let achieved = achieved_gdof_with_silent(channel, &allocation)?;
    Ok(Solution {
        allocation,
        active,
        trace,
        via_counterpart,
        achieved,
    })
}
