//! Compound channel data model.
//!
//! A `K`-user compound interference channel is described, per receiver `k`, by a
//! finite set of states; state `l` of receiver `k` is the strength-level vector
//! `(α_k1, ..., α_kK)`, where `α_ki` is the dB-scale exponent of the nominal
//! power `P` for the link from transmitter `i` to receiver `k`.
//!
//! Strength levels must already be normalized to be nonnegative (a link weaker
//! than the noise floor is entered as `0`); negative input is rejected.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::{max_q, min_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChannelError {
    #[error("channel must have at least one user")]
    NoUsers,
    #[error("expected {expected} receivers, found {found}")]
    ReceiverCount { expected: usize, found: usize },
    #[error("receiver {} has an empty state set", .receiver + 1)]
    EmptyStateSet { receiver: usize },
    #[error(
        "receiver {} state {} has {found} strength levels, expected {expected}",
        .receiver + 1, .state + 1
    )]
    Dimension {
        receiver: usize,
        state: usize,
        expected: usize,
        found: usize,
    },
    #[error(
        "receiver {} state {} has a negative strength level for transmitter {}",
        .receiver + 1, .state + 1, .transmitter + 1
    )]
    NegativeStrength {
        receiver: usize,
        state: usize,
        transmitter: usize,
    },
    #[error("joint state set is empty")]
    EmptyJointSet,
    #[error("joint state {state} is not a {expected}x{expected} matrix")]
    JointDimension { state: usize, expected: usize },
    #[error("entry set ({}, {}) is empty", .row + 1, .col + 1)]
    EmptyEntrySet { row: usize, col: usize },
    #[error("entry set ({}, {}) contains a negative value", .row + 1, .col + 1)]
    NegativeEntry { row: usize, col: usize },
    #[error("entrywise sets do not form a square grid")]
    EntrywiseShape,
}

/// Per-receiver state sets of strength-level vectors.
///
/// Immutable once built; exact duplicate states within a receiver are dropped
/// (first occurrence kept).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompoundChannel {
    users: usize,
    receivers: Vec<Vec<Vec<Q>>>,
}

/// Checks every channel invariant without building anything.
pub fn validate(users: usize, receivers: &[Vec<Vec<Q>>]) -> Result<(), ChannelError> {
    if users == 0 {
        return Err(ChannelError::NoUsers);
    }
    if receivers.len() != users {
        return Err(ChannelError::ReceiverCount {
            expected: users,
            found: receivers.len(),
        });
    }
    for (receiver, states) in receivers.iter().enumerate() {
        if states.is_empty() {
            return Err(ChannelError::EmptyStateSet { receiver });
        }
        for (state, levels) in states.iter().enumerate() {
            if levels.len() != users {
                return Err(ChannelError::Dimension {
                    receiver,
                    state,
                    expected: users,
                    found: levels.len(),
                });
            }
            if let Some(transmitter) = levels.iter().position(Signed::is_negative) {
                return Err(ChannelError::NegativeStrength {
                    receiver,
                    state,
                    transmitter,
                });
            }
        }
    }
    Ok(())
}

fn dedup_states(states: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let mut kept: Vec<Vec<Q>> = Vec::with_capacity(states.len());
    for s in states {
        if !kept.contains(&s) {
            kept.push(s);
        }
    }
    kept
}

impl CompoundChannel {
    pub fn new(users: usize, receivers: Vec<Vec<Vec<Q>>>) -> Result<Self, ChannelError> {
        validate(users, &receivers)?;
        Ok(Self {
            users,
            receivers: receivers.into_iter().map(dedup_states).collect(),
        })
    }

    /// Builds a single-state channel from a `K x K` matrix (row = receiver).
    pub fn regular(matrix: Vec<Vec<Q>>) -> Result<Self, ChannelError> {
        let users = matrix.len();
        Self::new(users, matrix.into_iter().map(|row| alloc::vec![row]).collect())
    }

    pub fn user_count(&self) -> usize {
        self.users
    }

    pub fn states(&self, receiver: usize) -> &[Vec<Q>] {
        &self.receivers[receiver]
    }

    pub fn state_count(&self, receiver: usize) -> usize {
        self.receivers[receiver].len()
    }

    pub fn total_states(&self) -> usize {
        self.receivers.iter().map(Vec::len).sum()
    }

    pub fn receivers(&self) -> &[Vec<Vec<Q>>] {
        &self.receivers
    }

    pub fn is_regular(&self) -> bool {
        self.receivers.iter().all(|s| s.len() == 1)
    }

    /// `α_kj^{[l]}`.
    pub fn level(&self, receiver: usize, state: usize, transmitter: usize) -> &Q {
        &self.receivers[receiver][state][transmitter]
    }

    /// Weakest direct link of `receiver` over its states.
    pub fn min_direct(&self, receiver: usize) -> &Q {
        min_q(self.receivers[receiver].iter().map(|s| &s[receiver])).expect("nonempty state set")
    }

    /// Minimal power-level gain `min_l (α_kk^{[l]} - α_kj^{[l]})` of `receiver`
    /// against `transmitter`.
    pub fn min_gain(&self, receiver: usize, transmitter: usize) -> Q {
        self.receivers[receiver]
            .iter()
            .map(|s| &s[receiver] - &s[transmitter])
            .min()
            .expect("nonempty state set")
    }

    /// Restricts the channel to the listed users (ascending, distinct), keeping
    /// only their mutual links.
    pub fn subnetwork(&self, keep: &[usize]) -> CompoundChannel {
        let receivers = keep
            .iter()
            .map(|&k| {
                let states = self.receivers[k]
                    .iter()
                    .map(|s| keep.iter().map(|&j| s[j].clone()).collect())
                    .collect();
                dedup_states(states)
            })
            .collect();
        CompoundChannel {
            users: keep.len(),
            receivers,
        }
    }

    /// Evaluates the per-state TIN-optimality condition
    /// `α_ii^{[l_i]} >= max_{j≠i} α_ji^{[l_j]} + max_{k≠i} α_ik^{[l_i]}`.
    pub fn tin_optimal(&self) -> TinCheck {
        for i in 0..self.users {
            // strongest interference caused by transmitter i, over every other receiver state
            let mut caused: Option<(&Q, usize, usize)> = None;
            for j in (0..self.users).filter(|&j| j != i) {
                for (lj, s) in self.receivers[j].iter().enumerate() {
                    if caused.is_none_or(|(v, _, _)| &s[i] > v) {
                        caused = Some((&s[i], j, lj));
                    }
                }
            }
            for (li, s) in self.receivers[i].iter().enumerate() {
                let suffered = (0..self.users)
                    .filter(|&k| k != i)
                    .max_by(|&a, &b| s[a].cmp(&s[b]).then(b.cmp(&a)));
                let (Some((caused_level, j, lj)), Some(k)) = (caused, suffered) else {
                    continue;
                };
                if s[i] < caused_level + &s[k] {
                    return TinCheck::Violated(TinViolation {
                        user: i,
                        state: li,
                        victim: j,
                        victim_state: lj,
                        interferer: k,
                    });
                }
            }
        }
        TinCheck::Optimal
    }

    /// The single-state channel with the same polyhedral TIN region and the
    /// same locally optimal allocations.
    ///
    /// `ᾱ_kk = min_l α_kk^{[l]}` and `ᾱ_kj = ᾱ_kk - min_l (α_kk^{[l]} - α_kj^{[l]})`.
    /// Every entry stays nonnegative: the minimal gain is at most the gain of
    /// the weakest-direct-link state, so `ᾱ_kj` is at least that state's `α_kj`.
    pub fn regular_counterpart(&self) -> RegularChannel {
        let matrix: Vec<Vec<Q>> = (0..self.users)
            .map(|k| {
                let direct = self.min_direct(k).clone();
                (0..self.users)
                    .map(|j| {
                        if j == k {
                            direct.clone()
                        } else {
                            &direct - self.min_gain(k, j)
                        }
                    })
                    .collect()
            })
            .collect();
        debug_assert!(matrix.iter().flatten().all(|v| !v.is_negative()));
        RegularChannel(CompoundChannel {
            users: self.users,
            receivers: matrix.into_iter().map(|row| alloc::vec![row]).collect(),
        })
    }
}

/// Outcome of [`CompoundChannel::tin_optimal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TinCheck {
    Optimal,
    Violated(TinViolation),
}

impl TinCheck {
    pub fn is_optimal(&self) -> bool {
        matches!(self, TinCheck::Optimal)
    }
}

/// A failing instance of the TIN-optimality condition: the direct link of
/// `user` in `state` is weaker than the interference it causes at receiver
/// `victim` (state `victim_state`) plus the interference it suffers from
/// transmitter `interferer`. All indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TinViolation {
    pub user: usize,
    pub state: usize,
    pub victim: usize,
    pub victim_state: usize,
    pub interferer: usize,
}

/// A compound channel with exactly one state per receiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegularChannel(CompoundChannel);

impl RegularChannel {
    pub fn new(matrix: Vec<Vec<Q>>) -> Result<Self, ChannelError> {
        CompoundChannel::regular(matrix).map(RegularChannel)
    }

    /// Wraps a compound channel that already has a single state per receiver.
    pub fn from_compound(channel: CompoundChannel) -> Option<Self> {
        channel.is_regular().then_some(RegularChannel(channel))
    }

    pub fn as_compound(&self) -> &CompoundChannel {
        &self.0
    }

    pub fn into_compound(self) -> CompoundChannel {
        self.0
    }

    pub fn user_count(&self) -> usize {
        self.0.users
    }

    pub fn alpha(&self, receiver: usize, transmitter: usize) -> &Q {
        &self.0.receivers[receiver][0][transmitter]
    }

    pub fn matrix(&self) -> Vec<Vec<Q>> {
        self.0.receivers.iter().map(|s| s[0].clone()).collect()
    }
}

/// A joint finite set of full `K x K` strength matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointStateSet {
    users: usize,
    states: Vec<Vec<Vec<Q>>>,
}

impl JointStateSet {
    pub fn new(users: usize, states: Vec<Vec<Vec<Q>>>) -> Result<Self, ChannelError> {
        if users == 0 {
            return Err(ChannelError::NoUsers);
        }
        if states.is_empty() {
            return Err(ChannelError::EmptyJointSet);
        }
        for (state, m) in states.iter().enumerate() {
            if m.len() != users || m.iter().any(|row| row.len() != users) {
                return Err(ChannelError::JointDimension {
                    state,
                    expected: users,
                });
            }
            for (receiver, row) in m.iter().enumerate() {
                if let Some(transmitter) = row.iter().position(Signed::is_negative) {
                    return Err(ChannelError::NegativeStrength {
                        receiver,
                        state,
                        transmitter,
                    });
                }
            }
        }
        Ok(Self { users, states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Projects each joint matrix onto its rows: receiver `k` keeps every distinct
/// `k`-th row. Since receivers cannot cooperate, this per-receiver model has the
/// same capacity region as the joint one.
pub fn from_joint_set(joint: &JointStateSet) -> CompoundChannel {
    let receivers = (0..joint.users)
        .map(|k| dedup_states(joint.states.iter().map(|m| m[k].clone()).collect()))
        .collect();
    CompoundChannel {
        users: joint.users,
        receivers,
    }
}

/// `K x K` grid of independent per-link value sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntrywiseSets {
    sets: Vec<Vec<Vec<Q>>>,
}

impl EntrywiseSets {
    pub fn new(sets: Vec<Vec<Vec<Q>>>) -> Result<Self, ChannelError> {
        let users = sets.len();
        if users == 0 {
            return Err(ChannelError::NoUsers);
        }
        if sets.iter().any(|row| row.len() != users) {
            return Err(ChannelError::EntrywiseShape);
        }
        for (row, cells) in sets.iter().enumerate() {
            for (col, set) in cells.iter().enumerate() {
                if set.is_empty() {
                    return Err(ChannelError::EmptyEntrySet { row, col });
                }
                if set.iter().any(Signed::is_negative) {
                    return Err(ChannelError::NegativeEntry { row, col });
                }
            }
        }
        Ok(Self { sets })
    }
}

/// Worst case per link: weakest direct link, strongest cross link.
pub fn from_entrywise_sets(sets: &EntrywiseSets) -> RegularChannel {
    let matrix: Vec<Vec<Q>> = sets
        .sets
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, set)| {
                    let pick = if i == j { min_q(set) } else { max_q(set) };
                    pick.cloned().unwrap_or_else(Q::zero)
                })
                .collect()
        })
        .collect();
    RegularChannel::new(matrix).expect("validated entrywise sets")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::q;

    fn row(values: &[&str]) -> Vec<Q> {
        values.iter().map(|v| q(v)).collect()
    }

    #[test]
    fn minimal_channel_is_valid() {
        assert!(CompoundChannel::new(1, vec![vec![row(&["1"])]]).is_ok());
    }

    #[test]
    fn dimension_error_names_the_state() {
        let err = CompoundChannel::new(
            2,
            vec![vec![row(&["1", "0", "0"])], vec![row(&["0", "1"])]],
        )
        .unwrap_err();
        assert_eq!(
            err,
            ChannelError::Dimension {
                receiver: 0,
                state: 0,
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn negative_strength_is_rejected() {
        let err = CompoundChannel::new(2, vec![vec![row(&["-0.5", "0"])], vec![row(&["0", "1"])]])
            .unwrap_err();
        assert_eq!(
            err,
            ChannelError::NegativeStrength {
                receiver: 0,
                state: 0,
                transmitter: 0
            }
        );
    }

    #[test]
    fn empty_state_set_and_receiver_count() {
        assert_eq!(
            CompoundChannel::new(2, vec![vec![], vec![row(&["0", "1"])]]).unwrap_err(),
            ChannelError::EmptyStateSet { receiver: 0 }
        );
        assert_eq!(
            CompoundChannel::new(2, vec![vec![row(&["0", "1"])]]).unwrap_err(),
            ChannelError::ReceiverCount {
                expected: 2,
                found: 1
            }
        );
        assert_eq!(CompoundChannel::new(0, vec![]).unwrap_err(), ChannelError::NoUsers);
    }

    #[test]
    fn duplicate_states_are_dropped() {
        let ch = CompoundChannel::new(
            2,
            vec![
                vec![row(&["1", "0.5"]), row(&["1", "0.5"]), row(&["0.8", "0.2"])],
                vec![row(&["0.5", "1"])],
            ],
        )
        .unwrap();
        assert_eq!(ch.state_count(0), 2);
    }

    #[test]
    fn tin_condition_examples() {
        assert!(fixtures::symmetric_four_user().tin_optimal().is_optimal());
        assert!(fixtures::two_user_compound().tin_optimal().is_optimal());
        assert!(fixtures::asymmetric_three_user().as_compound().tin_optimal().is_optimal());

        let weak = RegularChannel::new(vec![row(&["1", "0.6"]), row(&["0.6", "1"])]).unwrap();
        match weak.as_compound().tin_optimal() {
            TinCheck::Violated(v) => {
                assert_eq!((v.user, v.state, v.victim, v.victim_state, v.interferer), (0, 0, 1, 0, 1));
            }
            TinCheck::Optimal => panic!("expected violation"),
        }
    }

    #[test]
    fn tin_condition_matches_exhaustive_loop_on_ch_b() {
        // literal quantifier expansion over (i, l_i, j, l_j, k)
        let ch = fixtures::two_user_compound();
        let k_users = ch.user_count();
        let mut holds = true;
        for i in 0..k_users {
            for li in 0..ch.state_count(i) {
                for j in (0..k_users).filter(|&j| j != i) {
                    for lj in 0..ch.state_count(j) {
                        for k in (0..k_users).filter(|&k| k != i) {
                            if ch.level(i, li, i) < &(ch.level(j, lj, i) + ch.level(i, li, k)) {
                                holds = false;
                            }
                        }
                    }
                }
            }
        }
        assert!(holds);
        assert_eq!(ch.tin_optimal().is_optimal(), holds);
    }

    #[test]
    fn counterpart_of_ch_b() {
        let bar = fixtures::two_user_compound().regular_counterpart();
        assert_eq!(bar.matrix(), vec![row(&["0.8", "0.3"]), row(&["0.5", "1"])]);
    }

    #[test]
    fn counterpart_mixes_states() {
        let ch = CompoundChannel::new(
            2,
            vec![vec![row(&["2", "1"]), row(&["1.5", "0.2"])], vec![row(&["0", "1"])]],
        )
        .unwrap();
        let bar = ch.regular_counterpart();
        assert_eq!(bar.alpha(0, 0), &q("1.5"));
        assert_eq!(bar.alpha(0, 1), &q("0.5"));
    }

    #[test]
    fn counterpart_of_regular_is_identity() {
        let a = fixtures::asymmetric_three_user();
        assert_eq!(a.as_compound().regular_counterpart(), a);
    }

    #[test]
    fn joint_set_projection() {
        let joint = JointStateSet::new(
            2,
            vec![
                vec![row(&["1", "0.2"]), row(&["0.3", "1"])],
                vec![row(&["0.9", "0.1"]), row(&["0.4", "1.1"])],
            ],
        )
        .unwrap();
        let ch = from_joint_set(&joint);
        assert_eq!((ch.state_count(0), ch.state_count(1)), (2, 2));
        assert_eq!(ch.states(1)[1], row(&["0.4", "1.1"]));

        let single = JointStateSet::new(1, vec![vec![row(&["2"])]]).unwrap();
        assert!(from_joint_set(&single).is_regular());

        let shared_row = JointStateSet::new(
            2,
            vec![
                vec![row(&["1", "0.2"]), row(&["0.3", "1"])],
                vec![row(&["0.9", "0.1"]), row(&["0.3", "1"])],
            ],
        )
        .unwrap();
        let ch = from_joint_set(&shared_row);
        assert_eq!((ch.state_count(0), ch.state_count(1)), (2, 1));
    }

    #[test]
    fn entrywise_worst_case() {
        let sets = EntrywiseSets::new(vec![
            vec![row(&["1", "2"]), row(&["0.1", "0.5"])],
            vec![row(&["0.3"]), row(&["1"])],
        ])
        .unwrap();
        assert_eq!(
            from_entrywise_sets(&sets).matrix(),
            vec![row(&["1", "0.5"]), row(&["0.3", "1"])]
        );

        let singletons = EntrywiseSets::new(vec![
            vec![row(&["1"]), row(&["0.4"])],
            vec![row(&["0.3"]), row(&["2"])],
        ])
        .unwrap();
        assert_eq!(
            from_entrywise_sets(&singletons).matrix(),
            vec![row(&["1", "0.4"]), row(&["0.3", "2"])]
        );

        let grid = (0..3)
            .map(|i| (0..3).map(|j| if i == j { row(&["2"]) } else { row(&["0", "1"]) }).collect())
            .collect();
        let m = from_entrywise_sets(&EntrywiseSets::new(grid).unwrap()).matrix();
        for (i, r) in m.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                assert_eq!(v, &q(if i == j { "2" } else { "1" }));
            }
        }
    }

    #[test]
    fn entrywise_rejects_empty_cells() {
        assert_eq!(
            EntrywiseSets::new(vec![vec![vec![]]]).unwrap_err(),
            ChannelError::EmptyEntrySet { row: 0, col: 0 }
        );
    }
}
