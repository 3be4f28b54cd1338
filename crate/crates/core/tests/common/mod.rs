//! Random channels and targets on a 0.1 grid, shared by the integration suites.

#![allow(dead_code)]

use compound_tin::graph::{build_full, shortest_paths};
use compound_tin::power::PowerExponents;
use compound_tin::{CompoundChannel, GdofTuple, Q};
use rand::Rng;

pub fn tenths(n: i64) -> Q {
    Q::new(n.into(), 10.into())
}

pub fn to_tenths(v: &Q) -> i64 {
    let scaled = v * Q::from_integer(10.into());
    assert!(scaled.is_integer(), "{v} is off the 0.1 grid");
    scaled.to_integer().try_into().expect("small value")
}

pub struct Shape {
    pub max_users: usize,
    pub max_states: usize,
    /// Direct links are drawn from this range, in tenths.
    pub direct: (i64, i64),
    /// Cross links are drawn from this range, in tenths.
    pub cross: (i64, i64),
}

pub const DEFAULT_SHAPE: Shape = Shape {
    max_users: 4,
    max_states: 3,
    direct: (5, 30),
    cross: (0, 20),
};

pub fn random_channel(rng: &mut impl Rng, shape: &Shape) -> CompoundChannel {
    let users = rng.gen_range(1..=shape.max_users);
    let receivers = (0..users)
        .map(|k| {
            let states = rng.gen_range(1..=shape.max_states);
            (0..states)
                .map(|_| {
                    (0..users)
                        .map(|j| {
                            let (lo, hi) = if j == k { shape.direct } else { shape.cross };
                            tenths(rng.gen_range(lo..=hi))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    CompoundChannel::new(users, receivers).expect("generated channel is valid")
}

/// Random target with `d_k` at most the weakest direct link of user `k`;
/// entries may be zero unless `positive`.
pub fn random_target(rng: &mut impl Rng, channel: &CompoundChannel, positive: bool) -> GdofTuple {
    let values = (0..channel.user_count())
        .map(|k| {
            let cap = to_tenths(channel.min_direct(k)).max(1);
            let cap = if rng.gen_bool(0.5) { (cap / 2).max(1) } else { cap };
            tenths(rng.gen_range(i64::from(positive)..=cap))
        })
        .collect();
    GdofTuple::new(values).unwrap()
}

pub fn is_feasible(channel: &CompoundChannel, d: &GdofTuple) -> bool {
    shortest_paths(&build_full(channel, d).unwrap()).is_feasible()
}

/// Random target lowered step by step on the 0.1 grid until it is feasible;
/// `None` if even the smallest positive grid target is not.
pub fn random_feasible_target(rng: &mut impl Rng, channel: &CompoundChannel, positive: bool) -> Option<GdofTuple> {
    let floor = i64::from(positive);
    let mut d: Vec<i64> = random_target(rng, channel, positive).values().iter().map(to_tenths).collect();
    loop {
        let tuple = GdofTuple::new(d.iter().map(|&v| tenths(v)).collect()).unwrap();
        if is_feasible(channel, &tuple) {
            return Some(tuple);
        }
        let lowerable: Vec<usize> = (0..d.len()).filter(|&k| d[k] > floor).collect();
        if lowerable.is_empty() {
            return None;
        }
        d[lowerable[rng.gen_range(0..lowerable.len())]] -= 1;
    }
}

/// Random exponents on the 0.1 grid in `[-3, 0]`.
pub fn random_exponents(rng: &mut impl Rng, users: usize) -> PowerExponents {
    PowerExponents::new((0..users).map(|_| tenths(-rng.gen_range(0..=30))).collect()).unwrap()
}

/// Every grid allocation `r` in `[floor, 0]^K` (tenths) whose polyhedral GDoF,
/// evaluated in integers, reaches `d` for every state.
pub fn grid_polyhedral_witness(channel: &CompoundChannel, d: &GdofTuple, floor: i64) -> Option<Vec<i64>> {
    let users = channel.user_count();
    let alpha: Vec<Vec<Vec<i64>>> = channel
        .receivers()
        .iter()
        .map(|states| states.iter().map(|s| s.iter().map(to_tenths).collect()).collect())
        .collect();
    let d: Vec<i64> = d.values().iter().map(to_tenths).collect();
    let mut r = vec![0i64; users];
    loop {
        let ok = (0..users).all(|k| {
            alpha[k].iter().all(|s| {
                let worst = (0..users).filter(|&j| j != k).map(|j| s[j] + r[j]).fold(0, i64::max);
                s[k] + r[k] - worst >= d[k]
            })
        });
        if ok {
            return Some(r);
        }
        let k = (0..users).find(|&k| r[k] > floor)?;
        r[k] -= 1;
        for slot in &mut r[..k] {
            *slot = 0;
        }
    }
}
