//! Reference channels used by the test suites, the CLI examples and the docs.

use alloc::vec::Vec;

use crate::channel::{CompoundChannel, RegularChannel};
use crate::rational::{q, Q};

fn matrix(rows: &[&[&str]]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|v| q(v)).collect()).collect()
}

/// Fully symmetric 4-user channel: direct links 2, cross links 1.
pub fn symmetric_four_user() -> CompoundChannel {
    let rows: Vec<Vec<&str>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { "2" } else { "1" }).collect())
        .collect();
    let rows: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
    CompoundChannel::regular(matrix(&rows)).expect("valid fixture")
}

/// Asymmetric TIN-optimal 3-user channel where each receiver's stronger
/// interfering link is twice the weaker one. Its polyhedral region is
/// `d1<=2, d2<=2, d3<=1, d1+d2<=2, d2+d3<=2.2, d1+d3<=2.2, d1+d2+d3<=3.2`.
pub fn asymmetric_three_user() -> RegularChannel {
    RegularChannel::new(matrix(&[
        &["2", "0.8", "0.4"],
        &["1.2", "2", "0.6"],
        &["0.4", "0.2", "1"],
    ]))
    .expect("valid fixture")
}

/// 2-user compound channel with two states at receiver 1 and one at receiver 2.
pub fn two_user_compound() -> CompoundChannel {
    CompoundChannel::new(
        2,
        alloc::vec![
            matrix(&[&["1", "0.5"], &["0.8", "0.2"]]),
            matrix(&[&["0.5", "1"]]),
        ],
    )
    .expect("valid fixture")
}

/// 3-user channel on which globally optimal power control for the target
/// `(0.5, 0.6, 0.7)` takes three updates, ending at `(-1.2, -0.4, -0.7)`.
pub fn three_user_walkthrough() -> RegularChannel {
    RegularChannel::new(matrix(&[
        &["2", "0.4", "1"],
        &["0.5", "1", "0.5"],
        &["0.4", "0.5", "1.5"],
    ]))
    .expect("valid fixture")
}

/// Compound channel that violates the TIN-optimality condition although its
/// regular counterpart `[[2, 1], [1, 2]]` satisfies it.
pub fn counterpart_only_tin_optimal() -> CompoundChannel {
    CompoundChannel::new(
        2,
        alloc::vec![
            matrix(&[&["2", "1"], &["3", "2"]]),
            matrix(&[&["1", "2"]]),
        ],
    )
    .expect("valid fixture")
}
