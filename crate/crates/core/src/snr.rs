//! Finite-SNR rates of the TIN scheme.
//!
//! Power exponents are exact; here they are converted to binary64 and every
//! power `P^x` is handled as its base-2 exponent `x log2 P`, so large
//! `α log P` never overflows.

use alloc::string::String;
use alloc::vec::Vec;

use crate::channel::CompoundChannel;
use crate::gdof::GdofTuple;
use crate::power::{achieved_gdof_with_silent, PowerError, PowerExponents, UserPower};
use crate::rational::to_f64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SnrError {
    #[error("nominal power must exceed 1, got {0}")]
    Power(f64),
    #[error("power list must be strictly increasing")]
    NotIncreasing,
    #[error(transparent)]
    Allocation(#[from] PowerError),
}

/// Rates in bits per channel use at one nominal power `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub p: f64,
    pub rates: Vec<f64>,
    pub sum_rate: f64,
    pub min_rate: f64,
    /// `Σ_k P^{r_k}` over transmitting users.
    pub total_power: f64,
    /// `sum_rate / total_power`; NaN when nobody transmits.
    pub efficiency: f64,
}

/// `log2(2^a + 2^b)`.
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log1p(libm::exp2(lo - hi)) / core::f64::consts::LN_2
}

/// `log2(1 + 2^x)` without overflow.
fn log2_one_plus(x: f64) -> f64 {
    if x > 0.0 {
        x + libm::log1p(libm::exp2(-x)) / core::f64::consts::LN_2
    } else {
        libm::log1p(libm::exp2(x)) / core::f64::consts::LN_2
    }
}

fn check_power(p: f64) -> Result<(), SnrError> {
    if p.is_nan() || p <= 1.0 {
        return Err(SnrError::Power(p));
    }
    Ok(())
}

fn report(channel: &CompoundChannel, r: &[Option<f64>], p: f64) -> RateReport {
    let log_p = libm::log2(p);
    let users = channel.user_count();
    let rates: Vec<f64> = (0..users)
        .map(|k| {
            let Some(rk) = r[k] else { return 0.0 };
            channel
                .states(k)
                .iter()
                .map(|s| {
                    let signal = (rk + to_f64(&s[k])) * log_p;
                    let noise_plus_interference = (0..users)
                        .filter(|&j| j != k)
                        .filter_map(|j| r[j].map(|rj| (rj + to_f64(&s[j])) * log_p))
                        .fold(0.0, log2_add);
                    log2_one_plus(signal - noise_plus_interference)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let sum_rate = rates.iter().sum();
    let min_rate = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let total_power: f64 = r.iter().flatten().map(|&rk| libm::exp2(rk * log_p)).sum();
    let efficiency = if total_power > 0.0 {
        sum_rate / total_power
    } else {
        f64::NAN
    };
    RateReport {
        p,
        rates,
        sum_rate,
        min_rate,
        total_power,
        efficiency,
    }
}

fn as_floats(channel: &CompoundChannel, r: &[UserPower]) -> Result<Vec<Option<f64>>, SnrError> {
    // validates shape and sign
    achieved_gdof_with_silent(channel, r)?;
    Ok(r.iter().map(|p| p.exponent().map(to_f64)).collect())
}

/// Worst-state TIN rate of every user at nominal power `p`.
pub fn rates(channel: &CompoundChannel, r: &PowerExponents, p: f64) -> Result<RateReport, SnrError> {
    let r: Vec<UserPower> = r.values().iter().cloned().map(UserPower::Exponent).collect();
    rates_with_silent(channel, &r, p)
}

pub fn rates_with_silent(channel: &CompoundChannel, r: &[UserPower], p: f64) -> Result<RateReport, SnrError> {
    check_power(p)?;
    Ok(report(channel, &as_floats(channel, r)?, p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alloc: String,
    pub report: RateReport,
}

/// Name of the full-power row that [`sweep`] always emits first.
pub const BASELINE: &str = "full";

/// Evaluates each named allocation at every `P` (ascending), preceded by the
/// full-power baseline. Allocations equal to full power are folded into it.
pub fn sweep(
    channel: &CompoundChannel,
    allocations: &[(String, Vec<UserPower>)],
    p_list: &[f64],
) -> Result<Vec<SweepRow>, SnrError> {
    for &p in p_list {
        check_power(p)?;
    }
    let mut ps = p_list.to_vec();
    ps.sort_by(f64::total_cmp);
    ps.dedup();

    let full: Vec<UserPower> = (0..channel.user_count())
        .map(|_| UserPower::Exponent(Default::default()))
        .collect();
    let mut named: Vec<(&str, &[UserPower])> = alloc::vec![(BASELINE, full.as_slice())];
    named.extend(
        allocations
            .iter()
            .filter(|(_, r)| *r != full)
            .map(|(name, r)| (name.as_str(), r.as_slice())),
    );

    let mut rows = Vec::with_capacity(named.len() * ps.len());
    for (name, r) in named {
        let floats = as_floats(channel, r)?;
        for &p in &ps {
            rows.push(SweepRow {
                alloc: String::from(name),
                report: report(channel, &floats, p),
            });
        }
    }
    Ok(rows)
}

/// Normalized rates `R_k / log2 P` along a power list, next to the GDoF they
/// approach.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheck {
    pub p_list: Vec<f64>,
    /// `normalized[k][i]` is user `k` at `p_list[i]`.
    pub normalized: Vec<Vec<f64>>,
    pub limit: GdofTuple,
}

impl LimitCheck {
    /// Largest `|R_k / log2 P - d_k|` at the last power.
    pub fn final_gap(&self) -> f64 {
        self.normalized
            .iter()
            .zip(self.limit.values())
            .map(|(seq, d)| (seq.last().copied().unwrap_or(f64::NAN) - to_f64(d)).abs())
            .fold(0.0, f64::max)
    }
}

pub fn gdof_limit_check(channel: &CompoundChannel, r: &PowerExponents, p_list: &[f64]) -> Result<LimitCheck, SnrError> {
    if p_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SnrError::NotIncreasing);
    }
    let reports = p_list
        .iter()
        .map(|&p| rates(channel, r, p))
        .collect::<Result<Vec<_>, _>>()?;
    let normalized = (0..channel.user_count())
        .map(|k| reports.iter().map(|rep| rep.rates[k] / libm::log2(rep.p)).collect())
        .collect();
    let limit = crate::power::achieved_gdof(channel, r)?;
    Ok(LimitCheck {
        p_list: p_list.to_vec(),
        normalized,
        limit,
    })
}
