use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{render, Q};

/// A per-user GDoF vector `d` with every entry nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GdofTuple(Vec<Q>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GdofError {
    #[error("GDoF of user {} is negative", .user + 1)]
    Negative { user: usize },
    #[error("GDoF tuple has {found} entries, channel has {expected} users")]
    Dimension { expected: usize, found: usize },
}

impl GdofTuple {
    pub fn new(values: Vec<Q>) -> Result<Self, GdofError> {
        if let Some(user) = values.iter().position(Signed::is_negative) {
            return Err(GdofError::Negative { user });
        }
        Ok(Self(values))
    }

    pub fn zeros(users: usize) -> Self {
        Self(alloc::vec![Q::zero(); users])
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

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &GdofTuple) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub(crate) fn check_users(&self, users: usize) -> Result<(), GdofError> {
        if self.0.len() != users {
            return Err(GdofError::Dimension {
                expected: users,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

impl core::ops::Index<usize> for GdofTuple {
    type Output = Q;

    fn index(&self, index: usize) -> &Q {
        &self.0[index]
    }
}

impl fmt::Display for GdofTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

pub(crate) fn write_tuple(f: &mut fmt::Formatter<'_>, values: &[Q]) -> fmt::Result {
    f.write_str("(")?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(&render(v))?;
    }
    f.write_str(")")
}
