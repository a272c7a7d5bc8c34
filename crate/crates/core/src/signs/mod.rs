//! Sign assignments on empty rectangles.
//!
//! A sign assignment is *true* when it satisfies the square, vertical-annulus
//! and horizontal-annulus relations with targets `-1`, `-1`, `+1`, and *false*
//! when the two annulus targets are swapped. True assignments form a single
//! orbit under gauge transformations `f(sigma) f(tau)`, and twisting by the
//! permutation sign of the starting state exchanges the two families.

mod constraints;
mod file;
mod gauge;
mod solve;
mod verify;

use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::RectCatalog;
use crate::rect::EmptyRect;

pub use constraints::{build_constraints, Constraint, ConstraintKind, ConstraintSystem};
pub use file::{RectEntry, SignFile};
pub use gauge::{
    gauge_apply, gauge_difference, twist, GaugeFunction, OrientationCorrespondence,
    OrientationSystem,
};
pub use solve::{count_solutions, enumerate_solutions, solve_signs, SolutionCount, MAX_ENUMERATE_N};
pub use verify::{verify_axioms, VerificationReport, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// GF(2) encoding: sign = (-1)^bit.
    #[inline]
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    #[inline]
    pub fn bit(self) -> bool {
        self == Sign::Minus
    }

    #[inline]
    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    #[inline]
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit(self.bit() != rhs.bit())
    }
}

impl Neg for Sign {
    type Output = Sign;

    #[inline]
    fn neg(self) -> Sign {
        Sign::from_bit(!self.bit())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    True,
    False,
}

impl Convention {
    pub fn flipped(self) -> Self {
        match self {
            Convention::True => Convention::False,
            Convention::False => Convention::True,
        }
    }

    /// Required product of the two signs around a thin vertical annulus.
    pub fn vertical_target(self) -> Sign {
        match self {
            Convention::True => Sign::Minus,
            Convention::False => Sign::Plus,
        }
    }

    /// Required product around a thin horizontal annulus.
    pub fn horizontal_target(self) -> Sign {
        -self.vertical_target()
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::True => "true",
            Convention::False => "false",
        })
    }
}

impl std::str::FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "true" => Ok(Convention::True),
            "false" => Ok(Convention::False),
            other => Err(format!("unknown convention {other:?}")),
        }
    }
}

/// A total map from the empty rectangles of a catalog to signs, aligned with
/// the catalog's rectangle indices.
#[derive(Clone, Debug)]
pub struct SignAssignment {
    catalog: Arc<RectCatalog>,
    values: Vec<Sign>,
    convention: Convention,
}

impl SignAssignment {
    pub fn new(catalog: Arc<RectCatalog>, values: Vec<Sign>, convention: Convention) -> Self {
        assert_eq!(catalog.len(), values.len(), "sign assignment must be total");
        SignAssignment {
            catalog,
            values,
            convention,
        }
    }

    pub fn constant(catalog: Arc<RectCatalog>, sign: Sign, convention: Convention) -> Self {
        let values = vec![sign; catalog.len()];
        Self::new(catalog, values, convention)
    }

    pub fn n(&self) -> usize {
        self.catalog.n()
    }

    pub fn catalog(&self) -> &Arc<RectCatalog> {
        &self.catalog
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn values(&self) -> &[Sign] {
        &self.values
    }

    #[inline]
    pub fn sign_at(&self, index: usize) -> Sign {
        self.values[index]
    }

    pub fn sign(&self, r: &EmptyRect) -> Option<Sign> {
        self.catalog.rect_index(r).map(|i| self.values[i])
    }

    pub fn with_flipped(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.values[index] = -out.values[index];
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EmptyRect, Sign)> + '_ {
        self.catalog.rects().iter().zip(self.values.iter().copied())
    }
}

impl PartialEq for SignAssignment {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n()
            && self.convention == other.convention
            && self.values == other.values
    }
}

impl Eq for SignAssignment {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_algebra() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(-Sign::Plus, Sign::Minus);
        assert_eq!(Sign::from_i64(-1), Some(Sign::Minus));
        assert_eq!(Sign::from_i64(0), None);
        assert_eq!(Sign::from_bit(true).to_i64(), -1);
    }

    #[test]
    fn convention_targets() {
        assert_eq!(Convention::True.vertical_target(), Sign::Minus);
        assert_eq!(Convention::True.horizontal_target(), Sign::Plus);
        assert_eq!(Convention::False.vertical_target(), Sign::Plus);
        assert_eq!(Convention::False.horizontal_target(), Sign::Minus);
        assert_eq!("false".parse::<Convention>(), Ok(Convention::False));
    }
}
