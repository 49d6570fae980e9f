//! Exact rational values used for angles, displacements and levels.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Q = Ratio<i128>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n as i128, d as i128)
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

/// `floor` as an integer.
pub fn floor_i(x: Q) -> i64 {
    x.floor().to_integer() as i64
}

/// Displacement of an edge from `tail` to `head` angle: the representative of
/// `head - tail` in `(0, 1]`.
pub fn displacement(tail: Q, head: Q) -> Q {
    let d = frac(head - tail);
    if d.is_zero() {
        Q::one()
    } else {
        d
    }
}

/// Lift of `angle` into `[base, base + 1)`.
pub fn lift_from(base: Q, angle: Q) -> Q {
    base + frac(angle - base)
}

pub fn is_unit_interval(x: Q) -> bool {
    !x.is_negative() && x < Q::one()
}

/// Canonical `p/q` rendering (lowest terms, positive denominator).
pub struct Canon(pub Q);

impl fmt::Display for Canon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("expected a rational of the form p/q")]
    Shape,
    #[error("invalid integer in rational")]
    Int,
    #[error("denominator must be positive")]
    Denominator,
    #[error("rational {0}/{1} is not in lowest terms")]
    NotLowest(i128, i128),
}

/// Strict parser: only the canonical `p/q` form is accepted.
pub fn parse_canonical(s: &str) -> Result<Q, RationalError> {
    let (n, d) = s.split_once('/').ok_or(RationalError::Shape)?;
    let (ns, ds) = (n, d);
    let n: i128 = n.parse().map_err(|_| RationalError::Int)?;
    let d: i128 = d.parse().map_err(|_| RationalError::Int)?;
    if n.to_string() != ns || d.to_string() != ds {
        return Err(RationalError::Int);
    }
    if d <= 0 {
        return Err(RationalError::Denominator);
    }
    if n.gcd(&d) != 1 {
        return Err(RationalError::NotLowest(n, d));
    }
    Ok(Q::new_raw(n, d))
}
