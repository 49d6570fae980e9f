use num_traits::One;

use crate::rational::{floor_i, frac, Q};

/// Orientation-preserving degree-one piecewise-linear map of the circle,
/// given by its breakpoints `x_i -> y_i` on a lift. The `x_i` lie in `[0, 1)`
/// and increase; the `y_i` increase and span less than one turn.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircleMap {
    pub points: Vec<(Q, Q)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircleMapError {
    #[error("circle map needs at least one breakpoint")]
    Empty,
    #[error("breakpoint sources must increase inside [0, 1)")]
    Sources,
    #[error("breakpoint targets must increase and span less than one turn")]
    Targets,
}

impl CircleMap {
    pub fn rotation(by: Q) -> Self {
        Self { points: vec![(Q::from(0), by)] }
    }

    pub fn new(points: Vec<(Q, Q)>) -> Result<Self, CircleMapError> {
        let m = Self { points };
        m.check()?;
        Ok(m)
    }

    pub fn check(&self) -> Result<(), CircleMapError> {
        let p = &self.points;
        if p.is_empty() {
            return Err(CircleMapError::Empty);
        }
        if p.iter().any(|(x, _)| *x < Q::from(0) || *x >= Q::one()) || p.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(CircleMapError::Sources);
        }
        if p.windows(2).any(|w| w[0].1 >= w[1].1) || p[p.len() - 1].1 >= p[0].1 + Q::one() {
            return Err(CircleMapError::Targets);
        }
        Ok(())
    }

    /// Value of the lift at any real `x`.
    pub fn lift(&self, x: Q) -> Q {
        let p = &self.points;
        let n = floor_i(x);
        let r = x - Q::from(n as i128);
        let m = p.len();
        let ((x0, y0), (x1, y1)) = if m == 1 {
            return x + (p[0].1 - p[0].0);
        } else if r < p[0].0 {
            ((p[m - 1].0 - Q::one(), p[m - 1].1 - Q::one()), p[0])
        } else if r >= p[m - 1].0 {
            (p[m - 1], (p[0].0 + Q::one(), p[0].1 + Q::one()))
        } else {
            let i = p.iter().rposition(|(xi, _)| *xi <= r).unwrap();
            (p[i], p[i + 1])
        };
        y0 + (y1 - y0) * (r - x0) / (x1 - x0) + Q::from(n as i128)
    }

    pub fn apply(&self, angle: Q) -> Q {
        frac(self.lift(angle))
    }

    /// A map sending each source angle to its target, if the assignment is
    /// well defined and preserves cyclic order.
    pub fn through(pairs: &[(Q, Q)]) -> Option<Self> {
        let mut src: Vec<(Q, Q)> = pairs.iter().map(|&(x, y)| (frac(x), frac(y))).collect();
        src.sort();
        src.dedup();
        if src.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        let mut targets: Vec<Q> = src.iter().map(|p| p.1).collect();
        targets.sort();
        targets.dedup();
        if targets.len() != src.len() {
            return None;
        }
        let mut points = vec![src[0]];
        for i in 1..src.len() {
            let prev = points[i - 1].1;
            let step = frac(src[i].1 - src[i - 1].1);
            points.push((src[i].0, prev + step));
        }
        Self::new(points).ok()
    }
}
