//! Compact connected surfaces up to homeomorphism.

use std::collections::BTreeSet;
use std::fmt;

/// Homeomorphism type of a compact connected surface with labelled boundary.
///
/// `genus` is the orientable genus, or the cross-cap count when the surface is
/// non-orientable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurfaceDescriptor {
    pub orientable: bool,
    pub genus: u32,
    pub boundary: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("non-orientable surface needs at least one cross-cap")]
    NoCrossCap,
    #[error("duplicate boundary label {0:?}")]
    DuplicateLabel(String),
}

impl SurfaceDescriptor {
    pub fn new(orientable: bool, genus: u32, boundary: Vec<String>) -> Result<Self, SurfaceError> {
        let s = Self { orientable, genus, boundary };
        s.check()?;
        Ok(s)
    }

    pub fn orientable(genus: u32) -> Self {
        Self { orientable: true, genus, boundary: Vec::new() }
    }

    pub fn nonorientable(crosscaps: u32) -> Self {
        Self { orientable: false, genus: crosscaps, boundary: Vec::new() }
    }

    pub fn with_boundary<I, S>(mut self, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.boundary = labels.into_iter().map(Into::into).collect();
        self
    }

    pub fn check(&self) -> Result<(), SurfaceError> {
        if !self.orientable && self.genus == 0 {
            return Err(SurfaceError::NoCrossCap);
        }
        let mut seen = BTreeSet::new();
        for l in &self.boundary {
            if !seen.insert(l) {
                return Err(SurfaceError::DuplicateLabel(l.clone()));
            }
        }
        Ok(())
    }

    pub fn boundary_count(&self) -> u32 {
        self.boundary.len() as u32
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(self)
    }

    pub fn h1_free_rank(&self) -> usize {
        h1_free_rank(self)
    }

    /// Same surface with the boundary label set compared as a set.
    pub fn same_marked_surface(&self, other: &Self) -> bool {
        let a: BTreeSet<_> = self.boundary.iter().collect();
        let b: BTreeSet<_> = other.boundary.iter().collect();
        self.orientable == other.orientable && self.genus == other.genus && a == b
    }
}

impl fmt::Display for SurfaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orientable {
            write!(f, "orientable genus {}", self.genus)?;
        } else {
            write!(f, "non-orientable with {} cross-caps", self.genus)?;
        }
        write!(f, ", {} boundary components", self.boundary.len())
    }
}

pub fn euler_characteristic(s: &SurfaceDescriptor) -> i64 {
    let b = s.boundary.len() as i64;
    let g = s.genus as i64;
    if s.orientable {
        2 - 2 * g - b
    } else {
        2 - g - b
    }
}

/// Rank of the free part of `H_1(S; Z)`.
pub fn h1_free_rank(s: &SurfaceDescriptor) -> usize {
    let b = s.boundary.len();
    let g = s.genus as usize;
    match (s.orientable, b) {
        (true, 0) => 2 * g,
        (true, _) => 2 * g + b - 1,
        (false, 0) => g - 1,
        (false, _) => g + b - 1,
    }
}

/// The role of each slot of a winding vector in the fixed surface basis.
///
/// Orientable: `a_1, b_1, ..., a_g, b_g` followed by loops around the first
/// `b - 1` boundary circles. Non-orientable: the cross-cap cores `c_1, ...`
/// (all `k` of them when there is boundary, `k - 1` when closed) followed by
/// the first `b - 1` boundary loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSlot {
    HandleA(u32),
    HandleB(u32),
    CrossCap(u32),
    BoundaryLoop(u32),
}

pub fn basis_slots(s: &SurfaceDescriptor) -> Vec<BasisSlot> {
    let b = s.boundary.len() as u32;
    let mut out = Vec::new();
    if s.orientable {
        for i in 0..s.genus {
            out.push(BasisSlot::HandleA(i));
            out.push(BasisSlot::HandleB(i));
        }
    } else {
        let caps = if b == 0 { s.genus - 1 } else { s.genus };
        out.extend((0..caps).map(BasisSlot::CrossCap));
    }
    out.extend((0..b.saturating_sub(1)).map(BasisSlot::BoundaryLoop));
    debug_assert_eq!(out.len(), h1_free_rank(s));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_examples() {
        assert_eq!(SurfaceDescriptor::orientable(0).euler_characteristic(), 2);
        assert_eq!(SurfaceDescriptor::nonorientable(2).euler_characteristic(), 0);
        let s = SurfaceDescriptor::orientable(2).with_boundary(["a", "b", "c"]);
        assert_eq!(s.euler_characteristic(), -5);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(SurfaceDescriptor::orientable(1).h1_free_rank(), 2);
        assert_eq!(SurfaceDescriptor::orientable(0).with_boundary(["A", "B"]).h1_free_rank(), 1);
        assert_eq!(SurfaceDescriptor::nonorientable(1).h1_free_rank(), 0);
    }

    #[test]
    fn rank_against_euler_characteristic() {
        for orientable in [true, false] {
            for g in 0..=5u32 {
                if !orientable && g == 0 {
                    continue;
                }
                for b in 0..=5 {
                    let s = SurfaceDescriptor::new(orientable, g, (0..b).map(|i| format!("B{i}")).collect())
                        .unwrap();
                    let chi = s.euler_characteristic();
                    let expected = if orientable && b == 0 { 2 - chi } else { 1 - chi };
                    assert_eq!(s.h1_free_rank() as i64, expected, "{s}");
                    assert_eq!(basis_slots(&s).len(), s.h1_free_rank());
                }
            }
        }
    }

    #[test]
    fn relabelling_keeps_euler() {
        let a = SurfaceDescriptor::orientable(1).with_boundary(["x", "y"]);
        let b = SurfaceDescriptor::orientable(1).with_boundary(["y", "z"]);
        assert_eq!(a.euler_characteristic(), b.euler_characteristic());
        assert!(a.same_marked_surface(&SurfaceDescriptor::orientable(1).with_boundary(["y", "x"])));
    }

    #[test]
    fn invalid_descriptors() {
        assert_eq!(SurfaceDescriptor::new(false, 0, vec![]), Err(SurfaceError::NoCrossCap));
        assert!(matches!(
            SurfaceDescriptor::new(true, 0, vec!["A".into(), "A".into()]),
            Err(SurfaceError::DuplicateLabel(_))
        ));
    }
}
