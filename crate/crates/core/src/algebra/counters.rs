use core::fmt;
use core::ops::{Add, Sub};

/// Operation tallies in the categories of the efficiency comparison:
/// hashes, scalar multiplications, target-group exponentiations, pairings
/// and inversions.
///
/// One counter session is one `OpCounters` value owned by the caller and
/// passed by `&mut` into every counted operation. Group additions and
/// `Z_q` multiplications are not counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpCounters {
    pub hashes: u64,
    pub scalar_mults: u64,
    pub exponentiations: u64,
    pub pairings: u64,
    pub inversions: u64,
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }

    /// Literal tally in `H, M, E, P, I` order.
    pub const fn tally(
        hashes: u64,
        scalar_mults: u64,
        exponentiations: u64,
        pairings: u64,
        inversions: u64,
    ) -> Self {
        Self {
            hashes,
            scalar_mults,
            exponentiations,
            pairings,
            inversions,
        }
    }

    pub fn snapshot(&self) -> OpCounters {
        *self
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

impl Add for OpCounters {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            hashes: self.hashes + rhs.hashes,
            scalar_mults: self.scalar_mults + rhs.scalar_mults,
            exponentiations: self.exponentiations + rhs.exponentiations,
            pairings: self.pairings + rhs.pairings,
            inversions: self.inversions + rhs.inversions,
        }
    }
}

/// Difference of two snapshots taken from the same session (later − earlier).
impl Sub for OpCounters {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self {
            hashes: self.hashes - rhs.hashes,
            scalar_mults: self.scalar_mults - rhs.scalar_mults,
            exponentiations: self.exponentiations - rhs.exponentiations,
            pairings: self.pairings - rhs.pairings,
            inversions: self.inversions - rhs.inversions,
        }
    }
}

/// Renders as `7H+7M+3E+9P` (plus `+nI` when inversions occurred).
impl fmt::Display for OpCounters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}H+{}M+{}E+{}P",
            self.hashes, self.scalar_mults, self.exponentiations, self.pairings
        )?;
        if self.inversions > 0 {
            write!(f, "+{}I", self.inversions)?;
        }
        Ok(())
    }
}
