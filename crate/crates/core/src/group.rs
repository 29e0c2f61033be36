//! Cyclic p-groups `C_{p^n}` and their subgroup chain.
//!
//! A subgroup is identified with its level `h`, meaning `C_{p^h}`. Group
//! elements are exponents of the fixed generator `γ`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest group order accepted by [`GroupCtx::new`].
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupCtx {
    p: u64,
    n: u32,
}

/// A subgroup `C_{p^h}` of the ambient cyclic group, stored by level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Level(pub usize);

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GroupCtx {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        match p.checked_pow(n) {
            Some(o) if o <= MAX_ORDER => Ok(GroupCtx { p, n }),
            _ => Err(Error::Overflow { p, n }),
        }
    }

    /// The trivial group, viewed as `C_{p^0}`.
    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, 0)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.p.pow(self.n) as usize
    }

    pub fn top(&self) -> Level {
        Level(self.n as usize)
    }

    /// All subgroup levels `0..=n`.
    pub fn levels(&self) -> impl Iterator<Item = Level> {
        (0..=self.n as usize).map(Level)
    }

    pub fn check(&self, l: Level) -> Result<Level> {
        if l.0 > self.n as usize {
            Err(Error::BadLevel(l.0))
        } else {
            Ok(l)
        }
    }

    pub fn pow(&self, e: usize) -> usize {
        (self.p as usize).pow(e as u32)
    }

    /// Order of the subgroup at level `l`.
    pub fn subgroup_order(&self, l: Level) -> usize {
        self.pow(l.0)
    }

    /// `|G/K|` for the subgroup at level `l`.
    pub fn index(&self, l: Level) -> usize {
        self.pow(self.n as usize - l.0)
    }

    /// `|W_K(H)| = |K/H|`.
    pub fn weyl_order(&self, k: Level, h: Level) -> Result<usize> {
        self.check(k)?;
        self.check(h)?;
        if h > k {
            return Err(Error::NotSubgroup { lower: h.0, upper: k.0 });
        }
        Ok(self.pow(k.0 - h.0))
    }

    /// Levels strictly between `h` and `k`, ascending.
    pub fn subgroups_between(&self, h: Level, k: Level) -> Result<Vec<Level>> {
        self.weyl_order(k, h)?;
        Ok((h.0 + 1..k.0).map(Level).collect())
    }

    /// The same prime with a smaller exponent: the subgroup at level `l` as a group in its own right.
    pub fn subgroup_ctx(&self, l: Level) -> Result<GroupCtx> {
        self.check(l)?;
        Ok(GroupCtx { p: self.p, n: l.0 as u32 })
    }
}

impl std::fmt::Display for GroupCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "C_{}", self.order())
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L{}", self.0)
    }
}
