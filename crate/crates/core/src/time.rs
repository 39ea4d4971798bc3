use std::fmt;

/// Largest finite time label or traversal time accepted on input.
///
/// Leaves headroom so that `t + lambda + delta` never overflows a `u64`
/// for any accepted arc and delay.
pub const MAX_TIME: u64 = 1 << 60;

/// A point in time extended with `Infinite`.
///
/// `Infinite` is absorbing: adding to it or taking it as an argument of a
/// max yields `Infinite`. The derived ordering places every finite time
/// below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Time {
    Finite(u64),
    Infinite,
}

impl Time {
    pub const ZERO: Time = Time::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Time::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Time::Finite(t) => Some(t),
            Time::Infinite => None,
        }
    }

    /// `self + d`, with `Infinite + d = Infinite`.
    ///
    /// Panics if a finite sum would overflow; inputs are bounded by
    /// [`MAX_TIME`] so this only triggers on a broken invariant.
    pub fn plus(self, d: u64) -> Time {
        match self {
            Time::Finite(t) => Time::Finite(t.checked_add(d).expect("time overflow")),
            Time::Infinite => Time::Infinite,
        }
    }
}

impl From<u64> for Time {
    fn from(t: u64) -> Self {
        Time::Finite(t)
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Time::Finite(t) => write!(f, "{t}"),
            Time::Infinite => f.write_str("inf"),
        }
    }
}
