//! Multiplicity arithmetic for direct-power exponents: exact finite
//! counts together with the symbolic infinite cardinals `aleph_k` and the
//! continuum.
//!
//! Comparisons are partial on purpose. `aleph0 < continuum` holds
//! outright, but the order between `continuum` and `aleph_k` for `k >= 1`
//! is independent of ZFC, so [`Cardinal::try_cmp`] and [`Cardinal::add`]
//! refuse to guess and return [`CardinalError::Incomparable`] instead.
//! Everything downstream is continuum-hypothesis-agnostic because of this
//! refusal.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A multiplicity: a finite count, a well-ordered infinite cardinal
/// `aleph_k`, or the continuum.
///
/// `Finite(0)` is representable but never stored by the normalization
/// layer; a factor with multiplicity zero is simply absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cardinal {
    Finite(u64),
    Aleph(u32),
    Continuum,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardinalError {
    #[error("cannot compare {left} with {right}: the order is independent of ZFC")]
    Incomparable { left: Cardinal, right: Cardinal },
    #[error("finite multiplicity overflow: {left} + {right}")]
    FiniteOverflow { left: u64, right: u64 },
}

impl Cardinal {
    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    /// Partial comparison. `Finite` values compare by magnitude and sit
    /// below every infinite cardinal; alephs compare by index; `aleph0`
    /// lies strictly below the continuum. `aleph_k` vs `continuum` for
    /// `k >= 1` is refused.
    pub fn try_cmp(&self, other: &Cardinal) -> Result<Ordering, CardinalError> {
        use Cardinal::*;
        match (*self, *other) {
            (Finite(a), Finite(b)) => Ok(a.cmp(&b)),
            (Finite(_), _) => Ok(Ordering::Less),
            (_, Finite(_)) => Ok(Ordering::Greater),
            (Aleph(j), Aleph(k)) => Ok(j.cmp(&k)),
            (Continuum, Continuum) => Ok(Ordering::Equal),
            (Aleph(0), Continuum) => Ok(Ordering::Less),
            (Continuum, Aleph(0)) => Ok(Ordering::Greater),
            (left, right) => Err(CardinalError::Incomparable { left, right }),
        }
    }

    /// Cardinal sum: exact for finite values, absorption otherwise. The
    /// sum of two infinite cardinals is the larger one, so it fails
    /// exactly where [`Cardinal::try_cmp`] does.
    pub fn add(&self, other: &Cardinal) -> Result<Cardinal, CardinalError> {
        use Cardinal::*;
        match (*self, *other) {
            (Finite(a), Finite(b)) => a
                .checked_add(b)
                .map(Finite)
                .ok_or(CardinalError::FiniteOverflow { left: a, right: b }),
            (Finite(_), inf) | (inf, Finite(_)) => Ok(inf),
            (a, b) => match a.try_cmp(&b)? {
                Ordering::Less => Ok(b),
                _ => Ok(a),
            },
        }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Aleph(k) => write!(f, "aleph{k}"),
            Cardinal::Continuum => write!(f, "continuum"),
        }
    }
}

impl FromStr for Cardinal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "continuum" {
            return Ok(Cardinal::Continuum);
        }
        if let Some(k) = s.strip_prefix("aleph") {
            return k
                .parse::<u32>()
                .map(Cardinal::Aleph)
                .map_err(|_| format!("bad aleph index in {s:?}"));
        }
        s.parse::<u64>()
            .map(Cardinal::Finite)
            .map_err(|_| format!("bad multiplicity {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Cardinal::*;

    #[test]
    fn comparisons() {
        assert_eq!(Finite(3).try_cmp(&Finite(7)), Ok(Ordering::Less));
        assert_eq!(Finite(u64::MAX).try_cmp(&Aleph(0)), Ok(Ordering::Less));
        assert_eq!(Aleph(0).try_cmp(&Aleph(1)), Ok(Ordering::Less));
        assert_eq!(Aleph(0).try_cmp(&Continuum), Ok(Ordering::Less));
        assert_eq!(Continuum.try_cmp(&Finite(9)), Ok(Ordering::Greater));
        assert_eq!(Continuum.try_cmp(&Continuum), Ok(Ordering::Equal));
        assert!(matches!(
            Aleph(1).try_cmp(&Continuum),
            Err(CardinalError::Incomparable { .. })
        ));
        assert!(matches!(
            Continuum.try_cmp(&Aleph(2)),
            Err(CardinalError::Incomparable { .. })
        ));
    }

    #[test]
    fn sums() {
        assert_eq!(Finite(2).add(&Finite(5)), Ok(Finite(7)));
        assert_eq!(Finite(40).add(&Aleph(0)), Ok(Aleph(0)));
        assert_eq!(Aleph(0).add(&Aleph(3)), Ok(Aleph(3)));
        assert_eq!(Aleph(0).add(&Continuum), Ok(Continuum));
        assert_eq!(Continuum.add(&Finite(1)), Ok(Continuum));
        assert!(matches!(
            Aleph(1).add(&Continuum),
            Err(CardinalError::Incomparable { .. })
        ));
        assert!(matches!(
            Finite(u64::MAX).add(&Finite(1)),
            Err(CardinalError::FiniteOverflow { .. })
        ));
    }

    #[test]
    fn equality_is_structural() {
        assert_eq!(Aleph(0), Aleph(0));
        assert_ne!(Aleph(0), Continuum);
        assert_ne!(Aleph(0), Aleph(1));
        assert_ne!(Finite(1), Aleph(0));
    }

    #[test]
    fn rendering_round_trips() {
        for c in [Finite(1), Finite(6), Aleph(0), Aleph(2), Continuum] {
            assert_eq!(c.to_string().parse::<Cardinal>(), Ok(c));
        }
        assert_eq!("aleph0".parse::<Cardinal>(), Ok(Aleph(0)));
        assert!("alephx".parse::<Cardinal>().is_err());
        assert!("omega".parse::<Cardinal>().is_err());
    }
}
