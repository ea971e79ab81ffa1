//! Abelian groups of finite exponent, represented by their decomposition
//! into cyclic p-power factors with (possibly infinite) multiplicities.
//!
//! Every abelian group whose element orders are bounded is a direct
//! product, over the primes p dividing its exponent, of components
//!
//! ```text
//! B(p) = C(p^u1)^m1 x C(p^u2)^m2 x ... x C(p^ur)^mr,   u1 > u2 > ... > ur
//! ```
//!
//! with multiplicities `m_i` that are positive integers or infinite
//! cardinals. The decomposition is unique once written in this strictly
//! decreasing normal form, which is the invariant [`BoundedAbelian`]
//! maintains.
//!
//! The relation that matters for wreath-product variety comparison is not
//! isomorphism but the coarser per-prime equivalence of
//! [`PrimaryComponent::compare`]: finite components must be isomorphic,
//! infinite components must agree on everything up to and including the
//! exponent of the first infinite factor, and nothing after the first
//! infinite factor is looked at.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith;
use crate::cardinal::{Cardinal, CardinalError};

/// Which operand of a binary comparison a finding refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Conventional name of the passive group on this side.
    pub fn passive_name(self) -> &'static str {
        match self {
            Side::Left => "B1",
            Side::Right => "B2",
        }
    }

    /// Conventional name of the active group on this side.
    pub fn active_name(self) -> &'static str {
        match self {
            Side::Left => "A1",
            Side::Right => "A2",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// One aggregated cyclic layer `C(p^exp_power)^multiplicity` of a primary
/// component. The prime lives on the enclosing [`PrimaryComponent`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimaryFactor {
    pub exp_power: u32,
    pub multiplicity: Cardinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclic factor exponent power must be at least 1")]
    ZeroExponentPower,
    #[error("a primary component must contain at least one factor")]
    EmptyComponent,
    #[error("component primes differ: {left} vs {right}")]
    PrimeMismatch { left: u64, right: u64 },
    #[error("operation requires finite multiplicities, found {0}")]
    NotFinite(Cardinal),
    #[error(transparent)]
    Cardinal(#[from] CardinalError),
}

/// The p-primary component of an abelian group of finite exponent, in
/// normal form: factors with strictly decreasing `exp_power`, multiplicity
/// at least one, and at least one factor present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryComponent {
    prime: u64,
    factors: Vec<PrimaryFactor>,
}

/// Outcome of [`PrimaryComponent::compare`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentVerdict {
    Equivalent,
    NotEquivalent(ComponentMismatch),
}

/// Why two primary components of the same prime fail to be equivalent.
/// Positions are zero-based indices into the normal-form factor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentMismatch {
    /// One component is finite and the other is not; no further agreement
    /// can rescue this.
    FiniteVsInfinite { finite: Side },
    /// Both are infinite but the first infinite factor appears at
    /// different positions.
    FirstInfinitePosition { left: usize, right: usize },
    /// Both are infinite with the first infinite factor at the same
    /// position, but a finite factor before it differs.
    HeadFactor {
        index: usize,
        left: PrimaryFactor,
        right: PrimaryFactor,
    },
    /// Both are infinite, the finite heads agree, but the first infinite
    /// factors have different exponents.
    FirstInfiniteExponent { left_power: u32, right_power: u32 },
    /// Both components are finite and the factor lists differ; `None`
    /// means the list on that side has already ended.
    FiniteFactor {
        index: usize,
        left: Option<PrimaryFactor>,
        right: Option<PrimaryFactor>,
    },
}

fn render_factor(prime: u64, factor: &PrimaryFactor) -> String {
    let mut s = format!("C({prime}^{})", factor.exp_power);
    if factor.multiplicity != Cardinal::Finite(1) {
        s.push_str(&format!("^{}", factor.multiplicity));
    }
    s
}

fn render_factor_opt(prime: u64, factor: &Option<PrimaryFactor>) -> String {
    match factor {
        Some(f) => render_factor(prime, f),
        None => "nothing".to_string(),
    }
}

impl ComponentMismatch {
    /// Human-readable clause naming the operands B1 and B2, for use in
    /// verdict explanations.
    pub fn describe(&self, prime: u64) -> String {
        match self {
            ComponentMismatch::FiniteVsInfinite { finite } => format!(
                "the {prime}-component of {} is finite but that of {} is infinite",
                finite.passive_name(),
                finite.other().passive_name()
            ),
            ComponentMismatch::FirstInfinitePosition { left, right } => format!(
                "the first infinite factor sits at position {} in B1 but position {} in B2",
                left + 1,
                right + 1
            ),
            ComponentMismatch::HeadFactor { index, left, right } => format!(
                "finite factors before the first infinite one differ at position {}: \
                 {} in B1 vs {} in B2",
                index + 1,
                render_factor(prime, left),
                render_factor(prime, right)
            ),
            ComponentMismatch::FirstInfiniteExponent {
                left_power,
                right_power,
            } => format!(
                "the first infinite factor has exponent {prime}^{left_power} in B1 \
                 but {prime}^{right_power} in B2"
            ),
            ComponentMismatch::FiniteFactor { index, left, right } => format!(
                "the finite {prime}-components differ at position {}: {} in B1 vs {} in B2",
                index + 1,
                render_factor_opt(prime, left),
                render_factor_opt(prime, right)
            ),
        }
    }
}

impl PrimaryComponent {
    /// Builds a component in normal form from raw `(exp_power,
    /// multiplicity)` pairs: equal powers are merged by cardinal addition,
    /// zero multiplicities are dropped, and the result is sorted by
    /// strictly decreasing power.
    pub fn new(
        prime: u64,
        factors: impl IntoIterator<Item = (u32, Cardinal)>,
    ) -> Result<Self, DecompositionError> {
        if !arith::is_prime(prime) {
            return Err(DecompositionError::NotPrime(prime));
        }
        let mut merged: BTreeMap<u32, Cardinal> = BTreeMap::new();
        for (power, multiplicity) in factors {
            if power == 0 {
                return Err(DecompositionError::ZeroExponentPower);
            }
            if multiplicity == Cardinal::Finite(0) {
                continue;
            }
            match merged.entry(power) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(multiplicity);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get().add(&multiplicity)?;
                    e.insert(sum);
                }
            }
        }
        if merged.is_empty() {
            return Err(DecompositionError::EmptyComponent);
        }
        let factors = merged
            .into_iter()
            .rev()
            .map(|(exp_power, multiplicity)| PrimaryFactor {
                exp_power,
                multiplicity,
            })
            .collect();
        Ok(PrimaryComponent { prime, factors })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Factors in normal form, strictly decreasing in `exp_power`.
    pub fn factors(&self) -> &[PrimaryFactor] {
        &self.factors
    }

    /// Largest exponent power `u1`; the component has exponent `p^u1`.
    pub fn top_power(&self) -> u32 {
        self.factors[0].exp_power
    }

    /// Index of the first factor with infinite multiplicity, if any.
    pub fn first_infinite(&self) -> Option<usize> {
        self.factors.iter().position(|f| !f.multiplicity.is_finite())
    }

    pub fn is_finite(&self) -> bool {
        self.first_infinite().is_none()
    }

    /// The equivalence governing wreath-product variety comparison.
    ///
    /// Finite components are equivalent exactly when isomorphic, i.e.
    /// when their normal forms are identical. Infinite components are
    /// equivalent exactly when their finite heads (factors before the
    /// first infinite one) are identical and the first infinite factors
    /// have the same exponent; multiplicities of the first infinite
    /// factors and everything after them are ignored. A finite component
    /// is never equivalent to an infinite one.
    pub fn compare(&self, other: &PrimaryComponent) -> Result<ComponentVerdict, DecompositionError> {
        if self.prime != other.prime {
            return Err(DecompositionError::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        use ComponentMismatch::*;
        use ComponentVerdict::*;
        let verdict = match (self.first_infinite(), other.first_infinite()) {
            (None, None) => {
                let len = self.factors.len().max(other.factors.len());
                let diff = (0..len).find(|&i| {
                    self.factors.get(i) != other.factors.get(i)
                });
                match diff {
                    None => Equivalent,
                    Some(index) => NotEquivalent(FiniteFactor {
                        index,
                        left: self.factors.get(index).copied(),
                        right: other.factors.get(index).copied(),
                    }),
                }
            }
            (Some(_), None) => NotEquivalent(FiniteVsInfinite { finite: Side::Right }),
            (None, Some(_)) => NotEquivalent(FiniteVsInfinite { finite: Side::Left }),
            (Some(k), Some(l)) if k != l => {
                NotEquivalent(FirstInfinitePosition { left: k, right: l })
            }
            (Some(k), Some(_)) => {
                let head_diff = (0..k).find(|&i| self.factors[i] != other.factors[i]);
                if let Some(index) = head_diff {
                    NotEquivalent(HeadFactor {
                        index,
                        left: self.factors[index],
                        right: other.factors[index],
                    })
                } else if self.factors[k].exp_power != other.factors[k].exp_power {
                    NotEquivalent(FirstInfiniteExponent {
                        left_power: self.factors[k].exp_power,
                        right_power: other.factors[k].exp_power,
                    })
                } else {
                    Equivalent
                }
            }
        };
        Ok(verdict)
    }

    pub fn equivalent_to(&self, other: &PrimaryComponent) -> Result<bool, DecompositionError> {
        Ok(self.compare(other)? == ComponentVerdict::Equivalent)
    }
}

impl fmt::Display for PrimaryComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .factors
            .iter()
            .map(|factor| render_factor(self.prime, factor))
            .collect();
        write!(f, "{}", rendered.join(" x "))
    }
}

/// Why two decompositions fail to be equivalent: the least prime at which
/// they disagree, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupMismatch {
    /// Only one side has a non-trivial p-component.
    PresentOnly { prime: u64, side: Side },
    Component {
        prime: u64,
        mismatch: ComponentMismatch,
    },
}

impl GroupMismatch {
    pub fn prime(&self) -> u64 {
        match self {
            GroupMismatch::PresentOnly { prime, .. } => *prime,
            GroupMismatch::Component { prime, .. } => *prime,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupMismatch::PresentOnly { prime, side } => format!(
                "{} has a non-trivial {prime}-component but {} does not",
                side.passive_name(),
                side.other().passive_name()
            ),
            GroupMismatch::Component { prime, mismatch } => mismatch.describe(*prime),
        }
    }
}

/// An abelian group of finite exponent in primary normal form. The
/// trivial group is the empty decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundedAbelian {
    components: BTreeMap<u64, PrimaryComponent>,
}

impl BoundedAbelian {
    /// Builds a decomposition from raw `(prime, exp_power, multiplicity)`
    /// triples. Factors are grouped by prime, merged by equal power via
    /// cardinal addition, sorted by strictly decreasing power, and
    /// zero-multiplicity entries are dropped.
    pub fn normalize(
        raw: impl IntoIterator<Item = (u64, u32, Cardinal)>,
    ) -> Result<Self, DecompositionError> {
        let mut by_prime: BTreeMap<u64, Vec<(u32, Cardinal)>> = BTreeMap::new();
        for (prime, power, multiplicity) in raw {
            if !arith::is_prime(prime) {
                return Err(DecompositionError::NotPrime(prime));
            }
            by_prime.entry(prime).or_default().push((power, multiplicity));
        }
        let mut components = BTreeMap::new();
        for (prime, factors) in by_prime {
            match PrimaryComponent::new(prime, factors) {
                Ok(component) => {
                    components.insert(prime, component);
                }
                // All multiplicities at this prime were zero: no component.
                Err(DecompositionError::EmptyComponent) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(BoundedAbelian { components })
    }

    pub fn trivial() -> Self {
        BoundedAbelian::default()
    }

    /// The cyclic group of order `n` as a decomposition; one factor
    /// `C(p^a)` per prime power in `n`. Panics if `n` is zero.
    pub fn from_integer(n: u64) -> Self {
        assert!(n >= 1, "cyclic group order must be positive");
        let raw: Vec<_> = arith::factorize(n)
            .into_iter()
            .map(|(p, a)| (p, a, Cardinal::Finite(1)))
            .collect();
        BoundedAbelian::normalize(raw).expect("prime factorization yields valid factors")
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    /// True when every multiplicity in the decomposition is finite.
    pub fn is_finite(&self) -> bool {
        self.components.values().all(|c| c.is_finite())
    }

    /// Primary components in ascending prime order.
    pub fn components(&self) -> impl Iterator<Item = &PrimaryComponent> {
        self.components.values()
    }

    /// Primes with a non-trivial component, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.components.keys().copied()
    }

    /// The p-primary component, or `None` if `p` does not divide the
    /// exponent. Rejects non-prime `p`.
    pub fn primary_component(&self, p: u64) -> Result<Option<&PrimaryComponent>, DecompositionError> {
        if !arith::is_prime(p) {
            return Err(DecompositionError::NotPrime(p));
        }
        Ok(self.components.get(&p))
    }

    /// Exponent as `(prime, top power)` pairs in ascending prime order.
    /// This is the overflow-proof form; use it for equality checks.
    pub fn exponent_factored(&self) -> Vec<(u64, u32)> {
        self.components
            .iter()
            .map(|(&p, c)| (p, c.top_power()))
            .collect()
    }

    /// Numeric exponent: the lcm of the orders of all elements. Panics if
    /// the value overflows `u128`; [`Self::exponent_factored`] never does.
    pub fn exponent(&self) -> u128 {
        let mut out: u128 = 1;
        for (p, u) in self.exponent_factored() {
            let power = (p as u128)
                .checked_pow(u)
                .expect("exponent overflows u128");
            out = out.checked_mul(power).expect("exponent overflows u128");
        }
        out
    }

    /// Least prime at which the two decompositions are not equivalent, or
    /// `None` when they are equivalent at every prime.
    pub fn first_mismatch(&self, other: &BoundedAbelian) -> Option<GroupMismatch> {
        let primes: std::collections::BTreeSet<u64> =
            self.primes().chain(other.primes()).collect();
        for p in primes {
            match (self.components.get(&p), other.components.get(&p)) {
                (Some(_), None) => {
                    return Some(GroupMismatch::PresentOnly { prime: p, side: Side::Left });
                }
                (None, Some(_)) => {
                    return Some(GroupMismatch::PresentOnly { prime: p, side: Side::Right });
                }
                (Some(a), Some(b)) => {
                    let verdict = a.compare(b).expect("components share the prime p");
                    if let ComponentVerdict::NotEquivalent(mismatch) = verdict {
                        return Some(GroupMismatch::Component { prime: p, mismatch });
                    }
                }
                (None, None) => unreachable!("p came from one of the supports"),
            }
        }
        None
    }

    /// Componentwise equivalence at every prime of either exponent.
    pub fn equivalent_to(&self, other: &BoundedAbelian) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// Isomorphism test for fully finite decompositions: normal forms are
    /// unique, so this is structural equality. Errors if either side has
    /// an infinite multiplicity.
    pub fn iso_finite(&self, other: &BoundedAbelian) -> Result<bool, DecompositionError> {
        for group in [self, other] {
            for component in group.components() {
                if let Some(i) = component.first_infinite() {
                    return Err(DecompositionError::NotFinite(
                        component.factors()[i].multiplicity,
                    ));
                }
            }
        }
        Ok(self == other)
    }

    /// Direct product: concatenates the factor lists and re-normalizes.
    /// Fails only if merged multiplicities are incomparable cardinals.
    pub fn direct_product(&self, other: &BoundedAbelian) -> Result<Self, DecompositionError> {
        let raw: Vec<_> = [self, other]
            .into_iter()
            .flat_map(|g| {
                g.components().flat_map(|c| {
                    let p = c.prime();
                    c.factors()
                        .iter()
                        .map(move |f| (p, f.exp_power, f.multiplicity))
                })
            })
            .collect();
        BoundedAbelian::normalize(raw)
    }
}

impl fmt::Display for BoundedAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let rendered: Vec<String> = self.components().map(|c| c.to_string()).collect();
        write!(f, "{}", rendered.join(" x "))
    }
}
