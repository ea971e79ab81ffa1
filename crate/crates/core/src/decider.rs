//! The wreath-product variety decision procedure.
//!
//! Given non-trivial nilpotent groups `A1`, `A2` of one finite exponent
//! `m` generating the same variety, and non-trivial abelian groups `B1`,
//! `B2` of one finite exponent `n` every prime of which divides `m`, the
//! varieties generated by the regular wreath products `A1 Wr B1` and
//! `A2 Wr B2` are equal if and only if for every prime `p` dividing `n`
//! the p-primary components of `B1` and `B2` are equivalent in the sense
//! of [`PrimaryComponent::compare`]. The active groups matter only
//! through the hypotheses; once those hold, the verdict is a property of
//! the passive pair alone.
//!
//! [`check_preconditions`] verifies every hypothesis it can. The one
//! genuinely semantic hypothesis, `var(A1) = var(A2)`, cannot be decided
//! from finite data in general: for a pair of concrete groups it is
//! probed (shared laws refutable by invariants and short law scans), and
//! otherwise it must be asserted by the caller. A probe refutation
//! overrides the assertion.

use std::fmt;

use thiserror::Error;

use crate::abelian::{BoundedAbelian, ComponentVerdict, PrimaryComponent, Side};
use crate::group::{ConcreteGroup, Nilpotency};
use crate::laws::{
    invariant_probe, scan_discriminating_with, DiscriminatingWord, InvariantMismatch, LawBudget,
};

/// An active-pair operand: a non-trivial nilpotent group of finite
/// exponent, either a concrete group whose invariants have been computed
/// or an asserted description of a group too large or too infinite to
/// materialize.
#[derive(Debug, Clone)]
pub struct NilpotentDescriptor {
    exponent: u64,
    nilpotency_class: Option<u32>,
    source: DescriptorSource,
}

#[derive(Debug, Clone)]
pub enum DescriptorSource {
    Concrete(ConcreteGroup),
    Asserted,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("the trivial group is not a valid active operand")]
    TrivialGroup,
    #[error("group {0} is not nilpotent")]
    NotNilpotent(String),
    #[error("a non-trivial nilpotent group has exponent at least 2, got {0}")]
    BadExponent(u64),
    #[error("nilpotency class 0 means the trivial group, which is not a valid active operand")]
    BadClass,
}

impl NilpotentDescriptor {
    /// Wraps a concrete group, computing and checking its invariants:
    /// the group must be non-trivial and nilpotent.
    pub fn from_group(group: ConcreteGroup) -> Result<Self, DescriptorError> {
        let inv = *group.invariants();
        if inv.order == 1 {
            return Err(DescriptorError::TrivialGroup);
        }
        let class = match inv.nilpotency_class {
            Nilpotency::Class(c) => c,
            Nilpotency::NotNilpotent => {
                return Err(DescriptorError::NotNilpotent(group.label().to_string()))
            }
        };
        Ok(NilpotentDescriptor {
            exponent: inv.exponent,
            nilpotency_class: Some(class),
            source: DescriptorSource::Concrete(group),
        })
    }

    /// Describes a nilpotent group by assertion: `exponent` at least 2,
    /// and optionally its nilpotency class (at least 1). Used for groups
    /// that exist only symbolically, like infinite powers of a finite
    /// group.
    pub fn asserted(exponent: u64, nilpotency_class: Option<u32>) -> Result<Self, DescriptorError> {
        if exponent < 2 {
            return Err(DescriptorError::BadExponent(exponent));
        }
        if nilpotency_class == Some(0) {
            return Err(DescriptorError::BadClass);
        }
        Ok(NilpotentDescriptor {
            exponent,
            nilpotency_class,
            source: DescriptorSource::Asserted,
        })
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn nilpotency_class(&self) -> Option<u32> {
        self.nilpotency_class
    }

    pub fn group(&self) -> Option<&ConcreteGroup> {
        match &self.source {
            DescriptorSource::Concrete(g) => Some(g),
            DescriptorSource::Asserted => None,
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.group().is_some()
    }
}

/// A failed hypothesis, in checking order; the first failure is
/// reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ActiveExponentMismatch { left: u64, right: u64 },
    TrivialPassive { side: Side },
    PassiveExponentMismatch {
        left: Vec<(u64, u32)>,
        right: Vec<(u64, u32)>,
    },
    PrimeNotDividingActive { prime: u64, active_exponent: u64 },
    /// Two concrete active groups failed the shared-law probe on a
    /// variety invariant.
    VarietyRefutedByInvariants { mismatches: Vec<InvariantMismatch> },
    /// Two concrete active groups failed the shared-law probe on an
    /// explicit discriminating word.
    VarietyRefutedByLaw { witness: DiscriminatingWord },
    /// At least one active group is only asserted and the caller did not
    /// assert equal varieties.
    VarietyEqualityNotEstablished,
}

fn render_factored(factored: &[(u64, u32)]) -> String {
    let mut numeric: Option<u128> = Some(1);
    let mut parts = Vec::new();
    for &(p, u) in factored {
        numeric = numeric
            .and_then(|n| (p as u128).checked_pow(u).and_then(|q| n.checked_mul(q)));
        parts.push(if u == 1 { format!("{p}") } else { format!("{p}^{u}") });
    }
    match numeric {
        Some(n) => format!("{n}"),
        None => parts.join(" * "),
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ActiveExponentMismatch { left, right } => write!(
                f,
                "A1 and A2 must share an exponent: A1 has exponent {left}, A2 has {right}"
            ),
            Violation::TrivialPassive { side } => {
                write!(f, "{} must be non-trivial", side.passive_name())
            }
            Violation::PassiveExponentMismatch { left, right } => write!(
                f,
                "B1 and B2 must share an exponent: B1 has exponent {}, B2 has {}",
                render_factored(left),
                render_factored(right)
            ),
            Violation::PrimeNotDividingActive { prime, active_exponent } => write!(
                f,
                "prime {prime} divides the passive exponent but not the active exponent \
                 {active_exponent}"
            ),
            Violation::VarietyRefutedByInvariants { mismatches } => {
                let rendered: Vec<String> =
                    mismatches.iter().map(|m| m.to_string()).collect();
                write!(
                    f,
                    "A1 and A2 generate different varieties: {}",
                    rendered.join(", ")
                )
            }
            Violation::VarietyRefutedByLaw { witness } => write!(
                f,
                "A1 and A2 generate different varieties: {} is a law of {} only",
                witness.word,
                witness.law_of.active_name()
            ),
            Violation::VarietyEqualityNotEstablished => write!(
                f,
                "var(A1) = var(A2) is not established: provide two concrete groups or \
                 assert the equality explicitly"
            ),
        }
    }
}

/// Decision outcome. `NotEqual` carries the least witness prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Equal,
    NotEqual { witness_prime: u64 },
    PreconditionViolation(Violation),
}

/// The decision together with a human-readable explanation and the
/// normalized renderings of the passive operands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub explanation: String,
    pub passive_left: String,
    pub passive_right: String,
}

/// Law-scan bounds used when probing a pair of concrete active groups.
/// Kept deliberately small: the probe is a safety net on top of the
/// invariant comparison, not a full variety decision.
const PROBE_SCAN_RANK: u32 = 2;
const PROBE_SCAN_LEN: u32 = 3;
const PROBE_SCAN_MAX_ORDER: usize = 128;

/// Verifies the hypotheses in order: equal active exponents, non-trivial
/// passive groups, equal passive exponents, every passive prime dividing
/// the active exponent, and equal active varieties (probed for concrete
/// pairs, asserted otherwise). Returns the first violation.
pub fn check_preconditions(
    a1: &NilpotentDescriptor,
    a2: &NilpotentDescriptor,
    b1: &BoundedAbelian,
    b2: &BoundedAbelian,
    assume_equal_active_varieties: bool,
) -> Result<(), Violation> {
    if a1.exponent() != a2.exponent() {
        return Err(Violation::ActiveExponentMismatch {
            left: a1.exponent(),
            right: a2.exponent(),
        });
    }
    if b1.is_trivial() {
        return Err(Violation::TrivialPassive { side: Side::Left });
    }
    if b2.is_trivial() {
        return Err(Violation::TrivialPassive { side: Side::Right });
    }
    let n = b1.exponent_factored();
    if n != b2.exponent_factored() {
        return Err(Violation::PassiveExponentMismatch {
            left: n,
            right: b2.exponent_factored(),
        });
    }
    let m = a1.exponent();
    for &(p, _) in &n {
        if m % p != 0 {
            return Err(Violation::PrimeNotDividingActive { prime: p, active_exponent: m });
        }
    }
    match (a1.group(), a2.group()) {
        (Some(g1), Some(g2)) => {
            // A probe refutation wins even over an explicit assertion.
            let probe = invariant_probe(g1, g2);
            if !probe.agrees() {
                return Err(Violation::VarietyRefutedByInvariants {
                    mismatches: probe.mismatches,
                });
            }
            if g1.order() <= PROBE_SCAN_MAX_ORDER && g2.order() <= PROBE_SCAN_MAX_ORDER {
                let report = scan_discriminating_with(
                    g1,
                    g2,
                    PROBE_SCAN_RANK,
                    PROBE_SCAN_LEN,
                    &LawBudget::default(),
                )
                .expect("probe scan fits the default budget");
                if let Some(witness) = report.discriminating {
                    return Err(Violation::VarietyRefutedByLaw { witness });
                }
            }
            Ok(())
        }
        _ if assume_equal_active_varieties => Ok(()),
        _ => Err(Violation::VarietyEqualityNotEstablished),
    }
}

fn violation_verdict(v: Violation, b1: &BoundedAbelian, b2: &BoundedAbelian) -> Verdict {
    Verdict {
        explanation: format!("precondition violated: {v}"),
        outcome: Outcome::PreconditionViolation(v),
        passive_left: b1.to_string(),
        passive_right: b2.to_string(),
    }
}

fn primes_set_rendering(b: &BoundedAbelian) -> String {
    let primes: Vec<String> = b.primes().map(|p| p.to_string()).collect();
    format!("{{{}}}", primes.join(", "))
}

/// Decides whether `var(A1 Wr B1) = var(A2 Wr B2)` under the stated
/// hypotheses. Walks the primes of the common passive exponent in
/// ascending order and reports the least prime whose components are not
/// equivalent; if none exists the varieties are equal.
pub fn decide(
    a1: &NilpotentDescriptor,
    a2: &NilpotentDescriptor,
    b1: &BoundedAbelian,
    b2: &BoundedAbelian,
    assume_equal_active_varieties: bool,
) -> Verdict {
    if let Err(v) = check_preconditions(a1, a2, b1, b2, assume_equal_active_varieties) {
        return violation_verdict(v, b1, b2);
    }
    // Equal exponents mean equal prime supports from here on.
    for p in b1.primes() {
        let c1 = component(b1, p);
        let c2 = component(b2, p);
        let verdict = c1.compare(c2).expect("components share the prime");
        if let ComponentVerdict::NotEquivalent(mismatch) = verdict {
            return Verdict {
                outcome: Outcome::NotEqual { witness_prime: p },
                explanation: format!("NotEqual at p = {p}: {}", mismatch.describe(p)),
                passive_left: b1.to_string(),
                passive_right: b2.to_string(),
            };
        }
    }
    Verdict {
        outcome: Outcome::Equal,
        explanation: format!(
            "Equal: for every prime p in {}, the p-components of B1 and B2 are equivalent",
            primes_set_rendering(b1)
        ),
        passive_left: b1.to_string(),
        passive_right: b2.to_string(),
    }
}

fn component(b: &BoundedAbelian, p: u64) -> &PrimaryComponent {
    b.primary_component(p)
        .expect("p is prime")
        .expect("p divides the exponent")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteDecisionError {
    #[error("{side} has an infinite multiplicity; the finite-case decision does not apply")]
    NotFinite { side: &'static str },
}

/// The all-finite specialization: under the same hypotheses, with all
/// multiplicities finite, the varieties are equal if and only if `B1`
/// and `B2` are isomorphic. Implemented via the isomorphism test rather
/// than the componentwise walk, as an independent cross-check of
/// [`decide`].
pub fn decide_finite(
    a1: &NilpotentDescriptor,
    a2: &NilpotentDescriptor,
    b1: &BoundedAbelian,
    b2: &BoundedAbelian,
    assume_equal_active_varieties: bool,
) -> Result<Verdict, FiniteDecisionError> {
    for (b, side) in [(b1, Side::Left), (b2, Side::Right)] {
        if !b.is_finite() {
            return Err(FiniteDecisionError::NotFinite { side: side.passive_name() });
        }
    }
    if let Err(v) = check_preconditions(a1, a2, b1, b2, assume_equal_active_varieties) {
        return Ok(violation_verdict(v, b1, b2));
    }
    let iso = b1.iso_finite(b2).expect("both sides checked finite");
    if iso {
        return Ok(Verdict {
            outcome: Outcome::Equal,
            explanation: "Equal: the finite groups B1 and B2 are isomorphic".to_string(),
            passive_left: b1.to_string(),
            passive_right: b2.to_string(),
        });
    }
    // Non-isomorphic finite groups of equal exponent differ at some
    // prime; find the least one for the witness.
    let witness = b1
        .first_mismatch(b2)
        .expect("non-isomorphic finite decompositions differ at some prime");
    let p = witness.prime();
    Ok(Verdict {
        outcome: Outcome::NotEqual { witness_prime: p },
        explanation: format!(
            "NotEqual at p = {p}: B1 and B2 are not isomorphic; {}",
            witness.describe()
        ),
        passive_left: b1.to_string(),
        passive_right: b2.to_string(),
    })
}
