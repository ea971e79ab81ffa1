//! Built-in verification. `wrvar selftest` re-runs the worked instances
//! and the engine fixtures so a deployed binary can vouch for itself
//! without the test suite.

use wrvar_core::abelian::{PrimaryComponent, Side};
use wrvar_core::cardinal::Cardinal;
use wrvar_core::decider::{decide, NilpotentDescriptor, Outcome};
use wrvar_core::group::{ConcreteGroup, Nilpotency, Solubility};
use wrvar_core::laws::{invariant_probe, is_law_naive, scan_discriminating, InvariantMismatch};
use wrvar_core::BoundedAbelian;

pub struct Check {
    pub name: &'static str,
    pub result: Result<(), String>,
}

pub fn run_all() -> Vec<Check> {
    vec![
        Check {
            name: "criterion 1 (component equivalence on worked instances)",
            result: check_components(),
        },
        Check {
            name: "criterion 2 (decision on worked instances)",
            result: check_decision(),
        },
        Check {
            name: "criterion 5 (wreath engine fixtures)",
            result: check_engine(),
        },
        Check {
            name: "criterion 7 (unequal varieties witnessed)",
            result: check_witness(),
        },
    ]
}

fn ensure(cond: bool, message: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message.into())
    }
}

fn component(factors: &[(u32, Cardinal)]) -> Result<PrimaryComponent, String> {
    PrimaryComponent::new(3, factors.iter().copied()).map_err(|e| e.to_string())
}

fn abelian(raw: &[(u64, u32, Cardinal)]) -> Result<BoundedAbelian, String> {
    BoundedAbelian::normalize(raw.iter().copied()).map_err(|e| e.to_string())
}

fn check_components() -> Result<(), String> {
    use Cardinal::*;
    let first = component(&[
        (5, Finite(6)),
        (4, Finite(8)),
        (3, Aleph(0)),
        (2, Finite(5)),
        (1, Finite(4)),
    ])?;
    let second =
        component(&[(5, Finite(6)), (4, Finite(8)), (3, Continuum), (1, Finite(50))])?;
    let third = component(&[(5, Finite(6)), (4, Finite(8)), (2, Aleph(0)), (1, Finite(4))])?;
    ensure(
        first.equivalent_to(&second).map_err(|e| e.to_string())?,
        "the first two components should be equivalent",
    )?;
    ensure(
        !third.equivalent_to(&first).map_err(|e| e.to_string())?,
        "the third component should not be equivalent to the first",
    )
}

fn check_decision() -> Result<(), String> {
    use Cardinal::*;
    let q8 = ConcreteGroup::quaternion8();
    let m27 = ConcreteGroup::m27();
    let c25 = ConcreteGroup::cyclic(25).map_err(|e| e.to_string())?;
    let product = q8
        .direct(&m27)
        .and_then(|g| g.direct(&c25))
        .map_err(|e| e.to_string())?;
    let inv = *product.invariants();
    ensure(inv.order == 5400, format!("A1 order {} instead of 5400", inv.order))?;
    ensure(inv.exponent == 900, format!("A1 exponent {} instead of 900", inv.exponent))?;
    let a1 = NilpotentDescriptor::from_group(product).map_err(|e| e.to_string())?;
    let a2 = NilpotentDescriptor::asserted(900, Some(2)).map_err(|e| e.to_string())?;

    let b1 = abelian(&[
        (3, 5, Finite(6)),
        (3, 4, Finite(8)),
        (3, 3, Aleph(0)),
        (3, 2, Finite(5)),
        (3, 1, Finite(4)),
        (5, 1, Finite(1)),
    ])?;
    let b2 = abelian(&[
        (3, 5, Finite(6)),
        (3, 4, Finite(8)),
        (3, 3, Continuum),
        (3, 1, Finite(50)),
        (5, 1, Finite(1)),
    ])?;
    let b2_shrunk = abelian(&[
        (3, 5, Finite(6)),
        (3, 4, Finite(8)),
        (3, 2, Aleph(0)),
        (3, 1, Finite(4)),
        (5, 1, Finite(1)),
    ])?;
    let b2_extra_c5 = abelian(&[
        (3, 5, Finite(6)),
        (3, 4, Finite(8)),
        (3, 3, Continuum),
        (3, 1, Finite(50)),
        (5, 1, Finite(2)),
    ])?;

    let equal = decide(&a1, &a2, &b1, &b2, true);
    ensure(
        equal.outcome == Outcome::Equal,
        format!("expected Equal, got: {}", equal.explanation),
    )?;
    let at_3 = decide(&a1, &a2, &b1, &b2_shrunk, true);
    ensure(
        at_3.outcome == Outcome::NotEqual { witness_prime: 3 },
        format!("expected NotEqual at 3, got: {}", at_3.explanation),
    )?;
    ensure(
        at_3.explanation.contains("3^3") && at_3.explanation.contains("3^2"),
        format!("missing exponent clash in: {}", at_3.explanation),
    )?;
    let at_5 = decide(&a1, &a2, &b1, &b2_extra_c5, true);
    ensure(
        at_5.outcome == Outcome::NotEqual { witness_prime: 5 },
        format!("expected NotEqual at 5, got: {}", at_5.explanation),
    )
}

fn check_engine() -> Result<(), String> {
    let c2 = ConcreteGroup::cyclic(2).map_err(|e| e.to_string())?;
    let c3 = ConcreteGroup::cyclic(3).map_err(|e| e.to_string())?;
    let c4 = ConcreteGroup::cyclic(4).map_err(|e| e.to_string())?;
    let v4 = c2.direct(&c2).map_err(|e| e.to_string())?;

    let c2_wr_c2 = c2.wreath(&c2).map_err(|e| e.to_string())?;
    let inv = *c2_wr_c2.invariants();
    ensure(inv.order == 8, format!("|C2 wr C2| = {}", inv.order))?;
    ensure(inv.exponent == 4, format!("exponent {} instead of 4", inv.exponent))?;
    ensure(
        inv.nilpotency_class == Nilpotency::Class(2),
        format!("class {} instead of 2", inv.nilpotency_class),
    )?;
    ensure(
        inv.derived_length == Solubility::DerivedLength(2),
        format!("derived length {} instead of 2", inv.derived_length),
    )?;

    let c2_wr_c4 = c2.wreath(&c4).map_err(|e| e.to_string())?;
    ensure(c2_wr_c4.order() == 64, format!("|C2 wr C4| = {}", c2_wr_c4.order()))?;
    ensure(
        c2_wr_c4.exponent() == 8,
        format!("exponent {} instead of 8", c2_wr_c4.exponent()),
    )?;

    let mut c2_pow_9 = c2.clone();
    for _ in 0..8 {
        c2_pow_9 = c2_pow_9.direct(&c2).map_err(|e| e.to_string())?;
    }
    let fixtures = [
        c2_wr_c2,
        c2_wr_c4,
        v4.wreath(&c2).map_err(|e| e.to_string())?,
        c2.wreath(&c3).map_err(|e| e.to_string())?,
        c3.wreath(&c2).map_err(|e| e.to_string())?,
        ConcreteGroup::quaternion8(),
        ConcreteGroup::m27(),
        ConcreteGroup::quaternion8()
            .direct(&ConcreteGroup::cyclic(25).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?,
        c2_pow_9,
    ];
    for g in &fixtures {
        ensure(g.order() <= 512, format!("fixture {} exceeds order 512", g.label()))?;
        g.check_axioms()
            .map_err(|e| format!("axioms fail for {}: {e}", g.label()))?;
    }
    Ok(())
}

fn check_witness() -> Result<(), String> {
    let c2 = ConcreteGroup::cyclic(2).map_err(|e| e.to_string())?;
    let c4 = ConcreteGroup::cyclic(4).map_err(|e| e.to_string())?;
    let left = c2.wreath(&c2).map_err(|e| e.to_string())?;
    let right = c2.wreath(&c4).map_err(|e| e.to_string())?;

    let probe = invariant_probe(&left, &right);
    ensure(
        probe
            .mismatches
            .iter()
            .any(|m| matches!(m, InvariantMismatch::Exponent(4, 8))),
        format!("missing exponent mismatch in {:?}", probe.mismatches),
    )?;

    let report = scan_discriminating(&left, &right, 1, 4).map_err(|e| e.to_string())?;
    let hit = report
        .discriminating
        .ok_or_else(|| "no discriminating word found".to_string())?;
    ensure(
        hit.word.to_string() == "x1^4",
        format!("unexpected witness {}", hit.word),
    )?;
    ensure(hit.law_of == Side::Left, "the witness should be a law of the left group")?;
    ensure(
        is_law_naive(&left, &hit.word) && !is_law_naive(&right, &hit.word),
        "the naive evaluator should confirm the witness",
    )
}
