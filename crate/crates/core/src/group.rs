//! Concrete finite groups with elements indexed `0..order` and the
//! identity always at index 0.
//!
//! Groups are built from cyclic blocks, two fixed small non-abelian
//! groups (the quaternion group and the extraspecial group of order 27
//! and exponent 9), explicit multiplication tables, direct products, and
//! regular wreath products. Small composites are materialized into flat
//! multiplication tables; larger ones stay functional, with products
//! computed from the factor structure on demand. Construction enforces a
//! hard order cap so a mistyped wreath product fails fast instead of
//! eating the machine.
//!
//! The regular wreath product `A Wr B` has carrier `A^B x B` (all
//! functions from `B` to `A`, not just finitely supported ones; `B` is
//! finite here so there is no difference). We use the right-translation
//! convention: `(f1, b1)(f2, b2) = (x -> f1(x) f2(x b1), b1 b2)`, with
//! inverse `(f, b)^-1 = (x -> f(x b^-1)^-1, b^-1)`. Functions are encoded
//! as little-endian base-`|A|` numerals over the element indices of `B`,
//! and the pair `(f, b)` as `code(f) * |B| + index(b)`, which puts the
//! identity at 0.

use std::fmt;
use std::sync::Arc;
use std::sync::OnceLock;

use thiserror::Error;

use crate::abelian::BoundedAbelian;
use crate::arith;
use crate::cardinal::Cardinal;

/// Construction limits. `order_cap` bounds the order of any group built;
/// `table_cap` is the largest order for which products are materialized
/// into a flat multiplication table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupBudget {
    pub order_cap: u128,
    pub table_cap: usize,
}

impl Default for GroupBudget {
    fn default() -> Self {
        GroupBudget {
            order_cap: 1_000_000,
            table_cap: 2048,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("requested group order {requested} exceeds the cap {cap}")]
    CapExceeded { requested: u128, cap: u128 },
    #[error("requested group order overflows the representable range")]
    OrderOverflow,
    #[error("group {0} is not abelian")]
    NotAbelian(String),
    #[error("invalid multiplication table: {0}")]
    BadTable(String),
    #[error("axiom violation in {label}: {detail}")]
    AxiomViolation { label: String, detail: String },
}

/// Whether a group is nilpotent, and of which class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nilpotency {
    Class(u32),
    NotNilpotent,
}

impl fmt::Display for Nilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nilpotency::Class(c) => write!(f, "{c}"),
            Nilpotency::NotNilpotent => write!(f, "not nilpotent"),
        }
    }
}

/// Whether a group is soluble, and of which derived length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solubility {
    DerivedLength(u32),
    NotSoluble,
}

impl fmt::Display for Solubility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solubility::DerivedLength(l) => write!(f, "{l}"),
            Solubility::NotSoluble => write!(f, "not soluble"),
        }
    }
}

/// The invariants the variety machinery consumes, computed exhaustively
/// and cached on the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupInvariants {
    pub order: u64,
    pub exponent: u64,
    pub nilpotency_class: Nilpotency,
    pub derived_length: Solubility,
    pub is_abelian: bool,
}

enum Repr {
    /// Z/n under addition.
    Cyclic,
    /// Flat row-major multiplication table.
    Table {
        table: Vec<u32>,
        inverse: OnceLock<Vec<u32>>,
    },
    /// Pairs `(a, b)` encoded as `a * |right| + b`.
    Direct {
        left: ConcreteGroup,
        right: ConcreteGroup,
    },
    /// Regular wreath product `base Wr top`; see the module docs for the
    /// encoding.
    Wreath {
        base: ConcreteGroup,
        top: ConcreteGroup,
    },
}

struct Inner {
    label: String,
    /// Binding strength of `label` for parenthesization when composing:
    /// 2 atoms, 1 wreath products, 0 direct products.
    prec: u8,
    order: usize,
    repr: Repr,
    invariants: OnceLock<GroupInvariants>,
}

/// A finite group, cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct ConcreteGroup {
    inner: Arc<Inner>,
}

impl fmt::Debug for ConcreteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConcreteGroup")
            .field("label", &self.inner.label)
            .field("order", &self.inner.order)
            .finish()
    }
}

fn child_label(child: &ConcreteGroup, level: u8, is_right: bool) -> String {
    let needs_parens = if is_right {
        child.inner.prec <= level
    } else {
        child.inner.prec < level
    };
    if needs_parens {
        format!("({})", child.inner.label)
    } else {
        child.inner.label.clone()
    }
}

impl ConcreteGroup {
    fn from_inner(label: String, prec: u8, order: usize, repr: Repr) -> Self {
        ConcreteGroup {
            inner: Arc::new(Inner {
                label,
                prec,
                order,
                repr,
                invariants: OnceLock::new(),
            }),
        }
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        Self::from_inner("1".to_string(), 2, 1, Repr::Cyclic)
    }

    /// The cyclic group of order `n`. Panics if `n` is zero.
    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::cyclic_with(n, &GroupBudget::default())
    }

    pub fn cyclic_with(n: u64, budget: &GroupBudget) -> Result<Self, GroupError> {
        assert!(n >= 1, "cyclic group order must be positive");
        check_cap(n as u128, budget)?;
        Ok(Self::from_inner(format!("C{n}"), 2, n as usize, Repr::Cyclic))
    }

    /// The quaternion group of order 8: elements `1, -1, i, -i, j, -j, k,
    /// -k` in that index order.
    pub fn quaternion8() -> Self {
        // index = 2 * axis + sign with axes 1, i, j, k.
        fn basis_mul(a: usize, b: usize) -> (usize, usize) {
            match (a, b) {
                (0, x) => (0, x),
                (x, 0) => (0, x),
                (1, 1) | (2, 2) | (3, 3) => (1, 0),
                (1, 2) => (0, 3),
                (2, 1) => (1, 3),
                (2, 3) => (0, 1),
                (3, 2) => (1, 1),
                (3, 1) => (0, 2),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        }
        let mut table = vec![0u32; 64];
        for a in 0..8 {
            for b in 0..8 {
                let (flip, axis) = basis_mul(a >> 1, b >> 1);
                let sign = (a & 1) ^ (b & 1) ^ flip;
                table[a * 8 + b] = (2 * axis + sign) as u32;
            }
        }
        Self::from_inner(
            "Q8".to_string(),
            2,
            8,
            Repr::Table { table, inverse: OnceLock::new() },
        )
    }

    /// The non-abelian group of order 27 and exponent 9, presented as
    /// `<a, b | a^9 = b^3 = 1, b^-1 a b = a^4>`; element `a^i b^j` has
    /// index `3i + j`.
    pub fn m27() -> Self {
        // Conjugation b^-1 a b = a^4 gives b a b^-1 = a^7 (7 = 4^-1 mod
        // 9), so a^i b^j * a^k b^l = a^(i + k*7^j) b^(j + l).
        let pow7 = [1u64, 7, 4];
        let mut table = vec![0u32; 27 * 27];
        for i in 0..9u64 {
            for j in 0..3u64 {
                for k in 0..9u64 {
                    for l in 0..3u64 {
                        let e = (i + k * pow7[j as usize]) % 9;
                        let m = (j + l) % 3;
                        table[(i * 3 + j) as usize * 27 + (k * 3 + l) as usize] =
                            (e * 3 + m) as u32;
                    }
                }
            }
        }
        Self::from_inner(
            "M27".to_string(),
            2,
            27,
            Repr::Table { table, inverse: OnceLock::new() },
        )
    }

    /// Builds a group from an explicit multiplication table. Element 0
    /// must be the identity. The table is checked to be a Latin square
    /// with identity 0; associativity is verified exhaustively for orders
    /// up to 512 (use [`Self::check_axioms`] to force the cubic check on
    /// larger tables).
    pub fn from_table(label: &str, rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::BadTable("table must be non-empty".to_string()));
        }
        let bad = |msg: String| Err(GroupError::BadTable(msg));
        let mut table = vec![0u32; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {i} has length {}, expected {n}", row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return bad(format!("entry ({i}, {j}) = {v} is out of range"));
                }
                table[i * n + j] = v as u32;
            }
        }
        for j in 0..n {
            if table[j] as usize != j {
                return bad(format!("element 0 is not a left identity at column {j}"));
            }
            if table[j * n] as usize != j {
                return bad(format!("element 0 is not a right identity at row {j}"));
            }
        }
        let mut seen = vec![false; n];
        for i in 0..n {
            seen.fill(false);
            for j in 0..n {
                seen[table[i * n + j] as usize] = true;
            }
            if !seen.iter().all(|&s| s) {
                return bad(format!("row {i} is not a permutation"));
            }
            seen.fill(false);
            for j in 0..n {
                seen[table[j * n + i] as usize] = true;
            }
            if !seen.iter().all(|&s| s) {
                return bad(format!("column {i} is not a permutation"));
            }
        }
        let group = Self::from_inner(
            label.to_string(),
            2,
            n,
            Repr::Table { table, inverse: OnceLock::new() },
        );
        if n <= 512 {
            group.check_axioms().map_err(|e| match e {
                GroupError::AxiomViolation { detail, .. } => GroupError::BadTable(detail),
                other => other,
            })?;
        }
        Ok(group)
    }

    /// Direct product of `self` and `other`.
    pub fn direct(&self, other: &ConcreteGroup) -> Result<Self, GroupError> {
        self.direct_with(other, &GroupBudget::default())
    }

    pub fn direct_with(
        &self,
        other: &ConcreteGroup,
        budget: &GroupBudget,
    ) -> Result<Self, GroupError> {
        let order = (self.order() as u128)
            .checked_mul(other.order() as u128)
            .ok_or(GroupError::OrderOverflow)?;
        check_cap(order, budget)?;
        let label = format!(
            "{} x {}",
            child_label(self, 0, false),
            child_label(other, 0, true)
        );
        let group = Self::from_inner(
            label,
            0,
            order as usize,
            Repr::Direct { left: self.clone(), right: other.clone() },
        );
        Ok(group.materialized(budget))
    }

    /// Regular wreath product `self Wr other` (`self` is the base, `other`
    /// the top); order `|self|^|other| * |other|`.
    pub fn wreath(&self, other: &ConcreteGroup) -> Result<Self, GroupError> {
        self.wreath_with(other, &GroupBudget::default())
    }

    pub fn wreath_with(
        &self,
        other: &ConcreteGroup,
        budget: &GroupBudget,
    ) -> Result<Self, GroupError> {
        let bn = self.order() as u128;
        let tn = other.order() as u128;
        let order = bn
            .checked_pow(u32::try_from(tn).map_err(|_| GroupError::OrderOverflow)?)
            .and_then(|p| p.checked_mul(tn))
            .ok_or(GroupError::OrderOverflow)?;
        check_cap(order, budget)?;
        let label = format!(
            "{} wr {}",
            child_label(self, 1, false),
            child_label(other, 1, true)
        );
        let group = Self::from_inner(
            label,
            1,
            order as usize,
            Repr::Wreath { base: self.clone(), top: other.clone() },
        );
        Ok(group.materialized(budget))
    }

    /// Replaces a small structural group by its flat table, keeping label
    /// and order. Products then cost one lookup instead of a recursive
    /// walk.
    fn materialized(self, budget: &GroupBudget) -> Self {
        let n = self.order();
        if n > budget.table_cap || matches!(self.inner.repr, Repr::Cyclic | Repr::Table { .. }) {
            return self;
        }
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = self.mul(i, j) as u32;
            }
        }
        Self::from_inner(
            self.inner.label.clone(),
            self.inner.prec,
            n,
            Repr::Table { table, inverse: OnceLock::new() },
        )
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    /// Index of the identity; 0 in every representation.
    pub fn identity(&self) -> usize {
        0
    }

    /// Product of elements `i` and `j`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        let n = self.inner.order;
        debug_assert!(i < n && j < n, "element index out of range");
        match &self.inner.repr {
            Repr::Cyclic => (i + j) % n,
            Repr::Table { table, .. } => table[i * n + j] as usize,
            Repr::Direct { left, right } => {
                let rn = right.order();
                left.mul(i / rn, j / rn) * rn + right.mul(i % rn, j % rn)
            }
            Repr::Wreath { base, top } => wreath_mul(base, top, i, j),
        }
    }

    /// Inverse of element `i`.
    pub fn inv(&self, i: usize) -> usize {
        let n = self.inner.order;
        debug_assert!(i < n, "element index out of range");
        match &self.inner.repr {
            Repr::Cyclic => (n - i) % n,
            Repr::Table { table, inverse } => {
                let inv = inverse.get_or_init(|| {
                    let mut out = vec![0u32; n];
                    for a in 0..n {
                        for b in 0..n {
                            if table[a * n + b] == 0 {
                                out[a] = b as u32;
                                break;
                            }
                        }
                    }
                    out
                });
                inv[i] as usize
            }
            Repr::Direct { left, right } => {
                let rn = right.order();
                left.inv(i / rn) * rn + right.inv(i % rn)
            }
            Repr::Wreath { base, top } => wreath_inv(base, top, i),
        }
    }

    /// `i` raised to the `k`-th power by binary exponentiation.
    pub fn pow(&self, i: usize, mut k: u64) -> usize {
        let mut acc = 0;
        let mut base = i;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Order of element `i`, via the factorization of the group order.
    pub fn element_order(&self, i: usize) -> u64 {
        let n = self.inner.order as u64;
        let mut ord = 1u64;
        for (p, a) in arith::factorize(n) {
            let mut y = self.pow(i, n / p.pow(a));
            let mut k = 0u32;
            while y != 0 {
                y = self.pow(y, p);
                k += 1;
            }
            ord *= p.pow(k);
        }
        ord
    }

    /// True when every pair of elements commutes.
    pub fn is_abelian(&self) -> bool {
        if let Some(inv) = self.inner.invariants.get() {
            return inv.is_abelian;
        }
        let n = self.order();
        for i in 1..n {
            for j in (i + 1)..n {
                if self.mul(i, j) != self.mul(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// The subgroup generated by `seeds`, as a sorted list of element
    /// indices. Runs in `O(|subgroup| * |seeds|)` products.
    pub fn subgroup_closure(&self, seeds: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut gens: Vec<usize> = Vec::new();
        let mut is_gen = vec![false; n];
        for &s in seeds {
            assert!(s < n, "seed index out of range");
            if !is_gen[s] {
                is_gen[s] = true;
                gens.push(s);
            }
        }
        let mut in_set = vec![false; n];
        in_set[0] = true;
        let mut elements = vec![0usize];
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !in_set[y] {
                    in_set[y] = true;
                    elements.push(y);
                    frontier.push(y);
                }
            }
        }
        elements.sort_unstable();
        elements
    }

    /// The subgroup generated by all commutators `[a, b] = a^-1 b^-1 a b`
    /// with `a` in `left` and `b` in `right`.
    fn commutator_closure(&self, left: &[usize], right: &[usize]) -> Vec<usize> {
        let n = self.order();
        let inv: Vec<usize> = (0..n).map(|i| self.inv(i)).collect();
        let mut seen = vec![false; n];
        let mut seeds = Vec::new();
        for &a in left {
            let ia = inv[a];
            for &b in right {
                let c = self.mul(self.mul(ia, inv[b]), self.mul(a, b));
                if !seen[c] {
                    seen[c] = true;
                    seeds.push(c);
                }
            }
        }
        self.subgroup_closure(&seeds)
    }

    /// Computes (and caches) order, exponent, nilpotency class, derived
    /// length, and commutativity, all by exhaustive computation over the
    /// element set.
    pub fn invariants(&self) -> &GroupInvariants {
        self.inner.invariants.get_or_init(|| self.compute_invariants())
    }

    fn compute_invariants(&self) -> GroupInvariants {
        let n = self.order();
        let mut exponent = 1u64;
        for i in 0..n {
            exponent = arith::lcm(exponent, self.element_order(i));
        }
        let full: Vec<usize> = (0..n).collect();
        let derived = self.commutator_closure(&full, &full);
        let is_abelian = derived.len() == 1;

        // Lower central series: gamma_1 = G, gamma_{i+1} = [gamma_i, G].
        // Every term is normal, so the next term is a subgroup of the
        // current one and equal size means stabilization.
        let nilpotency_class = if n == 1 {
            Nilpotency::Class(0)
        } else {
            let mut gamma = derived.clone();
            let mut class = 1u32;
            loop {
                if gamma.len() == 1 {
                    break Nilpotency::Class(class);
                }
                let next = self.commutator_closure(&gamma, &full);
                if next.len() == gamma.len() {
                    break Nilpotency::NotNilpotent;
                }
                gamma = next;
                class += 1;
            }
        };

        let derived_length = if n == 1 {
            Solubility::DerivedLength(0)
        } else {
            let mut d = derived;
            let mut len = 1u32;
            loop {
                if d.len() == 1 {
                    break Solubility::DerivedLength(len);
                }
                let next = self.commutator_closure(&d, &d);
                if next.len() == d.len() {
                    break Solubility::NotSoluble;
                }
                d = next;
                len += 1;
            }
        };

        GroupInvariants {
            order: n as u64,
            exponent,
            nilpotency_class,
            derived_length,
            is_abelian,
        }
    }

    /// Exponent of the group: the lcm of all element orders.
    pub fn exponent(&self) -> u64 {
        self.invariants().exponent
    }

    /// Full axiom check: identity, closure, inverses, and exhaustive
    /// associativity. Cubic in the order; intended for tests and for
    /// tables too large for the constructor's built-in check.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order();
        let fail = |detail: String| {
            Err(GroupError::AxiomViolation { label: self.inner.label.clone(), detail })
        };
        for i in 0..n {
            if self.mul(0, i) != i || self.mul(i, 0) != i {
                return fail(format!("0 is not an identity for element {i}"));
            }
            let v = self.inv(i);
            if v >= n {
                return fail(format!("inverse of {i} is out of range"));
            }
            if self.mul(i, v) != 0 || self.mul(v, i) != 0 {
                return fail(format!("element {v} is not a two-sided inverse of {i}"));
            }
            for j in 0..n {
                if self.mul(i, j) >= n {
                    return fail(format!("product of {i} and {j} is out of range"));
                }
            }
        }
        // Hot loop: go straight at the table when there is one.
        if let Repr::Table { table, .. } = &self.inner.repr {
            for i in 0..n {
                for j in 0..n {
                    let ij = table[i * n + j] as usize;
                    for k in 0..n {
                        let jk = table[j * n + k] as usize;
                        if table[ij * n + k] != table[i * n + jk] {
                            return fail(format!("associativity fails at ({i}, {j}, {k})"));
                        }
                    }
                }
            }
        } else {
            for i in 0..n {
                for j in 0..n {
                    let ij = self.mul(i, j);
                    for k in 0..n {
                        if self.mul(ij, k) != self.mul(i, self.mul(j, k)) {
                            return fail(format!("associativity fails at ({i}, {j}, {k})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Primary decomposition of an abelian group, recovered from element
    /// order statistics: for each prime `p`, the count of elements of
    /// order dividing `p^j` is `p^(s_j)`, the rank increments `s_j -
    /// s_{j-1}` count cyclic factors of order at least `p^j`, and their
    /// differences give the multiplicities. Errors on non-abelian input.
    pub fn abelian_decomposition(&self) -> Result<BoundedAbelian, GroupError> {
        if !self.is_abelian() {
            return Err(GroupError::NotAbelian(self.inner.label.clone()));
        }
        let n = self.order();
        let orders: Vec<u64> = (0..n).map(|i| self.element_order(i)).collect();
        let mut raw: Vec<(u64, u32, Cardinal)> = Vec::new();
        for (p, _) in arith::factorize(n as u64) {
            // count[j] = number of elements of order exactly p^j.
            let mut count: Vec<u64> = Vec::new();
            for &o in &orders {
                let mut v = 0u32;
                let mut rest = o;
                while rest % p == 0 {
                    rest /= p;
                    v += 1;
                }
                if rest == 1 {
                    let v = v as usize;
                    if count.len() <= v {
                        count.resize(v + 1, 0);
                    }
                    count[v] += 1;
                }
            }
            let max_j = count.len() - 1;
            let mut s = vec![0u32; max_j + 1];
            let mut cumulative = 0u64;
            for j in 0..=max_j {
                cumulative += count[j];
                let mut log = 0u32;
                let mut t = cumulative;
                while t % p == 0 {
                    t /= p;
                    log += 1;
                }
                assert!(t == 1, "element order statistics of an abelian group");
                s[j] = log;
            }
            // rank[j] = factors of order >= p^j, for j in 1..=max_j.
            let rank = |j: usize| -> u32 {
                if j > max_j {
                    0
                } else {
                    s[j] - s[j - 1]
                }
            };
            for u in 1..=max_j {
                let multiplicity = rank(u) - rank(u + 1);
                if multiplicity > 0 {
                    raw.push((p, u as u32, Cardinal::Finite(multiplicity as u64)));
                }
            }
        }
        Ok(BoundedAbelian::normalize(raw).expect("primes and powers are valid by construction"))
    }
}

fn check_cap(order: u128, budget: &GroupBudget) -> Result<(), GroupError> {
    if order > budget.order_cap || order > usize::MAX as u128 {
        return Err(GroupError::CapExceeded { requested: order, cap: budget.order_cap });
    }
    Ok(())
}

/// Digit `x` of `code` written little-endian in base `bn`.
fn digit(code: usize, bn: usize, x: usize) -> usize {
    let mut c = code;
    for _ in 0..x {
        c /= bn;
    }
    c % bn
}

fn wreath_mul(base: &ConcreteGroup, top: &ConcreteGroup, i: usize, j: usize) -> usize {
    let bn = base.order();
    let tn = top.order();
    let (fi, ti) = (i / tn, i % tn);
    let (fj, tj) = (j / tn, j % tn);
    let tt = top.mul(ti, tj);
    if bn == 1 {
        return tt;
    }
    let mut code = 0usize;
    let mut place = 1usize;
    let mut fi_rest = fi;
    for x in 0..tn {
        let h = base.mul(fi_rest % bn, digit(fj, bn, top.mul(x, ti)));
        code += h * place;
        if x + 1 < tn {
            place *= bn;
            fi_rest /= bn;
        }
    }
    code * tn + tt
}

fn wreath_inv(base: &ConcreteGroup, top: &ConcreteGroup, i: usize) -> usize {
    let bn = base.order();
    let tn = top.order();
    let (f, t) = (i / tn, i % tn);
    let t_inv = top.inv(t);
    if bn == 1 {
        return t_inv;
    }
    let mut code = 0usize;
    let mut place = 1usize;
    for x in 0..tn {
        let g = base.inv(digit(f, bn, top.mul(x, t_inv)));
        code += g * place;
        if x + 1 < tn {
            place *= bn;
        }
    }
    code * tn + t_inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cardinal::Cardinal::Finite;

    fn no_tables() -> GroupBudget {
        GroupBudget { table_cap: 0, ..GroupBudget::default() }
    }

    #[test]
    fn cyclic_basics() {
        let g = ConcreteGroup::cyclic(6).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.mul(4, 5), 3);
        assert_eq!(g.inv(2), 4);
        assert_eq!(g.inv(0), 0);
        assert_eq!(g.pow(5, 0), 0);
        assert_eq!(g.pow(1, 5), 5);
        assert_eq!(g.element_order(1), 6);
        assert_eq!(g.element_order(2), 3);
        assert_eq!(g.element_order(3), 2);
        assert_eq!(g.exponent(), 6);
        assert!(g.is_abelian());
        assert!(g.check_axioms().is_ok());
    }

    #[test]
    fn trivial_group_invariants() {
        let inv = *ConcreteGroup::trivial().invariants();
        assert_eq!(inv.order, 1);
        assert_eq!(inv.exponent, 1);
        assert_eq!(inv.nilpotency_class, Nilpotency::Class(0));
        assert_eq!(inv.derived_length, Solubility::DerivedLength(0));
        assert!(inv.is_abelian);
    }

    #[test]
    fn quaternion_group() {
        let q = ConcreteGroup::quaternion8();
        assert!(q.check_axioms().is_ok());
        let inv = *q.invariants();
        assert_eq!(inv.order, 8);
        assert_eq!(inv.exponent, 4);
        assert_eq!(inv.nilpotency_class, Nilpotency::Class(2));
        assert_eq!(inv.derived_length, Solubility::DerivedLength(2));
        assert!(!inv.is_abelian);
        // i * j = k and j * i = -k.
        assert_eq!(q.mul(2, 4), 6);
        assert_eq!(q.mul(4, 2), 7);
        // i^2 = -1, and -1 is central of order 2.
        assert_eq!(q.mul(2, 2), 1);
        assert_eq!(q.element_order(1), 2);
        assert_eq!(q.element_order(2), 4);
    }

    #[test]
    fn m27_group() {
        let g = ConcreteGroup::m27();
        assert!(g.check_axioms().is_ok());
        let inv = *g.invariants();
        assert_eq!(inv.order, 27);
        assert_eq!(inv.exponent, 9);
        assert_eq!(inv.nilpotency_class, Nilpotency::Class(2));
        assert_eq!(inv.derived_length, Solubility::DerivedLength(2));
        assert!(!inv.is_abelian);
        // a = index 3, b = index 1; the defining relation b^-1 a b = a^4.
        let (a, b) = (3, 1);
        assert_eq!(g.element_order(a), 9);
        assert_eq!(g.element_order(b), 3);
        let conj = g.mul(g.mul(g.inv(b), a), b);
        assert_eq!(conj, g.pow(a, 4));
    }

    #[test]
    fn direct_product_of_coprime_cyclics_is_cyclic() {
        let c2 = ConcreteGroup::cyclic(2).unwrap();
        let c3 = ConcreteGroup::cyclic(3).unwrap();
        let g = c2.direct(&c3).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.label(), "C2 x C3");
        assert_eq!(g.exponent(), 6);
        assert!(g.is_abelian());
        assert!(g.check_axioms().is_ok());
        assert_eq!(
            g.abelian_decomposition().unwrap(),
            BoundedAbelian::from_integer(6)
        );
    }

    #[test]
    fn wreath_c2_c2_is_dihedral() {
        for budget in [GroupBudget::default(), no_tables()] {
            let c2 = ConcreteGroup::cyclic_with(2, &budget).unwrap();
            let g = c2.wreath_with(&c2, &budget).unwrap();
            assert_eq!(g.order(), 8);
            assert_eq!(g.label(), "C2 wr C2");
            assert!(g.check_axioms().is_ok());
            let inv = *g.invariants();
            assert_eq!(inv.exponent, 4);
            assert_eq!(inv.nilpotency_class, Nilpotency::Class(2));
            assert_eq!(inv.derived_length, Solubility::DerivedLength(2));
            assert!(!inv.is_abelian);
        }
    }

    #[test]
    fn wreath_c2_c3_is_not_nilpotent() {
        let c2 = ConcreteGroup::cyclic(2).unwrap();
        let c3 = ConcreteGroup::cyclic(3).unwrap();
        let g = c2.wreath(&c3).unwrap();
        assert_eq!(g.order(), 24);
        assert!(g.check_axioms().is_ok());
        let inv = *g.invariants();
        assert_eq!(inv.exponent, 6);
        assert_eq!(inv.nilpotency_class, Nilpotency::NotNilpotent);
        assert_eq!(inv.derived_length, Solubility::DerivedLength(2));
    }

    #[test]
    fn wreath_order_formula() {
        let c3 = ConcreteGroup::cyclic(3).unwrap();
        let c2 = ConcreteGroup::cyclic(2).unwrap();
        assert_eq!(c3.wreath(&c2).unwrap().order(), 18);
        assert_eq!(c2.wreath(&c2.direct(&c2).unwrap()).unwrap().order(), 64);
        let t = ConcreteGroup::trivial();
        assert_eq!(t.wreath(&c3).unwrap().order(), 3);
        assert_eq!(c3.wreath(&t).unwrap().order(), 3);
    }

    #[test]
    fn structural_and_materialized_wreath_agree() {
        let budget = GroupBudget::default();
        let c2 = ConcreteGroup::cyclic(2).unwrap();
        let c4 = ConcreteGroup::cyclic(4).unwrap();
        let fat = c2.wreath_with(&c4, &budget).unwrap();
        let thin = c2.wreath_with(&c4, &no_tables()).unwrap();
        assert_eq!(fat.order(), 64);
        for i in 0..64 {
            assert_eq!(fat.inv(i), thin.inv(i));
            for j in 0..64 {
                assert_eq!(fat.mul(i, j), thin.mul(i, j));
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        let c10 = ConcreteGroup::cyclic(10).unwrap();
        assert!(matches!(
            c10.wreath(&c10),
            Err(GroupError::CapExceeded { .. })
        ));
        let c9 = ConcreteGroup::cyclic(9).unwrap();
        let c100 = ConcreteGroup::cyclic(100).unwrap();
        assert!(matches!(
            c9.wreath(&c100),
            Err(GroupError::OrderOverflow) | Err(GroupError::CapExceeded { .. })
        ));
        let tight = GroupBudget { order_cap: 5, ..GroupBudget::default() };
        assert!(matches!(
            ConcreteGroup::cyclic_with(6, &tight),
            Err(GroupError::CapExceeded { requested: 6, cap: 5 })
        ));
    }

    #[test]
    fn subgroup_closure_finds_generated_subgroup() {
        let c12 = ConcreteGroup::cyclic(12).unwrap();
        assert_eq!(c12.subgroup_closure(&[4]), vec![0, 4, 8]);
        assert_eq!(c12.subgroup_closure(&[]), vec![0]);
        let q = ConcreteGroup::quaternion8();
        // <i> = {1, -1, i, -i}.
        assert_eq!(q.subgroup_closure(&[2]), vec![0, 1, 2, 3]);
    }

    #[test]
    fn abelian_decomposition_recovers_factors() {
        let c2 = ConcreteGroup::cyclic(2).unwrap();
        let c4 = ConcreteGroup::cyclic(4).unwrap();
        let g = c2.direct(&c4).unwrap().direct(&c4).unwrap();
        let d = g.abelian_decomposition().unwrap();
        assert_eq!(d.to_string(), "C(2^2)^2 x C(2^1)");
        let c12 = ConcreteGroup::cyclic(12).unwrap();
        assert_eq!(
            c12.abelian_decomposition().unwrap(),
            BoundedAbelian::normalize([(2, 2, Finite(1)), (3, 1, Finite(1))]).unwrap()
        );
        assert_eq!(
            ConcreteGroup::trivial().abelian_decomposition().unwrap(),
            BoundedAbelian::trivial()
        );
        assert!(matches!(
            ConcreteGroup::quaternion8().abelian_decomposition(),
            Err(GroupError::NotAbelian(_))
        ));
    }

    #[test]
    fn from_table_accepts_groups_and_rejects_junk() {
        // S3 as a table: e, r, r^2, s, sr, sr^2 with r^3 = s^2 = e and
        // r s = s r^2.
        let s3 = vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![1, 2, 0, 5, 3, 4],
            vec![2, 0, 1, 4, 5, 3],
            vec![3, 4, 5, 0, 1, 2],
            vec![4, 5, 3, 2, 0, 1],
            vec![5, 3, 4, 1, 2, 0],
        ];
        let g = ConcreteGroup::from_table("S3", &s3).unwrap();
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.invariants().nilpotency_class, Nilpotency::NotNilpotent);
        assert_eq!(g.invariants().derived_length, Solubility::DerivedLength(2));

        // A Latin square with identity that is not associative: the
        // smallest non-associative loop, of order 5.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            ConcreteGroup::from_table("L5", &loop5),
            Err(GroupError::BadTable(msg)) if msg.contains("associativity")
        ));

        let no_identity = vec![vec![1, 0], vec![0, 1]];
        assert!(ConcreteGroup::from_table("X", &no_identity).is_err());
        let not_latin = vec![vec![0, 1], vec![1, 1]];
        assert!(ConcreteGroup::from_table("X", &not_latin).is_err());
        let ragged = vec![vec![0, 1], vec![1]];
        assert!(ConcreteGroup::from_table("X", &ragged).is_err());
    }

    #[test]
    fn labels_parenthesize_by_precedence() {
        let c2 = ConcreteGroup::cyclic(2).unwrap();
        let c3 = ConcreteGroup::cyclic(3).unwrap();
        let w = c2.wreath(&c2).unwrap();
        assert_eq!(w.direct(&c3).unwrap().label(), "C2 wr C2 x C3");
        assert_eq!(c3.direct(&w).unwrap().label(), "C3 x C2 wr C2");
        let ww = w.wreath(&c2).unwrap();
        assert_eq!(ww.label(), "C2 wr C2 wr C2");
        let d = c2.direct(&c3).unwrap();
        assert_eq!(c2.wreath_with(&d, &no_tables()).unwrap().label(), "C2 wr (C2 x C3)");
        let nested = c3.direct(&d).unwrap();
        assert_eq!(nested.label(), "C3 x (C2 x C3)");
    }

    #[test]
    fn wreath_with_trivial_base_multiplies_like_the_top() {
        let t = ConcreteGroup::trivial();
        let c6 = ConcreteGroup::cyclic(6).unwrap();
        let w = t.wreath_with(&c6, &no_tables()).unwrap();
        assert_eq!(w.order(), 6);
        for i in 0..6 {
            assert_eq!(w.inv(i), c6.inv(i));
            for j in 0..6 {
                assert_eq!(w.mul(i, j), c6.mul(i, j));
            }
        }
    }
}
