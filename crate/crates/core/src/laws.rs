//! Words in free groups and brute-force law checking on concrete groups.
//!
//! A law of a group `G` is a word `w(x1, ..., xr)` that evaluates to the
//! identity under every substitution of elements of `G` for the
//! variables. Two groups generate the same variety exactly when they
//! have the same laws, which makes exhaustive law checking on small
//! groups an independent oracle for the symbolic decision procedure:
//! any word that is a law of one group but not the other certifies that
//! the varieties differ.
//!
//! Checking one word on `G` costs `|G|^r` evaluations, so everything
//! here runs under an explicit evaluation budget and refuses to start
//! work it cannot finish.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::abelian::Side;
use crate::group::{ConcreteGroup, GroupInvariants};

/// A freely reduced word over variables `x1, x2, ...`. Letters are
/// non-zero integers: `+v` stands for `xv`, `-v` for its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter 0 has no variable")]
    ZeroLetter,
    #[error("cannot parse word: {0}")]
    Parse(String),
}

impl Word {
    /// Builds a word, freely reducing adjacent inverse pairs.
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Result<Self, WordError> {
        let mut reduced: Vec<i32> = Vec::new();
        for l in letters {
            if l == 0 {
                return Err(WordError::ZeroLetter);
            }
            if reduced.last() == Some(&-l) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        Ok(Word { letters: reduced })
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of variables: the largest index mentioned.
    pub fn rank(&self) -> u32 {
        self.letters.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0)
    }

    /// Maximal runs of one variable: `(variable, signed exponent)` pairs
    /// with exponents accumulated, e.g. `x1 x1 x2^-1` gives
    /// `[(1, 2), (2, -1)]`.
    pub fn runs(&self) -> Vec<(u32, i64)> {
        let mut out: Vec<(u32, i64)> = Vec::new();
        for &l in &self.letters {
            let var = l.unsigned_abs();
            let step = if l > 0 { 1 } else { -1 };
            match out.last_mut() {
                Some((v, e)) if *v == var => *e += step,
                _ => out.push((var, step)),
            }
        }
        // Freely reduced words cannot cancel a whole run.
        debug_assert!(out.iter().all(|&(_, e)| e != 0));
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let rendered: Vec<String> = self
            .runs()
            .into_iter()
            .map(|(v, e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
            .collect();
        write!(f, "{}", rendered.join(" "))
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::empty());
        }
        let mut letters: Vec<i32> = Vec::new();
        for token in s.split_whitespace() {
            let body = token
                .strip_prefix('x')
                .ok_or_else(|| WordError::Parse(format!("expected x<var>, got {token:?}")))?;
            let (var_text, exp) = match body.split_once('^') {
                None => (body, 1i64),
                Some((v, e)) => (
                    v,
                    e.parse::<i64>()
                        .map_err(|_| WordError::Parse(format!("bad exponent in {token:?}")))?,
                ),
            };
            let var: i32 = var_text
                .parse()
                .map_err(|_| WordError::Parse(format!("bad variable in {token:?}")))?;
            if var <= 0 {
                return Err(WordError::Parse(format!("bad variable in {token:?}")));
            }
            let letter = if exp >= 0 { var } else { -var };
            for _ in 0..exp.unsigned_abs() {
                letters.push(letter);
            }
        }
        Word::new(letters)
    }
}

/// Evaluation allowance for law checking and scanning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LawBudget {
    pub max_evaluations: u64,
}

impl Default for LawBudget {
    fn default() -> Self {
        LawBudget { max_evaluations: 100_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("law check needs {needed} evaluations but only {left} remain of the budget")]
    BudgetExceeded { needed: u128, left: u64 },
}

/// All freely reduced words of length 1 to `max_len` over `rank`
/// variables, in order of length and then lexicographically by letter
/// with `x1 < x1^-1 < x2 < x2^-1 < ...`. There are
/// `2r * (2r-1)^(len-1)` words of each length.
pub fn enumerate_words(rank: u32, max_len: u32) -> impl Iterator<Item = Word> {
    assert!(rank >= 1, "word enumeration needs at least one variable");
    WordEnumerator {
        alphabet: 2 * rank as u16,
        max_len,
        seq: Vec::new(),
    }
}

struct WordEnumerator {
    alphabet: u16,
    max_len: u32,
    /// Letters of the previously emitted word, as alphabet codes
    /// `2*(var-1) + sign`; empty before the first word.
    seq: Vec<u16>,
}

impl WordEnumerator {
    /// A code may not be followed by its inverse, whose code differs in
    /// the lowest bit.
    fn allowed_after(prev: Option<u16>, code: u16) -> bool {
        prev != Some(code ^ 1)
    }

    fn advance(&mut self) -> bool {
        if self.seq.is_empty() {
            if self.max_len == 0 {
                return false;
            }
            self.seq.push(0);
            return true;
        }
        let mut pos = self.seq.len();
        while pos > 0 {
            pos -= 1;
            let prev = if pos == 0 { None } else { Some(self.seq[pos - 1]) };
            let mut code = self.seq[pos] + 1;
            while code < self.alphabet {
                if Self::allowed_after(prev, code) {
                    self.seq[pos] = code;
                    for i in (pos + 1)..self.seq.len() {
                        let p = self.seq[i - 1];
                        self.seq[i] = if p ^ 1 == 0 { 1 } else { 0 };
                    }
                    return true;
                }
                code += 1;
            }
        }
        // Exhausted this length; start the next with all x1.
        if self.seq.len() as u32 >= self.max_len {
            return false;
        }
        let len = self.seq.len() + 1;
        self.seq.clear();
        self.seq.resize(len, 0);
        true
    }
}

impl Iterator for WordEnumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if !self.advance() {
            return None;
        }
        let letters = self.seq.iter().map(|&code| {
            let var = (code / 2 + 1) as i32;
            if code % 2 == 0 { var } else { -var }
        });
        Some(Word::new(letters).expect("enumerated letters are non-zero"))
    }
}

/// Evaluates `word` on all `|g|^rank` assignments, short-circuiting at
/// the first non-identity value. Returns the verdict and the number of
/// assignments actually evaluated.
fn eval_law(g: &ConcreteGroup, word: &Word, allowance: u64) -> Result<(bool, u64), LawError> {
    let rank = word.rank() as usize;
    if rank == 0 {
        return Ok((true, 0));
    }
    let n = g.order();
    let needed = (n as u128).pow(rank as u32);
    if needed > allowance as u128 {
        return Err(LawError::BudgetExceeded { needed, left: allowance });
    }
    let runs = word.runs();
    let mut values = vec![0usize; rank];
    // Per-variable power caches, rebuilt only when that variable's value
    // changes: powers[v][k] = value^(k+1), inv_powers likewise for the
    // inverse.
    let mut powers: Vec<Vec<usize>> = vec![Vec::new(); rank];
    let mut inv_powers: Vec<Vec<usize>> = vec![Vec::new(); rank];
    let mut evaluated = 0u64;
    loop {
        evaluated += 1;
        let mut acc = 0usize;
        for &(var, exp) in &runs {
            let v = var as usize - 1;
            let x = if exp > 0 {
                let cache = &mut powers[v];
                if cache.is_empty() {
                    cache.push(values[v]);
                }
                while (cache.len() as i64) < exp {
                    let next = g.mul(*cache.last().unwrap(), values[v]);
                    cache.push(next);
                }
                cache[(exp - 1) as usize]
            } else {
                let cache = &mut inv_powers[v];
                if cache.is_empty() {
                    cache.push(g.inv(values[v]));
                }
                let base = cache[0];
                while (cache.len() as i64) < -exp {
                    let next = g.mul(*cache.last().unwrap(), base);
                    cache.push(next);
                }
                cache[(-exp - 1) as usize]
            };
            acc = g.mul(acc, x);
        }
        if acc != 0 {
            return Ok((false, evaluated));
        }
        // Odometer step over assignments.
        let mut pos = 0;
        loop {
            if pos == rank {
                return Ok((true, evaluated));
            }
            powers[pos].clear();
            inv_powers[pos].clear();
            values[pos] += 1;
            if values[pos] < n {
                break;
            }
            values[pos] = 0;
            pos += 1;
        }
    }
}

/// True when `word` evaluates to the identity under every assignment of
/// elements of `g`, under the default budget.
pub fn is_law(g: &ConcreteGroup, word: &Word) -> Result<bool, LawError> {
    is_law_with(g, word, &LawBudget::default())
}

pub fn is_law_with(g: &ConcreteGroup, word: &Word, budget: &LawBudget) -> Result<bool, LawError> {
    eval_law(g, word, budget.max_evaluations).map(|(law, _)| law)
}

/// Independent reference evaluator: walks the word letter by letter with
/// no caching and no run compression. Deliberately written with as
/// little shared machinery as possible so it can vouch for
/// [`is_law`].
pub fn is_law_naive(g: &ConcreteGroup, word: &Word) -> bool {
    let rank = word.rank() as usize;
    if rank == 0 {
        return true;
    }
    let n = g.order();
    let mut values = vec![0usize; rank];
    'assignments: loop {
        let mut acc = g.identity();
        for &letter in word.letters() {
            let value = values[letter.unsigned_abs() as usize - 1];
            let factor = if letter > 0 { value } else { g.inv(value) };
            acc = g.mul(acc, factor);
        }
        if acc != g.identity() {
            return false;
        }
        for pos in 0..rank {
            values[pos] += 1;
            if values[pos] < n {
                continue 'assignments;
            }
            values[pos] = 0;
        }
        return true;
    }
}

/// A word that is a law of exactly one of two groups, certifying that
/// they generate different varieties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminatingWord {
    pub word: Word,
    /// The side the word is a law of.
    pub law_of: Side,
}

/// Outcome of a [`scan_discriminating`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub discriminating: Option<DiscriminatingWord>,
    pub words_checked: u64,
    pub evaluations: u64,
    pub rank: u32,
    pub max_len: u32,
}

/// Searches all reduced words up to `rank` and `max_len` for one that is
/// a law of exactly one group. Every hit is re-verified with the naive
/// evaluator before being reported. Stops with an error rather than
/// starting a word the remaining budget cannot cover.
pub fn scan_discriminating(
    g1: &ConcreteGroup,
    g2: &ConcreteGroup,
    rank: u32,
    max_len: u32,
) -> Result<ScanReport, LawError> {
    scan_discriminating_with(g1, g2, rank, max_len, &LawBudget::default())
}

pub fn scan_discriminating_with(
    g1: &ConcreteGroup,
    g2: &ConcreteGroup,
    rank: u32,
    max_len: u32,
    budget: &LawBudget,
) -> Result<ScanReport, LawError> {
    let mut evaluations = 0u64;
    let mut words_checked = 0u64;
    for word in enumerate_words(rank, max_len) {
        let left = budget.max_evaluations - evaluations;
        let r = word.rank();
        let needed = (g1.order() as u128).pow(r) + (g2.order() as u128).pow(r);
        if needed > left as u128 {
            return Err(LawError::BudgetExceeded { needed, left });
        }
        let (law1, e1) = eval_law(g1, &word, left)?;
        let (law2, e2) = eval_law(g2, &word, left - e1)?;
        evaluations += e1 + e2;
        words_checked += 1;
        if law1 != law2 {
            assert_eq!(is_law_naive(g1, &word), law1, "evaluators disagree on {word}");
            assert_eq!(is_law_naive(g2, &word), law2, "evaluators disagree on {word}");
            let law_of = if law1 { Side::Left } else { Side::Right };
            return Ok(ScanReport {
                discriminating: Some(DiscriminatingWord { word, law_of }),
                words_checked,
                evaluations,
                rank,
                max_len,
            });
        }
    }
    Ok(ScanReport { discriminating: None, words_checked, evaluations, rank, max_len })
}

/// A mismatch in one of the variety-relevant invariants. Each of these
/// is determined by the laws of the group, so any mismatch certifies
/// that the two varieties differ. Group order deliberately does not
/// appear: it is not a variety invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantMismatch {
    Exponent(u64, u64),
    NilpotencyClass(crate::group::Nilpotency, crate::group::Nilpotency),
    DerivedLength(crate::group::Solubility, crate::group::Solubility),
}

impl fmt::Display for InvariantMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantMismatch::Exponent(a, b) => write!(f, "exponent {a} vs {b}"),
            InvariantMismatch::NilpotencyClass(a, b) => {
                write!(f, "nilpotency class {a} vs {b}")
            }
            InvariantMismatch::DerivedLength(a, b) => {
                write!(f, "derived length {a} vs {b}")
            }
        }
    }
}

/// Comparison of the variety-relevant invariants of two groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProbe {
    pub left: GroupInvariants,
    pub right: GroupInvariants,
    pub mismatches: Vec<InvariantMismatch>,
}

impl InvariantProbe {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn invariant_probe(g1: &ConcreteGroup, g2: &ConcreteGroup) -> InvariantProbe {
    let left = *g1.invariants();
    let right = *g2.invariants();
    let mut mismatches = Vec::new();
    if left.exponent != right.exponent {
        mismatches.push(InvariantMismatch::Exponent(left.exponent, right.exponent));
    }
    if left.nilpotency_class != right.nilpotency_class {
        mismatches.push(InvariantMismatch::NilpotencyClass(
            left.nilpotency_class,
            right.nilpotency_class,
        ));
    }
    if left.derived_length != right.derived_length {
        mismatches.push(InvariantMismatch::DerivedLength(
            left.derived_length,
            right.derived_length,
        ));
    }
    InvariantProbe { left, right, mismatches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Nilpotency;

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn words_reduce_and_render() {
        let w = Word::new([1, 1, -2, 2, -1]).unwrap();
        assert_eq!(w.letters(), &[1]);
        assert_eq!(w.to_string(), "x1");
        let c = Word::new([-1, -2, 1, 2]).unwrap();
        assert_eq!(c.to_string(), "x1^-1 x2^-1 x1 x2");
        assert_eq!(c.rank(), 2);
        assert_eq!(c.runs(), vec![(1, -1), (2, -1), (1, 1), (2, 1)]);
        assert_eq!(Word::new([1, -1]).unwrap(), Word::empty());
        assert_eq!(Word::empty().to_string(), "1");
        assert!(matches!(Word::new([1, 0]), Err(WordError::ZeroLetter)));
    }

    #[test]
    fn word_parsing_round_trips() {
        for s in ["x1", "x1^2 x2^-1 x1^-1", "x2^-3", "1", "x10^4"] {
            let w = word(s);
            assert_eq!(w.to_string(), s);
            assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }
        // Parsing reduces.
        assert_eq!(word("x1 x1^-1"), Word::empty());
        assert!("y1".parse::<Word>().is_err());
        assert!("x0".parse::<Word>().is_err());
        assert!("x1^b".parse::<Word>().is_err());
    }

    #[test]
    fn enumeration_counts_match_the_formula() {
        for rank in 1..=2u32 {
            for max_len in 0..=5u32 {
                let count = enumerate_words(rank, max_len).count() as u128;
                let r = rank as u128;
                let expected: u128 =
                    (1..=max_len as u128).map(|l| 2 * r * (2 * r - 1).pow(l as u32 - 1)).sum();
                assert_eq!(count, expected, "rank {rank} len {max_len}");
            }
        }
    }

    #[test]
    fn enumeration_order_is_length_then_lex() {
        let words: Vec<String> =
            enumerate_words(2, 2).map(|w| w.to_string()).collect();
        assert_eq!(
            words,
            vec![
                "x1", "x1^-1", "x2", "x2^-1",
                "x1^2", "x1 x2", "x1 x2^-1",
                "x1^-2", "x1^-1 x2", "x1^-1 x2^-1",
                "x2 x1", "x2 x1^-1", "x2^2",
                "x2^-1 x1", "x2^-1 x1^-1", "x2^-2",
            ]
        );
        // Every enumerated word is freely reduced, i.e. survives new().
        for w in enumerate_words(3, 4) {
            assert_eq!(Word::new(w.letters().iter().copied()).unwrap(), w);
        }
    }

    #[test]
    fn laws_of_small_groups() {
        let c6 = ConcreteGroup::cyclic(6).unwrap();
        let q8 = ConcreteGroup::quaternion8();
        let commutator = word("x1^-1 x2^-1 x1 x2");
        assert_eq!(is_law(&c6, &commutator), Ok(true));
        assert_eq!(is_law(&q8, &commutator), Ok(false));
        assert_eq!(is_law(&c6, &word("x1^6")), Ok(true));
        assert_eq!(is_law(&c6, &word("x1^4")), Ok(false));
        assert_eq!(is_law(&q8, &word("x1^4")), Ok(true));
        assert_eq!(is_law(&q8, &word("x1^2")), Ok(false));
        // Q8 has central squares: [x1^2, x2] is a law.
        assert_eq!(is_law(&q8, &word("x1^-2 x2^-1 x1^2 x2")), Ok(true));
        assert_eq!(is_law(&q8, &Word::empty()), Ok(true));
    }

    #[test]
    fn budget_is_enforced() {
        let c6 = ConcreteGroup::cyclic(6).unwrap();
        let tight = LawBudget { max_evaluations: 5 };
        assert!(matches!(
            is_law_with(&c6, &word("x1^6"), &tight),
            Err(LawError::BudgetExceeded { needed: 6, left: 5 })
        ));
        assert!(matches!(
            scan_discriminating_with(&c6, &c6, 2, 3, &tight),
            Err(LawError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn scan_separates_c4_from_c2_squared() {
        let c4 = ConcreteGroup::cyclic(4).unwrap();
        let c2 = ConcreteGroup::cyclic(2).unwrap();
        let c2c2 = c2.direct(&c2).unwrap();
        let report = scan_discriminating(&c4, &c2c2, 1, 2).unwrap();
        let hit = report.discriminating.expect("x1^2 separates them");
        assert_eq!(hit.word, word("x1^2"));
        assert_eq!(hit.law_of, Side::Right);
        assert_eq!(report.words_checked, 3);
    }

    #[test]
    fn scan_finds_nothing_between_equal_law_groups() {
        let c6 = ConcreteGroup::cyclic(6).unwrap();
        let c6_alt = ConcreteGroup::cyclic(2)
            .unwrap()
            .direct(&ConcreteGroup::cyclic(3).unwrap())
            .unwrap();
        let report = scan_discriminating(&c6, &c6_alt, 2, 4).unwrap();
        assert_eq!(report.discriminating, None);
        assert_eq!(report.words_checked, 4 + 12 + 36 + 108);
        assert!(report.evaluations > 0);
    }

    #[test]
    fn cached_and_naive_evaluators_agree() {
        let q8 = ConcreteGroup::quaternion8();
        let c2 = ConcreteGroup::cyclic(2).unwrap();
        let d4 = c2.wreath(&c2).unwrap();
        for w in enumerate_words(2, 4) {
            for g in [&q8, &d4] {
                assert_eq!(is_law(g, &w), Ok(is_law_naive(g, &w)), "word {w}");
            }
        }
    }

    #[test]
    fn probe_reports_law_determined_invariants_only() {
        let q8 = ConcreteGroup::quaternion8();
        let c8 = ConcreteGroup::cyclic(8).unwrap();
        let probe = invariant_probe(&q8, &c8);
        assert!(!probe.agrees());
        assert_eq!(
            probe.mismatches,
            vec![
                InvariantMismatch::Exponent(4, 8),
                InvariantMismatch::NilpotencyClass(
                    Nilpotency::Class(2),
                    Nilpotency::Class(1)
                ),
                InvariantMismatch::DerivedLength(
                    crate::group::Solubility::DerivedLength(2),
                    crate::group::Solubility::DerivedLength(1)
                ),
            ]
        );
        // Same group through different constructions: no mismatch, even
        // though one is a table and the other structural.
        let c2 = ConcreteGroup::cyclic(2).unwrap();
        let v1 = c2.direct(&c2).unwrap();
        let v2 = ConcreteGroup::from_table(
            "V4",
            &[
                vec![0, 1, 2, 3],
                vec![1, 0, 3, 2],
                vec![2, 3, 0, 1],
                vec![3, 2, 1, 0],
            ],
        )
        .unwrap();
        assert!(invariant_probe(&v1, &v2).agrees());
    }
}
