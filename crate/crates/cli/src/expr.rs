//! The group-expression language: a small DSL naming finite groups and
//! bounded abelian groups in primary form.
//!
//! Grammar, loosest binding first (`wr` binds tighter than `x`, both
//! associate to the left; whitespace separates tokens and is otherwise
//! ignored):
//!
//! ```text
//! expr    := product
//! product := wreath { "x" wreath }
//! wreath  := atom { "wr" atom }
//! atom    := "C" int
//!          | "C" "(" int "^" int ")" [ "^" card ]
//!          | "Q8" | "M27" | "1" | "(" expr ")"
//! card    := int | "aleph" int | "continuum"
//! ```
//!
//! Parsing is purely syntactic: `C(4^2)` parses even though 4 is not
//! prime, and `C(3^3)^aleph0 wr C2` parses even though no concrete group
//! can be built from it. Both are rejected at evaluation time.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use wrvar_core::abelian::DecompositionError;
use wrvar_core::cardinal::Cardinal;
use wrvar_core::group::{ConcreteGroup, GroupBudget, GroupError};
use wrvar_core::BoundedAbelian;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupExpr {
    Trivial,
    Cyclic(u64),
    /// `C(p^u)^card`: a direct power of the cyclic group of order `p^u`.
    Primary {
        base: u64,
        power: u32,
        multiplicity: Cardinal,
    },
    Quaternion8,
    M27,
    Direct(Box<GroupExpr>, Box<GroupExpr>),
    Wreath(Box<GroupExpr>, Box<GroupExpr>),
}

/// A parse failure: the byte offset it occurred at, the token set that
/// would have been accepted there, and what was actually found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: expected {}; found {}",
            self.position,
            self.expected.join(" | "),
            self.found
        )
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{rendering} is not recognized as abelian; this operation needs \
             an expression built from cyclic and primary factors")]
    NotAbelian { rendering: String },
    #[error("C0 does not denote a group")]
    ZeroOrder,
    #[error("{rendering} has infinite cardinality and cannot be built concretely")]
    Infinite { rendering: String },
    #[error("the order of {rendering} does not fit in 64 bits")]
    Overflow { rendering: String },
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Caret,
    Int(u64),
    Word(String),
    End,
}

impl Tok {
    fn rendered(&self) -> String {
        match self {
            Tok::LParen => "'('".to_string(),
            Tok::RParen => "')'".to_string(),
            Tok::Caret => "'^'".to_string(),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Word(w) => format!("'{w}'"),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let value = text.parse::<u64>().map_err(|_| SyntaxError {
                    position: start,
                    expected: vec!["an integer below 2^64"],
                    found: format!("'{text}'"),
                })?;
                toks.push((start, Tok::Int(value)));
            }
            b if b.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push((start, Tok::Word(input[start..i].to_string())));
            }
            _ => {
                let ch = input[i..].chars().next().expect("offset is on a char boundary");
                return Err(SyntaxError {
                    position: i,
                    expected: vec!["a token"],
                    found: format!("'{ch}'"),
                });
            }
        }
    }
    toks.push((input.len(), Tok::End));
    Ok(toks)
}

const ATOM_EXPECTED: &[&str] = &["'C<n>'", "'C('", "'Q8'", "'M27'", "'1'", "'('"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn here(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: &[&'static str]) -> SyntaxError {
        SyntaxError {
            position: self.here(),
            expected: expected.to_vec(),
            found: self.peek().rendered(),
        }
    }

    fn expect_int(&mut self, expected: &'static str) -> Result<u64, SyntaxError> {
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => Err(self.fail(&[expected])),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &[&'static str]) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(expected))
        }
    }

    fn expr(&mut self) -> Result<GroupExpr, SyntaxError> {
        let mut acc = self.wreath()?;
        while matches!(self.peek(), Tok::Word(w) if w == "x") {
            self.bump();
            let rhs = self.wreath()?;
            acc = GroupExpr::Direct(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn wreath(&mut self) -> Result<GroupExpr, SyntaxError> {
        let mut acc = self.atom()?;
        while matches!(self.peek(), Tok::Word(w) if w == "wr") {
            self.bump();
            let rhs = self.atom()?;
            acc = GroupExpr::Wreath(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<GroupExpr, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, &["')'", "'x'", "'wr'"])?;
                Ok(inner)
            }
            Tok::Int(1) => {
                self.bump();
                Ok(GroupExpr::Trivial)
            }
            Tok::Word(w) if w == "Q8" => {
                self.bump();
                Ok(GroupExpr::Quaternion8)
            }
            Tok::Word(w) if w == "M27" => {
                self.bump();
                Ok(GroupExpr::M27)
            }
            Tok::Word(w) if w == "C" => {
                self.bump();
                match self.peek() {
                    Tok::LParen => {
                        self.bump();
                        self.primary_tail()
                    }
                    Tok::Int(n) => {
                        let n = *n;
                        self.bump();
                        Ok(GroupExpr::Cyclic(n))
                    }
                    _ => Err(self.fail(&["an integer", "'('"])),
                }
            }
            Tok::Word(w) if is_cyclic_word(&w) => {
                self.bump();
                Ok(GroupExpr::Cyclic(w[1..].parse().map_err(|_| SyntaxError {
                    position: self.toks[self.pos - 1].0 + 1,
                    expected: vec!["an integer below 2^64"],
                    found: format!("'{}'", &w[1..]),
                })?))
            }
            _ => Err(self.fail(ATOM_EXPECTED)),
        }
    }

    /// The rest of `C ( int ^ int ) [ ^ card ]`; the opening parenthesis
    /// is already consumed.
    fn primary_tail(&mut self) -> Result<GroupExpr, SyntaxError> {
        let base = self.expect_int("an integer")?;
        self.expect(Tok::Caret, &["'^'"])?;
        let power_at = self.here();
        let power_raw = self.expect_int("an integer")?;
        let power = u32::try_from(power_raw).map_err(|_| SyntaxError {
            position: power_at,
            expected: vec!["an exponent power below 2^32"],
            found: format!("'{power_raw}'"),
        })?;
        self.expect(Tok::RParen, &["')'"])?;
        let multiplicity = if *self.peek() == Tok::Caret {
            self.bump();
            self.card()?
        } else {
            Cardinal::Finite(1)
        };
        Ok(GroupExpr::Primary { base, power, multiplicity })
    }

    fn card(&mut self) -> Result<Cardinal, SyntaxError> {
        const CARD_EXPECTED: &[&str] = &["an integer", "'aleph<k>'", "'continuum'"];
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Cardinal::Finite(n))
            }
            Tok::Word(w) if w == "continuum" => {
                self.bump();
                Ok(Cardinal::Continuum)
            }
            Tok::Word(w) if w == "aleph" => {
                self.bump();
                let at = self.here();
                let index = self.expect_int("an aleph index")?;
                self.aleph(index, at)
            }
            Tok::Word(w) if w.starts_with("aleph") && w[5..].chars().all(|c| c.is_ascii_digit()) && w.len() > 5 => {
                let at = self.here() + 5;
                self.bump();
                let index = w[5..].parse::<u64>().map_err(|_| SyntaxError {
                    position: at,
                    expected: vec!["an aleph index below 2^32"],
                    found: format!("'{}'", &w[5..]),
                })?;
                self.aleph(index, at)
            }
            _ => Err(self.fail(CARD_EXPECTED)),
        }
    }

    fn aleph(&mut self, index: u64, at: usize) -> Result<Cardinal, SyntaxError> {
        let index = u32::try_from(index).map_err(|_| SyntaxError {
            position: at,
            expected: vec!["an aleph index below 2^32"],
            found: format!("'{index}'"),
        })?;
        Ok(Cardinal::Aleph(index))
    }
}

fn is_cyclic_word(w: &str) -> bool {
    w.len() > 1 && w.starts_with('C') && w[1..].chars().all(|c| c.is_ascii_digit())
}

pub fn parse(input: &str) -> Result<GroupExpr, SyntaxError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.fail(&["'x'", "'wr'", "end of input"]));
    }
    Ok(e)
}

impl FromStr for GroupExpr {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl GroupExpr {
    fn level(&self) -> u8 {
        match self {
            GroupExpr::Direct(..) => 0,
            GroupExpr::Wreath(..) => 1,
            _ => 2,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8, right: bool) -> fmt::Result {
        let level = self.level();
        // Left association is the canonical reading, so a right child at
        // the same level needs explicit parentheses.
        let parens = level < ctx || (level == ctx && right && level < 2);
        if parens {
            f.write_str("(")?;
        }
        match self {
            GroupExpr::Trivial => f.write_str("1")?,
            GroupExpr::Cyclic(n) => write!(f, "C{n}")?,
            GroupExpr::Primary { base, power, multiplicity } => {
                write!(f, "C({base}^{power})")?;
                if *multiplicity != Cardinal::Finite(1) {
                    write!(f, "^{multiplicity}")?;
                }
            }
            GroupExpr::Quaternion8 => f.write_str("Q8")?,
            GroupExpr::M27 => f.write_str("M27")?,
            GroupExpr::Direct(l, r) => {
                l.fmt_prec(f, 0, false)?;
                f.write_str(" x ")?;
                r.fmt_prec(f, 0, true)?;
            }
            GroupExpr::Wreath(l, r) => {
                l.fmt_prec(f, 1, false)?;
                f.write_str(" wr ")?;
                r.fmt_prec(f, 1, true)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }

    /// Evaluates to a bounded abelian group in primary normal form.
    /// Rejects `Q8`, `M27`, and wreath nodes; `decompose` falls back to
    /// the concrete engine for those.
    pub fn to_abelian(&self) -> Result<BoundedAbelian, EvalError> {
        match self {
            GroupExpr::Trivial => Ok(BoundedAbelian::trivial()),
            GroupExpr::Cyclic(0) => Err(EvalError::ZeroOrder),
            GroupExpr::Cyclic(n) => Ok(BoundedAbelian::from_integer(*n)),
            GroupExpr::Primary { base, power, multiplicity } => {
                Ok(BoundedAbelian::normalize([(*base, *power, *multiplicity)])?)
            }
            GroupExpr::Quaternion8 | GroupExpr::M27 | GroupExpr::Wreath(..) => {
                Err(EvalError::NotAbelian { rendering: self.to_string() })
            }
            GroupExpr::Direct(l, r) => Ok(l.to_abelian()?.direct_product(&r.to_abelian()?)?),
        }
    }

    /// Evaluates to a concrete finite group. Any infinite multiplicity
    /// anywhere in the expression is an error here, even though it
    /// parsed.
    pub fn to_concrete(&self, budget: &GroupBudget) -> Result<ConcreteGroup, EvalError> {
        match self {
            GroupExpr::Trivial => Ok(ConcreteGroup::trivial()),
            GroupExpr::Cyclic(0) => Err(EvalError::ZeroOrder),
            GroupExpr::Cyclic(n) => Ok(ConcreteGroup::cyclic_with(*n, budget)?),
            GroupExpr::Quaternion8 => Ok(ConcreteGroup::quaternion8()),
            GroupExpr::M27 => Ok(ConcreteGroup::m27()),
            GroupExpr::Primary { base, power, multiplicity } => {
                // Validate the factor symbolically first so C(4^2) fails
                // as "not prime" rather than as a plain cyclic group.
                BoundedAbelian::normalize([(*base, *power, Cardinal::Finite(1))])?;
                let copies = match multiplicity {
                    Cardinal::Finite(k) => *k,
                    _ => return Err(EvalError::Infinite { rendering: self.to_string() }),
                };
                let order = base
                    .checked_pow(*power)
                    .ok_or_else(|| EvalError::Overflow { rendering: self.to_string() })?;
                let cell = ConcreteGroup::cyclic_with(order, budget)?;
                let mut acc = if copies == 0 { ConcreteGroup::trivial() } else { cell.clone() };
                for _ in 1..copies {
                    acc = acc.direct_with(&cell, budget)?;
                }
                Ok(acc)
            }
            GroupExpr::Direct(l, r) => {
                Ok(l.to_concrete(budget)?.direct_with(&r.to_concrete(budget)?, budget)?)
            }
            GroupExpr::Wreath(l, r) => {
                Ok(l.to_concrete(budget)?.wreath_with(&r.to_concrete(budget)?, budget)?)
            }
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0, false)
    }
}
