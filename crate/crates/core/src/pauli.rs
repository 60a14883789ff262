//! Exact n-qubit Pauli strings with a tracked ℤ₄ phase.
//!
//! A string is stored as two bit-planes (`x`, `z`) plus the exponent `k` of
//! the global phase `iᵏ`. Bit `q` of each plane describes qubit `q`, with
//! qubit 0 the leftmost letter in the text form. The letter for a qubit is
//! read off the plane bits: `(0,0)=I`, `(1,0)=X`, `(1,1)=Y`, `(0,1)=Z`.
//! The phase is a plain multiplicative prefactor on the tensor product of
//! letters, so `Y` is the Pauli Y matrix and not `iXZ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::sign::Sign;

pub const MAX_QUBITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PauliError {
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("cannot parse Pauli string {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    /// Single-qubit product `self · other` as (phase exponent, letter).
    fn mul(self, other: Letter) -> (u8, Letter) {
        use Letter::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Phase `iᵏ` stored as `k mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    /// Real phases as a sign, `None` for ±i.
    pub fn as_sign(self) -> Option<Sign> {
        match self.0 {
            0 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    fn token(self) -> &'static str {
        ["+1", "+i", "-1", "-i"][self.0 as usize]
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl From<Sign> for Phase {
    fn from(s: Sign) -> Phase {
        match s {
            Sign::Plus => Phase::ONE,
            Sign::Minus => Phase::MINUS_ONE,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: u8,
    x: u16,
    z: u16,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self, PauliError> {
        check_qubits(n)?;
        Ok(PauliString { n: n as u8, x: 0, z: 0, phase: Phase::ONE })
    }

    pub fn from_letters(letters: &[Letter], phase: Phase) -> Result<Self, PauliError> {
        let mut p = Self::identity(letters.len())?;
        for (q, l) in letters.iter().enumerate() {
            let (bx, bz) = l.bits();
            p.x |= (bx as u16) << q;
            p.z |= (bz as u16) << q;
        }
        p.phase = phase;
        Ok(p)
    }

    /// `letter` on qubit `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, letter: Letter) -> Result<Self, PauliError> {
        let mut letters = vec![Letter::I; n];
        if qubit >= n {
            return Err(PauliError::QubitCount(qubit + 1));
        }
        letters[qubit] = letter;
        Self::from_letters(&letters, Phase::ONE)
    }

    pub fn num_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.num_qubits()).map(|q| self.letter(q)).collect()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Sign of a ± identity string; `None` if any letter is non-I or the phase is ±i.
    pub fn identity_sign(&self) -> Option<Sign> {
        if self.is_identity_up_to_phase() {
            self.phase.as_sign()
        } else {
            None
        }
    }

    fn same_size(&self, other: &Self) -> Result<(), PauliError> {
        if self.n != other.n {
            return Err(PauliError::DimensionMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, PauliError> {
        self.same_size(other)?;
        let mut k = self.phase.0 + other.phase.0;
        for q in 0..self.num_qubits() {
            let (dk, _) = self.letter(q).mul(other.letter(q));
            k += dk;
        }
        Ok(PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: Phase(k % 4),
        })
    }

    /// Two Pauli strings commute iff they anticommute on an even number of qubits.
    pub fn commutes(&self, other: &Self) -> Result<bool, PauliError> {
        self.same_size(other)?;
        let anti = (self.x & other.z) ^ (self.z & other.x);
        Ok(anti.count_ones().is_multiple_of(2))
    }
}

fn check_qubits(n: usize) -> Result<(), PauliError> {
    if n == 0 || n > MAX_QUBITS {
        return Err(PauliError::QubitCount(n));
    }
    Ok(())
}

fn common_size(set: &[PauliString]) -> Result<(), PauliError> {
    if let Some(first) = set.first() {
        for p in &set[1..] {
            first.same_size(p)?;
        }
    }
    Ok(())
}

/// `true` iff every pair in `set` commutes. The empty set counts as commuting.
pub fn mutually_commuting(set: &[PauliString]) -> Result<bool, PauliError> {
    common_size(set)?;
    for (i, p) in set.iter().enumerate() {
        for q in &set[i + 1..] {
            if !p.commutes(q)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Ordered product `set[0] · set[1] · …`. The empty product is `None`
/// because it has no qubit count; use [`set_product_n`] when that matters.
pub fn set_product(set: &[PauliString]) -> Result<Option<PauliString>, PauliError> {
    common_size(set)?;
    let mut it = set.iter();
    let Some(first) = it.next() else {
        return Ok(None);
    };
    let mut acc = *first;
    for p in it {
        acc = acc.multiply(p)?;
    }
    Ok(Some(acc))
}

/// Ordered product on `n` qubits; the empty set gives `+I`.
pub fn set_product_n(n: usize, set: &[PauliString]) -> Result<PauliString, PauliError> {
    let mut acc = PauliString::identity(n)?;
    for p in set {
        acc = acc.multiply(p)?;
    }
    Ok(acc)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.phase.token())?;
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    /// Accepts `"-1 XYZ"`, `"+i XY"`, the compact forms `"-1XYZ"`, `"-XYZ"`,
    /// `"iX"`, and bare letters `"XYZ"` (phase +1).
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| PauliError::Parse { text: text.to_string(), reason: reason.to_string() };
        let s = text.trim();
        let (phase, rest) = split_phase(s);
        let rest = rest.trim_start();
        if rest.is_empty() {
            return Err(err("no Pauli letters"));
        }
        let letters = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(err(&format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        PauliString::from_letters(&letters, phase)
    }
}

fn split_phase(s: &str) -> (Phase, &str) {
    for (tok, ph) in [
        ("+1", Phase::ONE),
        ("-1", Phase::MINUS_ONE),
        ("+i", Phase::I),
        ("-i", Phase::MINUS_I),
        ("i", Phase::I),
        ("+", Phase::ONE),
        ("-", Phase::MINUS_ONE),
    ] {
        if let Some(rest) = s.strip_prefix(tok) {
            return (ph, rest);
        }
    }
    (Phase::ONE, s)
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A named line of a configuration: a context of observables with a
/// product identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub name: String,
    pub members: Vec<PauliString>,
}

fn line(name: &str, members: &[&str]) -> Line {
    Line {
        name: name.to_string(),
        members: members.iter().map(|m| m.parse().expect("static Pauli text")).collect(),
    }
}

/// The nine two-qubit observables on three rows and three columns.
///
/// Rows first, then columns; the right column (`col3`) is the line whose
/// product is −1.
pub fn magic_square_lines() -> Vec<Line> {
    vec![
        line("row1", &["XI", "IX", "XX"]),
        line("row2", &["IY", "YI", "YY"]),
        line("row3", &["XY", "YX", "ZZ"]),
        line("col1", &["XI", "IY", "XY"]),
        line("col2", &["IX", "YI", "YX"]),
        line("col3", &["XX", "YY", "ZZ"]),
    ]
}

/// The ten three-qubit observables on the five lines of the star.
///
/// The horizontal line holds the four three-body products and multiplies
/// to −1; each other line pairs one three-body product with the three
/// single-qubit factors it is built from.
pub fn star_lines() -> Vec<Line> {
    vec![
        line("xxx", &["XII", "IXI", "IIX", "XXX"]),
        line("yyx", &["YII", "IYI", "IIX", "YYX"]),
        line("yxy", &["YII", "IXI", "IIY", "YXY"]),
        line("xyy", &["XII", "IYI", "IIY", "XYY"]),
        line("horizontal", &["XXX", "YYX", "YXY", "XYY"]),
    ]
}
