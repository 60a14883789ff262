//! ±1 value assignments subject to product constraints on contexts.
//!
//! A [`ConstraintSystem`] lists observables and contexts; every context
//! demands that the product of its members' values equals a target sign.
//! Writing −1 as the bit 1 turns each context into a GF(2) linear equation,
//! which is what both the brute-force search and the parity certificate
//! work with.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::pauli::{mutually_commuting, set_product, PauliError, PauliString};
use crate::sign::Sign;

/// Largest observable count [`exhaustive_search`] will enumerate.
pub const MAX_EXHAUSTIVE: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssignError {
    #[error("context {context} references unknown observable {id:?}")]
    UnknownObservable { context: usize, id: String },
    #[error("context {context} lists observable {id:?} more than once")]
    DuplicateMember { context: usize, id: String },
    #[error("duplicate observable id {0:?}")]
    DuplicateObservable(String),
    #[error("context {0} is not mutually commuting")]
    NonCommuting(usize),
    #[error("context {context} multiplies to {product}, not ± identity")]
    UnsupportedIdentity { context: usize, product: String },
    #[error("context {0} is empty")]
    EmptyContext(usize),
    #[error("{count} observables exceed the exhaustive-search cap of {MAX_EXHAUSTIVE}; use parity_certificate instead")]
    TooLarge { count: usize },
    #[error("assignment has no value for observable {0:?}")]
    Partial(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    /// Indices into [`ConstraintSystem::observables`].
    pub members: Vec<usize>,
    pub target: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    observables: Vec<String>,
    contexts: Vec<Context>,
}

impl ConstraintSystem {
    /// Builds a system over an explicit observable list.
    pub fn new<S: AsRef<str>>(
        observables: Vec<String>,
        contexts: &[(Vec<S>, Sign)],
    ) -> Result<Self, AssignError> {
        let mut index = HashMap::new();
        for (i, id) in observables.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(AssignError::DuplicateObservable(id.clone()));
            }
        }
        let mut out = Vec::with_capacity(contexts.len());
        for (c, (members, target)) in contexts.iter().enumerate() {
            let mut idx = Vec::with_capacity(members.len());
            for m in members {
                let m = m.as_ref();
                let &i = index.get(m).ok_or_else(|| AssignError::UnknownObservable {
                    context: c,
                    id: m.to_string(),
                })?;
                if idx.contains(&i) {
                    return Err(AssignError::DuplicateMember { context: c, id: m.to_string() });
                }
                idx.push(i);
            }
            out.push(Context { members: idx, target: *target });
        }
        Ok(ConstraintSystem { observables, contexts: out })
    }

    /// Builds a system whose observables are the ids in order of first appearance.
    pub fn from_contexts<S: AsRef<str>>(contexts: &[(Vec<S>, Sign)]) -> Result<Self, AssignError> {
        let mut observables: Vec<String> = Vec::new();
        for (members, _) in contexts {
            for m in members {
                if !observables.iter().any(|o| o == m.as_ref()) {
                    observables.push(m.as_ref().to_string());
                }
            }
        }
        Self::new(observables, contexts)
    }

    pub fn observables(&self) -> &[String] {
        &self.observables
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn targets(&self) -> Vec<Sign> {
        self.contexts.iter().map(|c| c.target).collect()
    }

    /// Copy of the system with one context's target negated.
    pub fn with_flipped_target(&self, context: usize) -> Self {
        let mut s = self.clone();
        s.contexts[context].target = -s.contexts[context].target;
        s
    }

    fn member_mask(&self, context: usize) -> u32 {
        self.contexts[context].members.iter().fold(0u32, |m, &i| m | 1 << i)
    }
}

/// Builds a system from contexts of Pauli strings, taking each target from
/// the context's operator product.
///
/// Observables are identified by exact string equality, phase included, so
/// `X` and `-X` are distinct.
pub fn build_from_pauli(contexts: &[Vec<PauliString>]) -> Result<ConstraintSystem, AssignError> {
    let mut spec = Vec::with_capacity(contexts.len());
    for (c, members) in contexts.iter().enumerate() {
        if !mutually_commuting(members)? {
            return Err(AssignError::NonCommuting(c));
        }
        let product = set_product(members)?.ok_or(AssignError::EmptyContext(c))?;
        let target = product.identity_sign().ok_or_else(|| AssignError::UnsupportedIdentity {
            context: c,
            product: product.to_string(),
        })?;
        let ids: Vec<String> = members.iter().map(|p| p.to_string()).collect();
        spec.push((ids, target));
    }
    ConstraintSystem::from_contexts(&spec)
}

/// One context of a context file, with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextLine {
    pub line: usize,
    pub target: Sign,
    pub ids: Vec<String>,
}

/// Parses `target_sign: id1 id2 …` lines. Blank lines and `#` comments are
/// skipped.
pub fn parse_context_file(text: &str) -> Result<Vec<ContextLine>, AssignError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |reason: String| AssignError::Parse { line, reason };
        let (sign, ids) = body.split_once(':').ok_or_else(|| err("expected `target_sign: id1 id2 ...`".into()))?;
        let target: Sign = sign.trim().parse().map_err(|e| err(format!("{e}")))?;
        let ids: Vec<String> = ids.split_whitespace().map(str::to_owned).collect();
        if ids.is_empty() {
            return Err(err("context has no members".into()));
        }
        out.push(ContextLine { line, target, ids });
    }
    if out.is_empty() {
        return Err(AssignError::Parse { line: 0, reason: "no contexts found".into() });
    }
    Ok(out)
}

/// Builds a system from parsed context lines.
///
/// When `opaque` is false and every id parses as a Pauli string, the ids
/// are treated as operators: each context must commute and multiply to
/// `±I`, and its stated target must match that sign. Otherwise ids are
/// opaque labels and the stated targets are taken as given.
pub fn system_from_context_lines(lines: &[ContextLine], opaque: bool) -> Result<ConstraintSystem, AssignError> {
    let paulis: Option<Vec<Vec<PauliString>>> = if opaque {
        None
    } else {
        lines.iter().map(|l| l.ids.iter().map(|id| id.parse().ok()).collect()).collect()
    };
    let Some(paulis) = paulis else {
        let spec: Vec<(Vec<String>, Sign)> = lines.iter().map(|l| (l.ids.clone(), l.target)).collect();
        return ConstraintSystem::from_contexts(&spec).map_err(|e| at_line(e, lines));
    };
    let sys = build_from_pauli(&paulis).map_err(|e| at_line(e, lines))?;
    for (l, ctx) in lines.iter().zip(sys.contexts()) {
        if l.target != ctx.target {
            return Err(AssignError::Parse {
                line: l.line,
                reason: format!("stated target {} but the operator product is {}I", l.target, ctx.target),
            });
        }
    }
    Ok(sys)
}

/// Attaches the source line to errors that name a context.
fn at_line(e: AssignError, lines: &[ContextLine]) -> AssignError {
    let ctx = match &e {
        AssignError::UnknownObservable { context, .. }
        | AssignError::DuplicateMember { context, .. }
        | AssignError::UnsupportedIdentity { context, .. } => *context,
        AssignError::NonCommuting(c) | AssignError::EmptyContext(c) => *c,
        _ => return e,
    };
    match lines.get(ctx) {
        Some(l) => AssignError::Parse { line: l.line, reason: e.to_string() },
        None => e,
    }
}

/// A total map from observable id to its ±1 value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment(pub BTreeMap<String, Sign>);

impl Assignment {
    pub fn get(&self, id: &str) -> Option<Sign> {
        self.0.get(id).copied()
    }

    fn from_word(sys: &ConstraintSystem, word: u32) -> Self {
        Assignment(
            sys.observables
                .iter()
                .enumerate()
                .map(|(i, id)| (id.clone(), Sign::from_bit(word >> i & 1 == 1)))
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SearchOutcome {
    Satisfiable { assignment: Assignment, examined: u64 },
    Unsat { examined: u64 },
}

impl SearchOutcome {
    pub fn is_unsat(&self) -> bool {
        matches!(self, SearchOutcome::Unsat { .. })
    }

    pub fn examined(&self) -> u64 {
        match self {
            SearchOutcome::Satisfiable { examined, .. } | SearchOutcome::Unsat { examined } => *examined,
        }
    }
}

/// Enumerates all 2^n assignments in binary order (bit i set means
/// observable i takes −1). On UNSAT the examined count is exactly 2^n.
pub fn exhaustive_search(sys: &ConstraintSystem) -> Result<SearchOutcome, AssignError> {
    let n = sys.observables.len();
    if n > MAX_EXHAUSTIVE {
        return Err(AssignError::TooLarge { count: n });
    }
    let rows: Vec<(u32, u32)> = (0..sys.contexts.len())
        .map(|c| (sys.member_mask(c), sys.contexts[c].target.bit() as u32))
        .collect();
    let total: u64 = 1 << n;
    for word in 0..total {
        let w = word as u32;
        if rows.iter().all(|&(mask, t)| (w & mask).count_ones() & 1 == t) {
            return Ok(SearchOutcome::Satisfiable {
                assignment: Assignment::from_word(sys, w),
                examined: word + 1,
            });
        }
    }
    Ok(SearchOutcome::Unsat { examined: total })
}

pub fn check_assignment(sys: &ConstraintSystem, asg: &Assignment) -> Result<bool, AssignError> {
    let values = sys
        .observables
        .iter()
        .map(|id| asg.get(id).ok_or_else(|| AssignError::Partial(id.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(sys
        .contexts
        .iter()
        .all(|c| Sign::product(c.members.iter().map(|&i| values[i])) == c.target))
}

/// A set of contexts covering every observable an even number of times
/// whose targets multiply to −1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCertificate {
    pub contexts: Vec<usize>,
}

impl ParityCertificate {
    pub fn verify(&self, sys: &ConstraintSystem) -> bool {
        let mut counts = vec![0usize; sys.observables.len()];
        let mut target = Sign::Plus;
        for &c in &self.contexts {
            let Some(ctx) = sys.contexts.get(c) else {
                return false;
            };
            for &m in &ctx.members {
                counts[m] += 1;
            }
            target = target * ctx.target;
        }
        target == Sign::Minus && counts.iter().all(|k| k % 2 == 0)
    }
}

/// Dense GF(2) row over `width` columns.
#[derive(Clone)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(width: usize) -> Self {
        BitRow(vec![0; width.div_ceil(64)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }
    fn xor_with(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
}

/// Looks for a parity certificate by Gaussian elimination over GF(2).
///
/// Unknowns are the context indicators `s_j`. One equation per observable
/// asks for even coverage, and one more asks the chosen targets to have odd
/// parity. Pivots are taken at the lowest available row and column and free
/// unknowns are set to zero, so the certificate is reproducible. `None`
/// means no certificate exists; it does not imply satisfiability.
pub fn parity_certificate(sys: &ConstraintSystem) -> Option<ParityCertificate> {
    let m = sys.contexts.len();
    let n = sys.observables.len();
    let width = m + 1;
    let mut rows: Vec<BitRow> = (0..=n).map(|_| BitRow::zeros(width)).collect();
    for (j, ctx) in sys.contexts.iter().enumerate() {
        for &i in &ctx.members {
            rows[i].flip(j);
        }
        if ctx.target.bit() {
            rows[n].flip(j);
        }
    }
    rows[n].flip(m);

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next_row = 0;
    for col in 0..m {
        let Some(p) = (next_row..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next_row, p);
        let pivot = rows[next_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next_row && row.get(col) {
                row.xor_with(&pivot);
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
    }
    if rows[next_row..].iter().any(|r| r.get(m)) {
        return None;
    }
    let mut chosen: Vec<usize> = pivots.iter().filter(|&&(r, _)| rows[r].get(m)).map(|&(_, c)| c).collect();
    chosen.sort_unstable();
    let cert = ParityCertificate { contexts: chosen };
    debug_assert!(cert.verify(sys));
    Some(cert)
}
