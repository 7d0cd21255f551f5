//! Logical relations as dense truth tables, and Schaefer's six tractability
//! conditions.
//!
//! A relation of arity `k` is a subset of `{0,1}^k`, stored as a bitset over
//! all `2^k` assignments. The classification follows the polymorphism view:
//! a relation is Horn iff closed under coordinatewise AND, dual-Horn iff closed
//! under OR, bijunctive iff closed under ternary majority and affine iff closed
//! under the XOR of any three members.

use std::fmt;

use serde::Serialize;

use crate::bits::{format_bits, low_mask, parse_bits};
use crate::error::{Error, Result};

/// Largest supported arity; tables hold `2^k` bits.
pub const MAX_ARITY: usize = 20;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    table: Vec<u64>,
    name: Option<String>,
}

impl Relation {
    /// The empty relation of the given arity.
    pub fn empty(arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::precondition("relation arity must be at least 1"));
        }
        if arity > MAX_ARITY {
            return Err(Error::ResourceLimit {
                what: "relation arity",
                requested: arity,
                limit: MAX_ARITY,
            });
        }
        let words = (1usize << arity).div_ceil(64);
        Ok(Relation {
            arity,
            table: vec![0; words],
            name: None,
        })
    }

    /// Builds a relation from member tuples (bit `i` = coordinate `i`).
    /// Duplicates collapse; bits above the arity are rejected.
    pub fn from_tuples(arity: usize, tuples: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut rel = Relation::empty(arity)?;
        for t in tuples {
            if t & !low_mask(arity) != 0 {
                return Err(Error::OutOfRange(format!(
                    "tuple {t:#b} for arity {arity}"
                )));
            }
            rel.insert(t);
        }
        Ok(rel)
    }

    /// Relation holding exactly the tuples accepted by `pred`.
    pub fn from_predicate(arity: usize, pred: impl Fn(u64) -> bool) -> Result<Self> {
        let mut rel = Relation::empty(arity)?;
        for t in 0..1u64 << arity {
            if pred(t) {
                rel.insert(t);
            }
        }
        Ok(rel)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn contains(&self, tuple: u64) -> bool {
        let t = tuple as usize;
        t >> self.arity == 0 && self.table[t / 64] >> (t % 64) & 1 == 1
    }

    fn insert(&mut self, tuple: u64) {
        let t = tuple as usize;
        self.table[t / 64] |= 1 << (t % 64);
    }

    pub fn len(&self) -> usize {
        self.table.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.table.iter().all(|&w| w == 0)
    }

    /// Member tuples in ascending order.
    pub fn tuples(&self) -> impl Iterator<Item = u64> + '_ {
        self.table.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                Some(w as u64 * 64 + b)
            })
        })
    }

    /// Flips every bit of every tuple.
    pub fn complement(&self) -> Relation {
        let mask = low_mask(self.arity);
        let mut out = Relation::empty(self.arity).expect("arity already validated");
        for t in self.tuples() {
            out.insert(t ^ mask);
        }
        out.name = self.name.clone();
        out
    }

    /// Reorders coordinates: coordinate `i` of the result is coordinate
    /// `perm[i]` of the input.
    pub fn permute(&self, perm: &[usize]) -> Result<Relation> {
        let mut seen = vec![false; self.arity];
        if perm.len() != self.arity || !perm.iter().all(|&p| p < self.arity && !std::mem::replace(&mut seen[p], true)) {
            return Err(Error::precondition("not a permutation of the coordinates"));
        }
        let mut out = Relation::empty(self.arity)?;
        for t in self.tuples() {
            let mut u = 0;
            for (i, &p) in perm.iter().enumerate() {
                u |= (t >> p & 1) << i;
            }
            out.insert(u);
        }
        out.name = self.name.clone();
        Ok(out)
    }

    pub fn properties(&self) -> PropertyFlags {
        relation_properties(self)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuples: Vec<String> = self.tuples().map(|t| format_bits(t, self.arity)).collect();
        f.debug_struct("Relation")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("tuples", &tuples)
            .finish()
    }
}

/// Frequently used relations.
pub mod known {
    use super::Relation;

    /// Not-all-equal on three coordinates.
    pub fn nae3() -> Relation {
        Relation::from_predicate(3, |t| t != 0 && t != 0b111)
            .unwrap()
            .named("NAE")
    }

    /// Exactly one of three coordinates is 1.
    pub fn one_in_three() -> Relation {
        Relation::from_tuples(3, [0b001, 0b010, 0b100])
            .unwrap()
            .named("ONE_IN_THREE")
    }

    /// `x1 xor x2 = 1`.
    pub fn xor2() -> Relation {
        parity(2, true).named("XOR2")
    }

    /// `x1 -> x2`, i.e. tuples `00`, `01`, `11`.
    pub fn implication() -> Relation {
        Relation::from_predicate(2, |t| t != 0b01).unwrap().named("IMP")
    }

    /// Tuples whose parity equals `odd`.
    pub fn parity(arity: usize, odd: bool) -> Relation {
        Relation::from_predicate(arity, |t| (t.count_ones() % 2 == 1) == odd)
            .unwrap()
            .named(format!("PAR{arity}_{}", odd as u8))
    }

    /// Disjunction of literals; `positive[i]` is the sign of coordinate `i`.
    pub fn clause(positive: &[bool]) -> Relation {
        let falsifier = positive
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &pos)| if pos { acc } else { acc | 1 << i });
        let name: String = positive.iter().map(|&p| if p { 'P' } else { 'N' }).collect();
        Relation::from_predicate(positive.len(), |t| t != falsifier)
            .unwrap()
            .named(format!("OR_{name}"))
    }
}

/// Schaefer's six conditions, numbered as in the classical statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    ZeroValid = 1,
    OneValid = 2,
    Horn = 3,
    DualHorn = 4,
    Bijunctive = 5,
    Affine = 6,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::ZeroValid,
        Condition::OneValid,
        Condition::Horn,
        Condition::DualHorn,
        Condition::Bijunctive,
        Condition::Affine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::ZeroValid => "zero_valid",
            Condition::OneValid => "one_valid",
            Condition::Horn => "horn",
            Condition::DualHorn => "dual_horn",
            Condition::Bijunctive => "bijunctive",
            Condition::Affine => "affine",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct PropertyFlags {
    pub zero_valid: bool,
    pub one_valid: bool,
    pub horn: bool,
    pub dual_horn: bool,
    pub bijunctive: bool,
    pub affine: bool,
}

impl PropertyFlags {
    pub fn get(&self, condition: Condition) -> bool {
        match condition {
            Condition::ZeroValid => self.zero_valid,
            Condition::OneValid => self.one_valid,
            Condition::Horn => self.horn,
            Condition::DualHorn => self.dual_horn,
            Condition::Bijunctive => self.bijunctive,
            Condition::Affine => self.affine,
        }
    }
}

/// Decides the six Schaefer properties of a single relation.
///
/// The empty relation is vacuously Horn, dual-Horn, bijunctive and affine
/// but neither 0-valid nor 1-valid.
pub fn relation_properties(rel: &Relation) -> PropertyFlags {
    let tuples: Vec<u64> = rel.tuples().collect();
    PropertyFlags {
        zero_valid: rel.contains(0),
        one_valid: rel.contains(low_mask(rel.arity)),
        horn: closed_under_pairs(rel, &tuples, |a, b| a & b),
        dual_horn: closed_under_pairs(rel, &tuples, |a, b| a | b),
        bijunctive: majority_closed(rel, &tuples),
        affine: xor_triple_closed(rel.arity, &tuples),
    }
}

fn closed_under_pairs(rel: &Relation, tuples: &[u64], op: impl Fn(u64, u64) -> u64) -> bool {
    tuples
        .iter()
        .enumerate()
        .all(|(i, &a)| tuples[i + 1..].iter().all(|&b| rel.contains(op(a, b))))
}

/// Majority closure via 2-decomposability: a boolean relation is closed under
/// majority iff it equals the set of tuples whose every unary and binary
/// projection lies in the corresponding projection of the relation.
fn majority_closed(rel: &Relation, tuples: &[u64]) -> bool {
    let k = rel.arity;
    if tuples.is_empty() {
        return true;
    }
    // pair[i][j] is a 4-bit mask of the (x_i, x_j) patterns seen, i <= j.
    let mut pair = vec![vec![0u8; k]; k];
    for &t in tuples {
        for i in 0..k {
            for j in i..k {
                let pattern = (t >> i & 1) | (t >> j & 1) << 1;
                pair[i][j] |= 1 << pattern;
            }
        }
    }
    (0..1u64 << k).all(|x| {
        rel.contains(x)
            || !(0..k).all(|i| {
                (i..k).all(|j| {
                    let pattern = (x >> i & 1) | (x >> j & 1) << 1;
                    pair[i][j] >> pattern & 1 == 1
                })
            })
    })
}

/// XOR-of-triples closure: with `t` any member, the relation is closed iff
/// `R xor t` is a linear subspace, i.e. `|R| = 2^rank(R xor t)`.
fn xor_triple_closed(arity: usize, tuples: &[u64]) -> bool {
    let Some(&anchor) = tuples.first() else {
        return true;
    };
    let rank = xor_basis_rank(arity, tuples.iter().map(|&t| t ^ anchor));
    tuples.len() == 1usize << rank
}

/// Rank over GF(2) of a family of bit vectors.
pub(crate) fn xor_basis_rank(width: usize, vectors: impl Iterator<Item = u64>) -> usize {
    let mut basis = vec![0u64; width.max(1)];
    let mut rank = 0;
    for mut v in vectors {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
        if rank == width {
            break;
        }
    }
    rank
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchaeferVerdict {
    pub tractable: bool,
    pub witness: Option<Condition>,
    pub with_constants: bool,
    pub per_relation: Vec<PropertyFlags>,
}

/// Classifies `SAT(S)` (or `SAT_C(S)` when `with_constants`) as tractable or
/// NP-complete. With constants only the Horn, dual-Horn, bijunctive and
/// affine conditions count.
pub fn schaefer_classify(relations: &[Relation], with_constants: bool) -> Result<SchaeferVerdict> {
    if relations.is_empty() {
        return Err(Error::precondition("relation set must be nonempty"));
    }
    let per_relation: Vec<PropertyFlags> = relations.iter().map(relation_properties).collect();
    let witness = Condition::ALL
        .into_iter()
        .filter(|c| !with_constants || *c >= Condition::Horn)
        .find(|&c| per_relation.iter().all(|flags| flags.get(c)));
    Ok(SchaeferVerdict {
        tractable: witness.is_some(),
        witness,
        with_constants,
        per_relation,
    })
}

/// Parses a relation file: blocks of `rel <name> <arity>` followed by
/// whitespace-separated tuples, each block ending at a blank line, the next
/// header or end of input. `#` starts a comment.
pub fn parse_relations(text: &str) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    let mut current: Option<(Relation, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.trim().is_empty() {
            out.extend(current.take().map(|(r, _)| r));
            continue;
        }
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = line.split_whitespace().peekable();
        if tokens.peek() == Some(&"rel") {
            out.extend(current.take().map(|(r, _)| r));
            tokens.next();
            let name = tokens
                .next()
                .ok_or_else(|| Error::parse(line_no, "missing relation name"))?;
            let arity_tok = tokens
                .next()
                .ok_or_else(|| Error::parse(line_no, "missing relation arity"))?;
            let arity: usize = arity_tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad arity `{arity_tok}`")))?;
            if arity == 0 {
                return Err(Error::parse(line_no, "arity must be at least 1"));
            }
            if arity > MAX_ARITY {
                return Err(Error::parse(
                    line_no,
                    format!("arity {arity} exceeds the maximum of {MAX_ARITY}"),
                ));
            }
            let rel = Relation::empty(arity)
                .map_err(|e| Error::parse(line_no, e.to_string()))?
                .named(name);
            current = Some((rel, line_no));
        } else if tokens.peek().is_some() && current.is_none() {
            return Err(Error::parse(line_no, "tuple outside of a `rel` block"));
        }
        if let Some((rel, _)) = current.as_mut() {
            for tok in tokens {
                if tok.len() != rel.arity {
                    return Err(Error::parse(
                        line_no,
                        format!("tuple `{tok}` has {} bits, expected {}", tok.len(), rel.arity),
                    ));
                }
                let t = parse_bits(tok)
                    .ok_or_else(|| Error::parse(line_no, format!("malformed bitstring `{tok}`")))?;
                rel.insert(t);
            }
        }
    }
    out.extend(current.take().map(|(r, _)| r));
    Ok(out)
}

/// Parses text holding exactly one relation block.
pub fn parse_relation(text: &str) -> Result<Relation> {
    let mut rels = parse_relations(text)?;
    match rels.len() {
        1 => Ok(rels.pop().unwrap()),
        n => Err(Error::parse(1, format!("expected one relation, found {n}"))),
    }
}

/// Writes relations in the format read by [`parse_relations`]. Unnamed
/// relations are called `R<index>`.
pub fn emit_relations(relations: &[Relation]) -> String {
    let mut out = String::new();
    for (i, rel) in relations.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let name = rel.name.clone().unwrap_or_else(|| format!("R{i}"));
        out.push_str(&format!("rel {name} {}\n", rel.arity));
        let tuples: Vec<String> = rel.tuples().map(|t| format_bits(t, rel.arity)).collect();
        if !tuples.is_empty() {
            out.push_str(&tuples.join(" "));
            out.push('\n');
        }
    }
    out
}
