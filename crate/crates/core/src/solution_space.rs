//! Discrete solution spaces: dense vertex sets of the `d`-cube, exhaustive
//! enumeration and coordinate projections.

use std::fmt;

use crate::bits::{delete_bits, format_bits, low_mask, parse_bits};
use crate::error::{Error, Result};
use crate::formula::{AffineSystem, Arg, Constraint, Formula};

/// Largest dimension enumerated exhaustively (`2^20` vertices).
pub const D_MAX: usize = 20;

/// A subset of `{0,1}^d`, as a bitset over vertex indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    dimension: usize,
    words: Vec<u64>,
}

fn check_dimension(dimension: usize, limit: usize) -> Result<()> {
    if dimension > limit.min(D_MAX) {
        return Err(Error::ResourceLimit {
            what: "dimension",
            requested: dimension,
            limit: limit.min(D_MAX),
        });
    }
    Ok(())
}

impl VertexSet {
    pub fn empty(dimension: usize) -> Result<Self> {
        check_dimension(dimension, D_MAX)?;
        Ok(VertexSet {
            dimension,
            words: vec![0; (1usize << dimension).div_ceil(64)],
        })
    }

    pub fn full(dimension: usize) -> Result<Self> {
        let mut v = VertexSet::empty(dimension)?;
        let n = 1usize << dimension;
        for (i, w) in v.words.iter_mut().enumerate() {
            let remaining = n - i * 64;
            *w = low_mask(remaining.min(64));
        }
        Ok(v)
    }

    pub fn from_vertices(dimension: usize, vertices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut v = VertexSet::empty(dimension)?;
        for x in vertices {
            if x >> dimension != 0 {
                return Err(Error::OutOfRange(format!(
                    "vertex {} in dimension {dimension}",
                    format_bits(x, 64).trim_end_matches('0')
                )));
            }
            v.insert(x);
        }
        Ok(v)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    #[inline]
    pub fn contains(&self, vertex: u64) -> bool {
        let v = vertex as usize;
        vertex >> self.dimension == 0 && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, vertex: u64) {
        debug_assert!(vertex >> self.dimension == 0);
        let v = vertex as usize;
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in ascending vertex index.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
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

    fn same_dimension(&self, other: &VertexSet) -> Result<()> {
        if self.dimension != other.dimension {
            return Err(Error::precondition(format!(
                "vertex sets of dimensions {} and {} do not match",
                self.dimension, other.dimension
            )));
        }
        Ok(())
    }

    pub fn union(&self, other: &VertexSet) -> Result<VertexSet> {
        self.same_dimension(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Ok(VertexSet {
            dimension: self.dimension,
            words,
        })
    }

    pub fn intersection(&self, other: &VertexSet) -> Result<VertexSet> {
        self.same_dimension(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Ok(VertexSet {
            dimension: self.dimension,
            words,
        })
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.dimension == other.dimension
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Projection deleting the coordinates in `dims` (0-based).
    pub fn project(&self, dims: &[usize]) -> Result<VertexSet> {
        project(self, dims)
    }

    /// Text form: `vset <d>` then one bitstring per member, ascending index.
    pub fn to_text(&self) -> String {
        let mut out = format!("vset {}\n", self.dimension);
        for v in self.iter() {
            out.push_str(&format_bits(v, self.dimension));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<VertexSet> {
        let mut set: Option<VertexSet> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match set.as_mut() {
                None => {
                    let d = line
                        .strip_prefix("vset")
                        .and_then(|r| r.trim().parse::<usize>().ok())
                        .ok_or_else(|| Error::parse(line_no, "expected `vset <d>`"))?;
                    set = Some(VertexSet::empty(d).map_err(|e| Error::parse(line_no, e.to_string()))?);
                }
                Some(s) => {
                    for tok in line.split_whitespace() {
                        if tok.len() != s.dimension {
                            return Err(Error::parse(
                                line_no,
                                format!("vertex `{tok}` has {} bits, expected {}", tok.len(), s.dimension),
                            ));
                        }
                        let v = parse_bits(tok)
                            .ok_or_else(|| Error::parse(line_no, format!("malformed bitstring `{tok}`")))?;
                        s.insert(v);
                    }
                }
            }
        }
        set.ok_or_else(|| Error::parse(1, "missing `vset` header"))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet(d={}, {{", self.dimension)?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&format_bits(v, self.dimension))?;
        }
        f.write_str("})")
    }
}

enum Check<'a> {
    Clause { pos: u64, neg: u64 },
    Apply { table: &'a crate::relations::Relation, vars: Vec<(usize, usize)>, fixed: u64 },
}

/// All satisfying assignments of `formula`, by exhaustive enumeration.
pub fn enumerate_solutions(formula: &Formula) -> Result<VertexSet> {
    enumerate_solutions_capped(formula, D_MAX)
}

/// As [`enumerate_solutions`] with a dimension cap at most [`D_MAX`].
pub fn enumerate_solutions_capped(formula: &Formula, max_dimension: usize) -> Result<VertexSet> {
    let d = formula.dimension();
    check_dimension(d, max_dimension)?;
    let checks: Vec<Check> = formula
        .constraints()
        .iter()
        .map(|c| match c {
            Constraint::Clause(cl) => {
                let (pos, neg) = cl.masks();
                Check::Clause { pos, neg }
            }
            Constraint::Apply { relation, args } => {
                let mut vars = Vec::new();
                let mut fixed = 0u64;
                for (i, a) in args.iter().enumerate() {
                    match *a {
                        Arg::Var(v) => vars.push((v, i)),
                        Arg::Const(b) => fixed |= (b as u64) << i,
                    }
                }
                Check::Apply {
                    table: &formula.relations()[*relation],
                    vars,
                    fixed,
                }
            }
        })
        .collect();
    let mut out = VertexSet::empty(d)?;
    'vertices: for x in 0..1u64 << d {
        for c in &checks {
            let ok = match c {
                Check::Clause { pos, neg } => x & pos != 0 || !x & neg != 0,
                Check::Apply { table, vars, fixed } => {
                    let t = vars.iter().fold(*fixed, |t, &(v, i)| t | (x >> v & 1) << i);
                    table.contains(t)
                }
            };
            if !ok {
                continue 'vertices;
            }
        }
        out.insert(x);
    }
    Ok(out)
}

/// All solutions of a GF(2) system.
pub fn affine_solutions(system: &AffineSystem) -> Result<VertexSet> {
    let d = system.dimension();
    let mut out = VertexSet::empty(d)?;
    for x in 0..1u64 << d {
        if system.eval(x) {
            out.insert(x);
        }
    }
    Ok(out)
}

/// Deletes the coordinates listed in `dims` (0-based, duplicates ignored).
pub fn project(set: &VertexSet, dims: &[usize]) -> Result<VertexSet> {
    let d = set.dimension;
    let mut removed = 0u64;
    for &i in dims {
        if i >= d {
            return Err(Error::OutOfRange(format!("projection dimension {}", i + 1)));
        }
        removed |= 1 << i;
    }
    let mut out = VertexSet::empty(d - removed.count_ones() as usize)?;
    for v in set.iter() {
        out.insert(delete_bits(v, removed));
    }
    Ok(out)
}

/// Removes variables that no constraint mentions and renumbers the rest in
/// order. Returns the new formula and the dropped (0-based) variables.
///
/// If no variable is constrained, variable 0 is kept so the dimension stays
/// at least one.
pub fn drop_unconstrained(formula: &Formula) -> (Formula, Vec<usize>) {
    let d = formula.dimension();
    let mut used = formula.constrained_mask();
    if used == 0 {
        used = 1;
    }
    let mut map = vec![None; d];
    let mut dropped = Vec::new();
    let mut next = 0;
    for (v, slot) in map.iter_mut().enumerate() {
        if used >> v & 1 == 1 {
            *slot = Some(next);
            next += 1;
        } else {
            dropped.push(v);
        }
    }
    let out = formula
        .remap(next, &map)
        .expect("every constrained variable is mapped");
    (out, dropped)
}
