//! Homology of cubical and simplicial chain complexes.
//!
//! Ranks and invariant factors come from exact elimination: a chain complex
//! is first shrunk by elementary collapses (pairs `σ < τ` where `τ` is the
//! only coface of `σ` and the incidence is a unit), which preserves homology
//! over every coefficient ring. Boundary matrices of what remains are reduced
//! by sparse unit-pivot elimination in `i64`, and whatever is left over goes
//! through a dense Smith normal form in arbitrary precision.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::cubical::{CubicalComplex, IntegerMatrix};
use crate::error::{Error, Result};

/// Diagonal form `d_1 | d_2 | ...` of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` entries: the nonzero invariant factors in
    /// divisibility order, then zeros.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| **d > BigInt::one()).cloned().collect()
    }
}

pub fn smith_normal_form(matrix: &IntegerMatrix) -> SmithForm {
    let small: Option<Vec<Vec<(u32, i64)>>> = (0..matrix.cols())
        .map(|c| {
            matrix
                .column(c)
                .iter()
                .map(|(r, v)| v.to_i64().map(|v| (*r as u32, v)))
                .collect()
        })
        .collect();
    let (rank, torsion) = match small {
        Some(cols) => integer_invariants(matrix.rows(), cols),
        None => {
            let diag = dense_snf(matrix.to_dense());
            let torsion = diag.iter().filter(|d| !d.is_one()).cloned().collect();
            (diag.len(), torsion)
        }
    };
    let size = matrix.rows().min(matrix.cols());
    let mut diagonal = vec![BigInt::one(); rank - torsion.len()];
    diagonal.extend(torsion);
    diagonal.resize(size, BigInt::zero());
    SmithForm { diagonal, rank }
}

/// Coefficient ring for homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Coefficients {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Z2")]
    Mod2,
    #[serde(rename = "Q")]
    Rationals,
}

impl Coefficients {
    pub const ALL: [Coefficients; 3] = [Coefficients::Integers, Coefficients::Rationals, Coefficients::Mod2];

    pub fn tag(self) -> &'static str {
        match self {
            Coefficients::Integers => "Z",
            Coefficients::Mod2 => "Z2",
            Coefficients::Rationals => "Q",
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Coefficients {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "int" | "integers" => Ok(Coefficients::Integers),
            "z2" | "mod2" | "f2" | "gf2" => Ok(Coefficients::Mod2),
            "q" | "rationals" => Ok(Coefficients::Rationals),
            _ => Err(Error::precondition(format!("unknown coefficient system `{s}` (expected Z, Z2 or Q)"))),
        }
    }
}

/// Betti numbers and torsion in every degree up to the top dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub coeffs: Coefficients,
    pub betti: Vec<usize>,
    /// Invariant factors `> 1` per degree; always empty over a field.
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<Vec<BigInt>>,
}

fn serialize_torsion<S: Serializer>(torsion: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(torsion.len()))?;
    for degree in torsion {
        let values: Vec<serde_json::Value> = degree
            .iter()
            .map(|t| match t.to_u64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(t.to_string()),
            })
            .collect();
        seq.serialize_element(&values)?;
    }
    seq.end()
}

impl HomologyProfile {
    /// True when `H_q` vanishes for every `q >= p`.
    pub fn trivial_from(&self, p: usize) -> bool {
        self.betti.iter().skip(p).all(|&b| b == 0) && self.torsion.iter().skip(p).all(Vec::is_empty)
    }

    /// The profile of a point: `H_0` free of rank one, nothing else.
    pub fn is_acyclic(&self) -> bool {
        self.betti.first() == Some(&1) && self.torsion.first().is_some_and(Vec::is_empty) && self.trivial_from(1)
    }

    pub fn euler_characteristic(&self) -> i64 {
        crate::cubical::alternating_sum(&self.betti)
    }

    /// Same groups, ignoring trailing trivial degrees.
    pub fn same_groups(&self, other: &HomologyProfile) -> bool {
        fn trimmed(p: &HomologyProfile) -> (Vec<usize>, Vec<Vec<BigInt>>) {
            let mut b = p.betti.clone();
            let mut t = p.torsion.clone();
            while b.last() == Some(&0) && t.last().is_some_and(Vec::is_empty) {
                b.pop();
                t.pop();
            }
            (b, t)
        }
        self.coeffs == other.coeffs && trimmed(self) == trimmed(other)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serializes")
    }
}

/// A free chain complex `C_top -> ... -> C_0` with sparse boundary maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    sizes: Vec<usize>,
    /// `boundaries[p - 1]` is `∂_p`: one sorted `(row, value)` list per cell.
    boundaries: Vec<Vec<Vec<(u32, i32)>>>,
}

impl ChainComplex {
    /// Validates shapes; `∂∂ = 0` is the caller's responsibility.
    pub fn new(sizes: Vec<usize>, mut boundaries: Vec<Vec<Vec<(u32, i32)>>>) -> Result<Self> {
        if boundaries.len() + 1 != sizes.len().max(1) {
            return Err(Error::precondition("need one boundary map per positive degree"));
        }
        for (i, b) in boundaries.iter_mut().enumerate() {
            if b.len() != sizes[i + 1] {
                return Err(Error::precondition(format!("boundary {} has the wrong column count", i + 1)));
            }
            for col in b.iter_mut() {
                col.retain(|e| e.1 != 0);
                col.sort_unstable();
                if col.iter().any(|e| e.0 as usize >= sizes[i]) || col.windows(2).any(|w| w[0].0 == w[1].0) {
                    return Err(Error::precondition(format!("boundary {} has a bad row index", i + 1)));
                }
            }
        }
        Ok(ChainComplex { sizes, boundaries })
    }

    pub(crate) fn from_parts(sizes: Vec<usize>, boundaries: Vec<Vec<Vec<(u32, i32)>>>) -> Self {
        debug_assert_eq!(boundaries.len() + 1, sizes.len().max(1));
        ChainComplex { sizes, boundaries }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Removes collapsible pairs until none remain.
    pub fn collapsed(&self) -> ChainComplex {
        let levels = self.sizes.len();
        if levels < 2 {
            return self.clone();
        }
        // cofaces[p][i]: (p+1)-cells with i in their boundary, with incidence.
        let mut cofaces: Vec<Vec<Vec<(u32, i32)>>> = self.sizes.iter().map(|&n| vec![Vec::new(); n]).collect();
        for (p, b) in self.boundaries.iter().enumerate() {
            for (j, col) in b.iter().enumerate() {
                for &(i, v) in col {
                    cofaces[p][i as usize].push((j as u32, v));
                }
            }
        }
        let mut alive: Vec<Vec<bool>> = self.sizes.iter().map(|&n| vec![true; n]).collect();
        let mut count: Vec<Vec<u32>> = cofaces.iter().map(|c| c.iter().map(|l| l.len() as u32).collect()).collect();
        let mut stack: Vec<(usize, u32)> = Vec::new();
        for p in 0..levels - 1 {
            for i in 0..self.sizes[p] {
                if count[p][i] == 1 {
                    stack.push((p, i as u32));
                }
            }
        }
        while let Some((p, i)) = stack.pop() {
            let iu = i as usize;
            if !alive[p][iu] || count[p][iu] != 1 {
                continue;
            }
            let Some(&(j, v)) = cofaces[p][iu].iter().find(|(j, _)| alive[p + 1][*j as usize]) else {
                continue;
            };
            let ju = j as usize;
            if v.abs() != 1 || (p + 1 < levels && count[p + 1][ju] != 0) {
                continue;
            }
            alive[p][iu] = false;
            alive[p + 1][ju] = false;
            for &(r, _) in &self.boundaries[p][ju] {
                let ru = r as usize;
                count[p][ru] -= 1;
                if alive[p][ru] && count[p][ru] == 1 {
                    stack.push((p, r));
                }
            }
            if p > 0 {
                for &(r, _) in &self.boundaries[p - 1][iu] {
                    let ru = r as usize;
                    count[p - 1][ru] -= 1;
                    if alive[p - 1][ru] && count[p - 1][ru] == 1 {
                        stack.push((p - 1, r));
                    }
                }
            }
        }
        let index: Vec<Vec<u32>> = alive
            .iter()
            .map(|a| {
                let mut next = 0u32;
                a.iter()
                    .map(|&x| {
                        let k = next;
                        next += x as u32;
                        if x {
                            k
                        } else {
                            u32::MAX
                        }
                    })
                    .collect()
            })
            .collect();
        let mut sizes: Vec<usize> = alive.iter().map(|a| a.iter().filter(|&&x| x).count()).collect();
        let boundaries: Vec<Vec<Vec<(u32, i32)>>> = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(p, b)| {
                b.iter()
                    .zip(&alive[p + 1])
                    .filter(|(_, &a)| a)
                    .map(|(col, _)| col.iter().map(|&(r, v)| (index[p][r as usize], v)).collect())
                    .collect()
            })
            .collect();
        let mut boundaries = boundaries;
        while sizes.len() > 1 && sizes.last() == Some(&0) {
            sizes.pop();
            boundaries.pop();
        }
        ChainComplex { sizes, boundaries }
    }

    pub fn homology(&self, coeffs: Coefficients) -> HomologyProfile {
        let degrees = self.sizes.len();
        let reduced = self.collapsed();
        let mut ranks = vec![0usize; degrees + 1];
        let mut torsion = vec![Vec::new(); degrees];
        for (i, b) in reduced.boundaries.iter().enumerate() {
            let p = i + 1;
            let rows = reduced.sizes[i];
            match coeffs {
                Coefficients::Mod2 => {
                    let cols = b
                        .iter()
                        .map(|c| c.iter().filter(|e| e.1 % 2 != 0).map(|e| e.0).collect())
                        .collect();
                    ranks[p] = gf2_rank(cols);
                }
                Coefficients::Integers | Coefficients::Rationals => {
                    let cols = b.iter().map(|c| c.iter().map(|&(r, v)| (r, v as i64)).collect()).collect();
                    let (rank, factors) = integer_invariants(rows, cols);
                    ranks[p] = rank;
                    if coeffs == Coefficients::Integers {
                        torsion[p - 1] = factors;
                    }
                }
            }
        }
        let betti = (0..degrees)
            .map(|p| reduced.sizes.get(p).copied().unwrap_or(0) - ranks[p] - ranks[p + 1])
            .collect();
        HomologyProfile { coeffs, betti, torsion }
    }
}

pub fn homology(complex: &CubicalComplex, coeffs: Coefficients) -> HomologyProfile {
    complex.chain_complex().homology(coeffs)
}

pub fn simplicial_homology(complex: &crate::constructions::SimplicialComplex, coeffs: Coefficients) -> HomologyProfile {
    complex.chain_complex().homology(coeffs)
}

/// Rank over GF(2) of a matrix given by the sorted row sets of its columns.
pub(crate) fn gf2_rank(columns: Vec<Vec<u32>>) -> usize {
    let mut owner: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(columns.len());
    let mut rank = 0;
    for mut col in columns {
        while let Some(&low) = col.last() {
            match owner.get(&low) {
                Some(&k) => col = symmetric_difference(&col, &reduced[k]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            owner.insert(low, reduced.len());
            rank += 1;
        }
        reduced.push(col);
    }
    rank
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `col_k - factor * col_c`, or `None` on overflow. Zero entries are dropped.
fn axpy(target: &[(u32, i64)], factor: i64, pivot: &[(u32, i64)]) -> Option<Vec<(u32, i64)>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let take_t = j == pivot.len() || (i < target.len() && target[i].0 < pivot[j].0);
        let take_p = i == target.len() || (j < pivot.len() && pivot[j].0 < target[i].0);
        if take_t {
            out.push(target[i]);
            i += 1;
        } else if take_p {
            let v = factor.checked_mul(pivot[j].1)?.checked_neg()?;
            out.push((pivot[j].0, v));
            j += 1;
        } else {
            let v = target[i].1.checked_sub(factor.checked_mul(pivot[j].1)?)?;
            if v != 0 {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Rank and invariant factors `> 1` of a sparse integer matrix.
pub(crate) fn integer_invariants(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> (usize, Vec<BigInt>) {
    let mut cols: Vec<Option<Vec<(u32, i64)>>> = columns.into_iter().map(|c| (!c.is_empty()).then_some(c)).collect();
    let mut row_cols: Vec<Vec<u32>> = vec![Vec::new(); rows];
    for (c, col) in cols.iter().enumerate() {
        for &(r, _) in col.iter().flatten() {
            row_cols[r as usize].push(c as u32);
        }
    }
    let mut unit_rank = 0usize;
    'passes: loop {
        let mut order: Vec<usize> = (0..cols.len()).filter(|&c| cols[c].is_some()).collect();
        order.sort_by_key(|&c| cols[c].as_ref().map_or(0, Vec::len));
        let mut progress = false;
        for c in order {
            let Some(col) = cols[c].as_ref() else { continue };
            if col.is_empty() {
                cols[c] = None;
                continue;
            }
            let Some(&(r, v)) = col
                .iter()
                .filter(|e| e.1.abs() == 1)
                .min_by_key(|e| row_cols[e.0 as usize].len())
            else {
                continue;
            };
            let pivot = cols[c].take().expect("checked above");
            let mut partners = std::mem::take(&mut row_cols[r as usize]);
            partners.sort_unstable();
            partners.dedup();
            for &k in &partners {
                let k = k as usize;
                let Some(target) = cols[k].as_ref() else { continue };
                let Ok(pos) = target.binary_search_by_key(&r, |e| e.0) else { continue };
                // v = ±1, so a / v = a * v.
                let factor = target[pos].1 * v;
                match axpy(target, factor, &pivot) {
                    Some(updated) => {
                        for &(row, _) in &updated {
                            if target.binary_search_by_key(&row, |e| e.0).is_err() {
                                row_cols[row as usize].push(k as u32);
                            }
                        }
                        cols[k] = (!updated.is_empty()).then_some(updated);
                    }
                    None => {
                        // Column ops so far are unimodular; restore the pivot
                        // and finish exactly.
                        cols[c] = Some(pivot);
                        row_cols[r as usize] = partners;
                        break 'passes;
                    }
                }
            }
            unit_rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let residual: Vec<&Vec<(u32, i64)>> = cols.iter().flatten().filter(|c| !c.is_empty()).collect();
    if residual.is_empty() {
        return (unit_rank, Vec::new());
    }
    let mut row_ids: Vec<u32> = residual.iter().flat_map(|c| c.iter().map(|e| e.0)).collect();
    row_ids.sort_unstable();
    row_ids.dedup();
    let mut dense = vec![vec![BigInt::zero(); residual.len()]; row_ids.len()];
    for (j, col) in residual.iter().enumerate() {
        for &(r, v) in col.iter() {
            let i = row_ids.binary_search(&r).expect("collected above");
            dense[i][j] = BigInt::from(v);
        }
    }
    let diag = dense_snf(dense);
    let rank = unit_rank + diag.len();
    (rank, diag.into_iter().filter(|d| !d.is_one()).collect())
}

/// Nonzero invariant factors of a dense matrix, in divisibility order.
/// Pivots on the entry of smallest absolute value.
pub(crate) fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                for j in t..cols {
                    let delta = &q * &a[t][j];
                    a[i][j] -= delta;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut().skip(t) {
                    let delta = &q * &row[t];
                    row[j] -= delta;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                // Some remainder is smaller than the pivot: move it in.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::induce_complex;
    use crate::solution_space::VertexSet;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn det(a: &[Vec<BigInt>]) -> BigInt {
        if a.is_empty() {
            return BigInt::one();
        }
        let n = a.len();
        let mut total = BigInt::zero();
        for j in 0..n {
            if a[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == k)
            .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
            .collect()
    }

    /// Invariant factors from gcds of k×k minors: s_k = D_k / D_{k-1}.
    fn determinantal_factors(a: &[Vec<BigInt>]) -> Vec<BigInt> {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut out = Vec::new();
        let mut prev = BigInt::one();
        for k in 1..=rows.min(cols) {
            let mut g = BigInt::zero();
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<BigInt>> =
                        rs.iter().map(|&r| cs.iter().map(|&c| a[r][c].clone()).collect()).collect();
                    g = g.gcd(&det(&sub));
                }
            }
            if g.is_zero() {
                break;
            }
            out.push(&g / &prev);
            prev = g;
        }
        out
    }

    #[test]
    fn spec_style_examples() {
        let id = smith_normal_form(&m(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]));
        assert_eq!(id.diagonal, ints(&[1, 1, 1]));
        assert_eq!(smith_normal_form(&m(&[vec![2, 0], vec![0, 2]])).diagonal, ints(&[2, 2]));
        let s = smith_normal_form(&m(&[vec![1, 1], vec![1, -1]]));
        assert_eq!((s.diagonal, s.rank), (ints(&[1, 2]), 2));
        let s = smith_normal_form(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal, ints(&[1, 6]));
        let s = smith_normal_form(&m(&[vec![0, 0, 0], vec![0, 4, 0]]));
        assert_eq!((s.diagonal, s.rank), (ints(&[4, 0]), 1));
        assert_eq!(smith_normal_form(&IntegerMatrix::zeros(0, 3)).diagonal, ints(&[]));
    }

    #[test]
    fn huge_entries_take_the_bigint_path() {
        let big = BigInt::from(i64::MAX) * BigInt::from(4);
        let mut a = IntegerMatrix::zeros(2, 2);
        a.set(0, 0, big.clone());
        a.set(1, 1, BigInt::from(6));
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal, vec![BigInt::from(2), &big * 3]);
    }

    #[test]
    fn overflow_during_sparse_phase_falls_back() {
        // Repeated unit pivots on a matrix built to square its entries.
        let n = 8usize;
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 1;
            if i + 1 < n {
                rows[i][i + 1] = 1 << 40;
            }
        }
        rows[n - 1][0] = 1 << 40;
        let a = m(&rows);
        let s = smith_normal_form(&a);
        let expected = dense_snf(a.to_dense());
        assert_eq!(s.rank, expected.len());
        assert_eq!(s.torsion(), expected.into_iter().filter(|d| !d.is_one()).collect::<Vec<_>>());
    }

    #[test]
    fn hexagon_and_full_cube() {
        let hex = induce_complex(&VertexSet::from_vertices(3, 1..7).unwrap()).unwrap();
        let h = homology(&hex, Coefficients::Integers);
        assert_eq!(h.betti, vec![1, 1]);
        assert_eq!(h.torsion, vec![Vec::<BigInt>::new(), vec![]]);
        assert_eq!(h.to_json(), r#"{"coeffs":"Z","betti":[1,1],"torsion":[[],[]]}"#);
        for d in 1..=7 {
            let cube = induce_complex(&VertexSet::full(d).unwrap()).unwrap();
            let h = homology(&cube, Coefficients::Integers);
            assert_eq!(h.betti.len(), d + 1);
            assert!(h.is_acyclic());
        }
        let empty = induce_complex(&VertexSet::empty(2).unwrap()).unwrap();
        let h = homology(&empty, Coefficients::Mod2);
        assert!(h.betti.is_empty() && h.torsion.is_empty());
    }

    #[test]
    fn hollow_cube_is_a_sphere() {
        // Boundary of the 3-cube: the union of its six square faces.
        let cube = induce_complex(&VertexSet::full(3).unwrap()).unwrap();
        let squares: Vec<_> = cube.faces(2).to_vec();
        let shell = CubicalComplex::from_faces(3, squares).unwrap();
        for c in Coefficients::ALL {
            assert_eq!(homology(&shell, c).betti, vec![1, 0, 1]);
        }
    }

    #[test]
    fn chain_complex_validation() {
        assert!(ChainComplex::new(vec![2, 1], vec![vec![vec![(0, 1), (1, -1)]]]).is_ok());
        assert!(ChainComplex::new(vec![2, 1], vec![vec![vec![(2, 1)]]]).is_err());
        assert!(ChainComplex::new(vec![2, 1], vec![]).is_err());
        assert!(ChainComplex::new(vec![], vec![]).unwrap().homology(Coefficients::Integers).betti.is_empty());
    }

    #[test]
    fn torsion_survives_collapse() {
        // One vertex, one loop edge, one disk glued twice: RP^2 as a CW complex.
        let c = ChainComplex::new(vec![1, 1, 1], vec![vec![vec![]], vec![vec![(0, 2)]]]).unwrap();
        let z = c.homology(Coefficients::Integers);
        assert_eq!(z.betti, vec![1, 0, 0]);
        assert_eq!(z.torsion, vec![vec![], ints(&[2]), vec![]]);
        assert_eq!(c.homology(Coefficients::Mod2).betti, vec![1, 1, 1]);
        assert_eq!(c.homology(Coefficients::Rationals).betti, vec![1, 0, 0]);
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!("z".parse::<Coefficients>().unwrap(), Coefficients::Integers);
        assert_eq!("Z2".parse::<Coefficients>().unwrap(), Coefficients::Mod2);
        assert_eq!("Q".parse::<Coefficients>().unwrap(), Coefficients::Rationals);
        assert!("R".parse::<Coefficients>().is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1..=4usize, 1..=4usize).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r)
        })
    }

    fn arb_vset(max_d: usize) -> impl Strategy<Value = VertexSet> {
        (1..=max_d).prop_flat_map(|d| {
            (Just(d), proptest::collection::vec(any::<bool>(), 1 << d)).prop_map(|(d, bits)| {
                VertexSet::from_vertices(d, (0..1u64 << d).filter(|&v| bits[v as usize])).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn snf_matches_determinantal_divisors(rows in arb_matrix()) {
            let a = m(&rows);
            let s = smith_normal_form(&a);
            let oracle = determinantal_factors(&a.to_dense());
            prop_assert_eq!(s.rank, oracle.len());
            prop_assert_eq!(&s.diagonal[..s.rank], oracle.as_slice());
            prop_assert!(s.diagonal[s.rank..].iter().all(Zero::is_zero));
            prop_assert_eq!(dense_snf(a.to_dense()), oracle);
        }

        #[test]
        fn gf2_rank_counts_odd_factors(rows in arb_matrix()) {
            let a = m(&rows);
            let cols: Vec<Vec<u32>> = (0..a.cols())
                .map(|c| a.column(c).iter().filter(|(_, v)| v.is_odd()).map(|(r, _)| *r as u32).collect())
                .collect();
            let odd = smith_normal_form(&a).diagonal.iter().filter(|d| d.is_odd()).count();
            prop_assert_eq!(gf2_rank(cols), odd);
        }

        #[test]
        fn collapse_preserves_homology(v in arb_vset(6)) {
            let k = induce_complex(&v).unwrap();
            let c = k.chain_complex();
            let reduced = c.collapsed();
            for coeffs in Coefficients::ALL {
                let direct = uncollapsed(&c, coeffs);
                prop_assert!(c.homology(coeffs).same_groups(&direct));
                prop_assert!(reduced.homology(coeffs).same_groups(&direct));
            }
        }

        #[test]
        fn euler_and_components(v in arb_vset(7)) {
            let k = induce_complex(&v).unwrap();
            let h = homology(&k, Coefficients::Rationals);
            prop_assert_eq!(h.euler_characteristic(), k.euler_characteristic());
            prop_assert_eq!(h.betti.first().copied().unwrap_or(0), k.skeleton_components().count);
            let z2 = homology(&k, Coefficients::Mod2);
            let z = homology(&k, Coefficients::Integers);
            for p in 0..h.betti.len() {
                prop_assert!(h.betti[p] <= z2.betti[p]);
                prop_assert_eq!(z.betti[p], h.betti[p]);
            }
            if z.torsion.iter().all(Vec::is_empty) {
                prop_assert_eq!(&z2.betti, &h.betti);
            }
        }
    }

    /// Homology straight from the full boundary matrices, via public SNF.
    fn uncollapsed(c: &ChainComplex, coeffs: Coefficients) -> HomologyProfile {
        let n = c.sizes.len();
        let mut ranks = vec![0; n + 1];
        let mut torsion = vec![Vec::new(); n];
        for (i, b) in c.boundaries.iter().enumerate() {
            let mut a = IntegerMatrix::zeros(c.sizes[i], b.len());
            for (j, col) in b.iter().enumerate() {
                for &(r, v) in col {
                    a.set(r as usize, j, BigInt::from(v));
                }
            }
            let s = smith_normal_form(&a);
            ranks[i + 1] = match coeffs {
                Coefficients::Mod2 => s.diagonal.iter().filter(|d| d.is_odd()).count(),
                _ => s.rank,
            };
            if coeffs == Coefficients::Integers {
                torsion[i] = s.torsion();
            }
        }
        let betti = (0..n).map(|p| c.sizes[p] - ranks[p] - ranks[p + 1]).collect();
        HomologyProfile { coeffs, betti, torsion }
    }
}
