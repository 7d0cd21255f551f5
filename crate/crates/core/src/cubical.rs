//! Induced cubical complexes and their combinatorics.
//!
//! A face of `[0,1]^d` is a pair `(free, base)` of bit masks: coordinates in
//! `free` range over `{0,1}`, the others are fixed to the bits of `base`.
//! Faces are ordered by `(dim, free, base)`, so the 0-faces come out in
//! ascending vertex index.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bits::{format_bits, low_mask, parse_bits};
use crate::error::{Error, Result};
use crate::homology::ChainComplex;
use crate::solution_space::{VertexSet, D_MAX};

/// Largest number of faces a complex may hold.
pub const FACE_MAX: usize = 5_000_000;

/// A subcube of `[0,1]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    free: u64,
    base: u64,
}

impl Face {
    pub fn new(free: u64, base: u64) -> Result<Self> {
        if free & base != 0 {
            return Err(Error::precondition("face base must be zero on free coordinates"));
        }
        Ok(Face { free, base })
    }

    pub const fn vertex(v: u64) -> Self {
        Face { free: 0, base: v }
    }

    pub fn free(self) -> u64 {
        self.free
    }

    pub fn base(self) -> u64 {
        self.base
    }

    pub fn dim(self) -> usize {
        self.free.count_ones() as usize
    }

    /// Sort key within one dimension.
    #[inline]
    pub(crate) fn key(self) -> u64 {
        self.free << 32 | self.base
    }

    /// All `2^dim` vertices of the face, ascending.
    pub fn vertices(self) -> impl Iterator<Item = u64> {
        let free = self.free;
        let base = self.base;
        let mut sub = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let v = base | sub;
            sub = sub.wrapping_sub(free) & free;
            done = sub == 0;
            Some(v)
        })
    }

    pub fn contains_vertex(self, v: u64) -> bool {
        v & !self.free == self.base
    }

    /// True when `other` is a (not necessarily proper) subface.
    pub fn contains(self, other: Face) -> bool {
        other.free & !self.free == 0 && other.base & !self.free == self.base
    }

    /// Signed codimension-1 faces: for free coordinates `j_1 < .. < j_p`, the
    /// `t`-th pair is `(-1)^(t-1)` times `(j_t = 1) - (j_t = 0)`.
    pub fn boundary(self) -> impl Iterator<Item = (Face, i32)> {
        let mut rest = self.free;
        let mut sign = 1i32;
        let base = self.base;
        let free = self.free;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let j = rest & rest.wrapping_neg();
            rest &= rest - 1;
            let s = sign;
            sign = -sign;
            let f = free & !j;
            Some([(Face { free: f, base: base | j }, s), (Face { free: f, base }, -s)])
        })
        .flatten()
    }

    /// `f <free> <base>` with `width` characters per mask.
    pub fn to_text(self, width: usize) -> String {
        format!("f {} {}", format_bits(self.free, width), format_bits(self.base, width))
    }
}

/// A set of faces of `[0,1]^d` closed under taking subfaces.
///
/// Complexes built by [`induce_complex`] are induced by their vertex set; the
/// union of two induced complexes is closed but in general not induced.
#[derive(Clone, PartialEq, Eq)]
pub struct CubicalComplex {
    dimension: usize,
    /// `faces[p]` holds the `p`-faces sorted by key; no trailing empty levels.
    faces: Vec<Vec<Face>>,
    vertices: VertexSet,
}

impl CubicalComplex {
    pub fn empty(dimension: usize) -> Result<Self> {
        Ok(CubicalComplex {
            dimension,
            faces: Vec::new(),
            vertices: VertexSet::empty(dimension)?,
        })
    }

    /// Downward closure of `generators`.
    pub fn from_faces(dimension: usize, generators: impl IntoIterator<Item = Face>) -> Result<Self> {
        Self::from_faces_capped(dimension, generators, FACE_MAX)
    }

    pub fn from_faces_capped(
        dimension: usize,
        generators: impl IntoIterator<Item = Face>,
        max_faces: usize,
    ) -> Result<Self> {
        let max_faces = max_faces.min(FACE_MAX);
        let mut vertices = VertexSet::empty(dimension)?;
        let mask = low_mask(dimension);
        let mut levels: Vec<Vec<Face>> = Vec::new();
        for g in generators {
            if (g.free | g.base) & !mask != 0 {
                return Err(Error::OutOfRange(format!("face {}", g.to_text(dimension))));
            }
            let p = g.dim();
            if levels.len() <= p {
                levels.resize(p + 1, Vec::new());
            }
            levels[p].push(g);
        }
        // Close downward one level at a time.
        let mut total = 0usize;
        for p in (0..levels.len()).rev() {
            levels[p].sort_unstable_by_key(|f| f.key());
            levels[p].dedup();
            total += levels[p].len();
            if total > max_faces {
                return Err(Error::ResourceLimit {
                    what: "face count",
                    requested: total,
                    limit: max_faces,
                });
            }
            if p > 0 {
                let lower: Vec<Face> = levels[p].iter().flat_map(|f| f.boundary().map(|(g, _)| g)).collect();
                levels[p - 1].extend(lower);
            }
        }
        for f in levels.first().into_iter().flatten() {
            vertices.insert(f.base);
        }
        while levels.last().is_some_and(Vec::is_empty) {
            levels.pop();
        }
        Ok(CubicalComplex {
            dimension,
            faces: levels,
            vertices,
        })
    }

    /// Ambient dimension `d`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Largest face dimension, `None` for the empty complex.
    pub fn top_dimension(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    /// The 0-faces as a vertex set.
    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn faces(&self, p: usize) -> &[Face] {
        self.faces.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = Face> + '_ {
        self.faces.iter().flatten().copied()
    }

    pub fn len(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Position of `face` within `faces(face.dim())`.
    pub fn index_of(&self, face: Face) -> Option<usize> {
        self.faces(face.dim()).binary_search_by_key(&face.key(), |f| f.key()).ok()
    }

    pub fn contains(&self, face: Face) -> bool {
        self.index_of(face).is_some()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.f_vector())
    }

    /// True when every face of the ambient cube whose vertices all lie in the
    /// vertex set is present.
    pub fn is_induced(&self) -> bool {
        induce_complex(&self.vertices).is_ok_and(|k| k == *self)
    }

    /// Face-set union; both complexes must share the ambient dimension.
    pub fn union(&self, other: &CubicalComplex) -> Result<CubicalComplex> {
        if self.dimension != other.dimension {
            return Err(Error::precondition(format!(
                "cannot unite complexes in dimensions {} and {}",
                self.dimension, other.dimension
            )));
        }
        let mut faces = self.faces.clone();
        if faces.len() < other.faces.len() {
            faces.resize(other.faces.len(), Vec::new());
        }
        for (p, level) in other.faces.iter().enumerate() {
            faces[p].extend_from_slice(level);
            faces[p].sort_unstable_by_key(|f| f.key());
            faces[p].dedup();
        }
        let total: usize = faces.iter().map(Vec::len).sum();
        if total > FACE_MAX {
            return Err(Error::ResourceLimit {
                what: "face count",
                requested: total,
                limit: FACE_MAX,
            });
        }
        Ok(CubicalComplex {
            dimension: self.dimension,
            faces,
            vertices: self.vertices.union(&other.vertices)?,
        })
    }

    /// Signed incidences of `∂_p` as sparse columns over the sorted faces.
    pub(crate) fn boundary_columns(&self, p: usize) -> Vec<Vec<(u32, i32)>> {
        let lower = self.faces(p - 1);
        self.faces(p)
            .iter()
            .map(|f| {
                let mut col: Vec<(u32, i32)> = f
                    .boundary()
                    .map(|(g, s)| {
                        let i = lower
                            .binary_search_by_key(&g.key(), |h| h.key())
                            .expect("complex is closed under subfaces");
                        (i as u32, s)
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect()
    }

    /// The matrix of `∂_p`, rows indexed by `(p-1)`-faces and columns by
    /// `p`-faces, both in sorted order.
    pub fn boundary_matrix(&self, p: usize) -> Result<IntegerMatrix> {
        match self.top_dimension() {
            Some(top) if (1..=top).contains(&p) => {}
            _ => return Err(Error::OutOfRange(format!("boundary degree {p}"))),
        }
        let columns = self
            .boundary_columns(p)
            .into_iter()
            .map(|col| col.into_iter().map(|(r, v)| (r as usize, BigInt::from(v))).collect())
            .collect();
        Ok(IntegerMatrix {
            rows: self.faces(p - 1).len(),
            cols: self.faces(p).len(),
            columns,
        })
    }

    pub fn chain_complex(&self) -> ChainComplex {
        let sizes = self.f_vector();
        let boundaries = (1..sizes.len()).map(|p| self.boundary_columns(p)).collect();
        ChainComplex::from_parts(sizes, boundaries)
    }

    /// Connected components of the 1-skeleton. `labels[i]` belongs to the
    /// `i`-th vertex; labels are numbered in order of first appearance.
    pub fn skeleton_components(&self) -> Components {
        let vertices = self.faces(0);
        let mut parent: Vec<usize> = (0..vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in self.faces(1) {
            let j = e.free;
            let a = self.index_of(Face::vertex(e.base)).expect("closed");
            let b = self.index_of(Face::vertex(e.base | j)).expect("closed");
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut label_of_root = vec![usize::MAX; vertices.len()];
        let mut labels = Vec::with_capacity(vertices.len());
        let mut count = 0;
        for i in 0..vertices.len() {
            let r = find(&mut parent, i);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = count;
                count += 1;
            }
            labels.push(label_of_root[r]);
        }
        Components { count, labels }
    }

    /// `cube <d>` followed by one `f <free> <base>` line per face, in order.
    pub fn to_text(&self) -> String {
        let mut out = format!("cube {}\n", self.dimension);
        for f in self.iter() {
            out.push_str(&f.to_text(self.dimension));
            out.push('\n');
        }
        out
    }

    /// Parses the dump format; the listed faces are closed downward.
    pub fn parse(text: &str) -> Result<CubicalComplex> {
        let mut dimension = None;
        let mut faces = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match (dimension, tokens.as_slice()) {
                (None, ["cube", d]) => {
                    let d: usize = d.parse().map_err(|_| Error::parse(line_no, "bad dimension"))?;
                    if d == 0 || d > D_MAX {
                        return Err(Error::parse(line_no, format!("dimension must be in 1..={D_MAX}")));
                    }
                    dimension = Some(d);
                }
                (None, _) => return Err(Error::parse(line_no, "expected `cube <d>` header")),
                (Some(d), ["f", free, base]) => {
                    let (Some(fr), Some(b)) = (parse_bits(free), parse_bits(base)) else {
                        return Err(Error::parse(line_no, "malformed bitstring"));
                    };
                    if free.len() != d || base.len() != d {
                        return Err(Error::parse(line_no, format!("expected {d}-bit strings")));
                    }
                    faces.push(Face::new(fr, b).map_err(|e| Error::parse(line_no, e.to_string()))?);
                }
                (Some(_), _) => return Err(Error::parse(line_no, "expected `f <free> <base>`")),
            }
        }
        let d = dimension.ok_or_else(|| Error::parse(1, "missing `cube <d>` header"))?;
        CubicalComplex::from_faces(d, faces)
    }
}

impl fmt::Debug for CubicalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubicalComplex(d={}, f={:?})", self.dimension, self.f_vector())
    }
}

/// Result of [`CubicalComplex::skeleton_components`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    pub labels: Vec<usize>,
}

pub(crate) fn alternating_sum(counts: &[usize]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(p, &c)| if p % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// The complex of all faces whose vertices lie in `vertices`.
pub fn induce_complex(vertices: &VertexSet) -> Result<CubicalComplex> {
    induce_complex_capped(vertices, FACE_MAX)
}

/// [`induce_complex`] with a face budget, clamped to [`FACE_MAX`].
pub fn induce_complex_capped(vertices: &VertexSet, max_faces: usize) -> Result<CubicalComplex> {
    let max_faces = max_faces.min(FACE_MAX);
    let d = vertices.dimension();
    let over = |total: usize| Error::ResourceLimit {
        what: "face count",
        requested: total,
        limit: max_faces,
    };
    let level0: Vec<Face> = vertices.iter().map(Face::vertex).collect();
    let mut total = level0.len();
    if total > max_faces {
        return Err(over(total));
    }
    let mut faces = Vec::new();
    if !level0.is_empty() {
        faces.push(level0);
    }
    // A p-face with highest free coordinate j is the merge of the two
    // (p-1)-faces obtained by fixing j; each p-face is generated once.
    while let Some(prev) = faces.last() {
        let keys: Vec<u64> = prev.iter().map(|f| f.key()).collect();
        let mut next = Vec::new();
        for f in prev {
            let start = if f.free == 0 { 0 } else { 64 - f.free.leading_zeros() as usize };
            for j in start..d {
                let bit = 1u64 << j;
                if f.base & bit != 0 {
                    continue;
                }
                let partner = Face { free: f.free, base: f.base | bit };
                if keys.binary_search(&partner.key()).is_ok() {
                    next.push(Face { free: f.free | bit, base: f.base });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        total += next.len();
        if total > max_faces {
            return Err(over(total));
        }
        next.sort_unstable_by_key(|f| f.key());
        faces.push(next);
    }
    Ok(CubicalComplex {
        dimension: d,
        faces,
        vertices: vertices.clone(),
    })
}

/// Sparse integer matrix with arbitrary-precision entries, stored by column.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    /// Per column: `(row, value)` sorted by row, no zero values.
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds from row-major data; all rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::precondition("ragged matrix rows"));
        }
        let mut m = IntegerMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let v: BigInt = v.clone().into();
                if !v.is_zero() {
                    m.columns[j].push((i, v));
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Nonzero entries of column `c`, sorted by row.
    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        let col = &self.columns[c];
        col.binary_search_by_key(&r, |e| e.0)
            .map_or_else(|_| BigInt::zero(), |i| col[i].1.clone())
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(i) if value.is_zero() => {
                col.remove(i);
            }
            Ok(i) => col[i].1 = value,
            Err(_) if value.is_zero() => {}
            Err(i) => col.insert(i, (r, value)),
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                out[*r][c] = v.clone();
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::precondition(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntegerMatrix::zeros(self.rows, rhs.cols);
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); self.rows];
        for (c, rcol) in rhs.columns.iter().enumerate() {
            let mut touched = Vec::new();
            for (k, b) in rcol {
                for (r, a) in &self.columns[*k] {
                    if acc[*r].is_zero() {
                        touched.push(*r);
                    }
                    acc[*r] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for r in touched {
                let v = std::mem::take(&mut acc[r]);
                if !v.is_zero() {
                    out.columns[c].push((r, v));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{}", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
