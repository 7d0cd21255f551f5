//! Explicit constructions: simplicial complexes realized as vertex sets,
//! vertex sets as CNF, clause splitting, and variable elimination for the
//! tractable clause classes and for affine systems.

use std::collections::HashSet;

use crate::bits::delete_bits;
use crate::error::{Error, Result};
use crate::formula::{AffineSystem, Clause, Equation, Formula, Lit};
use crate::homology::ChainComplex;
use crate::solution_space::{enumerate_solutions, project, VertexSet, D_MAX};

/// Largest vertex count a simplicial complex may have; facets are bit masks.
pub const MAX_SIMPLICIAL_VERTICES: usize = 64;

/// A simplicial complex given by its facets. Vertices are 0-based in memory
/// and 1-based in text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    /// Facet vertex masks, sorted, without duplicates.
    facets: Vec<u64>,
}

impl SimplicialComplex {
    /// `facets` lists 0-based vertex indices. Facets must be nonempty.
    pub fn new(vertex_count: usize, facets: &[Vec<usize>]) -> Result<Self> {
        if vertex_count > MAX_SIMPLICIAL_VERTICES {
            return Err(Error::ResourceLimit {
                what: "simplicial vertex count",
                requested: vertex_count,
                limit: MAX_SIMPLICIAL_VERTICES,
            });
        }
        let mut masks = Vec::with_capacity(facets.len());
        for f in facets {
            if f.is_empty() {
                return Err(Error::precondition("facets must be nonempty"));
            }
            let mut m = 0u64;
            for &v in f {
                if v >= vertex_count {
                    return Err(Error::OutOfRange(format!("vertex {}", v + 1)));
                }
                m |= 1 << v;
            }
            masks.push(m);
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(SimplicialComplex {
            vertex_count,
            facets: masks,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Facets as vertex masks (bit `i` = vertex `i`).
    pub fn facets(&self) -> &[u64] {
        &self.facets
    }

    /// All simplices grouped by dimension, each level sorted by mask.
    pub fn simplices(&self) -> Vec<Vec<u64>> {
        let mut all = HashSet::new();
        for &f in &self.facets {
            let mut sub = f;
            while sub != 0 {
                all.insert(sub);
                sub = (sub - 1) & f;
            }
        }
        let top = all.iter().map(|s| s.count_ones() as usize).max().unwrap_or(0);
        let mut levels = vec![Vec::new(); top];
        for s in all {
            levels[s.count_ones() as usize - 1].push(s);
        }
        for l in &mut levels {
            l.sort_unstable();
        }
        levels
    }

    /// Oriented simplicial chain complex: `∂[v_0..v_p] = Σ (-1)^i [.. v̂_i ..]`.
    pub fn chain_complex(&self) -> ChainComplex {
        let levels = self.simplices();
        let sizes = levels.iter().map(Vec::len).collect();
        let boundaries = (1..levels.len())
            .map(|p| {
                levels[p]
                    .iter()
                    .map(|&s| {
                        let mut col: Vec<(u32, i32)> = Vec::with_capacity(p + 1);
                        let mut rest = s;
                        let mut sign = 1;
                        while rest != 0 {
                            let v = rest & rest.wrapping_neg();
                            rest &= rest - 1;
                            let i = levels[p - 1].binary_search(&(s & !v)).expect("closed");
                            col.push((i as u32, sign));
                            sign = -sign;
                        }
                        col.sort_unstable();
                        col
                    })
                    .collect()
            })
            .collect();
        ChainComplex::from_parts(sizes, boundaries)
    }

    /// `scomplex <n>` then one facet per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("scomplex {}\n", self.vertex_count);
        for &f in &self.facets {
            let vs: Vec<String> = (0..64).filter(|i| f >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
            out.push_str(&vs.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut count = None;
        let mut facets = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            match count {
                None => {
                    let (Some("scomplex"), Some(n), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                        return Err(Error::parse(line_no, "expected `scomplex <n>` header"));
                    };
                    count = Some(n.parse::<usize>().map_err(|_| Error::parse(line_no, "bad vertex count"))?);
                }
                Some(n) => {
                    let facet = tokens
                        .map(|t| match t.parse::<usize>() {
                            Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                            _ => Err(Error::parse(line_no, format!("bad vertex `{t}`"))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    facets.push(facet);
                }
            }
        }
        let n = count.ok_or_else(|| Error::parse(1, "missing `scomplex <n>` header"))?;
        SimplicialComplex::new(n, &facets)
    }
}

/// Standard fixtures.
pub mod fixtures {
    use super::SimplicialComplex;

    /// The three edges of a triangle: a circle.
    pub fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).expect("valid fixture")
    }

    pub fn two_points() -> SimplicialComplex {
        SimplicialComplex::new(2, &[vec![0], vec![1]]).expect("valid fixture")
    }

    /// The 6-vertex, 10-triangle triangulation of the real projective plane.
    pub fn projective_plane() -> SimplicialComplex {
        const FACETS: [[usize; 3]; 10] = [
            [1, 2, 3],
            [1, 3, 4],
            [1, 4, 5],
            [1, 5, 6],
            [1, 6, 2],
            [2, 3, 5],
            [3, 4, 6],
            [4, 5, 2],
            [5, 6, 3],
            [6, 2, 4],
        ];
        let facets: Vec<Vec<usize>> = FACETS.iter().map(|f| f.iter().map(|v| v - 1).collect()).collect();
        SimplicialComplex::new(6, &facets).expect("valid fixture")
    }
}

/// Nonzero 0/1 vectors supported inside some facet.
pub fn simplicial_to_vertexset(complex: &SimplicialComplex) -> Result<VertexSet> {
    let d = complex.vertex_count;
    if d > D_MAX {
        return Err(Error::ResourceLimit {
            what: "dimension",
            requested: d,
            limit: D_MAX,
        });
    }
    let mut set = VertexSet::empty(d.max(1))?;
    for &f in &complex.facets {
        let mut sub = f;
        while sub != 0 {
            set.insert(sub);
            sub = (sub - 1) & f;
        }
    }
    Ok(set)
}

/// Canonical CNF: one full-width clause per missing vertex, falsified only
/// by that vertex. Clauses follow ascending vertex index.
pub fn vertexset_to_cnf(set: &VertexSet) -> Result<Formula> {
    let d = set.dimension();
    let mut f = Formula::new(d)?;
    for u in 0..1u64 << d {
        if !set.contains(u) {
            f.add_clause(Clause::new((0..d).map(|i| Lit {
                var: i,
                positive: u >> i & 1 == 0,
            })))?;
        }
    }
    Ok(f)
}

/// Horn CNF for an AND-closed vertex set: one clause per missing vertex `u`,
/// namely `¬u ∨ x_j` where `x_j` is set in every member above `u`, or just
/// `¬u` when no member lies above `u`.
pub fn vertexset_to_horn_cnf(set: &VertexSet) -> Result<Formula> {
    let d = set.dimension();
    let members: Vec<u64> = set.iter().collect();
    let closed = members
        .iter()
        .all(|&a| members.iter().all(|&b| set.contains(a & b)));
    if !closed {
        return Err(Error::precondition("vertex set is not closed under AND"));
    }
    let mut f = Formula::new(d)?;
    for u in 0..1u64 << d {
        if set.contains(u) {
            continue;
        }
        let mut lits: Vec<Lit> = (0..d).filter(|i| u >> i & 1 == 1).map(Lit::neg).collect();
        let meet = members.iter().filter(|&&w| w & u == u).fold(None, |m: Option<u64>, &w| Some(m.map_or(w, |m| m & w)));
        if let Some(m) = meet {
            let j = (m & !u).trailing_zeros() as usize;
            lits.push(Lit::pos(j));
        }
        f.add_clause(Clause::new(lits))?;
    }
    Ok(f)
}

/// A formula with auxiliary variables whose projection recovers another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub formula: Formula,
    /// 0-based auxiliary variables to project away, ascending.
    pub projection_dims: Vec<usize>,
    /// `variable_map[i]` is the new index of original variable `i`.
    pub variable_map: Vec<usize>,
}

impl ReductionResult {
    /// Solutions of the reduced formula with the auxiliaries projected away.
    pub fn projected_solutions(&self) -> Result<VertexSet> {
        project(&enumerate_solutions(&self.formula)?, &self.projection_dims)
    }
}

fn rebuild(original: &Formula, clauses: Vec<Clause>, aux: usize) -> Result<ReductionResult> {
    let d = original.dimension();
    let formula = Formula::cnf(d + aux, clauses)?;
    Ok(ReductionResult {
        formula,
        projection_dims: (d..d + aux).collect(),
        variable_map: (0..d).collect(),
    })
}

/// Splits every clause of length `k >= 4` into the chain
/// `(z1 ∨ z2 ∨ y1) ∧ (¬y1 ∨ z3 ∨ y2) ∧ ... ∧ (¬y_{k-3} ∨ z_{k-1} ∨ z_k)`.
/// Auxiliaries follow the original variables, in clause order.
pub fn to_3sat(formula: &Formula) -> Result<ReductionResult> {
    let clauses = formula.clauses()?;
    if let Some(i) = clauses.iter().position(|c| c.is_empty()) {
        return Err(Error::precondition(format!("clause {} is empty", i + 1)));
    }
    let d = formula.dimension();
    let mut out = Vec::new();
    let mut aux = 0usize;
    for c in clauses {
        let z = c.lits();
        let k = z.len();
        if k <= 3 {
            out.push(c.clone());
            continue;
        }
        let y = |i: usize| d + aux + i - 1;
        out.push(Clause::new([z[0], z[1], Lit::pos(y(1))]));
        for i in 1..k - 3 {
            out.push(Clause::new([Lit::neg(y(i)), z[i + 1], Lit::pos(y(i + 1))]));
        }
        out.push(Clause::new([Lit::neg(y(k - 3)), z[k - 2], z[k - 1]]));
        aux += k - 3;
    }
    rebuild(formula, out, aux)
}

/// Rewrites 3-CNF into clauses with at most two positive and two negative
/// literals: `(x ∨ y ∨ z)` becomes `(x ∨ y ∨ ¬α) ∧ (α ∨ z)` and
/// `(¬x ∨ ¬y ∨ ¬z)` becomes `(¬x ∨ ¬y ∨ α) ∧ (¬α ∨ ¬z)`.
pub fn to_kpn322(formula: &Formula) -> Result<ReductionResult> {
    let clauses = formula.clauses()?;
    if let Some(i) = clauses.iter().position(|c| c.len() > 3) {
        return Err(Error::precondition(format!("clause {} has more than 3 literals", i + 1)));
    }
    let d = formula.dimension();
    let mut out = Vec::new();
    let mut aux = 0usize;
    for c in clauses {
        let z = c.lits();
        let uniform = z.len() == 3 && (c.positives() == 3 || c.negatives() == 3);
        if !uniform {
            out.push(c.clone());
            continue;
        }
        let alpha = d + aux;
        aux += 1;
        let positive = z[0].positive;
        out.push(Clause::new([z[0], z[1], Lit { var: alpha, positive: !positive }]));
        out.push(Clause::new([Lit { var: alpha, positive }, z[2]]));
    }
    rebuild(formula, out, aux)
}

/// Clause classes closed under variable elimination by resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClauseClass {
    /// At most two literals per clause.
    TwoSat,
    /// At most one positive literal per clause.
    Horn,
    /// At most one negative literal per clause.
    DualHorn,
}

impl ClauseClass {
    pub fn admits(self, clause: &Clause) -> bool {
        match self {
            ClauseClass::TwoSat => clause.len() <= 2,
            ClauseClass::Horn => clause.positives() <= 1,
            ClauseClass::DualHorn => clause.negatives() <= 1,
        }
    }

    /// True when every clause of a CNF formula belongs to the class.
    pub fn admits_formula(self, formula: &Formula) -> bool {
        formula.clauses().is_ok_and(|cs| cs.into_iter().all(|c| self.admits(c)))
    }
}

/// Eliminates `var` (0-based): keeps the clauses without it and adds every
/// resolvent `α ∨ β` of a clause `x ∨ α` with a clause `¬x ∨ β`.
/// Tautologies are dropped and clauses deduplicated; the result has one
/// dimension fewer.
pub fn project_clausal(formula: &Formula, var: usize, class: ClauseClass) -> Result<Formula> {
    let d = formula.dimension();
    if var >= d {
        return Err(Error::OutOfRange(format!("variable x{}", var + 1)));
    }
    if d == 1 {
        return Err(Error::precondition("cannot eliminate the only variable"));
    }
    let clauses = formula.clauses()?;
    if let Some(i) = clauses.iter().position(|c| !class.admits(c)) {
        return Err(Error::precondition(format!("clause {} is outside the {class:?} class", i + 1)));
    }
    let mut kept = Vec::new();
    let mut with_pos: Vec<Vec<Lit>> = Vec::new();
    let mut with_neg: Vec<Vec<Lit>> = Vec::new();
    for c in clauses {
        if c.is_tautology() {
            continue;
        }
        let rest: Vec<Lit> = c.lits().iter().copied().filter(|l| l.var != var).collect();
        match c.lits().iter().find(|l| l.var == var) {
            None => kept.push(c.clone()),
            Some(l) if l.positive => with_pos.push(rest),
            Some(_) => with_neg.push(rest),
        }
    }
    for a in &with_pos {
        for b in &with_neg {
            let r = Clause::new(a.iter().chain(b).copied());
            if !r.is_tautology() {
                kept.push(r);
            }
        }
    }
    let mut seen = HashSet::new();
    kept.retain(|c| {
        let mut key = c.lits().to_vec();
        key.sort_unstable();
        seen.insert(key)
    });
    let map: Vec<Option<usize>> = (0..d)
        .map(|v| match v.cmp(&var) {
            std::cmp::Ordering::Less => Some(v),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(v - 1),
        })
        .collect();
    Formula::cnf(d, kept)?.remap(d - 1, &map)
}

/// Eliminates several variables, highest index first.
pub fn project_clausal_many(formula: &Formula, vars: &[usize], class: ClauseClass) -> Result<Formula> {
    let mut vars = vars.to_vec();
    vars.sort_unstable();
    vars.dedup();
    let mut f = formula.clone();
    for &v in vars.iter().rev() {
        f = project_clausal(&f, v, class)?;
    }
    Ok(f)
}

/// Eliminates `var` by substituting the first equation that contains it into
/// the others and dropping it.
pub fn project_affine(system: &AffineSystem, var: usize) -> Result<AffineSystem> {
    let d = system.dimension();
    if var >= d {
        return Err(Error::OutOfRange(format!("variable x{}", var + 1)));
    }
    if d == 1 {
        return Err(Error::precondition("cannot eliminate the only variable"));
    }
    let bit = 1u64 << var;
    let mut eqs = system.equations().to_vec();
    if let Some(p) = eqs.iter().position(|e| e.support & bit != 0) {
        let pivot = eqs.remove(p);
        for e in &mut eqs {
            if e.support & bit != 0 {
                e.support ^= pivot.support;
                e.rhs ^= pivot.rhs;
            }
        }
    }
    let eqs = eqs
        .into_iter()
        .map(|e| Equation {
            support: delete_bits(e.support, bit),
            rhs: e.rhs,
        })
        .collect();
    Ok(AffineSystem::from_parts(d - 1, eqs))
}

pub fn project_affine_many(system: &AffineSystem, vars: &[usize]) -> Result<AffineSystem> {
    let mut vars = vars.to_vec();
    vars.sort_unstable();
    vars.dedup();
    let mut s = system.clone();
    for &v in vars.iter().rev() {
        s = project_affine(&s, v)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::parse_bits;
    use crate::cubical::induce_complex;
    use crate::formula::parse_dimacs;
    use crate::homology::{homology, simplicial_homology, Coefficients};
    use crate::relations::relation_properties;
    use crate::solution_space::affine_solutions;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn cnf(d: usize, clauses: &[&[i64]]) -> Formula {
        Formula::from_dimacs_clauses(d, clauses).unwrap()
    }

    fn vset(d: usize, members: &[&str]) -> VertexSet {
        VertexSet::from_vertices(d, members.iter().map(|s| parse_bits(s).unwrap())).unwrap()
    }

    fn solutions(f: &Formula) -> VertexSet {
        enumerate_solutions(f).unwrap()
    }

    #[test]
    fn realization_examples() {
        let edge = SimplicialComplex::new(2, &[vec![0, 1]]).unwrap();
        let v = simplicial_to_vertexset(&edge).unwrap();
        assert_eq!(v, vset(2, &["10", "01", "11"]));
        assert_eq!(induce_complex(&v).unwrap().f_vector(), vec![3, 2]);

        let tri = fixtures::triangle_boundary();
        let v = simplicial_to_vertexset(&tri).unwrap();
        assert_eq!(v, vset(3, &["100", "010", "001", "110", "011", "101"]));
        assert_eq!(homology(&induce_complex(&v).unwrap(), Coefficients::Integers).betti, vec![1, 1]);

        let point = SimplicialComplex::new(1, &[vec![0]]).unwrap();
        assert_eq!(simplicial_to_vertexset(&point).unwrap(), vset(1, &["1"]));
    }

    #[test]
    fn simplicial_oracle_examples() {
        let h = simplicial_homology(&fixtures::triangle_boundary(), Coefficients::Integers);
        assert_eq!(h.betti, vec![1, 1]);
        let h = simplicial_homology(&fixtures::two_points(), Coefficients::Integers);
        assert_eq!(h.betti, vec![2]);
        let rp2 = fixtures::projective_plane();
        assert_eq!(rp2.simplices().iter().map(Vec::len).collect::<Vec<_>>(), vec![6, 15, 10]);
        let z = simplicial_homology(&rp2, Coefficients::Integers);
        assert_eq!(z.betti, vec![1, 0, 0]);
        assert_eq!(z.torsion, vec![vec![], vec![BigInt::from(2)], vec![]]);
        assert_eq!(simplicial_homology(&rp2, Coefficients::Rationals).betti, vec![1, 0, 0]);
        assert_eq!(simplicial_homology(&rp2, Coefficients::Mod2).betti, vec![1, 1, 1]);
    }

    #[test]
    fn realized_fixtures_match_simplicial_homology() {
        for k in [fixtures::triangle_boundary(), fixtures::two_points(), fixtures::projective_plane()] {
            let cube = induce_complex(&simplicial_to_vertexset(&k).unwrap()).unwrap();
            for c in Coefficients::ALL {
                assert!(homology(&cube, c).same_groups(&simplicial_homology(&k, c)), "{k:?} {c}");
            }
        }
    }

    #[test]
    fn scomplex_text() {
        let rp2 = fixtures::projective_plane();
        assert_eq!(SimplicialComplex::parse(&rp2.to_text()).unwrap(), rp2);
        assert!(SimplicialComplex::parse("scomplex 2\n1 3\n").is_err());
        assert!(SimplicialComplex::parse("1 2\n").is_err());
        assert!(SimplicialComplex::new(2, &[vec![]]).is_err());
    }

    #[test]
    fn canonical_cnf_examples() {
        let hexagon = VertexSet::from_vertices(3, 1..7).unwrap();
        let f = vertexset_to_cnf(&hexagon).unwrap();
        assert_eq!(f, cnf(3, &[&[1, 2, 3], &[-1, -2, -3]]));
        let f = vertexset_to_cnf(&VertexSet::empty(1).unwrap()).unwrap();
        assert_eq!(f, cnf(1, &[&[1], &[-1]]));
        assert!(vertexset_to_cnf(&VertexSet::full(1).unwrap()).unwrap().constraints().is_empty());
    }

    #[test]
    fn horn_cnf_rejects_non_horn_sets() {
        assert!(vertexset_to_horn_cnf(&vset(2, &["10", "01"])).is_err());
        let f = vertexset_to_horn_cnf(&VertexSet::empty(2).unwrap()).unwrap();
        assert!(solutions(&f).is_empty());
    }

    #[test]
    fn chain_examples() {
        let r = to_3sat(&cnf(4, &[&[1, 2, 3, 4]])).unwrap();
        assert_eq!(r.formula, cnf(5, &[&[1, 2, 5], &[-5, 3, 4]]));
        assert_eq!(r.projection_dims, vec![4]);

        let three = cnf(3, &[&[1, 2, 3], &[-1, 2]]);
        let r = to_3sat(&three).unwrap();
        assert_eq!(r.formula, three);
        assert!(r.projection_dims.is_empty());

        let six = cnf(6, &[&[1, 2, 3, 4, 5, 6]]);
        let r = to_3sat(&six).unwrap();
        assert_eq!(r.projection_dims.len(), 3);
        assert_eq!(r.formula.constraints().len(), 4);
        assert_eq!(r.projected_solutions().unwrap(), solutions(&six));

        assert!(to_3sat(&cnf(2, &[&[1], &[]])).is_err());
    }

    #[test]
    fn kpn322_examples() {
        let r = to_kpn322(&cnf(3, &[&[1, 2, 3]])).unwrap();
        assert_eq!(r.formula, cnf(4, &[&[1, 2, -4], &[4, 3]]));
        let r = to_kpn322(&cnf(3, &[&[-1, -2, -3]])).unwrap();
        assert_eq!(r.formula, cnf(4, &[&[-1, -2, 4], &[-4, -3]]));
        let mixed = cnf(3, &[&[1, 2, -3]]);
        assert_eq!(to_kpn322(&mixed).unwrap().formula, mixed);
        assert!(to_kpn322(&cnf(4, &[&[1, 2, 3, 4]])).is_err());

        let hexagon = parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n").unwrap();
        let r = to_kpn322(&hexagon).unwrap();
        assert!(crate::formula::clause_shape(&r.formula).unwrap().fits(3, 2, 2));
        assert_eq!(r.projected_solutions().unwrap(), solutions(&hexagon));
    }

    #[test]
    fn clausal_projection_examples() {
        let f = cnf(3, &[&[1, 3], &[2, -3]]);
        assert_eq!(project_clausal(&f, 2, ClauseClass::TwoSat).unwrap(), cnf(2, &[&[1, 2]]));

        let f = cnf(3, &[&[-1, 3], &[-3, 2], &[-2, -1]]);
        let p = project_clausal(&f, 2, ClauseClass::Horn).unwrap();
        assert_eq!(p, cnf(2, &[&[-2, -1], &[-1, 2]]));
        assert!(ClauseClass::Horn.admits_formula(&p));

        let f = cnf(3, &[&[1, -2]]);
        assert_eq!(project_clausal(&f, 2, ClauseClass::DualHorn).unwrap(), cnf(2, &[&[1, -2]]));

        // Unit clauses on both sides leave the empty clause.
        let f = cnf(2, &[&[2], &[-2]]);
        let p = project_clausal(&f, 1, ClauseClass::TwoSat).unwrap();
        assert_eq!(p, cnf(1, &[&[]]));
        assert!(solutions(&p).is_empty());

        assert!(project_clausal(&cnf(3, &[&[1, 2, 3]]), 0, ClauseClass::TwoSat).is_err());
        assert!(project_clausal(&cnf(1, &[&[1]]), 0, ClauseClass::Horn).is_err());
        assert!(project_clausal(&cnf(2, &[&[1]]), 5, ClauseClass::Horn).is_err());
    }

    #[test]
    fn affine_projection_examples() {
        let mut a = AffineSystem::new(3).unwrap();
        a.push(&[0, 2], true).unwrap();
        a.push(&[1, 2], false).unwrap();
        let p = project_affine(&a, 2).unwrap();
        let mut want = AffineSystem::new(2).unwrap();
        want.push(&[0, 1], true).unwrap();
        assert_eq!(p, want);

        let mut a = AffineSystem::new(3).unwrap();
        a.push(&[0, 1], true).unwrap();
        assert_eq!(project_affine(&a, 2).unwrap(), {
            let mut s = AffineSystem::new(2).unwrap();
            s.push(&[0, 1], true).unwrap();
            s
        });

        let mut a = AffineSystem::new(2).unwrap();
        a.push(&[0], false).unwrap();
        a.push(&[0], true).unwrap();
        let p = project_affine(&a, 0).unwrap();
        assert!(!p.is_consistent_syntactically());
        assert!(affine_solutions(&p).unwrap().is_empty());
    }

    fn arb_cnf(max_d: usize, max_len: usize, max_clauses: usize) -> impl Strategy<Value = Formula> {
        (1..=max_d).prop_flat_map(move |d| {
            let clause = proptest::collection::vec((0..d, any::<bool>()), 1..=max_len);
            proptest::collection::vec(clause, 0..=max_clauses).prop_map(move |cs| {
                Formula::cnf(
                    d,
                    cs.into_iter().map(|c| Clause::new(c.into_iter().map(|(v, s)| Lit { var: v, positive: s }))),
                )
                .unwrap()
            })
        })
    }

    fn restrict(f: Formula, class: ClauseClass) -> Formula {
        let d = f.dimension();
        let clauses: Vec<Clause> = f
            .clauses()
            .unwrap()
            .into_iter()
            .filter(|c| class.admits(c) && !c.is_tautology())
            .cloned()
            .collect();
        Formula::cnf(d, clauses).unwrap()
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
        fn canonical_cnf_round_trips(v in arb_vset(6)) {
            prop_assert_eq!(solutions(&vertexset_to_cnf(&v).unwrap()), v);
        }

        #[test]
        fn horn_cnf_round_trips(v in arb_vset(7)) {
            // Close under AND first.
            let mut members: Vec<u64> = v.iter().collect();
            loop {
                let mut grew = false;
                let snapshot = members.clone();
                for &a in &snapshot {
                    for &b in &snapshot {
                        if !members.contains(&(a & b)) {
                            members.push(a & b);
                            grew = true;
                        }
                    }
                }
                if !grew { break; }
            }
            let closed = VertexSet::from_vertices(v.dimension(), members).unwrap();
            let f = vertexset_to_horn_cnf(&closed).unwrap();
            prop_assert!(ClauseClass::Horn.admits_formula(&f));
            prop_assert_eq!(solutions(&f), closed);
        }

        #[test]
        fn to_3sat_projects_back(f in arb_cnf(6, 6, 4)) {
            let r = to_3sat(&f).unwrap();
            prop_assert!(crate::formula::clause_shape(&r.formula).unwrap().max_len <= 3);
            prop_assert_eq!(r.projected_solutions().unwrap(), solutions(&f));
            let r2 = to_kpn322(&r.formula).unwrap();
            prop_assert!(crate::formula::clause_shape(&r2.formula).unwrap().fits(3, 2, 2));
            prop_assert_eq!(r2.projected_solutions().unwrap(), solutions(&r.formula));
        }

        #[test]
        fn clausal_projection_matches_brute_force(
            f in arb_cnf(6, 3, 8),
            class in prop_oneof![Just(ClauseClass::TwoSat), Just(ClauseClass::Horn), Just(ClauseClass::DualHorn)],
            pick in any::<u64>(),
        ) {
            let f = restrict(f, class);
            let d = f.dimension();
            prop_assume!(d >= 2);
            let vars: Vec<usize> = (0..d).filter(|v| pick >> v & 1 == 1).take(d - 1).collect();
            let p = project_clausal_many(&f, &vars, class).unwrap();
            prop_assert!(class.admits_formula(&p));
            prop_assert_eq!(solutions(&p), project(&solutions(&f), &vars).unwrap());
        }

        #[test]
        fn affine_projection_matches_brute_force(
            d in 2usize..=7,
            eqs in proptest::collection::vec((any::<u64>(), any::<bool>()), 0..6),
            pick in any::<u64>(),
        ) {
            let mut a = AffineSystem::new(d).unwrap();
            for (s, rhs) in eqs {
                let vars: Vec<usize> = (0..d).filter(|v| s >> v & 1 == 1).collect();
                a.push(&vars, rhs).unwrap();
            }
            let vars: Vec<usize> = (0..d).filter(|v| pick >> v & 1 == 1).take(d - 1).collect();
            let p = project_affine_many(&a, &vars).unwrap();
            let brute = project(&affine_solutions(&a).unwrap(), &vars).unwrap();
            prop_assert_eq!(&affine_solutions(&p).unwrap(), &brute);
            if !brute.is_empty() {
                let rel = crate::relations::Relation::from_tuples(brute.dimension(), brute.iter()).unwrap();
                prop_assert!(relation_properties(&rel).affine);
            }
        }
    }
}
