//! CSP instances and CNF formulas, with DIMACS and CSP text formats.
//!
//! Variables are 0-indexed in memory and 1-indexed in every text format.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::relations::Relation;

/// A possibly negated variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    /// DIMACS encoding: `var + 1`, negated when the literal is negative.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    #[inline]
    pub fn eval(self, assignment: u64) -> bool {
        (assignment >> self.var & 1 == 1) == self.positive
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }
}

/// Literal or constant, used when building clauses that may mention 0/1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Lit(Lit),
    Const(bool),
}

/// A disjunction of literals without repeated literals. Order is preserved.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Builds a clause, dropping repeated literals (first occurrence wins).
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Self {
        let mut out: Vec<Lit> = Vec::new();
        for l in lits {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Clause { lits: out }
    }

    /// Builds a clause from literals and constants: a constant 1 satisfies
    /// the clause, which yields `None`; constant 0 disappears.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Option<Self> {
        let mut lits = Vec::new();
        for t in terms {
            match t {
                Term::Const(true) => return None,
                Term::Const(false) => {}
                Term::Lit(l) => lits.push(l),
            }
        }
        Some(Clause::new(lits))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.lits.iter().filter(|l| l.positive).count()
    }

    pub fn negatives(&self) -> usize {
        self.lits.len() - self.positives()
    }

    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(|&l| self.lits.contains(&!l))
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.lits.iter().any(|l| l.var == var)
    }

    /// Masks of variables occurring positively and negatively.
    pub fn masks(&self) -> (u64, u64) {
        self.lits.iter().fold((0, 0), |(p, n), l| {
            if l.positive {
                (p | 1 << l.var, n)
            } else {
                (p, n | 1 << l.var)
            }
        })
    }

    pub fn eval(&self, assignment: u64) -> bool {
        self.lits.iter().any(|l| l.eval(assignment))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return f.write_str("()");
        }
        f.write_str("(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            if !l.positive {
                f.write_str("~")?;
            }
            write!(f, "x{}", l.var + 1)?;
        }
        f.write_str(")")
    }
}

/// Argument of a relation application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arg {
    Var(usize),
    Const(bool),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    Clause(Clause),
    /// `relation` indexes the formula's relation table.
    Apply { relation: usize, args: Vec<Arg> },
}

impl Constraint {
    /// Variables mentioned by the constraint, as a mask.
    pub fn var_mask(&self) -> u64 {
        match self {
            Constraint::Clause(c) => c.lits.iter().fold(0, |m, l| m | 1 << l.var),
            Constraint::Apply { args, .. } => args.iter().fold(0, |m, a| match a {
                Arg::Var(v) => m | 1 << v,
                Arg::Const(_) => m,
            }),
        }
    }
}

/// Maximum dimension any formula may declare; keeps variable masks in a `u64`.
pub const MAX_VARIABLES: usize = 64;

/// A conjunction of constraints over `dimension` boolean variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    dimension: usize,
    relations: Vec<Relation>,
    constraints: Vec<Constraint>,
}

impl Formula {
    /// Empty conjunction on `dimension >= 1` variables.
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::precondition("dimension must be at least 1"));
        }
        if dimension > MAX_VARIABLES {
            return Err(Error::ResourceLimit {
                what: "dimension",
                requested: dimension,
                limit: MAX_VARIABLES,
            });
        }
        Ok(Formula {
            dimension,
            relations: Vec::new(),
            constraints: Vec::new(),
        })
    }

    pub fn cnf(dimension: usize, clauses: impl IntoIterator<Item = Clause>) -> Result<Self> {
        let mut f = Formula::new(dimension)?;
        for c in clauses {
            f.add_clause(c)?;
        }
        Ok(f)
    }

    /// Shorthand for tests and examples: clauses as signed 1-based integers.
    pub fn from_dimacs_clauses(dimension: usize, clauses: &[&[i64]]) -> Result<Self> {
        let mut f = Formula::new(dimension)?;
        for c in clauses {
            let lits = c
                .iter()
                .map(|&v| lit_from_dimacs(v, dimension))
                .collect::<Result<Vec<_>>>()?;
            f.add_clause(Clause::new(lits))?;
        }
        Ok(f)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_clause(&mut self, clause: Clause) -> Result<()> {
        if let Some(l) = clause.lits.iter().find(|l| l.var >= self.dimension) {
            return Err(Error::OutOfRange(format!("variable x{}", l.var + 1)));
        }
        self.constraints.push(Constraint::Clause(clause));
        Ok(())
    }

    /// Adds a relation to the table (reusing an equal one) and returns its id.
    pub fn add_relation(&mut self, relation: Relation) -> usize {
        if let Some(i) = self.relations.iter().position(|r| *r == relation) {
            return i;
        }
        self.relations.push(relation);
        self.relations.len() - 1
    }

    pub fn apply(&mut self, relation: usize, args: Vec<Arg>) -> Result<()> {
        let rel = self
            .relations
            .get(relation)
            .ok_or_else(|| Error::OutOfRange(format!("relation id {relation}")))?;
        if rel.arity() != args.len() {
            return Err(Error::precondition(format!(
                "relation {} has arity {} but was given {} arguments",
                rel.name().unwrap_or("?"),
                rel.arity(),
                args.len()
            )));
        }
        for a in &args {
            if let Arg::Var(v) = a {
                if *v >= self.dimension {
                    return Err(Error::OutOfRange(format!("variable x{}", v + 1)));
                }
            }
        }
        self.constraints.push(Constraint::Apply { relation, args });
        Ok(())
    }

    pub fn is_cnf(&self) -> bool {
        self.constraints
            .iter()
            .all(|c| matches!(c, Constraint::Clause(_)))
    }

    /// The clauses of a CNF formula.
    pub fn clauses(&self) -> Result<Vec<&Clause>> {
        self.constraints
            .iter()
            .enumerate()
            .map(|(index, c)| match c {
                Constraint::Clause(cl) => Ok(cl),
                Constraint::Apply { .. } => Err(Error::NotCnf { index }),
            })
            .collect()
    }

    pub fn uses_constants(&self) -> bool {
        self.constraints.iter().any(|c| match c {
            Constraint::Apply { args, .. } => args.iter().any(|a| matches!(a, Arg::Const(_))),
            Constraint::Clause(_) => false,
        })
    }

    /// Mask of variables that occur in at least one constraint.
    pub fn constrained_mask(&self) -> u64 {
        self.constraints.iter().fold(0, |m, c| m | c.var_mask())
    }

    /// Evaluates every constraint at the assignment (bit `i` = variable `i`).
    pub fn eval(&self, assignment: u64) -> bool {
        self.constraints.iter().all(|c| match c {
            Constraint::Clause(cl) => cl.eval(assignment),
            Constraint::Apply { relation, args } => {
                let tuple = args.iter().enumerate().fold(0u64, |t, (i, a)| {
                    let bit = match *a {
                        Arg::Var(v) => assignment >> v & 1,
                        Arg::Const(b) => b as u64,
                    };
                    t | bit << i
                });
                self.relations[*relation].contains(tuple)
            }
        })
    }

    /// Drops tautological clauses. Solutions are unchanged.
    pub fn normalized(&self) -> Formula {
        let mut out = self.clone();
        out.constraints
            .retain(|c| !matches!(c, Constraint::Clause(cl) if cl.is_tautology()));
        out
    }

    /// Renumbers variables through `map` (old index -> new index) into a
    /// formula of dimension `dimension`. Unmapped variables must not occur.
    pub(crate) fn remap(&self, dimension: usize, map: &[Option<usize>]) -> Result<Formula> {
        let var = |v: usize| {
            map.get(v)
                .copied()
                .flatten()
                .ok_or_else(|| Error::precondition(format!("variable x{} has no image", v + 1)))
        };
        let mut out = Formula::new(dimension)?;
        out.relations = self.relations.clone();
        for c in &self.constraints {
            let c = match c {
                Constraint::Clause(cl) => Constraint::Clause(Clause::new(
                    cl.lits
                        .iter()
                        .map(|l| var(l.var).map(|v| Lit { var: v, positive: l.positive }))
                        .collect::<Result<Vec<_>>>()?,
                )),
                Constraint::Apply { relation, args } => Constraint::Apply {
                    relation: *relation,
                    args: args
                        .iter()
                        .map(|a| match *a {
                            Arg::Var(v) => var(v).map(Arg::Var),
                            Arg::Const(b) => Ok(Arg::Const(b)),
                        })
                        .collect::<Result<Vec<_>>>()?,
                },
            };
            out.constraints.push(c);
        }
        Ok(out)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constraints.is_empty() {
            return write!(f, "true[d={}]", self.dimension);
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            match c {
                Constraint::Clause(cl) => write!(f, "{cl}")?,
                Constraint::Apply { relation, args } => {
                    let rel = &self.relations[*relation];
                    write!(f, "{}(", relation_label(rel, *relation))?;
                    for (j, a) in args.iter().enumerate() {
                        if j > 0 {
                            f.write_str(",")?;
                        }
                        match a {
                            Arg::Var(v) => write!(f, "x{}", v + 1)?,
                            Arg::Const(b) => write!(f, "{}", *b as u8)?,
                        }
                    }
                    f.write_str(")")?;
                }
            }
        }
        Ok(())
    }
}

fn relation_label(rel: &Relation, index: usize) -> String {
    rel.name()
        .map(str::to_owned)
        .unwrap_or_else(|| format!("R{index}"))
}

fn lit_from_dimacs(value: i64, dimension: usize) -> Result<Lit> {
    let var = value.unsigned_abs() as usize;
    if value == 0 || var > dimension {
        return Err(Error::OutOfRange(format!("literal {value}")));
    }
    Ok(Lit {
        var: var - 1,
        positive: value > 0,
    })
}

/// Maxima over clauses of total, positive and negative literal counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClauseShape {
    pub max_len: usize,
    pub max_pos: usize,
    pub max_neg: usize,
}

impl ClauseShape {
    /// True when every maximum is within the given `(k, p, n)` bounds.
    pub fn fits(&self, k: usize, p: usize, n: usize) -> bool {
        self.max_len <= k && self.max_pos <= p && self.max_neg <= n
    }
}

pub fn clause_shape(formula: &Formula) -> Result<ClauseShape> {
    Ok(formula
        .clauses()?
        .into_iter()
        .fold(ClauseShape::default(), |s, c| ClauseShape {
            max_len: s.max_len.max(c.len()),
            max_pos: s.max_pos.max(c.positives()),
            max_neg: s.max_neg.max(c.negatives()),
        }))
}

/// Parses DIMACS CNF. Comment lines start with `c`; a `%` line ends input.
/// The empty clause (a lone `0`) is accepted.
pub fn parse_dimacs(text: &str) -> Result<Formula> {
    let mut header: Option<(Formula, usize, usize)> = None;
    let mut pending: Vec<Lit> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(Error::parse(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let vars: usize = parts[2]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad variable count `{}`", parts[2])))?;
            let clauses: usize = parts[3]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad clause count `{}`", parts[3])))?;
            let f = Formula::new(vars).map_err(|e| Error::parse(line_no, e.to_string()))?;
            header = Some((f, clauses, line_no));
            continue;
        }
        let Some((formula, _, _)) = header.as_mut() else {
            return Err(Error::parse(line_no, "clause before the `p cnf` line"));
        };
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal `{tok}`")))?;
            if v == 0 {
                formula
                    .add_clause(Clause::new(pending.drain(..)))
                    .expect("literals already range-checked");
            } else {
                let lit = lit_from_dimacs(v, formula.dimension()).map_err(|_| {
                    Error::parse(
                        line_no,
                        format!("variable {} out of range 1..={}", v.abs(), formula.dimension()),
                    )
                })?;
                pending.push(lit);
            }
        }
    }
    let Some((mut formula, declared, header_line)) = header else {
        return Err(Error::parse(1, "missing `p cnf` line"));
    };
    if !pending.is_empty() {
        // tolerate a final clause without its terminating 0
        formula.add_clause(Clause::new(pending))?;
    }
    let found = formula.constraints.len();
    if found != declared {
        return Err(Error::parse(
            header_line,
            format!("header declares {declared} clauses but {found} were given"),
        ));
    }
    Ok(formula)
}

/// Writes a CNF formula as DIMACS.
pub fn emit_dimacs(formula: &Formula) -> Result<String> {
    let clauses = formula.clauses()?;
    let mut out = format!("p cnf {} {}\n", formula.dimension(), clauses.len());
    for c in clauses {
        for l in c.lits() {
            out.push_str(&l.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    Ok(out)
}

fn parse_arg(tok: &str, line_no: usize, dimension: usize) -> Result<Term> {
    match tok {
        "T" => return Ok(Term::Const(true)),
        "F" => return Ok(Term::Const(false)),
        _ => {}
    }
    let (positive, rest) = match tok.strip_prefix('-') {
        Some(r) => (false, r),
        None => (true, tok),
    };
    let index: usize = rest
        .strip_prefix('v')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| Error::parse(line_no, format!("bad argument `{tok}`")))?;
    if index == 0 || index > dimension {
        return Err(Error::parse(
            line_no,
            format!("variable v{index} out of range 1..={dimension}"),
        ));
    }
    Ok(Term::Lit(Lit {
        var: index - 1,
        positive,
    }))
}

/// Parses the CSP text format.
///
/// ```text
/// dim 3
/// NAE v1 v2 v3      # relation application; arguments v<i>, T or F
/// or v1 -v2 F       # clause; `-` negates a variable
/// ```
///
/// Relation names resolve against `relations`. Constants (`T`/`F`) are
/// rejected unless `with_constants` is set. Clause constants follow the usual
/// simplification: `T` removes the clause, `F` is dropped from it.
pub fn parse_csp(text: &str, relations: &[Relation], with_constants: bool) -> Result<Formula> {
    let by_name: HashMap<&str, &Relation> = relations
        .iter()
        .rev()
        .filter_map(|r| r.name().map(|n| (n, r)))
        .collect();
    let mut formula: Option<Formula> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = line.split_whitespace();
        let Some(head) = tokens.next() else { continue };
        if head == "dim" {
            if formula.is_some() {
                return Err(Error::parse(line_no, "duplicate `dim` line"));
            }
            let d = tokens
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(line_no, "expected `dim <d>`"))?;
            if tokens.next().is_some() {
                return Err(Error::parse(line_no, "trailing tokens after `dim <d>`"));
            }
            formula = Some(Formula::new(d).map_err(|e| Error::parse(line_no, e.to_string()))?);
            continue;
        }
        let f = formula
            .as_mut()
            .ok_or_else(|| Error::parse(line_no, "constraint before the `dim` line"))?;
        let d = f.dimension();
        let terms = tokens
            .map(|t| parse_arg(t, line_no, d))
            .collect::<Result<Vec<_>>>()?;
        if !with_constants && terms.iter().any(|t| matches!(t, Term::Const(_))) {
            return Err(Error::parse(line_no, "constant argument but constants are disabled"));
        }
        if head == "or" {
            if let Some(clause) = Clause::from_terms(terms) {
                f.add_clause(clause)?;
            }
            continue;
        }
        let rel = by_name
            .get(head)
            .ok_or_else(|| Error::parse(line_no, format!("unknown relation `{head}`")))?;
        let args = terms
            .into_iter()
            .map(|t| match t {
                Term::Const(b) => Ok(Arg::Const(b)),
                Term::Lit(l) if l.positive => Ok(Arg::Var(l.var)),
                Term::Lit(_) => Err(Error::parse(line_no, "negated argument to a relation")),
            })
            .collect::<Result<Vec<_>>>()?;
        if args.len() != rel.arity() {
            return Err(Error::parse(
                line_no,
                format!(
                    "relation `{head}` has arity {} but got {} arguments",
                    rel.arity(),
                    args.len()
                ),
            ));
        }
        let id = f.add_relation((*rel).clone());
        f.apply(id, args)?;
    }
    formula.ok_or_else(|| Error::parse(1, "missing `dim` line"))
}

/// Writes the CSP text format. Relation applications refer to relations by
/// name (`R<index>` when unnamed), matching
/// [`emit_relations`](crate::relations::emit_relations) on
/// [`Formula::relations`].
pub fn emit_csp(formula: &Formula) -> String {
    let mut out = format!("dim {}\n", formula.dimension());
    for c in &formula.constraints {
        match c {
            Constraint::Clause(cl) => {
                out.push_str("or");
                for l in cl.lits() {
                    out.push_str(if l.positive { " v" } else { " -v" });
                    out.push_str(&(l.var + 1).to_string());
                }
            }
            Constraint::Apply { relation, args } => {
                out.push_str(&relation_label(&formula.relations[*relation], *relation));
                for a in args {
                    match a {
                        Arg::Var(v) => out.push_str(&format!(" v{}", v + 1)),
                        Arg::Const(b) => out.push_str(if *b { " T" } else { " F" }),
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

/// One GF(2) equation `xor of support = rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Equation {
    pub support: u64,
    pub rhs: bool,
}

impl Equation {
    /// The contradiction `0 = 1`.
    pub const FALSE: Equation = Equation {
        support: 0,
        rhs: true,
    };

    pub fn holds(&self, assignment: u64) -> bool {
        ((assignment & self.support).count_ones() % 2 == 1) == self.rhs
    }
}

/// A system of affine equations over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSystem {
    dimension: usize,
    equations: Vec<Equation>,
}

impl AffineSystem {
    pub fn new(dimension: usize) -> Result<Self> {
        Formula::new(dimension)?;
        Ok(AffineSystem {
            dimension,
            equations: Vec::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Adds `xor of vars = rhs`. Repeated variables cancel in pairs; a
    /// resulting `0 = 0` is dropped.
    pub fn push(&mut self, vars: &[usize], rhs: bool) -> Result<()> {
        let mut support = 0u64;
        for &v in vars {
            if v >= self.dimension {
                return Err(Error::OutOfRange(format!("variable x{}", v + 1)));
            }
            support ^= 1 << v;
        }
        self.push_equation(Equation { support, rhs });
        Ok(())
    }

    pub(crate) fn push_equation(&mut self, eq: Equation) {
        if eq.support == 0 && !eq.rhs {
            return;
        }
        if eq == Equation::FALSE && self.equations.contains(&Equation::FALSE) {
            return;
        }
        self.equations.push(eq);
    }

    pub(crate) fn from_parts(dimension: usize, equations: Vec<Equation>) -> Self {
        let mut out = AffineSystem {
            dimension,
            equations: Vec::new(),
        };
        for eq in equations {
            out.push_equation(eq);
        }
        out
    }

    pub fn is_consistent_syntactically(&self) -> bool {
        !self.equations.contains(&Equation::FALSE)
    }

    pub fn eval(&self, assignment: u64) -> bool {
        self.equations.iter().all(|e| e.holds(assignment))
    }

    /// Encodes each equation as an application of a parity relation.
    /// The contradiction `0 = 1` becomes the empty clause.
    pub fn to_formula(&self) -> Formula {
        let mut f = Formula::new(self.dimension).expect("dimension validated");
        for eq in &self.equations {
            if eq.support == 0 {
                f.add_clause(Clause::default()).expect("empty clause");
                continue;
            }
            let vars: Vec<usize> = (0..self.dimension).filter(|v| eq.support >> v & 1 == 1).collect();
            let rel = crate::relations::known::parity(vars.len(), eq.rhs);
            let id = f.add_relation(rel);
            f.apply(id, vars.into_iter().map(Arg::Var).collect())
                .expect("arity matches support");
        }
        f
    }
}

impl fmt::Display for AffineSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "affine[d={}]", self.dimension)?;
        for eq in &self.equations {
            let vars: Vec<String> = (0..self.dimension)
                .filter(|v| eq.support >> v & 1 == 1)
                .map(|v| format!("x{}", v + 1))
                .collect();
            let lhs = if vars.is_empty() { "0".to_owned() } else { vars.join("^") };
            write!(f, " {}={}", lhs, eq.rhs as u8)?;
        }
        Ok(())
    }
}
