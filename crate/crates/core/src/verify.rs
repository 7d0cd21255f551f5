//! Randomized checks of structural claims about solution spaces.
//!
//! Every check draws its instances from a seeded generator, computes both
//! sides of a claim exactly and records each instance where they disagree.
//! Trial `i` of a run with seed `s` uses its own stream derived from
//! `(s, i)`, so reports are reproducible and independent of trial order.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    project_affine_many, project_clausal_many, to_3sat, to_kpn322, ClauseClass,
};
use crate::cubical::{induce_complex, CubicalComplex};
use crate::error::{Error, Result};
use crate::formula::{clause_shape, emit_csp, emit_dimacs, AffineSystem, Arg, Clause, Formula, Lit};
use crate::homology::{homology, Coefficients, HomologyProfile};
use crate::relations::{known, relation_properties, Relation};
use crate::solution_space::{affine_solutions, drop_unconstrained, enumerate_solutions, project, VertexSet, D_MAX};

/// Syntactic family of generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// Clauses of one or two literals.
    TwoSat,
    /// Clauses with at most one positive literal.
    Horn,
    /// Clauses with at most one negative literal.
    DualHorn,
    /// GF(2) equation systems.
    Affine,
    /// Clauses of one to `k` literals with arbitrary signs.
    Cnf(usize),
    /// Applications of the exactly-one-of-three relation.
    OneInThree,
}

impl Flavor {
    pub fn clause_class(self) -> Option<ClauseClass> {
        match self {
            Flavor::TwoSat => Some(ClauseClass::TwoSat),
            Flavor::Horn => Some(ClauseClass::Horn),
            Flavor::DualHorn => Some(ClauseClass::DualHorn),
            _ => None,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::TwoSat => f.write_str("two_sat"),
            Flavor::Horn => f.write_str("horn"),
            Flavor::DualHorn => f.write_str("dual_horn"),
            Flavor::Affine => f.write_str("affine"),
            Flavor::Cnf(k) => write!(f, "cnf{k}"),
            Flavor::OneInThree => f.write_str("one_in_three"),
        }
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase().replace('-', "_");
        match s.as_str() {
            "two_sat" | "2sat" | "2_sat" | "bijunctive" => Ok(Flavor::TwoSat),
            "horn" => Ok(Flavor::Horn),
            "dual_horn" => Ok(Flavor::DualHorn),
            "affine" => Ok(Flavor::Affine),
            "one_in_three" | "1in3" => Ok(Flavor::OneInThree),
            _ => s
                .strip_prefix("cnf")
                .map(|k| k.trim_start_matches([':', '_']))
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(Flavor::Cnf)
                .ok_or_else(|| Error::precondition(format!("unknown flavor `{s}`"))),
        }
    }
}

/// Ranges and seed for the instance generator. Ranges are inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub min_dim: usize,
    pub max_dim: usize,
    pub min_count: usize,
    pub max_count: usize,
    pub flavor: Flavor,
    pub seed: u64,
}

impl GeneratorParams {
    pub fn new(dims: (usize, usize), counts: (usize, usize), flavor: Flavor, seed: u64) -> Result<Self> {
        let p = GeneratorParams {
            min_dim: dims.0,
            max_dim: dims.1,
            min_count: counts.0,
            max_count: counts.1,
            flavor,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_dim == 0 || self.min_dim > self.max_dim {
            return Err(Error::precondition(format!(
                "bad dimension range {}..={}",
                self.min_dim, self.max_dim
            )));
        }
        if self.max_dim > D_MAX {
            return Err(Error::ResourceLimit {
                what: "dimension",
                requested: self.max_dim,
                limit: D_MAX,
            });
        }
        if self.min_count > self.max_count {
            return Err(Error::precondition(format!(
                "bad count range {}..={}",
                self.min_count, self.max_count
            )));
        }
        if let Flavor::Cnf(0) = self.flavor {
            return Err(Error::precondition("cnf clause length must be at least 1"));
        }
        Ok(())
    }

    pub fn with_flavor(&self, flavor: Flavor) -> Self {
        GeneratorParams { flavor, ..self.clone() }
    }
}

/// A generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Formula(Formula),
    Affine(AffineSystem),
}

impl Instance {
    pub fn dimension(&self) -> usize {
        match self {
            Instance::Formula(f) => f.dimension(),
            Instance::Affine(a) => a.dimension(),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Instance::Formula(f) => f.clone(),
            Instance::Affine(a) => a.to_formula(),
        }
    }

    pub fn solutions(&self) -> Result<VertexSet> {
        match self {
            Instance::Formula(f) => enumerate_solutions(f),
            Instance::Affine(a) => affine_solutions(a),
        }
    }

    /// DIMACS for CNF, CSP text otherwise.
    pub fn to_text(&self) -> String {
        match self {
            Instance::Formula(f) => describe(f),
            Instance::Affine(a) => a.to_string(),
        }
    }
}

fn describe(f: &Formula) -> String {
    emit_dimacs(f).unwrap_or_else(|_| emit_csp(f))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The generator stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial as u64)))
}

fn random_vars<R: Rng>(rng: &mut R, d: usize, k: usize) -> Vec<usize> {
    sample(rng, d, k.min(d)).into_vec()
}

/// A random clause in the flavor's class: distinct variables, so never a
/// tautology and never a repeated literal.
fn random_clause<R: Rng>(rng: &mut R, d: usize, flavor: Flavor) -> Clause {
    let max_len = match flavor {
        Flavor::TwoSat => 2,
        Flavor::Horn | Flavor::DualHorn => 3,
        Flavor::Cnf(k) => k,
        Flavor::Affine | Flavor::OneInThree => unreachable!("not a clause flavor"),
    }
    .min(d);
    // Mostly full-length clauses; short ones over-constrain quickly.
    let len = if rng.random_bool(0.75) { max_len } else { rng.random_range(1..=max_len) };
    let vars = random_vars(rng, d, len);
    let signs: Vec<bool> = match flavor {
        Flavor::Horn | Flavor::DualHorn => {
            let special = rng.random_bool(0.5).then(|| rng.random_range(0..len));
            let majority = flavor == Flavor::DualHorn;
            (0..len).map(|i| if Some(i) == special { !majority } else { majority }).collect()
        }
        _ => (0..len).map(|_| rng.random_bool(0.5)).collect(),
    };
    Clause::new(vars.into_iter().zip(signs).map(|(var, positive)| Lit { var, positive }))
}

/// Draws one instance from an explicit generator stream.
pub fn random_instance<R: Rng>(rng: &mut R, params: &GeneratorParams) -> Result<Instance> {
    params.validate()?;
    let d = rng.random_range(params.min_dim..=params.max_dim);
    let n = rng.random_range(params.min_count..=params.max_count);
    match params.flavor {
        Flavor::Affine => {
            let mut a = AffineSystem::new(d)?;
            for _ in 0..n.min(d) {
                let mut support = 0u64;
                while support == 0 {
                    support = rng.random::<u64>() & crate::bits::low_mask(d);
                }
                let vars: Vec<usize> = (0..d).filter(|v| support >> v & 1 == 1).collect();
                a.push(&vars, rng.random_bool(0.5))?;
            }
            Ok(Instance::Affine(a))
        }
        Flavor::OneInThree => {
            let mut f = Formula::new(d)?;
            let id = f.add_relation(known::one_in_three());
            for _ in 0..n {
                let args = if d >= 3 {
                    random_vars(rng, d, 3)
                } else {
                    (0..3).map(|_| rng.random_range(0..d)).collect()
                };
                f.apply(id, args.into_iter().map(Arg::Var).collect())?;
            }
            Ok(Instance::Formula(f))
        }
        flavor => {
            let clauses = (0..n).map(|_| random_clause(rng, d, flavor)).collect::<Vec<_>>();
            Ok(Instance::Formula(Formula::cnf(d, clauses)?))
        }
    }
}

/// The instance for trial 0 of `params.seed`.
pub fn random_formula(params: &GeneratorParams) -> Result<Instance> {
    random_instance(&mut trial_rng(params.seed, 0), params)
}

/// One disagreement found by a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub expected: String,
    pub observed: String,
}

/// Outcome of a check run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub seed: u64,
    /// Wall-clock time; not serialized, so reports stay byte-stable per seed.
    #[serde(skip)]
    pub ms: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Runs `trial` for every index, collecting failures in index order.
fn run_trials(
    name: &str,
    seed: u64,
    trials: usize,
    mut trial: impl FnMut(usize) -> Result<Option<Failure>>,
) -> Result<CheckReport> {
    let start = Instant::now();
    let mut failures = Vec::new();
    for i in 0..trials {
        if let Some(f) = trial(i)? {
            failures.push(f);
        }
    }
    Ok(CheckReport {
        check: name.to_owned(),
        trials,
        failures,
        seed,
        ms: start.elapsed().as_millis() as u64,
    })
}

fn require_clause_flavor(params: &GeneratorParams) -> Result<()> {
    match params.flavor.clause_class() {
        Some(_) => Ok(()),
        None => Err(Error::precondition(format!(
            "flavor {} is not one of two_sat, horn, dual_horn",
            params.flavor
        ))),
    }
}

fn profile_text(h: &HomologyProfile) -> String {
    let torsion: Vec<Vec<String>> = h.torsion.iter().map(|t| t.iter().map(ToString::to_string).collect()).collect();
    format!("betti={:?} torsion={:?}", h.betti, torsion)
}

/// Integer homology of the induced complex of a formula's solutions.
pub fn formula_homology(formula: &Formula) -> Result<HomologyProfile> {
    let k = induce_complex(&enumerate_solutions(formula)?)?;
    Ok(homology(&k, Coefficients::Integers))
}

/// `H_p = 0` for all `p >= 1`, or the observed profile.
pub fn tractable_homology_violation(formula: &Formula) -> Result<Option<Failure>> {
    let h = formula_homology(formula)?;
    Ok((!h.trivial_from(1)).then(|| Failure {
        instance: describe(formula),
        expected: "H_p = 0 for p >= 1".into(),
        observed: profile_text(&h),
    }))
}

pub fn check_tractable_homology(params: &GeneratorParams, trials: usize) -> Result<CheckReport> {
    require_clause_flavor(params)?;
    params.validate()?;
    run_trials("tractable-homology", params.seed, trials, |i| {
        let inst = random_instance(&mut trial_rng(params.seed, i), params)?;
        tractable_homology_violation(&inst.to_formula())
    })
}

/// After dropping unconstrained variables the complex has no edges and one
/// component per solution. With nothing constrained the solution set is
/// the whole cube or empty.
pub fn affine_structure_violation(formula: &Formula) -> Result<Option<Failure>> {
    let (reduced, _) = drop_unconstrained(formula);
    let v = enumerate_solutions(&reduced)?;
    let k = induce_complex(&v)?;
    let h = homology(&k, Coefficients::Integers);
    let b0 = h.betti.first().copied().unwrap_or(0);
    let f1 = k.faces(1).len();
    let ok = if formula.constrained_mask() == 0 {
        v.is_empty() || h.is_acyclic()
    } else {
        f1 == 0 && b0 == v.len()
    };
    Ok((!ok).then(|| Failure {
        instance: describe(formula),
        expected: format!("f1=0 b0={}", v.len()),
        observed: format!("f1={f1} b0={b0}"),
    }))
}

pub fn check_affine_structure(params: &GeneratorParams, trials: usize) -> Result<CheckReport> {
    if params.flavor != Flavor::Affine {
        return Err(Error::precondition("affine-structure needs the affine flavor"));
    }
    params.validate()?;
    run_trials("affine-structure", params.seed, trials, |i| {
        let inst = random_instance(&mut trial_rng(params.seed, i), params)?;
        let Instance::Affine(a) = &inst else { unreachable!("affine flavor") };
        Ok(affine_structure_violation(&a.to_formula())?.map(|mut f| {
            f.instance = inst.to_text();
            f
        }))
    })
}

/// Union of the wedges (per-clause induced complexes) in `[0,1]^d`.
pub fn wedge_union(dimension: usize, clauses: &[Clause]) -> Result<CubicalComplex> {
    let mut union = CubicalComplex::empty(dimension)?;
    for c in clauses {
        let w = enumerate_solutions(&Formula::cnf(dimension, [c.clone()])?)?;
        union = union.union(&induce_complex(&w)?)?;
    }
    Ok(union)
}

/// `H_p` of the wedge union vanishes for all `p >= threshold`.
pub fn wedge_union_violation(dimension: usize, clauses: &[Clause], threshold: usize) -> Result<Option<Failure>> {
    let h = homology(&wedge_union(dimension, clauses)?, Coefficients::Integers);
    Ok((!h.trivial_from(threshold)).then(|| Failure {
        instance: describe(&Formula::cnf(dimension, clauses.to_vec()).expect("clauses in range")),
        expected: format!("H_p = 0 for p >= {threshold}"),
        observed: profile_text(&h),
    }))
}

/// Draws `n` clauses per trial; the count range of `params` is ignored.
pub fn check_wedge_union(params: &GeneratorParams, n: usize, trials: usize) -> Result<CheckReport> {
    require_clause_flavor(params)?;
    if !(1..=4).contains(&n) {
        return Err(Error::precondition("wedge count must be in 1..=4"));
    }
    if params.max_dim > 8 {
        return Err(Error::ResourceLimit {
            what: "wedge-union dimension",
            requested: params.max_dim,
            limit: 8,
        });
    }
    let p = GeneratorParams {
        min_count: n,
        max_count: n,
        ..params.clone()
    };
    p.validate()?;
    run_trials(&format!("wedge-union-{n}"), params.seed, trials, |i| {
        let inst = random_instance(&mut trial_rng(params.seed, i), &p)?;
        let f = inst.to_formula();
        let clauses: Vec<Clause> = f.clauses()?.into_iter().cloned().collect();
        wedge_union_violation(f.dimension(), &clauses, n)
    })
}

/// Random conjunctions of relations drawn from `relations`, which must be
/// all 0-valid or all 1-valid; every instance must contain the matching
/// constant vertex.
pub fn check_trivially_valid(params: &GeneratorParams, relations: &[Relation], trials: usize) -> Result<CheckReport> {
    params.validate()?;
    if relations.is_empty() {
        return Err(Error::precondition("relation set is empty"));
    }
    let flags: Vec<_> = relations.iter().map(relation_properties).collect();
    let zero = flags.iter().all(|f| f.zero_valid);
    let one = flags.iter().all(|f| f.one_valid);
    if !zero && !one {
        return Err(Error::precondition("relations are neither all 0-valid nor all 1-valid"));
    }
    run_trials("trivially-valid", params.seed, trials, |i| {
        let rng = &mut trial_rng(params.seed, i);
        let d = rng.random_range(params.min_dim..=params.max_dim);
        let n = rng.random_range(params.min_count..=params.max_count);
        let mut f = Formula::new(d)?;
        for _ in 0..n {
            let r = &relations[rng.random_range(0..relations.len())];
            let id = f.add_relation(r.clone());
            let args = (0..r.arity()).map(|_| Arg::Var(rng.random_range(0..d))).collect();
            f.apply(id, args)?;
        }
        trivially_valid_violation(&f, zero, one)
    })
}

pub fn trivially_valid_violation(formula: &Formula, zero: bool, one: bool) -> Result<Option<Failure>> {
    let v = enumerate_solutions(formula)?;
    let top = crate::bits::low_mask(formula.dimension());
    let missing: Vec<&str> = [(zero, 0u64, "all-zeros"), (one, top, "all-ones")]
        .into_iter()
        .filter(|&(wanted, vertex, _)| wanted && !v.contains(vertex))
        .map(|(_, _, name)| name)
        .collect();
    Ok((!missing.is_empty()).then(|| Failure {
        instance: describe(formula),
        expected: "constant vertex present".into(),
        observed: format!("missing {}", missing.join(" and ")),
    }))
}

/// Each connected component of the induced complex (after dropping
/// unconstrained variables) spans exactly one face of the cube.
pub fn one_in_three_violation(formula: &Formula) -> Result<Option<Failure>> {
    let (reduced, _) = drop_unconstrained(formula);
    let v = enumerate_solutions(&reduced)?;
    let k = induce_complex(&v)?;
    let comps = k.skeleton_components();
    let mut meet = vec![u64::MAX; comps.count];
    let mut join = vec![0u64; comps.count];
    let mut size = vec![0usize; comps.count];
    for (i, f) in k.faces(0).iter().enumerate() {
        let c = comps.labels[i];
        meet[c] &= f.base();
        join[c] |= f.base();
        size[c] += 1;
    }
    let bad = (0..comps.count).find(|&c| size[c] != 1usize << (join[c] ^ meet[c]).count_ones());
    let h = homology(&k, Coefficients::Integers);
    Ok((bad.is_some() || !h.trivial_from(1)).then(|| Failure {
        instance: describe(formula),
        expected: "every component is a single face".into(),
        observed: format!("{} components, {}", comps.count, profile_text(&h)),
    }))
}

pub fn check_one_in_three_structure(params: &GeneratorParams, trials: usize) -> Result<CheckReport> {
    if params.flavor != Flavor::OneInThree {
        return Err(Error::precondition("one-in-three needs the one_in_three flavor"));
    }
    params.validate()?;
    run_trials("one-in-three", params.seed, trials, |i| {
        let inst = random_instance(&mut trial_rng(params.seed, i), params)?;
        one_in_three_violation(&inst.to_formula())
    })
}

/// Compares a claimed projection against brute force, and its class.
pub fn projection_violation(
    original: &Instance,
    dims: &[usize],
    projected: &Instance,
    class: Option<ClauseClass>,
) -> Result<Option<Failure>> {
    let brute = project(&original.solutions()?, dims)?;
    let got = projected.solutions()?;
    let in_class = match (class, projected) {
        (Some(c), Instance::Formula(f)) => c.admits_formula(f),
        (None, Instance::Affine(_)) => {
            got.is_empty() || relation_properties(&Relation::from_tuples(got.dimension(), got.iter())?).affine
        }
        _ => false,
    };
    let dims_text: Vec<String> = dims.iter().map(|d| (d + 1).to_string()).collect();
    Ok((brute != got || !in_class).then(|| Failure {
        instance: format!("{}project {}", original.to_text(), dims_text.join(" ")),
        expected: format!("{} solutions, in class", brute.len()),
        observed: format!("{} solutions, in class: {in_class}", got.len()),
    }))
}

/// Eliminates a random proper subset of variables with the constructive
/// projection for the flavor and compares against brute force.
pub fn check_projection_constructions(params: &GeneratorParams, trials: usize) -> Result<CheckReport> {
    let class = params.flavor.clause_class();
    if class.is_none() && params.flavor != Flavor::Affine {
        return Err(Error::precondition("projection needs two_sat, horn, dual_horn or affine"));
    }
    params.validate()?;
    run_trials(&format!("projection-{}", params.flavor), params.seed, trials, |i| {
        let rng = &mut trial_rng(params.seed, i);
        let inst = random_instance(rng, params)?;
        let d = inst.dimension();
        let k = rng.random_range(0..d);
        let mut dims = random_vars(rng, d, k);
        dims.sort_unstable();
        let projected = match (&inst, class) {
            (Instance::Formula(f), Some(c)) => Instance::Formula(project_clausal_many(f, &dims, c)?),
            (Instance::Affine(a), None) => Instance::Affine(project_affine_many(a, &dims)?),
            _ => unreachable!("flavor fixes the instance kind"),
        };
        projection_violation(&inst, &dims, &projected, class)
    })
}

/// `to_3sat` followed by `to_kpn322`: the projected solutions equal the
/// original ones, the shape is within (3,2,2), and the reduced complex has
/// the homology of the original.
pub fn reduction_violation(formula: &Formula) -> Result<Option<Failure>> {
    let r3 = to_3sat(formula)?;
    let r322 = to_kpn322(&r3.formula)?;
    let reduced = enumerate_solutions(&r322.formula)?;
    let d = formula.dimension();
    let aux: Vec<usize> = (d..r322.formula.dimension()).collect();
    let original = enumerate_solutions(formula)?;
    let projected = project(&reduced, &aux)?;
    let shape_ok = clause_shape(&r322.formula)?.fits(3, 2, 2);
    let h_orig = homology(&induce_complex(&original)?, Coefficients::Integers);
    let h_red = homology(&induce_complex(&reduced)?, Coefficients::Integers);
    let same = h_orig.same_groups(&h_red);
    Ok((projected != original || !shape_ok || !same).then(|| Failure {
        instance: describe(formula),
        expected: format!("{} projected solutions, shape <= (3,2,2), {}", original.len(), profile_text(&h_orig)),
        observed: format!("{} projected solutions, shape ok: {shape_ok}, {}", projected.len(), profile_text(&h_red)),
    }))
}

pub fn check_reductions(params: &GeneratorParams, trials: usize) -> Result<CheckReport> {
    if !matches!(params.flavor, Flavor::Cnf(_)) {
        return Err(Error::precondition("reductions need a cnf flavor"));
    }
    params.validate()?;
    run_trials("reductions", params.seed, trials, |i| {
        let inst = random_instance(&mut trial_rng(params.seed, i), params)?;
        reduction_violation(&inst.to_formula())
    })
}

/// `∂∂ = 0`, components of the 1-skeleton equal `b_0`, and the Euler
/// characteristic of the f-vector equals that of the rational Betti numbers.
pub fn structural_violation(set: &VertexSet) -> Result<Option<Failure>> {
    let k = induce_complex(set)?;
    let mut problems = Vec::new();
    if let Some(top) = k.top_dimension() {
        for p in 2..=top {
            if !k.boundary_matrix(p - 1)?.mul(&k.boundary_matrix(p)?)?.is_zero() {
                problems.push(format!("boundary composition {} nonzero", p));
            }
        }
    }
    let h = homology(&k, Coefficients::Rationals);
    let b0 = h.betti.first().copied().unwrap_or(0);
    let comps = k.skeleton_components().count;
    if comps != b0 {
        problems.push(format!("components {comps} != b0 {b0}"));
    }
    if k.euler_characteristic() != h.euler_characteristic() {
        problems.push(format!(
            "euler {} != {}",
            k.euler_characteristic(),
            h.euler_characteristic()
        ));
    }
    Ok((!problems.is_empty()).then(|| Failure {
        instance: set.to_text(),
        expected: "structural identities hold".into(),
        observed: problems.join("; "),
    }))
}

/// Uniformly random vertex subsets; the flavor and count range are ignored.
pub fn check_structural_invariants(params: &GeneratorParams, trials: usize) -> Result<CheckReport> {
    params.validate()?;
    run_trials("structural", params.seed, trials, |i| {
        let rng = &mut trial_rng(params.seed, i);
        let d = rng.random_range(params.min_dim..=params.max_dim);
        let density: f64 = rng.random_range(0.2..0.95);
        let members: Vec<u64> = (0..1u64 << d).filter(|_| rng.random_bool(density)).collect();
        structural_violation(&VertexSet::from_vertices(d, members)?)
    })
}

/// The checks available by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    TractableHomology,
    AffineStructure,
    WedgeUnion,
    TriviallyValid,
    OneInThree,
    Projection,
    Reductions,
    Structural,
}

/// Default trial count and generator ranges of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckDefaults {
    pub trials: usize,
    pub dims: (usize, usize),
    pub counts: (usize, usize),
    pub flavor: Flavor,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::TractableHomology,
        CheckKind::AffineStructure,
        CheckKind::WedgeUnion,
        CheckKind::TriviallyValid,
        CheckKind::OneInThree,
        CheckKind::Projection,
        CheckKind::Reductions,
        CheckKind::Structural,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::TractableHomology => "tractable-homology",
            CheckKind::AffineStructure => "affine-structure",
            CheckKind::WedgeUnion => "wedge-union",
            CheckKind::TriviallyValid => "trivially-valid",
            CheckKind::OneInThree => "one-in-three",
            CheckKind::Projection => "projection",
            CheckKind::Reductions => "reductions",
            CheckKind::Structural => "structural",
        }
    }

    pub fn defaults(self) -> CheckDefaults {
        let (trials, dims, counts, flavor) = match self {
            CheckKind::TractableHomology => (200, (1, 10), (1, 25), Flavor::TwoSat),
            CheckKind::AffineStructure => (100, (1, 12), (0, 12), Flavor::Affine),
            CheckKind::WedgeUnion => (100, (2, 8), (1, 4), Flavor::TwoSat),
            CheckKind::TriviallyValid => (50, (1, 10), (1, 10), Flavor::TwoSat),
            CheckKind::OneInThree => (100, (3, 10), (1, 6), Flavor::OneInThree),
            CheckKind::Projection => (200, (2, 10), (1, 15), Flavor::TwoSat),
            CheckKind::Reductions => (100, (3, 8), (1, 3), Flavor::Cnf(6)),
            CheckKind::Structural => (500, (1, 8), (0, 0), Flavor::TwoSat),
        };
        CheckDefaults { trials, dims, counts, flavor }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase().replace('_', "-");
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::precondition(format!("unknown check `{s}`")))
    }
}

/// Inputs some checks need beyond the generator parameters.
#[derive(Debug, Clone, Default)]
pub struct CheckExtras {
    /// Wedge count for `wedge-union`.
    pub wedges: Option<usize>,
    /// Relation set for `trivially-valid`; defaults to the 0-valid
    /// relation `{000, 110, 101}`.
    pub relations: Vec<Relation>,
}

/// Dispatches to the named check.
pub fn run_check(kind: CheckKind, params: &GeneratorParams, trials: usize, extras: &CheckExtras) -> Result<CheckReport> {
    match kind {
        CheckKind::TractableHomology => check_tractable_homology(params, trials),
        CheckKind::AffineStructure => check_affine_structure(params, trials),
        CheckKind::WedgeUnion => {
            let n = extras
                .wedges
                .ok_or_else(|| Error::precondition("wedge-union needs a wedge count"))?;
            check_wedge_union(params, n, trials)
        }
        CheckKind::TriviallyValid => {
            let relations = if extras.relations.is_empty() {
                vec![Relation::from_tuples(3, [0b000, 0b011, 0b101])?.named("R0")]
            } else {
                extras.relations.clone()
            };
            check_trivially_valid(params, &relations, trials)
        }
        CheckKind::OneInThree => check_one_in_three_structure(params, trials),
        CheckKind::Projection => check_projection_constructions(params, trials),
        CheckKind::Reductions => check_reductions(params, trials),
        CheckKind::Structural => check_structural_invariants(params, trials),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_dimacs;

    fn hexagon() -> Formula {
        parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n").unwrap()
    }

    fn params(flavor: Flavor, dims: (usize, usize), counts: (usize, usize), seed: u64) -> GeneratorParams {
        GeneratorParams::new(dims, counts, flavor, seed).unwrap()
    }

    #[test]
    fn generation_is_deterministic_and_in_class() {
        let p = params(Flavor::TwoSat, (4, 4), (5, 5), 1);
        let a = random_formula(&p).unwrap();
        assert_eq!(a, random_formula(&p).unwrap());
        let f = a.to_formula();
        assert_eq!((f.dimension(), f.constraints().len()), (4, 5));
        assert!(ClauseClass::TwoSat.admits_formula(&f));
        for flavor in [Flavor::Horn, Flavor::DualHorn] {
            for i in 0..50 {
                let inst = random_instance(&mut trial_rng(3, i), &params(flavor, (1, 8), (0, 10), 3)).unwrap();
                let f = inst.to_formula();
                assert!(flavor.clause_class().unwrap().admits_formula(&f));
                assert!(f.clauses().unwrap().iter().all(|c| !c.is_tautology() && !c.is_empty()));
            }
        }
        let Instance::Affine(a) = random_formula(&params(Flavor::Affine, (3, 3), (0, 10), 9)).unwrap() else {
            panic!("expected an affine system");
        };
        assert!(a.equations().len() <= 3);
        let f = random_formula(&params(Flavor::OneInThree, (5, 5), (2, 2), 4)).unwrap().to_formula();
        assert_eq!(f.relations(), &[known::one_in_three()]);
    }

    #[test]
    fn flavor_names() {
        assert_eq!("two-sat".parse::<Flavor>().unwrap(), Flavor::TwoSat);
        assert_eq!("cnf6".parse::<Flavor>().unwrap(), Flavor::Cnf(6));
        assert_eq!("cnf:3".parse::<Flavor>().unwrap(), Flavor::Cnf(3));
        assert!("cnf0".parse::<Flavor>().is_err());
        assert!("horny".parse::<Flavor>().is_err());
        assert_eq!(Flavor::DualHorn.to_string(), "dual_horn");
    }

    #[test]
    fn params_validation() {
        assert!(GeneratorParams::new((0, 3), (1, 1), Flavor::Horn, 0).is_err());
        assert!(GeneratorParams::new((3, 2), (1, 1), Flavor::Horn, 0).is_err());
        assert!(GeneratorParams::new((1, 21), (1, 1), Flavor::Horn, 0).unwrap_err().is_resource());
        assert!(GeneratorParams::new((1, 2), (3, 1), Flavor::Horn, 0).is_err());
    }

    #[test]
    fn tractable_homology_examples() {
        let horn = Formula::from_dimacs_clauses(2, &[&[-1, -2]]).unwrap();
        assert_eq!(formula_homology(&horn).unwrap().betti, vec![1, 0]);
        assert!(tractable_homology_violation(&horn).unwrap().is_none());
        // Inversion: the hexagon has a 1-cycle.
        let fail = tractable_homology_violation(&hexagon()).unwrap().unwrap();
        assert!(fail.observed.contains("betti=[1, 1]"));
        let r = check_tractable_homology(&params(Flavor::Horn, (1, 6), (1, 8), 11), 30).unwrap();
        assert!(r.passed() && r.trials == 30);
        assert!(check_tractable_homology(&params(Flavor::Affine, (1, 3), (1, 1), 0), 1).is_err());
    }

    #[test]
    fn affine_examples() {
        let mut a = AffineSystem::new(2).unwrap();
        a.push(&[0, 1], true).unwrap();
        assert!(affine_structure_violation(&a.to_formula()).unwrap().is_none());
        assert_eq!(affine_solutions(&a).unwrap().len(), 2);
        let empty = AffineSystem::new(2).unwrap();
        assert!(affine_structure_violation(&empty.to_formula()).unwrap().is_none());
        // Inversion: a 2-SAT edge survives dropping.
        let edge = Formula::from_dimacs_clauses(2, &[&[1, 2]]).unwrap();
        assert!(affine_structure_violation(&edge).unwrap().is_some());
    }

    #[test]
    fn wedge_examples() {
        let c = |lits: &[i64]| {
            Clause::new(lits.iter().map(|&l| Lit {
                var: l.unsigned_abs() as usize - 1,
                positive: l > 0,
            }))
        };
        assert!(wedge_union_violation(3, &[c(&[1, 2])], 1).unwrap().is_none());
        assert!(wedge_union_violation(4, &[c(&[-1, 2]), c(&[-3, -4])], 2).unwrap().is_none());
        // Inversion: two 2-SAT wedges whose union is a 4-cycle at p = n - 1.
        let pair = [c(&[1, 2]), c(&[-1, -2])];
        assert!(wedge_union_violation(2, &pair, 2).unwrap().is_none());
        let fail = wedge_union_violation(2, &pair, 1).unwrap().unwrap();
        assert!(fail.observed.contains("betti=[1, 1]"));
        let r = check_wedge_union(&params(Flavor::TwoSat, (2, 6), (1, 1), 5), 3, 20).unwrap();
        assert!(r.passed());
        assert!(check_wedge_union(&params(Flavor::TwoSat, (2, 9), (1, 1), 5), 2, 1).is_err());
        assert!(check_wedge_union(&params(Flavor::TwoSat, (2, 6), (1, 1), 5), 5, 1).is_err());
    }

    #[test]
    fn trivially_valid_examples() {
        let r0 = Relation::from_tuples(3, [0b000, 0b011, 0b101]).unwrap().named("R0");
        let p = params(Flavor::Horn, (3, 8), (1, 6), 2);
        assert!(check_trivially_valid(&p, &[r0.clone()], 50).unwrap().passed());
        assert!(check_trivially_valid(&p, &[r0.complement()], 50).unwrap().passed());
        assert!(check_trivially_valid(&p, &[r0.clone(), r0.complement()], 1).is_err());
        // Inversion: NAE excludes both constant vertices.
        let mut f = Formula::new(3).unwrap();
        let id = f.add_relation(known::nae3());
        f.apply(id, vec![Arg::Var(0), Arg::Var(1), Arg::Var(2)]).unwrap();
        assert!(trivially_valid_violation(&f, true, false).unwrap().is_some());
    }

    #[test]
    fn one_in_three_examples() {
        let mut f = Formula::new(3).unwrap();
        let id = f.add_relation(known::one_in_three());
        f.apply(id, vec![Arg::Var(0), Arg::Var(1), Arg::Var(2)]).unwrap();
        let k = induce_complex(&enumerate_solutions(&f).unwrap()).unwrap();
        assert_eq!(k.f_vector(), vec![3]);
        assert!(one_in_three_violation(&f).unwrap().is_none());
        let mut g = Formula::new(5).unwrap();
        let id = g.add_relation(known::one_in_three());
        g.apply(id, vec![Arg::Var(0), Arg::Var(1), Arg::Var(2)]).unwrap();
        g.apply(id, vec![Arg::Var(2), Arg::Var(3), Arg::Var(4)]).unwrap();
        assert!(one_in_three_violation(&g).unwrap().is_none());
        // Inversion: the hexagon is one component spanning the whole cube.
        assert!(one_in_three_violation(&hexagon()).unwrap().is_some());
        let r = check_one_in_three_structure(&params(Flavor::OneInThree, (3, 8), (1, 5), 8), 30).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn projection_examples() {
        let f = Formula::from_dimacs_clauses(3, &[&[1, 3], &[2, -3]]).unwrap();
        let p = project_clausal_many(&f, &[2], ClauseClass::TwoSat).unwrap();
        let (fi, pi) = (Instance::Formula(f.clone()), Instance::Formula(p));
        assert!(projection_violation(&fi, &[2], &pi, Some(ClauseClass::TwoSat)).unwrap().is_none());
        let same = project_clausal_many(&f, &[], ClauseClass::TwoSat).unwrap();
        assert_eq!(same, f);
        // Inversion: deleting the clauses that mention x3 over-approximates.
        let naive = Instance::Formula(Formula::new(2).unwrap());
        assert!(projection_violation(&fi, &[2], &naive, Some(ClauseClass::TwoSat)).unwrap().is_some());
        for flavor in [Flavor::TwoSat, Flavor::Horn, Flavor::DualHorn, Flavor::Affine] {
            let r = check_projection_constructions(&params(flavor, (2, 7), (1, 10), 21), 40).unwrap();
            assert!(r.passed(), "{flavor}: {:?}", r.failures);
        }
    }

    #[test]
    fn reduction_examples() {
        assert!(reduction_violation(&hexagon()).unwrap().is_none());
        let long = Formula::from_dimacs_clauses(6, &[&[1, 2, 3, 4, 5, 6], &[-1, -2, -3, -4]]).unwrap();
        assert!(reduction_violation(&long).unwrap().is_none());
        let r = check_reductions(&params(Flavor::Cnf(6), (3, 6), (1, 2), 4), 10).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn structural_examples() {
        assert!(structural_violation(&VertexSet::full(4).unwrap()).unwrap().is_none());
        assert!(structural_violation(&VertexSet::empty(2).unwrap()).unwrap().is_none());
        let r = check_structural_invariants(&params(Flavor::Horn, (1, 6), (0, 0), 1), 40).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn registry_round_trips_names() {
        for k in CheckKind::ALL {
            assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
            let d = k.defaults();
            assert!(GeneratorParams::new(d.dims, d.counts, d.flavor, 0).is_ok());
        }
        assert_eq!("one_in_three".parse::<CheckKind>().unwrap(), CheckKind::OneInThree);
        assert!("nope".parse::<CheckKind>().is_err());
        let p = params(Flavor::TwoSat, (2, 5), (1, 1), 0);
        assert!(run_check(CheckKind::WedgeUnion, &p, 1, &CheckExtras::default()).is_err());
        let extras = CheckExtras { wedges: Some(2), relations: vec![] };
        assert!(run_check(CheckKind::WedgeUnion, &p, 5, &extras).unwrap().passed());
        assert!(run_check(CheckKind::TriviallyValid, &p, 5, &extras).unwrap().passed());
    }

    #[test]
    fn reports_are_reproducible() {
        let p = params(Flavor::DualHorn, (1, 7), (1, 10), 99);
        let a = check_tractable_homology(&p, 15).unwrap();
        let b = check_tractable_homology(&p, 15).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_json(), r#"{"check":"tractable-homology","trials":15,"failures":[],"seed":99}"#);
    }
}
