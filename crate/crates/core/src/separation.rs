//! Orbit separation over finite fields, witness certificates for lower bounds
//! on the separating degree, the degree search, and separating morphisms built
//! from subgroups (coset translates plus polarized symmetric functions, or
//! composition through a normal subgroup).

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariants::{invariant_slice, invariant_slice_parametric, InvariantSlice};
use crate::linalg::{rank, solve_in_span};
use crate::matrix::Matrix;
use crate::polys::{Monomial, Polynomial};
use crate::reps::{ActionKind, CosetDecomposition, CosetSide, GroupElements, ParametricAction, Representation};
use crate::scalars::{Elem, Field};
use crate::univariate::UniPoly;

/// Where the members of a separating set came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    SliceBasis,
    OrbitSums,
    Morphism,
    Given,
}

/// A list of invariants to be tested for orbit separation.
#[derive(Clone, Debug)]
pub struct SeparatingSet {
    field: Field,
    nvars: usize,
    polys: Vec<Polynomial>,
    provenance: Provenance,
}

impl SeparatingSet {
    pub fn new(field: &Field, nvars: usize, polys: Vec<Polynomial>, provenance: Provenance) -> Result<Self> {
        for p in &polys {
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            if p.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: p.nvars() });
            }
        }
        Ok(SeparatingSet { field: field.clone(), nvars, polys, provenance })
    }

    /// Like [`SeparatingSet::new`], additionally checking that every member is
    /// fixed by every generator of `rep`.
    pub fn invariant(rep: &Representation, polys: Vec<Polynomial>, provenance: Provenance) -> Result<Self> {
        for p in &polys {
            for g in rep.generators() {
                if !p.is_fixed_by(g)? {
                    return Err(Error::NotInvariant(p.to_text()));
                }
            }
        }
        Self::new(rep.field(), rep.dim(), polys, provenance)
    }

    /// The union of slice bases.
    pub fn from_slices(field: &Field, nvars: usize, slices: &[InvariantSlice]) -> Result<Self> {
        let polys = slices.iter().flat_map(|s| s.basis().iter().cloned()).collect();
        Self::new(field, nvars, polys, Provenance::SliceBasis)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn max_degree(&self) -> u32 {
        self.polys.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }
}

/// Two points in distinct orbits on which every invariant of degree at most
/// `degree` takes the same value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub field: Field,
    pub v: Vec<Elem>,
    pub w: Vec<Elem>,
    pub degree: u32,
    /// the orbit of `v`, which does not contain `w`
    pub orbit_of_v: Vec<Vec<Elem>>,
    /// values at `v` (equal to those at `w`) of the invariants that were checked
    pub values: Vec<Elem>,
}

impl Witness {
    /// Re-checks orbit distinctness and agreement of every slice of degree at
    /// most `self.degree`.
    pub fn verify(&self, group: &GroupElements, slices: &[InvariantSlice]) -> Result<()> {
        let orbit = orbit_in(group, &self.field, &self.v)?;
        if orbit.contains(&self.w) {
            return Err(Error::WitnessFailed("the two points lie in one orbit".into()));
        }
        for s in slices.iter().filter(|s| s.degree() <= self.degree) {
            for p in s.basis() {
                let p = p.embed_field(&self.field)?;
                if p.evaluate(&self.v)? != p.evaluate(&self.w)? {
                    return Err(Error::WitnessFailed(format!("{} separates the points", p.to_text())));
                }
            }
        }
        Ok(())
    }

    /// Certified consequence: the separating degree exceeds `degree`.
    pub fn certified_lower(&self) -> u32 {
        self.degree + 1
    }

    pub fn to_json(&self) -> Value {
        let enc = |p: &[Elem]| p.iter().map(|x| self.field.encode_json(x)).collect::<Vec<_>>();
        json!({
            "field": self.field.name(),
            "v": enc(&self.v),
            "w": enc(&self.w),
            "agree_up_to_degree": self.degree,
            "orbit_size": self.orbit_of_v.len(),
            "invariants_checked": self.values.len(),
        })
    }
}

/// The orbit of `v` (a point over `field`) under the group, in element order.
pub fn orbit_in(group: &GroupElements, field: &Field, v: &[Elem]) -> Result<Vec<Vec<Elem>>> {
    if v.len() != group.dim() {
        return Err(Error::DimensionMismatch { expected: group.dim(), got: v.len() });
    }
    let mut out: Vec<Vec<Elem>> = Vec::new();
    for g in group.elements() {
        let w = g.embed(group.field(), field)?.apply(field, v);
        if !out.contains(&w) {
            out.push(w);
        }
    }
    Ok(out)
}

/// Orbit membership test together with the orbit of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCheck {
    pub same: bool,
    pub orbit: Vec<Vec<Elem>>,
}

pub fn same_orbit(group: &GroupElements, field: &Field, v: &[Elem], w: &[Elem]) -> Result<OrbitCheck> {
    if w.len() != group.dim() {
        return Err(Error::DimensionMismatch { expected: group.dim(), got: w.len() });
    }
    let orbit = orbit_in(group, field, v)?;
    Ok(OrbitCheck { same: orbit.iter().any(|x| x == w), orbit })
}

/// Fast evaluation of a fixed list of polynomials at finite-field points given
/// as element indices.
struct EvalPlan {
    field: Field,
    nvars: usize,
    max_exp: Vec<u32>,
    monomials: Vec<Vec<u32>>,
    polys: Vec<Vec<(usize, u32)>>,
}

impl EvalPlan {
    fn new(field: &Field, nvars: usize, polys: &[Polynomial]) -> Self {
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        let mut monomials = Vec::new();
        let mut max_exp = vec![0u32; nvars];
        let plans = polys
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| {
                        let id = *index.entry(m.clone()).or_insert_with(|| {
                            for (i, &e) in m.exponents().iter().enumerate() {
                                max_exp[i] = max_exp[i].max(e);
                            }
                            monomials.push(m.exponents().to_vec());
                            monomials.len() - 1
                        });
                        (id, c.fin())
                    })
                    .collect()
            })
            .collect();
        EvalPlan { field: field.clone(), nvars, max_exp, monomials, polys: plans }
    }

    fn eval(&self, point: &[u32], out: &mut Vec<u32>) {
        let f = &self.field;
        let powers: Vec<Vec<u32>> = (0..self.nvars)
            .map(|i| {
                let mut row = Vec::with_capacity(self.max_exp[i] as usize + 1);
                row.push(1u32);
                for e in 0..self.max_exp[i] as usize {
                    row.push(f.mul_u32(row[e], point[i]));
                }
                row
            })
            .collect();
        let mono_vals: Vec<u32> = self
            .monomials
            .iter()
            .map(|m| {
                let mut acc = 1u32;
                for (i, &e) in m.iter().enumerate() {
                    if e > 0 {
                        acc = f.mul_u32(acc, powers[i][e as usize]);
                        if acc == 0 {
                            break;
                        }
                    }
                }
                acc
            })
            .collect();
        for p in &self.polys {
            let mut acc = 0u32;
            for &(id, c) in p {
                acc = f.add_u32(acc, f.mul_u32(c, mono_vals[id]));
            }
            out.push(acc);
        }
    }
}

/// All points of `F_q^n` partitioned into orbits; each orbit is represented by
/// its first point in lexicographic order.
pub struct OrbitTable {
    field: Field,
    n: usize,
    q: u64,
    representatives: Vec<u64>,
    sizes: Vec<usize>,
}

impl OrbitTable {
    pub fn new(group: &GroupElements, field: &Field, cap_points: u64) -> Result<Self> {
        let q = field.order().ok_or(Error::CharacteristicZero)?;
        let n = group.dim();
        let points = q
            .checked_pow(n as u32)
            .filter(|&c| c <= cap_points)
            .ok_or_else(|| Error::CapExceeded(format!("{}^{} points exceed the cap of {}", q, n, cap_points)))?;
        let gens: Vec<Vec<u32>> = group
            .generators()
            .iter()
            .map(|&g| {
                let m = group.element(g).embed(group.field(), field)?;
                Ok(m.entries().iter().map(|e| e.fin()).collect())
            })
            .collect::<Result<_>>()?;
        let mut orbit_of = vec![u32::MAX; points as usize];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        let mut digits = vec![0u32; n];
        let mut image = vec![0u32; n];
        for start in 0..points {
            if orbit_of[start as usize] != u32::MAX {
                continue;
            }
            let id = representatives.len() as u32;
            representatives.push(start);
            orbit_of[start as usize] = id;
            let mut size = 1;
            stack.push(start);
            while let Some(x) = stack.pop() {
                decode_into(x, q, &mut digits);
                for g in &gens {
                    for (i, out) in image.iter_mut().enumerate() {
                        let mut acc = 0u32;
                        for j in 0..n {
                            let a = g[i * n + j];
                            if a != 0 && digits[j] != 0 {
                                acc = field.add_u32(acc, field.mul_u32(a, digits[j]));
                            }
                        }
                        *out = acc;
                    }
                    let y = encode(&image, q);
                    if orbit_of[y as usize] == u32::MAX {
                        orbit_of[y as usize] = id;
                        size += 1;
                        stack.push(y);
                    }
                }
            }
            sizes.push(size);
        }
        Ok(OrbitTable { field: field.clone(), n, q, representatives, sizes })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn num_points(&self) -> u64 {
        self.q.pow(self.n as u32)
    }

    pub fn num_orbits(&self) -> usize {
        self.representatives.len()
    }

    pub fn orbit_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Coordinates of the representative of orbit `i`.
    pub fn representative(&self, i: usize) -> Vec<Elem> {
        let mut d = vec![0u32; self.n];
        decode_into(self.representatives[i], self.q, &mut d);
        d.into_iter().map(Elem::Fin).collect()
    }

    fn representative_digits(&self, i: usize) -> Vec<u32> {
        let mut d = vec![0u32; self.n];
        decode_into(self.representatives[i], self.q, &mut d);
        d
    }
}

fn decode_into(mut x: u64, q: u64, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (x % q) as u32;
        x /= q;
    }
}

fn encode(digits: &[u32], q: u64) -> u64 {
    digits.iter().fold(0u64, |acc, &d| acc * q + d as u64)
}

/// Incremental value table: per orbit, the values of every polynomial added
/// so far.
struct ValueTable {
    values: Vec<Vec<u32>>,
}

impl ValueTable {
    fn new(orbits: &OrbitTable) -> Self {
        ValueTable { values: vec![Vec::new(); orbits.num_orbits()] }
    }

    fn extend(&mut self, orbits: &OrbitTable, polys: &[Polynomial]) -> Result<()> {
        let f = orbits.field();
        let embedded = polys.iter().map(|p| p.embed_field(f)).collect::<Result<Vec<_>>>()?;
        let plan = EvalPlan::new(f, orbits.n, &embedded);
        self.values.par_iter_mut().enumerate().for_each(|(i, row)| {
            plan.eval(&orbits.representative_digits(i), row);
        });
        Ok(())
    }

    /// First pair of orbits (in representative order) with equal values.
    fn first_collision(&self) -> Option<(usize, usize)> {
        let mut first_with: HashMap<&[u32], usize> = HashMap::with_capacity(self.values.len());
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.values.iter().enumerate() {
            match first_with.get(row.as_slice()) {
                Some(&a) => {
                    if best.is_none_or(|(b, _)| a < b) {
                        best = Some((a, i));
                    }
                }
                None => {
                    first_with.insert(row.as_slice(), i);
                }
            }
        }
        best
    }

    fn distinct_classes(&self) -> usize {
        self.values.iter().map(|r| r.as_slice()).collect::<std::collections::HashSet<_>>().len()
    }
}

/// Outcome of testing a separating set on all points over one finite field.
#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub field: Field,
    pub max_degree: u32,
    pub points: u64,
    pub orbits: usize,
    pub value_classes: usize,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
}

impl SeparationReport {
    /// A pass is evidence only; it does not cover points over the closure.
    pub fn separated(&self) -> bool {
        self.witness.is_none()
    }
}

fn make_witness(orbits: &OrbitTable, group: &GroupElements, table: &ValueTable, pair: (usize, usize), degree: u32) -> Result<Witness> {
    let f = orbits.field().clone();
    let v = orbits.representative(pair.0);
    let w = orbits.representative(pair.1);
    let orbit_of_v = orbit_in(group, &f, &v)?;
    let values = table.values[pair.0].iter().map(|&x| Elem::Fin(x)).collect();
    Ok(Witness { field: f, v, w, degree, orbit_of_v, values })
}

/// Partitions `F^n` into orbits and looks for two orbits on which every member
/// of `set` agrees.
pub fn check_separating_on_points(
    set: &SeparatingSet,
    group: &GroupElements,
    field: &Field,
    cap_points: u64,
) -> Result<SeparationReport> {
    let start = Instant::now();
    if set.nvars() != group.dim() {
        return Err(Error::DimensionMismatch { expected: group.dim(), got: set.nvars() });
    }
    let orbits = OrbitTable::new(group, field, cap_points)?;
    let mut table = ValueTable::new(&orbits);
    table.extend(&orbits, set.polys())?;
    let witness = match table.first_collision() {
        Some(pair) => Some(make_witness(&orbits, group, &table, pair, set.max_degree())?),
        None => None,
    };
    Ok(SeparationReport {
        field: field.clone(),
        max_degree: set.max_degree(),
        points: orbits.num_points(),
        orbits: orbits.num_orbits(),
        value_classes: table.distinct_classes(),
        witness,
        elapsed: start.elapsed(),
    })
}

/// Fields used for evidence: `F_p, F_{p^2}, F_{p^3}` over a prime base field
/// while `q^n` stays within the point cap; an extension base field is used alone.
pub fn escalation_fields(base: &Field, n: usize, cap_points: u64) -> Result<Vec<Field>> {
    let p = base.characteristic();
    if p == 0 {
        return Err(Error::CharacteristicZero);
    }
    let candidates: Vec<Field> = if base.degree() == 1 {
        (1..=3).filter_map(|k| Field::extension(p, k).ok()).collect()
    } else {
        vec![base.clone()]
    };
    let fits = |f: &Field| f.order().and_then(|q| q.checked_pow(n as u32)).is_some_and(|c| c <= cap_points);
    let out: Vec<Field> = candidates.into_iter().take_while(fits).collect();
    if out.is_empty() {
        return Err(Error::CapExceeded(format!("{}^{} points exceed the cap of {}", base.name(), n, cap_points)));
    }
    Ok(out)
}

/// Three-valued summary of a degree search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// the certified lower bound meets the unconditional ceiling `|G|`
    Exact,
    /// the certified lower bound meets the first degree passing on every tested field
    EvidenceMatchesLower,
    /// a gap remains between certified and evidenced bounds
    Open,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub dmax: u32,
    /// evidence fields; `None` means [`escalation_fields`]
    pub fields: Option<Vec<Field>>,
    pub cap_points: u64,
    pub group_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { dmax: 12, fields: None, cap_points: 1_000_000, group_cap: 100_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeOutcome {
    pub degree: u32,
    pub invariants: usize,
    pub witness_field: Option<String>,
    pub passed_fields: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct BetaReport {
    pub group_order: usize,
    pub certified_lower: u32,
    pub evidence_upper: Option<u32>,
    pub theorem_upper: u64,
    pub witness: Option<Witness>,
    pub fields: Vec<Field>,
    pub degrees: Vec<DegreeOutcome>,
    pub elapsed: Duration,
}

impl BetaReport {
    pub fn verdict(&self) -> Verdict {
        if self.certified_lower as u64 == self.theorem_upper {
            Verdict::Exact
        } else if self.evidence_upper == Some(self.certified_lower) {
            Verdict::EvidenceMatchesLower
        } else {
            Verdict::Open
        }
    }
}

/// Ascending-degree search with cumulative invariant slices: every witness at
/// degree `d` certifies a separating degree above `d`; the first degree that
/// separates over every evidence field is reported as the evidenced upper value.
pub fn beta_sep_search(rep: &Representation, opts: &SearchOptions) -> Result<BetaReport> {
    let start = Instant::now();
    let group = crate::reps::enumerate_group(rep, opts.group_cap)?;
    let fields = match &opts.fields {
        Some(f) => f.clone(),
        None => escalation_fields(rep.field(), rep.dim(), opts.cap_points)?,
    };
    let tables = fields
        .iter()
        .map(|f| {
            let orbits = OrbitTable::new(&group, f, opts.cap_points)?;
            let values = ValueTable::new(&orbits);
            Ok((orbits, values))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tables = tables;
    let order = group.order() as u64;
    let mut certified_lower = 1u32;
    let mut witness = None;
    let mut evidence_upper = None;
    let mut degrees = Vec::new();
    let mut slices = Vec::new();
    let mut total = 0usize;
    for d in 1..=opts.dmax {
        let slice = invariant_slice(rep, d)?;
        total += slice.dimension();
        let mut outcome = DegreeOutcome { degree: d, invariants: total, witness_field: None, passed_fields: Vec::new() };
        for (orbits, values) in tables.iter_mut() {
            values.extend(orbits, slice.basis())?;
            if outcome.witness_field.is_some() {
                continue;
            }
            match values.first_collision() {
                Some(pair) => {
                    if d as u64 >= order {
                        return Err(Error::Internal(format!(
                            "distinct orbits agree on all invariants up to degree {} >= |G| = {}",
                            d, order
                        )));
                    }
                    witness = Some(make_witness(orbits, &group, values, pair, d)?);
                    certified_lower = d + 1;
                    outcome.witness_field = Some(orbits.field().name());
                }
                None => outcome.passed_fields.push(orbits.field().name()),
            }
        }
        slices.push(slice);
        let passed = outcome.witness_field.is_none();
        degrees.push(outcome);
        if passed {
            evidence_upper = Some(d);
            break;
        }
    }
    if evidence_upper.is_none() {
        return Err(Error::DegreeLimit(opts.dmax));
    }
    if let Some(w) = &witness {
        w.verify(&group, &slices)?;
    }
    Ok(BetaReport {
        group_order: group.order(),
        certified_lower,
        evidence_upper,
        theorem_upper: order,
        witness,
        fields,
        degrees,
        elapsed: start.elapsed(),
    })
}

/// Certificate that a nonzero fixed point `v` and `0` agree on every invariant
/// of degree below `bound`, with a degree-`bound` invariant telling them apart.
#[derive(Clone, Debug)]
pub struct FixedPointWitness {
    pub witness: Witness,
    pub bound: u32,
    pub separating: Polynomial,
    pub slices: Vec<InvariantSlice>,
}

pub fn fixed_point_witness_check(
    rep: &Representation,
    group: &GroupElements,
    v: &[Elem],
    bound: u32,
) -> Result<FixedPointWitness> {
    let f = rep.field();
    if v.len() != rep.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), got: v.len() });
    }
    if bound == 0 {
        return Err(Error::Config("bound must be positive".into()));
    }
    let zero = vec![f.zero(); rep.dim()];
    let mut slices = Vec::new();
    let mut values = Vec::new();
    for d in 1..bound {
        let slice = invariant_slice(rep, d)?;
        for p in slice.basis() {
            let val = p.evaluate(v)?;
            if !f.is_zero(&val) {
                return Err(Error::WitnessFailed(format!("degree {} invariant {} is nonzero at v", d, p.to_text())));
            }
            values.push(val);
        }
        slices.push(slice);
    }
    let top = invariant_slice(rep, bound)?;
    let separating = top
        .basis()
        .iter()
        .find(|p| p.evaluate(v).is_ok_and(|x| !f.is_zero(&x)))
        .cloned()
        .ok_or_else(|| Error::WitnessFailed(format!("every degree {} invariant vanishes at v", bound)))?;
    let witness = Witness {
        field: f.clone(),
        v: v.to_vec(),
        w: zero,
        degree: bound - 1,
        orbit_of_v: orbit_in(group, f, v)?,
        values,
    };
    witness.verify(group, &slices)?;
    slices.push(top);
    Ok(FixedPointWitness { witness, bound, separating, slices })
}

/// Whether `w` lies in the orbit of `v` under the additive group or torus over
/// the algebraic closure: the coordinate equations `A(s) v = w` must have a
/// common root (a common factor of positive degree, or no condition at all).
pub fn parametric_same_orbit(act: &ParametricAction, v: &[Elem], w: &[Elem]) -> Result<bool> {
    let f = act.field();
    let n = act.dim();
    if v.len() != n || w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len().min(w.len()) });
    }
    let mut eqs: Vec<UniPoly> = Vec::new();
    match act.kind() {
        ActionKind::Additive { matrix, .. } => {
            for i in 0..n {
                let mut p = UniPoly::constant(f, f.neg(&w[i]));
                for (j, vj) in v.iter().enumerate() {
                    p = p.add(f, &matrix.get(i, j).scale(f, vj));
                }
                eqs.push(p);
            }
        }
        ActionKind::Torus { weights } => {
            for i in 0..n {
                if f.is_zero(&v[i]) != f.is_zero(&w[i]) {
                    return Ok(false);
                }
                if f.is_zero(&v[i]) {
                    continue;
                }
                // t^k v_i = w_i  or  v_i = t^k w_i  for negative weights, with t != 0
                let k = weights[i].unsigned_abs() as usize;
                let (lead, rest) = if weights[i] >= 0 { (&v[i], &w[i]) } else { (&w[i], &v[i]) };
                let p = UniPoly::monomial(f, lead.clone(), k).add(f, &UniPoly::constant(f, f.neg(rest)));
                if p.is_zero() {
                    continue;
                }
                eqs.push(p.strip_s_factors(f));
            }
        }
    }
    let mut g = UniPoly::zero();
    for e in &eqs {
        g = g.gcd(f, e);
    }
    Ok(g.is_zero() || g.degree().is_some_and(|d| d > 0))
}

/// Certificate that two points in distinct orbits of a parametric action agree
/// on all invariants below `bound` and are split by one of degree `bound`.
#[derive(Clone, Debug)]
pub struct ParametricWitness {
    pub v: Vec<Elem>,
    pub w: Vec<Elem>,
    pub bound: u32,
    pub separating: Polynomial,
    pub slice_dimensions: Vec<usize>,
}

pub fn parametric_witness_check(act: &ParametricAction, v: &[Elem], w: &[Elem], bound: u32) -> Result<ParametricWitness> {
    if parametric_same_orbit(act, v, w)? {
        return Err(Error::WitnessFailed("the two points lie in one orbit".into()));
    }
    let mut slice_dimensions = Vec::new();
    for d in 1..bound {
        let slice = invariant_slice_parametric(act, d)?;
        slice_dimensions.push(slice.dimension());
        for p in slice.basis() {
            if p.evaluate(v)? != p.evaluate(w)? {
                return Err(Error::WitnessFailed(format!("degree {} invariant {} separates the points", d, p.to_text())));
            }
        }
    }
    let top = invariant_slice_parametric(act, bound)?;
    slice_dimensions.push(top.dimension());
    let mut separating = None;
    for p in top.basis() {
        if p.evaluate(v)? != p.evaluate(w)? {
            separating = Some(p.clone());
            break;
        }
    }
    let separating = separating
        .ok_or_else(|| Error::WitnessFailed(format!("no degree {} invariant separates the points", bound)))?;
    Ok(ParametricWitness { v: v.to_vec(), w: w.to_vec(), bound, separating, slice_dimensions })
}

/// `e_1, ..., e_d` in `d` variables.
pub fn elementary_symmetric(field: &Field, d: usize) -> Vec<Polynomial> {
    let mut e = vec![Polynomial::one(field, d)];
    e.extend((0..d).map(|_| Polynomial::zero(field, d)));
    for i in 0..d {
        let x = Polynomial::var(field, d, i);
        for k in (1..=i + 1).rev() {
            e[k] = &e[k] + &(&e[k - 1] * &x);
        }
    }
    e.remove(0);
    e
}

/// Polarizations of `e_1..e_d` across the `dim_w` coordinates of `W`, as
/// functions on `W^d` with slot `i`, coordinate `c` at index `i * dim_w + c`.
pub fn polarized_elementary_symmetric(field: &Field, dim_w: usize, d: usize) -> Result<SeparatingSet> {
    if d == 0 || dim_w == 0 {
        return Err(Error::Config("need at least one slot and one coordinate".into()));
    }
    // polarize() places copy c, slot i at c * d + i
    let map: Vec<usize> = (0..dim_w * d).map(|k| (k % d) * dim_w + k / d).collect();
    let mut polys = Vec::new();
    for e in elementary_symmetric(field, d) {
        for part in e.polarize(dim_w)? {
            polys.push(part.poly.remap_variables(dim_w * d, &map));
        }
    }
    SeparatingSet::new(field, dim_w * d, polys, Provenance::Morphism)
}

/// One polynomial map in a chain; `components` are functions of the previous
/// stage's outputs.
#[derive(Clone, Debug)]
pub struct Stage {
    pub name: String,
    pub components: Vec<Polynomial>,
    pub degree_bound: u32,
}

/// A composable chain of polynomial maps and its flattened composite.
#[derive(Clone, Debug)]
pub struct MorphismPipeline {
    stages: Vec<Stage>,
    composite: Vec<Polynomial>,
}

impl MorphismPipeline {
    pub fn new(stages: Vec<Stage>) -> Result<Self> {
        let first = stages.first().ok_or_else(|| Error::Config("empty pipeline".into()))?;
        let mut composite = first.components.clone();
        for s in &stages[1..] {
            composite = s.components.iter().map(|c| c.compose(&composite)).collect::<Result<_>>()?;
        }
        for s in &stages {
            if s.components.iter().any(|c| c.degree().unwrap_or(0) > s.degree_bound) {
                return Err(Error::Internal(format!("stage {} exceeds its degree bound", s.name)));
            }
        }
        Ok(MorphismPipeline { stages, composite })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn composite(&self) -> &[Polynomial] {
        &self.composite
    }

    /// Maximum component degree of the flattened composite.
    pub fn degree(&self) -> u32 {
        self.composite.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Product of stage degree bounds.
    pub fn degree_bound(&self) -> u32 {
        self.stages.iter().map(|s| s.degree_bound).product()
    }

    /// Nonzero composite components as a separating set.
    pub fn separating_set(&self) -> Result<SeparatingSet> {
        let polys: Vec<Polynomial> = self.composite.iter().filter(|p| !p.is_zero()).cloned().collect();
        let first = &self.stages[0].components[0];
        SeparatingSet::new(first.field(), first.nvars(), polys, Provenance::Morphism)
    }
}

/// Builds the `G`-separating map `psi o phi~` from an `H`-invariant map `phi`:
/// `phi~(v) = (phi(g_1 v), ..., phi(g_d v))` over right coset representatives,
/// followed by polarized elementary symmetric functions in the `d` slots.
pub fn build_coset_morphism(phi: &[Polynomial], group: &GroupElements, cosets: &CosetDecomposition) -> Result<MorphismPipeline> {
    if cosets.side() != CosetSide::Right {
        return Err(Error::InconsistentGroup("the coset construction needs right cosets".into()));
    }
    let first = phi.first().ok_or_else(|| Error::Config("phi has no components".into()))?;
    let field = first.field().clone();
    let n = group.dim();
    for p in phi {
        if p.nvars() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.nvars() });
        }
        for &h in cosets.subgroup_generators() {
            if !p.is_fixed_by(group.element(h))? {
                return Err(Error::NotInvariant(p.to_text()));
            }
        }
    }
    let m = phi.len();
    let d = cosets.index();
    let phi_degree = phi.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let mut translates = Vec::with_capacity(d * m);
    for &g in cosets.representatives() {
        for p in phi {
            translates.push(p.substitute_linear(group.element(g))?);
        }
    }
    let psi = polarized_elementary_symmetric(&field, m, d)?;
    let pipeline = MorphismPipeline::new(vec![
        Stage { name: "coset translates".into(), components: translates, degree_bound: phi_degree },
        Stage { name: "polarized symmetric".into(), components: psi.polys().to_vec(), degree_bound: d as u32 },
    ])?;
    for c in pipeline.composite() {
        for &g in group.generators() {
            if !c.is_fixed_by(group.element(g))? {
                return Err(Error::NotInvariant(c.to_text()));
            }
        }
    }
    Ok(pipeline)
}

/// Linear action of `G` on the span of `phi` (a basis of a `G`-stable space of
/// functions): returns one matrix per generator with `phi(g v) = M_g phi(v)`.
pub fn induced_action_on_span(phi: &[Polynomial], group: &GroupElements) -> Result<Representation> {
    let first = phi.first().ok_or_else(|| Error::Config("phi has no components".into()))?;
    let field = first.field().clone();
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    for p in phi {
        for (m, _) in p.terms() {
            let l = index.len();
            index.entry(m.clone()).or_insert(l);
        }
    }
    let vec_of = |p: &Polynomial, index: &HashMap<Monomial, usize>| -> Option<Vec<Elem>> {
        if p.terms().any(|(m, _)| !index.contains_key(m)) {
            return None;
        }
        Some(p.coefficient_vector(index, index.len()))
    };
    let columns: Vec<Vec<Elem>> = phi.iter().map(|p| vec_of(p, &index).expect("own monomials")).collect();
    let rows: Vec<Vec<Elem>> = (0..index.len()).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    if rank(&field, &rows, phi.len()) != phi.len() {
        return Err(Error::InvalidModule("phi components are linearly dependent".into()));
    }
    let m = phi.len();
    let mut gens = Vec::new();
    for &g in group.generators() {
        let mut mg = Matrix::zero(&field, m, m);
        for (c, p) in phi.iter().enumerate() {
            let moved = p.substitute_linear(group.element(g))?;
            let target = vec_of(&moved, &index).ok_or_else(|| Error::NotInvariant("span of phi is not G-stable".into()))?;
            let coeffs = solve_in_span(&field, &columns, &target)
                .ok_or_else(|| Error::NotInvariant("span of phi is not G-stable".into()))?;
            for (e, x) in coeffs.into_iter().enumerate() {
                mg.set(c, e, x);
            }
        }
        gens.push(mg);
    }
    Representation::new(&field, m, gens)
}

/// Composition through a normal subgroup `H`: `phi` spans a `G`-stable space of
/// `H`-invariants, and `psi` is every invariant of degree at most `psi_degree`
/// of the induced linear action of `G/H` on that span.
pub fn normal_composition(
    phi: &[Polynomial],
    group: &GroupElements,
    normal_generators: &[usize],
    psi_degree: u32,
) -> Result<MorphismPipeline> {
    let members = group.subgroup_generated(normal_generators);
    if !group.is_normal(&members) {
        return Err(Error::InconsistentGroup("subgroup is not normal".into()));
    }
    for p in phi {
        for &h in normal_generators {
            if !p.is_fixed_by(group.element(h))? {
                return Err(Error::NotInvariant(p.to_text()));
            }
        }
    }
    let action = induced_action_on_span(phi, group)?;
    let mut psi = Vec::new();
    for d in 1..=psi_degree {
        psi.extend(invariant_slice(&action, d)?.basis().iter().cloned());
    }
    let phi_degree = phi.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let pipeline = MorphismPipeline::new(vec![
        Stage { name: "normal subgroup invariants".into(), components: phi.to_vec(), degree_bound: phi_degree },
        Stage { name: "quotient invariants".into(), components: psi, degree_bound: psi_degree },
    ])?;
    for c in pipeline.composite() {
        for &g in group.generators() {
            if !c.is_fixed_by(group.element(g))? {
                return Err(Error::NotInvariant(c.to_text()));
            }
        }
    }
    Ok(pipeline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::invariant_slices_up_to;
    use crate::reps::{enumerate_group, regular_representation};

    fn fin(v: &[u32]) -> Vec<Elem> {
        v.iter().map(|&x| Elem::Fin(x)).collect()
    }

    fn c2() -> (Representation, GroupElements) {
        let f2 = Field::prime(2).unwrap();
        let rep = Representation::permutation(&f2, 2, &[vec![1, 0]]).unwrap();
        let g = enumerate_group(&rep, 10).unwrap();
        (rep, g)
    }

    #[test]
    fn orbit_membership() {
        let (_, g) = c2();
        let f2 = g.field().clone();
        assert!(same_orbit(&g, &f2, &fin(&[0, 1]), &fin(&[1, 0])).unwrap().same);
        assert!(!same_orbit(&g, &f2, &fin(&[1, 1]), &fin(&[0, 0])).unwrap().same);
        let f5 = Field::prime(5).unwrap();
        let s3 = enumerate_group(&Representation::symmetric_group(&f5, 3).unwrap(), 10).unwrap();
        assert!(same_orbit(&s3, &f5, &fin(&[1, 2, 3]), &fin(&[3, 1, 2])).unwrap().same);
        assert!(same_orbit(&s3, &f5, &fin(&[1, 2]), &fin(&[1, 2, 3])).is_err());
    }

    #[test]
    fn degree_one_fails_on_c2() {
        let (rep, g) = c2();
        let f2 = rep.field().clone();
        let set = SeparatingSet::from_slices(&f2, 2, &invariant_slices_up_to(&rep, 1).unwrap()).unwrap();
        let report = check_separating_on_points(&set, &g, &f2, 1000).unwrap();
        let w = report.witness.unwrap();
        let pair = [w.v.clone(), w.w.clone()];
        assert!(pair.contains(&fin(&[0, 0])) && pair.contains(&fin(&[1, 1])));
        let set2 = SeparatingSet::from_slices(&f2, 2, &invariant_slices_up_to(&rep, 2).unwrap()).unwrap();
        assert!(check_separating_on_points(&set2, &g, &f2, 1000).unwrap().separated());
    }

    #[test]
    fn coordinates_separate_for_trivial_group() {
        let f3 = Field::prime(3).unwrap();
        let rep = Representation::new(&f3, 2, vec![]).unwrap();
        let g = enumerate_group(&rep, 1).unwrap();
        let set = SeparatingSet::new(&f3, 2, vec![Polynomial::var(&f3, 2, 0), Polynomial::var(&f3, 2, 1)], Provenance::Given)
            .unwrap();
        let f9 = Field::extension(3, 2).unwrap();
        let r = check_separating_on_points(&set, &g, &f9, 1000).unwrap();
        assert!(r.separated());
        assert_eq!(r.orbits, 81);
        assert!(matches!(check_separating_on_points(&set, &g, &f9, 10), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn c2_search_is_exact() {
        let (rep, _) = c2();
        let r = beta_sep_search(&rep, &SearchOptions::default()).unwrap();
        assert_eq!((r.certified_lower, r.evidence_upper, r.theorem_upper), (2, Some(2), 2));
        assert_eq!(r.verdict(), Verdict::Exact);
        let f2 = rep.field().clone();
        let trivial = Representation::new(&f2, 2, vec![]).unwrap();
        let t = beta_sep_search(&trivial, &SearchOptions::default()).unwrap();
        assert_eq!(t.evidence_upper, Some(1));
        assert!(t.witness.is_none());
    }

    #[test]
    fn fixed_point_witness_for_c3() {
        let f3 = Field::prime(3).unwrap();
        let rep = Representation::permutation(&f3, 3, &[vec![1, 2, 0]]).unwrap();
        let g = enumerate_group(&rep, 10).unwrap();
        let v = fin(&[1, 1, 1]);
        let fw = fixed_point_witness_check(&rep, &g, &v, 3).unwrap();
        assert_eq!(fw.witness.certified_lower(), 3);
        assert!(fixed_point_witness_check(&rep, &g, &v, 4).is_err());
    }

    #[test]
    fn witness_verification_rejects_tampering() {
        let (rep, g) = c2();
        let slices = invariant_slices_up_to(&rep, 2).unwrap();
        let fw = fixed_point_witness_check(&rep, &g, &fin(&[1, 1]), 2).unwrap();
        fw.witness.verify(&g, &slices[..1]).unwrap();
        let mut bad = fw.witness.clone();
        bad.degree = 2;
        assert!(bad.verify(&g, &slices).is_err());
        let mut same = fw.witness.clone();
        same.w = fin(&[1, 1]);
        assert!(same.verify(&g, &slices).is_err());
    }

    #[test]
    fn parametric_orbits() {
        let f2 = Field::prime(2).unwrap();
        let act = crate::reps::additive_module(&f2, &[crate::reps::Summand::Standard]).unwrap();
        // (0,1) moves to (s,1): every (a,1) is in one orbit, (1,0) is fixed
        assert!(parametric_same_orbit(&act, &fin(&[0, 1]), &fin(&[1, 1])).unwrap());
        assert!(!parametric_same_orbit(&act, &fin(&[1, 0]), &fin(&[0, 0])).unwrap());
        let q = Field::rationals();
        let t = crate::reps::torus_module(&q, &[-1, 2]).unwrap();
        let r = |x: i64| q.from_i64(x);
        assert!(!parametric_same_orbit(&t, &[r(1), r(1)], &[r(1), r(0)]).unwrap());
        assert!(parametric_same_orbit(&t, &[r(2), r(1)], &[r(1), r(4)]).unwrap());
        assert!(!parametric_same_orbit(&t, &[r(1), r(1)], &[r(2), r(2)]).unwrap());
    }

    #[test]
    fn polarized_symmetric_examples() {
        let f3 = Field::prime(3).unwrap();
        let set = polarized_elementary_symmetric(&f3, 1, 2).unwrap();
        let texts: Vec<String> = set.polys().iter().map(|p| p.to_text()).collect();
        assert_eq!(texts, vec!["1*x1 + 1*x2", "1*x1*x2"]);
        let set = polarized_elementary_symmetric(&f3, 2, 2).unwrap();
        let texts: Vec<String> = set.polys().iter().map(|p| p.to_text()).collect();
        // slots (u1, v1), (u2, v2) are x1, x2 and x3, x4
        for t in ["1*x1 + 1*x3", "1*x2 + 1*x4", "1*x1*x3", "1*x2*x4", "1*x1*x4 + 1*x2*x3"] {
            assert!(texts.contains(&t.to_string()), "{} missing from {:?}", t, texts);
        }
        let blocks = Representation::symmetric_on_blocks(&f3, 2, 2).unwrap();
        let g = enumerate_group(&blocks, 10).unwrap();
        assert!(check_separating_on_points(&set, &g, &f3, 1000).unwrap().separated());
    }

    #[test]
    fn coset_morphism_for_trivial_subgroup() {
        let (rep, g) = c2();
        let f2 = rep.field().clone();
        let cosets = CosetDecomposition::right(&g, &[]).unwrap();
        let phi = vec![Polynomial::var(&f2, 2, 0), Polynomial::var(&f2, 2, 1)];
        let pipe = build_coset_morphism(&phi, &g, &cosets).unwrap();
        assert!(pipe.degree() <= 2);
        let f4 = Field::extension(2, 2).unwrap();
        assert!(check_separating_on_points(&pipe.separating_set().unwrap(), &g, &f4, 1000).unwrap().separated());
        let whole = CosetDecomposition::right(&g, g.generators()).unwrap();
        let inv = vec![&Polynomial::var(&f2, 2, 0) + &Polynomial::var(&f2, 2, 1)];
        let same = build_coset_morphism(&inv, &g, &whole).unwrap();
        assert_eq!(same.composite(), &inv[..]);
        assert!(matches!(build_coset_morphism(&phi, &g, &whole), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn normal_composition_trivial_subgroup() {
        let (rep, g) = c2();
        let f2 = rep.field().clone();
        let phi = vec![Polynomial::var(&f2, 2, 0), Polynomial::var(&f2, 2, 1)];
        let pipe = normal_composition(&phi, &g, &[], 2).unwrap();
        assert!(pipe.degree() <= 2);
        assert!(check_separating_on_points(&pipe.separating_set().unwrap(), &g, &f2, 100).unwrap().separated());
        let reg = regular_representation(&g);
        assert_eq!(reg.generators(), rep.generators());
    }
}
