//! Acceptance runner: one line per criterion, each checked against an
//! oracle that does not share the library's nullspace or orbit-table code.

mod common;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use common::*;
use sepinv::bounds::{a4_descriptor, a4_squared_descriptor, apply_rules, dihedral_descriptor, exact_value_lookup, Family, GroupDescriptor};
use sepinv::invariants::{hilbert_ideal_slice_test, invariant_slice, invariant_slice_parametric};
use sepinv::matrix::Matrix;
use sepinv::polys::{Monomial, Polynomial};
use sepinv::reps::{
    additive_module, cyclic_module, dihedral_module, enumerate_group, regular_representation, torus_module,
    CosetDecomposition, ParametricAction, Representation, Summand,
};
use sepinv::separation::{
    beta_sep_search, build_coset_morphism, fixed_point_witness_check, normal_composition, parametric_same_orbit,
    parametric_witness_check, polarized_elementary_symmetric, SearchOptions,
};
use sepinv::{Elem, Field};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---- oracle: invariants of monomial matrix groups ----

/// Closure of matrices under multiplication.
fn close(f: &Field, gens: &[Matrix]) -> Vec<Matrix> {
    let n = gens[0].rows();
    let mut all = vec![Matrix::identity(f, n)];
    let mut seen: HashSet<Vec<Elem>> = HashSet::from([all[0].entries().to_vec()]);
    let mut i = 0;
    while i < all.len() {
        for g in gens {
            let h = all[i].mul(f, g);
            if seen.insert(h.entries().to_vec()) {
                all.push(h);
            }
        }
        i += 1;
    }
    all
}

/// `m o A` for a monomial matrix: `x_{pi(j)} o A = c_j x_j` where `A e_j = c_j e_{pi(j)}`.
fn act_on_monomial(f: &Field, a: &Matrix, m: &[u32]) -> (Vec<u32>, Elem) {
    let n = m.len();
    let mut exps = vec![0u32; n];
    let mut coeff = f.one();
    for j in 0..n {
        let i = (0..n).find(|&i| !f.is_zero(a.get(i, j))).expect("monomial matrix");
        exps[j] = m[i];
        coeff = f.mul(&coeff, &f.pow(a.get(i, j), m[i] as u64));
    }
    (exps, coeff)
}

type Sparse = BTreeMap<Vec<u32>, Elem>;

/// Relative orbit sums: one invariant per monomial orbit on which the
/// stabilizer acts trivially. These span the invariants of a monomial group.
fn monomial_invariants(f: &Field, group: &[Matrix], n: usize, d: u32) -> Vec<Sparse> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in monomials(n, d) {
        if seen.contains(&m) {
            continue;
        }
        let images: Vec<(Vec<u32>, Elem)> = group.iter().map(|g| act_on_monomial(f, g, &m)).collect();
        seen.extend(images.iter().map(|(e, _)| e.clone()));
        if images.iter().any(|(e, c)| *e == m && !f.is_one(c)) {
            continue;
        }
        let mut inv = Sparse::new();
        for (e, c) in images {
            inv.entry(e).or_insert(c);
        }
        out.push(inv);
    }
    out
}

fn eval_sparse(f: &Field, p: &Sparse, v: &[Elem]) -> Elem {
    let mut acc = f.zero();
    for (e, c) in p {
        let mut t = c.clone();
        for (x, &k) in v.iter().zip(e) {
            t = f.mul(&t, &f.pow(x, k as u64));
        }
        acc = f.add(&acc, &t);
    }
    acc
}

// ---- oracle: linear algebra by plain elimination ----

fn row_reduce(f: &Field, mut rows: Vec<Vec<Elem>>, ncols: usize) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| !f.is_zero(&rows[k][c])) else { continue };
        rows.swap(r, k);
        let inv = f.inv(&rows[r][c]).unwrap();
        rows[r] = rows[r].iter().map(|x| f.mul(x, &inv)).collect();
        for k in 0..rows.len() {
            if k != r && !f.is_zero(&rows[k][c]) {
                let factor = rows[k][c].clone();
                rows[k] = (0..ncols).map(|j| f.sub(&rows[k][j], &f.mul(&factor, &rows[r][j]))).collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn rank(f: &Field, rows: Vec<Vec<Elem>>, ncols: usize) -> usize {
    row_reduce(f, rows, ncols).1.len()
}

fn nullspace(f: &Field, rows: Vec<Vec<Elem>>, ncols: usize) -> Vec<Vec<Elem>> {
    let (red, pivots) = row_reduce(f, rows, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![f.zero(); ncols];
            v[free] = f.one();
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = f.neg(&row[free]);
            }
            v
        })
        .collect()
}

/// Degree-`d` invariants of a parametric action from the conditions
/// `f o A(s) = f` imposed at the sample values `samples`.
fn sampled_invariants(act: &ParametricAction, d: u32, samples: &[i64]) -> Vec<Polynomial> {
    let f = act.field();
    let n = act.dim();
    let basis = monomials(n, d);
    let index: HashMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for &s in samples {
        let a = act.specialize(&f.from_i64(s)).unwrap();
        let mut block = vec![vec![f.zero(); basis.len()]; basis.len()];
        for (k, m) in basis.iter().enumerate() {
            let mono = Polynomial::monomial(f, Monomial::new(m.clone()), f.one());
            let diff = &mono.substitute_linear(&a).unwrap() - &mono;
            for (mu, c) in diff.terms() {
                block[index[&mu.exponents().to_vec()]][k] = c.clone();
            }
        }
        rows.extend(block);
    }
    nullspace(f, rows, basis.len())
        .into_iter()
        .map(|v| Polynomial::from_terms(f, n, basis.iter().zip(v).map(|(m, c)| (Monomial::new(m.clone()), c))))
        .collect()
}

// ---- criteria ----

fn criterion_s3() -> Outcome {
    let f2 = ok(Field::prime(2))?;
    let f4 = ok(Field::extension(2, 2))?;
    let s3 = ok(enumerate_group(&ok(Representation::symmetric_group(&f2, 3))?, 10))?;
    let reg = regular_representation(&s3);
    let opts = SearchOptions { fields: Some(vec![f2.clone(), f4.clone()]), ..Default::default() };
    let report = ok(beta_sep_search(&reg, &opts))?;
    let w = report.witness.clone().ok_or("no witness reported")?;
    ensure!(w.degree == 3 && report.certified_lower == 4, "certified {} from degree {}", report.certified_lower, w.degree);
    ensure!(report.evidence_upper == Some(4), "evidence upper {:?}", report.evidence_upper);

    let group = close(&f2, reg.generators());
    let perms: Vec<Vec<usize>> = group.iter().map(|g| images_of(g, &f2)).collect();
    let wf = w.field.clone();
    let orbit_v: HashSet<Vec<Elem>> =
        perms.iter().map(|p| (0..6).map(|i| w.v[p.iter().position(|&x| x == i).unwrap()].clone()).collect()).collect();
    ensure!(!orbit_v.contains(&w.w), "witness points share an orbit");
    for d in 1..=3 {
        for inv in monomial_invariants(&f2, &group, 6, d) {
            let inv: Sparse = inv.into_iter().map(|(e, c)| (e, wf.embed(&f2, &c).unwrap())).collect();
            ensure!(eval_sparse(&wf, &inv, &w.v) == eval_sparse(&wf, &inv, &w.w), "a degree {} invariant splits the witness", d);
        }
    }
    let invs: Vec<Sparse> = (1..=4).flat_map(|d| monomial_invariants(&f2, &group, 6, d)).collect();
    let mut counts = Vec::new();
    for fq in [&f2, &f4] {
        let mats: Vec<Matrix> = reg.generators().iter().map(|g| g.embed(&f2, fq).unwrap()).collect();
        let orbits = brute_orbits(fq, &mats, 6);
        let mut sigs = HashSet::new();
        for o in &orbits {
            let sig: Vec<Elem> =
                invs.iter().map(|p| eval_sparse(fq, &p.iter().map(|(e, c)| (e.clone(), fq.embed(&f2, c).unwrap())).collect(), &o[0])).collect();
            ensure!(sigs.insert(sig), "degree <= 4 invariants fail to separate over {}", fq.name());
        }
        counts.push(format!("{} orbits over {}", orbits.len(), fq.name()));
    }
    Ok(format!("witness over {} agrees through degree 3; degree <= 4 separates {}", wf.name(), counts.join(", ")))
}

/// Invariants of degree `1..|G|` vanish at `v` and some degree-`|G|`
/// invariant does not, by the monomial oracle; the library agrees.
fn fixed_point_oracle(rep: &Representation, label: &str) -> Result<String, String> {
    let f = rep.field();
    let n = rep.dim();
    let group = close(f, rep.generators());
    let order = group.len() as u32;
    let v = vec![f.one(); n];
    for d in 1..order {
        let invs = monomial_invariants(f, &group, n, d);
        ensure!(invs.iter().all(|p| f.is_zero(&eval_sparse(f, p, &v))), "{}: a degree {} invariant is nonzero at v", label, d);
        ensure!(ok(invariant_slice(rep, d))?.dimension() == invs.len(), "{}: degree {} slice dimension differs from the oracle", label, d);
    }
    let top = monomial_invariants(f, &group, n, order);
    ensure!(top.iter().any(|p| !f.is_zero(&eval_sparse(f, p, &v))), "{}: every degree {} invariant vanishes at v", label, order);
    let g = ok(enumerate_group(rep, 1000))?;
    let fw = ok(fixed_point_witness_check(rep, &g, &v, order))?;
    ensure!(fw.witness.certified_lower() == order, "{}: library certifies {}", label, fw.witness.certified_lower());
    Ok(format!("{}: certified >= {} = |G|", label, order))
}

fn criterion_p_groups() -> Outcome {
    let mut parts = Vec::new();
    for p in [2u64, 3] {
        let f = ok(Field::prime(p))?;
        let q = p as usize;
        let rep = ok(Representation::permutation(&f, q, &[(0..q).map(|i| (i + 1) % q).collect()]))?;
        parts.push(fixed_point_oracle(&rep, &format!("C{}/F{}", p, p))?);
    }
    Ok(parts.join("; "))
}

fn criterion_cyclic() -> Outcome {
    let f = ok(Field::prime(3))?;
    let rep = ok(cyclic_module(2, 3, 1, &f))?;
    let line = fixed_point_oracle(&rep, "C6/F3")?;
    let group = close(&f, rep.generators());
    let m = vec![2u32, 2, 2];
    ensure!(group.iter().all(|g| act_on_monomial(&f, g, &m) == (m.clone(), f.one())), "(x1x2x3)^2 is not invariant");
    Ok(format!("{}; (x1x2x3)^2 invariant with value 1 at v", line))
}

fn criterion_dihedral() -> Outcome {
    let f = ok(Field::prime(3))?;
    let rep = ok(dihedral_module(3, 1, &f))?;
    let line = fixed_point_oracle(&rep, "D6/F3")?;
    let rho = &rep.generators()[0];
    let sigma = &rep.generators()[1];
    let m = vec![2u32, 2, 2];
    let rotations = close(&f, std::slice::from_ref(rho));
    let mut s_m = Sparse::new();
    for r in &rotations {
        let (e, c) = act_on_monomial(&f, r, &m);
        s_m.entry(e).or_insert(c);
    }
    let mut total = s_m.clone();
    for (e, c) in &s_m {
        let (e2, c2) = act_on_monomial(&f, sigma, e);
        let slot = total.entry(e2).or_insert(f.zero());
        *slot = f.add(slot, &f.mul(c, &c2));
    }
    total.retain(|_, c| !f.is_zero(c));
    let two_m: Sparse = [(m.clone(), f.from_i64(2))].into();
    ensure!(total == two_m, "s_m + sigma s_m = {:?}", total);
    ensure!(!f.is_zero(&eval_sparse(&f, &two_m, &[f.one(), f.one(), f.one()])), "2m vanishes at v");
    Ok(format!("{}; s_m + sigma s_m = 2m, nonzero at v", line))
}

fn criterion_additive_p() -> Outcome {
    let mut parts = Vec::new();
    for p in [2u64, 3] {
        let f = ok(Field::prime(p))?;
        let act = ok(additive_module(&f, &[Summand::Standard, Summand::FrobeniusTwist { n: 1 }]))?;
        let q = p;
        for d in 1..=(q + 2) as u32 {
            let mut triples = 0;
            for a in 0..=d as u64 {
                for b in 0..=d as u64 - a {
                    for c in 0..=d as u64 {
                        triples += (a + b + c * (q + 1) == d as u64) as usize;
                    }
                }
            }
            let got = ok(invariant_slice_parametric(&act, d))?.dimension();
            ensure!(got == triples, "p={} degree {}: slice {} vs closed form {}", p, d, got, triples);
        }
        // the degree <= p slices are spanned by monomials in x1, y1, which agree at v and w
        let v = [0, 1, 0, 0].map(|c| f.from_i64(c)).to_vec();
        let w = [0, 1, 1, 0].map(|c| f.from_i64(c)).to_vec();
        for d in 1..=q as u32 {
            let slice = ok(invariant_slice_parametric(&act, d))?;
            for a in 0..=d {
                let xy = Polynomial::monomial(&f, Monomial::new(vec![0, a, 0, d - a]), f.one());
                ensure!(slice.contains(&xy), "p={}: x1^{} y1^{} is not in the slice", p, a, d - a);
            }
            ensure!(slice.basis().iter().all(|b| b.evaluate(&v).unwrap() == b.evaluate(&w).unwrap()), "p={}: degree {} splits v, w", p, d);
        }
        let x = |i| Polynomial::var(&f, 4, i);
        let inv = &(&x(0).pow(q as u32) * &x(3)) - &(&x(1).pow(q as u32) * &x(2));
        ensure!(ok(invariant_slice_parametric(&act, q as u32 + 1))?.contains(&inv), "p={}: f not in the slice", p);
        ensure!(f.is_zero(&ok(inv.evaluate(&v))?) && !f.is_zero(&ok(inv.evaluate(&w))?), "p={}: f does not split v, w", p);
        let big = ok(Field::extension(p, 2))?;
        let act_big = ok(additive_module(&big, &[Summand::Standard, Summand::FrobeniusTwist { n: 1 }]))?;
        let (vb, wb) = (v.iter().map(|c| big.embed(&f, c).unwrap()).collect::<Vec<_>>(), w.iter().map(|c| big.embed(&f, c).unwrap()).collect::<Vec<_>>());
        for s in ok(big.elements())? {
            let a = ok(act_big.specialize(&s))?;
            ensure!(a.apply(&big, &vb) != wb, "p={}: A(s) v = w at a sampled s", p);
            let ib = ok(inv.embed_field(&big))?;
            ensure!(ok(ib.substitute_linear(&a))? == ib, "p={}: f moves under a sampled s", p);
        }
        ensure!(!ok(parametric_same_orbit(&act, &v, &w))?, "p={}: library places v, w in one orbit", p);
        ok(parametric_witness_check(&act, &v, &w, q as u32 + 1))?;
        parts.push(format!("p={}: dims match through degree {}, split at degree {}", p, q + 2, q + 1));
    }
    Ok(parts.join("; "))
}

fn criterion_additive_0() -> Outcome {
    let q = Field::rationals();
    let act = ok(additive_module(&q, &[Summand::Dual, Summand::SymmetricPower { m: 2 }]))?;
    let e = |xs: [i64; 5]| xs.map(|c| q.from_i64(c)).to_vec();
    let (v, w) = (e([1, 0, 1, 0, 0]), e([1, 0, 0, 0, 0]));
    let samples: Vec<i64> = (1..=8).collect();
    let mut dims = Vec::new();
    for d in 1..=2 {
        let invs = sampled_invariants(&act, d, &samples);
        ensure!(invs.iter().all(|b| b.evaluate(&v).unwrap() == b.evaluate(&w).unwrap()), "a degree {} invariant splits w, w'", d);
        ensure!(ok(invariant_slice_parametric(&act, d))?.dimension() == invs.len(), "degree {} dimension differs", d);
        dims.push(invs.len());
    }
    let cubic = sampled_invariants(&act, 3, &samples);
    let splitter = cubic.iter().find(|b| b.evaluate(&v).unwrap() != b.evaluate(&w).unwrap()).ok_or("no degree 3 invariant splits w, w'")?;
    ensure!(ok(invariant_slice_parametric(&act, 3))?.contains(splitter), "library slice misses the splitting cubic");
    ensure!(!ok(parametric_same_orbit(&act, &v, &w))?, "library places w, w' in one orbit");
    Ok(format!("slice dims {:?} agree on w, w'; {} splits them", dims, splitter.to_text()))
}

fn criterion_torus() -> Outcome {
    let q = Field::rationals();
    let mut firsts = Vec::new();
    for n in [2i64, 3, 4] {
        let act = ok(torus_module(&q, &[-1, n]))?;
        let brute = (1u32..).find(|&d| (0..=d as i64).any(|b| -(d as i64 - b) + n * b == 0)).unwrap();
        let lib = (1..=(n + 1) as u32).find(|&d| invariant_slice_parametric(&act, d).map(|s| s.dimension() > 0).unwrap_or(false));
        ensure!(brute == n as u32 + 1 && lib == Some(brute), "n={}: oracle {} library {:?}", n, brute, lib);
        firsts.push(format!("n={}: {}", n, brute));
    }
    Ok(format!("first invariant degree {}", firsts.join(", ")))
}

fn criterion_polarization() -> Outcome {
    let mut parts = Vec::new();
    for (q, wdim, d) in [(3u64, 2usize, 2usize), (2, 2, 3), (5, 1, 3)] {
        let f = ok(Field::of_order(q))?;
        let set = ok(polarized_elementary_symmetric(&f, wdim, d))?;
        ensure!(set.max_degree() as usize <= d, "degree {} exceeds {}", set.max_degree(), d);
        let blocks = ok(Representation::symmetric_on_blocks(&f, d, wdim))?;
        for p in set.polys() {
            for g in blocks.generators() {
                ensure!(ok(p.substitute_linear(g))? == *p, "({},{},{}): {} is not invariant", q, wdim, d, p.to_text());
            }
        }
        let elems = ok(f.elements())?;
        let n = wdim * d;
        let mut classes: HashMap<Vec<Elem>, Vec<Vec<u64>>> = HashMap::new();
        for k in 0..q.pow(n as u32) {
            let digits: Vec<u64> = (0..n).map(|i| k / q.pow((n - 1 - i) as u32) % q).collect();
            let point: Vec<Elem> = digits.iter().map(|&i| elems[i as usize].clone()).collect();
            let mut blocks: Vec<Vec<u64>> = digits.chunks(wdim).map(|c| c.to_vec()).collect();
            blocks.sort();
            let sig: Vec<Elem> = set.polys().iter().map(|p| p.evaluate(&point).unwrap()).collect();
            classes.entry(sig).or_default().push(blocks.concat());
        }
        for members in classes.values() {
            ensure!(members.iter().all(|m| *m == members[0]), "({},{},{}): two orbits share all values", q, wdim, d);
        }
        parts.push(format!("({},{},{}): {} orbits", q, wdim, d, classes.len()));
    }
    Ok(parts.join(", "))
}

fn separates_brute(set: &[Polynomial], f: &Field, mats: &[Matrix], n: usize) -> Result<usize, String> {
    let orbits = brute_orbits(f, mats, n);
    let mut sigs = HashSet::new();
    for o in &orbits {
        let sig: Vec<Elem> = set.iter().map(|p| p.evaluate(&o[0]).unwrap()).collect();
        ensure!(sigs.insert(sig), "two orbits share all values");
    }
    Ok(orbits.len())
}

fn criterion_coset_constructions() -> Outcome {
    let f2 = ok(Field::prime(2))?;
    let s3 = ok(enumerate_group(&ok(Representation::symmetric_group(&f2, 3))?, 10))?;
    let reg = regular_representation(&s3);
    let g = ok(enumerate_group(&reg, 10))?;
    let c3 = g.generators()[1];
    let h_rep = g.subgroup_representation(&[c3]);
    let phi: Vec<Polynomial> = (1..=3).flat_map(|d| invariant_slice(&h_rep, d).unwrap().basis().to_vec()).collect();
    let cosets = ok(CosetDecomposition::right(&g, &[c3]))?;
    let pipe = ok(build_coset_morphism(&phi, &g, &cosets))?;
    let comps = pipe.composite();
    ensure!(comps.iter().all(|p| p.degree().unwrap_or(0) <= 6), "a component exceeds degree 6");
    for p in comps {
        for m in reg.generators() {
            ensure!(ok(p.substitute_linear(m))? == *p, "component {} is not S3-invariant", p.to_text());
        }
    }
    let s3_orbits = separates_brute(comps, &f2, reg.generators(), 6)?;

    let c4_rep = ok(Representation::permutation(&f2, 4, &[vec![1, 2, 3, 0]]))?;
    let c4 = ok(enumerate_group(&c4_rep, 10))?;
    let gen = c4.generators()[0];
    let h = c4.mul(gen, gen);
    let h_rep = c4.subgroup_representation(&[h]);
    let phi: Vec<Polynomial> = (1..=2).flat_map(|d| invariant_slice(&h_rep, d).unwrap().basis().to_vec()).collect();
    let pipe = ok(normal_composition(&phi, &c4, &[h], 2))?;
    let comps = pipe.composite();
    ensure!(comps.iter().all(|p| p.degree().unwrap_or(0) <= 4), "a C4 component exceeds degree 4");
    for p in comps {
        ensure!(ok(p.substitute_linear(&c4_rep.generators()[0]))? == *p, "component {} is not C4-invariant", p.to_text());
    }
    let c4_orbits = separates_brute(comps, &f2, c4_rep.generators(), 4)?;
    Ok(format!("S3 from C3: degree <= 6, separates {} orbits; C4 through C2: degree <= 4, separates {} orbits", s3_orbits, c4_orbits))
}

fn criterion_hilbert_ideal() -> Outcome {
    let f2 = ok(Field::prime(2))?;
    let f3 = ok(Field::prime(3))?;
    let cases = [
        ("C2/F2", ok(Representation::permutation(&f2, 2, &[vec![1, 0]]))?, 2u32),
        ("C3/F3", ok(Representation::permutation(&f3, 3, &[vec![1, 2, 0]]))?, 3),
        ("C6/F3", ok(cyclic_module(2, 3, 1, &f3))?, 6),
    ];
    let mut parts = Vec::new();
    for (label, rep, d) in cases {
        let f = rep.field();
        let n = rep.dim();
        let group = close(f, rep.generators());
        let top = monomials(n, d);
        let index: HashMap<&Vec<u32>, usize> = top.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let vector = |p: &Sparse| {
            let mut v = vec![f.zero(); top.len()];
            for (e, c) in p {
                v[index[e]] = c.clone();
            }
            v
        };
        let mut ideal = Vec::new();
        for e in 1..d {
            for inv in monomial_invariants(f, &group, n, e) {
                for mu in monomials(n, d - e) {
                    let mut prod = Sparse::new();
                    for (m, c) in &inv {
                        let key: Vec<u32> = m.iter().zip(&mu).map(|(a, b)| a + b).collect();
                        let slot = prod.entry(key).or_insert(f.zero());
                        *slot = f.add(slot, c);
                    }
                    ideal.push(vector(&prod));
                }
            }
        }
        let invs: Vec<Vec<Elem>> = monomial_invariants(f, &group, n, d).iter().map(&vector).collect();
        let r_ideal = rank(f, ideal.clone(), top.len());
        let r_both = rank(f, ideal.into_iter().chain(invs.iter().cloned()).collect(), top.len());
        ensure!(r_both > r_ideal, "{}: the ideal slice contains every degree {} invariant", label, d);
        let lib = ok(hilbert_ideal_slice_test(&rep, d))?;
        ensure!(
            lib.ideal_slice_dimension == r_ideal && lib.invariant_dimension == invs.len() && lib.misses_an_invariant(),
            "{}: library ranks ({}, {}) vs oracle ({}, {})",
            label,
            lib.ideal_slice_dimension,
            lib.invariant_dimension,
            r_ideal,
            invs.len()
        );
        parts.push(format!("{}: ideal rank {} < {}", label, r_ideal, r_both));
    }
    Ok(parts.join(", "))
}

fn criterion_bounds() -> Outcome {
    let a4 = ok(apply_rules(&a4_descriptor(3)))?;
    ensure!(a4.upper.bound == 9 && a4.upper.verify().is_ok(), "A4 upper {}", a4.upper.bound);
    let a4a4 = ok(apply_rules(&a4_squared_descriptor(3)))?;
    ensure!(a4a4.upper.bound == 81 && a4a4.upper.verify().is_ok(), "A4 x A4 upper {}", a4a4.upper.bound);
    for (n, p) in [(6u64, 3u64), (15, 3), (10, 5), (21, 7)] {
        let r = ok(apply_rules(&dihedral_descriptor(n, p)))?;
        let upper = 3 * n / 2;
        ensure!(r.upper.bound == upper && r.lower.bound == n, "D_{} char {}: upper {} lower {}", 2 * n, p, r.upper.bound, r.lower.bound);
        ensure!(r.upper.verify().is_ok() && r.lower.verify().is_ok(), "D_{} certificates do not replay", 2 * n);
    }
    let lookups = [
        (GroupDescriptor { family: Some(Family::Symmetric { degree: 3 }), ..GroupDescriptor::new(6, 2) }, 4),
        (GroupDescriptor::new(27, 3), 27),
        (GroupDescriptor { cyclic: true, ..GroupDescriptor::new(12, 3) }, 12),
        (dihedral_descriptor(9, 3), 18),
    ];
    for (d, want) in lookups {
        let got = exact_value_lookup(&d).map(|x| x.0);
        ensure!(got == Some(want), "exact lookup for {} gave {:?}", d.label(), got);
    }
    Ok("A4 -> 9, A4 x A4 -> 81, D_2n -> floor(3n/2) and n, exact values 4, |G|, |G|, 2p^r".into())
}

fn run_property<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> PropResult) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn criterion_properties() -> Outcome {
    for q in SMALL_ORDERS {
        field_axioms_exhaustive(q).map_err(|e| format!("field axioms, q={}: {}", q, e))?;
    }
    run_property(64, (1usize..=4, terms(3, 6), prop::collection::vec(0i64..5, 16), prop::collection::vec(0i64..5, 16)), |(n, fa, ra, rb)| {
        substitution_contravariance(n, &fa, &ra, &rb)
    })
    .map_err(|e| format!("substitution: {}", e))?;
    run_property(
        64,
        (prop::sample::select(vec![7u64, 0]), terms(4, 5), 1usize..=3, prop::collection::vec(-6i64..6, 3), prop::collection::vec(-6i64..6, 9)),
        |(q, fa, k, t, u)| polarization_reconstruction(q, &fa, k, &t, &u),
    )
    .map_err(|e| format!("polarization: {}", e))?;
    let groups = || (2usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(permutation_strategy(n), 1..=2)));
    run_property(48, (prop::sample::select(vec![2u64, 3]), groups(), 1u32..=3), |(p, (n, gens), d)| slice_invariance(p, n, &gens, d))
        .map_err(|e| format!("slice invariance: {}", e))?;
    run_property(8, (prop::sample::select(vec![2u64, 3, 4, 8, 9]), 0u32..=1, 1u32..=4), |(q, t, d)| parametric_spot_check(q, t, d))
        .map_err(|e| format!("parametric slices: {}", e))?;
    let small = || (2usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(permutation_strategy(n), 1..=2)));
    run_property(48, (prop::sample::select(vec![2u64, 3]), small(), 1u32..=3), |(p, (n, gens), d)| witness_validity(p, n, &gens, d))
        .map_err(|e| format!("witness validity: {}", e))?;
    Ok("field axioms (q <= 16, exhaustive), substitution, polarization, slice invariance, witness re-verification".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        ("S3 in characteristic 2: certified 4, separation at 4 over F_2 and F_4", Duration::from_secs(120), criterion_s3),
        ("p-groups C2/F2, C3/F3: certified |G|", Duration::from_secs(10), criterion_p_groups),
        ("cyclic C6 over F3: certified 6", Duration::from_secs(30), criterion_cyclic),
        ("dihedral D6 over F3: certified 6", Duration::from_secs(30), criterion_dihedral),
        ("additive V + V_F, p = 2, 3: closed form and witness at p + 1", Duration::from_secs(60), criterion_additive_p),
        ("additive V* + S^2 V over Q: agreement through degree 2", Duration::from_secs(60), criterion_additive_0),
        ("torus weights (-1, n), n = 2..4: first invariant in degree n + 1", Duration::from_secs(5), criterion_torus),
        ("polarized elementary symmetric functions separate", Duration::from_secs(60), criterion_polarization),
        ("coset and normal-subgroup morphisms", Duration::from_secs(120), criterion_coset_constructions),
        ("Hilbert ideal misses a degree-|G| invariant", Duration::from_secs(60), criterion_hilbert_ideal),
        ("degree-bound calculus", Duration::from_secs(1), criterion_bounds),
        ("property suites", Duration::from_secs(300), criterion_properties),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{} but took {:.2?}", d, elapsed)),
            Err(e) => ("FAIL", e),
        };
        failures += (status == "FAIL") as usize;
        println!(
            "[{}] {:>2}. {} (tolerance: exact; {:.2?} of {:?} budget) -- {}",
            status,
            i + 1,
            name,
            elapsed,
            budget,
            detail
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
