//! Property checks shared by the proptest suite and the acceptance runner.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use sepinv::bounds::{apply_rules, exact_value_lookup, GroupDescriptor};
use sepinv::invariants::{invariant_slice, invariant_slice_parametric, invariant_slices_up_to};
use sepinv::matrix::Matrix;
use sepinv::polys::{Monomial, Polynomial};
use sepinv::reps::{additive_module, enumerate_group, Representation, Summand};
use sepinv::separation::{check_separating_on_points, SeparatingSet};
use sepinv::{Elem, Field};

pub type PropResult = Result<(), TestCaseError>;

pub const SMALL_ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

pub fn elem(f: &Field, raw: i64) -> Elem {
    match f.order() {
        Some(q) => f.from_index(raw.rem_euclid(q as i64) as u64).unwrap(),
        None => f.from_i64(raw),
    }
}

pub fn poly(f: &Field, nvars: usize, terms: &[(Vec<u32>, i64)]) -> Polynomial {
    Polynomial::from_terms(f, nvars, terms.iter().map(|(e, c)| (Monomial::new(e[..nvars].to_vec()), elem(f, *c))))
}

/// Terms with exponent vectors of length 4 and total degree at most `max_degree`.
pub fn terms(max_degree: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_degree, 4), -20i64..20)
            .prop_filter("degree cap", move |(e, _)| e.iter().sum::<u32>() <= max_degree),
        1..=max_terms,
    )
}

pub fn fin(f: &Field, raw: u64) -> Elem {
    f.from_index(raw % f.order().unwrap()).unwrap()
}

pub fn field_axioms(q: u64, a: u64, b: u64, c: u64) -> PropResult {
    let f = Field::of_order(q).unwrap();
    let (a, b, c) = (fin(&f, a), fin(&f, b), fin(&f, c));
    prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
    prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
    prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
    prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
    prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
    prop_assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
    if !f.is_zero(&a) {
        prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
    }
    prop_assert_eq!(
        f.frobenius(&f.add(&a, &b), 1).unwrap(),
        f.add(&f.frobenius(&a, 1).unwrap(), &f.frobenius(&b, 1).unwrap())
    );
    Ok(())
}

/// Every pair and triple of elements, for one field.
pub fn field_axioms_exhaustive(q: u64) -> PropResult {
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                field_axioms(q, a, b, c)?;
            }
        }
    }
    Ok(())
}

pub fn root_of_unity_order(q: u64, r: u64) -> PropResult {
    let f = Field::of_order(q).unwrap();
    let z = f.root_of_unity(r).unwrap();
    let powers: Vec<Elem> = (1..=r).map(|e| f.pow(&z, e)).collect();
    prop_assert!(f.is_one(&powers[r as usize - 1]));
    prop_assert!(powers[..r as usize - 1].iter().all(|x| !f.is_one(x)));
    Ok(())
}

pub fn evaluation_homomorphism(q: u64, fa: &[(Vec<u32>, i64)], fb: &[(Vec<u32>, i64)], point: &[i64]) -> PropResult {
    let f = Field::of_order(q).unwrap();
    let (a, b) = (poly(&f, 3, fa), poly(&f, 3, fb));
    let x: Vec<Elem> = point.iter().map(|&v| elem(&f, v)).collect();
    let (va, vb) = (a.evaluate(&x).unwrap(), b.evaluate(&x).unwrap());
    prop_assert_eq!((&a * &b).evaluate(&x).unwrap(), f.mul(&va, &vb));
    prop_assert_eq!((&a + &b).evaluate(&x).unwrap(), f.add(&va, &vb));
    prop_assert!((&a - &a).is_zero());
    Ok(())
}

fn square(f: &Field, n: usize, raw: &[i64]) -> Matrix {
    Matrix::new(n, n, raw[..n * n].iter().map(|&v| elem(f, v)).collect()).unwrap()
}

/// `(f o A) o B = f o (A B)` for `f o A (x) = f(A x)`.
pub fn substitution_contravariance(n: usize, fa: &[(Vec<u32>, i64)], ra: &[i64], rb: &[i64]) -> PropResult {
    let f = Field::prime(5).unwrap();
    let (a, b) = (square(&f, n, ra), square(&f, n, rb));
    prop_assume!(a.rank(&f) == n && b.rank(&f) == n);
    let p = poly(&f, n, fa);
    let iterated = p.substitute_linear(&a).unwrap().substitute_linear(&b).unwrap();
    prop_assert_eq!(iterated, p.substitute_linear(&a.mul(&f, &b)).unwrap());
    Ok(())
}

/// `f(t_1 u_1 + ... + t_k u_k) = sum_alpha t^alpha P_alpha(u)` at a random point.
pub fn polarization_reconstruction(q: u64, fa: &[(Vec<u32>, i64)], copies: usize, t: &[i64], u: &[i64]) -> PropResult {
    let f = if q == 0 { Field::rationals() } else { Field::of_order(q).unwrap() };
    let p = poly(&f, 3, fa);
    prop_assume!(!p.is_zero());
    let parts = p.polarize(copies).unwrap();
    let t: Vec<Elem> = t[..copies].iter().map(|&v| elem(&f, v)).collect();
    let u: Vec<Elem> = u[..3 * copies].iter().map(|&v| elem(&f, v)).collect();
    let mut combined = vec![f.zero(); 3];
    for j in 0..copies {
        for i in 0..3 {
            combined[i] = f.add(&combined[i], &f.mul(&t[j], &u[3 * j + i]));
        }
    }
    let mut sum = f.zero();
    for part in &parts {
        prop_assert!(part.poly.degree().unwrap_or(0) <= p.degree().unwrap());
        let mut coeff = part.poly.evaluate(&u).unwrap();
        for (tj, &e) in t.iter().zip(&part.index) {
            coeff = f.mul(&coeff, &f.pow(tj, e as u64));
        }
        sum = f.add(&sum, &coeff);
    }
    prop_assert_eq!(sum, p.evaluate(&combined).unwrap());
    Ok(())
}

/// Closure of a set of permutations under composition.
pub fn permutation_closure(gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = gens[0].len();
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h: Vec<usize> = (0..n).map(|i| s[g[i]]).collect();
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out
}

/// Exponent vectors of total degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for mut rest in monomials(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Orbits of degree-`d` monomials under coordinate permutations.
pub fn monomial_orbits(perms: &[Vec<usize>], n: usize, d: u32) -> Vec<BTreeSet<Vec<u32>>> {
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for m in monomials(n, d) {
        if seen.contains(&m) {
            continue;
        }
        let orbit: BTreeSet<Vec<u32>> = perms
            .iter()
            .map(|g| {
                let mut e = vec![0; n];
                for i in 0..n {
                    e[g[i]] = m[i];
                }
                e
            })
            .collect();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    orbits
}

/// Permutation images read off a permutation matrix (`A e_j = e_{img[j]}`).
pub fn images_of(m: &Matrix, f: &Field) -> Vec<usize> {
    (0..m.cols()).map(|j| (0..m.rows()).find(|&i| f.is_one(m.get(i, j))).expect("permutation matrix")).collect()
}

/// Every emitted basis element is fixed by every generator, and for a
/// permutation module the dimension equals the number of monomial orbits.
pub fn slice_invariance(p: u64, n: usize, gens: &[Vec<usize>], d: u32) -> PropResult {
    let f = Field::prime(p).unwrap();
    let rep = Representation::permutation(&f, n, gens).unwrap();
    let slice = invariant_slice(&rep, d).unwrap();
    for b in slice.basis() {
        for g in rep.generators() {
            prop_assert_eq!(&b.substitute_linear(g).unwrap(), b);
        }
    }
    let perms = permutation_closure(gens);
    prop_assert_eq!(slice.dimension(), monomial_orbits(&perms, n, d).len());
    Ok(())
}

/// Parametric slices are fixed by each numeric specialization over `F_q`.
pub fn parametric_spot_check(q: u64, twist: u32, d: u32) -> PropResult {
    let f = Field::of_order(q).unwrap();
    let act = additive_module(&f, &[Summand::Standard, Summand::FrobeniusTwist { n: twist }]).unwrap();
    let slice = invariant_slice_parametric(&act, d).unwrap();
    for s in f.elements().unwrap() {
        let a = act.specialize(&s).unwrap();
        for b in slice.basis() {
            prop_assert_eq!(&b.substitute_linear(&a).unwrap(), b);
        }
    }
    Ok(())
}

/// Orbits of `F_q^n` under a group of matrices, by breadth-first search from
/// each unvisited point.
pub fn brute_orbits(f: &Field, mats: &[Matrix], n: usize) -> Vec<Vec<Vec<Elem>>> {
    let q = f.order().unwrap();
    let elems = f.elements().unwrap();
    let total = q.pow(n as u32);
    let point = |mut k: u64| -> Vec<Elem> {
        let mut v = vec![f.zero(); n];
        for i in (0..n).rev() {
            v[i] = elems[(k % q) as usize].clone();
            k /= q;
        }
        v
    };
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut orbits = Vec::new();
    for k in 0..total {
        let v = point(k);
        if seen.contains(&v) {
            continue;
        }
        let mut orbit = vec![v.clone()];
        seen.insert(v.clone());
        let mut i = 0;
        while i < orbit.len() {
            for g in mats {
                let w = g.apply(f, &orbit[i]);
                if seen.insert(w.clone()) {
                    orbit.push(w);
                }
            }
            i += 1;
        }
        orbits.push(orbit);
    }
    orbits
}

/// Any witness reported by the point check lies in distinct orbits (by
/// brute-force enumeration) and agrees on every slice invariant of degree
/// at most its stated degree.
pub fn witness_validity(p: u64, n: usize, gens: &[Vec<usize>], d: u32) -> PropResult {
    let f = Field::prime(p).unwrap();
    let rep = Representation::permutation(&f, n, gens).unwrap();
    let group = enumerate_group(&rep, 1000).unwrap();
    let slices = invariant_slices_up_to(&rep, d).unwrap();
    let set = SeparatingSet::from_slices(&f, n, &slices).unwrap();
    let report = check_separating_on_points(&set, &group, &f, 100_000).unwrap();
    let orbits = brute_orbits(&f, rep.generators(), n);
    prop_assert_eq!(report.orbits, orbits.len());
    let orbit_id: HashMap<Vec<Elem>, usize> =
        orbits.iter().enumerate().flat_map(|(i, o)| o.iter().map(move |v| (v.clone(), i))).collect();
    match &report.witness {
        Some(w) => {
            prop_assert_ne!(orbit_id[&w.v], orbit_id[&w.w]);
            for s in &slices {
                for b in s.basis() {
                    prop_assert_eq!(b.evaluate(&w.v).unwrap(), b.evaluate(&w.w).unwrap());
                }
            }
            prop_assert!(w.verify(&group, &slices).is_ok());
        }
        None => {
            let mut signatures = HashSet::new();
            for o in &orbits {
                let values: Vec<Elem> = set.polys().iter().map(|b| b.evaluate(&o[0]).unwrap()).collect();
                prop_assert!(signatures.insert(values));
            }
        }
    }
    // values are constant on every orbit
    for o in &orbits {
        for b in set.polys() {
            let v0 = b.evaluate(&o[0]).unwrap();
            for v in o {
                prop_assert_eq!(&b.evaluate(v).unwrap(), &v0);
            }
        }
    }
    Ok(())
}

/// Forgetting facts never improves a bound; certificates replay; exact
/// values sit between the derived bounds.
pub fn bounds_monotone(desc: &GroupDescriptor, keep_mask: u32, keep_max_order: bool) -> PropResult {
    let full = apply_rules(desc).unwrap();
    let mut reduced = desc.clone();
    reduced.subgroups = desc.subgroups.iter().enumerate().filter(|(i, _)| keep_mask >> i & 1 == 1).map(|(_, s)| s.clone()).collect();
    reduced.subquotients = desc.subquotients.iter().enumerate().filter(|(i, _)| keep_mask >> (16 + i) & 1 == 1).map(|(_, s)| s.clone()).collect();
    if !keep_max_order {
        reduced.max_element_order = None;
    }
    let less = apply_rules(&reduced).unwrap();
    prop_assert!(full.upper.bound <= less.upper.bound);
    prop_assert!(full.lower.bound >= less.lower.bound);
    for c in [&full.upper, &full.lower, &less.upper, &less.lower] {
        prop_assert!(c.verify().is_ok());
    }
    if let Some((v, _)) = exact_value_lookup(desc) {
        prop_assert!(full.lower.bound <= v && v <= full.upper.bound);
    }
    Ok(())
}

pub fn permutation_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}
