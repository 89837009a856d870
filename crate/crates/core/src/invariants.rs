//! Degree-sliced invariants: orbit sums, fixed spaces of finite groups by exact
//! nullspace, parametric invariance for additive and torus actions, the
//! transfer to induced modules and the Hilbert-ideal slice test.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, RowSpace};
use crate::polys::{homogeneous_slice_basis, Monomial, Polynomial};
use crate::reps::{ActionKind, CosetDecomposition, GroupElements, ParametricAction, Representation};
use crate::scalars::{Elem, Field};

/// A basis of the homogeneous invariants of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSlice {
    degree: u32,
    nvars: usize,
    basis: Vec<Polynomial>,
}

impl InvariantSlice {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Whether `f` (homogeneous of this degree) lies in the span of the basis.
    pub fn contains(&self, f: &Polynomial) -> bool {
        let monos = homogeneous_slice_basis(self.nvars, self.degree);
        let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        if f.terms().any(|(m, _)| !index.contains_key(m)) {
            return false;
        }
        let mut space = RowSpace::new(f.field(), monos.len());
        for b in &self.basis {
            space.insert(&b.coefficient_vector(&index, monos.len()));
        }
        space.contains(&f.coefficient_vector(&index, monos.len()))
    }
}

/// `s_m`: the sum of the distinct monomials in the orbit of `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSum {
    pub monomial: Monomial,
    pub poly: Polynomial,
    pub orbit_size: usize,
}

pub fn orbit_sum(rep: &Representation, group: &GroupElements, m: &Monomial) -> Result<OrbitSum> {
    if !rep.is_monomial() {
        return Err(Error::NonMonomialAction);
    }
    let f = rep.field();
    let single = Polynomial::monomial(f, m.clone(), f.one());
    let mut images = BTreeSet::new();
    for g in group.elements() {
        let img = single.substitute_linear(g)?;
        let (mono, _) = img.terms().next().ok_or(Error::NonMonomialAction)?;
        images.insert(mono.clone());
    }
    let orbit_size = images.len();
    let poly = Polynomial::from_terms(f, rep.dim(), images.into_iter().map(|mm| (mm, f.one())));
    Ok(OrbitSum { monomial: m.clone(), poly, orbit_size })
}

/// Invariants of degree `d`: the common nullspace of `f -> f o g - f` over the
/// generators, on the graded-lex coefficient space.
pub fn invariant_slice(rep: &Representation, d: u32) -> Result<InvariantSlice> {
    let f = rep.field();
    let n = rep.dim();
    let monos = homogeneous_slice_basis(n, d);
    let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let len = monos.len();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for g in rep.generators() {
        // column j holds the coefficients of (m_j o g) - m_j
        let mut block = vec![vec![f.zero(); len]; len];
        for (j, m) in monos.iter().enumerate() {
            let img = Polynomial::monomial(f, m.clone(), f.one()).substitute_linear(g)?;
            for (mm, c) in img.terms() {
                block[index[mm]][j] = c.clone();
            }
            block[j][j] = f.sub(&block[j][j], &f.one());
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !f.is_zero(x))));
    }
    let basis = nullspace(f, &rows, len)
        .into_iter()
        .map(|v| Polynomial::from_coefficient_vector(f, n, &monos, &v))
        .collect();
    Ok(InvariantSlice { degree: d, nvars: n, basis })
}

/// Slices of degrees `1..=dmax`, computed concurrently.
pub fn invariant_slices_up_to(rep: &Representation, dmax: u32) -> Result<Vec<InvariantSlice>> {
    (1..=dmax).into_par_iter().map(|d| invariant_slice(rep, d)).collect()
}

/// Invariants of degree `d` for an additive or torus action: every positive
/// power of the parameter must cancel in `f o A(s)`.
pub fn invariant_slice_parametric(act: &ParametricAction, d: u32) -> Result<InvariantSlice> {
    let f = act.field();
    let n = act.dim();
    let monos = homogeneous_slice_basis(n, d);
    match act.kind() {
        ActionKind::Torus { weights } => {
            let basis = monos
                .into_iter()
                .filter(|m| m.exponents().iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum::<i64>() == 0)
                .map(|m| Polynomial::monomial(f, m, f.one()))
                .collect();
            Ok(InvariantSlice { degree: d, nvars: n, basis })
        }
        ActionKind::Additive { matrix, .. } => {
            let len = monos.len();
            let mut row_of: HashMap<Monomial, usize> = HashMap::new();
            let mut rows: Vec<Vec<Elem>> = Vec::new();
            for (j, m) in monos.iter().enumerate() {
                let single = Polynomial::monomial(f, m.clone(), f.one());
                let lifted = single.remap_variables(n + 1, &(0..n).collect::<Vec<_>>());
                let diff = single.substitute_parametric(matrix)?.try_sub(&lifted)?;
                for (mm, c) in diff.terms() {
                    let r = *row_of.entry(mm.clone()).or_insert_with(|| {
                        rows.push(vec![f.zero(); len]);
                        rows.len() - 1
                    });
                    rows[r][j] = c.clone();
                }
            }
            let basis = nullspace(f, &rows, len)
                .into_iter()
                .map(|v| Polynomial::from_coefficient_vector(f, n, &monos, &v))
                .collect();
            Ok(InvariantSlice { degree: d, nvars: n, basis })
        }
    }
}

/// `f~(t_1 v_1, ..., t_d v_d) = sum_i f(v_i)` on the induced module.
pub fn transfer_to_induced(f: &Polynomial, h_rep: &Representation, cosets: &CosetDecomposition) -> Result<Polynomial> {
    let m = h_rep.dim();
    if f.nvars() != m {
        return Err(Error::DimensionMismatch { expected: m, got: f.nvars() });
    }
    for g in h_rep.generators() {
        if !f.is_fixed_by(g)? {
            return Err(Error::NotInvariant(f.to_text()));
        }
    }
    let d = cosets.index();
    let mut out = Polynomial::zero(f.field(), d * m);
    for i in 0..d {
        let map: Vec<usize> = (0..m).map(|c| i * m + c).collect();
        out = out.try_add(&f.remap_variables(d * m, &map))?;
    }
    Ok(out)
}

/// Which degree-`d` invariants are not in the degree-`d` part of the ideal
/// generated by invariants of positive degree below `d`.
#[derive(Clone, Debug, Serialize)]
pub struct HilbertSliceReport {
    pub degree: u32,
    pub ideal_slice_dimension: usize,
    pub invariant_dimension: usize,
    /// basis invariants outside the ideal slice
    pub outside: Vec<String>,
}

impl HilbertSliceReport {
    pub fn misses_an_invariant(&self) -> bool {
        !self.outside.is_empty()
    }
}

pub fn hilbert_ideal_slice_test(rep: &Representation, d: u32) -> Result<HilbertSliceReport> {
    if d == 0 {
        return Err(Error::Config("degree must be positive".into()));
    }
    let f = rep.field();
    let n = rep.dim();
    let monos = homogeneous_slice_basis(n, d);
    let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let len = monos.len();
    let mut ideal = RowSpace::new(f, len);
    for e in 1..d {
        let slice = invariant_slice(rep, e)?;
        let cofactors = homogeneous_slice_basis(n, d - e);
        for h in slice.basis() {
            for m in &cofactors {
                let prod = h.try_mul(&Polynomial::monomial(f, m.clone(), f.one()))?;
                ideal.insert(&prod.coefficient_vector(&index, len));
            }
        }
    }
    let top = invariant_slice(rep, d)?;
    let outside = top
        .basis()
        .iter()
        .filter(|p| !ideal.contains(&p.coefficient_vector(&index, len)))
        .map(|p| p.to_text())
        .collect();
    Ok(HilbertSliceReport {
        degree: d,
        ideal_slice_dimension: ideal.dimension(),
        invariant_dimension: top.dimension(),
        outside,
    })
}

/// Averaging operator `|G|^-1 sum_g f o g`; only defined when the
/// characteristic does not divide `|G|`.
pub fn reynolds(group: &GroupElements, f: &Polynomial) -> Result<Polynomial> {
    let field: &Field = group.field();
    let order = group.order() as u64;
    let p = field.characteristic();
    if p != 0 && order % p == 0 {
        return Err(Error::InvalidModule(format!("characteristic {} divides the group order {}", p, order)));
    }
    let mut sum = Polynomial::zero(field, f.nvars());
    for g in group.elements() {
        sum = sum.try_add(&f.substitute_linear(g)?)?;
    }
    Ok(sum.scale(&field.inv(&field.from_i64(order as i64))?))
}
