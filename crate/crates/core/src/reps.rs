//! Matrix groups and their modules: generator-based representations, explicit
//! group enumeration, cosets, the standard module constructions (cyclic,
//! dihedral, regular, induced), and parametric additive-group / torus actions.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, ParamMatrix};
use crate::scalars::{Elem, Field};
use crate::univariate::UniPoly;

/// A finite-dimensional module given by invertible generator matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    field: Field,
    dim: usize,
    generators: Vec<Matrix>,
    label: Option<String>,
}

impl Representation {
    pub fn new(field: &Field, dim: usize, generators: Vec<Matrix>) -> Result<Representation> {
        for g in &generators {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.rows() });
            }
            if g.rank(field) != dim {
                return Err(Error::Singular);
            }
        }
        Ok(Representation { field: field.clone(), dim, generators, label: None })
    }

    /// Permutation module where generator `k` sends `e_i` to `e_{perms[k][i]}`.
    pub fn permutation(field: &Field, degree: usize, perms: &[Vec<usize>]) -> Result<Representation> {
        let gens = perms
            .iter()
            .map(|p| {
                if p.len() != degree {
                    return Err(Error::DimensionMismatch { expected: degree, got: p.len() });
                }
                Matrix::permutation(field, p)
            })
            .collect::<Result<Vec<_>>>()?;
        Representation::new(field, degree, gens)
    }

    /// The symmetric group `S_n` permuting coordinates, generated by `(1 2)` and
    /// the `n`-cycle.
    pub fn symmetric_group(field: &Field, n: usize) -> Result<Representation> {
        Representation::symmetric_on_blocks(field, n, 1)
    }

    /// `S_d` permuting the `d` blocks of `W^d` (block-major coordinates, each
    /// block of size `block_dim`).
    pub fn symmetric_on_blocks(field: &Field, d: usize, block_dim: usize) -> Result<Representation> {
        let lift = |slot_perm: &[usize]| -> Vec<usize> {
            (0..d * block_dim).map(|i| slot_perm[i / block_dim] * block_dim + i % block_dim).collect()
        };
        let mut perms = Vec::new();
        if d >= 2 {
            let mut t: Vec<usize> = (0..d).collect();
            t.swap(0, 1);
            perms.push(lift(&t));
        }
        if d >= 3 {
            let c: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
            perms.push(lift(&c));
        }
        Ok(Representation::permutation(field, d * block_dim, &perms)?.with_label(format!("S_{}", d)))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Representation {
        self.label = Some(label.into());
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Whether every generator maps coordinates to multiples of coordinates.
    pub fn is_monomial(&self) -> bool {
        self.generators.iter().all(|g| g.monomial_rows(&self.field).is_some())
    }

    pub fn is_permutation(&self) -> bool {
        self.generators.iter().all(|g| {
            g.monomial_rows(&self.field).is_some_and(|rows| rows.iter().all(|(_, c)| self.field.is_one(c)))
        })
    }

    /// The same module with entries read in a larger field.
    pub fn change_field(&self, to: &Field) -> Result<Representation> {
        let gens = self.generators.iter().map(|g| g.embed(&self.field, to)).collect::<Result<Vec<_>>>()?;
        Ok(Representation { field: to.clone(), dim: self.dim, generators: gens, label: self.label.clone() })
    }
}

/// The complete element list of a finite matrix group.
#[derive(Clone, Debug)]
pub struct GroupElements {
    field: Field,
    dim: usize,
    elements: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
    generators: Vec<usize>,
}

/// Breadth-first closure of the generators under right multiplication.
/// Element 0 is the identity.
pub fn enumerate_group(rep: &Representation, cap: usize) -> Result<GroupElements> {
    let field = rep.field();
    for g in rep.generators() {
        if g.rank(field) != rep.dim() {
            return Err(Error::Singular);
        }
    }
    let id = Matrix::identity(field, rep.dim());
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in rep.generators() {
            let prod = elements[i].mul(field, g);
            if !index.contains_key(&prod) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded(format!("group order exceeds {}", cap)));
                }
                index.insert(prod.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(prod);
            }
        }
    }
    let generators = rep.generators().iter().map(|g| index[g]).collect();
    Ok(GroupElements { field: field.clone(), dim: rep.dim(), elements, index, generators })
}

impl GroupElements {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Indices of the generating matrices.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index[&self.elements[i].mul(&self.field, &self.elements[j])]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order()).find(|&j| self.mul(i, j) == 0).expect("finite group has inverses")
    }

    /// Whether the listing is closed under products.
    pub fn is_closed(&self) -> bool {
        (0..self.order()).all(|i| {
            (0..self.order()).all(|j| self.index.contains_key(&self.elements[i].mul(&self.field, &self.elements[j])))
        })
    }

    /// Distinct images `g v`, in element order.
    pub fn orbit(&self, v: &[Elem]) -> Vec<Vec<Elem>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for g in &self.elements {
            let w = g.apply(&self.field, v);
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
        out
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut k = 1u64;
        let mut x = i;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// Order of every element, in element order.
    pub fn element_orders(&self) -> Vec<u64> {
        (0..self.order()).map(|i| self.element_order(i)).collect()
    }

    pub fn max_element_order(&self) -> u64 {
        self.element_orders().into_iter().max().unwrap_or(1)
    }

    /// Members of the subgroup generated by the given elements, sorted.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![0usize];
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut i = 0;
        while i < members.len() {
            for &g in gens {
                let p = self.mul(members[i], g);
                if !seen[p] {
                    seen[p] = true;
                    members.push(p);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    /// Conjugation test: `g h g^-1` stays in the subgroup for every generator `g`.
    pub fn is_normal(&self, members: &[usize]) -> bool {
        let mut inside = vec![false; self.order()];
        for &h in members {
            inside[h] = true;
        }
        self.generators.iter().all(|&g| {
            let gi = self.inverse(g);
            members.iter().all(|&h| inside[self.mul(self.mul(g, h), gi)])
        })
    }

    /// The subgroup generated by `gens`, as a module on the same space.
    pub fn subgroup_representation(&self, gens: &[usize]) -> Representation {
        Representation {
            field: self.field.clone(),
            dim: self.dim,
            generators: gens.iter().map(|&g| self.elements[g].clone()).collect(),
            label: None,
        }
    }

    /// The group's generators as a representation.
    pub fn representation(&self) -> Representation {
        self.subgroup_representation(&self.generators)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CosetSide {
    /// `G = union of H g_i`
    Right,
    /// `G = union of g_i H`
    Left,
}

/// A subgroup and a deterministic transversal: representatives are the first
/// elements in enumeration order not covered by earlier cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetDecomposition {
    side: CosetSide,
    subgroup: Vec<usize>,
    subgroup_generators: Vec<usize>,
    representatives: Vec<usize>,
    coset_of: Vec<usize>,
}

impl CosetDecomposition {
    pub fn new(group: &GroupElements, subgroup_generators: &[usize], side: CosetSide) -> Result<Self> {
        if subgroup_generators.iter().any(|&g| g >= group.order()) {
            return Err(Error::InconsistentGroup("subgroup generator outside the group".into()));
        }
        let subgroup = group.subgroup_generated(subgroup_generators);
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut representatives = Vec::new();
        for x in 0..group.order() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            representatives.push(x);
            for &h in &subgroup {
                let y = match side {
                    CosetSide::Right => group.mul(h, x),
                    CosetSide::Left => group.mul(x, h),
                };
                coset_of[y] = c;
            }
        }
        if representatives.len() * subgroup.len() != group.order() {
            return Err(Error::InconsistentGroup("cosets do not partition the group".into()));
        }
        Ok(CosetDecomposition {
            side,
            subgroup,
            subgroup_generators: subgroup_generators.to_vec(),
            representatives,
            coset_of,
        })
    }

    pub fn right(group: &GroupElements, subgroup_generators: &[usize]) -> Result<Self> {
        Self::new(group, subgroup_generators, CosetSide::Right)
    }

    pub fn left(group: &GroupElements, subgroup_generators: &[usize]) -> Result<Self> {
        Self::new(group, subgroup_generators, CosetSide::Left)
    }

    pub fn side(&self) -> CosetSide {
        self.side
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn subgroup_generators(&self) -> &[usize] {
        &self.subgroup_generators
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn index(&self) -> usize {
        self.representatives.len()
    }

    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x]
    }

    /// Right cosets: `g_i g = h g_j`, returned as `(j, h)`.
    pub fn right_action(&self, group: &GroupElements, i: usize, g: usize) -> (usize, usize) {
        assert_eq!(self.side, CosetSide::Right);
        let x = group.mul(self.representatives[i], g);
        let j = self.coset_of[x];
        let h = group.mul(x, group.inverse(self.representatives[j]));
        (j, h)
    }

    /// Left cosets: `g t_i = t_j h`, returned as `(j, h)`.
    pub fn left_action(&self, group: &GroupElements, g: usize, i: usize) -> (usize, usize) {
        assert_eq!(self.side, CosetSide::Left);
        let x = group.mul(g, self.representatives[i]);
        let j = self.coset_of[x];
        let h = group.mul(group.inverse(self.representatives[j]), x);
        (j, h)
    }
}

/// Extends `generator index -> matrix` to a homomorphism on the subgroup, failing
/// when the assignment is not well defined.
pub fn subgroup_homomorphism(
    group: &GroupElements,
    subgroup_generators: &[usize],
    target: &Representation,
) -> Result<HashMap<usize, Matrix>> {
    if subgroup_generators.len() != target.generators().len() {
        return Err(Error::InconsistentGroup(format!(
            "{} subgroup generators but {} module generators",
            subgroup_generators.len(),
            target.generators().len()
        )));
    }
    let tf = target.field();
    let mut images = HashMap::from([(0usize, Matrix::identity(tf, target.dim()))]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let img_x = images[&x].clone();
        for (k, &g) in subgroup_generators.iter().enumerate() {
            let y = group.mul(x, g);
            let img_y = img_x.mul(tf, &target.generators()[k]);
            match images.get(&y) {
                Some(existing) if *existing != img_y => {
                    return Err(Error::InconsistentGroup("module generators do not define a homomorphism".into()))
                }
                Some(_) => {}
                None => {
                    images.insert(y, img_y);
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(images)
}

/// `q = p^k` dimensional module of the cyclic group of order `r q`:
/// `g` scales by a primitive `r`-th root of unity, `h` shifts `v_i -> v_{i+1}`.
pub fn cyclic_module(r: u64, p: u64, k: u32, field: &Field) -> Result<Representation> {
    if field.characteristic() != p {
        return Err(Error::InvalidModule(format!("field characteristic must be {}", p)));
    }
    if r.gcd(&p) != 1 {
        return Err(Error::InvalidModule(format!("r = {} is not coprime to p = {}", r, p)));
    }
    let zeta = field.root_of_unity(r)?;
    let q = p.pow(k) as usize;
    let g = Matrix::scalar(field, q, &zeta);
    let h = Matrix::permutation(field, &(0..q).map(|i| (i + 1) % q).collect::<Vec<_>>())?;
    Ok(Representation::new(field, q, vec![g, h])?.with_label(format!("C_{}", r * q as u64)))
}

/// `q = p^r` dimensional module of the dihedral group of order `2q`:
/// `rho v_i = v_{i+1}`, `sigma v_i = -v_{-i}`.
pub fn dihedral_module(p: u64, r: u32, field: &Field) -> Result<Representation> {
    if p == 2 {
        return Err(Error::InvalidModule("the dihedral construction needs an odd prime".into()));
    }
    if field.characteristic() != p {
        return Err(Error::InvalidModule(format!("field characteristic must be {}", p)));
    }
    let q = p.pow(r) as usize;
    let rho = Matrix::permutation(field, &(0..q).map(|i| (i + 1) % q).collect::<Vec<_>>())?;
    let mut sigma = Matrix::zero(field, q, q);
    let minus_one = field.from_i64(-1);
    for i in 0..q {
        sigma.set((q - i) % q, i, minus_one.clone());
    }
    Ok(Representation::new(field, q, vec![rho, sigma])?.with_label(format!("D_{}", 2 * q)))
}

/// Left translation on the basis indexed by group elements (enumeration order).
pub fn regular_representation(group: &GroupElements) -> Representation {
    let field = group.field();
    let gens = group.generators().iter().map(|&s| regular_matrix(group, s)).collect();
    Representation { field: field.clone(), dim: group.order(), generators: gens, label: Some("regular".into()) }
}

/// Matrix of left translation by element `s`.
pub fn regular_matrix(group: &GroupElements, s: usize) -> Matrix {
    let images: Vec<usize> = (0..group.order()).map(|h| group.mul(s, h)).collect();
    Matrix::permutation(group.field(), &images).expect("left translation is a permutation")
}

/// `Ind_H^G V` on blocks `t_i V` for a left transversal `t_i` (right
/// transversals are inverted). Block 0 is `V` itself.
pub fn induced_module(
    h_rep: &Representation,
    group: &GroupElements,
    cosets: &CosetDecomposition,
) -> Result<Representation> {
    let hom = subgroup_homomorphism(group, cosets.subgroup_generators(), h_rep)?;
    if hom.len() != cosets.subgroup().len() {
        return Err(Error::InconsistentGroup("subgroup data does not match the decomposition".into()));
    }
    let left = match cosets.side() {
        CosetSide::Left => cosets.clone(),
        CosetSide::Right => CosetDecomposition::left(group, cosets.subgroup_generators())?,
    };
    let field = h_rep.field();
    let m = h_rep.dim();
    let d = left.index();
    let gens = group
        .generators()
        .iter()
        .map(|&g| {
            let mut big = Matrix::zero(field, d * m, d * m);
            for i in 0..d {
                let (j, h) = left.left_action(group, g, i);
                let block = &hom[&h];
                for a in 0..m {
                    for b in 0..m {
                        big.set(j * m + a, i * m + b, block.get(a, b).clone());
                    }
                }
            }
            big
        })
        .collect();
    Ok(Representation { field: field.clone(), dim: d * m, generators: gens, label: Some("induced".into()) })
}

/// Building blocks of the additive-group modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Summand {
    /// `s e0 = e0`, `s e1 = s e0 + e1`
    Standard,
    /// the standard module precomposed with `s -> s^(p^n)`
    FrobeniusTwist { n: u32 },
    /// dual of the standard module
    Dual,
    /// `m`-th symmetric power of the standard module, basis `e0^(m-i) e1^i`
    SymmetricPower { m: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionKind {
    Additive { summands: Vec<Summand>, matrix: ParamMatrix },
    Torus { weights: Vec<i64> },
}

/// An action of the additive group (matrix in a formal parameter `s`) or of
/// the one-dimensional torus (diagonal with integer weights).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricAction {
    field: Field,
    kind: ActionKind,
}

fn binomial(n: u64, k: u64) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn summand_matrix(field: &Field, s: &Summand) -> Result<ParamMatrix> {
    let one = || UniPoly::constant(field, field.one());
    let zero = UniPoly::zero;
    match s {
        Summand::Standard => ParamMatrix::new(2, vec![one(), UniPoly::monomial(field, field.one(), 1), zero(), one()]),
        Summand::FrobeniusTwist { n } => {
            let p = field.characteristic();
            if p == 0 {
                return Err(Error::InvalidModule("Frobenius twists need positive characteristic".into()));
            }
            let e = p.checked_pow(*n).ok_or_else(|| Error::InvalidModule("twist too large".into()))?;
            ParamMatrix::new(2, vec![one(), UniPoly::monomial(field, field.one(), e as usize), zero(), one()])
        }
        Summand::Dual => ParamMatrix::new(2, vec![one(), zero(), UniPoly::monomial(field, field.from_i64(-1), 1), one()]),
        Summand::SymmetricPower { m } => {
            if field.characteristic() != 0 {
                return Err(Error::InvalidModule("symmetric powers are only supported in characteristic 0".into()));
            }
            let n = *m as usize + 1;
            let mut entries = vec![UniPoly::zero(); n * n];
            for i in 0..n {
                for j in 0..=i {
                    let c = field.from_i64(binomial(i as u64, j as u64));
                    entries[j * n + i] = UniPoly::monomial(field, c, i - j);
                }
            }
            ParamMatrix::new(n, entries)
        }
    }
}

/// Direct sum of additive-group modules, as one matrix in `s`.
pub fn additive_module(field: &Field, summands: &[Summand]) -> Result<ParametricAction> {
    if summands.is_empty() {
        return Err(Error::InvalidModule("no summands".into()));
    }
    let blocks = summands.iter().map(|s| summand_matrix(field, s)).collect::<Result<Vec<_>>>()?;
    Ok(ParametricAction {
        field: field.clone(),
        kind: ActionKind::Additive { summands: summands.to_vec(), matrix: ParamMatrix::block_diagonal(&blocks) },
    })
}

/// Torus acting by `t -> diag(t^w_1, ..., t^w_n)`.
pub fn torus_module(field: &Field, weights: &[i64]) -> Result<ParametricAction> {
    if weights.is_empty() {
        return Err(Error::InvalidModule("no weights".into()));
    }
    Ok(ParametricAction { field: field.clone(), kind: ActionKind::Torus { weights: weights.to_vec() } })
}

impl ParametricAction {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn kind(&self) -> &ActionKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ActionKind::Additive { matrix, .. } => matrix.dim(),
            ActionKind::Torus { weights } => weights.len(),
        }
    }

    /// Parameter value acting as the identity: `s = 0` or `t = 1`.
    pub fn neutral_parameter(&self) -> Elem {
        match &self.kind {
            ActionKind::Additive { .. } => self.field.zero(),
            ActionKind::Torus { .. } => self.field.one(),
        }
    }

    /// Numeric matrix for a parameter value (`t` must be nonzero for the torus).
    pub fn specialize(&self, value: &Elem) -> Result<Matrix> {
        let f = &self.field;
        match &self.kind {
            ActionKind::Additive { matrix, .. } => Ok(matrix.specialize(f, value)),
            ActionKind::Torus { weights } => {
                let inv = f.inv(value)?;
                let n = weights.len();
                let mut m = Matrix::zero(f, n, n);
                for (i, &w) in weights.iter().enumerate() {
                    let base = if w >= 0 { value } else { &inv };
                    m.set(i, i, f.pow(base, w.unsigned_abs()));
                }
                Ok(m)
            }
        }
    }
}
