//! Sparse multivariate polynomials over a [`Field`].
//!
//! Monomials are exponent vectors ordered graded-lexicographically (`x1 > x2 > ...`).
//! Polynomials never store zero coefficients, so structural equality is
//! polynomial equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, ParamMatrix};
use crate::scalars::{Elem, Field, Scalar};

/// Exponent vector of fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * e).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn text(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
            .collect();
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `n` variables, leading (largest) first.
pub fn homogeneous_slice_basis(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(n, i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(n, 0, d, &mut vec![0; n], &mut out);
    out
}

/// A change of coordinates `x_i -> sum_j A_ij x_j`, numeric or depending on a
/// formal parameter `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSubstitution {
    Numeric(Matrix),
    Parametric(ParamMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Elem>,
}

/// One multihomogeneous component of a polarization, indexed by the exponents
/// of the auxiliary parameters `t_1, ..., t_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    pub index: Vec<u32>,
    pub poly: Polynomial,
}

impl Polynomial {
    pub fn zero(field: &Field, nvars: usize) -> Polynomial {
        Polynomial { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: Elem) -> Polynomial {
        Polynomial::from_terms(field, nvars, [(Monomial::one(nvars), c)])
    }

    pub fn one(field: &Field, nvars: usize) -> Polynomial {
        Polynomial::constant(field, nvars, field.one())
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Polynomial {
        Polynomial::from_terms(field, nvars, [(Monomial::var(nvars, i), field.one())])
    }

    pub fn monomial(field: &Field, m: Monomial, c: Elem) -> Polynomial {
        let n = m.nvars();
        Polynomial::from_terms(field, n, [(m, c)])
    }

    /// Sums the given terms; repeated monomials are combined and zeros dropped.
    pub fn from_terms(
        field: &Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Elem)>,
    ) -> Polynomial {
        let mut p = Polynomial::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial length does not match variable count");
            p.add_term(m, &c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Elem) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = self.field.add(v, c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&other.neg_poly())
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let f = &self.field;
        let mut out = Polynomial::zero(f, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    fn neg_poly(&self) -> Polynomial {
        let f = &self.field;
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Elem) -> Polynomial {
        let f = &self.field;
        Polynomial::from_terms(f, self.nvars, self.terms.iter().map(|(m, x)| (m.clone(), f.mul(x, c))))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.field, self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn homogeneous_component(&self, d: u32) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn evaluate(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn evaluate_scalars(&self, point: &[Scalar]) -> Result<Scalar> {
        let mut vals = Vec::with_capacity(point.len());
        for s in point {
            if s.field() != &self.field {
                return Err(Error::FieldMismatch);
            }
            vals.push(s.value().clone());
        }
        Ok(Scalar::new(&self.field, self.evaluate(&vals)?))
    }

    /// `f(g_1, ..., g_n)` for polynomials `g_i` sharing a variable count.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: subs.len() });
        }
        let Some(first) = subs.first() else {
            return Ok(self.clone());
        };
        let m = first.nvars;
        for s in subs {
            if s.field != self.field {
                return Err(Error::FieldMismatch);
            }
            if s.nvars != m {
                return Err(Error::DimensionMismatch { expected: m, got: s.nvars });
            }
        }
        let mut cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(&self.field, m);
        for (mono, c) in &self.terms {
            let mut t = Polynomial::constant(&self.field, m, c.clone());
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((i, e)).or_insert_with(|| subs[i].pow(e));
                t = &t * &*pw;
                if t.is_zero() {
                    break;
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, &cc);
            }
        }
        Ok(out)
    }

    /// `f o A`, i.e. `x_i -> sum_j A_ij x_j`. Contravariant:
    /// `f o (A B) = (f o A) o B`.
    pub fn substitute_linear(&self, a: &Matrix) -> Result<Polynomial> {
        if !a.is_square() || a.rows() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: a.rows() });
        }
        let f = &self.field;
        if let Some(rows) = a.monomial_rows(f) {
            let mut out = Polynomial::zero(f, self.nvars);
            for (mono, c) in &self.terms {
                let mut exps = vec![0u32; self.nvars];
                let mut coef = c.clone();
                for (i, &e) in mono.exponents().iter().enumerate() {
                    if e > 0 {
                        let (j, ref v) = rows[i];
                        exps[j] += e;
                        coef = f.mul(&coef, &f.pow(v, e as u64));
                    }
                }
                out.add_term(Monomial(exps), &coef);
            }
            return Ok(out);
        }
        let forms: Vec<Polynomial> = (0..self.nvars)
            .map(|i| {
                Polynomial::from_terms(
                    f,
                    self.nvars,
                    (0..self.nvars).map(|j| (Monomial::var(self.nvars, j), a.get(i, j).clone())),
                )
            })
            .collect();
        self.compose(&forms)
    }

    /// `f o A(s)` as a polynomial in `n + 1` variables, the last one being `s`.
    pub fn substitute_parametric(&self, a: &ParamMatrix) -> Result<Polynomial> {
        let n = self.nvars;
        if a.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.dim() });
        }
        let f = &self.field;
        let forms: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut form = Polynomial::zero(f, n + 1);
                for j in 0..n {
                    for (k, c) in a.get(i, j).coeffs().iter().enumerate() {
                        let mut e = vec![0u32; n + 1];
                        e[j] = 1;
                        e[n] = k as u32;
                        form.add_term(Monomial(e), c);
                    }
                }
                form
            })
            .collect();
        self.compose(&forms)
    }

    pub fn substitute(&self, sub: &LinearSubstitution) -> Result<Polynomial> {
        match sub {
            LinearSubstitution::Numeric(m) => self.substitute_linear(m),
            LinearSubstitution::Parametric(m) => self.substitute_parametric(m),
        }
    }

    /// Splits off the last variable: `f = sum_k s^k f_k`, returning the nonzero `f_k`
    /// (each in one fewer variable).
    pub fn coefficients_in_last_variable(&self) -> BTreeMap<u32, Polynomial> {
        let n = self.nvars - 1;
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0[n];
            out.entry(k)
                .or_insert_with(|| Polynomial::zero(&self.field, n))
                .add_term(Monomial(m.0[..n].to_vec()), c);
        }
        out
    }

    /// Renames variable `i` to `map[i]` in a ring with `nvars` variables.
    pub fn remap_variables(&self, nvars: usize, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let mut out = Polynomial::zero(&self.field, nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Same polynomial with coefficients mapped into `to`.
    pub fn embed_field(&self, to: &Field) -> Result<Polynomial> {
        let mut out = Polynomial::zero(to, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &to.embed(&self.field, c)?);
        }
        Ok(out)
    }

    /// Coordinates with respect to an indexed monomial basis. Panics when a
    /// monomial is missing from the index.
    pub fn coefficient_vector(&self, index: &HashMap<Monomial, usize>, len: usize) -> Vec<Elem> {
        let mut v = vec![self.field.zero(); len];
        for (m, c) in &self.terms {
            v[index[m]] = c.clone();
        }
        v
    }

    pub fn from_coefficient_vector(field: &Field, nvars: usize, basis: &[Monomial], v: &[Elem]) -> Polynomial {
        Polynomial::from_terms(field, nvars, basis.iter().cloned().zip(v.iter().cloned()))
    }

    /// Whether `f o A = f`.
    pub fn is_fixed_by(&self, a: &Matrix) -> Result<bool> {
        Ok(&self.substitute_linear(a)? == self)
    }

    /// Polarizations of `f` to `copies` copies of its coordinate space.
    ///
    /// Expands `f(t_1 u_1 + ... + t_n u_n)` and returns the nonzero coefficient of
    /// every `t`-monomial. Copy `j` occupies variables `j*m .. (j+1)*m` where
    /// `m = f.nvars()`. Components are listed with the multi-index in descending
    /// lexicographic order.
    pub fn polarize(&self, copies: usize) -> Result<Vec<Polarization>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let m = self.nvars;
        let n = copies;
        let total = n + n * m;
        let f = &self.field;
        let forms: Vec<Polynomial> = (0..m)
            .map(|i| {
                Polynomial::from_terms(
                    f,
                    total,
                    (0..n).map(|j| {
                        let mut e = vec![0u32; total];
                        e[j] = 1;
                        e[n + j * m + i] = 1;
                        (Monomial(e), f.one())
                    }),
                )
            })
            .collect();
        let expanded = self.compose(&forms)?;
        let mut parts: BTreeMap<Vec<u32>, Polynomial> = BTreeMap::new();
        for (mono, c) in &expanded.terms {
            let idx = mono.0[..n].to_vec();
            parts
                .entry(idx)
                .or_insert_with(|| Polynomial::zero(f, n * m))
                .add_term(Monomial(mono.0[n..].to_vec()), c);
        }
        Ok(parts
            .into_iter()
            .rev()
            .filter(|(_, p)| !p.is_zero())
            .map(|(index, poly)| Polarization { index, poly })
            .collect())
    }

    /// Canonical text: terms `c*x1^e1*...` with the leading term first.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut cs = f.format(c);
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if cs.contains('+') {
                cs = format!("({})", cs);
            }
            let sep = match (i, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sep);
            out.push_str(&cs);
            let mt = m.text();
            if !mt.is_empty() {
                out.push('*');
                out.push_str(&mt);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomials from different rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomials from different rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomials from different rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_poly()
    }
}
