//! Exact scalars over prime fields, extension fields `F_p[t]/(m(t))`, and the rationals.
//!
//! A [`Field`] is a cheap, shareable context. Field elements are stored as [`Elem`]
//! values that only make sense together with the field that produced them; the
//! checked [`Scalar`] wrapper pairs the two for callers that want mixed-field errors.
//!
//! Extension field elements are encoded by the index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! of their coefficient vector, so enumeration order is lexicographic on the
//! coefficient vectors read low-to-high.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

const MAX_EXTENSION_ORDER: u64 = 1 << 16;
const MAX_PRIME: u64 = (1 << 31) - 1;

fn default_degree() -> u32 {
    1
}

/// Serializable description of a field: `{"p": 2, "k": 2}` with an optional
/// `"modulus"` given as coefficients low-to-high (including the leading 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    #[serde(default = "default_degree")]
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec { p: 0, k: 1, modulus: None }
    }

    pub fn finite(p: u64, k: u32) -> Self {
        FieldSpec { p, k, modulus: None }
    }
}

/// A field element. `Fin` holds the index encoding of a finite field element,
/// `Rat` a reduced rational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Fin(u32),
    Rat(BigRational),
}

impl Elem {
    pub fn fin(&self) -> u32 {
        match self {
            Elem::Fin(v) => *v,
            Elem::Rat(_) => panic!("rational element used in a finite field"),
        }
    }

    fn rat(&self) -> &BigRational {
        match self {
            Elem::Rat(r) => r,
            Elem::Fin(_) => panic!("finite field element used in the rationals"),
        }
    }
}

enum Kind {
    Rational,
    Prime { p: u64 },
    Extension { p: u32, k: u32, q: u32, exp: Vec<u32>, log: Vec<u32> },
}

struct Inner {
    spec: FieldSpec,
    kind: Kind,
}

/// Shared handle to a field.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.name())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut index: u64, p: u64, k: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(index % p);
        index /= p;
    }
    out
}

fn undigits(ds: &[u64], p: u64) -> u64 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p (coefficients low-to-high).
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

/// Irreducibility over F_p by trial division with every monic polynomial of
/// degree at most half the degree.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 0 {
        return false;
    }
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = digits(low, p, d as u32);
            g.push(1);
            if poly_rem(m, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `k` over F_p, ordering the
/// non-leading coefficient vectors the same way field elements are enumerated.
pub(crate) fn default_modulus(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for low in 0..count {
        let mut m = digits(low, p, k);
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field> {
        if spec.p == 0 {
            if spec.k != 1 || spec.modulus.is_some() {
                return Err(Error::InvalidField("the rationals have degree 1 and no modulus".into()));
            }
            return Ok(Field(Arc::new(Inner { spec, kind: Kind::Rational })));
        }
        if !is_prime(spec.p) {
            return Err(Error::InvalidField(format!("{} is not prime", spec.p)));
        }
        if spec.p > MAX_PRIME {
            return Err(Error::InvalidField(format!("prime {} too large", spec.p)));
        }
        if spec.k == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        let p = spec.p;
        if spec.k == 1 {
            if spec.modulus.is_some() {
                return Err(Error::InvalidField("prime fields carry no modulus".into()));
            }
            return Ok(Field(Arc::new(Inner { spec, kind: Kind::Prime { p } })));
        }
        let k = spec.k;
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_EXTENSION_ORDER)
            .ok_or_else(|| Error::InvalidField(format!("extension field {}^{} too large", p, k)))?;
        let modulus = match &spec.modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || *m.last().unwrap() != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField(
                        "modulus must be monic of degree k with coefficients in [0, p)".into(),
                    ));
                }
                if !is_irreducible(m, p) {
                    return Err(Error::InvalidField("modulus is reducible".into()));
                }
                m.clone()
            }
            None => default_modulus(p, k),
        };
        let (exp, log) = build_log_tables(p, k, q, &modulus);
        let spec = FieldSpec { p, k, modulus: Some(modulus) };
        Ok(Field(Arc::new(Inner {
            spec,
            kind: Kind::Extension { p: p as u32, k, q: q as u32, exp, log },
        })))
    }

    pub fn rationals() -> Field {
        Field::new(FieldSpec::rationals()).expect("rationals")
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::new(FieldSpec::finite(p, 1))
    }

    pub fn extension(p: u64, k: u32) -> Result<Field> {
        Field::new(FieldSpec::finite(p, k))
    }

    /// The finite field with `q` elements (default modulus), or the rationals for `q = 0`.
    pub fn of_order(q: u64) -> Result<Field> {
        if q == 0 {
            return Ok(Field::rationals());
        }
        let factors = prime_factors(q);
        if factors.len() != 1 {
            return Err(Error::InvalidField(format!("{} is not a prime power", q)));
        }
        let p = factors[0];
        let mut k = 0u32;
        let mut r = q;
        while r > 1 {
            r /= p;
            k += 1;
        }
        Field::extension(p, k)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u64 {
        self.0.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.k
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match &self.0.kind {
            Kind::Rational => None,
            Kind::Prime { p } => Some(*p),
            Kind::Extension { q, .. } => Some(*q as u64),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.0.kind, Kind::Rational)
    }

    pub fn name(&self) -> String {
        match self.order() {
            None => "Q".to_string(),
            Some(q) => format!("F_{}", q),
        }
    }

    pub fn zero(&self) -> Elem {
        match self.0.kind {
            Kind::Rational => Elem::Rat(BigRational::zero()),
            _ => Elem::Fin(0),
        }
    }

    pub fn one(&self) -> Elem {
        match self.0.kind {
            Kind::Rational => Elem::Rat(BigRational::one()),
            _ => Elem::Fin(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match self.0.kind {
            Kind::Rational => Elem::Rat(BigRational::from_integer(BigInt::from(n))),
            _ => {
                let p = self.characteristic() as i64;
                Elem::Fin(n.rem_euclid(p) as u32)
            }
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        match self.0.kind {
            Kind::Rational => Ok(Elem::Rat(r.clone())),
            _ => {
                let p = BigInt::from(self.characteristic());
                let num = self.from_i64(r.numer().mod_floor(&p).to_i64().unwrap());
                let den = self.from_i64(r.denom().mod_floor(&p).to_i64().unwrap());
                self.div(&num, &den)
            }
        }
    }

    /// Finite field element from its index encoding.
    pub fn from_index(&self, index: u64) -> Result<Elem> {
        match self.order() {
            Some(q) if index < q => Ok(Elem::Fin(index as u32)),
            Some(_) => Err(Error::InvalidField(format!("index {} out of range", index))),
            None => Err(Error::CharacteristicZero),
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Fin(v) => *v == 0,
            Elem::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        match a {
            Elem::Fin(v) => *v == 1,
            Elem::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Rational => Elem::Rat(a.rat() + b.rat()),
            _ => Elem::Fin(self.add_u32(a.fin(), b.fin())),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Rational => Elem::Rat(a.rat() - b.rat()),
            _ => Elem::Fin(self.add_u32(a.fin(), self.neg_u32(b.fin()))),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Rational => Elem::Rat(-a.rat()),
            _ => Elem::Fin(self.neg_u32(a.fin())),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Rational => Elem::Rat(a.rat() * b.rat()),
            _ => Elem::Fin(self.mul_u32(a.fin(), b.fin())),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.kind {
            Kind::Rational => Elem::Rat(a.rat().recip()),
            Kind::Prime { p } => Elem::Fin(pow_mod(a.fin() as u64, p - 2, *p) as u32),
            Kind::Extension { q, exp, log, .. } => {
                let l = log[a.fin() as usize];
                Elem::Fin(exp[((q - 1 - l) % (q - 1)) as usize])
            }
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a^(p^n)`.
    pub fn frobenius(&self, a: &Elem, n: u32) -> Result<Elem> {
        let p = self.characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        let mut x = a.clone();
        for _ in 0..n {
            x = self.pow(&x, p);
        }
        Ok(x)
    }

    /// All elements in index order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let q = self.order().ok_or(Error::CharacteristicZero)?;
        Ok((0..q as u32).map(Elem::Fin).collect())
    }

    /// Multiplicative order of a nonzero element of a finite field.
    pub fn multiplicative_order(&self, a: &Elem) -> Option<u64> {
        let q = self.order()?;
        if self.is_zero(a) {
            return None;
        }
        let mut order = q - 1;
        for l in prime_factors(q - 1) {
            while order % l == 0 && self.is_one(&self.pow(a, order / l)) {
                order /= l;
            }
        }
        Some(order)
    }

    /// First element (in enumeration order) of multiplicative order exactly `r`.
    pub fn root_of_unity(&self, r: u64) -> Result<Elem> {
        let q = self.order().ok_or(Error::CharacteristicZero)?;
        let p = self.characteristic();
        if r == 0 || r % p == 0 {
            return Err(Error::InvalidField(format!("order {} is not coprime to {}", r, p)));
        }
        if (q - 1) % r != 0 {
            return Err(Error::NoRootOfUnity(r));
        }
        for i in 1..q {
            let a = Elem::Fin(i as u32);
            if self.multiplicative_order(&a) == Some(r) {
                return Ok(a);
            }
        }
        Err(Error::NoRootOfUnity(r))
    }

    /// Maps an element of `src` into this field. Supported: identical fields and
    /// the prime field of the same characteristic into an extension.
    pub fn embed(&self, src: &Field, a: &Elem) -> Result<Elem> {
        if src == self {
            return Ok(a.clone());
        }
        if src.characteristic() == self.characteristic() && src.degree() == 1 && self.is_finite() {
            return Ok(a.clone());
        }
        Err(Error::FieldMismatch)
    }

    /// Whether every element of `src` has a canonical image under [`Field::embed`].
    pub fn can_embed(&self, src: &Field) -> bool {
        src == self
            || (src.is_finite() && src.characteristic() == self.characteristic() && src.degree() == 1)
    }

    /// Human-readable encoding: integers for prime fields, `a/b` for rationals,
    /// and polynomials in `t` (low-to-high) for extension fields.
    pub fn format(&self, a: &Elem) -> String {
        match &self.0.kind {
            Kind::Rational => a.rat().to_string(),
            Kind::Prime { .. } => a.fin().to_string(),
            Kind::Extension { p, k, .. } => {
                let ds = digits(a.fin() as u64, *p as u64, *k);
                let parts: Vec<String> = ds
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "t".to_string(),
                        (1, c) => format!("{}t", c),
                        (i, 1) => format!("t^{}", i),
                        (i, c) => format!("{}t^{}", c, i),
                    })
                    .collect();
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join("+")
                }
            }
        }
    }

    /// JSON encoding: integer (prime field), coefficient list low-to-high
    /// (extension field), integer or `"a/b"` string (rationals).
    pub fn encode_json(&self, a: &Elem) -> Value {
        match &self.0.kind {
            Kind::Rational => {
                let r = a.rat();
                if r.is_integer() {
                    if let Some(v) = r.numer().to_i64() {
                        return Value::from(v);
                    }
                }
                Value::String(r.to_string())
            }
            Kind::Prime { .. } => Value::from(a.fin()),
            Kind::Extension { p, k, .. } => {
                Value::from(digits(a.fin() as u64, *p as u64, *k))
            }
        }
    }

    pub fn decode_json(&self, v: &Value) -> Result<Elem> {
        let bad = || Error::Config(format!("cannot read {} as an element of {}", v, self.name()));
        match (&self.0.kind, v) {
            (Kind::Rational, Value::Number(n)) => {
                n.as_i64().map(|i| self.from_i64(i)).ok_or_else(bad)
            }
            (Kind::Rational, Value::String(s)) => {
                let r: BigRational = s.trim().parse().map_err(|_| bad())?;
                Ok(Elem::Rat(r))
            }
            (Kind::Prime { .. }, Value::Number(n)) => {
                n.as_i64().map(|i| self.from_i64(i)).ok_or_else(bad)
            }
            (Kind::Extension { p, .. }, Value::Number(n)) => {
                let i = n.as_i64().ok_or_else(bad)?;
                if i >= 0 && (i as u64) < (*p as u64) {
                    Ok(Elem::Fin(i as u32))
                } else if i < 0 && i > -(*p as i64) {
                    Ok(self.from_i64(i))
                } else {
                    Err(bad())
                }
            }
            (Kind::Extension { p, k, .. }, Value::Array(items)) => {
                if items.len() > *k as usize {
                    return Err(bad());
                }
                let mut ds = Vec::with_capacity(*k as usize);
                for it in items {
                    let c = it.as_i64().ok_or_else(bad)?;
                    ds.push(c.rem_euclid(*p as i64) as u64);
                }
                ds.resize(*k as usize, 0);
                Ok(Elem::Fin(undigits(&ds, *p as u64) as u32))
            }
            _ => Err(bad()),
        }
    }

    #[inline]
    pub(crate) fn add_u32(&self, a: u32, b: u32) -> u32 {
        match &self.0.kind {
            Kind::Prime { p } => {
                let s = a as u64 + b as u64;
                (if s >= *p { s - p } else { s }) as u32
            }
            Kind::Extension { p, k, .. } => {
                if *p == 2 {
                    return a ^ b;
                }
                let (mut a, mut b) = (a, b);
                let mut out = 0u32;
                let mut scale = 1u32;
                for _ in 0..*k {
                    let d = (a % p + b % p) % p;
                    out += d * scale;
                    scale *= p;
                    a /= p;
                    b /= p;
                }
                out
            }
            Kind::Rational => unreachable!(),
        }
    }

    #[inline]
    pub(crate) fn neg_u32(&self, a: u32) -> u32 {
        match &self.0.kind {
            Kind::Prime { p } => ((*p - a as u64) % p) as u32,
            Kind::Extension { p, k, .. } => {
                if *p == 2 {
                    return a;
                }
                let mut a = a;
                let mut out = 0u32;
                let mut scale = 1u32;
                for _ in 0..*k {
                    out += ((p - a % p) % p) * scale;
                    scale *= p;
                    a /= p;
                }
                out
            }
            Kind::Rational => unreachable!(),
        }
    }

    #[inline]
    pub(crate) fn mul_u32(&self, a: u32, b: u32) -> u32 {
        match &self.0.kind {
            Kind::Prime { p } => ((a as u64 * b as u64) % p) as u32,
            Kind::Extension { q, exp, log, .. } => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let s = log[a as usize] + log[b as usize];
                let m = q - 1;
                exp[(if s >= m { s - m } else { s }) as usize]
            }
            Kind::Rational => unreachable!(),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Discrete exp/log tables over a primitive element, found by search.
fn build_log_tables(p: u64, k: u32, q: u64, modulus: &[u64]) -> (Vec<u32>, Vec<u32>) {
    let one = {
        let mut v = vec![0u64; k as usize];
        v[0] = 1;
        v
    };
    for cand in 2..q {
        let g = digits(cand, p, k);
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut x = one.clone();
        let mut order = 0u64;
        loop {
            exp.push(undigits(&x, p) as u32);
            x = poly_mulmod(&x, &g, modulus, p);
            order += 1;
            if x == one {
                break;
            }
        }
        if order == q - 1 {
            let mut log = vec![0u32; q as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            return (exp, log);
        }
    }
    // F_{p^k} with q - 1 = 1 cannot occur for k > 1
    unreachable!("multiplicative group is cyclic")
}

/// A field element bundled with its field, with checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    field: Field,
    value: Elem,
}

impl Scalar {
    pub fn new(field: &Field, value: Elem) -> Scalar {
        Scalar { field: field.clone(), value }
    }

    pub fn from_i64(field: &Field, n: i64) -> Scalar {
        Scalar::new(field, field.from_i64(n))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn into_value(self) -> Elem {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    fn same(&self, other: &Scalar) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.same(other)?;
        Ok(Scalar::new(&self.field, self.field.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same(other)?;
        Ok(Scalar::new(&self.field, self.field.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same(other)?;
        Ok(Scalar::new(&self.field, self.field.mul(&self.value, &other.value)))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.same(other)?;
        Ok(Scalar::new(&self.field, self.field.div(&self.value, &other.value)?))
    }

    pub fn neg(&self) -> Scalar {
        Scalar::new(&self.field, self.field.neg(&self.value))
    }

    pub fn inv(&self) -> Result<Scalar> {
        Ok(Scalar::new(&self.field, self.field.inv(&self.value)?))
    }

    pub fn pow(&self, e: u64) -> Scalar {
        Scalar::new(&self.field, self.field.pow(&self.value, e))
    }

    pub fn frobenius(&self, n: u32) -> Result<Scalar> {
        Ok(Scalar::new(&self.field, self.field.frobenius(&self.value, n)?))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}
