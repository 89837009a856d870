//! Dense univariate polynomials, used for entries depending on a formal
//! parameter and for common-root tests.

use crate::scalars::{Elem, Field};

/// Coefficients low-to-high with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(field: &Field, c: Elem) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    /// `c * s^k`.
    pub fn monomial(field: &Field, c: Elem, k: usize) -> UniPoly {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        UniPoly::new(field, coeffs)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, field: &Field, s: &Elem) -> Elem {
        self.coeffs.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, s), c))
    }

    pub fn add(&self, field: &Field, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = field.zero();
        let coeffs = (0..n)
            .map(|i| field.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        UniPoly::new(field, coeffs)
    }

    pub fn scale(&self, field: &Field, c: &Elem) -> UniPoly {
        UniPoly::new(field, self.coeffs.iter().map(|x| field.mul(x, c)).collect())
    }

    pub fn mul(&self, field: &Field, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
        UniPoly::new(field, out)
    }

    fn monic(&self, field: &Field) -> UniPoly {
        match self.coeffs.last() {
            None => UniPoly::zero(),
            Some(lead) => self.scale(field, &field.inv(lead).expect("nonzero leading coefficient")),
        }
    }

    fn rem(&self, field: &Field, m: &UniPoly) -> UniPoly {
        let m = m.monic(field);
        let dm = m.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let lead = r.last().unwrap().clone();
            let shift = r.len() - 1 - dm;
            for (i, c) in m.coeffs.iter().enumerate() {
                r[shift + i] = field.sub(&r[shift + i], &field.mul(&lead, c));
            }
            r.pop();
            while r.last().is_some_and(|c| field.is_zero(c)) {
                r.pop();
            }
        }
        UniPoly::new(field, r)
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, field: &Field, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(field, &b);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    /// Removes all factors of `s`.
    pub fn strip_s_factors(&self, field: &Field) -> UniPoly {
        let lead_zeros = self.coeffs.iter().take_while(|c| field.is_zero(c)).count();
        UniPoly::new(field, self.coeffs[lead_zeros..].to_vec())
    }
}
