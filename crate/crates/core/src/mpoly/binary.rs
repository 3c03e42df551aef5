//! Dense univariate polynomials and binary (two-variable homogeneous) forms.
//!
//! Binary forms carry an explicit formal degree so that zero entries inside
//! graded matrices (Sylvester blocks) keep their grading; a form of degree n
//! stores n+1 coefficients, coefficient i belonging to u^(n-i) v^i.

use crate::rings::{Field, Ring, RingError};

#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<R: Ring> {
    ring: R,
    /// Ascending coefficients with no trailing zeros; empty means zero.
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(ring: R, mut coeffs: Vec<R::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { ring, coeffs }
    }

    pub fn zero(ring: R) -> Self {
        UniPoly { ring, coeffs: vec![] }
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        Self::new(ring.clone(), vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ring.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Self::new(self.ring.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ring.sub(&self.coeff(i), &other.coeff(i)))
            .collect();
        Self::new(self.ring.clone(), coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring.clone());
        }
        let mut out = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.ring.add(&out[i + j], &self.ring.mul(a, b));
            }
        }
        Self::new(self.ring.clone(), out)
    }

    pub fn scale(&self, s: &R::Elem) -> Self {
        Self::new(
            self.ring.clone(),
            self.coeffs.iter().map(|c| self.ring.mul(c, s)).collect(),
        )
    }

    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ring.add(&self.ring.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.ring.mul(c, &self.ring.from_i64(i as i64)))
            .collect();
        Self::new(self.ring.clone(), coeffs)
    }
}

impl<F: Field> UniPoly<F> {
    /// Long division: returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), RingError> {
        if divisor.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let f = &self.ring;
        let dlead = f.inv(divisor.leading().unwrap())?;
        let dd = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quo = vec![f.zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = f.mul(rem.leading().unwrap(), &dlead);
            let shift = rd - dd;
            quo[shift] = f.add(&quo[shift], &factor);
            let mut coeffs = rem.coeffs.clone();
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                coeffs[shift + i] = f.sub(&coeffs[shift + i], &f.mul(&factor, dc));
            }
            rem = Self::new(f.clone(), coeffs);
        }
        Ok((Self::new(f.clone(), quo), rem))
    }

    /// Monic normalization; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = self.ring.inv(l).expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("divisor nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Homogeneous binary form of a fixed formal degree.
#[derive(Clone, PartialEq, Debug)]
pub struct BinaryForm<R: Ring> {
    ring: R,
    degree: usize,
    /// Exactly degree+1 coefficients; index i is the u^(degree-i) v^i term.
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> BinaryForm<R> {
    pub fn new(ring: R, degree: usize, coeffs: Vec<R::Elem>) -> Self {
        assert_eq!(coeffs.len(), degree + 1, "binary form coefficient count");
        BinaryForm { ring, degree, coeffs }
    }

    pub fn zero(ring: R, degree: usize) -> Self {
        let coeffs = vec![ring.zero(); degree + 1];
        BinaryForm { ring, degree, coeffs }
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        BinaryForm { ring, degree: 0, coeffs: vec![c] }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &R::Elem {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// A zero form is degree-polymorphic in additive operations: mixing
    /// formal degrees is allowed only when one operand is zero (graded
    /// matrix algorithms rely on this).
    pub fn add(&self, other: &Self) -> Self {
        if self.degree != other.degree {
            if self.is_zero() {
                return other.clone();
            }
            if other.is_zero() {
                return self.clone();
            }
            panic!("degree mismatch in binary add");
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        BinaryForm { ring: self.ring.clone(), degree: self.degree, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        if self.degree != other.degree {
            if other.is_zero() {
                return self.clone();
            }
            if self.is_zero() {
                return other.neg();
            }
            panic!("degree mismatch in binary sub");
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        BinaryForm { ring: self.ring.clone(), degree: self.degree, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![self.ring.zero(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = self.ring.add(&coeffs[i + j], &self.ring.mul(a, b));
            }
        }
        BinaryForm { ring: self.ring.clone(), degree, coeffs }
    }

    pub fn scale(&self, s: &R::Elem) -> Self {
        BinaryForm {
            ring: self.ring.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| self.ring.mul(c, s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        BinaryForm {
            ring: self.ring.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
        }
    }

    pub fn eval(&self, u: &R::Elem, v: &R::Elem) -> R::Elem {
        let mut acc = self.ring.zero();
        // sum c_i u^(n-i) v^i via two running powers
        let mut upow = vec![self.ring.one()];
        let mut vpow = vec![self.ring.one()];
        for k in 1..=self.degree {
            upow.push(self.ring.mul(&upow[k - 1], u));
            vpow.push(self.ring.mul(&vpow[k - 1], v));
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            let t = self.ring.mul(c, &self.ring.mul(&upow[self.degree - i], &vpow[i]));
            acc = self.ring.add(&acc, &t);
        }
        acc
    }

    pub fn derivative_u(&self) -> Self {
        assert!(self.degree >= 1);
        let coeffs = (0..self.degree)
            .map(|i| {
                self.ring
                    .mul(&self.coeffs[i], &self.ring.from_i64((self.degree - i) as i64))
            })
            .collect();
        BinaryForm { ring: self.ring.clone(), degree: self.degree - 1, coeffs }
    }

    pub fn derivative_v(&self) -> Self {
        assert!(self.degree >= 1);
        let coeffs = (1..=self.degree)
            .map(|i| self.ring.mul(&self.coeffs[i], &self.ring.from_i64(i as i64)))
            .collect();
        BinaryForm { ring: self.ring.clone(), degree: self.degree - 1, coeffs }
    }

    /// Multiplicity of the root [0:1], the power of u dividing the form.
    pub fn u_multiplicity(&self) -> usize {
        debug_assert!(!self.is_zero());
        let last_nonzero = self
            .coeffs
            .iter()
            .rposition(|c| !self.ring.is_zero(c))
            .expect("nonzero form");
        self.degree - last_nonzero
    }

    /// Dehomogenization f(1, t).
    pub fn dehomogenize(&self) -> UniPoly<R> {
        UniPoly::new(self.ring.clone(), self.coeffs.clone())
    }

    /// Rebuild a form of the given degree from f(1,t), padding with u powers.
    pub fn homogenize(ring: R, degree: usize, p: &UniPoly<R>) -> Self {
        let mut coeffs = vec![ring.zero(); degree + 1];
        for (i, c) in p.coeffs().iter().enumerate() {
            assert!(i <= degree, "polynomial degree exceeds form degree");
            coeffs[i] = c.clone();
        }
        BinaryForm { ring, degree, coeffs }
    }
}

impl<F: Field> BinaryForm<F> {
    /// Greatest common divisor as a binary form (monic in its trailing
    /// coefficient convention): combines the univariate gcd of the
    /// dehomogenizations with the shared power of u.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let ua = self.u_multiplicity();
        let ub = other.u_multiplicity();
        let g = self.dehomogenize().gcd(&other.dehomogenize());
        let gdeg = g.degree().unwrap_or(0);
        let shared_u = ua.min(ub);
        Self::homogenize(self.ring.clone(), gdeg + shared_u, &g)
    }

    /// Exact division; the divisor must divide exactly, which the caller
    /// guarantees (Bareiss updates, perfect-power extraction).
    pub fn div_exact(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by the zero form");
        if self.is_zero() {
            return Self::zero(self.ring.clone(), self.degree.saturating_sub(divisor.degree));
        }
        assert!(self.degree >= divisor.degree, "degree underflow in division");
        let target = self.degree - divisor.degree;
        let (q, r) = self
            .dehomogenize()
            .div_rem(&divisor.dehomogenize())
            .expect("nonzero divisor");
        assert!(r.is_zero(), "inexact binary form division");
        Self::homogenize(self.ring.clone(), target, &q)
    }

    /// True if the form has no repeated root over the algebraic closure.
    /// Uses gcd of the two partials; valid when the characteristic does not
    /// divide the degree.
    pub fn is_squarefree(&self) -> bool {
        assert!(!self.is_zero());
        if self.degree == 0 {
            return true;
        }
        if self.degree == 1 {
            return true;
        }
        let g = self.derivative_u().gcd(&self.derivative_v());
        g.degree() == 0
    }

    /// If the form equals c * L^degree for a linear form L, returns the
    /// coefficients (l_u, l_v) of L; otherwise None.
    pub fn as_line_power(&self) -> Option<(F::Elem, F::Elem)> {
        let f = &self.ring;
        let n = self.degree;
        assert!(n >= 1);
        if self.is_zero() {
            return None;
        }
        let c0 = &self.coeffs[0];
        if f.is_zero(c0) {
            // the only possibility is c * v^n
            if self.coeffs[1..n].iter().all(|c| f.is_zero(c)) && !f.is_zero(&self.coeffs[n]) {
                return Some((f.zero(), f.one()));
            }
            return None;
        }
        // normalize L = u + b v; from c*n*b = coeffs[1]/coeffs[0] * ... :
        // coeffs[1] = c * n * b with c = coeffs[0]
        let nb = f.div(&self.coeffs[1], c0).expect("nonzero constant");
        let b = f
            .div(&nb, &f.from_i64(n as i64))
            .expect("characteristic does not divide degree");
        // verify self == c0 * (u + b v)^n
        let line = BinaryForm::new(f.clone(), 1, vec![f.one(), b.clone()]);
        let mut pw = BinaryForm::constant(f.clone(), f.one());
        for _ in 0..n {
            pw = pw.mul(&line);
        }
        if &pw.scale(c0) == self {
            Some((f.one(), b))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{rat, Rationals};

    fn up(coeffs: &[i64]) -> UniPoly<Rationals> {
        UniPoly::new(Rationals, coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn div_rem_roundtrip() {
        let f = up(&[2, 0, -3, 1]); // x^3 - 3x^2 + 2
        let g = up(&[-1, 1]); // x - 1
        let (q, r) = f.div_rem(&g).unwrap();
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.is_zero()); // 1 is a root
    }

    #[test]
    fn gcd_of_common_factor() {
        let a = up(&[-1, 1]).mul(&up(&[2, 1]));
        let b = up(&[-1, 1]).mul(&up(&[5, 3]));
        assert_eq!(a.gcd(&b), up(&[-1, 1]).monic());
    }

    #[test]
    fn binary_form_gcd_with_u_factor() {
        let q = Rationals;
        // f = u^2 * (u + v), g = u * (u + 2v)
        let u = BinaryForm::new(q, 1, vec![rat(1, 1), rat(0, 1)]);
        let upv = BinaryForm::new(q, 1, vec![rat(1, 1), rat(1, 1)]);
        let up2v = BinaryForm::new(q, 1, vec![rat(1, 1), rat(2, 1)]);
        let f = u.mul(&u).mul(&upv);
        let g = u.mul(&up2v);
        let d = f.gcd(&g);
        assert_eq!(d.degree(), 1);
        assert_eq!(d.u_multiplicity(), 1);
    }

    #[test]
    fn squarefree_detection() {
        let q = Rationals;
        let u = BinaryForm::new(q, 1, vec![rat(1, 1), rat(0, 1)]);
        let v = BinaryForm::new(q, 1, vec![rat(0, 1), rat(1, 1)]);
        let upv = BinaryForm::new(q, 1, vec![rat(1, 1), rat(1, 1)]);
        assert!(u.mul(&v).is_squarefree());
        assert!(!u.mul(&u).is_squarefree());
        assert!(u.mul(&v).mul(&upv).is_squarefree());
    }

    #[test]
    fn line_power_extraction() {
        let q = Rationals;
        // (2u - 3v)^3 scaled by 5
        let l = BinaryForm::new(q, 1, vec![rat(2, 1), rat(-3, 1)]);
        let f = l.mul(&l).mul(&l).scale(&rat(5, 1));
        let (lu, lv) = f.as_line_power().unwrap();
        // normalized to u + b v with b = -3/2
        assert_eq!(lu, rat(1, 1));
        assert_eq!(lv, rat(-3, 2));
        // v^4
        let v = BinaryForm::new(q, 1, vec![rat(0, 1), rat(1, 1)]);
        let f = v.mul(&v).mul(&v).mul(&v);
        assert_eq!(f.as_line_power().unwrap(), (rat(0, 1), rat(1, 1)));
        // mixed form is not a line power
        let u = BinaryForm::new(q, 1, vec![rat(1, 1), rat(0, 1)]);
        assert!(u.mul(&v).as_line_power().is_none());
    }
}
