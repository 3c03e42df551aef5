//! Sparse homogeneous ternary forms over a pluggable coefficient ring, with
//! the polynomial operations the branch-curve pipeline needs: derivatives,
//! evaluation, composition with a conic parametrization, exact divisibility,
//! and Sylvester resultants.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::rings::{Field, Ring, RingError, RingHom, TowerElement};

mod binary;
mod conic;
mod resultant;

pub use binary::{BinaryForm, UniPoly};
pub use conic::{compose_with_parametrization, ConicParametrization};
pub use resultant::{forms_coprime, resultant};

/// Exponent triple (i, j, k) for x^i y^j z^k.
pub type Exp = [u16; 3];

pub const VAR_NAMES: [char; 3] = ['x', 'y', 'z'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MPolyError {
    #[error("exponents {0:?} sum to {1}, expected degree {2}")]
    BadTerm(Exp, usize, usize),
    #[error("invalid projective point: all coordinates are zero")]
    InvalidPoint,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("the eliminated variable appears in neither operand")]
    NoEliminatedVariable,
    #[error("parametrization does not trace a conic")]
    DegenerateParametrization,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A homogeneous polynomial in x, y, z. Terms are stored sparsely keyed by
/// exponent triple; the BTreeMap order is lexicographic ascending, so
/// iteration (and printing, reversed) is canonical.
#[derive(Clone, PartialEq)]
pub struct HomogeneousPoly<R: Ring> {
    ring: R,
    degree: usize,
    terms: BTreeMap<Exp, R::Elem>,
}

impl<R: Ring> HomogeneousPoly<R> {
    pub fn new<I>(ring: R, degree: usize, terms: I) -> Result<Self, MPolyError>
    where
        I: IntoIterator<Item = (Exp, R::Elem)>,
    {
        let mut map: BTreeMap<Exp, R::Elem> = BTreeMap::new();
        for (e, c) in terms {
            let total = e.iter().map(|&x| x as usize).sum::<usize>();
            if total != degree {
                return Err(MPolyError::BadTerm(e, total, degree));
            }
            let entry = map.entry(e).or_insert_with(|| ring.zero());
            *entry = ring.add(entry, &c);
        }
        map.retain(|_, c| !ring.is_zero(c));
        Ok(HomogeneousPoly { ring, degree, terms: map })
    }

    pub fn zero(ring: R, degree: usize) -> Self {
        HomogeneousPoly { ring, degree, terms: BTreeMap::new() }
    }

    /// The monomial c * x^i y^j z^k.
    pub fn monomial(ring: R, e: Exp, c: R::Elem) -> Self {
        let degree = e.iter().map(|&x| x as usize).sum();
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(e, c);
        }
        HomogeneousPoly { ring, degree, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exp) -> R::Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Leading term in (graded-)lexicographic order; a homogeneous form's
    /// grlex leader is its lex leader.
    pub fn leading_term(&self) -> Option<(&Exp, &R::Elem)> {
        self.terms.last_key_value()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(|| self.ring.zero());
            *entry = self.ring.add(entry, c);
        }
        terms.retain(|_, c| !self.ring.is_zero(c));
        HomogeneousPoly { ring: self.ring.clone(), degree: self.degree, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        HomogeneousPoly {
            ring: self.ring.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, s: &R::Elem) -> Self {
        let mut terms: BTreeMap<Exp, R::Elem> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, self.ring.mul(c, s)))
            .collect();
        terms.retain(|_, c| !self.ring.is_zero(c));
        HomogeneousPoly { ring: self.ring.clone(), degree: self.degree, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut terms: BTreeMap<Exp, R::Elem> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let prod = self.ring.mul(c1, c2);
                let entry = terms.entry(e).or_insert_with(|| self.ring.zero());
                *entry = self.ring.add(entry, &prod);
            }
        }
        terms.retain(|_, c| !self.ring.is_zero(c));
        HomogeneousPoly { ring: self.ring.clone(), degree, terms }
    }

    /// Formal partial derivative; the degree drops by one.
    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(self.degree >= 1, "derivative of a constant form");
        assert!(var < 3);
        let mut terms: BTreeMap<Exp, R::Elem> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[var] -= 1;
            let factor = self.ring.from_i64(e[var] as i64);
            let v = self.ring.mul(c, &factor);
            if !self.ring.is_zero(&v) {
                terms.insert(e2, v);
            }
        }
        HomogeneousPoly { ring: self.ring.clone(), degree: self.degree - 1, terms }
    }

    /// The three partials, in variable order.
    pub fn gradient(&self) -> [Self; 3] {
        [
            self.partial_derivative(0),
            self.partial_derivative(1),
            self.partial_derivative(2),
        ]
    }

    /// Evaluation at a projective point; rejects the zero triple.
    pub fn evaluate(&self, pt: &[R::Elem; 3]) -> Result<R::Elem, MPolyError> {
        if pt.iter().all(|c| self.ring.is_zero(c)) {
            return Err(MPolyError::InvalidPoint);
        }
        let mut pows: [Vec<R::Elem>; 3] = [vec![], vec![], vec![]];
        for v in 0..3 {
            let mut p = vec![self.ring.one()];
            for k in 1..=self.degree {
                p.push(self.ring.mul(&p[k - 1], &pt[v]));
            }
            pows[v] = p;
        }
        let mut acc = self.ring.zero();
        for (e, c) in &self.terms {
            let m = self.ring.mul(
                &pows[0][e[0] as usize],
                &self.ring.mul(&pows[1][e[1] as usize], &pows[2][e[2] as usize]),
            );
            acc = self.ring.add(&acc, &self.ring.mul(c, &m));
        }
        Ok(acc)
    }

    /// Coefficient-wise ring change; drops coefficients that map to zero.
    pub fn map_coefficients<S, E, M>(&self, target: S, mut f: M) -> Result<HomogeneousPoly<S>, E>
    where
        S: Ring,
        M: FnMut(&R::Elem) -> Result<S::Elem, E>,
    {
        let mut terms: BTreeMap<Exp, S::Elem> = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = f(c)?;
            if !target.is_zero(&v) {
                terms.insert(*e, v);
            }
        }
        Ok(HomogeneousPoly { ring: target, degree: self.degree, terms })
    }

    /// Euler identity x F_x + y F_y + z F_z = deg * F; holds in
    /// characteristic zero or mod p with p not dividing the degree.
    pub fn euler_identity_holds(&self) -> bool {
        if self.degree == 0 {
            return true;
        }
        let [fx, fy, fz] = self.gradient();
        let x = HomogeneousPoly::monomial(self.ring.clone(), [1, 0, 0], self.ring.one());
        let y = HomogeneousPoly::monomial(self.ring.clone(), [0, 1, 0], self.ring.one());
        let z = HomogeneousPoly::monomial(self.ring.clone(), [0, 0, 1], self.ring.one());
        let lhs = x.mul(&fx).add(&y.mul(&fy)).add(&z.mul(&fz));
        let rhs = self.scale(&self.ring.from_i64(self.degree as i64));
        lhs == rhs
    }
}

impl HomogeneousPoly<crate::rings::TowerField> {
    /// Reduction mod p along a tower embedding.
    pub fn reduce(
        &self,
        hom: &RingHom,
    ) -> Result<HomogeneousPoly<crate::rings::PrimeField>, MPolyError> {
        let field = hom.field();
        self.map_coefficients(field, |c: &TowerElement| hom.apply(c).map_err(MPolyError::from))
    }
}

impl<F: Field> HomogeneousPoly<F> {
    /// True iff `self = divisor * h` for some form `h`, decided by
    /// multivariate long division against the single divisor. For one
    /// divisor the greedy leading-term strategy is complete: any monomial
    /// order is multiplicative, so divisor | self forces lt(divisor) |
    /// lt(self) at every step.
    pub fn divisible_by(&self, divisor: &Self) -> Result<bool, MPolyError> {
        if divisor.is_zero() {
            return Err(MPolyError::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(true);
        }
        if self.degree < divisor.degree {
            return Ok(false);
        }
        let f = &self.ring;
        let (dexp, dcoeff) = divisor.leading_term().expect("nonzero divisor");
        let dexp = *dexp;
        let dinv = f.inv(dcoeff)?;
        let mut rem = self.clone();
        while let Some((lexp, lc)) = rem.leading_term() {
            let lexp = *lexp;
            if lexp[0] < dexp[0] || lexp[1] < dexp[1] || lexp[2] < dexp[2] {
                return Ok(false);
            }
            let q = [lexp[0] - dexp[0], lexp[1] - dexp[1], lexp[2] - dexp[2]];
            let qc = f.mul(lc, &dinv);
            let qmono = HomogeneousPoly::monomial(f.clone(), q, qc);
            rem = rem.sub(&qmono.mul(divisor));
            if rem.is_zero() {
                return Ok(true);
            }
        }
        Ok(true)
    }
}

/// Exact divisibility test, spec-facing argument order: does `g` divide `f`?
pub fn divides<F: Field>(g: &HomogeneousPoly<F>, f: &HomogeneousPoly<F>) -> Result<bool, MPolyError> {
    f.divisible_by(g)
}

impl<R: Ring> fmt::Display for HomogeneousPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", self.ring.fmt_elem(c))?;
            for (v, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*{}", VAR_NAMES[v])?,
                    _ => write!(f, "*{}^{}", VAR_NAMES[v], p)?,
                }
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for HomogeneousPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{rat, Rationals};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_poly(
        rng: &mut ChaCha8Rng,
        degree: usize,
        density: f64,
    ) -> HomogeneousPoly<Rationals> {
        let mut terms = Vec::new();
        for i in 0..=degree as u16 {
            for j in 0..=(degree as u16 - i) {
                let k = degree as u16 - i - j;
                if rng.gen_bool(density) {
                    terms.push(([i, j, k], rat(rng.gen_range(-9..=9), 1)));
                }
            }
        }
        HomogeneousPoly::new(Rationals, degree, terms).unwrap()
    }

    #[test]
    fn rejects_wrong_degree_terms() {
        let err = HomogeneousPoly::new(Rationals, 3, vec![([1, 1, 0], rat(1, 1))]).unwrap_err();
        assert!(matches!(err, MPolyError::BadTerm([1, 1, 0], 2, 3)));
    }

    #[test]
    fn monomial_derivative_rule() {
        // d/dx of c x^4 z^3 = 4c x^3 z^3
        let f = HomogeneousPoly::monomial(Rationals, [4, 0, 3], rat(7, 1));
        let d = f.partial_derivative(0);
        assert_eq!(d.coeff(&[3, 0, 3]), rat(28, 1));
        assert_eq!(d.num_terms(), 1);
    }

    #[test]
    fn partials_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let f = random_poly(&mut rng, 5, 0.4);
            if f.degree() < 2 {
                continue;
            }
            let dxy = f.partial_derivative(0).partial_derivative(1);
            let dyx = f.partial_derivative(1).partial_derivative(0);
            assert_eq!(dxy, dyx);
        }
    }

    #[test]
    fn ring_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..15 {
            let a = random_poly(&mut rng, 2, 0.6);
            let b = random_poly(&mut rng, 3, 0.6);
            let c = random_poly(&mut rng, 2, 0.6);
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.add(&c).mul(&b), a.mul(&b).add(&c.mul(&b)));
        }
    }

    #[test]
    fn euler_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let f = random_poly(&mut rng, 6, 0.3);
            assert!(f.euler_identity_holds());
        }
    }

    #[test]
    fn homogeneity_under_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let q = Rationals;
        for _ in 0..10 {
            let f = random_poly(&mut rng, 4, 0.5);
            let pt = [rat(2, 1), rat(-1, 3), rat(5, 2)];
            let lambda = rat(rng.gen_range(1..9), 1);
            let scaled = [&pt[0] * &lambda, &pt[1] * &lambda, &pt[2] * &lambda];
            let lhs = f.evaluate(&scaled).unwrap();
            let rhs = &f.evaluate(&pt).unwrap() * &q.pow(&lambda, 4);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluate_rejects_zero_point() {
        let f = HomogeneousPoly::monomial(Rationals, [1, 0, 0], rat(1, 1));
        assert!(matches!(
            f.evaluate(&[rat(0, 1), rat(0, 1), rat(0, 1)]),
            Err(MPolyError::InvalidPoint)
        ));
    }

    #[test]
    fn divisibility_by_linear_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let x = HomogeneousPoly::monomial(Rationals, [1, 0, 0], rat(1, 1));
        for _ in 0..10 {
            let g = random_poly(&mut rng, 3, 0.7);
            if g.is_zero() {
                continue;
            }
            let prod = x.mul(&g);
            assert!(divides(&x, &prod).unwrap());
            // x divides x*g + y^4 only if it divided y^4
            let y4 = HomogeneousPoly::monomial(Rationals, [0, 4, 0], rat(1, 1));
            assert!(!divides(&x, &prod.add(&y4)).unwrap());
        }
    }

    #[test]
    fn divides_zero_divisor_error() {
        let z = HomogeneousPoly::zero(Rationals, 2);
        let f = HomogeneousPoly::monomial(Rationals, [2, 0, 0], rat(1, 1));
        assert!(matches!(divides(&z, &f), Err(MPolyError::ZeroDivisor)));
    }
}
