//! The quadratic tower Q(alpha, beta, delta) with
//! alpha^2 = 17, beta^2 = 21 + 5 alpha, delta^2 = 5 + alpha.
//!
//! Elements are stored as 8 rational coordinates on the fixed basis
//! {1, alpha, beta, delta, alpha beta, alpha delta, beta delta,
//! alpha beta delta}; every product reduces back onto this basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{rational_from_str, rational_to_string, Field, Ring, RingError};

/// Basis index bit layout: bit 0 = alpha, bit 1 = beta, bit 2 = delta,
/// giving the order {1, a, b, d, ab, ad, bd, abd}.
pub const TOWER_BASIS_NAMES: [&str; 8] = ["1", "a", "b", "d", "ab", "ad", "bd", "abd"];

const IDX_OF_BITS: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];
const BITS_OF_IDX: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

/// An element of Q(alpha, beta, delta).
#[derive(Clone, PartialEq, Eq)]
pub struct TowerElement {
    coords: [BigRational; 8],
}

/// Products of basis elements, as integer coordinate vectors.
fn basis_table() -> &'static [[[i64; 8]; 8]; 8] {
    static TABLE: OnceLock<[[[i64; 8]; 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [[[0i64; 8]; 8]; 8];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = basis_mul(i, j);
            }
        }
        table
    })
}

/// Multiply basis elements `i` and `j`, reducing beta^2 -> 21 + 5 alpha,
/// delta^2 -> 5 + alpha, and alpha^2 -> 17. The accumulated coefficient is
/// kept as a polynomial in alpha and folded down at the end.
fn basis_mul(i: usize, j: usize) -> [i64; 8] {
    let (ai, bi, di) = split_bits(BITS_OF_IDX[i]);
    let (aj, bj, dj) = split_bits(BITS_OF_IDX[j]);

    // coefficient as [alpha^0, alpha^1, alpha^2] before final reduction
    let mut coeff = [1i64, 0, 0];
    let mut b_exp = bi + bj;
    let mut d_exp = di + dj;
    if b_exp == 2 {
        coeff = poly_mul_alpha(coeff, [21, 5]);
        b_exp = 0;
    }
    if d_exp == 2 {
        coeff = poly_mul_alpha(coeff, [5, 1]);
        d_exp = 0;
    }
    // shift by alpha^(ai+aj) and fold alpha^(2k) = 17^k
    let a_exp = ai + aj;
    let mut reduced = [0i64; 2];
    for (k, &c) in coeff.iter().enumerate() {
        let e = k + a_exp;
        reduced[e % 2] += 17i64.pow((e / 2) as u32) * c;
    }
    let mut out = [0i64; 8];
    out[IDX_OF_BITS[b_exp * 2 + d_exp * 4]] = reduced[0];
    out[IDX_OF_BITS[1 + b_exp * 2 + d_exp * 4]] = reduced[1];
    out
}

fn split_bits(bits: usize) -> (usize, usize, usize) {
    (bits & 1, (bits >> 1) & 1, (bits >> 2) & 1)
}

fn poly_mul_alpha(p: [i64; 3], q: [i64; 2]) -> [i64; 3] {
    let mut out = [0i64; 3];
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            if i + j <= 2 {
                out[i + j] += pi * qj;
            }
        }
    }
    out
}

impl TowerElement {
    pub fn new(coords: [BigRational; 8]) -> Self {
        TowerElement { coords }
    }

    pub fn zero() -> Self {
        TowerElement {
            coords: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut e = Self::zero();
        e.coords[0] = r;
        e
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Element with a single basis coordinate set: 1 -> alpha, 2 -> beta,
    /// 3 -> delta, and so on in basis order.
    pub fn generator(idx: usize) -> Self {
        let mut e = Self::zero();
        e.coords[idx] = BigRational::one();
        e
    }

    /// Integer coordinates in basis order, a convenience for fixture data.
    pub fn from_int_coords(coords: [i64; 8]) -> Self {
        TowerElement {
            coords: std::array::from_fn(|i| BigRational::from_integer(BigInt::from(coords[i]))),
        }
    }

    pub fn coords(&self) -> &[BigRational; 8] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// True if the element lies in Q (all extension coordinates vanish).
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.coords[0]
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        TowerElement {
            coords: std::array::from_fn(|i| &self.coords[i] * r),
        }
    }

    /// The matrix of multiplication by `self` on the basis, column-major:
    /// column j is `self * basis_j`.
    pub fn multiplication_matrix(&self) -> [[BigRational; 8]; 8] {
        let table = basis_table();
        let mut m: [[BigRational; 8]; 8] = std::array::from_fn(|_| {
            std::array::from_fn(|_| BigRational::zero())
        });
        for (i, ci) in self.coords.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for j in 0..8 {
                for k in 0..8 {
                    let t = table[i][j][k];
                    if t != 0 {
                        m[k][j] += ci * BigRational::from_integer(BigInt::from(t));
                    }
                }
            }
        }
        m
    }

    /// Inverse by solving the 8x8 linear system of the multiplication-by-self
    /// map against the unit vector.
    pub fn inverse(&self) -> Result<Self, RingError> {
        if self.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let m = self.multiplication_matrix();
        let mut rows: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.to_vec())
            .collect();
        let mut rhs: Vec<BigRational> = vec![BigRational::zero(); 8];
        rhs[0] = BigRational::one();
        // Gaussian elimination with exact pivots.
        for col in 0..8 {
            let pivot = (col..8)
                .find(|&r| !rows[r][col].is_zero())
                .ok_or(RingError::DivisionByZero)?;
            rows.swap(col, pivot);
            rhs.swap(col, pivot);
            let inv = rows[col][col].recip();
            for x in rows[col].iter_mut() {
                *x *= &inv;
            }
            rhs[col] *= &inv;
            for r in 0..8 {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for c in 0..8 {
                        let t = &rows[col][c] * &f;
                        rows[r][c] -= t;
                    }
                    let t = &rhs[col] * &f;
                    rhs[r] -= t;
                }
            }
        }
        let coords: [BigRational; 8] = std::array::from_fn(|i| rhs[i].clone());
        Ok(TowerElement { coords })
    }

    pub fn to_strings(&self) -> [String; 8] {
        std::array::from_fn(|i| rational_to_string(&self.coords[i]))
    }

    pub fn from_strings(parts: &[String]) -> Result<Self, RingError> {
        if parts.len() != 8 {
            return Err(RingError::Parse(format!("{parts:?}")));
        }
        let mut coords = std::array::from_fn(|_| BigRational::zero());
        for (i, s) in parts.iter().enumerate() {
            coords[i] = rational_from_str(s)?;
        }
        Ok(TowerElement { coords })
    }
}

fn fmt_tower(e: &TowerElement, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in e.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        if i == 0 {
            write!(f, "{}", c)?;
        } else if c.is_one() {
            write!(f, "{}", TOWER_BASIS_NAMES[i])?;
        } else {
            write!(f, "({})*{}", c, TOWER_BASIS_NAMES[i])?;
        }
    }
    Ok(())
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tower(self, f)
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tower(self, f)
    }
}

impl Add for &TowerElement {
    type Output = TowerElement;
    fn add(self, rhs: &TowerElement) -> TowerElement {
        TowerElement {
            coords: std::array::from_fn(|i| &self.coords[i] + &rhs.coords[i]),
        }
    }
}

impl Sub for &TowerElement {
    type Output = TowerElement;
    fn sub(self, rhs: &TowerElement) -> TowerElement {
        TowerElement {
            coords: std::array::from_fn(|i| &self.coords[i] - &rhs.coords[i]),
        }
    }
}

impl Neg for &TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        TowerElement {
            coords: std::array::from_fn(|i| -&self.coords[i]),
        }
    }
}

impl Mul for &TowerElement {
    type Output = TowerElement;
    fn mul(self, rhs: &TowerElement) -> TowerElement {
        let table = basis_table();
        let mut out: [BigRational; 8] = std::array::from_fn(|_| BigRational::zero());
        for (i, ci) in self.coords.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in rhs.coords.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let prod = ci * cj;
                for (k, out_k) in out.iter_mut().enumerate() {
                    let t = table[i][j][k];
                    if t != 0 {
                        *out_k += &prod * BigRational::from_integer(BigInt::from(t));
                    }
                }
            }
        }
        TowerElement { coords: out }
    }
}

/// Ring-context view of the tower, for the generic polynomial and matrix
/// machinery.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct TowerField;

impl TowerField {
    pub fn alpha(&self) -> TowerElement {
        TowerElement::generator(1)
    }
    pub fn beta(&self) -> TowerElement {
        TowerElement::generator(2)
    }
    pub fn delta(&self) -> TowerElement {
        TowerElement::generator(3)
    }
}

impl Ring for TowerField {
    type Elem = TowerElement;

    fn zero(&self) -> TowerElement {
        TowerElement::zero()
    }
    fn one(&self) -> TowerElement {
        TowerElement::one()
    }
    fn is_zero(&self, a: &TowerElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        a + b
    }
    fn sub(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        a - b
    }
    fn neg(&self, a: &TowerElement) -> TowerElement {
        -a
    }
    fn mul(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        a * b
    }
    fn from_i64(&self, n: i64) -> TowerElement {
        TowerElement::from_integer(n)
    }
    fn fmt_elem(&self, a: &TowerElement) -> String {
        format!("{a}")
    }
}

impl Field for TowerField {
    fn inv(&self, a: &TowerElement) -> Result<TowerElement, RingError> {
        a.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(rng: &mut ChaCha8Rng) -> TowerElement {
        TowerElement::new(std::array::from_fn(|_| {
            rat(rng.gen_range(-20..=20), rng.gen_range(1..=9))
        }))
    }

    #[test]
    fn alpha_squared_is_17() {
        let t = TowerField;
        let a = t.alpha();
        assert_eq!(&a * &a, TowerElement::from_integer(17));
    }

    #[test]
    fn beta_squared_is_21_plus_5_alpha() {
        let t = TowerField;
        let b = t.beta();
        let expect = TowerElement::from_int_coords([21, 5, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&b * &b, expect);
    }

    #[test]
    fn delta_squared_is_5_plus_alpha() {
        let t = TowerField;
        let d = t.delta();
        let expect = TowerElement::from_int_coords([5, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&d * &d, expect);
    }

    #[test]
    fn one_is_multiplicative_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let one = TowerElement::one();
        for _ in 0..50 {
            let x = random_element(&mut rng);
            assert_eq!(&one * &x, x);
            assert_eq!(&x * &one, x);
        }
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            let c = random_element(&mut rng);
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }

    #[test]
    fn inverse_of_one_and_alpha() {
        assert_eq!(TowerElement::one().inverse().unwrap(), TowerElement::one());
        // alpha^-1 = alpha / 17, forced by alpha^2 = 17
        let alpha = TowerField.alpha();
        let inv = alpha.inverse().unwrap();
        let mut want = TowerElement::zero();
        want = &want + &alpha.scale(&rat(1, 17));
        assert_eq!(inv, want);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(
            TowerElement::zero().inverse().unwrap_err(),
            RingError::DivisionByZero
        );
    }

    /// Independent oracle: invert via an adjugate-free cofactor solve of the
    /// multiplication matrix, then check a * inv(a) = 1 by multiplication.
    #[test]
    fn random_inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..25 {
            let a = random_element(&mut rng);
            if a.is_zero() {
                continue;
            }
            let inv = a.inverse().unwrap();
            assert_eq!(&a * &inv, TowerElement::one());
            // oracle: Cramer's rule on the multiplication matrix
            let m = a.multiplication_matrix();
            let det = det8(&m);
            assert!(!det.is_zero());
            let mut col0 = Vec::new();
            for j in 0..8 {
                let mut mm: Vec<Vec<BigRational>> =
                    m.iter().map(|r| r.to_vec()).collect();
                for (r, row) in mm.iter_mut().enumerate() {
                    row[j] = if r == 0 {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    };
                }
                col0.push(det_n(&mm) / det.clone());
            }
            let coords: [BigRational; 8] = std::array::from_fn(|i| col0[i].clone());
            assert_eq!(inv, TowerElement::new(coords));
        }
    }

    fn det8(m: &[[BigRational; 8]; 8]) -> BigRational {
        let rows: Vec<Vec<BigRational>> = m.iter().map(|r| r.to_vec()).collect();
        det_n(&rows)
    }

    fn det_n(m: &[Vec<BigRational>]) -> BigRational {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigRational::zero();
        for (j, mj) in m[0].iter().enumerate() {
            if mj.is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigRational>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = mj * det_n(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn string_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let a = random_element(&mut rng);
            let s = a.to_strings();
            let back = TowerElement::from_strings(&s).unwrap();
            assert_eq!(a, back);
        }
    }
}
