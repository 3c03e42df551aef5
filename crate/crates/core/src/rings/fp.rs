//! Prime fields Z/p, modular square roots, and embeddings of the quadratic
//! tower into Z/p by choosing compatible square-root branches.

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Field, Ring, RingError, TowerElement};

/// Element of Z/p. Carries its modulus so mixed-modulus arithmetic is caught
/// immediately; contexts that need raw residues use `value`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeFieldElement {
    pub value: u64,
    pub p: u64,
}

impl PrimeFieldElement {
    pub fn new(value: u64, p: u64) -> Self {
        PrimeFieldElement { value: value % p, p }
    }
}

impl std::fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The field Z/p as a ring context. `p` must be an odd prime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
            return Err(RingError::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn elem(&self, v: u64) -> PrimeFieldElement {
        PrimeFieldElement::new(v, self.p)
    }

    pub fn elem_from_i64(&self, v: i64) -> PrimeFieldElement {
        self.elem(v.rem_euclid(self.p as i64) as u64)
    }

    fn check(&self, a: &PrimeFieldElement) {
        assert_eq!(a.p, self.p, "prime field element has mismatched modulus");
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    a %= p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Result<u64, RingError> {
    if a % p == 0 {
        return Err(RingError::DivisionByZero);
    }
    Ok(pow_mod(a, p - 2, p))
}

impl Ring for PrimeField {
    type Elem = PrimeFieldElement;

    fn zero(&self) -> PrimeFieldElement {
        self.elem(0)
    }
    fn one(&self) -> PrimeFieldElement {
        self.elem(1)
    }
    fn is_zero(&self, a: &PrimeFieldElement) -> bool {
        self.check(a);
        a.value == 0
    }
    fn add(&self, a: &PrimeFieldElement, b: &PrimeFieldElement) -> PrimeFieldElement {
        self.check(a);
        self.check(b);
        self.elem((a.value + b.value) % self.p)
    }
    fn sub(&self, a: &PrimeFieldElement, b: &PrimeFieldElement) -> PrimeFieldElement {
        self.check(a);
        self.check(b);
        self.elem((a.value + self.p - b.value) % self.p)
    }
    fn neg(&self, a: &PrimeFieldElement) -> PrimeFieldElement {
        self.check(a);
        self.elem((self.p - a.value) % self.p)
    }
    fn mul(&self, a: &PrimeFieldElement, b: &PrimeFieldElement) -> PrimeFieldElement {
        self.check(a);
        self.check(b);
        self.elem(mul_mod(a.value, b.value, self.p))
    }
    fn from_i64(&self, n: i64) -> PrimeFieldElement {
        self.elem_from_i64(n)
    }
    fn fmt_elem(&self, a: &PrimeFieldElement) -> String {
        a.value.to_string()
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &PrimeFieldElement) -> Result<PrimeFieldElement, RingError> {
        self.check(a);
        Ok(self.elem(inv_mod(a.value, self.p)?))
    }
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Square root of `n` mod an odd prime `p` via Tonelli-Shanks; `None` when
/// `n` is a quadratic non-residue. The returned root is canonicalized to
/// min(r, p - r).
pub fn sqrt_mod_p(n: u64, p: u64) -> Option<u64> {
    assert!(p >= 3 && p % 2 == 1, "modulus must be an odd prime");
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        pow_mod(n, (p + 1) / 4, p)
    } else {
        // write p - 1 = q * 2^s with q odd
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        // smallest quadratic non-residue as the deterministic generator
        let z = (2..p)
            .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
            .expect("odd prime has a non-residue");
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(n, q, p);
        let mut r = pow_mod(n, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1u64 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Some(r.min(p - r))
}

/// Homomorphism from the tower ring into Z/p determined by compatible
/// residues for alpha, beta, delta.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RingHom {
    pub p: u64,
    pub r_alpha: u64,
    pub r_beta: u64,
    pub r_delta: u64,
}

impl RingHom {
    /// Validates the three defining congruences.
    pub fn new(p: u64, r_alpha: u64, r_beta: u64, r_delta: u64) -> Result<Self, RingError> {
        let hom = RingHom { p, r_alpha, r_beta, r_delta };
        if !hom.congruences_hold() {
            return Err(RingError::NoEmbedding {
                p,
                reason: format!(
                    "residues ({r_alpha}, {r_beta}, {r_delta}) do not satisfy the tower relations"
                ),
            });
        }
        Ok(hom)
    }

    pub fn congruences_hold(&self) -> bool {
        let p = self.p;
        mul_mod(self.r_alpha, self.r_alpha, p) == 17 % p
            && mul_mod(self.r_beta, self.r_beta, p) == (21 % p + mul_mod(5, self.r_alpha, p)) % p
            && mul_mod(self.r_delta, self.r_delta, p) == (5 % p + self.r_alpha % p) % p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    /// Image of a tower element; fails when a denominator vanishes mod p.
    pub fn apply(&self, a: &TowerElement) -> Result<PrimeFieldElement, RingError> {
        let p = self.p;
        let basis = [
            1,
            self.r_alpha,
            self.r_beta,
            self.r_delta,
            mul_mod(self.r_alpha, self.r_beta, p),
            mul_mod(self.r_alpha, self.r_delta, p),
            mul_mod(self.r_beta, self.r_delta, p),
            mul_mod(mul_mod(self.r_alpha, self.r_beta, p), self.r_delta, p),
        ];
        let mut acc = 0u64;
        for (c, b) in a.coords().iter().zip(basis) {
            if c.numer().is_zero() {
                continue;
            }
            let num = bigint_mod_u64(c.numer(), p);
            let den = bigint_mod_u64(c.denom(), p);
            if den == 0 {
                return Err(RingError::DenominatorVanishes(c.to_string(), p));
            }
            let v = mul_mod(mul_mod(num, inv_mod(den, p)?, p), b, p);
            acc = (acc + v) % p;
        }
        Ok(PrimeFieldElement::new(acc, p))
    }
}

fn bigint_mod_u64(n: &num_bigint::BigInt, p: u64) -> u64 {
    let m = n.mod_floor(&num_bigint::BigInt::from(p));
    m.to_u64().expect("reduced residue fits in u64")
}

use num_traits::Zero as _;

/// Branch bits select square-root branches for (alpha, beta, delta): bit 0
/// takes the canonical (smaller) root, bit 1 its negative.
pub fn embed_tower(p: u64, branches: [bool; 3]) -> Result<RingHom, RingError> {
    if p < 3 || !is_prime_u64(p) || p % 2 == 0 {
        return Err(RingError::BadModulus(p));
    }
    let pick = |r: u64, bit: bool| if bit && r != 0 { p - r } else { r };
    let r17 = sqrt_mod_p(17, p).ok_or(RingError::NoEmbedding {
        p,
        reason: "17 is a non-residue".into(),
    })?;
    let r_alpha = pick(r17, branches[0]);
    let nb = (21 % p + mul_mod(5, r_alpha, p)) % p;
    let rb = sqrt_mod_p(nb, p).ok_or(RingError::NoEmbedding {
        p,
        reason: format!("21 + 5*{r_alpha} = {nb} is a non-residue"),
    })?;
    let r_beta = pick(rb, branches[1]);
    let nd = (5 + r_alpha) % p;
    let rd = sqrt_mod_p(nd, p).ok_or(RingError::NoEmbedding {
        p,
        reason: format!("5 + {r_alpha} = {nd} is a non-residue"),
    })?;
    let r_delta = pick(rd, branches[2]);
    RingHom::new(p, r_alpha, r_beta, r_delta)
}

/// True if some choice of branches embeds the tower mod p.
pub fn tower_embeds(p: u64) -> bool {
    if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
        return false;
    }
    let Some(r17) = sqrt_mod_p(17, p) else {
        return false;
    };
    let roots = if r17 == 0 { vec![0] } else { vec![r17, p - r17] };
    roots.into_iter().any(|ra| {
        sqrt_mod_p((21 % p + mul_mod(5, ra, p)) % p, p).is_some()
            && sqrt_mod_p((5 % p + ra) % p, p).is_some()
    })
}

pub const DEFAULT_PRIME_SEARCH_CAP: u64 = 1 << 24;

/// Smallest prime >= start admitting a tower embedding for some branch
/// choice, searching up to the default cap.
pub fn find_good_prime(start: u64) -> Result<u64, RingError> {
    find_good_prime_capped(start, DEFAULT_PRIME_SEARCH_CAP)
}

pub fn find_good_prime_capped(start: u64, cap: u64) -> Result<u64, RingError> {
    let mut p = start.max(3);
    while p <= cap {
        if tower_embeds(p) {
            return Ok(p);
        }
        p += 1;
    }
    Err(RingError::PrimeNotFound { start, cap })
}
