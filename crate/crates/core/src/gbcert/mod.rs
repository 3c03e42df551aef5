//! Groebner bases over prime fields and the ideal-theoretic certificates
//! built on them: point ideals, saturations, and the smoothness-outside-a-
//! set certificate for the reduced branch curve.
//!
//! Saturation (I : g^infinity) by a single element is computed with an
//! auxiliary variable t as the elimination ideal of <I, t g - 1>
//! (Rabinowitsch); saturation by an ideal J = <g_1, ..., g_k> is the
//! intersection of the single-generator saturations, which is exact because
//! f J^n lies in I for some n iff f g_i^(n_i) does for every i.

use thiserror::Error;

use crate::mpoly::HomogeneousPoly;
use crate::rings::fp::{inv_mod, mul_mod};
use crate::rings::{PrimeField, PrimeFieldElement, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GbError {
    #[error("duplicate point in point-ideal construction")]
    DuplicatePoint,
    #[error("invalid projective point")]
    InvalidPoint,
    #[error("ideal has no generators")]
    EmptyIdeal,
    #[error("mixed moduli in ideal operation")]
    MixedModuli,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Exponent vector; at most four variables are ever needed (x, y, z and the
/// elimination variable t, which always takes slot 0 in four-variable
/// contexts).
pub type Mon = [u16; 4];

fn mon_degree(m: &Mon) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

fn mon_mul(a: &Mon, b: &Mon) -> Mon {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn mon_divides(a: &Mon, b: &Mon) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mon_div(a: &Mon, b: &Mon) -> Mon {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn mon_lcm(a: &Mon, b: &Mon) -> Mon {
    [
        a[0].max(b[0]),
        a[1].max(b[1]),
        a[2].max(b[2]),
        a[3].max(b[3]),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic on all variables.
    GrevLex,
    /// Eliminates variable 0: compare its exponent first, ties by grevlex
    /// on the remaining variables.
    ElimFirst,
}

impl MonomialOrder {
    pub fn cmp(&self, nvars: usize, a: &Mon, b: &Mon) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match self {
            MonomialOrder::GrevLex => grevlex(a, b, 0, nvars),
            MonomialOrder::ElimFirst => match a[0].cmp(&b[0]) {
                Equal => grevlex(a, b, 1, nvars),
                o => o,
            },
        }
    }
}

fn grevlex(a: &Mon, b: &Mon, lo: usize, hi: usize) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let da: u32 = a[lo..hi].iter().map(|&e| e as u32).sum();
    let db: u32 = b[lo..hi].iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Equal => {
            for i in (lo..hi).rev() {
                if a[i] != b[i] {
                    // smaller exponent in the last differing variable wins
                    return b[i].cmp(&a[i]);
                }
            }
            Equal
        }
        o => o,
    }
}

/// Polynomial over Z/p: terms sorted descending in the context order,
/// nonzero coefficients in [1, p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    pub terms: Vec<(Mon, u64)>,
}

impl FpPoly {
    pub fn zero() -> Self {
        FpPoly { terms: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Mon, u64)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| mon_degree(m)).max().unwrap_or(0)
    }
}

/// Arithmetic context: modulus, number of variables, monomial order.
#[derive(Debug, Clone, Copy)]
pub struct PolyCtx {
    pub p: u64,
    pub nvars: usize,
    pub order: MonomialOrder,
}

impl PolyCtx {
    pub fn new(p: u64, nvars: usize, order: MonomialOrder) -> Self {
        PolyCtx { p, nvars, order }
    }

    pub fn normalize(&self, mut terms: Vec<(Mon, u64)>) -> FpPoly {
        for t in &mut terms {
            t.1 %= self.p;
        }
        terms.sort_by(|a, b| self.order.cmp(self.nvars, &b.0, &a.0));
        let mut out: Vec<(Mon, u64)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    *lc = (*lc + c) % self.p;
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        FpPoly { terms: out }
    }

    pub fn constant(&self, c: u64) -> FpPoly {
        self.normalize(vec![([0; 4], c)])
    }

    pub fn add(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let mut terms = a.terms.clone();
        terms.extend_from_slice(&b.terms);
        self.normalize(terms)
    }

    pub fn sub(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let mut terms = a.terms.clone();
        terms.extend(b.terms.iter().map(|(m, c)| (*m, self.p - c)));
        self.normalize(terms)
    }

    pub fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                terms.push((mon_mul(ma, mb), mul_mod(*ca, *cb, self.p)));
            }
        }
        self.normalize(terms)
    }

    pub fn mul_term(&self, a: &FpPoly, m: &Mon, c: u64) -> FpPoly {
        let c = c % self.p;
        if c == 0 {
            return FpPoly::zero();
        }
        // multiplying by a single term preserves sortedness
        FpPoly {
            terms: a
                .terms
                .iter()
                .map(|(ma, ca)| (mon_mul(ma, m), mul_mod(*ca, c, self.p)))
                .collect(),
        }
    }

    pub fn monic(&self, a: &FpPoly) -> FpPoly {
        match a.leading() {
            None => FpPoly::zero(),
            Some((_, lc)) => {
                let inv = inv_mod(*lc, self.p).expect("leading coefficient nonzero");
                FpPoly {
                    terms: a
                        .terms
                        .iter()
                        .map(|(m, c)| (*m, mul_mod(*c, inv, self.p)))
                        .collect(),
                }
            }
        }
    }

    /// Full division remainder of `f` by the basis: no remainder term is
    /// divisible by any leading term of the basis.
    pub fn reduce(&self, f: &FpPoly, basis: &[FpPoly]) -> FpPoly {
        let mut work = f.clone();
        let mut remainder: Vec<(Mon, u64)> = Vec::new();
        'outer: while let Some((lm, lc)) = work.leading().cloned() {
            for g in basis {
                let Some((gm, gc)) = g.leading() else { continue };
                if mon_divides(gm, &lm) {
                    let q = mon_div(&lm, gm);
                    let factor = mul_mod(lc, inv_mod(*gc, self.p).expect("monic basis"), self.p);
                    let scaled = self.mul_term(g, &q, factor);
                    work = self.sub(&work, &scaled);
                    continue 'outer;
                }
            }
            // leading term is irreducible: move it to the remainder
            remainder.push((lm, lc));
            work.terms.remove(0);
        }
        remainder.extend(work.terms);
        self.normalize(remainder)
    }

    pub fn s_poly(&self, f: &FpPoly, g: &FpPoly) -> FpPoly {
        let (fm, fc) = f.leading().expect("nonzero");
        let (gm, gc) = g.leading().expect("nonzero");
        let l = mon_lcm(fm, gm);
        let a = self.mul_term(
            f,
            &mon_div(&l, fm),
            inv_mod(*fc, self.p).expect("nonzero lead"),
        );
        let b = self.mul_term(
            g,
            &mon_div(&l, gm),
            inv_mod(*gc, self.p).expect("nonzero lead"),
        );
        self.sub(&a, &b)
    }

    /// Buchberger's algorithm with the coprime-lcm and chain criteria,
    /// returning the unique reduced basis (monic, auto-reduced, sorted by
    /// leading monomial).
    pub fn buchberger(&self, gens: &[FpPoly]) -> Vec<FpPoly> {
        let mut basis: Vec<FpPoly> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| self.monic(g))
            .collect();
        if basis.is_empty() {
            return vec![];
        }
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..basis.len() {
            for j in 0..i {
                pairs.push((j, i));
            }
        }
        while !pairs.is_empty() {
            // normal selection: smallest lcm in the monomial order
            let (best_idx, _) = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    let la = mon_lcm(&basis[a.0].leading().unwrap().0, &basis[a.1].leading().unwrap().0);
                    let lb = mon_lcm(&basis[b.0].leading().unwrap().0, &basis[b.1].leading().unwrap().0);
                    self.order.cmp(self.nvars, &la, &lb)
                })
                .map(|(i, p)| (i, *p))
                .expect("nonempty");
            let (i, j) = pairs.swap_remove(best_idx);
            let (mi, _) = basis[i].leading().unwrap();
            let (mj, _) = basis[j].leading().unwrap();
            let lcm = mon_lcm(mi, mj);
            // coprime criterion
            if mon_mul(mi, mj) == lcm {
                continue;
            }
            // chain criterion: some k with LT(k) | lcm and both pairs gone
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && mon_divides(&basis[k].leading().unwrap().0, &lcm)
                    && !pairs.contains(&(i.min(k), i.max(k)))
                    && !pairs.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let s = self.s_poly(&basis[i], &basis[j]);
            let nf = self.reduce(&s, &basis);
            if !nf.is_zero() {
                let nf = self.monic(&nf);
                let new_idx = basis.len();
                basis.push(nf);
                for k in 0..new_idx {
                    pairs.push((k, new_idx));
                }
            }
        }
        self.autoreduce(basis)
    }

    fn autoreduce(&self, mut basis: Vec<FpPoly>) -> Vec<FpPoly> {
        // drop elements whose leading term another element's divides
        let mut keep: Vec<FpPoly> = Vec::new();
        basis.sort_by(|a, b| {
            self.order
                .cmp(self.nvars, &a.leading().unwrap().0, &b.leading().unwrap().0)
        });
        for i in 0..basis.len() {
            let lm = basis[i].leading().unwrap().0;
            let redundant = keep
                .iter()
                .any(|g: &FpPoly| mon_divides(&g.leading().unwrap().0, &lm));
            if !redundant {
                keep.push(basis[i].clone());
            }
        }
        // tail-reduce each against the others
        let mut out = Vec::with_capacity(keep.len());
        for i in 0..keep.len() {
            let others: Vec<FpPoly> = keep
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let reduced = self.reduce(&keep[i], &others);
            if !reduced.is_zero() {
                out.push(self.monic(&reduced));
            }
        }
        out.sort_by(|a, b| {
            self.order
                .cmp(self.nvars, &a.leading().unwrap().0, &b.leading().unwrap().0)
        });
        out
    }
}

/// An ideal in F_p[x_1..x_nvars], presented by generators.
#[derive(Debug, Clone)]
pub struct Ideal {
    pub p: u64,
    pub nvars: usize,
    pub gens: Vec<FpPoly>,
}

impl Ideal {
    pub fn new(p: u64, nvars: usize, gens: Vec<FpPoly>) -> Self {
        Ideal { p, nvars, gens }
    }
}

/// A reduced Groebner basis together with its context.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub ctx: PolyCtx,
    pub elems: Vec<FpPoly>,
}

impl GroebnerBasis {
    pub fn normal_form(&self, f: &FpPoly) -> FpPoly {
        self.ctx.reduce(f, &self.elems)
    }

    pub fn contains(&self, f: &FpPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elems.len() == 1 && self.elems[0] == self.ctx.constant(1)
    }

    /// Buchberger criterion: every S-polynomial reduces to zero, and the
    /// basis is monic.
    pub fn is_groebner(&self) -> bool {
        for g in &self.elems {
            match g.leading() {
                Some((_, 1)) => {}
                _ => return false,
            }
        }
        for i in 0..self.elems.len() {
            for j in 0..i {
                let s = self.ctx.s_poly(&self.elems[i], &self.elems[j]);
                if !self.ctx.reduce(&s, &self.elems).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest total degree among basis elements.
    pub fn min_degree(&self) -> Option<u32> {
        self.elems.iter().map(|g| g.total_degree()).min()
    }
}

/// Reduced Groebner basis of an ideal in the given order.
pub fn groebner_basis(ideal: &Ideal, order: MonomialOrder) -> GroebnerBasis {
    let ctx = PolyCtx::new(ideal.p, ideal.nvars, order);
    let elems = ctx.buchberger(&ideal.gens);
    GroebnerBasis { ctx, elems }
}

/// Normal form against a reduced basis.
pub fn normal_form(f: &FpPoly, basis: &GroebnerBasis) -> FpPoly {
    basis.normal_form(f)
}

// --- variable bookkeeping between 3- and 4-variable contexts ---

/// Shift a 3-variable polynomial into a 4-variable context, variables
/// moving to slots 1..=3 (slot 0 is the elimination variable).
fn lift_poly(f: &FpPoly) -> FpPoly {
    FpPoly {
        terms: f
            .terms
            .iter()
            .map(|(m, c)| ([0, m[0], m[1], m[2]], *c))
            .collect(),
    }
}

/// Inverse of `lift_poly` for t-free polynomials.
fn drop_first_var(f: &FpPoly) -> FpPoly {
    FpPoly {
        terms: f
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert_eq!(m[0], 0);
                ([m[1], m[2], m[3], 0], *c)
            })
            .collect(),
    }
}

/// Generators of the elimination ideal: basis elements not involving the
/// elimination variable, mapped back to three variables.
fn eliminate_first_var(gb: &GroebnerBasis) -> Vec<FpPoly> {
    gb.elems
        .iter()
        .filter(|g| g.terms.iter().all(|(m, _)| m[0] == 0))
        .map(drop_first_var)
        .collect()
}

/// Intersection of two ideals via t I + (1 - t) J and elimination of t.
pub fn ideal_intersection(a: &Ideal, b: &Ideal) -> Result<Ideal, GbError> {
    if a.p != b.p {
        return Err(GbError::MixedModuli);
    }
    let p = a.p;
    let t: Mon = [1, 0, 0, 0];
    let ctx4 = PolyCtx::new(p, 4, MonomialOrder::ElimFirst);
    let mut gens = Vec::new();
    for f in &a.gens {
        gens.push(ctx4.mul_term(&lift_poly(f), &t, 1));
    }
    for g in &b.gens {
        let lifted = lift_poly(g);
        let tg = ctx4.mul_term(&lifted, &t, 1);
        gens.push(ctx4.sub(&lifted, &tg));
    }
    let gb = groebner_basis(&Ideal::new(p, 4, gens), MonomialOrder::ElimFirst);
    Ok(Ideal::new(p, 3, eliminate_first_var(&gb)))
}

/// Saturation (I : g^infinity) by one element, via elimination of t from
/// <I, t g - 1>.
pub fn saturation_single(ideal: &Ideal, g: &FpPoly) -> Ideal {
    let p = ideal.p;
    let ctx4 = PolyCtx::new(p, 4, MonomialOrder::ElimFirst);
    let t: Mon = [1, 0, 0, 0];
    let mut gens: Vec<FpPoly> = ideal.gens.iter().map(lift_poly).collect();
    let tg = ctx4.mul_term(&lift_poly(g), &t, 1);
    gens.push(ctx4.sub(&tg, &ctx4.constant(1)));
    let gb = groebner_basis(&Ideal::new(p, 4, gens), MonomialOrder::ElimFirst);
    Ideal::new(p, 3, eliminate_first_var(&gb))
}

/// Saturation (I : J^infinity) as the intersection of the single-generator
/// saturations over J's generators.
pub fn saturation(ideal: &Ideal, by: &Ideal) -> Result<Ideal, GbError> {
    if ideal.p != by.p {
        return Err(GbError::MixedModuli);
    }
    let gens: Vec<&FpPoly> = by.gens.iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Err(GbError::EmptyIdeal);
    }
    let mut acc: Option<Ideal> = None;
    for g in gens {
        let sat = saturation_single(ideal, g);
        acc = Some(match acc {
            None => sat,
            Some(prev) => ideal_intersection(&prev, &sat)?,
        });
    }
    Ok(acc.expect("at least one generator"))
}

/// The homogeneous ideal of a finite set of distinct projective points:
/// the intersection of the points' linear ideals, each generated by the
/// 2x2 minors against the point's coordinates.
pub fn points_ideal(p: u64, points: &[[u64; 3]]) -> Result<Ideal, GbError> {
    let proportional = |a: &[u64; 3], b: &[u64; 3]| {
        let mut equal = true;
        for i in 0..3 {
            for j in 0..3 {
                let lhs = mul_mod(a[i], b[j], p);
                let rhs = mul_mod(a[j], b[i], p);
                if lhs != rhs {
                    equal = false;
                }
            }
        }
        equal
    };
    for (i, a) in points.iter().enumerate() {
        if a.iter().all(|&c| c % p == 0) {
            return Err(GbError::InvalidPoint);
        }
        for b in &points[..i] {
            if proportional(a, b) {
                return Err(GbError::DuplicatePoint);
            }
        }
    }
    let ctx = PolyCtx::new(p, 3, MonomialOrder::GrevLex);
    let mut acc: Option<Ideal> = None;
    for pt in points {
        let mut gens = Vec::new();
        let vars: [Mon; 3] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]];
        for i in 0..3 {
            for j in (i + 1)..3 {
                // pt[j] x_i - pt[i] x_j
                let f = ctx.normalize(vec![
                    (vars[i], pt[j] % p),
                    (vars[j], (p - pt[i] % p) % p),
                ]);
                if !f.is_zero() {
                    gens.push(f);
                }
            }
        }
        let ideal = Ideal::new(p, 3, gens);
        acc = Some(match acc {
            None => ideal,
            Some(prev) => ideal_intersection(&prev, &ideal)?,
        });
    }
    acc.ok_or(GbError::EmptyIdeal)
}

/// Convert a homogeneous ternary form over Z/p into the engine
/// representation.
pub fn from_homogeneous(f: &HomogeneousPoly<PrimeField>) -> FpPoly {
    let ctx = PolyCtx::new(f.ring().p, 3, MonomialOrder::GrevLex);
    ctx.normalize(
        f.terms()
            .map(|(e, c)| ([e[0], e[1], e[2], 0], c.value))
            .collect(),
    )
}

/// The Jacobian ideal of a form: its three partial derivatives. (By the
/// Euler relation the form itself is redundant when p does not divide the
/// degree.)
pub fn jacobian_ideal(f: &HomogeneousPoly<PrimeField>) -> Ideal {
    let p = f.ring().p;
    let gens = f.gradient().iter().map(from_homogeneous).collect();
    Ideal::new(p, 3, gens)
}

/// Certifies that {F = 0} is smooth away from the excluded points, over the
/// algebraic closure: the saturation of the Jacobian ideal by the point
/// ideal must be the unit ideal.
pub fn certify_smooth_outside(
    f: &HomogeneousPoly<PrimeField>,
    excluded: &[[u64; 3]],
) -> Result<bool, GbError> {
    let jac = jacobian_ideal(f);
    let sat = if excluded.is_empty() {
        // no excluded points: smooth iff the Jacobian has no projective
        // zeros, i.e. its saturation by the irrelevant ideal is everything
        let ctx = PolyCtx::new(f.ring().p, 3, MonomialOrder::GrevLex);
        let vars = Ideal::new(
            f.ring().p,
            3,
            vec![
                ctx.normalize(vec![([1, 0, 0, 0], 1)]),
                ctx.normalize(vec![([0, 1, 0, 0], 1)]),
                ctx.normalize(vec![([0, 0, 1, 0], 1)]),
            ],
        );
        saturation(&jac, &vars)?
    } else {
        let pts = points_ideal(f.ring().p, excluded)?;
        saturation(&jac, &pts)?
    };
    let gb = groebner_basis(&sat, MonomialOrder::GrevLex);
    Ok(gb.is_unit_ideal())
}

/// Evaluate an engine polynomial at a projective point.
pub fn eval_fppoly(p: u64, f: &FpPoly, pt: &[u64; 3]) -> u64 {
    let mut acc = 0u64;
    for (m, c) in &f.terms {
        debug_assert_eq!(m[3], 0);
        let mut v = *c;
        for (var, &coord) in pt.iter().enumerate() {
            for _ in 0..m[var] {
                v = mul_mod(v, coord, p);
            }
        }
        acc = (acc + v) % p;
    }
    acc
}

/// Convenience: the coordinates of a prime-field projective point as raw
/// residues.
pub fn point_coords(pt: &[PrimeFieldElement; 3]) -> [u64; 3] {
    [pt[0].value, pt[1].value, pt[2].value]
}
