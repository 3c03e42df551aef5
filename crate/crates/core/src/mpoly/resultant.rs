//! Sylvester resultants of ternary forms, eliminating one variable.
//!
//! The Sylvester matrix has binary-form entries in the two remaining
//! variables; its determinant is computed by fraction-free Bareiss
//! elimination, whose intermediate entries are genuine minors, so every
//! division is exact and coefficient growth stays polynomial.

use super::{BinaryForm, HomogeneousPoly, MPolyError};
use crate::rings::Field;

/// Resultant of `f` and `g` with respect to the variable `var` (0 = x,
/// 1 = y, 2 = z). The result is a homogeneous form of degree
/// deg(f) deg(g) in the remaining two variables (for forms with full degree
/// in `var`), returned as a ternary form not involving `var`.
pub fn resultant<F: Field>(
    f: &HomogeneousPoly<F>,
    g: &HomogeneousPoly<F>,
    var: usize,
) -> Result<HomogeneousPoly<F>, MPolyError> {
    assert!(var < 3);
    if f.is_zero() || g.is_zero() {
        return Err(MPolyError::ZeroDivisor);
    }
    let field = f.ring().clone();
    let (u, v) = others(var);
    let fa = coefficients_in(f, var);
    let ga = coefficients_in(g, var);
    let m = fa.len() - 1;
    let n = ga.len() - 1;
    if m == 0 && n == 0 {
        return Err(MPolyError::NoEliminatedVariable);
    }
    // degenerate convention: a var-free operand contributes its power
    if m == 0 {
        let mut acc = HomogeneousPoly::monomial(field.clone(), [0, 0, 0], field.one());
        let base = binary_to_ternary(&fa[0], u, v);
        for _ in 0..n {
            acc = acc.mul(&base);
        }
        return Ok(acc);
    }
    if n == 0 {
        let mut acc = HomogeneousPoly::monomial(field.clone(), [0, 0, 0], field.one());
        let base = binary_to_ternary(&ga[0], u, v);
        for _ in 0..m {
            acc = acc.mul(&base);
        }
        return Ok(acc);
    }

    let size = m + n;
    // Row weights give nonzero entries at (i, j) degree w[i] + j; positions
    // outside the coefficient band stay zero forever and are stored as
    // degree-polymorphic zero forms.
    let deg_f = f.degree();
    let deg_g = g.degree();
    let mut weights = Vec::with_capacity(size);
    for i in 0..n {
        weights.push(deg_f as i64 - m as i64 - i as i64);
    }
    for i in 0..m {
        weights.push(deg_g as i64 - n as i64 - i as i64);
    }
    let mut mat: Vec<Vec<BinaryForm<F>>> = (0..size)
        .map(|_| (0..size).map(|_| BinaryForm::zero(field.clone(), 0)).collect())
        .collect();
    // descending coefficient layout: row i of the f-block places
    // [a_m, ..., a_0] starting at column i
    for i in 0..n {
        for (k, a) in fa.iter().enumerate() {
            let col = i + m - k;
            debug_assert_eq!(a.degree() as i64, weights[i] + col as i64);
            mat[i][col] = a.clone();
        }
    }
    for i in 0..m {
        for (k, b) in ga.iter().enumerate() {
            let col = i + n - k;
            debug_assert_eq!(b.degree() as i64, weights[n + i] + col as i64);
            mat[n + i][col] = b.clone();
        }
    }

    let det_degree =
        (weights.iter().sum::<i64>() + (size * (size - 1) / 2) as i64).max(0) as usize;
    let det = bareiss_determinant(field.clone(), mat, det_degree);
    Ok(binary_to_ternary(&det, u, v))
}

fn others(var: usize) -> (usize, usize) {
    match var {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => unreachable!(),
    }
}

/// Coefficients of `f` as a polynomial in `var`, ascending; entry k is a
/// binary form in the remaining variables of degree deg(f) - k.
fn coefficients_in<F: Field>(f: &HomogeneousPoly<F>, var: usize) -> Vec<BinaryForm<F>> {
    let field = f.ring().clone();
    let (u, v) = others(var);
    let dvar = f
        .terms()
        .map(|(e, _)| e[var] as usize)
        .max()
        .unwrap_or(0);
    let mut out: Vec<BinaryForm<F>> = (0..=dvar)
        .map(|k| BinaryForm::zero(field.clone(), f.degree() - k))
        .collect();
    for (e, c) in f.terms() {
        let k = e[var] as usize;
        let deg = f.degree() - k;
        let vi = e[v] as usize; // coefficient index within u^(deg-i) v^i
        debug_assert_eq!(e[u] as usize + vi, deg);
        let mut coeffs = out[k].coeffs().to_vec();
        coeffs[vi] = field.add(&coeffs[vi], c);
        out[k] = BinaryForm::new(field.clone(), deg, coeffs);
    }
    out
}

fn binary_to_ternary<F: Field>(b: &BinaryForm<F>, u: usize, v: usize) -> HomogeneousPoly<F> {
    let field = b.ring().clone();
    let n = b.degree();
    let terms = b.coeffs().iter().enumerate().map(|(i, c)| {
        let mut e = [0u16; 3];
        e[u] = (n - i) as u16;
        e[v] = i as u16;
        (e, c.clone())
    });
    HomogeneousPoly::new(field, n, terms).expect("consistent degrees")
}

/// Fraction-free determinant over binary-form entries. The matrix is graded
/// (entry degrees are row weight + column index), so the Bareiss update
/// subtracts forms of equal degree and the division by the previous pivot is
/// exact.
fn bareiss_determinant<F: Field>(
    field: F,
    mut m: Vec<Vec<BinaryForm<F>>>,
    det_degree: usize,
) -> BinaryForm<F> {
    let n = m.len();
    if n == 0 {
        let one = field.one();
        return BinaryForm::constant(field, one);
    }
    let mut sign_flip = false;
    let mut prev_pivot: Option<BinaryForm<F>> = None;
    for k in 0..n - 1 {
        let Some(pr) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BinaryForm::zero(field, det_degree);
        };
        if pr != k {
            m.swap(k, pr);
            sign_flip = !sign_flip;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&pivot).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = match &prev_pivot {
                    None => num,
                    Some(pp) => num.div_exact(pp),
                };
            }
            m[i][k] = BinaryForm::zero(field.clone(), m[i][k].degree());
        }
        prev_pivot = Some(pivot);
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Decide whether two nonzero ternary forms share a common factor. Factors
/// free of z divide the binary content of the z-coefficients; factors with
/// positive z-degree make the resultant of the z-primitive parts vanish.
pub fn forms_coprime<F: Field>(
    f: &HomogeneousPoly<F>,
    g: &HomogeneousPoly<F>,
) -> Result<bool, MPolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(MPolyError::ZeroDivisor);
    }
    let field = f.ring().clone();
    let content = |h: &HomogeneousPoly<F>| -> BinaryForm<F> {
        let coeffs = coefficients_in(h, 2);
        let mut acc = BinaryForm::zero(field.clone(), 0);
        let mut first = true;
        for c in coeffs {
            if c.is_zero() {
                continue;
            }
            acc = if first { c } else { acc.gcd(&c) };
            first = false;
        }
        acc
    };
    let cf = content(f);
    let cg = content(g);
    if cf.gcd(&cg).degree() >= 1 {
        return Ok(false);
    }
    let strip = |h: &HomogeneousPoly<F>, c: &BinaryForm<F>| -> HomogeneousPoly<F> {
        if c.degree() == 0 {
            return h.clone();
        }
        let mut acc = HomogeneousPoly::zero(field.clone(), h.degree() - c.degree());
        for (k, coeff) in coefficients_in(h, 2).iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let reduced = coeff.div_exact(c);
            let part = binary_to_ternary(&reduced, 0, 1);
            let zk = HomogeneousPoly::monomial(field.clone(), [0, 0, k as u16], field.one());
            acc = acc.add(&part.mul(&zk));
        }
        acc
    };
    let pf = strip(f, &cf);
    let pg = strip(g, &cg);
    let zdeg = |h: &HomogeneousPoly<F>| h.terms().map(|(e, _)| e[2]).max().unwrap_or(0);
    if zdeg(&pf) == 0 || zdeg(&pg) == 0 {
        // a z-primitive form of z-degree zero is a nonzero constant in z
        return Ok(true);
    }
    Ok(!resultant(&pf, &pg, 2)?.is_zero())
}
