//! Quadratic parametrizations of plane conics and composition of ternary
//! forms with them.

use super::{BinaryForm, HomogeneousPoly, MPolyError};
use crate::linalg::{nullspace, Matrix};
use crate::rings::{Field, Ring};

/// The map gamma: [s:t] -> [a s^2 + b s t + c t^2 : d s^2 + e s t + f t^2 :
/// g s^2 + h s t + i t^2], nine coefficients in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicParametrization<R: Ring> {
    ring: R,
    pub coeffs: [R::Elem; 9],
}

impl<R: Ring> ConicParametrization<R> {
    pub fn new(ring: R, coeffs: [R::Elem; 9]) -> Self {
        ConicParametrization { ring, coeffs }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// The three coordinate quadratic forms as binary forms in (s, t).
    pub fn coordinate_forms(&self) -> [BinaryForm<R>; 3] {
        std::array::from_fn(|row| {
            BinaryForm::new(
                self.ring.clone(),
                2,
                vec![
                    self.coeffs[3 * row].clone(),
                    self.coeffs[3 * row + 1].clone(),
                    self.coeffs[3 * row + 2].clone(),
                ],
            )
        })
    }

    /// Image point at the parameter [s:t].
    pub fn map(&self, s: &R::Elem, t: &R::Elem) -> [R::Elem; 3] {
        let forms = self.coordinate_forms();
        std::array::from_fn(|i| forms[i].eval(s, t))
    }

    /// Derivative vector d(gamma)/ds and d(gamma)/dt at [s:t].
    fn jacobian_columns(&self, s: &R::Elem, t: &R::Elem) -> ([R::Elem; 3], [R::Elem; 3]) {
        let forms = self.coordinate_forms();
        let ds = std::array::from_fn(|i| forms[i].derivative_u().eval(s, t));
        let dt = std::array::from_fn(|i| forms[i].derivative_v().eval(s, t));
        (ds, dt)
    }
}

fn cross3<R: Ring>(ring: &R, a: &[R::Elem; 3], b: &[R::Elem; 3]) -> [R::Elem; 3] {
    [
        ring.sub(&ring.mul(&a[1], &b[2]), &ring.mul(&a[2], &b[1])),
        ring.sub(&ring.mul(&a[2], &b[0]), &ring.mul(&a[0], &b[2])),
        ring.sub(&ring.mul(&a[0], &b[1]), &ring.mul(&a[1], &b[0])),
    ]
}

impl<F: Field> ConicParametrization<F> {
    /// Tangent line of the image conic at gamma([s:t]), as the coefficient
    /// triple of a linear form. Computed as the span of the point and a
    /// derivative vector; by the Euler relation one of the two partials
    /// always works at a smooth parameter value.
    pub fn tangent_line_at(&self, s: &F::Elem, t: &F::Elem) -> Result<[F::Elem; 3], MPolyError> {
        let f = &self.ring;
        let p = self.map(s, t);
        let (ds, dt) = self.jacobian_columns(s, t);
        for d in [ds, dt] {
            let line = cross3(f, &p, &d);
            if line.iter().any(|c| !f.is_zero(c)) {
                return Ok(line);
            }
        }
        Err(MPolyError::DegenerateParametrization)
    }

    /// Implicit equation of the image: the unique conic through five image
    /// points at fixed parameter values. Fails if the solution space is not
    /// one-dimensional (degenerate parametrization).
    pub fn implicit_conic(&self) -> Result<HomogeneousPoly<F>, MPolyError> {
        let f = &self.ring;
        let params: [(i64, i64); 5] = [(0, 1), (1, 0), (1, 1), (-1, 1), (2, 1)];
        let exps: [super::Exp; 6] = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];
        let mut rows = Vec::new();
        for (s, t) in params {
            let p = self.map(&f.from_i64(s), &f.from_i64(t));
            let row: Vec<F::Elem> = exps
                .iter()
                .map(|e| {
                    let mut v = f.one();
                    for (var, &pw) in e.iter().enumerate() {
                        for _ in 0..pw {
                            v = f.mul(&v, &p[var]);
                        }
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
        let ns = nullspace(f, Matrix::from_rows(rows));
        if ns.len() != 1 {
            return Err(MPolyError::DegenerateParametrization);
        }
        let conic = HomogeneousPoly::new(
            f.clone(),
            2,
            exps.iter().cloned().zip(ns[0].iter().cloned()),
        )?;
        // the implicit form must vanish on the whole image, not just the
        // five sampled points
        if !compose_with_parametrization(&conic, self).is_zero() {
            return Err(MPolyError::DegenerateParametrization);
        }
        Ok(conic)
    }
}

/// Substitute the parametrization into a ternary form, producing a binary
/// form of degree 2 deg(F) in (s, t).
pub fn compose_with_parametrization<R: Ring>(
    form: &HomogeneousPoly<R>,
    gamma: &ConicParametrization<R>,
) -> BinaryForm<R> {
    let ring = form.ring().clone();
    let coords = gamma.coordinate_forms();
    let target = 2 * form.degree();
    let mut acc = BinaryForm::zero(ring.clone(), target);
    for (e, c) in form.terms() {
        let mut term = BinaryForm::constant(ring.clone(), c.clone());
        for (var, &pw) in e.iter().enumerate() {
            for _ in 0..pw {
                term = term.mul(&coords[var]);
            }
        }
        // pad constants up to the target degree via u^0 v^0 scaling:
        // term already has degree 2*degree(F) because exponents sum to it
        acc = acc.add(&term);
    }
    acc
}
