//! Intersection multiplicities by the blow-up recursion, genus bookkeeping,
//! and the certificate that no tangent line is a curve component.

use crate::mpoly::{HomogeneousPoly, UniPoly};
use crate::rings::Field;

use super::{Chart, DirectionRoots, Line, LocalCurve, Point, SingularError};

/// Intersection multiplicity of two curves at a point by the recursion
/// i_P(F, G) = m_P(F) m_P(G) + sum of i over the common points in the first
/// infinitesimal neighborhood. The curves must not share a component
/// through the point; a recursion budget derived from the Bezout bound
/// turns a shared component into an error instead of a loop.
pub fn intersection_multiplicity<F: DirectionRoots>(
    f: &HomogeneousPoly<F>,
    g: &HomogeneousPoly<F>,
    p: &Point<F>,
) -> Result<usize, SingularError> {
    let field = f.ring();
    let chart = Chart::at_point(field, p)?;
    let a = LocalCurve::from_chart(f, &chart);
    let b = LocalCurve::from_chart(g, &chart);
    let mut budget = f.degree() * g.degree() + 2;
    local_intersection(&a, &b, &mut budget)
}

fn local_intersection<F: DirectionRoots>(
    a: &LocalCurve<F>,
    b: &LocalCurve<F>,
    budget: &mut usize,
) -> Result<usize, SingularError> {
    if a.is_zero() || b.is_zero() {
        return Err(SingularError::ZeroPolynomial);
    }
    let ma = a.multiplicity()?;
    let mb = b.multiplicity()?;
    if ma == 0 || mb == 0 {
        return Ok(0);
    }
    if *budget == 0 {
        return Err(SingularError::CommonComponent);
    }
    *budget -= 1;
    let mut total = ma * mb;
    let g = a.initial_form()?.gcd(&b.initial_form()?);
    if g.degree() == 0 {
        return Ok(total);
    }
    let field = a.field().clone();
    let roots = field
        .binary_form_roots(&g)
        .ok_or(SingularError::IrrationalDirection)?;
    let found: usize = roots.iter().map(|(_, m)| m).sum();
    if found != g.degree() {
        // common tangent directions exist only over an extension field
        return Err(SingularError::IrrationalDirection);
    }
    for (dir, _) in roots {
        let (sa, _) = a.blowup_strict_transform(&dir)?;
        let (sb, _) = b.blowup_strict_transform(&dir)?;
        total += local_intersection(&sa, &sb, budget)?;
    }
    Ok(total)
}

/// Arithmetic genus, total singularity deficit, and the geometric genus an
/// irreducible curve with exactly these singularities would have. Each
/// cluster is a multiplicity sequence down a chain of infinitely near
/// points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenusData {
    pub arithmetic: i64,
    pub deficit: i64,
    pub geometric: i64,
}

pub fn genus_deficit(degree: usize, clusters: &[Vec<u32>]) -> GenusData {
    let d = degree as i64;
    let arithmetic = (d - 1) * (d - 2) / 2;
    let deficit: i64 = clusters
        .iter()
        .flat_map(|chain| chain.iter())
        .map(|&m| (m as i64) * (m as i64 - 1) / 2)
        .sum();
    GenusData { arithmetic, deficit, geometric: arithmetic - deficit }
}

/// Outcome of checking that no line through any of the listed points is a
/// component of the curve. The certificate works over the algebraic
/// closure: for each point it restricts the curve to the pencil of lines
/// through the point and takes the gcd of the coefficient polynomials in
/// the pencil parameter; a nonconstant gcd is exactly a contained line.
#[derive(Clone, Debug)]
pub struct TangentLineScan<F: Field> {
    pub all_clear: bool,
    /// Contained lines with rational direction parameters, as witnesses.
    pub contained_lines: Vec<Line<F>>,
}

pub fn tangent_lines_not_components<F: DirectionRoots>(
    curve: &HomogeneousPoly<F>,
    points: &[Point<F>],
) -> Result<TangentLineScan<F>, SingularError> {
    let field = curve.ring().clone();
    let mut contained = Vec::new();
    let mut all_clear = true;
    for p in points {
        let chart = Chart::at_point(&field, p)?;
        // lines through p: direction D(t) = c1 + t c2, plus D = c2 alone
        let coeffs = pencil_restriction_coefficients(curve, &chart);
        let mut g = UniPoly::zero(field.clone());
        for c in &coeffs {
            g = g.gcd(c);
        }
        match g.degree() {
            None => {
                // every restriction vanished: the curve is degenerate
                all_clear = false;
            }
            Some(0) => {}
            Some(_) => {
                all_clear = false;
                // extract rational witnesses where possible
                for t in rational_roots(&field, &g) {
                    let dir: [F::Elem; 3] = std::array::from_fn(|r| {
                        field.add(
                            &chart.cols[0][r],
                            &field.mul(&t, &chart.cols[1][r]),
                        )
                    });
                    contained.push(line_through(&field, p, &dir));
                }
            }
        }
        // the leftover direction c2 (parameter at infinity)
        let c2: [F::Elem; 3] = chart.cols[1].clone();
        if line_contained(curve, p, &c2)? {
            all_clear = false;
            contained.push(line_through(&field, p, &c2));
        }
    }
    Ok(TangentLineScan { all_clear, contained_lines: contained })
}

/// Coefficients c_k(t) of C(lambda p + mu (c1 + t c2)) as a binary form in
/// (lambda, mu); the line with direction parameter t lies in C iff all c_k
/// vanish at t.
fn pencil_restriction_coefficients<F: Field>(
    curve: &HomogeneousPoly<F>,
    chart: &Chart<F>,
) -> Vec<UniPoly<F>> {
    let field = curve.ring().clone();
    let d = curve.degree();
    let p = &chart.cols[2];
    let c1 = &chart.cols[0];
    let c2 = &chart.cols[1];
    // grid[l][m] = coefficient of lambda^l mu^m, a polynomial in t
    let mut grid: Vec<Vec<UniPoly<F>>> =
        vec![vec![UniPoly::zero(field.clone()); d + 2]; d + 2];
    for (e, coeff) in curve.terms() {
        let mut local: Vec<Vec<UniPoly<F>>> =
            vec![vec![UniPoly::zero(field.clone()); d + 2]; d + 2];
        local[0][0] = UniPoly::constant(field.clone(), coeff.clone());
        for var in 0..3 {
            for _ in 0..e[var] {
                // multiply by lambda p[var] + mu (c1[var] + t c2[var])
                let mut next: Vec<Vec<UniPoly<F>>> =
                    vec![vec![UniPoly::zero(field.clone()); d + 2]; d + 2];
                let mu_coeff = UniPoly::new(
                    field.clone(),
                    vec![c1[var].clone(), c2[var].clone()],
                );
                for (l, row) in local.iter().enumerate() {
                    for (m, val) in row.iter().enumerate() {
                        if val.is_zero() {
                            continue;
                        }
                        if !field.is_zero(&p[var]) {
                            let t = val.scale(&p[var]);
                            next[l + 1][m] = next[l + 1][m].add(&t);
                        }
                        let t = val.mul(&mu_coeff);
                        next[l][m + 1] = next[l][m + 1].add(&t);
                    }
                }
                local = next;
            }
        }
        for (l, row) in local.iter().enumerate() {
            for (m, val) in row.iter().enumerate() {
                if !val.is_zero() {
                    grid[l][m] = grid[l][m].add(val);
                }
            }
        }
    }
    (0..=d).map(|k| grid[d - k][k].clone()).collect()
}

fn rational_roots<F: DirectionRoots>(field: &F, g: &UniPoly<F>) -> Vec<F::Elem> {
    let deg = match g.degree() {
        None | Some(0) => return vec![],
        Some(d) => d,
    };
    let form = crate::mpoly::BinaryForm::homogenize(field.clone(), deg, g);
    match field.binary_form_roots(&form) {
        None => vec![],
        Some(roots) => roots
            .into_iter()
            .filter(|((a, _), _)| !field.is_zero(a))
            .map(|((a, b), _)| field.div(&b, &a).expect("nonzero"))
            .collect(),
    }
}

/// Is the line through p with the given direction contained in the curve?
fn line_contained<F: Field>(
    curve: &HomogeneousPoly<F>,
    p: &Point<F>,
    dir: &[F::Elem; 3],
) -> Result<bool, SingularError> {
    let field = curve.ring();
    let d = curve.degree();
    // restrict to lambda p + mu dir and check all d+1 coefficients vanish;
    // sampling d+1 distinct parameter values would need a large enough
    // field, so expand exactly instead
    let mut coeffs = vec![field.zero(); d + 1];
    for (e, c) in curve.terms() {
        // product over vars of (lambda p[var] + mu dir[var])^e[var]
        let mut acc = vec![field.zero(); d + 1];
        acc[0] = c.clone();
        let mut deg = 0usize;
        for var in 0..3 {
            for _ in 0..e[var] {
                let mut next = vec![field.zero(); d + 1];
                for (m, val) in acc.iter().enumerate().take(deg + 1) {
                    if field.is_zero(val) {
                        continue;
                    }
                    next[m] = field.add(&next[m], &field.mul(val, &p[var]));
                    next[m + 1] = field.add(&next[m + 1], &field.mul(val, &dir[var]));
                }
                acc = next;
                deg += 1;
            }
        }
        for (m, val) in acc.iter().enumerate() {
            coeffs[m] = field.add(&coeffs[m], val);
        }
    }
    Ok(coeffs.iter().all(|c| field.is_zero(c)))
}

fn line_through<F: Field>(field: &F, p: &Point<F>, q: &[F::Elem; 3]) -> Line<F> {
    super::cross3(field, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::HomogeneousPoly;
    use crate::rings::{rat, Rationals};

    fn mono(e: [u16; 3], c: i64) -> HomogeneousPoly<Rationals> {
        HomogeneousPoly::monomial(Rationals, e, rat(c, 1))
    }

    fn pt(a: i64, b: i64, c: i64) -> Point<Rationals> {
        [rat(a, 1), rat(b, 1), rat(c, 1)]
    }

    #[test]
    fn transversal_lines_meet_once() {
        let f = mono([1, 0, 0], 1);
        let g = mono([0, 1, 0], 1);
        assert_eq!(intersection_multiplicity(&f, &g, &pt(0, 0, 1)).unwrap(), 1);
    }

    #[test]
    fn tangent_conic_and_line() {
        // parabola x z - y^2 and its tangent line x = 0 at [0:0:1]
        let f = mono([1, 0, 1], 1).add(&mono([0, 2, 0], -1));
        let l = mono([1, 0, 0], 1);
        assert_eq!(intersection_multiplicity(&f, &l, &pt(0, 0, 1)).unwrap(), 2);
    }

    #[test]
    fn cusp_meets_tangent_thrice() {
        // z y^2 - x^3 against y = 0 at the cusp
        let f = mono([0, 2, 1], 1).add(&mono([3, 0, 0], -1));
        let l = mono([0, 1, 0], 1);
        assert_eq!(intersection_multiplicity(&f, &l, &pt(0, 0, 1)).unwrap(), 3);
    }

    #[test]
    fn shared_component_is_an_error() {
        let shared = mono([1, 0, 0], 1).add(&mono([0, 1, 0], -1));
        let f = shared.mul(&mono([0, 0, 1], 1));
        let g = shared.mul(&mono([0, 1, 0], 1));
        assert!(matches!(
            intersection_multiplicity(&f, &g, &pt(0, 0, 1)),
            Err(SingularError::CommonComponent)
        ));
    }

    #[test]
    fn genus_arithmetic() {
        // smooth cubic: genus 1, no deficit
        let g = genus_deficit(3, &[]);
        assert_eq!(g, GenusData { arithmetic: 1, deficit: 0, geometric: 1 });
        // degree 8 with the branch-curve cluster: 21 - 6 - 6 - 8 = 1
        let g = genus_deficit(
            8,
            &[vec![4], vec![3, 3], vec![2, 2], vec![2, 2], vec![2, 2], vec![2, 2]],
        );
        assert_eq!(g.arithmetic, 21);
        assert_eq!(g.deficit, 20);
        assert_eq!(g.geometric, 1);
        // the impossible sextic: deficit 13 exceeds arithmetic genus 10
        let g = genus_deficit(6, &[vec![3], vec![2, 2], vec![2, 2], vec![3, 3]]);
        assert_eq!(g.arithmetic, 10);
        assert_eq!(g.deficit, 13);
        assert!(g.deficit > g.arithmetic);
    }

    #[test]
    fn genus_deficit_additive_over_clusters() {
        let a = genus_deficit(7, &[vec![4], vec![2, 2]]);
        let b = genus_deficit(7, &[vec![4]]);
        let c = genus_deficit(7, &[vec![2, 2]]);
        assert_eq!(a.deficit, b.deficit + c.deficit);
    }

    #[test]
    fn line_component_detected() {
        // C = (x - z) * (x^2 + y^2 - 2 z^2): the line x = z passes through
        // [1:1:1]; scanning that point must find it
        let line = mono([1, 0, 0], 1).add(&mono([0, 0, 1], -1));
        let rest = mono([2, 0, 0], 1).add(&mono([0, 2, 0], 1)).add(&mono([0, 0, 2], -2));
        let c = line.mul(&rest);
        let scan = tangent_lines_not_components(&c, &[pt(1, 1, 1)]).unwrap();
        assert!(!scan.all_clear);
        assert!(!scan.contained_lines.is_empty());
        // a curve with no linear components through the point
        let clean = mono([2, 0, 0], 1).add(&mono([0, 2, 0], 1)).add(&mono([0, 0, 2], -2));
        let scan = tangent_lines_not_components(&clean, &[pt(1, 1, 1)]).unwrap();
        assert!(scan.all_clear);
    }
}
