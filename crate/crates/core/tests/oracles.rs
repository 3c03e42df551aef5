//! Exhaustive finite-field oracles: brute-force scans over the projective
//! plane mod 30047 that independently confirm what the resultant machinery
//! and the Groebner certificate report. The scans use raw modular
//! arithmetic on purpose, sharing no code path with the implementations
//! they check.

use once_cell::sync::Lazy;
use rayon::prelude::*;

use doubleplane::mpoly::HomogeneousPoly;
use doubleplane::rings::{PrimeField, Ring};
use doubleplane::surfaces::campedelli::{DEFAULT_PRIME, PAPER_BRANCHES};
use doubleplane::surfaces::Campedelli;
use doubleplane::torsion::{common_zeros, normalize_point};

static CAMPEDELLI: Lazy<Campedelli> =
    Lazy::new(|| Campedelli::load(DEFAULT_PRIME, PAPER_BRANCHES).expect("assets load"));

const P: u64 = DEFAULT_PRIME;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

/// Coefficient table: row j holds the x-coefficients of the y^j part in the
/// chart z = 1, so f(x, y, 1) = sum_j (sum_i t[j][i] x^i) y^j.
fn chart_table(f: &HomogeneousPoly<PrimeField>) -> Vec<Vec<u64>> {
    let d = f.degree();
    let mut table = vec![vec![0u64; d + 1]; d + 1];
    for (e, c) in f.terms() {
        table[e[1] as usize][e[0] as usize] = c.value;
    }
    table
}

/// y-coefficients of f(x, y, 1) for a fixed x, by Horner in x.
fn fiber_coeffs(table: &[Vec<u64>], x: u64) -> Vec<u64> {
    table
        .iter()
        .map(|row| {
            let mut cx = 0u64;
            for &c in row.iter().rev() {
                cx = (mul(cx, x) + c) % P;
            }
            cx
        })
        .collect()
}

fn eval_fiber(coeffs: &[u64], y: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = (mul(acc, y) + c) % P;
    }
    acc
}

fn eval_poly(f: &HomogeneousPoly<PrimeField>, pt: &[u64; 3]) -> u64 {
    let field = *f.ring();
    f.evaluate(&[field.elem(pt[0]), field.elem(pt[1]), field.elem(pt[2])])
        .unwrap()
        .value
}

/// All projective rational points where both forms vanish, by scanning the
/// whole plane.
fn scan_common_zeros(
    f: &HomogeneousPoly<PrimeField>,
    g: &HomogeneousPoly<PrimeField>,
) -> Vec<[u64; 3]> {
    let tf = chart_table(f);
    let tg = chart_table(g);
    let mut found: Vec<[u64; 3]> = (0..P)
        .into_par_iter()
        .flat_map_iter(|x| {
            let cf = fiber_coeffs(&tf, x);
            let cg = fiber_coeffs(&tg, x);
            (0..P).filter_map(move |y| {
                if eval_fiber(&cf, y) == 0 && eval_fiber(&cg, y) == 0 {
                    Some([x, y, 1])
                } else {
                    None
                }
            })
        })
        .collect();
    // the line z = 0
    for y in 0..P {
        let pt = [1, y, 0];
        if eval_poly(f, &pt) == 0 && eval_poly(g, &pt) == 0 {
            found.push(pt);
        }
    }
    let pt = [0, 1, 0];
    if eval_poly(f, &pt) == 0 && eval_poly(g, &pt) == 0 {
        found.push(pt);
    }
    let mut found: Vec<[u64; 3]> = found.iter().map(|p| normalize_point(P, p)).collect();
    found.sort();
    found.dedup();
    found
}

#[test]
fn sextic_pencil_intersections_match_full_plane_scan() {
    let ex = &*CAMPEDELLI;
    let (s0, s1) = ex.sextic_pencil().unwrap();
    // implementation path: resultant elimination plus fiber gcds
    let mut via_resultant = common_zeros(&s0, &s1).unwrap();
    via_resultant.sort();
    // oracle: the full projective plane
    let via_scan = scan_common_zeros(&s0, &s1);
    assert_eq!(via_resultant, via_scan);
    // exactly the six cluster points plus two residual ones
    assert_eq!(via_scan.len(), 8);
    let cluster: Vec<[u64; 3]> = ex
        .reduced_points()
        .unwrap()
        .iter()
        .map(|p| normalize_point(P, p))
        .collect();
    let residual: Vec<[u64; 3]> = via_scan
        .iter()
        .filter(|p| !cluster.contains(p))
        .cloned()
        .collect();
    assert_eq!(residual.len(), 2);
    // neither residual point lies on the octic or the conic
    for pt in &residual {
        assert_ne!(eval_poly(&ex.octic_p, pt), 0, "residual point on the octic");
        assert_ne!(eval_poly(&ex.conic_p, pt), 0, "residual point on the conic");
    }
}

#[test]
fn smoothness_certificate_agrees_with_rational_point_scan() {
    let ex = &*CAMPEDELLI;
    let grad = ex.octic_p.gradient();
    let tables: Vec<Vec<Vec<u64>>> = grad.iter().map(chart_table).collect();
    let mut singular: Vec<[u64; 3]> = (0..P)
        .into_par_iter()
        .flat_map_iter(|x| {
            let c0 = fiber_coeffs(&tables[0], x);
            let c1 = fiber_coeffs(&tables[1], x);
            let c2 = fiber_coeffs(&tables[2], x);
            (0..P).filter_map(move |y| {
                if eval_fiber(&c0, y) == 0 && eval_fiber(&c1, y) == 0 && eval_fiber(&c2, y) == 0 {
                    Some([x, y, 1])
                } else {
                    None
                }
            })
        })
        .collect();
    for y in 0..P {
        let pt = [1, y, 0];
        if grad.iter().all(|g| eval_poly(g, &pt) == 0) {
            singular.push(pt);
        }
    }
    let pt = [0, 1, 0];
    if grad.iter().all(|g| eval_poly(g, &pt) == 0) {
        singular.push(pt);
    }
    let mut singular: Vec<[u64; 3]> = singular.iter().map(|p| normalize_point(P, p)).collect();
    singular.sort();
    let mut cluster: Vec<[u64; 3]> = ex
        .reduced_points()
        .unwrap()
        .iter()
        .map(|p| normalize_point(P, p))
        .collect();
    cluster.sort();
    // the rational singular points are exactly the six cluster points; the
    // Groebner certificate extends this over the algebraic closure
    assert_eq!(singular, cluster);
}

#[test]
fn no_rational_line_through_cluster_is_contained() {
    let ex = &*CAMPEDELLI;
    let field = ex.field_p();
    let pts = ex.reduced_points().unwrap();
    // a contained line through a point vanishes at nine distinct points of
    // each candidate line, which forces the degree-8 restriction to vanish
    let line_contained = |p: &[u64; 3], d: &[u64; 3]| -> bool {
        (0..=8u64).all(|lambda| {
            let q = [
                (mul(lambda, p[0]) + d[0]) % P,
                (mul(lambda, p[1]) + d[1]) % P,
                (mul(lambda, p[2]) + d[2]) % P,
            ];
            if q == [0, 0, 0] {
                return true;
            }
            eval_poly(&ex.octic_p, &q) == 0
        }) && eval_poly(&ex.octic_p, p) == 0
    };
    for p in &pts {
        // complete p to a basis with two standard vectors: the p + 1 lines
        // through p are spanned by p together with a + t b or b alone
        let k = (0..3).find(|&k| p[k] % P != 0).expect("nonzero point");
        let mut others = (0..3).filter(|&i| i != k);
        let (i, j) = (others.next().unwrap(), others.next().unwrap());
        let mut a = [0u64; 3];
        a[i] = 1;
        let mut b = [0u64; 3];
        b[j] = 1;
        let mut dirs: Vec<[u64; 3]> = (0..P)
            .map(|t| {
                [
                    (a[0] + mul(t, b[0])) % P,
                    (a[1] + mul(t, b[1])) % P,
                    (a[2] + mul(t, b[2])) % P,
                ]
            })
            .collect();
        dirs.push(b);
        let contained = dirs.par_iter().any(|d| line_contained(p, d));
        assert!(!contained, "a rational line through {p:?} lies in the octic");
    }
    // and the closure-level certificate agrees
    let pts3: Vec<_> = pts
        .iter()
        .map(|p| [field.elem(p[0]), field.elem(p[1]), field.elem(p[2])])
        .collect();
    let scan =
        doubleplane::singular::tangent_lines_not_components(&ex.octic_p, &pts3).unwrap();
    assert!(scan.all_clear);
}
