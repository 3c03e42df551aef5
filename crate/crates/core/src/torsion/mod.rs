//! Torsion-group determination for the double covers: the two-torsion
//! kernel of the branch-component class map over F_2, base points of the
//! tricanonical system located over a finite field, the base-point count to
//! torsion-group conclusion, and the bicanonical checks of the second
//! example.

use thiserror::Error;

use crate::mpoly::{forms_coprime, resultant, HomogeneousPoly, MPolyError, UniPoly};
use crate::picard::{intersect, CurveClassTable, DivClass, PicardError};
use crate::rings::fp::{inv_mod, mul_mod};
use crate::rings::{PrimeField, Rationals, Ring, RingError};
use crate::singular::SingularError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorsionError {
    #[error("branch components do not sum to the branch class")]
    ClassSumMismatch,
    #[error("branch components are not pairwise disjoint on the resolution")]
    ComponentsNotDisjoint,
    #[error("branch class is not two-divisible")]
    OddBranch,
    #[error("the mobile tricanonical part is not a pencil (dimension {0})")]
    NotAPencil(i64),
    #[error("pencil generators share a component")]
    SharedComponent,
    #[error("inconsistent torsion inputs: two-torsion rank {rank}, base points {base_points}")]
    Inconsistent { rank: usize, base_points: usize },
    #[error("class of {name} differs from the bicanonical pullback at coordinates {diff:?}")]
    ClassMismatch { name: String, diff: DivClass },
    #[error("no scalars satisfy the quadric relation: {0}")]
    NoQuadricScalars(String),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    MPoly(#[from] MPolyError),
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Named branch component with its class on the resolution.
#[derive(Debug, Clone)]
pub struct BranchComponent {
    pub name: String,
    pub class: DivClass,
}

/// One two-torsion witness: a subset of components whose class sum is
/// divisible by two.
#[derive(Debug, Clone)]
pub struct TorsionWitness {
    pub subset: Vec<String>,
    pub sum: DivClass,
    pub half: DivClass,
}

/// Output of the two-torsion kernel computation.
#[derive(Debug, Clone)]
pub struct BeauvilleKernel {
    /// Rank of ker(phi)/(Z/2)e; |Pic_2| = 2^rank.
    pub rank: usize,
    /// Kernel representatives other than 0 and the full sum e, one per
    /// quotient generator.
    pub witnesses: Vec<TorsionWitness>,
}

/// F_2-kernel of the map sending subsets of branch components to their
/// class mod 2, quotiented by the full sum. Components must sum to the
/// branch class and be pairwise disjoint at the lattice level.
pub fn beauville_kernel(
    components: &[BranchComponent],
    branch: &DivClass,
) -> Result<BeauvilleKernel, TorsionError> {
    let sum = components
        .iter()
        .fold(branch.scale(0), |acc, c| acc.add(&c.class));
    if &sum != branch {
        return Err(TorsionError::ClassSumMismatch);
    }
    for (i, a) in components.iter().enumerate() {
        for b in &components[..i] {
            if intersect(&a.class, &b.class)? != 0 {
                return Err(TorsionError::ComponentsNotDisjoint);
            }
        }
    }
    // columns: component classes mod 2
    let cols: Vec<Vec<u8>> = components.iter().map(|c| c.class.coords_mod_2()).collect();
    let kernel = gf2_nullspace(&cols);
    // the full sum is always in the kernel since B = 2L
    let e = vec![1u8; components.len()];
    if !kernel_contains(&kernel, &e) {
        return Err(TorsionError::OddBranch);
    }
    let rank = kernel.len().saturating_sub(1);
    // quotient representatives: basis vectors reduced so none equals e or 0
    let mut witnesses = Vec::new();
    for v in &kernel {
        if v == &e || v.iter().all(|&b| b == 0) {
            continue;
        }
        let mut subset = Vec::new();
        let mut sum = branch.scale(0);
        for (i, &bit) in v.iter().enumerate() {
            if bit == 1 {
                subset.push(components[i].name.clone());
                sum = sum.add(&components[i].class);
            }
        }
        let half = sum.half().expect("kernel subsets are two-divisible");
        witnesses.push(TorsionWitness { subset, sum, half });
        if witnesses.len() == rank {
            break;
        }
    }
    Ok(BeauvilleKernel { rank, witnesses })
}

/// Half of a two-divisible class; None when any coordinate is odd.
pub fn half_class(c: &DivClass) -> Option<DivClass> {
    c.half()
}

fn gf2_nullspace(cols: &[Vec<u8>]) -> Vec<Vec<u8>> {
    if cols.is_empty() {
        return vec![];
    }
    let nrows = cols[0].len();
    let ncols = cols.len();
    // row-reduce the matrix whose columns are the inputs
    let mut mat: Vec<Vec<u8>> = (0..nrows)
        .map(|r| (0..ncols).map(|c| cols[c][r] & 1).collect())
        .collect();
    let mut pivot_of_col = vec![None; ncols];
    let mut row = 0;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let Some(pr) = (row..nrows).find(|&r| mat[r][col] == 1) else {
            continue;
        };
        mat.swap(row, pr);
        for r in 0..nrows {
            if r != row && mat[r][col] == 1 {
                for c in 0..ncols {
                    mat[r][c] ^= mat[row][c];
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u8; ncols];
        v[free] = 1;
        for (c, piv) in pivot_of_col.iter().enumerate() {
            if let Some(r) = piv {
                v[c] = mat[*r][free];
            }
        }
        basis.push(v);
    }
    basis
}

fn kernel_contains(basis: &[Vec<u8>], target: &[u8]) -> bool {
    // solve for a combination of basis vectors equal to target over GF(2)
    if basis.is_empty() {
        return target.iter().all(|&b| b == 0);
    }
    let n = target.len();
    let mut rows: Vec<Vec<u8>> = (0..n)
        .map(|r| {
            let mut row: Vec<u8> = basis.iter().map(|v| v[r]).collect();
            row.push(target[r]);
            row
        })
        .collect();
    let cols = basis.len();
    let mut row_i = 0;
    for col in 0..cols {
        let Some(pr) = (row_i..n).find(|&r| rows[r][col] == 1) else {
            continue;
        };
        rows.swap(row_i, pr);
        for r in 0..n {
            if r != row_i && rows[r][col] == 1 {
                let pivot_row = rows[row_i].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *x ^= p;
                }
            }
        }
        row_i += 1;
    }
    // consistent iff no row reduces to (0...0 | 1)
    rows.iter().all(|r| r[..cols].iter().any(|&b| b == 1) || r[cols] == 0)
}

/// The torsion groups a minimal numerical Godeaux surface can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionGroup {
    Trivial,
    Z2,
    Z3,
    Z4,
    Z5,
}

impl std::fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TorsionGroup::Trivial => "0",
            TorsionGroup::Z2 => "Z/2",
            TorsionGroup::Z3 => "Z/3",
            TorsionGroup::Z4 => "Z/4",
            TorsionGroup::Z5 => "Z/5",
        };
        write!(f, "{s}")
    }
}

impl TorsionGroup {
    /// #{T : T != -T} / 2, the base-point count of the tricanonical system.
    pub fn expected_base_points(&self) -> usize {
        match self {
            TorsionGroup::Trivial | TorsionGroup::Z2 => 0,
            TorsionGroup::Z3 | TorsionGroup::Z4 => 1,
            TorsionGroup::Z5 => 2,
        }
    }

    pub fn two_torsion_rank(&self) -> usize {
        match self {
            TorsionGroup::Z2 | TorsionGroup::Z4 => 1,
            _ => 0,
        }
    }
}

/// Combines the two-torsion rank with the tricanonical base-point count.
/// Hard-coded classification constraints: the torsion order is at most
/// five and Z/2 + Z/2 does not occur, so rank is 0 or 1 and each (rank,
/// count) pair pins the group.
pub fn miyaoka_conclusion(
    two_torsion_rank: usize,
    base_points: usize,
) -> Result<TorsionGroup, TorsionError> {
    let group = match (two_torsion_rank, base_points) {
        (0, 0) => TorsionGroup::Trivial,
        (0, 1) => TorsionGroup::Z3,
        (0, 2) => TorsionGroup::Z5,
        (1, 0) => TorsionGroup::Z2,
        (1, 1) => TorsionGroup::Z4,
        _ => {
            return Err(TorsionError::Inconsistent {
                rank: two_torsion_rank,
                base_points,
            })
        }
    };
    Ok(group)
}

/// A located intersection point of the two pencil generators over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatedPoint {
    pub point: [u64; 3],
    pub multiplicity: usize,
    pub in_cluster: bool,
    pub on_branch: bool,
}

/// Base-point analysis of the mobile tricanonical pencil over F_p: locates
/// every intersection point of the two generators, verifies the Bezout
/// total (which certifies that no intersection hides over an extension
/// field), and counts the residual points that lie on the branch curve.
#[derive(Debug, Clone)]
pub struct TricanonicalBasePoints {
    pub points: Vec<LocatedPoint>,
    pub bezout_total: usize,
    /// residual (non-cluster) intersection points
    pub residual: Vec<[u64; 3]>,
    /// residual points lying on the branch curve: the base points of the
    /// tricanonical system
    pub base_points: Vec<[u64; 3]>,
}

pub fn tricanonical_base_points(
    s0: &HomogeneousPoly<PrimeField>,
    s1: &HomogeneousPoly<PrimeField>,
    cluster: &[[u64; 3]],
    on_branch: impl Fn(&[u64; 3]) -> bool,
) -> Result<TricanonicalBasePoints, TorsionError> {
    let field = *s0.ring();
    let p = field.p;
    if !forms_coprime(s0, s1)? {
        return Err(TorsionError::SharedComponent);
    }
    let mut points = common_zeros(s0, s1)?;
    points.sort();
    points.dedup();
    let normalize = |pt: &[u64; 3]| normalize_point(p, pt);
    let cluster_norm: Vec<[u64; 3]> = cluster.iter().map(&normalize).collect();
    let mut located = Vec::new();
    let mut total = 0usize;
    for pt in &points {
        let mult = crate::singular::intersection_multiplicity(
            s0,
            s1,
            &[field.elem(pt[0]), field.elem(pt[1]), field.elem(pt[2])],
        )?;
        total += mult;
        located.push(LocatedPoint {
            point: *pt,
            multiplicity: mult,
            in_cluster: cluster_norm.contains(pt),
            on_branch: on_branch(pt),
        });
    }
    let residual: Vec<[u64; 3]> = located
        .iter()
        .filter(|l| !l.in_cluster)
        .map(|l| l.point)
        .collect();
    let base_points: Vec<[u64; 3]> = located
        .iter()
        .filter(|l| !l.in_cluster && l.on_branch)
        .map(|l| l.point)
        .collect();
    Ok(TricanonicalBasePoints {
        points: located,
        bezout_total: total,
        residual,
        base_points,
    })
}

/// Canonical projective representative: last nonzero coordinate scaled
/// to 1.
pub fn normalize_point(p: u64, pt: &[u64; 3]) -> [u64; 3] {
    let idx = (0..3).rev().find(|&i| pt[i] % p != 0).expect("nonzero point");
    let inv = inv_mod(pt[idx], p).expect("nonzero coordinate");
    [
        mul_mod(pt[0], inv, p),
        mul_mod(pt[1], inv, p),
        mul_mod(pt[2], inv, p),
    ]
}

/// All common zeros of two coprime forms over F_p, by eliminating z with a
/// resultant and scanning each root's fiber with a univariate gcd.
pub fn common_zeros(
    f: &HomogeneousPoly<PrimeField>,
    g: &HomogeneousPoly<PrimeField>,
) -> Result<Vec<[u64; 3]>, TorsionError> {
    let field = *f.ring();
    let p = field.p;
    let mut out = Vec::new();
    let res = resultant(f, g, 2)?;
    if res.is_zero() {
        return Err(TorsionError::SharedComponent);
    }
    // directions [x0 : y0] on which the resultant vanishes
    let mut directions = Vec::new();
    for t in 0..p {
        let pt = [field.elem(1), field.elem(t), field.elem(0)];
        if field.is_zero(&res.evaluate(&pt)?) {
            directions.push((1u64, t));
        }
    }
    let at_inf = [field.elem(0), field.elem(1), field.elem(0)];
    if field.is_zero(&res.evaluate(&at_inf)?) {
        directions.push((0, 1));
    }
    for (x0, y0) in directions {
        // the fiber {[x0 : y0 : t]}: common roots in t of both restrictions
        let uf = restrict_fiber(f, x0, y0);
        let ug = restrict_fiber(g, x0, y0);
        let gcd = uf.gcd(&ug);
        if let Some(d) = gcd.degree() {
            if d >= 1 {
                for t in 0..p {
                    if field.is_zero(&gcd.eval(&field.elem(t))) {
                        out.push(normalize_point(p, &[x0, y0, t]));
                    }
                }
            }
        }
        // the fiber's point at infinity [x0 : y0 : 0]
        let pt = [field.elem(x0), field.elem(y0), field.elem(0)];
        if field.is_zero(&f.evaluate(&pt)?) && field.is_zero(&g.evaluate(&pt)?) {
            out.push(normalize_point(p, &[x0, y0, 0]));
        }
    }
    // [0:0:1] sits over no direction
    let origin = [field.elem(0), field.elem(0), field.elem(1)];
    if field.is_zero(&f.evaluate(&origin)?) && field.is_zero(&g.evaluate(&origin)?) {
        out.push([0, 0, 1]);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn restrict_fiber(
    f: &HomogeneousPoly<PrimeField>,
    x0: u64,
    y0: u64,
) -> UniPoly<PrimeField> {
    let field = *f.ring();
    let p = field.p;
    let mut coeffs = vec![field.elem(0); f.degree() + 1];
    for (e, c) in f.terms() {
        let mut v = c.value;
        for _ in 0..e[0] {
            v = mul_mod(v, x0, p);
        }
        for _ in 0..e[1] {
            v = mul_mod(v, y0, p);
        }
        let k = e[2] as usize;
        coeffs[k] = field.add(&coeffs[k], &field.elem(v));
    }
    UniPoly::new(field, coeffs)
}

/// Verdict of the bicanonical pencil check of the second example.
#[derive(Debug, Clone)]
pub struct BicanonicalPencil {
    pub target_class: DivClass,
    pub class_of_y0: DivClass,
    pub class_of_y1: DivClass,
    pub no_common_component: bool,
}

/// Verifies that the two bicanonical pencil generators
/// y0 = Q1 + Q2 + 2 F1 + 4 G1 + E1 and y1 = C2 + ltilde + 2 E6 both have
/// class equal to the pullback of twice the minimal-model canonical class,
/// and that the two divisors share no component.
pub fn bicanonical_pencil_check(
    table: &CurveClassTable,
    q1: &HomogeneousPoly<Rationals>,
    q2: &HomogeneousPoly<Rationals>,
    c2: &HomogeneousPoly<Rationals>,
    ltilde: &HomogeneousPoly<Rationals>,
) -> Result<BicanonicalPencil, TorsionError> {
    // target: 2K_Y + 2L - sum E_i (the pullback of 2K of the minimal model)
    let k = table.config.canonical_class();
    let l = table.get("L")?;
    let mut target = k.scale(2).add(&l.scale(2));
    for i in 1..=5 {
        target = target.sub(table.get(&format!("E{i}"))?);
    }
    let y0 = table
        .get("Q1bar")?
        .add(table.get("Q2bar")?)
        .add(&table.get("F1")?.scale(2))
        .add(&table.get("G1")?.scale(4))
        .add(table.get("E1")?);
    if y0 != target {
        return Err(TorsionError::ClassMismatch {
            name: "y0".into(),
            diff: y0.sub(&target),
        });
    }
    let y1 = table
        .get("C2bar")?
        .add(table.get("ltildebar")?)
        .add(&table.get("E6")?.scale(2));
    if y1 != target {
        return Err(TorsionError::ClassMismatch {
            name: "y1".into(),
            diff: y1.sub(&target),
        });
    }
    // plane parts Q1 Q2 and C2 ltilde must share no component; the
    // exceptional supports {F1, G1, E1} and {E6} are disjoint by name
    let mut coprime = true;
    for a in [q1, q2] {
        for b in [c2, ltilde] {
            if !forms_coprime(a, b)? {
                coprime = false;
            }
        }
    }
    Ok(BicanonicalPencil {
        target_class: target,
        class_of_y0: y0,
        class_of_y1: y1,
        no_common_component: coprime,
    })
}

/// Exact scalars witnessing the quadric relation among the four
/// bicanonical sections: (Q1 Q2 - 2 t C2 ltilde)^2 =
/// u (Q1 Q2) Q^2 - 4 v (C1 C2) l^2 as degree-8 plane forms.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricRelation {
    pub t: num_rational::BigRational,
    pub u: num_rational::BigRational,
    pub v: num_rational::BigRational,
}

pub fn verify_bicanonical_quadric_relation(
    q1: &HomogeneousPoly<Rationals>,
    q2: &HomogeneousPoly<Rationals>,
    c1: &HomogeneousPoly<Rationals>,
    c2: &HomogeneousPoly<Rationals>,
    q: &HomogeneousPoly<Rationals>,
    l: &HomogeneousPoly<Rationals>,
    ltilde: &HomogeneousPoly<Rationals>,
) -> Result<QuadricRelation, TorsionError> {
    let field = Rationals;
    let q1q2 = q1.mul(q2);
    let c2lt = c2.mul(ltilde);
    let lhs0 = q1q2.mul(&q1q2);
    let lhs1 = q1q2.mul(&c2lt).scale(&field.from_i64(-4));
    let lhs2 = c2lt.mul(&c2lt).scale(&field.from_i64(4));
    let rhs_u = q1q2.mul(&q.mul(q));
    let rhs_v = c1.mul(c2).mul(&l.mul(l)).scale(&field.from_i64(-4));
    // lhs0 + t lhs1 + t^2 lhs2 - u rhs_u - v rhs_v = 0, solved linearly in
    // (t, t^2, u, v) and checked for consistency of the square
    let monomials = crate::singular::monomials_of_degree(8);
    let rows: Vec<Vec<_>> = monomials
        .iter()
        .map(|e| {
            vec![
                lhs1.coeff(e),
                lhs2.coeff(e),
                field.neg(&rhs_u.coeff(e)),
                field.neg(&rhs_v.coeff(e)),
            ]
        })
        .collect();
    let rhs: Vec<_> = monomials.iter().map(|e| field.neg(&lhs0.coeff(e))).collect();
    let m = crate::linalg::Matrix::from_rows(rows.clone());
    if crate::linalg::rank(&field, m.clone()) != 4 {
        return Err(TorsionError::NoQuadricScalars(
            "coefficient system is rank-deficient".into(),
        ));
    }
    let sol = crate::linalg::solve(&field, m.clone(), &rhs).map_err(|_| {
        TorsionError::NoQuadricScalars("coefficient system is inconsistent".into())
    })?;
    // uniqueness granted by rank 4; verify the nonlinear compatibility
    let (t, t2, u, v) = (sol[0].clone(), sol[1].clone(), sol[2].clone(), sol[3].clone());
    if &t * &t != t2 {
        return Err(TorsionError::NoQuadricScalars(format!(
            "solution has t = {t} but t^2-slot {t2}"
        )));
    }
    // identity check by full expansion
    let mut total = lhs0.clone();
    total = total.add(&lhs1.scale(&t));
    total = total.add(&lhs2.scale(&t2));
    total = total.add(&rhs_u.scale(&field.neg(&u)));
    total = total.add(&rhs_v.scale(&field.neg(&v)));
    if !total.is_zero() {
        return Err(TorsionError::NoQuadricScalars(
            "solved scalars do not satisfy the identity".into(),
        ));
    }
    Ok(QuadricRelation { t, u, v })
}
