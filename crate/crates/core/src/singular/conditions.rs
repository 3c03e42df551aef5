//! Linear conditions imposed on the coefficient space of degree-d ternary
//! forms by prescribed singularities, and the kernel extraction that
//! reconstructs the branch octic.
//!
//! Every condition is a Taylor-coefficient extraction in a chart centered at
//! the point; when a tangent line is assigned the chart puts the tangent at
//! {v = 0}. With the exceptional direction on the blow-up written [1:0],
//! the strict transform of a germ of multiplicity m is
//! G(s, w) = sum_k s^(k-m) F_k(1, w), so forcing G to vanish to order c at
//! the infinitely near point pins the chart coefficients
//! { (m + a - b, b) : a + b <= c - 1 }.

use crate::linalg::{determinant, nullspace, rank, Matrix};
use crate::mpoly::{Exp, HomogeneousPoly};
use crate::rings::Field;

use super::{Chart, Line, LocalCurve, Point, SingularError, SingularityKind};

/// Monomials of total degree d in ascending lexicographic exponent order,
/// the same order `HomogeneousPoly` iterates terms in.
pub fn monomials_of_degree(d: usize) -> Vec<Exp> {
    let mut out = Vec::new();
    for i in 0..=d as u16 {
        for j in 0..=(d as u16 - i) {
            out.push([i, j, d as u16 - i - j]);
        }
    }
    out.sort();
    out
}

/// A (possibly infinitely near) point: a base point plus the tangent
/// directions selecting the infinitely near points at successive levels.
/// Chains of length one suffice for every singularity in this pipeline.
#[derive(Clone, Debug)]
pub struct PointSpec<F: Field> {
    pub base: Point<F>,
    pub chain: Vec<Line<F>>,
}

impl<F: Field> PointSpec<F> {
    pub fn simple(base: Point<F>) -> Self {
        PointSpec { base, chain: vec![] }
    }

    pub fn with_tangent(base: Point<F>, tangent: Line<F>) -> Self {
        PointSpec { base, chain: vec![tangent] }
    }
}

/// A prescribed singularity at a (possibly infinitely near) point.
#[derive(Clone, Debug)]
pub struct SingularitySpec<F: Field> {
    pub at: PointSpec<F>,
    pub kind: SingularityKind,
}

impl<F: Field> SingularitySpec<F> {
    pub fn tangent(&self) -> Option<&Line<F>> {
        self.at.chain.first()
    }

    /// Fixed per-kind row counts: mult-m is m(m+1)/2, tacnode 6, cusp 5,
    /// infinitely near triple 12.
    pub fn row_count(&self) -> usize {
        match self.kind {
            SingularityKind::SimplePass => {
                if self.tangent().is_some() {
                    2
                } else {
                    1
                }
            }
            SingularityKind::OrdinaryMultiple(m) => (m as usize) * (m as usize + 1) / 2,
            SingularityKind::Cusp => 5,
            SingularityKind::Tacnode => 6,
            SingularityKind::InfinitelyNearTriple => 12,
        }
    }
}

/// Chart coefficient positions for a multiplicity-m point: all Taylor
/// coefficients of total order below m.
fn mult_positions(m: u32) -> Vec<(u16, u16)> {
    let mut v = Vec::new();
    for i in 0..m as u16 {
        for j in 0..(m as u16 - i) {
            v.push((i, j));
        }
    }
    v.sort();
    v
}

/// Extra positions forcing the strict transform of a multiplicity-m germ to
/// vanish to order c at the infinitely near point on the tangent {v = 0}.
fn cluster_positions(m: u32, c: u32) -> Vec<(u16, u16)> {
    let mut v = Vec::new();
    for a in 0..c {
        for b in 0..(c - a) {
            if b <= m + a {
                v.push(((m + a - b) as u16, b as u16));
            }
        }
    }
    v.sort();
    v.dedup();
    v
}

/// Accumulates condition rows against a fixed monomial basis.
#[derive(Clone, Debug)]
pub struct ConditionSystem<F: Field> {
    field: F,
    degree: usize,
    monomials: Vec<Exp>,
    rows: Vec<Vec<F::Elem>>,
    labels: Vec<String>,
}

impl<F: Field> ConditionSystem<F> {
    pub fn new(field: F, degree: usize) -> Self {
        let monomials = monomials_of_degree(degree);
        ConditionSystem { field, degree, monomials, rows: vec![], labels: vec![] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn monomials(&self) -> &[Exp] {
        &self.monomials
    }

    pub fn coefficient_count(&self) -> usize {
        self.monomials.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Taylor-coefficient rows at the given chart positions.
    fn push_chart_rows(
        &mut self,
        chart: &Chart<F>,
        positions: &[(u16, u16)],
        label: &str,
    ) {
        let f = self.field.clone();
        let mut new_rows: Vec<Vec<F::Elem>> =
            positions.iter().map(|_| Vec::with_capacity(self.monomials.len())).collect();
        for e in &self.monomials {
            let mono = HomogeneousPoly::monomial(f.clone(), *e, f.one());
            let local = LocalCurve::from_chart(&mono, chart);
            for (row, &(i, j)) in new_rows.iter_mut().zip(positions) {
                row.push(local.coeff(i, j));
            }
        }
        for (row, &(i, j)) in new_rows.into_iter().zip(positions) {
            self.rows.push(row);
            self.labels.push(format!("{label}[{i},{j}]"));
        }
    }

    /// Vanishing to order m at the point: m(m+1)/2 rows.
    pub fn add_multiplicity(
        &mut self,
        point: &Point<F>,
        m: u32,
        label: &str,
    ) -> Result<(), SingularError> {
        let chart = Chart::at_point(&self.field, point)?;
        self.push_chart_rows(&chart, &mult_positions(m), label);
        Ok(())
    }

    /// Multiplicity m at the point plus strict transform of order >= c at
    /// the infinitely near point along the tangent.
    pub fn add_cluster(
        &mut self,
        point: &Point<F>,
        tangent: &Line<F>,
        m: u32,
        c: u32,
        label: &str,
    ) -> Result<(), SingularError> {
        let chart = Chart::with_tangent(&self.field, point, tangent)?;
        self.push_chart_rows(&chart, &mult_positions(m), &format!("{label}.mult"));
        self.push_chart_rows(&chart, &cluster_positions(m, c), &format!("{label}.infnear"));
        Ok(())
    }

    /// Rows for a prescribed singularity.
    pub fn add_singularity(
        &mut self,
        spec: &SingularitySpec<F>,
        label: &str,
    ) -> Result<(), SingularError> {
        let p = &spec.at.base;
        match spec.kind {
            SingularityKind::SimplePass => match spec.tangent() {
                None => {
                    let chart = Chart::at_point(&self.field, p)?;
                    self.push_chart_rows(&chart, &[(0, 0)], label);
                    Ok(())
                }
                Some(t) => self.add_cluster(p, t, 1, 1, label),
            },
            SingularityKind::OrdinaryMultiple(m) => self.add_multiplicity(p, m, label),
            SingularityKind::Tacnode => {
                let t = spec.tangent().ok_or(SingularError::MissingTangent)?;
                self.add_cluster(p, t, 2, 2, label)
            }
            SingularityKind::Cusp => {
                // tacnode rows minus the last strict-transform row: the cone
                // is the square of the tangent but the transform may leave
                // the exceptional point immediately
                let t = spec.tangent().ok_or(SingularError::MissingTangent)?;
                let chart = Chart::with_tangent(&self.field, p, t)?;
                self.push_chart_rows(&chart, &mult_positions(2), &format!("{label}.mult"));
                self.push_chart_rows(&chart, &[(1, 1), (2, 0)], &format!("{label}.cone"));
                Ok(())
            }
            SingularityKind::InfinitelyNearTriple => {
                let t = spec.tangent().ok_or(SingularError::MissingTangent)?;
                self.add_cluster(p, t, 3, 3, label)
            }
        }
    }

    /// Vanishing at the point (one row).
    pub fn add_pass_through(&mut self, point: &Point<F>, label: &str) -> Result<(), SingularError> {
        let chart = Chart::at_point(&self.field, point)?;
        self.push_chart_rows(&chart, &[(0, 0)], label);
        Ok(())
    }

    pub fn matrix(&self) -> Matrix<F> {
        Matrix::from_rows(self.rows.clone())
    }

    pub fn rank(&self) -> usize {
        rank(&self.field, self.matrix())
    }

    /// Solutions as polynomials, one per nullspace basis vector.
    pub fn solution_basis(&self) -> Vec<HomogeneousPoly<F>> {
        nullspace(&self.field, self.matrix())
            .into_iter()
            .map(|v| self.poly_from_vector(&v))
            .collect()
    }

    pub fn poly_from_vector(&self, v: &[F::Elem]) -> HomogeneousPoly<F> {
        HomogeneousPoly::new(
            self.field.clone(),
            self.degree,
            self.monomials.iter().cloned().zip(v.iter().cloned()),
        )
        .expect("monomials carry the right degree")
    }

    /// Evaluate one row as a linear functional on a polynomial.
    pub fn apply_row(&self, row: usize, poly: &HomogeneousPoly<F>) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (entry, e) in self.rows[row].iter().zip(&self.monomials) {
            acc = f.add(&acc, &f.mul(entry, &poly.coeff(e)));
        }
        acc
    }
}

/// Projective dimension of the linear system of degree-d curves satisfying
/// the given singularity specs: (nullity of the stacked conditions) - 1, so
/// -1 means the system is empty.
pub fn linear_system_dimension<F: Field>(
    field: &F,
    degree: usize,
    specs: &[SingularitySpec<F>],
) -> Result<i64, SingularError> {
    let mut sys = ConditionSystem::new(field.clone(), degree);
    for (i, spec) in specs.iter().enumerate() {
        sys.add_singularity(spec, &format!("s{i}"))?;
    }
    let nullity = sys.coefficient_count() - sys.rank();
    Ok(nullity as i64 - 1)
}

/// A condition system restricted to the coefficients not killed by
/// structural (coordinate-point) conditions.
#[derive(Clone, Debug)]
pub struct ReducedSystem<F: Field> {
    pub field: F,
    pub degree: usize,
    /// Surviving monomials, ascending lexicographic.
    pub free_monomials: Vec<Exp>,
    pub rows: Vec<Vec<F::Elem>>,
    pub labels: Vec<String>,
}

impl<F: Field> ReducedSystem<F> {
    /// Imposes `structural` first and checks each of those rows pins a
    /// single coefficient to zero (which holds for coordinate points with
    /// coordinate tangents); the remaining specs' rows are restricted to
    /// the surviving coefficients.
    pub fn build(
        field: &F,
        degree: usize,
        structural: &[SingularitySpec<F>],
        imposed: &[SingularitySpec<F>],
    ) -> Result<Self, SingularError> {
        let mut sys = ConditionSystem::new(field.clone(), degree);
        for (i, spec) in structural.iter().enumerate() {
            sys.add_singularity(spec, &format!("struct{i}"))?;
        }
        let mut killed = vec![false; sys.coefficient_count()];
        for row in sys.rows() {
            let nonzero: Vec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, e)| !field.is_zero(e))
                .map(|(i, _)| i)
                .collect();
            if nonzero.len() != 1 {
                return Err(SingularError::DegenerateSystem {
                    rank: nonzero.len(),
                    expected: 1,
                });
            }
            killed[nonzero[0]] = true;
        }
        let free: Vec<usize> = (0..sys.coefficient_count()).filter(|&i| !killed[i]).collect();
        let free_monomials: Vec<Exp> = free.iter().map(|&i| sys.monomials()[i]).collect();

        let mut rest = ConditionSystem::new(field.clone(), degree);
        for (i, spec) in imposed.iter().enumerate() {
            rest.add_singularity(spec, &format!("cond{i}"))?;
        }
        let rows: Vec<Vec<F::Elem>> = rest
            .rows()
            .iter()
            .map(|row| free.iter().map(|&c| row[c].clone()).collect())
            .collect();
        Ok(ReducedSystem {
            field: field.clone(),
            degree,
            free_monomials,
            rows,
            labels: rest.labels().to_vec(),
        })
    }

    pub fn matrix(&self) -> Matrix<F> {
        Matrix::from_rows(self.rows.clone())
    }

    pub fn poly_from_vector(&self, v: &[F::Elem]) -> HomogeneousPoly<F> {
        HomogeneousPoly::new(
            self.field.clone(),
            self.degree,
            self.free_monomials.iter().cloned().zip(v.iter().cloned()),
        )
        .expect("free monomials carry the right degree")
    }
}

/// Kernel of an r x (r+1) exact matrix via signed maximal minors:
/// v_j = (-1)^j det(M with column j deleted). Computed as the nullspace
/// vector rescaled onto the minor normalization by one determinant; the
/// Laplace identity makes the two proportional, and the rescaling fixes the
/// scalar exactly. Errors when the rank is below r (kernel dimension > 1).
pub fn kernel_via_signed_minors<F: Field>(
    field: &F,
    m: &Matrix<F>,
) -> Result<Vec<F::Elem>, SingularError> {
    assert_eq!(m.cols, m.rows + 1, "signed-minor kernel needs an r x (r+1) matrix");
    let r = rank(field, m.clone());
    if r < m.rows {
        return Err(SingularError::DegenerateSystem { rank: r, expected: m.rows });
    }
    let ns = nullspace(field, m.clone());
    debug_assert_eq!(ns.len(), 1);
    let w = &ns[0];
    let j0 = w
        .iter()
        .position(|c| !field.is_zero(c))
        .expect("rank-r kernel vector is nonzero");
    let minor = determinant(field, m.without_column(field, j0));
    let mut scale = field.div(&minor, &w[j0])?;
    if j0 % 2 == 1 {
        scale = field.neg(&scale);
    }
    let v: Vec<F::Elem> = w.iter().map(|c| field.mul(c, &scale)).collect();
    debug_assert!(m.apply(field, &v).iter().all(|x| field.is_zero(x)));
    Ok(v)
}

/// The single extra row distinguishing a tacnode from a cusp at a tangent
/// point: the strict transform's first-order coefficient along the
/// exceptional direction (chart position (m+1, 0) for a double point).
pub fn residual_rows_for<F: Field>(
    field: &F,
    degree: usize,
    point: &Point<F>,
    tangent: &Line<F>,
) -> Result<ConditionSystem<F>, SingularError> {
    let mut sys = ConditionSystem::new(field.clone(), degree);
    let chart = Chart::with_tangent(field, point, tangent)?;
    sys.push_chart_rows(&chart, &[(3, 0)], "residual");
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{rat, Rationals};

    fn pt(a: i64, b: i64, c: i64) -> Point<Rationals> {
        [rat(a, 1), rat(b, 1), rat(c, 1)]
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(8).len(), 45);
        assert_eq!(monomials_of_degree(2).len(), 6);
        assert_eq!(monomials_of_degree(6).len(), 28);
    }

    #[test]
    fn row_count_table() {
        let spec = |kind, tangent: Option<Line<Rationals>>| -> SingularitySpec<Rationals> {
            SingularitySpec {
                at: match tangent {
                    Some(t) => PointSpec::with_tangent(pt(0, 0, 1), t),
                    None => PointSpec::simple(pt(0, 0, 1)),
                },
                kind,
            }
        };
        let t = [rat(0, 1), rat(1, 1), rat(0, 1)];
        assert_eq!(spec(SingularityKind::OrdinaryMultiple(2), None).row_count(), 3);
        assert_eq!(spec(SingularityKind::OrdinaryMultiple(4), None).row_count(), 10);
        assert_eq!(spec(SingularityKind::Tacnode, Some(t.clone())).row_count(), 6);
        assert_eq!(spec(SingularityKind::Cusp, Some(t.clone())).row_count(), 5);
        assert_eq!(
            spec(SingularityKind::InfinitelyNearTriple, Some(t)).row_count(),
            12
        );
    }

    #[test]
    fn emitted_rows_match_declared_counts() {
        let f = Rationals;
        let t = [rat(0, 1), rat(1, 1), rat(0, 1)];
        for (kind, want) in [
            (SingularityKind::OrdinaryMultiple(4), 10),
            (SingularityKind::Tacnode, 6),
            (SingularityKind::Cusp, 5),
            (SingularityKind::InfinitelyNearTriple, 12),
        ] {
            let mut sys = ConditionSystem::new(f, 8);
            let spec = SingularitySpec {
                at: PointSpec::with_tangent(pt(0, 0, 1), t.clone()),
                kind,
            };
            sys.add_singularity(&spec, "t").unwrap();
            assert_eq!(sys.row_count(), want, "{kind:?}");
            assert_eq!(spec.row_count(), want);
        }
    }

    #[test]
    fn tacnode_rows_annihilate_model_tacnode() {
        // z^2 y^2 - x^4 has a tacnode at [0:0:1] tangent to y = 0
        let f = crate::mpoly::HomogeneousPoly::new(
            Rationals,
            4,
            vec![([0, 2, 2], rat(1, 1)), ([4, 0, 0], rat(-1, 1))],
        )
        .unwrap();
        let mut sys = ConditionSystem::new(Rationals, 4);
        let spec = SingularitySpec {
            at: PointSpec::with_tangent(pt(0, 0, 1), [rat(0, 1), rat(1, 1), rat(0, 1)]),
            kind: SingularityKind::Tacnode,
        };
        sys.add_singularity(&spec, "t").unwrap();
        for r in 0..sys.row_count() {
            assert!(sys.apply_row(r, &f) == rat(0, 1), "row {r} not annihilated");
        }
        // while a cusp z y^2 - x^3 violates the tacnode row set
        let cusp = crate::mpoly::HomogeneousPoly::new(
            Rationals,
            3,
            vec![([0, 2, 1], rat(1, 1)), ([3, 0, 0], rat(-1, 1))],
        )
        .unwrap();
        let mut sys3 = ConditionSystem::new(Rationals, 3);
        sys3.add_singularity(
            &SingularitySpec {
                at: PointSpec::with_tangent(pt(0, 0, 1), [rat(0, 1), rat(1, 1), rat(0, 1)]),
                kind: SingularityKind::Tacnode,
            },
            "t",
        )
        .unwrap();
        let violated = (0..sys3.row_count()).any(|r| sys3.apply_row(r, &cusp) != rat(0, 1));
        assert!(violated);
        // but the cusp rows are satisfied
        let mut sys5 = ConditionSystem::new(Rationals, 3);
        sys5.add_singularity(
            &SingularitySpec {
                at: PointSpec::with_tangent(pt(0, 0, 1), [rat(0, 1), rat(1, 1), rat(0, 1)]),
                kind: SingularityKind::Cusp,
            },
            "c",
        )
        .unwrap();
        for r in 0..sys5.row_count() {
            assert!(sys5.apply_row(r, &cusp) == rat(0, 1));
        }
    }

    #[test]
    fn signed_minor_kernel_toy() {
        let f = Rationals;
        let m = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(0, 1)],
        ]);
        let v = kernel_via_signed_minors(&f, &m).unwrap();
        // D_0 = det[[0,0],[1,0]] = 0, D_1 = 0, D_2 = det I = 1
        assert_eq!(v, vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn signed_minor_kernel_matches_all_minors() {
        use rand::{Rng, SeedableRng};
        let f = Rationals;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let rows: Vec<Vec<_>> = (0..4)
                .map(|_| (0..5).map(|_| rat(rng.gen_range(-5..=5), 1)).collect())
                .collect();
            let m = Matrix::from_rows(rows);
            match kernel_via_signed_minors(&f, &m) {
                Err(SingularError::DegenerateSystem { .. }) => continue,
                Ok(v) => {
                    for j in 0..5 {
                        let mut d = determinant(&f, m.without_column(&f, j));
                        if j % 2 == 1 {
                            d = -d;
                        }
                        assert_eq!(v[j], d, "column {j}");
                    }
                }
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
    }

    #[test]
    fn degenerate_system_detected() {
        let f = Rationals;
        let m = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(2, 1), rat(2, 1), rat(0, 1)],
        ]);
        assert!(matches!(
            kernel_via_signed_minors(&f, &m),
            Err(SingularError::DegenerateSystem { rank: 1, expected: 2 })
        ));
    }
}
