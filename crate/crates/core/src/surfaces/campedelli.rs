//! The first example: a branch decuple built from an octic with prescribed
//! singularities and a conic through four of them, over the quadratic tower.

use thiserror::Error;

use crate::assets::{self, AssetError};
use crate::mpoly::{ConicParametrization, HomogeneousPoly, MPolyError};
use crate::picard::{
    campedelli_table, CenterGeometry, ClusterGeometry, CurveClassTable, PicardError,
};
use crate::rings::{
    embed_tower, Field, PrimeField, RingError, RingHom, TowerElement, TowerField,
};
use crate::singular::{
    kernel_via_signed_minors, residual_rows_for, ConditionSystem, Line, Point, PointSpec,
    ReducedSystem, SingularError, SingularityKind, SingularitySpec,
};
use crate::torsion::TorsionError;

pub const DEFAULT_PRIME: u64 = 30047;
/// Branch bits reproducing the published residues (20452, 6941, 27962).
pub const PAPER_BRANCHES: [bool; 3] = [true, false, true];
/// The published mod-p reduction is proportional, not equal, to the image
/// of the published tower octic: phi(F) = REDUCTION_UNIT * F_phi.
pub const REDUCTION_UNIT: u64 = 18638;

#[derive(Debug, Error)]
pub enum ExampleError {
    #[error(transparent)]
    Asset(#[from] AssetError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    MPoly(#[from] MPolyError),
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error("asset invariant violated: {0}")]
    Invariant(String),
}

/// Loaded and reduced data of the first example.
pub struct Campedelli {
    pub hom: RingHom,
    pub octic: HomogeneousPoly<TowerField>,
    pub conic: HomogeneousPoly<TowerField>,
    /// Singularity prescriptions in asset order: p, p1, p2, p3, p4, p5.
    pub specs: Vec<SingularitySpec<TowerField>>,
    pub octic_p: HomogeneousPoly<PrimeField>,
    pub conic_p: HomogeneousPoly<PrimeField>,
    pub table: CurveClassTable,
}

impl Campedelli {
    pub fn load(prime: u64, branches: [bool; 3]) -> Result<Self, ExampleError> {
        let hom = embed_tower(prime, branches)?;
        let octic_asset = assets::load_builtin_single("campedelli_octic")?;
        let conic_asset = assets::load_builtin_single("campedelli_conic")?;
        let octic = octic_asset.tower()?.clone();
        let conic = conic_asset.tower()?.clone();
        let specs = octic_asset.singularity_specs();
        if specs.len() != 6 {
            return Err(ExampleError::Invariant(
                "octic asset must list six singular points".into(),
            ));
        }
        if octic.is_zero() {
            return Err(ExampleError::Invariant("branch octic is zero".into()));
        }
        let octic_p = octic.reduce(&hom)?;
        let conic_p = conic.reduce(&hom)?;
        Ok(Campedelli {
            hom,
            octic,
            conic,
            specs,
            octic_p,
            conic_p,
            table: campedelli_table(),
        })
    }

    pub fn field_p(&self) -> PrimeField {
        self.hom.field()
    }

    pub fn points(&self) -> Vec<Point<TowerField>> {
        self.specs.iter().map(|s| s.at.base.clone()).collect()
    }

    pub fn reduce_point(&self, pt: &Point<TowerField>) -> Result<[u64; 3], ExampleError> {
        Ok([
            self.hom.apply(&pt[0])?.value,
            self.hom.apply(&pt[1])?.value,
            self.hom.apply(&pt[2])?.value,
        ])
    }

    pub fn reduced_points(&self) -> Result<Vec<[u64; 3]>, ExampleError> {
        self.points().iter().map(|p| self.reduce_point(p)).collect()
    }

    pub fn reduce_line(&self, line: &Line<TowerField>) -> Result<Line<PrimeField>, ExampleError> {
        Ok([
            self.hom.apply(&line[0])?,
            self.hom.apply(&line[1])?,
            self.hom.apply(&line[2])?,
        ])
    }

    /// The prescriptions as imposed by the construction: tacnodes at p2 and
    /// p3, cusps at p4 and p5 (the cusp pair is upgraded to tacnodes by the
    /// two residual conditions, which is how the assets record them).
    pub fn construction_specs(&self) -> Vec<SingularitySpec<TowerField>> {
        let mut specs = self.specs.clone();
        for (i, spec) in specs.iter_mut().enumerate() {
            if i >= 4 {
                debug_assert_eq!(spec.kind, SingularityKind::Tacnode);
                spec.kind = SingularityKind::Cusp;
            }
        }
        specs
    }

    /// The 22 x 23 condition system: the order-four point and the
    /// infinitely near triple reduce the 45 coefficients to 23; two
    /// tacnodes and two cusps give the 22 rows.
    pub fn reduced_system(&self) -> Result<ReducedSystem<TowerField>, ExampleError> {
        let specs = self.construction_specs();
        Ok(ReducedSystem::build(
            &TowerField,
            8,
            &specs[..2],
            &specs[2..],
        )?)
    }

    /// Octic reconstruction through the signed maximal minors of the
    /// reduced system.
    pub fn reconstruct_octic(
        &self,
    ) -> Result<(ReducedSystem<TowerField>, HomogeneousPoly<TowerField>), ExampleError> {
        let sys = self.reduced_system()?;
        let kernel = kernel_via_signed_minors(&TowerField, &sys.matrix())?;
        let poly = sys.poly_from_vector(&kernel);
        Ok((sys, poly))
    }

    /// The one-row-per-point residual conditions at p4 and p5 whose
    /// vanishing upgrades the cusps to tacnodes.
    pub fn residual_values(
        &self,
        octic: &HomogeneousPoly<TowerField>,
    ) -> Result<[TowerElement; 2], ExampleError> {
        let mut out = Vec::new();
        for spec in &self.specs[4..6] {
            let tangent = spec.tangent().ok_or(SingularError::MissingTangent)?;
            let sys = residual_rows_for(&TowerField, 8, &spec.at.base, tangent)?;
            out.push(sys.apply_row(0, octic));
        }
        Ok([out[0].clone(), out[1].clone()])
    }

    /// Cluster geometry over the tower for cohomology counts: plane points
    /// p, p1..p5 and the tangent directions selecting the infinitely near
    /// points.
    pub fn geometry(&self) -> Result<ClusterGeometry<TowerField>, ExampleError> {
        let mut centers = vec![CenterGeometry::Plane {
            point: self.specs[0].at.base.clone(),
        }];
        for spec in &self.specs[1..6] {
            centers.push(CenterGeometry::Plane { point: spec.at.base.clone() });
        }
        for spec in &self.specs[1..6] {
            let tangent = spec
                .tangent()
                .ok_or(SingularError::MissingTangent)?
                .clone();
            centers.push(CenterGeometry::InfinitelyNear { tangent });
        }
        Ok(ClusterGeometry { field: TowerField, centers })
    }

    /// Same cluster data reduced mod p, for the finite-field pencils.
    pub fn geometry_mod_p(&self) -> Result<ClusterGeometry<PrimeField>, ExampleError> {
        let field = self.field_p();
        let mut centers = Vec::new();
        for spec in &self.specs[..6] {
            let pt = self.reduce_point(&spec.at.base)?;
            centers.push(CenterGeometry::Plane {
                point: [field.elem(pt[0]), field.elem(pt[1]), field.elem(pt[2])],
            });
        }
        for spec in &self.specs[1..6] {
            let tangent = spec.tangent().ok_or(SingularError::MissingTangent)?;
            centers.push(CenterGeometry::InfinitelyNear {
                tangent: self.reduce_line(tangent)?,
            });
        }
        Ok(ClusterGeometry { field, centers })
    }

    /// The published mod-30047 octic, transcribed coefficient by
    /// coefficient.
    pub fn published_reduction(&self) -> Result<HomogeneousPoly<PrimeField>, ExampleError> {
        let field = self.field_p();
        if field.p != DEFAULT_PRIME {
            return Err(ExampleError::Invariant(
                "the published reduction is only available mod 30047".into(),
            ));
        }
        let data: [([u16; 3], u64); 23] = [
            ([4, 4, 0], 24082),
            ([4, 3, 1], 3438),
            ([4, 2, 2], 4775),
            ([4, 1, 3], 29499),
            ([4, 0, 4], 12698),
            ([3, 5, 0], 29927),
            ([3, 4, 1], 14121),
            ([3, 3, 2], 17243),
            ([3, 2, 3], 3139),
            ([3, 1, 4], 8704),
            ([3, 0, 5], 80),
            ([2, 4, 2], 28712),
            ([2, 3, 3], 10654),
            ([2, 2, 4], 12817),
            ([2, 1, 5], 8239),
            ([2, 0, 6], 5515),
            ([1, 3, 4], 28759),
            ([1, 2, 5], 7372),
            ([1, 1, 6], 19696),
            ([1, 0, 7], 28079),
            ([0, 2, 6], 1944),
            ([0, 1, 7], 24003),
            ([0, 0, 8], 13722),
        ];
        Ok(HomogeneousPoly::new(
            field,
            8,
            data.iter().map(|(e, c)| (*e, field.elem(*c))),
        )?)
    }

    /// The specialized conic parametrization recovered from the published
    /// second base point p2 = gamma([0:1]) = [c : f : 1].
    pub fn gamma(
        &self,
    ) -> Result<(ConicParametrization<TowerField>, TowerElement, TowerElement), ExampleError>
    {
        let p2 = &self.specs[2].at.base;
        if p2[2].is_zero() {
            return Err(ExampleError::Invariant("p2 has z = 0".into()));
        }
        let zinv = p2[2].inverse()?;
        let c = &p2[0] * &zinv;
        let f = &p2[1] * &zinv;
        Ok((specialized_parametrization(&TowerField, &c, &f), c, f))
    }

    /// The sextic condition system mod p: triple point at p, double points
    /// at each p_i with one tangent direction along the branch curve.
    pub fn sextic_system(&self) -> Result<ConditionSystem<PrimeField>, ExampleError> {
        let field = self.field_p();
        let mut sys = ConditionSystem::new(field, 6);
        let pts = self.reduced_points()?;
        let p0 = [field.elem(pts[0][0]), field.elem(pts[0][1]), field.elem(pts[0][2])];
        sys.add_multiplicity(&p0, 3, "p")?;
        for (i, spec) in self.specs[1..6].iter().enumerate() {
            let pt = self.reduce_point(&spec.at.base)?;
            let pt = [field.elem(pt[0]), field.elem(pt[1]), field.elem(pt[2])];
            let tangent = self.reduce_line(spec.tangent().ok_or(SingularError::MissingTangent)?)?;
            sys.add_cluster(&pt, &tangent, 2, 1, &format!("p{}", i + 1))?;
        }
        Ok(sys)
    }

    /// Two generators of the mobile tricanonical pencil of sextics, mod p.
    pub fn sextic_pencil(
        &self,
    ) -> Result<(HomogeneousPoly<PrimeField>, HomogeneousPoly<PrimeField>), ExampleError> {
        let sys = self.sextic_system()?;
        let basis = sys.solution_basis();
        if basis.len() != 2 {
            return Err(TorsionError::NotAPencil(basis.len() as i64 - 1).into());
        }
        let mut it = basis.into_iter();
        Ok((it.next().unwrap(), it.next().unwrap()))
    }

    /// Branch components on the resolution, for the two-torsion kernel.
    pub fn branch_components(&self) -> Result<Vec<crate::torsion::BranchComponent>, ExampleError> {
        let mut comps = vec![
            crate::torsion::BranchComponent {
                name: "Cbar".into(),
                class: self.table.get("Cbar")?.clone(),
            },
            crate::torsion::BranchComponent {
                name: "Qbar".into(),
                class: self.table.get("Qbar")?.clone(),
            },
        ];
        for i in 1..=5 {
            comps.push(crate::torsion::BranchComponent {
                name: format!("E{i}"),
                class: self.table.get(&format!("E{i}"))?.clone(),
            });
        }
        Ok(comps)
    }
}

/// The parametrization with a = e = g = i = 1 and b = d = h = 0:
/// gamma(s, t) = (s^2 + c t^2, s t + f t^2, s^2 + t^2).
pub fn specialized_parametrization<F: Field>(
    field: &F,
    c: &F::Elem,
    f: &F::Elem,
) -> ConicParametrization<F> {
    let z = field.zero();
    let o = field.one();
    ConicParametrization::new(
        field.clone(),
        [
            o.clone(),
            z.clone(),
            c.clone(),
            z.clone(),
            o.clone(),
            f.clone(),
            o.clone(),
            z.clone(),
            o,
        ],
    )
}

/// Result of running the construction pipeline at given parameter values
/// (c, f): the reconstructed octic and the two residual tacnode conditions
/// at p4 and p5 evaluated on it.
pub struct ResidualOutcome<F: Field> {
    pub octic: HomogeneousPoly<F>,
    pub residuals: [F::Elem; 2],
}

/// Runs the full linear pipeline at parameters (c, f): builds the conic
/// points and tangents from the specialized parametrization, solves the
/// 22 x 23 system by signed minors, and evaluates the two residual
/// conditions. At the published parameters both residuals vanish; at
/// generic parameters they do not.
pub fn residual_parameter_conditions<F: Field>(
    field: &F,
    c: &F::Elem,
    f: &F::Elem,
) -> Result<ResidualOutcome<F>, SingularError> {
    let gamma = specialized_parametrization(field, c, f);
    let params: [(i64, i64); 4] = [(0, 1), (1, 0), (1, 1), (-1, 1)];
    let mut points = Vec::new();
    let mut tangents = Vec::new();
    for (s, t) in params {
        let s = field.from_i64(s);
        let t = field.from_i64(t);
        points.push(gamma.map(&s, &t));
        tangents.push(gamma.tangent_line_at(&s, &t)?);
    }
    let p = [field.one(), field.zero(), field.zero()];
    let p1 = [field.zero(), field.one(), field.zero()];
    let tangent_p1 = [field.one(), field.zero(), field.zero()];
    let structural = vec![
        SingularitySpec {
            at: PointSpec::simple(p),
            kind: SingularityKind::OrdinaryMultiple(4),
        },
        SingularitySpec {
            at: PointSpec::with_tangent(p1, tangent_p1),
            kind: SingularityKind::InfinitelyNearTriple,
        },
    ];
    let mut imposed = Vec::new();
    for (i, (pt, tg)) in points.iter().zip(&tangents).enumerate() {
        imposed.push(SingularitySpec {
            at: PointSpec::with_tangent(pt.clone(), tg.clone()),
            kind: if i < 2 {
                SingularityKind::Tacnode
            } else {
                SingularityKind::Cusp
            },
        });
    }
    let sys = ReducedSystem::build(field, 8, &structural, &imposed)?;
    let kernel = kernel_via_signed_minors(field, &sys.matrix())?;
    let octic = sys.poly_from_vector(&kernel);
    let mut residuals = Vec::new();
    for (pt, tg) in points[2..4].iter().zip(&tangents[2..4]) {
        let rows = residual_rows_for(field, 8, pt, tg)?;
        residuals.push(rows.apply_row(0, &octic));
    }
    Ok(ResidualOutcome {
        octic,
        residuals: [residuals[0].clone(), residuals[1].clone()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::compose_with_parametrization;
    use crate::rings::rat;

    fn load() -> Campedelli {
        Campedelli::load(DEFAULT_PRIME, PAPER_BRANCHES).unwrap()
    }

    #[test]
    fn reduction_matches_published_up_to_unit() {
        let ex = load();
        let published = ex.published_reduction().unwrap();
        let field = ex.field_p();
        let scaled = published.scale(&field.elem(REDUCTION_UNIT));
        assert_eq!(ex.octic_p, scaled);
        // the two named coefficients of the published reduction
        assert_eq!(published.coeff(&[4, 4, 0]).value, 24082);
        assert_eq!(published.coeff(&[0, 0, 8]).value, 13722);
    }

    #[test]
    fn curves_vanish_at_their_points() {
        let ex = load();
        for spec in &ex.specs {
            let v = ex.octic.evaluate(&spec.at.base).unwrap();
            assert!(v.is_zero(), "octic at {:?}", spec.at.base);
        }
        // the conic passes through p2..p5 only
        for spec in &ex.specs[2..6] {
            assert!(ex.conic.evaluate(&spec.at.base).unwrap().is_zero());
        }
        for spec in &ex.specs[..2] {
            assert!(!ex.conic.evaluate(&spec.at.base).unwrap().is_zero());
        }
    }

    #[test]
    fn gamma_parametrizes_the_conic() {
        let ex = load();
        let (gamma, c, f) = ex.gamma().unwrap();
        // c = (5 + 2a + 2b)/3 and f = d/2
        let mut expect_c = TowerElement::from_int_coords([5, 2, 2, 0, 0, 0, 0, 0]);
        expect_c = expect_c.scale(&rat(1, 3));
        assert_eq!(c, expect_c);
        let expect_f = TowerElement::generator(3).scale(&rat(1, 2));
        assert_eq!(f, expect_f);
        // composing the conic's own equation with gamma gives zero
        let composed = compose_with_parametrization(&ex.conic, &gamma);
        assert!(composed.is_zero());
        // gamma's implicit conic is proportional to the shipped one
        let implicit = gamma.implicit_conic().unwrap();
        let lead = |p: &HomogeneousPoly<TowerField>| {
            p.terms().next().map(|(_, c)| c.clone()).unwrap()
        };
        let scaled = implicit.scale(&lead(&ex.conic));
        let other = ex.conic.scale(&lead(&implicit));
        assert_eq!(scaled, other);
        // the four parametrized points match the published ones
        for (i, (s, t)) in [(0i64, 1i64), (1, 0), (1, 1), (-1, 1)].iter().enumerate() {
            let img = gamma.map(&TowerElement::from_integer(*s), &TowerElement::from_integer(*t));
            let published = &ex.specs[2 + i].at.base;
            // proportionality check via cross products
            for a in 0..3 {
                for b in 0..3 {
                    let lhs = &img[a] * &published[b];
                    let rhs = &img[b] * &published[a];
                    assert_eq!(lhs, rhs, "point {} coordinates {a},{b}", i + 2);
                }
            }
        }
    }

    #[test]
    fn composed_octic_vanishes_to_order_four_at_parameters() {
        let ex = load();
        let (gamma, _, _) = ex.gamma().unwrap();
        let composed = compose_with_parametrization(&ex.octic, &gamma);
        assert_eq!(composed.degree(), 16);
        assert!(!composed.is_zero());
        // at each of the four parameter values the binary form vanishes to
        // order >= 4: the octic and conic meet four times at each p_i
        for (s, t) in [(0i64, 1i64), (1, 0), (1, 1), (-1, 1)] {
            let mult = root_multiplicity(&composed, s, t);
            assert!(mult >= 4, "order {mult} at [{s}:{t}]");
        }
    }

    #[test]
    fn reduction_commutes_with_multiplication() {
        // the degree-ten branch curve C * Q reduces multiplicatively
        let ex = load();
        let branch = ex.octic.mul(&ex.conic);
        assert_eq!(branch.degree(), 10);
        let lhs = branch.reduce(&ex.hom).unwrap();
        let rhs = ex.octic_p.mul(&ex.conic_p);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn divisibility_survives_reduction() {
        // a factor over the tower maps to a factor mod p
        use crate::mpoly::divides;
        use rand::{Rng, SeedableRng};
        let ex = load();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(67);
        for _ in 0..5 {
            let rand_poly = |rng: &mut rand_chacha::ChaCha8Rng, d: usize| {
                let terms: Vec<_> = crate::singular::monomials_of_degree(d)
                    .into_iter()
                    .filter(|_| rng.gen_bool(0.6))
                    .map(|e| {
                        (
                            e,
                            TowerElement::from_int_coords(std::array::from_fn(|_| {
                                rng.gen_range(-4..=4)
                            })),
                        )
                    })
                    .collect();
                HomogeneousPoly::new(TowerField, d, terms).unwrap()
            };
            let g = rand_poly(&mut rng, 2);
            let h = rand_poly(&mut rng, 3);
            if g.is_zero() || h.is_zero() {
                continue;
            }
            let product = g.mul(&h);
            assert!(divides(&g, &product).unwrap());
            let gp = g.reduce(&ex.hom).unwrap();
            let pp = product.reduce(&ex.hom).unwrap();
            if !gp.is_zero() {
                assert!(divides(&gp, &pp).unwrap());
            }
        }
    }

    fn root_multiplicity(
        form: &crate::mpoly::BinaryForm<TowerField>,
        s: i64,
        t: i64,
    ) -> usize {
        if t != 0 {
            // dehomogenize in x = u/v and count derivative vanishings at s/t
            let x = {
                let tinv = TowerElement::from_integer(t).inverse().unwrap();
                &TowerElement::from_integer(s) * &tinv
            };
            let mut g = form.dehomogenize();
            let mut mult = 0;
            while !g.is_zero() && g.eval(&x).is_zero() {
                mult += 1;
                g = g.derivative();
            }
            mult
        } else {
            // root [1:0]: multiplicity is the power of v dividing the form
            form.coeffs()
                .iter()
                .position(|c| !c.is_zero())
                .unwrap_or(form.degree() + 1)
        }
    }
}
