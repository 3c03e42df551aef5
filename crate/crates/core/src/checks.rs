//! The named verification checks, each certifying one computational claim
//! of the double-plane construction, plus the driver that assembles them
//! into a report.

use std::time::Instant;

use serde_json::{json, Value};

use crate::mpoly::{divides, HomogeneousPoly};
use crate::picard::{double_cover_invariants, h0_of_class, intersect, self_intersection};
use crate::report::{inputs_digest, CheckRecord, Verdict, VerificationReport, REPORT_SCHEMA};
use crate::rings::{Field, Rationals, Ring, TowerField};
use crate::singular::{
    classify_singularity, genus_deficit, intersection_multiplicity, linear_system_dimension,
    monomials_of_degree, tangent_lines_not_components, PointSpec, SingularityKind,
    SingularitySpec,
};
use crate::surfaces::campedelli::{ExampleError, DEFAULT_PRIME, PAPER_BRANCHES, REDUCTION_UNIT};
use crate::surfaces::oort_peters::OP_GOOD_PRIME;
use crate::surfaces::{Campedelli, OortPeters, OortPetersModQ};
use crate::torsion::{
    beauville_kernel, bicanonical_pencil_check, miyaoka_conclusion, normalize_point,
    tricanonical_base_points, verify_bicanonical_quadric_relation, TorsionGroup,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleFilter {
    Campedelli,
    OortPeters,
    Both,
}

impl ExampleFilter {
    pub fn includes(&self, which: ExampleFilter) -> bool {
        matches!(self, ExampleFilter::Both) || *self == which
    }

    pub fn label(&self) -> &'static str {
        match self {
            ExampleFilter::Campedelli => "campedelli",
            ExampleFilter::OortPeters => "oort-peters",
            ExampleFilter::Both => "both",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub example: ExampleFilter,
    pub prime: u64,
    pub branches: [bool; 3],
    pub op_prime: u64,
    /// Restrict to these check names; empty means all.
    pub check_filter: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            example: ExampleFilter::Both,
            prime: DEFAULT_PRIME,
            branches: PAPER_BRANCHES,
            op_prime: OP_GOOD_PRIME,
            check_filter: vec![],
        }
    }
}

/// Shared state across checks, built lazily so filtered runs stay cheap.
pub struct Ctx {
    pub config: RunConfig,
    campedelli: Option<Campedelli>,
    op: Option<(OortPeters, OortPetersModQ)>,
    reconstruction: Option<(usize, HomogeneousPoly<TowerField>)>,
    smoothness: Option<bool>,
    taxonomy_ordinary: Option<bool>,
}

impl Ctx {
    pub fn new(config: RunConfig) -> Self {
        Ctx {
            config,
            campedelli: None,
            op: None,
            reconstruction: None,
            smoothness: None,
            taxonomy_ordinary: None,
        }
    }

    pub fn campedelli(&mut self) -> Result<&Campedelli, ExampleError> {
        if self.campedelli.is_none() {
            self.campedelli = Some(Campedelli::load(self.config.prime, self.config.branches)?);
        }
        Ok(self.campedelli.as_ref().unwrap())
    }

    pub fn op(&mut self) -> Result<&(OortPeters, OortPetersModQ), ExampleError> {
        if self.op.is_none() {
            let op = OortPeters::load()?;
            let modq = op.reduce(self.config.op_prime)?;
            self.op = Some((op, modq));
        }
        Ok(self.op.as_ref().unwrap())
    }

    /// Rank of the reduced system and the reconstructed octic, cached.
    fn reconstruction(&mut self) -> Result<&(usize, HomogeneousPoly<TowerField>), String> {
        if self.reconstruction.is_none() {
            let ex = self.campedelli().map_err(|e| e.to_string())?;
            let (sys, poly) = ex.reconstruct_octic().map_err(|e| e.to_string())?;
            self.reconstruction = Some((sys.rows.len(), poly));
        }
        Ok(self.reconstruction.as_ref().unwrap())
    }

    fn smoothness(&mut self) -> Result<bool, String> {
        if self.smoothness.is_none() {
            let ex = self.campedelli().map_err(|e| e.to_string())?;
            let pts = ex.reduced_points().map_err(|e| e.to_string())?;
            let ok = crate::gbcert::certify_smooth_outside(&ex.octic_p, &pts)
                .map_err(|e| e.to_string())?;
            self.smoothness = Some(ok);
        }
        Ok(self.smoothness.unwrap())
    }
}

type CheckFn = fn(&mut Ctx) -> Result<Value, String>;

pub struct CheckDef {
    pub name: &'static str,
    pub example: ExampleFilter,
    pub claim: &'static str,
    pub run: CheckFn,
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

pub fn registry() -> Vec<CheckDef> {
    vec![
        CheckDef {
            name: "campedelli/condition-count",
            example: ExampleFilter::Campedelli,
            claim: "degree-8 forms have 45 coefficients; the order-4 point and infinitely near triple leave 23; two tacnodes and two cusps give a rank-22 22x23 system",
            run: check_condition_count,
        },
        CheckDef {
            name: "campedelli/octic-reconstruction",
            example: ExampleFilter::Campedelli,
            claim: "the signed-minor kernel of the 22x23 system is proportional over the tower to the shipped octic and satisfies both residual tacnode conditions",
            run: check_octic_reconstruction,
        },
        CheckDef {
            name: "campedelli/reduction-match",
            example: ExampleFilter::Campedelli,
            claim: "the mod-30047 image of the tower octic equals the published reduction coefficient-for-coefficient after removing the published unit normalization 18638",
            run: check_reduction_match,
        },
        CheckDef {
            name: "campedelli/smoothness-certificate",
            example: ExampleFilter::Campedelli,
            claim: "the saturation of the Jacobian ideal of the reduced octic by the six-point ideal is the unit ideal",
            run: check_smoothness,
        },
        CheckDef {
            name: "campedelli/singularity-taxonomy",
            example: ExampleFilter::Campedelli,
            claim: "the reduced octic has an ordinary quadruple point, an infinitely near triple point, and four tacnodes tangent to the conic, all ordinary after one blow-up",
            run: check_taxonomy,
        },
        CheckDef {
            name: "campedelli/irreducibility",
            example: ExampleFilter::Campedelli,
            claim: "the conic does not divide the octic; no line, conic, cubic, or quartic splitting survives the linear-system and genus exclusions",
            run: check_irreducibility,
        },
        CheckDef {
            name: "campedelli/genus",
            example: ExampleFilter::Campedelli,
            claim: "the resolved octic has genus 21 - 6 - 6 - 8 = 1, exactly, by the smoothness certificate and ordinariness of the blown-up cluster",
            run: check_genus,
        },
        CheckDef {
            name: "campedelli/intersection-table",
            example: ExampleFilter::Campedelli,
            claim: "octic and conic meet with multiplicity four at each of the four tacnodes, 16 in total (the Bezout number)",
            run: check_campedelli_intersections,
        },
        CheckDef {
            name: "campedelli/invariants",
            example: ExampleFilter::Campedelli,
            claim: "the double cover has K^2 = -4, minimal model K^2 = 1, p_g = q = 0, P2 = 2, chi = 1; the quartic system is a pencil",
            run: check_campedelli_invariants,
        },
        CheckDef {
            name: "campedelli/torsion",
            example: ExampleFilter::Campedelli,
            claim: "two-torsion has rank one; the mobile sextic pencil meets in two residual points off the branch curve; the torsion group is Z/2",
            run: check_campedelli_torsion,
        },
        CheckDef {
            name: "oort-peters/intersection-table",
            example: ExampleFilter::OortPeters,
            claim: "the pairwise intersections of the two conics and two cubics reproduce the published point-multiplicity table",
            run: check_op_intersections,
        },
        CheckDef {
            name: "oort-peters/invariants",
            example: ExampleFilter::OortPeters,
            claim: "the double cover has K^2 = -4, minimal model K^2 = 1, p_g = q = 0, P2 = 2, chi = 1 (cohomology counted in good reduction)",
            run: check_op_invariants,
        },
        CheckDef {
            name: "oort-peters/torsion",
            example: ExampleFilter::OortPeters,
            claim: "the branch splits evenly as B1 = 2L1; [3:0:1] is a tricanonical base point on the branch; the torsion group is Z/4; the bicanonical pencil has matching classes and no fixed part",
            run: check_op_torsion,
        },
        CheckDef {
            name: "oort-peters/quadric-relation",
            example: ExampleFilter::OortPeters,
            claim: "exact scalars make the degree-8 identity (Q1 Q2 - 2t C2 ltilde)^2 = u (Q1 Q2) Q^2 - 4v (C1 C2) l^2 hold, or a structured diagnostic is recorded",
            run: check_op_quadric,
        },
    ]
}

pub fn available_checks() -> Vec<&'static str> {
    registry().iter().map(|c| c.name).collect()
}

/// Runs the selected checks in registry order and assembles the report.
pub fn run(config: RunConfig) -> VerificationReport {
    let digest = inputs_digest(config.prime, config.branches, config.op_prime);
    let mut ctx = Ctx::new(config.clone());
    let mut records = Vec::new();
    for def in registry() {
        if !config.example.includes(def.example) {
            continue;
        }
        // the published mod-p display only exists at the default prime;
        // verifying another prime simply omits that comparison
        if def.name == "campedelli/reduction-match" && config.prime != DEFAULT_PRIME {
            continue;
        }
        if !config.check_filter.is_empty()
            && !config.check_filter.iter().any(|f| def.name == f || def.name.starts_with(f.as_str()))
        {
            continue;
        }
        let start = Instant::now();
        let (verdict, witness) = match (def.run)(&mut ctx) {
            Ok(witness) => (Verdict::Pass, witness),
            Err(msg) => (Verdict::Fail, json!({ "failure": msg })),
        };
        records.push(CheckRecord {
            name: def.name.to_string(),
            claim: def.claim.to_string(),
            inputs_digest: digest.clone(),
            verdict,
            witness,
            wall_ms: start.elapsed().as_millis() as u64,
        });
    }
    let overall = if records.iter().all(|r| r.verdict == Verdict::Pass) && !records.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    VerificationReport {
        schema: REPORT_SCHEMA,
        example: config.example.label().to_string(),
        prime: config.prime,
        branches: config
            .branches
            .iter()
            .map(|b| if *b { '1' } else { '0' })
            .collect(),
        op_prime: config.op_prime,
        checks: records,
        overall,
    }
}

// --- the individual checks ---

fn check_condition_count(ctx: &mut Ctx) -> Result<Value, String> {
    let ex = ctx.campedelli().map_err(|e| e.to_string())?;
    ensure(monomials_of_degree(8).len() == 45, "coefficient space is not 45-dimensional")?;
    let sys = ex.reduced_system().map_err(|e| e.to_string())?;
    ensure(
        sys.free_monomials.len() == 23,
        format!("expected 23 free coefficients, got {}", sys.free_monomials.len()),
    )?;
    ensure(sys.rows.len() == 22, format!("expected 22 rows, got {}", sys.rows.len()))?;
    let rank = crate::linalg::rank(&TowerField, sys.matrix());
    ensure(rank == 22, format!("expected rank 22, got {rank}"))?;
    // per-kind row counts
    let specs = ex.construction_specs();
    let counts: Vec<usize> = specs.iter().map(|s| s.row_count()).collect();
    ensure(counts == vec![10, 12, 6, 6, 5, 5], format!("row-count table off: {counts:?}"))?;
    Ok(json!({
        "coefficients": 45,
        "free_after_structural": 23,
        "rows": 22,
        "rank": rank,
        "rows_per_singularity": counts,
    }))
}

fn check_octic_reconstruction(ctx: &mut Ctx) -> Result<Value, String> {
    let (_, poly) = ctx.reconstruction()?.clone();
    let ex = ctx.campedelli().map_err(|e| e.to_string())?;
    ensure(!poly.is_zero(), "kernel vector is zero")?;
    // proportional over the tower to the shipped octic
    let mut ratio = None;
    for e in monomials_of_degree(8) {
        let a = poly.coeff(&e);
        let b = ex.octic.coeff(&e);
        match (a.is_zero(), b.is_zero()) {
            (true, true) => continue,
            (false, false) => {
                let r = &a * &b.inverse().map_err(|e| e.to_string())?;
                match &ratio {
                    None => ratio = Some(r),
                    Some(prev) => ensure(*prev == r, "coefficients are not proportional")?,
                }
            }
            _ => return Err(format!("support mismatch at {e:?}")),
        }
    }
    let ratio = ratio.ok_or("both polynomials empty")?;
    // residual tacnode conditions vanish on the shipped and on the
    // reconstructed octic
    let res_shipped = ex.residual_values(&ex.octic).map_err(|e| e.to_string())?;
    let res_rec = ex.residual_values(&poly).map_err(|e| e.to_string())?;
    ensure(
        res_shipped.iter().all(|r| r.is_zero()),
        "residual conditions do not vanish on the shipped octic",
    )?;
    ensure(
        res_rec.iter().all(|r| r.is_zero()),
        "residual conditions do not vanish on the reconstructed octic",
    )?;
    Ok(json!({
        "proportionality_factor": format!("{ratio}"),
        "residuals_on_shipped": ["0", "0"],
        "residuals_on_reconstructed": ["0", "0"],
    }))
}

fn check_reduction_match(ctx: &mut Ctx) -> Result<Value, String> {
    let ex = ctx.campedelli().map_err(|e| e.to_string())?;
    let published = ex.published_reduction().map_err(|e| e.to_string())?;
    let field = ex.field_p();
    ensure(
        ex.octic_p == published.scale(&field.elem(REDUCTION_UNIT)),
        "reduction does not match the published coefficients",
    )?;
    ensure(published.coeff(&[4, 4, 0]).value == 24082, "x^4 y^4 coefficient is not 24082")?;
    ensure(published.coeff(&[0, 0, 8]).value == 13722, "z^8 coefficient is not 13722")?;
    ensure(
        (ex.hom.r_alpha, ex.hom.r_beta, ex.hom.r_delta) == (20452, 6941, 27962),
        "embedding residues differ from the published triple",
    )?;
    Ok(json!({
        "residues": [ex.hom.r_alpha, ex.hom.r_beta, ex.hom.r_delta],
        "unit_normalization": REDUCTION_UNIT,
        "coefficients_checked": published.num_terms(),
    }))
}

fn check_smoothness(ctx: &mut Ctx) -> Result<Value, String> {
    let ok = ctx.smoothness()?;
    let ex = ctx.campedelli().map_err(|e| e.to_string())?;
    ensure(ok, "saturation of the Jacobian ideal is not the unit ideal")?;
    Ok(json!({
        "prime": ex.field_p().p,
        "saturation": "(1)",
        "excluded_points": ex.reduced_points().map_err(|e| e.to_string())?,
    }))
}

fn check_taxonomy(ctx: &mut Ctx) -> Result<Value, String> {
    let ex = ctx.campedelli().map_err(|e| e.to_string())?;
    let field = ex.field_p();
    let pts = ex.reduced_points().map_err(|e| e.to_string())?;
    let expected = [
        SingularityKind::OrdinaryMultiple(4),
        SingularityKind::InfinitelyNearTriple,
        SingularityKind::Tacnode,
        SingularityKind::Tacnode,
        SingularityKind::Tacnode,
        SingularityKind::Tacnode,
    ];
    let mut kinds = Vec::new();
    let mut all_ordinary = true;
    for (i, (pt, want)) in pts.iter().zip(&expected).enumerate() {
        let p3 = [field.elem(pt[0]), field.elem(pt[1]), field.elem(pt[2])];
        let report = classify_singularity(&ex.octic_p, &p3).map_err(|e| e.to_string())?;
        ensure(
            report.kind == *want,
            format!("point {i}: classified {:?}, expected {want:?}", report.kind),
        )?;
        all_ordinary &= report.post_blowup_ordinary;
        ensure(
            report.post_blowup_ordinary,
            format!("point {i} is not ordinary after one blow-up"),
        )?;
        // the repeated tangent at the tacnodes follows the conic
        if i >= 2 {
            let tangent = report.repeated_tangent.clone().ok_or("tacnode without tangent")?;
            let grad = ex.conic_p.gradient();
            let normal = [
                grad[0].evaluate(&p3).map_err(|e| e.to_string())?,
                grad[1].evaluate(&p3).map_err(|e| e.to_string())?,
                grad[2].evaluate(&p3).map_err(|e| e.to_string())?,
            ];
            ensure(
                proportional3(&field, &tangent, &normal),
                format!("tacnode tangent at point {i} does not follow the conic"),
            )?;
            // and matches the shipped tangent datum
            let shipped = ex
                .reduce_line(ex.specs[i].tangent().ok_or("missing shipped tangent")?)
                .map_err(|e| e.to_string())?;
            ensure(
                proportional3(&field, &tangent, &shipped),
                format!("tacnode tangent at point {i} differs from the shipped one"),
            )?;
        }
        if i == 1 {
            // triple-point tangent is the line x = 0
            let tangent = report.repeated_tangent.clone().ok_or("triple without tangent")?;
            let x_line = [field.one(), field.zero(), field.zero()];
            ensure(
                proportional3(&field, &tangent, &x_line),
                "triple-point tangent is not x = 0",
            )?;
        }
        kinds.push(report.kind.name());
    }
    ctx.taxonomy_ordinary = Some(all_ordinary);
    Ok(json!({ "kinds": kinds, "post_blowup_ordinary": true }))
}

fn proportional3<F: Field>(field: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> bool {
    for i in 0..3 {
        for j in 0..3 {
            let lhs = field.mul(&a[i], &b[j]);
            let rhs = field.mul(&a[j], &b[i]);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

fn check_irreducibility(ctx: &mut Ctx) -> Result<Value, String> {
    let ex = ctx.campedelli().map_err(|e| e.to_string())?;
    let field = ex.field_p();
    // the conic is not a component, over the tower and mod p
    ensure(
        !divides(&ex.conic, &ex.octic).map_err(|e| e.to_string())?,
        "conic divides the octic over the tower",
    )?;
    ensure(
        !divides(&ex.conic_p, &ex.octic_p).map_err(|e| e.to_string())?,
        "conic divides the octic mod p",
    )?;
    // no tangent line at any singular point is contained in the octic
    let pts = ex.reduced_points().map_err(|e| e.to_string())?;
    let pts3: Vec<_> = pts
        .iter()
        .map(|p| [field.elem(p[0]), field.elem(p[1]), field.elem(p[2])])
        .collect();
    let scan = tangent_lines_not_components(&ex.octic_p, &pts3).map_err(|e| e.to_string())?;
    ensure(scan.all_clear, "a line through a singular point lies in the octic")?;
    // the six points lie on no conic
    let conic_dim = linear_system_dimension(
        &TowerField,
        2,
        &ex.specs
            .iter()
            .map(|s| SingularitySpec {
                at: PointSpec::simple(s.at.base.clone()),
                kind: SingularityKind::SimplePass,
            })
            .collect::<Vec<_>>(),
    )
    .map_err(|e| e.to_string())?;
    ensure(conic_dim == -1, format!("conics through the six points: dimension {conic_dim}"))?;
    // no cubic with a double point at p, through p1 and three tacnodes with
    // tangents (11 conditions), for any choice of three
    let mut cubic_dims = Vec::new();
    for skip in 2..=5usize {
        let mut specs = vec![
            SingularitySpec {
                at: PointSpec::simple(ex.specs[0].at.base.clone()),
                kind: SingularityKind::OrdinaryMultiple(2),
            },
            SingularitySpec {
                at: ex.specs[1].at.clone(),
                kind: SingularityKind::SimplePass,
            },
        ];
        for i in 2..=5 {
            if i == skip {
                continue;
            }
            specs.push(SingularitySpec {
                at: ex.specs[i].at.clone(),
                kind: SingularityKind::SimplePass,
            });
        }
        let rows: usize = specs.iter().map(|s| s.row_count()).sum();
        ensure(rows == 11, format!("cubic exclusion row count {rows}, expected 11"))?;
        let dim = linear_system_dimension(&TowerField, 3, &specs).map_err(|e| e.to_string())?;
        ensure(dim == -1, format!("cubic system (skipping p{skip}) has dimension {dim}"))?;
        cubic_dims.push(dim);
    }
    // quartics with a tacnode at p1, through p, meeting the conic at the
    // four tacnodes with tangents: the 15 linear conditions have rank 14,
    // so a single such quartic exists (the construction's own account
    // expected none); the splitting is still excluded because that quartic
    // is not a component of the octic
    let mut specs = vec![
        SingularitySpec { at: ex.specs[1].at.clone(), kind: SingularityKind::Tacnode },
        SingularitySpec {
            at: PointSpec::simple(ex.specs[0].at.base.clone()),
            kind: SingularityKind::SimplePass,
        },
    ];
    for i in 2..=5 {
        specs.push(SingularitySpec {
            at: ex.specs[i].at.clone(),
            kind: SingularityKind::SimplePass,
        });
    }
    let quartic_dim = linear_system_dimension(&TowerField, 4, &specs).map_err(|e| e.to_string())?;
    ensure(
        quartic_dim <= 0,
        format!("quartic system has dimension {quartic_dim}; a pencil of candidates cannot be excluded by divisibility"),
    )?;
    let mut quartic_members_divide = false;
    if quartic_dim == 0 {
        let mut sys = crate::singular::ConditionSystem::new(TowerField, 4);
        for (i, s) in specs.iter().enumerate() {
            sys.add_singularity(s, &format!("q{i}")).map_err(|e| e.to_string())?;
        }
        for member in sys.solution_basis() {
            if divides(&member, &ex.octic).map_err(|e| e.to_string())? {
                quartic_members_divide = true;
            }
        }
        ensure(
            !quartic_members_divide,
            "a quartic satisfying the splitting conditions divides the octic",
        )?;
    }
    // a conic plus irreducible sextic split needs genus deficit 13 > 10
    let case1 = genus_deficit(6, &[vec![3], vec![3, 3], vec![2, 2], vec![2, 2]]);
    ensure(
        case1.deficit == 13 && case1.arithmetic == 10,
        format!("sextic case: deficit {} on genus {}", case1.deficit, case1.arithmetic),
    )?;
    Ok(json!({
        "conic_divides": false,
        "tangent_lines_contained": false,
        "conic_through_six_dim": conic_dim,
        "cubic_exclusion_dims": cubic_dims,
        "quartic_exclusion_dim": quartic_dim,
        "quartic_exclusion_dim_published": -1,
        "quartic_member_divides_octic": quartic_members_divide,
        "sextic_case_deficit": case1.deficit,
        "sextic_case_arithmetic_genus": case1.arithmetic,
    }))
}

fn check_genus(ctx: &mut Ctx) -> Result<Value, String> {
    let smooth = ctx.smoothness()?;
    if ctx.taxonomy_ordinary.is_none() {
        check_taxonomy(ctx)?;
    }
    let ordinary = ctx.taxonomy_ordinary.unwrap_or(false);
    let g = genus_deficit(
        8,
        &[vec![4], vec![3, 3], vec![2, 2], vec![2, 2], vec![2, 2], vec![2, 2]],
    );
    ensure(g.arithmetic == 21, format!("arithmetic genus {}", g.arithmetic))?;
    ensure(g.deficit == 20, format!("deficit {}", g.deficit))?;
    ensure(g.geometric == 1, format!("geometric genus {}", g.geometric))?;
    // deficit splits as 6 + 6 + 8 over the quadruple point, the infinitely
    // near triple, and the four tacnodes
    let quad = genus_deficit(8, &[vec![4]]).deficit;
    let triple = genus_deficit(8, &[vec![3, 3]]).deficit;
    let tacs = genus_deficit(8, &[vec![2, 2], vec![2, 2], vec![2, 2], vec![2, 2]]).deficit;
    ensure((quad, triple, tacs) == (6, 6, 8), format!("deficit split {quad}+{triple}+{tacs}"))?;
    // exactness: the curve is smooth away from the cluster and the cluster
    // resolves after one blow-up each, so genus is exactly one
    ensure(smooth, "smoothness certificate failed")?;
    ensure(ordinary, "cluster is not ordinary after one blow-up")?;
    Ok(json!({
        "arithmetic": 21,
        "deficit": [6, 6, 8],
        "geometric": 1,
        "exact": true,
    }))
}

fn check_campedelli_intersections(ctx: &mut Ctx) -> Result<Value, String> {
    let ex = ctx.campedelli().map_err(|e| e.to_string())?;
    let field = ex.field_p();
    let pts = ex.reduced_points().map_err(|e| e.to_string())?;
    let mut total = 0usize;
    let mut mults = Vec::new();
    for pt in &pts[2..6] {
        let p3 = [field.elem(pt[0]), field.elem(pt[1]), field.elem(pt[2])];
        let m = intersection_multiplicity(&ex.octic_p, &ex.conic_p, &p3)
            .map_err(|e| e.to_string())?;
        ensure(m == 4, format!("intersection multiplicity {m} at {pt:?}, expected 4"))?;
        total += m;
        mults.push(m);
    }
    ensure(total == 16, format!("total intersection {total}, expected 16"))?;
    Ok(json!({ "multiplicities": mults, "total": total, "bezout": 16 }))
}

fn check_campedelli_invariants(ctx: &mut Ctx) -> Result<Value, String> {
    let ex = ctx.campedelli().map_err(|e| e.to_string())?;
    let table = &ex.table;
    let geometry = ex.geometry().map_err(|e| e.to_string())?;
    let l = table.get("L").map_err(|e| e.to_string())?.clone();
    let k = table.config.canonical_class();
    ensure(self_intersection(&k) == -2, "K^2 of the resolution is not -2")?;
    // fixed parts: |2K + 2L| sheds each E_i once, |3K + 3L| twice
    let (_, fixed2) = table
        .remove_fixed_exceptional_parts(&k.scale(2).add(&l.scale(2)))
        .map_err(|e| e.to_string())?;
    let (_, fixed3) = table
        .remove_fixed_exceptional_parts(&k.scale(3).add(&l.scale(3)))
        .map_err(|e| e.to_string())?;
    for i in 1..=5 {
        let name = format!("E{i}");
        ensure(
            fixed2.iter().any(|(n, c)| *n == name && *c == 1),
            format!("|2K+2L| does not shed {name} once"),
        )?;
        ensure(
            fixed3.iter().any(|(n, c)| *n == name && *c == 2),
            format!("|3K+3L| does not shed {name} twice"),
        )?;
    }
    let contracted = contracted_count(table).map_err(|e| e.to_string())?;
    ensure(contracted == 5, format!("contracted (-1)-curves: {contracted}"))?;
    let inv = double_cover_invariants(&table.config, &l, contracted, |class| {
        h0_of_class(table, &geometry, class)
    })
    .map_err(|e: crate::picard::PicardError| e.to_string())?;
    ensure(inv.kx_squared == -4, format!("K_X^2 = {}", inv.kx_squared))?;
    ensure(inv.k_tilde_squared == 1, format!("minimal K^2 = {}", inv.k_tilde_squared))?;
    ensure(inv.p_g == 0, format!("p_g = {}", inv.p_g))?;
    ensure(inv.q == 0, format!("q = {}", inv.q))?;
    ensure(inv.p2 == 2, format!("P2 = {}", inv.p2))?;
    ensure(inv.chi == 1, format!("chi = {}", inv.chi))?;
    ensure(inv.p2 as i64 == inv.chi + inv.k_tilde_squared, "P2 != chi + K^2")?;
    // the quartic system is a pencil: projective dimension one
    let quartic = k.scale(2).add(&l.scale(2));
    let (mobile, _) = table
        .remove_fixed_exceptional_parts(&quartic)
        .map_err(|e| e.to_string())?;
    let h0 = h0_of_class(table, &geometry, &mobile).map_err(|e| e.to_string())?;
    ensure(h0 == 2, format!("quartic system h0 = {h0}"))?;
    Ok(json!({
        "kx_squared": inv.kx_squared,
        "k_tilde_squared": inv.k_tilde_squared,
        "p_g": inv.p_g,
        "q": inv.q,
        "p2": inv.p2,
        "chi": inv.chi,
        "quartic_pencil_dim": h0 as i64 - 1,
    }))
}

/// Count the branch components turning into contractible (-1)-curves on the
/// cover: self-intersection -2 and rational by adjunction.
fn contracted_count(table: &crate::picard::CurveClassTable) -> Result<usize, crate::picard::PicardError> {
    let k = table.config.canonical_class();
    let b = table.get("B")?;
    let mut count = 0;
    for name in table.exceptional_names() {
        let r = table.get(name)?;
        // a component of B (pairing with B - R is zero and R appears in B)
        if self_intersection(r) == -2
            && intersect(&r.add(&k), r)? == -2
            && intersect(&b.sub(r), r)? == 0
            && intersect(b, r)? == -2
        {
            count += 1;
        }
    }
    Ok(count)
}

fn check_campedelli_torsion(ctx: &mut Ctx) -> Result<Value, String> {
    let ex = ctx.campedelli().map_err(|e| e.to_string())?;
    let table = &ex.table;
    let comps = ex.branch_components().map_err(|e| e.to_string())?;
    let b = table.get("B").map_err(|e| e.to_string())?.clone();
    let kernel = beauville_kernel(&comps, &b).map_err(|e| e.to_string())?;
    ensure(kernel.rank == 1, format!("two-torsion rank {}", kernel.rank))?;
    // the published witness: Qbar + E2 + ... + E5 = 2 (H - F2 - ... - F5);
    // the range starting at two balances, the full range does not
    let mut sum = table.get("Qbar").map_err(|e| e.to_string())?.clone();
    for i in 2..=5 {
        sum = sum.add(table.get(&format!("E{i}")).map_err(|e| e.to_string())?);
    }
    let mut expected_half = table.config.hyperplane();
    for i in 2..=5 {
        let j = table.config.index_of(&format!("F{i}")).ok_or("missing F center")?;
        expected_half = expected_half.sub(&table.config.total_exceptional(j));
    }
    ensure(sum == expected_half.scale(2), "witness sum is not 2(H - F_2 - ... - F_5)")?;
    let mut full_sum = sum.add(table.get("E1").map_err(|e| e.to_string())?);
    ensure(full_sum.half().is_none(), "the full range 1..5 unexpectedly balances")?;
    full_sum = full_sum.sub(table.get("E1").map_err(|e| e.to_string())?);
    debug_assert_eq!(full_sum, sum);
    // every kernel representative halves
    for w in &kernel.witnesses {
        ensure(w.sum.half() == Some(w.half.clone()), "kernel witness does not halve")?;
    }
    // mobile sextic pencil and its residual intersection points
    let (s0, s1) = ex.sextic_pencil().map_err(|e| e.to_string())?;
    let cluster = ex.reduced_points().map_err(|e| e.to_string())?;
    let field = ex.field_p();
    let octic_p = ex.octic_p.clone();
    let conic_p = ex.conic_p.clone();
    let on_branch = |pt: &[u64; 3]| {
        let p3 = [field.elem(pt[0]), field.elem(pt[1]), field.elem(pt[2])];
        let c = octic_p.evaluate(&p3).map(|v| field.is_zero(&v)).unwrap_or(false);
        let q = conic_p.evaluate(&p3).map(|v| field.is_zero(&v)).unwrap_or(false);
        c || q
    };
    let analysis =
        tricanonical_base_points(&s0, &s1, &cluster, on_branch).map_err(|e| e.to_string())?;
    ensure(
        analysis.bezout_total == 36,
        format!("pencil intersections total {}, expected 36", analysis.bezout_total),
    )?;
    ensure(
        analysis.residual.len() == 2,
        format!("residual intersection points: {:?}", analysis.residual),
    )?;
    ensure(
        analysis.base_points.is_empty(),
        format!("unexpected base points on the branch: {:?}", analysis.base_points),
    )?;
    let group = miyaoka_conclusion(kernel.rank, analysis.base_points.len())
        .map_err(|e| e.to_string())?;
    ensure(group == TorsionGroup::Z2, format!("torsion group {group}"))?;
    Ok(json!({
        "two_torsion_rank": kernel.rank,
        "witness_subset": ["Qbar", "E2", "E3", "E4", "E5"],
        "witness_balance_range": "2..5",
        "residual_points": analysis.residual,
        "base_points": analysis.base_points,
        "torsion_group": group.to_string(),
    }))
}

fn check_op_intersections(ctx: &mut Ctx) -> Result<Value, String> {
    let (_, modq) = ctx.op().map_err(|e| e.to_string())?;
    let mut table_out = Vec::new();
    for (a, b, expected) in modq.expected_intersections() {
        let fa = modq.curve(a);
        let fb = modq.curve(b);
        let mut total = 0usize;
        let mut entries = Vec::new();
        for (name, want) in &expected {
            let pt = modq.elem_point(&modq.point(*name));
            let m = intersection_multiplicity(fa, fb, &pt).map_err(|e| e.to_string())?;
            ensure(
                m == *want,
                format!("({a} . {b}) at {}: multiplicity {m}, expected {want}", name.label()),
            )?;
            total += m;
            entries.push(json!({ "point": name.label(), "multiplicity": m }));
        }
        let bezout = fa.degree() * fb.degree();
        ensure(
            total == bezout,
            format!("({a} . {b}) totals {total}, Bezout needs {bezout}"),
        )?;
        table_out.push(json!({ "pair": [a, b], "points": entries, "total": total }));
    }
    Ok(json!({ "prime": modq.field.p, "table": table_out }))
}

fn check_op_invariants(ctx: &mut Ctx) -> Result<Value, String> {
    let (op, modq) = ctx.op().map_err(|e| e.to_string())?;
    let table = &op.table;
    let geometry = modq.geometry().map_err(|e| e.to_string())?;
    let l = table.get("L").map_err(|e| e.to_string())?.clone();
    let contracted = contracted_count(table).map_err(|e| e.to_string())?;
    ensure(contracted == 5, format!("contracted (-1)-curves: {contracted}"))?;
    let inv = double_cover_invariants(&table.config, &l, contracted, |class| {
        h0_of_class(table, &geometry, class)
    })
    .map_err(|e: crate::picard::PicardError| e.to_string())?;
    ensure(inv.kx_squared == -4, format!("K_X^2 = {}", inv.kx_squared))?;
    ensure(inv.k_tilde_squared == 1, format!("minimal K^2 = {}", inv.k_tilde_squared))?;
    ensure(inv.p_g == 0 && inv.q == 0, "p_g or q nonzero")?;
    ensure(inv.p2 == 2, format!("P2 = {}", inv.p2))?;
    ensure(inv.chi == 1, format!("chi = {}", inv.chi))?;
    Ok(json!({
        "kx_squared": inv.kx_squared,
        "k_tilde_squared": inv.k_tilde_squared,
        "p_g": inv.p_g,
        "q": inv.q,
        "p2": inv.p2,
        "chi": inv.chi,
        "reduction_prime": modq.field.p,
    }))
}

fn check_op_torsion(ctx: &mut Ctx) -> Result<Value, String> {
    let (op, modq) = ctx.op().map_err(|e| e.to_string())?;
    let table = &op.table;
    let comps = op.branch_components().map_err(|e| e.to_string())?;
    let b = table.get("B").map_err(|e| e.to_string())?.clone();
    let kernel = beauville_kernel(&comps, &b).map_err(|e| e.to_string())?;
    ensure(kernel.rank == 1, format!("two-torsion rank {}", kernel.rank))?;
    // the published order-two witness: B1 = Q1 + Q2 + E2..E5 = 2 L1
    let mut b1 = table.get("Q1bar").map_err(|e| e.to_string())?.clone();
    b1 = b1.add(table.get("Q2bar").map_err(|e| e.to_string())?);
    for i in 2..=5 {
        b1 = b1.add(table.get(&format!("E{i}")).map_err(|e| e.to_string())?);
    }
    let l1 = table.get("L1").map_err(|e| e.to_string())?;
    ensure(b1 == l1.scale(2), "B1 is not 2 L1")?;
    // the missed base point [3:0:1] lies on Q, l, C1: exactly over the
    // rationals, and on the branch away from the cluster
    for (name, poly) in [("Q", &op.q), ("l", &op.line), ("C1", &op.c1)] {
        let v = poly
            .evaluate(&[
                Rationals.from_i64(3),
                Rationals.from_i64(0),
                Rationals.from_i64(1),
            ])
            .map_err(|e| e.to_string())?;
        ensure(Rationals.is_zero(&v), format!("{name} does not vanish at [3:0:1]"))?;
    }
    // tricanonical members: classes differ from the mobile class by
    // effective exceptional corrections only
    let k = table.config.canonical_class();
    let l = table.get("L").map_err(|e| e.to_string())?;
    let mut m_class = k.scale(3).add(&l.scale(3));
    for i in 1..=5 {
        m_class = m_class.sub(&table.get(&format!("E{i}")).map_err(|e| e.to_string())?.scale(2));
    }
    let member1 = table
        .mixed(0, &[("Q1bar", 1), ("Q2bar", 1), ("Qbar", 1), ("F1", 1)])
        .map_err(|e| e.to_string())?;
    let member2 = table
        .mixed(0, &[("lbar", 1), ("C2bar", 1), ("Qtildebar", 1)])
        .map_err(|e| e.to_string())?;
    for (name, member) in [("Q1+Q2+Q+F1", &member1), ("l+C2+Qtilde", &member2)] {
        let diff = m_class.sub(member);
        ensure(
            diff.h == 0 && diff.exc.iter().all(|&c| c >= 0),
            format!("member {name} differs from the mobile class non-exceptionally: {diff:?}"),
        )?;
    }
    // base points: the two members meet, away from the cluster, exactly in
    // [3:0:1], which lies on the branch
    let (m0, m1) = modq.tricanonical_members();
    let cluster = modq.cluster();
    let field = modq.field;
    let branch = modq.branch_plane();
    let on_branch = |pt: &[u64; 3]| {
        let p3 = [field.elem(pt[0]), field.elem(pt[1]), field.elem(pt[2])];
        branch.evaluate(&p3).map(|v| field.is_zero(&v)).unwrap_or(false)
    };
    let analysis =
        tricanonical_base_points(&m0, &m1, &cluster, on_branch).map_err(|e| e.to_string())?;
    ensure(
        analysis.bezout_total == 36,
        format!("member intersections total {}", analysis.bezout_total),
    )?;
    let expected_base = normalize_point(field.p, &[3, 0, 1]);
    ensure(
        analysis.base_points == vec![expected_base],
        format!("base points {:?}, expected [[3,0,1]]", analysis.base_points),
    )?;
    let group =
        miyaoka_conclusion(kernel.rank, analysis.base_points.len()).map_err(|e| e.to_string())?;
    ensure(group == TorsionGroup::Z4, format!("torsion group {group}"))?;
    // bicanonical pencil: classes match and the generators share nothing
    let pencil = bicanonical_pencil_check(table, &op.q1, &op.q2, &op.c2, &op.line_tangent)
        .map_err(|e| e.to_string())?;
    ensure(pencil.no_common_component, "bicanonical generators share a component")?;
    Ok(json!({
        "two_torsion_rank": kernel.rank,
        "order_two_witness": "B1 = 2 L1",
        "base_point": expected_base,
        "torsion_group": group.to_string(),
        "bicanonical_classes_match": true,
        "bicanonical_no_fixed_part": pencil.no_common_component,
    }))
}

fn check_op_quadric(ctx: &mut Ctx) -> Result<Value, String> {
    let (op, modq) = ctx.op().map_err(|e| e.to_string())?;
    match verify_bicanonical_quadric_relation(
        &op.q1, &op.q2, &op.c1, &op.c2, &op.q, &op.line, &op.line_tangent,
    ) {
        Ok(rel) => {
            // necessary condition at [3:0:1]: l and C1 vanish there, so the
            // left side must too
            let field = modq.field;
            let pt = [field.elem(3), field.elem(0), field.elem(1)];
            let q1q2 = modq.q1.mul(&modq.q2);
            let c2lt = modq.c2.mul(&modq.line_tangent);
            let t_mod = field.elem(rational_mod_u64(&rel.t, field.p).ok_or("t has bad denominator")?);
            let lhs = field.sub(
                &q1q2.evaluate(&pt).map_err(|e| e.to_string())?,
                &field.mul(
                    &field.mul(&field.elem(2), &t_mod),
                    &c2lt.evaluate(&pt).map_err(|e| e.to_string())?,
                ),
            );
            ensure(field.is_zero(&lhs), "smoke test at [3:0:1] fails")?;
            Ok(json!({
                "outcome": "scalars-found",
                "t": rel.t.to_string(),
                "u": rel.u.to_string(),
                "v": rel.v.to_string(),
            }))
        }
        Err(crate::torsion::TorsionError::NoQuadricScalars(diag)) => Ok(json!({
            "outcome": "no-plane-level-scalars",
            "diagnostic": diag,
        })),
        Err(e) => Err(e.to_string()),
    }
}

fn rational_mod_u64(r: &num_rational::BigRational, p: u64) -> Option<u64> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let pb = num_bigint::BigInt::from(p);
    let num = r.numer().mod_floor(&pb).to_u64()?;
    let den = r.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(crate::rings::fp::mul_mod(
        num,
        crate::rings::fp::inv_mod(den, p).ok()?,
        p,
    ))
}
