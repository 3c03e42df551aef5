//! Local analysis of plane-curve singularities: multiplicities, tangent
//! cones, blow-up strict transforms, and classification into the taxonomy
//! the branch-curve construction uses (ordinary multiple points, cusps,
//! tacnodes, infinitely near triple points).
//!
//! Every local computation moves the point of interest to the origin of an
//! affine chart by an exact linear change of coordinates; when a tangent
//! line is assigned, the chart is aligned so the tangent becomes {v = 0}.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::mpoly::{BinaryForm, HomogeneousPoly, MPolyError, UniPoly};
use crate::rings::{Field, PrimeField, Ring, RingError};

mod conditions;
mod intersection;

pub use conditions::{
    kernel_via_signed_minors, linear_system_dimension, monomials_of_degree, residual_rows_for,
    ConditionSystem, PointSpec, ReducedSystem, SingularitySpec,
};
pub use intersection::{
    genus_deficit, intersection_multiplicity, tangent_lines_not_components, GenusData,
    TangentLineScan,
};

/// A projective point over the coefficient field.
pub type Point<F> = [<F as Ring>::Elem; 3];
/// Coefficients of a linear form (a line).
pub type Line<F> = [<F as Ring>::Elem; 3];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingularError {
    #[error("projective point has all coordinates zero")]
    InvalidPoint,
    #[error("the point does not lie on the curve")]
    NotOnCurve,
    #[error("a tangent line is required for this singularity kind")]
    MissingTangent,
    #[error("assigned tangent does not pass through the point")]
    TangentMissesPoint,
    #[error("singularity outside the supported taxonomy (multiplicity {multiplicity})")]
    OutsideTaxonomy { multiplicity: usize },
    #[error("condition system is degenerate: rank {rank}, expected {expected}")]
    DegenerateSystem { rank: usize, expected: usize },
    #[error("curves share a common component through the point")]
    CommonComponent,
    #[error("common tangent directions do not all split over the base field")]
    IrrationalDirection,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("could not build an adapted chart")]
    ChartConstruction,
    #[error(transparent)]
    MPoly(#[from] MPolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Affine chart centered at a projective point: (u, v) map to the point
/// u*c1 + v*c2 + p. When the chart is tangent-adapted, c1 spans the tangent
/// direction, so the tangent line becomes {v = 0}.
#[derive(Clone, Debug)]
pub struct Chart<F: Field> {
    field: F,
    pub(crate) cols: [[F::Elem; 3]; 3],
    inv: [[F::Elem; 3]; 3],
}

pub(crate) fn cross3<F: Field>(f: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> [F::Elem; 3] {
    [
        f.sub(&f.mul(&a[1], &b[2]), &f.mul(&a[2], &b[1])),
        f.sub(&f.mul(&a[2], &b[0]), &f.mul(&a[0], &b[2])),
        f.sub(&f.mul(&a[0], &b[1]), &f.mul(&a[1], &b[0])),
    ]
}

fn dot3<F: Field>(f: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> F::Elem {
    let mut acc = f.zero();
    for i in 0..3 {
        acc = f.add(&acc, &f.mul(&a[i], &b[i]));
    }
    acc
}

fn is_zero_vec<F: Field>(f: &F, a: &[F::Elem; 3]) -> bool {
    a.iter().all(|c| f.is_zero(c))
}

fn std_basis<F: Field>(f: &F) -> [[F::Elem; 3]; 3] {
    let mut out: [[F::Elem; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| f.zero()));
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = f.one();
    }
    out
}

fn det3<F: Field>(f: &F, m: &[[F::Elem; 3]; 3]) -> F::Elem {
    let c = cross3(f, &m[1], &m[2]);
    dot3(f, &m[0], &c)
}

impl<F: Field> Chart<F> {
    /// Chart at `p` with deterministic complement directions.
    pub fn at_point(field: &F, p: &Point<F>) -> Result<Self, SingularError> {
        if is_zero_vec(field, p) {
            return Err(SingularError::InvalidPoint);
        }
        let basis = std_basis(field);
        for c1 in &basis {
            for c2 in &basis {
                let cols = [c1.clone(), c2.clone(), p.clone()];
                if let Some(chart) = Self::try_cols(field, cols) {
                    return Ok(chart);
                }
            }
        }
        Err(SingularError::ChartConstruction)
    }

    /// Tangent-adapted chart: `line` must vanish at `p`; the first chart
    /// direction is a point of the line other than `p`.
    pub fn with_tangent(field: &F, p: &Point<F>, line: &Line<F>) -> Result<Self, SingularError> {
        if is_zero_vec(field, p) {
            return Err(SingularError::InvalidPoint);
        }
        if is_zero_vec(field, line) {
            return Err(SingularError::MissingTangent);
        }
        if !field.is_zero(&dot3(field, line, p)) {
            return Err(SingularError::TangentMissesPoint);
        }
        let basis = std_basis(field);
        // a point on the line: cross(line, k) for deterministic candidates k
        for k in &basis {
            let c1 = cross3(field, line, k);
            if is_zero_vec(field, &c1) {
                continue;
            }
            // must be independent of p
            if is_zero_vec(field, &cross3(field, &c1, p)) {
                continue;
            }
            for c2 in &basis {
                let cols = [c1.clone(), c2.clone(), p.clone()];
                if let Some(chart) = Self::try_cols(field, cols) {
                    return Ok(chart);
                }
            }
        }
        Err(SingularError::ChartConstruction)
    }

    fn try_cols(field: &F, cols: [[F::Elem; 3]; 3]) -> Option<Self> {
        // columns as a matrix: m[r][c] = cols[c][r]
        let m: [[F::Elem; 3]; 3] =
            std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r].clone()));
        let det = det3(field, &m);
        if field.is_zero(&det) {
            return None;
        }
        // adjugate / det
        let dinv = field.inv(&det).ok()?;
        let mut inv: [[F::Elem; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| field.zero()));
        for r in 0..3 {
            for c in 0..3 {
                // cofactor expansion: inv[r][c] = cofactor(c, r) / det
                let r1 = (c + 1) % 3;
                let r2 = (c + 2) % 3;
                let c1 = (r + 1) % 3;
                let c2 = (r + 2) % 3;
                let cof = field.sub(
                    &field.mul(&m[r1][c1], &m[r2][c2]),
                    &field.mul(&m[r1][c2], &m[r2][c1]),
                );
                inv[r][c] = field.mul(&cof, &dinv);
            }
        }
        Some(Chart { field: field.clone(), cols, inv })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn point(&self) -> &[F::Elem; 3] {
        &self.cols[2]
    }

    /// Global coordinates of the chart point (u, v, w).
    pub fn to_global(&self, u: &F::Elem, v: &F::Elem, w: &F::Elem) -> Point<F> {
        let f = &self.field;
        std::array::from_fn(|r| {
            let mut acc = f.mul(&self.cols[0][r], u);
            acc = f.add(&acc, &f.mul(&self.cols[1][r], v));
            f.add(&acc, &f.mul(&self.cols[2][r], w))
        })
    }

    /// Global line whose chart restriction is a*u + b*v (vanishing at the
    /// chart origin).
    pub fn line_to_global(&self, a: &F::Elem, b: &F::Elem) -> Line<F> {
        let f = &self.field;
        // L = (a, b, 0) * inv(cols-as-matrix)
        std::array::from_fn(|c| {
            let mut acc = f.mul(a, &self.inv[0][c]);
            acc = f.add(&acc, &f.mul(b, &self.inv[1][c]));
            acc
        })
    }

    /// Chart coefficients (a, b) of a global line through the chart origin.
    pub fn line_to_chart(&self, line: &Line<F>) -> Result<(F::Elem, F::Elem), SingularError> {
        let f = &self.field;
        if !f.is_zero(&dot3(f, line, &self.cols[2])) {
            return Err(SingularError::TangentMissesPoint);
        }
        Ok((dot3(f, line, &self.cols[0]), dot3(f, line, &self.cols[1])))
    }
}

/// A curve germ: bivariate polynomial in chart coordinates (u, v).
#[derive(Clone, PartialEq, Debug)]
pub struct LocalCurve<F: Field> {
    field: F,
    terms: BTreeMap<[u16; 2], F::Elem>,
}

impl<F: Field> LocalCurve<F> {
    pub fn from_terms<I: IntoIterator<Item = ([u16; 2], F::Elem)>>(field: F, terms: I) -> Self {
        let mut map: BTreeMap<[u16; 2], F::Elem> = BTreeMap::new();
        for (e, c) in terms {
            let entry = map.entry(e).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        map.retain(|_, c| !field.is_zero(c));
        LocalCurve { field, terms: map }
    }

    /// Substitute the chart map into a ternary form (w = 1).
    pub fn from_chart(form: &HomogeneousPoly<F>, chart: &Chart<F>) -> Self {
        let f = chart.field().clone();
        let d = form.degree();
        // dense DP over (u, v); the w-variable is set to 1
        let mut total: Vec<Vec<F::Elem>> = vec![vec![f.zero(); d + 2]; d + 2];
        for (e, coeff) in form.terms() {
            // expand prod over vars of (c1[var] u + c2[var] v + p[var])^e[var]
            let mut grid: Vec<Vec<F::Elem>> = vec![vec![f.zero(); d + 2]; d + 2];
            grid[0][0] = coeff.clone();
            for var in 0..3 {
                for _ in 0..e[var] {
                    grid = mul_linear(&f, &grid, &chart.cols[0][var], &chart.cols[1][var], &chart.cols[2][var]);
                }
            }
            for (i, row) in grid.iter().enumerate() {
                for (j, val) in row.iter().enumerate() {
                    if !f.is_zero(val) {
                        total[i][j] = f.add(&total[i][j], val);
                    }
                }
            }
        }
        let mut terms = BTreeMap::new();
        for (i, row) in total.into_iter().enumerate() {
            for (j, val) in row.into_iter().enumerate() {
                if !f.is_zero(&val) {
                    terms.insert([i as u16, j as u16], val);
                }
            }
        }
        LocalCurve { field: f, terms }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16; 2], &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u16, j: u16) -> F::Elem {
        self.terms
            .get(&[i, j])
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Multiplicity at the chart origin: the least total degree present.
    /// Zero for a curve missing the origin; the zero polynomial is an error.
    pub fn multiplicity(&self) -> Result<usize, SingularError> {
        if self.is_zero() {
            return Err(SingularError::ZeroPolynomial);
        }
        Ok(self
            .terms
            .keys()
            .map(|e| (e[0] + e[1]) as usize)
            .min()
            .expect("nonempty"))
    }

    /// The initial form (tangent cone) at the origin, as a binary form of
    /// degree = multiplicity; coefficient i belongs to u^(m-i) v^i.
    pub fn initial_form(&self) -> Result<BinaryForm<F>, SingularError> {
        let m = self.multiplicity()?;
        let mut coeffs = vec![self.field.zero(); m + 1];
        for (e, c) in &self.terms {
            if (e[0] + e[1]) as usize == m {
                coeffs[e[1] as usize] = c.clone();
            }
        }
        Ok(BinaryForm::new(self.field.clone(), m, coeffs))
    }

    /// Strict transform of the germ under blow-up of the origin, recentered
    /// at the infinitely near point given by the direction [a : b] on the
    /// exceptional line. Returns the transform and the multiplicity divided
    /// out.
    pub fn blowup_strict_transform(
        &self,
        dir: &(F::Elem, F::Elem),
    ) -> Result<(LocalCurve<F>, usize), SingularError> {
        let f = &self.field;
        let m = self.multiplicity()?;
        let mut out: BTreeMap<[u16; 2], F::Elem> = BTreeMap::new();
        if !f.is_zero(&dir.0) {
            // chart (u, v) = (s, s (w + w0)) with w0 = b / a
            let w0 = f.div(&dir.1, &dir.0)?;
            let mut w0_pows = vec![f.one()];
            let maxj = self.terms.keys().map(|e| e[1]).max().unwrap_or(0) as usize;
            for k in 1..=maxj {
                w0_pows.push(f.mul(&w0_pows[k - 1], &w0));
            }
            for (e, c) in &self.terms {
                let (i, j) = (e[0] as usize, e[1] as usize);
                let s_exp = i + j - m;
                // (w + w0)^j expanded binomially
                for k in 0..=j {
                    let bin = f.from_i64(binomial(j, k) as i64);
                    let val = f.mul(c, &f.mul(&bin, &w0_pows[j - k]));
                    if f.is_zero(&val) {
                        continue;
                    }
                    let key = [s_exp as u16, k as u16];
                    let entry = out.entry(key).or_insert_with(|| f.zero());
                    *entry = f.add(entry, &val);
                }
            }
        } else {
            // direction [0 : 1]: chart (u, v) = (t u', t)
            for (e, c) in &self.terms {
                let (i, j) = (e[0] as usize, e[1] as usize);
                let t_exp = i + j - m;
                let key = [i as u16, t_exp as u16];
                let entry = out.entry(key).or_insert_with(|| f.zero());
                *entry = f.add(entry, c);
            }
        }
        out.retain(|_, c| !f.is_zero(c));
        Ok((LocalCurve { field: f.clone(), terms: out }, m))
    }
}

fn mul_linear<F: Field>(
    f: &F,
    grid: &[Vec<F::Elem>],
    a: &F::Elem,
    b: &F::Elem,
    c: &F::Elem,
) -> Vec<Vec<F::Elem>> {
    let n = grid.len();
    let mut out = vec![vec![f.zero(); n]; n];
    for (i, row) in grid.iter().enumerate() {
        for (j, val) in row.iter().enumerate() {
            if f.is_zero(val) {
                continue;
            }
            if !f.is_zero(a) && i + 1 < n {
                out[i + 1][j] = f.add(&out[i + 1][j], &f.mul(val, a));
            }
            if !f.is_zero(b) && j + 1 < n {
                out[i][j + 1] = f.add(&out[i][j + 1], &f.mul(val, b));
            }
            if !f.is_zero(c) {
                out[i][j] = f.add(&out[i][j], &f.mul(val, c));
            }
        }
    }
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Multiplicity of the curve at a projective point (0 when the point is off
/// the curve).
pub fn multiplicity_at<F: Field>(
    form: &HomogeneousPoly<F>,
    p: &Point<F>,
) -> Result<usize, SingularError> {
    let chart = Chart::at_point(form.ring(), p)?;
    LocalCurve::from_chart(form, &chart).multiplicity()
}

/// Tangent cone at a point, with the chart it lives in.
pub fn tangent_cone<F: Field>(
    form: &HomogeneousPoly<F>,
    p: &Point<F>,
) -> Result<(BinaryForm<F>, Chart<F>), SingularError> {
    let chart = Chart::at_point(form.ring(), p)?;
    let cone = LocalCurve::from_chart(form, &chart).initial_form()?;
    Ok((cone, chart))
}

/// Strict transform of a curve under one blow-up at `p`, following the
/// direction of the given global line through `p`. Returns the local germ
/// recentered at the infinitely near point plus the exceptional
/// multiplicity that was divided out.
pub fn blowup_strict_transform<F: Field>(
    form: &HomogeneousPoly<F>,
    p: &Point<F>,
    direction_line: &Line<F>,
) -> Result<(LocalCurve<F>, usize), SingularError> {
    let field = form.ring();
    let chart = Chart::with_tangent(field, p, direction_line)?;
    // chart is aligned so the line is {v = 0}: direction [1 : 0]
    let local = LocalCurve::from_chart(form, &chart);
    local.blowup_strict_transform(&(field.one(), field.zero()))
}

/// The singularity kinds the construction distinguishes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SingularityKind {
    /// Smooth point of the curve.
    SimplePass,
    /// Ordinary point of the given multiplicity (distinct tangents).
    OrdinaryMultiple(u32),
    /// Double point, single tangent, strict transform leaves the double
    /// point after one blow-up.
    Cusp,
    /// Double point, single tangent, still an (ordinary) double point after
    /// one blow-up.
    Tacnode,
    /// Triple point with cone a perfect cube, still triple after one
    /// blow-up.
    InfinitelyNearTriple,
}

impl SingularityKind {
    pub fn name(&self) -> String {
        match self {
            SingularityKind::SimplePass => "simple-pass".into(),
            SingularityKind::OrdinaryMultiple(m) => format!("ordinary-{m}"),
            SingularityKind::Cusp => "cusp".into(),
            SingularityKind::Tacnode => "tacnode".into(),
            SingularityKind::InfinitelyNearTriple => "infinitely-near-triple".into(),
        }
    }
}

/// Result of classifying a curve germ.
#[derive(Clone, Debug)]
pub struct SingularityReport<F: Field> {
    pub multiplicity: usize,
    pub kind: SingularityKind,
    /// Tangent cone in chart coordinates.
    pub tangent_cone: BinaryForm<F>,
    pub chart: Chart<F>,
    /// For single-tangent kinds, the repeated tangent line in global
    /// coordinates.
    pub repeated_tangent: Option<Line<F>>,
    /// Whether every infinitely near point in the first neighborhood is
    /// ordinary (distinct tangents of the strict transform).
    pub post_blowup_ordinary: bool,
}

/// Classify the singularity of the curve at `p`. Multiplicities above four
/// and cone shapes outside the taxonomy are reported as errors rather than
/// guessed at.
pub fn classify_singularity<F: Field>(
    form: &HomogeneousPoly<F>,
    p: &Point<F>,
) -> Result<SingularityReport<F>, SingularError> {
    let field = form.ring();
    let chart = Chart::at_point(field, p)?;
    let local = LocalCurve::from_chart(form, &chart);
    let m = local.multiplicity()?;
    if m == 0 {
        return Err(SingularError::NotOnCurve);
    }
    let cone = local.initial_form()?;
    if m == 1 {
        return Ok(SingularityReport {
            multiplicity: 1,
            kind: SingularityKind::SimplePass,
            tangent_cone: cone,
            chart,
            repeated_tangent: None,
            post_blowup_ordinary: true,
        });
    }
    if m > 4 {
        return Err(SingularError::OutsideTaxonomy { multiplicity: m });
    }
    if cone.is_squarefree() {
        return Ok(SingularityReport {
            multiplicity: m,
            kind: SingularityKind::OrdinaryMultiple(m as u32),
            tangent_cone: cone,
            chart,
            repeated_tangent: None,
            post_blowup_ordinary: true,
        });
    }
    // single repeated tangent cases: the cone must be a pure line power
    let Some((lu, lv)) = cone.as_line_power() else {
        return Err(SingularError::OutsideTaxonomy { multiplicity: m });
    };
    let global = chart.line_to_global(&lu, &lv);
    // direction of the line {lu u + lv v = 0}
    let dir = (field.neg(&lv), lu.clone());
    let (strict, _) = local.blowup_strict_transform(&dir)?;
    let m_next = strict.multiplicity()?;
    let report = |kind, post_ok| SingularityReport {
        multiplicity: m,
        kind,
        tangent_cone: cone.clone(),
        chart: chart.clone(),
        repeated_tangent: Some(global.clone()),
        post_blowup_ordinary: post_ok,
    };
    match (m, m_next) {
        (2, 1) => Ok(report(SingularityKind::Cusp, true)),
        (2, 2) => {
            let ordinary = strict.initial_form()?.is_squarefree();
            if ordinary {
                Ok(report(SingularityKind::Tacnode, true))
            } else {
                // deeper contact than one blow-up resolves
                Err(SingularError::OutsideTaxonomy { multiplicity: m })
            }
        }
        (3, 3) => {
            let ordinary = strict.initial_form()?.is_squarefree();
            Ok(report(SingularityKind::InfinitelyNearTriple, ordinary))
        }
        _ => Err(SingularError::OutsideTaxonomy { multiplicity: m }),
    }
}

/// Enumerate the roots of a binary form over the base field, with
/// multiplicities, as directions [a : b]. `None` when the method cannot
/// certify it found every root.
pub trait DirectionRoots: Field {
    fn binary_form_roots(
        &self,
        f: &BinaryForm<Self>,
    ) -> Option<Vec<((Self::Elem, Self::Elem), usize)>>;
}

/// Generic fallback: handles the [0:1] root, linear factors of what
/// remains, and pure line powers. Sufficient for split cones; gives up
/// (returns None) otherwise.
fn roots_generic<F: Field>(
    field: &F,
    f: &BinaryForm<F>,
) -> Option<Vec<((F::Elem, F::Elem), usize)>> {
    if f.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    let umult = f.u_multiplicity();
    if umult > 0 {
        out.push(((field.zero(), field.one()), umult));
    }
    let mut p = f.dehomogenize();
    // strip linear factors greedily: find roots of degree-1 and degree-2
    // pieces exactly; otherwise fail
    let mut finite: Vec<(F::Elem, usize)> = Vec::new();
    loop {
        match p.degree() {
            None => return None,
            Some(0) => break,
            Some(1) => {
                let root = field.neg(&field.div(&p.coeff(0), &p.coeff(1)).ok()?);
                push_root(field, &mut finite, root);
                break;
            }
            _ => {
                // try a known root among those already found, else a line
                // power, else give up
                let deg = p.degree().unwrap();
                let lead = p.coeff(deg);
                // perfect power of one linear factor?
                let candidate = field.div(&p.coeff(deg - 1), &field.mul(&lead, &field.from_i64(deg as i64))).ok()?;
                // p == lead * (t + candidate)^deg ?
                let mut pw = UniPoly::constant(field.clone(), lead.clone());
                let lin = UniPoly::new(field.clone(), vec![candidate.clone(), field.one()]);
                for _ in 0..deg {
                    pw = pw.mul(&lin);
                }
                if pw == p {
                    let root = field.neg(&candidate);
                    for _ in 0..deg {
                        push_root(field, &mut finite, root.clone());
                    }
                    break;
                }
                // try existing roots as divisors
                let mut reduced = false;
                for (r, _) in finite.clone() {
                    let lin = UniPoly::new(field.clone(), vec![field.neg(&r), field.one()]);
                    let (q, rem) = p.div_rem(&lin).ok()?;
                    if rem.is_zero() {
                        push_root(field, &mut finite, r.clone());
                        p = q;
                        reduced = true;
                        break;
                    }
                }
                if !reduced {
                    return None;
                }
            }
        }
    }
    for (r, m) in finite {
        out.push((((field.one()), r), m));
    }
    Some(out)
}

fn push_root<F: Field>(field: &F, roots: &mut Vec<(F::Elem, usize)>, r: F::Elem) {
    let _ = field;
    for (existing, m) in roots.iter_mut() {
        if *existing == r {
            *m += 1;
            return;
        }
    }
    roots.push((r, 1));
}

impl DirectionRoots for crate::rings::Rationals {
    fn binary_form_roots(
        &self,
        f: &BinaryForm<Self>,
    ) -> Option<Vec<((Self::Elem, Self::Elem), usize)>> {
        roots_generic(self, f)
    }
}

impl DirectionRoots for crate::rings::TowerField {
    fn binary_form_roots(
        &self,
        f: &BinaryForm<Self>,
    ) -> Option<Vec<((Self::Elem, Self::Elem), usize)>> {
        roots_generic(self, f)
    }
}

impl DirectionRoots for PrimeField {
    /// Exhaustive scan of the projective line over Z/p: exact and cheap for
    /// word-size moduli.
    fn binary_form_roots(
        &self,
        f: &BinaryForm<Self>,
    ) -> Option<Vec<((Self::Elem, Self::Elem), usize)>> {
        if f.is_zero() {
            return None;
        }
        let mut out = Vec::new();
        let umult = f.u_multiplicity();
        if umult > 0 {
            out.push(((self.zero(), self.one()), umult));
        }
        let mut p = f.dehomogenize();
        for t in 0..self.p {
            let tv = self.elem(t);
            if p.degree().is_none() {
                break;
            }
            let mut mult = 0;
            let lin = UniPoly::new(*self, vec![self.neg(&tv), self.one()]);
            loop {
                if self.is_zero(&p.eval(&tv)) {
                    let (q, rem) = p.div_rem(&lin).expect("nonzero divisor");
                    debug_assert!(rem.is_zero());
                    p = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                out.push(((self.one(), tv), mult));
            }
        }
        Some(out)
    }
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
    fn line_multiplicity_one() {
        let l = mono([1, 0, 0], 2).add(&mono([0, 1, 0], -3));
        // [3:2:5] lies on 2x - 3y
        assert_eq!(multiplicity_at(&l, &pt(3, 2, 5)).unwrap(), 1);
        assert_eq!(multiplicity_at(&l, &pt(1, 1, 1)).unwrap(), 0);
    }

    #[test]
    fn node_cone_is_two_lines() {
        // x y = 0 at the origin chart [0:0:1]
        let f = mono([1, 1, 0], 1);
        let (cone, _) = tangent_cone(&f, &pt(0, 0, 1)).unwrap();
        assert_eq!(cone.degree(), 2);
        assert!(cone.is_squarefree());
        let report = classify_singularity(&f, &pt(0, 0, 1)).unwrap();
        assert_eq!(report.kind, SingularityKind::OrdinaryMultiple(2));
    }

    #[test]
    fn cusp_resolves_after_one_blowup() {
        // z y^2 - x^3
        let f = mono([0, 2, 1], 1).add(&mono([3, 0, 0], -1));
        let report = classify_singularity(&f, &pt(0, 0, 1)).unwrap();
        assert_eq!(report.kind, SingularityKind::Cusp);
        assert_eq!(report.multiplicity, 2);
        assert!(report.post_blowup_ordinary);
        // tangent is y = 0
        let t = report.repeated_tangent.unwrap();
        assert!(t[0] == rat(0, 1) && t[2] == rat(0, 1) && t[1] != rat(0, 1));
        // explicit strict transform is smooth at the infinitely near point
        let line = [rat(0, 1), rat(1, 1), rat(0, 1)];
        let (strict, m) = blowup_strict_transform(&f, &pt(0, 0, 1), &line).unwrap();
        assert_eq!(m, 2);
        assert_eq!(strict.multiplicity().unwrap(), 1);
    }

    #[test]
    fn tacnode_stays_double() {
        // z^2 y^2 - x^4 = (zy - x^2)(zy + x^2): two smooth branches tangent
        // to y = 0
        let f = mono([0, 2, 2], 1).add(&mono([4, 0, 0], -1));
        let report = classify_singularity(&f, &pt(0, 0, 1)).unwrap();
        assert_eq!(report.kind, SingularityKind::Tacnode);
        assert!(report.post_blowup_ordinary);
    }

    #[test]
    fn higher_tangency_is_outside_taxonomy() {
        // z^4 y^2 - x^6: branches with third order contact
        let f = mono([0, 2, 4], 1).add(&mono([6, 0, 0], -1));
        assert!(matches!(
            classify_singularity(&f, &pt(0, 0, 1)),
            Err(SingularError::OutsideTaxonomy { multiplicity: 2 })
        ));
    }

    #[test]
    fn infinitely_near_triple_detection() {
        // (y z - x^2) (y z + x^2) y = y^3 z^2 - x^4 y: triple at origin,
        // cone y^3, all three branches tangent to y = 0, triple persists
        let f = mono([0, 3, 2], 1).add(&mono([4, 1, 0], -1));
        let report = classify_singularity(&f, &pt(0, 0, 1)).unwrap();
        assert_eq!(report.kind, SingularityKind::InfinitelyNearTriple);
        assert!(report.post_blowup_ordinary);
    }

    #[test]
    fn smooth_point_is_simple_pass() {
        let f = mono([2, 0, 0], 1).add(&mono([0, 1, 1], -1)); // x^2 - yz
        let report = classify_singularity(&f, &pt(1, 1, 1)).unwrap();
        assert_eq!(report.kind, SingularityKind::SimplePass);
    }

    #[test]
    fn chart_roundtrips_lines() {
        let p = pt(1, 0, 1);
        let line = [rat(1, 1), rat(0, 1), rat(-1, 1)]; // x - z through p
        let chart = Chart::with_tangent(&Rationals, &p, &line).unwrap();
        let (a, b) = chart.line_to_chart(&line).unwrap();
        // tangent-adapted: restriction is proportional to v
        assert_eq!(a, rat(0, 1));
        assert!(b != rat(0, 1));
        let back = chart.line_to_global(&a, &b);
        // proportional to the original line
        let c = cross3(&Rationals, &back, &line);
        assert!(is_zero_vec(&Rationals, &c));
    }
}
