//! Divisor-class lattices of iterated blow-ups of the plane, intersection
//! pairing, canonical classes, fixed-part extraction, and the double-cover
//! invariants obtained through the projection formula.
//!
//! Classes live in the orthogonal basis (H; eps_1, ..., eps_n) where eps_j
//! is the total transform of the j-th exceptional curve: H^2 = 1,
//! eps_j^2 = -1, everything else orthogonal. The printed formulas of the
//! construction mix proper and total transforms, so the class table carries
//! a conversion dictionary and round-trips those formulas.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::rings::Field;
use crate::singular::{ConditionSystem, Line, Point, SingularError};

mod tables;

pub use tables::{campedelli_table, oort_peters_table};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PicardError {
    #[error("divisor classes live on different blow-up configurations")]
    ConfigMismatch,
    #[error("unknown class name {0:?}")]
    UnknownName(String),
    #[error("multiplicities violate proximity at center {0}")]
    Proximity(usize),
    #[error("cluster depth beyond two is not supported (center {0})")]
    UnsupportedCluster(usize),
    #[error("class has negative multiplicity {mult} at center {center} after fixed-part removal")]
    NegativeMultiplicity { center: usize, mult: i64 },
    #[error("irregularity is undetermined when p_g > 0")]
    IrregularityUndetermined,
    #[error("fixed-part removal did not terminate")]
    FixedPartLoop,
    #[error(transparent)]
    Singular(#[from] SingularError),
}

/// One blow-up center: a point of the plane, or a point on the exceptional
/// curve of an earlier center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Center {
    pub name: String,
    pub parent: Option<usize>,
}

/// An ordered list of blow-up centers; induces the orthogonal basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupConfig {
    pub centers: Vec<Center>,
}

impl BlowupConfig {
    pub fn new(centers: Vec<Center>) -> Self {
        for (i, c) in centers.iter().enumerate() {
            if let Some(p) = c.parent {
                assert!(p < i, "parent must precede its infinitely near center");
            }
        }
        BlowupConfig { centers }
    }

    pub fn n(&self) -> usize {
        self.centers.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.centers.iter().position(|c| c.name == name)
    }

    pub fn class(&self, h: i64, exc: Vec<i64>) -> DivClass {
        assert_eq!(exc.len(), self.n());
        DivClass { h, exc }
    }

    pub fn zero(&self) -> DivClass {
        DivClass { h: 0, exc: vec![0; self.n()] }
    }

    pub fn hyperplane(&self) -> DivClass {
        DivClass { h: 1, exc: vec![0; self.n()] }
    }

    /// Total transform class of the j-th exceptional curve.
    pub fn total_exceptional(&self, j: usize) -> DivClass {
        let mut exc = vec![0; self.n()];
        exc[j] = 1;
        DivClass { h: 0, exc }
    }

    /// Proper transform class: the total class minus the total classes of
    /// the centers lying on this exceptional curve.
    pub fn proper_exceptional(&self, j: usize) -> DivClass {
        let mut exc = vec![0; self.n()];
        exc[j] = 1;
        for (k, c) in self.centers.iter().enumerate() {
            if c.parent == Some(j) {
                exc[k] -= 1;
            }
        }
        DivClass { h: 0, exc }
    }

    /// K = -3 H + sum of all total exceptional classes.
    pub fn canonical_class(&self) -> DivClass {
        DivClass { h: -3, exc: vec![1; self.n()] }
    }

    /// Class of the strict transform of a degree-d plane curve with the
    /// given multiplicities at the cluster points. Proximity demands the
    /// multiplicity at a parent to dominate the one at its infinitely near
    /// point.
    pub fn strict_transform_class(
        &self,
        degree: i64,
        mults: &[i64],
    ) -> Result<DivClass, PicardError> {
        assert_eq!(mults.len(), self.n());
        for (k, c) in self.centers.iter().enumerate() {
            if let Some(p) = c.parent {
                if mults[p] < mults[k] {
                    return Err(PicardError::Proximity(k));
                }
            }
        }
        Ok(DivClass {
            h: degree,
            exc: mults.iter().map(|&m| -m).collect(),
        })
    }
}

/// Integer divisor class in the orthogonal basis: h H + sum exc_j eps_j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivClass {
    pub h: i64,
    pub exc: Vec<i64>,
}

impl DivClass {
    pub fn add(&self, other: &DivClass) -> DivClass {
        assert_eq!(self.exc.len(), other.exc.len());
        DivClass {
            h: self.h + other.h,
            exc: self.exc.iter().zip(&other.exc).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &DivClass) -> DivClass {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, s: i64) -> DivClass {
        DivClass {
            h: self.h * s,
            exc: self.exc.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.h == 0 && self.exc.iter().all(|&a| a == 0)
    }

    /// Componentwise halving; None unless every coordinate is even.
    pub fn half(&self) -> Option<DivClass> {
        if self.h % 2 != 0 || self.exc.iter().any(|a| a % 2 != 0) {
            return None;
        }
        Some(DivClass {
            h: self.h / 2,
            exc: self.exc.iter().map(|a| a / 2).collect(),
        })
    }

    pub fn coords_mod_2(&self) -> Vec<u8> {
        std::iter::once(self.h)
            .chain(self.exc.iter().cloned())
            .map(|a| (a.rem_euclid(2)) as u8)
            .collect()
    }
}

/// Intersection number in the diagonal form diag(1, -1, ..., -1).
pub fn intersect(a: &DivClass, b: &DivClass) -> Result<i64, PicardError> {
    if a.exc.len() != b.exc.len() {
        return Err(PicardError::ConfigMismatch);
    }
    Ok(a.h * b.h - a.exc.iter().zip(&b.exc).map(|(x, y)| x * y).sum::<i64>())
}

pub fn self_intersection(a: &DivClass) -> i64 {
    intersect(a, a).expect("same class")
}

/// Named divisor classes of one example, plus the dictionary converting the
/// construction's mixed proper/total notation into the orthogonal basis.
#[derive(Debug, Clone)]
pub struct CurveClassTable {
    pub config: BlowupConfig,
    named: BTreeMap<String, DivClass>,
    /// Names (in `named`) of the proper exceptional curves, the candidates
    /// for fixed-part removal.
    exceptional: Vec<String>,
}

impl CurveClassTable {
    pub fn new(config: BlowupConfig) -> Self {
        let mut table = CurveClassTable {
            config,
            named: BTreeMap::new(),
            exceptional: Vec::new(),
        };
        // every proper exceptional curve enters the dictionary under its
        // center name
        for j in 0..table.config.n() {
            let name = table.config.centers[j].name.clone();
            let class = table.config.proper_exceptional(j);
            table.named.insert(name.clone(), class);
            table.exceptional.push(name);
        }
        table
    }

    pub fn insert(&mut self, name: &str, class: DivClass) {
        assert_eq!(class.exc.len(), self.config.n());
        self.named.insert(name.to_string(), class);
    }

    pub fn get(&self, name: &str) -> Result<&DivClass, PicardError> {
        self.named
            .get(name)
            .ok_or_else(|| PicardError::UnknownName(name.to_string()))
    }

    pub fn exceptional_names(&self) -> &[String] {
        &self.exceptional
    }

    /// Resolve a formula written against proper-transform symbols:
    /// h-coefficient plus named summands with integer coefficients.
    pub fn mixed(&self, h: i64, terms: &[(&str, i64)]) -> Result<DivClass, PicardError> {
        let mut acc = self.config.hyperplane().scale(h);
        for (name, coeff) in terms {
            acc = acc.add(&self.get(name)?.scale(*coeff));
        }
        Ok(acc)
    }

    /// Repeatedly strips proper exceptional curves R with class . R < 0
    /// (and R^2 < 0), returning the mobile remainder and the multiset of
    /// removed parts.
    pub fn remove_fixed_exceptional_parts(
        &self,
        class: &DivClass,
    ) -> Result<(DivClass, Vec<(String, i64)>), PicardError> {
        let mut current = class.clone();
        let mut removed: BTreeMap<String, i64> = BTreeMap::new();
        // each subtraction raises class . R by |R^2| >= 1, and the pairing
        // against each R is bounded below, so the loop terminates; the cap
        // is a safety net
        for _ in 0..10_000 {
            let mut changed = false;
            for name in &self.exceptional {
                let r = self.get(name)?;
                if self_intersection(r) < 0 && intersect(&current, r)? < 0 {
                    current = current.sub(r);
                    *removed.entry(name.clone()).or_insert(0) += 1;
                    changed = true;
                }
            }
            if !changed {
                return Ok((current, removed.into_iter().collect()));
            }
        }
        Err(PicardError::FixedPartLoop)
    }
}

/// Numerical invariants of the double cover branched along B = 2L.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverInvariants {
    pub kx_squared: i64,
    pub k_tilde_squared: i64,
    pub p_g: usize,
    pub q: usize,
    pub p2: usize,
    pub chi: i64,
}

/// Invariants via the projection formula: K_X = pi*(K_Y + L), so
/// K_X^2 = 2 (K_Y + L)^2; contracting the (-1)-preimages of the branch
/// components with self-intersection -2 raises K^2 by their count;
/// p_g = h0(K_Y + L) and P2 = h0(2K_Y + 2L) + h0(2K_Y + L).
pub fn double_cover_invariants<E>(
    config: &BlowupConfig,
    l: &DivClass,
    contracted: usize,
    mut h0: impl FnMut(&DivClass) -> Result<usize, E>,
) -> Result<CoverInvariants, E>
where
    E: From<PicardError>,
{
    let k = config.canonical_class();
    let kl = k.add(l);
    let kx_squared = 2 * self_intersection(&kl);
    let k_tilde_squared = kx_squared + contracted as i64;
    let p_g = h0(&kl)?;
    let p2 = h0(&kl.scale(2))? + h0(&k.scale(2).add(l))?;
    if p_g != 0 {
        return Err(PicardError::IrregularityUndetermined.into());
    }
    let q = 0;
    let chi = 1 + p_g as i64 - q as i64;
    Ok(CoverInvariants {
        kx_squared,
        k_tilde_squared,
        p_g,
        q,
        p2,
        chi,
    })
}

/// Concrete cluster data tied to a blow-up configuration: the plane points
/// and, for infinitely near centers, the tangent directions selecting them.
#[derive(Debug, Clone)]
pub enum CenterGeometry<F: Field> {
    Plane { point: Point<F> },
    InfinitelyNear { tangent: Line<F> },
    /// Depth three or more: no linear-row support; classes must not reach
    /// such centers.
    Deep,
}

#[derive(Debug, Clone)]
pub struct ClusterGeometry<F: Field> {
    pub field: F,
    pub centers: Vec<CenterGeometry<F>>,
}

/// h^0 of a class dH - sum m_j eps_j: strip fixed exceptional parts, then
/// count degree-d plane curves with multiplicity >= m_j at each cluster
/// point (vector-space dimension, i.e. projective dimension + 1). Only
/// clusters of depth <= 2 occur in the two examples; anything deeper is
/// rejected.
pub fn h0_of_class<F: Field>(
    table: &CurveClassTable,
    geometry: &ClusterGeometry<F>,
    class: &DivClass,
) -> Result<usize, PicardError> {
    let config = &table.config;
    assert_eq!(geometry.centers.len(), config.n());
    let (reduced, _fixed) = table.remove_fixed_exceptional_parts(class)?;
    if reduced.h < 0 {
        return Ok(0);
    }
    let mut mults = vec![0i64; config.n()];
    for (j, e) in reduced.exc.iter().enumerate() {
        let m = -e;
        if m < 0 {
            return Err(PicardError::NegativeMultiplicity { center: j, mult: m });
        }
        mults[j] = m;
    }
    let mut sys = ConditionSystem::new(geometry.field.clone(), reduced.h as usize);
    for (j, center) in config.centers.iter().enumerate() {
        let m = mults[j];
        if m == 0 {
            continue;
        }
        match (&geometry.centers[j], center.parent) {
            (CenterGeometry::Plane { point }, None) => {
                // children's conditions are folded in below
                let child = config
                    .centers
                    .iter()
                    .enumerate()
                    .find(|(_, c)| c.parent == Some(j))
                    .map(|(k, _)| k);
                let child_mult = child.map_or(0, |k| mults[k]);
                if child_mult == 0 {
                    sys.add_multiplicity(point, m as u32, &config.centers[j].name)?;
                } else {
                    let k = child.unwrap();
                    let CenterGeometry::InfinitelyNear { tangent } = &geometry.centers[k] else {
                        return Err(PicardError::UnsupportedCluster(k));
                    };
                    sys.add_cluster(
                        point,
                        tangent,
                        m as u32,
                        child_mult as u32,
                        &config.centers[j].name,
                    )?;
                }
            }
            (CenterGeometry::InfinitelyNear { .. }, Some(parent)) => {
                // handled with its parent; legal only at depth two
                if config.centers[parent].parent.is_some() {
                    return Err(PicardError::UnsupportedCluster(j));
                }
                if mults[parent] < m {
                    return Err(PicardError::Proximity(j));
                }
            }
            _ => return Err(PicardError::UnsupportedCluster(j)),
        }
    }
    Ok(sys.coefficient_count() - sys.rank())
}
