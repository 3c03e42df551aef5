//! The second example: the branch decuple built from two conics and two
//! cubics with rational coefficients. Intersection bookkeeping runs over a
//! prime congruent to 1 mod 3, where the four complex base points of the
//! configuration become rational.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::campedelli::ExampleError;
use crate::assets;
use crate::mpoly::HomogeneousPoly;
use crate::picard::{oort_peters_table, CenterGeometry, ClusterGeometry, CurveClassTable};
use crate::rings::{is_prime_u64, sqrt_mod_p, PrimeField, Rationals, Ring, TowerField};
use crate::torsion::BranchComponent;

/// Default working prime for this example: 1009 = 3 * 336 + 1, so -3 is a
/// square and the complex intersection points reduce to rational ones.
pub const OP_GOOD_PRIME: u64 = 1009;

/// The eight plane curves of the example, with rational coefficients.
pub struct OortPeters {
    pub q1: HomogeneousPoly<Rationals>,
    pub q2: HomogeneousPoly<Rationals>,
    pub c1: HomogeneousPoly<Rationals>,
    pub c2: HomogeneousPoly<Rationals>,
    pub q: HomogeneousPoly<Rationals>,
    pub qtilde: HomogeneousPoly<Rationals>,
    pub line: HomogeneousPoly<Rationals>,
    pub line_tangent: HomogeneousPoly<Rationals>,
    pub table: CurveClassTable,
}

fn to_rationals(
    poly: &HomogeneousPoly<TowerField>,
    name: &str,
) -> Result<HomogeneousPoly<Rationals>, ExampleError> {
    poly.map_coefficients(Rationals, |c| {
        if c.is_rational() {
            Ok(c.rational_part().clone())
        } else {
            Err(ExampleError::Invariant(format!(
                "{name} has non-rational coefficients"
            )))
        }
    })
}

impl OortPeters {
    pub fn load() -> Result<Self, ExampleError> {
        let single = |name: &str| -> Result<HomogeneousPoly<Rationals>, ExampleError> {
            let asset = assets::load_builtin_single(name)?;
            to_rationals(asset.tower()?, name)
        };
        let lines = assets::load_builtin("op_lines")?;
        if lines.len() != 2 || lines[0].name != "op_l" || lines[1].name != "op_ltilde" {
            return Err(ExampleError::Invariant(
                "op_lines must hold op_l and op_ltilde".into(),
            ));
        }
        Ok(OortPeters {
            q1: single("op_q1")?,
            q2: single("op_q2")?,
            c1: single("op_c1")?,
            c2: single("op_c2")?,
            q: single("op_q")?,
            qtilde: single("op_qtilde")?,
            line: to_rationals(lines[0].tower()?, "op_l")?,
            line_tangent: to_rationals(lines[1].tower()?, "op_ltilde")?,
            table: oort_peters_table(),
        })
    }

    /// The degree-ten plane branch curve Q1 Q2 C1 C2.
    pub fn branch_plane(&self) -> HomogeneousPoly<Rationals> {
        self.q1.mul(&self.q2).mul(&self.c1).mul(&self.c2)
    }

    pub fn branch_components(&self) -> Result<Vec<BranchComponent>, ExampleError> {
        let mut comps = Vec::new();
        for name in ["Q1bar", "Q2bar", "C1bar", "C2bar"] {
            comps.push(BranchComponent {
                name: name.into(),
                class: self.table.get(name)?.clone(),
            });
        }
        for i in 1..=5 {
            comps.push(BranchComponent {
                name: format!("E{i}"),
                class: self.table.get(&format!("E{i}"))?.clone(),
            });
        }
        Ok(comps)
    }

    pub fn reduce(&self, prime: u64) -> Result<OortPetersModQ, ExampleError> {
        if !is_prime_u64(prime) || prime % 3 != 1 {
            return Err(ExampleError::Invariant(format!(
                "{prime} is not a prime congruent to 1 mod 3"
            )));
        }
        let field = PrimeField::new(prime)?;
        let sqrt_m3 = sqrt_mod_p(prime - 3, prime).ok_or_else(|| {
            ExampleError::Invariant(format!("-3 has no square root mod {prime}"))
        })?;
        let reduce = |poly: &HomogeneousPoly<Rationals>| {
            poly.map_coefficients(field, |c: &BigRational| {
                rational_mod(c, prime).map(|v| field.elem(v))
            })
        };
        Ok(OortPetersModQ {
            field,
            sqrt_m3,
            q1: reduce(&self.q1)?,
            q2: reduce(&self.q2)?,
            c1: reduce(&self.c1)?,
            c2: reduce(&self.c2)?,
            q: reduce(&self.q)?,
            qtilde: reduce(&self.qtilde)?,
            line: reduce(&self.line)?,
            line_tangent: reduce(&self.line_tangent)?,
        })
    }
}

fn rational_mod(c: &BigRational, p: u64) -> Result<u64, ExampleError> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let pb = BigInt::from(p);
    let num = c.numer().mod_floor(&pb).to_u64().expect("residue fits");
    let den = c.denom().mod_floor(&pb).to_u64().expect("residue fits");
    if den == 0 {
        return Err(ExampleError::Invariant(format!(
            "denominator of {c} vanishes mod {p}"
        )));
    }
    Ok(crate::rings::fp::mul_mod(
        num,
        crate::rings::fp::inv_mod(den, p).expect("nonzero denominator"),
        p,
    ))
}

/// The example reduced mod a good prime.
pub struct OortPetersModQ {
    pub field: PrimeField,
    pub sqrt_m3: u64,
    pub q1: HomogeneousPoly<PrimeField>,
    pub q2: HomogeneousPoly<PrimeField>,
    pub c1: HomogeneousPoly<PrimeField>,
    pub c2: HomogeneousPoly<PrimeField>,
    pub q: HomogeneousPoly<PrimeField>,
    pub qtilde: HomogeneousPoly<PrimeField>,
    pub line: HomogeneousPoly<PrimeField>,
    pub line_tangent: HomogeneousPoly<PrimeField>,
}

/// Named intersection cluster of the example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpPointName {
    P,
    P1,
    P2,
    P3,
    P4,
    P5,
    Infinity,
}

impl OpPointName {
    pub const ALL: [OpPointName; 7] = [
        OpPointName::P,
        OpPointName::P1,
        OpPointName::P2,
        OpPointName::P3,
        OpPointName::P4,
        OpPointName::P5,
        OpPointName::Infinity,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            OpPointName::P => "P",
            OpPointName::P1 => "P1",
            OpPointName::P2 => "P2",
            OpPointName::P3 => "P3",
            OpPointName::P4 => "P4",
            OpPointName::P5 => "P5",
            OpPointName::Infinity => "inf",
        }
    }
}

impl OortPetersModQ {
    /// Coordinates of the named points: P = [3/2:0:1] and P1 = [1:0:1] are
    /// rational; P2..P5 involve sqrt(-3); infinity is [0:1:0].
    pub fn point(&self, name: OpPointName) -> [u64; 3] {
        let p = self.field.p;
        let r = self.sqrt_m3;
        let norm = |v: [u64; 3]| crate::torsion::normalize_point(p, &v);
        match name {
            OpPointName::P => norm([3, 0, 2]),
            OpPointName::P1 => norm([1, 0, 1]),
            OpPointName::P2 => norm([(3 + r) % p, (3 + r) % p, 2]),
            OpPointName::P3 => norm([(3 + p - r) % p, (3 + p - r) % p, 2]),
            OpPointName::P4 => norm([(3 + r) % p, (2 * p - 3 - r) % p, 2]),
            OpPointName::P5 => norm([(3 + p - r) % p, (p - 3 + r) % p, 2]),
            OpPointName::Infinity => norm([0, 1, 0]),
        }
    }

    pub fn cluster(&self) -> Vec<[u64; 3]> {
        OpPointName::ALL.iter().map(|n| self.point(*n)).collect()
    }

    pub fn elem_point(&self, pt: &[u64; 3]) -> [crate::rings::PrimeFieldElement; 3] {
        [
            self.field.elem(pt[0]),
            self.field.elem(pt[1]),
            self.field.elem(pt[2]),
        ]
    }

    /// The published intersection table: each pair of branch components
    /// with its intersection divisor as point-multiplicity data.
    pub fn expected_intersections(
        &self,
    ) -> Vec<(&'static str, &'static str, Vec<(OpPointName, usize)>)> {
        use OpPointName::*;
        vec![
            ("Q1", "Q2", vec![(P, 1), (P1, 3)]),
            ("Q1", "C1", vec![(P1, 2), (P2, 2), (P3, 2)]),
            ("Q1", "C2", vec![(P, 2), (P2, 2), (P3, 2)]),
            ("Q2", "C1", vec![(P1, 2), (P4, 2), (P5, 2)]),
            ("Q2", "C2", vec![(P4, 2), (P5, 2), (P, 2)]),
            ("C1", "C2", vec![(P2, 2), (P3, 2), (P4, 2), (P5, 2), (Infinity, 1)]),
        ]
    }

    pub fn curve(&self, name: &str) -> &HomogeneousPoly<PrimeField> {
        match name {
            "Q1" => &self.q1,
            "Q2" => &self.q2,
            "C1" => &self.c1,
            "C2" => &self.c2,
            "Q" => &self.q,
            "Qtilde" => &self.qtilde,
            "l" => &self.line,
            "ltilde" => &self.line_tangent,
            other => panic!("unknown curve {other}"),
        }
    }

    /// Plane branch curve mod q.
    pub fn branch_plane(&self) -> HomogeneousPoly<PrimeField> {
        self.q1.mul(&self.q2).mul(&self.c1).mul(&self.c2)
    }

    /// The two published members of the mobile tricanonical system:
    /// Q1 Q2 Q and l C2 Qtilde.
    pub fn tricanonical_members(
        &self,
    ) -> (HomogeneousPoly<PrimeField>, HomogeneousPoly<PrimeField>) {
        (
            self.q1.mul(&self.q2).mul(&self.q),
            self.line.mul(&self.c2).mul(&self.qtilde),
        )
    }

    /// Cluster geometry mod q for the cohomology counts. The tangent
    /// direction at each P_i follows the cubic C1, which passes through all
    /// five with the branch tangent; the depth-three center G1 carries no
    /// geometry and is rejected if a class ever needs it.
    pub fn geometry(&self) -> Result<ClusterGeometry<PrimeField>, ExampleError> {
        let field = self.field;
        let mut centers = vec![CenterGeometry::Plane {
            point: self.elem_point(&self.point(OpPointName::P)),
        }];
        let named = [
            OpPointName::P1,
            OpPointName::P2,
            OpPointName::P3,
            OpPointName::P4,
            OpPointName::P5,
        ];
        for name in named {
            centers.push(CenterGeometry::Plane {
                point: self.elem_point(&self.point(name)),
            });
        }
        let grad = self.c1.gradient();
        for name in named {
            let pt = self.elem_point(&self.point(name));
            let tangent = [
                grad[0].evaluate(&pt)?,
                grad[1].evaluate(&pt)?,
                grad[2].evaluate(&pt)?,
            ];
            if tangent.iter().all(|c| field.is_zero(c)) {
                return Err(ExampleError::Invariant(format!(
                    "C1 is singular at {}",
                    name.label()
                )));
            }
            centers.push(CenterGeometry::InfinitelyNear { tangent });
        }
        centers.push(CenterGeometry::Deep);
        centers.push(CenterGeometry::Plane {
            point: self.elem_point(&self.point(OpPointName::Infinity)),
        });
        Ok(ClusterGeometry { field, centers })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assets_reduce_and_points_lie_where_expected() {
        let op = OortPeters::load().unwrap();
        let modq = op.reduce(OP_GOOD_PRIME).unwrap();
        // membership table for the named points
        let on = |name: &str, pt: OpPointName| {
            let v = modq
                .curve(name)
                .evaluate(&modq.elem_point(&modq.point(pt)))
                .unwrap();
            modq.field.is_zero(&v)
        };
        use OpPointName::*;
        for pt in [P, P1] {
            assert!(on("Q1", pt));
            assert!(on("Q2", pt));
        }
        assert!(on("C2", P) && !on("C1", P));
        assert!(on("C1", P1) && !on("C2", P1));
        for pt in [P2, P3] {
            assert!(on("Q1", pt) && !on("Q2", pt) && on("C1", pt) && on("C2", pt));
        }
        for pt in [P4, P5] {
            assert!(on("Q2", pt) && !on("Q1", pt) && on("C1", pt) && on("C2", pt));
        }
        assert!(on("C1", Infinity) && on("C2", Infinity));
        assert!(!on("Q1", Infinity) && !on("Q2", Infinity));
        // the published extra base point [3:0:1] lies on Q, l, C1
        let extra = modq.elem_point(&[3, 0, 1]);
        for name in ["Q", "l", "C1"] {
            let v = modq.curve(name).evaluate(&extra).unwrap();
            assert!(modq.field.is_zero(&v), "{name} at [3:0:1]");
        }
    }

    #[test]
    fn c2_has_a_double_point_at_p() {
        // the quadruple point of the branch curve is Q1, Q2 crossing plus a
        // node of C2
        let op = OortPeters::load().unwrap();
        let modq = op.reduce(OP_GOOD_PRIME).unwrap();
        let p = modq.elem_point(&modq.point(OpPointName::P));
        let report = crate::singular::classify_singularity(&modq.c2, &p).unwrap();
        assert_eq!(report.multiplicity, 2);
        assert_eq!(
            report.kind,
            crate::singular::SingularityKind::OrdinaryMultiple(2)
        );
    }

    #[test]
    fn bad_primes_rejected() {
        let op = OortPeters::load().unwrap();
        // 30047 = 2 mod 3: -3 is not a square
        assert!(op.reduce(30047).is_err());
        assert!(op.reduce(1008).is_err());
    }
}
