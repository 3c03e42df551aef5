//! Class tables for the two double-plane examples.
//!
//! Center naming: "E" over the quadruple point p, "E1".."E5" over the five
//! triple points, "F1".."F5" over the infinitely near points on each E_i;
//! the second example adds "G1" over the extra double point on F1 and "E6"
//! over the node at infinity. The table registers every proper exceptional
//! class under its center name, the branch components, and the canonical
//! and branch data.

use super::{BlowupConfig, Center, CurveClassTable};

fn center(name: &str, parent: Option<usize>) -> Center {
    Center { name: name.into(), parent }
}

/// Blow-up configuration shared by both examples: p, then p_1..p_5, then
/// the infinitely near q_i on each E_i.
fn base_centers() -> Vec<Center> {
    let mut centers = vec![center("E", None)];
    for i in 1..=5 {
        centers.push(center(&format!("E{i}"), None));
    }
    for i in 1..=5 {
        // F_i lies on E_i, which sits at index i
        centers.push(center(&format!("F{i}"), Some(i)));
    }
    centers
}

/// Eleven blow-ups: p, p_1..p_5, and one infinitely near point on each E_i.
pub fn campedelli_config() -> BlowupConfig {
    BlowupConfig::new(base_centers())
}

/// Thirteen blow-ups: the base cluster plus the extra double point G1 on F1
/// and the node E6 at infinity.
pub fn oort_peters_config() -> BlowupConfig {
    let mut centers = base_centers();
    centers.push(center("G1", Some(6))); // F1 sits at index 6
    centers.push(center("E6", None));
    BlowupConfig::new(centers)
}

/// Named classes of the first example: the strict transforms of the branch
/// octic C and conic Q, the canonical class, and the branch data B = 2L.
pub fn campedelli_table() -> CurveClassTable {
    let config = campedelli_config();
    let mut t = CurveClassTable::new(config.clone());

    // octic: quadruple point at p, triple at p1 persisting at q1, double
    // at p2..p5 persisting at q2..q5
    let c_mults = vec![4, 3, 2, 2, 2, 2, 3, 2, 2, 2, 2];
    let cbar = config
        .strict_transform_class(8, &c_mults)
        .expect("octic multiplicities respect proximity");
    t.insert("Cbar", cbar.clone());

    // conic through p2..p5 tangent to the octic there (so through q2..q5)
    let q_mults = vec![0, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1];
    let qbar = config
        .strict_transform_class(2, &q_mults)
        .expect("conic multiplicities respect proximity");
    t.insert("Qbar", qbar.clone());

    t.insert("K", config.canonical_class());

    // B = Cbar + Qbar + sum of the five E_i proper transforms
    let mut b = cbar.add(&qbar);
    for i in 1..=5 {
        b = b.add(&config.proper_exceptional(i));
    }
    t.insert("B", b.clone());
    let l = b.half().expect("branch class is even");
    t.insert("L", l);
    t
}

/// Named classes of the second example: two conics and two cubics forming
/// the branch decuple, the auxiliary conics and lines of the tricanonical
/// and bicanonical analysis, and the split branch halves B1, B2.
pub fn oort_peters_table() -> CurveClassTable {
    let config = oort_peters_config();
    let mut t = CurveClassTable::new(config.clone());
    let n = config.n();
    let idx = |name: &str| config.index_of(name).expect("named center");

    let mk = |degree: i64, assignments: &[(&str, i64)]| {
        let mut mults = vec![0i64; n];
        for (name, m) in assignments {
            mults[idx(name)] = *m;
        }
        config
            .strict_transform_class(degree, &mults)
            .expect("multiplicities respect proximity")
    };

    // Q1 through P, P1 (tangent, reaching q1 and the second-order point
    // g1), and P2, P3 tangentially
    t.insert(
        "Q1bar",
        mk(
            2,
            &[("E", 1), ("E1", 1), ("F1", 1), ("G1", 1), ("E2", 1), ("F2", 1), ("E3", 1), ("F3", 1)],
        ),
    );
    t.insert(
        "Q2bar",
        mk(
            2,
            &[("E", 1), ("E1", 1), ("F1", 1), ("G1", 1), ("E4", 1), ("F4", 1), ("E5", 1), ("F5", 1)],
        ),
    );
    // C1: smooth cubic through P1 (tangent), P2..P5 (tangent), and infinity
    t.insert(
        "C1bar",
        mk(
            3,
            &[
                ("E1", 1),
                ("F1", 1),
                ("E2", 1),
                ("F2", 1),
                ("E3", 1),
                ("F3", 1),
                ("E4", 1),
                ("F4", 1),
                ("E5", 1),
                ("F5", 1),
                ("E6", 1),
            ],
        ),
    );
    // C2: double point at P, through P2..P5 (tangent) and infinity
    t.insert(
        "C2bar",
        mk(
            3,
            &[
                ("E", 2),
                ("E2", 1),
                ("F2", 1),
                ("E3", 1),
                ("F3", 1),
                ("E4", 1),
                ("F4", 1),
                ("E5", 1),
                ("F5", 1),
                ("E6", 1),
            ],
        ),
    );
    // the conic through P, P2..P5, meeting the branch transversally there
    t.insert(
        "Qbar",
        mk(2, &[("E", 1), ("E2", 1), ("E3", 1), ("E4", 1), ("E5", 1)]),
    );
    // the conic through P1..P5 whose tangent at P1 follows the branch
    t.insert(
        "Qtildebar",
        mk(
            2,
            &[("E1", 1), ("F1", 1), ("E2", 1), ("E3", 1), ("E4", 1), ("E5", 1)],
        ),
    );
    // the line y = 0 through P and P1 (transversal to the branch tangent)
    t.insert("lbar", mk(1, &[("E", 1), ("E1", 1)]));
    // the branch tangent at P1, which also passes through infinity
    t.insert("ltildebar", mk(1, &[("E1", 1), ("F1", 1), ("E6", 1)]));

    t.insert("K", config.canonical_class());

    let mut b = t.get("Q1bar").unwrap().clone();
    for name in ["Q2bar", "C1bar", "C2bar"] {
        b = b.add(t.get(name).unwrap());
    }
    for i in 1..=5 {
        b = b.add(&config.proper_exceptional(i));
    }
    t.insert("B", b.clone());
    let l = b.half().expect("branch class is even");
    t.insert("L", l.clone());

    // the even split B1 = Q1 + Q2 + E2..E5 = 2 L1, B2 = C1 + C2 + E1 = 2 L2
    let mut b1 = t.get("Q1bar").unwrap().add(t.get("Q2bar").unwrap());
    for i in 2..=5 {
        b1 = b1.add(&config.proper_exceptional(i));
    }
    t.insert("B1", b1.clone());
    let l1 = b1.half().expect("B1 is even");
    t.insert("L1", l1.clone());
    let b2 = b.sub(&b1);
    t.insert("B2", b2.clone());
    t.insert("L2", l.sub(&l1));
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::{intersect, self_intersection};

    #[test]
    fn campedelli_lattice_basics() {
        let t = campedelli_table();
        let cfg = &t.config;
        assert_eq!(cfg.n(), 11);
        // K^2 = 9 - 11 = -2
        assert_eq!(self_intersection(&cfg.canonical_class()), -2);
        // paper formula roundtrip: K = -3H + E + sum E_i + 2 sum F_i in
        // proper symbols
        let k_mixed = t
            .mixed(
                -3,
                &[
                    ("E", 1),
                    ("E1", 1),
                    ("E2", 1),
                    ("E3", 1),
                    ("E4", 1),
                    ("E5", 1),
                    ("F1", 2),
                    ("F2", 2),
                    ("F3", 2),
                    ("F4", 2),
                    ("F5", 2),
                ],
            )
            .unwrap();
        assert_eq!(&k_mixed, t.get("K").unwrap());
        // B = 10H - 4E - 2 sum E_i - 6 sum F_i (proper symbols)
        let b_mixed = t
            .mixed(
                10,
                &[
                    ("E", -4),
                    ("E1", -2),
                    ("E2", -2),
                    ("E3", -2),
                    ("E4", -2),
                    ("E5", -2),
                    ("F1", -6),
                    ("F2", -6),
                    ("F3", -6),
                    ("F4", -6),
                    ("F5", -6),
                ],
            )
            .unwrap();
        assert_eq!(&b_mixed, t.get("B").unwrap());
        // L = 5H - 2E - sum E_i - 3 sum F_i
        let l_mixed = t
            .mixed(
                5,
                &[
                    ("E", -2),
                    ("E1", -1),
                    ("E2", -1),
                    ("E3", -1),
                    ("E4", -1),
                    ("E5", -1),
                    ("F1", -3),
                    ("F2", -3),
                    ("F3", -3),
                    ("F4", -3),
                    ("F5", -3),
                ],
            )
            .unwrap();
        assert_eq!(&l_mixed, t.get("L").unwrap());
        assert_eq!(t.get("B").unwrap(), &t.get("L").unwrap().scale(2));
    }

    #[test]
    fn campedelli_self_intersections() {
        let t = campedelli_table();
        for i in 1..=5 {
            let e = t.get(&format!("E{i}")).unwrap();
            assert_eq!(self_intersection(e), -2);
            let f = t.get(&format!("F{i}")).unwrap();
            assert_eq!(self_intersection(f), -1);
            assert_eq!(
                intersect(e, &t.config.total_exceptional(t.config.index_of(&format!("F{i}")).unwrap())).unwrap(),
                1
            );
        }
        assert_eq!(self_intersection(t.get("E").unwrap()), -1);
        // components of the branch are pairwise disjoint on the resolution
        let names = ["Cbar", "Qbar", "E1", "E2", "E3", "E4", "E5"];
        for (i, a) in names.iter().enumerate() {
            for b in &names[..i] {
                assert_eq!(
                    intersect(t.get(a).unwrap(), t.get(b).unwrap()).unwrap(),
                    0,
                    "{a} . {b}"
                );
            }
        }
        // B . E_i = E_i^2 = -2 since the other components miss E_i
        for i in 1..=5 {
            let e = t.get(&format!("E{i}")).unwrap();
            assert_eq!(intersect(t.get("B").unwrap(), e).unwrap(), -2);
            let rest = t.get("B").unwrap().sub(e);
            assert_eq!(intersect(&rest, e).unwrap(), 0);
        }
    }

    #[test]
    fn campedelli_adjunction_for_octic() {
        let t = campedelli_table();
        let c = t.get("Cbar").unwrap();
        let k = t.get("K").unwrap();
        // (C + K) . C = 2g - 2 with g = 1
        let val = intersect(&c.add(k), c).unwrap();
        assert_eq!(val, 0);
        // and the resolved conic is rational: (Q + K) . Q = -2
        let q = t.get("Qbar").unwrap();
        assert_eq!(intersect(&q.add(k), q).unwrap(), -2);
    }

    #[test]
    fn oort_peters_lattice_basics() {
        let t = oort_peters_table();
        let cfg = &t.config;
        assert_eq!(cfg.n(), 13);
        assert_eq!(self_intersection(&cfg.canonical_class()), -4);
        // printed formulas in proper symbols round-trip
        let k_mixed = t
            .mixed(
                -3,
                &[
                    ("E", 1),
                    ("E1", 1),
                    ("E2", 1),
                    ("E3", 1),
                    ("E4", 1),
                    ("E5", 1),
                    ("F1", 2),
                    ("F2", 2),
                    ("F3", 2),
                    ("F4", 2),
                    ("F5", 2),
                    ("G1", 3),
                    ("E6", 1),
                ],
            )
            .unwrap();
        assert_eq!(&k_mixed, t.get("K").unwrap());
        let q1_mixed = t
            .mixed(
                2,
                &[
                    ("E", -1),
                    ("E1", -1),
                    ("E2", -1),
                    ("E3", -1),
                    ("F1", -2),
                    ("F2", -2),
                    ("F3", -2),
                    ("G1", -3),
                ],
            )
            .unwrap();
        assert_eq!(&q1_mixed, t.get("Q1bar").unwrap());
        let q2_mixed = t
            .mixed(
                2,
                &[
                    ("E", -1),
                    ("E1", -1),
                    ("E4", -1),
                    ("E5", -1),
                    ("F1", -2),
                    ("F4", -2),
                    ("F5", -2),
                    ("G1", -3),
                ],
            )
            .unwrap();
        assert_eq!(&q2_mixed, t.get("Q2bar").unwrap());
        let c1_mixed = t
            .mixed(
                3,
                &[
                    ("E1", -1),
                    ("E2", -1),
                    ("E3", -1),
                    ("E4", -1),
                    ("E5", -1),
                    ("F1", -2),
                    ("F2", -2),
                    ("F3", -2),
                    ("F4", -2),
                    ("F5", -2),
                    ("G1", -2),
                    ("E6", -1),
                ],
            )
            .unwrap();
        assert_eq!(&c1_mixed, t.get("C1bar").unwrap());
        let c2_mixed = t
            .mixed(
                3,
                &[
                    ("E", -2),
                    ("E2", -1),
                    ("E3", -1),
                    ("E4", -1),
                    ("E5", -1),
                    ("F2", -2),
                    ("F3", -2),
                    ("F4", -2),
                    ("F5", -2),
                    ("E6", -1),
                ],
            )
            .unwrap();
        assert_eq!(&c2_mixed, t.get("C2bar").unwrap());
        let l_mixed = t
            .mixed(
                5,
                &[
                    ("E", -2),
                    ("E1", -1),
                    ("E2", -1),
                    ("E3", -1),
                    ("E4", -1),
                    ("E5", -1),
                    ("F1", -3),
                    ("F2", -3),
                    ("F3", -3),
                    ("F4", -3),
                    ("F5", -3),
                    ("G1", -4),
                    ("E6", -1),
                ],
            )
            .unwrap();
        assert_eq!(&l_mixed, t.get("L").unwrap());
        // B = 10H -4E -2 sum E_i -6 sum F_i -8 G1 -2 E6
        let b_mixed = t
            .mixed(
                10,
                &[
                    ("E", -4),
                    ("E1", -2),
                    ("E2", -2),
                    ("E3", -2),
                    ("E4", -2),
                    ("E5", -2),
                    ("F1", -6),
                    ("F2", -6),
                    ("F3", -6),
                    ("F4", -6),
                    ("F5", -6),
                    ("G1", -8),
                    ("E6", -2),
                ],
            )
            .unwrap();
        assert_eq!(&b_mixed, t.get("B").unwrap());
        // lbar = H - E - E1 - F1 - G1 telescopes to h - e - eps1
        let l_line = t
            .mixed(1, &[("E", -1), ("E1", -1), ("F1", -1), ("G1", -1)])
            .unwrap();
        assert_eq!(&l_line, t.get("lbar").unwrap());
        // Qbar = 2H - E - sum_2^5 (E_i + F_i)
        let q_mixed = t
            .mixed(
                2,
                &[
                    ("E", -1),
                    ("E2", -1),
                    ("E3", -1),
                    ("E4", -1),
                    ("E5", -1),
                    ("F2", -1),
                    ("F3", -1),
                    ("F4", -1),
                    ("F5", -1),
                ],
            )
            .unwrap();
        assert_eq!(&q_mixed, t.get("Qbar").unwrap());
        // Qtildebar = 2H - sum E_i - 2F1 - sum_2^5 F_i - 2 G1
        let qt_mixed = t
            .mixed(
                2,
                &[
                    ("E1", -1),
                    ("E2", -1),
                    ("E3", -1),
                    ("E4", -1),
                    ("E5", -1),
                    ("F1", -2),
                    ("F2", -1),
                    ("F3", -1),
                    ("F4", -1),
                    ("F5", -1),
                    ("G1", -2),
                ],
            )
            .unwrap();
        assert_eq!(&qt_mixed, t.get("Qtildebar").unwrap());
    }

    #[test]
    fn oort_peters_branch_split() {
        let t = oort_peters_table();
        // L1 = 2H - E - E1 - 2F1 - sum_2^5 F_i - 3G1 (proper symbols)
        let l1_mixed = t
            .mixed(
                2,
                &[
                    ("E", -1),
                    ("E1", -1),
                    ("F1", -2),
                    ("F2", -1),
                    ("F3", -1),
                    ("F4", -1),
                    ("F5", -1),
                    ("G1", -3),
                ],
            )
            .unwrap();
        assert_eq!(&l1_mixed, t.get("L1").unwrap());
        assert_eq!(t.get("B1").unwrap(), &t.get("L1").unwrap().scale(2));
        assert_eq!(t.get("B2").unwrap(), &t.get("L2").unwrap().scale(2));
        // B2 = C1 + C2 + E1
        let b2 = t
            .get("C1bar")
            .unwrap()
            .add(t.get("C2bar").unwrap())
            .add(t.get("E1").unwrap());
        assert_eq!(&b2, t.get("B2").unwrap());
    }

    #[test]
    fn oort_peters_self_intersections() {
        let t = oort_peters_table();
        assert_eq!(self_intersection(t.get("Q1bar").unwrap()), -4);
        assert_eq!(self_intersection(t.get("Q2bar").unwrap()), -4);
        assert_eq!(self_intersection(t.get("Qbar").unwrap()), -1);
        assert_eq!(self_intersection(t.get("Qtildebar").unwrap()), -2);
        // F1 carries the extra center: proper transform drops to -2
        assert_eq!(self_intersection(t.get("F1").unwrap()), -2);
        assert_eq!(self_intersection(t.get("F2").unwrap()), -1);
        assert_eq!(self_intersection(t.get("G1").unwrap()), -1);
        // branch components pairwise disjoint on the resolution
        let names = ["Q1bar", "Q2bar", "C1bar", "C2bar", "E1", "E2", "E3", "E4", "E5"];
        for (i, a) in names.iter().enumerate() {
            for b in &names[..i] {
                assert_eq!(
                    intersect(t.get(a).unwrap(), t.get(b).unwrap()).unwrap(),
                    0,
                    "{a} . {b}"
                );
            }
        }
    }
}
