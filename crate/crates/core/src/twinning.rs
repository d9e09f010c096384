//! Twinning equation solver and twin-type classification.
//!
//! The twinning equation for an ordered variant pair (i, j) is
//!
//! ```text
//! R U_j - U_i = b (x) n
//! ```
//!
//! with R a rotation, b the shear vector and n the unit normal to the
//! twinning plane in the reference configuration. Writing
//! C = U_i^-1 U_j^2 U_i^-1, the equation is solvable exactly when the
//! middle eigenvalue of C equals 1, and then there are exactly two
//! solutions, built from the extreme eigenpairs of C.
//!
//! Only the dyad b (x) n is determined; the stored gauge makes n unit
//! length with its first nonzero component (scanning x, y, z) positive,
//! and b absorbs the magnitude and sign.

use crate::error::{Error, Result};
use crate::mat3::{self, Mat3, Vec3};
use crate::variants::{PointGroup, VariantSet};

/// Tolerance on |middle eigenvalue - 1| for twin existence. For
/// symmetry-related orthorhombic variants the middle eigenvalue is 1 to
/// machine precision; this gate only guards rounding.
pub const TWIN_MID_EIG_TOL: f64 = 1e-9;

/// Classification of a twin solution by the 180-degree lattice rotations
/// relating the two variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinType {
    /// Twin-plane normal along the (unique) two-fold axis.
    TypeI,
    /// The other solution of a pair related by a unique two-fold axis.
    TypeII,
    /// Variants related by two distinct two-fold axes; both solutions.
    Compound,
}

impl std::fmt::Display for TwinType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TwinType::TypeI => write!(f, "Type-I"),
            TwinType::TypeII => write!(f, "Type-II"),
            TwinType::Compound => write!(f, "compound"),
        }
    }
}

/// One solution (R, b, n) of the twinning equation.
#[derive(Debug, Clone, Copy)]
pub struct TwinSolution {
    pub rotation: Mat3,
    pub shear: Vec3,
    pub normal: Vec3,
}

impl TwinSolution {
    /// Max-norm residual of `R U_j - U_i - b (x) n`.
    pub fn residual(&self, ui: &Mat3, uj: &Mat3) -> f64 {
        self.rotation
            .mul(uj)
            .sub(ui)
            .sub(&Mat3::outer(&self.shear, &self.normal))
            .max_abs()
    }
}

/// The two solutions for an ordered pair; their normals are never parallel.
#[derive(Debug, Clone, Copy)]
pub struct TwinPairSolutions {
    pub solutions: [TwinSolution; 2],
}

/// Flip (b, n) -> (-b, -n) so the first nonzero component of n is positive.
fn gauge_fix(shear: &mut Vec3, normal: &mut Vec3) {
    for c in *normal {
        if c.abs() > 1e-12 {
            if c < 0.0 {
                *shear = mat3::scale(shear, -1.0);
                *normal = mat3::scale(normal, -1.0);
            }
            return;
        }
    }
}

/// Solve the twinning equation `R U_j - U_i = b (x) n` for SPD wells.
pub fn solve_twin(ui: &Mat3, uj: &Mat3) -> Result<TwinPairSolutions> {
    let ui_inv = ui.inv()?;
    let c = ui_inv.mul(&uj.mul(uj)).mul(&ui_inv);
    if c.sub(&Mat3::identity()).max_abs() < 1e-12 {
        return Err(Error::Degenerate);
    }
    let eig = c.sym_eig()?;
    let [l1, l2, l3] = eig.eigenvalues;
    if (l2 - 1.0).abs() > TWIN_MID_EIG_TOL {
        return Err(Error::NoTwin { mid_eig: l2 });
    }
    let spread = l3 - l1;
    if spread <= 1e-12 {
        return Err(Error::Degenerate);
    }
    let e1 = eig.eigenvectors[0];
    let e3 = eig.eigenvectors[2];
    let uj_inv = uj.inv()?;

    let mut solutions = [TwinSolution {
        rotation: Mat3::identity(),
        shear: [0.0; 3],
        normal: [0.0; 3],
    }; 2];
    for (slot, kappa) in [(0usize, 1.0f64), (1, -1.0)] {
        let c1 = (l3 * (1.0 - l1).max(0.0) / spread).sqrt();
        let c3 = kappa * (l1 * (l3 - 1.0).max(0.0) / spread).sqrt();
        let mut shear = mat3::add(&mat3::scale(&e1, c1), &mat3::scale(&e3, c3));

        let d1 = -((1.0 - l1).max(0.0)).sqrt();
        let d3 = kappa * ((l3 - 1.0).max(0.0)).sqrt();
        let factor = (l3.sqrt() - l1.sqrt()) / spread.sqrt();
        let raw = mat3::add(
            &mat3::scale(&ui.mul_vec(&e1), d1),
            &mat3::scale(&ui.mul_vec(&e3), d3),
        );
        let raw = mat3::scale(&raw, factor);
        let rho = mat3::norm(&raw);
        let mut normal = mat3::scale(&raw, 1.0 / rho);
        shear = mat3::scale(&shear, rho);

        gauge_fix(&mut shear, &mut normal);
        let rotation = ui.add(&Mat3::outer(&shear, &normal)).mul(&uj_inv);
        solutions[slot] = TwinSolution {
            rotation,
            shear,
            normal,
        };
    }

    if mat3::norm(&mat3::cross(&solutions[0].normal, &solutions[1].normal)) <= 1e-9 {
        return Err(Error::Degenerate);
    }
    Ok(TwinPairSolutions { solutions })
}

/// Two-fold axes of the point group conjugating `ui` into `uj`.
fn relating_axes(ui: &Mat3, uj: &Mat3, group: &PointGroup) -> Vec<Vec3> {
    group
        .two_folds()
        .into_iter()
        .filter(|(r, _)| r.mul(ui).mul(&r.transpose()).sub(uj).max_abs() < 1e-12)
        .map(|(_, axis)| axis)
        .collect()
}

/// Classify a twin solution for the pair (`ui`, `uj`).
///
/// Two or more relating two-fold axes make the pair compound (both
/// solutions). With exactly one axis, the solution whose normal is
/// parallel to the axis is Type I, the other Type II. Classification
/// depends only on the dyad b (x) n, never on the (b, n) scaling gauge.
pub fn classify_twin(
    solution: &TwinSolution,
    ui: &Mat3,
    uj: &Mat3,
    group: &PointGroup,
) -> Result<TwinType> {
    let axes = relating_axes(ui, uj, group);
    match axes.len() {
        0 => Err(Error::NotTwinRelated),
        1 => {
            let n = mat3::normalize(&solution.normal).ok_or(Error::Degenerate)?;
            if mat3::line_angle(&n, &axes[0]) < 1e-8 {
                Ok(TwinType::TypeI)
            } else {
                Ok(TwinType::TypeII)
            }
        }
        _ => Ok(TwinType::Compound),
    }
}

/// Solve and classify both solutions for the 1-based pair (i, j).
pub fn solve_pair_classified(
    i: u8,
    j: u8,
    variants: &VariantSet,
    group: &PointGroup,
) -> Result<(TwinPairSolutions, [TwinType; 2])> {
    let ui = variants.stretch(i)?;
    let uj = variants.stretch(j)?;
    let pair = solve_twin(ui, uj)?;
    let t0 = classify_twin(&pair.solutions[0], ui, uj, group)?;
    let t1 = classify_twin(&pair.solutions[1], ui, uj, group)?;
    Ok((pair, [t0, t1]))
}

/// The Type-II solution for the pair (i, j), if it has one.
pub fn type_ii_solution(
    i: u8,
    j: u8,
    variants: &VariantSet,
    group: &PointGroup,
) -> Result<TwinSolution> {
    let (pair, types) = solve_pair_classified(i, j, variants, group)?;
    for (sol, t) in pair.solutions.iter().zip(types.iter()) {
        if *t == TwinType::TypeII {
            return Ok(*sol);
        }
    }
    Err(Error::NoTypeII { i, j })
}

fn is_compound(i: u8, j: u8, variants: &VariantSet, group: &PointGroup) -> Result<bool> {
    let ui = variants.stretch(i)?;
    let uj = variants.stretch(j)?;
    Ok(relating_axes(ui, uj, group).len() >= 2)
}

/// Find the compound counterparts (A', B') of a Type-II pair (A, B).
///
/// (A, A') and (B, B') must be compound-related, (A', B') must itself
/// admit a Type-II twin, and the compound systems must admit solutions
/// with a shared normal.
pub fn compound_counterparts(
    a: u8,
    b: u8,
    variants: &VariantSet,
    group: &PointGroup,
) -> Result<(u8, u8)> {
    // precondition: (a, b) is a Type-II pair
    type_ii_solution(a, b, variants, group)?;
    for ap in 1..=6u8 {
        if ap == a || ap == b || !is_compound(a, ap, variants, group)? {
            continue;
        }
        for bp in 1..=6u8 {
            if bp == a || bp == b || bp == ap || !is_compound(b, bp, variants, group)? {
                continue;
            }
            if type_ii_solution(ap, bp, variants, group).is_err() {
                continue;
            }
            let pair_a = solve_twin(variants.stretch(a)?, variants.stretch(ap)?)?;
            let pair_b = solve_twin(variants.stretch(b)?, variants.stretch(bp)?)?;
            if align_compound_normals(&pair_a, &pair_b).is_ok() {
                return Ok((ap, bp));
            }
        }
    }
    Err(Error::NoCounterpart { a, b })
}

/// Pick one solution from each compound pair so the twin-plane normals
/// agree, and snap them to exact equality.
///
/// Scans all four combinations; a match requires componentwise agreement
/// within 1e-12 under the common gauge. On success the second solution's
/// normal is replaced by the first's, making the equality exact; the
/// replacement stays inside the 1e-12 twin residual contract.
pub fn align_compound_normals(
    pair_a: &TwinPairSolutions,
    pair_b: &TwinPairSolutions,
) -> Result<(TwinSolution, TwinSolution)> {
    for sa in &pair_a.solutions {
        for sb in &pair_b.solutions {
            let diff = mat3::sub(&sa.normal, &sb.normal);
            if diff.iter().all(|c| c.abs() <= 1e-12) {
                let mut matched = *sb;
                matched.normal = sa.normal;
                return Ok((*sa, matched));
            }
        }
    }
    Err(Error::NoSharedNormal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variants::{cubic_point_group, make_variants, LatticeParams};

    fn cualni() -> (VariantSet, PointGroup) {
        (
            make_variants(&LatticeParams::CUALNI).unwrap(),
            cubic_point_group(),
        )
    }

    #[test]
    fn identical_wells_are_degenerate() {
        let (set, _) = cualni();
        let u3 = set.stretch(3).unwrap();
        assert!(matches!(solve_twin(u3, u3), Err(Error::Degenerate)));
    }

    #[test]
    fn unit_lattice_has_no_twins() {
        let set = make_variants(&LatticeParams {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
        })
        .unwrap();
        assert!(matches!(
            solve_twin(set.stretch(3).unwrap(), set.stretch(6).unwrap()),
            Err(Error::Degenerate)
        ));
    }

    #[test]
    fn unrelated_spd_pair_yields_no_twin() {
        let ui = Mat3::diag(1.1, 0.9, 1.05);
        let uj = Mat3::diag(1.2, 0.85, 1.07);
        assert!(matches!(solve_twin(&ui, &uj), Err(Error::NoTwin { .. })));
    }

    #[test]
    fn pair_3_6_solutions_satisfy_all_identities() {
        let (set, _) = cualni();
        let ui = set.stretch(3).unwrap();
        let uj = set.stretch(6).unwrap();
        let pair = solve_twin(ui, uj).unwrap();
        for sol in &pair.solutions {
            assert!(sol.residual(ui, uj) <= 1e-12);
            assert!((mat3::norm(&sol.normal) - 1.0).abs() <= 1e-14);
            let orth = sol
                .rotation
                .transpose()
                .mul(&sol.rotation)
                .sub(&Mat3::identity())
                .max_abs();
            assert!(orth <= 1e-13);
            // volume identity U_i^-1 b . n = 0
            let v = mat3::dot(&ui.inv().unwrap().mul_vec(&sol.shear), &sol.normal);
            assert!(v.abs() <= 1e-12);
        }
        let nx = mat3::cross(&pair.solutions[0].normal, &pair.solutions[1].normal);
        assert!(mat3::norm(&nx) > 1e-3, "normals must not be parallel");
    }

    #[test]
    fn pair_3_6_is_type_i_plus_type_ii() {
        let (set, g) = cualni();
        let (pair, types) = solve_pair_classified(3, 6, &set, &g).unwrap();
        let mut sorted = types.to_vec();
        sorted.sort_by_key(|t| format!("{t:?}"));
        assert_eq!(sorted, vec![TwinType::TypeI, TwinType::TypeII]);
        // the Type-I normal is the two-fold axis (1,1,0)/sqrt(2)
        let axis = [1.0 / 2.0f64.sqrt(), 1.0 / 2.0f64.sqrt(), 0.0];
        for (sol, t) in pair.solutions.iter().zip(types.iter()) {
            if *t == TwinType::TypeI {
                assert!(mat3::line_angle(&sol.normal, &axis) < 1e-10);
            } else {
                assert!(mat3::line_angle(&sol.normal, &axis) > 0.1);
            }
        }
    }

    #[test]
    fn pair_3_4_is_compound() {
        let (set, g) = cualni();
        let (_, types) = solve_pair_classified(3, 4, &set, &g).unwrap();
        assert_eq!(types, [TwinType::Compound, TwinType::Compound]);
        let (_, types) = solve_pair_classified(5, 6, &set, &g).unwrap();
        assert_eq!(types, [TwinType::Compound, TwinType::Compound]);
    }

    #[test]
    fn every_distinct_variant_pair_is_twin_related() {
        // Same-block pairs are compound, cross-block pairs split into one
        // Type-I and one Type-II solution; all solution invariants hold
        // for all 30 ordered pairs.
        let (set, g) = cualni();
        for i in 1..=6u8 {
            for j in 1..=6u8 {
                if i == j {
                    continue;
                }
                let ui = set.stretch(i).unwrap();
                let uj = set.stretch(j).unwrap();
                let (pair, types) = solve_pair_classified(i, j, &set, &g).unwrap();
                for sol in &pair.solutions {
                    assert!(sol.residual(ui, uj) <= 1e-12, "pair ({i},{j})");
                    assert!((mat3::norm(&sol.normal) - 1.0).abs() <= 1e-14);
                    let orth = sol
                        .rotation
                        .transpose()
                        .mul(&sol.rotation)
                        .sub(&Mat3::identity())
                        .max_abs();
                    assert!(orth <= 1e-13, "pair ({i},{j}) orth {orth:e}");
                    let v = mat3::dot(&ui.inv().unwrap().mul_vec(&sol.shear), &sol.normal);
                    assert!(v.abs() <= 1e-12, "pair ({i},{j}) volume {v:e}");
                }
                let same_block = (i, j) == (1, 2)
                    || (i, j) == (2, 1)
                    || (i, j) == (3, 4)
                    || (i, j) == (4, 3)
                    || (i, j) == (5, 6)
                    || (i, j) == (6, 5);
                if same_block {
                    assert_eq!(types, [TwinType::Compound, TwinType::Compound], "({i},{j})");
                } else {
                    let mut t = types.to_vec();
                    t.sort_by_key(|t| format!("{t:?}"));
                    assert_eq!(t, vec![TwinType::TypeI, TwinType::TypeII], "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn classification_is_gauge_invariant() {
        let (set, g) = cualni();
        let ui = set.stretch(3).unwrap();
        let uj = set.stretch(6).unwrap();
        let pair = solve_twin(ui, uj).unwrap();
        for sol in &pair.solutions {
            let base = classify_twin(sol, ui, uj, &g).unwrap();
            for c in [2.0, -0.5, 17.0] {
                let scaled = TwinSolution {
                    rotation: sol.rotation,
                    shear: mat3::scale(&sol.shear, c),
                    normal: mat3::scale(&sol.normal, 1.0 / c),
                };
                assert_eq!(classify_twin(&scaled, ui, uj, &g).unwrap(), base);
            }
        }
    }

    #[test]
    fn twin_related_outside_group_is_rejected_by_classification() {
        // conjugation by a 180-degree rotation about an axis not in the
        // cubic group: the twinning equation is solvable but the pair is
        // not twin-related in the crystallographic sense.
        let axis = mat3::normalize(&[1.0, 2.0, 3.0]).unwrap();
        let q = Mat3::outer(&axis, &axis).scaled(2.0).sub(&Mat3::identity());
        let ui = Mat3::diag(1.2, 0.9, 1.1);
        let uj = q.mul(&ui).mul(&q.transpose());
        let pair = solve_twin(&ui, &uj).unwrap();
        let g = cubic_point_group();
        assert!(matches!(
            classify_twin(&pair.solutions[0], &ui, &uj, &g),
            Err(Error::NotTwinRelated)
        ));
    }

    #[test]
    fn counterparts_of_3_6_are_4_5() {
        let (set, g) = cualni();
        assert_eq!(compound_counterparts(3, 6, &set, &g).unwrap(), (4, 5));
        // returned pair admits a Type-II solution
        assert!(type_ii_solution(4, 5, &set, &g).is_ok());
    }

    #[test]
    fn counterparts_reject_identical_indices() {
        let (set, g) = cualni();
        assert!(compound_counterparts(3, 3, &set, &g).is_err());
    }

    #[test]
    fn shared_normal_selection_is_unique() {
        let (set, _) = cualni();
        let pair_a = solve_twin(set.stretch(3).unwrap(), set.stretch(4).unwrap()).unwrap();
        let pair_b = solve_twin(set.stretch(6).unwrap(), set.stretch(5).unwrap()).unwrap();
        let (sa, sb) = align_compound_normals(&pair_a, &pair_b).unwrap();
        assert_eq!(sa.normal, sb.normal);
        // exactly one of the four combinations matches
        let mut matches = 0;
        for x in &pair_a.solutions {
            for y in &pair_b.solutions {
                if mat3::sub(&x.normal, &y.normal)
                    .iter()
                    .all(|c| c.abs() <= 1e-12)
                {
                    matches += 1;
                }
            }
        }
        assert_eq!(matches, 1);
        // the shared compound normal is U_A-orthogonal to the Type-II shear
        let ua = set.stretch(3).unwrap();
        let g = cubic_point_group();
        let b_ab = type_ii_solution(3, 6, &set, &g).unwrap().shear;
        let v = mat3::dot(&ua.inv().unwrap().mul_vec(&sa.normal), &b_ab);
        assert!(v.abs() <= 1e-12, "orthogonality residual {v:e}");
    }
}
