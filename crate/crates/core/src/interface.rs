//! Rank-one connections to the austenite well.
//!
//! A macroscopic gradient F forms a planar interface with undistorted
//! austenite exactly when the middle eigenvalue of F^T F equals 1. The
//! habit-plane normals are then multiples of
//! sqrt(1 - l1) e1 +- sqrt(l3 - 1) e3, where l1 <= 1 <= l3 are the extreme
//! eigenvalues of F^T F with eigenvectors e1, e3.

use crate::error::{Error, Result};
use crate::mat3::{self, Mat3, Vec3};
use crate::twinning::TwinSolution;

/// Default tolerance on |middle eigenvalue - 1|. Branch points come from
/// closed-form root solving, so the deviation is rounding-only; 1e-8
/// leaves headroom for accumulated 3x3 arithmetic error.
pub const DEFAULT_TOL_MID: f64 = 1e-8;

/// One rank-one connection `1 + b (x) m in SO(3) F`.
///
/// `normal` is unit length with its largest-magnitude component positive;
/// the physical interface is insensitive to the sign.
#[derive(Debug, Clone, Copy)]
pub struct InterfaceSolution {
    pub shear: Vec3,
    pub normal: Vec3,
    /// Ascending eigenvalues of F^T F.
    pub eigenvalues: [f64; 3],
}

/// Classical interface data: the volume fraction `lambda_star` in (0, 1/2]
/// and the four habit-plane solutions, two at `lambda_star` followed by
/// two at `1 - lambda_star`.
#[derive(Debug, Clone)]
pub struct ClassicalInterface {
    pub lambda_star: f64,
    pub solutions: [InterfaceSolution; 4],
}

/// Flip (b, m) -> (-b, -m) so the largest-magnitude component of m is positive.
fn gauge_fix(shear: &mut Vec3, normal: &mut Vec3) {
    let mut kmax = 0;
    for k in 1..3 {
        if normal[k].abs() > normal[kmax].abs() {
            kmax = k;
        }
    }
    if normal[kmax] < 0.0 {
        *shear = mat3::scale(shear, -1.0);
        *normal = mat3::scale(normal, -1.0);
    }
}

/// Both habit-plane solutions `(b, m)` for the gradient `f`, or an empty
/// list when the middle eigenvalue of F^T F is farther than `tol_mid`
/// from 1.
///
/// The result depends on `f` only through F^T F, so any left rotation of
/// `f` yields the same solutions.
pub fn rank_one_to_identity(f: &Mat3, tol_mid: f64) -> Result<Vec<InterfaceSolution>> {
    let det = f.det();
    if det <= 0.0 {
        return Err(Error::NotInvertible { det });
    }
    let c = f.transpose().mul(f);
    if c.sub(&Mat3::identity()).max_abs() <= 1e-10 {
        return Err(Error::IsRotation);
    }
    let eig = c.sym_eig()?;
    let [l1, l2, l3] = eig.eigenvalues;
    if (l2 - 1.0).abs() > tol_mid {
        return Ok(Vec::new());
    }
    let spread = l3 - l1;
    let e1 = eig.eigenvectors[0];
    let e3 = eig.eigenvectors[2];

    let mut out = Vec::with_capacity(2);
    for kappa in [1.0f64, -1.0] {
        let c1 = (l3 * (1.0 - l1).max(0.0) / spread).sqrt();
        let c3 = kappa * (l1 * (l3 - 1.0).max(0.0) / spread).sqrt();
        let mut shear = mat3::add(&mat3::scale(&e1, c1), &mat3::scale(&e3, c3));

        let d1 = -((1.0 - l1).max(0.0)).sqrt();
        let d3 = kappa * ((l3 - 1.0).max(0.0)).sqrt();
        let factor = (l3.sqrt() - l1.sqrt()) / spread.sqrt();
        let raw = mat3::scale(
            &mat3::add(&mat3::scale(&e1, d1), &mat3::scale(&e3, d3)),
            factor,
        );
        let rho = mat3::norm(&raw);
        let mut normal = mat3::scale(&raw, 1.0 / rho);
        shear = mat3::scale(&shear, rho);
        gauge_fix(&mut shear, &mut normal);

        let recon = Mat3::identity().add(&Mat3::outer(&shear, &normal));
        debug_assert!(
            recon.transpose().mul(&recon).sub(&c).max_abs() <= 1e-9,
            "rank-one reconstruction drifted"
        );
        out.push(InterfaceSolution {
            shear,
            normal,
            eigenvalues: eig.eigenvalues,
        });
    }
    Ok(out)
}

/// Both roots of `x^2 - x = r` in the open interval (0, 1), smaller
/// first, when they exist.
///
/// Shared by the classical interface and the branch solver so the
/// endpoint values agree bit for bit.
pub(crate) fn unit_interval_roots(r: f64) -> Option<(f64, f64)> {
    let disc = 1.0 + 4.0 * r;
    if disc < 0.0 || r >= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some((0.5 * (1.0 - s), 0.5 * (1.0 + s)))
}

/// Classical austenite-martensite interface for the laminate
/// `M(lambda) = U_A + lambda b (x) n` built on a Type-II twin solution.
pub fn classical_interface(
    u_a: &Mat3,
    twin: &TwinSolution,
    tol_mid: f64,
) -> Result<ClassicalInterface> {
    let strain = u_a.mul(u_a).sub(&Mat3::identity());
    let a0 = strain.det();
    let a1 = -2.0
        * mat3::dot(
            &twin.shear,
            &u_a.mul_vec(&strain.cof().mul_vec(&twin.normal)),
        );
    if a1.abs() <= 1e-300 {
        return Err(Error::NoClassical {
            reason: "coefficient a1 vanishes",
        });
    }
    let (lambda_star, _) = unit_interval_roots(-a0 / a1).ok_or(Error::NoClassical {
        reason: "lambda^2 - lambda = -a0/a1 has no root in (0, 1)",
    })?;
    if !(lambda_star > 0.0 && lambda_star <= 0.5) {
        return Err(Error::NoClassical {
            reason: "root falls on the boundary of (0, 1/2]",
        });
    }

    let mut solutions = Vec::with_capacity(4);
    for lambda in [lambda_star, 1.0 - lambda_star] {
        let m = u_a.add(&Mat3::outer(&twin.shear, &twin.normal).scaled(lambda));
        let sols = rank_one_to_identity(&m, tol_mid)?;
        if sols.len() != 2 {
            return Err(Error::NoClassical {
                reason: "middle-eigenvalue check failed at the root",
            });
        }
        solutions.extend(sols);
    }
    Ok(ClassicalInterface {
        lambda_star,
        solutions: [solutions[0], solutions[1], solutions[2], solutions[3]],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twinning::type_ii_solution;
    use crate::variants::{cubic_point_group, make_variants, LatticeParams};

    #[test]
    fn diagonal_gradient_normals_follow_the_eigenvalue_formula() {
        // F^T F = diag(0.9216, 1, 1.1025), so
        // m ~ sqrt(1 - 0.9216) e1 +- sqrt(1.1025 - 1) e3.
        let f = Mat3::diag(0.96, 1.0, 1.05);
        let sols = rank_one_to_identity(&f, DEFAULT_TOL_MID).unwrap();
        assert_eq!(sols.len(), 2);
        let mx = (1.0f64 - 0.96 * 0.96).sqrt();
        let mz = (1.05f64 * 1.05 - 1.0).sqrt();
        let scale = (mx * mx + mz * mz).sqrt();
        let expect = [mx / scale, 0.0, mz / scale];
        for sol in &sols {
            assert!((sol.normal[0].abs() - expect[0]).abs() <= 1e-12);
            assert!(sol.normal[1].abs() <= 1e-12);
            assert!((sol.normal[2].abs() - expect[2]).abs() <= 1e-12);
            let recon = Mat3::identity().add(&Mat3::outer(&sol.shear, &sol.normal));
            let resid = recon
                .transpose()
                .mul(&recon)
                .sub(&f.transpose().mul(&f))
                .max_abs();
            assert!(resid <= 1e-9);
        }
    }

    #[test]
    fn gradient_with_stretch_eigenvalues_096_1_105() {
        // When F^T F itself is diag(0.96, 1, 1.05), the normal components
        // are sqrt(0.04) and sqrt(0.05) up to normalization.
        let f = Mat3::diag(0.96f64.sqrt(), 1.0, 1.05f64.sqrt());
        let sols = rank_one_to_identity(&f, DEFAULT_TOL_MID).unwrap();
        let scale = 0.09f64.sqrt();
        let expect = [0.04f64.sqrt() / scale, 0.0, 0.05f64.sqrt() / scale];
        for sol in &sols {
            assert!((sol.normal[0].abs() - expect[0]).abs() <= 1e-10);
            assert!((sol.normal[2].abs() - expect[2]).abs() <= 1e-10);
        }
    }

    #[test]
    fn rotations_are_rejected() {
        let th = 30.0f64.to_radians();
        let rz = Mat3([
            [th.cos(), -th.sin(), 0.0],
            [th.sin(), th.cos(), 0.0],
            [0.0, 0.0, 1.0],
        ]);
        assert!(matches!(
            rank_one_to_identity(&rz, DEFAULT_TOL_MID),
            Err(Error::IsRotation)
        ));
    }

    #[test]
    fn nonpositive_determinant_is_rejected() {
        let f = Mat3::diag(-1.0, 1.0, 1.2);
        assert!(matches!(
            rank_one_to_identity(&f, DEFAULT_TOL_MID),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn middle_eigenvalue_away_from_one_gives_no_solutions() {
        let f = Mat3::diag(0.9, 1.05, 1.2);
        assert!(rank_one_to_identity(&f, DEFAULT_TOL_MID)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn left_rotation_does_not_change_solutions() {
        let f = Mat3::diag(0.96, 1.0, 1.05);
        let th = 0.7f64;
        let q = Mat3([
            [th.cos(), 0.0, th.sin()],
            [0.0, 1.0, 0.0],
            [-th.sin(), 0.0, th.cos()],
        ]);
        let a = rank_one_to_identity(&f, DEFAULT_TOL_MID).unwrap();
        let b = rank_one_to_identity(&q.mul(&f), DEFAULT_TOL_MID).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert!(mat3::sub(&x.normal, &y.normal)
                .iter()
                .all(|c| c.abs() <= 1e-12));
            assert!(mat3::sub(&x.shear, &y.shear)
                .iter()
                .all(|c| c.abs() <= 1e-12));
        }
    }

    #[test]
    fn plus_minus_solutions_mirror_each_other() {
        // Swapping the +- sign in the eigenvector combination maps one
        // solution to the other: components along e1 agree, along e3 flip.
        let f = Mat3::diag(0.96, 1.0, 1.05);
        let sols = rank_one_to_identity(&f, DEFAULT_TOL_MID).unwrap();
        let (a, b) = (&sols[0], &sols[1]);
        assert!((a.normal[0].abs() - b.normal[0].abs()).abs() <= 1e-14);
        assert!((a.normal[2].abs() - b.normal[2].abs()).abs() <= 1e-14);
        assert!((a.normal[0] * a.normal[2] + b.normal[0] * b.normal[2]).abs() <= 1e-14);
    }

    #[test]
    fn classical_cualni_matches_bisection() {
        let set = make_variants(&LatticeParams::CUALNI).unwrap();
        let g = cubic_point_group();
        let u_a = set.stretch(3).unwrap();
        let twin = type_ii_solution(3, 6, &set, &g).unwrap();
        let classical = classical_interface(u_a, &twin, DEFAULT_TOL_MID).unwrap();
        assert!(classical.lambda_star > 0.0 && classical.lambda_star <= 0.5);

        // independent oracle: bisection of lambda -> det(M^T M - 1) on [0, 1/2]
        let det_at = |lambda: f64| {
            let m = u_a.add(&Mat3::outer(&twin.shear, &twin.normal).scaled(lambda));
            m.transpose().mul(&m).sub(&Mat3::identity()).det()
        };
        let (mut lo, mut hi) = (0.0f64, 0.5f64);
        assert!(det_at(lo) < 0.0 && det_at(hi) >= 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if det_at(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let bisected = 0.5 * (lo + hi);
        assert!(
            (classical.lambda_star - bisected).abs() <= 1e-10,
            "closed form {} vs bisection {}",
            classical.lambda_star,
            bisected
        );

        for sol in &classical.solutions {
            assert!((mat3::norm(&sol.normal) - 1.0).abs() <= 1e-14);
            assert!((sol.eigenvalues[1] - 1.0).abs() <= 1e-8);
            assert!(sol.eigenvalues[0] <= 1.0 && sol.eigenvalues[2] >= 1.0);
        }
    }

    #[test]
    fn classical_rejects_unit_middle_eigenvalue_stretch() {
        // a0 = det(U^2 - 1) = 0 when U has a unit eigenvalue: the root
        // lambda* = 0 lies on the boundary and is rejected.
        let u = Mat3::diag(0.95, 1.0, 1.1);
        let twin = TwinSolution {
            rotation: Mat3::identity(),
            shear: [0.01, 0.0, 0.02],
            normal: [1.0, 0.0, 0.0],
        };
        assert!(matches!(
            classical_interface(&u, &twin, DEFAULT_TOL_MID),
            Err(Error::NoClassical { .. })
        ));
    }

    #[test]
    fn one_minus_lambda_star_interface_exists_alongside() {
        let set = make_variants(&LatticeParams::CUALNI).unwrap();
        let g = cubic_point_group();
        let u_a = set.stretch(3).unwrap();
        let twin = type_ii_solution(3, 6, &set, &g).unwrap();
        let classical = classical_interface(u_a, &twin, DEFAULT_TOL_MID).unwrap();
        // solutions 2 and 3 belong to 1 - lambda*; their eigenvalues also
        // bracket 1
        for sol in &classical.solutions[2..] {
            assert!((sol.eigenvalues[1] - 1.0).abs() <= 1e-8);
        }
    }
}
