//! Exact-contract 3x3 matrix kernel.
//!
//! All deformation gradients, stretches and rotations in this crate are
//! 3x3 and the analysis never needs anything larger, so the kernel is
//! hand-rolled: cofactor-expansion determinant, adjugate inverse and a
//! cyclic Jacobi eigensolver for symmetric matrices. Everything is a pure
//! function of its inputs.

#![allow(clippy::needless_range_loop)] // index loops mirror the matrix algebra

use crate::error::{Error, Result};

/// Column/row vector in R^3.
pub type Vec3 = [f64; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Unit vector along `a`; `None` when `a` is (numerically) zero.
pub fn normalize(a: &Vec3) -> Option<Vec3> {
    let n = norm(a);
    if n < 1e-300 {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Angle between the lines spanned by two unit vectors, in radians.
///
/// Insensitive to the sign of either argument and numerically stable for
/// nearly (anti-)parallel inputs.
pub fn line_angle(a: &Vec3, b: &Vec3) -> f64 {
    let c = norm(&cross(a, b));
    let d = dot(a, b).abs();
    c.atan2(d)
}

/// Row-major 3x3 matrix of real entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

/// Eigendecomposition of a symmetric 3x3 matrix.
///
/// Eigenvalues are ascending; the eigenvectors form a right-handed
/// orthonormal frame. Signs are fixed deterministically: the
/// largest-magnitude component of `e1` and `e2` is positive, and
/// `e3 = e1 x e2`.
#[derive(Debug, Clone, Copy)]
pub struct SymEig3 {
    pub eigenvalues: [f64; 3],
    pub eigenvectors: [Vec3; 3],
}

impl Mat3 {
    pub const fn zero() -> Self {
        Mat3([[0.0; 3]; 3])
    }

    pub const fn identity() -> Self {
        Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub const fn diag(a: f64, b: f64, c: f64) -> Self {
        Mat3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// Dyadic (outer) product `a (x) b`.
    pub fn outer(a: &Vec3, b: &Vec3) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i] * b[j];
            }
        }
        Mat3(m)
    }

    pub fn transpose(&self) -> Self {
        let a = &self.0;
        Mat3([
            [a[0][0], a[1][0], a[2][0]],
            [a[0][1], a[1][1], a[2][1]],
            [a[0][2], a[1][2], a[2][2]],
        ])
    }

    pub fn mul(&self, rhs: &Mat3) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.0[i][0] * rhs.0[0][j]
                    + self.0[i][1] * rhs.0[1][j]
                    + self.0[i][2] * rhs.0[2][j];
            }
        }
        Mat3(m)
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        [dot(&self.0[0], v), dot(&self.0[1], v), dot(&self.0[2], v)]
    }

    pub fn add(&self, rhs: &Mat3) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        Mat3(m)
    }

    pub fn sub(&self, rhs: &Mat3) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        Mat3(m)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut m = self.0;
        for row in &mut m {
            for v in row {
                *v *= s;
            }
        }
        Mat3(m)
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Largest absolute entry (max norm).
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn norm_fro(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Cofactor-expansion determinant.
    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Matrix of signed 2x2 minors (untransposed), so `A cof(A)^T = det(A) 1`.
    pub fn cof(&self) -> Self {
        let a = &self.0;
        Mat3([
            [
                a[1][1] * a[2][2] - a[1][2] * a[2][1],
                a[1][2] * a[2][0] - a[1][0] * a[2][2],
                a[1][0] * a[2][1] - a[1][1] * a[2][0],
            ],
            [
                a[0][2] * a[2][1] - a[0][1] * a[2][2],
                a[0][0] * a[2][2] - a[0][2] * a[2][0],
                a[0][1] * a[2][0] - a[0][0] * a[2][1],
            ],
            [
                a[0][1] * a[1][2] - a[0][2] * a[1][1],
                a[0][2] * a[1][0] - a[0][0] * a[1][2],
                a[0][0] * a[1][1] - a[0][1] * a[1][0],
            ],
        ])
    }

    /// Adjugate inverse. Errors when `|det| <= 1e-14`.
    pub fn inv(&self) -> Result<Self> {
        let det = self.det();
        if det.abs() <= 1e-14 {
            return Err(Error::Singular { det });
        }
        Ok(self.cof().transpose().scaled(1.0 / det))
    }

    /// Frobenius inner product: sum of elementwise products.
    pub fn frob_inner(&self, rhs: &Mat3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * rhs.0[i][j];
            }
        }
        s
    }

    /// Largest absolute difference between `A` and `A^T`.
    pub fn asymmetry(&self) -> f64 {
        let a = &self.0;
        (a[0][1] - a[1][0])
            .abs()
            .max((a[0][2] - a[2][0]).abs())
            .max((a[1][2] - a[2][1]).abs())
    }

    /// Eigendecomposition by cyclic Jacobi iteration.
    ///
    /// The input must be symmetric within 1e-10 in max norm; it is
    /// symmetrized before the sweeps. Rotations are applied until the
    /// off-diagonal norm falls below 1e-14 relative to the matrix scale.
    pub fn sym_eig(&self) -> Result<SymEig3> {
        let asymmetry = self.asymmetry();
        if asymmetry > 1e-10 {
            return Err(Error::NotSymmetric { asymmetry });
        }
        let mut a = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = 0.5 * (self.0[i][j] + self.0[j][i]);
            }
        }
        let scale_ref = Mat3(a).norm_fro().max(f64::MIN_POSITIVE);

        // v holds the accumulated rotations; its columns are eigenvectors.
        let mut v = [[0.0; 3]; 3];
        for (i, row) in v.iter_mut().enumerate() {
            row[i] = 1.0;
        }

        for _sweep in 0..64 {
            let off = (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt();
            if off <= 1e-14 * scale_ref {
                break;
            }
            for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    1.0 / (2.0 * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                let r = 3 - p - q; // the index not being rotated
                let arp = a[r][p];
                let arq = a[r][q];
                a[r][p] = c * arp - s * arq;
                a[p][r] = a[r][p];
                a[r][q] = s * arp + c * arq;
                a[q][r] = a[r][q];

                for row in &mut v {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }

        // Sort ascending; stable on ties.
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
        let eigenvalues = [
            a[order[0]][order[0]],
            a[order[1]][order[1]],
            a[order[2]][order[2]],
        ];
        let mut vecs: [Vec3; 3] = [[0.0; 3]; 3];
        for (k, &col) in order.iter().enumerate() {
            vecs[k] = [v[0][col], v[1][col], v[2][col]];
        }
        // Sign convention: largest-magnitude component of e1, e2 positive;
        // e3 completes a right-handed frame.
        for vec in vecs.iter_mut().take(2) {
            let mut kmax = 0;
            for k in 1..3 {
                if vec[k].abs() > vec[kmax].abs() {
                    kmax = k;
                }
            }
            if vec[kmax] < 0.0 {
                *vec = scale(vec, -1.0);
            }
        }
        vecs[2] = cross(&vecs[0], &vecs[1]);

        Ok(SymEig3 {
            eigenvalues,
            eigenvectors: vecs,
        })
    }
}

/// Singular values (descending) of the tall matrix whose rows are the
/// given vectors, by one-sided Jacobi orthogonalization of its three
/// columns.
///
/// Unlike an eigendecomposition of the Gram matrix, this keeps absolute
/// accuracy ~1e-16 for singular values near zero, which is what the
/// coplanarity certificates need.
pub fn stacked_singular_values(rows: &[Vec3]) -> [f64; 3] {
    let m = rows.len();
    let mut cols: [Vec<f64>; 3] = [
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| r[1]).collect(),
        rows.iter().map(|r| r[2]).collect(),
    ];
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..3 {
            for q in p + 1..3 {
                let app: f64 = cols[p].iter().map(|x| x * x).sum();
                let aqq: f64 = cols[q].iter().map(|x| x * x).sum();
                let apq: f64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x * y).sum();
                off = off.max(apq.abs());
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    1.0 / (2.0 * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..m {
                    let xp = cols[p][i];
                    let xq = cols[q][i];
                    cols[p][i] = c * xp - s * xq;
                    cols[q][i] = s * xp + c * xq;
                }
            }
        }
        if off <= 1e-300 {
            break;
        }
    }
    let mut sv = [0.0f64; 3];
    for (k, col) in cols.iter().enumerate() {
        sv[k] = col.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn det_identity_and_diag() {
        approx(Mat3::identity().det(), 1.0, 0.0);
        approx(Mat3::diag(2.0, 3.0, 4.0).det(), 24.0, 0.0);
    }

    #[test]
    fn det_matches_triple_product() {
        let a = Mat3([[0.3, -1.2, 0.7], [2.1, 0.4, -0.9], [-0.5, 1.6, 1.1]]);
        let c0 = [a.0[0][0], a.0[1][0], a.0[2][0]];
        let c1 = [a.0[0][1], a.0[1][1], a.0[2][1]];
        let c2 = [a.0[0][2], a.0[1][2], a.0[2][2]];
        let triple = dot(&c0, &cross(&c1, &c2));
        approx(a.det(), triple, 1e-13);
    }

    #[test]
    fn cof_identity_and_diag() {
        assert_eq!(Mat3::identity().cof(), Mat3::identity());
        assert_eq!(Mat3::diag(2.0, 3.0, 4.0).cof(), Mat3::diag(12.0, 8.0, 6.0));
    }

    #[test]
    fn inv_diag_and_singular() {
        assert_eq!(Mat3::identity().inv().unwrap(), Mat3::identity());
        let inv = Mat3::diag(2.0, 4.0, 5.0).inv().unwrap();
        assert_eq!(inv, Mat3::diag(0.5, 0.25, 0.2));
        // rank-2 matrix
        let s = Mat3([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 0.0]]);
        assert!(matches!(s.inv(), Err(Error::Singular { .. })));
    }

    #[test]
    fn sym_eig_identity_and_diag() {
        let e = Mat3::identity().sym_eig().unwrap();
        for v in e.eigenvalues {
            approx(v, 1.0, 1e-15);
        }
        let e = Mat3::diag(4.0, 1.0, 9.0).sym_eig().unwrap();
        approx(e.eigenvalues[0], 1.0, 1e-14);
        approx(e.eigenvalues[1], 4.0, 1e-14);
        approx(e.eigenvalues[2], 9.0, 1e-14);
        // axis of the smallest eigenvalue is y
        approx(e.eigenvectors[0][1].abs(), 1.0, 1e-14);
    }

    #[test]
    fn sym_eig_rejects_asymmetric() {
        let m = Mat3([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(m.sym_eig(), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn stacked_singular_values_match_known_cases() {
        // rows spanning the xy-plane only: sigma3 is exactly zero
        let rows = [
            [1.0, 0.0, 0.0],
            [0.0, 2.0, 0.0],
            [3.0, 4.0, 0.0],
            [-1.0, 1.0, 0.0],
        ];
        let sv = stacked_singular_values(&rows);
        assert!(sv[2].abs() <= 1e-15, "sigma3 = {:e}", sv[2]);
        // orthonormal rows: all singular values 1
        let rows = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for s in stacked_singular_values(&rows) {
            assert!((s - 1.0).abs() <= 1e-14);
        }
        // invariant: sum of squares equals the Frobenius norm squared
        let rows = [
            [0.3, -1.2, 0.7],
            [2.1, 0.4, -0.9],
            [-0.5, 1.6, 1.1],
            [0.2, 0.1, -0.4],
        ];
        let sv = stacked_singular_values(&rows);
        let fro2: f64 = rows.iter().flatten().map(|x| x * x).sum();
        assert!((sv.iter().map(|s| s * s).sum::<f64>() - fro2).abs() <= 1e-12);
        assert!(sv[0] >= sv[1] && sv[1] >= sv[2]);
    }

    #[test]
    fn frob_inner_basics() {
        approx(Mat3::identity().frob_inner(&Mat3::identity()), 3.0, 0.0);
        let a = Mat3([[0.3, -1.2, 0.7], [2.1, 0.4, -0.9], [-0.5, 1.6, 1.1]]);
        assert!(a.frob_inner(&a) >= 0.0);
        approx(a.frob_inner(&a), a.norm_fro().powi(2), 1e-12);
    }

    #[test]
    fn frob_inner_cof_is_det_derivative() {
        let a = Mat3([[1.1, -0.3, 0.2], [0.4, 0.9, -0.6], [-0.2, 0.5, 1.3]]);
        let b = Mat3([[0.7, 0.1, -0.4], [-0.9, 0.2, 0.8], [0.3, -0.5, 0.6]]);
        let h = 1e-5;
        let fd = (a.add(&b.scaled(h)).det() - a.sub(&b.scaled(h)).det()) / (2.0 * h);
        approx(a.cof().frob_inner(&b), fd, 1e-8);
    }

    #[test]
    fn det_expansion_decays_quadratically() {
        let a = Mat3([[1.1, -0.3, 0.2], [0.4, 0.9, -0.6], [-0.2, 0.5, 1.3]]);
        let b = Mat3([[0.7, 0.1, -0.4], [-0.9, 0.2, 0.8], [0.3, -0.5, 0.6]]);
        let err = |h: f64| (a.add(&b.scaled(h)).det() - a.det() - h * a.cof().frob_inner(&b)).abs();
        let e5 = err(1e-5);
        let e6 = err(1e-6);
        let ratio = e5 / e6;
        assert!(
            (30.0..300.0).contains(&ratio),
            "expected ~100x decay, got {ratio} ({e5} vs {e6})"
        );
    }

    fn arb_mat3() -> impl Strategy<Value = Mat3> {
        prop::array::uniform3(prop::array::uniform3(-2.0f64..2.0)).prop_map(Mat3)
    }

    fn arb_sym3() -> impl Strategy<Value = Mat3> {
        arb_mat3().prop_map(|m| {
            let t = m.transpose();
            m.add(&t).scaled(0.5)
        })
    }

    proptest! {
        #[test]
        fn prop_cof_identity(a in arb_mat3()) {
            let lhs = a.mul(&a.cof().transpose());
            let rhs = Mat3::identity().scaled(a.det());
            prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-12);
        }

        #[test]
        fn prop_eig_trace_det_reconstruction(s in arb_sym3()) {
            let e = s.sym_eig().unwrap();
            let [l1, l2, l3] = e.eigenvalues;
            prop_assert!(l1 <= l2 && l2 <= l3);
            prop_assert!((l1 + l2 + l3 - s.trace()).abs() <= 1e-12);
            prop_assert!((l1 * l2 * l3 - s.det()).abs() <= 1e-12);
            // orthonormality and handedness
            for i in 0..3 {
                for j in 0..3 {
                    let d = dot(&e.eigenvectors[i], &e.eigenvectors[j]);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((d - expect).abs() <= 1e-12);
                }
            }
            let handed = dot(&cross(&e.eigenvectors[0], &e.eigenvectors[1]), &e.eigenvectors[2]);
            prop_assert!((handed - 1.0).abs() <= 1e-12);
            // spectral reconstruction
            let mut recon = Mat3::zero();
            for k in 0..3 {
                recon = recon.add(&Mat3::outer(&e.eigenvectors[k], &e.eigenvectors[k]).scaled(e.eigenvalues[k]));
            }
            prop_assert!(recon.sub(&s).max_abs() <= 1e-11 * s.norm_fro().max(1.0));
            // residual contract
            for k in 0..3 {
                let r = sub(&s.mul_vec(&e.eigenvectors[k]), &scale(&e.eigenvectors[k], e.eigenvalues[k]));
                prop_assert!(norm(&r) <= 1e-11 * s.norm_fro().max(1.0));
            }
        }

        #[test]
        fn prop_inv_roundtrip(a in arb_mat3()) {
            if a.det().abs() > 1e-2 {
                let inv = a.inv().unwrap();
                prop_assert!(a.mul(&inv).sub(&Mat3::identity()).max_abs() <= 1e-10);
            }
        }
    }
}
