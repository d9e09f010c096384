//! Martensite variant stretch matrices and the cubic rotation group.
//!
//! A cubic-to-orthorhombic transformation produces six variants. With
//! lattice parameters (alpha, beta, gamma) and the abbreviations
//! p = (alpha + gamma)/2, q = (alpha - gamma)/2, the stretch matrices are
//! numbered as
//!
//! ```text
//! U1 = [ p  q  0 ]   U2 = [ p -q  0 ]      (beta axis along z)
//!      [ q  p  0 ]        [-q  p  0 ]
//!      [ 0  0  b ]        [ 0  0  b ]
//!
//! U3 = [ p  0  q ]   U4 = [ p  0 -q ]      (beta axis along y)
//!      [ 0  b  0 ]        [ 0  b  0 ]
//!      [ q  0  p ]        [-q  0  p ]
//!
//! U5 = [ b  0  0 ]   U6 = [ b  0  0 ]      (beta axis along x)
//!      [ 0  p  q ]        [ 0  p -q ]
//!      [ 0  q  p ]        [ 0 -q  p ]
//! ```
//!
//! Each U has eigenvalues {alpha, beta, gamma}. Under this numbering the
//! block-mates (1,2), (3,4), (5,6) are compound twins and the pair (3,6)
//! admits a Type-II twin, which is what the crossing analysis relies on.
//! The cubic-to-tetragonal case is the sub-case alpha = gamma (q = 0) and
//! needs no dedicated code path.

use crate::error::{Error, Result};
use crate::mat3::{normalize, Mat3, Vec3};

/// Dimensionless stretches of the orthorhombic cell relative to the cubic one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl LatticeParams {
    /// CuAlNi lattice parameters used throughout the tests and as CLI defaults.
    pub const CUALNI: LatticeParams = LatticeParams {
        alpha: 1.06372,
        beta: 0.91542,
        gamma: 1.02368,
    };

    /// All three stretches must be strictly positive (and finite).
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if value <= 0.0 || !value.is_finite() {
                return Err(Error::BadParams { name, value });
            }
        }
        Ok(())
    }
}

/// One martensite variant: 1-based index plus its transformation stretch.
#[derive(Debug, Clone, Copy)]
pub struct Variant {
    pub index: u8,
    pub stretch: Mat3,
}

/// The six variants of a cubic-to-orthorhombic transformation.
#[derive(Debug, Clone)]
pub struct VariantSet {
    variants: [Variant; 6],
}

impl VariantSet {
    pub fn all(&self) -> &[Variant; 6] {
        &self.variants
    }

    /// Variant by 1-based index.
    pub fn get(&self, index: u8) -> Result<&Variant> {
        if (1..=6).contains(&index) {
            Ok(&self.variants[index as usize - 1])
        } else {
            Err(Error::BadVariantIndex { index })
        }
    }

    pub fn stretch(&self, index: u8) -> Result<&Mat3> {
        Ok(&self.get(index)?.stretch)
    }
}

/// Build the six stretch matrices from lattice parameters.
pub fn make_variants(params: &LatticeParams) -> Result<VariantSet> {
    params.validate()?;
    let b = params.beta;
    let p = 0.5 * (params.alpha + params.gamma);
    let q = 0.5 * (params.alpha - params.gamma);
    let mats = [
        Mat3([[p, q, 0.0], [q, p, 0.0], [0.0, 0.0, b]]),
        Mat3([[p, -q, 0.0], [-q, p, 0.0], [0.0, 0.0, b]]),
        Mat3([[p, 0.0, q], [0.0, b, 0.0], [q, 0.0, p]]),
        Mat3([[p, 0.0, -q], [0.0, b, 0.0], [-q, 0.0, p]]),
        Mat3([[b, 0.0, 0.0], [0.0, p, q], [0.0, q, p]]),
        Mat3([[b, 0.0, 0.0], [0.0, p, -q], [0.0, -q, p]]),
    ];
    let mut variants = [Variant {
        index: 0,
        stretch: Mat3::zero(),
    }; 6];
    for (k, m) in mats.into_iter().enumerate() {
        variants[k] = Variant {
            index: k as u8 + 1,
            stretch: m,
        };
    }
    Ok(VariantSet { variants })
}

/// The 24 rotations of the cubic point group, stored as literal
/// signed-permutation matrices. Order: identity, then <100> rotations,
/// then <111>, then <110>.
const CUBIC_ROTATIONS: [[[i8; 3]; 3]; 24] = [
    // identity
    [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    // 90 deg about x
    [[1, 0, 0], [0, 0, -1], [0, 1, 0]],
    // 180 deg about x
    [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
    // 270 deg about x
    [[1, 0, 0], [0, 0, 1], [0, -1, 0]],
    // 90 deg about y
    [[0, 0, 1], [0, 1, 0], [-1, 0, 0]],
    // 180 deg about y
    [[-1, 0, 0], [0, 1, 0], [0, 0, -1]],
    // 270 deg about y
    [[0, 0, -1], [0, 1, 0], [1, 0, 0]],
    // 90 deg about z
    [[0, -1, 0], [1, 0, 0], [0, 0, 1]],
    // 180 deg about z
    [[-1, 0, 0], [0, -1, 0], [0, 0, 1]],
    // 270 deg about z
    [[0, 1, 0], [-1, 0, 0], [0, 0, 1]],
    // 120 deg about (1,1,1)
    [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
    // 240 deg about (1,1,1)
    [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
    // 120 deg about (1,1,-1)
    [[0, 1, 0], [0, 0, -1], [-1, 0, 0]],
    // 240 deg about (1,1,-1)
    [[0, 0, -1], [1, 0, 0], [0, -1, 0]],
    // 120 deg about (1,-1,1)
    [[0, -1, 0], [0, 0, -1], [1, 0, 0]],
    // 240 deg about (1,-1,1)
    [[0, 0, 1], [-1, 0, 0], [0, -1, 0]],
    // 120 deg about (-1,1,1)
    [[0, -1, 0], [0, 0, 1], [-1, 0, 0]],
    // 240 deg about (-1,1,1)
    [[0, 0, -1], [-1, 0, 0], [0, 1, 0]],
    // 180 deg about (1,1,0)
    [[0, 1, 0], [1, 0, 0], [0, 0, -1]],
    // 180 deg about (1,-1,0)
    [[0, -1, 0], [-1, 0, 0], [0, 0, -1]],
    // 180 deg about (1,0,1)
    [[0, 0, 1], [0, -1, 0], [1, 0, 0]],
    // 180 deg about (1,0,-1)
    [[0, 0, -1], [0, -1, 0], [-1, 0, 0]],
    // 180 deg about (0,1,1)
    [[-1, 0, 0], [0, 0, 1], [0, 1, 0]],
    // 180 deg about (0,1,-1)
    [[-1, 0, 0], [0, 0, -1], [0, -1, 0]],
];

/// The 24-element rotation group of the cube.
#[derive(Debug, Clone)]
pub struct PointGroup {
    rotations: Vec<Mat3>,
}

impl PointGroup {
    pub fn rotations(&self) -> &[Mat3] {
        &self.rotations
    }

    /// The nine 180-degree rotations with their (sign-normalized) unit axes.
    pub fn two_folds(&self) -> Vec<(Mat3, Vec3)> {
        self.rotations
            .iter()
            .filter(|r| (r.trace() + 1.0).abs() < 1e-12)
            .map(|r| {
                // For R = 2 e(x)e - 1, the columns of R + 1 are multiples of e.
                let s = r.add(&Mat3::identity());
                let cols: [Vec3; 3] = [
                    [s.0[0][0], s.0[1][0], s.0[2][0]],
                    [s.0[0][1], s.0[1][1], s.0[2][1]],
                    [s.0[0][2], s.0[1][2], s.0[2][2]],
                ];
                let best = cols
                    .iter()
                    .max_by(|a, b| {
                        crate::mat3::dot(a, a)
                            .partial_cmp(&crate::mat3::dot(b, b))
                            .unwrap()
                    })
                    .unwrap();
                let mut axis = normalize(best).unwrap();
                for c in axis {
                    if c.abs() > 1e-12 {
                        if c < 0.0 {
                            axis = crate::mat3::scale(&axis, -1.0);
                        }
                        break;
                    }
                }
                (*r, axis)
            })
            .collect()
    }
}

pub fn cubic_point_group() -> PointGroup {
    let rotations = CUBIC_ROTATIONS
        .iter()
        .map(|rows| {
            let mut m = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] = rows[i][j] as f64;
                }
            }
            Mat3(m)
        })
        .collect();
    PointGroup { rotations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_has_identity_and_24_elements() {
        let g = cubic_point_group();
        assert_eq!(g.rotations().len(), 24);
        assert!(g
            .rotations()
            .iter()
            .any(|r| r.sub(&Mat3::identity()).max_abs() == 0.0));
    }

    #[test]
    fn group_elements_are_rotations() {
        for r in cubic_point_group().rotations() {
            assert!(r.mul(&r.transpose()).sub(&Mat3::identity()).max_abs() <= 1e-14);
            assert!((r.det() - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn group_is_closed_under_multiplication() {
        let g = cubic_point_group();
        for a in g.rotations() {
            for b in g.rotations() {
                let p = a.mul(b);
                assert!(
                    g.rotations().iter().any(|r| r.sub(&p).max_abs() <= 1e-13),
                    "product escaped the group"
                );
            }
        }
    }

    #[test]
    fn group_contains_two_fold_about_110() {
        let e = [1.0 / 2.0f64.sqrt(), 1.0 / 2.0f64.sqrt(), 0.0];
        let found = cubic_point_group()
            .two_folds()
            .iter()
            .any(|(_, axis)| crate::mat3::sub(axis, &e).iter().all(|c| c.abs() <= 1e-12));
        assert!(found);
    }

    #[test]
    fn nine_two_folds_with_100_and_110_axes() {
        let folds = cubic_point_group().two_folds();
        assert_eq!(folds.len(), 9);
        for (_, axis) in folds {
            let sorted = {
                let mut a: Vec<f64> = axis.iter().map(|c| c.abs()).collect();
                a.sort_by(|x, y| x.partial_cmp(y).unwrap());
                a
            };
            let is_100 = (sorted[2] - 1.0).abs() < 1e-12 && sorted[1] < 1e-12;
            let h = 1.0 / 2.0f64.sqrt();
            let is_110 =
                (sorted[2] - h).abs() < 1e-12 && (sorted[1] - h).abs() < 1e-12 && sorted[0] < 1e-12;
            assert!(is_100 || is_110, "axis {axis:?}");
        }
    }

    #[test]
    fn unit_params_give_identity_variants() {
        let set = make_variants(&LatticeParams {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
        })
        .unwrap();
        for v in set.all() {
            assert!(v.stretch.sub(&Mat3::identity()).max_abs() == 0.0);
        }
    }

    #[test]
    fn rejects_nonpositive_params() {
        let bad = LatticeParams {
            alpha: 0.0,
            beta: 0.91542,
            gamma: 1.02368,
        };
        assert!(matches!(
            make_variants(&bad),
            Err(Error::BadParams { name: "alpha", .. })
        ));
    }

    #[test]
    fn cualni_variants_have_expected_eigenvalues() {
        let set = make_variants(&LatticeParams::CUALNI).unwrap();
        let mut expected = [0.91542, 1.02368, 1.06372];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for v in set.all() {
            let e = v.stretch.sym_eig().unwrap();
            for (have, want) in e.eigenvalues.iter().zip(expected.iter()) {
                assert!((have - want).abs() <= 1e-12, "variant {}", v.index);
            }
            assert!(v.stretch.asymmetry() <= 1e-14);
        }
        // all six distinct
        for i in 0..6 {
            for j in i + 1..6 {
                assert!(
                    set.all()[i].stretch.sub(&set.all()[j].stretch).max_abs() > 1e-3,
                    "variants {i} and {j} coincide"
                );
            }
        }
    }

    #[test]
    fn determinants_agree_with_eigenvalue_product() {
        let p = LatticeParams::CUALNI;
        let set = make_variants(&p).unwrap();
        let expect = p.alpha * p.beta * p.gamma;
        for v in set.all() {
            assert!((v.stretch.det() - expect).abs() <= 1e-13);
        }
        let dets: Vec<f64> = set.all().iter().map(|v| v.stretch.det()).collect();
        for i in 0..6 {
            for j in 0..6 {
                assert!((dets[i] - dets[j]).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn variant_set_closed_under_point_group_conjugation() {
        let set = make_variants(&LatticeParams::CUALNI).unwrap();
        let g = cubic_point_group();
        for r in g.rotations() {
            for v in set.all() {
                let conj = r.mul(&v.stretch).mul(&r.transpose());
                assert!(
                    set.all()
                        .iter()
                        .any(|w| conj.sub(&w.stretch).max_abs() <= 1e-13),
                    "conjugate of variant {} escaped the set",
                    v.index
                );
            }
        }
    }
}
