//! Named invariant suite over an assembled crossing-twins system.
//!
//! Each check evaluates one conservation or compatibility identity and
//! reports its worst residual together with the tolerance it must meet.
//! The suite backs the CLI `check` subcommand and the acceptance tests.

use crate::crossing::ParallelogramSystem;
use crate::error::Result;
use crate::mat3::{self, Mat3};
use crate::variants::VariantSet;

/// Outcome of one invariant check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

/// Deterministic sample generator (SplitMix64) for the randomized checks.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn result(name: &'static str, max_residual: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name,
        max_residual,
        tolerance,
    }
}

/// Run the full invariant suite at the given branch-grid resolution.
pub fn run_all(
    sys: &ParallelogramSystem,
    variants: &VariantSet,
    grid_n: usize,
) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let [a, b, ap, bp] = sys.indices;
    let pairs = [
        (&sys.sol_ab, *variants.stretch(a)?, *variants.stretch(b)?),
        (
            &sys.sol_apbp,
            *variants.stretch(ap)?,
            *variants.stretch(bp)?,
        ),
        (&sys.sol_aap, *variants.stretch(a)?, *variants.stretch(ap)?),
        (&sys.sol_bbp, *variants.stretch(b)?, *variants.stretch(bp)?),
    ];

    // twinning equation residuals for all four systems
    let worst = pairs
        .iter()
        .map(|(sol, ui, uj)| sol.residual(ui, uj))
        .fold(0.0f64, f64::max);
    out.push(result("twin-residuals", worst, 1e-12));

    // volume identity U_i^-1 b . n = 0 for all four systems
    let mut worst = 0.0f64;
    for (sol, ui, _) in &pairs {
        let v = mat3::dot(&ui.inv()?.mul_vec(&sol.shear), &sol.normal);
        worst = worst.max(v.abs());
    }
    out.push(result("twin-volume-identities", worst, 1e-11));

    // U_A^-1 n_AA' . b_AB = 0
    let v = mat3::dot(
        &sys.u_a.inv()?.mul_vec(&sys.sol_aap.normal),
        &sys.sol_ab.shear,
    );
    out.push(result("compound-normal-orthogonality", v.abs(), 1e-11));

    // M_AB^-1 b* . n_AA' = 0 along the laminate
    let mut rng = SplitMix64(42);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let lambda = rng.next_f64();
        let m_ab = sys.laminate_ab(lambda);
        let v = mat3::dot(
            &m_ab.inv()?.mul_vec(&sys.b_star(lambda)),
            &sys.sol_aap.normal,
        );
        worst = worst.max(v.abs());
    }
    out.push(result("laminate-orthogonality", worst, 1e-11));

    out.push(result(
        "parallelogram-rotation-loop",
        sys.compat_residual,
        1e-10,
    ));
    out.push(result(
        "shear-collinearity",
        sys.collinearity_residual,
        1e-11,
    ));

    // rank-one connection between the two laminates
    let u_ap = *variants.stretch(ap)?;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let lambda = rng.next_f64();
        let m_ab = sys.laminate_ab(lambda);
        let m_apbp =
            u_ap.add(&Mat3::outer(&sys.sol_apbp.shear, &sys.sol_apbp.normal).scaled(lambda));
        let lhs = sys.sol_aap.rotation.mul(&m_apbp).sub(&m_ab);
        let rhs = Mat3::outer(&sys.b_star(lambda), &sys.sol_aap.normal);
        worst = worst.max(lhs.sub(&rhs).max_abs());
    }
    out.push(result("laminate-rank-one", worst, 1e-11));

    // polynomial g versus the direct determinant on a 33x33 grid
    let mut worst = 0.0f64;
    for i in 0..=32 {
        for j in 0..=32 {
            let lambda = i as f64 / 32.0;
            let cap = j as f64 / 32.0;
            let m = sys.macroscopic(lambda, cap);
            let direct = m.transpose().mul(&m).sub(&Mat3::identity()).det();
            worst = worst.max((sys.coeffs.eval(lambda, cap) - direct).abs());
        }
    }
    out.push(result("g-oracle-equivalence", worst, 1e-10));

    // coefficients versus an exact least-squares fit of the direct
    // determinant on a 5x5 grid
    out.push(result(
        "g-coefficient-fit",
        coefficient_fit_residual(sys),
        1e-9,
    ));

    // det M = det U_A everywhere
    let mut worst = 0.0f64;
    let det_a = sys.u_a.det();
    for i in 0..=32 {
        for j in 0..=32 {
            let m = sys.macroscopic(i as f64 / 32.0, j as f64 / 32.0);
            worst = worst.max((m.det() - det_a).abs());
        }
    }
    out.push(result("volume-invariance", worst, 1e-12));

    // closed-form inverse transpose against direct inversion
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let lambda = rng.next_f64();
        let cap = rng.next_f64();
        let closed = sys.inverse_transpose_closed(lambda, cap)?;
        let direct = sys.macroscopic(lambda, cap).inv()?.transpose();
        worst = worst.max(closed.sub(&direct).max_abs());
    }
    out.push(result("inverse-transpose-closed-form", worst, 1e-10));

    // g(0, .) = g(1, .), g(., 0) = g(., 1) and the reflection symmetries
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let lambda = rng.next_f64();
        let cap = rng.next_f64();
        let c = &sys.coeffs;
        worst = worst
            .max((c.eval(0.0, cap) - c.eval(1.0, cap)).abs())
            .max((c.eval(lambda, 0.0) - c.eval(lambda, 1.0)).abs())
            .max((c.eval(lambda, cap) - c.eval(1.0 - lambda, cap)).abs())
            .max((c.eval(lambda, cap) - c.eval(lambda, 1.0 - cap)).abs());
    }
    out.push(result("g-symmetries", worst, 1e-12));

    // the four twin-plane normals span only a plane
    let sigma3 = mat3::stacked_singular_values(&[
        sys.sol_ab.normal,
        sys.sol_apbp.normal,
        sys.sol_aap.normal,
        sys.sol_bbp.normal,
    ])[2];
    out.push(result("normal-coplanarity", sigma3, 1e-10));

    // classical root: closed form versus bisection of the determinant
    if let Some(lambda_star) = sys.coeffs.classical_fraction() {
        let det_at = |lambda: f64| {
            let m = sys.laminate_ab(lambda);
            m.transpose().mul(&m).sub(&Mat3::identity()).det()
        };
        let (mut lo, mut hi) = (0.0f64, 0.5f64);
        let mut bis_err = f64::INFINITY;
        if det_at(lo) < 0.0 && det_at(hi) >= 0.0 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if det_at(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            bis_err = (lambda_star - 0.5 * (lo + hi)).abs();
        }
        out.push(result("classical-root-bisection", bis_err, 1e-10));
    }

    // branch certificates at the configured grid
    let scan = sys.solve_branches(grid_n)?;
    let mut worst_g = 0.0f64;
    let mut worst_mid = 0.0f64;
    let mut worst_margin = 0.0f64;
    let mut worst_sym = 0.0f64;
    let mut by_index: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for p in &scan.points {
        worst_g = worst_g.max(p.g_residual);
        worst_mid = worst_mid.max((p.mid_eig - 1.0).abs());
        worst_margin = worst_margin.max(-p.mid_eig_check);
        by_index.entry(p.grid_index).or_default().push(p.lambda);
    }
    for lambdas in by_index.values() {
        if lambdas.len() == 2 {
            worst_sym = worst_sym.max((lambdas[0] + lambdas[1] - 1.0).abs());
        }
    }
    out.push(result("branch-g-residual", worst_g, 1e-10));
    out.push(result("branch-middle-eigenvalue", worst_mid, 1e-8));
    out.push(result(
        "branch-ordering-margin",
        worst_margin.max(0.0),
        1e-12,
    ));
    out.push(result("branch-symmetry", worst_sym, 1e-12));

    Ok(out)
}

/// Fit a0..a3 to the direct determinant sampled on a 5x5 grid by normal
/// equations; returns the worst coefficient deviation.
fn coefficient_fit_residual(sys: &ParallelogramSystem) -> f64 {
    let mut ata = [[0.0f64; 4]; 4];
    let mut atb = [0.0f64; 4];
    for i in 0..5 {
        for j in 0..5 {
            let lambda = i as f64 / 4.0;
            let cap = j as f64 / 4.0;
            let u = lambda * lambda - lambda;
            let v = cap * cap - cap;
            let row = [1.0, u, v, u * v];
            let m = sys.macroscopic(lambda, cap);
            let y = m.transpose().mul(&m).sub(&Mat3::identity()).det();
            for r in 0..4 {
                for c in 0..4 {
                    ata[r][c] += row[r] * row[c];
                }
                atb[r] += row[r] * y;
            }
        }
    }
    let fitted = solve4(&mut ata, &mut atb);
    let coeffs = [sys.coeffs.a0, sys.coeffs.a1, sys.coeffs.a2, sys.coeffs.a3];
    fitted
        .iter()
        .zip(coeffs.iter())
        .map(|(f, c)| (f - c).abs())
        .fold(0.0f64, f64::max)
}

/// Gaussian elimination with partial pivoting for the 4x4 normal equations.
#[allow(clippy::needless_range_loop)]
fn solve4(a: &mut [[f64; 4]; 4], b: &mut [f64; 4]) -> [f64; 4] {
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 4];
    for row in (0..4).rev() {
        let mut s = b[row];
        for k in row + 1..4 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}
