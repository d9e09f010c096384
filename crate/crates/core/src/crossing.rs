//! Assembly and analysis of the crossing-twins (parallelogram) microstructure.
//!
//! Four variants participate: a Type-II pair (A, B), their compound
//! counterparts (A', B') which also form a Type-II pair, and the two
//! compound systems (A, A') and (B, B') sharing a twin-plane normal.
//! The macroscopic gradient of the assembly is
//!
//! ```text
//! M(lambda, Lambda) = U_A + lambda b_AB (x) n_AB + Lambda b* (x) n_AA'
//! b* = b_AA' - lambda eta b_AB
//! ```
//!
//! where lambda is the Type-II laminate fraction (shared by both
//! laminates), Lambda the compound fraction, and eta the collinearity
//! factor relating the compound shears. An interface with austenite
//! exists where g(lambda, Lambda) = det(M^T M - 1) vanishes; g collapses
//! to the four-coefficient polynomial
//!
//! ```text
//! g = a0 + a1 (lambda^2 - lambda) + a2 (Lambda^2 - Lambda)
//!        + a3 (lambda^2 - lambda)(Lambda^2 - Lambda)
//! ```
//!
//! which is solved in closed form per Lambda.

use crate::error::{Error, Result};
use crate::interface::{rank_one_to_identity, unit_interval_roots};
use crate::mat3::{self, Mat3, Vec3};
use crate::twinning::{solve_pair_classified, type_ii_solution, TwinSolution, TwinType};
use crate::variants::{PointGroup, VariantSet};

/// Coefficients of the reduced polynomial form of det(M^T M - 1).
#[derive(Debug, Clone, Copy)]
pub struct GCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// Solvability flags for the branch equation.
#[derive(Debug, Clone, Copy)]
pub struct ConditionReport {
    /// a1/a3 outside [0, 1/4]: the branch denominator never vanishes.
    pub denominator_nonvanishing: bool,
    /// a0 a3 != a1 a2: the generic (non-degenerate) case.
    pub nondegenerate: bool,
    /// (4 a0 - a2)/(4 a1 - a3) in [0, 1/4]: branches span all of [0, 1].
    pub branches_meet: bool,
    /// That ratio differs from 1/4: the two branches stay distinct.
    pub branches_distinct: bool,
    /// a0 a3 = a1 a2: branches are the constant lines lambda*, 1 - lambda*.
    pub degenerate: bool,
    pub denominator_ratio: f64,
    pub meeting_ratio: f64,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.denominator_nonvanishing
            && self.nondegenerate
            && self.branches_meet
            && self.branches_distinct
    }
}

impl GCoefficients {
    pub fn eval(&self, lambda: f64, capital_lambda: f64) -> f64 {
        let u = lambda * lambda - lambda;
        let v = capital_lambda * capital_lambda - capital_lambda;
        self.a0 + self.a1 * u + self.a2 * v + self.a3 * u * v
    }

    /// The degenerate case a0 a3 = a1 a2 (relative tolerance 1e-12).
    pub fn is_degenerate(&self) -> bool {
        let p = self.a0 * self.a3;
        let q = self.a1 * self.a2;
        (p - q).abs() <= 1e-12 * p.abs().max(q.abs())
    }

    pub fn conditions(&self) -> ConditionReport {
        let denominator_ratio = self.a1 / self.a3;
        let meeting_ratio = (4.0 * self.a0 - self.a2) / (4.0 * self.a1 - self.a3);
        let degenerate = self.is_degenerate();
        ConditionReport {
            denominator_nonvanishing: !(0.0..=0.25).contains(&denominator_ratio),
            nondegenerate: !degenerate,
            branches_meet: (0.0..=0.25).contains(&meeting_ratio),
            branches_distinct: (meeting_ratio - 0.25).abs() > 1e-14,
            degenerate,
            denominator_ratio,
            meeting_ratio,
        }
    }

    /// The classical volume fraction lambda* in (0, 1/2] solving
    /// lambda^2 - lambda = -a0/a1, when it exists.
    pub fn classical_fraction(&self) -> Option<f64> {
        if self.a1 == 0.0 {
            return None;
        }
        let (low, _) = unit_interval_roots(-self.a0 / self.a1)?;
        (low > 0.0 && low <= 0.5).then_some(low)
    }

    /// Both lambda roots (low, high) at the given compound fraction, or
    /// `None` when no interior root exists there.
    ///
    /// In the degenerate case the branches are the constant lines
    /// lambda = lambda* and lambda = 1 - lambda* for every Lambda.
    pub fn roots_at(&self, capital_lambda: f64) -> Result<Option<(f64, f64)>> {
        if self.is_degenerate() {
            return Ok(self.classical_fraction().map(|l| (l, 1.0 - l)));
        }
        let s = capital_lambda * capital_lambda - capital_lambda;
        let den = self.a1 + self.a3 * s;
        if den.abs() < 1e-13 {
            return Err(Error::DenominatorVanishes { capital_lambda });
        }
        Ok(unit_interval_roots(-(self.a0 + self.a2 * s) / den))
    }

    /// Scan a uniform grid of `grid_n` compound fractions over [0, 1].
    pub fn scan(&self, grid_n: usize) -> Result<RootScan> {
        if grid_n < 2 {
            return Err(Error::BadParams {
                name: "grid_n",
                value: grid_n as f64,
            });
        }
        let mut points = Vec::with_capacity(2 * grid_n);
        let mut missing = Vec::new();
        let step = (grid_n - 1) as f64;
        for i in 0..grid_n {
            let capital_lambda = i as f64 / step;
            match self.roots_at(capital_lambda)? {
                Some((low, high)) => {
                    for (lambda, root) in [(low, BranchRoot::Low), (high, BranchRoot::High)] {
                        points.push(RootPoint {
                            grid_index: i,
                            capital_lambda,
                            lambda,
                            branch: BranchId {
                                root,
                                upper_side: capital_lambda > 0.5,
                            },
                            g_residual: self.eval(lambda, capital_lambda).abs(),
                        });
                    }
                }
                None => missing.push(i),
            }
        }
        Ok(RootScan {
            grid_n,
            points,
            missing,
        })
    }
}

/// Which of the two lambda roots a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchRoot {
    Low,
    High,
}

/// Branch label: root plus the Lambda side the local branch emanates from.
/// The four labels are `low-0`, `low-1`, `high-0`, `high-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchId {
    pub root: BranchRoot,
    /// True for points with Lambda > 1/2.
    pub upper_side: bool,
}

impl BranchId {
    pub fn label(&self) -> &'static str {
        match (self.root, self.upper_side) {
            (BranchRoot::Low, false) => "low-0",
            (BranchRoot::Low, true) => "low-1",
            (BranchRoot::High, false) => "high-0",
            (BranchRoot::High, true) => "high-1",
        }
    }
}

/// One solved root of g = 0 on the Lambda grid (coefficient level).
#[derive(Debug, Clone, Copy)]
pub struct RootPoint {
    pub grid_index: usize,
    pub capital_lambda: f64,
    pub lambda: f64,
    pub branch: BranchId,
    pub g_residual: f64,
}

/// Result of a coefficient-level branch scan.
#[derive(Debug, Clone)]
pub struct RootScan {
    pub grid_n: usize,
    pub points: Vec<RootPoint>,
    /// Grid indices where no interior root exists, ascending.
    pub missing: Vec<usize>,
}

fn coverage_intervals(grid_n: usize, missing: &[usize]) -> Vec<[f64; 2]> {
    let step = (grid_n - 1) as f64;
    let mut out = Vec::new();
    let mut miss = missing.iter().peekable();
    let mut run_start: Option<usize> = None;
    for i in 0..grid_n {
        let is_missing = miss.peek() == Some(&&i);
        if is_missing {
            miss.next();
            if let Some(s) = run_start.take() {
                out.push([s as f64 / step, (i - 1) as f64 / step]);
            }
        } else if run_start.is_none() {
            run_start = Some(i);
        }
    }
    if let Some(s) = run_start {
        out.push([s as f64 / step, 1.0]);
    }
    out
}

impl RootScan {
    pub fn coverage(&self) -> Vec<[f64; 2]> {
        coverage_intervals(self.grid_n, &self.missing)
    }

    pub fn full_coverage(&self) -> bool {
        self.missing.is_empty()
    }
}

/// A branch point with its middle-eigenvalue certificates.
#[derive(Debug, Clone, Copy)]
pub struct BranchPoint {
    pub grid_index: usize,
    pub capital_lambda: f64,
    pub lambda: f64,
    pub branch: BranchId,
    /// |g(lambda, Lambda)| at the solved root.
    pub g_residual: f64,
    /// Middle eigenvalue of M^T M; 1 within 1e-8 on a valid point.
    pub mid_eig: f64,
    /// Ordering margin: trace/determinant expression that is nonnegative
    /// exactly when 1 is the *middle* eigenvalue of M^T M.
    pub mid_eig_check: f64,
}

/// System-level branch scan: roots plus eigenvalue certificates.
#[derive(Debug, Clone)]
pub struct BranchScan {
    pub grid_n: usize,
    pub points: Vec<BranchPoint>,
    pub missing: Vec<usize>,
}

impl BranchScan {
    pub fn coverage(&self) -> Vec<[f64; 2]> {
        coverage_intervals(self.grid_n, &self.missing)
    }

    pub fn full_coverage(&self) -> bool {
        self.missing.is_empty()
    }
}

/// One habit-normal curve point: the two habit normals at a branch point.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub point: BranchPoint,
    pub m_plus: Vec3,
    pub m_minus: Vec3,
}

/// A maximal Lambda-contiguous run of curve points on one root branch.
///
/// Within a curve the normals are kept continuous: the first point is
/// gauge-fixed (largest-magnitude component positive), every later point
/// picks the assignment and signs closest to its predecessor. Endpoints
/// at Lambda = 0 or 1 coincide with classical-interface normals.
#[derive(Debug, Clone)]
pub struct NormalCurve {
    pub root: BranchRoot,
    pub points: Vec<CurvePoint>,
}

/// The validated four-variant crossing-twins assembly.
#[derive(Debug, Clone)]
pub struct ParallelogramSystem {
    /// (A, B, A', B') as 1-based variant indices.
    pub indices: [u8; 4],
    pub u_a: Mat3,
    pub sol_ab: TwinSolution,
    pub sol_apbp: TwinSolution,
    pub sol_aap: TwinSolution,
    pub sol_bbp: TwinSolution,
    pub eta: f64,
    pub coeffs: GCoefficients,
    /// Frobenius norm of R_AB R_BB' - R_AA' R_A'B'.
    pub compat_residual: f64,
    /// Max-norm residual of eta b_AB = b_AA' - R_AB b_BB'.
    pub collinearity_residual: f64,
}

/// Coefficients of g from the assembled twin data.
pub fn g_coefficients(
    u_a: &Mat3,
    sol_ab: &TwinSolution,
    sol_aap: &TwinSolution,
    eta: f64,
) -> Result<GCoefficients> {
    let u_a_inv = u_a.inv()?;
    let a0_mat = u_a.mul(u_a).sub(&Mat3::identity());
    let cof0 = a0_mat.cof();
    let a0 = a0_mat.det();
    let a1 = -2.0 * mat3::dot(&sol_ab.shear, &u_a.mul_vec(&cof0.mul_vec(&sol_ab.normal)));
    let a2 = -2.0 * mat3::dot(&sol_aap.shear, &u_a.mul_vec(&cof0.mul_vec(&sol_aap.normal)));

    let a1_mat = Mat3::outer(&u_a.mul_vec(&sol_ab.shear), &sol_ab.normal).add(&Mat3::outer(
        &sol_ab.normal,
        &u_a_inv.mul_vec(&sol_ab.shear),
    ));
    let a2_mat = Mat3::outer(&u_a.mul_vec(&sol_aap.shear), &sol_aap.normal).add(&Mat3::outer(
        &sol_aap.normal,
        &u_a_inv.mul_vec(&sol_aap.shear),
    ));
    let coupling = mat3::dot(&u_a_inv.mul_vec(&sol_ab.normal), &sol_aap.shear) + eta;
    let a3_mat = Mat3::outer(&sol_aap.normal, &u_a_inv.mul_vec(&sol_ab.shear))
        .scaled(-coupling)
        .sub(&Mat3::outer(&u_a.mul_vec(&sol_ab.shear), &sol_aap.normal).scaled(eta));

    let mid = a0_mat.add(&a2_mat.scaled(0.5));
    let a3 = 4.0 * mid.cof().frob_inner(&a1_mat.add(&a3_mat.scaled(0.5))) + 4.0 * a1;

    Ok(GCoefficients { a0, a1, a2, a3 })
}

/// Assemble and validate the crossing-twins system for the 1-based
/// variant roles (A, B, A', B').
pub fn build_system(
    a: u8,
    b: u8,
    ap: u8,
    bp: u8,
    variants: &VariantSet,
    group: &PointGroup,
) -> Result<ParallelogramSystem> {
    let indices = [a, b, ap, bp];
    for (k, &i) in indices.iter().enumerate() {
        if indices[..k].contains(&i) {
            return Err(Error::BadVariantIndex { index: i });
        }
    }
    let u_a = *variants.stretch(a)?;

    let sol_ab = type_ii_solution(a, b, variants, group)?;
    let sol_apbp = type_ii_solution(ap, bp, variants, group)?;

    let (pair_aap, types_a) = solve_pair_classified(a, ap, variants, group)?;
    if types_a != [TwinType::Compound, TwinType::Compound] {
        return Err(Error::NotCompound { i: a, j: ap });
    }
    let (pair_bbp, types_b) = solve_pair_classified(b, bp, variants, group)?;
    if types_b != [TwinType::Compound, TwinType::Compound] {
        return Err(Error::NotCompound { i: b, j: bp });
    }

    // All shared-normal combinations, scored by the rotation-loop residual.
    let mut best: Option<(TwinSolution, TwinSolution, f64)> = None;
    for sa in &pair_aap.solutions {
        for sb in &pair_bbp.solutions {
            if !mat3::sub(&sa.normal, &sb.normal)
                .iter()
                .all(|c| c.abs() <= 1e-12)
            {
                continue;
            }
            let mut matched = *sb;
            matched.normal = sa.normal;
            let residual = sol_ab
                .rotation
                .mul(&matched.rotation)
                .sub(&sa.rotation.mul(&sol_apbp.rotation))
                .norm_fro();
            if best.as_ref().is_none_or(|(_, _, r)| residual < *r) {
                best = Some((*sa, matched, residual));
            }
        }
    }
    let (sol_aap, sol_bbp, compat_residual) = best.ok_or(Error::NoSharedNormal)?;
    if compat_residual > 1e-10 {
        return Err(Error::Incompatible {
            residual: compat_residual,
        });
    }

    let eta =
        2.0 * mat3::dot(&sol_aap.shear, &sol_ab.shear) / mat3::dot(&sol_ab.shear, &sol_ab.shear);
    let collinearity_residual = mat3::sub(
        &mat3::scale(&sol_ab.shear, eta),
        &mat3::sub(&sol_aap.shear, &sol_ab.rotation.mul_vec(&sol_bbp.shear)),
    )
    .iter()
    .fold(0.0f64, |acc, c| acc.max(c.abs()));
    if collinearity_residual > 1e-11 {
        return Err(Error::Incompatible {
            residual: collinearity_residual,
        });
    }

    // The four twin-plane normals must span only a plane.
    let sigma3 = mat3::stacked_singular_values(&[
        sol_ab.normal,
        sol_apbp.normal,
        sol_aap.normal,
        sol_bbp.normal,
    ])[2];
    if sigma3 > 1e-10 {
        return Err(Error::Incompatible { residual: sigma3 });
    }

    let coeffs = g_coefficients(&u_a, &sol_ab, &sol_aap, eta)?;
    Ok(ParallelogramSystem {
        indices,
        u_a,
        sol_ab,
        sol_apbp,
        sol_aap,
        sol_bbp,
        eta,
        coeffs,
        compat_residual,
        collinearity_residual,
    })
}

impl ParallelogramSystem {
    /// The lambda-dependent compound shear b* = b_AA' - lambda eta b_AB.
    pub fn b_star(&self, lambda: f64) -> Vec3 {
        mat3::sub(
            &self.sol_aap.shear,
            &mat3::scale(&self.sol_ab.shear, lambda * self.eta),
        )
    }

    /// Macroscopic gradient of the crossing structure.
    pub fn macroscopic(&self, lambda: f64, capital_lambda: f64) -> Mat3 {
        self.laminate_ab(lambda)
            .add(&Mat3::outer(&self.b_star(lambda), &self.sol_aap.normal).scaled(capital_lambda))
    }

    /// Macroscopic gradient M_AB of the unprimed Type-II laminate alone.
    pub fn laminate_ab(&self, lambda: f64) -> Mat3 {
        self.u_a
            .add(&Mat3::outer(&self.sol_ab.shear, &self.sol_ab.normal).scaled(lambda))
    }

    /// Closed-form inverse transpose of the macroscopic gradient, built
    /// from rank-one corrections of U_A^-1 (no matrix inversion).
    pub fn inverse_transpose_closed(&self, lambda: f64, capital_lambda: f64) -> Result<Mat3> {
        let ui = self.u_a.inv()?;
        let n_ab = ui.mul_vec(&self.sol_ab.normal);
        let b_ab = ui.mul_vec(&self.sol_ab.shear);
        let n_aap = ui.mul_vec(&self.sol_aap.normal);
        let b_aap = ui.mul_vec(&self.sol_aap.shear);
        let coupling = mat3::dot(&n_ab, &self.sol_aap.shear) + self.eta;
        Ok(ui
            .sub(&Mat3::outer(&n_ab, &b_ab).scaled(lambda))
            .sub(&Mat3::outer(&n_aap, &b_aap).scaled(capital_lambda))
            .add(&Mat3::outer(&n_aap, &b_ab).scaled(capital_lambda * lambda * coupling)))
    }

    /// Margin certifying that the unit eigenvalue of M^T M is the middle
    /// one: equals tr(M^T M) - det(U_A)^2 - 2 expressed through the twin
    /// data, nonnegative exactly when l1 <= 1 <= l3.
    pub fn middle_eig_condition(&self, lambda: f64, capital_lambda: f64) -> f64 {
        let u2 = self.u_a.mul(&self.u_a);
        let b_ab2 = mat3::dot(&self.sol_ab.shear, &self.sol_ab.shear);
        let b_aap2 = mat3::dot(&self.sol_aap.shear, &self.sol_aap.shear);
        let u = lambda * lambda - lambda;
        let v = capital_lambda * capital_lambda - capital_lambda;
        u2.trace() - u2.det() - 2.0 + u * b_ab2 + v * b_aap2 + u * v * self.eta * self.eta * b_ab2
    }

    /// Solve the branch equation on a uniform Lambda grid and attach the
    /// middle-eigenvalue certificates to every root.
    pub fn solve_branches(&self, grid_n: usize) -> Result<BranchScan> {
        let scan = self.coeffs.scan(grid_n)?;
        let mut points = Vec::with_capacity(scan.points.len());
        for p in &scan.points {
            let m = self.macroscopic(p.lambda, p.capital_lambda);
            let eig = m.transpose().mul(&m).sym_eig()?;
            points.push(BranchPoint {
                grid_index: p.grid_index,
                capital_lambda: p.capital_lambda,
                lambda: p.lambda,
                branch: p.branch,
                g_residual: p.g_residual,
                mid_eig: eig.eigenvalues[1],
                mid_eig_check: self.middle_eig_condition(p.lambda, p.capital_lambda),
            });
        }
        Ok(BranchScan {
            grid_n: scan.grid_n,
            points,
            missing: scan.missing,
        })
    }

    /// Habit-normal curves over the solved branches, one per maximal
    /// contiguous run of each root branch, with continuous sign and
    /// family assignment along each curve.
    pub fn normal_curves(&self, scan: &BranchScan, tol_mid: f64) -> Result<Vec<NormalCurve>> {
        let mut curves = Vec::new();
        for root in [BranchRoot::Low, BranchRoot::High] {
            let mut current: Option<NormalCurve> = None;
            for p in scan.points.iter().filter(|p| p.branch.root == root) {
                let contiguous = current
                    .as_ref()
                    .and_then(|c| c.points.last())
                    .is_some_and(|last| last.point.grid_index + 1 == p.grid_index);
                if !contiguous {
                    if let Some(c) = current.take() {
                        curves.push(c);
                    }
                    current = Some(NormalCurve {
                        root,
                        points: Vec::new(),
                    });
                }
                let curve = current.as_mut().unwrap();

                let m = self.macroscopic(p.lambda, p.capital_lambda);
                let sols = rank_one_to_identity(&m, tol_mid)?;
                if sols.len() != 2 {
                    return Err(Error::NoInterface {
                        lambda: p.lambda,
                        capital_lambda: p.capital_lambda,
                    });
                }
                let (m_plus, m_minus) = match curve.points.last() {
                    None => (sols[0].normal, sols[1].normal),
                    Some(prev) => chain_assign(
                        &prev.m_plus,
                        &prev.m_minus,
                        &sols[0].normal,
                        &sols[1].normal,
                    ),
                };
                curve.points.push(CurvePoint {
                    point: *p,
                    m_plus,
                    m_minus,
                });
            }
            if let Some(c) = current.take() {
                curves.push(c);
            }
        }
        Ok(curves)
    }
}

/// Assign two candidate normals to the (plus, minus) families of the
/// previous curve point, choosing the pairing and signs that keep the
/// curve continuous.
fn chain_assign(prev_plus: &Vec3, prev_minus: &Vec3, c1: &Vec3, c2: &Vec3) -> (Vec3, Vec3) {
    let direct = mat3::dot(prev_plus, c1).abs() + mat3::dot(prev_minus, c2).abs();
    let swapped = mat3::dot(prev_plus, c2).abs() + mat3::dot(prev_minus, c1).abs();
    let (mut p, mut q) = if direct >= swapped {
        (*c1, *c2)
    } else {
        (*c2, *c1)
    };
    if mat3::dot(&p, prev_plus) < 0.0 {
        p = mat3::scale(&p, -1.0);
    }
    if mat3::dot(&q, prev_minus) < 0.0 {
        q = mat3::scale(&q, -1.0);
    }
    (p, q)
}
