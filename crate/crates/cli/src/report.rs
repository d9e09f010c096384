//! Run report for the non-classical analysis: coefficients, condition
//! flags, branch coverage and worst residuals.

use crate::config::RunConfig;
use crate::jsonfmt::{self, Obj};
use xtwin_core::crossing::{BranchScan, NormalCurve, ParallelogramSystem};

#[derive(Debug, Clone)]
pub struct RunReport {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub variant_indices: [u8; 4],
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub eta: f64,
    pub lambda_star: Option<f64>,
    pub denominator_nonvanishing: bool,
    pub nondegenerate: bool,
    pub branches_meet: bool,
    pub branches_distinct: bool,
    pub ordering_certified: bool,
    pub degenerate: bool,
    pub coverage: Vec<[f64; 2]>,
    pub full_coverage: bool,
    pub branch_points: usize,
    pub normal_rows: usize,
    pub max_g_residual: f64,
    pub rotation_loop_residual: f64,
    pub shear_collinearity_residual: f64,
    pub max_mid_eig_deviation: f64,
    pub min_ordering_margin: f64,
}

impl RunReport {
    pub fn new(
        cfg: &RunConfig,
        sys: &ParallelogramSystem,
        scan: &BranchScan,
        curves: &[NormalCurve],
    ) -> Self {
        let conditions = sys.coeffs.conditions();
        let mut max_g = 0.0f64;
        let mut max_mid = 0.0f64;
        let mut min_margin = f64::INFINITY;
        for p in &scan.points {
            max_g = max_g.max(p.g_residual);
            max_mid = max_mid.max((p.mid_eig - 1.0).abs());
            min_margin = min_margin.min(p.mid_eig_check);
        }
        if scan.points.is_empty() {
            min_margin = 0.0;
        }
        RunReport {
            alpha: cfg.alpha,
            beta: cfg.beta,
            gamma: cfg.gamma,
            variant_indices: sys.indices,
            a0: sys.coeffs.a0,
            a1: sys.coeffs.a1,
            a2: sys.coeffs.a2,
            a3: sys.coeffs.a3,
            eta: sys.eta,
            lambda_star: sys.coeffs.classical_fraction(),
            denominator_nonvanishing: conditions.denominator_nonvanishing,
            nondegenerate: conditions.nondegenerate,
            branches_meet: conditions.branches_meet,
            branches_distinct: conditions.branches_distinct,
            ordering_certified: min_margin >= -1e-12,
            degenerate: conditions.degenerate,
            coverage: scan.coverage(),
            full_coverage: scan.full_coverage(),
            branch_points: scan.points.len(),
            normal_rows: curves.iter().map(|c| 2 * c.points.len()).sum(),
            max_g_residual: max_g,
            rotation_loop_residual: sys.compat_residual,
            shear_collinearity_residual: sys.collinearity_residual,
            max_mid_eig_deviation: max_mid,
            min_ordering_margin: min_margin,
        }
    }

    /// All solvability conditions, including the eigenvalue-ordering one.
    pub fn conditions_hold(&self) -> bool {
        self.denominator_nonvanishing
            && self.nondegenerate
            && self.branches_meet
            && self.branches_distinct
            && self.ordering_certified
    }

    pub fn to_json(&self) -> String {
        let coverage = jsonfmt::array(
            self.coverage
                .iter()
                .map(|iv| jsonfmt::array(iv.iter().map(|x| jsonfmt::num(*x)))),
        );
        Obj::new()
            .num("alpha", self.alpha)
            .num("beta", self.beta)
            .num("gamma", self.gamma)
            .raw(
                "variants",
                jsonfmt::array(self.variant_indices.iter().map(|i| i.to_string())),
            )
            .num("a0", self.a0)
            .num("a1", self.a1)
            .num("a2", self.a2)
            .num("a3", self.a3)
            .num("eta", self.eta)
            .raw(
                "lambda_star",
                match self.lambda_star {
                    Some(v) => jsonfmt::num(v),
                    None => "null".into(),
                },
            )
            .bool("denominator_nonvanishing", self.denominator_nonvanishing)
            .bool("nondegenerate", self.nondegenerate)
            .bool("branches_meet", self.branches_meet)
            .bool("branches_distinct", self.branches_distinct)
            .bool("ordering_certified", self.ordering_certified)
            .bool("degenerate", self.degenerate)
            .raw("coverage", coverage)
            .bool("full_coverage", self.full_coverage)
            .int("branch_points", self.branch_points)
            .int("normal_rows", self.normal_rows)
            .num("max_g_residual", self.max_g_residual)
            .num("rotation_loop_residual", self.rotation_loop_residual)
            .num(
                "shear_collinearity_residual",
                self.shear_collinearity_residual,
            )
            .num("max_mid_eig_deviation", self.max_mid_eig_deviation)
            .num("min_ordering_margin", self.min_ordering_margin)
            .build()
    }

    pub fn to_text(&self) -> String {
        let flag = |ok: bool| if ok { "ok" } else { "FAILED" };
        let coverage = if self.full_coverage {
            "full [0, 1]".to_string()
        } else {
            self.coverage
                .iter()
                .map(|iv| format!("[{}, {}]", iv[0], iv[1]))
                .collect::<Vec<_>>()
                .join(" u ")
        };
        let [a, b, ap, bp] = self.variant_indices;
        let mut s = String::new();
        s.push_str("crossing-twins interface report\n");
        s.push_str(&format!(
            "  lattice (alpha, beta, gamma) = ({}, {}, {})\n",
            self.alpha, self.beta, self.gamma
        ));
        s.push_str(&format!(
            "  variants (A, B, A', B') = ({a}, {b}, {ap}, {bp})\n"
        ));
        s.push_str(&format!(
            "  coefficients: a0 = {:e}, a1 = {:e}, a2 = {:e}, a3 = {:e}\n",
            self.a0, self.a1, self.a2, self.a3
        ));
        s.push_str(&format!("  eta = {}\n", self.eta));
        match self.lambda_star {
            Some(v) => s.push_str(&format!("  lambda_star = {v}\n")),
            None => s.push_str("  lambda_star = (none)\n"),
        }
        s.push_str(&format!(
            "  conditions: denominator {}  nondegenerate {}  branches-meet {}  distinct {}  ordering {}  degenerate: {}\n",
            flag(self.denominator_nonvanishing),
            flag(self.nondegenerate),
            flag(self.branches_meet),
            flag(self.branches_distinct),
            flag(self.ordering_certified),
            if self.degenerate { "yes" } else { "no" }
        ));
        s.push_str(&format!("  Lambda coverage: {coverage}\n"));
        s.push_str(&format!(
            "  branch points: {}   normal rows: {}\n",
            self.branch_points, self.normal_rows
        ));
        s.push_str(&format!(
            "  residuals: max |g| = {:e}, rotation loop = {:e}, shear collinearity = {:e}, max |mid eig - 1| = {:e}\n",
            self.max_g_residual,
            self.rotation_loop_residual,
            self.shear_collinearity_residual,
            self.max_mid_eig_deviation
        ));
        s
    }
}
