//! CSV emission for branch and normal curves.
//!
//! Numbers use the shortest decimal representation that round-trips, so
//! golden files are byte-exact without precision loss. Negative zero is
//! normalized to plain zero.

use xtwin_core::crossing::{BranchPoint, BranchScan, NormalCurve};

pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

/// One row per grid Lambda; empty root fields when no real root exists.
///
/// Columns: Lambda, lambda_low, lambda_high, g_residual_low,
/// g_residual_high, mid_eig_check_low, mid_eig_check_high.
pub fn branches_csv(scan: &BranchScan) -> String {
    let mut rows: Vec<(Option<&BranchPoint>, Option<&BranchPoint>)> =
        vec![(None, None); scan.grid_n];
    for p in &scan.points {
        let slot = &mut rows[p.grid_index];
        match p.branch.root {
            xtwin_core::crossing::BranchRoot::Low => slot.0 = Some(p),
            xtwin_core::crossing::BranchRoot::High => slot.1 = Some(p),
        }
    }
    let mut out = String::from(
        "Lambda,lambda_low,lambda_high,g_residual_low,g_residual_high,mid_eig_check_low,mid_eig_check_high\n",
    );
    let step = (scan.grid_n - 1) as f64;
    for (i, (low, high)) in rows.iter().enumerate() {
        let lambda_cap = i as f64 / step;
        let field = |p: &Option<&BranchPoint>, f: fn(&BranchPoint) -> f64| match p {
            Some(p) => fmt_num(f(p)),
            None => String::new(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_num(lambda_cap),
            field(low, |p| p.lambda),
            field(high, |p| p.lambda),
            field(low, |p| p.g_residual),
            field(high, |p| p.g_residual),
            field(low, |p| p.mid_eig_check),
            field(high, |p| p.mid_eig_check),
        ));
    }
    out
}

/// Two rows per curve point, one per sign of the normal pair.
///
/// Columns: branch_id, Lambda, lambda, sign, m_x, m_y, m_z, mid_eigenvalue.
pub fn normals_csv(curves: &[NormalCurve]) -> String {
    let mut out = String::from("branch_id,Lambda,lambda,sign,m_x,m_y,m_z,mid_eigenvalue\n");
    for curve in curves {
        for cp in &curve.points {
            for (sign, m) in [("+", &cp.m_plus), ("-", &cp.m_minus)] {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    cp.point.branch.label(),
                    fmt_num(cp.point.capital_lambda),
                    fmt_num(cp.point.lambda),
                    sign,
                    fmt_num(m[0]),
                    fmt_num(m[1]),
                    fmt_num(m[2]),
                    fmt_num(cp.point.mid_eig),
                ));
            }
        }
    }
    out
}
