//! Static SVG rendering of the branch curves and the habit normals.
//!
//! Two stacked plots: lambda against Lambda for the solved branches, and
//! an orthographic two-hemisphere projection of the habit normals on the
//! unit sphere. Pure markup, fixed 4-decimal coordinates, no scripting,
//! so identical inputs render to identical bytes.

use xtwin_core::crossing::{BranchRoot, BranchScan, NormalCurve};

const WIDTH: f64 = 720.0;
const BRANCH_X0: f64 = 70.0;
const BRANCH_X1: f64 = 670.0;
const BRANCH_Y0: f64 = 420.0; // lambda = 0 (SVG y grows downward)
const BRANCH_Y1: f64 = 40.0; // lambda = 1
const SPHERE_Y: f64 = 650.0;
const SPHERE_R: f64 = 140.0;
const SPHERE_CX: [f64; 2] = [210.0, 530.0];

fn c(v: f64) -> String {
    format!("{v:.4}")
}

fn branch_color(root: BranchRoot) -> &'static str {
    match root {
        BranchRoot::Low => "#1f6fb4",
        BranchRoot::High => "#c23b22",
    }
}

fn segment_color(root: BranchRoot, plus: bool) -> &'static str {
    match (root, plus) {
        (BranchRoot::Low, true) => "#1f6fb4",
        (BranchRoot::Low, false) => "#6aa84f",
        (BranchRoot::High, true) => "#c23b22",
        (BranchRoot::High, false) => "#b08000",
    }
}

fn polyline(points: &[(f64, f64)], color: &str) -> String {
    if points.len() == 1 {
        let (x, y) = points[0];
        return format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"{color}\"/>\n",
            c(x),
            c(y)
        );
    }
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{},{}", c(*x), c(*y)))
        .collect();
    format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
        coords.join(" ")
    )
}

fn branch_plot(scan: &BranchScan, out: &mut String) {
    out.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
        c(BRANCH_X0),
        c(BRANCH_Y1),
        c(BRANCH_X1 - BRANCH_X0),
        c(BRANCH_Y0 - BRANCH_Y1)
    ));
    // ticks at multiples of 1/4 on both axes
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let x = BRANCH_X0 + f * (BRANCH_X1 - BRANCH_X0);
        let y = BRANCH_Y0 + f * (BRANCH_Y1 - BRANCH_Y0);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333\"/>\n",
            c(x),
            c(BRANCH_Y0),
            c(x),
            c(BRANCH_Y0 + 5.0)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{f}</text>\n",
            c(x),
            c(BRANCH_Y0 + 18.0)
        ));
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333\"/>\n",
            c(BRANCH_X0 - 5.0),
            c(y),
            c(BRANCH_X0),
            c(y)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">{f}</text>\n",
            c(BRANCH_X0 - 8.0),
            c(y + 4.0)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">Lambda (compound fraction)</text>\n",
        c(0.5 * (BRANCH_X0 + BRANCH_X1)),
        c(BRANCH_Y0 + 36.0)
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" writing-mode=\"tb\">lambda (Type-II fraction)</text>\n",
        c(0.5 * (BRANCH_Y0 + BRANCH_Y1))
    ));

    for root in [BranchRoot::Low, BranchRoot::High] {
        let mut run: Vec<(f64, f64)> = Vec::new();
        let mut prev_index: Option<usize> = None;
        for p in scan.points.iter().filter(|p| p.branch.root == root) {
            if prev_index.is_some_and(|i| i + 1 != p.grid_index) && !run.is_empty() {
                out.push_str(&polyline(&run, branch_color(root)));
                run.clear();
            }
            run.push((
                BRANCH_X0 + p.capital_lambda * (BRANCH_X1 - BRANCH_X0),
                BRANCH_Y0 + p.lambda * (BRANCH_Y1 - BRANCH_Y0),
            ));
            prev_index = Some(p.grid_index);
        }
        if !run.is_empty() {
            out.push_str(&polyline(&run, branch_color(root)));
        }
    }
}

fn sphere_plot(curves: &[NormalCurve], out: &mut String) {
    for (k, label) in ["+z hemisphere", "-z hemisphere"].iter().enumerate() {
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
            c(SPHERE_CX[k]),
            c(SPHERE_Y),
            c(SPHERE_R)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">{label}</text>\n",
            c(SPHERE_CX[k]),
            c(SPHERE_Y + SPHERE_R + 24.0)
        ));
    }
    for curve in curves {
        for plus in [true, false] {
            // split at hemisphere crossings so each polyline stays inside
            // one disc
            let mut run: Vec<(f64, f64)> = Vec::new();
            let mut run_hemi: Option<usize> = None;
            for cp in &curve.points {
                let m = if plus { cp.m_plus } else { cp.m_minus };
                let hemi = usize::from(m[2] < 0.0);
                if run_hemi.is_some_and(|h| h != hemi) && !run.is_empty() {
                    out.push_str(&polyline(&run, segment_color(curve.root, plus)));
                    run.clear();
                }
                run_hemi = Some(hemi);
                run.push((
                    SPHERE_CX[hemi] + m[0] * SPHERE_R,
                    SPHERE_Y - m[1] * SPHERE_R,
                ));
            }
            if !run.is_empty() {
                out.push_str(&polyline(&run, segment_color(curve.root, plus)));
            }
        }
    }
}

/// Render both plots into one standalone SVG document.
pub fn render(scan: &BranchScan, curves: &[NormalCurve]) -> String {
    let height = SPHERE_Y + SPHERE_R + 40.0;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        c(WIDTH),
        c(height),
        c(WIDTH),
        c(height)
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    branch_plot(scan, &mut out);
    sphere_plot(curves, &mut out);
    out.push_str("</svg>\n");
    out
}
