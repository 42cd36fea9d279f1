//! The `oracle` subcommand: independently re-derives every jet coefficient of
//! every pre-potential from central finite differences with one Richardson
//! step, and compares against the jet evaluation.
//!
//! The step size is chosen per derivative order: third derivatives divide by
//! h³, so they need a larger step before roundoff dominates. On charts with a
//! radial coordinate the step along that axis additionally scales with the
//! radius: pre-potentials there behave like powers of r, whose derivatives
//! steepen without bound toward the axis, so a fixed step would lose all
//! accuracy near the inner edge of the sampling box.

use num_complex::Complex64;
use prepotentials::jet::{finite_difference_oracle_aniso, MultiIndex, N_COEFFS};
use prepotentials::sampling::sample_points;
use prepotentials::scenario::load_scenario;
use std::path::Path;

/// Relative thresholds by derivative degree (0..=2, 3).
pub const ORACLE_TOL_LOW: f64 = 1e-7;
pub const ORACLE_TOL_HIGH: f64 = 1e-5;

fn step_for_degree(deg: u8) -> f64 {
    if deg <= 2 {
        1e-2
    } else {
        2e-2
    }
}

fn steps_at(point: [f64; 4], radial_axis: Option<usize>, deg: u8) -> [f64; 4] {
    let base = step_for_degree(deg);
    let mut steps = [base; 4];
    if let Some(axis) = radial_axis {
        steps[axis] = base * point[axis].abs().min(1.0);
    }
    steps
}

pub struct OracleOutcome {
    pub max_rel_low: f64,
    pub max_rel_high: f64,
    pub compared: usize,
    pub skipped: usize,
    pub pass: bool,
    pub anomaly: bool,
}

/// Compare jet coefficients of `expr` against the finite-difference oracle at
/// `points`. Oracle samples that leave the expression's domain are skipped.
/// `radial_axis` names the chart's radial coordinate, if any; the oracle step
/// along it shrinks with the radius.
pub fn compare_expr(
    expr: &prepotentials::expr::Expr,
    params: &std::collections::HashMap<String, f64>,
    points: &[[f64; 4]],
    radial_axis: Option<usize>,
) -> OracleOutcome {
    let mut max_rel_low = 0.0f64;
    let mut max_rel_high = 0.0f64;
    let mut compared = 0usize;
    let mut skipped = 0usize;
    let mut anomaly = false;
    for &p in points {
        let jet = match expr.eval_jet(p, params) {
            Ok(j) => j,
            Err(_) => {
                skipped += N_COEFFS;
                continue;
            }
        };
        if !jet.is_finite() {
            anomaly = true;
            continue;
        }
        let f = |q: [f64; 4]| -> Complex64 {
            expr.eval_value(q, params)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        };
        for flat in 0..N_COEFFS {
            let m = MultiIndex::from_flat(flat);
            let want = finite_difference_oracle_aniso(f, p, m, steps_at(p, radial_axis, m.degree()));
            if !want.re.is_finite() || !want.im.is_finite() {
                // stencil stepped outside the expression's domain
                skipped += 1;
                continue;
            }
            let got = jet.extract(m);
            let err = (got - want).norm();
            let scale = got.norm().max(want.norm()).max(1.0);
            let rel = err / scale;
            compared += 1;
            if m.degree() <= 2 {
                max_rel_low = max_rel_low.max(rel);
            } else {
                max_rel_high = max_rel_high.max(rel);
            }
        }
    }
    let pass = !anomaly
        && compared > 0
        && max_rel_low <= ORACLE_TOL_LOW
        && max_rel_high <= ORACLE_TOL_HIGH;
    OracleOutcome {
        max_rel_low,
        max_rel_high,
        compared,
        skipped,
        pass,
        anomaly,
    }
}

pub fn cmd_oracle(path: &Path, count: usize) -> u8 {
    let s = match load_scenario(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return crate::EXIT_CONFIG;
        }
    };
    if count == 0 {
        eprintln!("error: --count must be >= 1");
        return crate::EXIT_CONFIG;
    }
    let mut sampling = s.sampling.clone();
    sampling.count = count;
    let points = match sample_points(&s.chart, &sampling, &s.params) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return crate::EXIT_CONFIG;
        }
    };
    let mut code = crate::EXIT_PASS;
    for p in &s.prepotentials {
        let out = compare_expr(&p.expr, &s.params, &points, s.chart.radial_axis);
        println!(
            "oracle {}: {} (deg<=2 max_rel {:.3e}, deg 3 max_rel {:.3e}, {} compared, {} skipped)",
            p.name,
            if out.pass { "PASS" } else { "FAIL" },
            out.max_rel_low,
            out.max_rel_high,
            out.compared,
            out.skipped,
        );
        if out.anomaly {
            code = code.max(crate::EXIT_ANOMALY);
        } else if !out.pass {
            code = code.max(crate::EXIT_CHECK_FAILED);
        }
    }
    code
}
