//! Scenario execution: expand the declared conditions and sectors into a flat
//! check plan, evaluate every check at every sampled point, and aggregate into
//! a report.
//!
//! Per-point evaluation is pure, so the point loop runs through rayon when the
//! `parallel` feature is on (the default) and falls back to a plain sequential
//! map otherwise. Both paths aggregate in point-index order and produce
//! identical reports.

use crate::chart::Frame;
use crate::fields::{
    bianchi_residual, build_dirac_from_maxwell, build_dirac_from_products, build_f,
    build_full_metric, build_h, build_rs, build_scalar, dirac_residual, einstein_vacuum_residual,
    f_from_potential, f_regularity, h_divergence, h_trace, kg_residual,
    linearized_einstein_residual, maxwell_divergence_residual, rs_residuals, vector_potential,
    EinsteinResidual, FieldStrength, SymTensor,
};
use crate::jet::Jet;
use crate::prepotential::{
    assess, check_commutation, check_dalembert, check_disjoint_supports,
    check_gradient_orthogonality, check_hessian_conditions, check_independence,
    INDEPENDENCE_FLOOR, SCALE_FLOOR,
};
use crate::report::{CheckRecord, PointRow, Report};
use crate::sampling::{sample_scenario, SampleError};
use crate::scenario::{Condition, Scenario, Sector};
use std::time::Instant;

/// Finite stand-in for non-finite residuals in serialized reports. Any
/// occurrence marks the run as anomalous; it never passes.
pub const SENTINEL: f64 = 9.9e307;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Sampling(#[from] SampleError),
}

/// What to compute at each point for one check row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Dalembert(usize),
    Orthogonality(usize, usize),
    Hessian(usize, usize),
    Commutation(usize, usize),
    Independence,
    Disjoint(usize, usize),
    KleinGordon,
    DiracProducts,
    DiracMaxwell,
    MaxwellDivergence,
    Bianchi,
    FRegularity,
    PotentialCurl,
    RsDirac,
    RsGammaTrace,
    RsDivergence,
    HTrace,
    HDivergence,
    LinearizedEinstein,
    FullEinstein,
    NonflatCertificate,
}

#[derive(Debug, Clone)]
pub struct CheckSpec {
    pub id: String,
    pub sector: String,
    pub kind: CheckKind,
    /// Integer percentage of evaluated points that must pass individually
    /// for the record to pass: 100 for equation checks, lower for witness
    /// checks that only need to hold at most points.
    pub pass_percent: u32,
}

fn spec(id: impl Into<String>, sector: &str, kind: CheckKind) -> CheckSpec {
    CheckSpec {
        id: id.into(),
        sector: sector.to_string(),
        kind,
        pass_percent: 100,
    }
}

/// Expand a scenario's conditions and sectors into the flat, ordered check
/// plan. The order is deterministic: conditions first (in declared order,
/// expanded over pre-potentials/pairs), then sector rows in declared order.
pub fn check_plan(s: &Scenario) -> Vec<CheckSpec> {
    let mut plan = Vec::new();
    let name = |i: usize| s.prepotentials[i].name.clone();
    for cond in &s.conditions {
        match cond {
            Condition::Dalembert => {
                for (i, p) in s.prepotentials.iter().enumerate() {
                    plan.push(spec(
                        format!("dalembert:{}", p.name),
                        "conditions",
                        CheckKind::Dalembert(i),
                    ));
                }
            }
            Condition::GradientOrthogonality => {
                for &(i, j) in &s.pairs {
                    plan.push(spec(
                        format!("gradient_orthogonality:{}:{}", name(i), name(j)),
                        "conditions",
                        CheckKind::Orthogonality(i, j),
                    ));
                }
            }
            Condition::Hessian => {
                for &(i, j) in &s.pairs {
                    plan.push(spec(
                        format!("hessian:{}:{}", name(i), name(j)),
                        "conditions",
                        CheckKind::Hessian(i, j),
                    ));
                }
            }
            Condition::Commutation => {
                for &(i, j) in &s.pairs {
                    plan.push(spec(
                        format!("commutation:{}:{}", name(i), name(j)),
                        "conditions",
                        CheckKind::Commutation(i, j),
                    ));
                }
            }
            Condition::Independence => {
                plan.push(spec("independence", "conditions", CheckKind::Independence));
            }
            Condition::DisjointSupports => {
                for &(i, j) in &s.pairs {
                    plan.push(spec(
                        format!("disjoint_supports:{}:{}", name(i), name(j)),
                        "conditions",
                        CheckKind::Disjoint(i, j),
                    ));
                }
            }
        }
    }
    for sector in &s.sectors {
        let sn = sector.name();
        match sector {
            Sector::KleinGordon => plan.push(spec("klein_gordon", sn, CheckKind::KleinGordon)),
            Sector::DiracProducts => {
                plan.push(spec("dirac_products", sn, CheckKind::DiracProducts))
            }
            Sector::DiracMaxwell => plan.push(spec("dirac_maxwell", sn, CheckKind::DiracMaxwell)),
            Sector::Maxwell => {
                plan.push(spec("maxwell_divergence", sn, CheckKind::MaxwellDivergence));
                plan.push(spec("bianchi", sn, CheckKind::Bianchi));
                let mut fr = spec("f_regularity", sn, CheckKind::FRegularity);
                fr.pass_percent = 95;
                plan.push(fr);
                plan.push(spec("potential_curl", sn, CheckKind::PotentialCurl));
            }
            Sector::RaritaSchwinger => {
                plan.push(spec("rs_dirac", sn, CheckKind::RsDirac));
                plan.push(spec("rs_gamma_trace", sn, CheckKind::RsGammaTrace));
                plan.push(spec("rs_divergence", sn, CheckKind::RsDivergence));
            }
            Sector::LinearizedEinstein => {
                plan.push(spec("h_trace", sn, CheckKind::HTrace));
                plan.push(spec("h_divergence", sn, CheckKind::HDivergence));
                plan.push(spec(
                    "linearized_einstein",
                    sn,
                    CheckKind::LinearizedEinstein,
                ));
            }
            Sector::FullEinstein => {
                plan.push(spec("full_einstein", sn, CheckKind::FullEinstein));
                let mut nf = spec("nonflat_certificate", sn, CheckKind::NonflatCertificate);
                nf.pass_percent = 90;
                plan.push(nf);
            }
        }
    }
    plan
}

#[derive(Debug, Clone, Copy)]
pub struct PointOutcome {
    pub abs: f64,
    pub rel: f64,
    pub pass: bool,
}

/// Everything the plan needs at one point, built once.
struct PointData {
    frame: Frame,
    jets: Vec<Jet>,
    pair_jets: Vec<(Jet, Jet)>,
    f: Option<FieldStrength>,
    h: Option<SymTensor>,
    rs: Option<[(f64, f64); 3]>,
    full: Option<Result<EinsteinResidual, crate::jet::JetError>>,
    gauge: Option<Result<Jet, ()>>,
}

fn needs(plan: &[CheckSpec], pred: impl Fn(CheckKind) -> bool) -> bool {
    plan.iter().any(|c| pred(c.kind))
}

fn build_point_data(s: &Scenario, plan: &[CheckSpec], point: [f64; 4]) -> Option<PointData> {
    let frame = s.chart.frame(point).ok()?;
    let mut jets = Vec::with_capacity(s.prepotentials.len());
    for p in &s.prepotentials {
        jets.push(p.expr.eval_jet(point, &s.params).ok()?);
    }
    let pair_jets: Vec<(Jet, Jet)> = s.pairs.iter().map(|&(i, j)| (jets[i], jets[j])).collect();

    let f = needs(plan, |k| {
        matches!(
            k,
            CheckKind::DiracMaxwell
                | CheckKind::MaxwellDivergence
                | CheckKind::Bianchi
                | CheckKind::FRegularity
                | CheckKind::PotentialCurl
        )
    })
    .then(|| build_f(&pair_jets));

    let h = needs(plan, |k| {
        matches!(
            k,
            CheckKind::HTrace | CheckKind::HDivergence | CheckKind::LinearizedEinstein
        )
    })
    .then(|| build_h(&pair_jets));

    let rs = if needs(plan, |k| {
        matches!(
            k,
            CheckKind::RsDirac | CheckKind::RsGammaTrace | CheckKind::RsDivergence
        )
    }) {
        let block = s.rs.as_ref().expect("validated");
        let column = [
            jets[block.column[0]],
            jets[block.column[1]],
            jets[block.column[2]],
            jets[block.column[3]],
        ];
        let psi = build_rs(&jets[block.u], &column);
        Some(rs_residuals(&psi))
    } else {
        None
    };

    let full = needs(plan, |k| {
        matches!(k, CheckKind::FullEinstein | CheckKind::NonflatCertificate)
    })
    .then(|| einstein_vacuum_residual(&build_full_metric(&frame, &pair_jets)));

    let gauge = if needs(plan, |k| matches!(k, CheckKind::PotentialCurl)) {
        s.gauge
            .as_ref()
            .map(|expr| expr.eval_jet(point, &s.params).map_err(|_| ()))
    } else {
        None
    };

    Some(PointData {
        frame,
        jets,
        pair_jets,
        f,
        h,
        rs,
        full,
        gauge,
    })
}

fn evaluate_check(s: &Scenario, data: &PointData, kind: CheckKind) -> Option<PointOutcome> {
    let tol = s.tol.rel;
    let out = |r: crate::prepotential::ConditionResult| PointOutcome {
        abs: r.abs,
        rel: r.rel,
        pass: r.pass,
    };
    Some(match kind {
        CheckKind::Dalembert(i) => out(check_dalembert(&data.frame, &data.jets[i], tol)),
        CheckKind::Orthogonality(i, j) => out(check_gradient_orthogonality(
            &data.frame,
            &data.jets[i],
            &data.jets[j],
            tol,
        )),
        CheckKind::Hessian(i, j) => out(check_hessian_conditions(
            &data.frame,
            &data.jets[i],
            &data.jets[j],
            tol,
        )),
        CheckKind::Commutation(i, j) => out(check_commutation(
            &data.frame,
            &data.jets[i],
            &data.jets[j],
            tol,
        )),
        CheckKind::Independence => {
            let us = [data.jets[0], data.jets[1], data.jets[2], data.jets[3]];
            out(check_independence(&us))
        }
        CheckKind::Disjoint(i, j) => out(check_disjoint_supports(
            &s.prepotentials[i].expr,
            &s.prepotentials[j].expr,
        )),
        CheckKind::KleinGordon => {
            let phi = build_scalar(&data.pair_jets);
            let (abs, scale) = kg_residual(&phi, &data.frame);
            out(assess(abs, scale, tol))
        }
        CheckKind::DiracProducts => {
            let slots = s.dirac_column.as_ref().expect("validated");
            let products = [
                data.jets[slots[0].0] * data.jets[slots[0].1],
                data.jets[slots[1].0] * data.jets[slots[1].1],
                data.jets[slots[2].0] * data.jets[slots[2].1],
                data.jets[slots[3].0] * data.jets[slots[3].1],
            ];
            let psi = build_dirac_from_products(&products);
            let (abs, scale) = dirac_residual(&psi);
            out(assess(abs, scale, tol))
        }
        CheckKind::DiracMaxwell => {
            let psi = build_dirac_from_maxwell(data.f.as_ref().expect("plan"));
            let (abs, scale) = dirac_residual(&psi);
            out(assess(abs, scale, tol))
        }
        CheckKind::MaxwellDivergence => {
            let (abs, scale) =
                maxwell_divergence_residual(data.f.as_ref().expect("plan"), &data.frame);
            out(assess(abs, scale, tol))
        }
        CheckKind::Bianchi => {
            let (abs, scale) = bianchi_residual(data.f.as_ref().expect("plan"));
            out(assess(abs, scale, tol))
        }
        CheckKind::FRegularity => {
            let (det, scale) = f_regularity(data.f.as_ref().expect("plan"));
            let rel = if scale > SCALE_FLOOR { det / scale } else { 0.0 };
            PointOutcome {
                abs: det,
                rel,
                pass: scale > SCALE_FLOOR && det > INDEPENDENCE_FLOOR * scale,
            }
        }
        CheckKind::PotentialCurl => {
            let gauge_jet = match &data.gauge {
                Some(Ok(j)) => Some(*j),
                Some(Err(())) => return None, // gauge undefined at this point
                None => None,
            };
            let a = vector_potential(&data.pair_jets, gauge_jet.as_ref());
            let f2 = f_from_potential(&a);
            let f1 = data.f.as_ref().expect("plan");
            let mut abs = 0.0f64;
            for (p, q) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
                abs = abs.max((f1.get(p, q).value() - f2.get(p, q).value()).norm());
            }
            out(assess(abs, f1.max_value_norm(), tol))
        }
        CheckKind::RsDirac => {
            let (abs, scale) = data.rs.expect("plan")[0];
            out(assess(abs, scale, tol))
        }
        CheckKind::RsGammaTrace => {
            let (abs, scale) = data.rs.expect("plan")[1];
            out(assess(abs, scale, tol))
        }
        CheckKind::RsDivergence => {
            let (abs, scale) = data.rs.expect("plan")[2];
            out(assess(abs, scale, tol))
        }
        CheckKind::HTrace => {
            let h = data.h.as_ref().expect("plan");
            let trace = h_trace(h);
            let mut scale = 0.0f64;
            for alpha in 0..4 {
                scale = scale.max(h.get(alpha, alpha).value().norm());
            }
            out(assess(trace.value().norm(), scale, tol))
        }
        CheckKind::HDivergence => {
            let h = data.h.as_ref().expect("plan");
            let div = h_divergence(h);
            let mut abs = 0.0f64;
            let mut scale = 0.0f64;
            for (mu, jet) in div.iter().enumerate() {
                abs = abs.max(jet.value().norm());
                for alpha in 0..4 {
                    scale = scale.max(h.get(mu, alpha).derivative(alpha).value().norm());
                }
            }
            out(assess(abs, scale, tol))
        }
        CheckKind::LinearizedEinstein => {
            let (abs, scale) = linearized_einstein_residual(data.h.as_ref().expect("plan"));
            out(assess(abs, scale, tol))
        }
        CheckKind::FullEinstein => match data.full.as_ref().expect("plan") {
            Err(_) => return None, // singular metric here: skip the point
            Ok(r) => out(assess(r.ricci_abs, r.ricci_scale, s.tol.einstein)),
        },
        CheckKind::NonflatCertificate => match data.full.as_ref().expect("plan") {
            Err(_) => return None,
            Ok(r) => {
                let rel = if r.riemann_scale > SCALE_FLOOR {
                    r.riemann_max / r.riemann_scale
                } else {
                    0.0
                };
                PointOutcome {
                    abs: r.riemann_max,
                    rel,
                    pass: rel >= s.tol.nonflat_floor,
                }
            }
        },
    })
}

/// Evaluate the whole plan at one point. `None` entries are skips.
pub fn evaluate_point(
    s: &Scenario,
    plan: &[CheckSpec],
    point: [f64; 4],
) -> Vec<Option<PointOutcome>> {
    match build_point_data(s, plan, point) {
        None => vec![None; plan.len()],
        Some(data) => plan
            .iter()
            .map(|c| evaluate_check(s, &data, c.kind))
            .collect(),
    }
}

pub struct RunOutcome {
    pub report: Report,
    /// One row per (point, check), in point-major order.
    pub rows: Vec<PointRow>,
    /// True when any residual came out non-finite.
    pub anomaly: bool,
}

fn finite_or_sentinel(v: f64, anomaly: &mut bool) -> f64 {
    if v.is_finite() {
        v
    } else {
        *anomaly = true;
        SENTINEL
    }
}

fn aggregate(
    s: &Scenario,
    plan: &[CheckSpec],
    points: &[[f64; 4]],
    results: &[Vec<Option<PointOutcome>>],
    runtime_seconds: f64,
) -> RunOutcome {
    let requested = points.len();
    let mut anomaly = false;
    let mut rows = Vec::with_capacity(requested * plan.len());
    let mut checks = Vec::with_capacity(plan.len());

    for (k, cs) in plan.iter().enumerate() {
        let mut evaluated = 0usize;
        let mut passed = 0usize;
        let mut max_abs = 0.0f64;
        let mut max_rel = 0.0f64;
        let mut sum_rel = 0.0f64;
        for res in results.iter() {
            if let Some(o) = res[k] {
                let abs = finite_or_sentinel(o.abs, &mut anomaly);
                let rel = finite_or_sentinel(o.rel, &mut anomaly);
                evaluated += 1;
                passed += usize::from(o.pass);
                max_abs = max_abs.max(abs);
                max_rel = max_rel.max(rel);
                sum_rel += rel;
            }
        }
        let skipped = requested - evaluated;
        let mean_rel = if evaluated > 0 {
            finite_or_sentinel(sum_rel / evaluated as f64, &mut anomaly)
        } else {
            0.0
        };
        let pass = evaluated > 0
            && passed * 100 >= evaluated * cs.pass_percent as usize
            && skipped * 10 <= requested;
        checks.push(CheckRecord {
            id: cs.id.clone(),
            sector: cs.sector.clone(),
            points: evaluated,
            skipped,
            max_abs,
            max_rel,
            mean_rel,
            pass,
        });
    }

    for (p, res) in points.iter().zip(results.iter()) {
        for (k, cs) in plan.iter().enumerate() {
            let (abs, rel) = match res[k] {
                Some(o) => {
                    let mut dummy = false;
                    (
                        Some(finite_or_sentinel(o.abs, &mut dummy)),
                        Some(finite_or_sentinel(o.rel, &mut dummy)),
                    )
                }
                None => (None, None),
            };
            rows.push(PointRow {
                point: *p,
                check: cs.id.clone(),
                abs,
                rel,
            });
        }
    }

    let overall_pass = !checks.is_empty() && checks.iter().all(|c| c.pass) && !anomaly;
    RunOutcome {
        report: Report {
            scenario: s.name.clone(),
            seed: s.sampling.seed,
            checks,
            overall_pass,
            runtime_seconds,
        },
        rows,
        anomaly,
    }
}

fn run_with<F>(s: &Scenario, eval_all: F) -> Result<RunOutcome, RunError>
where
    F: FnOnce(&Scenario, &[CheckSpec], &[[f64; 4]]) -> Vec<Vec<Option<PointOutcome>>>,
{
    let start = Instant::now();
    let plan = check_plan(s);
    let points = sample_scenario(s)?;
    let results = eval_all(s, &plan, &points);
    let runtime = start.elapsed().as_secs_f64();
    Ok(aggregate(s, &plan, &points, &results, runtime))
}

/// Sequential point loop.
pub fn run_scenario_serial(s: &Scenario) -> Result<RunOutcome, RunError> {
    run_with(s, |s, plan, points| {
        points
            .iter()
            .map(|&p| evaluate_point(s, plan, p))
            .collect()
    })
}

/// Rayon point loop; report-identical to the serial path.
#[cfg(feature = "parallel")]
pub fn run_scenario_parallel(s: &Scenario) -> Result<RunOutcome, RunError> {
    use rayon::prelude::*;
    run_with(s, |s, plan, points| {
        points
            .par_iter()
            .map(|&p| evaluate_point(s, plan, p))
            .collect()
    })
}

/// Default entry point: parallel when the feature is on.
pub fn run_scenario(s: &Scenario) -> Result<RunOutcome, RunError> {
    #[cfg(feature = "parallel")]
    {
        run_scenario_parallel(s)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_scenario_serial(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{catalog_scenario, parse_scenario};

    fn run(name: &str) -> RunOutcome {
        let s = catalog_scenario(name).unwrap().unwrap();
        run_scenario(&s).unwrap()
    }

    #[test]
    fn maxwell_sol_passes_every_check() {
        let out = run("maxwell_sol");
        assert!(!out.anomaly);
        for c in &out.report.checks {
            assert!(
                c.pass,
                "{} failed: max_rel={} max_abs={}",
                c.id, c.max_rel, c.max_abs
            );
            assert_eq!(c.skipped, 0, "{} skipped points", c.id);
        }
        assert!(out.report.overall_pass);
        // every declared check row is present: 4 dalembert + 2x4 pair conditions
        // + independence + 5 sector rows + 3 maxwell extras + 2 linearized extras
        let ids: Vec<&str> = out.report.checks.iter().map(|c| c.id.as_str()).collect();
        for want in [
            "dalembert:u1",
            "gradient_orthogonality:u1:u2",
            "hessian:u3:u4",
            "commutation:u1:u2",
            "independence",
            "disjoint_supports:u3:u4",
            "klein_gordon",
            "dirac_products",
            "dirac_maxwell",
            "maxwell_divergence",
            "bianchi",
            "f_regularity",
            "potential_curl",
            "h_trace",
            "h_divergence",
            "linearized_einstein",
        ] {
            assert!(ids.contains(&want), "missing check row {want}");
        }
        assert_eq!(out.rows.len(), 256 * out.report.checks.len());
    }

    #[test]
    fn rs_sol_passes_and_is_nontrivial() {
        let out = run("rs_sol");
        assert!(out.report.overall_pass, "{:?}", out.report.checks);
        let ids: Vec<&str> = out.report.checks.iter().map(|c| c.id.as_str()).collect();
        assert!(ids.contains(&"rs_dirac"));
        assert!(ids.contains(&"rs_gamma_trace"));
        assert!(ids.contains(&"rs_divergence"));
    }

    #[test]
    fn tampered_scenario_fails_the_right_check() {
        let text = r#"
[scenario]
name = tampered
chart = cartesian
[prepotentials]
u1 = "sin(t + x) + 0.5*cos(t - x)"
u2 = "re((y + i*z)^2) + 0.1*y^2"
[pairs]
pair = u1, u2
[checks]
conditions = dalembert
sectors = maxwell
[sampling]
count = 64
"#;
        let s = parse_scenario(text).unwrap();
        let out = run_scenario(&s).unwrap();
        assert!(!out.report.overall_pass);
        let broken = out
            .report
            .checks
            .iter()
            .find(|c| c.id == "dalembert:u2")
            .unwrap();
        assert!(!broken.pass);
        let fine = out
            .report
            .checks
            .iter()
            .find(|c| c.id == "dalembert:u1")
            .unwrap();
        assert!(fine.pass);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn serial_and_parallel_reports_agree() {
        let s = catalog_scenario("maxwell_sol").unwrap().unwrap();
        let a = run_scenario_serial(&s).unwrap();
        let b = run_scenario_parallel(&s).unwrap();
        assert_eq!(a.report.checks.len(), b.report.checks.len());
        for (x, y) in a.report.checks.iter().zip(b.report.checks.iter()) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.max_abs.to_bits(), y.max_abs.to_bits());
            assert_eq!(x.max_rel.to_bits(), y.max_rel.to_bits());
            assert_eq!(x.mean_rel.to_bits(), y.mean_rel.to_bits());
            assert_eq!(x.pass, y.pass);
        }
    }
}
