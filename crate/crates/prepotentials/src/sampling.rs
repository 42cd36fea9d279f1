//! Deterministic rejection sampling of evaluation points.
//!
//! Points are drawn coordinate-by-coordinate, uniformly over the scenario box,
//! from a ChaCha8 stream seeded with the scenario seed. A point is rejected
//! when the chart's own exclusion predicate or the scenario's optional
//! `exclusion` expression evaluates below zero there. Identical seed and box
//! therefore yield an identical point list on every platform.

use crate::chart::Chart;
use crate::scenario::{Sampling, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[derive(Debug, thiserror::Error)]
pub enum SampleError {
    /// The rejection loop exhausted its draw budget (100x the requested
    /// count) without producing enough admissible points. Almost always a
    /// box/exclusion mismatch in the scenario, so it is a configuration
    /// error rather than a numeric one.
    #[error(
        "sampling budget exhausted: {accepted}/{requested} points after {drawn} draws; \
         the box is likely inside the excluded region"
    )]
    BudgetExhausted {
        requested: usize,
        accepted: usize,
        drawn: usize,
    },
}

/// Draw `sampling.count` admissible points for `chart`.
pub fn sample_points(
    chart: &Chart,
    sampling: &Sampling,
    params: &HashMap<String, f64>,
) -> Result<Vec<[f64; 4]>, SampleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let mut points = Vec::with_capacity(sampling.count);
    let budget = sampling.count.saturating_mul(100);
    let mut drawn = 0usize;
    while points.len() < sampling.count {
        if drawn >= budget {
            return Err(SampleError::BudgetExhausted {
                requested: sampling.count,
                accepted: points.len(),
                drawn,
            });
        }
        drawn += 1;
        let mut p = [0.0f64; 4];
        for (axis, slot) in p.iter_mut().enumerate() {
            let [lo, hi] = sampling.boxes[axis];
            *slot = lo + (hi - lo) * rng.gen::<f64>();
        }
        if chart.excludes(p) {
            continue;
        }
        if let Some(excl) = &sampling.exclusion {
            match excl.eval_value(p, params) {
                Ok(v) if v.re >= 0.0 => {}
                _ => continue,
            }
        }
        points.push(p);
    }
    Ok(points)
}

/// Convenience wrapper taking the whole scenario.
pub fn sample_scenario(s: &Scenario) -> Result<Vec<[f64; 4]>, SampleError> {
    sample_points(&s.chart, &s.sampling, &s.params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::chart_by_name;
    use crate::scenario::Sampling;

    fn plain_sampling(count: usize, seed: u64, boxes: [[f64; 2]; 4]) -> Sampling {
        Sampling {
            count,
            seed,
            boxes,
            exclusion: None,
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let chart = chart_by_name("cartesian").unwrap();
        let s = plain_sampling(64, 7, [[-1.0, 1.0]; 4]);
        let a = sample_points(&chart, &s, &HashMap::new()).unwrap();
        let b = sample_points(&chart, &s, &HashMap::new()).unwrap();
        assert_eq!(a, b);
        let s2 = plain_sampling(64, 8, [[-1.0, 1.0]; 4]);
        let c = sample_points(&chart, &s2, &HashMap::new()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn points_inside_box() {
        let chart = chart_by_name("cartesian").unwrap();
        let boxes = [[-1.0, 1.0], [0.5, 2.0], [-3.0, -2.0], [0.0, 0.25]];
        let s = plain_sampling(128, 42, boxes);
        for p in sample_points(&chart, &s, &HashMap::new()).unwrap() {
            for axis in 0..4 {
                assert!(p[axis] >= boxes[axis][0] && p[axis] <= boxes[axis][1]);
            }
        }
    }

    #[test]
    fn chart_exclusion_respected() {
        let chart = chart_by_name("cylindrical").unwrap();
        // Box dips below the radial floor; accepted points must all sit above it.
        let boxes = [[-1.0, 1.0], [0.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]];
        let s = plain_sampling(200, 11, boxes);
        let pts = sample_points(&chart, &s, &HashMap::new()).unwrap();
        assert_eq!(pts.len(), 200);
        for p in pts {
            assert!(p[1] >= 0.05);
        }
    }

    #[test]
    fn scenario_exclusion_respected() {
        let chart = chart_by_name("cartesian").unwrap();
        let coords = chart.coords().to_vec();
        let excl = crate::expr::Expr::parse("x", &coords, &[]).unwrap();
        let mut s = plain_sampling(100, 3, [[-1.0, 1.0]; 4]);
        s.exclusion = Some(excl);
        let pts = sample_points(&chart, &s, &HashMap::new()).unwrap();
        assert_eq!(pts.len(), 100);
        for p in pts {
            assert!(p[1] >= 0.0, "x = {} should have been rejected", p[1]);
        }
    }

    #[test]
    fn impossible_box_hits_budget() {
        let chart = chart_by_name("cylindrical").unwrap();
        // Entire radial box below the floor: every draw is rejected.
        let boxes = [[-1.0, 1.0], [0.0, 0.04], [-1.0, 1.0], [-1.0, 1.0]];
        let s = plain_sampling(10, 42, boxes);
        match sample_points(&chart, &s, &HashMap::new()) {
            Err(SampleError::BudgetExhausted {
                requested, drawn, ..
            }) => {
                assert_eq!(requested, 10);
                assert_eq!(drawn, 1000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
