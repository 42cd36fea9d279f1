//! Pre-potentials and their admissibility conditions.
//!
//! A pre-potential is a scalar solving the base-metric wave equation; pairs
//! of them must additionally satisfy gradient orthogonality, the
//! Hessian-gradient conditions (both orders), and commutation of the raised
//! gradient vector fields. Collections of four may be checked for functional
//! independence, and pairs for syntactically disjoint coordinate supports.
//!
//! Every numeric condition reports an absolute residual together with the
//! largest magnitude among terms entering the cancellation, so tolerances are
//! dimensionless and survive amplitude rescaling.

// Tensor contractions read as indexed sums; iterator rewrites obscure them.
#![allow(clippy::needless_range_loop)]

use crate::chart::Frame;
use crate::expr::Expr;
use crate::jet::Jet;
use num_complex::Complex64;

/// Below this scale the identity is judged absolutely instead of relatively.
pub const SCALE_FLOOR: f64 = 1e-30;
/// Absolute tolerance applied in the degenerate-scale regime.
pub const ABSOLUTE_TOL: f64 = 1e-12;
/// Nondegeneracy floor for determinant-style checks.
pub const INDEPENDENCE_FLOOR: f64 = 1e-8;

/// A named pre-potential bound to a chart's coordinates.
#[derive(Debug, Clone)]
pub struct Prepotential {
    pub name: String,
    pub expr: Expr,
}

/// Outcome of one condition at one point.
#[derive(Debug, Clone, Copy)]
pub struct ConditionResult {
    pub abs: f64,
    pub scale: f64,
    pub rel: f64,
    pub pass: bool,
}

/// Standard residual-vs-scale assessment with the degenerate-scale fallback.
pub fn assess(abs: f64, scale: f64, tol: f64) -> ConditionResult {
    if !abs.is_finite() || !scale.is_finite() {
        return ConditionResult {
            abs,
            scale,
            rel: f64::MAX,
            pass: false,
        };
    }
    if scale > SCALE_FLOOR {
        let rel = abs / scale;
        ConditionResult {
            abs,
            scale,
            rel,
            pass: rel <= tol,
        }
    } else {
        let pass = abs <= ABSOLUTE_TOL;
        ConditionResult {
            abs,
            scale,
            rel: if pass { 0.0 } else { abs / SCALE_FLOOR },
            pass,
        }
    }
}

/// `□u = 0` — residual is the wave-operator value, scale the largest
/// inverse-metric-weighted second-derivative term `|ĝ^{αβ} u_{,αβ}|`. (The
/// divergence summands themselves are useless as a scale: for profiles like
/// `ln r` the flux is constant and every summand is roundoff-sized.)
pub fn check_dalembert(frame: &Frame, u: &Jet, tol: f64) -> ConditionResult {
    let terms = frame.wave_terms(u);
    let mut total = Complex64::new(0.0, 0.0);
    for t in terms.iter() {
        total += t.value();
    }
    let mut scale = 0.0f64;
    for alpha in 0..4 {
        for beta in 0..4 {
            scale = scale.max((frame.ginv_values[alpha][beta] * u.hess(alpha, beta)).norm());
        }
    }
    assess(total.norm(), scale, tol)
}

/// `ĝ^{αβ} u_{,α} v_{,β} = 0`.
pub fn check_gradient_orthogonality(frame: &Frame, u: &Jet, v: &Jet, tol: f64) -> ConditionResult {
    let mut total = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for alpha in 0..4 {
        for beta in 0..4 {
            let term = frame.ginv_values[alpha][beta] * u.grad(alpha) * v.grad(beta);
            total += term;
            scale = scale.max(term.norm());
        }
    }
    assess(total.norm(), scale, tol)
}

/// `Hess(u)^α{}_β grad(v)^β = 0` and the swapped order; indices raised with
/// the base metric's value part.
pub fn check_hessian_conditions(frame: &Frame, u: &Jet, v: &Jet, tol: f64) -> ConditionResult {
    let mut abs = 0.0f64;
    let mut scale = 0.0f64;
    for (a, b) in [(u, v), (v, u)] {
        for alpha in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for lam in 0..4 {
                for beta in 0..4 {
                    for kap in 0..4 {
                        let term = frame.ginv_values[alpha][lam]
                            * a.hess(lam, beta)
                            * frame.ginv_values[beta][kap]
                            * b.grad(kap);
                        acc += term;
                        scale = scale.max(term.norm());
                    }
                }
            }
            abs = abs.max(acc.norm());
        }
    }
    assess(abs, scale, tol)
}

/// Commutation of the raised gradient fields:
/// `v^{(1)β} ∂_β v^{(2)α} − v^{(2)β} ∂_β v^{(1)α} = 0` with
/// `v^{(μ)α} = ĝ^{αβ} u^{(μ)}_{,β}` built as jets (metric derivatives count).
pub fn check_commutation(frame: &Frame, u: &Jet, v: &Jet, tol: f64) -> ConditionResult {
    let v1 = frame.raised_grad(u);
    let v2 = frame.raised_grad(v);
    let mut abs = 0.0f64;
    let mut scale = 0.0f64;
    for alpha in 0..4 {
        let mut acc = Complex64::new(0.0, 0.0);
        for beta in 0..4 {
            let t1 = v1[beta].value() * v2[alpha].derivative(beta).value();
            let t2 = v2[beta].value() * v1[alpha].derivative(beta).value();
            acc += t1 - t2;
            scale = scale.max(t1.norm()).max(t2.norm());
        }
        abs = abs.max(acc.norm());
    }
    assess(abs, scale, tol)
}

/// Functional independence of exactly four pre-potentials: the Jacobian
/// determinant must exceed the independence floor times the product of row
/// norms. This check is inverted: large is good.
pub fn check_independence(us: &[Jet; 4]) -> ConditionResult {
    let mut jac = [[Complex64::new(0.0, 0.0); 4]; 4];
    let mut scale = 1.0f64;
    for (i, u) in us.iter().enumerate() {
        let mut row_norm_sq = 0.0f64;
        for beta in 0..4 {
            jac[i][beta] = u.grad(beta);
            row_norm_sq += u.grad(beta).norm_sqr();
        }
        scale *= row_norm_sq.sqrt();
    }
    let det = det4(&jac).norm();
    let rel = if scale > SCALE_FLOOR {
        det / scale
    } else {
        0.0
    };
    ConditionResult {
        abs: det,
        scale,
        rel,
        pass: scale > SCALE_FLOOR && det > INDEPENDENCE_FLOOR * scale,
    }
}

/// Syntactic disjointness of coordinate supports: the two free-coordinate
/// sets must not intersect and must both be non-empty. The reported residual
/// counts violations (overlapping coordinates, plus one per empty support).
pub fn check_disjoint_supports(a: &Expr, b: &Expr) -> ConditionResult {
    let sa = a.free_coordinates();
    let sb = b.free_coordinates();
    let overlap = sa.intersection(&sb).count();
    let empties = usize::from(sa.is_empty()) + usize::from(sb.is_empty());
    let violations = (overlap + empties) as f64;
    ConditionResult {
        abs: violations,
        scale: 1.0,
        rel: violations,
        pass: violations == 0.0,
    }
}

/// Determinant of a 4×4 complex matrix by elimination with partial pivoting.
pub fn det4(m: &[[Complex64; 4]; 4]) -> Complex64 {
    let mut a = *m;
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&p, &q| a[p][col].norm().total_cmp(&a[q][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for j in col..4 {
                let sub = f * a[col][j];
                a[row][j] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::chart_by_name;
    use std::collections::HashMap;

    fn jet_on(chart: &str, text: &str, point: [f64; 4]) -> (Frame, Jet) {
        let chart = chart_by_name(chart).unwrap();
        let coords = chart.coords().to_vec();
        let frame = chart.frame(point).unwrap();
        let jet = Expr::parse(text, &coords, &[])
            .unwrap()
            .eval_jet(point, &HashMap::new())
            .unwrap();
        (frame, jet)
    }

    const TOL: f64 = 1e-9;

    #[test]
    fn dalembert_examples() {
        let (f, u) = jet_on("cartesian", "t + x", [0.2, 0.4, -0.1, 0.8]);
        assert!(check_dalembert(&f, &u, TOL).pass);
        let (f, u) = jet_on("cylindrical", "ln(r)", [0.0, 1.3, 0.2, 0.0]);
        assert!(check_dalembert(&f, &u, TOL).pass);
        let (f, u) = jet_on("cartesian", "t^2", [0.2, 0.4, -0.1, 0.8]);
        let r = check_dalembert(&f, &u, TOL);
        assert!(!r.pass);
        assert!((r.abs - 2.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonality_examples() {
        let p = [0.3, -0.4, 0.9, 0.1];
        let (f, u) = jet_on("cartesian", "t + x", p);
        let (_, v) = jet_on("cartesian", "y", p);
        assert!(check_gradient_orthogonality(&f, &u, &v, TOL).pass);
        let (f, t1) = jet_on("cartesian", "t", p);
        let r = check_gradient_orthogonality(&f, &t1, &t1, TOL);
        assert!(!r.pass);
        assert!((r.abs - 1.0).abs() < 1e-12); // η⁰⁰·1·1
    }

    #[test]
    fn hessian_examples() {
        let p = [0.3, -0.4, 0.9, 0.1];
        let (f, u) = jet_on("cartesian", "t + x", p);
        let (_, v) = jet_on("cartesian", "y", p);
        assert!(check_hessian_conditions(&f, &u, &v, TOL).pass);
        // (t², y) passes hessian but fails dalembert — conditions independent
        let (f, u) = jet_on("cartesian", "t^2", p);
        let (_, v) = jet_on("cartesian", "y", p);
        assert!(check_hessian_conditions(&f, &u, &v, TOL).pass);
        assert!(!check_dalembert(&f, &u, TOL).pass);
        // (t·y, t): Hess(t·y)·grad(t) has a −1 component
        let (f, u) = jet_on("cartesian", "t*y", p);
        let (_, v) = jet_on("cartesian", "t", p);
        let r = check_hessian_conditions(&f, &u, &v, TOL);
        assert!(!r.pass);
        assert!((r.abs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn commutation_examples() {
        let p = [0.7, -0.2, 0.4, 0.6];
        let (f, u) = jet_on("cartesian", "t + x", p);
        let (_, v) = jet_on("cartesian", "y", p);
        assert!(check_commutation(&f, &u, &v, TOL).pass);
        // (t², t·x): commutator components (2x, 2t, 0, 0)
        let (f, u) = jet_on("cartesian", "t^2", p);
        let (_, v) = jet_on("cartesian", "t*x", p);
        let r = check_commutation(&f, &u, &v, TOL);
        assert!(!r.pass);
        let want = (2.0 * p[0]).abs().max((2.0 * p[1]).abs());
        assert!((r.abs - want).abs() < 1e-12, "abs {} want {}", r.abs, want);
    }

    #[test]
    fn independence_examples() {
        let p = [0.3, -0.4, 0.9, 0.1];
        let mk = |text: &str| jet_on("cartesian", text, p).1;
        let good = [mk("t"), mk("x"), mk("y"), mk("z")];
        let r = check_independence(&good);
        assert!(r.pass);
        assert!((r.abs - 1.0).abs() < 1e-12);
        let bad = [mk("t"), mk("x"), mk("y"), mk("x + y")];
        assert!(!check_independence(&bad).pass);
    }

    #[test]
    fn disjoint_support_examples() {
        let coords: Vec<String> = ["t", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let e = |s: &str| Expr::parse(s, &coords, &[]).unwrap();
        assert!(check_disjoint_supports(&e("sin(t+x)"), &e("y*z")).pass);
        let r = check_disjoint_supports(&e("t*x"), &e("x + z"));
        assert!(!r.pass);
        assert_eq!(r.abs, 1.0);
        assert!(!check_disjoint_supports(&e("3.5"), &e("y")).pass);
    }

    #[test]
    fn conditions_invariant_under_constant_shift() {
        let p = [0.51, -0.23, 0.67, 0.05];
        let (f, u) = jet_on("cartesian", "sin(t+x) + 0.5*cos(t-x)", p);
        let (_, v) = jet_on("cartesian", "re((y + i*z)^2)", p);
        let (_, u_shift) = jet_on("cartesian", "sin(t+x) + 0.5*cos(t-x) + 7", p);
        let r1 = check_gradient_orthogonality(&f, &u, &v, TOL);
        let r2 = check_gradient_orthogonality(&f, &u_shift, &v, TOL);
        assert!((r1.abs - r2.abs).abs() <= 4.0 * f64::EPSILON * (1.0 + r1.abs));
        let c1 = check_commutation(&f, &u, &v, TOL);
        let c2 = check_commutation(&f, &u_shift, &v, TOL);
        assert!((c1.abs - c2.abs).abs() <= 4.0 * f64::EPSILON * (1.0 + c1.abs));
    }

    #[test]
    fn degenerate_scale_falls_back_to_absolute() {
        let r = assess(1e-13, 0.0, 1e-9);
        assert!(r.pass);
        assert_eq!(r.rel, 0.0);
        let r = assess(1e-6, 0.0, 1e-9);
        assert!(!r.pass);
    }

    #[test]
    fn det4_known_values() {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Complex64::new((i + 1) as f64, 0.0);
        }
        assert!((det4(&m) - Complex64::new(24.0, 0.0)).norm() < 1e-12);
        // swap two rows: sign flips
        m.swap(0, 1);
        assert!((det4(&m) + Complex64::new(24.0, 0.0)).norm() < 1e-12);
        // singular
        let m = [[Complex64::new(1.0, 0.0); 4]; 4];
        assert!(det4(&m).norm() < 1e-12);
    }
}
