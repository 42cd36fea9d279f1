//! Coordinate charts, metric jets, and curvature.
//!
//! Four builtin charts are supported. Each carries coordinate names, a base
//! metric ĝ_{μν} evaluated as degree-3 jets, a default sampling box, and an
//! optional exclusion predicate (points where the predicate is negative are
//! rejected during sampling — used to keep `r` away from the axis).
//!
//! The curvature chain (`christoffel` → `riemann` → `ricci`) operates on an
//! arbitrary metric given as a 4×4 array of jets, so it serves both the base
//! charts and the perturbed metrics of the spin-2 sector.

// Tensor contractions read as indexed sums; iterator rewrites obscure them.
#![allow(clippy::needless_range_loop)]

use crate::expr::Expr;
use crate::jet::{Jet, JetError};
use num_complex::Complex64;

pub type Metric = [[Jet; 4]; 4];
pub type Gamma = [[[Jet; 4]; 4]; 4];
pub type Riemann = [[[[Jet; 4]; 4]; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChartKind {
    Cartesian,
    Cylindrical,
    Lightlike,
    LightlikeCylindrical,
}

/// A builtin coordinate chart.
#[derive(Debug, Clone)]
pub struct Chart {
    pub name: &'static str,
    coord_names: Vec<String>,
    kind: ChartKind,
    pub default_box: [[f64; 2]; 4],
    /// Points with a negative predicate value are excluded from sampling.
    pub exclusion: Option<Expr>,
    /// Axis of the radial coordinate, if the chart has one. The coordinate's
    /// singular locus sits at 0, so samples near it need special care (e.g.
    /// finite-difference steps proportional to the radius).
    pub radial_axis: Option<usize>,
}

const R_MIN: f64 = 0.05;

impl Chart {
    pub fn coords(&self) -> &[String] {
        &self.coord_names
    }

    pub fn coord_name(&self, axis: usize) -> &str {
        &self.coord_names[axis]
    }

    fn new(
        name: &'static str,
        coords: [&str; 4],
        kind: ChartKind,
        radial_axis: Option<usize>,
    ) -> Self {
        let coord_names: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let mut default_box = [[-1.0, 1.0]; 4];
        let exclusion = radial_axis.map(|axis| {
            default_box[axis] = [R_MIN, 1.0];
            let text = format!("{} - {}", coords[axis], R_MIN);
            Expr::parse(&text, &coord_names, &[]).expect("builtin exclusion parses")
        });
        Self {
            name,
            coord_names,
            kind,
            default_box,
            exclusion,
            radial_axis,
        }
    }

    /// Base metric ĝ_{μν} at `point`, as degree-3 jets.
    pub fn metric_jets(&self, point: [f64; 4]) -> Result<Metric, JetError> {
        let zero = Jet::zero();
        let one = Jet::constant_re(1.0);
        let neg_one = Jet::constant_re(-1.0);
        let mut g = [[zero; 4]; 4];
        match self.kind {
            ChartKind::Cartesian => {
                g[0][0] = one;
                g[1][1] = neg_one;
                g[2][2] = neg_one;
                g[3][3] = neg_one;
            }
            ChartKind::Cylindrical => {
                // (t, r, theta, z): diag(1, -1, -r², -1)
                let r = Jet::coordinate(1, point)?;
                g[0][0] = one;
                g[1][1] = neg_one;
                g[2][2] = -(r * r);
                g[3][3] = neg_one;
            }
            ChartKind::Lightlike => {
                // (u, v, y, z): 2 du dv + dy² + dz²
                g[0][1] = one;
                g[1][0] = one;
                g[2][2] = one;
                g[3][3] = one;
            }
            ChartKind::LightlikeCylindrical => {
                // (u, v, r, theta): 2 du dv + dr² + r² dθ²
                let r = Jet::coordinate(2, point)?;
                g[0][1] = one;
                g[1][0] = one;
                g[2][2] = one;
                g[3][3] = r * r;
            }
        }
        Ok(g)
    }

    /// True if `point` lies outside the chart's valid region.
    pub fn excludes(&self, point: [f64; 4]) -> bool {
        match &self.exclusion {
            None => false,
            Some(pred) => match pred.eval_value(point, &Default::default()) {
                Ok(v) => v.re < 0.0,
                Err(_) => true,
            },
        }
    }

    /// Precompute the per-point metric data shared by every check.
    pub fn frame(&self, point: [f64; 4]) -> Result<Frame, JetError> {
        let g = self.metric_jets(point)?;
        let (ginv, det) = metric_inverse_jet(&g)?;
        let sqrt_abs_det = sqrt_abs(&det)?;
        let inv_sqrt_abs_det = sqrt_abs_det.recip()?;
        let ginv_values = metric_values(&ginv);
        Ok(Frame {
            point,
            g,
            ginv,
            det,
            sqrt_abs_det,
            inv_sqrt_abs_det,
            ginv_values,
        })
    }

    /// Covariant wave operator
    /// `□u = |det ĝ|^{-1/2} ∂_α(|det ĝ|^{1/2} ĝ^{αβ} ∂_β u)`
    /// evaluated through jets. The same path is used on every chart; on the
    /// flat cartesian chart it reduces to `η^{αβ} ∂_α ∂_β u`.
    ///
    /// `u` must be a degree-3 jet at `point`; the result has degree 1.
    pub fn wave_operator(&self, u: &Jet, point: [f64; 4]) -> Result<Jet, JetError> {
        Ok(self.frame(point)?.wave(u))
    }
}

/// Metric data at one point: ĝ, ĝ⁻¹, det ĝ, √|det ĝ| (all as jets) plus the
/// value part of ĝ⁻¹ for plain index raising.
#[derive(Debug, Clone)]
pub struct Frame {
    pub point: [f64; 4],
    pub g: Metric,
    pub ginv: Metric,
    pub det: Jet,
    pub sqrt_abs_det: Jet,
    pub inv_sqrt_abs_det: Jet,
    pub ginv_values: [[Complex64; 4]; 4],
}

impl Frame {
    /// The four α-summands of the covariant wave operator; their sum is □u.
    pub fn wave_terms(&self, u: &Jet) -> [Jet; 4] {
        let mut grad = [Jet::zero(); 4];
        for (beta, slot) in grad.iter_mut().enumerate() {
            *slot = u.derivative(beta);
        }
        let mut terms = [Jet::zero(); 4];
        for (alpha, term) in terms.iter_mut().enumerate() {
            let mut flux = Jet::zero();
            for beta in 0..4 {
                flux = flux + self.ginv[alpha][beta] * grad[beta];
            }
            flux = self.sqrt_abs_det * flux;
            *term = self.inv_sqrt_abs_det * flux.derivative(alpha);
        }
        terms
    }

    pub fn wave(&self, u: &Jet) -> Jet {
        let terms = self.wave_terms(u);
        terms[0] + terms[1] + terms[2] + terms[3]
    }

    /// Raised gradient vector field `v^α = ĝ^{αβ}(x) u_{,β}` as jets
    /// (the metric factor stays inside, so ∂v picks up its derivatives).
    pub fn raised_grad(&self, u: &Jet) -> [Jet; 4] {
        let mut grad = [Jet::zero(); 4];
        for (beta, slot) in grad.iter_mut().enumerate() {
            *slot = u.derivative(beta);
        }
        let mut v = [Jet::zero(); 4];
        for (alpha, slot) in v.iter_mut().enumerate() {
            let mut acc = Jet::zero();
            for beta in 0..4 {
                acc = acc + self.ginv[alpha][beta] * grad[beta];
            }
            *slot = acc;
        }
        v
    }
}

/// `sqrt(|a|)` for a jet whose value part has nonzero real part; negates
/// before the square root when the real part is negative (Lorentzian
/// determinants), so the result is the jet of `√|a|`.
pub fn sqrt_abs(a: &Jet) -> Result<Jet, JetError> {
    let flipped = if a.value().re < 0.0 { -*a } else { *a };
    flipped.compose_analytic(crate::jet::AnalyticFn::Sqrt)
}

/// Inverse and determinant of a 4×4 jet matrix via Gauss–Jordan elimination
/// with partial pivoting on the magnitude of the value part. Pivoting matters:
/// the lightlike charts have zeros on the metric diagonal.
pub fn metric_inverse_jet(g: &Metric) -> Result<(Metric, Jet), JetError> {
    let mut a = *g;
    let mut inv = [[Jet::zero(); 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Jet::constant_re(1.0);
    }
    let mut det = Jet::constant_re(1.0);
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&p, &q| {
                a[p][col]
                    .value()
                    .norm()
                    .total_cmp(&a[q][col].value().norm())
            })
            .unwrap();
        if a[pivot_row][col].value().norm() == 0.0 {
            return Err(JetError::Singular("metric inverse"));
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            inv.swap(pivot_row, col);
            det = -det;
        }
        let pivot = a[col][col];
        det = det * pivot;
        let pinv = pivot.recip()?;
        for j in 0..4 {
            a[col][j] = a[col][j] * pinv;
            inv[col][j] = inv[col][j] * pinv;
        }
        for row in 0..4 {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            if factor.max_coeff_norm() == 0.0 {
                continue;
            }
            for j in 0..4 {
                a[row][j] = a[row][j] - factor * a[col][j];
                inv[row][j] = inv[row][j] - factor * inv[col][j];
            }
        }
    }
    Ok((inv, det))
}

/// Christoffel symbols of an arbitrary metric-jet array:
/// `Γ^ρ_{μν} = ½ g^{ρλ} (∂_μ g_{λν} + ∂_ν g_{λμ} − ∂_λ g_{μν})`.
///
/// With degree-3 metric jets the result has degree 2.
pub fn christoffel(g: &Metric) -> Result<Gamma, JetError> {
    let (ginv, _) = metric_inverse_jet(g)?;
    let mut dg = [[[Jet::zero(); 4]; 4]; 4]; // dg[λ][μ][ν] = ∂_λ g_{μν}
    for (lam, slice) in dg.iter_mut().enumerate() {
        for (mu, row) in slice.iter_mut().enumerate() {
            for (nu, slot) in row.iter_mut().enumerate() {
                *slot = g[mu][nu].derivative(lam);
            }
        }
    }
    let mut gamma = [[[Jet::zero(); 4]; 4]; 4];
    for rho in 0..4 {
        for mu in 0..4 {
            for nu in 0..4 {
                let mut acc = Jet::zero();
                for lam in 0..4 {
                    let sym = dg[mu][lam][nu] + dg[nu][lam][mu] - dg[lam][mu][nu];
                    acc = acc + ginv[rho][lam] * sym;
                }
                gamma[rho][mu][nu] = acc.scale_re(0.5);
            }
        }
    }
    Ok(gamma)
}

/// Riemann tensor
/// `R^ρ_{σμν} = ∂_μ Γ^ρ_{νσ} − ∂_ν Γ^ρ_{μσ} + Γ^ρ_{μλ} Γ^λ_{νσ} − Γ^ρ_{νλ} Γ^λ_{μσ}`.
pub fn riemann(gamma: &Gamma) -> Riemann {
    let mut r = [[[[Jet::zero(); 4]; 4]; 4]; 4];
    for rho in 0..4 {
        for sigma in 0..4 {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut acc = gamma[rho][nu][sigma].derivative(mu)
                        - gamma[rho][mu][sigma].derivative(nu);
                    for lam in 0..4 {
                        acc = acc + gamma[rho][mu][lam] * gamma[lam][nu][sigma]
                            - gamma[rho][nu][lam] * gamma[lam][mu][sigma];
                    }
                    r[rho][sigma][mu][nu] = acc;
                }
            }
        }
    }
    r
}

/// Ricci tensor `R_{σν} = R^ρ_{σρν}` together with a per-component scale:
/// the largest magnitude among the individual terms entering the contraction
/// (the two ∂Γ terms and the two ΓΓ sums, per ρ). The scale feeds relative
/// tolerances so that near-cancelling curvature sums are judged fairly.
pub fn ricci_with_scale(gamma: &Gamma) -> ([[Jet; 4]; 4], [[f64; 4]; 4]) {
    let mut ric = [[Jet::zero(); 4]; 4];
    let mut scale = [[0.0f64; 4]; 4];
    for sigma in 0..4 {
        for nu in 0..4 {
            let mut acc = Jet::zero();
            let mut s = 0.0f64;
            for rho in 0..4 {
                let d1 = gamma[rho][nu][sigma].derivative(rho);
                let d2 = gamma[rho][rho][sigma].derivative(nu);
                s = s.max(d1.value().norm()).max(d2.value().norm());
                acc = acc + d1 - d2;
                for lam in 0..4 {
                    let p1 = gamma[rho][rho][lam] * gamma[lam][nu][sigma];
                    let p2 = gamma[rho][nu][lam] * gamma[lam][rho][sigma];
                    s = s.max(p1.value().norm()).max(p2.value().norm());
                    acc = acc + p1 - p2;
                }
            }
            ric[sigma][nu] = acc;
            scale[sigma][nu] = s;
        }
    }
    (ric, scale)
}

/// Largest |value| over all Riemann components — the non-flatness witness.
pub fn riemann_max_norm(r: &Riemann) -> f64 {
    let mut m = 0.0f64;
    for a in r.iter() {
        for b in a.iter() {
            for c in b.iter() {
                for jet in c.iter() {
                    m = m.max(jet.value().norm());
                }
            }
        }
    }
    m
}

/// The four builtin charts.
pub fn builtin_charts() -> Vec<Chart> {
    vec![
        Chart::new(
            "cartesian",
            ["t", "x", "y", "z"],
            ChartKind::Cartesian,
            None,
        ),
        Chart::new(
            "cylindrical",
            ["t", "r", "theta", "z"],
            ChartKind::Cylindrical,
            Some(1),
        ),
        Chart::new("lightlike", ["u", "v", "y", "z"], ChartKind::Lightlike, None),
        Chart::new(
            "lightlike_cylindrical",
            ["u", "v", "r", "theta"],
            ChartKind::LightlikeCylindrical,
            Some(2),
        ),
    ]
}

pub fn chart_by_name(name: &str) -> Option<Chart> {
    builtin_charts().into_iter().find(|c| c.name == name)
}

/// Metric value matrix (no derivative structure) — used for index raising in
/// the comma-derivative formulas of the spin-2 sector.
pub fn metric_values(g: &Metric) -> [[Complex64; 4]; 4] {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in g.iter().enumerate() {
        for (j, jet) in row.iter().enumerate() {
            out[i][j] = jet.value();
        }
    }
    out
}
