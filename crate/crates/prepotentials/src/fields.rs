//! Field constructions per spin sector and their field-equation residuals.
//!
//! Everything here consumes pre-potential jets already evaluated at a point
//! and returns `(abs, scale)` residual pairs: `abs` is the largest residual
//! component magnitude, `scale` the largest magnitude among the terms whose
//! cancellation the identity asserts. Spinor sectors and the linearized
//! spin-2 sector use flat comma derivatives and are restricted to the
//! cartesian chart by the scenario loader; the full spin-2 sector runs on
//! every chart through the curvature chain.

// Tensor contractions read as indexed sums; iterator rewrites obscure them.
#![allow(clippy::needless_range_loop)]

use crate::chart::{self, Frame, Metric};
use crate::clifford::{self, SpinorJet};
use crate::jet::Jet;
use crate::prepotential::det4;
use num_complex::Complex64;

const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);

/// η^{μν} diagonal for flat comma-derivative raising.
const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Index pairs (α<β) of the six independent field-strength components.
const F_SLOTS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Antisymmetric field strength; only the α<β components are stored, so
/// antisymmetry is exact by construction.
#[derive(Debug, Clone, Copy)]
pub struct FieldStrength {
    comp: [Jet; 6],
}

impl FieldStrength {
    pub fn get(&self, a: usize, b: usize) -> Jet {
        if a == b {
            return Jet::zero();
        }
        for (slot, &(p, q)) in F_SLOTS.iter().enumerate() {
            if (p, q) == (a, b) {
                return self.comp[slot];
            }
            if (p, q) == (b, a) {
                return -self.comp[slot];
            }
        }
        unreachable!("index out of range")
    }

    /// Value-part matrix with antisymmetry unfolded.
    pub fn values(&self) -> [[Complex64; 4]; 4] {
        let mut m = [[ZERO_C; 4]; 4];
        for (slot, &(a, b)) in F_SLOTS.iter().enumerate() {
            m[a][b] = self.comp[slot].value();
            m[b][a] = -self.comp[slot].value();
        }
        m
    }

    pub fn max_value_norm(&self) -> f64 {
        self.comp
            .iter()
            .map(|j| j.value().norm())
            .fold(0.0, f64::max)
    }
}

/// `F_{αβ} = Σᵢ (u_{,α} v_{,β} − u_{,β} v_{,α})` over the pair list.
pub fn build_f(pairs: &[(Jet, Jet)]) -> FieldStrength {
    let mut comp = [Jet::zero(); 6];
    for (u, v) in pairs {
        for (slot, &(a, b)) in F_SLOTS.iter().enumerate() {
            comp[slot] =
                comp[slot] + u.derivative(a) * v.derivative(b) - u.derivative(b) * v.derivative(a);
        }
    }
    FieldStrength { comp }
}

/// `residual^α = Σ_β ∂_β (ĝ^{αμ} ĝ^{βν} F_{μν})`, the source-free Maxwell
/// divergence in comma-derivative form (raising with the base metric jets).
pub fn maxwell_divergence_residual(f: &FieldStrength, frame: &Frame) -> (f64, f64) {
    let mut abs = 0.0f64;
    let mut scale = 0.0f64;
    for alpha in 0..4 {
        let mut total = ZERO_C;
        for beta in 0..4 {
            let mut flux = Jet::zero();
            for mu in 0..4 {
                for nu in 0..4 {
                    flux = flux + frame.ginv[alpha][mu] * frame.ginv[beta][nu] * f.get(mu, nu);
                }
            }
            let term = flux.derivative(beta).value();
            total += term;
            scale = scale.max(term.norm());
        }
        abs = abs.max(total.norm());
    }
    (abs, scale)
}

/// Cyclic identity `∂_γ F_{αβ} + ∂_α F_{βγ} + ∂_β F_{γα} = 0`, exact by
/// construction for any smooth pre-potentials; max over the 4 index triples.
pub fn bianchi_residual(f: &FieldStrength) -> (f64, f64) {
    let mut abs = 0.0f64;
    let mut scale = 0.0f64;
    for (a, b, g) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        let t1 = f.get(a, b).derivative(g).value();
        let t2 = f.get(b, g).derivative(a).value();
        let t3 = f.get(g, a).derivative(b).value();
        scale = scale.max(t1.norm()).max(t2.norm()).max(t3.norm());
        abs = abs.max((t1 + t2 + t3).norm());
    }
    (abs, scale)
}

/// `A_α = ½ Σᵢ (u_{,α} v − v_{,α} u) + Λ_{,α}`; Λ defaults to zero.
pub fn vector_potential(pairs: &[(Jet, Jet)], gauge: Option<&Jet>) -> [Jet; 4] {
    let mut a = [Jet::zero(); 4];
    for (u, v) in pairs {
        for (alpha, slot) in a.iter_mut().enumerate() {
            *slot = *slot + (u.derivative(alpha) * *v - v.derivative(alpha) * *u).scale_re(0.5);
        }
    }
    if let Some(lam) = gauge {
        for (alpha, slot) in a.iter_mut().enumerate() {
            *slot = *slot + lam.derivative(alpha);
        }
    }
    a
}

/// Curl of a potential in the convention under which the pre-potential
/// expression for `A` differentiates exactly to the field strength:
/// `F_{αβ} = ∂_β A_α − ∂_α A_β`.
pub fn f_from_potential(a: &[Jet; 4]) -> FieldStrength {
    let mut comp = [Jet::zero(); 6];
    for (slot, &(p, q)) in F_SLOTS.iter().enumerate() {
        comp[slot] = a[p].derivative(q) - a[q].derivative(p);
    }
    FieldStrength { comp }
}

/// Determinant of the field-strength value matrix (regularity witness) with
/// the row-norm product as scale.
pub fn f_regularity(f: &FieldStrength) -> (f64, f64) {
    let m = f.values();
    let det = det4(&m).norm();
    let mut scale = 1.0f64;
    for row in m.iter() {
        let norm_sq: f64 = row.iter().map(|c| c.norm_sqr()).sum();
        scale *= norm_sq.sqrt();
    }
    (det, scale)
}

/// Spin-0 field `φ = Σᵢ u^{(2i−1)} u^{(2i)}`.
pub fn build_scalar(pairs: &[(Jet, Jet)]) -> Jet {
    let mut phi = Jet::zero();
    for (u, v) in pairs {
        phi = phi + *u * *v;
    }
    phi
}

/// Klein–Gordon residual `|□φ|`, scaled like the d'Alembert condition by the
/// largest inverse-metric-weighted second-derivative term.
pub fn kg_residual(phi: &Jet, frame: &Frame) -> (f64, f64) {
    let terms = frame.wave_terms(phi);
    let mut total = ZERO_C;
    for t in terms.iter() {
        total += t.value();
    }
    let mut scale = 0.0f64;
    for alpha in 0..4 {
        for beta in 0..4 {
            scale = scale.max((frame.ginv_values[alpha][beta] * phi.hess(alpha, beta)).norm());
        }
    }
    (total.norm(), scale)
}

/// Spin-1/2 field from a column of four pair-products: `ψ = ∂̸ C`.
pub fn build_dirac_from_products(products: &[Jet; 4]) -> SpinorJet {
    clifford::slash_apply(products)
}

/// Dirac residual `i γ^μ ∂_μ ψ`; returns (abs, scale) over the four rows.
pub fn dirac_residual(psi: &SpinorJet) -> (f64, f64) {
    let gam = clifford::gamma_int();
    let mut abs = 0.0f64;
    let mut scale = 0.0f64;
    let mut dpsi = [[ZERO_C; 4]; 4]; // [mu][col]
    for (mu, row) in dpsi.iter_mut().enumerate() {
        for (col, slot) in row.iter_mut().enumerate() {
            *slot = psi[col].derivative(mu).value();
        }
    }
    for row in 0..4 {
        let mut acc = ZERO_C;
        for (mu, g) in gam.iter().enumerate() {
            for (col, &entry) in g[row].iter().enumerate() {
                if entry.re != 0 || entry.im != 0 {
                    let c = Complex64::new(entry.re as f64, entry.im as f64);
                    let term = c * dpsi[mu][col];
                    acc += term;
                    scale = scale.max(term.norm());
                }
            }
        }
        // overall factor i does not move magnitudes
        abs = abs.max(acc.norm());
    }
    (abs, scale)
}

/// Spin-1/2 field read directly off the field strength:
/// `ψ = (−F₀₃, −F₀₁ − iF₀₂, iF₁₂, F₁₃ + iF₂₃)` — the component formulas in
/// pre-potential first derivatives, built as jets so residuals stay evaluable.
pub fn build_dirac_from_maxwell(f: &FieldStrength) -> SpinorJet {
    let i = Complex64::new(0.0, 1.0);
    [
        -f.get(0, 3),
        -f.get(0, 1) - f.get(0, 2).scale(i),
        f.get(1, 2).scale(i),
        f.get(1, 3) + f.get(2, 3).scale(i),
    ]
}

/// Spin-3/2 vector-spinor `ψ_β = ∂_β(∂̸u) · ∂̸C`.
pub fn build_rs(u: &Jet, column: &[Jet; 4]) -> [SpinorJet; 4] {
    let m = clifford::slash(u);
    let s = clifford::slash_apply(column);
    let mut psi = [[Jet::zero(); 4]; 4];
    for (beta, slot) in psi.iter_mut().enumerate() {
        let mut dm = [[Jet::zero(); 4]; 4];
        for (r, row) in dm.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = m[r][c].derivative(beta);
            }
        }
        *slot = clifford::apply_matrix(&dm, &s);
    }
    psi
}

/// The three Rarita–Schwinger residual blocks:
/// (a) `i∂̸ψ_β = 0` per vector slot, (b) `γ^β ψ_β = 0`, (c) `∂^β ψ_β = 0`.
pub fn rs_residuals(psi: &[SpinorJet; 4]) -> [(f64, f64); 3] {
    // (a) Dirac equation on each slot
    let mut dirac_abs = 0.0f64;
    let mut dirac_scale = 0.0f64;
    for slot in psi.iter() {
        let (a, s) = dirac_residual(slot);
        dirac_abs = dirac_abs.max(a);
        dirac_scale = dirac_scale.max(s);
    }
    // (b) gamma-trace constraint: direct up-down contraction Σ_β γ^β ψ_β
    let mut trace_abs = 0.0f64;
    let mut trace_scale = 0.0f64;
    {
        let mut acc = [ZERO_C; 4];
        for (beta, slot) in psi.iter().enumerate() {
            let term = clifford::gamma_apply(beta, slot);
            for (row, t) in term.iter().enumerate() {
                acc[row] += t.value();
                trace_scale = trace_scale.max(t.value().norm());
            }
        }
        for v in acc.iter() {
            trace_abs = trace_abs.max(v.norm());
        }
    }
    // (c) divergence constraint with the derivative index raised by η
    let mut div_abs = 0.0f64;
    let mut div_scale = 0.0f64;
    {
        let mut acc = [ZERO_C; 4];
        for (beta, slot) in psi.iter().enumerate() {
            for (row, jet) in slot.iter().enumerate() {
                let term = jet.derivative(beta).value() * ETA[beta];
                acc[row] += term;
                div_scale = div_scale.max(term.norm());
            }
        }
        for v in acc.iter() {
            div_abs = div_abs.max(v.norm());
        }
    }
    [
        (dirac_abs, dirac_scale),
        (trace_abs, trace_scale),
        (div_abs, div_scale),
    ]
}

/// Largest |value| among all ψ_β spinor components (non-triviality witness).
pub fn rs_max_norm(psi: &[SpinorJet; 4]) -> f64 {
    psi.iter()
        .flat_map(|s| s.iter())
        .map(|j| j.value().norm())
        .fold(0.0, f64::max)
}

/// Symmetric index pairs (α≤β) of the ten independent components.
const H_SLOTS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// Symmetric rank-2 jet tensor; only α≤β stored.
#[derive(Debug, Clone, Copy)]
pub struct SymTensor {
    comp: [Jet; 10],
}

impl SymTensor {
    pub fn get(&self, a: usize, b: usize) -> Jet {
        let key = if a <= b { (a, b) } else { (b, a) };
        for (slot, &pq) in H_SLOTS.iter().enumerate() {
            if pq == key {
                return self.comp[slot];
            }
        }
        unreachable!("index out of range")
    }

    pub fn max_value_norm(&self) -> f64 {
        self.comp
            .iter()
            .map(|j| j.value().norm())
            .fold(0.0, f64::max)
    }
}

/// `h_{αβ} = Σᵢ (U_{,α} V_{,β} + V_{,α} U_{,β})`.
pub fn build_h(pairs: &[(Jet, Jet)]) -> SymTensor {
    let mut comp = [Jet::zero(); 10];
    for (u, v) in pairs {
        for (slot, &(a, b)) in H_SLOTS.iter().enumerate() {
            comp[slot] =
                comp[slot] + u.derivative(a) * v.derivative(b) + v.derivative(a) * u.derivative(b);
        }
    }
    SymTensor { comp }
}

/// Flat trace `h = η^{αβ} h_{αβ}`.
pub fn h_trace(h: &SymTensor) -> Jet {
    let mut acc = Jet::zero();
    for (alpha, eta) in ETA.iter().enumerate() {
        acc = acc + h.get(alpha, alpha).scale_re(*eta);
    }
    acc
}

/// Flat divergence `h_μ{}^α{}_{,α} = Σ_α η^{αα} ∂_α h_{μα}`.
pub fn h_divergence(h: &SymTensor) -> [Jet; 4] {
    let mut out = [Jet::zero(); 4];
    for (mu, slot) in out.iter_mut().enumerate() {
        for (alpha, eta) in ETA.iter().enumerate() {
            *slot = *slot + h.get(mu, alpha).derivative(alpha).scale_re(*eta);
        }
    }
    out
}

/// Linearized vacuum equations about flat space (comma derivatives, cartesian
/// chart): `h_μ{}^α{}_{,να} + h_ν{}^α{}_{,μα} − h_{μν,α}{}^α − h_{,μν} = 0`
/// over all 10 independent components.
pub fn linearized_einstein_residual(h: &SymTensor) -> (f64, f64) {
    let trace = h_trace(h);
    let mut abs = 0.0f64;
    let mut scale = 0.0f64;
    for &(mu, nu) in H_SLOTS.iter() {
        let mut acc = ZERO_C;
        for (alpha, eta) in ETA.iter().enumerate() {
            // h_μ^α_{,να} = η^{αα} ∂_ν ∂_α h_{μα}
            let t1 = h.get(mu, alpha).derivative(nu).derivative(alpha).value() * eta;
            let t2 = h.get(nu, alpha).derivative(mu).derivative(alpha).value() * eta;
            // □h_{μν}
            let t3 = h.get(mu, nu).derivative(alpha).derivative(alpha).value() * eta;
            acc += t1 + t2 - t3;
            scale = scale.max(t1.norm()).max(t2.norm()).max(t3.norm());
        }
        let t4 = trace.derivative(mu).derivative(nu).value();
        acc -= t4;
        scale = scale.max(t4.norm());
        abs = abs.max(acc.norm());
    }
    (abs, scale)
}

/// Full metric `g = ĝ + Θ` with `Θ_{αβ}` the same symmetric bilinear form as
/// the linearized sector, evaluated on the scenario's chart.
pub fn build_full_metric(frame: &Frame, pairs: &[(Jet, Jet)]) -> Metric {
    let theta = build_h(pairs);
    let mut g = frame.g;
    for (i, row) in g.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = *slot + theta.get(i, j);
        }
    }
    g
}

/// Outcome of the full vacuum check at one point.
pub struct EinsteinResidual {
    /// max |R_{σν}| value
    pub ricci_abs: f64,
    /// largest contraction term feeding any Ricci component
    pub ricci_scale: f64,
    /// max |R^ρ_{σμν}| value — the non-flatness witness
    pub riemann_max: f64,
    /// largest individual term in the Riemann assembly
    pub riemann_scale: f64,
}

/// Vacuum Einstein residual through the curvature chain: Ricci of `g` must
/// vanish. Errors propagate for singular metrics (the caller skips and
/// counts the point).
pub fn einstein_vacuum_residual(g: &Metric) -> Result<EinsteinResidual, crate::jet::JetError> {
    let gamma = chart::christoffel(g)?;
    let (ric, scales) = chart::ricci_with_scale(&gamma);
    let mut ricci_abs = 0.0f64;
    let mut ricci_scale = 0.0f64;
    for (row, srow) in ric.iter().zip(scales.iter()) {
        for (jet, s) in row.iter().zip(srow.iter()) {
            ricci_abs = ricci_abs.max(jet.value().norm());
            ricci_scale = ricci_scale.max(*s);
        }
    }
    let (riemann_max, riemann_scale) = riemann_with_scale(&gamma);
    Ok(EinsteinResidual {
        ricci_abs,
        ricci_scale,
        riemann_max,
        riemann_scale,
    })
}

/// Max Riemann component magnitude together with the largest individual term
/// (∂Γ or ΓΓ) in its assembly, so flatness-by-cancellation is distinguishable
/// from flatness-by-zero-input.
fn riemann_with_scale(gamma: &crate::chart::Gamma) -> (f64, f64) {
    let mut max_comp = 0.0f64;
    let mut scale = 0.0f64;
    for rho in 0..4 {
        for sigma in 0..4 {
            for mu in 0..4 {
                for nu in 0..4 {
                    let d1 = gamma[rho][nu][sigma].derivative(mu).value();
                    let d2 = gamma[rho][mu][sigma].derivative(nu).value();
                    let mut acc = d1 - d2;
                    scale = scale.max(d1.norm()).max(d2.norm());
                    for lam in 0..4 {
                        let p1 = (gamma[rho][mu][lam] * gamma[lam][nu][sigma]).value();
                        let p2 = (gamma[rho][nu][lam] * gamma[lam][mu][sigma]).value();
                        acc += p1 - p2;
                        scale = scale.max(p1.norm()).max(p2.norm());
                    }
                    max_comp = max_comp.max(acc.norm());
                }
            }
        }
    }
    (max_comp, scale)
}
