//! Dirac matrices and slash operators.
//!
//! Representation: γ⁰ = σ³⊗I, γ^j = iσ²⊗σ^j, i.e.
//!
//! ```text
//! γ⁰ = diag(1, 1, -1, -1)      γ^j = [[0, σ^j], [-σ^j, 0]]
//! ```
//!
//! with the standard Pauli basis. All entries are Gaussian integers, so the
//! Clifford relations {γ^μ, γ^ν} = 2η^{μν}·I are checked in exact integer
//! arithmetic. The slash of a scalar jet is `∂̸u = Σ_μ γ^μ ∂_μ u` — plain
//! coordinate derivatives, no index raising.

// Matrix contractions read as indexed sums; iterator rewrites obscure them.
#![allow(clippy::needless_range_loop)]

use crate::jet::Jet;
use num_complex::Complex;

pub type GammaInt = [[[Complex<i32>; 4]; 4]; 4];
pub type SpinorJet = [Jet; 4];
pub type MatrixJet = [[Jet; 4]; 4];

/// The four gamma matrices over Gaussian integers, indexed `[μ][row][col]`.
pub fn gamma_int() -> GammaInt {
    let o = Complex::new(0, 0);
    let p = Complex::new(1, 0);
    let n = Complex::new(-1, 0);
    let pi = Complex::new(0, 1);
    let ni = Complex::new(0, -1);
    [
        // γ⁰ = σ³ ⊗ I
        [[p, o, o, o], [o, p, o, o], [o, o, n, o], [o, o, o, n]],
        // γ¹ = iσ² ⊗ σ¹
        [[o, o, o, p], [o, o, p, o], [o, n, o, o], [n, o, o, o]],
        // γ² = iσ² ⊗ σ²
        [[o, o, o, ni], [o, o, pi, o], [o, pi, o, o], [ni, o, o, o]],
        // γ³ = iσ² ⊗ σ³
        [[o, o, p, o], [o, o, o, n], [n, o, o, o], [o, p, o, o]],
    ]
}

/// η^{μν} = diag(1, -1, -1, -1) as integers.
pub const ETA: [i32; 4] = [1, -1, -1, -1];

/// Slash of a scalar jet: the 4×4 jet matrix `Σ_μ γ^μ ∂_μ u`.
/// Input degree d gives entries of degree d−1.
pub fn slash(u: &Jet) -> MatrixJet {
    let gam = gamma_int();
    let mut grad = [Jet::zero(); 4];
    for (mu, slot) in grad.iter_mut().enumerate() {
        *slot = u.derivative(mu);
    }
    let mut out = [[Jet::zero(); 4]; 4];
    for (mu, g) in gam.iter().enumerate() {
        for (row, grow) in g.iter().enumerate() {
            for (col, &entry) in grow.iter().enumerate() {
                if entry.re != 0 || entry.im != 0 {
                    let c = Complex::new(entry.re as f64, entry.im as f64);
                    out[row][col] = out[row][col] + grad[mu].scale(c);
                }
            }
        }
    }
    out
}

/// Slash applied to a jet spinor: `(∂̸ψ)_row = Σ_μ Σ_c γ^μ[row][c] ∂_μ ψ_c`.
pub fn slash_apply(psi: &SpinorJet) -> SpinorJet {
    let gam = gamma_int();
    let mut dpsi = [[Jet::zero(); 4]; 4]; // dpsi[mu][c]
    for (mu, row) in dpsi.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = psi[c].derivative(mu);
        }
    }
    let mut out = [Jet::zero(); 4];
    for (mu, g) in gam.iter().enumerate() {
        for (row, grow) in g.iter().enumerate() {
            for (col, &entry) in grow.iter().enumerate() {
                if entry.re != 0 || entry.im != 0 {
                    let c = Complex::new(entry.re as f64, entry.im as f64);
                    out[row] = out[row] + dpsi[mu][col].scale(c);
                }
            }
        }
    }
    out
}

/// Jet-matrix times jet-spinor.
pub fn apply_matrix(m: &MatrixJet, v: &SpinorJet) -> SpinorJet {
    let mut out = [Jet::zero(); 4];
    for (row, mrow) in m.iter().enumerate() {
        for (col, entry) in mrow.iter().enumerate() {
            out[row] = out[row] + *entry * v[col];
        }
    }
    out
}

/// Constant gamma matrix applied to a jet spinor (no derivatives).
pub fn gamma_apply(mu: usize, v: &SpinorJet) -> SpinorJet {
    let gam = gamma_int();
    let mut out = [Jet::zero(); 4];
    for (row, grow) in gam[mu].iter().enumerate() {
        for (col, &entry) in grow.iter().enumerate() {
            if entry.re != 0 || entry.im != 0 {
                let c = Complex::new(entry.re as f64, entry.im as f64);
                out[row] = out[row] + v[col].scale(c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use num_complex::Complex64;
    use std::collections::HashMap;

    type MatI = [[Complex<i32>; 4]; 4];

    fn mat_mul(a: &MatI, b: &MatI) -> MatI {
        let mut out = [[Complex::new(0, 0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Complex::new(0, 0);
                for k in 0..4 {
                    acc += a[i][k] * b[k][j];
                }
                out[i][j] = acc;
            }
        }
        out
    }

    #[test]
    fn gamma0_is_diag_1_1_m1_m1() {
        let g = gamma_int();
        for (i, row) in g[0].iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                let want = if i == j {
                    if i < 2 { 1 } else { -1 }
                } else {
                    0
                };
                assert_eq!(e, Complex::new(want, 0));
            }
        }
    }

    #[test]
    fn clifford_relations_exact() {
        let g = gamma_int();
        for mu in 0..4 {
            for nu in 0..4 {
                let ab = mat_mul(&g[mu], &g[nu]);
                let ba = mat_mul(&g[nu], &g[mu]);
                for i in 0..4 {
                    for j in 0..4 {
                        let sum = ab[i][j] + ba[i][j];
                        let want = if mu == nu && i == j {
                            Complex::new(2 * ETA[mu], 0)
                        } else {
                            Complex::new(0, 0)
                        };
                        assert_eq!(
                            sum, want,
                            "anticommutator γ{mu}γ{nu} entry ({i},{j})"
                        );
                    }
                }
            }
        }
    }

    fn cart() -> Vec<String> {
        ["t", "x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn slash_example_spinor() {
        // φ = (t+x)·y at (1,2,3,0): ∂φ = (3,3,3,0); ∂̸φ · e₁ = (3,0,0,-3-3i)
        let phi = Expr::parse("(t + x)*y", &cart(), &[])
            .unwrap()
            .eval_jet([1.0, 2.0, 3.0, 0.0], &HashMap::new())
            .unwrap();
        let s = slash(&phi);
        let want = [
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-3.0, -3.0),
        ];
        for (row, w) in want.iter().enumerate() {
            assert!(
                (s[row][0].value() - w).norm() < 1e-13,
                "row {row}: {} vs {w}",
                s[row][0].value()
            );
        }
    }

    #[test]
    fn slash_squared_is_dalembertian() {
        let p = [0.4, -0.7, 0.3, 0.8];
        let no_params = HashMap::new();
        // wave solution → ∂̸² = □ = 0
        let u = Expr::parse("sin(t + x) + re((y + i*z)^3)", &cart(), &[])
            .unwrap()
            .eval_jet(p, &no_params)
            .unwrap();
        let m = slash(&u);
        for col in 0..4 {
            let column = [m[0][col], m[1][col], m[2][col], m[3][col]];
            let twice = slash_apply(&column);
            for (row, jet) in twice.iter().enumerate() {
                assert!(
                    jet.value().norm() < 1e-12,
                    "∂̸² of wave solution, ({row},{col})"
                );
            }
        }
        // non-solution → ∂̸²(t²+x²) = (□(t²+x²))·I = 0... use t² instead: □t² = 2
        let u = Expr::parse("t^2", &cart(), &[])
            .unwrap()
            .eval_jet(p, &no_params)
            .unwrap();
        let m = slash(&u);
        for col in 0..4 {
            let column = [m[0][col], m[1][col], m[2][col], m[3][col]];
            let twice = slash_apply(&column);
            for (row, jet) in twice.iter().enumerate() {
                let want = if row == col { 2.0 } else { 0.0 };
                assert!(
                    (jet.value() - Complex64::new(want, 0.0)).norm() < 1e-12,
                    "∂̸² t² ({row},{col}) = {}",
                    jet.value()
                );
            }
        }
    }

    #[test]
    fn apply_matrix_identity_and_gamma() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let no_params = HashMap::new();
        let a = Expr::parse("t*x", &cart(), &[])
            .unwrap()
            .eval_jet(p, &no_params)
            .unwrap();
        let psi = [a, Jet::zero(), Jet::zero(), Jet::zero()];
        let mut ident = [[Jet::zero(); 4]; 4];
        for (i, row) in ident.iter_mut().enumerate() {
            row[i] = Jet::constant_re(1.0);
        }
        let out = apply_matrix(&ident, &psi);
        assert!((out[0].value() - a.value()).norm() < 1e-15);
        // γ³ e₀ = -e₂
        let g3 = gamma_apply(3, &psi);
        assert!((g3[2].value() + a.value()).norm() < 1e-15);
        assert!(g3[0].value().norm() < 1e-15);
    }
}
