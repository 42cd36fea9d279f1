//! Structural properties over randomized inputs: jet ring axioms, the exact
//! identities of the field-strength construction, and the Dirac implication
//! for products of orthogonal harmonic pairs.

use num_complex::Complex64;
use prepotentials::chart::chart_by_name;
use prepotentials::fields::{
    bianchi_residual, build_dirac_from_products, build_f, dirac_residual, f_from_potential,
    kg_residual, vector_potential,
};
use prepotentials::jet::{Jet, MultiIndex, MAX_DEG, N_COEFFS};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPS: f64 = f64::EPSILON;

fn jet_strategy() -> impl Strategy<Value = Jet> {
    prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), N_COEFFS).prop_map(|v| {
        let mut c = [Complex64::new(0.0, 0.0); N_COEFFS];
        for (slot, (re, im)) in c.iter_mut().zip(v) {
            *slot = Complex64::new(re, im);
        }
        Jet::from_raw(c, MAX_DEG)
    })
}

fn max_coeff(j: &Jet) -> f64 {
    (0..N_COEFFS)
        .map(|i| j.extract(MultiIndex::from_flat(i)).norm())
        .fold(0.0, f64::max)
}

/// Per-coefficient distance, restricted to levels both jets still carry.
fn jet_distance(a: &Jet, b: &Jet) -> f64 {
    let deg = a.degree().min(b.degree());
    let mut d = 0.0f64;
    for i in 0..N_COEFFS {
        let m = MultiIndex::from_flat(i);
        if m.degree() <= deg {
            d = d.max((a.extract(m) - b.extract(m)).norm());
        }
    }
    d
}

proptest! {
    #[test]
    fn addition_commutes_and_associates(a in jet_strategy(), b in jet_strategy(), c in jet_strategy()) {
        prop_assert_eq!(jet_distance(&(a + b), &(b + a)), 0.0);
        let lhs = (a + b) + c;
        let rhs = a + (b + c);
        let scale = max_coeff(&a) + max_coeff(&b) + max_coeff(&c) + 1.0;
        prop_assert!(jet_distance(&lhs, &rhs) <= 4.0 * EPS * scale);
    }

    #[test]
    fn multiplication_commutes(a in jet_strategy(), b in jet_strategy()) {
        let ab = a * b;
        let ba = b * a;
        let scale = max_coeff(&a) * max_coeff(&b) + 1.0;
        prop_assert!(jet_distance(&ab, &ba) <= 64.0 * EPS * scale);
    }

    #[test]
    fn multiplication_distributes(a in jet_strategy(), b in jet_strategy(), c in jet_strategy()) {
        let lhs = a * (b + c);
        let rhs = a * b + a * c;
        let scale = max_coeff(&a) * (max_coeff(&b) + max_coeff(&c)) + 1.0;
        prop_assert!(jet_distance(&lhs, &rhs) <= 64.0 * EPS * scale);
    }

    #[test]
    fn recip_multiplies_to_unit(a in jet_strategy(), shift in 0.6f64..3.0) {
        // push the value part away from zero so the reciprocal is well posed
        let a = a + Jet::constant_re(shift * 2.0);
        let r = a.recip().unwrap();
        let p = r * a;
        prop_assert!(jet_distance(&p, &Jet::unit()) <= 1e-9);
    }

    #[test]
    fn re_im_reconstruction_is_exact(a in jet_strategy()) {
        let rebuilt = a.re() + a.im().scale(Complex64::new(0.0, 1.0));
        prop_assert_eq!(jet_distance(&rebuilt, &a), 0.0);
        prop_assert_eq!(jet_distance(&a.conj().conj(), &a), 0.0);
    }

    #[test]
    fn bianchi_vanishes_for_arbitrary_pairs(
        u1 in jet_strategy(), u2 in jet_strategy(),
        u3 in jet_strategy(), u4 in jet_strategy(),
    ) {
        let f = build_f(&[(u1, u2), (u3, u4)]);
        let (abs, scale) = bianchi_residual(&f);
        prop_assert!(abs <= 8.0 * EPS * scale, "abs={abs} scale={scale}");
    }

    #[test]
    fn field_strength_is_antisymmetric(u in jet_strategy(), v in jet_strategy()) {
        let f = build_f(&[(u, v)]);
        for a in 0..4 {
            prop_assert_eq!(max_coeff(&f.get(a, a)), 0.0);
            for b in 0..4 {
                prop_assert_eq!(jet_distance(&f.get(a, b), &f.get(b, a).scale_re(-1.0)), 0.0);
            }
        }
    }

    #[test]
    fn scaling_prepotentials_scales_f_quadratically(u in jet_strategy(), v in jet_strategy()) {
        let f1 = build_f(&[(u, v)]);
        // λ = 2: powers of two commute with rounding, so this is bit-exact
        let f2 = build_f(&[(u.scale_re(2.0), v.scale_re(2.0))]);
        for a in 0..4 {
            for b in 0..4 {
                prop_assert_eq!(jet_distance(&f2.get(a, b), &f1.get(a, b).scale_re(4.0)), 0.0);
            }
        }
        // λ = 10 rounds, but only by a few ulp
        let f10 = build_f(&[(u.scale_re(10.0), v.scale_re(10.0))]);
        let scale = 100.0 * (max_coeff(&u) * max_coeff(&v) + 1.0);
        for a in 0..4 {
            for b in 0..4 {
                let d = jet_distance(&f10.get(a, b), &f1.get(a, b).scale_re(100.0));
                prop_assert!(d <= 16.0 * EPS * scale);
            }
        }
    }

    #[test]
    fn potential_curl_reproduces_f_for_any_gauge(
        u1 in jet_strategy(), u2 in jet_strategy(),
        u3 in jet_strategy(), u4 in jet_strategy(),
        gauge in jet_strategy(),
    ) {
        let pairs = [(u1, u2), (u3, u4)];
        let f1 = build_f(&pairs);
        let mut worst = 0.0f64;
        let mut scale = 1.0f64;
        for g in [None, Some(&gauge)] {
            let a = vector_potential(&pairs, g);
            let f2 = f_from_potential(&a);
            for p in 0..4 {
                for q in 0..4 {
                    worst = worst.max(jet_distance(&f1.get(p, q), &f2.get(p, q)));
                    scale = scale.max(max_coeff(&f1.get(p, q)));
                }
            }
        }
        // the construction cancels pairwise; only summation roundoff remains
        prop_assert!(worst <= 64.0 * EPS * scale, "worst={worst} scale={scale}");
    }
}

/// One randomized orthogonal harmonic pair: a profile of `t ± x_j` crossed
/// with a planar harmonic in the two remaining spatial coordinates.
fn random_orthogonal_pair(rng: &mut ChaCha8Rng, point: [f64; 4]) -> (Jet, Jet) {
    let j = rng.gen_range(1..4usize);
    let (k, l) = match j {
        1 => (2, 3),
        2 => (1, 3),
        _ => (1, 2),
    };
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let t = Jet::coordinate(0, point).unwrap();
    let xj = Jet::coordinate(j, point).unwrap();
    let s = t + xj.scale_re(sign);

    // profile p(s) = a sin(ωs) + b cos(ωs) + c s
    let (a, b, c) = (
        rng.gen_range(-1.5..1.5),
        rng.gen_range(-1.5..1.5),
        rng.gen_range(-1.5..1.5),
    );
    let omega = rng.gen_range(1..3) as f64;
    let ws = s.scale_re(omega);
    let u = ws.compose_analytic(prepotentials::jet::AnalyticFn::Sin).unwrap().scale_re(a)
        + ws.compose_analytic(prepotentials::jet::AnalyticFn::Cos).unwrap().scale_re(b)
        + s.scale_re(c);

    // planar harmonic: Re or Im of (x_k + i x_l)^n plus a linear part
    let w = Jet::coordinate(k, point).unwrap()
        + Jet::coordinate(l, point).unwrap().scale(Complex64::new(0.0, 1.0));
    let n = rng.gen_range(1..4u32);
    let pw = w.pow_int(n);
    let planar = if rng.gen::<bool>() { pw.re() } else { pw.im() };
    let lin = Jet::coordinate(k, point).unwrap().scale_re(rng.gen_range(-1.0..1.0))
        + Jet::coordinate(l, point).unwrap().scale_re(rng.gen_range(-1.0..1.0));
    let v = planar.scale_re(rng.gen_range(0.5..1.5)) + lin;

    (u, v)
}

/// Whenever every column product satisfies the wave equation, the spinor
/// assembled from those products satisfies the Dirac equation.
#[test]
fn dirac_implication_on_orthogonal_pair_scenarios() {
    let chart = chart_by_name("cartesian").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(271828);
    let tol = 1e-9;
    for scenario in 0..50 {
        for _ in 0..4 {
            let point = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let frame = chart.frame(point).unwrap();
            let (u1, v1) = random_orthogonal_pair(&mut rng, point);
            let (u2, v2) = random_orthogonal_pair(&mut rng, point);
            let products = [u1 * v1, u2 * v2, u1 * v1, u2 * v2];
            // premise: each column product solves the wave equation here
            for prod in &products {
                let (abs, scale) = kg_residual(prod, &frame);
                assert!(
                    abs <= tol * scale.max(1.0),
                    "scenario {scenario}: premise broken, kg abs={abs} scale={scale}"
                );
            }
            // conclusion: the assembled spinor solves the Dirac equation
            let psi = build_dirac_from_products(&products);
            let (abs, scale) = dirac_residual(&psi);
            assert!(
                abs <= tol * scale.max(1.0),
                "scenario {scenario}: dirac abs={abs} scale={scale}"
            );
        }
    }
}
