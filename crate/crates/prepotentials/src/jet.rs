//! Degree-3 truncated multivariate Taylor expansions ("jets") in 4 real
//! variables with complex coefficients.
//!
//! A [`Jet`] stores the raw mixed partials `∂^m f` (not divided by `m!`) for
//! every multi-index `m` of total degree ≤ 3: 1 value, 4 gradient, 10
//! symmetric second-order and 20 symmetric third-order coefficients — 35 in
//! total. Arithmetic is exact truncated-ring arithmetic, so every derivative
//! the toolkit consumes is exact up to floating-point rounding.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Number of stored coefficients for degree ≤ 3 in 4 variables.
pub const N_COEFFS: usize = 35;

/// Maximum retained truncation degree.
pub const MAX_DEG: u8 = 3;

/// Symmetric second-order index pairs (a ≤ b), in storage order.
pub const PAIRS: [(usize, usize); 10] = [
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

/// Symmetric third-order index triples (a ≤ b ≤ c), in storage order.
pub const TRIPLES: [(usize, usize, usize); 20] = [
    (0, 0, 0),
    (0, 0, 1),
    (0, 0, 2),
    (0, 0, 3),
    (0, 1, 1),
    (0, 1, 2),
    (0, 1, 3),
    (0, 2, 2),
    (0, 2, 3),
    (0, 3, 3),
    (1, 1, 1),
    (1, 1, 2),
    (1, 1, 3),
    (1, 2, 2),
    (1, 2, 3),
    (1, 3, 3),
    (2, 2, 2),
    (2, 2, 3),
    (2, 3, 3),
    (3, 3, 3),
];

/// Errors from jet operations whose preconditions can fail at runtime.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JetError {
    #[error("singular jet: {0} has zero value part")]
    Singular(&'static str),
    #[error("domain error: {func} evaluated at a branch point")]
    Domain { func: &'static str },
    #[error("coordinate axis {0} out of range 0..4")]
    AxisOutOfRange(usize),
    #[error("multi-index degree {0} exceeds 3")]
    DegreeTooHigh(u8),
}

/// A multi-index over the 4 coordinates with total degree ≤ 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiIndex {
    exps: [u8; 4],
}

impl MultiIndex {
    pub fn new(exps: [u8; 4]) -> Result<Self, JetError> {
        let deg = exps.iter().sum::<u8>();
        if deg > MAX_DEG {
            return Err(JetError::DegreeTooHigh(deg));
        }
        Ok(Self { exps })
    }

    pub fn exponents(&self) -> [u8; 4] {
        self.exps
    }

    /// First-order multi-index along one axis.
    pub fn unit(axis: usize) -> Self {
        let mut exps = [0u8; 4];
        exps[axis] = 1;
        Self { exps }
    }

    pub fn degree(&self) -> u8 {
        self.exps.iter().sum()
    }

    /// Flat storage index of this multi-index.
    pub fn flat(&self) -> usize {
        let axes = self.axes();
        match axes.len() {
            0 => 0,
            1 => 1 + axes[0],
            2 => 5 + PAIRS.iter().position(|&p| p == (axes[0], axes[1])).unwrap(),
            3 => {
                15 + TRIPLES
                    .iter()
                    .position(|&t| t == (axes[0], axes[1], axes[2]))
                    .unwrap()
            }
            _ => unreachable!("degree bounded by constructor"),
        }
    }

    /// The sorted list of axes with repetition, e.g. (1,0,2,0) → [0, 2, 2].
    fn axes(&self) -> Vec<usize> {
        let mut v = Vec::with_capacity(3);
        for (axis, &e) in self.exps.iter().enumerate() {
            for _ in 0..e {
                v.push(axis);
            }
        }
        v
    }

    /// Inverse of [`flat`]: the multi-index stored at a flat position.
    pub fn from_flat(idx: usize) -> Self {
        let mut exps = [0u8; 4];
        match idx {
            0 => {}
            1..=4 => exps[idx - 1] = 1,
            5..=14 => {
                let (a, b) = PAIRS[idx - 5];
                exps[a] += 1;
                exps[b] += 1;
            }
            15..=34 => {
                let (a, b, c) = TRIPLES[idx - 15];
                exps[a] += 1;
                exps[b] += 1;
                exps[c] += 1;
            }
            _ => panic!("flat index {idx} out of range"),
        }
        Self { exps }
    }
}

/// Leibniz product table: for each target coefficient, the weighted list of
/// source coefficient pairs. `(ab)[M] = Σ_{J+K=M} Π_i C(M_i, J_i) · a[J]·b[K]`.
fn leibniz_table() -> &'static Vec<Vec<(usize, usize, f64)>> {
    static TABLE: OnceLock<Vec<Vec<(usize, usize, f64)>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        fn binom(n: u8, k: u8) -> f64 {
            // n, k ≤ 3
            const B: [[f64; 4]; 4] = [
                [1., 0., 0., 0.],
                [1., 1., 0., 0.],
                [1., 2., 1., 0.],
                [1., 3., 3., 1.],
            ];
            B[n as usize][k as usize]
        }
        let mut table = vec![Vec::new(); N_COEFFS];
        for j in 0..N_COEFFS {
            let mj = MultiIndex::from_flat(j).exponents();
            for k in 0..N_COEFFS {
                let mk = MultiIndex::from_flat(k).exponents();
                let sum = [mj[0] + mk[0], mj[1] + mk[1], mj[2] + mk[2], mj[3] + mk[3]];
                if sum.iter().sum::<u8>() > MAX_DEG {
                    continue;
                }
                let target = MultiIndex::new(sum).unwrap().flat();
                let w: f64 = (0..4).map(|i| binom(sum[i], mj[i])).product();
                table[target].push((j, k, w));
            }
        }
        table
    })
}

/// Analytic function tags accepted by [`Jet::compose_analytic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticFn {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
}

/// A degree-3 truncated Taylor expansion at a point.
///
/// `deg` tracks how many coefficient levels are still trustworthy: taking a
/// derivative consumes one level, and binary operations keep the minimum of
/// their operands. Coefficients above `deg` are kept at zero.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    c: [Complex64; N_COEFFS],
    deg: u8,
}

const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);

impl Jet {
    /// The zero jet at full degree.
    pub fn zero() -> Self {
        Self {
            c: [ZERO_C; N_COEFFS],
            deg: MAX_DEG,
        }
    }

    /// A constant: value `c`, all derivatives zero.
    pub fn constant(c: Complex64) -> Self {
        let mut j = Self::zero();
        j.c[0] = c;
        j
    }

    pub fn constant_re(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    /// The multiplicative unit.
    pub fn unit() -> Self {
        Self::constant_re(1.0)
    }

    /// A jet from raw derivative coefficients in storage order, with an
    /// explicit validity degree. Any coefficient array is a legitimate jet
    /// (it is the expansion of some polynomial), which makes this the entry
    /// point for synthetic test data and external derivative tables.
    pub fn from_raw(coeffs: [Complex64; N_COEFFS], degree: u8) -> Self {
        Self {
            c: coeffs,
            deg: degree.min(MAX_DEG),
        }
    }

    /// The coordinate function of the given axis expanded at `point`.
    pub fn coordinate(axis: usize, point: [f64; 4]) -> Result<Self, JetError> {
        if axis >= 4 {
            return Err(JetError::AxisOutOfRange(axis));
        }
        let mut j = Self::zero();
        j.c[0] = Complex64::new(point[axis], 0.0);
        j.c[1 + axis] = Complex64::new(1.0, 0.0);
        Ok(j)
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn degree(&self) -> u8 {
        self.deg
    }

    /// The stored mixed partial for an arbitrary multi-index.
    pub fn extract(&self, m: MultiIndex) -> Complex64 {
        self.c[m.flat()]
    }

    /// First derivative coefficient `∂_axis`.
    pub fn grad(&self, axis: usize) -> Complex64 {
        self.c[1 + axis]
    }

    /// Second derivative coefficient `∂_a ∂_b` (symmetric storage).
    pub fn hess(&self, a: usize, b: usize) -> Complex64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        self.c[5 + PAIRS.iter().position(|&p| p == (lo, hi)).unwrap()]
    }

    /// Raw access to the 35 coefficients in storage order.
    pub fn coeffs(&self) -> &[Complex64; N_COEFFS] {
        &self.c
    }

    /// True when every coefficient is finite.
    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn clamp_to_degree(&mut self) {
        for i in 0..N_COEFFS {
            if MultiIndex::from_flat(i).degree() > self.deg {
                self.c[i] = ZERO_C;
            }
        }
    }

    /// The jet of `∂_axis f`, one degree lower.
    ///
    /// Panics if the degree budget is exhausted — that is a pipeline-depth
    /// bug, not a data error.
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(
            self.deg > 0,
            "jet degree exhausted: cannot differentiate a degree-0 jet"
        );
        let mut out = Self::zero();
        out.deg = self.deg - 1;
        for i in 0..N_COEFFS {
            let m = MultiIndex::from_flat(i);
            if m.degree() > out.deg {
                continue;
            }
            let mut e = m.exponents();
            e[axis] += 1;
            out.c[i] = self.c[MultiIndex::new(e).unwrap().flat()];
        }
        out
    }

    /// Truncated Leibniz product.
    fn leibniz_mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        out.deg = self.deg.min(rhs.deg);
        for (target, splits) in leibniz_table().iter().enumerate() {
            let mut acc = ZERO_C;
            for &(j, k, w) in splits {
                acc += self.c[j] * rhs.c[k] * w;
            }
            out.c[target] = acc;
        }
        out.clamp_to_degree();
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        for c in out.c.iter_mut() {
            *c *= s;
        }
        out
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Truncated series for `1/self`; fails on zero value part.
    pub fn recip(&self) -> Result<Self, JetError> {
        let a0 = self.c[0];
        if a0.norm() == 0.0 {
            return Err(JetError::Singular("recip"));
        }
        // 1/(a0 + s) = (1/a0)(1 - u + u² - u³), u = s/a0, s nilpotent.
        let mut s = *self;
        s.c[0] = ZERO_C;
        let inv0 = a0.inv();
        let u = s.scale(inv0);
        let mut out = Jet::unit() - u;
        let u2 = u * u;
        out = out + u2;
        out = out - u2 * u;
        Ok(out.scale(inv0))
    }

    /// Integer power by repeated multiplication; `n = 0` gives the unit jet.
    pub fn pow_int(&self, n: u32) -> Self {
        let mut out = Jet::unit();
        out.deg = self.deg;
        out.clamp_to_degree();
        for _ in 0..n {
            out = out * *self;
        }
        out
    }

    /// Composition `f ∘ self` for an analytic `f`, via the nilpotent series
    /// `f(a₀) + f′(a₀)s + f″(a₀)s²/2 + f‴(a₀)s³/6` with `s = self − a₀`.
    pub fn compose_analytic(&self, f: AnalyticFn) -> Result<Self, JetError> {
        let a0 = self.c[0];
        let d: [Complex64; 4] = match f {
            AnalyticFn::Sin => [a0.sin(), a0.cos(), -a0.sin(), -a0.cos()],
            AnalyticFn::Cos => [a0.cos(), -a0.sin(), -a0.cos(), a0.sin()],
            AnalyticFn::Sinh => [a0.sinh(), a0.cosh(), a0.sinh(), a0.cosh()],
            AnalyticFn::Cosh => [a0.cosh(), a0.sinh(), a0.cosh(), a0.sinh()],
            AnalyticFn::Exp => {
                let e = a0.exp();
                [e, e, e, e]
            }
            AnalyticFn::Ln => {
                if a0.norm() == 0.0 {
                    return Err(JetError::Domain { func: "ln" });
                }
                let r = a0.inv();
                [a0.ln(), r, -r * r, r * r * r * 2.0]
            }
            AnalyticFn::Sqrt => {
                if a0.norm() == 0.0 {
                    return Err(JetError::Domain { func: "sqrt" });
                }
                let v = a0.sqrt();
                let vi = v.inv();
                [
                    v,
                    vi * 0.5,
                    -vi * vi * vi * 0.25,
                    vi * vi * vi * vi * vi * 0.375,
                ]
            }
        };
        let mut s = *self;
        s.c[0] = ZERO_C;
        // Horner in the truncated ring.
        let mut out = Jet::constant(d[3] / 6.0);
        out.deg = self.deg;
        out.clamp_to_degree();
        out = s * out + Jet::constant(d[2] / 2.0);
        out = s * out + Jet::constant(d[1]);
        out = s * out + Jet::constant(d[0]);
        out.deg = self.deg;
        out.clamp_to_degree();
        Ok(out)
    }

    /// Coefficient-wise real part. Valid because coordinates are real, so
    /// differentiation commutes with Re.
    pub fn re(&self) -> Self {
        let mut out = *self;
        for c in out.c.iter_mut() {
            *c = Complex64::new(c.re, 0.0);
        }
        out
    }

    /// Coefficient-wise imaginary part.
    pub fn im(&self) -> Self {
        let mut out = *self;
        for c in out.c.iter_mut() {
            *c = Complex64::new(c.im, 0.0);
        }
        out
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        for c in out.c.iter_mut() {
            *c = c.conj();
        }
        out
    }

    /// Largest coefficient magnitude (across all stored levels).
    pub fn max_coeff_norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut out = Jet::zero();
        out.deg = self.deg.min(rhs.deg);
        for i in 0..N_COEFFS {
            out.c[i] = self.c[i] + rhs.c[i];
        }
        out.clamp_to_degree();
        out
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let mut out = Jet::zero();
        out.deg = self.deg.min(rhs.deg);
        for i in 0..N_COEFFS {
            out.c[i] = self.c[i] - rhs.c[i];
        }
        out.clamp_to_degree();
        out
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale_re(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.leibniz_mul(&rhs)
    }
}

/// Central-difference estimate of `∂^m f` at `point` with one Richardson
/// extrapolation step: `(4·D(h/2) − D(h)) / 3`, giving O(h⁴) truncation.
///
/// This is the independent derivative oracle used by the acceptance tests and
/// the CLI `oracle` subcommand; it never touches jet arithmetic.
pub fn finite_difference_oracle<F>(f: F, point: [f64; 4], m: MultiIndex, h: f64) -> Complex64
where
    F: Fn([f64; 4]) -> Complex64,
{
    finite_difference_oracle_aniso(f, point, m, [h; 4])
}

/// `finite_difference_oracle` with an independent step per axis.
///
/// Truncation error is relative to the local length scale of the function, so
/// a coordinate whose scale shrinks toward a singular locus (the radius of a
/// cylindrical-type chart, where pre-potentials behave like powers of r) needs
/// a step proportional to that scale to keep the relative error uniform.
pub fn finite_difference_oracle_aniso<F>(
    f: F,
    point: [f64; 4],
    m: MultiIndex,
    steps: [f64; 4],
) -> Complex64
where
    F: Fn([f64; 4]) -> Complex64,
{
    fn stencil(order: u8, h: f64) -> Vec<(f64, f64)> {
        // (offset multiple of h, weight)
        match order {
            0 => vec![(0.0, 1.0)],
            1 => vec![(1.0, 0.5 / h), (-1.0, -0.5 / h)],
            2 => vec![
                (1.0, 1.0 / (h * h)),
                (0.0, -2.0 / (h * h)),
                (-1.0, 1.0 / (h * h)),
            ],
            3 => {
                let w = 1.0 / (2.0 * h * h * h);
                vec![(2.0, w), (1.0, -2.0 * w), (-1.0, 2.0 * w), (-2.0, -w)]
            }
            _ => unreachable!("degree bounded at 3"),
        }
    }

    fn apply<F>(f: &F, point: [f64; 4], exps: [u8; 4], steps: [f64; 4], halve: bool) -> Complex64
    where
        F: Fn([f64; 4]) -> Complex64,
    {
        // Compose the per-axis stencils as an outer product of offsets.
        let mut terms: Vec<([f64; 4], f64)> = vec![(point, 1.0)];
        for axis in 0..4 {
            if exps[axis] == 0 {
                continue;
            }
            let h = if halve { steps[axis] / 2.0 } else { steps[axis] };
            let st = stencil(exps[axis], h);
            let mut next = Vec::with_capacity(terms.len() * st.len());
            for &(p, w) in &terms {
                for &(off, sw) in &st {
                    let mut q = p;
                    q[axis] += off * h;
                    next.push((q, w * sw));
                }
            }
            terms = next;
        }
        terms
            .iter()
            .map(|&(p, w)| f(p) * w)
            .fold(ZERO_C, |acc, v| acc + v)
    }

    let exps = m.exponents();
    let coarse = apply(&f, point, exps, steps, false);
    let fine = apply(&f, point, exps, steps, true);
    (fine * 4.0 - coarse) / 3.0
}
