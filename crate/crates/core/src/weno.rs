//! Non-oscillatory reconstruction.
//!
//! Two flavours live here:
//!
//! * pointwise interpolation at an arbitrary point of a cell `[x_i, x_{i+1}]`,
//!   used to evaluate the distribution function at characteristic foot points;
//!   `n = 1` is plain linear interpolation, `n = 2` blends the two parabolas on
//!   `{x_{i−1}, x_i, x_{i+1}}` and `{x_i, x_{i+1}, x_{i+2}}` (third order);
//! * fifth-order interface reconstruction of split fluxes for the conservative
//!   finite-difference transport term.
//!
//! Positions inside a cell are passed as the local coordinate
//! `θ = (ξ − x_i)/Δx ∈ [0, 1]`.

/// Regularization added to smoothness indicators.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Pointwise interpolation scheme at characteristic foot points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointwiseWeno {
    /// Two-point linear interpolation (`n = 1`).
    Linear,
    /// Third-order WENO on a four-point stencil (`n = 2`).
    Weno3 { eps: f64 },
}

impl PointwiseWeno {
    pub fn weno3() -> Self {
        PointwiseWeno::Weno3 {
            eps: DEFAULT_EPSILON,
        }
    }

    /// Substencil count `n`; the interpolant has degree `2n − 1`.
    pub fn substencils(&self) -> usize {
        match self {
            PointwiseWeno::Linear => 1,
            PointwiseWeno::Weno3 { .. } => 2,
        }
    }

    /// Stencil nodes needed to the left of the containing cell's left node.
    pub fn radius_left(&self) -> usize {
        self.substencils() - 1
    }

    /// Stencil nodes needed to the right of the containing cell's left node.
    pub fn radius_right(&self) -> usize {
        self.substencils()
    }

    /// Interpolate at local coordinate `theta` of the cell whose left node is
    /// `stencil[radius_left()]`. The stencil holds `2n` values.
    #[inline]
    pub fn interpolate(&self, stencil: &[f64], theta: f64) -> f64 {
        match *self {
            PointwiseWeno::Linear => {
                if theta == 0.0 {
                    stencil[0]
                } else {
                    stencil[0] + theta * (stencil[1] - stencil[0])
                }
            }
            PointwiseWeno::Weno3 { eps } => {
                if theta == 0.0 {
                    stencil[1]
                } else {
                    weno_interpolate([stencil[0], stencil[1], stencil[2], stencil[3]], theta, eps)
                }
            }
        }
    }
}

/// Linear weights of the third-order interpolation,
/// `l₁ = (x_{i+2} − ξ)/(3Δx)`, `l₂ = (ξ − x_{i−1})/(3Δx)`.
#[inline]
pub fn linear_weights(theta: f64) -> [f64; 2] {
    [(2.0 - theta) / 3.0, (theta + 1.0) / 3.0]
}

/// Smoothness indicators `β_k = ∫₀¹ (P_k')² + (P_k'')² dθ` of the two
/// parabolas for stencil values `f = (f_{i−1}, f_i, f_{i+1}, f_{i+2})`.
///
/// The mixed outer term is `13/6 f_{i−1}f_{i+1}`; with the `7/6` sometimes
/// printed the indicators would not vanish on constants.
#[inline]
pub fn smoothness_indicators_interp(f: [f64; 4]) -> [f64; 2] {
    let [fm, f0, fp, fpp] = f;
    let beta1 = 13.0 / 12.0 * fm * fm + 16.0 / 3.0 * f0 * f0 + 25.0 / 12.0 * fp * fp
        - 13.0 / 3.0 * fm * f0
        + 13.0 / 6.0 * fm * fp
        - 19.0 / 3.0 * f0 * fp;
    let beta2 = 13.0 / 12.0 * fpp * fpp + 16.0 / 3.0 * fp * fp + 25.0 / 12.0 * f0 * f0
        - 13.0 / 3.0 * fpp * fp
        + 13.0 / 6.0 * fpp * f0
        - 19.0 / 3.0 * f0 * fp;
    [beta1, beta2]
}

/// The two candidate parabolas evaluated at `theta`.
#[inline]
pub fn candidate_parabolas(f: [f64; 4], theta: f64) -> [f64; 2] {
    let [fm, f0, fp, fpp] = f;
    let p1 = f0 + 0.5 * theta * (fp - fm) + 0.5 * theta * theta * (fm - 2.0 * f0 + fp);
    let p2 = f0 + 0.5 * theta * (-3.0 * f0 + 4.0 * fp - fpp)
        + 0.5 * theta * theta * (f0 - 2.0 * fp + fpp);
    [p1, p2]
}

/// Nonlinear weights `w_k = α_k/Σα`, `α_k = l_k/(ε + β_k)²`.
#[inline]
pub fn nonlinear_weights(f: [f64; 4], theta: f64, eps: f64) -> [f64; 2] {
    let [l1, l2] = linear_weights(theta);
    let [b1, b2] = smoothness_indicators_interp(f);
    let a1 = l1 / ((eps + b1) * (eps + b1));
    let a2 = l2 / ((eps + b2) * (eps + b2));
    let s = a1 + a2;
    [a1 / s, a2 / s]
}

/// Third-order WENO value at `theta ∈ [0, 1]` from `(f_{i−1}, f_i, f_{i+1}, f_{i+2})`.
#[inline]
pub fn weno_interpolate(f: [f64; 4], theta: f64, eps: f64) -> f64 {
    let [w1, w2] = nonlinear_weights(f, theta, eps);
    let [p1, p2] = candidate_parabolas(f, theta);
    w1 * p1 + w2 * p2
}

/// Linear flux weights `d_{−1}, d_0, d_1` of the fifth-order reconstruction at
/// `x⁻_{i+1/2}`. The mirrored weights for `x⁺_{i+1/2}` are `d̃_l = d_{−l}`.
pub const FLUX_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Candidates, weights and combined value of one interface reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceValue {
    pub candidates: [f64; 3],
    pub smoothness: [f64; 3],
    pub weights: [f64; 3],
    pub value: f64,
}

/// Fifth-order reconstruction at `x⁻_{i+1/2}` from `(F̄_{i−2}, …, F̄_{i+2})`.
#[inline]
pub fn weno5_left(c: [f64; 5], eps: f64) -> InterfaceValue {
    let [fmm, fm, f0, fp, fpp] = c;
    let candidates = [
        1.0 / 3.0 * fmm - 7.0 / 6.0 * fm + 11.0 / 6.0 * f0,
        -1.0 / 6.0 * fm + 5.0 / 6.0 * f0 + 1.0 / 3.0 * fp,
        1.0 / 3.0 * f0 + 5.0 / 6.0 * fp - 1.0 / 6.0 * fpp,
    ];
    let sq = |x: f64| x * x;
    let smoothness = [
        13.0 / 12.0 * sq(fmm - 2.0 * fm + f0) + 0.25 * sq(fmm - 4.0 * fm + 3.0 * f0),
        13.0 / 12.0 * sq(fm - 2.0 * f0 + fp) + 0.25 * sq(fm - fp),
        13.0 / 12.0 * sq(f0 - 2.0 * fp + fpp) + 0.25 * sq(3.0 * f0 - 4.0 * fp + fpp),
    ];
    let mut alpha = [0.0; 3];
    for l in 0..3 {
        alpha[l] = FLUX_WEIGHTS[l] / sq(eps + smoothness[l]);
    }
    let s = alpha[0] + alpha[1] + alpha[2];
    let weights = [alpha[0] / s, alpha[1] / s, alpha[2] / s];
    let value = weights[0] * candidates[0] + weights[1] * candidates[1] + weights[2] * candidates[2];
    InterfaceValue {
        candidates,
        smoothness,
        weights,
        value,
    }
}

/// Fifth-order reconstruction at `x⁺_{i+1/2}` from `(F̄_{i−1}, …, F̄_{i+3})`,
/// the mirror image of [`weno5_left`].
#[inline]
pub fn weno5_right(c: [f64; 5], eps: f64) -> InterfaceValue {
    weno5_left([c[4], c[3], c[2], c[1], c[0]], eps)
}

/// Both one-sided values at `x_{i+1/2}` from `(F̄_{i−2}, …, F̄_{i+3})`.
pub fn weno5_interface_values(c: [f64; 6], eps: f64) -> (InterfaceValue, InterfaceValue) {
    (
        weno5_left([c[0], c[1], c[2], c[3], c[4]], eps),
        weno5_right([c[1], c[2], c[3], c[4], c[5]], eps),
    )
}

/// `(f̂_{i+1/2} − f̂_{i−1/2})/Δx` for `n + 1` interface fluxes, giving `n` values.
pub fn conservative_derivative(fluxes: &[f64], dx: f64) -> Vec<f64> {
    fluxes.windows(2).map(|w| (w[1] - w[0]) / dx).collect()
}
