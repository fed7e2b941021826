//! Library results against independently written reference computations:
//! exact rational arithmetic for the reconstruction formulas, a bisection
//! Riemann solver, and a hand-rolled first-order step.

use num_rational::Ratio;

use bgk_core::dirk::{ButcherTableau, TableauKind};
use bgk_core::harness::riemann::{EulerState, RiemannSolution, GAMMA_1D};
use bgk_core::phase_grid::{
    fields_from_moments, moments, DistributionFunction, MacroState, Maxwellian, PhaseGrid, TauModel,
};
use bgk_core::sl_bgk::{BoundaryCondition, SemiLagrangian};
use bgk_core::weno::{
    smoothness_indicators_interp, weno5_left, weno_interpolate, PointwiseWeno,
};

type Q = Ratio<i64>;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Coefficients (ascending powers of θ) of the parabola through
/// `(t0, y0), (t0+1, y1), (t0+2, y2)`.
fn parabola(t0: i64, y: [Q; 3]) -> [Q; 3] {
    // Newton form: y0 + d1 (θ − t0) + d2 (θ − t0)(θ − t0 − 1)
    let d1 = y[1] - y[0];
    let d2 = (y[2] - q(2) * y[1] + y[0]) / q(2);
    let t0 = q(t0);
    [
        y[0] - d1 * t0 + d2 * t0 * (t0 + q(1)),
        d1 - d2 * (q(2) * t0 + q(1)),
        d2,
    ]
}

/// `∫₀¹ (P′)² + (P″)² dθ` of a parabola, exactly.
fn smoothness_exact(p: [Q; 3]) -> Q {
    // P′ = p1 + 2 p2 θ, P″ = 2 p2
    let (a, b) = (p[1], q(2) * p[2]);
    a * a + a * b + b * b / q(3) + b * b
}

#[test]
fn pointwise_indicators_match_exact_integrals() {
    let samples: [[i64; 4]; 6] = [
        [3, 3, 3, 3],
        [0, 1, 2, 3],
        [0, 1, 4, 9],
        [2, -1, 5, 0],
        [0, 0, 0, 7],
        [-4, 6, 1, 1],
    ];
    for s in samples {
        let y = s.map(q);
        let b1 = smoothness_exact(parabola(-1, [y[0], y[1], y[2]]));
        let b2 = smoothness_exact(parabola(0, [y[1], y[2], y[3]]));
        let got = smoothness_indicators_interp(s.map(|v| v as f64));
        for (g, e) in got.iter().zip([b1, b2]) {
            assert!((g - to_f64(e)).abs() <= 1e-13 * (1.0 + g.abs()), "{s:?}: {g} vs {e}");
        }
    }
    // linear data: both indicators equal the squared slope
    for b in smoothness_indicators_interp([0.0, 1.0, 2.0, 3.0]) {
        assert!((b - 1.0).abs() <= 1e-13, "{b}");
    }
    // a jump in the last value only shows up in the right indicator
    let [b1, b2] = smoothness_indicators_interp([0.0, 0.0, 0.0, 1.0]);
    assert!(b1.abs() <= 1e-15);
    assert!(b2 > 1.0);
}

#[test]
fn pointwise_weno_matches_exact_evaluation() {
    let eps = Q::new(1, 1_000_000);
    for s in [[0i64, 0, 1, 1], [1, 2, 4, 3], [5, -2, 0, 1]] {
        for (tn, td) in [(1i64, 4i64), (1, 2), (3, 4)] {
            let y = s.map(q);
            let theta = Q::new(tn, td);
            let p1 = parabola(-1, [y[0], y[1], y[2]]);
            let p2 = parabola(0, [y[1], y[2], y[3]]);
            let eval = |p: [Q; 3]| p[0] + p[1] * theta + p[2] * theta * theta;
            // α_k = l_k / (ε + β_k)² with l₁ = (2 − θ)/3, l₂ = (θ + 1)/3
            let l = [(q(2) - theta) / q(3), (theta + q(1)) / q(3)];
            let d1 = eps + smoothness_exact(p1);
            let d2 = eps + smoothness_exact(p2);
            // normalize in floating point: the exact denominators overflow i64
            let a1 = to_f64(l[0]) / to_f64(d1 * d1);
            let a2 = to_f64(l[1]) / to_f64(d2 * d2);
            let expected = (a1 * to_f64(eval(p1)) + a2 * to_f64(eval(p2))) / (a1 + a2);
            let got = weno_interpolate(s.map(|v| v as f64), to_f64(theta), 1e-6);
            assert!((got - expected).abs() <= 1e-13, "{s:?} θ={theta}: {got} vs {expected}");
        }
    }
    // step data at the midpoint: bounded and near the ENO choice
    let mid = weno_interpolate([0.0, 0.0, 1.0, 1.0], 0.5, 1e-6);
    assert!((0.0..=1.0).contains(&mid));
    assert!((mid - 0.375).abs() <= 0.15);
}

/// Cell averages over `[k − ½, k + ½]` of a cubic with integer coefficients.
fn cell_average(c: [i64; 4], k: i64) -> Q {
    // antiderivative of Σ c_m x^m
    let anti = |x: Q| {
        let mut s = q(0);
        let mut pow = x;
        for (m, &cm) in c.iter().enumerate() {
            s += q(cm) * pow / q(m as i64 + 1);
            pow *= x;
        }
        s
    };
    let h = Q::new(1, 2);
    anti(q(k) + h) - anti(q(k) - h)
}

#[test]
fn flux_candidates_are_exact_on_quadratic_averages() {
    for c in [[1i64, 0, 0, 0], [2, -3, 0, 0], [1, 2, 5, 0], [-4, 1, -2, 0]] {
        let avg: Vec<Q> = (-2..=2).map(|k| cell_average(c, k)).collect();
        let point = {
            let x = Q::new(1, 2);
            q(c[0]) + q(c[1]) * x + q(c[2]) * x * x
        };
        let r = weno5_left(std::array::from_fn(|k| to_f64(avg[k])), 1e-6);
        for cand in r.candidates {
            assert!((cand - to_f64(point)).abs() <= 1e-13, "{c:?}: {cand} vs {point}");
        }
        assert!((r.value - to_f64(point)).abs() <= 1e-13);
    }
    // the combination with weights (1/10, 6/10, 3/10) is fifth order:
    // exact on a cubic's averages only through the linear weights
    let c = [0i64, 0, 0, 1];
    let avg: Vec<Q> = (-2..=2).map(|k| cell_average(c, k)).collect();
    let cands = [
        Q::new(1, 3) * avg[0] - Q::new(7, 6) * avg[1] + Q::new(11, 6) * avg[2],
        -Q::new(1, 6) * avg[1] + Q::new(5, 6) * avg[2] + Q::new(1, 3) * avg[3],
        Q::new(1, 3) * avg[2] + Q::new(5, 6) * avg[3] - Q::new(1, 6) * avg[4],
    ];
    let combined = Q::new(1, 10) * cands[0] + Q::new(6, 10) * cands[1] + Q::new(3, 10) * cands[2];
    assert_eq!(combined, Q::new(1, 8));
}

fn bisection_star(left: EulerState, right: EulerState, gamma: f64) -> (f64, f64) {
    let branch = |p: f64, s: EulerState| {
        let a = s.sound_speed(gamma);
        if p > s.p {
            let ak = 2.0 / ((gamma + 1.0) * s.rho);
            let bk = (gamma - 1.0) / (gamma + 1.0) * s.p;
            (p - s.p) * (ak / (p + bk)).sqrt()
        } else {
            2.0 * a / (gamma - 1.0) * ((p / s.p).powf((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        }
    };
    let g = |p: f64| branch(p, left) + branch(p, right) + right.u - left.u;
    let (mut lo, mut hi) = (1e-12, 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    (p, 0.5 * (left.u + right.u) + 0.5 * (branch(p, right) - branch(p, left)))
}

#[test]
fn riemann_star_state_matches_bisection() {
    let cases = [
        (EulerState::new(1.0, 0.0, 1.0), EulerState::new(0.125, 0.0, 0.1)),
        (EulerState::new(1.0, 0.5, 1.0), EulerState::new(1.0, -0.5, 1.0)),
        (EulerState::new(1.0, -0.3, 0.4), EulerState::new(0.5, 0.3, 0.4)),
        (EulerState::new(2.0, 0.0, 3.0), EulerState::new(1.0, 0.0, 0.5)),
    ];
    for (l, r) in cases {
        let sol = RiemannSolution::solve(l, r, GAMMA_1D).unwrap();
        let (p, u) = bisection_star(l, r, GAMMA_1D);
        assert!((sol.p_star - p).abs() <= 1e-10 * p, "{l:?} {r:?}: {} vs {p}", sol.p_star);
        assert!((sol.u_star - u).abs() <= 1e-10, "{l:?} {r:?}: {} vs {u}", sol.u_star);
    }
    // Rankine–Hugoniot across the right shock of the Sod data
    let (l, r) = (EulerState::new(1.0, 0.0, 1.0), EulerState::new(0.125, 0.0, 0.1));
    let sol = RiemannSolution::solve(l, r, GAMMA_1D).unwrap();
    let bgk_core::harness::riemann::Wave::Shock { speed: s } = sol.right_wave else {
        panic!("expected a right shock");
    };
    let rs = sol.rho_star_right;
    assert!((rs * (sol.u_star - s) - r.rho * (r.u - s)).abs() <= 1e-10);
    // isentropic left fan: p/ρ^γ unchanged
    let entropy = |p: f64, rho: f64| p / rho.powf(GAMMA_1D);
    assert!((entropy(sol.p_star, sol.rho_star_left) - entropy(l.p, l.rho)).abs() <= 1e-10);
}

#[test]
fn first_order_step_matches_hand_computation() {
    let n = 12;
    let g = PhaseGrid::new(0.0, 1.0, n, 2.0, 4, 4).unwrap();
    let (dt, tau) = (0.07, 0.03);
    let init = |x: f64, v: f64| {
        let rho = 1.0 + 0.3 * (std::f64::consts::TAU * x).sin();
        Maxwellian::new(MacroState::new(rho, 0.2, 0.8)).unwrap().eval(v) * (1.0 + 0.1 * v * x)
    };
    let f = DistributionFunction::from_fn(&g, init);
    let sl = SemiLagrangian::new(
        g.clone(),
        ButcherTableau::new(TableauKind::S1),
        BoundaryCondition::Periodic,
        TauModel::Constant(tau),
        PointwiseWeno::Linear,
    );
    let got = sl.advance_step(&f, dt).unwrap();

    let dx = 1.0 / n as f64;
    let vel = g.velocities().to_vec();
    for i in 0..n {
        // free transport with periodic linear interpolation
        let mut tilde = Vec::new();
        for (j, &v) in vel.iter().enumerate() {
            let xi = (i as f64 * dx - v * dt) / dx;
            let k = xi.floor();
            let theta = xi - k;
            let at = |m: f64| f.get((m as isize).rem_euclid(n as isize), j);
            tilde.push((1.0 - theta) * at(k) + theta * at(k + 1.0));
        }
        // implicit relaxation with the Maxwellian of the transported moments
        let state = fields_from_moments(moments(&tilde, &g)).unwrap();
        let m = Maxwellian::new(state).unwrap();
        for (j, &v) in vel.iter().enumerate() {
            let expected = (tau * tilde[j] + dt * m.eval(v)) / (tau + dt);
            let actual = got.get(i as isize, j);
            assert!((actual - expected).abs() <= 1e-14, "node {i} velocity {j}: {actual} vs {expected}");
        }
    }
}
