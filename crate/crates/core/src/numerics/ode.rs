//! Adaptive Dormand-Prince 5(4) integration.

use super::NumericsError;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.y.last().expect("trajectory always holds the initial state")
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights are the last row of A; the difference to the embedded
// fourth-order solution:
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = rhs(t, y)` from `t0` to `t1`, recording the state at
/// each of `outputs` (which must lie in the span, ordered from `t0` toward
/// `t1`) and at `t1`. The first trajectory entry is the initial state.
///
/// Steps are accepted when the mixed error norm
/// `max_i |err_i| / (tol (1 + max(|y_i|, |y_new_i|)))` is at most one.
pub fn integrate_ode<F>(
    rhs: F,
    y0: &[f64],
    t0: f64,
    t1: f64,
    outputs: &[f64],
    tol: f64,
) -> Result<Trajectory, NumericsError>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let dim = y0.len();
    let span = t1 - t0;
    let dir = span.signum();
    let mut traj = Trajectory {
        t: vec![t0],
        y: vec![y0.to_vec()],
    };
    if span == 0.0 {
        return Ok(traj);
    }
    let mut targets: Vec<f64> = outputs
        .iter()
        .copied()
        .filter(|&s| (s - t0) * dir > 0.0 && (t1 - s) * dir > 0.0)
        .collect();
    targets.push(t1);

    let min_step = 1e-14 * span.abs();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    let mut h = dir * (span.abs() * 1e-3).min(tol.powf(0.2) * span.abs());
    rhs(t, &y, &mut k[0]);

    for &target in &targets {
        while (target - t) * dir > 0.0 {
            let remaining = target - t;
            let hit = h.abs() >= remaining.abs();
            let step = if hit { remaining } else { h };
            if step.abs() < min_step && !hit {
                return Err(NumericsError::StepUnderflow { t });
            }
            for s in 1..7 {
                for i in 0..dim {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += step * A[s][j] * kj[i];
                    }
                    stage[i] = acc;
                }
                rhs(t + C[s] * step, &stage, &mut k[s]);
            }
            // stage 6 evaluated at the fifth-order solution (FSAL)
            y_new.copy_from_slice(&stage);
            let mut err: f64 = 0.0;
            for i in 0..dim {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                let scale = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
                err = err.max((step * e).abs() / scale);
            }
            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                err = f64::INFINITY;
            }
            if err <= 1.0 {
                t = if hit { target } else { t + step };
                y.copy_from_slice(&y_new);
                let last = k[6].clone();
                k[0].copy_from_slice(&last);
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !hit {
                    h = step * grow;
                } else {
                    h = dir * h.abs().max(step.abs() * grow.min(1.0));
                }
            } else {
                let shrink = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
                h = step * shrink;
                if h.abs() < min_step {
                    return Err(NumericsError::StepUnderflow { t });
                }
            }
        }
        traj.t.push(t);
        traj.y.push(y.clone());
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E as EULER, PI};

    #[test]
    fn exponential() {
        let tr = integrate_ode(|_, y, d| d[0] = y[0], &[1.0], 0.0, 1.0, &[], 1e-12).unwrap();
        assert!((tr.last()[0] - EULER).abs() < 1e-10);
    }

    #[test]
    fn sine_as_system() {
        let tr = integrate_ode(
            |_, y, d| {
                d[0] = y[1];
                d[1] = -y[0];
            },
            &[0.0, 1.0],
            0.0,
            PI,
            &[],
            1e-12,
        )
        .unwrap();
        assert!(tr.last()[0].abs() < 1e-9);
    }

    #[test]
    fn blow_up_reports_step_underflow() {
        let r = integrate_ode(|_, y, d| d[0] = y[0] * y[0], &[1.0], 0.0, 2.0, &[], 1e-12);
        match r {
            Err(NumericsError::StepUnderflow { t }) => assert!((t - 1.0).abs() < 1e-3, "t={t}"),
            other => panic!("expected StepUnderflow, got {other:?}"),
        }
    }

    #[test]
    fn output_points_are_hit_exactly() {
        let outs = [0.25, 0.5, 0.75];
        let tr = integrate_ode(|_, y, d| d[0] = -y[0], &[1.0], 0.0, 1.0, &outs, 1e-12).unwrap();
        assert_eq!(tr.t, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        for (t, y) in tr.t.iter().zip(&tr.y) {
            assert!((y[0] - (-t).exp()).abs() < 1e-11);
        }
    }

    #[test]
    fn backward_integration() {
        let tr = integrate_ode(|_, y, d| d[0] = y[0], &[EULER], 1.0, 0.0, &[0.5], 1e-12).unwrap();
        assert!((tr.y[1][0] - 0.5f64.exp()).abs() < 1e-10);
        assert!((tr.last()[0] - 1.0).abs() < 1e-10);
    }
}
