//! Classical fourth-order Runge-Kutta stepping for `dx/dt = v(x, t)`.

use crate::error::{Error, Result};

/// One RK4 step of size `h`. A non-finite velocity at any stage ends the
/// trajectory with `Error::Trajectory`.
pub fn rk4_step<V: FnMut(f64, f64) -> f64>(mut v: V, x: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("step size must be positive, got {h}")));
    }
    let stage = |val: f64, x: f64, t: f64| -> Result<f64> {
        if val.is_finite() {
            Ok(val)
        } else {
            Err(Error::Trajectory {
                t,
                x,
                reason: "non-finite velocity".into(),
            })
        }
    };
    let k1 = stage(v(x, t), x, t)?;
    let x2 = x + 0.5 * h * k1;
    let k2 = stage(v(x2, t + 0.5 * h), x2, t + 0.5 * h)?;
    let x3 = x + 0.5 * h * k2;
    let k3 = stage(v(x3, t + 0.5 * h), x3, t + 0.5 * h)?;
    let x4 = x + h * k3;
    let k4 = stage(v(x4, t + h), x4, t + h)?;
    Ok(x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

/// Integrates from `t0` to `t1` with steps no larger than `h`, landing
/// exactly on `t1`.
pub fn integrate_rk4<V: FnMut(f64, f64) -> f64>(mut v: V, x0: f64, t0: f64, t1: f64, h: f64) -> Result<f64> {
    if t1 < t0 {
        return Err(Error::domain("integration must run forward in time"));
    }
    let steps = ((t1 - t0) / h).ceil().max(1.0) as usize;
    let dt = (t1 - t0) / steps as f64;
    let mut x = x0;
    for i in 0..steps {
        let t = t0 + i as f64 * dt;
        x = rk4_step(&mut v, x, t, dt)?;
    }
    Ok(x)
}
