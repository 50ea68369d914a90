//! Classical fixed-step fourth-order Runge-Kutta.

use std::ops::{Add, Mul};

/// One RK4 step of `y' = f(t, y)` from `t` to `t + h`.
#[inline]
pub fn rk4_step<T, F>(f: &F, t: f64, y: &T, h: f64) -> T
where
    T: Clone + Add<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64, &T) -> T,
{
    let half = 0.5 * h;
    let k1 = f(t, y);
    let k2 = f(t + half, &(y.clone() + k1.clone() * half));
    let k3 = f(t + half, &(y.clone() + k2.clone() * half));
    let k4 = f(t + h, &(y.clone() + k3.clone() * h));
    y.clone() + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector2;

    #[test]
    fn harmonic_oscillator_fourth_order() {
        let rhs = |_t: f64, y: &Vector2<f64>| Vector2::new(y[1], -y[0]);
        let err = |n: usize| {
            let h = 1.0 / n as f64;
            let mut y = Vector2::new(1.0, 0.0);
            for i in 0..n {
                y = rk4_step(&rhs, i as f64 * h, &y, h);
            }
            (y[0] - 1f64.cos()).abs()
        };
        let order = (err(20) / err(40)).log2();
        assert!((3.8..4.2).contains(&order), "order {order}");
    }
}
