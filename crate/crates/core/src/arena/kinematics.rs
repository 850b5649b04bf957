use core::f64::consts::{PI, TAU};

use super::config::ArenaConfig;

/// Mounting angles of the three tangential omni wheels in the body frame.
pub const WHEEL_ANGLES: [f64; 3] = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];

/// Body-frame twist `(vx, vy, omega)` from wheel rim speeds.
///
/// Wheel `i` at angle `a_i` drives tangentially, so its speed is
/// `-sin(a_i) vx + cos(a_i) vy + L omega`. For the symmetric 120 degree
/// layout the normal matrix is `diag(3/2, 3/2, 3 L^2)`, which gives the
/// closed-form inverse below.
pub fn body_twist(wheels: [f64; 3], body_radius: f64) -> (f64, f64, f64) {
    let mut vx = 0.0;
    let mut vy = 0.0;
    let mut sum = 0.0;
    for (v, a) in wheels.iter().zip(WHEEL_ANGLES) {
        vx -= libm::sin(a) * v;
        vy += libm::cos(a) * v;
        sum += v;
    }
    (2.0 / 3.0 * vx, 2.0 / 3.0 * vy, sum / (3.0 * body_radius))
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let r = libm::fmod(a, TAU);
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// One explicit Euler step: the body twist is rotated into the world frame
/// by the current heading, the heading advances by `omega * dt`, and the
/// position is clamped to the arena.
pub fn kinematics(cfg: &ArenaConfig, position: [f64; 2], heading: f64, wheels: [f64; 3]) -> ([f64; 2], f64) {
    let (vx, vy, omega) = body_twist(wheels, cfg.body_radius);
    let (s, c) = (libm::sin(heading), libm::cos(heading));
    let dt = cfg.time_step;
    let x = position[0] + (c * vx - s * vy) * dt;
    let y = position[1] + (s * vx + c * vy) * dt;
    let clamp = |v: f64| v.max(0.0).min(cfg.size);
    ([clamp(x), clamp(y)], wrap_angle(heading + omega * dt))
}
