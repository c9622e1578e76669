//! Vectors, rotations and refraction at the liquid surface.
//!
//! Frames: the room frame has `z` pointing up toward the ceiling. The
//! receiver frame is reached by rotating `theta_r` about `z` and then
//! `phi_r` about `y` (passive rotations). The liquid-surface frame is a
//! further tilt of `psi_y` / `psi_x` relative to the receiver frame.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn row(&self, i: usize) -> Vec3 {
        let r = self.0[i];
        Vec3::new(r[0], r[1], r[2])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3::new(self.0[0][j], self.0[1][j], self.0[2][j])
    }

    /// Largest absolute entry of `MᵀM − I`.
    pub fn orthonormality_defect(&self) -> f64 {
        let p = self.transpose() * *self;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p.0[i][j] - target).abs());
            }
        }
        worst
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(out)
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Passive (frame) rotation about a coordinate axis.
///
/// `R_y(π/2)` maps `[0,0,1]` to `[−1,0,0]`, so `R_y(φ)·R_z(θ)` is the
/// room-to-receiver transform.
pub fn axis_rotation(axis: Axis, angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    match axis {
        Axis::X => Mat3([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]]),
        Axis::Y => Mat3([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]]),
        Axis::Z => Mat3([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]]),
    }
}

/// Room-to-receiver rotation for receiver azimuth `theta_r` and polar angle `phi_r`.
pub fn receiver_rotation(theta_r: f64, phi_r: f64) -> Mat3 {
    axis_rotation(Axis::Y, phi_r) * axis_rotation(Axis::Z, theta_r)
}

/// Receiver normal in the room frame.
pub fn receiver_normal(theta_r: f64, phi_r: f64) -> Vec3 {
    let (st, ct) = theta_r.sin_cos();
    let (sp, cp) = phi_r.sin_cos();
    Vec3::new(ct * sp, st * sp, cp)
}

/// Receiver-to-surface rotation for liquid-surface tilts `psi_x`, `psi_y`.
pub fn lens_rotation(psi_x: f64, psi_y: f64) -> Mat3 {
    let (sx, cx) = psi_x.sin_cos();
    let (sy, cy) = psi_y.sin_cos();
    Mat3([
        [cy, sy * sx, sy * cx],
        [0.0, cx, -sx],
        [-sy, cy * sx, cy * cx],
    ])
}

/// Liquid-surface normal in the room frame.
pub fn lens_normal(theta_r: f64, phi_r: f64, psi_x: f64, psi_y: f64) -> Vec3 {
    let (st, ct) = theta_r.sin_cos();
    let (sp, cp) = phi_r.sin_cos();
    let (sx, cx) = psi_x.sin_cos();
    let (sy, cy) = psi_y.sin_cos();
    Vec3::new(
        ct * sp * cy * cx - st * cy * sx - ct * cp * sy,
        st * sp * cy * cx + ct * cy * sx - st * cp * sy,
        cp * cy * cx + sp * sy,
    )
}

/// Express a room-frame direction in the receiver frame.
pub fn to_receiver_frame(v: Vec3, theta_r: f64, phi_r: f64) -> Vec3 {
    receiver_rotation(theta_r, phi_r) * v
}

/// Unit vector from the receiver at `p_r` toward the transmitter at `p_l`.
pub fn unit_toward_transmitter(p_l: Vec3, p_r: Vec3) -> Result<Vec3> {
    (p_l - p_r).normalized().ok_or(Error::DegenerateGeometry)
}

/// Direction of the ray transmitted into the liquid.
///
/// `eta_len` is the surface normal (pointing out of the liquid) and
/// `eta_tr` points from the surface back toward the source. The returned
/// unit vector points along the propagation direction inside the liquid.
pub fn refract(eta_len: Vec3, eta_tr: Vec3, n_l: f64) -> Result<Vec3> {
    let cos_a = eta_len.dot(eta_tr);
    if cos_a <= 0.0 {
        return Err(Error::IncidentFromBelow(cos_a));
    }
    let cos_a = cos_a.min(1.0);
    let sin2 = (1.0 - cos_a * cos_a).max(0.0);
    let k = cos_a - (n_l * n_l - sin2).sqrt();
    Ok((eta_len * k - eta_tr) * (1.0 / n_l))
}

/// Receiver position and orientation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    /// Horizontal distance from the access-point axis (m).
    pub r: f64,
    /// Azimuth of the receiver position (rad).
    pub theta: f64,
    /// Receiver azimuth (rad).
    pub theta_r: f64,
    /// Receiver polar angle (rad).
    pub phi_r: f64,
}

impl Pose {
    pub fn new(r: f64, theta: f64, theta_r: f64, phi_r: f64) -> Self {
        Self {
            r,
            theta,
            theta_r,
            phi_r,
        }
    }

    /// Receiver position in the room frame, on the receiver plane `z = 0`.
    pub fn position(&self) -> Vec3 {
        let (s, c) = self.theta.sin_cos();
        Vec3::new(self.r * c, self.r * s, 0.0)
    }

    pub fn normal(&self) -> Vec3 {
        receiver_normal(self.theta_r, self.phi_r)
    }

    /// Unit vector toward an access point mounted `ap_height` above the receiver plane.
    pub fn toward_ap(&self, ap_height: f64) -> Result<Vec3> {
        unit_toward_transmitter(Vec3::new(0.0, 0.0, ap_height), self.position())
    }
}
