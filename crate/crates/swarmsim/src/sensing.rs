//! Simulated bearing/distance sensor and the preprocessing that turns a
//! local spherical reading back into a global Cartesian relative position.
//!
//! The pipeline per directed pair (i measures j): rotate the global
//! difference into frame i, convert to (r, theta, phi), and invert the two
//! steps on the receiving side with the same attitude estimate.

use crate::numerics::Vec3;
use nalgebra::{Matrix3, Rotation3, Unit};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SensingError {
    #[error("coincident positions: bearing undefined at zero range")]
    CoincidentPositions,
    #[error("matrix is not a rotation: {0}")]
    NotARotation(String),
}

/// Bearing and distance reading in the observer's body frame:
/// range r >= 0, inclination theta in [0, pi], azimuth phi in (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalReading {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Body-to-global rotation estimate of one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attitude {
    r: Matrix3<f64>,
}

impl Attitude {
    pub fn identity() -> Self {
        Self {
            r: Matrix3::identity(),
        }
    }

    /// Pure yaw (rotation about the global z axis).
    pub fn yaw(angle: f64) -> Self {
        Self {
            r: Rotation3::from_axis_angle(&Vec3::z_axis(), angle).into_inner(),
        }
    }

    /// Validates orthonormality (`R^T R = I` within 1e-10) and a +1
    /// determinant before accepting an arbitrary matrix.
    pub fn from_matrix(r: Matrix3<f64>) -> Result<Self, SensingError> {
        let gram_err = (r.transpose() * r - Matrix3::identity()).amax();
        if gram_err > 1e-10 {
            return Err(SensingError::NotARotation(format!(
                "R^T R deviates from identity by {gram_err:.3e}"
            )));
        }
        let det = r.determinant();
        if (det - 1.0).abs() > 1e-10 {
            return Err(SensingError::NotARotation(format!("det = {det}")));
        }
        Ok(Self { r })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.r
    }

    /// Global -> body.
    pub fn to_local(&self, v: &Vec3) -> Vec3 {
        self.r.transpose() * v
    }

    /// Body -> global.
    pub fn to_global(&self, v: &Vec3) -> Vec3 {
        self.r * v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementFrame {
    /// Body frame of the observing agent.
    Local,
    Global,
}

/// A relative position measurement tagged with its frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeMeasurement {
    pub observer_id: usize,
    pub target_id: usize,
    pub value: Vec3,
    pub frame: MeasurementFrame,
}

impl RelativeMeasurement {
    pub fn new(observer_id: usize, target_id: usize, value: Vec3, frame: MeasurementFrame) -> Self {
        assert_ne!(observer_id, target_id, "self-measurement is meaningless");
        Self {
            observer_id,
            target_id,
            value,
            frame,
        }
    }
}

/// Simulates the bearing/distance sensor of an agent at `p_i` observing a
/// target at `p_j`: the global difference is rotated into the observer's
/// body frame and expressed in spherical coordinates.
///
/// Azimuth uses the two-argument arctangent so the quadrant survives the
/// roundtrip; phi is 0 by convention when the target sits on the body z
/// axis (x = y = 0).
pub fn simulate_sensor(
    p_i: &Vec3,
    p_j: &Vec3,
    att_i: &Attitude,
) -> Result<SphericalReading, SensingError> {
    let diff_global = p_j - p_i;
    let local = att_i.to_local(&diff_global);
    let r = local.norm();
    if r == 0.0 {
        return Err(SensingError::CoincidentPositions);
    }
    let theta = (local.z / r).clamp(-1.0, 1.0).acos();
    let phi = if local.x == 0.0 && local.y == 0.0 {
        0.0
    } else {
        local.y.atan2(local.x)
    };
    Ok(SphericalReading { r, theta, phi })
}

/// Spherical to body-frame Cartesian:
/// `(r sin(theta) cos(phi), r sin(theta) sin(phi), r cos(theta))`.
pub fn spherical_to_local(s: &SphericalReading) -> Vec3 {
    Vec3::new(
        s.r * s.theta.sin() * s.phi.cos(),
        s.r * s.theta.sin() * s.phi.sin(),
        s.r * s.theta.cos(),
    )
}

/// Body-frame Cartesian to global through the attitude estimate.
pub fn local_to_global(v_local: &Vec3, att: &Attitude) -> Vec3 {
    att.to_global(v_local)
}

/// Composes the true attitude with a small random rotation: axis uniform on
/// the sphere, angle ~ N(0, std). The result stays orthonormal because it is
/// built from rotations only.
pub fn attitude_with_noise<R: Rng>(
    true_att: &Attitude,
    angle_noise_std: f64,
    rng: &mut R,
) -> Attitude {
    assert!(angle_noise_std >= 0.0);
    if angle_noise_std == 0.0 {
        return *true_att;
    }
    let axis = loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0f64),
            rng.gen_range(-1.0..1.0f64),
            rng.gen_range(-1.0..1.0f64),
        );
        let n = v.norm();
        if n > 1e-6 && n <= 1.0 {
            break v / n;
        }
    };
    // Box-Muller sample for the rotation angle.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let angle = angle_noise_std * (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
    let perturb = Rotation3::from_axis_angle(&Unit::new_unchecked(axis), angle);
    Attitude {
        r: true_att.r * perturb.into_inner(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn rand_vec3(rng: &mut ChaCha8Rng, scale: f64) -> Vec3 {
        Vec3::new(
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
        )
    }

    fn rand_attitude(rng: &mut ChaCha8Rng) -> Attitude {
        let axis = loop {
            let v = rand_vec3(rng, 1.0);
            if v.norm() > 1e-3 {
                break v.normalize();
            }
        };
        let angle = rng.gen_range(-PI..PI);
        Attitude::from_matrix(
            Rotation3::from_axis_angle(&Unit::new_unchecked(axis), angle).into_inner(),
        )
        .unwrap()
    }

    #[test]
    fn axis_aligned_readings() {
        let id = Attitude::identity();
        let s = simulate_sensor(&Vec3::zeros(), &Vec3::new(0.0, 0.0, 1.0), &id).unwrap();
        assert_relative_eq!(s.r, 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.theta, 0.0, epsilon = 1e-12);
        assert_relative_eq!(s.phi, 0.0, epsilon = 1e-12);

        let s = simulate_sensor(&Vec3::zeros(), &Vec3::new(1.0, 0.0, 0.0), &id).unwrap();
        assert_relative_eq!(s.r, 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.theta, FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(s.phi, 0.0, epsilon = 1e-12);

        let s = simulate_sensor(&Vec3::zeros(), &Vec3::new(1.0, 1.0, 2.0_f64.sqrt()), &id).unwrap();
        assert_relative_eq!(s.r, 2.0, epsilon = 1e-12);
        assert_relative_eq!(s.theta, FRAC_PI_4, epsilon = 1e-12);
        assert_relative_eq!(s.phi, FRAC_PI_4, epsilon = 1e-12);
    }

    #[test]
    fn coincident_positions_rejected() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(
            simulate_sensor(&p, &p, &Attitude::identity()),
            Err(SensingError::CoincidentPositions)
        );
    }

    #[test]
    fn spherical_to_local_axes() {
        let up = SphericalReading {
            r: 1.0,
            theta: 0.0,
            phi: 2.3,
        };
        assert!((spherical_to_local(&up) - Vec3::new(0.0, 0.0, 1.0)).norm() <= 1e-12);

        let y = SphericalReading {
            r: 2.0,
            theta: FRAC_PI_2,
            phi: FRAC_PI_2,
        };
        assert!((spherical_to_local(&y) - Vec3::new(0.0, 2.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn yaw_rotates_x_to_y() {
        let att = Attitude::yaw(FRAC_PI_2);
        let v = local_to_global(&Vec3::new(1.0, 0.0, 0.0), &att);
        assert!((v - Vec3::new(0.0, 1.0, 0.0)).norm() <= 1e-12);

        let roundtrip = att.to_global(&att.to_local(&Vec3::new(0.3, -0.7, 0.2)));
        assert!((roundtrip - Vec3::new(0.3, -0.7, 0.2)).norm() <= 1e-12);
    }

    #[test]
    fn pipeline_reconstructs_relative_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p_i = rand_vec3(&mut rng, 3.0);
            let mut p_j = rand_vec3(&mut rng, 3.0);
            if (p_j - p_i).norm() < 1e-3 {
                p_j.x += 1.0;
            }
            let att = rand_attitude(&mut rng);
            let reading = simulate_sensor(&p_i, &p_j, &att).unwrap();
            assert!(reading.theta >= 0.0 && reading.theta <= PI);
            assert!(reading.phi > -PI - 1e-12 && reading.phi <= PI + 1e-12);
            assert_relative_eq!(
                spherical_to_local(&reading).norm(),
                reading.r,
                epsilon = 1e-12
            );
            let reconstructed = local_to_global(&spherical_to_local(&reading), &att);
            assert!(
                (reconstructed - (p_j - p_i)).amax() <= 1e-12,
                "roundtrip error {:.3e}",
                (reconstructed - (p_j - p_i)).amax()
            );
        }
    }

    #[test]
    fn attitude_noise_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = Attitude::yaw(0.4);
        assert_eq!(attitude_with_noise(&base, 0.0, &mut rng), base);

        let mut angle_sum = 0.0;
        let n = 10_000;
        for _ in 0..n {
            let noisy = attitude_with_noise(&base, 0.01, &mut rng);
            let gram = (noisy.matrix().transpose() * noisy.matrix() - Matrix3::identity()).amax();
            assert!(gram <= 1e-10);
            let residual = base.matrix().transpose() * noisy.matrix();
            let cos_angle = ((residual.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
            angle_sum += cos_angle.acos();
        }
        // |N(0, 0.01)| has mean 0.01 sqrt(2/pi); allow 20%.
        let mean = angle_sum / n as f64;
        let expected = 0.01 * (2.0 / PI).sqrt();
        assert!(
            (mean - expected).abs() <= 0.2 * expected,
            "mean rotation angle {mean} vs expected {expected}"
        );
    }
}
