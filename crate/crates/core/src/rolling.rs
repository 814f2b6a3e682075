//! Rigid motions of a surface rolling along a curve, their angular velocity
//! and the classification of the instantaneous motion.

use crate::curve::{CurveOnSurface, DarbouxSample};
use crate::development::PlanarCurve;
use crate::error::{GeomError, Result};
use crate::{Mat3, Vec3};

/// Default relative tolerance for motion classification.
pub const CLASSIFY_TOLERANCE: f64 = 1e-8;
/// Pointwise relative tolerance on the speed match between contact curves.
pub const SPEED_MATCH_TOLERANCE: f64 = 1e-6;

/// Anything that carries a Darboux frame along a parameter interval.
pub trait FramedCurve {
    fn frame_at(&self, t: f64) -> Result<DarbouxSample>;
    fn interval(&self) -> (f64, f64);
}

impl FramedCurve for CurveOnSurface {
    fn frame_at(&self, t: f64) -> Result<DarbouxSample> {
        self.darboux_frame(t)
    }

    fn interval(&self) -> (f64, f64) {
        self.interval
    }
}

/// A development in the plane `z = 0` with constant normal `e₃`.
impl FramedCurve for PlanarCurve {
    fn frame_at(&self, t: f64) -> Result<DarbouxSample> {
        let (a, b) = self.interval();
        let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
        if !(t >= a - slack && t <= b + slack) {
            return Err(GeomError::OutsideInterval { t, start: a, end: b });
        }
        let (p, phi) = self.eval(t);
        let (s, c) = phi.sin_cos();
        Ok(DarbouxSample {
            t,
            point: Vec3::new(p.x, p.y, 0.0),
            e: Vec3::new(c, s, 0.0),
            h: Vec3::new(-s, c, 0.0),
            normal: Vec3::z(),
            speed: self.speed_at(t),
            kg: self.kg_at(t),
            kn: 0.0,
            tg: 0.0,
        })
    }

    fn interval(&self) -> (f64, f64) {
        PlanarCurve::interval(self)
    }
}

/// `x ↦ R x + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub rotation: Mat3,
    pub translation: Vec3,
}

impl RigidMotion {
    pub fn identity() -> Self {
        Self { rotation: Mat3::identity(), translation: Vec3::zeros() }
    }

    pub fn apply(&self, x: &Vec3) -> Vec3 {
        self.rotation * x + self.translation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    PureSpinning,
    PureTwisting,
    StandardRolling,
    NotRotational,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionSample {
    pub t: f64,
    pub motion: RigidMotion,
    /// Angular velocity in world coordinates.
    pub omega: Vec3,
    /// Angular velocity in the target frame `{ẽ, h̃, Ñ}`.
    pub omega_frame: [f64; 3],
    /// Pulled-back angular velocity `Rᵀω` in the source frame `{e, h, N}`.
    pub omega_pulled: [f64; 3],
    pub classification: Classification,
}

/// The motion taking `γ(t), e(t), N(t)` to `γ̃(t), ẽ(t), Ñ(t)`:
/// `R = D̃ Dᵀ`, `c = γ̃ - R γ`.
pub fn motion_map(source: &DarbouxSample, target: &DarbouxSample) -> RigidMotion {
    let rotation = target.frame_matrix() * source.frame_matrix().transpose();
    RigidMotion { rotation, translation: target.point - rotation * source.point }
}

/// Skew matrix `[x]×` with `[x]× y = x × y`.
pub fn skew(x: &Vec3) -> Mat3 {
    Mat3::new(0.0, -x.z, x.y, x.z, 0.0, -x.x, -x.y, x.x, 0.0)
}

/// Frame-equation coefficient matrix `Λ = ‖γ'‖ [[0, κ_g, κ_n], [-κ_g, 0, τ_g], [-κ_n, -τ_g, 0]]`.
pub fn coefficient_matrix(d: &DarbouxSample) -> Mat3 {
    let s = d.speed;
    Mat3::new(
        0.0,
        s * d.kg,
        s * d.kn,
        -s * d.kg,
        0.0,
        s * d.tg,
        -s * d.kn,
        -s * d.tg,
        0.0,
    )
}

/// `Ξ = Λ - Λ̃`, with the source speed on both (the speeds agree).
pub fn relative_coefficients(source: &DarbouxSample, target: &DarbouxSample) -> Mat3 {
    let matched = DarbouxSample { speed: source.speed, ..*target };
    coefficient_matrix(source) - coefficient_matrix(&matched)
}

/// `Ω = D̃ Ξ D̃ᵀ`.
pub fn spin_matrix(source: &DarbouxSample, target: &DarbouxSample) -> Mat3 {
    let dt = target.frame_matrix();
    dt * relative_coefficients(source, target) * dt.transpose()
}

/// Classifies an angular velocity given in target-frame coordinates `(a, b, c)`
/// along `ẽ, h̃, Ñ`.
pub fn classify_motion(omega_frame: [f64; 3], tol: f64) -> Classification {
    let [a, b, c] = omega_frame;
    let norm = (a * a + b * b + c * c).sqrt();
    if norm < tol {
        return Classification::NotRotational;
    }
    let rel = tol * norm;
    if (a * a + b * b).sqrt() < rel {
        Classification::PureSpinning
    } else if (b * b + c * c).sqrt() < rel {
        Classification::PureTwisting
    } else if c.abs() < rel && b.abs() >= rel {
        Classification::StandardRolling
    } else {
        Classification::Mixed
    }
}

fn check_pair(source: &dyn FramedCurve, target: &dyn FramedCurve) -> Result<()> {
    let (a, b) = (source.interval(), target.interval());
    let scale = 1e-9 * (1.0 + a.0.abs().max(a.1.abs()));
    if (a.0 - b.0).abs() > scale || (a.1 - b.1).abs() > scale {
        return Err(GeomError::InitialConditionMismatch(format!(
            "source interval {a:?} differs from target interval {b:?}"
        )));
    }
    Ok(())
}

/// Angular velocity of the motion of the source surface along the target
/// contact curve at `t`.
///
/// In the target frame `ω = ‖γ'‖ (τ̃_g - τ_g, κ_n - κ̃_n, κ̃_g - κ_g)`; the
/// pulled-back `ω̂` has the same coordinates in the source frame.
pub fn angular_velocity(
    source: &dyn FramedCurve,
    target: &dyn FramedCurve,
    t: f64,
    tol: f64,
) -> Result<MotionSample> {
    check_pair(source, target)?;
    let ds = source.frame_at(t)?;
    let dt = target.frame_at(t)?;
    if (ds.speed - dt.speed).abs() > SPEED_MATCH_TOLERANCE * ds.speed.max(1.0) {
        return Err(GeomError::SpeedMismatch { t, source_speed: ds.speed, target_speed: dt.speed });
    }
    let s = ds.speed;
    let xi = [s * (dt.tg - ds.tg), s * (ds.kn - dt.kn), s * (dt.kg - ds.kg)];
    let omega = dt.frame_matrix() * Vec3::from(xi);
    Ok(MotionSample {
        t,
        motion: motion_map(&ds, &dt),
        omega,
        omega_frame: xi,
        omega_pulled: xi,
        classification: classify_motion(xi, tol),
    })
}

/// Rolling of the surface of `c` on the plane along its development `dev`.
///
/// A vanishing angular velocity is reported as `NotRotational`; a vanishing
/// normal curvature with nonzero torsion is an error, since the Cartan
/// ribbon is undefined there.
pub fn check_plane_rolling(c: &CurveOnSurface, dev: &PlanarCurve, t: f64, tol: f64) -> Result<MotionSample> {
    let m = angular_velocity(c, dev, t, tol)?;
    if m.classification == Classification::NotRotational {
        return Ok(m);
    }
    let d = c.darboux_frame(t)?;
    if d.kn.abs() < tol {
        return Err(GeomError::VanishingNormalCurvature { t, kn: d.kn, tg: d.tg });
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(point: Vec3) -> DarbouxSample {
        DarbouxSample {
            t: 0.0,
            point,
            e: Vec3::x(),
            h: Vec3::y(),
            normal: Vec3::z(),
            speed: 1.0,
            kg: 0.0,
            kn: 0.0,
            tg: 0.0,
        }
    }

    #[test]
    fn identical_samples_give_identity() {
        let s = sample(Vec3::new(1.0, 2.0, 3.0));
        let m = motion_map(&s, &s);
        assert!((m.rotation - Mat3::identity()).norm() < 1e-15);
        assert!(m.translation.norm() < 1e-15);
    }

    #[test]
    fn translated_frame_is_pure_translation() {
        let m = motion_map(&sample(Vec3::zeros()), &sample(Vec3::x()));
        assert_eq!(m.rotation, Mat3::identity());
        assert_eq!(m.translation, Vec3::x());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_motion([0.0, 0.0, 1.0], 1e-8), Classification::PureSpinning);
        assert_eq!(classify_motion([1.0, 0.0, 0.0], 1e-8), Classification::PureTwisting);
        assert_eq!(classify_motion([0.3, 2.0, 0.0], 1e-8), Classification::StandardRolling);
        assert_eq!(classify_motion([0.0, 0.0, 0.0], 1e-8), Classification::NotRotational);
        assert_eq!(classify_motion([0.3, 2.0, 0.1], 1e-8), Classification::Mixed);
    }

    #[test]
    fn skew_is_cross_product() {
        let a = Vec3::new(0.3, -1.0, 2.0);
        let b = Vec3::new(1.5, 0.2, -0.7);
        assert!((skew(&a) * b - a.cross(&b)).norm() < 1e-15);
    }

    #[test]
    fn spin_matrix_matches_omega() {
        let mut a = sample(Vec3::zeros());
        a.kg = 0.4;
        a.kn = 1.3;
        a.tg = -0.2;
        a.speed = 2.0;
        let b = sample(Vec3::zeros());
        let xi = Vec3::new(2.0 * (0.0 + 0.2), 2.0 * 1.3, 2.0 * (0.0 - 0.4));
        assert!((spin_matrix(&a, &b) - skew(&xi)).norm() < 1e-14);
    }
}
