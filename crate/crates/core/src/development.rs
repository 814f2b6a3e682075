//! Planar Cartan development of surface curves.
//!
//! The development `γ̃` has the same speed and signed curvature as the
//! geodesic curvature of the surface curve. It is obtained by integrating
//! heading `φ = ∫ v κ_g` and position `γ̃ = ∫ v (cos φ, sin φ)` on the
//! sampling grid, starting at the origin with heading along `+x`.

use crate::curve::{sample_curve, CurveOnSurface, DarbouxSample};
use crate::error::{GeomError, Result};
use crate::numeric::{derivative_stencil, second_derivative_stencil, wrap_angle};
use crate::{Vec2, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarSample {
    pub t: f64,
    pub point: Vec2,
    /// Unwrapped heading angle `φ(t)`.
    pub heading: f64,
    pub speed: f64,
    /// Geodesic curvature used for the integration.
    pub kg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarCurve {
    pub samples: Vec<PlanarSample>,
    /// `|γ̃(α) - γ̃(0)|`.
    pub closed_gap: f64,
    /// `φ(α) - φ(0)` reduced to `(-π, π]`.
    pub heading_gap: f64,
    pub closed: bool,
}

impl PlanarCurve {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn points(&self) -> Vec<Vec2> {
        self.samples.iter().map(|s| s.point).collect()
    }

    /// Unit tangent `(cos φ, sin φ)` at sample `i`.
    pub fn tangent(&self, i: usize) -> Vec2 {
        let (s, c) = self.samples[i].heading.sin_cos();
        Vec2::new(c, s)
    }

    fn lagrange4(&self, t: f64, f: impl Fn(&PlanarSample) -> f64) -> f64 {
        let n = self.samples.len();
        let t0 = self.samples[0].t;
        let h = self.samples[1].t - t0;
        let s = ((t - t0) / h).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let x = s - i as f64;
        (0..4)
            .map(|k| {
                let w: f64 = (0..4).filter(|&j| j != k).map(|j| (x - j as f64) / (k as f64 - j as f64)).product();
                w * f(&self.samples[i + k])
            })
            .sum()
    }

    /// Speed at an arbitrary parameter (cubic interpolation of the samples).
    pub fn speed_at(&self, t: f64) -> f64 {
        self.lagrange4(t, |s| s.speed)
    }

    /// Curvature at an arbitrary parameter (cubic interpolation of the samples).
    pub fn kg_at(&self, t: f64) -> f64 {
        self.lagrange4(t, |s| s.kg)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.samples[0].t, self.samples[self.samples.len() - 1].t)
    }

    pub fn arc_length(&self) -> f64 {
        self.samples.windows(2).map(|w| (w[1].point - w[0].point).norm()).sum()
    }

    /// Cubic Hermite evaluation of position and heading between samples.
    pub fn eval(&self, t: f64) -> (Vec2, f64) {
        let n = self.samples.len();
        let t0 = self.samples[0].t;
        let h = self.samples[1].t - t0;
        let s = ((t - t0) / h).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let x = s - i as f64;
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let (h00, h10, h01, h11) = (
            2.0 * x.powi(3) - 3.0 * x * x + 1.0,
            x.powi(3) - 2.0 * x * x + x,
            -2.0 * x.powi(3) + 3.0 * x * x,
            x.powi(3) - x * x,
        );
        let ta = Vec2::new(a.heading.cos(), a.heading.sin()) * a.speed;
        let tb = Vec2::new(b.heading.cos(), b.heading.sin()) * b.speed;
        let p = a.point * h00 + ta * (h10 * h) + b.point * h01 + tb * (h11 * h);
        let phi = a.heading * h00
            + a.speed * a.kg * h10 * h
            + b.heading * h01
            + b.speed * b.kg * h11 * h;
        (p, phi)
    }
}

/// Integrates a curvature/speed profile sampled on a uniform fine grid of
/// `2n + 1` points; the result lives on the `n + 1` even nodes.
///
/// Every panel `[t_i, t_{i+1}]` is integrated by Simpson's rule through its
/// midpoint, and the heading at the midpoint comes from the three-point
/// partial-panel rule. All nodes share one formula, so the quadrature error
/// is smooth along the curve.
pub fn develop_samples(fine: &[DarbouxSample], closed: bool) -> Result<PlanarCurve> {
    let m = fine.len();
    if m < 5 || m.is_multiple_of(2) {
        return Err(GeomError::GridMismatch(format!(
            "development needs an odd fine grid of at least 5 samples, got {m}"
        )));
    }
    let n = (m - 1) / 2;
    let h = fine[2].t - fine[0].t;
    let rate = |d: &DarbouxSample| d.speed * d.kg;
    let mut out = Vec::with_capacity(n + 1);
    let (mut phi, mut p) = (0.0, Vec2::zeros());
    let vel = |d: &DarbouxSample, phi: f64| Vec2::new(phi.cos(), phi.sin()) * d.speed;
    for i in 0..=n {
        let a = &fine[2 * i];
        out.push(PlanarSample { t: a.t, point: p, heading: phi, speed: a.speed, kg: a.kg });
        if i == n {
            break;
        }
        let (mid, b) = (&fine[2 * i + 1], &fine[2 * i + 2]);
        let (fa, fm, fb) = (rate(a), rate(mid), rate(b));
        let phi_mid = phi + h / 24.0 * (5.0 * fa + 8.0 * fm - fb);
        let phi_next = phi + h / 6.0 * (fa + 4.0 * fm + fb);
        p += (vel(a, phi) + vel(mid, phi_mid) * 4.0 + vel(b, phi_next)) * (h / 6.0);
        phi = phi_next;
    }
    let closed_gap = (out[n].point - out[0].point).norm();
    let heading_gap = wrap_angle(out[n].heading - out[0].heading);
    Ok(PlanarCurve { samples: out, closed_gap, heading_gap, closed })
}

/// Cartan development of `c` on `n + 1` uniform samples (`n ≥ 64`).
pub fn develop_curve(c: &CurveOnSurface, n: usize) -> Result<PlanarCurve> {
    if n < 64 {
        return Err(GeomError::TooFewSamples { needed: 64, got: n });
    }
    develop_samples(&sample_curve(c, 2 * n)?, c.closed)
}

/// Signed curvature of the developed polyline at interior samples, from
/// sixth-order differences of the positions (independent of stored headings).
pub fn developed_curvature(p: &PlanarCurve) -> Result<Vec<f64>> {
    let n = p.samples.len();
    if n < 5 {
        return Err(GeomError::TooFewSamples { needed: 5, got: n });
    }
    let h = p.samples[1].t - p.samples[0].t;
    let pts = p.points();
    let d1: Vec<Vec2> = (0..n)
        .map(|i| derivative_stencil(i, n, false).iter().map(|&(k, w)| pts[k] * w).sum::<Vec2>() / h)
        .collect();
    Ok((1..n - 1)
        .map(|i| {
            let d2 = second_derivative_stencil(i, n, false).iter().map(|&(k, w)| pts[k] * w).sum::<Vec2>()
                / (h * h);
            let v = d1[i];
            (v.x * d2.y - v.y * d2.x) / v.norm().powi(3)
        })
        .collect())
}

/// Result of Levi-Civita transport of a tangent vector along a curve.
#[derive(Debug, Clone)]
pub struct TransportReport {
    /// `max |θ' - v κ_g|` where `θ` is the angle from the transported vector to `e`.
    pub max_deviation: f64,
    /// Rotation of the transported vector relative to its start, about the
    /// start normal, reduced to `(-π, π]` (meaningful for closed curves).
    pub holonomy: f64,
    pub transported: Vec<Vec3>,
}

/// Transports `Y(0) = e(0)` along `c` with `Y' = -(Y·N') N` (RK4 on `n` steps).
pub fn parallel_transport(c: &CurveOnSurface, n: usize) -> Result<TransportReport> {
    if n < 64 {
        return Err(GeomError::TooFewSamples { needed: 64, got: n });
    }
    let (a, b) = c.interval;
    let h = (b - a) / n as f64;
    let field = |t: f64| -> Result<(Vec3, Vec3)> {
        let d = c.darboux_frame(t.clamp(a, b))?;
        let dn = (d.e * (-d.kn) - d.h * d.tg) * d.speed;
        Ok((d.normal, dn))
    };
    let rhs = |y: &Vec3, (nrm, dn): (Vec3, Vec3)| -> Vec3 { -nrm * y.dot(&dn) };
    let first = c.darboux_frame(a)?;
    let mut y = first.e;
    let mut ys = Vec::with_capacity(n + 1);
    let mut thetas = Vec::with_capacity(n + 1);
    let mut rates = Vec::with_capacity(n + 1);
    let mut prev_theta = 0.0;
    for i in 0..=n {
        let t = a + h * i as f64;
        let d = c.darboux_frame(t.min(b))?;
        let raw = y.cross(&d.e).dot(&d.normal).atan2(y.dot(&d.e));
        let theta = prev_theta + wrap_angle(raw - prev_theta);
        prev_theta = theta;
        thetas.push(theta);
        rates.push(d.speed * d.kg);
        ys.push(y);
        if i == n {
            break;
        }
        let f0 = field(t)?;
        let fm = field(t + 0.5 * h)?;
        let f1 = field(t + h)?;
        let k1 = rhs(&y, f0);
        let k2 = rhs(&(y + k1 * (0.5 * h)), fm);
        let k3 = rhs(&(y + k2 * (0.5 * h)), fm);
        let k4 = rhs(&(y + k3 * h), f1);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    let len = thetas.len();
    let max_deviation = (0..len)
        .map(|i| {
            let dtheta: f64 =
                derivative_stencil(i, len, false).iter().map(|&(k, w)| w * thetas[k]).sum::<f64>() / h;
            (dtheta - rates[i]).abs()
        })
        .fold(0.0, f64::max);
    let y0 = ys[0];
    let yn = ys[len - 1];
    let holonomy = y0.cross(&yn).dot(&first.normal).atan2(y0.dot(&yn));
    Ok(TransportReport { max_deviation, holonomy, transported: ys })
}

/// Maximum deviation between `θ'` and `v κ_g` along `c`.
pub fn parallel_transport_check(c: &CurveOnSurface, n: usize) -> Result<f64> {
    Ok(parallel_transport(c, n)?.max_deviation)
}
