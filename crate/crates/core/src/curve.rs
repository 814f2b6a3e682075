//! Curves on surfaces and their Darboux frames.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{GeomError, Result};
use crate::surface::ParametricSurface;
use crate::{Mat3, Vec3};

/// Default tolerance on point and unit-tangent mismatch for closed curves.
pub const CLOSURE_TOLERANCE: f64 = 1e-8;
/// Minimum speed accepted as regular.
pub const SPEED_THRESHOLD: f64 = 1e-9;

/// Parameter-space position and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathJet {
    pub uv: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
}

/// A twice differentiable path `t ↦ (u(t), v(t))` in a chart's parameter box.
pub trait ParamPath: Send + Sync + fmt::Debug {
    fn eval(&self, t: f64) -> PathJet;
}

/// `(u, v) = origin + t · direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinePath {
    pub origin: [f64; 2],
    pub direction: [f64; 2],
}

impl ParamPath for LinePath {
    fn eval(&self, t: f64) -> PathJet {
        PathJet {
            uv: [self.origin[0] + t * self.direction[0], self.origin[1] + t * self.direction[1]],
            d1: self.direction,
            d2: [0.0, 0.0],
        }
    }
}

/// Circle in parameter space: `(u, v) = center + radius (cos(ωt + φ0), sin(ωt + φ0))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePath {
    pub center: [f64; 2],
    pub radius: f64,
    pub rate: f64,
    pub phase: f64,
}

impl ParamPath for CirclePath {
    fn eval(&self, t: f64) -> PathJet {
        let (s, c) = (self.rate * t + self.phase).sin_cos();
        let (r, w) = (self.radius, self.rate);
        PathJet {
            uv: [self.center[0] + r * c, self.center[1] + r * s],
            d1: [-r * w * s, r * w * c],
            d2: [-r * w * w * c, -r * w * w * s],
        }
    }
}

/// Interpolating cubic spline through `(u, v)` knots at uniform parameters
/// over `[t0, t1]`. Periodic splines require the last knot to repeat the first.
#[derive(Debug, Clone, PartialEq)]
pub struct SplinePath {
    t0: f64,
    h: f64,
    knots: Vec<[f64; 2]>,
    // second derivatives at knots
    m: Vec<[f64; 2]>,
}

impl SplinePath {
    pub fn new(t0: f64, t1: f64, knots: Vec<[f64; 2]>, periodic: bool) -> Result<Self> {
        let n = knots.len();
        if n < 4 {
            return Err(GeomError::TooFewSamples { needed: 4, got: n });
        }
        if !(t1 > t0) || knots.iter().flatten().any(|x| !x.is_finite()) {
            return Err(GeomError::InvalidArgument("spline knots or interval not finite".into()));
        }
        if periodic && knots[0] != knots[n - 1] {
            return Err(GeomError::InvalidArgument(
                "periodic spline must repeat its first knot".into(),
            ));
        }
        let h = (t1 - t0) / (n - 1) as f64;
        let mut m = vec![[0.0; 2]; n];
        for axis in 0..2 {
            let y: Vec<f64> = knots.iter().map(|k| k[axis]).collect();
            let sol = if periodic { periodic_second_derivs(&y, h) } else { natural_second_derivs(&y, h) };
            for (mi, s) in m.iter_mut().zip(sol) {
                mi[axis] = s;
            }
        }
        Ok(Self { t0, h, knots, m })
    }
}

fn natural_second_derivs(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut m = vec![0.0; n];
    // tridiagonal (1, 4, 1) m = 6/h² Δ²y on the interior
    let k = n - 2;
    let mut diag = vec![4.0; k];
    let mut rhs: Vec<f64> = (1..n - 1).map(|i| 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h)).collect();
    for i in 1..k {
        let w = 1.0 / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= w * rhs[i - 1];
    }
    for i in (0..k).rev() {
        let next = if i + 1 < k { m[i + 2] } else { 0.0 };
        m[i + 1] = (rhs[i] - next) / diag[i];
    }
    m
}

fn periodic_second_derivs(y: &[f64], h: f64) -> Vec<f64> {
    // cyclic system on n - 1 unknowns, solved by dense elimination (knot
    // counts from configs are small)
    let p = y.len() - 1;
    let mut a: Vec<Vec<f64>> = vec![vec![0.0; p]; p];
    let mut b = vec![0.0; p];
    for i in 0..p {
        a[i][i] = 4.0;
        a[i][(i + 1) % p] += 1.0;
        a[i][(i + p - 1) % p] += 1.0;
        let prev = y[(i + p - 1) % p];
        b[i] = 6.0 * (y[i + 1] - 2.0 * y[i] + prev) / (h * h);
    }
    for col in 0..p {
        let piv = (col..p).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..p {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..p {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; p];
    for r in (0..p).rev() {
        let s: f64 = (r + 1..p).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.push(x[0]);
    x
}

impl ParamPath for SplinePath {
    fn eval(&self, t: f64) -> PathJet {
        let n = self.knots.len();
        let s = ((t - self.t0) / self.h).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let x = t - (self.t0 + i as f64 * self.h);
        let h = self.h;
        let mut out = PathJet { uv: [0.0; 2], d1: [0.0; 2], d2: [0.0; 2] };
        for axis in 0..2 {
            let (y0, y1) = (self.knots[i][axis], self.knots[i + 1][axis]);
            let (m0, m1) = (self.m[i][axis], self.m[i + 1][axis]);
            let xr = h - x;
            out.uv[axis] = m0 * xr.powi(3) / (6.0 * h)
                + m1 * x.powi(3) / (6.0 * h)
                + (y0 / h - m0 * h / 6.0) * xr
                + (y1 / h - m1 * h / 6.0) * x;
            out.d1[axis] = -m0 * xr * xr / (2.0 * h) + m1 * x * x / (2.0 * h) + (y1 - y0) / h
                - (m1 - m0) * h / 6.0;
            out.d2[axis] = (m0 * xr + m1 * x) / h;
        }
        out
    }
}

/// Composition of a path with the increasing bijection
/// `τ(t) = t + k · L/(2π) · sin(2π (t - t0) / L)` of `[t0, t0 + L]`, `|k| < 1`.
#[derive(Debug, Clone)]
pub struct Reparametrized {
    pub inner: Arc<dyn ParamPath>,
    pub t0: f64,
    pub length: f64,
    pub k: f64,
}

impl ParamPath for Reparametrized {
    fn eval(&self, t: f64) -> PathJet {
        let w = std::f64::consts::TAU / self.length;
        let ph = w * (t - self.t0);
        let tau = t + self.k / w * ph.sin();
        let d1 = 1.0 + self.k * ph.cos();
        let d2 = -self.k * w * ph.sin();
        let j = self.inner.eval(tau);
        PathJet {
            uv: j.uv,
            d1: [j.d1[0] * d1, j.d1[1] * d1],
            d2: [j.d2[0] * d1 * d1 + j.d1[0] * d2, j.d2[1] * d1 * d1 + j.d1[1] * d2],
        }
    }
}

impl Reparametrized {
    /// The inner-path parameter corresponding to `t`.
    pub fn inner_parameter(&self, t: f64) -> f64 {
        let w = std::f64::consts::TAU / self.length;
        t + self.k / w * (w * (t - self.t0)).sin()
    }
}

/// A curve `γ(t) = σ(u(t), v(t))`, `t ∈ [t0, t1]`.
#[derive(Debug, Clone)]
pub struct CurveOnSurface {
    pub name: String,
    pub surface: Arc<ParametricSurface>,
    pub path: Arc<dyn ParamPath>,
    pub interval: (f64, f64),
    pub closed: bool,
    /// Test hook: use `-N` instead of `N` in the Darboux frame.
    pub flip_normal: bool,
}

/// Darboux frame `{e, h, N}` and the scalars of the frame equations at one `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxSample {
    pub t: f64,
    pub point: Vec3,
    pub e: Vec3,
    pub h: Vec3,
    pub normal: Vec3,
    pub speed: f64,
    /// Geodesic curvature.
    pub kg: f64,
    /// Normal curvature.
    pub kn: f64,
    /// Geodesic torsion.
    pub tg: f64,
}

impl DarbouxSample {
    /// Columns `e, h, N`.
    pub fn frame_matrix(&self) -> Mat3 {
        frame_matrix(self)
    }
}

/// Matrix with the frame vectors `e, h, N` as columns.
pub fn frame_matrix(d: &DarbouxSample) -> Mat3 {
    Mat3::from_columns(&[d.e, d.h, d.normal])
}

impl CurveOnSurface {
    /// Builds a curve and verifies the declared closedness.
    pub fn new(
        name: impl Into<String>,
        surface: Arc<ParametricSurface>,
        path: Arc<dyn ParamPath>,
        interval: (f64, f64),
        closed: bool,
    ) -> Result<Self> {
        Self::with_tolerance(name, surface, path, interval, closed, CLOSURE_TOLERANCE)
    }

    pub fn with_tolerance(
        name: impl Into<String>,
        surface: Arc<ParametricSurface>,
        path: Arc<dyn ParamPath>,
        interval: (f64, f64),
        closed: bool,
        closure_tol: f64,
    ) -> Result<Self> {
        let name = name.into();
        if !(interval.1 > interval.0) || !interval.0.is_finite() || !interval.1.is_finite() {
            return Err(GeomError::InvalidArgument(format!("bad interval {interval:?} for `{name}`")));
        }
        let c = Self { name, surface, path, interval, closed, flip_normal: false };
        let (start, end) = (c.tangent_at(interval.0)?, c.tangent_at(interval.1)?);
        let gap = (end.0 - start.0).norm();
        let turn = (end.1 - start.1).norm();
        let closes = gap < closure_tol && turn < closure_tol;
        if closed && !closes {
            return Err(GeomError::ClosureMismatch {
                name: c.name.clone(),
                declared: "closed",
                reason: format!("endpoint gap {gap:e}, tangent gap {turn:e}"),
            });
        }
        if !closed && closes {
            return Err(GeomError::ClosureMismatch {
                name: c.name.clone(),
                declared: "open",
                reason: "it closes smoothly".into(),
            });
        }
        Ok(c)
    }

    pub fn length_of_interval(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    fn tangent_at(&self, t: f64) -> Result<(Vec3, Vec3)> {
        let pj = self.path.eval(t);
        let j = self.surface.jet(pj.uv[0], pj.uv[1])?;
        let d = j.du * pj.d1[0] + j.dv * pj.d1[1];
        let s = d.norm();
        if !(s > SPEED_THRESHOLD) {
            return Err(GeomError::IrregularCurve { t, speed: s });
        }
        Ok((j.point, d / s))
    }

    fn check_t(&self, t: f64) -> Result<()> {
        let (a, b) = self.interval;
        let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
        if !(t >= a - slack && t <= b + slack) {
            return Err(GeomError::OutsideInterval { t, start: a, end: b });
        }
        Ok(())
    }

    /// Maps `t` into the interval, wrapping for closed curves.
    pub fn wrap(&self, t: f64) -> f64 {
        if self.closed {
            let (a, b) = self.interval;
            a + (t - a).rem_euclid(b - a)
        } else {
            t
        }
    }

    pub fn point(&self, t: f64) -> Result<Vec3> {
        let pj = self.path.eval(t);
        self.surface.point(pj.uv[0], pj.uv[1])
    }

    /// Darboux frame and scalars at `t`.
    ///
    /// With `γ' = σ_u u' + σ_v v'` and speed `s`, the scalars are
    /// `κ_g = γ''·h / s²`, `κ_n = γ''·N / s²` and `τ_g = -N'·h / s`,
    /// where `N'` is propagated exactly from the second chart derivatives.
    pub fn darboux_frame(&self, t: f64) -> Result<DarbouxSample> {
        self.check_t(t)?;
        let pj = self.path.eval(t);
        let [u, v] = pj.uv;
        let [du, dv] = pj.d1;
        let [ddu, ddv] = pj.d2;
        let (j, n, nnorm) = self.surface.regular_jet(u, v)?;
        let d1 = j.du * du + j.dv * dv;
        let d2 = j.duu * (du * du) + j.duv * (2.0 * du * dv) + j.dvv * (dv * dv) + j.du * ddu + j.dv * ddv;
        let speed = d1.norm();
        if !(speed > SPEED_THRESHOLD) || !speed.is_finite() {
            return Err(GeomError::IrregularCurve { t, speed });
        }
        let sign = if self.flip_normal { -1.0 } else { 1.0 };
        let normal = n * (sign / nnorm);
        let e = d1 / speed;
        let h = normal.cross(&e);
        let dn = (j.duu * du + j.duv * dv).cross(&j.dv) + j.du.cross(&(j.duv * du + j.dvv * dv));
        let dnormal = (dn - normal * normal.dot(&dn)) / nnorm * sign * sign;
        let s2 = speed * speed;
        Ok(DarbouxSample {
            t,
            point: j.point,
            e,
            h,
            normal,
            speed,
            kg: d2.dot(&h) / s2,
            kn: d2.dot(&normal) / s2,
            tg: -dnormal.dot(&h) / speed,
        })
    }

    /// Uniform parameters `t_i = t0 + i (t1 - t0) / n`, `i = 0..=n`.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.interval;
        (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect()
    }

    /// `n + 1` Darboux samples on the uniform grid.
    pub fn sample(&self, n: usize) -> Result<Vec<DarbouxSample>> {
        sample_curve(self, n)
    }
}

/// Samples a curve at `n + 1` uniform parameters (`n ≥ 16`).
pub fn sample_curve(c: &CurveOnSurface, n: usize) -> Result<Vec<DarbouxSample>> {
    if n < 16 {
        return Err(GeomError::TooFewSamples { needed: 16, got: n });
    }
    c.grid(n).into_par_iter().map(|t| c.darboux_frame(t)).collect()
}
