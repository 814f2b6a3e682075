//! Cartan ribbons: the developable ruled surface `r(t,u) = γ(t) + u β(t)`
//! tangent to the surface along a curve, and its planar development.

use rayon::prelude::*;

use crate::curve::{sample_curve, CurveOnSurface, DarbouxSample};
use crate::development::PlanarCurve;
use crate::error::{GeomError, Result};
use crate::numeric::{derivative_stencil, fornberg_weights, ridders};
use crate::{Vec2, Vec3};

/// Lower bound on `|κ_n|` for a Cartan ruling to exist.
pub const RULING_TOLERANCE: f64 = 1e-8;
/// Rulings with `|β·e|` above `1 - TANGENT_MARGIN` count as tangent.
pub const TANGENT_MARGIN: f64 = 1e-9;
/// `|β'| / |γ'|` below this leaves the striction point undefined.
pub const STRICTION_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_LATTICE_U: usize = 33;
/// Provisional width as a fraction of the smallest striction distance.
pub const WIDTH_FRACTION: f64 = 0.25;

/// Cartan ruling `β = (κ_n h - τ_g e) / ‖κ_n h - τ_g e‖`.
pub fn ruling_direction(d: &DarbouxSample) -> Result<Vec3> {
    let w = d.h * d.kn - d.e * d.tg;
    let norm = w.norm();
    if d.kn.abs() < RULING_TOLERANCE || !norm.is_finite() {
        return Err(GeomError::VanishingNormalCurvature { t: d.t, kn: d.kn, tg: d.tg });
    }
    let beta = w / norm;
    if beta.dot(&d.e).abs() > 1.0 - TANGENT_MARGIN {
        return Err(GeomError::VanishingNormalCurvature { t: d.t, kn: d.kn, tg: d.tg });
    }
    Ok(beta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RibbonSample {
    pub frame: DarbouxSample,
    /// Unit ruling `β(t)`.
    pub ruling: Vec3,
    pub w_minus: f64,
    pub w_plus: f64,
}

impl RibbonSample {
    pub fn t(&self) -> f64 {
        self.frame.t
    }

    pub fn point(&self, u: f64) -> Vec3 {
        self.frame.point + self.ruling * u
    }
}

/// Regular `n_t × n_u` grid of points, row `i` holding the `u`-samples at `t_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub n_t: usize,
    pub n_u: usize,
    pub points: Vec<Vec3>,
}

impl Lattice {
    pub fn at(&self, i: usize, j: usize) -> Vec3 {
        self.points[i * self.n_u + j]
    }

    /// `(E, F, G)` at every node from sixth-order differences with spacings
    /// `dt` and `du`.
    pub fn first_fundamental_form(&self, dt: f64, du: f64) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.points.len());
        let st: Vec<_> = (0..self.n_t).map(|i| derivative_stencil(i, self.n_t, false)).collect();
        let su: Vec<_> = (0..self.n_u).map(|j| derivative_stencil(j, self.n_u, false)).collect();
        for (i, si) in st.iter().enumerate() {
            for (j, sj) in su.iter().enumerate() {
                let rt: Vec3 = si.iter().map(|&(k, w)| self.at(k, j) * w).sum::<Vec3>() / dt;
                let ru: Vec3 = sj.iter().map(|&(k, w)| self.at(i, k) * w).sum::<Vec3>() / du;
                out.push([rt.dot(&rt), rt.dot(&ru), ru.dot(&ru)]);
            }
        }
        out
    }

    /// Angle defect `2π - Σ angles` at each interior node, for the two
    /// diagonal triangulations of the quads.
    pub fn angle_defects(&self) -> Vec<[f64; 2]> {
        let angle = |p: Vec3, a: Vec3, b: Vec3| (a - p).angle(&(b - p));
        let mut out = Vec::new();
        for i in 1..self.n_t.saturating_sub(1) {
            for j in 1..self.n_u.saturating_sub(1) {
                let p = self.at(i, j);
                // Neighbours counterclockwise in the (t, u) plane.
                let ring = [
                    self.at(i + 1, j),
                    self.at(i + 1, j + 1),
                    self.at(i, j + 1),
                    self.at(i - 1, j + 1),
                    self.at(i - 1, j),
                    self.at(i - 1, j - 1),
                    self.at(i, j - 1),
                    self.at(i + 1, j - 1),
                ];
                // Diagonal (i,j)-(i+1,j+1): the node touches both diagonal
                // neighbours along +/+ and -/-.
                let main = angle(p, ring[0], ring[1])
                    + angle(p, ring[1], ring[2])
                    + angle(p, ring[2], ring[4])
                    + angle(p, ring[4], ring[5])
                    + angle(p, ring[5], ring[6])
                    + angle(p, ring[6], ring[0]);
                let anti = angle(p, ring[0], ring[2])
                    + angle(p, ring[2], ring[3])
                    + angle(p, ring[3], ring[4])
                    + angle(p, ring[4], ring[6])
                    + angle(p, ring[6], ring[7])
                    + angle(p, ring[7], ring[0]);
                let tau = std::f64::consts::TAU;
                out.push([tau - main, tau - anti]);
            }
        }
        out
    }
}

/// Uniform grid of `n` values from `a` to `b` that contains 0 when `a < 0 < b`
/// and `n` is odd with symmetric bounds.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone)]
pub struct Ribbon {
    pub center: CurveOnSurface,
    pub samples: Vec<RibbonSample>,
    /// The sign-continuous ruling comes back reversed after one loop.
    pub mobius: bool,
    /// Common striction point when the ribbon is a cone around a point.
    pub cone_point: Option<Vec3>,
    pub lattice: Option<Lattice>,
}

impl Ribbon {
    /// A ruled surface along `center` with arbitrary unit rulings (no
    /// tangency or flatness is implied).
    pub fn from_rulings(
        center: CurveOnSurface,
        frames: Vec<DarbouxSample>,
        rulings: Vec<Vec3>,
        width: f64,
    ) -> Result<Self> {
        if frames.len() != rulings.len() {
            return Err(GeomError::GridMismatch(format!(
                "{} frames but {} rulings",
                frames.len(),
                rulings.len()
            )));
        }
        if !(width > 0.0) {
            return Err(GeomError::InvalidArgument(format!("width must be positive, got {width}")));
        }
        let samples = frames
            .into_iter()
            .zip(rulings)
            .map(|(frame, r)| RibbonSample { frame, ruling: r.normalize(), w_minus: -width, w_plus: width })
            .collect();
        Ok(Self { center, samples, mobius: false, cone_point: None, lattice: None })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn closed(&self) -> bool {
        self.center.closed
    }

    /// Parameter spacing of the sample grid.
    pub fn dt(&self) -> f64 {
        (self.center.interval.1 - self.center.interval.0) / (self.samples.len() - 1) as f64
    }

    pub fn point(&self, i: usize, u: f64) -> Vec3 {
        self.samples[i].point(u)
    }

    /// Largest symmetric-in-sign band `[max w₋, min w₊]` shared by all samples.
    pub fn common_band(&self) -> (f64, f64) {
        let lo = self.samples.iter().map(|s| s.w_minus).fold(f64::NEG_INFINITY, f64::max);
        let hi = self.samples.iter().map(|s| s.w_plus).fold(f64::INFINITY, f64::min);
        (lo, hi)
    }

    /// Lattice on the fixed `u` values `us`.
    pub fn lattice_on(&self, us: &[f64]) -> Lattice {
        let points = self
            .samples
            .par_iter()
            .flat_map_iter(|s| us.iter().map(move |&u| s.point(u)))
            .collect();
        Lattice { n_t: self.samples.len(), n_u: us.len(), points }
    }

    /// Lattice following the per-sample widths; `n_u` odd puts `u = 0` on
    /// the middle column.
    pub fn width_lattice(&self, n_u: usize) -> Lattice {
        let m = (n_u - 1) / 2;
        let points = self
            .samples
            .par_iter()
            .flat_map_iter(|s| {
                (0..n_u).map(move |j| {
                    let u = if j <= m {
                        s.w_minus * (m - j) as f64 / m.max(1) as f64
                    } else {
                        s.w_plus * (j - m) as f64 / (n_u - 1 - m) as f64
                    };
                    s.point(u)
                })
            })
            .collect();
        Lattice { n_t: self.samples.len(), n_u, points }
    }

    pub fn populate_lattice(&mut self, n_u: usize) {
        self.lattice = Some(self.width_lattice(n_u));
    }
}

/// Ruling at an arbitrary parameter, with the sign closest to `reference`.
pub fn ruling_at(c: &CurveOnSurface, t: f64, reference: &Vec3) -> Result<Vec3> {
    let b = ruling_direction(&c.darboux_frame(c.wrap(t))?)?;
    Ok(if b.dot(reference) < 0.0 { -b } else { b })
}

/// Cartan ribbon along `c` on `n + 1` uniform samples with widths `±w_max`.
pub fn build_ribbon(c: &CurveOnSurface, n: usize, w_max: f64) -> Result<Ribbon> {
    if !(w_max > 0.0) {
        return Err(GeomError::InvalidArgument(format!("w_max must be positive, got {w_max}")));
    }
    let frames = sample_curve(c, n)?;
    let raw: Vec<Vec3> = frames.par_iter().map(ruling_direction).collect::<Result<_>>()?;
    let mut rulings = Vec::with_capacity(raw.len());
    for b in raw {
        let b = match rulings.last() {
            Some(prev) if b.dot(prev) < 0.0 => -b,
            _ => b,
        };
        rulings.push(b);
    }
    let mobius = c.closed && rulings[0].dot(&rulings[rulings.len() - 1]) < 0.0;
    let mut rb = Ribbon::from_rulings(c.clone(), frames, rulings, w_max)?;
    rb.mobius = mobius;
    rb.cone_point = detect_cone(&rb)?;
    Ok(rb)
}

fn detect_cone(rb: &Ribbon) -> Result<Option<Vec3>> {
    let params = striction_parameters(rb)?;
    let mut pts = Vec::with_capacity(params.len());
    for (s, u) in rb.samples.iter().zip(params) {
        match u {
            Some(u) => pts.push(s.point(u)),
            None => return Ok(None),
        }
    }
    let mean = pts.iter().sum::<Vec3>() / pts.len() as f64;
    let scale = 1.0 + mean.norm();
    let spread = pts.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);
    Ok((spread < 1e-6 * scale).then_some(mean))
}

/// Derivative of the ruling at sample `i`, extrapolated from differences of
/// the exact ruling field (one-sided at the ends of open curves, where the
/// chart is often close to singular).
fn ruling_derivative(rb: &Ribbon, i: usize) -> Result<Vec3> {
    let s = &rb.samples[i];
    let c = &rb.center;
    let t = s.t();
    let h0 = 0.5 * rb.dt();
    let (a, b) = c.interval;
    let forward = if c.closed || (t - h0 >= a && t + h0 <= b) {
        None
    } else if t - h0 < a {
        Some(1.0)
    } else {
        Some(-1.0)
    };
    ridders(|x| ruling_at(c, x, &s.ruling), t, h0, forward)
}

/// Striction parameter `u*(t) = -(γ'·β') / (β'·β')` per sample; `None`
/// where the rulings are locally parallel.
pub fn striction_parameters(rb: &Ribbon) -> Result<Vec<Option<f64>>> {
    (0..rb.samples.len())
        .into_par_iter()
        .map(|i| {
            let s = &rb.samples[i];
            let db = ruling_derivative(rb, i)?;
            let g = s.frame.e * s.frame.speed;
            let bb = db.norm_squared();
            Ok((db.norm() > STRICTION_TOLERANCE * s.frame.speed).then(|| -g.dot(&db) / bb))
        })
        .collect()
}

/// Striction points `γ(t) + u*(t) β(t)` at every sample.
pub fn striction_curve(rb: &Ribbon) -> Result<Vec<Vec3>> {
    striction_parameters(rb)?
        .into_iter()
        .zip(&rb.samples)
        .map(|(u, s)| u.map(|u| s.point(u)).ok_or(GeomError::UndefinedStriction { t: s.t() }))
        .collect()
}

/// `WIDTH_FRACTION · min |u*|` over samples with a defined striction point.
pub fn default_width(rb: &Ribbon) -> Result<Option<f64>> {
    let m = striction_parameters(rb)?.into_iter().flatten().map(f64::abs).fold(f64::INFINITY, f64::min);
    Ok(m.is_finite().then_some(WIDTH_FRACTION * m))
}

/// Shrinks the widths on the striction side to `fraction · |u*|`, so the
/// provisional ribbon stays an immersion (no cuspidal edge, no folded sheet).
pub fn cap_at_striction(rb: &mut Ribbon, fraction: f64) -> Result<()> {
    let params = striction_parameters(rb)?;
    for (s, u) in rb.samples.iter_mut().zip(params) {
        match u {
            Some(u) if u < 0.0 => s.w_minus = s.w_minus.max(fraction * u),
            Some(u) => s.w_plus = s.w_plus.min(fraction * u),
            None => {}
        }
    }
    rb.lattice = None;
    Ok(())
}

fn grid_derivative(values: &[Vec3], i: usize, dt: f64, periodic: bool) -> Vec3 {
    let n = values.len();
    let stencil = if n >= 7 {
        derivative_stencil(i, n, periodic)
    } else {
        let xs: Vec<f64> = (0..n).map(|k| k as f64).collect();
        fornberg_weights(i as f64, &xs, 1).into_iter().enumerate().collect()
    };
    stencil.iter().map(|&(k, w)| values[k] * w).sum::<Vec3>() / dt
}

/// `max |β'·(β×e)|` with `β'` from differences on the sample grid.
pub fn flatness_residual(rb: &Ribbon) -> Result<f64> {
    let n = rb.samples.len();
    if n < 5 {
        return Err(GeomError::TooFewSamples { needed: 5, got: n });
    }
    let rulings: Vec<Vec3> = rb.samples.iter().map(|s| s.ruling).collect();
    let periodic = rb.closed() && !rb.mobius;
    let dt = rb.dt();
    Ok((0..n)
        .map(|i| {
            let s = &rb.samples[i];
            grid_derivative(&rulings, i, dt, periodic).dot(&s.ruling.cross(&s.frame.e)).abs()
        })
        .fold(0.0, f64::max))
}

/// Largest deviation of the ribbon normal along `u = 0` from `±N`, with the
/// tangent `γ'` taken from differences of the sampled center points.
pub fn tangency_defect(rb: &Ribbon) -> f64 {
    let pts: Vec<Vec3> = rb.samples.iter().map(|s| s.frame.point).collect();
    let periodic = rb.closed();
    let dt = rb.dt();
    (0..pts.len())
        .map(|i| {
            let s = &rb.samples[i];
            let n = grid_derivative(&pts, i, dt, periodic).cross(&s.ruling).normalize();
            (n - s.frame.normal).norm().min((n + s.frame.normal).norm())
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarRibbonSample {
    pub t: f64,
    /// Unit planar ruling.
    pub ruling: Vec2,
    pub w_minus: f64,
    pub w_plus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarRibbon {
    pub center: PlanarCurve,
    pub samples: Vec<PlanarRibbonSample>,
    /// Closed polygons bounding the strip: the `u = w₊` edge forward, then
    /// the `u = w₋` edge backward.
    pub outline: Vec<Vec<Vec2>>,
}

impl PlanarRibbon {
    /// `+1` when the `w₊` edge lies to the left of the developed center
    /// curve, `−1` when it lies to the right.
    pub fn orientation(&self) -> f64 {
        let left: f64 = (0..self.samples.len())
            .map(|i| {
                let (e, r) = (self.center.tangent(i), self.samples[i].ruling);
                (e.x * r.y - e.y * r.x).signum()
            })
            .sum();
        if left < 0.0 { -1.0 } else { 1.0 }
    }

    pub fn point(&self, i: usize, u: f64) -> Vec2 {
        self.center.samples[i].point + self.samples[i].ruling * u
    }

    pub fn lattice_on(&self, us: &[f64]) -> Lattice {
        let points = (0..self.samples.len())
            .flat_map(|i| {
                us.iter().map(move |&u| {
                    let p = self.point(i, u);
                    Vec3::new(p.x, p.y, 0.0)
                })
            })
            .collect();
        Lattice { n_t: self.samples.len(), n_u: us.len(), points }
    }
}

/// Planar development of a ribbon along the development `p` of its center.
///
/// The planar ruling has the same coordinates in `{γ̃'/|γ̃'|, J γ̃'/|γ̃'|}` as
/// `β` has in `{e, h}`.
pub fn develop_ribbon(rb: &Ribbon, p: &PlanarCurve) -> Result<PlanarRibbon> {
    if p.len() != rb.len() {
        return Err(GeomError::GridMismatch(format!(
            "ribbon has {} samples, development has {}",
            rb.len(),
            p.len()
        )));
    }
    let tol = 1e-9 * (1.0 + rb.center.interval.0.abs().max(rb.center.interval.1.abs()));
    let mut samples = Vec::with_capacity(rb.len());
    for (i, (s, q)) in rb.samples.iter().zip(&p.samples).enumerate() {
        if (s.t() - q.t).abs() > tol {
            return Err(GeomError::GridMismatch(format!(
                "sample {i}: ribbon t = {}, development t = {}",
                s.t(),
                q.t
            )));
        }
        let (a, b) = (s.ruling.dot(&s.frame.e), s.ruling.dot(&s.frame.h));
        let e = p.tangent(i);
        let h = Vec2::new(-e.y, e.x);
        samples.push(PlanarRibbonSample {
            t: s.t(),
            ruling: (e * a + h * b).normalize(),
            w_minus: s.w_minus,
            w_plus: s.w_plus,
        });
    }
    let mut prb = PlanarRibbon { center: p.clone(), samples, outline: Vec::new() };
    let n = prb.samples.len();
    let mut poly: Vec<Vec2> = (0..n).map(|i| prb.point(i, prb.samples[i].w_plus)).collect();
    poly.extend((0..n).rev().map(|i| prb.point(i, prb.samples[i].w_minus)));
    prb.outline = vec![poly];
    Ok(prb)
}

/// Largest difference of `(E, F, G)` between the ribbon and its development on
/// a matched `n_t × n_u` lattice spanning the common width band.
pub fn isometry_defect(rb: &Ribbon, prb: &PlanarRibbon, n_u: usize) -> Result<f64> {
    if prb.samples.len() != rb.len() {
        return Err(GeomError::GridMismatch("ribbon and planar ribbon differ in length".into()));
    }
    let (lo, hi) = rb.common_band();
    let us = uniform_grid(lo, hi, n_u);
    let (dt, du) = (rb.dt(), (hi - lo) / (n_u - 1) as f64);
    let a = rb.lattice_on(&us).first_fundamental_form(dt, du);
    let b = prb.lattice_on(&us).first_fundamental_form(dt, du);
    Ok(a.iter()
        .zip(&b)
        .flat_map(|(x, y)| (0..3).map(move |k| (x[k] - y[k]).abs()))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{CirclePath, LinePath};
    use crate::development::develop_curve;
    use crate::surface::ParametricSurface;
    use std::f64::consts::{PI, TAU};
    use std::sync::Arc;

    fn frame(kn: f64, tg: f64) -> DarbouxSample {
        DarbouxSample {
            t: 0.0,
            point: Vec3::zeros(),
            e: Vec3::x(),
            h: Vec3::y(),
            normal: Vec3::z(),
            speed: 1.0,
            kg: 0.0,
            kn,
            tg,
        }
    }

    fn cylinder_circle() -> CurveOnSurface {
        let path = Arc::new(LinePath { origin: [0.0, 0.5], direction: [1.0, 0.0] });
        CurveOnSurface::new("ring", Arc::new(ParametricSurface::cylinder(1.0)), path, (0.0, TAU), true)
            .unwrap()
    }

    #[test]
    fn zero_torsion_gives_normal_ruling() {
        assert_eq!(ruling_direction(&frame(2.0, 0.0)).unwrap(), Vec3::y());
        assert_eq!(ruling_direction(&frame(-2.0, 0.0)).unwrap(), -Vec3::y());
    }

    #[test]
    fn vanishing_normal_curvature_is_rejected() {
        assert!(matches!(
            ruling_direction(&frame(0.0, 1.0)),
            Err(GeomError::VanishingNormalCurvature { .. })
        ));
        assert!(ruling_direction(&frame(0.0, 0.0)).is_err());
    }

    #[test]
    fn cylinder_band_has_axial_rulings_and_no_striction() {
        let rb = build_ribbon(&cylinder_circle(), 128, 0.2).unwrap();
        assert!(!rb.mobius);
        assert!(rb.cone_point.is_none());
        for s in &rb.samples {
            assert!(s.ruling.cross(&Vec3::z()).norm() < 1e-12);
        }
        assert!(matches!(striction_curve(&rb), Err(GeomError::UndefinedStriction { .. })));
        assert_eq!(default_width(&rb).unwrap(), None);
        assert!(flatness_residual(&rb).unwrap() < 1e-12);
    }

    #[test]
    fn sphere_latitude_ribbon_is_a_cone() {
        let sphere = Arc::new(ParametricSurface::sphere(1.0));
        let theta = PI / 3.0;
        let path = Arc::new(LinePath { origin: [theta, 0.0], direction: [0.0, 1.0] });
        let c = CurveOnSurface::new("lat", sphere, path, (0.0, TAU), true).unwrap();
        let rb = build_ribbon(&c, 256, 0.1).unwrap();
        let apex = rb.cone_point.expect("cone");
        // Tangent cone of the sphere along the colatitude circle θ has its
        // apex on the axis at height 1 / cos θ.
        assert!((apex - Vec3::new(0.0, 0.0, 1.0 / theta.cos())).norm() < 1e-8);
    }

    #[test]
    fn planar_circle_ribbon_develops_to_itself() {
        let path = Arc::new(CirclePath { center: [0.0, 0.0], radius: 1.0, rate: 1.0, phase: 0.0 });
        let c = CurveOnSurface::new("circle", Arc::new(ParametricSurface::plane()), path, (0.0, TAU), true)
            .unwrap();
        // κ_n = 0 in the plane: no Cartan ruling.
        assert!(build_ribbon(&c, 64, 0.1).is_err());
        let frames = sample_curve(&c, 512).unwrap();
        let rulings = frames.iter().map(|d| d.h).collect();
        let rb = Ribbon::from_rulings(c.clone(), frames, rulings, 0.1).unwrap();
        assert!(flatness_residual(&rb).unwrap() < 1e-12);
        let p = develop_curve(&c, 512).unwrap();
        let prb = develop_ribbon(&rb, &p).unwrap();
        let d = isometry_defect(&rb, &prb, 5).unwrap();
        assert!(d < 1e-10, "{d}");
    }

    #[test]
    fn zero_torsion_planar_ruling_is_normal() {
        let c = cylinder_circle();
        let rb = build_ribbon(&c, 128, 0.2).unwrap();
        let p = develop_curve(&c, 128).unwrap();
        let prb = develop_ribbon(&rb, &p).unwrap();
        for (i, s) in prb.samples.iter().enumerate() {
            assert!(s.ruling.dot(&p.tangent(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_width_outline_is_center_curve() {
        let c = cylinder_circle();
        let mut rb = build_ribbon(&c, 64, 0.2).unwrap();
        for s in &mut rb.samples {
            s.w_minus = 0.0;
            s.w_plus = 0.0;
        }
        let p = develop_curve(&c, 64).unwrap();
        let prb = develop_ribbon(&rb, &p).unwrap();
        let poly = &prb.outline[0];
        assert_eq!(poly.len(), 2 * p.len());
        for (i, q) in poly.iter().take(p.len()).enumerate() {
            assert_eq!(*q, p.samples[i].point);
        }
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let c = cylinder_circle();
        let rb = build_ribbon(&c, 64, 0.2).unwrap();
        let p = develop_curve(&c, 128).unwrap();
        assert!(matches!(develop_ribbon(&rb, &p), Err(GeomError::GridMismatch(_))));
    }

    #[test]
    fn too_few_samples_for_flatness() {
        let c = cylinder_circle();
        let mut rb = build_ribbon(&c, 64, 0.2).unwrap();
        rb.samples.truncate(4);
        assert!(matches!(flatness_residual(&rb), Err(GeomError::TooFewSamples { .. })));
    }

    #[test]
    fn flat_lattice_has_no_defect() {
        let us = uniform_grid(-1.0, 1.0, 5);
        let points = (0..6)
            .flat_map(|i| us.iter().map(move |&u| Vec3::new(i as f64 * 0.3, u + 0.1 * i as f64, 0.0)))
            .collect();
        let lat = Lattice { n_t: 6, n_u: 5, points };
        for d in lat.angle_defects() {
            assert!(d[0].abs() < 1e-12 && d[1].abs() < 1e-12);
        }
    }
}
