//! Parametric surfaces, their derivative jets, normals and curvature.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::jet::Jet2;
use crate::Vec3;

/// Default lower bound on `|σ_u × σ_v|`.
pub const REGULARITY_THRESHOLD: f64 = 1e-9;
/// Default distance kept from the umbilic edges of the ellipsoid octant chart.
pub const UMBILIC_MARGIN: f64 = 1e-4;

/// Position and first/second partial derivatives of a chart at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub point: Vec3,
    pub du: Vec3,
    pub dv: Vec3,
    pub duu: Vec3,
    pub duv: Vec3,
    pub dvv: Vec3,
}

impl SurfaceJet {
    fn from_jets(c: [Jet2; 3]) -> Self {
        let pick = |f: fn(&Jet2) -> f64| Vec3::new(f(&c[0]), f(&c[1]), f(&c[2]));
        SurfaceJet {
            point: pick(|j| j.v),
            du: pick(|j| j.du),
            dv: pick(|j| j.dv),
            duu: pick(|j| j.duu),
            duv: pick(|j| j.duv),
            dvv: pick(|j| j.dvv),
        }
    }

    /// Unnormalized normal `σ_u × σ_v`.
    pub fn cross(&self) -> Vec3 {
        self.du.cross(&self.dv)
    }

    pub fn is_finite(&self) -> bool {
        [self.point, self.du, self.dv, self.duu, self.duv, self.dvv]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
    }
}

pub type ChartFn = Arc<dyn Fn(f64, f64) -> Vec3 + Send + Sync>;

#[derive(Clone)]
pub enum SurfaceKind {
    Plane,
    Cylinder { radius: f64 },
    Sphere { radius: f64 },
    Torus { major: f64, minor: f64 },
    /// One octant of the curvature-line chart of `x²/a + y²/b + z²/c = 1`,
    /// with `u ∈ (b, a)`, `v ∈ (c, b)` and a sign per coordinate.
    EllipsoidOctant { a: f64, b: f64, c: f64, signs: [f64; 3] },
    /// The same curvature-line net in angular coordinates
    /// `u = a cos²ψ + b sin²ψ`, `v = c cos²φ + b sin²φ`; smooth across all
    /// octants and singular only at the four umbilics.
    Ellipsoid { a: f64, b: f64, c: f64 },
    /// User-supplied chart; jets come from central differences.
    Custom(ChartFn),
}

impl fmt::Debug for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::Plane => write!(f, "Plane"),
            SurfaceKind::Cylinder { radius } => write!(f, "Cylinder({radius})"),
            SurfaceKind::Sphere { radius } => write!(f, "Sphere({radius})"),
            SurfaceKind::Torus { major, minor } => write!(f, "Torus({major}, {minor})"),
            SurfaceKind::EllipsoidOctant { a, b, c, signs } => {
                write!(f, "EllipsoidOctant({a}, {b}, {c}, {signs:?})")
            }
            SurfaceKind::Ellipsoid { a, b, c } => write!(f, "Ellipsoid({a}, {b}, {c})"),
            SurfaceKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A twice differentiable chart `(u, v) ↦ σ(u, v)` over a parameter box.
#[derive(Debug, Clone)]
pub struct ParametricSurface {
    pub name: String,
    pub kind: SurfaceKind,
    /// `[(u0, u1), (v0, v1)]`; infinite bounds are allowed.
    pub domain: [(f64, f64); 2],
    /// Period per axis, if the chart is periodic in it.
    pub period: [Option<f64>; 2],
    pub regularity: f64,
}

impl ParametricSurface {
    pub fn new(name: impl Into<String>, kind: SurfaceKind, domain: [(f64, f64); 2]) -> Self {
        Self { name: name.into(), kind, domain, period: [None, None], regularity: REGULARITY_THRESHOLD }
    }

    pub fn with_period(mut self, period: [Option<f64>; 2]) -> Self {
        self.period = period;
        self
    }

    pub fn custom(
        name: impl Into<String>,
        domain: [(f64, f64); 2],
        chart: impl Fn(f64, f64) -> Vec3 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, SurfaceKind::Custom(Arc::new(chart)), domain)
    }

    pub fn plane() -> Self {
        Self::new("plane", SurfaceKind::Plane, [(f64::NEG_INFINITY, f64::INFINITY); 2])
    }

    pub fn cylinder(radius: f64) -> Self {
        Self::new("cylinder", SurfaceKind::Cylinder { radius }, [(-PI, PI), (f64::NEG_INFINITY, f64::INFINITY)])
            .with_period([Some(TAU), None])
    }

    pub fn sphere(radius: f64) -> Self {
        Self::new("sphere", SurfaceKind::Sphere { radius }, [(0.0, PI), (-PI, PI)])
            .with_period([None, Some(TAU)])
    }

    pub fn torus(major: f64, minor: f64) -> Self {
        Self::new("torus", SurfaceKind::Torus { major, minor }, [(-PI, PI), (-PI, PI)])
            .with_period([Some(TAU), Some(TAU)])
    }

    pub fn ellipsoid_octant(a: f64, b: f64, c: f64, signs: [f64; 3], margin: f64) -> Result<Self> {
        check_axes("ellipsoid-octant", a, b, c)?;
        if signs.iter().any(|s| s.abs() != 1.0) {
            return Err(GeomError::BadParams {
                surface: "ellipsoid-octant".into(),
                reason: "octant signs must be ±1".into(),
            });
        }
        if !(margin >= 0.0 && 2.0 * margin < (b - c).min(a - b)) {
            return Err(GeomError::BadParams {
                surface: "ellipsoid-octant".into(),
                reason: format!("umbilic margin {margin} too large"),
            });
        }
        Ok(Self::new(
            "ellipsoid-octant",
            SurfaceKind::EllipsoidOctant { a, b, c, signs },
            [(b + margin, a - margin), (c + margin, b - margin)],
        ))
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Result<Self> {
        check_axes("ellipsoid", a, b, c)?;
        Ok(Self::new("ellipsoid", SurfaceKind::Ellipsoid { a, b, c }, [(-PI, PI), (-PI, PI)])
            .with_period([Some(TAU), Some(TAU)]))
    }

    /// Builds one of the named example surfaces.
    ///
    /// | name | params |
    /// |---|---|
    /// | `plane` | none |
    /// | `cylinder` | `[radius]` (default 1) |
    /// | `sphere` | `[radius]` (default 1) |
    /// | `torus` | `[major, minor]` (default 2, 1) |
    /// | `ellipsoid-octant` | `[a, b, c, sx, sy, sz]`, signs ±1 (default all +) |
    /// | `ellipsoid` | `[a, b, c]` |
    pub fn builtin(name: &str, params: &[f64]) -> Result<Self> {
        let bad = |reason: &str| GeomError::BadParams { surface: name.to_string(), reason: reason.to_string() };
        let positive = |x: f64| x.is_finite() && x > 0.0;
        match name {
            "plane" => {
                if !params.is_empty() {
                    return Err(bad("plane takes no parameters"));
                }
                Ok(Self::plane())
            }
            "cylinder" | "sphere" => {
                let r = match params {
                    [] => 1.0,
                    [r] if positive(*r) => *r,
                    _ => return Err(bad("expected one positive radius")),
                };
                Ok(if name == "cylinder" { Self::cylinder(r) } else { Self::sphere(r) })
            }
            "torus" => match params {
                [] => Ok(Self::torus(2.0, 1.0)),
                [big, small] if positive(*big) && positive(*small) && small < big => {
                    Ok(Self::torus(*big, *small))
                }
                _ => Err(bad("expected major > minor > 0")),
            },
            "ellipsoid-octant" => match params {
                [a, b, c] => Self::ellipsoid_octant(*a, *b, *c, [1.0; 3], UMBILIC_MARGIN),
                [a, b, c, sx, sy, sz] => {
                    Self::ellipsoid_octant(*a, *b, *c, [*sx, *sy, *sz], UMBILIC_MARGIN)
                }
                _ => Err(bad("expected a, b, c and optional three octant signs")),
            },
            "ellipsoid" => match params {
                [a, b, c] => Self::ellipsoid(*a, *b, *c),
                _ => Err(bad("expected a, b, c")),
            },
            _ => Err(GeomError::UnknownSurface(name.to_string())),
        }
    }

    fn check_domain(&self, u: f64, v: f64) -> Result<()> {
        for (axis, x) in [u, v].into_iter().enumerate() {
            if !x.is_finite() {
                return Err(GeomError::OutsideDomain { u, v });
            }
            if self.period[axis].is_some() {
                continue;
            }
            let (lo, hi) = self.domain[axis];
            let slack = 1e-12 * (1.0 + x.abs());
            if x < lo - slack || x > hi + slack {
                return Err(GeomError::OutsideDomain { u, v });
            }
        }
        Ok(())
    }

    /// Chart point without derivatives.
    pub fn point(&self, u: f64, v: f64) -> Result<Vec3> {
        Ok(self.jet(u, v)?.point)
    }

    /// Exact derivative jet (builtins) or central-difference jet (custom charts).
    pub fn jet(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        self.check_domain(u, v)?;
        let jet = match &self.kind {
            SurfaceKind::Custom(f) => fd_jet(f.as_ref(), u, v),
            kind => SurfaceJet::from_jets(eval_builtin(kind, Jet2::var_u(u), Jet2::var_v(v))),
        };
        if !jet.is_finite() {
            return Err(GeomError::DegenerateChart { u, v, norm: f64::NAN });
        }
        Ok(jet)
    }

    /// Jet checked for regularity, together with `σ_u × σ_v` and its norm.
    pub fn regular_jet(&self, u: f64, v: f64) -> Result<(SurfaceJet, Vec3, f64)> {
        let j = self.jet(u, v)?;
        let n = j.cross();
        let norm = n.norm();
        if !(norm > self.regularity) {
            return Err(GeomError::DegenerateChart { u, v, norm });
        }
        Ok((j, n, norm))
    }

    /// `N = normalize(σ_u × σ_v)`.
    pub fn unit_normal(&self, u: f64, v: f64) -> Result<Vec3> {
        let (_, n, norm) = self.regular_jet(u, v)?;
        Ok(n / norm)
    }

    /// Gauss curvature `det II / det I`.
    pub fn gauss_curvature(&self, u: f64, v: f64) -> Result<f64> {
        let (j, n, norm) = self.regular_jet(u, v)?;
        let nn = n / norm;
        let (e, f, g) = (j.du.dot(&j.du), j.du.dot(&j.dv), j.dv.dot(&j.dv));
        let (l, m, nm) = (j.duu.dot(&nn), j.duv.dot(&nn), j.dvv.dot(&nn));
        Ok((l * nm - m * m) / (e * g - f * f))
    }

    /// Area element `|σ_u × σ_v|`.
    pub fn area_element(&self, u: f64, v: f64) -> Result<f64> {
        Ok(self.regular_jet(u, v)?.2)
    }
}

fn check_axes(surface: &str, a: f64, b: f64, c: f64) -> Result<()> {
    if !(a.is_finite() && a > b && b > c && c > 0.0) {
        return Err(GeomError::BadParams {
            surface: surface.into(),
            reason: format!("need a > b > c > 0, got ({a}, {b}, {c})"),
        });
    }
    Ok(())
}

fn eval_builtin(kind: &SurfaceKind, u: Jet2, v: Jet2) -> [Jet2; 3] {
    match *kind {
        SurfaceKind::Plane => [u, v, Jet2::constant(0.0)],
        SurfaceKind::Cylinder { radius } => [u.cos() * radius, u.sin() * radius, v],
        SurfaceKind::Sphere { radius } => {
            let s = u.sin();
            [s * v.cos() * radius, s * v.sin() * radius, u.cos() * radius]
        }
        SurfaceKind::Torus { major, minor } => {
            let ring = u.cos() * minor + major;
            [ring * v.cos(), ring * v.sin(), u.sin() * minor]
        }
        SurfaceKind::EllipsoidOctant { a, b, c, signs } => {
            let x = (a * (a - u) * (a - v) * (1.0 / ((a - b) * (a - c)))).sqrt();
            let y = (b * (b - u) * (b - v) * (1.0 / ((b - a) * (b - c)))).sqrt();
            let z = (c * (c - u) * (c - v) * (1.0 / ((c - a) * (c - b)))).sqrt();
            [x * signs[0], y * signs[1], z * signs[2]]
        }
        SurfaceKind::Ellipsoid { a, b, c } => {
            let (sp, cp) = (u.sin(), u.cos());
            let (sf, cf) = (v.sin(), v.cos());
            let uu = cp * cp * a + sp * sp * b;
            let vv = cf * cf * c + sf * sf * b;
            let x = sp * ((a - vv) * (1.0 / (a - c))).sqrt() * a.sqrt();
            let y = cp * cf * b.sqrt();
            let z = sf * ((uu - c) * (1.0 / (a - c))).sqrt() * c.sqrt();
            [x, y, z]
        }
        SurfaceKind::Custom(_) => unreachable!("custom charts use finite differences"),
    }
}

fn fd_jet(f: &(dyn Fn(f64, f64) -> Vec3 + Send + Sync), u: f64, v: f64) -> SurfaceJet {
    let h1u = f64::EPSILON.cbrt() * u.abs().max(1.0);
    let h1v = f64::EPSILON.cbrt() * v.abs().max(1.0);
    let h2u = f64::EPSILON.powf(0.25) * u.abs().max(1.0);
    let h2v = f64::EPSILON.powf(0.25) * v.abs().max(1.0);
    let p = f(u, v);
    SurfaceJet {
        point: p,
        du: (f(u + h1u, v) - f(u - h1u, v)) / (2.0 * h1u),
        dv: (f(u, v + h1v) - f(u, v - h1v)) / (2.0 * h1v),
        duu: (f(u + h2u, v) - 2.0 * p + f(u - h2u, v)) / (h2u * h2u),
        dvv: (f(u, v + h2v) - 2.0 * p + f(u, v - h2v)) / (h2v * h2v),
        duv: (f(u + h2u, v + h2v) - f(u + h2u, v - h2v) - f(u - h2u, v + h2v) + f(u - h2u, v - h2v))
            / (4.0 * h2u * h2v),
    }
}
