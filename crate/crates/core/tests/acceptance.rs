//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every reference value is computed here from an independent route
//! (closed forms, finite differences, brute force), never by calling the
//! code path under test twice.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use ribbon_core::assembly::solve_widths;
use ribbon_core::curve::{sample_curve, CurveOnSurface, LinePath, ParamPath, PathJet};
use ribbon_core::development::develop_curve;
use ribbon_core::pipeline::{run_pipeline, RunOptions};
use ribbon_core::ribbon::{
    build_ribbon, cap_at_striction, develop_ribbon, flatness_residual, isometry_defect, striction_curve,
    uniform_grid, Ribbon,
};
use ribbon_core::rolling::{angular_velocity, check_plane_rolling, motion_map, spin_matrix, FramedCurve};
use ribbon_core::scene::{parse_scene, SceneConfig};
use ribbon_core::surface::ParametricSurface;
use ribbon_core::topology::{polyhedron_euler, ribbon_boundary_curvature, HalfInteger, VertexCharacter};
use ribbon_core::{Mat3, Vec2, Vec3};

const TORUS_SCENE: &str = include_str!("../../../scenes/torus.scene");
const ELLIPSOID_SCENE: &str = include_str!("../../../scenes/ellipsoid.scene");

struct Outcome {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
}

impl Outcome {
    fn line(&self) -> String {
        format!("{} criterion {:>2} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.title, self.detail)
    }
}

fn scene(text: &str) -> SceneConfig {
    parse_scene(text.as_bytes()).expect("bundled scene parses")
}

/// `v = 0.3 sin t` around the unit cylinder: closed, neither geodesic nor a
/// curvature line.
#[derive(Debug)]
struct Wavy;

impl ParamPath for Wavy {
    fn eval(&self, t: f64) -> PathJet {
        PathJet { uv: [t, 0.3 * t.sin()], d1: [1.0, 0.3 * t.cos()], d2: [0.0, -0.3 * t.sin()] }
    }
}

/// The plane circle of radius `r` run at the non-uniform angle
/// `θ = t + 0.3 sin t`, so quadrature errors do not cancel by symmetry.
#[derive(Debug)]
struct UnevenCircle(f64);

impl ParamPath for UnevenCircle {
    fn eval(&self, t: f64) -> PathJet {
        let r = self.0;
        let (th, d, dd) = (t + 0.3 * t.sin(), 1.0 + 0.3 * t.cos(), -0.3 * t.sin());
        let (s, c) = th.sin_cos();
        PathJet {
            uv: [r * c, r * s],
            d1: [-r * s * d, r * c * d],
            d2: [-r * (c * d * d + s * dd), r * (-s * d * d + c * dd)],
        }
    }
}

struct Fixture {
    name: &'static str,
    curve: CurveOnSurface,
    width: f64,
}

fn fixtures() -> Vec<Fixture> {
    let torus = scene(TORUS_SCENE);
    let torus_surface = torus.build_surface().unwrap();
    let gamma1 = torus.build_curves(&torus_surface).unwrap().remove(0);
    let ellipsoid = Arc::new(ParametricSurface::ellipsoid(5.0, 4.0, 1.0).unwrap());
    let loop_path = Arc::new(LinePath { origin: [-PI, PI / 4.0], direction: [1.0, 0.0] });
    let cylinder = Arc::new(ParametricSurface::cylinder(1.0));
    let sphere = Arc::new(ParametricSurface::sphere(1.0));
    let latitude = Arc::new(LinePath { origin: [PI / 3.0, 0.0], direction: [0.0, 1.0] });
    vec![
        Fixture { name: "torus", curve: gamma1, width: 0.3 },
        Fixture {
            name: "ellipsoid",
            curve: CurveOnSurface::new("loop", ellipsoid, loop_path, (-PI, PI), true).unwrap(),
            width: 0.05,
        },
        Fixture {
            name: "cylinder",
            curve: CurveOnSurface::new("wavy", cylinder, Arc::new(Wavy), (-PI, PI), true).unwrap(),
            width: 0.4,
        },
        Fixture {
            name: "sphere",
            curve: CurveOnSurface::new("latitude", sphere, latitude, (-PI, PI), true).unwrap(),
            width: 0.3,
        },
    ]
}

fn fixture_ribbon(f: &Fixture, n: usize) -> Ribbon {
    let mut rb = build_ribbon(&f.curve, n, f.width).unwrap();
    cap_at_striction(&mut rb, 0.98).unwrap();
    rb
}

fn torus_topology() -> Outcome {
    let cfg = scene(TORUS_SCENE);
    let start = Instant::now();
    let r = run_pipeline(&cfg, &RunOptions::default());
    let secs = start.elapsed().as_secs_f64();
    let (Some(g), Some(a)) = (&r.graph, &r.audit) else {
        return Outcome { id: 1, title: "torus topology", pass: false, detail: r.text };
    };
    let pass = cfg.samples == 2048
        && g.vertices.is_empty()
        && a.chi == HalfInteger::from_int(0)
        && a.total.abs() <= 0.02 * TAU
        && secs <= 60.0;
    Outcome {
        id: 1,
        title: "torus topology",
        pass,
        detail: format!(
            "n = {}, {} vertices, χ = {}, audit total {:.3e} (limit {:.3e}), {secs:.2} s",
            cfg.samples,
            g.vertices.len(),
            a.chi,
            a.total,
            0.02 * TAU
        ),
    }
}

fn ellipsoid_topology() -> Outcome {
    let cfg = scene(ELLIPSOID_SCENE);
    let r = run_pipeline(&cfg, &RunOptions::default());
    let (Some(g), Some(a)) = (&r.graph, &r.audit) else {
        return Outcome { id: 2, title: "ellipsoid topology", pass: false, detail: r.text };
    };
    let degrees: Vec<usize> = g.vertices.iter().map(|v| v.degree).collect();
    let pass = cfg.curves.len() == 6
        && degrees == [1, 1, 1, 1]
        && g.vertices.iter().all(|v| v.character == VertexCharacter::WedgeEndPoint)
        && a.chi == HalfInteger::from_int(2)
        && (a.total - 2.0 * TAU).abs() <= 0.02 * TAU;
    Outcome {
        id: 2,
        title: "ellipsoid topology",
        pass,
        detail: format!(
            "{} ribbons, vertex degrees {degrees:?}, χ = {}, audit total/2π {:.6}",
            cfg.curves.len(),
            a.chi,
            a.normalized()
        ),
    }
}

/// Closed forms along the `u`-curves `v = const` of the curvature-line chart
/// of `x²/a + y²/b + z²/c = 1`.
struct ClosedForms {
    kg_rel: f64,
    tg_max: f64,
    /// Deviation of the striction points from the displayed `ζ` in `x, y`.
    zeta_xy: f64,
    /// Deviation in `z` from the displayed `ζ`.
    zeta_z: f64,
    /// Deviation in `z` once its denominator carries `a - c` instead of `a - b`.
    zeta_z_corrected: f64,
    /// Displayed `ζ_z` over computed `ζ_z`, extreme values over all points.
    z_ratio: (f64, f64),
}

fn closed_forms() -> ClosedForms {
    let (a, b, c) = (5.0, 4.0, 1.0);
    let s = Arc::new(ParametricSurface::ellipsoid_octant(a, b, c, [1.0; 3], 1e-4).unwrap());
    let mut out = ClosedForms {
        kg_rel: 0.0,
        tg_max: 0.0,
        zeta_xy: 0.0,
        zeta_z: 0.0,
        zeta_z_corrected: 0.0,
        z_ratio: (f64::INFINITY, f64::NEG_INFINITY),
    };
    for v in [1.5, 2.0, 3.0] {
        let path = Arc::new(LinePath { origin: [0.0, v], direction: [1.0, 0.0] });
        let curve = CurveOnSurface::new("u", s.clone(), path, (b + 0.01, a - 0.01), false).unwrap();
        let n = 245;
        let rb = build_ribbon(&curve, n, 0.01).unwrap();
        let zeta = striction_curve(&rb).unwrap();
        out.tg_max = out.tg_max.max(rb.samples.iter().map(|x| x.frame.tg.abs()).fold(0.0, f64::max));
        // 50 points, every fifth sample.
        for i in (0..=n).step_by(5) {
            let f = &rb.samples[i].frame;
            let t = f.t;
            let kg = ((a - v) * (b - v) * (v - c) / (v * (t - v).powi(3))).sqrt();
            out.kg_rel = out.kg_rel.max((f.kg.abs() - kg).abs() / kg);
            let x = (a * (a - t).powi(3) / ((a - v) * (a - b) * (a - c))).sqrt();
            let y = -(b * (t - b).powi(3) / ((b - v) * (a - b) * (b - c))).sqrt();
            let z_shown = (c * (t - c).powi(3) / ((v - c) * (a - b) * (b - c))).sqrt();
            let z_fixed = (c * (t - c).powi(3) / ((v - c) * (a - c) * (b - c))).sqrt();
            let z = zeta[i];
            out.zeta_xy = out.zeta_xy.max((z.x - x).abs()).max((z.y - y).abs());
            out.zeta_z = out.zeta_z.max((z.z - z_shown).abs());
            out.zeta_z_corrected = out.zeta_z_corrected.max((z.z - z_fixed).abs());
            let ratio = z_shown / z.z;
            out.z_ratio = (out.z_ratio.0.min(ratio), out.z_ratio.1.max(ratio));
        }
    }
    out
}

fn ellipsoid_closed_forms(f: &ClosedForms) -> Outcome {
    let pass = f.kg_rel < 1e-5 && f.zeta_xy < 1e-6 && f.zeta_z < 1e-6 && f.tg_max < 1e-7;
    let mut detail = format!(
        "κ_g rel {:.2e}, ζ x/y {:.2e}, ζ z {:.2e}, τ_g {:.2e}",
        f.kg_rel, f.zeta_xy, f.zeta_z, f.tg_max
    );
    if !pass {
        detail.push_str(&format!(
            "; displayed ζ_z / computed ζ_z in [{:.9}, {:.9}] (√((a−c)/(a−b)) = 2), \
             with (a−c) in the z denominator the deviation is {:.2e}",
            f.z_ratio.0, f.z_ratio.1, f.zeta_z_corrected
        ));
    }
    Outcome { id: 3, title: "ellipsoid closed forms", pass, detail }
}

/// The only tolerated failure of criterion 3: everything matches except the
/// displayed `z` component, which is off by exactly `√((a−c)/(a−b)) = 2`.
fn known_red_three(f: &ClosedForms) -> bool {
    f.kg_rel < 1e-5
        && f.zeta_xy < 1e-6
        && f.tg_max < 1e-7
        && f.zeta_z_corrected < 1e-6
        && (f.z_ratio.0 - 2.0).abs() < 1e-6
        && (f.z_ratio.1 - 2.0).abs() < 1e-6
}

fn isometry() -> Outcome {
    let mut parts = Vec::new();
    let mut worst: f64 = 0.0;
    for f in fixtures() {
        let rb = fixture_ribbon(&f, 512);
        let prb = develop_ribbon(&rb, &develop_curve(&f.curve, 512).unwrap()).unwrap();
        let d = isometry_defect(&rb, &prb, 17).unwrap();
        worst = worst.max(d);
        parts.push(format!("{} {d:.1e}", f.name));
    }
    Outcome {
        id: 4,
        title: "isometry",
        pass: worst < 1e-5,
        detail: format!("max |ΔE|,|ΔF|,|ΔG| on 513×17: {}", parts.join(", ")),
    }
}

/// Largest `|2π − Σ angles|` over interior lattice nodes, from the four
/// triangles around each node (both diagonals of every quad).
fn triangulated_defect(rb: &Ribbon, n_u: usize) -> f64 {
    let (lo, hi) = rb.common_band();
    let l = rb.lattice_on(&uniform_grid(lo, hi, n_u));
    let angle = |p: Vec3, a: Vec3, b: Vec3| (a - p).angle(&(b - p));
    let mut worst: f64 = 0.0;
    for i in 1..l.n_t - 1 {
        for j in 1..l.n_u - 1 {
            let p = l.at(i, j);
            let ring = [l.at(i + 1, j), l.at(i, j + 1), l.at(i - 1, j), l.at(i, j - 1)];
            let diag = [l.at(i + 1, j + 1), l.at(i - 1, j + 1), l.at(i - 1, j - 1), l.at(i + 1, j - 1)];
            // Fan through the diagonal neighbours: eight triangles.
            let sum: f64 = (0..4)
                .map(|k| angle(p, ring[k], diag[k]) + angle(p, diag[k], ring[(k + 1) % 4]))
                .sum();
            worst = worst.max((TAU - sum).abs());
        }
    }
    worst
}

fn flatness() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for f in fixtures() {
        let rb = fixture_ribbon(&f, 512);
        let res = flatness_residual(&rb).unwrap();
        let def = triangulated_defect(&rb, 17);
        ok &= res < 1e-5 && def < 1e-6;
        parts.push(format!("{} {res:.1e}/{def:.1e}", f.name));
    }
    let f = &fixtures()[0];
    let frames = sample_curve(&f.curve, 512).unwrap();
    let normals = frames.iter().map(|d| d.normal).collect();
    let control = Ribbon::from_rulings(f.curve.clone(), frames, normals, f.width).unwrap();
    let (res, def) = (flatness_residual(&control).unwrap(), triangulated_defect(&control, 17));
    let control_fails = res > 1e-5 && def > 1e-6;
    Outcome {
        id: 5,
        title: "flatness",
        pass: ok && control_fails,
        detail: format!("residual/defect: {}; normal-ruled control {res:.2e}/{def:.2e}", parts.join(", ")),
    }
}

/// Discrete Hausdorff distance by brute force.
fn hausdorff(a: &[Vec2], b: &[Vec2]) -> f64 {
    let one_way = |x: &[Vec2], y: &[Vec2]| {
        x.iter().map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

fn development() -> Outcome {
    let plane = Arc::new(ParametricSurface::plane());
    let circle = CurveOnSurface::new("circle", plane, Arc::new(UnevenCircle(2.0)), (-PI, PI), true).unwrap();
    let gaps: Vec<f64> =
        [256, 512, 1024, 2048].iter().map(|&n| develop_curve(&circle, n).unwrap().closed_gap).collect();
    let ratios: Vec<f64> = gaps.windows(2).take(2).map(|w| w[0] / w[1]).collect();
    // γ₂ is γ₁ turned a sixth of a revolution about the axis, so its
    // development, computed from its own samples, must coincide.
    let cfg = scene(TORUS_SCENE);
    let s = cfg.build_surface().unwrap();
    let curves = cfg.build_curves(&s).unwrap();
    let (p1, p2) = (develop_curve(&curves[0], 2048).unwrap(), develop_curve(&curves[1], 2048).unwrap());
    let hausdorff = hausdorff(&p1.points(), &p2.points());
    let pass = gaps[3] < 1e-6 && ratios.iter().all(|&r| r >= 8.0) && hausdorff < 1e-6;
    Outcome {
        id: 6,
        title: "development",
        pass,
        detail: format!(
            "circle gaps {:.2e} {:.2e} {:.2e} {:.2e}, reduction {:.1}× {:.1}×; torus planar curves {hausdorff:.2e} apart",
            gaps[0], gaps[1], gaps[2], gaps[3], ratios[0], ratios[1]
        ),
    }
}

fn rolling() -> Outcome {
    let (mut spin, mut normal, mut norm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for f in fixtures() {
        let dev = develop_curve(&f.curve, 2048).unwrap();
        let (a, b) = f.curve.interval;
        let rotation = |t: f64| {
            motion_map(&f.curve.frame_at(t).unwrap(), &FramedCurve::frame_at(&dev, t).unwrap()).rotation
        };
        for k in 1..32 {
            let t = dev.samples[k * 64].t;
            // Ω from a fourth-order central difference of R(t), against D̃ Ξ D̃ᵀ.
            let h = 1e-3 * (b - a);
            let dr: Mat3 = (rotation(t - 2.0 * h) - rotation(t + 2.0 * h)
                + (rotation(t + h) - rotation(t - h)) * 8.0)
                / (12.0 * h);
            let fd = dr * rotation(t).transpose();
            let src = f.curve.frame_at(t).unwrap();
            let dst = FramedCurve::frame_at(&dev, t).unwrap();
            spin = spin.max((fd - spin_matrix(&src, &dst)).abs().max());
            let m = check_plane_rolling(&f.curve, &dev, t, 1e-8).unwrap();
            let w = Vec3::from(m.omega_frame);
            normal = normal.max(m.omega_frame[2].abs() / w.norm());
            let pulled = angular_velocity(&f.curve, &dev, t, 1e-8).unwrap().omega_pulled;
            let expected = src.speed * src.kn.hypot(src.tg);
            norm = norm.max((Vec3::from(pulled).norm() - expected).abs());
        }
    }
    Outcome {
        id: 7,
        title: "rolling",
        pass: spin < 1e-5 && normal < 1e-7 && norm < 1e-9,
        detail: format!("|Ω_fd − D̃ΞD̃ᵀ| {spin:.2e}, |ω·Ñ|/‖ω‖ {normal:.2e}, ‖ω̂‖ vs speed·√(κ_n²+τ_g²) {norm:.2e}"),
    }
}

fn polyhedra() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let random_ok = (0..1000).all(|_| {
        let (f, e, v) = (rng.gen_range(0..1_000_000u64), rng.gen_range(0..1_000_000u64), rng.gen_range(0..1_000_000u64));
        let (ribbon, classic) = polyhedron_euler(f, e, v);
        ribbon == HalfInteger::from_int(v as i64 - e as i64 + f as i64) && classic == v as i64 - e as i64 + f as i64
    });
    let cube = polyhedron_euler(6, 12, 8).0;
    let tetra = polyhedron_euler(4, 6, 4).0;
    // An m × n quad grid on the torus: mn faces, 2mn edges, mn vertices.
    let grid = polyhedron_euler(24, 48, 24).0;
    let two = HalfInteger::from_int(2);
    Outcome {
        id: 8,
        title: "polyhedron formula",
        pass: random_ok && cube == two && tetra == two && grid == HalfInteger::from_int(0),
        detail: format!("1000 random triples {}, cube {cube}, tetrahedron {tetra}, torus grid {grid}", if random_ok { "exact" } else { "mismatch" }),
    }
}

fn cylinder_band(cut: bool) -> f64 {
    let s = Arc::new(ParametricSurface::cylinder(1.0));
    let c = CurveOnSurface::new("wavy", s, Arc::new(Wavy), (-PI, PI), true).unwrap();
    let rb = build_ribbon(&c, 512, 0.4).unwrap();
    let mut p = develop_ribbon(&rb, &develop_curve(&c, 512).unwrap()).unwrap();
    p.center.closed = !cut;
    let (edges, corners) = ribbon_boundary_curvature(&p);
    edges + corners
}

fn closed_ribbon() -> Outcome {
    let (closed, cut) = (cylinder_band(false), cylinder_band(true));
    Outcome {
        id: 9,
        title: "closed-ribbon nullity",
        pass: closed.abs() < 1e-3 * TAU && (cut - TAU).abs() < 1e-3 * TAU,
        detail: format!("closed band {closed:.2e}, cut along a ruler {:.6} (2π = {TAU:.6})", cut),
    }
}

/// First `u` on the lattice `k·du` at which a point of `a`'s ruling is
/// reached by `b` no later, i.e. from a ruling point of `b` with `|u_b| ≤ u`.
fn lattice_cut(a: &Ribbon, b: &Ribbon, i: usize, side: f64, du: f64, reach: f64) -> Option<f64> {
    let steps = (reach / du).round() as i64;
    for k in 0..=steps {
        let u = k as f64 * du;
        let p = a.point(i, side * u);
        let hit = b.samples.iter().any(|s| {
            (-k..=k).any(|l| (s.point(l as f64 * du) - p).norm() <= 0.5 * du)
        });
        if hit {
            return Some(u);
        }
    }
    None
}

fn oracle() -> Outcome {
    let s = Arc::new(ParametricSurface::cylinder(1.0));
    let d = 0.6;
    let band = |name: &str, v: f64| {
        let path = Arc::new(LinePath { origin: [-PI, v], direction: [1.0, 0.0] });
        let c = CurveOnSurface::new(name, s.clone(), path, (0.0, TAU), true).unwrap();
        build_ribbon(&c, 64, 1.0).unwrap()
    };
    let (a, b) = (band("low", 0.0), band("high", d));
    let (wa, wb, _) = solve_widths(&a, &b).unwrap();
    let du = 1.0 / 200.0;
    let mut worst: f64 = 0.0;
    let mut all_found = true;
    for (rb, other, ws) in [(&a, &b, &wa), (&b, &a, &wb)] {
        for (i, &(lo, hi)) in ws.iter().enumerate() {
            for (side, w) in [(-1.0, lo), (1.0, hi)] {
                match lattice_cut(rb, other, i, side, du, 1.0) {
                    Some(u) => worst = worst.max((w.abs() - u).abs()),
                    None => all_found &= (w.abs() - 1.0).abs() < 1e-12,
                }
            }
        }
    }
    Outcome {
        id: 10,
        title: "oracle equivalence",
        pass: all_found && worst <= du,
        detail: format!("two bands {d} apart on the unit cylinder, 64 samples: max |w − w_lattice| {worst:.2e} (cell {du}), symmetric answer d/2 = {}", d / 2.0),
    }
}

#[test]
fn acceptance() {
    let forms = closed_forms();
    let outcomes = vec![
        torus_topology(),
        ellipsoid_topology(),
        ellipsoid_closed_forms(&forms),
        isometry(),
        flatness(),
        development(),
        rolling(),
        polyhedra(),
        closed_ribbon(),
        oracle(),
    ];
    println!();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let unexpected: Vec<&Outcome> =
        outcomes.iter().filter(|o| !o.pass && !(o.id == 3 && known_red_three(&forms))).collect();
    assert!(unexpected.is_empty(), "failing criteria: {:?}", unexpected.iter().map(|o| o.id).collect::<Vec<_>>());
}
