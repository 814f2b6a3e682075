//! Mutual trimming of provisional ribbons along their intersection curves,
//! and extraction of the wedge curves.

use rayon::prelude::*;

use crate::error::{GeomError, Result};
use crate::numeric::fd_step;
use crate::ribbon::{ruling_at, PlanarRibbon, Ribbon, RibbonSample};
use crate::{Mat3, Vec2, Vec3};

/// Fraction of the parameter interval excluded around `t` in self-contact
/// searches.
pub const GUARD_FRACTION: f64 = 0.05;
/// Rulings closer to parallel than this are treated as coincident sheets.
const PARALLEL_TOLERANCE: f64 = 1e-9;
/// `|r · n|` below this marks a grazing (non-transversal) hit.
const GRAZING_TOLERANCE: f64 = 1e-8;
/// Interpolation slack, as a fraction of the sample spacing, when deciding
/// whether a partner ruling still reaches a crossing.
const REACH_SLACK: f64 = 1.0;
/// Newton iterations and the largest relative move allowed when refining a
/// cut against the exact partner ribbon.
const REFINE_ITERATIONS: usize = 40;
const REFINE_REACH: f64 = 0.02;
/// Seeds on each side of the estimate, half a sample apart.
const REFINE_SEEDS: i32 = 4;
/// A ray passing a patch closer than this fraction of the patch size counts
/// as touching it.
const NEAR_MISS_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    pub fn of(u: f64) -> Side {
        if u < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    pub const BOTH: [Side; 2] = [Side::Minus, Side::Plus];
}

/// Where a ruling ray first meets another ribbon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    /// Distance along the ray (`|u|` on the cast ribbon).
    pub u: f64,
    pub partner: usize,
    /// Parameter and ruling coordinate of the hit on the partner.
    pub t_partner: f64,
    pub u_partner: f64,
    /// The two sheets coincide locally and the cut is the equal-parameter split.
    pub coincident: bool,
    pub grazing: bool,
}

#[derive(Debug, Clone, Copy)]
struct Aabb {
    lo: Vec3,
    hi: Vec3,
}

impl Aabb {
    fn of(points: &[Vec3], pad: f64) -> Self {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for p in points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        Self { lo: lo.add_scalar(-pad), hi: hi.add_scalar(pad) }
    }

    fn overlaps(&self, o: &Aabb) -> bool {
        (0..3).all(|k| self.lo[k] <= o.hi[k] && o.lo[k] <= self.hi[k])
    }
}

/// Provisional ribbon prepared for ray casting: one bilinear patch per
/// sample interval.
struct Target<'a> {
    rb: &'a Ribbon,
    boxes: Vec<Aabb>,
    bounds: Aabb,
}

impl<'a> Target<'a> {
    fn new(rb: &'a Ribbon) -> Self {
        let pad = 1e-9 * (1.0 + rb.samples[0].frame.point.norm());
        let corners = |k: usize| {
            let s = &rb.samples[k];
            [s.point(s.w_minus), s.point(s.w_plus)]
        };
        let boxes: Vec<Aabb> = (0..rb.len() - 1)
            .map(|k| {
                let [a, b] = corners(k);
                let [c, d] = corners(k + 1);
                // Room for near misses, which may pass just outside the patch.
                let size = (c - a).norm().max((d - b).norm());
                Aabb::of(&[a, b, c, d], pad + NEAR_MISS_TOLERANCE * size)
            })
            .collect();
        let all: Vec<Vec3> = boxes.iter().flat_map(|b| [b.lo, b.hi]).collect();
        Self { rb, bounds: Aabb::of(&all, 0.0), boxes }
    }
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    // a s² + b s + c = 0
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        return if b.abs() > 1e-14 * scale { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-14 * b * b {
        return Vec::new();
    }
    let sq = disc.max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let mut r = vec![q / a];
    if q != 0.0 {
        r.push(c / q);
    }
    r
}

/// Casts the ray `q0 + u r`, `0 < u ≤ reach`, against the provisional
/// ribbon `target`, skipping patches whose parameter lies within `guard.1`
/// of `guard.0` (self contact). Returns all crossings, nearest first.
fn cast(q0: Vec3, r: Vec3, reach: f64, target: &Target, partner: usize, guard: Option<(f64, f64)>) -> Vec<Hit> {
    let rb = target.rb;
    let ray_box = Aabb::of(&[q0, q0 + r * reach], 0.0);
    if !ray_box.overlaps(&target.bounds) {
        return Vec::new();
    }
    let (t0, t1) = rb.center.interval;
    let alpha = t1 - t0;
    let dt = rb.dt();
    let min_u = 1e-12 * reach.max(1.0);
    let mut found: Vec<Hit> = Vec::new();
    let mut misses: Vec<(Hit, f64)> = Vec::new();
    for (k, bx) in target.boxes.iter().enumerate() {
        if !bx.overlaps(&ray_box) {
            continue;
        }
        let (sa, sb) = (&rb.samples[k], &rb.samples[k + 1]);
        let guarded = |s: f64| {
            guard.is_some_and(|(ts, g)| {
                let tp = t0 + (k as f64 + s) * dt;
                let d = (tp - ts).abs();
                let d = if rb.closed() { d.min(alpha - d) } else { d };
                d < g
            })
        };
        let (g0, dg) = (sa.frame.point, sb.frame.point - sa.frame.point);
        let (b0, db) = (sa.ruling, sb.ruling - sa.ruling);
        let (wm0, dwm) = (sa.w_minus, sb.w_minus - sa.w_minus);
        let (wp0, dwp) = (sa.w_plus, sb.w_plus - sa.w_plus);
        let inside = |s: f64, up: f64| {
            let slack = 1e-12 * (1.0 + up.abs());
            up >= wm0 + s * dwm - slack && up <= wp0 + s * dwp + slack
        };
        let w0 = g0 - q0;
        let (c0, c1) = (r.cross(&b0), r.cross(&db));
        if c0.norm() < PARALLEL_TOLERANCE && (r.cross(&(b0 + db))).norm() < PARALLEL_TOLERANCE {
            // Rulings parallel to the ray: look for the ray line inside the sheet.
            let perp = |v: Vec3| v - b0 * v.dot(&b0);
            let (pw, pd) = (perp(-w0), perp(dg));
            let dd = pd.norm_squared();
            if dd == 0.0 {
                continue;
            }
            let s = (pw.dot(&pd) / dd).clamp(0.0, 1.0);
            let off = perp(-w0 - dg * s).norm();
            if off > 1e-9 * (1.0 + dg.norm()) || guarded(s) {
                continue;
            }
            let beta = (b0 + db * s).normalize();
            let up0 = (q0 - g0 - dg * s).dot(&beta);
            let c = r.dot(&beta);
            // Equal-parameter split: |u| = |u'| with u' = up0 + c u.
            for u in [up0 / (1.0 - c), -up0 / (1.0 + c)] {
                if u.is_finite() && u > min_u && u <= reach {
                    let up = up0 + c * u;
                    if (u - up.abs()).abs() <= 1e-9 * (1.0 + u) && inside(s, up) {
                        found.push(Hit {
                            u,
                            partner,
                            t_partner: t0 + (k as f64 + s) * dt,
                            u_partner: up,
                            coincident: true,
                            grazing: false,
                        });
                    }
                }
            }
            continue;
        }
        let qa = dg.dot(&c1);
        let qb = dg.dot(&c0) + w0.dot(&c1);
        let qc = w0.dot(&c0);
        let size = dg.norm() + db.norm() * reach;
        let resolve = |s: f64, near_miss: bool| -> Option<Hit> {
            if !(-1e-12..=1.0 + 1e-12).contains(&s) || guarded(s) {
                return None;
            }
            let s = s.clamp(0.0, 1.0);
            let beta = b0 + db * s;
            let w = w0 + dg * s;
            let rb_cross = r.cross(&beta);
            let den = rb_cross.norm_squared();
            if den < PARALLEL_TOLERANCE * PARALLEL_TOLERANCE {
                return None;
            }
            let u = w.cross(&beta).dot(&rb_cross) / den;
            let up = w.cross(&r).dot(&rb_cross) / den;
            if near_miss && (q0 + r * u - (g0 + dg * s + beta * up)).norm() > NEAR_MISS_TOLERANCE * size {
                return None;
            }
            // The ruling is interpolated unnormalized; rescale u' to unit length.
            let up = up * beta.norm();
            if !(u > min_u && u <= reach) || !inside(s, up) {
                return None;
            }
            let normal = (dg + db * (up / beta.norm())).cross(&beta);
            let grazing =
                near_miss || (normal.norm() > 0.0 && r.dot(&normal).abs() < GRAZING_TOLERANCE * normal.norm());
            Some(Hit { u, partner, t_partner: t0 + (k as f64 + s) * dt, u_partner: up, coincident: false, grazing })
        };
        let real: Vec<Hit> = quadratic_roots(qa, qb, qc).into_iter().filter_map(|s| resolve(s, false)).collect();
        if real.is_empty() {
            // A ray that just misses the patch near a tangency: take the
            // closest approach (vertex of the quadratic or a patch edge).
            let gap = |s: f64| {
                let c = r.cross(&(b0 + db * s));
                (w0 + dg * s).dot(&c).abs() / c.norm()
            };
            let mut cands = vec![0.0, 1.0];
            if qa != 0.0 {
                cands.push((-qb / (2.0 * qa)).clamp(0.0, 1.0));
            }
            let s = cands.into_iter().min_by(|x, y| gap(*x).total_cmp(&gap(*y))).unwrap();
            misses.extend(resolve(s, true).map(|h| (h, size)));
        }
        found.extend(real);
    }
    // A near miss next to a genuine crossing is the crossing seen from the
    // neighbouring patch.
    let isolated: Vec<Hit> = misses
        .into_iter()
        .filter(|(m, size)| found.iter().all(|h| (h.u - m.u).abs() > *size))
        .map(|(m, _)| m)
        .collect();
    found.extend(isolated);
    found.sort_by(|a, b| a.u.total_cmp(&b.u));
    found
}

/// Accepted cut per sample and side of one ribbon.
type SideHits = Vec<[Option<Hit>; 2]>;

/// All crossings of every ruling of `rb` with the provisional `targets`,
/// per cast sample and side.
fn cast_ribbon(a: usize, rb: &Ribbon, targets: &[(usize, &Target)]) -> Vec<[Vec<Hit>; 2]> {
    let casts = if rb.closed() { rb.len() - 1 } else { rb.len() };
    let alpha = rb.center.interval.1 - rb.center.interval.0;
    (0..casts)
        .into_par_iter()
        .map(|i| {
            let s = &rb.samples[i];
            Side::BOTH.map(|side| {
                let reach = match side {
                    Side::Minus => -s.w_minus,
                    Side::Plus => s.w_plus,
                };
                let r = s.ruling * side.sign();
                let mut all = Vec::new();
                for &(b, target) in targets {
                    let guard = (b == a).then_some((s.t(), GUARD_FRACTION * alpha));
                    all.extend(cast(s.frame.point, r, reach, target, b, guard));
                }
                all
            })
        })
        .collect()
}

/// How far the rulings of ribbon `q` around parameter `t` currently reach on
/// `side`, interpolated between the neighbouring samples.
fn reach_at(q: &Ribbon, stops: &[[f64; 2]], t: f64, side: Side) -> f64 {
    let (t0, _) = q.center.interval;
    let x = ((t - t0) / q.dt()).clamp(0.0, (q.len() - 1) as f64);
    let k = (x.floor() as usize).min(q.len() - 2);
    let s = x - k as f64;
    let j = side as usize;
    let at = |i: usize| stops[if q.closed() && i == q.len() - 1 { 0 } else { i }][j];
    at(k) + (at(k + 1) - at(k)) * s
}

/// Widens all ribbons simultaneously. Crossings are visited in the order
/// in which the later of the two rulings through them arrives; a crossing
/// cuts its ruling when the partner sheet still reaches it at that moment.
/// Both rulings through a wedge point therefore stop there, while a
/// crossing with a part of the partner that is itself cut away earlier is
/// skipped.
fn trim_all(ribbons: &[Ribbon], cands: &[Vec<usize>]) -> Vec<SideHits> {
    let targets: Vec<Target> = ribbons.iter().map(Target::new).collect();
    let crossings: Vec<Vec<[Vec<Hit>; 2]>> = ribbons
        .iter()
        .enumerate()
        .map(|(a, rb)| {
            let ts: Vec<(usize, &Target)> = cands[a].iter().map(|&b| (b, &targets[b])).collect();
            cast_ribbon(a, rb, &ts)
        })
        .collect();
    let mut events: Vec<(f64, usize, usize, usize, Hit)> = Vec::new();
    for (a, per) in crossings.iter().enumerate() {
        for (i, sides) in per.iter().enumerate() {
            for (k, hs) in sides.iter().enumerate() {
                events.extend(hs.iter().map(|h| (h.u.max(h.u_partner.abs()), a, i, k, *h)));
            }
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut stops: Vec<Vec<[f64; 2]>> = ribbons
        .iter()
        .map(|rb| rb.samples.iter().map(|s| [-s.w_minus, s.w_plus]).collect())
        .collect();
    let mut hits: Vec<SideHits> = crossings.iter().map(|c| vec![[None, None]; c.len()]).collect();
    for (_, a, i, k, h) in events {
        if h.u >= stops[a][i][k] {
            continue;
        }
        let q = &ribbons[h.partner];
        let slack = REACH_SLACK * spacing_at(q, h.t_partner);
        if reach_at(q, &stops[h.partner], h.t_partner, Side::of(h.u_partner)) + slack < h.u_partner.abs() {
            continue;
        }
        stops[a][i][k] = h.u;
        hits[a][i][k] = Some(h);
    }
    for (rb, h) in ribbons.iter().zip(&mut hits) {
        h.par_iter_mut().enumerate().for_each(|(i, x)| {
            for (k, side) in Side::BOTH.into_iter().enumerate() {
                if let Some(hit) = &mut x[k] {
                    if !hit.coincident {
                        *hit = refine(&rb.samples[i], side, *hit, &ribbons[hit.partner]);
                    }
                }
            }
        });
        if rb.closed() {
            h.push(h[0]);
        }
    }
    hits
}

/// Exact point and ruling of `q` at `t`, and their `t`-derivatives; the
/// ruling sign follows the interpolated sample ruling.
fn exact_ruling(q: &Ribbon, t: f64) -> Option<(Vec3, Vec3, Vec3, Vec3)> {
    let c = &q.center;
    let (t0, _) = c.interval;
    let x = ((t - t0) / q.dt()).clamp(0.0, (q.len() - 1) as f64);
    let k = (x.floor() as usize).min(q.len() - 2);
    let s = x - k as f64;
    let reference = q.samples[k].ruling * (1.0 - s) + q.samples[k + 1].ruling * s;
    let f = c.darboux_frame(c.wrap(t)).ok()?;
    let beta = ruling_at(c, t, &reference).ok()?;
    let d = fd_step(t);
    let db = (ruling_at(c, t + d, &beta).ok()? - ruling_at(c, t - d, &beta).ok()?) / (2.0 * d);
    Some((f.point, f.e * f.speed, beta, db))
}

/// Newton refinement of a bilinear crossing against the exact partner
/// ribbon, seeded at a few partner parameters around the estimate so that
/// the nearest of two close crossings (next to a tangency) is found. Near a
/// tangency the system is singular; the pseudo-inverse step still
/// converges there. Without a converged solution nearby the bilinear
/// estimate is kept.
fn refine(src: &RibbonSample, side: Side, h: Hit, dst: &Ribbon) -> Hit {
    let q0 = src.frame.point;
    let r = src.ruling * side.sign();
    let scale = 1.0 + q0.norm() + h.u;
    let newton = |mut tp: f64| -> Option<(f64, f64, f64)> {
        let (mut u, mut up) = (h.u, h.u_partner);
        for _ in 0..REFINE_ITERATIONS {
            let (g, dg, beta, db) = exact_ruling(dst, tp)?;
            let f = q0 + r * u - (g + beta * up);
            if f.norm() < 1e-13 * scale {
                let moved = (u - h.u).abs().max((up - h.u_partner).abs());
                let near = moved <= REFINE_REACH * (1.0 + h.u) && (tp - h.t_partner).abs() <= 3.0 * dst.dt();
                return (near && u > 0.0).then_some((u, tp, up));
            }
            let j = Mat3::from_columns(&[r, -(dg + db * up), -beta]);
            let step = j.svd(true, true).solve(&(-f), 1e-12).ok()?;
            u += step[0];
            tp += step[1];
            up += step[2];
        }
        None
    };
    (-REFINE_SEEDS..=REFINE_SEEDS)
        .filter_map(|m| newton(h.t_partner + m as f64 * 0.5 * dst.dt()))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .map_or(h, |(u, tp, up)| Hit { u, t_partner: dst.center.wrap(tp), u_partner: up, ..h })
}

/// Distance between consecutive center samples of `q` near `t`.
fn spacing_at(q: &Ribbon, t: f64) -> f64 {
    let (t0, _) = q.center.interval;
    let k = (((t - t0) / q.dt()).floor().max(0.0) as usize).min(q.len() - 2);
    (q.samples[k + 1].frame.point - q.samples[k].frame.point).norm()
}

/// New widths per sample, `(w_minus, w_plus)`.
pub type Widths = Vec<(f64, f64)>;

fn apply(rb: &Ribbon, hits: &SideHits) -> Widths {
    rb.samples
        .iter()
        .zip(hits)
        .map(|(s, h)| {
            let wm = h[0].map_or(s.w_minus, |h| (-h.u).max(s.w_minus));
            let wp = h[1].map_or(s.w_plus, |h| h.u.min(s.w_plus));
            (wm, wp)
        })
        .collect()
}

/// One side of a wedge as seen from the ribbon whose edge it trims.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeSide {
    pub ribbon: usize,
    pub side: Side,
    /// Sample indices along the trimmed edge, in order.
    pub samples: Vec<usize>,
    /// Geodesic curvature of the trimmed edge in the developed ribbon, one
    /// value per sample (empty until [`Ribbonization::attach_curvatures`]).
    pub kappa: Vec<f64>,
    /// Planar edge lengths between consecutive samples.
    pub ds: Vec<f64>,
}

/// Samples at each open end of a wedge run whose turning belongs to the
/// vertex there rather than to the wedge. Cuts next to a vertex are
/// ill-conditioned (the rulings nearly focus), so the first few edge nodes
/// zigzag; their turning is part of the corner.
pub const END_ZONE: usize = 4;

impl WedgeSide {
    /// `∫ κ ds` along this edge run, or `None` before curvatures are
    /// attached. Open runs leave out [`END_ZONE`] samples at each end.
    pub fn integral(&self, closed: bool) -> Option<f64> {
        if self.kappa.is_empty() {
            return self.samples.is_empty().then_some(0.0);
        }
        let trace = EdgeTrace { kappa: self.kappa.clone(), ds: self.ds.clone() };
        if closed {
            return Some(trace.integral());
        }
        let m = self.kappa.len();
        let z = END_ZONE.min(m.saturating_sub(1) / 2);
        Some(EdgeTrace { kappa: trace.kappa[z..m - z].to_vec(), ds: trace.ds[z..m - 1 - z].to_vec() }.integral())
    }
}

/// A wedge curve shared by two ribbon edges (or two edges of one ribbon).
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeSegment {
    pub points: Vec<Vec3>,
    pub left: WedgeSide,
    /// The partner edge, when the partner's own cut matched this one.
    pub right: Option<WedgeSide>,
    pub partner: usize,
    pub closed: bool,
}

impl WedgeSegment {
    pub fn endpoints(&self) -> Option<[Vec3; 2]> {
        (!self.closed).then(|| [self.points[0], self.points[self.points.len() - 1]])
    }

    pub fn length(&self) -> f64 {
        let open: f64 = self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        if self.closed {
            open + (self.points[0] - self.points[self.points.len() - 1]).norm()
        } else {
            open
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacency {
    pub ribbon: usize,
    pub side: Side,
    pub neighbor: usize,
    pub neighbor_side: Side,
}

#[derive(Debug, Clone)]
pub struct Ribbonization {
    pub ribbons: Vec<Ribbon>,
    pub wedges: Vec<WedgeSegment>,
    pub adjacency: Vec<Adjacency>,
    /// Per-pair failures that did not abort the assembly.
    pub errors: Vec<GeomError>,
}

/// A maximal run of consecutive samples on one side cut by one partner.
#[derive(Debug, Clone)]
struct Run {
    ribbon: usize,
    side: Side,
    partner: usize,
    partner_side: Side,
    samples: Vec<usize>,
    points: Vec<Vec3>,
    closed: bool,
}

fn runs_of(a: usize, rb: &Ribbon, hits: &SideHits) -> Vec<Run> {
    let casts = if rb.closed() { rb.len() - 1 } else { rb.len() };
    let mut out = Vec::new();
    for (k, side) in Side::BOTH.into_iter().enumerate() {
        let key = |i: usize| hits[i][k].map(|h| h.partner);
        let mut runs: Vec<Vec<usize>> = Vec::new();
        for i in 0..casts {
            match (key(i), runs.last_mut()) {
                (Some(p), Some(run)) if key(*run.last().unwrap()) == Some(p) && *run.last().unwrap() + 1 == i => {
                    run.push(i)
                }
                (Some(_), _) => runs.push(vec![i]),
                (None, _) => {}
            }
        }
        let mut closed_loop = false;
        if rb.closed() && runs.len() > 1 {
            let last = runs.last().unwrap();
            if runs[0][0] == 0 && *last.last().unwrap() == casts - 1 && key(0) == key(casts - 1) {
                let mut tail = runs.pop().unwrap();
                tail.extend(runs[0].iter().copied());
                runs[0] = tail;
            }
        } else if rb.closed() && runs.len() == 1 && runs[0].len() == casts {
            closed_loop = true;
        }
        for run in runs {
            let first = hits[run[0]][k].unwrap();
            let ups: f64 = run.iter().map(|&i| hits[i][k].unwrap().u_partner).sum();
            let points = run
                .iter()
                .map(|&i| rb.samples[i].point(side.sign() * hits[i][k].unwrap().u))
                .collect();
            out.push(Run {
                ribbon: a,
                side,
                partner: first.partner,
                partner_side: Side::of(ups),
                samples: run,
                points,
                closed: closed_loop,
            });
        }
    }
    out
}

fn point_polyline_distance(p: &Vec3, line: &[Vec3]) -> f64 {
    if line.len() == 1 {
        return (p - line[0]).norm();
    }
    line.windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            let l = d.norm_squared();
            let s = if l > 0.0 { ((p - w[0]).dot(&d) / l).clamp(0.0, 1.0) } else { 0.0 };
            (p - (w[0] + d * s)).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

fn spacing(points: &[Vec3]) -> f64 {
    points.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max)
}

/// Pairs the runs seen from the two sides of each wedge.
fn merge_runs(runs: Vec<Run>) -> Vec<WedgeSegment> {
    let mut used = vec![false; runs.len()];
    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(runs[i].samples.len()));
    let mut out = Vec::new();
    for &x in &order {
        if used[x] {
            continue;
        }
        used[x] = true;
        let rx = &runs[x];
        let tol = 4.0 * spacing(&rx.points).max(1e-9);
        let mut best: Option<(usize, f64)> = None;
        for (y, ry) in runs.iter().enumerate() {
            if used[y]
                || ry.ribbon != rx.partner
                || ry.partner != rx.ribbon
                || ry.side != rx.partner_side
                || ry.partner_side != rx.side
            {
                continue;
            }
            let d = median(ry.points.iter().map(|p| point_polyline_distance(p, &rx.points)).collect());
            if d < tol && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((y, d));
            }
        }
        let side = |r: &Run| WedgeSide { ribbon: r.ribbon, side: r.side, samples: r.samples.clone(), kappa: Vec::new(), ds: Vec::new() };
        let right = best.map(|(y, _)| {
            used[y] = true;
            side(&runs[y])
        });
        out.push(WedgeSegment {
            points: rx.points.clone(),
            left: side(rx),
            right,
            partner: rx.partner,
            closed: rx.closed,
        });
    }
    out
}

fn ribbon_bounds(rb: &Ribbon) -> Aabb {
    Target::new(rb).bounds
}

/// Widths of `a` and `b` trimmed at their mutual intersection, and the wedge
/// segments between them.
pub fn solve_widths(a: &Ribbon, b: &Ribbon) -> Result<(Widths, Widths, Vec<WedgeSegment>)> {
    let hits = trim_all(&[a.clone(), b.clone()], &[vec![1], vec![0]]);
    finish_pair(a, b, &hits[0], &hits[1])
}

fn finish_pair(a: &Ribbon, b: &Ribbon, ha: &SideHits, hb: &SideHits) -> Result<(Widths, Widths, Vec<WedgeSegment>)> {
    let any = |h: &SideHits| h.iter().flatten().flatten().count();
    if any(ha) + any(hb) == 0 {
        return Err(GeomError::NoIntersection { a: a.center.name.clone(), b: b.center.name.clone() });
    }
    check_grazing(a, b, ha)?;
    check_grazing(b, a, hb)?;
    let mut runs = runs_of(0, a, ha);
    runs.extend(runs_of(1, b, hb));
    Ok((apply(a, ha), apply(b, hb), merge_runs(runs)))
}

/// Isolated tangential points (two wedge branches crossing) are part of a
/// regular wedge system; a cut that stays tangential over more than this
/// many consecutive samples is reported as non-transversal contact.
const GRAZING_RUN: usize = 4;

fn check_grazing(a: &Ribbon, b: &Ribbon, h: &SideHits) -> Result<()> {
    for k in 0..2 {
        let mut run: Vec<f64> = Vec::new();
        for (x, s) in h.iter().zip(&a.samples) {
            if x[k].is_some_and(|h| h.grazing) {
                run.push(s.t());
                continue;
            }
            if run.len() > GRAZING_RUN {
                break;
            }
            run.clear();
        }
        if run.len() > GRAZING_RUN {
            return Err(GeomError::NonTransversalContact {
                a: a.center.name.clone(),
                b: b.center.name.clone(),
                t0: run[0],
                t1: run[run.len() - 1],
            });
        }
    }
    Ok(())
}

/// Widths of a closed ribbon trimmed where it meets itself away from the
/// guard band, and the self-wedges.
pub fn self_trim(a: &Ribbon) -> Result<(Widths, Vec<WedgeSegment>)> {
    let h = trim_all(std::slice::from_ref(a), &[vec![0]]).pop().unwrap();
    if h.iter().flatten().flatten().count() == 0 {
        return Err(GeomError::NoIntersection { a: a.center.name.clone(), b: a.center.name.clone() });
    }
    check_grazing(a, a, &h)?;
    Ok((apply(a, &h), merge_runs(runs_of(0, a, &h))))
}

/// Trims all ribbons against every neighbour whose bounding box overlaps
/// (and against themselves), keeping the nearest cut per ruling.
pub fn assemble(ribbons: Vec<Ribbon>) -> Ribbonization {
    let boxes: Vec<Aabb> = ribbons.iter().map(ribbon_bounds).collect();
    let cands: Vec<Vec<usize>> = (0..ribbons.len())
        .map(|a| (0..ribbons.len()).filter(|&b| b == a || boxes[a].overlaps(&boxes[b])).collect())
        .collect();
    let all_hits = trim_all(&ribbons, &cands);
    let mut errors = Vec::new();
    for (a, hits) in all_hits.iter().enumerate() {
        for b in 0..ribbons.len() {
            let of_b: SideHits = hits.iter().map(|x| x.map(|h| h.filter(|h| h.partner == b))).collect();
            if let Err(e) = check_grazing(&ribbons[a], &ribbons[b], &of_b) {
                errors.push(e);
            }
        }
    }
    let mut runs = Vec::new();
    let mut trimmed = ribbons.clone();
    for (a, rb) in trimmed.iter_mut().enumerate() {
        runs.extend(runs_of(a, &ribbons[a], &all_hits[a]));
        for (s, (wm, wp)) in rb.samples.iter_mut().zip(apply(&ribbons[a], &all_hits[a])) {
            s.w_minus = wm;
            s.w_plus = wp;
        }
        rb.lattice = None;
    }
    let wedges = merge_runs(runs);
    let mut adjacency: Vec<Adjacency> = wedges
        .iter()
        .filter_map(|w| {
            w.right.as_ref().map(|r| Adjacency {
                ribbon: w.left.ribbon,
                side: w.left.side,
                neighbor: r.ribbon,
                neighbor_side: r.side,
            })
        })
        .collect();
    adjacency.sort_by_key(|a| (a.ribbon, a.side, a.neighbor, a.neighbor_side));
    adjacency.dedup();
    Ribbonization { ribbons: trimmed, wedges, adjacency, errors }
}

impl Ribbonization {
    /// Fills the per-sample geodesic curvature of each trimmed edge from the
    /// planar ribbons (same order as `ribbons`).
    pub fn attach_curvatures(&mut self, planar: &[PlanarRibbon]) {
        for w in &mut self.wedges {
            let closed = w.closed;
            for side in std::iter::once(&mut w.left).chain(w.right.as_mut()) {
                let trace = edge_curvature(&planar[side.ribbon], side.side, &side.samples, closed);
                side.kappa = trace.kappa;
                side.ds = trace.ds;
            }
        }
    }
}

/// Curvature samples of a planar edge run and the lengths between them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeTrace {
    /// Signed so that positive values bend towards the ribbon.
    pub kappa: Vec<f64>,
    /// `ds[k]` joins sample `k` to `k + 1` (and the last to the first when
    /// the run is closed).
    pub ds: Vec<f64>,
}

impl EdgeTrace {
    /// Composite trapezoid of `kappa` over arc length.
    pub fn integral(&self) -> f64 {
        let m = self.kappa.len();
        self.ds.iter().enumerate().map(|(k, l)| 0.5 * (self.kappa[k] + self.kappa[(k + 1) % m]) * l).sum()
    }
}

fn edge_width(p: &PlanarRibbon, side: Side, i: usize) -> f64 {
    let s = &p.samples[i];
    if side == Side::Plus { s.w_plus } else { s.w_minus }
}

/// Point of the planar edge at sample `i`. For closed ribbons, `i = casts`
/// is the seam copy of sample 0 and the left neighbour of sample 0 is
/// carried back across the seam by the development's holonomy.
fn edge_neighbours(p: &PlanarRibbon, side: Side, i: usize) -> (Vec2, Vec2, Vec2) {
    let n = p.samples.len();
    let at = |j: usize| p.point(j, edge_width(p, side, j));
    let cur = at(i);
    let prev = if i > 0 {
        at(i - 1)
    } else {
        let (a, b) = (&p.center.samples[0], &p.center.samples[n - 1]);
        let th = a.heading - b.heading;
        let q = at(n - 2) - b.point;
        let (c, s) = (th.cos(), th.sin());
        a.point + Vec2::new(c * q.x - s * q.y, s * q.x + c * q.y)
    };
    (prev, cur, at(i + 1))
}

/// Discrete curvature (turning per unit length) of a planar edge at the
/// given samples, signed so that the ribbon lies to the left of the
/// traversed edge. Open ribbons reuse the neighbour's value at their two ends.
pub fn edge_curvature(p: &PlanarRibbon, side: Side, samples: &[usize], closed: bool) -> EdgeTrace {
    let n = p.samples.len();
    let ribbon_closed = p.center.closed;
    let sign = -side.sign() * p.orientation();
    let node = |i: usize| -> Option<f64> {
        if !ribbon_closed && (i == 0 || i + 1 == n) {
            return None;
        }
        let (q0, q1, q2) = edge_neighbours(p, side, i);
        let (a, b) = (q1 - q0, q2 - q1);
        let turn = (a.x * b.y - a.y * b.x).atan2(a.dot(&b));
        Some(sign * 2.0 * turn / (a.norm() + b.norm()).max(f64::MIN_POSITIVE))
    };
    let kappa: Vec<f64> = samples
        .iter()
        .map(|&i| {
            node(i).unwrap_or_else(|| {
                let j = if i == 0 { 1.min(n - 1) } else { i - 1 };
                node(j).unwrap_or(0.0)
            })
        })
        .collect();
    let seg = |i: usize| {
        let j = i + 1;
        (p.point(j, edge_width(p, side, j)) - p.point(i, edge_width(p, side, i))).norm()
    };
    let m = samples.len();
    let links = if closed { m } else { m.saturating_sub(1) };
    let ds = (0..links).map(|k| seg(samples[k])).collect();
    EdgeTrace { kappa, ds }
}
