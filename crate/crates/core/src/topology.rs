//! Vertices of the wedge system, the ribbon formula for χ, and a
//! Gauss–Bonnet audit of it.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::assembly::{edge_curvature, Ribbonization, Side, WedgeSegment};
use crate::error::{GeomError, Result};
use crate::ribbon::{PlanarRibbon, Ribbon};
use crate::{Vec2, Vec3};

/// Default spatial tolerance for clustering wedge ends.
pub const VERTEX_TOLERANCE: f64 = 1e-4;
/// Incident directions closer than this (radians) count once.
pub const DIRECTION_TOLERANCE: f64 = 1e-2;
/// Samples between a wedge end and the point fixing its direction.
const DIRECTION_REACH: usize = 3;

/// A number of the form `k/2`, stored as `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger(pub i64);

impl HalfInteger {
    pub fn from_int(n: i64) -> Self {
        HalfInteger(2 * n)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn as_integer(self) -> Option<i64> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexCharacter {
    ConePoint,
    WedgeEndPoint,
    ZeroContributing,
    Conventional,
}

impl VertexCharacter {
    pub fn from_degree(d: usize) -> Self {
        match d {
            0 => VertexCharacter::ConePoint,
            1 => VertexCharacter::WedgeEndPoint,
            2 => VertexCharacter::ZeroContributing,
            _ => VertexCharacter::Conventional,
        }
    }
}

impl fmt::Display for VertexCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexCharacter::ConePoint => "cone point",
            VertexCharacter::WedgeEndPoint => "wedge end point",
            VertexCharacter::ZeroContributing => "zero contributing",
            VertexCharacter::Conventional => "conventional",
        })
    }
}

/// One end of an open wedge segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentEnd {
    pub segment: usize,
    /// 0 for the first point, 1 for the last.
    pub end: usize,
    pub point: Vec3,
    /// Unit direction pointing into the segment.
    pub direction: Vec3,
    /// Normal of the trimmed ribbon's tangent plane along the end ruling.
    pub normal: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub point: Vec3,
    pub degree: usize,
    pub ends: Vec<SegmentEnd>,
    pub character: VertexCharacter,
    /// `β`, between angularly consecutive incident directions.
    pub inner_angles: Vec<f64>,
    /// `α = π − β`.
    pub outer_angles: Vec<f64>,
}

impl Vertex {
    /// Vertex with the given incident ends; angles are measured in the
    /// plane normal to `normal`.
    pub fn new(point: Vec3, ends: Vec<SegmentEnd>, normal: Vec3) -> Self {
        let dirs = distinct_directions(ends.iter().map(|e| e.direction));
        let degree = dirs.len();
        let inner_angles = inner_angles(&dirs, &normal);
        let outer_angles = inner_angles.iter().map(|b| PI - b).collect();
        Vertex { point, degree, ends, character: VertexCharacter::from_degree(degree), inner_angles, outer_angles }
    }

    pub fn cone(point: Vec3) -> Self {
        Vertex {
            point,
            degree: 0,
            ends: Vec::new(),
            character: VertexCharacter::ConePoint,
            inner_angles: Vec::new(),
            outer_angles: Vec::new(),
        }
    }
}

fn distinct_directions(dirs: impl Iterator<Item = Vec3>) -> Vec<Vec3> {
    let mut out: Vec<Vec3> = Vec::new();
    for d in dirs {
        if !out.iter().any(|o| o.angle(&d) < DIRECTION_TOLERANCE) {
            out.push(d);
        }
    }
    out
}

/// Gaps between the directions' polar angles around `normal`; they sum to 2π.
fn inner_angles(dirs: &[Vec3], normal: &Vec3) -> Vec<f64> {
    if dirs.is_empty() {
        return Vec::new();
    }
    let n = normal.try_normalize(0.0).unwrap_or_else(Vec3::z);
    let x = (dirs[0] - n * n.dot(&dirs[0])).try_normalize(0.0).unwrap_or_else(|| n.cross(&Vec3::x()).normalize());
    let y = n.cross(&x);
    let mut phi: Vec<f64> = dirs.iter().map(|d| d.dot(&y).atan2(d.dot(&x)).rem_euclid(TAU)).collect();
    phi.sort_by(|a, b| a.total_cmp(b));
    let m = phi.len();
    (0..m).map(|k| if k + 1 < m { phi[k + 1] - phi[k] } else { phi[0] + TAU - phi[k] }).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WedgeGraph {
    pub vertices: Vec<Vertex>,
    /// Per wedge segment, the vertex at each end (`None` for closed loops).
    pub links: Vec<[Option<usize>; 2]>,
}

fn ribbon_normal(rb: &Ribbon, i: usize) -> Vec3 {
    let s = &rb.samples[i];
    let n = s.frame.e.cross(&s.ruling);
    if n.dot(&s.frame.normal) < 0.0 {
        -n
    } else {
        n
    }
}

fn segment_ends(k: usize, w: &WedgeSegment, ribbons: &[Ribbon]) -> Vec<SegmentEnd> {
    let m = w.points.len();
    if w.closed || m < 2 {
        return Vec::new();
    }
    let reach = DIRECTION_REACH.min(m - 1);
    let rb = &ribbons[w.left.ribbon];
    [(0, 0, reach, w.left.samples[0]), (1, m - 1, m - 1 - reach, w.left.samples[w.left.samples.len() - 1])]
        .into_iter()
        .map(|(end, at, towards, sample)| SegmentEnd {
            segment: k,
            end,
            point: w.points[at],
            direction: (w.points[towards] - w.points[at]).normalize(),
            normal: ribbon_normal(rb, sample),
        })
        .collect()
}

/// Clusters the open wedge ends into vertices and adds the cone points the
/// ribbon builder flagged.
pub fn detect_vertices(r: &Ribbonization, tol: f64) -> Result<WedgeGraph> {
    let ends: Vec<SegmentEnd> =
        r.wedges.iter().enumerate().flat_map(|(k, w)| segment_ends(k, w, &r.ribbons)).collect();
    // Single linkage: union every pair closer than `tol`.
    let mut parent: Vec<usize> = (0..ends.len()).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..ends.len() {
        for b in a + 1..ends.len() {
            if (ends[a].point - ends[b].point).norm() < tol {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![usize::MAX; ends.len()];
    for i in 0..ends.len() {
        let r0 = root(&mut parent, i);
        if group_of[r0] == usize::MAX {
            group_of[r0] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[r0]].push(i);
    }
    for (ga, a) in groups.iter().enumerate() {
        for b in &groups[ga + 1..] {
            let close = a.iter().any(|&i| b.iter().any(|&j| (ends[i].point - ends[j].point).norm() < 2.0 * tol));
            if close {
                let p = ends[a[0]].point;
                return Err(GeomError::AmbiguousCluster { x: p.x, y: p.y, z: p.z });
            }
        }
    }
    let mut links = vec![[None, None]; r.wedges.len()];
    let mut vertices = Vec::new();
    for g in groups {
        let members: Vec<SegmentEnd> = g.iter().map(|&i| ends[i]).collect();
        let point = members.iter().map(|e| e.point).sum::<Vec3>() / members.len() as f64;
        let normal = members.iter().map(|e| e.normal).sum::<Vec3>();
        for e in &members {
            links[e.segment][e.end] = Some(vertices.len());
        }
        vertices.push(Vertex::new(point, members, normal));
    }
    vertices.extend(r.ribbons.iter().filter_map(|rb| rb.cone_point).map(Vertex::cone));
    Ok(WedgeGraph { vertices, links })
}

/// `χ = ½ Σ_k (2 − d_k)`.
pub fn euler_characteristic(g: &WedgeGraph) -> HalfInteger {
    HalfInteger(g.vertices.iter().map(|v| 2 - v.degree as i64).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    /// `Σ ∫ κ ds` over the wedge edges of each ribbon.
    pub wedge_integrals: Vec<f64>,
    /// `Σ α` over all vertices.
    pub angle_sum: f64,
    /// `Σ (2π − π d_k)`.
    pub vertex_sum: f64,
    pub total: f64,
    pub chi: HalfInteger,
}

impl AuditReport {
    /// `total / 2π`, comparable to χ.
    pub fn normalized(&self) -> f64 {
        self.total / TAU
    }

    pub fn deviation(&self) -> f64 {
        self.normalized() - self.chi.to_f64()
    }
}

/// Sums the wedge curvature integrals, the vertex outer angles and the
/// vertex terms `2π − π d_k`; the result should equal `2π χ`.
pub fn gauss_bonnet_audit(r: &Ribbonization, g: &WedgeGraph) -> Result<AuditReport> {
    let mut wedge_integrals = vec![0.0; r.ribbons.len()];
    for w in &r.wedges {
        for side in std::iter::once(&w.left).chain(w.right.as_ref()) {
            let v = side.integral(w.closed).ok_or_else(|| {
                GeomError::InvalidArgument("wedge curvatures have not been attached".into())
            })?;
            wedge_integrals[side.ribbon] += v;
        }
    }
    let mut angle_sum = 0.0;
    for (k, v) in g.vertices.iter().enumerate() {
        if v.outer_angles.len() != v.degree {
            return Err(GeomError::MissingAngles(k));
        }
        angle_sum += v.outer_angles.iter().sum::<f64>();
    }
    let vertex_sum = g.vertices.iter().map(|v| TAU - PI * v.degree as f64).sum::<f64>() + 0.0;
    let total = wedge_integrals.iter().sum::<f64>() + angle_sum + vertex_sum;
    Ok(AuditReport { wedge_integrals, angle_sum, vertex_sum, total, chi: euler_characteristic(g) })
}

/// Total boundary curvature of a single developed ribbon, as if it stood
/// alone: both edges integrated, plus the four corner angles where an open
/// ribbon is cut. Returns `(edge integral, corner angles)`.
pub fn ribbon_boundary_curvature(p: &PlanarRibbon) -> (f64, f64) {
    let n = p.samples.len();
    let closed = p.center.closed;
    let all: Vec<usize> = (0..if closed { n - 1 } else { n }).collect();
    let edges: f64 = Side::BOTH.iter().map(|&s| edge_curvature(p, s, &all, closed).integral()).sum();
    if closed {
        return (edges, 0.0);
    }
    let edge = |i: usize, s: Side| {
        let q = &p.samples[i];
        p.point(i, if s == Side::Plus { q.w_plus } else { q.w_minus })
    };
    // Around the strip w₋ forward, then w₊ backward; counter-clockwise when
    // w₊ lies on the left.
    let turn = |a: Vec2, b: Vec2, c: Vec2| {
        let (u, v) = (b - a, c - b);
        (u.x * v.y - u.y * v.x).atan2(u.dot(&v))
    };
    let (m, p_) = (Side::Minus, Side::Plus);
    let corners = turn(edge(n - 2, m), edge(n - 1, m), edge(n - 1, p_))
        + turn(edge(n - 1, m), edge(n - 1, p_), edge(n - 2, p_))
        + turn(edge(1, p_), edge(0, p_), edge(0, m))
        + turn(edge(0, p_), edge(0, m), edge(1, m));
    (edges, corners * p.orientation())
}

/// χ of a polyhedron two ways: through the ribbon formula (every vertex
/// and every face centre is a vertex of the wedge system, and every edge
/// adds two to the degree sum) and as `V − E + F`.
pub fn polyhedron_euler(faces: u64, edges: u64, vertices: u64) -> (HalfInteger, i64) {
    let points = vertices as i64 + faces as i64;
    let degree_sum = 2 * edges as i64;
    let ribbon = HalfInteger(2 * points - degree_sum);
    let classic = vertices as i64 - edges as i64 + faces as i64;
    assert_eq!(ribbon, HalfInteger::from_int(classic));
    (ribbon, classic)
}

/// Plain-text table of the vertices, the per-ribbon wedge integrals and the
/// audit.
pub fn audit_table(g: &WedgeGraph, a: &AuditReport) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let _ = writeln!(s, "vertices: {}", g.vertices.len());
    for (k, v) in g.vertices.iter().enumerate() {
        let _ = writeln!(
            s,
            "  {k:>3}  ({:>10.6}, {:>10.6}, {:>10.6})  degree {}  {}",
            v.point.x, v.point.y, v.point.z, v.degree, v.character
        );
    }
    let _ = writeln!(s, "wedge integrals:");
    for (q, w) in a.wedge_integrals.iter().enumerate() {
        let _ = writeln!(s, "  ribbon {q:>3}  {w:>12.6}");
    }
    let _ = writeln!(s, "outer angles  {:>12.6}", a.angle_sum);
    let _ = writeln!(s, "vertex terms  {:>12.6}", a.vertex_sum);
    let _ = writeln!(s, "audit total / 2π {:>9.6} (deviation from χ {:.2e})", a.normalized(), a.deviation());
    s
}
