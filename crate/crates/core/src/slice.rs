//! Two-dimensional slices of a domain.
//!
//! Three points `p0, p1, p2` span a projective plane. On their chart
//! representatives the plane is parametrised as
//! `P(a, b) = p0 + a (p1 - p0) + b (p2 - p0)`, and everything below is drawn
//! in the `(a, b)` coordinates.

use thiserror::Error;

use crate::domain::{ConvexDomain, DomainError};
use crate::flats::Flat;
use crate::linalg;
use crate::projective::{ProjPoint, ProjectiveError};
use crate::scalar::{Rat, Scalar, DEFAULT_TOL};

pub const DEFAULT_SAMPLES: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SliceError {
    #[error("plane does not meet the domain")]
    Misses,
    #[error("plane points are not in general position")]
    DegeneratePlane,
    #[error("plane point lies on the hyperplane at infinity of the domain's chart")]
    PointAtInfinity,
    #[error("need at least 3 boundary samples")]
    TooFewSamples,
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Clone, Debug)]
pub struct Plane {
    origin: Vec<f64>,
    e1: Vec<f64>,
    e2: Vec<f64>,
}

impl Plane {
    pub fn new(domain: &ConvexDomain, points: &[ProjPoint<Rat>; 3]) -> Result<Self, SliceError> {
        let chart = domain.chart();
        let reps = points
            .iter()
            .map(|p| {
                if p.dim() != domain.dim() {
                    return Err(SliceError::Domain(DomainError::DimensionMismatch {
                        expected: domain.dim(),
                        got: p.dim(),
                    }));
                }
                chart.representative(&p.to_f64(), DEFAULT_TOL).map_err(|e| match e {
                    ProjectiveError::PointAtInfinity => SliceError::PointAtInfinity,
                    other => SliceError::Domain(other.into()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let sub = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<f64>>();
        let plane = Self {
            e1: sub(&reps[1], &reps[0]),
            e2: sub(&reps[2], &reps[0]),
            origin: reps[0].clone(),
        };
        if linalg::rank(&[plane.origin.clone(), plane.e1.clone(), plane.e2.clone()].to_vec(), 1e-12) < 3 {
            return Err(SliceError::DegeneratePlane);
        }
        Ok(plane)
    }

    pub fn lift(&self, a: f64, b: f64) -> ProjPoint<f64> {
        let v = (0..self.origin.len())
            .map(|j| self.origin[j] + a * self.e1[j] + b * self.e2[j])
            .collect();
        ProjPoint::new(v).expect("plane points are nonzero on the chart")
    }

    /// `(a, b)` for a chart representative lying on the plane.
    fn coords_of(&self, rep: &[f64]) -> Option<(f64, f64)> {
        // Least squares on (e1, e2); accept when the residual vanishes.
        let r: Vec<f64> = rep.iter().zip(&self.origin).map(|(x, y)| x - y).collect();
        let g = [
            [linalg::dot(&self.e1, &self.e1), linalg::dot(&self.e1, &self.e2)],
            [linalg::dot(&self.e2, &self.e1), linalg::dot(&self.e2, &self.e2)],
        ];
        let rhs = [linalg::dot(&self.e1, &r), linalg::dot(&self.e2, &r)];
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let a = (rhs[0] * g[1][1] - rhs[1] * g[0][1]) / det;
        let b = (g[0][0] * rhs[1] - g[1][0] * rhs[0]) / det;
        let residual = (0..r.len())
            .map(|j| (r[j] - a * self.e1[j] - b * self.e2[j]).abs())
            .fold(0.0, f64::max);
        let scale = rep.iter().map(|x| x.abs()).fold(1.0, f64::max);
        (residual <= 1e-9 * scale).then_some((a, b))
    }

    /// `h . P(a, b) = c0 + a c1 + b c2`.
    fn restrict(&self, h: &[f64]) -> [f64; 3] {
        [linalg::dot(h, &self.origin), linalg::dot(h, &self.e1), linalg::dot(h, &self.e2)]
    }
}

pub type Pt = (f64, f64);

#[derive(Clone, Debug)]
pub struct FlatOverlay {
    /// The flat meets the plane in this chord.
    pub chord: Option<[Pt; 2]>,
    /// The pseudo-dual, when it lies on the plane.
    pub pseudo_dual: Option<Pt>,
    /// Normal lines from the pseudo-dual through points of the chord, to
    /// where they leave the domain.
    pub normals: Vec<[Pt; 2]>,
}

#[derive(Clone, Debug)]
pub struct Slice {
    pub center: Pt,
    /// Boundary polyline, counterclockwise.
    pub outline: Vec<Pt>,
    pub flat: Option<FlatOverlay>,
}

/// Sutherland-Hodgman clip of a polygon by `c0 + a c1 + b c2 >= 0`.
fn clip(poly: &[Pt], c: [f64; 3]) -> Vec<Pt> {
    let val = |p: &Pt| c[0] + p.0 * c[1] + p.1 * c[2];
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (vp, vq) = (val(&p), val(&q));
        if vp >= 0.0 {
            out.push(p);
        }
        if (vp >= 0.0) != (vq >= 0.0) {
            let t = vp / (vp - vq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

fn area(poly: &[Pt]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p.0 * q.1 - q.0 * p.1
        })
        .sum::<f64>()
}

/// A point of the slice well inside it.
fn center(domain: &ConvexDomain, plane: &Plane) -> Result<Pt, SliceError> {
    let c = match domain {
        ConvexDomain::Polytope(p) => {
            const M: f64 = 1e6;
            let mut poly = vec![(-M, -M), (M, -M), (M, M), (-M, M)];
            for f in p.facets() {
                let h: Vec<f64> = f.covector().iter().map(Scalar::to_f64).collect();
                poly = clip(&poly, plane.restrict(&h));
                if poly.len() < 3 {
                    return Err(SliceError::Misses);
                }
            }
            if area(&poly).abs() < 1e-14 {
                return Err(SliceError::Misses);
            }
            let n = poly.len() as f64;
            (poly.iter().map(|p| p.0).sum::<f64>() / n, poly.iter().map(|p| p.1).sum::<f64>() / n)
        }
        ConvexDomain::Ellipsoid(e) => {
            let q = linalg::to_f64_matrix(e.form());
            let cols = [&plane.e1, &plane.e2, &plane.origin];
            let m: Vec<Vec<f64>> = cols
                .iter()
                .map(|u| cols.iter().map(|v| linalg::dot(u, &linalg::mat_vec(&q, v))).collect())
                .collect();
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if !(m[0][0] > 0.0 && det > 0.0) {
                return Err(SliceError::Misses);
            }
            let a = (-m[0][2] * m[1][1] + m[1][2] * m[0][1]) / det;
            let b = (-m[1][2] * m[0][0] + m[0][2] * m[1][0]) / det;
            (a, b)
        }
    };
    if !domain.contains(&plane.lift(c.0, c.1), DEFAULT_TOL) {
        return Err(SliceError::Misses);
    }
    Ok(c)
}

/// Parameter interval `[s0, s1]` of `p + s d` inside a counterclockwise convex polygon.
fn clip_line(poly: &[Pt], p: Pt, d: Pt) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let e = (b.0 - a.0, b.1 - a.1);
        let f0 = e.0 * (p.1 - a.1) - e.1 * (p.0 - a.0);
        let f1 = e.0 * d.1 - e.1 * d.0;
        if f1 == 0.0 {
            if f0 < 0.0 {
                return None;
            }
        } else if f1 > 0.0 {
            lo = lo.max(-f0 / f1);
        } else {
            hi = hi.min(-f0 / f1);
        }
    }
    (lo < hi).then_some((lo, hi))
}

fn at(p: Pt, d: Pt, s: f64) -> Pt {
    (p.0 + s * d.0, p.1 + s * d.1)
}

fn overlay(domain: &ConvexDomain, plane: &Plane, outline: &[Pt], center: Pt, flat: &Flat) -> FlatOverlay {
    let eta: Vec<f64> = flat.carrier().covector().iter().map(Scalar::to_f64).collect();
    let [c0, c1, c2] = plane.restrict(&eta);
    let norm2 = c1 * c1 + c2 * c2;
    let chord = (norm2 > 1e-24).then(|| {
        // Foot of the perpendicular from the center, then along the line.
        let v = c0 + c1 * center.0 + c2 * center.1;
        let p = (center.0 - v * c1 / norm2, center.1 - v * c2 / norm2);
        let d = (-c2, c1);
        clip_line(outline, p, d).map(|(s0, s1)| [at(p, d, s0), at(p, d, s1)])
    });
    let chord = chord.flatten();
    let pseudo_dual = flat.pseudo_dual().ok().and_then(|hat| {
        let rep = domain.chart().representative(&hat.to_f64(), DEFAULT_TOL).ok()?;
        plane.coords_of(&rep)
    });
    let mut normals = Vec::new();
    if let (Some([a, b]), Some(h)) = (chord, pseudo_dual) {
        for j in 1..=5 {
            let t = j as f64 / 6.0;
            let q = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            let d = (q.0 - h.0, q.1 - h.1);
            if let Some((_, s1)) = clip_line(outline, h, d) {
                normals.push([h, at(h, d, s1)]);
            }
        }
    }
    FlatOverlay {
        chord,
        pseudo_dual,
        normals,
    }
}

/// Samples the boundary of the slice along `samples` rays from an interior
/// point, at equal angles in the `(a, b)` coordinates.
pub fn slice(
    domain: &ConvexDomain,
    points: &[ProjPoint<Rat>; 3],
    samples: usize,
    flat: Option<&Flat>,
) -> Result<Slice, SliceError> {
    if samples < 3 {
        return Err(SliceError::TooFewSamples);
    }
    let plane = Plane::new(domain, points)?;
    let c = center(domain, &plane)?;
    let x = plane.lift(c.0, c.1);
    let step = 1e-6;
    let mut outline = Vec::with_capacity(samples);
    for k in 0..samples {
        let theta = std::f64::consts::TAU * k as f64 / samples as f64;
        let d = (theta.cos(), theta.sin());
        // A second pass from halfway out keeps the parameter of order one.
        let mut r = step;
        for _ in 0..2 {
            let y = plane.lift(c.0 + r * d.0, c.1 + r * d.1);
            let pair = domain.boundary_intersections(&x, &y, DEFAULT_TOL)?;
            r *= 0.5 * pair.t_z2;
        }
        outline.push(at(c, d, 2.0 * r));
    }
    let flat = flat.map(|f| overlay(domain, &plane, &outline, c, f));
    Ok(Slice {
        center: c,
        outline,
        flat,
    })
}
