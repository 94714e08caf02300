//! Browser demo: Hilbert geometry of a convex polygon drawn by clicking.
//!
//! [`Polygon`] holds the logic and is usable from Rust; [`WebPolygon`] is the
//! wasm-bindgen face, taking and returning flat `f64` arrays.

use hilbert_geom::domain::{ConvexDomain, DomainError};
use hilbert_geom::flats::{validate_flat, Flat, FlatError};
use hilbert_geom::projective::ProjPoint;
use hilbert_geom::scalar::{rat, Rat, DEFAULT_TOL};
use thiserror::Error;
use wasm_bindgen::prelude::*;

/// Clicked coordinates are snapped to multiples of `1 / GRID`.
const GRID: i64 = 1024;
/// Chord endpoints sit at multiples of `1 / EDGE_STEPS` along an edge.
const EDGE_STEPS: i64 = 256;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("expected an even number of coordinates, got {0}")]
    OddLength(usize),
    #[error("coordinate {0} is not finite")]
    NotFinite(f64),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Flat(#[from] FlatError),
    #[error("no chord has been set")]
    NoChord,
    #[error("radius must be positive")]
    Radius,
}

fn snap(v: f64) -> Result<Rat, DemoError> {
    if !v.is_finite() {
        return Err(DemoError::NotFinite(v));
    }
    Ok(rat((v * GRID as f64).round() as i64, GRID))
}

fn pairs(coords: &[f64]) -> Result<Vec<[f64; 2]>, DemoError> {
    if coords.len() % 2 != 0 {
        return Err(DemoError::OddLength(coords.len()));
    }
    Ok(coords.chunks(2).map(|c| [c[0], c[1]]).collect())
}

fn lift(p: [f64; 2]) -> ProjPoint<f64> {
    ProjPoint::from_affine(&p)
}

fn affine(p: &ProjPoint<f64>) -> [f64; 2] {
    let c = p.coords();
    [c[0] / c[2], c[1] / c[2]]
}

pub struct Distance {
    pub value: f64,
    pub z1: [f64; 2],
    pub z2: [f64; 2],
}

pub struct Projection {
    pub image: [f64; 2],
    /// `None` when the two supporting lines are parallel.
    pub pseudo_dual: Option<[f64; 2]>,
}

pub struct Polygon {
    domain: ConvexDomain,
    /// Vertex indices in counterclockwise order.
    cycle: Vec<usize>,
    chord: Option<Flat>,
}

impl Polygon {
    /// Convex hull of the given points (snapped to a fine grid).
    pub fn new(points: &[[f64; 2]]) -> Result<Self, DemoError> {
        let verts = points
            .iter()
            .map(|p| Ok(ProjPoint::from_affine(&[snap(p[0])?, snap(p[1])?])))
            .collect::<Result<Vec<_>, DemoError>>()?;
        let domain = ConvexDomain::polytope(verts)?;
        let poly = domain.as_polytope().expect("built from vertices");
        let pts: Vec<[f64; 2]> = poly.vertices().iter().map(|v| affine(&v.to_f64())).collect();
        let (cx, cy) = pts.iter().fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
        let n = pts.len() as f64;
        let mut cycle: Vec<usize> = (0..pts.len()).collect();
        let angle = |i: &usize| (pts[*i][1] - cy / n).atan2(pts[*i][0] - cx / n);
        cycle.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
        Ok(Self { domain, cycle, chord: None })
    }

    pub fn vertices(&self) -> Vec<[f64; 2]> {
        let poly = self.domain.as_polytope().expect("polygon");
        self.cycle.iter().map(|&i| affine(&poly.vertices()[i].to_f64())).collect()
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.domain.contains(&lift(p), DEFAULT_TOL)
    }

    pub fn distance(&self, x: [f64; 2], y: [f64; 2]) -> Result<Distance, DemoError> {
        let (px, py) = (lift(x), lift(y));
        let value = self.domain.hilbert_distance(&px, &py, DEFAULT_TOL)?;
        if value == 0.0 {
            return Ok(Distance { value, z1: x, z2: y });
        }
        let pair = self.domain.boundary_intersections(&px, &py, DEFAULT_TOL)?;
        Ok(Distance {
            value,
            z1: affine(&pair.z1),
            z2: affine(&pair.z2),
        })
    }

    /// Outline of the metric ball of radius `r` about `c`, one point per
    /// direction, found by bisection along rays.
    pub fn ball(&self, c: [f64; 2], r: f64, points: usize) -> Result<Vec<[f64; 2]>, DemoError> {
        if !(r > 0.0) {
            return Err(DemoError::Radius);
        }
        let pc = lift(c);
        let mut out = Vec::with_capacity(points);
        for k in 0..points {
            let th = std::f64::consts::TAU * k as f64 / points as f64;
            let step = [c[0] + 1e-6 * th.cos(), c[1] + 1e-6 * th.sin()];
            let edge = affine(&self.domain.boundary_intersections(&pc, &lift(step), DEFAULT_TOL)?.z2);
            let at = |s: f64| [c[0] + s * (edge[0] - c[0]), c[1] + s * (edge[1] - c[1])];
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                match self.domain.hilbert_distance(&pc, &lift(at(mid)), 0.0) {
                    Ok(d) if d < r => lo = mid,
                    _ => hi = mid,
                }
            }
            out.push(at(lo));
        }
        Ok(out)
    }

    /// Nearest point on the boundary, as an exact point a multiple of
    /// `1 / EDGE_STEPS` of the way along its edge.
    fn snap_to_edge(&self, p: [f64; 2]) -> ProjPoint<Rat> {
        let poly = self.domain.as_polytope().expect("polygon");
        let n = self.cycle.len();
        let mut best = (f64::INFINITY, 0, 0);
        for k in 0..n {
            let (a, b) = (self.cycle[k], self.cycle[(k + 1) % n]);
            let (va, vb) = (affine(&poly.vertices()[a].to_f64()), affine(&poly.vertices()[b].to_f64()));
            let e = [vb[0] - va[0], vb[1] - va[1]];
            let t = (((p[0] - va[0]) * e[0] + (p[1] - va[1]) * e[1]) / (e[0] * e[0] + e[1] * e[1])).clamp(0.0, 1.0);
            let q = [va[0] + t * e[0], va[1] + t * e[1]];
            let d = (q[0] - p[0]).hypot(q[1] - p[1]);
            if d < best.0 {
                best = (d, k, (t * EDGE_STEPS as f64).round() as i64);
            }
        }
        let (_, k, steps) = best;
        let steps = steps.clamp(1, EDGE_STEPS - 1);
        let t = rat(steps, EDGE_STEPS);
        let a = poly.vertices()[self.cycle[k]].coords();
        let b = poly.vertices()[self.cycle[(k + 1) % n]].coords();
        let aff = |v: &[Rat]| [&v[0] / &v[2], &v[1] / &v[2]];
        let (a, b) = (aff(a), aff(b));
        ProjPoint::from_affine(&[&a[0] + &t * (&b[0] - &a[0]), &a[1] + &t * (&b[1] - &a[1])])
    }

    /// Sets the chord between the boundary points nearest `a` and `b`, and
    /// returns its snapped endpoints.
    pub fn set_chord(&mut self, a: [f64; 2], b: [f64; 2]) -> Result<[[f64; 2]; 2], DemoError> {
        self.chord = None;
        let ends = [self.snap_to_edge(a), self.snap_to_edge(b)];
        let flat = validate_flat(&self.domain, &ends)?;
        let out = [affine(&ends[0].to_f64()), affine(&ends[1].to_f64())];
        self.chord = Some(flat);
        Ok(out)
    }

    /// Normal projection of `y` onto the chord.
    pub fn project(&self, y: [f64; 2]) -> Result<Projection, DemoError> {
        let flat = self.chord.as_ref().ok_or(DemoError::NoChord)?;
        let image = flat.normal_project(&lift(y), DEFAULT_TOL)?;
        let pseudo_dual = flat
            .pseudo_dual()
            .ok()
            .map(|p| p.to_f64())
            .filter(|p| p.coords()[2].abs() > 1e-12)
            .map(|p| affine(&p));
        Ok(Projection {
            image: affine(&image),
            pseudo_dual,
        })
    }
}

fn js(e: DemoError) -> JsError {
    JsError::new(&e.to_string())
}

fn flatten(points: &[[f64; 2]]) -> Vec<f64> {
    points.iter().flat_map(|p| p.iter().copied()).collect()
}

#[wasm_bindgen]
pub struct WebPolygon(Polygon);

#[wasm_bindgen]
impl WebPolygon {
    /// `coords` is `[x0, y0, x1, y1, ...]`.
    #[wasm_bindgen(constructor)]
    pub fn new(coords: &[f64]) -> Result<WebPolygon, JsError> {
        let pts = pairs(coords).map_err(js)?;
        Polygon::new(&pts).map(WebPolygon).map_err(js)
    }

    pub fn vertices(&self) -> Vec<f64> {
        flatten(&self.0.vertices())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.0.contains([x, y])
    }

    /// `[d, z1x, z1y, z2x, z2y]`.
    pub fn distance(&self, x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Vec<f64>, JsError> {
        let d = self.0.distance([x0, y0], [x1, y1]).map_err(js)?;
        Ok(vec![d.value, d.z1[0], d.z1[1], d.z2[0], d.z2[1]])
    }

    pub fn ball(&self, x: f64, y: f64, radius: f64, points: usize) -> Result<Vec<f64>, JsError> {
        self.0.ball([x, y], radius, points).map(|p| flatten(&p)).map_err(js)
    }

    /// Snapped chord endpoints `[ax, ay, bx, by]`.
    pub fn set_chord(&mut self, ax: f64, ay: f64, bx: f64, by: f64) -> Result<Vec<f64>, JsError> {
        self.0.set_chord([ax, ay], [bx, by]).map(|e| flatten(&e)).map_err(js)
    }

    /// `[px, py, fx, fy]`; the last two are NaN when the pseudo-dual point
    /// is at infinity.
    pub fn project(&self, x: f64, y: f64) -> Result<Vec<f64>, JsError> {
        let p = self.0.project([x, y]).map_err(js)?;
        let f = p.pseudo_dual.unwrap_or([f64::NAN; 2]);
        Ok(vec![p.image[0], p.image[1], f[0], f[1]])
    }
}
