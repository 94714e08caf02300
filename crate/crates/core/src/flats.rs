//! Properly embedded codimension-one simplices ("flats") in polytope domains:
//! validation, pseudo-duals, normal projection, flat duality, and the
//! log-coordinate map on the simplex.
//!
//! A flat in `Omega ⊂ RP^d` is a `(d-1)`-simplex whose open interior lies in
//! `Omega` and whose boundary lies in `∂Omega`. When every `(d-2)`-face of
//! the flat has a unique supporting hyperplane, those `d` hyperplanes meet
//! in a single point, the pseudo-dual `F^`. Lines through `F^` are the
//! normal lines; following them onto the carrier hyperplane is the normal
//! projection.

use rand::Rng;
use thiserror::Error;

use crate::domain::{ConvexDomain, DomainError, Polytope};
use crate::faces::FaceLattice;
use crate::linalg::{self, Matrix};
use crate::optimize::{coordinate_directions, pattern_search, SearchParams};
use crate::projective::{general_position, Hyperplane, ProjPoint};
use crate::sampling::map_samples;
use crate::scalar::{rat, rat_int, Rat, Scalar};

use num_traits::{Signed, Zero};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlatError {
    #[error("flats are only computed in polytope domains")]
    NotAPolytope,
    #[error("flats need dimension at least 2, got {0}")]
    UnsupportedDimension(usize),
    #[error("a flat in dimension {expected} has {expected} vertices, got {got}")]
    WrongVertexCount { expected: usize, got: usize },
    #[error("flat vertices are not in general position")]
    NotGeneralPosition,
    #[error("flat vertex {0} is not on the boundary of the domain")]
    VertexNotOnBoundary(usize),
    #[error("the open simplex leaves the domain, e.g. at {0}")]
    InteriorEscapes(ProjPoint<Rat>),
    #[error("a boundary face of the simplex is not in the boundary of the domain, e.g. at {0}")]
    FaceNotInBoundary(ProjPoint<Rat>),
    #[error("the face opposite vertex {0} has more than one supporting hyperplane")]
    NonUniqueSupport(usize),
    #[error("the supporting hyperplanes of the codimension-two faces do not meet in a single point")]
    NoCommonPoint,
    #[error("the normal line does not meet the flat")]
    ProjectionUndefined,
    #[error("simplex coordinates must be positive")]
    NonPositiveCoordinate,
    #[error("point lies on the carrier hyperplane")]
    PointOnCarrier,
    #[error("the flat vertices and pseudo-dual do not form a basis")]
    FrameDegenerate,
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Clone, Debug)]
struct PseudoDual {
    point: ProjPoint<Rat>,
    /// `supports[i]` supports the face opposite vertex `i`.
    supports: Vec<Hyperplane<Rat>>,
}

/// Coordinates in the basis `(w_1, .., w_d, F^)`.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    pub(crate) inv: Matrix<Rat>,
    pub(crate) inv_f64: Matrix<f64>,
    /// Columns `w_1, .., w_d, F^`.
    pub(crate) basis: Matrix<Rat>,
}

impl Frame {
    fn new(vertices: &[ProjPoint<Rat>], hat: &ProjPoint<Rat>) -> Option<Self> {
        let n = hat.coords().len();
        let cols: Vec<&[Rat]> = vertices.iter().map(|v| v.coords()).chain([hat.coords()]).collect();
        let basis: Matrix<Rat> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let inv = linalg::inverse(&basis, 0.0)?;
        Some(Self {
            inv_f64: linalg::to_f64_matrix(&inv),
            inv,
            basis,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Flat {
    vertices: Vec<ProjPoint<Rat>>,
    vertices_f64: Vec<Vec<f64>>,
    carrier: Hyperplane<Rat>,
    dual: Result<PseudoDual, FlatError>,
    frame: Option<Frame>,
}

fn sum_points(points: &[ProjPoint<Rat>]) -> Vec<Rat> {
    let n = points[0].coords().len();
    (0..n)
        .map(|j| points.iter().map(|p| p.coords()[j].clone()).sum())
        .collect()
}

fn point(v: Vec<Rat>) -> ProjPoint<Rat> {
    ProjPoint::new(v).expect("nonzero by construction")
}

/// Scales so the largest entry in absolute value is `±1` and the first
/// nonzero entry is positive.
fn canonical(v: &[Rat]) -> Vec<Rat> {
    let m = v.iter().map(|c| c.abs()).max().expect("nonempty");
    let first = v.iter().find(|c| !c.is_zero()).expect("nonzero");
    let s = if first.is_negative() { -m } else { m };
    v.iter().map(|c| c / &s).collect()
}

impl Flat {
    fn from_parts(vertices: Vec<ProjPoint<Rat>>, carrier: Hyperplane<Rat>, dual: Result<PseudoDual, FlatError>) -> Self {
        let frame = dual.as_ref().ok().and_then(|pd| Frame::new(&vertices, &pd.point));
        Self {
            vertices_f64: vertices
                .iter()
                .map(|v| v.coords().iter().map(Scalar::to_f64).collect())
                .collect(),
            vertices,
            carrier,
            dual,
            frame,
        }
    }

    /// Vertex representatives, normalised onto the domain's chart.
    pub fn vertices(&self) -> &[ProjPoint<Rat>] {
        &self.vertices
    }

    pub fn carrier(&self) -> &Hyperplane<Rat> {
        &self.carrier
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.vertices.len()
    }

    pub fn pseudo_dual(&self) -> Result<&ProjPoint<Rat>, FlatError> {
        self.dual.as_ref().map(|d| &d.point).map_err(Clone::clone)
    }

    /// Supporting hyperplane of the face opposite each vertex.
    pub fn supports(&self) -> Result<&[Hyperplane<Rat>], FlatError> {
        self.dual.as_ref().map(|d| d.supports.as_slice()).map_err(Clone::clone)
    }

    pub(crate) fn frame(&self) -> Result<&Frame, FlatError> {
        self.pseudo_dual()?;
        self.frame.as_ref().ok_or(FlatError::FrameDegenerate)
    }

    pub fn barycenter(&self) -> ProjPoint<Rat> {
        point(sum_points(&self.vertices))
    }

    /// Barycentric coordinates of `p` with respect to the vertices, or
    /// `None` when `p` is off the carrier.
    pub fn barycentric_exact(&self, p: &ProjPoint<Rat>) -> Option<Vec<Rat>> {
        if !self.carrier.incidence(p).is_zero() {
            return None;
        }
        let w: Matrix<Rat> = self.vertices.iter().map(|v| v.coords().to_vec()).collect();
        let gram = linalg::mat_mul(&w, &linalg::transpose(&w));
        let rhs = linalg::mat_vec(&w, p.coords());
        let u = linalg::solve(&gram, &rhs, 0.0)?;
        let total: Rat = u.iter().sum();
        if total.is_zero() {
            return None;
        }
        Some(u.iter().map(|c| c / &total).collect())
    }

    /// Membership in the open simplex.
    pub fn contains_exact(&self, p: &ProjPoint<Rat>) -> bool {
        self.barycentric_exact(p)
            .is_some_and(|u| u.iter().all(Signed::is_positive))
    }

    /// Membership in the relative boundary of the closed simplex.
    pub fn boundary_contains_exact(&self, p: &ProjPoint<Rat>) -> bool {
        self.barycentric_exact(p)
            .is_some_and(|u| u.iter().all(|c| !c.is_negative()) && u.iter().any(Zero::is_zero))
    }

    /// Random interior point with weights bounded away from zero.
    pub fn sample_point<R: Rng>(&self, rng: &mut R) -> ProjPoint<f64> {
        let n = self.vertices_f64[0].len();
        let mut acc = vec![0.0; n];
        for v in &self.vertices_f64 {
            let w = 0.05 + rng.gen::<f64>();
            for j in 0..n {
                acc[j] += w * v[j];
            }
        }
        ProjPoint::new(acc).expect("positive combination is nonzero")
    }

    /// Random interior point with rational weights `k / 16`, `k` in `1..=16`.
    pub fn sample_point_exact<R: Rng>(&self, rng: &mut R) -> ProjPoint<Rat> {
        let weighted: Vec<ProjPoint<Rat>> = self
            .vertices
            .iter()
            .map(|v| v.scaled(&rat(rng.gen_range(1..=16), 16)))
            .collect();
        point(sum_points(&weighted))
    }

    /// The normal line at `x`: the span of `F^` and `x`.
    pub fn normal_line<S: Scalar>(&self, x: &ProjPoint<S>) -> Result<(ProjPoint<S>, ProjPoint<S>), FlatError> {
        let hat = self.pseudo_dual()?;
        let hat = ProjPoint::new(hat.coords().iter().map(S::from_rat).collect())
            .expect("pseudo-dual is nonzero");
        Ok((hat, x.clone()))
    }

    /// `eta(F^) y - eta(y) F^`, the point of `F` on the normal line through `y`.
    pub fn normal_project_exact(&self, y: &ProjPoint<Rat>) -> Result<ProjPoint<Rat>, FlatError> {
        let frame = self.frame().map_err(|_| FlatError::ProjectionUndefined)?;
        let c = linalg::mat_vec(&frame.inv, y.coords());
        let d = self.dim();
        let u = &c[..d];
        let positive = u.iter().all(Signed::is_positive);
        let negative = u.iter().all(Signed::is_negative);
        if !(positive || negative) {
            return Err(FlatError::ProjectionUndefined);
        }
        let sign = if positive { rat_int(1) } else { rat_int(-1) };
        let weighted: Vec<ProjPoint<Rat>> = self
            .vertices
            .iter()
            .zip(u)
            .map(|(v, ui)| v.scaled(&(ui * &sign)))
            .collect();
        Ok(point(sum_points(&weighted)))
    }

    /// Float normal projection; `ProjectionUndefined` when the result is not
    /// inside the open flat (barycentric weights below `tol`).
    pub fn normal_project(&self, y: &ProjPoint<f64>, tol: f64) -> Result<ProjPoint<f64>, FlatError> {
        let u = self.frame_coords(y)?.0;
        let total: f64 = u.iter().sum();
        if total.abs() <= tol || u.iter().any(|ui| ui / total <= tol) {
            return Err(FlatError::ProjectionUndefined);
        }
        let n = self.vertices_f64[0].len();
        let mut acc = vec![0.0; n];
        for (v, ui) in self.vertices_f64.iter().zip(&u) {
            for j in 0..n {
                acc[j] += ui / total * v[j];
            }
        }
        Ok(ProjPoint::new(acc).expect("positive combination is nonzero"))
    }

    /// Frame coordinates `(u, t)` of `y`, `y = sum u_i w_i + t F^`.
    pub fn frame_coords(&self, y: &ProjPoint<f64>) -> Result<(Vec<f64>, f64), FlatError> {
        let frame = self.frame()?;
        let mut c = linalg::mat_vec(&frame.inv_f64, y.coords());
        let t = c.pop().expect("frame has d + 1 coordinates");
        Ok((c, t))
    }
}

/// Checks that `vertices` span a flat of the polytope `domain` and computes
/// its carrier and, when the supports are unique, its pseudo-dual.
pub fn validate_flat(domain: &ConvexDomain, vertices: &[ProjPoint<Rat>]) -> Result<Flat, FlatError> {
    let poly = domain.as_polytope().ok_or(FlatError::NotAPolytope)?;
    let d = poly.dim();
    if d < 2 {
        return Err(FlatError::UnsupportedDimension(d));
    }
    if vertices.len() != d {
        return Err(FlatError::WrongVertexCount {
            expected: d,
            got: vertices.len(),
        });
    }
    if let Some(v) = vertices.iter().find(|v| v.coords().len() != d + 1) {
        return Err(DomainError::DimensionMismatch { expected: d, got: v.dim() }.into());
    }
    if !general_position(vertices, 0.0) {
        return Err(FlatError::NotGeneralPosition);
    }
    let mut reps = Vec::with_capacity(d);
    for (i, v) in vertices.iter().enumerate() {
        if !poly.on_boundary_exact(v) {
            return Err(FlatError::VertexNotOnBoundary(i));
        }
        reps.push(point(poly.chart_rep(v).expect("boundary points are in the chart")));
    }
    let bary = point(sum_points(&reps));
    if !poly.contains_exact(&bary) {
        return Err(FlatError::InteriorEscapes(bary));
    }

    // Faces opposite each vertex: the facets through the face barycenter
    // must contain every vertex of the face.
    let mut tight_sets = Vec::with_capacity(d);
    for i in 0..d {
        let face: Vec<ProjPoint<Rat>> = reps.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
        let b = point(sum_points(&face));
        let tight = poly.facets_through(&b).unwrap_or_default();
        let inside_face = !tight.is_empty()
            && face
                .iter()
                .all(|v| tight.iter().all(|&f| poly.facets()[f].incidence(v).is_zero()));
        if !inside_face {
            return Err(FlatError::FaceNotInBoundary(b));
        }
        tight_sets.push(tight);
    }

    let carrier = Hyperplane::through(&reps, 0.0).map_err(|_| FlatError::NotGeneralPosition)?;
    let carrier = Hyperplane::new(canonical(carrier.covector())).expect("nonzero");
    let dual = pseudo_dual_from_faces(poly, &tight_sets);
    Ok(Flat::from_parts(reps, carrier, dual))
}

fn pseudo_dual_from_faces(
    poly: &Polytope,
    tight_sets: &[std::collections::BTreeSet<usize>],
) -> Result<PseudoDual, FlatError> {
    let mut supports = Vec::with_capacity(tight_sets.len());
    for (i, tight) in tight_sets.iter().enumerate() {
        let rows: Matrix<Rat> = tight.iter().map(|&f| poly.facets()[f].covector().to_vec()).collect();
        if linalg::rank(&rows, 0.0) != 1 {
            return Err(FlatError::NonUniqueSupport(i));
        }
        supports.push(Hyperplane::new(rows[0].clone()).expect("facet covector is nonzero"));
    }
    let rows: Matrix<Rat> = supports.iter().map(|h| h.covector().to_vec()).collect();
    let ns = linalg::nullspace(&rows, poly.dim() + 1, 0.0);
    if ns.len() != 1 {
        return Err(FlatError::NoCommonPoint);
    }
    let mut hat = canonical(&ns[0]);
    if linalg::dot(poly.chart().covector(), &hat).is_negative() {
        hat.iter_mut().for_each(|c| *c = -c.clone());
    }
    Ok(PseudoDual {
        point: point(hat),
        supports,
    })
}

/// The dual flat, living in the dual projective space.
///
/// Its vertices are the hyperplanes spanned by `F^` and all but one vertex
/// of `F` (these are the supporting hyperplanes of the faces of `F`), its
/// carrier is `F^` and its pseudo-dual is the carrier of `F`. The
/// construction is projective, so applying it twice returns `F`.
pub fn flat_dual(flat: &Flat) -> Result<Flat, FlatError> {
    let hat = flat.pseudo_dual()?.clone();
    let d = flat.dim();
    let mut verts = Vec::with_capacity(d);
    for i in 0..d {
        let mut pts: Vec<ProjPoint<Rat>> = vec![hat.clone()];
        pts.extend(flat.vertices.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()));
        let h = Hyperplane::through(&pts, 0.0).map_err(|_| FlatError::FrameDegenerate)?;
        // Orient so the opposite vertex is on the positive side.
        let h = if h.incidence(&flat.vertices[i]).is_negative() { h.negated() } else { h };
        verts.push(point(canonical_positive_scale(h.covector())));
    }
    let supports = flat
        .vertices
        .iter()
        .map(|v| Hyperplane::new(v.coords().to_vec()).expect("nonzero"))
        .collect();
    let carrier = Hyperplane::new(canonical(hat.coords())).expect("nonzero");
    let point_hat = point(canonical(flat.carrier.covector()));
    Ok(Flat::from_parts(
        verts,
        carrier,
        Ok(PseudoDual {
            point: point_hat,
            supports,
        }),
    ))
}

fn canonical_positive_scale(v: &[Rat]) -> Vec<Rat> {
    let m = v.iter().map(|c| c.abs()).max().expect("nonempty");
    v.iter().map(|c| c / &m).collect()
}

/// Flats cut off at simple vertices: for every vertex with exactly `d`
/// edges, the simplex through the points at parameter `s` along those edges.
/// Candidates failing validation are skipped.
pub fn corner_flats(domain: &ConvexDomain, lattice: &FaceLattice, s: &Rat) -> Vec<Flat> {
    let Some(poly) = domain.as_polytope() else {
        return Vec::new();
    };
    let d = poly.dim();
    let mut out = Vec::new();
    for (vi, v) in poly.vertices().iter().enumerate() {
        let edges: Vec<usize> = lattice
            .faces()
            .iter()
            .filter(|f| f.dim == 1 && f.vertices.contains(&vi))
            .filter_map(|f| {
                // Edges of a polytope have exactly two vertices.
                let others: Vec<usize> = f.vertices.iter().copied().filter(|&u| u != vi).collect();
                (others.len() == 1).then(|| others[0])
            })
            .collect();
        if edges.len() != d {
            continue;
        }
        let pts: Vec<ProjPoint<Rat>> = edges
            .iter()
            .map(|&u| {
                let w = poly.vertices()[u].coords();
                point(v.coords().iter().zip(w).map(|(a, b)| a + s * (b - a)).collect())
            })
            .collect();
        if let Ok(f) = validate_flat(domain, &pts) {
            out.push(f);
        }
    }
    out
}

/// `log x` shifted to sum zero; the image of the simplex point `x` in the
/// hyperplane `E^d = {sum = 0}`.
pub fn phi_map(x: &[f64]) -> Result<Vec<f64>, FlatError> {
    if x.iter().any(|c| !(*c > 0.0)) {
        return Err(FlatError::NonPositiveCoordinate);
    }
    let logs: Vec<f64> = x.iter().map(|c| c.ln()).collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    Ok(logs.iter().map(|l| l - mean).collect())
}

/// Inverse of [`phi_map`] (product-one representative).
pub fn phi_inverse(e: &[f64]) -> Vec<f64> {
    let mean = e.iter().sum::<f64>() / e.len() as f64;
    e.iter().map(|c| (c - mean).exp()).collect()
}

/// `1/2 (max_i log(x_i / y_i) - min_i log(x_i / y_i))`.
pub fn simplex_distance(x: &[f64], y: &[f64]) -> Result<f64, FlatError> {
    if x.iter().chain(y).any(|c| !(*c > 0.0)) {
        return Err(FlatError::NonPositiveCoordinate);
    }
    let (lo, hi) = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a / b).ln())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
    Ok(0.5 * (hi - lo))
}

/// Bounds for `1/2 (max - min) / |v|_2` over nonzero `v` with coordinate sum
/// zero in `R^n`: `1/2 sqrt(n / (floor(n/2) ceil(n/2)))` and `sqrt(2) / 2`.
///
/// The maximum puts all the mass on two opposite coordinates; the minimum
/// splits the coordinates into two equal-as-possible groups at the extremes.
pub fn phi_norm_bounds(n: usize) -> (f64, f64) {
    let k = (n / 2) as f64;
    let nf = n as f64;
    (0.5 * (nf / (k * (nf - k))).sqrt(), std::f64::consts::SQRT_2 / 2.0)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct EpsilonReport {
    pub seed: u64,
    pub samples: usize,
    pub trial_eps: f64,
    /// Samples `x` in `F` with `d(x, F') < trial_eps`.
    pub close: usize,
    /// Close samples whose normal line meets the open flat `F'`.
    pub meeting: usize,
    /// `meeting / close`; `None` when no sample was close.
    pub fraction: Option<f64>,
    pub min_distance: f64,
}

/// Distance from `x` to the flat `g`, minimising over softmax barycentric
/// weights.
pub fn distance_to_flat(domain: &ConvexDomain, x: &ProjPoint<f64>, g: &Flat, tol: f64) -> Result<f64, FlatError> {
    let d = g.dim();
    let at = |theta: &[f64]| {
        let m = theta.iter().cloned().fold(f64::MIN, f64::max);
        let w: Vec<f64> = theta.iter().map(|t| (t - m).exp()).collect();
        let n = g.vertices_f64[0].len();
        let mut acc = vec![0.0; n];
        for (v, wi) in g.vertices_f64.iter().zip(&w) {
            for j in 0..n {
                acc[j] += wi * v[j];
            }
        }
        ProjPoint::new(acc).expect("positive combination is nonzero")
    };
    domain.hilbert_distance(x, &at(&vec![0.0; d]), tol)?;
    let params = SearchParams {
        initial_step: 1.0,
        min_step: 1e-7,
        budget: 4000,
    };
    let best = pattern_search(
        |theta| domain.hilbert_distance(x, &at(theta), tol).unwrap_or(f64::INFINITY),
        &vec![0.0; d],
        &coordinate_directions(d),
        params,
    );
    Ok(best.value)
}

/// Whether the line through `a` and `b` meets the open flat `g`.
fn line_meets_flat(a: &ProjPoint<f64>, b: &ProjPoint<f64>, g: &Flat, tol: f64) -> bool {
    let eta: Vec<f64> = g.carrier.covector().iter().map(Scalar::to_f64).collect();
    let ea = linalg::dot(&eta, a.coords());
    let eb = linalg::dot(&eta, b.coords());
    if ea == 0.0 && eb == 0.0 {
        return false;
    }
    let p: Vec<f64> = a.coords().iter().zip(b.coords()).map(|(x, y)| ea * y - eb * x).collect();
    let w: Matrix<f64> = g.vertices_f64.clone();
    let gram = linalg::mat_mul(&w, &linalg::transpose(&w));
    let rhs = linalg::mat_vec(&w, &p);
    let Some(u) = linalg::solve(&gram, &rhs, 1e-14) else {
        return false;
    };
    let total: f64 = u.iter().sum();
    total.abs() > tol && u.iter().all(|ui| ui / total > tol)
}

/// Monte-Carlo estimate for "close flats project": among sampled `x` in `F`
/// with `d(x, F') < trial_eps`, the fraction whose normal line meets `F'`.
pub fn epsilon_projection_check(
    domain: &ConvexDomain,
    f: &Flat,
    g: &Flat,
    trial_eps: f64,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<EpsilonReport, FlatError> {
    let hat = f.pseudo_dual()?;
    let hat = hat.to_f64();
    let rows = map_samples(samples, seed, 1, |_, rng| {
        let x = f.sample_point(rng);
        let dist = distance_to_flat(domain, &x, g, tol);
        dist.map(|dist| (dist, dist < trial_eps && line_meets_flat(&hat, &x, g, tol)))
    });
    let mut close = 0;
    let mut meeting = 0;
    let mut min_distance = f64::INFINITY;
    for r in rows {
        let (dist, meets) = r?;
        min_distance = min_distance.min(dist);
        if dist < trial_eps {
            close += 1;
            meeting += meets as usize;
        }
    }
    Ok(EpsilonReport {
        seed,
        samples,
        trial_eps,
        close,
        meeting,
        fraction: (close > 0).then(|| meeting as f64 / close as f64),
        min_distance,
    })
}

#[derive(Clone, Debug)]
pub struct SegmentReport {
    pub tested: usize,
    pub violations: usize,
    pub first_violation: Option<(ProjPoint<Rat>, ProjPoint<Rat>)>,
}

/// Samples rational boundary segments `[p, q]` inside a facet of the domain
/// passing through a point of `∂F`, and counts those not contained in `∂F`.
pub fn boundary_segment_check(domain: &ConvexDomain, flat: &Flat, samples: usize, seed: u64) -> Result<SegmentReport, FlatError> {
    let poly = domain.as_polytope().ok_or(FlatError::NotAPolytope)?;
    let d = flat.dim();
    let mut report = SegmentReport {
        tested: 0,
        violations: 0,
        first_violation: None,
    };
    for i in 0..samples {
        let rng = &mut crate::sampling::rng_for(seed, i as u64);
        let skip = rng.gen_range(0..d);
        let face: Vec<ProjPoint<Rat>> = flat
            .vertices
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != skip)
            .map(|(_, v)| v.scaled(&rat_int(rng.gen_range(1..=8))))
            .collect();
        let a = point(sum_points(&face));
        let tight: Vec<usize> = poly.facets_through(&a).unwrap_or_default().into_iter().collect();
        if tight.is_empty() {
            continue;
        }
        let facet = tight[rng.gen_range(0..tight.len())];
        let on_facet: Vec<ProjPoint<Rat>> = poly.incidence()[facet]
            .iter()
            .map(|&v| poly.vertices()[v].scaled(&rat_int(rng.gen_range(0..=8))))
            .collect();
        let q_coords = sum_points(&on_facet);
        if q_coords.iter().all(Zero::is_zero) {
            continue;
        }
        let q = point(poly.chart_rep(&point(q_coords)).expect("facet points are in the chart"));
        let a = point(poly.chart_rep(&a).expect("boundary points are in the chart"));
        if q == a {
            continue;
        }
        // p = a + s (a - q), shrinking s until p stays in the closed facet.
        let mut s = rat(1, rng.gen_range(1..=8));
        let mut p = None;
        for _ in 0..16 {
            let cand = point(a.coords().iter().zip(q.coords()).map(|(x, y)| x + &s * (x - y)).collect());
            if poly.closure_contains_exact(&cand) {
                p = Some(cand);
                break;
            }
            s /= rat_int(2);
        }
        let Some(p) = p else { continue };
        report.tested += 1;
        if !(flat.boundary_contains_exact(&p) && flat.boundary_contains_exact(&q)) {
            report.violations += 1;
            if report.first_violation.is_none() {
                report.first_violation = Some((p, q));
            }
        }
    }
    Ok(report)
}
