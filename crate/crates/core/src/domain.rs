//! Properly convex domains: polytopes (exact V- and H-representation) and
//! ellipsoids (a quadratic form of signature `(d, 1)`).
//!
//! Conventions:
//! * Polytope vertex representatives all live on one cone sheet, scaled so
//!   the chart covector evaluates to `1` on each of them. Facet covectors
//!   are nonnegative on that sheet.
//! * Every float point handed to a metric operation is first rescaled onto
//!   the chart (`eta(x) = 1`), so the caller's choice of sign and scale
//!   never matters.

use std::collections::BTreeSet;

use itertools::Itertools;
use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::projective::{AffineChart, Hyperplane, ProjMap, ProjPoint, ProjectiveError};
use crate::scalar::{primitive, rat_int, Rat, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("domain needs at least {needed} vertices in dimension {dim}, got {got}")]
    TooFewVertices { dim: usize, needed: usize, got: usize },
    #[error("vertices do not span RP^{dim}; the domain has empty interior")]
    NotFullDimensional { dim: usize },
    #[error("domain is not properly convex: its closure contains the line through {0:?} and {1:?}")]
    NotProperlyConvex(ProjPoint<f64>, ProjPoint<f64>),
    #[error("quadratic form is not symmetric")]
    NotSymmetric,
    #[error("quadratic form has no negative direction; the domain is empty")]
    Empty,
    #[error("dimension mismatch: domain has dimension {expected}, input has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not in the open domain")]
    NotInDomain,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("tangent vector is zero")]
    ZeroVector,
    #[error("line through the points does not meet the boundary twice")]
    Unbounded,
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
}

/// A polytope given by its vertices, with exact facets.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<ProjPoint<Rat>>,
    facets: Vec<Hyperplane<Rat>>,
    /// `incidence[f]` = vertices lying on facet `f`.
    incidence: Vec<BTreeSet<usize>>,
    chart: Hyperplane<Rat>,
    vertices_f64: Vec<Vec<f64>>,
    facets_f64: Vec<Vec<f64>>,
    chart_f64: Vec<f64>,
}

/// `{[p] : p^T Q p < 0}` for a symmetric `Q` of signature `(d, 1)`.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    dim: usize,
    form: Matrix<Rat>,
    form_f64: Matrix<f64>,
    chart_f64: Vec<f64>,
    /// Maps the standard ball `{x_1^2 + .. + x_d^2 < x_{d+1}^2}` onto the domain.
    from_ball: Matrix<f64>,
}

#[derive(Clone, Debug)]
pub enum ConvexDomain {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
}

/// The two boundary points on the line through `x` and `y`.
///
/// On the chart representatives, the line is parametrised as
/// `x + t (y - x)`, so `x` sits at `t = 0`, `y` at `t = 1` and
/// `t_z1 < 0 < 1 < t_z2`.
#[derive(Clone, Debug)]
pub struct BoundaryPair {
    pub z1: ProjPoint<f64>,
    pub z2: ProjPoint<f64>,
    pub t_z1: f64,
    pub t_z2: f64,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    /// A covector whose affine chart contains the closure of the domain.
    pub chart: Hyperplane<f64>,
    /// Smallest value of the normalised chart covector on the closure
    /// (vertex representatives for polytopes); strictly positive.
    pub margin: f64,
}

fn canonical_positive(v: &[Rat]) -> Vec<Rat> {
    let m = v.iter().map(|c| c.abs()).max().unwrap_or_else(|| rat_int(1));
    v.iter().map(|c| c / &m).collect()
}

impl Polytope {
    /// Builds a polytope from vertex representatives on one cone sheet.
    /// Redundant points (non-extreme or repeated) are dropped.
    pub fn from_vertices(points: Vec<ProjPoint<Rat>>) -> Result<Self, DomainError> {
        let Some(first) = points.first() else {
            return Err(DomainError::TooFewVertices { dim: 0, needed: 1, got: 0 });
        };
        let n = first.coords().len();
        let dim = n - 1;
        if let Some(p) = points.iter().find(|p| p.coords().len() != n) {
            return Err(DomainError::DimensionMismatch {
                expected: dim,
                got: p.coords().len().saturating_sub(1),
            });
        }
        if points.len() < n {
            return Err(DomainError::TooFewVertices {
                dim,
                needed: n,
                got: points.len(),
            });
        }
        let rows: Matrix<Rat> = points.iter().map(|p| p.coords().to_vec()).collect();
        if linalg::rank(&rows, 0.0) < n {
            return Err(DomainError::NotFullDimensional { dim });
        }

        let mut gens: Vec<Vec<Rat>> = Vec::new();
        for p in &points {
            let c = canonical_positive(p.coords());
            if !gens.contains(&c) {
                gens.push(c);
            }
        }

        let facets = cone_facets(&gens, dim);
        let lineality = linalg::nullspace(&facets, n, 0.0);
        if !lineality.is_empty() {
            return Err(not_properly_convex(&gens, &lineality[0]));
        }
        let chart: Vec<Rat> = (0..n)
            .map(|j| facets.iter().map(|f| f[j].clone()).sum())
            .collect();

        // Extreme rays: the incident facets span a d-dimensional space.
        let mut vertices = Vec::new();
        for g in &gens {
            let tight: Matrix<Rat> = facets
                .iter()
                .filter(|f| linalg::dot(f, g).is_zero())
                .cloned()
                .collect();
            if linalg::rank(&tight, 0.0) == dim {
                let s = linalg::dot(&chart, g);
                vertices.push(g.iter().map(|c| c / &s).collect::<Vec<_>>());
            }
        }
        Ok(Self::assemble(dim, vertices, facets, chart))
    }

    fn assemble(dim: usize, vertices: Vec<Vec<Rat>>, facets: Vec<Vec<Rat>>, chart: Vec<Rat>) -> Self {
        let incidence = facets
            .iter()
            .map(|f| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| linalg::dot(f, v).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let to_f = |v: &Vec<Rat>| v.iter().map(Scalar::to_f64).collect::<Vec<f64>>();
        Self {
            dim,
            vertices_f64: vertices.iter().map(to_f).collect(),
            facets_f64: facets.iter().map(to_f).collect(),
            chart_f64: to_f(&chart),
            vertices: vertices
                .into_iter()
                .map(|v| ProjPoint::new(v).expect("vertex representative is nonzero"))
                .collect(),
            facets: facets
                .into_iter()
                .map(|f| Hyperplane::new(f).expect("facet covector is nonzero"))
                .collect(),
            chart: Hyperplane::new(chart).expect("chart covector is nonzero"),
            incidence,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[ProjPoint<Rat>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Hyperplane<Rat>] {
        &self.facets
    }

    /// Vertex indices on each facet.
    pub fn incidence(&self) -> &[BTreeSet<usize>] {
        &self.incidence
    }

    pub fn chart(&self) -> &Hyperplane<Rat> {
        &self.chart
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    /// Sum of the vertex representatives; an interior point.
    pub fn barycenter(&self) -> ProjPoint<Rat> {
        let n = self.dim + 1;
        let c = (0..n)
            .map(|j| self.vertices.iter().map(|v| v.coords()[j].clone()).sum())
            .collect();
        ProjPoint::new(c).expect("barycenter of a properly convex polytope is nonzero")
    }

    /// Rescales `p` onto the chart, or `None` if `p` is at infinity.
    pub fn chart_rep(&self, p: &ProjPoint<Rat>) -> Option<Vec<Rat>> {
        let s = self.chart.incidence(p);
        if s.is_zero() {
            return None;
        }
        Some(p.coords().iter().map(|c| c / &s).collect())
    }

    /// Exact membership in the open polytope.
    pub fn contains_exact(&self, p: &ProjPoint<Rat>) -> bool {
        match self.chart_rep(p) {
            Some(v) => self.facets.iter().all(|f| linalg::dot(f.covector(), &v).is_positive()),
            None => false,
        }
    }

    /// Exact membership in the closed polytope.
    pub fn closure_contains_exact(&self, p: &ProjPoint<Rat>) -> bool {
        match self.chart_rep(p) {
            Some(v) => self
                .facets
                .iter()
                .all(|f| !linalg::dot(f.covector(), &v).is_negative()),
            None => false,
        }
    }

    /// Indices of the facets through `p`, if `p` lies in the closure.
    pub fn facets_through(&self, p: &ProjPoint<Rat>) -> Option<BTreeSet<usize>> {
        let v = self.chart_rep(p)?;
        let mut tight = BTreeSet::new();
        for (i, f) in self.facets.iter().enumerate() {
            let val = linalg::dot(f.covector(), &v);
            if val.is_negative() {
                return None;
            }
            if val.is_zero() {
                tight.insert(i);
            }
        }
        Some(tight)
    }

    pub fn on_boundary_exact(&self, p: &ProjPoint<Rat>) -> bool {
        self.facets_through(p).is_some_and(|t| !t.is_empty())
    }

    fn chart_rep_f64(&self, p: &ProjPoint<f64>, tol: f64) -> Option<Vec<f64>> {
        let s = linalg::dot(&self.chart_f64, p.coords());
        let scale = p.coords().iter().map(|c| c.abs()).fold(0.0, f64::max);
        if s.abs() <= tol * scale {
            return None;
        }
        Some(p.coords().iter().map(|c| c / s).collect())
    }

    fn contains(&self, p: &ProjPoint<f64>, tol: f64) -> bool {
        let Some(v) = self.chart_rep_f64(p, tol) else {
            return false;
        };
        self.facets_f64.iter().all(|f| {
            let scale: f64 = f.iter().zip(&v).map(|(a, b)| (a * b).abs()).sum();
            linalg::dot(f, &v) > tol * scale.max(tol)
        })
    }

    /// Facet-constraint LP along `x + t w`: the feasible open interval.
    fn parameter_interval(&self, x: &[f64], w: &[f64]) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for f in &self.facets_f64 {
            let fx = linalg::dot(f, x);
            let fw = linalg::dot(f, w);
            if fw > 0.0 {
                lo = lo.max(-fx / fw);
            } else if fw < 0.0 {
                hi = hi.min(fx / -fw);
            }
        }
        (lo, hi)
    }
}

/// Facets of the cone spanned by `gens`, by brute force over `d`-subsets.
/// Whether the float normal of `rows` (unit-scaled) clearly separates two
/// generators. Cofactors of unit rows carry absolute error near 1e-15, so a
/// 1e-9 margin only ever discards subsets that the exact test would reject.
fn straddles(rows: &[&Vec<f64>], gens: &[Vec<f64>]) -> bool {
    let n = rows[0].len();
    let normal: Vec<f64> = (0..n)
        .map(|j| {
            let minor: Matrix<f64> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect())
                .collect();
            let d = linalg::determinant(&minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    const MARGIN: f64 = 1e-9;
    let (mut pos, mut neg) = (false, false);
    for g in gens {
        let v = linalg::dot(&normal, g);
        pos |= v > MARGIN;
        neg |= v < -MARGIN;
        if pos && neg {
            return true;
        }
    }
    false
}

fn cone_facets(gens: &[Vec<Rat>], dim: usize) -> Matrix<Rat> {
    let n = dim + 1;
    let unit: Vec<Vec<f64>> = gens
        .iter()
        .map(|g| {
            let f: Vec<f64> = g.iter().map(Scalar::to_f64).collect();
            let m = f.iter().fold(0.0f64, |a, c| a.max(c.abs()));
            f.iter().map(|c| c / m).collect()
        })
        .collect();
    // Integer generators keep the exact arithmetic small.
    let gens: Vec<Vec<Rat>> = gens
        .iter()
        .map(|g| primitive(g).into_iter().map(Rat::from_integer).collect())
        .collect();
    let mut facets: Matrix<Rat> = Vec::new();
    // Generators on each facet found so far.
    let mut zero_sets: Vec<Vec<bool>> = Vec::new();
    for combo in (0..gens.len()).combinations(dim) {
        if zero_sets.iter().any(|z| combo.iter().all(|&i| z[i])) {
            continue;
        }
        if straddles(&combo.iter().map(|&i| &unit[i]).collect::<Vec<_>>(), &unit) {
            continue;
        }
        let rows: Matrix<Rat> = combo.iter().map(|&i| gens[i].clone()).collect();
        let ns = linalg::nullspace(&rows, n, 0.0);
        if ns.len() != 1 {
            continue;
        }
        let f = &ns[0];
        let vals: Vec<Rat> = gens.iter().map(|g| linalg::dot(f, g)).collect();
        let f = if vals.iter().all(|v| !v.is_negative()) {
            f.clone()
        } else if vals.iter().all(|v| !v.is_positive()) {
            f.iter().map(|c| -c).collect()
        } else {
            continue;
        };
        zero_sets.push(vals.iter().map(Zero::is_zero).collect());
        facets.push(canonical_positive(&f));
    }
    facets
}

fn not_properly_convex(gens: &[Vec<Rat>], line_dir: &[Rat]) -> DomainError {
    let w = ProjPoint::new(line_dir.to_vec()).expect("nullspace vector is nonzero");
    let u = gens
        .iter()
        .map(|g| ProjPoint::new(g.clone()).expect("generator is nonzero"))
        .find(|g| !g.same_point(&w, 0.0))
        .unwrap_or_else(|| w.clone());
    DomainError::NotProperlyConvex(u.to_f64(), w.to_f64())
}

impl Ellipsoid {
    pub fn new(form: Matrix<Rat>) -> Result<Self, DomainError> {
        let n = form.len();
        if n < 2 || form.iter().any(|r| r.len() != n) {
            return Err(DomainError::DimensionMismatch {
                expected: n.saturating_sub(1),
                got: form.first().map_or(0, |r| r.len().saturating_sub(1)),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if form[i][j] != form[j][i] {
                    return Err(DomainError::NotSymmetric);
                }
            }
        }
        let form_f64 = linalg::to_f64_matrix(&form);
        let m = DMatrix::from_fn(n, n, |i, j| form_f64[i][j]);
        let eig = SymmetricEigen::new(m);
        let scale = eig.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
        let tol = 1e-12 * scale.max(1e-300);
        let neg: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] < -tol).collect();
        let zero: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i].abs() <= tol).collect();
        let col = |i: usize| {
            ProjPoint::new(eig.eigenvectors.column(i).iter().copied().collect::<Vec<f64>>())
                .expect("eigenvector is nonzero")
        };
        match (neg.len(), zero.first()) {
            (0, _) => return Err(DomainError::Empty),
            (1, Some(&z)) => return Err(DomainError::NotProperlyConvex(col(neg[0]), col(z))),
            (1, None) => {}
            _ => return Err(DomainError::NotProperlyConvex(col(neg[0]), col(neg[1]))),
        }
        let u: Vec<f64> = eig.eigenvectors.column(neg[0]).iter().copied().collect();
        let chart_f64: Vec<f64> = linalg::mat_vec(&form_f64, &u).iter().map(|c| -c).collect();

        // from_ball = V |L|^{-1/2} P^T, with the negative direction last.
        let mut order: Vec<usize> = (0..n).filter(|&i| i != neg[0]).collect();
        order.push(neg[0]);
        let from_ball = (0..n)
            .map(|r| {
                order
                    .iter()
                    .map(|&k| eig.eigenvectors[(r, k)] / eig.eigenvalues[k].abs().sqrt())
                    .collect()
            })
            .collect();
        Ok(Self {
            dim: n - 1,
            form,
            form_f64,
            chart_f64,
            from_ball,
        })
    }

    /// The unit ball `x_1^2 + .. + x_d^2 < 1` of the standard chart.
    pub fn unit_ball(dim: usize) -> Self {
        let n = dim + 1;
        let form = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i == j, i == dim) {
                        (false, _) => rat_int(0),
                        (true, false) => rat_int(1),
                        (true, true) => rat_int(-1),
                    })
                    .collect()
            })
            .collect();
        Self::new(form).expect("unit ball form has signature (d, 1)")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &Matrix<Rat> {
        &self.form
    }

    fn quad(&self, p: &[f64]) -> f64 {
        linalg::dot(p, &linalg::mat_vec(&self.form_f64, p))
    }

    fn bilinear(&self, p: &[f64], q: &[f64]) -> f64 {
        linalg::dot(p, &linalg::mat_vec(&self.form_f64, q))
    }

    pub fn contains_exact(&self, p: &ProjPoint<Rat>) -> bool {
        let v = p.coords();
        linalg::dot(v, &linalg::mat_vec(&self.form, v)).is_negative()
    }

    fn contains(&self, p: &ProjPoint<f64>, tol: f64) -> bool {
        let v = p.coords();
        let norm2 = linalg::dot(v, v);
        self.quad(v) < -tol * norm2
    }

    /// Unique supporting hyperplane `Q p` at a boundary point.
    pub fn tangent_hyperplane(&self, p: &ProjPoint<f64>) -> Hyperplane<f64> {
        Hyperplane::new(linalg::mat_vec(&self.form_f64, p.coords()))
            .expect("Q p is nonzero for p != 0")
    }

    /// Roots of `q(x + t w) = 0` as `(smaller, larger)`; `None` when the
    /// quadratic has no real roots.
    fn roots(&self, x: &[f64], w: &[f64]) -> Option<(f64, f64)> {
        let a = self.quad(w);
        let b = self.bilinear(x, w);
        let c = self.quad(x);
        if a == 0.0 {
            return if b == 0.0 { None } else { Some((-c / (2.0 * b), f64::INFINITY)) };
        }
        let disc = b * b - a * c;
        if disc < 0.0 {
            return None;
        }
        let q = -(b + b.signum() * disc.sqrt());
        let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
        Some((r1.min(r2), r1.max(r2)))
    }
}

impl ConvexDomain {
    pub fn polytope(vertices: Vec<ProjPoint<Rat>>) -> Result<Self, DomainError> {
        Polytope::from_vertices(vertices).map(Self::Polytope)
    }

    pub fn ellipsoid(form: Matrix<Rat>) -> Result<Self, DomainError> {
        Ellipsoid::new(form).map(Self::Ellipsoid)
    }

    /// The open simplex spanned by the standard basis `e_1, .., e_{d+1}`.
    pub fn simplex(dim: usize) -> Self {
        let n = dim + 1;
        let verts = (0..n)
            .map(|i| ProjPoint::new((0..n).map(|j| rat_int((i == j) as i64)).collect()).unwrap())
            .collect();
        Self::polytope(verts).expect("standard simplex is properly convex")
    }

    /// `[-1, 1]^d` in the standard chart.
    pub fn cube(dim: usize) -> Self {
        let verts = (0..1usize << dim)
            .map(|mask| {
                let a: Vec<Rat> = (0..dim)
                    .map(|k| rat_int(if mask >> k & 1 == 1 { 1 } else { -1 }))
                    .collect();
                ProjPoint::from_affine(&a)
            })
            .collect();
        Self::polytope(verts).expect("cube is properly convex")
    }

    /// Convex hull of `±e_k` in the standard chart.
    pub fn cross_polytope(dim: usize) -> Self {
        let mut verts = Vec::new();
        for k in 0..dim {
            for s in [1, -1] {
                let a: Vec<Rat> = (0..dim).map(|j| rat_int(if j == k { s } else { 0 })).collect();
                verts.push(ProjPoint::from_affine(&a));
            }
        }
        Self::polytope(verts).expect("cross-polytope is properly convex")
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::Ellipsoid(Ellipsoid::unit_ball(dim))
    }

    /// Convex hull of `n_vertices` rational points near the unit sphere,
    /// resampling until the hull has exactly that many vertices.
    pub fn random_polytope<R: Rng>(dim: usize, n_vertices: usize, rng: &mut R) -> Self {
        const DENOM: i64 = 1000;
        loop {
            let mut pts: Vec<ProjPoint<Rat>> = Vec::new();
            for _ in 0..n_vertices {
                let dir: Vec<f64> = loop {
                    let g: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let r2: f64 = g.iter().map(|x| x * x).sum();
                    if r2 > 1e-2 && r2 <= 1.0 {
                        break g.iter().map(|x| x / r2.sqrt()).collect();
                    }
                };
                let a: Vec<Rat> = dir
                    .iter()
                    .map(|x| crate::scalar::rat((x * DENOM as f64).round() as i64, DENOM))
                    .collect();
                pts.push(ProjPoint::from_affine(&a));
            }
            if let Ok(d) = Self::polytope(pts) {
                if d.as_polytope().is_some_and(|p| p.vertices().len() == n_vertices) {
                    return d;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polytope(p) => p.dim,
            Self::Ellipsoid(e) => e.dim,
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            Self::Polytope(p) => Some(p),
            Self::Ellipsoid(_) => None,
        }
    }

    pub fn as_ellipsoid(&self) -> Option<&Ellipsoid> {
        match self {
            Self::Ellipsoid(e) => Some(e),
            Self::Polytope(_) => None,
        }
    }

    fn chart_covector(&self) -> &[f64] {
        match self {
            Self::Polytope(p) => &p.chart_f64,
            Self::Ellipsoid(e) => &e.chart_f64,
        }
    }

    /// An affine chart containing the closure of the domain.
    pub fn chart(&self) -> AffineChart<f64> {
        AffineChart::new(Hyperplane::new(self.chart_covector().to_vec()).expect("chart covector is nonzero"))
    }

    /// Re-derives the proper-convexity certificate.
    pub fn validate(&self) -> Result<ValidationReport, DomainError> {
        match self {
            Self::Polytope(p) => {
                let mut margin: Option<Rat> = None;
                for v in &p.vertices {
                    let s = p.chart.incidence(v);
                    if !s.is_positive() {
                        let gens: Vec<Vec<Rat>> = p.vertices.iter().map(|v| v.coords().to_vec()).collect();
                        return Err(not_properly_convex(&gens, v.coords()));
                    }
                    margin = Some(margin.map_or(s.clone(), |m| m.min(s)));
                }
                Ok(ValidationReport {
                    chart: p.chart.to_f64(),
                    margin: margin.map_or(0.0, |m| Scalar::to_f64(&m)),
                })
            }
            Self::Ellipsoid(e) => {
                // Reverse Cauchy-Schwarz: eta = -Q u is nonzero on the closed cone.
                let rebuilt = Ellipsoid::new(e.form.clone())?;
                let u = linalg::mat_vec(&rebuilt.from_ball, &{
                    let mut c = vec![0.0; e.dim + 1];
                    c[e.dim] = 1.0;
                    c
                });
                let margin = linalg::dot(&rebuilt.chart_f64, &u).abs();
                Ok(ValidationReport {
                    chart: Hyperplane::new(rebuilt.chart_f64.clone())?,
                    margin,
                })
            }
        }
    }

    /// Float membership in the open domain.
    pub fn contains(&self, p: &ProjPoint<f64>, tol: f64) -> bool {
        if p.coords().len() != self.dim() + 1 {
            return false;
        }
        match self {
            Self::Polytope(poly) => poly.contains(p, tol),
            Self::Ellipsoid(e) => e.contains(p, tol),
        }
    }

    /// Exact membership in the open domain.
    pub fn contains_exact(&self, p: &ProjPoint<Rat>) -> bool {
        if p.coords().len() != self.dim() + 1 {
            return false;
        }
        match self {
            Self::Polytope(poly) => poly.contains_exact(p),
            Self::Ellipsoid(e) => e.contains_exact(p),
        }
    }

    /// The representative of `p` with chart value `1`.
    pub fn chart_rep(&self, p: &ProjPoint<f64>) -> Result<Vec<f64>, DomainError> {
        let s = linalg::dot(self.chart_covector(), p.coords());
        if s == 0.0 {
            return Err(ProjectiveError::PointAtInfinity.into());
        }
        Ok(p.coords().iter().map(|c| c / s).collect())
    }

    fn check_point(&self, p: &ProjPoint<f64>, tol: f64) -> Result<Vec<f64>, DomainError> {
        if p.coords().len() != self.dim() + 1 {
            return Err(DomainError::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        if !self.contains(p, tol) {
            return Err(DomainError::NotInDomain);
        }
        self.chart_rep(p)
    }

    /// The boundary points `z1, z2` with `z1, x, y, z2` in order along the
    /// line through `x` and `y`.
    pub fn boundary_intersections(
        &self,
        x: &ProjPoint<f64>,
        y: &ProjPoint<f64>,
        tol: f64,
    ) -> Result<BoundaryPair, DomainError> {
        let xs = self.check_point(x, tol)?;
        let ys = self.check_point(y, tol)?;
        if x.same_point(y, tol * tol) {
            return Err(DomainError::CoincidentPoints);
        }
        let w: Vec<f64> = ys.iter().zip(&xs).map(|(a, b)| a - b).collect();
        let (lo, hi) = match self {
            Self::Polytope(p) => p.parameter_interval(&xs, &w),
            Self::Ellipsoid(e) => e.roots(&xs, &w).ok_or(DomainError::Unbounded)?,
        };
        if !(lo.is_finite() && hi.is_finite() && lo < 0.0 && hi > 1.0) {
            return Err(DomainError::Unbounded);
        }
        let at = |t: f64| {
            ProjPoint::new(xs.iter().zip(&w).map(|(a, b)| a + t * b).collect())
                .expect("boundary point in the chart is nonzero")
        };
        Ok(BoundaryPair {
            z1: at(lo),
            z2: at(hi),
            t_z1: lo,
            t_z2: hi,
        })
    }

    /// `d(x, y) = 1/2 log [z1, x, y, z2]`.
    pub fn hilbert_distance(&self, x: &ProjPoint<f64>, y: &ProjPoint<f64>, tol: f64) -> Result<f64, DomainError> {
        self.check_point(x, tol)?;
        self.check_point(y, tol)?;
        if x.same_point(y, tol * tol) {
            return Ok(0.0);
        }
        // With t_x = 0 and t_y = 1 the cross-ratio is
        // (1 - t_z1) t_z2 / (-t_z1 (t_z2 - 1)) = (1 + 1/-t_z1)(1 + 1/(t_z2 - 1)).
        let pair = self.boundary_intersections(x, y, tol)?;
        Ok(0.5 * ((-1.0 / pair.t_z1).ln_1p() + (1.0 / (pair.t_z2 - 1.0)).ln_1p()))
    }

    /// Hilbert Finsler norm of the chart tangent vector `v` at `x`:
    /// `(1/t_+ + 1/t_-) / 2`, with `x ± t_± v` on the boundary. The chart
    /// must contain the closure of the domain (e.g. [`ConvexDomain::chart`]).
    pub fn finsler_norm(
        &self,
        chart: &AffineChart<f64>,
        x: &ProjPoint<f64>,
        v: &[f64],
        tol: f64,
    ) -> Result<f64, DomainError> {
        if v.len() != self.dim() {
            return Err(DomainError::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        if v.iter().all(|c| *c == 0.0) {
            return Err(DomainError::ZeroVector);
        }
        self.check_point(x, tol)?;
        let mut xs = chart.representative(x, tol)?;
        let mut w = chart.lift_tangent(v);
        if linalg::dot(self.chart_covector(), &xs) < 0.0 {
            xs.iter_mut().for_each(|c| *c = -*c);
            w.iter_mut().for_each(|c| *c = -*c);
        }
        let (lo, hi) = match self {
            Self::Polytope(p) => p.parameter_interval(&xs, &w),
            Self::Ellipsoid(e) => e.roots(&xs, &w).ok_or(DomainError::Unbounded)?,
        };
        Ok(0.5 * (1.0 / hi + 1.0 / -lo))
    }

    /// The dual domain: hyperplanes missing the closure.
    ///
    /// For a polytope, dual vertex `i` is facet `i` (rescaled onto the dual's
    /// chart), so indices line up with the primal facets.
    pub fn dual_domain(&self) -> Result<Self, DomainError> {
        match self {
            Self::Polytope(p) => {
                // Facet covectors are positive on the domain, so they sit on
                // one sheet of the dual cone; all of them are extreme.
                let verts = p.facets.iter().map(Hyperplane::as_point).collect();
                Ok(Self::Polytope(Polytope::from_vertices(verts)?))
            }
            Self::Ellipsoid(e) => {
                let inv = linalg::inverse(&e.form, 0.0).ok_or(ProjectiveError::Singular)?;
                Ok(Self::Ellipsoid(Ellipsoid::new(inv)?))
            }
        }
    }

    /// The image `g.Omega`.
    pub fn transformed(&self, g: &ProjMap<Rat>) -> Result<Self, DomainError> {
        match self {
            Self::Polytope(p) => Self::polytope(p.vertices.iter().map(|v| g.apply_raw(v)).collect()),
            Self::Ellipsoid(e) => {
                let inv = g.inverse_matrix();
                let form = linalg::mat_mul(&linalg::transpose(inv), &linalg::mat_mul(&e.form, inv));
                Self::ellipsoid(form)
            }
        }
    }

    /// A random interior point kept away from the boundary.
    pub fn sample_interior<R: Rng>(&self, rng: &mut R) -> ProjPoint<f64> {
        match self {
            Self::Polytope(p) => {
                let n = p.dim + 1;
                let mut acc = vec![0.0; n];
                for v in &p.vertices_f64 {
                    let w = 0.05 + rng.gen::<f64>();
                    for j in 0..n {
                        acc[j] += w * v[j];
                    }
                }
                ProjPoint::new(acc).expect("positive combination of vertices is nonzero")
            }
            Self::Ellipsoid(e) => {
                let d = e.dim;
                let dir: Vec<f64> = loop {
                    let g: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let r2: f64 = g.iter().map(|x| x * x).sum();
                    if r2 > 1e-4 && r2 <= 1.0 {
                        break g.iter().map(|x| x / r2.sqrt()).collect();
                    }
                };
                let r = 0.9 * rng.gen::<f64>().powf(1.0 / d as f64);
                let mut q: Vec<f64> = dir.iter().map(|x| r * x).collect();
                q.push(1.0);
                ProjPoint::new(linalg::mat_vec(&e.from_ball, &q)).expect("image of a ball point is nonzero")
            }
        }
    }
}
