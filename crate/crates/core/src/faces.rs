//! Exposed faces of polytopes, computed exactly from vertex-facet incidence,
//! and the analytic face structure of ellipsoids.
//!
//! Every proper face of a polytope is an intersection of facets, so the
//! lattice is the closure of the facet vertex-sets under intersection.
//! Faces are identified by their vertex sets; ids are assigned after sorting
//! by decreasing dimension and then by vertex set, so they are stable.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::domain::{Ellipsoid, Polytope};
use crate::linalg::{self, Matrix};
use crate::projective::{Hyperplane, ProjPoint};
use crate::scalar::Rat;

pub type FaceId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FaceError {
    #[error("point is not on the boundary of the domain")]
    NotOnBoundary,
    #[error("unknown face id {0}")]
    UnknownFace(FaceId),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub id: FaceId,
    pub dim: usize,
    /// Polytope vertices on the face.
    pub vertices: BTreeSet<usize>,
    /// Polytope facets containing the face.
    pub facets: BTreeSet<usize>,
    /// Sum of the containing facet covectors; meets the closure exactly in the face.
    pub support: Hyperplane<Rat>,
    /// Independent vertex representatives spanning the smallest projective
    /// subspace containing the face.
    pub subspace: Vec<ProjPoint<Rat>>,
}

/// The face of the dual polytope made of all supporting hyperplanes of a face.
///
/// Dual vertex `i` is primal facet `i` (see [`crate::domain::ConvexDomain::dual_domain`]),
/// and the facets of the dual containing it are labelled by primal vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFace {
    pub dim: usize,
    pub vertices: BTreeSet<usize>,
    /// Primal vertex labels of the dual facets containing this dual face.
    pub facet_labels: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairClass {
    Equal,
    Disjoint,
    /// One face lies in the relative boundary of the other.
    BoundaryInclusion,
    /// The faces meet in a common proper face of both.
    ProperMeeting(FaceId),
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    dim: usize,
    n_vertices: usize,
    n_facets: usize,
    faces: Vec<Face>,
    by_vertices: BTreeMap<BTreeSet<usize>, FaceId>,
    /// `covers[k]`: faces of dimension `dim(k) - 1` contained in `k`.
    covers: Vec<Vec<FaceId>>,
}

#[derive(Serialize)]
struct FaceRecord<'a> {
    id: FaceId,
    dim: usize,
    vertices: Vec<usize>,
    facets: Vec<usize>,
    covers: &'a [FaceId],
}

#[derive(Serialize)]
struct LatticeRecord<'a> {
    dim: usize,
    vertices: usize,
    facets: usize,
    faces: Vec<FaceRecord<'a>>,
}

impl FaceLattice {
    pub fn new(poly: &Polytope) -> Self {
        let dim = poly.dim();
        let mut sets: BTreeSet<BTreeSet<usize>> = poly.incidence().iter().cloned().collect();
        let mut frontier: Vec<BTreeSet<usize>> = sets.iter().cloned().collect();
        while let Some(a) = frontier.pop() {
            for f in poly.incidence() {
                let meet: BTreeSet<usize> = a.intersection(f).copied().collect();
                if !meet.is_empty() && sets.insert(meet.clone()) {
                    frontier.push(meet);
                }
            }
        }

        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|vertices| {
                let facets: BTreeSet<usize> = poly
                    .incidence()
                    .iter()
                    .enumerate()
                    .filter(|(_, inc)| vertices.is_subset(inc))
                    .map(|(i, _)| i)
                    .collect();
                let subspace = spanning_subset(vertices.iter().map(|&v| &poly.vertices()[v]));
                let n = dim + 1;
                let support = (0..n)
                    .map(|j| facets.iter().map(|&f| poly.facets()[f].covector()[j].clone()).sum())
                    .collect();
                Face {
                    id: 0,
                    dim: subspace.len() - 1,
                    vertices,
                    facets,
                    support: Hyperplane::new(support).expect("a proper face lies on some facet"),
                    subspace,
                }
            })
            .collect();
        faces.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.vertices.cmp(&b.vertices)));
        for (i, f) in faces.iter_mut().enumerate() {
            f.id = i;
        }
        let by_vertices = faces.iter().map(|f| (f.vertices.clone(), f.id)).collect();
        let covers = faces
            .iter()
            .map(|k| {
                faces
                    .iter()
                    .filter(|l| l.dim + 1 == k.dim && l.vertices.is_subset(&k.vertices))
                    .map(|l| l.id)
                    .collect()
            })
            .collect();
        Self {
            dim,
            n_vertices: poly.vertices().len(),
            n_facets: poly.facets().len(),
            faces,
            by_vertices,
            covers,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face(&self, id: FaceId) -> Result<&Face, FaceError> {
        self.faces.get(id).ok_or(FaceError::UnknownFace(id))
    }

    /// Faces one dimension lower contained in `id`.
    pub fn covers(&self, id: FaceId) -> &[FaceId] {
        &self.covers[id]
    }

    /// Number of faces of each dimension `0..d`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim];
        for f in &self.faces {
            counts[f.dim] += 1;
        }
        counts
    }

    pub fn find(&self, vertices: &BTreeSet<usize>) -> Option<FaceId> {
        self.by_vertices.get(vertices).copied()
    }

    /// The face whose relative interior contains the boundary point `p`.
    pub fn face_of_point(&self, poly: &Polytope, p: &ProjPoint<Rat>) -> Result<&Face, FaceError> {
        let tight = poly.facets_through(p).ok_or(FaceError::NotOnBoundary)?;
        let mut it = tight.iter();
        let first = it.next().ok_or(FaceError::NotOnBoundary)?;
        let mut verts = poly.incidence()[*first].clone();
        for f in it {
            verts = verts.intersection(&poly.incidence()[*f]).copied().collect();
        }
        let id = self.find(&verts).expect("intersections of facets are in the lattice");
        Ok(&self.faces[id])
    }

    pub fn dual_face(&self, poly: &Polytope, id: FaceId) -> Result<DualFace, FaceError> {
        let k = self.face(id)?;
        let rows: Matrix<Rat> = k.facets.iter().map(|&f| poly.facets()[f].covector().to_vec()).collect();
        Ok(DualFace {
            dim: linalg::rank(&rows, 0.0) - 1,
            vertices: k.facets.clone(),
            facet_labels: k.vertices.clone(),
        })
    }

    /// `dim K + dim K* >= d - 1`.
    pub fn is_angular(&self, poly: &Polytope, id: FaceId) -> Result<bool, FaceError> {
        let k = self.face(id)?;
        let dual = self.dual_face(poly, id)?;
        Ok(k.dim + dual.dim + 1 >= self.dim)
    }

    pub fn classify_pair(&self, l: FaceId, k: FaceId) -> Result<PairClass, FaceError> {
        let a = &self.face(l)?.vertices;
        let b = &self.face(k)?.vertices;
        if l == k {
            return Ok(PairClass::Equal);
        }
        let meet: BTreeSet<usize> = a.intersection(b).copied().collect();
        Ok(if meet.is_empty() {
            PairClass::Disjoint
        } else if a.is_subset(b) || b.is_subset(a) {
            PairClass::BoundaryInclusion
        } else {
            PairClass::ProperMeeting(self.find(&meet).expect("intersection of faces is a face"))
        })
    }

    /// JSON adjacency export.
    pub fn to_json(&self) -> serde_json::Value {
        let rec = LatticeRecord {
            dim: self.dim,
            vertices: self.n_vertices,
            facets: self.n_facets,
            faces: self
                .faces
                .iter()
                .map(|f| FaceRecord {
                    id: f.id,
                    dim: f.dim,
                    vertices: f.vertices.iter().copied().collect(),
                    facets: f.facets.iter().copied().collect(),
                    covers: &self.covers[f.id],
                })
                .collect(),
        };
        serde_json::to_value(rec).expect("lattice record serializes")
    }
}

/// A maximal linearly independent subset, greedily in order.
fn spanning_subset<'a>(points: impl Iterator<Item = &'a ProjPoint<Rat>>) -> Vec<ProjPoint<Rat>> {
    let mut basis: Vec<ProjPoint<Rat>> = Vec::new();
    let mut rows: Matrix<Rat> = Vec::new();
    for p in points {
        rows.push(p.coords().to_vec());
        if linalg::rank(&rows, 0.0) > basis.len() {
            basis.push(p.clone());
        } else {
            rows.pop();
        }
    }
    basis
}

/// Analytic face of an ellipsoid: every boundary point is a 0-face with a
/// unique supporting hyperplane.
#[derive(Clone, Debug)]
pub struct EllipsoidFace {
    pub point: ProjPoint<f64>,
    pub support: Hyperplane<f64>,
}

pub fn ellipsoid_face_of_point(e: &Ellipsoid, p: &ProjPoint<f64>, tol: f64) -> Result<EllipsoidFace, FaceError> {
    let v = p.rescaled();
    let form = linalg::to_f64_matrix(e.form());
    let q = linalg::dot(v.coords(), &linalg::mat_vec(&form, v.coords()));
    let scale = form.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if q.abs() > tol * scale.max(1.0) {
        return Err(FaceError::NotOnBoundary);
    }
    Ok(EllipsoidFace {
        support: e.tangent_hyperplane(&v),
        point: v,
    })
}

/// Ellipsoid boundary points are 0-faces with 0-dimensional dual faces.
pub fn ellipsoid_face_is_angular(dim: usize) -> bool {
    dim <= 1
}
