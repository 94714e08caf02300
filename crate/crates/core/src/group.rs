//! Projective automorphisms of domains: certification, isometry checks,
//! flat stabilizers, translation lengths on the simplex, orbits and sampled
//! precise-invariance checks.
//!
//! Discreteness of a generated group is never decided here; orbits and
//! invariance reports are finite samples.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::domain::ConvexDomain;
use crate::flats::{phi_inverse, simplex_distance, Flat};
use crate::linalg::{self, Matrix};
use crate::optimize::{difference_directions, pattern_search, SearchParams};
use crate::projective::{ProjMap, ProjPoint, ProjectiveError};
use crate::sampling::{map_samples, rng_for};
use crate::scalar::{Rat, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("map does not preserve the domain; witness point {0}")]
    NotAnAutomorphism(ProjPoint<f64>),
    #[error("map acts on RP^{got}, domain lives in RP^{expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("translation lengths are computed on simplex domains only")]
    NotASimplex,
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// Vertex permutation (polytopes) or form invariance (ellipsoids), exact.
    Exact,
    /// `samples` interior points and their images stayed inside.
    Sampled { samples: usize, seed: u64, failures: usize },
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    pub map: ProjMap<Rat>,
    pub certificate: Certificate,
}

fn check_dim(domain: &ConvexDomain, g: &ProjMap<Rat>) -> Result<(), GroupError> {
    if g.size() != domain.dim() + 1 {
        return Err(GroupError::DimensionMismatch {
            expected: domain.dim(),
            got: g.size().saturating_sub(1),
        });
    }
    Ok(())
}

/// Looks for an interior point `p` with `g p` or `g^-1 p` outside.
fn find_witness(domain: &ConvexDomain, g: &ProjMap<Rat>, tol: f64) -> Option<ProjPoint<f64>> {
    let gf = g.to_f64();
    let gi = gf.inverse();
    let escapes = |p: &ProjPoint<f64>| !domain.contains(&gf.apply(p), tol) || !domain.contains(&gi.apply(p), tol);
    let mut candidates = Vec::new();
    if let Some(poly) = domain.as_polytope() {
        let b = poly.barycenter().to_f64();
        candidates.push(b.clone());
        let br = domain.chart_rep(&b).ok()?;
        for v in poly.vertices() {
            let vr = domain.chart_rep(&v.to_f64()).ok()?;
            let near: Vec<f64> = vr.iter().zip(&br).map(|(a, c)| 0.99 * a + 0.01 * c).collect();
            candidates.push(ProjPoint::new(near).ok()?);
        }
    }
    for i in 0..256 {
        candidates.push(domain.sample_interior(&mut rng_for(0x5eed, i)));
    }
    candidates.into_iter().find(|p| escapes(p))
}

/// Exact certificate that `g` preserves the domain.
pub fn certify_preserves(domain: &ConvexDomain, g: &ProjMap<Rat>) -> Result<GroupElement, GroupError> {
    check_dim(domain, g)?;
    let ok = match domain {
        ConvexDomain::Polytope(p) => permutes_vertices(p.vertices(), g),
        ConvexDomain::Ellipsoid(e) => {
            let q = e.form();
            let m = g.matrix();
            let pulled = linalg::mat_mul(&linalg::transpose(m), &linalg::mat_mul(q, m));
            proportional_positive(&pulled, q)
        }
    };
    if ok {
        return Ok(GroupElement {
            map: g.clone(),
            certificate: Certificate::Exact,
        });
    }
    let witness = find_witness(domain, g, crate::scalar::DEFAULT_TOL)
        .unwrap_or_else(|| domain.sample_interior(&mut rng_for(0, 0)));
    Err(GroupError::NotAnAutomorphism(witness))
}

/// Sampled certificate: `samples` interior points whose images under `g`
/// and `g^-1` stay inside.
pub fn certify_sampled(
    domain: &ConvexDomain,
    g: &ProjMap<Rat>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<GroupElement, GroupError> {
    check_dim(domain, g)?;
    let gf = g.to_f64();
    let gi = gf.inverse();
    for i in 0..samples {
        let p = domain.sample_interior(&mut rng_for(seed, i as u64));
        if !domain.contains(&gf.apply(&p), tol) || !domain.contains(&gi.apply(&p), tol) {
            return Err(GroupError::NotAnAutomorphism(p));
        }
    }
    Ok(GroupElement {
        map: g.clone(),
        certificate: Certificate::Sampled {
            samples,
            seed,
            failures: 0,
        },
    })
}

/// `g` maps the vertex representatives onto themselves with scalars of one sign.
fn permutes_vertices(vertices: &[ProjPoint<Rat>], g: &ProjMap<Rat>) -> bool {
    let mut used = vec![false; vertices.len()];
    let mut sign = None;
    for v in vertices {
        let img = g.apply_raw(v);
        let Some((j, s)) = vertices
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .find_map(|(j, w)| scale_between(w.coords(), img.coords()).map(|s| (j, s)))
        else {
            return false;
        };
        let positive = s.is_positive();
        if *sign.get_or_insert(positive) != positive {
            return false;
        }
        used[j] = true;
    }
    true
}

/// `s` with `b = s a`, if it exists.
fn scale_between(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    let k = a.iter().position(|x| !x.is_zero())?;
    let s = &b[k] / &a[k];
    a.iter().zip(b).all(|(x, y)| &(x * &s) == y).then_some(s)
}

fn proportional_positive(a: &Matrix<Rat>, b: &Matrix<Rat>) -> bool {
    let fa: Vec<Rat> = a.iter().flatten().cloned().collect();
    let fb: Vec<Rat> = b.iter().flatten().cloned().collect();
    scale_between(&fb, &fa).is_some_and(|s| s.is_positive())
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryReport {
    pub samples: usize,
    pub seed: u64,
    pub max_deviation: f64,
    /// Sampled points whose image left the domain.
    pub escaped: usize,
    pub violation: bool,
}

/// `max |d(gx, gy) - d(x, y)|` over sampled pairs.
pub fn isometry_check(domain: &ConvexDomain, g: &ProjMap<Rat>, samples: usize, seed: u64, tol: f64) -> IsometryReport {
    let gf = g.to_f64();
    let rows = map_samples(samples, seed, 1, |_, rng| {
        let x = domain.sample_interior(rng);
        let y = domain.sample_interior(rng);
        let (gx, gy) = (gf.apply_raw(&x), gf.apply_raw(&y));
        let before = domain.hilbert_distance(&x, &y, tol).ok()?;
        let after = domain.hilbert_distance(&gx, &gy, tol).ok()?;
        Some((after - before).abs())
    });
    let escaped = rows.iter().filter(|r| r.is_none()).count();
    let max_deviation = rows.iter().flatten().cloned().fold(0.0, f64::max);
    IsometryReport {
        samples,
        seed,
        max_deviation,
        escaped,
        violation: escaped > 0 || max_deviation > tol,
    }
}

/// `g` permutes the vertices of `F` up to scale.
pub fn stabilizes_flat(g: &ProjMap<Rat>, flat: &Flat) -> bool {
    let vs = flat.vertices();
    let mut used = vec![false; vs.len()];
    for v in vs {
        let img = g.apply_raw(v);
        match (0..vs.len()).find(|&j| !used[j] && vs[j].same_point(&img, 0.0)) {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslationLength {
    pub value: f64,
    /// The element is diagonal in the vertex basis and the value is exact.
    pub closed_form: bool,
    pub evaluations: usize,
    pub budget_exhausted: bool,
}

/// `g` written in the basis of simplex vertex representatives.
fn simplex_conjugate(domain: &ConvexDomain, g: &ProjMap<Rat>) -> Result<Matrix<Rat>, GroupError> {
    let poly = domain.as_polytope().filter(|p| p.is_simplex()).ok_or(GroupError::NotASimplex)?;
    check_dim(domain, g)?;
    let n = poly.dim() + 1;
    let b: Matrix<Rat> = (0..n)
        .map(|r| poly.vertices().iter().map(|v| v.coords()[r].clone()).collect())
        .collect();
    let bi = linalg::inverse(&b, 0.0).ok_or(ProjectiveError::Singular)?;
    Ok(linalg::mat_mul(&bi, &linalg::mat_mul(g.matrix(), &b)))
}

/// `inf_x d(x, g x)` on a simplex. Diagonal elements (in the vertex basis)
/// get the closed form `1/2 (max log|l_i| - min log|l_i|)`; others a
/// multi-start pattern search in log coordinates.
pub fn translation_length(domain: &ConvexDomain, g: &GroupElement, budget: usize) -> Result<TranslationLength, GroupError> {
    let h = simplex_conjugate(domain, &g.map)?;
    let n = h.len();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || h[i][j].is_zero()));
    if diagonal {
        let logs: Vec<f64> = (0..n).map(|i| h[i][i].to_f64().abs().ln()).collect();
        let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
        return Ok(TranslationLength {
            value: 0.5 * (hi - lo),
            closed_form: true,
            evaluations: 0,
            budget_exhausted: false,
        });
    }
    translation_length_numeric(domain, g, budget, 32, 0)
}

/// Numerical infimum of the displacement, ignoring any closed form.
pub fn translation_length_numeric(
    domain: &ConvexDomain,
    g: &GroupElement,
    budget: usize,
    starts: usize,
    seed: u64,
) -> Result<TranslationLength, GroupError> {
    let h = linalg::to_f64_matrix(&simplex_conjugate(domain, &g.map)?);
    let n = h.len();
    let displacement = |phi: &[f64]| {
        let x = phi_inverse(phi);
        let gx: Vec<f64> = linalg::mat_vec(&h, &x).iter().map(|c| c.abs()).collect();
        simplex_distance(&x, &gx).unwrap_or(f64::INFINITY)
    };
    let dirs = difference_directions(n);
    let per_start = (budget / starts.max(1)).max(1);
    let params = SearchParams {
        initial_step: 0.5,
        min_step: 1e-9,
        budget: per_start,
    };
    let mut best: Option<crate::optimize::SearchResult> = None;
    let mut evaluations = 0;
    for s in 0..starts.max(1) {
        let rng = &mut rng_for(seed, s as u64);
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let r = pattern_search(displacement, &x0, &dirs, params);
        evaluations += r.evaluations;
        if best.as_ref().map_or(true, |b| r.value < b.value) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one start");
    Ok(TranslationLength {
        value: best.value,
        closed_form: false,
        evaluations,
        budget_exhausted: best.budget_exhausted,
    })
}

/// Finitely many generators; inverses are implied.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub elements: Vec<GroupElement>,
    pub labels: Vec<String>,
}

impl GeneratorSet {
    pub fn new(elements: Vec<GroupElement>, labels: Vec<String>) -> Self {
        assert_eq!(elements.len(), labels.len(), "one label per generator");
        Self { elements, labels }
    }

    /// Generators followed by their inverses, with labels; the inverse of a
    /// lowercase one-letter label is its uppercase, otherwise `label^-1`.
    fn symmetric(&self) -> Vec<(String, ProjMap<Rat>, usize)> {
        let k = self.elements.len();
        let mut out = Vec::with_capacity(2 * k);
        for (i, (g, l)) in self.elements.iter().zip(&self.labels).enumerate() {
            out.push((l.clone(), g.map.clone(), i + k));
        }
        for (i, (g, l)) in self.elements.iter().zip(&self.labels).enumerate() {
            let inv = if l.len() == 1 && l.chars().all(|c| c.is_ascii_lowercase()) {
                l.to_ascii_uppercase()
            } else {
                format!("{l}^-1")
            };
            out.push((inv, g.map.inverse(), i));
        }
        out
    }

    /// Reduced words up to `max_len` (no letter next to its inverse), in
    /// breadth-first order, with their maps.
    pub fn words(&self, max_len: usize) -> Vec<(String, ProjMap<Rat>)> {
        let sym = self.symmetric();
        let n = self.elements.first().map_or(1, |g| g.map.size());
        let sep = if self.labels.iter().all(|l| l.chars().count() == 1) { "" } else { " " };
        let mut out = vec![(String::new(), ProjMap::identity(n))];
        let mut queue: VecDeque<(String, ProjMap<Rat>, Option<usize>, usize)> = VecDeque::new();
        queue.push_back((String::new(), ProjMap::identity(n), None, 0));
        while let Some((word, map, last, len)) = queue.pop_front() {
            if len == max_len {
                continue;
            }
            for (i, (label, g, _)) in sym.iter().enumerate() {
                if last.is_some_and(|l| sym[l].2 == i) {
                    continue;
                }
                let w = if word.is_empty() { label.clone() } else { format!("{label}{sep}{word}") };
                let m = g.compose(&map);
                out.push((w.clone(), m.clone()));
                queue.push_back((w, m, Some(i), len + 1));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct OrbitPoint<S> {
    pub word: String,
    pub point: ProjPoint<S>,
}

/// Distinct images of `x` under reduced words of length at most `max_len`.
/// Float points are merged at tolerance `1e-12`, rational points exactly.
pub fn orbit<S: Scalar>(gens: &GeneratorSet, x: &ProjPoint<S>, max_len: usize) -> Vec<OrbitPoint<S>> {
    let tol = if S::EXACT { 0.0 } else { 1e-12 };
    let mut out: Vec<OrbitPoint<S>> = Vec::new();
    for (word, m) in gens.words(max_len) {
        let ms: Matrix<S> = m.matrix().iter().map(|r| r.iter().map(S::from_rat).collect()).collect();
        let Ok(p) = ProjPoint::new(linalg::mat_vec(&ms, x.coords())) else {
            continue;
        };
        let p = p.rescaled();
        if !out.iter().any(|o| o.point.same_point(&p, tol)) {
            out.push(OrbitPoint {
                word: if word.is_empty() { "e".to_string() } else { word },
                point: p,
            });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceWitness {
    pub word: String,
    /// A sample whose image lands inside the region.
    pub image_inside: Vec<f64>,
    /// An image under `g` or `g^-1` of a sample that lands outside.
    pub image_outside: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub seed: u64,
    pub words: usize,
    pub points: usize,
    pub violations: usize,
    pub witness: Option<InvarianceWitness>,
}

/// Sampled test of precise invariance for the region `X = {p : region(p)}`:
/// a word `g` is a violation when `g X` meets `X` (some sampled `p in X` has
/// `g p in X`) but differs from it (some sampled `p in X` has `g p` or
/// `g^-1 p` outside `X`).
pub fn precise_invariance_check<R, P>(
    region: R,
    sampler: P,
    gens: &GeneratorSet,
    max_len: usize,
    samples: usize,
    seed: u64,
) -> InvarianceReport
where
    R: Fn(&ProjPoint<f64>) -> bool,
    P: Fn(&mut ChaCha8Rng) -> ProjPoint<f64>,
{
    let points: Vec<ProjPoint<f64>> = (0..samples)
        .map(|i| sampler(&mut rng_for(seed, i as u64)))
        .filter(|p| region(p))
        .collect();
    let words = gens.words(max_len);
    let mut report = InvarianceReport {
        seed,
        words: words.len().saturating_sub(1),
        points: points.len(),
        violations: 0,
        witness: None,
    };
    for (word, m) in words.iter().skip(1) {
        let mf = m.to_f64();
        let mi = mf.inverse();
        let mut inside = None;
        let mut outside = None;
        for p in &points {
            let q = mf.apply(p);
            if region(&q) {
                inside.get_or_insert(q);
            } else {
                outside.get_or_insert(q);
            }
            // A point of X missing from g X shows up as g^-1 p outside X.
            let r = mi.apply(p);
            if !region(&r) {
                outside.get_or_insert(r);
            }
            if inside.is_some() && outside.is_some() {
                break;
            }
        }
        if let (Some(a), Some(b)) = (inside, outside) {
            report.violations += 1;
            if report.witness.is_none() {
                report.witness = Some(InvarianceWitness {
                    word: word.clone(),
                    image_inside: a.into_coords(),
                    image_outside: b.into_coords(),
                });
            }
        }
    }
    report
}
