//! Invariant suites behind `hilbert-geom verify`.
//!
//! Every sampled check draws sample `i` from [`rng_for`]`(seed_k, i)` where
//! `seed_k = seed + k * 0x9E3779B97F4A7C15` (wrapping) and `k` numbers the
//! check within its suite. Reports are therefore independent of `--jobs`.
//!
//! Each check compares against its own default threshold; `tol` replaces all
//! of them when given. Exact (rational) checks ignore it.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::domain::{ConvexDomain, Polytope};
use crate::faces::{FaceLattice, PairClass};
use crate::flats::{
    boundary_segment_check, epsilon_projection_check, flat_dual, phi_inverse, phi_map, phi_norm_bounds,
    simplex_distance, validate_flat, Flat,
};
use crate::group::{
    certify_preserves, certify_sampled, isometry_check, orbit, precise_invariance_check, stabilizes_flat,
    translation_length, translation_length_numeric, Certificate, GeneratorSet, GroupElement,
};
use crate::linalg::{self, Matrix};
use crate::neighborhood::StandardNeighborhood;
use crate::projective::{cross_ratio, general_position, AffineChart, Hyperplane, ProjMap, ProjPoint};
use crate::sampling::{map_samples, rng_for};
use crate::scalar::{format_rat, rat, rat_int, Rat, Scalar, DEFAULT_TOL};

pub const SUITES: [&str; 6] = ["metric", "duality", "faces", "projection", "simplex", "group"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; expected one of metric, duality, faces, projection, simplex, group")]
    UnknownSuite(String),
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    /// Replaces every check's default threshold.
    pub tol: Option<f64>,
    pub jobs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 42,
            tol: None,
            jobs: 1,
        }
    }
}

impl VerifyConfig {
    fn threshold(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub invariant: String,
    pub passed: bool,
    /// Reported but never fails the suite.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Check {
    pub fn counts(&self) -> bool {
        !self.informational
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<Value>,
    pub checks: Vec<Check>,
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport, VerifyError> {
    let checks = match name {
        "metric" => metric_suite(cfg),
        "duality" => duality_suite(cfg),
        "faces" => faces_suite(cfg),
        "projection" => projection_suite(cfg),
        "simplex" => simplex_suite(cfg),
        "group" => group_suite(cfg),
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    };
    let first = checks
        .iter()
        .find(|c| c.counts() && !c.passed)
        .map(|c| json!({"check": c.name, "witness": c.counterexample}));
    Ok(SuiteReport {
        suite: name.to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        tol: cfg.tol,
        passed: checks.iter().all(|c| !c.counts() || c.passed),
        first_counterexample: first,
        checks,
    })
}

fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Running record of one check.
struct Tally {
    checked: usize,
    max_error: Option<f64>,
    witness: Option<Value>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checked: 0,
            max_error: None,
            witness: None,
        }
    }

    fn error(&mut self, err: f64, threshold: f64, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        let worst = self.max_error.unwrap_or(0.0);
        self.max_error = Some(if err.is_nan() { f64::NAN } else { worst.max(err) });
        if !(err <= threshold) && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn truth(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self, name: &str, invariant: &str, threshold: Option<f64>) -> Check {
        Check {
            name: name.to_string(),
            invariant: invariant.to_string(),
            passed: self.checked > 0 && self.witness.is_none(),
            informational: false,
            checked: self.checked,
            threshold,
            max_error: self.max_error,
            details: None,
            counterexample: self.witness,
        }
    }
}

fn fjson(p: &ProjPoint<f64>) -> Value {
    json!(p.coords())
}

fn rjson(p: &ProjPoint<Rat>) -> Value {
    json!(p.coords().iter().map(format_rat).collect::<Vec<_>>())
}

fn dist(domain: &ConvexDomain, x: &ProjPoint<f64>, y: &ProjPoint<f64>) -> f64 {
    domain.hilbert_distance(x, y, DEFAULT_TOL).unwrap_or(f64::NAN)
}

/// The stock domains: simplices in d = 2, 3, 4, the cube, a random rational
/// polytope with 12 vertices in d = 3, and round balls in d = 2, 3.
pub fn stock_domains(seed: u64) -> Vec<(String, ConvexDomain)> {
    let mut rng = rng_for(sub_seed(seed, 1000), 0);
    vec![
        ("simplex2".into(), ConvexDomain::simplex(2)),
        ("simplex3".into(), ConvexDomain::simplex(3)),
        ("simplex4".into(), ConvexDomain::simplex(4)),
        ("cube3".into(), ConvexDomain::cube(3)),
        ("random3".into(), ConvexDomain::random_polytope(3, 12, &mut rng)),
        ("ball2".into(), ConvexDomain::unit_ball(2)),
        ("ball3".into(), ConvexDomain::unit_ball(3)),
    ]
}

/// An interior sample pulled halfway to the barycenter of a polytope, which
/// keeps the Finsler norm, and so the finite-difference error, bounded.
pub fn core_sample(domain: &ConvexDomain, rng: &mut ChaCha8Rng) -> ProjPoint<f64> {
    let x = domain.sample_interior(rng);
    let Some(poly) = domain.as_polytope() else {
        return x;
    };
    let b = domain.chart_rep(&poly.barycenter().to_f64()).expect("barycenter is interior");
    let xs = domain.chart_rep(&x).expect("sample is interior");
    ProjPoint::new(xs.iter().zip(&b).map(|(a, c)| 0.5 * (a + c)).collect()).expect("interior point is nonzero")
}

/// Uniform interior samples, half of them replaced by points between a
/// random flat point and the pseudo-dual, where standard neighborhoods live.
fn near_flat_sampler<'a>(dom: &'a ConvexDomain, flat: &'a Flat) -> impl Fn(&mut ChaCha8Rng) -> ProjPoint<f64> + Sync + 'a {
    let hat = flat
        .pseudo_dual()
        .ok()
        .and_then(|h| dom.chart().representative(&h.to_f64(), DEFAULT_TOL).ok());
    move |rng: &mut ChaCha8Rng| match &hat {
        Some(h) if rng.gen_bool(0.5) => {
            let f = dom.chart_rep(&flat.sample_point(rng)).expect("flat points are interior");
            let s = rng.gen_range(0.0..0.5);
            ProjPoint::new(f.iter().zip(h).map(|(a, b)| (1.0 - s) * a + s * b).collect()).unwrap()
        }
        _ => dom.sample_interior(rng),
    }
}

/// Positive integer combination of the vertices, weights in `1..=16`.
pub fn rational_interior(poly: &Polytope, rng: &mut ChaCha8Rng) -> ProjPoint<Rat> {
    let n = poly.dim() + 1;
    let mut acc = vec![Rat::zero(); n];
    for v in poly.vertices() {
        let w = rat_int(rng.gen_range(1..=16));
        for (a, c) in acc.iter_mut().zip(v.coords()) {
            *a += &w * c;
        }
    }
    ProjPoint::new(acc).expect("positive combination of vertices is nonzero")
}

fn small_positive(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(1..=9), rng.gen_range(1..=9))
}

/// `I + E` with entries of `E` in `{-1/10, .., 1/10}`: condition number far below `1e3`.
fn near_identity(n: usize, rng: &mut ChaCha8Rng) -> ProjMap<Rat> {
    loop {
        let m: Matrix<Rat> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| rat(rng.gen_range(-4..=4), 40) + if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        if let Ok(g) = ProjMap::new(m, 0.0) {
            return g;
        }
    }
}

fn random_integer_point(n: usize, rng: &mut ChaCha8Rng) -> ProjPoint<Rat> {
    loop {
        let c: Vec<Rat> = (0..n).map(|_| rat_int(rng.gen_range(-6..=6))).collect();
        if let Ok(p) = ProjPoint::new(c) {
            return p;
        }
    }
}

// ---------------------------------------------------------------- metric

fn metric_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let n = cfg.samples;
    let thr = cfg.threshold(1e-9);
    let domains = stock_domains(cfg.seed);
    let mut symmetry = Tally::new();
    let mut triangle = Tally::new();
    let mut identity = Tally::new();
    let mut invariance = Tally::new();
    let mut finsler = Tally::new();
    let fin_thr = cfg.threshold(1e-4);
    for (k, (name, dom)) in domains.iter().enumerate() {
        let rows = map_samples(n, sub_seed(cfg.seed, k as u64), cfg.jobs, |_, rng| {
            let (x, y, z) = (dom.sample_interior(rng), dom.sample_interior(rng), dom.sample_interior(rng));
            let d = [dist(dom, &x, &y), dist(dom, &y, &x), dist(dom, &x, &z), dist(dom, &y, &z), dist(dom, &x, &x)];
            (x, y, z, d)
        });
        for (x, y, z, [dxy, dyx, dxz, dyz, dxx]) in &rows {
            let w = || json!({"domain": name, "x": fjson(x), "y": fjson(y), "z": fjson(z)});
            symmetry.error((dxy - dyx).abs(), thr, w);
            triangle.error((dxz - dxy - dyz).max(0.0), thr, w);
            identity.truth(dxx.abs() <= thr && *dxy > 0.0, w);
        }

        let g = near_identity(dom.dim() + 1, &mut rng_for(sub_seed(cfg.seed, 100 + k as u64), 0));
        let gf = g.to_f64();
        match dom.transformed(&g) {
            Ok(image) => {
                let rows = map_samples(n, sub_seed(cfg.seed, 200 + k as u64), cfg.jobs, |_, rng| {
                    let (x, y) = (dom.sample_interior(rng), dom.sample_interior(rng));
                    let before = dist(dom, &x, &y);
                    let after = dist(&image, &gf.apply_raw(&x), &gf.apply_raw(&y));
                    (x, y, (after - before).abs())
                });
                for (x, y, e) in rows {
                    invariance.error(e, thr, || json!({"domain": name, "x": fjson(&x), "y": fjson(&y)}));
                }
            }
            Err(e) => invariance.truth(false, || json!({"domain": name, "error": e.to_string()})),
        }

        let chart = dom.chart();
        let h = 1e-6;
        // Tangent vectors of length one relative to the domain's radius in
        // this chart. The quotient error is (h / 4) |1/t+^2 - 1/t-^2| + O(h^2).
        let radius = dom.as_polytope().map_or(1.0, |p| {
            let pts: Vec<Vec<f64>> = p
                .vertices()
                .iter()
                .map(|v| chart.chart_coords(&v.to_f64(), DEFAULT_TOL).expect("vertices are in the chart"))
                .collect();
            let mut m = 0.0f64;
            for a in &pts {
                for b in &pts {
                    m = m.max(a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt());
                }
            }
            m / 2.0
        });
        let rows = map_samples(n, sub_seed(cfg.seed, 300 + k as u64), cfg.jobs, |_, rng| {
            let x = core_sample(dom, rng);
            let v: Vec<f64> = loop {
                let v: Vec<f64> = (0..dom.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let r = linalg::dot(&v, &v).sqrt();
                if r > 1e-3 {
                    break v.iter().map(|c| radius * c / r).collect();
                }
            };
            let err = chart.chart_coords(&x, DEFAULT_TOL).ok().and_then(|xc| {
                let moved: Vec<f64> = xc.iter().zip(&v).map(|(a, b)| a + h * b).collect();
                let y = chart.lift(&moved);
                let quotient = dist(dom, &x, &y) / h;
                let norm = dom.finsler_norm(&chart, &x, &v, DEFAULT_TOL).ok()?;
                Some((quotient - norm).abs())
            });
            (x, v, err.unwrap_or(f64::NAN))
        });
        for (x, v, e) in rows {
            finsler.error(e, fin_thr, || json!({"domain": name, "x": fjson(&x), "v": v}));
        }
    }

    let klein_thr = cfg.threshold(1e-10);
    let mut klein = Tally::new();
    for d in [2, 3] {
        let ball = ConvexDomain::unit_ball(d);
        let origin = ProjPoint::from_affine(&vec![0.0; d]);
        for i in 1..=9 {
            let r = i as f64 / 10.0;
            let mut a = vec![0.0; d];
            a[0] = r;
            let got = dist(&ball, &origin, &ProjPoint::from_affine(&a));
            klein.error((got - r.atanh()).abs(), klein_thr, || json!({"dim": d, "r": r, "distance": got}));
        }
    }

    let mut checks = vec![
        symmetry.finish("symmetry", "|d(x,y) - d(y,x)| <= tol on every stock domain", Some(thr)),
        triangle.finish("triangle", "d(x,z) <= d(x,y) + d(y,z) + tol", Some(thr)),
        identity.finish("identity", "d(x,x) = 0 and d(x,y) > 0 for sampled x != y", Some(thr)),
        invariance.finish("projective_invariance", "d_{g Omega}(gx, gy) = d_Omega(x, y) for g near the identity", Some(thr)),
        klein.finish("klein", "unit ball: d(0, r e_1) = artanh r for r = 0.1 .. 0.9", Some(klein_thr)),
        finsler.finish("finsler", "|d(x, x + h v) / h - F(x, v)| <= tol at h = 1e-6", Some(fin_thr)),
    ];
    checks.extend(projective_checks(cfg));
    checks
}

/// Projective-core invariants: cross-ratio invariance and reciprocity, dual
/// incidence, normalization, charts.
fn projective_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let n = cfg.samples;
    let thr = cfg.threshold(1e-10);
    let mut exact = Tally::new();
    let mut float = Tally::new();
    let mut swap = Tally::new();
    let mut incidence = Tally::new();
    let mut normal = Tally::new();
    let mut chart = Tally::new();
    let rows = map_samples(n, sub_seed(cfg.seed, 400), cfg.jobs, |_, rng| {
        let a = random_integer_point(4, rng);
        let b = loop {
            let b = random_integer_point(4, rng);
            if general_position(&[a.clone(), b.clone()], 0.0) {
                break b;
            }
        };
        let mut ts: Vec<Rat> = Vec::new();
        while ts.len() < 4 {
            let t = rat(rng.gen_range(-30..=30), rng.gen_range(1..=7));
            if !ts.contains(&t) {
                ts.push(t);
            }
        }
        let pts: Vec<ProjPoint<Rat>> = ts
            .iter()
            .map(|t| ProjPoint::new(a.coords().iter().zip(b.coords()).map(|(x, y)| x + t * y).collect()).unwrap())
            .collect();
        let g = near_identity(4, rng);
        let img: Vec<ProjPoint<Rat>> = pts.iter().map(|p| g.apply(p)).collect();
        let cr = |p: &[ProjPoint<Rat>]| cross_ratio(&p[0], &p[1], &p[2], &p[3], 0.0).ok();
        let before = cr(&pts);
        let after = cr(&img);
        let swapped = cross_ratio(&pts[0], &pts[2], &pts[1], &pts[3], 0.0).ok();
        let fl: Vec<ProjPoint<f64>> = pts.iter().map(ProjPoint::to_f64).collect();
        let gf = g.to_f64();
        let fimg: Vec<ProjPoint<f64>> = fl.iter().map(|p| gf.apply(p)).collect();
        let fcr = |p: &[ProjPoint<f64>]| cross_ratio(&p[0], &p[1], &p[2], &p[3], 1e-12).unwrap_or(f64::NAN);
        let (f0, f1) = (fcr(&fl), fcr(&fimg));
        let rel = ((f1 - f0) / f0).abs();

        // A hyperplane through a.coords and a generic one.
        let c: Vec<Rat> = (0..4).map(|_| rat_int(rng.gen_range(-5..=5))).collect();
        let k = a.coords().iter().position(|x| !x.is_zero()).unwrap();
        let shift = linalg::dot(&c, a.coords()) / &a.coords()[k];
        let mut through = c.clone();
        through[k] -= shift;
        let incident = match (Hyperplane::new(through), Hyperplane::new(c)) {
            (Ok(h), Ok(generic)) => {
                let gp = g.apply(&a);
                let on = g.apply_dual(&h).incidence(&gp).is_zero();
                let off_before = generic.incidence(&a).is_zero();
                let off_after = g.apply_dual(&generic).incidence(&gp).is_zero();
                Some(on && h.incidence(&a).is_zero() && off_before == off_after)
            }
            _ => None,
        };

        let scale = rat(rng.gen_range(1..=9) * if rng.gen() { 1 } else { -1 }, rng.gen_range(1..=9));
        let norm = a.normalized();
        let normal_ok = norm.normalized().coords() == norm.coords() && a.scaled(&scale).normalized().coords() == norm.coords();

        let eta: Vec<Rat> = (0..4).map(|_| rat_int(rng.gen_range(1..=5))).collect();
        let ch = AffineChart::new(Hyperplane::new(eta).unwrap());
        let coords: Vec<Rat> = (0..3).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
        let back = ch.chart_coords(&ch.lift(&coords), 0.0).ok();
        let chart_ok = back.as_deref() == Some(&coords[..]);

        (pts, before, after, swapped, rel, incident, normal_ok, chart_ok)
    });
    for (pts, before, after, swapped, rel, incident, normal_ok, chart_ok) in rows {
        let w = || json!({"points": pts.iter().map(rjson).collect::<Vec<_>>()});
        exact.truth(before.is_some() && before == after, w);
        float.error(rel, thr, w);
        swap.truth(matches!((&before, &swapped), (Some(a), Some(b)) if (a * b).is_one()), w);
        if let Some(ok) = incident {
            incidence.truth(ok, w);
        }
        normal.truth(normal_ok, w);
        chart.truth(chart_ok, w);
    }
    vec![
        exact.finish("cross_ratio_invariance_exact", "[gz1, gx, gy, gz2] = [z1, x, y, z2] exactly for rational g", None),
        float.finish("cross_ratio_invariance_float", "relative cross-ratio change under g <= tol in floating point", Some(thr)),
        swap.finish("cross_ratio_swap", "[z1, x, y, z2] [z1, y, x, z2] = 1", None),
        incidence.finish("dual_incidence", "p on h iff g p on g^-T h", None),
        normal.finish("normalization", "normalization is idempotent and scale-invariant", None),
        chart.finish("chart_roundtrip", "chart_coords(lift(c)) = c", None),
    ]
}

// ---------------------------------------------------------------- duality

fn same_vertex_set(a: &Polytope, b: &Polytope) -> bool {
    a.vertices().len() == b.vertices().len()
        && a.vertices().iter().all(|v| b.vertices().iter().any(|w| w.same_point(v, 0.0)))
}

fn proportional(a: &Matrix<Rat>, b: &Matrix<Rat>) -> bool {
    let fa: Vec<&Rat> = a.iter().flatten().collect();
    let fb: Vec<&Rat> = b.iter().flatten().collect();
    let Some(i) = fa.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if fb[i].is_zero() {
        return false;
    }
    let s = fb[i] / fa[i];
    s.is_positive() && fa.iter().zip(&fb).all(|(x, y)| &(*x * &s) == *y)
}

/// The polytopes of the duality suite: named ones plus 20 random ones in d = 2, 3, 4.
pub fn duality_polytopes(seed: u64) -> Vec<(String, ConvexDomain)> {
    let mut out: Vec<(String, ConvexDomain)> = vec![
        ("simplex2".into(), ConvexDomain::simplex(2)),
        ("simplex3".into(), ConvexDomain::simplex(3)),
        ("simplex4".into(), ConvexDomain::simplex(4)),
        ("cube2".into(), ConvexDomain::cube(2)),
        ("cube3".into(), ConvexDomain::cube(3)),
        ("cube4".into(), ConvexDomain::cube(4)),
        ("cross3".into(), ConvexDomain::cross_polytope(3)),
        ("cross4".into(), ConvexDomain::cross_polytope(4)),
    ];
    for i in 0..20u64 {
        let d = 2 + (i % 3) as usize;
        let n = d + 2 + (i / 3 % 2) as usize;
        let mut rng = rng_for(sub_seed(seed, 500), i);
        out.push((format!("random{d}_{i}"), ConvexDomain::random_polytope(d, n, &mut rng)));
    }
    out
}

fn duality_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let mut involution = Tally::new();
    let mut fvec = Tally::new();
    for (name, dom) in duality_polytopes(cfg.seed) {
        let p = dom.as_polytope().expect("polytope");
        let dual = dom.dual_domain();
        let double = dual.as_ref().ok().map(ConvexDomain::dual_domain);
        let ok = matches!(&double, Some(Ok(dd)) if same_vertex_set(dd.as_polytope().unwrap(), p));
        involution.truth(ok, || json!({"domain": name, "vertices": p.vertices().iter().map(rjson).collect::<Vec<_>>()}));
        if let Ok(dual) = &dual {
            let f = FaceLattice::new(p).f_vector();
            let mut g = FaceLattice::new(dual.as_polytope().unwrap()).f_vector();
            g.reverse();
            fvec.truth(f == g, || json!({"domain": name, "f": f, "dual_f_reversed": g}));
        }
    }

    let mut self_dual = Tally::new();
    for d in 1..=4 {
        let s = ConvexDomain::simplex(d);
        let p = s.as_polytope().unwrap();
        let ok = s.dual_domain().ok().is_some_and(|dual| {
            let q = dual.as_polytope().unwrap();
            if !q.is_simplex() {
                return false;
            }
            // The vertex basis change sends the dual onto the primal.
            let cols = |poly: &Polytope| -> Matrix<Rat> {
                (0..=d).map(|r| poly.vertices().iter().map(|v| v.coords()[r].clone()).collect()).collect()
            };
            let Some(qi) = linalg::inverse(&cols(q), 0.0) else {
                return false;
            };
            let Ok(g) = ProjMap::new(linalg::mat_mul(&cols(p), &qi), 0.0) else {
                return false;
            };
            let mapped = dual.transformed(&g).ok();
            // In the standard pairing the standard simplex is literally its own dual.
            same_vertex_set(q, p) && mapped.is_some_and(|m| same_vertex_set(m.as_polytope().unwrap(), p))
        });
        self_dual.truth(ok, || json!({"dim": d}));
    }

    let mut ellipsoid = Tally::new();
    let skew = ProjMap::new(
        vec![
            vec![rat_int(2), rat(1, 3), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat(1, 2)],
            vec![rat(1, 5), rat_int(0), rat_int(1)],
        ],
        0.0,
    )
    .unwrap();
    let ellipsoids = [
        ("ball2", ConvexDomain::unit_ball(2)),
        ("ball3", ConvexDomain::unit_ball(3)),
        ("skew2", ConvexDomain::unit_ball(2).transformed(&skew).expect("image of a ball")),
    ];
    for (name, e) in &ellipsoids {
        let form = e.as_ellipsoid().unwrap().form();
        let ok = e
            .dual_domain()
            .and_then(|d| d.dual_domain())
            .is_ok_and(|dd| proportional(form, dd.as_ellipsoid().unwrap().form()));
        ellipsoid.truth(ok, || json!({"domain": name}));
    }

    let mut cube = Tally::new();
    for d in 2..=4 {
        let dual = ConvexDomain::cube(d).dual_domain().unwrap();
        let q = dual.as_polytope().unwrap();
        cube.truth(q.vertices().len() == 2 * d && q.facets().len() == 1 << d, || {
            json!({"dim": d, "vertices": q.vertices().len(), "facets": q.facets().len()})
        });
    }

    vec![
        involution.finish("involution", "(P*)* = P as sets of projective vertices, exactly", None),
        fvec.finish("f_vector_reversal", "f_k(P) = f_{d-1-k}(P*)", None),
        self_dual.finish("simplex_self_dual", "the dual simplex is projectively equivalent to the simplex", None),
        ellipsoid.finish("ellipsoid_involution", "(E*)* = E: the form is recovered up to positive scale", None),
        cube.finish("cube_dual", "dual of the d-cube has 2d vertices and 2^d facets", None),
    ]
}

// ---------------------------------------------------------------- faces

/// Brute-force class of a face pair from vertex sets alone.
fn oracle_class(faces: &[BTreeSet<usize>], a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> (usize, PairOracle) {
    let meet: BTreeSet<usize> = a.intersection(b).copied().collect();
    let equal = a == b;
    let disjoint = meet.is_empty();
    let inclusion = !equal && !disjoint && (a.is_subset(b) || b.is_subset(a));
    let proper = !equal && !disjoint && !inclusion;
    let fired = [equal, disjoint, inclusion, proper].iter().filter(|x| **x).count();
    let class = if equal {
        PairOracle::Equal
    } else if disjoint {
        PairOracle::Disjoint
    } else if inclusion {
        PairOracle::Inclusion
    } else {
        PairOracle::Meet(faces.iter().position(|f| *f == meet))
    };
    (fired, class)
}

#[derive(Debug, PartialEq)]
enum PairOracle {
    Equal,
    Disjoint,
    Inclusion,
    Meet(Option<usize>),
}

fn faces_suite(_cfg: &VerifyConfig) -> Vec<Check> {
    let polytopes = [
        ("simplex3", ConvexDomain::simplex(3)),
        ("cube3", ConvexDomain::cube(3)),
        ("cross3", ConvexDomain::cross_polytope(3)),
        ("cube2", ConvexDomain::cube(2)),
    ];
    let mut closure = Tally::new();
    let mut support = Tally::new();
    let mut subspace = Tally::new();
    let mut classify = Tally::new();
    let mut reversal = Tally::new();
    let mut double = Tally::new();
    let mut angular = Tally::new();
    for (name, dom) in &polytopes {
        let p = dom.as_polytope().unwrap();
        let lat = FaceLattice::new(p);
        let d = lat.dim();
        let sets: Vec<BTreeSet<usize>> = lat.faces().iter().map(|f| f.vertices.clone()).collect();

        for f in lat.faces() {
            let inc: Vec<Rat> = p.vertices().iter().map(|v| f.support.incidence(v)).collect();
            let on: BTreeSet<usize> = (0..inc.len()).filter(|&i| inc[i].is_zero()).collect();
            let off_sign: BTreeSet<bool> = inc.iter().filter(|x| !x.is_zero()).map(Signed::is_positive).collect();
            support.truth(on == f.vertices && off_sign.len() <= 1, || json!({"domain": name, "face": f.id}));
            let rows: Matrix<Rat> = f.vertices.iter().map(|&v| p.vertices()[v].coords().to_vec()).collect();
            subspace.truth(f.subspace.len() == f.dim + 1 && linalg::rank(&rows, 0.0) == f.dim + 1, || {
                json!({"domain": name, "face": f.id})
            });
        }

        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                let w = || json!({"domain": name, "pair": [i, j]});
                let meet: BTreeSet<usize> = a.intersection(b).copied().collect();
                closure.truth(meet.is_empty() || lat.find(&meet).is_some(), w);

                let (fired, oracle) = oracle_class(&sets, a, b);
                let got = lat.classify_pair(i, j).ok();
                let agrees = match (&got, &oracle) {
                    (Some(PairClass::Equal), PairOracle::Equal)
                    | (Some(PairClass::Disjoint), PairOracle::Disjoint)
                    | (Some(PairClass::BoundaryInclusion), PairOracle::Inclusion) => true,
                    (Some(PairClass::ProperMeeting(m)), PairOracle::Meet(Some(o))) => m == o,
                    _ => false,
                };
                classify.truth(fired == 1 && agrees, w);

                if a.is_subset(b) {
                    let (da, db) = (lat.dual_face(p, i).unwrap(), lat.dual_face(p, j).unwrap());
                    reversal.truth(db.vertices.is_subset(&da.vertices), w);
                }
            }
        }

        let dual = dom.dual_domain().unwrap();
        let q = dual.as_polytope().unwrap();
        let qlat = FaceLattice::new(q);
        // Dual facet j is the hyperplane of some primal vertex.
        let label: Vec<Option<usize>> = q
            .facets()
            .iter()
            .map(|h| p.vertices().iter().position(|v| h.as_point().same_point(v, 0.0)))
            .collect();
        for f in lat.faces() {
            let w = || json!({"domain": name, "face": f.id});
            let df = lat.dual_face(p, f.id).unwrap();
            angular.truth(f.dim + df.dim + 1 == d && lat.is_angular(p, f.id).unwrap_or(false), w);
            let ok = qlat.find(&df.vertices).is_some_and(|k| {
                let back = qlat.dual_face(q, k).unwrap();
                let verts: Option<BTreeSet<usize>> = back.vertices.iter().map(|&j| label[j]).collect();
                qlat.faces()[k].dim == df.dim && verts.as_ref() == Some(&f.vertices)
            });
            double.truth(ok, w);
        }
    }
    vec![
        closure.finish("closed_under_intersection", "the meet of two faces is empty or a face", None),
        support.finish("support", "the stored support hyperplane meets the vertices exactly in the face", None),
        subspace.finish("subspace_dim", "dim of the spanning subspace equals the face dimension", None),
        classify.finish("four_cases", "exactly one case holds per ordered pair and it matches brute-force set intersection", None),
        reversal.finish("inclusion_reversal", "K in L implies L* in K*", None),
        double.finish("double_dual", "(K*)* = K under the duality involution", None),
        angular.finish("angular_count", "every proper polytope face has dim K + dim K* = d - 1", None),
    ]
}

// ---------------------------------------------------------------- projection

/// The flat through `v + s (w - v)` over the other vertices `w` of a simplex.
pub fn simplex_corner_flat(domain: &ConvexDomain, corner: usize, s: &Rat) -> Result<Flat, crate::flats::FlatError> {
    let poly = domain.as_polytope().ok_or(crate::flats::FlatError::NotAPolytope)?;
    let v = &poly.vertices()[corner];
    let pts: Vec<ProjPoint<Rat>> = poly
        .vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != corner)
        .map(|(_, w)| ProjPoint::new(v.coords().iter().zip(w.coords()).map(|(a, b)| a + s * (b - a)).collect()).unwrap())
        .collect();
    validate_flat(domain, &pts)
}

fn projection_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let n = cfg.samples;
    let thr = cfg.threshold(1e-9);
    let dom = ConvexDomain::simplex(3);
    let poly = dom.as_polytope().unwrap();
    let half = simplex_corner_flat(&dom, 0, &rat(1, 2)).expect("corner flat");

    let mut nonexp = Tally::new();
    let rows = map_samples(n, sub_seed(cfg.seed, 600), cfg.jobs, |_, rng| {
        let (x, y) = (dom.sample_interior(rng), dom.sample_interior(rng));
        let err = match (half.normal_project(&x, DEFAULT_TOL), half.normal_project(&y, DEFAULT_TOL)) {
            (Ok(px), Ok(py)) => (dist(&dom, &px, &py) - dist(&dom, &x, &y)).max(0.0),
            _ => f64::NAN,
        };
        (x, y, err)
    });
    for (x, y, e) in rows {
        nonexp.error(e, thr, || json!({"x": fjson(&x), "y": fjson(&y)}));
    }

    let mut idem = Tally::new();
    for i in 0..n.min(2000) {
        let y = rational_interior(poly, &mut rng_for(sub_seed(cfg.seed, 601), i as u64));
        let ok = half.normal_project_exact(&y).is_ok_and(|p| {
            half.contains_exact(&p) && half.normal_project_exact(&p).is_ok_and(|pp| pp.same_point(&p, 0.0))
        });
        idem.truth(ok, || json!({"y": rjson(&y)}));
    }

    let mut pseudo = Tally::new();
    let mut involution = Tally::new();
    for s in [rat(1, 2), rat(1, 4), rat(3, 4), rat(1, 8)] {
        for corner in 0..4 {
            let w = || json!({"corner": corner, "s": format_rat(&s)});
            let Ok(f) = simplex_corner_flat(&dom, corner, &s) else {
                pseudo.truth(false, w);
                continue;
            };
            let v = &poly.vertices()[corner];
            let ok = f.pseudo_dual().is_ok_and(|hat| {
                hat.same_point(v, 0.0)
                    && !dom.contains_exact(hat)
                    && f.supports().is_ok_and(|hs| hs.iter().all(|h| h.incidence(hat).is_zero()))
            });
            pseudo.truth(ok, w);
            let ok = flat_dual(&f).and_then(|fd| flat_dual(&fd)).is_ok_and(|ff| {
                ff.carrier().same_hyperplane(f.carrier(), 0.0)
                    && ff.vertices().len() == f.vertices().len()
                    && f.vertices().iter().all(|v| ff.vertices().iter().any(|u| u.same_point(v, 0.0)))
            });
            involution.truth(ok, w);
        }
    }

    // Closedness: along convergent families the limit validates exactly when
    // its vertices are in general position with barycenter in the domain.
    let mut closed = Tally::new();
    let corner_pts = |s: &Rat| -> Vec<ProjPoint<Rat>> {
        (1..4)
            .map(|j| {
                let mut c = vec![rat_int(0); 4];
                c[0] = rat_int(1) - s;
                c[j] += s;
                ProjPoint::new(c).unwrap()
            })
            .collect()
    };
    let mut limits: Vec<(Rat, Vec<Rat>)> = Vec::new();
    for limit in [rat(1, 4), rat(1, 2), rat(3, 4)] {
        limits.push((limit.clone(), (0..8).map(|k| &limit + rat(1, 8 << k)).collect()));
    }
    limits.push((rat_int(1), (1..9).map(|k| rat_int(1) - rat(1, 1 << k)).collect()));
    limits.push((rat_int(0), (1..9).map(|k| rat(1, 1 << k)).collect()));
    for (limit, seq) in &limits {
        let members_ok = seq.iter().all(|s| validate_flat(&dom, &corner_pts(s)).is_ok());
        let lim = corner_pts(limit);
        let bary = ProjPoint::new((0..4).map(|j| lim.iter().map(|p| p.coords()[j].clone()).sum()).collect()).ok();
        let premise = general_position(&lim, 0.0) && bary.is_some_and(|b| dom.contains_exact(&b));
        closed.truth(members_ok && validate_flat(&dom, &lim).is_ok() == premise, || {
            json!({"limit": format_rat(limit)})
        });
    }

    let (nbhd_checks, nbhd_hull) = neighborhood_checks(cfg, &dom, &half);

    let eps_samples = n.min(40);
    let near = simplex_corner_flat(&dom, 0, &rat(17, 32)).expect("corner flat");
    let eps = epsilon_projection_check(&dom, &half, &near, 0.1, eps_samples, sub_seed(cfg.seed, 610), DEFAULT_TOL);
    let eps_check = Check {
        name: "close_flats_project".into(),
        invariant: "sampled estimate: normal lines from close flats meet the other flat".into(),
        passed: true,
        informational: true,
        checked: eps_samples,
        threshold: None,
        max_error: None,
        details: eps.ok().map(|r| serde_json::to_value(r).unwrap()),
        counterexample: None,
    };
    let seg_samples = n.min(500);
    let seg = boundary_segment_check(&dom, &half, seg_samples, sub_seed(cfg.seed, 611));
    let seg_check = Check {
        name: "boundary_segments".into(),
        invariant: "boundary segments meeting the flat's boundary (polytopes are the reducible case; reported only)".into(),
        passed: true,
        informational: true,
        checked: seg.as_ref().map_or(0, |r| r.tested),
        threshold: None,
        max_error: None,
        details: seg.ok().map(|r| {
            json!({
                "tested": r.tested,
                "outside_flat_boundary": r.violations,
                "example": r.first_violation.map(|(p, q)| json!([rjson(&p), rjson(&q)])),
            })
        }),
        counterexample: None,
    };

    let mut checks = vec![
        nonexp.finish("non_expansive", "d(pi x, pi y) <= d(x, y) + tol for the simplex corner flat", Some(thr)),
        idem.finish("idempotent", "pi(pi y) = pi y exactly on rational points", None),
        pseudo.finish("pseudo_dual", "corner flats have pseudo-dual at the cut-off vertex, outside the domain, on every support", None),
        involution.finish("flat_dual_involution", "the dual of the dual flat has the same carrier and vertices", None),
        closed.finish("closedness", "limits of corner-flat families validate iff in general position with hull meeting the domain", None),
        nbhd_hull,
    ];
    checks.extend(nbhd_checks);
    checks.push(eps_check);
    checks.push(seg_check);
    checks
}

/// Standard-neighborhood checks; the second value is the hull sampling check.
fn neighborhood_checks(cfg: &VerifyConfig, dom: &ConvexDomain, flat: &Flat) -> (Vec<Check>, Check) {
    let n = cfg.samples.min(2000);
    let thr = cfg.threshold(1e-9);
    let x = ProjPoint::new(vec![rat(8, 5), rat(1, 2), rat(1, 2), rat(1, 2)]).unwrap();
    let nb = StandardNeighborhood::new(dom, flat, &x).expect("base point in the domain");
    let choices = [rat(1, 3), rat(1, 2), rat(2, 3), rat_int(1), rat(3, 2), rat_int(2), rat_int(3)];
    let h_random = |rng: &mut ChaCha8Rng| {
        let a = choices.choose(rng).unwrap().clone();
        let b = choices.choose(rng).unwrap().clone();
        let c = Rat::one() / (&a * &b);
        nb.h_element(&[a, b, c]).expect("product one")
    };
    // Representative whose frame coordinates u are positive.
    let oriented = |p: &ProjPoint<Rat>| -> Vec<Rat> {
        let u_sum: f64 = flat.frame_coords(&p.to_f64()).map(|c| c.0.iter().sum()).unwrap_or(0.0);
        p.coords().iter().map(|c| if u_sum < 0.0 { -c.clone() } else { c.clone() }).collect()
    };

    let mut hull = Tally::new();
    let mut convex = Tally::new();
    let mut invariant = Tally::new();
    let mut region_pts: Vec<ProjPoint<Rat>> = Vec::new();
    // At least one pair for the convexity check.
    for i in 0..n.max(2) {
        let rng = &mut rng_for(sub_seed(cfg.seed, 620), i as u64);
        let z = h_random(rng).apply_raw(&x);
        let z2 = h_random(rng).apply_raw(&x);
        let f = flat.sample_point_exact(rng);
        let (zr, z2r) = (oriented(&z), oriented(&z2));
        let (a, b, c) = (rat(rng.gen_range(1..=16), 16), rat(rng.gen_range(0..=16), 16), rat(rng.gen_range(1..=16), 16));
        let y: Vec<Rat> = (0..4).map(|j| &a * &zr[j] + &b * &z2r[j] + &c * &f.coords()[j]).collect();
        let y = ProjPoint::new(y).unwrap();
        hull.truth(nb.level_region_contains_exact(&y), || json!({"hull_point": rjson(&y)}));
        let h = h_random(rng);
        let hy = h.apply_raw(&y);
        invariant.truth(nb.invariant_exact(&hy) == nb.invariant_exact(&y), || json!({"point": rjson(&y)}));
        region_pts.push(y);
    }
    for pair in region_pts.chunks(2) {
        if let [p, q] = pair {
            let (pr, qr) = (oriented(p), oriented(q));
            let mid = ProjPoint::new(pr.iter().zip(&qr).map(|(a, b)| a + b).collect()).unwrap();
            convex.truth(nb.level_region_contains_exact(&mid), || json!({"p": rjson(p), "q": rjson(q)}));
        }
    }

    // Converse: sampled region points split as orbit point plus flat point.
    let mut decompose = Tally::new();
    let near = near_flat_sampler(dom, flat);
    let rows = map_samples(cfg.samples.max(250) * 4, sub_seed(cfg.seed, 621), cfg.jobs, |_, rng| {
        let y = near(rng);
        if !nb.level_region_contains(&y, 1e-12) {
            return None;
        }
        let err = nb.decompose(&y).map(|(z, f)| {
            let (u, t) = nb.coords(&z).unwrap();
            let log_l: f64 = u.iter().map(|c| c.ln()).sum::<f64>() - 3.0 * t.ln();
            let level_err = (log_l - Scalar::to_f64(nb.level()).ln()).abs();
            let (fu, ft) = nb.coords(&f).unwrap();
            let fu_sum: f64 = fu.iter().sum();
            let flat_err = if fu.iter().all(|c| *c > 0.0) { (ft / fu_sum).abs() } else { f64::INFINITY };
            let sum: Vec<f64> = z.coords().iter().zip(f.coords()).map(|(a, b)| a + b).collect();
            let ys = y.rescaled();
            let ss = ProjPoint::new(sum).unwrap().rescaled();
            let sign = if linalg::dot(ys.coords(), ss.coords()) < 0.0 { -1.0 } else { 1.0 };
            let col = ys.coords().iter().zip(ss.coords()).map(|(a, b)| (a - sign * b).abs()).fold(0.0, f64::max);
            level_err.max(flat_err).max(col)
        });
        Some((y, err.unwrap_or(f64::NAN)))
    });
    for (y, e) in rows.into_iter().flatten() {
        decompose.error(e, thr, || json!({"y": fjson(&y)}));
    }

    let hull_check = hull.finish(
        "neighborhood_hull",
        "points of the hull of the flat and an H_F orbit satisfy the level inequality (exact)",
        None,
    );
    (
        vec![
            decompose.finish(
                "neighborhood_decompose",
                "points with level above c split as orbit point plus flat point",
                Some(thr),
            ),
            convex.finish("neighborhood_convex", "midpoints of region points stay in the region", None),
            invariant.finish("neighborhood_invariant", "H_F preserves the level exactly", None),
        ],
        hull_check,
    )
}

// ---------------------------------------------------------------- simplex

fn simplex_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let n = cfg.samples;
    let thr = cfg.threshold(1e-10);
    let mut closed = Tally::new();
    let mut bilip = Tally::new();
    let mut roundtrip = Tally::new();
    let mut details = Vec::new();
    for (k, d) in [2usize, 3].into_iter().enumerate() {
        let dom = ConvexDomain::simplex(d);
        let (lo, hi) = phi_norm_bounds(d + 1);
        let rows = map_samples(n, sub_seed(cfg.seed, 700 + k as u64), cfg.jobs, |_, rng| {
            let (x, y) = (dom.sample_interior(rng), dom.sample_interior(rng));
            let xs = dom.chart_rep(&x).unwrap();
            let ys = dom.chart_rep(&y).unwrap();
            let oracle = simplex_distance(&xs, &ys).unwrap();
            let got = dist(&dom, &x, &y);
            let px = phi_map(&xs).unwrap();
            let py = phi_map(&ys).unwrap();
            let diff: Vec<f64> = px.iter().zip(&py).map(|(a, b)| a - b).collect();
            let ratio = got / linalg::dot(&diff, &diff).sqrt();
            let back = phi_map(&phi_inverse(&px)).unwrap();
            let rt = back.iter().zip(&px).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            (x, y, (got - oracle).abs(), ratio, rt)
        });
        let mut rmin = f64::INFINITY;
        let mut rmax = 0.0f64;
        for (x, y, e, ratio, rt) in rows {
            let w = || json!({"dim": d, "x": fjson(&x), "y": fjson(&y)});
            closed.error(e, thr, w);
            let out = (lo - ratio).max(ratio - hi).max(0.0);
            bilip.error(if ratio.is_nan() { f64::NAN } else { out }, thr, w);
            roundtrip.error(rt, 1e-12, w);
            rmin = rmin.min(ratio);
            rmax = rmax.max(ratio);
        }
        details.push(json!({"dim": d, "lower_bound": lo, "upper_bound": hi, "min_ratio": rmin, "max_ratio": rmax}));
    }
    let mut bilip = bilip.finish(
        "bi_lipschitz",
        "d_H(x,y) / |phi x - phi y|_2 lies in the analytic bounds for the polyhedral norm",
        Some(thr),
    );
    bilip.details = Some(Value::from(details));
    vec![
        closed.finish("closed_form", "d_H = 1/2 (max - min) log(x_i / y_i) on the simplex", Some(thr)),
        bilip,
        roundtrip.finish("phi_roundtrip", "phi(phi^-1(e)) = e", Some(1e-12)),
    ]
}

// ---------------------------------------------------------------- group

fn signed_permutation(perm: &[usize], signs: &[i64]) -> ProjMap<Rat> {
    let n = perm.len() + 1;
    let mut m = vec![vec![rat_int(0); n]; n];
    for (i, (&p, &s)) in perm.iter().zip(signs).enumerate() {
        m[p][i] = rat_int(s);
    }
    m[n - 1][n - 1] = rat_int(1);
    ProjMap::new(m, 0.0).unwrap()
}

fn random_simplex_element(d: usize, rng: &mut ChaCha8Rng) -> ProjMap<Rat> {
    let mut perm: Vec<usize> = (0..=d).collect();
    perm.shuffle(rng);
    let diag: Vec<Rat> = (0..=d).map(|_| small_positive(rng)).collect();
    ProjMap::diagonal(&diag).unwrap().compose(&ProjMap::permutation(&perm))
}

fn wrap(map: ProjMap<Rat>) -> GroupElement {
    GroupElement {
        map,
        certificate: Certificate::Exact,
    }
}

fn letters(n: usize) -> Vec<String> {
    (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect()
}

fn group_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let iso_thr = cfg.threshold(1e-9);
    let tl_thr = cfg.threshold(1e-6);
    let per = (cfg.samples / 10).max(10);

    let mut elements: Vec<(String, ConvexDomain, ProjMap<Rat>)> = Vec::new();
    for d in [2, 3] {
        for i in 0..5 {
            let g = random_simplex_element(d, &mut rng_for(sub_seed(cfg.seed, 800 + d as u64), i));
            elements.push((format!("simplex{d}"), ConvexDomain::simplex(d), g));
        }
    }
    for i in 0..5u64 {
        let rng = &mut rng_for(sub_seed(cfg.seed, 804), i);
        let mut perm = vec![0, 1, 2];
        perm.shuffle(rng);
        let signs: Vec<i64> = (0..3).map(|_| if rng.gen() { 1 } else { -1 }).collect();
        elements.push(("cube3".into(), ConvexDomain::cube(3), signed_permutation(&perm, &signs)));
    }
    let rot = ProjMap::new(
        vec![
            vec![rat(3, 5), rat(-4, 5), rat_int(0)],
            vec![rat(4, 5), rat(3, 5), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
        ],
        0.0,
    )
    .unwrap();
    let boost = ProjMap::new(
        vec![
            vec![rat(5, 4), rat_int(0), rat(3, 4)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat(3, 4), rat_int(0), rat(5, 4)],
        ],
        0.0,
    )
    .unwrap();
    elements.push(("ball2".into(), ConvexDomain::unit_ball(2), rot.clone()));
    elements.push(("ball2".into(), ConvexDomain::unit_ball(2), boost.clone()));
    elements.push(("ball2".into(), ConvexDomain::unit_ball(2), boost.compose(&rot)));

    let mut exact = Tally::new();
    let mut iso = Tally::new();
    let mut sampled = Tally::new();
    for (k, (name, dom, g)) in elements.iter().enumerate() {
        let w = || json!({"domain": name, "element": k});
        let cert = certify_preserves(dom, g);
        exact.truth(cert.as_ref().is_ok_and(|e| e.certificate == Certificate::Exact), w);
        let r = isometry_check(dom, g, per, sub_seed(cfg.seed, 810 + k as u64), iso_thr);
        iso.error(if r.escaped > 0 { f64::NAN } else { r.max_deviation }, iso_thr, w);
        let s = certify_sampled(dom, g, per, sub_seed(cfg.seed, 840 + k as u64), DEFAULT_TOL);
        sampled.truth(
            s.is_ok_and(|e| matches!(e.certificate, Certificate::Sampled { failures: 0, samples, .. } if samples == per)),
            w,
        );
    }
    let mut reject = Tally::new();
    let bad = [
        ("simplex3", ConvexDomain::simplex(3), ProjMap::diagonal(&[rat_int(-1), rat_int(2), rat_int(1), rat_int(1)]).unwrap()),
        ("ball2", ConvexDomain::unit_ball(2), ProjMap::diagonal(&[rat_int(2), rat_int(1), rat_int(1)]).unwrap()),
        ("cube3", ConvexDomain::cube(3), ProjMap::diagonal(&[rat_int(2), rat_int(1), rat_int(1), rat_int(1)]).unwrap()),
    ];
    for (name, dom, g) in &bad {
        reject.truth(certify_preserves(dom, g).is_err(), || json!({"domain": name}));
    }

    let s3 = ConvexDomain::simplex(3);
    let mut stab = Tally::new();
    let flats: Vec<Flat> = (0..4).map(|c| simplex_corner_flat(&s3, c, &rat(1, 2)).unwrap()).collect();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = vec![a, b, c, d];
                    if p.iter().collect::<BTreeSet<_>>().len() == 4 {
                        perms.push(p);
                    }
                }
            }
        }
    }
    for (fi, f) in flats.iter().enumerate() {
        let hat = f.pseudo_dual().unwrap();
        for p in &perms {
            let g = ProjMap::diagonal(&[rat_int(1), rat_int(2), rat_int(2), rat_int(2)]).unwrap().compose(&ProjMap::permutation(p));
            for g in [ProjMap::permutation(p), g] {
                if stabilizes_flat(&g, f) {
                    stab.truth(g.apply(hat).same_point(hat, 0.0), || json!({"flat": fi, "perm": p}));
                }
            }
        }
    }

    let mut tl = Tally::new();
    for d in [2usize, 3] {
        let dom = ConvexDomain::simplex(d);
        for i in 0..20u64 {
            let rng = &mut rng_for(sub_seed(cfg.seed, 850 + d as u64), i);
            let diag: Vec<Rat> = (0..=d).map(|_| small_positive(rng)).collect();
            let g = certify_preserves(&dom, &ProjMap::diagonal(&diag).unwrap()).expect("positive diagonal");
            let closed = translation_length(&dom, &g, 10_000);
            let numeric = translation_length_numeric(&dom, &g, 10_000, 32, sub_seed(cfg.seed, 870 + i));
            let err = match (closed, numeric) {
                (Ok(c), Ok(n)) if c.closed_form => (c.value - n.value).abs(),
                _ => f64::NAN,
            };
            tl.error(err, tl_thr, || json!({"dim": d, "diagonal": diag.iter().map(format_rat).collect::<Vec<_>>()}));
        }
        let id = wrap(ProjMap::identity(d + 1));
        let zero = translation_length(&dom, &id, 10_000).map(|t| t.value).unwrap_or(f64::NAN);
        tl.error(zero, 0.0, || json!({"dim": d, "identity": zero}));
    }

    // Orbits of a rank-(d-1) lattice in H_F keep the level.
    let mut level = Tally::new();
    let mut inverses = Tally::new();
    let mut precise = Tally::new();
    let x = ProjPoint::new(vec![rat(8, 5), rat(1, 2), rat(1, 2), rat(1, 2)]).unwrap();
    let nb = StandardNeighborhood::new(&s3, &flats[0], &x).expect("base point in the domain");
    let lattice = GeneratorSet::new(
        vec![
            wrap(nb.h_element(&[rat_int(2), rat(1, 2), rat_int(1)]).unwrap()),
            wrap(nb.h_element(&[rat_int(1), rat_int(3), rat(1, 3)]).unwrap()),
        ],
        letters(2),
    );
    for p in orbit(&lattice, &x, 3) {
        level.truth(nb.invariant_exact(&p.point).as_ref() == Some(nb.level()), || json!({"word": p.word}));
    }
    let s2 = ConvexDomain::simplex(2);
    let f2 = simplex_corner_flat(&s2, 0, &rat(1, 2)).unwrap();
    let x2 = ProjPoint::new(vec![rat(3, 2), rat(1, 2), rat(1, 2)]).unwrap();
    if let Ok(nb2) = StandardNeighborhood::new(&s2, &f2, &x2) {
        let gens = GeneratorSet::new(vec![wrap(nb2.h_element(&[rat_int(3), rat(1, 3)]).unwrap())], letters(1));
        for p in orbit(&gens, &x2, 4) {
            level.truth(nb2.invariant_exact(&p.point).as_ref() == Some(nb2.level()), || json!({"word": p.word}));
        }
    } else {
        level.truth(false, || json!({"dim": 2}));
    }
    let words = lattice.words(2);
    for (w, m) in &words {
        let inv = m.inverse();
        inverses.truth(words.iter().any(|(_, o)| o.same_map(&inv, 0.0)), || json!({"word": w}));
    }
    let region = |p: &ProjPoint<f64>| nb.contains(p, 1e-12);
    let sampler = near_flat_sampler(&s3, &flats[0]);
    let r = precise_invariance_check(region, &sampler, &lattice, 2, cfg.samples.max(250) * 4, sub_seed(cfg.seed, 890));
    precise.truth(r.points > 0 && r.violations == 0, || serde_json::to_value(&r.witness).unwrap());
    let squeeze = GeneratorSet::new(vec![wrap(nb.normal_scaling(&rat(1, 2)).unwrap())], letters(1));
    let r = precise_invariance_check(region, &sampler, &squeeze, 1, cfg.samples.max(250) * 4, sub_seed(cfg.seed, 891));
    precise.truth(r.violations > 0, || json!({"squeeze": "not detected"}));

    vec![
        exact.finish("exact_certificates", "automorphisms of the test domains certify exactly", None),
        reject.finish("non_automorphisms", "maps that move the domain are rejected", None),
        iso.finish("isometry", "exactly certified elements change sampled distances by at most tol", Some(iso_thr)),
        sampled.finish("sampled_certificates", "sampled certificates record N, seed and zero failures", None),
        stab.finish("stabilizer_fixes_pseudo_dual", "g preserving a flat fixes its pseudo-dual", None),
        tl.finish("translation_length", "closed form 1/2 (max - min) log|l_i| matches the numerical infimum", Some(tl_thr)),
        level.finish("orbit_level", "orbits of a lattice in H_F keep the neighborhood level exactly", None),
        inverses.finish("words_closed_under_inverses", "the word list contains every inverse", None),
        precise.finish("precise_invariance", "the lattice preserves the neighborhood; a normal squeeze is caught", None),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> VerifyConfig {
        VerifyConfig {
            samples: 40,
            seed,
            tol: None,
            jobs: 1,
        }
    }

    #[test]
    fn every_suite_passes_small() {
        for s in SUITES {
            let r = run_suite(s, &small(7)).unwrap();
            let failed: Vec<&Check> = r.checks.iter().filter(|c| c.counts() && !c.passed).collect();
            assert!(r.passed, "{s}: {failed:#?}");
        }
    }

    #[test]
    fn over_tight_tolerance_fails_with_witness() {
        let mut cfg = small(3);
        cfg.tol = Some(1e-20);
        let r = run_suite("metric", &cfg).unwrap();
        assert!(!r.passed);
        assert!(r.first_counterexample.is_some());
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(
            run_suite("nope", &small(1)).unwrap_err(),
            VerifyError::UnknownSuite("nope".into())
        );
    }

    #[test]
    fn jobs_do_not_change_reports() {
        let a = run_suite("simplex", &small(5)).unwrap();
        let mut cfg = small(5);
        cfg.jobs = 3;
        let b = run_suite("simplex", &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
