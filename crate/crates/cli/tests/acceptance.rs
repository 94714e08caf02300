//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the report is always printed; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use hilbert_geom::domain::ConvexDomain;
use hilbert_geom::faces::{FaceLattice, PairClass};
use hilbert_geom::flats::{flat_dual, phi_map, phi_norm_bounds, validate_flat};
use hilbert_geom::group::{certify_preserves, translation_length, translation_length_numeric};
use hilbert_geom::io;
use hilbert_geom::projective::{ProjMap, ProjPoint};
use hilbert_geom::sampling::rng_for;
use hilbert_geom::scalar::{rat, rat_int, Rat, DEFAULT_TOL};

type Outcome = Result<String, String>;

const SEED: u64 = 42;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dist(dom: &ConvexDomain, x: &ProjPoint<f64>, y: &ProjPoint<f64>) -> Result<f64, String> {
    dom.hilbert_distance(x, y, DEFAULT_TOL).map_err(|e| format!("distance failed at {x} {y}: {e}"))
}

/// Positive homogeneous coordinates: a point of the standard simplex.
fn simplex_point(rng: &mut impl Rng, n: usize) -> ProjPoint<f64> {
    ProjPoint::new((0..n).map(|_| rng.gen_range(0.01..1.0)).collect()).unwrap()
}

/// Half the log-ratio spread, straight from the definition.
fn simplex_oracle(x: &[f64], y: &[f64]) -> f64 {
    let r: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a / b).ln()).collect();
    let hi = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
    0.5 * (hi - lo)
}

fn stock() -> Vec<(&'static str, ConvexDomain)> {
    let mut rng = rng_for(SEED, 999);
    vec![
        ("simplex2", ConvexDomain::simplex(2)),
        ("simplex3", ConvexDomain::simplex(3)),
        ("simplex4", ConvexDomain::simplex(4)),
        ("cube3", ConvexDomain::cube(3)),
        ("random3", ConvexDomain::random_polytope(3, 12, &mut rng)),
        ("ball2", ConvexDomain::unit_ball(2)),
        ("ball3", ConvexDomain::unit_ball(3)),
    ]
}

fn metric_axioms() -> Outcome {
    let mut worst_sym = 0.0f64;
    let mut worst_tri = 0.0f64;
    let domains = stock();
    ensure(
        domains[4].1.as_polytope().map(|p| p.vertices().len()) == Some(12),
        || "random polytope does not have 12 vertices".into(),
    )?;
    for (k, (name, dom)) in domains.iter().enumerate() {
        for i in 0..1000 {
            let rng = &mut rng_for(SEED + k as u64, i);
            let (x, y, z) = (dom.sample_interior(rng), dom.sample_interior(rng), dom.sample_interior(rng));
            let (dxy, dyx) = (dist(dom, &x, &y)?, dist(dom, &y, &x)?);
            let (dxz, dzy) = (dist(dom, &x, &z)?, dist(dom, &z, &y)?);
            let sym = (dxy - dyx).abs();
            let tri = dxy - dxz - dzy;
            worst_sym = worst_sym.max(sym);
            worst_tri = worst_tri.max(tri);
            ensure(sym <= 1e-9, || format!("{name}: symmetry off by {sym:e} at {x} {y}"))?;
            ensure(tri <= 1e-9, || format!("{name}: triangle inequality off by {tri:e} at {x} {y} {z}"))?;
            ensure(dxy >= 0.0, || format!("{name}: negative distance"))?;
        }
    }
    Ok(format!("7 domains x 1000 triples, symmetry {worst_sym:.1e}, triangle excess {worst_tri:.1e}"))
}

fn klein() -> Outcome {
    let mut worst = 0.0f64;
    for d in [2, 3] {
        let ball = ConvexDomain::unit_ball(d);
        let origin = ProjPoint::from_affine(&vec![0.0; d]);
        let rng = &mut rng_for(SEED, d as u64);
        for i in 1..=9 {
            let r = i as f64 / 10.0;
            let u: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = u.iter().map(|c| c * c).sum::<f64>().sqrt();
            let p = ProjPoint::from_affine(&u.iter().map(|c| r * c / n).collect::<Vec<_>>());
            let err = (dist(&ball, &origin, &p)? - r.atanh()).abs();
            worst = worst.max(err);
            ensure(err <= 1e-10, || format!("ball{d}, radius {r}: off by {err:e}"))?;
        }
    }
    Ok(format!("9 radii in d=2,3, max error {worst:.1e}"))
}

fn simplex_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for d in [2, 3] {
        let dom = ConvexDomain::simplex(d);
        for i in 0..10_000 {
            let rng = &mut rng_for(SEED + 10 + d as u64, i);
            let (x, y) = (simplex_point(rng, d + 1), simplex_point(rng, d + 1));
            let err = (dist(&dom, &x, &y)? - simplex_oracle(x.coords(), y.coords())).abs();
            worst = worst.max(err);
            ensure(err <= 1e-10, || format!("simplex{d}: off by {err:e} at {x} {y}"))?;
        }
    }
    Ok(format!("2 x 10^4 pairs, max error {worst:.1e}"))
}

fn same_vertex_sets(a: &[ProjPoint<Rat>], b: &[ProjPoint<Rat>]) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.iter().filter(|q| p.same_point(q, 0.0)).count() == 1)
}

fn rank(rows: &[Vec<Rat>]) -> usize {
    hilbert_geom::linalg::rank(&rows.to_vec(), 0.0)
}

/// Every dual vertex is a supporting hyperplane through a facet.
fn polar_ok(primal: &[ProjPoint<Rat>], dual: &[ProjPoint<Rat>]) -> bool {
    let d = primal[0].dim();
    dual.iter().all(|h| {
        let vals: Vec<Rat> = primal
            .iter()
            .map(|v| h.coords().iter().zip(v.coords()).map(|(a, b)| a * b).sum())
            .collect();
        let sign = vals.iter().find(|v| **v != rat_int(0)).map(|v| *v > rat_int(0));
        let on: Vec<Vec<Rat>> = primal
            .iter()
            .zip(&vals)
            .filter(|(_, v)| **v == rat_int(0))
            .map(|(p, _)| p.coords().to_vec())
            .collect();
        vals.iter().all(|v| *v == rat_int(0) || Some(*v > rat_int(0)) == sign) && rank(&on) == d
    })
}

fn duality() -> Outcome {
    let mut cases: Vec<(String, ConvexDomain)> = Vec::new();
    for d in 2..=4 {
        cases.push((format!("simplex{d}"), ConvexDomain::simplex(d)));
        cases.push((format!("cube{d}"), ConvexDomain::cube(d)));
        cases.push((format!("cross{d}"), ConvexDomain::cross_polytope(d)));
    }
    let rng = &mut rng_for(SEED, 40);
    for i in 0..20 {
        let d = 2 + i % 3;
        cases.push((format!("random{i}"), ConvexDomain::random_polytope(d, d + 3 + i % 4, rng)));
    }
    for (name, dom) in &cases {
        let primal = dom.as_polytope().unwrap();
        let dual = dom.dual_domain().map_err(|e| format!("{name}: {e}"))?;
        let dd = dual.dual_domain().map_err(|e| format!("{name}: {e}"))?;
        let dual_p = dual.as_polytope().unwrap();
        ensure(polar_ok(primal.vertices(), dual_p.vertices()), || format!("{name}: dual vertex is not a facet"))?;
        ensure(dual_p.vertices().len() == primal.facets().len(), || format!("{name}: dual vertex count"))?;
        ensure(
            same_vertex_sets(primal.vertices(), dd.as_polytope().unwrap().vertices()),
            || format!("{name}: double dual differs"),
        )?;
    }
    // Self-duality: the standard simplex's dual has literally the same
    // vertices; a skew simplex's dual is again a simplex.
    for d in 2..=4 {
        let s = ConvexDomain::simplex(d);
        let ds = s.dual_domain().unwrap();
        ensure(
            same_vertex_sets(s.as_polytope().unwrap().vertices(), ds.as_polytope().unwrap().vertices()),
            || format!("simplex{d} is not literally self-dual"),
        )?;
        let skew: Vec<ProjPoint<Rat>> = (0..=d)
            .map(|i| {
                let mut c: Vec<Rat> = (0..=d).map(|j| rat((i * j % 3) as i64, 7)).collect();
                c[i] += rat_int(1 + i as i64);
                ProjPoint::new(c).unwrap()
            })
            .collect();
        let skew = ConvexDomain::polytope(skew).map_err(|e| e.to_string())?;
        let dual = skew.dual_domain().unwrap();
        let f = FaceLattice::new(dual.as_polytope().unwrap()).f_vector();
        ensure(
            f == FaceLattice::new(s.as_polytope().unwrap()).f_vector(),
            || format!("dual of a skew simplex in d={d} has f-vector {f:?}"),
        )?;
    }
    Ok(format!("{} polytopes, double dual exact", cases.len()))
}

fn four_cases() -> Outcome {
    let mut pairs = 0;
    for (name, dom, expected) in [("simplex3", ConvexDomain::simplex(3), 14), ("cube3", ConvexDomain::cube(3), 26)] {
        let lattice = FaceLattice::new(dom.as_polytope().unwrap());
        let proper: Vec<_> = lattice.faces().iter().filter(|f| !f.vertices.is_empty() && f.dim < 3).collect();
        ensure(proper.len() == expected, || format!("{name}: {} proper faces", proper.len()))?;
        let sets: BTreeSet<&BTreeSet<usize>> = proper.iter().map(|f| &f.vertices).collect();
        for l in &proper {
            for k in &proper {
                let (a, b) = (&l.vertices, &k.vertices);
                let meet: BTreeSet<usize> = a.intersection(b).copied().collect();
                let equal = a == b;
                let disjoint = meet.is_empty();
                let inclusion = !equal && (a.is_subset(b) || b.is_subset(a));
                let proper_meeting = !disjoint && !equal && !inclusion;
                let fired = [equal, disjoint, inclusion, proper_meeting].iter().filter(|x| **x).count();
                ensure(fired == 1, || format!("{name}: {fired} cases for {a:?} {b:?}"))?;
                ensure(!proper_meeting || sets.contains(&meet), || format!("{name}: meet {meet:?} is not a face"))?;
                let got = lattice.classify_pair(l.id, k.id).map_err(|e| e.to_string())?;
                let ok = match got {
                    PairClass::Equal => equal,
                    PairClass::Disjoint => disjoint,
                    PairClass::BoundaryInclusion => inclusion,
                    PairClass::ProperMeeting(m) => proper_meeting && lattice.face(m).unwrap().vertices == meet,
                };
                ensure(ok, || format!("{name}: {a:?} vs {b:?} classified {got:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs match the set-intersection oracle"))
}

fn corner_flat(s: Rat) -> Vec<ProjPoint<Rat>> {
    (1..4)
        .map(|j| {
            let mut c = vec![rat_int(1) - &s, rat_int(0), rat_int(0), rat_int(0)];
            c[j] = s.clone();
            ProjPoint::new(c).unwrap()
        })
        .collect()
}

fn projection() -> Outcome {
    let dom = ConvexDomain::simplex(3);
    let flat = validate_flat(&dom, &corner_flat(rat(1, 2))).map_err(|e| e.to_string())?;
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..10_000 {
        let rng = &mut rng_for(SEED + 60, i);
        let (x, y) = (simplex_point(rng, 4), simplex_point(rng, 4));
        let (px, py) = (
            flat.normal_project(&x, DEFAULT_TOL).map_err(|e| e.to_string())?,
            flat.normal_project(&y, DEFAULT_TOL).map_err(|e| e.to_string())?,
        );
        // Along the line through v1 to the carrier x0 = x1 + x2 + x3.
        for (p, q) in [(&x, &px), (&y, &py)] {
            let c = p.coords();
            let oracle = ProjPoint::new(vec![c[1] + c[2] + c[3], c[1], c[2], c[3]]).unwrap();
            ensure(q.same_point(&oracle, 1e-12), || format!("projection of {p} is {q}, expected {oracle}"))?;
        }
        let (d, dp) = (dist(&dom, &x, &y)?, dist(&dom, &px, &py)?);
        worst = worst.max(dp - d);
        if dp > d + 1e-9 {
            violations += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations, worst excess {worst:e}"))?;
    Ok(format!("10^4 pairs, 0 violations, max d(px,py) - d(x,y) = {worst:.2e}"))
}

fn pseudo_dual() -> Outcome {
    let dom = ConvexDomain::simplex(3);
    let v1 = ProjPoint::new(vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)]).unwrap();
    for s in [rat(1, 2), rat(1, 4)] {
        let flat = validate_flat(&dom, &corner_flat(s.clone())).map_err(|e| e.to_string())?;
        let hat = flat.pseudo_dual().map_err(|e| e.to_string())?;
        ensure(hat.same_point(&v1, 0.0), || format!("s = {s}: pseudo-dual {hat}"))?;
        let dd = flat_dual(&flat_dual(&flat).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(
            dd.carrier().as_point().same_point(&flat.carrier().as_point(), 0.0),
            || format!("s = {s}: carrier moved"),
        )?;
        ensure(same_vertex_sets(dd.vertices(), flat.vertices()), || format!("s = {s}: vertices moved"))?;
    }
    Ok("midpoint and quarter-point corner flats, pseudo-dual v1, dual involution exact".into())
}

fn translation() -> Outcome {
    let mut worst = 0.0f64;
    for d in [2usize, 3] {
        let dom = ConvexDomain::simplex(d);
        for i in 0..20u64 {
            let rng = &mut rng_for(SEED + 80 + d as u64, i);
            let lambdas: Vec<Rat> = (0..=d).map(|_| rat(rng.gen_range(1..=9), rng.gen_range(1..=9))).collect();
            let logs: Vec<f64> = lambdas.iter().map(|l| hilbert_geom::scalar::rat_to_f64(l).ln()).collect();
            let oracle = 0.5
                * (logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    - logs.iter().cloned().fold(f64::INFINITY, f64::min));
            let g = certify_preserves(&dom, &ProjMap::diagonal(&lambdas).unwrap()).map_err(|e| e.to_string())?;
            let closed = translation_length(&dom, &g, 0).map_err(|e| e.to_string())?.value;
            let numeric = translation_length_numeric(&dom, &g, 10_000, 32, i).map_err(|e| e.to_string())?.value;
            let err = (closed - oracle).abs().max((numeric - oracle).abs());
            worst = worst.max(err);
            ensure(err <= 1e-6, || format!("simplex{d}, lambda {lambdas:?}: closed {closed}, numeric {numeric}, oracle {oracle}"))?;
        }
        let id = certify_preserves(&dom, &ProjMap::identity(d + 1)).map_err(|e| e.to_string())?;
        let closed = translation_length(&dom, &id, 0).map_err(|e| e.to_string())?.value;
        let numeric = translation_length_numeric(&dom, &id, 10_000, 8, 0).map_err(|e| e.to_string())?.value;
        ensure(closed == 0.0 && numeric.abs() <= 1e-6, || format!("identity: {closed} / {numeric}"))?;
    }
    Ok(format!("40 diagonal elements, max error {worst:.1e}; identity 0"))
}

fn finsler() -> Outcome {
    let h = 1e-6;
    let mut worst = 0.0f64;
    let mut klein_worst = 0.0f64;
    for (k, (name, dom)) in stock().iter().enumerate() {
        let chart = dom.chart();
        // Tangent vectors are sized to the domain: half the chart diameter
        // of the vertex set (the unit balls have radius 1 already).
        let radius = dom.as_polytope().map_or(1.0, |p| {
            let pts: Vec<Vec<f64>> = p
                .vertices()
                .iter()
                .map(|v| chart.chart_coords(&v.to_f64(), DEFAULT_TOL).unwrap())
                .collect();
            let diam = pts
                .iter()
                .flat_map(|a| pts.iter().map(move |b| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>()))
                .fold(0.0, f64::max)
                .sqrt();
            diam / 2.0
        });
        let center = dom.as_polytope().map(|p| chart.chart_coords(&p.barycenter().to_f64(), DEFAULT_TOL).unwrap());
        for i in 0..1000 {
            let rng = &mut rng_for(SEED + 90 + k as u64, i);
            // Polytope samples are pulled halfway to the barycenter.
            let mut xc = chart.chart_coords(&dom.sample_interior(rng), DEFAULT_TOL).unwrap();
            if let Some(c) = &center {
                xc = xc.iter().zip(c).map(|(a, b)| 0.5 * (a + b)).collect();
            }
            let v: Vec<f64> = loop {
                let v: Vec<f64> = (0..dom.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                if n > 1e-3 {
                    break v.iter().map(|c| radius * c / n).collect();
                }
            };
            let x = chart.lift(&xc);
            let y = chart.lift(&xc.iter().zip(&v).map(|(a, b)| a + h * b).collect::<Vec<_>>());
            let norm = dom.finsler_norm(&chart, &x, &v, DEFAULT_TOL).map_err(|e| e.to_string())?;
            let err = (dist(dom, &x, &y)? / h - norm).abs();
            worst = worst.max(err);
            ensure(err <= 1e-4, || format!("{name}: quotient off by {err:e} at {x}, v = {v:?}"))?;
            if dom.as_ellipsoid().is_some() {
                // The Klein model metric in affine coordinates.
                let a = x.affine().unwrap();
                let wv = chart.lift_tangent(&v);
                let last = *x.coords().last().unwrap();
                let va: Vec<f64> = (0..a.len()).map(|j| (wv[j] - a[j] * wv[a.len()]) / last).collect();
                let s = 1.0 - a.iter().map(|c| c * c).sum::<f64>();
                let xv: f64 = a.iter().zip(&va).map(|(p, q)| p * q).sum();
                let vv: f64 = va.iter().map(|c| c * c).sum();
                let expected = (vv / s + xv * xv / (s * s)).sqrt();
                let rel = (norm - expected).abs() / expected;
                klein_worst = klein_worst.max(rel);
                ensure(rel <= 1e-9, || format!("{name}: Finsler norm {norm} vs Klein metric {expected}"))?;
            }
        }
    }
    Ok(format!("7 domains x 10^3 samples, max quotient error {worst:.1e}, Klein agreement {klein_worst:.1e}"))
}

fn bi_lipschitz() -> Outcome {
    let mut report = Vec::new();
    for d in [2usize, 3] {
        let n = d + 1;
        let (lo, hi) = phi_norm_bounds(n);
        // Brute force over directions in {sum = 0}: the bounds must hold and
        // be approached.
        let rng = &mut rng_for(SEED, 100 + d as u64);
        let (mut blo, mut bhi) = (f64::INFINITY, 0.0f64);
        let mut consider = |v: &[f64]| {
            let mean = v.iter().sum::<f64>() / n as f64;
            let w: Vec<f64> = v.iter().map(|c| c - mean).collect();
            let e = w.iter().map(|c| c * c).sum::<f64>().sqrt();
            if e > 1e-9 {
                let spread = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - w.iter().cloned().fold(f64::INFINITY, f64::min);
                let r = 0.5 * spread / e;
                blo = blo.min(r);
                bhi = bhi.max(r);
            }
        };
        for code in 0..3usize.pow(n as u32) {
            let v: Vec<f64> = (0..n).map(|j| (code / 3usize.pow(j as u32) % 3) as f64 - 1.0).collect();
            consider(&v);
        }
        for _ in 0..200_000 {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            consider(&v);
        }
        ensure(blo >= lo - 1e-12 && bhi <= hi + 1e-12, || format!("n={n}: brute force [{blo}, {bhi}] escapes [{lo}, {hi}]"))?;
        ensure((blo - lo).abs() < 1e-9 && (bhi - hi).abs() < 1e-9, || format!("n={n}: bounds not attained"))?;

        let dom = ConvexDomain::simplex(d);
        let (mut rmin, mut rmax) = (f64::INFINITY, 0.0f64);
        for i in 0..10_000 {
            let r = &mut rng_for(SEED + 110 + d as u64, i);
            let (x, y) = (simplex_point(r, n), simplex_point(r, n));
            let (px, py) = (phi_map(x.coords()).unwrap(), phi_map(y.coords()).unwrap());
            let e = px.iter().zip(&py).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let ratio = dist(&dom, &x, &y)? / e;
            rmin = rmin.min(ratio);
            rmax = rmax.max(ratio);
        }
        ensure(rmin >= lo - 1e-9 && rmax <= hi + 1e-9, || format!("simplex{d}: ratios [{rmin}, {rmax}] outside [{lo}, {hi}]"))?;
        report.push(format!("simplex{d} ratio in [{rmin:.4}, {rmax:.4}] within [{lo:.4}, {hi:.4}]"));
    }
    Ok(report.join("; "))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hilbert-geom")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(bin()).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    Ok(out.stdout)
}

fn cli_golden() -> Outcome {
    let dir = std::env::temp_dir().join(format!("hilbert-geom-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let interval = data("interval.json");
    let cube = data("cube.json");
    let s3 = data("simplex3.json");
    let corner = data("corner_flat.json");
    let ellipse = data("ellipse.json");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let stdout_cases: Vec<(&str, Vec<String>)> = vec![
        ("dist_interval.txt", vec!["dist".into(), s(&interval), "0".into(), "1/2".into()]),
        ("dual_cube.json", vec!["dual".into(), s(&cube)]),
        ("classify_cube_edges.txt", vec!["classify".into(), s(&cube), "v:0,1".into(), "v:0,2".into()]),
    ];
    for (file, args) in &stdout_cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, b) = (run_cli(&args)?, run_cli(&args)?);
        ensure(a == b, || format!("{args:?} is not byte-stable"))?;
        let expected = std::fs::read(golden.join(file)).map_err(|e| e.to_string())?;
        ensure(a == expected, || format!("{args:?} differs from golden {file}"))?;
    }
    let file_cases = [
        ("slice_corner.csv", vec!["slice".to_string(), s(&s3), "--plane".into(), "1,0,0,0;0,1,0,0;0,0,1,1".into(), "--flat".into(), s(&corner)]),
        ("slice_ellipse.svg", vec!["slice".to_string(), s(&ellipse), "--plane".into(), "0,0;1,0;0,1".into()]),
    ];
    for (file, args) in &file_cases {
        let mut outs = Vec::new();
        for run in 0..2 {
            let out = dir.join(format!("{run}-{file}"));
            let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
            let o = s(&out);
            a.extend(["--out", o.as_str()]);
            run_cli(&a)?;
            outs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
        }
        ensure(outs[0] == outs[1], || format!("slice {file} is not byte-stable"))?;
        let expected = std::fs::read(golden.join(file)).map_err(|e| e.to_string())?;
        ensure(outs[0] == expected, || format!("slice differs from golden {file}"))?;
    }
    let dual = io::domain_from_json(&String::from_utf8(run_cli(&["dual", &s(&cube)])?).unwrap()).map_err(|e| e.to_string())?;
    let p = dual.as_polytope().ok_or("dual of the cube is not a polytope")?;
    ensure(p.vertices().len() == 6 && p.facets().len() == 8, || {
        format!("dual(cube) has {} vertices and {} facets", p.vertices().len(), p.facets().len())
    })?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok("dist/dual/classify/slice byte-stable and equal to golden files; dual(cube) has 6 vertices, 8 facets".into())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("metric symmetry and triangle inequality", Duration::from_secs(30), metric_axioms),
        ("Klein-model exactness", Duration::from_secs(1), klein),
        ("simplex closed form", Duration::from_secs(10), simplex_closed_form),
        ("duality involution", Duration::from_secs(60), duality),
        ("four-case exhaustiveness", Duration::from_secs(5), four_cases),
        ("projection non-expansive", Duration::from_secs(20), projection),
        ("pseudo-dual correctness", Duration::from_secs(1), pseudo_dual),
        ("translation length", Duration::from_secs(60), translation),
        ("Finsler consistency", Duration::from_secs(10), finsler),
        ("bi-Lipschitz report", Duration::from_secs(30), bi_lipschitz),
        ("CLI determinism and golden files", Duration::from_secs(5), cli_golden),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if elapsed > *limit => ("FAIL", format!("took {elapsed:.2?}, limit {limit:?}")),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} {name} ({:.2?}): {detail}", i + 1, elapsed);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
