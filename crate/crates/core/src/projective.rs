//! Homogeneous coordinates for `RP^d` and its dual.

use std::fmt;

use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::scalar::{Rat, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProjectiveError {
    #[error("homogeneous coordinates are all zero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("degenerate configuration: a cross-ratio denominator vanishes")]
    DegenerateConfiguration,
    #[error("point lies on the hyperplane at infinity of the chart")]
    PointAtInfinity,
    #[error("points do not span a unique hyperplane")]
    NotAHyperplane,
}

/// A point `[v]` of `RP^d`, stored as one representative `v`.
///
/// The representative is kept as given (up to positive rescaling) so that
/// cone-sheet information survives; use [`ProjPoint::normalized`] for a
/// canonical form.
#[derive(Clone, PartialEq)]
pub struct ProjPoint<S> {
    coords: Vec<S>,
}

impl<S: Scalar> ProjPoint<S> {
    pub fn new(coords: Vec<S>) -> Result<Self, ProjectiveError> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(ProjectiveError::ZeroVector);
        }
        Ok(Self { coords })
    }

    /// The point `(a_1, ..., a_d, 1)` of the standard chart.
    pub fn from_affine(affine: &[S]) -> Self {
        let mut coords = affine.to_vec();
        coords.push(S::one());
        Self { coords }
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    /// Projective dimension `d` of the ambient `RP^d`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn scaled(&self, k: &S) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    fn max_abs_index(&self) -> usize {
        let mut best = 0;
        for (i, c) in self.coords.iter().enumerate() {
            if c.abs() > self.coords[best].abs() {
                best = i;
            }
        }
        best
    }

    /// Positive rescaling so the largest-magnitude coordinate is `±1`.
    /// Keeps the cone sheet.
    pub fn rescaled(&self) -> Self {
        let m = self.coords[self.max_abs_index()].abs();
        self.scaled(&(S::one() / m))
    }

    /// Canonical representative: largest magnitude `1` in absolute value and
    /// first nonzero coordinate positive. Idempotent.
    pub fn normalized(&self) -> Self {
        let r = self.rescaled();
        match r.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => r.scaled(&-S::one()),
            _ => r,
        }
    }

    /// Equality up to nonzero scale: every 2x2 minor of the pair vanishes.
    pub fn same_point(&self, other: &Self, tol: f64) -> bool {
        if self.coords.len() != other.coords.len() {
            return false;
        }
        let a = self.rescaled();
        let b = other.rescaled();
        let n = a.coords.len();
        for i in 0..n {
            for j in i + 1..n {
                let m = a.coords[i].clone() * b.coords[j].clone()
                    - a.coords[j].clone() * b.coords[i].clone();
                if !m.is_zero_tol(tol) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_f64(&self) -> ProjPoint<f64> {
        ProjPoint {
            coords: self.coords.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Reinterprets the coordinates as a covector of the dual space.
    pub fn as_hyperplane(&self) -> Hyperplane<S> {
        Hyperplane {
            covector: self.coords.clone(),
        }
    }

    /// Affine coordinates in the standard chart `x_{d+1} = 1`, if finite.
    pub fn affine(&self) -> Option<Vec<S>> {
        let last = self.coords.last()?;
        if last.is_zero() {
            return None;
        }
        Some(
            self.coords[..self.dim()]
                .iter()
                .map(|c| c.clone() / last.clone())
                .collect(),
        )
    }
}

impl ProjPoint<f64> {
    pub fn to_rat(&self) -> Option<ProjPoint<Rat>> {
        let coords = self
            .coords
            .iter()
            .map(|&c| crate::scalar::rat_from_f64(c))
            .collect::<Option<Vec<_>>>()?;
        ProjPoint::new(coords).ok()
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for ProjPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl<S: fmt::Debug> fmt::Debug for ProjPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ProjPoint").field(&self.coords).finish()
    }
}

/// A hyperplane `[ker eta]`, equivalently a point of the dual space.
#[derive(Clone, PartialEq)]
pub struct Hyperplane<S> {
    covector: Vec<S>,
}

impl<S: Scalar> Hyperplane<S> {
    pub fn new(covector: Vec<S>) -> Result<Self, ProjectiveError> {
        if covector.iter().all(|c| c.is_zero()) {
            return Err(ProjectiveError::ZeroVector);
        }
        Ok(Self { covector })
    }

    /// The hyperplane spanned by `d` points in general position.
    pub fn through(points: &[ProjPoint<S>], tol: f64) -> Result<Self, ProjectiveError> {
        let n = points.first().map_or(0, |p| p.coords.len());
        let rows: Matrix<S> = points.iter().map(|p| p.coords.clone()).collect();
        let ns = linalg::nullspace(&rows, n, tol);
        if ns.len() != 1 {
            return Err(ProjectiveError::NotAHyperplane);
        }
        Ok(Self {
            covector: ns.into_iter().next().unwrap_or_default(),
        })
    }

    pub fn covector(&self) -> &[S] {
        &self.covector
    }

    pub fn dim(&self) -> usize {
        self.covector.len() - 1
    }

    /// `eta(v)` for the stored representatives. Only its vanishing (and, on
    /// a fixed cone sheet, its sign) is meaningful.
    pub fn incidence(&self, p: &ProjPoint<S>) -> S {
        linalg::dot(&self.covector, &p.coords)
    }

    pub fn scaled(&self, k: &S) -> Self {
        Self {
            covector: self.covector.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-S::one())
    }

    pub fn as_point(&self) -> ProjPoint<S> {
        ProjPoint {
            coords: self.covector.clone(),
        }
    }

    pub fn to_f64(&self) -> Hyperplane<f64> {
        Hyperplane {
            covector: self.covector.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn same_hyperplane(&self, other: &Self, tol: f64) -> bool {
        self.as_point().same_point(&other.as_point(), tol)
    }
}

impl<S: fmt::Debug> fmt::Debug for Hyperplane<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Hyperplane").field(&self.covector).finish()
    }
}

/// An element of `PGL(d+1)`, stored with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjMap<S> {
    matrix: Matrix<S>,
    inverse: Matrix<S>,
}

impl<S: Scalar> ProjMap<S> {
    pub fn new(matrix: Matrix<S>, tol: f64) -> Result<Self, ProjectiveError> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(ProjectiveError::DimensionMismatch {
                expected: n,
                got: matrix.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
            });
        }
        let inverse = linalg::inverse(&matrix, tol).ok_or(ProjectiveError::Singular)?;
        Ok(Self { matrix, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: linalg::identity(n),
            inverse: linalg::identity(n),
        }
    }

    pub fn diagonal(entries: &[S]) -> Result<Self, ProjectiveError> {
        let n = entries.len();
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { S::zero() })
                    .collect()
            })
            .collect();
        Self::new(m, 0.0)
    }

    /// The permutation matrix sending `e_i` to `e_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = vec![vec![S::zero(); n]; n];
        for (i, &p) in perm.iter().enumerate() {
            m[p][i] = S::one();
        }
        let inverse = linalg::transpose(&m);
        Self { matrix: m, inverse }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix<S> {
        &self.inverse
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: linalg::mat_mul(&self.matrix, &other.matrix),
            inverse: linalg::mat_mul(&other.inverse, &self.inverse),
        }
    }

    /// `g.p`, rescaled positively so the largest coordinate has magnitude 1.
    pub fn apply(&self, p: &ProjPoint<S>) -> ProjPoint<S> {
        self.apply_raw(p).rescaled()
    }

    /// `g.p` without rescaling.
    pub fn apply_raw(&self, p: &ProjPoint<S>) -> ProjPoint<S> {
        ProjPoint {
            coords: linalg::mat_vec(&self.matrix, &p.coords),
        }
    }

    /// `eta ∘ g^{-1}`, so incidence is equivariant.
    pub fn apply_dual(&self, h: &Hyperplane<S>) -> Hyperplane<S> {
        Hyperplane {
            covector: linalg::vec_mat(&h.covector, &self.inverse),
        }
    }

    /// Projective equality: the matrices are proportional.
    pub fn same_map(&self, other: &Self, tol: f64) -> bool {
        let flat = |m: &Matrix<S>| ProjPoint {
            coords: m.iter().flatten().cloned().collect::<Vec<S>>(),
        };
        flat(&self.matrix).same_point(&flat(&other.matrix), tol)
    }

    pub fn to_f64(&self) -> ProjMap<f64> {
        ProjMap {
            matrix: linalg::to_f64_matrix(&self.matrix),
            inverse: linalg::to_f64_matrix(&self.inverse),
        }
    }
}

/// The affine chart `A_eta = {v : eta(v) = 1}` with coordinates given by
/// dropping one pivot coordinate where `eta` is largest.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineChart<S> {
    normalizer: Hyperplane<S>,
    pivot: usize,
}

impl<S: Scalar> AffineChart<S> {
    pub fn new(normalizer: Hyperplane<S>) -> Self {
        let c = normalizer.covector();
        let mut pivot = c.len() - 1;
        for i in (0..c.len()).rev() {
            if c[i].abs() > c[pivot].abs() {
                pivot = i;
            }
        }
        Self { normalizer, pivot }
    }

    /// The chart `x_{d+1} = 1`.
    pub fn standard(d: usize) -> Self {
        let mut c = vec![S::zero(); d + 1];
        c[d] = S::one();
        Self {
            normalizer: Hyperplane { covector: c },
            pivot: d,
        }
    }

    pub fn normalizer(&self) -> &Hyperplane<S> {
        &self.normalizer
    }

    /// The representative of `p` on `A_eta`.
    pub fn representative(&self, p: &ProjPoint<S>, tol: f64) -> Result<Vec<S>, ProjectiveError> {
        let e = self.normalizer.incidence(p);
        let scale = p.coords.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        if e.is_zero_tol(tol * scale.max(1.0)) {
            return Err(ProjectiveError::PointAtInfinity);
        }
        Ok(p.coords.iter().map(|c| c.clone() / e.clone()).collect())
    }

    pub fn chart_coords(&self, p: &ProjPoint<S>, tol: f64) -> Result<Vec<S>, ProjectiveError> {
        let mut v = self.representative(p, tol)?;
        v.remove(self.pivot);
        Ok(v)
    }

    /// Inverse of [`AffineChart::chart_coords`].
    pub fn lift(&self, coords: &[S]) -> ProjPoint<S> {
        let eta = self.normalizer.covector();
        let mut v = coords.to_vec();
        let rest = eta
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.pivot)
            .zip(coords)
            .fold(S::zero(), |acc, ((_, e), c)| acc + e.clone() * c.clone());
        v.insert(self.pivot, (S::one() - rest) / eta[self.pivot].clone());
        ProjPoint { coords: v }
    }

    /// Ambient vector in `ker eta` representing a chart tangent vector.
    pub fn lift_tangent(&self, v: &[S]) -> Vec<S> {
        let eta = self.normalizer.covector();
        let mut w = v.to_vec();
        let rest = eta
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.pivot)
            .zip(v)
            .fold(S::zero(), |acc, ((_, e), c)| acc + e.clone() * c.clone());
        w.insert(self.pivot, -rest / eta[self.pivot].clone());
        w
    }
}

/// `true` iff the coordinate vectors are linearly independent.
pub fn general_position<S: Scalar>(points: &[ProjPoint<S>], tol: f64) -> bool {
    let Some(first) = points.first() else {
        return true;
    };
    if points.len() > first.coords.len() {
        return false;
    }
    let rows: Matrix<S> = points.iter().map(|p| p.coords.clone()).collect();
    linalg::rank(&rows, tol) == points.len()
}

/// The cross-ratio `[z1, x, y, z2]`, equal to
/// `((t_y - t_z1)(t_z2 - t_x)) / ((t_x - t_z1)(t_z2 - t_y))` in any affine
/// parameter `t` on the common line.
pub fn cross_ratio<S: Scalar>(
    z1: &ProjPoint<S>,
    x: &ProjPoint<S>,
    y: &ProjPoint<S>,
    z2: &ProjPoint<S>,
    tol: f64,
) -> Result<S, ProjectiveError> {
    let pts = [z1, x, y, z2].map(ProjPoint::rescaled);
    let n = pts[0].coords.len();
    if pts.iter().any(|p| p.coords.len() != n) {
        return Err(ProjectiveError::DimensionMismatch {
            expected: n,
            got: pts.iter().map(|p| p.coords.len()).find(|&l| l != n).unwrap_or(0),
        });
    }
    let rows: Matrix<S> = pts.iter().map(|p| p.coords.clone()).collect();
    if linalg::rank(&rows, tol) > 2 {
        return Err(ProjectiveError::NotCollinear);
    }
    let minor = |p: &ProjPoint<S>, q: &ProjPoint<S>, i: usize, j: usize| {
        p.coords[i].clone() * q.coords[j].clone() - p.coords[j].clone() * q.coords[i].clone()
    };
    // Coordinate pair on which the line projects most faithfully; all
    // minors are then proportional to determinants in a basis of the line.
    let mut best = (0, 1, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            for a in 0..4 {
                for b in a + 1..4 {
                    let m = minor(&pts[a], &pts[b], i, j).to_f64().abs();
                    if m > best.2 {
                        best = (i, j, m);
                    }
                }
            }
        }
    }
    let (i, j, scale) = best;
    if scale == 0.0 {
        return Err(ProjectiveError::DegenerateConfiguration);
    }
    let [z1, x, y, z2] = &pts;
    let den_a = minor(z1, x, i, j);
    let den_b = minor(y, z2, i, j);
    if den_a.is_zero_tol(tol * scale) || den_b.is_zero_tol(tol * scale) {
        return Err(ProjectiveError::DegenerateConfiguration);
    }
    Ok(minor(z1, y, i, j) * minor(x, z2, i, j) / (den_a * den_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn line_pt(t: Rat) -> ProjPoint<Rat> {
        ProjPoint::from_affine(&[t])
    }

    #[test]
    fn cross_ratio_affine_example() {
        let cr = cross_ratio(
            &line_pt(rat_int(-1)),
            &line_pt(rat_int(0)),
            &line_pt(rat(1, 2)),
            &line_pt(rat_int(1)),
            0.0,
        )
        .unwrap();
        assert_eq!(cr, rat_int(3));
    }

    #[test]
    fn cross_ratio_coincident_middle_is_one() {
        let x = line_pt(rat(1, 3));
        let cr = cross_ratio(&line_pt(rat_int(-1)), &x, &x, &line_pt(rat_int(2)), 0.0).unwrap();
        assert_eq!(cr, rat_int(1));
    }

    #[test]
    fn cross_ratio_projectively_invariant() {
        let g = ProjMap::new(
            vec![vec![rat_int(2), rat_int(3)], vec![rat_int(-1), rat_int(5)]],
            0.0,
        )
        .unwrap();
        let pts = [rat_int(-1), rat_int(0), rat(1, 2), rat_int(1)].map(line_pt);
        let img: Vec<_> = pts.iter().map(|p| g.apply(p)).collect();
        let cr = cross_ratio(&img[0], &img[1], &img[2], &img[3], 0.0).unwrap();
        assert_eq!(cr, rat_int(3));
    }

    #[test]
    fn cross_ratio_errors() {
        let a = ProjPoint::new(vec![rat_int(1), rat_int(0), rat_int(0)]).unwrap();
        let b = ProjPoint::new(vec![rat_int(0), rat_int(1), rat_int(0)]).unwrap();
        let c = ProjPoint::new(vec![rat_int(0), rat_int(0), rat_int(1)]).unwrap();
        assert_eq!(
            cross_ratio(&a, &b, &c, &a, 0.0),
            Err(ProjectiveError::NotCollinear)
        );
        let z = line_pt(rat_int(0));
        assert_eq!(
            cross_ratio(&z, &z, &line_pt(rat_int(1)), &line_pt(rat_int(2)), 0.0),
            Err(ProjectiveError::DegenerateConfiguration)
        );
    }

    #[test]
    fn apply_examples() {
        let g = ProjMap::diagonal(&[rat_int(2), rat_int(1)]).unwrap();
        let p = ProjPoint::new(vec![rat_int(1), rat_int(1)]).unwrap();
        let q = ProjPoint::new(vec![rat_int(2), rat_int(1)]).unwrap();
        assert!(g.apply(&p).same_point(&q, 0.0));
        assert!(g.inverse().apply(&g.apply(&p)).same_point(&p, 0.0));
        assert!(ProjMap::identity(2).apply(&p).same_point(&p, 0.0));

        let h = Hyperplane::new(vec![rat_int(1), rat_int(0)]).unwrap();
        let gh = g.apply_dual(&h);
        assert_eq!(gh.covector(), &[rat(1, 2), rat_int(0)]);
        assert!(gh.same_hyperplane(&h, 0.0));
    }

    #[test]
    fn normalization_idempotent() {
        let p = ProjPoint::new(vec![rat_int(0), rat_int(-4), rat_int(2)]).unwrap();
        let n = p.normalized();
        assert_eq!(n.coords(), &[rat_int(0), rat_int(1), rat(-1, 2)]);
        assert_eq!(n.normalized(), n);
        assert!(n.same_point(&p, 0.0));
    }

    #[test]
    fn general_position_examples() {
        let e: Vec<ProjPoint<Rat>> = (0..3)
            .map(|i| {
                ProjPoint::new((0..3).map(|j| rat_int((i == j) as i64)).collect()).unwrap()
            })
            .collect();
        assert!(general_position(&e, 0.0));
        let collinear: Vec<_> = [0, 1, 2]
            .iter()
            .map(|&t| ProjPoint::from_affine(&[rat_int(t), rat_int(2 * t)]))
            .collect();
        assert!(!general_position(&collinear, 0.0));
    }

    #[test]
    fn chart_coordinates() {
        let chart = AffineChart::<Rat>::standard(1);
        let p = ProjPoint::new(vec![rat_int(2), rat_int(2)]).unwrap();
        assert_eq!(chart.chart_coords(&p, 0.0).unwrap(), vec![rat_int(1)]);
        let inf = ProjPoint::new(vec![rat_int(1), rat_int(0)]).unwrap();
        assert_eq!(
            chart.chart_coords(&inf, 0.0),
            Err(ProjectiveError::PointAtInfinity)
        );

        let eta = Hyperplane::new(vec![rat_int(1), rat_int(2), rat_int(3)]).unwrap();
        let chart = AffineChart::new(eta.clone());
        let q = ProjPoint::new(vec![rat_int(5), rat_int(-1), rat_int(7)]).unwrap();
        let c = chart.chart_coords(&q, 0.0).unwrap();
        let back = chart.lift(&c);
        assert_eq!(eta.incidence(&back), rat_int(1));
        assert!(back.same_point(&q, 0.0));
        assert_eq!(chart.chart_coords(&q.scaled(&rat_int(-3)), 0.0).unwrap(), c);
    }
}
