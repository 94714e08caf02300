//! Standard neighborhoods of flats.
//!
//! Write `y = sum u_i w_i + t F^` in the frame made of the flat's vertices
//! and its pseudo-dual. The group `H_F` of frame-diagonal maps
//! `diag(l_1, .., l_d, 1)` with `prod l_i = 1` fixes `F^` and every vertex
//! of `F`, and preserves `L(y) = prod u_i / t^d`. Because the geometric mean
//! is concave, `{t > 0, u > 0, L > c}` is a convex cone; it is the interior
//! of the convex hull of `F` and the orbit `{L = c}` through `x`.

use num_traits::{One, Signed, Zero};

use crate::domain::ConvexDomain;
use crate::flats::{Flat, FlatError};
use crate::linalg::{self, Matrix};
use crate::projective::{ProjMap, ProjPoint};
use crate::scalar::{rat_int, Rat, Scalar};

#[derive(Clone, Debug)]
pub struct StandardNeighborhood {
    domain: ConvexDomain,
    flat: Flat,
    /// `+1` or `-1`: orientation of `F^` putting the base point at `t > 0`.
    side: i64,
    level: Rat,
    level_f64: f64,
}

/// Frame coordinates `(u, t)` with the sign of the representative chosen so
/// that `sum u_i >= 0`.
fn frame_coords_exact(flat: &Flat, y: &ProjPoint<Rat>) -> Result<(Vec<Rat>, Rat), FlatError> {
    let frame = flat.frame()?;
    let mut c = linalg::mat_vec(&frame.inv, y.coords());
    if c[..c.len() - 1].iter().sum::<Rat>().is_negative() {
        c.iter_mut().for_each(|x| *x = -x.clone());
    }
    let t = c.pop().expect("d + 1 coordinates");
    Ok((c, t))
}

fn level_of(u: &[Rat], t: &Rat) -> Rat {
    let prod: Rat = u.iter().product();
    let mut td = Rat::one();
    for _ in 0..u.len() {
        td *= t;
    }
    prod / td
}

impl StandardNeighborhood {
    /// The neighborhood generated by the base point `x`.
    pub fn new(domain: &ConvexDomain, flat: &Flat, x: &ProjPoint<Rat>) -> Result<Self, FlatError> {
        flat.frame()?;
        if !domain.contains_exact(x) {
            return Err(crate::domain::DomainError::NotInDomain.into());
        }
        let (u, t) = frame_coords_exact(flat, x)?;
        if t.is_zero() {
            return Err(FlatError::PointOnCarrier);
        }
        if !u.iter().all(Signed::is_positive) {
            return Err(FlatError::ProjectionUndefined);
        }
        let side = if t.is_positive() { 1 } else { -1 };
        let level = level_of(&u, &(t * rat_int(side)));
        Ok(Self {
            domain: domain.clone(),
            flat: flat.clone(),
            side,
            level_f64: level.to_f64(),
            level,
        })
    }

    pub fn flat(&self) -> &Flat {
        &self.flat
    }

    /// The invariant `c` of the base point.
    pub fn level(&self) -> &Rat {
        &self.level
    }

    /// Oriented frame coordinates `(u, t)` of a float point.
    pub fn coords(&self, y: &ProjPoint<f64>) -> Result<(Vec<f64>, f64), FlatError> {
        let (mut u, mut t) = self.flat.frame_coords(y)?;
        if u.iter().sum::<f64>() < 0.0 {
            u.iter_mut().for_each(|x| *x = -*x);
            t = -t;
        }
        Ok((u, t * self.side as f64))
    }

    /// Oriented frame coordinates of a rational point.
    pub fn coords_exact(&self, y: &ProjPoint<Rat>) -> Result<(Vec<Rat>, Rat), FlatError> {
        let (u, t) = frame_coords_exact(&self.flat, y)?;
        Ok((u, t * rat_int(self.side)))
    }

    /// `prod u_i / t^d` for points with `u > 0` and `t > 0`.
    pub fn invariant_exact(&self, y: &ProjPoint<Rat>) -> Option<Rat> {
        let (u, t) = self.coords_exact(y).ok()?;
        (t.is_positive() && u.iter().all(Signed::is_positive)).then(|| level_of(&u, &t))
    }

    /// Membership in the `H_F`-invariant cone `{t > 0, u > 0, L > c}`.
    pub fn level_region_contains(&self, y: &ProjPoint<f64>, tol: f64) -> bool {
        let Ok((u, t)) = self.coords(y) else {
            return false;
        };
        let scale = u.iter().fold(t.abs(), |m, x| m.max(x.abs()));
        if t <= tol * scale || u.iter().any(|x| *x <= tol * scale) {
            return false;
        }
        let log_level: f64 = u.iter().map(|x| x.ln()).sum::<f64>() - u.len() as f64 * t.ln();
        log_level > self.level_f64.ln() + tol
    }

    /// Exact membership in the invariant cone.
    pub fn level_region_contains_exact(&self, y: &ProjPoint<Rat>) -> bool {
        self.invariant_exact(y).is_some_and(|l| l > self.level)
    }

    /// Membership in the open neighborhood: the invariant cone inside the domain.
    pub fn contains(&self, y: &ProjPoint<f64>, tol: f64) -> bool {
        self.level_region_contains(y, tol) && self.domain.contains(y, tol)
    }

    /// Writes a point of the invariant cone as `z + f` with `z` on the
    /// base orbit (`L(z) = c`) and `f` in the open flat, certifying that it
    /// lies in the hull of `F` and the orbit.
    pub fn decompose(&self, y: &ProjPoint<f64>) -> Option<(ProjPoint<f64>, ProjPoint<f64>)> {
        let (u, t) = self.coords(y).ok()?;
        if t <= 0.0 || u.iter().any(|x| *x <= 0.0) {
            return None;
        }
        let d = u.len() as f64;
        let log_l: f64 = u.iter().map(|x| x.ln()).sum::<f64>() - d * t.ln();
        let sigma = ((self.level_f64.ln() - log_l) / d).exp();
        if sigma >= 1.0 {
            return None;
        }
        let basis = linalg::to_f64_matrix(&self.flat.frame().ok()?.basis);
        let mut zc: Vec<f64> = u.iter().map(|x| sigma * x).collect();
        zc.push(t * self.side as f64);
        let mut fc: Vec<f64> = u.iter().map(|x| (1.0 - sigma) * x).collect();
        fc.push(0.0);
        let z = ProjPoint::new(linalg::mat_vec(&basis, &zc)).ok()?;
        let f = ProjPoint::new(linalg::mat_vec(&basis, &fc)).ok()?;
        Some((z, f))
    }

    fn conjugated(&self, diag: Vec<Rat>) -> Result<ProjMap<Rat>, FlatError> {
        let frame = self.flat.frame()?;
        let n = diag.len();
        let d: Matrix<Rat> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i].clone() } else { rat_int(0) }).collect())
            .collect();
        let m = linalg::mat_mul(&frame.basis, &linalg::mat_mul(&d, &frame.inv));
        ProjMap::new(m, 0.0).map_err(|_| FlatError::FrameDegenerate)
    }

    /// The element `diag(l_1, .., l_d, 1)` of `H_F`; `None` unless the
    /// `l_i` are positive with product one.
    pub fn h_element(&self, lambdas: &[Rat]) -> Option<ProjMap<Rat>> {
        if lambdas.len() != self.flat.dim()
            || !lambdas.iter().all(Signed::is_positive)
            || !lambdas.iter().product::<Rat>().is_one()
        {
            return None;
        }
        let mut diag = lambdas.to_vec();
        diag.push(rat_int(1));
        self.conjugated(diag).ok()
    }

    /// `diag(1, .., 1, mu)` in the frame: moves points along normal lines.
    pub fn normal_scaling(&self, mu: &Rat) -> Result<ProjMap<Rat>, FlatError> {
        let mut diag = vec![rat_int(1); self.flat.dim()];
        diag.push(mu.clone());
        self.conjugated(diag)
    }
}
