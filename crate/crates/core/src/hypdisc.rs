//! Hyperbolic disc in the Klein model.
//!
//! Points are stored as unit vectors on the hyperboloid `t² − x² − y² = 1`,
//! which is the homogeneous form of the Klein model: the Klein coordinates
//! are `(x/t, y/t)`. This keeps far-away orbit points representable long
//! after their Klein coordinates round to the unit circle.
//!
//! Isometries are real 2×2 matrices with determinant ±1. A matrix `h`
//! acts on the symmetric form of a point by `M ↦ h⁻ᵀ M h⁻¹`, where
//!
//! ```text
//! (t, x, y)  ↔  M = [[t − x, y], [y, t + x]]
//! ```
//!
//! For `det h = −1` this is the anti-holomorphic map `z ↦ (a z̄ + b)/(c z̄ + d)`
//! of the upper half-plane. Under this dictionary the half-plane point `i`
//! is the origin, `∞` is the boundary angle 0 and `0` is the angle π.
//! A boundary direction `(p, q) ∈ ℝ²` has angle `atan2(−2pq, p² − q²)`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Complex, Matrix2};

use crate::error::{Error, Result};

/// Default trace tolerance for parabolic detection.
pub const TRACE_TOL: f64 = 1e-9;

/// Klein points built from coordinates must satisfy `|p| < 1 − BOUNDARY_MARGIN`.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscPoint {
    h: [f64; 3],
}

impl DiscPoint {
    /// Point with Klein coordinates `(x, y)`.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let n2 = x * x + y * y;
        if !n2.is_finite() || n2.sqrt() >= 1.0 - BOUNDARY_MARGIN {
            return Err(Error::InvalidInput(format!(
                "Klein point ({x}, {y}) is not inside the disc"
            )));
        }
        let t = 1.0 / (1.0 - n2).sqrt();
        Ok(DiscPoint { h: [t, x * t, y * t] })
    }

    pub fn origin() -> Self {
        DiscPoint { h: [1.0, 0.0, 0.0] }
    }

    /// Point at hyperbolic distance `dist` from the origin in direction `theta`.
    pub fn polar(dist: f64, theta: f64) -> Self {
        let s = dist.sinh();
        DiscPoint { h: [dist.cosh(), s * theta.cos(), s * theta.sin()] }
    }

    pub(crate) fn from_hyperboloid(v: [f64; 3]) -> Self {
        let q = v[0] * v[0] - v[1] * v[1] - v[2] * v[2];
        // for far points q is pure cancellation noise; trust the spatial part
        let s = if q > 1e-8 * v[0] * v[0] { q.sqrt() } else { 1.0 };
        let mut h = [v[0] / s, v[1] / s, v[2] / s];
        // t is determined by the spatial part; recompute to stay on the sheet
        h[0] = (1.0 + h[1] * h[1] + h[2] * h[2]).sqrt();
        DiscPoint { h }
    }

    pub fn hyperboloid(&self) -> [f64; 3] {
        self.h
    }

    pub fn x(&self) -> f64 {
        self.h[1] / self.h[0]
    }

    pub fn y(&self) -> f64 {
        self.h[2] / self.h[0]
    }

    pub fn klein(&self) -> (f64, f64) {
        (self.x(), self.y())
    }

    /// Poincaré disc coordinates.
    pub fn poincare(&self) -> (f64, f64) {
        let s = 1.0 + self.h[0];
        (self.h[1] / s, self.h[2] / s)
    }

    /// Angle of the ray from the origin through this point.
    pub fn direction(&self) -> BoundaryPoint {
        BoundaryPoint::new(self.h[2].atan2(self.h[1]))
    }

    /// Upper half-plane coordinates `(u, v)`.
    pub fn to_half_plane(&self) -> (f64, f64) {
        let [t, x, y] = self.h;
        let a = t - x;
        (-y / a, 1.0 / a)
    }

    pub fn from_half_plane(u: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) || !u.is_finite() || !v.is_finite() {
            return Err(Error::InvalidInput(format!("({u}, {v}) is not in the upper half-plane")));
        }
        let a = 1.0 / v;
        let b = -u / v;
        let c = (u * u + v * v) / v;
        Ok(DiscPoint::from_hyperboloid([(a + c) / 2.0, (c - a) / 2.0, b]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BoundaryPoint {
    pub theta: f64,
}

impl BoundaryPoint {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        BoundaryPoint { theta: t }
    }

    /// Boundary point of the projective direction `(p, q)`; `(z, 1)` is the
    /// real point `z` of the half-plane and `(1, 0)` is `∞`.
    pub fn from_direction(p: f64, q: f64) -> Self {
        BoundaryPoint::new((-2.0 * p * q).atan2(p * p - q * q))
    }

    /// A direction `(cos φ, sin φ)` with `from_direction` equal to `self`.
    pub fn to_direction(&self) -> (f64, f64) {
        let phi = -self.theta / 2.0;
        (phi.cos(), phi.sin())
    }

    pub fn klein(&self) -> (f64, f64) {
        (self.theta.cos(), self.theta.sin())
    }

    /// Angular distance on the circle, in `[0, π]`.
    pub fn angular_distance(&self, other: &BoundaryPoint) -> f64 {
        let d = (self.theta - other.theta).rem_euclid(TAU);
        d.min(TAU - d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Plus,
    Minus,
}

/// Isometry of the disc as a real 2×2 matrix with determinant ±1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    m: [f64; 4],
    // orientation is tracked separately: det() loses all precision once
    // entries pass ~1e8
    neg: bool,
}

impl Mobius {
    /// Normalizes the determinant to ±1; the sign fixes the orientation.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if !det.is_finite() || scale == 0.0 || det.abs() <= 1e-300 || det.abs() < 1e-14 * scale * scale {
            return Err(Error::InvalidInput(format!("singular matrix [[{a},{b}],[{c},{d}]]")));
        }
        let s = det.abs().sqrt();
        Ok(Mobius { m: [a / s, b / s, c / s, d / s], neg: det < 0.0 })
    }

    pub(crate) fn raw(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mobius { m: [a, b, c, d], neg: a * d - b * c < 0.0 }
    }

    pub fn identity() -> Self {
        Mobius::raw(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(l: f64) -> Self {
        Mobius::raw(l, 0.0, 0.0, 1.0 / l)
    }

    /// Hyperbolic element translating by `len` along the axis through the
    /// origin with attracting end at boundary angle `theta`.
    pub fn translation(len: f64, theta: f64) -> Self {
        let r = Mobius::rotation(-theta / 2.0);
        r.compose(&Mobius::diag((len / 2.0).exp())).compose(&r.inverse())
    }

    /// Matrix `[[cos θ, −sin θ], [sin θ, cos θ]]`; fixes the origin and
    /// turns the boundary by `−2θ`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mobius::raw(c, -s, s, c)
    }

    pub fn a(&self) -> f64 {
        self.m[0]
    }
    pub fn b(&self) -> f64 {
        self.m[1]
    }
    pub fn c(&self) -> f64 {
        self.m[2]
    }
    pub fn d(&self) -> f64 {
        self.m[3]
    }

    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.m[0], self.m[1], self.m[2], self.m[3])
    }

    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn orientation(&self) -> Orientation {
        if self.neg {
            Orientation::Minus
        } else {
            Orientation::Plus
        }
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }

    pub fn compose(&self, o: &Mobius) -> Mobius {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        Mobius { m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], neg: self.neg != o.neg }
    }

    pub fn inverse(&self) -> Mobius {
        let [a, b, c, d] = self.m;
        let det = if self.neg { -1.0 } else { 1.0 };
        Mobius { m: [d * det, -b * det, -c * det, a * det], neg: self.neg }
    }

    pub fn pow(&self, n: u32) -> Mobius {
        let mut out = Mobius::identity();
        for _ in 0..n {
            out = out.compose(self);
        }
        out
    }

    /// Rescale so that the determinant is exactly ±1 again.
    pub fn renormalized(&self) -> Mobius {
        let scale = self.m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if scale > 1e6 {
            return *self;
        }
        let s = self.det().abs().sqrt();
        Mobius { m: [self.m[0] / s, self.m[1] / s, self.m[2] / s, self.m[3] / s], neg: self.neg }
    }

    /// Projective equality: `M ≡ −M`.
    pub fn approx_eq(&self, o: &Mobius, tol: f64) -> bool {
        let plus = (0..4).all(|i| (self.m[i] - o.m[i]).abs() <= tol);
        let minus = (0..4).all(|i| (self.m[i] + o.m[i]).abs() <= tol);
        plus || minus
    }

    /// The induced 3×3 Lorentz matrix on `(t, x, y)`.
    pub fn lorentz(&self) -> [[f64; 3]; 3] {
        let inv = self.inverse();
        let [p, q, r, s] = inv.m;
        // h⁻ᵀ M h⁻¹ for the three basis forms
        let act = |a: f64, b: f64, c: f64| -> [f64; 3] {
            // M = [[a,b],[b,c]], N = [[p,q],[r,s]]; Nᵀ M N
            let a2 = p * (a * p + b * r) + r * (b * p + c * r);
            let b2 = p * (a * q + b * s) + r * (b * q + c * s);
            let c2 = q * (a * q + b * s) + s * (b * q + c * s);
            let k = 1.0;
            [k * (a2 + c2) / 2.0, k * (c2 - a2) / 2.0, k * b2]
        };
        let et = act(1.0, 0.0, 1.0);
        let ex = act(-1.0, 0.0, 1.0);
        let ey = act(0.0, 1.0, 0.0);
        [
            [et[0], ex[0], ey[0]],
            [et[1], ex[1], ey[1]],
            [et[2], ex[2], ey[2]],
        ]
    }

    /// SU(1,1) coefficients `(α, β)` of the conjugate by the Cayley map, so
    /// that the Poincaré disc action is `w ↦ (αw + β)/(β̄w + ᾱ)`.
    pub fn su11(&self) -> (Complex<f64>, Complex<f64>) {
        let [a, b, c, d] = self.m;
        (
            Complex::new((a + d) / 2.0, (b - c) / 2.0),
            Complex::new((a - d) / 2.0, -(b + c) / 2.0),
        )
    }

    /// Isometric circle `|β̄w + ᾱ| = 1` as (centre, radius); `None` when the
    /// element fixes the origin.
    pub fn isometric_circle(&self) -> Option<(Complex<f64>, f64)> {
        let (al, be) = self.su11();
        if be.norm() < 1e-14 {
            return None;
        }
        Some((-al.conj() / be.conj(), 1.0 / be.norm()))
    }

    /// Translation length of a hyperbolic element.
    pub fn translation_length(&self) -> f64 {
        let t = self.trace().abs() / 2.0;
        if t <= 1.0 {
            0.0
        } else {
            2.0 * t.acosh()
        }
    }
}

fn lorentz_apply(l: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        l[0][0] * v[0] + l[0][1] * v[1] + l[0][2] * v[2],
        l[1][0] * v[0] + l[1][1] * v[1] + l[1][2] * v[2],
        l[2][0] * v[0] + l[2][1] * v[1] + l[2][2] * v[2],
    ]
}

/// Hyperbolic distance.
///
/// Nearby points use `d = 2·asinh(|p − q|_L / 2)` with the Minkowski norm of
/// the difference; far points use `acosh` of the Lorentz product.
pub fn dist_h(p: &DiscPoint, q: &DiscPoint) -> f64 {
    let a = p.h;
    let b = q.h;
    let c = a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
    if c > 2.0 {
        return c.acosh();
    }
    let dt = a[0] - b[0];
    let dx = a[1] - b[1];
    let dy = a[2] - b[2];
    let q2 = (dx * dx + dy * dy - dt * dt).max(0.0);
    2.0 * (q2.sqrt() / 2.0).asinh()
}

pub fn apply_isometry(m: &Mobius, p: &DiscPoint) -> DiscPoint {
    DiscPoint::from_hyperboloid(lorentz_apply(&m.lorentz(), p.h))
}

pub fn apply_boundary(m: &Mobius, x: &BoundaryPoint) -> BoundaryPoint {
    let (p, q) = x.to_direction();
    let [a, b, c, d] = m.m;
    BoundaryPoint::from_direction(a * p + b * q, c * p + d * q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

pub fn classify(m: &Mobius) -> Result<Class> {
    classify_with(m, TRACE_TOL)
}

pub fn classify_with(m: &Mobius, tau: f64) -> Result<Class> {
    if m.orientation() == Orientation::Minus {
        return Err(Error::InvalidInput("classify needs an orientation-preserving element".into()));
    }
    if m.approx_eq(&Mobius::identity(), tau) {
        return Ok(Class::Identity);
    }
    let t = m.trace().abs();
    Ok(if t > 2.0 + tau {
        Class::Hyperbolic
    } else if t < 2.0 - tau {
        Class::Elliptic
    } else {
        Class::Parabolic
    })
}

fn eigvec(m: &Mobius, lambda: f64) -> (f64, f64) {
    let [a, b, c, d] = m.m;
    let v1 = (b, lambda - a);
    let v2 = (lambda - d, c);
    if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) {
        v1
    } else {
        v2
    }
}

/// Attracting and repelling boundary fixed points.
pub fn fixed_points(m: &Mobius) -> Result<(BoundaryPoint, BoundaryPoint)> {
    match classify(m)? {
        Class::Identity => Err(Error::NoFixedBoundaryPoint("identity")),
        Class::Elliptic => Err(Error::NoFixedBoundaryPoint("elliptic")),
        Class::Parabolic => {
            let (p, q) = eigvec(m, m.trace() / 2.0);
            let x = BoundaryPoint::from_direction(p, q);
            Ok((x, x))
        }
        Class::Hyperbolic => {
            let t = m.trace();
            let disc = (t * t - 4.0).sqrt();
            let big = (t + t.signum() * disc) / 2.0;
            let small = 1.0 / big;
            let (p, q) = eigvec(m, big);
            let (r, s) = eigvec(m, small);
            Ok((BoundaryPoint::from_direction(p, q), BoundaryPoint::from_direction(r, s)))
        }
    }
}

/// Element of the stabilizer coset moving `b0` to the origin.
pub fn to_origin(b0: &DiscPoint) -> Mobius {
    let (u, v) = b0.to_half_plane();
    let s = v.sqrt();
    Mobius::raw(1.0 / s, -u / s, 0.0, s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shadow {
    pub center: BoundaryPoint,
    pub half_angle: f64,
    pub full: bool,
}

impl Shadow {
    pub fn full_circle() -> Self {
        Shadow { center: BoundaryPoint::new(0.0), half_angle: PI, full: true }
    }

    /// Counter-clockwise start of the arc; 0 for the full circle.
    pub fn start(&self) -> f64 {
        if self.full {
            0.0
        } else {
            (self.center.theta - self.half_angle).rem_euclid(TAU)
        }
    }

    pub fn contains(&self, x: &BoundaryPoint) -> bool {
        self.full || x.angular_distance(&self.center) <= self.half_angle
    }

    pub fn intersects(&self, o: &Shadow) -> bool {
        self.full || o.full || self.center.angular_distance(&o.center) <= self.half_angle + o.half_angle
    }
}

/// Shadow `O_r(b0, z)`: boundary points whose ray from `b0` passes within
/// distance `r` of `z`.
pub fn shadow(b0: &DiscPoint, z: &DiscPoint, r: f64) -> Result<Shadow> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("shadow radius must be positive, got {r}")));
    }
    if *b0 == DiscPoint::origin() {
        return Ok(shadow_from_origin(z, r));
    }
    let g = to_origin(b0);
    let sh = shadow_from_origin(&apply_isometry(&g, z), r);
    if sh.full {
        return Ok(sh);
    }
    let gi = g.inverse();
    let lo = apply_boundary(&gi, &BoundaryPoint::new(sh.center.theta - sh.half_angle));
    let hi = apply_boundary(&gi, &BoundaryPoint::new(sh.center.theta + sh.half_angle));
    let half = (hi.theta - lo.theta).rem_euclid(TAU) / 2.0;
    Ok(Shadow { center: BoundaryPoint::new(lo.theta + half), half_angle: half, full: false })
}

fn shadow_from_origin(z: &DiscPoint, r: f64) -> Shadow {
    let dist = dist_h(&DiscPoint::origin(), z);
    if dist < r - 1e-12 {
        return Shadow::full_circle();
    }
    let ratio = r.sinh() / dist.sinh();
    Shadow { center: z.direction(), half_angle: ratio.min(1.0).asin(), full: false }
}

/// Indices into `pts` (sorted by angle) of the first and last limit point met
/// when sweeping the arc counter-clockwise from its start.
pub fn coarse_endpoint_indices(sh: &Shadow, pts: &[BoundaryPoint]) -> Result<(usize, usize)> {
    if pts.is_empty() {
        return Err(Error::EmptyShadow);
    }
    if sh.full {
        return Ok((0, pts.len() - 1));
    }
    let lo = sh.start();
    let hi = lo + 2.0 * sh.half_angle;
    let first_ge = |t: f64| pts.partition_point(|p| p.theta < t);
    let last_le = |t: f64| pts.partition_point(|p| p.theta <= t);
    if hi < TAU {
        let i = first_ge(lo);
        let j = last_le(hi);
        if i >= j {
            return Err(Error::EmptyShadow);
        }
        return Ok((i, j - 1));
    }
    // arc wraps through angle 0
    let i = first_ge(lo);
    let j = last_le(hi - TAU);
    let first = if i < pts.len() { Some(i) } else if j > 0 { Some(0) } else { None };
    let last = if j > 0 { Some(j - 1) } else if i < pts.len() { Some(pts.len() - 1) } else { None };
    match (first, last) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::EmptyShadow),
    }
}

pub fn coarse_endpoints(sh: &Shadow, pts: &[BoundaryPoint]) -> Result<(BoundaryPoint, BoundaryPoint)> {
    let (i, j) = coarse_endpoint_indices(sh, pts)?;
    Ok((pts[i], pts[j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn distance_examples() {
        let o = DiscPoint::origin();
        let p = DiscPoint::new(0.5, 0.0).unwrap();
        assert_eq!(dist_h(&o, &o), 0.0);
        // half the log of the boundary cross-ratio (1 + 0.5)/(1 − 0.5)
        let oracle = 0.5 * (1.5f64 / 0.5).ln();
        assert!(close(dist_h(&o, &p), oracle, 1e-15));
        assert!(close(dist_h(&p, &o), 0.549306, 1e-6));
        assert!(DiscPoint::new(1.0, 0.0).is_err());
        assert!(DiscPoint::new(0.6, 0.8).is_err());
    }

    #[test]
    fn cross_ratio_oracle() {
        // Hilbert distance ½ log [a,p,q,b] along the chord through p and q
        let p = DiscPoint::new(0.1, -0.3).unwrap();
        let q = DiscPoint::new(-0.4, 0.5).unwrap();
        let (px, py) = p.klein();
        let (qx, qy) = q.klein();
        let (dx, dy) = (qx - px, qy - py);
        // roots of |p + s(q−p)| = 1
        let a = dx * dx + dy * dy;
        let b = 2.0 * (px * dx + py * dy);
        let c = px * px + py * py - 1.0;
        let disc = (b * b - 4.0 * a * c).sqrt();
        let s0 = (-b - disc) / (2.0 * a);
        let s1 = (-b + disc) / (2.0 * a);
        let cr = ((1.0 - s0) * (s1 - 0.0)) / ((0.0 - s0) * (s1 - 1.0));
        assert!(close(dist_h(&p, &q), 0.5 * cr.ln(), 1e-12));
    }

    #[test]
    fn isometry_examples() {
        let p = DiscPoint::new(0.3, 0.2).unwrap();
        let q = apply_isometry(&Mobius::identity(), &p);
        assert!(close(q.x(), 0.3, 1e-15) && close(q.y(), 0.2, 1e-15));
        let m = Mobius::diag(0.5f64.exp());
        let o = DiscPoint::origin();
        let mo = apply_isometry(&m, &o);
        assert!(close(dist_h(&o, &mo), 1.0, 1e-14));
        assert!(close(mo.y(), 0.0, 1e-15) && mo.x() > 0.0);
        let r = apply_isometry(&Mobius::rotation(0.7), &o);
        assert!(close(r.x(), 0.0, 1e-15) && close(r.y(), 0.0, 1e-15));
    }

    #[test]
    fn half_plane_agrees_with_cayley() {
        for &(u, v) in &[(0.0, 1.0), (1.0, 1.0), (-2.0, 0.5), (0.3, 3.0)] {
            let p = DiscPoint::from_half_plane(u, v).unwrap();
            // Cayley w = (z − i)/(z + i), then Poincaré → Klein
            let z = Complex::new(u, v);
            let i = Complex::new(0.0, 1.0);
            let w = (z - i) / (z + i);
            let s = 1.0 + w.norm_sqr();
            assert!(close(p.x(), 2.0 * w.re / s, 1e-14));
            assert!(close(p.y(), 2.0 * w.im / s, 1e-14));
            let (u2, v2) = p.to_half_plane();
            assert!(close(u, u2, 1e-12) && close(v, v2, 1e-12));
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&Mobius::diag(2.0)).unwrap(), Class::Hyperbolic);
        assert_eq!(classify(&Mobius::new(1.0, 1.0, 0.0, 1.0).unwrap()).unwrap(), Class::Parabolic);
        assert_eq!(classify(&Mobius::rotation(PI / 6.0)).unwrap(), Class::Elliptic);
        assert_eq!(classify(&Mobius::identity()).unwrap(), Class::Identity);
        let refl = Mobius::new(1.0, 0.0, 0.0, -1.0).unwrap();
        assert!(classify(&refl).is_err());
    }

    #[test]
    fn fixed_point_examples() {
        let (att, rep) = fixed_points(&Mobius::diag(2.0)).unwrap();
        assert!(close(att.theta, 0.0, 1e-15));
        assert!(close(rep.theta, PI, 1e-15));
        let (a, b) = fixed_points(&Mobius::new(1.0, 1.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(close(a.theta, 0.0, 1e-15));
        assert!(fixed_points(&Mobius::rotation(0.4)).is_err());
        assert!(fixed_points(&Mobius::identity()).is_err());
    }

    #[test]
    fn boundary_action_matches_interior_limit() {
        let g = Mobius::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let m = Mobius::translation(0.8, 1.1);
        let conj = g.compose(&m).compose(&g.inverse());
        let (att, rep) = fixed_points(&m).unwrap();
        let (catt, crep) = fixed_points(&conj).unwrap();
        assert!(apply_boundary(&g, &att).angular_distance(&catt) < 1e-12);
        assert!(apply_boundary(&g, &rep).angular_distance(&crep) < 1e-12);
        let far = apply_isometry(&m.pow(60), &DiscPoint::new(0.2, 0.1).unwrap());
        assert!(far.direction().angular_distance(&att) < 1e-6);
    }

    #[test]
    fn translation_axis_direction() {
        let m = Mobius::translation(1.0, 2.0);
        let (att, rep) = fixed_points(&m).unwrap();
        assert!(close(att.theta, 2.0, 1e-12));
        assert!(att.angular_distance(&rep) > PI - 1e-12);
        assert!(close(m.translation_length(), 1.0, 1e-12));
    }

    /// Distance from `z` to the geodesic ray from the origin at angle `phi`,
    /// found by golden-section search along the ray.
    fn ray_distance(z: &DiscPoint, phi: f64) -> f64 {
        let f = |s: f64| dist_h(z, &DiscPoint::polar(s, phi));
        let (mut a, mut b) = (0.0f64, 40.0f64);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        f((a + b) / 2.0)
    }

    #[test]
    fn shadow_examples() {
        let o = DiscPoint::origin();
        let sh = shadow(&o, &DiscPoint::polar(0.5, 1.0), 1.0).unwrap();
        assert!(sh.full && sh.half_angle == PI);
        let z = DiscPoint::polar(2.0, 0.0);
        let sh = shadow(&o, &z, 1.0).unwrap();
        // membership boundary from direct minimization along boundary rays
        let (mut lo, mut hi) = (0.0, PI / 2.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if ray_distance(&z, mid) <= 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(close(sh.half_angle, 0.5 * (lo + hi), 1e-7), "{} vs {}", sh.half_angle, lo);
        assert!(close(sh.half_angle, 0.329983, 1e-6));
        let sh2 = shadow(&o, &z, 2.0).unwrap();
        assert!(close(sh2.half_angle, PI / 2.0, 1e-12));
    }

    #[test]
    fn shadow_general_basepoint_membership() {
        let b0 = DiscPoint::new(0.3, -0.2).unwrap();
        let z = DiscPoint::polar(2.5, 2.0);
        let sh = shadow(&b0, &z, 1.0).unwrap();
        let g = to_origin(&b0);
        let gz = apply_isometry(&g, &z);
        for k in 0..360 {
            let x = BoundaryPoint::new(k as f64 * TAU / 360.0);
            let gx = apply_boundary(&g, &x);
            let ray_d = ray_distance(&gz, gx.theta);
            if (ray_d - 1.0).abs() > 1e-6 {
                assert_eq!(sh.contains(&x), ray_d < 1.0, "angle index {k}");
            }
        }
    }

    #[test]
    fn coarse_endpoint_examples() {
        let pts: Vec<_> = [0.0, PI / 2.0, PI].iter().map(|&t| BoundaryPoint::new(t)).collect();
        let (x, y) = coarse_endpoints(&Shadow::full_circle(), &pts).unwrap();
        assert_eq!((x.theta, y.theta), (0.0, PI));
        let arc = Shadow { center: BoundaryPoint::new(0.3), half_angle: 0.2, full: false };
        let pts: Vec<_> = [0.2, 0.3, 0.9].iter().map(|&t| BoundaryPoint::new(t)).collect();
        let (x, y) = coarse_endpoints(&arc, &pts).unwrap();
        assert_eq!((x.theta, y.theta), (0.2, 0.3));
        assert_eq!(coarse_endpoints(&arc, &[BoundaryPoint::new(0.9)]), Err(Error::EmptyShadow));
        // arc through angle 0
        let wrap = Shadow { center: BoundaryPoint::new(0.0), half_angle: 0.3, full: false };
        let pts: Vec<_> = [0.1, 1.0, 6.1].iter().map(|&t| BoundaryPoint::new(t)).collect();
        let (x, y) = coarse_endpoints(&wrap, &pts).unwrap();
        assert_eq!((x.theta, y.theta), (6.1, 0.1));
    }
}
