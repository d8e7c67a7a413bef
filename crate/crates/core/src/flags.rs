//! Flags, the projector metric, limit maps and positivity of flag tuples.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hypdisc::{BoundaryPoint, Mobius};
use crate::reps::{sym_power_matrix, Representation, ScaledMatrix};
use crate::tpos::{factorize, Unitriangular};
use crate::words::{limit_sample, GroupSpec};

/// Minimum ratio between consecutive eigenvalue moduli.
pub const LOXODROMIC_GAP: f64 = 1.0 + 1e-6;

/// Minimum log gap between consecutive singular values.
pub const SINGULAR_GAP: f64 = 1e-6;

/// Normalized minors below this count as non-transverse.
pub const TRANSVERSE_TOL: f64 = 1e-10;

/// Complete flag `F¹ ⊂ F² ⊂ … ⊂ ℝ^d`, stored as an orthonormal basis whose
/// leading `k` columns span `F^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    basis: DMatrix<f64>,
}

/// Orthonormal basis of a `k`-plane.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassPoint {
    pub k: usize,
    pub basis: DMatrix<f64>,
}

fn orthonormalize(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (d, k) = m.shape();
    let scale = m.amax();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidInput("flag basis is zero or not finite".into()));
    }
    let qr = (m / scale).qr();
    let r = qr.r();
    let mut q = qr.q();
    let q = q.columns_mut(0, k.min(d));
    let mut q = q.into_owned();
    for j in 0..k.min(d) {
        if r[(j, j)].abs() < 1e-13 {
            return Err(Error::InvalidInput(format!("flag basis has dependent columns at {j}")));
        }
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
        // positive R alone is not invariant under flag-preserving rescaling
        // with negative entries; fix the sign by the largest entry
        let col = q.column(j);
        let mut best = 0;
        for i in 0..d {
            if col[i].abs() > col[best].abs() + 1e-12 {
                best = i;
            }
        }
        if col[best] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(q)
}

impl Flag {
    /// Flag spanned by the leading columns of an invertible matrix.
    pub fn from_basis(m: &DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} flag basis", m.nrows(), m.ncols())));
        }
        Ok(Flag { basis: orthonormalize(m)? })
    }

    /// `e₁ ⊂ ⟨e₁, e₂⟩ ⊂ …`
    pub fn ascending(d: usize) -> Self {
        Flag { basis: DMatrix::identity(d, d) }
    }

    /// `e_d ⊂ ⟨e_d, e_{d−1}⟩ ⊂ …`
    pub fn descending(d: usize) -> Self {
        Flag::from_basis(&w0(d)).expect("permutation matrix")
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn grass(&self, k: usize) -> Result<GrassPoint> {
        if k == 0 || k > self.dim() {
            return Err(Error::IndexRange { index: k, max: self.dim() });
        }
        Ok(GrassPoint { k, basis: self.basis.columns(0, k).into_owned() })
    }

    /// Image under a linear map.
    pub fn act(&self, g: &DMatrix<f64>) -> Result<Flag> {
        Flag::from_basis(&(g * &self.basis))
    }

    /// Annihilator flag: `(F*)^k = (F^{d−k})^⊥`. Reversing the basis of an
    /// orthonormal frame does this.
    pub fn dual(&self) -> Flag {
        let d = self.dim();
        Flag::from_basis(&(&self.basis * w0(d))).expect("orthonormal")
    }

    /// Largest projector distance over all pieces.
    pub fn distance(&self, o: &Flag) -> Result<f64> {
        let mut m = 0.0f64;
        for k in 1..self.dim() {
            m = m.max(flag_distance(&self.grass(k)?, &o.grass(k)?)?);
        }
        Ok(m)
    }
}

impl GrassPoint {
    pub fn new(basis: &DMatrix<f64>) -> Result<Self> {
        let k = basis.ncols();
        if k == 0 || k > basis.nrows() {
            return Err(Error::DimensionMismatch(format!("{}x{} plane basis", basis.nrows(), k)));
        }
        Ok(GrassPoint { k, basis: orthonormalize(basis)? })
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Orthogonal complement; `None` for the whole space.
    pub fn complement(&self) -> Option<GrassPoint> {
        let d = self.dim();
        if self.k == d {
            return None;
        }
        let eig = (DMatrix::identity(d, d) - self.projector()).symmetric_eigen();
        let cols: Vec<_> = (0..d).filter(|&j| eig.eigenvalues[j] > 0.5).map(|j| eig.eigenvectors.column(j).into_owned()).collect();
        GrassPoint::new(&DMatrix::from_columns(&cols)).ok()
    }
}

/// Longest permutation matrix.
pub fn w0(d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d, d, |i, j| if i + j == d - 1 { 1.0 } else { 0.0 })
}

/// `‖P − Q‖_F / √2` for the orthogonal projectors.
pub fn flag_distance(p: &GrassPoint, q: &GrassPoint) -> Result<f64> {
    if p.k != q.k || p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Gr({}, {}) vs Gr({}, {})",
            p.k,
            p.dim(),
            q.k,
            q.dim()
        )));
    }
    Ok((p.projector() - q.projector()).norm() / std::f64::consts::SQRT_2)
}

/// Eigenvalues (real, sorted by decreasing modulus) with eigenvectors as
/// columns, from the real Schur form and back substitution.
pub(crate) fn real_eigen(m: &DMatrix<f64>, need: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let d = m.nrows();
    let scale = m.amax();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::SpectrumNotLoxodromic("zero or non-finite matrix".into()));
    }
    let a = m / scale;
    let (q, t) = a.schur().unpack();
    for i in 0..d - 1 {
        if t[(i + 1, i)].abs() > 1e-12 {
            return Err(Error::SpectrumNotLoxodromic("complex eigenvalue pair".into()));
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| t[(j, j)].abs().total_cmp(&t[(i, i)].abs()));
    for w in 0..need.min(d - 1) {
        let (a, b) = (t[(order[w], order[w])].abs(), t[(order[w + 1], order[w + 1])].abs());
        if !(a > LOXODROMIC_GAP * b) {
            return Err(Error::SpectrumNotLoxodromic(format!("eigenvalue moduli {a} and {b} too close")));
        }
    }
    let mut vecs = DMatrix::zeros(d, d);
    for (col, &j) in order.iter().enumerate() {
        let lam = t[(j, j)];
        let mut y = DVector::zeros(d);
        y[j] = 1.0;
        for i in (0..j).rev() {
            let mut s = 0.0;
            for l in i + 1..=j {
                s += t[(i, l)] * y[l];
            }
            let den = t[(i, i)] - lam;
            y[i] = if den == 0.0 { 0.0 } else { -s / den };
        }
        let v = &q * y;
        vecs.set_column(col, &(&v / v.norm()));
    }
    Ok((order.iter().map(|&j| t[(j, j)] * scale).collect(), vecs))
}

/// Attracting flag: eigenvectors ordered by decreasing `|λ|`.
pub fn attracting_flag(m: &DMatrix<f64>) -> Result<Flag> {
    let (_, v) = real_eigen(m, m.nrows())?;
    Flag::from_basis(&v)
}

/// Span of the top `k` eigenvectors; only the first `k` gaps are checked.
pub fn attracting_grass(m: &DMatrix<f64>, k: usize) -> Result<GrassPoint> {
    if k == 0 || k > m.nrows() {
        return Err(Error::IndexRange { index: k, max: m.nrows() });
    }
    let (_, v) = real_eigen(m, k)?;
    GrassPoint::new(&v.columns(0, k).into_owned())
}

/// Flag of left singular vectors ordered by decreasing singular value.
pub fn cartan_attractor(sm: &ScaledMatrix) -> Result<Flag> {
    let d = sm.dim();
    let svd = sm.mat.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors");
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    for w in 0..d - 1 {
        let (a, b) = (svd.singular_values[order[w]], svd.singular_values[order[w + 1]]);
        if !(b > 0.0 && (a / b).ln() > SINGULAR_GAP) && b != 0.0 {
            return Err(Error::DegenerateGap(w + 1));
        }
    }
    let cols: Vec<_> = order.iter().map(|&j| u.column(j).into_owned()).collect();
    Flag::from_basis(&DMatrix::from_columns(&cols))
}

/// Osculating flag of the Veronese curve at a boundary point, matching the
/// basis of [`sym_power_matrix`].
pub fn veronese_flag(d: usize, x: &BoundaryPoint) -> Result<Flag> {
    // hyperbolic element attracting to x: rotation(θ) turns the boundary by −2θ
    let r = Mobius::rotation(-x.theta / 2.0);
    let h = r.compose(&Mobius::diag(1f64.exp())).compose(&r.inverse());
    attracting_flag(&sym_power_matrix(d, &h))
}

/// Veronese flag at the real point `t` of the upper half-plane model.
pub fn veronese_flag_at(d: usize, t: f64) -> Result<Flag> {
    veronese_flag(d, &BoundaryPoint::from_direction(t, 1.0))
}

/// Unit vector spanning `F^j ∩ G^{d−j+1}`.
fn meet(f: &Flag, g: &Flag, j: usize) -> DVector<f64> {
    let d = f.dim();
    let a = f.basis.columns(0, j).into_owned();
    let b = g.basis.columns(0, d - j + 1).into_owned();
    let resid = &a - &b * (b.transpose() * &a);
    let svd = resid.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors");
    let mut imin = 0;
    for i in 0..svd.singular_values.len() {
        if svd.singular_values[i] < svd.singular_values[imin] {
            imin = i;
        }
    }
    let coef = vt.row(imin).transpose();
    (&a * coef).normalize()
}

/// Transversality: `F^j ∩ G^{d−j} = 0` for every `j`.
pub fn transverse(f: &Flag, g: &Flag) -> bool {
    let d = f.dim();
    for j in 1..d {
        let a = f.basis.columns(0, j).into_owned();
        let b = g.basis.columns(0, d - j).into_owned();
        let resid = &a - &b * (b.transpose() * &a);
        let smin = resid.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
        if !(smin > TRANSVERSE_TOL) {
            return false;
        }
    }
    true
}

fn check_dims(fs: &[&Flag]) -> Result<usize> {
    let d = fs[0].dim();
    if fs.iter().any(|f| f.dim() != d) {
        return Err(Error::DimensionMismatch("flags of different dimensions".into()));
    }
    if d < 2 {
        return Err(Error::InvalidInput("positivity needs d ≥ 2".into()));
    }
    Ok(d)
}

/// Linear map sending `f1` to the ascending and `f3` to the descending flag.
fn normalizer(f1: &Flag, f3: &Flag) -> Result<DMatrix<f64>> {
    let d = f1.dim();
    let mut m = DMatrix::zeros(d, d);
    for j in 1..=d {
        let v = meet(f1, f3, j);
        m.set_column(j - 1, &v);
    }
    m.try_inverse().ok_or(Error::NotTransverse)
}

/// `u` unitriangular with `u·(descending) = c·(descending)` as flags, from
/// the unpivoted factorization `w0·c = L·R`.
fn unipotent_chart(c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = c.nrows();
    let w = w0(d);
    let mut a = &w * c;
    let scale = a.amax();
    let mut l = DMatrix::identity(d, d);
    for k in 0..d {
        let p = a[(k, k)];
        if !(p.abs() > TRANSVERSE_TOL * scale) {
            return Err(Error::NotTransverse);
        }
        for i in k + 1..d {
            let f = a[(i, k)] / p;
            l[(i, k)] = f;
            for j in k..d {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    Ok(&w * l * &w)
}

fn sign_diagonals(d: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..1usize << (d - 1)).map(move |mask| {
        let mut s = vec![1.0; d];
        for (i, x) in s.iter_mut().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 1 {
                *x = -1.0;
            }
        }
        s
    })
}

fn conj_sign(u: &DMatrix<f64>, s: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)] * s[i] * s[j])
}

fn is_positive(u: &DMatrix<f64>) -> bool {
    match Unitriangular::from_upper(u.clone()) {
        Ok(x) => factorize(&x).is_ok(),
        Err(_) => false,
    }
}

/// Charts of `f2, f4, …` relative to the pair `(f1, f3)`.
fn charts(f1: &Flag, f3: &Flag, others: &[&Flag]) -> Result<Vec<DMatrix<f64>>> {
    let g = normalizer(f1, f3)?;
    others.iter().map(|f| unipotent_chart(&(&g * &f.basis))).collect()
}

pub fn triple_positive(f1: &Flag, f2: &Flag, f3: &Flag) -> Result<bool> {
    let d = check_dims(&[f1, f2, f3])?;
    for (a, b) in [(f1, f2), (f2, f3), (f1, f3)] {
        if !transverse(a, b) {
            return Err(Error::NotTransverse);
        }
    }
    let u = charts(f1, f3, &[f2])?.pop().expect("one chart");
    Ok(sign_diagonals(d).any(|s| is_positive(&conj_sign(&u, &s))))
}

/// `(E⁺, u·E⁻, E⁻, v⁻¹·E⁻)` with `u, v` positive for a common sign choice.
pub fn quadruple_positive(f1: &Flag, f2: &Flag, f3: &Flag, f4: &Flag) -> Result<bool> {
    let d = check_dims(&[f1, f2, f3, f4])?;
    let all = [f1, f2, f3, f4];
    for i in 0..4 {
        for j in i + 1..4 {
            if !transverse(all[i], all[j]) {
                return Err(Error::NotTransverse);
            }
        }
    }
    let c = charts(f1, f3, &[f2, f4])?;
    let u = &c[0];
    let v = match c[1].clone().try_inverse() {
        Some(x) => x,
        None => return Err(Error::NotTransverse),
    };
    Ok(sign_diagonals(d).any(|s| is_positive(&conj_sign(u, &s)) && is_positive(&conj_sign(&v, &s))))
}

/// Sampled limit map: the `k`-plane of the attracting flag of each sampled
/// fixed point's defining word, sorted by angle.
pub fn limit_curve(rep: &Representation, group: &GroupSpec, depth: usize, k: usize) -> Result<Vec<(BoundaryPoint, GrassPoint)>> {
    let sample = limit_sample(group, depth)?;
    let d = rep.dim;
    if k == 0 || k > d {
        return Err(Error::IndexRange { index: k, max: d });
    }
    // planes past half the dimension lose their smaller directions to
    // round-off, so take them as annihilators from the inverse word
    let one = |i: usize| -> Result<(BoundaryPoint, GrassPoint)> {
        let w = &sample.words[i];
        let plane = if k < d && 2 * k > d {
            let inv = rep.evaluate(&w.inverse())?;
            let low = attracting_grass(&inv.mat.transpose(), d - k)?;
            low.complement().ok_or_else(|| Error::DimensionMismatch("empty complement".into()))?
        } else {
            attracting_grass(&rep.evaluate(w)?.mat, k)?
        };
        Ok((sample.points[i], plane))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..sample.len()).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..sample.len()).map(one).collect()
    }
}

/// Sum of consecutive distances, closing edge included.
pub fn polygonal_length(curve: &[GrassPoint]) -> Result<f64> {
    let n = curve.len();
    if n < 2 {
        return Err(Error::InvalidInput("polygonal length needs at least two points".into()));
    }
    let mut s = 0.0;
    for i in 0..n {
        s += flag_distance(&curve[i], &curve[(i + 1) % n])?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2, PI};

    fn line(theta: f64) -> GrassPoint {
        GrassPoint::new(&DMatrix::from_column_slice(2, 1, &[theta.cos(), theta.sin()])).unwrap()
    }

    #[test]
    fn attracting_flag_examples() {
        let f = attracting_flag(&DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 2.0, 1.0]))).unwrap();
        assert!(f.distance(&Flag::ascending(3)).unwrap() < 1e-14);
        let h = sym_power_matrix(3, &Mobius::diag(E));
        assert!(attracting_flag(&h).unwrap().distance(&Flag::ascending(3)).unwrap() < 1e-14);
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.5, -1.0, 1.0, 0.0, 0.3, 0.2, 1.0]);
        let gi = g.clone().try_inverse().unwrap();
        let m = &g * DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 2.0, 1.0])) * gi;
        let expect = Flag::from_basis(&g).unwrap();
        assert!(attracting_flag(&m).unwrap().distance(&expect).unwrap() < 1e-12);
        let rot = sym_power_matrix(3, &Mobius::rotation(0.3));
        assert!(matches!(attracting_flag(&rot), Err(Error::SpectrumNotLoxodromic(_))));
    }

    #[test]
    fn canonical_form_is_unique() {
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.5, -1.0, 1.0, 0.0, 0.3, 0.2, 1.0]);
        let up = DMatrix::from_row_slice(3, 3, &[-2.0, 1.0, 3.0, 0.0, 0.5, -1.0, 0.0, 0.0, -4.0]);
        let a = Flag::from_basis(&g).unwrap();
        let b = Flag::from_basis(&(&g * up)).unwrap();
        assert!((a.basis() - b.basis()).amax() < 1e-13);
    }

    #[test]
    fn cartan_attractor_examples() {
        let sm = ScaledMatrix::from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![E * E, 1.0, 1.0 / (E * E)])));
        assert!(cartan_attractor(&sm).unwrap().distance(&Flag::ascending(3)).unwrap() < 1e-14);
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 1.0]);
        let svd_flag = cartan_attractor(&ScaledMatrix::from_matrix(a.clone())).unwrap();
        assert!(svd_flag.distance(&attracting_flag(&a).unwrap()).unwrap() < 1e-12);
        assert!(matches!(cartan_attractor(&ScaledMatrix::identity(3)), Err(Error::DegenerateGap(1))));
    }

    #[test]
    fn cartan_attractor_converges_to_eigenflag() {
        let g = Mobius::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let m = sym_power_matrix(3, &g);
        let target = attracting_flag(&m).unwrap();
        // gap per step is the translation length of g; the bottom singular
        // direction drowns in round-off first, so the full flag is checked at
        // half the depth
        for (depth, k) in [(30.0, 1), (15.0, 2)] {
            let n = (depth / g.translation_length()).ceil() as usize + 1;
            let mut sm = ScaledMatrix::identity(3);
            for _ in 0..n {
                sm.mul_right(&m);
            }
            let got = cartan_attractor(&sm).unwrap();
            for j in 1..=k {
                assert!(flag_distance(&got.grass(j).unwrap(), &target.grass(j).unwrap()).unwrap() < 1e-6);
            }
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(flag_distance(&line(0.4), &line(0.4)).unwrap(), 0.0);
        assert!((flag_distance(&line(0.0), &line(FRAC_PI_2)).unwrap() - 1.0).abs() < 1e-15);
        let mut last = 0.0;
        for k in 1..=20 {
            let th = k as f64 * FRAC_PI_2 / 20.0;
            let dd = flag_distance(&line(0.0), &line(th)).unwrap();
            assert!((dd - th.sin()).abs() < 1e-14);
            assert!(dd >= last);
            last = dd;
        }
        let plane = Flag::ascending(3).grass(2).unwrap();
        assert!(flag_distance(&line(0.0), &plane).is_err());
    }

    #[test]
    fn veronese_matches_ascending_at_infinity() {
        // the half-plane point ∞ sits at angle 0
        let f = veronese_flag(4, &BoundaryPoint::new(0.0)).unwrap();
        assert!(f.distance(&Flag::ascending(4)).unwrap() < 1e-13);
        let f = veronese_flag(4, &BoundaryPoint::new(PI)).unwrap();
        assert!(f.distance(&Flag::descending(4)).unwrap() < 1e-13);
    }

    #[test]
    fn triple_examples() {
        let f: Vec<_> = [-1.0, 0.0, 1.0].iter().map(|&t| veronese_flag_at(3, t).unwrap()).collect();
        assert!(triple_positive(&f[0], &f[1], &f[2]).unwrap());
        assert!(triple_positive(&f[2], &f[1], &f[0]).unwrap());
        assert!(matches!(triple_positive(&f[0], &f[0], &f[2]), Err(Error::NotTransverse)));
        // the chart of the middle flag has all 2×2 minors of one sign
        let g = normalizer(&f[0], &f[2]).unwrap();
        let u = unipotent_chart(&(&g * f[1].basis())).unwrap();
        let (a, b, c) = (u[(0, 1)], u[(1, 2)], u[(0, 2)]);
        assert!(a * b > 0.0 && c * a > 0.0 && (a * b - c) * c > 0.0);
    }

    #[test]
    fn quadruple_examples() {
        let f: Vec<_> = [-2.0, -1.0, 1.0, 2.0].iter().map(|&t| veronese_flag_at(3, t).unwrap()).collect();
        assert!(quadruple_positive(&f[0], &f[1], &f[2], &f[3]).unwrap());
        assert!(quadruple_positive(&f[3], &f[2], &f[1], &f[0]).unwrap());
        assert!(!quadruple_positive(&f[0], &f[2], &f[1], &f[3]).unwrap());
        assert!(matches!(quadruple_positive(&f[0], &f[1], &f[1], &f[3]), Err(Error::NotTransverse)));
    }

    #[test]
    fn polygonal_length_examples() {
        assert!((polygonal_length(&[line(0.0), line(FRAC_PI_2)]).unwrap() - 2.0).abs() < 1e-15);
        assert!(polygonal_length(&[line(0.0)]).is_err());
        let coarse: Vec<_> = (0..8).map(|k| line(k as f64 * PI / 8.0)).collect();
        let fine: Vec<_> = (0..16).map(|k| line(k as f64 * PI / 16.0)).collect();
        assert!(polygonal_length(&fine).unwrap() >= polygonal_length(&coarse).unwrap());
    }

    #[test]
    fn limit_curve_on_the_veronese_conic() {
        let g = GroupSpec::modular();
        let rep = Representation::sym_power(3, &g.generators).unwrap();
        let curve = limit_curve(&rep, &g, 6, 1).unwrap();
        for (x, p) in &curve {
            let v = p.basis.column(0);
            // ι₃ lines satisfy v₁² = 2·v₀v₂ in the √binomial basis
            assert!((v[1] * v[1] - 2.0 * v[0] * v[2]).abs() < 1e-8, "{v:?}");
            let ver = veronese_flag(3, x).unwrap().grass(1).unwrap();
            assert!(flag_distance(&ver, p).unwrap() < 1e-8);
        }
    }
}
