//! Representations of finitely generated groups and overflow-free evaluation
//! of long words.

use std::f64::consts::LN_2;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hypdisc::Mobius;
use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LieType {
    /// `SL(d)`, root system `A_{d−1}`.
    A,
    /// `Sp(2n)`, root system `C_n`.
    C,
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieType::A => write!(f, "A"),
            LieType::C => write!(f, "C"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RepKind {
    SymPower(usize),
    SpProduct(usize),
    Custom,
}

/// Standard symplectic form `[[0, I], [−I, 0]]`.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

fn binom(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// Coefficients of `(p u + q v)^n` in the basis `u^{n−i} v^i`.
fn binomial_power(p: f64, q: f64, n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; out.len() + 1];
        for (i, &c) in out.iter().enumerate() {
            next[i] += c * p;
            next[i + 1] += c * q;
        }
        out = next;
    }
    out
}

/// The irreducible image `ι_d(g)` of a 2×2 matrix, acting on binary forms of
/// degree `d − 1` in the basis `√C(d−1,k) x^{d−1−k} y^k`.
pub fn sym_power_matrix(d: usize, g: &Mobius) -> DMatrix<f64> {
    let m = d - 1;
    let [a, b, c, dd] = g.entries();
    let mut out = DMatrix::zeros(d, d);
    for k in 0..d {
        let left = binomial_power(a, c, m - k);
        let right = binomial_power(b, dd, k);
        let mut col = vec![0.0; d];
        for (i, &l) in left.iter().enumerate() {
            for (j, &r) in right.iter().enumerate() {
                col[i + j] += l * r;
            }
        }
        for j in 0..d {
            out[(j, k)] = col[j] * (binom(m, k) / binom(m, j)).sqrt();
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Representation {
    pub dim: usize,
    pub lie_type: LieType,
    pub kind: RepKind,
    pub label: String,
    /// False for custom matrices, whose positivity is never certified.
    pub verified: bool,
    images: Vec<DMatrix<f64>>,
    inverses: Vec<DMatrix<f64>>,
    mobius: Vec<Mobius>,
}

impl Representation {
    /// `ι_d` applied to a set of generators.
    pub fn sym_power(d: usize, gens: &[Mobius]) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("symmetric power needs d >= 2, got {d}")));
        }
        Ok(Representation {
            dim: d,
            lie_type: LieType::A,
            kind: RepKind::SymPower(d),
            label: format!("iota_{d}"),
            verified: true,
            images: gens.iter().map(|g| sym_power_matrix(d, g)).collect(),
            inverses: gens.iter().map(|g| sym_power_matrix(d, &g.inverse())).collect(),
            mobius: gens.to_vec(),
        })
    }

    /// Raw generator images, rescaled to unit |det|.
    pub fn custom(lie_type: LieType, images: Vec<DMatrix<f64>>) -> Result<Self> {
        let dim = images.first().map(|m| m.nrows()).ok_or_else(|| Error::InvalidInput("no generator images".into()))?;
        let mut scaled = Vec::with_capacity(images.len());
        let mut inverses = Vec::with_capacity(images.len());
        for (i, m) in images.into_iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch(format!("image {i} is {}x{}, expected {dim}x{dim}", m.nrows(), m.ncols())));
            }
            let det = m.determinant();
            if !det.is_finite() || det.abs() < 1e-300 {
                return Err(Error::InvalidInput(format!("image {i} is singular")));
            }
            let m = m / det.abs().powf(1.0 / dim as f64);
            let inv = m.clone().try_inverse().ok_or_else(|| Error::InvalidInput(format!("image {i} is singular")))?;
            scaled.push(m);
            inverses.push(inv);
        }
        if lie_type == LieType::C {
            if dim % 2 != 0 {
                return Err(Error::DimensionMismatch(format!("C-type needs even dimension, got {dim}")));
            }
            let j = symplectic_form(dim / 2);
            for (i, m) in scaled.iter().enumerate() {
                let err = (m.transpose() * &j * m - &j).amax();
                if err > 1e-9 {
                    return Err(Error::InvalidInput(format!("image {i} is not symplectic (defect {err:e})")));
                }
            }
        }
        Ok(Representation {
            dim,
            lie_type,
            kind: RepKind::Custom,
            label: "custom (unverified representation)".into(),
            verified: false,
            images: scaled,
            inverses,
            mobius: Vec::new(),
        })
    }

    /// 2×2 representation given directly by Mobius generators.
    pub fn fuchsian(gens: &[Mobius]) -> Self {
        let mut r = Representation::sym_power(2, gens).expect("d = 2");
        r.label = "fuchsian".into();
        r
    }

    /// Block embedding of `n` two-dimensional representations into `Sp(2n)`.
    pub fn sp_product(reps: &[Representation]) -> Result<Self> {
        let n = reps.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty product".into()));
        }
        let k = reps[0].generator_count();
        for (i, r) in reps.iter().enumerate() {
            if r.dim != 2 {
                return Err(Error::DimensionMismatch(format!("factor {i} has dimension {}", r.dim)));
            }
            if r.generator_count() != k {
                return Err(Error::DimensionMismatch(format!("factor {i} has {} generators, expected {k}", r.generator_count())));
            }
            for (j, m) in r.images.iter().enumerate() {
                if (m.determinant() - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidInput(format!("factor {i} generator {j} does not have determinant 1")));
                }
            }
        }
        let block = |pick: &dyn Fn(&Representation) -> &DMatrix<f64>| {
            let mut out = DMatrix::zeros(2 * n, 2 * n);
            for (i, r) in reps.iter().enumerate() {
                let m = pick(r);
                out[(i, i)] = m[(0, 0)];
                out[(i, n + i)] = m[(0, 1)];
                out[(n + i, i)] = m[(1, 0)];
                out[(n + i, n + i)] = m[(1, 1)];
            }
            out
        };
        let images = (0..k).map(|g| block(&|r: &Representation| &r.images[g])).collect();
        let inverses = (0..k).map(|g| block(&|r: &Representation| &r.inverses[g])).collect();
        Ok(Representation {
            dim: 2 * n,
            lie_type: LieType::C,
            kind: RepKind::SpProduct(n),
            label: format!("sp_product_{n}"),
            verified: reps.iter().all(|r| r.verified),
            images,
            inverses,
            mobius: Vec::new(),
        })
    }

    pub fn generator_count(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, l: Letter) -> &DMatrix<f64> {
        if l.inv {
            &self.inverses[l.gen]
        } else {
            &self.images[l.gen]
        }
    }

    pub fn images(&self) -> &[DMatrix<f64>] {
        &self.images
    }

    /// Direct image of a Mobius element, available for symmetric powers.
    pub fn image_of_mobius(&self, g: &Mobius) -> Option<DMatrix<f64>> {
        match self.kind {
            RepKind::SymPower(d) => Some(sym_power_matrix(d, g)),
            _ => None,
        }
    }

    pub fn evaluate(&self, w: &Word) -> Result<ScaledMatrix> {
        self.evaluate_with(w, Precision::Standard)
    }

    pub fn evaluate_with(&self, w: &Word, prec: Precision) -> Result<ScaledMatrix> {
        for l in w.letters() {
            if l.gen >= self.images.len() {
                return Err(Error::InvalidInput(format!("letter {} has no image", l.gen)));
            }
        }
        Ok(match prec {
            Precision::Standard => {
                let mut acc = ScaledMatrix::identity(self.dim);
                for &l in w.letters() {
                    acc.mul_right(self.image(l));
                }
                acc
            }
            Precision::Compensated => {
                let mut acc = DoubleWordMatrix::identity(self.dim);
                for &l in w.letters() {
                    acc.mul_right(self.image(l));
                }
                acc.to_scaled()
            }
        })
    }

    /// Generators as Mobius elements when the representation came from them.
    pub fn source_generators(&self) -> &[Mobius] {
        &self.mobius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Standard,
    /// Double-word products; intended for words beyond a few hundred letters.
    Compensated,
}

/// `true matrix = 2^{exp2} · mat` with `max |mat_ij| ∈ [1/2, 2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMatrix {
    pub mat: DMatrix<f64>,
    pub exp2: i64,
    /// `log |det|` of the true matrix, accumulated factor by factor; NaN when
    /// unknown. Round-off in long products hides the small singular values,
    /// but not this.
    pub log_det: f64,
}

fn log_abs_det(m: &DMatrix<f64>) -> f64 {
    let l = m.clone().determinant().abs().ln();
    if l.is_finite() {
        l
    } else {
        f64::NAN
    }
}

impl ScaledMatrix {
    pub fn identity(d: usize) -> Self {
        ScaledMatrix { mat: DMatrix::identity(d, d), exp2: 0, log_det: 0.0 }
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Self {
        let log_det = log_abs_det(&m);
        let mut s = ScaledMatrix { mat: m, exp2: 0, log_det };
        s.renormalize();
        s
    }

    pub fn log_scale(&self) -> f64 {
        self.exp2 as f64 * LN_2
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Scale by an exact power of two so the sup norm lands in `[2^{−1/2}, 2^{1/2}]`.
    pub fn renormalize(&mut self) {
        let sup = self.mat.amax();
        if sup == 0.0 || !sup.is_finite() {
            return;
        }
        let k = sup.log2().round() as i32;
        if k != 0 {
            self.mat *= 2f64.powi(-k);
            self.exp2 += k as i64;
        }
    }

    pub fn mul_right(&mut self, m: &DMatrix<f64>) {
        self.log_det += log_abs_det(m);
        self.mat = &self.mat * m;
        self.renormalize();
    }

    pub fn mul(&self, o: &ScaledMatrix) -> ScaledMatrix {
        let mut out = ScaledMatrix { mat: &self.mat * &o.mat, exp2: self.exp2 + o.exp2, log_det: self.log_det + o.log_det };
        out.renormalize();
        out
    }

    /// The unscaled matrix; may overflow for long words.
    pub fn true_matrix(&self) -> DMatrix<f64> {
        &self.mat * 2f64.powi(self.exp2 as i32)
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Matrix with entries `hi + lo` (double-word), renormalized by powers of two.
struct DoubleWordMatrix {
    hi: DMatrix<f64>,
    lo: DMatrix<f64>,
    exp2: i64,
    log_det: f64,
}

impl DoubleWordMatrix {
    fn identity(d: usize) -> Self {
        DoubleWordMatrix { hi: DMatrix::identity(d, d), lo: DMatrix::zeros(d, d), exp2: 0, log_det: 0.0 }
    }

    fn mul_right(&mut self, m: &DMatrix<f64>) {
        self.log_det += log_abs_det(m);
        let d = self.hi.nrows();
        let mut hi = DMatrix::zeros(d, d);
        let mut lo = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let (mut s, mut e) = (0.0, 0.0);
                for k in 0..d {
                    let (p, pe) = two_prod(self.hi[(i, k)], m[(k, j)]);
                    let (t, te) = two_sum(s, p);
                    s = t;
                    e += te + pe + self.lo[(i, k)] * m[(k, j)];
                }
                let (h, l) = two_sum(s, e);
                hi[(i, j)] = h;
                lo[(i, j)] = l;
            }
        }
        self.hi = hi;
        self.lo = lo;
        let sup = self.hi.amax();
        if sup > 0.0 && sup.is_finite() {
            let k = sup.log2().round() as i32;
            if k != 0 {
                let f = 2f64.powi(-k);
                self.hi *= f;
                self.lo *= f;
                self.exp2 += k as i64;
            }
        }
    }

    fn to_scaled(&self) -> ScaledMatrix {
        let mut s = ScaledMatrix { mat: &self.hi + &self.lo, exp2: self.exp2, log_det: self.log_det };
        s.renormalize();
        s
    }
}
