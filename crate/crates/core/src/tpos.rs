//! The totally positive unipotent semigroup `U^{>0}` of `SL(d)`.
//!
//! `x_i(t) = I + t·E_{i,i+1}`. For a reduced word `(i_1, …, i_l)` of the
//! longest permutation, `F(t_1, …, t_l) = x_{i_1}(t_1) ⋯ x_{i_l}(t_l)` maps
//! the positive orthant diffeomorphically onto `U^{>0}`.
//!
//! Factorization uses the standard word `(1; 2,1; 3,2,1; …)`. Its last block
//! `x_{d−1}(s_{d−1}) ⋯ x_1(s_1)` is the bidiagonal matrix `I + Σ s_k E_{k,k+1}`,
//! and the last column of `u⁻¹` is `B⁻¹e_d`, which gives
//!
//! ```text
//! y = u⁻¹ e_d,   s_k = −y_k / y_{k+1}
//! ```
//!
//! Peeling the block off leaves a unitriangular matrix of size `d − 1`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Multipliers at or below this are on the boundary of the positive cell.
pub const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Unitriangular {
    m: DMatrix<f64>,
}

impl Unitriangular {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let d = m.nrows();
        if m.ncols() != d || d == 0 {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        for i in 0..d {
            if m[(i, i)] != 1.0 {
                return Err(Error::InvalidInput(format!("diagonal entry {i} is {}", m[(i, i)])));
            }
            for j in 0..i {
                if m[(i, j)] != 0.0 {
                    return Err(Error::InvalidInput(format!("entry ({i},{j}) below the diagonal is nonzero")));
                }
            }
        }
        Ok(Unitriangular { m })
    }

    /// Force exact unit diagonal and zeros below it.
    pub fn from_upper(mut m: DMatrix<f64>) -> Result<Self> {
        let d = m.nrows();
        for i in 0..d {
            m[(i, i)] = 1.0;
            for j in 0..i {
                m[(i, j)] = 0.0;
            }
        }
        Unitriangular::new(m)
    }

    pub fn identity(d: usize) -> Self {
        Unitriangular { m: DMatrix::identity(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn mul(&self, o: &Unitriangular) -> Unitriangular {
        Unitriangular::from_upper(&self.m * &o.m).expect("product of unitriangular matrices")
    }

    pub fn inverse(&self) -> Unitriangular {
        let d = self.dim();
        let mut inv = DMatrix::identity(d, d);
        for c in 0..d {
            let col = back_substitute(&self.m, &DVector::from_fn(d, |i, _| if i == c { 1.0 } else { 0.0 }));
            inv.set_column(c, &col);
        }
        Unitriangular::from_upper(inv).expect("inverse of unitriangular")
    }
}

/// Solve `u y = b` for unit upper triangular `u`.
fn back_substitute(u: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let d = u.nrows();
    let mut y = b.clone();
    for i in (0..d).rev() {
        let mut s = y[i];
        for j in i + 1..d {
            s -= u[(i, j)] * y[j];
        }
        y[i] = s;
    }
    y
}

/// Reduced expression of the longest permutation in `S_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    d: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(d: usize, letters: Vec<usize>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("dimension {d} < 2")));
        }
        if letters.len() != d * (d - 1) / 2 {
            return Err(Error::InvalidInput(format!("word length {} != {}", letters.len(), d * (d - 1) / 2)));
        }
        let mut perm: Vec<usize> = (0..d).collect();
        for &i in &letters {
            if i == 0 || i >= d {
                return Err(Error::IndexRange { index: i, max: d - 1 });
            }
            perm.swap(i - 1, i);
        }
        if perm.iter().enumerate().any(|(k, &p)| p != d - 1 - k) {
            return Err(Error::InvalidInput("word does not evaluate to the longest permutation".into()));
        }
        Ok(ReducedWord { d, letters })
    }

    /// `(1; 2,1; 3,2,1; …; d−1,…,1)`.
    pub fn standard(d: usize) -> Self {
        let mut letters = Vec::new();
        for j in 1..d {
            for i in (1..=j).rev() {
                letters.push(i);
            }
        }
        ReducedWord { d, letters }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeCoords {
    pub params: Vec<f64>,
}

impl ConeCoords {
    pub fn new(params: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = params.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::NotPositive { stage: i, value: *v, marginal: v.abs() < POSITIVITY_TOL });
        }
        Ok(ConeCoords { params })
    }

    pub fn norm(&self) -> f64 {
        self.params.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `x_i(t) = I + t·E_{i,i+1}` in dimension `d`.
pub fn elementary(d: usize, i: usize, t: f64) -> Result<Unitriangular> {
    if i == 0 || i >= d {
        return Err(Error::IndexRange { index: i, max: d - 1 });
    }
    let mut m = DMatrix::identity(d, d);
    m[(i - 1, i)] = t;
    Ok(Unitriangular { m })
}

/// Ordered product of elementaries along the word.
pub fn f_gamma(w: &ReducedWord, v: &ConeCoords) -> Result<Unitriangular> {
    if v.params.len() != w.letters.len() {
        return Err(Error::DimensionMismatch(format!("{} parameters for a word of length {}", v.params.len(), w.letters.len())));
    }
    let d = w.d;
    let mut m = DMatrix::identity(d, d);
    for (&i, &t) in w.letters.iter().zip(&v.params) {
        if !(t > 0.0) {
            return Err(Error::NotPositive { stage: 0, value: t, marginal: t.abs() < POSITIVITY_TOL });
        }
        // right multiplication by x_i(t): column i+1 += t · column i
        for r in 0..d {
            m[(r, i)] += t * m[(r, i - 1)];
        }
    }
    Unitriangular::from_upper(m)
}

/// Cone coordinates of `u` for [`ReducedWord::standard`].
pub fn factorize(u: &Unitriangular) -> Result<ConeCoords> {
    let d = u.dim();
    let mut cur = u.m.clone();
    // blocks are peeled from the last one; block j holds d(j−1)/2… offsets
    let mut blocks: Vec<Vec<f64>> = Vec::new();
    let mut offset_end = d * (d - 1) / 2;
    for n in (2..=d).rev() {
        let sub = cur.view((0, 0), (n, n)).into_owned();
        let mut e = DVector::zeros(n);
        e[n - 1] = 1.0;
        let y = back_substitute(&sub, &e);
        let mut s = vec![0.0; n];
        // s_k for k = n−1 … 1, checked before each division
        for k in (1..n).rev() {
            let v = -y[k - 1] / y[k];
            // position of x_k(s_k) in the standard word: block (n−1) lists n−1, …, 1
            let stage = offset_end - k;
            if !(v > POSITIVITY_TOL) {
                return Err(Error::NotPositive { stage, value: v, marginal: v.abs() < POSITIVITY_TOL });
            }
            s[k] = v;
        }
        // cur ← cur · x_1(−s_1) ⋯ x_{n−1}(−s_{n−1})
        for k in 1..n {
            for r in 0..n {
                let t = cur[(r, k - 1)];
                cur[(r, k)] -= s[k] * t;
            }
        }
        blocks.push((1..n).rev().map(|k| s[k]).collect());
        offset_end -= n - 1;
    }
    blocks.reverse();
    Ok(ConeCoords { params: blocks.concat() })
}

/// `Σ` of the parameters sitting at letter `i`.
pub fn pi_beta(w: &ReducedWord, v: &ConeCoords, i: usize) -> Result<f64> {
    if i == 0 || i >= w.d {
        return Err(Error::IndexRange { index: i, max: w.d - 1 });
    }
    if v.params.len() != w.letters.len() {
        return Err(Error::DimensionMismatch("parameter count".into()));
    }
    Ok(w.letters.iter().zip(&v.params).filter(|(&l, _)| l == i).map(|(_, &t)| t).sum())
}

/// `log u = Σ_{k<d} (−1)^{k+1} (u − I)^k / k`, exact for nilpotent `u − I`.
pub fn log_unitriangular(u: &Unitriangular) -> DMatrix<f64> {
    let d = u.dim();
    let n = &u.m - DMatrix::<f64>::identity(d, d);
    let mut pow = n.clone();
    let mut out = DMatrix::zeros(d, d);
    for k in 1..d {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        out += &pow * (sign / k as f64);
        pow = &pow * &n;
    }
    out
}

/// `exp X = Σ_{k<d} X^k / k!` for strictly upper triangular `X`.
pub fn exp_nilpotent(x: &DMatrix<f64>) -> DMatrix<f64> {
    let d = x.nrows();
    let mut out = DMatrix::identity(d, d);
    let mut pow = DMatrix::identity(d, d);
    let mut fact = 1.0;
    for k in 1..d {
        pow = &pow * x;
        fact *= k as f64;
        out += &pow / fact;
    }
    out
}

/// Superdiagonal (grade-one) part of a matrix.
pub fn grade_one(x: &DMatrix<f64>) -> DMatrix<f64> {
    let d = x.nrows();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d - 1 {
        out[(i, i + 1)] = x[(i, i + 1)];
    }
    out
}

/// `‖log x − π(v)‖_F / ‖v‖²`, where `π(v) = Σ_i π_i(v) E_{i,i+1}`.
pub fn tangent_cone_ratio(w: &ReducedWord, v: &ConeCoords) -> Result<f64> {
    let x = f_gamma(w, v)?;
    let l = log_unitriangular(&x);
    let mut p = DMatrix::zeros(w.d, w.d);
    for i in 1..w.d {
        p[(i - 1, i)] = pi_beta(w, v, i)?;
    }
    let n = v.norm();
    Ok((l - p).norm() / (n * n))
}

/// Largest tangent-cone ratio over a sample of cone coordinates.
pub fn fit_tangent_constant(w: &ReducedWord, samples: &[ConeCoords]) -> Result<f64> {
    let mut c = 0.0f64;
    for v in samples {
        c = c.max(tangent_cone_ratio(w, v)?);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(d: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(d, d, v)
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary(3, 1, 0.0).unwrap(), Unitriangular::identity(3));
        assert_eq!(elementary(2, 1, 3.0).unwrap().matrix(), &mat(2, &[1.0, 3.0, 0.0, 1.0]));
        let p = elementary(3, 1, 1.0).unwrap().mul(&elementary(3, 1, 2.0).unwrap());
        assert_eq!(p, elementary(3, 1, 3.0).unwrap());
        assert!(elementary(3, 3, 1.0).is_err());
    }

    #[test]
    fn f_gamma_examples() {
        let w1 = ReducedWord::new(2, vec![1]).unwrap();
        assert_eq!(f_gamma(&w1, &ConeCoords::new(vec![2.5]).unwrap()).unwrap().matrix(), &mat(2, &[1.0, 2.5, 0.0, 1.0]));
        let w = ReducedWord::new(3, vec![1, 2, 1]).unwrap();
        let u = f_gamma(&w, &ConeCoords::new(vec![1.0, 2.0, 3.0]).unwrap()).unwrap();
        // x₁(1)·x₂(2) = [[1,1,2],[0,1,2],[0,0,1]], then column 2 += 3·column 1
        assert_eq!(u.matrix(), &mat(3, &[1.0, 4.0, 2.0, 0.0, 1.0, 2.0, 0.0, 0.0, 1.0]));
        let r = 2f64.sqrt();
        let u = f_gamma(&w, &ConeCoords::new(vec![1.0 / r, r, 1.0 / r]).unwrap()).unwrap();
        let expect = mat(3, &[1.0, r, 1.0, 0.0, 1.0, r, 0.0, 0.0, 1.0]);
        assert!((u.matrix() - expect).amax() < 1e-15);
        assert!(ConeCoords::new(vec![1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn reduced_word_validation() {
        assert!(ReducedWord::new(3, vec![2, 1, 2]).is_ok());
        assert!(ReducedWord::new(3, vec![1, 1, 2]).is_err());
        assert!(ReducedWord::new(3, vec![1, 2]).is_err());
        for d in 2..=7 {
            let w = ReducedWord::standard(d);
            assert!(ReducedWord::new(d, w.letters().to_vec()).is_ok());
        }
        assert_eq!(ReducedWord::standard(4).letters(), &[1, 2, 1, 3, 2, 1]);
    }

    #[test]
    fn factorize_examples() {
        let u = Unitriangular::new(mat(3, &[1.0, 4.0, 2.0, 0.0, 1.0, 2.0, 0.0, 0.0, 1.0])).unwrap();
        // t₂ = m₂₃, t₁ = m₁₃/m₂₃, t₃ = m₁₂ − m₁₃/m₂₃
        let (m12, m13, m23) = (4.0, 2.0, 2.0);
        let oracle = [m13 / m23, m23, m12 - m13 / m23];
        let c = factorize(&u).unwrap();
        for (a, b) in c.params.iter().zip(oracle) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(matches!(factorize(&Unitriangular::identity(3)), Err(Error::NotPositive { marginal: true, .. })));
        let edge = Unitriangular::new(mat(3, &[1.0, 1.0, 2.0, 0.0, 1.0, 2.0, 0.0, 0.0, 1.0])).unwrap();
        assert!(matches!(factorize(&edge), Err(Error::NotPositive { .. })));
        let neg = Unitriangular::new(mat(2, &[1.0, -1.0, 0.0, 1.0])).unwrap();
        assert!(matches!(factorize(&neg), Err(Error::NotPositive { stage: 0, marginal: false, .. })));
    }

    #[test]
    fn pi_beta_examples() {
        let w = ReducedWord::new(3, vec![1, 2, 1]).unwrap();
        let v = ConeCoords::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(pi_beta(&w, &v, 1).unwrap(), 4.0);
        assert_eq!(pi_beta(&w, &v, 2).unwrap(), 2.0);
        assert!(pi_beta(&w, &v, 3).is_err());
    }

    #[test]
    fn log_examples() {
        assert_eq!(log_unitriangular(&Unitriangular::identity(4)), DMatrix::zeros(4, 4));
        let u = Unitriangular::new(mat(2, &[1.0, 2.5, 0.0, 1.0])).unwrap();
        assert_eq!(log_unitriangular(&u), mat(2, &[0.0, 2.5, 0.0, 0.0]));
        let u = Unitriangular::new(mat(3, &[1.0, 4.0, 2.0, 0.0, 1.0, 2.0, 0.0, 0.0, 1.0])).unwrap();
        let l = log_unitriangular(&u);
        assert_eq!((l[(0, 1)], l[(1, 2)], l[(0, 2)]), (4.0, 2.0, -2.0));
        assert!((exp_nilpotent(&l) - u.matrix()).amax() < 1e-12);
    }
}
