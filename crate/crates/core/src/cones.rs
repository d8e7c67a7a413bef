//! Rank of the positive-definite cone `Pos(n)`: the removable-index
//! algorithm, the witness family, random sampling and acuteness bounds.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};

/// Allowed negative eigenvalue for a PSD input.
pub const PSD_FLOOR: f64 = 1e-10;

/// Relative floor for positive definiteness of a sum.
pub const PD_REL: f64 = 1e-8;

/// Margin below 1 for `λ_max(B_k)`.
pub const REMOVABLE_MARGIN: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct PsdMatrix {
    m: DMatrix<f64>,
}

impl PsdMatrix {
    /// Symmetrizes by averaging and rejects eigenvalues below `−PSD_FLOOR`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        let s = (&m + m.transpose()) * 0.5;
        let lo = min_eigen(&s);
        if lo < -PSD_FLOOR {
            return Err(Error::InvalidInput(format!("matrix has eigenvalue {lo}")));
        }
        Ok(PsdMatrix { m: s })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// `E_{ii}` in dimension `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, i)] = 1.0;
        PsdMatrix { m }
    }
}

fn min_eigen(s: &DMatrix<f64>) -> f64 {
    s.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

fn max_eigen(s: &DMatrix<f64>) -> f64 {
    s.clone().symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn is_pd(s: &DMatrix<f64>) -> bool {
    min_eigen(s) > PD_REL * s.norm()
}

fn sum(a: &[PsdMatrix]) -> Result<DMatrix<f64>> {
    let n = a.first().ok_or_else(|| Error::InvalidInput("empty list".into()))?.dim();
    let mut s = DMatrix::zeros(n, n);
    for x in a {
        if x.dim() != n {
            return Err(Error::DimensionMismatch("summands of different sizes".into()));
        }
        s += &x.m;
    }
    Ok(s)
}

/// Smallest `k` with `λ_max(S^{−1/2} A_k S^{−1/2}) < 1`, so `S − A_k` stays
/// positive definite.
pub fn removable_index(a: &[PsdMatrix]) -> Result<usize> {
    let s = sum(a)?;
    if a.iter().any(|x| x.m.amax() == 0.0) {
        return Err(Error::InvalidInput("zero summand".into()));
    }
    let lo = min_eigen(&s);
    if !(lo > PD_REL * s.norm()) {
        return Err(Error::SumNotPd(lo));
    }
    let eig = s.clone().symmetric_eigen();
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let root = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    for (k, x) in a.iter().enumerate() {
        let b = &root * &x.m * &root;
        let b = (&b + b.transpose()) * 0.5;
        if max_eigen(&b) < 1.0 - REMOVABLE_MARGIN {
            let rest = &s - &x.m;
            if min_eigen(&rest) > 0.0 {
                return Ok(k);
            }
        }
    }
    Err(Error::NoneRemovable)
}

/// The family `E_{11}, …, E_{nn}`: the sum is `I`, dropping any term is singular.
pub fn rank_witness_check(n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let fam: Vec<_> = (0..n).map(|i| PsdMatrix::unit(n, i)).collect();
    let full = match sum(&fam) {
        Ok(s) => s,
        Err(_) => return false,
    };
    if !is_pd(&full) {
        return false;
    }
    for drop in 0..n {
        let rest: Vec<_> = fam.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, x)| x.clone()).collect();
        if n > 1 && is_pd(&sum(&rest).expect("same size")) {
            return false;
        }
    }
    matches!(removable_index(&fam), Err(Error::NoneRemovable))
}

/// `GᵀG` for a Gaussian `G` with `rank` rows.
pub fn wishart<R: Rng>(rng: &mut R, n: usize, rank: usize) -> PsdMatrix {
    let g = DMatrix::from_fn(rank, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    PsdMatrix::new(g.transpose() * g).expect("Gram matrix")
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One random `(n+1)`-tuple with positive definite sum; about a third of the
/// summands are rank-deficient.
pub fn sample_tuple(n: usize, seed: u64, trial: u64) -> Vec<PsdMatrix> {
    let mut rng = trial_rng(seed, trial);
    loop {
        let t: Vec<_> = (0..=n)
            .map(|_| {
                let rank = if n > 1 && rng.random_bool(1.0 / 3.0) { rng.random_range(1..n) } else { n };
                wishart(&mut rng, n, rank)
            })
            .collect();
        if is_pd(&sum(&t).expect("same size")) {
            return t;
        }
    }
}

/// Number of sampled tuples where no summand is removable.
pub fn rank_upper_sample(n: usize, trials: usize, seed: u64) -> usize {
    let fails = |t: usize| -> usize {
        let tuple = sample_tuple(n, seed, t as u64);
        match removable_index(&tuple) {
            Ok(k) => {
                let rest = sum(&tuple).expect("same size") - tuple[k].matrix();
                usize::from(min_eigen(&rest) <= 0.0)
            }
            Err(_) => 1,
        }
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(fails).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(fails).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparability {
    /// `‖Σ V_i‖_F / Σ ‖V_i‖_F`
    pub ratio: f64,
    /// `1/√n`, from `‖v‖_F ≤ tr v ≤ √n·‖v‖_F`.
    pub lower: f64,
    pub upper: f64,
}

pub fn acute_comparability(v: &[PsdMatrix]) -> Result<Comparability> {
    let s = sum(v)?;
    let mut total = 0.0;
    for x in v {
        let nx = x.m.norm();
        if nx == 0.0 {
            return Err(Error::InvalidInput("zero matrix".into()));
        }
        total += nx;
    }
    let n = s.nrows() as f64;
    Ok(Comparability { ratio: s.norm() / total, lower: 1.0 / n.sqrt(), upper: 1.0 })
}

/// Remove summands one at a time while the sum stays positive definite;
/// returns the surviving indices.
pub fn caratheodory_reduce(a: &[PsdMatrix]) -> Result<Vec<usize>> {
    let mut keep: Vec<usize> = (0..a.len()).collect();
    loop {
        let cur: Vec<_> = keep.iter().map(|&i| a[i].clone()).collect();
        match removable_index(&cur) {
            Ok(k) => {
                keep.remove(k);
            }
            Err(Error::NoneRemovable) => return Ok(keep),
            Err(e) => return Err(e),
        }
        if keep.len() == 1 {
            return Ok(keep);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> PsdMatrix {
        PsdMatrix::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(v.to_vec()))).unwrap()
    }

    #[test]
    fn removable_examples() {
        assert_eq!(removable_index(&[diag(&[1.0, 1.0]), diag(&[1.0, 0.0]), diag(&[0.0, 1.0])]).unwrap(), 0);
        assert_eq!(removable_index(&[diag(&[1.0]), diag(&[1.0])]).unwrap(), 0);
        assert!(matches!(removable_index(&[diag(&[1.0, 0.0]), diag(&[0.0, 1.0])]), Err(Error::NoneRemovable)));
        assert!(matches!(removable_index(&[diag(&[1.0, 0.0]), diag(&[2.0, 0.0])]), Err(Error::SumNotPd(_))));
    }

    #[test]
    fn witness_examples() {
        for n in 1..=8 {
            assert!(rank_witness_check(n), "n = {n}");
        }
    }

    #[test]
    fn sampling_examples() {
        assert_eq!(rank_upper_sample(1, 50, 3), 0);
        assert_eq!(rank_upper_sample(2, 500, 1), 0);
        assert_eq!(sample_tuple(3, 9, 4), sample_tuple(3, 9, 4));
        assert_ne!(sample_tuple(3, 9, 4), sample_tuple(3, 9, 5));
    }

    #[test]
    fn comparability_examples() {
        let c = acute_comparability(&[diag(&[2.0, 1.0])]).unwrap();
        assert!((c.ratio - 1.0).abs() < 1e-15);
        let c = acute_comparability(&[diag(&[1.0, 0.0]), diag(&[0.0, 1.0])]).unwrap();
        assert!((c.ratio - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(acute_comparability(&[diag(&[0.0, 0.0])]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let v = [wishart(&mut rng, 3, 3), wishart(&mut rng, 3, 2)];
            let c = acute_comparability(&v).unwrap();
            assert!(c.ratio >= c.lower - 1e-12 && c.ratio <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn iterated_removal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=4 {
            let a: Vec<_> = (0..n * (n + 1)).map(|_| wishart(&mut rng, n, 1)).collect();
            let keep = caratheodory_reduce(&a).unwrap();
            assert!(keep.len() <= n * (n + 1) / 2);
            let rest: Vec<_> = keep.iter().map(|&i| a[i].clone()).collect();
            assert!(is_pd(&sum(&rest).unwrap()));
        }
    }
}
