//! Cartan projections and linear functionals on them.
//!
//! For `g ∈ SL(d)` the Cartan vector is `(log σ₁, …, log σ_d)`, centered so
//! the entries sum to zero. Simple roots are consecutive gaps
//! `α_i = λ_i − λ_{i+1}` and fundamental weights are partial sums
//! `ω_k = λ_1 + … + λ_k`. In `Sp(2n)` the vector is `(λ₁, …, λ_n, −λ_n, …, −λ₁)`
//! and the long root is `2λ_n`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::reps::{LieType, Representation, ScaledMatrix};
use crate::words::Word;

/// Largest singular value ratio accepted by [`cartan_projection`].
pub const MAX_CONDITION: f64 = 1e14;

/// Largest pairing defect `|λ_i + λ_{2n+1−i}|` accepted for C-type input.
pub const PAIRING_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CartanVector {
    #[serde(skip)]
    pub lie_type: LieType,
    pub lambdas: Vec<f64>,
}

impl CartanVector {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        match self.lie_type {
            LieType::A => self.dim() - 1,
            LieType::C => self.dim() / 2,
        }
    }

    /// `α_i`, 1-based. In type C, `i = n` is the long root `2λ_n`.
    pub fn root_value(&self, i: usize) -> Result<f64> {
        let r = self.rank();
        if i == 0 || i > r {
            return Err(Error::IndexRange { index: i, max: r });
        }
        let l = &self.lambdas;
        Ok(match self.lie_type {
            LieType::C if i == r => 2.0 * l[r - 1],
            _ => l[i - 1] - l[i],
        })
    }

    /// `ω_k = λ_1 + … + λ_k`, 1-based.
    pub fn weight_value(&self, k: usize) -> Result<f64> {
        let r = self.rank();
        if k == 0 || k > r {
            return Err(Error::IndexRange { index: k, max: r });
        }
        Ok(self.lambdas[..k].iter().sum())
    }

    pub fn long_root(&self) -> Result<f64> {
        match self.lie_type {
            LieType::C => self.root_value(self.rank()),
            LieType::A => Err(Error::TypeMismatch("the long root needs a C-type vector".into())),
        }
    }
}

fn sorted_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn cartan_projection(sm: &ScaledMatrix, lie_type: LieType) -> Result<CartanVector> {
    let d = sm.dim();
    let s = sorted_singular_values(&sm.mat);
    let (top, bottom) = (s[0], s[d - 1]);
    if !(bottom > 0.0) || top / bottom > MAX_CONDITION {
        return Err(Error::IllConditioned(format!("singular value ratio {:e}", top / bottom)));
    }
    let logs: Vec<f64> = s.iter().map(|x| x.ln()).collect();
    // centering by the tracked determinant keeps the large singular values
    // exact even when the small ones are lost to round-off
    let exact = sm.log_det.is_finite();
    let mean = if exact {
        sm.log_det / d as f64 - sm.log_scale()
    } else {
        logs.iter().sum::<f64>() / d as f64
    };
    let mut lambdas: Vec<f64> = logs.iter().map(|x| x - mean).collect();
    if exact {
        // the smallest singular value carries the largest error; the zero sum pins it
        lambdas[d - 1] = -lambdas[..d - 1].iter().sum::<f64>();
    }
    if lie_type == LieType::C {
        if d % 2 != 0 {
            return Err(Error::DimensionMismatch(format!("C-type needs even dimension, got {d}")));
        }
        for i in 0..d / 2 {
            let defect = lambdas[i] + lambdas[d - 1 - i];
            if defect.abs() > PAIRING_TOL {
                return Err(Error::IllConditioned(format!("symplectic pairing defect {defect:e}")));
            }
            // the upper half is the accurate one once the centering is exact
            let v = if exact { lambdas[i] } else { 0.5 * (lambdas[i] - lambdas[d - 1 - i]) };
            lambdas[i] = v;
            lambdas[d - 1 - i] = -v;
        }
    }
    Ok(CartanVector { lie_type, lambdas })
}

/// Cartan projection of a plain matrix.
pub fn cartan_of(m: &DMatrix<f64>, lie_type: LieType) -> Result<CartanVector> {
    cartan_projection(&ScaledMatrix::from_matrix(m.clone()), lie_type)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    Root(usize),
    Weight(usize),
    Long,
}

/// `φ = Σ c·term`, parsed from `a1`, `w2`, `2*a1+1*a3` or `long`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootFunctional {
    pub terms: Vec<(f64, Term)>,
}

impl RootFunctional {
    pub fn root(i: usize) -> Self {
        RootFunctional { terms: vec![(1.0, Term::Root(i))] }
    }

    pub fn weight(k: usize) -> Self {
        RootFunctional { terms: vec![(1.0, Term::Weight(k))] }
    }

    pub fn long() -> Self {
        RootFunctional { terms: vec![(1.0, Term::Long)] }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn is_root_combination(&self) -> bool {
        self.terms.iter().all(|(_, t)| !matches!(t, Term::Weight(_)))
    }

    /// `a(φ) = Σ c_α` for root combinations.
    pub fn a_phi(&self) -> Option<f64> {
        if self.is_root_combination() {
            Some(self.terms.iter().map(|(c, _)| c).sum())
        } else {
            None
        }
    }

    /// `φ̂ = φ / a(φ)`.
    pub fn normalized(&self) -> Result<RootFunctional> {
        let a = self.a_phi().ok_or_else(|| Error::TypeMismatch("a(φ) is defined for root combinations only".into()))?;
        Ok(RootFunctional { terms: self.terms.iter().map(|&(c, t)| (c / a, t)).collect() })
    }

    pub fn value(&self, kv: &CartanVector) -> Result<f64> {
        let mut v = 0.0;
        for &(c, t) in &self.terms {
            v += c * match t {
                Term::Root(i) => kv.root_value(i)?,
                Term::Weight(k) => kv.weight_value(k)?,
                Term::Long => kv.long_root()?,
            };
        }
        Ok(v)
    }

    /// Check every index against a representation's root system.
    pub fn validate(&self, lie_type: LieType, dim: usize) -> Result<()> {
        let probe = CartanVector { lie_type, lambdas: vec![0.0; dim] };
        self.value(&probe).map(|_| ())
    }
}

impl fmt::Display for RootFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |t: &Term| match t {
            Term::Root(i) => format!("a{i}"),
            Term::Weight(k) => format!("w{k}"),
            Term::Long => "long".to_string(),
        };
        if let [(c, t)] = self.terms.as_slice() {
            if *c == 1.0 {
                return write!(f, "{}", term(t));
            }
        }
        let parts: Vec<String> = self.terms.iter().map(|(c, t)| format!("{c}*{}", term(t))).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for RootFunctional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("functional '{s}': {m}"));
        let mut terms = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let (c, name) = match part.split_once('*') {
                Some((c, n)) => (c.trim().parse::<f64>().map_err(|_| bad("bad coefficient"))?, n.trim()),
                None => (1.0, part),
            };
            if !(c >= 0.0) || !c.is_finite() {
                return Err(bad("coefficients must be nonnegative"));
            }
            let t = if name == "long" {
                Term::Long
            } else if let Some(i) = name.strip_prefix('a') {
                Term::Root(i.parse().map_err(|_| bad("bad root index"))?)
            } else if let Some(k) = name.strip_prefix('w') {
                Term::Weight(k.parse().map_err(|_| bad("bad weight index"))?)
            } else {
                return Err(bad("unknown term"));
            };
            terms.push((c, t));
        }
        if terms.iter().all(|(c, _)| *c == 0.0) {
            return Err(bad("all coefficients are zero"));
        }
        Ok(RootFunctional { terms })
    }
}

/// Long root of the `Sp(2n)` product against the minimum of the factor roots.
pub fn sp_long_root_min_check(reps: &[Representation], w: &Word) -> Result<(f64, f64)> {
    let prod = Representation::sp_product(reps)?;
    let lhs = cartan_projection(&prod.evaluate(w)?, LieType::C)?.long_root()?;
    let mut rhs = f64::INFINITY;
    for r in reps {
        let v = cartan_projection(&r.evaluate(w)?, LieType::A)?.root_value(1)?;
        rhs = rhs.min(v);
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypdisc::Mobius;
    use crate::words::Letter;

    fn kv(l: &[f64]) -> CartanVector {
        CartanVector { lie_type: LieType::A, lambdas: l.to_vec() }
    }

    #[test]
    fn projection_examples() {
        let e2 = 2f64.exp();
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![e2, 1.0, 1.0 / e2]));
        let k = cartan_of(&m, LieType::A).unwrap();
        for (a, b) in k.lambdas.iter().zip([2.0, 0.0, -2.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let k2 = cartan_of(&(m * 7.5), LieType::A).unwrap();
        for (a, b) in k.lambdas.iter().zip(&k2.lambdas) {
            assert!((a - b).abs() < 1e-14);
        }
        // eigenvalues of gᵀg are (7 ± √45)/2
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let oracle = 0.5 * ((7.0 + 45f64.sqrt()) / 2.0).ln();
        let k = cartan_of(&g, LieType::A).unwrap();
        assert!((k.lambdas[0] - oracle).abs() < 1e-14);
        assert!((k.lambdas[0] - 0.962424).abs() < 1e-6);
        assert!((k.lambdas[1] + oracle).abs() < 1e-14);
    }

    #[test]
    fn ill_conditioned_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-15]);
        assert!(matches!(cartan_of(&m, LieType::A), Err(Error::IllConditioned(_))));
        let nonsymp = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 1.0, 1.0]));
        assert!(matches!(cartan_of(&nonsymp, LieType::C), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn root_and_weight_examples() {
        let k = kv(&[2.0, 0.0, -2.0]);
        assert_eq!(k.root_value(1).unwrap(), 2.0);
        assert_eq!(k.root_value(2).unwrap(), 2.0);
        assert!(matches!(k.root_value(3), Err(Error::IndexRange { .. })));
        assert!(matches!(k.root_value(0), Err(Error::IndexRange { .. })));
        assert_eq!(k.weight_value(1).unwrap(), 2.0);
        assert_eq!(k.weight_value(2).unwrap(), 2.0);
        let c = CartanVector { lie_type: LieType::C, lambdas: vec![3.0, 1.0, -1.0, -3.0] };
        assert_eq!(c.long_root().unwrap(), 2.0);
        assert_eq!(c.root_value(2).unwrap(), 2.0);
        assert_eq!(c.root_value(1).unwrap(), 2.0);
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let kg = cartan_of(&g, LieType::A).unwrap();
        assert!((kg.weight_value(1).unwrap() - 0.962424).abs() < 1e-6);
    }

    #[test]
    fn functional_examples() {
        let k = kv(&[2.0, 0.0, -2.0]);
        let a1: RootFunctional = "a1".parse().unwrap();
        assert_eq!(a1.value(&k).unwrap(), 2.0);
        let sum: RootFunctional = "a1+a2".parse().unwrap();
        assert_eq!(sum.value(&k).unwrap(), 4.0);
        assert_eq!(sum.a_phi(), Some(2.0));
        assert_eq!(sum.normalized().unwrap().value(&k).unwrap(), 2.0);
        let w1: RootFunctional = "w1".parse().unwrap();
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        assert!((w1.value(&cartan_of(&g, LieType::A).unwrap()).unwrap() - 0.962424).abs() < 1e-6);
        let long: RootFunctional = "long".parse().unwrap();
        assert!(matches!(long.value(&k), Err(Error::TypeMismatch(_))));
        let mixed: RootFunctional = "2*a1+1*a3".parse().unwrap();
        assert_eq!(mixed.to_string(), "2*a1+1*a3");
        assert_eq!(mixed.a_phi(), Some(3.0));
        assert!("a1+-1*a2".parse::<RootFunctional>().is_err());
        assert!("x3".parse::<RootFunctional>().is_err());
        assert!("0*a1".parse::<RootFunctional>().is_err());
    }

    #[test]
    fn min_formula_examples() {
        let e = std::f64::consts::E;
        let w = Word::from_letters(vec![Letter::new(0, false)]);
        let r1 = Representation::fuchsian(&[Mobius::new(2.0, 1.0, 1.0, 1.0).unwrap()]);
        let (l, r) = sp_long_root_min_check(&[r1], &w).unwrap();
        assert!((l - r).abs() < 1e-14);
        let a = Representation::fuchsian(&[Mobius::diag(e * e)]);
        let b = Representation::fuchsian(&[Mobius::diag(e)]);
        let (l, r) = sp_long_root_min_check(&[a, b], &w).unwrap();
        assert!((l - 2.0).abs() < 1e-13 && (r - 2.0).abs() < 1e-13);
    }
}
