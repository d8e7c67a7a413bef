//! Doubling a Schottky group across boundary geodesics: reflections, the
//! involution `x_I`, the extended representation and its enumeration.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::flags::{attracting_flag, real_eigen, Flag};
use crate::hypdisc::{apply_isometry, classify, dist_h, fixed_points, BoundaryPoint, Class, DiscPoint, Mobius, Orientation};
use crate::reps::{Representation, ScaledMatrix};
use crate::words::{pruned_ball, round_key, Ball, GroupSpec, Letter, Word, DEDUP_PRECISION};

/// Orientation-reversing involution fixing a geodesic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reflection {
    pub m: Mobius,
    pub axis: (BoundaryPoint, BoundaryPoint),
}

/// Reflection across the translation axis of a hyperbolic element.
pub fn reflection_across_axis(g: &Mobius) -> Result<Reflection> {
    if g.orientation() != Orientation::Plus || classify(g)? != Class::Hyperbolic {
        return Err(Error::NonHyperbolic);
    }
    let (att, rep) = fixed_points(g)?;
    let (p, q) = att.to_direction();
    let (mut r, mut s) = rep.to_direction();
    if p * s - q * r < 0.0 {
        r = -r;
        s = -s;
    }
    // e · diag(1, −1) · e⁻¹ for the eigenvector matrix e = [[p, r], [q, s]]
    let det = p * s - q * r;
    let m = Mobius::new((p * s + q * r) / det, -2.0 * p * r / det, 2.0 * q * s / det, -(q * r + p * s) / det)?;
    Ok(Reflection { m, axis: (att, rep) })
}

/// `diag(1, −1, 1, …)`; conjugation by it negates every superdiagonal root space.
pub fn x_involution(d: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_fn(d, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 }))
}

/// `ρ^D`: the base representation plus one image per boundary reflection.
#[derive(Clone, Debug)]
pub struct DoubledRep {
    pub base: Representation,
    pub boundary: Vec<Word>,
    pub reflections: Vec<Reflection>,
    pub refl_images: Vec<DMatrix<f64>>,
}

/// `R_b = g_b·x_I·g_b⁻¹`, where the columns of `g_b` are eigenvectors of
/// `ρ(β_b)` ordered by decreasing modulus.
pub fn reflection_image(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = m.nrows();
    let (_, g) = real_eigen(m, d)?;
    let gi = g.clone().try_inverse().ok_or_else(|| Error::SpectrumNotLoxodromic("singular eigenbasis".into()))?;
    Ok(&g * x_involution(d) * gi)
}

pub fn double_rep(group: &GroupSpec, rep: &Representation, boundary: &[Word]) -> Result<DoubledRep> {
    let mut reflections = Vec::new();
    let mut refl_images = Vec::new();
    for w in boundary {
        reflections.push(reflection_across_axis(&group.evaluate(w))?);
        refl_images.push(reflection_image(&rep.evaluate(w)?.mat)?);
    }
    check_axes(&reflections)?;
    Ok(DoubledRep { base: rep.clone(), boundary: boundary.to_vec(), reflections, refl_images })
}

fn check_axes(refl: &[Reflection]) -> Result<()> {
    let between = |x: f64, a: f64, b: f64| (x - a).rem_euclid(std::f64::consts::TAU) < (b - a).rem_euclid(std::f64::consts::TAU);
    for i in 0..refl.len() {
        for j in i + 1..refl.len() {
            let (a, b) = (refl[i].axis.0.theta, refl[i].axis.1.theta);
            let (c, e) = (refl[j].axis.0.theta, refl[j].axis.1.theta);
            let close = [c, e].iter().any(|x| (x - a).abs() < 1e-12 || (x - b).abs() < 1e-12);
            if close || between(c, a, b) != between(e, a, b) {
                return Err(Error::OverlappingAxes(format!("boundary axes {i} and {j} meet")));
            }
        }
    }
    Ok(())
}

impl DoubledRep {
    pub fn base_rank(&self) -> usize {
        self.base.generator_count()
    }

    /// Isometries for the extended alphabet: base generators, then reflections.
    pub fn mobius_generators(&self, group: &GroupSpec) -> Vec<Mobius> {
        let mut g = group.generators.clone();
        g.extend(self.reflections.iter().map(|r| r.m));
        g
    }

    /// Letters for enumeration; reflections are their own inverses.
    pub fn alphabet(&self) -> Vec<Letter> {
        let k = self.base_rank();
        let mut a: Vec<Letter> = (0..k).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect();
        a.extend((0..self.reflections.len()).map(|j| Letter::new(k + j, false)));
        a
    }

    pub fn image(&self, l: Letter) -> &DMatrix<f64> {
        let k = self.base_rank();
        if l.gen < k {
            self.base.image(l)
        } else {
            &self.refl_images[l.gen - k]
        }
    }

    pub fn evaluate(&self, w: &Word) -> ScaledMatrix {
        let mut sm = ScaledMatrix::identity(self.base.dim);
        for &l in w.letters() {
            sm.mul_right(self.image(l));
        }
        sm
    }

    pub fn reflection_count(&self, w: &Word) -> usize {
        w.letters().iter().filter(|l| l.gen >= self.base_rank()).count()
    }

    /// Base letters as in the group; reflections print as `x`, `y`, `z`, …
    pub fn format_word(&self, group: &GroupSpec, w: &Word) -> String {
        if w.is_empty() {
            return "e".into();
        }
        let k = self.base_rank();
        w.letters()
            .iter()
            .map(|&l| if l.gen < k { group.letter_char(l) } else { (b'x' + (l.gen - k) as u8 % 3) as char })
            .collect()
    }
}

/// Elements of `Γ^D` (even reflection count) up to word length `max_len`,
/// deduplicated by rounding hash; non-exhaustive by construction.
pub fn enumerate_doubled(group: &GroupSpec, dr: &DoubledRep, max_len: usize) -> Vec<(Word, Mobius, ScaledMatrix)> {
    let gens = dr.mobius_generators(group);
    let alphabet = dr.alphabet();
    let gen = |l: Letter| if l.inv { gens[l.gen].inverse() } else { gens[l.gen] };
    let mut seen: HashSet<[i64; 5]> = HashSet::new();
    seen.insert(round_key(&Mobius::identity(), DEDUP_PRECISION));
    let mut layer = vec![(Word::identity(), Mobius::identity())];
    let mut out = vec![(Word::identity(), Mobius::identity(), ScaledMatrix::identity(dr.base.dim))];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, m) in &layer {
            for &l in &alphabet {
                if w.last() == Some(l.inverse()) {
                    continue;
                }
                let child = m.compose(&gen(l)).renormalized();
                if !seen.insert(round_key(&child, DEDUP_PRECISION)) {
                    continue;
                }
                let mut cw = w.clone();
                cw.push(l);
                if child.orientation() == Orientation::Plus {
                    out.push((cw.clone(), child, dr.evaluate(&cw)));
                }
                next.push((cw, child));
            }
        }
        layer = next;
    }
    out
}

/// Displacement ball of `Γ^D` around `b0`, orientation-preserving elements only.
pub fn doubled_ball(group: &GroupSpec, dr: &DoubledRep, radius: f64, margin: f64, b0: &DiscPoint) -> Ball {
    let gens = dr.mobius_generators(group);
    let mut b = pruned_ball(&gens, &dr.alphabet(), false, b0, radius, margin, DEDUP_PRECISION);
    b.elements.retain(|(_, m)| m.orientation() == Orientation::Plus);
    b.exhaustive = false;
    b
}

/// Flags fixed by `R_b`: the attracting and repelling flags of `ρ(β_b)`.
pub fn boundary_flags(rep: &Representation, w: &Word) -> Result<(Flag, Flag)> {
    let m = rep.evaluate(w)?.mat;
    let inv = m.clone().try_inverse().ok_or_else(|| Error::SpectrumNotLoxodromic("singular image".into()))?;
    Ok((attracting_flag(&m)?, attracting_flag(&inv)?))
}

/// `max |R² − I|` after normalizing the sign.
pub fn involution_defect(r: &DMatrix<f64>) -> f64 {
    let d = r.nrows();
    let sq = r * r;
    let s = if sq[(0, 0)] < 0.0 { -1.0 } else { 1.0 };
    (sq * s - DMatrix::<f64>::identity(d, d)).amax()
}

/// Displacement of `b0` under an element; used to compare balls.
pub fn displacement(m: &Mobius, b0: &DiscPoint) -> f64 {
    dist_h(b0, &apply_isometry(m, b0))
}
