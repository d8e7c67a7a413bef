//! Shadow diagnostics along the limit map and box-counting dimension.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::cartan::{RootFunctional, Term};
use crate::error::{Error, Result};
use crate::flags::{flag_distance, limit_curve, GrassPoint};
use crate::hypdisc::{apply_isometry, coarse_endpoint_indices, dist_h, shadow, BoundaryPoint, DiscPoint, Mobius, Shadow};
use crate::reps::{LieType, Representation};
use crate::words::{enumerate_all, orbit_records, GroupSpec, Word};

/// Minimum separation of the coarse endpoints, as a fraction of the shadow width.
pub const MIN_SEPARATION_FRACTION: f64 = 0.05;

/// Sampled limit map into a Grassmannian, sorted by boundary angle.
#[derive(Clone, Debug)]
pub struct LimitData {
    pub points: Vec<BoundaryPoint>,
    pub planes: Vec<GrassPoint>,
}

impl LimitData {
    pub fn new(group: &GroupSpec, rep: &Representation, k: usize, depth: usize) -> Result<Self> {
        let curve = limit_curve(rep, group, depth, k)?;
        let (points, planes) = curve.into_iter().unzip();
        Ok(LimitData { points, planes })
    }

    pub fn empty() -> Self {
        LimitData { points: Vec::new(), planes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Grassmannian index `k` carrying the limit map for a single simple root.
pub fn grass_index(alpha: &RootFunctional, lie: LieType, dim: usize) -> Result<usize> {
    match alpha.terms.as_slice() {
        [(c, Term::Root(k))] if *c > 0.0 => Ok(*k),
        [(c, Term::Long)] if *c > 0.0 && lie == LieType::C => Ok(dim / 2),
        _ => Err(Error::InvalidInput(format!("'{alpha}' is not a single simple root"))),
    }
}

/// Orbit element with its displacement from `b0` and functional value.
#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub word: Word,
    pub m: Mobius,
    pub displacement: f64,
    pub alpha: f64,
}

/// Orbit points up to `max_len`; words whose Cartan projection is
/// ill-conditioned are dropped and counted.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub points: Vec<OrbitPoint>,
    pub ill_conditioned: usize,
}

pub fn orbit_points(group: &GroupSpec, rep: &Representation, alpha: &RootFunctional, max_len: usize, b0: &DiscPoint) -> Result<Orbit> {
    let elements = enumerate_all(group, max_len)?;
    let mut points = Vec::with_capacity(elements.len());
    let mut ill_conditioned = 0;
    for chunk in elements.chunks(4096) {
        match orbit_records(group, rep, chunk, b0) {
            Ok(records) => {
                for ((word, m), r) in chunk.iter().zip(records) {
                    points.push(OrbitPoint { word: word.clone(), m: *m, displacement: r.displacement, alpha: alpha.value(&r.kappa)? });
                }
            }
            Err(Error::IllConditioned(_)) => {
                for (word, m) in chunk {
                    match orbit_records(group, rep, std::slice::from_ref(&(word.clone(), *m)), b0) {
                        Ok(r) => points.push(OrbitPoint {
                            word: word.clone(),
                            m: *m,
                            displacement: r[0].displacement,
                            alpha: alpha.value(&r[0].kappa)?,
                        }),
                        Err(Error::IllConditioned(_)) => ill_conditioned += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Orbit { points, ill_conditioned })
}

/// Coarse endpoint indices of a shadow, the number of sample points inside,
/// and the counter-clockwise angle between the endpoints.
fn shadow_span(sh: &Shadow, pts: &[BoundaryPoint]) -> Option<(usize, usize, usize, f64)> {
    let (i, j) = coarse_endpoint_indices(sh, pts).ok()?;
    let count = if j >= i { j - i + 1 } else { pts.len() - i + j + 1 };
    let sep = (pts[j].theta - pts[i].theta).rem_euclid(TAU);
    Some((i, j, count, sep))
}

fn resolved(sh: &Shadow, pts: &[BoundaryPoint]) -> Option<(usize, usize, usize)> {
    let (i, j, count, sep) = shadow_span(sh, pts)?;
    let width = if sh.full { TAU } else { 2.0 * sh.half_angle };
    (count >= 2 && sep >= MIN_SEPARATION_FRACTION * width).then_some((i, j, count))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionRow {
    pub word: String,
    pub alpha: f64,
    pub distance: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionReport {
    pub radius: f64,
    pub rows: Vec<DistortionRow>,
    pub skipped: usize,
    /// Orbit words dropped before the scan.
    pub ill_conditioned: usize,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
}

fn summarize(radius: f64, rows: Vec<DistortionRow>, skipped: usize) -> DistortionReport {
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let spread = if rows.is_empty() { f64::NAN } else { max / min };
    DistortionReport { radius, rows, skipped, ill_conditioned: 0, min, max, spread }
}

/// Smallest radius on the grid for which every orbit point beyond it has a
/// resolved shadow.
pub fn choose_radius(orbit: &[OrbitPoint], data: &LimitData, b0: &DiscPoint, grid: &[f64]) -> Result<f64> {
    for &r in grid {
        let ok = orbit.iter().filter(|p| p.displacement > r).all(|p| {
            let z = apply_isometry(&p.m, b0);
            shadow(b0, &z, r).ok().and_then(|sh| resolved(&sh, &data.points)).is_some()
        });
        if ok {
            return Ok(r);
        }
    }
    Err(Error::InsufficientData("no radius on the grid resolves every shadow".into()))
}

/// Default radius grid.
pub fn radius_grid() -> Vec<f64> {
    (1..=40).map(|i| 0.25 * i as f64).collect()
}

/// One row per orbit point beyond `r`: flag distance between the images of
/// the coarse shadow endpoints, times `e^{α(κ)}`.
pub fn distortion_rows(group: &GroupSpec, orbit: &[OrbitPoint], data: &LimitData, b0: &DiscPoint, r: f64) -> Result<DistortionReport> {
    let mut rows = Vec::new();
    let mut skipped = 0;
    for p in orbit.iter().filter(|p| p.displacement > r) {
        let z = apply_isometry(&p.m, b0);
        let sh = shadow(b0, &z, r)?;
        match resolved(&sh, &data.points) {
            Some((i, j, _)) => {
                let distance = flag_distance(&data.planes[i], &data.planes[j])?;
                rows.push(DistortionRow {
                    word: group.format_word(&p.word),
                    alpha: p.alpha,
                    distance,
                    ratio: distance * p.alpha.exp(),
                });
            }
            None => skipped += 1,
        }
    }
    Ok(summarize(r, rows, skipped))
}

/// Regular-distortion scan over words up to `max_len`, with the limit map
/// sampled `extra` letters deeper. `radius = None` searches [`radius_grid`].
pub fn distortion_scan(
    group: &GroupSpec,
    rep: &Representation,
    alpha: &RootFunctional,
    radius: Option<f64>,
    max_len: usize,
    extra: usize,
) -> Result<DistortionReport> {
    let k = grass_index(alpha, rep.lie_type, rep.dim)?;
    let b0 = DiscPoint::origin();
    let orbit = orbit_points(group, rep, alpha, max_len, &b0)?;
    let data = LimitData::new(group, rep, k, max_len + extra)?;
    let r = match radius {
        Some(r) => r,
        None => choose_radius(&orbit.points, &data, &b0, &radius_grid())?,
    };
    let mut report = distortion_rows(group, &orbit.points, &data, &b0, r)?;
    report.ill_conditioned = orbit.ill_conditioned;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    /// Largest distance between orbit points of one annulus whose shadows meet.
    pub c0_min: f64,
    /// Meeting pairs farther apart than the supplied `C₀`.
    pub violations: usize,
    pub annuli: usize,
    pub intersecting_pairs: usize,
}

/// Bucket orbit points into annuli `n ≤ α < n+1` and look for meeting shadows.
pub fn shadow_separation_check(orbit: &[OrbitPoint], b0: &DiscPoint, r: f64, c0: f64) -> Result<SeparationReport> {
    let mut buckets: BTreeMap<i64, Vec<(Shadow, DiscPoint)>> = BTreeMap::new();
    for p in orbit {
        let z = apply_isometry(&p.m, b0);
        buckets.entry(p.alpha.floor() as i64).or_default().push((shadow(b0, &z, r)?, z));
    }
    let mut c0_min = 0.0f64;
    let mut violations = 0;
    let mut pairs = 0;
    for items in buckets.values() {
        for (a, b) in meeting_pairs(items.iter().map(|x| x.0).collect()) {
            pairs += 1;
            let d = dist_h(&items[a].1, &items[b].1);
            c0_min = c0_min.max(d);
            if d > c0 {
                violations += 1;
            }
        }
    }
    Ok(SeparationReport { c0_min, violations, annuli: buckets.len(), intersecting_pairs: pairs })
}

/// Index pairs of intersecting arcs, by a sweep over start angles.
fn meeting_pairs(arcs: Vec<Shadow>) -> Vec<(usize, usize)> {
    let n = arcs.len();
    let mut out = Vec::new();
    let full: Vec<usize> = (0..n).filter(|&i| arcs[i].full).collect();
    for &i in &full {
        for j in 0..n {
            if j != i && !(arcs[j].full && j < i) {
                out.push((i.min(j), i.max(j)));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| !arcs[i].full).collect();
    order.sort_by(|&a, &b| arcs[a].start().total_cmp(&arcs[b].start()));
    let starts: Vec<f64> = order.iter().map(|&i| arcs[i].start()).collect();
    for (p, &i) in order.iter().enumerate() {
        let end = starts[p] + 2.0 * arcs[i].half_angle;
        let mut q = p + 1;
        while q < order.len() && starts[q] <= end {
            let j = order[q];
            out.push((i.min(j), i.max(j)));
            q += 1;
        }
        if end >= TAU {
            // wrapped tail meets arcs starting near zero
            for (q2, &j) in order.iter().enumerate().take(p) {
                if starts[q2] > end - TAU {
                    break;
                }
                if q2 < p {
                    let pair = (i.min(j), i.max(j));
                    let start_j_end = starts[q2] + 2.0 * arcs[j].half_angle;
                    // skip pairs already found from j's own sweep
                    if start_j_end < starts[p] {
                        out.push(pair);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassReport {
    pub radius: f64,
    pub count: usize,
    pub skipped: usize,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
}

/// Polygonal mass of the limit map over each shadow, times `e^{α(κ)}`.
pub fn shadow_mass_scan(orbit: &[OrbitPoint], data: &LimitData, b0: &DiscPoint, r: f64) -> Result<MassReport> {
    let n = data.len();
    let mut vals = Vec::new();
    let mut skipped = 0;
    for p in orbit.iter().filter(|p| p.displacement > r) {
        let z = apply_isometry(&p.m, b0);
        let sh = shadow(b0, &z, r)?;
        match resolved(&sh, &data.points) {
            Some((i, _, count)) => {
                let mut mass = 0.0;
                for s in 0..count - 1 {
                    mass += flag_distance(&data.planes[(i + s) % n], &data.planes[(i + s + 1) % n])?;
                }
                vals.push(mass * p.alpha.exp());
            }
            None => skipped += 1,
        }
    }
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(MassReport { radius: r, count: vals.len(), skipped, min, max, spread: max / min })
}

/// Minimum sample size for a box-counting estimate.
pub const MIN_BOX_POINTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub value: f64,
    pub stderr: f64,
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
}

/// `count` scales spaced geometrically from `hi` down to `lo`.
pub fn geometric_scales(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| hi * (lo / hi).powf(i as f64 / (count - 1).max(1) as f64)).collect()
}

/// Greedy `ε`-net size of a Euclidean point cloud; points are visited in
/// order and centers are searched in a slab along the widest coordinate.
pub fn net_size(points: &[Vec<f64>], eps: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    let dim = points[0].len();
    let axis = (0..dim)
        .max_by(|&a, &b| {
            let spread = |c: usize| {
                let lo = points.iter().map(|p| p[c]).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p[c]).fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            };
            spread(a).total_cmp(&spread(b))
        })
        .unwrap_or(0);
    // centers keyed by a bucket of width eps along the axis
    let mut buckets: std::collections::HashMap<i64, Vec<usize>> = std::collections::HashMap::new();
    let mut centers = 0;
    let eps2 = eps * eps;
    for (i, p) in points.iter().enumerate() {
        let b = (p[axis] / eps).floor() as i64;
        let covered = (b - 1..=b + 1).any(|k| {
            buckets.get(&k).is_some_and(|cs| {
                cs.iter().any(|&c| points[c].iter().zip(p).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() <= eps2)
            })
        });
        if !covered {
            buckets.entry(b).or_default().push(i);
            centers += 1;
        }
    }
    centers
}

/// Slope of `log N(ε)` against `log(1/ε)`.
pub fn box_dimension(points: &[Vec<f64>], scales: &[f64]) -> Result<DimensionEstimate> {
    if points.len() < MIN_BOX_POINTS {
        return Err(Error::InsufficientData(format!("{} points, need {MIN_BOX_POINTS}", points.len())));
    }
    let lo = scales.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scales.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if scales.len() < 5 || !(lo > 0.0) || hi / lo < 100.0 * (1.0 - 1e-9) {
        return Err(Error::InsufficientScales(format!("{} scales spanning a factor {}", scales.len(), hi / lo)));
    }
    let counts: Vec<usize> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            scales.par_iter().map(|&e| net_size(points, e)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            scales.iter().map(|&e| net_size(points, e)).collect()
        }
    };
    let xs: Vec<f64> = scales.iter().map(|e| -e.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let m = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / m;
    let ym = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let b = sxy / sxx;
    let a = ym - b * xm;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    let stderr = (rss / (m - 2.0) / sxx).sqrt();
    Ok(DimensionEstimate { value: b.max(0.0), stderr, scales: scales.to_vec(), counts })
}

/// Embedding of planes by their projectors, scaled so Euclidean distance
/// equals [`flag_distance`].
pub fn projector_embedding(planes: &[GrassPoint]) -> Vec<Vec<f64>> {
    planes.iter().map(|p| p.projector().iter().map(|x| x / std::f64::consts::SQRT_2).collect()).collect()
}
