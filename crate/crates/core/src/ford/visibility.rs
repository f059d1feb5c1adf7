use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::group::{VerticalDomain, Word, WordElement};
use crate::moebius::{IsometricSphere, GEOMETRIC_TOLERANCE};

use super::arrangement::{clip, disk_overlap_area, inscribed_polygon, polygon_centroid, square, HalfPlane};

/// A sphere is visible when its exposed region covers more than this
/// fraction of its boundary disk.
pub const EXPOSED_FRACTION_THRESHOLD: f64 = 1e-12;

const WITNESS_POLYGON_SIDES: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VisibilityStatus {
    Visible,
    Invisible,
}

#[derive(Clone, Debug)]
pub struct VisibilityVerdict {
    pub element: WordElement,
    pub status: VisibilityStatus,
    /// Center lies in the fundamental parallelogram.
    pub primary: bool,
    /// Area of the part of the boundary disk where this hemisphere is on top.
    pub exposed_area: f64,
    pub witnesses: Vec<Complex64>,
    /// Smallest height gap between this sphere and any other at the witness.
    pub witness_margin: Option<f64>,
}

impl VisibilityVerdict {
    pub fn sphere(&self) -> &IsometricSphere {
        &self.element.sphere
    }

    pub fn is_visible(&self) -> bool {
        self.status == VisibilityStatus::Visible
    }
}

/// Pointwise maximum of the hemispheres over `x`, with the indices of the
/// spheres within tolerance of it. Spheres whose open disk misses `x` never
/// attain it.
pub fn envelope_height(spheres: &[IsometricSphere], x: Complex64) -> (f64, Vec<usize>) {
    let heights: Vec<Option<f64>> = spheres
        .iter()
        .map(|s| {
            let rest = s.radius * s.radius - (x - s.center).norm_sqr();
            (rest > 0.0).then(|| rest.sqrt())
        })
        .collect();
    let top = heights.iter().flatten().copied().fold(0.0, f64::max);
    let argmax = heights
        .iter()
        .enumerate()
        .filter_map(|(i, h)| h.filter(|h| *h >= top - GEOMETRIC_TOLERANCE).map(|_| i))
        .collect();
    (top, argmax)
}

/// Spheres sorted by the real part of their centers, for neighbourhood
/// queries.
pub(crate) struct SphereIndex {
    order: Vec<usize>,
    keys: Vec<f64>,
    max_radius: f64,
}

impl SphereIndex {
    pub fn new(spheres: &[IsometricSphere]) -> Self {
        let mut order: Vec<usize> = (0..spheres.len()).collect();
        order.sort_by(|&a, &b| spheres[a].center.re.total_cmp(&spheres[b].center.re));
        let keys = order.iter().map(|&i| spheres[i].center.re).collect();
        let max_radius = spheres.iter().map(|s| s.radius).fold(0.0, f64::max);
        SphereIndex { order, keys, max_radius }
    }

    /// Indices `j` with `|center_j - x| < reach + r_j`, in index order.
    pub fn near(&self, spheres: &[IsometricSphere], x: Complex64, reach: f64) -> Vec<usize> {
        let span = reach + self.max_radius;
        let lo = self.keys.partition_point(|&k| k < x.re - span);
        let hi = self.keys.partition_point(|&k| k <= x.re + span);
        let mut out: Vec<usize> = self.order[lo..hi]
            .iter()
            .copied()
            .filter(|&j| (spheres[j].center - x).norm() < reach + spheres[j].radius)
            .collect();
        out.sort_unstable();
        out
    }
}

pub(crate) fn coincident(a: &IsometricSphere, b: &IsometricSphere) -> bool {
    let scale = a.radius.max(b.radius);
    (a.center - b.center).norm() <= 1e-12 * scale && (a.radius - b.radius).abs() <= 1e-12 * scale
}

/// Where `mine` is above `other`, in coordinates centered at `mine`:
/// `2 u.d < |d|^2 + r^2 - r_other^2`.
pub(crate) fn dominance(mine: &IsometricSphere, other: &IsometricSphere) -> HalfPlane {
    let d = other.center - mine.center;
    let k = d.norm_sqr() + (mine.radius - other.radius) * (mine.radius + other.radius);
    HalfPlane { normal: d, offset: k / 2.0 }
}

/// Spheres whose open disks overlap that of sphere `i`, excluding `i` and
/// spheres coinciding with it.
pub(crate) fn rivals(spheres: &[IsometricSphere], index: &SphereIndex, i: usize) -> Vec<usize> {
    let s = &spheres[i];
    index
        .near(spheres, s.center, s.radius)
        .into_iter()
        .filter(|&j| j != i && !coincident(s, &spheres[j]))
        .collect()
}

struct Exposure {
    visible: bool,
    area: f64,
    witness: Option<Complex64>,
    margin: Option<f64>,
}

fn exposure(spheres: &[IsometricSphere], i: usize, rivals: &[usize]) -> Exposure {
    let s = spheres[i];
    let mut poly = square(s.radius);
    let planes: Vec<HalfPlane> = rivals.iter().map(|&j| dominance(&s, &spheres[j])).collect();
    for hp in &planes {
        poly = clip(&poly, hp);
        if poly.is_empty() {
            break;
        }
    }
    let area = disk_overlap_area(&poly, s.radius);
    if area <= EXPOSED_FRACTION_THRESHOLD * std::f64::consts::PI * s.radius * s.radius {
        return Exposure { visible: false, area, witness: None, margin: None };
    }
    let mut inner = poly.clone();
    for hp in polygon_edges(&inscribed_polygon(s.radius, WITNESS_POLYGON_SIDES)) {
        inner = clip(&inner, &hp);
    }
    let local = polygon_centroid(&inner)
        .or_else(|| polygon_centroid(&poly))
        .filter(|u| u.norm() < s.radius);
    let witness = local.map(|u| s.center + u);
    let margin = witness.map(|x| {
        let own = s.height_at(x);
        rivals.iter().map(|&j| own - spheres[j].height_at(x)).fold(own, f64::min)
    });
    Exposure { visible: true, area, witness, margin }
}

/// Half-planes whose intersection is the given counter-clockwise polygon.
fn polygon_edges(poly: &[Complex64]) -> Vec<HalfPlane> {
    let n = poly.len();
    (0..n)
        .map(|k| {
            let (p, q) = (poly[k], poly[(k + 1) % n]);
            let e = q - p;
            let normal = Complex64::new(e.im, -e.re);
            HalfPlane { normal, offset: normal.re * p.re + normal.im * p.im }
        })
        .collect()
}

/// Classifies every candidate by the exact arrangement of dominance
/// half-planes. Only one representative per coset (the one centered in the
/// parallelogram when present) is computed; its translates share the result.
pub fn classify_visibility(candidates: &[WordElement], domain: &VerticalDomain) -> Vec<VisibilityVerdict> {
    let spheres: Vec<IsometricSphere> = candidates.iter().map(|e| e.sphere).collect();
    let index = SphereIndex::new(&spheres);
    let primary: Vec<bool> = spheres.iter().map(|s| domain.contains(s.center)).collect();
    let reps = representatives(candidates, &primary);

    let mut computed: BTreeMap<usize, Exposure> = BTreeMap::new();
    for &i in reps.values() {
        let near = rivals(&spheres, &index, i);
        computed.insert(i, exposure(&spheres, i, &near));
    }

    candidates
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let rep = reps[&e.coset()];
            let ex = &computed[&rep];
            let offset = e.sphere.center - spheres[rep].center;
            VisibilityVerdict {
                element: e.clone(),
                status: if ex.visible { VisibilityStatus::Visible } else { VisibilityStatus::Invisible },
                primary: primary[i],
                exposed_area: ex.area,
                witnesses: ex
                    .witness
                    .filter(|_| ex.margin.is_some_and(|m| m > 0.0))
                    .map(|w| w + offset)
                    .into_iter()
                    .collect(),
                witness_margin: ex.margin,
            }
        })
        .collect()
}

/// For each coset, the index of the candidate centered in the parallelogram,
/// or the first candidate of that coset when none is.
fn representatives(candidates: &[WordElement], primary: &[bool]) -> BTreeMap<Word, usize> {
    let mut reps: BTreeMap<Word, usize> = BTreeMap::new();
    for (i, e) in candidates.iter().enumerate() {
        let key = e.coset();
        match reps.get(&key) {
            Some(&j) if primary[j] || !primary[i] => {}
            _ => {
                reps.insert(key, i);
            }
        }
    }
    reps
}

/// Cosets with at least one visible member.
pub fn visible_cosets(verdicts: &[VisibilityVerdict]) -> BTreeSet<Word> {
    verdicts.iter().filter(|v| v.is_visible()).map(|v| v.element.coset()).collect()
}

/// Brute-force check of [`classify_visibility`]: samples a
/// `(grid+1) x (grid+1)` vertex grid over the bounding square of each coset
/// representative's disk (which includes the disk center) and collects the
/// cosets attaining the upper envelope at any sampled point.
pub fn visibility_oracle(candidates: &[WordElement], domain: &VerticalDomain, grid: usize) -> BTreeSet<Word> {
    let grid = grid.max(1);
    let spheres: Vec<IsometricSphere> = candidates.iter().map(|e| e.sphere).collect();
    let index = SphereIndex::new(&spheres);
    let primary: Vec<bool> = spheres.iter().map(|s| domain.contains(s.center)).collect();
    let reps = representatives(candidates, &primary);
    let mut seen = BTreeSet::new();
    for &i in reps.values() {
        let s = spheres[i];
        let local: Vec<usize> = index.near(&spheres, s.center, s.radius);
        let local_spheres: Vec<IsometricSphere> = local.iter().map(|&j| spheres[j]).collect();
        let mut sample = |x: Complex64| {
            if (x - s.center).norm() >= s.radius {
                return;
            }
            let (_, argmax) = envelope_height(&local_spheres, x);
            for k in argmax {
                seen.insert(candidates[local[k]].coset());
            }
        };
        sample(s.center);
        let step = 2.0 * s.radius / grid as f64;
        for a in 0..=grid {
            for b in 0..=grid {
                let u = Complex64::new(-s.radius + a as f64 * step, -s.radius + b as f64 * step);
                sample(s.center + u);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_candidates, CuspLattice, Shift};
    use crate::moebius::{family_generator, MoebiusMap};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn element(power: i32, center: Complex64, radius: f64) -> WordElement {
        WordElement {
            word: Word::gamma_power(power),
            map: MoebiusMap::with_isometric_sphere(center, radius),
            sphere: IsometricSphere::new(center, radius),
        }
    }

    fn lattice20() -> CuspLattice {
        CuspLattice::new(c(20.0, 0.0), c(0.0, 20.0)).unwrap()
    }

    fn names(set: &BTreeSet<Word>) -> Vec<String> {
        set.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn envelope_examples() {
        let unit = IsometricSphere::new(c(0.0, 0.0), 1.0);
        let (h, arg) = envelope_height(&[unit], c(0.0, 0.0));
        assert_eq!(h, 1.0);
        assert_eq!(arg, vec![0]);
        let (h, arg) = envelope_height(&[unit], c(3.0, 0.0));
        assert_eq!(h, 0.0);
        assert!(arg.is_empty());

        let eps: f64 = 0.01;
        let g = IsometricSphere::new(c(-1.0, 0.0), eps.sqrt());
        let g2 = IsometricSphere::new(c(0.0, 0.0), 1.0);
        let (_, arg) = envelope_height(&[g, g2], c(-1.0 + eps / 2.0, 0.0));
        assert_eq!(arg, vec![0, 1]);
    }

    #[test]
    fn long_tunnel_visible_set() {
        let eps = 0.01;
        let l = lattice20();
        let cands = enumerate_candidates(&family_generator(eps).unwrap(), &l, 6, 40.0);
        let verdicts = classify_visibility(&cands, &l.default_domain());
        assert_eq!(names(&visible_cosets(&verdicts)), ["g", "g^-1", "g^2", "g^-2"]);
        for v in verdicts.iter().filter(|v| v.is_visible() && v.primary) {
            assert!(!v.witnesses.is_empty(), "{}", v.element.word);
            assert!(v.witness_margin.unwrap() > 1e-9);
        }
    }

    #[test]
    fn simple_generator_visible_set() {
        let l = lattice20();
        let g = MoebiusMap::new(c(2.5, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let cands = enumerate_candidates(&g, &l, 4, 40.0);
        let verdicts = classify_visibility(&cands, &l.default_domain());
        assert_eq!(names(&visible_cosets(&verdicts)), ["g", "g^-1"]);
    }

    #[test]
    fn nested_sphere_is_invisible() {
        let l = lattice20();
        let cands = vec![element(1, c(0.0, 0.0), 2.0), element(2, c(0.5, 0.0), 1.0)];
        let verdicts = classify_visibility(&cands, &l.default_domain());
        assert!(verdicts[0].is_visible());
        assert!(!verdicts[1].is_visible());
    }

    #[test]
    fn translates_share_status() {
        let eps = 0.05;
        let l = lattice20();
        let cands = enumerate_candidates(&family_generator(eps).unwrap(), &l, 3, 40.0);
        let verdicts = classify_visibility(&cands, &l.default_domain());
        let mut by_coset: BTreeMap<Word, BTreeSet<VisibilityStatus>> = BTreeMap::new();
        for v in &verdicts {
            by_coset.entry(v.element.coset()).or_default().insert(v.status);
        }
        assert!(by_coset.values().all(|s| s.len() == 1));
        assert!(verdicts.iter().any(|v| !v.primary && v.element.shift() != Shift::ZERO));
    }

    #[test]
    fn oracle_trivial_cases() {
        let l = lattice20();
        assert!(visibility_oracle(&[], &l.default_domain(), 64).is_empty());
        let one = vec![element(1, c(1.0, 1.0), 0.5)];
        assert_eq!(names(&visibility_oracle(&one, &l.default_domain(), 64)), ["g"]);
    }

    #[test]
    fn oracle_matches_long_tunnel() {
        let l = lattice20();
        let cands = enumerate_candidates(&family_generator(0.01).unwrap(), &l, 6, 40.0);
        let exact = visible_cosets(&classify_visibility(&cands, &l.default_domain()));
        assert_eq!(visibility_oracle(&cands, &l.default_domain(), 256), exact);
    }
}
