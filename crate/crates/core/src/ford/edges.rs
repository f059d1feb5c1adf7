use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::group::{Shift, Word};
use crate::moebius::{H3Point, IsometricSphere};

use super::arrangement::{line_interval, HalfPlane};
use super::visibility::{coincident, dominance, rivals, SphereIndex, VisibilityVerdict};

/// Vertical plane `{ x : Re(conj(normal) x) = offset }` with unit normal,
/// oriented so that the normal has positive real part (or points up the
/// imaginary axis when vertical).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportingPlane {
    pub normal: Complex64,
    pub offset: f64,
}

impl SupportingPlane {
    /// The plane over the radical line of the two boundary circles. For equal
    /// radii this is the perpendicular bisector of the centers.
    pub fn between(a: &IsometricSphere, b: &IsometricSphere) -> Option<Self> {
        let hp = dominance(a, b);
        let len = hp.normal.norm();
        if len == 0.0 {
            return None;
        }
        let mut normal = hp.normal / len;
        let mut offset = (hp.offset + a.center.re * hp.normal.re + a.center.im * hp.normal.im) / len;
        if normal.re < 0.0 || (normal.re == 0.0 && normal.im < 0.0) {
            normal = -normal;
            offset = -offset;
        }
        Some(SupportingPlane { normal, offset })
    }

    pub fn signed_distance(&self, x: Complex64) -> f64 {
        self.normal.re * x.re + self.normal.im * x.im - self.offset
    }
}

/// A visible intersection `S_first ∩ S_second`.
#[derive(Clone, Debug)]
pub struct VisibleEdge {
    pub first: Word,
    pub second: Word,
    /// Indices into the verdict list; `first` is a coset representative.
    pub first_index: usize,
    pub second_index: usize,
    pub plane: SupportingPlane,
    /// Ends of the visible part of the edge, projected to C.
    pub endpoints: [Complex64; 2],
    pub witness: H3Point,
    /// Smallest power gap to any other sphere at the witness; positive means
    /// the witness is outside every other closed half-ball.
    pub witness_margin: f64,
    /// Interior angle of the region above both hemispheres along the edge.
    pub dihedral_angle: f64,
}

/// Key identifying an unordered pair of spheres up to a common lattice
/// translation.
pub(crate) fn orbit_key(a: &Word, b: &Word) -> (Word, Word, Shift) {
    let (ka, kb) = (a.coset_key(), b.coset_key());
    let forward = (ka.clone(), kb.clone(), b.right_shift() - a.right_shift());
    let backward = (kb, ka, a.right_shift() - b.right_shift());
    forward.min(backward)
}

/// Angle opposite side `c` in a triangle with sides `a`, `b`, `c`, by
/// Kahan's cancellation-free formula.
pub(crate) fn triangle_angle(a: f64, b: f64, c: f64) -> f64 {
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    let mu = if b >= c { c - (a - b) } else { b - (a - c) };
    let num = ((a - b) + c) * mu;
    let den = (a + (b + c)) * ((a - c) + b);
    if num <= 0.0 {
        return 0.0;
    }
    if den <= 0.0 {
        return PI;
    }
    2.0 * (num / den).sqrt().atan()
}

/// Dihedral angle of the region above both hemispheres along their
/// intersection: `pi` minus the angle between the radii at an intersection
/// point.
pub fn dihedral_angle(a: &IsometricSphere, b: &IsometricSphere) -> f64 {
    let d = (a.center - b.center).norm();
    PI - triangle_angle(a.radius, b.radius, d)
}

/// One visible sphere per coset, preferring the one centered in the
/// parallelogram.
pub(crate) fn visible_representatives(verdicts: &[VisibilityVerdict]) -> Vec<usize> {
    let mut reps = Vec::new();
    let mut seen = BTreeSet::new();
    for pass_primary in [true, false] {
        for (i, v) in verdicts.iter().enumerate() {
            if v.is_visible() && (v.primary || !pass_primary) && seen.insert(v.element.coset()) {
                reps.push(i);
            }
        }
    }
    reps
}

/// Every visible pairwise intersection, one per lattice orbit, seen from the
/// coset representatives.
pub fn visible_edges(verdicts: &[VisibilityVerdict]) -> Vec<VisibleEdge> {
    let spheres: Vec<IsometricSphere> = verdicts.iter().map(|v| v.element.sphere).collect();
    let index = SphereIndex::new(&spheres);
    let reps = visible_representatives(verdicts);

    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for &i in &reps {
        let s = spheres[i];
        let near = rivals(&spheres, &index, i);
        let planes: Vec<(usize, HalfPlane)> = near.iter().map(|&j| (j, dominance(&s, &spheres[j]))).collect();
        for &(j, hp) in &planes {
            if !verdicts[j].is_visible() {
                continue;
            }
            let t = spheres[j];
            let d = (t.center - s.center).norm();
            if d <= (s.radius - t.radius).abs() {
                continue;
            }
            let key = orbit_key(&verdicts[i].element.word, &verdicts[j].element.word);
            if seen.contains(&key) {
                continue;
            }
            let Some(edge) = edge_between(verdicts, &spheres, i, j, &hp, &planes) else { continue };
            seen.insert(key);
            edges.push(edge);
        }
    }
    edges
}

fn edge_between(
    verdicts: &[VisibilityVerdict],
    spheres: &[IsometricSphere],
    i: usize,
    j: usize,
    hp: &HalfPlane,
    planes: &[(usize, HalfPlane)],
) -> Option<VisibleEdge> {
    let s = spheres[i];
    let n2 = hp.normal.norm_sqr();
    let base = hp.normal * (hp.offset / n2);
    let dir = Complex64::new(-hp.normal.im, hp.normal.re) / n2.sqrt();
    let others = planes.iter().filter(|(k, _)| *k != j && !coincident(&spheres[*k], &spheres[j])).map(|(_, p)| p);
    let (lo, hi) = line_interval(base, dir, s.radius, others)?;
    if hi - lo <= 1e-9 * s.radius {
        return None;
    }
    let mid = base + dir * ((lo + hi) / 2.0);
    let x = s.center + mid;
    let own_power = mid.norm_sqr() - s.radius * s.radius;
    let margin = planes
        .iter()
        .filter(|(k, _)| *k != j)
        .map(|(k, _)| (x - spheres[*k].center).norm_sqr() - spheres[*k].radius.powi(2) - own_power)
        .fold(f64::INFINITY, f64::min);
    Some(VisibleEdge {
        first: verdicts[i].element.word.clone(),
        second: verdicts[j].element.word.clone(),
        first_index: i,
        second_index: j,
        plane: SupportingPlane::between(&s, &spheres[j])?,
        endpoints: [s.center + base + dir * lo, s.center + base + dir * hi],
        witness: H3Point::new(x, s.height_at(x)),
        witness_margin: margin,
        dihedral_angle: dihedral_angle(&s, &spheres[j]),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TangencyKind {
    External,
    Internal,
}

/// Two visible spheres whose boundary circles touch at a point not covered
/// by any other disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Tangency {
    pub first: Word,
    pub second: Word,
    pub point: Complex64,
    pub kind: TangencyKind,
}

pub fn tangency_report(verdicts: &[VisibilityVerdict], tol: f64) -> Vec<Tangency> {
    let spheres: Vec<IsometricSphere> = verdicts.iter().map(|v| v.element.sphere).collect();
    let index = SphereIndex::new(&spheres);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in visible_representatives(verdicts) {
        let s = spheres[i];
        for j in index.near(&spheres, s.center, s.radius + 2.0 * tol) {
            if j == i || !verdicts[j].is_visible() {
                continue;
            }
            let t = spheres[j];
            let diff = t.center - s.center;
            let d = diff.norm();
            if d == 0.0 {
                continue;
            }
            let unit = diff / d;
            let (kind, point) = if (d - (s.radius + t.radius)).abs() <= tol {
                (TangencyKind::External, s.center + unit * s.radius)
            } else if (d - (s.radius - t.radius).abs()).abs() <= tol {
                let point = if s.radius >= t.radius { s.center + unit * s.radius } else { s.center - unit * s.radius };
                (TangencyKind::Internal, point)
            } else {
                continue;
            };
            let key = orbit_key(&verdicts[i].element.word, &verdicts[j].element.word);
            if seen.contains(&key) {
                continue;
            }
            let covered = index
                .near(&spheres, point, 0.0)
                .into_iter()
                .any(|k| k != i && k != j && spheres[k].disk_contains(point, tol));
            seen.insert(key);
            if !covered {
                out.push(Tangency {
                    first: verdicts[i].element.word.clone(),
                    second: verdicts[j].element.word.clone(),
                    point,
                    kind,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ford::visibility::{classify_visibility, envelope_height, VisibilityStatus};
    use crate::group::{enumerate_candidates, CuspLattice, WordElement};
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

    fn all_visible(elems: &[WordElement]) -> Vec<VisibilityVerdict> {
        elems
            .iter()
            .map(|e| VisibilityVerdict {
                element: e.clone(),
                status: VisibilityStatus::Visible,
                primary: true,
                exposed_area: 1.0,
                witnesses: vec![],
                witness_margin: None,
            })
            .collect()
    }

    #[test]
    fn long_tunnel_has_three_edge_orbits() {
        let eps = 0.01;
        let l = lattice20();
        let cands = enumerate_candidates(&family_generator(eps).unwrap(), &l, 6, 40.0);
        let verdicts = classify_visibility(&cands, &l.default_domain());
        let edges = visible_edges(&verdicts);
        assert_eq!(edges.len(), 3);
        let mut offsets: Vec<f64> = edges
            .iter()
            .map(|e| {
                assert!((e.plane.normal - c(1.0, 0.0)).norm() < 1e-12);
                assert!(e.witness_margin > 0.0);
                e.plane.offset
            })
            .collect();
        offsets.sort_by(f64::total_cmp);
        let expected = [-1.0 - 1.5 * eps, -1.0 - 0.5 * eps, -1.0 + 0.5 * eps];
        for (o, x) in offsets.iter().zip(expected) {
            assert!((o - x).abs() < 1e-12, "{o} vs {x}");
        }
        let total: f64 = edges.iter().map(|e| e.dihedral_angle).sum();
        assert!((total - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn disjoint_spheres_have_no_edge() {
        let v = all_visible(&[element(1, c(0.0, 0.0), 1.0), element(2, c(3.0, 0.0), 1.0)]);
        assert!(visible_edges(&v).is_empty());
    }

    #[test]
    fn equal_radii_edge_lies_over_bisector() {
        let v = all_visible(&[element(1, c(0.0, 0.0), 1.0), element(2, c(1.0, 1.0), 1.0)]);
        let edges = visible_edges(&v);
        assert_eq!(edges.len(), 1);
        let mid = c(0.5, 0.5);
        assert!(edges[0].plane.signed_distance(mid).abs() < 1e-15);
        assert!((edges[0].plane.normal - c(1.0, 1.0) / 2f64.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn buried_edge_is_not_visible() {
        // A and B meet over x = 1.8 at height sqrt(0.76); C is taller there.
        let elems = vec![
            element(1, c(0.0, 0.0), 2.0),
            element(2, c(3.6, 0.0), 2.0),
            element(3, c(1.8, 0.0), 1.0),
        ];
        let l = lattice20();
        let verdicts = classify_visibility(&elems, &l.default_domain());
        assert!(verdicts.iter().all(|v| v.is_visible()));
        let edges = visible_edges(&verdicts);
        let pairs: BTreeSet<(String, String)> = edges
            .iter()
            .map(|e| {
                let (a, b) = (e.first.to_string(), e.second.to_string());
                if a < b { (a, b) } else { (b, a) }
            })
            .collect();
        assert_eq!(pairs.len(), 2);
        assert!(!pairs.contains(&("g".to_string(), "g^2".to_string())));

        // sampling oracle: along x = 1.8 the top sphere is always C
        let spheres: Vec<IsometricSphere> = elems.iter().map(|e| e.sphere).collect();
        for k in 0..=200 {
            let y = -0.87 + 0.0087 * k as f64;
            let (_, arg) = envelope_height(&spheres, c(1.8, y));
            assert_eq!(arg, vec![2]);
        }
    }

    #[test]
    fn kahan_angle_matches_law_of_cosines() {
        for (a, b, cc) in [(1.0f64, 1.0, 1.0), (3.0, 4.0, 5.0), (1.0, 0.1, 0.95), (2.0, 2.0, 0.001)] {
            let law: f64 = ((a * a + b * b - cc * cc) / (2.0 * a * b)).acos();
            assert!((triangle_angle(a, b, cc) - law).abs() < 1e-9, "{a} {b} {cc}");
        }
    }

    #[test]
    fn tangency_examples() {
        let two = vec![element(1, c(0.0, 0.0), 1.0), element(2, c(2.0, 0.0), 1.0)];
        let report = tangency_report(&all_visible(&two), 1e-9);
        assert_eq!(report.len(), 1);
        assert!((report[0].point - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(report[0].kind, TangencyKind::External);

        let mut three = two.clone();
        three.push(element(3, c(1.0, 0.0), 0.5));
        assert!(tangency_report(&all_visible(&three), 1e-9).is_empty());

        let nested = vec![element(1, c(0.0, 0.0), 2.0), element(2, c(1.0, 0.0), 1.0)];
        let report = tangency_report(&all_visible(&nested), 1e-9);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].kind, TangencyKind::Internal);
        assert!((report[0].point - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn long_tunnel_has_no_tangencies() {
        let l = lattice20();
        let cands = enumerate_candidates(&family_generator(0.01).unwrap(), &l, 6, 40.0);
        let verdicts = classify_visibility(&cands, &l.default_domain());
        assert!(tangency_report(&verdicts, 1e-9).is_empty());
    }
}
