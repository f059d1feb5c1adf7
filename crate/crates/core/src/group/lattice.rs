use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GroupError, Shift};

/// Below this, `|Im(t_beta / t_alpha)|` counts as a degenerate lattice.
const INDEPENDENCE_THRESHOLD: f64 = 1e-9;

/// The rank-two parabolic subgroup fixing infinity, given by the translation
/// parts of `rho(alpha)` and `rho(beta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuspLattice {
    t_alpha: Complex64,
    t_beta: Complex64,
    shortest: Complex64,
    tau: f64,
}

impl CuspLattice {
    pub fn new(t_alpha: Complex64, t_beta: Complex64) -> Result<Self, GroupError> {
        let finite = [t_alpha.re, t_alpha.im, t_beta.re, t_beta.im].iter().all(|x| x.is_finite());
        if !finite || t_alpha.norm() == 0.0 {
            return Err(GroupError::DegenerateLattice { t_alpha, t_beta });
        }
        if (t_beta / t_alpha).im.abs() <= INDEPENDENCE_THRESHOLD {
            return Err(GroupError::DegenerateLattice { t_alpha, t_beta });
        }
        let (shortest, _) = gauss_reduce(t_alpha, t_beta);
        Ok(CuspLattice { t_alpha, t_beta, shortest, tau: shortest.norm() })
    }

    pub fn t_alpha(&self) -> Complex64 {
        self.t_alpha
    }

    pub fn t_beta(&self) -> Complex64 {
        self.t_beta
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn min_translation_length(&self) -> f64 {
        self.tau
    }

    pub fn shortest_vector(&self) -> Complex64 {
        self.shortest
    }

    /// `|Im(conj(t_alpha) t_beta)|`.
    pub fn covolume(&self) -> f64 {
        (self.t_alpha.conj() * self.t_beta).im.abs()
    }

    pub fn vector(&self, s: Shift) -> Complex64 {
        self.t_alpha * s.j as f64 + self.t_beta * s.k as f64
    }

    /// Real coordinates `(x, y)` with `z = x t_alpha + y t_beta`.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let det = (self.t_alpha.conj() * self.t_beta).im;
        let x = (z.conj() * self.t_beta).im / det;
        let y = (self.t_alpha.conj() * z).im / det;
        (x, y)
    }

    /// Fundamental parallelogram with corner `-(t_alpha + t_beta)/2`.
    pub fn default_domain(&self) -> VerticalDomain {
        VerticalDomain::new(-(self.t_alpha + self.t_beta) * 0.5, *self)
    }

    /// Reduction into the default (origin-centered) parallelogram.
    pub fn reduce_center(&self, z: Complex64) -> (Complex64, Shift) {
        self.default_domain().reduce_center(z)
    }

    /// Lattice shifts `s` with `|vector(s) - center| < radius`.
    pub fn shifts_in_disk(&self, center: Complex64, radius: f64) -> Vec<Shift> {
        if radius.is_nan() || radius <= 0.0 {
            return Vec::new();
        }
        let (x, y) = self.coordinates(center);
        let area = self.covolume();
        let dx = radius * self.t_beta.norm() / area;
        let dy = radius * self.t_alpha.norm() / area;
        let mut out = Vec::new();
        for j in (x - dx).floor() as i64..=(x + dx).ceil() as i64 {
            for k in (y - dy).floor() as i64..=(y + dy).ceil() as i64 {
                let s = Shift::new(j, k);
                if (self.vector(s) - center).norm() < radius {
                    out.push(s);
                }
            }
        }
        out
    }
}

/// Lagrange/Gauss reduction of a planar lattice basis; the first vector of
/// the result is a shortest nonzero vector.
pub fn gauss_reduce(mut u: Complex64, mut v: Complex64) -> (Complex64, Complex64) {
    if u.norm_sqr() > v.norm_sqr() {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let mu = ((u.conj() * v).re / u.norm_sqr()).round();
        v -= u * mu;
        if v.norm_sqr() >= u.norm_sqr() {
            return (u, v);
        }
        std::mem::swap(&mut u, &mut v);
    }
}

/// The fundamental parallelogram of the cusp lattice on C, swept vertically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerticalDomain {
    pub base: Complex64,
    pub lattice: CuspLattice,
}

impl VerticalDomain {
    pub fn new(base: Complex64, lattice: CuspLattice) -> Self {
        VerticalDomain { base, lattice }
    }

    pub fn area(&self) -> f64 {
        self.lattice.covolume()
    }

    pub fn corners(&self) -> [Complex64; 4] {
        let (a, b) = (self.lattice.t_alpha(), self.lattice.t_beta());
        [self.base, self.base + a, self.base + a + b, self.base + b]
    }

    /// Coordinates relative to the base corner, with values within `1e-12`
    /// of an integer snapped onto it so that boundary points land on the
    /// closed side consistently.
    fn local_coordinates(&self, z: Complex64) -> (f64, f64) {
        let (x, y) = self.lattice.coordinates(z - self.base);
        (snap(x), snap(y))
    }

    /// Half-open membership `[0,1) x [0,1)` in lattice coordinates.
    pub fn contains(&self, z: Complex64) -> bool {
        let (x, y) = self.local_coordinates(z);
        (0.0..1.0).contains(&x) && (0.0..1.0).contains(&y)
    }

    /// Returns `z0 = z - j t_alpha - k t_beta` inside the parallelogram and
    /// the shift `(j, k)`.
    pub fn reduce_center(&self, z: Complex64) -> (Complex64, Shift) {
        let (x, y) = self.local_coordinates(z);
        let s = Shift::new(x.floor() as i64, y.floor() as i64);
        (z - self.lattice.vector(s), s)
    }

    /// Euclidean distance from `z` to the closed parallelogram.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        let (x, y) = self.local_coordinates(z);
        if (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y) {
            return 0.0;
        }
        let c = self.corners();
        (0..4)
            .map(|i| segment_distance(z, c[i], c[(i + 1) % 4]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Axis-aligned bounding box `(min, max)` of the parallelogram grown by `pad`.
    pub fn bounding_box(&self, pad: f64) -> (Complex64, Complex64) {
        let c = self.corners();
        let min_re = c.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) - pad;
        let max_re = c.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) + pad;
        let min_im = c.iter().map(|z| z.im).fold(f64::INFINITY, f64::min) - pad;
        let max_im = c.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max) + pad;
        (Complex64::new(min_re, min_im), Complex64::new(max_re, max_im))
    }

    /// Shifts `s` such that `z - vector(s)` is within `pad` of the parallelogram.
    pub fn shifts_into_padded(&self, z: Complex64, pad: f64) -> Vec<Shift> {
        let (x, y) = self.lattice.coordinates(z - self.base);
        let area = self.area();
        let px = pad * self.lattice.t_beta().norm() / area;
        let py = pad * self.lattice.t_alpha().norm() / area;
        let mut out = Vec::new();
        for j in (x - 1.0 - px).floor() as i64..=(x + px).ceil() as i64 {
            for k in (y - 1.0 - py).floor() as i64..=(y + py).ceil() as i64 {
                let s = Shift::new(j, k);
                if self.distance_to(z - self.lattice.vector(s)) <= pad {
                    out.push(s);
                }
            }
        }
        out
    }
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-12 {
        r
    } else {
        x
    }
}

fn segment_distance(z: Complex64, p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - p).norm();
    }
    let s = ((z - p).conj() * d).re / len2;
    let s = s.clamp(0.0, 1.0);
    (z - (p + d * s)).norm()
}

/// Serialized form of a lattice: translations as `[re, im]` pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub t_alpha: Complex64,
    pub t_beta: Complex64,
    pub min_translation_length: f64,
    pub base_corner: Complex64,
}

impl From<&VerticalDomain> for LatticeSummary {
    fn from(d: &VerticalDomain) -> Self {
        LatticeSummary {
            t_alpha: d.lattice.t_alpha(),
            t_beta: d.lattice.t_beta(),
            min_translation_length: d.lattice.min_translation_length(),
            base_corner: d.base,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square20() -> CuspLattice {
        CuspLattice::new(c(20.0, 0.0), c(0.0, 20.0)).unwrap()
    }

    #[test]
    fn rejects_degenerate_lattices() {
        assert!(CuspLattice::new(c(1.0, 0.0), c(2.0, 0.0)).is_err());
        assert!(CuspLattice::new(c(0.0, 0.0), c(0.0, 1.0)).is_err());
        assert!(CuspLattice::new(c(1.0, 0.0), c(3.0, 1e-12)).is_err());
    }

    #[test]
    fn shortest_vector_from_a_skewed_basis() {
        // Basis (1, 0), (7, 0.5): brute force says the shortest vector has
        // length 0.5 from (-7, 1).
        let l = CuspLattice::new(c(1.0, 0.0), c(7.0, 0.5)).unwrap();
        let mut best = f64::INFINITY;
        for j in -20i64..=20 {
            for k in -20i64..=20 {
                if (j, k) != (0, 0) {
                    best = best.min(l.vector(Shift::new(j, k)).norm());
                }
            }
        }
        assert!((l.min_translation_length() - best).abs() < 1e-12);
        assert!((best - 0.5).abs() < 1e-12);
        assert!((square20().min_translation_length() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_center_examples() {
        let l = square20();
        let (z0, s) = l.reduce_center(c(41.0, 0.0));
        assert!((z0 - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(s, Shift::new(2, 0));

        let inside = c(3.0, -4.0);
        assert_eq!(l.reduce_center(inside), (inside, Shift::new(0, 0)));

        let eps = 0.01;
        let zero_corner = VerticalDomain::new(c(0.0, 0.0), l);
        let (z0, s) = zero_corner.reduce_center(c(-1.0 - eps, 0.0));
        assert!((z0 - c(19.0 - eps, 0.0)).norm() < 1e-12);
        assert_eq!(s, Shift::new(-1, 0));
    }

    #[test]
    fn containment_is_half_open() {
        let d = VerticalDomain::new(c(0.0, 0.0), square20());
        assert!(d.contains(c(0.0, 0.0)));
        assert!(!d.contains(c(20.0, 5.0)));
        assert!(!d.contains(c(5.0, 20.0)));
        assert!(d.contains(c(19.999, 19.999)));
    }

    #[test]
    fn distance_to_parallelogram() {
        let d = square20().default_domain();
        assert_eq!(d.distance_to(c(0.0, 0.0)), 0.0);
        assert!((d.distance_to(c(12.0, 0.0)) - 2.0).abs() < 1e-12);
        assert!((d.distance_to(c(13.0, 14.0)) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn shifts_in_disk_brute_force() {
        let l = CuspLattice::new(c(0.9, 0.0), c(0.3, 2.0)).unwrap();
        let center = c(0.4, -0.7);
        let radius = 3.1;
        let mut got = l.shifts_in_disk(center, radius);
        got.sort();
        let mut want = Vec::new();
        for j in -30..=30 {
            for k in -30..=30 {
                let s = Shift::new(j, k);
                if (l.vector(s) - center).norm() < radius {
                    want.push(s);
                }
            }
        }
        want.sort();
        assert_eq!(got, want);
    }
}
