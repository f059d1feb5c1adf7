//! PSL(2,C) elements, their action on the Riemann sphere and on upper half
//! space, and their isometric spheres.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::dd::{Dd, DdComplex};

/// Absolute tolerance for geometric comparisons on scenes with O(10^2)
/// coordinates.
pub const GEOMETRIC_TOLERANCE: f64 = 1e-9;

/// `|c|` at or below this is treated as zero: the map fixes infinity.
pub const STABILIZER_THRESHOLD: f64 = 1e-12;

const SIGN_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MoebiusError {
    #[error("map fixes infinity (|c| = {c_modulus:e}) and has no isometric sphere")]
    StabilizerElement { c_modulus: f64 },
    #[error("matrix is singular (|det| = {det_modulus:e})")]
    Singular { det_modulus: f64 },
}

/// A point of the Riemann sphere `C ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

/// A point `(z, t)` of upper half space, `t > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct H3Point {
    pub z: Complex64,
    pub t: f64,
}

impl H3Point {
    pub fn new(z: Complex64, t: f64) -> Self {
        H3Point { z, t }
    }

    /// Euclidean distance in the ambient R^3.
    pub fn euclidean_distance(&self, other: &H3Point) -> f64 {
        ((self.z - other.z).norm_sqr() + (self.t - other.t).powi(2)).sqrt()
    }
}

/// Euclidean hemisphere orthogonal to C: the isometric sphere of a map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsometricSphere {
    pub center: Complex64,
    pub radius: f64,
}

impl IsometricSphere {
    pub fn new(center: Complex64, radius: f64) -> Self {
        IsometricSphere { center, radius }
    }

    /// Height of the hemisphere over `x`, zero outside its boundary disk.
    pub fn height_at(&self, x: Complex64) -> f64 {
        (self.radius * self.radius - (x - self.center).norm_sqr()).max(0.0).sqrt()
    }

    /// Whether `x` lies in the open boundary disk, shrunk by `tol`.
    pub fn disk_contains(&self, x: Complex64, tol: f64) -> bool {
        (x - self.center).norm() < self.radius - tol
    }

    pub fn translated(&self, t: Complex64) -> Self {
        IsometricSphere { center: self.center + t, radius: self.radius }
    }
}

/// A 2x2 complex matrix of unit determinant, up to sign.
///
/// Entries are kept in double-double precision; the `a()`..`d()` accessors
/// round to `f64`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    a: DdComplex,
    b: DdComplex,
    c: DdComplex,
    d: DdComplex,
}

impl MoebiusMap {
    /// Builds the map, dividing by a square root of the determinant.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, MoebiusError> {
        Self::from_dd(
            DdComplex::from_c64(a),
            DdComplex::from_c64(b),
            DdComplex::from_c64(c),
            DdComplex::from_c64(d),
        )
    }

    pub fn from_dd(a: DdComplex, b: DdComplex, c: DdComplex, d: DdComplex) -> Result<Self, MoebiusError> {
        let det = a * d - b * c;
        let det_modulus = det.to_c64().norm();
        if det_modulus.is_nan() || det_modulus <= 1e-300 || det_modulus.is_infinite() {
            return Err(MoebiusError::Singular { det_modulus });
        }
        Ok(MoebiusMap { a, b, c, d }.normalized())
    }

    fn raw(a: DdComplex, b: DdComplex, c: DdComplex, d: DdComplex) -> Self {
        MoebiusMap { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(DdComplex::ONE, DdComplex::ZERO, DdComplex::ZERO, DdComplex::ONE)
    }

    /// The parabolic `z -> z + t`.
    pub fn translation(t: Complex64) -> Self {
        Self::translation_dd(DdComplex::from_c64(t))
    }

    pub fn translation_dd(t: DdComplex) -> Self {
        Self::raw(DdComplex::ONE, t, DdComplex::ZERO, DdComplex::ONE)
    }

    /// A map whose isometric sphere has the given center and radius; the
    /// inverse's sphere is centered at 0. Handy for building test scenes.
    pub fn with_isometric_sphere(center: Complex64, radius: f64) -> Self {
        let c = DdComplex::from_c64(Complex64::new(1.0 / radius, 0.0));
        let d = -(DdComplex::from_c64(center) * c);
        let b = -(DdComplex::ONE / c);
        Self::raw(DdComplex::ZERO, b, c, d).normalized()
    }

    pub fn a(&self) -> Complex64 {
        self.a.to_c64()
    }
    pub fn b(&self) -> Complex64 {
        self.b.to_c64()
    }
    pub fn c(&self) -> Complex64 {
        self.c.to_c64()
    }
    pub fn d(&self) -> Complex64 {
        self.d.to_c64()
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a(), self.b(), self.c(), self.d()]
    }

    pub fn entries_dd(&self) -> [DdComplex; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        (self.a * self.d - self.b * self.c).to_c64()
    }

    fn normalized(self) -> Self {
        let det = self.a * self.d - self.b * self.c;
        let s = det.sqrt();
        let m = if (det - DdComplex::ONE).to_c64().norm() == 0.0 {
            self
        } else {
            MoebiusMap {
                a: self.a / s,
                b: self.b / s,
                c: self.c / s,
                d: self.d / s,
            }
        };
        m.sign_canonical()
    }

    /// Flips the global sign so that the first entry of modulus above
    /// `1e-12` has argument in `(-pi/2, pi/2]`.
    fn sign_canonical(self) -> Self {
        for e in [self.a, self.b, self.c, self.d] {
            let z = e.to_c64();
            let modulus = z.norm();
            if modulus > SIGN_THRESHOLD {
                let re_zero = z.re.abs() <= SIGN_THRESHOLD * modulus;
                let flip = if re_zero { z.im < 0.0 } else { z.re < 0.0 };
                return if flip { self.negated() } else { self };
            }
        }
        self
    }

    fn negated(self) -> Self {
        MoebiusMap { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// Matrix product `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (e, f, g, h) = (other.a, other.b, other.c, other.d);
        MoebiusMap {
            a: a * e + b * g,
            b: a * f + b * h,
            c: c * e + d * g,
            d: c * f + d * h,
        }
        .normalized()
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }.sign_canonical()
    }

    pub fn is_stabilizer(&self) -> bool {
        self.c().norm() <= STABILIZER_THRESHOLD
    }

    pub fn apply(&self, p: SpherePoint) -> SpherePoint {
        match p {
            SpherePoint::Infinity => {
                if self.c.to_c64().norm() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((self.a / self.c).to_c64())
                }
            }
            SpherePoint::Finite(z) => {
                let z = DdComplex::from_c64(z);
                let den = self.c * z + self.d;
                if den.to_c64().norm() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(((self.a * z + self.b) / den).to_c64())
                }
            }
        }
    }

    /// Poincaré extension to upper half space. For `P = z + t j`,
    /// `(aP + b)(cP + d)^{-1}` evaluates to
    /// `z' = ((az+b) conj(cz+d) + a conj(c) t^2) / D`, `t' = t / D` with
    /// `D = |cz+d|^2 + |c|^2 t^2`.
    pub fn apply_h3(&self, p: H3Point) -> H3Point {
        let z = DdComplex::from_c64(p.z);
        let t = Dd::from_f64(p.t);
        let t2 = t * t;
        let w = self.c * z + self.d;
        let den = w.norm_sqr() + self.c.norm_sqr() * t2;
        let num = (self.a * z + self.b) * w.conj() + (self.a * self.c.conj()).scale(t2);
        let inv = den.recip();
        H3Point {
            z: num.scale(inv).to_c64(),
            t: (t * inv).to_f64(),
        }
    }

    /// Largest entrywise distance to `other` or `-other`, whichever is closer.
    pub fn distance_mod_sign(&self, other: &MoebiusMap) -> f64 {
        let plus = self.entrywise_distance(other, false);
        let minus = self.entrywise_distance(other, true);
        plus.min(minus)
    }

    fn entrywise_distance(&self, other: &MoebiusMap, negate: bool) -> f64 {
        let s = if negate { -Dd::ONE } else { Dd::ONE };
        self.entries_dd()
            .iter()
            .zip(other.entries_dd().iter())
            .map(|(x, y)| (*x - y.scale(s)).to_c64().norm())
            .fold(0.0, f64::max)
    }

    /// Equality modulo sign with a tolerance relative to the entry sizes.
    pub fn eq_mod_sign(&self, other: &MoebiusMap, rel_tol: f64) -> bool {
        let scale = self.max_entry().max(other.max_entry()).max(1.0);
        self.distance_mod_sign(other) <= rel_tol * scale
    }

    pub fn max_entry(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Center `-d/c` and radius `1/|c|`.
    pub fn isometric_sphere(&self) -> Result<IsometricSphere, MoebiusError> {
        let c_modulus = self.c().norm();
        if c_modulus <= STABILIZER_THRESHOLD {
            return Err(MoebiusError::StabilizerElement { c_modulus });
        }
        let center = (-(self.d / self.c)).to_c64();
        let radius = self.c.norm().recip().to_f64();
        Ok(IsometricSphere { center, radius })
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries();
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// Samples points on `S_m`, applies `m`, and returns the largest distance of
/// an image point from `S_{m^{-1}}`.
pub fn sphere_image_check(m: &MoebiusMap, samples: usize) -> Result<f64, MoebiusError> {
    let source = m.isometric_sphere()?;
    let target = m.inverse().isometric_sphere()?;
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut worst: f64 = 0.0;
    for k in 0..samples.max(1) {
        let h = (k as f64 + 0.5) / samples.max(1) as f64;
        let rho = source.radius * (1.0 - h * h).sqrt();
        let phi = golden * k as f64;
        let p = H3Point::new(
            source.center + Complex64::from_polar(rho, phi),
            source.radius * h,
        );
        let q = m.apply_h3(p);
        let dist = ((q.z - target.center).norm_sqr() + q.t * q.t).sqrt();
        worst = worst.max((dist - target.radius).abs());
    }
    Ok(worst)
}

/// `rho(gamma)` for the one-parameter family
/// `[[i(1+eps)/sqrt(eps), i/sqrt(eps)], [-i/sqrt(eps), -i/sqrt(eps)]]`,
/// built in double-double so that powers keep their cancellations.
pub fn family_generator(eps: f64) -> Result<MoebiusMap, MoebiusError> {
    let e = Dd::from_f64(eps);
    let root = e.sqrt();
    let inv_root = root.recip();
    let i = |x: Dd| DdComplex::new(Dd::ZERO, x);
    MoebiusMap::from_dd(
        i((Dd::ONE + e) * inv_root),
        i(inv_root),
        i(-inv_root),
        i(-inv_root),
    )
}
