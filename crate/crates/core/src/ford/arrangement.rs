//! Convex polygons cut by half-planes, and their overlap with a disk
//! centered at the origin.

use num_complex::Complex64;

pub(crate) fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

pub(crate) fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// `{ u : normal . u < offset }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct HalfPlane {
    pub normal: Complex64,
    pub offset: f64,
}

impl HalfPlane {
    /// Negative strictly inside.
    pub fn eval(&self, u: Complex64) -> f64 {
        dot(self.normal, u) - self.offset
    }
}

/// Counter-clockwise square `[-h, h]^2`.
pub(crate) fn square(h: f64) -> Vec<Complex64> {
    vec![
        Complex64::new(-h, -h),
        Complex64::new(h, -h),
        Complex64::new(h, h),
        Complex64::new(-h, h),
    ]
}

/// Counter-clockwise regular polygon inscribed in the circle of radius `r`.
pub(crate) fn inscribed_polygon(r: f64, sides: usize) -> Vec<Complex64> {
    (0..sides)
        .map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / sides as f64))
        .collect()
}

/// Sutherland-Hodgman step.
pub(crate) fn clip(poly: &[Complex64], hp: &HalfPlane) -> Vec<Complex64> {
    if poly.is_empty() {
        return Vec::new();
    }
    if hp.normal.re == 0.0 && hp.normal.im == 0.0 {
        return if hp.offset > 0.0 { poly.to_vec() } else { Vec::new() };
    }
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (ep, eq) = (hp.eval(p), hp.eval(q));
        if ep <= 0.0 {
            out.push(p);
        }
        if (ep < 0.0 && eq > 0.0) || (ep > 0.0 && eq < 0.0) {
            let t = ep / (ep - eq);
            out.push(p + (q - p) * t);
        }
    }
    if out.len() < 3 {
        out.clear();
    }
    out
}

#[cfg(test)]
pub(crate) fn polygon_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| cross(poly[i], poly[(i + 1) % n])).sum::<f64>() / 2.0
}

pub(crate) fn polygon_centroid(poly: &[Complex64]) -> Option<Complex64> {
    let n = poly.len();
    if n < 3 {
        return None;
    }
    // Shift to the first vertex so tiny polygons far from the origin keep
    // their precision.
    let o = poly[0];
    let mut area = 0.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 1..n - 1 {
        let (p, q) = (poly[i] - o, poly[i + 1] - o);
        let w = cross(p, q);
        area += w;
        acc += (p + q) * w;
    }
    if area <= 0.0 {
        return None;
    }
    Some(o + acc / (3.0 * area))
}

/// Signed area of the triangle `(0, a, b)` intersected with the disk of
/// radius `r` about the origin.
fn triangle_disk_area(a: Complex64, b: Complex64, r: f64) -> f64 {
    let d = b - a;
    let aa = dot(d, d);
    if aa == 0.0 {
        return 0.0;
    }
    let bb = dot(a, d);
    let cc = dot(a, a) - r * r;
    let disc = bb * bb - aa * cc;
    let mut ts = [0.0, 1.0, 1.0, 1.0];
    let mut n = 1;
    if disc > 0.0 {
        let s = disc.sqrt();
        for t in [(-bb - s) / aa, (-bb + s) / aa] {
            if t > 0.0 && t < 1.0 {
                ts[n] = t;
                n += 1;
            }
        }
    }
    ts[n] = 1.0;
    let r2 = r * r;
    let mut total = 0.0;
    for w in ts[..=n].windows(2) {
        let (p, q) = (a + d * w[0], a + d * w[1]);
        let mid = a + d * ((w[0] + w[1]) / 2.0);
        if mid.norm_sqr() < r2 {
            total += cross(p, q) / 2.0;
        } else {
            total += r2 * cross(p, q).atan2(dot(p, q)) / 2.0;
        }
    }
    total
}

/// Area of a counter-clockwise convex polygon intersected with the disk of
/// radius `r` about the origin.
pub(crate) fn disk_overlap_area(poly: &[Complex64], r: f64) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    (0..n).map(|i| triangle_disk_area(poly[i], poly[(i + 1) % n], r)).sum::<f64>().max(0.0)
}

/// Parameter interval of `{ base + s dir }` lying in the open disk of radius
/// `r` about the origin and inside every half-plane.
pub(crate) fn line_interval<'a>(
    base: Complex64,
    dir: Complex64,
    r: f64,
    planes: impl IntoIterator<Item = &'a HalfPlane>,
) -> Option<(f64, f64)> {
    let aa = dot(dir, dir);
    let bb = dot(base, dir);
    let disc = bb * bb - aa * (dot(base, base) - r * r);
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let (mut lo, mut hi) = ((-bb - s) / aa, (-bb + s) / aa);
    for hp in planes {
        // hp.eval(base + s dir) = e0 + s e1 < 0
        let e0 = hp.eval(base);
        let e1 = dot(hp.normal, dir);
        if e1 == 0.0 {
            if e0 >= 0.0 {
                return None;
            }
        } else if e1 > 0.0 {
            hi = hi.min(-e0 / e1);
        } else {
            lo = lo.max(-e0 / e1);
        }
        if lo >= hi {
            return None;
        }
    }
    Some((lo, hi))
}
