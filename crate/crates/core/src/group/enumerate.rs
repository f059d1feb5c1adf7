use std::collections::BTreeMap;

use crate::moebius::{IsometricSphere, MoebiusMap, SpherePoint, GEOMETRIC_TOLERANCE};

use super::{CuspLattice, Shift, VerticalDomain, Word};

pub const DEFAULT_MAX_WORD_LEN: u32 = 6;

/// A group element given by its normal-form word (no left translation) and
/// its matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct WordElement {
    pub word: Word,
    pub map: MoebiusMap,
    pub sphere: IsometricSphere,
}

impl WordElement {
    pub fn coset(&self) -> Word {
        self.word.coset_key()
    }

    pub fn shift(&self) -> Shift {
        self.word.right_shift()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Cap on distinct words (double-coset representatives).
    pub max_words: usize,
    /// Cap on words times lattice translates.
    pub max_candidates: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_words: 2000, max_candidates: 40_000 }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub elements: Vec<WordElement>,
    pub coset_count: usize,
    pub window_pad: f64,
    pub truncated: bool,
}

/// `rho(gamma)` together with the cusp lattice, with cached powers.
#[derive(Clone, Debug)]
pub struct Generators {
    pub gamma: MoebiusMap,
    pub lattice: CuspLattice,
    powers: BTreeMap<i32, MoebiusMap>,
}

impl Generators {
    pub fn new(gamma: MoebiusMap, lattice: CuspLattice) -> Self {
        let mut g = Generators { gamma, lattice, powers: BTreeMap::new() };
        g.powers.insert(0, MoebiusMap::identity());
        g
    }

    pub fn power(&mut self, p: i32) -> MoebiusMap {
        if let Some(m) = self.powers.get(&p) {
            return *m;
        }
        let step = if p > 0 { self.gamma } else { self.gamma.inverse() };
        let prev = self.power(p - p.signum());
        let m = prev.compose(&step);
        self.powers.insert(p, m);
        m
    }

    pub fn translation(&self, s: Shift) -> MoebiusMap {
        MoebiusMap::translation(self.lattice.vector(s))
    }

    /// Evaluates a word left to right.
    pub fn eval(&mut self, w: &Word) -> MoebiusMap {
        let mut m = self.translation(w.left);
        for s in &w.syllables {
            m = m.compose(&self.power(s.power));
            if !s.shift.is_zero() {
                m = m.compose(&self.translation(s.shift));
            }
        }
        m
    }
}

/// Enumerates double-coset representatives (right shift zero) of length at
/// most `max_word_len`, in order of length.
///
/// A word `w` is extended to `w T g^f` only when the boundary disks of
/// `S_w` and `S_{(T g^f)^{-1}}` overlap; otherwise `S_{w T g^f}` lies inside
/// the closed half-ball of `S_{g^f}` translated by `T`, and that branch is
/// not explored. This also bounds the interior translations to finitely
/// many.
pub fn enumerate_cosets(
    gens: &mut Generators,
    max_word_len: u32,
    limits: &EnumerationLimits,
) -> (Vec<WordElement>, bool) {
    let max_len = max_word_len as usize;
    let mut buckets: Vec<Vec<WordElement>> = vec![Vec::new(); max_len + 1];
    let mut truncated = false;
    let ell_max = max_word_len as i32;

    for p in (1..=ell_max).flat_map(|p| [p, -p]) {
        let m = gens.power(p);
        if let Ok(sphere) = m.isometric_sphere() {
            buckets[p.unsigned_abs() as usize].push(WordElement { word: Word::gamma_power(p), map: m, sphere });
        }
    }

    let mut done: Vec<WordElement> = Vec::new();
    for ell in 1..=max_len {
        let mut level = std::mem::take(&mut buckets[ell]);
        level.sort_by(|a, b| a.word.cmp(&b.word));
        if done.len() + level.len() > limits.max_words {
            level.truncate(limits.max_words - done.len());
            truncated = true;
            done.extend(level);
            break;
        }
        for w in &level {
            let rest = (max_len - ell) as i32;
            for f in (1..=rest).flat_map(|p| [p, -p]) {
                let gf = gens.power(f);
                let Ok(sf) = gf.isometric_sphere() else { continue };
                let Some(gf_inf) = gf.apply(SpherePoint::Infinity).finite() else { continue };
                let reach = w.sphere.radius + sf.radius - GEOMETRIC_TOLERANCE;
                let target = &mut buckets[ell + f.unsigned_abs() as usize];
                for t in gens.lattice.shifts_in_disk(w.sphere.center - gf_inf, reach) {
                    if t.is_zero() {
                        continue;
                    }
                    if target.len() > limits.max_words {
                        truncated = true;
                        break;
                    }
                    let map = w.map.compose(&gens.translation(t)).compose(&gf);
                    let Ok(sphere) = map.isometric_sphere() else { continue };
                    let mut word = w.word.clone();
                    word.push(0, t);
                    word.push(f, Shift::ZERO);
                    target.push(WordElement { word, map, sphere });
                }
            }
        }
        done.extend(level);
    }

    (dedup_maps(done), truncated)
}

/// Drops elements whose sphere and matrix (mod sign) coincide with an
/// earlier one.
fn dedup_maps(mut elems: Vec<WordElement>) -> Vec<WordElement> {
    const TOL: f64 = 1e-10;
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by(|&a, &b| {
        elems[a].sphere.center.re.total_cmp(&elems[b].sphere.center.re).then(a.cmp(&b))
    });
    let mut drop = vec![false; elems.len()];
    for (pos, &i) in order.iter().enumerate() {
        if drop[i] {
            continue;
        }
        for &j in &order[pos + 1..] {
            let (si, sj) = (&elems[i].sphere, &elems[j].sphere);
            if sj.center.re - si.center.re > TOL {
                break;
            }
            if !drop[j]
                && (si.center - sj.center).norm() <= TOL
                && (si.radius - sj.radius).abs() <= TOL
                && elems[i].map.eq_mod_sign(&elems[j].map, TOL)
            {
                let loser = if elems[i].word <= elems[j].word { j } else { i };
                drop[loser] = true;
            }
        }
    }
    let mut k = 0;
    elems.retain(|_| {
        let keep = !drop[k];
        k += 1;
        keep
    });
    elems
}

/// `2 max(tau, r_max)` when the radii respect the translation-length bound;
/// otherwise `2 tau` (the configuration is already indiscrete and the window
/// only feeds the visibility table).
pub fn default_window_pad(lattice: &CuspLattice, cosets: &[WordElement]) -> f64 {
    let tau = lattice.min_translation_length();
    let r_max = cosets.iter().map(|e| e.sphere.radius).fold(0.0, f64::max);
    if r_max <= tau + GEOMETRIC_TOLERANCE {
        2.0 * tau.max(r_max)
    } else {
        2.0 * tau
    }
}

/// Every lattice translate `w T(s)` of the given cosets whose sphere center
/// lies within `pad` of the parallelogram, sorted by `(coset, shift)`.
pub fn place_translates(
    gens: &Generators,
    cosets: &[WordElement],
    domain: &VerticalDomain,
    pad: f64,
    limits: &EnumerationLimits,
) -> (Vec<WordElement>, bool) {
    let mut out = Vec::new();
    let mut truncated = false;
    let mut sorted: Vec<&WordElement> = cosets.iter().collect();
    sorted.sort_by(|a, b| a.word.cmp(&b.word));
    'outer: for e in sorted {
        let mut shifts = domain.shifts_into_padded(e.sphere.center, pad);
        shifts.sort();
        for s in shifts {
            if out.len() >= limits.max_candidates {
                truncated = true;
                break 'outer;
            }
            let map = e.map.compose(&gens.translation(s));
            let sphere = e.sphere.translated(-gens.lattice.vector(s));
            out.push(WordElement { word: e.word.with_right_shift(s), map, sphere });
        }
    }
    (out, truncated)
}

/// Candidates over the origin-centered parallelogram with default limits.
pub fn enumerate_candidates(
    gamma: &MoebiusMap,
    lattice: &CuspLattice,
    max_word_len: u32,
    window_pad: f64,
) -> Vec<WordElement> {
    let domain = lattice.default_domain();
    enumerate(gamma, &domain, max_word_len, Some(window_pad), &EnumerationLimits::default()).elements
}

pub fn enumerate(
    gamma: &MoebiusMap,
    domain: &VerticalDomain,
    max_word_len: u32,
    window_pad: Option<f64>,
    limits: &EnumerationLimits,
) -> Enumeration {
    let mut gens = Generators::new(*gamma, domain.lattice);
    let (cosets, t1) = enumerate_cosets(&mut gens, max_word_len.max(1), limits);
    let pad = window_pad.unwrap_or_else(|| default_window_pad(&domain.lattice, &cosets));
    let (elements, t2) = place_translates(&gens, &cosets, domain, pad, limits);
    Enumeration { elements, coset_count: cosets.len(), window_pad: pad, truncated: t1 || t2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::family_generator;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lattice20() -> CuspLattice {
        CuspLattice::new(c(20.0, 0.0), c(0.0, 20.0)).unwrap()
    }

    fn find<'a>(elems: &'a [WordElement], name: &str) -> Option<&'a WordElement> {
        elems.iter().find(|e| e.word.to_string() == name)
    }

    #[test]
    fn long_tunnel_words_of_length_two() {
        let eps = 0.01;
        let g = family_generator(eps).unwrap();
        let elems = enumerate_candidates(&g, &lattice20(), 2, 40.0);
        for (name, center, radius) in [
            ("g", c(-1.0, 0.0), 0.1),
            ("g^-1", c(-1.0 - eps, 0.0), 0.1),
            ("g^2", c(0.0, 0.0), 1.0),
            ("g^-2", c(-2.0 - eps, 0.0), 1.0),
        ] {
            let e = find(&elems, name).unwrap_or_else(|| panic!("missing {name}"));
            assert!((e.sphere.center - center).norm() < 1e-12, "{name}");
            assert!((e.sphere.radius - radius).abs() < 1e-12, "{name}");
        }
    }

    #[test]
    fn simple_generator_gives_only_translates_at_length_one() {
        let g = MoebiusMap::new(c(2.5, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let l = lattice20();
        let elems = enumerate_candidates(&g, &l, 1, 40.0);
        let domain = l.default_domain();
        let mut expected = 0;
        for center in [c(0.0, 0.0), c(2.5, 0.0)] {
            expected += domain.shifts_into_padded(center, 40.0).len();
        }
        assert_eq!(elems.len(), expected);
        assert!(elems.iter().all(|e| e.word.syllables.len() == 1 && e.word.len() == 1));
    }

    #[test]
    fn parabolic_generator_yields_nothing() {
        let t = MoebiusMap::translation(c(3.0, 1.0));
        assert!(enumerate_candidates(&t, &lattice20(), 4, 40.0).is_empty());
    }

    #[test]
    fn words_evaluate_to_their_maps() {
        let g = family_generator(0.05).unwrap();
        let l = CuspLattice::new(c(2.2, 0.0), c(0.3, 2.0)).unwrap();
        let domain = l.default_domain();
        let en = enumerate(&g, &domain, 4, Some(2.0), &EnumerationLimits::default());
        assert!(en.elements.iter().any(|e| e.word.syllables.len() > 1), "expected interior shifts");
        let mut gens = Generators::new(g, l);
        for e in &en.elements {
            let m = gens.eval(&e.word);
            let scale = m.max_entry().max(1.0);
            assert!(m.distance_mod_sign(&e.map) <= 1e-10 * scale, "{}", e.word);
            let s = m.isometric_sphere().unwrap();
            assert!((s.center - e.sphere.center).norm() < 1e-9);
        }
    }

    #[test]
    fn longer_cutoff_is_a_superset() {
        let g = family_generator(0.05).unwrap();
        let l = CuspLattice::new(c(2.2, 0.0), c(0.3, 2.0)).unwrap();
        for len in 1..4 {
            let small = enumerate_candidates(&g, &l, len, 2.0);
            let big = enumerate_candidates(&g, &l, len + 1, 2.0);
            for e in &small {
                assert!(big.iter().any(|f| f.word == e.word), "{} lost at {}", e.word, len + 1);
            }
        }
    }

    #[test]
    fn no_duplicate_maps() {
        let g = family_generator(0.05).unwrap();
        let l = CuspLattice::new(c(2.2, 0.0), c(0.3, 2.0)).unwrap();
        let elems = enumerate_candidates(&g, &l, 4, 2.0);
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i + 1..] {
                let same_sphere = (a.sphere.center - b.sphere.center).norm() <= 1e-10
                    && (a.sphere.radius - b.sphere.radius).abs() <= 1e-10;
                assert!(!(same_sphere && a.map.eq_mod_sign(&b.map, 1e-10)));
            }
        }
    }
}
