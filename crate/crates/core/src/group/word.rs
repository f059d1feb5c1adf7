use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An element of the cusp lattice as integer coordinates `(j, k)` in the
/// basis `(t_alpha, t_beta)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shift {
    pub j: i64,
    pub k: i64,
}

impl Shift {
    pub const ZERO: Shift = Shift { j: 0, k: 0 };

    pub const fn new(j: i64, k: i64) -> Self {
        Shift { j, k }
    }

    pub fn is_zero(&self) -> bool {
        self.j == 0 && self.k == 0
    }
}

impl Add for Shift {
    type Output = Shift;
    fn add(self, rhs: Shift) -> Shift {
        Shift::new(self.j + rhs.j, self.k + rhs.k)
    }
}

impl Sub for Shift {
    type Output = Shift;
    fn sub(self, rhs: Shift) -> Shift {
        Shift::new(self.j - rhs.j, self.k - rhs.k)
    }
}

impl Neg for Shift {
    type Output = Shift;
    fn neg(self) -> Shift {
        Shift::new(-self.j, -self.k)
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.j, self.k)
    }
}

/// `gamma^power` followed by a lattice translation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub power: i32,
    pub shift: Shift,
}

/// Normal form `T0 g^p1 T1 g^p2 ... g^pn Tn` in the free product
/// `(Z x Z) * Z`: every `p_i != 0` and every interior `T_i != 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub left: Shift,
    pub syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn translation(s: Shift) -> Self {
        Word { left: s, syllables: Vec::new() }
    }

    pub fn gamma_power(p: i32) -> Self {
        let mut w = Word::identity();
        w.push(p, Shift::ZERO);
        w
    }

    /// Builds a word from `(power, shift)` pairs, reducing as it goes.
    pub fn from_syllables(left: Shift, parts: &[(i32, Shift)]) -> Self {
        let mut w = Word::translation(left);
        for &(p, s) in parts {
            w.push(p, s);
        }
        w
    }

    /// Number of gamma letters.
    pub fn len(&self) -> u32 {
        self.syllables.iter().map(|s| s.power.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty() && self.left.is_zero()
    }

    /// Lattice translation applied last (rightmost).
    pub fn right_shift(&self) -> Shift {
        self.syllables.last().map(|s| s.shift).unwrap_or(self.left)
    }

    /// Appends `gamma^power * T(shift)` with free-product reduction.
    pub fn push(&mut self, power: i32, shift: Shift) {
        if power == 0 {
            self.add_right_shift(shift);
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.shift.is_zero() => {
                last.power += power;
                last.shift = shift;
                if last.power == 0 {
                    self.syllables.pop();
                    self.add_right_shift(shift);
                }
            }
            _ => self.syllables.push(Syllable { power, shift }),
        }
    }

    fn add_right_shift(&mut self, s: Shift) {
        match self.syllables.last_mut() {
            Some(last) => last.shift = last.shift + s,
            None => self.left = self.left + s,
        }
    }

    pub fn mul(&self, rhs: &Word) -> Word {
        let mut out = self.clone();
        out.add_right_shift(rhs.left);
        for s in &rhs.syllables {
            out.push(s.power, s.shift);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        let mut out = Word::translation(-self.right_shift());
        let n = self.syllables.len();
        for i in (0..n).rev() {
            let before = if i == 0 { self.left } else { self.syllables[i - 1].shift };
            out.push(-self.syllables[i].power, -before);
        }
        out
    }

    /// The same element with the left translation removed. Left translation
    /// does not move the isometric sphere.
    pub fn without_left(&self) -> Word {
        if self.syllables.is_empty() {
            return Word::identity();
        }
        Word { left: Shift::ZERO, syllables: self.syllables.clone() }
    }

    /// Representative of the double coset `Gamma_inf w Gamma_inf`: left and
    /// right translations removed.
    pub fn coset_key(&self) -> Word {
        let mut w = self.without_left();
        if let Some(last) = w.syllables.last_mut() {
            last.shift = Shift::ZERO;
        }
        w
    }

    pub fn with_right_shift(&self, s: Shift) -> Word {
        let mut w = self.clone();
        match w.syllables.last_mut() {
            Some(last) => last.shift = s,
            None => w.left = s,
        }
        w
    }

    fn sort_key(&self) -> (u32, Vec<(u32, bool, Shift)>, Shift) {
        (
            self.len(),
            self.syllables
                .iter()
                .map(|s| (s.power.unsigned_abs(), s.power < 0, s.shift))
                .collect(),
            self.left,
        )
    }
}

impl Ord for Word {
    /// Shorter words first, positive powers before negative ones.
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        if !self.left.is_zero() {
            write!(f, "{}", self.left)?;
        }
        for s in &self.syllables {
            if s.power == 1 {
                write!(f, "g")?;
            } else {
                write!(f, "g^{}", s.power)?;
            }
            if !s.shift.is_zero() {
                write!(f, "{}", s.shift)?;
            }
        }
        Ok(())
    }
}
