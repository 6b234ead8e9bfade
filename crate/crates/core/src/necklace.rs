//! Necklace data model and the insertion rule of the process.
//!
//! Beads sit at positions `0..n`. Gap `i` lies between bead `i` and bead
//! `(i + 1) % n`, so a necklace of size `n` has exactly `n` gaps and a
//! uniformly random gap is a uniform integer in `0..n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bead color. Ordered `Black < White`, matching the binary encoding
/// `Black = 0`, `White = 1` used for canonical forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BeadColor {
    Black,
    White,
}

impl BeadColor {
    pub fn as_char(self) -> char {
        match self {
            BeadColor::White => 'W',
            BeadColor::Black => 'B',
        }
    }
}

/// A cyclic sequence of beads, stored as one full turn starting at index 0.
///
/// The type can represent necklaces outside the process class (empty,
/// monochrome, adjacent whites); [`Necklace::is_valid`] decides membership.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Necklace {
    beads: Vec<BeadColor>,
}

impl Necklace {
    pub fn new(beads: Vec<BeadColor>) -> Self {
        Necklace { beads }
    }

    /// The size-2 necklace `[White, Black]` every process starts from.
    pub fn start() -> Self {
        Necklace::new(vec![BeadColor::White, BeadColor::Black])
    }

    pub fn beads(&self) -> &[BeadColor] {
        &self.beads
    }

    pub fn size(&self) -> usize {
        self.beads.len()
    }

    pub fn white_count(&self) -> usize {
        self.beads
            .iter()
            .filter(|&&b| b == BeadColor::White)
            .count()
    }

    fn check_gap(&self, gap: usize) -> Result<()> {
        if gap >= self.size() {
            return Err(Error::OutOfRange {
                index: gap,
                limit: self.size(),
            });
        }
        Ok(())
    }

    /// Color of the bead that insertion into `gap` would produce: white iff
    /// both neighbours are black.
    pub fn gap_color(&self, gap: usize) -> Result<BeadColor> {
        self.check_gap(gap)?;
        let n = self.size();
        let left = self.beads[gap];
        let right = self.beads[(gap + 1) % n];
        Ok(if left == BeadColor::Black && right == BeadColor::Black {
            BeadColor::White
        } else {
            BeadColor::Black
        })
    }

    /// Returns a new necklace with a bead inserted into `gap`.
    pub fn insert_at(&self, gap: usize) -> Result<Necklace> {
        let color = self.gap_color(gap)?;
        let mut beads = Vec::with_capacity(self.size() + 1);
        beads.extend_from_slice(&self.beads[..=gap]);
        beads.push(color);
        beads.extend_from_slice(&self.beads[gap + 1..]);
        Ok(Necklace { beads })
    }

    /// In-place insertion used by the simulator's hot loop. Caller guarantees
    /// `gap < size`.
    pub(crate) fn insert_in_place(&mut self, gap: usize) {
        let n = self.beads.len();
        let left = self.beads[gap];
        let right = self.beads[(gap + 1) % n];
        let color = if left == BeadColor::Black && right == BeadColor::Black {
            BeadColor::White
        } else {
            BeadColor::Black
        };
        self.beads.insert(gap + 1, color);
    }

    /// Membership in the class of necklaces built from blocks "one white
    /// followed by a non-empty run of blacks".
    pub fn is_valid(&self) -> bool {
        let n = self.size();
        if n < 2 {
            return false;
        }
        let whites = self.white_count();
        if whites == 0 || whites == n {
            return false;
        }
        (0..n).all(|i| {
            !(self.beads[i] == BeadColor::White && self.beads[(i + 1) % n] == BeadColor::White)
        })
    }

    /// Number of gaps whose insertion would produce a white bead.
    pub fn white_gap_count(&self) -> usize {
        let n = self.size();
        (0..n)
            .filter(|&i| {
                self.beads[i] == BeadColor::Black && self.beads[(i + 1) % n] == BeadColor::Black
            })
            .count()
    }

    /// Lexicographically minimal rotation under `Black = 0`, `White = 1`.
    /// Reflections are not identified.
    pub fn canonical_form(&self) -> Necklace {
        let start = least_rotation(&self.beads);
        let mut beads = Vec::with_capacity(self.size());
        beads.extend_from_slice(&self.beads[start..]);
        beads.extend_from_slice(&self.beads[..start]);
        Necklace { beads }
    }

    pub fn rotate(&self, by: usize) -> Necklace {
        let mut beads = self.beads.clone();
        if !beads.is_empty() {
            let by = by % beads.len();
            beads.rotate_left(by);
        }
        Necklace { beads }
    }
}

/// Start index of the lexicographically least rotation (two-pointer minimum
/// expression algorithm, linear time).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n < 2 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.beads {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Necklace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let beads = s
            .chars()
            .map(|c| match c {
                'W' => Ok(BeadColor::White),
                'B' => Ok(BeadColor::Black),
                other => Err(Error::InvalidInput(format!(
                    "unexpected bead character {other:?}, expected W or B"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Necklace { beads })
    }
}

impl Serialize for Necklace {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Necklace {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
