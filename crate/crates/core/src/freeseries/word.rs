use core::cmp::Ordering;
use core::fmt;

use smallvec::SmallVec;

/// Monomial in the free algebra: a sequence of generator ids. Empty is the unit.
///
/// Words are ordered by length first, then lexicographically by id.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[u8; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(id: u8) -> Self {
        let mut v = SmallVec::new();
        v.push(id);
        Word(v)
    }

    pub fn from_letters(letters: &[u8]) -> Self {
        Word(SmallVec::from_slice(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v: SmallVec<[u8; 8]> = SmallVec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, id: u8) {
        self.0.push(id);
    }

    /// Position of this word among all words of its length over `k` letters.
    pub fn rank(&self, k: usize) -> usize {
        self.0.iter().fold(0usize, |acc, &l| acc * k + l as usize)
    }

    /// Inverse of [`Word::rank`].
    pub fn unrank(mut index: usize, len: usize, k: usize) -> Word {
        let mut v: SmallVec<[u8; 8]> = SmallVec::from_elem(0, len);
        for slot in v.iter_mut().rev() {
            *slot = (index % k) as u8;
            index /= k;
        }
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
