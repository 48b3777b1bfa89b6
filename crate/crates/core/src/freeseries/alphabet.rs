use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::SeriesError;

/// A named generator together with its interned id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub index: u8,
}

/// Ordered, immutable table of generator names. The position of a name is its id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, T>(names: I) -> Result<Arc<Self>, SeriesError>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for name in names {
            let name = name.into();
            if out.contains(&name) {
                return Err(SeriesError::DuplicateGenerator(name));
            }
            out.push(name);
        }
        if out.len() > 256 {
            return Err(SeriesError::TooManyGenerators);
        }
        Ok(Arc::new(Alphabet { names: out }))
    }

    /// Alphabet `A, B`.
    pub fn ab() -> Arc<Self> {
        Self::new(["A", "B"]).expect("distinct names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Result<u8, SeriesError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as u8)
            .ok_or_else(|| SeriesError::UnknownGenerator(name.to_string()))
    }

    pub fn name(&self, id: u8) -> &str {
        &self.names[id as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator(&self, id: u8) -> Generator {
        Generator { name: self.names[id as usize].clone(), index: id }
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (0..self.names.len()).map(|i| self.generator(i as u8))
    }
}

pub(crate) fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}
