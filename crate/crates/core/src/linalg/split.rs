use crate::error::{Error, Result};

/// Partition of an index range into two blocks.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BlockSplit {
    ambient: usize,
    first: Vec<usize>,
    second: Vec<usize>,
}

impl BlockSplit {
    pub fn new(ambient: usize, first: Vec<usize>, second: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; ambient];
        for &i in first.iter().chain(&second) {
            if i >= ambient || seen[i] {
                return Err(Error::DimensionMismatch(format!(
                    "index sets {:?} / {:?} do not partition 0..{}",
                    first, second, ambient
                )));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::DimensionMismatch(format!(
                "index sets {:?} / {:?} do not cover 0..{}",
                first, second, ambient
            )));
        }
        Ok(Self { ambient, first, second })
    }

    /// First `k` indices against the rest.
    pub fn leading(ambient: usize, k: usize) -> Self {
        Self { ambient, first: (0..k).collect(), second: (k..ambient).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn first(&self) -> &[usize] {
        &self.first
    }

    pub fn second(&self) -> &[usize] {
        &self.second
    }

    pub fn in_first(&self, i: usize) -> bool {
        self.first.contains(&i)
    }

    /// The permutation listing first-block indices, then second-block ones.
    pub fn ordering(&self) -> Vec<usize> {
        self.first.iter().chain(&self.second).copied().collect()
    }

    pub fn swapped(&self) -> Self {
        Self { ambient: self.ambient, first: self.second.clone(), second: self.first.clone() }
    }
}
