//! Value vectors in `N^u` under the componentwise partial order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SupportValue(Vec<u32>);

impl SupportValue {
    pub fn new(coords: Vec<u32>) -> Self {
        SupportValue(coords)
    }

    pub fn zero(u: usize) -> Self {
        SupportValue(vec![0; u])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise `<=` (the partial order, not the derived `Ord`).
    pub fn le(&self, other: &Self) -> bool {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strictly below in the partial order.
    pub fn lt(&self, other: &Self) -> bool {
        self.le(other) && self != other
    }

    pub fn join(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        SupportValue(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn meet(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        SupportValue(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// The weight `|s|`: sum of all coordinates.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Coordinates with a nonzero entry, 0-based.
    pub fn nonzero_coords(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }
}

impl std::fmt::Display for SupportValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}
