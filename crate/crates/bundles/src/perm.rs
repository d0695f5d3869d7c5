//! Permutations of `{0, .., n-1}`, used both for fiber automorphisms and for
//! vertex maps of whole graphs.

use crate::error::{Error, Result};
use serde::Serialize;

/// A bijection of `{0, .., n-1}` stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// The identity on `n` points.
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// Builds a permutation from an image table, rejecting non-bijections.
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image value {v} out of range for degree {n}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "image value {v} repeated"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    /// Builds a permutation of `{0, .., n-1}` from disjoint cycles. Points not
    /// mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for window in 0..cycle.len() {
                let from = cycle[window];
                let to = cycle[(window + 1) % cycle.len()];
                if from >= n || to >= n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry out of range for degree {n}"
                    )));
                }
                if touched[from] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {from} appears in more than one cycle"
                    )));
                }
                touched[from] = true;
                image[from] = to;
            }
        }
        Ok(Permutation { image })
    }

    /// Number of points acted on.
    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    /// Composition `self . first`: `first` is applied before `self`.
    pub fn compose(&self, first: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), first.degree());
        Permutation {
            image: first.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (v, &w) in self.image.iter().enumerate() {
            image[w] = v;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(v, &w)| v == w)
    }

    /// Points moved by the permutation, in ascending order.
    pub fn support(&self) -> Vec<usize> {
        self.image
            .iter()
            .enumerate()
            .filter(|&(v, &w)| v != w)
            .map(|(v, _)| v)
            .collect()
    }
}
