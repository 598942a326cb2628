//! Permutations of {1..n}, stored by image.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numkit::{ComplexMatrix, ONE};

/// Bijection of {1..n}; `image[i-1] = p(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty image".into()));
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!("{image:?}: value {v} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidPermutation(format!("{image:?}: value {v} repeated")));
            }
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self { image: (1..=n).collect() }
    }

    /// Builds from 0-based images; the caller guarantees bijectivity.
    pub(crate) fn from_zero_based(image0: &[usize]) -> Self {
        debug_assert!(Self::new(image0.iter().map(|v| v + 1).collect()).is_ok());
        Self { image: image0.iter().map(|v| v + 1).collect() }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// p(i) for 1-based i.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    /// 0-based view: p(i+1) - 1.
    pub(crate) fn at0(&self, i: usize) -> usize {
        self.image[i] - 1
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { image: inv }
    }

    /// (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::InvalidPermutation(format!(
                "cannot compose permutations on {} and {} letters",
                self.n(),
                other.n()
            )));
        }
        Ok(Self { image: other.image.iter().map(|&j| self.image[j - 1]).collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn fixed_points(&self) -> usize {
        self.image.iter().enumerate().filter(|&(i, &v)| v == i + 1).count()
    }

    /// P with P|i> = |p(i)>, embedded in dimension `dim` (identity beyond n).
    pub fn matrix(&self, dim: usize) -> Result<ComplexMatrix> {
        if dim < self.n() {
            return Err(Error::DimensionMismatch(format!(
                "permutation on {} letters does not fit in dimension {dim}",
                self.n()
            )));
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            let target = if i < self.n() { self.at0(i) } else { i };
            m[(target, i)] = ONE;
        }
        Ok(m)
    }

    /// Next permutation in lexicographic order, or `None` after the last.
    pub fn next_lex(&self) -> Option<Self> {
        let mut a = self.image.clone();
        let n = a.len();
        let mut i = n.checked_sub(1)?;
        while i > 0 && a[i - 1] >= a[i] {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        let mut j = n - 1;
        while a[j] <= a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        Some(Self { image: a })
    }

    /// All n! permutations in lexicographic order.
    pub fn all(n: usize) -> LexPermutations {
        LexPermutations { next: Some(Self::identity(n)) }
    }

    /// All n! permutations, collected.
    pub fn all_vec(n: usize) -> Vec<Self> {
        Self::all(n).collect()
    }
}

pub struct LexPermutations {
    next: Option<Permutation>,
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        self.next = cur.next_lex();
        Some(cur)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.image.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Permutation {
    type Err = Error;

    /// Parses "2,3,1" or "(2,3,1)".
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let image = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("permutation {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(image)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.image.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let image = Vec::<usize>::deserialize(d)?;
        Permutation::new(image).map_err(serde::de::Error::custom)
    }
}
