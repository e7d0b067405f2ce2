use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("element {0} does not occur in the ranking")]
    Unknown(String),
    #[error("element {0} occurs more than once")]
    Duplicate(String),
}

/// A strict total order over a finite set of elements, best first.
///
/// Ranks are 1-based: `rank(at(k)) == k`.
#[derive(Debug, Clone)]
pub struct Ranking<T: Copy + Eq + Hash> {
    order: Vec<T>,
    position: HashMap<T, usize>,
}

impl<T: Copy + Eq + Hash + Debug> Ranking<T> {
    pub fn new(order: Vec<T>) -> Result<Self, RankError> {
        let mut position = HashMap::with_capacity(order.len());
        for (i, x) in order.iter().enumerate() {
            if position.insert(*x, i).is_some() {
                return Err(RankError::Duplicate(format!("{x:?}")));
            }
        }
        Ok(Ranking { order, position })
    }

    /// 1-based rank of `x`.
    pub fn rank(&self, x: &T) -> Result<usize, RankError> {
        self.position
            .get(x)
            .map(|p| p + 1)
            .ok_or_else(|| RankError::Unknown(format!("{x:?}")))
    }

    /// 0-based position, `None` when absent.
    pub fn position(&self, x: &T) -> Option<usize> {
        self.position.get(x).copied()
    }

    /// The k-th ranked element (1-based).
    pub fn at(&self, k: usize) -> Option<T> {
        k.checked_sub(1).and_then(|i| self.order.get(i)).copied()
    }

    pub fn top(&self) -> Option<T> {
        self.order.first().copied()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.position.contains_key(x)
    }

    /// `a` strictly above `b`. Absent elements rank below every present one.
    pub fn prefers(&self, a: &T, b: &T) -> bool {
        let pa = self.position(a).unwrap_or(usize::MAX);
        let pb = self.position(b).unwrap_or(usize::MAX);
        pa < pb
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> + '_ {
        self.order.iter()
    }
}

impl<T: Copy + Eq + Hash> PartialEq for Ranking<T> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl<T: Copy + Eq + Hash> Eq for Ranking<T> {}
