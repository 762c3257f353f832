use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{1..n}`, stored as the list of images.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((1..=n).collect())
    }

    /// Validates that `images` is a permutation of `1..=images.len()`.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &i in &images {
            if i == 0 || i > n || seen[i] {
                return Err(Error::LeafLabels(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Transposition of `a` and `b` in `S_n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut v: Vec<usize> = (1..=n).collect();
        v.swap(a - 1, b - 1);
        Perm(v)
    }

    /// The cycle `1 -> 2 -> ... -> n -> 1`.
    pub fn long_cycle(n: usize) -> Perm {
        Perm((1..=n).map(|i| i % n + 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&i| self.apply(i)).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j - 1] = i + 1;
        }
        Perm(v)
    }

    pub fn sign(&self) -> i32 {
        let mut inv = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i + 1 == j)
    }

    /// All of `S_n` in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", s.join(" "))
    }
}

/// Sign picked up when homogeneous items of the given degrees, listed in
/// their original order by `keys`, are rearranged into the listed order.
pub fn koszul_sign(items: &[(usize, i32)]) -> i32 {
    let mut parity = 0;
    for i in 0..items.len() {
        if items[i].1.rem_euclid(2) == 0 {
            continue;
        }
        for j in i + 1..items.len() {
            if items[j].1.rem_euclid(2) == 1 && items[i].0 > items[j].0 {
                parity ^= 1;
            }
        }
    }
    if parity == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_laws() {
        let all = Perm::all(4);
        assert_eq!(all.len(), 24);
        for a in &all {
            assert!(a.compose(&a.inverse()).is_identity());
            for b in &all[..5] {
                assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
            }
        }
        assert_eq!(Perm::long_cycle(3).images(), &[2, 3, 1]);
        assert_eq!(Perm::long_cycle(3).sign(), 1);
        assert_eq!(Perm::transposition(3, 1, 2).sign(), -1);
        assert!(Perm::from_images(vec![1, 1]).is_err());
    }

    #[test]
    fn koszul_only_counts_odd_pairs() {
        assert_eq!(koszul_sign(&[(1, 1), (0, 1)]), -1);
        assert_eq!(koszul_sign(&[(1, 2), (0, 1)]), 1);
        assert_eq!(koszul_sign(&[(2, 1), (1, 1), (0, 1)]), -1);
    }
}
