use std::collections::BTreeMap;

use serde::Serialize;

use super::perm::Perm;
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};

/// One `(arity, degree)` slot of a graded Σ-module: a labelled basis with the
/// matrices of the adjacent transpositions `(i i+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSlot {
    pub arity: usize,
    pub degree: i32,
    pub labels: Vec<String>,
    /// `transpositions[i]` is the matrix of `(i+1 i+2)` acting on columns.
    pub transpositions: Vec<Matrix>,
}

impl SigmaSlot {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Matrix of an arbitrary permutation, built from adjacent transpositions.
    pub fn action(&self, sigma: &Perm) -> Result<Matrix> {
        if sigma.len() != self.arity {
            return Err(Error::SizeMismatch(format!(
                "S_{} acting on arity {}",
                sigma.len(),
                self.arity
            )));
        }
        let field = self
            .transpositions
            .first()
            .map(|m| m.field())
            .unwrap_or(Field::Rational);
        let mut acc = Matrix::identity(field, self.dim());
        // σ = s_{a_1} ... s_{a_r}; bubble sort the image list.
        let mut word = Vec::new();
        let mut v = sigma.images().to_vec();
        loop {
            let Some(i) = (0..v.len().saturating_sub(1)).find(|&i| v[i] > v[i + 1]) else {
                break;
            };
            v.swap(i, i + 1);
            word.push(i);
        }
        // v = σ ∘ s_{w1} ∘ ... ∘ s_{wr} sorted, so σ = s_{wr} ... s_{w1}; as
        // images swap positions we get σ = (product in reverse).
        for &i in word.iter().rev() {
            acc = self.transpositions[i].mul(&acc)?;
        }
        Ok(acc)
    }

    /// Checks the Coxeter relations, so the table defines an action of `S_n`.
    pub fn is_group_action(&self) -> bool {
        let n = self.transpositions.len();
        let field = match self.transpositions.first() {
            Some(m) => m.field(),
            None => return true,
        };
        let id = Matrix::identity(field, self.dim());
        let pow = |m: &Matrix, k: usize| {
            let mut acc = id.clone();
            for _ in 0..k {
                acc = acc.mul(m).unwrap();
            }
            acc
        };
        for i in 0..n {
            let s = &self.transpositions[i];
            if pow(s, 2) != id {
                return false;
            }
            for j in i + 1..n {
                let t = &self.transpositions[j];
                let st = s.mul(t).unwrap();
                let order = if j == i + 1 { 3 } else { 2 };
                if pow(&st, order) != id {
                    return false;
                }
            }
        }
        true
    }
}

/// A graded Σ-module given slotwise by explicit action tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SigmaModuleGraded {
    pub slots: BTreeMap<(usize, i32), SigmaSlot>,
}

#[derive(Serialize)]
struct SlotJson<'a> {
    arity: usize,
    degree: i32,
    dim: usize,
    labels: &'a [String],
}

impl SigmaModuleGraded {
    pub fn insert(&mut self, slot: SigmaSlot) {
        self.slots.insert((slot.arity, slot.degree), slot);
    }

    pub fn dim(&self, arity: usize, degree: i32) -> usize {
        self.slots.get(&(arity, degree)).map_or(0, SigmaSlot::dim)
    }

    pub fn is_zero(&self) -> bool {
        self.slots.values().all(|s| s.dim() == 0)
    }

    /// Nonzero slots as `(arity, degree, dim)`.
    pub fn nonzero(&self) -> Vec<(usize, i32, usize)> {
        self.slots
            .values()
            .filter(|s| s.dim() > 0)
            .map(|s| (s.arity, s.degree, s.dim()))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v: Vec<SlotJson> = self
            .slots
            .values()
            .map(|s| SlotJson {
                arity: s.arity,
                degree: s.degree,
                dim: s.dim(),
                labels: &s.labels,
            })
            .collect();
        serde_json::to_value(v).expect("serializable")
    }
}
