use std::collections::{BTreeMap, HashMap};

use super::presentation::Presentation;
use super::truncated::TruncatedOperad;
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, SparseVec};
use crate::symtree::GenId;

/// Chainification `ch⟨G|R⟩ = ⟨G ⊕ s⁻¹G | R ⊕ s⁻¹R⟩` with `d(g) = s⁻¹g`.
///
/// The desuspended copy of `g` is named `ds.g` and keeps the symmetry of
/// `g`. The derived relations are the Leibniz differentials of `R`.
pub fn chainify(p: &Presentation) -> Result<Presentation> {
    if p.has_differential() {
        return Err(Error::Invalid(format!(
            "`{}` already carries a differential",
            p.name
        )));
    }
    let mut out = Presentation::new(format!("ch({})", p.name), p.field, p.planar);
    out.integral = p.integral;
    let gens: Vec<_> = p.signature().generators().map(|(_, g)| g.clone()).collect();
    for g in &gens {
        out.add_generator(g.clone())?;
    }
    let mut shadow = Vec::with_capacity(gens.len());
    for g in &gens {
        shadow.push(out.add_generator(g.desuspended())?);
    }
    for (i, ds) in shadow.iter().enumerate() {
        let image = out.generator_element(*ds);
        out.set_differential(GenId(i as u16), image)?;
    }
    for r in p.relations() {
        out.add_relation(r.clone())?;
    }
    for r in p.relations() {
        let dr = out.apply_differential(r);
        out.add_relation(dr)?;
    }
    for (name, expr) in p.classes() {
        out.add_class(name.clone(), expr.clone());
    }
    Ok(out)
}

/// The complex `U𝒪 ∘ η s⁻¹U𝒪` in one arity.
///
/// Basis elements are trees decorated by basis elements of `𝒪(k)`, `k ≥ 2`,
/// with children ordered by their smallest leaf. In a *rooted* tree the root
/// carries an element of `𝒪` and every other node a desuspended one; in a
/// *pure* tree every node is desuspended (the root is the unit). The
/// differential sends a rooted tree to the pure tree of the same shape and
/// kills pure trees.
#[derive(Clone, Debug)]
pub struct ChNormalForm {
    pub arity: usize,
    pub rooted: BTreeMap<i32, Vec<String>>,
    pub pure: BTreeMap<i32, Vec<String>>,
}

impl ChNormalForm {
    pub fn degrees(&self) -> Vec<i32> {
        let mut ds: Vec<i32> = self.rooted.keys().chain(self.pure.keys()).copied().collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    fn rooted_at(&self, d: i32) -> &[String] {
        self.rooted.get(&d).map_or(&[], |v| v.as_slice())
    }

    fn pure_at(&self, d: i32) -> &[String] {
        self.pure.get(&d).map_or(&[], |v| v.as_slice())
    }

    /// Labels of the degree-`d` basis: rooted trees first, then pure trees.
    pub fn basis(&self, d: i32) -> Vec<String> {
        let mut out: Vec<String> = self.rooted_at(d).iter().map(|s| format!("ι·{s}")).collect();
        out.extend(self.pure_at(d).iter().map(|s| format!("1·{s}")));
        out
    }

    pub fn dim(&self, d: i32) -> usize {
        self.rooted_at(d).len() + self.pure_at(d).len()
    }

    /// Matrix of `∂` from degree `d` to degree `d - 1`.
    pub fn differential(&self, d: i32, field: Field) -> Matrix {
        let target_rooted = self.rooted_at(d - 1).len();
        let pure_index: HashMap<&str, usize> = self
            .pure_at(d - 1)
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut cols = Vec::with_capacity(self.dim(d));
        for s in self.rooted_at(d) {
            let i = pure_index[s.as_str()];
            cols.push(SparseVec::unit(target_rooted + i, field));
        }
        cols.extend(std::iter::repeat(SparseVec::new()).take(self.pure_at(d).len()));
        Matrix::from_columns(field, self.dim(d - 1), &cols)
    }

    /// Homology dimension at degree `d`.
    pub fn homology_dim(&self, d: i32, field: Field) -> Result<usize> {
        let out = self.differential(d, field).rank()?;
        let inc = self.differential(d + 1, field).rank()?;
        Ok(self.dim(d) - out - inc)
    }
}

/// One node shape: a basis element of `𝒪(k)` in degree `e`.
#[derive(Clone, Copy)]
struct Decoration {
    arity: usize,
    degree: i32,
    index: usize,
}

/// Builds the normal-form complex of `ch(p)` in arity `n`.
pub fn ch_normal_form(p: &Presentation, n: usize) -> Result<ChNormalForm> {
    if p.has_differential() {
        return Err(Error::Invalid(format!(
            "`{}` already carries a differential",
            p.name
        )));
    }
    let mut op = TruncatedOperad::new(p);
    let mut decorations = Vec::new();
    for k in 2..=n {
        for e in op.degrees(k) {
            for index in 0..op.dim(k, e) {
                decorations.push(Decoration { arity: k, degree: e, index });
            }
        }
    }
    let mut out = ChNormalForm {
        arity: n,
        rooted: BTreeMap::new(),
        pure: BTreeMap::new(),
    };
    if n == 1 {
        out.pure.insert(0, vec!["1".to_string()]);
        return Ok(out);
    }
    let labels: Vec<usize> = (1..=n).collect();
    // (structure, Σ e_v, node count)
    for (s, sum_e, nodes) in shapes(&labels, &decorations) {
        let pure_deg = sum_e - nodes as i32;
        out.pure.entry(pure_deg).or_default().push(s.clone());
        out.rooted.entry(pure_deg + 1).or_default().push(s);
    }
    Ok(out)
}

fn shapes(labels: &[usize], decs: &[Decoration]) -> Vec<(String, i32, usize)> {
    if labels.len() == 1 {
        return vec![(labels[0].to_string(), 0, 0)];
    }
    let mut out = Vec::new();
    for dec in decs.iter().filter(|d| d.arity <= labels.len()) {
        for blocks in set_partitions(labels, dec.arity) {
            let options: Vec<Vec<(String, i32, usize)>> = blocks.iter().map(|b| shapes(b, decs)).collect();
            let mut acc: Vec<(Vec<String>, i32, usize)> = vec![(Vec::new(), dec.degree, 1)];
            for opt in &options {
                let mut next = Vec::with_capacity(acc.len() * opt.len());
                for (parts, e, c) in &acc {
                    for (s, e2, c2) in opt {
                        let mut p = parts.clone();
                        p.push(s.clone());
                        next.push((p, e + e2, c + c2));
                    }
                }
                acc = next;
            }
            for (parts, e, c) in acc {
                let name = format!("o{}_{}[{}]({})", dec.arity, dec.degree, dec.index, parts.join(","));
                out.push((name, e, c));
            }
        }
    }
    out
}

/// Unordered partitions of `labels` into `k` nonempty blocks, blocks listed
/// by smallest element.
fn set_partitions(labels: &[usize], k: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, labels: &[usize], k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == labels.len() {
            if cur.len() == k {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() + (labels.len() - i) < k {
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(labels[i]);
            rec(i + 1, labels, k, cur, out);
            cur[b].pop();
        }
        if cur.len() < k {
            cur.push(vec![labels[i]]);
            rec(i + 1, labels, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, labels, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_partition_counts() {
        // Stirling numbers of the second kind
        assert_eq!(set_partitions(&[1, 2, 3, 4], 2).len(), 7);
        assert_eq!(set_partitions(&[1, 2, 3, 4], 3).len(), 6);
        assert_eq!(set_partitions(&[1, 2, 3, 4, 5], 2).len(), 15);
    }
}
