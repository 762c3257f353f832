//! Enumeration of tree bases of free operads.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::generator::Signature;
use super::tree::Tree;

/// Caches canonical trees on the labels `1..m`, keyed by leaf count and the
/// number of marker nodes (at most `max_markers`).
#[derive(Clone, Debug)]
pub struct TreeEnumerator {
    sig: Signature,
    planar: bool,
    max_markers: usize,
    cache: HashMap<(usize, usize), Vec<Tree>>,
}

impl TreeEnumerator {
    pub fn new(sig: Signature, planar: bool) -> TreeEnumerator {
        TreeEnumerator::with_markers(sig, planar, 0)
    }

    pub fn with_markers(sig: Signature, planar: bool, max_markers: usize) -> TreeEnumerator {
        TreeEnumerator {
            sig,
            planar,
            max_markers,
            cache: HashMap::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// All canonical trees of arity `m` carrying exactly `markers` marker nodes,
    /// in canonical order.
    pub fn trees(&mut self, m: usize, markers: usize) -> &[Tree] {
        assert!(markers <= self.max_markers, "marker budget exceeded");
        if !self.cache.contains_key(&(m, markers)) {
            let built = self.build(m, markers);
            self.cache.insert((m, markers), built);
        }
        &self.cache[&(m, markers)]
    }

    /// Trees of arity `m` grouped by degree.
    pub fn by_degree(&mut self, m: usize, markers: usize) -> BTreeMap<i32, Vec<Tree>> {
        let sig = self.sig.clone();
        let mut out: BTreeMap<i32, Vec<Tree>> = BTreeMap::new();
        for t in self.trees(m, markers) {
            out.entry(t.degree(&sig)).or_default().push(t.clone());
        }
        out
    }

    fn build(&mut self, m: usize, markers: usize) -> Vec<Tree> {
        if m == 0 {
            return Vec::new();
        }
        if m == 1 {
            return if markers == 0 { vec![Tree::leaf(1)] } else { Vec::new() };
        }
        let mut out = BTreeSet::new();
        let gens: Vec<_> = self.sig.ids().collect();
        for g in gens {
            let a = self.sig.arity(g);
            if a > m {
                continue;
            }
            let own = self.sig.is_marker(g) as usize;
            if own > markers {
                continue;
            }
            let rest = markers - own;
            let blocks_list = if self.planar {
                compositions(m, a)
            } else {
                ordered_set_partitions(m, a)
            };
            for blocks in blocks_list {
                for dist in distributions(rest, a) {
                    let mut options: Vec<Vec<Tree>> = Vec::with_capacity(a);
                    let mut empty = false;
                    for (b, &k) in blocks.iter().zip(&dist) {
                        let base = self.trees(b.len(), k).to_vec();
                        if base.is_empty() {
                            empty = true;
                            break;
                        }
                        let relabelled = base.iter().map(|t| t.relabel(&|l| b[l - 1])).collect();
                        options.push(relabelled);
                    }
                    if empty {
                        continue;
                    }
                    for choice in Product::new(&options) {
                        let t = Tree::node(g, choice);
                        if let Some((c, _)) = t.canonicalize(&self.sig) {
                            out.insert(c);
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Complete list of canonical trees of arity `n` and degree `d`.
pub fn free_basis(sig: &Signature, n: usize, d: i32, planar: bool) -> Vec<Tree> {
    let mut e = TreeEnumerator::new(sig.clone(), planar);
    e.trees(n, 0)
        .iter()
        .filter(|t| t.degree(sig) == d)
        .cloned()
        .collect()
}

/// Ordered partitions of `{1..m}` into `k` nonempty blocks, each block sorted.
fn ordered_set_partitions(m: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut assign = vec![0usize; m];
    loop {
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in assign.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.push(blocks);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == m {
                return out;
            }
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

/// Consecutive blocks of `1..m` with `k` nonempty parts.
fn compositions(m: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == 1 {
            if start <= m {
                cur.push((start..=m).collect());
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for end in start..=m {
            if m - end < k - 1 {
                break;
            }
            cur.push((start..=end).collect());
            rec(end + 1, m, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, m, k, &mut Vec::new(), &mut out);
    out
}

/// Ways to write `total` as an ordered sum of `parts` nonnegative integers.
fn distributions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in distributions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Cartesian product iterator over lists of trees.
struct Product<'a> {
    options: &'a [Vec<Tree>],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Product<'a> {
    fn new(options: &'a [Vec<Tree>]) -> Self {
        let done = options.iter().any(|o| o.is_empty());
        Product {
            options,
            idx: vec![0; options.len()],
            done,
        }
    }
}

impl Iterator for Product<'_> {
    type Item = Vec<Tree>;

    fn next(&mut self) -> Option<Vec<Tree>> {
        if self.done {
            return None;
        }
        let item = self
            .idx
            .iter()
            .zip(self.options)
            .map(|(&i, o)| o[i].clone())
            .collect();
        let mut k = self.idx.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.idx[k] += 1;
            if self.idx[k] < self.options[k].len() {
                break;
            }
            self.idx[k] = 0;
        }
        Some(item)
    }
}
