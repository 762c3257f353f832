//! Decorated leaf-labelled trees: the basis of a free operad.
//!
//! A tree is read as the product of its nodes in preorder (root first, then
//! the children left to right). All Koszul signs in this crate are measured
//! against that order.

use std::fmt::Write as _;

use super::generator::{GenId, Signature, Symmetry};
use super::perm::koszul_sign;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(u16),
    Node(GenId, Box<[Tree]>),
}

impl Tree {
    pub fn leaf(label: usize) -> Tree {
        Tree::Leaf(label as u16)
    }

    pub fn node(gen: GenId, children: Vec<Tree>) -> Tree {
        Tree::Node(gen, children.into_boxed_slice())
    }

    /// The corolla `g(1, ..., k)`.
    pub fn corolla(gen: GenId, arity: usize) -> Tree {
        Tree::node(gen, (1..=arity).map(Tree::leaf).collect())
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, ch) => ch.iter().map(Tree::arity).sum(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    /// Leaf labels in planar order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Tree::Leaf(l) => out.push(*l as usize),
            Tree::Node(_, ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn min_leaf(&self) -> usize {
        match self {
            Tree::Leaf(l) => *l as usize,
            Tree::Node(_, ch) => ch.iter().map(Tree::min_leaf).min().unwrap_or(usize::MAX),
        }
    }

    pub fn degree(&self, sig: &Signature) -> i32 {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(g, ch) => sig.degree(*g) + ch.iter().map(|c| c.degree(sig)).sum::<i32>(),
        }
    }

    /// Generators in preorder.
    pub fn preorder(&self) -> Vec<GenId> {
        let mut out = Vec::new();
        self.collect_preorder(&mut out);
        out
    }

    fn collect_preorder(&self, out: &mut Vec<GenId>) {
        if let Tree::Node(g, ch) = self {
            out.push(*g);
            ch.iter().for_each(|c| c.collect_preorder(out));
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(_, ch) => 1 + ch.iter().map(Tree::node_count).sum::<usize>(),
        }
    }

    /// Number of nodes decorated by marker generators.
    pub fn marker_count(&self, sig: &Signature) -> usize {
        self.preorder().iter().filter(|g| sig.is_marker(**g)).count()
    }

    pub fn contains_generator(&self, pred: &impl Fn(GenId) -> bool) -> bool {
        match self {
            Tree::Leaf(_) => false,
            Tree::Node(g, ch) => pred(*g) || ch.iter().any(|c| c.contains_generator(pred)),
        }
    }

    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::leaf(f(*l as usize)),
            Tree::Node(g, ch) => Tree::node(*g, ch.iter().map(|c| c.relabel(f)).collect()),
        }
    }

    /// Checks node arities against the signature and that the leaves are
    /// labelled by a permutation of `1..n`.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        self.validate_arities(sig)?;
        let leaves = self.leaves();
        let n = leaves.len();
        let mut seen = vec![false; n + 1];
        for &l in &leaves {
            if l == 0 || l > n || seen[l] {
                return Err(Error::LeafLabels(format!(
                    "{} has leaves {:?}",
                    self.format(sig),
                    leaves
                )));
            }
            seen[l] = true;
        }
        Ok(())
    }

    fn validate_arities(&self, sig: &Signature) -> Result<()> {
        if let Tree::Node(g, ch) = self {
            if (g.0 as usize) >= sig.len() {
                return Err(Error::UnknownGenerator(format!("#{}", g.0)));
            }
            if ch.len() != sig.arity(*g) {
                return Err(Error::ArityMismatch(format!(
                    "`{}` takes {} inputs, got {}",
                    sig.get(*g).name,
                    sig.arity(*g),
                    ch.len()
                )));
            }
            for c in ch.iter() {
                c.validate_arities(sig)?;
            }
        }
        Ok(())
    }

    /// True when the leaves read `1, 2, ..., n` left to right.
    pub fn is_planar_ordered(&self) -> bool {
        self.leaves().iter().enumerate().all(|(i, &l)| l == i + 1)
    }

    /// Canonical representative and the sign relating it to `self`, or
    /// `None` when the symmetry of some node forces the tree to vanish.
    pub fn canonicalize(&self, sig: &Signature) -> Option<(Tree, i32)> {
        match self {
            Tree::Leaf(_) => Some((self.clone(), 1)),
            Tree::Node(g, ch) => {
                let mut sign = 1;
                let mut kids = Vec::with_capacity(ch.len());
                for c in ch.iter() {
                    let (t, s) = c.canonicalize(sig)?;
                    sign *= s;
                    kids.push(t);
                }
                let degs: Vec<i32> = kids.iter().map(|k| k.degree(sig)).collect();
                let s = order_children(sig.symmetry(*g), &mut kids, &degs)?;
                Some((Tree::node(*g, kids), sign * s))
            }
        }
    }

    pub fn format(&self, sig: &Signature) -> String {
        let mut s = String::new();
        self.write_to(sig, &mut s);
        s
    }

    fn write_to(&self, sig: &Signature, out: &mut String) {
        match self {
            Tree::Leaf(l) => {
                let _ = write!(out, "{l}");
            }
            Tree::Node(g, ch) => {
                out.push_str(&sig.get(*g).name);
                out.push('(');
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.write_to(sig, out);
                }
                out.push(')');
            }
        }
    }
}

/// Reorders the children of a node with the given symmetry into canonical
/// position and returns the resulting sign (`None` if the node vanishes).
fn order_children(sym: Symmetry, kids: &mut Vec<Tree>, degs: &[i32]) -> Option<i32> {
    match sym {
        Symmetry::None => Some(1),
        Symmetry::Symmetric | Symmetry::Antisymmetric => {
            let mut idx: Vec<usize> = (0..kids.len()).collect();
            idx.sort_by(|&a, &b| kids[a].cmp(&kids[b]));
            let items: Vec<(usize, i32)> = idx.iter().map(|&i| (i, degs[i])).collect();
            let mut sign = koszul_sign(&items);
            if sym == Symmetry::Antisymmetric {
                sign *= perm_sign(&idx);
            }
            let sorted: Vec<Tree> = idx.iter().map(|&i| kids[i].clone()).collect();
            for w in idx.windows(2) {
                if kids[w[0]] == kids[w[1]] {
                    let mut swap = if degs[w[0]].rem_euclid(2) == 1 { -1 } else { 1 };
                    if sym == Symmetry::Antisymmetric {
                        swap = -swap;
                    }
                    if swap < 0 {
                        return None;
                    }
                }
            }
            *kids = sorted;
            Some(sign)
        }
        Symmetry::Cyclic => {
            let k = kids.len();
            let rotation_sign = |r: usize| -> i32 {
                let a: i32 = degs[..r].iter().sum();
                let b: i32 = degs[r..].iter().sum();
                if (a * b).rem_euclid(2) == 1 {
                    -1
                } else {
                    1
                }
            };
            let rotated = |r: usize| -> Vec<&Tree> { (0..k).map(|i| &kids[(i + r) % k]).collect() };
            let best = (0..k).min_by(|&a, &b| rotated(a).cmp(&rotated(b))).unwrap_or(0);
            let s = rotation_sign(best);
            for r in 0..k {
                if r != best && rotated(r) == rotated(best) && rotation_sign(r) != s {
                    return None;
                }
            }
            let new: Vec<Tree> = rotated(best).into_iter().cloned().collect();
            *kids = new;
            Some(s)
        }
    }
}

fn perm_sign(idx: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
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

/// Grafts `b` onto leaf `i` of `a` (no canonicalization).
///
/// Leaves of `b` become `i..i+m-1`, leaves of `a` above `i` shift by `m-1`.
/// The sign accounts for moving the nodes of `b` past the nodes of `a` that
/// follow leaf `i` in preorder.
pub fn graft(a: &Tree, i: usize, b: &Tree, sig: &Signature) -> Result<(Tree, i32)> {
    let n = a.arity();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, arity: n });
    }
    let m = b.arity();
    let b_shifted = b.relabel(&|l| l + i - 1);
    let mut after = 0i32;
    let mut found = false;
    let tree = graft_rec(a, i, m, &b_shifted, sig, &mut found, &mut after);
    let bdeg = b.degree(sig);
    let sign = if (bdeg * after).rem_euclid(2) == 1 { -1 } else { 1 };
    Ok((tree, sign))
}

fn graft_rec(
    t: &Tree,
    i: usize,
    m: usize,
    b: &Tree,
    sig: &Signature,
    found: &mut bool,
    after: &mut i32,
) -> Tree {
    match t {
        Tree::Leaf(l) => {
            let l = *l as usize;
            if l == i {
                *found = true;
                b.clone()
            } else if l > i {
                Tree::leaf(l + m - 1)
            } else {
                t.clone()
            }
        }
        Tree::Node(g, ch) => {
            if *found {
                *after += sig.degree(*g);
            }
            let kids = ch
                .iter()
                .map(|c| graft_rec(c, i, m, b, sig, found, after))
                .collect();
            Tree::node(*g, kids)
        }
    }
}

/// Replaces the node at preorder position `pos` by `replacement`, whose
/// leaves `1..k` receive the node's children in order. The sign is the Koszul
/// sign of interleaving the child blocks with the replacement's nodes; the
/// replacement is taken to sit where the node sat. No canonicalization.
pub fn substitute_node(t: &Tree, pos: usize, replacement: &Tree, sig: &Signature) -> (Tree, i32) {
    let mut counter = 0usize;
    let mut sign = 1;
    let out = subst_rec(t, pos, replacement, sig, &mut counter, &mut sign);
    (out, sign)
}

fn subst_rec(
    t: &Tree,
    pos: usize,
    rep: &Tree,
    sig: &Signature,
    counter: &mut usize,
    sign: &mut i32,
) -> Tree {
    match t {
        Tree::Leaf(_) => t.clone(),
        Tree::Node(g, ch) => {
            let here = *counter;
            *counter += 1;
            let kids: Vec<Tree> = ch
                .iter()
                .map(|c| subst_rec(c, pos, rep, sig, counter, sign))
                .collect();
            if here != pos {
                return Tree::node(*g, kids);
            }
            let rep_nodes = rep.node_count();
            let mut order: Vec<(usize, i32)> = Vec::new();
            let mut node_key = 0usize;
            let built = plug(rep, &kids, sig, rep_nodes, &mut node_key, &mut order);
            *sign *= koszul_sign(&order);
            built
        }
    }
}

fn plug(
    rep: &Tree,
    kids: &[Tree],
    sig: &Signature,
    rep_nodes: usize,
    node_key: &mut usize,
    order: &mut Vec<(usize, i32)>,
) -> Tree {
    match rep {
        Tree::Leaf(j) => {
            let j = *j as usize;
            let c = &kids[j - 1];
            order.push((rep_nodes + j - 1, c.degree(sig)));
            c.clone()
        }
        Tree::Node(g, ch) => {
            order.push((*node_key, sig.degree(*g)));
            *node_key += 1;
            let sub = ch
                .iter()
                .map(|c| plug(c, kids, sig, rep_nodes, node_key, order))
                .collect();
            Tree::node(*g, sub)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symtree::generator::GeneratorSymbol;

    fn sig() -> Signature {
        Signature::from_generators([
            GeneratorSymbol::new("mu", 2, 0, Symmetry::None),
            GeneratorSymbol::new("c", 2, 0, Symmetry::Symmetric),
            GeneratorSymbol::new("a", 2, 0, Symmetry::Antisymmetric),
            GeneratorSymbol::new("x", 2, 1, Symmetry::None),
            GeneratorSymbol::new("t", 3, 0, Symmetry::Cyclic),
        ])
        .unwrap()
    }

    fn g(sig: &Signature, n: &str) -> GenId {
        sig.find(n).unwrap()
    }

    #[test]
    fn canonical_is_idempotent() {
        let s = sig();
        let t = Tree::node(g(&s, "mu"), vec![Tree::leaf(2), Tree::leaf(1)]);
        assert_eq!(t.canonicalize(&s), Some((t.clone(), 1)));
    }

    #[test]
    fn symmetric_swap_has_positive_sign() {
        let s = sig();
        let t = Tree::node(g(&s, "c"), vec![Tree::leaf(2), Tree::leaf(1)]);
        let (c, sign) = t.canonicalize(&s).unwrap();
        assert_eq!(c, Tree::node(g(&s, "c"), vec![Tree::leaf(1), Tree::leaf(2)]));
        assert_eq!(sign, 1);
    }

    #[test]
    fn antisymmetric_with_odd_children() {
        let s = sig();
        let x = g(&s, "x");
        let left = Tree::node(x, vec![Tree::leaf(3), Tree::leaf(4)]);
        let right = Tree::node(x, vec![Tree::leaf(1), Tree::leaf(2)]);
        let t = Tree::node(g(&s, "a"), vec![left, right]);
        // antisymmetry gives -1, swapping two odd blocks another -1
        let (_, sign) = t.canonicalize(&s).unwrap();
        assert_eq!(sign, 1);
    }

    #[test]
    fn forced_zero_is_detected() {
        // Identical odd subtrees under an antisymmetric node of degree 0 vanish.
        let mut kids = vec![Tree::leaf(1), Tree::leaf(1)];
        assert_eq!(order_children(Symmetry::Antisymmetric, &mut kids, &[1, 1]), Some(1));
        let mut kids = vec![Tree::leaf(1), Tree::leaf(1)];
        assert_eq!(order_children(Symmetry::Antisymmetric, &mut kids, &[0, 0]), None);
        let mut kids = vec![Tree::leaf(1), Tree::leaf(1)];
        assert_eq!(order_children(Symmetry::Symmetric, &mut kids, &[1, 1]), None);
    }

    #[test]
    fn cyclic_rotation() {
        let s = sig();
        let t = Tree::node(g(&s, "t"), vec![Tree::leaf(2), Tree::leaf(3), Tree::leaf(1)]);
        let (c, sign) = t.canonicalize(&s).unwrap();
        assert_eq!(c.leaves(), vec![1, 2, 3]);
        assert_eq!(sign, 1);
    }

    #[test]
    fn rejects_bad_labels() {
        let s = sig();
        let mu = g(&s, "mu");
        let t = Tree::node(mu, vec![Tree::node(mu, vec![Tree::leaf(1), Tree::leaf(2)]), Tree::leaf(2)]);
        assert!(matches!(t.validate(&s), Err(Error::LeafLabels(_))));
    }

    #[test]
    fn graft_left_comb() {
        let s = sig();
        let mu = g(&s, "mu");
        let c = Tree::corolla(mu, 2);
        let (t, sign) = graft(&c, 1, &c, &s).unwrap();
        assert_eq!(t.format(&s), "mu(mu(1,2),3)");
        assert_eq!(sign, 1);
        assert!(graft(&c, 3, &c, &s).is_err());
    }

    #[test]
    fn graft_sign_passes_later_nodes() {
        let s = sig();
        let x = g(&s, "x");
        // x(x(1,2), x(3,4)) grafting x at leaf 1 moves x past the right x.
        let a = Tree::node(
            x,
            vec![
                Tree::node(x, vec![Tree::leaf(1), Tree::leaf(2)]),
                Tree::node(x, vec![Tree::leaf(3), Tree::leaf(4)]),
            ],
        );
        let (_, sign) = graft(&a, 1, &Tree::corolla(x, 2), &s).unwrap();
        assert_eq!(sign, -1);
        let (_, sign) = graft(&a, 3, &Tree::corolla(x, 2), &s).unwrap();
        assert_eq!(sign, 1);
    }
}
