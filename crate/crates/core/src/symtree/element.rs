use std::collections::BTreeMap;

use super::generator::{GenId, Signature};
use super::perm::Perm;
use super::tree::{graft, substitute_node, Tree};
use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar};

/// Finite linear combination of canonical trees of one arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperadElement {
    field: Field,
    arity: usize,
    terms: BTreeMap<Tree, Scalar>,
}

impl OperadElement {
    pub fn zero(field: Field, arity: usize) -> OperadElement {
        OperadElement {
            field,
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// `coef * tree`, canonicalized.
    pub fn from_tree(tree: &Tree, coef: Scalar, sig: &Signature) -> Result<OperadElement> {
        tree.validate(sig)?;
        let mut e = OperadElement::zero(coef.field(), tree.arity());
        e.add_tree(tree, &coef, sig);
        Ok(e)
    }

    pub fn generator(id: GenId, field: Field, sig: &Signature) -> OperadElement {
        let t = Tree::corolla(id, sig.arity(id));
        OperadElement::from_tree(&t, field.one(), sig).expect("corolla is well formed")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tree, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &Tree) -> Option<&Scalar> {
        self.terms.get(t)
    }

    /// Degree shared by all terms, `None` for zero or inhomogeneous elements.
    pub fn degree(&self, sig: &Signature) -> Option<i32> {
        let mut it = self.terms.keys().map(|t| t.degree(sig));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Adds `coef * tree`, canonicalizing the tree first.
    pub fn add_tree(&mut self, tree: &Tree, coef: &Scalar, sig: &Signature) {
        if let Some((t, s)) = tree.canonicalize(sig) {
            self.add_canonical(t, coef.signed(s));
        }
    }

    /// Adds a term whose tree is already canonical.
    pub fn add_canonical(&mut self, tree: Tree, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        debug_assert_eq!(tree.arity(), self.arity);
        match self.terms.entry(tree) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get().add(&coef);
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &OperadElement) -> Result<OperadElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_canonical(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OperadElement) -> Result<OperadElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> OperadElement {
        let mut out = OperadElement::zero(self.field, self.arity);
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(t, c)| (t.clone(), c.mul(s))).collect();
        out
    }

    pub fn neg(&self) -> OperadElement {
        self.scale(&self.field.one().neg())
    }

    fn check_compatible(&self, other: &OperadElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(format!(
                "adding arity {} to arity {}",
                other.arity, self.arity
            )));
        }
        Ok(())
    }

    /// Partial composition `self ∘_i other`.
    pub fn compose(&self, i: usize, other: &OperadElement, sig: &Signature) -> Result<OperadElement> {
        if i == 0 || i > self.arity {
            return Err(Error::IndexOutOfRange {
                index: i,
                arity: self.arity,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = OperadElement::zero(self.field, self.arity + other.arity - 1);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (t, s) = graft(a, i, b, sig)?;
                out.add_tree(&t, &ca.mul(cb).signed(s), sig);
            }
        }
        Ok(out)
    }

    /// Left action relabelling leaf `l` as `σ(l)`.
    pub fn act(&self, sigma: &Perm, sig: &Signature) -> Result<OperadElement> {
        if sigma.len() != self.arity {
            return Err(Error::SizeMismatch(format!(
                "permutation of {} letters acting on arity {}",
                sigma.len(),
                self.arity
            )));
        }
        let mut out = OperadElement::zero(self.field, self.arity);
        for (t, c) in &self.terms {
            out.add_tree(&t.relabel(&|l| sigma.apply(l)), c, sig);
        }
        Ok(out)
    }

    /// Applies the derivation determined by `d` on generators (missing
    /// generators differentiate to zero), with the Leibniz sign of the nodes
    /// preceding the differentiated one in preorder.
    pub fn differential(
        &self,
        d: &impl Fn(GenId) -> Option<OperadElement>,
        sig: &Signature,
    ) -> OperadElement {
        let mut out = OperadElement::zero(self.field, self.arity);
        for (t, c) in &self.terms {
            let gens = t.preorder();
            let mut before = 0i32;
            for (pos, g) in gens.iter().enumerate() {
                if let Some(dg) = d(*g) {
                    let lead = if before.rem_euclid(2) == 1 { -1 } else { 1 };
                    for (r, cr) in dg.terms() {
                        let (nt, s) = substitute_node(t, pos, r, sig);
                        out.add_tree(&nt, &c.mul(cr).signed(lead * s), sig);
                    }
                }
                before += sig.degree(*g);
            }
        }
        out
    }

    /// Operad morphism on the free operad: replaces each generator by its
    /// image under `f` (images live in `target`). Generators mapped to
    /// `None` send every tree containing them to zero.
    pub fn map_generators(
        &self,
        f: &impl Fn(GenId) -> Option<OperadElement>,
        source: &Signature,
        target: &Signature,
    ) -> OperadElement {
        let mut out = OperadElement::zero(self.field, self.arity);
        for (t, c) in &self.terms {
            let image = map_tree(t, f, source, target, self.field);
            for (it, ic) in image.terms() {
                out.add_canonical(it.clone(), ic.mul(c));
            }
        }
        out
    }

    /// Splits the element by tree degree.
    pub fn homogeneous_parts(&self, sig: &Signature) -> BTreeMap<i32, OperadElement> {
        let mut out: BTreeMap<i32, OperadElement> = BTreeMap::new();
        for (t, c) in &self.terms {
            out.entry(t.degree(sig))
                .or_insert_with(|| OperadElement::zero(self.field, self.arity))
                .add_canonical(t.clone(), c.clone());
        }
        out
    }

    pub fn format(&self, sig: &Signature) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { c.neg() } else { c.clone() };
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if !mag.is_one() {
                s.push_str(&mag.to_string());
                s.push('*');
            }
            s.push_str(&t.format(sig));
        }
        s
    }
}

/// Image of a single tree under a generator-wise morphism.
fn map_tree(
    t: &Tree,
    f: &impl Fn(GenId) -> Option<OperadElement>,
    source: &Signature,
    target: &Signature,
    field: Field,
) -> OperadElement {
    match t {
        Tree::Leaf(l) => {
            let mut e = OperadElement::zero(field, 1);
            e.add_canonical(Tree::leaf(*l as usize), field.one());
            e
        }
        Tree::Node(g, ch) => {
            let Some(root) = f(*g) else {
                return OperadElement::zero(field, t.arity());
            };
            // γ(root; k_1, ..., k_m) composed left to right: input i of the
            // root sits at position i + Σ_{j<i} (arity(k_j) - 1).
            let kids: Vec<OperadElement> = ch
                .iter()
                .map(|c| map_tree(&normalize_labels(c).0, f, source, target, field))
                .collect();
            let mut acc = root;
            let mut shift = 0;
            for (i, k) in kids.iter().enumerate() {
                acc = acc
                    .compose(i + 1 + shift, k, target)
                    .expect("arity checked by signature");
                shift += k.arity() - 1;
            }
            // acc has leaves 1..n in the block order of the children; relabel.
            let mut block_labels = Vec::new();
            for c in ch.iter() {
                let (_, labels) = normalize_labels(c);
                block_labels.extend(labels);
            }
            let sigma = Perm::from_images(block_labels).expect("children partition the leaves");
            acc.act(&sigma, target).expect("arity matches")
        }
    }
}

/// Relabels the leaves of `t` to `1..k` preserving their relative order;
/// returns the new tree and the sorted original labels.
fn normalize_labels(t: &Tree) -> (Tree, Vec<usize>) {
    let mut labels = t.leaves();
    labels.sort_unstable();
    let pos = |l: usize| labels.binary_search(&l).unwrap() + 1;
    (t.relabel(&pos), labels)
}
