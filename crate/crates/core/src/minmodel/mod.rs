//! Resolutions by iterated linking: repeatedly kill the lowest-arity
//! homology in the kernel of the map to the target operad.

use std::collections::BTreeMap;

use crate::dgoperad::{link_chain, LinkSpec, LinkStep, Presentation, TruncatedOperad};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, Matrix, SparseVec};
use crate::homology::{homology_in_arities, homology_map, HomologySlot, HomologyTable};
use crate::symtree::{GeneratorSymbol, OperadElement, Perm, SigmaModuleGraded, SigmaSlot, Signature, Symmetry, Tree};

/// Largest arity accepted by default for symmetric resolutions.
pub const SYMMETRIC_CAP: usize = 5;
/// Largest arity accepted by default in planar mode.
pub const PLANAR_CAP: usize = 6;

/// A partially built resolution of `target`.
#[derive(Clone, Debug)]
pub struct ResolutionState {
    pub spec: LinkSpec,
    pub target: Presentation,
    /// Kernel homology vanishes in every arity below this one.
    pub next_arity: usize,
}

impl ResolutionState {
    /// Starts from the free operad on the generators of `target`.
    pub fn new(target: &Presentation) -> Result<Self> {
        if target.has_differential() {
            return Err(Error::Invalid("the target of a resolution has no differential".into()));
        }
        if target.signature().generators().any(|(_, g)| g.degree != 0) {
            return Err(Error::DegreeMismatch("resolutions need a degree-0 presentation".into()));
        }
        Ok(ResolutionState {
            spec: LinkSpec {
                base: target.without_relations(),
                steps: Vec::new(),
            },
            target: target.clone(),
            next_arity: 2,
        })
    }

    pub fn prefix(&self) -> Result<Presentation> {
        link_chain(&self.spec)
    }
}

/// Outcome of [`next_relation_module`].
#[derive(Clone, Debug)]
pub enum NextModule {
    Found {
        arity: usize,
        /// The kernel homology, one degree up, with its Σ-action.
        module: SigmaModuleGraded,
        step: LinkStep,
    },
    /// No kernel homology up to the truncation.
    Exhausted,
}

/// Kernel homology of the prefix → target map in its lowest arity, and the
/// linking step that kills it.
pub fn next_relation_module(state: &ResolutionState, max_arity: usize) -> Result<NextModule> {
    let prefix = state.prefix()?;
    let target = &state.target;
    let mut op = TruncatedOperad::new(&prefix);
    let mut tgt = TruncatedOperad::new(target);
    let images = |g: crate::symtree::GenId| -> Option<OperadElement> {
        let sym = prefix.signature().get(g);
        let id = target.signature().find(&sym.name)?;
        (sym.degree == 0).then(|| target.generator_element(id))
    };
    for n in state.next_arity.max(2)..=max_arity {
        let h = homology_in_arities(&mut op, n, n)?;
        let mut kernels: Vec<(&HomologySlot, Vec<SparseVec>)> = Vec::new();
        for slot in h.slots.values() {
            if slot.dim() == 0 {
                continue;
            }
            let field = h.field;
            let basis: Vec<SparseVec> = if slot.degree == 0 {
                let t = homology_in_arities(&mut tgt, n, n)?;
                let m = homology_map(&h, &t, &images, n, 0)?;
                m.kernel_basis()?.columns_sparse()
            } else {
                (0..slot.dim()).map(|i| SparseVec::unit(i, field)).collect()
            };
            if !basis.is_empty() {
                kernels.push((slot, basis));
            }
        }
        if kernels.is_empty() {
            continue;
        }
        let k = state.spec.steps.len();
        let mut step = LinkStep::default();
        let mut module = SigmaModuleGraded::default();
        let mut sig = prefix.signature().clone();
        for (slot, basis) in kernels {
            let first = step.generators.len();
            adjoin(&h, slot, &basis, k, &mut sig, &mut step, &mut module, first)?;
        }
        return Ok(NextModule::Found { arity: n, module, step });
    }
    Ok(NextModule::Exhausted)
}

/// Class coordinates of `σ·c`.
fn act_on_class(slot: &HomologySlot, sig: &Signature, sigma: &Perm, c: &SparseVec) -> Result<SparseVec> {
    slot.class_coords(&section(slot, c).act(sigma, sig)?)
}

fn section(slot: &HomologySlot, c: &SparseVec) -> OperadElement {
    let field = slot.representatives[0].field();
    let mut e = OperadElement::zero(field, slot.arity);
    for (i, coef) in c.entries() {
        e = e.add(&slot.representatives[*i].scale(coef)).expect("same arity");
    }
    e
}

/// Cycle representing `c`, averaged over `S_n` so that the choice is
/// equivariant.
fn equivariant_section(slot: &HomologySlot, sig: &Signature, c: &SparseVec) -> Result<OperadElement> {
    let n = slot.arity;
    let field = slot.representatives[0].field();
    let perms = Perm::all(n);
    let order = field.from_i64(perms.len() as i64);
    if order.is_zero() {
        return Err(Error::Unsupported(format!("averaging over S_{n} needs characteristic > {n}")));
    }
    let mut acc = OperadElement::zero(field, n);
    for s in &perms {
        let moved = act_on_class(slot, sig, &s.inverse(), c)?;
        acc = acc.add(&section(slot, &moved).act(s, sig)?)?;
    }
    Ok(acc.scale(&order.inv()))
}

/// Matrix of `σ` on the span of `basis` (class coordinates), in that basis.
fn restricted_action(slot: &HomologySlot, sig: &Signature, sigma: &Perm, basis: &[SparseVec]) -> Result<Matrix> {
    let field = slot.representatives[0].field();
    let mut ech = Echelon::new(field);
    for (i, b) in basis.iter().enumerate() {
        ech.insert_tagged(b, &SparseVec::unit(i, field));
    }
    let mut cols = Vec::with_capacity(basis.len());
    for b in basis {
        let red = ech.reduce_tagged(&act_on_class(slot, sig, sigma, b)?, &SparseVec::new());
        if !red.residue.is_zero() {
            return Err(Error::Internal("kernel is not Σ-stable".into()));
        }
        cols.push(red.tag.scale(&field.one().neg()));
    }
    Ok(Matrix::from_columns(field, basis.len(), &cols))
}

/// Elements of `basis` whose `S_n`-orbits are independent and together span
/// it, if such a choice exists greedily.
fn free_generators(slot: &HomologySlot, sig: &Signature, basis: &[SparseVec]) -> Result<Option<Vec<SparseVec>>> {
    let n = slot.arity;
    let perms = Perm::all(n);
    if basis.len() % perms.len() != 0 {
        return Ok(None);
    }
    let field = slot.representatives[0].field();
    let mut span = Echelon::new(field);
    let mut chosen = Vec::new();
    for b in basis {
        if span.contains(b) {
            continue;
        }
        let mut trial = span.clone();
        for s in &perms {
            trial.insert(&act_on_class(slot, sig, s, b)?);
        }
        if trial.rank() == span.rank() + perms.len() {
            span = trial;
            chosen.push(b.clone());
        }
        if span.rank() == basis.len() {
            return Ok(Some(chosen));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn adjoin(
    h: &HomologyTable,
    slot: &HomologySlot,
    basis: &[SparseVec],
    step_index: usize,
    sig: &mut Signature,
    step: &mut LinkStep,
    module: &mut SigmaModuleGraded,
    first: usize,
) -> Result<()> {
    let n = slot.arity;
    let degree = slot.degree + 1;
    let field = h.field;
    let base_sig = h.signature.clone();
    let name = |j: usize| format!("r{step_index}_{}", first + j + 1);
    let transpositions: Vec<Matrix> = if h.planar {
        Vec::new()
    } else {
        (1..n)
            .map(|i| restricted_action(slot, &base_sig, &Perm::transposition(n, i, i + 1), basis))
            .collect::<Result<_>>()?
    };
    let labels: Vec<String> = (0..basis.len()).map(name).collect();
    module.insert(SigmaSlot {
        arity: n,
        degree,
        labels: labels.clone(),
        transpositions: transpositions.clone(),
    });
    if h.planar {
        for (j, b) in basis.iter().enumerate() {
            step.generators.push(GeneratorSymbol::new(name(j), n, degree, Symmetry::None));
            step.attaching.push(section(slot, b));
        }
        return Ok(());
    }
    // one-dimensional trivial or sign representation
    if basis.len() == 1 {
        let scalars: Vec<_> = transpositions.iter().map(|m| m.get(0, 0).clone()).collect();
        let sym = if scalars.iter().all(|s| s.is_one()) {
            Some(Symmetry::Symmetric)
        } else if scalars.iter().all(|s| s.neg().is_one()) {
            Some(Symmetry::Antisymmetric)
        } else {
            None
        };
        if let Some(sym) = sym {
            step.generators.push(GeneratorSymbol::new(name(0), n, degree, sym));
            step.attaching.push(equivariant_section(slot, &base_sig, &basis[0])?);
            return Ok(());
        }
    }
    if let Some(gens) = free_generators(slot, &base_sig, basis)? {
        for (j, b) in gens.iter().enumerate() {
            step.generators.push(GeneratorSymbol::new(name(j), n, degree, Symmetry::None));
            step.attaching.push(section(slot, b));
        }
        return Ok(());
    }
    // general Σ-module: one generator per basis vector, relations recording
    // the action of the adjacent transpositions
    let mut ids = Vec::new();
    for (j, b) in basis.iter().enumerate() {
        let g = GeneratorSymbol::new(name(j), n, degree, Symmetry::None);
        step.generators.push(g.clone());
        step.attaching.push(equivariant_section(slot, &base_sig, b)?);
        ids.push(sig.push(g)?);
    }
    for (i, m) in transpositions.iter().enumerate() {
        let tau = Perm::transposition(n, i + 1, i + 2);
        for (j, &id) in ids.iter().enumerate() {
            let corolla = |id| OperadElement::from_tree(&Tree::corolla(id, n), field.one(), sig);
            let mut r = corolla(id)?.act(&tau, sig)?;
            for (l, &other) in ids.iter().enumerate() {
                let c = m.get(l, j);
                if !c.is_zero() {
                    r = r.sub(&corolla(other)?.scale(c))?;
                }
            }
            if !r.is_zero() {
                step.relations.push(r);
            }
        }
    }
    Ok(())
}

/// One adjoined module of a resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjoinedModule {
    pub step: usize,
    pub arity: usize,
    pub degree: i32,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub spec: LinkSpec,
    pub max_arity: usize,
    pub adjoined: Vec<AdjoinedModule>,
    pub modules: Vec<SigmaModuleGraded>,
}

impl Resolution {
    pub fn presentation(&self) -> Result<Presentation> {
        link_chain(&self.spec)
    }
}

/// Iterates [`next_relation_module`] until no kernel homology is left in
/// arities up to `max_arity`.
pub fn minimal_resolution(p: &Presentation, max_arity: usize) -> Result<Resolution> {
    let mut state = ResolutionState::new(p)?;
    let mut adjoined = Vec::new();
    let mut modules = Vec::new();
    loop {
        match next_relation_module(&state, max_arity)? {
            NextModule::Exhausted => break,
            NextModule::Found { arity, module, step } => {
                let k = state.spec.steps.len();
                for s in module.slots.values() {
                    adjoined.push(AdjoinedModule {
                        step: k,
                        arity,
                        degree: s.degree,
                        dim: s.dim(),
                    });
                }
                modules.push(module);
                state.spec.steps.push(step);
                state.next_arity = arity + 1;
            }
        }
    }
    Ok(Resolution {
        spec: state.spec,
        max_arity,
        adjoined,
        modules,
    })
}

/// Result of [`is_minimal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub minimal: bool,
    /// Whether operand arities strictly increase.
    pub arities_increase: bool,
    /// Generators whose differential is not decomposable.
    pub indecomposable: Vec<String>,
}

/// Checks strictly increasing operand arities and decomposability of every
/// adjoined differential (in the operad it is attached to).
pub fn is_minimal(spec: &LinkSpec) -> Result<MinimalityReport> {
    let mut operands: Vec<Vec<usize>> = vec![spec.base.signature().generators().map(|(_, g)| g.arity).collect()];
    operands.extend(spec.steps.iter().map(|s| s.generators.iter().map(|g| g.arity).collect()));
    let operands: Vec<&Vec<usize>> = operands.iter().filter(|o| !o.is_empty()).collect();
    let arities_increase = operands.iter().enumerate().all(|(i, a)| {
        let top = a.iter().max().copied().unwrap_or(0);
        operands[i + 1..].iter().all(|b| b.iter().min().copied().unwrap_or(usize::MAX) > top)
    });
    let mut indecomposable = Vec::new();
    let base_diff: Vec<(String, OperadElement)> = spec
        .base
        .differential_map()
        .iter()
        .map(|(g, e)| (spec.base.signature().get(*g).name.clone(), e.clone()))
        .collect();
    check_decomposable(&spec.base, &base_diff, &mut indecomposable)?;
    let mut prefix = spec.base.clone();
    for step in &spec.steps {
        let pairs: Vec<(String, OperadElement)> = step
            .generators
            .iter()
            .zip(&step.attaching)
            .map(|(g, e)| (g.name.clone(), e.clone()))
            .collect();
        check_decomposable(&prefix, &pairs, &mut indecomposable)?;
        prefix = crate::dgoperad::link_step(&prefix, step)?;
    }
    Ok(MinimalityReport {
        minimal: arities_increase && indecomposable.is_empty(),
        arities_increase,
        indecomposable,
    })
}

fn check_decomposable(p: &Presentation, pairs: &[(String, OperadElement)], out: &mut Vec<String>) -> Result<()> {
    let mut op = TruncatedOperad::new(p);
    let sig = p.signature().clone();
    let field = p.field;
    let mut spans: BTreeMap<(usize, i32), Echelon> = BTreeMap::new();
    for (name, e) in pairs {
        if e.is_zero() {
            continue;
        }
        let Some(d) = e.degree(&sig) else {
            out.push(name.clone());
            continue;
        };
        let n = e.arity();
        let slot = op.slot(n, d);
        let span = spans.entry((n, d)).or_insert_with(|| {
            let mut ech = Echelon::new(field);
            for t in slot.free_trees() {
                if t.node_count() >= 2 {
                    let el = OperadElement::from_tree(t, field.one(), &sig).expect("basis tree");
                    if let Ok(c) = slot.coords(&el) {
                        ech.insert(&c);
                    }
                }
            }
            ech
        });
        if !span.contains(&slot.coords(e)?) {
            out.push(name.clone());
        }
    }
    Ok(())
}

/// Planar trees with `n` leaves and internal nodes of arity at least two,
/// counted by `Σ (arity(node) − 2)`: the face counts of the associahedron.
pub fn ainfty_reference(n: usize) -> BTreeMap<i32, usize> {
    // counts[m][d]: planar trees with m leaves of degree d
    let mut counts: Vec<BTreeMap<i32, usize>> = vec![BTreeMap::new(); n + 1];
    if n == 0 {
        return BTreeMap::new();
    }
    counts[1].insert(0, 1);
    for m in 2..=n {
        let mut here = BTreeMap::new();
        for k in 2..=m {
            // forests of k trees with m leaves in total
            let mut forests: Vec<BTreeMap<i32, usize>> = vec![BTreeMap::new(); m + 1];
            forests[0].insert(0, 1);
            for _ in 0..k {
                let mut next: Vec<BTreeMap<i32, usize>> = vec![BTreeMap::new(); m + 1];
                for (used, f) in forests.iter().enumerate() {
                    for (&fd, &fc) in f {
                        for size in 1..m {
                            if used + size > m {
                                break;
                            }
                            for (&td, &tc) in &counts[size] {
                                *next[used + size].entry(fd + td).or_insert(0) += fc * tc;
                            }
                        }
                    }
                }
                forests = next;
            }
            for (&d, &c) in &forests[m] {
                *here.entry(d + k as i32 - 2).or_insert(0) += c;
            }
        }
        counts[m] = here;
    }
    counts[n].clone()
}

/// Homology of a resolution compared with the target: returns the slots
/// `(arity, degree, found, expected)` that disagree.
pub fn resolution_defects(res: &Resolution, target: &Presentation) -> Result<Vec<(usize, i32, usize, usize)>> {
    let p = res.presentation()?;
    let mut op = TruncatedOperad::new(&p);
    let mut tgt = TruncatedOperad::new(target);
    let h = homology_in_arities(&mut op, 1, res.max_arity)?;
    let mut out = Vec::new();
    for n in 1..=res.max_arity {
        let mut degrees = op.degrees(n);
        degrees.push(0);
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            let expected = if d == 0 { tgt.dim(n, 0) } else { 0 };
            let found = h.dim(n, d);
            if found != expected {
                out.push((n, d, found, expected));
            }
        }
    }
    Ok(out)
}
