//! Named end-to-end checks over the bundled data.
//!
//! Each check recomputes its numbers from scratch and records what it saw in
//! `details`, so a failing line can be read without rerunning anything.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dgoperad::{
    ch_normal_form, chainify, link_chain, link_universal, lu_generating, LinkSpec, LinkStep, Presentation,
    TruncatedOperad,
};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Scalar, SparseVec};
use crate::homology::{homology_table, minimal_homology_generators, ClassMatch, HomologyTable};
use crate::minmodel::{ainfty_reference, is_minimal, minimal_resolution, resolution_defects};
use crate::symtree::{free_basis, GenId, GeneratorSymbol, OperadElement, Perm, Symmetry};
use crate::syntax::{bundled, format_presentation, parse_element, parse_presentation, BUNDLED};
use crate::transfer::{h1_end_vanishes, AlgebraStructure, FiniteChainComplex, MultilinearMap, PivotOrder, S1D3S4};

const Q: Field = Field::Rational;

/// Checks that fail on exact computation; the reasons are recorded with the
/// check details.
pub const KNOWN_FAILURES: &[&str] = &["AC3", "AC4", "AC5"];

/// Seed of the sampled property checks.
pub const SEED: u64 = 0x5eed_0d90;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl Check {
    fn new(id: &'static str, title: &'static str) -> Check {
        Check {
            id,
            title,
            passed: true,
            details: Vec::new(),
        }
    }

    /// Records a clause; the check fails if any clause does.
    fn clause(&mut self, ok: bool, text: impl Into<String>) {
        let text = text.into();
        self.details.push(format!("{} {text}", if ok { "ok  " } else { "FAIL" }));
        self.passed &= ok;
    }

    fn note(&mut self, text: impl Into<String>) {
        self.details.push(format!("     {}", text.into()));
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn known_failure(&self) -> bool {
        KNOWN_FAILURES.contains(&self.id)
    }

    pub fn line(&self) -> String {
        format!("{} {} {}", self.id, self.status(), self.title)
    }
}

type Runner = fn(&mut Check) -> Result<()>;

const CHECKS: &[(&str, &str, Runner)] = &[
    ("AC1", "chainified operads are acyclic", ac1),
    ("AC2", "normal form of ch matches its component basis", ac2),
    ("AC3", "homology of lu Ass", ac3),
    ("AC4", "homology of lu_G Comm is Lie", ac4),
    ("AC5", "lu Lie has one sign-representation generator", ac5),
    ("AC6", "transfer on S1 v D3 v S4", ac6),
    ("AC7", "planar Ass resolves to A-infinity", ac7),
    ("AC8", "linked associator has pentagon homology", ac8),
    ("AC9", "lu(Comm, Ass) against the cyclic-sum presentation", ac9),
    ("AC10", "sampled properties", ac10),
];

pub fn ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs one check by id (case-insensitive).
pub fn run(id: &str) -> Result<Check> {
    let (id, title, f) = CHECKS
        .iter()
        .find(|c| c.0.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::Invalid(format!("no check `{id}`")))?;
    let mut c = Check::new(id, title);
    if let Err(e) = f(&mut c) {
        c.clause(false, format!("error: {e}"));
    }
    Ok(c)
}

pub fn run_all() -> Vec<Check> {
    CHECKS.iter().map(|c| run(c.0).expect("listed check")).collect()
}

pub fn report(checks: &[Check], verbose: bool) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = writeln!(s, "{}", c.line());
        if verbose {
            for d in &c.details {
                let _ = writeln!(s, "    {d}");
            }
        }
    }
    s
}

fn lu_all(p: &Presentation) -> Result<Presentation> {
    let gens: Vec<GenId> = p.signature().ids().collect();
    lu_generating(p, &gens)
}

fn slots_between(t: &HomologyTable, lo: usize) -> Vec<(usize, i32, usize)> {
    t.nonzero().into_iter().filter(|s| s.0 >= lo).collect()
}

fn ac1(c: &mut Check) -> Result<()> {
    for name in ["ass", "free_mu"] {
        let ch = chainify(&bundled(name)?)?;
        let t = homology_table(&ch, 5)?;
        let nz = slots_between(&t, 2);
        c.clause(nz.is_empty(), format!("H(ch {name}) in arities 2..5: nonzero slots {nz:?}"));
    }
    Ok(())
}

fn ac2(c: &mut Check) -> Result<()> {
    for name in ["ass", "comm"] {
        let p = bundled(name)?;
        let mut ch = TruncatedOperad::new(&chainify(&p)?);
        let mut mismatches = Vec::new();
        let mut bad_d = Vec::new();
        for n in 1..=4 {
            let nf = ch_normal_form(&p, n)?;
            let mut degrees = nf.degrees();
            degrees.extend(ch.degrees(n));
            degrees.sort_unstable();
            degrees.dedup();
            for &d in &degrees {
                if nf.dim(d) != ch.dim(n, d) {
                    mismatches.push((n, d, nf.dim(d), ch.dim(n, d)));
                }
                // ∂(a ⊗ b_i) = a(b_i): a rooted tree goes to the pure tree of its shape
                let m = nf.differential(d, Q);
                let (src, dst) = (nf.basis(d), nf.basis(d - 1));
                for (j, label) in src.iter().enumerate() {
                    let col = m.column_sparse(j);
                    let ok = match label.strip_prefix("ι·") {
                        Some(shape) => {
                            let target = format!("1·{shape}");
                            dst.iter().position(|l| *l == target).map(|i| SparseVec::unit(i, Q)) == Some(col)
                        }
                        None => col.is_zero(),
                    };
                    if !ok {
                        bad_d.push((n, d, label.clone()));
                    }
                }
            }
        }
        c.clause(mismatches.is_empty(), format!("{name}: normal-form dims vs ch dims, arity <= 4, mismatches {mismatches:?}"));
        c.clause(bad_d.is_empty(), format!("{name}: differential on basis elements, defects {bad_d:?}"));
    }
    Ok(())
}

fn ac3(c: &mut Check) -> Result<()> {
    let lu = bundled("lu_ass")?;
    let t = homology_table(&lu, 5)?;
    let found = slots_between(&t, 2);
    let expected = vec![(3, 1, 6), (5, 2, 360)];
    c.clause(found == expected, format!("nonzero slots {found:?}, expected {expected:?}"));
    let rho = parse_element("smu(mu(1,2),3) - smu(1,mu(2,3))", lu.signature(), Q)?;
    let m = t.representative_match(&rho)?;
    let seen = match &m {
        ClassMatch::Class(v) => format!("class with {} nonzero coordinates", v.len()),
        ClassMatch::Boundary => "boundary".to_string(),
    };
    c.clause(matches!(m, ClassMatch::Class(_)), format!("suspended associator is a nonzero class: {seen}"));
    c.note("arity 4 carries 24 syzygies of the associativity ideal; chain Euler characteristic in arity 4 is +24");
    Ok(())
}

fn ac4(c: &mut Check) -> Result<()> {
    let comm = bundled("comm_free")?;
    let lu = lu_generating(&comm, &[comm.generator("mu")?])?;
    let t = homology_table(&lu, 5)?;
    let mut lie = TruncatedOperad::new(&bundled("lie")?);
    let expected: Vec<(usize, i32, usize)> = (2..=5).map(|n| (n, n as i32 - 1, lie.dim(n, 0))).collect();
    let found = slots_between(&t, 2);
    c.clause(found == expected, format!("nonzero slots {found:?}, expected {expected:?}"));
    Ok(())
}

fn ac5(c: &mut Check) -> Result<()> {
    let lu = lu_all(&bundled("lie")?)?;
    let t = homology_table(&lu, 5)?;
    let g = minimal_homology_generators(&t)?;
    let found = g.nonzero();
    c.clause(found == vec![(3, 1, 1)], format!("minimal generators {found:?}, expected exactly [(3, 1, 1)]"));
    match g.module.slots.get(&(3, 1)) {
        Some(slot) if slot.dim() == 1 => {
            let act = |p: &Perm| -> Result<Scalar> { Ok(slot.action(p)?.get(0, 0).clone()) };
            let cycle = act(&Perm::long_cycle(3))?;
            let swaps: Vec<Scalar> =
                [(1, 2), (2, 3), (1, 3)].iter().map(|&(a, b)| act(&Perm::transposition(3, a, b))).collect::<Result<_>>()?;
            let ok = cycle.is_one() && swaps.iter().all(|s| !s.is_one());
            let shown: Vec<String> = swaps.iter().map(|s| s.to_string()).collect();
            c.clause(ok, format!("action at (3, 1): 3-cycle {cycle}, transpositions {}", shown.join(" ")));
        }
        _ => c.clause(false, "no one-dimensional generator at (3, 1)"),
    }
    Ok(())
}

fn rho_inputs(a: &AlgebraStructure, lu: &Presentation, order: PivotOrder) -> Result<(SparseVec, String)> {
    let r = a.realize(lu, &a.lift(order)?)?;
    let rho = parse_element("s.mu(mu(1,2),3) - s.mu(1,mu(2,3))", lu.signature(), Q)?;
    let s1 = a.complex.parse_vector("S1")?;
    let class = r.induced_operation(&rho, &[s1.clone(), s1.clone(), s1])?;
    let text = r.homology.format_class(&a.complex, &class);
    Ok((class, text))
}

fn ac6(c: &mut Check) -> Result<()> {
    let json: serde_json::Value = serde_json::from_str(S1D3S4).map_err(|e| Error::Invalid(e.to_string()))?;
    let a = AlgebraStructure::from_json(bundled("ass")?, &json)?;
    c.clause(a.trivial_on_homology()?, "product vanishes on homology");
    let lu = lu_generating(&a.operad, &[GenId(0)])?;
    let (fwd, text) = rho_inputs(&a, &lu, PivotOrder::Forward)?;
    let h = a.complex.homology();
    let target = h.class_of(&a.complex.parse_vector("S4+ - S4-")?)?;
    let ok = !fwd.is_zero() && (fwd == target || fwd == target.scale(&Q.from_i64(-1)));
    c.clause(ok, format!("rho([S1],[S1],[S1]) = {text}"));
    let (rev, rev_text) = rho_inputs(&a, &lu, PivotOrder::Reverse)?;
    if h1_end_vanishes(&a.complex, 2)? {
        c.clause(fwd == rev, format!("H_1 End(C)(2) = 0; reversed pivot order gives {rev_text}"));
    } else {
        c.clause(!fwd.is_zero() && !rev.is_zero(), format!("H_1 End(C)(2) != 0; outputs {text} and {rev_text}"));
    }
    Ok(())
}

fn ac7(c: &mut Check) -> Result<()> {
    let p = parse_presentation("operad Ass\nplanar\ngen mu arity=2 degree=0\nrel mu(mu(1,2),3) - mu(1,mu(2,3))\n")?;
    let res = minimal_resolution(&p, 6)?;
    let mut op = TruncatedOperad::new(&res.presentation()?);
    let mut bad = Vec::new();
    for n in 2..=6 {
        let reference = ainfty_reference(n);
        let mut degrees = op.degrees(n);
        degrees.extend(reference.keys());
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            let want = reference.get(&d).copied().unwrap_or(0);
            if op.dim(n, d) != want {
                bad.push((n, d, op.dim(n, d), want));
            }
        }
    }
    c.clause(bad.is_empty(), format!("slot dims vs associahedron faces, arity <= 6, mismatches {bad:?}"));
    let report = is_minimal(&res.spec)?;
    c.clause(report.minimal, format!("minimality certificate {report:?}"));
    let four = (op.dim(4, 0), op.dim(4, 1), op.dim(4, 2));
    c.clause(four == (5, 5, 1), format!("arity 4 counts {four:?}"));
    c.clause(resolution_defects(&res, &p)?.is_empty(), "homology equals Ass through arity 6");
    Ok(())
}

fn ac8(c: &mut Check) -> Result<()> {
    let free = bundled("free_mu")?;
    let assoc = parse_element("mu(mu(1,2),3) - mu(1,mu(2,3))", free.signature(), Q)?;
    let spec = LinkSpec {
        base: free,
        steps: vec![LinkStep {
            generators: vec![GeneratorSymbol::new("rho", 3, 1, Symmetry::None)],
            attaching: vec![assoc],
            relations: vec![],
        }],
    };
    let t = homology_table(&link_chain(&spec)?, 4)?;
    c.clause(t.dim(4, 1) > 0, format!("H(4, 1) = {}", t.dim(4, 1)));
    Ok(())
}

/// `lu` of `Comm → Ass`: Ass with a degree-1 antisymmetric `c`, `d(c) = [μ]`.
pub fn lu_comm_ass() -> Result<Presentation> {
    let ass = bundled("ass")?;
    let commutator = parse_element("mu(1,2) - mu(2,1)", ass.signature(), Q)?;
    let c = GeneratorSymbol::new("c", 2, 1, Symmetry::Antisymmetric);
    link_universal(&ass, &[c], &[commutator])
}

/// Free operad on a degree-1 ternary `j` modulo its cyclic sum.
pub const CYCLIC_SUM: &str = "operad J\ngen j arity=3 degree=1\nrel j(1,2,3) + j(2,3,1) + j(3,1,2)\n";

fn ac9(c: &mut Check) -> Result<()> {
    let t = homology_table(&lu_comm_ass()?, 4)?;
    let mut pred = TruncatedOperad::new(&parse_presentation(CYCLIC_SUM)?);
    let mut rows = BTreeMap::new();
    for (n, d, k) in slots_between(&t, 2) {
        rows.entry((n, d)).or_insert((0, 0)).0 = k;
    }
    for n in 2..=4 {
        for d in pred.degrees(n) {
            let k = pred.dim(n, d);
            if k > 0 {
                rows.entry((n, d)).or_insert((0, 0)).1 = k;
            }
        }
    }
    c.note("report only: (arity, degree) homology vs prediction; degree 0 is Comm itself");
    for ((n, d), (h, p)) in rows {
        c.note(format!("({n}, {d}) {h} {p}"));
    }
    Ok(())
}

fn ac10(c: &mut Check) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    squares_to_zero(c)?;
    rank_nullity(c, &mut rng)?;
    composition_equivariance(c, &mut rng)?;
    boundary_insensitivity(c, &mut rng)?;
    parser_round_trip(c)?;
    determinism(c)?;
    Ok(())
}

fn squares_to_zero(c: &mut Check) -> Result<()> {
    let ass = bundled("ass")?;
    let cases = [
        ("ch Ass", chainify(&ass)?, 5),
        ("lu Ass", bundled("lu_ass")?, 5),
        ("lu Lie", lu_all(&bundled("lie")?)?, 4),
        ("lu(Comm, Ass)", lu_comm_ass()?, 4),
        ("Comm resolution", minimal_resolution(&bundled("comm")?, 4)?.presentation()?, 4),
    ];
    for (name, p, a) in cases {
        let r = TruncatedOperad::new(&p).verify_differential(a);
        let why = r.as_ref().err().map(|e| format!(": {e}")).unwrap_or_default();
        c.clause(r.is_ok(), format!("d^2 = 0 on {name} through arity {a}{why}"));
    }
    Ok(())
}

fn random_matrix(rng: &mut ChaCha8Rng, field: Field) -> Matrix {
    let (rows, cols) = (rng.gen_range(1..7), rng.gen_range(1..7));
    // sparse-ish entries so that rank deficiency is common
    let data = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if rng.gen_bool(0.4) { field.from_i64(rng.gen_range(-3..4)) } else { field.zero() })
                .collect()
        })
        .collect();
    Matrix::from_rows(field, data).expect("rectangular")
}

fn rank_nullity(c: &mut Check, rng: &mut ChaCha8Rng) -> Result<()> {
    for field in [Q, Field::prime(5)?] {
        let mut bad = 0;
        for _ in 0..64 {
            let m = random_matrix(rng, field);
            let k = m.kernel_basis()?;
            let kernel_ok = k.cols() == 0 || (m.mul(&k)?.is_zero() && k.rank()? == k.cols());
            if m.rank()? + k.cols() != m.cols() || !kernel_ok {
                bad += 1;
            }
        }
        c.clause(bad == 0, format!("rank + nullity = columns on 64 matrices over {field}: {bad} defects"));
    }
    Ok(())
}

fn random_element(rng: &mut ChaCha8Rng, p: &Presentation, n: usize) -> OperadElement {
    let sig = p.signature();
    let mut e = OperadElement::zero(Q, n);
    let d = rng.gen_range(0..n as i32 - 1);
    let basis = free_basis(sig, n, d, p.planar);
    for _ in 0..3 {
        if let Some(t) = basis.choose(rng) {
            e.add_tree(t, &Q.from_i64(rng.gen_range(-2..3)), sig);
        }
    }
    e
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Perm::from_images(v).expect("shuffled identity")
}

/// The permutation relating `(σx) ∘_{σ(i)} (τy)` to `x ∘_i y`.
fn block_perm(sigma: &Perm, i: usize, tau: &Perm) -> Perm {
    let (k, m) = (sigma.len(), tau.len());
    let si = sigma.apply(i);
    let mut images = Vec::with_capacity(k + m - 1);
    for l in 1..i {
        let s = sigma.apply(l);
        images.push(if s < si { s } else { s + m - 1 });
    }
    for j in 1..=m {
        images.push(si + tau.apply(j) - 1);
    }
    for l in i + 1..=k {
        let s = sigma.apply(l);
        images.push(if s < si { s } else { s + m - 1 });
    }
    Perm::from_images(images).expect("block permutation")
}

fn composition_equivariance(c: &mut Check, rng: &mut ChaCha8Rng) -> Result<()> {
    let p = bundled("lu_ass")?;
    let sig = p.signature();
    let mut bad = 0;
    let samples = 48;
    for _ in 0..samples {
        let k = rng.gen_range(2..=4);
        let m = rng.gen_range(2..=6 - k);
        let (x, y) = (random_element(rng, &p, k), random_element(rng, &p, m));
        let (sigma, tau) = (random_perm(rng, k), random_perm(rng, m));
        let i = rng.gen_range(1..=k);
        let lhs = x.act(&sigma, sig)?.compose(sigma.apply(i), &y.act(&tau, sig)?, sig)?;
        let rhs = x.compose(i, &y, sig)?.act(&block_perm(&sigma, i, &tau), sig)?;
        if lhs != rhs {
            bad += 1;
        }
    }
    c.clause(bad == 0, format!("composition is equivariant on {samples} samples up to arity 5: {bad} defects"));
    Ok(())
}

fn boundary_insensitivity(c: &mut Check, rng: &mut ChaCha8Rng) -> Result<()> {
    // the bundled complex plus an acyclic pair b -> a on which the product vanishes
    let basis: Vec<(String, i32)> = [("S1", 1), ("dD3", 2), ("D3", 3), ("S4+", 4), ("S4-", 4), ("a", 1), ("b", 2)]
        .iter()
        .map(|(l, d)| (l.to_string(), *d))
        .collect();
    let one = Q.one();
    let d = [("D3".into(), "dD3".into(), one.clone()), ("b".into(), "a".into(), one.clone())];
    let cx = FiniteChainComplex::new(Q, basis, &d)?;
    let i = |l: &str| cx.index(l).expect("label");
    let mut mu = MultilinearMap::zero(Q, 2, 0);
    mu.add_entry(vec![i("S1"), i("S1")], &SparseVec::unit(i("dD3"), Q), &one);
    mu.add_entry(vec![i("S1"), i("D3")], &SparseVec::unit(i("S4+"), Q), &one);
    mu.add_entry(vec![i("D3"), i("S1")], &SparseVec::unit(i("S4-"), Q), &one.neg());
    let a = AlgebraStructure::new(bundled("ass")?, cx, [(GenId(0), mu)].into_iter().collect())?;
    let lu = lu_generating(&a.operad, &[GenId(0)])?;
    let r = a.realize(&lu, &a.lift(PivotOrder::Forward)?)?;
    let rho = parse_element("s.mu(mu(1,2),3) - s.mu(1,mu(2,3))", lu.signature(), Q)?;
    let s1 = a.complex.parse_vector("S1")?;
    let boundary = a.complex.parse_vector("a")?;
    let base = r.induced_operation(&rho, &[s1.clone(), s1.clone(), s1.clone()])?;
    let mut bad = 0;
    let samples = 16;
    for _ in 0..samples {
        let inputs: Vec<SparseVec> = (0..3).map(|_| s1.axpy(&Q.from_i64(rng.gen_range(-4..5)), &boundary)).collect();
        if r.induced_operation(&rho, &inputs)? != base {
            bad += 1;
        }
    }
    c.clause(bad == 0, format!("rho unchanged by boundaries added to its inputs, {samples} samples: {bad} defects"));
    Ok(())
}

fn parser_round_trip(c: &mut Check) -> Result<()> {
    let mut texts: Vec<(String, Presentation)> = Vec::new();
    for (name, text) in BUNDLED {
        texts.push((name.to_string(), parse_presentation(text)?));
    }
    texts.push(("resolution of Comm".into(), minimal_resolution(&bundled("comm")?, 4)?.presentation()?));
    texts.push(("lu(Comm, Ass)".into(), lu_comm_ass()?));
    let mut bad = Vec::new();
    for (name, p) in &texts {
        match parse_presentation(&format_presentation(p)) {
            Ok(back) if back == *p => {}
            _ => bad.push(name.clone()),
        }
    }
    c.clause(bad.is_empty(), format!("print then parse is the identity on {} presentations: failures {bad:?}", texts.len()));
    Ok(())
}

/// Output of a fixed computation, rendered to bytes.
fn fingerprint() -> Result<String> {
    let t = homology_table(&bundled("lu_ass")?, 4)?;
    let g = minimal_homology_generators(&homology_table(&lu_all(&bundled("lie")?)?, 4)?)?;
    Ok(format!("{}\n{}\n{}", t.to_tsv(), t.to_json(true), g.module.to_json()))
}

fn determinism(c: &mut Check) -> Result<()> {
    let first = fingerprint()?;
    let second = fingerprint()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let serial = pool.install(fingerprint)?;
    c.clause(first == second, format!("two runs give identical output ({} bytes)", first.len()));
    c.clause(first == serial, "one worker thread gives the same bytes");
    Ok(())
}
