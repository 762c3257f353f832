use dgop::dgoperad::{
    ch_normal_form, chainify, component_basis, ideal_component, link_chain, link_universal, lu_generating,
    LinkSpec, LinkStep, TruncatedOperad,
};
use dgop::exactla::{Field, Matrix, SparseVec};
use dgop::symtree::{free_basis, GenId, GeneratorSymbol, OperadElement, Perm, Symmetry};
use dgop::syntax::{bundled, parse_element, parse_presentation};
use dgop::Error;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn ass_ideal_at_arity_three_is_half_the_free_component() {
    let ass = bundled("ass").unwrap();
    let span = ideal_component(&ass, 3, 0);
    assert_eq!(span.rows(), 12);
    assert_eq!(span.rank().unwrap(), 6);

    // Oracle: the S_3-orbit of the associator, written in the free basis.
    let sig = ass.signature();
    let basis = free_basis(sig, 3, 0, false);
    let assoc = &ass.relations()[0];
    let cols: Vec<SparseVec> = Perm::all(3)
        .iter()
        .map(|s| {
            let moved = assoc.act(s, sig).unwrap();
            SparseVec::from_pairs(
                moved
                    .terms()
                    .map(|(t, c)| (basis.iter().position(|b| b == t).unwrap(), c.clone()))
                    .collect(),
            )
        })
        .collect();
    let orbit = Matrix::from_columns(Field::Rational, basis.len(), &cols);
    assert_eq!(orbit.rank().unwrap(), 6);
    let joined: Vec<SparseVec> = orbit.columns_sparse().into_iter().chain(span.columns_sparse()).collect();
    assert_eq!(Matrix::from_columns(Field::Rational, 12, &joined).rank().unwrap(), 6);
}

#[test]
fn ideal_is_zero_without_relations_or_room() {
    let free = bundled("free_mu").unwrap();
    assert_eq!(ideal_component(&free, 3, 0).rank().unwrap(), 0);
    let ass = bundled("ass").unwrap();
    assert_eq!(ideal_component(&ass, 2, 0).rank().unwrap(), 0);
}

#[test]
fn ass_dimensions_are_factorials() {
    let ass = bundled("ass").unwrap();
    let mut op = TruncatedOperad::new(&ass);
    for n in 1..=5 {
        assert_eq!(op.dim(n, 0), factorial(n), "arity {n}");
    }
}

#[test]
fn comm_and_lie_dimensions() {
    let mut comm = TruncatedOperad::new(&bundled("comm").unwrap());
    let mut lie = TruncatedOperad::new(&bundled("lie").unwrap());
    for n in 1..=5 {
        assert_eq!(comm.dim(n, 0), 1);
        assert_eq!(lie.dim(n, 0), factorial(n - 1));
    }
}

#[test]
fn free_operad_basis_is_the_tree_basis() {
    let free = bundled("free_mu").unwrap();
    let c = component_basis(&free, 3, 0);
    assert_eq!(c.basis, free_basis(free.signature(), 3, 0, false));
}

#[test]
fn chainify_doubles_generators() {
    let ch = chainify(&bundled("free_mu").unwrap()).unwrap();
    let mut op = TruncatedOperad::new(&ch);
    assert_eq!(op.dim(2, 0), 2);
    assert_eq!(op.dim(2, -1), 2);
    let total: usize = op.degrees(2).into_iter().map(|d| op.dim(2, d)).sum();
    assert_eq!(total, 4);
}

#[test]
fn chainify_rejects_dg_input() {
    let lu = bundled("lu_ass").unwrap();
    assert!(matches!(chainify(&lu), Err(Error::Invalid(_))));
}

#[test]
fn ch_ass_is_a_complex_and_respects_the_ideal() {
    let ch = chainify(&bundled("ass").unwrap()).unwrap();
    let mut op = TruncatedOperad::new(&ch);
    let sig = ch.signature().clone();
    let assoc = parse_element("mu(mu(1,2),3) - mu(1,mu(2,3))", &sig, Field::Rational).unwrap();
    let d = ch.apply_differential(&assoc);
    assert_eq!(d.degree(&sig), Some(-1));
    assert!(op.is_zero_in_quotient(&d).unwrap());
    op.verify_differential(5).unwrap();
}

#[test]
fn normal_form_matches_chainify() {
    for name in ["ass", "comm", "free_mu"] {
        let p = bundled(name).unwrap();
        let mut ch = TruncatedOperad::new(&chainify(&p).unwrap());
        for n in 1..=4 {
            let nf = ch_normal_form(&p, n).unwrap();
            let mut degrees = nf.degrees();
            degrees.extend(ch.degrees(n));
            degrees.sort_unstable();
            degrees.dedup();
            for d in degrees {
                assert_eq!(nf.dim(d), ch.dim(n, d), "{name} arity {n} degree {d}");
            }
        }
    }
}

#[test]
fn normal_form_is_acyclic_above_arity_one() {
    let q = Field::Rational;
    let unit = ch_normal_form(&bundled("ass").unwrap(), 1).unwrap();
    assert_eq!(unit.dim(0), 1);
    assert!(unit.differential(0, q).is_zero());
    for name in ["ass", "comm", "lie"] {
        let p = bundled(name).unwrap();
        for n in 2..=4 {
            let nf = ch_normal_form(&p, n).unwrap();
            for d in nf.degrees() {
                assert_eq!(nf.homology_dim(d, q).unwrap(), 0, "{name} ({n}, {d})");
                let dd = nf.differential(d - 1, q).mul(&nf.differential(d, q)).unwrap();
                assert!(dd.is_zero());
            }
        }
    }
}

#[test]
fn lu_ass_matches_the_bundled_file() {
    let ass = bundled("ass").unwrap();
    let lu = lu_generating(&ass, &[GenId(0)]).unwrap();
    let sig = lu.signature();
    assert_eq!(sig.len(), 2);
    let smu = sig.lookup("s.mu").unwrap();
    assert_eq!(sig.degree(smu), 1);
    assert_eq!(lu.d_of(smu).unwrap(), lu.generator_element(GenId(0)));
    let file = bundled("lu_ass").unwrap();
    let mut a = TruncatedOperad::new(&lu);
    let mut b = TruncatedOperad::new(&file);
    for n in 1..=4 {
        for d in 0..n as i32 {
            assert_eq!(a.dim(n, d), b.dim(n, d));
        }
    }
    a.verify_differential(4).unwrap();
}

#[test]
fn link_rejects_bad_attaching_maps() {
    let ass = bundled("ass").unwrap();
    let sig = ass.signature().clone();
    let mu = parse_element("mu(1,2)", &sig, Field::Rational).unwrap();
    let wrong_arity = GeneratorSymbol::new("t", 3, 1, Symmetry::None);
    assert!(matches!(
        link_universal(&ass, &[wrong_arity], &[mu.clone()]),
        Err(Error::ArityMismatch(_))
    ));
    let wrong_degree = GeneratorSymbol::new("t", 2, 2, Symmetry::None);
    assert!(matches!(
        link_universal(&ass, &[wrong_degree], &[mu.clone()]),
        Err(Error::DegreeMismatch(_))
    ));
    let symmetric = GeneratorSymbol::new("t", 2, 1, Symmetry::Symmetric);
    assert!(link_universal(&ass, &[symmetric], &[mu]).is_err());

    // smu(mu(1,2),3) alone is not a cycle in lu(Ass)
    let lu = bundled("lu_ass").unwrap();
    let x = parse_element("smu(mu(1,2),3)", lu.signature(), Field::Rational).unwrap();
    let t = GeneratorSymbol::new("t", 3, 2, Symmetry::None);
    assert!(matches!(link_universal(&lu, &[t], &[x]), Err(Error::NotACycle(_))));
}

#[test]
fn zero_attaching_map_gives_a_coproduct() {
    // Ass ⊔ ⟨t⟩ with t binary of degree 1: in arity 2 the dimensions add,
    // and in arity 3 degree 1 trees have exactly one t node, composed with
    // one mu in either order: 2 shapes of mu∘t and t∘mu, each 6 labelings,
    // minus nothing since t is free.
    let ass = bundled("ass").unwrap();
    let t = GeneratorSymbol::new("t", 2, 1, Symmetry::None);
    let lu = link_universal(&ass, &[t], &[OperadElement::zero(Field::Rational, 2)]).unwrap();
    let mut op = TruncatedOperad::new(&lu);
    assert_eq!(op.dim(2, 0), 2);
    assert_eq!(op.dim(2, 1), 2);
    assert_eq!(op.dim(3, 0), 6);
    assert_eq!(op.dim(3, 1), 24);
    assert_eq!(op.dim(3, 2), 12);
}

#[test]
fn link_chain_with_one_operand_is_identity() {
    let ass = bundled("ass").unwrap();
    let spec = LinkSpec {
        base: ass.clone(),
        steps: vec![],
    };
    assert_eq!(link_chain(&spec).unwrap(), ass);
}

#[test]
fn associahedron_k4_face_counts() {
    let text = "operad Ainf\nplanar\ngen mu arity=2 degree=0\n";
    let base = parse_presentation(text).unwrap();
    let sig = base.signature().clone();
    let q = Field::Rational;
    let r1 = parse_element("mu(mu(1,2),3) - mu(1,mu(2,3))", &sig, q).unwrap();
    let step1 = LinkStep {
        generators: vec![GeneratorSymbol::new("m3", 3, 1, Symmetry::None)],
        attaching: vec![r1],
        relations: vec![],
    };
    let l1 = link_chain(&LinkSpec {
        base: base.clone(),
        steps: vec![step1.clone()],
    })
    .unwrap();
    let s1 = l1.signature().clone();
    let r2 = parse_element(
        "m3(mu(1,2),3,4) - m3(1,mu(2,3),4) + m3(1,2,mu(3,4)) - mu(m3(1,2,3),4) - mu(1,m3(2,3,4))",
        &s1,
        q,
    )
    .unwrap();
    let l2 = link_chain(&LinkSpec {
        base,
        steps: vec![
            step1,
            LinkStep {
                generators: vec![GeneratorSymbol::new("m4", 4, 2, Symmetry::None)],
                attaching: vec![r2],
                relations: vec![],
            },
        ],
    })
    .unwrap();
    let mut op = TruncatedOperad::new(&l2);
    assert_eq!((op.dim(4, 0), op.dim(4, 1), op.dim(4, 2)), (5, 5, 1));
    op.verify_differential(4).unwrap();
}
