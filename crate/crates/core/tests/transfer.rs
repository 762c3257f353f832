use std::collections::BTreeMap;

use dgop::dgoperad::{component_basis, lu_generating, Presentation};
use dgop::exactla::{Field, Scalar, SparseVec};
use dgop::symtree::{GenId, OperadElement};
use dgop::syntax::{bundled, parse_element};
use dgop::transfer::{
    end_differential, h1_end_dim, h1_end_vanishes, AlgebraStructure, FiniteChainComplex, MultilinearMap, PivotOrder,
    S1D3S4,
};
use dgop::Error;
use proptest::prelude::*;

const Q: Field = Field::Rational;

fn q(v: i64) -> Scalar {
    Q.from_i64(v)
}

fn example() -> AlgebraStructure {
    let json: serde_json::Value = serde_json::from_str(S1D3S4).unwrap();
    AlgebraStructure::from_json(bundled("ass").unwrap(), &json).unwrap()
}

fn with_mu(c: &FiniteChainComplex, entries: &[(&str, &str, &str, i64)]) -> BTreeMap<GenId, MultilinearMap> {
    let mut mu = MultilinearMap::zero(Q, 2, 0);
    for (out, a, b, coef) in entries {
        let (o, a, b) = (c.index(out).unwrap(), c.index(a).unwrap(), c.index(b).unwrap());
        mu.add_entry(vec![a, b], &SparseVec::unit(o, Q), &q(*coef));
    }
    [(GenId(0), mu)].into_iter().collect()
}

fn rho(lu: &Presentation) -> OperadElement {
    parse_element("s.mu(mu(1,2),3) - s.mu(1,mu(2,3))", lu.signature(), Q).unwrap()
}

fn s1d3s4_basis() -> Vec<(String, i32)> {
    [("S1", 1), ("dD3", 2), ("D3", 3), ("S4+", 4), ("S4-", 4)]
        .iter()
        .map(|(l, d)| (l.to_string(), *d))
        .collect()
}

#[test]
fn bundled_complex_is_homologically_trivial() {
    let a = example();
    let h = a.complex.homology();
    assert_eq!((h.dim_in(1), h.dim_in(2), h.dim_in(3), h.dim_in(4)), (1, 0, 0, 2));
    assert!(a.trivial_on_homology().unwrap());
}

#[test]
fn lift_of_the_product() {
    let a = example();
    let c = &a.complex;
    let lift = a.lift(PivotOrder::Forward).unwrap();
    let h = &lift.maps[&GenId(0)];
    assert_eq!(h.degree, 1);
    assert_eq!(end_differential(c, h), a.maps[&GenId(0)]);
    let i = |l: &str| c.index(l).unwrap();
    // both values are forced: there are no degree 5 cells and no degree 3 cycles
    assert_eq!(h.get(&[i("S1"), i("S1")]), Some(&SparseVec::unit(i("D3"), Q)));
    assert_eq!(h.get(&[i("S1"), i("dD3")]), Some(&c.parse_vector("-S4+").unwrap()));
    assert_eq!(h.get(&[i("dD3"), i("S1")]), Some(&c.parse_vector("-S4-").unwrap()));
}

#[test]
fn rho_on_three_circles_is_the_top_class() {
    let a = example();
    let lu = lu_generating(&a.operad, &[GenId(0)]).unwrap();
    let lift = a.lift(PivotOrder::Forward).unwrap();
    let r = a.realize(&lu, &lift).unwrap();
    let s1 = a.complex.parse_vector("S1").unwrap();
    let class = r.induced_operation(&rho(&lu), &[s1.clone(), s1.clone(), s1]).unwrap();
    let expected = r.homology.class_of(&a.complex.parse_vector("S4+ - S4-").unwrap()).unwrap();
    assert_eq!(class, expected);
    assert_eq!(r.homology.format_class(&a.complex, &class), "[S4+]-[S4-]");
}

#[test]
fn literal_orientation_gives_the_sum_of_hemispheres() {
    // μ(D³, S¹) = +S⁴₋ without the orientation reversal of the swap
    let c = FiniteChainComplex::new(Q, s1d3s4_basis(), &[("D3".into(), "dD3".into(), q(1))]).unwrap();
    let maps = with_mu(&c, &[("dD3", "S1", "S1", 1), ("S4+", "S1", "D3", 1), ("S4-", "D3", "S1", 1)]);
    let a = AlgebraStructure::new(bundled("ass").unwrap(), c.clone(), maps).unwrap();
    let lu = lu_generating(&a.operad, &[GenId(0)]).unwrap();
    let r = a.realize(&lu, &a.lift(PivotOrder::Forward).unwrap()).unwrap();
    let s1 = c.parse_vector("S1").unwrap();
    let class = r.induced_operation(&rho(&lu), &[s1.clone(), s1.clone(), s1]).unwrap();
    assert_eq!(r.homology.format_class(&c, &class), "[S4+]+[S4-]");
}

#[test]
fn pivot_orders_agree_when_h1_end_vanishes() {
    let a = example();
    assert!(h1_end_vanishes(&a.complex, 2).unwrap());
    let lu = lu_generating(&a.operad, &[GenId(0)]).unwrap();
    let fwd = a.lift(PivotOrder::Forward).unwrap();
    let rev = a.lift(PivotOrder::Reverse).unwrap();
    let r1 = a.realize(&lu, &fwd).unwrap();
    let r2 = a.realize(&lu, &rev).unwrap();
    let table = dgop::homology::homology_table(&lu, 4).unwrap();
    for slot in table.slots.values() {
        for e in &slot.representatives {
            assert_eq!(r1.operation_table(e).unwrap(), r2.operation_table(e).unwrap());
        }
    }
}

#[test]
fn h1_end_matches_homology_oracle() {
    // Over a field End(C) is quasi-isomorphic to Hom(H^{⊗n}, H); count
    // degree-1 homs between homology degrees.
    let a = example();
    let h = a.complex.homology();
    for n in 1..=3 {
        let mut expected = 0;
        let degs = &h.rep_degrees;
        let mut idx = vec![0usize; n];
        loop {
            let total: i32 = idx.iter().map(|&i| degs[i]).sum();
            expected += degs.iter().filter(|&&d| d == total + 1).count();
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < degs.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        assert_eq!(h1_end_dim(&a.complex, n).unwrap(), expected, "arity {n}");
    }
}

#[test]
fn zero_differential_h1_counts_degree_one_homs() {
    let c = FiniteChainComplex::new(Q, vec![("a".into(), 0), ("b".into(), 1), ("e".into(), 2)], &[]).unwrap();
    // arity 1: a->b, b->e
    assert_eq!(h1_end_dim(&c, 1).unwrap(), 2);
    let only_even = FiniteChainComplex::new(Q, vec![("a".into(), 0), ("e".into(), 2)], &[]).unwrap();
    assert!(h1_end_vanishes(&only_even, 2).unwrap());
}

#[test]
fn acyclic_complex_lifts_anything() {
    let basis = vec![("a".into(), 1), ("b".into(), 2)];
    let c = FiniteChainComplex::new(Q, basis, &[("b".into(), "a".into(), q(1))]).unwrap();
    assert!(h1_end_vanishes(&c, 2).unwrap());
    assert!(h1_end_vanishes(&c, 3).unwrap());
    let a = AlgebraStructure::new(bundled("free_mu").unwrap(), c, with_mu_zero()).unwrap();
    assert!(a.trivial_on_homology().unwrap());
    assert!(a.lift(PivotOrder::Forward).unwrap().maps[&GenId(0)].is_zero());
}

fn with_mu_zero() -> BTreeMap<GenId, MultilinearMap> {
    [(GenId(0), MultilinearMap::zero(Q, 2, 0))].into_iter().collect()
}

#[test]
fn ground_field_algebra_is_not_trivial() {
    let c = FiniteChainComplex::new(Q, vec![("e".into(), 0)], &[]).unwrap();
    let maps = with_mu(&c, &[("e", "e", "e", 1)]);
    let a = AlgebraStructure::new(bundled("ass").unwrap(), c, maps).unwrap();
    assert!(!a.trivial_on_homology().unwrap());
    assert!(matches!(a.lift(PivotOrder::Forward), Err(Error::NoSolution(_))));
}

#[test]
fn structure_validation() {
    let c = FiniteChainComplex::new(Q, s1d3s4_basis(), &[("D3".into(), "dD3".into(), q(1))]).unwrap();
    // not a chain map: μ(S1, D3) would need d-compatibility with μ(S1, dD3) = 0 ≠ ...
    let bad = with_mu(&c, &[("D3", "S1", "dD3", 1)]);
    assert!(matches!(
        AlgebraStructure::new(bundled("ass").unwrap(), c.clone(), bad),
        Err(Error::NotACycle(_))
    ));
    // commutative operad needs a graded-symmetric product
    let json: serde_json::Value = serde_json::from_str(S1D3S4).unwrap();
    assert!(AlgebraStructure::from_json(bundled("comm").unwrap(), &json).is_err());
    assert!(FiniteChainComplex::new(Q, vec![("x".into(), 1)], &[("x".into(), "x".into(), q(1))]).is_err());
}

#[test]
fn non_cycle_inputs_are_rejected() {
    let a = example();
    let lu = lu_generating(&a.operad, &[GenId(0)]).unwrap();
    let r = a.realize(&lu, &a.lift(PivotOrder::Forward).unwrap()).unwrap();
    let s1 = a.complex.parse_vector("S1").unwrap();
    let d3 = a.complex.parse_vector("D3").unwrap();
    assert!(matches!(
        r.induced_operation(&rho(&lu), &[s1.clone(), s1.clone(), d3]),
        Err(Error::NotACycle(_))
    ));
    let not_closed = parse_element("s.mu(mu(1,2),3)", lu.signature(), Q).unwrap();
    assert!(matches!(
        r.induced_operation(&not_closed, &[s1.clone(), s1.clone(), s1]),
        Err(Error::NotACycle(_))
    ));
}

#[test]
fn boundaries_of_lu_act_by_zero() {
    let a = example();
    let lu = lu_generating(&a.operad, &[GenId(0)]).unwrap();
    let r = a.realize(&lu, &a.lift(PivotOrder::Forward).unwrap()).unwrap();
    let comp = component_basis(&lu, 3, 2);
    for t in comp.basis.iter().take(12) {
        let e = OperadElement::from_tree(t, Q.one(), lu.signature()).unwrap();
        let b = lu.apply_differential(&e);
        assert!(r.operation_table(&b).unwrap().is_empty());
    }
}

#[test]
fn evaluation_is_a_chain_map_on_lu_ass() {
    // ∂_End(e) = eval(d e) for every basis tree of arity 3, with the lift
    // of a product on a complex that has nonzero differentials.
    let a = example();
    let lu = lu_generating(&a.operad, &[GenId(0)]).unwrap();
    let r = a.realize(&lu, &a.lift(PivotOrder::Reverse).unwrap()).unwrap();
    let ev = r.evaluator();
    for d in 0..=2 {
        for t in component_basis(&lu, 3, d).basis {
            let e = OperadElement::from_tree(&t, Q.one(), lu.signature()).unwrap();
            let lhs = end_differential(&a.complex, &ev.element_map(&e).unwrap());
            let rhs = ev.element_map(&lu.apply_differential(&e)).unwrap();
            assert_eq!(lhs.entries().collect::<Vec<_>>(), rhs.entries().collect::<Vec<_>>(), "{}", t.format(lu.signature()));
        }
    }
}

#[test]
fn evaluation_is_equivariant() {
    let a = example();
    let lu = lu_generating(&a.operad, &[GenId(0)]).unwrap();
    let r = a.realize(&lu, &a.lift(PivotOrder::Forward).unwrap()).unwrap();
    let ev = r.evaluator();
    let c = &a.complex;
    let e = rho(&lu);
    for sigma in dgop::symtree::Perm::all(3) {
        let moved = e.act(&sigma, lu.signature()).unwrap();
        for x in [["S1", "S1", "S1"], ["S1", "dD3", "S1"], ["D3", "S1", "S1"], ["S1", "S1", "dD3"]] {
            let idx: Vec<usize> = x.iter().map(|l| c.index(l).unwrap()).collect();
            let inputs: Vec<SparseVec> = idx.iter().map(|&i| SparseVec::unit(i, Q)).collect();
            // (e·σ)(x_1..x_n) = ± e(y) where y_{σ(l)} = x_l ... checked via the
            // tree relabelling: moved has leaf σ(l) where e had l
            let lhs = ev.element_on(&moved, &inputs).unwrap();
            let permuted: Vec<SparseVec> = (1..=3).map(|l| inputs[sigma.apply(l) - 1].clone()).collect();
            let items: Vec<(usize, i32)> = (1..=3).map(|l| (sigma.apply(l), c.degree(idx[sigma.apply(l) - 1]))).collect();
            let sign = dgop::symtree::koszul_sign(&items);
            let rhs = ev.element_on(&e, &permuted).unwrap().scale(&q(sign as i64));
            assert_eq!(lhs, rhs, "σ = {sigma}, inputs {x:?}");
        }
    }
}

/// `s1d3s4` plus an acyclic pair `b ↦ a` in degrees 2, 1 on which μ is zero.
fn padded() -> AlgebraStructure {
    let mut basis = s1d3s4_basis();
    basis.push(("a".into(), 1));
    basis.push(("b".into(), 2));
    let d = [("D3".into(), "dD3".into(), q(1)), ("b".into(), "a".into(), q(1))];
    let c = FiniteChainComplex::new(Q, basis, &d).unwrap();
    let maps = with_mu(&c, &[("dD3", "S1", "S1", 1), ("S4+", "S1", "D3", 1), ("S4-", "D3", "S1", -1)]);
    AlgebraStructure::new(bundled("ass").unwrap(), c, maps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn end_differential_squares_to_zero(entries in proptest::collection::vec((0usize..5, 0usize..5, 0usize..5, -3i64..4), 0..12)) {
        let a = example();
        let c = &a.complex;
        for degree in [1, 2] {
            let mut f = MultilinearMap::zero(Q, 2, degree);
            for (x, y, out, coef) in &entries {
                if c.degree(*x) + c.degree(*y) + degree == c.degree(*out) {
                    f.add_entry(vec![*x, *y], &SparseVec::unit(*out, Q), &q(*coef));
                }
            }
            prop_assert!(end_differential(c, &end_differential(c, &f)).is_zero());
        }
    }

    #[test]
    fn induced_operations_ignore_boundaries(t in -4i64..5, u in -4i64..5, v in -4i64..5, k in 1i64..4) {
        let a = padded();
        let c = &a.complex;
        let lu = lu_generating(&a.operad, &[GenId(0)]).unwrap();
        let r = a.realize(&lu, &a.lift(PivotOrder::Forward).unwrap()).unwrap();
        let s1 = c.parse_vector("S1").unwrap();
        let base = r.induced_operation(&rho(&lu), &[s1.clone(), s1.clone(), s1.clone()]).unwrap();
        let boundary = c.parse_vector("a").unwrap();
        let shifted: Vec<SparseVec> = [t, u, v].iter().map(|s| s1.axpy(&q(*s), &boundary)).collect();
        let moved = r.induced_operation(&rho(&lu), &shifted).unwrap();
        prop_assert_eq!(&moved, &base);
        // multilinearity in each slot
        let scaled = vec![s1.scale(&q(k)), s1.clone(), s1.clone()];
        prop_assert_eq!(r.induced_operation(&rho(&lu), &scaled).unwrap(), base.scale(&q(k)));
    }
}

#[test]
fn zero_input_gives_zero() {
    let a = example();
    let lu = lu_generating(&a.operad, &[GenId(0)]).unwrap();
    let r = a.realize(&lu, &a.lift(PivotOrder::Forward).unwrap()).unwrap();
    let s1 = a.complex.parse_vector("S1").unwrap();
    let out = r.induced_operation(&rho(&lu), &[s1.clone(), SparseVec::new(), s1]).unwrap();
    assert!(out.is_zero());
}

#[test]
fn json_round_trip_of_the_complex() {
    let a = example();
    let back = FiniteChainComplex::from_json(&a.complex.to_json()).unwrap();
    assert_eq!(back, a.complex);
}
