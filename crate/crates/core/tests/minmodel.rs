use dgop::dgoperad::{link_chain, LinkSpec, LinkStep, Presentation, TruncatedOperad};
use dgop::exactla::Field;
use dgop::homology::homology_table;
use dgop::minmodel::{
    ainfty_reference, is_minimal, minimal_resolution, next_relation_module, resolution_defects, NextModule,
    ResolutionState,
};
use dgop::symtree::{GeneratorSymbol, Symmetry};
use dgop::syntax::{bundled, parse_element, parse_presentation};

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Dissections of a convex `m`-gon by `j` non-crossing diagonals.
fn kirkman(m: u64, j: u64) -> u64 {
    binomial(m - 3, j) * binomial(m + j - 1, j) / (j + 1)
}

fn planar_ass() -> Presentation {
    parse_presentation("operad Ass\nplanar\ngen mu arity=2 degree=0\nrel mu(mu(1,2),3) - mu(1,mu(2,3))\n").unwrap()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn associahedron_faces_match_dissection_counts() {
    assert_eq!(ainfty_reference(2).into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
    assert_eq!(ainfty_reference(3).into_iter().collect::<Vec<_>>(), vec![(0, 2), (1, 1)]);
    assert_eq!(ainfty_reference(4).into_iter().collect::<Vec<_>>(), vec![(0, 5), (1, 5), (2, 1)]);
    for n in 2..=8usize {
        let faces = ainfty_reference(n);
        for d in 0..=(n as i32 - 2) {
            let j = (n as i32 - 2 - d) as u64;
            assert_eq!(faces[&d] as u64, kirkman(n as u64 + 1, j), "n = {n}, degree {d}");
        }
    }
}

#[test]
fn planar_ass_resolves_to_a_infinity() {
    let p = planar_ass();
    let res = minimal_resolution(&p, 6).unwrap();
    let dims: Vec<(usize, i32, usize)> = res.adjoined.iter().map(|m| (m.arity, m.degree, m.dim)).collect();
    assert_eq!(dims, vec![(3, 1, 1), (4, 2, 1), (5, 3, 1), (6, 4, 1)]);
    let mut op = TruncatedOperad::new(&res.presentation().unwrap());
    for n in 2..=6 {
        let reference = ainfty_reference(n);
        let mut degrees = op.degrees(n);
        degrees.extend(reference.keys());
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            assert_eq!(op.dim(n, d), reference.get(&d).copied().unwrap_or(0), "slot ({n}, {d})");
        }
    }
    assert_eq!((op.dim(4, 0), op.dim(4, 1), op.dim(4, 2)), (5, 5, 1));
    let report = is_minimal(&res.spec).unwrap();
    assert!(report.minimal, "{report:?}");
    assert!(resolution_defects(&res, &p).unwrap().is_empty());
}

#[test]
fn first_kernel_of_ass_is_the_associator_orbit() {
    let ass = bundled("ass").unwrap();
    let state = ResolutionState::new(&ass).unwrap();
    let NextModule::Found { arity, module, step } = next_relation_module(&state, 5).unwrap() else {
        panic!("expected kernel homology");
    };
    assert_eq!(arity, 3);
    // free binary trees in arity 3 minus dim Ass(3)
    let free_dim = 3 * 2 * 2;
    assert_eq!(module.dim(3, 1), free_dim - factorial(3));
    assert_eq!(step.generators.len(), 1);
    assert_eq!(step.generators[0].symmetry, Symmetry::None);

    let mut next = state.clone();
    next.spec.steps.push(step);
    next.next_arity = 4;
    let NextModule::Found { arity, module, .. } = next_relation_module(&next, 5).unwrap() else {
        panic!("expected pentagon classes");
    };
    assert_eq!(arity, 4);
    // one pentagon per planar ordering of the inputs
    assert_eq!(module.dim(4, 2), factorial(4) * ainfty_reference(4)[&2]);
}

#[test]
fn free_operad_is_exhausted_at_once() {
    let free = bundled("free_mu").unwrap();
    let state = ResolutionState::new(&free).unwrap();
    assert!(matches!(next_relation_module(&state, 5).unwrap(), NextModule::Exhausted));
    let res = minimal_resolution(&free, 4).unwrap();
    assert!(res.spec.steps.is_empty());
    assert!(is_minimal(&res.spec).unwrap().minimal);
}

#[test]
fn comm_resolution_has_homology_comm() {
    let comm = bundled("comm").unwrap();
    let res = minimal_resolution(&comm, 5).unwrap();
    let dims: Vec<(usize, i32, usize)> = res.adjoined.iter().map(|m| (m.arity, m.degree, m.dim)).collect();
    // generators of the Koszul resolution: (n-1)! in arity n, degree n-2
    assert_eq!(dims, vec![(3, 1, 2), (4, 2, 6), (5, 3, 24)]);
    assert!(resolution_defects(&res, &comm).unwrap().is_empty());
    let h = homology_table(&res.presentation().unwrap(), 5).unwrap();
    for n in 1..=5 {
        assert_eq!(h.dim(n, 0), 1);
    }
    assert!(is_minimal(&res.spec).unwrap().minimal);
}

#[test]
fn symmetric_ass_and_lie_resolutions() {
    let ass = bundled("ass").unwrap();
    let res = minimal_resolution(&ass, 5).unwrap();
    let dims: Vec<(usize, i32, usize)> = res.adjoined.iter().map(|m| (m.arity, m.degree, m.dim)).collect();
    assert_eq!(dims, vec![(3, 1, 6), (4, 2, 24), (5, 3, 120)]);
    assert!(resolution_defects(&res, &ass).unwrap().is_empty());
    let arities: Vec<usize> = res.adjoined.iter().map(|m| m.arity).collect();
    assert!(arities.windows(2).all(|w| w[0] < w[1]));

    let lie = bundled("lie").unwrap();
    let res = minimal_resolution(&lie, 4).unwrap();
    let dims: Vec<(usize, i32, usize)> = res.adjoined.iter().map(|m| (m.arity, m.degree, m.dim)).collect();
    assert_eq!(dims, vec![(3, 1, 1), (4, 2, 1)]);
    assert!(resolution_defects(&res, &lie).unwrap().is_empty());
    assert!(is_minimal(&res.spec).unwrap().minimal);
}

#[test]
fn indecomposable_differential_is_reported() {
    let free = bundled("free_mu").unwrap();
    let mu = parse_element("mu(1,2)", free.signature(), Field::Rational).unwrap();
    let spec = LinkSpec {
        base: free,
        steps: vec![LinkStep {
            generators: vec![GeneratorSymbol::new("t", 2, 1, Symmetry::None)],
            attaching: vec![mu],
            relations: vec![],
        }],
    };
    let report = is_minimal(&spec).unwrap();
    assert!(!report.minimal);
    assert!(!report.arities_increase);
    assert_eq!(report.indecomposable, vec!["t".to_string()]);
}

#[test]
fn associator_linked_to_free_product_has_pentagon_homology() {
    let free = bundled("free_mu").unwrap();
    let assoc = parse_element("mu(mu(1,2),3) - mu(1,mu(2,3))", free.signature(), Field::Rational).unwrap();
    let spec = LinkSpec {
        base: free,
        steps: vec![LinkStep {
            generators: vec![GeneratorSymbol::new("rho", 3, 1, Symmetry::None)],
            attaching: vec![assoc],
            relations: vec![],
        }],
    };
    let p = link_chain(&spec).unwrap();
    let h = homology_table(&p, 4).unwrap();
    assert!(h.dim(4, 1) > 0);
    assert_eq!(h.dim(4, 1), factorial(4));
}
