use dgop::dgoperad::{chainify, BasisOrder, Presentation, TruncatedOperad};
use dgop::exactla::{Field, Matrix, Scalar, SparseVec};
use dgop::homology::{homology_table, homology_table_ordered};
use dgop::symtree::{free_basis, GeneratorSymbol, OperadElement, Perm, Symmetry};
use dgop::syntax::{bundled, format_presentation, parse_presentation};
use proptest::prelude::*;

const Q: Field = Field::Rational;

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

/// An element of the free operad on the signature of `p`, arity `n`, built
/// from picks into the tree basis of one degree.
fn element(p: &Presentation, n: usize, d: i32, picks: &[(usize, i64)]) -> OperadElement {
    let sig = p.signature();
    let basis = free_basis(sig, n, d, p.planar);
    let mut e = OperadElement::zero(Q, n);
    if basis.is_empty() {
        return e;
    }
    for &(i, c) in picks {
        e.add_tree(&basis[i % basis.len()], &Q.from_i64(c), sig);
    }
    e
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    proptest::collection::vec((0usize..1000, -3i64..4), 1..5)
}

/// `(σx) ∘_{σ(i)} (τy)` relabels `x ∘_i y` by this permutation.
fn block_perm(sigma: &Perm, i: usize, tau: &Perm) -> Perm {
    let (k, m) = (sigma.len(), tau.len());
    let si = sigma.apply(i);
    let outer = |l: usize| {
        let s = sigma.apply(l);
        if s < si {
            s
        } else {
            s + m - 1
        }
    };
    let mut images: Vec<usize> = (1..i).map(outer).collect();
    images.extend((1..=m).map(|j| si + tau.apply(j) - 1));
    images.extend((i + 1..=k).map(outer));
    Perm::from_images(images).unwrap()
}

fn matrix(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
    let data: Vec<Vec<Scalar>> = (0..rows)
        .map(|r| (0..cols).map(|c| field.from_i64(entries[(r * cols + c) % entries.len()])).collect())
        .collect();
    Matrix::from_rows(field, data).unwrap()
}

fn generator() -> impl Strategy<Value = (usize, i32, u8)> {
    (2usize..4, 0i32..3, 0u8..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn leibniz_differential_squares_to_zero(n in 2usize..5, d in 0i32..4, ps in picks()) {
        let ch = chainify(&bundled("ass").unwrap()).unwrap();
        let e = element(&ch, n, -d, &ps);
        let dd = ch.apply_differential(&ch.apply_differential(&e));
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn slot_differential_matches_elementwise(n in 2usize..5, d in 0i32..3, ps in picks()) {
        let lu = bundled("lu_ass").unwrap();
        let e = element(&lu, n, d, &ps);
        let mut op = TruncatedOperad::new(&lu);
        prop_assume!(!e.is_zero() && op.dim(n, d) > 0);
        let (_, x) = op.coords(&e).unwrap();
        let cols = op.differential(n, d);
        let mut via_matrix = SparseVec::new();
        for (i, c) in x.entries() {
            via_matrix = via_matrix.axpy(c, &cols[*i]);
        }
        let de = lu.apply_differential(&e);
        let direct = if de.is_zero() { SparseVec::new() } else { op.coords(&de).unwrap().1 };
        prop_assert_eq!(via_matrix, direct);
    }

    #[test]
    fn rank_nullity(rows in 1usize..7, cols in 1usize..7, entries in proptest::collection::vec(-2i64..3, 1..40), prime in prop::sample::select(vec![0u32, 2, 5, 7])) {
        let field = if prime == 0 { Q } else { Field::prime(prime).unwrap() };
        let m = matrix(field, rows, cols, &entries);
        let k = m.kernel_basis().unwrap();
        let r = m.rank().unwrap();
        prop_assert_eq!(r + k.cols(), cols);
        prop_assert_eq!(r, m.transpose().rank().unwrap());
        if k.cols() > 0 {
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank().unwrap(), k.cols());
        }
    }

    #[test]
    fn composition_is_equivariant(
        k in 2usize..5,
        m in 2usize..4,
        dx in 0i32..3,
        dy in 0i32..2,
        px in picks(),
        py in picks(),
        seed in 0usize..1000,
    ) {
        prop_assume!(k + m - 1 <= 5);
        let lu = bundled("lu_ass").unwrap();
        let sig = lu.signature();
        let (x, y) = (element(&lu, k, dx, &px), element(&lu, m, dy, &py));
        let sigma = Perm::all(k)[seed % Perm::all(k).len()].clone();
        let tau = Perm::all(m)[(seed / 7) % Perm::all(m).len()].clone();
        let i = seed % k + 1;
        let lhs = x.act(&sigma, sig).unwrap().compose(sigma.apply(i), &y.act(&tau, sig).unwrap(), sig).unwrap();
        let rhs = x.compose(i, &y, sig).unwrap().act(&block_perm(&sigma, i, &tau), sig).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_is_a_left_action(d in 0i32..3, ps in picks(), s in perm(4), t in perm(4)) {
        let lu = bundled("lu_ass").unwrap();
        let sig = lu.signature();
        let e = element(&lu, 4, d, &ps);
        let two = e.act(&t, sig).unwrap().act(&s, sig).unwrap();
        prop_assert_eq!(two, e.act(&s.compose(&t), sig).unwrap());
    }

    #[test]
    fn presentations_round_trip(
        gens in proptest::collection::vec(generator(), 1..4),
        ps in proptest::collection::vec(picks(), 0..3),
        planar in any::<bool>(),
        num in -5i64..6,
        den in 1i64..5,
    ) {
        let mut p = Presentation::new("P", Q, planar);
        for (i, (arity, degree, sym)) in gens.iter().enumerate() {
            let symmetry = match (planar, sym) {
                (true, _) | (false, 0) => Symmetry::None,
                (false, 1) => Symmetry::Symmetric,
                (false, 2) => Symmetry::Antisymmetric,
                _ => Symmetry::Cyclic,
            };
            p.add_generator(GeneratorSymbol::new(format!("g{i}"), *arity, *degree, symmetry)).unwrap();
        }
        let scale = Q.from_i64(num).div(&Q.from_i64(den));
        for pick in &ps {
            for d in 0..3 {
                let e = element(&p, 3, d, pick).scale(&scale);
                if !e.is_zero() {
                    p.add_relation(e).unwrap();
                    break;
                }
            }
        }
        let text = format_presentation(&p);
        let back = parse_presentation(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(format_presentation(&back), text);
    }
}

#[test]
fn homology_output_is_byte_deterministic() {
    let lu = bundled("lu_ass").unwrap();
    let a = homology_table(&lu, 4).unwrap();
    let b = homology_table(&lu, 4).unwrap();
    assert_eq!(a.to_tsv(), b.to_tsv());
    assert_eq!(a.to_json(true).to_string(), b.to_json(true).to_string());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = pool.install(|| homology_table(&lu, 4).unwrap());
    assert_eq!(a.to_json(true).to_string(), c.to_json(true).to_string());
}

#[test]
fn basis_order_only_changes_representatives() {
    let lu = bundled("lu_ass").unwrap();
    let a = homology_table(&lu, 4).unwrap();
    let b = homology_table_ordered(&lu, 4, BasisOrder::Reversed).unwrap();
    assert_eq!(a.dims(), b.dims());
}
