//! Fixtures shared by the benchmarks in `benches/`.

use dgop::dgoperad::Presentation;
use dgop::exactla::{Field, Matrix};
use dgop::syntax::{bundled, parse_presentation};
use dgop::transfer::{AlgebraStructure, S1D3S4};

pub fn planar_ass() -> Presentation {
    parse_presentation("operad Ass\nplanar\ngen mu arity=2 degree=0\nrel mu(mu(1,2),3) - mu(1,mu(2,3))\n")
        .expect("valid presentation")
}

pub fn s1d3s4() -> AlgebraStructure {
    let json: serde_json::Value = serde_json::from_str(S1D3S4).expect("bundled json");
    AlgebraStructure::from_json(bundled("ass").expect("bundled"), &json).expect("valid algebra")
}

/// A deterministic `n × n` integer matrix of rank about `n / 2`.
pub fn half_rank_matrix(field: Field, n: usize) -> Matrix {
    let half = n / 2;
    let rows = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let (a, b) = (r % half.max(1), c);
                    field.from_i64(((a * 7 + b * 3 + a * b) % 11) as i64 - 5)
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(field, rows).expect("rectangular")
}
