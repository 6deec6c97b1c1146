use hopfring::kadl::dimension_report;
use hopfring::{Algebra, CoeffPresentation};

fn mismatches(alg: &Algebra, n: u64, d: u64) -> Vec<String> {
    dimension_report(alg, n, d)
        .into_iter()
        .filter(|r| !r.agrees())
        .map(|r| format!("n={} d={} e={}: skyline {} nakaoka {}", r.n, r.d, r.e, r.skyline, r.nakaoka))
        .collect()
}

#[test]
fn point_mod_two() {
    let bad = mismatches(&Algebra::point(2), 8, 12);
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn point_mod_three() {
    let bad = mismatches(&Algebra::point(3), 9, 16);
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn rp2_mod_two() {
    let alg = Algebra::new(CoeffPresentation::truncated_polynomial(2, 1, 3, 64).unwrap());
    let bad = mismatches(&alg, 4, 10);
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn exterior_mod_three() {
    let alg = Algebra::new(CoeffPresentation::exterior(3, 1, 64).unwrap());
    let bad = mismatches(&alg, 4, 10);
    assert!(bad.is_empty(), "{bad:#?}");
}

