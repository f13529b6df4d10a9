//! Enumeration at β = −3 against the naive reference scan and known lattices.

use std::time::Instant;

use kleinian::arith::{brute_force_candidates, enumerate_candidates, poly_discriminant, square_factor};
use kleinian::C64;

#[test]
fn degree_three_matches_reference_scan() {
    let fast = enumerate_candidates(-3, 3, None).unwrap();
    let slow = brute_force_candidates(-3, 3).unwrap();
    assert_eq!(fast, slow);
    assert!(fast.iter().any(|c| c.polynomial == "z + 1"));
}

#[test]
fn degree_four_contains_the_two_smallest_covolume_parameters() {
    let t = Instant::now();
    let all = enumerate_candidates(-3, 4, None).unwrap();
    eprintln!("degree ≤ 4 at β = −3: {} candidates in {:?}", all.len(), t.elapsed());
    for (poly, g, fund) in [
        ("z^4 + 6z^3 + 12z^2 + 9z + 1", C64::new(-1.5, 0.60666), -275),
        ("z^4 + 5z^3 + 7z^2 + 3z + 1", C64::new(-0.21190, 0.40136), -283),
    ] {
        let c = all.iter().find(|c| c.polynomial == poly).unwrap_or_else(|| panic!("{poly} missing"));
        assert!(c.accepted());
        assert!((c.gamma - g).norm() < 5e-5, "{poly}: {}", c.gamma);
        assert!(square_factor(&poly_discriminant(&c.int_poly()), fund).is_some());
    }
    // Symmetry closure: every reflected polynomial is accounted for.
    for c in &all {
        let r = c.reflected.clone();
        assert!(r == c.coefficients || !all.iter().any(|d| d.coefficients == r));
    }
}
