//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the checked statement. Run with
//! `cargo test -p capmoments --test acceptance -- --nocapture` to see the
//! per-criterion report.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use capmoments::characters::{
    check_column_orthogonality, check_dimension_sum, check_row_orthogonality, connection_count,
};
use capmoments::moments::{
    arbitrate_conventions, g0_direct, g0_via_classes, moment_poly, moment_via_isotypic,
    Conventions,
};
use capmoments::oracle::{
    brute_force_moment, character_sum_a, count_zero_sum_subsets, PointSet, DEFAULT_OP_CAP,
};
use capmoments::partitions::{enumerate_multiplicity_maps, enumerate_partitions};
use capmoments::qpoly::{QPoly, QRat};
use capmoments::selftest::connection_count_table;

fn frozen() -> Conventions {
    Conventions::frozen()
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// C(q - shift, n) as a polynomial in q.
fn shifted_binomial(shift: i64, n: u32) -> QPoly {
    let mut p = QPoly::one();
    for i in 0..n as i64 {
        p = &p * &QPoly::linear_root(shift + i);
    }
    let mut fact = BigRational::from(BigInt::from(1));
    for i in 1..=n as i64 {
        fact *= rat(i);
    }
    p.scaled(&fact.recip())
}

#[test]
fn c01_headline_second_moment_ratio() {
    // F(2,10)/F(0,10) = 120(q^2 + 89q - 540) / ((q-5)(q-4)(q-2)), exactly.
    let res = moment_poly(2, 10, 3, 3, frozen()).unwrap();
    let expected = QRat::new(
        QPoly::from_int_coeffs(&[-540, 89, 1]).scaled(&rat(120)),
        &(&QPoly::linear_root(5) * &QPoly::linear_root(4)) * &QPoly::linear_root(2),
    );
    assert_eq!(res.ratio(), expected);
    println!("[acceptance] C1 PASS: F(2,10)/F(0,10) = 120(q^2 + 89q - 540)/((q-5)(q-4)(q-2))");
}

#[test]
fn c02_second_moment_vanishes_at_small_q() {
    let res = moment_poly(2, 10, 3, 3, frozen()).unwrap();
    for q in [1u64, 3, 9] {
        assert_eq!(
            res.poly.eval_integer(q).unwrap(),
            BigUint::from(0u32),
            "q = {q}"
        );
    }
    println!("[acceptance] C2 PASS: F(2,10) vanishes at q = 1, 3, 9");
}

#[test]
fn c03_oracle_equality() {
    let mut checked = 0;
    for d in 1..=2u32 {
        let q = 3u64.pow(d);
        for n in 0..=6u32 {
            if n as u64 > q {
                continue;
            }
            for m in 0..=3u32 {
                let expected = brute_force_moment(3, d, 3, m, n, DEFAULT_OP_CAP).unwrap();
                let res = moment_poly(m, n, 3, 3, frozen()).unwrap();
                assert_eq!(
                    res.poly.eval_integer(q).unwrap(),
                    expected,
                    "d={d}, n={n}, m={m}"
                );
                checked += 1;
            }
        }
    }
    // Spot check at d = 3.
    let expected = brute_force_moment(3, 3, 3, 2, 4, DEFAULT_OP_CAP).unwrap();
    let res = moment_poly(2, 4, 3, 3, frozen()).unwrap();
    assert_eq!(res.poly.eval_integer(27).unwrap(), expected);
    checked += 1;
    println!("[acceptance] C3 PASS: {checked} polynomial evaluations match the exhaustive oracle");
}

#[test]
fn c04_two_path_agreement() {
    let mut checked = 0;
    for m in 0..=2u32 {
        for n in 0..=10u32 {
            let a = moment_poly(m, n, 3, 3, frozen()).unwrap();
            let b = moment_via_isotypic(m, n, 3, 3, frozen()).unwrap();
            assert_eq!(a.poly, b.poly, "m={m}, n={n}");
            checked += 1;
        }
    }
    for n in 0..=6u32 {
        let a = moment_poly(3, n, 3, 3, frozen()).unwrap();
        let b = moment_via_isotypic(3, n, 3, 3, frozen()).unwrap();
        assert_eq!(a.poly, b.poly, "m=3, n={n}");
        checked += 1;
    }
    println!("[acceptance] C4 PASS: both paths coefficient-identical on {checked} cases");
}

#[test]
fn c05_degree_bound() {
    let mut checked = 0;
    for m in 1..=3u32 {
        let n_max = if m == 3 { 6 } else { 10 };
        for n in 0..=n_max {
            let res = moment_poly(m, n, 3, 3, frozen()).unwrap();
            if let Some(deg) = res.poly.degree() {
                assert!(deg + 1 <= n as usize, "deg F({m},{n}) = {deg}");
            }
            checked += 1;
        }
    }
    println!("[acceptance] C5 PASS: deg F(m,n) <= n-1 on {checked} cases with m >= 1");
}

#[test]
fn c06_first_moment_closed_form() {
    // The zero-sum triple count of the whole space is q(q-1)/6, verified by
    // brute force at q = 3, 9, 27; then F(1,n) = [q(q-1)/6] C(q-3, n-3).
    for d in 1..=3u32 {
        let q = 3u64.pow(d);
        let full = PointSet::new(3, d, (0..q as u32).collect()).unwrap();
        let triples = count_zero_sum_subsets(&full, 3).unwrap();
        assert_eq!(triples, q * (q - 1) / 6, "q = {q}");
    }
    let coeff = QPoly::from_int_coeffs(&[0, -1, 1])
        .scaled(&BigRational::new(BigInt::from(1), BigInt::from(6)));
    for n in 3..=10u32 {
        let res = moment_poly(1, n, 3, 3, frozen()).unwrap();
        let expected = &coeff * &shifted_binomial(3, n - 3);
        assert_eq!(res.poly, expected, "n = {n}");
    }
    println!("[acceptance] C6 PASS: F(1,n) = [q(q-1)/6] C(q-3, n-3) for 3 <= n <= 10");
}

#[test]
fn c07_character_suite() {
    for k in 1..=8u32 {
        assert!(check_row_orthogonality(k), "rows k={k}");
        assert!(check_column_orthogonality(k), "cols k={k}");
        assert!(check_dimension_sum(k), "dimension sum k={k}");
    }
    let mut triples = 0;
    for k in 1..=5u32 {
        let table = connection_count_table(k);
        let parts = enumerate_partitions(k);
        for a in &parts {
            for b in &parts {
                for c in &parts {
                    let expected = table
                        .get(&(a.clone(), b.clone(), c.clone()))
                        .copied()
                        .unwrap_or(0);
                    assert_eq!(
                        connection_count(a, b, c).unwrap(),
                        BigUint::from(expected),
                        "({a},{b},{c})"
                    );
                    triples += 1;
                }
            }
        }
    }
    println!(
        "[acceptance] C7 PASS: orthogonality and dimension sums to k=8; {triples} connection counts match S_k x S_k enumeration"
    );
}

#[test]
fn c08_root_of_unity_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    for i in 0..100 {
        let s = PointSet::random(3, 2, 6, &mut rng).unwrap();
        assert_eq!(
            character_sum_a(&s, 3).unwrap(),
            count_zero_sum_subsets(&s, 3).unwrap(),
            "sample {i}: S = {:?}",
            s.elements()
        );
    }
    println!("[acceptance] C8 PASS: character sum equals direct count on 100 seeded subsets");
}

#[test]
fn c09_g0_arbiter() {
    let mut cases = 0;
    for mass in 0..=6u32 {
        for map in enumerate_multiplicity_maps(mass, 3) {
            let k = map.degree_k();
            if k > 6 {
                continue;
            }
            for nu in enumerate_partitions(k) {
                assert_eq!(
                    g0_direct(&map, &nu, 3).unwrap(),
                    g0_via_classes(&map, &nu, 3).unwrap(),
                    "map {map}, nu {nu}"
                );
                cases += 1;
            }
        }
    }
    println!("[acceptance] C9 PASS: class reconstruction equals the direct set-partition sum on {cases} cases");
}

#[test]
fn c10_convention_arbitration() {
    let report = arbitrate_conventions(3, 3).unwrap();
    assert_eq!(report.surviving, Conventions::frozen());
    assert!(report.probes > 0);
    println!(
        "[acceptance] C10 PASS: unique surviving convention ({}) over {} probes matches the frozen default",
        report.surviving.describe(),
        report.probes
    );
}
