//! Built-in verification suite: convention arbitration, character-table
//! orthogonality, two-path agreement, the set-partition arbiter for the
//! class machinery, and oracle probes. The CLI `selftest` subcommand runs
//! these and reports one machine-readable line per check.
//!
//! The brute-force helpers here (permutation enumeration, class-product
//! tallies) are deliberately independent of the formula-based paths they
//! check.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

use crate::characters::{
    check_column_orthogonality, check_dimension_sum, check_row_orthogonality,
    check_schur_dim_identity, connection_count,
};
use crate::moments::{
    arbitrate_conventions, g0_direct, g0_via_classes, moment_poly, moment_via_isotypic,
    Conventions,
};
use crate::oracle::{
    brute_force_moment, character_sum_a, count_zero_sum_subsets, PointSet, DEFAULT_OP_CAP,
};
use crate::partitions::{enumerate_multiplicity_maps, enumerate_partitions, Partition};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str, detail: impl Into<String>) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &str, detail: impl Into<String>) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            passed: false,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub p: u64,
    pub r: u32,
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            p: 3,
            r: 3,
            seed: 0xCA9,
        }
    }
}

/// All permutations of {0..k-1} in one-line notation.
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..k).collect();
    permute(&mut items, 0, &mut out);
    out
}

fn permute(items: &mut Vec<usize>, lo: usize, out: &mut Vec<Vec<usize>>) {
    if lo + 1 >= items.len() {
        out.push(items.clone());
        return;
    }
    for i in lo..items.len() {
        items.swap(lo, i);
        permute(items, lo + 1, out);
        items.swap(lo, i);
    }
}

pub fn cycle_type(perm: &[usize]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur];
            len += 1;
        }
        cycles.push(len);
    }
    Partition::from_unsorted(cycles)
}

/// Tally, over all pairs of permutations of S_k, the cycle-type triple
/// (type(sigma), type(sigma'), type(sigma sigma')).
pub fn connection_count_table(k: u32) -> HashMap<(Partition, Partition, Partition), u64> {
    let perms = all_permutations(k as usize);
    let types: Vec<Partition> = perms.iter().map(|p| cycle_type(p)).collect();
    let mut table = HashMap::new();
    for (i, a) in perms.iter().enumerate() {
        for (j, b) in perms.iter().enumerate() {
            let product: Vec<usize> = (0..a.len()).map(|x| a[b[x]]).collect();
            let key = (types[i].clone(), types[j].clone(), cycle_type(&product));
            *table.entry(key).or_insert(0u64) += 1;
        }
    }
    table
}

fn check_arbitration(cfg: &SelftestConfig) -> CheckResult {
    let name = "convention_arbitration";
    match arbitrate_conventions(cfg.p, cfg.r) {
        Ok(report) if report.surviving == Conventions::frozen() => CheckResult::pass(
            name,
            format!(
                "unique survivor {} over {} probes",
                report.surviving.describe(),
                report.probes
            ),
        ),
        Ok(report) => CheckResult::fail(
            name,
            format!(
                "survivor {} differs from frozen {}",
                report.surviving.describe(),
                Conventions::frozen().describe()
            ),
        ),
        Err(e) => CheckResult::fail(name, e.to_string()),
    }
}

fn check_characters(max_k: u32) -> CheckResult {
    let name = "character_orthogonality";
    for k in 1..=max_k {
        if !check_row_orthogonality(k) {
            return CheckResult::fail(name, format!("row orthogonality fails at k={k}"));
        }
        if !check_column_orthogonality(k) {
            return CheckResult::fail(name, format!("column orthogonality fails at k={k}"));
        }
        if !check_dimension_sum(k) {
            return CheckResult::fail(name, format!("dimension sum fails at k={k}"));
        }
        if !check_schur_dim_identity(k) {
            return CheckResult::fail(name, format!("Schur dimension identity fails at k={k}"));
        }
    }
    CheckResult::pass(name, format!("rows, columns, dims, Schur identity up to k={max_k}"))
}

fn check_connection_counts(max_k: u32) -> CheckResult {
    let name = "connection_counts";
    for k in 1..=max_k {
        let table = connection_count_table(k);
        let parts = enumerate_partitions(k);
        for a in &parts {
            for b in &parts {
                for c in &parts {
                    let expected = table
                        .get(&(a.clone(), b.clone(), c.clone()))
                        .copied()
                        .unwrap_or(0);
                    match connection_count(a, b, c) {
                        Ok(v) if v == BigUint::from(expected) => {}
                        Ok(v) => {
                            return CheckResult::fail(
                                name,
                                format!("({a},{b},{c}) gives {v}, enumeration {expected}"),
                            )
                        }
                        Err(e) => return CheckResult::fail(name, e.to_string()),
                    }
                }
            }
        }
    }
    CheckResult::pass(name, format!("all class triples up to k={max_k}"))
}

fn check_two_paths(cfg: &SelftestConfig, max_m: u32, max_n: u32) -> CheckResult {
    let name = "two_path_agreement";
    for m in 0..=max_m {
        for n in 0..=max_n {
            let a = match moment_poly(m, n, cfg.r, cfg.p, Conventions::frozen()) {
                Ok(v) => v,
                Err(e) => return CheckResult::fail(name, format!("collapsed m={m},n={n}: {e}")),
            };
            let b = match moment_via_isotypic(m, n, cfg.r, cfg.p, Conventions::frozen()) {
                Ok(v) => v,
                Err(e) => return CheckResult::fail(name, format!("isotypic m={m},n={n}: {e}")),
            };
            if a.poly != b.poly {
                return CheckResult::fail(
                    name,
                    format!("paths disagree at m={m}, n={n}: {} vs {}", a.poly, b.poly),
                );
            }
        }
    }
    CheckResult::pass(name, format!("coefficient-identical for m<={max_m}, n<={max_n}"))
}

fn check_g0(cfg: &SelftestConfig, max_k: u32, max_mass: u32) -> CheckResult {
    let name = "g0_arbiter";
    let mut cases = 0;
    for mass in 0..=max_mass {
        for map in enumerate_multiplicity_maps(mass, cfg.r) {
            let k = map.degree_k();
            if k > max_k {
                continue;
            }
            for nu in enumerate_partitions(k) {
                let direct = match g0_direct(&map, &nu, cfg.p) {
                    Ok(v) => v,
                    Err(e) => return CheckResult::fail(name, e.to_string()),
                };
                let via = match g0_via_classes(&map, &nu, cfg.p) {
                    Ok(v) => v,
                    Err(e) => return CheckResult::fail(name, e.to_string()),
                };
                if direct != via {
                    return CheckResult::fail(
                        name,
                        format!("map {map}, nu {nu}: direct {direct} vs classes {via}"),
                    );
                }
                cases += 1;
            }
        }
    }
    CheckResult::pass(name, format!("{cases} (map, nu) cases up to k={max_k}"))
}

fn check_oracle_probes(cfg: &SelftestConfig) -> CheckResult {
    let name = "oracle_probes";
    for d in 1..=2u32 {
        let q = cfg.p.pow(d);
        for n in 0..=(cfg.r + 2).min(q as u32) {
            for m in 0..=2u32 {
                let expected = match brute_force_moment(cfg.p, d, cfg.r, m, n, DEFAULT_OP_CAP) {
                    Ok(v) => v,
                    Err(e) => return CheckResult::fail(name, e.to_string()),
                };
                let poly = match moment_poly(m, n, cfg.r, cfg.p, Conventions::frozen()) {
                    Ok(v) => v,
                    Err(e) => return CheckResult::fail(name, e.to_string()),
                };
                match poly.poly.eval_integer(q) {
                    Ok(v) if v == expected => {}
                    other => {
                        return CheckResult::fail(
                            name,
                            format!(
                                "d={d}, n={n}, m={m}: polynomial gives {other:?}, oracle {expected}"
                            ),
                        )
                    }
                }
            }
        }
    }
    CheckResult::pass(name, "polynomial evaluations match exhaustive counts")
}

fn check_eq1_identity(cfg: &SelftestConfig, samples: usize) -> CheckResult {
    let name = "root_of_unity_identity";
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for i in 0..samples {
        let s = match PointSet::random(cfg.p, 2, 6, &mut rng) {
            Ok(s) => s,
            Err(e) => return CheckResult::fail(name, e.to_string()),
        };
        let direct = match count_zero_sum_subsets(&s, cfg.r) {
            Ok(v) => v,
            Err(e) => return CheckResult::fail(name, e.to_string()),
        };
        match character_sum_a(&s, cfg.r) {
            Ok(v) if v == direct => {}
            other => {
                return CheckResult::fail(
                    name,
                    format!("sample {i}: direct {direct}, character sum {other:?}"),
                )
            }
        }
    }
    CheckResult::pass(name, format!("{samples} seeded random subsets"))
}

fn check_degree_bounds(cfg: &SelftestConfig, max_m: u32, max_n: u32) -> CheckResult {
    let name = "degree_bounds";
    for m in 1..=max_m {
        for n in 0..=max_n {
            match moment_poly(m, n, cfg.r, cfg.p, Conventions::frozen()) {
                Ok(res) => {
                    if let Some(deg) = res.poly.degree() {
                        if deg + 1 > n as usize {
                            return CheckResult::fail(
                                name,
                                format!("deg F({m},{n}) = {deg} exceeds n-1"),
                            );
                        }
                    }
                }
                Err(e) => return CheckResult::fail(name, e.to_string()),
            }
        }
    }
    CheckResult::pass(name, format!("deg <= n-1 for m<={max_m}, n<={max_n}"))
}

/// Run every check with CLI-sized bounds. The acceptance test suite runs the
/// same identities at their full documented strengths.
pub fn run_all(cfg: &SelftestConfig) -> Vec<CheckResult> {
    vec![
        check_arbitration(cfg),
        check_characters(6),
        check_connection_counts(4),
        check_two_paths(cfg, 2, 6),
        check_g0(cfg, 5, 2),
        check_oracle_probes(cfg),
        check_eq1_identity(cfg, 20),
        check_degree_bounds(cfg, 2, 10),
    ]
}
