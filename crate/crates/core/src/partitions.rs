//! Integer partitions and the multiplicity maps that index the expansion of
//! the m-th tensor power of the zero-sum counting element.
//!
//! Partitions are immutable value types usable as map keys. The canonical
//! enumeration order is reverse lexicographic, e.g. for weight 3:
//! (3), (2,1), (1,1,1). Every block layout downstream (multiplicity-map rows,
//! X-matrix row blocks) uses this order.

use std::fmt;

/// Weakly decreasing sequence of positive integers. The empty partition is
/// valid and has weight 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Build from weakly decreasing positive parts. Panics on invalid input;
    /// use [`Partition::from_unsorted`] for unnormalized data.
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be weakly decreasing: {parts:?}"
        );
        assert!(
            parts.iter().all(|&p| p > 0),
            "parts must be positive: {parts:?}"
        );
        Partition { parts }
    }

    /// Sorts descending and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The single-row partition (k), or the empty partition for k = 0.
    pub fn row(k: u32) -> Self {
        if k == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![k] }
        }
    }

    /// The single-column partition (1^k).
    pub fn column(k: u32) -> Self {
        Partition {
            parts: vec![1; k as usize],
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiset union of parts.
    pub fn concat(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::from_unsorted(parts)
    }

    /// Multiplicities of each distinct part value, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of k in reverse lexicographic order, each exactly once.
/// k = 0 yields the singleton list containing the empty partition.
pub fn enumerate_partitions(k: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    gen_partitions(k, k, &mut prefix, &mut out);
    out
}

fn gen_partitions(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: prefix.clone(),
        });
        return;
    }
    let top = remaining.min(max_part);
    for first in (1..=top).rev() {
        prefix.push(first);
        gen_partitions(remaining - first, first, prefix, out);
        prefix.pop();
    }
}

/// Centralizer order of a permutation of cycle type nu:
/// prod_i i^{a_i} a_i! where a_i is the multiplicity of part i.
pub fn z_of(nu: &Partition) -> u128 {
    let mut z: u128 = 1;
    for (part, mult) in nu.multiplicities() {
        z *= (part as u128).pow(mult);
        z *= factorial(mult as u64);
    }
    z
}

/// Sign character of S_k at cycle type nu: (-1)^{|nu| - l(nu)}. Equals the
/// coefficient of p_nu / z(nu) in the power-sum expansion of e_{|nu|}.
pub fn sign_char(nu: &Partition) -> i64 {
    if (nu.weight() as usize - nu.len()) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn factorial(n: u64) -> u128 {
    assert!(n <= 34, "factorial overflow for n = {n}");
    (1..=n as u128).product()
}

/// Assignment of a nonnegative multiplicity to each partition of r, with keys
/// stored in canonical order and zero entries omitted. Indexes one term of
/// the tensor-power expansion; its block structure lays out
/// `mass` rows of cells, the row for a key rho contributing l(rho) cells.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiplicityMap {
    r: u32,
    counts: Vec<(Partition, u32)>,
}

impl MultiplicityMap {
    /// Build from (partition of r, multiplicity) pairs. Panics if a key is
    /// not a partition of r or appears twice.
    pub fn new(r: u32, assignments: &[(Partition, u32)]) -> Self {
        let order = enumerate_partitions(r);
        let mut counts = Vec::new();
        for rho in &order {
            let mut found = 0u32;
            let mut seen = false;
            for (key, c) in assignments {
                if key == rho {
                    assert!(!seen, "duplicate key {key}");
                    seen = true;
                    found = *c;
                }
            }
            if found > 0 {
                counts.push((rho.clone(), found));
            }
        }
        let given: u32 = assignments.iter().filter(|(_, c)| *c > 0).count() as u32;
        assert_eq!(
            given,
            counts.len() as u32,
            "every key must be a partition of {r}"
        );
        MultiplicityMap { r, counts }
    }

    pub fn zero(r: u32) -> Self {
        MultiplicityMap {
            r,
            counts: Vec::new(),
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Nonzero entries in canonical key order.
    pub fn counts(&self) -> &[(Partition, u32)] {
        &self.counts
    }

    pub fn count_of(&self, rho: &Partition) -> u32 {
        self.counts
            .iter()
            .find(|(key, _)| key == rho)
            .map_or(0, |(_, c)| *c)
    }

    /// Total mass sum_rho m(rho).
    pub fn mass(&self) -> u32 {
        self.counts.iter().map(|(_, c)| c).sum()
    }

    /// Tensor degree k = sum_rho m(rho) l(rho), the total number of cells.
    pub fn degree_k(&self) -> u32 {
        self.counts
            .iter()
            .map(|(rho, c)| rho.len() as u32 * c)
            .sum()
    }

    /// Multinomial weight mass! / prod_rho m(rho)!.
    pub fn multinomial_weight(&self) -> u128 {
        let mut w = factorial(self.mass() as u64);
        for (_, c) in &self.counts {
            w /= factorial(*c as u64);
        }
        w
    }

    /// The block layout: one entry per row, each row carrying its partition,
    /// repeated keys expanded in canonical order.
    pub fn row_partitions(&self) -> Vec<Partition> {
        let mut rows = Vec::with_capacity(self.mass() as usize);
        for (rho, c) in &self.counts {
            for _ in 0..*c {
                rows.push(rho.clone());
            }
        }
        rows
    }
}

impl fmt::Display for MultiplicityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (rho, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{rho}:{c}")?;
        }
        write!(f, "}}")
    }
}

/// All multiplicity maps of the given mass over partitions of r, i.e. all
/// multisets of size `mass` drawn from the partitions of r. Deterministic
/// order: the count of the canonically-first key decreases first.
pub fn enumerate_multiplicity_maps(mass: u32, r: u32) -> Vec<MultiplicityMap> {
    assert!(r >= 1, "r must be positive");
    let keys = enumerate_partitions(r);
    let mut out = Vec::new();
    let mut current = Vec::new();
    gen_maps(&keys, 0, mass, &mut current, r, &mut out);
    out
}

fn gen_maps(
    keys: &[Partition],
    idx: usize,
    remaining: u32,
    current: &mut Vec<(Partition, u32)>,
    r: u32,
    out: &mut Vec<MultiplicityMap>,
) {
    if idx == keys.len() {
        if remaining == 0 {
            out.push(MultiplicityMap {
                r,
                counts: current.clone(),
            });
        }
        return;
    }
    if idx + 1 == keys.len() {
        // Last key takes whatever is left.
        if remaining > 0 {
            current.push((keys[idx].clone(), remaining));
            gen_maps(keys, idx + 1, 0, current, r, out);
            current.pop();
        } else {
            gen_maps(keys, idx + 1, 0, current, r, out);
        }
        return;
    }
    for c in (0..=remaining).rev() {
        if c > 0 {
            current.push((keys[idx].clone(), c));
        }
        gen_maps(keys, idx + 1, remaining - c, current, r, out);
        if c > 0 {
            current.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent partition-count oracle: Euler's pentagonal recurrence.
    fn euler_partition_count(n: usize) -> u128 {
        let mut table = vec![0u128; n + 1];
        table[0] = 1;
        for i in 1..=n {
            let mut acc: i128 = 0;
            let mut k: i64 = 1;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > i {
                    break;
                }
                let sign: i128 = if k % 2 == 1 { 1 } else { -1 };
                acc += sign * table[i - g1] as i128;
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= i {
                    acc += sign * table[i - g2] as i128;
                }
                k += 1;
            }
            table[i] = acc as u128;
        }
        table[n]
    }

    #[test]
    fn enumerate_small() {
        let p3 = enumerate_partitions(3);
        assert_eq!(
            p3,
            vec![
                Partition::new(vec![3]),
                Partition::new(vec![2, 1]),
                Partition::new(vec![1, 1, 1])
            ]
        );
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(10).len(), 42);
    }

    #[test]
    fn counts_match_euler_recurrence() {
        for k in 0..=30u32 {
            assert_eq!(
                enumerate_partitions(k).len() as u128,
                euler_partition_count(k as usize),
                "p({k})"
            );
        }
    }

    #[test]
    fn enumeration_is_reverse_lex_and_valid() {
        for k in 0..=12u32 {
            let all = enumerate_partitions(k);
            for p in &all {
                assert_eq!(p.weight(), k);
            }
            for w in all.windows(2) {
                // Reverse lexicographic: each partition strictly precedes the next.
                assert!(w[0].parts() > w[1].parts(), "{} !> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn z_values() {
        assert_eq!(z_of(&Partition::new(vec![1, 1, 1])), 6);
        assert_eq!(z_of(&Partition::new(vec![2, 1])), 2);
        assert_eq!(z_of(&Partition::new(vec![2, 2])), 8);
        assert_eq!(z_of(&Partition::empty()), 1);
    }

    #[test]
    fn class_sizes_partition_the_group() {
        for k in 0..=10u32 {
            let total: u128 = enumerate_partitions(k)
                .iter()
                .map(|nu| factorial(k as u64) / z_of(nu))
                .sum();
            assert_eq!(total, factorial(k as u64));
        }
    }

    #[test]
    fn sign_values() {
        assert_eq!(sign_char(&Partition::new(vec![1, 1, 1, 1])), 1);
        assert_eq!(sign_char(&Partition::new(vec![2])), -1);
        // (3,2,1) is an odd permutation: 2 + 1 + 0 transpositions.
        assert_eq!(sign_char(&Partition::new(vec![3, 2, 1])), -1);
        assert_eq!(sign_char(&Partition::empty()), 1);
    }

    #[test]
    fn sign_is_multiplicative_over_concatenation() {
        for a in enumerate_partitions(5) {
            for b in enumerate_partitions(4) {
                assert_eq!(sign_char(&a.concat(&b)), sign_char(&a) * sign_char(&b));
            }
        }
    }

    #[test]
    fn multiplicity_maps_mass_one() {
        let maps = enumerate_multiplicity_maps(1, 3);
        assert_eq!(maps.len(), 3);
        for m in &maps {
            assert_eq!(m.mass(), 1);
            assert_eq!(m.multinomial_weight(), 1);
        }
    }

    #[test]
    fn multiplicity_maps_mass_two() {
        let maps = enumerate_multiplicity_maps(2, 3);
        // Multisets of size 2 from 3 keys: C(4, 2) = 6.
        assert_eq!(maps.len(), 6);

        let doubled = MultiplicityMap::new(3, &[(Partition::new(vec![2, 1]), 2)]);
        assert!(maps.contains(&doubled));
        assert_eq!(doubled.degree_k(), 4);
        assert_eq!(doubled.multinomial_weight(), 1);

        let mixed = MultiplicityMap::new(
            3,
            &[
                (Partition::new(vec![3]), 1),
                (Partition::new(vec![1, 1, 1]), 1),
            ],
        );
        assert!(maps.contains(&mixed));
        assert_eq!(mixed.degree_k(), 4);
        assert_eq!(mixed.multinomial_weight(), 2);
    }

    #[test]
    fn multiplicity_maps_mass_zero() {
        let maps = enumerate_multiplicity_maps(0, 3);
        assert_eq!(maps, vec![MultiplicityMap::zero(3)]);
        assert_eq!(maps[0].degree_k(), 0);
        assert_eq!(maps[0].multinomial_weight(), 1);
    }

    #[test]
    fn multinomial_weights_sum_to_power() {
        // sum over maps of mass!/prod m(rho)! = |Lambda(r)|^mass
        for (mass, r) in [(2u32, 3u32), (3, 3), (2, 4), (3, 4)] {
            let total: u128 = enumerate_multiplicity_maps(mass, r)
                .iter()
                .map(|m| m.multinomial_weight())
                .sum();
            let lam = enumerate_partitions(r).len() as u128;
            assert_eq!(total, lam.pow(mass));
        }
    }

    #[test]
    fn degree_k_consistency() {
        for mass in 0..=3u32 {
            for m in enumerate_multiplicity_maps(mass, 3) {
                assert_eq!(m.mass(), mass);
                let k: u32 = m.row_partitions().iter().map(|r| r.len() as u32).sum();
                assert_eq!(k, m.degree_k());
            }
        }
    }

    #[test]
    fn row_partitions_follow_canonical_order() {
        let m = MultiplicityMap::new(
            3,
            &[
                (Partition::new(vec![1, 1, 1]), 1),
                (Partition::new(vec![3]), 2),
            ],
        );
        let rows = m.row_partitions();
        assert_eq!(
            rows,
            vec![
                Partition::new(vec![3]),
                Partition::new(vec![3]),
                Partition::new(vec![1, 1, 1])
            ]
        );
    }
}
