//! Irreducible characters of the symmetric group, Specht-module dimensions,
//! and the q-polynomial dimensions of Schur functors.
//!
//! Characters are computed by the Murnaghan-Nakayama rule on beta-sets
//! (first-column hook lengths) and cached as full tables per k, since the
//! moment pipeline touches every (mu, nu) pair for several k values.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, factorial, z_of, Partition};
use crate::qpoly::QPoly;

/// Full character table of S_k: values indexed by (shape, class) in the
/// canonical partition order.
pub struct CharacterTable {
    k: u32,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    fn build(k: u32) -> CharacterTable {
        let partitions = enumerate_partitions(k);
        let index: HashMap<Partition, usize> = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let n = partitions.len();
        let mut values = vec![vec![0i64; n]; n];
        for (j, nu) in partitions.iter().enumerate() {
            let mut memo: HashMap<(Vec<u32>, usize), i64> = HashMap::new();
            for (i, mu) in partitions.iter().enumerate() {
                values[i][j] = mn_character(mu.parts(), nu.parts(), 0, &mut memo);
            }
        }
        CharacterTable {
            k,
            partitions,
            index,
            values,
        }
    }

    /// Table for S_k, computed once and shared.
    pub fn get(k: u32) -> Arc<CharacterTable> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CharacterTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry(k)
            .or_insert_with(|| Arc::new(CharacterTable::build(k)))
            .clone()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Partitions of k in canonical order.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn value(&self, mu: &Partition, nu: &Partition) -> i64 {
        self.values[self.index[mu]][self.index[nu]]
    }

    pub fn value_by_index(&self, mu_idx: usize, nu_idx: usize) -> i64 {
        self.values[mu_idx][nu_idx]
    }

    pub fn index_of(&self, p: &Partition) -> usize {
        self.index[p]
    }
}

/// Murnaghan-Nakayama on beta-sets. `shape` is a partition, `nu[pos..]` the
/// cycle parts still to remove (any fixed removal order gives the same value).
fn mn_character(
    shape: &[u32],
    nu: &[u32],
    pos: usize,
    memo: &mut HashMap<(Vec<u32>, usize), i64>,
) -> i64 {
    if pos == nu.len() {
        debug_assert!(shape.is_empty());
        return 1;
    }
    let key = (shape.to_vec(), pos);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let t = nu[pos] as u64;
    let len = shape.len() as u64;
    // Beta-set: strictly decreasing first-column hook lengths.
    let betas: Vec<u64> = shape
        .iter()
        .enumerate()
        .map(|(i, &part)| part as u64 + (len - 1 - i as u64))
        .collect();
    let mut total = 0i64;
    for (i, &b) in betas.iter().enumerate() {
        if b < t {
            continue;
        }
        let nb = b - t;
        if betas.contains(&nb) {
            continue;
        }
        // Height of the removed border strip = betas strictly between nb and b.
        let height = betas.iter().filter(|&&x| nb < x && x < b).count();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        let mut new_betas = betas.clone();
        new_betas[i] = nb;
        new_betas.sort_unstable_by(|a, b| b.cmp(a));
        let m = new_betas.len() as u64;
        let new_shape: Vec<u32> = new_betas
            .iter()
            .enumerate()
            .map(|(j, &nb)| (nb - (m - 1 - j as u64)) as u32)
            .filter(|&p| p > 0)
            .collect();
        total += sign * mn_character(&new_shape, nu, pos + 1, memo);
    }
    memo.insert(key, total);
    total
}

/// Character of the irreducible of shape mu at cycle type nu.
pub fn character(mu: &Partition, nu: &Partition) -> Result<i64> {
    if mu.weight() != nu.weight() {
        return Err(Error::SizeMismatch {
            context: "character",
            left: mu.weight(),
            right: nu.weight(),
        });
    }
    Ok(CharacterTable::get(mu.weight()).value(mu, nu))
}

/// Hook lengths of all cells, row by row.
fn hook_lengths(mu: &Partition) -> Vec<u64> {
    let parts = mu.parts();
    let cols: Vec<u32> = (0..parts.first().copied().unwrap_or(0))
        .map(|j| parts.iter().filter(|&&p| p > j).count() as u32)
        .collect();
    let mut hooks = Vec::with_capacity(mu.weight() as usize);
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = cols[j as usize] - i as u32 - 1;
            hooks.push((arm + leg + 1) as u64);
        }
    }
    hooks
}

/// Dimension of the Specht module: k! / prod(hooks).
pub fn dim_specht(mu: &Partition) -> u128 {
    let mut dim = factorial(mu.weight() as u64);
    for h in hook_lengths(mu) {
        dim /= h as u128;
    }
    dim
}

/// Dimension of the Schur functor applied to a q-dimensional space, as a
/// polynomial in q: prod over cells of (q + j - i) / hook(i, j). Equals the
/// evaluation of the Schur polynomial s_mu under p_k -> q.
pub fn dim_schur_qpoly(mu: &Partition) -> QPoly {
    let mut num = QPoly::one();
    for (i, &row) in mu.parts().iter().enumerate() {
        for j in 0..row as i64 {
            num = &num * &QPoly::from_int_coeffs(&[j - i as i64, 1]);
        }
    }
    let mut hooks = BigRational::one();
    for h in hook_lengths(mu) {
        hooks *= BigRational::from(BigInt::from(h));
    }
    let poly = num.scaled(&hooks.recip());
    // Spot integrality: dimensions at integer q are integers.
    for q in [1u64, 2, mu.len() as u64 + 2] {
        debug_assert!(poly.eval_u64(q).is_integer());
    }
    poly
}

/// Number of pairs (sigma of type nu, sigma' of type nu') whose product has
/// type nu''. Computed through the idempotent basis of the class algebra:
/// (k!)^2 / (z(nu) z(nu') z(nu'')) * sum_rho chi_nu chi_nu' chi_nu'' / n_rho.
/// A non-integral or negative result signals a character-table bug.
pub fn connection_count(
    nu: &Partition,
    nu_prime: &Partition,
    nu_second: &Partition,
) -> Result<BigUint> {
    let k = nu.weight();
    for other in [nu_prime, nu_second] {
        if other.weight() != k {
            return Err(Error::SizeMismatch {
                context: "connection_count",
                left: k,
                right: other.weight(),
            });
        }
    }
    let table = CharacterTable::get(k);
    let mut acc = BigRational::zero();
    for rho in table.partitions() {
        let product = BigInt::from(table.value(rho, nu))
            * BigInt::from(table.value(rho, nu_prime))
            * BigInt::from(table.value(rho, nu_second));
        acc += BigRational::new(product, BigInt::from(dim_specht(rho)));
    }
    let kfact = BigInt::from(factorial(k as u64));
    let z_product =
        BigInt::from(z_of(nu)) * BigInt::from(z_of(nu_prime)) * BigInt::from(z_of(nu_second));
    let value = acc * BigRational::new(&kfact * &kfact, z_product);
    if !value.is_integer() || value.is_negative() {
        return Err(Error::NonIntegralConnectionCount {
            nu: nu.to_string(),
            nu_prime: nu_prime.to_string(),
            nu_second: nu_second.to_string(),
            value: value.to_string(),
        });
    }
    Ok(value.to_integer().to_biguint().unwrap())
}

/// Row orthogonality: sum_nu chi(mu,nu) chi(mu',nu) / z(nu) = delta.
pub fn check_row_orthogonality(k: u32) -> bool {
    let table = CharacterTable::get(k);
    let parts = table.partitions();
    for (a, _) in parts.iter().enumerate() {
        for (b, _) in parts.iter().enumerate() {
            let mut acc = BigRational::zero();
            for (j, nu) in parts.iter().enumerate() {
                let prod =
                    BigInt::from(table.value_by_index(a, j)) * BigInt::from(table.value_by_index(b, j));
                acc += BigRational::new(prod, BigInt::from(z_of(nu)));
            }
            let expect = if a == b {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            if acc != expect {
                return false;
            }
        }
    }
    true
}

/// Column orthogonality: sum_mu chi(mu,nu) chi(mu,nu') = delta * z(nu).
pub fn check_column_orthogonality(k: u32) -> bool {
    let table = CharacterTable::get(k);
    let parts = table.partitions();
    for (a, nu) in parts.iter().enumerate() {
        for (b, _) in parts.iter().enumerate() {
            let mut acc = BigInt::zero();
            for m in 0..parts.len() {
                acc += BigInt::from(table.value_by_index(m, a))
                    * BigInt::from(table.value_by_index(m, b));
            }
            let expect = if a == b {
                BigInt::from(z_of(nu))
            } else {
                BigInt::zero()
            };
            if acc != expect {
                return false;
            }
        }
    }
    true
}

/// sum_mu (dim S_mu)^2 = k!.
pub fn check_dimension_sum(k: u32) -> bool {
    let total: u128 = enumerate_partitions(k)
        .iter()
        .map(|mu| dim_specht(mu).pow(2))
        .sum();
    total == factorial(k as u64)
}

/// Identity linking characters to Schur dimensions:
/// sum_nu q^{l(nu)} chi(rho, nu) / z(nu) = dim_schur_qpoly(rho).
pub fn check_schur_dim_identity(k: u32) -> bool {
    let table = CharacterTable::get(k);
    for rho in table.partitions() {
        let mut acc = QPoly::zero();
        for nu in table.partitions() {
            let c = BigRational::new(
                BigInt::from(table.value(rho, nu)),
                BigInt::from(z_of(nu)),
            );
            acc = &acc + &QPoly::monomial(c, nu.len());
        }
        if acc != dim_schur_qpoly(rho) {
            return false;
        }
    }
    true
}

#[allow(dead_code)]
fn _to_f64(x: &BigRational) -> Option<f64> {
    x.to_f64()
}
