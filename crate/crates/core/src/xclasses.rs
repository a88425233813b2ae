//! Row-block matrices recording how the parts of the multiplicity-map
//! partitions distribute over the blocks of a set partition, their orbits
//! under within-block row permutations and column permutations, ranks over
//! F_p, and the generating polynomials J(X) over part-to-column assignments.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::partitions::{factorial, MultiplicityMap, Partition};
use crate::qpoly::QRat;
use crate::sympoly::ExponentPoly;

/// Nonnegative integer matrix with one row per block of a multiplicity map.
/// Row i sums to the weight of its partition; entries are kept unreduced so
/// rank computations and J(X) read the same representative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct XMatrix {
    cols: usize,
    rows: Vec<Vec<u32>>,
    row_blocks: Vec<Partition>,
}

impl XMatrix {
    /// Rows paired with the partitions they distribute. Rows belonging to the
    /// same partition must be contiguous (the multiplicity-map layout).
    pub fn new(rows: Vec<Vec<u32>>, row_blocks: Vec<Partition>, cols: usize) -> Self {
        assert_eq!(rows.len(), row_blocks.len());
        for (row, rho) in rows.iter().zip(&row_blocks) {
            assert_eq!(row.len(), cols);
            assert_eq!(row.iter().sum::<u32>(), rho.weight(), "row sum");
        }
        XMatrix {
            cols,
            rows,
            row_blocks,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn row_blocks(&self) -> &[Partition] {
        &self.row_blocks
    }

    /// True when every column has a positive entry.
    pub fn all_columns_nonzero(&self) -> bool {
        (0..self.cols).all(|j| self.rows.iter().any(|r| r[j] > 0))
    }

    fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j]).collect())
            .collect()
    }

    fn from_columns(cols: Vec<Vec<u32>>, row_blocks: Vec<Partition>) -> XMatrix {
        let n_rows = row_blocks.len();
        let rows: Vec<Vec<u32>> = (0..n_rows)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        XMatrix {
            cols: cols.len(),
            rows,
            row_blocks,
        }
    }

    fn flat(&self) -> Vec<u32> {
        self.rows.iter().flatten().copied().collect()
    }

    /// Runs of consecutive rows sharing a partition, as (start, len).
    fn block_runs(&self) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = 0;
        for i in 1..=self.rows.len() {
            if i == self.rows.len() || self.row_blocks[i] != self.row_blocks[start] {
                runs.push((start, i - start));
                start = i;
            }
        }
        runs
    }
}

impl fmt::Display for XMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{row:?}")?;
        }
        Ok(())
    }
}

/// Canonical representative of an orbit under within-block row permutations
/// and column permutations, with its orbit size, rank over F_p, and the
/// per-row filling polynomials that assemble J(X).
#[derive(Clone, Debug)]
pub struct MatrixClass {
    canon: XMatrix,
    orbit_size: u128,
    rank_mod_p: usize,
    row_factors: Vec<ExponentPoly>,
}

impl MatrixClass {
    pub fn representative(&self) -> &XMatrix {
        &self.canon
    }

    pub fn orbit_size(&self) -> u128 {
        self.orbit_size
    }

    pub fn rank_mod_p(&self) -> usize {
        self.rank_mod_p
    }

    pub fn kernel_dim(&self) -> usize {
        self.canon.n_cols() - self.rank_mod_p
    }

    pub fn row_factors(&self) -> &[ExponentPoly] {
        &self.row_factors
    }

    /// J(X) for the representative: the product of the per-row factors.
    pub fn j_poly(&self) -> ExponentPoly {
        let ell = self.canon.n_cols();
        self.row_factors
            .iter()
            .fold(ExponentPoly::one(ell), |acc, f| acc.mul(f))
    }
}

pub(crate) fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Rank of X reduced mod p, by Gaussian elimination over F_p.
pub fn rank_mod_p(x: &XMatrix, p: u64) -> Result<usize> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let mut m: Vec<Vec<u64>> = x
        .rows
        .iter()
        .map(|row| row.iter().map(|&v| v as u64 % p).collect())
        .collect();
    let (n_rows, n_cols) = (m.len(), x.cols);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..n_rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = mod_inverse(m[rank][col], p);
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..n_rows {
            if i != rank && m[i][col] != 0 {
                let f = m[i][col];
                for j in 0..n_cols {
                    m[i][j] = (m[i][j] + (p - f) * m[rank][j]) % p;
                }
            }
        }
        rank += 1;
        if rank == n_rows {
            break;
        }
    }
    Ok(rank)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Filling data of one row: for each achievable column-sum vector, the
/// polynomial sum over fillings of the column-count monomials, with integer
/// coefficients counting the fillings that realize each monomial.
type FillingPolys = BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, u128>>;

fn filling_polys(rho: &Partition, ell: usize) -> FillingPolys {
    let mut states: HashMap<(Vec<u32>, Vec<u32>), u128> = HashMap::new();
    states.insert((vec![0; ell], vec![0; ell]), 1);
    for &part in rho.parts() {
        let mut next: HashMap<(Vec<u32>, Vec<u32>), u128> = HashMap::new();
        for ((sums, exps), count) in &states {
            for j in 0..ell {
                let mut s = sums.clone();
                let mut e = exps.clone();
                s[j] += part;
                e[j] += 1;
                *next.entry((s, e)).or_insert(0) += count;
            }
        }
        states = next;
    }
    let mut out: FillingPolys = BTreeMap::new();
    for ((sums, exps), count) in states {
        *out.entry(sums).or_default().entry(exps).or_insert(0) += count;
    }
    out
}

/// For each achievable row vector, the number of part-to-column functions
/// producing it. Counts over all vectors total ell^{l(rho)}.
pub fn enumerate_row_fillings(rho: &Partition, ell: usize) -> BTreeMap<Vec<u32>, u128> {
    filling_polys(rho, ell)
        .into_iter()
        .map(|(sums, polys)| (sums, polys.values().sum()))
        .collect()
}

fn factor_from_polys(polys: &BTreeMap<Vec<u32>, u128>, ell: usize) -> ExponentPoly {
    let mut f = ExponentPoly::zero(ell);
    for (exps, count) in polys {
        f.add_term(
            exps.clone(),
            QRat::from_rational(BigRational::from(BigInt::from(*count))),
        );
    }
    f
}

/// J(X): product over rows of the filling polynomial consistent with that
/// row. Errors if some row cannot arise from its partition.
pub fn j_poly(x: &XMatrix) -> Result<ExponentPoly> {
    let ell = x.n_cols();
    let mut acc = ExponentPoly::one(ell);
    for (i, (row, rho)) in x.rows.iter().zip(&x.row_blocks).enumerate() {
        let polys = filling_polys(rho, ell);
        let Some(p) = polys.get(row) else {
            return Err(Error::UnachievableRow {
                row: i,
                rho: rho.to_string(),
            });
        };
        acc = acc.mul(&factor_from_polys(p, ell));
    }
    Ok(acc)
}

/// Minimum matrix in the orbit of X under within-block row permutations and
/// column permutations, by row-major lexicographic comparison. Two matrices
/// lie in the same class iff their canonical forms are equal.
pub fn canonical_form(x: &XMatrix) -> XMatrix {
    let runs = x.block_runs();
    let mut best: Option<(Vec<u32>, XMatrix)> = None;
    for_each_block_permutation(&runs, x.n_rows(), &mut |perm| {
        let rows: Vec<Vec<u32>> = perm.iter().map(|&i| x.rows[i].clone()).collect();
        let candidate = XMatrix {
            cols: x.cols,
            rows,
            row_blocks: x.row_blocks.clone(),
        };
        let mut cols = candidate.columns();
        cols.sort_unstable();
        let sorted = XMatrix::from_columns(cols, x.row_blocks.clone());
        let key = sorted.flat();
        if best.as_ref().map_or(true, |(bk, _)| key < *bk) {
            best = Some((key, sorted));
        }
    });
    best.expect("at least the identity permutation").1
}

/// Calls `f` with every composite permutation of row indices that permutes
/// rows only within the given runs.
fn for_each_block_permutation(
    runs: &[(usize, usize)],
    n_rows: usize,
    f: &mut impl FnMut(&[usize]),
) {
    let mut perm: Vec<usize> = (0..n_rows).collect();
    fn rec(
        runs: &[(usize, usize)],
        idx: usize,
        perm: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if idx == runs.len() {
            f(perm);
            return;
        }
        let (start, len) = runs[idx];
        permute_range(perm, start, start + len, &mut |p| rec(runs, idx + 1, p, f));
    }
    rec(runs, 0, &mut perm, f);
}

fn permute_range(
    perm: &mut Vec<usize>,
    lo: usize,
    hi: usize,
    f: &mut impl FnMut(&mut Vec<usize>),
) {
    if lo + 1 >= hi {
        f(perm);
        return;
    }
    for i in lo..hi {
        perm.swap(lo, i);
        permute_range(perm, lo + 1, hi, f);
        perm.swap(lo, i);
    }
}

/// Orbit size via orbit-stabilizer over the acting group
/// prod_rho S_{m(rho)} x S_l.
fn orbit_size_of(canon: &XMatrix) -> u128 {
    let runs = canon.block_runs();
    let mut group_order: u128 = factorial(canon.n_cols() as u64);
    for &(_, len) in &runs {
        group_order *= factorial(len as u64);
    }
    let mut base_cols = canon.columns();
    base_cols.sort_unstable();
    let mut stabilizer: u128 = 0;
    for_each_block_permutation(&runs, canon.n_rows(), &mut |perm| {
        let permuted = XMatrix {
            cols: canon.cols,
            rows: perm.iter().map(|&i| canon.rows[i].clone()).collect(),
            row_blocks: canon.row_blocks.clone(),
        };
        let mut cols = permuted.columns();
        cols.sort_unstable();
        if cols == base_cols {
            // Column permutations fixing the matrix: product over distinct
            // columns of multiplicity!.
            let mut fix: u128 = 1;
            let mut run = 1u64;
            for i in 1..=cols.len() {
                if i < cols.len() && cols[i] == cols[i - 1] {
                    run += 1;
                } else {
                    fix *= factorial(run);
                    run = 1;
                }
            }
            stabilizer += fix;
        }
    });
    debug_assert!(group_order % stabilizer == 0);
    group_order / stabilizer
}

/// One class per orbit of valid matrices for the map at `ell` columns: rows
/// range over blockwise achievable vectors and every column must be hit.
/// Deterministic order (sorted by representative). Cached per (map, ell, p).
pub fn enumerate_classes(
    map: &MultiplicityMap,
    ell: usize,
    p: u64,
) -> Result<Arc<Vec<MatrixClass>>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    static CACHE: OnceLock<ClassCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (map.clone(), ell, p);
    if let Some(found) = cache.lock().unwrap().get(&key) {
        return Ok(found.clone());
    }
    let classes = Arc::new(build_classes(map, ell, p)?);
    cache.lock().unwrap().insert(key, classes.clone());
    Ok(classes)
}

type ClassCache = Mutex<HashMap<(MultiplicityMap, usize, u64), Arc<Vec<MatrixClass>>>>;

fn build_classes(map: &MultiplicityMap, ell: usize, p: u64) -> Result<Vec<MatrixClass>> {
    let row_parts = map.row_partitions();
    let k = map.degree_k() as usize;
    if ell == 0 || ell > k || row_parts.is_empty() {
        return Ok(Vec::new());
    }
    let mut per_rho: HashMap<Partition, Arc<FillingPolys>> = HashMap::new();
    for rho in &row_parts {
        per_rho
            .entry(rho.clone())
            .or_insert_with(|| Arc::new(filling_polys(rho, ell)));
    }
    let row_choices: Vec<Vec<&Vec<u32>>> = row_parts
        .iter()
        .map(|rho| per_rho[rho].keys().collect())
        .collect();
    // Max columns each remaining row can newly cover.
    let mut cover_suffix = vec![0usize; row_parts.len() + 1];
    for i in (0..row_parts.len()).rev() {
        cover_suffix[i] = cover_suffix[i + 1] + row_parts[i].len().min(ell);
    }

    let mut reps: HashMap<Vec<u32>, XMatrix> = HashMap::new();
    let mut chosen: Vec<Vec<u32>> = Vec::with_capacity(row_parts.len());
    dfs_matrices(
        &row_choices,
        &cover_suffix,
        0,
        0u64,
        ell,
        &row_parts,
        &mut chosen,
        &mut reps,
    );

    let mut classes = Vec::with_capacity(reps.len());
    for (_, canon) in reps {
        let rank = rank_mod_p(&canon, p)?;
        let row_factors: Vec<ExponentPoly> = canon
            .rows
            .iter()
            .zip(&canon.row_blocks)
            .map(|(row, rho)| factor_from_polys(&per_rho[rho][row], ell))
            .collect();
        classes.push(MatrixClass {
            orbit_size: orbit_size_of(&canon),
            rank_mod_p: rank,
            row_factors,
            canon,
        });
    }
    classes.sort_by(|a, b| a.canon.flat().cmp(&b.canon.flat()));
    Ok(classes)
}

#[allow(clippy::too_many_arguments)]
fn dfs_matrices(
    row_choices: &[Vec<&Vec<u32>>],
    cover_suffix: &[usize],
    row: usize,
    covered: u64,
    ell: usize,
    row_parts: &[Partition],
    chosen: &mut Vec<Vec<u32>>,
    reps: &mut HashMap<Vec<u32>, XMatrix>,
) {
    if row == row_choices.len() {
        if covered.count_ones() as usize == ell {
            let x = XMatrix {
                cols: ell,
                rows: chosen.clone(),
                row_blocks: row_parts.to_vec(),
            };
            let canon = canonical_form(&x);
            reps.entry(canon.flat()).or_insert(canon);
        }
        return;
    }
    let uncovered = ell - covered.count_ones() as usize;
    if uncovered > cover_suffix[row] {
        return;
    }
    for &v in &row_choices[row] {
        let mut mask = covered;
        for (j, &e) in v.iter().enumerate() {
            if e > 0 {
                mask |= 1 << j;
            }
        }
        chosen.push(v.clone());
        dfs_matrices(
            row_choices,
            cover_suffix,
            row + 1,
            mask,
            ell,
            row_parts,
            chosen,
            reps,
        );
        chosen.pop();
    }
}

/// Total number of valid matrices (all blockwise-achievable row tuples with
/// every column nonzero), without orbit grouping. Test cross-check for the
/// orbit-stabilizer sizes.
pub fn count_valid_matrices(map: &MultiplicityMap, ell: usize) -> u128 {
    let row_parts = map.row_partitions();
    let k = map.degree_k() as usize;
    if ell == 0 || ell > k || row_parts.is_empty() {
        return 0;
    }
    let per_rho: HashMap<&Partition, Vec<Vec<u32>>> = {
        let mut m = HashMap::new();
        for rho in &row_parts {
            m.entry(rho)
                .or_insert_with(|| filling_polys(rho, ell).into_keys().collect::<Vec<_>>());
        }
        m
    };
    // Count tuples by inclusion-exclusion-free DFS over coverage masks.
    let mut counts: HashMap<u64, u128> = HashMap::new();
    counts.insert(0, 1);
    for rho in &row_parts {
        let mut next: HashMap<u64, u128> = HashMap::new();
        for (mask, c) in &counts {
            for v in &per_rho[rho] {
                let mut m = *mask;
                for (j, &e) in v.iter().enumerate() {
                    if e > 0 {
                        m |= 1 << j;
                    }
                }
                *next.entry(m).or_insert(0) += c;
            }
        }
        counts = next;
    }
    counts
        .get(&((1u64 << ell) - 1))
        .copied()
        .unwrap_or(0)
}
