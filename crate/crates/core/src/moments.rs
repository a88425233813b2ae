//! Assembly of the moment polynomials F(m, n) = sum over n-subsets of
//! a(S)^m, as exact polynomials in q = p^d.
//!
//! Two independent paths compute the same value:
//!
//! * the collapsed path ([`moment_poly`]): F(m,n) is the sign-weighted sum
//!   over partitions lambda of n of q^{l(lambda)} times the evaluation at
//!   lambda of an n-independent symmetric polynomial assembled from the
//!   X-matrix classes;
//! * the isotypic path ([`moment_via_isotypic`]): F(m,n) decomposes over the
//!   isotypic components mu of the k-fold tensor power as
//!   sum_mu G(map,mu) H(mu,n) / (dim of the Schur functor * dim of the Specht
//!   module), accumulated per multiplicity map.
//!
//! A definition-level sum over set partitions ([`g0_direct`]) arbitrates the
//! class-based machinery, and [`arbitrate_conventions`] fixes the two
//! normalizations the formulas leave open by probing the brute-force oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::characters::{dim_schur_qpoly, dim_specht, CharacterTable};
use crate::error::{Error, Result};
use crate::oracle;
use crate::partitions::{
    enumerate_multiplicity_maps, enumerate_partitions, factorial, sign_char, z_of,
    MultiplicityMap, Partition,
};
use crate::qpoly::{QPoly, QRat};
use crate::sympoly::{symmetrize, PhiNormalization, SymPoly};
use crate::xclasses::{enumerate_classes, rank_mod_p, XMatrix};

/// Where the power of q attached to an X-class comes from in the collapsed
/// formula: the kernel dimension of X mod p, or minus its rank (the two
/// differ by q^l, which the outer q^{l(lambda)} factor does or does not
/// absorb).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum QWeight {
    DimKer,
    NegRank,
}

/// The pair of normalization choices the formulas leave open. Fixed once by
/// [`arbitrate_conventions`]; [`Conventions::frozen`] is the surviving
/// combination, used everywhere by default.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Conventions {
    pub phi: PhiNormalization,
    pub q_weight: QWeight,
}

impl Conventions {
    /// The unique combination that reproduces the brute-force oracle
    /// (verified at build time by the arbitration check): symmetrization as
    /// the S_l average, class weight q^{-rank}.
    pub fn frozen() -> Conventions {
        Conventions {
            phi: PhiNormalization::Average,
            q_weight: QWeight::NegRank,
        }
    }

    pub fn all_candidates() -> Vec<Conventions> {
        let mut out = Vec::new();
        for phi in [PhiNormalization::Average, PhiNormalization::Sum] {
            for q_weight in [QWeight::NegRank, QWeight::DimKer] {
                out.push(Conventions { phi, q_weight });
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        format!(
            "phi={}, q_weight={}",
            match self.phi {
                PhiNormalization::Average => "average",
                PhiNormalization::Sum => "sum",
            },
            match self.q_weight {
                QWeight::NegRank => "neg_rank",
                QWeight::DimKer => "dim_ker",
            }
        )
    }
}

/// Which path produced a result.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComputePath {
    Collapsed,
    Isotypic,
}

/// An exact moment polynomial together with the zeroth moment (the subset
/// count) it is normalized against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentResult {
    pub p: u64,
    pub r: u32,
    pub m: u32,
    pub n: u32,
    pub poly: QPoly,
    pub zeroth: QPoly,
    pub method: ComputePath,
}

impl MomentResult {
    /// F(m,n) / F(0,n) in lowest terms.
    pub fn ratio(&self) -> QRat {
        QRat::new(self.poly.clone(), self.zeroth.clone())
    }
}

fn rat(n: u128) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Scalar weight of a multiplicity map in the outer sum: the multinomial
/// coefficient times prod_rho (sign(rho)/z(rho))^{m(rho)}.
fn map_weight(map: &MultiplicityMap) -> BigRational {
    let mut w = rat(map.multinomial_weight());
    for (rho, count) in map.counts() {
        let base = BigRational::new(BigInt::from(sign_char(rho)), BigInt::from(z_of(rho)));
        for _ in 0..*count {
            w *= &base;
        }
    }
    w
}

/// The symmetric polynomial attached to one multiplicity map: the sum over
/// column counts l and X-classes of the class q-weight times the orbit size
/// times the symmetrized generating polynomial of the class representative.
/// Independent of n; degree equals the tensor degree k of the map.
pub fn map_symmetric_poly(
    map: &MultiplicityMap,
    p: u64,
    conv: Conventions,
) -> Result<Arc<SymPoly>> {
    type Key = (MultiplicityMap, u64, Conventions);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<SymPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (map.clone(), p, conv);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }

    let k = map.degree_k() as usize;
    let mut acc = SymPoly::zero();
    if k == 0 {
        acc = SymPoly::one();
    }
    for ell in 1..=k {
        for class in enumerate_classes(map, ell, p)?.iter() {
            let exponent = match conv.q_weight {
                QWeight::NegRank => -(class.rank_mod_p() as i64),
                QWeight::DimKer => class.kernel_dim() as i64,
            };
            let weight = &QRat::q_power(exponent)
                * &QRat::from_rational(rat(class.orbit_size()));
            let sym = symmetrize(&class.j_poly(), conv.phi);
            acc.add_scaled(&sym, &weight);
        }
    }
    let out = Arc::new(acc);
    cache.lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// The n-independent symmetric polynomial for total mass m: the weighted sum
/// of [`map_symmetric_poly`] over all multiplicity maps of mass m.
pub fn moment_symmetric_poly(
    m: u32,
    r: u32,
    p: u64,
    conv: Conventions,
) -> Result<Arc<SymPoly>> {
    type Key = (u32, u32, u64, Conventions);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<SymPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (m, r, p, conv);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }

    let mut acc = SymPoly::zero();
    for map in enumerate_multiplicity_maps(m, r) {
        let w = QRat::from_rational(map_weight(&map));
        let fb = map_symmetric_poly(&map, p, conv)?;
        acc.add_scaled(&fb, &w);
    }
    let out = Arc::new(acc);
    cache.lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// F(0, n) = C(q, n), computed by the same sign-weighted partition sum the
/// general formula reduces to at m = 0.
pub fn zeroth_moment_poly(n: u32) -> QPoly {
    let mut acc = QPoly::zero();
    for lambda in enumerate_partitions(n) {
        let c = BigRational::new(
            BigInt::from(sign_char(&lambda)),
            BigInt::from(z_of(&lambda)),
        );
        acc = &acc + &QPoly::monomial(c, lambda.len());
    }
    acc
}

/// F(m, n) by the collapsed path: evaluate the mass-m symmetric polynomial at
/// every partition of n with weight q^{l(lambda)} sign(lambda) / z(lambda).
/// Asserts the result reduces to a polynomial of degree <= n-1 (m >= 1).
pub fn moment_poly(m: u32, n: u32, r: u32, p: u64, conv: Conventions) -> Result<MomentResult> {
    let fb = moment_symmetric_poly(m, r, p, conv)?;
    let mut acc = QRat::zero();
    for lambda in enumerate_partitions(n) {
        let value = fb.eval(&lambda);
        if value.is_zero() {
            continue;
        }
        let sign_over_z = QRat::from_rational(BigRational::new(
            BigInt::from(sign_char(&lambda)),
            BigInt::from(z_of(&lambda)),
        ));
        let weight = &QRat::q_power(lambda.len() as i64) * &sign_over_z;
        acc = &acc + &(&weight * &value);
    }
    finish_moment(acc, m, n, r, p, ComputePath::Collapsed)
}

fn finish_moment(
    acc: QRat,
    m: u32,
    n: u32,
    r: u32,
    p: u64,
    method: ComputePath,
) -> Result<MomentResult> {
    let context = format!("F({m},{n}) at p={p}, r={r}");
    let poly = acc.into_polynomial(&context)?;
    if m >= 1 {
        if let Some(deg) = poly.degree() {
            if deg > (n as usize).saturating_sub(1) {
                return Err(Error::DegreeBoundViolation {
                    context,
                    degree: deg,
                    bound: (n as usize).saturating_sub(1),
                });
            }
        }
    }
    let zeroth = if m == 0 {
        poly.clone()
    } else {
        zeroth_moment_poly(n)
    };
    if m == 0 && poly.degree() != Some(n as usize) && n > 0 {
        return Err(Error::DegreeBoundViolation {
            context,
            degree: poly.degree().unwrap_or(0),
            bound: n as usize,
        });
    }
    Ok(MomentResult {
        p,
        r,
        m,
        n,
        poly,
        zeroth,
        method,
    })
}

/// All set partitions of {0..k-1} whose block-size multiset equals nu.
/// Blocks are listed with increasing minima; each partition appears once.
fn set_partitions_with_sizes(k: usize, nu: &Partition) -> Vec<Vec<Vec<usize>>> {
    let mut sizes: Vec<usize> = nu.parts().iter().map(|&v| v as usize).collect();
    sizes.sort_unstable();
    let mut out = Vec::new();
    let mut used = vec![false; k];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    rec_set_partitions(k, &mut sizes, &mut used, &mut blocks, &mut out);
    out
}

fn rec_set_partitions(
    k: usize,
    sizes: &mut Vec<usize>,
    used: &mut Vec<bool>,
    blocks: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let Some(anchor) = (0..k).find(|&i| !used[i]) else {
        out.push(blocks.clone());
        return;
    };
    let mut tried: Vec<usize> = Vec::new();
    for si in 0..sizes.len() {
        let s = sizes[si];
        if tried.contains(&s) {
            continue;
        }
        tried.push(s);
        sizes.remove(si);
        used[anchor] = true;
        let rest: Vec<usize> = (anchor + 1..k).filter(|&i| !used[i]).collect();
        // Choose the other s-1 members from the remaining elements.
        let mut choice: Vec<usize> = (0..s - 1).collect();
        let mut more = s - 1 <= rest.len();
        while more {
            let mut block = vec![anchor];
            for &c in &choice {
                block.push(rest[c]);
                used[rest[c]] = true;
            }
            blocks.push(block);
            rec_set_partitions(k, sizes, used, blocks, out);
            let block = blocks.pop().unwrap();
            for &b in &block[1..] {
                used[b] = false;
            }
            more = next_choice(&mut choice, rest.len());
        }
        used[anchor] = false;
        sizes.insert(si, s);
    }
}

fn next_choice(choice: &mut [usize], n: usize) -> bool {
    let r = choice.len();
    if r == 0 {
        return false;
    }
    let mut i = r;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if choice[i] != i + n - r {
            break;
        }
        if i == 0 {
            return false;
        }
    }
    choice[i] += 1;
    for j in i + 1..r {
        choice[j] = choice[j - 1] + 1;
    }
    true
}

/// Build the row-block matrix of a set partition: entry (i, j) sums the parts
/// of row i's partition over the cells falling in block j.
fn x_from_set_partition(map: &MultiplicityMap, blocks: &[Vec<usize>]) -> XMatrix {
    let row_parts = map.row_partitions();
    let ell = blocks.len();
    let mut cell_block = HashMap::new();
    for (j, block) in blocks.iter().enumerate() {
        for &c in block {
            cell_block.insert(c, j);
        }
    }
    let mut rows = Vec::with_capacity(row_parts.len());
    let mut cell = 0usize;
    for rho in &row_parts {
        let mut row = vec![0u32; ell];
        for &part in rho.parts() {
            row[cell_block[&cell]] += part;
            cell += 1;
        }
        rows.push(row);
    }
    XMatrix::new(rows, row_parts, ell)
}

/// G0 straight from its definition: sum over set partitions with block sizes
/// nu of prod_j (nu_j - 1)! (the number of permutations with those cycle
/// supports) times q to the kernel dimension of the resulting matrix mod p.
/// Internal arbiter for the class-based path.
pub fn g0_direct(map: &MultiplicityMap, nu: &Partition, p: u64) -> Result<QPoly> {
    let k = map.degree_k();
    if nu.weight() != k {
        return Err(Error::SizeMismatch {
            context: "g0_direct",
            left: nu.weight(),
            right: k,
        });
    }
    if k == 0 {
        return Ok(QPoly::one());
    }
    let mut cycle_weight = BigRational::one();
    for &part in nu.parts() {
        cycle_weight *= rat(factorial(part as u64 - 1));
    }
    let mut acc = QPoly::zero();
    for blocks in set_partitions_with_sizes(k as usize, nu) {
        let x = x_from_set_partition(map, &blocks);
        let kernel = x.n_cols() - rank_mod_p(&x, p)?;
        acc = &acc + &QPoly::monomial(cycle_weight.clone(), kernel);
    }
    Ok(acc)
}

/// Per-class inner sums, shared by the class-based G0 reconstruction and the
/// isotypic coordinates: for each nu of weight k,
/// sum over classes at l(nu) columns of orbit * q^{kernel dim} * the
/// coefficient of m_nu in the averaged symmetrization of J(X).
fn class_inner_sums(map: &MultiplicityMap, p: u64) -> Result<Arc<BTreeMap<Partition, QPoly>>> {
    type Key = (MultiplicityMap, u64);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<BTreeMap<Partition, QPoly>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (map.clone(), p);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }

    let k = map.degree_k();
    let mut by_nu: BTreeMap<Partition, QPoly> = BTreeMap::new();
    for nu in enumerate_partitions(k) {
        by_nu.insert(nu, QPoly::zero());
    }
    for ell in 1..=k as usize {
        for class in enumerate_classes(map, ell, p)?.iter() {
            // The orbit-counting identity behind the reconstruction fixes the
            // average normalization here, independently of the collapsed
            // formula's arbitrated convention.
            let sym = symmetrize(&class.j_poly(), PhiNormalization::Average);
            for (nu, coeff) in sym.terms() {
                debug_assert_eq!(nu.len(), ell);
                let c = coeff
                    .as_constant()
                    .expect("symmetrized J(X) has constant coefficients");
                let scaled = c * rat(class.orbit_size());
                let slot = by_nu.get_mut(nu).expect("nu has weight k");
                *slot = &*slot + &QPoly::monomial(scaled, class.kernel_dim());
            }
        }
    }
    let out = Arc::new(by_nu);
    cache.lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// Class-based reconstruction of G0: (prod_j nu_j! / z(nu)) times the inner
/// class sum for nu. Must agree with [`g0_direct`] exactly.
pub fn g0_via_classes(map: &MultiplicityMap, nu: &Partition, p: u64) -> Result<QPoly> {
    let k = map.degree_k();
    if nu.weight() != k {
        return Err(Error::SizeMismatch {
            context: "g0_via_classes",
            left: nu.weight(),
            right: k,
        });
    }
    if k == 0 {
        return Ok(QPoly::one());
    }
    let inner = class_inner_sums(map, p)?;
    let mut factor = BigRational::new(BigInt::one(), BigInt::from(z_of(nu)));
    for &part in nu.parts() {
        factor *= rat(factorial(part as u64));
    }
    Ok(inner[nu].scaled(&factor))
}

/// Coordinate of the map's class-algebra element on the isotypic projector of
/// shape mu: the character-weighted combination of the per-nu class sums.
pub fn g_coord(map: &MultiplicityMap, mu: &Partition, p: u64) -> Result<QPoly> {
    let k = map.degree_k();
    if mu.weight() != k {
        return Err(Error::SizeMismatch {
            context: "g_coord",
            left: mu.weight(),
            right: k,
        });
    }
    if k == 0 {
        return Ok(QPoly::one());
    }
    let table = CharacterTable::get(k);
    let inner = class_inner_sums(map, p)?;
    let n_mu = rat(dim_specht(mu));
    let k_fact = rat(factorial(k as u64));
    let mut acc = QPoly::zero();
    for nu in table.partitions() {
        let inner_nu = &inner[nu];
        if inner_nu.is_zero() {
            continue;
        }
        let chi = table.value(mu, nu);
        if chi == 0 {
            continue;
        }
        let mut coeff = n_mu.clone() * BigRational::from(BigInt::from(chi));
        coeff /= k_fact.clone() * rat(z_of(nu));
        for &part in nu.parts() {
            coeff *= rat(factorial(part as u64));
        }
        acc = &acc + &inner_nu.scaled(&coeff);
    }
    Ok(acc)
}

/// Trace of the isotypic projector of shape mu on the n-th exterior power:
/// k! times the Schur-functor dimension polynomial times a double sum over
/// partitions nu' of k and lambda of n with q^{l(lambda) - l(nu')} weights.
pub fn h_coord(mu: &Partition, n: u32) -> QPoly {
    let k = mu.weight();
    let table = CharacterTable::get(k);
    let lambdas = enumerate_partitions(n);
    let mut acc = QPoly::zero();
    for nu_prime in table.partitions() {
        let chi = table.value(mu, nu_prime);
        if chi == 0 {
            continue;
        }
        let mut parts_fact = BigRational::one();
        for &part in nu_prime.parts() {
            parts_fact *= rat(factorial(part as u64));
        }
        for lambda in &lambdas {
            if nu_prime.len() > lambda.len() {
                continue;
            }
            let m_val = crate::sympoly::monomial_eval(nu_prime, lambda);
            if m_val.is_zero() {
                continue;
            }
            let coeff = BigRational::from(BigInt::from(chi))
                * BigRational::from(BigInt::from(sign_char(lambda)))
                * BigRational::from(BigInt::from(m_val))
                / (rat(z_of(lambda)) * &parts_fact);
            acc = &acc + &QPoly::monomial(coeff, lambda.len() - nu_prime.len());
        }
    }
    let scale = rat(factorial(k as u64));
    &acc.scaled(&scale) * &dim_schur_qpoly(mu)
}

/// F(m, n) by the isotypic path: for every multiplicity map, sum over shapes
/// mu of weight k the product of the two coordinates divided by both
/// dimension factors, all in exact rational-function arithmetic.
pub fn moment_via_isotypic(
    m: u32,
    n: u32,
    r: u32,
    p: u64,
    conv: Conventions,
) -> Result<MomentResult> {
    let _ = conv; // The isotypic formulas pin their own normalizations.
    let mut acc = QRat::zero();
    for map in enumerate_multiplicity_maps(m, r) {
        let w = map_weight(&map);
        let k = map.degree_k();
        let mut per_map = QRat::zero();
        for mu in enumerate_partitions(k) {
            let g = g_coord(&map, &mu, p)?;
            if g.is_zero() {
                continue;
            }
            let h = h_coord(&mu, n);
            if h.is_zero() {
                continue;
            }
            let denom = dim_schur_qpoly(&mu).scaled(&rat(dim_specht(&mu)));
            let term = QRat::new(&g * &h, denom);
            per_map = &per_map + &term;
        }
        acc = &acc + &(&QRat::from_rational(w) * &per_map);
    }
    finish_moment(acc, m, n, r, p, ComputePath::Isotypic)
}

/// Probe outcomes for one convention candidate.
#[derive(Clone, Debug)]
pub struct ArbitrationReport {
    pub surviving: Conventions,
    pub probes: usize,
}

/// Select, from the finite candidate set of normalizations, the unique
/// combination under which the collapsed path matches the brute-force oracle
/// on a probe suite (d in {1,2}, n in {r..r+2} within the space size,
/// m in {1,2}). Zero or multiple survivors is a build-blocking error.
pub fn arbitrate_conventions(p: u64, r: u32) -> Result<ArbitrationReport> {
    let mut survivors = Vec::new();
    let mut probes_run = 0;
    for cand in Conventions::all_candidates() {
        let mut ok = true;
        let mut count = 0;
        'probe: for d in 1..=2u32 {
            let q = (p as u64).pow(d);
            for n in r..=r + 2 {
                if n as u64 > q {
                    continue;
                }
                for m in 1..=2u32 {
                    let expected =
                        oracle::brute_force_moment(p, d, r, m, n, oracle::DEFAULT_OP_CAP)?;
                    let got = match moment_poly(m, n, r, p, cand) {
                        Ok(res) => res.poly.eval_integer(q),
                        Err(_) => {
                            ok = false;
                            break 'probe;
                        }
                    };
                    count += 1;
                    match got {
                        Ok(v) if v == expected => {}
                        _ => {
                            ok = false;
                            break 'probe;
                        }
                    }
                }
            }
        }
        probes_run = probes_run.max(count);
        if ok {
            survivors.push(cand);
        }
    }
    match survivors.len() {
        0 => Err(Error::NoSurvivingConvention),
        1 => Ok(ArbitrationReport {
            surviving: survivors[0],
            probes: probes_run,
        }),
        _ => Err(Error::AmbiguousConvention {
            survivors: survivors.iter().map(|c| c.describe()).collect(),
        }),
    }
}
