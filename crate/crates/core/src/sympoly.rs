//! Symmetric polynomials in the monomial basis with q-rational coefficients,
//! the symmetrization map over a fixed number of variables, and evaluation of
//! monomial symmetric functions at the parts of a partition.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::partitions::{factorial, Partition};
use crate::qpoly::QRat;

/// Normalization of the symmetrization map over l variables: the plain sum
/// over S_l, or the average carrying the 1/l! factor. Which one the moment
/// formulas use is decided empirically by convention arbitration.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PhiNormalization {
    Average,
    Sum,
}

/// Symmetric polynomial sum_nu c_nu m_nu in the monomial basis. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymPoly {
    coeffs: BTreeMap<Partition, QRat>,
}

impl SymPoly {
    pub fn zero() -> Self {
        SymPoly::default()
    }

    /// The constant 1 = m_().
    pub fn one() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Partition::empty(), QRat::one());
        SymPoly { coeffs }
    }

    pub fn monomial(nu: Partition, c: QRat) -> Self {
        let mut f = SymPoly::zero();
        f.add_term(nu, c);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, nu: Partition, c: QRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(nu).or_insert_with(QRat::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            // Re-borrow immutably to find the key; simpler to retain.
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    /// self += scalar * other.
    pub fn add_scaled(&mut self, other: &SymPoly, scalar: &QRat) {
        if scalar.is_zero() {
            return;
        }
        for (nu, c) in &other.coeffs {
            self.add_term(nu.clone(), c * scalar);
        }
    }

    /// Stored coefficient of m_nu, zero if absent.
    pub fn coeff(&self, nu: &Partition) -> QRat {
        self.coeffs.get(nu).cloned().unwrap_or_else(QRat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &QRat)> {
        self.coeffs.iter()
    }

    /// Max weight over stored keys, or None for zero.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|nu| nu.weight()).max()
    }

    /// Evaluate with x_i = lambda_i for i <= l(lambda), zero beyond.
    pub fn eval(&self, lambda: &Partition) -> QRat {
        let mut acc = QRat::zero();
        for (nu, c) in &self.coeffs {
            let m = monomial_eval(nu, lambda);
            if m.is_zero() {
                continue;
            }
            let m = QRat::from_rational(BigRational::from(BigInt::from(m)));
            acc = &acc + &(c * &m);
        }
        acc
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (nu, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]*m_{nu}")?;
        }
        Ok(())
    }
}

/// Monomial symmetric function m_nu evaluated at the parts of lambda.
/// Vanishes when l(lambda) < l(nu). The sum runs over distinct arrangements
/// of nu's parts into the slots of lambda.
pub fn monomial_eval(nu: &Partition, lambda: &Partition) -> BigUint {
    let slots = lambda.parts();
    if nu.len() > slots.len() {
        return BigUint::zero();
    }
    if nu.is_empty() {
        return BigUint::one();
    }
    // Group equal exponents; assign each group a set of unused slots.
    let groups = nu.multiplicities();
    let mut used = vec![false; slots.len()];
    let mut total = BigUint::zero();
    assign_groups(&groups, 0, slots, &mut used, &BigUint::one(), &mut total);
    total
}

fn assign_groups(
    groups: &[(u32, u32)],
    g: usize,
    slots: &[u32],
    used: &mut Vec<bool>,
    partial: &BigUint,
    total: &mut BigUint,
) {
    if g == groups.len() {
        *total += partial;
        return;
    }
    let (exp, count) = groups[g];
    let free: Vec<usize> = (0..slots.len()).filter(|&i| !used[i]).collect();
    let count = count as usize;
    if free.len() < count {
        return;
    }
    // Iterate over `count`-subsets of the free slots.
    let mut choose = (0..count).collect::<Vec<usize>>();
    loop {
        let mut product = partial.clone();
        for &ci in &choose {
            let slot = free[ci];
            product *= BigUint::from(slots[slot] as u64).pow(exp);
            used[slot] = true;
        }
        assign_groups(groups, g + 1, slots, used, &product, total);
        for &ci in &choose {
            used[free[ci]] = false;
        }
        // Next combination.
        let n = free.len();
        let mut i = count;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if choose[i] != i + n - count {
                break;
            }
            if i == 0 {
                return;
            }
        }
        choose[i] += 1;
        for j in i + 1..count {
            choose[j] = choose[j - 1] + 1;
        }
    }
}

/// Polynomial in x_1..x_l that need not be symmetric, supporting the
/// generating polynomials J(X) before symmetrization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExponentPoly {
    ell: usize,
    terms: BTreeMap<Vec<u32>, QRat>,
}

impl ExponentPoly {
    pub fn zero(ell: usize) -> Self {
        ExponentPoly {
            ell,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ell: usize) -> Self {
        let mut p = ExponentPoly::zero(ell);
        p.add_term(vec![0; ell], QRat::one());
        p
    }

    pub fn variables(&self) -> usize {
        self.ell
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: QRat) {
        assert_eq!(exps.len(), self.ell, "exponent vector length");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(QRat::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &QRat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &ExponentPoly) -> ExponentPoly {
        assert_eq!(self.ell, other.ell, "variable count mismatch");
        let mut out = ExponentPoly::zero(self.ell);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    /// Sum of coefficients (the evaluation at x_1 = ... = x_l = 1).
    pub fn coefficient_sum(&self) -> QRat {
        let mut acc = QRat::zero();
        for c in self.terms.values() {
            acc = &acc + c;
        }
        acc
    }

    /// Total degree of each term must be constant for J(X) factors; returns
    /// the max total degree.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }
}

/// Symmetrize an l-variable polynomial over S_l and express the result in the
/// monomial basis. Under [`PhiNormalization::Average`] this is the projection
/// (1/l!) sum_tau tau.g; under Sum the 1/l! factor is dropped.
///
/// For a single term c*x^e, the orbit sum collapses to
/// c * prod_v mult_v(e)! * m_{nu(e)} (multiplicities counted over all l
/// entries, zeros included), divided by l! in the average convention.
pub fn symmetrize(g: &ExponentPoly, norm: PhiNormalization) -> SymPoly {
    let ell = g.ell;
    let ell_fact = BigRational::from(BigInt::from(factorial(ell as u64)));
    let mut out = SymPoly::zero();
    for (exps, c) in &g.terms {
        let mut sorted = exps.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut stabilizer = BigRational::one();
        let mut run = 1u64;
        for i in 1..=sorted.len() {
            if i < sorted.len() && sorted[i] == sorted[i - 1] {
                run += 1;
            } else {
                stabilizer *= BigRational::from(BigInt::from(factorial(run)));
                run = 1;
            }
        }
        let factor = match norm {
            PhiNormalization::Average => stabilizer / &ell_fact,
            PhiNormalization::Sum => stabilizer,
        };
        let nu = Partition::from_unsorted(sorted);
        out.add_term(nu, c * &QRat::from_rational(factor));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn qr(n: i64, d: i64) -> QRat {
        QRat::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn br(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn monomial_eval_examples() {
        // m_(1) is the first power sum.
        assert_eq!(monomial_eval(&p(&[1]), &p(&[3, 2])), BigUint::from(5u32));
        // Vanishing for short lambda.
        assert_eq!(monomial_eval(&p(&[2, 1]), &p(&[4])), BigUint::zero());
        // x1^2 x2 + x2^2 x1 at (2,1): 4 + 2.
        assert_eq!(monomial_eval(&p(&[2, 1]), &p(&[2, 1])), BigUint::from(6u32));
        // e_2 at (2,2,1): 4 + 2 + 2.
        assert_eq!(
            monomial_eval(&p(&[1, 1]), &p(&[2, 2, 1])),
            BigUint::from(8u32)
        );
        // Empty monomial is the constant 1.
        assert_eq!(monomial_eval(&Partition::empty(), &p(&[5])), BigUint::one());
        assert_eq!(
            monomial_eval(&Partition::empty(), &Partition::empty()),
            BigUint::one()
        );
    }

    #[test]
    fn eval_basics() {
        let f = SymPoly::monomial(p(&[1]), QRat::one());
        assert_eq!(f.eval(&p(&[3, 2])).as_constant().unwrap(), br(5));
        assert!(SymPoly::zero().eval(&p(&[2, 1])).is_zero());
        let e2 = SymPoly::monomial(p(&[1, 1]), QRat::one());
        assert_eq!(e2.eval(&p(&[2, 2, 1])).as_constant().unwrap(), br(8));
    }

    #[test]
    fn symmetrize_single_variable_term() {
        // x1 over 2 variables averages to (1/2)(x1 + x2).
        let mut g = ExponentPoly::zero(2);
        g.add_term(vec![1, 0], QRat::one());
        let s = symmetrize(&g, PhiNormalization::Average);
        assert_eq!(s.coeff(&p(&[1])), qr(1, 2));
        let s = symmetrize(&g, PhiNormalization::Sum);
        assert_eq!(s.coeff(&p(&[1])), qr(1, 1));
    }

    #[test]
    fn symmetrize_mixed_term() {
        // 3*x1^2*x2 over 2 variables -> (3/2) m_(2,1).
        let mut g = ExponentPoly::zero(2);
        g.add_term(vec![2, 1], qr(3, 1));
        let s = symmetrize(&g, PhiNormalization::Average);
        assert_eq!(s.coeff(&p(&[2, 1])), qr(3, 2));
    }

    #[test]
    fn symmetrize_keeps_symmetric_input() {
        // x1*x2 is already symmetric: average leaves it alone.
        let mut g = ExponentPoly::zero(2);
        g.add_term(vec![1, 1], QRat::one());
        let s = symmetrize(&g, PhiNormalization::Average);
        assert_eq!(s.coeff(&p(&[1, 1])), QRat::one());
    }

    #[test]
    fn coeff_of_absent_key_is_zero() {
        let f = SymPoly::monomial(p(&[2, 1]), QRat::one());
        assert_eq!(f.coeff(&p(&[2, 1])), QRat::one());
        assert!(f.coeff(&p(&[3])).is_zero());
    }

    /// Expand m_nu into l variables (test-side oracle, independent of
    /// symmetrize): all distinct arrangements of nu's parts padded with zeros.
    fn expand_monomial(nu: &Partition, ell: usize) -> ExponentPoly {
        let mut out = ExponentPoly::zero(ell);
        if nu.len() > ell {
            return out;
        }
        let mut exps = vec![0u32; ell];
        for (i, &part) in nu.parts().iter().enumerate() {
            exps[i] = part;
        }
        exps.sort_unstable();
        loop {
            out.add_term(exps.clone(), QRat::one());
            // Next lexicographic permutation.
            let n = exps.len();
            let mut i = n.wrapping_sub(1);
            while i > 0 && exps[i - 1] >= exps[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = n - 1;
            while exps[j] <= exps[i - 1] {
                j -= 1;
            }
            exps.swap(i - 1, j);
            exps[i..].reverse();
        }
        out
    }

    #[test]
    fn symmetrize_is_idempotent_on_expansions() {
        for (nu, ell) in [
            (p(&[2, 1]), 2usize),
            (p(&[2, 1]), 3),
            (p(&[3]), 3),
            (p(&[1, 1]), 4),
            (p(&[2, 2, 1]), 3),
        ] {
            let g = expand_monomial(&nu, ell);
            let s = symmetrize(&g, PhiNormalization::Average);
            assert_eq!(s.coeff(&nu), QRat::one(), "nu = {nu}, l = {ell}");
            assert_eq!(s.terms().count(), 1);
        }
    }

    #[test]
    fn restriction_vanishes_for_long_partitions() {
        // A 2-variable symmetrization can never contain m_nu with l(nu) > 2.
        let mut g = ExponentPoly::zero(2);
        g.add_term(vec![2, 1], QRat::one());
        g.add_term(vec![0, 3], qr(5, 1));
        let s = symmetrize(&g, PhiNormalization::Average);
        for (nu, _) in s.terms() {
            assert!(nu.len() <= 2);
        }
    }

    proptest! {
        /// Evaluating the symmetrization at lambda with l(lambda) = l equals
        /// the average of g over all permuted evaluations.
        #[test]
        fn symmetrize_eval_matches_permutation_average(
            terms in proptest::collection::vec(
                (proptest::collection::vec(0u32..4, 3), -5i64..5),
                1..5,
            ),
            lambda_extra in proptest::collection::vec(1u32..6, 3),
        ) {
            let ell = 3usize;
            let mut g = ExponentPoly::zero(ell);
            for (exps, c) in &terms {
                g.add_term(exps.clone(), qr(*c, 1));
            }
            let lambda = Partition::from_unsorted(lambda_extra.clone());
            prop_assume!(lambda.len() == ell);

            let s = symmetrize(&g, PhiNormalization::Average);
            let lhs = s.eval(&lambda).as_constant().unwrap();

            // Oracle: direct average over the 6 permutations of the slots.
            let slots = lambda.parts();
            let perms: [[usize; 3]; 6] = [
                [0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0],
            ];
            let mut acc = BigRational::zero();
            for perm in perms {
                for (exps, c) in g.terms() {
                    let mut term = c.as_constant().unwrap();
                    for (i, &e) in exps.iter().enumerate() {
                        let base = BigRational::from(BigInt::from(slots[perm[i]] as u64));
                        for _ in 0..e {
                            term *= &base;
                        }
                    }
                    acc += term;
                }
            }
            acc /= BigRational::from(BigInt::from(6u32));
            prop_assert_eq!(lhs, acc);
        }

        /// Linearity of symmetrization.
        #[test]
        fn symmetrize_is_linear(
            ta in proptest::collection::vec((proptest::collection::vec(0u32..3, 2), -4i64..4), 1..4),
            tb in proptest::collection::vec((proptest::collection::vec(0u32..3, 2), -4i64..4), 1..4),
        ) {
            let mut a = ExponentPoly::zero(2);
            for (e, c) in &ta { a.add_term(e.clone(), qr(*c, 1)); }
            let mut b = ExponentPoly::zero(2);
            for (e, c) in &tb { b.add_term(e.clone(), qr(*c, 1)); }
            let mut ab = a.clone();
            for (e, c) in b.terms() { ab.add_term(e.clone(), c.clone()); }

            let mut expect = symmetrize(&a, PhiNormalization::Average);
            expect.add_scaled(&symmetrize(&b, PhiNormalization::Average), &QRat::one());
            let got = symmetrize(&ab, PhiNormalization::Average);
            prop_assert_eq!(got, expect);
        }
    }
}
