//! Exact univariate arithmetic in the variable q.
//!
//! [`QPoly`] is a dense polynomial over arbitrary-precision rationals and
//! [`QRat`] a reduced quotient of two such polynomials. All moment formulas
//! run in the field of rational functions of q; polynomiality of the final
//! answer is asserted, never assumed.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Polynomial in q with exact rational coefficients, stored low degree first
/// with no trailing zero coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

fn trim(coeffs: &mut Vec<BigRational>) {
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut coeffs = vec![c];
        trim(&mut coeffs);
        QPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        QPoly { coeffs }
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    /// The monomial c * q^d.
    pub fn monomial(c: BigRational, d: usize) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); d + 1];
        coeffs[d] = c;
        QPoly { coeffs }
    }

    /// The variable q itself.
    pub fn var() -> Self {
        QPoly::monomial(BigRational::one(), 1)
    }

    /// q - root, handy when building factored expectations.
    pub fn linear_root(root: i64) -> Self {
        QPoly::from_int_coeffs(&[-root, 1])
    }

    /// Falling-factorial binomial coefficient C(q, n) as a polynomial in q.
    pub fn binomial_q(n: usize) -> Self {
        let mut p = QPoly::one();
        for i in 0..n {
            p = &p * &QPoly::linear_root(i as i64);
        }
        let mut fact = BigRational::one();
        for i in 1..=n {
            fact *= BigRational::from(BigInt::from(i as u64));
        }
        p.scaled(&fact.recip())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scaled(&self, s: &BigRational) -> QPoly {
        if s.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_u64(&self, x: u64) -> BigRational {
        self.eval(&BigRational::from(BigInt::from(x)))
    }

    /// Evaluate at a nonnegative integer point where the value is known to be
    /// a nonnegative integer (e.g. a subset count at q = p^d).
    pub fn eval_integer(&self, x: u64) -> Result<BigUint> {
        let v = self.eval_u64(x);
        if !v.is_integer() || v.is_negative() {
            return Err(Error::NonPolynomialResult {
                context: format!("evaluation at q = {x}"),
                denominator: v.to_string(),
            });
        }
        Ok(v.to_integer().to_biguint().unwrap())
    }

    pub fn pow(&self, mut e: usize) -> QPoly {
        let mut base = self.clone();
        let mut acc = QPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let dd = div.coeffs.len() - 1;
        let lead = div.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let f = &rem[i] / &lead;
            quot[i - dd] = f.clone();
            for j in 0..=dd {
                let t = &div.coeffs[j] * &f;
                rem[i - dd + j] -= t;
            }
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.into_monic()
    }

    fn into_monic(self) -> QPoly {
        match self.leading() {
            None => self,
            Some(l) if l.is_one() => self,
            Some(l) => {
                let inv = l.recip();
                self.scaled(&inv)
            }
        }
    }

    /// Pull out the rational content: returns (content, primitive) with the
    /// primitive part having coprime integer coefficients and positive leading
    /// coefficient. The zero polynomial returns (0, 0).
    pub fn content_primitive(&self) -> (BigRational, Vec<BigInt>) {
        use num_integer::Integer;
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|v| v / &g).collect();
        (BigRational::new(g, den_lcm), prim)
    }
}

impl Add<&QPoly> for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Sub<&QPoly> for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Mul<&QPoly> for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match (d, unit) {
                (0, _) => write!(f, "{}", fmt_rat(&mag))?,
                (_, true) => {}
                (_, false) => write!(f, "{}*", fmt_rat(&mag))?,
            }
            match d {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{d}")?,
            }
        }
        Ok(())
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

/// Reduced rational function of q. The denominator is monic and coprime to
/// the numerator; zero is 0/1.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl QRat {
    pub fn zero() -> Self {
        QRat {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        QRat {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn from_poly(p: QPoly) -> Self {
        QRat {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn from_rational(c: BigRational) -> Self {
        QRat::from_poly(QPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        QRat::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// c / q^e, the weight attached to an X-class of rank e.
    pub fn q_power(e: i64) -> Self {
        if e >= 0 {
            QRat::from_poly(QPoly::monomial(BigRational::one(), e as usize))
        } else {
            QRat::new(QPoly::one(), QPoly::monomial(BigRational::one(), (-e) as usize))
        }
    }

    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = QRat { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = QPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            let (qn, rn) = self.num.div_rem(&g);
            let (qd, rd) = self.den.div_rem(&g);
            debug_assert!(rn.is_zero() && rd.is_zero());
            self.num = qn;
            self.den = qd;
        }
        let lead = self.den.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            self.num = self.num.scaled(&inv);
            self.den = self.den.scaled(&inv);
        }
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Extract the polynomial this value reduces to, or an error naming the
    /// leftover denominator (an internal-consistency failure for callers that
    /// are guaranteed a polynomial).
    pub fn into_polynomial(self, context: &str) -> Result<QPoly> {
        if self.den.is_one() {
            Ok(self.num)
        } else {
            Err(Error::NonPolynomialResult {
                context: context.to_string(),
                denominator: self.den.to_string(),
            })
        }
    }

    /// Value as an exact constant if both sides have degree zero.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.num.degree().map_or(true, |d| d == 0) && self.den.is_one() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn recip(&self) -> QRat {
        assert!(!self.is_zero(), "reciprocal of zero");
        QRat::new(self.den.clone(), self.num.clone())
    }
}

impl Add<&QRat> for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        QRat::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&QRat> for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        QRat::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul<&QRat> for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        QRat::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Factor out integer roots for display: `p = scalar * prod (q - root)^mult * rest`
/// with `rest` a primitive integer polynomial without integer roots. Roots are
/// returned in descending order. Gives up on root search (returning the whole
/// primitive part as `rest`) when the constant term is astronomically large.
pub fn factor_integer_roots(p: &QPoly) -> (BigRational, Vec<(BigInt, usize)>, QPoly) {
    if p.is_zero() {
        return (BigRational::zero(), Vec::new(), QPoly::one());
    }
    let (content, mut prim) = p.content_primitive();
    let mut roots: Vec<(BigInt, usize)> = Vec::new();

    // Roots at 0 first.
    let mut zero_mult = 0usize;
    while prim.len() > 1 && prim[0].is_zero() {
        prim.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((BigInt::zero(), zero_mult));
    }

    let limit = BigInt::from(10u64.pow(12));
    while prim.len() > 1 {
        let c0 = prim[0].clone();
        if c0.abs() > limit {
            break;
        }
        match find_integer_root(&prim, &c0) {
            Some(r) => {
                prim = divide_by_linear(&prim, &r);
                match roots.iter_mut().find(|(root, _)| *root == r) {
                    Some((_, m)) => *m += 1,
                    None => roots.push((r, 1)),
                }
            }
            None => break,
        }
    }
    roots.sort_by(|a, b| b.0.cmp(&a.0));
    let rest = QPoly::from_coeffs(prim.into_iter().map(BigRational::from).collect());
    (content, roots, rest)
}

fn eval_int_poly(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn find_integer_root(coeffs: &[BigInt], c0: &BigInt) -> Option<BigInt> {
    // Candidate roots divide the constant term.
    let mut d = BigInt::one();
    let bound = c0.abs();
    while &d * &d <= bound {
        if (c0 % &d).is_zero() {
            for cand in [d.clone(), -d.clone(), &bound / &d, -(&bound / &d)] {
                if eval_int_poly(coeffs, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
        d += 1;
    }
    None
}

fn divide_by_linear(coeffs: &[BigInt], root: &BigInt) -> Vec<BigInt> {
    // Synthetic division by (q - root); the remainder is known to vanish.
    let mut out = vec![BigInt::zero(); coeffs.len() - 1];
    let mut carry = BigInt::zero();
    for i in (0..coeffs.len()).rev() {
        let v = &coeffs[i] + &carry;
        if i == 0 {
            debug_assert!(v.is_zero());
            break;
        }
        out[i - 1] = v.clone();
        carry = v * root;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn binomial_q_small() {
        // C(q, 4) = q(q-1)(q-2)(q-3)/24
        let b = QPoly::binomial_q(4);
        assert_eq!(b.eval_u64(4), rat(1, 1));
        assert_eq!(b.eval_u64(9), rat(126, 1));
        assert_eq!(b.eval_u64(2), rat(0, 1));
        assert_eq!(b.degree(), Some(4));
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = QPoly::from_int_coeffs(&[-6, 11, -6, 1]); // (q-1)(q-2)(q-3)
        let b = QPoly::from_int_coeffs(&[-2, 1]);
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn qrat_reduces() {
        let num = QPoly::from_int_coeffs(&[-2, 1]); // q - 2
        let den = QPoly::from_int_coeffs(&[4, -4, 1]); // (q - 2)^2
        let r = QRat::new(num, den);
        assert_eq!(r.numerator(), &QPoly::one());
        assert_eq!(r.denominator(), &QPoly::from_int_coeffs(&[-2, 1]));
    }

    #[test]
    fn qrat_add_cancels_to_polynomial() {
        // q/(q-1) - 1/(q-1) = 1... times (q-1)/(q-1): (q - 1)/(q - 1) = 1
        let a = QRat::new(QPoly::var(), QPoly::from_int_coeffs(&[-1, 1]));
        let b = QRat::new(QPoly::one(), QPoly::from_int_coeffs(&[-1, 1]));
        let s = &a - &b;
        assert!(s.is_polynomial());
        assert!(s.clone().into_polynomial("test").unwrap().is_one());
    }

    #[test]
    fn non_polynomial_is_reported() {
        let r = QRat::new(QPoly::one(), QPoly::from_int_coeffs(&[-1, 1]));
        assert!(r.into_polynomial("test").is_err());
    }

    #[test]
    fn factor_finds_roots() {
        // 120(q^2+89q-540) has content 120 and no integer roots.
        let p = QPoly::from_int_coeffs(&[-64800, 10680, 120]);
        let (content, roots, rest) = factor_integer_roots(&p);
        assert_eq!(content, rat(120, 1));
        assert!(roots.is_empty());
        assert_eq!(rest, QPoly::from_int_coeffs(&[-540, 89, 1]));

        // (q-5)(q-4)(q-2)
        let p = &(&QPoly::linear_root(5) * &QPoly::linear_root(4)) * &QPoly::linear_root(2);
        let (content, roots, rest) = factor_integer_roots(&p);
        assert_eq!(content, rat(1, 1));
        assert_eq!(
            roots,
            vec![
                (BigInt::from(5), 1),
                (BigInt::from(4), 1),
                (BigInt::from(2), 1)
            ]
        );
        assert!(rest.is_one());
    }

    #[test]
    fn display_matches_paper_style() {
        let p = QPoly::from_int_coeffs(&[-540, 89, 1]);
        assert_eq!(p.to_string(), "q^2 + 89*q - 540");
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(QPoly::from_int_coeffs(&[0, -1]).to_string(), "-q");
    }
}
