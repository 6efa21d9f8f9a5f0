//! Exact scalars.
//!
//! A [`Scalar`] is an element of the multiquadratic field `Q(i, sqrt 2, sqrt 3, sqrt 5, ...)`,
//! stored as a sum `sum_d (a_d + b_d i) sqrt(d)` over squarefree radicands `d`.
//! Gaussian rationals are the `d = 1` slice. Radicands only enter through
//! [`Scalar::sqrt_q`], which the symmetric-power construction needs for its
//! binomial rescaling.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rationals.
pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Term {
    d: u64,
    re: Q,
    im: Q,
}

/// An exact element of the multiquadratic extension of `Q(i)`.
///
/// The representation is canonical (terms sorted by radicand, no zero
/// coefficients), so derived equality is field equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    terms: Vec<Term>,
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn largest_prime_factor(mut n: u64) -> u64 {
    let mut best = 1;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            best = p;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        best = best.max(n);
    }
    best
}

/// Splits `n` as `s^2 * d` with `d` squarefree.
fn squarefree_split(mut n: u64) -> (u64, u64) {
    let mut s = 1;
    let mut d = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += 1;
    }
    (s, d * n)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_q(Q::one())
    }

    pub fn i() -> Self {
        Self::gauss(Q::zero(), Q::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_q(qi(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_q(q(n, d))
    }

    pub fn from_q(r: Q) -> Self {
        Self::gauss(r, Q::zero())
    }

    pub fn gauss(re: Q, im: Q) -> Self {
        Self::from_terms(alloc::vec![Term { d: 1, re, im }])
    }

    /// `sqrt(d)` times the Gaussian rational `re + im i`.
    pub fn surd(d: u64, re: Q, im: Q) -> Self {
        assert!(d > 0, "radicand must be positive");
        let (s, d) = squarefree_split(d);
        let s = Q::from_integer(BigInt::from(s));
        Self::from_terms(alloc::vec![Term { d, re: re * &s, im: im * s }])
    }

    /// Square root of a rational; negative input gives `i sqrt(-r)`.
    ///
    /// Panics if numerator times denominator exceeds `u64`.
    pub fn sqrt_q(r: &Q) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let neg = r.is_negative();
        let a = r.abs();
        let prod = (a.numer() * a.denom()).to_u64().expect("radicand exceeds u64");
        let inv_den = Q::new(BigInt::one(), a.denom().clone());
        if neg {
            Self::surd(prod, Q::zero(), inv_den)
        } else {
            Self::surd(prod, inv_den, Q::zero())
        }
    }

    fn from_terms(terms: Vec<Term>) -> Self {
        let mut acc: BTreeMap<u64, (Q, Q)> = BTreeMap::new();
        for t in terms {
            let e = acc.entry(t.d).or_insert_with(|| (Q::zero(), Q::zero()));
            e.0 += t.re;
            e.1 += t.im;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, (re, im))| !(re.is_zero() && im.is_zero()))
            .map(|(d, (re, im))| Term { d, re, im })
            .collect();
        Scalar { terms }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].d == 1 && self.terms[0].re.is_one() && self.terms[0].im.is_zero()
    }

    /// True when no radicand other than 1 occurs.
    pub fn is_gaussian(&self) -> bool {
        self.terms.iter().all(|t| t.d == 1)
    }

    /// `(re, im)` when the value is a Gaussian rational.
    pub fn gaussian_parts(&self) -> Option<(Q, Q)> {
        match self.terms.as_slice() {
            [] => Some((Q::zero(), Q::zero())),
            [t] if t.d == 1 => Some((t.re.clone(), t.im.clone())),
            _ => None,
        }
    }

    /// The rational value when the scalar is a real rational.
    pub fn to_rational(&self) -> Option<Q> {
        match self.gaussian_parts() {
            Some((re, im)) if im.is_zero() => Some(re),
            _ => None,
        }
    }

    /// Radicands with nonzero coefficients, in increasing order.
    pub fn radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|t| t.d)
    }

    /// `(d, re, im)` triples of the canonical expansion.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Q, &Q)> + '_ {
        self.terms.iter().map(|t| (t.d, &t.re, &t.im))
    }

    pub fn from_parts(parts: impl IntoIterator<Item = (u64, Q, Q)>) -> Self {
        let mut out = Scalar::zero();
        for (d, re, im) in parts {
            out += Scalar::surd(d, re, im);
        }
        out
    }

    pub fn conj(&self) -> Self {
        Scalar { terms: self.terms.iter().map(|t| Term { d: t.d, re: t.re.clone(), im: -t.im.clone() }).collect() }
    }

    /// Real part (the surds are real).
    pub fn re(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term { d: t.d, re: t.re.clone(), im: Q::zero() }).collect())
    }

    /// Imaginary part, as a real scalar.
    pub fn im(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term { d: t.d, re: t.im.clone(), im: Q::zero() }).collect())
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.im.is_zero())
    }

    pub fn scale_q(&self, r: &Q) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Scalar { terms: self.terms.iter().map(|t| Term { d: t.d, re: &t.re * r, im: &t.im * r }).collect() }
    }

    /// Sum of the absolute values of all rational coordinates. Zero exactly
    /// when the scalar is zero; used as the residual norm.
    pub fn l1(&self) -> Q {
        let mut s = Q::zero();
        for t in &self.terms {
            s += t.re.abs() + t.im.abs();
        }
        s
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some((re, im)) = self.gaussian_parts() {
            let n = &re * &re + &im * &im;
            return Some(Self::gauss(&re / &n, -im / n));
        }
        let p = self.terms.iter().map(|t| largest_prime_factor(t.d)).max().unwrap_or(1);
        // x = a + b sqrt(p), x (a - b sqrt(p)) = a^2 - p b^2 has no sqrt(p).
        let mut a = Vec::new();
        let mut b = Vec::new();
        for t in &self.terms {
            if t.d % p == 0 {
                b.push(Term { d: t.d / p, re: t.re.clone(), im: t.im.clone() });
            } else {
                a.push(t.clone());
            }
        }
        let a = Self::from_terms(a);
        let b = Self::from_terms(b);
        let sp = Self::surd(p, Q::one(), Q::zero());
        let conj_p = &a - &(&b * &sp);
        let norm = &(&a * &a) - &(&(&b * &b) * &Self::from_i64(p as i64));
        let ninv = norm.inv()?;
        Some(&conj_p * &ninv)
    }

    /// Sign of a real scalar; `None` when the imaginary part is nonzero.
    pub fn sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        if let Some(r) = self.to_rational() {
            return Some(r.cmp(&Q::zero()));
        }
        let mut bits = 16u32;
        loop {
            let scale = BigUint::one() << (2 * bits as usize);
            let den = BigInt::one() << bits as usize;
            let mut lo = Q::zero();
            let mut hi = Q::zero();
            for t in &self.terms {
                let (l, h) = if t.d == 1 {
                    (Q::one(), Q::one())
                } else {
                    let s = BigInt::from((BigUint::from(t.d) * &scale).sqrt());
                    (Q::new(s.clone(), den.clone()), Q::new(s + 1, den.clone()))
                };
                if t.re.is_positive() {
                    lo += &t.re * l;
                    hi += &t.re * h;
                } else {
                    lo += &t.re * h;
                    hi += &t.re * l;
                }
            }
            if lo.is_positive() {
                return Some(Ordering::Greater);
            }
            if hi.is_negative() {
                return Some(Ordering::Less);
            }
            bits *= 2;
            assert!(bits <= 1 << 16, "sign refinement did not terminate");
        }
    }

    /// Rough floating value, for display and heuristics only.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for t in &self.terms {
            let s = libm_sqrt(t.d as f64);
            re += t.re.to_f64().unwrap_or(0.0) * s;
            im += t.im.to_f64().unwrap_or(0.0) * s;
        }
        (re, im)
    }
}

fn libm_sqrt(x: f64) -> f64 {
    // Newton iteration; avoids a std dependency.
    if x <= 0.0 {
        return 0.0;
    }
    let mut g = if x > 1.0 { x / 2.0 } else { 1.0 };
    for _ in 0..64 {
        g = 0.5 * (g + x / g);
    }
    g
}

fn mul_q(a: &Q, b: &Q) -> Q {
    if a.is_zero() || b.is_zero() {
        Q::zero()
    } else {
        a * b
    }
}

fn mul_terms(x: &Term, y: &Term) -> Term {
    let g = x.d.gcd(&y.d);
    let d = (x.d / g) * (y.d / g);
    let mut re = mul_q(&x.re, &y.re) - mul_q(&x.im, &y.im);
    let mut im = mul_q(&x.re, &y.im) + mul_q(&x.im, &y.re);
    if g != 1 {
        let gq = Q::from_integer(BigInt::from(g));
        re *= &gq;
        im *= gq;
    }
    Term { d, re, im }
}

impl Scalar {
    /// `self += sign * rhs` in place.
    fn accumulate(&mut self, rhs: &Scalar, negate: bool) {
        if rhs.is_zero() {
            return;
        }
        if self.terms.len() == 1 && rhs.terms.len() == 1 && self.terms[0].d == rhs.terms[0].d {
            let (a, b) = (&mut self.terms[0], &rhs.terms[0]);
            if negate {
                a.re -= &b.re;
                a.im -= &b.im;
            } else {
                a.re += &b.re;
                a.im += &b.im;
            }
            if a.re.is_zero() && a.im.is_zero() {
                self.terms.clear();
            }
            return;
        }
        *self = if negate { &*self + &(-rhs) } else { &*self + rhs };
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let ord = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some(a), Some(b)) => a.d.cmp(&b.d),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let a = &self.terms[i];
                    let b = &rhs.terms[j];
                    let re = &a.re + &b.re;
                    let im = &a.im + &b.im;
                    if !(re.is_zero() && im.is_zero()) {
                        out.push(Term { d: a.d, re, im });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Scalar { terms: out }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|t| Term { d: t.d, re: -t.re.clone(), im: -t.im.clone() }).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out.accumulate(rhs, true);
        out
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.terms.len() == 1 && rhs.terms.len() == 1 {
            let t = mul_terms(&self.terms[0], &rhs.terms[0]);
            return Scalar::from_terms(alloc::vec![t]);
        }
        let mut v = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                v.push(mul_terms(a, b));
            }
        }
        Scalar::from_terms(v)
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.accumulate(rhs, false);
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.accumulate(rhs, true);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl From<Q> for Scalar {
    fn from(r: Q) -> Self {
        Scalar::from_q(r)
    }
}

fn fmt_gauss(re: &Q, im: &Q) -> String {
    use alloc::format;
    match (re.is_zero(), im.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => format!("{}", re),
        (true, false) => format!("{}i", im),
        (false, false) => {
            if im.is_negative() {
                format!("{}-{}i", re, -im.clone())
            } else {
                format!("{}+{}i", re, im)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let g = fmt_gauss(&t.re, &t.im);
            if t.d == 1 {
                write!(f, "{}", g)?;
            } else {
                write!(f, "({})*sqrt({})", g, t.d)?;
            }
        }
        Ok(())
    }
}
