//! Exact sparse polynomials and rational functions in the variables `Q`, `v`
//! and `Q0`, with arbitrary-precision rational coefficients.
//!
//! Every quantity computed by this crate (characters, partition functions,
//! amplitudes) is a [`MultiPoly`]. Quantities that need negative powers, such
//! as duality prefactors, are [`RationalFunction`]s.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three formal variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Number of Potts states.
    Q,
    /// Temperature variable `v = e^J - 1`.
    V,
    /// Weight of clusters touching an exterior dual vertex.
    Q0,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::Q, Var::V, Var::Q0];

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "Q",
            Var::V => "v",
            Var::Q0 => "Q0",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector. The derived order is lexicographic on `(q, v, q0)`,
/// which is the monomial order used for leading terms and serialization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub q: u32,
    pub v: u32,
    pub q0: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { q: 0, v: 0, q0: 0 };

    pub fn new(q: u32, v: u32, q0: u32) -> Self {
        Monomial { q, v, q0 }
    }

    pub fn of(var: Var, exp: u32) -> Self {
        let mut m = Monomial::ONE;
        m.set(var, exp);
        m
    }

    pub fn degree(&self, var: Var) -> u32 {
        match var {
            Var::Q => self.q,
            Var::V => self.v,
            Var::Q0 => self.q0,
        }
    }

    fn set(&mut self, var: Var, exp: u32) {
        match var {
            Var::Q => self.q = exp,
            Var::V => self.v = exp,
            Var::Q0 => self.q0 = exp,
        }
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            q: self.q + other.q,
            v: self.v + other.v,
            q0: self.q0 + other.q0,
        }
    }

    fn checked_div(self, other: Monomial) -> Option<Monomial> {
        Some(Monomial {
            q: self.q.checked_sub(other.q)?,
            v: self.v.checked_sub(other.v)?,
            q0: self.q0.checked_sub(other.q0)?,
        })
    }

    fn gcd(self, other: Monomial) -> Monomial {
        Monomial {
            q: self.q.min(other.q),
            v: self.v.min(other.v),
            q0: self.q0.min(other.q0),
        }
    }
}

/// Sparse polynomial in `Q`, `v`, `Q0` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        MultiPoly::term(Monomial::ONE, c)
    }

    pub fn int(c: i64) -> Self {
        MultiPoly::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(var: Var) -> Self {
        MultiPoly::term(Monomial::of(var, 1), BigRational::one())
    }

    pub fn q() -> Self {
        MultiPoly::var(Var::Q)
    }

    pub fn v() -> Self {
        MultiPoly::var(Var::V)
    }

    pub fn q0() -> Self {
        MultiPoly::var(Var::Q0)
    }

    /// `coeff * monomial`.
    pub fn term(monomial: Monomial, coeff: BigRational) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(monomial, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest monomial under the lexicographic `(Q, v, Q0)` order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self, var: Var) -> u32 {
        self.terms.keys().map(|m| m.degree(var)).max().unwrap_or(0)
    }

    /// Variables that occur with positive degree.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|&x| self.terms.keys().any(|m| m.degree(x) > 0))
            .collect()
    }

    pub fn add_term(&mut self, monomial: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(monomial) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Exact division by a monomial, `None` if some term is not divisible.
    pub fn div_monomial(&self, m: Monomial) -> Option<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.checked_div(m)?, c.clone());
        }
        Some(MultiPoly { terms })
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut result = MultiPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact value under `assignment`. Every variable that occurs must be
    /// assigned.
    pub fn eval(&self, assignment: &Assignment) -> Result<BigRational> {
        for x in self.variables() {
            if assignment.get(x).is_none() {
                return Err(Error::MissingVariable(x));
            }
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for x in Var::ALL {
                let d = m.degree(x);
                if d > 0 {
                    t *= rational_pow(assignment.get(x).unwrap(), d);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Replace one variable by a rational number, keeping the others formal.
    pub fn specialize(&self, var: Var, value: &BigRational) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let d = m.degree(var);
            let mut rest = *m;
            rest.set(var, 0);
            out.add_term(rest, c * rational_pow(value, d));
        }
        out
    }

    /// Replace one variable by a rational function.
    pub fn substitute(&self, var: Var, value: &RationalFunction) -> RationalFunction {
        let top = self.degree(var);
        let num_powers = power_table(&value.num, top);
        let den_powers = power_table(&value.den, top);
        let mut num = MultiPoly::zero();
        for (m, c) in &self.terms {
            let d = m.degree(var);
            let mut rest = *m;
            rest.set(var, 0);
            let factor = &num_powers[d as usize] * &den_powers[(top - d) as usize];
            num += &factor.mul_monomial(rest).scale(c);
        }
        RationalFunction::new(num, den_powers[top as usize].clone())
            .expect("substituted denominator is a power of a nonzero polynomial")
    }

    /// Positive rational `c` with `self / c` having coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn content(&self) -> BigRational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_gcd(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(*first, |acc, m| acc.gcd(*m)),
        }
    }

    /// True when all coefficients are integers `>= 0`.
    pub fn has_nonnegative_integer_coeffs(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|(m, c)| JsonTerm {
                q: m.q,
                v: m.v,
                q0: m.q0,
                coeff: c.to_string(),
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[JsonTerm]) -> Result<MultiPoly> {
        let mut p = MultiPoly::zero();
        for t in terms {
            let c = BigRational::from_str(&t.coeff)
                .map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            p.add_term(Monomial::new(t.q, t.v, t.q0), c);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_terms()).expect("term list serializes")
    }

    pub fn from_json(s: &str) -> Result<MultiPoly> {
        let terms: Vec<JsonTerm> =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        MultiPoly::from_json_terms(&terms)
    }
}

fn power_table(p: &MultiPoly, top: u32) -> Vec<MultiPoly> {
    let mut out = Vec::with_capacity(top as usize + 1);
    out.push(MultiPoly::one());
    for i in 0..top as usize {
        let next = &out[i] * p;
        out.push(next);
    }
    out
}

pub(crate) fn rational_pow(x: &BigRational, n: u32) -> BigRational {
    num_traits::pow(x.clone(), n as usize)
}

/// Wire form of one monomial: `{"Q": 2, "v": 0, "Q0": 0, "coeff": "-3/2"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    #[serde(rename = "Q")]
    pub q: u32,
    pub v: u32,
    #[serde(rename = "Q0")]
    pub q0: u32,
    pub coeff: String,
}

/// Values for some of the variables.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    values: BTreeMap<Var, BigRational>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn with(mut self, var: Var, value: BigRational) -> Self {
        self.values.insert(var, value);
        self
    }

    pub fn with_int(self, var: Var, value: i64) -> Self {
        self.with(var, BigRational::from_integer(value.into()))
    }

    pub fn get(&self, var: Var) -> Option<&BigRational> {
        self.values.get(&var)
    }
}

impl fmt::Display for MultiPoly {
    /// Descending order, e.g. `Q^2 + 2*Q*v - v^3/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for x in Var::ALL {
                match m.degree(x) {
                    0 => {}
                    1 => factors.push(x.name().to_string()),
                    d => factors.push(format!("{}^{}", x.name(), d)),
                }
            }
            let numer = abs.numer();
            let denom = abs.denom();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !numer.is_one() {
                    write!(f, "{numer}*")?;
                }
                f.write_str(&factors.join("*"))?;
                if !denom.is_one() {
                    write!(f, "/{denom}")?;
                }
            }
        }
        Ok(())
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> MultiPoly {
        iter.fold(MultiPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl From<i64> for MultiPoly {
    fn from(c: i64) -> Self {
        MultiPoly::int(c)
    }
}

/// Quotient of two polynomials.
///
/// Stored with rational content removed from both sides, common monomial
/// factors cancelled and a positive leading denominator coefficient. This is
/// not a unique canonical form (no polynomial GCD is taken), so equality is
/// decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut r = RationalFunction { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunction {
            num: p,
            den: MultiPoly::one(),
        }
    }

    /// `Q^q * v^v` with possibly negative exponents.
    pub fn laurent_monomial(q: i64, v: i64) -> Self {
        let split = |e: i64| {
            if e >= 0 {
                (e as u32, 0)
            } else {
                (0, (-e) as u32)
            }
        };
        let (qn, qd) = split(q);
        let (vn, vd) = split(v);
        RationalFunction::new(
            MultiPoly::term(Monomial::new(qn, vn, 0), BigRational::one()),
            MultiPoly::term(Monomial::new(qd, vd, 0), BigRational::one()),
        )
        .expect("monomial denominator")
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Returns the polynomial when the denominator is the constant 1.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.den.is_one().then_some(&self.num)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one();
            return;
        }
        let g = self.num.monomial_gcd().gcd(self.den.monomial_gcd());
        if g != Monomial::ONE {
            self.num = self.num.div_monomial(g).expect("gcd divides");
            self.den = self.den.div_monomial(g).expect("gcd divides");
        }
        // integer coefficients, no common integer factor, positive leading term in den
        let (cn, mut cd) = (self.num.content(), self.den.content());
        if self
            .den
            .leading_term()
            .is_some_and(|(_, c)| c.is_negative())
        {
            cd = -cd;
        }
        let ratio = &cn / &cd;
        let num_scale = BigRational::from_integer(ratio.numer().clone()) / &cn;
        let den_scale = BigRational::from_integer(ratio.denom().clone()) / &cd;
        self.num = self.num.scale(&num_scale);
        self.den = self.den.scale(&den_scale);
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<BigRational> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(assignment)? / d)
    }

    pub fn specialize(&self, var: Var, value: &BigRational) -> Result<RationalFunction> {
        RationalFunction::new(
            self.num.specialize(var, value),
            self.den.specialize(var, value),
        )
    }

    pub fn substitute(&self, var: Var, value: &RationalFunction) -> Result<RationalFunction> {
        let n = self.num.substitute(var, value);
        let d = self.den.substitute(var, value);
        n.checked_div(&d)
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "num": self.num.to_json_terms(),
            "den": self.den.to_json_terms(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<RationalFunction> {
        #[derive(Deserialize)]
        struct Wire {
            num: Vec<JsonTerm>,
            den: Vec<JsonTerm>,
        }
        let w: Wire =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        RationalFunction::new(
            MultiPoly::from_json_terms(&w.num)?,
            MultiPoly::from_json_terms(&w.den)?,
        )
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl From<MultiPoly> for RationalFunction {
    fn from(p: MultiPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero product")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero product")
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero product")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> MultiPoly {
        MultiPoly::q()
    }
    fn v() -> MultiPoly {
        MultiPoly::v()
    }
    fn int(c: i64) -> MultiPoly {
        MultiPoly::int(c)
    }
    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cancellation_and_binomial() {
        assert_eq!(&(&q() + &v()) + &(&q() - &v()), int(2) * q());
        let s = &q() + &v();
        let expected = &(&q().pow(2) + &(int(2) * q() * v())) + &v().pow(2);
        assert_eq!(&s * &s, expected);
        assert_eq!(&(&q() - &int(1)) * &q(), &q().pow(2) - &q());
    }

    #[test]
    fn powers() {
        let s = &q() + &v();
        assert_eq!(s.pow(0), MultiPoly::one());
        assert_eq!(
            v().pow(3),
            MultiPoly::term(Monomial::new(0, 3, 0), rat(1, 1))
        );
        assert_eq!(s.pow(2), &s * &s);
        assert_eq!(MultiPoly::zero().pow(0), MultiPoly::one());
    }

    #[test]
    fn dual_substitution() {
        let dual = RationalFunction::new(q(), v()).unwrap();
        let r = v().pow(2).substitute(Var::V, &dual);
        assert_eq!(r, RationalFunction::new(q().pow(2), v().pow(2)).unwrap());
        let r = (&q() + &v()).substitute(Var::V, &dual);
        assert_eq!(
            r,
            RationalFunction::new(&(&q() * &v()) + &q(), v()).unwrap()
        );
        assert_eq!(r.den(), &v());
        let fixed = (&MultiPoly::q0() * &q()).substitute(Var::Q0, &int(1).into());
        assert_eq!(fixed.as_poly(), Some(&q()));
    }

    #[test]
    fn evaluation() {
        let c2 = &(&q().pow(2) - &(int(3) * q())) + &int(1);
        let a = Assignment::new().with_int(Var::Q, 2);
        assert_eq!(c2.eval(&a).unwrap(), rat(-1, 1));
        let a = Assignment::new().with_int(Var::Q, 3).with_int(Var::V, 1);
        assert_eq!((&q() + &v()).eval(&a).unwrap(), rat(4, 1));
        assert_eq!(
            MultiPoly::one().eval(&Assignment::new()).unwrap(),
            rat(1, 1)
        );
        let a = Assignment::new().with_int(Var::Q, 3);
        assert!(matches!(
            (&q() + &v()).eval(&a),
            Err(Error::MissingVariable(Var::V))
        ));
    }

    #[test]
    fn rational_normalization() {
        // (2Qv) / (-4v^2)  ->  -Q / (2v)
        let r = RationalFunction::new(int(2) * q() * v(), int(-4) * v().pow(2)).unwrap();
        assert_eq!(r.num(), &(-q()));
        assert_eq!(r.den(), &(int(2) * v()));
        assert!(RationalFunction::new(q(), MultiPoly::zero()).is_err());
        let z = RationalFunction::new(MultiPoly::zero(), &q() + &v()).unwrap();
        assert!(z.den().is_one());
    }

    #[test]
    fn display_is_descending() {
        let p = &(&q().pow(2) + &(int(2) * q() * v())) - &v().pow(3).scale(&rat(1, 2));
        assert_eq!(p.to_string(), "Q^2 + 2*Q*v - v^3/2");
        assert_eq!(MultiPoly::zero().to_string(), "0");
        assert_eq!(int(-3).to_string(), "-3");
    }

    #[test]
    fn json_wire_format() {
        let p = &(int(2) * q()) - &MultiPoly::q0().scale(&rat(3, 4));
        let s = p.to_json();
        assert_eq!(
            s,
            r#"[{"Q":0,"v":0,"Q0":1,"coeff":"-3/4"},{"Q":1,"v":0,"Q0":0,"coeff":"2"}]"#
        );
        assert_eq!(MultiPoly::from_json(&s).unwrap(), p);
        assert!(MultiPoly::from_json(r#"[{"Q":0,"v":0,"Q0":0,"coeff":"x"}]"#).is_err());
        let r = RationalFunction::new(q(), v()).unwrap();
        assert_eq!(RationalFunction::from_json(&r.to_json()).unwrap(), r);
    }
}
