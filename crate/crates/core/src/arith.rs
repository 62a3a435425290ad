//! Exact scalar arithmetic: big rationals, univariate polynomials over `Q`,
//! and the rational function field `Q(u)` used by the chart transitions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_int(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// Parses `"3"`, `"-2/5"` or `"0.5"`-free rational literals.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let den = common_denominator(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| (x * q_int(&den)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Dense univariate polynomial over `Q`, coefficient `i` multiplies `u^i`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UPoly {
    coeffs: Vec<Q>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    pub fn var() -> Self {
        UPoly::from_coeffs(vec![Q::zero(), Q::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    /// Order of vanishing at `u = 0`; `None` for the zero polynomial.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn shift_down(&self, k: usize) -> Self {
        UPoly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (UPoly::from_coeffs(quot), UPoly::from_coeffs(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Q::one() / l)),
            None => UPoly::zero(),
        }
    }

    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::constant(Q::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(out)
    }
}

/// Element of `Q(u)` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in rational function");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = UPoly::gcd(&num, &den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let lead = den.leading().unwrap().clone();
        let inv = Q::one() / lead;
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFunc {
            num: p,
            den: UPoly::constant(Q::one()),
        }
    }

    pub fn constant(c: Q) -> Self {
        RatFunc::from_poly(UPoly::constant(c))
    }

    pub fn var() -> Self {
        RatFunc::from_poly(UPoly::var())
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.num.is_zero(), "inverting zero rational function");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Order at `u = 0` (negative for a pole); `None` for zero.
    pub fn order_at_zero(&self) -> Option<i64> {
        let n = self.num.order_at_zero()? as i64;
        let d = self.den.order_at_zero().expect("nonzero denominator") as i64;
        Some(n - d)
    }

    /// Laurent expansion at `u = 0`: returns `(order, c)` such that the function
    /// equals `u^order * (c[0] + c[1] u + ...)`, with `terms` coefficients.
    pub fn laurent(&self, terms: usize) -> Option<(i64, Vec<Q>)> {
        let ord = self.order_at_zero()?;
        let nz = self.num.order_at_zero().unwrap();
        let dz = self.den.order_at_zero().unwrap();
        let n0 = self.num.shift_down(nz);
        let d0 = self.den.shift_down(dz);
        Some((ord, power_series_div(&n0, &d0, terms)))
    }
}

/// Coefficients of `n / d` as a power series, `d(0) != 0`.
pub fn power_series_div(n: &UPoly, d: &UPoly, terms: usize) -> Vec<Q> {
    let d0 = d.coeff(0);
    assert!(!d0.is_zero(), "power series division by a series without constant term");
    let inv0 = Q::one() / &d0;
    let mut out: Vec<Q> = Vec::with_capacity(terms);
    for i in 0..terms {
        let mut acc = n.coeff(i);
        for j in 1..=i.min(d.coeffs().len().saturating_sub(1)) {
            acc -= d.coeff(j) * &out[i - j];
        }
        out.push(acc * &inv0);
    }
    out
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &UPoly| {
            let parts: Vec<String> = p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| format!("{}*u^{}", fmt_q(c), i))
                .collect();
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            }
        };
        write!(f, "({}) / ({})", show(&self.num), show(&self.den))
    }
}

/// Minimal field interface shared by `Q` and `Q(u)` so matrix code can be
/// reused for exact group-element evaluation over either.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn fzero() -> Self;
    fn fone() -> Self;
    fn from_q(x: &Q) -> Self;
    fn is_fzero(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fdiv(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self {
        Self::fzero().fsub(self)
    }
}

impl Field for Q {
    fn fzero() -> Self {
        Zero::zero()
    }
    fn fone() -> Self {
        One::one()
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn is_fzero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fdiv(&self, o: &Self) -> Self {
        self / o
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: UPoly::zero(),
            den: UPoly::constant(Q::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Field for RatFunc {
    fn fzero() -> Self {
        RatFunc::zero()
    }
    fn fone() -> Self {
        RatFunc::constant(Q::one())
    }
    fn from_q(x: &Q) -> Self {
        RatFunc::constant(x.clone())
    }
    fn is_fzero(&self) -> bool {
        self.num.is_zero()
    }
    fn fadd(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
    fn fsub(&self, o: &Self) -> Self {
        Field::fadd(self, &Neg::neg(o.clone()))
    }
    fn fmul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
    fn fdiv(&self, o: &Self) -> Self {
        Field::fmul(self, &o.inv())
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.scale(&-Q::one()),
            den: self.den,
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        Field::fadd(&self, &o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        Field::fmul(&self, &o)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, o: RatFunc) -> RatFunc {
        Field::fdiv(&self, &o)
    }
}

/// Truncated Laurent series `u^order * (c[0] + c[1] u + ... )`, relative precision `c.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    pub order: i64,
    pub coeffs: Vec<Q>,
}

impl Laurent {
    pub fn one(prec: usize) -> Self {
        let mut coeffs = vec![Q::zero(); prec.max(1)];
        coeffs[0] = Q::one();
        Laurent { order: 0, coeffs }
    }

    pub fn mul(&self, o: &Laurent, prec: usize) -> Laurent {
        let mut out = vec![Q::zero(); prec];
        for (i, a) in self.coeffs.iter().enumerate().take(prec) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(prec - i) {
                out[i + j] += a * b;
            }
        }
        Laurent {
            order: self.order + o.order,
            coeffs: out,
        }
    }

    pub fn pow(&self, e: u32, prec: usize) -> Laurent {
        let mut acc = Laurent::one(prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    /// Coefficient of `u^k` in absolute terms, if within precision.
    pub fn coeff_abs(&self, k: i64) -> Option<Q> {
        let rel = k - self.order;
        if rel < 0 {
            return Some(Q::zero());
        }
        self.coeffs.get(rel as usize).cloned()
    }
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upoly_gcd_and_division() {
        // (u-1)(u+2) and (u-1)(u+3)
        let a = UPoly::from_coeffs(vec![q(-2), q(1), q(1)]);
        let b = UPoly::from_coeffs(vec![q(-3), q(2), q(1)]);
        let g = UPoly::gcd(&a, &b);
        assert_eq!(g, UPoly::from_coeffs(vec![q(-1), q(1)]));
        let (qq, r) = a.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(qq, UPoly::from_coeffs(vec![q(2), q(1)]));
    }

    #[test]
    fn ratfunc_normalizes_and_orders() {
        let u = RatFunc::var();
        let one = <RatFunc as Field>::fone();
        let x = Field::fdiv(&one, &u); // 1/u
        assert_eq!(x.order_at_zero(), Some(-1));
        let y = Field::fmul(&x, &u);
        assert_eq!(y, one);
        let z = Field::fsub(&y, &one);
        assert!(Field::is_fzero(&z));
    }

    #[test]
    fn laurent_of_geometric_series() {
        // 1/(u(1-u)) = u^-1 (1 + u + u^2 + ...)
        let den = UPoly::from_coeffs(vec![q(0), q(1), q(-1)]);
        let f = RatFunc::new(UPoly::constant(q(1)), den);
        let (ord, c) = f.laurent(4).unwrap();
        assert_eq!(ord, -1);
        assert_eq!(c, vec![q(1), q(1), q(1), q(1)]);
        let l = Laurent { order: ord, coeffs: c };
        let sq = l.pow(2, 3);
        assert_eq!(sq.order, -2);
        assert_eq!(sq.coeffs, vec![q(1), q(2), q(3)]);
    }

    #[test]
    fn primitive_integer_vectors() {
        let v = vec![qf(1, 2), qf(-3, 4), q(0)];
        let p = primitive_integer(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-2/6"), Some(qf(-1, 3)));
        assert_eq!(fmt_q(&qf(-1, 3)), "-1/3");
        assert_eq!(parse_q("x"), None);
        assert_eq!(parse_q("1/0"), None);
    }
}
