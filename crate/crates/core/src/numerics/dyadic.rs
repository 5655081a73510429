//! Dyadic rationals `m · 2^e` with exact ring operations and directed
//! rounding to a fixed number of mantissa bits.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// `mant · 2^exp`, kept normalized: the mantissa is odd, or zero with
/// exponent zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `floor(m / 2^k)` or `ceil(m / 2^k)` for any sign of `m`.
pub(crate) fn shr_round(m: &BigInt, k: u64, dir: Round) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    let mag = m.magnitude();
    let q = mag >> k;
    let exact = (&q << k) == *mag;
    let q = BigInt::from_biguint(Sign::Plus, q);
    match (m.sign(), dir, exact) {
        (Sign::Minus, Round::Down, false) => -(q + 1u32),
        (Sign::Minus, _, _) => -q,
        (_, Round::Up, false) => q + 1u32,
        _ => q,
    }
}

/// `num / den` rounded in the given direction, `den > 0`.
pub(crate) fn div_round(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => -((-num).div_floor(den)),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        Dyadic::new(BigInt::from(v.clone()), 0)
    }

    /// Exact conversion of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = bits >> 63;
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        let m = BigInt::from(mant);
        Some(Dyadic::new(if sign == 1 { -m } else { m }, exp))
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.magnitude().trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant = BigInt::from_biguint(self.mant.sign(), self.mant.magnitude() >> tz);
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `floor(log2 |x|)` for nonzero `x`.
    pub fn log2_floor(&self) -> i64 {
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &o.mant, self.exp + o.exp)
    }

    /// `x · 2^k`.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Rounds to at most `prec` mantissa bits.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        Dyadic::new(shr_round(&self.mant, k, dir), self.exp + k as i64)
    }

    /// Rounds to a multiple of `2^e`.
    pub fn round_to_exp(&self, e: i64, dir: Round) -> Dyadic {
        if self.exp >= e {
            return self.clone();
        }
        Dyadic::new(shr_round(&self.mant, (e - self.exp) as u64, dir), e)
    }

    /// `floor(x)` / `ceil(x)` as an integer.
    pub fn to_integer(&self, dir: Round) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64, dir)
        }
    }

    /// `x · 2^scale` rounded to an integer, for fixed-point work.
    pub fn to_fixed(&self, scale: u64, dir: Round) -> BigInt {
        self.mul_pow2(scale as i64).to_integer(dir)
    }

    pub fn from_fixed(v: BigInt, scale: u64) -> Dyadic {
        Dyadic::new(v, -(scale as i64))
    }

    /// Quotient `a / b` rounded to `prec` bits; `b` must be nonzero.
    pub fn div(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!b.is_zero(), "division by zero");
        if a.is_zero() {
            return Dyadic::zero();
        }
        // Scale so the integer quotient carries at least prec + 2 bits.
        let shift = (prec as i64 + 2 + b.mant.bits() as i64 - a.mant.bits() as i64).max(0) as u64;
        let (num, den) = if b.mant.is_negative() {
            (-(&a.mant << shift), -&b.mant)
        } else {
            (&a.mant << shift, b.mant.clone())
        };
        let q = div_round(&num, &den, dir);
        Dyadic::new(q, a.exp - b.exp - shift as i64).round(prec, dir)
    }

    /// Directed approximation of a rational.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let num = Dyadic::from_int(r.numer().clone());
        let den = Dyadic::from_int(r.denom().clone());
        if r.denom().is_one() {
            return num.round(prec, dir);
        }
        Dyadic::div(&num, &den, prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest-ish float, for estimates and display only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = shr_round(&self.mant, shift as u64, Round::Down)
            .to_f64()
            .unwrap_or(f64::NAN);
        let mut e = (self.exp + shift).clamp(-3000, 3000);
        let mut r = m;
        while e > 1000 {
            r *= 2f64.powi(1000);
            e -= 1000;
        }
        while e < -1000 {
            r *= 2f64.powi(-1000);
            e += 1000;
        }
        r * 2f64.powi(e as i32)
    }

    /// Midpoint `(a + b) / 2`, exact.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        a.add(b).mul_pow2(-1)
    }

    pub fn min<'a>(a: &'a Dyadic, b: &'a Dyadic) -> &'a Dyadic {
        if a <= b {
            a
        } else {
            b
        }
    }

    pub fn max<'a>(a: &'a Dyadic, b: &'a Dyadic) -> &'a Dyadic {
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.to_rational().cmp(r)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), o.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign, both nonzero: compare magnitudes by leading bit first.
        let (la, lb) = (self.log2_floor(), o.log2_floor());
        let mag = if la != lb {
            la.cmp(&lb)
        } else {
            let e = self.exp.min(o.exp);
            let a = self.mant.magnitude() << (self.exp - e) as u64;
            let b = o.mant.magnitude() << (o.exp - e) as u64;
            a.cmp(&b)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

/// Decimal rendering with `digits` significant digits, rounded half away
/// from zero. Pure integer arithmetic, so output is platform independent.
pub fn format_rational(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    if r.is_integer() && r.numer().abs().to_string().len() <= digits {
        return r.numer().to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // Estimate the decimal exponent, then correct it.
    let num_len = a.numer().to_string().len() as i64;
    let den_len = a.denom().to_string().len() as i64;
    let mut e10 = num_len - den_len;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(ten.pow(k as u32))
        } else {
            BigRational::new(BigInt::one(), ten.pow((-k) as u32))
        }
    };
    // Normalize so that 1 <= a / 10^e10 < 10.
    loop {
        let scaled = &a / pow10(e10);
        if scaled >= BigRational::from_integer(ten.clone()) {
            e10 += 1;
        } else if scaled < BigRational::one() {
            e10 -= 1;
        } else {
            break;
        }
    }
    let scaled = &a * pow10(digits as i64 - 1 - e10);
    let twice = &scaled * BigRational::from_integer(BigInt::from(2));
    let mut m: BigInt = (twice.to_integer() + BigInt::one()) / 2;
    if m.to_string().len() > digits {
        m /= 10;
        e10 += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-5..=20).contains(&e10) {
        // Positional notation.
        let all = format!("{head}{tail}");
        if e10 >= 0 {
            let int_len = e10 as usize + 1;
            if all.len() <= int_len {
                out.push_str(&all);
                out.push_str(&"0".repeat(int_len - all.len()));
            } else {
                out.push_str(&all[..int_len]);
                out.push('.');
                out.push_str(&all[int_len..]);
            }
        } else {
            out.push_str("0.");
            out.push_str(&"0".repeat((-e10 - 1) as usize));
            out.push_str(&all);
        }
    } else {
        out.push_str(head);
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        out.push_str(&format!("e{e10}"));
    }
    out
}
