//! Directed bounds for `x^(1/v)`, `ln x` and `exp x` at a dyadic point.
//!
//! Everything is done in fixed point with `W` fractional bits, keeping a
//! floor-rounded lower chain and a ceil-rounded upper chain side by side, so
//! each returned pair brackets the true value.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::dyadic::{div_round, shr_round, Dyadic, Round};

/// `(lo, hi)` with `lo <= x^(1/v) <= hi`, each rounded to `prec` bits.
/// `x` must be nonnegative and `v >= 1`.
pub fn root_bounds(x: &Dyadic, v: u32, prec: u32) -> (Dyadic, Dyadic) {
    assert!(!x.is_negative(), "root of a negative number");
    assert!(v >= 1);
    if x.is_zero() || v == 1 {
        return (x.round(prec, Round::Down), x.round(prec, Round::Up));
    }
    let m = x.mantissa().magnitude().clone();
    let e = x.exponent();
    let want_bits = v as i64 * (prec as i64 + 2);
    let j0 = (want_bits - m.bits() as i64).max(0);
    let j = j0 + (e - j0).rem_euclid(v as i64);
    debug_assert_eq!((e - j).rem_euclid(v as i64), 0);
    let big_m: BigUint = &m << j as u64;
    let r = big_m.nth_root(v);
    let out_exp = (e - j) / v as i64;
    let exact = r.pow(v) == big_m;
    let lo = Dyadic::new(BigInt::from(r.clone()), out_exp);
    let hi = if exact {
        lo.clone()
    } else {
        Dyadic::new(BigInt::from(r + 1u32), out_exp)
    };
    (lo.round(prec, Round::Down), hi.round(prec, Round::Up))
}

/// Fixed-point helpers: values are integers scaled by `2^w`.
fn mul_fixed(a: &BigInt, b: &BigInt, w: u64, dir: Round) -> BigInt {
    shr_round(&(a * b), w, dir)
}

/// Bounds on `atanh(1/n) · 2^w`.
fn atanh_inv_fixed(n: u64, w: u64) -> (BigInt, BigInt) {
    let one = BigInt::one() << w;
    let nb = BigInt::from(n);
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut pl = div_round(&one, &nb, Round::Down);
    let mut ph = div_round(&one, &nb, Round::Up);
    let (mut sl, mut sh) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        let d = BigInt::from(2 * j + 1);
        sl += div_round(&pl, &d, Round::Down);
        sh += div_round(&ph, &d, Round::Up);
        pl = div_round(&pl, &n2, Round::Down);
        ph = div_round(&ph, &n2, Round::Up);
        j += 1;
        if ph <= BigInt::one() {
            // Remaining tail is below 2·ph/(2j+1) <= 2 units.
            sh += 2;
            break;
        }
    }
    (sl, sh)
}

/// Bounds on `atanh(t) · 2^w` for `0 <= t <= 1/2` given as fixed-point bounds.
fn atanh_fixed(tl: &BigInt, th: &BigInt, w: u64) -> (BigInt, BigInt) {
    let t2l = mul_fixed(tl, tl, w, Round::Down);
    let t2h = mul_fixed(th, th, w, Round::Up);
    let (mut pl, mut ph) = (tl.clone(), th.clone());
    let (mut sl, mut sh) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        if ph.is_zero() {
            break;
        }
        let d = BigInt::from(2 * j + 1);
        sl += div_round(&pl, &d, Round::Down);
        sh += div_round(&ph, &d, Round::Up);
        pl = mul_fixed(&pl, &t2l, w, Round::Down);
        ph = mul_fixed(&ph, &t2h, w, Round::Up);
        j += 1;
        if ph <= BigInt::one() {
            // t^2 <= 1/4 here, so the tail is below (4/3)·ph/(2j+1) <= 2 units.
            sh += 2;
            break;
        }
    }
    (sl, sh)
}

/// Bounds on `ln 2 · 2^w` from
/// `ln 2 = 18 atanh(1/26) - 2 atanh(1/4801) + 8 atanh(1/8749)`.
fn ln2_fixed(w: u64) -> (BigInt, BigInt) {
    let (al, ah) = atanh_inv_fixed(26, w);
    let (bl, bh) = atanh_inv_fixed(4801, w);
    let (cl, ch) = atanh_inv_fixed(8749, w);
    let lo = al * 18 - bh * 2 + cl * 8;
    let hi = ah * 18 - bl * 2 + ch * 8;
    (lo, hi)
}

/// `(lo, hi)` bracketing `ln 2`.
pub fn ln2_bounds(prec: u32) -> (Dyadic, Dyadic) {
    let w = prec as u64 + 16;
    let (l, h) = ln2_fixed(w);
    (
        Dyadic::from_fixed(l, w).round(prec, Round::Down),
        Dyadic::from_fixed(h, w).round(prec, Round::Up),
    )
}

/// `(lo, hi)` with `lo <= ln x <= hi`; `x > 0`.
pub fn ln_bounds(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    assert!(x.is_positive(), "logarithm of a nonpositive number");
    if *x == Dyadic::one() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    // x = f · 2^k with f in [1/sqrt2, sqrt2).
    let mut k = x.log2_floor();
    let mut f = x.mul_pow2(-k);
    if f.mul(&f) > Dyadic::from_int(2) {
        k += 1;
        f = f.mul_pow2(-1);
    }
    let kbits = 64 - (k.unsigned_abs()).leading_zeros() as u64;
    let w = prec as u64 + 32 + kbits;
    // t = (f - 1)/(f + 1), |t| < 0.172.
    let num = f.sub(&Dyadic::one());
    let den = f.add(&Dyadic::one());
    let e = num.exponent().min(den.exponent());
    let num_i = num.mul_pow2(-e).to_integer(Round::Down) << w;
    let den_i = den.mul_pow2(-e).to_integer(Round::Down);
    let tl = div_round(&num_i, &den_i, Round::Down);
    let th = div_round(&num_i, &den_i, Round::Up);
    let (al, ah) = if tl.is_negative() {
        let (l, h) = atanh_fixed(&(-&th), &(-&tl), w);
        (-h, -l)
    } else {
        atanh_fixed(&tl, &th, w)
    };
    let (l2l, l2h) = ln2_fixed(w);
    let kb = BigInt::from(k);
    let (kl, kh) = if k >= 0 {
        (&kb * l2l, &kb * l2h)
    } else {
        (&kb * l2h, &kb * l2l)
    };
    let lo = kl + al * 2;
    let hi = kh + ah * 2;
    (
        Dyadic::from_fixed(lo, w).round(prec, Round::Down),
        Dyadic::from_fixed(hi, w).round(prec, Round::Up),
    )
}

/// Bound on `exp(x) · 2^w` for fixed-point `0 <= x <= 2^w`.
fn exp_nonneg_fixed(x: &BigInt, w: u64, dir: Round) -> BigInt {
    let one = BigInt::one() << w;
    let mut sum = one.clone();
    let mut term = one;
    let mut j: u64 = 1;
    loop {
        term = div_round(&mul_fixed(&term, x, w, dir), &BigInt::from(j), dir);
        if term.is_zero() {
            break;
        }
        sum += &term;
        j += 1;
        if term <= BigInt::one() {
            break;
        }
    }
    if dir == Round::Up {
        // Tail is at most twice the last term.
        sum += 2;
    }
    sum
}

/// Bound on `exp(x) · 2^w` for fixed-point `|x| <= 2^w`.
fn exp_fixed(x: &BigInt, w: u64, dir: Round) -> BigInt {
    if !x.is_negative() {
        return exp_nonneg_fixed(x, w, dir);
    }
    let pos = exp_nonneg_fixed(&(-x), w, dir.flip());
    let one2 = BigInt::one() << (2 * w);
    div_round(&one2, &pos, dir)
}

/// `(lo, hi)` with `lo <= exp(y) <= hi`.
pub fn exp_bounds(y: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    if y.is_zero() {
        return (Dyadic::one(), Dyadic::one());
    }
    let approx = y.to_f64();
    assert!(approx.abs() < 1.0e15, "exp argument out of range");
    let k = (approx / std::f64::consts::LN_2).round() as i64;
    let kbits = 64 - (k.unsigned_abs()).leading_zeros() as u64;
    let w = prec as u64 + 48 + kbits;
    let (l2l, l2h) = ln2_fixed(w);
    let yl = y.to_fixed(w, Round::Down);
    let yh = y.to_fixed(w, Round::Up);
    let kb = BigInt::from(k);
    let (rl, rh) = if k >= 0 {
        (yl - &kb * l2h, yh - &kb * l2l)
    } else {
        (yl - &kb * l2l, yh - &kb * l2h)
    };
    let lo = exp_fixed(&rl, w, Round::Down);
    let hi = exp_fixed(&rh, w, Round::Up);
    (
        Dyadic::from_fixed(lo, w).mul_pow2(k).round(prec, Round::Down),
        Dyadic::from_fixed(hi, w).mul_pow2(k).round(prec, Round::Up),
    )
}

/// `f64` estimate of `ln` for sizing decisions only.
pub fn approx_ln(x: &Dyadic) -> f64 {
    let k = x.log2_floor();
    let f = x.mul_pow2(-k).to_f64();
    f.ln() + k as f64 * std::f64::consts::LN_2
}
