//! Arbitrary-precision dyadic reals and outward-rounded interval arithmetic.
//!
//! `BigReal` is a binary floating value `mant * 2^exp` with an arbitrary
//! integer mantissa. Every rounding operation takes an explicit precision
//! (mantissa bits) and a rounding direction, so enclosures can be kept
//! rigorous by rounding lower endpoints down and upper endpoints up.
//!
//! `RInterval` encloses a single real number; `RSegment` encloses a closed
//! interval of the line (both endpoints carried as enclosures). Geometry
//! certificates (containment, disjointness, membership of the turning point)
//! are expressed on these two types.

use crate::error::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction for a dyadic operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
    /// Round to nearest (ties away from zero); used for midpoints only,
    /// never inside an enclosure computation.
    Nearest,
}

impl Round {
    fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
            Round::Nearest => Round::Nearest,
        }
    }
}

/// An arbitrary-precision dyadic real: `mant * 2^exp`, mantissa normalized
/// so that it is either zero or odd.
#[derive(Clone, PartialEq, Eq)]
pub struct BigReal {
    mant: BigInt,
    exp: i64,
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(17, Round::Nearest))
    }
}

impl BigReal {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut v = BigReal { mant, exp };
        v.normalize();
        v
    }

    pub fn zero() -> Self {
        BigReal {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        BigReal::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        BigReal::new(BigInt::from(v), 0)
    }

    pub fn from_u64(v: u64) -> Self {
        BigReal::new(BigInt::from(v), 0)
    }

    /// `v * 2^exp` for small integers, e.g. `from_parts(3, -2)` is 0.75.
    pub fn from_parts(v: i64, exp: i64) -> Self {
        BigReal::new(BigInt::from(v), exp)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mant.trailing_zeros() {
            if tz > 0 {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// Sign: -1, 0, or 1.
    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of significant mantissa bits.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: the value lies in
    /// `[2^(mag-1), 2^mag)` in absolute value (for nonzero values).
    pub fn mag2(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64
    }

    pub fn neg(&self) -> Self {
        BigReal {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        BigReal {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigReal {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Round the mantissa to at most `prec` bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = (bits - prec as u64) as u64;
        let mant = round_shift(&self.mant, drop, dir);
        BigReal::new(mant, self.exp + drop as i64)
    }

    /// One unit in the last place at this value's current scale.
    fn ulp(&self) -> BigReal {
        BigReal {
            mant: BigInt::from(1),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &BigReal, prec: u32, dir: Round) -> Self {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        // If one operand is negligible at the target precision, avoid the
        // (possibly enormous) mantissa alignment and nudge instead.
        let ma = self.mag2();
        let mb = other.mag2();
        let (big, small) = if ma >= mb {
            (self, other)
        } else {
            (other, self)
        };
        let gap = big.mag2() - small.mag2();
        if gap > prec as i64 + 4 {
            let r = big.round(prec, dir);
            return match dir {
                Round::Down => {
                    if small.signum() < 0 {
                        r.sub(&r.ulp(), prec + 4, Round::Down)
                    } else {
                        r
                    }
                }
                Round::Up => {
                    if small.signum() > 0 {
                        r.add_exact(&r.ulp()).round(prec + 4, Round::Up)
                    } else {
                        r
                    }
                }
                Round::Nearest => r,
            };
        }
        self.add_exact(other).round(prec, dir)
    }

    fn add_exact(&self, other: &BigReal) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let ma = &self.mant << (self.exp - e) as u64;
        let mb = &other.mant << (other.exp - e) as u64;
        BigReal::new(ma + mb, e)
    }

    pub fn sub(&self, other: &BigReal, prec: u32, dir: Round) -> Self {
        self.add(&other.neg(), prec, dir)
    }

    pub fn mul(&self, other: &BigReal, prec: u32, dir: Round) -> Self {
        if self.is_zero() || other.is_zero() {
            return BigReal::zero();
        }
        BigReal {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
        .round(prec, dir)
    }

    /// Multiply by a machine integer (cheap scalar path).
    pub fn mul_i64(&self, k: i64, prec: u32, dir: Round) -> Self {
        if k == 0 || self.is_zero() {
            return BigReal::zero();
        }
        BigReal {
            mant: &self.mant * k,
            exp: self.exp,
        }
        .round(prec, dir)
    }

    /// Directed division, correct to one ulp at `prec` bits.
    pub fn div(&self, other: &BigReal, prec: u32, dir: Round) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(BigReal::zero());
        }
        let la = self.mant.bits() as i64;
        let lb = other.mant.bits() as i64;
        let shift = (prec as i64 + 2 + lb - la).max(0) as u64;
        let num = &self.mant << shift;
        let (mut q, r) = num.div_rem(&other.mant);
        if !r.is_zero() {
            let neg = self.signum() * other.signum() < 0;
            match dir {
                Round::Down => {
                    if neg {
                        q -= 1;
                    }
                }
                Round::Up => {
                    if !neg {
                        q += 1;
                    }
                }
                Round::Nearest => {
                    // |2r| vs |b|
                    let r2: BigInt = r.abs() << 1u32;
                    if r2.magnitude() >= other.mant.magnitude() {
                        if neg {
                            q -= 1;
                        } else {
                            q += 1;
                        }
                    }
                }
            }
        }
        Ok(BigReal::new(q, self.exp - other.exp - shift as i64).round(prec, dir))
    }

    /// `self^e` for a positive base with directed rounding.
    pub fn pow_u64(&self, e: u64, prec: u32, dir: Round) -> Self {
        debug_assert!(self.signum() > 0);
        if e == 0 {
            return BigReal::one();
        }
        let work = prec + 64;
        let mut acc = BigReal::one();
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base, work, dir);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base, work, dir);
        }
        acc.round(prec, dir)
    }

    /// Directed `n`-th root of a positive value.
    ///
    /// The operand is first rounded outward to a short mantissa so the
    /// integer root stays cheap even for values with multi-megabit
    /// exponents.
    pub fn nth_root(&self, n: u32, prec: u32, dir: Round) -> Result<Self> {
        if self.signum() <= 0 {
            return Err(Error::Domain("nth_root of non-positive value".into()));
        }
        if n == 0 {
            return Err(Error::Domain("0th root".into()));
        }
        if n == 1 {
            return Ok(self.round(prec, dir));
        }
        let x = self.round(prec + 8, dir);
        // value = m * 2^e; choose s with (e - s) divisible by n and
        // m << s holding at least n*(prec+2) bits.
        let e = x.exp;
        let want = (n as u64) * (prec as u64 + 2);
        let have = x.mant.bits();
        let mut s = want.saturating_sub(have) as i64;
        let rem = (e - s).rem_euclid(n as i64);
        s += rem;
        let scaled: BigInt = &x.mant << s as u64;
        let mut root = scaled.nth_root(n);
        if dir == Round::Up {
            root += 1;
        }
        Ok(BigReal::new(root, (e - s) / n as i64).round(prec, dir))
    }

    pub fn cmp(&self, other: &BigReal) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitudes via leading-bit position
        // first, aligning mantissas only when the ranges overlap.
        let ma = self.mag2();
        let mb = other.mag2();
        if ma != mb {
            let mag_ord = ma.cmp(&mb);
            return if sa > 0 { mag_ord } else { mag_ord.reverse() };
        }
        let e = self.exp.min(other.exp);
        let la = &self.mant << (self.exp - e) as u64;
        let lb = &other.mant << (other.exp - e) as u64;
        la.cmp(&lb)
    }

    pub fn min(&self, other: &BigReal) -> BigReal {
        if self.cmp(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn max(&self, other: &BigReal) -> BigReal {
        if self.cmp(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Lossy double approximation; saturates for out-of-range exponents.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let top = if bits > 53 {
            round_shift(&self.mant, bits - 53, Round::Nearest)
        } else {
            self.mant.clone()
        };
        let top_f = match top.to_string().parse::<f64>() {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let e = self.exp + if bits > 53 { (bits - 53) as i64 } else { 0 };
        if e > 1020 {
            return if self.signum() > 0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if e < -1060 {
            return 0.0;
        }
        top_f * (e as f64).exp2()
    }

    /// Approximate base-2 logarithm of |self| (not an enclosure).
    pub fn log2_approx(&self) -> f64 {
        debug_assert!(!self.is_zero());
        let bits = self.mant.bits();
        let top = if bits > 53 {
            round_shift(&self.mant.abs(), bits - 53, Round::Nearest)
        } else {
            self.mant.abs()
        };
        let top_f = top.to_string().parse::<f64>().unwrap_or(1.0);
        let dropped = if bits > 53 { (bits - 53) as i64 } else { 0 };
        top_f.log2() + (self.exp + dropped) as f64
    }

    /// Natural log approximation (reporting only, never a certificate).
    pub fn ln_approx(&self) -> f64 {
        self.log2_approx() * std::f64::consts::LN_2
    }

    /// Decimal scientific notation with `sig` significant digits, rounded
    /// in direction `dir` so that printed enclosures still enclose.
    pub fn to_sci(&self, sig: usize, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let neg = self.signum() < 0;
        let x = self.abs();
        // magnitude direction: printed |value| must round consistently
        let mdir = if neg { dir.flip() } else { dir };
        let (digits, dec_exp) = decimal_digits(&x, sig, mdir);
        let ds = digits.to_string();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&ds[0..1]);
        if ds.len() > 1 {
            out.push('.');
            out.push_str(&ds[1..]);
        }
        out.push('e');
        out.push_str(&dec_exp.to_string());
        out
    }
}

/// Shift `m` right by `drop` bits with directed rounding.
fn round_shift(m: &BigInt, drop: u64, dir: Round) -> BigInt {
    match dir {
        Round::Down => m >> drop,
        Round::Up => -(&(-m) >> drop),
        Round::Nearest => {
            let half: BigInt = BigInt::from(1) << (drop - 1);
            if m.sign() == Sign::Minus {
                -(&(-(m.clone()) + half) >> drop)
            } else {
                (m + half) >> drop
            }
        }
    }
}

/// Floating power of ten with directed rounding (for decimal output).
fn pow10(n: u64, prec: u32, dir: Round) -> BigReal {
    BigReal::from_i64(10).pow_u64(n, prec, dir)
}

/// Leading `sig` decimal digits of a positive dyadic and its decimal
/// exponent: returns `(digits, e)` with `value ≈ 0.digits * 10^(e+1)`,
/// digits having exactly `sig` figures.
fn decimal_digits(x: &BigReal, sig: usize, dir: Round) -> (BigInt, i64) {
    debug_assert!(x.signum() > 0);
    const LOG10_2: f64 = 0.30102999566398119;
    let mut dec_exp = (x.mag2() as f64 * LOG10_2).floor() as i64;
    // scale = 10^(sig-1-dec_exp); value*scale should land in [10^(sig-1), 10^sig)
    loop {
        let k = sig as i64 - 1 - dec_exp;
        let prec = 64 + 4 * sig as u32;
        let scaled = if k >= 0 {
            x.mul(&pow10(k as u64, prec, dir), prec, dir)
        } else {
            x.div(&pow10((-k) as u64, prec, dir.flip()), prec, dir)
                .expect("pow10 is nonzero")
        };
        // integer part, rounded in direction
        let digits = dyadic_to_int(&scaled, dir);
        let lo = BigInt::from(10).pow(sig as u32 - 1);
        let hi = BigInt::from(10).pow(sig as u32);
        if digits < lo {
            dec_exp -= 1;
            continue;
        }
        if digits >= hi {
            dec_exp += 1;
            continue;
        }
        return (digits, dec_exp);
    }
}

fn dyadic_to_int(x: &BigReal, dir: Round) -> BigInt {
    if x.exp >= 0 {
        &x.mant << x.exp as u64
    } else {
        round_shift(&x.mant, (-x.exp) as u64, dir)
    }
}

/// Sign classification of an enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    /// Certainly positive (lo > 0).
    Pos,
    /// Certainly negative (hi < 0).
    Neg,
    /// The enclosure meets zero; the sign is not certified.
    Undecided,
}

/// Enclosure of a single real number: `lo <= x <= hi`.
#[derive(Clone, PartialEq, Eq)]
pub struct RInterval {
    lo: BigReal,
    hi: BigReal,
}

impl fmt::Debug for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_sci(12, Round::Down),
            self.hi.to_sci(12, Round::Up)
        )
    }
}

impl RInterval {
    pub fn new(lo: BigReal, hi: BigReal) -> Self {
        debug_assert!(lo.cmp(&hi) != Ordering::Greater, "inverted interval");
        RInterval { lo, hi }
    }

    pub fn point(x: BigReal) -> Self {
        RInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        RInterval::point(BigReal::zero())
    }

    pub fn from_i64(v: i64) -> Self {
        RInterval::point(BigReal::from_i64(v))
    }

    pub fn lo(&self) -> &BigReal {
        &self.lo
    }

    pub fn hi(&self) -> &BigReal {
        &self.hi
    }

    pub fn sign(&self) -> SignClass {
        if self.lo.signum() > 0 {
            SignClass::Pos
        } else if self.hi.signum() < 0 {
            SignClass::Neg
        } else {
            SignClass::Undecided
        }
    }

    /// Zero lies strictly inside the enclosure.
    pub fn contains_zero_inside(&self) -> bool {
        self.lo.signum() < 0 && self.hi.signum() > 0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, x: &BigReal) -> bool {
        self.lo.cmp(x) != Ordering::Greater && x.cmp(&self.hi) != Ordering::Greater
    }

    pub fn contains_interval(&self, other: &RInterval) -> bool {
        self.lo.cmp(&other.lo) != Ordering::Greater && other.hi.cmp(&self.hi) != Ordering::Greater
    }

    pub fn width(&self) -> BigReal {
        self.hi.sub(&self.lo, 64, Round::Up)
    }

    pub fn mid(&self) -> BigReal {
        self.lo
            .add_exact(&self.hi)
            .mul_pow2(-1)
            .round(u32::MAX, Round::Nearest)
    }

    /// Midpoint rounded to a short mantissa (an exact dyadic point).
    pub fn mid_short(&self, prec: u32) -> BigReal {
        self.lo
            .add_exact(&self.hi)
            .mul_pow2(-1)
            .round(prec, Round::Nearest)
    }

    /// max(|lo|, |hi|) rounded up.
    pub fn mag_hi(&self) -> BigReal {
        self.lo.abs().max(&self.hi.abs())
    }

    /// min |x| over the enclosure (zero if it contains zero).
    pub fn mag_lo(&self) -> BigReal {
        if self.contains_zero() {
            BigReal::zero()
        } else {
            self.lo.abs().min(&self.hi.abs())
        }
    }

    pub fn neg(&self) -> Self {
        RInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn abs(&self) -> Self {
        match self.sign() {
            SignClass::Pos => self.clone(),
            SignClass::Neg => self.neg(),
            SignClass::Undecided => RInterval {
                lo: BigReal::zero(),
                hi: self.mag_hi(),
            },
        }
    }

    pub fn add(&self, other: &RInterval, prec: u32) -> Self {
        RInterval {
            lo: self.lo.add(&other.lo, prec, Round::Down),
            hi: self.hi.add(&other.hi, prec, Round::Up),
        }
    }

    pub fn sub(&self, other: &RInterval, prec: u32) -> Self {
        RInterval {
            lo: self.lo.sub(&other.hi, prec, Round::Down),
            hi: self.hi.sub(&other.lo, prec, Round::Up),
        }
    }

    pub fn mul(&self, other: &RInterval, prec: u32) -> Self {
        use SignClass::*;
        let (a, b) = (self, other);
        match (a.sign(), b.sign()) {
            (Pos, Pos) => RInterval {
                lo: a.lo.mul(&b.lo, prec, Round::Down),
                hi: a.hi.mul(&b.hi, prec, Round::Up),
            },
            (Pos, Neg) => RInterval {
                lo: a.hi.mul(&b.lo, prec, Round::Down),
                hi: a.lo.mul(&b.hi, prec, Round::Up),
            },
            (Neg, Pos) => RInterval {
                lo: a.lo.mul(&b.hi, prec, Round::Down),
                hi: a.hi.mul(&b.lo, prec, Round::Up),
            },
            (Neg, Neg) => RInterval {
                lo: a.hi.mul(&b.hi, prec, Round::Down),
                hi: a.lo.mul(&b.lo, prec, Round::Up),
            },
            _ => {
                // general case: min/max over endpoint products
                let p1 = a.lo.mul(&b.lo, prec, Round::Down);
                let p2 = a.lo.mul(&b.hi, prec, Round::Down);
                let p3 = a.hi.mul(&b.lo, prec, Round::Down);
                let p4 = a.hi.mul(&b.hi, prec, Round::Down);
                let lo = p1.min(&p2).min(&p3).min(&p4);
                let q1 = a.lo.mul(&b.lo, prec, Round::Up);
                let q2 = a.lo.mul(&b.hi, prec, Round::Up);
                let q3 = a.hi.mul(&b.lo, prec, Round::Up);
                let q4 = a.hi.mul(&b.hi, prec, Round::Up);
                let hi = q1.max(&q2).max(&q3).max(&q4);
                RInterval { lo, hi }
            }
        }
    }

    pub fn mul_i64(&self, k: i64, prec: u32) -> Self {
        if k >= 0 {
            RInterval {
                lo: self.lo.mul_i64(k, prec, Round::Down),
                hi: self.hi.mul_i64(k, prec, Round::Up),
            }
        } else {
            RInterval {
                lo: self.hi.mul_i64(k, prec, Round::Down),
                hi: self.lo.mul_i64(k, prec, Round::Up),
            }
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        RInterval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
        }
    }

    /// Reciprocal of a sign-definite enclosure.
    pub fn recip(&self, prec: u32) -> Result<Self> {
        if self.sign() == SignClass::Undecided {
            return Err(Error::precision(
                "recip",
                "denominator enclosure meets zero",
            ));
        }
        let one = BigReal::one();
        Ok(RInterval {
            lo: one.div(&self.hi, prec, Round::Down)?,
            hi: one.div(&self.lo, prec, Round::Up)?,
        })
    }

    pub fn div(&self, other: &RInterval, prec: u32) -> Result<Self> {
        Ok(self.mul(&other.recip(prec + 8)?, prec))
    }

    /// Integer power of a certainly-positive enclosure.
    pub fn pow_u64(&self, e: u64, prec: u32) -> Self {
        debug_assert!(self.sign() == SignClass::Pos);
        RInterval {
            lo: self.lo.pow_u64(e, prec, Round::Down),
            hi: self.hi.pow_u64(e, prec, Round::Up),
        }
    }

    /// Directed n-th root of a certainly-positive enclosure.
    pub fn nth_root(&self, n: u32, prec: u32) -> Result<Self> {
        Ok(RInterval {
            lo: self.lo.nth_root(n, prec, Round::Down)?,
            hi: self.hi.nth_root(n, prec, Round::Up)?,
        })
    }

    /// Rational power x^(p/q) of a certainly-positive enclosure.
    pub fn pow_rational(&self, p: u64, q: u32, prec: u32) -> Result<Self> {
        self.pow_u64(p, prec + 16).nth_root(q, prec)
    }

    /// Outward-round both endpoints to a short mantissa.
    pub fn trim(&self, prec: u32) -> Self {
        RInterval {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
        }
    }

    pub fn hull(&self, other: &RInterval) -> Self {
        RInterval {
            lo: self.lo.min(&other.lo),
            hi: self.hi.max(&other.hi),
        }
    }

    pub fn intersect(&self, other: &RInterval) -> Option<Self> {
        let lo = self.lo.max(&other.lo);
        let hi = self.hi.min(&other.hi);
        if lo.cmp(&hi) == Ordering::Greater {
            None
        } else {
            Some(RInterval { lo, hi })
        }
    }

    pub fn overlaps(&self, other: &RInterval) -> bool {
        self.intersect(other).is_some()
    }

    /// Certified strict comparison: every point of `self` is below every
    /// point of `other`.
    pub fn certainly_lt(&self, other: &RInterval) -> bool {
        self.hi.cmp(&other.lo) == Ordering::Less
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

/// Enclosure of a closed interval `[A, B]` of the line, with each endpoint
/// carried as its own enclosure. `left` encloses the smaller endpoint.
#[derive(Debug, Clone)]
pub struct RSegment {
    left: RInterval,
    right: RInterval,
}

impl RSegment {
    /// Build from two endpoint enclosures whose order is certified.
    pub fn ordered(p: RInterval, q: RInterval) -> Result<Self> {
        if p.hi().cmp(q.lo()) != Ordering::Greater {
            Ok(RSegment { left: p, right: q })
        } else if q.hi().cmp(p.lo()) != Ordering::Greater {
            Ok(RSegment { left: q, right: p })
        } else {
            Err(Error::precision(
                "segment",
                "endpoint order not certified",
            ))
        }
    }

    pub fn left(&self) -> &RInterval {
        &self.left
    }

    pub fn right(&self) -> &RInterval {
        &self.right
    }

    /// Enclosure of the segment length.
    pub fn length(&self, prec: u32) -> RInterval {
        let len = self.right.sub(&self.left, prec);
        // order is certified, so the true length is nonnegative
        let lo = if len.lo().signum() < 0 {
            BigReal::zero()
        } else {
            len.lo().clone()
        };
        RInterval::new(lo, len.hi().clone())
    }

    /// Everything certainly inside the segment.
    pub fn inner_lo(&self) -> &BigReal {
        self.left.hi()
    }

    pub fn inner_hi(&self) -> &BigReal {
        self.right.lo()
    }

    /// Outer hull as a single real-number-style interval.
    pub fn outer(&self) -> RInterval {
        RInterval::new(self.left.lo().clone(), self.right.hi().clone())
    }

    /// Zero is certainly in the interior.
    pub fn contains_zero_certified(&self) -> bool {
        self.left.hi().signum() < 0 && self.right.lo().signum() > 0
    }

    /// Zero is certainly outside.
    pub fn zero_free_certified(&self) -> bool {
        self.left.lo().signum() > 0 || self.right.hi().signum() < 0
    }

    /// The point enclosed by `x` certainly lies in the segment.
    pub fn contains_point_certified(&self, x: &RInterval) -> bool {
        self.left.hi().cmp(x.lo()) != Ordering::Greater
            && x.hi().cmp(self.right.lo()) != Ordering::Greater
    }

    /// `inner` is certainly a subset of `self`.
    pub fn contains_seg_certified(&self, inner: &RSegment) -> bool {
        self.left.hi().cmp(inner.left.lo()) != Ordering::Greater
            && inner.right.hi().cmp(self.right.lo()) != Ordering::Greater
    }

    /// The two segments are certainly disjoint.
    pub fn disjoint_certified(&self, other: &RSegment) -> bool {
        self.right.hi().cmp(other.left.lo()) == Ordering::Less
            || other.right.hi().cmp(self.left.lo()) == Ordering::Less
    }

    /// The two segments certainly intersect.
    pub fn intersects_certified(&self, other: &RSegment) -> bool {
        // sup(left endpoints) <= inf(right endpoints), certified
        let l = self.left.lo().max(other.left.lo());
        let lsup = self.left.hi().max(other.left.hi());
        let rinf = self.right.lo().min(other.right.lo());
        let _ = l;
        lsup.cmp(&rinf) != Ordering::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(v: i64, e: i64) -> BigReal {
        BigReal::from_parts(v, e)
    }

    #[test]
    fn bigint_shift_rounds_down() {
        // the rounding scheme relies on arithmetic right shift for BigInt
        let m = BigInt::from(-5);
        assert_eq!(&m >> 1u64, BigInt::from(-3));
        let p = BigInt::from(5);
        assert_eq!(&p >> 1u64, BigInt::from(2));
    }

    #[test]
    fn directed_rounding() {
        let x = br(0b10111, 0); // 23
        let down = x.round(3, Round::Down);
        let up = x.round(3, Round::Up);
        assert_eq!(down.cmp(&br(20, 0)), Ordering::Equal);
        assert_eq!(up.cmp(&br(24, 0)), Ordering::Equal);
        let y = br(-23, 0);
        assert_eq!(y.round(3, Round::Down).cmp(&br(-24, 0)), Ordering::Equal);
        assert_eq!(y.round(3, Round::Up).cmp(&br(-20, 0)), Ordering::Equal);
    }

    #[test]
    fn add_with_huge_exponent_gap() {
        let big = br(1, 0);
        let tiny = br(1, -1_000_000);
        let s = big.add(&tiny, 64, Round::Down);
        // must stay below the true sum and above 1 - 2^-60
        assert!(s.cmp(&br(1, 0)) != Ordering::Greater);
        let floor = br(1, 0).sub(&br(1, -50), 128, Round::Down);
        assert!(s.cmp(&floor) == Ordering::Greater);
        let s_up = big.add(&tiny, 64, Round::Up);
        assert!(s_up.cmp(&br(1, 0)) == Ordering::Greater);
    }

    #[test]
    fn division_directed() {
        let a = br(1, 0);
        let b = br(3, 0);
        let lo = a.div(&b, 64, Round::Down).unwrap();
        let hi = a.div(&b, 64, Round::Up).unwrap();
        assert!(lo.cmp(&hi) == Ordering::Less);
        let three_lo = lo.mul_i64(3, 128, Round::Down);
        let three_hi = hi.mul_i64(3, 128, Round::Up);
        assert!(three_lo.cmp(&a) == Ordering::Less);
        assert!(three_hi.cmp(&a) == Ordering::Greater);
    }

    #[test]
    fn nth_root_directed() {
        let x = br(2, 0);
        let lo = x.nth_root(2, 80, Round::Down).unwrap();
        let hi = x.nth_root(2, 80, Round::Up).unwrap();
        assert!(lo.mul(&lo, 200, Round::Up).cmp(&x) == Ordering::Less);
        assert!(hi.mul(&hi, 200, Round::Down).cmp(&x) == Ordering::Greater);
        // sqrt(2) = 1.41421356...
        assert!((lo.to_f64() - 1.4142135623730951).abs() < 1e-15);
    }

    #[test]
    fn sci_output_encloses() {
        let x = br(1, 0).div(&br(3, 0), 128, Round::Down).unwrap();
        let s_down = x.to_sci(6, Round::Down);
        let s_up = x.to_sci(6, Round::Up);
        assert_eq!(s_down, "3.33333e-1");
        assert_eq!(s_up, "3.33334e-1");
        let y = br(-1, 0).div(&br(3, 0), 128, Round::Down).unwrap();
        assert_eq!(y.to_sci(6, Round::Down), "-3.33334e-1");
        // huge exponents stay cheap: 3 * 2^-2000000 = 3.0605...e-602060
        let z = br(3, -2_000_000);
        let s = z.to_sci(10, Round::Down);
        assert!(s.starts_with("3.06") && s.ends_with("e-602060"), "{s}");
    }

    #[test]
    fn interval_mul_signs() {
        let prec = 64;
        let a = RInterval::new(br(2, 0), br(3, 0));
        let b = RInterval::new(br(-5, 0), br(-4, 0));
        let p = a.mul(&b, prec);
        assert_eq!(p.lo().cmp(&br(-15, 0)), Ordering::Equal);
        assert_eq!(p.hi().cmp(&br(-8, 0)), Ordering::Equal);
        let c = RInterval::new(br(-1, 0), br(2, 0));
        let q = c.mul(&b, prec);
        assert_eq!(q.lo().cmp(&br(-10, 0)), Ordering::Equal);
        assert_eq!(q.hi().cmp(&br(5, 0)), Ordering::Equal);
    }

    #[test]
    fn interval_abs_spanning_zero() {
        let c = RInterval::new(br(-3, 0), br(2, 0));
        let a = c.abs();
        assert_eq!(a.lo().cmp(&BigReal::zero()), Ordering::Equal);
        assert_eq!(a.hi().cmp(&br(3, 0)), Ordering::Equal);
    }

    #[test]
    fn segment_certificates() {
        let seg = RSegment::ordered(
            RInterval::new(br(-10, -3), br(-9, -3)),
            RInterval::new(br(7, -3), br(8, -3)),
        )
        .unwrap();
        assert!(seg.contains_zero_certified());
        let inner = RSegment::ordered(
            RInterval::point(br(-1, -3)),
            RInterval::point(br(1, -3)),
        )
        .unwrap();
        assert!(seg.contains_seg_certified(&inner));
        assert!(!inner.contains_seg_certified(&seg));
        let far = RSegment::ordered(
            RInterval::point(br(2, 0)),
            RInterval::point(br(3, 0)),
        )
        .unwrap();
        assert!(seg.disjoint_certified(&far));
        assert!(far.zero_free_certified());
    }

    #[test]
    fn pow_rational_encloses() {
        // (1/8)^(1/3) = 1/2
        let x = RInterval::point(br(1, -3));
        let r = x.pow_rational(1, 3, 64).unwrap();
        assert!(r.contains(&br(1, -1)));
        let w = r.width();
        assert!(w.cmp(&br(1, -50)) == Ordering::Less);
    }
}
