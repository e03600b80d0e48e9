//! High-precision tent-map arithmetic: evaluating `T_a(x) = a(1-|x|) - 1`,
//! critical orbits and itineraries as rigorous enclosures, the certified
//! slope solve for the Fibonacci-like parameter `a_d`, and the Hofbauer
//! intervals `H_n` with certified cutting-time detection.
//!
//! The turning point is `c = 0` on the domain `[-1, 1]`. Symbols follow the
//! itinerary convention: 1 for an orbit point right of `c`, 0 for left.

use crate::chain;
use crate::error::{Error, Result};
use crate::kneading::Combinatorics;
use crate::real::{BigReal, RInterval, RSegment, Round, SignClass};
use std::sync::Arc;

/// Default guard bits added on top of the per-iterate error budget.
pub const DEFAULT_GUARD_BITS: u32 = 64;

/// Above this prefix length the slope solve refines through the
/// close-return zoom instead of plain bisection.
const ZOOM_THRESHOLD: u64 = 2048;

/// Working precision sufficient for `n` certified tent iterates:
/// `n + G` bits, since each iterate multiplies absolute error by at most
/// `a <= 2`.
pub fn required_precision(d: u32, n: u64) -> u32 {
    required_precision_with_guard(d, n, DEFAULT_GUARD_BITS)
}

pub fn required_precision_with_guard(_d: u32, n: u64, guard: u32) -> u32 {
    u32::try_from(n)
        .ok()
        .and_then(|n| n.checked_add(guard))
        .expect("requested orbit length out of precision range")
}

/// Enclosure of `T_a(x) = a(1-|x|) - 1`. When `x` straddles zero the
/// result covers both branches.
pub fn tent_apply(a: &RInterval, x: &RInterval, prec: u32) -> RInterval {
    let one = RInterval::from_i64(1);
    let t = one.sub(&x.abs(), prec);
    a.mul(&t, prec).sub(&one, prec)
}

/// A solved tent system: an enclosure of the slope whose critical
/// itinerary prefix is certified against the kneading sequence K_d.
#[derive(Clone)]
pub struct TentSystem {
    d: u32,
    a: RInterval,
    solved_prefix_len: u64,
    precision_bits: u32,
    comb: Arc<Combinatorics>,
}

impl TentSystem {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn slope(&self) -> &RInterval {
        &self.a
    }

    pub fn solved_prefix_len(&self) -> u64 {
        self.solved_prefix_len
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn combinatorics(&self) -> &Arc<Combinatorics> {
        &self.comb
    }

    /// Enclosures of c_1..c_n. Every enclosure must have a certified sign;
    /// an enclosure with zero in its interior is a precision fault.
    pub fn critical_orbit(&self, n: u64) -> Result<Vec<RInterval>> {
        let mut pts = Vec::with_capacity(n as usize);
        let mut x = RInterval::zero();
        for m in 1..=n {
            x = tent_apply(&self.a, &x, self.precision_bits);
            if x.sign() == SignClass::Undecided {
                return Err(Error::precision(
                    "critical_orbit",
                    format!("enclosure of c_{m} meets zero (d={})", self.d),
                ));
            }
            pts.push(x.clone());
        }
        Ok(pts)
    }

    /// Itinerary symbols of c_1..c_n.
    pub fn itinerary(&self, n: u64) -> Result<Vec<u8>> {
        Ok(self
            .critical_orbit(n)?
            .iter()
            .map(|x| if x.sign() == SignClass::Pos { 1 } else { 0 })
            .collect())
    }

    /// Streaming orbit visitor that tolerates undecided signs (the caller
    /// sees the raw enclosure and decides; used for frequency tallies).
    pub fn orbit_stream<F>(&self, n: u64, mut visit: F) -> Result<()>
    where
        F: FnMut(u64, &RInterval) -> Result<()>,
    {
        let mut x = RInterval::zero();
        for m in 1..=n {
            x = tent_apply(&self.a, &x, self.precision_bits);
            visit(m, &x)?;
        }
        Ok(())
    }

    /// Hofbauer interval H_n (endpoint enclosures).
    ///
    /// H_n = [c_n, c_j] where j tracks the non-orbit endpoint: it resets
    /// to 1 after each cutting time and advances by one otherwise (H_1 is
    /// [c, c_1]). Membership of 0 is decided by the certified signs of the
    /// two endpoint enclosures.
    pub fn hofbauer_interval(&self, n: u64) -> Result<RSegment> {
        let (cuts, seg) = self.hofbauer_run(n)?;
        let _ = cuts;
        Ok(seg)
    }

    /// The cutting times detected by the Hofbauer recursion up to `n_max`:
    /// all n with `0 in H_n` certified. Membership undecidable either way
    /// is a precision fault, never a silent skip.
    pub fn hofbauer_cutting_times(&self, n_max: u64) -> Result<Vec<u64>> {
        Ok(self.hofbauer_run(n_max)?.0)
    }

    fn hofbauer_run(&self, n_max: u64) -> Result<(Vec<u64>, RSegment)> {
        let orbit = self.critical_orbit(n_max)?;
        let pt = |j: u64| -> RInterval {
            if j == 0 {
                RInterval::zero()
            } else {
                orbit[(j - 1) as usize].clone()
            }
        };
        // H_1 = [c, c_1]: 0 is a boundary point, so n = 1 is a cutting time
        let mut cuts = vec![1u64];
        let mut other: u64 = 0;
        for n in 2..=n_max {
            // step: if 0 in H_{n-1} the interval restarts at [c_n, c_1]
            let was_cut = *cuts.last().unwrap() == n - 1;
            other = if was_cut { 1 } else { other + 1 };
            let sn = pt(n).sign();
            let so = pt(other).sign();
            if sn == SignClass::Undecided || so == SignClass::Undecided {
                return Err(Error::precision(
                    "hofbauer",
                    format!("membership of 0 in H_{n} undecidable"),
                ));
            }
            if sn != so {
                cuts.push(n);
            }
        }
        let seg = if n_max == 1 {
            RSegment::ordered(RInterval::zero(), pt(1))?
        } else {
            RSegment::ordered(pt(n_max), pt(other))?
        };
        Ok((cuts, seg))
    }
}

/// Outcome of comparing a candidate slope's itinerary with K_d in the
/// parity-twisted (kneading) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PtOrder {
    Below,
    Above,
    /// agrees with K_d through the probed depth
    AgreesTo(u64),
    /// sign of some orbit enclosure undecided at the precision cap
    Undecided(u64),
}

/// Certified itinerary comparison of a point slope against K_d, escalating
/// working precision internally.
fn compare_point(
    comb: &Combinatorics,
    a_pt: &BigReal,
    depth: u64,
    max_prec: u32,
) -> Result<PtOrder> {
    let mut prec = 256u32.min(max_prec);
    loop {
        let a = RInterval::point(a_pt.clone());
        let mut x = RInterval::zero();
        let mut stalled = None;
        for m in 1..=depth {
            x = tent_apply(&a, &x, prec);
            let sym = match x.sign() {
                SignClass::Pos => 1u8,
                SignClass::Neg => 0u8,
                SignClass::Undecided => {
                    stalled = Some(m);
                    break;
                }
            };
            let want = comb.symbol(m)?;
            if sym != want {
                let parity = comb.ones_parity(m - 1)?;
                let plain_above = sym > want;
                let above = plain_above == (parity == 0);
                return Ok(if above { PtOrder::Above } else { PtOrder::Below });
            }
        }
        match stalled {
            None => return Ok(PtOrder::AgreesTo(depth)),
            Some(m) => {
                if prec >= max_prec {
                    return Ok(PtOrder::Undecided(m));
                }
                prec = prec.saturating_mul(2).min(max_prec);
            }
        }
    }
}

/// Nudge a dyadic point by `2^j` to escape a measure-zero collision of the
/// candidate orbit with the turning point.
fn nudge(x: &BigReal, j: i64) -> BigReal {
    x.add(&BigReal::from_parts(1, j), u32::MAX, Round::Nearest)
}

/// A certified theta-order bracket around a_d: the lower endpoint's
/// itinerary precedes K_d, the upper endpoint's follows it (first
/// disagreement order, parity-corrected). Monotonicity of the kneading
/// invariant in the tent family places a_d strictly between them.
pub fn theta_bracket(
    comb: &Combinatorics,
    depth: u64,
    max_prec: u32,
) -> Result<(BigReal, BigReal)> {
    let mut lo = BigReal::from_parts(65, -6); // 1 + 1/64
    let mut hi = BigReal::from_i64(2);
    match compare_point(comb, &lo, depth, max_prec)? {
        PtOrder::Below => {}
        other => {
            return Err(Error::BracketFailure(format!(
                "left endpoint does not precede K_{}: {other:?}",
                comb.d()
            )))
        }
    }
    match compare_point(comb, &hi, depth, max_prec)? {
        PtOrder::Above => {}
        other => {
            return Err(Error::BracketFailure(format!(
                "right endpoint does not follow K_{}: {other:?}",
                comb.d()
            )))
        }
    }
    let max_steps = 2 * depth + 64;
    for step in 0..max_steps {
        // stop well above the window scale of the probe depth, so
        // midpoints keep disagreeing with K_d and stay classifiable
        let width = hi.sub(&lo, 64, Round::Up);
        if !width.is_zero() && width.mag2() < -((depth / 2) as i64) - 24 {
            return Ok((lo, hi));
        }
        let mut mid = lo
            .add(&hi, u32::MAX, Round::Nearest)
            .mul_pow2(-1)
            .round(step as u32 + 24, Round::Nearest);
        let mut placed = false;
        for attempt in 0..4 {
            if lo.cmp(&mid) != std::cmp::Ordering::Less || mid.cmp(&hi) != std::cmp::Ordering::Less
            {
                mid = lo.add(&hi, u32::MAX, Round::Nearest).mul_pow2(-1);
            }
            match compare_point(comb, &mid, depth, max_prec)? {
                PtOrder::Below => {
                    lo = mid;
                    placed = true;
                    break;
                }
                PtOrder::Above => {
                    hi = mid;
                    placed = true;
                    break;
                }
                PtOrder::AgreesTo(_) => {
                    // inside the probe-depth window: the current bracket
                    // is already certified, just wider than asked
                    return Ok((lo, hi));
                }
                PtOrder::Undecided(_) => {
                    mid = nudge(&mid, mid.mag2() - 40 - attempt as i64);
                }
            }
        }
        if !placed {
            return Err(Error::precision(
                "theta_bracket",
                "candidate itinerary signs undecidable after nudges",
            ));
        }
    }
    Ok((lo, hi))
}

/// Certify that every slope in `enc` reproduces the kneading prefix of
/// length `n` (one interval-orbit pass).
fn certify_prefix(comb: &Combinatorics, enc: &RInterval, n: u64, prec: u32) -> Result<()> {
    let mut x = RInterval::zero();
    for m in 1..=n {
        x = tent_apply(enc, &x, prec);
        let sym = match x.sign() {
            SignClass::Pos => 1u8,
            SignClass::Neg => 0u8,
            SignClass::Undecided => {
                return Err(Error::precision(
                    "certify_prefix",
                    format!("symbol {m} of {n} undecided over the slope enclosure"),
                ))
            }
        };
        if sym != comb.symbol(m)? {
            return Err(Error::Certificate(format!(
                "slope enclosure violates kneading symbol at position {m}"
            )));
        }
    }
    Ok(())
}

/// Solve for the Fibonacci-like tent slope: returns a `TentSystem` whose
/// slope enclosure is certified to reproduce `kneading_sequence(d, n)` for
/// `n = target_prefix_len` (every slope in the enclosure produces that
/// prefix).
///
/// Bisection compares candidate itineraries to K_d at the first
/// disagreeing symbol, with orientation corrected by the parity of 1s
/// before the disagreement; for long prefixes the bracket is refined
/// through the close-return zoom before the final whole-enclosure
/// certification pass.
pub fn solve_parameter(d: u32, target_prefix_len: u64, precision_bits: u32) -> Result<TentSystem> {
    let comb = Arc::new(Combinatorics::new(d)?);
    solve_with_combinatorics(comb, target_prefix_len, precision_bits)
}

pub fn solve_with_combinatorics(
    comb: Arc<Combinatorics>,
    target_prefix_len: u64,
    precision_bits: u32,
) -> Result<TentSystem> {
    let d = comb.d();
    let target = target_prefix_len;
    if target < 2 {
        return Err(Error::Precondition(
            "prefix length must be at least 2".into(),
        ));
    }
    let cert_prec = required_precision(d, target).max(precision_bits);
    let max_cmp_prec = cert_prec + 128;

    let enclosure = if target <= ZOOM_THRESHOLD {
        let witness = bisect_to_witness(&comb, target, max_cmp_prec)?;
        // radius: inside the prefix window and within the requested width
        let mut r_bits = (target + 48).max(precision_bits as u64) as i64;
        let mut found = None;
        for _ in 0..6 {
            let r = BigReal::from_parts(1, -r_bits);
            let enc = RInterval::new(
                witness.sub(&r, u32::MAX, Round::Down),
                witness.add(&r, u32::MAX, Round::Up),
            );
            match certify_prefix(&comb, &enc, target, cert_prec) {
                Ok(()) => {
                    found = Some(enc);
                    break;
                }
                Err(Error::PrecisionExhausted { .. }) => r_bits += 64,
                Err(e) => return Err(e),
            }
        }
        found.ok_or_else(|| {
            Error::precision(
                "solve_parameter",
                format!("prefix certification failed around the witness (d={d})"),
            )
        })?
    } else {
        // long prefixes: theta-bracket, then close-return zoom down to a
        // width that the whole-enclosure certification pass accepts
        let (lo, hi) = theta_bracket(&comb, 64, max_cmp_prec)?;
        let base = RInterval::new(lo, hi);
        let mut level = d as u64 + 2;
        while comb.s(level)? < target + 64 {
            level += 1;
        }
        let width_bits = (target + 128) as u32;
        let sb = chain::zoom(&comb, &base, level as u32, width_bits)?;
        certify_prefix(&comb, &sb.bracket, target, cert_prec)?;
        sb.bracket
    };

    Ok(TentSystem {
        d,
        a: enclosure,
        solved_prefix_len: target,
        precision_bits: cert_prec,
        comb,
    })
}

/// Bisect until a point matching the whole prefix (a window interior
/// witness) is found.
fn bisect_to_witness(comb: &Combinatorics, target: u64, max_prec: u32) -> Result<BigReal> {
    let (mut lo, mut hi) = theta_bracket(comb, 64, max_prec)?;
    let max_steps = 4 * target + 256;
    for step in 0..max_steps {
        let mut mid = lo
            .add(&hi, u32::MAX, Round::Nearest)
            .mul_pow2(-1)
            .round(step as u32 + 24, Round::Nearest);
        for attempt in 0..4 {
            if lo.cmp(&mid) != std::cmp::Ordering::Less || mid.cmp(&hi) != std::cmp::Ordering::Less
            {
                mid = lo.add(&hi, u32::MAX, Round::Nearest).mul_pow2(-1);
            }
            match compare_point(comb, &mid, target + 8, max_prec)? {
                PtOrder::Below => {
                    lo = mid;
                    break;
                }
                PtOrder::Above => {
                    hi = mid;
                    break;
                }
                PtOrder::AgreesTo(_) => return Ok(mid),
                PtOrder::Undecided(_) => {
                    mid = nudge(&mid, mid.mag2() - 40 - attempt as i64);
                    if attempt == 3 {
                        return Err(Error::precision(
                            "solve_parameter",
                            "bisection candidate undecidable after nudges",
                        ));
                    }
                }
            }
        }
    }
    Err(Error::precision(
        "solve_parameter",
        format!("no window witness found for prefix {target}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kneading;

    #[test]
    fn tent_apply_examples() {
        let prec = 96;
        let two = RInterval::from_i64(2);
        // T_2(0) = 1
        let y = tent_apply(&two, &RInterval::zero(), prec);
        assert!(y.contains(&BigReal::one()));
        assert!(y.width().is_zero() || y.width().mag2() < -80);
        // T_2(1) = -1
        let y = tent_apply(&two, &RInterval::from_i64(1), prec);
        assert!(y.contains(&BigReal::from_i64(-1)));
    }

    #[test]
    fn tent_apply_straddling_zero() {
        let prec = 96;
        let a = RInterval::from_i64(2);
        let x = RInterval::new(BigReal::from_parts(-1, -4), BigReal::from_parts(1, -3));
        let y = tent_apply(&a, &x, prec);
        // covers both branch images: T(-1/16) = 7/8, T(1/8) = 3/4
        assert!(y.contains(&BigReal::from_parts(7, -3)));
        assert!(y.contains(&BigReal::from_parts(3, -2)));
        assert!(y.contains(&BigReal::from_i64(1))); // image of 0
    }

    #[test]
    fn required_precision_values() {
        assert_eq!(required_precision(2, 100), 164);
        assert_eq!(required_precision(2, 1), 65);
        assert_eq!(required_precision(5, 1000), 1064);
    }

    #[test]
    fn solve_d2_short_prefix() {
        let sys = solve_parameter(2, 2, 64).unwrap();
        // any slope in (1,2] with c_2 < c < c_1 works for prefix 10
        let its = sys.itinerary(2).unwrap();
        assert_eq!(its, vec![1, 0]);
    }

    #[test]
    fn solve_d2_reproduces_k2() {
        let sys = solve_parameter(2, 21, 128).unwrap();
        let its: String = sys
            .itinerary(21)
            .unwrap()
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect();
        assert_eq!(its, "100111011001010011100");
        // oracle: f64 bisection on the same twisted order
        let oracle = f64_slope_oracle(2, 40);
        let mid = sys.slope().to_f64();
        assert!((mid - oracle).abs() < 1e-9, "mid={mid} oracle={oracle}");
    }

    #[test]
    fn solve_d3_reproduces_k3() {
        let sys = solve_parameter(3, 21, 128).unwrap();
        let its: String = sys
            .itinerary(21)
            .unwrap()
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect();
        assert_eq!(its, "100011101100110001010");
        let oracle = f64_slope_oracle(3, 40);
        assert!((sys.slope().to_f64() - oracle).abs() < 1e-9);
    }

    #[test]
    fn orbit_sign_pattern_d2() {
        let sys = solve_parameter(2, 8, 96).unwrap();
        let orb = sys.critical_orbit(7).unwrap();
        // f^2(c) < c < f(c)
        assert_eq!(orb[0].sign(), SignClass::Pos);
        assert_eq!(orb[1].sign(), SignClass::Neg);
        let its = sys.itinerary(7).unwrap();
        assert_eq!(its, vec![1, 0, 0, 1, 1, 1, 0]);
    }

    #[test]
    fn orbit_prefix_d3() {
        let sys = solve_parameter(3, 8, 96).unwrap();
        let its = sys.itinerary(4).unwrap();
        assert_eq!(its, vec![1, 0, 0, 0]);
    }

    #[test]
    fn hofbauer_detects_cutting_times() {
        for d in [2u32, 3] {
            let comb = Combinatorics::new(d).unwrap();
            let n_max = comb.s(8).unwrap();
            let sys = solve_parameter(d, n_max + 4, (n_max + 96) as u32).unwrap();
            let cuts = sys.hofbauer_cutting_times(n_max).unwrap();
            let expected: Vec<u64> = (0..=8).map(|k| comb.s(k).unwrap()).collect();
            assert_eq!(cuts, expected, "d={d}");
        }
    }

    #[test]
    fn hofbauer_h1_and_membership_d3() {
        let sys = solve_parameter(3, 12, 96).unwrap();
        // 0 in H_4 (S_3(3)=4), 0 not in H_5
        let cuts = sys.hofbauer_cutting_times(5).unwrap();
        assert!(cuts.contains(&4));
        assert!(!cuts.contains(&5));
        let h1 = sys.hofbauer_interval(1).unwrap();
        assert_eq!(h1.left().lo().signum(), 0); // H_1 = [c, c_1], c = 0
    }

    #[test]
    fn widening_precision_preserves_symbols() {
        let a = solve_parameter(2, 30, 128).unwrap();
        let b = solve_parameter(2, 30, 512).unwrap();
        assert_eq!(a.itinerary(30).unwrap(), b.itinerary(30).unwrap());
        assert_eq!(
            a.hofbauer_cutting_times(21).unwrap(),
            b.hofbauer_cutting_times(21).unwrap()
        );
    }

    #[test]
    fn orbit_enclosures_nested_under_tent_apply() {
        let sys = solve_parameter(2, 40, 160).unwrap();
        let orb = sys.critical_orbit(30).unwrap();
        for n in 0..29 {
            let img = tent_apply(sys.slope(), &orb[n], sys.precision_bits());
            assert!(
                img.contains_interval(&orb[n + 1]),
                "semigroup enclosure failed at step {n}"
            );
        }
    }

    /// Plain f64 bisection against the kneading order; independent of the
    /// certified path (no interval arithmetic, no shared code).
    fn f64_slope_oracle(d: u32, depth: usize) -> f64 {
        let kd: Vec<u8> = kneading::kneading_sequence(d, depth as u64)
            .unwrap()
            .bytes()
            .map(|b| b - b'0')
            .collect();
        let cmp = |a: f64| -> std::cmp::Ordering {
            let mut x = 0.0f64;
            let mut ones = 0u32;
            for &want in kd.iter() {
                x = a * (1.0 - x.abs()) - 1.0;
                let sym = if x > 0.0 { 1u8 } else { 0u8 };
                if sym != want {
                    let plain = sym.cmp(&want);
                    return if ones % 2 == 0 { plain } else { plain.reverse() };
                }
                if want == 1 {
                    ones += 1;
                }
            }
            std::cmp::Ordering::Equal
        };
        let (mut lo, mut hi) = (1.01f64, 2.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            match cmp(mid) {
                std::cmp::Ordering::Less => lo = mid,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return mid,
            }
        }
        0.5 * (lo + hi)
    }
}
