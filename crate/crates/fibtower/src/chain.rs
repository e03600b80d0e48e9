//! Close-return values of the critical orbit and the certified slope zoom.
//!
//! Between consecutive cutting times the kneading sequence repeats its own
//! prefix (the block substitution rule), so on that stretch the tent map
//! composes to a single affine map. Writing `ξ_k = c_{S_d(k)}`, this gives
//! the exact recurrence
//!
//! ```text
//! ξ_{k+1} = ξ_{Q(k+1)} + s_k * a^{S(Q(k+1))} * ξ_k
//! ```
//!
//! with a combinatorially determined sign `s_k` (the parity of the 1s seen
//! along the block). Close-return values at astronomically large orbit
//! indices therefore cost a handful of big multiplications instead of
//! millions of iterates, and the same recurrence differentiates in `a`.
//!
//! `zoom` uses these values as a family of polynomials `Ψ_k(a)` to pin the
//! Fibonacci-like slope: given a bracket that contains `a_d` and the fact
//! that `sign(Ψ_k(a_d))` is the kneading symbol at `S_d(k)`, a certified
//! monotonicity check of `Ψ_k` on the bracket turns every sign evaluation
//! into a rigorous bracket refinement. Nothing about itineraries of other
//! parameters in the bracket is ever assumed.

use crate::error::{Error, Result};
use crate::kneading::Combinatorics;
use crate::real::{BigReal, RInterval, Round, SignClass};

/// Mantissa kept for retained chain values.
const RETAIN_BITS: u32 = 8192;

fn certified_sign(x: &RInterval) -> Option<i8> {
    match x.sign() {
        SignClass::Pos => Some(1),
        SignClass::Neg => Some(-1),
        SignClass::Undecided => None,
    }
}

/// Recurrence and target signs derived from the kneading sequence.
pub(crate) struct SignData {
    /// s_k in the recurrence, valid for k >= 1
    rec: Vec<i8>,
    /// sign of c_{S(k)}: +1 iff ε_{S(k)} = 1
    target: Vec<i8>,
}

impl SignData {
    pub fn new(comb: &Combinatorics, k_max: u32) -> Result<SignData> {
        let mut rec = vec![0i8; k_max as usize + 1];
        let mut target = vec![0i8; k_max as usize + 1];
        target[0] = 1; // c_{S(0)} = c_1 > 0
        for k in 1..=k_max as u64 {
            target[k as usize] = if comb.symbol_at_cutting_time(k) == 1 {
                1
            } else {
                -1
            };
        }
        for k in 1..k_max as u64 {
            // s_k = (-1)^(ε_{S(k)} + parity of 1s in ε_1..ε_{S(Q(k+1))-1})
            let e = comb.symbol_at_cutting_time(k);
            let sq = comb.s(comb.kneading_map(k + 1))?;
            let p = comb.ones_parity(sq - 1)?;
            rec[k as usize] = if (e + p) % 2 == 0 { 1 } else { -1 };
        }
        Ok(SignData { rec, target })
    }

    fn target(&self, k: u32) -> i8 {
        self.target[k as usize]
    }
}

pub(crate) struct LevelEval {
    pub xi: RInterval,
    pub dxi: Option<RInterval>,
}

/// Per-step working precision. The error introduced at chain step j
/// (which computes ξ_{j+1}) is amplified by the product of the later
/// step factors a^{S(Q(i+1))}, which telescopes to a^(S(K)-S(j+1)) by
/// the cutting-time sum identity: the earlier the step, the larger the
/// amplification, so early steps carry the full mantissa and later steps
/// shed exactly the bits their smaller amplification no longer needs.
/// `total` is the uniform-equivalent precision requested by the caller.
struct Grading {
    b_hi: f64,
    total: u32,
}

impl Grading {
    fn new(_comb: &Combinatorics, a: &RInterval, _level: u32, total: u32) -> Result<Grading> {
        Ok(Grading {
            b_hi: a.hi().log2_approx() + 1e-6,
            total,
        })
    }

    fn at(&self, s_next: u64) -> u32 {
        let drop = ((s_next.saturating_sub(2)) as f64 * self.b_hi).ceil() as u32;
        self.total.saturating_sub(drop).max(192) + 64
    }
}

/// Evaluate `ξ_level` (and optionally its a-derivative, at precision
/// `deriv_prec`) at the slope enclosure `a` through the close-return
/// recurrence. The power chains run at full precision (their relative
/// errors are inherited by every later chain entry); the recurrence steps
/// are graded. Entries behind the sliding window are dropped to keep
/// memory flat.
pub(crate) fn eval_level(
    comb: &Combinatorics,
    signs: &SignData,
    a: &RInterval,
    level: u32,
    prec: u32,
    deriv_prec: Option<u32>,
) -> Result<LevelEval> {
    let d = comb.d() as usize;
    let one = RInterval::from_i64(1);
    let two = RInterval::from_i64(2);
    let grading = Grading::new(comb, a, level, prec)?;
    // the derivative chain's values grow like a^{S(j)}, so its rounding
    // is plain relative precision, not graded
    let p0 = grading.at(comb.s(1)?);

    // seeds: ξ_0 = a - 1, ξ_1 = a(2-a) - 1
    let xi0 = a.sub(&one, p0);
    let t = two.sub(a, p0);
    let xi1 = a.mul(&t, p0).sub(&one, p0);
    let dxi0 = one.clone();
    let dxi1 = two.sub(&a.mul_i64(2, p0), p0);

    if level == 0 {
        return Ok(LevelEval {
            xi: xi0,
            dxi: deriv_prec.map(|_| dxi0),
        });
    }
    if level == 1 {
        return Ok(LevelEval {
            xi: xi1,
            dxi: deriv_prec.map(|_| dxi1),
        });
    }

    let placeholder = RInterval::zero;
    let mut xi: Vec<RInterval> = vec![xi0, xi1];
    let mut dxi: Vec<RInterval> = vec![dxi0, dxi1];
    // pow[j] = a^{S(j)}, pow_m1[j] = a^{S(j)-1}
    let mut pow: Vec<RInterval> = vec![a.clone()];
    let mut pow_m1: Vec<RInterval> = vec![one.clone()];

    for k in 1..level as usize {
        let q = (k + 1).saturating_sub(d);
        let step_prec = grading.at(comb.s(k as u64 + 1)?);
        while pow.len() <= q {
            let j = pow.len();
            // a^{S(j)} is first consumed at the step computing ξ_{j+d};
            // later consumers sit at higher levels and need fewer bits
            let s_use = comb.s((j + d).min(level as usize) as u64)?;
            // the derivative recurrence consumes pow at its own relative
            // precision, so lift the mantissa when a derivative is kept
            let pw = grading.at(s_use).max(deriv_prec.unwrap_or(0));
            let p = if j <= d {
                pow[j - 1].mul(a, pw)
            } else {
                pow[j - 1].mul(&pow[j - d], pw)
            };
            if let Some(dp) = deriv_prec {
                let dpw = pw.max(dp);
                let pm1 = if j <= d {
                    pow_m1[j - 1].mul(a, dpw)
                } else {
                    pow[j - 1].mul(&pow_m1[j - d], dpw)
                };
                pow_m1.push(pm1);
            } else {
                pow_m1.push(placeholder());
            }
            pow.push(p);
            if j > d {
                pow[j - d - 1] = placeholder();
                pow_m1[j - d - 1] = placeholder();
            }
        }
        let s = signs.rec[k];
        let t = pow[q].mul(&xi[k], step_prec);
        let next = if s > 0 {
            xi[q].add(&t, step_prec)
        } else {
            xi[q].sub(&t, step_prec)
        };
        xi.push(next);
        if let Some(dp) = deriv_prec {
            let sq = comb.s(q as u64)? as i64;
            let dt = pow_m1[q]
                .mul(&xi[k], dp)
                .mul_i64(sq, dp)
                .add(&pow[q].mul(&dxi[k], dp), dp);
            let dnext = if s > 0 {
                dxi[q].add(&dt, dp)
            } else {
                dxi[q].sub(&dt, dp)
            };
            dxi.push(dnext);
        } else {
            dxi.push(placeholder());
        }
        // entries below the next window start are never read again
        if q >= 1 {
            xi[q - 1] = placeholder();
            dxi[q - 1] = placeholder();
        }
    }

    Ok(LevelEval {
        xi: xi[level as usize].clone(),
        dxi: deriv_prec.map(|_| dxi[level as usize].clone()),
    })
}

/// The full chain of close-return data on a slope enclosure, retained at
/// reporting precision: ξ_k = c_{S(k)}, the powers a^{S(j)} and
/// a^{S(j)-1}, and how far the ξ signs are certified.
pub struct ReturnChain {
    d: u32,
    level: u32,
    a: RInterval,
    xi: Vec<RInterval>,
    pow_s: Vec<RInterval>,
    pow_s_m1: Vec<RInterval>,
    sign_certified_to: u32,
}

impl ReturnChain {
    /// Build the chain to `level` at working precision `prec`. Signs of
    /// the ξ_k are checked against the kneading symbols: a certifiably
    /// wrong sign is a certificate failure, an undecidable one truncates
    /// `sign_certified_to`.
    pub fn build(
        comb: &Combinatorics,
        a: &RInterval,
        level: u32,
        prec: u32,
    ) -> Result<ReturnChain> {
        let d = comb.d() as usize;
        let signs = SignData::new(comb, level + 1)?;
        let one = RInterval::from_i64(1);
        let two = RInterval::from_i64(2);

        let xi0 = a.sub(&one, prec);
        let t = two.sub(a, prec);
        let xi1 = a.mul(&t, prec).sub(&one, prec);

        let mut xi_full: Vec<RInterval> = vec![xi0, xi1];
        let mut pow_full: Vec<RInterval> = vec![a.clone()];
        let mut pow_m1_full: Vec<RInterval> = vec![one.clone()];

        let grading = Grading::new(comb, a, level, prec)?;
        for j in 1..=level as usize {
            let pw = grading.at(comb.s((j + d).min(level as usize) as u64)?);
            let (p, pm1) = if j <= d {
                (
                    pow_full[j - 1].mul(a, pw),
                    pow_m1_full[j - 1].mul(a, pw),
                )
            } else {
                (
                    pow_full[j - 1].mul(&pow_full[j - d], pw),
                    pow_full[j - 1].mul(&pow_m1_full[j - d], pw),
                )
            };
            pow_full.push(p);
            pow_m1_full.push(pm1);
        }
        for k in 1..level as usize {
            let q = (k + 1).saturating_sub(d);
            let step_prec = grading.at(comb.s(k as u64 + 1)?);
            let t = pow_full[q].mul(&xi_full[k], step_prec);
            let next = if signs.rec[k] > 0 {
                xi_full[q].add(&t, step_prec)
            } else {
                xi_full[q].sub(&t, step_prec)
            };
            xi_full.push(next);
        }

        let mut sign_certified_to = level;
        for k in 0..=level {
            match certified_sign(&xi_full[k as usize]) {
                Some(s) if s == signs.target(k) => {}
                Some(_) => {
                    return Err(Error::Certificate(format!(
                        "close-return value ξ_{k} has certified sign contradicting ε at S({k})"
                    )))
                }
                None => {
                    sign_certified_to = sign_certified_to.min(k.saturating_sub(1));
                }
            }
        }

        Ok(ReturnChain {
            d: comb.d(),
            level,
            a: a.trim(RETAIN_BITS),
            xi: xi_full.into_iter().map(|x| x.trim(RETAIN_BITS)).collect(),
            pow_s: pow_full.into_iter().map(|x| x.trim(RETAIN_BITS)).collect(),
            pow_s_m1: pow_m1_full
                .into_iter()
                .map(|x| x.trim(RETAIN_BITS))
                .collect(),
            sign_certified_to,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn slope(&self) -> &RInterval {
        &self.a
    }

    /// Enclosure of c_{S(k)}.
    pub fn xi(&self, k: u32) -> &RInterval {
        &self.xi[k as usize]
    }

    /// Enclosure of a^{S(j)}.
    pub fn pow_s(&self, j: u32) -> &RInterval {
        &self.pow_s[j as usize]
    }

    /// Enclosure of a^{S(j)-1}.
    pub fn pow_s_minus1(&self, j: u32) -> &RInterval {
        &self.pow_s_m1[j as usize]
    }

    /// All ξ_k signs certified against the kneading symbols for k up to
    /// this level.
    pub fn sign_certified_to(&self) -> u32 {
        self.sign_certified_to
    }

    /// |D_k| = |c_{S(k)} - c| as an enclosure.
    pub fn d_len(&self, k: u32) -> RInterval {
        self.xi(k).abs()
    }
}

/// A rigorously refined slope bracket containing a_d.
#[derive(Debug, Clone)]
pub struct SlopeBracket {
    pub d: u32,
    pub bracket: RInterval,
    pub level: u32,
}

struct Zoom<'a> {
    comb: &'a Combinatorics,
    signs: SignData,
    b_hi: f64,
}

/// Rigorous first-order model of Ψ_level around a point: the slope field
/// encloses Ψ' over a segment containing both the point and every queried
/// argument, so `val + slope*(x - x0)` encloses Ψ(x) by the mean value
/// theorem. Lets one expensive evaluation serve every nearby sign query.
struct LinModel {
    x0: BigReal,
    val: RInterval,
    slope: RInterval,
    prec: u32,
}

impl LinModel {
    fn eval(&self, x: &BigReal) -> RInterval {
        let dx = RInterval::point(x.sub(&self.x0, u32::MAX, Round::Nearest));
        self.val.add(&self.slope.mul(&dx, self.prec), self.prec)
    }

    fn sign_at(&self, x: &BigReal) -> Option<i8> {
        certified_sign(&self.eval(x))
    }
}

impl Zoom<'_> {
    fn s(&self, k: u32) -> Result<u64> {
        self.comb.s(k as u64)
    }

    fn bits(&self, steps: u64) -> u32 {
        (steps as f64 * self.b_hi).ceil() as u32
    }

    fn eval(
        &self,
        x: &BigReal,
        level: u32,
        prec: u32,
        deriv_prec: Option<u32>,
    ) -> Result<LevelEval> {
        eval_level(
            self.comb,
            &self.signs,
            &RInterval::point(x.clone()),
            level,
            prec,
            deriv_prec,
        )
    }

    /// Enclosure of Ψ'_level over the whole segment [u, v].
    fn deriv_over(&self, u: &BigReal, v: &BigReal, level: u32, prec: u32) -> Result<RInterval> {
        let enc = RInterval::new(u.clone(), v.clone());
        let ev = eval_level(self.comb, &self.signs, &enc, level, prec, Some(prec))?;
        Ok(ev.dxi.expect("derivative requested"))
    }
}

/// Refine a theta-order bracket around a_d down to a certified width of
/// at most roughly `2^-final_width_bits`.
///
/// The search itself is an uncertified Newton ladder: it climbs accuracy
/// through the close-return levels (the excess over each level's
/// curvature scale carries over, so the whole climb is one geometric
/// escalation). Every conclusion about the bracket is then certified at
/// the target level alone, from three inputs only: (i) a_d lies in the
/// input bracket, (ii) the sign of c_{S(k)}(a_d) is the kneading symbol
/// at S(k) and the distances |c_{S(k)}(a_d)| strictly decrease in k, and
/// (iii) outward interval arithmetic, including the certified
/// sign-definiteness of Ψ'_k over the bracket.
pub fn zoom(
    comb: &Combinatorics,
    base: &RInterval,
    target_level: u32,
    final_width_bits: u32,
) -> Result<SlopeBracket> {
    let d = comb.d();
    let hard_cap = target_level + d + 2;
    let z = Zoom {
        comb,
        signs: SignData::new(comb, hard_cap + d + 4)?,
        b_hi: base.hi().log2_approx() + 1e-6,
    };
    let trace = std::env::var_os("FIBTOWER_ZOOM_TRACE").is_some();

    let u = base.lo().clone();
    let v = base.hi().clone();
    let eps_bits = final_width_bits as i64 + 16;

    // uncertified Newton ladder toward the deep close-return roots
    let width = v.sub(&u, 64, Round::Up);
    let base_acc = if width.is_zero() { 64 } else { -width.mag2() - 2 };
    let mut m = u
        .add(&v, u32::MAX, Round::Nearest)
        .mul_pow2(-1)
        .round(256, Round::Nearest);
    let mut acc = base_acc.max(16);
    let mut stall = 0u32;
    for _ in 0..160 {
        if acc >= eps_bits + 8 {
            break;
        }
        // shallowest level whose root is certainly closer to a_d than the
        // accuracy this step aims for: |ρ_k - a_d| ~ a^-(S(k)+S(k+1))
        let mut lvl = d + 1;
        while lvl < target_level
            && ((z.bits(z.s(lvl)?) + z.bits(z.s(lvl + 1)?)) as i64) < 2 * acc + 64
        {
            lvl += 1;
        }
        let vprec = ((2 * acc).min(eps_bits + 64) + 512) as u32;
        let dprec = (acc + 384) as u32;
        let ev = z.eval(&m, lvl, vprec, Some(dprec))?;
        let val = ev.xi;
        let der = ev.dxi.expect("derivative requested");
        if der.mid().is_zero() {
            return Err(Error::precision(
                "zoom",
                format!("flat derivative in the ladder at level {lvl}"),
            ));
        }
        let delta = val.mid().div(&der.mid(), vprec, Round::Nearest)?;
        let dmag = if delta.is_zero() {
            -(eps_bits + 64)
        } else {
            delta.mag2()
        };
        if trace {
            let vw = val.width();
            let dw = der.width();
            eprintln!(
                "  ladder lvl={lvl} acc={acc} vprec={vprec} dmag={dmag} val_mag={} vw={} dw={}",
                if val.mag_hi().is_zero() { 0 } else { val.mag_hi().mag2() },
                if vw.is_zero() { 0 } else { vw.mag2() },
                if dw.is_zero() { 0 } else { dw.mag2() },
            );
        }
        let next = m
            .sub(&delta, u32::MAX, Round::Nearest)
            .round((eps_bits + 96).max(256) as u32, Round::Nearest);
        if next.cmp(&u) == std::cmp::Ordering::Greater && next.cmp(&v) == std::cmp::Ordering::Less
        {
            m = next;
        } else {
            // ladder escaped the certified bracket: restart from scratch
            m = u
                .add(&v, u32::MAX, Round::Nearest)
                .mul_pow2(-1)
                .round(256, Round::Nearest);
            acc = base_acc.max(16);
            stall += 1;
            if stall > 2 {
                return Err(Error::precision("zoom", "Newton ladder left the bracket"));
            }
            continue;
        }
        let acc_new = (-dmag).max(acc);
        if acc_new < acc + 8 {
            stall += 1;
            if stall > 4 {
                return Err(Error::precision(
                    "zoom",
                    format!("Newton ladder stalled near accuracy 2^-{acc}"),
                ));
            }
        } else {
            stall = 0;
        }
        acc = acc_new.max(acc + 1);
    }
    if acc < eps_bits + 8 {
        return Err(Error::precision(
            "zoom",
            format!("Newton ladder did not reach 2^-{eps_bits} accuracy"),
        ));
    }

    // certification at the target level (and, if edges fail there, at the
    // next few levels; the ladder point approximates all their roots)
    let bracket = RInterval::new(u.clone(), v.clone());
    let mut last_err: Option<Error> = None;
    for k in target_level..=hard_cap {
        match certify_at_level(&z, &bracket, &m, k, eps_bits, final_width_bits, trace) {
            Ok(Some(out)) => {
                return Ok(SlopeBracket {
                    d,
                    bracket: out,
                    level: k,
                });
            }
            Ok(None) => continue,
            Err(e) => {
                last_err = Some(e);
                break;
            }
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::precision(
            "zoom",
            format!("requested width 2^-{final_width_bits} not certified by level {hard_cap}"),
        )
    }))
}

/// Certified refinement at one level: monotonicity of Ψ_k over the
/// bracket, sign edges around the ladder point, the bracket trim, and the
/// close-return pinch of the stale side.
fn certify_at_level(
    z: &Zoom<'_>,
    bracket: &RInterval,
    m: &BigReal,
    k: u32,
    eps_bits: i64,
    final_width_bits: u32,
    trace: bool,
) -> Result<Option<RInterval>> {
    let (mut u, mut v) = (bracket.lo().clone(), bracket.hi().clone());
    let tsgn = z.signs.target(k);

    // derivative sign over the bracket: cheap (short mantissas suffice,
    // the genuine variation dominates every rounding)
    let d_enc = z.deriv_over(&u, &v, k, 512)?;
    let dirn = certified_sign(&d_enc).ok_or_else(|| {
        Error::precision(
            "zoom",
            format!("monotonicity of Ψ_{k} undecided over the bracket"),
        )
    })?;

    // one certified evaluation at the ladder point
    let vprec = (eps_bits + 1024) as u32;
    let val = z.eval(m, k, vprec, None)?.xi;
    let model_k = LinModel {
        x0: m.clone(),
        val,
        slope: d_enc.clone(),
        prec: vprec,
    };

    // certified-sign edges around the root
    let mut edges = None;
    let mut eb = eps_bits;
    for _ in 0..5 {
        let eps = BigReal::from_parts(1, -eb);
        let w_lo = m.sub(&eps, u32::MAX, Round::Down);
        let w_hi = m.add(&eps, u32::MAX, Round::Up);
        if w_lo.cmp(&u) != std::cmp::Ordering::Greater
            || w_hi.cmp(&v) != std::cmp::Ordering::Less
        {
            break;
        }
        match (model_k.sign_at(&w_lo), model_k.sign_at(&w_hi)) {
            (Some(a), Some(b)) if a != b => {
                edges = Some((w_lo, a, w_hi, b));
                break;
            }
            _ => eb -= 16,
        }
    }
    let Some((w_lo, s_lo, w_hi, s_hi)) = edges else {
        if trace {
            eprintln!("zoom level {k}: no sign change at the ladder point");
        }
        return Ok(None);
    };
    if s_lo != -dirn || s_hi != dirn {
        return Err(Error::Certificate(format!(
            "edge sign pattern at level {k} contradicts monotonicity"
        )));
    }
    // a_d lies on the side of the root carrying the sign of c at S(k);
    // the opposite eps-edge replaces the other endpoint
    if tsgn == dirn {
        u = w_lo;
    } else {
        v = w_hi;
    }

    let out = squeeze(z, &u, &v, &model_k, k, eb, final_width_bits)?;
    if trace {
        eprintln!("zoom level {k}: squeeze -> {}", out.is_some());
    }
    Ok(out)
}



/// Pinch the stale side of the bracket with the close-return inequality:
/// at the true parameter |c_{S(k+1)}| < |c_{S(k)}|, so any subinterval on
/// which |Ψ_{k+1}| > |Ψ_k| holds uniformly cannot contain a_d. Away from
/// the root cluster the modulus ratio grows like a^{S(Q(k+1))}, so each
/// pinch multiplies the resolvable depth by that factor.
fn squeeze(
    z: &Zoom<'_>,
    u: &BigReal,
    v: &BigReal,
    model_k: &LinModel,
    k: u32,
    eps_bits: i64,
    final_width_bits: u32,
) -> Result<Option<RInterval>> {
    let mut u = u.clone();
    let mut v = v.clone();
    let m = &model_k.x0;
    let gold_is_u = {
        let du = m.sub(&u, 64, Round::Up).abs();
        let dv = v.sub(m, 64, Round::Up).abs();
        du.cmp(&dv) == std::cmp::Ordering::Greater
    };
    let b_lo = (z.b_hi - 2e-6).max(1e-9);
    let gain = ((z.s(k + 1)? - z.s(k)?) as f64 * b_lo) as i64 - 64;
    if gain <= 0 {
        return Ok(None);
    }

    // one model of Ψ_{k+1} around m serves every pinch depth
    let h = k + 1;
    let d_h = z.deriv_over(&u, &v, h, 512)?;
    if certified_sign(&d_h).is_none() {
        return Ok(None);
    }
    let prec_h = (eps_bits + 1024) as u32;
    let v_h = z.eval(m, h, prec_h, None)?.xi;
    let model_h = LinModel {
        x0: m.clone(),
        val: v_h,
        slope: d_h,
        prec: prec_h,
    };

    for _ in 0..96 {
        let width = v.sub(&u, 64, Round::Up);
        if width.is_zero() || width.mag2() <= -(final_width_bits as i64) {
            return Ok(Some(RInterval::new(u, v)));
        }
        let stale_bits = -width.mag2();
        let want_bits = (stale_bits + gain).min(eps_bits);
        let eps = BigReal::from_parts(1, -want_bits);
        let w_g = if gold_is_u {
            m.sub(&eps, u32::MAX, Round::Down)
        } else {
            m.add(&eps, u32::MAX, Round::Up)
        };
        let inside = if gold_is_u {
            w_g.cmp(&u) == std::cmp::Ordering::Greater && w_g.cmp(&v) == std::cmp::Ordering::Less
        } else {
            w_g.cmp(&v) == std::cmp::Ordering::Less && w_g.cmp(&u) == std::cmp::Ordering::Greater
        };
        if !inside {
            return Ok(Some(RInterval::new(u, v)));
        }
        let (seg_lo, seg_hi) = if gold_is_u {
            (u.clone(), w_g.clone())
        } else {
            (w_g.clone(), v.clone())
        };
        if !pinch_excludes(model_k, &model_h, &seg_lo, &seg_hi)? {
            // gap not decisive at this level pair
            return Ok(None);
        }
        if gold_is_u {
            u = w_g;
        } else {
            v = w_g;
        }
    }
    Ok(None)
}

/// Certify `|Ψ_{k+1}| > |Ψ_k|` uniformly on `[lo, hi]` from the two
/// mean-value models: their slope enclosures cover the segment, so both
/// Ψ are monotone there and the extrema sit at the endpoints. Ψ_{k+1}
/// must in addition be sign-definite on the segment, otherwise its
/// minimum modulus is zero.
fn pinch_excludes(
    model_k: &LinModel,
    model_h: &LinModel,
    lo: &BigReal,
    hi: &BigReal,
) -> Result<bool> {
    let b_lo = model_k.eval(lo);
    let b_hi = model_k.eval(hi);
    let h_lo = model_h.eval(lo);
    let h_hi = model_h.eval(hi);
    match (certified_sign(&h_lo), certified_sign(&h_hi)) {
        (Some(a), Some(b)) if a == b => {}
        _ => return Ok(false),
    }
    let max_base = b_lo.abs().hull(&b_hi.abs());
    let min_high = h_lo.abs().hull(&h_hi.abs());
    Ok(max_base.hi().cmp(min_high.lo()) == std::cmp::Ordering::Less)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::tent;

    #[test]
    fn chain_matches_direct_orbit() {
        let sys = tent::solve_parameter(2, 80, 256).unwrap();
        let comb = sys.combinatorics();
        let orbit = sys.critical_orbit(comb.s(8).unwrap()).unwrap();
        let chain = ReturnChain::build(comb, sys.slope(), 8, 512).unwrap();
        for k in 0..=8u32 {
            let s = comb.s(k as u64).unwrap();
            let direct = &orbit[(s - 1) as usize];
            assert!(
                chain.xi(k).overlaps(direct),
                "k={k}: chain {:?} vs orbit {:?}",
                chain.xi(k),
                direct
            );
        }
        assert!(chain.sign_certified_to() >= 8);
    }

    #[test]
    fn chain_matches_direct_orbit_d3() {
        let sys = tent::solve_parameter(3, 80, 256).unwrap();
        let comb = sys.combinatorics();
        let orbit = sys.critical_orbit(comb.s(9).unwrap()).unwrap();
        let chain = ReturnChain::build(comb, sys.slope(), 9, 512).unwrap();
        for k in 0..=9u32 {
            let s = comb.s(k as u64).unwrap();
            assert!(chain.xi(k).overlaps(&orbit[(s - 1) as usize]), "k={k}");
        }
    }

    #[test]
    fn zoom_narrows_bracket() {
        let comb = Combinatorics::new(2).unwrap();
        let (lo, hi) = tent::theta_bracket(&comb, 64, 4096).unwrap();
        let base = RInterval::new(lo, hi);
        // certifying sign(ξ_k) needs width below a^-(S(k)+S(k+1)); for
        // k = 11 with d = 2 that is about 2^-482
        let sb = zoom(&comb, &base, 12, 600).unwrap();
        assert!(base.contains_interval(&sb.bracket));
        let w = sb.bracket.width();
        assert!(w.is_zero() || w.mag2() <= -600, "width {:?}", w);
        let chain = ReturnChain::build(&comb, &sb.bracket, 12, 1400).unwrap();
        assert!(chain.sign_certified_to() >= 11);
        for k in 0..11u32 {
            assert!(
                chain.d_len(k + 1).certainly_lt(&chain.d_len(k)),
                "close-return distances must decrease at k={k}"
            );
        }
    }

    #[test]
    fn zoom_d4() {
        let comb = Combinatorics::new(4).unwrap();
        let (lo, hi) = tent::theta_bracket(&comb, 64, 4096).unwrap();
        let base = RInterval::new(lo, hi);
        let sb = zoom(&comb, &base, 10, 300).unwrap();
        let w = sb.bracket.width();
        assert!(w.is_zero() || w.mag2() <= -300);
        let chain = ReturnChain::build(&comb, &sb.bracket, 10, 800).unwrap();
        // S_4(8)+S_4(9) = 19+26 bits of a are pinned many times over
        assert!(chain.sign_certified_to() >= 8);
    }
}
