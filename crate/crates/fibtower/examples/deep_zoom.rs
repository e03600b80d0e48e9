// scratch probe for deep zoom cost (d=2, dimension series scale)
use fibtower::chain;
use fibtower::kneading::Combinatorics;
use fibtower::real::RInterval;
use std::time::Instant;

fn main() {
    let kmax: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let comb = Combinatorics::new(2).unwrap();
    let t0 = Instant::now();
    let (lo, hi) = fibtower::tent::theta_bracket(&comb, 64, 4096).unwrap();
    eprintln!("theta bracket: {:?}", t0.elapsed());
    let base = RInterval::new(lo, hi);
    let level = kmax + 1;
    let b = 0.79f64;
    let s_m = comb.s(kmax as u64).unwrap();
    let s_m1 = comb.s(kmax as u64 + 1).unwrap();
    let width_bits = (((s_m + s_m1) as f64) * b).ceil() as u32 + 96;
    eprintln!("zoom to level {level}, width 2^-{width_bits}");
    let t1 = Instant::now();
    let sb = chain::zoom(&comb, &base, level, width_bits).unwrap();
    eprintln!("zoom: {:?} (width mag2 {:?})", t1.elapsed(), sb.bracket.width().mag2());
    let t2 = Instant::now();
    let prec = ((2 * comb.s(kmax as u64 + 1).unwrap()) as f64 * b).ceil() as u32 + 192;
    let ch = chain::ReturnChain::build(&comb, &sb.bracket, level, prec).unwrap();
    eprintln!("chain build at prec {prec}: {:?}", t2.elapsed());
    eprintln!("sign certified to {}", ch.sign_certified_to());
    for k in [5u32, 10, 20, kmax] {
        if k <= level {
            eprintln!("|D_{k}| = {}", ch.d_len(k).lo().to_sci(8, fibtower::Round::Down));
        }
    }
}
