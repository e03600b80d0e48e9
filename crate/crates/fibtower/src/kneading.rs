//! Exact integer combinatorics of Fibonacci-like kneading: cutting times
//! `S_d(k)` (with the extended negative indices), the kneading map
//! `Q_d(k) = max(0, k-d)`, and the kneading sequence generated block by
//! block.
//!
//! Everything here is exact `u64`/`u128` arithmetic; overflow aborts with an
//! error instead of wrapping.

use crate::error::{Error, Result};
use std::sync::RwLock;

/// Default lower bound of the extended index range: `-3d+3`.
pub fn min_index(d: u32) -> i64 {
    -(3 * d as i64) + 3
}

struct SymTable {
    /// symbols[i] = ε_{i+1} ∈ {0,1}
    symbols: Vec<u8>,
    /// parity[i] = (# of 1s among ε_1..ε_{i+1}) mod 2
    parity: Vec<u8>,
    /// index k of the next block Δ_k to append
    next_block: u64,
}

/// Immutable-by-contract combinatorics for a fixed `d >= 2`. Memo tables
/// grow on demand behind locks, so values may be shared across threads.
pub struct Combinatorics {
    d: u32,
    cut: RwLock<Vec<u64>>,
    sym: RwLock<SymTable>,
}

impl Combinatorics {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("d must be >= 2, got {d}")));
        }
        let mut cut = Vec::new();
        let lo = min_index(d);
        let di = d as i64;
        for k in lo..=0 {
            let v = if k >= -2 * di + 3 {
                // recursion is valid from -2d+3 on
                let i1 = (k - 1 - lo) as usize;
                let id = (k - di - lo) as usize;
                cut[i1] + cut[id]
            } else if k == -2 * di + 1 {
                1
            } else {
                // covers k == -2d+2 and -3d+3 <= k <= -2d
                0
            };
            cut.push(v);
        }
        debug_assert_eq!(*cut.last().unwrap(), 1, "S_d(0) must be 1");
        Ok(Combinatorics {
            d,
            cut: RwLock::new(cut),
            sym: RwLock::new(SymTable {
                symbols: vec![1],
                parity: vec![1],
                next_block: 1,
            }),
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Kneading map Q_d(k) = max(0, k-d), defined for k >= 1.
    pub fn kneading_map(&self, k: u64) -> u64 {
        debug_assert!(k >= 1);
        k.saturating_sub(self.d as u64)
    }

    /// Cutting time S_d(k) on the extended index range k >= -3d+3.
    pub fn cutting_time(&self, k: i64) -> Result<u64> {
        let lo = min_index(self.d);
        if k < lo {
            return Err(Error::Domain(format!(
                "cutting time index {k} below {lo} for d={}",
                self.d
            )));
        }
        let idx = (k - lo) as usize;
        {
            let cut = self.cut.read().unwrap();
            if idx < cut.len() {
                return Ok(cut[idx]);
            }
        }
        let mut cut = self.cut.write().unwrap();
        let di = self.d as usize;
        while cut.len() <= idx {
            let n = cut.len();
            let v = cut[n - 1]
                .checked_add(cut[n - di])
                .ok_or(Error::Overflow("cutting_time"))?;
            cut.push(v);
        }
        Ok(cut[idx])
    }

    /// Convenience for nonnegative indices.
    pub fn s(&self, k: u64) -> Result<u64> {
        self.cutting_time(k as i64)
    }

    fn ensure_symbols(&self, n: usize) -> Result<()> {
        {
            let sym = self.sym.read().unwrap();
            if sym.symbols.len() >= n {
                return Ok(());
            }
        }
        let mut sym = self.sym.write().unwrap();
        while sym.symbols.len() < n {
            // append block Δ_k = ε_1 .. ε_{S(Q(k))-1} (1 - ε_{S(Q(k))})
            let k = sym.next_block;
            let q = self.kneading_map(k);
            let sq = self.s(q)? as usize;
            if sym.symbols.len() < sq {
                return Err(Error::Domain(
                    "kneading block substitution out of order".into(),
                ));
            }
            for i in 0..sq {
                let s = sym.symbols[i];
                let s = if i == sq - 1 { 1 - s } else { s };
                let p = *sym.parity.last().unwrap() ^ s;
                sym.symbols.push(s);
                sym.parity.push(p);
            }
            sym.next_block = k + 1;
        }
        Ok(())
    }

    /// ε_n for n >= 1.
    pub fn symbol(&self, n: u64) -> Result<u8> {
        self.ensure_symbols(n as usize)?;
        Ok(self.sym.read().unwrap().symbols[(n - 1) as usize])
    }

    /// First `n` kneading symbols ε_1..ε_n.
    pub fn sequence(&self, n: u64) -> Result<Vec<u8>> {
        self.ensure_symbols(n as usize)?;
        Ok(self.sym.read().unwrap().symbols[..n as usize].to_vec())
    }

    pub fn sequence_string(&self, n: u64) -> Result<String> {
        Ok(self
            .sequence(n)?
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect())
    }

    /// Parity of the number of 1s among ε_1..ε_m (0 for m = 0).
    pub fn ones_parity(&self, m: u64) -> Result<u8> {
        if m == 0 {
            return Ok(0);
        }
        self.ensure_symbols(m as usize)?;
        Ok(self.sym.read().unwrap().parity[(m - 1) as usize])
    }

    /// ε_{S_d(k)} in closed form, from the block-substitution parity rule:
    /// writing k = j + m d with 1 <= j <= d, the symbol flips with the
    /// parity of m. (k = 0 gives ε_1 = 1.)
    pub fn symbol_at_cutting_time(&self, k: u64) -> u8 {
        if k == 0 {
            return 1;
        }
        let d = self.d as u64;
        let j = (k - 1) % d + 1;
        let m = (k - j) / d;
        (m % 2) as u8
    }
}

/// S_d(k) for d >= 2 and k >= -3d+3.
pub fn cutting_time(d: u32, k: i64) -> Result<u64> {
    Combinatorics::new(d)?.cutting_time(k)
}

/// Q_d(k) = max(0, k-d) for k >= 1.
pub fn kneading_map(d: u32, k: u64) -> Result<u64> {
    if d < 2 {
        return Err(Error::Domain(format!("d must be >= 2, got {d}")));
    }
    Ok(k.saturating_sub(d as u64))
}

/// The first `n` symbols of the kneading sequence K_d as a 0/1 string.
pub fn kneading_sequence(d: u32, n: u64) -> Result<String> {
    Combinatorics::new(d)?.sequence_string(n)
}

/// Recover cutting times from an itinerary prefix, per the definition
/// S(k) = min { n > S(k-1) : ε_n != ε_{n - S(k-1)} }. Stops when the next
/// cutting time is not determined by the prefix.
pub fn cutting_times_from_itinerary(itinerary: &[u8]) -> Result<Vec<u64>> {
    if itinerary.len() < 2 || itinerary[0] != 1 || itinerary[1] != 0 {
        return Err(Error::Precondition(
            "itinerary must begin with symbols 1,0".into(),
        ));
    }
    let mut cuts = vec![1u64];
    loop {
        let prev = *cuts.last().unwrap() as usize;
        let mut found = None;
        for n in (prev + 1)..=itinerary.len() {
            if itinerary[n - 1] != itinerary[n - 1 - prev] {
                found = Some(n as u64);
                break;
            }
        }
        match found {
            Some(n) => cuts.push(n),
            None => return Ok(cuts),
        }
    }
}

/// Lemma-style sum identity: sum_{k=0}^{j} S_d(k) == S_d(j+d) - S_d(d-1),
/// checked in exact integers.
pub fn verify_sum_identity(d: u32, j: u64) -> Result<bool> {
    let comb = Combinatorics::new(d)?;
    let mut sum: u128 = 0;
    for k in 0..=j {
        sum += comb.s(k)? as u128;
    }
    let rhs = comb.s(j + d as u64)? as u128 - comb.s(d as u64 - 1)? as u128;
    Ok(sum == rhs)
}

/// Tower height h_{i,k} from eq.-level combinatorics: S(Q(k+1)) for the
/// central tower, S(Q(k+i-d)) for the i-th tower.
pub fn tower_height(comb: &Combinatorics, i: u32, k: u64) -> Result<u64> {
    let d = comb.d() as u64;
    if i == 1 {
        comb.s(comb.kneading_map(k + 1))
    } else {
        let i = i as u64;
        if i < 2 || i > d || k + i <= d {
            return Err(Error::Index(format!("tower ({i},{k}) out of range")));
        }
        comb.s(comb.kneading_map(k + i - d))
    }
}

/// Tower indices present at level k: 1 together with max(d-k+1, 2)..=d.
pub fn tower_indices(d: u32, k: u64) -> Vec<u32> {
    if k == 0 {
        return vec![1];
    }
    let lo = if k >= d as u64 - 1 {
        2
    } else {
        (d as u64 - k + 1) as u32
    };
    let mut v = vec![1];
    v.extend(lo..=d);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_cutting_times() {
        // d=2, k=0..6 -> 1,2,3,5,8,13,21
        let expect = [1u64, 2, 3, 5, 8, 13, 21];
        for (k, &e) in expect.iter().enumerate() {
            assert_eq!(cutting_time(2, k as i64).unwrap(), e);
        }
    }

    #[test]
    fn extended_indices_d2() {
        assert_eq!(cutting_time(2, -2).unwrap(), 0);
        assert_eq!(cutting_time(2, -1).unwrap(), 1);
        assert_eq!(cutting_time(2, -3).unwrap(), 1);
        assert!(cutting_time(2, -4).is_err());
    }

    #[test]
    fn d3_cutting_times() {
        let expect = [1u64, 2, 3, 4, 6, 9, 13, 19];
        for (k, &e) in expect.iter().enumerate() {
            assert_eq!(cutting_time(3, k as i64).unwrap(), e);
        }
    }

    #[test]
    fn linear_start() {
        // S_d(k) = k+1 for 0 <= k <= d must come out of the extended
        // recursion without special-casing
        for d in 2..=6u32 {
            for k in 0..=d as i64 {
                assert_eq!(cutting_time(d, k).unwrap(), k as u64 + 1, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn kneading_map_values() {
        assert_eq!(kneading_map(2, 1).unwrap(), 0);
        assert_eq!(kneading_map(2, 5).unwrap(), 3);
        assert_eq!(kneading_map(4, 4).unwrap(), 0);
    }

    #[test]
    fn printed_kneading_sequences() {
        assert_eq!(kneading_sequence(2, 21).unwrap(), "100111011001010011100");
        assert_eq!(kneading_sequence(3, 21).unwrap(), "100011101100110001010");
        assert_eq!(kneading_sequence(4, 21).unwrap(), "100001110110011000110");
    }

    #[test]
    fn prefix_is_one_then_zeros() {
        for d in 2..=6u32 {
            let s = kneading_sequence(d, d as u64 + 1).unwrap();
            let mut expect = "1".to_string();
            expect.push_str(&"0".repeat(d as usize));
            assert_eq!(s, expect);
        }
    }

    #[test]
    fn itinerary_round_trip() {
        for d in 2..=4u32 {
            let comb = Combinatorics::new(d).unwrap();
            let upto = comb.s(15).unwrap();
            let syms = comb.sequence(upto).unwrap();
            let cuts = cutting_times_from_itinerary(&syms).unwrap();
            for (k, &c) in cuts.iter().enumerate() {
                assert_eq!(c, comb.s(k as u64).unwrap());
            }
            assert_eq!(cuts.len(), 16, "d={d}: expected cuts through S(15)");
        }
    }

    #[test]
    fn itinerary_examples() {
        assert_eq!(cutting_times_from_itinerary(&[1, 0]).unwrap(), vec![1, 2]);
        let k2: Vec<u8> = "100111011001010011100"
            .bytes()
            .map(|b| b - b'0')
            .collect();
        assert_eq!(
            cutting_times_from_itinerary(&k2).unwrap(),
            vec![1, 2, 3, 5, 8, 13, 21]
        );
        assert!(cutting_times_from_itinerary(&[0, 1]).is_err());
        assert!(cutting_times_from_itinerary(&[1, 1]).is_err());
    }

    #[test]
    fn sum_identity() {
        assert!(verify_sum_identity(2, 0).unwrap());
        assert!(verify_sum_identity(3, 4).unwrap());
        assert!(verify_sum_identity(2, 5).unwrap());
        for d in 2..=6u32 {
            for j in 0..=60u64 {
                assert!(verify_sum_identity(d, j).unwrap(), "d={d} j={j}");
            }
        }
    }

    #[test]
    fn recursion_via_kneading_map() {
        for d in 2..=6u32 {
            let comb = Combinatorics::new(d).unwrap();
            for k in 1..=60u64 {
                let lhs = comb.s(k).unwrap();
                let rhs = comb.s(k - 1).unwrap() + comb.s(comb.kneading_map(k)).unwrap();
                assert_eq!(lhs, rhs, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn symbol_at_cutting_time_matches_sequence() {
        for d in 2..=5u32 {
            let comb = Combinatorics::new(d).unwrap();
            for k in 0..=12u64 {
                let s = comb.s(k).unwrap();
                assert_eq!(
                    comb.symbol_at_cutting_time(k),
                    comb.symbol(s).unwrap(),
                    "d={d} k={k}"
                );
            }
        }
    }

    #[test]
    fn heights_sum_to_cutting_time() {
        for d in 2..=6u32 {
            let comb = Combinatorics::new(d).unwrap();
            for k in 0..=60u64 {
                let mut total = 0u64;
                for i in tower_indices(d, k) {
                    total += if k == 0 {
                        1
                    } else {
                        tower_height(&comb, i, k).unwrap()
                    };
                }
                assert_eq!(total, comb.s(k).unwrap(), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn longer_calls_agree_on_prefixes() {
        let comb = Combinatorics::new(3).unwrap();
        let one = comb.sequence(40).unwrap();
        let two = comb.sequence(200).unwrap();
        assert_eq!(&two[..40], &one[..]);
    }
}
