//! Brute-force count of constrained dual-ordered set partitions.
//!
//! A dual-ordered partition orders both its blocks and the elements inside
//! each block. The ground set is `[l]` (plain elements) plus `r` asterisked
//! elements `(l+1)*..(l+r)*`, split into `p = u + v + r` blocks such that
//!
//! (a) a block holds no plain element, one, or two adjacent ones;
//! (b) the first `u` blocks hold no plain element;
//! (c) `(l+r)*` lies in one of the first `u + v` blocks.
//!
//! The constraints never distinguish two plain elements, nor two asterisked
//! elements other than `(l+r)*`. So the count is `l! (r-1)!` times the number
//! of block sequences over the letters `U` (plain), `A` (asterisked) and `S`
//! (the element `(l+r)*`). [`count_dual_ordered_partitions`] enumerates those
//! letter patterns; [`count_labelled`] enumerates labelled partitions
//! outright and is kept to audit the reduction on small inputs.

use num_bigint::BigInt;

use crate::combinat::factorial;
use crate::error::{domain, Result};
use crate::ExactInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionParams {
    pub l: u32,
    pub r: u32,
    pub u: u32,
    pub v: u32,
}

impl PartitionParams {
    pub fn new(l: u32, r: u32, u: u32, v: u32) -> Result<Self> {
        if l < 1 || r + v < 1 {
            return Err(domain(
                "count_dual_ordered_partitions",
                format!("need l >= 1 and r + v >= 1, got l={l} r={r} u={u} v={v}"),
            ));
        }
        Ok(PartitionParams { l, r, u, v })
    }

    pub fn blocks(&self) -> u32 {
        self.u + self.v + self.r
    }
}

#[derive(Clone, Copy)]
struct Remaining {
    plain: u32,
    star: u32,
    special: bool,
}

/// Counts letter sequences for one block given the letters still available,
/// then recurses into the following blocks.
struct PatternCounter {
    params: PartitionParams,
}

impl PatternCounter {
    fn count_from(&self, block: u32, rem: Remaining) -> u64 {
        let p = self.params.blocks();
        if block == p {
            return u64::from(rem.plain == 0 && rem.star == 0 && !rem.special);
        }
        // every later block needs at least one element
        let left = rem.plain + rem.star + u32::from(rem.special);
        if left < p - block {
            return 0;
        }
        let allow_plain = block >= self.params.u;
        let allow_special = block < self.params.u + self.params.v;
        let mut total = 0;
        self.extend_block(block, rem, 0, false, false, allow_plain, allow_special, &mut total);
        total
    }

    /// Grows the word of `block` one letter at a time. `plain_used` counts
    /// plain letters so far, `last_plain` says whether the word ends in one.
    #[allow(clippy::too_many_arguments)]
    fn extend_block(
        &self,
        block: u32,
        rem: Remaining,
        plain_used: u32,
        last_plain: bool,
        nonempty: bool,
        allow_plain: bool,
        allow_special: bool,
        total: &mut u64,
    ) {
        if nonempty {
            *total += self.count_from(block + 1, rem);
        }
        let can_plain = allow_plain
            && rem.plain > 0
            && (plain_used == 0 || (plain_used == 1 && last_plain));
        if can_plain {
            let next = Remaining { plain: rem.plain - 1, ..rem };
            self.extend_block(block, next, plain_used + 1, true, true, allow_plain, allow_special, total);
        }
        if rem.star > 0 {
            let next = Remaining { star: rem.star - 1, ..rem };
            self.extend_block(block, next, plain_used, false, true, allow_plain, allow_special, total);
        }
        if rem.special && allow_special {
            let next = Remaining { special: false, ..rem };
            self.extend_block(block, next, plain_used, false, true, allow_plain, allow_special, total);
        }
    }
}

/// Number of letter patterns (see module docs).
pub fn count_patterns(params: PartitionParams) -> u64 {
    let rem = Remaining {
        plain: params.l,
        star: params.r.saturating_sub(1),
        special: params.r >= 1,
    };
    PatternCounter { params }.count_from(0, rem)
}

/// Exhaustive count of the dual-ordered partitions described in the module
/// docs, for `l >= 1`, `r + v >= 1`.
pub fn count_dual_ordered_partitions(l: u32, r: u32, u: u32, v: u32) -> Result<ExactInt> {
    let params = PartitionParams::new(l, r, u, v)?;
    let patterns = BigInt::from(count_patterns(params));
    let relabel: BigInt = factorial::<BigInt>(l as u64) * factorial::<BigInt>(r.saturating_sub(1) as u64);
    Ok(patterns * relabel)
}

/// Fully labelled enumeration: every ordering of the ground set cut into `p`
/// nonempty consecutive blocks, filtered by (a)-(c). Exponential; meant for
/// `l + r <= 7`.
pub fn count_labelled(l: u32, r: u32, u: u32, v: u32) -> Result<u64> {
    let params = PartitionParams::new(l, r, u, v)?;
    let total = (l + r) as usize;
    let p = params.blocks() as usize;
    if p == 0 || p > total {
        return Ok(0);
    }
    // elements 1..=l plain, l+1..=l+r asterisked; special is l+r when r >= 1
    let elems: Vec<u32> = (1..=l + r).collect();
    let special = (r >= 1).then_some(l + r);
    let mut count = 0u64;
    for perm in itertools::Itertools::permutations(elems.iter().copied(), total) {
        // choose p-1 cut points among total-1 gaps
        for cuts in itertools::Itertools::combinations(1..total, p - 1) {
            let mut bounds = vec![0];
            bounds.extend(cuts);
            bounds.push(total);
            let ok = bounds.windows(2).enumerate().all(|(b, w)| {
                let block = &perm[w[0]..w[1]];
                let plain_pos: Vec<usize> = block
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e <= l)
                    .map(|(i, _)| i)
                    .collect();
                let shape_ok = match plain_pos.len() {
                    0 | 1 => true,
                    2 => plain_pos[1] == plain_pos[0] + 1,
                    _ => false,
                };
                let u_ok = b as u32 >= u || plain_pos.is_empty();
                let s_ok = match special {
                    Some(s) if block.contains(&s) => (b as u32) < u + v,
                    _ => true,
                };
                shape_ok && u_ok && s_ok
            });
            count += u64::from(ok);
        }
    }
    Ok(count)
}
