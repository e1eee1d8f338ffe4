//! Successive cancellation decoding of one component code, plain and list
//! variants, with LLR-domain path metrics and two soft-output generators.
//!
//! The list decoder walks the code tree once with all paths in lockstep.
//! Every path owns a flattened per-layer LLR tree and partial-sum tree;
//! forks copy the whole state, pruning keeps the `L` smallest path metrics.
//! Each discarded prefix contributes its constraint-discounted probability
//! mass to a running codebook-mass accumulator, which the codebook-aware
//! soft output consumes.

use alloc::vec;
use alloc::vec::Vec;

use crate::gf2::PositionKind;
use crate::math::{
    bit_combine, check_combine, clamp_llr, log_sigmoid, logsumexp2, softplus, LLR_CLIP, LN_2,
};
use crate::polar::SharedCode;
use crate::{Error, Result};

/// Path-metric update for deciding bit `u` against decision LLR `l`.
///
/// `pm' = pm + ln(1 + exp(-(1-2u) l))`, computed through an overflow-safe
/// softplus. With this rule `exp(-pm)` stays equal to the product of the
/// successively approximated bit posteriors along the path.
#[inline]
pub fn pm_update(pm: f64, l: f64, u: u8) -> f64 {
    let s = if u == 0 { -l } else { l };
    pm + softplus(s)
}

/// One surviving decoding path.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Re-encoded codeword of the path.
    pub codeword: Vec<u8>,
    /// Decided `u` vector (satisfies all frozen constraints).
    pub u: Vec<u8>,
    /// Path metric in natural-log units; `exp(-pm)` is the path posterior.
    pub pm: f64,
}

/// Result of one list decode.
#[derive(Debug, Clone)]
pub struct DecodeOutput {
    /// Surviving paths sorted by ascending path metric.
    pub candidates: Vec<Candidate>,
    /// Natural log of the accumulated probability mass of all pruned
    /// prefixes (constraint-discounted); `-inf` when nothing was pruned.
    pub log_pruned_mass: f64,
    /// List size the decode ran with.
    pub list_size_used: usize,
}

impl DecodeOutput {
    /// Pruned probability mass in linear domain.
    pub fn pruned_mass(&self) -> f64 {
        libm::exp(self.log_pruned_mass)
    }

    /// Natural log of the approximate total codebook mass: list mass plus
    /// pruned mass.
    pub fn log_codebook_mass(&self) -> f64 {
        let list = self
            .candidates
            .iter()
            .fold(f64::NEG_INFINITY, |acc, c| logsumexp2(acc, -c.pm));
        logsumexp2(list, self.log_pruned_mass)
    }

    /// Candidate with the smallest path metric.
    pub fn best(&self) -> &Candidate {
        &self.candidates[0]
    }
}

// Flattened per-layer tree layout shared by the LLR and partial-sum
// buffers: depth d occupies [offset(d), offset(d) + N >> d), totalling
// 2N - 1 entries.
fn tree_len(n: usize) -> usize {
    2 * n - 1
}

#[derive(Clone)]
struct PathState {
    pm: f64,
    llr: Vec<f64>,
    sums: Vec<u8>,
    u: Vec<u8>,
}

impl PathState {
    fn new(n: usize) -> Self {
        PathState {
            pm: 0.0,
            llr: vec![0.0; tree_len(n)],
            sums: vec![0; tree_len(n)],
            u: vec![0; n],
        }
    }

    fn copy_from(&mut self, other: &PathState) {
        self.pm = other.pm;
        self.llr.copy_from_slice(&other.llr);
        self.sums.copy_from_slice(&other.sums);
        self.u.copy_from_slice(&other.u);
    }
}

/// How the root-layer updates treat a detached input position.
///
/// Detaching removes the influence of one channel observation so the soft
/// output for that position is extrinsic. [`DetachRule::Neutral`] feeds the
/// root updates a zero LLR in place of the detached input, which keeps the
/// path posteriors exactly proportional to the erased-observation
/// likelihoods (full-list soft outputs then match direct enumeration).
/// [`DetachRule::PassThrough`] instead collapses the check-node update to
/// its surviving input, treating it as a degree-2 check; the repetition
/// update is the same under both rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetachRule {
    #[default]
    Neutral,
    PassThrough,
}

/// List decoder instance over a shared immutable code.
///
/// Holds reusable per-decode workspace, so create one instance per thread
/// and reuse it across decodes.
pub struct SclDecoder {
    code: SharedCode,
    offsets: Vec<usize>,
    suffix_constraints: Vec<u32>,
    slots: Vec<PathState>,
    free: Vec<usize>,
    active: Vec<usize>,
    // scratch for forking/pruning
    cand_pm: Vec<f64>,
    cand_parent: Vec<usize>,
    cand_bit: Vec<u8>,
    keep: Vec<usize>,
    // when set, the root-layer updates for the pair containing this
    // position ignore its channel input entirely
    detached: Option<(usize, DetachRule)>,
    log_pruned: f64,
    list_size: usize,
}

impl SclDecoder {
    pub fn new(code: SharedCode) -> Self {
        let n = code.len();
        let stages = code.stages() as usize;
        let mut offsets = Vec::with_capacity(stages + 1);
        let mut off = 0;
        for d in 0..=stages {
            offsets.push(off);
            off += n >> d;
        }
        let suffix_constraints = code.constraint_suffix_counts();
        SclDecoder {
            code,
            offsets,
            suffix_constraints,
            slots: Vec::new(),
            free: Vec::new(),
            active: Vec::new(),
            cand_pm: Vec::new(),
            cand_parent: Vec::new(),
            cand_bit: Vec::new(),
            keep: Vec::new(),
            detached: None,
            log_pruned: f64::NEG_INFINITY,
            list_size: 1,
        }
    }

    pub fn code(&self) -> &SharedCode {
        &self.code
    }

    /// List decode of clipped channel/a-priori LLRs.
    pub fn decode(&mut self, l_in: &[f64], list_size: usize) -> Result<DecodeOutput> {
        self.decode_inner(l_in, list_size, None)
    }

    /// List decode with the root-layer connection of `detach` (0-based)
    /// removed, so the output is functionally independent of
    /// `l_in[detach]`. Requires at least two positions.
    pub fn decode_detached(
        &mut self,
        l_in: &[f64],
        list_size: usize,
        detach: usize,
        rule: DetachRule,
    ) -> Result<DecodeOutput> {
        if self.code.len() < 2 {
            return Err(Error::InvalidParameter(
                "detached decoding needs block length >= 2",
            ));
        }
        if detach >= self.code.len() {
            return Err(Error::InvalidParameter("detached position out of range"));
        }
        self.decode_inner(l_in, list_size, Some((detach, rule)))
    }

    fn decode_inner(
        &mut self,
        l_in: &[f64],
        list_size: usize,
        detached: Option<(usize, DetachRule)>,
    ) -> Result<DecodeOutput> {
        let n = self.code.len();
        if l_in.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: l_in.len(),
            });
        }
        if list_size == 0 {
            return Err(Error::InvalidParameter("list size must be at least 1"));
        }
        self.list_size = list_size;
        self.detached = detached;
        self.log_pruned = f64::NEG_INFINITY;
        self.ensure_slots(2 * list_size);
        self.free = (1..self.slots.len()).rev().collect();
        self.active.clear();
        self.active.push(0);
        let root = &mut self.slots[0];
        root.pm = 0.0;
        for (dst, &src) in root.llr[..n].iter_mut().zip(l_in) {
            *dst = clamp_llr(src);
        }
        if let Some((e, DetachRule::Neutral)) = detached {
            // Identical to decoding with the observation at `e` erased.
            root.llr[e] = 0.0;
        }

        let mut upos = 0;
        self.process(0, n, &mut upos);
        debug_assert_eq!(upos, n);

        // Candidates ordered by (pm, list position); list position already
        // encodes the deterministic fork/prune ordering.
        let mut order: Vec<usize> = (0..self.active.len()).collect();
        order.sort_by(|&a, &b| {
            let pa = self.slots[self.active[a]].pm;
            let pb = self.slots[self.active[b]].pm;
            pa.partial_cmp(&pb).unwrap().then(a.cmp(&b))
        });
        let candidates = order
            .iter()
            .map(|&i| {
                let slot = &self.slots[self.active[i]];
                Candidate {
                    codeword: slot.sums[..n].to_vec(),
                    u: slot.u.clone(),
                    pm: slot.pm,
                }
            })
            .collect();
        Ok(DecodeOutput {
            candidates,
            log_pruned_mass: self.log_pruned,
            list_size_used: list_size,
        })
    }

    fn ensure_slots(&mut self, want: usize) {
        let n = self.code.len();
        while self.slots.len() < want {
            self.slots.push(PathState::new(n));
        }
    }

    // Recursive lockstep walk over the code tree. `depth` indexes the
    // flattened buffers, `m` is the node length, `upos` the next leaf.
    fn process(&mut self, depth: usize, m: usize, upos: &mut usize) {
        if m == 1 {
            self.leaf(depth, *upos);
            *upos += 1;
            return;
        }
        let half = m / 2;
        let off = self.offsets[depth];
        let child = self.offsets[depth + 1];
        let detach_pair = self.detach_pair_at_root(depth, half);

        for &slot in &self.active {
            let p = &mut self.slots[slot];
            for j in 0..half {
                p.llr[child + j] = match detach_pair {
                    Some((pair, first)) if pair == j => {
                        // Degree-2 check node: output is the surviving input.
                        if first {
                            p.llr[off + j + half]
                        } else {
                            p.llr[off + j]
                        }
                    }
                    _ => check_combine(p.llr[off + j], p.llr[off + j + half]),
                };
            }
        }
        self.process(depth + 1, half, upos);

        // Stash the left child codeword, then feed the right child.
        for &slot in &self.active {
            let p = &mut self.slots[slot];
            for j in 0..half {
                p.sums[off + j] = p.sums[child + j];
            }
            for j in 0..half {
                let s = p.sums[off + j];
                p.llr[child + j] = match detach_pair {
                    Some((pair, first)) if pair == j => {
                        if first {
                            p.llr[off + j + half]
                        } else {
                            // second input removed: signed first input
                            bit_combine(p.llr[off + j], 0.0, s)
                        }
                    }
                    _ => bit_combine(p.llr[off + j], p.llr[off + j + half], s),
                };
            }
        }
        self.process(depth + 1, half, upos);

        for &slot in &self.active {
            let p = &mut self.slots[slot];
            for j in 0..half {
                let left = p.sums[off + j];
                let right = p.sums[child + j];
                p.sums[off + j] = left ^ right;
                p.sums[off + j + half] = right;
            }
        }
    }

    // Root-layer pass-through bookkeeping: returns (pair index, detached
    // input is the first of the pair) when this node is the root and the
    // pass-through rule is active. The neutral rule needs no override; it
    // zeroed the input upfront.
    fn detach_pair_at_root(&self, depth: usize, half: usize) -> Option<(usize, bool)> {
        match self.detached {
            Some((e, DetachRule::PassThrough)) if depth == 0 => {
                if e < half {
                    Some((e, true))
                } else {
                    Some((e - half, false))
                }
            }
            _ => None,
        }
    }

    fn leaf(&mut self, depth: usize, pos: usize) {
        let off = self.offsets[depth];
        match self.code.frozen().kind(pos) {
            PositionKind::Frozen => {
                for &slot in &self.active {
                    let p = &mut self.slots[slot];
                    p.pm = pm_update(p.pm, p.llr[off], 0);
                    p.sums[off] = 0;
                    p.u[pos] = 0;
                }
            }
            PositionKind::DynamicFrozen(deps) => {
                for &slot in &self.active {
                    let p = &mut self.slots[slot];
                    let bit = deps.iter().fold(0u8, |acc, &d| acc ^ p.u[d]);
                    p.pm = pm_update(p.pm, p.llr[off], bit);
                    p.sums[off] = bit;
                    p.u[pos] = bit;
                }
            }
            PositionKind::Info(_) => self.fork(off, pos),
        }
    }

    // Duplicate every path over both bit hypotheses, then prune back to the
    // list size. Candidate order is (parent list position, bit value); ties
    // in the metric resolve toward the lower candidate index, so decoding
    // is deterministic and the all-zero hypothesis wins exact ties.
    fn fork(&mut self, off: usize, pos: usize) {
        self.cand_pm.clear();
        self.cand_parent.clear();
        self.cand_bit.clear();
        for &slot in &self.active {
            let p = &self.slots[slot];
            for bit in 0..2u8 {
                self.cand_pm.push(pm_update(p.pm, p.llr[off], bit));
                self.cand_parent.push(slot);
                self.cand_bit.push(bit);
            }
        }
        let total = self.cand_pm.len();
        self.keep.clear();
        self.keep.extend(0..total);
        if total > self.list_size {
            let pm = &self.cand_pm;
            self.keep
                .sort_by(|&a, &b| pm[a].partial_cmp(&pm[b]).unwrap().then(a.cmp(&b)));
            // Discarded prefixes feed the codebook-mass accumulator with
            // exp(-pm) discounted by one half per remaining constraint.
            for &idx in &self.keep[self.list_size..] {
                let discount = f64::from(self.suffix_constraints[pos]) * LN_2;
                self.log_pruned = logsumexp2(self.log_pruned, -self.cand_pm[idx] - discount);
            }
            self.keep.truncate(self.list_size);
            self.keep.sort_unstable();
        }

        // Slot assignment in two passes. All parent-to-fresh copies happen
        // before any slot is mutated, so a parent surviving with both bit
        // hypotheses is still pristine when its second child clones it.
        let mut assignment: Vec<(usize, usize)> = Vec::with_capacity(self.keep.len());
        let mut parent_taken: Vec<bool> = vec![false; total];
        for &idx in &self.keep {
            let parent = self.cand_parent[idx];
            let pair = idx & !1;
            let slot = if !parent_taken[pair] {
                parent_taken[pair] = true;
                parent
            } else {
                let fresh = self.free.pop().expect("arena sized for 2L paths");
                debug_assert_ne!(parent, fresh);
                let (src, dst) = if parent < fresh {
                    let (lo, hi) = self.slots.split_at_mut(fresh);
                    (&lo[parent], &mut hi[0])
                } else {
                    let (lo, hi) = self.slots.split_at_mut(parent);
                    (&hi[0], &mut lo[fresh])
                };
                dst.copy_from(src);
                fresh
            };
            assignment.push((slot, idx));
        }
        let mut new_active: Vec<usize> = Vec::with_capacity(assignment.len());
        for &(slot, idx) in &assignment {
            let p = &mut self.slots[slot];
            p.pm = self.cand_pm[idx];
            p.sums[off] = self.cand_bit[idx];
            p.u[pos] = self.cand_bit[idx];
            new_active.push(slot);
        }
        // Parents with no surviving child go back to the free pool.
        for &slot in &self.active {
            if !new_active.contains(&slot) {
                self.free.push(slot);
            }
        }
        self.active = new_active;
    }
}

/// Plain successive cancellation decode; returns `(u, codeword)`.
///
/// Info bits follow the sign rule (nonnegative LLR decides zero), frozen
/// bits are zero, dynamic-frozen bits take the XOR of their dependencies.
pub fn sc_decode(code: &SharedCode, l_in: &[f64]) -> Result<(Vec<u8>, Vec<u8>)> {
    let n = code.len();
    if l_in.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: l_in.len(),
        });
    }
    let stages = code.stages() as usize;
    let mut offsets = Vec::with_capacity(stages + 1);
    let mut off = 0;
    for d in 0..=stages {
        offsets.push(off);
        off += n >> d;
    }
    let mut llr = vec![0.0; tree_len(n)];
    let mut sums = vec![0u8; tree_len(n)];
    let mut u = vec![0u8; n];
    for (dst, &src) in llr[..n].iter_mut().zip(l_in) {
        *dst = clamp_llr(src);
    }

    fn walk(
        code: &SharedCode,
        offsets: &[usize],
        llr: &mut [f64],
        sums: &mut [u8],
        u: &mut [u8],
        depth: usize,
        m: usize,
        upos: &mut usize,
    ) {
        if m == 1 {
            let off = offsets[depth];
            let pos = *upos;
            let bit = match code.frozen().kind(pos) {
                PositionKind::Frozen => 0,
                PositionKind::DynamicFrozen(deps) => deps.iter().fold(0u8, |acc, &d| acc ^ u[d]),
                PositionKind::Info(_) => u8::from(llr[off] < 0.0),
            };
            sums[off] = bit;
            u[pos] = bit;
            *upos += 1;
            return;
        }
        let half = m / 2;
        let off = offsets[depth];
        let child = offsets[depth + 1];
        for j in 0..half {
            llr[child + j] = check_combine(llr[off + j], llr[off + j + half]);
        }
        walk(code, offsets, llr, sums, u, depth + 1, half, upos);
        for j in 0..half {
            sums[off + j] = sums[child + j];
        }
        for j in 0..half {
            llr[child + j] = bit_combine(llr[off + j], llr[off + j + half], sums[off + j]);
        }
        walk(code, offsets, llr, sums, u, depth + 1, half, upos);
        for j in 0..half {
            let left = sums[off + j];
            let right = sums[child + j];
            sums[off + j] = left ^ right;
            sums[off + j + half] = right;
        }
    }

    let mut upos = 0;
    walk(code, &offsets, &mut llr, &mut sums, &mut u, 0, n, &mut upos);
    let c = sums[..n].to_vec();
    Ok((u, c))
}

/// List-only soft output: per position, the log-ratio of the posterior
/// mass of list entries carrying a zero versus a one. When one sublist is
/// empty the fallback weighs the agreed bit's BPSK sign with the spread
/// between the worst and best path metrics. Outputs are clipped.
pub fn soft_output_pyndiah(out: &DecodeOutput) -> Vec<f64> {
    let n = out.candidates[0].codeword.len();
    let pm_min = out
        .candidates
        .iter()
        .fold(f64::INFINITY, |acc, c| acc.min(c.pm));
    let pm_max = out
        .candidates
        .iter()
        .fold(f64::NEG_INFINITY, |acc, c| acc.max(c.pm));
    (0..n)
        .map(|j| {
            let (lse0, lse1) = sublist_masses(out, j);
            if lse0 == f64::NEG_INFINITY || lse1 == f64::NEG_INFINITY {
                let sign = if out.candidates[0].codeword[j] == 0 {
                    1.0
                } else {
                    -1.0
                };
                clamp_llr(sign * (pm_max - pm_min))
            } else {
                clamp_llr(lse0 - lse1)
            }
        })
        .collect()
}

/// Codebook-aware soft output: the list masses of each sublist are topped
/// up with the pruned codebook mass, split by the channel prior of the bit.
/// With nothing pruned this reduces exactly to the list-only log-ratio; an
/// empty sublist then saturates at the clip value.
pub fn soft_output_codebook(out: &DecodeOutput, l_in: &[f64]) -> Vec<f64> {
    let n = out.candidates[0].codeword.len();
    debug_assert_eq!(l_in.len(), n);
    let log_delta = out.log_pruned_mass;
    (0..n)
        .map(|j| {
            let (mut lse0, mut lse1) = sublist_masses(out, j);
            if log_delta > f64::NEG_INFINITY {
                lse0 = logsumexp2(lse0, log_delta + log_sigmoid(l_in[j]));
                lse1 = logsumexp2(lse1, log_delta + log_sigmoid(-l_in[j]));
            }
            if lse0 == f64::NEG_INFINITY {
                return -LLR_CLIP;
            }
            if lse1 == f64::NEG_INFINITY {
                return LLR_CLIP;
            }
            clamp_llr(lse0 - lse1)
        })
        .collect()
}

fn sublist_masses(out: &DecodeOutput, j: usize) -> (f64, f64) {
    let mut lse0 = f64::NEG_INFINITY;
    let mut lse1 = f64::NEG_INFINITY;
    for c in &out.candidates {
        if c.codeword[j] == 0 {
            lse0 = logsumexp2(lse0, -c.pm);
        } else {
            lse1 = logsumexp2(lse1, -c.pm);
        }
    }
    (lse0, lse1)
}
