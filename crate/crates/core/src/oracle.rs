//! Brute-force reference implementations used to validate the decoders.
//!
//! Everything here recomputes probabilities by direct enumeration over the
//! codebook or the decoding tree, deliberately avoiding the layered
//! check/repetition recursions, the path-metric shortcut, and the
//! log-domain soft-output code paths it is used to check. Only the encoder
//! is shared, as the common ground both sides are defined against.
//!
//! Complexity is exponential in the code dimension; intended for block
//! lengths up to 16. The `selftest` CLI command runs this suite at runtime,
//! which is why it lives in a regular module rather than test code.

use alloc::vec;
use alloc::vec::Vec;

use crate::polar::SharedCode;

/// `ln P(bit|l)` for one observed LLR, computed directly.
fn log_bit_prob(bit: u8, l: f64) -> f64 {
    // P(0|l) = e^l / (1 + e^l); stable on both tails.
    let s = if bit == 0 { l } else { -l };
    if s >= 0.0 {
        -libm::log1p(libm::exp(-s))
    } else {
        s - libm::log1p(libm::exp(s))
    }
}

/// `ln prod_j P(c_j|l_j)`, skipping an optional excluded position.
fn log_word_prob(c: &[u8], l: &[f64], skip: Option<usize>) -> f64 {
    c.iter()
        .zip(l)
        .enumerate()
        .filter(|(j, _)| Some(*j) != skip)
        .map(|(_, (&bit, &llr))| log_bit_prob(bit, llr))
        .sum()
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = if a > b { a } else { b };
    m + libm::log1p(libm::exp(-libm::fabs(a - b)))
}

/// All `2^k` codewords with their `u` vectors.
pub fn enumerate_codebook(code: &SharedCode) -> Vec<(Vec<u8>, Vec<u8>)> {
    let k = code.dim();
    (0..1usize << k)
        .map(|word| {
            let a: Vec<u8> = (0..k).map(|i| ((word >> i) & 1) as u8).collect();
            let c = code.encode(&a).expect("dimension fixed by enumeration");
            let u = code.codeword_to_u(&c).expect("length fixed");
            (u, c)
        })
        .collect()
}

/// Exact bitwise a-posteriori LLRs by full codebook enumeration.
///
/// Positions where the whole codebook agrees yield an infinite value.
pub fn map_app_llrs(code: &SharedCode, l: &[f64]) -> Vec<f64> {
    let book = enumerate_codebook(code);
    (0..code.len())
        .map(|j| {
            let mut m0 = f64::NEG_INFINITY;
            let mut m1 = f64::NEG_INFINITY;
            for (_, c) in &book {
                let lp = log_word_prob(c, l, None);
                if c[j] == 0 {
                    m0 = log_add(m0, lp);
                } else {
                    m1 = log_add(m1, lp);
                }
            }
            m0 - m1
        })
        .collect()
}

/// Exact extrinsic LLR for position `e`: codebook enumeration with the
/// likelihood factor of `e` removed.
pub fn extrinsic_llr(code: &SharedCode, l: &[f64], e: usize) -> f64 {
    let book = enumerate_codebook(code);
    let mut m0 = f64::NEG_INFINITY;
    let mut m1 = f64::NEG_INFINITY;
    for (_, c) in &book {
        let lp = log_word_prob(c, l, Some(e));
        if c[e] == 0 {
            m0 = log_add(m0, lp);
        } else {
            m1 = log_add(m1, lp);
        }
    }
    m0 - m1
}

/// Successive-cancellation decision LLR for the position following
/// `prefix`, computed by marginalizing every future bit pattern uniformly.
///
/// This is the quantity the layered update recursion produces; here it is
/// evaluated from first principles instead.
pub fn sc_decision_llr(code: &SharedCode, l: &[f64], prefix: &[u8]) -> f64 {
    let n = code.len();
    let i = prefix.len();
    assert!(i < n);
    let tail = n - i - 1;
    let mut m0 = f64::NEG_INFINITY;
    let mut m1 = f64::NEG_INFINITY;
    let mut u = vec![0u8; n];
    u[..i].copy_from_slice(prefix);
    for bit in 0..2u8 {
        u[i] = bit;
        for future in 0..1usize << tail {
            for t in 0..tail {
                u[i + 1 + t] = ((future >> t) & 1) as u8;
            }
            let mut c = u.clone();
            crate::gf2::polar_transform(&mut c);
            let lp = log_word_prob(&c, l, None);
            if bit == 0 {
                m0 = log_add(m0, lp);
            } else {
                m1 = log_add(m1, lp);
            }
        }
    }
    m0 - m1
}

/// One surviving path of the reference tree walk.
#[derive(Debug, Clone)]
pub struct WalkPath {
    pub u: Vec<u8>,
    pub pm: f64,
}

/// Result of the instrumented reference walk of the list-decoding tree.
#[derive(Debug, Clone)]
pub struct TreeWalk {
    /// Final paths sorted by ascending metric (ties by creation order).
    pub paths: Vec<WalkPath>,
    /// Every discarded prefix with its metric at the moment of discard.
    pub pruned_prefixes: Vec<(usize, f64)>,
    /// Total constraint-discounted probability mass of the discarded
    /// prefixes, in linear domain.
    pub pruned_mass: f64,
    /// List mass plus pruned mass.
    pub codebook_mass: f64,
}

/// Replays list decoding over the code tree with decision LLRs obtained by
/// brute-force marginalization and metrics accumulated with naive
/// logarithms, recording every pruning event.
///
/// Follows the same deterministic ordering contract as the decoder: forks
/// enumerate (parent order, bit zero, bit one) and metric ties keep the
/// lower candidate index.
pub fn scl_tree_walk(code: &SharedCode, l: &[f64], list_size: usize) -> TreeWalk {
    use crate::gf2::PositionKind;

    let n = code.len();
    let clipped: Vec<f64> = l.iter().map(|&x| x.clamp(-40.0, 40.0)).collect();
    // count of frozen + dynamic positions after each index
    let mut suffix = vec![0usize; n + 1];
    for i in (0..n).rev() {
        let frozen = !matches!(code.frozen().kind(i), PositionKind::Info(_));
        suffix[i] = suffix[i + 1] + usize::from(frozen);
    }

    let mut paths: Vec<(Vec<u8>, f64)> = vec![(Vec::new(), 0.0)];
    let mut pruned_prefixes: Vec<(usize, f64)> = Vec::new();
    let mut pruned_mass = 0.0f64;
    for i in 0..n {
        let mut extended: Vec<(Vec<u8>, f64)> = Vec::new();
        for (prefix, pm) in &paths {
            let lam = sc_decision_llr(code, &clipped, prefix);
            let penalty = |bit: u8| -> f64 {
                // ln(1 + exp(-(1-2u) lam)) via naive stable evaluation
                let s = if bit == 0 { -lam } else { lam };
                if s > 0.0 {
                    s + libm::log1p(libm::exp(-s))
                } else {
                    libm::log1p(libm::exp(s))
                }
            };
            match code.frozen().kind(i) {
                PositionKind::Frozen => {
                    let mut p = prefix.clone();
                    p.push(0);
                    extended.push((p, pm + penalty(0)));
                }
                PositionKind::DynamicFrozen(deps) => {
                    let bit = deps.iter().fold(0u8, |acc, &d| acc ^ prefix[d]);
                    let mut p = prefix.clone();
                    p.push(bit);
                    extended.push((p, pm + penalty(bit)));
                }
                PositionKind::Info(_) => {
                    for bit in 0..2u8 {
                        let mut p = prefix.clone();
                        p.push(bit);
                        extended.push((p, pm + penalty(bit)));
                    }
                }
            }
        }
        if extended.len() > list_size {
            let mut order: Vec<usize> = (0..extended.len()).collect();
            order.sort_by(|&a, &b| {
                extended[a]
                    .1
                    .partial_cmp(&extended[b].1)
                    .unwrap()
                    .then(a.cmp(&b))
            });
            for &idx in &order[list_size..] {
                let pm = extended[idx].1;
                pruned_prefixes.push((i + 1, pm));
                pruned_mass += libm::exp2(-(suffix[i + 1] as f64)) * libm::exp(-pm);
            }
            let mut kept: Vec<usize> = order[..list_size].to_vec();
            kept.sort_unstable();
            paths = kept.into_iter().map(|idx| extended[idx].clone()).collect();
        } else {
            paths = extended;
        }
    }

    let mut order: Vec<usize> = (0..paths.len()).collect();
    order.sort_by(|&a, &b| {
        paths[a]
            .1
            .partial_cmp(&paths[b].1)
            .unwrap()
            .then(a.cmp(&b))
    });
    let list_mass: f64 = paths.iter().map(|(_, pm)| libm::exp(-pm)).sum();
    TreeWalk {
        paths: order
            .into_iter()
            .map(|idx| WalkPath {
                u: paths[idx].0.clone(),
                pm: paths[idx].1,
            })
            .collect(),
        pruned_prefixes,
        pruned_mass,
        codebook_mass: list_mass + pruned_mass,
    }
}

/// Direct linear-domain evaluation of the codebook-aware soft output from
/// the reference tree walk: sublist masses plus the pruned mass split by
/// the channel prior of each bit, clipped like the decoder output.
pub fn codebook_soft_output_reference(code: &SharedCode, l: &[f64], list_size: usize) -> Vec<f64> {
    let walk = scl_tree_walk(code, l, list_size);
    let words: Vec<(Vec<u8>, f64)> = walk
        .paths
        .iter()
        .map(|p| {
            let mut c = p.u.clone();
            crate::gf2::polar_transform(&mut c);
            (c, libm::exp(-p.pm))
        })
        .collect();
    (0..code.len())
        .map(|j| {
            let prior0 = 1.0 / (1.0 + libm::exp(-l[j]));
            let mut mass0 = walk.pruned_mass * prior0;
            let mut mass1 = walk.pruned_mass * (1.0 - prior0);
            for (c, w) in &words {
                if c[j] == 0 {
                    mass0 += w;
                } else {
                    mass1 += w;
                }
            }
            (libm::log(mass0) - libm::log(mass1)).clamp(-40.0, 40.0)
        })
        .collect()
}

/// Gaussian tail probability `Q(x)`.
pub fn q_func(x: f64) -> f64 {
    0.5 * libm::erfc(x / core::f64::consts::SQRT_2)
}

/// Fine-grid argmax of the scaled-message rate objective; ties keep the
/// smaller coefficient. Independent of the golden-section maximizer.
pub fn gmi_grid_argmax(samples: &crate::gmi::GmiSamples, lo: f64, hi: f64, step: f64) -> f64 {
    let mut best_a = lo;
    let mut best_v = f64::NEG_INFINITY;
    let steps = libm::floor((hi - lo) / step + 0.5) as usize;
    for i in 0..=steps {
        let a = lo + step * i as f64;
        let v = crate::gmi::gmi_estimate(samples, a);
        if v > best_v {
            best_v = v;
            best_a = a;
        }
    }
    best_a
}
