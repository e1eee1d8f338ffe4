//! Built-in oracle suite: the brute-force cross-checks that gate the
//! decoders, runnable from the CLI on any build.
//!
//! Every check decodes small codes (block length at most eight) and
//! compares against direct enumeration, so the whole suite finishes in
//! seconds.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polarforge_core::escl::{escl_extrinsic, EsclConfig};
use polarforge_core::gmi::{maximize_scalar, GmiSamples};
use polarforge_core::grid::LlrGrid;
use polarforge_core::oracle;
use polarforge_core::polar::{PolarCodeSpec, SharedCode};
use polarforge_core::product::{
    check_product_valid, encode_product, reconstruct_app, Direction, ProductCodeSpec,
    ProductDecoder, SoftMode,
};
use polarforge_core::scl::{soft_output_codebook, soft_output_pyndiah, SclDecoder};
use polarforge_core::sim::{derive_rng, random_info};
use rand_distr::Distribution;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Full report with wall time.
#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
    pub elapsed_secs: f64,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {} - {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(
            out,
            "selftest: {}/{} checks passed in {:.1} s",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len(),
            self.elapsed_secs
        );
        out
    }
}

fn test_code() -> SharedCode {
    Arc::new(PolarCodeSpec::from_text("8 4\n00110001\n00001001\n00000100\n00000011\n").unwrap())
}

fn noisy_input(rng: &mut ChaCha8Rng, n: usize, sigma: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let g: f64 = rand_distr::StandardNormal.sample(rng);
            2.0 / (sigma * sigma) * (1.0 - 2.0 * f64::from(rng.random::<bool>()) + sigma * g)
        })
        .collect()
}

/// List soft output against exhaustive bitwise a-posteriori enumeration.
///
/// `perturb` shifts the decoder's path metrics and exists as a negative
/// control: any nonzero value must trip the check.
pub fn map_oracle_check(seed: u64, perturb: f64) -> CheckResult {
    let code = test_code();
    let mut dec = SclDecoder::new(code.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
    let mut worst = 0.0f64;
    for _ in 0..120 {
        let l = noisy_input(&mut rng, 8, 1.0);
        let out = dec.decode(&l, 16).expect("dims fixed");
        let app = soft_output_pyndiah(&out);
        let exact = oracle::map_app_llrs(&code, &l);
        for (j, (a, b)) in app.iter().zip(&exact).enumerate() {
            let delta = (a + perturb * (j as f64 + 1.0) - b).abs();
            worst = worst.max(delta);
        }
    }
    CheckResult {
        name: "scl-map-oracle",
        passed: worst <= 1e-9,
        detail: format!("worst APP deviation {worst:.3e} (tolerance 1e-9)"),
    }
}

/// Extrinsic decoding: bit-exact input independence plus enumeration match.
pub fn escl_check(seed: u64) -> CheckResult {
    let code = test_code();
    let mut dec = SclDecoder::new(code.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
    let mut worst = 0.0f64;
    let mut invariant = true;
    for _ in 0..40 {
        let l = noisy_input(&mut rng, 8, 1.0);
        for e in 0..8 {
            let mut probe = l.clone();
            let vals: Vec<u64> = [-10.0, 0.0, 10.0]
                .iter()
                .map(|&x| {
                    probe[e] = x;
                    escl_extrinsic(&mut dec, &probe, e, 16, EsclConfig::default())
                        .expect("in range")
                        .to_bits()
                })
                .collect();
            invariant &= vals[0] == vals[1] && vals[1] == vals[2];
            let v = escl_extrinsic(&mut dec, &l, e, 16, EsclConfig::default()).expect("in range");
            worst = worst.max((v - oracle::extrinsic_llr(&code, &l, e)).abs());
        }
    }
    CheckResult {
        name: "escl-extrinsic-oracle",
        passed: invariant && worst <= 1e-9,
        detail: format!(
            "input-independence {}, worst oracle deviation {worst:.3e} (tolerance 1e-9)",
            if invariant { "bit-exact" } else { "VIOLATED" }
        ),
    }
}

/// Codebook-aware soft output: reduction without pruning and pruned-mass
/// agreement with the instrumented tree walk.
pub fn codebook_mass_check(seed: u64) -> CheckResult {
    let code = test_code();
    let mut dec = SclDecoder::new(code.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x03);
    let mut worst_reduction = 0.0f64;
    let mut worst_mass = 0.0f64;
    for _ in 0..60 {
        let l = noisy_input(&mut rng, 8, 1.1);
        let full = dec.decode(&l, 16).expect("dims fixed");
        for (a, b) in soft_output_codebook(&full, &l)
            .iter()
            .zip(soft_output_pyndiah(&full))
        {
            worst_reduction = worst_reduction.max((a - b).abs());
        }
        let pruned = dec.decode(&l, 2).expect("dims fixed");
        let walk = oracle::scl_tree_walk(&code, &l, 2);
        worst_mass = worst_mass.max((pruned.pruned_mass() - walk.pruned_mass).abs());
    }
    CheckResult {
        name: "codebook-mass",
        passed: worst_reduction <= 1e-12 && worst_mass <= 1e-9,
        detail: format!(
            "reduction deviation {worst_reduction:.3e} (1e-12), pruned-mass deviation {worst_mass:.3e} (1e-9)"
        ),
    }
}

/// Scaling-coefficient maximizer against the fine-grid argmax.
pub fn gmi_check(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
    let mut worst = 0.0f64;
    for case in 0..20 {
        let n = 300 + 30 * case;
        let mut s = GmiSamples::with_capacity(n);
        for _ in 0..n {
            let x: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let g: f64 = rand_distr::StandardNormal.sample(&mut rng);
            let h: f64 = rand_distr::StandardNormal.sample(&mut rng);
            s.push(x * (1.0 + 0.8 * g), x * (0.7 + 0.8 * h), x);
        }
        let found = maximize_scalar(&s, 0.0, 2.0).expect("nonempty");
        let grid = oracle::gmi_grid_argmax(&s, 0.0, 2.0, 1e-4);
        worst = worst.max((found - grid).abs());
    }
    CheckResult {
        name: "gmi-grid-oracle",
        passed: worst <= 1e-4,
        detail: format!("worst argmax deviation {worst:.3e} (tolerance 1e-4)"),
    }
}

/// Product-layer invariants: encode/extract round trip, validity, and the
/// bit-exact extrinsic identity on noisy frames.
pub fn product_identity_check(seed: u64) -> CheckResult {
    let row = test_code();
    let col = Arc::new(PolarCodeSpec::plain(4, 2, 1.0).unwrap());
    let spec = ProductCodeSpec::new(row, col);
    let mut dec = ProductDecoder::new(spec.clone(), 2, SoftMode::Soscl);
    let mut ok = true;
    let mut detail = String::from("encode/validity/extrinsic identity hold");
    for frame in 0..20u64 {
        let mut rng = derive_rng(seed ^ 0x05, &[frame]);
        let info = random_info(spec.info_rows(), spec.info_cols(), &mut rng);
        let cw = encode_product(&spec, &info).expect("dims fixed");
        if !check_product_valid(&spec, &cw).expect("dims fixed") {
            ok = false;
            detail = "encoded word failed validity".into();
            break;
        }
        if polarforge_core::product::extract_info(&spec, &cw).expect("dims") != info {
            ok = false;
            detail = "info extraction mismatch".into();
            break;
        }
        let l_ch = polarforge_core::channel::transmit(&cw, 0.9, &mut rng);
        let mut l_a = LlrGrid::zeros(spec.rows(), spec.cols());
        for v in l_a.as_mut_slice() {
            *v = rng.random_range(-0.5..0.5);
        }
        for dir in [Direction::Rows, Direction::Cols] {
            let out = dec.half_iteration(&l_ch, &l_a, dir).expect("dims fixed");
            for r in 0..spec.rows() {
                for c in 0..spec.cols() {
                    let rebuilt =
                        reconstruct_app(out.l_e.get(r, c), l_ch.get(r, c), l_a.get(r, c));
                    if rebuilt.to_bits() != out.l_app.get(r, c).to_bits() {
                        ok = false;
                        detail = "extrinsic identity not bit-exact".into();
                    }
                }
            }
        }
    }
    CheckResult {
        name: "product-identities",
        passed: ok,
        detail,
    }
}

/// Kernel involution and constraint round trip, exhaustive for up to
/// eight-column matrices.
pub fn gf2_check(seed: u64) -> CheckResult {
    use polarforge_core::gf2::{gf2_mul, kron_power, polar_transform};
    let mut ok = true;
    let mut detail = String::from("involution and constraint round trip hold");
    for n in 0..=3u32 {
        let len = 1usize << n;
        let kernel = kron_power(n).expect("small");
        for word in 0..(1usize << len) {
            let bits: Vec<u8> = (0..len).map(|i| ((word >> i) & 1) as u8).collect();
            let mut x = bits.clone();
            polar_transform(&mut x);
            if x != gf2_mul(&bits, &kernel).expect("dims") {
                ok = false;
                detail = "butterfly disagrees with dense product".into();
            }
            polar_transform(&mut x);
            if x != bits {
                ok = false;
                detail = "transform is not an involution".into();
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x06);
    for _ in 0..10 {
        let dim = rng.random_range(1..=7usize);
        let code = random_code(8, dim, &mut rng);
        for word in 0..(1u32 << dim) {
            let a: Vec<u8> = (0..dim).map(|i| ((word >> i) & 1) as u8).collect();
            let c = code.encode(&a).expect("dims");
            if !code.is_valid_codeword(&c).expect("dims") {
                ok = false;
                detail = "encoded word violates its own constraints".into();
            }
        }
    }
    CheckResult {
        name: "gf2-involution-roundtrip",
        passed: ok,
        detail,
    }
}

fn random_code(len: usize, dim: usize, rng: &mut ChaCha8Rng) -> PolarCodeSpec {
    use polarforge_core::gf2::{BitMatrix, PrecodingMatrix};
    loop {
        let mut pivots: Vec<usize> = Vec::new();
        while pivots.len() < dim {
            let c = rng.random_range(0..len);
            if !pivots.contains(&c) {
                pivots.push(c);
            }
        }
        let mut m = BitMatrix::zeros(dim, len);
        for (r, &pv) in pivots.iter().enumerate() {
            m.set(r, pv, 1);
            for c in pv + 1..len {
                if rng.random::<bool>() {
                    m.set(r, c, 1);
                }
            }
        }
        if let Ok(p) = PrecodingMatrix::from_matrix(m) {
            if let Ok(spec) = PolarCodeSpec::new(p) {
                return spec;
            }
        }
    }
}

/// Run the whole suite.
pub fn run_selftest(seed: u64) -> SelftestReport {
    let start = Instant::now();
    let checks = vec![
        gf2_check(seed),
        map_oracle_check(seed, 0.0),
        escl_check(seed),
        codebook_mass_check(seed),
        gmi_check(seed),
        product_identity_check(seed),
    ];
    SelftestReport {
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_build_passes_and_is_fast() {
        let report = run_selftest(1);
        assert!(report.all_passed(), "{}", report.render());
        assert!(report.elapsed_secs < 60.0);
    }

    #[test]
    fn corrupted_metrics_trip_the_map_check() {
        let clean = map_oracle_check(1, 0.0);
        assert!(clean.passed);
        let corrupted = map_oracle_check(1, 1e-3);
        assert!(!corrupted.passed, "negative control must fail");
    }
}
