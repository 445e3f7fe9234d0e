//! Seeded randomized invariants over sampled code specifications.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tbtrellis::bcjr;
use tbtrellis::emsgm;
use tbtrellis::kv;
use tbtrellis::metrics;
use tbtrellis::sample::{random_spec, SampleConfig};
use tbtrellis::trellis::Trellis;
use tbtrellis::verify::{run_random_suite, run_suite};

#[test]
fn random_suite_passes_for_seeded_corpus() {
    let report = run_random_suite(0xA5A5, 60, &SampleConfig::default()).unwrap();
    assert_eq!(report.runs, 60);
    assert!(report.passed(), "{}", report.render());
}

#[test]
fn random_suite_is_reproducible_per_seed() {
    let cfg = SampleConfig::default();
    let mut rng_a = ChaCha8Rng::seed_from_u64(7);
    let mut rng_b = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let a = random_spec(&mut rng_a, &cfg).unwrap();
        let b = random_spec(&mut rng_b, &cfg).unwrap();
        assert_eq!(a.g(), b.g());
        assert_eq!(a.h(), b.h());
        assert_eq!(a.spans(), b.spans());
    }
}

#[test]
fn sampled_specs_respect_configured_bounds() {
    let cfg = SampleConfig { max_n: 8, max_k: 4 };
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..25 {
        let spec = random_spec(&mut rng, &cfg).unwrap();
        assert!(spec.n() >= 4 && spec.n() <= 8);
        assert!(spec.k() >= 1 && spec.k() <= 4);
        assert!(spec.validate().is_valid());
        let report = emsgm::is_emsgm(spec.spans());
        assert!(report.holds(), "sampled spans form an e-MSGM selection");
    }
}

#[test]
fn complexity_formulas_hold_on_every_construction() {
    let cfg = SampleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for _ in 0..20 {
        let spec = random_spec(&mut rng, &cfg).unwrap();
        let built: Vec<Trellis> = vec![
            bcjr::build_tbbcjr(&spec).unwrap(),
            tbtrellis::algebraic::build_algebraic(&spec).unwrap(),
            kv::build_product(&spec).unwrap(),
            kv::build_kv_algebraic(&spec).unwrap(),
            emsgm::build_emsgm(&spec).unwrap(),
        ];
        for trellis in &built {
            let report = metrics::compare(&spec, trellis).unwrap();
            assert!(report.holds(), "{}", report.render());
            assert!(trellis.is_reduced().is_reduced());
        }
    }
}

#[test]
fn trellis_json_round_trips_on_random_builds() {
    let cfg = SampleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1CE);
    for _ in 0..10 {
        let spec = random_spec(&mut rng, &cfg).unwrap();
        let trellis = bcjr::build_tbbcjr(&spec).unwrap();
        let text = trellis.to_json();
        let back = Trellis::from_json(&text).unwrap();
        assert!(trellis.identical(&back));
        assert_eq!(text, back.to_json(), "serialization is stable");
    }
}

#[test]
fn full_check_suite_passes_on_fresh_draws() {
    let cfg = SampleConfig { max_n: 9, max_k: 4 };
    let mut rng = ChaCha8Rng::seed_from_u64(0xFEED);
    for _ in 0..15 {
        let spec = random_spec(&mut rng, &cfg).unwrap();
        let report = run_suite(&spec);
        assert!(report.passed(), "{}", report.render());
    }
}
