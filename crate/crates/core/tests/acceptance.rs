//! Acceptance gate: one test per shipped claim, each printing a single
//! pass/fail line. Run with `--nocapture --test-threads=1` for the
//! ordered checklist.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tbtrellis::algebraic;
use tbtrellis::bcjr;
use tbtrellis::code::{parse_matrix, parse_span_list, CodeSpec};
use tbtrellis::emsgm;
use tbtrellis::gf2::{enumerate_space, kernel_basis, kernel_set, multiply, BitMatrix, BitVector};
use tbtrellis::kv;
use tbtrellis::metrics;
use tbtrellis::sample::{random_spec, SampleConfig};
use tbtrellis::trellis::{IsoOutcome, Trellis};
use tbtrellis::verify::{run_random_suite, run_suite, DEFAULT_ISO_BUDGET};

const CORPUS_SEED: u64 = 0x5EED;
const CORPUS_SIZE: usize = 100;

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(name: &str) -> String {
    let path = fixture_dir().join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

fn load_spec(dir: &str) -> CodeSpec {
    let g = parse_matrix(&read(&format!("{dir}/g.txt"))).unwrap();
    let h = parse_matrix(&read(&format!("{dir}/h.txt"))).unwrap();
    let spans = parse_span_list(&read(&format!("{dir}/spans.txt")), g.cols()).unwrap();
    CodeSpec::new(g, h, spans).unwrap()
}

fn corpus() -> Vec<CodeSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let cfg = SampleConfig::default();
    (0..CORPUS_SIZE)
        .map(|_| random_spec(&mut rng, &cfg).unwrap())
        .collect()
}

fn bv(s: &str) -> BitVector {
    s.parse().unwrap()
}

fn mat(rows: &[&str]) -> BitMatrix {
    BitMatrix::from_rows(&rows.iter().map(|r| bv(r)).collect::<Vec<_>>()).unwrap()
}

fn words(list: &str) -> BTreeSet<BitVector> {
    list.split_whitespace().map(bv).collect()
}

fn report(number: u32, name: &str, ok: bool, detail: &str) {
    if ok {
        println!("criterion {number:02}: pass  {name}");
    } else {
        println!("criterion {number:02}: FAIL  {name}  ({detail})");
    }
    assert!(ok, "criterion {number:02} {name}: {detail}");
}

fn sorted_code(gen: &BitMatrix) -> Vec<BitVector> {
    let mut out: Vec<BitVector> = enumerate_space(gen.rows())
        .unwrap()
        .into_iter()
        .map(|u| multiply(&u, gen).unwrap())
        .collect();
    out.sort();
    out
}

/// Every cycle spells a distinct codeword and every codeword appears.
fn label_code_is_exact(trellis: &Trellis, gen: &BitMatrix) -> bool {
    let labels = match trellis.label_code() {
        Ok(l) => l,
        Err(_) => return false,
    };
    labels.len() == 1 << gen.rows() && labels == sorted_code(gen)
}

#[test]
fn criterion_01_displacement_tables() {
    let spec = load_spec("hamming74");
    let alt = load_spec("hamming74_alt");
    let clock = Instant::now();
    let theta = bcjr::displacement_matrix(&spec).unwrap();
    let theta_alt = bcjr::displacement_matrix(&alt).unwrap();
    let elapsed = clock.elapsed();
    let ok = *theta.matrix() == mat(&["000", "000", "000", "101"])
        && *theta_alt.matrix() == mat(&["000", "000", "111", "101"])
        && elapsed.as_micros() < 1000;
    report(
        1,
        "displacement tables reproduced",
        ok,
        &format!("rows {:?} / {:?}, {elapsed:?}", theta.matrix(), theta_alt.matrix()),
    );
}

#[test]
fn criterion_02_state_matrix_tables() {
    let spec = load_spec("hamming74");
    let chain = bcjr::state_matrices(&spec).unwrap();
    let expected = [
        ["000", "000", "000", "101"],
        ["000", "110", "000", "011"],
        ["000", "001", "000", "011"],
        ["000", "001", "011", "000"],
        ["001", "000", "010", "000"],
        ["101", "000", "010", "000"],
        ["101", "000", "000", "000"],
    ];
    let states_ok = expected
        .iter()
        .enumerate()
        .all(|(i, rows)| *chain.matrix(i) == mat(rows));

    let diagonals = ["0001", "0101", "0101", "0110", "1010", "1010", "1000"];
    let diag_chain = kv::kv_state_matrices(spec.spans());
    let diag_ok = diagonals.iter().enumerate().all(|(i, d)| {
        let flags: Vec<bool> = d.chars().map(|c| c == '1').collect();
        diag_chain.matrix(i) == BitMatrix::diagonal(&flags)
    });
    report(
        2,
        "state matrices bit-for-bit",
        states_ok && diag_ok,
        &format!("states ok {states_ok}, diagonals ok {diag_ok}"),
    );
}

#[test]
fn criterion_03_kernel_tables() {
    let kernels = [
        "0000 0010 0100 0110 1000 1010 1100 1110",
        "0000 0010 1000 1010",
        "0000 0010 1000 1010",
        "0000 0001 1000 1001",
        "0000 0001 0100 0101",
        "0000 0001 0100 0101",
        "0000 0001 0010 0011 0100 0101 0110 0111",
    ];
    let alt_kernels = [
        "0000 0100 1000 1100",
        "0000 0100",
        "0000 0010 0100 0110",
        "0000 0010",
        "0000 0001 0010 0011",
        "0000 0001 0010 0011",
        "0000 0001 1000 1001",
    ];
    let spec = load_spec("hamming74");
    let alt = load_spec("hamming74_alt");
    let chain = bcjr::state_matrices(&spec).unwrap();
    let alt_chain = bcjr::state_matrices(&alt).unwrap();
    let diag_chain = kv::kv_state_matrices(spec.spans());

    let mut ok = true;
    let mut detail = String::from("all levels match");
    for i in 0..7 {
        let got: BTreeSet<BitVector> = kernel_set(chain.matrix(i)).unwrap().into_iter().collect();
        let alt_got: BTreeSet<BitVector> =
            kernel_set(alt_chain.matrix(i)).unwrap().into_iter().collect();
        let diag_got: BTreeSet<BitVector> =
            diag_chain.kernel_set(i).unwrap().into_iter().collect();
        if got != words(kernels[i]) || alt_got != words(alt_kernels[i]) || diag_got != words(kernels[i])
        {
            ok = false;
            detail = format!("level {i} differs");
            break;
        }
    }
    report(3, "kernel lists reproduced at every level", ok, &detail);
}

#[test]
fn criterion_04_kernel_identity() {
    let spec = load_spec("hamming74");
    let fixture_ok = kv::check_lemma1(&spec).unwrap().all_equal();
    let mut violations = 0usize;
    for random in corpus() {
        if !kv::check_lemma1(&random).unwrap().all_equal() {
            violations += 1;
        }
    }
    report(
        4,
        "diagonal and state kernels agree on fixture and 100 random specs",
        fixture_ok && violations == 0,
        &format!("fixture {fixture_ok}, violations {violations}"),
    );
}

#[test]
fn criterion_05_quotient_isomorphic_to_syndrome_trellis() {
    let mut failures = Vec::new();
    let mut specs = vec![load_spec("hamming74"), load_spec("hamming74_alt")];
    specs.extend(corpus());
    for (idx, spec) in specs.iter().enumerate() {
        let a = algebraic::build_algebraic(spec).unwrap();
        let b = bcjr::build_tbbcjr(spec).unwrap();
        match a.isomorphic(&b, DEFAULT_ISO_BUDGET) {
            Ok(IsoOutcome::Isomorphic(_)) => {}
            other => failures.push(format!("spec {idx}: {other:?}")),
        }
    }
    report(
        5,
        "quotient construction isomorphic to syndrome labels everywhere",
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_06_product_family_identical() {
    let spec = load_spec("hamming74");
    let quotient = kv::build_kv_algebraic(&spec).unwrap();
    let product = kv::build_product(&spec).unwrap();
    let direct = emsgm::build_emsgm(&spec).unwrap();
    let ok = quotient.identical(&product)
        && product.identical(&direct)
        && quotient.identical(&direct);
    report(
        6,
        "diagonal quotient, product and activity-set builds are ordinal-exact equal",
        ok,
        &format!(
            "quotient==product {}, product==direct {}",
            quotient.identical(&product),
            product.identical(&direct)
        ),
    );
}

#[test]
fn criterion_07_product_isomorphic_to_syndrome_trellis() {
    let mut failures = Vec::new();
    let mut specs = vec![load_spec("hamming74")];
    specs.extend(corpus());
    for (idx, spec) in specs.iter().enumerate() {
        let product = kv::build_product(spec).unwrap();
        let syndrome = bcjr::build_tbbcjr(spec).unwrap();
        match product.isomorphic(&syndrome, DEFAULT_ISO_BUDGET) {
            Ok(IsoOutcome::Isomorphic(_)) => {}
            other => failures.push(format!("spec {idx}: {other:?}")),
        }
    }
    report(
        7,
        "product trellis isomorphic to syndrome labels everywhere",
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_08_complexity_formulas() {
    let spec = load_spec("hamming74");
    let profile_ok = bcjr::build_tbbcjr(&spec).unwrap().profile().vertex_counts
        == vec![2, 4, 4, 4, 4, 4, 2];

    let mut failures = Vec::new();
    let mut specs = vec![spec, load_spec("hamming74_alt")];
    specs.extend(corpus());
    for (idx, spec) in specs.iter().enumerate() {
        let built = [
            bcjr::build_tbbcjr(spec).unwrap(),
            algebraic::build_algebraic(spec).unwrap(),
            kv::build_product(spec).unwrap(),
            kv::build_kv_algebraic(spec).unwrap(),
            emsgm::build_emsgm(spec).unwrap(),
        ];
        for trellis in &built {
            let report = metrics::compare(spec, trellis).unwrap();
            if !report.holds() {
                failures.push(format!("spec {idx}"));
            }
        }
    }
    report(
        8,
        "vertex, edge and degree formulas match counts on every build",
        profile_ok && failures.is_empty(),
        &format!("fixture profile ok {profile_ok}; mismatches {}", failures.join("; ")),
    );
}

#[test]
fn criterion_09_duality_values() {
    let spec = load_spec("hamming74");
    let dual_counts_ok = metrics::check_dual_vertex_equality(&spec).unwrap().holds();
    let primal = bcjr::build_tbbcjr(&spec).unwrap();
    let dual = bcjr::build_dual(&spec).unwrap();
    let built_ok = primal.profile().vertex_counts == dual.profile().vertex_counts;

    let chain = bcjr::state_matrices(&spec).unwrap();
    let dual_chain = chain.transposed();
    let d6 = kernel_basis(chain.matrix(6)).len();
    let d7 = kernel_basis(chain.matrix(7)).len();
    let e7 = kernel_basis(&chain.edge_matrix(spec.g(), 7).unwrap()).len();
    let dd6 = kernel_basis(dual_chain.matrix(6)).len();
    let dd7 = kernel_basis(dual_chain.matrix(7)).len();
    let de7 = kernel_basis(&dual_chain.edge_matrix(spec.h(), 7).unwrap()).len();
    let dims_ok = (d6, d7, e7) == (3, 3, 2) && (dd6, dd7, de7) == (2, 2, 2);

    let (n, k) = (spec.n(), spec.k());
    let lhs = k - e7;
    let rhs = (n - k + 1) + de7 - dd6 - dd7;
    let identity_ok = lhs == 2 && rhs == 2;

    report(
        9,
        "dual vertex counts and the published edge-dimension example",
        dual_counts_ok && built_ok && dims_ok && identity_ok,
        &format!(
            "kernel dims ({d6},{d7},{e7})/({dd6},{dd7},{de7}), identity {lhs}={rhs}"
        ),
    );
}

#[test]
fn criterion_10_alpha_beta_identities() {
    let spec = load_spec("hamming74");
    let dual_spans = parse_span_list(&read("hamming74/dual_spans.txt"), 7).unwrap();
    let table = emsgm::activity_table(spec.spans());
    let dual_table = emsgm::activity_table(&dual_spans);
    let duality = metrics::check_alpha_beta_duality(&table, &dual_table).unwrap();

    let dual_g = parse_matrix(&read("hamming74/dual_h.txt")).unwrap();
    let edges = metrics::check_edge_dimension_duality(&spec, &dual_g, &dual_spans).unwrap();
    report(
        10,
        "activity-count identities hold at every position",
        duality.holds() && edges.holds(),
        &format!("alpha/beta {}, edge dims {}", duality.holds(), edges.holds()),
    );
}

#[test]
fn criterion_11_label_code_soundness() {
    let mut failures = Vec::new();
    let mut specs = vec![load_spec("hamming74"), load_spec("hamming74_alt")];
    specs.extend(corpus());
    for (idx, spec) in specs.iter().enumerate() {
        let built = [
            bcjr::build_tbbcjr(spec).unwrap(),
            algebraic::build_algebraic(spec).unwrap(),
            kv::build_product(spec).unwrap(),
            kv::build_kv_algebraic(spec).unwrap(),
            emsgm::build_emsgm(spec).unwrap(),
        ];
        if !built.iter().all(|t| label_code_is_exact(t, spec.g())) {
            failures.push(format!("spec {idx} primal"));
        }
        let dual = bcjr::build_dual(spec).unwrap();
        if !label_code_is_exact(&dual, spec.h()) {
            failures.push(format!("spec {idx} dual"));
        }
    }
    report(
        11,
        "every build spells exactly the code, duals spell the dual code",
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_12_performance_envelope() {
    let clock = Instant::now();
    for dir in ["hamming74", "hamming74_alt"] {
        let suite = run_suite(&load_spec(dir));
        assert!(suite.passed(), "{}", suite.render());
    }
    let random = run_random_suite(CORPUS_SEED, CORPUS_SIZE, &SampleConfig::default()).unwrap();
    let elapsed = clock.elapsed();
    report(
        12,
        "golden plus 100-spec random suite under 60 seconds",
        random.passed() && elapsed.as_secs() < 60,
        &format!("suite passed {}, took {elapsed:?}", random.passed()),
    );
}
