mod common;

use common::{counterexample_from_seed, generate_all, load, write_all};
use qreflect_core::entanglement::complement;
use qreflect_core::states::upb_kets;
use qreflect_core::C64;

#[test]
#[ignore = "rewrites the fixture files"]
fn regenerate_fixtures() {
    write_all();
}

#[test]
fn fixtures_match_generators() {
    for (name, rho, seed) in generate_all() {
        let (stored, stored_seed) = load(name);
        assert_eq!(stored_seed, seed, "{name}");
        assert_eq!(stored.matrix(), rho.matrix(), "{name}");
    }
}

#[test]
fn purity_counterexample_is_reproducible_from_its_seed() {
    let (rho, seed) = load("purity_counterexample");
    let again = counterexample_from_seed(seed.expect("seed recorded"));
    assert_eq!(again.matrix(), rho.matrix());
    assert!(rho.purity() <= 0.5);
    assert!(complement(&rho).min_eig() < -1e-6);
}

#[test]
fn upb_gram_matrix_is_pinned() {
    let text = std::fs::read_to_string(common::fixture_dir().join("upb_gram.json")).unwrap();
    let pinned: Vec<Vec<f64>> = serde_json::from_str(&text).unwrap();
    let kets = upb_kets();
    for i in 0..4 {
        for j in 0..4 {
            let g: C64 = kets[i].dotc(&kets[j]);
            assert!((g.re - pinned[i][j]).abs() < 1e-15 && g.im.abs() < 1e-15, "({i},{j})");
        }
    }
}
