#![allow(dead_code)]

use std::path::PathBuf;

use qreflect_core::entanglement::complement;
use qreflect_core::io::{read_state, write_state, StateFormat};
use qreflect_core::repr::maximally_mixed;
use qreflect_core::states::{
    bell_phi_plus, pure_state, random_density, upb_bound_entangled, upb_separable, KetSpec,
    RandomMode,
};
use qreflect_core::HermitianOperator;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn load(name: &str) -> (HermitianOperator, Option<u64>) {
    let path = fixture_dir().join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    read_state(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Mixed two-qubit state whose purity satisfies the necessary bound while
/// its total reflection is not PSD. Found by scanning seeds upward.
pub fn search_purity_counterexample() -> (u64, HermitianOperator) {
    for seed in 0u64.. {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(2, RandomMode::MixedDirichlet, &mut rng).unwrap();
        if rho.purity() <= 0.5 - 1e-3 && complement(&rho).min_eig() < -1e-3 {
            return (seed, rho.into());
        }
    }
    unreachable!()
}

pub fn counterexample_from_seed(seed: u64) -> HermitianOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density(2, RandomMode::MixedDirichlet, &mut rng).unwrap().into()
}

/// Every fixture as (file stem, state, seed).
pub fn generate_all() -> Vec<(&'static str, HermitianOperator, Option<u64>)> {
    let (seed, cx) = search_purity_counterexample();
    let pure = |s: &str| -> HermitianOperator { pure_state(&KetSpec::symbols(s)).unwrap().into() };
    vec![
        ("bell", bell_phi_plus().into(), None),
        ("maximally_mixed_2", maximally_mixed(2).into(), None),
        ("product_2", pure("0+"), None),
        ("product_3", pure("01+"), None),
        ("upb_sep", upb_separable().into(), None),
        ("upb_bound", upb_bound_entangled().into(), None),
        ("purity_counterexample", cx, Some(seed)),
    ]
}

pub fn write_all() {
    for (name, rho, seed) in generate_all() {
        let path = fixture_dir().join(format!("{name}.json"));
        std::fs::write(path, write_state(&rho, StateFormat::Hermitian, seed) + "\n").unwrap();
    }
}
