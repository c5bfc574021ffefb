//! Canonical and random states.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::repr::{check_qubits, DensityState, HermitianOperator};
use crate::{CMatrix, C64};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A pure state given either per qubit (`0`, `1`, `+`, `-`) or as explicit
/// amplitudes in the computational basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KetSpec {
    Symbols(String),
    Amplitudes(Vec<C64>),
}

impl KetSpec {
    pub fn symbols(s: impl Into<String>) -> Self {
        KetSpec::Symbols(s.into())
    }

    /// Normalized amplitude vector.
    pub fn amplitudes(&self) -> Result<DVector<C64>> {
        match self {
            KetSpec::Symbols(s) => {
                if s.is_empty() {
                    return arg("empty ket");
                }
                let mut v = DVector::from_element(1, C64::new(1.0, 0.0));
                for ch in s.chars() {
                    let (a, b) = match ch {
                        '0' => (1.0, 0.0),
                        '1' => (0.0, 1.0),
                        '+' => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
                        '-' => (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
                        other => return arg(format!("unknown ket symbol '{other}'")),
                    };
                    let q = DVector::from_vec(vec![C64::new(a, 0.0), C64::new(b, 0.0)]);
                    v = v.kronecker(&q);
                }
                Ok(v)
            }
            KetSpec::Amplitudes(a) => {
                let v = DVector::from_column_slice(a);
                let norm = v.norm();
                if (norm - 1.0).abs() > 1e-12 {
                    return arg(format!("ket has norm {norm}, expected 1"));
                }
                Ok(v)
            }
        }
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn pure_state(k: &KetSpec) -> Result<DensityState> {
    let v = k.amplitudes()?;
    projector(&v)
}

fn projector(v: &DVector<C64>) -> Result<DensityState> {
    let d = v.len();
    if d < 2 || !d.is_power_of_two() {
        return arg(format!("ket length {d} is not a power of two"));
    }
    let n = d.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(DensityState::from_parts(n, v * v.adjoint()))
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_phi_plus() -> DensityState {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    pure_state(&KetSpec::Amplitudes(vec![h, z, z, h])).expect("normalized")
}

/// The four product kets `|01+⟩, |1+0⟩, |+01⟩, |−−−⟩` of the three-qubit
/// unextendible product basis.
pub const UPB_KETS: [&str; 4] = ["01+", "1+0", "+01", "---"];

pub fn upb_kets() -> Vec<DVector<C64>> {
    UPB_KETS
        .iter()
        .map(|s| KetSpec::symbols(*s).amplitudes().expect("valid symbols"))
        .collect()
}

/// Uniform mixture of the four UPB kets.
pub fn upb_separable() -> DensityState {
    let mut m = CMatrix::zeros(8, 8);
    for v in upb_kets() {
        m += &v * v.adjoint();
    }
    DensityState::from_parts(3, m * C64::new(0.25, 0.0))
}

/// `¼ (1₈ − Σ_j |ψ_j⟩⟨ψ_j|)`, the complement of [`upb_separable`].
pub fn upb_bound_entangled() -> DensityState {
    let comp = CMatrix::identity(8, 8) * C64::new(0.25, 0.0) - upb_separable().matrix();
    DensityState::from_parts(3, comp)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomMode {
    /// Projector onto a normalized vector of standard complex normals.
    HaarPure,
    /// Uniform-simplex spectrum in a Haar-random eigenbasis.
    MixedDirichlet,
    /// As `MixedDirichlet`, then the spectrum is pulled affinely toward
    /// `2^{-n}` until its maximum is at most the given cap.
    BoundedSpectrum(f64),
}

fn complex_normal(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_ket(n: usize, rng: &mut impl Rng) -> DVector<C64> {
    let d = 1usize << n;
    loop {
        let v = DVector::from_fn(d, |_, _| complex_normal(rng));
        let norm = v.norm();
        if norm > 1e-12 {
            return v / C64::new(norm, 0.0);
        }
    }
}

/// Haar-random unitary by Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let d = 1usize << n;
    'retry: loop {
        let g = CMatrix::from_fn(d, d, |_, _| complex_normal(rng));
        let mut q = CMatrix::zeros(d, d);
        for j in 0..d {
            let mut v = g.column(j).into_owned();
            // two passes keep the basis orthonormal to working precision
            for _ in 0..2 {
                for k in 0..j {
                    let qk = q.column(k);
                    let proj = qk.dotc(&v);
                    v -= qk * proj;
                }
            }
            let norm = v.norm();
            if norm < 1e-10 {
                continue 'retry;
            }
            q.set_column(j, &(v / C64::new(norm, 0.0)));
        }
        return q;
    }
}

fn dirichlet_spectrum(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

fn with_spectrum(n: usize, spectrum: &[f64], rng: &mut impl Rng) -> DensityState {
    let u = random_unitary(n, rng);
    let d = 1usize << n;
    let mut scaled = u.clone();
    for (j, &lam) in spectrum.iter().enumerate() {
        for i in 0..d {
            scaled[(i, j)] *= lam;
        }
    }
    let m = &scaled * u.adjoint();
    // exact Hermitian symmetry
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityState::from_parts(n, m)
}

/// Random state from the given ensemble; deterministic in the RNG state.
pub fn random_density(n: usize, mode: RandomMode, rng: &mut impl Rng) -> Result<DensityState> {
    check_qubits(n)?;
    let d = 1usize << n;
    let floor = 1.0 / d as f64;
    match mode {
        RandomMode::HaarPure => projector(&random_ket(n, rng)),
        RandomMode::MixedDirichlet => Ok(with_spectrum(n, &dirichlet_spectrum(d, rng), rng)),
        RandomMode::BoundedSpectrum(cap) => {
            if !(cap > floor && cap <= 1.0) {
                return arg(format!("spectrum cap {cap} outside ({floor}, 1]"));
            }
            let mut spec = dirichlet_spectrum(d, rng);
            let max = spec.iter().copied().fold(0.0, f64::max);
            if max > cap {
                let t = (cap - floor) / (max - floor);
                for x in spec.iter_mut() {
                    *x = floor + t * (*x - floor);
                }
            }
            Ok(with_spectrum(n, &spec, rng))
        }
    }
}

/// Random state with a prescribed spectrum (must be a probability vector).
pub fn random_with_spectrum(spectrum: &[f64], rng: &mut impl Rng) -> Result<DensityState> {
    let d = spectrum.len();
    if d < 2 || !d.is_power_of_two() {
        return arg("spectrum length must be a power of two");
    }
    if spectrum.iter().any(|x| *x < 0.0) || (spectrum.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return arg("spectrum must be a probability vector");
    }
    let n = d.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(with_spectrum(n, spectrum, rng))
}

/// `(1 − w) 1/2^n + w ρ`.
pub fn remix(rho: &HermitianOperator, w: f64) -> Result<DensityState> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Argument(format!("remix weight {w} outside [0, 1]")));
    }
    let d = rho.dim();
    let m = CMatrix::identity(d, d) * C64::new((1.0 - w) / d as f64, 0.0)
        + rho.matrix() * C64::new(w, 0.0);
    DensityState::from_operator(HermitianOperator::new(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::{max_abs_diff, maximally_mixed};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pure_state_examples() {
        let z = pure_state(&KetSpec::symbols("0")).unwrap();
        assert_abs_diff_eq!(z.matrix()[(0, 0)].re, 1.0);
        assert_abs_diff_eq!(z.matrix()[(1, 1)].re, 0.0);

        let p = pure_state(&KetSpec::symbols("+")).unwrap();
        for v in p.matrix().iter() {
            assert_abs_diff_eq!(v.re, 0.5, epsilon = 1e-15);
        }

        let b = bell_phi_plus();
        for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_abs_diff_eq!(b.matrix()[(r, c)].re, 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(b.purity(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn unnormalized_ket_rejected() {
        let v = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        assert!(matches!(pure_state(&KetSpec::Amplitudes(v)), Err(Error::Argument(_))));
        assert!(pure_state(&KetSpec::symbols("0x")).is_err());
    }

    #[test]
    fn upb_gram_matrix() {
        // Frozen from the explicit per-qubit overlaps of the four kets:
        // ⟨0|1⟩=0, ⟨0|±⟩=1/√2, ⟨1|±⟩=±1/√2, ⟨+|−⟩=0.
        let kets = upb_kets();
        for i in 0..4 {
            for j in 0..4 {
                let g = kets[i].dotc(&kets[j]);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(g.norm(), expect, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn upb_separable_properties() {
        let rho = upb_separable();
        assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-15);
        // four orthonormal kets with weight 1/4 each
        assert_abs_diff_eq!(rho.purity(), 0.25, epsilon = 1e-15);
        assert_eq!(crate::spectral::rank(rho.matrix(), 1e-10).unwrap(), 4);
    }

    #[test]
    fn upb_bound_entangled_properties() {
        let rho = upb_bound_entangled();
        assert!(rho.min_eig() >= -1e-12);
        assert_eq!(crate::spectral::rank(rho.matrix(), 1e-10).unwrap(), 4);
        for k in upb_kets() {
            let e = (k.adjoint() * rho.matrix() * &k)[(0, 0)];
            assert_abs_diff_eq!(e.norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn haar_pure_has_unit_purity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            let rho = random_density(n, RandomMode::HaarPure, &mut rng).unwrap();
            assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bounded_spectrum_respects_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=4 {
            let cap = 2.0 / (1 << n) as f64;
            for _ in 0..50 {
                let rho = random_density(n, RandomMode::BoundedSpectrum(cap), &mut rng).unwrap();
                assert!(rho.max_eig() <= cap + 1e-12);
                assert!(rho.min_eig() >= -1e-12);
            }
        }
        assert!(random_density(2, RandomMode::BoundedSpectrum(0.25), &mut rng).is_err());
        assert!(random_density(2, RandomMode::BoundedSpectrum(1.5), &mut rng).is_err());
    }

    #[test]
    fn dirichlet_mean_is_maximally_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 2;
        let trials = 10_000;
        let mut acc = CMatrix::zeros(4, 4);
        for _ in 0..trials {
            acc += random_density(n, RandomMode::MixedDirichlet, &mut rng).unwrap().matrix();
        }
        acc /= C64::new(trials as f64, 0.0);
        assert!(max_abs_diff(&acc, maximally_mixed(n).matrix()) < 5e-2);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=6 {
            let u = random_unitary(n, &mut rng);
            let d = 1 << n;
            assert!(max_abs_diff(&(&u * u.adjoint()), &CMatrix::identity(d, d)) < 1e-12);
        }
    }

    #[test]
    fn remix_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density(2, RandomMode::MixedDirichlet, &mut rng).unwrap();
        assert!(remix(&rho, 0.0).unwrap().max_abs_diff(&maximally_mixed(2)) < 1e-15);
        assert!(remix(&rho, 1.0).unwrap().max_abs_diff(&rho) < 1e-15);
        let direct = (CMatrix::identity(4, 4) * C64::new(0.5, 0.0) + rho.matrix()) / C64::new(3.0, 0.0);
        assert!(max_abs_diff(remix(&rho, 1.0 / 3.0).unwrap().matrix(), &direct) < 1e-14);
        assert!(remix(&rho, 1.5).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_density(3, RandomMode::MixedDirichlet, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = random_density(3, RandomMode::MixedDirichlet, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }
}
