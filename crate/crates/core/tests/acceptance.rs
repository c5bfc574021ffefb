//! One PASS/FAIL line per acceptance criterion at the pinned tolerances.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qreflect_core::entanglement::{
    ccn, ccn_via_stokes, complement, feasibility_flags, ppt_test,
};
use qreflect_core::maps::{
    apply_local_orthogonal, choi_matrix, eq13_masks, mask_composite_c, mask_pair_eq13,
    mask_partial_transpose, mask_spin_flip, mask_total_reflection, operator_sum_composite_c,
    operator_sum_onequbit, random_reflection, reflection_t, relaxed_reflection,
    relaxed_reflection_linear, spin_flip_conjugation, spin_flipped_partner, table1,
    LocalOrthogonalMap, OneQubitReflection,
};
use qreflect_core::repr::{
    hs_inner, max_abs_diff, stokes_matrix_from_real_density, tensor_product,
    to_real_density, to_stokes, QubitSet, RealDensityMatrix,
};
use qreflect_core::spectral::eigvalsh;
use qreflect_core::states::{
    bell_phi_plus, pure_state, random_density, upb_bound_entangled, upb_separable, KetSpec,
    RandomMode,
};
use qreflect_core::{CMatrix, HermitianOperator, SignMask, C64, PSD_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(2024);
    r.set_stream(stream);
    r
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {:.1} ms", took.as_secs_f64() * 1e3))
}

// Published sign table: rows are the 16 Stokes indices, columns the seven maps.
const TABLE1: [&str; 16] = [
    "+++++++", "++++---", "+--+---", "++++---",
    "+++-+--", "+++--+-", "+----+-", "+++--+-",
    "-+--+--", "-+---+-", "--+--+-", "-+---+-",
    "+++-+--", "+++--+-", "+----+-", "+++--+-",
];

fn c1_table1() -> Outcome {
    timed(Duration::from_secs(1), || {
        let cols = table1();
        for (row, expect) in TABLE1.iter().enumerate() {
            let got: String = cols.iter().map(|(_, m)| if m.signs()[row] > 0 { '+' } else { '-' }).collect();
            ensure(&got == expect, format!("row {row}: {got} != {expect}"))?;
        }
        let counts: Vec<usize> = cols.iter().map(|(_, m)| m.sign_change_count()).collect();
        ensure(counts == [4, 4, 6, 12, 12, 6, 15], format!("counts {counts:?}"))?;
        Ok(format!("112 cells, counts {counts:?}"))
    })
}

fn c2_pure_spectrum() -> Outcome {
    let mut r = rng(2);
    let mask = mask_total_reflection(2, &QubitSet::all(2)).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let rho = random_density(2, RandomMode::HaarPure, &mut r).unwrap();
        let ev = mask.apply(&rho).unwrap().eigenvalues();
        for (a, b) in ev.iter().zip([0.5, 0.5, 0.5, -0.5]) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-10, format!("max deviation {worst:e}"))?;
    Ok(format!("200 states, max deviation {worst:.1e}"))
}

fn c3_upb_chain() -> Outcome {
    timed(Duration::from_secs(1), || {
        let sep = upb_separable();
        let refl = complement(&sep);
        let min = refl.min_eig();
        ensure(min >= -1e-12, format!("reflection min eig {min:e}"))?;
        ensure(refl.max_abs_diff(&upb_bound_entangled()) < 1e-15, "reflection differs from the bound entangled state")?;
        for q in 0..3 {
            let w = ppt_test(&refl, &QubitSet::new([q]), PSD_TOL).unwrap().witness;
            ensure(w >= -1e-12, format!("PPT cut {q}: {w:e}"))?;
        }
        let mut comps = Vec::new();
        for s in qreflect_core::states::UPB_KETS {
            let m = complement(&pure_state(&KetSpec::symbols(s)).unwrap()).min_eig();
            ensure(m < -1e-6, format!("component {s}: {m:e}"))?;
            comps.push(m);
        }
        Ok(format!("min eig {min:.1e}, component min eigs {comps:?}"))
    })
}

/// Samples of criterion 4, reused by criterion 5.
fn bounded_samples() -> Vec<HermitianOperator> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let mut r = rng(4 + n as u64);
        let cap = 2.0 / (1u64 << n) as f64;
        for _ in 0..1000 {
            out.push(random_density(n, RandomMode::BoundedSpectrum(cap), &mut r).unwrap().into());
        }
    }
    out
}

fn c4_theorem2(samples: &[HermitianOperator]) -> Outcome {
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for rho in samples {
        let cap = 2.0 / rho.dim() as f64;
        ensure(rho.max_eig() <= cap + 1e-12, "sample violates the hypothesis")?;
        let m = mask_total_reflection(rho.n(), &QubitSet::all(rho.n())).unwrap().apply(rho).unwrap().min_eig();
        worst = worst.min(m);
        if m < -1e-10 {
            violations += 1;
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok(format!("{} states, 0 violations, lowest min eig {worst:.1e}", samples.len()))
}

fn c5_corollaries(samples: &[HermitianOperator]) -> Outcome {
    for rho in samples {
        let f = feasibility_flags(rho, PSD_TOL);
        if f.exact {
            let bound = 2.0 / rho.dim() as f64;
            ensure(rho.purity() <= bound + 1e-12, format!("purity {} above bound", rho.purity()))?;
            let rank = rho.eigenvalues().iter().filter(|v| **v > PSD_TOL).count();
            ensure(rank >= rho.dim() / 2, format!("rank {rank}"))?;
        }
    }
    let (cx, seed) = common::load("purity_counterexample");
    let f = feasibility_flags(&cx, PSD_TOL);
    ensure(f.purity_bound && !f.exact, format!("counterexample flags {f:?}"))?;
    Ok(format!(
        "{} samples; counterexample seed {:?}: purity {:.4}, reflection min eig {:.4}",
        samples.len(),
        seed,
        cx.purity(),
        complement(&cx).min_eig()
    ))
}

fn c6_ccn() -> Outcome {
    let mut r = rng(6);
    let a = QubitSet::new([0]);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let rho = random_density(2, RandomMode::MixedDirichlet, &mut r).unwrap();
        worst = worst.max((ccn_via_stokes(&to_stokes(&rho)).unwrap() - ccn(&rho, &a).unwrap()).abs());
    }
    ensure(worst <= 1e-10, format!("dual path gap {worst:e}"))?;
    let bell = ccn(&bell_phi_plus(), &a).unwrap();
    ensure((bell - 2.0).abs() <= 1e-10, format!("Bell {bell}"))?;
    let mut prod_worst: f64 = 0.0;
    for _ in 0..50 {
        let p = tensor_product(
            &random_density(1, RandomMode::HaarPure, &mut r).unwrap(),
            &random_density(1, RandomMode::HaarPure, &mut r).unwrap(),
        )
        .unwrap();
        prod_worst = prod_worst.max((ccn(&p, &a).unwrap() - 1.0).abs());
    }
    ensure(prod_worst <= 1e-10, format!("product deviation {prod_worst:e}"))?;
    Ok(format!("gap {worst:.1e}, Bell {bell:.12}, product deviation {prod_worst:.1e}"))
}

fn c7_operator_sums() -> Outcome {
    let mut r = rng(7);
    let t1 = mask_partial_transpose(1, &QubitSet::all(1)).unwrap();
    let s1 = mask_spin_flip(1, &QubitSet::all(1)).unwrap();
    let s2 = mask_spin_flip(2, &QubitSet::all(2)).unwrap();
    let c = mask_composite_c();
    let mut worst = [0.0f64; 4];
    for _ in 0..500 {
        let q = random_density(1, RandomMode::MixedDirichlet, &mut r).unwrap();
        let p = random_density(2, RandomMode::MixedDirichlet, &mut r).unwrap();
        let gaps = [
            operator_sum_onequbit(OneQubitReflection::Transpose, &q).unwrap().max_abs_diff(&t1.apply(&q).unwrap()),
            operator_sum_onequbit(OneQubitReflection::SpinFlip, &q)
                .unwrap()
                .max_abs_diff(&s1.apply(&q).unwrap())
                .max(spin_flip_conjugation(&q).unwrap().max_abs_diff(&s1.apply(&q).unwrap())),
            operator_sum_composite_c(&p).unwrap().max_abs_diff(&c.apply(&p).unwrap()),
            spin_flipped_partner(&p).unwrap().max_abs_diff(&s2.apply(&p).unwrap()),
        ];
        for (w, g) in worst.iter_mut().zip(gaps) {
            *w = w.max(g);
        }
    }
    ensure(worst.iter().all(|w| *w <= 1e-12), format!("gaps {worst:?}"))?;
    let shown: Vec<String> = worst.iter().map(|w| format!("{w:.1e}")).collect();
    Ok(format!("500 states; transpose/spin-flip/C/partner gaps [{}]", shown.join(", ")))
}

fn c8_reflection_class() -> Outcome {
    let mut r = rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_density(2, RandomMode::MixedDirichlet, &mut r).unwrap();
        let refl = random_reflection(&mut r);
        ensure(refl.determinant() < 0.0, "sampled rotation is not a reflection")?;
        let s = to_stokes(&rho);
        let apply = |m| {
            let map = LocalOrthogonalMap::identity(2).with_block(0, &m).unwrap();
            apply_local_orthogonal(&map, &s).unwrap().eigenvalues()
        };
        let (a, b) = (apply(refl), apply(reflection_t()));
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
    }
    ensure(worst <= 1e-9, format!("spectral gap {worst:e}"))?;
    Ok(format!("100 reflections, max spectral gap {worst:.1e}"))
}

fn c9_complement() -> Outcome {
    let mut r = rng(9);
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        for _ in 0..20 {
            let rho = random_density(n, RandomMode::MixedDirichlet, &mut r).unwrap();
            let d = rho.dim();
            let mean = (rho.matrix() + complement(&rho).matrix()) * C64::new(0.5, 0.0);
            let target = CMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
            worst = worst.max(max_abs_diff(&mean, &target));
        }
    }
    ensure(worst <= 1e-14, format!("deviation {worst:e}"))?;
    Ok(format!("n = 1..6, max deviation {worst:.1e}"))
}

fn c10_relaxed() -> Outcome {
    let mut r = rng(10);
    let ab = QubitSet::all(2);
    let mut lowest = f64::INFINITY;
    for _ in 0..1000 {
        let rho = random_density(2, RandomMode::MixedDirichlet, &mut r).unwrap();
        lowest = lowest.min(relaxed_reflection(&rho, &ab).unwrap().min_eig());
    }
    ensure(lowest >= -PSD_TOL, format!("output min eig {lowest:e}"))?;
    let choi = choi_matrix(2, |m| relaxed_reflection_linear(m, 2, &ab)).unwrap();
    let choi_min = *eigvalsh(&choi).unwrap().last().unwrap();
    ensure(choi_min < -1e-6, format!("Choi min eig {choi_min:e}"))?;
    Ok(format!("1000 outputs, lowest min eig {lowest:.3e}; Choi min eig {choi_min:.6}"))
}

fn c11_eq13() -> Outcome {
    let (on_real, on_stokes) = mask_pair_eq13();
    let mut r = rng(11);
    for _ in 0..200 {
        let rho = random_density(2, RandomMode::MixedDirichlet, &mut r).unwrap();
        let sigma = to_real_density(&to_stokes(&rho)).into_matrix();
        let lhs = stokes_matrix_from_real_density(&RealDensityMatrix::new(on_real.component_mul(&sigma)).unwrap()).unwrap();
        let rhs = on_stokes.component_mul(&stokes_matrix_from_real_density(&RealDensityMatrix::new(sigma).unwrap()).unwrap());
        ensure(lhs == rhs, "sign matrices not related by the reshuffle")?;
    }
    let (p1, p2) = eq13_masks();
    let mut found = Vec::new();
    for mask in [&p1, &p2] {
        let mut hit = None;
        for trial in 0..100 {
            let rho = random_density(2, RandomMode::HaarPure, &mut r).unwrap();
            let m = mask.apply(&rho).unwrap().min_eig();
            if m < -1e-6 {
                hit = Some((trial + 1, m));
                break;
            }
        }
        let (tries, m) = hit.ok_or(format!("{}: no negative eigenvalue in 100 states", mask.name()))?;
        found.push(format!("{} after {tries} ({m:.3})", mask.name()));
    }
    Ok(format!("relation exact on 200 states; negative output: {}", found.join(", ")))
}

fn all_masks() -> Vec<SignMask> {
    let mut out: Vec<SignMask> = table1().into_iter().map(|(_, m)| m).collect();
    out.push(mask_composite_c());
    let (p1, p2) = eq13_masks();
    out.extend([p1, p2]);
    for n in 1..=3usize {
        for bits in 1usize..(1 << n) {
            let s = QubitSet::new((0..n).filter(|q| bits >> q & 1 == 1));
            out.push(mask_partial_transpose(n, &s).unwrap());
            out.push(mask_spin_flip(n, &s).unwrap());
            out.push(mask_total_reflection(n, &s).unwrap());
        }
    }
    out
}

fn c12_symmetry_suite() -> Outcome {
    let mut r = rng(12);
    let masks = all_masks();
    let mut worst: f64 = 0.0;
    for mask in &masks {
        for _ in 0..20 {
            let a = random_density(mask.n(), RandomMode::MixedDirichlet, &mut r).unwrap();
            let b = random_density(mask.n(), RandomMode::MixedDirichlet, &mut r).unwrap();
            let (ma, mb) = (mask.apply(&a).unwrap(), mask.apply(&b).unwrap());
            worst = worst
                .max((ma.matrix().trace() - C64::new(1.0, 0.0)).norm())
                .max(max_abs_diff(ma.matrix(), &ma.matrix().adjoint()))
                .max((hs_inner(ma.matrix(), mb.matrix()) - hs_inner(a.matrix(), b.matrix())).abs());
        }
    }
    ensure(worst <= 1e-12, format!("invariant deviation {worst:e}"))?;

    let fixtures: Vec<HermitianOperator> =
        ["bell", "product_2", "product_3", "upb_sep"].iter().map(|f| common::load(f).0).collect();
    let mut nonlocal = 0;
    for n in 2..=3usize {
        for bits in 1usize..(1 << n) {
            if bits.count_ones() < 2 {
                continue;
            }
            let s = QubitSet::new((0..n).filter(|q| bits >> q & 1 == 1));
            let mask = mask_total_reflection(n, &s).unwrap();
            let violated = fixtures
                .iter()
                .filter(|f| f.n() == n)
                .any(|f| mask.apply(f).unwrap().min_eig() < -1e-6);
            ensure(violated, format!("{} keeps every fixture positive", mask.name()))?;
            nonlocal += 1;
        }
    }
    Ok(format!("{} masks, max deviation {worst:.1e}; {nonlocal} nonlocal reflections break positivity", masks.len()))
}

fn run(id: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    match outcome {
        Ok(detail) => {
            println!("criterion {id:>2} PASS  {title}: {detail}");
            true
        }
        Err(why) => {
            println!("criterion {id:>2} FAIL  {title}: {why}");
            false
        }
    }
}

fn main() -> ExitCode {
    let samples = bounded_samples();
    let results = [
        run(1, "sign table reproduction", c1_table1),
        run(2, "total-reflection spectrum of pure states", c2_pure_spectrum),
        run(3, "UPB reflection chain", c3_upb_chain),
        run(4, "spectral bound implies feasible reflection", || c4_theorem2(&samples)),
        run(5, "feasibility corollaries and purity counterexample", || c5_corollaries(&samples)),
        run(6, "cross-norm dual path", c6_ccn),
        run(7, "operator-sum equivalences", c7_operator_sums),
        run(8, "reflection class invariance", c8_reflection_class),
        run(9, "complement identity", c9_complement),
        run(10, "relaxed reflection positive but not CP", c10_relaxed),
        run(11, "reshuffle-related sign maps", c11_eq13),
        run(12, "norm and trace symmetry suite", c12_symmetry_suite),
    ];
    let passed = results.iter().filter(|r| **r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
