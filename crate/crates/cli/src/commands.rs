use clap::Args;
use qreflect_core::entanglement::{
    ccn_test, complement, concurrence, partial_reflection_test, ppt_test, reduction_criterion,
    total_reflection_feasible, CriterionReport, Verdict,
};
use qreflect_core::io::read_state;
use qreflect_core::maps::table1 as table1_masks;
use qreflect_core::spectral::rank;
use qreflect_core::states::{pure_state, upb_bound_entangled, upb_separable, KetSpec, UPB_KETS};
use qreflect_core::suite::{self, SuiteConfig};
use qreflect_core::{DensityState, Error, QubitSet, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Outcome;

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// State file (JSON).
    pub file: String,
    /// Partial-transpose test on the given qubits, e.g. `A` or `1,3`.
    #[arg(long, value_name = "SUBSET")]
    pub ppt: Vec<String>,
    /// Computable cross-norm for the cut `SUBSET | rest` (default `A`).
    #[arg(long, value_name = "SUBSET", num_args = 0..=1, default_missing_value = "A")]
    pub ccn: Option<String>,
    /// Two-qubit concurrence.
    #[arg(long)]
    pub concurrence: bool,
    /// Nonlocal reflection of the given qubits followed by a PSD check.
    #[arg(long, value_name = "SUBSET")]
    pub reflect: Vec<String>,
    /// Total-reflection feasibility flags.
    #[arg(long)]
    pub feasible: bool,
    /// Reduction criterion tracing out the given qubits.
    #[arg(long, value_name = "SUBSET")]
    pub reduction: Vec<String>,
}

impl AnalyzeArgs {
    fn any_selected(&self) -> bool {
        !self.ppt.is_empty()
            || self.ccn.is_some()
            || self.concurrence
            || !self.reflect.is_empty()
            || self.feasible
            || !self.reduction.is_empty()
    }
}

fn sign(s: i8) -> &'static str {
    if s > 0 {
        "+"
    } else {
        "-"
    }
}

pub fn table1(plain: bool) -> Outcome {
    let cols = table1_masks();
    let labels: Vec<&str> = cols.iter().map(|(l, _)| *l).collect();
    let counts: Vec<usize> = cols.iter().map(|(_, m)| m.sign_change_count()).collect();
    let rows: Vec<Value> = (0..16)
        .map(|l| {
            json!({
                "index": format!("{}{}", l / 4, l % 4),
                "signs": cols.iter().map(|(_, m)| m.signs()[l]).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut out = Outcome::new(json!({"columns": labels, "rows": rows, "sign_changes": counts}));
    if plain {
        let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1) + 2;
        let mut text = format!("{:<6}", "jk");
        for l in &labels {
            text += &format!("{l:<width$}");
        }
        text = text.trim_end().to_string() + "\n";
        for l in 0..16 {
            let mut line = format!("{:<6}", format!("{}{}", l / 4, l % 4));
            for (_, m) in &cols {
                line += &format!("{:<width$}", sign(m.signs()[l]));
            }
            text += line.trim_end();
            text += "\n";
        }
        let mut line = format!("{:<6}", "#");
        for c in &counts {
            line += &format!("{c:<width$}");
        }
        text += line.trim_end();
        text += "\n";
        out.plain = Some(text);
    }
    out
}

fn subset(text: &str) -> Result<QubitSet> {
    QubitSet::parse(text)
}

pub fn analyze(args: &AnalyzeArgs, tol: f64) -> Result<Outcome> {
    let bytes = std::fs::read(&args.file)
        .map_err(|e| Error::Format(format!("cannot read '{}': {e}", args.file)))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::Format(format!("'{}' is not UTF-8", args.file)))?;
    let (op, seed) = read_state(&text)?;
    let rho = DensityState::from_operator(op)?;
    let n = rho.n();

    let mut reports: Vec<CriterionReport> = Vec::new();
    if args.any_selected() {
        for s in &args.ppt {
            reports.push(ppt_test(&rho, &subset(s)?, tol)?);
        }
        if let Some(s) = &args.ccn {
            reports.push(ccn_test(&rho, &subset(s)?, tol)?);
        }
        if args.concurrence {
            let c = concurrence(&rho)?;
            let verdict = if c > tol { Verdict::Entangled } else { Verdict::SeparableConsistent };
            reports.push(CriterionReport::new("concurrence", verdict, c, QubitSet::new([0]), tol));
        }
        for s in &args.reflect {
            reports.push(partial_reflection_test(&rho, &subset(s)?, tol)?);
        }
        if args.feasible {
            reports.push(total_reflection_feasible(&rho, tol));
        }
        for s in &args.reduction {
            reports.push(reduction_criterion(&rho, &subset(s)?, tol)?);
        }
    } else {
        // default: every single-qubit PPT cut plus feasibility
        if n > 1 {
            for q in 0..n {
                reports.push(ppt_test(&rho, &QubitSet::new([q]), tol)?);
            }
        }
        reports.push(total_reflection_feasible(&rho, tol));
    }

    let mut out = Outcome::new(json!({
        "file": args.file,
        "n": n,
        "purity": rho.purity(),
        "reports": reports,
    }));
    out.input_digest = Some(hex::encode(Sha256::digest(&bytes)));
    out.seed = seed;
    Ok(out)
}

pub fn upb_demo(tol: f64) -> Result<Outcome> {
    let sep = upb_separable();
    let reflected = complement(&sep);
    let min = reflected.min_eig();
    let is_density = min >= -tol;
    let cuts = (0..3)
        .map(|q| ppt_test(&reflected, &QubitSet::new([q]), tol))
        .collect::<Result<Vec<_>>>()?;
    let components: Vec<Value> = UPB_KETS
        .iter()
        .map(|k| {
            let p = pure_state(&KetSpec::symbols(*k))?;
            let m = complement(&p).min_eig();
            Ok(json!({"ket": k, "reflected_min_eig": m, "is_density": m >= -tol}))
        })
        .collect::<Result<Vec<_>>>()?;
    let chain_holds = is_density
        && cuts.iter().all(|c| c.verdict == Verdict::SeparableConsistent)
        && components.iter().all(|c| c["is_density"] == false);
    let payload = json!({
        "separable": {
            "kets": UPB_KETS,
            "purity": sep.purity(),
            "rank": rank(sep.matrix(), tol)?,
        },
        "reflection": {
            "min_eig": min,
            "is_density": is_density,
            "rank": rank(reflected.matrix(), tol)?,
            "max_abs_diff_from_bound_entangled": reflected.max_abs_diff(&upb_bound_entangled()),
        },
        "ppt_cuts": cuts,
        "components": components,
        "verdict": if is_density { "reflection is a density" } else { "reflection is not a density" },
        "chain_holds": chain_holds,
    });
    Ok(Outcome::new(payload))
}

pub fn prop(seed: u64, trials: usize, inject_fault: bool) -> Result<Outcome> {
    let report = suite::run(&SuiteConfig { seed, trials, inject_fault })?;
    let failed: Vec<String> = report.failures().map(|f| f.name.clone()).collect();
    let mut out = Outcome::new(serde_json::to_value(&report).expect("plain struct"));
    out.seed = Some(seed);
    if !failed.is_empty() {
        out.failure = Some(format!("invariant failures: {}", failed.join(", ")));
    }
    Ok(out)
}
