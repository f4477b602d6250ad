//! Sparse domination at desk scale: decompose, audit, and compare the maximal
//! pairing with the sparse form.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::ops::{IntervalZ, Signal};
use crate::report::{stream_rng, Check, ExperimentReport};
use crate::sparse::{
    audit_sparsity, build_admissible_tau, check_admissible, dyadic_maximal_pairing,
    sparse_decompose, sparse_form, DEFAULT_STOP_C, MAX_E,
};

const TAG_SPARSE: u64 = 4;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparseDemoParams {
    pub e_sizes: Vec<u64>,
    pub trials: u64,
    /// Background density of `f` on `2E`.
    pub density: f64,
    /// Number of dense clusters added to `f`.
    pub clusters: u32,
    pub c: f64,
    /// Exponent of both averages in the sparse form.
    pub p: f64,
    pub seed: u64,
}

impl Default for SparseDemoParams {
    fn default() -> Self {
        Self {
            e_sizes: (10..=14).map(|k| 1u64 << k).collect(),
            trials: 20,
            density: 1.0 / 32.0,
            clusters: 8,
            c: DEFAULT_STOP_C,
            p: 1.6,
            seed: 0,
        }
    }
}

/// `f`: background indicator on `2E` plus clusters of width up to `|E|/64`;
/// `g`: density-1/2 indicator on `E`.
fn random_inputs(p: &SparseDemoParams, e: IntervalZ, trial: u64) -> (Signal, Signal) {
    let mut rng = stream_rng(p.seed, (TAG_SPARSE << 56) ^ (e.len() << 20) ^ trial);
    let two_e = e.double();
    let mut f: Vec<f64> = two_e
        .iter()
        .map(|_| if rng.random_bool(p.density) { 1.0 } else { 0.0 })
        .collect();
    let wmax = (e.len() / 64).max(1);
    for _ in 0..p.clusters {
        let w = rng.random_range(1..=wmax) as usize;
        let at = rng.random_range(0..f.len() - w + 1);
        f[at..at + w].fill(1.0);
    }
    let g = e.iter().filter(|_| rng.random_bool(0.5));
    (
        Signal::new(two_e.a, f).expect("2E fits"),
        Signal::indicator(g),
    )
}

pub const SPARSE_COLUMNS: [&str; 10] = [
    "E",
    "trial",
    "intervals",
    "min_witness_density",
    "max_children_fraction",
    "witnesses_ok",
    "tau_admissible",
    "lhs",
    "rhs",
    "ratio",
];

pub fn run_sparse_demo(p: &SparseDemoParams) -> Result<ExperimentReport> {
    if p.e_sizes.is_empty() {
        return Err(domain!("e_sizes is empty"));
    }
    for &s in &p.e_sizes {
        if !s.is_power_of_two() || s < 64 || s > MAX_E {
            return Err(domain!("|E| = {s} must be a power of two in [64, {MAX_E}]"));
        }
    }
    if !(0.0..=1.0).contains(&p.density) || !(p.p >= 1.0) {
        return Err(domain!("need density in [0, 1] and p >= 1"));
    }
    let mut rep = ExperimentReport::new("sparse-demo", p, &SPARSE_COLUMNS)?;
    let mut all_ok = true;
    for &size in &p.e_sizes {
        let e = IntervalZ::with_len(0, size)?;
        let rows: Vec<Vec<f64>> = (0..p.trials)
            .into_par_iter()
            .map(|t| -> Result<Vec<f64>> {
                let (f, g) = random_inputs(p, e, t);
                // Invariant failures (children mass, depth) surface as errors here.
                let col = sparse_decompose(e, &f, &g, p.c)?;
                let audit = audit_sparsity(&col);
                let children = col
                    .items()
                    .iter()
                    .map(|it| 1.0 - it.witness.len() as f64 / it.interval().len() as f64)
                    .fold(0.0, f64::max);
                let tau = build_admissible_tau(e, &f, p.c)?;
                let adm = check_admissible(&tau, &f, p.c)?;
                let lhs = dyadic_maximal_pairing(e, &f, &g)?;
                let rhs = sparse_form(&col, &f, &g, p.p, p.p)?;
                let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
                let wit = audit.witnesses_inside && audit.witnesses_disjoint;
                Ok(vec![
                    size as f64,
                    t as f64,
                    col.len() as f64,
                    audit.min_density,
                    children,
                    f64::from(u8::from(wit)),
                    f64::from(u8::from(adm)),
                    lhs,
                    rhs,
                    ratio,
                ])
            })
            .collect::<Result<_>>()?;
        for r in rows {
            all_ok &= r[3] > 0.25 && r[4] <= 0.25 && r[5] == 1.0 && r[6] == 1.0;
            rep.push_row(r);
        }
    }
    let max_children = rep
        .column("max_children_fraction")
        .expect("column")
        .into_iter()
        .fold(0.0, f64::max);
    rep.check(Check::at_most("children_mass_fraction", max_children, 0.25));
    rep.check(Check::holds("audit_and_admissibility", all_ok));
    rep.meta("seed", p.seed);
    rep.meta("lhs", "sum_E g max_{N dyadic, N^2 <= |E|} A_N f");
    rep.meta("rhs", "sum_I |I| <f>_{2I,p} <g>_{I,p}");
    rep.meta("fit", "domination ratio lhs / rhs per trial");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_demo_passes_audit() {
        let p = SparseDemoParams { e_sizes: vec![256, 512], trials: 3, ..Default::default() };
        let r = run_sparse_demo(&p).unwrap();
        assert!(r.passed());
        assert_eq!(r.rows.len(), 6);
    }

    #[test]
    fn empty_f_gives_trivial_collection() {
        let p = SparseDemoParams {
            e_sizes: vec![128],
            trials: 1,
            density: 0.0,
            clusters: 0,
            ..Default::default()
        };
        let r = run_sparse_demo(&p).unwrap();
        assert_eq!(r.column("intervals").unwrap(), vec![1.0]);
        assert_eq!(r.column("lhs").unwrap(), vec![0.0]);
    }
}
