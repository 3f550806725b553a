//! `evolve`: tabulates observables of one initial state over a uniform
//! time grid, through the closed-form series, the dense eigensolver
//! propagator, or both side by side with a deviation summary.

use std::path::Path;

use susyjc::{
    ajc_ak_with, ajc_hamiltonian, ajc_nk_with, ajc_sigma_plus_with, ajc_sigma_z_with,
    analytic_jc_propagate, expectation_via_state, fano_factor_with, jc_hamiltonian,
    susy_map_state, Error, FieldOperator, InitialSpec, JointOperator, JointState, Propagator,
};

use crate::config::{Model, PathKind, RunConfig};
use crate::output::{num, write_csv};
use crate::CliError;

pub fn run(cfg: &RunConfig, outdir: &Path) -> Result<(), CliError> {
    let times = cfg.time_grid();
    let init = InitialSpec::bloch(cfg.theta, cfg.phi, cfg.field_state()?, cfg.params()?)?;

    let analytic = matches!(cfg.path, PathKind::Analytic | PathKind::Both)
        .then(|| analytic_rows(cfg, &init, &times))
        .transpose()?;
    let dense = matches!(cfg.path, PathKind::Dense | PathKind::Both)
        .then(|| dense_rows(cfg, &init, &times))
        .transpose()?;

    let mut header = vec!["t".to_string()];
    if analytic.is_some() {
        header.extend(value_columns(&cfg.moments_k, ""));
    }
    if dense.is_some() {
        let suffix = if analytic.is_some() { "_dense" } else { "" };
        header.extend(value_columns(&cfg.moments_k, suffix));
    }

    let mut lines = Vec::with_capacity(times.len() + 1);
    for (i, &t) in times.iter().enumerate() {
        let mut cells = vec![num(t)];
        if let Some(rows) = &analytic {
            cells.extend(rows[i].iter().copied().map(num));
        }
        if let Some(rows) = &dense {
            cells.extend(rows[i].iter().copied().map(num));
        }
        lines.push(cells.join(","));
    }
    if let (Some(a), Some(d)) = (&analytic, &dense) {
        lines.push(format!("# max_deviation = {:.3e}", max_deviation(a, d)));
    }

    let name = cfg.output_path.clone().unwrap_or_else(|| "evolve.csv".to_string());
    let path = write_csv(outdir, &name, &header.join(","), &lines)?;
    println!("wrote {} ({} rows)", path.display(), times.len());
    Ok(())
}

/// Column names shared by both routes: the dense copies carry a suffix.
fn value_columns(moments: &[usize], suffix: &str) -> Vec<String> {
    let mut cols = vec![
        format!("sigma_z{suffix}"),
        format!("re_sigma_plus{suffix}"),
        format!("im_sigma_plus{suffix}"),
        format!("mean_n{suffix}"),
    ];
    cols.extend(moments.iter().map(|k| format!("n{k}{suffix}")));
    cols.push(format!("fano{suffix}"));
    for k in moments {
        cols.push(format!("re_a{k}{suffix}"));
        cols.push(format!("im_a{k}{suffix}"));
    }
    cols.push(format!("norm_residual{suffix}"));
    cols
}

fn analytic_rows(
    cfg: &RunConfig,
    init: &InitialSpec,
    times: &[f64],
) -> Result<Vec<Vec<f64>>, CliError> {
    match cfg.model {
        Model::Ajc => times.iter().map(|&t| series_row(cfg, init, t)).collect(),
        Model::Jc => {
            let ops = StateOps::new(cfg);
            let psi0 = init.joint_state();
            let p = cfg.params()?;
            Ok(times
                .iter()
                .map(|&t| ops.row(&analytic_jc_propagate(&psi0, t, &p)))
                .collect())
        }
    }
}

fn dense_rows(
    cfg: &RunConfig,
    init: &InitialSpec,
    times: &[f64],
) -> Result<Vec<Vec<f64>>, CliError> {
    let p = cfg.params()?;
    let state0 = match cfg.model {
        Model::Ajc => susy_map_state(&init.joint_state())?.mapped_state,
        Model::Jc => init.joint_state(),
    };
    let h = match cfg.model {
        Model::Ajc => ajc_hamiltonian(&p.partner(), cfg.n_trunc),
        Model::Jc => jc_hamiltonian(&p, cfg.n_trunc),
    };
    let prop = Propagator::new(&h)?;
    let ops = StateOps::new(cfg);
    Ok(times.iter().map(|&t| ops.row(&prop.propagate(&state0, t))).collect())
}

/// One closed-form row; the Fano factor degrades to NaN at vanishing mean
/// photon number instead of failing the run.
fn series_row(cfg: &RunConfig, init: &InitialSpec, t: f64) -> Result<Vec<f64>, CliError> {
    let table = init.coeff_table(t, cfg.k_max());
    let mut row = Vec::with_capacity(7 + 3 * cfg.moments_k.len());
    row.push(ajc_sigma_z_with(init, &table)?);
    let sp = ajc_sigma_plus_with(init, &table)?;
    row.push(sp.re);
    row.push(sp.im);
    row.push(ajc_nk_with(init, &table, 1)?);
    for &k in &cfg.moments_k {
        row.push(ajc_nk_with(init, &table, k)?);
    }
    row.push(match fano_factor_with(init, &table) {
        Ok(ff) => ff,
        Err(Error::FanoUndefined { .. }) => f64::NAN,
        Err(e) => return Err(e.into()),
    });
    for &k in &cfg.moments_k {
        let ak = ajc_ak_with(init, &table, k)?;
        row.push(ak.re);
        row.push(ak.im);
    }
    row.push((ajc_nk_with(init, &table, 0)? - 1.0).abs());
    Ok(row)
}

/// Operator bundle for the state-vector routes.
struct StateOps {
    sz: JointOperator,
    sp: JointOperator,
    n1: JointOperator,
    n2: JointOperator,
    nk: Vec<JointOperator>,
    ak: Vec<JointOperator>,
}

impl StateOps {
    fn new(cfg: &RunConfig) -> Self {
        let n = cfg.n_trunc;
        Self {
            sz: JointOperator::sigma_z(n),
            sp: JointOperator::sigma_plus(n),
            n1: JointOperator::lift_field(&FieldOperator::number_pow(n, 1)),
            n2: JointOperator::lift_field(&FieldOperator::number_pow(n, 2)),
            nk: cfg
                .moments_k
                .iter()
                .map(|&k| JointOperator::lift_field(&FieldOperator::number_pow(n, k)))
                .collect(),
            ak: cfg
                .moments_k
                .iter()
                .map(|&k| JointOperator::lift_field(&FieldOperator::annihilation_pow(n, k)))
                .collect(),
        }
    }

    fn row(&self, state: &JointState) -> Vec<f64> {
        let mut row = Vec::with_capacity(7 + 3 * self.nk.len());
        row.push(expectation_via_state(state, &self.sz).re);
        let sp = expectation_via_state(state, &self.sp);
        row.push(sp.re);
        row.push(sp.im);
        let n1 = expectation_via_state(state, &self.n1).re;
        row.push(n1);
        for op in &self.nk {
            row.push(expectation_via_state(state, op).re);
        }
        let n2 = expectation_via_state(state, &self.n2).re;
        row.push(if n1 > 1e-12 { (n2 - n1 * n1) / n1 } else { f64::NAN });
        for op in &self.ak {
            let ak = expectation_via_state(state, op);
            row.push(ak.re);
            row.push(ak.im);
        }
        row.push((state.norm() - 1.0).abs());
        row
    }
}

/// Worst |analytic - dense| across all defined cells; NaN cells (the Fano
/// factor exactly at a node) are excluded rather than poisoning the summary.
fn max_deviation(a: &[Vec<f64>], d: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (ra, rd) in a.iter().zip(d) {
        for (&x, &y) in ra.iter().zip(rd) {
            if x.is_nan() || y.is_nan() {
                continue;
            }
            worst = worst.max((x - y).abs());
        }
    }
    worst
}
