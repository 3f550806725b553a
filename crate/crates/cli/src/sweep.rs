//! `sweep`: theta x t landscape of the anti-rotating model's inversion,
//! photon moments, two-photon amplitude, and Fano factor, emitted as
//! long-format CSV (theta-major, then time, then a fixed observable
//! order). Cells run in parallel; output order is deterministic.

use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use susyjc::{
    ajc_ak_with, ajc_nk_with, ajc_sigma_z_with, fano_factor_with, Error, InitialSpec,
};

use crate::config::{Model, RunConfig};
use crate::output::{num, write_csv};
use crate::CliError;

pub fn run(cfg: &RunConfig, outdir: &Path) -> Result<(), CliError> {
    let points = cfg
        .sweep_theta_points
        .ok_or_else(|| CliError::config("sweep requires sweep.theta_points in the config"))?;
    if cfg.model != Model::Ajc {
        return Err(CliError::config(
            "sweep evaluates the anti-rotating model's closed forms; set model = ajc",
        ));
    }
    let p = cfg.params()?;
    let field = cfg.field_state()?;
    let times = cfg.time_grid();
    let thetas: Vec<f64> =
        (0..points).map(|i| PI * i as f64 / (points - 1) as f64).collect();
    let scale = cfg.scale_alpha();

    let blocks: Vec<Result<Vec<String>, CliError>> = thetas
        .par_iter()
        .map(|&theta| {
            let init = InitialSpec::bloch(theta, cfg.phi, field.clone(), p)?;
            let mut lines = Vec::with_capacity(times.len() * 8);
            for &t in &times {
                let table = init.coeff_table(t, 2);
                let sz = ajc_sigma_z_with(&init, &table)?;
                let n2 = ajc_nk_with(&init, &table, 2)?;
                let a2 = ajc_ak_with(&init, &table, 2)?;
                let ff = match fano_factor_with(&init, &table) {
                    Ok(ff) => ff,
                    Err(Error::FanoUndefined { .. }) => f64::NAN,
                    Err(e) => return Err(e.into()),
                };
                let mut push = |name: &str, value: f64| {
                    lines.push(format!("{},{},{name},{}", num(theta), num(t), num(value)));
                };
                push("sigma_z", sz);
                push("n2", n2);
                if let Some(alpha) = scale {
                    push("n2_over_alpha4", n2 / alpha.powi(4));
                }
                push("a2_re", a2.re);
                push("a2_im", a2.im);
                push("a2_abs", a2.norm());
                if let Some(alpha) = scale {
                    push("a2_abs_over_alpha2", a2.norm() / alpha.powi(2));
                }
                push("fano", ff);
            }
            Ok(lines)
        })
        .collect();

    let mut lines = Vec::with_capacity(thetas.len() * times.len() * 8);
    for block in blocks {
        lines.extend(block?);
    }
    let name = cfg.output_path.clone().unwrap_or_else(|| "sweep.csv".to_string());
    let path = write_csv(outdir, &name, "theta,t,observable,value", &lines)?;
    println!(
        "wrote {} ({} theta x {} t cells)",
        path.display(),
        thetas.len(),
        times.len()
    );
    Ok(())
}
