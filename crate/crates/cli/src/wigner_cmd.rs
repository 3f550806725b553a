//! `wigner`: phase-space snapshots of the reduced field state at the
//! configured times, one CSV per snapshot plus a manifest carrying the
//! normalization check (grid integral), extrema, and peak location.

use std::path::Path;

use susyjc::{
    ajc_hamiltonian, analytic_jc_propagate, reduced_field_density, susy_map_state, wigner_grid,
    InitialSpec, JointState, PhaseSpaceGrid, Propagator, WignerConvention,
};

use crate::config::{Model, RunConfig};
use crate::output::{num, write_csv};
use crate::CliError;

pub fn run(
    cfg: &RunConfig,
    outdir: &Path,
    convention: WignerConvention,
) -> Result<(), CliError> {
    let w = cfg
        .wigner
        .as_ref()
        .ok_or_else(|| CliError::config("wigner run needs a wigner.* section in the config"))?;
    let grid = PhaseSpaceGrid::new(w.re_min, w.re_max, w.im_min, w.im_max, w.points)?;
    let prefix = cfg.output_path.clone().unwrap_or_else(|| "wigner".to_string());

    let mut manifest = Vec::with_capacity(w.times.len());
    if !w.times.is_empty() {
        let p = cfg.params()?;
        let init = InitialSpec::bloch(cfg.theta, cfg.phi, cfg.field_state()?, p)?;
        let state_at: Box<dyn Fn(f64) -> JointState> = match cfg.model {
            Model::Ajc => {
                let mapped = susy_map_state(&init.joint_state())?.mapped_state;
                let prop = Propagator::new(&ajc_hamiltonian(&p.partner(), cfg.n_trunc))?;
                Box::new(move |t| prop.propagate(&mapped, t))
            }
            Model::Jc => {
                let psi0 = init.joint_state();
                Box::new(move |t| analytic_jc_propagate(&psi0, t, &p))
            }
        };
        for (i, &t) in w.times.iter().enumerate() {
            let rho = reduced_field_density(&state_at(t));
            let map = wigner_grid(&rho, &grid, convention)
                .map_err(|e| CliError::from(e).context(&format!("snapshot {i} (t = {t})")))?;
            let file = format!("{prefix}_{i:02}.csv");
            let mut lines = Vec::with_capacity(w.points * w.points);
            for r in 0..w.points {
                for c in 0..w.points {
                    let alpha = grid.point(r, c);
                    lines.push(format!(
                        "{},{},{}",
                        num(alpha.re),
                        num(alpha.im),
                        num(map.value(r, c))
                    ));
                }
            }
            write_csv(outdir, &file, "re_alpha,im_alpha,w", &lines)?;
            let (peak, _) = map.max_point();
            manifest.push(format!(
                "{i},{},{file},{},{},{},{},{}",
                num(t),
                num(map.integral()),
                num(map.min_value()),
                num(map.max_value()),
                num(peak.re),
                num(peak.im)
            ));
        }
    }
    let path = write_csv(
        outdir,
        &format!("{prefix}_manifest.csv"),
        "snapshot,t,file,integral,min_w,max_w,peak_re,peak_im",
        &manifest,
    )?;
    println!("wrote {} ({} snapshots)", path.display(), manifest.len());
    Ok(())
}
