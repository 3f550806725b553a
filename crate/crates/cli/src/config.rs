//! Run-configuration parsing: a flat `key = value` text format with
//! dotted section keys, full-line `#` comments, strict unknown-key and
//! duplicate-key rejection, and range validation at parse time.

use std::collections::HashSet;
use std::f64::consts::PI;

use susyjc::{FieldState, ModelParams, C64, MAX_MOMENT_ORDER};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Jc,
    Ajc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    Analytic,
    Dense,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldKind {
    Fock(usize),
    Coherent(f64),
    Cat(f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartnerShift {
    Susy,
    None,
}

#[derive(Clone, Debug)]
pub struct WignerConfig {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub points: usize,
    pub times: Vec<f64>,
}

impl Default for WignerConfig {
    fn default() -> Self {
        Self { re_min: -6.0, re_max: 6.0, im_min: -6.0, im_max: 6.0, points: 61, times: vec![] }
    }
}

/// Everything a run needs, with production-scale defaults: resonant weak
/// coupling (omega_a = 1, lambda = 0.1), even cat alpha = 4, N = 250,
/// phi = pi/4, 600-step grid to t = 300.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model: Model,
    pub path: PathKind,
    pub omega_a: f64,
    pub lambda: f64,
    pub n_trunc: usize,
    pub theta: f64,
    pub phi: f64,
    pub field: FieldKind,
    pub t_max: f64,
    pub n_steps: usize,
    pub moments_k: Vec<usize>,
    pub output_path: Option<String>,
    pub sweep_theta_points: Option<usize>,
    pub wigner: Option<WignerConfig>,
    pub partner_shift: PartnerShift,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: Model::Ajc,
            path: PathKind::Analytic,
            omega_a: 1.0,
            lambda: 0.1,
            n_trunc: 250,
            theta: 0.0,
            phi: PI / 4.0,
            field: FieldKind::Cat(4.0, 0.0),
            t_max: 300.0,
            n_steps: 600,
            moments_k: vec![1, 2],
            output_path: None,
            sweep_theta_points: None,
            wigner: None,
            partner_shift: PartnerShift::Susy,
        }
    }
}

fn bad(key: &str, value: &str, expected: &str) -> CliError {
    CliError::config(format!("key '{key}': cannot parse '{value}' as {expected}"))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    let x: f64 = value.parse().map_err(|_| bad(key, value, "a number"))?;
    if !x.is_finite() {
        return Err(bad(key, value, "a finite number"));
    }
    Ok(x)
}

fn parse_usize(key: &str, value: &str) -> Result<usize, CliError> {
    value.parse().map_err(|_| bad(key, value, "a nonnegative integer"))
}

fn parse_list<T, F>(key: &str, value: &str, mut one: F) -> Result<Vec<T>, CliError>
where
    F: FnMut(&str, &str) -> Result<T, CliError>,
{
    value.split([' ', ',']).filter(|s| !s.is_empty()).map(|s| one(key, s)).collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut field_kind: Option<String> = None;
        let mut field_m = 1usize;
        let mut field_alpha = 4.0f64;
        let mut field_vartheta = 0.0f64;
        let mut wigner = WignerConfig::default();
        let mut wigner_present = false;
        let mut seen = HashSet::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(CliError::config(format!("duplicate key '{key}'")));
            }
            if key.starts_with("wigner.") {
                wigner_present = true;
            }
            match key {
                "model" => {
                    cfg.model = match value {
                        "jc" => Model::Jc,
                        "ajc" => Model::Ajc,
                        _ => return Err(bad(key, value, "'jc' or 'ajc'")),
                    }
                }
                "path" => {
                    cfg.path = match value {
                        "analytic" => PathKind::Analytic,
                        "dense" => PathKind::Dense,
                        "both" => PathKind::Both,
                        _ => return Err(bad(key, value, "'analytic', 'dense' or 'both'")),
                    }
                }
                "omega_a" => cfg.omega_a = parse_f64(key, value)?,
                "lambda" => cfg.lambda = parse_f64(key, value)?,
                "n_trunc" => cfg.n_trunc = parse_usize(key, value)?,
                "theta" => cfg.theta = parse_f64(key, value)?,
                "phi" => cfg.phi = parse_f64(key, value)?,
                "field.kind" => field_kind = Some(value.to_string()),
                "field.m" => field_m = parse_usize(key, value)?,
                "field.alpha" => field_alpha = parse_f64(key, value)?,
                "field.vartheta" => field_vartheta = parse_f64(key, value)?,
                "t_max" => cfg.t_max = parse_f64(key, value)?,
                "n_steps" => cfg.n_steps = parse_usize(key, value)?,
                "moments_k" => cfg.moments_k = parse_list(key, value, parse_usize)?,
                "output_path" => cfg.output_path = Some(value.to_string()),
                "sweep.theta_points" => cfg.sweep_theta_points = Some(parse_usize(key, value)?),
                "wigner.re_min" => wigner.re_min = parse_f64(key, value)?,
                "wigner.re_max" => wigner.re_max = parse_f64(key, value)?,
                "wigner.im_min" => wigner.im_min = parse_f64(key, value)?,
                "wigner.im_max" => wigner.im_max = parse_f64(key, value)?,
                "wigner.points" => wigner.points = parse_usize(key, value)?,
                "wigner.times" => wigner.times = parse_list(key, value, parse_f64)?,
                "validate.partner_shift" => {
                    cfg.partner_shift = match value {
                        "susy" => PartnerShift::Susy,
                        "none" => PartnerShift::None,
                        _ => return Err(bad(key, value, "'susy' or 'none'")),
                    }
                }
                _ => return Err(CliError::config(format!("unknown key '{key}'"))),
            }
        }

        cfg.field = match field_kind.as_deref() {
            None | Some("cat") => FieldKind::Cat(field_alpha, field_vartheta),
            Some("fock") => FieldKind::Fock(field_m),
            Some("coherent") => FieldKind::Coherent(field_alpha),
            Some(other) => {
                return Err(bad("field.kind", other, "'fock', 'coherent' or 'cat'"));
            }
        };
        if wigner_present {
            cfg.wigner = Some(wigner);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n_trunc < 2 {
            return Err(CliError::config("n_trunc must be at least 2"));
        }
        if self.t_max < 0.0 || self.t_max.is_nan() {
            return Err(CliError::config("t_max must be nonnegative"));
        }
        if self.n_steps < 2 {
            return Err(CliError::config("n_steps must be at least 2"));
        }
        if self.moments_k.is_empty() {
            return Err(CliError::config("moments_k must list at least one order"));
        }
        let mut seen = HashSet::new();
        for &k in &self.moments_k {
            if k == 0 || k > MAX_MOMENT_ORDER {
                return Err(CliError::config(format!(
                    "moments_k entries must lie in 1..={MAX_MOMENT_ORDER} (got {k})"
                )));
            }
            if !seen.insert(k) {
                return Err(CliError::config(format!("moments_k lists k = {k} twice")));
            }
        }
        if let Some(p) = self.sweep_theta_points {
            if p < 2 {
                return Err(CliError::config("sweep.theta_points must be at least 2"));
            }
        }
        if let Some(w) = &self.wigner {
            if w.points < 2 {
                return Err(CliError::config("wigner.points must be at least 2"));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(self.omega_a, self.lambda)?)
    }

    pub fn field_state(&self) -> Result<FieldState, CliError> {
        let f = match self.field {
            FieldKind::Fock(m) => FieldState::fock(m, self.n_trunc)?,
            FieldKind::Coherent(alpha) => {
                FieldState::coherent(C64::new(alpha, 0.0), self.n_trunc)?
            }
            FieldKind::Cat(alpha, vartheta) => {
                FieldState::cat(C64::new(alpha, 0.0), vartheta, self.n_trunc)?
            }
        };
        Ok(f)
    }

    /// Uniform grid over [0, t_max]; a zero horizon collapses to the single
    /// initial time.
    pub fn time_grid(&self) -> Vec<f64> {
        if self.t_max == 0.0 {
            return vec![0.0];
        }
        (0..self.n_steps)
            .map(|i| self.t_max * i as f64 / (self.n_steps - 1) as f64)
            .collect()
    }

    /// The largest coefficient-table order any requested column needs.
    pub fn k_max(&self) -> usize {
        self.moments_k.iter().copied().max().unwrap_or(1).max(2)
    }

    /// Field amplitude |alpha| for the clearly-named scaled sweep columns;
    /// None for Fock fields, where the scaling convention does not apply.
    pub fn scale_alpha(&self) -> Option<f64> {
        match self.field {
            FieldKind::Fock(_) => None,
            FieldKind::Coherent(a) | FieldKind::Cat(a, _) => Some(a.abs()),
        }
    }
}
