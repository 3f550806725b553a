//! Shared seeded generators for the integration suites.
#![allow(dead_code)]

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use susyjc::FieldState;

/// Deterministic generator; every suite derives its own stream from a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random normalized field state whose amplitudes decay like e^{-n/decay},
/// keeping the mass near the hard cutoff negligible.
pub fn random_field(rng: &mut ChaCha8Rng, n_trunc: usize, decay: f64) -> FieldState {
    let amps = DVector::from_iterator(
        n_trunc + 1,
        (0..=n_trunc).map(|n| {
            let mag = (-(n as f64) / decay).exp();
            C64::new(rng.gen_range(-1.0..1.0) * mag, rng.gen_range(-1.0..1.0) * mag)
        }),
    );
    FieldState::from_amplitudes(amps).expect("nonzero random amplitudes")
}

/// Random qubit amplitude pair, not normalized (constructors normalize).
pub fn random_qubit(rng: &mut ChaCha8Rng) -> (C64, C64) {
    let theta = rng.gen_range(0.0..std::f64::consts::PI);
    let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    let chi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    (C64::from_polar(theta.sin(), phi), C64::from_polar(theta.cos(), chi))
}
