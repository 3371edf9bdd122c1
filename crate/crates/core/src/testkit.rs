//! Seeded corpora of signals and fields for the acceptance suite and the CLI.
//!
//! Every corpus draws from its own ChaCha stream, so adding a corpus never
//! shifts the draws of another one.

use crate::error::Result;
use crate::grid::{GroupGrid, ModeField, VoiceField};
use crate::signal::{Axis, Signal1D, Signal2D};
use crate::voice::Analyzer;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Gaussian width of corpus packets.
pub const PACKET_SIGMA: f64 = 5.0;
/// Packet centres lie in `[−PACKET_SPREAD, PACKET_SPREAD]`.
pub const PACKET_SPREAD: f64 = 60.0;
/// Carrier frequencies of translation packets, inside `Ω = [−1/2, 1/2]` and away from 0.
pub const TRANSLATION_BAND: (f64, f64) = (0.22, 0.28);
/// Carrier frequencies of wavelet packets, inside the bump pass band.
pub const WAVELET_BAND: (f64, f64) = (0.35, 0.65);

/// Deterministic generator for stream `stream` of `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn normal_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Sum of three Gaussian packets with random complex amplitudes, centres and
/// carriers `±f`, `|f|` uniform in `carriers`. With `two_sided` false the
/// carriers are positive.
pub fn packet_signal(rng: &mut ChaCha8Rng, axis: Axis, carriers: (f64, f64), two_sided: bool) -> Result<Signal1D> {
    let packets: Vec<(Complex64, f64, f64)> = (0..3)
        .map(|_| {
            let c = normal_c(rng);
            let x0 = rng.random_range(-PACKET_SPREAD..=PACKET_SPREAD);
            let f = rng.random_range(carriers.0..=carriers.1);
            let sign = if two_sided && rng.random_bool(0.5) { -1.0 } else { 1.0 };
            (c, x0, sign * f)
        })
        .collect();
    Signal1D::from_fn(axis, |x| {
        packets
            .iter()
            .map(|&(c, x0, f)| c * Complex64::from_polar((-(x - x0).powi(2) / (2.0 * PACKET_SIGMA.powi(2))).exp(), TAU * f * x))
            .sum()
    })
}

/// Signals band-limited well inside `[−1/4−δ, 1/4+δ]`.
pub fn translation_corpus(seed: u64, axis: Axis, count: usize) -> Result<Vec<Signal1D>> {
    let mut r = rng(seed, 1);
    (0..count).map(|_| packet_signal(&mut r, axis, TRANSLATION_BAND, true)).collect()
}

/// Two-sided signals whose spectra sit in the pass band of the default scales.
pub fn wavelet_corpus(seed: u64, axis: Axis, count: usize) -> Result<Vec<Signal1D>> {
    let mut r = rng(seed, 2);
    (0..count).map(|_| packet_signal(&mut r, axis, WAVELET_BAND, true)).collect()
}

/// Positive-frequency signals on the mode axes of `an`, with modes `|n| ≤ radius`.
/// Mode `n` is `c_n w_n(a_n x)` for a wavelet-corpus packet `w_n`, so its
/// samples on the dilated axis are those of `w_n` on the base axis.
pub fn schrodingerlet_corpus(seed: u64, an: &Analyzer, radius: i32, count: usize) -> Result<Vec<Signal2D>> {
    let mut r = rng(seed, 3);
    let base = an.axis();
    (0..count)
        .map(|_| {
            let mut modes = BTreeMap::new();
            for n in -radius..=radius {
                let Some(axis) = an.signal_mode_axis(n) else { continue };
                let w = packet_signal(&mut r, base, WAVELET_BAND, false)?;
                let c = normal_c(&mut r) * 0.5f64.powi(n.abs());
                modes.insert(n, Signal1D::new(axis, w.samples().iter().map(|z| z * c).collect())?);
            }
            Ok(Signal2D::new(modes))
        })
        .collect()
}

/// Complex Gaussian noise on the nodes with `|b| ≤ b_max` and `a ∈ [a_lo, a_hi]`,
/// zero elsewhere.
pub fn noise_field(rng: &mut ChaCha8Rng, grid: &Arc<GroupGrid>, b_max: f64, a_lo: f64, a_hi: f64) -> Result<VoiceField> {
    let mut vals = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (i, v) in vals.iter_mut().enumerate() {
        let x = grid.node(i);
        let inside = x.b().abs() <= b_max && x.a() >= a_lo * (1.0 - 1e-12) && x.a() <= a_hi * (1.0 + 1e-12);
        let z = normal_c(rng);
        if inside {
            *v = z;
        }
    }
    VoiceField::new(grid.clone(), vals)
}

/// `count` noise fields from stream 4 of `seed`, supported in a quarter of the
/// b-box and the middle octaves of the scale range.
pub fn field_corpus(seed: u64, grid: &Arc<GroupGrid>, count: usize) -> Result<Vec<VoiceField>> {
    let mut r = rng(seed, 4);
    let (lo, hi) = (grid.a_nodes()[0], grid.a_nodes()[grid.n_a() - 1]);
    let (a_lo, a_hi) = if grid.n_a() > 1 { ((lo * hi).sqrt() / 2.0, (lo * hi).sqrt() * 2.0) } else { (lo, hi) };
    let b_max = grid.params().b_halfwidth / 4.0;
    (0..count).map(|_| noise_field(&mut r, grid, b_max, a_lo.max(lo), a_hi.min(hi))).collect()
}

/// Mode fields with noise in the same relative box as [`field_corpus`] on the
/// mode grids of `an`, modes `|n| ≤ radius`, from stream 5 of `seed`.
pub fn mode_field_corpus(seed: u64, an: &Analyzer, radius: i32, count: usize) -> Result<Vec<ModeField>> {
    let mut r = rng(seed, 5);
    (0..count)
        .map(|_| {
            let mut modes = BTreeMap::new();
            for n in -radius..=radius {
                let Some(grid) = an.mode_grid(n) else { continue };
                let (lo, hi) = (grid.a_nodes()[0], grid.a_nodes()[grid.n_a() - 1]);
                let mid = (lo * hi).sqrt();
                let b_max = grid.params().b_halfwidth / 4.0;
                modes.insert(n, noise_field(&mut r, grid, b_max, (mid / 2.0).max(lo), (mid * 2.0).min(hi))?);
            }
            ModeField::new(modes)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_are_reproducible() {
        let axis = Axis::centered(128.0, 512);
        let a = translation_corpus(7, axis, 3).unwrap();
        let b = translation_corpus(7, axis, 3).unwrap();
        let c = translation_corpus(8, axis, 3).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.samples() == y.samples()));
        assert!(a[0].samples() != c[0].samples());
    }

    #[test]
    fn streams_are_independent() {
        let axis = Axis::centered(128.0, 512);
        let t = translation_corpus(0, axis, 1).unwrap();
        let w = wavelet_corpus(0, axis, 1).unwrap();
        assert!(t[0].samples() != w[0].samples());
    }
}
