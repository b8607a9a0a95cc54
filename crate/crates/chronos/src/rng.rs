//! Counter-based deterministic random numbers.
//!
//! Every draw is a pure function of `(seed, stream, index)`, so ensembles and
//! random-state suites are reproducible bit-for-bit regardless of evaluation
//! order or thread count.

use num_complex::Complex64 as C64;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Raw 64-bit word for draw `index` of `stream` under `seed`.
pub fn word(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(GOLDEN.wrapping_mul(stream.wrapping_add(1)))
        .wrapping_add(GOLDEN.wrapping_mul(index << 1).wrapping_add(GOLDEN));
    z = splitmix64(z);
    splitmix64(z ^ index.rotate_left(17) ^ stream)
}

/// Uniform draw in the half-open interval (0, 1].
pub fn uniform(seed: u64, stream: u64, index: u64) -> f64 {
    ((word(seed, stream, index) >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Pair of independent standard normals (Box-Muller).
pub fn normal_pair(seed: u64, stream: u64, index: u64) -> (f64, f64) {
    let u1 = uniform(seed, stream, 2 * index);
    let u2 = uniform(seed, stream, 2 * index + 1);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Vector of complex standard-normal amplitudes.
pub fn complex_normal_vec(seed: u64, stream: u64, len: usize) -> Vec<C64> {
    (0..len)
        .map(|k| {
            let (re, im) = normal_pair(seed, stream, k as u64);
            C64::new(re, im)
        })
        .collect()
}
