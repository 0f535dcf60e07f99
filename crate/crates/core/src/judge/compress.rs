use num_traits::Float;

use super::JudgeError;

/// A deterministic compressor used as a stand-in for description length.
pub trait Compressor {
    /// Identifies algorithm, implementation and parameters.
    fn id(&self) -> &str;

    fn compress(&self, data: &[u8]) -> Vec<u8>;

    /// Eight times the compressed length. An upper bound on description
    /// length up to an additive constant, never the exact value.
    fn compress_bits(&self, data: &[u8]) -> u64 {
        8 * self.compress(data).len() as u64
    }
}

/// zlib stream at maximum compression, pinned through the lockfile.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Zlib;

impl Zlib {
    pub const ID: &'static str = "zlib/miniz_oxide-0.8/level9";
}

impl Compressor for Zlib {
    fn id(&self) -> &str {
        Zlib::ID
    }

    fn compress(&self, data: &[u8]) -> Vec<u8> {
        miniz_oxide::deflate::compress_to_vec_zlib(data, 9)
    }
}

pub fn compress_bits(data: &[u8]) -> u64 {
    Zlib.compress_bits(data)
}

fn ncd_one_way<F: Float>(c: &dyn Compressor, a: &[u8], b: &[u8], ca: u64, cb: u64) -> F {
    let mut ab = Vec::with_capacity(a.len() + b.len());
    ab.extend_from_slice(a);
    ab.extend_from_slice(b);
    let cab = c.compress_bits(&ab);
    let lo = ca.min(cb) as f64;
    let hi = ca.max(cb) as f64;
    F::from((cab as f64 - lo) / hi).unwrap_or_else(F::zero)
}

/// Normalized compression distance, symmetrized by averaging both
/// concatenation orders and clamped to `[0, 1.1]`.
pub fn ncd<F: Float>(c: &dyn Compressor, a: &[u8], b: &[u8]) -> Result<F, JudgeError> {
    if a.is_empty() || b.is_empty() {
        return Err(JudgeError::EmptyInput);
    }
    let ca = c.compress_bits(a);
    let cb = c.compress_bits(b);
    let two = F::one() + F::one();
    let d = (ncd_one_way::<F>(c, a, b, ca, cb) + ncd_one_way::<F>(c, b, a, cb, ca)) / two;
    let cap = F::from(1.1).unwrap_or_else(F::one);
    Ok(d.max(F::zero()).min(cap))
}
