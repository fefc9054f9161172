//! Dense linear algebra, activations, seeded randomness and initialization.
//!
//! Everything here is `f64`: the finite-difference gradient checks elsewhere in
//! the crate need double precision to resolve relative errors near `1e-6`.

mod activation;
mod matrix;
mod rng;
mod sparse;

pub use activation::Activation;
pub(crate) use matrix::squared_distance;
pub use matrix::{euclidean, matvec, Matrix, Vector};
pub use rng::Rng;
pub use sparse::SparseVector;

/// Initialization scheme for a parameter tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitScheme {
    /// `U(-r, r)` with `r = sqrt(6 / (fan_in + fan_out))`.
    UniformScaled,
    Zeros,
}

/// Draws a `fan_out x fan_in` matrix.
///
/// Entries are filled in row-major order, one [`Rng::uniform`] draw each,
/// mapped to `-r + 2r * u`.
pub fn init_params(rng: &mut Rng, fan_in: usize, fan_out: usize, scheme: InitScheme) -> Matrix {
    assert!(fan_in >= 1 && fan_out >= 1, "fan_in and fan_out must be >= 1");
    match scheme {
        InitScheme::Zeros => Matrix::zeros(fan_out, fan_in),
        InitScheme::UniformScaled => {
            let r = libm::sqrt(6.0 / (fan_in + fan_out) as f64);
            let data = (0..fan_in * fan_out).map(|_| -r + 2.0 * r * rng.uniform()).collect();
            Matrix::from_vec(fan_out, fan_in, data).expect("shape is consistent")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_init() {
        let mut rng = Rng::new(1);
        let m = init_params(&mut rng, 2, 3, InitScheme::Zeros);
        assert_eq!((m.rows(), m.cols()), (3, 2));
        assert!(m.as_slice().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn uniform_scaled_bound() {
        let mut rng = Rng::new(7);
        let m = init_params(&mut rng, 3, 3, InitScheme::UniformScaled);
        assert!(m.as_slice().iter().all(|&x| x > -1.0 && x < 1.0));
        let big = init_params(&mut rng, 50, 50, InitScheme::UniformScaled);
        let r = (6.0f64 / 100.0).sqrt();
        assert!(big.as_slice().iter().all(|&x| x.abs() <= r));
    }

    #[test]
    fn seeded_init_is_bitwise_repeatable() {
        let a = init_params(&mut Rng::new(42), 2, 2, InitScheme::UniformScaled);
        let b = init_params(&mut Rng::new(42), 2, 2, InitScheme::UniformScaled);
        let bits = |m: &Matrix| m.as_slice().iter().map(|x| x.to_bits()).collect::<alloc::vec::Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }
}
