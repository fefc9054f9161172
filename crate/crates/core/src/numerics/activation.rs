use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// Elementwise activation used by encoders and decoders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Activation {
    #[default]
    Sigmoid,
    Tanh,
    Identity,
    Relu,
}

impl Activation {
    pub const ALL: [Activation; 4] = [Activation::Sigmoid, Activation::Tanh, Activation::Identity, Activation::Relu];

    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Sigmoid => sigmoid(x),
            Activation::Tanh => libm::tanh(x),
            Activation::Identity => x,
            Activation::Relu => x.max(0.0),
        }
    }

    /// Derivative at the pre-activation `x`. `relu` uses 0 at the kink.
    #[inline]
    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::Sigmoid => {
                let s = sigmoid(x);
                s * (1.0 - s)
            }
            Activation::Tanh => {
                let t = libm::tanh(x);
                1.0 - t * t
            }
            Activation::Identity => 1.0,
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn activate(self, v: &[f64]) -> alloc::vec::Vec<f64> {
        v.iter().map(|&x| self.apply(x)).collect()
    }

    pub fn activate_grad(self, v: &[f64]) -> alloc::vec::Vec<f64> {
        v.iter().map(|&x| self.derivative(x)).collect()
    }

    /// One-byte identifier used by the model container.
    pub fn code(self) -> u8 {
        match self {
            Activation::Sigmoid => 0,
            Activation::Tanh => 1,
            Activation::Identity => 2,
            Activation::Relu => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Activation::ALL.into_iter().find(|a| a.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
            Activation::Identity => "identity",
            Activation::Relu => "relu",
        }
    }
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Activation::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("unknown activation {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    fn central(a: Activation, x: f64, eps: f64) -> f64 {
        (a.apply(x + eps) - a.apply(x - eps)) / (2.0 * eps)
    }

    #[test]
    fn fixed_points() {
        assert_eq!(Activation::Tanh.activate(&[0.0, 0.0]), [0.0, 0.0]);
        assert_eq!(Activation::Sigmoid.activate(&[0.0]), [0.5]);
    }

    #[test]
    fn tanh_grad_matches_central_difference() {
        let x = 0.7;
        let fd = central(Activation::Tanh, x, 1e-5);
        let an = Activation::Tanh.derivative(x);
        assert!(((an - fd) / an).abs() < 1e-7);
    }

    #[test]
    fn derivatives_match_central_differences() {
        let mut rng = Rng::new(3);
        for a in Activation::ALL {
            for _ in 0..500 {
                let x = rng.uniform_range(-3.0, 3.0);
                if a == Activation::Relu && x.abs() < 1e-4 {
                    continue;
                }
                let fd = central(a, x, 1e-5);
                let an = a.derivative(x);
                let rel = (an - fd).abs() / an.abs().max(fd.abs()).max(1e-300);
                assert!(an == fd || rel < 1e-7, "{a} at {x}: {an} vs {fd}");
            }
        }
    }

    #[test]
    fn codes_and_names_roundtrip() {
        for a in Activation::ALL {
            assert_eq!(Activation::from_code(a.code()), Some(a));
            assert_eq!(a.name().parse::<Activation>().unwrap(), a);
        }
        assert!("softmax".parse::<Activation>().is_err());
    }
}
