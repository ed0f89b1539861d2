//! Scalar fields on regions of R^n, the common interface of the numerical
//! diagnostics (finite-difference Laplacian, mean-value check).

/// A real function on a radially described region {lo <= |x| <= hi}.
pub trait Field {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Radial interval on which the field is defined.
    fn radial_range(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    /// Size of second derivatives, used to make Laplacian residuals relative.
    fn laplacian_scale(&self) -> f64 {
        1.0
    }
}

/// Adapter turning a closure into a [`Field`] defined on all of R^n.
pub struct FnField<F> {
    dim: usize,
    f: F,
    range: (f64, f64),
}

impl<F: Fn(&[f64]) -> f64> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self {
            dim,
            f,
            range: (0.0, f64::INFINITY),
        }
    }

    pub fn with_range(mut self, lo: f64, hi: f64) -> Self {
        self.range = (lo, hi);
        self
    }
}

impl<F: Fn(&[f64]) -> f64> Field for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn radial_range(&self) -> (f64, f64) {
        self.range
    }
}
