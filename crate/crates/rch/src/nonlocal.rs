//! Periodic spatial discretization and the spectral operator kit.
//!
//! The equation is posed on the line with decaying data; the discretization
//! lives on a periodic interval `[0, L)` instead, which turns every operator
//! into an exact Fourier multiplier:
//!
//! * derivatives multiply by `(ik)^order`,
//! * the Helmholtz inverse `(1 - lam d_xx)^{-1}` divides by `1 + lam k^2`,
//! * the one-sided smoothing kernels `p+ = (1/2)(1 + d_x)^{-1}` and
//!   `p- = (1/2)(1 - d_x)^{-1}` divide by `2(1 +- ik)`.
//!
//! Defining `p+`/`p-` through the first-order symbols makes the factorization
//! `1 - d_xx = (1 - d_x)(1 + d_x)` exact on the grid, so `p = p+ + p-` and
//! `p_x = p- - p+` hold to roundoff for every resolved mode.
//!
//! Nonlinear terms go through [`dealiased_product`], which truncates inputs
//! and output at half the grid's Nyquist index. The truncation removes all
//! aliasing from quadratic and cubic products; quartic products keep a
//! roundoff-of-the-model residue that the `eps^3` prefactor renders harmless.

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NonlocalError {
    #[error("grid length {0} must be positive and finite")]
    BadLength(f64),
    #[error("grid size {0} must be a power of two and at least 8")]
    BadSize(usize),
    #[error("field contains a non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("field length {field} does not match grid size {grid}")]
    LengthMismatch { field: usize, grid: usize },
    #[error("derivative order {0} not in 1..=3")]
    BadOrder(usize),
    #[error("helmholtz parameter lam = {0} must be positive")]
    NonpositiveLambda(f64),
    #[error("dealiased product takes 2 to 4 fields, got {0}")]
    BadArity(usize),
}

/// Uniform periodic grid on `[0, L)` with `n` nodes at `x_j = j L / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    length: f64,
    n: usize,
}

impl PeriodicGrid {
    pub fn new(length: f64, n: usize) -> Result<Self, NonlocalError> {
        if !length.is_finite() || length <= 0.0 {
            return Err(NonlocalError::BadLength(length));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(NonlocalError::BadSize(n));
        }
        Ok(Self { length, n })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.length / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Signed wavenumber of transform bin `j` in standard ordering
    /// (`0, 1, ..., n/2, -(n/2 - 1), ..., -1`, scaled by `2 pi / L`). The
    /// self-conjugate bin `n/2` only ever enters through even symbols or is
    /// zeroed, so its sign carries no information.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let half = self.n / 2;
        let signed = if j <= half {
            j as isize
        } else {
            j as isize - self.n as isize
        };
        2.0 * PI * signed as f64 / self.length
    }

    /// Largest resolved wavenumber magnitude, `pi n / L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    /// Signed mode index of bin `j`, used for truncation masks.
    fn mode_index(&self, j: usize) -> isize {
        let half = self.n / 2;
        if j <= half {
            j as isize
        } else {
            j as isize - self.n as isize
        }
    }
}

/// Real samples aligned with the nodes of a [`PeriodicGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    values: Vec<f64>,
}

impl Field {
    pub fn new(values: Vec<f64>) -> Result<Self, NonlocalError> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(NonlocalError::NonFinite(i));
        }
        Ok(Self { values })
    }

    /// Sample a function at the grid nodes.
    pub fn from_fn(grid: &PeriodicGrid, f: impl Fn(f64) -> f64) -> Result<Self, NonlocalError> {
        Self::new((0..grid.n()).map(|j| f(grid.node(j))).collect())
    }

    pub fn constant(grid: &PeriodicGrid, value: f64) -> Result<Self, NonlocalError> {
        Self::new(vec![value; grid.n()])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Pointwise `self + scale * other`; lengths must agree.
    pub fn axpy(&self, scale: f64, other: &Field) -> Field {
        debug_assert_eq!(self.len(), other.len());
        Field {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }

    pub fn scaled(&self, scale: f64) -> Field {
        Field {
            values: self.values.iter().map(|a| a * scale).collect(),
        }
    }
}

fn check(grid: &PeriodicGrid, f: &Field) -> Result<(), NonlocalError> {
    if f.len() != grid.n() {
        return Err(NonlocalError::LengthMismatch {
            field: f.len(),
            grid: grid.n(),
        });
    }
    Ok(())
}

// Plans are cached per size behind a mutex; the Arc handles returned by
// rustfft are Send + Sync and safe to use from any thread.
type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plan_pair(n: usize) -> PlanPair {
    static CACHE: OnceLock<Mutex<HashMap<usize, PlanPair>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

/// Forward transform of a real field into complex bins (unnormalized).
pub(crate) fn spectrum(grid: &PeriodicGrid, f: &Field) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = f.values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    plan_pair(grid.n()).0.process(&mut buf);
    buf
}

/// Inverse transform back to a real field, dividing by `n` and dropping the
/// imaginary roundoff.
pub(crate) fn synthesize(grid: &PeriodicGrid, mut spec: Vec<Complex<f64>>) -> Field {
    plan_pair(grid.n()).1.process(&mut spec);
    let scale = 1.0 / grid.n() as f64;
    Field {
        values: spec.iter().map(|z| z.re * scale).collect(),
    }
}

/// Zero all bins with mode index beyond `n/4` (the half rule).
pub(crate) fn truncate_half(grid: &PeriodicGrid, spec: &mut [Complex<f64>]) {
    let cut = grid.n() as isize / 4;
    for (j, z) in spec.iter_mut().enumerate() {
        if grid.mode_index(j).abs() > cut {
            *z = Complex::new(0.0, 0.0);
        }
    }
}

/// Spectral derivative of order 1..=3, exact to roundoff for resolved modes.
///
/// The Nyquist bin is zeroed for odd orders so the result of differentiating
/// a real field stays real.
pub fn spectral_derivative(
    grid: &PeriodicGrid,
    f: &Field,
    order: usize,
) -> Result<Field, NonlocalError> {
    if !(1..=3).contains(&order) {
        return Err(NonlocalError::BadOrder(order));
    }
    check(grid, f)?;
    let mut spec = spectrum(grid, f);
    for (j, z) in spec.iter_mut().enumerate() {
        let ik = Complex::new(0.0, grid.wavenumber(j));
        *z *= ik.powu(order as u32);
    }
    if order % 2 == 1 {
        spec[grid.n() / 2] = Complex::new(0.0, 0.0);
    }
    Ok(synthesize(grid, spec))
}

/// Solve `(1 - lam d_xx) g = f` by dividing each bin by `1 + lam k^2`.
///
/// With `lam = beta*mu` this is convolution against the exponential kernel
/// `exp(-|x|/sqrt(beta mu)) / (2 sqrt(beta mu))` periodized onto the grid;
/// `lam = 1` gives the normalized kernel `p = exp(-|x|)/2`.
pub fn helmholtz_inverse(grid: &PeriodicGrid, lam: f64, f: &Field) -> Result<Field, NonlocalError> {
    if !lam.is_finite() || lam <= 0.0 {
        return Err(NonlocalError::NonpositiveLambda(lam));
    }
    check(grid, f)?;
    let mut spec = spectrum(grid, f);
    for (j, z) in spec.iter_mut().enumerate() {
        let k = grid.wavenumber(j);
        *z /= 1.0 + lam * k * k;
    }
    Ok(synthesize(grid, spec))
}

/// Apply the pair of one-sided kernels, returning `(p+ * f, p- * f)`.
///
/// Symbols are `1/(2(1 + ik))` and `1/(2(1 - ik))`; their sum is the
/// `p` symbol `1/(1 + k^2)` and their difference the `p_x` symbol, so the
/// kernel identities hold exactly on the grid.
pub fn conv_half_kernels(grid: &PeriodicGrid, f: &Field) -> Result<(Field, Field), NonlocalError> {
    check(grid, f)?;
    let spec = spectrum(grid, f);
    let mut plus = spec.clone();
    let mut minus = spec;
    for j in 0..grid.n() {
        let ik = Complex::new(0.0, grid.wavenumber(j));
        plus[j] /= 2.0 * (Complex::new(1.0, 0.0) + ik);
        minus[j] /= 2.0 * (Complex::new(1.0, 0.0) - ik);
    }
    Ok((synthesize(grid, plus), synthesize(grid, minus)))
}

/// Pointwise product of 2 to 4 fields under the half rule: inputs and output
/// are spectrally truncated at mode `n/4`.
///
/// Repeated references to the same field are transformed once.
pub fn dealiased_product(grid: &PeriodicGrid, fs: &[&Field]) -> Result<Field, NonlocalError> {
    if !(2..=4).contains(&fs.len()) {
        return Err(NonlocalError::BadArity(fs.len()));
    }
    for f in fs {
        check(grid, f)?;
    }
    let mut truncated: Vec<(*const Field, Field)> = Vec::with_capacity(fs.len());
    let mut product: Option<Vec<f64>> = None;
    for &f in fs {
        let key = f as *const Field;
        let cached = truncated.iter().find(|(p, _)| *p == key).map(|(_, t)| t);
        let t = match cached {
            Some(t) => t.clone(),
            None => {
                let mut spec = spectrum(grid, f);
                truncate_half(grid, &mut spec);
                let t = synthesize(grid, spec);
                truncated.push((key, t));
                truncated.last().unwrap().1.clone()
            }
        };
        product = Some(match product {
            None => t.values,
            Some(acc) => acc.iter().zip(&t.values).map(|(a, b)| a * b).collect(),
        });
    }
    let mut spec = spectrum(
        grid,
        &Field {
            values: product.unwrap(),
        },
    );
    truncate_half(grid, &mut spec);
    Ok(synthesize(grid, spec))
}

/// Evaluate the trigonometric interpolant of `f` and of its derivative at an
/// arbitrary point `x` (exact for the discrete field).
pub fn interpolate(grid: &PeriodicGrid, spec: &[Complex<f64>], x: f64, derivative: bool) -> f64 {
    let n = grid.n();
    let scale = 1.0 / n as f64;
    let mut acc = Complex::new(0.0, 0.0);
    for (j, c) in spec.iter().enumerate() {
        let k = grid.wavenumber(j);
        let mut w = *c;
        if derivative {
            if j == n / 2 {
                continue;
            }
            w *= Complex::new(0.0, k);
        } else if j == n / 2 {
            // self-conjugate bin contributes through its cosine part only
            w = Complex::new(w.re, 0.0) * Complex::new((k * x).cos(), 0.0);
            acc += w;
            continue;
        }
        acc += w * Complex::new(0.0, k * x).exp();
    }
    acc.re * scale
}
