use num_complex::Complex64;

use crate::error::{domain, shape as shape_error, Result};

/// Scalar types a [`GridField`] can hold.
pub trait GridValue: Copy + Default + PartialEq + Send + Sync + std::fmt::Debug {
    fn magnitude(&self) -> f64;
}

impl GridValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl GridValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// A scalar or vector function sampled on a uniform rectangular grid.
///
/// Sample `i = (i_0, .., i_{d-1})` sits at `origin + i * spacing`; the last
/// axis varies fastest. Values are stored component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T: GridValue = f64> {
    components: usize,
    origin: Vec<f64>,
    spacing: Vec<f64>,
    shape: Vec<usize>,
    values: Vec<T>,
    support: Option<f64>,
}

impl<T: GridValue> GridField<T> {
    pub fn new(
        components: usize,
        origin: Vec<f64>,
        spacing: Vec<f64>,
        shape: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        let dim = origin.len();
        if !(dim == 2 || dim == 3) || spacing.len() != dim || shape.len() != dim {
            return Err(shape_err(&origin, &spacing, &shape));
        }
        if spacing.iter().any(|&h| !(h > 0.0)) {
            return Err(domain(format!("grid spacing must be > 0, got {spacing:?}")));
        }
        if !(1..=3).contains(&components) {
            return Err(domain(format!("components must be 1..=3, got {components}")));
        }
        let n: usize = shape.iter().product();
        if values.len() != n * components {
            return Err(shape_error(format!(
                "{} values for {} components on {:?}",
                values.len(),
                components,
                shape
            )));
        }
        Ok(Self {
            components,
            origin,
            spacing,
            shape,
            values,
            support: None,
        })
    }

    pub fn zeros(components: usize, origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        let n: usize = shape.iter().product();
        Self::new(components, origin, spacing, shape, vec![T::default(); n * components])
    }

    /// Samples `f(point, out)` where `out` has one slot per component.
    pub fn from_fn<F>(
        components: usize,
        origin: Vec<f64>,
        spacing: Vec<f64>,
        shape: Vec<usize>,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64], &mut [T]),
    {
        let mut g = Self::zeros(components, origin, spacing, shape)?;
        let n = g.len();
        let mut buf = vec![T::default(); components];
        for i in 0..n {
            let p = g.point(i);
            f(&p[..g.dim()], &mut buf);
            for (c, v) in buf.iter().enumerate() {
                g.values[c * n + i] = *v;
            }
        }
        Ok(g)
    }

    /// Cell-centred grid covering `[-half_extent, half_extent]^dim` with `n`
    /// cells per axis.
    pub fn centered_cells(dim: usize, components: usize, half_extent: f64, n: usize) -> Result<Self> {
        let h = 2.0 * half_extent / n as f64;
        Self::zeros(
            components,
            vec![-half_extent + 0.5 * h; dim],
            vec![h; dim],
            vec![n; dim],
        )
    }

    /// Periodic node grid: `n` nodes per axis starting at `-half_extent`, spacing
    /// `2 half_extent / n`.
    pub fn periodic_nodes(dim: usize, components: usize, half_extent: f64, n: usize) -> Result<Self> {
        let h = 2.0 * half_extent / n as f64;
        Self::zeros(components, vec![-half_extent; dim], vec![h; dim], vec![n; dim])
    }

    /// Declares that every nonzero value lies in the ball `|x| <= radius`.
    pub fn with_support(mut self, radius: f64) -> Result<Self> {
        let n = self.len();
        for i in 0..n {
            if norm(&self.point(i)) > radius {
                for c in 0..self.components {
                    if self.values[c * n + i] != T::default() {
                        return Err(domain(format!(
                            "nonzero value at {:?} outside declared support radius {radius}",
                            &self.point(i)[..self.dim()]
                        )));
                    }
                }
            }
        }
        self.support = Some(radius);
        Ok(self)
    }

    /// Zeroes every sample outside `|x| <= radius` and declares that support.
    pub fn clipped_to(mut self, radius: f64) -> Self {
        let n = self.len();
        for i in 0..n {
            if norm(&self.point(i)) > radius {
                for c in 0..self.components {
                    self.values[c * n + i] = T::default();
                }
            }
        }
        self.support = Some(radius);
        self
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn support(&self) -> Option<f64> {
        self.support
    }

    /// Number of grid points (per component).
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn component(&self, c: usize) -> &[T] {
        let n = self.len();
        &self.values[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [T] {
        let n = self.len();
        &mut self.values[c * n..(c + 1) * n]
    }

    /// Multi-index of linear index `i`.
    pub fn index(&self, mut i: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        for a in (0..self.dim()).rev() {
            idx[a] = i % self.shape[a];
            i /= self.shape[a];
        }
        idx
    }

    pub fn linear(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    /// Coordinates of sample `i`, zero-padded to three entries.
    pub fn point(&self, i: usize) -> [f64; 3] {
        let idx = self.index(i);
        let mut p = [0.0; 3];
        for a in 0..self.dim() {
            p[a] = self.origin[a] + idx[a] as f64 * self.spacing[a];
        }
        p
    }

    pub fn same_layout<U: GridValue>(&self, other: &GridField<U>) -> bool {
        self.origin == other.origin && self.spacing == other.spacing && self.shape == other.shape
    }

    /// Same layout and support with replaced values.
    pub fn with_values<U: GridValue>(&self, components: usize, values: Vec<U>) -> Result<GridField<U>> {
        let mut g = GridField::new(
            components,
            self.origin.clone(),
            self.spacing.clone(),
            self.shape.clone(),
            values,
        )?;
        g.support = self.support;
        Ok(g)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }
}

impl GridField<f64> {
    /// Cell-weighted L2 norm over all components.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.cell_volume()).sqrt()
    }
}

fn norm(p: &[f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

fn shape_err(o: &[f64], s: &[f64], n: &[usize]) -> crate::Error {
    shape_error(format!(
        "inconsistent grid axes: origin {o:?}, spacing {s:?}, shape {n:?}"
    ))
}
