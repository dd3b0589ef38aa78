//! Dense discretisations of the first-kind integral equations
//! `int K(x_m - y, w) S(y) dy = v(x_m)` with real or imaginary kernel parts.

use num_complex::Complex64;

use crate::error::{shape, singular, Result};
use crate::forward::{GridField, ReceiverArray};
use crate::greens::GreensFrequency;
use crate::medium::{fundamental_solution, Dimension, ElasticMedium, WaveKind};
use crate::par;

/// Which kernel the operator discretises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// Full Green's tensor acting on the two-component source.
    Full,
    /// `Phi_{k_p} / gamma_p` acting on the compressional potential.
    P,
    /// `Phi_{k_s} / gamma_s` acting on the shear potential.
    S,
}

/// Which part of the complex kernel is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelPart {
    Real,
    Imag,
    /// Real rows followed by imaginary rows.
    Stacked,
}

impl KernelKind {
    pub fn label(self) -> &'static str {
        match self {
            KernelKind::Full => "full",
            KernelKind::P => "p",
            KernelKind::S => "s",
        }
    }

    /// Source components the operator acts on.
    pub fn components(self) -> usize {
        match self {
            KernelKind::Full => 2,
            _ => 1,
        }
    }
}

impl KernelPart {
    pub fn label(self) -> &'static str {
        match self {
            KernelPart::Real => "real",
            KernelPart::Imag => "imag",
            KernelPart::Stacked => "stacked",
        }
    }

    /// Splits complex data into the real rows the operator produces.
    pub fn rows_of(self, data: &[Complex64]) -> Vec<f64> {
        match self {
            KernelPart::Real => data.iter().map(|v| v.re).collect(),
            KernelPart::Imag => data.iter().map(|v| v.im).collect(),
            KernelPart::Stacked => data.iter().map(|v| v.re).chain(data.iter().map(|v| v.im)).collect(),
        }
    }
}

/// A real matrix mapping grid unknowns to data rows.
///
/// Unknowns are the source values on the active cells (those inside the
/// support disk), component-major. The data space carries the Euclidean inner
/// product and the grid space the cell-weighted one, so the adjoint is
/// `A^T r / w`.
#[derive(Debug, Clone)]
pub struct LinearOperator {
    pub kind: KernelKind,
    pub part: KernelPart,
    pub omega: f64,
    layout: GridField,
    active: Vec<usize>,
    weights: Vec<f64>,
    rows: usize,
    cols: usize,
    matrix: Vec<f64>,
}

impl LinearOperator {
    /// Wraps an explicit row-major matrix acting on a grid with one unknown per
    /// active cell and component.
    pub fn from_dense(
        layout: &GridField,
        kind: KernelKind,
        omega: f64,
        rows: usize,
        matrix: Vec<f64>,
    ) -> Result<Self> {
        let active = active_cells(layout);
        let cols = active.len() * kind.components();
        if matrix.len() != rows * cols {
            return Err(shape(format!(
                "{} matrix entries for {rows} rows x {cols} unknowns",
                matrix.len()
            )));
        }
        Ok(Self {
            kind,
            part: KernelPart::Real,
            omega,
            layout: blank(layout, kind.components())?,
            weights: vec![layout.cell_volume(); cols],
            active,
            rows,
            cols,
            matrix,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Column weights of the grid inner product.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn layout(&self) -> &GridField {
        &self.layout
    }

    /// Gathers the unknowns of a grid field.
    pub fn unknowns(&self, s: &GridField) -> Result<Vec<f64>> {
        if !s.same_layout(&self.layout) || s.components() != self.kind.components() {
            return Err(shape("grid field does not match the operator layout"));
        }
        let mut out = Vec::with_capacity(self.cols);
        for c in 0..s.components() {
            let v = s.component(c);
            out.extend(self.active.iter().map(|&i| v[i]));
        }
        Ok(out)
    }

    /// Scatters unknowns back onto the grid; inactive cells are zero.
    pub fn field(&self, x: &[f64]) -> Result<GridField> {
        if x.len() != self.cols {
            return Err(shape(format!("{} unknowns for an operator with {} columns", x.len(), self.cols)));
        }
        let mut g = self.layout.clone();
        let na = self.active.len();
        for c in 0..self.kind.components() {
            let comp = g.component_mut(c);
            for (k, &i) in self.active.iter().enumerate() {
                comp[i] = x[c * na + k];
            }
        }
        Ok(g)
    }

    pub fn apply_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(shape(format!("{} unknowns for {} columns", x.len(), self.cols)));
        }
        let cols = self.cols;
        Ok(par::map_indexed(self.rows, |r| {
            self.matrix[r * cols..(r + 1) * cols]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum()
        }))
    }

    pub fn adjoint_vec(&self, r: &[f64]) -> Result<Vec<f64>> {
        if r.len() != self.rows {
            return Err(shape(format!("{} residual rows for {} operator rows", r.len(), self.rows)));
        }
        let cols = self.cols;
        const CHUNK: usize = 256;
        let mut out = vec![0.0; cols];
        par::for_each_chunk_mut(&mut out, CHUNK, |ci, chunk| {
            let c0 = ci * CHUNK;
            for (i, &ri) in r.iter().enumerate() {
                if ri == 0.0 {
                    continue;
                }
                let row = &self.matrix[i * cols + c0..i * cols + c0 + chunk.len()];
                for (o, a) in chunk.iter_mut().zip(row) {
                    *o += a * ri;
                }
            }
            for (o, w) in chunk.iter_mut().zip(&self.weights[c0..]) {
                *o /= w;
            }
        });
        Ok(out)
    }

    /// `V S` as a data vector.
    pub fn apply(&self, s: &GridField) -> Result<Vec<f64>> {
        self.apply_vec(&self.unknowns(s)?)
    }

    /// `V* r` as a grid field.
    pub fn adjoint_apply(&self, r: &[f64]) -> Result<GridField> {
        self.field(&self.adjoint_vec(r)?)
    }

    /// Grid inner product of two unknown vectors.
    pub fn grid_dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).zip(&self.weights).map(|((x, y), w)| x * y * w).sum()
    }
}

/// Cells whose centre lies inside the declared support (all cells when none).
fn active_cells(layout: &GridField) -> Vec<usize> {
    (0..layout.len())
        .filter(|&i| {
            let p = layout.point(i);
            layout.support().is_none_or(|r0| p[0].hypot(p[1]).hypot(p[2]) <= r0)
        })
        .collect()
}

fn blank(layout: &GridField, components: usize) -> Result<GridField> {
    let n = layout.len() * components;
    layout.with_values(components, vec![0.0; n])
}

/// Builds the operator of `kind`/`part` at `omega` for a 2D grid and receivers.
pub fn build_operator(
    kind: KernelKind,
    part: KernelPart,
    medium: &ElasticMedium,
    omega: f64,
    grid: &GridField,
    receivers: &ReceiverArray,
) -> Result<LinearOperator> {
    if grid.dim() != 2 || receivers.dim() != 2 {
        return Err(shape("operators are built for two-dimensional grids and receivers"));
    }
    let active = active_cells(grid);
    let na = active.len();
    let nc = kind.components();
    let cols = na * nc;
    let m = receivers.len();
    let base_rows = m * nc;
    let w = grid.cell_volume();

    let greens = GreensFrequency::new(medium, omega, Dimension::Two)?;
    let (k, gamma) = match kind {
        KernelKind::P => (medium.wavenumber(WaveKind::P, omega)?, medium.modulus(WaveKind::P)),
        KernelKind::S => (medium.wavenumber(WaveKind::S, omega)?, medium.modulus(WaveKind::S)),
        KernelKind::Full => (0.0, 1.0),
    };
    let h = grid.spacing()[0].min(grid.spacing()[1]);

    // Complex kernel blocks per receiver: `[component row][unknown]`.
    let blocks = par::map_indexed(m, |j| -> Result<Vec<Complex64>> {
        let x = receivers.points()[j];
        let mut row = vec![Complex64::new(0.0, 0.0); nc * cols];
        for (a, &cell) in active.iter().enumerate() {
            let y = grid.point(cell);
            let d = [x[0] - y[0], x[1] - y[1]];
            if d[0].hypot(d[1]) < 1e-12 * h.max(1.0) {
                return Err(singular(format!("receiver {j} coincides with cell {cell}")));
            }
            match kind {
                KernelKind::Full => {
                    let g = greens.tensor2(d)?;
                    for r in 0..2 {
                        for c in 0..2 {
                            row[r * cols + c * na + a] = g[(r, c)] * w;
                        }
                    }
                }
                _ => row[a] = fundamental_solution(Dimension::Two, k, &d)? * (w / gamma),
            }
        }
        Ok(row)
    });

    let rows = match part {
        KernelPart::Stacked => 2 * base_rows,
        _ => base_rows,
    };
    let mut matrix = vec![0.0; rows * cols];
    for (j, b) in blocks.into_iter().enumerate() {
        let b = b?;
        for r in 0..nc {
            let src = &b[r * cols..(r + 1) * cols];
            let row = j * nc + r;
            let put = |dst: &mut [f64], f: fn(&Complex64) -> f64| {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d = f(s);
                }
            };
            match part {
                KernelPart::Real => put(&mut matrix[row * cols..(row + 1) * cols], |z| z.re),
                KernelPart::Imag => put(&mut matrix[row * cols..(row + 1) * cols], |z| z.im),
                KernelPart::Stacked => {
                    put(&mut matrix[row * cols..(row + 1) * cols], |z| z.re);
                    let r2 = base_rows + row;
                    put(&mut matrix[r2 * cols..(r2 + 1) * cols], |z| z.im);
                }
            }
        }
    }
    Ok(LinearOperator {
        kind,
        part,
        omega,
        layout: blank(grid, nc)?,
        active,
        weights: vec![w; cols],
        rows,
        cols,
        matrix,
    })
}

/// Data vector for `kind` from receiver data `u / g_hat`, stored
/// `[receiver][component]` (two components for the full kernel, one otherwise).
pub fn data_rows(part: KernelPart, values: &[Complex64]) -> Vec<f64> {
    part.rows_of(values)
}
