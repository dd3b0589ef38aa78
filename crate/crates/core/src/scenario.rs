//! Reference source of the two-dimensional experiments,
//! `f = grad f_p + curl f_s` with
//!
//! `f_p = 0.3 (1-3x)^2 e^{-9x^2-(3y+1)^2} - (0.6x - 27x^3 - 3^5 y^5) e^{-9x^2-9y^2} - 0.03 e^{-(3x+1)^2-9y^2}`,
//! `f_s = 135 x^2 y e^{-9x^2-9y^2}`,
//!
//! supported (up to a negligible tail) in the unit disk.

use crate::error::Result;
use crate::forward::GridField;

/// `(f_p, f_s)` at `(x, y)`.
pub fn potentials(x: f64, y: f64) -> (f64, f64) {
    let e1 = (-9.0 * x * x - (3.0 * y + 1.0).powi(2)).exp();
    let e2 = (-9.0 * x * x - 9.0 * y * y).exp();
    let e3 = (-(3.0 * x + 1.0).powi(2) - 9.0 * y * y).exp();
    let fp = 0.3 * (1.0 - 3.0 * x).powi(2) * e1 - (0.6 * x - 27.0 * x.powi(3) - 243.0 * y.powi(5)) * e2 - 0.03 * e3;
    let fs = 135.0 * x * x * y * e2;
    (fp, fs)
}

/// `grad f_p + (d_y f_s, -d_x f_s)` at `(x, y)`.
pub fn field(x: f64, y: f64) -> [f64; 2] {
    let e1 = (-9.0 * x * x - (3.0 * y + 1.0).powi(2)).exp();
    let e2 = (-9.0 * x * x - 9.0 * y * y).exp();
    let e3 = (-(3.0 * x + 1.0).powi(2) - 9.0 * y * y).exp();
    let a = 1.0 - 3.0 * x;
    let p = 0.6 * x - 27.0 * x.powi(3) - 243.0 * y.powi(5);

    let dpx = 0.3 * (-6.0 * a - 18.0 * x * a * a) * e1 - (0.6 - 81.0 * x * x - 18.0 * x * p) * e2
        + 0.18 * (3.0 * x + 1.0) * e3;
    let dpy = -1.8 * a * a * (3.0 * y + 1.0) * e1 - (-1215.0 * y.powi(4) - 18.0 * y * p) * e2 + 0.54 * y * e3;
    let dsx = 135.0 * (2.0 * x * y - 18.0 * x.powi(3) * y) * e2;
    let dsy = 135.0 * (x * x - 18.0 * x * x * y * y) * e2;
    [dpx + dsy, dpy - dsx]
}

/// The vector source on `n x n` cells over `[-half, half]^2`, clipped to the
/// disk of radius `support` when given.
pub fn field_grid(n: usize, half: f64, support: Option<f64>) -> Result<GridField> {
    let g = GridField::<f64>::centered_cells(2, 2, half, n)?;
    let g = GridField::from_fn(2, g.origin().to_vec(), g.spacing().to_vec(), g.shape().to_vec(), |p, o| {
        o.copy_from_slice(&field(p[0], p[1]))
    })?;
    Ok(match support {
        Some(r) => g.clipped_to(r),
        None => g,
    })
}

/// The two potentials on `n x n` cells over `[-half, half]^2`, optionally clipped.
pub fn potential_grids(n: usize, half: f64, support: Option<f64>) -> Result<(GridField, GridField)> {
    let g = GridField::<f64>::centered_cells(2, 1, half, n)?;
    let make = |which: usize| -> Result<GridField> {
        let f = GridField::from_fn(1, g.origin().to_vec(), g.spacing().to_vec(), g.shape().to_vec(), |p, o| {
            let (a, b) = potentials(p[0], p[1]);
            o[0] = if which == 0 { a } else { b };
        })?;
        Ok(match support {
            Some(r) => f.clipped_to(r),
            None => f,
        })
    };
    Ok((make(0)?, make(1)?))
}
