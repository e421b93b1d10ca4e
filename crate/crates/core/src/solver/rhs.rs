use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Mask of retained modes: `|m| <= dealias_fraction * n / 2` per axis, Nyquist
/// excluded.
pub(crate) fn dealias_mask(grid: &Grid) -> Vec<bool> {
    let frac = grid.spec().dealias_fraction;
    let (na, nb) = (grid.n_a(), grid.n_b());
    let lim_a = frac * na as f64 / 2.0;
    let lim_b = frac * nb as f64 / 2.0;
    let mut mask = vec![false; na * nb];
    for i in 0..na {
        for j in 0..nb {
            mask[i * nb + j] = !grid.is_nyquist(i, j)
                && (grid.a.index[i].abs() as f64) <= lim_a
                && (grid.b.index[j].abs() as f64) <= lim_b;
        }
    }
    mask
}

/// `-(d_a + d_b)(v^3)` with the cube formed on the 2x padded grid.
pub(crate) fn cubic_term(grid: &Grid, coeffs: &[Complex64], mask: &[bool]) -> Result<Vec<Complex64>> {
    let mut phys = grid.inverse_padded(coeffs);
    let mut finite = true;
    for c in phys.iter_mut() {
        let v = c.re;
        finite &= v.is_finite();
        *c = Complex64::new(v * v * v, 0.0);
    }
    if !finite {
        return Err(Error::NonFinite("nonlinear term"));
    }
    let mut hat = grid.forward_padded(phys);
    let nb = grid.n_b();
    for (idx, c) in hat.iter_mut().enumerate() {
        if mask[idx] {
            let (i, j) = (idx / nb, idx % nb);
            let d = grid.a.k_odd[i] + grid.b.k_odd[j];
            // -(i d) c
            *c = Complex64::new(d * c.im, -d * c.re);
        } else {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    Ok(hat)
}

/// Dealiased `-(d_a + d_b)(v^3)` for the field with coefficients `sf`.
pub fn nonlinear_rhs(grid: &Grid, sf: &SpectralField) -> Result<SpectralField> {
    grid.spec().check_same(&sf.grid)?;
    let mask = dealias_mask(grid);
    Ok(SpectralField {
        grid: sf.grid,
        coeffs: cubic_term(grid, &sf.coeffs, &mask)?,
        time: sf.time,
    })
}
