//! Fixed inputs shared by the benchmarks.

use qbilat::{Complex, QBase, SeriesSpec};

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn base() -> QBase {
    QBase::new(c(0.45, 0.2)).expect("|q| < 1")
}

/// A `2 phi 1` at a complex point inside the unit disk.
pub fn phi_spec(z: Complex) -> SeriesSpec {
    SeriesSpec::phi(vec![c(0.7, 0.3), c(-0.4, 0.9)], vec![c(0.2, -0.6)], z, base())
}

/// A `2 psi 2` whose annulus contains `|z| = 0.5`.
pub fn psi_spec() -> SeriesSpec {
    SeriesSpec::psi(
        vec![c(1.1, 0.3), c(0.7, -0.5)],
        vec![c(0.4, 0.2), c(0.3, -0.1)],
        c(0.5, 0.1),
        base(),
    )
}
