use crate::error::{QError, Result};
use crate::Complex;
use std::f64::consts::PI;

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Argument of the gamma function, guaranteed not to be a pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaArg(Complex);

impl GammaArg {
    pub fn new(x: Complex) -> Result<Self> {
        if x.im == 0.0 && x.re <= 0.0 && x.re.fract() == 0.0 {
            return Err(QError::PoleAtNonpositiveInteger(x.re));
        }
        Ok(Self(x))
    }

    pub fn value(&self) -> Complex {
        self.0
    }
}

impl TryFrom<f64> for GammaArg {
    type Error = QError;

    fn try_from(x: f64) -> Result<Self> {
        Self::new(Complex::new(x, 0.0))
    }
}

/// Complex gamma function; reflection is used for `Re x < 1/2`.
pub fn gamma(x: GammaArg) -> Complex {
    lanczos(x.0)
}

/// Real gamma function.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(gamma(GammaArg::try_from(x)?).re)
}

fn lanczos(z: Complex) -> Complex {
    if z.re < 0.5 {
        let pi = Complex::new(PI, 0.0);
        return pi / ((pi * z).sin() * lanczos(Complex::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}
