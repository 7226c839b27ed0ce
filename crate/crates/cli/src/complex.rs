use qbilat::Complex;

/// Parses `1.2`, `1.2+0.3i`, `-0.5i`, `i` or `1e-3-2i` without whitespace.
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let err = || format!("invalid complex literal {s:?} (expected re, re+imi or imi)");
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex::new(re, 0.0)).map_err(|_| err());
    };
    // the split is the last sign not opening the string or an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| err()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| err())?;
            Ok(Complex::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex::new(0.0, imag(body)?)),
    }
}

pub fn parse_list(s: &str) -> Result<Vec<Complex>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_complex).collect()
}

pub fn format_complex(z: Complex) -> String {
    format!("{}{:+}i", z.re, z.im)
}
