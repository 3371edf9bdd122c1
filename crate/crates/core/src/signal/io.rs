use super::{Axis, Signal1D};
use crate::error::{Error, Result};
use crate::numeric::fmt_sig;
use num_complex::Complex64;
use std::io::{Read, Write};

/// Writes `x,real,imag`.
pub fn write_csv<W: Write>(s: &Signal1D, mut w: W) -> Result<()> {
    writeln!(w, "x,real,imag")?;
    for (x, z) in s.axis().points().zip(s.samples()) {
        writeln!(w, "{},{},{}", fmt_sig(x), fmt_sig(z.re), fmt_sig(z.im))?;
    }
    Ok(())
}

/// Reads `x,real,imag`; the positions must be uniformly spaced.
pub fn read_csv<R: Read>(r: R) -> Result<Signal1D> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "real", "imag"] {
        return Err(Error::config(format!("expected header x,real,imag, found {:?}", headers)));
    }
    let mut xs = Vec::new();
    let mut samples = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i].trim().parse().map_err(|_| Error::config(format!("cannot parse {:?} as a number", &rec[i])))
        };
        xs.push(num(0)?);
        samples.push(Complex64::new(num(1)?, num(2)?));
    }
    if xs.len() < 2 {
        return Err(Error::config("signal CSV needs at least two rows"));
    }
    let dx = xs[1] - xs[0];
    if xs.windows(2).any(|w| ((w[1] - w[0]) - dx).abs() > 1e-9 * dx.abs().max(1e-300)) {
        return Err(Error::config("signal CSV positions are not uniformly spaced"));
    }
    Signal1D::new(Axis::new(xs[0], dx, xs.len())?, samples)
}

/// Writes a little-endian `u64` sample count followed by interleaved `(re, im)` doubles.
pub fn write_binary<W: Write>(s: &Signal1D, mut w: W) -> Result<()> {
    w.write_all(&(s.len() as u64).to_le_bytes())?;
    for z in s.samples() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

/// Reads the binary layout of [`write_binary`] onto the given positions' origin and spacing.
pub fn read_binary<R: Read>(mut r: R, x0: f64, dx: f64) -> Result<Signal1D> {
    let mut head = [0u8; 8];
    r.read_exact(&mut head)?;
    let n = u64::from_le_bytes(head) as usize;
    let mut buf = vec![0u8; 16 * n];
    r.read_exact(&mut buf)?;
    let samples = buf
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    Signal1D::new(Axis::new(x0, dx, n)?, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Signal1D {
        Signal1D::from_fn(Axis::centered(2.0, 16), |x| Complex64::new(x.sin(), 1.0 / 3.0 - x)).unwrap()
    }

    #[test]
    fn binary_is_bit_exact() {
        let s = sample();
        let mut buf = Vec::new();
        write_binary(&s, &mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 16 * 16);
        assert_eq!(&buf[..8], &16u64.to_le_bytes());
        let t = read_binary(buf.as_slice(), -2.0, 0.25).unwrap();
        assert_eq!(t.samples(), s.samples());
    }

    #[test]
    fn csv_keeps_twelve_digits() {
        let s = sample();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,real,imag\n-2,"));
        let t = read_csv(buf.as_slice()).unwrap();
        assert!(t.axis().same_as(&s.axis()));
        assert!(t.rel_diff(&s).unwrap() < 1e-11);
    }

    #[test]
    fn csv_rejects_uneven_positions() {
        let text = "x,real,imag\n0,1,0\n1,1,0\n3,1,0\n4,1,0\n";
        assert!(read_csv(text.as_bytes()).is_err());
    }
}
