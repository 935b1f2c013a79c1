use std::io::{Read, Write};

use rustfft::num_complex::Complex64;

use super::{PeriodicField, PeriodicGrid};
use crate::error::{Error, Result};

/// Writes the binary layout: little-endian `u64` header `(d, n, real)`
/// followed by row-major complex samples as pairs of `f64`.
pub fn write_field_binary<W: Write>(field: &PeriodicField, mut w: W) -> Result<()> {
    let grid = field.grid();
    for h in [grid.dim() as u64, grid.n() as u64, u64::from(field.is_real())] {
        w.write_all(&h.to_le_bytes())?;
    }
    for v in field.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field_binary<R: Read>(mut r: R) -> Result<PeriodicField> {
    let mut word = [0u8; 8];
    let mut header = [0u64; 3];
    for h in &mut header {
        r.read_exact(&mut word)?;
        *h = u64::from_le_bytes(word);
    }
    if header[2] > 1 {
        return Err(Error::domain(format!("bad real flag {} in field header", header[2])));
    }
    let grid = PeriodicGrid::new(header[0] as usize, header[1] as usize)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        r.read_exact(&mut word)?;
        let re = f64::from_le_bytes(word);
        r.read_exact(&mut word)?;
        let im = f64::from_le_bytes(word);
        values.push(Complex64::new(re, im));
    }
    let field = PeriodicField::from_values(grid, values)?;
    Ok(if header[2] == 1 { field.into_real() } else { field })
}

/// CSV with columns `x, Re v, Im v` (`x, y, Re v, Im v` in two dimensions).
pub fn write_field_csv<W: Write>(field: &PeriodicField, mut w: W) -> Result<()> {
    let grid = field.grid();
    match grid.dim() {
        1 => writeln!(w, "x,re,im")?,
        _ => writeln!(w, "x,y,re,im")?,
    }
    for (i, v) in field.values().iter().enumerate() {
        let coords: Vec<String> = grid.point(i).iter().map(|c| format!("{c}")).collect();
        writeln!(w, "{},{:e},{:e}", coords.join(","), v.re, v.im)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let g = PeriodicGrid::new(2, 8).unwrap();
        let f = PeriodicField::from_fn(g, |x| (x[0] * 3.0).sin() + x[1]);
        let mut buf = Vec::new();
        write_field_binary(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 24 + 16 * 64);
        let back = read_field_binary(buf.as_slice()).unwrap();
        assert!(back.is_real());
        assert_eq!(back.values(), f.values());
        assert!(read_field_binary(&buf[..30]).is_err());
    }

    #[test]
    fn csv_layout() {
        let g = PeriodicGrid::new(1, 8).unwrap();
        let f = PeriodicField::from_fn(g, |x| x[0]);
        let mut buf = Vec::new();
        write_field_csv(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], "x,re,im");
        assert!(lines[2].starts_with("0.125,"));
    }
}
