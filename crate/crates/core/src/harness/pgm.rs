//! Binary 8-bit PGM (P5).

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Reads a P5 image into a `height x width` matrix of intensities.
pub fn read_pgm(path: &Path) -> Result<DMatrix<f64>> {
    read_pgm_from(BufReader::new(std::fs::File::open(path)?))
}

pub fn read_pgm_from(mut input: impl BufRead) -> Result<DMatrix<f64>> {
    let mut header = Vec::new();
    while header.len() < 4 {
        let token = next_token(&mut input)?;
        header.push(token);
    }
    if header[0] != "P5" {
        return Err(Error::Pgm(format!("expected magic `P5`, found `{}`", header[0])));
    }
    let dim = |s: &str, what: &str| -> Result<usize> { s.parse().map_err(|_| Error::Pgm(format!("bad {what} `{s}`"))) };
    let width = dim(&header[1], "width")?;
    let height = dim(&header[2], "height")?;
    let maxval = dim(&header[3], "maxval")?;
    if maxval != 255 {
        return Err(Error::Pgm(format!("only maxval 255 is supported, found {maxval}")));
    }
    if width == 0 || height == 0 {
        return Err(Error::Pgm("empty image".into()));
    }
    let mut data = vec![0u8; width * height];
    input.read_exact(&mut data).map_err(|_| Error::Pgm("truncated pixel data".into()))?;
    Ok(DMatrix::from_fn(height, width, |r, c| f64::from(data[r * width + c])))
}

/// Reads one whitespace-delimited header token, skipping `#` comments, and
/// consumes the single whitespace byte that follows it.
fn next_token(input: &mut impl BufRead) -> Result<String> {
    let mut token = String::new();
    let mut byte = [0u8; 1];
    loop {
        if input.read(&mut byte)? == 0 {
            return Err(Error::Pgm("unexpected end of header".into()));
        }
        match byte[0] {
            b'#' if token.is_empty() => {
                let mut comment = Vec::new();
                input.read_until(b'\n', &mut comment)?;
            }
            b if b.is_ascii_whitespace() => {
                if !token.is_empty() {
                    return Ok(token);
                }
            }
            b => token.push(b as char),
        }
    }
}

/// Writes `image` as P5, clamping to `[0, 255]` and rounding.
pub fn write_pgm(image: &DMatrix<f64>, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_pgm_to(image, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_pgm_to(image: &DMatrix<f64>, mut out: impl Write) -> Result<()> {
    let (height, width) = image.shape();
    write!(out, "P5\n{width} {height}\n255\n")?;
    let mut data = Vec::with_capacity(width * height);
    for r in 0..height {
        for c in 0..width {
            data.push(image[(r, c)].round().clamp(0.0, 255.0) as u8);
        }
    }
    out.write_all(&data)?;
    Ok(())
}
