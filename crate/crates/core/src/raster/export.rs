//! File formats: binary PGM (P5) for masks, and a flat little-endian `f64`
//! distance field behind a short text header.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::{DistanceField, Frame, Grid};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Scalar;

/// Writes the mask as an 8-bit P5 image, top row first, on-cells white.
pub fn write_pgm<T: Scalar>(g: &Grid<T>, path: impl AsRef<Path>) -> Result<()> {
    let (nx, ny) = (g.frame.nx, g.frame.ny);
    let mut buf = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    buf.reserve(nx * ny);
    for j in (0..ny).rev() {
        buf.extend(g.mask[j * nx..(j + 1) * nx].iter().map(|&b| if b { 255u8 } else { 0 }));
    }
    std::fs::write(path, buf)?;
    Ok(())
}

const MAGIC: &str = "steinerlab-distance-field v1";

/// Header lines `nx ny`, `h`, `ox oy`, then `nx·ny` little-endian `f64`
/// values row by row from the bottom row.
pub fn write_distance_field<T: Scalar>(d: &DistanceField<T>, path: impl AsRef<Path>) -> Result<()> {
    let f = d.frame;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "{} {}", f.nx, f.ny)?;
    writeln!(out, "{}", f.h.as_f64())?;
    writeln!(out, "{} {}", f.origin.x.as_f64(), f.origin.y.as_f64())?;
    for v in &d.dist {
        out.write_all(&v.as_f64().to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_distance_field(path: impl AsRef<Path>) -> Result<DistanceField<f64>> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut line = String::new();
    let mut next = |r: &mut BufReader<std::fs::File>| -> Result<Vec<String>> {
        line.clear();
        r.read_line(&mut line)?;
        Ok(line.split_whitespace().map(str::to_owned).collect())
    };
    let bad = |what: &str| Error::parse("distance field header", what.to_string());
    if next(&mut r)?.join(" ") != MAGIC {
        return Err(bad("missing magic line"));
    }
    let dims = next(&mut r)?;
    let nums = |v: &[String]| -> Result<Vec<f64>> {
        v.iter().map(|s| s.parse::<f64>().map_err(|_| bad("expected numbers"))).collect()
    };
    let dims = nums(&dims)?;
    let h = nums(&next(&mut r)?)?;
    let o = nums(&next(&mut r)?)?;
    if dims.len() != 2 || h.len() != 1 || o.len() != 2 {
        return Err(bad("malformed header"));
    }
    let (nx, ny) = (dims[0] as usize, dims[1] as usize);
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != nx * ny * 8 {
        return Err(bad("payload size does not match nx·ny"));
    }
    let dist = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(DistanceField {
        frame: Frame {
            origin: Point::new(o[0], o[1]),
            h: h[0],
            nx,
            ny,
        },
        dist,
    })
}
