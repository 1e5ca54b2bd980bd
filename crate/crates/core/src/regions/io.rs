use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{essentiality_class, EssentialityClass, GridRegion, Window};
use crate::error::{Error, Result};

pub const TRGR_MAGIC: &[u8; 4] = b"TRGR";
pub const TRGR_VERSION: u32 = 1;
pub const TRGR_HEADER_LEN: usize = 64;

/// Serialise as a 64-byte header followed by row-major bits, bottom row
/// first, least significant bit first within each byte.
///
/// Header layout (little endian): magic, version `u32`, `x0, x1, y0, y1` as
/// `f64`, resolution `u32`, columns `u32`, rows `u32`, zero padding.
pub fn write_trgr(region: &GridRegion, mut out: impl Write) -> Result<()> {
    let w = region.window();
    let mut header = [0u8; TRGR_HEADER_LEN];
    header[0..4].copy_from_slice(TRGR_MAGIC);
    header[4..8].copy_from_slice(&TRGR_VERSION.to_le_bytes());
    for (k, c) in [w.x0, w.x1, w.y0, w.y1].iter().enumerate() {
        header[8 + 8 * k..16 + 8 * k].copy_from_slice(&(*c as f64).to_le_bytes());
    }
    header[40..44].copy_from_slice(&region.resolution().to_le_bytes());
    header[44..48].copy_from_slice(&(region.cols() as u32).to_le_bytes());
    header[48..52].copy_from_slice(&(region.rows() as u32).to_le_bytes());
    out.write_all(&header)?;
    let mut packed = vec![0u8; region.len().div_ceil(8)];
    for k in region.marked_indices() {
        packed[k / 8] |= 1 << (k % 8);
    }
    out.write_all(&packed)?;
    Ok(())
}

pub fn read_trgr(mut input: impl Read) -> Result<GridRegion> {
    let mut header = [0u8; TRGR_HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|e| Error::Format(format!("truncated header: {e}")))?;
    if &header[0..4] != TRGR_MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(header[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != TRGR_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let window = Window::from_reals(f64_at(8), f64_at(16), f64_at(24), f64_at(32))
        .map_err(|e| Error::Format(e.to_string()))?;
    let resolution = u32_at(40);
    let empty = GridRegion::empty(window, resolution).map_err(|e| Error::Format(e.to_string()))?;
    if u32_at(44) as usize != empty.cols() || u32_at(48) as usize != empty.rows() {
        return Err(Error::Format("dimensions do not match window and resolution".into()));
    }
    let mut packed = vec![0u8; empty.len().div_ceil(8)];
    input
        .read_exact(&mut packed)
        .map_err(|e| Error::Format(format!("truncated bitmap: {e}")))?;
    let bits = (0..empty.len()).map(|k| packed[k / 8] >> (k % 8) & 1 == 1).collect();
    GridRegion::from_bits(window, resolution, bits)
}

/// Greyscale PNG mask, top image row at the top of the window.
pub fn write_png(region: &GridRegion, path: &Path) -> Result<()> {
    let (cols, rows) = (region.cols() as u32, region.rows() as u32);
    let img = image::GrayImage::from_fn(cols, rows, |x, y| {
        let j = (rows - 1 - y) as usize;
        image::Luma([if region.get(x as usize, j) { 255 } else { 0 }])
    });
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::Image(e.to_string()))
}

/// Compact description of a raster for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub window: Window,
    pub resolution: u32,
    pub cells: usize,
    pub marked: usize,
    pub components: usize,
    pub touches_boundary: bool,
    pub essentiality: Option<EssentialityClass>,
}

impl RegionSummary {
    /// Summarise; the essentiality class is included when the raster is periodic.
    pub fn of(region: &GridRegion) -> RegionSummary {
        RegionSummary {
            window: region.window(),
            resolution: region.resolution(),
            cells: region.len(),
            marked: region.count(),
            components: region.component_count(),
            touches_boundary: region.touches_boundary(),
            essentiality: essentiality_class(region).ok(),
        }
    }
}
