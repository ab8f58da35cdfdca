use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use image::{ImageError, ImageFormat, ImageReader, RgbImage};

use super::{ColorImage, GrayImage};
use crate::{Error, Result};

/// Largest accepted decode, in pixels.
pub const MAX_PIXELS: u64 = 1 << 28;

fn unreadable(path: &Path, source: std::io::Error) -> Error {
    Error::Unreadable {
        path: path.to_path_buf(),
        source,
    }
}

fn map_decode_error(path: &Path, e: ImageError) -> Error {
    match e {
        ImageError::IoError(source) => unreadable(path, source),
        ImageError::Unsupported(u) => Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: u.to_string(),
        },
        ImageError::Limits(_) => Error::DimensionOverflow {
            path: path.to_path_buf(),
            width: 0,
            height: 0,
        },
        other => unreadable(path, std::io::Error::other(other.to_string())),
    }
}

/// Decodes a PNG or JPEG file into 8-bit RGB. Alpha is dropped and deeper
/// samples are reduced to 8 bits. The format is taken from the file
/// contents, never from the extension.
pub fn load_image(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    let mut magic = Vec::with_capacity(16);
    File::open(path)
        .and_then(|f| f.take(16).read_to_end(&mut magic))
        .map_err(|e| unreadable(path, e))?;
    let format = match image::guess_format(&magic) {
        Ok(f @ (ImageFormat::Png | ImageFormat::Jpeg)) => f,
        Ok(other) => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                reason: format!("{other:?} is not supported"),
            })
        }
        Err(_) => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                reason: "unrecognised file contents".into(),
            })
        }
    };
    let open = || -> Result<ImageReader<BufReader<File>>> {
        let mut reader = ImageReader::open(path).map_err(|e| unreadable(path, e))?;
        reader.set_format(format);
        Ok(reader)
    };
    let (w, h) = open()?.into_dimensions().map_err(|e| map_decode_error(path, e))?;
    if w == 0 || h == 0 || u64::from(w) * u64::from(h) > MAX_PIXELS {
        return Err(Error::DimensionOverflow {
            path: path.to_path_buf(),
            width: w.into(),
            height: h.into(),
        });
    }
    let rgb = open()?.decode().map_err(|e| map_decode_error(path, e))?.into_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let data = rgb.pixels().map(|p| p.0).collect();
    ColorImage::new(w, h, data)
}

/// Writes an 8-bit RGB PNG regardless of the file extension.
pub fn save_image(img: &ColorImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let write_err = |reason: String| Error::Write {
        path: path.to_path_buf(),
        reason,
    };
    let buf = RgbImage::from_raw(img.width() as u32, img.height() as u32, img.as_bytes())
        .ok_or_else(|| write_err("buffer size mismatch".into()))?;
    buf.save_with_format(path, ImageFormat::Png)
        .map_err(|e| write_err(e.to_string()))
}

/// Binary PGM (P5) dump of a gray image.
pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let write = || -> std::io::Result<()> {
        let mut f = BufWriter::new(File::create(path)?);
        write!(f, "P5\n{} {}\n255\n", img.width(), img.height())?;
        f.write_all(img.pixels())?;
        f.flush()
    };
    write().map_err(|e| Error::Write {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Single-channel little-endian PFM dump. PFM stores rows bottom to top.
pub fn write_pfm(width: usize, height: usize, data: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if data.len() != width * height {
        return Err(Error::InvalidParameter(format!(
            "PFM payload has {} values for {width}x{height}",
            data.len()
        )));
    }
    let write = || -> std::io::Result<()> {
        let mut f = BufWriter::new(File::create(path)?);
        write!(f, "Pf\n{width} {height}\n-1.0\n")?;
        for row in data.chunks(width).rev() {
            for &v in row {
                f.write_all(&(v as f32).to_le_bytes())?;
            }
        }
        f.flush()
    };
    write().map_err(|e| Error::Write {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}
