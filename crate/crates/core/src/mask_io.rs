//! Binary masks, grayscale images and their on-disk formats.
//!
//! Two containers are supported, both 8-bit single-channel: PNG and binary
//! PGM (P5, maxval 255). Pixel `(x, y)` means column `x`, row `y`, origin at
//! the top-left corner; data is stored row-major. This convention is shared
//! by every module in the crate.
//!
//! A stored value `>= 128` loads as foreground; foreground saves as 255 and
//! background as 0, so `{0, 255}` ground-truth masks and anti-aliased masks
//! both load deterministically.

use std::fs;
use std::path::Path;

use image::{DynamicImage, ImageFormat};

use crate::error::{Error, Result};

/// Stored values at or above this load as foreground.
pub const FOREGROUND_THRESHOLD: u8 = 128;

/// A rectangular grid of foreground/background pixels.
///
/// `0x0` masks are legal and propagate through every pipeline stage as empty
/// results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    data: Vec<bool>,
}

impl BinaryMask {
    /// All-background mask of the given dimensions.
    pub fn new(width: u32, height: u32) -> Self {
        BinaryMask {
            width,
            height,
            data: vec![false; width as usize * height as usize],
        }
    }

    /// Builds a mask from row-major pixel data; the length must equal
    /// `width * height`.
    pub fn from_data(width: u32, height: u32, data: Vec<bool>) -> Result<Self> {
        if data.len() != width as usize * height as usize {
            return Err(Error::BufferSize {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(BinaryMask {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> usize {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of bounds"
        );
        y as usize * self.width as usize + x as usize
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        self.data[self.index(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        let i = self.index(x, y);
        self.data[i] = value;
    }

    pub fn count_foreground(&self) -> u64 {
        self.data.iter().filter(|&&p| p).count() as u64
    }

    /// Foreground pixel coordinates in raster order.
    pub fn foreground_pixels(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width;
        self.data
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p)
            .map(move |(i, _)| ((i % w as usize) as u32, (i / w as usize) as u32))
    }

    /// Pixel-wise subset test; panics on dimension mismatch.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        assert_eq!((self.width, self.height), (other.width, other.height));
        self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }

    /// Pixel-wise union in place; panics on dimension mismatch.
    pub fn union_with(&mut self, other: &BinaryMask) {
        assert_eq!((self.width, self.height), (other.width, other.height));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a |= b;
        }
    }
}

/// A grayscale image with intensities in `[0, 1]`, the carrier for model
/// probability maps and noise injection.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    data: Vec<f32>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32) -> Self {
        GrayImage {
            width,
            height,
            data: vec![0.0; width as usize * height as usize],
        }
    }

    /// Builds an image from row-major intensities; every value must lie in
    /// `[0, 1]` and the length must equal `width * height`.
    pub fn from_data(width: u32, height: u32, data: Vec<f32>) -> Result<Self> {
        if data.len() != width as usize * height as usize {
            return Err(Error::BufferSize {
                width,
                height,
                len: data.len(),
            });
        }
        for (index, &value) in data.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::IntensityRange { index, value });
            }
        }
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> f32 {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of bounds"
        );
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: f32) {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of bounds"
        );
        debug_assert!((0.0..=1.0).contains(&value));
        self.data[y as usize * self.width as usize + x as usize] = value;
    }
}

/// Thresholds a probability map into a mask: foreground iff intensity `>= t`.
pub fn threshold(image: &GrayImage, t: f64) -> Result<BinaryMask> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ThresholdRange(t));
    }
    let data = image.data.iter().map(|&v| v as f64 >= t).collect();
    Ok(BinaryMask {
        width: image.width,
        height: image.height,
        data,
    })
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

enum Container {
    Png,
    Pgm,
}

fn sniff(path: &Path, bytes: &[u8]) -> Result<Container> {
    if bytes.starts_with(b"\x89PNG\r\n\x1a\n") {
        Ok(Container::Png)
    } else if bytes.starts_with(b"P5") {
        Ok(Container::Pgm)
    } else {
        Err(Error::unsupported_image(
            path,
            "not a PNG or binary PGM (P5) file",
        ))
    }
}

/// Loads an 8-bit single-channel image as `(width, height, bytes)`.
fn load_gray8(path: &Path) -> Result<(u32, u32, Vec<u8>)> {
    let bytes = read_bytes(path)?;
    match sniff(path, &bytes)? {
        Container::Png => {
            let img = image::load_from_memory_with_format(&bytes, ImageFormat::Png)
                .map_err(|e| Error::invalid_image(path, e.to_string()))?;
            match img {
                DynamicImage::ImageLuma8(buf) => {
                    let (w, h) = buf.dimensions();
                    Ok((w, h, buf.into_raw()))
                }
                other => Err(Error::unsupported_image(
                    path,
                    format!("expected 8-bit grayscale, got {:?}", other.color()),
                )),
            }
        }
        Container::Pgm => parse_pgm(path, &bytes),
    }
}

/// Strict binary PGM (P5) parser. Accepts `#` comments in the header,
/// requires maxval 255 and exactly `width * height` payload bytes.
/// Zero-sized images are legal.
fn parse_pgm(path: &Path, bytes: &[u8]) -> Result<(u32, u32, Vec<u8>)> {
    let bad = |reason: &str| Error::invalid_image(path, reason);
    let mut pos = 2; // past "P5"

    let next_int = |pos: &mut usize| -> Result<u64> {
        // skip whitespace and comments
        loop {
            match bytes.get(*pos) {
                Some(b) if b.is_ascii_whitespace() => *pos += 1,
                Some(b'#') => {
                    while let Some(&b) = bytes.get(*pos) {
                        *pos += 1;
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        let start = *pos;
        while bytes.get(*pos).is_some_and(|b| b.is_ascii_digit()) {
            *pos += 1;
        }
        if *pos == start {
            return Err(bad("malformed PGM header"));
        }
        std::str::from_utf8(&bytes[start..*pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("malformed PGM header"))
    };

    let width = next_int(&mut pos)?;
    let height = next_int(&mut pos)?;
    let maxval = next_int(&mut pos)?;
    if width > u32::MAX as u64 || height > u32::MAX as u64 {
        return Err(bad("PGM dimensions too large"));
    }
    if maxval != 255 {
        return Err(Error::unsupported_image(
            path,
            format!("PGM maxval {maxval}, expected 255"),
        ));
    }
    if !bytes.get(pos).is_some_and(|b| b.is_ascii_whitespace()) {
        return Err(bad("missing whitespace after PGM maxval"));
    }
    pos += 1;
    let expected = width as usize * height as usize;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(bad("PGM pixel data truncated"));
    }
    if payload.len() > expected {
        return Err(bad("trailing bytes after PGM pixel data"));
    }
    Ok((width as u32, height as u32, payload.to_vec()))
}

fn write_pgm(path: &Path, width: u32, height: u32, data: &[u8]) -> Result<()> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(data);
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn save_gray8(path: &Path, width: u32, height: u32, data: &[u8]) -> Result<()> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("png") => {
            if width == 0 || height == 0 {
                return Err(Error::invalid_image(
                    path,
                    "PNG cannot represent a zero-sized image; use PGM",
                ));
            }
            let buf = image::GrayImage::from_raw(width, height, data.to_vec())
                .expect("dimensions match buffer");
            buf.save_with_format(path, ImageFormat::Png)
                .map_err(|e| Error::invalid_image(path, e.to_string()))
        }
        Some("pgm") => write_pgm(path, width, height, data),
        _ => Err(Error::unsupported_image(
            path,
            "unknown extension, expected .png or .pgm",
        )),
    }
}

/// Loads a mask from a PNG or PGM file; a stored value `>= 128` is foreground.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let (width, height, raw) = load_gray8(path.as_ref())?;
    let data = raw.iter().map(|&v| v >= FOREGROUND_THRESHOLD).collect();
    Ok(BinaryMask {
        width,
        height,
        data,
    })
}

/// Saves a mask with foreground as 255 and background as 0. The extension
/// selects the container (`.png` or `.pgm`).
pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    let raw: Vec<u8> = mask.data.iter().map(|&p| if p { 255 } else { 0 }).collect();
    save_gray8(path.as_ref(), mask.width, mask.height, &raw)
}

/// Loads a grayscale image with intensities mapped to `v / 255`.
pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    let (width, height, raw) = load_gray8(path.as_ref())?;
    let data = raw.iter().map(|&v| v as f32 / 255.0).collect();
    Ok(GrayImage {
        width,
        height,
        data,
    })
}

/// Saves a grayscale image; intensities are rounded to `round(v * 255)`.
pub fn save_gray(image: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let raw: Vec<u8> = image
        .data
        .iter()
        .map(|&v| (v as f64 * 255.0).round().clamp(0.0, 255.0) as u8)
        .collect();
    save_gray8(path.as_ref(), image.width, image.height, &raw)
}
