//! Reading and writing grayscale rasters.
//!
//! PGM (binary `P5` and ASCII `P2`) with maxval 255 is read and written
//! bit-exactly. 8-bit grayscale PNG is accepted on input only.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::GrayImage;

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Reads a PGM or 8-bit grayscale PNG file.
pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    decode(&fs::read(path)?)
}

/// Writes `img` as binary PGM (`P5`, maxval 255).
pub fn write_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}

/// Decodes an in-memory PGM or PNG, dispatching on the magic bytes.
pub fn decode(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.starts_with(PNG_SIGNATURE) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P5") || bytes.starts_with(b"P2") {
        decode_pgm(bytes)
    } else {
        Err(Error::UnsupportedFormat(match bytes.get(..2) {
            Some(magic) => format!("unrecognized magic {:?}", String::from_utf8_lossy(magic)),
            None => "file too short".into(),
        }))
    }
}

/// Serializes `img` as binary PGM.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

/// Serializes `img` as ASCII PGM, 16 samples per line.
pub fn encode_pgm_ascii(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P2\n{} {}\n255\n", img.width(), img.height());
    for line in img.pixels().chunks(16) {
        let values: Vec<String> = line.iter().map(u8::to_string).collect();
        out.push_str(&values.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

/// Cursor over a netpbm header: whitespace-separated tokens with `#` comments.
struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n' && c != b'\r') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        let tok = self
            .token()
            .ok_or_else(|| Error::CorruptHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Error::CorruptHeader(format!("bad {what} {:?}", String::from_utf8_lossy(tok)))
            })
    }
}

/// Decodes `P5` or `P2` data with maxval 255.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut header = HeaderReader { bytes, pos: 0 };
    let binary = match header.token() {
        Some(b"P5") => true,
        Some(b"P2") => false,
        Some(other) => {
            return Err(Error::UnsupportedFormat(format!(
                "netpbm magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
        None => return Err(Error::CorruptHeader("empty file".into())),
    };
    let width = header.number("width")?;
    let height = header.number("height")?;
    let maxval = header.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::CorruptHeader(format!("dimensions {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::CorruptHeader(format!("maxval {maxval} out of range")));
    }
    if maxval != 255 {
        return Err(Error::MaxvalNot255(maxval));
    }
    let count = width as usize * height as usize;

    let pixels = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        match bytes.get(header.pos) {
            Some(b) if b.is_ascii_whitespace() => {}
            _ => return Err(Error::CorruptHeader("no separator after maxval".into())),
        }
        let data = &bytes[header.pos + 1..];
        if data.len() < count {
            return Err(Error::CorruptHeader(format!(
                "raster has {} of {count} bytes",
                data.len()
            )));
        }
        data[..count].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            let v = header.number("sample")?;
            let v = u8::try_from(v)
                .map_err(|_| Error::CorruptHeader(format!("sample {v} exceeds maxval")))?;
            pixels.push(v);
        }
        pixels
    };
    GrayImage::new(width, height, pixels)
}

/// Decodes an 8-bit grayscale PNG; every other color type or depth is rejected.
pub fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let png_err = |e: png::DecodingError| Error::CorruptHeader(format!("png: {e}"));
    let decoder = png::Decoder::new(Cursor::new(bytes));
    let mut reader = decoder.read_info().map_err(png_err)?;
    let (color, depth) = {
        let info = reader.info();
        (info.color_type, info.bit_depth)
    };
    if color != png::ColorType::Grayscale || depth != png::BitDepth::Eight {
        return Err(Error::UnsupportedFormat(format!(
            "png {color:?} {depth:?}; only 8-bit grayscale is accepted"
        )));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::CorruptHeader("png: image too large".into()))?;
    let mut buf = vec![0; size];
    let out = reader.next_frame(&mut buf).map_err(png_err)?;
    let row = out.width as usize;
    let pixels = buf
        .chunks(out.line_size)
        .take(out.height as usize)
        .flat_map(|line| &line[..row])
        .copied()
        .collect();
    GrayImage::new(out.width, out.height, pixels)
}
