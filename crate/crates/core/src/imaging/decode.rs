//! Minimal decoders for the two sensor capture formats: binary PPM (P6,
//! maxval 255) and uncompressed 24-bit BMP.

use thiserror::Error;

use super::RgbImage;
use crate::scalar::{real, Real};

/// Decode failures, one variant per failure class so callers can tell a
/// malformed file from an unsupported-but-valid one.
#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("unrecognized image format (expected P6 PPM or BM bitmap magic)")]
    UnknownFormat,
    #[error("malformed {format} header: {detail}")]
    MalformedHeader {
        format: &'static str,
        detail: String,
    },
    #[error("unsupported {format} variant: {detail}")]
    Unsupported {
        format: &'static str,
        detail: String,
    },
    #[error("truncated {format} pixel data: need {expected} bytes, found {found}")]
    Truncated {
        format: &'static str,
        expected: usize,
        found: usize,
    },
}

/// Decodes raw file content into an [`RgbImage`], sniffing the format from
/// the magic bytes. Channels are returned exactly as stored; no color
/// transform is applied.
pub fn load_image<R: Real>(bytes: &[u8]) -> Result<RgbImage<R>, DecodeError> {
    match bytes {
        [b'P', b'6', ..] => decode_ppm(bytes),
        [b'B', b'M', ..] => decode_bmp(bytes),
        _ => Err(DecodeError::UnknownFormat),
    }
}

fn ppm_malformed(detail: impl Into<String>) -> DecodeError {
    DecodeError::MalformedHeader {
        format: "PPM",
        detail: detail.into(),
    }
}

/// Reads the next whitespace-delimited header token, skipping `#` comments.
/// Returns the token and the offset just past it.
fn ppm_token(bytes: &[u8], mut pos: usize) -> Result<(usize, usize), DecodeError> {
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        break;
    }
    let start = pos;
    while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    if start == pos {
        return Err(ppm_malformed("header ended before all fields were read"));
    }
    let token = std::str::from_utf8(&bytes[start..pos])
        .map_err(|_| ppm_malformed("non-ASCII header field"))?;
    let value: usize = token
        .parse()
        .map_err(|_| ppm_malformed(format!("expected a number, got {token:?}")))?;
    Ok((value, pos))
}

fn decode_ppm<R: Real>(bytes: &[u8]) -> Result<RgbImage<R>, DecodeError> {
    let (width, pos) = ppm_token(bytes, 2)?;
    let (height, pos) = ppm_token(bytes, pos)?;
    let (maxval, pos) = ppm_token(bytes, pos)?;
    if maxval != 255 {
        return Err(DecodeError::Unsupported {
            format: "PPM",
            detail: format!("maxval {maxval} (only 255 is supported)"),
        });
    }
    if width == 0 || height == 0 {
        return Err(ppm_malformed(format!("zero dimension {width}x{height}")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(ppm_malformed("missing whitespace before pixel data"));
    }
    let data = &bytes[pos + 1..];
    let expected = width * height * 3;
    if data.len() < expected {
        return Err(DecodeError::Truncated {
            format: "PPM",
            expected,
            found: data.len(),
        });
    }
    let pixels = data[..expected]
        .chunks_exact(3)
        .map(|c| {
            [
                real::<R>(c[0] as f64),
                real::<R>(c[1] as f64),
                real::<R>(c[2] as f64),
            ]
        })
        .collect();
    Ok(RgbImage::new(width, height, pixels).expect("byte channels are in range"))
}

fn bmp_malformed(detail: impl Into<String>) -> DecodeError {
    DecodeError::MalformedHeader {
        format: "BMP",
        detail: detail.into(),
    }
}

fn le_u16(bytes: &[u8], at: usize) -> Result<u16, DecodeError> {
    bytes
        .get(at..at + 2)
        .map(|b| u16::from_le_bytes([b[0], b[1]]))
        .ok_or_else(|| bmp_malformed(format!("header field at offset {at} out of bounds")))
}

fn le_u32(bytes: &[u8], at: usize) -> Result<u32, DecodeError> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| bmp_malformed(format!("header field at offset {at} out of bounds")))
}

fn decode_bmp<R: Real>(bytes: &[u8]) -> Result<RgbImage<R>, DecodeError> {
    let pixel_offset = le_u32(bytes, 10)? as usize;
    let dib_size = le_u32(bytes, 14)? as usize;
    if dib_size < 40 {
        return Err(DecodeError::Unsupported {
            format: "BMP",
            detail: format!("DIB header size {dib_size} (need BITMAPINFOHEADER or later)"),
        });
    }
    let width = le_u32(bytes, 18)? as i32;
    let raw_height = le_u32(bytes, 22)? as i32;
    let bit_count = le_u16(bytes, 28)?;
    let compression = le_u32(bytes, 30)?;
    if bit_count != 24 {
        return Err(DecodeError::Unsupported {
            format: "BMP",
            detail: format!("{bit_count}-bit pixels (only 24-bit is supported)"),
        });
    }
    if compression != 0 {
        return Err(DecodeError::Unsupported {
            format: "BMP",
            detail: format!("compression type {compression} (only BI_RGB is supported)"),
        });
    }
    if width <= 0 || raw_height == 0 {
        return Err(bmp_malformed(format!(
            "dimensions {width}x{raw_height} out of range"
        )));
    }
    // Positive height means bottom-up row order; negative means top-down.
    let bottom_up = raw_height > 0;
    let height = raw_height.unsigned_abs() as usize;
    let width = width as usize;
    let row_size = (3 * width).div_ceil(4) * 4;
    let expected = row_size * height;
    let found = bytes.len().saturating_sub(pixel_offset);
    if found < expected {
        return Err(DecodeError::Truncated {
            format: "BMP",
            expected,
            found,
        });
    }

    let mut pixels = Vec::with_capacity(width * height);
    for row in 0..height {
        let stored_row = if bottom_up { height - 1 - row } else { row };
        let start = pixel_offset + stored_row * row_size;
        for col in 0..width {
            let at = start + 3 * col;
            // Stored byte order is BGR.
            let (b, g, r) = (bytes[at], bytes[at + 1], bytes[at + 2]);
            pixels.push([
                real::<R>(r as f64),
                real::<R>(g as f64),
                real::<R>(b as f64),
            ]);
        }
    }
    Ok(RgbImage::new(width, height, pixels).expect("byte channels are in range"))
}

#[cfg(test)]
mod tests {
    use super::*;

    // 1x1 blue pixel, written by a reference image tool (BITMAPINFOHEADER,
    // 24-bit, bottom-up, row padded to 4 bytes).
    const BMP_1X1_BLUE: &[u8] = &[
        0x42, 0x4d, 0x3a, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x36, 0x00, 0x00, 0x00, 0x28,
        0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x00, 0x18, 0x00,
        0x00, 0x00, 0x00, 0x00, 0x04, 0x00, 0x00, 0x00, 0xc4, 0x0e, 0x00, 0x00, 0xc4, 0x0e, 0x00,
        0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0xff, 0x00, 0x00, 0x00,
    ];

    // 2x2 image from the same tool: top row red, green; bottom row blue,
    // white. Exercises bottom-up order plus the 2-byte row padding.
    const BMP_2X2: &[u8] = &[
        0x42, 0x4d, 0x46, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x36, 0x00, 0x00, 0x00, 0x28,
        0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x00, 0x18, 0x00,
        0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x00, 0x00, 0xc4, 0x0e, 0x00, 0x00, 0xc4, 0x0e, 0x00,
        0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0xff, 0x00, 0x00, 0xff, 0xff, 0xff,
        0x00, 0x00, 0x00, 0x00, 0xff, 0x00, 0xff, 0x00, 0x00, 0x00,
    ];

    #[test]
    fn ppm_two_pixel_roundtrip() {
        let bytes = b"P6 2 1 255\n\xff\x00\x00\x00\xff\x00";
        let img = load_image::<f64>(bytes).unwrap();
        assert_eq!((img.width(), img.height()), (2, 1));
        assert_eq!(img.at(0, 0), [255.0, 0.0, 0.0]);
        assert_eq!(img.at(0, 1), [0.0, 255.0, 0.0]);
    }

    #[test]
    fn ppm_header_comments_are_skipped() {
        let bytes = b"P6\n# sensed frame\n2 1\n# maxval next\n255\n\x01\x02\x03\x04\x05\x06";
        let img = load_image::<f64>(bytes).unwrap();
        assert_eq!(img.at(0, 1), [4.0, 5.0, 6.0]);
    }

    #[test]
    fn ppm_wide_maxval_is_unsupported() {
        let bytes = b"P6 1 1 65535\n\x00\x00\x00\x00\x00\x00";
        let err = load_image::<f64>(bytes).unwrap_err();
        assert!(matches!(
            err,
            DecodeError::Unsupported { format: "PPM", .. }
        ));
    }

    #[test]
    fn ppm_truncated_raster() {
        let bytes = b"P6 2 2 255\n\xff\x00\x00";
        let err = load_image::<f64>(bytes).unwrap_err();
        assert!(matches!(
            err,
            DecodeError::Truncated {
                format: "PPM",
                expected: 12,
                found: 3
            }
        ));
    }

    #[test]
    fn ppm_garbage_header() {
        let err = load_image::<f64>(b"P6 two 1 255\n\x00\x00\x00").unwrap_err();
        assert!(matches!(
            err,
            DecodeError::MalformedHeader { format: "PPM", .. }
        ));
    }

    #[test]
    fn unknown_magic() {
        assert!(matches!(
            load_image::<f64>(b"GIF89a").unwrap_err(),
            DecodeError::UnknownFormat
        ));
        assert!(matches!(
            load_image::<f64>(b"").unwrap_err(),
            DecodeError::UnknownFormat
        ));
    }

    #[test]
    fn bmp_single_blue_pixel_swaps_bgr() {
        let img = load_image::<f64>(BMP_1X1_BLUE).unwrap();
        assert_eq!((img.width(), img.height()), (1, 1));
        assert_eq!(img.at(0, 0), [0.0, 0.0, 255.0]);
    }

    #[test]
    fn bmp_bottom_up_rows_and_padding() {
        let img = load_image::<f64>(BMP_2X2).unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.at(0, 0), [255.0, 0.0, 0.0]);
        assert_eq!(img.at(0, 1), [0.0, 255.0, 0.0]);
        assert_eq!(img.at(1, 0), [0.0, 0.0, 255.0]);
        assert_eq!(img.at(1, 1), [255.0, 255.0, 255.0]);
    }

    #[test]
    fn bmp_negative_height_means_top_down() {
        let mut bytes = BMP_2X2.to_vec();
        bytes[22..26].copy_from_slice(&(-2i32).to_le_bytes());
        let img = load_image::<f64>(&bytes).unwrap();
        // The first stored row is now the top row.
        assert_eq!(img.at(0, 0), [0.0, 0.0, 255.0]);
        assert_eq!(img.at(0, 1), [255.0, 255.0, 255.0]);
        assert_eq!(img.at(1, 0), [255.0, 0.0, 0.0]);
        assert_eq!(img.at(1, 1), [0.0, 255.0, 0.0]);
    }

    #[test]
    fn bmp_rejects_other_bit_depths() {
        let mut bytes = BMP_1X1_BLUE.to_vec();
        bytes[28] = 8; // bit count
        let err = load_image::<f64>(&bytes).unwrap_err();
        assert!(matches!(
            err,
            DecodeError::Unsupported { format: "BMP", .. }
        ));
    }

    #[test]
    fn bmp_rejects_compressed() {
        let mut bytes = BMP_1X1_BLUE.to_vec();
        bytes[30] = 1; // BI_RLE8
        let err = load_image::<f64>(&bytes).unwrap_err();
        assert!(matches!(
            err,
            DecodeError::Unsupported { format: "BMP", .. }
        ));
    }

    #[test]
    fn bmp_truncated_raster() {
        let bytes = &BMP_1X1_BLUE[..BMP_1X1_BLUE.len() - 2];
        let err = load_image::<f64>(bytes).unwrap_err();
        assert!(matches!(err, DecodeError::Truncated { format: "BMP", .. }));
    }
}
