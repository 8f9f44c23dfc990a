//! Binary PGM (P5, maxval 255) reader and writer. The parser tolerates
//! `#` comment lines anywhere in the header.

use std::io::Write;
use std::path::Path;

use ahnn_core::GrayImage;

use crate::CliError;

fn header_tokens(data: &[u8]) -> Option<(Vec<usize>, usize)> {
    // after the magic: three decimal fields (width, height, maxval),
    // separated by whitespace, comments running to end of line
    let mut values = Vec::new();
    let mut i = 2; // past "P5"
    while values.len() < 3 && i < data.len() {
        match data[i] {
            b'#' => {
                while i < data.len() && data[i] != b'\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_whitespace() => i += 1,
            c if c.is_ascii_digit() => {
                let mut v = 0usize;
                while i < data.len() && data[i].is_ascii_digit() {
                    v = v.checked_mul(10)?.checked_add((data[i] - b'0') as usize)?;
                    i += 1;
                }
                values.push(v);
            }
            _ => return None,
        }
    }
    if values.len() < 3 || i >= data.len() || !data[i].is_ascii_whitespace() {
        return None;
    }
    Some((values, i + 1)) // single whitespace byte ends the header
}

pub fn pgm_read(path: &Path) -> Result<GrayImage, CliError> {
    let data = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    pgm_parse(&data).map_err(|msg| CliError::Format(format!("{}: {msg}", path.display())))
}

pub fn pgm_parse(data: &[u8]) -> Result<GrayImage, String> {
    if data.len() < 2 || &data[..2] != b"P5" {
        return Err("not a binary PGM (P5) file".into());
    }
    let (values, offset) = header_tokens(data).ok_or("malformed PGM header")?;
    let (width, height, maxval) = (values[0], values[1], values[2]);
    if maxval != 255 {
        return Err(format!("unsupported maxval {maxval}, expected 255"));
    }
    let need = width.checked_mul(height).ok_or("image dimensions overflow")?;
    let body = &data[offset..];
    if body.len() < need {
        return Err(format!("pixel data short: {} of {need} bytes", body.len()));
    }
    GrayImage::new(height, width, body[..need].to_vec()).map_err(|e| e.to_string())
}

pub fn pgm_write(img: &GrayImage, path: &Path) -> Result<(), CliError> {
    let mut out = Vec::with_capacity(img.pixels().len() + 32);
    write!(out, "P5\n{} {}\n255\n", img.cols(), img.rows()).expect("vec write");
    out.extend_from_slice(img.pixels());
    std::fs::write(path, out).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_round_trip() {
        let img = GrayImage::new(2, 2, vec![0, 128, 200, 255]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.pgm");
        pgm_write(&img, &path).unwrap();
        let back = pgm_read(&path).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn comment_bearing_header() {
        let mut data = b"P5\n# a comment\n3 2\n# another\n255\n".to_vec();
        data.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        let img = pgm_parse(&data).unwrap();
        assert_eq!(img.rows(), 2);
        assert_eq!(img.cols(), 3);
        assert_eq!(img.pixels(), &[1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn rejects_ascii_pgm() {
        assert!(pgm_parse(b"P2\n2 2\n255\n0 1 2 3\n").is_err());
    }

    #[test]
    fn rejects_wrong_maxval_and_short_data() {
        let mut data = b"P5\n2 2\n65535\n".to_vec();
        data.extend_from_slice(&[0; 8]);
        assert!(pgm_parse(&data).is_err());
        let mut short = b"P5\n2 2\n255\n".to_vec();
        short.extend_from_slice(&[0; 3]);
        assert!(pgm_parse(&short).is_err());
    }
}
