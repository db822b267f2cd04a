//! Matrix CSV files and binary PGM image directories.

use std::fs;
use std::path::{Path, PathBuf};

use randproj::Matrix;

use crate::error::{BenchError, Result};

/// Reads comma-separated decimal floats, one matrix row per line.
///
/// With `header` set, the first line is skipped. Empty files, ragged rows and
/// unparsable cells are errors; cell errors carry 1-based line and column.
pub fn load_matrix_csv(path: &Path, header: bool) -> Result<Matrix> {
    let file = fs::File::open(path).map_err(|e| BenchError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut data = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| BenchError::Data(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(BenchError::Data(format!(
                    "{}:{line}: ragged row with {} cells, expected {w}",
                    path.display(),
                    record.len()
                )))
            }
            _ => {}
        }
        for (col, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                BenchError::Data(format!(
                    "{}:{line}:{}: cannot parse '{cell}' as a number",
                    path.display(),
                    col + 1
                ))
            })?;
            data.push(v);
        }
        rows += 1;
    }
    let cols = width.ok_or_else(|| BenchError::Data(format!("{}: no data rows", path.display())))?;
    Ok(Matrix::from_row_major(rows, cols, data)?)
}

/// Writes `m` as CSV with round-trip exact floats.
pub fn save_matrix_csv(m: &Matrix, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| BenchError::Data(format!("{}: {e}", path.display())))?;
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|v| format!("{v:.16e}")))
            .map_err(|e| BenchError::Data(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| BenchError::io(path, e))
}

/// A decoded 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u8>,
}

fn header_token(bytes: &[u8], pos: &mut usize) -> Option<String> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    (start < *pos).then(|| String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

/// Decodes a binary (`P5`) PGM with `maxval ≤ 255`.
pub fn parse_pgm(bytes: &[u8]) -> std::result::Result<PgmImage, String> {
    let mut pos = 0;
    let magic = header_token(bytes, &mut pos).ok_or("missing magic number")?;
    if magic != "P5" {
        return Err(format!("unsupported magic '{magic}', expected P5"));
    }
    let mut field = |name: &str| -> std::result::Result<usize, String> {
        let tok = header_token(bytes, &mut pos).ok_or_else(|| format!("missing {name}"))?;
        tok.parse().map_err(|_| format!("invalid {name} '{tok}'"))
    };
    let width = field("width")?;
    let height = field("height")?;
    let maxval = field("maxval")?;
    if width == 0 || height == 0 {
        return Err(format!("empty image {width}x{height}"));
    }
    if !(1..=255).contains(&maxval) {
        return Err(format!("maxval {maxval} is not an 8-bit value"));
    }
    // exactly one whitespace byte separates the header from the raster
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err("truncated header".into());
    }
    pos += 1;
    let need = width * height;
    let raster = &bytes[pos..];
    if raster.len() < need {
        return Err(format!("raster has {} bytes, expected {need}", raster.len()));
    }
    Ok(PgmImage {
        width,
        height,
        maxval: maxval as u16,
        pixels: raster[..need].to_vec(),
    })
}

pub fn encode_pgm(image: &PgmImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", image.width, image.height, image.maxval).into_bytes();
    out.extend_from_slice(&image.pixels);
    out
}

pub fn read_pgm(path: &Path) -> Result<PgmImage> {
    let bytes = fs::read(path).map_err(|e| BenchError::io(path, e))?;
    parse_pgm(&bytes).map_err(|msg| BenchError::Data(format!("{}: {msg}", path.display())))
}

pub fn write_pgm(image: &PgmImage, path: &Path) -> Result<()> {
    fs::write(path, encode_pgm(image)).map_err(|e| BenchError::io(path, e))
}

/// Loads every `.pgm` file in `dir` into a pixels×n_images matrix.
///
/// Images are taken in lexicographic filename order, flattened row-major
/// into columns and scaled by `1/maxval` into `[0, 1]`.
pub fn load_pgm_dir(dir: &Path) -> Result<Matrix> {
    let entries = fs::read_dir(dir).map_err(|e| BenchError::io(dir, e))?;
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| BenchError::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")) {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if files.is_empty() {
        return Err(BenchError::Data(format!("{}: no .pgm files", dir.display())));
    }
    let mut columns = Vec::with_capacity(files.len());
    let mut shape = None;
    for path in &files {
        let img = read_pgm(path)?;
        match shape {
            None => shape = Some((img.width, img.height)),
            Some(s) if s != (img.width, img.height) => {
                return Err(BenchError::Data(format!(
                    "{}: image is {}x{}, expected {}x{}",
                    path.display(),
                    img.width,
                    img.height,
                    s.0,
                    s.1
                )))
            }
            _ => {}
        }
        let scale = 1.0 / img.maxval as f64;
        columns.push(img.pixels.iter().map(|&p| p as f64 * scale).collect::<Vec<f64>>());
    }
    let pixels = columns[0].len();
    Ok(Matrix::from_columns(pixels, &columns))
}
