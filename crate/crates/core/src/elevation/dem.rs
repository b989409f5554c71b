use std::collections::HashMap;

use thiserror::Error;

use super::ElevationError;
use crate::geo::GeoPoint;

/// An ESRI ASCII grid. Values sit at cell centers; the center of the
/// lower-left cell is at `(xllcorner + cellsize/2, yllcorner + cellsize/2)`.
/// `values` is row-major with the first row northernmost. x is longitude and
/// y is latitude, both in degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct DemGrid {
    ncols: usize,
    nrows: usize,
    xllcorner: f64,
    yllcorner: f64,
    cellsize: f64,
    nodata_value: f64,
    values: Vec<f64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct DemParseError {
    pub line: usize,
    pub message: String,
}

fn parse_err(line: usize, message: impl Into<String>) -> DemParseError {
    DemParseError {
        line,
        message: message.into(),
    }
}

const HEADER_KEYS: [&str; 6] = [
    "ncols",
    "nrows",
    "xllcorner",
    "yllcorner",
    "cellsize",
    "nodata_value",
];

impl DemGrid {
    pub fn new(
        ncols: usize,
        nrows: usize,
        xllcorner: f64,
        yllcorner: f64,
        cellsize: f64,
        nodata_value: f64,
        values: Vec<f64>,
    ) -> Result<Self, String> {
        if ncols == 0 || nrows == 0 {
            return Err("grid must have at least one row and column".into());
        }
        if !(cellsize > 0.0 && cellsize.is_finite()) {
            return Err(format!("cellsize must be positive, got {cellsize}"));
        }
        if !xllcorner.is_finite() || !yllcorner.is_finite() {
            return Err("corner coordinates must be finite".into());
        }
        if values.len() != ncols * nrows {
            return Err(format!(
                "expected {} values, got {}",
                ncols * nrows,
                values.len()
            ));
        }
        if let Some(i) = values
            .iter()
            .position(|&v| v != nodata_value && !v.is_finite())
        {
            return Err(format!("non-finite value at index {i}"));
        }
        Ok(Self {
            ncols,
            nrows,
            xllcorner,
            yllcorner,
            cellsize,
            nodata_value,
            values,
        })
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn cellsize(&self) -> f64 {
        self.cellsize
    }

    /// Value of the cell at `row` (0 = north) and `col` (0 = west).
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.ncols + col]
    }

    pub fn is_nodata(&self, row: usize, col: usize) -> bool {
        self.value(row, col) == self.nodata_value
    }

    /// Position of the center of cell (`row`, `col`).
    pub fn cell_center(&self, row: usize, col: usize) -> GeoPoint {
        let lng = self.xllcorner + (col as f64 + 0.5) * self.cellsize;
        let lat = self.yllcorner + ((self.nrows - 1 - row) as f64 + 0.5) * self.cellsize;
        GeoPoint::new(lat, lng).expect("cell center within valid coordinates")
    }

    /// Serialize back to ESRI ASCII text.
    pub fn to_ascii(&self) -> String {
        let mut out = format!(
            "ncols {}\nnrows {}\nxllcorner {}\nyllcorner {}\ncellsize {}\nNODATA_value {}\n",
            self.ncols,
            self.nrows,
            self.xllcorner,
            self.yllcorner,
            self.cellsize,
            self.nodata_value
        );
        for row in self.values.chunks(self.ncols) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parse an ESRI ASCII grid: six `key value` header lines (any order, keys
/// case-insensitive) followed by `nrows` rows of `ncols` numbers.
pub fn load_dem(content: &str) -> Result<DemGrid, DemParseError> {
    let mut lines = content
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut header: HashMap<&'static str, f64> = HashMap::new();
    let mut last_line = 0;
    while header.len() < HEADER_KEYS.len() {
        let Some((line_no, line)) = lines.next() else {
            let missing: Vec<_> = HEADER_KEYS
                .iter()
                .filter(|k| !header.contains_key(*k))
                .collect();
            return Err(parse_err(
                last_line + 1,
                format!("missing header keys {missing:?}"),
            ));
        };
        last_line = line_no;
        let mut parts = line.split_whitespace();
        let raw_key = parts.next().unwrap_or_default();
        let lower = raw_key.to_ascii_lowercase();
        let Some(key) = HEADER_KEYS.iter().copied().find(|k| *k == lower) else {
            if raw_key.parse::<f64>().is_ok() {
                let missing: Vec<_> = HEADER_KEYS
                    .iter()
                    .filter(|k| !header.contains_key(*k))
                    .collect();
                return Err(parse_err(
                    line_no,
                    format!("missing header keys {missing:?}"),
                ));
            }
            return Err(parse_err(
                line_no,
                format!("unknown header key '{raw_key}'"),
            ));
        };
        let value = match (parts.next(), parts.next()) {
            (Some(v), None) => v
                .parse::<f64>()
                .map_err(|_| parse_err(line_no, format!("non-numeric value for {raw_key}")))?,
            _ => return Err(parse_err(line_no, format!("expected '{raw_key} <number>'"))),
        };
        if header.insert(key, value).is_some() {
            return Err(parse_err(
                line_no,
                format!("duplicate header key '{raw_key}'"),
            ));
        }
    }

    let dim = |key: &str, line: usize| -> Result<usize, DemParseError> {
        let v = header[key];
        if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as usize)
        } else {
            Err(parse_err(
                line,
                format!("{key} must be a positive integer, got {v}"),
            ))
        }
    };
    let ncols = dim("ncols", last_line)?;
    let nrows = dim("nrows", last_line)?;
    let cellsize = header["cellsize"];
    if !(cellsize > 0.0 && cellsize.is_finite()) {
        return Err(parse_err(last_line, "cellsize must be positive"));
    }
    let nodata = header["nodata_value"];

    let mut values = Vec::with_capacity(ncols * nrows);
    let mut rows_read = 0;
    for (line_no, line) in lines {
        if rows_read == nrows {
            return Err(parse_err(line_no, format!("more than {nrows} data rows")));
        }
        let start = values.len();
        for token in line.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|_| parse_err(line_no, format!("non-numeric cell '{token}'")))?;
            if v != nodata && !v.is_finite() {
                return Err(parse_err(line_no, format!("non-finite cell '{token}'")));
            }
            values.push(v);
        }
        let got = values.len() - start;
        if got != ncols {
            return Err(parse_err(
                line_no,
                format!("expected {ncols} values, found {got}"),
            ));
        }
        rows_read += 1;
        last_line = line_no;
    }
    if rows_read != nrows {
        return Err(parse_err(
            last_line + 1,
            format!("expected {nrows} data rows, found {rows_read}"),
        ));
    }
    DemGrid::new(
        ncols,
        nrows,
        header["xllcorner"],
        header["yllcorner"],
        cellsize,
        nodata,
        values,
    )
    .map_err(|m| parse_err(last_line, m))
}

// Tolerance, in cells, for queries sitting on the outermost centers.
const EDGE_EPS: f64 = 1e-9;

/// Bilinear interpolation between the four cell centers around `p`.
pub fn dem_elevation(grid: &DemGrid, p: GeoPoint) -> Result<f64, ElevationError> {
    // fractional column / row measured from the south-west center
    let fx = (p.lng() - grid.xllcorner) / grid.cellsize - 0.5;
    let fy = (p.lat() - grid.yllcorner) / grid.cellsize - 0.5;
    let max_x = (grid.ncols - 1) as f64;
    let max_y = (grid.nrows - 1) as f64;
    if !(fx >= -EDGE_EPS && fx <= max_x + EDGE_EPS && fy >= -EDGE_EPS && fy <= max_y + EDGE_EPS) {
        return Err(ElevationError::OutOfBounds(p));
    }
    let fx = fx.clamp(0.0, max_x);
    let fy = fy.clamp(0.0, max_y);
    let x0 = (fx.floor() as usize).min(grid.ncols.saturating_sub(2));
    let y0 = (fy.floor() as usize).min(grid.nrows.saturating_sub(2));
    let x1 = (x0 + 1).min(grid.ncols - 1);
    let y1 = (y0 + 1).min(grid.nrows - 1);
    let tx = fx - x0 as f64;
    let ty = fy - y0 as f64;

    // rows count from the north
    let row_of = |y: usize| grid.nrows - 1 - y;
    let fetch = |y: usize, x: usize| -> Result<f64, ElevationError> {
        let row = row_of(y);
        if grid.is_nodata(row, x) {
            Err(ElevationError::NoData { row, col: x })
        } else {
            Ok(grid.value(row, x))
        }
    };
    let v00 = fetch(y0, x0)?;
    let v10 = fetch(y0, x1)?;
    let v01 = fetch(y1, x0)?;
    let v11 = fetch(y1, x1)?;
    let south = v00 + tx * (v10 - v00);
    let north = v01 + tx * (v11 - v01);
    Ok(south + ty * (north - south))
}
