//! Text loaders and writers.
//!
//! Input tables may be comma-, semicolon-, tab- or space-separated. Blank
//! lines and lines starting with `#` are skipped. A first row that does not
//! parse as numbers is taken as a header.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::dataset::{Dataset, DistanceMatrix, PointSet};
use crate::erosion::BoundaryLevels;
use crate::error::{Error, Result};
use crate::eval::GroundTruth;
use crate::propagation::Labeling;

/// Relative tolerance for asymmetry and diagonal noise in distance matrices.
pub const MATRIX_TOLERANCE: f64 = 1e-6;

struct Table {
    header: Option<Vec<String>>,
    rows: Vec<(usize, Vec<String>)>,
}

fn split_fields(line: &str) -> Vec<String> {
    let sep = if line.contains(',') {
        Some(',')
    } else if line.contains(';') {
        Some(';')
    } else {
        None
    };
    match sep {
        Some(c) => line.split(c).map(|f| f.trim().to_string()).collect(),
        None => line.split_whitespace().map(str::to_string).collect(),
    }
}

fn read_table(path: &Path) -> Result<Table> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut header = None;
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = split_fields(trimmed);
        if header.is_none() && rows.is_empty() && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            header = Some(fields);
            continue;
        }
        rows.push((idx + 1, fields));
    }
    Ok(Table { header, rows })
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_number(path: &Path, line: usize, cell: &str) -> Result<f64> {
    let v: f64 = cell
        .parse()
        .map_err(|_| parse_error(path, line, format!("non-numeric value '{cell}'")))?;
    if !v.is_finite() {
        return Err(parse_error(
            path,
            line,
            format!("non-finite value '{cell}'"),
        ));
    }
    Ok(v)
}

fn parse_class(path: &Path, line: usize, cell: &str) -> Result<Option<i64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    let v = parse_number(path, line, cell)?;
    if v.fract() != 0.0 {
        return Err(parse_error(
            path,
            line,
            format!("class id '{cell}' is not an integer"),
        ));
    }
    Ok((v >= 0.0).then_some(v as i64))
}

/// Loads a point table. When the header's last column is named `label`
/// that column is split off as ground truth.
pub fn load_points_csv(path: impl AsRef<Path>) -> Result<(Dataset, Option<GroundTruth>)> {
    let path = path.as_ref();
    let table = read_table(path)?;
    let has_label = table
        .header
        .as_ref()
        .and_then(|h| h.last())
        .is_some_and(|name| name.eq_ignore_ascii_case("label"));
    let Some((_, first)) = table.rows.first() else {
        return Err(Error::EmptyDataset);
    };
    let width = first.len();
    if let Some(h) = &table.header {
        if h.len() != width {
            return Err(parse_error(
                path,
                table.rows[0].0,
                format!("header has {} columns but rows have {width}", h.len()),
            ));
        }
    }
    let dim = if has_label { width - 1 } else { width };
    if dim == 0 {
        return Err(Error::EmptyDataset);
    }

    let mut data = Vec::with_capacity(table.rows.len() * dim);
    let mut classes = Vec::new();
    for (line, fields) in &table.rows {
        if fields.len() != width {
            return Err(parse_error(
                path,
                *line,
                format!("ragged row: {} columns, expected {width}", fields.len()),
            ));
        }
        for cell in &fields[..dim] {
            data.push(parse_number(path, *line, cell)?);
        }
        if has_label {
            classes.push(parse_class(path, *line, &fields[dim])?);
        }
    }
    let points = PointSet::new(data, dim)?;
    let truth = has_label.then(|| GroundTruth::from_options(classes));
    Ok((Dataset::Points(points), truth))
}

/// Loads a square distance matrix. Asymmetry up to `MATRIX_TOLERANCE` times
/// the largest entry is averaged away and diagonal noise below the same
/// bound is zeroed; anything larger is an error.
pub fn load_distance_matrix_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let table = read_table(path)?;
    let n = table.rows.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut data = Vec::with_capacity(n * n);
    for (line, fields) in &table.rows {
        if fields.len() != n {
            return Err(parse_error(
                path,
                *line,
                format!(
                    "matrix is not square: {} columns in a {n}-row matrix",
                    fields.len()
                ),
            ));
        }
        for cell in fields {
            let v = parse_number(path, *line, cell)?;
            if v < 0.0 {
                return Err(parse_error(path, *line, format!("negative distance {v}")));
            }
            data.push(v);
        }
    }
    let max = data.iter().copied().fold(0.0, f64::max);
    let tol = MATRIX_TOLERANCE * max;
    for i in 0..n {
        let d = data[i * n + i];
        if d > tol {
            return Err(Error::InvalidData(format!(
                "diagonal entry ({i},{i}) = {d} is not zero"
            )));
        }
        data[i * n + i] = 0.0;
        for j in i + 1..n {
            let (a, b) = (data[i * n + j], data[j * n + i]);
            if (a - b).abs() > tol {
                return Err(Error::InvalidData(format!(
                    "matrix is not symmetric at ({i},{j}): {a} vs {b}"
                )));
            }
            let mean = 0.5 * (a + b);
            data[i * n + j] = mean;
            data[j * n + i] = mean;
        }
    }
    Ok(Dataset::Precomputed(DistanceMatrix::new(data, n)?))
}

/// Reads class ids: one per line, or the `label` column of a table with a
/// header (the last column when no column is named `label`). Negative or
/// empty ids are unscored.
pub fn load_ground_truth(path: impl AsRef<Path>) -> Result<GroundTruth> {
    let path = path.as_ref();
    let table = read_table(path)?;
    let column = table.header.as_ref().map(|h| {
        h.iter()
            .position(|name| name.eq_ignore_ascii_case("label"))
            .unwrap_or(h.len() - 1)
    });
    let mut classes = Vec::with_capacity(table.rows.len());
    for (line, fields) in &table.rows {
        let col = column.unwrap_or(fields.len().saturating_sub(1));
        let cell = fields
            .get(col)
            .ok_or_else(|| parse_error(path, *line, "missing label column"))?;
        classes.push(parse_class(path, *line, cell)?);
    }
    if classes.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(GroundTruth::from_options(classes))
}

pub const RESULT_HEADER: &str = "id,label,level,rho";

/// Writes `id,label,level,rho`, one row per sample in id order.
pub fn write_result_csv(
    labeling: &Labeling,
    levels: &BoundaryLevels,
    rho: &[u32],
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let n = labeling.len();
    for (what, len) in [("boundary levels", levels.len()), ("densities", rho.len())] {
        if len != n {
            return Err(Error::SizeMismatch {
                what,
                expected: n,
                actual: len,
            });
        }
    }
    let write = || -> std::io::Result<()> {
        let mut out = create(path)?;
        writeln!(out, "{RESULT_HEADER}")?;
        for (i, r) in rho.iter().enumerate() {
            writeln!(out, "{i},{},{},{r}", labeling.label(i), levels.level(i))?;
        }
        out.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> std::io::Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new)
}

/// A result file read back into memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultTable {
    pub labeling: Labeling,
    pub levels: BoundaryLevels,
}

/// Reads a file written by [`write_result_csv`]. Cluster founders are
/// recovered as the first member of each cluster in visit order.
pub fn read_result_csv(path: impl AsRef<Path>) -> Result<ResultTable> {
    let path = path.as_ref();
    let table = read_table(path)?;
    match &table.header {
        Some(h) if h.join(",") == RESULT_HEADER => {}
        _ => {
            return Err(parse_error(
                path,
                1,
                format!("expected header '{RESULT_HEADER}'"),
            ))
        }
    }
    let n = table.rows.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut labels = vec![0u32; n];
    let mut level = vec![0u32; n];
    let mut rho = vec![0u32; n];
    let mut seen = vec![false; n];
    for (line, fields) in &table.rows {
        let ints = fields
            .iter()
            .map(|f| {
                f.parse::<u64>().map_err(|_| {
                    parse_error(path, *line, format!("expected an integer, got '{f}'"))
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        let [id, label, lvl, r] = ints[..] else {
            return Err(parse_error(path, *line, "expected 4 columns"));
        };
        let id = id as usize;
        if id >= n || seen[id] {
            return Err(parse_error(path, *line, format!("bad or repeated id {id}")));
        }
        seen[id] = true;
        let to_u32 = |v: u64| {
            u32::try_from(v).map_err(|_| parse_error(path, *line, format!("value {v} too large")))
        };
        labels[id] = to_u32(label)?;
        level[id] = to_u32(lvl)?;
        rho[id] = to_u32(r)?;
    }
    let levels = BoundaryLevels::from_levels(level, rho)?;
    let order: Vec<usize> = levels.visit_order().collect();
    let labeling = Labeling::from_labels_in_order(&labels, &order);
    Ok(ResultTable { labeling, levels })
}

/// Writes `id,level,initial_rho`, one row per sample.
pub fn write_levels_csv(levels: &BoundaryLevels, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let write = || -> std::io::Result<()> {
        let mut out = create(path)?;
        writeln!(out, "id,level,initial_rho")?;
        for (i, (l, r)) in levels
            .levels()
            .iter()
            .zip(levels.initial_density())
            .enumerate()
        {
            writeln!(out, "{i},{l},{r}")?;
        }
        out.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

/// Writes a point table with an optional `label` column.
pub fn write_points_csv(
    points: &PointSet,
    labels: Option<&[i64]>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    if let Some(l) = labels {
        if l.len() != points.len() {
            return Err(Error::SizeMismatch {
                what: "labels vs points",
                expected: points.len(),
                actual: l.len(),
            });
        }
    }
    let write = || -> std::io::Result<()> {
        let mut out = create(path)?;
        let mut names: Vec<String> = (0..points.dim()).map(|c| format!("x{c}")).collect();
        if labels.is_some() {
            names.push("label".into());
        }
        writeln!(out, "{}", names.join(","))?;
        for (i, row) in points.rows().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(out, "{}", cells.join(","))?;
            if let Some(l) = labels {
                write!(out, ",{}", l[i])?;
            }
            writeln!(out)?;
        }
        out.flush()
    };
    write().map_err(|e| Error::io(path, e))
}
