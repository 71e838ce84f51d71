//! Text formats: labeled datasets, trained models and sampled functions.
//!
//! Numbers are written in Rust's shortest round-trip notation, so reading a
//! written file reproduces every value bit for bit.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::functional::GridFunction;
use crate::svm::{LabeledDataset, SectorAssignment, TiePolicy, TrainedModel};
use crate::torus::TorusPoint;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_number(cell: &str, line: usize) -> Result<f64> {
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("non-numeric cell `{}`", cell.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite cell `{}`", cell.trim())));
    }
    Ok(v)
}

/// Non-blank lines with their one-based line numbers.
fn content_lines(reader: impl BufRead) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if !line.trim().is_empty() {
            out.push((i + 1, line.to_string()));
        }
    }
    Ok(out)
}

/// Writes `label,f1,…,fd` followed by one row per point.
pub fn write_dataset(data: &LabeledDataset, mut w: impl Write) -> Result<()> {
    let d = data.dim();
    let header: Vec<String> = std::iter::once("label".to_string())
        .chain((1..=d).map(|j| format!("f{j}")))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for (x, label) in data.iter() {
        write!(w, "{label}")?;
        for v in x.coords() {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Reads a dataset; feature rows are normalized onto the torus.
pub fn read_dataset(reader: impl BufRead) -> Result<LabeledDataset> {
    let lines = content_lines(reader)?;
    let (header_line, header) = lines.first().ok_or_else(|| parse_err(1, "empty file"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let d = cols.len() - 1;
    let well_formed = cols[0] == "label" && d >= 2 && cols[1..].iter().enumerate().all(|(j, c)| *c == format!("f{}", j + 1));
    if !well_formed {
        return Err(parse_err(*header_line, format!("malformed header `{header}`, expected `label,f1,…,fd` with d >= 2")));
    }
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (n, line) in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != d + 1 {
            return Err(parse_err(*n, format!("expected {} cells, found {}", d + 1, cells.len())));
        }
        let label = cells[0].trim();
        if label.is_empty() {
            return Err(parse_err(*n, "empty label"));
        }
        let raw = cells[1..].iter().map(|c| parse_number(c, *n)).collect::<Result<Vec<_>>>()?;
        points.push(TorusPoint::normalize(&raw)?);
        labels.push(label.to_string());
    }
    LabeledDataset::new(points, labels)
}

/// Writes the four-line model format. Sector indices are one-based.
pub fn write_model(model: &TrainedModel, mut w: impl Write) -> Result<()> {
    let omega: Vec<String> = model.omega().coords().iter().map(f64::to_string).collect();
    writeln!(w, "omega: {}", omega.join(" "))?;
    let asg: Vec<String> = model
        .assignment()
        .entries()
        .iter()
        .map(|(l, c)| format!("{l}={}", c + 1))
        .collect();
    writeln!(w, "assignment: {}", asg.join(" "))?;
    writeln!(w, "margin: {}", model.margin())?;
    writeln!(w, "tie_policy: {}", model.tie_policy())?;
    Ok(())
}

pub fn read_model(reader: impl BufRead) -> Result<TrainedModel> {
    let lines = content_lines(reader)?;
    if lines.is_empty() {
        return Err(parse_err(1, "empty file"));
    }
    let field = |idx: usize, key: &str| -> Result<(usize, String)> {
        let (n, line) = lines
            .get(idx)
            .ok_or_else(|| parse_err(lines.last().map_or(1, |l| l.0 + 1), format!("missing `{key}:` line")))?;
        let rest = line
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(':'))
            .ok_or_else(|| parse_err(*n, format!("expected `{key}:`")))?;
        Ok((*n, rest.trim().to_string()))
    };

    let (n, omega) = field(0, "omega")?;
    let raw = omega.split_whitespace().map(|c| parse_number(c, n)).collect::<Result<Vec<_>>>()?;
    let omega = TorusPoint::normalize(&raw).map_err(|e| parse_err(n, e.to_string()))?;

    let (n, asg) = field(1, "assignment")?;
    let mut entries = Vec::new();
    for item in asg.split_whitespace() {
        let (label, coord) = item
            .rsplit_once('=')
            .ok_or_else(|| parse_err(n, format!("expected `label=sector`, found `{item}`")))?;
        let coord: usize = coord
            .parse()
            .map_err(|_| parse_err(n, format!("sector `{coord}` is not a positive integer")))?;
        if coord == 0 || label.is_empty() {
            return Err(parse_err(n, format!("bad assignment entry `{item}`")));
        }
        entries.push((label.to_string(), coord - 1));
    }
    let assignment = SectorAssignment::new(entries).map_err(|e| parse_err(n, e.to_string()))?;

    let (n, margin) = field(2, "margin")?;
    let margin = parse_number(&margin, n)?;

    let (n, tie) = field(3, "tie_policy")?;
    let tie_policy = TiePolicy::parse(&tie).ok_or_else(|| parse_err(n, format!("unknown tie policy `{tie}`")))?;
    if let Some((n, _)) = lines.get(4) {
        return Err(parse_err(*n, "unexpected trailing content"));
    }
    TrainedModel::new(omega, assignment, margin, tie_policy).map_err(|e| parse_err(n, e.to_string()))
}

/// Writes sampled functions sharing `grid`: header `x,<name>…`, one row per
/// abscissa.
pub fn write_grid_functions(functions: &[(String, GridFunction)], mut w: impl Write) -> Result<()> {
    let first = functions.first().ok_or_else(|| Error::invalid("no functions to write"))?;
    let grid = first.1.grid();
    if functions.iter().any(|(_, f)| f.grid() != grid) {
        return Err(Error::invalid("functions must share one grid"));
    }
    let names: Vec<&str> = functions.iter().map(|(n, _)| n.as_str()).collect();
    writeln!(w, "x,{}", names.join(","))?;
    for (i, x) in grid.iter().enumerate() {
        write!(w, "{x}")?;
        for (_, f) in functions {
            write!(w, ",{}", f.values()[i])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_grid_functions(reader: impl BufRead) -> Result<Vec<(String, GridFunction)>> {
    let lines = content_lines(reader)?;
    let (hn, header) = lines.first().ok_or_else(|| parse_err(1, "empty file"))?;
    let names: Vec<String> = header.split(',').skip(1).map(|s| s.trim().to_string()).collect();
    if names.is_empty() || names.iter().any(String::is_empty) {
        return Err(parse_err(*hn, "malformed header, expected `x,<name>,…`"));
    }
    let mut grid = Vec::new();
    let mut columns = vec![Vec::new(); names.len()];
    for (n, line) in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != names.len() + 1 {
            return Err(parse_err(*n, format!("expected {} cells, found {}", names.len() + 1, cells.len())));
        }
        grid.push(parse_number(cells[0], *n)?);
        for (col, cell) in columns.iter_mut().zip(&cells[1..]) {
            col.push(parse_number(cell, *n)?);
        }
    }
    names
        .into_iter()
        .zip(columns)
        .map(|(name, values)| {
            let f = GridFunction::new(grid.clone(), values).map_err(|e| parse_err(*hn, e.to_string()))?;
            Ok((name, f))
        })
        .collect()
}
