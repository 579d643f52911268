//! Conversion between hour-valued schemes and a.u. grids, and the matrix CSV
//! format.
//!
//! CSV layout, one record per line:
//!
//! ```text
//! au_hours,4/21
//! object,1,2,3
//! 1,1,2,3
//! 2,2,3,1
//! 3,3,1,2
//! ```

use crate::error::{Error, Result};
use crate::harmonic::atomic_unit;
use crate::model::{AgentId, AssignmentMatrix, ProblemSpec, Scheme, Segment};
use crate::rational::Rational;

/// Each row becomes its maximal runs of one agent, converted to hours.
pub fn matrix_to_scheme(matrix: &AssignmentMatrix) -> Scheme {
    let au = matrix.au_hours();
    let objects = matrix
        .rows()
        .iter()
        .map(|row| {
            let mut segs: Vec<Segment> = Vec::new();
            for (j, &agent) in row.iter().enumerate() {
                let end = au * Rational::from(j + 1);
                match segs.last_mut() {
                    Some(last) if last.agent == agent => last.end = end,
                    _ => segs.push(Segment::new(agent, au * Rational::from(j), end)),
                }
            }
            segs
        })
        .collect();
    Scheme::new(objects).expect("matrix rows are well-formed segment lists")
}

/// Sample a scheme on the a.u. grid of `spec`.
///
/// Fails with [`Error::NotGridAligned`] when some segment boundary is not a
/// whole number of atomic units, or the scheme does not span exactly `n` of
/// them.
pub fn scheme_to_matrix(scheme: &Scheme, spec: &ProblemSpec) -> Result<AssignmentMatrix> {
    let n = spec.agents();
    if scheme.object_count() != n {
        return Err(Error::MalformedScheme(format!(
            "scheme has {} objects, problem has {n} agents",
            scheme.object_count()
        )));
    }
    let au = atomic_unit(spec);
    let mut rows = Vec::with_capacity(n);
    for (o, segs) in scheme.objects().iter().enumerate() {
        let mut row = Vec::with_capacity(n);
        let mut cursor = 0i64;
        for s in segs {
            let start = s.start.div_exact(&au).ok_or_else(|| {
                Error::NotGridAligned(format!("object {}: boundary at {} h is {} a.u.", o + 1, s.start, &s.start / &au))
            })?;
            let end = s.end.div_exact(&au).ok_or_else(|| {
                Error::NotGridAligned(format!("object {}: boundary at {} h is {} a.u.", o + 1, s.end, &s.end / &au))
            })?;
            if start != cursor {
                return Err(Error::NotGridAligned(format!("object {} is idle over a.u. {cursor}..{start}", o + 1)));
            }
            if end > n as i64 {
                return Err(Error::NotGridAligned(format!("object {} runs past {n} a.u.", o + 1)));
            }
            row.extend(std::iter::repeat_n(s.agent, (end - start) as usize));
            cursor = end;
        }
        if cursor != n as i64 {
            return Err(Error::NotGridAligned(format!("object {} spans {cursor} a.u., expected {n}", o + 1)));
        }
        rows.push(row);
    }
    AssignmentMatrix::new(rows, au)
}

fn header(n: usize) -> String {
    let mut line = String::from("object");
    for j in 1..=n {
        line.push(',');
        line.push_str(&j.to_string());
    }
    line
}

/// Render the CSV form, including the `au_hours` record.
pub fn matrix_to_csv(matrix: &AssignmentMatrix) -> String {
    let n = matrix.size();
    let mut out = format!("au_hours,{}\n{}\n", matrix.au_hours(), header(n));
    for (i, row) in matrix.rows().iter().enumerate() {
        out.push_str(&(i + 1).to_string());
        for a in row {
            out.push(',');
            out.push_str(&a.0.to_string());
        }
        out.push('\n');
    }
    out
}

/// Parse the CSV form. The `au_hours` record may appear before or after the
/// header but is required.
pub fn matrix_from_csv(text: &str) -> Result<AssignmentMatrix> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut au: Option<Rational> = None;
    let mut header_len: Option<usize> = None;
    let mut rows: Vec<Vec<AgentId>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Format(format!("matrix CSV: {e}")))?;
        let first = record.get(0).unwrap_or("");
        match first {
            "" if record.len() <= 1 => continue,
            "au_hours" => {
                if au.is_some() {
                    return Err(Error::Format("matrix CSV: duplicate au_hours".into()));
                }
                let value = record.get(1).ok_or_else(|| Error::Format("matrix CSV: au_hours has no value".into()))?;
                au = Some(value.parse()?);
            }
            "object" => {
                if header_len.is_some() {
                    return Err(Error::Format("matrix CSV: duplicate header".into()));
                }
                for (j, cell) in record.iter().skip(1).enumerate() {
                    if cell.parse::<usize>().ok() != Some(j + 1) {
                        return Err(Error::Format(format!("matrix CSV: header column {} should be {}", j + 2, j + 1)));
                    }
                }
                header_len = Some(record.len() - 1);
            }
            _ => {
                let index: usize = first
                    .parse()
                    .map_err(|_| Error::Format(format!("matrix CSV line {}: bad object index {first:?}", line + 1)))?;
                if index != rows.len() + 1 {
                    return Err(Error::Format(format!(
                        "matrix CSV line {}: expected object {}, found {index}",
                        line + 1,
                        rows.len() + 1
                    )));
                }
                let row = record
                    .iter()
                    .skip(1)
                    .map(|cell| {
                        cell.parse::<usize>()
                            .map(AgentId)
                            .map_err(|_| Error::Format(format!("matrix CSV line {}: bad agent id {cell:?}", line + 1)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
        }
    }
    let au = au.ok_or_else(|| Error::Format("matrix CSV: missing au_hours".into()))?;
    if let Some(width) = header_len {
        if width != rows.len() {
            return Err(Error::Format(format!(
                "matrix CSV: header has {width} intervals but there are {} objects",
                rows.len()
            )));
        }
    }
    AssignmentMatrix::new(rows, au)
}

/// CSV of a per-cell projection, same layout as the matrix without
/// `au_hours`.
pub fn cells_to_csv<T: ToString>(rows: &[Vec<T>]) -> String {
    let n = rows.first().map_or(0, Vec::len);
    let mut out = header(n);
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        out.push_str(&(i + 1).to_string());
        for v in row {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}
