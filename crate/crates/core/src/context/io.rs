//! Context file formats: Burmeister `.cxt`, FIMI `.dat` and a 0/1 CSV table.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::{default_names, FormalContext};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextFormat {
    Cxt,
    Fimi,
    Csv,
}

impl ContextFormat {
    /// Guesses the format from a file extension (`cxt`, `dat`/`fimi`, `csv`).
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "cxt" => Some(Self::Cxt),
            "dat" | "fimi" => Some(Self::Fimi),
            "csv" => Some(Self::Csv),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Cxt => "cxt",
            Self::Fimi => "fimi",
            Self::Csv => "csv",
        }
    }
}

impl FromStr for ContextFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cxt" => Ok(Self::Cxt),
            "fimi" | "dat" => Ok(Self::Fimi),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidParameter(format!(
                "unknown context format `{other}` (expected cxt, fimi or csv)"
            ))),
        }
    }
}

pub fn read_context(input: &str, format: ContextFormat) -> Result<FormalContext> {
    match format {
        ContextFormat::Cxt => read_cxt(input),
        ContextFormat::Fimi => read_fimi(input),
        ContextFormat::Csv => read_csv(input),
    }
}

/// Reads a context file; `format` falls back to the file extension.
pub fn read_context_from_path(path: &Path, format: Option<ContextFormat>) -> Result<FormalContext> {
    let format = format
        .or_else(|| ContextFormat::from_path(path))
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "cannot infer context format of `{}`; pass it explicitly",
                path.display()
            ))
        })?;
    read_context(&fs::read_to_string(path)?, format)
}

pub fn write_context(ctx: &FormalContext, format: ContextFormat) -> Vec<u8> {
    match format {
        ContextFormat::Cxt => write_cxt(ctx),
        ContextFormat::Fimi => write_fimi(ctx),
        ContextFormat::Csv => write_csv(ctx),
    }
    .into_bytes()
}

fn read_cxt(input: &str) -> Result<FormalContext> {
    let lines: Vec<&str> = input.lines().map(|l| l.trim_end_matches('\r')).collect();
    let line = |i: usize| -> Result<&str> {
        lines
            .get(i)
            .copied()
            .ok_or_else(|| Error::parse(i + 1, 1, "unexpected end of file"))
    };
    if line(0)?.trim() != "B" {
        return Err(Error::parse(1, 1, "expected `B` header"));
    }
    // Line 2 is blank in the canonical layout; some writers put a title there.
    let count = |i: usize, what: &str| -> Result<usize> {
        let s = line(i)?.trim();
        s.parse::<usize>()
            .map_err(|_| Error::parse(i + 1, 1, format!("expected {what} count, found `{s}`")))
    };
    let n_obj = count(2, "object")?;
    let n_att = count(3, "attribute")?;
    let mut pos = 4;
    // Tolerate any number of blank lines before the names.
    while lines.get(pos).is_some_and(|l| l.trim().is_empty()) {
        pos += 1;
    }
    let mut objects = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        objects.push(line(pos)?.to_string());
        pos += 1;
    }
    let mut attributes = Vec::with_capacity(n_att);
    for _ in 0..n_att {
        attributes.push(line(pos)?.to_string());
        pos += 1;
    }
    let mut rows = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        let text = line(pos)?;
        let chars: Vec<char> = text.chars().collect();
        if chars.len() != n_att {
            return Err(Error::parse(
                pos + 1,
                chars.len().min(n_att) + 1,
                format!("row has {} cells, expected {n_att}", chars.len()),
            ));
        }
        let mut row = BitSet::new(n_att);
        for (j, c) in chars.iter().enumerate() {
            match c {
                'X' | 'x' => row.insert(j),
                '.' => {}
                other => {
                    return Err(Error::parse(
                        pos + 1,
                        j + 1,
                        format!("unexpected cell character `{other}`"),
                    ))
                }
            }
        }
        rows.push(row);
        pos += 1;
    }
    if let Some(extra) = lines[pos..].iter().position(|l| !l.trim().is_empty()) {
        return Err(Error::parse(
            pos + extra + 1,
            1,
            "trailing content after incidence rows",
        ));
    }
    FormalContext::new(objects, attributes, rows)
}

fn write_cxt(ctx: &FormalContext) -> String {
    let mut out = String::new();
    let _ = write!(out, "B\n\n{}\n{}\n\n", ctx.n_objects(), ctx.n_attributes());
    for n in ctx.object_names() {
        out.push_str(n);
        out.push('\n');
    }
    for n in ctx.attribute_names() {
        out.push_str(n);
        out.push('\n');
    }
    for row in ctx.rows() {
        for m in 0..ctx.n_attributes() {
            out.push(if row.contains(m) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}

fn read_fimi(input: &str) -> Result<FormalContext> {
    let mut transactions = Vec::new();
    let mut max_item: Option<usize> = None;
    for (i, line) in input.lines().enumerate() {
        let mut items = Vec::new();
        let mut col = 1;
        for tok in line.split_whitespace() {
            let offset = line[col - 1..].find(tok).map_or(0, |o| o + col - 1);
            let v: usize = tok.parse().map_err(|_| {
                Error::parse(
                    i + 1,
                    offset + 1,
                    format!("expected attribute index, found `{tok}`"),
                )
            })?;
            max_item = Some(max_item.map_or(v, |m| m.max(v)));
            items.push(v);
            col = offset + tok.len() + 1;
        }
        transactions.push(items);
    }
    let n_att = max_item
        .map(|m| m + 1)
        .ok_or_else(|| Error::parse(1, 1, "FIMI input contains no attribute indices"))?;
    let rows = transactions
        .iter()
        .map(|t| BitSet::from_indices(n_att, t.iter().copied()))
        .collect::<Vec<_>>();
    FormalContext::new(
        default_names("g", rows.len()),
        default_names("m", n_att),
        rows,
    )
}

fn write_fimi(ctx: &FormalContext) -> String {
    let mut out = String::new();
    for row in ctx.rows() {
        let items: Vec<String> = row.iter().map(|m| m.to_string()).collect();
        out.push_str(&items.join(" "));
        out.push('\n');
    }
    out
}

fn read_csv(input: &str) -> Result<FormalContext> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input.as_bytes());
    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty CSV input"))?
        .map_err(csv_error)?;
    if header.get(0).is_some_and(|c| !c.trim().is_empty()) {
        return Err(Error::parse(1, 1, "first header cell must be empty"));
    }
    let attributes: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    for (j, name) in attributes.iter().enumerate() {
        if attributes[..j].contains(name) {
            return Err(Error::parse(
                1,
                j + 2,
                format!("duplicate attribute `{name}`"),
            ));
        }
    }
    let n_att = attributes.len();
    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() == 1 && rec.get(0).is_some_and(|c| c.is_empty()) {
            continue;
        }
        if rec.len() != n_att + 1 {
            return Err(Error::parse(
                line,
                1,
                format!("row has {} cells, expected {}", rec.len(), n_att + 1),
            ));
        }
        let name = rec.get(0).unwrap_or_default().to_string();
        if objects.contains(&name) {
            return Err(Error::parse(line, 1, format!("duplicate object `{name}`")));
        }
        let mut row = BitSet::new(n_att);
        for (j, cell) in rec.iter().skip(1).enumerate() {
            match cell.trim() {
                "1" => row.insert(j),
                "0" => {}
                other => {
                    return Err(Error::parse(
                        line,
                        j + 2,
                        format!("expected 0 or 1, found `{other}`"),
                    ))
                }
            }
        }
        objects.push(name);
        rows.push(row);
    }
    FormalContext::new(objects, attributes, rows)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::parse(line, 1, e.to_string())
}

fn write_csv(ctx: &FormalContext) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(ctx.attribute_names().iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for (g, row) in ctx.rows().iter().enumerate() {
        let mut rec = vec![ctx.object_names()[g].clone()];
        rec.extend(
            (0..ctx.n_attributes()).map(|m| if row.contains(m) { "1" } else { "0" }.to_string()),
        );
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::k1;

    #[test]
    fn cxt_round_trip() {
        let k = k1();
        let text = write_context(&k, ContextFormat::Cxt);
        assert_eq!(
            String::from_utf8(text.clone()).unwrap(),
            "B\n\n3\n2\n\ng1\ng2\ng3\na\nb\nX.\nXX\n.X\n"
        );
        let back = read_context(std::str::from_utf8(&text).unwrap(), ContextFormat::Cxt).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn csv_round_trip() {
        let k = k1();
        let text = String::from_utf8(write_context(&k, ContextFormat::Csv)).unwrap();
        assert_eq!(text, ",a,b\ng1,1,0\ng2,1,1\ng3,0,1\n");
        assert_eq!(read_context(&text, ContextFormat::Csv).unwrap(), k);
    }

    #[test]
    fn fimi_line() {
        let c = read_context("0 2\n1\n", ContextFormat::Fimi).unwrap();
        assert_eq!(c.n_attributes(), 3);
        assert_eq!(c.n_objects(), 2);
        assert_eq!(c.row(0).to_vec(), vec![0, 2]);
        let written = String::from_utf8(write_context(&c, ContextFormat::Fimi)).unwrap();
        assert_eq!(written, "0 2\n1\n");
    }

    #[test]
    fn fimi_keeps_interior_empty_transactions() {
        let c = read_context("0\n\n1\n", ContextFormat::Fimi).unwrap();
        assert_eq!(c.n_objects(), 3);
        assert!(c.row(1).is_empty());
    }

    #[test]
    fn csv_duplicate_header_is_parse_error() {
        let err = read_context(",a,a\ng1,1,0\n", ContextFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn cxt_errors_carry_positions() {
        let bad = "B\n\n2\n2\n\ng1\ng2\na\nb\nX.\nXQ\n";
        match read_context(bad, ContextFormat::Cxt).unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (11, 2)),
            e => panic!("unexpected {e}"),
        }
        let short = "B\n\n2\n2\n\ng1\ng2\na\nb\nX.\n";
        assert!(matches!(
            read_context(short, ContextFormat::Cxt),
            Err(Error::Parse { line: 11, .. })
        ));
        assert!(matches!(
            read_context("C\n", ContextFormat::Cxt),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn fimi_rejects_garbage() {
        assert!(matches!(
            read_context("0 1\n2 x\n", ContextFormat::Fimi),
            Err(Error::Parse {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(read_context("\n", ContextFormat::Fimi).is_err());
    }

    #[test]
    fn format_from_path() {
        assert_eq!(
            ContextFormat::from_path(Path::new("x.cxt")),
            Some(ContextFormat::Cxt)
        );
        assert_eq!(
            ContextFormat::from_path(Path::new("x.DAT")),
            Some(ContextFormat::Fimi)
        );
        assert_eq!(ContextFormat::from_path(Path::new("x.txt")), None);
    }
}
