//! Matrix Market (coordinate) and CSV readers/writers.
//!
//! Symmetric matrices use the `%%MatrixMarket matrix coordinate real
//! symmetric` layout with 1-based indices; either triangle may be listed. A
//! `general` file is accepted for a symmetric matrix only if every entry has
//! an equal mirror. Factors are plain CSV: one row per item, no header.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{FactorMatrix, SparseCounts, SparseSymMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
}

/// Raw contents of a coordinate Matrix Market file, 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixMarket {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    pub symmetry: Symmetry,
    pub entries: Vec<(usize, usize, f64)>,
}

impl MatrixMarket {
    /// Parses a coordinate Matrix Market stream. No structural checks beyond
    /// index bounds and the declared entry count.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();

        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty file"))?;
        let header = header?;
        let (field, symmetry) = parse_header(&header).map_err(|m| Error::parse(lineno + 1, m))?;

        let mut size: Option<(usize, usize, usize)> = None;
        let mut entries = Vec::new();
        for (lineno, line) in lines {
            let line = line?;
            let line_no = lineno + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('%') {
                continue;
            }
            let mut tok = text.split_whitespace();
            match size {
                None => {
                    let rows = parse_usize(tok.next(), line_no, "row count")?;
                    let cols = parse_usize(tok.next(), line_no, "column count")?;
                    let nnz = parse_usize(tok.next(), line_no, "entry count")?;
                    if tok.next().is_some() {
                        return Err(Error::parse(line_no, "trailing tokens on size line"));
                    }
                    if symmetry == Symmetry::Symmetric && rows != cols {
                        return Err(Error::parse(line_no, "symmetric matrix must be square"));
                    }
                    size = Some((rows, cols, nnz));
                    // The declared count is untrusted; grow on demand past a cap.
                    entries.reserve(nnz.min(1 << 20));
                }
                Some((rows, cols, nnz)) => {
                    if entries.len() == nnz {
                        return Err(Error::parse(line_no, format!("more than {nnz} entries")));
                    }
                    let i = parse_usize(tok.next(), line_no, "row index")?;
                    let j = parse_usize(tok.next(), line_no, "column index")?;
                    if i == 0 || j == 0 || i > rows || j > cols {
                        return Err(Error::parse(
                            line_no,
                            format!("index ({i}, {j}) outside {rows}x{cols} (1-based)"),
                        ));
                    }
                    let v = match field {
                        Field::Pattern => 1.0,
                        Field::Real | Field::Integer => {
                            let t = tok
                                .next()
                                .ok_or_else(|| Error::parse(line_no, "missing value"))?;
                            let v: f64 = t
                                .parse()
                                .map_err(|_| Error::parse(line_no, format!("bad value {t:?}")))?;
                            if !v.is_finite() {
                                return Err(Error::parse(line_no, "non-finite value"));
                            }
                            v
                        }
                    };
                    if tok.next().is_some() {
                        return Err(Error::parse(line_no, "trailing tokens on entry line"));
                    }
                    entries.push((i - 1, j - 1, v));
                }
            }
        }
        let (rows, cols, nnz) = size.ok_or_else(|| Error::parse(0, "missing size line"))?;
        if entries.len() != nnz {
            return Err(Error::parse(
                0,
                format!("declared {nnz} entries but found {}", entries.len()),
            ));
        }
        Ok(Self {
            rows,
            cols,
            field,
            symmetry,
            entries,
        })
    }

    /// Interprets the file as a symmetric nonnegative matrix.
    pub fn into_symmetric(self) -> Result<SparseSymMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected square",
                self.rows, self.cols
            )));
        }
        if self.symmetry == Symmetry::General {
            let mut seen: std::collections::HashMap<(usize, usize), f64> =
                std::collections::HashMap::with_capacity(self.entries.len());
            for &(i, j, v) in &self.entries {
                seen.insert((i, j), v);
            }
            for &(i, j, v) in &self.entries {
                let mirror = seen.get(&(j, i)).copied().unwrap_or(0.0);
                if mirror != v {
                    return Err(Error::Asymmetric {
                        row: i,
                        col: j,
                        upper: v,
                        lower: mirror,
                    });
                }
            }
        }
        SparseSymMatrix::from_entries(self.rows, self.entries)
    }

    pub fn into_counts(self) -> Result<SparseCounts> {
        let symmetric = self.symmetry == Symmetry::Symmetric;
        let mirrored = self
            .entries
            .iter()
            .filter(|&&(i, j, _)| symmetric && i != j)
            .map(|&(i, j, v)| (j, i, v))
            .collect::<Vec<_>>();
        SparseCounts::from_triplets(
            self.rows,
            self.cols,
            self.entries.into_iter().chain(mirrored),
        )
    }
}

fn parse_header(line: &str) -> std::result::Result<(Field, Symmetry), String> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(format!("not a Matrix Market header: {line:?}"));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err("only 'matrix coordinate' files are supported".into());
    }
    let field = match tokens[3].as_str() {
        "real" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(format!("unsupported field {other:?}")),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(format!("unsupported symmetry {other:?}")),
    };
    Ok((field, symmetry))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let t = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    t.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} {t:?}")))
}

pub fn read_matrix<R: Read>(reader: R) -> Result<SparseSymMatrix> {
    MatrixMarket::parse(BufReader::new(reader))?.into_symmetric()
}

pub fn parse_matrix(text: &str) -> Result<SparseSymMatrix> {
    read_matrix(text.as_bytes())
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<SparseSymMatrix> {
    read_matrix(File::open(path)?)
}

/// Writes the lower triangle in symmetric coordinate format.
pub fn write_matrix<W: Write>(a: &SparseSymMatrix, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    let entries: Vec<_> = a.upper_entries().collect();
    writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(w, "{} {} {}", a.n(), a.n(), entries.len())?;
    for (i, j, v) in entries {
        writeln!(w, "{} {} {}", j + 1, i + 1, v)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_matrix(a: &SparseSymMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_matrix(a, File::create(path)?)
}

pub fn read_counts<R: Read>(reader: R) -> Result<SparseCounts> {
    MatrixMarket::parse(BufReader::new(reader))?.into_counts()
}

pub fn load_counts(path: impl AsRef<Path>) -> Result<SparseCounts> {
    read_counts(File::open(path)?)
}

pub fn write_counts<W: Write>(x: &SparseCounts, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", x.nrows(), x.ncols(), x.nnz())?;
    for (i, j, v) in x.triplets() {
        writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_counts(x: &SparseCounts, path: impl AsRef<Path>) -> Result<()> {
    write_counts(x, File::create(path)?)
}

/// Reads a headerless CSV factor: `n` lines of `r` comma-separated values.
pub fn read_factor<R: Read>(reader: R) -> Result<FactorMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::parse(idx + 1, format!("bad value {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse(0, "empty factor file"));
    }
    FactorMatrix::from_rows(&rows)
}

pub fn parse_factor(text: &str) -> Result<FactorMatrix> {
    read_factor(text.as_bytes())
}

pub fn load_factor(path: impl AsRef<Path>) -> Result<FactorMatrix> {
    read_factor(File::open(path)?)
}

pub fn write_factor<W: Write>(h: &FactorMatrix, writer: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for k in 0..h.nrows() {
        wtr.write_record(h.row(k).iter().map(|v| v.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn save_factor(h: &FactorMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_factor(h, File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_or_upper_triangle() {
        let upper = "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 2 0.5\n2 3 4\n";
        let lower = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n\n3 3 2\n2 1 0.5\n3 2 4\n";
        let a = parse_matrix(upper).unwrap();
        let b = parse_matrix(lower).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(1, 0), 0.5);
        assert_eq!(a.get(2, 1), 4.0);
    }

    #[test]
    fn negative_entry_rejected() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 -0.5\n";
        assert!(matches!(parse_matrix(text), Err(Error::NegativeEntry { .. })));
    }

    #[test]
    fn general_file_must_be_symmetric() {
        let ok = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 3\n2 1 3\n";
        assert_eq!(parse_matrix(ok).unwrap().get(0, 1), 3.0);
        let bad = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 3\n";
        assert!(matches!(parse_matrix(bad), Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn malformed_inputs() {
        for text in [
            "",
            "hello\n1 1 0\n",
            "%%MatrixMarket matrix array real general\n1 1\n1\n",
            "%%MatrixMarket matrix coordinate complex symmetric\n1 1 0\n",
            "%%MatrixMarket matrix coordinate real symmetric\n2 3 0\n",
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n",
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n",
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n0 1 1\n",
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 x\n",
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 1\n2 2 1\n",
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 nan\n",
        ] {
            assert!(parse_matrix(text).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn pattern_and_integer_fields() {
        let text = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n3 1\n";
        assert_eq!(parse_matrix(text).unwrap().get(0, 2), 1.0);
        let text = "%%MatrixMarket matrix coordinate integer general\n2 3 2\n1 3 2\n2 1 5\n";
        let x = read_counts(text.as_bytes()).unwrap();
        assert_eq!(x.triplets().collect::<Vec<_>>(), vec![(0, 2, 2.0), (1, 0, 5.0)]);
    }

    #[test]
    fn matrix_round_trip() {
        let a = SparseSymMatrix::from_entries(
            4,
            [(0, 0, 1.0), (0, 3, 0.1 + 0.2), (2, 1, 1e-17), (3, 3, 7.25)],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_matrix(&a, &mut buf).unwrap();
        assert_eq!(read_matrix(buf.as_slice()).unwrap(), a);
    }

    #[test]
    fn factor_csv() {
        let h = parse_factor("1,0.5\n0, 2\n").unwrap();
        assert_eq!(h.as_slice(), &[1.0, 0.5, 0.0, 2.0]);
        let mut buf = Vec::new();
        write_factor(&h, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1,0.5\n0,2\n");
        assert!(parse_factor("1,2\n3\n").is_err());
        assert!(parse_factor("1,-2\n").is_err());
        assert!(parse_factor("").is_err());
        assert!(parse_factor("a,b\n").is_err());
    }
}
