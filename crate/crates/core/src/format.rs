//! Plain-text relation-matrix files.
//!
//! ```text
//! # comments run to end of line
//! 45 7
//! flags          (optional; n lines of `point line` follow)
//! 0 0
//! ...
//! 0 1 2 ...      (n rows of n relation indices)
//! ```

use std::fs;
use std::path::Path;

use crate::error::FormatError;
use crate::flags::Flag;
use crate::scheme::SchemeMatrix;

/// Relation matrix plus the flag behind each vertex, when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeFile {
    pub matrix: SchemeMatrix,
    pub flags: Option<Vec<Flag>>,
}

pub fn scheme_to_text(matrix: &SchemeMatrix, flags: Option<&[Flag]>) -> String {
    let n = matrix.order();
    let mut out = format!("{n} {}\n", matrix.num_classes());
    if let Some(flags) = flags {
        out.push_str("flags\n");
        for f in flags {
            out.push_str(&format!("{} {}\n", f.point, f.line));
        }
    }
    for x in 0..n {
        let row: Vec<String> = matrix.row(x).iter().map(u8::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Content lines with their 1-based line numbers; comments and blanks dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn numbers(line: usize, text: &str, origin: &Path) -> Result<Vec<usize>, FormatError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| FormatError::Parse {
                path: origin.to_path_buf(),
                line,
                message: format!("expected a non-negative integer, found `{tok}`"),
            })
        })
        .collect()
}

pub fn parse_scheme(text: &str, origin: &Path) -> Result<SchemeFile, FormatError> {
    let err = |line: usize, message: String| FormatError::Parse { path: origin.to_path_buf(), line, message };
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| err(0, "empty file".into()))?;
    let (n, d) = match numbers(hline, header, origin)?[..] {
        [n, d] => (n, d),
        _ => return Err(err(hline, "header must be `n d`".into())),
    };
    if d == 0 || d > u8::MAX as usize {
        return Err(err(hline, format!("class count {d} out of range")));
    }
    let mut lines = lines.peekable();
    let flags = if matches!(lines.peek(), Some((_, "flags"))) {
        let (fline, _) = lines.next().expect("peeked");
        let mut flags = Vec::with_capacity(n);
        for i in 0..n {
            let (line, text) =
                lines.next().ok_or_else(|| err(fline, format!("flag block ends after {i} of {n} pairs")))?;
            match numbers(line, text, origin)?[..] {
                [point, line_index] => flags.push(Flag { point, line: line_index }),
                _ => return Err(err(line, "flag entry must be `point line`".into())),
            }
        }
        Some(flags)
    } else {
        None
    };
    let mut data = Vec::with_capacity(n * n);
    let mut last = hline;
    for row in 0..n {
        let (line, text) = lines.next().ok_or_else(|| err(last, format!("matrix ends after {row} of {n} rows")))?;
        last = line;
        let entries = numbers(line, text, origin)?;
        if entries.len() != n {
            return Err(err(line, format!("row {row} has {} entries, expected {n}", entries.len())));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e > d) {
            return Err(err(line, format!("relation index {bad} exceeds d = {d}")));
        }
        data.extend(entries.iter().map(|&e| e as u8));
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(line, "trailing content after the matrix".into()));
    }
    let matrix = SchemeMatrix::new(n, d, data).map_err(|e| err(hline, e.to_string()))?;
    Ok(SchemeFile { matrix, flags })
}

pub fn load_scheme(path: &Path) -> Result<SchemeFile, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })?;
    parse_scheme(&text, path)
}

pub fn save_scheme(matrix: &SchemeMatrix, flags: Option<&[Flag]>, path: &Path) -> Result<(), FormatError> {
    fs::write(path, scheme_to_text(matrix, flags))
        .map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}
