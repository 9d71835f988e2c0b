//! Count tables and the series derived from them.

use std::fmt;

use clap::ValueEnum;
use sgforest_core::ExplorationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
    /// Aligned columns with digits grouped by thin spaces.
    Pretty,
}

/// Malformed count table input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableError {
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "count table line {}: {}", self.line, self.reason)
    }
}

impl std::error::Error for TableError {}

const THIN_SPACE: char = '\u{2009}';

pub fn emit_counts(report: &ExplorationReport, format: Format) -> String {
    let rows = report.counts.iter().enumerate();
    match format {
        Format::Csv | Format::Tsv => {
            let sep = if format == Format::Csv { ',' } else { '\t' };
            let mut out = format!("g{sep}count\n");
            for (g, n) in rows {
                out.push_str(&format!("{g}{sep}{n}\n"));
            }
            out
        }
        Format::Pretty => {
            let cells: Vec<(String, String)> = rows
                .map(|(g, &n)| (g.to_string(), group_digits(n)))
                .collect();
            let gw = cells.iter().map(|c| c.0.len()).max().unwrap_or(1).max(1);
            let cw = cells
                .iter()
                .map(|c| c.1.chars().count())
                .max()
                .unwrap_or(0)
                .max("count".len());
            let mut out = format!("{:>gw$}  {:>cw$}\n", "g", "count");
            for (g, n) in cells {
                let pad = cw - n.chars().count();
                out.push_str(&format!("{g:>gw$}  {}{n}\n", " ".repeat(pad)));
            }
            out
        }
    }
}

fn group_digits(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(THIN_SPACE);
        }
        out.push(ch);
    }
    out
}

/// Reads a `g,count` table as written by [`emit_counts`] in CSV form. Rows
/// must list consecutive genera starting at 0.
pub fn parse_counts(text: &str) -> Result<Vec<u64>, TableError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let fail = |line, reason: String| TableError { line, reason };
    match lines.next() {
        Some((_, "g,count")) => {}
        Some((n, other)) => {
            return Err(fail(
                n,
                format!("expected header \"g,count\", found {other:?}"),
            ))
        }
        None => return Err(fail(1, "empty input".into())),
    }
    let mut counts = Vec::new();
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        let (g, count) = line
            .split_once(',')
            .ok_or_else(|| fail(n, format!("expected \"g,count\", found {line:?}")))?;
        let g: usize = g.parse().map_err(|_| fail(n, format!("bad genus {g:?}")))?;
        let count: u64 = count
            .parse()
            .map_err(|_| fail(n, format!("bad count {count:?}")))?;
        if g != counts.len() {
            return Err(fail(
                n,
                format!("expected genus {}, found {g}", counts.len()),
            ));
        }
        counts.push(count);
    }
    Ok(counts)
}

/// `num / den` with six fractional digits, rounded half to even.
fn ratio(num: u64, den: u64) -> String {
    const SCALE: u128 = 1_000_000;
    let (num, den) = (num as u128 * SCALE, den as u128);
    let mut q = num / den;
    let r = num % den;
    if 2 * r > den || (2 * r == den && q % 2 == 1) {
        q += 1;
    }
    format!("{}.{:06}", q / SCALE, q % SCALE)
}

/// Appends `count[g] / count[g-1]` to every row; the ratio is left empty for
/// `g = 0` and after a zero count.
pub fn emit_ratios(counts_csv: &str) -> Result<String, TableError> {
    let counts = parse_counts(counts_csv)?;
    let mut out = String::from("g,count,ratio\n");
    for (g, &n) in counts.iter().enumerate() {
        let r = match g.checked_sub(1).map(|p| counts[p]) {
            Some(prev) if prev > 0 => ratio(n, prev),
            _ => String::new(),
        };
        out.push_str(&format!("{g},{n},{r}\n"));
    }
    Ok(out)
}

/// Lists every `g` with `count[g] < count[g-1] + count[g-2]`.
pub fn fibonacci_check(counts_csv: &str) -> Result<String, TableError> {
    let counts = parse_counts(counts_csv)?;
    let mut out = String::new();
    for g in 2..counts.len() {
        let bound = counts[g - 1] as u128 + counts[g - 2] as u128;
        if (counts[g] as u128) < bound {
            out.push_str(&format!(
                "g={g}: {} < {} + {}\n",
                counts[g],
                counts[g - 1],
                counts[g - 2]
            ));
        }
    }
    if out.is_empty() {
        out.push_str("no violations\n");
    }
    Ok(out)
}
