use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::algorithm::Algorithm;
use crate::instrumentation::AccessStats;

use super::{BenchError, SweepRow};

/// Ratio columns emitted when both algorithms were timed: numerator first.
pub const SPEEDUPS: [(Algorithm, Algorithm); 4] = [
    (Algorithm::Online, Algorithm::Safe),
    (Algorithm::Naive, Algorithm::Safe),
    (Algorithm::OnlineFusedTopK, Algorithm::SafeThenTopK),
    (Algorithm::SafeFusedTopK, Algorithm::SafeThenTopK),
];

pub fn speedup_column(numerator: Algorithm, denominator: Algorithm) -> String {
    format!("{}Over{}", numerator.key(), denominator.key())
}

const COUNT_SUFFIXES: [&str; 4] = ["ResultStores", "Loads", "Stores", "Accesses"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    pub fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            other => Err(format!("unknown format `{other}` (expected csv or tsv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
        })
    }
}

struct Layout {
    timed: Vec<Algorithm>,
    speedups: Vec<(Algorithm, Algorithm)>,
    counted: Vec<Algorithm>,
}

impl Layout {
    fn of(row: &SweepRow) -> Layout {
        let timed: Vec<Algorithm> = row.throughput.iter().map(|(a, _)| *a).collect();
        let speedups = SPEEDUPS
            .into_iter()
            .filter(|(n, d)| timed.contains(n) && timed.contains(d))
            .collect();
        Layout {
            timed,
            speedups,
            counted: row.counts.iter().map(|(a, _)| *a).collect(),
        }
    }

    fn matches(&self, row: &SweepRow) -> bool {
        row.throughput.iter().map(|(a, _)| *a).eq(self.timed.iter().copied())
            && row.counts.iter().map(|(a, _)| *a).eq(self.counted.iter().copied())
    }

    fn header(&self) -> Vec<String> {
        let mut cols = vec!["V".to_string()];
        cols.extend(self.timed.iter().map(|a| a.key().to_string()));
        cols.extend(self.speedups.iter().map(|&(n, d)| speedup_column(n, d)));
        for a in &self.counted {
            for suffix in ["Loads", "Stores", "ResultStores", "Accesses"] {
                cols.push(format!("{}{suffix}", a.key()));
            }
        }
        cols
    }

    fn record(&self, row: &SweepRow) -> Vec<String> {
        let num = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), |v| v.to_string());
        let mut rec = vec![row.v.to_string()];
        rec.extend(row.throughput.iter().map(|(_, t)| num(*t)));
        rec.extend(self.speedups.iter().map(|&(n, d)| num(row.speedup(n, d))));
        for (_, c) in &row.counts {
            rec.push(c.loads.to_string());
            rec.push(c.stores.to_string());
            rec.push(c.result_stores.to_string());
            rec.push(c.element_total().to_string());
        }
        rec
    }
}

/// Writes one header line and one line per row. Throughput is in
/// elements/second; failed cells are written as `nan`.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W, format: Format) -> Result<(), String> {
    let layout = rows.first().map(Layout::of).unwrap_or(Layout {
        timed: Vec::new(),
        speedups: Vec::new(),
        counted: Vec::new(),
    });
    if !rows.iter().all(|r| layout.matches(r)) {
        return Err("rows have differing column layouts".to_string());
    }
    let mut w = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(out);
    w.write_record(layout.header()).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(layout.record(row)).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

pub fn emit_csv(rows: &[SweepRow], path: &Path, format: Format) -> Result<(), BenchError> {
    let file = File::create(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(rows, BufWriter::new(file), format).map_err(|message| BenchError::Parse {
        path: path.to_path_buf(),
        message,
    })
}

enum Column {
    V,
    Throughput(Algorithm),
    Count(Algorithm, &'static str),
    Derived,
}

fn classify(name: &str) -> Option<Column> {
    if name == "V" {
        return Some(Column::V);
    }
    if let Some(a) = Algorithm::ALL.into_iter().find(|a| a.key() == name) {
        return Some(Column::Throughput(a));
    }
    if SPEEDUPS.iter().any(|&(n, d)| speedup_column(n, d) == name) {
        return Some(Column::Derived);
    }
    for suffix in COUNT_SUFFIXES {
        if let Some(prefix) = name.strip_suffix(suffix) {
            if let Some(a) = Algorithm::ALL.into_iter().find(|a| a.key() == prefix) {
                return Some(Column::Count(a, suffix));
            }
        }
    }
    None
}

/// Reads rows written by [`write_csv`]. Ratio columns are recomputed from
/// throughput and not read back.
pub fn read_csv<R: Read>(input: R, format: Format) -> Result<Vec<SweepRow>, String> {
    let mut r = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .from_reader(input);
    let columns: Vec<Column> = r
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(|name| classify(name).ok_or_else(|| format!("unknown column `{name}`")))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| e.to_string())?;
        let mut row = SweepRow {
            v: 0,
            throughput: Vec::new(),
            counts: Vec::new(),
        };
        for (col, field) in columns.iter().zip(record.iter()) {
            let bad = |what: &str| format!("bad {what} `{field}`");
            match col {
                Column::V => row.v = field.parse().map_err(|_| bad("vector size"))?,
                Column::Throughput(a) => {
                    let t: f64 = field.parse().map_err(|_| bad("throughput"))?;
                    row.throughput.push((*a, (!t.is_nan()).then_some(t)));
                }
                Column::Count(a, suffix) => {
                    let n: u64 = field.parse().map_err(|_| bad("count"))?;
                    if row.counts.last().map(|(last, _)| last) != Some(a) {
                        row.counts.push((*a, AccessStats::default()));
                    }
                    let stats = &mut row.counts.last_mut().expect("pushed above").1;
                    match *suffix {
                        "Loads" => stats.loads = n,
                        "Stores" => stats.stores = n,
                        "ResultStores" => stats.result_stores = n,
                        _ if n != stats.element_total() => {
                            return Err(format!("{a}Accesses = {n} is not loads + stores"))
                        }
                        _ => {}
                    }
                }
                Column::Derived => {}
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn parse_csv(path: &Path, format: Format) -> Result<Vec<SweepRow>, BenchError> {
    let file = File::open(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, format).map_err(|message| BenchError::Parse {
        path: path.to_path_buf(),
        message,
    })
}

type Series = Box<dyn Fn(&SweepRow) -> Option<f64>>;

/// Writes whitespace-separated `(V, value)` series, one block per timed
/// algorithm followed by one per speedup ratio, blocks separated by two
/// blank lines (gnuplot `index` layout).
pub fn write_plot_data<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    let Some(first) = rows.first() else {
        return Ok(());
    };
    let layout = Layout::of(first);
    let mut blocks: Vec<(String, Series)> = Vec::new();
    for &a in &layout.timed {
        blocks.push((format!("{} elements_per_second", a.key()), Box::new(move |r| r.throughput_of(a))));
    }
    for &(n, d) in &layout.speedups {
        blocks.push((format!("{} ratio", speedup_column(n, d)), Box::new(move |r| r.speedup(n, d))));
    }
    for (i, (title, value)) in blocks.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
            writeln!(out)?;
        }
        writeln!(out, "# {title}")?;
        writeln!(out, "# V value")?;
        for row in rows {
            if let Some(v) = value(row) {
                writeln!(out, "{} {}", row.v, v)?;
            }
        }
    }
    out.flush()
}

pub fn emit_plot_data(rows: &[SweepRow], path: &Path) -> Result<(), BenchError> {
    let io = |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    write_plot_data(rows, BufWriter::new(file)).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: usize, safe: Option<f64>, online: f64) -> SweepRow {
        SweepRow {
            v,
            throughput: vec![(Algorithm::Safe, safe), (Algorithm::Online, Some(online))],
            counts: vec![
                (
                    Algorithm::Safe,
                    AccessStats {
                        loads: 3 * v as u64,
                        stores: v as u64,
                        result_stores: 0,
                    },
                ),
                (
                    Algorithm::Online,
                    AccessStats {
                        loads: 2 * v as u64,
                        stores: v as u64,
                        result_stores: 0,
                    },
                ),
            ],
        }
    }

    fn to_string(rows: &[SweepRow], format: Format) -> String {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf, format).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn header_follows_configured_algorithms() {
        let text = to_string(&[row(10, Some(1.0), 2.0)], Format::Csv);
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            "V,SafeSoftmax,OnlineSoftmax,OnlineSoftmaxOverSafeSoftmax,\
             SafeSoftmaxLoads,SafeSoftmaxStores,SafeSoftmaxResultStores,SafeSoftmaxAccesses,\
             OnlineSoftmaxLoads,OnlineSoftmaxStores,OnlineSoftmaxResultStores,OnlineSoftmaxAccesses"
        );
        assert_eq!(text.lines().nth(1).unwrap(), "10,1,2,2,30,10,0,40,20,10,0,30");
    }

    #[test]
    fn round_trip_both_formats() {
        let rows = vec![
            row(40, Some(1.234_567_890_123e9), 0.1 + 0.2),
            row(400, None, 7.5e8),
        ];
        for format in [Format::Csv, Format::Tsv] {
            let text = to_string(&rows, format);
            assert_eq!(read_csv(text.as_bytes(), format).unwrap(), rows);
        }
        let tsv = to_string(&rows, Format::Tsv);
        assert!(tsv.lines().next().unwrap().contains('\t'));
        assert!(tsv.lines().nth(2).unwrap().contains("nan"));
    }

    #[test]
    fn rejects_unknown_columns_and_bad_totals() {
        assert!(read_csv("V,Fastest\n1,2\n".as_bytes(), Format::Csv).is_err());
        let bad = "V,SafeSoftmaxLoads,SafeSoftmaxStores,SafeSoftmaxResultStores,SafeSoftmaxAccesses\n1,3,1,0,5\n";
        assert!(read_csv(bad.as_bytes(), Format::Csv).is_err());
    }

    #[test]
    fn mixed_layouts_are_rejected() {
        let mut other = row(20, Some(1.0), 1.0);
        other.throughput.pop();
        let mut buf = Vec::new();
        assert!(write_csv(&[row(10, Some(1.0), 1.0), other], &mut buf, Format::Csv).is_err());
    }

    #[test]
    fn plot_blocks() {
        let mut buf = Vec::new();
        write_plot_data(&[row(10, Some(1.0), 2.0), row(100, Some(4.0), 5.0)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let blocks: Vec<&str> = text.split("\n\n\n").collect();
        assert_eq!(blocks.len(), 3);
        assert!(blocks[0].starts_with("# SafeSoftmax elements_per_second"));
        assert!(blocks[2].starts_with("# OnlineSoftmaxOverSafeSoftmax ratio"));
        assert!(blocks[2].contains("10 2\n100 1.25"));
    }

    #[test]
    fn format_names() {
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("tsv".parse::<Format>().unwrap(), Format::Tsv);
        assert!("xlsx".parse::<Format>().is_err());
    }
}
