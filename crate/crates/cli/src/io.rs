use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use sdooop::Label;

use crate::error::CliError;

pub fn open_input(path: Option<&Path>) -> Result<(Box<dyn Read>, PathBuf), CliError> {
    match path {
        None => Ok((Box::new(io::stdin().lock()), PathBuf::from("<stdin>"))),
        Some(p) if p.as_os_str() == "-" => Ok((Box::new(io::stdin().lock()), PathBuf::from("<stdin>"))),
        Some(p) => {
            let f = File::open(p).map_err(|e| CliError::io(p, e))?;
            Ok((Box::new(BufReader::new(f)), p.to_path_buf()))
        }
    }
}

pub fn open_output(path: Option<&Path>) -> Result<(Box<dyn Write>, PathBuf), CliError> {
    match path {
        None => Ok((Box::new(BufWriter::new(io::stdout().lock())), PathBuf::from("<stdout>"))),
        Some(p) if p.as_os_str() == "-" => {
            Ok((Box::new(BufWriter::new(io::stdout().lock())), PathBuf::from("<stdout>")))
        }
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::io(p, e))?;
            Ok((Box::new(BufWriter::new(f)), p.to_path_buf()))
        }
    }
}

pub fn csv_writer(w: Box<dyn Write>) -> csv::Writer<Box<dyn Write>> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

pub fn parse_label(path: &Path, line: u64, field: &str) -> Result<Label, CliError> {
    field
        .trim()
        .parse::<u8>()
        .ok()
        .and_then(Label::from_code)
        .ok_or_else(|| CliError::parse(path, line, format!("label '{field}' is not 0, 1 or 2")))
}

fn parse_f64(path: &Path, line: u64, column: &str, field: &str) -> Result<f64, CliError> {
    field
        .trim()
        .parse()
        .map_err(|_| CliError::parse(path, line, format!("column '{column}': '{field}' is not a number")))
}

/// One parsed stream row. `v` is reused between rows.
#[derive(Debug, Default)]
pub struct Row {
    pub line: u64,
    pub t: f64,
    pub v: Vec<f64>,
    pub label: Option<Label>,
}

/// Row-at-a-time reader for the stream format `t,f0,..,f{D-1}[,label]`.
pub struct StreamReader {
    reader: csv::Reader<Box<dyn Read>>,
    record: csv::StringRecord,
    path: PathBuf,
    headers: Vec<String>,
    label_col: Option<usize>,
}

impl StreamReader {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        let (input, path) = open_input(path)?;
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| CliError::csv(&path, e))?
            .iter()
            .map(str::to_string)
            .collect();
        if headers.first().map(String::as_str) != Some("t") {
            return Err(CliError::parse(&path, 1, "first column must be 't'"));
        }
        let label_col = (headers.last().map(String::as_str) == Some("label")).then(|| headers.len() - 1);
        let features = headers.len() - 1 - usize::from(label_col.is_some());
        if features == 0 {
            return Err(CliError::parse(&path, 1, "no feature columns"));
        }
        Ok(StreamReader {
            reader,
            record: csv::StringRecord::new(),
            path,
            headers,
            label_col,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Fills `row` with the next record; `Ok(false)` at end of input.
    pub fn next_into(&mut self, row: &mut Row) -> Result<bool, CliError> {
        if !self
            .reader
            .read_record(&mut self.record)
            .map_err(|e| CliError::csv(&self.path, e))?
        {
            return Ok(false);
        }
        let line = self.record.position().map_or(0, |p| p.line());
        row.line = line;
        row.t = parse_f64(&self.path, line, "t", &self.record[0])?;
        let end = self.label_col.unwrap_or(self.record.len());
        row.v.clear();
        for i in 1..end {
            row.v.push(parse_f64(&self.path, line, &self.headers[i], &self.record[i])?);
        }
        row.label = match self.label_col {
            Some(i) => Some(parse_label(&self.path, line, &self.record[i])?),
            None => None,
        };
        Ok(true)
    }
}

/// Reads a whole CSV file into its header and rows, for the small tables the
/// evaluation and inspection commands consume.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<(u64, csv::StringRecord)>), CliError> {
    let (input, path) = open_input(Some(path))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| CliError::csv(&path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::csv(&path, e))?;
        rows.push((rec.position().map_or(0, |p| p.line()), rec));
    }
    Ok((headers, rows))
}

/// Position of a named column, or a parse error naming the file.
pub fn column(path: &Path, headers: &[String], name: &str) -> Result<usize, CliError> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::parse(path, 1, format!("missing column '{name}'")))
}

pub fn field_f64(path: &Path, line: u64, headers: &[String], rec: &csv::StringRecord, col: usize) -> Result<f64, CliError> {
    parse_f64(path, line, &headers[col], &rec[col])
}

pub fn field_flag(path: &Path, line: u64, rec: &csv::StringRecord, col: usize) -> Result<bool, CliError> {
    match rec[col].trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(CliError::parse(path, line, format!("'{other}' is not 0 or 1"))),
    }
}
