//! Delimiter-separated input files.
//!
//! Counts files carry the header `category,count[,label]`; microdata files
//! carry `unit_id,category,weight[,group]`. Every parse error names the file
//! and the 1-based line.

use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sampler::{CountData, WeightedMicrodata, WeightedRecord};

/// Parsed counts file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCounts {
    pub data: CountData,
    /// Category labels in category order; the numeric category when the file
    /// has no `label` column.
    pub labels: Vec<String>,
}

/// Parsed microdata file, split by the optional `group` column in order of
/// first appearance. Without a group column there is one dataset named
/// `all`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedMicrodata {
    pub datasets: Vec<(String, WeightedMicrodata)>,
}

impl LoadedMicrodata {
    pub fn get(&self, name: &str) -> Option<&WeightedMicrodata> {
        self.datasets
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d)
    }
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(file))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(1, |p| p.line() as usize);
    match e.kind() {
        csv::ErrorKind::Io(_) => Error::io(path, std::io::Error::other(e.to_string())),
        _ => parse_err(path, line, format!("malformed row: {e}")),
    }
}

fn header(path: &Path, rdr: &mut csv::Reader<File>) -> Result<Vec<String>> {
    let h = rdr.headers().map_err(|e| csv_err(path, e))?;
    Ok(h.iter().map(|s| s.to_ascii_lowercase()).collect())
}

pub fn load_counts(path: impl AsRef<Path>) -> Result<LoadedCounts> {
    let path = path.as_ref();
    let mut rdr = reader(path)?;
    let cols = header(path, &mut rdr)?;
    let has_label = match cols.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["category", "count"] => false,
        ["category", "count", "label"] => true,
        _ => {
            return Err(parse_err(
                path,
                1,
                format!(
                    "expected header `category,count[,label]`, found `{}`",
                    cols.join(",")
                ),
            ))
        }
    };

    // (category, count, label, line)
    let mut rows: Vec<(usize, u64, Option<String>, usize)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let category: usize = rec[0].parse().map_err(|_| {
            parse_err(
                path,
                line,
                format!("category `{}` is not a positive integer", &rec[0]),
            )
        })?;
        let count: i64 = rec[1]
            .parse()
            .map_err(|_| parse_err(path, line, format!("count `{}` is not an integer", &rec[1])))?;
        if count < 0 {
            return Err(parse_err(path, line, format!("count {count} is negative")));
        }
        let label = has_label.then(|| rec[2].to_string());
        rows.push((category, count as u64, label, line));
    }
    if rows.is_empty() {
        return Err(parse_err(path, 1, "no data rows"));
    }
    rows.sort_by_key(|r| (r.0, r.3));
    let mut prev: Option<usize> = None;
    for (category, _, _, line) in &rows {
        let expected = prev.map_or(1, |p| p + 1);
        if prev == Some(*category) {
            return Err(parse_err(
                path,
                *line,
                format!("duplicate category {category}"),
            ));
        }
        if *category != expected {
            return Err(parse_err(
                path,
                *line,
                format!("category {category} found where {expected} expected; categories must be 1..K without gaps"),
            ));
        }
        prev = Some(*category);
    }
    if rows.len() < 2 {
        return Err(parse_err(path, rows[0].3, "need at least 2 categories"));
    }
    if rows.iter().all(|r| r.1 == 0) {
        return Err(parse_err(path, rows[0].3, "all counts are zero"));
    }
    let labels = rows
        .iter()
        .map(|(c, _, l, _)| l.clone().unwrap_or_else(|| c.to_string()))
        .collect();
    let data = CountData::new(rows.iter().map(|r| r.1).collect())?;
    Ok(LoadedCounts { data, labels })
}

/// Writes a counts file readable by [`load_counts`].
pub fn write_counts(
    path: impl AsRef<Path>,
    data: &CountData,
    labels: Option<&[String]>,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from(if labels.is_some() {
        "category,count,label\n"
    } else {
        "category,count\n"
    });
    for (i, n) in data.counts().iter().enumerate() {
        match labels {
            Some(l) => out.push_str(&format!("{},{},{}\n", i + 1, n, l[i])),
            None => out.push_str(&format!("{},{}\n", i + 1, n)),
        }
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Loads microdata, inferring `K` as the largest category in the file.
pub fn load_microdata(path: impl AsRef<Path>) -> Result<LoadedMicrodata> {
    load_microdata_with_k(path, None)
}

/// Loads microdata with an explicit category count; categories above `k`
/// are rejected.
pub fn load_microdata_with_k(path: impl AsRef<Path>, k: Option<usize>) -> Result<LoadedMicrodata> {
    let path = path.as_ref();
    let mut rdr = reader(path)?;
    let cols = header(path, &mut rdr)?;
    let has_group = match cols.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["unit_id", "category", "weight"] => false,
        ["unit_id", "category", "weight", "group"] => true,
        _ => {
            return Err(parse_err(
                path,
                1,
                format!(
                    "expected header `unit_id,category,weight[,group]`, found `{}`",
                    cols.join(",")
                ),
            ))
        }
    };

    let mut groups: Vec<(String, Vec<WeightedRecord>)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut max_cat = 0;
    let mut first_line = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        first_line.get_or_insert(line);
        if rec[0].is_empty() {
            return Err(parse_err(path, line, "empty unit_id"));
        }
        let category: usize = match rec[1].parse() {
            Ok(c) if c >= 1 => c,
            _ => {
                return Err(parse_err(
                    path,
                    line,
                    format!("category `{}` is not a positive integer", &rec[1]),
                ))
            }
        };
        if let Some(k) = k {
            if category > k {
                return Err(parse_err(
                    path,
                    line,
                    format!("category {category} outside 1..={k}"),
                ));
            }
        }
        let weight: f64 = rec[2]
            .parse()
            .map_err(|_| parse_err(path, line, format!("weight `{}` is not a number", &rec[2])))?;
        if !(weight.is_finite() && weight > 0.0) {
            return Err(parse_err(
                path,
                line,
                format!("weight {weight} must be positive"),
            ));
        }
        max_cat = max_cat.max(category);
        let name = if has_group {
            rec[3].to_string()
        } else {
            "all".to_string()
        };
        let slot = *index.entry(name.clone()).or_insert_with(|| {
            groups.push((name, Vec::new()));
            groups.len() - 1
        });
        groups[slot].1.push(WeightedRecord { category, weight });
    }
    let Some(first_line) = first_line else {
        return Err(parse_err(path, 1, "no data rows"));
    };
    let k = k.unwrap_or(max_cat);
    if k < 2 {
        return Err(parse_err(path, first_line, "need at least 2 categories"));
    }
    let datasets = groups
        .into_iter()
        .map(|(name, records)| Ok((name, WeightedMicrodata::new(records, k)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LoadedMicrodata { datasets })
}

/// Resolves `path` against `base` unless it is absolute.
pub fn resolve(base: Option<&Path>, path: &Path) -> PathBuf {
    match base {
        Some(b) if path.is_relative() => b.join(path),
        _ => path.to_path_buf(),
    }
}
