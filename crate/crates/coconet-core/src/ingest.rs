//! Listing ingestion: parse raw (date, country, item) observations and
//! assemble the deduplicated country x item bipartite incidence.

use crate::country::CountryCode;
use crate::error::Error;
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read};

/// One (date, country, item) popularity-list observation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListingRecord {
    pub date: NaiveDate,
    pub country: CountryCode,
    pub item_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
}

/// Input encodings for listings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListingFormat {
    Jsonl,
    Csv,
}

impl std::str::FromStr for ListingFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(ListingFormat::Jsonl),
            "csv" => Ok(ListingFormat::Csv),
            other => Err(Error::UnreadableInput(format!(
                "unknown listing format {other:?} (expected jsonl or csv)"
            ))),
        }
    }
}

/// A malformed input line, reported with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    pub line: u64,
    pub reason: String,
}

/// Result of a parse pass: records in input order plus collected rejects.
#[derive(Debug, Default)]
pub struct ParsedListings {
    pub records: Vec<ListingRecord>,
    pub rejects: Vec<Reject>,
}

impl ParsedListings {
    /// Rejects report as TSV: line_number <TAB> reason.
    pub fn rejects_tsv(&self) -> String {
        let mut out = String::from("line_number\treason\n");
        for r in &self.rejects {
            out.push_str(&format!("{}\t{}\n", r.line, r.reason));
        }
        out
    }
}

#[derive(Deserialize)]
struct RawRecord {
    date: String,
    country: String,
    item_id: String,
    #[serde(default)]
    category: Option<String>,
}

fn validate(raw: RawRecord) -> Result<ListingRecord, String> {
    let date = NaiveDate::parse_from_str(&raw.date, "%Y-%m-%d")
        .map_err(|_| format!("invalid date {:?}", raw.date))?;
    let country = CountryCode::new(&raw.country)
        .map_err(|_| format!("invalid country code {:?}", raw.country))?;
    if raw.item_id.is_empty() {
        return Err("empty item_id".to_owned());
    }
    Ok(ListingRecord {
        date,
        country,
        item_id: raw.item_id,
        category: raw.category,
    })
}

/// Parse listings from a byte stream.
///
/// Malformed lines are collected into the rejects report and parsing
/// continues; with `strict` the first malformed line aborts the parse.
/// An unreadable stream (bad UTF-8, missing CSV header) is always fatal.
pub fn parse_listings<R: Read>(
    source: R,
    format: ListingFormat,
    strict: bool,
) -> Result<ParsedListings, Error> {
    match format {
        ListingFormat::Jsonl => parse_jsonl(source, strict),
        ListingFormat::Csv => parse_csv(source, strict),
    }
}

fn reject(out: &mut ParsedListings, strict: bool, line: u64, reason: String) -> Result<(), Error> {
    if strict {
        return Err(Error::MalformedLine { line, reason });
    }
    out.rejects.push(Reject { line, reason });
    Ok(())
}

fn parse_jsonl<R: Read>(source: R, strict: bool) -> Result<ParsedListings, Error> {
    let reader = BufReader::new(source);
    let mut out = ParsedListings::default();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawRecord>(&line) {
            Ok(raw) => match validate(raw) {
                Ok(rec) => out.records.push(rec),
                Err(reason) => reject(&mut out, strict, line_no, reason)?,
            },
            Err(e) => reject(&mut out, strict, line_no, format!("invalid JSON: {e}"))?,
        }
    }
    Ok(out)
}

fn parse_csv<R: Read>(source: R, strict: bool) -> Result<ParsedListings, Error> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::UnreadableInput(format!("cannot read CSV header: {e}")))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (date_col, country_col, item_col) = match (col("date"), col("country"), col("item_id")) {
        (Some(d), Some(c), Some(i)) => (d, c, i),
        _ => {
            return Err(Error::UnreadableInput(
                "CSV header must name date, country, item_id".to_owned(),
            ))
        }
    };
    let category_col = col("category");

    let mut out = ParsedListings::default();
    for record in reader.records() {
        match record {
            Ok(row) => {
                let line_no = row.position().map(|p| p.line()).unwrap_or(0);
                let field = |i: usize| row.get(i).map(str::to_owned);
                let raw = match (field(date_col), field(country_col), field(item_col)) {
                    (Some(date), Some(country), Some(item_id)) => RawRecord {
                        date,
                        country,
                        item_id,
                        category: category_col
                            .and_then(|i| row.get(i))
                            .filter(|s| !s.is_empty())
                            .map(str::to_owned),
                    },
                    _ => {
                        reject(&mut out, strict, line_no, "missing required field".into())?;
                        continue;
                    }
                };
                match validate(raw) {
                    Ok(rec) => out.records.push(rec),
                    Err(reason) => reject(&mut out, strict, line_no, reason)?,
                }
            }
            Err(e) => {
                let line_no = e.position().map(|p| p.line()).unwrap_or(0);
                reject(&mut out, strict, line_no, format!("malformed CSV: {e}"))?;
            }
        }
    }
    Ok(out)
}

/// Country x item incidence with per-item out-degrees.
///
/// Incidence is binary and deduplicated: repeat listings of the same item
/// by the same country (e.g. on different days) collapse to one pair.
/// Immutable once built; all downstream reads may share it freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    countries: Vec<CountryCode>,
    items: Vec<String>,
    /// Per item: sorted indices of the countries listing it. Length = n_k.
    item_countries: Vec<Vec<u32>>,
    /// Per country: sorted indices of its items.
    country_items: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    pub fn countries(&self) -> &[CountryCode] {
        &self.countries
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn country_index(&self, code: &CountryCode) -> Option<usize> {
        self.countries.binary_search(code).ok()
    }

    /// Out-degree n_k: the number of countries listing item k.
    pub fn out_degree(&self, item: usize) -> usize {
        self.item_countries[item].len()
    }

    pub fn item_countries(&self, item: usize) -> &[u32] {
        &self.item_countries[item]
    }

    pub fn country_items(&self, country: usize) -> &[u32] {
        &self.country_items[country]
    }

    pub fn incidence_count(&self) -> usize {
        self.item_countries.iter().map(Vec::len).sum()
    }
}

/// Assemble the bipartite incidence from validated records.
///
/// When `category_filter` is given only records with that exact category
/// label enter the graph. Items listed by fewer than
/// `min_countries_per_item` countries are dropped; their out-degrees are
/// recomputed over the retained incidence. Countries remain in the node
/// set even if all their items were dropped.
pub fn build_bipartite(
    records: &[ListingRecord],
    category_filter: Option<&str>,
    min_countries_per_item: usize,
) -> Result<BipartiteGraph, Error> {
    let mut pairs: BTreeMap<&str, BTreeSet<CountryCode>> = BTreeMap::new();
    let mut countries: BTreeSet<CountryCode> = BTreeSet::new();
    for rec in records {
        if let Some(filter) = category_filter {
            if rec.category.as_deref() != Some(filter) {
                continue;
            }
        }
        countries.insert(rec.country);
        pairs.entry(&rec.item_id).or_default().insert(rec.country);
    }
    if countries.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let countries: Vec<CountryCode> = countries.into_iter().collect();
    let index: BTreeMap<CountryCode, u32> = countries
        .iter()
        .enumerate()
        .map(|(i, c)| (*c, i as u32))
        .collect();

    let mut items = Vec::new();
    let mut item_countries = Vec::new();
    let mut country_items: Vec<Vec<u32>> = vec![Vec::new(); countries.len()];
    for (item, listed_by) in pairs {
        if listed_by.len() < min_countries_per_item.max(1) {
            continue;
        }
        let item_idx = items.len() as u32;
        let listing: Vec<u32> = listed_by.iter().map(|c| index[c]).collect();
        for &c in &listing {
            country_items[c as usize].push(item_idx);
        }
        items.push(item.to_owned());
        item_countries.push(listing);
    }

    Ok(BipartiteGraph {
        countries,
        items,
        item_countries,
        country_items,
    })
}
