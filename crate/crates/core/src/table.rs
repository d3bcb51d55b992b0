//! Reference dimension bands shipped with the crate.

use crate::alphabets::Alphabet;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::solver::{dimension, DimensionEnclosure, SolverConfig};

const DATA: &str = include_str!("../data/reference_bands.txt");

/// Width limit for a computed enclosure to count as reproducing a row.
pub const MAX_WIDTH: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    /// Display name such as `{1,2^5,3^5}`.
    pub name: String,
    /// Alphabet in text form.
    pub spec: String,
    pub alphabet: Alphabet,
    pub lo: String,
    pub hi: String,
    /// Outward enclosure of the decimal band.
    pub band: Interval,
}

fn parse_row(line: &str) -> Result<TableRow> {
    let f: Vec<&str> = line.split('|').map(str::trim).collect();
    if f.len() != 4 {
        return Err(Error::Parse(format!("bad table row {line:?}")));
    }
    let band =
        Interval::from_decimal_bounds(f[2], f[3]).ok_or_else(|| Error::Parse(format!("bad band in {line:?}")))?;
    Ok(TableRow {
        name: f[0].to_string(),
        spec: f[1].to_string(),
        alphabet: f[1].parse()?,
        lo: f[2].to_string(),
        hi: f[3].to_string(),
        band,
    })
}

pub fn rows() -> Vec<TableRow> {
    DATA.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_row(l).expect("shipped table parses"))
        .collect()
}

/// Row by display name, alphabet text, or canonical alphabet.
pub fn find(key: &str) -> Option<TableRow> {
    let key = key.trim();
    let parsed: Option<Alphabet> = key.parse().ok();
    rows().into_iter().find(|r| r.name == key || r.spec == key || parsed.as_ref() == Some(&r.alphabet))
}

/// Band of the row with the given display name; panics on unknown names.
pub fn band(name: &str) -> Interval {
    find(name).unwrap_or_else(|| panic!("no table row {name}")).band
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowCheck {
    pub row: TableRow,
    pub computed: DimensionEnclosure,
    pub intersects: bool,
    pub width_ok: bool,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.intersects && self.width_ok
    }
}

pub fn check_row(row: &TableRow, config: &SolverConfig) -> Result<RowCheck> {
    let computed = dimension(&row.alphabet, config)?;
    Ok(RowCheck {
        intersects: computed.enclosure.overlaps(row.band),
        width_ok: computed.enclosure.width() <= MAX_WIDTH,
        row: row.clone(),
        computed,
    })
}
