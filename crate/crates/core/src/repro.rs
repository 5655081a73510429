//! One-command reproduction of the reference tables, diffed cell by cell.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::numerics::Exponent;
use crate::race::{first_crossing, scan_constancy, table_g, table_h, Direction, RaceSpec};
use crate::witness::martin_number;

pub const REFERENCE_TOML: &str = include_str!("../data/reference_values.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct Reference {
    pub g_table: GTable,
    pub h_table: HTable,
    pub m_sigma_half: Crossing,
    pub scan_30n: Scan,
    pub example_2n5: Example,
    pub martin_digits: Digits,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GTable {
    pub limit: u64,
    pub cells: Vec<GCell>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GCell {
    pub k: u32,
    pub n: u64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HTable {
    pub limit: u64,
    pub cells: Vec<HCell>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HCell {
    pub s: i64,
    pub n: u64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Crossing {
    pub s: Exponent,
    pub limit: u64,
    pub n: u64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Scan {
    pub limit: u64,
    pub exponents: Vec<Exponent>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Example {
    pub limit: u64,
    pub holds_s: Exponent,
    pub flip_s: Exponent,
    pub flip_n: u64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Digits {
    pub digits: usize,
    pub z_mod_30: u64,
}

pub fn reference() -> Result<Reference> {
    toml::from_str(REFERENCE_TOML).map_err(|e| Error::Parse(format!("reference values: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableId {
    GTable,
    HTable,
    MSigmaHalf,
    Scan30n,
    Example2n5,
    MartinDigits,
}

impl TableId {
    pub const ALL: [TableId; 6] = [
        TableId::MartinDigits,
        TableId::Example2n5,
        TableId::HTable,
        TableId::MSigmaHalf,
        TableId::Scan30n,
        TableId::GTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::GTable => "g-table",
            TableId::HTable => "h-table",
            TableId::MSigmaHalf => "m-sigma-half",
            TableId::Scan30n => "scan-30n",
            TableId::Example2n5 => "example-2n5",
            TableId::MartinDigits => "martin-digits",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown table {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl CellReport {
    fn new(label: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        CellReport {
            label: label.into(),
            pass: expected == actual,
            expected,
            actual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproReport {
    pub table: TableId,
    pub cells: Vec<CellReport>,
}

impl ReproReport {
    pub fn pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }
}

fn show(v: Option<u64>) -> String {
    v.map_or_else(|| "none".into(), |n| n.to_string())
}

/// Computed cells; errors become failing cells so one table cannot hide
/// the rest.
fn cell(label: String, expected: impl fmt::Display, actual: Result<String>) -> CellReport {
    match actual {
        Ok(a) => CellReport::new(label, expected, a),
        Err(e) => CellReport {
            label,
            expected: expected.to_string(),
            actual: format!("error: {e}"),
            pass: false,
        },
    }
}

pub fn run_table(id: TableId, r: &Reference, cfg: &RunConfig) -> Result<ReproReport> {
    let mut cells = Vec::new();
    match id {
        TableId::GTable => {
            for c in &r.g_table.cells {
                let got = table_g(&[c.k], r.g_table.limit, cfg).map(|v| show(v[0].value));
                cells.push(cell(format!("g({})", c.k), c.n, got));
            }
        }
        TableId::HTable => {
            for c in &r.h_table.cells {
                let got = table_h(&[Exponent::integer(c.s)], r.h_table.limit, cfg).map(|v| show(v[0].value));
                cells.push(cell(format!("h({})", c.s), c.n, got));
            }
        }
        TableId::MSigmaHalf => {
            let m = &r.m_sigma_half;
            let got = RaceSpec::new(30, 1, 30, 0, m.s.clone(), Direction::Gt)
                .and_then(|spec| first_crossing(&spec, m.limit, cfg))
                .map(|x| show(x.map(|x| x.n)));
            cells.push(cell(format!("first n, s = {}", m.s), m.n, got));
        }
        TableId::Scan30n => {
            let sc = &r.scan_30n;
            for s in &sc.exponents {
                let got = RaceSpec::new(30, 1, 30, 0, s.clone(), Direction::Lt)
                    .and_then(|spec| scan_constancy(&spec, sc.limit, cfg))
                    .map(|rep| show(rep.first_violation));
                cells.push(cell(format!("violations to {}, s = {s}", sc.limit), "none", got));
            }
        }
        TableId::Example2n5 => {
            let e = &r.example_2n5;
            let scan = |s: &Exponent, limit| {
                RaceSpec::new(2, 5, 6, 17, s.clone(), Direction::Lt)
                    .and_then(|spec| scan_constancy(&spec, limit, cfg))
                    .map(|rep| show(rep.first_violation))
            };
            cells.push(cell(
                format!("violations to {}, s = {}", e.limit, e.holds_s),
                "none",
                scan(&e.holds_s, e.limit),
            ));
            cells.push(cell(format!("first violation, s = {}", e.flip_s), e.flip_n, scan(&e.flip_s, e.limit)));
        }
        TableId::MartinDigits => {
            let m = martin_number();
            cells.push(CellReport::new("digits of (z-1)/30", r.martin_digits.digits, m.digit_count));
            cells.push(CellReport::new("z mod 30", r.martin_digits.z_mod_30, m.z_mod_30));
        }
    }
    Ok(ReproReport { table: id, cells })
}
