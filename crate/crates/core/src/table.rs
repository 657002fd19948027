//! Count tables with per-cell provenance.
//!
//! A cell is computed either from a closed form or by exhaustive
//! enumeration, and records which. Formula cells are used only where the
//! formula is known to hold; elsewhere the table falls back to the oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::ConstraintProfile;
use crate::error::{domain, Result};
use crate::{formulas, oracle, ExactInt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Formula,
    Oracle,
}

/// Which diagrams a table counts. For the `KSaturated` variants the column
/// index is the deficit `j` below the maximum arc count, not the arc count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Plain { m: u32 },
    PlainSaturated { m: u32 },
    PlainKSaturated { m: u32 },
    Extended { m: u32 },
    ExtendedSaturated { m: u32 },
    ExtendedKSaturated { m: u32 },
}

impl Family {
    pub fn parse(name: &str, m: u32) -> Option<Family> {
        Some(match name {
            "plain" => Family::Plain { m },
            "plain-saturated" => Family::PlainSaturated { m },
            "plain-k-saturated" => Family::PlainKSaturated { m },
            "extended" => Family::Extended { m },
            "extended-saturated" => Family::ExtendedSaturated { m },
            "extended-k-saturated" => Family::ExtendedKSaturated { m },
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Plain { .. } => "plain",
            Family::PlainSaturated { .. } => "plain-saturated",
            Family::PlainKSaturated { .. } => "plain-k-saturated",
            Family::Extended { .. } => "extended",
            Family::ExtendedSaturated { .. } => "extended-saturated",
            Family::ExtendedKSaturated { .. } => "extended-k-saturated",
        }
    }

    pub fn m(&self) -> u32 {
        match *self {
            Family::Plain { m }
            | Family::PlainSaturated { m }
            | Family::PlainKSaturated { m }
            | Family::Extended { m }
            | Family::ExtendedSaturated { m }
            | Family::ExtendedKSaturated { m } => m,
        }
    }

    pub fn profile(&self) -> ConstraintProfile {
        match self {
            Family::Plain { m } | Family::PlainSaturated { m } | Family::PlainKSaturated { m } => {
                ConstraintProfile::plain(*m)
            }
            _ => ConstraintProfile::extended(self.m()),
        }
    }

    pub fn saturated(&self) -> bool {
        !matches!(self, Family::Plain { .. } | Family::Extended { .. })
    }

    pub fn k_saturated(&self) -> bool {
        matches!(self, Family::PlainKSaturated { .. } | Family::ExtendedKSaturated { .. })
    }

    /// Name of the column index in output files.
    pub fn column(&self) -> &'static str {
        if self.k_saturated() {
            "j"
        } else {
            "k"
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (m={})", self.name(), self.m())
    }
}

/// How cells may be computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Formula where it applies, oracle elsewhere.
    Auto,
    /// Formula only; cells without one are an error.
    Formula,
    /// Oracle only.
    Oracle,
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Source::Auto),
            "formula" => Ok(Source::Formula),
            "oracle" => Ok(Source::Oracle),
            other => Err(format!("unknown source {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub n: u32,
    /// Arc count, or deficit `j` for k-saturated families.
    pub k: u32,
    #[serde(serialize_with = "as_decimal")]
    pub value: ExactInt,
    pub provenance: Provenance,
}

fn as_decimal<S: serde::Serializer>(v: &ExactInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Exact counts for a family over a range of `n`, each row summed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub family: Family,
    pub cells: Vec<Cell>,
}

#[derive(Serialize)]
struct JsonFamily {
    name: &'static str,
    m: u32,
    terminal_cap: u32,
    internal_cap: u32,
    saturated: bool,
    column: &'static str,
}

#[derive(Serialize)]
struct JsonSum {
    n: u32,
    #[serde(serialize_with = "as_decimal")]
    value: ExactInt,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    family: JsonFamily,
    cells: &'a [Cell],
    sums: Vec<JsonSum>,
}

impl CountTable {
    pub fn get(&self, n: u32, k: u32) -> Option<&ExactInt> {
        self.cells
            .iter()
            .find(|c| c.n == n && c.k == k)
            .map(|c| &c.value)
    }

    pub fn entries(&self) -> BTreeMap<(u32, u32), ExactInt> {
        self.cells.iter().map(|c| ((c.n, c.k), c.value.clone())).collect()
    }

    pub fn row_sums(&self) -> BTreeMap<u32, ExactInt> {
        let mut sums: BTreeMap<u32, ExactInt> = BTreeMap::new();
        for c in &self.cells {
            *sums.entry(c.n).or_default() += &c.value;
        }
        sums
    }

    /// `n,k,value` rows followed by one `n,sum,value` row per `n`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("n,{},value\n", self.family.column());
        for c in &self.cells {
            out.push_str(&format!("{},{},{}\n", c.n, c.k, c.value));
        }
        for (n, s) in self.row_sums() {
            out.push_str(&format!("{n},sum,{s}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let p = self.family.profile();
        let table = JsonTable {
            family: JsonFamily {
                name: self.family.name(),
                m: p.m,
                terminal_cap: p.terminal_cap,
                internal_cap: p.internal_cap,
                saturated: self.family.saturated(),
                column: self.family.column(),
            },
            cells: &self.cells,
            sums: self
                .row_sums()
                .into_iter()
                .map(|(n, value)| JsonSum { n, value })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&table).expect("table serialization is infallible");
        text.push('\n');
        text
    }
}

fn cell(n: u32, k: u32, value: ExactInt, provenance: Provenance) -> Cell {
    Cell {
        n,
        k,
        value,
        provenance,
    }
}

/// `ELO(n,k)`: formula for `n >= 6`, `k >= 3`, oracle otherwise.
pub fn elo_cell(n: u32, k: u32) -> Result<Cell> {
    if n >= 6 && k >= 3 {
        Ok(cell(n, k, formulas::elo(n as i64, k as i64)?, Provenance::Formula))
    } else {
        let v = oracle::count(n, k as usize, ConstraintProfile::extended(2), true);
        Ok(cell(n, k, v, Provenance::Oracle))
    }
}

/// Whether a closed form is available for this cell (deficit `j` for
/// k-saturated families).
fn formula_applies(family: Family, n: u32, k: u32) -> bool {
    let m = family.m();
    match family {
        Family::Plain { m } => m == 2,
        // the coefficient formula misses the empty diagram when n < m - 1
        Family::PlainSaturated { .. } | Family::PlainKSaturated { .. } => n + 1 >= m,
        Family::Extended { .. } => false,
        Family::ExtendedSaturated { .. } => m == 2 && n >= 6 && k >= 3,
        Family::ExtendedKSaturated { .. } => m == 2 && n >= 6 && (n / 2).checked_sub(k).is_some_and(|a| a >= 3),
    }
}

fn formula_value(family: Family, n: u32, k: u32) -> Result<ExactInt> {
    let (ni, ki, m) = (n as i64, k as i64, family.m() as i64);
    match family {
        Family::Plain { m: 2 } => {
            if k == 0 {
                Ok(ExactInt::from(1))
            } else {
                formulas::count_stacks_sw(ni, ki)
            }
        }
        Family::PlainSaturated { .. } => formulas::rs_coeff(ni, ki, m),
        Family::PlainKSaturated { m: 2 } => formulas::lo_sat(ni, ki),
        Family::PlainKSaturated { .. } => {
            let top = oracle::max_arcs(n, family.profile()) as i64;
            if ki > top {
                Ok(ExactInt::from(0))
            } else {
                formulas::rs_coeff(ni, top - ki, m)
            }
        }
        Family::ExtendedSaturated { m: 2 } => formulas::elo(ni, ki),
        Family::ExtendedKSaturated { m: 2 } => formulas::elo(ni, (n / 2) as i64 - ki),
        _ => Err(domain("count", format!("no closed form for {family} at n={n}"))),
    }
}

/// Arc counts (or deficits) listed for row `n`.
pub fn default_columns(family: Family, n: u32) -> std::ops::RangeInclusive<u32> {
    0..=oracle::max_arcs(n, family.profile())
}

fn row(family: Family, n: u32, ks: &[u32], source: Source) -> Result<Vec<Cell>> {
    let p = family.profile();
    let top = oracle::max_arcs(n, p);
    let use_formula = |k: u32| match source {
        Source::Formula => true,
        Source::Oracle => false,
        Source::Auto => formula_applies(family, n, k),
    };
    // arc count needed from the oracle for column k
    let arcs_of = |k: u32| -> Option<u32> {
        if family.k_saturated() {
            top.checked_sub(k)
        } else {
            Some(k)
        }
    };
    let oracle_max = ks
        .iter()
        .filter(|&&k| !use_formula(k))
        .filter_map(|&k| arcs_of(k))
        .max();
    let oracle_counts = oracle_max.map(|mk| oracle::count_by_k_upto(n, p, family.saturated(), mk as usize));
    ks.iter()
        .map(|&k| {
            if use_formula(k) {
                Ok(cell(n, k, formula_value(family, n, k)?, Provenance::Formula))
            } else {
                let counts = oracle_counts.as_ref().expect("oracle row computed");
                let v = arcs_of(k).map_or(ExactInt::from(0), |a| counts[a as usize].clone());
                Ok(cell(n, k, v, Provenance::Oracle))
            }
        })
        .collect()
}

/// Builds the table for `n` in `ns`, restricted to the columns in `ks` when
/// given. Rows are computed in parallel and assembled in order of `n`.
pub fn build_table(
    family: Family,
    ns: std::ops::RangeInclusive<u32>,
    ks: Option<std::ops::RangeInclusive<u32>>,
    source: Source,
) -> Result<CountTable> {
    if ns.is_empty() || *ns.start() < 1 {
        return Err(domain("count", format!("n range {ns:?} must be nonempty and start at 1 or above")));
    }
    let rows: Vec<Result<Vec<Cell>>> = ns
        .clone()
        .collect::<Vec<u32>>()
        .into_par_iter()
        .map(|n| {
            let cols: Vec<u32> = match &ks {
                Some(r) => r.clone().collect(),
                None => default_columns(family, n).collect(),
            };
            row(family, n, &cols, source)
        })
        .collect();
    let mut cells = Vec::new();
    for r in rows {
        cells.extend(r?);
    }
    Ok(CountTable { family, cells })
}

/// `(n, k, ELO(n,k))` rows for the given `n` values and arc counts, all from
/// the formula.
pub fn elo_curves(ns: &[u32], ks: std::ops::RangeInclusive<u32>) -> Result<Vec<Cell>> {
    let jobs: Vec<(u32, u32)> = ns
        .iter()
        .flat_map(|&n| ks.clone().filter(move |&k| k <= n / 2).map(move |k| (n, k)))
        .collect();
    jobs.into_par_iter()
        .map(|(n, k)| Ok(cell(n, k, formulas::elo(n as i64, k as i64)?, Provenance::Formula)))
        .collect()
}

pub fn curves_csv(cells: &[Cell]) -> String {
    let mut out = String::from("n,k,value\n");
    for c in cells {
        out.push_str(&format!("{},{},{}\n", c.n, c.k, c.value));
    }
    out
}
