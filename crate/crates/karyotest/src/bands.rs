//! Band table files.
//!
//! A band file is a JSON array with one object per chromosome. Arms list
//! labels in order; a nested array is a parent band followed by its
//! sub-bands:
//!
//! ```json
//! [{"chromosome": "1", "p": ["p10", ["p11", "p11.1", "p11.2"]], "q": []}]
//! ```

use std::fs;
use std::path::Path;

use karyotype_core::band::{BandEntry, BandTree, Chromosome};
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTree {
    chromosome: String,
    #[serde(default)]
    p: Vec<RawEntry>,
    #[serde(default)]
    q: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Label(String),
    Group(Vec<RawEntry>),
}

fn entry(raw: RawEntry) -> std::result::Result<BandEntry, String> {
    match raw {
        RawEntry::Label(l) => Ok(BandEntry::Label(l)),
        RawEntry::Group(items) => {
            let mut items = items.into_iter();
            match items.next() {
                Some(RawEntry::Label(parent)) => {
                    let children = items.map(entry).collect::<std::result::Result<_, _>>()?;
                    Ok(BandEntry::Group(parent, children))
                }
                _ => Err("a band group must start with its parent label".into()),
            }
        }
    }
}

pub fn parse_band_table(text: &str) -> Result<Vec<BandTree>> {
    let raw: Vec<RawTree> =
        serde_json::from_str(text).map_err(|e| Error::BandFile(e.to_string()))?;
    raw.into_iter()
        .map(|t| {
            let chromosome: Chromosome = t
                .chromosome
                .parse()
                .map_err(|_| Error::BandFile(format!("unknown chromosome {:?}", t.chromosome)))?;
            let arm = |entries: Vec<RawEntry>| {
                entries
                    .into_iter()
                    .map(entry)
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|m| Error::BandFile(format!("chromosome {chromosome}: {m}")))
            };
            Ok(BandTree {
                chromosome,
                p: arm(t.p)?,
                q: arm(t.q)?,
            })
        })
        .collect()
}

pub fn load_band_table(path: &Path) -> Result<Vec<BandTree>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_band_table(&text)
}
