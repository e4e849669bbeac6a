//! Save/load a sequence database as JSON so an assembled corpus can be
//! mined again without re-ingesting or re-generating it.
//!
//! Layout: a symbol table plus, per sequence, compact `[symbol_index,
//! start, end]` triples. Symbol ids are positions in the table, so a
//! round trip preserves them exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use rtm_core::{Alphabet, EventInstance, Interval, SequenceDatabase, Tick};

use crate::error::CliError;

#[derive(Serialize, Deserialize)]
struct DbFile {
    tick_seconds: u64,
    symbols: Vec<String>,
    sequences: Vec<Vec<(u32, Tick, Tick)>>,
}

pub fn to_json(db: &SequenceDatabase) -> Result<String, CliError> {
    let file = DbFile {
        tick_seconds: db.tick_seconds,
        symbols: db.alphabet.symbols().map(|s| s.label().to_owned()).collect(),
        sequences: db
            .sequences()
            .iter()
            .map(|seq| {
                seq.instances()
                    .iter()
                    .map(|inst| (inst.symbol.id(), inst.start(), inst.end()))
                    .collect()
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn from_json(text: &str) -> Result<SequenceDatabase, CliError> {
    let file: DbFile = serde_json::from_str(text)?;
    let mut alphabet = Alphabet::new();
    for (index, label) in file.symbols.iter().enumerate() {
        let symbol = alphabet.intern(label)?;
        if symbol.id() as usize != index {
            return Err(CliError::Parse(format!(
                "database file: symbol {label:?} repeats in the symbol table"
            )));
        }
    }
    let mut per_sequence = Vec::with_capacity(file.sequences.len());
    for (seq_idx, rows) in file.sequences.iter().enumerate() {
        let mut instances = Vec::with_capacity(rows.len());
        for &(sym, start, end) in rows {
            let symbol = alphabet.by_id(sym).ok_or_else(|| {
                CliError::Parse(format!(
                    "database file: sequence {} references unknown symbol id {sym}",
                    seq_idx + 1
                ))
            })?;
            instances.push(EventInstance::new(symbol, Interval::new(start, end)?));
        }
        per_sequence.push(instances);
    }
    Ok(SequenceDatabase::from_instances(
        alphabet,
        per_sequence,
        file.tick_seconds,
    ))
}

pub fn save(db: &SequenceDatabase, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, to_json(db)?)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<SequenceDatabase, CliError> {
    from_json(&std::fs::read_to_string(path)?)
}
