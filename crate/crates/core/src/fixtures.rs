//! Shared test fixture: the four-appliance morning scenario.
//!
//! Four binary series (stove S, toaster T, water kettle W, iron I) sampled
//! every 5 ticks from 420 to 555, windowed at 35 ticks from origin 420 into
//! four sequences. Used across transform, miner, and oracle tests.

use crate::model::{Alphabet, Tick};
use crate::transform::{
    symbolize, windowed_sequence_db, SequenceDatabase, SymbolicSeries, SymbolizationRule,
    TimeSeries,
};

const START: Tick = 420;
const STEP: Tick = 5;
const SAMPLES: usize = 28; // 420, 425, .., 555

/// Raw 0/1 series for one appliance: `on` lists the sample ticks that read 1.
fn binary_series(name: &str, on: &[Tick]) -> TimeSeries {
    let samples: Vec<(Tick, f64)> = (0..SAMPLES)
        .map(|i| {
            let t = START + STEP * i as Tick;
            (t, if on.contains(&t) { 1.0 } else { 0.0 })
        })
        .collect();
    TimeSeries::new(name, samples).unwrap()
}

pub fn appliance_symbolic(alphabet: &mut Alphabet) -> Vec<SymbolicSeries> {
    let series = [
        binary_series("S", &[455, 460, 465]),
        binary_series("T", &[455, 460, 525, 530]),
        binary_series("W", &[455, 460, 525, 530, 535]),
        binary_series(
            "I",
            &[
                420, 425, 430, 435, 440, 445, 450, // 420..450
                490, 495, 500, 505, 510, 515, 520, // 490..520
            ],
        ),
    ];
    series
        .iter()
        .map(|ts| {
            let rule = SymbolizationRule::threshold(&ts.name, 0.5, "Off", "On").unwrap();
            symbolize(ts, &rule, alphabet).unwrap()
        })
        .collect()
}

/// The golden four-sequence database (35-tick windows from 420).
pub fn appliance_db() -> SequenceDatabase {
    let mut alphabet = Alphabet::new();
    let series = appliance_symbolic(&mut alphabet);
    windowed_sequence_db(&series, 35, START, alphabet, 60).unwrap()
}

/// Expected content, one `(label, start, end)` list per sequence, in the
/// database's chronological instance order.
pub fn appliance_expected() -> Vec<Vec<(&'static str, Tick, Tick)>> {
    vec![
        vec![
            ("SOff", 420, 450),
            ("TOff", 420, 450),
            ("WOff", 420, 450),
            ("IOn", 420, 450),
        ],
        vec![
            ("TOn", 455, 460),
            ("WOn", 455, 460),
            ("SOn", 455, 465),
            ("IOff", 455, 485),
            ("TOff", 460, 485),
            ("WOff", 460, 485),
            ("SOff", 465, 485),
        ],
        vec![
            ("SOff", 490, 520),
            ("TOff", 490, 520),
            ("WOff", 490, 520),
            ("IOn", 490, 520),
        ],
        vec![
            ("TOn", 525, 530),
            ("WOn", 525, 535),
            ("SOff", 525, 555),
            ("IOff", 525, 555),
            ("TOff", 530, 555),
            ("WOff", 535, 555),
        ],
    ]
}
