//! First pipeline phase: turn raw numeric time series into a temporal
//! sequence database. Raw samples are symbolized through value bins, maximal
//! runs of one symbol are merged into event instances, and instances are cut
//! into fixed, non-overlapping windows, one temporal sequence per window.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{Alphabet, EventInstance, Interval, ModelError, SeqId, Symbol, Tick};

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("series {name:?}: timestamps must be strictly increasing at a uniform step (sample {index}: {got}, expected {expected})")]
    NonUniformStep {
        name: String,
        index: usize,
        got: Tick,
        expected: Tick,
    },
    #[error("series {name:?}: need at least 2 samples to infer the sampling step")]
    CannotInferStep { name: String },
    #[error("sampling step must be >= 1 tick, got {0}")]
    BadStep(Tick),
    #[error("symbolization rule needs at least one bin")]
    NoBins,
    #[error("bin upper bounds must be finite and strictly increasing; only the last bin may be open-ended")]
    BadBins,
    #[error("bin labels must be unique, {0:?} repeats")]
    DuplicateBinLabel(String),
    #[error("series {name:?} sample {index} is NaN and the policy is to reject")]
    NanRejected { name: String, index: usize },
    #[error("series {name:?} starts with NaN; nothing to carry forward")]
    LeadingNan { name: String },
    #[error("cannot extract instances from an empty symbolic series")]
    EmptySeries,
    #[error("window length must be >= 1 tick, got {0}")]
    BadWindow(Tick),
    #[error("window length {window} is shorter than the sampling step {step} of series {name:?}")]
    WindowBelowStep {
        window: Tick,
        step: Tick,
        name: String,
    },
    #[error("data starts at {first} before the window origin {origin}")]
    DataBeforeOrigin { first: Tick, origin: Tick },
    #[error("sequence ids must be dense starting at 1, got {got} at position {index}")]
    NonDenseIds { got: SeqId, index: usize },
}

/// Uniformly sampled numeric series.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub name: String,
    samples: Vec<(Tick, f64)>,
    step: Tick,
}

impl TimeSeries {
    /// Build from samples, inferring the step from the first two timestamps.
    pub fn new(name: impl Into<String>, samples: Vec<(Tick, f64)>) -> Result<Self, TransformError> {
        let name = name.into();
        if samples.len() < 2 {
            return Err(TransformError::CannotInferStep { name });
        }
        let step = samples[1].0 - samples[0].0;
        Self::with_step(name, samples, step)
    }

    /// Build with an explicit step; allows empty and single-sample series.
    pub fn with_step(
        name: impl Into<String>,
        samples: Vec<(Tick, f64)>,
        step: Tick,
    ) -> Result<Self, TransformError> {
        let name = name.into();
        if step < 1 {
            return Err(TransformError::BadStep(step));
        }
        for (index, pair) in samples.windows(2).enumerate() {
            let expected = pair[0].0 + step;
            if pair[1].0 != expected {
                return Err(TransformError::NonUniformStep {
                    name,
                    index: index + 1,
                    got: pair[1].0,
                    expected,
                });
            }
        }
        Ok(TimeSeries {
            name,
            samples,
            step,
        })
    }

    pub fn samples(&self) -> &[(Tick, f64)] {
        &self.samples
    }

    pub fn step(&self) -> Tick {
        self.step
    }
}

/// What to do with NaN / missing samples during symbolization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NanPolicy {
    /// Fail the run (default).
    #[default]
    Reject,
    /// Repeat the previous sample's symbol.
    CarryForward,
}

/// One value bin. A sample falls into the first bin whose `upper` bound is
/// strictly greater than the value; the final bin must be open-ended
/// (`upper = None`) and catches everything else. Boundary values therefore
/// belong to the bin above: with bins `[<0.5 -> Off, rest -> On]` a sample of
/// exactly 0.5 reads as On.
#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub upper: Option<f64>,
    pub label: String,
}

/// Per-series symbolization rule. Emitted symbol labels are
/// `{prefix}{bin label}` with the prefix defaulting to the series name, so a
/// series `T` with bins Off/On yields `TOff` / `TOn`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolizationRule {
    pub series: String,
    pub prefix: Option<String>,
    pub bins: Vec<Bin>,
    pub nan_policy: NanPolicy,
}

impl SymbolizationRule {
    pub fn new(series: impl Into<String>, bins: Vec<Bin>) -> Result<Self, TransformError> {
        let rule = SymbolizationRule {
            series: series.into(),
            prefix: None,
            bins,
            nan_policy: NanPolicy::default(),
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Two-bin threshold rule: `< threshold -> low`, `>= threshold -> high`.
    pub fn threshold(
        series: impl Into<String>,
        threshold: f64,
        low: impl Into<String>,
        high: impl Into<String>,
    ) -> Result<Self, TransformError> {
        Self::new(
            series,
            vec![
                Bin {
                    upper: Some(threshold),
                    label: low.into(),
                },
                Bin {
                    upper: None,
                    label: high.into(),
                },
            ],
        )
    }

    pub fn with_prefix(mut self, prefix: impl Into<String>) -> Self {
        self.prefix = Some(prefix.into());
        self
    }

    pub fn with_nan_policy(mut self, policy: NanPolicy) -> Self {
        self.nan_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<(), TransformError> {
        if self.bins.is_empty() {
            return Err(TransformError::NoBins);
        }
        let mut prev: Option<f64> = None;
        for (i, bin) in self.bins.iter().enumerate() {
            let last = i == self.bins.len() - 1;
            match bin.upper {
                Some(u) => {
                    if last || !u.is_finite() || prev.is_some_and(|p| u <= p) {
                        return Err(TransformError::BadBins);
                    }
                    prev = Some(u);
                }
                None => {
                    if !last {
                        return Err(TransformError::BadBins);
                    }
                }
            }
        }
        for (i, bin) in self.bins.iter().enumerate() {
            if self.bins[..i].iter().any(|b| b.label == bin.label) {
                return Err(TransformError::DuplicateBinLabel(bin.label.clone()));
            }
        }
        Ok(())
    }

    fn bin_label(&self, value: f64) -> &str {
        for bin in &self.bins {
            match bin.upper {
                Some(u) if value < u => return &bin.label,
                Some(_) => {}
                None => return &bin.label,
            }
        }
        // validate() guarantees an open-ended last bin.
        unreachable!("symbolization rule without open-ended last bin")
    }
}

/// A time series after symbolization: one symbol per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicSeries {
    pub name: String,
    samples: Vec<(Tick, Symbol)>,
    step: Tick,
}

impl SymbolicSeries {
    pub fn samples(&self) -> &[(Tick, Symbol)] {
        &self.samples
    }

    pub fn step(&self) -> Tick {
        self.step
    }
}

/// Map every sample of `ts` to a symbol through the rule's bins. Symbols are
/// interned into `alphabet` as `{prefix}{bin label}`.
pub fn symbolize(
    ts: &TimeSeries,
    rule: &SymbolizationRule,
    alphabet: &mut Alphabet,
) -> Result<SymbolicSeries, TransformError> {
    rule.validate()?;
    let prefix = rule.prefix.as_deref().unwrap_or(&ts.name);
    let mut samples = Vec::with_capacity(ts.samples.len());
    let mut last: Option<Symbol> = None;
    for (index, &(t, value)) in ts.samples.iter().enumerate() {
        let symbol = if value.is_nan() {
            match rule.nan_policy {
                NanPolicy::Reject => {
                    return Err(TransformError::NanRejected {
                        name: ts.name.clone(),
                        index,
                    })
                }
                NanPolicy::CarryForward => last.clone().ok_or(TransformError::LeadingNan {
                    name: ts.name.clone(),
                })?,
            }
        } else {
            alphabet.intern(&format!("{prefix}{}", rule.bin_label(value)))?
        };
        last = Some(symbol.clone());
        samples.push((t, symbol));
    }
    Ok(SymbolicSeries {
        name: ts.name.clone(),
        samples,
        step: ts.step,
    })
}

/// Merge maximal runs of identical symbols into event instances.
///
/// A run over samples `t_1 .. t_k` becomes the interval `[t_1, t_k]`; a
/// single-sample run becomes `[t_1, t_1 + step]` so it keeps a positive
/// duration. Adjacent instances therefore carry different symbols, and the
/// sample at an instance's start always bears the instance's symbol.
pub fn extract_instances(ss: &SymbolicSeries) -> Result<Vec<EventInstance>, TransformError> {
    if ss.samples.is_empty() {
        return Err(TransformError::EmptySeries);
    }
    let mut out = Vec::new();
    let mut run_start = 0usize;
    for i in 1..=ss.samples.len() {
        if i == ss.samples.len() || ss.samples[i].1 != ss.samples[run_start].1 {
            let first = ss.samples[run_start].0;
            let last = ss.samples[i - 1].0;
            let end = if last > first { last } else { first + ss.step };
            out.push(EventInstance::new(
                ss.samples[run_start].1.clone(),
                Interval::new(first, end)?,
            ));
            run_start = i;
        }
    }
    Ok(out)
}

/// One windowed sequence: the instances whose (clipped) spans fall into a
/// window, sorted chronologically (start, then end, then symbol id).
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalSequence {
    pub id: SeqId,
    instances: Vec<EventInstance>,
}

impl TemporalSequence {
    pub fn new(id: SeqId, mut instances: Vec<EventInstance>) -> Self {
        instances.sort_by_key(|e| e.sort_key());
        TemporalSequence { id, instances }
    }

    pub fn id(&self) -> SeqId {
        self.id
    }

    pub fn instances(&self) -> &[EventInstance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// A windowed temporal sequence database: dense 1-based sequence ids over a
/// shared alphabet.
#[derive(Debug, Clone)]
pub struct SequenceDatabase {
    pub alphabet: Alphabet,
    sequences: Vec<TemporalSequence>,
    /// Wall-clock seconds per tick; metadata only, mining never reads it.
    pub tick_seconds: u64,
}

impl SequenceDatabase {
    pub fn new(
        alphabet: Alphabet,
        sequences: Vec<TemporalSequence>,
        tick_seconds: u64,
    ) -> Result<Self, TransformError> {
        for (index, seq) in sequences.iter().enumerate() {
            if seq.id != (index + 1) as SeqId {
                return Err(TransformError::NonDenseIds {
                    got: seq.id,
                    index,
                });
            }
        }
        Ok(SequenceDatabase {
            alphabet,
            sequences,
            tick_seconds,
        })
    }

    /// Build from bare instance lists, assigning ids 1..N in order.
    pub fn from_instances(
        alphabet: Alphabet,
        per_sequence: Vec<Vec<EventInstance>>,
        tick_seconds: u64,
    ) -> Self {
        let sequences = per_sequence
            .into_iter()
            .enumerate()
            .map(|(i, instances)| TemporalSequence::new((i + 1) as SeqId, instances))
            .collect();
        SequenceDatabase {
            alphabet,
            sequences,
            tick_seconds,
        }
    }

    pub fn sequences(&self) -> &[TemporalSequence] {
        &self.sequences
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn sequence(&self, id: SeqId) -> Option<&TemporalSequence> {
        self.sequences.get(id as usize - 1)
    }
}

fn window_count(origin: Tick, window: Tick, max_end: Tick) -> usize {
    if max_end <= origin {
        0
    } else {
        ((max_end - 1 - origin) / window + 1) as usize
    }
}

/// Cut pre-extracted instances into fixed windows `[origin + k*w, origin +
/// (k+1)*w)`. An instance crossing a boundary is clipped into one piece per
/// window it touches, so total duration is preserved; pieces share the
/// boundary tick. Windows with fewer than two instances are still emitted so
/// ids stay dense.
pub fn build_sequence_db(
    instances_per_series: &BTreeMap<String, Vec<EventInstance>>,
    window: Tick,
    origin: Tick,
    alphabet: Alphabet,
    tick_seconds: u64,
) -> Result<SequenceDatabase, TransformError> {
    if window < 1 {
        return Err(TransformError::BadWindow(window));
    }
    let mut max_end = origin;
    for instances in instances_per_series.values() {
        for inst in instances {
            if inst.start() < origin {
                return Err(TransformError::DataBeforeOrigin {
                    first: inst.start(),
                    origin,
                });
            }
            max_end = max_end.max(inst.end());
        }
    }
    let windows = window_count(origin, window, max_end);
    let mut per_window: Vec<Vec<EventInstance>> = vec![Vec::new(); windows];
    for instances in instances_per_series.values() {
        for inst in instances {
            let first = ((inst.start() - origin) / window) as usize;
            let last = ((inst.end() - 1 - origin) / window) as usize;
            for k in first..=last {
                let ws = origin + k as Tick * window;
                let we = ws + window;
                let piece_start = inst.start().max(ws);
                let piece_end = inst.end().min(we);
                if piece_start < piece_end {
                    per_window[k].push(EventInstance::new(
                        inst.symbol.clone(),
                        Interval::new(piece_start, piece_end)?,
                    ));
                }
            }
        }
    }
    Ok(SequenceDatabase::from_instances(
        alphabet, per_window, tick_seconds,
    ))
}

/// End-to-end windowing of symbolized series: the driver used by ingestion.
///
/// Each window is rebuilt from its own samples: runs are merged per window and
/// every instance after the first starts where the previous one ends, so a
/// series' instances tile the window span contiguously. (State flips are
/// anchored at the last sample of the old state — between two samples the old
/// state is only known to persist up to its final observation.) Clipping
/// pre-merged instances at window boundaries instead would shift those flip
/// points off the sample grid.
pub fn windowed_sequence_db(
    series: &[SymbolicSeries],
    window: Tick,
    origin: Tick,
    alphabet: Alphabet,
    tick_seconds: u64,
) -> Result<SequenceDatabase, TransformError> {
    if window < 1 {
        return Err(TransformError::BadWindow(window));
    }
    let mut max_t = origin;
    for ss in series {
        if window < ss.step {
            return Err(TransformError::WindowBelowStep {
                window,
                step: ss.step,
                name: ss.name.clone(),
            });
        }
        if let Some(&(first, _)) = ss.samples.first() {
            if first < origin {
                return Err(TransformError::DataBeforeOrigin {
                    first,
                    origin,
                });
            }
        }
        if let Some(&(last, _)) = ss.samples.last() {
            max_t = max_t.max(last);
        }
    }
    let windows = window_count(origin, window, max_t + 1);
    let mut per_window: Vec<Vec<EventInstance>> = vec![Vec::new(); windows];
    for ss in series {
        let mut i = 0usize;
        while i < ss.samples.len() {
            let k = ((ss.samples[i].0 - origin) / window) as usize;
            let we = origin + (k as Tick + 1) * window;
            // Slice out this window's samples and merge its runs.
            let mut j = i;
            while j < ss.samples.len() && ss.samples[j].0 < we {
                j += 1;
            }
            let mut prev_end: Option<Tick> = None;
            let mut run_start = i;
            for s in (i + 1)..=j {
                if s == j || ss.samples[s].1 != ss.samples[run_start].1 {
                    let first = ss.samples[run_start].0;
                    let last = ss.samples[s - 1].0;
                    let start = prev_end.unwrap_or(first);
                    let end = if last > first {
                        last
                    } else {
                        (first + ss.step).min(we)
                    };
                    per_window[k].push(EventInstance::new(
                        ss.samples[run_start].1.clone(),
                        Interval::new(start, end)?,
                    ));
                    prev_end = Some(end);
                    run_start = s;
                }
            }
            i = j;
        }
    }
    Ok(SequenceDatabase::from_instances(
        alphabet, per_window, tick_seconds,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_off_rule(series: &str) -> SymbolizationRule {
        SymbolizationRule::threshold(series, 0.5, "Off", "On").unwrap()
    }

    #[test]
    fn symbolize_threshold_values() {
        let mut alphabet = Alphabet::new();
        let ts = TimeSeries::new(
            "X",
            vec![(0, 1.6), (5, 1.2), (10, 0.3), (15, 0.0)],
        )
        .unwrap();
        let ss = symbolize(&ts, &on_off_rule("X"), &mut alphabet).unwrap();
        let labels: Vec<&str> = ss.samples().iter().map(|(_, s)| s.label()).collect();
        assert_eq!(labels, vec!["XOn", "XOn", "XOff", "XOff"]);
    }

    #[test]
    fn symbolize_boundary_value_goes_up() {
        // A sample exactly on the threshold belongs to the upper bin.
        let mut alphabet = Alphabet::new();
        let ts = TimeSeries::new("X", vec![(0, 0.5), (1, 0.5), (2, 0.5)]).unwrap();
        let ss = symbolize(&ts, &on_off_rule("X"), &mut alphabet).unwrap();
        assert!(ss.samples().iter().all(|(_, s)| s.label() == "XOn"));
    }

    #[test]
    fn symbolize_empty_series() {
        let mut alphabet = Alphabet::new();
        let ts = TimeSeries::with_step("X", vec![], 5).unwrap();
        let ss = symbolize(&ts, &on_off_rule("X"), &mut alphabet).unwrap();
        assert!(ss.samples().is_empty());
    }

    #[test]
    fn symbolize_nan_policies() {
        let mut alphabet = Alphabet::new();
        let ts = TimeSeries::new("X", vec![(0, 1.0), (1, f64::NAN), (2, 0.0)]).unwrap();
        assert!(matches!(
            symbolize(&ts, &on_off_rule("X"), &mut alphabet),
            Err(TransformError::NanRejected { index: 1, .. })
        ));
        let rule = on_off_rule("X").with_nan_policy(NanPolicy::CarryForward);
        let ss = symbolize(&ts, &rule, &mut alphabet).unwrap();
        let labels: Vec<&str> = ss.samples().iter().map(|(_, s)| s.label()).collect();
        assert_eq!(labels, vec!["XOn", "XOn", "XOff"]);

        let leading = TimeSeries::new("X", vec![(0, f64::NAN), (1, 1.0)]).unwrap();
        assert!(matches!(
            symbolize(&leading, &rule, &mut alphabet),
            Err(TransformError::LeadingNan { .. })
        ));
    }

    #[test]
    fn extract_merges_runs() {
        // Toaster-style series: two on-bursts inside long off stretches.
        let mut alphabet = Alphabet::new();
        let mut values = vec![0.0; 28];
        for i in [7, 8] {
            values[i] = 1.0; // 7:35, 7:40
        }
        for i in [21, 22] {
            values[i] = 1.0; // 8:45, 8:50
        }
        let samples: Vec<(Tick, f64)> = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (420 + 5 * i as Tick, v))
            .collect();
        let ts = TimeSeries::new("T", samples).unwrap();
        let ss = symbolize(&ts, &on_off_rule("T"), &mut alphabet).unwrap();
        let instances = extract_instances(&ss).unwrap();
        let ons: Vec<(Tick, Tick)> = instances
            .iter()
            .filter(|e| e.symbol.label() == "TOn")
            .map(|e| (e.start(), e.end()))
            .collect();
        assert_eq!(ons, vec![(455, 460), (525, 530)]);
        assert_eq!(instances.len(), 5); // Off, On, Off, On, Off
    }

    #[test]
    fn extract_single_sample_gets_one_step() {
        let mut alphabet = Alphabet::new();
        let ts = TimeSeries::with_step("X", vec![(10, 1.0)], 5).unwrap();
        let ss = symbolize(&ts, &on_off_rule("X"), &mut alphabet).unwrap();
        let instances = extract_instances(&ss).unwrap();
        assert_eq!(instances.len(), 1);
        assert_eq!((instances[0].start(), instances[0].end()), (10, 15));
    }

    #[test]
    fn extract_alternating_samples() {
        let mut alphabet = Alphabet::new();
        let ts = TimeSeries::new(
            "X",
            vec![(0, 1.0), (1, 0.0), (2, 1.0), (3, 0.0)],
        )
        .unwrap();
        let ss = symbolize(&ts, &on_off_rule("X"), &mut alphabet).unwrap();
        let instances = extract_instances(&ss).unwrap();
        let spans: Vec<(Tick, Tick)> = instances.iter().map(|e| (e.start(), e.end())).collect();
        assert_eq!(spans, vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn extract_round_trips_sample_symbols() {
        // Every sample must be recoverable from the instance that started most
        // recently at or before it.
        let mut alphabet = Alphabet::new();
        let values = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0];
        let samples: Vec<(Tick, f64)> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as Tick * 3, v))
            .collect();
        let ts = TimeSeries::new("X", samples).unwrap();
        let ss = symbolize(&ts, &on_off_rule("X"), &mut alphabet).unwrap();
        let instances = extract_instances(&ss).unwrap();
        for (t, symbol) in ss.samples() {
            let covering = instances
                .iter()
                .filter(|e| e.start() <= *t && *t <= e.end())
                .max_by_key(|e| e.start())
                .unwrap();
            assert_eq!(&covering.symbol, symbol, "sample at {t}");
        }
    }

    #[test]
    fn clipping_preserves_duration_and_bounds() {
        let mut alphabet = Alphabet::new();
        let sym = alphabet.intern("XOn").unwrap();
        let mut per_series = BTreeMap::new();
        per_series.insert(
            "X".to_string(),
            vec![EventInstance::new(
                sym,
                Interval::new(450, 470).unwrap(),
            )],
        );
        // Windows [420, 455) and [455, 490): the instance is split at 455.
        let db = build_sequence_db(&per_series, 35, 420, alphabet, 60).unwrap();
        assert_eq!(db.len(), 2);
        let pieces: Vec<(Tick, Tick)> = db
            .sequences()
            .iter()
            .flat_map(|s| s.instances().iter().map(|e| (e.start(), e.end())))
            .collect();
        assert_eq!(pieces, vec![(450, 455), (455, 470)]);
        let total: Tick = pieces.iter().map(|(s, e)| e - s).sum();
        assert_eq!(total, 20);
    }

    #[test]
    fn single_instance_lands_in_its_window() {
        let mut alphabet = Alphabet::new();
        let sym = alphabet.intern("XOn").unwrap();
        let mut per_series = BTreeMap::new();
        per_series.insert(
            "X".to_string(),
            vec![EventInstance::new(sym, Interval::new(10, 20).unwrap())],
        );
        let db = build_sequence_db(&per_series, 100, 0, alphabet, 60).unwrap();
        assert_eq!(db.len(), 1);
        assert_eq!(db.sequences()[0].len(), 1);
    }

    #[test]
    fn empty_windows_are_emitted() {
        let mut alphabet = Alphabet::new();
        let sym = alphabet.intern("XOn").unwrap();
        let mut per_series = BTreeMap::new();
        per_series.insert(
            "X".to_string(),
            vec![
                EventInstance::new(sym.clone(), Interval::new(5, 8).unwrap()),
                EventInstance::new(sym, Interval::new(25, 28).unwrap()),
            ],
        );
        let db = build_sequence_db(&per_series, 10, 0, alphabet, 60).unwrap();
        assert_eq!(db.len(), 3);
        assert!(db.sequences()[1].is_empty());
    }

    #[test]
    fn build_rejects_data_before_origin() {
        let mut alphabet = Alphabet::new();
        let sym = alphabet.intern("XOn").unwrap();
        let mut per_series = BTreeMap::new();
        per_series.insert(
            "X".to_string(),
            vec![EventInstance::new(sym, Interval::new(5, 8).unwrap())],
        );
        assert!(matches!(
            build_sequence_db(&per_series, 10, 6, alphabet, 60),
            Err(TransformError::DataBeforeOrigin { .. })
        ));
    }

    #[test]
    fn windowed_rejects_window_below_step() {
        let mut alphabet = Alphabet::new();
        let ts = TimeSeries::new("X", vec![(0, 1.0), (5, 0.0)]).unwrap();
        let ss = symbolize(&ts, &on_off_rule("X"), &mut alphabet).unwrap();
        assert!(matches!(
            windowed_sequence_db(&[ss], 3, 0, alphabet, 60),
            Err(TransformError::WindowBelowStep { .. })
        ));
    }

    #[test]
    fn windowed_runs_tile_each_window() {
        // Within a window, a state flip is anchored at the previous run's last
        // sample, so per-series instances partition the window span.
        let mut alphabet = Alphabet::new();
        let values = [1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0];
        let samples: Vec<(Tick, f64)> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (5 * i as Tick, v))
            .collect();
        let ts = TimeSeries::new("X", samples).unwrap();
        let ss = symbolize(&ts, &on_off_rule("X"), &mut alphabet).unwrap();
        let db = windowed_sequence_db(&[ss], 35, 0, alphabet, 60).unwrap();
        assert_eq!(db.len(), 1);
        let spans: Vec<(&str, Tick, Tick)> = db.sequences()[0]
            .instances()
            .iter()
            .map(|e| (e.symbol.label(), e.start(), e.end()))
            .collect();
        assert_eq!(
            spans,
            vec![("XOn", 0, 5), ("XOff", 5, 20), ("XOn", 20, 30)]
        );
    }

    #[test]
    fn appliance_windows_reproduce_golden_sequences() {
        let db = crate::fixtures::appliance_db();
        let expected = crate::fixtures::appliance_expected();
        assert_eq!(db.len(), expected.len());
        for (seq, want) in db.sequences().iter().zip(&expected) {
            let got: Vec<(&str, Tick, Tick)> = seq
                .instances()
                .iter()
                .map(|e| (e.symbol.label(), e.start(), e.end()))
                .collect();
            assert_eq!(&got, want, "sequence {}", seq.id);
        }
    }

    #[test]
    fn sequences_sort_instances() {
        let mut alphabet = Alphabet::new();
        let a = alphabet.intern("A").unwrap();
        let b = alphabet.intern("B").unwrap();
        let seq = TemporalSequence::new(
            1,
            vec![
                EventInstance::new(b.clone(), Interval::new(0, 10).unwrap()),
                EventInstance::new(a.clone(), Interval::new(0, 10).unwrap()),
                EventInstance::new(a, Interval::new(0, 5).unwrap()),
            ],
        );
        let keys: Vec<(Tick, Tick, u32)> =
            seq.instances().iter().map(|e| e.sort_key()).collect();
        assert_eq!(keys, vec![(0, 5, 0), (0, 10, 0), (0, 10, 1)]);
    }

    #[test]
    fn database_requires_dense_ids() {
        let alphabet = Alphabet::new();
        let err = SequenceDatabase::new(
            alphabet,
            vec![TemporalSequence::new(2, vec![])],
            60,
        );
        assert!(matches!(err, Err(TransformError::NonDenseIds { .. })));
    }
}
