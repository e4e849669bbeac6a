//! Process peak-memory introspection.

/// Peak resident set size of this process in KiB, read from
/// `/proc/self/status` (`VmHWM`). This is a whole-process high-water mark —
/// an estimate of a run's footprint, not an exact per-phase measurement.
/// Returns `None` where procfs is unavailable.
pub fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    parse_vm_hwm(&status)
}

fn parse_vm_hwm(status: &str) -> Option<u64> {
    status
        .lines()
        .find_map(|line| line.strip_prefix("VmHWM:"))
        .and_then(|rest| rest.trim().strip_suffix("kB"))
        .and_then(|kib| kib.trim().parse().ok())
}
