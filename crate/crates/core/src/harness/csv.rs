//! CSV rendering. Numbers use `%.6g`-style formatting, `.` as decimal
//! separator and LF line endings, so files are byte-stable across runs.

use std::io::{self, BufRead, Write};

use crate::channel::{Arm, ArmSpace};
use crate::error::{Error, Result};
use crate::sim::{IterationRecord, Trace};

use super::stats::{ActionHistogram, SummaryRow, SweepRow};

pub const TRACE_HEADER: &str = "iteration,wn_id,channel,tx_power_dbm,active,throughput_mbps,reward";
pub const SUMMARY_HEADER: &str =
    "n_wns,policy,mode,interval_start,interval_end,mean_tpt_mbps,temporal_std_mbps,pf_fraction,reps";
pub const SWEEP_HEADER: &str = "param,value,mean_agg_tpt_mbps,std_agg_tpt_mbps,reps";
pub const HISTOGRAM_HEADER: &str = "wn_id,arm,channel,tx_power_dbm,frequency";

/// Six significant digits, trailing zeros dropped, C-style exponent
/// (`1.5e+07`) outside `[1e-4, 1e6)`.
pub fn fmt_g6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..6).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp) as usize;
    strip_zeros(&format!("{x:.decimals$}")).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_g6).unwrap_or_default()
}

pub fn write_trace<W: Write>(trace: &Trace, mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in &trace.records {
        let (channel, power) = match r.arm {
            Some(a) => (a.channel.to_string(), fmt_g6(a.tx_power_dbm)),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.iteration,
            r.wn_id,
            channel,
            power,
            u8::from(r.active),
            fmt_g6(r.throughput_mbps),
            opt(r.reward),
        )?;
    }
    Ok(())
}

/// Parses a trace written by [`write_trace`]. Values carry the file's
/// six-digit precision.
pub fn read_trace<R: BufRead>(input: R, arms: &ArmSpace) -> Result<Trace> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header != TRACE_HEADER {
        return Err(Error::Config(format!("unexpected trace header `{header}`")));
    }
    let bad = |line: &str| Error::Config(format!("malformed trace line `{line}`"));
    let mut records = Vec::new();
    for line in lines {
        let line = line?;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(bad(&line));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&line));
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad(&line));
        let active = f[4] == "1";
        let (arm, arm_index) = if active {
            let channel = int(f[2])?;
            let tx = num(f[3])?;
            let p = arms
                .powers_dbm
                .iter()
                .position(|&x| fmt_g6(x) == fmt_g6(tx))
                .ok_or_else(|| bad(&line))?;
            (Some(Arm { channel, tx_power_dbm: arms.powers_dbm[p] }), Some(arms.index(channel, p)))
        } else {
            (None, None)
        };
        records.push(IterationRecord {
            iteration: int(f[0])?,
            wn_id: int(f[1])?,
            arm_index,
            arm,
            active,
            throughput_mbps: num(f[5])?,
            reward: if f[6].is_empty() { None } else { Some(num(f[6])?) },
        });
    }
    let n_wns = records.iter().map(|r| r.wn_id + 1).max().unwrap_or(0);
    let iterations = records.len().checked_div(n_wns).unwrap_or(0);
    if n_wns * iterations != records.len() {
        return Err(Error::Config("trace is not rectangular".into()));
    }
    Ok(Trace { n_wns, iterations, records })
}

pub fn write_summary<W: Write>(rows: &[SummaryRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n_wns,
            r.policy,
            r.mode,
            r.interval.0,
            r.interval.1,
            fmt_g6(r.mean_tpt_mbps),
            fmt_g6(r.temporal_std_mbps),
            opt(r.pf_fraction),
            r.reps,
        )?;
    }
    Ok(())
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.param,
            fmt_g6(r.value),
            fmt_g6(r.mean_agg_mbps),
            fmt_g6(r.std_agg_mbps),
            r.reps
        )?;
    }
    Ok(())
}

pub fn write_histogram<W: Write>(h: &ActionHistogram, arms: &ArmSpace, mut out: W) -> io::Result<()> {
    writeln!(out, "{HISTOGRAM_HEADER}")?;
    for (wn, row) in h.frequencies.iter().enumerate() {
        for (k, &f) in row.iter().enumerate() {
            let a = arms.arm(k);
            writeln!(out, "{wn},{k},{},{},{}", a.channel, fmt_g6(a.tx_power_dbm), fmt_g6(f))?;
        }
    }
    Ok(())
}
