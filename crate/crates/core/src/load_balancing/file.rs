use super::{Job, JobDistribution, JobOption, LbError, MachineWeights, ScheduleInstance};
use crate::textio::{self, ParseError};
use std::fmt::Write;

/// Parses
///
/// ```text
/// [machines]
/// 3
/// [jobs]
/// # id size machine...
/// j0 2 0 1
/// ```
pub fn parse_schedule(text: &str) -> Result<ScheduleInstance, LbError> {
    let secs = textio::sections(text, &["machines", "jobs"])?;
    let m = machine_count(&secs)?;
    let mut jobs = Vec::new();
    if let Some(jsec) = textio::find(&secs, "jobs") {
        for r in &jsec.records {
            r.expect_len(3, None)?;
            let size: f64 = r.parse(1, "job size")?;
            if !(size.is_finite() && size > 0.0) {
                return Err(r.err(format!("job size must be positive, got {}", r.fields[1])).into());
            }
            let mut machines = Vec::new();
            for i in 2..r.fields.len() {
                let id: usize = r.parse(i, "machine id")?;
                if id >= m {
                    return Err(r.err(format!("machine {id} out of range for {m} machines")).into());
                }
                machines.push(id);
            }
            if jobs.iter().any(|j: &Job| j.id == r.fields[0]) {
                return Err(r.err(format!("duplicate job id {}", r.fields[0])).into());
            }
            jobs.push(Job { id: r.fields[0].to_string(), size, machines });
        }
    }
    ScheduleInstance::new(m, jobs)
}

pub fn write_schedule(inst: &ScheduleInstance) -> String {
    let mut out = format!("[machines]\n{}\n[jobs]\n", inst.machines());
    for j in inst.jobs() {
        let ms: Vec<String> = j.machines.iter().map(|m| m.to_string()).collect();
        writeln!(out, "{} {} {}", j.id, j.size, ms.join(" ")).unwrap();
    }
    out
}

/// One `machine k eps` line per machine under `[machine_weights]`, plus the
/// grid bound under `[grid]`.
pub fn write_machine_weights(w: &MachineWeights) -> String {
    let mut out = format!("[grid]\nbound {}\n[machine_weights]\n", w.bound);
    for (i, k) in w.k.iter().enumerate() {
        writeln!(out, "{i} {k} {}", w.step).unwrap();
    }
    out
}

pub fn read_machine_weights(text: &str) -> Result<MachineWeights, LbError> {
    let secs = textio::sections(text, &["grid", "machine_weights"])?;
    let mut bound = 0u64;
    if let Some(g) = textio::find(&secs, "grid") {
        for r in &g.records {
            r.expect_len(2, Some(2))?;
            match r.fields[0] {
                "bound" => bound = r.parse(1, "grid bound")?,
                other => return Err(r.err(format!("unknown key {other}")).into()),
            }
        }
    }
    let sec = textio::find(&secs, "machine_weights")
        .ok_or_else(|| ParseError::new(1, "missing [machine_weights] section"))?;
    let mut k = Vec::new();
    let mut step = None;
    for r in &sec.records {
        r.expect_len(3, Some(3))?;
        let i: usize = r.parse(0, "machine id")?;
        if i != k.len() {
            return Err(r.err(format!("expected machine {}, found {i}", k.len())).into());
        }
        k.push(r.parse::<i64>(1, "exponent")?);
        let e: f64 = r.parse(2, "epsilon")?;
        if !(e > 0.0 && e < 1.0) {
            return Err(r.err("epsilon must lie in (0, 1)").into());
        }
        match step {
            Some(s) if s != e => return Err(r.err("machines use different epsilon").into()),
            _ => step = Some(e),
        }
    }
    let step = step.ok_or_else(|| ParseError::new(sec.line, "no machines listed"))?;
    Ok(MachineWeights { k, step, bound })
}

fn machine_count(secs: &[textio::Section<'_>]) -> Result<usize, LbError> {
    let msec = textio::find(secs, "machines").ok_or_else(|| ParseError::new(1, "missing [machines] section"))?;
    let [rec] = msec.records.as_slice() else {
        return Err(ParseError::new(msec.line, "[machines] takes exactly one record").into());
    };
    rec.expect_len(1, Some(1))?;
    Ok(rec.parse(0, "machine count")?)
}

/// Product distribution over jobs:
///
/// ```text
/// [machines]
/// 3
/// [slots]
/// # slot prob size machine...
/// 0 0.5 1 0 1
/// 0 0.5 1 2
/// ```
///
/// Slots are numbered from 0 without gaps.
pub fn parse_job_distribution(text: &str) -> Result<JobDistribution, LbError> {
    let secs = textio::sections(text, &["machines", "slots"])?;
    let m = machine_count(&secs)?;
    let sec = textio::find(&secs, "slots").ok_or_else(|| ParseError::new(1, "missing [slots] section"))?;
    let mut slots: Vec<Vec<JobOption>> = Vec::new();
    for r in &sec.records {
        r.expect_len(4, None)?;
        let slot: usize = r.parse(0, "slot index")?;
        if slot > slots.len() {
            return Err(r.err(format!("slot {slot} skips slot {}", slots.len())).into());
        }
        if slot == slots.len() {
            slots.push(Vec::new());
        }
        let prob: f64 = r.parse(1, "probability")?;
        let size: f64 = r.parse(2, "job size")?;
        let machines = (3..r.fields.len()).map(|i| r.parse(i, "machine id")).collect::<Result<Vec<usize>, _>>()?;
        if let Some(&bad) = machines.iter().find(|&&i| i >= m) {
            return Err(r.err(format!("machine {bad} out of range for {m} machines")).into());
        }
        slots[slot].push(JobOption { size, machines, prob });
    }
    JobDistribution::new(m, slots)
}

pub fn write_job_distribution(d: &JobDistribution) -> String {
    let mut out = format!("[machines]\n{}\n[slots]\n", d.machines());
    for (j, opts) in d.slots().iter().enumerate() {
        for o in opts {
            let ms: Vec<String> = o.machines.iter().map(|m| m.to_string()).collect();
            writeln!(out, "{j} {} {} {}", o.prob, o.size, ms.join(" ")).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_round_trip() {
        let text = "[machines]\n2\n[jobs]\na 1.5 0 1\nb 2 1\n";
        let inst = parse_schedule(text).unwrap();
        assert_eq!(inst.jobs().len(), 2);
        assert_eq!(write_schedule(&inst), text);
    }

    #[test]
    fn bad_machine_names_line() {
        let err = parse_schedule("[machines]\n2\n[jobs]\na 1 0\nb 1 5\n").unwrap_err();
        match err {
            LbError::Parse(p) => assert_eq!(p.line, 5),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn distribution_round_trip() {
        let text = "[machines]\n2\n[slots]\n0 0.5 1 0 1\n0 0.5 2 1\n1 1 3 0\n";
        let d = parse_job_distribution(text).unwrap();
        assert_eq!(d.slots().len(), 2);
        assert_eq!(write_job_distribution(&d), text);
        assert!(parse_job_distribution("[machines]\n2\n[slots]\n0 0.4 1 0\n").is_err());
    }

    #[test]
    fn weights_round_trip() {
        let w = MachineWeights { k: vec![0, -3, -1], step: 0.0625, bound: 40 };
        assert_eq!(read_machine_weights(&write_machine_weights(&w)).unwrap(), w);
    }
}
