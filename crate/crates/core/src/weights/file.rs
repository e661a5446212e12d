use super::{DagWeights, EpsilonSchedule, ScheduleKind, WeightError, WeightState};
use crate::graph::LayeredGraph;
use crate::textio::{self, ParseError};
use std::fmt::Write;

const SECTIONS: [&str; 5] = ["schedule", "run", "layered", "dag_meta", "dag"];

/// Parsed contents of a weight file.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFile {
    pub layered: Option<LayeredPart>,
    pub dag: DagWeights,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayeredPart {
    pub schedule: EpsilonSchedule,
    pub max_iterations: u64,
    pub iterations_run: u64,
    pub fixed_point: bool,
    /// `(label, decrement count)` in file order.
    pub records: Vec<(String, u32)>,
}

impl WeightFile {
    /// Rebuilds the layered state, matching records to nodes by label.
    pub fn to_state(&self, layered: &LayeredGraph) -> Result<WeightState, WeightError> {
        let part = self.layered.as_ref().ok_or_else(|| WeightError::Mismatch("file has no [layered] section".into()))?;
        if part.records.len() != layered.node_count() {
            return Err(WeightError::Mismatch(format!(
                "{} layered records for {} nodes",
                part.records.len(),
                layered.node_count()
            )));
        }
        let mut state = WeightState::initial(layered, part.schedule.clone(), part.max_iterations);
        for (label, k) in &part.records {
            let v = layered.find_label(label).ok_or_else(|| WeightError::Mismatch(format!("unknown node {label}")))?;
            state.decrements[v] = *k;
        }
        state.iterations_run = part.iterations_run;
        state.fixed_point = part.fixed_point;
        Ok(state)
    }
}

/// Full weight file: schedule, run summary, layered counts and DAG weights.
pub fn write_weight_file(state: &WeightState, layered: &LayeredGraph, dag: &DagWeights) -> String {
    let s = &state.schedule;
    let mut out = String::from("# propflow weights\n[schedule]\n");
    let _ = writeln!(out, "kind {}", s.kind().name());
    let _ = writeln!(out, "epsilon {}", s.top_epsilon());
    let _ = writeln!(out, "n {}", s.n());
    for j in 1..=s.depth() {
        let _ = writeln!(out, "layer {j} {} {}", s.epsilon(j), s.log_base(j));
    }
    let _ = writeln!(out, "\n[run]");
    let _ = writeln!(out, "max_iterations {}", state.max_iterations);
    let _ = writeln!(out, "iterations_run {}", state.iterations_run);
    let _ = writeln!(out, "fixed_point {}", state.fixed_point);
    out.push_str("\n[layered]\n");
    for v in 0..layered.node_count() {
        let _ = writeln!(out, "{} {} {}", layered.label(v), state.decrements[v], s.epsilon(layered.node(v).layer));
    }
    out.push('\n');
    write_dag_sections(&mut out, dag);
    out
}

/// DAG weights only.
pub fn write_dag_weights(dag: &DagWeights) -> String {
    let mut out = String::from("# propflow weights\n");
    write_dag_sections(&mut out, dag);
    out
}

fn write_dag_sections(out: &mut String, dag: &DagWeights) {
    let _ = writeln!(out, "[dag_meta]\nrho_base {}\n\n[dag]", dag.rho_base);
    for (name, w) in dag.names.iter().zip(&dag.weight_log) {
        let _ = writeln!(out, "{name} {w}");
    }
}

fn key_value<'s, 'a>(sec: &'s textio::Section<'a>) -> Result<Vec<(&'a str, &'s textio::Record<'a>)>, ParseError> {
    sec.records
        .iter()
        .map(|r| {
            r.expect_len(2, None)?;
            Ok((r.fields[0], r))
        })
        .collect()
}

pub fn read_weight_file(text: &str) -> Result<WeightFile, WeightError> {
    let secs = textio::sections(text, &SECTIONS)?;
    let end = text.lines().count();
    let meta = textio::find(&secs, "dag_meta").ok_or_else(|| ParseError::new(end, "missing [dag_meta] section"))?;
    let mut rho_base = None;
    for (k, r) in key_value(meta)? {
        match k {
            "rho_base" => rho_base = Some(r.parse::<f64>(1, "rho_base")?),
            other => return Err(r.err(format!("unknown key {other}")).into()),
        }
    }
    let rho_base = rho_base.ok_or_else(|| ParseError::new(meta.line, "missing rho_base"))?;
    let dag_sec = textio::find(&secs, "dag").ok_or_else(|| ParseError::new(end, "missing [dag] section"))?;
    let mut names = Vec::new();
    let mut weight_log = Vec::new();
    for r in &dag_sec.records {
        r.expect_len(2, Some(2))?;
        names.push(r.fields[0].to_string());
        let w: f64 = r.parse(1, "log weight")?;
        if !w.is_finite() {
            return Err(r.err("log weight must be finite").into());
        }
        weight_log.push(w);
    }
    let dag = DagWeights { names, weight_log, rho_base };

    let layered = match (textio::find(&secs, "schedule"), textio::find(&secs, "run"), textio::find(&secs, "layered")) {
        (None, None, None) => None,
        (Some(sched), Some(run), Some(lay)) => Some(read_layered(sched, run, lay)?),
        _ => return Err(ParseError::new(end, "[schedule], [run] and [layered] must appear together").into()),
    };
    Ok(WeightFile { layered, dag })
}

fn read_layered(sched: &textio::Section<'_>, run: &textio::Section<'_>, lay: &textio::Section<'_>) -> Result<LayeredPart, ParseError> {
    let (mut kind, mut eps, mut n) = (None, None, None);
    let (mut per_layer, mut logs) = (Vec::new(), Vec::new());
    for (k, r) in key_value(sched)? {
        match k {
            "kind" => kind = Some(ScheduleKind::from_name(r.fields[1]).ok_or_else(|| r.err("unknown schedule kind"))?),
            "epsilon" => eps = Some(r.parse::<f64>(1, "epsilon")?),
            "n" => n = Some(r.parse::<usize>(1, "n")?),
            "layer" => {
                r.expect_len(4, Some(4))?;
                let j: usize = r.parse(1, "layer index")?;
                if j != per_layer.len() + 1 {
                    return Err(r.err("layers must be listed in order starting at 1"));
                }
                per_layer.push(r.parse::<f64>(2, "layer epsilon")?);
                logs.push(r.parse::<f64>(3, "layer log base")?);
            }
            other => return Err(r.err(format!("unknown key {other}"))),
        }
    }
    let missing = |what: &str| ParseError::new(sched.line, format!("missing {what}"));
    let schedule = EpsilonSchedule::from_parts(
        kind.ok_or_else(|| missing("kind"))?,
        eps.ok_or_else(|| missing("epsilon"))?,
        n.ok_or_else(|| missing("n"))?,
        per_layer,
        logs,
    );
    if schedule.depth() == 0 {
        return Err(missing("layer lines"));
    }
    let (mut max_it, mut run_it, mut fixed) = (None, None, None);
    for (k, r) in key_value(run)? {
        match k {
            "max_iterations" => max_it = Some(r.parse::<u64>(1, "max_iterations")?),
            "iterations_run" => run_it = Some(r.parse::<u64>(1, "iterations_run")?),
            "fixed_point" => fixed = Some(r.parse::<bool>(1, "fixed_point")?),
            other => return Err(r.err(format!("unknown key {other}"))),
        }
    }
    let missing = |what: &str| ParseError::new(run.line, format!("missing {what}"));
    let mut records = Vec::new();
    for r in &lay.records {
        r.expect_len(3, Some(3))?;
        let k: u32 = r.parse(1, "decrement count")?;
        let _: f64 = r.parse(2, "layer epsilon")?;
        records.push((r.fields[0].to_string(), k));
    }
    Ok(LayeredPart {
        schedule,
        max_iterations: max_it.ok_or_else(|| missing("max_iterations"))?,
        iterations_run: run_it.ok_or_else(|| missing("iterations_run"))?,
        fixed_point: fixed.ok_or_else(|| missing("fixed_point"))?,
        records,
    })
}
