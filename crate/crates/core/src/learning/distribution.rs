use super::LearningError;
use crate::graph::{DagInstance, InstanceSpec, TypeSpec};
use crate::rational::Rational;
use crate::textio::{self, ParseError};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum DrawKind {
    /// Every impression independently from one distribution over types.
    Iid(Vec<f64>),
    /// Slot `j` draws from its own distribution; one row per slot.
    Product(Vec<Vec<f64>>),
}

/// A distribution over instances: `m` impressions drawn over the type
/// catalogue of a fixed offline graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeDistribution {
    skeleton: DagInstance,
    m: usize,
    kind: DrawKind,
}

fn check_row(row: &[f64], k: usize, what: &str) -> Result<(), LearningError> {
    if row.len() != k {
        return Err(LearningError::InvalidDistribution(format!("{what} has {} entries for {k} types", row.len())));
    }
    if row.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(LearningError::InvalidDistribution(format!("{what} has a negative or non-finite probability")));
    }
    let s: f64 = row.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(LearningError::InvalidDistribution(format!("{what} sums to {s}")));
    }
    Ok(())
}

impl TypeDistribution {
    /// `skeleton` supplies the graph and the type catalogue; its counts are
    /// ignored.
    pub fn new(skeleton: DagInstance, m: usize, kind: DrawKind) -> Result<Self, LearningError> {
        let k = skeleton.types().len();
        if k == 0 {
            return Err(LearningError::InvalidDistribution("no impression types".into()));
        }
        match &kind {
            DrawKind::Iid(p) => check_row(p, k, "type distribution")?,
            DrawKind::Product(rows) => {
                if rows.len() != m {
                    return Err(LearningError::InvalidDistribution(format!("{} slots for m = {m}", rows.len())));
                }
                for (j, r) in rows.iter().enumerate() {
                    check_row(r, k, &format!("slot {}", j + 1))?;
                }
            }
        }
        let zero = vec![Rational::from_integer(0); k];
        Ok(TypeDistribution { skeleton: skeleton.with_counts(&zero)?, m, kind })
    }

    /// All mass on one count vector (every slot deterministic).
    pub fn point_mass(inst: &DagInstance) -> Result<Self, LearningError> {
        let k = inst.types().len();
        let mut rows = Vec::new();
        for (t, ty) in inst.types().iter().enumerate() {
            if !ty.count.is_integer() {
                return Err(LearningError::InvalidDistribution(format!("count of {} is not whole", ty.id)));
            }
            for _ in 0..ty.count.to_integer() {
                let mut r = vec![0.0; k];
                r[t] = 1.0;
                rows.push(r);
            }
        }
        Self::new(inst.clone(), rows.len(), DrawKind::Product(rows))
    }

    pub fn skeleton(&self) -> &DagInstance {
        &self.skeleton
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &DrawKind {
        &self.kind
    }

    /// Distribution of slot `j`.
    pub fn slot(&self, j: usize) -> &[f64] {
        match &self.kind {
            DrawKind::Iid(p) => p,
            DrawKind::Product(rows) => &rows[j],
        }
    }

    /// Expected count of every type.
    pub fn expected_counts(&self) -> Vec<f64> {
        let k = self.skeleton.types().len();
        let mut e = vec![0.0; k];
        for j in 0..self.m {
            for (t, p) in self.slot(j).iter().enumerate() {
                e[t] += p;
            }
        }
        e
    }
}

const SECTIONS: [&str; 7] = ["nodes", "sink", "edges", "types", "draw", "probabilities", "slots"];

/// Distribution file: the graph sections of an instance file, `[types]`
/// records `id neighbour...`, a `[draw]` section with `m` and `kind`, and
/// either `[probabilities]` (`id p`, iid) or `[slots]` (one row of `k`
/// probabilities per slot, product).
pub fn parse_distribution(text: &str) -> Result<TypeDistribution, LearningError> {
    let secs = textio::sections(text, &SECTIONS)?;
    let end = text.lines().count();
    let mut spec: InstanceSpec = crate::graph::parse_graph_sections_pub(&secs)?;
    let types = textio::find(&secs, "types").ok_or_else(|| ParseError::new(end, "missing [types] section"))?;
    for r in &types.records {
        r.expect_len(1, None)?;
        spec.types.push(TypeSpec {
            id: r.fields[0].to_string(),
            count: Rational::from_integer(0),
            neighbors: r.fields[1..].iter().map(|s| s.to_string()).collect(),
        });
    }
    let skeleton = DagInstance::from_spec(&spec)?;
    let draw = textio::find(&secs, "draw").ok_or_else(|| ParseError::new(end, "missing [draw] section"))?;
    let (mut m, mut kind) = (None, None);
    for r in &draw.records {
        r.expect_len(2, Some(2))?;
        match r.fields[0] {
            "m" => m = Some(r.parse::<usize>(1, "m")?),
            "kind" => match r.fields[1] {
                "iid" | "product" => kind = Some(r.fields[1]),
                other => return Err(r.err(format!("unknown kind {other:?}")).into()),
            },
            other => return Err(r.err(format!("unknown key {other:?}")).into()),
        }
    }
    let m = m.ok_or_else(|| ParseError::new(draw.line, "missing m"))?;
    let k = skeleton.types().len();
    let kind = match kind.ok_or_else(|| ParseError::new(draw.line, "missing kind"))? {
        "iid" => {
            let sec = textio::find(&secs, "probabilities").ok_or_else(|| ParseError::new(end, "iid draws need [probabilities]"))?;
            let mut p = vec![f64::NAN; k];
            for r in &sec.records {
                r.expect_len(2, Some(2))?;
                let t = skeleton.type_index(r.fields[0]).ok_or_else(|| r.err(format!("unknown type {:?}", r.fields[0])))?;
                p[t] = r.parse(1, "probability")?;
            }
            if let Some(t) = p.iter().position(|x| x.is_nan()) {
                return Err(ParseError::new(sec.line, format!("no probability for type {}", skeleton.types()[t].id)).into());
            }
            DrawKind::Iid(p)
        }
        _ => {
            let sec = textio::find(&secs, "slots").ok_or_else(|| ParseError::new(end, "product draws need [slots]"))?;
            let rows = sec
                .records
                .iter()
                .map(|r| {
                    r.expect_len(k, Some(k))?;
                    (0..k).map(|i| r.parse::<f64>(i, "probability")).collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, ParseError>>()?;
            DrawKind::Product(rows)
        }
    };
    TypeDistribution::new(skeleton, m, kind)
}

pub fn write_distribution(d: &TypeDistribution) -> String {
    let mut out = String::from("# propflow distribution\n");
    crate::graph::write_graph_sections_pub(&mut out, d.skeleton());
    out.push_str("\n[types]\n");
    for t in d.skeleton().types() {
        out.push_str(&t.id);
        for &v in &t.neighbors {
            let _ = write!(out, " {}", d.skeleton().name(v));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "\n[draw]\nm {}", d.m());
    match d.kind() {
        DrawKind::Iid(p) => {
            out.push_str("kind iid\n\n[probabilities]\n");
            for (t, p) in d.skeleton().types().iter().zip(p) {
                let _ = writeln!(out, "{} {p}", t.id);
            }
        }
        DrawKind::Product(rows) => {
            out.push_str("kind product\n\n[slots]\n");
            for r in rows {
                let line: Vec<String> = r.iter().map(|p| p.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
    }
    out
}

/// Random i.i.d. distribution over a bipartite graph. Every capacity is at
/// least `ceil(c / eps^2 ln(1 / eps))`, so the learnability floor holds by
/// construction.
pub fn random_iid_bipartite(
    rng: &mut impl rand::Rng,
    n: usize,
    k: usize,
    m: usize,
    eps: f64,
    constant: f64,
) -> Result<TypeDistribution, LearningError> {
    let floor = (constant / (eps * eps) * (1.0 / eps).ln()).ceil().max(1.0) as i64;
    let base = crate::gen::random_bipartite(rng, n, k, &crate::gen::Shape { max_capacity: 1, max_count: 0, halves: false });
    let caps: Vec<Rational> = (0..n).map(|_| Rational::from_integer(floor + rng.gen_range(0..=floor / 2))).collect();
    let skeleton = base.with_capacities(&caps)?;
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(1..=4) as f64).collect();
    let total: f64 = raw.iter().sum();
    TypeDistribution::new(skeleton, m, DrawKind::Iid(raw.iter().map(|r| r / total).collect()))
}
