use super::OnlineError;
use crate::graph::DagInstance;
use crate::rational::Rational;
use crate::textio::ParseError;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Ordered arrivals, stored as indices into the instance's type list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArrivalTrace {
    pub arrivals: Vec<usize>,
}

impl ArrivalTrace {
    pub fn new(arrivals: Vec<usize>) -> Self {
        ArrivalTrace { arrivals }
    }

    pub fn from_ids<S: AsRef<str>>(inst: &DagInstance, ids: &[S]) -> Result<Self, OnlineError> {
        ids.iter()
            .map(|id| inst.type_index(id.as_ref()).ok_or_else(|| OnlineError::UnknownType(id.as_ref().to_string())))
            .collect::<Result<_, _>>()
            .map(ArrivalTrace::new)
    }

    /// All impressions of the instance grouped by type, in declaration order.
    pub fn grouped(inst: &DagInstance) -> Result<Self, OnlineError> {
        let mut arrivals = Vec::new();
        for (t, ty) in inst.types().iter().enumerate() {
            if !ty.count.is_integer() {
                return Err(OnlineError::FractionalCount(ty.id.clone()));
            }
            arrivals.extend(std::iter::repeat(t).take(ty.count.to_integer() as usize));
        }
        Ok(ArrivalTrace { arrivals })
    }

    /// All impressions of the instance in a seeded random order.
    pub fn shuffled(inst: &DagInstance, seed: u64) -> Result<Self, OnlineError> {
        let mut t = Self::grouped(inst)?;
        t.arrivals.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.arrivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrivals.is_empty()
    }

    /// Realized type counts.
    pub fn counts(&self, types: usize) -> Vec<Rational> {
        let mut c = vec![0i64; types];
        for &a in &self.arrivals {
            c[a] += 1;
        }
        c.into_iter().map(Rational::from_integer).collect()
    }

    pub fn counts_f64(&self, types: usize) -> Vec<f64> {
        let mut c = vec![0.0; types];
        for &a in &self.arrivals {
            c[a] += 1.0;
        }
        c
    }

    /// One type id per line.
    pub fn parse(text: &str, inst: &DagInstance) -> Result<Self, OnlineError> {
        let mut arrivals = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.split_whitespace().count() != 1 {
                return Err(ParseError::new(i + 1, "expected one type id per line").into());
            }
            let t = inst
                .type_index(line)
                .ok_or_else(|| ParseError::new(i + 1, format!("unknown impression type {line:?}")))?;
            arrivals.push(t);
        }
        Ok(ArrivalTrace { arrivals })
    }

    pub fn write(&self, inst: &DagInstance) -> String {
        let mut out = String::new();
        for &a in &self.arrivals {
            out.push_str(&inst.types()[a].id);
            out.push('\n');
        }
        out
    }
}
