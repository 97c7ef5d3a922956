use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::PortableRng;

/// A sampled hyperparameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Categorical(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v:?}"),
            ParamValue::Categorical(v) => f.write_str(v),
        }
    }
}

/// Source of suggestions. Implementations must be deterministic for a
/// fixed seed and call order, and stay within the requested domain.
pub trait Sampler: Send {
    fn sample_int(&mut self, name: &str, low: i64, high: i64) -> i64;
    fn sample_float(&mut self, name: &str, low: f64, high: f64, log: bool) -> f64;
    fn sample_categorical(&mut self, name: &str, n_options: usize) -> usize;
}

/// Uniform random search over the declared domains.
#[derive(Debug, Clone)]
pub struct RandomSampler {
    rng: PortableRng,
}

impl RandomSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: PortableRng::new(seed),
        }
    }
}

impl Sampler for RandomSampler {
    fn sample_int(&mut self, _name: &str, low: i64, high: i64) -> i64 {
        self.rng.int_inclusive(low, high)
    }

    fn sample_float(&mut self, _name: &str, low: f64, high: f64, log: bool) -> f64 {
        if log {
            self.rng.uniform(low.ln(), high.ln()).exp().clamp(low, high)
        } else {
            self.rng.uniform(low, high)
        }
    }

    fn sample_categorical(&mut self, _name: &str, n_options: usize) -> usize {
        self.rng.index(n_options)
    }
}

/// One configuration draw. Asking for a name twice returns the first value.
pub struct Trial {
    pub trial_id: u64,
    pub seed: u64,
    sampled: IndexMap<String, ParamValue>,
    sampler: Box<dyn Sampler>,
}

impl fmt::Debug for Trial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Trial")
            .field("trial_id", &self.trial_id)
            .field("seed", &self.seed)
            .field("sampled", &self.sampled)
            .finish()
    }
}

impl Trial {
    /// A trial drawing from a [`RandomSampler`] seeded with `seed`.
    pub fn new(trial_id: u64, seed: u64) -> Self {
        Self::with_sampler(trial_id, seed, Box::new(RandomSampler::new(seed)))
    }

    pub fn with_sampler(trial_id: u64, seed: u64, sampler: Box<dyn Sampler>) -> Self {
        Self {
            trial_id,
            seed,
            sampled: IndexMap::new(),
            sampler,
        }
    }

    /// Re-create a finished trial: every recorded name answers with its
    /// recorded value.
    pub fn replay(trial_id: u64, seed: u64, sampled: IndexMap<String, ParamValue>) -> Self {
        let mut t = Self::new(trial_id, seed);
        t.sampled = sampled;
        t
    }

    pub fn sampled(&self) -> &IndexMap<String, ParamValue> {
        &self.sampled
    }

    pub fn into_sampled(self) -> IndexMap<String, ParamValue> {
        self.sampled
    }

    pub fn suggest_int(&mut self, name: &str, low: i64, high: i64) -> Result<i64> {
        if low > high {
            return Err(Error::InvalidConfig(format!("{name}: empty range [{low}, {high}]")));
        }
        match self.sampled.get(name) {
            Some(ParamValue::Int(v)) => Ok(*v),
            Some(other) => Err(mismatch(name, other)),
            None => {
                let v = self.sampler.sample_int(name, low, high);
                self.sampled.insert(name.into(), ParamValue::Int(v));
                Ok(v)
            }
        }
    }

    pub fn suggest_float(&mut self, name: &str, low: f64, high: f64, log: bool) -> Result<f64> {
        if !(low <= high) || (log && low <= 0.0) {
            return Err(Error::InvalidConfig(format!("{name}: bad range [{low}, {high}]")));
        }
        match self.sampled.get(name) {
            Some(ParamValue::Float(v)) => Ok(*v),
            Some(ParamValue::Int(v)) => Ok(*v as f64),
            Some(other) => Err(mismatch(name, other)),
            None => {
                let v = self.sampler.sample_float(name, low, high, log);
                self.sampled.insert(name.into(), ParamValue::Float(v));
                Ok(v)
            }
        }
    }

    pub fn suggest_categorical(&mut self, name: &str, options: &[String]) -> Result<String> {
        if options.is_empty() {
            return Err(Error::InvalidConfig(format!("{name}: no options")));
        }
        match self.sampled.get(name) {
            Some(ParamValue::Categorical(v)) => Ok(v.clone()),
            Some(other) => Err(mismatch(name, other)),
            None => {
                let i = self.sampler.sample_categorical(name, options.len());
                let v = options[i].clone();
                self.sampled.insert(name.into(), ParamValue::Categorical(v.clone()));
                Ok(v)
            }
        }
    }
}

fn mismatch(name: &str, existing: &ParamValue) -> Error {
    Error::InvalidConfig(format!("{name} was already sampled as {existing:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reasking_returns_first_value() {
        let mut t = Trial::new(0, 42);
        let a = t.suggest_int("n", 0, 1000).unwrap();
        for _ in 0..10 {
            assert_eq!(t.suggest_int("n", 0, 1000).unwrap(), a);
        }
        let opts = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let c = t.suggest_categorical("c", &opts).unwrap();
        assert_eq!(t.suggest_categorical("c", &opts).unwrap(), c);
        assert!(t.suggest_float("n", 0.0, 1.0, false).is_ok());
        assert!(t.suggest_categorical("n", &opts).is_err());
        assert_eq!(t.sampled().len(), 2);
    }

    #[test]
    fn log_floats_within_bounds() {
        let mut s = RandomSampler::new(1);
        for _ in 0..1000 {
            let v = s.sample_float("lr", 1e-3, 0.5, true);
            assert!((1e-3..=0.5).contains(&v));
        }
    }

    #[test]
    fn replay_reproduces_values() {
        let mut t = Trial::new(3, 9);
        t.suggest_int("a", 1, 5).unwrap();
        t.suggest_float("b", 0.0, 1.0, false).unwrap();
        let recorded = t.sampled().clone();
        let mut r = Trial::replay(3, 1234, recorded.clone());
        assert_eq!(ParamValue::Int(r.suggest_int("a", 1, 5).unwrap()), recorded["a"]);
        assert_eq!(
            ParamValue::Float(r.suggest_float("b", 0.0, 1.0, false).unwrap()),
            recorded["b"]
        );
    }

    #[test]
    fn param_value_json_is_untagged() {
        let values = vec![
            ParamValue::Int(3),
            ParamValue::Float(3.0),
            ParamValue::Categorical("QNN".into()),
        ];
        let json = serde_json::to_string(&values).unwrap();
        assert_eq!(json, r#"[3,3.0,"QNN"]"#);
        let back: Vec<ParamValue> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, values);
    }
}
