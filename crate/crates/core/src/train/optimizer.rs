use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OptimizerConfig {
    VanillaGd {
        learning_rate: f64,
    },
    MomentumGd {
        learning_rate: f64,
        momentum: f64,
    },
    Adam {
        learning_rate: f64,
        beta1: f64,
        beta2: f64,
        epsilon: f64,
    },
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig::VanillaGd { learning_rate: 0.1 }
    }
}

impl OptimizerConfig {
    pub fn adam(learning_rate: f64) -> Self {
        OptimizerConfig::Adam {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OptimizerConfig::VanillaGd { .. } => "vanilla_gd",
            OptimizerConfig::MomentumGd { .. } => "momentum_gd",
            OptimizerConfig::Adam { .. } => "adam",
        }
    }

    pub fn learning_rate(&self) -> f64 {
        match *self {
            OptimizerConfig::VanillaGd { learning_rate }
            | OptimizerConfig::MomentumGd { learning_rate, .. }
            | OptimizerConfig::Adam { learning_rate, .. } => learning_rate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lr = self.learning_rate();
        if !(lr > 0.0 && lr.is_finite()) {
            return Err(Error::InvalidConfig(format!("learning rate {lr} must be > 0")));
        }
        match *self {
            OptimizerConfig::MomentumGd { momentum, .. } if !(0.0..1.0).contains(&momentum) => {
                Err(Error::InvalidConfig(format!("momentum {momentum} must lie in [0, 1)")))
            }
            OptimizerConfig::Adam {
                beta1, beta2, epsilon, ..
            } if !((0.0..1.0).contains(&beta1) && (0.0..1.0).contains(&beta2) && epsilon > 0.0) => Err(
                Error::InvalidConfig("adam betas must lie in [0, 1), epsilon > 0".into()),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
enum State {
    Vanilla,
    Momentum { velocity: Vec<f64> },
    Adam { m: Vec<f64>, v: Vec<f64>, t: i32 },
}

/// An optimizer config together with its running state.
#[derive(Debug, Clone)]
pub struct Optimizer {
    config: OptimizerConfig,
    state: State,
}

impl Optimizer {
    pub fn new(config: OptimizerConfig, n_params: usize) -> Result<Self> {
        config.validate()?;
        let state = match config {
            OptimizerConfig::VanillaGd { .. } => State::Vanilla,
            OptimizerConfig::MomentumGd { .. } => State::Momentum {
                velocity: vec![0.0; n_params],
            },
            OptimizerConfig::Adam { .. } => State::Adam {
                m: vec![0.0; n_params],
                v: vec![0.0; n_params],
                t: 0,
            },
        };
        Ok(Self { config, state })
    }

    pub fn config(&self) -> &OptimizerConfig {
        &self.config
    }

    /// Update `weights` in place from `gradient`.
    pub fn step(&mut self, weights: &mut [f64], gradient: &[f64]) -> Result<()> {
        if weights.len() != gradient.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights but {} gradient components",
                weights.len(),
                gradient.len()
            )));
        }
        if gradient.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite("gradient"));
        }
        match (&mut self.state, self.config) {
            (State::Vanilla, OptimizerConfig::VanillaGd { learning_rate }) => {
                for (w, g) in weights.iter_mut().zip(gradient) {
                    *w -= learning_rate * g;
                }
            }
            (
                State::Momentum { velocity },
                OptimizerConfig::MomentumGd {
                    learning_rate,
                    momentum,
                },
            ) => {
                check_len(velocity.len(), weights.len())?;
                for ((w, v), g) in weights.iter_mut().zip(velocity.iter_mut()).zip(gradient) {
                    *v = momentum * *v + g;
                    *w -= learning_rate * *v;
                }
            }
            (
                State::Adam { m, v, t },
                OptimizerConfig::Adam {
                    learning_rate,
                    beta1,
                    beta2,
                    epsilon,
                },
            ) => {
                check_len(m.len(), weights.len())?;
                *t += 1;
                let c1 = 1.0 - beta1.powi(*t);
                let c2 = 1.0 - beta2.powi(*t);
                for i in 0..weights.len() {
                    let g = gradient[i];
                    m[i] = beta1 * m[i] + (1.0 - beta1) * g;
                    v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
                    let m_hat = m[i] / c1;
                    let v_hat = v[i] / c2;
                    weights[i] -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
                }
            }
            _ => unreachable!("optimizer state always matches its config"),
        }
        Ok(())
    }
}

fn check_len(state: usize, weights: usize) -> Result<()> {
    if state != weights {
        return Err(Error::DimensionMismatch(format!(
            "optimizer built for {state} parameters, got {weights}"
        )));
    }
    Ok(())
}
