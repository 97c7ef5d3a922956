//! Classical clustering pipeline: a small sigmoid autoencoder compresses
//! the input to `latent_size` units, the latents are binarized at 0.5, and
//! an RBM trained by CD-1 maps them to hidden units whose thresholded
//! activations form the cluster id.

use nalgebra::{DMatrix, DVector};

use super::metrics::silhouette;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rng::PortableRng;
use crate::train::{Optimizer, OptimizerConfig};

const ENCODER_STREAM: u64 = 0x454e_43;
const RBM_STREAM: u64 = 0x5242_4d;
const ENCODER_LR: f64 = 0.05;
const ENCODER_BATCH: usize = 4;
const RBM_LR: f64 = 0.5;
const RBM_BATCH: usize = 4;
const MAX_HIDDEN: usize = 63;

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    /// `out × in`.
    pub weights: DMatrix<f64>,
    pub bias: DVector<f64>,
}

impl DenseLayer {
    fn random(n_in: usize, n_out: usize, rng: &mut PortableRng) -> Self {
        let a = 1.0 / (n_in as f64).sqrt();
        Self {
            weights: DMatrix::from_fn(n_out, n_in, |_, _| rng.uniform(-a, a)),
            bias: DVector::zeros(n_out),
        }
    }

    fn affine(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.weights * x + &self.bias
    }
}

/// Stack of affine+sigmoid maps with a linear decoder used only for training.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryEncoder {
    pub layers: Vec<DenseLayer>,
    pub decoder: DenseLayer,
}

impl BinaryEncoder {
    /// Layer widths interpolate linearly from `input_size` to `latent_size`.
    pub fn widths(input_size: usize, n_layers: usize, latent_size: usize) -> Vec<usize> {
        (0..=n_layers)
            .map(|k| {
                let t = k as f64 / n_layers as f64;
                let w = input_size as f64 + (latent_size as f64 - input_size as f64) * t;
                (w.round() as usize).max(1)
            })
            .collect()
    }

    pub fn random(input_size: usize, n_layers: usize, latent_size: usize, seed: u64) -> Self {
        let mut rng = PortableRng::derive(seed, ENCODER_STREAM);
        let widths = Self::widths(input_size, n_layers, latent_size);
        let layers = widths
            .windows(2)
            .map(|w| DenseLayer::random(w[0], w[1], &mut rng))
            .collect();
        let decoder = DenseLayer::random(latent_size, input_size, &mut rng);
        Self { layers, decoder }
    }

    pub fn input_size(&self) -> usize {
        self.layers[0].weights.ncols()
    }

    pub fn latent_size(&self) -> usize {
        self.layers.last().map(|l| l.weights.nrows()).unwrap_or(0)
    }

    fn forward(&self, x: &DVector<f64>) -> Vec<DVector<f64>> {
        let mut acts = vec![x.clone()];
        for layer in &self.layers {
            let next = layer.affine(acts.last().unwrap()).map(sigmoid);
            acts.push(next);
        }
        acts
    }

    pub fn encode(&self, x: &[f64]) -> Result<DVector<f64>> {
        if x.len() != self.input_size() {
            return Err(Error::DimensionMismatch(format!(
                "encoder expects {} inputs, got {}",
                self.input_size(),
                x.len()
            )));
        }
        Ok(self.forward(&DVector::from_column_slice(x)).pop().unwrap())
    }

    pub fn reconstruction_loss(&self, data: &[DVector<f64>]) -> f64 {
        data.iter()
            .map(|x| {
                let z = self.forward(x).pop().unwrap();
                (self.decoder.affine(&z) - x).norm_squared() / 2.0
            })
            .sum::<f64>()
            / data.len() as f64
    }

    fn dense_layers(&self) -> impl Iterator<Item = &DenseLayer> {
        self.layers.iter().chain(std::iter::once(&self.decoder))
    }

    /// Flat parameters: each encoder layer then the decoder, each as the
    /// row-major weight matrix followed by the bias.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for layer in self.dense_layers() {
            out.extend(layer.weights.transpose().iter());
            out.extend(layer.bias.iter());
        }
        out
    }

    fn set_parameters(&mut self, flat: &[f64]) {
        let mut pos = 0;
        for layer in self.layers.iter_mut().chain(std::iter::once(&mut self.decoder)) {
            let (r, c) = layer.weights.shape();
            layer.weights = DMatrix::from_row_slice(r, c, &flat[pos..pos + r * c]);
            pos += r * c;
            layer.bias = DVector::from_column_slice(&flat[pos..pos + r]);
            pos += r;
        }
    }

    /// Mean gradient of the squared reconstruction error over `batch`, in
    /// [`Self::parameters`] order.
    fn gradient(&self, batch: &[&DVector<f64>]) -> Vec<f64> {
        let mut grads: Vec<DenseLayer> = self
            .dense_layers()
            .map(|l| DenseLayer {
                weights: DMatrix::zeros(l.weights.nrows(), l.weights.ncols()),
                bias: DVector::zeros(l.bias.len()),
            })
            .collect();
        let depth = self.layers.len();
        for x in batch {
            let acts = self.forward(x);
            let z = &acts[depth];
            let delta_out = self.decoder.affine(z) - *x;
            grads[depth].weights += &delta_out * z.transpose();
            grads[depth].bias += &delta_out;
            let mut delta = (self.decoder.weights.transpose() * &delta_out).component_mul(&z.map(|a| a * (1.0 - a)));
            for k in (0..depth).rev() {
                grads[k].weights += &delta * acts[k].transpose();
                grads[k].bias += &delta;
                if k > 0 {
                    delta =
                        (self.layers[k].weights.transpose() * &delta).component_mul(&acts[k].map(|a| a * (1.0 - a)));
                }
            }
        }
        let scale = 1.0 / batch.len() as f64;
        let mut flat = Vec::new();
        for g in &grads {
            flat.extend(g.weights.transpose().iter().map(|v| v * scale));
            flat.extend(g.bias.iter().map(|v| v * scale));
        }
        flat
    }

    /// One shuffled pass of mini-batch Adam on squared reconstruction error.
    fn train_epoch(&mut self, data: &[DVector<f64>], optimizer: &mut Optimizer, rng: &mut PortableRng) -> Result<()> {
        let mut order: Vec<usize> = (0..data.len()).collect();
        rng.shuffle(&mut order);
        let mut params = self.parameters();
        for batch in order.chunks(ENCODER_BATCH) {
            let batch: Vec<&DVector<f64>> = batch.iter().map(|&i| &data[i]).collect();
            let grad = self.gradient(&batch);
            optimizer.step(&mut params, &grad)?;
            self.set_parameters(&params);
        }
        Ok(())
    }
}

/// Bernoulli-Bernoulli restricted Boltzmann machine.
#[derive(Debug, Clone, PartialEq)]
pub struct Rbm {
    /// `visible × hidden`.
    pub weights: DMatrix<f64>,
    pub visible_bias: DVector<f64>,
    pub hidden_bias: DVector<f64>,
}

impl Rbm {
    pub fn zeros(n_visible: usize, n_hidden: usize) -> Self {
        Self {
            weights: DMatrix::zeros(n_visible, n_hidden),
            visible_bias: DVector::zeros(n_visible),
            hidden_bias: DVector::zeros(n_hidden),
        }
    }

    pub fn random(n_visible: usize, n_hidden: usize, seed: u64) -> Self {
        let mut rng = PortableRng::derive(seed, RBM_STREAM);
        let mut rbm = Self::zeros(n_visible, n_hidden);
        rbm.weights = DMatrix::from_fn(n_visible, n_hidden, |_, _| rng.uniform(-0.1, 0.1));
        rbm
    }

    pub fn n_visible(&self) -> usize {
        self.weights.nrows()
    }

    pub fn n_hidden(&self) -> usize {
        self.weights.ncols()
    }

    pub fn hidden_probabilities(&self, v: &DVector<f64>) -> DVector<f64> {
        (self.weights.transpose() * v + &self.hidden_bias).map(sigmoid)
    }

    pub fn visible_probabilities(&self, h: &DVector<f64>) -> DVector<f64> {
        (&self.weights * h + &self.visible_bias).map(sigmoid)
    }

    /// Mean squared error of the mean-field reconstruction `v → p(h|v) → p(v|h)`.
    pub fn reconstruction_error(&self, visibles: &[DVector<f64>]) -> f64 {
        visibles
            .iter()
            .map(|v| {
                let r = self.visible_probabilities(&self.hidden_probabilities(v));
                (r - v).norm_squared() / v.len() as f64
            })
            .sum::<f64>()
            / visibles.len() as f64
    }

    /// One full-batch CD-1 update: sample `h0`, reconstruct visible
    /// probabilities, and contrast the data and reconstruction statistics.
    pub fn cd1_step(&mut self, visibles: &[DVector<f64>], learning_rate: f64, rng: &mut PortableRng) {
        let (nv, nh) = (self.n_visible(), self.n_hidden());
        let mut dw = DMatrix::zeros(nv, nh);
        let mut dv = DVector::zeros(nv);
        let mut dh = DVector::zeros(nh);
        for v0 in visibles {
            let ph0 = self.hidden_probabilities(v0);
            let h0 = ph0.map(|p| if rng.bernoulli(p) { 1.0 } else { 0.0 });
            let pv1 = self.visible_probabilities(&h0);
            let ph1 = self.hidden_probabilities(&pv1);
            dw += v0 * ph0.transpose() - &pv1 * ph1.transpose();
            dv += v0 - &pv1;
            dh += ph0 - ph1;
        }
        let scale = learning_rate / visibles.len() as f64;
        self.weights += dw * scale;
        self.visible_bias += dv * scale;
        self.hidden_bias += dh * scale;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RbmClusterer {
    pub encoder: BinaryEncoder,
    pub rbm: Rbm,
    pub firing_threshold: f64,
    pub n_epochs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbmFitReport {
    pub encoder_loss: (f64, f64),
    pub rbm_reconstruction: (f64, f64),
}

impl RbmClusterer {
    pub fn new(
        input_size: usize,
        encoder_layers: usize,
        latent_size: usize,
        n_hidden: usize,
        firing_threshold: f64,
        n_epochs: usize,
        seed: u64,
    ) -> Result<Self> {
        if latent_size < 1 || n_hidden < 1 || encoder_layers < 1 || input_size < 1 {
            return Err(Error::InvalidConfig(format!(
                "clusterer shape input={input_size} layers={encoder_layers} latent={latent_size} hidden={n_hidden}"
            )));
        }
        if n_hidden > MAX_HIDDEN {
            return Err(Error::InvalidConfig(format!(
                "{n_hidden} hidden units exceed the {MAX_HIDDEN}-bit cluster id"
            )));
        }
        if !(firing_threshold > 0.0 && firing_threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "firing threshold {firing_threshold} outside (0, 1)"
            )));
        }
        Ok(Self {
            encoder: BinaryEncoder::random(input_size, encoder_layers, latent_size, seed),
            rbm: Rbm::random(latent_size, n_hidden, seed),
            firing_threshold,
            n_epochs,
        })
    }

    pub fn binary_latent(&self, x: &[f64]) -> Result<DVector<f64>> {
        Ok(self.encoder.encode(x)?.map(|z| if z >= 0.5 { 1.0 } else { 0.0 }))
    }

    /// Autoencoder then CD-1, `n_epochs` each. No device calls.
    pub fn fit(&mut self, data: &Dataset, seed: u64) -> Result<RbmFitReport> {
        if data.n_features() != self.encoder.input_size() {
            return Err(Error::DimensionMismatch(format!(
                "clusterer built for {} features, data has {}",
                self.encoder.input_size(),
                data.n_features()
            )));
        }
        let inputs: Vec<DVector<f64>> = data.features.iter().map(|x| DVector::from_column_slice(x)).collect();
        let mut rng = PortableRng::derive(seed, ENCODER_STREAM + 1);
        let enc_before = self.encoder.reconstruction_loss(&inputs);
        let mut optimizer = Optimizer::new(OptimizerConfig::adam(ENCODER_LR), self.encoder.parameters().len())?;
        for _ in 0..self.n_epochs {
            self.encoder.train_epoch(&inputs, &mut optimizer, &mut rng)?;
        }
        let enc_after = self.encoder.reconstruction_loss(&inputs);

        let visibles = data
            .features
            .iter()
            .map(|x| self.binary_latent(x))
            .collect::<Result<Vec<_>>>()?;
        let mut rng = PortableRng::derive(seed, RBM_STREAM + 1);
        let rbm_before = self.rbm.reconstruction_error(&visibles);
        for _ in 0..self.n_epochs {
            let mut order: Vec<usize> = (0..visibles.len()).collect();
            rng.shuffle(&mut order);
            for batch in order.chunks(RBM_BATCH) {
                let batch: Vec<DVector<f64>> = batch.iter().map(|&i| visibles[i].clone()).collect();
                self.rbm.cd1_step(&batch, RBM_LR, &mut rng);
            }
        }
        let rbm_after = self.rbm.reconstruction_error(&visibles);
        Ok(RbmFitReport {
            encoder_loss: (enc_before, enc_after),
            rbm_reconstruction: (rbm_before, rbm_after),
        })
    }

    /// Cluster id: hidden unit `j` contributes `2^j` when its activation
    /// probability reaches the firing threshold.
    pub fn cluster_assign(&self, x: &[f64]) -> Result<u64> {
        let probs = self.rbm.hidden_probabilities(&self.binary_latent(x)?);
        Ok(self.bits_to_id(&probs))
    }

    pub fn bits_to_id(&self, hidden_probs: &DVector<f64>) -> u64 {
        hidden_probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= self.firing_threshold)
            .fold(0u64, |id, (j, _)| id | (1 << j))
    }

    pub fn predict(&self, features: &[Vec<f64>]) -> Result<Vec<u64>> {
        features.iter().map(|x| self.cluster_assign(x)).collect()
    }

    pub fn score(&self, data: &Dataset, exec: Exec) -> Result<f64> {
        let labels = self.predict(&data.features)?;
        silhouette(&data.features, &labels, exec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weight_rbm_hidden_is_sigmoid_of_bias() {
        let mut rbm = Rbm::zeros(3, 2);
        rbm.hidden_bias = DVector::from_vec(vec![0.3, -1.2]);
        let p = rbm.hidden_probabilities(&DVector::from_vec(vec![1.0, 0.0, 1.0]));
        assert!((p[0] - sigmoid(0.3)).abs() < 1e-15);
        assert!((p[1] - sigmoid(-1.2)).abs() < 1e-15);
    }

    #[test]
    fn identity_encoder_is_elementwise_sigmoid() {
        let mut enc = BinaryEncoder::random(3, 1, 3, 0);
        enc.layers[0].weights = DMatrix::identity(3, 3);
        enc.layers[0].bias = DVector::zeros(3);
        let z = enc.encode(&[0.5, -2.0, 0.0]).unwrap();
        for (zi, xi) in z.iter().zip([0.5, -2.0, 0.0]) {
            assert_eq!(*zi, sigmoid(xi));
        }
    }

    #[test]
    fn bit_encoding() {
        let model = RbmClusterer::new(4, 1, 2, 2, 0.5, 1, 0).unwrap();
        assert_eq!(model.bits_to_id(&DVector::from_vec(vec![0.9, 0.1])), 1);
        assert_eq!(model.bits_to_id(&DVector::from_vec(vec![0.1, 0.9])), 2);
        assert_eq!(model.bits_to_id(&DVector::from_vec(vec![0.2, 0.4])), 0);
        assert_eq!(model.bits_to_id(&DVector::from_vec(vec![0.5, 0.5])), 3);
    }

    #[test]
    fn widths_interpolate() {
        assert_eq!(BinaryEncoder::widths(16, 1, 4), vec![16, 4]);
        assert_eq!(BinaryEncoder::widths(16, 3, 4), vec![16, 12, 8, 4]);
        assert_eq!(BinaryEncoder::widths(4, 2, 3), vec![4, 4, 3]);
    }

    #[test]
    fn shape_errors() {
        assert!(RbmClusterer::new(4, 1, 0, 2, 0.5, 1, 0).is_err());
        assert!(RbmClusterer::new(4, 1, 2, 0, 0.5, 1, 0).is_err());
        assert!(RbmClusterer::new(4, 1, 2, 2, 1.0, 1, 0).is_err());
        let m = RbmClusterer::new(4, 1, 2, 2, 0.5, 1, 0).unwrap();
        assert!(m.cluster_assign(&[0.0; 3]).is_err());
    }

    #[test]
    fn assignment_is_deterministic() {
        let m = RbmClusterer::new(4, 2, 3, 2, 0.5, 1, 9).unwrap();
        let x = [0.2, 0.9, -0.4, 1.3];
        assert_eq!(m.cluster_assign(&x).unwrap(), m.cluster_assign(&x).unwrap());
    }
}
