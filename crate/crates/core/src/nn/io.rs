use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Layer, NeuralNetwork};
use crate::error::{Error, Result};

/// On-disk network: `{"input_dim", "layers": [{"weights", "bias"}], "activation", "meta"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkFile {
    pub input_dim: usize,
    pub layers: Vec<LayerFile>,
    pub activation: String,
    #[serde(default)]
    pub meta: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerFile {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl NetworkFile {
    pub fn from_network(net: &NeuralNetwork, meta: serde_json::Value) -> Self {
        Self {
            input_dim: net.input_dim(),
            layers: net
                .layers()
                .iter()
                .map(|l| LayerFile {
                    weights: l.weights().chunks_exact(l.cols()).map(<[f64]>::to_vec).collect(),
                    bias: l.bias().to_vec(),
                })
                .collect(),
            activation: "relu".into(),
            meta,
        }
    }

    pub fn to_network(&self) -> Result<NeuralNetwork> {
        if self.activation != "relu" {
            return Err(Error::Validation(format!(
                "unsupported activation {:?}; only \"relu\" is supported",
                self.activation
            )));
        }
        let layers = self
            .layers
            .iter()
            .map(|l| Layer::from_rows(&l.weights, l.bias.clone()))
            .collect::<Result<Vec<_>>>()?;
        NeuralNetwork::new(self.input_dim, layers)
    }
}

pub fn write_network(path: &Path, net: &NeuralNetwork, meta: serde_json::Value) -> Result<()> {
    let file = NetworkFile::from_network(net, meta);
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

pub fn read_network(path: &Path) -> Result<(NeuralNetwork, serde_json::Value)> {
    let text = std::fs::read_to_string(path)?;
    let file: NetworkFile = serde_json::from_str(&text)?;
    Ok((file.to_network()?, file.meta))
}
