//! JSON interchange format for layered circuits.

use serde::{Deserialize, Serialize};

use super::{CircuitError, Layer, LayeredCircuit};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CircuitFile {
    pub version: u32,
    pub num_inputs: usize,
    pub num_work: usize,
    pub field_order: u32,
    pub layers: Vec<Layer>,
}

impl From<&LayeredCircuit> for CircuitFile {
    fn from(c: &LayeredCircuit) -> Self {
        CircuitFile {
            version: FORMAT_VERSION,
            num_inputs: c.num_inputs,
            num_work: c.num_work,
            field_order: c.field_order,
            layers: c.layers.clone(),
        }
    }
}

impl LayeredCircuit {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitFile::from(self)).expect("circuit serializes")
    }

    /// Parses and validates a circuit document.
    pub fn from_json(text: &str) -> Result<LayeredCircuit, CircuitError> {
        let file: CircuitFile =
            serde_json::from_str(text).map_err(|e| CircuitError::Format(e.to_string()))?;
        if file.version != FORMAT_VERSION {
            return Err(CircuitError::Format(format!(
                "unsupported version {} (expected {FORMAT_VERSION})",
                file.version
            )));
        }
        let c = LayeredCircuit {
            num_inputs: file.num_inputs,
            num_work: file.num_work,
            field_order: file.field_order,
            layers: file.layers,
        };
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{hadamard, phase, Block, GateKind};

    #[test]
    fn round_trip_is_exact() {
        let c = LayeredCircuit::new(
            4,
            1,
            vec![
                Layer::Tensor {
                    blocks: vec![
                        Block::Gate(GateKind::one_qubit(hadamard())),
                        Block::Identity { width: 1 },
                        Block::Gate(GateKind::controlled(1, phase(8, 3))),
                        Block::Gate(GateKind::one_qubit(phase(3, 1))),
                    ],
                },
                Layer::Cnot { pairs: vec![(4, 0), (1, 2)] },
                Layer::Tensor {
                    blocks: vec![Block::Gate(GateKind::mod_qr(3, 2, 4))],
                },
                Layer::Tensor {
                    blocks: vec![
                        Block::Gate(GateKind::QudigitH { q: 3, adjoint: true }),
                        Block::Gate(GateKind::Fanout { arity: 2 }),
                    ],
                },
            ],
        );
        c.validate().unwrap();
        let text = c.to_json();
        let back = LayeredCircuit::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn rejects_bad_version_and_invalid_layers() {
        let c = LayeredCircuit::empty(2);
        let text = c.to_json().replace("\"version\": 1", "\"version\": 9");
        assert!(LayeredCircuit::from_json(&text).is_err());
        let bad = r#"{"version":1,"numInputs":2,"numWork":0,"fieldOrder":1,
            "layers":[{"layer":"cnot","pairs":[[0,1],[1,0]]}]}"#;
        assert!(matches!(LayeredCircuit::from_json(bad), Err(CircuitError::Invalid(_))));
    }
}
