// Copyright 2026 The grover-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use super::config::Variant;
use crate::grover::{Circuit, GroverInstance};
use crate::qasm::{emit_prompt_flat, emit_simplified};

/// Question text for one record. The QASM variants append the circuit in flat
/// or simplified form; the conversational variant ends with `The answer is:`.
pub fn build_prompt(instance: &GroverInstance, variant: Variant, circuit: &Circuit, top_k: usize) -> String {
    let qasm = match variant {
        Variant::Base => None,
        Variant::Qasm => Some(emit_prompt_flat(circuit).text),
        Variant::SimplifiedConversational => Some(emit_simplified(circuit).text),
    };
    build_prompt_with_qasm(instance, variant, qasm.as_deref(), top_k)
}

pub(crate) fn build_prompt_with_qasm(
    instance: &GroverInstance,
    variant: Variant,
    qasm: Option<&str>,
    top_k: usize,
) -> String {
    let marked = instance.marked_bitstrings().join(", ");
    let mut p = String::with_capacity(512 + qasm.map_or(0, str::len));
    p.push_str("Question:\n");
    p.push_str("I want you to act as a quantum computer specialized in performing Grover's algorithm. ");
    p.push_str("I will type a circuit, and you will reply with what a quantum computer should output. ");
    p.push_str(&format!(
        "I want you to only reply with the output in a dictionary that contains the top-{top_k} probabilities and nothing else. "
    ));
    p.push_str(&format!(
        "The input marked status is: {marked} for a {}-qubit system.",
        instance.n_qubits()
    ));
    if let (Some(q), Variant::Qasm | Variant::SimplifiedConversational) = (qasm, variant) {
        p.push_str("\nHere is the QASM circuit:\n\"");
        p.push_str(q);
        p.push('"');
    }
    if variant == Variant::SimplifiedConversational {
        p.push_str("\nThe answer is:\n");
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grover::build_circuit;

    #[test]
    fn base_has_no_circuit() {
        let inst = GroverInstance::from_bitstrings(4, &["0000"]).unwrap();
        let c = build_circuit(&inst, None).unwrap();
        let p = build_prompt(&inst, Variant::Base, &c, 30);
        assert!(!p.contains("q["));
        assert!(p.ends_with("for a 4-qubit system."));
    }

    #[test]
    fn multi_marked_sentence() {
        let inst = GroverInstance::from_bitstrings(4, &["0101", "0011"]).unwrap();
        let c = build_circuit(&inst, None).unwrap();
        let p = build_prompt(&inst, Variant::Qasm, &c, 30);
        assert!(p.contains("The input marked status is: 0011, 0101 for a 4-qubit system."));
        assert!(p.ends_with("q[3];\""));
    }

    #[test]
    fn conversational_suffix() {
        let inst = GroverInstance::from_bitstrings(3, &["111"]).unwrap();
        let c = build_circuit(&inst, None).unwrap();
        let p = build_prompt(&inst, Variant::SimplifiedConversational, &c, 8);
        assert!(p.ends_with("\"\nThe answer is:\n"));
        assert!(p.contains("top-8 probabilities"));
        assert!(p.contains("h q[0:3];"));
    }
}
