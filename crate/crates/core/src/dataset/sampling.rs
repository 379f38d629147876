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

use rand::seq::index;

use crate::error::{Error, Result};
use crate::grover::GroverInstance;
use crate::statevector::seeded_rng;

/// SplitMix64 finalizer; the mixing step behind every derived seed.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `ordinal`-th record of size `n_qubits`:
/// `splitmix64(master ^ splitmix64((n << 32) | ordinal))`.
pub fn derive_record_seed(master: u64, n_qubits: usize, ordinal: u64) -> u64 {
    splitmix64(master ^ splitmix64(((n_qubits as u64) << 32) | (ordinal & 0xFFFF_FFFF)))
}

/// Uniformly random marked set of `marked_size` distinct states.
pub fn generate_instance(n_qubits: usize, marked_size: usize, seed: u64) -> Result<GroverInstance> {
    if !(crate::grover::instance::MIN_QUBITS..=crate::grover::instance::MAX_QUBITS).contains(&n_qubits) {
        return Err(Error::InvalidInstance(format!("{n_qubits} qubits is out of range")));
    }
    let dim = 1usize << n_qubits;
    if marked_size == 0 || marked_size >= dim {
        return Err(Error::InvalidInstance(format!(
            "marked size {marked_size} must be in 1..{dim}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let picks = index::sample(&mut rng, dim, marked_size);
    GroverInstance::new(n_qubits, picks.into_iter().map(|i| i as u64))
}
