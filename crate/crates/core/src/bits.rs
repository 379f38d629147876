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

//! Bitstring conventions shared by every module.
//!
//! Character `j` of an n-character bitstring (left to right) is qubit `q[j]`,
//! and the basis index is the big-endian value of the string. Qubit `j`
//! therefore lives at bit `n - 1 - j` of the index.

use crate::error::{Error, Result};

/// Mask selecting qubit `qubit` inside a basis index of an `n_qubits` register.
#[inline]
pub fn qubit_mask(n_qubits: usize, qubit: usize) -> u64 {
    1u64 << (n_qubits - 1 - qubit)
}

pub fn index_to_bits(index: u64, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if index & qubit_mask(n_qubits, q) != 0 { '1' } else { '0' })
        .collect()
}

pub fn bits_to_index(bits: &str, n_qubits: usize) -> Result<u64> {
    if bits.len() != n_qubits {
        return Err(Error::InvalidArgument(format!(
            "bitstring {bits:?} has {} characters, expected {n_qubits}",
            bits.len()
        )));
    }
    bits.bytes().try_fold(0u64, |acc, b| match b {
        b'0' => Ok(acc << 1),
        b'1' => Ok((acc << 1) | 1),
        _ => Err(Error::InvalidArgument(format!(
            "bitstring {bits:?} contains a character other than '0' or '1'"
        ))),
    })
}

pub fn is_bitstring(s: &str, n_qubits: usize) -> bool {
    s.len() == n_qubits && s.bytes().all(|b| b == b'0' || b == b'1')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_endian_round_trip() {
        assert_eq!(bits_to_index("0001", 4).unwrap(), 1);
        assert_eq!(bits_to_index("1000", 4).unwrap(), 8);
        assert_eq!(index_to_bits(5, 3), "101");
        for i in 0..64 {
            assert_eq!(bits_to_index(&index_to_bits(i, 6), 6).unwrap(), i);
        }
    }

    #[test]
    fn rejects_bad_strings() {
        assert!(bits_to_index("012", 3).is_err());
        assert!(bits_to_index("01", 3).is_err());
        assert!(!is_bitstring("0a1", 3));
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        assert_eq!(qubit_mask(4, 0), 8);
        assert_eq!(qubit_mask(4, 3), 1);
    }
}
