// Copyright 2026 The lculab Authors
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

#pragma once

// JSON and text formats shared by the library and the command-line driver.
//
//   matrix          {"dim": n, "re": [...], "im": [...]}, row-major, n*n each
//   decomposition   {"dim": n, "terms": [{"alpha": a, "projector": matrix}],
//                    "identity_offset": c}
//   lcu             {"dim": n, "terms": [{"gamma": g, "unitary": matrix}]}
//   chain           {"n_states": n, "entries": [[row, col, prob], ...],
//                    "marked": [...]}, entry (row, col) = Pr(row | col)
//   pauli lines     "<coeff> <PAULI>", e.g. "-0.5 XZI"; blank lines and "#" lines skipped

#include <string>
#include <vector>

#include <json.hpp>

#include "lculab/gap_amplification.hpp"
#include "lculab/lcu.hpp"
#include "lculab/markov.hpp"
#include "lculab/operators.hpp"

namespace lculab::io {

using Json = nlohmann::json;

/// Throws ValidationError naming the first key of `obj` outside `allowed`.
void reject_unknown_keys(const Json& obj, const std::vector<std::string>& allowed,
                         const std::string& context);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json decomposition_to_json(const ProjectorDecomposition& p);
ProjectorDecomposition decomposition_from_json(const Json& j);

Json lcu_to_json(const LcuOperator& x);
LcuOperator lcu_from_json(const Json& j);

struct ChainSpec {
  RealMatrix transition;
  std::vector<Index> marked;
};
Json chain_to_json(const RealMatrix& p, const std::vector<Index>& marked);
ChainSpec chain_from_json(const Json& j);

/// n-qubit Pauli string, qubit 0 leftmost and most significant.
ComplexMatrix pauli_matrix(const std::string& label);
/// H = (1/2) sum_l alpha_l U_l with alpha_l = 2 |c_l| and U_l = sign(c_l) P_l.
UnitaryDecomposition parse_pauli_lines(const std::vector<std::string>& lines);
/// Projector form of a Pauli Hamiltonian: Pi_l = (U_l + 1)/2, terms whose
/// projector vanishes are dropped, and the identity part goes to the offset.
ProjectorDecomposition pauli_decomposition(const std::vector<std::string>& lines);
/// Eigenprojector decomposition of H - lambda_min (when lambda_min < 0), with
/// the shift recorded as the identity offset.
ProjectorDecomposition decomposition_from_matrix(const HermitianOperator& h);

}  // namespace lculab::io
