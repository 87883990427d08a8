// Copyright 2026 The QLDADR Authors
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

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qldadr/circuit.hpp"
#include "qldadr/error.hpp"
#include "qldadr/state.hpp"

namespace qldadr {

/// Register pattern written by phase estimation of e^{-i H t} for an
/// eigenvalue: round(value * t / (2 pi) * 2^bits). Phases are confined to
/// [0, 1/2] so the readout never wraps.
inline std::uint64_t phase_readout(double value, double t, int bits) {
  const double phase = value * t / (2.0 * std::numbers::pi);
  if (phase < -1e-12 || phase > 0.5 + 1e-12) {
    std::ostringstream os;
    os << "eigenphase " << phase << " outside [0, 1/2]; reduce t";
    throw ConfigError(os.str());
  }
  const double scaled = std::max(phase, 0.0) * std::ldexp(1.0, bits);
  return static_cast<std::uint64_t>(std::llround(scaled));
}

/// Eigenvalue encoded by a readout pattern.
inline double readout_value(std::uint64_t pattern, double t, int bits) {
  return 2.0 * std::numbers::pi * static_cast<double>(pattern) /
         (t * std::ldexp(1.0, bits));
}

/// Phase estimation as exact eigenphase arithmetic: in the eigenbasis of H
/// (columns of `basis`, padded with identity), XOR each eigenvector's readout
/// pattern into `readout`. The map is an involution, so the same call
/// uncomputes it.
inline QuantumState apply_eigenphase_qpe(QuantumState state,
                                         const std::string& target,
                                         const std::string& readout,
                                         const Eigen::MatrixXd& basis,
                                         const std::vector<std::uint64_t>& patterns) {
  const int q = state.layout().at(target).qubits;
  const Eigen::MatrixXd v = padded_basis(basis, q);
  std::vector<std::uint64_t> table(std::size_t{1} << q, 0);
  if (patterns.size() != static_cast<std::size_t>(basis.cols())) {
    throw NumericalError("one readout pattern per eigenvector required");
  }
  std::copy(patterns.begin(), patterns.end(), table.begin());
  const CMatrix vc = v.cast<cplx>();
  state = apply_register_unitary(std::move(state), target, vc.adjoint());
  state = apply_xor_table(std::move(state), target, readout, table);
  return apply_register_unitary(std::move(state), target, vc);
}

/// Dense n-qubit quantum Fourier transform |x> -> sum_y e^{2 pi i x y / N}|y>.
inline CMatrix qft_matrix(int bits) {
  const Eigen::Index n = Eigen::Index{1} << bits;
  CMatrix f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index y = 0; y < n; ++y) {
    for (Eigen::Index x = 0; x < n; ++x) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>((x * y) % n) /
                         static_cast<double>(n);
      f(y, x) = std::polar(norm, ang);
    }
  }
  return f;
}

/// Textbook phase estimation of U = e^{-i H t}: Hadamards on the readout
/// register, controlled U^{2^k}, then a forward QFT (the sign of the phase is
/// negative, so the forward transform lands on round(phase * 2^L)).
/// Intended for cross-validation on small registers.
inline QuantumState apply_textbook_qpe(QuantumState state,
                                       const std::string& target,
                                       const std::string& readout,
                                       const Eigen::MatrixXd& h, double t) {
  const auto& layout = state.layout();
  const int q = layout.at(target).qubits;
  const int bits = layout.at(readout).qubits;
  const Eigen::Index dim = Eigen::Index{1} << q;
  if (h.rows() > dim) throw NumericalError("operator larger than target register");
  Eigen::MatrixXd hp = Eigen::MatrixXd::Zero(dim, dim);
  hp.topLeftCorner(h.rows(), h.cols()) = h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hp);
  const CMatrix vecs = es.eigenvectors().cast<cplx>();
  const auto targets = layout.qubits(target);
  const auto rq = layout.qubits(readout);
  Eigen::Matrix2cd had;
  had << 1.0, 1.0, 1.0, -1.0;
  had /= std::sqrt(2.0);
  for (int k : rq) state = apply_unitary(std::move(state), {k}, had);
  for (int k = 0; k < bits; ++k) {
    const double power = std::ldexp(1.0, bits - 1 - k);
    Eigen::VectorXcd ph(dim);
    for (Eigen::Index e = 0; e < dim; ++e) {
      ph[e] = std::polar(1.0, -es.eigenvalues()[e] * t * power);
    }
    const CMatrix u = vecs * ph.asDiagonal() * vecs.adjoint();
    state = apply_unitary(std::move(state), targets, u, {rq[static_cast<std::size_t>(k)]});
  }
  return apply_unitary(std::move(state), rq, qft_matrix(bits));
}

}  // namespace qldadr
