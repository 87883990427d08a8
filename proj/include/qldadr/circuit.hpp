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
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qldadr/error.hpp"
#include "qldadr/state.hpp"

namespace qldadr {

enum class GateKind { X, CX, MCX, EMBEDDED_UNITARY };

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::CX: return "CX";
    case GateKind::MCX: return "MCX";
    case GateKind::EMBEDDED_UNITARY: return "EMBEDDED_UNITARY";
  }
  return "?";
}

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> controls;
  std::vector<int> targets;
  std::optional<CMatrix> payload;  // EMBEDDED_UNITARY only

  static Gate x(int t) { return {GateKind::X, {}, {t}, {}}; }
  static Gate cx(int c, int t) { return {GateKind::CX, {c}, {t}, {}}; }
  /// Multi-controlled X; degrades to CX / X for fewer than two controls.
  static Gate mcx(std::vector<int> controls, int t) {
    if (controls.empty()) return x(t);
    if (controls.size() == 1) return cx(controls[0], t);
    return {GateKind::MCX, std::move(controls), {t}, {}};
  }
  static Gate embedded(std::vector<int> targets, CMatrix u,
                       std::vector<int> controls = {}) {
    return {GateKind::EMBEDDED_UNITARY, std::move(controls), std::move(targets),
            std::move(u)};
  }
};

struct GateCount {
  std::map<std::string, std::int64_t> by_kind;
  /// X + CX + Toffoli-equivalents, with an MCX on c controls costed as
  /// 2 * (c - 1) Toffolis (borrowed-ancilla ladder). Embedded unitaries are
  /// tallied separately and excluded.
  std::int64_t elementary = 0;
  std::int64_t embedded = 0;
};

class Circuit {
 public:
  explicit Circuit(int qubit_count = 0, std::string name = {})
      : qubits_(qubit_count), name_(std::move(name)) {
    if (qubit_count < 0) throw NumericalError("negative qubit count");
  }

  Circuit& add(Gate g) {
    validate(g);
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (other.qubits_ > qubits_) {
      throw NumericalError("appended circuit is wider than host circuit");
    }
    for (const auto& g : other.gates_) add(g);
    return *this;
  }

  int qubit_count() const noexcept { return qubits_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }

  GateCount gate_count() const {
    GateCount c;
    for (const auto& g : gates_) {
      ++c.by_kind[to_string(g.kind)];
      switch (g.kind) {
        case GateKind::X:
        case GateKind::CX:
          c.elementary += 1;
          break;
        case GateKind::MCX:
          c.elementary += 2 * (static_cast<std::int64_t>(g.controls.size()) - 1);
          break;
        case GateKind::EMBEDDED_UNITARY:
          c.embedded += 1;
          break;
      }
    }
    return c;
  }

 private:
  void validate(const Gate& g) const {
    auto in_range = [&](int q) { return q >= 0 && q < qubits_; };
    for (int q : g.controls) {
      if (!in_range(q)) throw NumericalError("gate control index out of range");
    }
    for (int q : g.targets) {
      if (!in_range(q)) throw NumericalError("gate target index out of range");
    }
    for (int c : g.controls) {
      if (std::find(g.targets.begin(), g.targets.end(), c) != g.targets.end()) {
        throw NumericalError("gate controls and targets overlap");
      }
    }
    switch (g.kind) {
      case GateKind::X:
        if (!g.controls.empty() || g.targets.size() != 1) {
          throw NumericalError("X gate takes one target and no controls");
        }
        break;
      case GateKind::CX:
        if (g.controls.size() != 1 || g.targets.size() != 1) {
          throw NumericalError("CX gate takes one control and one target");
        }
        break;
      case GateKind::MCX:
        if (g.controls.size() < 2 || g.targets.size() != 1) {
          throw NumericalError("MCX gate needs >= 2 controls and one target");
        }
        break;
      case GateKind::EMBEDDED_UNITARY: {
        if (!g.payload || g.targets.empty()) {
          throw NumericalError("embedded unitary needs targets and a payload");
        }
        const Eigen::Index dim = Eigen::Index{1} << g.targets.size();
        if (g.payload->rows() != dim || g.payload->cols() != dim) {
          throw NumericalError("embedded unitary dimension mismatch");
        }
        if (unitarity_residual(*g.payload) > 1e-10) {
          throw NumericalError("embedded payload is not unitary within 1e-10");
        }
        break;
      }
    }
  }

  int qubits_;
  std::string name_;
  std::vector<Gate> gates_;
};

/// Same circuit with every gate additionally controlled by `control`.
/// The control qubit must not be touched by the original circuit.
inline Circuit controlled_by(const Circuit& c, int control, int qubit_count) {
  Circuit out(qubit_count, c.name());
  for (const auto& g : c.gates()) {
    auto controls = g.controls;
    controls.push_back(control);
    if (g.kind == GateKind::EMBEDDED_UNITARY) {
      out.add(Gate::embedded(g.targets, *g.payload, std::move(controls)));
    } else {
      out.add(Gate::mcx(std::move(controls), g.targets[0]));
    }
  }
  return out;
}

/// Applies a circuit to a state; `qubit_map[k]` is the state qubit hosting
/// circuit qubit k.
inline QuantumState apply_circuit(QuantumState state, const Circuit& c,
                                  const std::vector<int>& qubit_map) {
  if (qubit_map.size() != static_cast<std::size_t>(c.qubit_count())) {
    throw NumericalError("qubit map size does not match circuit width");
  }
  const auto& layout = state.layout();
  auto mapped = [&](const std::vector<int>& qs) {
    std::vector<int> out;
    out.reserve(qs.size());
    for (int q : qs) out.push_back(qubit_map[static_cast<std::size_t>(q)]);
    return out;
  };
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::EMBEDDED_UNITARY) {
      state = apply_unitary(std::move(state), mapped(g.targets), *g.payload,
                            mapped(g.controls));
      continue;
    }
    std::uint64_t cmask = 0;
    for (int q : mapped(g.controls)) cmask |= layout.bit(q);
    const std::uint64_t tbit = layout.bit(qubit_map[static_cast<std::size_t>(g.targets[0])]);
    state = apply_permutation(std::move(state), [&](std::uint64_t idx) {
      return (idx & cmask) == cmask ? idx ^ tbit : idx;
    });
  }
  return state;
}

inline constexpr int kMaxUnitaryQubits = 12;

/// Dense matrix of the ordered gate product (column k = image of |k>).
inline CMatrix circuit_to_unitary(const Circuit& c) {
  if (c.qubit_count() > kMaxUnitaryQubits) {
    std::ostringstream os;
    os << "circuit has " << c.qubit_count() << " qubits; dense unitary capped at "
       << kMaxUnitaryQubits;
    throw NumericalError(os.str());
  }
  const int n = c.qubit_count();
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (n == 0) return CMatrix::Identity(1, 1);
  std::vector<Register> regs;
  regs.reserve(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) regs.push_back({"q" + std::to_string(q), 1});
  const RegisterLayout layout(regs);
  std::vector<int> identity_map(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) identity_map[static_cast<std::size_t>(q)] = q;
  CMatrix u(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    Amplitudes e = Amplitudes::Zero(dim);
    e[k] = 1.0;
    u.col(k) = apply_circuit(QuantumState(layout, std::move(e)), c, identity_map)
                   .amplitudes();
  }
  return u;
}

/// Bit `l` (1-based, l = 1 least significant) of a value.
inline int bit_of(std::uint64_t value, int l) {
  return static_cast<int>((value >> (l - 1)) & 1U);
}

/// Branch circuit on L + 1 qubits: qubits 0..L-1 hold the eigenvalue register
/// (qubit 0 = most significant bit), qubit L is the signal. It maps
/// |lambda>|0> to |j>|1> (j zero-extended to L bits) and leaves every other
/// signal-0 basis state alone.
inline Circuit build_u_lambda(std::uint64_t lambda_bits, std::uint64_t index_bits,
                              int L, int Q) {
  if (L < 1) throw ConfigError("eigenvalue register needs L >= 1 bits");
  if (Q < 0 || Q > L) {
    std::ostringstream os;
    os << "index width Q = " << Q << " exceeds eigenvalue register L = " << L
       << " (the Q <= L bound is required to host d indices)";
    throw ConfigError(os.str());
  }
  if (L < 64 && (lambda_bits >> L)) {
    throw ConfigError("eigenvalue pattern does not fit in L bits");
  }
  if (Q < 64 && (index_bits >> Q)) {
    throw ConfigError("index pattern does not fit in Q bits");
  }
  const int signal = L;
  auto qubit_of_bit = [L](int l) { return L - l; };  // bit l -> qubit
  Circuit c(L + 1, "U(lambda)");
  std::vector<int> flips;
  for (int l = L; l >= 1; --l) {
    if (bit_of(lambda_bits, l) == 0) flips.push_back(qubit_of_bit(l));
  }
  for (int q : flips) c.add(Gate::x(q));
  std::vector<int> all(static_cast<std::size_t>(L));
  for (int q = 0; q < L; ++q) all[static_cast<std::size_t>(q)] = q;
  c.add(Gate::mcx(all, signal));
  for (int q : flips) c.add(Gate::x(q));
  for (int l = L; l >= 1; --l) {
    if (bit_of(lambda_bits, l) != bit_of(index_bits, l)) {
      c.add(Gate::cx(signal, qubit_of_bit(l)));
    }
  }
  return c;
}

/// Orthogonal 2^q x 2^q matrix whose first D columns are the basis vectors
/// and whose padding block is the identity.
inline Eigen::MatrixXd padded_basis(const Eigen::MatrixXd& basis, int logD) {
  const Eigen::Index dim = Eigen::Index{1} << logD;
  const Eigen::Index d = basis.rows();
  if (basis.cols() != d || d > dim) {
    throw NumericalError("basis must be square and fit the register");
  }
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  if ((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw NumericalError("eigenbasis is not orthonormal");
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(dim, dim);
  v.topLeftCorner(d, d) = basis;
  return v;
}

/// Qubit roles inside the replacement circuit.
struct UvLayout {
  int logD = 0;
  int first(int b) const { return b; }          // register holding |v_j>
  int second(int b) const { return logD + b; }  // register holding |v_j'>
  int signal() const { return 2 * logD; }
  int width() const { return 2 * logD + 1; }
};

/// Gates of build_u_v's basis-state comparator only (no basis rotations).
inline Circuit u_v_comparator(int logD) {
  const UvLayout lay{logD};
  Circuit cmp(lay.width(), "comparator");
  std::vector<int> r1;
  for (int b = 0; b < logD; ++b) r1.push_back(lay.first(b));
  for (int b = 0; b < logD; ++b) cmp.add(Gate::cx(lay.second(b), lay.first(b)));
  for (int b = 0; b < logD; ++b) cmp.add(Gate::x(lay.first(b)));
  cmp.add(Gate::mcx(r1, lay.signal()));
  for (int b = 0; b < logD; ++b) cmp.add(Gate::x(lay.first(b)));
  for (int b = 0; b < logD; ++b) cmp.add(Gate::cx(lay.second(b), lay.first(b)));
  for (int b = 0; b < logD; ++b) {
    cmp.add(Gate::mcx({lay.signal(), lay.second(b)}, lay.first(b)));
  }
  return cmp;
}

/// Replacement circuit on 2 log D + 1 qubits. On |v_j>|v_j'>|0> it yields
/// |0>|v_j'>|1> when j = j' and is the identity otherwise:
///   rotate both registers into the computational basis, compare them
///   bit-wise into the signal, clear the first register where the signal
///   fired, then rotate back (the first register only where it did not).
inline Circuit build_u_v(int v_index, const Eigen::MatrixXd& eigenbasis,
                         int logD) {
  if (logD < 1) throw ConfigError("replacement register needs >= 1 qubit");
  if (v_index < 0 || v_index >= eigenbasis.cols()) {
    throw ConfigError("replacement component index out of range");
  }
  const Eigen::MatrixXd v = padded_basis(eigenbasis, logD);
  const CMatrix vc = v.cast<cplx>();
  const CMatrix vdag = vc.adjoint();
  const UvLayout lay{logD};
  std::vector<int> r1, r2;
  for (int b = 0; b < logD; ++b) {
    r1.push_back(lay.first(b));
    r2.push_back(lay.second(b));
  }
  Circuit c(lay.width(), "U_v[" + std::to_string(v_index) + "]");
  c.add(Gate::embedded(r1, vdag));
  c.add(Gate::embedded(r2, vdag));
  c.append(u_v_comparator(logD));
  c.add(Gate::x(lay.signal()));
  c.add(Gate::embedded(r1, vc, {lay.signal()}));
  c.add(Gate::x(lay.signal()));
  c.add(Gate::embedded(r2, vc));
  return c;
}

inline GateCount gate_count_report(const Circuit& c) { return c.gate_count(); }

inline nlohmann::json to_json(const GateCount& g) {
  return {{"by_kind", g.by_kind},
          {"elementary", g.elementary},
          {"embedded_unitaries", g.embedded}};
}

/// Gate-list dump: {"name", "qubits", "gates": [{kind, controls, targets}]}.
/// Embedded payloads are summarized by their dimension.
inline nlohmann::json to_json(const Circuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : c.gates()) {
    nlohmann::json j{{"kind", to_string(g.kind)},
                     {"controls", g.controls},
                     {"targets", g.targets}};
    if (g.payload) j["payload_dim"] = g.payload->rows();
    gates.push_back(std::move(j));
  }
  return {{"name", c.name()}, {"qubits", c.qubit_count()}, {"gates", gates}};
}

}  // namespace qldadr
