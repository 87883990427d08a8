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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qldadr/error.hpp"
#include "qldadr/lda.hpp"

namespace qldadr {

using cplx = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 30;

/// Qubits needed to index `count` basis states (at least one).
inline int qubits_for(Eigen::Index count) {
  int q = 0;
  while ((Eigen::Index{1} << q) < count) ++q;
  return std::max(q, 1);
}

/// ceil(log2(count)) with log2(1) = 0.
inline int ceil_log2(std::int64_t count) {
  int q = 0;
  while ((std::int64_t{1} << q) < count) ++q;
  return q;
}

struct Register {
  std::string name;
  int qubits = 0;
};

/// Ordered registers. Global qubit 0 is the most significant bit of the
/// basis index; a register's first qubit is the MSB of its value.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> regs) {
    for (auto& r : regs) add(std::move(r));
  }

  void add(Register r) {
    if (r.qubits < 1) {
      throw NumericalError("register '" + r.name + "' needs at least 1 qubit");
    }
    if (contains(r.name)) {
      throw NumericalError("duplicate register name '" + r.name + "'");
    }
    if (total_ + r.qubits > kMaxQubits) {
      std::ostringstream os;
      os << "layout would exceed " << kMaxQubits << " qubits";
      throw NumericalError(os.str());
    }
    total_ += r.qubits;
    regs_.push_back(std::move(r));
  }

  bool contains(const std::string& name) const {
    return std::any_of(regs_.begin(), regs_.end(),
                       [&](const Register& r) { return r.name == name; });
  }

  const Register& at(const std::string& name) const {
    for (const auto& r : regs_) {
      if (r.name == name) return r;
    }
    throw NumericalError("unknown register '" + name + "'");
  }

  /// First global qubit of the register.
  int offset(const std::string& name) const {
    int off = 0;
    for (const auto& r : regs_) {
      if (r.name == name) return off;
      off += r.qubits;
    }
    throw NumericalError("unknown register '" + name + "'");
  }

  std::vector<int> qubits(const std::string& name) const {
    const int off = offset(name);
    std::vector<int> q(static_cast<std::size_t>(at(name).qubits));
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = off + static_cast<int>(k);
    return q;
  }

  RegisterLayout without(const std::string& name) const {
    RegisterLayout out;
    bool found = false;
    for (const auto& r : regs_) {
      if (r.name == name) {
        found = true;
      } else {
        out.add(r);
      }
    }
    if (!found) throw NumericalError("unknown register '" + name + "'");
    return out;
  }

  const std::vector<Register>& registers() const noexcept { return regs_; }
  int total_qubits() const noexcept { return total_; }
  std::uint64_t dimension() const noexcept {
    return std::uint64_t{1} << total_;
  }

  /// Basis index bit for a global qubit.
  std::uint64_t bit(int qubit) const noexcept {
    return std::uint64_t{1} << (total_ - 1 - qubit);
  }

  struct Field {
    int shift = 0;
    std::uint64_t mask = 0;
    std::uint64_t operator()(std::uint64_t index) const noexcept {
      return (index >> shift) & mask;
    }
  };

  /// Precomputed extractor of a register's value from basis indices.
  Field field(const std::string& name) const {
    const auto& r = at(name);
    return {total_ - offset(name) - r.qubits, (std::uint64_t{1} << r.qubits) - 1};
  }

  /// Value stored in a register for a basis index.
  std::uint64_t value(std::uint64_t index, const std::string& name) const {
    const auto& r = at(name);
    const int shift = total_ - offset(name) - r.qubits;
    return (index >> shift) & ((std::uint64_t{1} << r.qubits) - 1);
  }

  /// Basis index from per-register values, in layout order.
  std::uint64_t index_of(const std::vector<std::uint64_t>& values) const {
    if (values.size() != regs_.size()) {
      throw NumericalError("register value count does not match layout");
    }
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < regs_.size(); ++k) {
      idx = (idx << regs_[k].qubits) | values[k];
    }
    return idx;
  }

 private:
  std::vector<Register> regs_;
  int total_ = 0;
};

/// Normalized pure state over a register layout.
class QuantumState {
 public:
  QuantumState(RegisterLayout layout, Amplitudes amps)
      : layout_(std::move(layout)), amps_(std::move(amps)) {
    if (static_cast<std::uint64_t>(amps_.size()) != layout_.dimension()) {
      throw NumericalError("amplitude count does not match register layout");
    }
    const double n = amps_.norm();
    if (std::abs(n - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "state is not normalized: norm " << n;
      throw NumericalError(os.str());
    }
  }

  /// All registers in |0>.
  static QuantumState zero(RegisterLayout layout) {
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dimension()));
    a[0] = 1.0;
    return QuantumState(std::move(layout), std::move(a));
  }

  const RegisterLayout& layout() const noexcept { return layout_; }
  const Amplitudes& amplitudes() const noexcept { return amps_; }
  cplx amplitude(const std::vector<std::uint64_t>& values) const {
    return amps_[static_cast<Eigen::Index>(layout_.index_of(values))];
  }
  double norm() const { return amps_.norm(); }

 private:
  RegisterLayout layout_;
  Amplitudes amps_;
};

/// Register, observed bit pattern and its exact pre-measurement probability.
struct MeasurementRecord {
  std::string register_name;
  std::uint64_t outcome = 0;
  double probability = 0.0;
};

/// |psi_X> = sum_ij x_ij |i>|j> / |X|_F on registers "index" and "feature";
/// padded basis states carry zero amplitude.
inline QuantumState prepare_psi_x(const Dataset& ds) {
  const auto& x = ds.samples();
  const double fro = x.norm();
  if (!(fro > 0.0)) throw DataError("cannot encode a zero data matrix");
  RegisterLayout layout({{"index", qubits_for(x.rows())},
                         {"feature", qubits_for(x.cols())}});
  Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dimension()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      a[static_cast<Eigen::Index>(layout.index_of(
          {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)}))] =
          x(i, j) / fro;
    }
  }
  return QuantumState(std::move(layout), std::move(a));
}

/// Max-norm residual of U^dagger U - I.
inline double unitarity_residual(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

/// Applies `u` to the listed qubits (first = most significant) when every
/// control qubit is |1>.
inline QuantumState apply_unitary(QuantumState state,
                                  const std::vector<int>& targets,
                                  const CMatrix& u,
                                  const std::vector<int>& controls = {}) {
  const auto& layout = state.layout();
  const auto k = targets.size();
  const Eigen::Index sub = Eigen::Index{1} << k;
  if (u.rows() != sub || u.cols() != sub) {
    throw NumericalError("unitary dimension does not match target qubits");
  }
  if (unitarity_residual(u) > 1e-10) {
    throw NumericalError("operator is not unitary within 1e-10");
  }
  std::uint64_t tmask = 0, cmask = 0;
  std::vector<std::uint64_t> tbits(k);
  for (std::size_t t = 0; t < k; ++t) {
    const int q = targets[t];
    if (q < 0 || q >= layout.total_qubits()) {
      throw NumericalError("target qubit out of range");
    }
    tbits[t] = layout.bit(q);
    if (tmask & tbits[t]) throw NumericalError("repeated target qubit");
    tmask |= tbits[t];
  }
  for (int q : controls) {
    if (q < 0 || q >= layout.total_qubits()) {
      throw NumericalError("control qubit out of range");
    }
    if (tmask & layout.bit(q)) {
      throw NumericalError("control qubit overlaps a target");
    }
    cmask |= layout.bit(q);
  }
  // Offsets of each sub-basis state relative to the base index.
  std::vector<std::uint64_t> offs(static_cast<std::size_t>(sub), 0);
  for (Eigen::Index s = 0; s < sub; ++s) {
    std::uint64_t o = 0;
    for (std::size_t t = 0; t < k; ++t) {
      if ((static_cast<std::uint64_t>(s) >> (k - 1 - t)) & 1U) o |= tbits[t];
    }
    offs[static_cast<std::size_t>(s)] = o;
  }
  Amplitudes amps = state.amplitudes();
  Eigen::VectorXcd in(sub), out(sub);
  const std::uint64_t dim = layout.dimension();
  for (std::uint64_t base = 0; base < dim; ++base) {
    if ((base & tmask) != 0 || (base & cmask) != cmask) continue;
    bool zero = true;
    for (Eigen::Index s = 0; s < sub; ++s) {
      in[s] = amps[static_cast<Eigen::Index>(base | offs[static_cast<std::size_t>(s)])];
      zero = zero && in[s] == cplx{};
    }
    if (zero) continue;
    out.noalias() = u * in;
    for (Eigen::Index s = 0; s < sub; ++s) {
      amps[static_cast<Eigen::Index>(base | offs[static_cast<std::size_t>(s)])] = out[s];
    }
  }
  amps /= amps.norm();
  return QuantumState(layout, std::move(amps));
}

/// Applies `u` to a whole register.
inline QuantumState apply_register_unitary(QuantumState state,
                                           const std::string& name,
                                           const CMatrix& u) {
  const auto targets = state.layout().qubits(name);
  return apply_unitary(std::move(state), targets, u);
}

/// Basis-state permutation given as a bijection on indices.
inline QuantumState apply_permutation(
    QuantumState state,
    const std::function<std::uint64_t(std::uint64_t)>& perm) {
  const auto dim = state.layout().dimension();
  Amplitudes out = Amplitudes::Zero(static_cast<Eigen::Index>(dim));
  std::vector<bool> hit(dim, false);
  const auto& in = state.amplitudes();
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    const auto to = perm(idx);
    if (to >= dim || hit[to]) {
      throw NumericalError("basis map is not a permutation");
    }
    hit[to] = true;
    out[static_cast<Eigen::Index>(to)] = in[static_cast<Eigen::Index>(idx)];
  }
  return QuantumState(state.layout(), std::move(out));
}

/// dst ^= table[src]: the reversible readout used by exact phase estimation.
inline QuantumState apply_xor_table(QuantumState state, const std::string& src,
                                    const std::string& dst,
                                    const std::vector<std::uint64_t>& table) {
  const auto& layout = state.layout();
  const auto& sreg = layout.at(src);
  const auto& dreg = layout.at(dst);
  if (table.size() != (std::size_t{1} << sreg.qubits)) {
    throw NumericalError("xor table size does not match source register");
  }
  const int dshift = layout.total_qubits() - layout.offset(dst) - dreg.qubits;
  for (auto v : table) {
    if (v >> dreg.qubits) {
      throw NumericalError("xor table value does not fit destination register");
    }
  }
  const auto sfield = layout.field(src);
  return apply_permutation(std::move(state), [&](std::uint64_t idx) {
    return idx ^ (table[sfield(idx)] << dshift);
  });
}

/// Rotation of a one-qubit register selected by the value of `control`.
inline QuantumState apply_value_controlled(
    QuantumState state, const std::string& control, const std::string& target,
    const std::function<Eigen::Matrix2cd(std::uint64_t)>& gate_for) {
  const auto& layout = state.layout();
  if (layout.at(target).qubits != 1) {
    throw NumericalError("value-controlled target must be a single qubit");
  }
  const auto tbit = layout.bit(layout.offset(target));
  const auto values = std::uint64_t{1} << layout.at(control).qubits;
  const auto cfield = layout.field(control);
  std::vector<Eigen::Matrix2cd> gates(values);
  for (std::uint64_t v = 0; v < values; ++v) {
    gates[v] = gate_for(v);
    if (unitarity_residual(gates[v]) > 1e-10) {
      throw NumericalError("value-controlled gate is not unitary");
    }
  }
  Amplitudes amps = state.amplitudes();
  for (std::uint64_t base = 0; base < layout.dimension(); ++base) {
    if (base & tbit) continue;
    const auto& g = gates[cfield(base)];
    const auto i0 = static_cast<Eigen::Index>(base);
    const auto i1 = static_cast<Eigen::Index>(base | tbit);
    const cplx a0 = amps[i0], a1 = amps[i1];
    amps[i0] = g(0, 0) * a0 + g(0, 1) * a1;
    amps[i1] = g(1, 0) * a0 + g(1, 1) * a1;
  }
  amps /= amps.norm();
  return QuantumState(layout, std::move(amps));
}

/// Appends a register prepared in `init` (default |0>) after all others.
inline QuantumState append_register(const QuantumState& state, Register reg,
                                    const std::optional<Amplitudes>& init = {}) {
  RegisterLayout layout = state.layout();
  const int q = reg.qubits;
  layout.add(std::move(reg));
  const Eigen::Index sub = Eigen::Index{1} << q;
  Amplitudes v = Amplitudes::Zero(sub);
  if (init) {
    if (init->size() > sub) {
      throw NumericalError("initial register state larger than register");
    }
    v.head(init->size()) = *init;
    const double n = v.norm();
    if (std::abs(n - 1.0) > 1e-10) {
      throw NumericalError("initial register state is not normalized");
    }
    v /= n;
  } else {
    v[0] = 1.0;
  }
  Amplitudes amps(static_cast<Eigen::Index>(layout.dimension()));
  const auto& old = state.amplitudes();
  for (Eigen::Index i = 0; i < old.size(); ++i) {
    amps.segment(i * sub, sub) = old[i] * v;
  }
  return QuantumState(std::move(layout), std::move(amps));
}

/// Exact outcome probabilities of a register.
inline std::vector<double> register_distribution(const QuantumState& state,
                                                 const std::string& name) {
  const auto& layout = state.layout();
  std::vector<double> p(std::size_t{1} << layout.at(name).qubits, 0.0);
  const auto f = layout.field(name);
  const auto& a = state.amplitudes();
  for (std::uint64_t idx = 0; idx < layout.dimension(); ++idx) {
    p[f(idx)] += std::norm(a[static_cast<Eigen::Index>(idx)]);
  }
  return p;
}

/// Projects a register onto `outcome` and renormalizes. The register stays
/// in the layout, now in a definite basis state.
inline std::pair<QuantumState, MeasurementRecord> postselect(
    const QuantumState& state, const std::string& name, std::uint64_t outcome) {
  const auto& layout = state.layout();
  if (outcome >> layout.at(name).qubits) {
    throw NumericalError("outcome does not fit register '" + name + "'");
  }
  Amplitudes amps = state.amplitudes();
  const auto f = layout.field(name);
  double mass = 0.0;
  for (std::uint64_t idx = 0; idx < layout.dimension(); ++idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    if (f(idx) == outcome) {
      mass += std::norm(amps[i]);
    } else {
      amps[i] = 0.0;
    }
  }
  if (mass < 1e-15) {
    throw NumericalError("post-selection on null branch of register '" + name +
                         "'");
  }
  amps /= std::sqrt(mass);
  return {QuantumState(layout, std::move(amps)),
          MeasurementRecord{name, outcome, mass}};
}

inline constexpr double kPurityThreshold = 1.0 - 1e-10;

/// Purity tr(rho_r^2) of the reduced state of register `name`.
inline double register_purity(const QuantumState& state,
                              const std::string& name);

namespace detail {

/// Amplitudes reshaped to (rest x register) with rest in layout order.
inline CMatrix split_register(const QuantumState& state,
                              const std::string& name) {
  const auto& layout = state.layout();
  const auto& reg = layout.at(name);
  const Eigen::Index rdim = Eigen::Index{1} << reg.qubits;
  const Eigen::Index rest =
      static_cast<Eigen::Index>(layout.dimension()) / rdim;
  const int low = layout.total_qubits() - layout.offset(name) - reg.qubits;
  const std::uint64_t low_mask = (std::uint64_t{1} << low) - 1;
  CMatrix m(rest, rdim);
  const auto f = layout.field(name);
  const auto& a = state.amplitudes();
  for (std::uint64_t idx = 0; idx < layout.dimension(); ++idx) {
    const auto r = f(idx);
    const auto high = idx >> (low + reg.qubits);
    const auto row = (high << low) | (idx & low_mask);
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(r)) =
        a[static_cast<Eigen::Index>(idx)];
  }
  return m;
}

}  // namespace detail

inline double register_purity(const QuantumState& state,
                              const std::string& name) {
  const CMatrix m = detail::split_register(state, name);
  const CMatrix g = m.rows() <= m.cols() ? CMatrix(m * m.adjoint())
                                         : CMatrix(m.adjoint() * m);
  return g.squaredNorm();
}

/// Removes a register that is in a product state with the rest. Throws
/// PipelineError when the register is entangled, since dropping it would
/// leave a mixed state.
inline QuantumState discard_register(const QuantumState& state,
                                     const std::string& name) {
  const CMatrix m = detail::split_register(state, name);
  const CMatrix g = m.rows() <= m.cols() ? CMatrix(m * m.adjoint())
                                         : CMatrix(m.adjoint() * m);
  const double purity = g.squaredNorm();
  if (purity < kPurityThreshold) {
    std::ostringstream os;
    os << "register '" << name
       << "' not separable; discard would decohere (purity " << purity << ")";
    throw PipelineError(os.str());
  }
  Eigen::Index best = 0;
  m.rowwise().squaredNorm().maxCoeff(&best);
  Eigen::VectorXcd phi = m.row(best).transpose();
  for (int it = 0; it < 2; ++it) {
    const Eigen::VectorXcd rest = m * phi.conjugate();
    phi = m.transpose() * rest.conjugate();
    phi /= phi.norm();
  }
  Eigen::Index lead = 0;
  phi.cwiseAbs().maxCoeff(&lead);
  phi *= std::conj(phi[lead]) / std::abs(phi[lead]);
  Amplitudes rest = m * phi.conjugate();
  rest /= rest.norm();
  return QuantumState(state.layout().without(name), std::move(rest));
}

/// |<a|b>| for states over identical layouts.
inline double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.amplitudes().size() != b.amplitudes().size()) {
    throw NumericalError("fidelity between states of different dimension");
  }
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace qldadr
