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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qldadr/circuit.hpp"
#include "qldadr/error.hpp"
#include "qldadr/lda.hpp"
#include "qldadr/linalg.hpp"
#include "qldadr/qpe.hpp"
#include "qldadr/state.hpp"

namespace qldadr {

struct PipelineConfig {
  int pe_bits = 10;     // L, eigenvalue register of rho
  int sigma_bits = 10;  // register for the eigenvalues of S_W^{1/2}
  double kappa_lambda = 100.0;
  double kappa_sigma = 100.0;
  ClampMode clamp_mode = ClampMode::discard;
  double threshold = 0.95;
  std::optional<double> c1;        // default 1 / (largest sigma readout)
  double t_evolution = std::numbers::pi;
  std::optional<double> alpha;     // default 1e-6 * mean |x_ij|
  bool keep_snapshots = false;

  void validate() const {
    if (pe_bits < 1 || pe_bits > 20) {
      throw ConfigError("pe-bits must lie in [1, 20]");
    }
    if (sigma_bits < 1 || sigma_bits > 20) {
      throw ConfigError("sigma-bits must lie in [1, 20]");
    }
    if (!(kappa_lambda > 1.0) || !std::isfinite(kappa_lambda)) {
      throw ConfigError("kappa-lambda must be finite and > 1");
    }
    if (!(kappa_sigma > 1.0) || !std::isfinite(kappa_sigma)) {
      throw ConfigError("kappa-sigma must be finite and > 1");
    }
    if (!(threshold > 0.0 && threshold <= 1.0)) {
      throw ConfigError("dims-threshold must lie in (0, 1]");
    }
    if (!(t_evolution > 0.0 && t_evolution <= std::numbers::pi + 1e-15)) {
      throw ConfigError("evolution time must lie in (0, pi] to avoid phase wraparound");
    }
    if (c1 && !(*c1 > 0.0 && std::isfinite(*c1))) {
      throw ConfigError("c1 must be finite and > 0");
    }
    if (alpha && !(*alpha >= 0.0 && std::isfinite(*alpha))) {
      throw ConfigError("alpha must be finite and >= 0");
    }
  }

  /// Clamp on the eigenvalues of S_W: sigma = sqrt(s) is kept when
  /// sigma >= sigma_max / kappa_sigma, i.e. s >= s_max / kappa_sigma^2.
  ClampPolicy within_clamp() const {
    return ClampPolicy(kappa_sigma * kappa_sigma, clamp_mode);
  }

  double alpha_for(const Dataset& ds) const {
    if (alpha) return *alpha;
    return 1e-6 * ds.samples().cwiseAbs().mean();
  }
};

/// Validates Q = ceil(log2 d) <= L.
inline void check_index_width(int d, int L) {
  const int q = ceil_log2(d);
  if (q > L) {
    std::ostringstream os;
    os << "index width Q = ceil(log2 d) = " << q << " exceeds pe-bits L = " << L
       << "; the eigenvalue register must be able to host all d = " << d
       << " indices (Q <= L)";
    throw ConfigError(os.str());
  }
}

struct ShadowExtraction {
  ScatterModel model;
  SymMatrix rho;
  ShadowSpectrum spectrum;
  std::vector<std::uint64_t> readouts;  // QPE pattern of each kept v_j
  std::vector<std::string> warnings;
};

/// Scatter model, rho and the d shadow components. Each kept eigenstate is
/// run through phase estimation and must read out its own pattern with
/// certainty.
inline ShadowExtraction extract_shadow(const Dataset& ds,
                                       const PipelineConfig& cfg) {
  cfg.validate();
  ShadowExtraction out;
  out.model = build_scatter_model(ds, cfg.alpha_for(ds));
  if (out.model.ridge > 0.0) {
    std::ostringstream os;
    os << "within-class scatter needed a diagonal ridge of " << out.model.ridge;
    out.warnings.push_back(os.str());
  }
  out.rho = build_rho(out.model.sw, out.model.sb, cfg.within_clamp());
  out.spectrum = select_dimension(sym_eig(out.rho), ds.classes(), cfg.threshold);
  auto& spec = out.spectrum;
  const double floor = spec.values[0] / cfg.kappa_lambda;
  while (spec.d > 1 && spec.values[spec.d - 1] < floor) {
    std::ostringstream os;
    os << "component " << spec.d << " (lambda = " << spec.values[spec.d - 1]
       << ") below 1/kappa_lambda of the largest; dropped";
    spec.warnings.push_back(os.str());
    --spec.d;
  }
  out.warnings.insert(out.warnings.end(), spec.warnings.begin(),
                      spec.warnings.end());
  check_index_width(spec.d, cfg.pe_bits);

  const int q = qubits_for(ds.features());
  const Eigen::MatrixXd v = padded_basis(spec.vectors, q);
  std::vector<std::uint64_t> patterns;
  for (Eigen::Index j = 0; j < spec.values.size(); ++j) {
    patterns.push_back(phase_readout(spec.values[j], cfg.t_evolution, cfg.pe_bits));
  }
  for (int j = 0; j < spec.d; ++j) {
    RegisterLayout layout({{"feature", q}});
    Amplitudes a = v.col(j).cast<cplx>();
    QuantumState s(layout, a);
    s = append_register(s, {"lambda", cfg.pe_bits});
    s = apply_eigenphase_qpe(std::move(s), "feature", "lambda", spec.vectors, patterns);
    const auto dist = register_distribution(s, "lambda");
    const auto best = static_cast<std::uint64_t>(
        std::max_element(dist.begin(), dist.end()) - dist.begin());
    if (std::abs(dist[best] - 1.0) > 1e-12) {
      throw NumericalError("phase estimation on an eigenstate did not yield a definite readout");
    }
    out.readouts.push_back(best);
  }
  return out;
}

struct IntermediateResult {
  QuantumState psi_t;
  MeasurementRecord record;  // rotation qubit = 1, probability p1
  double c1 = 0.0;
  Eigen::MatrixXd u;                   // eigenvectors of S_W
  Eigen::VectorXd sigma;               // sigma_k after clamping
  std::vector<std::uint64_t> sigma_patterns;
  Eigen::VectorXd sigma_readout;       // sigma value decoded from each pattern
  Eigen::Index clamped = 0;
  std::map<std::string, QuantumState> snapshots;
};

/// |psi_T> ~ sum_i |i> C1 S_W^{1/2} x_i: phase estimation of e^{-i S_W^{1/2} t},
/// a sigma-controlled rotation, uncomputation and post-selection.
inline IntermediateResult prepare_intermediate(const Dataset& ds,
                                               const ScatterModel& model,
                                               const PipelineConfig& cfg) {
  cfg.validate();
  const auto cs = clamp_spectrum(model.sw, cfg.within_clamp());
  const Eigen::Index dim = cs.eig.size();
  IntermediateResult r{QuantumState::zero(RegisterLayout({{"empty", 1}})), {}};
  r.u = cs.eig.vectors;
  r.clamped = cs.clamped;
  r.sigma = cs.effective.cwiseMax(0.0).cwiseSqrt();
  r.sigma_readout.resize(dim);
  double top = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto p = phase_readout(r.sigma[k], cfg.t_evolution, cfg.sigma_bits);
    r.sigma_patterns.push_back(p);
    r.sigma_readout[k] = readout_value(p, cfg.t_evolution, cfg.sigma_bits);
    top = std::max(top, r.sigma_readout[k]);
  }
  if (!(top > 0.0)) {
    throw NumericalError("every sigma readout is zero; increase sigma-bits");
  }
  r.c1 = cfg.c1.value_or(1.0 / top);
  if (r.c1 * top > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "c1 = " << r.c1 << " times largest sigma " << top
       << " exceeds 1; the rotation amplitude would be unphysical";
    throw ConfigError(os.str());
  }
  auto snap = [&](const std::string& name, const QuantumState& s) {
    if (cfg.keep_snapshots) r.snapshots.insert_or_assign(name, s);
  };

  QuantumState s = prepare_psi_x(ds);
  snap("psi_x", s);
  s = append_register(s, {"sigma", cfg.sigma_bits});
  s = apply_eigenphase_qpe(std::move(s), "feature", "sigma", r.u, r.sigma_patterns);
  snap("phi1", s);
  s = append_register(s, {"rotation", 1});
  const double c1 = r.c1;
  const double t = cfg.t_evolution;
  const int bits = cfg.sigma_bits;
  s = apply_value_controlled(std::move(s), "sigma", "rotation",
                             [&](std::uint64_t m) {
                               const double a =
                                   std::min(1.0, c1 * readout_value(m, t, bits));
                               const double b = std::sqrt(1.0 - a * a);
                               Eigen::Matrix2cd g;
                               g << b, -a, a, b;
                               return g;
                             });
  snap("phi2", s);
  s = apply_eigenphase_qpe(std::move(s), "feature", "sigma", r.u, r.sigma_patterns);
  s = discard_register(s, "sigma");
  snap("phi3", s);
  auto [post, rec] = postselect(s, "rotation", 1);
  r.record = rec;
  r.psi_t = discard_register(post, "rotation");
  snap("psi_t", r.psi_t);
  return r;
}

struct BranchResult {
  QuantumState state;        // registers index, feature, lambda
  MeasurementRecord record;  // signal = 1, probability p2
  std::vector<std::uint64_t> patterns;  // readout of every eigenvector of rho
  std::vector<Circuit> circuits;        // branch rounds, j = 1..d
  std::vector<std::string> warnings;
  std::map<std::string, QuantumState> snapshots;
};

/// Checks that the d branch circuits can tell their components apart and
/// that an index written by an earlier branch never triggers a later one.
inline std::vector<std::string> check_branch_patterns(
    const std::vector<std::uint64_t>& patterns, int d) {
  std::vector<std::string> warnings;
  for (int j = 0; j < d; ++j) {
    const auto pj = patterns[static_cast<std::size_t>(j)];
    if (pj == 0) {
      throw PipelineError("branch ambiguity: component " + std::to_string(j + 1) +
                          " reads out as zero at L bits (increase L)");
    }
    for (int k = j + 1; k < d; ++k) {
      if (patterns[static_cast<std::size_t>(k)] == pj) {
        throw PipelineError(
            "branch ambiguity: indistinguishable eigenvalues at L bits "
            "(components " + std::to_string(j + 1) + " and " +
            std::to_string(k + 1) + "; increase L)");
      }
      // index j written by U(lambda_{j+1}) must not match a later pattern
      if (patterns[static_cast<std::size_t>(k)] == static_cast<std::uint64_t>(j)) {
        throw PipelineError(
            "branch ambiguity: index " + std::to_string(j) +
            " aliases the eigenvalue pattern of component " +
            std::to_string(k + 1) + " (increase L)");
      }
    }
  }
  for (std::size_t k = static_cast<std::size_t>(d); k < patterns.size(); ++k) {
    for (int j = 0; j < d; ++j) {
      if (patterns[k] == patterns[static_cast<std::size_t>(j)]) {
        warnings.push_back("non-principal component " + std::to_string(k + 1) +
                           " shares the L-bit pattern of component " +
                           std::to_string(j + 1) + " and leaks into its branch");
      }
    }
  }
  return warnings;
}

/// One branch round on local qubits [lambda L | flag | signal]. U(lambda)
/// marks the matching branch on a fresh flag, the flag is merged into the
/// shared signal and then uncomputed from the index now held in the lambda
/// register, so branches marked in earlier rounds are left untouched.
inline Circuit branch_round(std::uint64_t lambda_bits, std::uint64_t index_bits,
                            int L, int Q) {
  const Circuit u = build_u_lambda(lambda_bits, index_bits, L, Q);
  const int flag = L;
  const int signal = L + 1;
  Circuit c(L + 2, "branch[" + std::to_string(index_bits) + "]");
  for (const auto& g : u.gates()) c.add(g);
  c.add(Gate::cx(flag, signal));
  std::vector<int> zeros;
  std::vector<int> controls{signal};
  for (int q = 0; q < L; ++q) {
    controls.push_back(q);
    if (bit_of(index_bits, L - q) == 0) zeros.push_back(q);
  }
  for (int z : zeros) c.add(Gate::x(z));
  c.add(Gate::mcx(controls, flag));
  for (int z : zeros) c.add(Gate::x(z));
  return c;
}

/// Phase estimation of e^{-i rho t} into an L-bit register, the d branch
/// rounds on a shared signal qubit, and post-selection on it.
inline BranchResult branch_and_intercept(const QuantumState& psi_t,
                                         const ShadowSpectrum& spec,
                                         const SymMatrix& rho,
                                         const PipelineConfig& cfg) {
  cfg.validate();
  const int L = cfg.pe_bits;
  const int d = spec.d;
  check_index_width(d, L);
  const int Q = ceil_log2(d);
  if (rho.dim() != spec.vectors.rows()) {
    throw NumericalError("rho and shadow spectrum dimensions differ");
  }
  BranchResult r{psi_t, {}};
  for (Eigen::Index j = 0; j < spec.values.size(); ++j) {
    r.patterns.push_back(phase_readout(spec.values[j], cfg.t_evolution, L));
  }
  r.warnings = check_branch_patterns(r.patterns, d);
  auto snap = [&](const std::string& name, const QuantumState& s) {
    if (cfg.keep_snapshots) r.snapshots.insert_or_assign(name, s);
  };

  QuantumState s = append_register(psi_t, {"lambda", L});
  s = apply_eigenphase_qpe(std::move(s), "feature", "lambda", spec.vectors, r.patterns);
  snap("psi1", s);
  s = append_register(s, {"signal", 1});
  for (int j = 0; j < d; ++j) {
    s = append_register(s, {"flag", 1});
    std::vector<int> map = s.layout().qubits("lambda");
    map.push_back(s.layout().offset("flag"));
    map.push_back(s.layout().offset("signal"));
    r.circuits.push_back(branch_round(r.patterns[static_cast<std::size_t>(j)],
                                      static_cast<std::uint64_t>(j), L, Q));
    s = apply_circuit(std::move(s), r.circuits.back(), map);
    s = discard_register(s, "flag");
  }
  snap("psi2", s);
  auto [post, rec] = postselect(s, "signal", 1);
  r.record = rec;
  r.state = discard_register(post, "signal");
  snap("psi3", r.state);
  return r;
}

struct ReplacementResult {
  QuantumState psi_y;  // registers index, lambda (holding j - 1)
  Circuit u_v;         // the bare replacement circuit of the first round
  std::vector<QuantumState> rounds_marked;
  std::vector<QuantumState> rounds_cleared;
  std::optional<QuantumState> after_rounds;
};

/// One replacement round for component k (0-based) on local qubits
/// [feature q | copy q | flag | signal | lambda L]. U_v runs only where the
/// shared signal is still 0; its flag is merged into the signal and then
/// uncomputed from the index stored in the lambda register.
inline Circuit replacement_round(int k, const Eigen::MatrixXd& basis, int q, int L) {
  const int flag = 2 * q;
  const int signal = 2 * q + 1;
  const int width = 2 * q + 2 + L;
  Circuit c(width, "replacement[" + std::to_string(k) + "]");
  c.add(Gate::x(signal));
  c.append(controlled_by(build_u_v(k, basis, q), signal, width));
  c.add(Gate::x(signal));
  c.add(Gate::cx(flag, signal));
  std::vector<int> zeros;
  std::vector<int> controls{signal};
  for (int b = 0; b < L; ++b) {
    const int qubit = 2 * q + 2 + b;
    controls.push_back(qubit);
    if (((static_cast<std::uint64_t>(k) >> (L - 1 - b)) & 1U) == 0) zeros.push_back(qubit);
  }
  for (int z : zeros) c.add(Gate::x(z));
  c.add(Gate::mcx(controls, flag));
  for (int z : zeros) c.add(Gate::x(z));
  return c;
}

/// Clears the |v_j> register round by round and returns
/// |psi_Y> = sum_{i, j<=d} y_ij |i>|j-1> / |Y|_F.
inline ReplacementResult replacement(const QuantumState& psi,
                                     const ShadowSpectrum& spec,
                                     const PipelineConfig& cfg) {
  const int q = psi.layout().at("feature").qubits;
  const int L = psi.layout().at("lambda").qubits;
  const Eigen::MatrixXd v = padded_basis(spec.vectors, q);
  ReplacementResult r{psi, build_u_v(0, spec.vectors, q), {}, {}, {}};
  QuantumState s = append_register(psi, {"signal", 1});
  for (int k = 0; k < spec.d; ++k) {
    s = append_register(s, {"copy", q}, Amplitudes(v.col(k).cast<cplx>()));
    s = append_register(s, {"flag", 1});
    const auto& lay = s.layout();
    std::vector<int> map = lay.qubits("feature");
    for (int b : lay.qubits("copy")) map.push_back(b);
    map.push_back(lay.offset("flag"));
    map.push_back(lay.offset("signal"));
    for (int b : lay.qubits("lambda")) map.push_back(b);
    s = apply_circuit(std::move(s), replacement_round(k, spec.vectors, q, L), map);
    if (cfg.keep_snapshots) r.rounds_marked.push_back(s);
    s = discard_register(s, "flag");
    s = discard_register(s, "copy");
    if (cfg.keep_snapshots) r.rounds_cleared.push_back(s);
  }
  if (cfg.keep_snapshots) r.after_rounds = s;
  s = discard_register(s, "feature");
  r.psi_y = discard_register(s, "signal");
  return r;
}

/// M x d matrix of |psi_Y> amplitudes at (|i>, |j-1>), padding excluded.
inline CMatrix reduced_amplitudes(const QuantumState& psi_y, Eigen::Index rows,
                                  int d) {
  CMatrix out(rows, d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (int j = 0; j < d; ++j) {
      out(i, j) = psi_y.amplitude(
          {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
    }
  }
  return out;
}

/// |<psi_Y|Y / |Y|_F>| up to a global phase and per-column sign. Columns
/// whose eigenvalues agree within 1e-9 are compared as a subspace (nuclear
/// norm of the block overlap), since their basis is not unique.
inline double reduced_fidelity(const CMatrix& amps, const Eigen::MatrixXd& y,
                               const Eigen::VectorXd& values) {
  if (amps.rows() != y.rows() || amps.cols() != y.cols()) {
    throw NumericalError("reduced state and oracle shapes differ");
  }
  const double yn = y.norm();
  if (!(yn > 0.0)) throw NumericalError("oracle projection is identically zero");
  Eigen::Index ri = 0, ci = 0;
  amps.cwiseAbs().maxCoeff(&ri, &ci);
  const cplx lead = amps(ri, ci);
  const cplx phase = std::abs(lead) > 0.0 ? std::conj(lead) / std::abs(lead) : cplx{1.0};
  const Eigen::MatrixXd re = (amps * phase).real();
  const Eigen::MatrixXd o = y / yn;
  double f = 0.0;
  Eigen::Index start = 0;
  const Eigen::Index d = y.cols();
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && std::abs(values[end - 1] - values[end]) < 1e-9) ++end;
    const Eigen::MatrixXd overlap =
        re.middleCols(start, end - start).transpose() * o.middleCols(start, end - start);
    f += Eigen::JacobiSVD<Eigen::MatrixXd>(overlap).singularValues().sum();
    start = end;
  }
  return f;
}

struct PipelineReport {
  int d = 0;
  int L = 0;
  int Q = 0;
  int sigma_bits = 0;
  double alpha = 0.0;
  double ridge = 0.0;
  double c1 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double fidelity_pipeline_oracle = 0.0;
  double fidelity_lda = 0.0;
  std::int64_t repetitions_p1 = 0;
  std::int64_t repetitions_p2 = 0;
  bool sigma_clamping_active = false;
  bool p1_bound_holds = false;  // p1 >= 1 / kappa_sigma^2
  bool p2_bound_holds = false;  // p2 >= d / D
  Eigen::VectorXd lambda;
  std::vector<std::uint64_t> lambda_readouts;
  std::vector<std::uint64_t> sigma_readouts;
  std::map<std::string, GateCount> gate_counts;
  std::map<std::string, double> timing_ms;
  std::vector<std::string> warnings;
};

struct FullRun {
  QuantumState psi_y;
  PipelineReport report;
  ShadowExtraction shadow;
  Eigen::MatrixXd y_pipeline;
  Eigen::MatrixXd y_lda;
};

namespace detail {

template <class F>
auto staged(const char* stage, std::map<std::string, double>& timing, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto out = f();
    timing[stage] = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return out;
  } catch (Error& e) {
    e.set_stage(stage);
    throw;
  }
}

inline std::int64_t repetitions(double p) {
  return static_cast<std::int64_t>(std::ceil(1.0 / std::sqrt(p) - 1e-12));
}

}  // namespace detail

/// Shadow extraction, intermediate state, branch/interception and
/// replacement, with fidelities against both classical projections.
inline FullRun run_full(const Dataset& ds, const PipelineConfig& cfg) {
  std::map<std::string, double> timing;
  auto shadow = detail::staged("extract_shadow", timing, [&] {
    return extract_shadow(ds, cfg);
  });
  const auto& spec = shadow.spectrum;
  auto inter = detail::staged("prepare_intermediate", timing, [&] {
    return prepare_intermediate(ds, shadow.model, cfg);
  });
  auto branch = detail::staged("branch_and_intercept", timing, [&] {
    return branch_and_intercept(inter.psi_t, spec, shadow.rho, cfg);
  });
  auto repl = detail::staged("replacement", timing, [&] {
    return replacement(branch.state, spec, cfg);
  });

  FullRun out{repl.psi_y, {}, shadow, {}, {}};
  auto& rep = out.report;
  detail::staged("oracle", timing, [&] {
    out.y_pipeline = project_pipeline_oracle(ds, shadow.model, spec, cfg.within_clamp());
    out.y_lda = project_lda(ds, shadow.model, spec, cfg.within_clamp());
    const CMatrix amps = reduced_amplitudes(repl.psi_y, ds.rows(), spec.d);
    rep.fidelity_pipeline_oracle =
        std::min(1.0, reduced_fidelity(amps, out.y_pipeline, spec.values));
    rep.fidelity_lda = std::min(1.0, reduced_fidelity(amps, out.y_lda, spec.values));
    return 0;
  });
  rep.d = spec.d;
  rep.L = cfg.pe_bits;
  rep.Q = ceil_log2(spec.d);
  rep.sigma_bits = cfg.sigma_bits;
  rep.alpha = shadow.model.alpha;
  rep.ridge = shadow.model.ridge;
  rep.c1 = inter.c1;
  rep.p1 = inter.record.probability;
  rep.p2 = branch.record.probability;
  rep.repetitions_p1 = detail::repetitions(rep.p1);
  rep.repetitions_p2 = detail::repetitions(rep.p2);
  rep.sigma_clamping_active = inter.clamped > 0;
  rep.p1_bound_holds = rep.p1 >= (1.0 - 1e-9) / (cfg.kappa_sigma * cfg.kappa_sigma);
  rep.p2_bound_holds =
      rep.p2 >= static_cast<double>(spec.d) / static_cast<double>(ds.features());
  rep.lambda = spec.values;
  rep.lambda_readouts = shadow.readouts;
  rep.sigma_readouts = inter.sigma_patterns;
  for (std::size_t j = 0; j < branch.circuits.size(); ++j) {
    rep.gate_counts["U_lambda_" + std::to_string(j + 1)] =
        build_u_lambda(branch.patterns[j], j, cfg.pe_bits, ceil_log2(spec.d)).gate_count();
    rep.gate_counts["branch_round_" + std::to_string(j + 1)] = branch.circuits[j].gate_count();
  }
  rep.gate_counts["U_v"] = repl.u_v.gate_count();
  rep.gate_counts["U_v_comparator"] = u_v_comparator(qubits_for(ds.features())).gate_count();
  rep.timing_ms = timing;
  rep.warnings = shadow.warnings;
  rep.warnings.insert(rep.warnings.end(), branch.warnings.begin(), branch.warnings.end());
  if (!rep.p2_bound_holds) {
    rep.warnings.push_back("p2 below the d/D reference bound");
  }
  return out;
}

}  // namespace qldadr
