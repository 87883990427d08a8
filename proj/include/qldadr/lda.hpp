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
#include <sstream>
#include <string>
#include <vector>

#include "qldadr/error.hpp"
#include "qldadr/linalg.hpp"

namespace qldadr {

/// Labeled samples: one row per sample, class ids 1..n.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd samples, std::vector<int> labels)
      : x_(std::move(samples)), labels_(std::move(labels)) {
    validate();
  }

  const Eigen::MatrixXd& samples() const noexcept { return x_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  Eigen::Index rows() const noexcept { return x_.rows(); }
  Eigen::Index features() const noexcept { return x_.cols(); }
  int classes() const noexcept { return n_; }

  /// Zero-based class index of sample i.
  int class_of(Eigen::Index i) const {
    return labels_[static_cast<std::size_t>(i)] - 1;
  }

 private:
  void validate() {
    if (static_cast<std::size_t>(x_.rows()) != labels_.size()) {
      throw DataError("label count does not match sample rows");
    }
    if (x_.cols() < 2) throw DataError("dataset needs at least 2 features");
    if (!x_.allFinite()) throw DataError("dataset contains non-finite values");
    n_ = labels_.empty() ? 0 : *std::max_element(labels_.begin(), labels_.end());
    if (n_ < 2) throw DataError("dataset needs at least 2 classes");
    if (x_.rows() < n_) throw DataError("fewer samples than classes");
    std::vector<int> seen(static_cast<std::size_t>(n_), 0);
    for (int c : labels_) {
      if (c < 1) throw DataError("class ids must start at 1");
      ++seen[static_cast<std::size_t>(c - 1)];
    }
    for (int c = 0; c < n_; ++c) {
      if (seen[static_cast<std::size_t>(c)] == 0) {
        throw DataError("class " + std::to_string(c + 1) + " has no samples");
      }
    }
    for (Eigen::Index i = 0; i < x_.rows(); ++i) {
      if (x_.row(i).squaredNorm() == 0.0) {
        throw DataError("sample row " + std::to_string(i) +
                        " is all zero and cannot be norm-encoded");
      }
    }
  }

  Eigen::MatrixXd x_;
  std::vector<int> labels_;
  int n_ = 0;
};

/// n x D matrix of class centroids.
inline Eigen::MatrixXd class_centroids(const Dataset& ds) {
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(ds.classes(), ds.features());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(ds.classes());
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    mu.row(ds.class_of(i)) += ds.samples().row(i);
    count[ds.class_of(i)] += 1.0;
  }
  for (int c = 0; c < ds.classes(); ++c) mu.row(c) /= count[c];
  return mu;
}

inline Eigen::VectorXd global_mean(const Dataset& ds) {
  return ds.samples().colwise().mean().transpose();
}

/// Unit-trace scatter operator together with its normalization constant.
struct NormalizedScatter {
  SymMatrix op;
  double norm = 0.0;
};

/// Within-class scatter of the regularized differences
/// d_i = x_i - mu_{c_i} + alpha * 1, normalized by A = sum_i |d_i|^2.
inline NormalizedScatter within_scatter(const Dataset& ds, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("regularization alpha must be finite and >= 0");
  }
  const Eigen::MatrixXd mu = class_centroids(ds);
  const Eigen::Index dim = ds.features();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
  double a = 0.0;
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    const Eigen::VectorXd d = (ds.samples().row(i) - mu.row(ds.class_of(i)))
                                  .transpose()
                                  .array() +
                              alpha;
    s.noalias() += d * d.transpose();
    a += d.squaredNorm();
  }
  if (!(a > 0.0)) throw DataError("degenerate within-class scatter");
  return {SymMatrix::symmetrize(s / a), a};
}

/// Between-class scatter sum_c (mu_c - o)(mu_c - o)^T, normalized by
/// B = sum_c |mu_c - o|^2. Rank is at most n - 1.
inline NormalizedScatter between_scatter(const Dataset& ds) {
  const Eigen::MatrixXd mu = class_centroids(ds);
  const Eigen::VectorXd o = global_mean(ds);
  const Eigen::Index dim = ds.features();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
  double b = 0.0;
  for (int c = 0; c < ds.classes(); ++c) {
    const Eigen::VectorXd g = mu.row(c).transpose() - o;
    s.noalias() += g * g.transpose();
    b += g.squaredNorm();
  }
  if (!(b > 0.0)) throw DataError("no between-class variance");
  return {SymMatrix::symmetrize(s / b), b};
}

/// Smallest admissible eigenvalue of the unit-trace within-class operator.
inline constexpr double kWithinFloor = 1e-8;

struct ScatterModel {
  SymMatrix sw;
  SymMatrix sb;
  double a_norm = 0.0;
  double b_norm = 0.0;
  double alpha = 0.0;
  /// Diagonal ridge added to the unit-trace sw (0 when not needed).
  double ridge = 0.0;
  Eigen::MatrixXd centroids;
  Eigen::VectorXd global_mean;
  int classes = 0;

  Eigen::Index dim() const noexcept { return sw.dim(); }
};

/// Adds eps * I to a unit-trace operator (then renormalizes) so its
/// smallest eigenvalue reaches `floor`. Returns eps, 0 when untouched.
inline double apply_ridge(SymMatrix& sw, double floor = kWithinFloor) {
  const double smallest = sym_eig(sw).values.tail(1)(0);
  if (smallest >= floor) return 0.0;
  const auto dim = static_cast<double>(sw.dim());
  const double eps = (floor - smallest) / (1.0 - floor * dim);
  Eigen::MatrixXd m = sw.matrix();
  m.diagonal().array() += eps;
  sw = SymMatrix::symmetrize(m / m.trace());
  return eps;
}

/// Both scatter operators for a dataset, with the invertibility ridge.
inline ScatterModel build_scatter_model(const Dataset& ds, double alpha) {
  ScatterModel m;
  auto w = within_scatter(ds, alpha);
  auto b = between_scatter(ds);
  m.sw = std::move(w.op);
  m.a_norm = w.norm;
  m.sb = std::move(b.op);
  m.b_norm = b.norm;
  m.alpha = alpha;
  m.ridge = apply_ridge(m.sw);
  m.centroids = class_centroids(ds);
  m.global_mean = global_mean(ds);
  m.classes = ds.classes();
  return m;
}

struct ShadowSpectrum {
  Eigen::VectorXd values;   // descending eigenvalues of rho, sum 1
  Eigen::MatrixXd vectors;  // orthonormal columns v_j
  int d = 0;
  double threshold = 0.95;
  std::vector<std::string> warnings;

  /// First d columns.
  Eigen::MatrixXd kept_vectors() const { return vectors.leftCols(d); }
};

/// Eigenpairs of rho with d the smallest prefix whose cumulative eigenvalue
/// mass reaches `threshold`, capped at n - 1.
inline ShadowSpectrum select_dimension(const EigenDecomposition& eig,
                                       int classes, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ConfigError("dimension threshold must lie in (0, 1]");
  }
  ShadowSpectrum s;
  s.values = eig.values.cwiseMax(0.0);
  s.vectors = eig.vectors;
  s.threshold = threshold;
  const int cap = std::min<int>(classes - 1, static_cast<int>(eig.size()));
  double sum = 0.0;
  int d = 0;
  for (Eigen::Index j = 0; j < s.values.size(); ++j) {
    sum += s.values[j];
    if (sum >= threshold - 1e-12) {
      d = static_cast<int>(j) + 1;
      break;
    }
  }
  if (d == 0 || d > cap) {
    std::ostringstream os;
    os << "threshold " << threshold << " unreachable within n-1 = " << cap
       << " components; using d = " << cap;
    s.warnings.push_back(os.str());
    d = cap;
  }
  s.d = d;
  return s;
}

inline ShadowSpectrum solve_shadow(const ScatterModel& model,
                                   const ClampPolicy& clamp, double threshold) {
  const SymMatrix rho = build_rho(model.sw, model.sb, clamp);
  return select_dimension(sym_eig(rho), model.classes, threshold);
}

/// y_ij = v_j^T S_W^{1/2} x_i for j <= d: the coefficients the quantum
/// pipeline encodes.
inline Eigen::MatrixXd project_pipeline_oracle(const Dataset& ds,
                                               const ScatterModel& model,
                                               const ShadowSpectrum& spec,
                                               const ClampPolicy& clamp =
                                                   ClampPolicy{}) {
  const auto root = mat_power_half(model.sw, HalfPower::plus_half, clamp);
  return ds.samples() * root.matrix() * spec.kept_vectors();
}

/// Unit LDA directions omega_j = S_W^{-1/2} v_j / |S_W^{-1/2} v_j|.
inline Eigen::MatrixXd lda_directions(const ScatterModel& model,
                                      const ShadowSpectrum& spec,
                                      const ClampPolicy& clamp = ClampPolicy{}) {
  const auto inv_root = mat_power_half(model.sw, HalfPower::minus_half, clamp);
  Eigen::MatrixXd w = inv_root.matrix() * spec.kept_vectors();
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const double n = w.col(j).norm();
    if (!(n > 0.0)) throw NumericalError("LDA direction vanishes after clamp");
    w.col(j) /= n;
  }
  return w;
}

/// The classical reduced dataset Y = X W with unit LDA directions.
inline Eigen::MatrixXd project_lda(const Dataset& ds, const ScatterModel& model,
                                   const ShadowSpectrum& spec,
                                   const ClampPolicy& clamp = ClampPolicy{}) {
  return ds.samples() * lda_directions(model, spec, clamp);
}

/// Rayleigh quotient (w^T S_B w) / (w^T S_W w).
inline double discriminant_objective(const ScatterModel& model,
                                     const Eigen::VectorXd& w) {
  if (w.size() != model.dim()) {
    throw NumericalError("direction dimension does not match scatter model");
  }
  if (std::abs(w.norm() - 1.0) > 1e-9) {
    throw NumericalError("discriminant direction must be a unit vector");
  }
  const double den = w.dot(model.sw.matrix() * w);
  if (!(den > 0.0)) {
    throw NumericalError("zero within-class variance along direction");
  }
  return w.dot(model.sb.matrix() * w) / den;
}

}  // namespace qldadr
