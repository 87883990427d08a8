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
#include <random>
#include <set>
#include <vector>

#include "qldadr/lda.hpp"
#include "qldadr/pipeline.hpp"
#include "qldadr/state.hpp"

namespace qldadr::fixtures {

inline Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  return (a + a.transpose()) / 2.0;
}

/// Gaussian clusters around random centroids, each class non-empty.
inline Dataset clusters(Eigen::Index rows, Eigen::Index dim, int classes,
                        std::mt19937_64& rng, double spread = 3.0) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd centers(classes, dim);
  for (Eigen::Index i = 0; i < centers.size(); ++i) centers.data()[i] = spread * g(rng);
  Eigen::MatrixXd x(rows, dim);
  std::vector<int> labels(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) {
    const int c = static_cast<int>(i % classes);
    labels[static_cast<std::size_t>(i)] = c + 1;
    for (Eigen::Index k = 0; k < dim; ++k) x(i, k) = centers(c, k) + g(rng);
  }
  return Dataset(std::move(x), std::move(labels));
}

/// Dataset whose unit-trace within-class scatter is U diag(s) U^T and whose
/// rho equals V diag(lambda) V^T (up to column signs of V).
struct Constructed {
  Dataset data;
  Eigen::VectorXd s;       // eigenvalues of unit-trace S_W (sum 1)
  Eigen::MatrixXd u;
  Eigen::VectorXd lambda;  // descending, sum 1, zeros beyond rank
  Eigen::MatrixXd v;
  int rank = 0;
};

/// Samples x = o + delta_c +/- sqrt(s_k) u_k, one pair per k assigned to the
/// classes round-robin. With alpha = 0 the pairs give S_W exactly; the
/// centroid offsets delta_c = S^{1/2} G e_c with G = [sqrt(lambda_j) v_j]
/// and orthonormal rows of E orthogonal to the class sizes give S_B.
inline Constructed construct(const Eigen::VectorXd& s, const Eigen::VectorXd& lambda,
                             int classes, std::mt19937_64& rng) {
  const Eigen::Index dim = s.size();
  const int rank = static_cast<int>((lambda.array() > 0.0).count());
  if (classes > dim || rank > classes - 1) {
    throw std::invalid_argument("construct: need rank < classes <= dim");
  }
  Constructed out{Dataset(Eigen::MatrixXd::Identity(2, 2), {1, 2}), s,
                  random_orthogonal(dim, rng), lambda, random_orthogonal(dim, rng),
                  rank};
  Eigen::VectorXd sizes = Eigen::VectorXd::Zero(classes);
  for (Eigen::Index k = 0; k < dim; ++k) sizes[k % classes] += 2.0;

  std::normal_distribution<double> g;
  Eigen::MatrixXd f(classes, rank + 1);
  f.col(0) = sizes;
  for (Eigen::Index i = 0; i < classes; ++i) {
    for (int j = 1; j <= rank; ++j) f(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(f);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(classes, rank + 1);
  const Eigen::MatrixXd e = q.rightCols(rank).transpose();

  const Eigen::MatrixXd root = out.u * s.cwiseSqrt().asDiagonal() * out.u.transpose();
  Eigen::MatrixXd gmat(dim, rank);
  for (int j = 0; j < rank; ++j) gmat.col(j) = std::sqrt(lambda[j]) * out.v.col(j);
  const Eigen::MatrixXd delta = root * gmat * e;  // dim x classes

  std::uniform_real_distribution<double> off(1.0, 2.0);
  Eigen::VectorXd o(dim);
  for (Eigen::Index k = 0; k < dim; ++k) o[k] = off(rng);
  Eigen::MatrixXd x(2 * dim, dim);
  std::vector<int> labels;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const int c = static_cast<int>(k % classes);
    const Eigen::VectorXd a = std::sqrt(s[k]) * out.u.col(k);
    x.row(2 * k) = (o + delta.col(c) + a).transpose();
    x.row(2 * k + 1) = (o + delta.col(c) - a).transpose();
    labels.push_back(c + 1);
    labels.push_back(c + 1);
  }
  out.data = Dataset(std::move(x), std::move(labels));
  return out;
}

/// `rank` distinct positive integers >= min_value summing to total, descending.
inline std::vector<int> dyadic_parts(int rank, int total, int min_value,
                                     double max_ratio, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> w(static_cast<std::size_t>(rank));
    double sum = 0.0;
    for (auto& x : w) sum += (x = u(rng));
    std::vector<int> m;
    int acc = 0;
    for (int j = 0; j + 1 < rank; ++j) {
      m.push_back(static_cast<int>(std::lround(w[static_cast<std::size_t>(j)] / sum * total)));
      acc += m.back();
    }
    m.push_back(total - acc);
    std::sort(m.rbegin(), m.rend());
    const std::set<int> uniq(m.begin(), m.end());
    if (static_cast<int>(uniq.size()) != rank || m.back() < min_value) continue;
    if (m.front() > max_ratio * m.back()) continue;
    return m;
  }
  throw std::runtime_error("dyadic_parts: no admissible split");
}

/// Spectrum of rho exactly representable in L bits at t = pi.
inline Eigen::VectorXd dyadic_lambda(Eigen::Index dim, int rank, int L,
                                     std::mt19937_64& rng) {
  const int total = 1 << (L - 1);
  const auto m = dyadic_parts(rank, total, rank, 50.0, rng);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < rank; ++j) lambda[j] = m[static_cast<std::size_t>(j)] / double(total);
  return lambda;
}

/// S_W eigenvalues whose square roots are dyadic: uniform 1/4 for D = 4,
/// (3,3,3,3,3,3,3,1)/8 squared for D = 8.
inline Eigen::VectorXd dyadic_within(Eigen::Index dim) {
  Eigen::VectorXd s(dim);
  if (dim == 4) {
    s.setConstant(0.25);
  } else if (dim == 8) {
    s.setConstant(9.0 / 64.0);
    s[7] = 1.0 / 64.0;
  } else {
    throw std::invalid_argument("dyadic_within: D must be 4 or 8");
  }
  return s;
}

/// Random spectrum summing to 1 with consecutive gaps of at least `gap`.
inline Eigen::VectorXd gapped_spectrum(Eigen::Index dim, int rank, double gap,
                                       double floor, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    for (int j = 0; j < rank; ++j) w[j] = floor + u(rng);
    w.head(rank) /= w.head(rank).sum();
    std::sort(w.data(), w.data() + rank, std::greater<>());
    bool ok = w[rank - 1] >= floor;
    for (int j = 0; j + 1 < rank; ++j) ok = ok && (w[j] - w[j + 1] >= gap);
    if (ok) return w;
  }
  throw std::runtime_error("gapped_spectrum: no admissible draw");
}


inline Constructed dyadic_fixture(Eigen::Index dim, int classes, int rank, int L,
                                  std::mt19937_64& rng) {
  return construct(dyadic_within(dim), dyadic_lambda(dim, rank, L, rng), classes, rng);
}

// ---- closed-form oracles -------------------------------------------------

/// sigma rounded to the grid m / 2^{bits-1} that phase estimation at t = pi
/// can represent.
inline double grid_sigma(double sigma, int bits) {
  const double scale = std::ldexp(1.0, bits - 1);
  return std::round(sigma * scale) / scale;
}

struct WithinRoot {
  Eigen::VectorXd sigma;   // exact square roots
  Eigen::VectorXd grid;    // on the readout grid
  Eigen::MatrixXd u;
  Eigen::MatrixXd root;    // U diag(grid) U^T
  double c1 = 0.0;         // 1 / max grid
};

inline WithinRoot within_root(const ScatterModel& model, int bits) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.sw.matrix());
  WithinRoot w;
  w.u = es.eigenvectors();
  w.sigma = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  w.grid = w.sigma;
  for (Eigen::Index k = 0; k < w.grid.size(); ++k) w.grid[k] = grid_sigma(w.sigma[k], bits);
  w.root = w.u * w.grid.asDiagonal() * w.u.transpose();
  w.c1 = 1.0 / w.grid.maxCoeff();
  return w;
}

/// p1 = sum_{i,k} C1^2 sigma_k^2 (sum_j y_ij beta_jk)^2 / |X|_F^2 with y the
/// full projection onto every v_j and beta_jk = u_k^T S_W^{-1/2} v_j.
inline double closed_p1(const Dataset& ds, const ScatterModel& model,
                        const Eigen::MatrixXd& v, int bits, double c1) {
  const auto w = within_root(model, bits);
  const Eigen::MatrixXd exact_root = w.u * w.sigma.asDiagonal() * w.u.transpose();
  const Eigen::MatrixXd inv_root =
      w.u * w.sigma.cwiseInverse().asDiagonal() * w.u.transpose();
  const Eigen::MatrixXd y = ds.samples() * exact_root * v;
  const Eigen::MatrixXd beta = v.transpose() * inv_root * w.u;  // (j, k)
  double p = 0.0;
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    for (Eigen::Index k = 0; k < w.u.cols(); ++k) {
      double inner = 0.0;
      for (Eigen::Index j = 0; j < v.cols(); ++j) inner += y(i, j) * beta(j, k);
      p += c1 * c1 * w.grid[k] * w.grid[k] * inner * inner;
    }
  }
  return p / ds.samples().squaredNorm();
}

/// p2 = sum_{i, j<=d} y_ij^2 / sum_{i, j} y_ij^2 with y built from the
/// grid-rounded S_W^{1/2}.
inline double closed_p2(const Dataset& ds, const ScatterModel& model,
                        const Eigen::MatrixXd& v, int d, int bits) {
  const auto w = within_root(model, bits);
  const Eigen::MatrixXd y = ds.samples() * w.root * v;
  return y.leftCols(d).squaredNorm() / y.squaredNorm();
}

/// Largest per-amplitude deviation after aligning the global phase.
inline double phase_aligned_gap(const Amplitudes& got, const Amplitudes& want) {
  const cplx overlap = want.dot(got);
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0};
  return (got - phase * want).cwiseAbs().maxCoeff();
}

inline PipelineConfig exact_config(int L, int sigma_bits) {
  PipelineConfig cfg;
  cfg.pe_bits = L;
  cfg.sigma_bits = sigma_bits;
  cfg.threshold = 0.999;
  cfg.alpha = 0.0;
  return cfg;
}

}  // namespace qldadr::fixtures
