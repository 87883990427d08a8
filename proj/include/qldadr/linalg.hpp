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
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "qldadr/error.hpp"

namespace qldadr {

/// Absolute tolerance for accepting a matrix as symmetric.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Dense real symmetric matrix. Construction validates symmetry and stores
/// the symmetrized (A + A^T) / 2 so later decompositions see exact symmetry.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Validates |a_ij - a_ji| <= 1e-12 and throws NumericalError naming the
  /// worst offending entry pair otherwise.
  explicit SymMatrix(const Eigen::MatrixXd& a) : m_(validated(a)) {}

  /// Symmetrizes without the absolute check. Used for products of symmetric
  /// factors, where rounding asymmetry scales with the operand norms.
  static SymMatrix symmetrize(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() < 1) {
      throw NumericalError("symmetric matrix must be square with dim >= 1");
    }
    SymMatrix s;
    s.m_ = 0.5 * (a + a.transpose());
    return s;
  }

  static SymMatrix identity(Eigen::Index dim) {
    return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
  }
  static SymMatrix diagonal(const Eigen::VectorXd& d) {
    return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
  }

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index a, Eigen::Index b) const { return m_(a, b); }
  double trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.norm(); }

 private:
  static Eigen::MatrixXd validated(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() < 1) {
      throw NumericalError("symmetric matrix must be square with dim >= 1");
    }
    double worst = 0.0;
    Eigen::Index wa = 0, wb = 0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = r + 1; c < a.cols(); ++c) {
        const double gap = std::abs(a(r, c) - a(c, r));
        if (!(gap <= worst)) {
          worst = gap;
          wa = r;
          wb = c;
        }
      }
    }
    if (!(worst <= kSymmetryTolerance)) {
      std::ostringstream os;
      os << "matrix is not symmetric: entries (" << wa << "," << wb << ")="
         << a(wa, wb) << " and (" << wb << "," << wa << ")=" << a(wb, wa)
         << " differ by " << worst;
      throw NumericalError(os.str());
    }
    return 0.5 * (a + a.transpose());
  }

  Eigen::MatrixXd m_;
};

/// Eigenpairs in descending eigenvalue order; column k of `vectors` pairs
/// with `values[k]`.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  Eigen::Index size() const noexcept { return values.size(); }

  Eigen::MatrixXd reconstruct() const {
    return vectors * values.asDiagonal() * vectors.transpose();
  }
};

enum class ClampMode { discard, floor };

/// Effective condition number: eigenvalues below max / kappa are either
/// dropped (discard) or raised to max / kappa (floor) before powering.
class ClampPolicy {
 public:
  explicit ClampPolicy(double kappa = 100.0, ClampMode mode = ClampMode::discard)
      : kappa_(kappa), mode_(mode) {
    if (!std::isfinite(kappa) || !(kappa > 1.0)) {
      std::ostringstream os;
      os << "clamp kappa must be finite and > 1, got " << kappa;
      throw ConfigError(os.str());
    }
  }

  double kappa() const noexcept { return kappa_; }
  ClampMode mode() const noexcept { return mode_; }
  double cutoff(double largest) const noexcept { return largest / kappa_; }

 private:
  double kappa_;
  ClampMode mode_;
};

/// Sign convention shared by every eigenvector in the library: the entry of
/// largest magnitude is made positive (first such entry on exact ties).
inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < v.size(); ++k) {
    if (std::abs(v[k]) > std::abs(v[best]) + 1e-14) best = k;
  }
  if (v[best] < 0.0) v = -v;
}

/// Full spectrum of a symmetric matrix, descending. Equal eigenvalues keep
/// the solver's relative order (stable sort).
inline EigenDecomposition sym_eig(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver failed to converge");
  }
  const Eigen::Index n = a.dim();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return ev[l] > ev[r]; });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values[k] = ev[src];
    out.vectors.col(k) = solver.eigenvectors().col(src);
    fix_sign(out.vectors.col(k));
  }
  return out;
}

/// Overload for unvalidated input; rejects asymmetric matrices.
inline EigenDecomposition sym_eig(const Eigen::MatrixXd& a) {
  return sym_eig(SymMatrix(a));
}

enum class HalfPower { plus_half, minus_half };

/// Spectral clamp outcome for a PSD matrix: per-eigenvalue effective values
/// after clamping (0 for discarded directions) and how many were clamped.
struct ClampedSpectrum {
  EigenDecomposition eig;
  Eigen::VectorXd effective;  // eigenvalues after clamp, before powering
  Eigen::Index clamped = 0;
  double cutoff = 0.0;
};

inline ClampedSpectrum clamp_spectrum(const SymMatrix& a,
                                      const ClampPolicy& clamp) {
  ClampedSpectrum out;
  out.eig = sym_eig(a);
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  const double smallest = out.eig.values[out.eig.size() - 1];
  if (smallest < -1e-10 * scale) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite: smallest eigenvalue "
       << smallest;
    throw NumericalError(os.str());
  }
  const double largest = out.eig.values[0];
  if (!(largest > 0.0)) {
    throw NumericalError("matrix entirely below condition floor");
  }
  out.cutoff = clamp.cutoff(largest);
  out.effective = out.eig.values;
  for (Eigen::Index k = 0; k < out.eig.size(); ++k) {
    if (out.eig.values[k] < out.cutoff) {
      ++out.clamped;
      out.effective[k] =
          clamp.mode() == ClampMode::discard ? 0.0 : out.cutoff;
    }
  }
  return out;
}

/// Matrix square root or inverse square root through the eigendecomposition,
/// with eigenvalues below max / kappa clamped per the policy.
inline SymMatrix mat_power_half(const SymMatrix& a, HalfPower sign,
                                const ClampPolicy& clamp) {
  const auto spec = clamp_spectrum(a, clamp);
  Eigen::VectorXd g(spec.effective.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const double s = spec.effective[k];
    if (s <= 0.0) {
      g[k] = 0.0;
    } else {
      g[k] = sign == HalfPower::plus_half ? std::sqrt(s) : 1.0 / std::sqrt(s);
    }
  }
  const auto& v = spec.eig.vectors;
  return SymMatrix::symmetrize(v * g.asDiagonal() * v.transpose());
}

/// rho = S_W^{-1/2} S_B S_W^{-1/2}, rescaled to unit trace.
inline SymMatrix build_rho(const SymMatrix& sw, const SymMatrix& sb,
                           const ClampPolicy& clamp) {
  if (sw.dim() != sb.dim()) {
    throw NumericalError("scatter operators have mismatched dimensions");
  }
  const auto inv_half = mat_power_half(sw, HalfPower::minus_half, clamp);
  const Eigen::MatrixXd raw =
      inv_half.matrix() * sb.matrix() * inv_half.matrix();
  const double tr = raw.trace();
  if (!(tr > 0.0)) {
    throw NumericalError(
        "between-class scatter vanishes on the retained within-class subspace");
  }
  return SymMatrix::symmetrize(raw / tr);
}

}  // namespace qldadr
