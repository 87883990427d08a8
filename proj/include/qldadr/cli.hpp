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
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qldadr/error.hpp"
#include "qldadr/lda.hpp"
#include "qldadr/pipeline.hpp"

namespace qldadr::cli {

enum class Mode { full, classical_only, circuits_only };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::full: return "full";
    case Mode::classical_only: return "classical-only";
    case Mode::circuits_only: return "circuits-only";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "full") return Mode::full;
  if (s == "classical-only") return Mode::classical_only;
  if (s == "circuits-only") return Mode::circuits_only;
  throw ConfigError("unknown mode '" + s + "' (full, classical-only, circuits-only)");
}

struct RunSpec {
  std::string input_path;
  std::string label_column;  // header name or 0-based index; empty = last column
  std::string output_path;
  Mode mode = Mode::full;
  PipelineConfig config;
  std::uint64_t seed = 1;
};

struct LoadedData {
  Dataset dataset;
  std::string label_column;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;  // label_names[c - 1] is class c
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(b, e - b + 1);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

inline std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
      cell += ch;
    } else if (ch == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

inline std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace detail

/// Reads a CSV with a header row. Labels are remapped to 1..n in order of
/// first appearance.
inline LoadedData load_csv(const std::string& path,
                           const std::string& label_column = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!detail::trim(line).empty()) {
      header = detail::split_row(line);
      break;
    }
  }
  if (header.empty()) throw DataError("input file '" + path + "' is empty");
  if (header.size() < 2) {
    throw DataError("input needs a label column and at least one feature column");
  }

  std::size_t label_idx = header.size() - 1;
  if (!label_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), label_column);
    if (it != header.end()) {
      label_idx = static_cast<std::size_t>(it - header.begin());
    } else if (const auto n = detail::parse_number(label_column);
               n && *n >= 0 && *n == std::floor(*n) &&
               *n < static_cast<double>(header.size())) {
      label_idx = static_cast<std::size_t>(*n);
    } else {
      throw DataError("label column '" + label_column + "' not found in header");
    }
  }

  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_idx) names.push_back(header[c]);
  }
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::map<std::string, int> remap;
  std::vector<std::string> label_names;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_row(line);
    if (cells.size() != header.size()) {
      std::ostringstream os;
      os << "row " << line_no << " has " << cells.size() << " cells, header has "
         << header.size();
      throw DataError(os.str());
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_idx) continue;
      const auto v = detail::parse_number(cells[c]);
      if (!v) {
        std::ostringstream os;
        os << "non-numeric feature cell '" << cells[c] << "' at row " << line_no
           << ", column " << (c + 1) << " (" << header[c] << ")";
        throw DataError(os.str());
      }
      row.push_back(*v);
    }
    const auto& lab = cells[label_idx];
    auto [it, fresh] = remap.emplace(lab, static_cast<int>(remap.size()) + 1);
    if (fresh) label_names.push_back(lab);
    labels.push_back(it->second);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("input file '" + path + "' has no data rows");
  if (remap.size() < 2) {
    throw DataError("input has a single class; LDA needs at least two");
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return {Dataset(std::move(x), std::move(labels)), header[label_idx],
          std::move(names), std::move(label_names)};
}

inline void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& y,
                             const std::string& prefix) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.precision(17);
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    out << (j ? "," : "") << prefix << (j + 1);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      out << (j ? "," : "") << y(i, j);
    }
    out << '\n';
  }
}

/// Output path with `suffix` inserted before the extension.
inline std::string sibling_path(const std::string& output, const std::string& suffix) {
  std::filesystem::path p(output);
  const auto stem = p.stem().string();
  return (p.parent_path() / (stem + suffix + ".csv")).string();
}

inline nlohmann::json config_json(const RunSpec& spec, double alpha) {
  const auto& c = spec.config;
  nlohmann::json j{{"mode", to_string(spec.mode)},
                   {"pe_bits", c.pe_bits},
                   {"sigma_bits", c.sigma_bits},
                   {"dims_threshold", c.threshold},
                   {"kappa_lambda", c.kappa_lambda},
                   {"kappa_sigma", c.kappa_sigma},
                   {"alpha", alpha},
                   {"t_evolution", c.t_evolution},
                   {"seed", spec.seed}};
  j["c1"] = c.c1 ? nlohmann::json(*c.c1) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::VectorXd r = m.row(i).transpose();
    rows.push_back(vector_json(r));
  }
  return rows;
}

/// Largest objective over `samples` random unit directions.
inline double random_direction_objective(const ScatterModel& model,
                                         std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd w(model.dim());
    for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = g(rng);
    w.normalize();
    best = std::max(best, discriminant_objective(model, w));
  }
  return best;
}

/// Executes one run and writes its report. Returns the process exit code.
inline int run(const RunSpec& spec, std::ostream& err = std::cerr) {
  nlohmann::json report;
  std::map<std::string, double> timing;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    LoadedData data = [&] {
      try {
        return load_csv(spec.input_path, spec.label_column);
      } catch (Error& e) {
        e.set_stage("load_csv");
        throw;
      }
    }();
    timing["load_csv"] = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    const Dataset& ds = data.dataset;
    const auto& cfg = spec.config;
    try {
      cfg.validate();
    } catch (Error& e) {
      e.set_stage("config");
      throw;
    }
    const double alpha = cfg.alpha_for(ds);
    PipelineConfig run_cfg = cfg;
    run_cfg.alpha = alpha;

    nlohmann::json labels = nlohmann::json::array();
    for (std::size_t c = 0; c < data.label_names.size(); ++c) {
      labels.push_back({{"label", data.label_names[c]}, {"class", c + 1}});
    }
    report["config"] = config_json(spec, alpha);
    report["input"] = {{"path", std::filesystem::path(spec.input_path).filename().string()},
                       {"rows", ds.rows()},
                       {"features", ds.features()},
                       {"classes", ds.classes()},
                       {"label_column", data.label_column},
                       {"label_map", labels}};

    if (spec.mode == Mode::full) {
      FullRun r = run_full(ds, run_cfg);
      const auto& rep = r.report;
      report["d"] = rep.d;
      report["lambda"] = vector_json(rep.lambda);
      report["lambda_readouts"] = rep.lambda_readouts;
      report["sigma_readouts"] = rep.sigma_readouts;
      report["p1"] = rep.p1;
      report["p2"] = rep.p2;
      report["c1"] = rep.c1;
      report["ridge"] = rep.ridge;
      report["repetition_estimates"] = {{"p1", rep.repetitions_p1},
                                        {"p2", rep.repetitions_p2}};
      report["bounds"] = {{"sigma_clamping_active", rep.sigma_clamping_active},
                          {"p1_at_least_inverse_kappa_sigma_sq", rep.p1_bound_holds},
                          {"p2_at_least_d_over_D", rep.p2_bound_holds}};
      report["fidelity_pipeline_oracle"] = rep.fidelity_pipeline_oracle;
      report["fidelity_lda"] = rep.fidelity_lda;
      nlohmann::json gc = nlohmann::json::object();
      for (const auto& [name, g] : rep.gate_counts) gc[name] = to_json(g);
      report["gate_counts"] = gc;
      report["warnings"] = rep.warnings;
      for (const auto& [k, v] : rep.timing_ms) timing[k] = v;
    } else {
      ShadowExtraction sh = [&] {
        try {
          return extract_shadow(ds, run_cfg);
        } catch (Error& e) {
          e.set_stage("extract_shadow");
          throw;
        }
      }();
      const auto& spec_l = sh.spectrum;
      report["d"] = spec_l.d;
      report["lambda"] = vector_json(spec_l.values);
      report["lambda_readouts"] = sh.readouts;
      report["ridge"] = sh.model.ridge;
      report["warnings"] = sh.warnings;
      if (spec.mode == Mode::classical_only) {
        const auto clamp = run_cfg.within_clamp();
        const Eigen::MatrixXd yp = project_pipeline_oracle(ds, sh.model, spec_l, clamp);
        const Eigen::MatrixXd y_lda = project_lda(ds, sh.model, spec_l, clamp);
        const Eigen::MatrixXd w = lda_directions(sh.model, spec_l, clamp);
        nlohmann::json objectives = nlohmann::json::array();
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
          objectives.push_back(discriminant_objective(sh.model, w.col(j)));
        }
        report["classical"] = {
            {"directions", matrix_json(w.transpose())},
            {"objectives", objectives},
            {"random_direction_max_objective",
             random_direction_objective(sh.model, spec.seed, 10000)}};
        if (!spec.output_path.empty()) {
          const auto p1 = sibling_path(spec.output_path, "_y_pipeline");
          const auto p2 = sibling_path(spec.output_path, "_y_lda");
          write_matrix_csv(p1, yp, "y");
          write_matrix_csv(p2, y_lda, "y");
          report["classical"]["y_files"] = {
              {"pipeline", std::filesystem::path(p1).filename().string()},
              {"lda", std::filesystem::path(p2).filename().string()}};
        }
      } else {
        const int q = qubits_for(ds.features());
        const int L = run_cfg.pe_bits;
        const int Q = ceil_log2(spec_l.d);
        nlohmann::json gc = nlohmann::json::object();
        nlohmann::json circuits = nlohmann::json::array();
        for (int j = 0; j < spec_l.d; ++j) {
          const auto c = build_u_lambda(sh.readouts[static_cast<std::size_t>(j)],
                                        static_cast<std::uint64_t>(j), L, Q);
          const auto round = branch_round(sh.readouts[static_cast<std::size_t>(j)],
                                          static_cast<std::uint64_t>(j), L, Q);
          gc["U_lambda_" + std::to_string(j + 1)] = to_json(c.gate_count());
          gc["branch_round_" + std::to_string(j + 1)] = to_json(round.gate_count());
          circuits.push_back(to_json(c));
          circuits.push_back(to_json(round));
        }
        const auto uv = build_u_v(0, spec_l.vectors, q);
        gc["U_v"] = to_json(uv.gate_count());
        gc["U_v_comparator"] = to_json(u_v_comparator(q).gate_count());
        circuits.push_back(to_json(uv));
        report["gate_counts"] = gc;
        report["circuits"] = circuits;
      }
    }
    report["status"] = "ok";
    report["timing"] = timing;
  } catch (const Error& e) {
    const std::string stage = e.stage().empty() ? "run" : e.stage();
    err << "error [" << stage << "]: " << e.what() << '\n';
    report["status"] = "error";
    report["error"] = {{"stage", stage},
                       {"message", e.what()},
                       {"exit_code", e.exit_code()}};
    report["timing"] = timing;
    if (!spec.output_path.empty()) {
      std::ofstream out(spec.output_path);
      if (out) out << report.dump(2) << '\n';
    }
    return e.exit_code();
  }
  if (!spec.output_path.empty()) {
    std::ofstream out(spec.output_path);
    if (!out) {
      err << "error [report]: cannot write '" << spec.output_path << "'\n";
      return 3;
    }
    out << report.dump(2) << '\n';
  } else {
    std::cout << report.dump(2) << '\n';
  }
  return 0;
}

}  // namespace qldadr::cli
