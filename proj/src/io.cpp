#include "so3align/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "so3align/errors.hpp"

namespace so3align {

namespace {

struct ColumnMap {
  int t = -1, qx = -1, qy = -1, qz = -1, qw = -1;
  int max_index = -1;
};

ColumnMap resolve_columns(const CsvOptions& opts) {
  ColumnMap m;
  for (int c = 0; c < static_cast<int>(opts.columns.size()); ++c) {
    const std::string& name = opts.columns[c];
    int* slot = nullptr;
    if (name == "t") slot = &m.t;
    else if (name == "qx") slot = &m.qx;
    else if (name == "qy") slot = &m.qy;
    else if (name == "qz") slot = &m.qz;
    else if (name == "qw") slot = &m.qw;
    else if (name == "x" || name == "y" || name == "z" || name == "_") continue;
    else throw Error("InvalidConfig", "unknown column name '" + name + "'");
    if (*slot >= 0) throw Error("InvalidConfig", "column '" + name + "' named twice");
    *slot = c;
  }
  for (int idx : {m.t, m.qx, m.qy, m.qz, m.qw}) {
    if (idx < 0) throw Error("InvalidConfig", "columns must include t, qx, qy, qz, qw");
    m.max_index = std::max(m.max_index, idx);
  }
  return m;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  try {
    std::size_t used = 0;
    std::string trimmed = tok;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    const auto last = trimmed.find_last_not_of(" \t\r");
    trimmed.erase(last == std::string::npos ? 0 : last + 1);
    if (trimmed.empty()) return false;
    out = std::stod(trimmed, &used);
    return used == trimmed.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

nlohmann::json matrix_to_json(const Eigen::Matrix3d& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  }
  return rows;
}

Eigen::Matrix3d matrix_from_json(const nlohmann::json& j) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    for (int c = 0; c < 3; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

}  // namespace

RotationSet ingest_pose_csv(const std::string& path, const CsvOptions& opts) {
  const ColumnMap cols = resolve_columns(opts);

  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  RotationSet set;
  std::string line;
  int row = 0;
  bool saw_data_candidate = false;
  bool file_had_content = false;

  while (std::getline(in, line)) {
    ++row;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    file_had_content = true;
    if (stripped[0] == '#') continue;

    const auto toks = split_csv(stripped);

    if (!saw_data_candidate) {
      saw_data_candidate = true;
      // A first line that does not parse as numbers is a header. Field count
      // deliberately plays no part: a short all-numeric first line is a
      // malformed data row and should fail below, not vanish as a header.
      bool numeric = true;
      for (std::size_t c = 0; numeric && c < toks.size(); ++c) {
        double tmp;
        if (!trim(toks[c]).empty() && !parse_double(toks[c], tmp)) numeric = false;
      }
      if (!numeric) continue;
    }

    if (static_cast<int>(toks.size()) <= cols.max_index) {
      throw ParseError("row " + std::to_string(row) + ": expected at least " +
                           std::to_string(cols.max_index + 1) + " columns, got " +
                           std::to_string(toks.size()),
                       row, static_cast<int>(toks.size()) + 1);
    }

    auto field = [&](int c) -> double {
      double v;
      if (!parse_double(toks[c], v)) {
        throw ParseError("row " + std::to_string(row) + " column " + std::to_string(c + 1) +
                             ": cannot parse '" + trim(toks[c]) + "' as a number",
                         row, c + 1);
      }
      if (std::isnan(v)) {
        throw ParseError("row " + std::to_string(row) + " column " + std::to_string(c + 1) +
                             ": NaN is not a valid value",
                         row, c + 1);
      }
      return v;
    };

    const double t = field(cols.t);
    double qx = field(cols.qx);
    double qy = field(cols.qy);
    double qz = field(cols.qz);
    const double qw = field(cols.qw);

    const double norm = std::sqrt(qx * qx + qy * qy + qz * qz + qw * qw);
    if (std::abs(norm - 1.0) > opts.unit_tolerance) {
      throw NonUnitQuaternion("row " + std::to_string(row) + ": |q| = " + std::to_string(norm));
    }
    if (opts.convention == QuatConvention::Jpl) {
      // JPL stores the conjugate of the Hamilton rotation quaternion.
      qx = -qx;
      qy = -qy;
      qz = -qz;
    }
    set.items.push_back(quat_to_rotation(Eigen::Quaterniond(qw, qx, qy, qz)));
    set.timestamps.push_back(t);
  }

  if (set.empty()) {
    throw EmptyFile(file_had_content ? "'" + path + "' has no data rows"
                                     : "'" + path + "' is empty");
  }
  return set;
}

void emit_pose_csv(const std::string& path, const RotationSet& set) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "# t,x,y,z,qx,qy,qz,qw\n";
  for (std::size_t k = 0; k < set.size(); ++k) {
    const Eigen::Quaterniond q = rotation_to_quat(set.items[k]);
    const double t = set.has_timestamps() ? set.timestamps[k] : static_cast<double>(k);
    out << t << ",0,0,0," << q.x() << "," << q.y() << "," << q.z() << "," << q.w() << "\n";
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

nlohmann::json alignment_to_json(const GlobalAlignment& ga) {
  nlohmann::json j;
  nlohmann::json l = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    l.push_back({ga.l_star.l(i, 0), ga.l_star.l(i, 1), ga.l_star.l(i, 2)});
  }
  j["l_star"] = l;
  j["l_star_mapping"] = ga.l_star.mapping_string();
  j["r_bar"] = matrix_to_json(ga.r_bar);
  j["score"] = ga.score;
  j["converged"] = ga.converged;
  j["per_axis_scores"] = {ga.per_axis[0].score, ga.per_axis[1].score, ga.per_axis[2].score};
  j["per_axis_iterations"] = {ga.per_axis[0].iterations, ga.per_axis[1].iterations,
                              ga.per_axis[2].iterations};
  j["hypothesis_scores"] = ga.hypothesis_scores;  // NaNs serialize as null
  return j;
}

GlobalAlignment alignment_from_json(const nlohmann::json& j) {
  GlobalAlignment ga;
  Eigen::Matrix3i l;
  for (int i = 0; i < 3; ++i) {
    for (int c = 0; c < 3; ++c) l(i, c) = j.at("l_star").at(i).at(c).get<int>();
  }
  ga.l_star = SignedPermutation::from_matrix(l);
  ga.r_bar = matrix_from_json(j.at("r_bar"));
  ga.score = j.at("score").get<double>();
  ga.converged = j.at("converged").get<bool>();
  if (j.contains("per_axis_scores")) {
    for (int i = 0; i < 3; ++i) ga.per_axis[i].score = j.at("per_axis_scores").at(i).get<double>();
  }
  if (j.contains("hypothesis_scores")) {
    for (const auto& v : j.at("hypothesis_scores")) {
      ga.hypothesis_scores.push_back(
          v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    }
  }
  return ga;
}

nlohmann::json report_to_json(const ErrorReport& rep) {
  nlohmann::json j;
  j["pairs"] = rep.per_pair_errors_deg.size();
  j["mae_deg"] = rep.mae_deg;        // non-finite values serialize as null
  j["rmse_deg"] = rep.rmse_deg;
  j["median_deg"] = rep.median_deg;
  j["runtime_seconds"] = rep.runtime_seconds;
  nlohmann::json rates = nlohmann::json::object();
  for (const auto& [thr, frac] : rep.success_rates) {
    std::ostringstream key;
    key << thr;
    rates[key.str()] = frac;
  }
  j["success_rates"] = rates;
  return j;
}

nlohmann::json scaling_to_json(const ScalingReport& rep) {
  nlohmann::json j;
  j["sizes"] = rep.sizes;
  j["seconds"] = rep.seconds;
  j["window_min"] = rep.window_min;
  j["parallel"] = rep.parallel;
  if (rep.loglog_slope) {
    j["loglog_slope"] = *rep.loglog_slope;
  } else {
    j["loglog_slope"] = nullptr;
  }
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what(), 0, 0);
  }
}

void write_pairs_csv(const std::string& path, const std::vector<std::pair<int, int>>& pairs,
                     const ErrorReport& rep) {
  if (pairs.size() != rep.per_pair_errors_deg.size()) {
    throw Error("InvalidConfig", "write_pairs_csv: pairs and errors differ in length");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "index_a,index_b,error_deg\n";
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out << pairs[k].first << "," << pairs[k].second << "," << rep.per_pair_errors_deg[k] << "\n";
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_error_histogram_csv(const std::string& path, const ErrorReport& rep,
                               double bin_width_deg) {
  if (bin_width_deg <= 0.0) throw Error("InvalidConfig", "bin width must be positive");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  double max_err = 0.0;
  for (double v : rep.per_pair_errors_deg) max_err = std::max(max_err, v);
  const int nbins = std::max(1, static_cast<int>(std::ceil(max_err / bin_width_deg)) + 1);
  std::vector<std::size_t> counts(nbins, 0);
  for (double v : rep.per_pair_errors_deg) {
    int b = static_cast<int>(v / bin_width_deg);
    if (b >= nbins) b = nbins - 1;
    counts[b]++;
  }
  out << "bin_lo_deg,bin_hi_deg,count\n";
  for (int b = 0; b < nbins; ++b) {
    out << b * bin_width_deg << "," << (b + 1) * bin_width_deg << "," << counts[b] << "\n";
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace so3align
