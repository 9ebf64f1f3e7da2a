#include "gwe/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gwe {

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument("trailing");
        row.push_back(v);
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (lineno == 1 && rows.empty()) continue;  // header row
      throw ConfigError(path + ": non-numeric cell at line " + std::to_string(lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError(path + ": inconsistent column count at line " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(path + ": no data rows");
  return rows;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  return out;
}

}  // namespace

DiscreteMeasure read_point_cloud_csv(const std::string& path, bool has_weights) {
  const auto rows = read_numeric_rows(path);
  const Eigen::Index k = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(rows.front().size());
  const Eigen::Index d = has_weights ? cols - 1 : cols;
  if (d < 1) throw ConfigError(path + ": no coordinate columns");
  Mat atoms(k, d);
  Vec w = Vec::Constant(k, 1.0 / static_cast<double>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) atoms(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (has_weights) w(i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
  }
  if (has_weights) {
    const double s = w.sum();
    if (std::abs(s - 1.0) > 1e-6)
      throw ConfigError(path + ": weight column must sum to 1");
    w /= s;
  }
  return DiscreteMeasure(std::move(atoms), std::move(w));
}

DiscreteMeasure read_point_cloud_csv_auto(const std::string& path) {
  const auto rows = read_numeric_rows(path);
  const std::size_t cols = rows.front().size();
  if (cols >= 2) {
    double s = 0;
    bool nonneg = true;
    for (const auto& r : rows) {
      s += r[cols - 1];
      nonneg = nonneg && r[cols - 1] >= 0;
    }
    if (nonneg && std::abs(s - 1.0) <= 1e-6) return read_point_cloud_csv(path, true);
  }
  return read_point_cloud_csv(path, false);
}

void write_point_cloud_csv(const std::string& path, const DiscreteMeasure& m) {
  auto out = open_out(path);
  for (Eigen::Index j = 0; j < m.dim(); ++j) out << "x" << j << ",";
  out << "weight\n";
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    for (Eigen::Index j = 0; j < m.dim(); ++j) out << format_full(m.atoms()(i, j)) << ",";
    out << format_full(m.weights()(i)) << "\n";
  }
}

void write_matrix_csv(const std::string& path, const Mat& m) {
  auto out = open_out(path);
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << "c" << j;
  out << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << format_full(m(i, j));
    out << "\n";
  }
}

void write_plan_csv(const std::string& path, const Coupling& plan) {
  auto out = open_out(path);
  out << "i,j,mass\n";
  for (const PlanEntry& e : plan.entries())
    out << e.i << "," << e.j << "," << format_full(e.w) << "\n";
}

void write_raw_csv(const std::string& path, const std::string& scenario,
                   const std::vector<RawRow>& rows) {
  auto out = open_out(path);
  out << "scenario,n,m,replication,d_hat,true_d,delta,s1,s2,iterations,method,seconds\n";
  for (const RawRow& r : rows) {
    out << scenario << "," << r.n << "," << r.m << "," << r.replication << ","
        << format_full(r.d_hat) << "," << format_full(r.true_d) << ","
        << format_full(r.delta) << "," << format_full(r.s1) << "," << format_full(r.s2)
        << "," << r.iterations << "," << r.method << "," << format_full(r.seconds) << "\n";
  }
}

void write_summary_csv(const std::string& path, const std::string& scenario,
                       const std::vector<SummaryRow>& rows) {
  auto out = open_out(path);
  out << "scenario,n,mean_delta,stderr,q50,q90,q99\n";
  for (const SummaryRow& r : rows) {
    out << scenario << "," << r.n << "," << format_full(r.mean_delta) << ","
        << format_full(r.stderr_mean) << "," << format_full(r.q50) << ","
        << format_full(r.q90) << "," << format_full(r.q99) << "\n";
  }
}

void write_fit_csv(const std::string& path, const RateFit& fit, const RateTarget& target) {
  auto out = open_out(path);
  out << "slope,stderr,r2,target_exponent";
  if (fit.has_log_adjusted) out << ",slope_log_adjusted,target_log_adjusted";
  out << "\n";
  out << format_full(fit.slope) << "," << format_full(fit.stderr_slope) << ","
      << format_full(fit.r_squared) << "," << format_full(target.exponent);
  if (fit.has_log_adjusted) out << "," << format_full(fit.slope_log_adjusted) << ",1";
  out << "\n";
}

void write_deviation_csv(const std::string& path, const ScenarioResult& res) {
  auto out = open_out(path);
  out << "scenario,n,sqrtn_q90_minus_q50,sqrtn_q99_minus_q50\n";
  for (std::size_t i = 0; i < res.summary.size(); ++i) {
    out << res.scenario << "," << res.summary[i].n << ","
        << format_full(res.spread_q90[i]) << "," << format_full(res.spread_q99[i]) << "\n";
  }
}

void write_lecam_csv(const std::string& path, const ScenarioResult& res) {
  auto out = open_out(path);
  out << "scenario,n,epsilon,chi2,risk,risk_sqrt_n\n";
  for (std::size_t i = 0; i < res.summary.size(); ++i) {
    out << res.scenario << "," << res.summary[i].n << ","
        << format_full(res.lecam_eps[i]) << "," << format_full(res.lecam_chi2[i]) << ","
        << format_full(res.summary[i].mean_delta) << ","
        << format_full(res.lecam_risk_sqrt_n[i]) << "\n";
  }
}

}  // namespace gwe
