#pragma once

#include <string>
#include <vector>

#include "gwe/harness.hpp"
#include "gwe/measure.hpp"
#include "gwe/ot.hpp"

namespace gwe {

// All CSV output is UTF-8, comma separated, header row, '.' decimal
// separator, 17 significant digits.
std::string format_full(double v);

// One row per atom, optional trailing weight column.  Without the weight
// column the measure is uniform.
DiscreteMeasure read_point_cloud_csv(const std::string& path, bool has_weights);

// Autodetects a trailing weight column by checking whether the candidate
// weight column sums to 1 within 1e-6 (and the file has >= 2 columns).
DiscreteMeasure read_point_cloud_csv_auto(const std::string& path);

void write_point_cloud_csv(const std::string& path, const DiscreteMeasure& m);

void write_matrix_csv(const std::string& path, const Mat& m);
void write_plan_csv(const std::string& path, const Coupling& plan);

void write_raw_csv(const std::string& path, const std::string& scenario,
                   const std::vector<RawRow>& rows);
void write_summary_csv(const std::string& path, const std::string& scenario,
                       const std::vector<SummaryRow>& rows);
void write_fit_csv(const std::string& path, const RateFit& fit, const RateTarget& target);
void write_deviation_csv(const std::string& path, const ScenarioResult& res);
void write_lecam_csv(const std::string& path, const ScenarioResult& res);

}  // namespace gwe
