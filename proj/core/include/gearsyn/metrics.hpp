#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/dataset.hpp"
#include "gearsyn/error.hpp"

namespace gearsyn {

class MetricsError : public Error {
 public:
  enum class Kind { NonPositiveRatio, LengthMismatch, Empty };
  MetricsError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// sqrt(mean((ln t - ln a)^2)) with natural logarithms.
double rmsle(std::span<const double> targets, std::span<const double> achieved);

/// Summary row of an evaluation table. Percentages are over all pairs for Valid and
/// Feas and over valid pairs for the rest; quantities over valid pairs
/// are absent when no pair is valid.
struct EvalReport {
  std::size_t n_total = 0;
  std::size_t n_valid = 0;
  std::size_t n_feasible = 0;
  double valid_pct = 0.0;
  double feas_pct = 0.0;
  std::optional<double> pos_m;
  std::optional<double> pos_std;
  std::optional<double> speed_rmsle;
  std::optional<double> motvec_pct;
  std::optional<double> inmot_pct;
  std::optional<double> outmot_pct;
  std::optional<double> weight_kg;
  std::optional<double> weight_std;

  nlohmann::ordered_json to_json() const;
};

/// Each pair is (target requirements, predicted sequence). Predictions that
/// fail the grammar or cannot be simulated count as invalid.
EvalReport evaluate_set(std::span<const DatasetRecord> pairs, const Catalogue& cat, int workers = 1);

struct ReportRow {
  std::string label;
  EvalReport report;
  std::optional<std::size_t> candidates;
  std::optional<double> seconds;
};

/// Aligned text table: Model, Valid, Feas, Pos, Speed, MotVec, In-Mot,
/// Out-Mot, Weight, Cand #, then wall time when any row has one.
std::string format_report_table(std::span<const ReportRow> rows);

}  // namespace gearsyn
