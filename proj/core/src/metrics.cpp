#include "gearsyn/metrics.hpp"

#include <fmt/format.h>

#include <cmath>

#include "gearsyn/feasibility.hpp"
#include "gearsyn/parallel.hpp"
#include "gearsyn/simulator.hpp"

namespace gearsyn {
namespace {

struct PairOutcome {
  bool valid = false;
  bool feasible = false;
  double pos_err = 0.0;
  double log_ratio = 0.0;
  double weight = 0.0;
  bool motvec = false;
  bool inmot = false;
  bool outmot = false;
};

double pct(std::size_t k, std::size_t n) {
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(k) / static_cast<double>(n);
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

std::string cell(const std::optional<double>& v, int precision) {
  return v ? fmt::format("{:.{}f}", *v, precision) : std::string("-");
}

}  // namespace

double rmsle(std::span<const double> targets, std::span<const double> achieved) {
  if (targets.size() != achieved.size()) {
    throw MetricsError(MetricsError::Kind::LengthMismatch,
                       fmt::format("{} targets vs {} achieved values", targets.size(), achieved.size()));
  }
  if (targets.empty()) throw MetricsError(MetricsError::Kind::Empty, "rmsle of an empty set");
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!(targets[i] > 0.0) || !(achieved[i] > 0.0)) {
      throw MetricsError(MetricsError::Kind::NonPositiveRatio, "rmsle needs positive ratios");
    }
    const double d = std::log(targets[i]) - std::log(achieved[i]);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(targets.size()));
}

nlohmann::ordered_json EvalReport::to_json() const {
  const auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["n_total"] = n_total;
  j["n_valid"] = n_valid;
  j["n_feasible"] = n_feasible;
  j["valid_pct"] = valid_pct;
  j["feas_pct"] = feas_pct;
  j["pos_m"] = opt(pos_m);
  j["pos_std"] = opt(pos_std);
  j["speed_rmsle"] = opt(speed_rmsle);
  j["motvec_pct"] = opt(motvec_pct);
  j["inmot_pct"] = opt(inmot_pct);
  j["outmot_pct"] = opt(outmot_pct);
  j["weight_kg"] = opt(weight_kg);
  j["weight_std"] = opt(weight_std);
  return j;
}

EvalReport evaluate_set(std::span<const DatasetRecord> pairs, const Catalogue& cat, int workers) {
  std::vector<PairOutcome> outcomes(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t i) {
    const auto& [req, seq] = pairs[i];
    PairOutcome& o = outcomes[i];
    SimResult res;
    try {
      res = simulate(seq, cat);
    } catch (const SimulationError&) {
      return;
    }
    o.valid = true;
    o.feasible = !check_interference(res.placements);
    o.pos_err = (req.p - res.position).norm();
    o.log_ratio = std::log(req.s) - std::log(res.speed_ratio);
    o.weight = res.weight_kg;
    o.motvec = req.motion() == res.motion;
    o.inmot = req.input_motion() == res.input;
    o.outmot = req.output_motion() == res.output;
  });

  EvalReport r;
  r.n_total = pairs.size();
  std::vector<double> pos, weight;
  double sq_log = 0.0;
  std::size_t motvec = 0, inmot = 0, outmot = 0;
  for (const auto& o : outcomes) {
    if (!o.valid) continue;
    ++r.n_valid;
    if (o.feasible) ++r.n_feasible;
    pos.push_back(o.pos_err);
    weight.push_back(o.weight);
    sq_log += o.log_ratio * o.log_ratio;
    motvec += o.motvec;
    inmot += o.inmot;
    outmot += o.outmot;
  }
  r.valid_pct = pct(r.n_valid, r.n_total);
  r.feas_pct = pct(r.n_feasible, r.n_total);
  if (r.n_valid > 0) {
    const auto [pos_mean, pos_sd] = mean_std(pos);
    const auto [weight_mean, weight_sd] = mean_std(weight);
    r.pos_m = pos_mean;
    r.pos_std = pos_sd;
    r.weight_kg = weight_mean;
    r.weight_std = weight_sd;
    r.speed_rmsle = std::sqrt(sq_log / static_cast<double>(r.n_valid));
    r.motvec_pct = pct(motvec, r.n_valid);
    r.inmot_pct = pct(inmot, r.n_valid);
    r.outmot_pct = pct(outmot, r.n_valid);
  }
  return r;
}

std::string format_report_table(std::span<const ReportRow> rows) {
  bool timed = false;
  for (const auto& row : rows) timed = timed || row.seconds.has_value();

  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"Model", "Valid", "Feas",   "Pos",    "Speed",
                                     "MotVec", "In-Mot", "Out-Mot", "Weight", "Cand #"};
  if (timed) header.push_back("Time s");
  cells.push_back(header);
  for (const auto& row : rows) {
    const auto& r = row.report;
    std::vector<std::string> line = {
        row.label,
        fmt::format("{:.2f}", r.valid_pct),
        fmt::format("{:.2f}", r.feas_pct),
        cell(r.pos_m, 3),
        cell(r.speed_rmsle, 4),
        cell(r.motvec_pct, 2),
        cell(r.inmot_pct, 2),
        cell(r.outmot_pct, 2),
        cell(r.weight_kg, 2),
        row.candidates ? fmt::format("{}", *row.candidates) : std::string("-"),
    };
    if (timed) line.push_back(cell(row.seconds, 2));
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::string out;
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c == 0) {
        out += fmt::format("{:<{}}", line[c], width[c]);
      } else {
        out += fmt::format("  {:>{}}", line[c], width[c]);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace gearsyn
