#pragma once

#include <span>

#include <nlohmann/json.hpp>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/dataset.hpp"
#include "gearsyn/token.hpp"

namespace gearsyn {

struct FitnessWeights {
  double pos = 1.0;
  double speed = 1.0;
  double motvec = 1.0;
  double inmot = 1.0;
  double outmot = 1.0;
  double feas = 10.0;
  double weight = 0.01;

  /// Throws std::invalid_argument on negative weights or all zeros.
  void validate() const;
};

/// Score given to sequences the simulator rejects.
inline constexpr double kInvalidScore = 1e9;

/// Per-term residuals of one candidate; `score` is the weighted sum
/// (lower is better).
struct FitnessBreakdown {
  bool valid = false;
  bool feasible = false;
  double pos_error = 0.0;
  double log_speed_error = 0.0;
  double motvec = 0.0;      // (1 - m_req . m) / 2
  bool inmot_mismatch = false;
  bool outmot_mismatch = false;
  double weight_kg = 0.0;
  double score = kInvalidScore;

  nlohmann::ordered_json to_json() const;
};

FitnessBreakdown evaluate_fitness(const Requirements& req, std::span<const Token> tokens,
                                  const FitnessWeights& w, const Catalogue& cat);

inline double fitness(const Requirements& req, const GearSequence& seq, const FitnessWeights& w,
                      const Catalogue& cat) {
  return evaluate_fitness(req, seq.tokens, w, cat).score;
}

/// Upper confidence bound R/v + c sqrt(ln V / v); +infinity for v = 0.
double ucb(double reward, double visits, double parent_visits, double c);

}  // namespace gearsyn
