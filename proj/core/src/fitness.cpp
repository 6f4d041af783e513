#include "gearsyn/fitness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gearsyn/feasibility.hpp"
#include "gearsyn/simulator.hpp"

namespace gearsyn {

void FitnessWeights::validate() const {
  const double all[] = {pos, speed, motvec, inmot, outmot, feas, weight};
  bool positive = false;
  for (double w : all) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("fitness weights must be finite and non-negative");
    positive = positive || w > 0.0;
  }
  if (!positive) throw std::invalid_argument("at least one fitness weight must be positive");
}

nlohmann::ordered_json FitnessBreakdown::to_json() const {
  nlohmann::ordered_json j;
  j["valid"] = valid;
  j["feasible"] = feasible;
  j["pos_error"] = pos_error;
  j["log_speed_error"] = log_speed_error;
  j["motvec"] = motvec;
  j["inmot_mismatch"] = inmot_mismatch;
  j["outmot_mismatch"] = outmot_mismatch;
  j["weight_kg"] = weight_kg;
  j["score"] = score;
  return j;
}

FitnessBreakdown evaluate_fitness(const Requirements& req, std::span<const Token> tokens,
                                  const FitnessWeights& w, const Catalogue& cat) {
  FitnessBreakdown b;
  SimResult res;
  try {
    res = simulate(tokens, cat);
  } catch (const SimulationError&) {
    return b;
  }
  b.valid = true;
  b.feasible = !check_interference(res.placements);
  b.pos_error = (req.p - res.position).norm();
  b.log_speed_error = std::abs(std::log(req.s) - std::log(res.speed_ratio));
  b.motvec = (1.0 - req.motion().vec().dot(res.motion.vec())) / 2.0;
  b.inmot_mismatch = req.input_motion() != res.input;
  b.outmot_mismatch = req.output_motion() != res.output;
  b.weight_kg = res.weight_kg;
  b.score = w.pos * b.pos_error + w.speed * b.log_speed_error + w.motvec * b.motvec +
            (b.inmot_mismatch ? w.inmot : 0.0) + (b.outmot_mismatch ? w.outmot : 0.0) +
            (b.feasible ? 0.0 : w.feas) + w.weight * b.weight_kg;
  return b;
}

double ucb(double reward, double visits, double parent_visits, double c) {
  if (visits <= 0.0) return std::numeric_limits<double>::infinity();
  return reward / visits + c * std::sqrt(std::log(parent_visits) / visits);
}

}  // namespace gearsyn
