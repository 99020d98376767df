#pragma once

#include "mal/asymptotics.hpp"
#include "mal/montecarlo.hpp"
#include "mal/singular.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <span>
#include <string>

namespace mal {

nlohmann::json to_json(const MomentSet& ms);
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
nlohmann::json to_json(const AsymptoticCov& cov);
nlohmann::json to_json(const IndependenceReport& report);
nlohmann::json to_json(const NormalityVerdict& verdict);
nlohmann::json to_json(const SingularRoot& root);
nlohmann::json to_json(const SingularityReport& report);
nlohmann::json to_json(const SingularMember& member);
nlohmann::json to_json(const SingularCoefficients& c);
nlohmann::json to_json(const SampleSummary& s);
nlohmann::json to_json(const SimulationReport& report);
nlohmann::json to_json(const RateReport& report);

std::string hex_seed(std::uint64_t seed);

// One value per row under a "value" header.
void write_sample_csv(std::ostream& out, std::span<const double> values);

// Columns: n, quantity, estimate, target, se.
void write_rate_csv(std::ostream& out, const RateReport& report);

}  // namespace mal
