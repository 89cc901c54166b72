#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tiltlab/asym1d.hpp"
#include "tiltlab/asymhd.hpp"
#include "tiltlab/diagnostics.hpp"
#include "tiltlab/dist.hpp"
#include "tiltlab/limitlab.hpp"
#include "tiltlab/sample_set.hpp"
#include "tiltlab/tilt.hpp"
#include "tiltlab/unbounded.hpp"

namespace tiltlab::io {

using nlohmann::json;

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& field);

// {"family": "...", "params": {...}}
DistributionModel model_from_json(const json& j);
json model_to_json(const DistributionModel& model);

// One observation per row, comma separated. A first row that does not
// parse as numbers is treated as a header. Errors name the 1-based line.
SampleSet read_samples_csv(std::istream& in, std::size_t expected_dim = 0);
SampleSet read_samples_csv_file(const std::string& path, std::size_t expected_dim = 0);
void write_samples_csv(std::ostream& out, const SampleSet& s, const std::vector<std::string>& header = {});

// Point columns x1..xd followed by a weight column.
void write_weighted_csv(std::ostream& out, const WeightedEmpirical& we);
WeightedEmpirical read_weighted_csv(std::istream& in, double log_normalizer = 0.0);
json weighted_to_json(const WeightedEmpirical& we);
WeightedEmpirical weighted_from_json(const json& j);

json to_json(const AsymptoteCheck& c);
json to_json(const MvrvModel& m);
json to_json(const LaplaceGeometry& g);
json to_json(const RegimeReport& r);
json to_json(const BandReport& r);

// Schedule rows (n, theta) or (n, M) from CSV with an optional header.
std::vector<std::pair<double, double>> read_pairs_csv(std::istream& in);

}  // namespace tiltlab::io
