#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tiltlab/tiltlab.hpp"

namespace tiltlab::harness {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct CriterionResult {
  int id = 0;
  std::string suite;
  bool pass = false;
  std::string detail;
  nlohmann::json metrics = nlohmann::json::object();
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

// Suite ids in criterion order (1-based position = criterion number).
const std::vector<std::string>& suite_ids();
bool is_suite(const std::string& id);
CriterionResult run_suite(const std::string& id, std::uint64_t seed = kDefaultSeed);

struct FigureResult {
  std::string id;
  bool pass = true;
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
};
const std::vector<std::string>& figure_ids();
// Writes the figure's data files under out_dir and returns its summary.
FigureResult run_figure(const std::string& id, std::uint64_t seed, const std::filesystem::path& out_dir);

// theta (M - R) for draws R (coordinatewise, scalar theta).
std::vector<double> scaled_gap(const SampleSet& draws, double theta, double upper, std::size_t coord = 0);

// Histogram of a weighted 1-d sample against the exactly tilted density.
struct TiltedHistogram {
  std::vector<double> centers, weighted_density, true_density;
};
TiltedHistogram tilted_histogram(const WeightedEmpirical& we, const ScalarModel& model, const TiltSpec& tilt,
                                 std::size_t bins = 100);
void write_histogram_csv(const std::filesystem::path& path, const TiltedHistogram& h);

}  // namespace tiltlab::harness
