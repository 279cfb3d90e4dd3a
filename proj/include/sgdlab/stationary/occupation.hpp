#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgdlab/landscape/catalog.hpp"

namespace sgdlab {

struct OccupationOptions {
  std::size_t streams = 8;
  int workers = 0;
  bool serial = false;
};

struct OccupationReport {
  int id1 = 0;
  int id2 = 0;
  double eta = 0.0;
  double epsilon = 0.0;
  double t_burn = 0.0;
  double t_total = 0.0;
  double dt = 0.0;
  bool has_ratio = false;
  double ratio = 0.0;          ///< pooled time in ball 1 / time in ball 2
  double standard_error = 0.0; ///< jackknife over streams
  std::vector<double> stream_ratios;
  double occupancy1 = 0.0;
  double occupancy2 = 0.0;
  std::int64_t switches = 0;
  double max_kramers = 0.0;
  double closed_form_ratio = 0.0;  ///< see probability_ratio
  std::string closed_form_label;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// Long constant-schedule SDE runs (M = 1, gamma = 2 / (eta beta)) from
/// minimum id1; measures time spent within epsilon of each minimum after
/// burn-in. Streams are independent and summed. A warning is recorded when
/// the post-burn-in run is shorter than 100 times the slower Kramers time.
OccupationReport occupation_ratio_mc(const Landscape& landscape,
                                     const CriticalPointCatalog& catalog, int id1, int id2,
                                     double eta, double epsilon, double t_burn, double t_total,
                                     double dt, std::uint64_t seed, OccupationOptions options = {});

}  // namespace sgdlab
