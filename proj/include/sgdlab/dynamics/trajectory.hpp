#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgdlab/landscape/potential.hpp"

namespace sgdlab {

/// Recorded path of a simulation with its RNG provenance.
struct Trajectory {
  int dimension = 0;
  std::vector<double> times;
  std::vector<double> states;  ///< row-major, `dimension` values per record
  nlohmann::json schedule;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  std::string landscape_hash;
  std::size_t steps = 0;  ///< integration steps taken

  std::size_t size() const { return times.size(); }
  Vec state(std::size_t i) const;
  void push(double t, std::span<const double> w);

  /// CSV with header t,w_1..w_d.
  void write_csv(std::ostream& out) const;
  /// Seed, stream, schedule and landscape hash.
  nlohmann::json sidecar() const;
};

}  // namespace sgdlab
