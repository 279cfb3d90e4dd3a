#include "sgdlab/dynamics/trajectory.hpp"

#include "sgdlab/core/csv.hpp"

namespace sgdlab {

Vec Trajectory::state(std::size_t i) const {
  return Eigen::Map<const Vec>(states.data() + i * static_cast<std::size_t>(dimension), dimension);
}

void Trajectory::push(double t, std::span<const double> w) {
  times.push_back(t);
  states.insert(states.end(), w.begin(), w.end());
}

void Trajectory::write_csv(std::ostream& out) const {
  std::vector<std::string> header{"t"};
  for (int j = 1; j <= dimension; ++j) header.push_back("w_" + std::to_string(j));
  csv::Writer w(out, header);
  for (std::size_t i = 0; i < times.size(); ++i) {
    w.field(times[i]);
    for (int j = 0; j < dimension; ++j) w.field(states[i * static_cast<std::size_t>(dimension) + j]);
    w.end_row();
  }
}

nlohmann::json Trajectory::sidecar() const {
  return {{"master_seed", master_seed},
          {"stream_id", stream_id},
          {"schedule", schedule},
          {"landscape_hash", landscape_hash},
          {"dimension", dimension},
          {"records", times.size()},
          {"steps", steps}};
}

}  // namespace sgdlab
