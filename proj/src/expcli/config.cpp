#include "sgdlab/expcli/config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "sgdlab/core/error.hpp"
#include "sgdlab/core/hash.hpp"
#include "sgdlab/core/rng.hpp"
#include "sgdlab/dynamics/schedule.hpp"
#include "sgdlab/dynamics/sde.hpp"
#include "sgdlab/fokker_planck/solver.hpp"
#include "sgdlab/landscape/families.hpp"

namespace sgdlab {
namespace {

using nlohmann::json;

const std::vector<std::pair<ExperimentKind, std::string>> kKindNames = {
    {ExperimentKind::SimulateSde, "simulate-sde"},
    {ExperimentKind::SimulateSgd, "simulate-sgd"},
    {ExperimentKind::FokkerPlanck, "fokker-planck"},
    {ExperimentKind::EscapeTime, "escape-time"},
    {ExperimentKind::EscapeSweep, "escape-sweep"},
    {ExperimentKind::StationaryProb, "stationary-prob"},
    {ExperimentKind::OccupationRatio, "occupation-ratio"},
    {ExperimentKind::AppendixH, "appendix-h"},
    {ExperimentKind::VerifyNoise, "verify-noise"},
    {ExperimentKind::CheckAssumptions, "check-assumptions"},
    {ExperimentKind::SharpnessToy, "sharpness-toy"},
};

enum class T { Positive, NonNegative, Count, CountZero, Index, PositiveList, CountList, IndexList, Vector, String, Pairs };

struct Param {
  const char* name;
  T type;
  json fallback;  // null: required
};

std::vector<Param> params_for(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SimulateSde:
      return {{"t_end", T::Positive, nullptr}, {"dt", T::Positive, nullptr},
              {"w0", T::Vector, json::array()}, {"stride", T::Count, 100},
              {"trajectories", T::Count, 1}};
    case ExperimentKind::SimulateSgd:
      return {{"steps", T::Count, nullptr}, {"stride", T::Count, 100},
              {"init_scale", T::NonNegative, 0.1}};
    case ExperimentKind::FokkerPlanck:
      return {{"t_end", T::Positive, nullptr},      {"dt", T::Positive, nullptr},
              {"cells", T::CountZero, 0},           {"scheme", T::String, "auto"},
              {"start", T::Vector, json::array()},  {"std_cells", T::Positive, 2.0},
              {"snapshot_every", T::CountZero, 0},  {"distance_every", T::Count, 10}};
    case ExperimentKind::EscapeTime:
      return {{"from", T::Index, 0},        {"to", T::Index, 1},
              {"radius", T::NonNegative, 0.0}, {"t_max", T::NonNegative, 0.0},
              {"trajectories", T::CountZero, 1000}, {"dt", T::Positive, nullptr}};
    case ExperimentKind::EscapeSweep:
      return {{"eta_values", T::PositiveList, nullptr}, {"from", T::Index, 0},
              {"to", T::Index, 1},                      {"radius", T::NonNegative, 0.0},
              {"t_max", T::NonNegative, 0.0},           {"trajectories", T::CountZero, 1000},
              {"dt", T::Positive, nullptr}};
    case ExperimentKind::StationaryProb:
      return {{"eta", T::Positive, nullptr}, {"epsilon", T::Positive, 0.1},
              {"minima", T::IndexList, json::array()}, {"cells", T::CountZero, 0}};
    case ExperimentKind::OccupationRatio:
      return {{"id1", T::Index, 0},          {"id2", T::Index, 1},
              {"eta", T::Positive, nullptr}, {"epsilon", T::Positive, nullptr},
              {"t_burn", T::NonNegative, nullptr}, {"t_total", T::Positive, nullptr},
              {"dt", T::Positive, nullptr},  {"streams", T::Count, 8}};
    case ExperimentKind::AppendixH:
      return {{"example", T::Count, nullptr}, {"m_over_gamma", T::PositiveList, json::array()},
              {"epsilon", T::Positive, 0.1}};
    case ExperimentKind::VerifyNoise:
      return {{"w", T::Vector, json::array()}, {"batch_sizes", T::CountList, {1, 4, 16}},
              {"draws", T::Count, 100000}};
    case ExperimentKind::CheckAssumptions:
      return {{"shells", T::PositiveList, {1, 2, 4, 8, 16}}, {"grid_resolution", T::Count, 64},
              {"directions", T::Count, 64}};
    case ExperimentKind::SharpnessToy:
      return {{"dimension", T::Count, 20},      {"samples", T::Count, 4096},
              {"l2", T::NonNegative, 0.01},     {"init_scale", T::NonNegative, 0.1},
              {"weight_scale", T::NonNegative, 3.0}, {"epochs", T::Count, 60},
              {"pairs", T::Pairs, {{0.01, 128}, {0.1, 128}, {0.2, 256}}},
              {"seeds", T::Count, 10},          {"rank_epoch", T::Count, 50},
              {"data_seed", T::CountZero, nullptr}};
  }
  return {};
}

enum class Needs { None, Analytic, Empirical, Either };

Needs landscape_need(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SimulateSgd:
    case ExperimentKind::VerifyNoise:
      return Needs::Empirical;
    case ExperimentKind::CheckAssumptions:
      return Needs::Either;
    case ExperimentKind::AppendixH:
    case ExperimentKind::SharpnessToy:
      return Needs::None;
    default:
      return Needs::Analytic;
  }
}

bool needs_schedule(ExperimentKind k) {
  return k == ExperimentKind::SimulateSde || k == ExperimentKind::SimulateSgd ||
         k == ExperimentKind::FokkerPlanck || k == ExperimentKind::EscapeTime;
}

bool is_count(const json& v, long long min) {
  if (v.is_number_integer() || v.is_number_unsigned()) return v.get<long long>() >= min;
  return false;
}

std::string check_value(const json& v, T type) {
  switch (type) {
    case T::Positive:
      return v.is_number() && v.get<double>() > 0.0 ? "" : "must be a number > 0";
    case T::NonNegative:
      return v.is_number() && v.get<double>() >= 0.0 ? "" : "must be a number >= 0";
    case T::Count:
      return is_count(v, 1) ? "" : "must be an integer >= 1";
    case T::CountZero:
    case T::Index:
      return is_count(v, 0) ? "" : "must be an integer >= 0";
    case T::PositiveList:
      if (!v.is_array()) return "must be a list of numbers > 0";
      for (const auto& e : v) {
        if (!e.is_number() || !(e.get<double>() > 0.0)) return "must be a list of numbers > 0";
      }
      return "";
    case T::CountList:
    case T::IndexList:
      if (!v.is_array()) return "must be a list of integers";
      for (const auto& e : v) {
        if (!is_count(e, type == T::CountList ? 1 : 0)) return "must be a list of integers";
      }
      return "";
    case T::Vector:
      if (!v.is_array()) return "must be a list of numbers";
      for (const auto& e : v) {
        if (!e.is_number()) return "must be a list of numbers";
      }
      return "";
    case T::String:
      return v.is_string() ? "" : "must be a string";
    case T::Pairs:
      if (!v.is_array() || v.empty()) return "must be a non-empty list of [gamma, batch] pairs";
      for (const auto& e : v) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || e[0].get<double>() < 0.0 ||
            !is_count(e[1], 1)) {
          return "must be a non-empty list of [gamma >= 0, batch >= 1] pairs";
        }
      }
      return "";
  }
  return "";
}

json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      json a = json::array();
      for (const auto& e : n) a.push_back(yaml_to_json(e));
      return a;
    }
    case YAML::NodeType::Map: {
      json o = json::object();
      for (const auto& kv : n) o[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return o;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const std::string s = n.Scalar();
  if (n.Tag() == "!") return s;  // quoted
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  if (s == "null" || s == "~") return nullptr;
  if (!s.empty() && s[0] != '+' && s.find_first_not_of("-0123456789") == std::string::npos) {
    try {
      std::size_t pos = 0;
      if (s[0] == '-') {
        const long long v = std::stoll(s, &pos);
        if (pos == s.size()) return v;
      } else {
        const unsigned long long v = std::stoull(s, &pos);
        if (pos == s.size()) return v;
      }
    } catch (const std::exception&) {
    }
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  return s;
}

Vec to_vec(const json& a) {
  const auto v = a.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_empirical(json& l, std::uint64_t seed, std::vector<std::string>& problems) {
  const std::vector<Param> fields = {{"regression", T::String, nullptr},
                                     {"samples", T::Count, nullptr},
                                     {"dimension", T::Count, nullptr},
                                     {"l2", T::NonNegative, 0.0},
                                     {"weight_scale", T::NonNegative, 3.0},
                                     {"data_seed", T::CountZero, seed}};
  for (const auto& f : fields) {
    const std::string name = std::string("landscape.") + f.name;
    if (!l.contains(f.name)) {
      if (f.fallback.is_null()) {
        problems.push_back(name + ": required");
        continue;
      }
      l[f.name] = f.fallback;
    }
    const auto msg = check_value(l[f.name], f.type);
    if (!msg.empty()) problems.push_back(name + ": " + msg);
  }
  if (l.contains("regression") && l["regression"].is_string()) {
    try {
      regression_kind_from_string(l["regression"].get<std::string>());
    } catch (const std::exception&) {
      problems.push_back("landscape.regression: must be 'linear' or 'logistic'");
    }
  }
  if (l.contains("true_weights")) {
    const auto msg = check_value(l["true_weights"], T::Vector);
    if (!msg.empty()) {
      problems.push_back("landscape.true_weights: " + msg);
    } else if (is_count(l.value("dimension", json()), 1) &&
               l["true_weights"].size() != l["dimension"].get<std::size_t>()) {
      problems.push_back("landscape.true_weights: length must equal dimension");
    }
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

json ExperimentConfig::resolved() const {
  json j = {{"kind", to_string(kind)}, {"seed", seed}, {"output_dir", output_dir}, {"params", params}};
  if (!landscape.is_null()) j["landscape"] = landscape;
  if (!schedule.is_null()) j["schedule"] = schedule;
  return j;
}

std::string ExperimentConfig::hash() const { return sha256_hex(resolved().dump()); }

json parse_config_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return json::parse(text);
  return yaml_to_json(YAML::Load(text));
}

EmpiricalLandscape build_empirical(const json& spec) {
  const auto kind = regression_kind_from_string(spec.at("regression").get<std::string>());
  const auto d = spec.at("dimension").get<std::size_t>();
  const auto n = spec.at("samples").get<std::size_t>();
  const auto data_seed = spec.at("data_seed").get<std::uint64_t>();
  Vec w0(static_cast<Eigen::Index>(d));
  if (spec.contains("true_weights")) {
    w0 = to_vec(spec.at("true_weights"));
  } else {
    RandomStream rng(data_seed, 0x7E);
    const double scale = spec.value("weight_scale", 3.0) / std::sqrt(static_cast<double>(d));
    for (auto& v : w0) v = rng.normal() * scale;
  }
  return EmpiricalLandscape::make(kind, n, w0, spec.value("l2", 0.0), data_seed);
}

ExperimentConfig config_from_json(const json& input) {
  std::vector<std::string> problems;
  if (!input.is_object()) throw ValidationError({"config: top level must be a table"});
  json doc = input;
  ExperimentConfig c;

  const std::set<std::string> known = {"kind", "seed", "output_dir", "landscape", "schedule", "params"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) problems.push_back(key + ": unknown field");
  }

  bool kind_ok = false;
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    problems.push_back("kind: required, one of the experiment kinds");
  } else {
    try {
      c.kind = experiment_kind_from_string(doc["kind"].get<std::string>());
      kind_ok = true;
    } catch (const std::exception& e) {
      problems.push_back(std::string("kind: ") + e.what());
    }
  }
  if (!doc.contains("seed")) {
    problems.push_back("seed: required (runs are never seeded from the clock)");
  } else if (!is_count(doc["seed"], 0)) {
    problems.push_back("seed: must be an integer >= 0");
  } else {
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (doc["output_dir"].is_string() && !doc["output_dir"].get<std::string>().empty()) {
      c.output_dir = doc["output_dir"].get<std::string>();
    } else {
      problems.push_back("output_dir: must be a non-empty string");
    }
  }
  if (!kind_ok) throw ValidationError(problems);

  // Parameters with defaults.
  json params = doc.value("params", json::object());
  if (!params.is_object()) {
    problems.push_back("params: must be a table");
    params = json::object();
  }
  const auto table = params_for(c.kind);
  std::set<std::string> names;
  for (const auto& p : table) {
    names.insert(p.name);
    const std::string field = std::string("params.") + p.name;
    if (!params.contains(p.name)) {
      if (p.fallback.is_null()) {
        if (std::string(p.name) == "data_seed") {
          params[p.name] = c.seed;
          continue;
        }
        problems.push_back(field + ": required");
        continue;
      }
      params[p.name] = p.fallback;
    }
    const auto msg = check_value(params[p.name], p.type);
    if (!msg.empty()) problems.push_back(field + ": " + msg);
  }
  for (const auto& [key, value] : params.items()) {
    if (!names.count(key)) problems.push_back("params." + key + ": unknown field");
  }
  c.params = params;
  auto param_ok = [&](const char* name, T type) {
    return params.contains(name) && check_value(params[name], type).empty();
  };

  // Landscape.
  const Needs need = landscape_need(c.kind);
  std::optional<LandscapeWithCatalog> analytic;
  std::optional<EmpiricalLandscape> empirical;
  if (need == Needs::None) {
    if (doc.contains("landscape")) problems.push_back("landscape: not used by " + to_string(c.kind));
  } else if (!doc.contains("landscape") || !doc["landscape"].is_object() ||
             !doc["landscape"].contains("kind") || !doc["landscape"]["kind"].is_string()) {
    problems.push_back("landscape: required table with a 'kind'");
  } else {
    json l = doc["landscape"];
    const bool is_empirical = l["kind"] == "empirical";
    if (is_empirical && need == Needs::Analytic) {
      problems.push_back("landscape.kind: " + to_string(c.kind) + " needs an analytic landscape");
    } else if (!is_empirical && need == Needs::Empirical) {
      problems.push_back("landscape.kind: " + to_string(c.kind) + " needs kind 'empirical'");
    } else if (is_empirical) {
      const auto before = problems.size();
      check_empirical(l, c.seed, problems);
      if (problems.size() == before) {
        try {
          empirical = build_empirical(l);
        } catch (const std::exception& e) {
          problems.push_back(std::string("landscape: ") + e.what());
        }
      }
    } else {
      try {
        analytic = build_landscape(LandscapeSpec{l});
      } catch (const std::exception& e) {
        problems.push_back(std::string("landscape: ") + e.what());
      }
    }
    c.landscape = l;
  }

  // Schedule.
  std::optional<Schedule> schedule;
  if (needs_schedule(c.kind)) {
    if (!doc.contains("schedule") || !doc["schedule"].is_object()) {
      problems.push_back("schedule: required table");
    } else {
      try {
        schedule = Schedule::from_json(doc["schedule"]);
        c.schedule = schedule->to_json();
        double horizon = 1.0;
        if (param_ok("t_end", T::Positive)) horizon = params["t_end"].get<double>();
        if (param_ok("steps", T::Count)) horizon = params["steps"].get<double>();
        for (auto& p : schedule->problems(horizon)) problems.push_back(std::move(p));
      } catch (const std::exception& e) {
        problems.push_back(std::string("schedule: ") + e.what());
        schedule.reset();
      }
    }
  } else if (doc.contains("schedule")) {
    problems.push_back("schedule: not used by " + to_string(c.kind));
  }

  // Cross-field checks.
  const auto k = c.kind;
  if (analytic) {
    const auto& [land, cat] = *analytic;
    const auto d = static_cast<std::size_t>(land.dimension());
    const auto n_min = cat.minima.size();
    auto check_dim = [&](const char* name) {
      if (params.contains(name) && params[name].is_array() && !params[name].empty() &&
          params[name].size() != d) {
        problems.push_back(std::string("params.") + name + ": length must equal the dimension " +
                           std::to_string(d));
      }
    };
    check_dim("w0");
    check_dim("start");
    auto check_id = [&](const char* name) {
      if (param_ok(name, T::Index) && params[name].get<std::size_t>() >= n_min) {
        problems.push_back(std::string("params.") + name + ": no such minimum (catalog has " +
                           std::to_string(n_min) + ")");
      }
    };
    for (const char* name : {"from", "to", "id1", "id2"}) {
      if (params.contains(name)) check_id(name);
    }
    if (param_ok("minima", T::IndexList)) {
      for (const auto& e : params["minima"]) {
        if (e.get<std::size_t>() >= n_min) problems.push_back("params.minima: no such minimum");
      }
    }
    if ((k == ExperimentKind::EscapeTime || k == ExperimentKind::EscapeSweep) &&
        param_ok("from", T::Index) && param_ok("to", T::Index)) {
      const int from = params["from"].get<int>();
      const int to = params["to"].get<int>();
      if (from == to) {
        problems.push_back("params.to: must differ from params.from");
      } else if (static_cast<std::size_t>(std::max(from, to)) < n_min && !cat.has_barrier(from, to)) {
        problems.push_back("params.to: no barrier between the two minima");
      }
    }
    const bool needs_constant_noise = k == ExperimentKind::StationaryProb ||
                                      k == ExperimentKind::OccupationRatio;
    if (needs_constant_noise && !land.noise().is_constant()) {
      problems.push_back("landscape.noise: " + to_string(k) + " needs constant noise");
    }
    const bool sde_based = k == ExperimentKind::SimulateSde || k == ExperimentKind::EscapeTime ||
                           k == ExperimentKind::EscapeSweep || k == ExperimentKind::OccupationRatio;
    if (sde_based && param_ok("dt", T::Positive) && params["dt"].get<double>() > max_stable_dt(land)) {
      problems.push_back("params.dt: exceeds 0.1 / stiffness = " + std::to_string(max_stable_dt(land)));
    }
    if (k == ExperimentKind::FokkerPlanck && d > 2) {
      problems.push_back("landscape: fokker-planck supports dimension 1 or 2");
    }
    if (k == ExperimentKind::StationaryProb && d > 2) {
      problems.push_back("landscape: stationary-prob supports dimension 1 or 2");
    }
  }
  if (k == ExperimentKind::FokkerPlanck && param_ok("scheme", T::String)) {
    try {
      time_scheme_from_string(params["scheme"].get<std::string>());
    } catch (const std::exception&) {
      problems.push_back("params.scheme: must be auto, explicit or implicit");
    }
  }
  if (k == ExperimentKind::EscapeTime && schedule && !schedule->is_constant()) {
    problems.push_back("schedule.kind: escape-time needs a constant schedule");
  }
  if (k == ExperimentKind::OccupationRatio && param_ok("t_burn", T::NonNegative) &&
      param_ok("t_total", T::Positive) && params["t_burn"].get<double>() >= params["t_total"].get<double>()) {
    problems.push_back("params.t_burn: must be below params.t_total");
  }
  if (k == ExperimentKind::AppendixH && param_ok("example", T::Count) && params["example"].get<int>() > 3) {
    problems.push_back("params.example: must be 1, 2 or 3");
  }
  if (empirical) {
    const auto n = empirical->size();
    const auto d = static_cast<std::size_t>(empirical->dimension());
    if (schedule) {
      for (double t : {0.0, 1e12}) {
        if (schedule->batch(t) > static_cast<double>(n)) {
          problems.push_back("schedule.batch: exceeds the sample count " + std::to_string(n));
          break;
        }
      }
    }
    if (param_ok("batch_sizes", T::CountList)) {
      for (const auto& e : params["batch_sizes"]) {
        if (e.get<std::size_t>() > n) problems.push_back("params.batch_sizes: exceeds the sample count");
      }
    }
    if (params.contains("w") && params["w"].is_array() && !params["w"].empty() && params["w"].size() != d) {
      problems.push_back("params.w: length must equal the dimension " + std::to_string(d));
    }
  }
  if (k == ExperimentKind::SharpnessToy && param_ok("pairs", T::Pairs) && param_ok("samples", T::Count)) {
    for (const auto& p : params["pairs"]) {
      if (p[1].get<std::size_t>() > params["samples"].get<std::size_t>()) {
        problems.push_back("params.pairs: batch exceeds params.samples");
      }
    }
    if (param_ok("seeds", T::Count) && params["seeds"].get<int>() < 2) {
      problems.push_back("params.seeds: at least 2 seeds are needed for a spread");
    }
    if (param_ok("rank_epoch", T::Count) && param_ok("epochs", T::Count) &&
        params["rank_epoch"].get<int>() > params["epochs"].get<int>()) {
      problems.push_back("params.rank_epoch: must not exceed params.epochs");
    }
  }

  if (!problems.empty()) throw ValidationError(problems);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({"config: cannot read " + path.string()});
  std::stringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = parse_config_text(ss.str());
  } catch (const std::exception& e) {
    throw ValidationError({std::string("config: parse error: ") + e.what()});
  }
  return config_from_json(doc);
}

}  // namespace sgdlab
