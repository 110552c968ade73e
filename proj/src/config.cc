// Copyright 2026 The dpscomp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpscomp/config.h"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "dpscomp/errors.h"

namespace dpscomp {
namespace {

const std::set<std::string> kKnownKeys = {
    "layout",    "Q",        "K",          "M",          "antennas",
    "pathloss_exponent",     "noise_psd",  "gamma_db",   "weights",
    "power_caps", "clustering", "channels", "seed"};

template <typename T>
T Scalar(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + what + "' has the wrong type");
  }
}

std::vector<double> ScalarOrList(const YAML::Node& node,
                                 const std::string& what) {
  std::vector<double> values;
  if (node.IsScalar()) {
    values.push_back(Scalar<double>(node, what));
  } else if (node.IsSequence()) {
    for (const auto& item : node) values.push_back(Scalar<double>(item, what));
  } else {
    throw ConfigError("'" + what + "' must be a number or a list of numbers");
  }
  return values;
}

std::vector<Point2> Points(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) throw ConfigError("'" + what + "' must be a list");
  std::vector<Point2> points;
  for (const auto& item : node) {
    if (!item.IsSequence() || item.size() != 2) {
      throw ConfigError("each entry of '" + what + "' must be [x, y]");
    }
    points.push_back({Scalar<double>(item[0], what), Scalar<double>(item[1], what)});
  }
  return points;
}

std::vector<std::vector<int>> IndexLists(const YAML::Node& node,
                                         const std::string& what) {
  if (!node.IsSequence()) throw ConfigError("'" + what + "' must be a list");
  std::vector<std::vector<int>> lists;
  for (const auto& item : node) {
    if (!item.IsSequence()) {
      throw ConfigError("each entry of '" + what + "' must be a list of BSs");
    }
    std::vector<int> list;
    for (const auto& v : item) {
      const int bs = Scalar<int>(v, what);
      if (bs < 1) throw ConfigError("BS numbers in '" + what + "' start at 1");
      list.push_back(bs - 1);
    }
    if (list.empty()) {
      throw ConfigError("'" + what + "' contains an empty BS list");
    }
    lists.push_back(std::move(list));
  }
  return lists;
}

void ParseLayout(const YAML::Node& node, ScenarioConfig& config) {
  if (node.IsScalar()) {
    const std::string name = node.as<std::string>();
    if (name == "two_cell") {
      config.bs_positions = TwoCellLayout();
    } else if (name == "seven_cell") {
      config.bs_positions = SevenCellLayout();
    } else {
      throw ConfigError("unknown layout '" + name + "'");
    }
    return;
  }
  if (!node.IsMap() || !node["bs"]) {
    throw ConfigError("layout must be two_cell, seven_cell or {bs: ..., ms: ...}");
  }
  config.bs_positions = Points(node["bs"], "layout.bs");
  if (node["ms"]) config.ms_positions = Points(node["ms"], "layout.ms");
}

void ParseClustering(const YAML::Node& node, ScenarioConfig& config) {
  if (node.IsScalar()) {
    if (node.as<std::string>() != "universal") {
      throw ConfigError("clustering must be universal, grouped or candidates");
    }
    config.cluster_mode = ClusterMode::Universal();
    return;
  }
  if (node.IsMap() && node["grouped"]) {
    config.cluster_mode =
        ClusterMode::Grouped(IndexLists(node["grouped"], "clustering.grouped"));
    return;
  }
  if (node.IsMap() && node["candidates"]) {
    config.candidate_sets =
        IndexLists(node["candidates"], "clustering.candidates");
    return;
  }
  throw ConfigError("clustering must be universal, grouped or candidates");
}

CVector ParseVector(const YAML::Node& node) {
  if (!node.IsSequence() || node.size() == 0) {
    throw ConfigError("channel 'h' must be a nonempty list");
  }
  CVector h(node.size());
  for (size_t m = 0; m < node.size(); ++m) {
    const YAML::Node& entry = node[m];
    if (entry.IsSequence()) {
      if (entry.size() != 2) {
        throw ConfigError("complex channel entries must be [re, im]");
      }
      h(m) = Complex(Scalar<double>(entry[0], "h"), Scalar<double>(entry[1], "h"));
    } else {
      h(m) = Complex(Scalar<double>(entry, "h"), 0.0);
    }
  }
  return h;
}

void ParseChannels(const YAML::Node& node, ScenarioConfig& config) {
  if (!node.IsSequence()) throw ConfigError("'channels' must be a list");
  for (const auto& item : node) {
    if (!item.IsMap() || !item["ms"] || !item["bs"] || !item["h"]) {
      throw ConfigError("each channel needs ms, bs and h");
    }
    ExplicitChannel channel;
    channel.ms = Scalar<int>(item["ms"], "channels.ms") - 1;
    channel.bs = Scalar<int>(item["bs"], "channels.bs") - 1;
    if (channel.ms < 0 || channel.bs < 0) {
      throw ConfigError("channel ms and bs numbers start at 1");
    }
    channel.h = ParseVector(item["h"]);
    config.channels.push_back(std::move(channel));
  }
}

std::vector<double> PerBs(const std::vector<double>& values, int num_bs,
                          const std::string& what) {
  if (values.empty()) return std::vector<double>(num_bs, 1.0);
  if (values.size() == 1) return std::vector<double>(num_bs, values[0]);
  if (static_cast<int>(values.size()) != num_bs) {
    throw ConfigError("'" + what + "' needs one value per BS");
  }
  return values;
}

}  // namespace

ScenarioConfig ParseConfig(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config must be a key-value map");
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
  }

  ScenarioConfig config;
  if (root["layout"]) ParseLayout(root["layout"], config);
  if (root["channels"]) ParseChannels(root["channels"], config);
  if (root["M"] && root["antennas"]) {
    throw ConfigError("give either M or antennas, not both");
  }
  if (root["M"]) config.antennas = Scalar<int>(root["M"], "M");
  if (root["antennas"]) config.antennas = Scalar<int>(root["antennas"], "antennas");
  if (config.antennas < 1) throw ConfigError("M must be at least 1");
  if (root["pathloss_exponent"]) {
    config.pathloss_exponent =
        Scalar<double>(root["pathloss_exponent"], "pathloss_exponent");
  }
  if (root["noise_psd"]) {
    config.noise_psd = Scalar<double>(root["noise_psd"], "noise_psd");
  }
  if (!(config.noise_psd > 0.0)) throw ConfigError("noise_psd must be positive");
  if (!(config.pathloss_exponent > 0.0)) {
    throw ConfigError("pathloss_exponent must be positive");
  }
  if (root["seed"]) config.seed = Scalar<uint64_t>(root["seed"], "seed");
  if (root["clustering"]) ParseClustering(root["clustering"], config);

  // Q: the layout, or the Q key, or the largest BS named in the channels.
  if (config.has_layout()) {
    config.num_bs = static_cast<int>(config.bs_positions.size());
    if (root["Q"] && Scalar<int>(root["Q"], "Q") != config.num_bs) {
      throw ConfigError("Q disagrees with the layout");
    }
  } else if (root["Q"]) {
    config.num_bs = Scalar<int>(root["Q"], "Q");
  } else {
    for (const auto& c : config.channels) {
      config.num_bs = std::max(config.num_bs, c.bs + 1);
    }
  }
  if (config.num_bs < 1) throw ConfigError("need a layout, Q, or channels");

  if (config.ms_positions) {
    config.num_ms = static_cast<int>(config.ms_positions->size());
    if (root["K"] && Scalar<int>(root["K"], "K") != config.num_ms) {
      throw ConfigError("K disagrees with the explicit MS positions");
    }
  } else if (root["K"]) {
    config.num_ms = Scalar<int>(root["K"], "K");
  } else {
    for (const auto& c : config.channels) {
      config.num_ms = std::max(config.num_ms, c.ms + 1);
    }
  }
  if (config.num_ms < 1) throw ConfigError("K must be at least 1");

  if (!config.has_layout() && config.channels.empty()) {
    throw ConfigError("need a layout or explicit channels");
  }
  for (const auto& c : config.channels) {
    if (c.ms >= config.num_ms || c.bs >= config.num_bs) {
      throw ConfigError("channel names an MS or BS outside the instance");
    }
    if (c.h.size() != config.antennas) {
      throw ConfigError("channel length differs from M");
    }
  }

  if (root["gamma_db"]) config.gamma_db = ScalarOrList(root["gamma_db"], "gamma_db");
  if (config.gamma_db.size() != 1 &&
      static_cast<int>(config.gamma_db.size()) != config.num_ms) {
    throw ConfigError("gamma_db needs one value or one per MS");
  }
  if (root["weights"]) config.weights = ScalarOrList(root["weights"], "weights");
  if (root["power_caps"]) {
    config.power_caps = ScalarOrList(root["power_caps"], "power_caps");
  }
  config.weights = PerBs(config.weights, config.num_bs, "weights");
  config.power_caps = PerBs(config.power_caps, config.num_bs, "power_caps");
  for (double w : config.weights) {
    if (!(w > 0.0)) throw ConfigError("weights must be positive");
  }
  for (double p : config.power_caps) {
    if (!(p > 0.0)) throw ConfigError("power_caps must be positive");
  }
  if (config.candidate_sets &&
      static_cast<int>(config.candidate_sets->size()) != config.num_ms) {
    throw ConfigError("clustering.candidates needs one BS list per MS");
  }
  if (config.cluster_mode.kind == ClusterMode::Kind::kGrouped &&
      !config.has_layout()) {
    throw ConfigError("grouped clustering needs a layout");
  }
  return config;
}

ScenarioConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::optional<Geometry> BuildGeometry(const ScenarioConfig& config,
                                      uint64_t seed) {
  if (!config.has_layout()) return std::nullopt;
  Geometry geometry;
  geometry.bs_positions = config.bs_positions;
  geometry.ms_positions =
      config.ms_positions
          ? *config.ms_positions
          : PlaceMobiles(config.bs_positions, config.num_ms, seed);
  geometry.Validate();
  return geometry;
}

ProblemInstance BuildInstance(const ScenarioConfig& config, uint64_t seed) {
  ProblemInstance instance;
  instance.geometry = BuildGeometry(config, seed);
  const bool all_explicit =
      static_cast<int>(config.channels.size()) >= config.num_ms * config.num_bs;
  if (instance.geometry && !all_explicit) {
    instance.channels =
        GenerateChannels(*instance.geometry, config.antennas,
                         config.pathloss_exponent, config.noise_psd, seed);
  } else {
    instance.channels = ChannelSet(config.num_ms, config.num_bs,
                                   config.antennas, config.noise_psd);
  }
  for (const auto& c : config.channels) instance.channels.at(c.ms, c.bs) = c.h;

  if (config.candidate_sets) {
    instance.clustering = Clustering(config.num_bs, *config.candidate_sets);
  } else if (instance.geometry) {
    instance.clustering = BuildClusters(*instance.geometry, config.cluster_mode);
  } else {
    instance.clustering = Clustering::Universal(config.num_bs, config.num_ms);
  }
  for (int i = 0; i < config.num_ms; ++i) {
    bool linked = false;
    for (int q : instance.clustering.candidates(i)) {
      linked = linked || instance.channels.at(i, q).squaredNorm() > 0.0;
    }
    if (!linked) {
      throw ConfigError("MS " + std::to_string(i + 1) +
                        " has no nonzero channel to a candidate BS");
    }
  }

  instance.gamma.resize(config.num_ms);
  for (int i = 0; i < config.num_ms; ++i) {
    instance.gamma[i] = LinearFromDb(
        config.gamma_db.size() == 1 ? config.gamma_db[0] : config.gamma_db[i]);
  }
  instance.weights = config.weights;
  instance.power_caps = config.power_caps;
  instance.Validate();
  return instance;
}

ProblemInstance WithCommonTarget(ProblemInstance instance, double gamma_db) {
  std::fill(instance.gamma.begin(), instance.gamma.end(), LinearFromDb(gamma_db));
  return instance;
}

}  // namespace dpscomp
