#include "mupo/sim/landscape.hpp"

#include "mupo/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mupo::sim {

using nlohmann::json;

void validate_landscape(const LandscapeConfig& land) {
  if (land.num_actions < 1) throw std::invalid_argument("landscape: num_actions must be >= 1");
  if (land.num_steps < 1) throw std::invalid_argument("landscape: num_steps must be >= 1");
  int max_radius = 0;
  for (const ModeSpec& mode : land.modes) {
    if (mode.prototype.size() != land.num_steps) {
      throw std::invalid_argument("landscape: prototype length differs from num_steps");
    }
    for (Eigen::Index t = 0; t < mode.prototype.size(); ++t) {
      if (mode.prototype[t] < 0 || mode.prototype[t] >= land.num_actions) {
        throw std::invalid_argument("landscape: prototype action out of range");
      }
    }
    if (mode.radius < 0 || mode.radius >= land.num_steps) {
      throw std::invalid_argument("landscape: radius must be in [0, num_steps)");
    }
    if (mode.success_prob < 0.0 || mode.success_prob > 1.0) {
      throw std::invalid_argument("landscape: success_prob must be in [0, 1]");
    }
    max_radius = std::max(max_radius, mode.radius);
  }
  for (std::size_t a = 0; a < land.modes.size(); ++a) {
    for (std::size_t b = a + 1; b < land.modes.size(); ++b) {
      if (hamming_distance(land.modes[a].prototype, land.modes[b].prototype) <= 2 * max_radius) {
        throw std::invalid_argument("landscape: mode balls overlap");
      }
    }
  }
}

namespace {

Eigen::VectorXi constant_trajectory(int steps, int action) {
  return Eigen::VectorXi::Constant(steps, action);
}

}  // namespace

LandscapeConfig canned_landscape(const std::string& name) {
  LandscapeConfig land;
  if (name == "easy") {
    // Single always-rewarding mode at the initial policy's argmax.
    land.num_actions = 4;
    land.num_steps = 4;
    land.init_bias = 1.0;
    land.modes.push_back({constant_trajectory(4, 0), 1, 1.0});
  } else if (name == "collapse-demo") {
    // A narrow, unreliable mode sits at the start bias; two wide reliable
    // modes lie far away. Global advantage normalization digs into the
    // biased mode and concentrates hard; grouped training escapes to the
    // wide modes and keeps sampling spread across them.
    land.num_actions = 3;
    land.num_steps = 5;
    land.init_bias = 0.8;
    land.modes.push_back({constant_trajectory(5, 0), 1, 0.85});
    land.modes.push_back({constant_trajectory(5, 1), 2, 1.0});
    land.modes.push_back({constant_trajectory(5, 2), 2, 1.0});
  } else if (name == "deceptive-modes") {
    // The start bias points at a weak mode; a much stronger mode shares two
    // leading actions, reachable by flipping the last three positions.
    land.num_actions = 4;
    land.num_steps = 5;
    land.init_bias = 1.0;
    Eigen::VectorXi near = constant_trajectory(5, 0);
    Eigen::VectorXi far = constant_trajectory(5, 3);
    far[0] = 0;
    far[1] = 0;
    land.modes.push_back({near, 1, 0.3});
    land.modes.push_back({far, 1, 0.9});
  } else {
    throw std::invalid_argument("unknown canned landscape '" + name + "'");
  }
  validate_landscape(land);
  return land;
}

bool is_canned_landscape(const std::string& name) {
  return name == "easy" || name == "collapse-demo" || name == "deceptive-modes";
}

LandscapeConfig landscape_from_json_text(const std::string& text) {
  json doc = json::parse(text);
  LandscapeConfig land;
  land.num_actions = doc.at("num_actions").get<int>();
  land.num_steps = doc.at("num_steps").get<int>();
  land.init_bias = doc.value("init_bias", 0.0);
  for (const json& mode_doc : doc.at("modes")) {
    ModeSpec mode;
    const auto actions = mode_doc.at("prototype").get<std::vector<int>>();
    mode.prototype.resize(static_cast<Eigen::Index>(actions.size()));
    for (std::size_t t = 0; t < actions.size(); ++t) {
      mode.prototype[static_cast<Eigen::Index>(t)] = actions[t];
    }
    mode.radius = mode_doc.at("radius").get<int>();
    mode.success_prob = mode_doc.at("success_prob").get<double>();
    land.modes.push_back(std::move(mode));
  }
  validate_landscape(land);
  return land;
}

LandscapeConfig landscape_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open landscape file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return landscape_from_json_text(buffer.str());
  } catch (const json::exception& e) {
    throw std::runtime_error("landscape file '" + path + "': " + e.what());
  }
}

int hamming_distance(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  int distance = 0;
  for (Eigen::Index t = 0; t < a.size(); ++t) {
    if (a[t] != b[t]) ++distance;
  }
  return distance;
}

int match_mode(const Eigen::VectorXi& trajectory, const LandscapeConfig& land) {
  for (std::size_t m = 0; m < land.modes.size(); ++m) {
    if (hamming_distance(trajectory, land.modes[m].prototype) <= land.modes[m].radius) {
      return static_cast<int>(m);
    }
  }
  return -1;
}

Eigen::VectorXd trajectory_embedding(const Eigen::VectorXi& trajectory,
                                     const LandscapeConfig& land) {
  if (trajectory.size() != land.num_steps) {
    throw std::invalid_argument("trajectory_embedding: wrong trajectory length");
  }
  Eigen::VectorXd embedding = Eigen::VectorXd::Zero(land.embedding_dim());
  const double value = 1.0 / std::sqrt(static_cast<double>(land.num_steps));
  for (int t = 0; t < land.num_steps; ++t) {
    const int action = trajectory[t];
    if (action < 0 || action >= land.num_actions) {
      throw std::invalid_argument("trajectory_embedding: action out of range");
    }
    embedding[t * land.num_actions + action] = value;
  }
  return embedding;
}

TrajectoryVerdict trajectory_reward(const Eigen::VectorXi& trajectory,
                                    const LandscapeConfig& land, std::mt19937_64& rng) {
  TrajectoryVerdict verdict;
  const int mode = match_mode(trajectory, land);
  if (mode >= 0) {
    verdict.correct = bernoulli(land.modes[static_cast<std::size_t>(mode)].success_prob, rng);
  }
  return verdict;
}

double exact_expected_reward(const TabularPolicy& policy, const LandscapeConfig& land) {
  if (policy.num_steps() != land.num_steps || policy.num_actions() != land.num_actions) {
    throw std::invalid_argument("exact_expected_reward: policy shape differs from the landscape");
  }
  if (std::pow(static_cast<double>(land.num_actions), land.num_steps) > kEnumerationGuard) {
    throw std::invalid_argument("exact_expected_reward: state space too large to enumerate");
  }
  const Eigen::MatrixXd probs = policy.step_prob_matrix();
  Eigen::VectorXi trajectory(land.num_steps);

  // Depth-first over all trajectories with a running probability prefix.
  double total = 0.0;
  auto visit = [&](auto&& self, int t, double prefix) -> void {
    if (t == land.num_steps) {
      const int mode = match_mode(trajectory, land);
      if (mode >= 0) total += prefix * land.modes[static_cast<std::size_t>(mode)].success_prob;
      return;
    }
    for (int a = 0; a < land.num_actions; ++a) {
      trajectory[t] = a;
      self(self, t + 1, prefix * probs(t, a));
    }
  };
  visit(visit, 0, 1.0);
  return total;
}

TabularPolicy initial_policy(const LandscapeConfig& land) {
  TabularPolicy policy = TabularPolicy::zeros(land.num_steps, land.num_actions);
  if (land.init_bias != 0.0 && !land.modes.empty()) {
    const Eigen::VectorXi& anchor = land.modes.front().prototype;
    for (int t = 0; t < land.num_steps; ++t) {
      policy.logits(t, anchor[t]) += land.init_bias;
    }
  }
  return policy;
}

}  // namespace mupo::sim
