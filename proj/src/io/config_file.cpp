#include "mupo/io/config_file.hpp"

#include <fstream>
#include <stdexcept>

namespace mupo::io {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not an integer: '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not a number: '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config key " + key + ": not a boolean: '" + value + "'");
}

}  // namespace

std::map<std::string, std::string> parse_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config file line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config file line " + std::to_string(line_no) + ": empty key");
    }
    entries[key] = value;
  }
  return entries;
}

void apply_config_entry(MupoConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "N") {
    cfg.n = parse_int(key, value);
  } else if (key == "K") {
    cfg.k = parse_int(key, value);
  } else if (key == "G_min") {
    cfg.g_min = parse_int(key, value);
  } else if (key == "beta") {
    cfg.beta = parse_real(key, value);
  } else if (key == "lambda_max") {
    cfg.lambda_max = parse_real(key, value);
  } else if (key == "lambda_min") {
    cfg.lambda_min = parse_real(key, value);
  } else if (key == "t_max") {
    cfg.t_max = parse_int(key, value);
  } else if (key == "clip_eps") {
    cfg.clip_eps = parse_real(key, value);
  } else if (key == "std_floor") {
    cfg.std_floor = parse_real(key, value);
  } else if (key == "advantage_scope") {
    cfg.advantage_scope = advantage_scope_from_string(value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
  } else if (key == "sample_std") {
    cfg.sample_std = parse_bool(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

MupoConfig config_from_file(const std::string& path, const MupoConfig& base) {
  MupoConfig cfg = base;
  for (const auto& [key, value] : parse_flat_config(path)) {
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

}  // namespace mupo::io
