#pragma once

#include "mupo/config.hpp"

#include <map>
#include <string>

namespace mupo::io {

/// Parses a flat `key = value` config document ('#' comments, blank lines
/// allowed) into raw string pairs; duplicate keys keep the last value.
std::map<std::string, std::string> parse_flat_config(const std::string& path);

/// Applies one entry onto a config. Keys mirror the MupoConfig fields:
/// N, K, G_min, beta, lambda_max, lambda_min, t_max, clip_eps, std_floor,
/// advantage_scope, seed, sample_std. Unknown keys or unparsable values
/// throw std::invalid_argument.
void apply_config_entry(MupoConfig& cfg, const std::string& key, const std::string& value);

/// Loads a config file on top of the given base config.
MupoConfig config_from_file(const std::string& path, const MupoConfig& base = MupoConfig{});

}  // namespace mupo::io
