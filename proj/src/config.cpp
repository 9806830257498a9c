#include "mupo/config.hpp"

#include <stdexcept>

namespace mupo {

std::string to_string(AdvantageScope scope) {
  return scope == AdvantageScope::kGroupLocal ? "group_local" : "global";
}

AdvantageScope advantage_scope_from_string(const std::string& s) {
  if (s == "group_local") return AdvantageScope::kGroupLocal;
  if (s == "global") return AdvantageScope::kGlobal;
  throw std::invalid_argument("advantage_scope: expected 'group_local' or 'global', got '" + s +
                              "'");
}

bool operator==(const MupoConfig& a, const MupoConfig& b) {
  return a.n == b.n && a.k == b.k && a.g_min == b.g_min && a.beta == b.beta &&
         a.lambda_max == b.lambda_max && a.lambda_min == b.lambda_min && a.t_max == b.t_max &&
         a.clip_eps == b.clip_eps && a.std_floor == b.std_floor &&
         a.advantage_scope == b.advantage_scope && a.seed == b.seed &&
         a.sample_std == b.sample_std && a.k_reduced == b.k_reduced;
}

MupoConfig validate_config(const MupoConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("config field N: must be >= 1");
  if (cfg.k < 1) throw std::invalid_argument("config field K: must be >= 1");
  if (cfg.g_min < 1) throw std::invalid_argument("config field G_min: must be >= 1");
  if (cfg.beta < 0.0) throw std::invalid_argument("config field beta: must be >= 0");
  if (cfg.lambda_min < 0.0) throw std::invalid_argument("config field lambda_min: must be >= 0");
  if (cfg.lambda_min > cfg.lambda_max) {
    throw std::invalid_argument("config field lambda_min: lambda_min > lambda_max");
  }
  if (cfg.t_max < 1) throw std::invalid_argument("config field t_max: must be >= 1");
  if (!(cfg.clip_eps > 0.0 && cfg.clip_eps < 1.0)) {
    throw std::invalid_argument("config field clip_eps: must be in (0, 1)");
  }
  if (cfg.std_floor < 0.0) throw std::invalid_argument("config field std_floor: must be >= 0");

  MupoConfig out = cfg;
  if (static_cast<long long>(out.k) * out.g_min > out.n) {
    // Batch composition varies at runtime; an infeasible group count must
    // not abort a run, so reduce it to the largest feasible value.
    out.k = std::max(1, out.n / out.g_min);
    out.k_reduced = true;
  }
  return out;
}

}  // namespace mupo
