#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace mupo::io {

struct EmbedClientOptions {
  int max_retries = 3;     // retries after the initial attempt
  int base_delay_ms = 500; // exponential backoff base
};

/// Fetches embeddings for the given texts in one request:
/// POST {"texts": [...]} -> {"embeddings": [[...], ...]}, same order and
/// count. Vectors are unit-normalized on receipt. Connection failures and
/// 5xx responses are retried with exponential backoff; count mismatches,
/// non-finite values and other non-2xx statuses throw std::runtime_error.
std::vector<Eigen::VectorXd> fetch_embeddings(const std::vector<std::string>& texts,
                                              const std::string& endpoint,
                                              const EmbedClientOptions& opts = {});

}  // namespace mupo::io
