#include "mupo/io/embed_client.hpp"

#include "mupo/embedding.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mupo::io {

using nlohmann::json;

namespace {

struct ParsedEndpoint {
  std::string host_port;  // scheme://host:port
  std::string path;
};

ParsedEndpoint parse_endpoint(const std::string& endpoint) {
  if (endpoint.rfind("http://", 0) != 0) {
    throw std::runtime_error("embedding endpoint must start with http://, got '" + endpoint + "'");
  }
  const auto path_start = endpoint.find('/', 7);
  ParsedEndpoint parsed;
  if (path_start == std::string::npos) {
    parsed.host_port = endpoint;
    parsed.path = "/";
  } else {
    parsed.host_port = endpoint.substr(0, path_start);
    parsed.path = endpoint.substr(path_start);
  }
  return parsed;
}

}  // namespace

std::vector<Eigen::VectorXd> fetch_embeddings(const std::vector<std::string>& texts,
                                              const std::string& endpoint,
                                              const EmbedClientOptions& opts) {
  const ParsedEndpoint parsed = parse_endpoint(endpoint);
  json body;
  body["texts"] = texts;
  const std::string payload = body.dump();

  httplib::Result result;
  std::string last_error;
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = std::chrono::milliseconds(
          static_cast<long long>(opts.base_delay_ms) * (1LL << (attempt - 1)));
      std::this_thread::sleep_for(delay);
    }
    httplib::Client client(parsed.host_port);
    result = client.Post(parsed.path, payload, "application/json");
    if (!result) {
      last_error = "connection failed: " + httplib::to_string(result.error());
      continue;  // transient
    }
    if (result->status >= 500) {
      last_error = "server error " + std::to_string(result->status);
      continue;  // transient
    }
    if (result->status < 200 || result->status >= 300) {
      throw std::runtime_error("embedding service returned status " +
                               std::to_string(result->status));
    }
    break;
  }
  if (!result || result->status >= 500) {
    throw std::runtime_error("embedding service unreachable after retries: " + last_error);
  }

  json doc;
  try {
    doc = json::parse(result->body);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("embedding service: malformed response: ") + e.what());
  }
  if (!doc.contains("embeddings") || !doc["embeddings"].is_array()) {
    throw std::runtime_error("embedding service: response lacks an 'embeddings' array");
  }
  if (doc["embeddings"].size() != texts.size()) {
    throw std::runtime_error("embedding service: count mismatch (" +
                             std::to_string(doc["embeddings"].size()) + " vectors for " +
                             std::to_string(texts.size()) + " texts)");
  }

  std::vector<Eigen::VectorXd> out;
  out.reserve(texts.size());
  for (const json& entry : doc["embeddings"]) {
    if (!entry.is_array()) throw std::runtime_error("embedding service: vector is not an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(entry.size()));
    Eigen::Index i = 0;
    for (const json& element : entry) {
      // NaN/Inf serialize as null in JSON, so both count as non-finite
      if (!element.is_number() || !std::isfinite(element.get<double>())) {
        throw std::runtime_error("embedding service: non-finite embedding value");
      }
      v[i++] = element.get<double>();
    }
    out.push_back(normalized(v));
  }
  return out;
}

}  // namespace mupo::io
