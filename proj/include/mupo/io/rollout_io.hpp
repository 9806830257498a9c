#pragma once

#include "mupo/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mupo::io {

/// One line of a rollout file. example_id, response and correct are
/// required; reasoning, embedding and well_formed are optional.
struct RolloutFileRecord {
  std::string example_id;
  std::string response;
  std::optional<std::string> reasoning;
  std::optional<Eigen::VectorXd> embedding;
  bool correct = false;
  std::optional<bool> well_formed;
};

struct IngestOptions {
  std::string open_tag = "<think>";
  std::string close_tag = "</think>";
  // When set, every record must carry either reasoning text (possibly
  // extracted from the response) or an embedding.
  bool require_diversity_inputs = false;
};

/// Rollouts of one example, in file order. rollout_id is the index within
/// the example; reasoning holds the per-rollout text used for embedding
/// lookups; records without a stored embedding have an empty embedding
/// vector until ensure_embeddings fills it.
struct IngestedExample {
  std::string example_id;
  std::vector<RolloutRecord> rollouts;
  std::vector<std::string> reasoning;
};

/// Parses a line-delimited JSON rollout file, validates and normalizes
/// stored embeddings, extracts reasoning segments between the configured
/// tags (whole response as fallback) and groups records by example_id
/// preserving file order. Malformed lines and empty files throw with the
/// line number.
std::vector<IngestedExample> ingest_rollouts(const std::string& path,
                                             const IngestOptions& opts = {});

/// Fills missing embeddings by batching the affected reasoning texts into a
/// single embedding-service request. Throws when embeddings are missing and
/// no endpoint is given.
void ensure_embeddings(std::vector<IngestedExample>& examples, const std::string& endpoint);

/// True when every rollout of every example has an embedding.
bool all_embeddings_present(const std::vector<IngestedExample>& examples);

}  // namespace mupo::io
