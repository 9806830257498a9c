#include "mupo/io/rollout_io.hpp"

#include "mupo/embedding.hpp"
#include "mupo/io/embed_client.hpp"
#include "mupo/reward.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <stdexcept>

namespace mupo::io {

using nlohmann::json;

namespace {

std::string extract_reasoning(const std::string& response, const IngestOptions& opts) {
  const auto open = response.find(opts.open_tag);
  if (open != std::string::npos) {
    const auto begin = open + opts.open_tag.size();
    const auto close = response.find(opts.close_tag, begin);
    if (close != std::string::npos) return response.substr(begin, close - begin);
  }
  return response;  // fallback: the whole response
}

RolloutFileRecord parse_record(const json& doc, int line_no) {
  RolloutFileRecord record;
  try {
    record.example_id = doc.at("example_id").get<std::string>();
    record.response = doc.at("response").get<std::string>();
    record.correct = doc.at("correct").get<bool>();
    if (doc.contains("reasoning") && !doc["reasoning"].is_null()) {
      record.reasoning = doc["reasoning"].get<std::string>();
    }
    if (doc.contains("well_formed") && !doc["well_formed"].is_null()) {
      record.well_formed = doc["well_formed"].get<bool>();
    }
    if (doc.contains("embedding") && !doc["embedding"].is_null()) {
      const auto values = doc["embedding"].get<std::vector<double>>();
      Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
      for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
      record.embedding = std::move(v);
    }
  } catch (const json::exception& e) {
    throw std::runtime_error("rollout file line " + std::to_string(line_no) + ": " + e.what());
  }
  return record;
}

}  // namespace

std::vector<IngestedExample> ingest_rollouts(const std::string& path, const IngestOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rollout file '" + path + "'");

  std::vector<IngestedExample> examples;
  std::map<std::string, std::size_t> index_of;
  std::string line;
  int line_no = 0;
  int records = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("rollout file line " + std::to_string(line_no) + ": " + e.what());
    }
    const RolloutFileRecord raw = parse_record(doc, line_no);

    const std::string reasoning =
        raw.reasoning.has_value() ? *raw.reasoning : extract_reasoning(raw.response, opts);
    if (opts.require_diversity_inputs && !raw.embedding.has_value() && reasoning.empty()) {
      throw std::runtime_error("rollout file line " + std::to_string(line_no) +
                               ": record has neither reasoning text nor an embedding");
    }

    auto [it, inserted] = index_of.try_emplace(raw.example_id, examples.size());
    if (inserted) examples.push_back(IngestedExample{raw.example_id, {}, {}});
    IngestedExample& example = examples[it->second];

    RolloutRecord rollout;
    rollout.rollout_id = static_cast<int>(example.rollouts.size());
    rollout.example_id = raw.example_id;
    rollout.token_count = 1;  // sequence-level replay, no token stream stored
    rollout.correct = raw.correct;
    rollout.well_formed = raw.well_formed.has_value()
                              ? *raw.well_formed
                              : verify_format(raw.response, opts.open_tag, opts.close_tag);
    if (raw.embedding.has_value()) {
      try {
        rollout.embedding = normalized(*raw.embedding);
      } catch (const std::exception& e) {
        throw std::runtime_error("rollout file line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    example.rollouts.push_back(std::move(rollout));
    example.reasoning.push_back(reasoning);
    ++records;
  }

  if (records == 0) throw std::runtime_error("rollout file '" + path + "' contains no records");
  return examples;
}

bool all_embeddings_present(const std::vector<IngestedExample>& examples) {
  for (const IngestedExample& example : examples) {
    for (const RolloutRecord& rollout : example.rollouts) {
      if (rollout.embedding.size() == 0) return false;
    }
  }
  return true;
}

void ensure_embeddings(std::vector<IngestedExample>& examples, const std::string& endpoint) {
  std::vector<std::string> texts;
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t e = 0; e < examples.size(); ++e) {
    for (std::size_t r = 0; r < examples[e].rollouts.size(); ++r) {
      if (examples[e].rollouts[r].embedding.size() == 0) {
        texts.push_back(examples[e].reasoning[r]);
        slots.emplace_back(e, r);
      }
    }
  }
  if (texts.empty()) return;
  if (endpoint.empty()) {
    throw std::runtime_error("rollouts are missing embeddings and no embedding endpoint is set");
  }
  const std::vector<Eigen::VectorXd> fetched = fetch_embeddings(texts, endpoint);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    examples[slots[i].first].rollouts[slots[i].second].embedding = fetched[i];
  }
}

}  // namespace mupo::io
