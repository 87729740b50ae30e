#pragma once

#include <span>
#include <string>
#include <vector>

#include "flipmap/codec.hpp"
#include "flipmap/embedding.hpp"
#include "flipmap/error.hpp"

namespace flipmap::semantics {

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroNorm : public Error {
 public:
  using Error::Error;
};

// dot(a,b) / (|a||b|), clamped into [-1, 1]. Bitwise-identical inputs return
// exactly 1.0, which keeps the self-similarity reference exact.
double cosine(std::span<const double> a, std::span<const double> b);

struct EmbeddingVector {
  std::string prompt_id;
  codec::TransformMode mode = codec::TransformMode::IDENTITY;
  std::vector<double> values;
  std::string model_tag;
};

// Per-prompt cosine against the prompt's own IDENTITY embedding.
struct SimilarityRow {
  std::string prompt_id;
  codec::TransformMode mode = codec::TransformMode::IDENTITY;
  double cosine = 0.0;
};

struct ModeStats {
  codec::TransformMode mode = codec::TransformMode::IDENTITY;
  size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

// A prompt that could not be encoded or embedded; the batch carries on.
struct SimilarityFailure {
  std::string prompt_id;
  codec::TransformMode mode = codec::TransformMode::IDENTITY;
  std::string error;
};

struct SimilarityReport {
  std::vector<ModeStats> per_mode;
  std::vector<SimilarityRow> per_prompt;
  std::vector<SimilarityFailure> failures;
  size_t dataset_size = 0;
  std::string model_tag;
};

// Encoded-and-embedded dataset: one vector per (prompt, mode), including the
// IDENTITY reference vectors, plus any per-prompt failures.
struct EmbeddingSet {
  std::vector<EmbeddingVector> vectors;
  std::vector<SimilarityFailure> failures;
  std::string model_tag;
  size_t dataset_size = 0;
};

// Encodes every prompt under every requested mode and embeds the payloads.
// IDENTITY is always embedded as the reference, whether or not it is listed.
EmbeddingSet embed_dataset(const std::vector<codec::Prompt>& prompts,
                           const std::vector<codec::TransformMode>& modes,
                           EmbeddingClient& client,
                           codec::AimPolicy policy = codec::AimPolicy::kStrict);

// Pairs each (prompt, mode) vector with the prompt's IDENTITY vector and
// aggregates per-mode mean and standard deviation. Rows appear only for the
// modes in `modes`, in that order.
SimilarityReport similarity_report(const EmbeddingSet& set,
                                   const std::vector<codec::TransformMode>& modes);

// Convenience composition of the two steps above.
SimilarityReport similarity_report(const std::vector<codec::Prompt>& prompts,
                                   const std::vector<codec::TransformMode>& modes,
                                   EmbeddingClient& client,
                                   codec::AimPolicy policy = codec::AimPolicy::kStrict);

// Analysis modes in report order: IDENTITY plus the six distinct surface
// forms (FMM is omitted because its payload is byte-identical to FCS).
std::vector<codec::TransformMode> default_analysis_modes();

std::string format_mode_table(const SimilarityReport& report);

// Delimiter-separated and structured outputs.
std::string mode_stats_csv(const SimilarityReport& report);
std::string per_prompt_csv(const SimilarityReport& report);
nlohmann::json report_json(const SimilarityReport& report);

}  // namespace flipmap::semantics
