#include "flipmap/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

namespace flipmap::semantics {

namespace {

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

}  // namespace

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("cosine over vectors of length " +
                            std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
  if (a.empty()) {
    throw ZeroNorm("cosine over empty vectors");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  bool identical = true;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
    identical = identical && a[i] == b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0) || !std::isfinite(na) || !std::isfinite(nb)) {
    throw ZeroNorm("cosine requires finite, nonzero-norm vectors");
  }
  if (identical) return 1.0;
  const double value = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(value, -1.0, 1.0);
}

std::vector<codec::TransformMode> default_analysis_modes() {
  using codec::TransformMode;
  return {TransformMode::IDENTITY, TransformMode::FWO,     TransformMode::FCW,
          TransformMode::FCS,      TransformMode::AIM,     TransformMode::AIM_FWO,
          TransformMode::AIM_FCW};
}

EmbeddingSet embed_dataset(const std::vector<codec::Prompt>& prompts,
                           const std::vector<codec::TransformMode>& modes,
                           EmbeddingClient& client, codec::AimPolicy policy) {
  EmbeddingSet set;
  set.model_tag = client.model_tag();
  set.dataset_size = prompts.size();

  std::vector<codec::TransformMode> wanted = modes;
  if (std::find(wanted.begin(), wanted.end(), codec::TransformMode::IDENTITY) ==
      wanted.end()) {
    wanted.insert(wanted.begin(), codec::TransformMode::IDENTITY);
  }

  // Encode first, recording failures per (prompt, mode) without aborting.
  struct Pending {
    std::string prompt_id;
    codec::TransformMode mode;
    std::string payload;
  };
  std::vector<Pending> pending;
  pending.reserve(prompts.size() * wanted.size());
  for (const auto& mode : wanted) {
    for (const auto& prompt : prompts) {
      try {
        std::string payload = codec::encode(mode, prompt.text, policy);
        if (payload.empty()) {
          throw Error("encoded payload is empty");
        }
        pending.push_back({prompt.id, mode, std::move(payload)});
      } catch (const Error& e) {
        set.failures.push_back({prompt.id, mode, e.what()});
      }
    }
  }
  if (pending.empty()) return set;

  std::vector<std::string> texts;
  texts.reserve(pending.size());
  for (const auto& p : pending) texts.push_back(p.payload);
  auto vectors = client.embed_batch(texts);

  set.vectors.reserve(pending.size());
  for (size_t i = 0; i < pending.size(); ++i) {
    set.vectors.push_back({pending[i].prompt_id, pending[i].mode,
                           std::move(vectors[i]), set.model_tag});
  }
  return set;
}

SimilarityReport similarity_report(const EmbeddingSet& set,
                                   const std::vector<codec::TransformMode>& modes) {
  SimilarityReport report;
  report.dataset_size = set.dataset_size;
  report.model_tag = set.model_tag;
  report.failures = set.failures;

  std::unordered_map<std::string, const EmbeddingVector*> reference;
  for (const auto& v : set.vectors) {
    if (v.mode == codec::TransformMode::IDENTITY) reference[v.prompt_id] = &v;
  }

  std::map<codec::TransformMode, std::vector<double>> values_by_mode;
  for (const auto& v : set.vectors) {
    if (std::find(modes.begin(), modes.end(), v.mode) == modes.end()) continue;
    auto ref = reference.find(v.prompt_id);
    if (ref == reference.end()) {
      report.failures.push_back(
          {v.prompt_id, v.mode, "no reference embedding for prompt"});
      continue;
    }
    double c = cosine(v.values, ref->second->values);
    report.per_prompt.push_back({v.prompt_id, v.mode, c});
    values_by_mode[v.mode].push_back(c);
  }

  for (const auto& mode : modes) {
    auto it = values_by_mode.find(mode);
    if (it == values_by_mode.end()) continue;
    const auto& values = it->second;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    report.per_mode.push_back({mode, values.size(), mean, std::sqrt(var)});
  }
  return report;
}

SimilarityReport similarity_report(const std::vector<codec::Prompt>& prompts,
                                   const std::vector<codec::TransformMode>& modes,
                                   EmbeddingClient& client, codec::AimPolicy policy) {
  return similarity_report(embed_dataset(prompts, modes, client, policy), modes);
}

std::string format_mode_table(const SimilarityReport& report) {
  std::ostringstream out;
  out << "mode        n      mean     stddev\n";
  for (const auto& stats : report.per_mode) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-10s %5zu  %8.4f  %8.4f\n",
                  std::string(codec::mode_name(stats.mode)).c_str(), stats.count,
                  stats.mean, stats.stddev);
    out << line;
  }
  if (!report.failures.empty()) {
    out << "(" << report.failures.size() << " prompt/mode pairs failed; see failures table)\n";
  }
  return out.str();
}

std::string mode_stats_csv(const SimilarityReport& report) {
  std::string out = "mode,count,mean_cosine,stddev\n";
  for (const auto& s : report.per_mode) {
    out += std::string(codec::mode_name(s.mode)) + "," + std::to_string(s.count) +
           "," + fmt(s.mean, 10) + "," + fmt(s.stddev, 10) + "\n";
  }
  return out;
}

std::string per_prompt_csv(const SimilarityReport& report) {
  std::string out = "prompt_id,mode,cosine\n";
  for (const auto& r : report.per_prompt) {
    out += r.prompt_id + "," + std::string(codec::mode_name(r.mode)) + "," +
           fmt(r.cosine, 10) + "\n";
  }
  return out;
}

nlohmann::json report_json(const SimilarityReport& report) {
  nlohmann::json per_mode = nlohmann::json::array();
  for (const auto& s : report.per_mode) {
    per_mode.push_back({{"mode", codec::mode_name(s.mode)},
                        {"count", s.count},
                        {"mean_cosine", s.mean},
                        {"stddev", s.stddev}});
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"prompt_id", f.prompt_id},
                        {"mode", codec::mode_name(f.mode)},
                        {"error", f.error}});
  }
  return {{"model_tag", report.model_tag},
          {"dataset_size", report.dataset_size},
          {"per_mode", per_mode},
          {"row_count", report.per_prompt.size()},
          {"failures", failures}};
}

}  // namespace flipmap::semantics
