// flipmap: red-team toolkit for reversible prompt-obfuscation codecs, the
// decoding-guidance prompts that accompany them, embedding-space similarity
// analysis, attack campaigns against chat endpoints, and labeled ASR reports.
#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "flipmap/campaign.hpp"
#include "flipmap/codec.hpp"
#include "flipmap/config.hpp"
#include "flipmap/dataset.hpp"
#include "flipmap/evaluation.hpp"
#include "flipmap/guidance.hpp"
#include "flipmap/jsonl.hpp"
#include "flipmap/projection.hpp"
#include "flipmap/semantics.hpp"
#include "flipmap/util.hpp"

namespace {

using namespace flipmap;

constexpr const char* kVersion = "0.1.0";

std::vector<codec::TransformMode> parse_modes(const std::string& csv) {
  std::vector<codec::TransformMode> modes;
  for (const auto& raw : util::split(csv, ',')) {
    const std::string name = util::trim(raw);
    if (name.empty()) continue;
    auto mode = codec::mode_from_name(name);
    if (!mode) {
      throw Error("unknown mode '" + name + "' (see --list-modes)");
    }
    if (std::find(modes.begin(), modes.end(), *mode) == modes.end()) {
      modes.push_back(*mode);
    }
  }
  if (modes.empty()) {
    throw Error("no modes given");
  }
  return modes;
}

void print_modes() {
  std::cout << "mode      description\n";
  std::cout << "identity  normalized text, no obfuscation (analysis reference)\n";
  std::cout << "fwo       flip word order\n";
  std::cout << "fcw       flip characters within each word\n";
  std::cout << "fcs       flip all characters in the sentence\n";
  std::cout << "fmm       fcs payload with word-flip guidance (decoder mismatch)\n";
  std::cout << "aim       alphabet index mapping\n";
  std::cout << "aim_fwo   aim, then flip word order\n";
  std::cout << "aim_fcw   aim, then flip units within each word\n";
}

std::string read_stream(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string read_input(const std::string& text, const std::string& in_file) {
  if (!text.empty()) return text;
  if (!in_file.empty()) {
    std::ifstream in(in_file, std::ios::binary);
    if (!in) throw Error("cannot open input file " + in_file);
    return read_stream(in);
  }
  return read_stream(std::cin);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

harness::Dataset load_dataset_from(const config::RunConfig& run, size_t limit,
                                   const std::string& subset) {
  if (run.dataset_path.empty()) {
    throw ConfigError("no dataset path given (flag --dataset or config dataset_path)");
  }
  harness::DatasetOptions options;
  options.limit = limit;
  if (!subset.empty()) {
    options.subset_path = subset;
  } else if (!run.subset_path.empty()) {
    options.subset_path = run.subset_path;
  }
  return harness::load_dataset(run.dataset_path, options);
}

std::shared_ptr<semantics::EmbeddingProvider> make_embedding_provider(
    const config::RunConfig& run) {
  if (run.embedding.provider == "mock") {
    return std::make_shared<semantics::MockEmbeddingProvider>(run.embedding.mock_dim);
  }
  if (run.embedding.provider == "http") {
    return std::make_shared<semantics::HttpEmbeddingProvider>(run.embedding.http);
  }
  throw ConfigError("unknown embedding provider '" + run.embedding.provider +
                    "' (expected http or mock)");
}

guidance::GuidanceTemplate template_from(const config::RunConfig& run) {
  if (run.system_template_path.empty()) {
    return guidance::GuidanceTemplate::vanilla_default();
  }
  std::optional<std::filesystem::path> user_path;
  if (!run.user_template_path.empty()) user_path = run.user_template_path;
  return guidance::GuidanceTemplate::from_files(run.system_template_path, user_path);
}

// ---------------------------------------------------------------------------

int cmd_encode(const std::string& mode_name, const std::string& text,
               const std::string& in_file, bool decode_flag, bool drop_policy) {
  auto mode = codec::mode_from_name(mode_name);
  if (!mode) {
    throw Error("unknown mode '" + mode_name + "' (see --list-modes)");
  }
  // Shell pipes append a newline; outer whitespace is never meaningful to
  // either direction.
  const std::string input = util::trim(read_input(text, in_file));
  const auto policy = drop_policy ? codec::AimPolicy::kDrop : codec::AimPolicy::kStrict;
  const std::string output = decode_flag ? codec::decode(*mode, input)
                                         : codec::encode(*mode, input, policy);
  std::cout << output << "\n";
  return 0;
}

int cmd_analyze(const config::RunConfig& run, const std::string& modes_csv,
                size_t limit, const std::string& subset, bool export_vectors,
                bool drop_policy) {
  auto dataset = load_dataset_from(run, limit, subset);
  const auto modes = modes_csv.empty() ? semantics::default_analysis_modes()
                                       : parse_modes(modes_csv);
  const auto policy =
      drop_policy ? codec::AimPolicy::kDrop : codec::AimPolicy::kStrict;

  std::shared_ptr<semantics::EmbeddingCache> cache;
  if (!run.embedding.cache_dir.empty()) {
    cache = std::make_shared<semantics::EmbeddingCache>(run.embedding.cache_dir);
  }
  semantics::EmbeddingClient::Options options;
  options.concurrency = run.embedding.concurrency;
  options.batch_size = run.embedding.batch_size;
  semantics::EmbeddingClient client(make_embedding_provider(run), cache, options);

  std::cerr << "embedding " << dataset.entries.size() << " prompts x " << modes.size()
            << " modes with " << client.model_tag() << "\n";
  auto set = semantics::embed_dataset(dataset.entries, modes, client, policy);
  auto report = semantics::similarity_report(set, modes);

  const std::filesystem::path out_dir = run.output_dir;
  write_file(out_dir / "similarity_modes.csv", semantics::mode_stats_csv(report));
  write_file(out_dir / "similarity_per_prompt.csv", semantics::per_prompt_csv(report));
  write_file(out_dir / "similarity_summary.json",
             semantics::report_json(report).dump(2) + "\n");

  if (set.vectors.size() >= 2) {
    auto projection = semantics::project_2d(set.vectors);
    write_file(out_dir / "projection.csv", semantics::projection_csv(projection));
    write_file(out_dir / "projection_centroids.csv", semantics::centroid_csv(projection));
  }
  if (!report.failures.empty()) {
    std::string failures = "prompt_id,mode,error\n";
    for (const auto& f : report.failures) {
      failures += f.prompt_id + "," + std::string(codec::mode_name(f.mode)) + ",\"" +
                  f.error + "\"\n";
    }
    write_file(out_dir / "failures.csv", failures);
    std::cerr << report.failures.size() << " prompt/mode pairs failed; failures.csv written\n";
  }
  if (export_vectors) {
    std::ostringstream lines;
    for (const auto& v : set.vectors) {
      nlohmann::json j = {{"prompt_id", v.prompt_id},
                          {"mode", codec::mode_name(v.mode)},
                          {"model_tag", v.model_tag},
                          {"vector", v.values}};
      lines << j.dump() << "\n";
    }
    write_file(out_dir / "vectors.jsonl", lines.str());
  }

  std::cout << semantics::format_mode_table(report);
  std::cerr << "reports written to " << out_dir.string() << "\n";
  return 0;
}

int cmd_attack(const config::RunConfig& run, const std::string& modes_csv,
               size_t limit, const std::string& subset, const std::string& campaign_dir,
               const std::string& campaign_id, bool acknowledged, bool mock_target,
               const std::string& mock_reply) {
  if (!acknowledged) {
    std::cerr << "attack refused: this command sends adversarial prompts to the "
                 "configured endpoint.\n"
                 "Run it only against models you are authorized to probe, and pass "
                 "--i-understand-risks to proceed.\n";
    return 2;
  }
  {
    std::filesystem::create_directories(campaign_dir);
    std::ofstream log(std::filesystem::path(campaign_dir) / "campaign.log",
                      std::ios::app);
    log << util::iso8601_utc_now()
        << " operator acknowledged risks (--i-understand-risks) for campaign "
        << campaign_id << "\n";
  }

  auto dataset = load_dataset_from(run, limit, subset);

  harness::CampaignConfig config;
  config.campaign_id = campaign_id;
  config.dir = campaign_dir;
  config.modes = parse_modes(modes_csv);
  config.sampling = run.chat.sampling;
  config.concurrency = run.chat.concurrency;
  config.tpl = template_from(run);

  std::unique_ptr<harness::ChatProvider> target;
  if (mock_target) {
    // Offline dry-run target for pipeline rehearsal.
    class FixedReplyProvider : public harness::ChatProvider {
     public:
      explicit FixedReplyProvider(std::string reply) : reply_(std::move(reply)) {}
      std::string model_tag() const override { return "mock-chat"; }
      harness::ChatResult complete(const std::string&, const std::string&,
                                   const harness::SamplingParams&) override {
        return {reply_, {0, 0}, "mock-chat"};
      }
      nlohmann::json describe() const override {
        return {{"type", "mock"}, {"model", "mock-chat"}};
      }

     private:
      std::string reply_;
    };
    target = std::make_unique<FixedReplyProvider>(mock_reply);
  } else {
    target = std::make_unique<harness::HttpChatProvider>(run.chat.http);
  }

  std::cerr << "campaign " << config.campaign_id << ": " << dataset.entries.size()
            << " prompts x " << config.modes.size() << " modes -> "
            << config.dir.string() << "\n";
  auto result = harness::run_campaign(dataset, config, *target,
                                      [](const std::string& line) {
                                        std::cerr << line << "\n";
                                      });
  std::cout << "campaign " << result.campaign_id << ": sent " << result.sent
            << ", skipped " << result.skipped << ", transport errors "
            << result.transport_errors << "\n";
  std::cout << "records: " << result.records_path.string() << "\n";
  return 0;
}

int cmd_review(const config::RunConfig& run, const std::string& campaign_dir,
               const std::string& rater, const std::string& labels_file,
               const std::string& import_file) {
  auto attempts = harness::load_attempts(campaign_dir);
  if (attempts.empty()) {
    throw Error("no attempts found under " + campaign_dir);
  }
  std::set<std::string> ids;
  for (const auto& attempt : attempts) ids.insert(attempt.attempt_id);

  const std::filesystem::path labels_path =
      labels_file.empty() ? std::filesystem::path(campaign_dir) / "labels.jsonl"
                          : std::filesystem::path(labels_file);
  eval::LabelStore store(labels_path, std::move(ids));

  if (!import_file.empty()) {
    size_t imported = 0;
    for (const auto& j : jsonl::read_file(import_file)) {
      eval::RaterLabel label;
      label.attempt_id = j.at("attempt_id").get<std::string>();
      label.rater_id = j.at("rater_id").get<std::string>();
      auto parsed = eval::label_from_name(j.at("label").get<std::string>());
      if (!parsed) {
        throw Error("import: unknown label '" + j.at("label").get<std::string>() +
                    "' for " + label.attempt_id);
      }
      label.label = *parsed;
      label.note = j.value("note", "");
      store.record(label);
      ++imported;
    }
    std::cout << "imported " << imported << " labels into " << labels_path.string()
              << "\n";
    return 0;
  }

  if (rater.empty()) {
    throw Error("--rater is required for interactive review");
  }

  auto pending_ids = store.unlabeled(rater);
  if (pending_ids.empty()) {
    std::cout << "nothing to review: every attempt already has a label from "
              << rater << "\n";
    return 0;
  }

  std::map<std::string, const harness::AttemptRecord*> by_id;
  for (const auto& attempt : attempts) by_id[attempt.attempt_id] = &attempt;

  auto prelabel_config = run.refusal_phrases_path.empty()
                             ? eval::default_prelabel_config()
                             : eval::load_refusal_phrases(run.refusal_phrases_path);

  std::cerr << pending_ids.size() << " attempts to review. Keys: [s]uccess "
               "[r]efusal [d]ecoding-error [k]skip [q]uit\n";
  size_t labeled = 0;
  for (const auto& attempt_id : pending_ids) {
    const auto* attempt = by_id.at(attempt_id);
    std::string decoded;
    try {
      decoded = codec::decode(attempt->mode, attempt->payload);
    } catch (const Error& e) {
      decoded = std::string("<payload does not decode: ") + e.what() + ">";
    }
    auto suggestion = eval::prelabel(*attempt, prelabel_config);

    std::cout << "\n=== " << attempt->attempt_id << " (" << attempt->status << ")\n"
              << "mode:     " << codec::mode_name(attempt->mode) << "\n"
              << "payload:  " << attempt->payload << "\n"
              << "decoded:  " << decoded << "\n"
              << "response: " << attempt->response_text << "\n"
              << "suggested [machine]: " << eval::label_name(suggestion.label) << " ("
              << suggestion.rationale << ")\n"
              << "label [s/r/d/k/q]? " << std::flush;

    std::string line;
    if (!std::getline(std::cin, line)) break;
    const std::string key = util::trim(line);
    if (key == "q") break;
    if (key == "k" || key.empty()) continue;

    eval::Label label;
    if (key == "s") {
      label = eval::Label::Success;
    } else if (key == "r") {
      label = eval::Label::Refusal;
    } else if (key == "d") {
      label = eval::Label::DecodingError;
    } else {
      std::cerr << "unrecognized key '" << key << "', skipping\n";
      continue;
    }
    eval::RaterLabel record;
    record.attempt_id = attempt_id;
    record.rater_id = rater;
    record.label = label;
    store.record(record);
    ++labeled;
  }
  std::cout << "recorded " << labeled << " labels in " << labels_path.string() << "\n";
  return 0;
}

int cmd_report(const config::RunConfig& run, const std::string& campaign_dir,
               const std::string& labels_file, const std::string& out_dir,
               bool exclude_unresolved) {
  auto attempts = harness::load_attempts(campaign_dir);
  if (attempts.empty()) {
    throw Error("no attempts found under " + campaign_dir);
  }
  std::set<std::string> ids;
  for (const auto& attempt : attempts) ids.insert(attempt.attempt_id);

  const std::filesystem::path labels_path =
      labels_file.empty() ? std::filesystem::path(campaign_dir) / "labels.jsonl"
                          : std::filesystem::path(labels_file);
  eval::LabelStore store(labels_path, std::move(ids));

  auto verdicts = eval::verdicts_for(attempts, store);
  auto report = eval::asr_report(attempts, verdicts,
                                 exclude_unresolved
                                     ? eval::UnresolvedPolicy::kExclude
                                     : eval::UnresolvedPolicy::kCountAsFailure);

  const std::filesystem::path out =
      out_dir.empty() ? std::filesystem::path(campaign_dir) : std::filesystem::path(out_dir);
  write_file(out / "asr_table.csv", eval::asr_table_csv(report));
  write_file(out / "failure_table.csv", eval::failure_table_csv(report));
  write_file(out / "report_summary.json",
             eval::report_summary_json(report).dump(2) + "\n");

  std::cout << eval::format_asr_tables(report);
  std::cerr << "reports written to " << out.string() << "\n";
  (void)run;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prompt-obfuscation red-team toolkit"};
  app.set_version_flag("--version", kVersion);

  bool list_modes = false;
  app.add_flag("--list-modes", list_modes, "list transform modes and exit");

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file")
      ->check(CLI::ExistingFile);

  // encode ----------------------------------------------------------------
  auto* encode = app.add_subcommand("encode", "encode or decode one text");
  std::string enc_mode, enc_text, enc_in;
  bool enc_decode = false, enc_drop = false;
  encode->add_option("--mode", enc_mode, "transform mode")->required();
  encode->add_option("text", enc_text, "text argument (else --in or stdin)");
  encode->add_option("--in", enc_in, "read input from file");
  encode->add_flag("--decode", enc_decode, "invert: payload in, plaintext out");
  encode->add_flag("--drop-non-alphabetic", enc_drop,
                   "aim family: drop unmappable characters instead of erroring");

  // analyze ---------------------------------------------------------------
  auto* analyze = app.add_subcommand(
      "analyze", "embedding similarity and projection reports");
  std::string ana_dataset, ana_modes, ana_subset, ana_provider, ana_cache, ana_out;
  size_t ana_limit = 0, ana_mock_dim = 0;
  bool ana_export_vectors = false, ana_drop = false;
  analyze->add_option("--dataset", ana_dataset, "dataset csv path");
  analyze->add_option("--modes", ana_modes, "comma-separated mode list");
  analyze->add_option("--limit", ana_limit, "use only the first N prompts");
  analyze->add_option("--subset", ana_subset, "id-list file selecting a subset");
  analyze->add_option("--provider", ana_provider, "embedding provider: http|mock");
  analyze->add_option("--mock-dim", ana_mock_dim, "mock provider dimension");
  analyze->add_option("--cache", ana_cache, "embedding cache directory");
  analyze->add_option("--out", ana_out, "output directory");
  analyze->add_flag("--export-vectors", ana_export_vectors,
                    "also write raw vectors.jsonl");
  analyze->add_flag("--drop-non-alphabetic", ana_drop,
                    "aim family: drop unmappable characters instead of erroring");

  // attack ----------------------------------------------------------------
  auto* attack = app.add_subcommand("attack", "run an attack campaign");
  std::string atk_dataset, atk_modes = "aim", atk_subset, atk_dir, atk_id;
  size_t atk_limit = 0;
  bool atk_ack = false, atk_mock = false;
  std::string atk_mock_reply = "I'm sorry, but I can't assist with that.";
  double atk_temperature = -1.0;
  int atk_max_tokens = 0, atk_concurrency = 0;
  attack->add_option("--dataset", atk_dataset, "dataset csv path");
  attack->add_option("--modes", atk_modes, "comma-separated mode list");
  attack->add_option("--limit", atk_limit, "use only the first N prompts");
  attack->add_option("--subset", atk_subset, "id-list file selecting a subset");
  attack->add_option("--campaign-dir", atk_dir, "campaign directory")->required();
  attack->add_option("--campaign-id", atk_id, "campaign identifier");
  attack->add_option("--temperature", atk_temperature, "sampling temperature");
  attack->add_option("--max-tokens", atk_max_tokens, "completion token cap");
  attack->add_option("--concurrency", atk_concurrency, "in-flight request bound");
  attack->add_flag("--i-understand-risks", atk_ack,
                   "acknowledge that this sends adversarial prompts");
  attack->add_flag("--mock-target", atk_mock,
                   "use an offline fixed-reply target (pipeline rehearsal)");
  attack->add_option("--mock-reply", atk_mock_reply, "reply used by --mock-target");

  // review ----------------------------------------------------------------
  auto* review = app.add_subcommand("review", "label attempts interactively");
  std::string rev_dir, rev_rater, rev_labels, rev_import;
  review->add_option("--campaign-dir", rev_dir, "campaign directory")->required();
  review->add_option("--rater", rev_rater, "rater identifier");
  review->add_option("--labels", rev_labels, "labels file (default campaign dir)");
  review->add_option("--import", rev_import, "bulk-import labels from a jsonl file");

  // report ----------------------------------------------------------------
  auto* report = app.add_subcommand("report", "asr and failure-breakdown tables");
  std::string rep_dir, rep_labels, rep_out;
  bool rep_exclude_unresolved = false;
  report->add_option("--campaign-dir", rep_dir, "campaign directory")->required();
  report->add_option("--labels", rep_labels, "labels file (default campaign dir)");
  report->add_option("--out", rep_out, "output directory (default campaign dir)");
  report->add_flag("--exclude-unresolved", rep_exclude_unresolved,
                   "drop unresolved attempts from ASR denominators");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_modes) {
      print_modes();
      return 0;
    }

    std::optional<std::filesystem::path> config_file;
    if (!config_path.empty()) config_file = config_path;
    config::RunConfig run = config::load_config(config_file);

    if (*encode) {
      return cmd_encode(enc_mode, enc_text, enc_in, enc_decode, enc_drop);
    }
    if (*analyze) {
      if (!ana_dataset.empty()) run.dataset_path = ana_dataset;
      if (!ana_provider.empty()) run.embedding.provider = ana_provider;
      if (ana_mock_dim > 0) run.embedding.mock_dim = ana_mock_dim;
      if (!ana_cache.empty()) run.embedding.cache_dir = ana_cache;
      if (!ana_out.empty()) run.output_dir = ana_out;
      return cmd_analyze(run, ana_modes, ana_limit, ana_subset, ana_export_vectors,
                         ana_drop);
    }
    if (*attack) {
      if (!atk_dataset.empty()) run.dataset_path = atk_dataset;
      if (atk_temperature >= 0.0) run.chat.sampling.temperature = atk_temperature;
      if (atk_max_tokens > 0) run.chat.sampling.max_tokens = atk_max_tokens;
      if (atk_concurrency > 0) run.chat.concurrency = atk_concurrency;
      if (atk_id.empty()) {
        atk_id = "campaign-" + util::iso8601_utc_now().substr(0, 19);
        for (char& c : atk_id) {
          if (c == ':') c = '-';
        }
      }
      return cmd_attack(run, atk_modes, atk_limit, atk_subset, atk_dir, atk_id,
                        atk_ack, atk_mock, atk_mock_reply);
    }
    if (*review) {
      return cmd_review(run, rev_dir, rev_rater, rev_labels, rev_import);
    }
    if (*report) {
      return cmd_report(run, rep_dir, rep_labels, rep_out, rep_exclude_unresolved);
    }

    std::cerr << app.help() << "\n";
    return 1;
  } catch (const flipmap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
