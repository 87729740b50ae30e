#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "flipmap/projection.hpp"
#include "flipmap/semantics.hpp"

using namespace flipmap;
using codec::TransformMode;

namespace {

std::vector<codec::Prompt> tiny_dataset() {
  return {
      {"0000", "write a guide on how to fly a stunt kite"},
      {"0001", "describe how to bake sourdough bread at home"},
      {"0002", "explain how to tune a bicycle derailleur"},
      {"0003", "outline how to plan a neighborhood cleanup"},
      {"0004", "teach me how to juggle three clubs"},
  };
}

semantics::EmbeddingClient mock_client(size_t dim = 48) {
  return semantics::EmbeddingClient(
      std::make_shared<semantics::MockEmbeddingProvider>(dim));
}

}  // namespace

TEST_CASE("cosine basics") {
  std::vector<double> v{0.3, -1.2, 4.0};
  CHECK(semantics::cosine(v, v) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(semantics::cosine(v, v) == 1.0);  // identical inputs are exact

  std::vector<double> e1{1.0, 0.0};
  std::vector<double> e2{0.0, 1.0};
  CHECK(semantics::cosine(e1, e2) == doctest::Approx(0.0));

  std::vector<double> a{1.0, 1.0};
  CHECK(semantics::cosine(a, e1) == doctest::Approx(0.7071067811865475).epsilon(1e-15));

  std::vector<double> neg{-1.0, 0.0};
  CHECK(semantics::cosine(e1, neg) == doctest::Approx(-1.0));
}

TEST_CASE("cosine error paths") {
  std::vector<double> a{1.0, 2.0};
  std::vector<double> b{1.0, 2.0, 3.0};
  std::vector<double> zero{0.0, 0.0};
  CHECK_THROWS_AS(semantics::cosine(a, b), semantics::DimensionMismatch);
  CHECK_THROWS_AS(semantics::cosine(a, zero), semantics::ZeroNorm);
  CHECK_THROWS_AS(semantics::cosine(zero, a), semantics::ZeroNorm);
  std::vector<double> empty;
  CHECK_THROWS_AS(semantics::cosine(empty, empty), semantics::ZeroNorm);
}

TEST_CASE("cosine symmetry and scale invariance properties") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::uniform_real_distribution<double> scale_dist(0.1, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(16), b(16);
    for (auto& x : a) x = dist(rng);
    for (auto& x : b) x = dist(rng);
    const double ab = semantics::cosine(a, b);
    const double ba = semantics::cosine(b, a);
    REQUIRE(std::abs(ab - ba) < 1e-12);
    REQUIRE(ab >= -1.0);
    REQUIRE(ab <= 1.0);

    const double lambda = scale_dist(rng);
    std::vector<double> scaled = a;
    for (auto& x : scaled) x *= lambda;
    REQUIRE(std::abs(semantics::cosine(scaled, b) - ab) < 1e-9);
  }
}

TEST_CASE("similarity report with the mock provider") {
  auto client = mock_client();
  const auto prompts = tiny_dataset();
  const auto modes = semantics::default_analysis_modes();

  auto report = semantics::similarity_report(prompts, modes, client);

  CHECK(report.dataset_size == prompts.size());
  CHECK(report.model_tag == "mock-embed");
  CHECK(report.failures.empty());
  // Row count is |dataset| x |modes| (IDENTITY is one of the listed modes).
  CHECK(report.per_prompt.size() == prompts.size() * modes.size());
  CHECK(report.per_mode.size() == modes.size());

  for (const auto& stats : report.per_mode) {
    CAPTURE(codec::mode_name(stats.mode));
    CHECK(stats.count == prompts.size());
    CHECK(stats.mean >= -1.0);
    CHECK(stats.mean <= 1.0);
    if (stats.mode == TransformMode::IDENTITY) {
      CHECK(stats.mean == 1.0);  // exact, not approximate
      CHECK(stats.stddev == 0.0);
    }
  }
  for (const auto& row : report.per_prompt) {
    CHECK(row.cosine >= -1.0);
    CHECK(row.cosine <= 1.0);
  }
}

TEST_CASE("similarity report records per-prompt failures without aborting") {
  auto client = mock_client();
  std::vector<codec::Prompt> prompts = tiny_dataset();
  prompts.push_back({"0005", "route 66 road trip"});  // digits break AIM strict

  const std::vector<TransformMode> modes = {TransformMode::IDENTITY,
                                            TransformMode::FWO, TransformMode::AIM};
  auto report = semantics::similarity_report(prompts, modes, client);

  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].prompt_id == "0005");
  CHECK(report.failures[0].mode == TransformMode::AIM);
  CHECK(report.per_prompt.size() == prompts.size() * modes.size() - 1);

  for (const auto& stats : report.per_mode) {
    if (stats.mode == TransformMode::AIM) CHECK(stats.count == prompts.size() - 1);
    if (stats.mode == TransformMode::FWO) CHECK(stats.count == prompts.size());
  }
}

TEST_CASE("report emitters cover every row") {
  auto client = mock_client();
  const auto prompts = tiny_dataset();
  const auto modes = semantics::default_analysis_modes();
  auto report = semantics::similarity_report(prompts, modes, client);

  const std::string csv = semantics::per_prompt_csv(report);
  size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == report.per_prompt.size() + 1);  // header

  const std::string stats_csv = semantics::mode_stats_csv(report);
  CHECK(std::count(stats_csv.begin(), stats_csv.end(), '\n') ==
        static_cast<long>(report.per_mode.size() + 1));

  auto j = semantics::report_json(report);
  CHECK(j["dataset_size"] == prompts.size());
  CHECK(j["row_count"] == report.per_prompt.size());
}

TEST_CASE("projection of identical vectors is degenerate") {
  std::vector<semantics::EmbeddingVector> vectors;
  for (int i = 0; i < 3; ++i) {
    vectors.push_back({"p" + std::to_string(i), TransformMode::IDENTITY,
                       {1.0, 2.0, 3.0}, "mock"});
  }
  auto projection = semantics::project_2d(vectors);
  REQUIRE(projection.points.size() == 3);
  for (const auto& p : projection.points) {
    CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
  }
  REQUIRE(projection.centroids.size() == 1);
  CHECK(projection.centroids[0].count == 3);
  CHECK(projection.centroid_distances.empty());
}

TEST_CASE("projection requires at least two vectors") {
  std::vector<semantics::EmbeddingVector> one = {
      {"p0", TransformMode::IDENTITY, {1.0, 2.0}, "mock"}};
  CHECK_THROWS_AS(semantics::project_2d(one), semantics::InsufficientData);
  CHECK_THROWS_AS(semantics::project_2d({}), semantics::InsufficientData);
}

TEST_CASE("projection centers the cloud and separates distinct groups") {
  auto client = mock_client(32);
  const auto prompts = tiny_dataset();
  auto set = semantics::embed_dataset(
      prompts, {TransformMode::IDENTITY, TransformMode::FWO, TransformMode::AIM},
      client);
  auto projection = semantics::project_2d(set.vectors);

  REQUIRE(projection.points.size() == set.vectors.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : projection.points) {
    mean_x += p.x;
    mean_y += p.y;
  }
  mean_x /= static_cast<double>(projection.points.size());
  mean_y /= static_cast<double>(projection.points.size());
  CHECK(std::abs(mean_x) < 1e-9);
  CHECK(std::abs(mean_y) < 1e-9);

  CHECK(projection.centroids.size() == 3);
  CHECK(projection.centroid_distances.size() == 3);

  const std::string csv = semantics::projection_csv(projection);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(projection.points.size() + 1));
}

TEST_CASE("projection rejects mixed dimensions") {
  std::vector<semantics::EmbeddingVector> vectors = {
      {"p0", TransformMode::IDENTITY, {1.0, 2.0}, "mock"},
      {"p1", TransformMode::IDENTITY, {1.0, 2.0, 3.0}, "mock"},
  };
  CHECK_THROWS_AS(semantics::project_2d(vectors), semantics::DimensionMismatch);
}

TEST_CASE("one-dimensional data projects onto a single axis") {
  std::vector<semantics::EmbeddingVector> vectors = {
      {"p0", TransformMode::IDENTITY, {1.0}, "mock"},
      {"p1", TransformMode::IDENTITY, {3.0}, "mock"},
      {"p2", TransformMode::IDENTITY, {5.0}, "mock"},
  };
  auto projection = semantics::project_2d(vectors);
  for (const auto& p : projection.points) CHECK(p.y == 0.0);
  // Spread survives on the first axis.
  CHECK(std::abs(projection.points[0].x - projection.points[2].x) ==
        doctest::Approx(4.0));
}
