#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gcca/wordsim.hpp"
#include "test_helpers.hpp"

using namespace gcca;
using namespace gcca::test;

TEST_CASE("cosine: axis cases and zero-vector error") {
  CHECK(cosine({1, 0}, {1, 0}) == 1.0);
  CHECK(cosine({1, 0}, {0, 1}) == 0.0);
  CHECK(cosine({1, 0}, {-1, 0}) == -1.0);
  CHECK_THROWS_AS(cosine({0, 0}, {1, 0}), UndefinedValueError);
  CHECK_THROWS_AS(cosine({1, 0}, {1, 0, 0}), ShapeError);
}

TEST_CASE("spearman: identical, reversed, hand-computed, errors") {
  CHECK(spearman({1, 2, 3}, {10, 20, 30}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3}, {30, 20, 10}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 2, 3, 4}, {1, 2, 4, 3}) == doctest::Approx(0.8));
  CHECK_THROWS_AS(spearman({1, 1, 1}, {1, 2, 3}), UndefinedValueError);
  CHECK_THROWS_AS(spearman({1}, {1}), InsufficientDataError);
}

TEST_CASE("spearman is invariant under strictly monotone transforms") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 25; ++i) {
      a.push_back(rng.next_gaussian());
      b.push_back(rng.next_gaussian());
    }
    const double base = spearman(a, b);
    std::vector<double> a_exp = a, b_cube = b;
    for (auto& v : a_exp) v = std::exp(v);
    for (auto& v : b_cube) v = v * v * v + 2.0;
    CHECK(spearman(a_exp, b_cube) == base);
  }
}

TEST_CASE("spearman handles ties with average ranks") {
  // a has a tie; fractional ranks are (1.5, 1.5, 3)
  const double r = spearman({1, 1, 2}, {1, 2, 3});
  CHECK(r == doctest::Approx(0.866025403784).epsilon(1e-9));
}

namespace {

Embeddings make_embeddings(const std::vector<std::string>& words,
                           const std::vector<std::vector<double>>& vecs) {
  Embeddings e;
  e.words = words;
  e.vectors = DenseMatrix(static_cast<index_t>(words.size()),
                          static_cast<index_t>(vecs.front().size()));
  for (size_t i = 0; i < vecs.size(); ++i)
    for (size_t j = 0; j < vecs[i].size(); ++j)
      e.vectors(static_cast<index_t>(i), static_cast<index_t>(j)) = vecs[i][j];
  return e;
}

}  // namespace

TEST_CASE("evaluate: perfect ranking scores 1.0 and misses are counted") {
  auto e = make_embeddings({"a", "b", "c", "d"},
                           {{1, 0}, {0.9, std::sqrt(1 - 0.81)}, {0.5, std::sqrt(0.75)}, {0, 1}});
  std::vector<WordPair> task = {{"a", "b", 9.0}, {"a", "c", 5.0}, {"a", "d", 1.0}};
  auto report = evaluate(e, task, "toy");
  CHECK(report.spearman == doctest::Approx(1.0));
  CHECK(report.evaluated == 3);
  CHECK(report.skipped == 0);

  task.push_back({"a", "unknown", 3.0});
  task.push_back({"martian", "b", 2.0});
  auto report2 = evaluate(e, task, "toy2");
  CHECK(report2.evaluated == 3);
  CHECK(report2.skipped == 2);
  CHECK(report2.evaluated + report2.skipped == static_cast<int>(task.size()));
}

TEST_CASE("evaluate: order independence and case folding") {
  auto e = make_embeddings({"Alpha", "beta", "gamma"}, {{1, 0}, {0.6, 0.8}, {0, 1}});
  std::vector<WordPair> task = {{"alpha", "beta", 3.0}, {"ALPHA", "gamma", 1.0}, {"beta", "gamma", 2.0}};
  auto r1 = evaluate(e, task, "t");
  std::reverse(task.begin(), task.end());
  auto r2 = evaluate(e, task, "t");
  CHECK(r1.spearman == r2.spearman);
  CHECK(r1.evaluated == 3);

  // without folding only beta-gamma resolves, which is below the 2-pair minimum
  CHECK_THROWS_AS(evaluate(e, task, "t", /*fold_case=*/false), InsufficientDataError);
}

TEST_CASE("evaluate: fewer than two usable pairs errors out") {
  auto e = make_embeddings({"a", "b"}, {{1, 0}, {0, 1}});
  std::vector<WordPair> task = {{"a", "zzz", 1.0}, {"b", "yyy", 2.0}, {"a", "b", 3.0}};
  CHECK_THROWS_AS(evaluate(e, task, "t"), InsufficientDataError);
}

TEST_CASE("evaluate: random embeddings score near zero on a large task") {
  double total = 0.0;
  const int seeds = 5;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(static_cast<std::uint64_t>(s) + 400);
    const int n = 210;
    std::vector<std::string> words;
    std::vector<std::vector<double>> vecs;
    for (int i = 0; i < n; ++i) {
      words.push_back("w" + std::to_string(i));
      vecs.push_back({rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian(),
                      rng.next_gaussian()});
    }
    auto e = make_embeddings(words, vecs);
    std::vector<WordPair> task;
    for (int i = 0; i + 1 < n; i += 1)
      task.push_back({words[static_cast<size_t>(i)], words[static_cast<size_t>(i + 1)],
                      rng.next_uniform() * 10.0});
    total += std::abs(evaluate(e, task, "null").spearman);
  }
  CHECK(total / seeds < 0.2);
}
