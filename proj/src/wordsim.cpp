#include "gcca/wordsim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace gcca {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// fractional ranks, ties averaged
std::vector<double> ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> out(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (size_t p = i; p <= j; ++p) out[order[p]] = avg;
    i = j + 1;
  }
  return out;
}

}  // namespace

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw ShapeError("cosine: vectors differ in length");
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    uu += u[i] * u[i];
    vv += v[i] * v[i];
    uv += u[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0)
    throw UndefinedValueError("cosine: similarity undefined for a zero vector");
  return std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ShapeError("spearman: vectors differ in length");
  if (a.size() < 2) throw InsufficientDataError("spearman: need at least two points");
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - ma;
    const double db = rb[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0)
    throw UndefinedValueError("spearman: rank correlation undefined for constant input");
  return sab / std::sqrt(saa * sbb);
}

TaskReport evaluate(const Embeddings& embeddings, const std::vector<WordPair>& task,
                    const std::string& task_name, bool fold_case) {
  std::unordered_map<std::string, index_t> exact;
  std::unordered_map<std::string, index_t> folded;
  for (index_t i = 0; i < static_cast<index_t>(embeddings.words.size()); ++i) {
    exact[embeddings.words[static_cast<size_t>(i)]] = i;  // later rows shadow earlier ones
    if (fold_case) folded[lower(embeddings.words[static_cast<size_t>(i)])] = i;
  }
  auto find_row = [&](const std::string& w) -> index_t {
    auto it = exact.find(w);
    if (it != exact.end()) return it->second;
    if (fold_case) {
      auto it2 = folded.find(lower(w));
      if (it2 != folded.end()) return it2->second;
    }
    return -1;
  };
  auto row_vec = [&](index_t r) {
    const double* p = embeddings.vectors.row_ptr(r);
    return std::vector<double>(p, p + embeddings.vectors.cols());
  };

  TaskReport report;
  report.task = task_name;
  std::vector<double> human, sims;
  for (const auto& pair : task) {
    const index_t r1 = find_row(pair.word1);
    const index_t r2 = find_row(pair.word2);
    if (r1 < 0 || r2 < 0) {
      ++report.skipped;
      continue;
    }
    double sim;
    try {
      sim = cosine(row_vec(r1), row_vec(r2));
    } catch (const UndefinedValueError&) {
      ++report.skipped;  // zero vector: treat the pair as out of vocabulary
      continue;
    }
    human.push_back(pair.human_score);
    sims.push_back(sim);
    ++report.evaluated;
  }
  if (report.evaluated < 2)
    throw InsufficientDataError("evaluate: task '" + task_name + "' has " +
                                std::to_string(report.evaluated) +
                                " usable pairs; need at least 2");
  report.spearman = spearman(sims, human);
  return report;
}

}  // namespace gcca
