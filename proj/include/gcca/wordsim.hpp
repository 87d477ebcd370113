#pragma once

#include <string>
#include <vector>

#include "gcca/io.hpp"

namespace gcca {

struct TaskReport {
  std::string task;
  int evaluated = 0;
  int skipped = 0;  // pairs with missing vocabulary (or zero vectors)
  double spearman = 0.0;
};

// u^T v / (||u|| ||v||); zero vectors are undefined.
double cosine(const std::vector<double>& u, const std::vector<double>& v);

// Pearson correlation of fractional ranks; ties get average ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// Scores every in-vocabulary pair by cosine and rank-correlates against the
// human judgments. fold_case falls back to lowercase lookups.
TaskReport evaluate(const Embeddings& embeddings, const std::vector<WordPair>& task,
                    const std::string& task_name, bool fold_case = true);

}  // namespace gcca
