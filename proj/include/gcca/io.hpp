#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "gcca/dense_matrix.hpp"
#include "gcca/solver.hpp"
#include "gcca/sparse_matrix.hpp"

namespace gcca {

// Matrix Market, coordinate real general, 1-based. Duplicates are summed.
CsrMatrix read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const CsrMatrix& m);

// Tab-separated, one row per line, 17 significant digits.
void write_dense_tsv(const std::string& path, const DenseMatrix& a);
DenseMatrix read_dense_tsv(const std::string& path);

struct Embeddings {
  std::vector<std::string> words;
  DenseMatrix vectors;  // one row per word
};

// One line per word: token then K whitespace-separated floats. K is inferred
// from the first line and enforced on the rest. Duplicate words: last wins,
// with a warning on stderr.
Embeddings read_embeddings(const std::string& path);
void write_embeddings(const std::string& path, const Embeddings& e);

struct WordPair {
  std::string word1;
  std::string word2;
  double human_score;
};

// One (word1, word2, score) triple per line; blank lines skipped; CRLF ok.
std::vector<WordPair> read_wordsim_task(const std::string& path);

// One self-describing JSON object per outer iteration.
void write_diagnostics_jsonl(const std::string& path,
                             const std::vector<IterateDiagnostics>& diags);

}  // namespace gcca
