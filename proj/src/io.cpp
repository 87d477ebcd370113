#include "gcca/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "gcca/kernels.hpp"

namespace gcca {

namespace {

std::string rtrim_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, long line) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || errno == ERANGE)
    throw ParseError("cannot parse number '" + tok + "'", line);
  return v;
}

long parse_long(const std::string& tok, long line) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || errno == ERANGE)
    throw ParseError("cannot parse integer '" + tok + "'", line);
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

void format17(char* buf, size_t n, double v) { std::snprintf(buf, n, "%.17g", v); }

}  // namespace

CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) throw ParseError("empty Matrix Market file '" + path + "'", 1);
  ++lineno;
  auto header = split_ws(lower(rtrim_cr(line)));
  if (header.size() < 5 || header[0] != "%%matrixmarket" || header[1] != "matrix" ||
      header[2] != "coordinate" || (header[3] != "real" && header[3] != "integer") ||
      header[4] != "general")
    throw ParseError("unsupported Matrix Market header (need 'matrix coordinate real general')",
                     lineno);

  // comments, then the size line
  index_t rows = 0, cols = 0;
  long declared_nnz = 0;
  for (;;) {
    if (!std::getline(in, line)) throw ParseError("missing size line", lineno);
    ++lineno;
    line = rtrim_cr(line);
    if (!line.empty() && line[0] == '%') continue;
    if (blank(line)) continue;
    auto toks = split_ws(line);
    if (toks.size() != 3) throw ParseError("size line must be 'rows cols nnz'", lineno);
    rows = parse_long(toks[0], lineno);
    cols = parse_long(toks[1], lineno);
    declared_nnz = parse_long(toks[2], lineno);
    if (rows < 0 || cols < 0 || declared_nnz < 0) throw ParseError("negative size", lineno);
    break;
  }

  std::vector<CsrMatrix::Triplet> trips;
  trips.reserve(static_cast<size_t>(declared_nnz));
  long seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = rtrim_cr(line);
    if (blank(line) || (!line.empty() && line[0] == '%')) continue;
    auto toks = split_ws(line);
    if (toks.size() != 3) throw ParseError("entry must be 'row col value'", lineno);
    const long r = parse_long(toks[0], lineno);
    const long c = parse_long(toks[1], lineno);
    const double v = parse_double(toks[2], lineno);
    if (r < 1 || r > rows || c < 1 || c > cols)
      throw ParseError("index (" + std::to_string(r) + ", " + std::to_string(c) +
                           ") out of range for " + std::to_string(rows) + "x" +
                           std::to_string(cols),
                       lineno);
    trips.push_back({r - 1, c - 1, v});
    ++seen;
  }
  if (seen != declared_nnz)
    throw ParseError("header declares " + std::to_string(declared_nnz) + " entries but file has " +
                     std::to_string(seen));
  return CsrMatrix::from_triplets(rows, cols, std::move(trips));
}

void write_matrix_market(const std::string& path, const CsrMatrix& m) {
  std::ofstream out = open_out(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
  char buf[40];
  for (index_t i = 0; i < m.rows(); ++i) {
    for (index_t p = m.row_ptr()[i]; p < m.row_ptr()[i + 1]; ++p) {
      format17(buf, sizeof(buf), m.values()[static_cast<size_t>(p)]);
      out << (i + 1) << " " << (m.col_idx()[static_cast<size_t>(p)] + 1) << " " << buf << "\n";
    }
  }
  if (!out) throw ParseError("write failed for '" + path + "'");
}

void write_dense_tsv(const std::string& path, const DenseMatrix& a) {
  std::ofstream out = open_out(path);
  char buf[40];
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) {
      format17(buf, sizeof(buf), a(i, j));
      out << buf << (j + 1 == a.cols() ? "" : "\t");
    }
    out << "\n";
  }
  if (!out) throw ParseError("write failed for '" + path + "'");
}

DenseMatrix read_dense_tsv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  index_t cols = -1;
  while (std::getline(in, line)) {
    ++lineno;
    line = rtrim_cr(line);
    if (line.empty() && in.peek() == EOF && rows.empty()) break;
    std::vector<double> row;
    size_t start = 0;
    while (start <= line.size()) {
      size_t tab = line.find('\t', start);
      std::string cell = tab == std::string::npos ? line.substr(start) : line.substr(start, tab - start);
      row.push_back(parse_double(cell, lineno));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols < 0)
      cols = static_cast<index_t>(row.size());
    else if (static_cast<index_t>(row.size()) != cols)
      throw ParseError("ragged row: expected " + std::to_string(cols) + " cells, got " +
                           std::to_string(row.size()),
                       lineno);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    std::cerr << "[gcca] warning: '" << path << "' is empty; returning a 0x0 matrix\n";
    return DenseMatrix();
  }
  DenseMatrix out(static_cast<index_t>(rows.size()), cols);
  for (index_t i = 0; i < out.rows(); ++i)
    for (index_t j = 0; j < out.cols(); ++j) out(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  if (!all_finite(out)) throw ParseError("non-finite value in '" + path + "'");
  return out;
}

Embeddings read_embeddings(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  long lineno = 0;
  index_t dim = -1;
  std::vector<std::string> words;
  std::vector<std::vector<double>> vecs;
  std::unordered_map<std::string, size_t> index;
  while (std::getline(in, line)) {
    ++lineno;
    line = rtrim_cr(line);
    if (blank(line)) continue;
    auto toks = split_ws(line);
    if (toks.size() < 2) throw ParseError("need a word and at least one value", lineno);
    if (dim < 0) dim = static_cast<index_t>(toks.size()) - 1;
    if (static_cast<index_t>(toks.size()) - 1 != dim)
      throw ParseError("expected " + std::to_string(dim) + " values, got " +
                           std::to_string(toks.size() - 1),
                       lineno);
    std::vector<double> v(static_cast<size_t>(dim));
    for (index_t j = 0; j < dim; ++j) v[static_cast<size_t>(j)] = parse_double(toks[static_cast<size_t>(j) + 1], lineno);

    auto [it, inserted] = index.emplace(toks[0], words.size());
    if (!inserted) {
      std::cerr << "[gcca] warning: duplicate word '" << toks[0] << "' at line " << lineno
                << "; last occurrence wins\n";
      vecs[it->second] = std::move(v);
    } else {
      words.push_back(toks[0]);
      vecs.push_back(std::move(v));
    }
  }
  Embeddings out;
  out.words = std::move(words);
  out.vectors = DenseMatrix(static_cast<index_t>(out.words.size()), std::max<index_t>(dim, 0));
  for (index_t i = 0; i < out.vectors.rows(); ++i)
    for (index_t j = 0; j < out.vectors.cols(); ++j)
      out.vectors(i, j) = vecs[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return out;
}

void write_embeddings(const std::string& path, const Embeddings& e) {
  if (static_cast<index_t>(e.words.size()) != e.vectors.rows())
    throw ShapeError("write_embeddings: word/vector count mismatch");
  std::ofstream out = open_out(path);
  char buf[40];
  for (index_t i = 0; i < e.vectors.rows(); ++i) {
    out << e.words[static_cast<size_t>(i)];
    for (index_t j = 0; j < e.vectors.cols(); ++j) {
      format17(buf, sizeof(buf), e.vectors(i, j));
      out << " " << buf;
    }
    out << "\n";
  }
  if (!out) throw ParseError("write failed for '" + path + "'");
}

std::vector<WordPair> read_wordsim_task(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  long lineno = 0;
  std::vector<WordPair> out;
  while (std::getline(in, line)) {
    ++lineno;
    line = rtrim_cr(line);
    if (blank(line)) continue;
    auto toks = split_ws(line);
    if (toks.size() != 3) throw ParseError("need 'word1 word2 score'", lineno);
    out.push_back({toks[0], toks[1], parse_double(toks[2], lineno)});
  }
  return out;
}

void write_diagnostics_jsonl(const std::string& path,
                             const std::vector<IterateDiagnostics>& diags) {
  std::ofstream out = open_out(path);
  for (const auto& d : diags) {
    nlohmann::json j;
    j["r"] = d.r;
    j["objective"] = d.objective;
    j["z_potential"] = d.z_potential;
    j["q_step_norms"] = d.q_step_norms;
    j["g_step_norm"] = d.g_step_norm;
    if (d.subspace_dist) j["subspace_dist"] = *d.subspace_dist;
    j["wall_ms"] = d.wall_ms;
    out << j.dump() << "\n";
  }
  if (!out) throw ParseError("write failed for '" + path + "'");
}

}  // namespace gcca
