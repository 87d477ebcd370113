// Acceptance suite: one checkable gate per numbered criterion, each printing
// a single [PASS]/[FAIL] line with the measured quantities.
//
//   gcca_acceptance --criterion N   (or "all")

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdarg>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "gcca/baselines.hpp"
#include "gcca/decomp.hpp"
#include "gcca/kernels.hpp"
#include "gcca/regularizers.hpp"
#include "gcca/rng.hpp"
#include "gcca/solver.hpp"
#include "gcca/synth.hpp"
#include "gcca/wordsim.hpp"

// ---- allocation audit (criterion 9) ----------------------------------------
// Global operator new override that records the largest single allocation
// while enabled. Anything O(L^2) at L = 20,000 would show up as a multi-GB
// request; the legitimate solver path stays O(nnz + (L+M)*K) per allocation.

namespace audit {
std::atomic<bool> enabled{false};
std::atomic<unsigned long long> max_single{0};

inline void note(std::size_t n) {
  if (!enabled.load(std::memory_order_relaxed)) return;
  unsigned long long prev = max_single.load(std::memory_order_relaxed);
  while (n > prev && !max_single.compare_exchange_weak(prev, n)) {
  }
}
}  // namespace audit

void* operator new(std::size_t n) {
  audit::note(n);
  if (void* p = std::malloc(n ? n : 1)) return p;
  throw std::bad_alloc();
}
void* operator new[](std::size_t n) { return ::operator new(n); }
void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

namespace {

using namespace gcca;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return std::string(buf);
}

SynthDataset fig3_dataset(std::uint64_t seed) {
  SynthConfig sc;
  sc.l = 500;
  sc.m = 25;
  sc.n = 20;
  sc.i = 3;
  sc.sigma = 0.1;
  sc.seed = seed;
  return gen(sc);
}

SynthDataset table1_dataset(std::uint64_t seed) {
  SynthConfig sc;
  sc.l = 150;
  sc.m = 60;
  sc.n = 60;
  sc.i = 3;
  sc.sigma = 1.0;
  sc.outliers = OutlierConfig{60, false};
  sc.seed = seed;
  return gen(sc);
}

// ---- criterion 1: global-optimum attainment on fig3 ------------------------

bool criterion1() {
  const int seeds = 20;
  const std::vector<RegularizerSpec> ridge = {parse_regularizer("ridge:0.1")};
  double gap_a = 0.0, gap_b = 0.0, worst_seed_s = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto t0 = Clock::now();
    auto ds = fig3_dataset(static_cast<std::uint64_t>(seed));
    auto oracle = eigen_maxvar(ds.views, ridge, 5);

    SolverConfig cfg_a;
    cfg_a.k = 5;
    cfg_a.t_inner = 10;
    cfg_a.gamma = 1.0;
    cfg_a.regs = ridge;
    cfg_a.max_outer = 300;
    cfg_a.tol_objective = 0.0;
    cfg_a.seed = static_cast<std::uint64_t>(seed);
    auto res_a = solve(ds.views, cfg_a);
    gap_a += res_a.diagnostics.back().objective - oracle.f_opt;

    SolverConfig cfg_b;
    cfg_b.k = 5;
    cfg_b.t_inner = 1;
    cfg_b.gamma = 1.0;
    cfg_b.regs = ridge;
    cfg_b.max_outer = 100;
    cfg_b.tol_objective = 0.0;
    cfg_b.init = SolverConfig::Init::kWarm;
    cfg_b.warm_g = mvlsa(ds.views, {8, 0.1}, 5);
    auto res_b = solve(ds.views, cfg_b);
    gap_b += res_b.diagnostics.back().objective - oracle.f_opt;

    worst_seed_s = std::max(worst_seed_s, seconds_since(t0));
  }
  gap_a /= seeds;
  gap_b /= seeds;
  const bool pass = gap_a <= 1e-3 && gap_b <= 1e-3 && worst_seed_s < 30.0;
  return report(1, pass,
                fmt("fig3 mean gap to F_opt over %d seeds: T=10/random @300 iters = %.3e, "
                    "mvlsa:8/T=1 @100 iters = %.3e (gate 1e-3 each); worst seed %.1fs (< 30s)",
                    seeds, gap_a, gap_b, worst_seed_s));
}

// ---- criteria 2 and 3: descent matrix and the sublinear-rate certificate ---

struct MatrixRunStats {
  int runs = 0;
  int violations = 0;
  int cert_runs = 0;
  int cert_failures = 0;
  int zbound_failures = 0;
};

MatrixRunStats run_descent_matrix() {
  const char* kinds[] = {"none", "ridge:0.1", "l21:0.1", "l11:0.1", "nonneg", "nonneg+l11:0.1"};
  const double gammas[] = {0.5, 0.99, 1.0};
  const int ts[] = {1, 5};
  MatrixRunStats stats;
  for (const char* kind : kinds) {
    for (double gamma : gammas) {
      for (int t : ts) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
          SynthConfig sc;
          sc.l = 200;
          sc.m = 40;
          sc.n = 20;
          sc.i = 3;
          sc.sigma = 0.5;
          sc.seed = seed;
          auto ds = gen(sc);

          SolverConfig cfg;
          cfg.k = 5;
          cfg.t_inner = t;
          cfg.gamma = gamma;
          cfg.regs = {parse_regularizer(kind)};
          cfg.max_outer = 40;
          cfg.tol_objective = 0.0;
          cfg.step_scale = 0.99;
          cfg.seed = seed;
          ++stats.runs;
          SolveResult res;
          try {
            res = solve(ds.views, cfg);
          } catch (const Error&) {
            ++stats.violations;  // the solver's hard monotonicity check fired
            continue;
          }
          double prev = res.certificate.f_initial;
          for (const auto& d : res.diagnostics) {
            if (d.objective > prev + 1e-9) ++stats.violations;
            prev = d.objective;
          }

          if (gamma < 1.0) {
            ++stats.cert_runs;
            if (!res.certificate.all_ok()) ++stats.cert_failures;
            double cz = 0.0;
            double min_z = std::numeric_limits<double>::infinity();
            for (size_t j = 0; j < res.diagnostics.size(); ++j) {
              cz += res.certificate.c * res.diagnostics[j].z_potential;
              if (cz > res.certificate.f_initial - res.diagnostics[j].objective + 1e-6)
                ++stats.cert_failures;
              min_z = std::min(min_z, res.diagnostics[j].z_potential);
              const double big_j = static_cast<double>(j + 1);
              if (j + 1 >= 2 && min_z > res.certificate.v / big_j * (1.0 + 1e-6))
                ++stats.zbound_failures;
            }
          }
        }
      }
    }
  }
  return stats;
}

bool criterion2() {
  auto stats = run_descent_matrix();
  const bool pass = stats.runs >= 100 && stats.violations == 0;
  return report(2, pass,
                fmt("monotone descent: %d violations across %d runs "
                    "(6 kinds x gamma {0.5,0.99,1.0} x T {1,5} x 3 seeds, 40 iterations each)",
                    stats.violations, stats.runs));
}

bool criterion3() {
  auto stats = run_descent_matrix();
  const bool pass =
      stats.cert_runs > 0 && stats.cert_failures == 0 && stats.zbound_failures == 0;
  return report(3, pass,
                fmt("certificate: %d cumulative-bound failures and %d min-Z bound failures "
                    "across %d gamma<1 runs",
                    stats.cert_failures, stats.zbound_failures, stats.cert_runs));
}

// ---- criterion 4: linear rate against the oracle spectrum ------------------

bool criterion4() {
  const auto t0 = Clock::now();
  int ok = 0;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthConfig sc;
    sc.l = 80;
    sc.m = 10;
    sc.n = 5;
    sc.i = 3;
    sc.sigma = 0.2;
    sc.seed = seed;
    auto ds = gen(sc);
    const std::vector<RegularizerSpec> ridge = {parse_regularizer("ridge:0.1")};
    auto oracle = eigen_maxvar(ds.views, ridge, 5);

    SolverConfig cfg;
    cfg.k = 5;
    cfg.t_inner = 30000;  // run the inner loop to its 1e-10 exit tolerance
    cfg.inner_exit_tol = 1e-10;
    cfg.gamma = 1.0;
    cfg.regs = ridge;
    cfg.max_outer = 35;
    cfg.tol_objective = 0.0;
    cfg.seed = seed;
    cfg.track_oracle = oracle.u1;
    auto res = solve(ds.views, cfg);

    std::vector<double> dists;
    for (const auto& d : res.diagnostics) dists.push_back(*d.subspace_dist);
    try {
      auto fit = rate_fit(dists, oracle);
      const double target = std::log(oracle.ratio);
      if (std::abs(fit.slope - target) <= 0.2 * std::abs(target)) ++ok;
    } catch (const InsufficientDataError&) {
      // counted as a failed seed
    }
  }
  const double elapsed = seconds_since(t0);
  const bool pass = ok >= 8 && elapsed < 60.0;
  return report(4, pass,
                fmt("linear-rate fit within 20%% of log(lambda_{K+1}/lambda_K) for %d/10 seeds "
                    "(need >= 8); %.1fs total (< 60s)",
                    ok, elapsed));
}

// ---- criterion 5: Table-I feature selection ---------------------------------

bool criterion5() {
  const auto t0 = Clock::now();
  const int seeds = 20;
  double eq_worst = 0.0;
  double m1_prop = 0.0, m2_prop = 0.0, m2_eigen = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    auto ds = table1_dataset(static_cast<std::uint64_t>(seed));

    auto oracle = eigen_maxvar(ds.views, {}, 10);
    auto fm_eigen = feature_metrics(ds, oracle.q, oracle.g_opt);
    eq_worst = std::max(eq_worst, std::abs(fm_eigen.metric1 - fm_eigen.metric2));
    m2_eigen += fm_eigen.metric2;

    SolverConfig cfg;
    cfg.k = 10;
    cfg.t_inner = 1;
    cfg.gamma = 0.99;
    cfg.regs = {parse_regularizer("l21:1")};
    cfg.max_outer = 1500;
    cfg.tol_objective = 1e-7;
    cfg.init = SolverConfig::Init::kWarm;
    cfg.warm_g = mvlsa(ds.views, {50, 0.1}, 10);
    auto res = solve(ds.views, cfg);
    auto fm = feature_metrics(ds, res.state.q, res.state.g);
    m1_prop += fm.metric1;
    m2_prop += fm.metric2;
  }
  m1_prop /= seeds;
  m2_prop /= seeds;
  m2_eigen /= seeds;
  const double elapsed = seconds_since(t0);
  const double ratio = m2_prop / m2_eigen;
  const bool pass = eq_worst <= 1e-8 && m2_prop <= 1e-2 && m1_prop <= 2.0 && ratio <= 1e-2 &&
                    elapsed < 120.0;
  return report(5, pass,
                fmt("table1 over %d seeds: eigen |m1-m2| worst %.2e (<= 1e-8); proposed l21 mu=1 "
                    "m2 = %.3e (<= 1e-2), m1 = %.3f (<= 2.0), m2 ratio = %.3e (<= 1e-2); %.1fs",
                    seeds, eq_worst, m2_prop, m1_prop, ratio, elapsed));
}

// ---- criterion 6: prox oracle equivalence -----------------------------------

double prox_objective(const RegularizerSpec& spec, const DenseMatrix& q, const DenseMatrix& h,
                      double alpha) {
  return 0.5 * frob_norm_diff_sq(q, h) + alpha * reg_value(spec, q);
}

double golden_prox_1d(double h, double alpha, double mu, RegKind kind) {
  auto g1 = [&](double q) -> double {
    switch (kind) {
      case RegKind::kRidge: return 0.5 * mu * q * q;
      case RegKind::kEntrySparse: return mu * std::abs(q);
      case RegKind::kNonneg: return q < 0 ? std::numeric_limits<double>::infinity() : 0.0;
      case RegKind::kNonnegEntrySparse:
        return q < 0 ? std::numeric_limits<double>::infinity() : mu * q;
      case RegKind::kNone: return 0.0;
      default: return 0.0;
    }
  };
  auto f = [&](double q) { return 0.5 * (q - h) * (q - h) + alpha * g1(q); };
  double lo = -std::abs(h) - 5.0, hi = std::abs(h) + 5.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int i = 0; i < 180; ++i) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = f(b);
    }
  }
  return 0.5 * (lo + hi);
}

bool criterion6() {
  const RegKind kinds[] = {RegKind::kNone,   RegKind::kRidge,       RegKind::kRowSparse,
                           RegKind::kEntrySparse, RegKind::kNonneg, RegKind::kNonnegEntrySparse};
  const RegKind separable[] = {RegKind::kRidge, RegKind::kEntrySparse, RegKind::kNonneg,
                               RegKind::kNonnegEntrySparse};
  long perturb_losses = 0;
  long oracle_misses = 0;
  long instances = 0;
  for (RegKind kind : kinds) {
    Rng rng(1000 + static_cast<std::uint64_t>(kind));
    for (int trial = 0; trial < 1000; ++trial) {
      const double mu = 0.05 + 2.0 * rng.next_uniform();
      const double alpha = 0.02 + rng.next_uniform();
      RegularizerSpec spec{kind, mu};
      DenseMatrix h(3, 2);
      for (index_t i = 0; i < 3; ++i)
        for (index_t j = 0; j < 2; ++j) h(i, j) = 3.0 * rng.next_gaussian();
      auto q = prox(spec, h, alpha);
      const double fq = prox_objective(spec, q, h, alpha);
      ++instances;
      for (int p = 0; p < 200; ++p) {
        DenseMatrix qp = q;
        for (index_t i = 0; i < 3; ++i)
          for (index_t j = 0; j < 2; ++j) qp(i, j) += 0.4 * rng.next_gaussian();
        if (kind == RegKind::kNonneg || kind == RegKind::kNonnegEntrySparse)
          for (index_t i = 0; i < 3; ++i)
            for (index_t j = 0; j < 2; ++j) qp(i, j) = std::max(qp(i, j), 0.0);
        if (fq > prox_objective(spec, qp, h, alpha) + 1e-10) ++perturb_losses;
      }
      if (std::find(std::begin(separable), std::end(separable), kind) != std::end(separable)) {
        for (index_t i = 0; i < 3; ++i)
          for (index_t j = 0; j < 2; ++j)
            if (std::abs(q(i, j) - golden_prox_1d(h(i, j), alpha, mu, kind)) > 1e-6)
              ++oracle_misses;
      }
    }
  }
  const bool pass = perturb_losses == 0 && oracle_misses == 0;
  return report(6, pass,
                fmt("prox oracle: %ld perturbation losses, %ld 1-D oracle misses over %ld "
                    "instances x 200 perturbations",
                    perturb_losses, oracle_misses, instances));
}

// ---- criterion 7: Procrustes optimality -------------------------------------

bool criterion7() {
  int ortho_failures = 0, trace_failures = 0;
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const index_t rows = 10 + static_cast<index_t>(rng.next_u64() % 40);
    const index_t cols = 2 + static_cast<index_t>(rng.next_u64() % 5);
    DenseMatrix r(rows, cols);
    for (index_t i = 0; i < rows; ++i)
      for (index_t j = 0; j < cols; ++j) r(i, j) = rng.next_gaussian();
    auto polar = polar_factor(r);
    if (orthonormality_defect(polar.q) > 1e-10) ++ortho_failures;
    double sum_sigma = 0.0;
    for (double s : polar.s) sum_sigma += s;
    if (std::abs(inner_product(polar.q, r) - sum_sigma) > 1e-8) ++trace_failures;
  }
  const bool pass = ortho_failures == 0 && trace_failures == 0;
  return report(7, pass,
                fmt("Procrustes: %d orthonormality failures (1e-10), %d trace-certificate "
                    "failures (1e-8) over 500 random R",
                    ortho_failures, trace_failures));
}

// ---- criterion 8: MVLSA consistency -----------------------------------------

bool criterion8() {
  int dist_failures = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthConfig sc;
    sc.l = 50;
    sc.m = 12;
    sc.n = 8;
    sc.i = 3;
    sc.sigma = 0.4;
    sc.seed = seed;
    auto ds = gen(sc);
    auto oracle = eigen_maxvar(ds.views, {}, 8);
    auto g = mvlsa(ds.views, {12, 0.0}, 8);  // P = full rank, mu = 0
    if (subspace_distance(g, oracle.u1) > 1e-6) ++dist_failures;
  }

  int ordering_failures = 0;
  const std::vector<RegularizerSpec> ridge = {parse_regularizer("ridge:0.1")};
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto ds = fig3_dataset(seed);
    auto oracle = eigen_maxvar(ds.views, ridge, 5);
    auto g = mvlsa(ds.views, {8, 0.1}, 5);
    SolverState state{g, ridge_q_for_g(ds.views, ridge, g), 0};
    if (!(objective(ds.views, state, ridge) > oracle.f_opt)) ++ordering_failures;
  }
  const bool pass = dist_failures == 0 && ordering_failures == 0;
  return report(8, pass,
                fmt("mvlsa: %d/20 full-rank subspace mismatches (tol 1e-6); %d/3 fig3 P=8 "
                    "objective-ordering failures",
                    dist_failures, ordering_failures));
}

// ---- criterion 9: scalability smoke with allocation audit -------------------

bool criterion9() {
  const index_t size = 20000;
  SynthConfig sc;
  sc.l = size;
  sc.m = size;
  sc.n = size;
  sc.i = 3;
  sc.sigma = 0.1;
  sc.rho = 1e-3;
  sc.seed = 1;
  auto gen_t0 = Clock::now();
  auto ds = gen(sc);
  const double gen_s = seconds_since(gen_t0);
  long long nnz = 0;
  for (const auto& v : ds.views.views) nnz += v.matrix.nnz();

  // the dense eigen path must refuse this size outright
  bool eigen_refused = false;
  try {
    eigen_maxvar(ds.views, {parse_regularizer("ridge:0.1")}, 10);
  } catch (const OversizeError&) {
    eigen_refused = true;
  }

  audit::max_single.store(0);
  audit::enabled.store(true);
  const auto t0 = Clock::now();
  SolverConfig cfg;
  cfg.k = 10;
  cfg.t_inner = 1;
  cfg.gamma = 1.0;
  cfg.regs = {parse_regularizer("ridge:0.1")};
  cfg.max_outer = 300;
  cfg.tol_objective = 1e-4;
  cfg.init = SolverConfig::Init::kWarm;
  cfg.warm_g = mvlsa(ds.views, {100, 0.1}, 10);
  auto res = solve(ds.views, cfg);
  const double solve_s = seconds_since(t0);
  audit::enabled.store(false);

  const double max_alloc_mb = static_cast<double>(audit::max_single.load()) / (1024.0 * 1024.0);
  const double l_sq_mb = static_cast<double>(size) * static_cast<double>(size) * 8.0 / (1024.0 * 1024.0);
  // anything O(L^2) would be a single >= 3 GB request; the audit cap leaves
  // two orders of magnitude of headroom above the legitimate O((L+M)P) peak
  const bool pass = max_alloc_mb < 128.0 && eigen_refused;
  return report(9, pass,
                fmt("scale smoke L=M=%ld rho=1e-3 (nnz %lld): gen %.1fs, mvlsa-init solve %.1fs "
                    "(%zu iterations, F=%.4f); largest single allocation %.1f MB (L^2 would be "
                    "%.0f MB, gate < 128 MB); dense eigen path refused: %s",
                    static_cast<long>(size), nnz, gen_s, solve_s, res.diagnostics.size(),
                    res.diagnostics.back().objective, max_alloc_mb, l_sq_mb,
                    eigen_refused ? "yes" : "no"));
}

// ---- criterion 10: word-similarity evaluator fixtures -----------------------

bool criterion10() {
  Embeddings e;
  e.words = {"w0", "w1", "w2", "w3", "anchor"};
  e.vectors = DenseMatrix(5, 2);
  const double angles[] = {0.1, 0.4, 0.8, 1.3, 0.0};
  for (index_t i = 0; i < 5; ++i) {
    e.vectors(i, 0) = std::cos(angles[i]);
    e.vectors(i, 1) = std::sin(angles[i]);
  }
  std::vector<WordPair> perfect = {{"anchor", "w0", 10.0},
                                   {"anchor", "w1", 7.0},
                                   {"anchor", "w2", 5.0},
                                   {"anchor", "w3", 2.0}};
  const double s_perfect = evaluate(e, perfect, "perfect").spearman;

  std::vector<WordPair> reversed = {{"anchor", "w0", 2.0},
                                    {"anchor", "w1", 5.0},
                                    {"anchor", "w2", 7.0},
                                    {"anchor", "w3", 10.0}};
  const double s_reversed = evaluate(e, reversed, "reversed").spearman;

  const double s_hand = spearman({1, 2, 3, 4}, {1, 2, 4, 3});

  const bool pass = s_perfect == 1.0 && s_reversed == -1.0 && std::abs(s_hand - 0.8) <= 1e-12;
  return report(10, pass,
                fmt("wordsim: perfect fixture = %.17g (need exactly 1), reversed = %.17g "
                    "(need exactly -1), 4-point case = %.17g (need 0.8 +- 1e-12)",
                    s_perfect, s_reversed, s_hand));
}

}  // namespace

int main(int argc, char** argv) {
  std::string which = "all";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) which = argv[i + 1];

  bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                          criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all_pass = true;
  if (which == "all") {
    for (int i = 0; i < 10; ++i) all_pass = criteria[i]() && all_pass;
  } else {
    const int n = std::atoi(which.c_str());
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "usage: gcca_acceptance --criterion 1..10|all\n");
      return 2;
    }
    all_pass = criteria[n - 1]();
  }
  return all_pass ? 0 : 1;
}
