// Command-line surface for synthetic data generation, the alternating
// solver, the eigen / rank-truncated baselines, feature-selection metrics,
// and word-similarity evaluation.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcca/baselines.hpp"
#include "gcca/io.hpp"
#include "gcca/kernels.hpp"
#include "gcca/regularizers.hpp"
#include "gcca/solver.hpp"
#include "gcca/synth.hpp"
#include "gcca/wordsim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitMaxIter = 4;
constexpr int kExitInvariant = 5;

struct DataArgs {
  std::string manifest;
  std::vector<std::string> view_files;
};

struct LoadedData {
  gcca::ViewCollection views;
  std::vector<std::vector<gcca::index_t>> clean_cols;
  std::vector<std::vector<gcca::index_t>> outlier_cols;
  bool has_index_sets = false;
};

void add_data_flags(CLI::App* cmd, DataArgs& args) {
  auto* manifest = cmd->add_option("--manifest", args.manifest, "manifest.json from 'gen'");
  auto* views = cmd->add_option("--view", args.view_files, "Matrix Market view file (repeatable)");
  manifest->excludes(views);
}

std::vector<gcca::index_t> range_from_json(const json& j) {
  std::vector<gcca::index_t> out;
  const gcca::index_t offset = j.at("offset").get<gcca::index_t>();
  const gcca::index_t count = j.at("count").get<gcca::index_t>();
  for (gcca::index_t c = 0; c < count; ++c) out.push_back(offset + c);
  return out;
}

LoadedData load_data(const DataArgs& args) {
  LoadedData data;
  if (!args.manifest.empty()) {
    std::ifstream in(args.manifest);
    if (!in) throw gcca::ParseError("cannot open manifest '" + args.manifest + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw gcca::ParseError("manifest '" + args.manifest + "': " + e.what());
    }
    const fs::path base = fs::path(args.manifest).parent_path();
    int id = 0;
    for (const auto& rel : j.at("views")) {
      auto m = gcca::read_matrix_market((base / rel.get<std::string>()).string());
      data.views.views.push_back({std::move(m), std::nullopt, id++});
    }
    if (j.contains("clean_cols") && j.contains("outlier_cols")) {
      for (const auto& r : j.at("clean_cols")) data.clean_cols.push_back(range_from_json(r));
      for (const auto& r : j.at("outlier_cols")) data.outlier_cols.push_back(range_from_json(r));
      data.has_index_sets = true;
    }
  } else if (!args.view_files.empty()) {
    int id = 0;
    for (const auto& path : args.view_files)
      data.views.views.push_back({gcca::read_matrix_market(path), std::nullopt, id++});
  } else {
    throw gcca::ParameterError("give either --manifest or --view");
  }
  data.views.validate();
  return data;
}

std::vector<gcca::RegularizerSpec> parse_regs(const std::vector<std::string>& texts) {
  std::vector<gcca::RegularizerSpec> regs;
  for (const auto& t : texts) regs.push_back(gcca::parse_regularizer(t));
  return regs;
}

json regs_to_json(const std::vector<gcca::RegularizerSpec>& regs) {
  json out = json::array();
  for (const auto& r : regs) out.push_back(gcca::format_regularizer(r));
  return out;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw gcca::ParseError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string preset;
  gcca::SynthConfig config;
  long outlier_count = -1;
  bool matched_power = false;
  double rho = -1.0;
  std::string out_dir;
};

int run_gen(GenArgs& args) {
  if (args.preset == "fig3") {
    args.config.l = 500;
    args.config.m = 25;
    args.config.n = 20;
    args.config.i = 3;
    args.config.sigma = 0.1;
  } else if (args.preset == "table1") {
    args.config.l = 150;
    args.config.m = 60;
    args.config.n = 60;
    args.config.i = 3;
    args.config.sigma = 1.0;
    args.outlier_count = 60;
    args.matched_power = false;
  } else if (!args.preset.empty()) {
    throw gcca::ParameterError("unknown preset '" + args.preset + "' (fig3 or table1)");
  }
  if (args.outlier_count >= 0)
    args.config.outliers = gcca::OutlierConfig{args.outlier_count, args.matched_power};
  if (args.rho >= 0.0) args.config.rho = args.rho;

  auto ds = gcca::gen(args.config);
  fs::create_directories(args.out_dir);

  json manifest;
  manifest["kind"] = "gcca-synth";
  json cfg;
  cfg["l"] = args.config.l;
  cfg["m"] = args.config.m;
  cfg["n"] = args.config.n;
  cfg["i"] = args.config.i;
  cfg["sigma"] = args.config.sigma;
  if (args.config.rho) cfg["rho"] = *args.config.rho;
  if (args.config.outliers) {
    cfg["outliers"] = {{"count", args.config.outliers->count},
                       {"matched_power", args.config.outliers->matched_power}};
  }
  cfg["seed"] = args.config.seed;
  manifest["config"] = cfg;
  manifest["view_seeds"] = ds.view_seeds;
  manifest["realized_density"] = ds.realized_density;

  json views = json::array(), clean = json::array(), outl = json::array();
  for (int i = 0; i < ds.views.view_count(); ++i) {
    const std::string name = "view_" + std::to_string(i) + ".mtx";
    gcca::write_matrix_market((fs::path(args.out_dir) / name).string(),
                              ds.views.views[static_cast<size_t>(i)].matrix);
    views.push_back(name);
    clean.push_back({{"offset", 0}, {"count", args.config.m}});
    outl.push_back({{"offset", args.config.m},
                    {"count", args.config.outliers ? args.config.outliers->count : 0}});
  }
  manifest["views"] = views;
  manifest["clean_cols"] = clean;
  manifest["outlier_cols"] = outl;
  write_json((fs::path(args.out_dir) / "manifest.json").string(), manifest);

  std::cout << "wrote " << ds.views.view_count() << " views to " << args.out_dir << "\n";
  return kExitOk;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  DataArgs data;
  long k = 0;
  int t = 1;
  double gamma = 1.0;
  std::vector<std::string> regs;
  double tol = 1e-4;
  int max_iter = 1000;
  std::uint64_t seed = 0;
  double step_scale = 0.99;
  std::string init = "random";
  std::string track_oracle;
  std::string out_dir;
  std::string out_g, out_q_prefix, diag;
};

int run_solve(SolveArgs& args) {
  auto data = load_data(args.data);
  fs::create_directories(args.out_dir);
  const std::string g_path =
      args.out_g.empty() ? (fs::path(args.out_dir) / "G.tsv").string() : args.out_g;
  const std::string q_prefix =
      args.out_q_prefix.empty() ? (fs::path(args.out_dir) / "Q_").string() : args.out_q_prefix;
  const std::string diag_path =
      args.diag.empty() ? (fs::path(args.out_dir) / "diagnostics.jsonl").string() : args.diag;

  gcca::SolverConfig cfg;
  cfg.k = args.k;
  cfg.t_inner = args.t;
  cfg.gamma = args.gamma;
  cfg.regs = parse_regs(args.regs);
  cfg.tol_objective = args.tol;
  cfg.max_outer = args.max_iter;
  cfg.seed = args.seed;
  cfg.step_scale = args.step_scale;

  json init_echo = args.init;
  if (args.init == "random") {
    cfg.init = gcca::SolverConfig::Init::kRandom;
  } else if (args.init.rfind("warm:", 0) == 0) {
    cfg.init = gcca::SolverConfig::Init::kWarm;
    cfg.warm_g = gcca::read_dense_tsv(args.init.substr(5));
  } else if (args.init.rfind("mvlsa:", 0) == 0) {
    const long p = std::stol(args.init.substr(6));
    double mu = 0.0;  // the truncation reweighting mirrors the solve's ridge weight
    for (const auto& r : cfg.regs)
      if (r.kind == gcca::RegKind::kRidge) mu = r.mu;
    cfg.init = gcca::SolverConfig::Init::kWarm;
    cfg.warm_g = gcca::mvlsa(data.views, {p, mu}, cfg.k);
  } else {
    throw gcca::ParameterError("--init must be random, warm:<G.tsv>, or mvlsa:<P>");
  }
  if (!args.track_oracle.empty()) cfg.track_oracle = gcca::read_dense_tsv(args.track_oracle);

  auto result = gcca::solve(data.views, cfg);

  gcca::write_dense_tsv(g_path, result.state.g);
  for (size_t i = 0; i < result.state.q.size(); ++i)
    gcca::write_dense_tsv(q_prefix + std::to_string(i) + ".tsv", result.state.q[i]);
  gcca::write_diagnostics_jsonl(diag_path, result.diagnostics);

  json manifest;
  manifest["kind"] = "gcca-solve";
  manifest["k"] = args.k;
  manifest["t"] = args.t;
  manifest["gamma"] = args.gamma;
  manifest["regs"] = regs_to_json(cfg.regs);
  manifest["tol"] = args.tol;
  manifest["max_iter"] = args.max_iter;
  manifest["seed"] = args.seed;
  manifest["step_scale"] = args.step_scale;
  manifest["init"] = init_echo;
  manifest["outer_iterations"] = result.diagnostics.size();
  manifest["objective"] =
      result.diagnostics.empty() ? 0.0 : result.diagnostics.back().objective;
  manifest["converged"] = result.status == gcca::SolveStatus::kConverged;
  manifest["g"] = g_path;
  manifest["q_prefix"] = q_prefix;
  manifest["diagnostics"] = diag_path;
  if (result.certificate.active) {
    manifest["certificate"] = {{"c", result.certificate.c},
                               {"v", result.certificate.v},
                               {"cumulative_ok", result.certificate.all_ok()}};
  }
  write_json((fs::path(args.out_dir) / "run_manifest.json").string(), manifest);

  const auto& final_diag = result.diagnostics.back();
  std::cout << "objective " << final_diag.objective << " after " << result.diagnostics.size()
            << " iterations\n";
  if (result.status == gcca::SolveStatus::kMaxIterations) {
    std::cerr << "[gcca] max-iter reached before |dF| < " << args.tol << "\n";
    return kExitMaxIter;
  }
  return kExitOk;
}

// ---- baseline --------------------------------------------------------------

struct BaselineArgs {
  DataArgs data;
  long k = 0;
  std::string reg = "none";
  long p = 0;
  double mu = 0.0;
  std::string out_dir;
};

int run_baseline_eigen(BaselineArgs& args) {
  auto data = load_data(args.data);
  fs::create_directories(args.out_dir);
  std::vector<gcca::RegularizerSpec> regs = {gcca::parse_regularizer(args.reg)};
  auto oracle = gcca::eigen_maxvar(data.views, regs, args.k);

  gcca::write_dense_tsv((fs::path(args.out_dir) / "G.tsv").string(), oracle.g_opt);
  for (size_t i = 0; i < oracle.q.size(); ++i)
    gcca::write_dense_tsv((fs::path(args.out_dir) / ("Q_" + std::to_string(i) + ".tsv")).string(),
                          oracle.q[i]);
  json meta;
  meta["kind"] = "gcca-baseline-eigen";
  meta["k"] = args.k;
  meta["reg"] = gcca::format_regularizer(regs[0]);
  meta["eigvals"] = oracle.eigvals;
  meta["f_opt"] = oracle.f_opt;
  meta["ratio"] = oracle.ratio;
  write_json((fs::path(args.out_dir) / "baseline_meta.json").string(), meta);
  std::cout << "eigen oracle F_opt " << oracle.f_opt << "\n";
  return kExitOk;
}

int run_baseline_mvlsa(BaselineArgs& args) {
  auto data = load_data(args.data);
  fs::create_directories(args.out_dir);
  auto g = gcca::mvlsa(data.views, {args.p, args.mu}, args.k);
  std::vector<gcca::RegularizerSpec> regs = {
      args.mu > 0.0 ? gcca::RegularizerSpec{gcca::RegKind::kRidge, args.mu}
                    : gcca::RegularizerSpec{}};
  auto q = gcca::ridge_q_for_g(data.views, regs, g);

  gcca::write_dense_tsv((fs::path(args.out_dir) / "G.tsv").string(), g);
  for (size_t i = 0; i < q.size(); ++i)
    gcca::write_dense_tsv((fs::path(args.out_dir) / ("Q_" + std::to_string(i) + ".tsv")).string(),
                          q[i]);
  gcca::SolverState state{g, q, 0};
  json meta;
  meta["kind"] = "gcca-baseline-mvlsa";
  meta["k"] = args.k;
  meta["p"] = args.p;
  meta["mu"] = args.mu;
  meta["objective"] = gcca::objective(data.views, state, regs);
  write_json((fs::path(args.out_dir) / "baseline_meta.json").string(), meta);
  std::cout << "mvlsa objective " << meta["objective"] << "\n";
  return kExitOk;
}

// ---- metrics ---------------------------------------------------------------

struct MetricsArgs {
  std::string manifest;
  std::string g_path;
  std::string q_prefix;
  std::string out;
};

int run_metrics(MetricsArgs& args) {
  DataArgs data_args;
  data_args.manifest = args.manifest;
  auto data = load_data(data_args);
  if (!data.has_index_sets)
    throw gcca::ParseError("manifest '" + args.manifest + "' lacks clean/outlier index sets");

  auto g = gcca::read_dense_tsv(args.g_path);
  std::vector<gcca::DenseMatrix> q;
  for (int i = 0; i < data.views.view_count(); ++i)
    q.push_back(gcca::read_dense_tsv(args.q_prefix + std::to_string(i) + ".tsv"));

  auto fm = gcca::feature_metrics(data.views, data.clean_cols, data.outlier_cols, q, g);

  // average squared row norms per feature index (Fig. 4-style data); defined
  // when all views share a feature count
  json row_norms = json::array();
  bool same_m = true;
  for (const auto& qi : q) same_m = same_m && qi.rows() == q[0].rows();
  if (same_m) {
    for (gcca::index_t m = 0; m < q[0].rows(); ++m) {
      double avg = 0.0;
      for (const auto& qi : q) {
        double s = 0.0;
        for (gcca::index_t c = 0; c < qi.cols(); ++c) s += qi(m, c) * qi(m, c);
        avg += s;
      }
      row_norms.push_back(avg / static_cast<double>(q.size()));
    }
  }

  std::cout << "metric1 " << fm.metric1 << "\n";
  std::cout << "metric2 " << fm.metric2 << "\n";

  json report;
  report["metric1"] = fm.metric1;
  report["metric2"] = fm.metric2;
  report["avg_sq_row_norms"] = row_norms;
  if (!args.out.empty()) write_json(args.out, report);
  return kExitOk;
}

// ---- eval-wordsim ----------------------------------------------------------

struct EvalArgs {
  std::string embeddings;
  std::vector<std::string> tasks;
  bool no_fold = false;
  std::string out;
};

int run_eval(EvalArgs& args) {
  auto embeddings = gcca::read_embeddings(args.embeddings);
  std::vector<gcca::TaskReport> reports;
  for (const auto& path : args.tasks) {
    auto task = gcca::read_wordsim_task(path);
    reports.push_back(
        gcca::evaluate(embeddings, task, fs::path(path).filename().string(), !args.no_fold));
  }

  std::vector<double> scores;
  printf("%-28s %10s %8s %9s\n", "task", "evaluated", "skipped", "spearman");
  for (const auto& r : reports) {
    printf("%-28s %10d %8d %9.4f\n", r.task.c_str(), r.evaluated, r.skipped, r.spearman);
    scores.push_back(r.spearman);
  }
  double avg = 0.0;
  for (double s : scores) avg += s;
  avg /= static_cast<double>(scores.size());
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted.size() % 2 == 1
                            ? sorted[sorted.size() / 2]
                            : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
  printf("%-28s %10s %8s %9.4f\n", "Average", "", "", avg);
  printf("%-28s %10s %8s %9.4f\n", "Median", "", "", median);

  if (!args.out.empty()) {
    json j;
    j["tasks"] = json::array();
    for (const auto& r : reports)
      j["tasks"].push_back({{"task", r.task},
                            {"evaluated", r.evaluated},
                            {"skipped", r.skipped},
                            {"spearman", r.spearman}});
    j["average"] = avg;
    j["median"] = median;
    write_json(args.out, j);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAX-VAR generalized CCA: alternating solver, baselines, and evaluation"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "generate synthetic multiview data");
  gen_cmd->add_option("--preset", gen_args.preset, "fig3 or table1");
  gen_cmd->add_option("--l", gen_args.config.l, "entities");
  gen_cmd->add_option("--m", gen_args.config.m, "clean features per view");
  gen_cmd->add_option("--n", gen_args.config.n, "latent dimension");
  gen_cmd->add_option("--i", gen_args.config.i, "number of views");
  gen_cmd->add_option("--sigma", gen_args.config.sigma, "noise scale");
  gen_cmd->add_option("--rho", gen_args.rho, "target density (sparse masking)");
  gen_cmd->add_option("--outliers", gen_args.outlier_count, "outlying feature count");
  gen_cmd->add_flag("--outlier-matched-power", gen_args.matched_power,
                    "rescale outliers to the clean features' power");
  gen_cmd->add_option("--seed", gen_args.config.seed, "RNG seed");
  gen_cmd->add_option("--out", gen_args.out_dir, "output directory")->required();

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "run the alternating solver");
  add_data_flags(solve_cmd, solve_args.data);
  solve_cmd->add_option("--k", solve_args.k, "embedding dimension")->required();
  solve_cmd->add_option("--t", solve_args.t, "inner prox-gradient steps");
  solve_cmd->add_option("--gamma", solve_args.gamma, "G-step damping in (0,1]");
  solve_cmd->add_option("--reg", solve_args.regs,
                        "regularizer (repeatable per view): none|ridge:w|l21:w|l11:w|nonneg|nonneg+l11:w");
  solve_cmd->add_option("--tol", solve_args.tol, "stop on |dF| below this");
  solve_cmd->add_option("--max-iter", solve_args.max_iter, "outer iteration cap");
  solve_cmd->add_option("--seed", solve_args.seed, "RNG seed");
  solve_cmd->add_option("--step-scale", solve_args.step_scale, "alpha_i = step_scale / L_i");
  solve_cmd->add_option("--init", solve_args.init, "random | warm:<G.tsv> | mvlsa:<P>");
  solve_cmd->add_option("--track-oracle", solve_args.track_oracle,
                        "U1.tsv for subspace-distance diagnostics");
  solve_cmd->add_option("--out", solve_args.out_dir, "output directory")->required();
  solve_cmd->add_option("--out-g", solve_args.out_g, "override G output path");
  solve_cmd->add_option("--out-q-prefix", solve_args.out_q_prefix, "override Q output prefix");
  solve_cmd->add_option("--diag", solve_args.diag, "override diagnostics path");

  BaselineArgs baseline_args;
  auto* baseline_cmd = app.add_subcommand("baseline", "exact and rank-truncated baselines");
  baseline_cmd->require_subcommand(1);
  auto* eigen_cmd = baseline_cmd->add_subcommand("eigen", "dense eigen-decomposition solution");
  add_data_flags(eigen_cmd, baseline_args.data);
  eigen_cmd->add_option("--k", baseline_args.k, "embedding dimension")->required();
  eigen_cmd->add_option("--reg", baseline_args.reg, "none or ridge:w");
  eigen_cmd->add_option("--out", baseline_args.out_dir, "output directory")->required();
  auto* mvlsa_cmd = baseline_cmd->add_subcommand("mvlsa", "rank-truncated baseline");
  add_data_flags(mvlsa_cmd, baseline_args.data);
  mvlsa_cmd->add_option("--k", baseline_args.k, "embedding dimension")->required();
  mvlsa_cmd->add_option("--p", baseline_args.p, "per-view truncation rank")->required();
  mvlsa_cmd->add_option("--mu", baseline_args.mu, "ridge weight in the reweighting");
  mvlsa_cmd->add_option("--out", baseline_args.out_dir, "output directory")->required();

  MetricsArgs metrics_args;
  auto* metrics_cmd = app.add_subcommand("metrics", "feature-selection metrics");
  metrics_cmd->add_option("--manifest", metrics_args.manifest, "manifest.json from 'gen'")
      ->required();
  metrics_cmd->add_option("--g", metrics_args.g_path, "G.tsv")->required();
  metrics_cmd->add_option("--q-prefix", metrics_args.q_prefix, "Q file prefix")->required();
  metrics_cmd->add_option("--out", metrics_args.out, "JSON report path");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval-wordsim", "score embeddings on similarity tasks");
  eval_cmd->add_option("--embeddings", eval_args.embeddings, "embedding text file")->required();
  eval_cmd->add_option("--task", eval_args.tasks, "task file (repeatable)")->required();
  eval_cmd->add_flag("--no-fold-case", eval_args.no_fold, "disable lowercase fallback");
  eval_cmd->add_option("--out", eval_args.out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen_args);
    if (solve_cmd->parsed()) return run_solve(solve_args);
    if (baseline_cmd->parsed()) {
      if (eigen_cmd->parsed()) return run_baseline_eigen(baseline_args);
      return run_baseline_mvlsa(baseline_args);
    }
    if (metrics_cmd->parsed()) return run_metrics(metrics_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
  } catch (const gcca::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const gcca::RankDeficiencyError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const gcca::ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gcca::OversizeError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gcca::ShapeError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const gcca::Error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
