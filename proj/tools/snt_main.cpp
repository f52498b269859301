#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "snt/certificate.hpp"
#include "snt/completion.hpp"
#include "snt/constructions.hpp"
#include "snt/examples.hpp"
#include "snt/matcore.hpp"
#include "snt/matio.hpp"
#include "snt/perturbation.hpp"
#include "snt/search.hpp"
#include "snt/types.hpp"

namespace {

using nlohmann::json;
using namespace snt;

#ifndef SNT_VERSION
#define SNT_VERSION "0.0.0"
#endif
constexpr const char* kVersion = SNT_VERSION;

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::uint64_t h = 1469598103934665603ULL;
  char ch;
  while (in.get(ch)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// Collects everything one subcommand run produces.
struct RunState {
  std::string command;
  std::uint64_t seed = 12345;
  json inputs = json::object();
  json outputs = json::object();
  std::string summary;
  int exit_code = 0;
  std::string out_dir = ".";

  Matrix load(const std::string& path) {
    inputs[path] = file_digest(path);
    return read_matrix_file(path);
  }

  std::string save(const std::string& name, const Matrix& m) {
    const std::string path =
        (std::filesystem::path(out_dir) / name).string();
    write_matrix_file(path, m);
    return path;
  }
};

int parse_int(const std::string& text) {
  try {
    size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw ParseError("not an integer: '" + text + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("not an integer: '" + text + "'");
  }
}

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse_int(item));
  }
  if (out.empty()) throw ParseError("empty index list");
  return out;
}

json factor_summary(const Trifactor& f) {
  return json{{"n", f.n()}, {"k", f.k()}};
}

void run_verify(RunState& st, const std::string& a_path,
                const std::string& b_path, const std::string& c_path,
                double tol) {
  const Matrix a = st.load(a_path);
  const Matrix b = st.load(b_path);
  const Matrix c = st.load(c_path);
  const VerifyReport r = verify_trifactorization(SymMatrix(a), b, c, tol);
  st.outputs = {{"valid", r.valid},
                {"max_residual", r.max_residual},
                {"fro_residual", r.fro_residual},
                {"nonneg_ok", r.nonneg_ok},
                {"symmetry_ok", r.symmetry_ok},
                {"tol", tol}};
  st.exit_code = r.valid ? 0 : 1;
  char buf[128];
  std::snprintf(buf, sizeof buf, "verify: %s (max residual %.3g)",
                r.valid ? "valid" : "INVALID", r.max_residual);
  st.summary = buf;
}

void emit_construction(RunState& st, const std::string& stem,
                       const std::optional<Matrix>& target,
                       const Trifactor& f) {
  json files = json::object();
  if (target.has_value()) {
    files["matrix"] = st.save(stem + ".mat", *target);
  }
  files["b"] = st.save(stem + "_b.mat", f.b());
  files["c"] = st.save(stem + "_c.mat", f.c());
  st.outputs["factor"] = factor_summary(f);
  st.outputs["files"] = files;
  if (target.has_value()) {
    const VerifyReport r = verify_trifactorization(SymMatrix(*target), f);
    st.outputs["max_residual"] = r.max_residual;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "construct: n=%d k=%d written to %s",
                f.n(), f.k(), st.out_dir.c_str());
  st.summary = buf;
}

void run_construct(RunState& st, const std::string& kind,
                   const std::vector<std::string>& args,
                   const std::string& cols_flag,
                   const std::string& rows_flag) {
  auto expect_args = [&](size_t n) {
    if (args.size() != n) {
      throw ParseError("construct " + kind + " expects " + std::to_string(n) +
                       " argument(s)");
    }
  };
  st.outputs["kind"] = kind;
  if (kind == "edm") {
    expect_args(1);
    const int n = parse_int(args[0]);
    const Trifactor f = n % 2 == 0
                            ? edm_factor(n)
                            : [&] {
                                std::vector<int> keep(n);
                                for (int i = 0; i < n; ++i) keep[i] = i;
                                return principal_subfactor(edm_factor(n + 1),
                                                           keep);
                              }();
    st.outputs["n"] = n;
    emit_construction(st, "edm" + std::to_string(n), edm_matrix(n), f);
  } else if (kind == "rank2") {
    expect_args(1);
    const Matrix a = st.load(args[0]);
    emit_construction(st, stem_of(args[0]) + "_rank2", std::nullopt,
                      rank2_factor(SymMatrix(a)));
  } else if (kind == "separable") {
    expect_args(1);
    const Matrix a = st.load(args[0]);
    const SymMatrix sa(a);
    const std::vector<int> cols = cols_flag.empty()
                                      ? find_separable_columns(sa)
                                      : parse_index_list(cols_flag);
    json jcols = json::array();
    for (int c : cols) jcols.push_back(c);
    st.outputs["columns"] = jcols;
    emit_construction(st, stem_of(args[0]) + "_separable", std::nullopt,
                      separable_factor(sa, cols));
  } else if (kind == "bipartite") {
    expect_args(1);
    const Matrix x = st.load(args[0]);
    const Trifactor f = bipartite_factor({x, Matrix::Identity(x.cols(), x.cols())});
    emit_construction(st, stem_of(args[0]) + "_bipartite", f.product(), f);
  } else if (kind == "symmetrize") {
    expect_args(1);
    const Matrix m = st.load(args[0]);
    if (m.rows() != m.cols()) {
      throw DimensionError("symmetrize expects a square matrix");
    }
    const Trifactor f =
        symmetrization_factor({m, Matrix::Identity(m.cols(), m.cols())});
    emit_construction(st, stem_of(args[0]) + "_symmetrized", f.product(), f);
  } else if (kind == "power") {
    expect_args(3);
    const Matrix b = st.load(args[0]);
    const Matrix c = st.load(args[1]);
    const int m = parse_int(args[2]);
    st.outputs["m"] = m;
    emit_construction(st, stem_of(args[0]) + "_pow" + args[2], std::nullopt,
                      power_factor(Trifactor(b, c), m));
  } else if (kind == "subfactor") {
    expect_args(2);
    const Matrix b = st.load(args[0]);
    const Matrix c = st.load(args[1]);
    if (rows_flag.empty()) throw ParseError("subfactor requires --rows");
    const std::vector<int> rows = parse_index_list(rows_flag);
    emit_construction(st, stem_of(args[0]) + "_sub", std::nullopt,
                      principal_subfactor(Trifactor(b, c), rows));
  } else {
    throw ParseError("unknown construction '" + kind +
                     "' (edm, rank2, separable, bipartite, symmetrize, "
                     "power, subfactor)");
  }
}

void run_perturb(RunState& st, const std::string& a_path,
                 const std::string& s_path, int budget) {
  const Matrix a = st.load(a_path);
  const SymMatrix sa(a);
  Matrix s;
  if (!s_path.empty()) {
    s = st.load(s_path);
  } else {
    const OptimizeResult opt = optimize_similarity(sa, budget, st.seed);
    s = opt.s;
    st.outputs["evaluations"] = opt.evaluations;
  }
  const PerturbResult r = perturb_factorization(sa, PerronSimilarity(s));
  const std::string stem = stem_of(a_path);
  json files = json::object();
  files["b"] = st.save(stem + "_moved_b.mat", r.f.b());
  files["c"] = st.save(stem + "_moved_c.mat", r.f.c());
  files["perturbed"] = st.save(stem + "_perturbed.mat", r.a_perturbed.data());
  files["s"] = st.save(stem + "_s.mat", s);
  st.outputs["alpha"] = r.alpha;
  st.outputs["beta"] = r.beta;
  st.outputs["factor"] = factor_summary(r.f);
  st.outputs["files"] = files;
  char buf[128];
  std::snprintf(buf, sizeof buf, "perturb: alpha=%.12g beta=%.12g k=%d",
                r.alpha, r.beta, r.f.k());
  st.summary = buf;
}

void run_certify(RunState& st, const std::string& b_path,
                 const std::string& c_path, double zero_tol) {
  const Matrix b = st.load(b_path);
  const Matrix c = st.load(c_path);
  const MovabilityReport r = check_movable(Trifactor(b, c), zero_tol);
  st.outputs["movable"] = r.movable;
  st.outputs["reason"] = r.reason;
  if (r.certificate.has_value()) {
    st.outputs["certificate"] = {{"X", matrix_json(r.certificate->x)},
                                 {"W", matrix_json(r.certificate->w)},
                                 {"max_residual", r.certificate->max_residual}};
  } else {
    st.outputs["certificate"] = nullptr;
  }
  st.summary = std::string("certify: ") + (r.movable ? "movable" : "stuck") +
               " (" + r.reason + ")";
}

void run_bounds(RunState& st, const std::string& a_path,
                const FitOptions& opts) {
  const Matrix a = st.load(a_path);
  const BoundReport r = bounds_report(SymMatrix(a), opts);
  st.outputs["n"] = r.n;
  st.outputs["rank_lb"] = r.rank_lower;
  if (r.bool_rank_available) {
    st.outputs["bool_rank_lb"] = r.bool_rank_lower;
  } else {
    st.outputs["bool_rank_lb"] = nullptr;
  }
  st.outputs["upper_fit"] = r.upper;
  st.outputs["interval"] = json::array({r.lower, r.upper});
  st.outputs["identity_fallback"] = r.identity_fallback;
  st.outputs["inertia"] = {{"plus", r.inertia_info.pi_plus},
                           {"minus", r.inertia_info.pi_minus},
                           {"zero", r.inertia_info.pi_zero}};
  json per_k = json::array();
  for (const auto& [k, res] : r.per_k) {
    per_k.push_back({{"k", k}, {"residual", res}});
  }
  st.outputs["per_k"] = per_k;
  json notes = json::array();
  for (const auto& n : r.notes) notes.push_back(n);
  st.outputs["notes"] = notes;
  char buf[128];
  std::snprintf(buf, sizeof buf, "bounds: interval [%d, %d]", r.lower,
                r.upper);
  st.summary = buf;
}

void run_search(RunState& st, const std::string& a_path, int k,
                const FitOptions& opts) {
  const Matrix a = st.load(a_path);
  const FitResult r = fit_trifactorization(SymMatrix(a), k, opts);
  const std::string stem = stem_of(a_path);
  json files = json::object();
  files["b"] = st.save(stem + "_k" + std::to_string(k) + "_b.mat", r.f.b());
  files["c"] = st.save(stem + "_k" + std::to_string(k) + "_c.mat", r.f.c());
  st.outputs["k"] = k;
  st.outputs["residual"] = r.residual;
  st.outputs["rel_residual"] = r.residual / std::max(1.0, a.norm());
  st.outputs["converged"] = r.converged;
  st.outputs["iterations"] = r.iterations;
  st.outputs["run_index"] = r.run_index;
  st.outputs["files"] = files;
  char buf[160];
  std::snprintf(buf, sizeof buf, "search: k=%d %s residual %.6g", k,
                r.converged ? "converged," : "did not converge, best",
                r.residual);
  st.summary = buf;
}

json completion_verdict(const CompletionFit& fit, double known_scale) {
  return json{{"converged", fit.converged},
              {"residual", fit.residual},
              {"rel_residual", fit.residual / known_scale},
              {"min_cross", fit.min_cross}};
}

void run_complete(RunState& st, const std::string& a1_path,
                  const std::string& a2_path, int k, bool strict_x,
                  const FitOptions& opts) {
  const SymMatrix a1(st.load(a1_path));
  const SymMatrix a2(st.load(a2_path));
  const double known_scale = std::max(
      1.0, std::sqrt(a1.data().squaredNorm() + a2.data().squaredNorm()));
  const CompletionFit free_fit = fit_completion(a1, a2, k, false, opts);
  const CompletionFit strict_fit = fit_completion(a1, a2, k, true, opts);
  const CompletionFit& chosen = strict_x ? strict_fit : free_fit;

  const std::string stem = stem_of(a1_path) + "_" + stem_of(a2_path);
  json files = json::object();
  files["assembled"] = st.save(stem + "_a.mat", chosen.f.product());
  files["x"] = st.save(stem + "_x.mat", chosen.x);
  files["b"] = st.save(stem + "_b.mat", chosen.f.b());
  files["c"] = st.save(stem + "_c.mat", chosen.f.c());

  st.outputs["k"] = k;
  st.outputs["strict_x"] = strict_x;
  st.outputs["lower_bound"] = completion_lower_bound(a1, a2);
  st.outputs["free"] = completion_verdict(free_fit, known_scale);
  st.outputs["strict"] = completion_verdict(strict_fit, known_scale);
  st.outputs["files"] = files;
  st.exit_code = chosen.converged ? 0 : 1;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "complete: k=%d %s mode %s (residual %.6g, min cross %.6g)",
                k, strict_x ? "strict" : "free",
                chosen.converged ? "converged" : "did not converge",
                chosen.residual, chosen.min_cross);
  st.summary = buf;
}

void run_examples(RunState& st, const std::string& id) {
  std::vector<std::string> ids;
  if (id == "all") {
    ids = ex::example_ids();
  } else {
    ids.push_back(id);
  }
  bool all_pass = true;
  json reports = json::array();
  for (const std::string& one : ids) {
    const ex::ExampleReport rep = ex::run_example(one, st.seed);
    all_pass = all_pass && rep.pass;
    json checks = json::array();
    std::fprintf(stderr, "%s: %s [%s]\n", rep.id.c_str(), rep.title.c_str(),
                 rep.pass ? "ok" : "FAIL");
    std::fprintf(stderr, "  %-34s %23s %23s %9s %s\n", "check", "expected",
                 "computed", "tol", "status");
    for (const ex::ExampleCheck& c : rep.checks) {
      checks.push_back({{"name", c.name},
                        {"expected", c.expected},
                        {"computed", c.actual},
                        {"tol", c.tol},
                        {"pass", c.pass}});
      std::fprintf(stderr, "  %-34s %23.16g %23.16g %9.1e %s\n",
                   c.name.c_str(), c.expected, c.actual, c.tol,
                   c.pass ? "ok" : "FAIL");
    }
    reports.push_back({{"id", rep.id},
                       {"title", rep.title},
                       {"pass", rep.pass},
                       {"checks", checks}});
  }
  st.outputs["examples"] = reports;
  st.outputs["pass"] = all_pass;
  st.exit_code = all_pass ? 0 : 1;
  st.summary = std::string("paper-examples: ") +
               (all_pass ? "all checks passed" : "FAILURES present");
}

std::uint64_t env_seed() {
  const char* env = std::getenv("SNT_SEED");
  if (env == nullptr || *env == '\0') return 12345;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw ParseError(std::string("SNT_SEED is not an integer: ") + env);
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SN-Trifactorization toolkit: A = B C B^T with B >= 0 and "
               "C symmetric nonnegative"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::uint64_t seed_flag = 0;
  bool seed_set = false;
  app.add_option("--seed", seed_flag, "Random seed (overrides SNT_SEED)")
      ->each([&](const std::string&) { seed_set = true; });
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for written matrix files");

  // verify
  std::string v_a, v_b, v_c;
  double v_tol = 1e-10;
  auto* verify_cmd =
      app.add_subcommand("verify", "Check A = B C B^T within a tolerance");
  verify_cmd->add_option("a", v_a, "matrix file")->required();
  verify_cmd->add_option("b", v_b, "left factor file")->required();
  verify_cmd->add_option("c", v_c, "core factor file")->required();
  verify_cmd->add_option("--tol", v_tol, "residual tolerance");

  // construct
  std::string ct_kind;
  std::vector<std::string> ct_args;
  std::string ct_cols, ct_rows;
  auto* construct_cmd =
      app.add_subcommand("construct", "Build a factorization by recipe");
  construct_cmd->add_option("kind", ct_kind,
                            "edm | rank2 | separable | bipartite | "
                            "symmetrize | power | subfactor")
      ->required();
  construct_cmd->add_option("args", ct_args, "recipe arguments");
  construct_cmd->add_option("--cols", ct_cols, "column list i,j,...");
  construct_cmd->add_option("--rows", ct_rows, "row list i,j,...");

  // perturb
  std::string p_a, p_s;
  int p_budget = 2000;
  auto* perturb_cmd = app.add_subcommand(
      "perturb", "Minimal diagonal move A + alpha u u^T with a width-r factor");
  perturb_cmd->add_option("a", p_a, "matrix file")->required();
  perturb_cmd->add_option("--s", p_s, "similarity file (optional)");
  perturb_cmd->add_option("--budget", p_budget,
                          "evaluation budget for the similarity search");

  // certify
  std::string cf_b, cf_c;
  double cf_zero_tol = 1e-9;
  auto* certify_cmd = app.add_subcommand(
      "certify", "Zero-pattern certificate test for a factor pair");
  certify_cmd->add_option("b", cf_b, "left factor file")->required();
  certify_cmd->add_option("c", cf_c, "core factor file")->required();
  certify_cmd->add_option("--zero-tol", cf_zero_tol, "zero-set tolerance");

  // bounds
  std::string bd_a;
  FitOptions bd_opts;
  auto* bounds_cmd = app.add_subcommand(
      "bounds", "Lower/upper bounds on the minimal trifactor width");
  bounds_cmd->add_option("a", bd_a, "matrix file")->required();
  bounds_cmd->add_option("--restarts", bd_opts.restarts, "fit restarts per k");
  bounds_cmd->add_option("--max-iters", bd_opts.max_iters, "iterations cap");
  bounds_cmd->add_option("--tol", bd_opts.tol_residual, "fit tolerance");

  // search
  std::string se_a;
  int se_k = 0;
  FitOptions se_opts;
  auto* search_cmd =
      app.add_subcommand("search", "Fit a width-k trifactor by projected gradient");
  search_cmd->add_option("a", se_a, "matrix file")->required();
  search_cmd->add_option("--k", se_k, "factor width")->required();
  search_cmd->add_option("--restarts", se_opts.restarts, "random restarts");
  search_cmd->add_option("--max-iters", se_opts.max_iters, "iterations cap");
  search_cmd->add_option("--tol", se_opts.tol_residual, "fit tolerance");

  // complete
  std::string cp_a1, cp_a2;
  int cp_k = 0;
  bool cp_strict = false;
  FitOptions cp_opts;
  auto* complete_cmd = app.add_subcommand(
      "complete", "Fit a width-k factor with free off-diagonal block");
  complete_cmd->add_option("a1", cp_a1, "first diagonal block file")->required();
  complete_cmd->add_option("a2", cp_a2, "second diagonal block file")
      ->required();
  complete_cmd->add_option("--k", cp_k, "factor width")->required();
  complete_cmd->add_flag("--strict-x", cp_strict,
                         "push the cross block to be strictly positive");
  complete_cmd->add_option("--restarts", cp_opts.restarts, "random restarts");
  complete_cmd->add_option("--max-iters", cp_opts.max_iters, "iterations cap");
  complete_cmd->add_option("--tol", cp_opts.tol_residual, "fit tolerance");

  // paper-examples
  std::string px_id = "all";
  auto* examples_cmd = app.add_subcommand(
      "paper-examples", "Reproduce the bundled worked examples");
  examples_cmd->add_option("id", px_id, "example id or 'all'");

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunState st;
  st.out_dir = out_dir;
  const auto start = std::chrono::steady_clock::now();
  try {
    st.seed = seed_set ? seed_flag : env_seed();
    if (verify_cmd->parsed()) {
      st.command = "verify";
      run_verify(st, v_a, v_b, v_c, v_tol);
    } else if (construct_cmd->parsed()) {
      st.command = "construct";
      run_construct(st, ct_kind, ct_args, ct_cols, ct_rows);
    } else if (perturb_cmd->parsed()) {
      st.command = "perturb";
      run_perturb(st, p_a, p_s, p_budget);
    } else if (certify_cmd->parsed()) {
      st.command = "certify";
      run_certify(st, cf_b, cf_c, cf_zero_tol);
    } else if (bounds_cmd->parsed()) {
      st.command = "bounds";
      bd_opts.seed = st.seed;
      run_bounds(st, bd_a, bd_opts);
    } else if (search_cmd->parsed()) {
      st.command = "search";
      se_opts.seed = st.seed;
      run_search(st, se_a, se_k, se_opts);
    } else if (complete_cmd->parsed()) {
      st.command = "complete";
      cp_opts.seed = st.seed;
      run_complete(st, cp_a1, cp_a2, cp_k, cp_strict, cp_opts);
    } else if (examples_cmd->parsed()) {
      st.command = "paper-examples";
      run_examples(st, px_id);
    }
  } catch (const ParseError& e) {
    st.outputs = {{"error", {{"type", "parse"}, {"message", e.what()}}}};
    st.exit_code = 2;
    st.summary = std::string("error: ") + e.what();
  } catch (const std::invalid_argument& e) {
    // DimensionError and DomainError land here.
    st.outputs = {{"error", {{"type", "domain"}, {"message", e.what()}}}};
    st.exit_code = 1;
    st.summary = std::string("error: ") + e.what();
  } catch (const std::exception& e) {
    st.outputs = {{"error", {{"type", "internal"}, {"message", e.what()}}}};
    st.exit_code = 1;
    st.summary = std::string("error: ") + e.what();
  }
  const std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - start;

  const json report = {{"schema", 1},
                       {"command", st.command},
                       {"inputs", st.inputs},
                       {"seed", st.seed},
                       {"outputs", st.outputs},
                       {"wall_time", wall.count()},
                       {"version", kVersion}};
  std::cout << report.dump(2) << std::endl;
  if (!st.summary.empty()) std::cerr << st.summary << std::endl;
  return st.exit_code;
}
