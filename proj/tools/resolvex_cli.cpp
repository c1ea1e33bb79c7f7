// Command-line front end: configure, run, and export solver runs and the
// benchmark harnesses. JSON configs carry anything structured; flags override
// scalar fields. Exit codes: 0 success, 2 config validation error, 3 solver
// non-convergence. Errors print one machine-parsable line on stderr.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "resolvex/bench.hpp"
#include "resolvex/io.hpp"
#include "resolvex/operators.hpp"
#include "resolvex/solvers.hpp"
#include "resolvex/vector.hpp"
#include "resolvex/zoo.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace resolvex;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoConverge = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_config(const std::string& reason) { throw ConfigError(reason); }

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail_config("cannot open config file: " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    fail_config("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

Vector parse_vector(const json& j, const char* what) {
  if (j.is_number()) return Vector::scalar(j.get<double>());
  if (!j.is_array() || j.empty()) fail_config(std::string(what) + " must be a number or array");
  std::vector<double> data;
  for (const auto& v : j) data.push_back(v.get<double>());
  const std::size_t n = data.size();
  return Vector(Shape::vector(n), std::move(data));
}

MonotoneOperator parse_operator(const json& j, std::size_t dim) {
  const std::string type = j.value("type", "");
  if (type == "affine" || type == "quadratic") {
    const double a = j.value("a", 1.0);
    Vector c = j.contains("c") ? parse_vector(j.at("c"), "operator c")
                               : Vector::zeros(Shape::vector(dim));
    if (c.size() != dim) fail_config("operator c has wrong dimension");
    return zoo::make_affine_operator(a, c);
  }
  if (type == "box") return zoo::make_box_operator(j.value("lo", 0.0), j.value("hi", 1.0));
  if (type == "l1") return zoo::make_l1_operator(j.value("weight", 1.0));
  if (type == "zero") return zoo::make_zero_operator();
  fail_config("unknown operator type '" + type + "' (expected affine|quadratic|box|l1|zero)");
}

Method parse_method(const std::string& name) {
  if (name == "sfb") return Method::SFB;
  if (name == "sfbf") return Method::SFBF;
  if (name == "sagraal") return Method::SAGRAAL;
  if (name == "spd") return Method::SPD;
  if (name == "sdr") return Method::SDR;
  if (name == "sryu") return Method::SRYU;
  fail_config("unknown method '" + name + "'");
}

SolverConfig parse_solver_config(const json& j) {
  SolverConfig cfg;
  if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
  if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
  if (j.contains("theta")) cfg.theta = j.at("theta").get<double>();
  if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
  if (j.contains("phi")) cfg.phi = j.at("phi").get<double>();
  if (j.contains("gamma_bar")) cfg.gamma_bar = j.at("gamma_bar").get<double>();
  if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<std::size_t>();
  if (j.contains("stop_tol")) cfg.stop_tol = j.at("stop_tol").get<double>();
  if (j.contains("sigma")) {
    for (const auto& s : j.at("sigma")) cfg.sigma.push_back(s.get<double>());
  }
  return cfg;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) fail_config("cannot write " + path.string());
  f << text;
}

void write_report(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_trace(const fs::path& path, const Trace& tr) {
  std::ofstream f(path);
  if (!f) fail_config("cannot write " + path.string());
  tr.write_csv(f);
}

std::size_t resolve_jobs(std::size_t jobs_flag) {
  if (jobs_flag > 0) return jobs_flag;
  if (const char* env = std::getenv("RESOLVEX_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int cmd_solve(const std::string& config_path, const std::string& out_dir,
              const std::string& method_override) {
  json j = load_json(config_path);
  if (!j.contains("q")) fail_config("config needs field 'q'");
  Vector q = parse_vector(j.at("q"), "q");
  if (!j.contains("operators") || !j.at("operators").is_array())
    fail_config("config needs an 'operators' array");

  SumProblem pr;
  pr.q = q;
  pr.omega = j.value("omega", 1.0);
  for (const auto& op : j.at("operators")) pr.operators.push_back(parse_operator(op, q.size()));

  const std::string method_name =
      !method_override.empty() ? method_override : j.value("method", "sdr");
  Method method = parse_method(method_name);
  SolverConfig cfg =
      j.contains("solver") ? parse_solver_config(j.at("solver")) : SolverConfig{};

  SolveResult res = resolvent_of_sum(pr, method, cfg);

  fs::create_directories(out_dir);
  write_trace(fs::path(out_dir) / "trace.csv", res.trace);
  json rep;
  rep["method"] = method_name;
  rep["converged"] = res.trace.converged;
  rep["iterations"] = res.trace.iterations;
  rep["stop_reason"] = res.trace.stop_reason;
  rep["final_residual"] = res.trace.entries.empty() ? -1.0 : res.trace.entries.back().residual;
  rep["point"] = vector_to_json(res.point);
  write_report(fs::path(out_dir) / "report.json", rep);

  if (!res.trace.converged) {
    std::fprintf(stderr, "error: code=%d reason=\"solver did not converge (%s)\"\n",
                 kExitNoConverge, res.trace.stop_reason.c_str());
    return kExitNoConverge;
  }
  std::printf("solve: converged in %zu iterations, outputs in %s\n", res.trace.iterations,
              out_dir.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench-matrix and sweep
// ---------------------------------------------------------------------------

std::string matrix_csv_header() {
  return "seed,n,beta,lambda,sryu_iters,sryu_feas,dykstra_iters,dykstra_feas,"
         "aamr_iters,aamr_feas,max_gap,sryu_ms,dykstra_ms,aamr_ms\n";
}

std::string matrix_csv_row(const bench::MatrixBenchReport& r) {
  std::string row;
  row += std::to_string(r.seed) + ',' + std::to_string(r.n) + ',';
  row += io::format_full(r.beta) + ',' + io::format_full(r.lambda) + ',';
  row += std::to_string(r.sryu.iterations) + ',' + io::format_full(r.sryu.feasibility) + ',';
  row += std::to_string(r.dykstra.iterations) + ',' + io::format_full(r.dykstra.feasibility) + ',';
  row += std::to_string(r.aamr.iterations) + ',' + io::format_full(r.aamr.feasibility) + ',';
  row += io::format_full(r.max_pairwise_gap) + ',';
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.3f\n", r.sryu.elapsed_ms, r.dykstra.elapsed_ms,
                r.aamr.elapsed_ms);
  row += buf;
  return row;
}

int cmd_bench_matrix(std::size_t n, std::size_t seeds, double beta, double lambda, double tol,
                     double aamr_kappa, const std::string& out_dir, std::size_t jobs,
                     bool dump_matrices) {
  if (n < 5) fail_config("bench-matrix: n >= 5 required");
  if (!(beta > 0.0 && beta < 1.0)) fail_config("bench-matrix: beta must lie in (0,1)");
  if (!(lambda > 0.0 && lambda <= 1.0)) fail_config("bench-matrix: lambda must lie in (0,1]");
  if (seeds == 0) fail_config("bench-matrix: at least one seed");

  std::vector<bench::MatrixBenchReport> reports(seeds);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds) return;
      auto inst = bench::gen_matrix_instance(n, i + 1);
      reports[i] = bench::run_matrix_bench(inst, beta, lambda, tol, aamr_kappa);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t nthreads = std::min(resolve_jobs(jobs), seeds);
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  fs::create_directories(out_dir);
  std::string csv = matrix_csv_header();
  std::size_t sryu_wins_dykstra = 0, sryu_wins_aamr = 0;
  bool all_converged = true;
  for (const auto& r : reports) {
    csv += matrix_csv_row(r);
    all_converged = all_converged && r.sryu.converged && r.dykstra.converged && r.aamr.converged;
    if (r.sryu.iterations < r.dykstra.iterations) ++sryu_wins_dykstra;
    if (r.sryu.iterations < r.aamr.iterations) ++sryu_wins_aamr;
  }
  write_text(fs::path(out_dir) / "bench_matrix.csv", csv);
  if (dump_matrices) {
    for (std::size_t i = 0; i < seeds; ++i) {
      const std::string tag = std::to_string(i + 1);
      io::write_csv_matrix((fs::path(out_dir) / ("instance_" + tag + ".csv")).string(),
                           bench::gen_matrix_instance(n, i + 1).X0);
      io::write_csv_matrix((fs::path(out_dir) / ("limit_" + tag + ".csv")).string(),
                           reports[i].sryu.limit);
    }
  }

  json rep;
  rep["n"] = n;
  rep["seeds"] = seeds;
  rep["beta"] = beta;
  rep["lambda"] = lambda;
  rep["tol"] = tol;
  rep["sryu_fewer_iters_than_dykstra"] = sryu_wins_dykstra;
  rep["sryu_fewer_iters_than_aamr"] = sryu_wins_aamr;
  rep["all_converged"] = all_converged;
  write_report(fs::path(out_dir) / "report.json", rep);

  if (!all_converged) {
    std::fprintf(stderr, "error: code=%d reason=\"a bench run hit the iteration cap\"\n",
                 kExitNoConverge);
    return kExitNoConverge;
  }
  std::printf("bench-matrix: %zu seeds done, outputs in %s\n", seeds, out_dir.c_str());
  return kExitOk;
}

std::vector<double> parse_grid_axis(const json& j, const char* what) {
  if (j.is_array()) {
    std::vector<double> v;
    for (const auto& x : j) v.push_back(x.get<double>());
    if (v.empty()) fail_config(std::string(what) + ": empty grid axis");
    return v;
  }
  if (j.is_object() && j.contains("start") && j.contains("stop") && j.contains("count")) {
    const double a = j.at("start").get<double>(), b = j.at("stop").get<double>();
    const std::size_t count = j.at("count").get<std::size_t>();
    if (count == 0) fail_config(std::string(what) + ": count must be positive");
    std::vector<double> v;
    for (std::size_t i = 0; i < count; ++i)
      v.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) /
                                           static_cast<double>(count - 1));
    return v;
  }
  fail_config(std::string(what) + " must be an array or {start, stop, count}");
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, std::size_t jobs) {
  json j = load_json(config_path);
  const std::string kind = j.value("bench", "matrix");
  if (kind != "matrix") fail_config("sweep: only the matrix bench sweeps are defined");
  const std::size_t n = j.value("n", std::size_t{25});
  const double tol = j.value("tol", 1e-5);
  const double aamr_kappa = j.value("aamr_kappa", 0.95);
  std::vector<double> betas = parse_grid_axis(j.at("beta"), "beta");
  std::vector<double> lambdas = parse_grid_axis(j.at("lambda"), "lambda");
  std::vector<std::uint64_t> seeds;
  if (j.contains("seeds")) {
    for (const auto& s : j.at("seeds")) seeds.push_back(s.get<std::uint64_t>());
  } else {
    const std::size_t num = j.value("num_seeds", std::size_t{20});
    for (std::size_t s = 1; s <= num; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) fail_config("sweep: no seeds");

  struct Cell {
    double beta, lambda;
    std::uint64_t seed;
    bench::MatrixBenchReport rep;
    bool failed = false;
    std::string reason;
  };
  std::vector<Cell> cells;
  for (double b : betas)
    for (double l : lambdas)
      for (std::uint64_t s : seeds) cells.push_back({b, l, s, {}, false, ""});

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      auto& c = cells[i];
      try {
        auto inst = bench::gen_matrix_instance(n, c.seed);
        c.rep = bench::run_matrix_bench(inst, c.beta, c.lambda, tol, aamr_kappa);
      } catch (const std::exception& e) {
        c.failed = true;  // partial failures are recorded per row, run continues
        c.reason = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t nthreads = std::min(resolve_jobs(jobs), cells.size());
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  fs::create_directories(out_dir);
  std::string csv =
      "beta,lambda,seed,status,sryu_iters,sryu_feas,dykstra_iters,dykstra_feas,aamr_iters,"
      "aamr_feas,max_gap,sryu_ms,dykstra_ms,aamr_ms\n";
  for (const auto& c : cells) {
    csv += io::format_full(c.beta) + ',' + io::format_full(c.lambda) + ',' +
           std::to_string(c.seed) + ',';
    if (c.failed) {
      csv += "failed,,,,,,,,,,\n";
      continue;
    }
    const auto& r = c.rep;
    csv += "ok,";
    csv += std::to_string(r.sryu.iterations) + ',' + io::format_full(r.sryu.feasibility) + ',';
    csv +=
        std::to_string(r.dykstra.iterations) + ',' + io::format_full(r.dykstra.feasibility) + ',';
    csv += std::to_string(r.aamr.iterations) + ',' + io::format_full(r.aamr.feasibility) + ',';
    csv += io::format_full(r.max_pairwise_gap) + ',';
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.3f\n", r.sryu.elapsed_ms, r.dykstra.elapsed_ms,
                  r.aamr.elapsed_ms);
    csv += buf;
  }
  write_text(fs::path(out_dir) / "sweep.csv", csv);

  // per-grid-point means over seeds, timing isolated at the end
  std::string summary =
      "beta,lambda,mean_sryu_iters,mean_dykstra_iters,mean_aamr_iters,ok_runs,"
      "mean_sryu_ms,mean_dykstra_ms,mean_aamr_ms\n";
  for (double b : betas)
    for (double l : lambdas) {
      double si = 0, di = 0, ai = 0, sm = 0, dm = 0, am = 0;
      std::size_t ok = 0;
      for (const auto& c : cells) {
        if (c.beta != b || c.lambda != l || c.failed) continue;
        ++ok;
        si += static_cast<double>(c.rep.sryu.iterations);
        di += static_cast<double>(c.rep.dykstra.iterations);
        ai += static_cast<double>(c.rep.aamr.iterations);
        sm += c.rep.sryu.elapsed_ms;
        dm += c.rep.dykstra.elapsed_ms;
        am += c.rep.aamr.elapsed_ms;
      }
      const double denom = ok ? static_cast<double>(ok) : 1.0;
      summary += io::format_full(b) + ',' + io::format_full(l) + ',';
      summary += io::format_full(si / denom) + ',' + io::format_full(di / denom) + ',' +
                 io::format_full(ai / denom) + ',' + std::to_string(ok) + ',';
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.3f\n", sm / denom, dm / denom, am / denom);
      summary += buf;
    }
  write_text(fs::path(out_dir) / "sweep_summary.csv", summary);

  std::printf("sweep: %zu cells done, outputs in %s\n", cells.size(), out_dir.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench-rof
// ---------------------------------------------------------------------------

int cmd_bench_rof(const std::string& method_name, std::size_t n, std::uint64_t seed, double noise,
                  double eta, const std::string& image_path, const bench::RofOptions& opts,
                  const std::string& out_dir) {
  bench::RofMethod method;
  if (method_name == "spd")
    method = bench::RofMethod::SPD;
  else if (method_name == "stseng")
    method = bench::RofMethod::STSENG;
  else
    fail_config("bench-rof: method must be spd or stseng");

  bench::RofInstance inst;
  bool synthetic = image_path.empty();
  if (synthetic) {
    if (n < 4) fail_config("bench-rof: n >= 4 required");
    inst = bench::gen_rof_instance(n, seed, noise, eta);
  } else {
    // denoise a user-supplied image (CSV full precision or 8-bit PGM)
    Vector img;
    try {
      img = image_path.size() > 4 && image_path.substr(image_path.size() - 4) == ".pgm"
                ? io::read_pgm(image_path)
                : io::read_csv_matrix(image_path);
    } catch (const std::exception& e) {
      fail_config(std::string("bench-rof: cannot read image: ") + e.what());
    }
    if (img.shape().rows() != img.shape().cols())
      fail_config("bench-rof: square images only");
    inst.n = img.shape().rows();
    inst.eta = eta;
    inst.clean = img;  // unknown ground truth; SNR is not reported
    inst.noisy = img;
  }
  auto rep = bench::run_rof_bench(inst, method, opts);

  fs::create_directories(out_dir);
  io::write_pgm((fs::path(out_dir) / "clean.pgm").string(), inst.clean);
  io::write_pgm((fs::path(out_dir) / "noisy.pgm").string(), inst.noisy);
  io::write_pgm((fs::path(out_dir) / "denoised.pgm").string(), rep.denoised);
  io::write_csv_matrix((fs::path(out_dir) / "denoised.csv").string(), rep.denoised);
  {
    std::ofstream f(fs::path(out_dir) / "objective.csv");
    f << "k,objective\n";
    for (std::size_t k = 0; k < rep.objective_history.size(); ++k)
      f << k << ',' << io::format_full(rep.objective_history[k]) << '\n';
  }
  json r;
  r["method"] = rep.method;
  r["n"] = inst.n;
  r["eta"] = eta;
  r["iterations"] = rep.iterations;
  if (synthetic) {
    r["seed"] = seed;
    r["noise_std"] = noise;
    r["snr_db"] = rep.snr;
  } else {
    r["image"] = image_path;
    r["snr_db"] = nullptr;
  }
  r["objective"] = rep.objective;
  r["final_change"] = rep.final_change;
  r["primal_in_box"] = rep.primal_in_box;
  write_report(fs::path(out_dir) / "report.json", r);
  if (synthetic)
    std::printf("bench-rof: %s, snr=%.2f dB, objective=%.4f, outputs in %s\n", rep.method.c_str(),
                rep.snr, rep.objective, out_dir.c_str());
  else
    std::printf("bench-rof: %s, objective=%.4f, outputs in %s\n", rep.method.c_str(),
                rep.objective, out_dir.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench-pde
// ---------------------------------------------------------------------------

int cmd_bench_pde(std::size_t nx, std::size_t ny, double gamma, double sigma_a, double sigma_b,
                  double lambda, std::size_t iters, double stop_tol, double threshold,
                  const std::string& out_dir) {
  auto inst = bench::gen_pde_instance(nx, ny);
  auto rep = bench::run_pde_bench(inst, gamma, sigma_a, sigma_b, lambda, iters, stop_tol,
                                  threshold);

  fs::create_directories(out_dir);
  io::write_csv_matrix((fs::path(out_dir) / "v.csv").string(), rep.v);
  io::write_csv_matrix((fs::path(out_dir) / "u.csv").string(), rep.u);
  // normalised visualisation copy
  double vmax = 0.0;
  for (std::size_t i = 0; i < rep.v.size(); ++i) vmax = std::max(vmax, rep.v[i]);
  Vector vis = rep.v;
  if (vmax > 0.0) vis *= 1.0 / vmax;
  io::write_pgm((fs::path(out_dir) / "v.pgm").string(), vis);
  if (!rep.error_history.empty()) {
    std::ofstream f(fs::path(out_dir) / "error.csv");
    f << "k,rel_l2_error\n";
    for (std::size_t k = 0; k < rep.error_history.size(); ++k)
      f << k << ',' << io::format_full(rep.error_history[k]) << '\n';
  }
  json r;
  r["nx"] = nx;
  r["ny"] = ny;
  r["gamma"] = gamma;
  r["sigma_a"] = sigma_a;
  r["sigma_b"] = sigma_b;
  r["lambda"] = lambda;
  r["iterations"] = rep.iterations;
  r["converged"] = rep.converged;
  r["rel_l2_error"] = rep.rel_l2_error;
  r["iters_to_threshold"] = rep.iters_to_threshold;
  write_report(fs::path(out_dir) / "report.json", r);

  if (!rep.converged) {
    std::fprintf(stderr, "error: code=%d reason=\"splitting did not converge in %zu iters\"\n",
                 kExitNoConverge, iters);
    return kExitNoConverge;
  }
  std::printf("bench-pde: converged in %zu iterations, rel L2 error %.3e, outputs in %s\n",
              rep.iterations, rep.rel_l2_error, out_dir.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// demo-fp
// ---------------------------------------------------------------------------

int cmd_demo_fp(const std::string& instance, double eta, std::size_t iters,
                const std::string& out_dir) {
  bench::FpInstance inst;
  inst.eta = eta;
  if (instance == "l1-box") {
    inst.f.prox = [](double gamma, const Vector& x) { return zoo::prox_l1(x, gamma); };
    inst.f.value = [](const Vector& x) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i]);
      return s;
    };
    inst.constraint = zoo::make_box_operator(1.0, 2.0);
    inst.g_value = [](const Vector&) { return 1.0; };
    inst.g_grad = [](const Vector& x) { return Vector::zeros(x.shape()); };
    inst.x0 = Vector::of({1.8});
  } else if (instance == "quadratic-ratio") {
    // f = ||x - c||^2/2 + 1, g = 1 + ||x||^2/8 on the box [-2, 2]^2
    Vector c = Vector::of({1.0, -0.5});
    inst.f.prox = [c](double gamma, const Vector& x) {
      return zoo::prox_quadratic(1.0, c, gamma, x);
    };
    inst.f.value = [c](const Vector& x) { return 0.5 * dot(x - c, x - c) + 1.0; };
    inst.f.alpha = 1.0;
    inst.constraint = zoo::make_box_operator(-2.0, 2.0);
    inst.g_value = [](const Vector& x) { return 1.0 + dot(x, x) / 8.0; };
    inst.g_grad = [](const Vector& x) { return 0.25 * x; };
    inst.x0 = Vector::of({2.0, 2.0});
  } else {
    fail_config("demo-fp: instance must be l1-box or quadratic-ratio");
  }

  auto rep = bench::run_fp_demo(inst, iters);
  fs::create_directories(out_dir);
  {
    std::ofstream f(fs::path(out_dir) / "theta.csv");
    f << "k,theta\n";
    for (std::size_t k = 0; k < rep.theta_history.size(); ++k)
      f << k << ',' << io::format_full(rep.theta_history[k]) << '\n';
  }
  json r;
  r["instance"] = instance;
  r["eta"] = eta;
  r["outer_iterations"] = iters;
  r["theta_final"] = rep.theta_history.back();
  r["inner_converged"] = rep.inner_converged;
  r["x_final"] = vector_to_json(rep.x_final);
  write_report(fs::path(out_dir) / "report.json", r);

  if (!rep.inner_converged) {
    std::fprintf(stderr, "error: code=%d reason=\"inner resolvent solve hit iteration cap\"\n",
                 kExitNoConverge);
    return kExitNoConverge;
  }
  std::printf("demo-fp: theta settled at %.6f, outputs in %s\n", rep.theta_history.back(),
              out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resolvex: resolvents of sums of monotone operators by strengthened splitting"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run a splitting method on a JSON-described problem");
  std::string solve_config, solve_out = ".", solve_method;
  solve->add_option("--config", solve_config, "problem + solver JSON")->required();
  solve->add_option("--out", solve_out, "output directory");
  solve->add_option("--method", solve_method, "override the configured method");

  // bench-matrix
  auto* bm = app.add_subcommand("bench-matrix", "nearest PSD doubly stochastic matrix benchmark");
  std::size_t bm_n = 25, bm_seeds = 20, bm_jobs = 0;
  double bm_beta = 0.99, bm_lambda = 1.0, bm_tol = 1e-5, bm_kappa = 0.95;
  std::string bm_out = ".";
  bm->add_option("--n", bm_n, "matrix size (>= 5)");
  bm->add_option("--seeds", bm_seeds, "number of random instances");
  bm->add_option("--beta", bm_beta, "strengthening parameter in (0,1)");
  bm->add_option("--lambda", bm_lambda, "relaxation in (0,1]");
  bm->add_option("--tol", bm_tol, "feasibility stopping tolerance");
  bm->add_option("--aamr-kappa", bm_kappa, "averaging parameter of the reflections baseline");
  bm->add_option("--out", bm_out, "output directory");
  bm->add_option("--jobs", bm_jobs, "parallel seeds (default 1; env RESOLVEX_JOBS)");
  bool bm_dump = false;
  bm->add_flag("--dump-matrices", bm_dump, "write instance and limit matrices as CSV");

  // bench-rof
  auto* br = app.add_subcommand("bench-rof", "TV denoising on a synthetic or supplied image");
  std::string br_method = "spd", br_out = ".", br_image;
  std::size_t br_n = 64, br_iters = 100;
  std::uint64_t br_seed = 1;
  double br_noise = 0.1, br_eta = 12.0;
  bench::RofOptions br_opts;
  br->add_option("--method", br_method, "spd | stseng");
  br->add_option("--n", br_n, "synthetic image side length");
  br->add_option("--seed", br_seed, "noise seed");
  br->add_option("--noise", br_noise, "gaussian noise std dev");
  br->add_option("--eta", br_eta, "fidelity weight");
  br->add_option("--image", br_image, "denoise this CSV/PGM image instead of a synthetic one");
  br->add_option("--gamma", br_opts.gamma, "dual/resolvent stepsize (0 = default)");
  br->add_option("--tau", br_opts.tau, "primal stepsize (0 = 0.99/(gamma ||K||^2))");
  br->add_option("--lambda", br_opts.lambda, "primal-dual inertia in [0,1]");
  br->add_option("--theta", br_opts.theta, "two-stage strengthening scale");
  br->add_option("--sigma-a", br_opts.sigma_a, "two-stage sigma_A");
  br->add_option("--sigma-b", br_opts.sigma_b, "two-stage sigma_B");
  br->add_option("--iters", br_iters, "iteration count");
  br->add_option("--out", br_out, "output directory");

  // bench-pde
  auto* bp = app.add_subcommand("bench-pde", "obstacle-problem benchmark on (0,2pi)^2");
  std::size_t bp_nx = 101, bp_ny = 101, bp_iters = 20000;
  double bp_gamma = 0.5, bp_sa = 0.25, bp_sb = 0.25, bp_lambda = 2.0, bp_tol = 1e-11,
         bp_threshold = 0.0;
  std::string bp_out = ".";
  bp->add_option("--nx", bp_nx, "interior grid points per side");
  bp->add_option("--ny", bp_ny, "interior grid points per side");
  bp->add_option("--gamma", bp_gamma, "resolvent stepsize");
  bp->add_option("--sigma-a", bp_sa, "strengthening weight of the cone slot");
  bp->add_option("--sigma-b", bp_sb, "strengthening weight of the Laplacian slot");
  bp->add_option("--lambda", bp_lambda, "relaxation in (0,2]");
  bp->add_option("--iters", bp_iters, "iteration cap");
  bp->add_option("--stop-tol", bp_tol, "fixed-point stopping tolerance");
  bp->add_option("--error-threshold", bp_threshold,
                 "record first iteration reaching this relative L2 error");
  bp->add_option("--out", bp_out, "output directory");

  // demo-fp
  auto* df = app.add_subcommand("demo-fp", "fractional programming driver demo");
  std::string df_instance = "l1-box", df_out = ".";
  double df_eta = 0.5;
  std::size_t df_iters = 30;
  df->add_option("--instance", df_instance, "l1-box | quadratic-ratio");
  df->add_option("--eta", df_eta, "constant proximal stepsize");
  df->add_option("--iters", df_iters, "outer iterations");
  df->add_option("--out", df_out, "output directory");

  // sweep
  auto* sw = app.add_subcommand("sweep", "parameter-grid sweep of the matrix benchmark");
  std::string sw_config, sw_out = ".";
  std::size_t sw_jobs = 0;
  sw->add_option("--config", sw_config, "grid spec JSON")->required();
  sw->add_option("--out", sw_out, "output directory");
  sw->add_option("--jobs", sw_jobs, "parallel cells (default 1; env RESOLVEX_JOBS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_config, solve_out, solve_method);
    if (bm->parsed())
      return cmd_bench_matrix(bm_n, bm_seeds, bm_beta, bm_lambda, bm_tol, bm_kappa, bm_out,
                              bm_jobs, bm_dump);
    if (br->parsed()) {
      bench::RofOptions opts = br_opts;
      opts.iters = br_iters;
      return cmd_bench_rof(br_method, br_n, br_seed, br_noise, br_eta, br_image, opts, br_out);
    }
    if (bp->parsed())
      return cmd_bench_pde(bp_nx, bp_ny, bp_gamma, bp_sa, bp_sb, bp_lambda, bp_iters, bp_tol,
                           bp_threshold, bp_out);
    if (df->parsed()) return cmd_demo_fp(df_instance, df_eta, df_iters, df_out);
    if (sw->parsed()) return cmd_sweep(sw_config, sw_out, sw_jobs);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: code=%d reason=\"%s\"\n", kExitConfig, e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: code=%d reason=\"%s\"\n", kExitConfig, e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: code=%d reason=\"%s\"\n", kExitNoConverge, e.what());
    return kExitNoConverge;
  }
  return kExitOk;
}
