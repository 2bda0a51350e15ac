// casimir_cyl: compute, sweep and verify front end.
// Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 non-convergence.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cascyl/asymptotics.hpp"
#include "cascyl/pfa.hpp"
#include "cascyl/scattering.hpp"
#include "cascyl/verify.hpp"
#include "run_record.hpp"

using namespace cascyl;
using cascyl::cli::RunRecord;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInvalid = 2, kNotConverged = 3 };

const std::vector<std::string> kMethods = {"exact", "pfa-integral", "pfa-leading", "asymptotic"};

struct Options {
  std::string kind = "interior", bc = "dd", quantity = "energy", method = "all", format = "csv";
  double a = 1.0, b = 2.0, d = 0.1, rel_tol = 1e-6;
  std::string d_grid;
  int parallel = 1;
  int max_n = 4096;
  bool no_timing = false;
};

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_threads() {
  if (const char* env = std::getenv("CASIMIR_CYL_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> parse_methods(const std::string& spec, bool force) {
  std::vector<std::string> req;
  if (spec == "all") {
    req = force ? kMethods : std::vector<std::string>{"exact", "asymptotic"};
  } else {
    req = split(spec, ',');
  }
  // Canonical order, no duplicates.
  std::vector<std::string> out;
  for (const auto& m : kMethods)
    for (const auto& r : req)
      if (r == m) {
        out.push_back(m);
        break;
      }
  for (const auto& r : req)
    if (std::find(kMethods.begin(), kMethods.end(), r) == kMethods.end())
      throw InvalidInput("unknown method '" + r + "'");
  for (const auto& m : out)
    if (!force && m.rfind("pfa", 0) == 0) throw InvalidInput("PFA methods give the force only");
  return out;
}

std::vector<double> parse_grid(const std::string& g) {
  const auto parts = split(g, ':');
  if (parts.size() != 3) throw InvalidInput("--d-grid expects start:stop:count");
  double lo, hi;
  int count;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw InvalidInput("--d-grid: cannot parse '" + g + "'");
  }
  if (count < 1) throw InvalidInput("--d-grid is empty");
  if (!(lo > 0) || !(hi > 0)) throw InvalidInput("--d-grid bounds must be positive");
  std::vector<double> d(count);
  for (int i = 0; i < count; ++i)
    d[i] = i == 0 ? lo : i == count - 1 ? hi : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
  std::sort(d.begin(), d.end());
  return d;
}

struct Task {
  CylinderPair pair;
  Bc bc;
  std::string method;
  RunRecord rec;
  int status = kOk;
  std::string message;
};

void evaluate(Task& t, bool force, double rel_tol, int threads, int max_n) {
  RunRecord& r = t.rec;
  r.kind = std::string(to_string(t.pair.kind));
  r.bc = std::string(to_string(t.bc));
  r.a = t.pair.a;
  r.b = t.pair.b;
  r.d = t.pair.d;
  r.method = t.method;
  r.quantity = force ? "force" : "energy";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (t.method == "exact") {
      scatter::ScatteringOptions opts;
      opts.threads = threads;
      opts.n_cap = max_n;
      scatter::EnergyResult e;
      try {
        e = force ? scatter::casimir_force_exact(t.pair, t.bc, rel_tol, opts)
                  : scatter::casimir_energy_exact(t.pair, t.bc, rel_tol, opts);
      } catch (const scatter::EnergyNoConvergence& nc) {
        e = nc.partial;
        t.status = kNotConverged;
        t.message = nc.what();
      }
      r.value_per_length = e.value_per_length;
      r.err_est = e.err_est;
      r.n_matrix = e.n_matrix;
      r.p_terms_max = e.p_terms_max;
      r.xi_nodes = e.xi_nodes;
      r.converged = e.converged;
    } else if (t.method == "pfa-integral") {
      const auto p = pfa::pfa_force_integral(t.pair, t.bc, std::min(rel_tol, 1e-11));
      r.value_per_length = p.force_per_length;
      r.err_est = p.err_est;
    } else if (t.method == "pfa-leading") {
      r.value_per_length = pfa::pfa_force_leading(t.pair, t.bc).force_per_length;
    } else {
      const auto x = force ? asym::force_expansion(t.pair, t.bc) : asym::energy_expansion(t.pair, t.bc);
      r.value_per_length = x.value(t.pair.d);
    }
  } catch (const NoConvergence& e) {
    t.status = kNotConverged;
    t.message = e.what();
    r.converged = false;
  } catch (const NonPositiveDeterminant& e) {
    t.status = kNotConverged;
    t.message = e.what();
    r.converged = false;
  } catch (const Error& e) {
    t.status = kInvalid;
    t.message = e.what();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CylinderPair make_pair(const Options& o, double d) {
  const auto kind = parse_kind(o.kind);
  if (!kind) throw InvalidInput("--kind must be interior or exterior");
  CylinderPair p{*kind, o.a, o.b, d};
  derive_params(p);  // throws InvalidGeometry
  return p;
}

Bc make_bc(const Options& o) {
  const auto bc = parse_bc(o.bc);
  if (!bc) throw InvalidInput("--bc must be one of dd nn dn nd pcpc pcip");
  return *bc;
}

// Runs the tasks, point-parallel across up to `parallel` threads when
// there is more than one task, otherwise handing the threads to the
// exact solver. Output order is the task order either way.
int run_tasks(std::vector<Task>& tasks, const Options& o) {
  const bool force = o.quantity == "force";
  const int workers = std::max(1, std::min<int>(o.parallel, static_cast<int>(tasks.size())));
  const int inner = tasks.size() == 1 ? o.parallel : 1;
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < tasks.size();) evaluate(tasks[i], force, o.rel_tol, inner, o.max_n);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  int status = kOk;
  std::vector<RunRecord> rows;
  for (auto& t : tasks) {
    if (o.no_timing) t.rec.wall_seconds = 0.0;
    if (t.status != kOk) std::cerr << "casimir_cyl: " << t.method << " at d=" << t.pair.d << ": " << t.message << '\n';
    if (t.status == kInvalid) {
      status = kInvalid;
      continue;
    }
    if (t.status == kNotConverged && status == kOk) status = kNotConverged;
    rows.push_back(t.rec);
  }
  if (o.format == "json")
    cli::write_json(std::cout, rows);
  else
    cli::write_csv(std::cout, rows);
  return status;
}

int cmd_points(const Options& o, const std::vector<double>& ds) {
  if (o.quantity != "energy" && o.quantity != "force") throw InvalidInput("--quantity must be energy or force");
  if (o.format != "csv" && o.format != "json") throw InvalidInput("--format must be csv or json");
  if (!(o.rel_tol > 0)) throw InvalidInput("--rel-tol must be positive");
  if (o.parallel < 1) throw InvalidInput("--parallel must be at least 1");
  if (o.max_n < 1) throw InvalidInput("--max-n must be at least 1");
  const Bc bc = make_bc(o);
  const auto methods = parse_methods(o.method, o.quantity == "force");
  if (methods.empty()) throw InvalidInput("no method selected");
  if (is_composite(bc) && std::find(methods.begin(), methods.end(), "exact") != methods.end())
    throw InvalidInput("exact scattering takes dd, nn, dn or nd only");
  std::vector<Task> tasks;
  for (double d : ds)
    for (const auto& m : methods) tasks.push_back({make_pair(o, d), bc, m, {}});
  return run_tasks(tasks, o);
}

int cmd_verify(const std::string& suite, const std::string& level) {
  if (level != "fast" && level != "slow") throw InvalidInput("--level must be fast or slow");
  if (suite != "bessel" && suite != "oracle" && suite != "asymptotics" && suite != "all")
    throw InvalidInput("--suite must be bessel, oracle, asymptotics or all");
  const auto report = verify::run_suite(suite, level == "slow" ? verify::Level::Slow : verify::Level::Fast);
  int failed = 0;
  for (const auto& c : report) {
    std::printf("%s  %-12s %-58s worst %.3e  limit %.1e  %.2fs\n", c.passed ? "PASS" : "FAIL", c.suite.c_str(),
                c.name.c_str(), c.measured, c.threshold, c.seconds);
    failed += !c.passed;
  }
  std::printf("%zu checks, %d failed\n", report.size(), failed);
  return failed ? kVerifyFailed : kOk;
}

void add_point_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--kind", o.kind, "interior or exterior")->capture_default_str();
  cmd->add_option("--bc", o.bc, "dd, nn, dn, nd, pcpc or pcip")->capture_default_str();
  cmd->add_option("--a", o.a, "radius of cylinder A")->capture_default_str();
  cmd->add_option("--b", o.b, "radius of cylinder B")->capture_default_str();
  cmd->add_option("--method", o.method, "comma list of exact, pfa-integral, pfa-leading, asymptotic; or all")
      ->capture_default_str();
  cmd->add_option("--quantity", o.quantity, "energy or force")->capture_default_str();
  cmd->add_option("--rel-tol", o.rel_tol, "relative tolerance of the exact solver")->capture_default_str();
  cmd->add_option("--format", o.format, "csv or json")->capture_default_str();
  cmd->add_option("--parallel", o.parallel, "worker threads (default: CASIMIR_CYL_THREADS or 1)");
  cmd->add_option("--max-n", o.max_n, "largest matrix half width tried by the exact solver")->capture_default_str();
  cmd->add_flag("--no-timing", o.no_timing, "write wall_seconds as 0 so output is reproducible");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir energy and force between parallel cylinders"};
  app.require_subcommand(1);
  Options o;
  o.parallel = default_threads();

  auto* compute = app.add_subcommand("compute", "evaluate one geometry");
  add_point_flags(compute, o);
  compute->add_option("--d", o.d, "surface gap")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "evaluate a log-spaced grid of gaps");
  add_point_flags(sweep, o);
  sweep->add_option("--d-grid", o.d_grid, "start:stop:count")->required();

  std::string suite = "all", level = "fast";
  auto* ver = app.add_subcommand("verify", "run the built-in consistency checks");
  ver->add_option("--suite", suite, "bessel, oracle, asymptotics or all")->capture_default_str();
  ver->add_option("--level", level, "fast or slow")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*compute) return cmd_points(o, {o.d});
    if (*sweep) return cmd_points(o, parse_grid(o.d_grid));
    return cmd_verify(suite, level);
  } catch (const InvalidInput& e) {
    std::cerr << "casimir_cyl: " << e.what() << '\n';
    return kInvalid;
  } catch (const InvalidGeometry& e) {
    std::cerr << "casimir_cyl: invalid geometry: " << e.what() << '\n';
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "casimir_cyl: " << e.what() << '\n';
    return kInvalid;
  }
}
