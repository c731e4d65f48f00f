// dpwave: solve, continue, verify and evolve traveling waves of the nonlocal
// Degasperis-Procesi equation.
//
// exit codes: 0 ok, 1 usage or input, 2 nonconvergence, 3 truncated path,
// 4 verification failure, 5 blow-up

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "dpw/decay.hpp"
#include "dpw/errors.hpp"
#include "dpw/evolution.hpp"
#include "dpw/io.hpp"
#include "dpw/simd.hpp"
#include "dpw/steady.hpp"
#include "dpw/symmetry.hpp"

namespace {

using nlohmann::json;
using namespace dpw;

enum Exit { kOk = 0, kUsage = 1, kNonconvergence = 2, kTruncated = 3, kVerifyFailed = 4, kBlowUp = 5 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GridArgs {
  std::optional<double> period;
  std::optional<double> half_length;
  int n = 0;
  std::string kind = "periodic";

  void add(CLI::App* app, bool n_required = true) {
    auto* p = app->add_option("--period", period, "domain length 2P");
    auto* h = app->add_option("--half-length", half_length, "half length P");
    p->excludes(h);
    auto* o = app->add_option("--n", n, "grid points (even, >= 8)");
    if (n_required) o->required();
    app->add_option("--grid", kind, "grid kind")->check(CLI::IsMember({"periodic", "line"}));
  }

  Grid make() const {
    if (!period && !half_length) throw UsageError("one of --period or --half-length is required");
    const double P = half_length ? *half_length : 0.5 * *period;
    try {
      return Grid(grid_kind_from_string(kind), n, P);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << j.dump(2) << '\n';
  else
    io::write_text(path, j.dump(2) + "\n");
}

json failure_json(const std::exception& e) {
  json j{{"status", "nonconvergence"}, {"message", e.what()}};
  if (auto* nc = dynamic_cast<const NonconvergenceError*>(&e)) {
    j["last_residual"] = nc->last_residual;
    j["iterations"] = nc->iterations;
  } else if (auto* sj = dynamic_cast<const SingularJacobianError*>(&e)) {
    j["status"] = "singular";
    j["rcond"] = sj->rcond;
    j["iterations"] = sj->iteration;
  } else if (auto* dv = dynamic_cast<const DivergenceError*>(&e)) {
    j["status"] = "divergence";
    j["factor"] = dv->factor;
    j["iterations"] = dv->iteration;
  }
  return j;
}

bool is_solver_failure(const std::exception& e) {
  return dynamic_cast<const NonconvergenceError*>(&e) || dynamic_cast<const SingularJacobianError*>(&e) ||
         dynamic_cast<const DivergenceError*>(&e);
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  double c = 0.0;
  std::optional<double> height;
  GridArgs grid;
  std::string method = "newton";
  std::string op = "quadrature";
  std::string out;
  double tol = 1e-10;
  int max_iter = -1;
  double gamma = 2.0;
};

int run_solve(const SolveArgs& a, const io::Provenance& prov) {
  if (!(a.c > 0.0)) throw UsageError("--c must be positive");
  if (a.height && !(*a.height > 0.0 && *a.height < a.c)) throw UsageError("--height must lie in (0, c)");
  const Grid g = a.grid.make();
  SolveConfig cfg;
  cfg.residual_tol = a.tol;
  cfg.op = operator_from_string(a.op);
  if (cfg.op == Operator::spectral && g.kind != GridKind::periodic)
    throw UsageError("the spectral operator needs a periodic grid");

  try {
    SolveResult r;
    if (a.method == "newton") {
      cfg.max_iter = a.max_iter >= 0 ? a.max_iter : 100;
      r = solve_wave(g, a.c, a.height, cfg);
    } else {
      cfg.max_iter = a.max_iter >= 0 ? a.max_iter : 20000;
      cfg.gamma = a.gamma;
      WaveProfile guess = peakon(0.9 * a.c, 0.0, g);
      guess.c = a.c;
      r = solve_petviashvili(guess, cfg);
      if (a.height) {
        const double s = *a.height / r.profile.sup();
        for (double& v : r.profile.phi) v *= s;
        r.profile.c *= s;
        r.residual_norm = residual_norm(r.profile, {cfg.op, false});
      }
    }
    io::write_profile(a.out, io::ProfileDocument{io::kSchemaVersion, r.profile, prov});
    const BoundsReport b = bounds_check(r.profile);
    std::cout << json{{"status", "converged"},
                      {"iterations", r.iterations},
                      {"residual_norm", r.residual_norm},
                      {"c", r.profile.c},
                      {"sup", b.sup},
                      {"bounds_pass", b.pass()}}
                     .dump()
              << '\n';
    return kOk;
  } catch (const std::exception& e) {
    if (!is_solver_failure(e)) throw;
    std::cout << failure_json(e).dump(2) << '\n';
    return kNonconvergence;
  }
}

// ---------------------------------------------------------------------------

struct ContinueArgs {
  double c = 0.0, from = 0.0, to = 0.0;
  int steps = 0;
  GridArgs grid;
  std::string op = "quadrature";
  std::string outdir;
  double eps_peak = 1e-3;
  double tol = 1e-10;
};

int run_continue(ContinueArgs a, const io::Provenance& prov) {
  if (!(a.c > 0.0)) throw UsageError("--c must be positive");
  const double cap = a.c * (1.0 - a.eps_peak);
  if (a.to > cap) {
    std::cerr << "warning: --to " << a.to << " exceeds c(1 - eps_peak); clamped to " << cap << '\n';
    a.to = cap;
  }
  if (!(a.from > 0.0 && a.from <= a.to)) throw UsageError("need 0 < --from <= --to");
  if (a.steps < 1) throw UsageError("--steps must be positive");
  const Grid g = a.grid.make();
  SolveConfig cfg;
  cfg.residual_tol = a.tol;
  cfg.op = operator_from_string(a.op);

  std::filesystem::create_directories(a.outdir);
  const ContinuationPath path = continue_in_height(g, a.c, a.from, a.to, a.steps, cfg, {a.eps_peak});
  for (std::size_t k = 0; k < path.entries.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "profile_%03zu.json", k);
    io::write_profile((std::filesystem::path(a.outdir) / name).string(),
                      io::ProfileDocument{io::kSchemaVersion, path.entries[k].profile, prov});
  }
  std::ofstream csv(std::filesystem::path(a.outdir) / "path.csv");
  io::write_path_csv(csv, path);

  json j{{"entries", path.entries.size()}, {"truncated", path.truncated}};
  if (path.truncated) {
    j["failed_index"] = path.failed_index;
    j["last_successful_index"] = static_cast<int>(path.entries.size()) - 1;
    j["failure"] = path.failure;
  }
  std::cout << j.dump(2) << '\n';
  return path.truncated ? kTruncated : kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string in;
  std::string out;
  // decay
  std::optional<double> window_lo, window_hi;
  // symmetry
  double asym_tol = 1e-8;
  long pairs = 10000;
  std::uint64_t seed = 0;
  double crest_window = 0.1;
  // convlemma
  std::vector<double> l_fractions{0.2, 0.5, 0.9};
  std::vector<double> m_values{1.0, 2.0, 4.0};
  std::vector<double> sigmas{0.1, 1.0, 10.0};
  std::vector<double> ys{0.0, 1.0, -1.0, 5.0, -5.0, 20.0, -20.0};
  std::string csv;
};

io::ProfileDocument load(const std::string& path) {
  try {
    return io::read_profile(path);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int finish(json report, const std::vector<std::string>& failures, const std::string& out) {
  report["failures"] = failures;
  report["pass"] = failures.empty();
  emit(report, out);
  return failures.empty() ? kOk : kVerifyFailed;
}

int run_verify_bounds(const VerifyArgs& a) {
  const auto doc = load(a.in);
  const BoundsReport b = bounds_check(doc.profile);
  std::vector<std::string> fails;
  if (!b.positive) fails.push_back("profile is not positive");
  if (!b.below_two_c) fails.push_back("sup phi >= 2c");
  if (!b.below_c) fails.push_back("sup phi > c");
  return finish({{"check", "bounds"}, {"bounds", io::to_json(b)}}, fails, a.out);
}

int run_verify_decay(const VerifyArgs& a) {
  const auto doc = load(a.in);
  std::optional<std::pair<double, double>> window;
  const Grid& g = doc.profile.grid;
  const auto def = g.kind == GridKind::periodic ? std::make_pair(0.25 * g.half_length, 0.5 * g.half_length)
                                                : default_tail_window(g);
  if (a.window_lo || a.window_hi || g.kind == GridKind::periodic) {
    window = std::make_pair(a.window_lo.value_or(def.first), a.window_hi.value_or(def.second));
  }
  std::vector<std::string> fails;
  json report{{"check", "decay"}};
  try {
    const DecayReport d = fit_tail_rate(doc.profile, window);
    report["decay"] = io::to_json(d);
    if (!(d.fitted_rate >= 0.95)) fails.push_back("tail decays slower than the kernel");
    if (!(d.weighted_variation < 0.25)) fails.push_back("e^|x| phi varies by 25% or more on the outer window");
  } catch (const DomainError& e) {
    fails.push_back(e.what());
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  const double ac = asymptotic_constant(doc.profile);
  report["asymptotic_constant"] = ac;
  if (!(std::fabs(ac) <= 1e-6)) fails.push_back("asymptotic constant does not vanish");
  return finish(report, fails, a.out);
}

int run_verify_symmetry(const VerifyArgs& a) {
  const auto doc = load(a.in);
  const WaveProfile& p = doc.profile;
  std::vector<std::string> fails;
  json report{{"check", "symmetry"}};
  try {
    const SymmetryReport s = moving_plane_scan(p);
    report["scan"] = io::to_json(s);
    if (s.crest_count != 1) fails.push_back("crest count is not one");
    if (!s.monotone_left || !s.monotone_right) fails.push_back("flanks are not monotone");
    if (!(s.max_asymmetry <= a.asym_tol)) fails.push_back("profile is not symmetric about the detected axis");
  } catch (const AsymmetricProfileError& e) {
    fails.push_back(e.what());
  }
  const auto kr = kernel_reflection_inequalities(0.0, random_pairs(0.0, a.pairs, a.seed));
  report["kernel_reflection"] = io::to_json(kr);
  if (!kr.pass()) fails.push_back("kernel reflection inequalities violated");
  if (std::fabs(p.sup() - p.c) <= 1e-2 * p.c) {
    const CrestFit f = fit_crest_exponent(p, a.crest_window);
    report["crest_fit"] = io::to_json(f);
  }
  return finish(report, fails, a.out);
}

int run_verify_convlemma(const VerifyArgs& a) {
  for (double f : a.l_fractions)
    if (!(f > 0.0 && f < 1.0)) throw UsageError("l fractions must lie in (0, 1)");
  for (double s : a.sigmas)
    if (!(s > 0.0)) throw UsageError("sigmas must be positive");
  for (double m : a.m_values)
    if (!(m > 0.0)) throw UsageError("m values must be positive");
  ConvSweepSpec spec{a.l_fractions, a.m_values, a.sigmas, a.ys};
  const auto rows = conv_sweep(spec);
  if (!a.csv.empty()) {
    std::ofstream os(a.csv);
    write_conv_csv(os, rows);
  }
  long ok_safe = 0, ok_paper = 0;
  for (const auto& r : rows) {
    ok_safe += r.v.ok_safe;
    ok_paper += r.v.ok_paper;
  }
  std::vector<std::string> fails;
  if (ok_safe != static_cast<long>(rows.size())) fails.push_back("lhs exceeds the B_safe bound");
  json report{{"check", "convlemma"},
              {"rows", rows.size()},
              {"ok_safe", ok_safe},
              {"ok_paper", ok_paper},
              {"single_piece_constant_asserted", false}};
  return finish(report, fails, a.out);
}

// ---------------------------------------------------------------------------

struct EvolveArgs {
  std::string in, trace;
  double t_end = 0.0, dt = 0.0;
  int record_every = 1;
  double dealias = 2.0 / 3.0;
  double filter_alpha = 0.0;
  int filter_order = 8;
  std::string op = "spectral";
};

int run_evolve(const EvolveArgs& a) {
  const auto doc = load(a.in);
  const WaveProfile& p = doc.profile;
  if (p.grid.kind != GridKind::periodic) throw UsageError("evolution needs a periodic profile");
  StepConfig cfg;
  cfg.dt = a.dt;
  cfg.t_end = a.t_end;
  cfg.record_every = a.record_every;
  cfg.dealias_fraction = a.dealias;
  cfg.filter_alpha = a.filter_alpha;
  cfg.filter_order = a.filter_order;
  cfg.op = operator_from_string(a.op);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  try {
    const EvolutionTrace tr = simulate(p.field(), cfg);
    std::ofstream os(a.trace);
    if (!os) throw UsageError("cannot open trace file " + a.trace);
    write_trace_csv(os, tr);
    std::cout << json{{"status", "completed"},
                      {"speed_mean", tr.speed_mean},
                      {"speed_std", tr.speed_std},
                      {"c", p.c},
                      {"max_shape_error", tr.max_shape_error},
                      {"max_symmetry_error", tr.max_symmetry_error}}
                     .dump(2)
              << '\n';
    return kOk;
  } catch (const CflError& e) {
    std::cerr << "error: " << e.what() << "; suggested --dt " << io::format_double(e.suggested_dt) << '\n';
    return kUsage;
  } catch (const BlowUpError& e) {
    const auto& u = e.last_valid.u.values;
    const json rec{{"status", "blow-up"},
                   {"message", e.what()},
                   {"t_fail", e.t_fail},
                   {"t_last_valid", e.last_valid.t},
                   {"max_slope", e.max_slope},
                   {"sup_abs_u", simd::active().max_abs(u.data(), u.size())}};
    io::write_text(a.trace + ".blowup.json", rec.dump(2) + "\n");
    std::cout << rec.dump(2) << '\n';
    return kBlowUp;
  }
}

// ---------------------------------------------------------------------------

struct PeakonArgs {
  double c = 1.0;
  double center = 0.0;
  GridArgs grid;
  std::string out;
};

int run_peakon(const PeakonArgs& a, const io::Provenance& prov) {
  if (!(a.c > 0.0)) throw UsageError("--c must be positive");
  const Grid g = a.grid.make();
  io::write_profile(a.out, io::ProfileDocument{io::kSchemaVersion, peakon(a.c, a.center, g), prov});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traveling waves of the nonlocal Degasperis-Procesi equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dpw::io::tool_version());

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "compute a steady wave profile");
  solve->add_option("--c", sa.c, "wave speed")->required();
  solve->add_option("--height", sa.height, "crest height (c is then solved for)");
  sa.grid.add(solve);
  solve->add_option("--method", sa.method)->check(CLI::IsMember({"newton", "petviashvili"}));
  solve->add_option("--operator", sa.op)->check(CLI::IsMember({"quadrature", "spectral"}));
  solve->add_option("--out", sa.out, "profile document")->required();
  solve->add_option("--tol", sa.tol)->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", sa.max_iter);
  solve->add_option("--gamma", sa.gamma, "Petviashvili exponent");

  ContinueArgs ca;
  auto* cont = app.add_subcommand("continue", "continue a wave family in crest height");
  cont->add_option("--c", ca.c)->required();
  cont->add_option("--from", ca.from)->required();
  cont->add_option("--to", ca.to)->required();
  cont->add_option("--steps", ca.steps)->required();
  cont->add_option("--outdir", ca.outdir)->required();
  ca.grid.add(cont);
  cont->add_option("--operator", ca.op)->check(CLI::IsMember({"quadrature", "spectral"}));
  cont->add_option("--eps-peak", ca.eps_peak)->check(CLI::Range(0.0, 1.0));
  cont->add_option("--tol", ca.tol)->check(CLI::PositiveNumber);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check a profile or the convolution estimate");
  verify->require_subcommand(1);
  auto* vb = verify->add_subcommand("bounds", "positivity and height bounds");
  auto* vd = verify->add_subcommand("decay", "exponential tail decay");
  auto* vs = verify->add_subcommand("symmetry", "moving-plane symmetry scan");
  auto* vc = verify->add_subcommand("convlemma", "exponential convolution estimate sweep");
  for (auto* s : {vb, vd, vs}) {
    s->add_option("--in", va.in, "profile document")->required();
    s->add_option("--out", va.out, "report path (stdout when omitted)");
  }
  vd->add_option("--window-lo", va.window_lo);
  vd->add_option("--window-hi", va.window_hi);
  vs->add_option("--asymmetry-tol", va.asym_tol);
  vs->add_option("--pairs", va.pairs)->check(CLI::PositiveNumber);
  vs->add_option("--seed", va.seed);
  vs->add_option("--crest-window", va.crest_window)->check(CLI::PositiveNumber);
  vc->add_option("--l-fractions", va.l_fractions)->delimiter(',');
  vc->add_option("--m-values", va.m_values)->delimiter(',');
  vc->add_option("--sigmas", va.sigmas)->delimiter(',');
  vc->add_option("--ys", va.ys)->delimiter(',');
  vc->add_option("--csv", va.csv, "sweep CSV path");
  vc->add_option("--out", va.out, "report path (stdout when omitted)");

  EvolveArgs ea;
  auto* evolve = app.add_subcommand("evolve", "time-step a profile");
  evolve->add_option("--in", ea.in)->required();
  evolve->add_option("--t-end", ea.t_end)->required();
  evolve->add_option("--dt", ea.dt)->required();
  evolve->add_option("--trace", ea.trace)->required();
  evolve->add_option("--record-every", ea.record_every);
  evolve->add_option("--dealias", ea.dealias);
  evolve->add_option("--filter-alpha", ea.filter_alpha);
  evolve->add_option("--filter-order", ea.filter_order);
  evolve->add_option("--operator", ea.op)->check(CLI::IsMember({"quadrature", "spectral"}));

  PeakonArgs pa;
  auto* pk = app.add_subcommand("peakon", "write the exact peakon c e^{-|x - x0|}");
  pk->add_option("--c", pa.c);
  pk->add_option("--center", pa.center);
  pa.grid.add(pk);
  pk->add_option("--out", pa.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const io::Provenance prov = io::make_provenance(argc, argv);
  try {
    if (*solve) return run_solve(sa, prov);
    if (*cont) return run_continue(ca, prov);
    if (*vb) return run_verify_bounds(va);
    if (*vd) return run_verify_decay(va);
    if (*vs) return run_verify_symmetry(va);
    if (*vc) return run_verify_convlemma(va);
    if (*evolve) return run_evolve(ea);
    if (*pk) return run_peakon(pa, prov);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
