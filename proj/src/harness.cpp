#include "kobdyn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "kobdyn/backward.hpp"
#include "kobdyn/dynamics.hpp"
#include "kobdyn/errors.hpp"
#include "kobdyn/geodesic.hpp"
#include "kobdyn/horosphere.hpp"
#include "kobdyn/lempert.hpp"
#include "kobdyn/metric.hpp"
#include "kobdyn/rng.hpp"
#include "kobdyn/schema.hpp"

namespace kobdyn {

using nlohmann::json;

void log_line(const std::string& msg) {
  const char* lvl = std::getenv("KOBDYN_LOG");
  if (lvl && (std::string(lvl) == "info" || std::string(lvl) == "debug"))
    std::cerr << "[kobdyn] " << msg << "\n";
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  cfg.raw = j;
  if (!j.is_object()) throw ConfigError("config must be a JSON object", "");
  if (!j.contains("task") || !j["task"].is_string())
    throw ConfigError("config needs a task string", "/task");
  cfg.task = j["task"].get<std::string>();
  const char* tasks[] = {"classify", "forward", "backward", "construct",
                         "verify-theorem01", "verify-lemmas", "distance-bench"};
  if (std::find(std::begin(tasks), std::end(tasks), cfg.task) == std::end(tasks))
    throw ConfigError("unknown task '" + cfg.task + "'", "/task");
  if (!j.contains("seed") || !j["seed"].is_number())
    throw ConfigError("config needs a seed (reproducibility is mandatory)", "/seed");
  cfg.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("map")) {
    std::optional<Domain> hint;
    if (j.contains("domain")) hint = parse_domain(j["domain"]);
    cfg.map = parse_map(j["map"], hint);
    cfg.domain = cfg.map->domain();
  } else if (j.contains("domain")) {
    cfg.domain = parse_domain(j["domain"]);
  } else {
    throw ConfigError("config needs a map or a domain", "/map");
  }
  if (!cfg.map && cfg.task != "distance-bench")
    throw ConfigError("task '" + cfg.task + "' needs a map", "/map");

  cfg.params = j.value("params", json::object());
  cfg.name = j.value("name", cfg.task);
  cfg.out_dir = j.value("out", std::string("out"));

  // boundary points named in params must lie on the boundary
  for (const char* key : {"sigma", "toward", "julia_tau"}) {
    if (cfg.params.contains(key)) {
      Point p = parse_point(cfg.params[key], std::string("/params/") + key);
      if (std::abs(cfg.domain.rho(p)) > 1e-10 && cfg.domain.boundary_dist(p) > 1e-10)
        throw ConfigError(std::string("point '") + key + "' is not on the boundary",
                          std::string("/params/") + key);
    }
  }
  return cfg;
}

namespace {

Point param_point(const json& params, const char* key, const Point& fallback) {
  if (!params.contains(key)) return fallback;
  return parse_point(params[key], std::string("/params/") + key);
}

BackwardConfig backward_config(const ExperimentConfig& cfg) {
  BackwardConfig b;
  b.a_max = cfg.params.value("a_max", 2.0);
  std::string policy = cfg.params.value("policy", "min_step");
  if (policy == "min_step") {
    b.policy = BranchPolicy::MinStep;
  } else if (policy == "toward_sigma") {
    b.policy = BranchPolicy::TowardSigma;
    if (!cfg.params.contains("toward"))
      throw ConfigError("toward_sigma policy needs params.toward", "/params/toward");
  } else {
    throw ConfigError("unknown policy '" + policy + "'", "/params/policy");
  }
  if (cfg.params.contains("toward"))
    b.toward = parse_point(cfg.params["toward"], "/params/toward");
  b.use_quad = cfg.params.value("use_quad", true);
  b.newton.seed = cfg.seed ^ 0x9e3779b97f4a7c15ULL;
  return b;
}

// ---- plot emission ---------------------------------------------------------

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string polyline_csv(const std::vector<std::pair<double, double>>& pts) {
  std::string out = "x,y\r\n";
  for (auto& [x, y] : pts) out += fmt(x) + "," + fmt(y) + "\r\n";
  return out;
}

void emit_orbit_plots(const ExperimentConfig& cfg, const OrbitRecord& orbit,
                      std::vector<std::filesystem::path>& files) {
  namespace fs = std::filesystem;
  // first-coordinate projection of the orbit
  std::vector<std::pair<double, double>> proj;
  for (const auto& p : orbit.points) proj.emplace_back(p[0].real(), p[0].imag());
  fs::path f = cfg.out_dir / (cfg.name + "_plot_orbit.csv");
  write_file_atomic(f, polyline_csv(proj));
  files.push_back(f);

  if (!orbit.boundary_limit || cfg.domain.kind() == DomainKind::General) return;
  // horocycle level curves in the complex slice toward the limit point
  Complex tau = cfg.domain.kind() == DomainKind::LinearImage
                    ? Complex(1.0, 0.0)
                    : (*orbit.boundary_limit)[0];
  if (cfg.domain.kind() != DomainKind::UnitDisk) {
    // use the slice coordinate: the limit direction is the slice's "1"
    tau = Complex(1.0, 0.0);
  }
  for (double R : {0.25, 1.0, 4.0}) {
    std::vector<std::pair<double, double>> circle;
    Complex c = tau / (1.0 + R);
    double r = R / (1.0 + R);
    for (int i = 0; i <= 128; ++i) {
      double th = 6.283185307179586 * i / 128;
      Complex z = c + r * Complex(std::cos(th), std::sin(th));
      circle.emplace_back(z.real(), z.imag());
    }
    fs::path fh = cfg.out_dir / (cfg.name + "_plot_horosphere_R" + fmt(R) + ".csv");
    write_file_atomic(fh, polyline_csv(circle));
    files.push_back(fh);
  }
  // K-region boundary for amplitude log M = 1 (slice coordinates, polar scan)
  {
    std::vector<std::pair<double, double>> curve;
    for (int i = 0; i <= 180; ++i) {
      double th = -3.0 + 6.0 * i / 180.0;  // angles around the direction of tau
      Complex dir{std::cos(th), std::sin(th)};
      double lo = 0.0, hi = 1.0 - 1e-9;
      auto gauge = [&](double r) {
        Complex z = r * dir * tau;
        double h = std::norm(1.0 - std::conj(tau) * z) / (1.0 - std::norm(z));
        return 0.5 * std::log(h) + std::atanh(r);
      };
      if (gauge(hi) < 1.0) continue;  // ray stays inside the region
      for (int b = 0; b < 60; ++b) {
        double mid = 0.5 * (lo + hi);
        if (gauge(mid) < 1.0) lo = mid; else hi = mid;
      }
      Complex z = 0.5 * (lo + hi) * dir * tau;
      curve.emplace_back(z.real(), z.imag());
    }
    std::filesystem::path fk = cfg.out_dir / (cfg.name + "_plot_kregion_M1.csv");
    write_file_atomic(fk, polyline_csv(curve));
    files.push_back(fk);
  }
}

void emit_orbit_files(const ExperimentConfig& cfg, const OrbitRecord& orbit,
                      std::vector<std::filesystem::path>& files) {
  namespace fs = std::filesystem;
  fs::path csv = cfg.out_dir / (cfg.name + "_orbit.csv");
  write_file_atomic(csv, orbit_to_csv(orbit));
  files.push_back(csv);
  fs::path oj = cfg.out_dir / (cfg.name + "_orbit.json");
  write_file_atomic(oj, orbit_to_json(orbit).dump(2) + "\n");
  files.push_back(oj);
  emit_orbit_plots(cfg, orbit, files);
}

// Optional expectation checks shared by several tasks.
void apply_expectations(const ExperimentConfig& cfg, const json& source, VerdictReport& rep) {
  const json& p = cfg.params;
  if (p.contains("expect_kind")) {
    std::string want = p["expect_kind"].get<std::string>();
    std::string got = source.value("kind", "?");
    rep.add(CheckResult::make("expect_kind", want == got, 0, 0, 0,
                              json{{"want", want}, {"got", got}}));
  }
}

// ---- task runners -----------------------------------------------------------

VerdictReport task_classify(const ExperimentConfig& cfg,
                            std::vector<std::filesystem::path>& files) {
  IterateConfig ic;
  ic.seed = cfg.seed;
  Classification cls = classify(*cfg.map, ic);
  VerdictReport rep;
  rep.title = "classification";
  rep.extra = cls.to_json();
  rep.add(CheckResult::make("classified", true, 0, 0, 0));
  apply_expectations(cfg, rep.extra, rep);
  if (cfg.params.contains("expect_beta") && cls.beta) {
    double want = cfg.params["expect_beta"].get<double>();
    double tol = cfg.params.value("expect_beta_tol", 1e-6);
    double got = cls.beta->value;
    rep.add(CheckResult::make("expect_beta", std::abs(got - want) <= tol, got, want, tol));
  }
  if (cfg.params.contains("expect_wolff")) {
    Point want = parse_point(cfg.params["expect_wolff"], "/params/expect_wolff");
    double tol = cfg.params.value("expect_wolff_tol", 1e-6);
    Point got = cls.fixed_point ? *cls.fixed_point
                                : (cls.wolff ? cls.wolff->coords : Point::Zero(cfg.domain.dim()));
    rep.add(CheckResult::make("expect_wolff", (got - want).norm() <= tol, (got - want).norm(),
                              0, tol, point_to_json(got)));
  }
  (void)files;
  return rep;
}

VerdictReport task_forward(const ExperimentConfig& cfg,
                           std::vector<std::filesystem::path>& files) {
  Point z0 = param_point(cfg.params, "z0", cfg.domain.center());
  int n = cfg.params.value("n", 50);
  OrbitRecord orbit = iterate_forward(*cfg.map, z0, n);
  VerdictReport rep;
  rep.title = "forward orbit";
  double first = orbit.steps.empty() ? 0.0 : orbit.steps.front();
  double worst = 0;
  for (double s : orbit.steps) worst = std::max(worst, s);
  rep.add(CheckResult::make("steps_bounded_by_first", worst <= first + 1e-9, worst, first, 1e-9));
  emit_orbit_files(cfg, orbit, files);
  return rep;
}

VerdictReport task_backward(const ExperimentConfig& cfg,
                            std::vector<std::filesystem::path>& files, OrbitRecord* out_orbit) {
  Point z0 = param_point(cfg.params, "z0", cfg.domain.center());
  int n = cfg.params.value("n", 40);
  BackwardConfig bc = backward_config(cfg);
  OrbitRecord orbit = backward_orbit(*cfg.map, z0, n, bc);
  IterateConfig ic;
  ic.seed = cfg.seed;
  Classification cls = classify(*cfg.map, ic);
  attach_diagnostics(orbit, *cfg.map, cls, param_point(cfg.params, "pole", cfg.domain.center()));

  VerdictReport rep;
  rep.title = "backward orbit";
  double res_tol = cfg.params.value("residual_tol", 1e-10);
  double worst_res = 0;
  for (double r : orbit.residuals) worst_res = std::max(worst_res, r);
  rep.add(CheckResult::make("residuals", worst_res <= res_tol, worst_res, res_tol, res_tol));
  rep.add(CheckResult::make("requested_length", !orbit.truncated,
                            static_cast<double>(orbit.points.size()), n + 1.0, 0,
                            json{{"note", orbit.note}}));
  if (cfg.params.contains("expect_limit")) {
    Point want = parse_point(cfg.params["expect_limit"], "/params/expect_limit");
    double tol = cfg.params.value("expect_limit_tol", 1e-6);
    double gap = (orbit.points.back() - want).norm();
    rep.add(CheckResult::make("expect_limit", gap <= tol, gap, 0, tol));
  }
  if (cfg.params.contains("expect_step")) {
    double want = cfg.params["expect_step"].get<double>();
    double tol = cfg.params.value("expect_step_tol", 1e-9);
    double worst_dev = 0;
    for (double s : orbit.steps) worst_dev = std::max(worst_dev, std::abs(s - want));
    rep.add(CheckResult::make("expect_step_constant", worst_dev <= tol, worst_dev, 0, tol));
  }
  rep.extra = json{{"step_sup", orbit.step_sup},
                   {"converged_boundary", orbit.converged_boundary},
                   {"classification", cls.to_json()}};
  emit_orbit_files(cfg, orbit, files);
  if (out_orbit) *out_orbit = std::move(orbit);
  return rep;
}

VerdictReport task_construct(const ExperimentConfig& cfg,
                             std::vector<std::filesystem::path>& files) {
  if (!cfg.params.contains("sigma"))
    throw ConfigError("construct needs params.sigma", "/params/sigma");
  BoundaryPoint sigma = cfg.domain.boundary_point(
      parse_point(cfg.params["sigma"], "/params/sigma"));
  Point pole = param_point(cfg.params, "pole", cfg.domain.center());
  DilationEstimate beta = dilation_coefficient(*cfg.map, sigma, pole);

  IsolationWindow win;
  if (cfg.params.contains("window_radius")) {
    win.center = sigma;
    win.radius = cfg.params["window_radius"].get<double>();
    win.beta_cap = beta.value;
  } else {
    win = default_window(*cfg.map, sigma, beta.value);
  }
  ConstructConfig cc;
  cc.slack = cfg.params.value("slack", 0.05);
  cc.family = cfg.params.value("family", 18);
  cc.extend_target = cfg.params.value("extend_target", 1e-5);
  cc.pole = pole;
  OrbitRecord orbit = construct_backward_orbit_at(*cfg.map, sigma, win, cc);

  VerdictReport rep;
  rep.title = "bounded-step construction";
  double res_tol = cfg.params.value("residual_tol", 1e-10);
  double worst_res = 0;
  for (double r : orbit.residuals) worst_res = std::max(worst_res, r);
  rep.add(CheckResult::make("residuals", worst_res <= res_tol, worst_res, res_tol, res_tol));
  double bound = 0.5 * std::log(beta.value) + cc.slack;
  rep.add(CheckResult::make("step_bound", orbit.step_sup <= bound, orbit.step_sup, bound, cc.slack));
  double gap = (orbit.points.back() - sigma.coords).norm();
  double gap_tol = cfg.params.value("final_gap_tol", 1e-4);
  rep.add(CheckResult::make("converges_to_sigma", gap < gap_tol, gap, gap_tol, gap_tol));
  rep.extra = json{{"beta_sigma", beta.value}, {"window_radius", win.radius},
                   {"note", orbit.note}, {"length", orbit.points.size()}};
  emit_orbit_files(cfg, orbit, files);
  return rep;
}

VerdictReport task_verify_theorem01(const ExperimentConfig& cfg,
                                    std::vector<std::filesystem::path>& files) {
  OrbitRecord orbit;
  VerdictReport rep = task_backward(cfg, files, &orbit);
  rep.title = "theorem01 verification";
  Point pole = param_point(cfg.params, "pole", cfg.domain.center());
  VerdictReport suite = theorem01_suite(*cfg.map, orbit, pole);
  rep.merge(suite);
  VerdictReport lim = limsup_step_fixedpoint_check(*cfg.map, orbit);
  rep.merge(lim);
  json extra = rep.extra;
  extra["theorem01"] = suite.extra;
  extra["limsup_check"] = lim.extra;
  rep.extra = extra;
  return rep;
}

VerdictReport task_verify_lemmas(const ExperimentConfig& cfg,
                                 std::vector<std::filesystem::path>& files) {
  VerdictReport rep;
  rep.title = "lemma battery";
  Point pole = param_point(cfg.params, "pole", cfg.domain.center());
  json extra;

  if (cfg.params.contains("sigma")) {
    BoundaryPoint sigma = cfg.domain.boundary_point(
        parse_point(cfg.params["sigma"], "/params/sigma"));
    VerdictReport sl = step_limit_check(*cfg.map, sigma, pole,
                                        cfg.params.value("step_limit_tol", 1e-3));
    rep.merge(sl);
    extra["step_limit"] = sl.extra;

    if (cfg.params.contains("poles")) {
      std::vector<Point> poles;
      for (const auto& pj : cfg.params["poles"]) poles.push_back(parse_point(pj, "/params/poles"));
      std::vector<DilationEstimate> est;
      for (const auto& p : poles) est.push_back(dilation_coefficient(*cfg.map, sigma, p));
      for (std::size_t i = 0; i < est.size(); ++i)
        for (std::size_t j = i + 1; j < est.size(); ++j) {
          double gap = std::abs(est[i].value - est[j].value);
          double bar = est[i].error_bar + est[j].error_bar + 1e-9;
          rep.add(CheckResult::make(
              "pole_independence_" + std::to_string(i) + "_" + std::to_string(j), gap <= bar,
              gap, bar, bar, json{{"beta_i", est[i].value}, {"beta_j", est[j].value}}));
        }
    }
  }

  if (cfg.params.contains("julia_tau")) {
    BoundaryPoint sigma = cfg.domain.boundary_point(
        parse_point(cfg.params["sigma"], "/params/sigma"));
    BoundaryPoint tau = cfg.domain.boundary_point(
        parse_point(cfg.params["julia_tau"], "/params/julia_tau"));
    int trials = cfg.params.value("julia_trials", 200);
    VerdictReport jl = julia_check(*cfg.map, sigma, tau, pole, trials, cfg.seed);
    rep.merge(jl);
    extra["julia"] = jl.extra;
  }

  if (cfg.params.contains("orbit")) {
    ExperimentConfig sub = cfg;
    sub.params = cfg.params["orbit"];
    sub.name = cfg.name + "_orbit";
    OrbitRecord orbit;
    VerdictReport ob = task_backward(sub, files, &orbit);
    rep.merge(ob);
    VerdictReport battery = inequality_battery(*cfg.map, orbit, pole);
    rep.merge(battery);
    extra["battery"] = battery.extra;
  }

  rep.extra = extra;
  return rep;
}

VerdictReport task_distance_bench(const ExperimentConfig& cfg,
                                  std::vector<std::filesystem::path>& files) {
  const Domain& D = cfg.domain;
  int pairs = cfg.params.value("pairs", 100);
  double tol = cfg.params.value("tol", 1e-3);
  double gap_tol = cfg.params.value("gap_tol", 1e-6);
  LempertConfig lc;
  lc.degree = cfg.params.value("degree", 6);
  lc.max_evals = cfg.params.value("max_evals", lc.max_evals);
  lc.seed = cfg.seed ^ 0xa5a5a5a5ULL;

  SplitRng rng(cfg.seed);
  double max_err = 0, max_gap = 0, min_margin = 1e300;
  int fallbacks = 0;
  std::string csv = "i,oracle,lempert,err,gap\r\n";
  json worst;
  for (int i = 0; i < pairs; ++i) {
    Point z, w;
    do {
      z = D.kind() == DomainKind::LinearImage ? Point(D.T() * rng.in_ball(D.dim()))
                                              : Point(rng.in_ball(D.dim()));
      w = D.kind() == DomainKind::LinearImage ? Point(D.T() * rng.in_ball(D.dim()))
                                              : Point(rng.in_ball(D.dim()));
    } while ((z - w).norm() < 1e-6);
    double oracle = distance(D, z, w);
    LempertResult lr = lempert_numeric(D, z, w, lc);
    if (lr.fallback) ++fallbacks;
    double err = std::abs(lr.value - oracle);
    double lower_margin = lr.value - oracle;  // certified upper bound check
    min_margin = std::min(min_margin, lower_margin);
    if (err > max_err) {
      max_err = err;
      worst = json{{"z", point_to_json(z)}, {"w", point_to_json(w)},
                   {"oracle", oracle}, {"lempert", lr.value}};
    }
    max_gap = std::max(max_gap, lr.feasibility_gap);
    csv += std::to_string(i) + "," + fmt(oracle) + "," + fmt(lr.value) + "," + fmt(err) +
           "," + fmt(lr.feasibility_gap) + "\r\n";
  }
  std::filesystem::path f = cfg.out_dir / (cfg.name + "_pairs.csv");
  write_file_atomic(f, csv);
  files.push_back(f);

  VerdictReport rep;
  rep.title = "distance bench";
  bool have_oracle = D.kind() != DomainKind::General;
  if (have_oracle) {
    rep.add(CheckResult::make("oracle_agreement", max_err <= tol, max_err, tol, tol, worst));
    rep.add(CheckResult::make("upper_bound", min_margin >= -1e-9, min_margin, 0, 1e-9));
  }
  rep.add(CheckResult::make("feasibility_gap", max_gap <= gap_tol, max_gap, gap_tol, gap_tol));
  rep.add(CheckResult::make("no_fallbacks", fallbacks == 0, fallbacks, 0, 0));
  rep.extra = json{{"pairs", pairs}, {"max_err", max_err}, {"max_gap", max_gap},
                   {"degree", lc.degree}};
  return rep;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  RunResult rr;
  log_line("task " + cfg.task + " (" + cfg.name + ")");
  if (cfg.task == "classify") {
    rr.report = task_classify(cfg, rr.files);
  } else if (cfg.task == "forward") {
    rr.report = task_forward(cfg, rr.files);
  } else if (cfg.task == "backward") {
    rr.report = task_backward(cfg, rr.files, nullptr);
  } else if (cfg.task == "construct") {
    rr.report = task_construct(cfg, rr.files);
  } else if (cfg.task == "verify-theorem01") {
    rr.report = task_verify_theorem01(cfg, rr.files);
  } else if (cfg.task == "verify-lemmas") {
    rr.report = task_verify_lemmas(cfg, rr.files);
  } else if (cfg.task == "distance-bench") {
    rr.report = task_distance_bench(cfg, rr.files);
  } else {
    throw ConfigError("unknown task '" + cfg.task + "'", "/task");
  }

  json doc{{"schema_version", kSchemaVersion},
           {"task", cfg.task},
           {"name", cfg.name},
           {"seed", cfg.seed},
           {"config", cfg.raw},
           {"report", rr.report.to_json()}};
  json fnames = json::array();
  for (const auto& f : rr.files) fnames.push_back(f.filename().string());
  doc["files"] = fnames;
  std::filesystem::path rp = cfg.out_dir / (cfg.name + "_report.json");
  write_file_atomic(rp, doc.dump(2) + "\n");
  rr.files.push_back(rp);
  rr.exit_code = rr.report.pass() ? kExitOk : kExitNumericError;
  return rr;
}

RunResult run_file(const std::filesystem::path& config_path,
                   const std::optional<std::filesystem::path>& out_override,
                   std::optional<std::uint64_t> seed_override) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("cannot read config file " + config_path.string(), "");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what(), "");
  }
  if (seed_override) j["seed"] = *seed_override;
  ExperimentConfig cfg = parse_config(j);
  if (!j.contains("name")) cfg.name = config_path.stem().string();
  if (out_override) cfg.out_dir = *out_override;
  try {
    return run(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    // numeric failure: serialized into a failing report, exit code 3
    RunResult rr;
    rr.report.title = cfg.task;
    rr.report.add(CheckResult::make("module_error", false, 0, 0, 0,
                                    json{{"error", e.what()}}));
    json doc{{"schema_version", kSchemaVersion}, {"task", cfg.task}, {"name", cfg.name},
             {"seed", cfg.seed},               {"config", cfg.raw},
             {"report", rr.report.to_json()},  {"files", json::array()}};
    std::filesystem::path rp = cfg.out_dir / (cfg.name + "_report.json");
    write_file_atomic(rp, doc.dump(2) + "\n");
    rr.files.push_back(rp);
    rr.exit_code = kExitNumericError;
    return rr;
  }
}

SuiteResult run_suite(const std::filesystem::path& dir,
                      const std::optional<std::filesystem::path>& out_override) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("suite: not a directory: " + dir.string(), "");
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") configs.push_back(e.path());
  std::sort(configs.begin(), configs.end());

  fs::path out = out_override.value_or(dir / "out");
  SuiteResult sr;
  json rows = json::array();
  for (const auto& c : configs) {
    int code;
    bool pass;
    std::string detail;
    try {
      RunResult rr = run_file(c, out / c.stem());
      code = rr.exit_code;
      pass = rr.report.pass();
      detail = rr.report.title;
    } catch (const ConfigError& e) {
      code = kExitConfigError;
      pass = false;
      detail = std::string("config error: ") + e.what() +
               (e.pointer.empty() ? "" : " at " + e.pointer);
    }
    rows.push_back({{"config", c.filename().string()}, {"exit", code}, {"pass", pass},
                    {"detail", detail}});
    sr.exit_code = std::max(sr.exit_code, code);
    log_line(c.filename().string() + (pass ? " PASS" : " FAIL"));
  }
  sr.summary = json{{"schema_version", kSchemaVersion}, {"suite", rows},
                    {"total", configs.size()}, {"exit", sr.exit_code}};
  sr.summary_path = out / "suite_summary.json";
  write_file_atomic(sr.summary_path, sr.summary.dump(2) + "\n");
  return sr;
}

}  // namespace kobdyn
