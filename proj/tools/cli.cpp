#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nhj/dynamics.hpp"
#include "nhj/errors.hpp"
#include "nhj/expmap.hpp"
#include "nhj/geometry.hpp"
#include "nhj/maupertuis.hpp"
#include "nhj/serialize.hpp"
#include "nhj/system_file.hpp"
#include "nhj/systems.hpp"

namespace nhj::cli {

namespace {

using json = nlohmann::json;

// Errors raised while validating the configuration, as opposed to during
// integration.
bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSystem:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotInDistribution:
    case ErrorCode::ZeroVector:
    case ErrorCode::NotKinetic:
    case ErrorCode::RestrictedDomain:
    case ErrorCode::NoAnalyticSolution:
    case ErrorCode::NoAnalyticH:
      return true;
    default:
      return false;
  }
}

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

Vec to_vec(const std::vector<double>& xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v[static_cast<Eigen::Index>(i)] = xs[i];
  return v;
}

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) config_error(std::string(name) + " must be finite");
}

void require_finite(const Vec& v, const char* name) {
  if (!v.allFinite()) config_error(std::string(name) + " must be finite");
}

IntegratorOptions integrator_options(const RunConfig& cfg) {
  require_finite(cfg.step, "step");
  if (!(cfg.step > 0)) config_error("step must be positive");
  IntegratorOptions o;
  o.method = cfg.method;
  o.step = cfg.step;
  o.abs_tol = cfg.integrator_tol;
  o.rel_tol = cfg.integrator_tol;
  return o;
}

Vec initial_position(const SystemDefinition& sys, const RunConfig& cfg) {
  Vec q = cfg.q0 ? *cfg.q0 : Vec::Zero(sys.n);
  if (q.size() != sys.n) config_error("q0 needs " + std::to_string(sys.n) + " entries");
  require_finite(q, "q0");
  if (!in_chart(sys, q)) config_error("q0 lies outside the chart bounds");
  return q;
}

// Initial velocity from v0 (chart) or y0 (frame); a seeded random frame
// direction when neither is given and `allow_random` is set.
Vec initial_velocity(const SystemDefinition& sys, const Vec& q, const RunConfig& cfg,
                     bool allow_random) {
  if (cfg.v0 && cfg.y0) config_error("give either v0 or y0, not both");
  if (cfg.v0) {
    if (cfg.v0->size() != sys.n) config_error("v0 needs " + std::to_string(sys.n) + " entries");
    require_finite(*cfg.v0, "v0");
    const double norm = metric_norm(sys, q, *cfg.v0);
    if (constraint_residual(sys, q, *cfg.v0) > 1e-9 * std::max(norm, 1e-300) && norm > 0) {
      throw Error(ErrorCode::NotInDistribution, "v0 violates the constraint at q0");
    }
    return *cfg.v0;
  }
  if (cfg.y0) {
    if (cfg.y0->size() != sys.m) config_error("y0 needs " + std::to_string(sys.m) + " entries");
    require_finite(*cfg.y0, "y0");
    return frame_at(sys, q) * *cfg.y0;
  }
  if (!allow_random) return Vec::Zero(sys.n);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  Vec y(sys.m);
  for (Eigen::Index a = 0; a < sys.m; ++a) y[a] = normal(rng);
  return frame_at(sys, q) * y;
}

std::string output_format(const RunConfig& cfg, const char* fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "csv" && f != "json") config_error("format must be csv or json");
  return f;
}

std::string trajectory_json(const SystemDefinition& sys, const Trajectory& traj, bool wrap) {
  json rows = json::array();
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const AdaptedState& s = traj.samples[k];
    const Vec q = wrap ? wrap_periodic(sys, s.q) : s.q;
    rows.push_back({{"t", s.t},
                    {"q", std::vector<double>(q.data(), q.data() + q.size())},
                    {"p", std::vector<double>(s.p.data(), s.p.data() + s.p.size())},
                    {"energy", traj.energy_series.at(k)},
                    {"constraint_residual",
                     constraint_residual(sys, s.q, velocity_from_momenta(sys, s.q, s.p))}});
  }
  json doc = {{"system", traj.system_tag},
              {"integrator",
               {{"method", to_string(traj.integrator.method)},
                {"step", traj.integrator.step},
                {"abs_tol", traj.integrator.abs_tol},
                {"rel_tol", traj.integrator.rel_tol}}},
              {"samples", rows}};
  return doc.dump(2) + "\n";
}

}  // namespace

SystemDefinition resolve_system(const std::string& spec) {
  for (const std::string& name : builtin_names()) {
    if (name == spec) return builtin(name).definition;
  }
  if (std::filesystem::exists(spec)) {
    SystemDefinition sys = load_system_file(spec);
    check_definition(sys);
    return sys;
  }
  throw Error(ErrorCode::UnknownSystem, "'" + spec + "' is neither a built-in system nor a file");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorCode::ParseError, "empty entry in list '" + text + "'");
    item = item.substr(b, e - b + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw Error(ErrorCode::ParseError, "'" + item + "' is not a number");
    }
    out.push_back(value);
    pos = end + 1;
  }
  return out;
}

void apply_config_json(RunConfig& cfg, const std::string& json_text) {
  try {
    const json doc = json::parse(json_text);
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "system") cfg.system = value.get<std::string>();
      else if (key == "energy") cfg.energy = value.get<double>();
      else if (key == "q0") cfg.q0 = to_vec(value.get<std::vector<double>>());
      else if (key == "v0") cfg.v0 = to_vec(value.get<std::vector<double>>());
      else if (key == "y0") cfg.y0 = to_vec(value.get<std::vector<double>>());
      else if (key == "t-end") cfg.t_end = value.get<double>();
      else if (key == "method") cfg.method = parse_method(value.get<std::string>());
      else if (key == "step") cfg.step = value.get<double>();
      else if (key == "int-tol") cfg.integrator_tol = value.get<double>();
      else if (key == "tol") cfg.verify_tol = value.get<double>();
      else if (key == "format") cfg.format = value.get<std::string>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "mode") cfg.mode = value.get<std::string>();
      else if (key == "directions") cfg.directions = value.get<std::size_t>();
      else if (key == "radii") cfg.radii = value.get<std::vector<double>>();
      else if (key == "wrap-angles") cfg.wrap_angles = value.get<bool>();
      else throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const SystemDefinition sys = resolve_system(cfg.system);
  const Vec q = initial_position(sys, cfg);
  const Vec v = initial_velocity(sys, q, cfg, false);
  require_finite(cfg.t_end, "t-end");
  if (!(cfg.t_end > 0)) config_error("t-end must be positive");
  const std::string format = output_format(cfg, "csv");
  const IntegratorOptions opts = integrator_options(cfg);
  const Vec p = momenta_from_velocity(sys, q, v);

  Trajectory traj;
  try {
    traj = simulate_mechanical(sys, {0.0, q, p}, cfg.t_end, opts);
  } catch (const Error& e) {
    if (is_config_error(e.code())) throw;
    throw e.with_context("integration");
  }
  out << (format == "csv" ? trajectory_csv(sys, traj, cfg.wrap_angles)
                          : trajectory_json(sys, traj, cfg.wrap_angles));
  return kExitOk;
}

int cmd_verify_maupertuis(const RunConfig& cfg, std::ostream& out) {
  const SystemDefinition sys = resolve_system(cfg.system);
  if (!cfg.energy) config_error("verify-maupertuis needs --energy");
  require_finite(*cfg.energy, "energy");
  const Vec q = initial_position(sys, cfg);
  if (!(*cfg.energy - sys.potential(q) > kHillEpsilon)) config_error("energy must exceed V(q0)");
  const Vec v = initial_velocity(sys, q, cfg, true);
  if (!(metric_norm(sys, q, v) > 0)) throw Error(ErrorCode::ZeroVector, "initial velocity is zero");
  require_finite(cfg.t_end, "t-end");
  if (!(cfg.t_end > 0)) config_error("t-end must be positive");
  if (!(cfg.verify_tol >= 0)) config_error("tol must be non-negative");
  if (output_format(cfg, "json") != "json") config_error("verify-maupertuis writes json only");

  VerifyOptions vo;
  vo.integrator = integrator_options(cfg);
  vo.tol = cfg.verify_tol;
  const VerificationReport rep = verify_maupertuis(sys, *cfg.energy, q, v, cfg.t_end, vo);
  out << report_json(rep);
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_expmap(const RunConfig& cfg, std::ostream& out) {
  const SystemDefinition sys = resolve_system(cfg.system);
  const Vec q = initial_position(sys, cfg);
  ExpOptions eo;
  eo.kind = parse_exp_kind(cfg.mode);
  eo.integrator = integrator_options(cfg);
  if (eo.kind == ExpKind::jacobi) {
    if (!cfg.energy) config_error("jacobi mode needs --energy");
    require_finite(*cfg.energy, "energy");
    if (!(*cfg.energy - sys.potential(q) > kHillEpsilon)) config_error("energy must exceed V(q0)");
    eo.energy = *cfg.energy;
  }
  if (eo.kind == ExpKind::kinetic && !sys.potential_constant) {
    throw Error(ErrorCode::NotKinetic, "kinetic mode needs a system without potential");
  }
  if (cfg.directions == 0) config_error("directions must be positive");
  for (double r : cfg.radii) require_finite(r, "radii");
  const std::string format = output_format(cfg, "csv");

  std::vector<Vec> dirs;
  if (sys.m == 2) {
    dirs = planar_unit_directions(sys, q, cfg.directions);
  } else {
    const Mat gram = gram_at(sys, q).gram;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;
    for (std::size_t k = 0; k < cfg.directions; ++k) {
      Vec y(sys.m);
      for (Eigen::Index a = 0; a < sys.m; ++a) y[a] = normal(rng);
      dirs.push_back(y / std::sqrt(y.dot(gram * y)));
    }
  }
  const ExpGrid grid = exp_grid(sys, q, eo, dirs, cfg.radii);
  out << (format == "csv" ? expgrid_csv(grid) : expgrid_json(grid));
  return kExitOk;
}

int cmd_list_systems(std::ostream& out) {
  std::vector<SystemInfo> infos;
  for (const std::string& name : builtin_names()) infos.push_back(system_info(builtin(name)));
  out << systems_json(infos);
  return kExitOk;
}

namespace {

void add_common_flags(CLI::App& app, RunConfig& cfg, std::string& config_path,
                      std::string& q0, std::string& v0, std::string& y0, std::string& method) {
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_option("--system", cfg.system, "built-in system name or system-definition file");
  app.add_option("--energy", cfg.energy, "energy level e");
  app.add_option("--q0", q0, "initial position, comma separated");
  app.add_option("--v0", v0, "initial velocity in chart coordinates, comma separated");
  app.add_option("--y0", y0, "initial velocity in frame coordinates, comma separated");
  app.add_option("--t-end", cfg.t_end, "final time (s_end for verify-maupertuis)");
  app.add_option("--method", method, "rk4 or rkf45");
  app.add_option("--step", cfg.step, "rk4 step / rkf45 initial step");
  app.add_option("--int-tol", cfg.integrator_tol, "rkf45 absolute and relative tolerance");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--seed", cfg.seed, "seed for randomized directions");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonholonomic mechanics and Jacobi-metric verification"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path, q0, v0, y0, method, radii;
  double tol_flag = -1.0;
  bool unwrapped = false;

  auto* simulate = app.add_subcommand("simulate", "integrate a mechanical trajectory to CSV/JSON");
  auto* verify = app.add_subcommand("verify-maupertuis",
                                    "compare a mechanical trajectory with its reparametrized "
                                    "Jacobi-kinetic counterpart");
  auto* expmap = app.add_subcommand("expmap", "sample a nonholonomic exponential map");
  auto* list = app.add_subcommand("list-systems", "print built-in systems as JSON");
  (void)list;

  for (CLI::App* sub : {simulate, verify, expmap}) {
    add_common_flags(*sub, flags, config_path, q0, v0, y0, method);
  }
  simulate->add_flag("--unwrapped", unwrapped, "do not wrap periodic coordinates on output");
  simulate->add_option("--tol", tol_flag, "alias of --int-tol");
  expmap->add_option("--tol", tol_flag, "alias of --int-tol");
  verify->add_option("--tol", tol_flag, "pass threshold on the position deviation");
  expmap->add_option("--mode", flags.mode, "kinetic, jacobi or mechanical");
  expmap->add_option("--directions", flags.directions, "number of directions");
  expmap->add_option("--radii", radii, "comma-separated ascending radii");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (list->parsed()) return cmd_list_systems(out);

    // Config file first, then explicit flags on top.
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorCode::ParseError, "cannot open config '" + config_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      apply_config_json(cfg, buf.str());
    }
    CLI::App* sub = simulate->parsed() ? simulate : verify->parsed() ? verify : expmap;
    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--system")) cfg.system = flags.system;
    if (given("--energy")) cfg.energy = flags.energy;
    if (given("--q0")) cfg.q0 = to_vec(parse_list(q0));
    if (given("--v0")) cfg.v0 = to_vec(parse_list(v0));
    if (given("--y0")) cfg.y0 = to_vec(parse_list(y0));
    if (given("--t-end")) cfg.t_end = flags.t_end;
    if (given("--method")) cfg.method = parse_method(method);
    if (given("--step")) cfg.step = flags.step;
    if (given("--int-tol")) cfg.integrator_tol = flags.integrator_tol;
    if (given("--format")) cfg.format = flags.format;
    if (given("--out")) cfg.out = flags.out;
    if (given("--seed")) cfg.seed = flags.seed;
    if (given("--tol")) {
      if (sub == verify) cfg.verify_tol = tol_flag;
      else cfg.integrator_tol = tol_flag;
    }
    if (sub == simulate && unwrapped) cfg.wrap_angles = false;
    if (sub == expmap) {
      if (given("--mode")) cfg.mode = flags.mode;
      if (given("--directions")) cfg.directions = flags.directions;
      if (given("--radii")) cfg.radii = parse_list(radii);
    }

    std::ostringstream buffer;
    int code = kExitOk;
    if (sub == simulate) code = cmd_simulate(cfg, buffer);
    else if (sub == verify) code = cmd_verify_maupertuis(cfg, buffer);
    else code = cmd_expmap(cfg, buffer);

    if (cfg.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + cfg.out + "'");
      file << buffer.str();
    }
    if (code == kExitVerifyFailed) err << "error: VerificationFailed: deviation exceeds tolerance\n";
    return code;
  } catch (const Error& e) {
    std::string msg = e.message();
    for (char& c : msg) if (c == '\n') c = ' ';
    err << "error: " << to_string(e.code()) << ": " << msg;
    if (e.time()) err << " (t=" << *e.time() << ")";
    err << "\n";
    return is_config_error(e.code()) ? kExitConfig : kExitIntegration;
  }
}

}  // namespace nhj::cli
