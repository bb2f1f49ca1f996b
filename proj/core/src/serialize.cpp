#include "nhj/serialize.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include <json.hpp>

#include "nhj/dynamics.hpp"
#include "nhj/errors.hpp"

namespace nhj {

namespace {

using json = nlohmann::json;

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

std::string trajectory_csv(const SystemDefinition& sys, const Trajectory& traj, bool wrap_angles) {
  std::ostringstream os;
  os << "t";
  for (int i = 1; i <= sys.n; ++i) os << ",q" << i;
  for (int a = 1; a <= sys.m; ++a) os << ",p" << a;
  os << ",energy,constraint_residual\n";
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const AdaptedState& s = traj.samples[k];
    const Vec q = wrap_angles ? wrap_periodic(sys, s.q) : s.q;
    const double e = k < traj.energy_series.size() ? traj.energy_series[k] : energy(sys, s);
    const double residual = constraint_residual(sys, s.q, velocity_from_momenta(sys, s.q, s.p));
    os << format_double(s.t);
    for (Eigen::Index i = 0; i < q.size(); ++i) os << ',' << format_double(q[i]);
    for (Eigen::Index a = 0; a < s.p.size(); ++a) os << ',' << format_double(s.p[a]);
    os << ',' << format_double(e) << ',' << format_double(residual) << '\n';
  }
  return os.str();
}

std::string report_json(const VerificationReport& r) {
  json j;
  j["system"] = r.system;
  j["e"] = r.e;
  j["q0"] = to_json(r.q0);
  j["v_q"] = to_json(r.v_q);
  j["mechanical_initial_velocity"] = to_json(r.mechanical_velocity);
  j["kinetic_initial_velocity"] = to_json(r.kinetic_velocity);
  j["s_grid"] = r.s_grid;
  j["h_samples"] = r.h_samples;
  j["max_position_deviation"] = r.max_position_deviation;
  j["max_h_residual"] = r.max_h_residual;
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  j["mechanical_endpoint"] = to_json(r.mechanical_endpoint);
  j["kinetic_endpoint"] = to_json(r.kinetic_endpoint);
  return j.dump(2) + "\n";
}

std::string expgrid_csv(const ExpGrid& grid) {
  std::ostringstream os;
  os << "direction,radius";
  for (Eigen::Index i = 1; i <= grid.q.size(); ++i) os << ",q" << i;
  os << '\n';
  for (const ExpGridRow& row : grid.rows) {
    os << row.direction << ',' << format_double(row.radius);
    for (Eigen::Index i = 0; i < row.point.size(); ++i) os << ',' << format_double(row.point[i]);
    os << '\n';
  }
  return os.str();
}

std::string expgrid_json(const ExpGrid& grid) {
  json j;
  j["system"] = grid.system;
  j["kind"] = to_string(grid.kind);
  j["q"] = to_json(grid.q);
  j["energy"] = grid.energy ? json(*grid.energy) : json(nullptr);
  json dirs = json::array();
  for (const Vec& d : grid.directions) dirs.push_back(to_json(d));
  j["directions"] = dirs;
  j["radii"] = grid.radii;
  json rows = json::array();
  for (const ExpGridRow& row : grid.rows) {
    rows.push_back({{"direction", row.direction}, {"radius", row.radius}, {"point", to_json(row.point)}});
  }
  j["image"] = rows;
  json fails = json::array();
  for (const ExpGridFailure& f : grid.failures) {
    fails.push_back({{"direction", f.direction},
                     {"radius", f.radius},
                     {"code", std::string(to_string(f.code))},
                     {"message", f.message}});
  }
  j["failures"] = fails;
  j["ball_warnings"] = grid.ball_warnings;
  return j.dump(2) + "\n";
}

SystemInfo system_info(const BuiltinSystem& b) {
  return {b.name, b.definition.n, b.definition.m, b.has_analytic, b.description};
}

std::string systems_json(const std::vector<SystemInfo>& systems) {
  json a = json::array();
  for (const SystemInfo& s : systems) {
    a.push_back({{"name", s.name},
                 {"n", s.n},
                 {"m", s.m},
                 {"has_analytic", s.has_analytic},
                 {"description", s.description}});
  }
  return json({{"systems", a}}).dump(2) + "\n";
}

std::vector<SystemInfo> parse_systems_json(std::string_view text) {
  std::vector<SystemInfo> out;
  try {
    const json doc = json::parse(text);
    for (const json& s : doc.at("systems")) {
      out.push_back({s.at("name").get<std::string>(), s.at("n").get<int>(), s.at("m").get<int>(),
                     s.at("has_analytic").get<bool>(), s.value("description", std::string())});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("systems listing: ") + e.what());
  }
  return out;
}

}  // namespace nhj
