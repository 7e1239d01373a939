#include "aderdg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace aderdg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

int to_int(const std::string& s) { return static_cast<int>(to_long(s)); }

bool to_bool(const std::string& s) {
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected on/off, got '" + s + "'");
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

template <typename T, typename Conv>
std::array<T, 3> to_triple(const std::string& s, Conv conv) {
  auto items = split_list(s);
  if (items.empty() || items.size() > 3) throw std::invalid_argument("expected 1 to 3 comma-separated values");
  std::array<T, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = conv(items[std::min<std::size_t>(i, items.size() - 1)]);
  return out;
}

std::array<BoundaryType, 2> to_bc_pair(const std::string& s) {
  auto items = split_list(s);
  if (items.empty() || items.size() > 2) throw std::invalid_argument("expected 'type' or 'lower,upper'");
  return {parse_boundary(items[0]), parse_boundary(items.back())};
}

PredictorMode to_mode(const std::string& s) {
  if (s == "conservative") return PredictorMode::kConservative;
  if (s == "primitive") return PredictorMode::kPrimitive;
  throw std::invalid_argument("predictor must be conservative or primitive");
}

InitialGuess to_guess(const std::string& s) {
  if (s == "auto") return InitialGuess::kAuto;
  if (s == "muscl") return InitialGuess::kMuscl;
  if (s == "order3") return InitialGuess::kOrder3;
  throw std::invalid_argument("initial_guess must be auto, muscl or order3");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"system", [](RunConfig& c, const std::string& v) { c.system = v; }},
      {"order", [](RunConfig& c, const std::string& v) { c.order = to_int(v); }},
      {"dim", [](RunConfig& c, const std::string& v) { c.dim = to_int(v); }},
      {"cells", [](RunConfig& c, const std::string& v) { c.cells = to_triple<int>(v, to_int); }},
      {"domain_min", [](RunConfig& c, const std::string& v) { c.domain_min = to_triple<double>(v, to_double); }},
      {"domain_max", [](RunConfig& c, const std::string& v) { c.domain_max = to_triple<double>(v, to_double); }},
      {"cfl", [](RunConfig& c, const std::string& v) { c.cfl = to_double(v); }},
      {"final_time", [](RunConfig& c, const std::string& v) { c.final_time = to_double(v); }},
      {"max_steps", [](RunConfig& c, const std::string& v) { c.max_steps = to_long(v); }},
      {"bc", [](RunConfig& c, const std::string& v) { c.bc[0] = c.bc[1] = c.bc[2] = to_bc_pair(v); }},
      {"bc_x", [](RunConfig& c, const std::string& v) { c.bc[0] = to_bc_pair(v); }},
      {"bc_y", [](RunConfig& c, const std::string& v) { c.bc[1] = to_bc_pair(v); }},
      {"bc_z", [](RunConfig& c, const std::string& v) { c.bc[2] = to_bc_pair(v); }},
      {"initial_condition", [](RunConfig& c, const std::string& v) { c.ic.name = v; }},
      {"ic_state",
       [](RunConfig& c, const std::string& v) {
         c.ic.state.clear();
         for (auto& s : split_list(v))
           if (!s.empty()) c.ic.state.push_back(to_double(s));
       }},
      {"ic_amplitude", [](RunConfig& c, const std::string& v) { c.ic.amplitude = to_double(v); }},
      {"ic_offset", [](RunConfig& c, const std::string& v) { c.ic.offset = to_double(v); }},
      {"ic_wavenumber", [](RunConfig& c, const std::string& v) { c.ic.wavenumber = to_double(v); }},
      {"ic_strength", [](RunConfig& c, const std::string& v) { c.ic.strength = to_double(v); }},
      {"ic_position", [](RunConfig& c, const std::string& v) { c.ic.position = to_double(v); }},
      {"ic_energy", [](RunConfig& c, const std::string& v) { c.ic.energy = to_double(v); }},
      {"ic_ambient_pressure", [](RunConfig& c, const std::string& v) { c.ic.ambient_pressure = to_double(v); }},
      {"ic_pulse_center", [](RunConfig& c, const std::string& v) { c.ic.pulse_center = to_double(v); }},
      {"ic_pulse_width", [](RunConfig& c, const std::string& v) { c.ic.pulse_width = to_double(v); }},
      {"ic_interface_width", [](RunConfig& c, const std::string& v) { c.ic.interface_width = to_double(v); }},
      {"ic_lambda", [](RunConfig& c, const std::string& v) { c.ic.lambda = to_double(v); }},
      {"ic_mu", [](RunConfig& c, const std::string& v) { c.ic.mu = to_double(v); }},
      {"ic_rho", [](RunConfig& c, const std::string& v) { c.ic.rho = to_double(v); }},
      {"ic_left", [](RunConfig& c, const std::string& v) { c.ic.left = to_double(v); }},
      {"ic_right", [](RunConfig& c, const std::string& v) { c.ic.right = to_double(v); }},
      {"gamma", [](RunConfig& c, const std::string& v) { c.gamma = to_double(v); }},
      {"advection_velocity",
       [](RunConfig& c, const std::string& v) {
         auto items = split_list(v);
         if (items.empty() || items.size() > 3) throw std::invalid_argument("expected 1 to 3 components");
         c.advection_velocity = {0.0, 0.0, 0.0};
         for (std::size_t i = 0; i < items.size(); ++i) c.advection_velocity[i] = to_double(items[i]);
       }},
      {"alpha_min", [](RunConfig& c, const std::string& v) { c.alpha_min = to_double(v); }},
      {"limiter", [](RunConfig& c, const std::string& v) { c.limiter = to_bool(v); }},
      {"dmp_delta0", [](RunConfig& c, const std::string& v) { c.dmp_delta0 = to_double(v); }},
      {"dmp_epsilon", [](RunConfig& c, const std::string& v) { c.dmp_epsilon = to_double(v); }},
      {"predictor", [](RunConfig& c, const std::string& v) { c.predictor = to_mode(v); }},
      {"initial_guess", [](RunConfig& c, const std::string& v) { c.initial_guess = to_guess(v); }},
      {"picard_tol", [](RunConfig& c, const std::string& v) { c.picard_tol = to_double(v); }},
      {"picard_max_iter", [](RunConfig& c, const std::string& v) { c.picard_max_iter = to_int(v); }},
      {"batch_width", [](RunConfig& c, const std::string& v) { c.batch_width = to_int(v); }},
      {"kernel",
       [](RunConfig& c, const std::string& v) {
         if (v == "batched")
           c.kernel = EvalMode::kBatched;
         else if (v == "scalar")
           c.kernel = EvalMode::kScalar;
         else
           throw std::invalid_argument("kernel must be batched or scalar");
       }},
      {"execution",
       [](RunConfig& c, const std::string& v) {
         if (v == "serial")
           c.execution = Execution::kSerial;
         else if (v == "parallel")
           c.execution = Execution::kParallel;
         else
           throw std::invalid_argument("execution must be serial or parallel");
       }},
      {"output_every", [](RunConfig& c, const std::string& v) { c.output_every = to_long(v); }},
      {"output_format", [](RunConfig& c, const std::string& v) { c.output_format = v; }},
      {"output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      {"output_prefix", [](RunConfig& c, const std::string& v) { c.output_prefix = v; }},
      {"diagnostics_file", [](RunConfig& c, const std::string& v) { c.diagnostics_file = v; }},
      {"error_quantity", [](RunConfig& c, const std::string& v) { c.error_quantity = to_int(v); }},
  };
  return table;
}

std::string bc_pair(const std::array<BoundaryType, 2>& b) { return to_string(b[0]) + "," + to_string(b[1]); }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> errs;
  if (c.system != "advection" && c.system != "euler" && c.system != "elasticity-di")
    errs.push_back("system: unknown system '" + c.system + "'");
  if (c.order < 0 || c.order > kMaxOrder) errs.push_back("order: must be in [0, " + std::to_string(kMaxOrder) + "]");
  if (c.dim < 1 || c.dim > 3) errs.push_back("dim: must be 1, 2 or 3");
  if (c.system == "elasticity-di" && c.dim != 2) errs.push_back("dim: elasticity-di is two-dimensional");
  for (int d = 0; d < std::clamp(c.dim, 1, 3); ++d) {
    if (c.cells[d] < 1) errs.push_back("cells: must be >= 1");
    if (!(c.domain_max[d] > c.domain_min[d])) errs.push_back("domain_max: must exceed domain_min");
    const bool lo_p = c.bc[d][0] == BoundaryType::kPeriodic;
    const bool hi_p = c.bc[d][1] == BoundaryType::kPeriodic;
    if (lo_p != hi_p) errs.push_back("bc: periodic must be set on both sides of a direction");
  }
  if (c.order >= 0 && !(c.cfl > 0.0 && c.cfl < 1.0 / (2 * c.order + 1)))
    errs.push_back("cfl: must satisfy 0 < cfl < 1/(2N+1) = " + fmt(1.0 / (2 * c.order + 1)));
  if (!(c.final_time >= 0.0)) errs.push_back("final_time: must be >= 0");
  if (!is_known_problem(c.ic.name)) errs.push_back("initial_condition: unknown name '" + c.ic.name + "'");
  if (!(c.ic.interface_width >= 0.0)) errs.push_back("ic_interface_width: must be >= 0");
  if (!(c.gamma > 1.0)) errs.push_back("gamma: must exceed 1");
  if (!(c.alpha_min > 0.0 && c.alpha_min < 1.0)) errs.push_back("alpha_min: must be in (0, 1)");
  if (c.limiter && c.order < 1) errs.push_back("limiter: requires order >= 1");
  if (!(c.dmp_delta0 >= 0.0) || !(c.dmp_epsilon >= 0.0)) errs.push_back("dmp: parameters must be >= 0");
  if (!(c.picard_tol > 0.0)) errs.push_back("picard_tol: must be > 0");
  if (c.picard_max_iter == 0 || c.picard_max_iter < -1) errs.push_back("picard_max_iter: must be >= 1 (or -1 for 2N+2)");
  if (c.batch_width < 1) errs.push_back("batch_width: must be >= 1");
  if (c.output_every < 0) errs.push_back("output_every: must be >= 0");
  if (c.output_format != "csv" && c.output_format != "vtk") errs.push_back("output_format: must be csv or vtk");
  if (c.error_quantity < 0) errs.push_back("error_quantity: must be >= 0");
  return errs;
}

RunConfig parse_config(const std::string& text, std::vector<std::string>* warnings) {
  RunConfig c;
  std::vector<std::string> errs;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) {
      errs.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) {
      errs.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    if (auto s = seen.find(key); s != seen.end() && warnings)
      warnings->push_back(where + "duplicate key '" + key + "' (line " + std::to_string(s->second) + "); last value wins");
    seen[key] = lineno;
    try {
      it->second(c, value);
    } catch (const std::exception& ex) {
      errs.push_back(where + key + ": " + ex.what());
    }
  }
  if (errs.empty()) {
    for (auto& e : validate(c)) {
      const std::string key = e.substr(0, e.find(':'));
      auto s = seen.find(key);
      errs.push_back(s != seen.end() ? "line " + std::to_string(s->second) + ": " + e : e);
    }
  }
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return c;
}

RunConfig load_config(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream f(path);
  if (!f) throw ConfigError({"cannot open config file '" + path + "'"});
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), warnings);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  auto triple = [](const auto& a, auto conv) { return conv(a[0]) + "," + conv(a[1]) + "," + conv(a[2]); };
  auto istr = [](auto v) { return std::to_string(v); };
  o << "system = " << c.system << "\n";
  o << "order = " << c.order << "\n";
  o << "dim = " << c.dim << "\n";
  o << "cells = " << triple(c.cells, istr) << "\n";
  o << "domain_min = " << triple(c.domain_min, fmt) << "\n";
  o << "domain_max = " << triple(c.domain_max, fmt) << "\n";
  o << "cfl = " << fmt(c.cfl) << "\n";
  o << "final_time = " << fmt(c.final_time) << "\n";
  o << "max_steps = " << c.max_steps << "\n";
  o << "bc_x = " << bc_pair(c.bc[0]) << "\n";
  o << "bc_y = " << bc_pair(c.bc[1]) << "\n";
  o << "bc_z = " << bc_pair(c.bc[2]) << "\n";
  o << "initial_condition = " << c.ic.name << "\n";
  o << "ic_state = ";
  for (std::size_t i = 0; i < c.ic.state.size(); ++i) o << (i ? "," : "") << fmt(c.ic.state[i]);
  o << "\n";
  o << "ic_amplitude = " << fmt(c.ic.amplitude) << "\n";
  o << "ic_offset = " << fmt(c.ic.offset) << "\n";
  o << "ic_wavenumber = " << fmt(c.ic.wavenumber) << "\n";
  o << "ic_strength = " << fmt(c.ic.strength) << "\n";
  o << "ic_position = " << fmt(c.ic.position) << "\n";
  o << "ic_energy = " << fmt(c.ic.energy) << "\n";
  o << "ic_ambient_pressure = " << fmt(c.ic.ambient_pressure) << "\n";
  o << "ic_pulse_center = " << fmt(c.ic.pulse_center) << "\n";
  o << "ic_pulse_width = " << fmt(c.ic.pulse_width) << "\n";
  o << "ic_interface_width = " << fmt(c.ic.interface_width) << "\n";
  o << "ic_lambda = " << fmt(c.ic.lambda) << "\n";
  o << "ic_mu = " << fmt(c.ic.mu) << "\n";
  o << "ic_rho = " << fmt(c.ic.rho) << "\n";
  o << "ic_left = " << fmt(c.ic.left) << "\n";
  o << "ic_right = " << fmt(c.ic.right) << "\n";
  o << "gamma = " << fmt(c.gamma) << "\n";
  o << "advection_velocity = " << triple(c.advection_velocity, fmt) << "\n";
  o << "alpha_min = " << fmt(c.alpha_min) << "\n";
  o << "limiter = " << (c.limiter ? "on" : "off") << "\n";
  o << "dmp_delta0 = " << fmt(c.dmp_delta0) << "\n";
  o << "dmp_epsilon = " << fmt(c.dmp_epsilon) << "\n";
  o << "predictor = " << (c.predictor == PredictorMode::kPrimitive ? "primitive" : "conservative") << "\n";
  o << "initial_guess = "
    << (c.initial_guess == InitialGuess::kAuto ? "auto" : c.initial_guess == InitialGuess::kMuscl ? "muscl" : "order3")
    << "\n";
  o << "picard_tol = " << fmt(c.picard_tol) << "\n";
  o << "picard_max_iter = " << c.picard_max_iter << "\n";
  o << "batch_width = " << c.batch_width << "\n";
  o << "kernel = " << (c.kernel == EvalMode::kScalar ? "scalar" : "batched") << "\n";
  o << "execution = " << (c.execution == Execution::kSerial ? "serial" : "parallel") << "\n";
  o << "output_every = " << c.output_every << "\n";
  o << "output_format = " << c.output_format << "\n";
  o << "output_dir = " << c.output_dir << "\n";
  o << "output_prefix = " << c.output_prefix << "\n";
  o << "diagnostics_file = " << c.diagnostics_file << "\n";
  o << "error_quantity = " << c.error_quantity << "\n";
  return o.str();
}

std::shared_ptr<const PdeSystem> make_system(const RunConfig& c) {
  return std::shared_ptr<const PdeSystem>(make_system(c.system, c.dim, c.gamma, c.advection_velocity, c.alpha_min));
}

CartesianMesh make_mesh(const RunConfig& c) {
  CartesianMesh mesh(c.dim, c.cells, c.domain_min, c.domain_max);
  for (int d = 0; d < c.dim; ++d) mesh.bc[d] = c.bc[d];
  return mesh;
}

SolverOptions make_solver_options(const RunConfig& c) {
  SolverOptions o;
  o.order = c.order;
  o.cfl = c.cfl;
  o.limiter = c.limiter;
  o.dmp = {c.dmp_delta0, c.dmp_epsilon};
  o.predictor.mode = c.predictor;
  o.predictor.guess = c.initial_guess;
  o.predictor.tolerance = c.picard_tol;
  o.predictor.max_iterations = c.picard_max_iter;
  o.batch_width = c.batch_width;
  o.eval_mode = c.kernel;
  o.execution = c.execution;
  return o;
}

}  // namespace aderdg
