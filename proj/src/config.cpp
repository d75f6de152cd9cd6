#include "f2bp/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace f2bp {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<double> numbers(const std::string& value, std::size_t line) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
      throw ParseError("expected a number, got '" + tok + "'", line);
    }
    out.push_back(v);
  }
  return out;
}

double scalar(const std::string& value, std::size_t line) {
  const auto v = numbers(value, line);
  if (v.size() != 1) throw ParseError("expected one number", line);
  return v[0];
}

int integer(const std::string& value, std::size_t line) {
  const double v = scalar(value, line);
  if (v != static_cast<int>(v)) throw ParseError("expected an integer", line);
  return static_cast<int>(v);
}

Vec3 vec3(const std::string& value, std::size_t line) {
  const auto v = numbers(value, line);
  if (v.size() != 3) throw ParseError("expected three numbers", line);
  return {v[0], v[1], v[2]};
}

bool flag(const std::string& value, std::size_t line) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ParseError("expected on/off, got '" + value + "'", line);
}

}  // namespace

IntegratorKind parse_integrator(const std::string& name) {
  if (name == "lgvi") return IntegratorKind::Lgvi;
  if (name == "rkf78") return IntegratorKind::Rkf78;
  throw ConfigError("unknown integrator '" + name + "' (expected lgvi or rkf78)");
}

std::string to_string(IntegratorKind kind) { return kind == IntegratorKind::Lgvi ? "lgvi" : "rkf78"; }

void RunConfig::validate() const {
  for (const BodyInput* b : {&body1, &body2}) {
    if (b->vertices.empty() || b->faces.empty()) throw ConfigError("both bodies need vertex and face files");
    if (!(b->density > 0.0)) throw ConfigError("density must be positive");
  }
  const bool have_state = position.has_value() || velocity.has_value();
  if (elements.has_value() == have_state && resume.empty()) {
    throw ConfigError("give exactly one of 'elements' or 'position'+'velocity'");
  }
  if (have_state && !(position && velocity)) throw ConfigError("'position' and 'velocity' go together");
  if (integrator == IntegratorKind::Lgvi) {
    if (!h) throw ConfigError("the lgvi integrator needs a step size 'h'");
    if (tol) throw ConfigError("'tol' applies to rkf78 only; the lgvi integrator takes 'h'");
    if (!(*h != 0.0)) throw ConfigError("step size must be nonzero");
  } else {
    if (!tol) throw ConfigError("the rkf78 integrator needs a tolerance 'tol'");
    if (h) throw ConfigError("'h' applies to lgvi only; the rkf78 integrator takes 'tol'");
    if (!(*tol > 0.0)) throw ConfigError("tolerance must be positive");
  }
  if (!(tf > t0)) throw ConfigError("tf must exceed t0");
  if (order < 0 || order > 12) throw ConfigError("order must lie in [0, 12]");
  if (output_every < 1) throw ConfigError("output_every must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (contact_factor < 0.0) throw ConfigError("contact_factor must be >= 0");
  scale.validate();
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig c;
  auto path = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };

  using Setter = std::function<void(const std::string&, std::size_t)>;
  auto body_keys = [&](const std::string& prefix, BodyInput& b, std::map<std::string, Setter>& m) {
    m[prefix + ".vertices"] = [&, path](const std::string& v, std::size_t) { b.vertices = path(v); };
    m[prefix + ".faces"] = [&, path](const std::string& v, std::size_t) { b.faces = path(v); };
    m[prefix + ".density"] = [&](const std::string& v, std::size_t l) { b.density = scalar(v, l); };
    m[prefix + ".attitude"] = [&](const std::string& v, std::size_t l) { b.attitude_deg = vec3(v, l); };
    m[prefix + ".spin"] = [&](const std::string& v, std::size_t l) { b.spin = vec3(v, l); };
  };

  std::map<std::string, Setter> keys;
  body_keys("body1", c.body1, keys);
  body_keys("body2", c.body2, keys);
  keys["euler_convention"] = [&](const std::string& v, std::size_t l) {
    if (v == "reference_to_body") c.euler = EulerConvention::ReferenceToBody;
    else if (v == "body_to_reference") c.euler = EulerConvention::BodyToReference;
    else throw ParseError("euler_convention is reference_to_body or body_to_reference", l);
  };
  keys["elements"] = [&](const std::string& v, std::size_t l) {
    const auto n = numbers(v, l);
    if (n.size() != 6) throw ParseError("elements needs a e i node argp nu", l);
    c.elements = std::array<double, 6>{n[0], n[1], n[2], n[3], n[4], n[5]};
  };
  keys["position"] = [&](const std::string& v, std::size_t l) { c.position = vec3(v, l); };
  keys["velocity"] = [&](const std::string& v, std::size_t l) { c.velocity = vec3(v, l); };
  keys["G"] = [&](const std::string& v, std::size_t l) { c.G = scalar(v, l); };
  keys["scale.length"] = [&](const std::string& v, std::size_t l) { c.scale.length = scalar(v, l); };
  keys["scale.mass"] = [&](const std::string& v, std::size_t l) { c.scale.mass = scalar(v, l); };
  keys["scale.time"] = [&](const std::string& v, std::size_t l) { c.scale.time = scalar(v, l); };
  keys["integrator"] = [&](const std::string& v, std::size_t l) {
    try {
      c.integrator = parse_integrator(v);
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), l);
    }
  };
  keys["h"] = [&](const std::string& v, std::size_t l) { c.h = scalar(v, l); };
  keys["tol"] = [&](const std::string& v, std::size_t l) { c.tol = scalar(v, l); };
  keys["t0"] = [&](const std::string& v, std::size_t l) { c.t0 = scalar(v, l); };
  keys["tf"] = [&](const std::string& v, std::size_t l) { c.tf = scalar(v, l); };
  keys["order"] = [&](const std::string& v, std::size_t l) { c.order = integer(v, l); };
  keys["out.states"] = [&](const std::string& v, std::size_t) { c.out_states = path(v); };
  keys["out.diag"] = [&](const std::string& v, std::size_t) { c.out_diag = path(v); };
  keys["out.summary"] = [&](const std::string& v, std::size_t) { c.out_summary = path(v); };
  keys["output_every"] = [&](const std::string& v, std::size_t l) { c.output_every = integer(v, l); };
  keys["deterministic"] = [&](const std::string& v, std::size_t l) { c.deterministic = flag(v, l); };
  keys["threads"] = [&](const std::string& v, std::size_t l) { c.threads = integer(v, l); };
  keys["rkf.diagnostic_eval"] = [&](const std::string& v, std::size_t l) { c.rkf_diagnostic_eval = flag(v, l); };
  keys["rkf.h_initial"] = [&](const std::string& v, std::size_t l) { c.rkf_h_initial = scalar(v, l); };
  keys["rkf.h_min"] = [&](const std::string& v, std::size_t l) { c.rkf_h_min = scalar(v, l); };
  keys["rkf.h_max"] = [&](const std::string& v, std::size_t l) { c.rkf_h_max = scalar(v, l); };
  keys["reconstruction"] = [&](const std::string& v, std::size_t l) {
    if (v == "body2") c.reconstruction = ReconstructionFrame::Body2;
    else if (v == "relative") c.reconstruction = ReconstructionFrame::Relative;
    else throw ParseError("reconstruction is body2 or relative", l);
  };
  keys["contact_factor"] = [&](const std::string& v, std::size_t l) { c.contact_factor = scalar(v, l); };
  keys["newton.tolerance"] = [&](const std::string& v, std::size_t l) { c.newton.tolerance = scalar(v, l); };
  keys["newton.max_iterations"] = [&](const std::string& v, std::size_t l) {
    c.newton.max_iterations = integer(v, l);
  };
  keys["resume"] = [&](const std::string& v, std::size_t) { c.resume = path(v); };

  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(std::string_view(raw).substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw ParseError("unknown key '" + key + "'", line);
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line);
    it->second(value, line);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.parent_path());
}

}  // namespace f2bp
