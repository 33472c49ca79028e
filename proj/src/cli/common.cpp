#include "common.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "bohm/errors.hpp"
#include "bohm/units.hpp"

namespace bohm::cli {

namespace {

std::string fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

std::string key_path(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : where + "." + key;
}

const json& required(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: " + (where.empty() ? std::string("top level") : where) +
                                        " must be an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError("config: missing " + key_path(where, key));
  return *it;
}

void write_file(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << data;
  if (!out) throw ConfigError("write failed for " + p.string());
}

}  // namespace

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("config: " + (where.empty() ? std::string("top level") : where) +
                                        " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("config: unknown key " + key_path(where, it.key().c_str()));
  }
}

const json& object_at(const json& j, const char* key, const std::string& where) {
  const json& v = required(j, key, where);
  if (!v.is_object()) throw ConfigError("config: " + key_path(where, key) + " must be an object");
  return v;
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = required(j, key, where);
  if (!v.is_number()) throw ConfigError("config: " + key_path(where, key) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("config: " + key_path(where, key) + " must be finite");
  return d;
}

double number_or(const json& j, const char* key, const std::string& where, double def) {
  return j.contains(key) ? number(j, key, where) : def;
}

std::size_t count(const json& j, const char* key, const std::string& where, std::size_t min) {
  const json& v = required(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min))
    throw ConfigError("config: " + key_path(where, key) + " must be an integer >= " + std::to_string(min));
  return v.get<std::size_t>();
}

std::size_t count_or(const json& j, const char* key, const std::string& where, std::size_t min, std::size_t def) {
  return j.contains(key) ? count(j, key, where, min) : def;
}

std::string text(const json& j, const char* key, const std::string& where) {
  const json& v = required(j, key, where);
  if (!v.is_string()) throw ConfigError("config: " + key_path(where, key) + " must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key, const std::string& where) {
  const json& v = required(j, key, where);
  if (!v.is_array()) throw ConfigError("config: " + key_path(where, key) + " must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number() || !std::isfinite(e.get<double>()))
      throw ConfigError("config: " + key_path(where, key) + " must be an array of finite numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::uint64_t seed(const json& j, const char* key, const std::string& where) {
  const json& v = required(j, key, where);
  if (!v.is_number_unsigned()) throw ConfigError("config: " + key_path(where, key) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

Grid2D parse_grid(const json& j, const std::string& where) {
  check_keys(j, where, {"x_min", "x_max", "n_x", "t_min", "t_max", "n_t"});
  Grid2D g{number(j, "x_min", where), number(j, "x_max", where), count(j, "n_x", where, 2),
           number(j, "t_min", where), number(j, "t_max", where), count(j, "n_t", where, 2)};
  try {
    g.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("config: " + where + ": " + e.what());
  }
  return g;
}

std::vector<double> parse_axis(const json& j, const std::string& where) {
  check_keys(j, where, {"min", "max", "n"});
  const double a = number(j, "min", where), b = number(j, "max", where);
  if (!(a < b)) throw ConfigError("config: " + where + " needs min < max");
  return linspace(a, b, count(j, "n", where, 2));
}

nw::PacketSpec parse_packet(const json& j, const std::string& where) {
  const std::string shape = text(j, "shape", where);
  nw::PacketSpec p;
  if (shape == "cos2") {
    check_keys(j, where, {"shape", "a"});
    p = nw::PacketSpec::cos2(number(j, "a", where));
  } else if (shape == "gaussian") {
    check_keys(j, where, {"shape", "k0", "sigma_k"});
    p = nw::PacketSpec::gaussian(number_or(j, "k0", where, 0.0), number(j, "sigma_k", where));
  } else {
    throw ConfigError("config: " + where + ".shape must be \"cos2\" or \"gaussian\"");
  }
  try {
    p.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("config: " + where + ": " + e.what());
  }
  return p;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string tag(double v) {
  std::string s = format_number(v);
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
    if (ch == '-') ch = 'm';
  }
  return s;
}

json meta(const Context& c, const std::string& command) {
  return {{"tool", "bohm"},
          {"version", BOHM_VERSION},
          {"command", command},
          {"config_hash", c.hash},
          {"quick", c.opt.quick},
          {"units", units::note}};
}

void write_json(const Context& c, const std::string& name, const std::string& command, json body) {
  json doc = {{"meta", meta(c, command)}};
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  write_file(c.out / name, doc.dump(2) + "\n");
}

CsvWriter::CsvWriter(const Context& c, const std::string& name, const std::string& command,
                     std::initializer_list<const char*> header)
    : path_(c.out / name) {
  buf_ += "# bohm " BOHM_VERSION " " + command + "\n";
  buf_ += "# config_hash " + c.hash + "\n";
  buf_ += std::string("# quick ") + (c.opt.quick ? "true" : "false") + "\n";
  buf_ += std::string("# units ") + units::note + "\n";
  bool first = true;
  for (const char* h : header) {
    if (!first) buf_ += ',';
    buf_ += h;
    first = false;
  }
  buf_ += '\n';
}

void CsvWriter::row(std::initializer_list<double> v) {
  bool first = true;
  for (double d : v) {
    if (!first) buf_ += ',';
    buf_ += format_number(d);
    first = false;
  }
  buf_ += '\n';
}

void CsvWriter::close() { write_file(path_, buf_); }

void write_trajectories(const Context& c, const std::string& name, const std::string& command,
                        const TrajectorySet& ts) {
  CsvWriter w(c, name, command, {"level_id", "line_id", "vertex", "x", "t", "rho_sign", "v", "divergent", "segment_class"});
  for (std::size_t l = 0; l < ts.lines.size(); ++l) {
    const TrajPolyline& line = ts.lines[l];
    for (std::size_t i = 0; i < line.vertices.size(); ++i) {
      const TrajVertex& v = line.vertices[i];
      const double seg = i < line.segments.size() ? static_cast<int>(line.segments[i]) : 0;
      w.row({double(line.level_id), double(l), double(i), v.x, v.t, double(v.rho_sign), v.divergent ? 0.0 : v.v,
             v.divergent ? 1.0 : 0.0, seg});
    }
  }
  w.close();
}

json census(const TrajectorySet& ts) {
  std::size_t closed = 0, creation = 0, annihilation = 0, pos = 0, neg = 0;
  for (const auto& l : ts.lines) closed += l.closed;
  for (const auto& e : ts.events) (e.kind == PairKind::creation ? creation : annihilation)++;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double r : ts.rho.v) {
    pos += r > 0;
    neg += r < 0;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {{"levels", ts.levels.size()},
          {"lines", ts.lines.size()},
          {"closed_lines", closed},
          {"pair_events", {{"creation", creation}, {"annihilation", annihilation}, {"total", creation + annihilation}}},
          {"rho_sign_census", {{"positive_nodes", pos}, {"negative_nodes", neg}, {"min", lo}, {"max", hi}}},
          {"resolution_warning", ts.resolution_warning},
          {"warning", ts.warning}};
}

int run(const std::string& command, const Options& opt, std::ostream& err) {
  try {
    if (command != "modes" && command != "explode" && command != "nearnr" && command != "spin")
      throw ConfigError("unknown subcommand " + command);
    if (opt.config.empty()) throw ConfigError("--config: a config file is required");
    if (opt.out.empty()) throw ConfigError("--out: an output directory is required");
    if (opt.threads == 0) throw ConfigError("--threads must be >= 1");
    std::ifstream in(opt.config);
    if (!in) throw ConfigError("cannot read config file " + opt.config);
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config " + opt.config + " is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config: top level must be an object");

    Context c;
    c.opt = opt;
    c.err = &err;
    c.hash = fnv1a64(cfg.dump());
    if (cfg.contains("quick")) {
      json q = cfg["quick"];
      if (!q.is_object()) throw ConfigError("config: quick must be an object");
      cfg.erase("quick");
      if (opt.quick) cfg.merge_patch(q);
    }
    cfg.erase("description");
    c.config = std::move(cfg);
    c.out = opt.out;
    std::error_code ec;
    std::filesystem::create_directories(c.out, ec);
    if (ec || !std::filesystem::is_directory(c.out))
      throw ConfigError("--out: cannot create output directory " + opt.out);

    if (command == "modes") return cmd_modes(c);
    if (command == "explode") return cmd_explode(c);
    if (command == "nearnr") return cmd_nearnr(c);
    return cmd_spin(c);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return exit_config;
  } catch (const NonConvergence& e) {
    err << "error: numerical non-convergence: " << e.what() << '\n';
    return exit_nonconvergence;
  } catch (const DomainError& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return exit_nonconvergence;
  }
}

}  // namespace bohm::cli
