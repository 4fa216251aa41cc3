#include "cqed/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#ifndef CQED_VERSION
#define CQED_VERSION "0.0.0"
#endif

namespace cqed {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                    std::string(expected) + ")");
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a non-negative integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "true or false");
}

constexpr std::string_view reserved_version = "tool_version";
constexpr std::string_view reserved_hash = "content_hash";

std::string canonical_body(const KeyValues& kv) {
  std::string body;
  for (const auto& [k, v] : kv) {
    if (k == reserved_version || k == reserved_hash) continue;
    body += k;
    body += '=';
    body += v;
    body += '\n';
  }
  return body;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

using Setter = std::function<void(RunConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto phys = [&t](const char* name, double PhysicalParameters::*field) {
      t[name] = [field](RunConfig& c, std::string_view k, std::string_view v) { c.physics.*field = to_double(k, v); };
    };
    phys("kappa", &PhysicalParameters::kappa);
    phys("gamma", &PhysicalParameters::gamma);
    phys("g_max", &PhysicalParameters::g_max);
    phys("w0", &PhysicalParameters::w0);
    phys("lambda", &PhysicalParameters::lambda);
    phys("n_eff_bar", &PhysicalParameters::n_eff_bar);
    phys("T", &PhysicalParameters::T);
    phys("M", &PhysicalParameters::M);
    phys("drive", &PhysicalParameters::drive);
    phys("tilt", &PhysicalParameters::tilt);
    phys("F", &PhysicalParameters::F);
    phys("delta_c", &PhysicalParameters::delta_c);
    phys("delta_a", &PhysicalParameters::delta_a);
    phys("speed_scale", &PhysicalParameters::speed_scale);
    t["cavity_kind"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      auto kind = parse_cavity_kind(v);
      if (!kind) bad_value(k, v, "standing-wave or ring");
      c.physics.cavity_kind = *kind;
    };
    t["truncation"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      auto tr = parse_truncation(v);
      if (!tr) bad_value(k, v, "one-quantum, two-quanta or three-quanta");
      c.physics.truncation = *tr;
    };

    auto traj = [&t](const char* name, double TrajectoryConfig::*field) {
      t[name] = [field](RunConfig& c, std::string_view k, std::string_view v) { c.trajectory.*field = to_double(k, v); };
    };
    traj("dt", &TrajectoryConfig::dt);
    traj("sample_spacing", &TrajectoryConfig::sample_spacing);
    traj("exclusion_window", &TrajectoryConfig::exclusion_window);
    traj("warmup", &TrajectoryConfig::warmup);
    traj("duration", &TrajectoryConfig::duration);
    traj("tau_max", &TrajectoryConfig::tau_max);
    auto size = [&t](const char* name, std::size_t TrajectoryConfig::*field) {
      t[name] = [field](RunConfig& c, std::string_view k, std::string_view v) {
        c.trajectory.*field = static_cast<std::size_t>(to_u64(k, v));
      };
    };
    size("tau_points", &TrajectoryConfig::tau_points);
    size("batch_size", &TrajectoryConfig::batch_size);
    size("min_samples", &TrajectoryConfig::min_samples);
    size("max_atoms", &TrajectoryConfig::max_atoms);
    size("series_stride", &TrajectoryConfig::series_stride);
    t["seed"] = [](RunConfig& c, std::string_view k, std::string_view v) { c.trajectory.seed = to_u64(k, v); };
    t["workers"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      c.trajectory.workers = static_cast<unsigned>(to_u64(k, v));
    };
    t["trajectories"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      c.trajectory.trajectories = static_cast<unsigned>(to_u64(k, v));
    };
    t["stochastic_jumps"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      c.trajectory.stochastic_jumps = to_bool(k, v);
    };
    t["paired_reference"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      c.trajectory.paired_reference = to_bool(k, v);
    };
    t["mode"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      auto m = parse_run_mode(v);
      if (!m) bad_value(k, v, "full-quantum, semiclassical or semiclassical-adiabatic");
      c.trajectory.mode = *m;
    };
    t["veto_max_jumps"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      const auto n = to_u64(k, v);
      if (n == 0) {
        c.trajectory.veto.reset();
      } else {
        if (!c.trajectory.veto) c.trajectory.veto = Veto{};
        c.trajectory.veto->max_jumps = static_cast<int>(n);
      }
    };
    t["veto_window"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      const double w = to_double(k, v);
      if (!c.trajectory.veto) c.trajectory.veto = Veto{};
      c.trajectory.veto->window = w;
    };

    t["preset"] = [](RunConfig& c, std::string_view, std::string_view v) {
      RunConfig fresh = default_config(v);
      c.preset = fresh.preset;
      c.physics = fresh.physics;
    };
    t["formula"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      if (v != "ideal" && v != "fixed" && v != "mc-naive" && v != "mc-weighted") {
        bad_value(k, v, "ideal, fixed, mc-naive or mc-weighted");
      }
      c.formula = std::string(v);
    };
    t["samples"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      c.samples = static_cast<std::size_t>(to_u64(k, v));
    };
    t["sim_mode"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      if (v != "g2" && v != "semiclassical" && v != "semiclassical-adiabatic" && v != "beam-stats") {
        bad_value(k, v, "g2, semiclassical, semiclassical-adiabatic or beam-stats");
      }
      c.sim_mode = std::string(v);
    };
    t["hist_bins"] = [](RunConfig& c, std::string_view k, std::string_view v) {
      c.hist_bins = static_cast<std::size_t>(to_u64(k, v));
    };
    return t;
  }();
  return table;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

KeyValues parse_key_values(std::istream& in, std::string_view source) {
  KeyValues out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(source) + ":" + std::to_string(number) + ": expected key = value");
    }
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    if (key.empty()) throw ConfigError(std::string(source) + ":" + std::to_string(number) + ": empty key");
    out.emplace_back(std::string(key), std::string(value));
  }
  return out;
}

RunConfig default_config(std::string_view preset_name) {
  auto p = preset(preset_name);
  if (!p) throw ConfigError("unknown preset '" + std::string(preset_name) + "' (expected set1 or set2)");
  RunConfig c;
  c.preset = std::string(preset_name);
  c.physics = *p;
  return c;
}

void set_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second(cfg, key, value);
}

RunConfig config_from(const KeyValues& kv) {
  std::string preset_name = "set1";
  std::string hash;
  for (const auto& [k, v] : kv) {
    if (k == "preset") preset_name = v;
    if (k == reserved_hash) hash = v;
  }
  if (!hash.empty() && hash != hex64(fnv1a64(canonical_body(kv)))) {
    throw ConfigError("content_hash does not match the manifest entries");
  }
  RunConfig cfg = default_config(preset_name);
  for (const auto& [k, v] : kv) {
    if (k == "preset" || k == reserved_version || k == reserved_hash) continue;
    set_value(cfg, k, v);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return config_from(parse_key_values(in, path.string()));
}

KeyValues to_key_values(const RunConfig& c) {
  const PhysicalParameters& p = c.physics;
  const TrajectoryConfig& t = c.trajectory;
  auto d = format_double;
  KeyValues kv{
      {"preset", c.preset},
      {"kappa", d(p.kappa)},
      {"gamma", d(p.gamma)},
      {"g_max", d(p.g_max)},
      {"w0", d(p.w0)},
      {"lambda", d(p.lambda)},
      {"n_eff_bar", d(p.n_eff_bar)},
      {"T", d(p.T)},
      {"M", d(p.M)},
      {"drive", d(p.drive)},
      {"tilt", d(p.tilt)},
      {"F", d(p.F)},
      {"cavity_kind", std::string(to_string(p.cavity_kind))},
      {"delta_c", d(p.delta_c)},
      {"delta_a", d(p.delta_a)},
      {"truncation", std::string(to_string(p.truncation))},
      {"speed_scale", d(p.speed_scale)},
      {"mode", std::string(to_string(t.mode))},
      {"dt", d(t.dt)},
      {"sample_spacing", d(t.sample_spacing)},
      {"exclusion_window", d(t.exclusion_window)},
      {"warmup", d(t.warmup)},
      {"duration", d(t.duration)},
      {"tau_max", d(t.tau_max)},
      {"tau_points", std::to_string(t.tau_points)},
      {"veto_max_jumps", std::to_string(t.veto ? t.veto->max_jumps : 0)},
  };
  if (t.veto) kv.emplace_back("veto_window", d(t.veto->window));
  kv.insert(kv.end(), {
                          {"seed", std::to_string(t.seed)},
                          {"workers", std::to_string(t.workers)},
                          {"trajectories", std::to_string(t.trajectories)},
                          {"batch_size", std::to_string(t.batch_size)},
                          {"min_samples", std::to_string(t.min_samples)},
                          {"max_atoms", std::to_string(t.max_atoms)},
                          {"stochastic_jumps", t.stochastic_jumps ? "true" : "false"},
                          {"series_stride", std::to_string(t.series_stride)},
                          {"paired_reference", t.paired_reference ? "true" : "false"},
                          {"formula", c.formula},
                          {"samples", std::to_string(c.samples)},
                          {"sim_mode", c.sim_mode},
                          {"hist_bins", std::to_string(c.hist_bins)},
                      });
  return kv;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string manifest_text(const RunConfig& cfg) {
  const KeyValues kv = to_key_values(cfg);
  const std::string body = canonical_body(kv);
  std::ostringstream out;
  out << reserved_version << '=' << CQED_VERSION << '\n';
  out << body;
  out << reserved_hash << '=' << hex64(fnv1a64(body)) << '\n';
  return out.str();
}

}  // namespace cqed
