#include "girko/cli/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <set>

#include "girko/cli/csv.hpp"
#include "girko/cli/verify.hpp"
#include "girko/ensembles/ensembles.hpp"
#include "girko/hermitization/hermitization.hpp"
#include "girko/mde/mde.hpp"
#include "girko/montecarlo/experiments.hpp"
#include "girko/stats/spectral_stats.hpp"

#ifndef GIRKO_LAB_VERSION
#define GIRKO_LAB_VERSION "0.0.0"
#endif

namespace girko::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---- scalar parsing ---------------------------------------------------------

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_double(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw InvalidParameter("empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) throw InvalidParameter("not a finite number: '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& text) {
  const double v = parse_double(text);
  if (v < 0.0 || v != std::floor(v) || v > 9007199254740992.0)
    throw InvalidParameter("not a non-negative integer: '" + trim(text) + "'");
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) return out;
    start = p + 1;
  }
}

RealVector linspace(double lo, double hi, std::uint64_t count) {
  if (count == 0) throw InvalidParameter("grid count must be positive");
  if (!(hi >= lo)) throw InvalidParameter("grid needs lo <= hi");
  if (count == 1) {
    if (hi != lo) throw InvalidParameter("a one-point grid needs lo == hi");
    return {lo};
  }
  RealVector g(count);
  for (std::uint64_t i = 0; i < count; ++i)
    g[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

// ---- configuration schema -------------------------------------------------

enum class Kind { UInt, Double, String, Complex, Grid, Window, Flag };

struct KeySpec {
  std::string name;  // JSON key; the flag is --name with '_' replaced by '-'
  Kind kind;
  json def;          // null: optional without default
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<KeySpec> keys;
  std::vector<std::string> tables;  // CSV files written, in order
};

std::string flag_of(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = [] {
    const json origin = json::array({0.0, 0.0});
    auto common = [](std::vector<KeySpec> keys, bool trials_based = true, bool seeded = true) {
      if (seeded) keys.push_back({"seed", Kind::UInt, nullptr, "master seed (default $GIRKO_LAB_SEED, else 0)"});
      if (trials_based) keys.push_back({"workers", Kind::UInt, 1, "worker threads; output does not depend on it"});
      keys.push_back({"out_dir", Kind::String, "girko_out", "output directory"});
      keys.push_back({"plot", Kind::Flag, false, "also write a matplotlib script for the CSV"});
      return keys;
    };
    auto ensemble = [](const char* def) {
      return KeySpec{"ensemble", Kind::String, def, "noise law: ginibre|uniform|bernoulli|cauchy-complex|real"};
    };
    auto size = [](std::uint64_t def) { return KeySpec{"n", Kind::UInt, def, "matrix dimension N"}; };
    auto trials = [](std::uint64_t def) { return KeySpec{"trials", Kind::UInt, def, "Monte Carlo trials"}; };
    const KeySpec shift{"a", Kind::String, "zero", "deterministic shift A: 'zero' or a JSON matrix file"};
    auto z = [&](const char* help) { return KeySpec{"z", Kind::Complex, origin, help}; };

    std::vector<CommandSpec> s;
    s.push_back({"tails",
                 "distribution of N lambda_k(X + A - z) at small s",
                 common({ensemble("ginibre-complex"), size(64), {"k", Kind::UInt, 1, "singular value index k >= 1"},
                         z("spectral parameter"), shift,
                         {"s_grid", Kind::Grid, json::array({0.05, 1.3, 26}), "s grid lo:hi:count"},
                         {"fit_window", Kind::Window, nullptr, "slope fit window lo:hi (default: s <= 1, count >= 5)"},
                         trials(10000)}),
                 {"tails.csv"}});
    s.push_back({"wegner",
                 "normalized eigenvalue count in the disk D(z, r)",
                 common({ensemble("ginibre-complex"), size(128), z("disk centre"), shift,
                         {"r", Kind::Double, nullptr, "disk radius (default N^-0.75)"}, trials(5000)}),
                 {"wegner.csv"}});
    s.push_back({"overlaps",
                 "sums of diagonal overlaps O_ii over eigenvalues in a domain",
                 common({ensemble("ginibre-complex"), size(64), z("domain centre"), shift,
                         {"radius", Kind::Double, 0.2, "disk radius or square half side"},
                         {"domain", Kind::String, "disk", "disk or square"}, trials(2000)}),
                 {"overlaps.csv"}});
    s.push_back({"overlap-shape",
                 "normalized overlaps against the (1 + 1/y) e^{-1/y} law",
                 common({ensemble("ginibre-complex"), size(64), z("window centre"),
                         {"window", Kind::Double, 0.2, "eigenvalues within this distance of z are used"},
                         {"samples", Kind::UInt, 5000, "normalized overlaps to collect (>= 500)"}}),
                 {"overlap_shape.csv"}});
    s.push_back({"real-count",
                 "number of real eigenvalues",
                 common({ensemble("ginibre-real"), size(64), trials(2000)}),
                 {"real_count.csv"}});
    s.push_back({"resolvent-moment",
                 "(2 - delta1)-moment of the normalized resolvent trace",
                 common({ensemble("ginibre-complex"), size(64), z("spectral parameter"), shift,
                         {"delta1", Kind::Double, 0.5, "delta1 in (0, 1]"},
                         {"bootstrap", Kind::UInt, 200, "bootstrap resamples"}, trials(5000)}),
                 {"resolvent_moment.csv"}});
    s.push_back({"girko-check",
                 "Girko log-determinant identity for one draw, at grid and 2 x grid",
                 common({ensemble("ginibre-complex"), size(4), shift, z("bump centre"),
                         {"radius", Kind::Double, 0.5, "bump radius"},
                         {"grid", Kind::UInt, 160, "grid points per axis"},
                         {"trial", Kind::UInt, 0, "trial index of the draw"}},
                        false),
                 {"girko_check.csv"}});
    s.push_back({"mde-density",
                 "self-consistent density of states of the hermitization",
                 common({shift, z("spectral parameter"),
                         {"x_grid", Kind::Grid, json::array({-3.0, 3.0, 601}), "x grid lo:hi:count"},
                         {"eta0", Kind::Double, mde::kDefaultEta0, "regularization floor"}},
                        false, false),
                 {"mde_density.csv"}});
    s.push_back({"bulk-map",
                 "bulk indicator over a square z grid",
                 common({shift, z("grid centre"), {"tau", Kind::Double, 0.2, "bulk threshold tau > 0"},
                         {"grid", Kind::UInt, 101, "grid points per axis"},
                         {"extent", Kind::Double, 1.5, "half side of the z square"}},
                        false, false),
                 {"bulk_map.csv"}});
    s.push_back({"verify", "deterministic identity suite", common({}, false), {"verify.csv"}});
    return s;
  }();
  return specs;
}

// Normalizes a raw value (flag text or JSON) to its canonical JSON form.
json normalize(const KeySpec& k, const json& v) {
  auto bad = [&](const std::string& why) { return ConfigError("key '" + k.name + "': " + why); };
  if (v.is_null()) {
    if (k.def.is_null()) return v;
    throw bad("null is not allowed");
  }
  try {
    switch (k.kind) {
      case Kind::UInt:
        if (v.is_number_unsigned()) return v;
        if (v.is_number_integer()) throw bad("must be non-negative");
        if (v.is_number()) return parse_uint(json(v).dump());
        if (v.is_string()) return parse_uint(v.get<std::string>());
        throw bad("expected a non-negative integer");
      case Kind::Double:
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) return parse_double(v.get<std::string>());
        throw bad("expected a number");
      case Kind::String:
        if (v.is_string()) return v;
        throw bad("expected a string");
      case Kind::Complex: {
        if (v.is_number()) return json::array({v.get<double>(), 0.0});
        if (v.is_string()) {
          const cplx c = parse_complex(v.get<std::string>());
          return json::array({c.real(), c.imag()});
        }
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
          return json::array({v[0].get<double>(), v[1].get<double>()});
        throw bad("expected a complex number such as \"0.3i\" or [re, im]");
      }
      case Kind::Grid: {
        json g;
        if (v.is_string()) {
          const auto parts = split(v.get<std::string>(), ':');
          if (parts.size() != 3) throw bad("expected lo:hi:count");
          g = json::array({parse_double(parts[0]), parse_double(parts[1]), parse_uint(parts[2])});
        } else if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() &&
                   v[2].is_number_unsigned()) {
          g = json::array({v[0].get<double>(), v[1].get<double>(), v[2].get<std::uint64_t>()});
        } else {
          throw bad("expected lo:hi:count or [lo, hi, count]");
        }
        linspace(g[0], g[1], g[2]);
        return g;
      }
      case Kind::Window: {
        std::pair<double, double> w;
        if (v.is_string()) {
          w = parse_window(v.get<std::string>());
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
          w = {v[0].get<double>(), v[1].get<double>()};
          if (!(w.first < w.second)) throw bad("window needs lo < hi");
        } else {
          throw bad("expected lo:hi or [lo, hi]");
        }
        return json::array({w.first, w.second});
      }
      case Kind::Flag:
        if (v.is_boolean()) return v;
        throw bad("expected true or false");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw bad(e.what());
  }
  throw bad("unsupported value");
}

const char* type_name(Kind k) {
  switch (k) {
    case Kind::UInt: return "UINT";
    case Kind::Double: return "FLOAT";
    case Kind::Complex: return "COMPLEX";
    case Kind::Grid: return "LO:HI:COUNT";
    case Kind::Window: return "LO:HI";
    default: return "TEXT";
  }
}

const KeySpec* find_key(const CommandSpec& spec, const std::string& name) {
  for (const auto& k : spec.keys)
    if (k.name == name) return &k;
  return nullptr;
}

json read_config_file(const std::string& path, const std::string& command) {
  std::ifstream f(path);
  if (!f) throw ConfigError("key 'config': cannot read " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError("key 'config': " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("key 'config': top level of " + path + " must be an object");
  // A manifest replays its own config section.
  if (j.contains("command") && j.contains("config")) {
    if (j["command"] != command)
      throw ConfigError("key 'command': manifest is for '" + j["command"].dump() + "', not '" + command + "'");
    j = j["config"];
    if (!j.is_object()) throw ConfigError("key 'config': manifest config must be an object");
  }
  return j;
}

struct FlagValues {
  CLI::App* sub = nullptr;
  std::string config;
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
};

json default_seed() {
  const char* env = std::getenv("GIRKO_LAB_SEED");
  if (!env) return std::uint64_t{0};
  try {
    return parse_uint(env);
  } catch (const Error& e) {
    throw ConfigError(std::string("GIRKO_LAB_SEED: ") + e.what());
  }
}

ensembles::EnsembleSpec ensemble_of(const json& c);

// Defaults < config file < flags; then cross-key validation.
json resolve(const CommandSpec& spec, const FlagValues& fv) {
  json cfg = json::object();
  for (const auto& k : spec.keys) cfg[k.name] = k.name == "seed" ? default_seed() : k.def;
  if (!fv.config.empty()) {
    const json file = read_config_file(fv.config, spec.name);
    for (const auto& [key, value] : file.items()) {
      const KeySpec* k = find_key(spec, key);
      if (!k) throw ConfigError("unknown key '" + key + "' for " + spec.name);
      cfg[key] = normalize(*k, value);
    }
  }
  for (const auto& k : spec.keys) {
    if (fv.options.at(k.name)->count() == 0) continue;
    cfg[k.name] = k.kind == Kind::Flag ? json(fv.flags.at(k.name)) : normalize(k, json(fv.text.at(k.name)));
  }
  if (cfg.contains("ensemble")) {
    try {
      ensemble_of(cfg);
    } catch (const Error& e) {
      throw ConfigError(std::string("key 'ensemble': ") + e.what());
    }
  }
  if (cfg.contains("a") && cfg["a"] != "zero" && !fs::is_regular_file(cfg["a"].get<std::string>()))
    throw ConfigError("key 'a': no such file " + cfg["a"].get<std::string>());
  if (cfg.contains("workers") && cfg["workers"].get<std::uint64_t>() == 0)
    throw ConfigError("key 'workers': must be at least 1");
  if (cfg["out_dir"].get<std::string>().empty()) throw ConfigError("key 'out_dir': must not be empty");
  return cfg;
}

// ---- typed accessors ---------------------------------------------------------

std::uint64_t get_uint(const json& c, const char* k) { return c.at(k).get<std::uint64_t>(); }
double get_double(const json& c, const char* k) { return c.at(k).get<double>(); }
std::string get_string(const json& c, const char* k) { return c.at(k).get<std::string>(); }
cplx get_complex(const json& c, const char* k) { return {c.at(k)[0].get<double>(), c.at(k)[1].get<double>()}; }
RealVector get_grid(const json& c, const char* k) {
  const auto& g = c.at(k);
  return linspace(g[0].get<double>(), g[1].get<double>(), g[2].get<std::uint64_t>());
}

ensembles::EnsembleSpec ensemble_of(const json& c) {
  return ensembles::parse_ensemble(get_string(c, "ensemble"), get_uint(c, "n"));
}

ensembles::ShiftSpec shift_of(const json& c) {
  const auto a = get_string(c, "a");
  return a == "zero" ? ensembles::ShiftSpec::from_scalar(0.0) : ensembles::load_shift_json(a);
}

// Singular values of A - z; only their empirical law matters downstream.
RealVector shift_singular_values(const ensembles::ShiftSpec& a, cplx z) {
  switch (a.kind) {
    case ensembles::ShiftKind::Scalar:
      return {std::abs(a.scalar - z)};
    case ensembles::ShiftKind::Diagonal: {
      RealVector s;
      for (cplx d : a.diagonal) s.push_back(std::abs(d - z));
      return s;
    }
    case ensembles::ShiftKind::Dense:
      break;
  }
  return hermitization::shifted_singular_values(a.dense, z);
}

json interval(const montecarlo::Interval& i) { return json::array({i.lo, i.hi}); }

// ---- commands -----------------------------------------------------------------

struct Outcome {
  std::vector<CsvTable> tables;  // parallel to CommandSpec::tables
  json summary = json::object();
  std::vector<std::string> lines;
  int code = kExitOk;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome run_tails(const json& c) {
  montecarlo::TailConfig t;
  t.ensemble = ensemble_of(c);
  t.shift = shift_of(c);
  t.z = get_complex(c, "z");
  t.k = get_uint(c, "k");
  t.s_grid = get_grid(c, "s_grid");
  t.trials = get_uint(c, "trials");
  t.master_seed = get_uint(c, "seed");
  t.workers = get_uint(c, "workers");
  const auto est = montecarlo::run_tail(t);

  Outcome o;
  CsvTable tab{{"s", "count", "trials", "p_hat", "ci_lo", "ci_hi"}, {}};
  for (const auto& r : est.rows)
    tab.add_row({format_double(r.s), format_int(r.count), format_int(r.trials), format_double(r.p_hat),
                 format_double(r.ci_lo), format_double(r.ci_hi)});
  o.tables.push_back(std::move(tab));
  o.summary["trials"] = est.trials;
  o.summary["failures"] = est.failures;
  o.summary["interlacing_checks"] = est.interlacing_checks;
  o.summary["interlacing_violations"] = est.interlacing_violations;
  o.summary["expected_exponent"] = montecarlo::expected_tail_exponent(t);
  try {
    const auto window = c["fit_window"].is_null()
                            ? montecarlo::default_fit_window(est.rows)
                            : std::pair<double, double>{c["fit_window"][0], c["fit_window"][1]};
    const auto fit = montecarlo::fit_slope(est.rows, window.first, window.second);
    o.summary["fit"] = {{"slope", fit.slope},   {"intercept", fit.intercept}, {"stderr", fit.stderr_},
                        {"points", fit.points}, {"s_lo", fit.s_lo},           {"s_hi", fit.s_hi}};
    o.lines.push_back(fmt("slope %.4f +- %.4f (expected %g)", fit.slope, fit.stderr_,
                          montecarlo::expected_tail_exponent(t)));
  } catch (const InsufficientData& e) {
    o.summary["fit"] = nullptr;
    o.summary["fit_error"] = e.what();
    o.lines.push_back(std::string("no slope fit: ") + e.what());
  }
  return o;
}

Outcome run_wegner(const json& c) {
  montecarlo::WegnerConfig w;
  w.ensemble = ensemble_of(c);
  w.shift = shift_of(c);
  w.z = get_complex(c, "z");
  w.r = c["r"].is_null() ? std::pow(static_cast<double>(w.ensemble.n), -0.75) : get_double(c, "r");
  w.trials = get_uint(c, "trials");
  w.master_seed = get_uint(c, "seed");
  w.workers = get_uint(c, "workers");
  const auto est = montecarlo::run_wegner(w);

  Outcome o;
  CsvTable tab{{"z_re", "z_im", "r", "mean_count", "norm_density", "ci_lo", "ci_hi"}, {}};
  tab.add_row({format_double(est.z.real()), format_double(est.z.imag()), format_double(est.r),
               format_double(est.mean_count), format_double(est.normalized_density), format_double(est.ci.lo),
               format_double(est.ci.hi)});
  o.tables.push_back(std::move(tab));
  o.summary["trials"] = est.trials;
  o.summary["failures"] = est.failures;
  o.summary["normalized_density"] = est.normalized_density;
  o.lines.push_back(fmt("normalized density %.4f [%.4f, %.4f]", est.normalized_density, est.ci.lo, est.ci.hi));
  return o;
}

Outcome run_overlaps(const json& c) {
  montecarlo::OverlapConfig cfg;
  cfg.ensemble = ensemble_of(c);
  cfg.shift = shift_of(c);
  const auto kind = get_string(c, "domain");
  if (kind != "disk" && kind != "square") throw ConfigError("key 'domain': expected disk or square");
  cfg.domain = {kind == "disk" ? montecarlo::Domain::Kind::Disk : montecarlo::Domain::Kind::Square,
                get_complex(c, "z"), get_double(c, "radius")};
  cfg.trials = get_uint(c, "trials");
  cfg.master_seed = get_uint(c, "seed");
  cfg.workers = get_uint(c, "workers");
  const auto rep = montecarlo::run_overlap_sum(cfg);

  Outcome o;
  CsvTable tab{{"count", "sum"}, {}};
  for (std::size_t i = 0; i < rep.per_trial_sum.size(); ++i)
    tab.add_row({format_int(rep.per_trial_count[i]), format_double(rep.per_trial_sum[i])});
  o.tables.push_back(std::move(tab));
  o.summary["trials"] = rep.trials;
  o.summary["failures"] = rep.failures;
  o.summary["eigenvalues"] = rep.eigenvalues;
  o.summary["mean_sum"] = rep.mean_sum;
  o.summary["mom_sum"] = rep.mom_sum;
  o.summary["conditional_mean"] = rep.conditional_mean;
  o.summary["conditional_mom"] = rep.conditional_mom;
  o.summary["baseline"] = rep.baseline;
  o.lines.push_back(fmt("conditional mean %.4f (median of means %.4f), baseline %.4f", rep.conditional_mean,
                        rep.conditional_mom, rep.baseline));
  return o;
}

Outcome run_overlap_shape(const json& c) {
  montecarlo::ShapeConfig cfg;
  cfg.ensemble = ensemble_of(c);
  cfg.z = get_complex(c, "z");
  cfg.window = get_double(c, "window");
  cfg.samples = get_uint(c, "samples");
  cfg.master_seed = get_uint(c, "seed");
  cfg.workers = get_uint(c, "workers");
  const auto rep = montecarlo::run_overlap_shape(cfg);

  Outcome o;
  RealVector y = rep.samples;
  std::sort(y.begin(), y.end());
  CsvTable tab{{"y", "empirical_cdf", "limit_cdf"}, {}};
  for (std::size_t i = 0; i < y.size(); ++i)
    tab.add_row({format_double(y[i]), format_double(static_cast<double>(i + 1) / static_cast<double>(y.size())),
                 format_double(montecarlo::inverse_gamma2_cdf(y[i]))});
  o.tables.push_back(std::move(tab));
  o.summary["samples"] = rep.samples.size();
  o.summary["trials_used"] = rep.trials_used;
  o.summary["failures"] = rep.failures;
  o.summary["ks"] = rep.ks;
  o.lines.push_back(fmt("KS distance %.4f over %.0f samples", rep.ks, static_cast<double>(rep.samples.size())));
  return o;
}

Outcome run_real_count(const json& c) {
  montecarlo::RealCountConfig cfg;
  cfg.ensemble = ensemble_of(c);
  cfg.trials = get_uint(c, "trials");
  cfg.master_seed = get_uint(c, "seed");
  cfg.workers = get_uint(c, "workers");
  const auto rep = montecarlo::run_real_count(cfg);

  Outcome o;
  CsvTable tab{{"count"}, {}};
  for (auto k : rep.counts) tab.add_row({format_int(k)});
  o.tables.push_back(std::move(tab));
  o.summary["trials"] = rep.trials;
  o.summary["failures"] = rep.failures;
  o.summary["mean_count"] = rep.mean_count;
  o.summary["ratio"] = rep.ratio;
  o.summary["stderr"] = rep.stderr_;
  o.lines.push_back(fmt("E count / sqrt(N) = %.4f +- %.4f", rep.ratio, rep.stderr_));
  return o;
}

Outcome run_resolvent_moment(const json& c) {
  montecarlo::MomentConfig cfg;
  cfg.ensemble = ensemble_of(c);
  cfg.shift = shift_of(c);
  cfg.z = get_complex(c, "z");
  cfg.delta1 = get_double(c, "delta1");
  cfg.bootstrap = get_uint(c, "bootstrap");
  cfg.trials = get_uint(c, "trials");
  cfg.master_seed = get_uint(c, "seed");
  cfg.workers = get_uint(c, "workers");
  const auto rep = montecarlo::run_resolvent_moment(cfg);

  Outcome o;
  CsvTable tab{{"z_re", "z_im", "delta1", "power", "moment", "ci_lo", "ci_hi"}, {}};
  tab.add_row({format_double(cfg.z.real()), format_double(cfg.z.imag()), format_double(cfg.delta1),
               format_double(rep.power), format_double(rep.moment), format_double(rep.ci.lo),
               format_double(rep.ci.hi)});
  o.tables.push_back(std::move(tab));
  o.summary["trials"] = rep.trials;
  o.summary["failures"] = rep.failures;
  o.summary["moment"] = rep.moment;
  o.summary["ci"] = interval(rep.ci);
  o.lines.push_back(fmt("moment %.4f [%.4f, %.4f]", rep.moment, rep.ci.lo, rep.ci.hi));
  return o;
}

Outcome run_girko_check(const json& c) {
  const auto spec = ensemble_of(c);
  auto b = ensembles::sample_matrix(spec, {get_uint(c, "seed"), get_uint(c, "trial")});
  b += ensembles::build_shift(shift_of(c), spec.n);
  const stats::Bump bump{get_complex(c, "z"), get_double(c, "radius")};
  if (!(bump.r > 0.0)) throw ConfigError("key 'radius': must be positive");
  const std::size_t grid = get_uint(c, "grid");
  if (grid < 2) throw ConfigError("key 'grid': need at least 2 points");

  Outcome o;
  CsvTable tab{{"grid_n", "spacing", "lhs", "rhs", "abs_err", "rel_err"}, {}};
  RealVector errs;
  for (std::size_t g : {grid, 2 * grid}) {
    const auto rep = stats::girko_residual(b, bump, g);
    tab.add_row({format_int(rep.grid_n), format_double(rep.spacing), format_double(rep.lhs), format_double(rep.rhs),
                 format_double(rep.abs_err), format_double(rep.rel_err)});
    errs.push_back(rep.abs_err);
  }
  o.tables.push_back(std::move(tab));
  std::size_t inside = 0;
  for (cplx s : linalg::eigenvalues(b)) inside += std::abs(s - bump.z0) < bump.r ? 1 : 0;
  o.summary["eigenvalues_in_support"] = inside;
  o.summary["refinement_ratio"] = errs[1] > 0.0 ? json(errs[0] / errs[1]) : json(nullptr);
  o.lines.push_back(fmt("abs err %.3g at grid, %.3g at 2 x grid", errs[0], errs[1]));
  return o;
}

Outcome run_mde_density(const json& c) {
  const auto s = shift_singular_values(shift_of(c), get_complex(c, "z"));
  const double eta0 = get_double(c, "eta0");
  if (!(eta0 > 0.0)) throw ConfigError("key 'eta0': must be positive");
  Outcome o;
  CsvTable tab{{"x", "density"}, {}};
  for (double x : get_grid(c, "x_grid")) tab.add_row({format_double(x), format_double(mde::scdos(s, x, eta0))});
  o.tables.push_back(std::move(tab));
  const double rho0 = mde::scdos(s, 0.0, eta0);
  o.summary["density_at_zero"] = rho0;
  o.lines.push_back(fmt("density at x = 0: %.10f", rho0));
  return o;
}

Outcome run_bulk_map(const json& c) {
  const auto a = shift_of(c);
  const double tau = get_double(c, "tau");
  if (!(tau > 0.0)) throw ConfigError("key 'tau': must be positive");
  const double extent = get_double(c, "extent");
  if (!(extent > 0.0)) throw ConfigError("key 'extent': must be positive");
  const std::uint64_t g = get_uint(c, "grid");
  if (g < 2) throw ConfigError("key 'grid': need at least 2 points");
  const cplx center = get_complex(c, "z");
  const auto axis = linspace(-extent, extent, g);

  Outcome o;
  CsvTable tab{{"z_re", "z_im", "value", "in_bulk"}, {}};
  std::size_t bulk = 0;
  for (double im : axis)
    for (double re : axis) {
      const cplx z = center + cplx(re, im);
      const auto q = mde::in_bulk(shift_singular_values(a, z), tau);
      bulk += q.in_bulk ? 1 : 0;
      tab.add_row({format_double(z.real()), format_double(z.imag()), format_double(q.value), format_bool(q.in_bulk)});
    }
  o.tables.push_back(std::move(tab));
  o.summary["points"] = g * g;
  o.summary["bulk_points"] = bulk;
  o.lines.push_back(fmt("%.0f of %.0f grid points in the bulk", static_cast<double>(bulk), static_cast<double>(g * g)));
  return o;
}

Outcome run_verify_command(const json& c) {
  Outcome o;
  CsvTable tab{{"check", "instances", "violations", "worst", "tolerance", "pass"}, {}};
  bool all = true;
  for (const auto& r : run_verify(get_uint(c, "seed"))) {
    tab.add_row({r.name, format_int(r.instances), format_int(r.violations), format_double(r.worst),
                 format_double(r.tolerance), format_bool(r.pass)});
    o.lines.push_back(format_check(r));
    all = all && r.pass;
  }
  o.tables.push_back(std::move(tab));
  o.summary["all_pass"] = all;
  o.code = all ? kExitOk : kExitCheckFailed;
  return o;
}

Outcome execute(const std::string& command, const json& c) {
  if (command == "tails") return run_tails(c);
  if (command == "wegner") return run_wegner(c);
  if (command == "overlaps") return run_overlaps(c);
  if (command == "overlap-shape") return run_overlap_shape(c);
  if (command == "real-count") return run_real_count(c);
  if (command == "resolvent-moment") return run_resolvent_moment(c);
  if (command == "girko-check") return run_girko_check(c);
  if (command == "mde-density") return run_mde_density(c);
  if (command == "bulk-map") return run_bulk_map(c);
  return run_verify_command(c);
}

// ---- outputs -------------------------------------------------------------------

// Body of a matplotlib script for the first CSV; empty when there is
// nothing worth plotting.
std::string plot_body(const std::string& command) {
  if (command == "tails")
    return "d = load('tails.csv')\n"
           "pts = [(s, p) for s, p in zip(d['s'], d['p_hat']) if p > 0]\n"
           "plt.loglog([s for s, _ in pts], [p for _, p in pts], 'o-')\n"
           "plt.xlabel('s'); plt.ylabel('P[N lambda_k <= s]')\n";
  if (command == "overlaps")
    return "d = load('overlaps.csv')\n"
           "plt.hist(d['sum'], bins=60, log=True)\n"
           "plt.xlabel('sum of O_ii over the domain'); plt.ylabel('trials')\n";
  if (command == "overlap-shape")
    return "d = load('overlap_shape.csv')\n"
           "plt.semilogx(d['y'], d['empirical_cdf'], label='empirical')\n"
           "plt.semilogx(d['y'], d['limit_cdf'], '--', label='(1 + 1/y) exp(-1/y)')\n"
           "plt.xlabel('y'); plt.legend()\n";
  if (command == "real-count")
    return "d = load('real_count.csv')\n"
           "plt.hist(d['count'], bins=range(int(max(d['count'])) + 2), align='left')\n"
           "plt.xlabel('real eigenvalues'); plt.ylabel('trials')\n";
  if (command == "girko-check")
    return "d = load('girko_check.csv')\n"
           "plt.loglog(d['spacing'], d['abs_err'], 'o-')\n"
           "plt.xlabel('grid spacing'); plt.ylabel('|lhs - rhs|')\n";
  if (command == "mde-density")
    return "d = load('mde_density.csv')\n"
           "plt.plot(d['x'], d['density'])\n"
           "plt.xlabel('x'); plt.ylabel('density')\n";
  if (command == "bulk-map")
    return "d = load('bulk_map.csv')\n"
           "plt.scatter(d['z_re'], d['z_im'], c=d['in_bulk'], s=4, cmap='coolwarm')\n"
           "plt.gca().set_aspect('equal'); plt.xlabel('Re z'); plt.ylabel('Im z')\n";
  return "";
}

std::string plot_script(const std::string& command, const std::string& body) {
  return "#!/usr/bin/env python3\n"
         "# Generated by girko_lab " + command + "; reads the CSV next to this file.\n"
         "import csv\nimport os\n\nimport matplotlib\nmatplotlib.use('Agg')\n"
         "import matplotlib.pyplot as plt\n\n"
         "here = os.path.dirname(os.path.abspath(__file__))\n\n\n"
         "def load(name):\n"
         "    with open(os.path.join(here, name), newline='') as f:\n"
         "        rows = list(csv.DictReader(f))\n"
         "    return {k: [float(r[k]) for r in rows] for k in rows[0]}\n\n\n" +
         body + "plt.savefig(os.path.join(here, '" + command + ".png'), dpi=150)\n";
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + p.string() + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write failed: " + p.string());
}

// CSVs first, manifest last; a failure removes whatever was written.
fs::path emit(const CommandSpec& spec, const json& cfg, const Outcome& o) {
  const fs::path dir = get_string(cfg, "out_dir");
  const fs::path manifest = dir / (spec.name + "_manifest.json");
  std::vector<fs::path> written;
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    fs::remove(manifest, ec);
    json outputs = json::array();
    for (std::size_t i = 0; i < o.tables.size(); ++i) {
      const fs::path p = dir / spec.tables[i];
      written.push_back(p);
      write_csv(o.tables[i], p.string());
      outputs.push_back(spec.tables[i]);
    }
    json plot = nullptr;
    const std::string body = plot_body(spec.name);
    if (cfg["plot"].get<bool>() && !body.empty()) {
      std::string name = "plot_" + spec.name + ".py";
      std::replace(name.begin(), name.end(), '-', '_');
      written.push_back(dir / name);
      write_text(dir / name, plot_script(spec.name, body));
      plot = name;
    }
    json m;
    m["tool"] = "girko_lab";
    m["version"] = GIRKO_LAB_VERSION;
    m["command"] = spec.name;
    m["config"] = cfg;
    m["outputs"] = outputs;
    m["plot_script"] = plot;
    m["summary"] = o.summary;
    m["replay"] = "girko_lab " + spec.name + " --config " + manifest.string();
    written.push_back(manifest);
    write_text(manifest, m.dump(2) + "\n");
  } catch (...) {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw;
  }
  return manifest;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string s = trim(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw InvalidParameter("empty complex number");
  if (const auto comma = s.find(','); comma != std::string::npos) {
    return {parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1))};
  }
  if (s.back() != 'i' && s.back() != 'j') return {parse_double(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // The imaginary part starts at the last sign that is not an exponent sign.
  std::size_t split_at = std::string::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split_at = p;
      break;
    }
  }
  const std::string re = split_at == std::string::npos ? "" : body.substr(0, split_at);
  const std::string im = split_at == std::string::npos ? body : body.substr(split_at);
  auto coeff = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t);
  };
  return {re.empty() ? 0.0 : parse_double(re), coeff(im)};
}

RealVector parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidParameter("grid: expected lo:hi:count, got '" + text + "'");
  return linspace(parse_double(parts[0]), parse_double(parts[1]), parse_uint(parts[2]));
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw InvalidParameter("window: expected lo:hi, got '" + text + "'");
  const std::pair<double, double> w{parse_double(parts[0]), parse_double(parts[1])};
  if (!(w.first < w.second)) throw InvalidParameter("window: need lo < hi");
  return w;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random matrix experiments for X + A: singular value tails, Wegner estimates, "
               "eigenvector overlaps and the Girko identity.",
               "girko_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GIRKO_LAB_VERSION);
  const auto& specs = command_specs();
  std::vector<FlagValues> values(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto& fv = values[i];
    fv.sub = app.add_subcommand(specs[i].name, specs[i].help);
    fv.sub->add_option("--config", fv.config, "JSON config or manifest; flags override its values");
    for (const auto& k : specs[i].keys) {
      std::string help = k.help;
      if (!k.def.is_null() && k.kind != Kind::Flag) help += " [" + k.def.dump() + "]";
      if (k.kind == Kind::Flag) {
        fv.options[k.name] = fv.sub->add_flag(flag_of(k.name), fv.flags[k.name], help);
      } else {
        fv.options[k.name] = fv.sub->add_option(flag_of(k.name), fv.text[k.name], help)->type_name(type_name(k.kind));
      }
    }
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::size_t chosen = 0;
  while (!values[chosen].sub->parsed()) ++chosen;
  const CommandSpec& spec = specs[chosen];

  json cfg;
  try {
    cfg = resolve(spec, values[chosen]);
  } catch (const Error& e) {
    err << "girko_lab " << spec.name << ": " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const Outcome o = execute(spec.name, cfg);
    const fs::path manifest = emit(spec, cfg, o);
    for (const auto& line : o.lines) out << line << "\n";
    out << "manifest: " << manifest.string() << "\n";
    return o.code;
  } catch (const InvalidInput& e) {
    err << "girko_lab " << spec.name << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "girko_lab " << spec.name << ": " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace girko::cli
