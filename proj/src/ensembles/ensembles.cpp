#include "girko/ensembles/ensembles.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "girko/linalg/decompositions.hpp"

namespace girko::ensembles {
namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Scale applied to the unit-variance real law to obtain one component.
double component_scale(const EnsembleSpec& spec) {
  if (spec.dist == Distribution::Cauchy) return 1.0;
  return spec.is_complex() ? 1.0 / std::sqrt(2.0) : 1.0;
}

double sb_amplitude(double w) { return std::sqrt(1.0 - w * w / 12.0); }

// E y^{2j} for the unit-variance real law y.
double unit_even_moment(const EnsembleSpec& spec, int two_j) {
  switch (spec.dist) {
    case Distribution::Gaussian: {
      double r = 1.0;
      for (int k = two_j - 1; k > 0; k -= 2) r *= k;
      return r;
    }
    case Distribution::Uniform:
      return std::pow(3.0, two_j / 2.0) / (two_j + 1);
    case Distribution::SmoothedBernoulli: {
      const double a = sb_amplitude(spec.width), h = spec.width / 2.0;
      double r = 0.0, binom = 1.0;
      for (int i = 0; i <= two_j; ++i) {
        if (i % 2 == 0) r += binom * std::pow(a, two_j - i) * std::pow(h, i) / (i + 1);
        binom = binom * (two_j - i) / (i + 1);
      }
      return r;
    }
    case Distribution::Cauchy:
      break;
  }
  return std::numeric_limits<double>::infinity();
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double unit_cdf(const EnsembleSpec& spec, double y) {
  switch (spec.dist) {
    case Distribution::Gaussian:
      return std_normal_cdf(y);
    case Distribution::Uniform: {
      const double c = std::sqrt(3.0);
      return std::clamp((y + c) / (2 * c), 0.0, 1.0);
    }
    case Distribution::SmoothedBernoulli: {
      const double a = sb_amplitude(spec.width), w = spec.width;
      auto u = [&](double t) { return std::clamp((t + w / 2) / w, 0.0, 1.0); };
      return 0.5 * u(y + a) + 0.5 * u(y - a);
    }
    case Distribution::Cauchy:
      return 0.5 + std::atan(y) / kPi;
  }
  return 0.0;
}

}  // namespace

EnsembleSpec parse_ensemble(const std::string& name, std::size_t n) {
  EnsembleSpec s;
  s.n = n;
  const auto dash = name.rfind('-');
  if (dash == std::string::npos) throw InvalidParameter("unknown ensemble '" + name + "'");
  const std::string fam = name.substr(0, dash), fld = name.substr(dash + 1);
  if (fld == "complex") s.field = Field::Complex;
  else if (fld == "real") s.field = Field::Real;
  else throw InvalidParameter("unknown ensemble '" + name + "'");
  if (fam == "ginibre" || fam == "gaussian") s.dist = Distribution::Gaussian;
  else if (fam == "uniform") s.dist = Distribution::Uniform;
  else if (fam == "bernoulli") s.dist = Distribution::SmoothedBernoulli;
  else if (fam == "cauchy") s.dist = Distribution::Cauchy;
  else throw InvalidParameter("unknown ensemble '" + name + "'");
  return s;
}

std::string ensemble_name(const EnsembleSpec& spec) {
  std::string fam;
  switch (spec.dist) {
    case Distribution::Gaussian: fam = "ginibre"; break;
    case Distribution::Uniform: fam = "uniform"; break;
    case Distribution::SmoothedBernoulli: fam = "bernoulli"; break;
    case Distribution::Cauchy: fam = "cauchy"; break;
  }
  return fam + (spec.is_complex() ? "-complex" : "-real");
}

void validate(const EnsembleSpec& spec) {
  if (spec.n == 0) throw InvalidParameter("ensemble: n must be positive");
  if (spec.dist == Distribution::SmoothedBernoulli && !(spec.width > 0.0 && spec.width <= 1.0))
    throw InvalidParameter("ensemble: bernoulli width must lie in (0, 1]");
}

double density_bound(const EnsembleSpec& spec) {
  double unit = 0.0;
  switch (spec.dist) {
    case Distribution::Gaussian: unit = 1.0 / std::sqrt(2.0 * kPi); break;
    case Distribution::Uniform: unit = 1.0 / (2.0 * std::sqrt(3.0)); break;
    // The two uniform bumps at +-a are disjoint for w <= 1.
    case Distribution::SmoothedBernoulli: unit = 1.0 / (2.0 * spec.width); break;
    case Distribution::Cauchy: return 1.0 / kPi;
  }
  return unit / component_scale(spec);
}

std::optional<double> moment(const EnsembleSpec& spec, int p) {
  if (p < 0 || p % 2 != 0) throw InvalidParameter("moment: p must be a non-negative even integer");
  if (p == 0) return 1.0;
  if (spec.dist == Distribution::Cauchy) return std::nullopt;
  if (!spec.is_complex()) return unit_even_moment(spec, p);
  // |x|^p = (a^2 + b^2)^{p/2} with a, b i.i.d. copies of y / sqrt 2.
  const int q = p / 2;
  double r = 0.0, binom = 1.0;
  for (int j = 0; j <= q; ++j) {
    r += binom * unit_even_moment(spec, 2 * j) * unit_even_moment(spec, 2 * (q - j));
    binom = binom * (q - j) / (j + 1);
  }
  return r / std::pow(2.0, q);
}

std::vector<std::optional<double>> moments(const EnsembleSpec& spec) {
  return {moment(spec, 2), moment(spec, 4), moment(spec, 6), moment(spec, 8)};
}

double component_cdf(const EnsembleSpec& spec, double x) {
  return unit_cdf(spec, x / component_scale(spec));
}

CounterRng::CounterRng(SeedStream s)
    : key_(mix64(mix64(s.master_seed) ^ (s.trial_index * 0xD1B54A32D192ED03ULL))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return mix64(key_ ^ mix64(counter ^ 0x632BE59BD9B4E019ULL));
}

double CounterRng::uniform(std::uint64_t counter) const {
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double sample_component(const EnsembleSpec& spec, const CounterRng& rng, std::uint64_t slot) {
  const double u1 = rng.uniform(2 * slot), u2 = rng.uniform(2 * slot + 1);
  double y = 0.0;
  switch (spec.dist) {
    case Distribution::Gaussian:
      y = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
      break;
    case Distribution::Uniform:
      y = std::sqrt(3.0) * (2.0 * u1 - 1.0);
      break;
    case Distribution::SmoothedBernoulli:
      y = (u1 < 0.5 ? -1.0 : 1.0) * sb_amplitude(spec.width) + spec.width * (u2 - 0.5);
      break;
    case Distribution::Cauchy:
      y = std::tan(kPi * (u1 - 0.5));
      break;
  }
  return y * component_scale(spec);
}

ComplexMatrix sample_matrix(const EnsembleSpec& spec, SeedStream stream) {
  validate(spec);
  const std::size_t n = spec.n;
  const CounterRng rng(stream);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix m(n, n);
  auto& d = m.storage();
  for (std::size_t e = 0; e < d.size(); ++e) {
    if (spec.is_complex())
      d[e] = cplx(sample_component(spec, rng, 2 * e), sample_component(spec, rng, 2 * e + 1)) * s;
    else
      d[e] = sample_component(spec, rng, e) * s;
  }
  return m;
}

RealMatrix sample_real_matrix(const EnsembleSpec& spec, SeedStream stream) {
  validate(spec);
  if (spec.is_complex()) throw InvalidParameter("sample_real_matrix: spec is complex");
  const std::size_t n = spec.n;
  const CounterRng rng(stream);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  RealMatrix m(n, n);
  auto& d = m.storage();
  for (std::size_t e = 0; e < d.size(); ++e) d[e] = sample_component(spec, rng, e) * s;
  return m;
}

ShiftSpec ShiftSpec::from_scalar(cplx z) {
  ShiftSpec s;
  s.kind = ShiftKind::Scalar;
  s.scalar = z;
  s.norm_bound = std::abs(z);
  return s;
}

ShiftSpec ShiftSpec::from_dense(ComplexMatrix a) {
  if (!a.is_square()) throw DimensionMismatch("shift: dense payload must be square");
  ShiftSpec s;
  s.kind = ShiftKind::Dense;
  s.norm_bound = linalg::operator_norm(a);
  s.dense = std::move(a);
  return s;
}

ShiftSpec ShiftSpec::from_diagonal(ComplexVector d) {
  ShiftSpec s;
  s.kind = ShiftKind::Diagonal;
  for (auto x : d) s.norm_bound = std::max(s.norm_bound, std::abs(x));
  s.diagonal = std::move(d);
  return s;
}

ComplexMatrix build_shift(const ShiftSpec& spec, std::size_t n) {
  switch (spec.kind) {
    case ShiftKind::Scalar: {
      ComplexMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i) m(i, i) = spec.scalar;
      return m;
    }
    case ShiftKind::Dense:
      if (spec.dense.rows() != n || spec.dense.cols() != n)
        throw DimensionMismatch("shift: dense payload is " + std::to_string(spec.dense.rows()) +
                                "x" + std::to_string(spec.dense.cols()) + ", expected " +
                                std::to_string(n));
      return spec.dense;
    case ShiftKind::Diagonal:
      if (spec.diagonal.size() != n)
        throw DimensionMismatch("shift: diagonal payload has wrong length");
      return ComplexMatrix::diagonal(spec.diagonal);
  }
  return {};
}

ShiftSpec load_shift_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("shift: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter("shift: malformed JSON in '" + path + "': " + e.what());
  }
  for (const char* key : {"rows", "cols", "entries"})
    if (!j.contains(key)) throw InvalidParameter(std::string("shift: missing key '") + key + "'");
  const auto rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != rows * cols)
    throw DimensionMismatch("shift: 'entries' must hold rows*cols values");
  ComplexMatrix a(rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.is_number()) {
      a.storage()[k] = e.get<double>();
    } else if (e.is_array() && e.size() == 2) {
      a.storage()[k] = cplx(e[0].get<double>(), e[1].get<double>());
    } else {
      throw InvalidParameter("shift: entry " + std::to_string(k) + " is not a number or [re, im]");
    }
  }
  if (!all_finite(a)) throw InvalidParameter("shift: non-finite entries");
  return ShiftSpec::from_dense(std::move(a));
}

void save_shift_json(const ComplexMatrix& a, const std::string& path) {
  nlohmann::json j;
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  bool cplx_entries = false;
  for (auto x : a.storage()) cplx_entries = cplx_entries || x.imag() != 0.0;
  j["complex"] = cplx_entries;
  auto entries = nlohmann::json::array();
  for (auto x : a.storage()) entries.push_back({x.real(), x.imag()});
  j["entries"] = std::move(entries);
  std::ofstream out(path);
  if (!out) throw IoError("shift: cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

}  // namespace girko::ensembles
