#pragma once

// Samplers for regular i.i.d. noise matrices and deterministic shifts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "girko/linalg/matrix.hpp"

namespace girko::ensembles {

enum class Distribution { Gaussian, Uniform, SmoothedBernoulli, Cauchy };

/// Law of sqrt(N) X_ij. Complex entries have independent real and imaginary
/// parts of variance 1/2 each, so E|x|^2 = 1 and E x^2 = 0.
struct EnsembleSpec {
  Field field = Field::Complex;
  Distribution dist = Distribution::Gaussian;
  std::size_t n = 0;
  double width = 0.1;  // SmoothedBernoulli uniform width w

  bool is_complex() const { return field == Field::Complex; }
};

/// Canonical names: ginibre-complex, ginibre-real, uniform-complex, ...
EnsembleSpec parse_ensemble(const std::string& name, std::size_t n);
std::string ensemble_name(const EnsembleSpec& spec);

/// Throws InvalidParameter if n == 0 or the width is out of (0, 1].
void validate(const EnsembleSpec& spec);

/// Sup of the density of each real component of sqrt(N) X_11.
double density_bound(const EnsembleSpec& spec);

/// E|sqrt(N) X_11|^p for even p; nullopt marks an infinite moment.
std::optional<double> moment(const EnsembleSpec& spec, int p);

/// Moments for p = 2, 4, 6, 8.
std::vector<std::optional<double>> moments(const EnsembleSpec& spec);

/// CDF of one real component of sqrt(N) X_11.
double component_cdf(const EnsembleSpec& spec, double x);

struct SeedStream {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

/// Counter-based generator: every draw is a hash of
/// (master_seed, trial_index, counter), so streams never share state.
class CounterRng {
 public:
  explicit CounterRng(SeedStream s);
  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

/// One real component of sqrt(N) X_ij; `slot` enumerates components.
double sample_component(const EnsembleSpec& spec, const CounterRng& rng, std::uint64_t slot);

/// N x N matrix with entries scaled by 1/sqrt(N).
ComplexMatrix sample_matrix(const EnsembleSpec& spec, SeedStream stream);
/// Same draw for a real spec without the complex carrier.
RealMatrix sample_real_matrix(const EnsembleSpec& spec, SeedStream stream);

enum class ShiftKind { Scalar, Dense, Diagonal };

struct ShiftSpec {
  ShiftKind kind = ShiftKind::Scalar;
  cplx scalar{0.0, 0.0};
  ComplexMatrix dense;
  ComplexVector diagonal;
  double norm_bound = 0.0;

  static ShiftSpec from_scalar(cplx z);
  static ShiftSpec from_dense(ComplexMatrix a);
  static ShiftSpec from_diagonal(ComplexVector d);
};

/// Dense N x N realisation. Throws DimensionMismatch on size conflicts.
ComplexMatrix build_shift(const ShiftSpec& spec, std::size_t n);

/// JSON: {"rows": N, "cols": N, "complex": bool, "entries": [[re, im], ...]}.
ShiftSpec load_shift_json(const std::string& path);
void save_shift_json(const ComplexMatrix& a, const std::string& path);

}  // namespace girko::ensembles
