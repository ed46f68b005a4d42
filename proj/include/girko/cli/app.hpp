#pragma once

// girko_lab command line: configuration merge (defaults < JSON file < flags),
// dispatch to the experiments, CSV and manifest emission.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "girko/errors.hpp"
#include "girko/linalg/matrix.hpp"

namespace girko::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // verify found a violated invariant
inline constexpr int kExitConfig = 2;
inline constexpr int kExitFailure = 3;      // numerical or IO failure

/// Invalid configuration; the message names the offending key.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Accepts "a", "bi", "a+bi", "a-bi" and "a,b".
cplx parse_complex(const std::string& text);

/// "lo:hi:count", inclusive and equispaced.
RealVector parse_grid(const std::string& text);

/// "lo:hi".
std::pair<double, double> parse_window(const std::string& text);

/// args[0] is the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace girko::cli
