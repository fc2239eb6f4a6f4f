#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cknlab/params.hpp"

namespace cknlab::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes.
enum Exit : int { ok = 0, validation = 1, nonconvergence = 2, io = 3 };

/// Output directory not creatable or a file not writable.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat run configuration; every key is settable from a key=value file or
/// a --key=value flag.
struct ConfigDoc {
  double n = 3, p = 2, a = 0, b = 0, c = 2, lambda = 0, R = 1;
  int nodes = 4096;
  std::optional<double> ratio;  // default 10^{12/(nodes-1)}
  double eps_min = 1e-6, eps_max = 1e-2;
  int eps_count = 13;
  double tol = 1e-10;
  int max_iters = 20000;
  std::string out_dir = "out";
  std::string format = "json";  // stdout rendering: "json", "table" or "quiet"

  double effective_ratio() const;
  CknParams params() const;  // throws ParameterError
};

/// All recognized keys, in a fixed order.
const std::vector<std::string>& config_keys();

/// Sets one key; throws InputError for an unknown key or unparsable value.
void set_key(ConfigDoc& cfg, const std::string& key, const std::string& value);

/// Parses key=value lines ('#' starts a comment; blank lines ignored).
/// Applies only the keys present; throws InputError on malformed lines.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Defaults < file < CKNLAB_OUT (out_dir only) < flags; validates the
/// problem keys and the grid/sweep/solver keys.
ConfigDoc resolve_config(const std::map<std::string, std::string>& file,
                         const std::map<std::string, std::string>& flags, const char* env_out);

/// Runs `cknlab <subcommand> [--config FILE] [--key=value ...]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cknlab::cli
