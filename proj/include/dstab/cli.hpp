#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dstab/io.hpp"
#include "dstab/linalg.hpp"

namespace dstab::cli {

enum class Command { Classify, Certify, Bound, Sample, Verify };
enum class OutputFormat { Json, Csv, Pretty };

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitInternal = 4;

struct RunConfig {
  Command command = Command::Classify;
  std::string input_path;  // "-" reads standard input
  MatrixFormat format = MatrixFormat::Text;
  std::optional<SectorAngle> theta;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  ScalingMode mode = ScalingMode::Multiplicative;
  OutputFormat output = OutputFormat::Json;
  bool all = false;
  std::optional<std::size_t> budget;
  unsigned threads = 1;
};

/// Parses argv into `config`. Returns nullopt on success, otherwise the exit
/// status to use (0 for --help, kExitParse for bad arguments).
std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                              std::ostream& err);

/// Executes one command. Reports go to `out`; errors go to `err` as JSON.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dstab::cli
