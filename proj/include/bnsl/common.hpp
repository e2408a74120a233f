#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace bnsl {

// Dense storage for tabular data. Rows are observations / parent
// configurations, columns are variables / child states.
using DataMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using ProbMatrix = Eigen::MatrixXd;
using ProbVector = Eigen::VectorXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : Error { using Error::Error; };
struct MissingDataError : Error { using Error::Error; };
struct SchemaViolation : Error { using Error::Error; };
struct ConfigSpaceOverflow : Error { using Error::Error; };
struct CycleError : Error { using Error::Error; };
struct InvalidMove : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct ResourceLimit : Error { using Error::Error; };
struct InvalidDistribution : Error { using Error::Error; };
struct IncompleteTable : Error { using Error::Error; };

struct ParseError : Error {
  ParseError(const std::string& msg, int line, int column);
  int line;
  int column;
};

// SplitMix64. Every random draw in the library goes through this generator so
// that a seed reproduces the same bytes on any platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform in [0, 1) with 53 random bits.
  double next_double();

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Stream derivation: hashes (seed, a, b, c) into an independent seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0);

 private:
  std::uint64_t state_;
};

}  // namespace bnsl
