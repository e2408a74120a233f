#include "bnsl/common.hpp"

namespace bnsl {

ParseError::ParseError(const std::string& msg, int line_arg, int column_arg)
    : Error(msg + " (line " + std::to_string(line_arg) + ", column " +
            std::to_string(column_arg) + ")"),
      line(line_arg),
      column(column_arg) {}

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  return next() % bound;
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  Rng h(seed);
  h.state_ ^= h.next() + a;
  h.state_ ^= h.next() + b;
  h.state_ ^= h.next() + c;
  return h.next();
}

}  // namespace bnsl
