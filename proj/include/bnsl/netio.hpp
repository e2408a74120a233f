#pragma once

#include <string>

#include "bnsl/model.hpp"

namespace bnsl {

// Reader for the discrete-network subset of the BIF format: `network` header,
// `variable` blocks with `type discrete [ r ] { levels };`, and `probability`
// blocks with either a `table` row (no parents) or one `(levels) p...;` row
// per parent configuration. Tables must be complete; rows must sum to 1
// within 1e-6 and are renormalised on read. Anything outside the subset is a
// ParseError rather than being skipped.
DiscreteBn parse_bif(const std::string& text);
DiscreteBn read_bif_file(const std::string& path);
std::string write_bif(const DiscreteBn& bn);

// Line-oriented native format:
//   bn <N>
//   var <name> <level,...>
//   parents <child> [<p1,...>]
//   cpt <child> <row j> <p1 ... pr>
// Probabilities are printed with 17 significant digits so the round trip is
// exact.
std::string write_native(const DiscreteBn& bn);
DiscreteBn read_native(const std::string& text);
DiscreteBn read_network_file(const std::string& path);  // by extension: .bif else native
void write_native_file(const DiscreteBn& bn, const std::string& path);

}  // namespace bnsl
