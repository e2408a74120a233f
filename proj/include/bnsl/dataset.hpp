#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnsl/common.hpp"

namespace bnsl {

struct VariableSchema {
  std::string name;
  std::vector<std::string> levels;  // declared order fixes each level's index

  int cardinality() const { return static_cast<int>(levels.size()); }
  // -1 when the label is not a declared level.
  int level_index(const std::string& label) const;
};

bool operator==(const VariableSchema& a, const VariableSchema& b);

// Immutable categorical data matrix. Cardinalities come from the schema, not
// from the observed support, so levels unseen in a small sample still count.
class Dataset {
 public:
  Dataset(std::vector<VariableSchema> schema, DataMatrix rows);

  int variable_count() const { return static_cast<int>(schema_.size()); }
  std::int64_t row_count() const { return rows_.rows(); }
  const std::vector<VariableSchema>& schema() const { return schema_; }
  const VariableSchema& variable(int i) const { return schema_.at(i); }
  int cardinality(int i) const { return schema_.at(i).cardinality(); }
  std::int32_t value(std::int64_t row, int var) const {
    return rows_(row, var);
  }
  const DataMatrix& rows() const { return rows_; }

 private:
  std::vector<VariableSchema> schema_;
  DataMatrix rows_;
};

// Counts for one node/parent-set pair. Row j is the mixed-radix encoding of
// the parent levels with the first listed parent as the most significant
// digit; column k is the child level.
struct ContingencyTable {
  int child = -1;
  std::vector<int> parents;
  int cardinality = 0;                      // r, child states
  std::int64_t config_count = 0;            // q, parent configurations
  std::int64_t observed_config_count = 0;   // rows j with margin > 0
  CountMatrix counts;                       // q x r
  CountVector margins;                      // q
};

inline constexpr std::int64_t kDefaultConfigCap = std::int64_t{1} << 20;

// Schema file: one `name: level1,level2,...` line per variable. Variables not
// named keep their inferred (sorted observed) level sets.
std::vector<VariableSchema> read_schema_file(const std::string& path);

Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& schema_path = {});

// Same CSV reader, but every column uses the given schema's level sets (all
// header names must be declared). Used when scoring data against a network.
Dataset load_csv_with_schema(const std::string& path,
                             const std::vector<VariableSchema>& schema);

void write_csv(const Dataset& data, const std::string& path);
std::string to_csv(const Dataset& data);

ContingencyTable count_contingency(const Dataset& data, int child,
                                   const std::vector<int>& parents,
                                   std::int64_t config_cap = kDefaultConfigCap);

}  // namespace bnsl
