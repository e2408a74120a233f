#include "bnsl/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace bnsl {

int VariableSchema::level_index(const std::string& label) const {
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (levels[k] == label) return static_cast<int>(k);
  return -1;
}

bool operator==(const VariableSchema& a, const VariableSchema& b) {
  return a.name == b.name && a.levels == b.levels;
}

Dataset::Dataset(std::vector<VariableSchema> schema, DataMatrix rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
  if (rows_.cols() != static_cast<Eigen::Index>(schema_.size()))
    throw DimensionError("row width does not match schema");
  for (const auto& var : schema_) {
    std::set<std::string> uniq(var.levels.begin(), var.levels.end());
    if (uniq.size() != var.levels.size())
      throw SchemaViolation("duplicate level label in variable `" + var.name +
                            "`");
    if (var.levels.empty())
      throw SchemaViolation("variable `" + var.name + "` has no levels");
  }
  for (Eigen::Index t = 0; t < rows_.rows(); ++t)
    for (Eigen::Index i = 0; i < rows_.cols(); ++i) {
      const auto v = rows_(t, i);
      if (v < 0 || v >= schema_[i].cardinality())
        throw SchemaViolation("level index out of range for variable `" +
                              schema_[i].name + "`");
    }
}

namespace {

// One CSV record; handles quoted fields with embedded commas and "" escapes.
std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      if (!cur.empty())
        throw FormatError("stray quote in line " + std::to_string(line_no));
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\r') {
      // tolerate CRLF
    } else {
      cur.push_back(c);
    }
  }
  if (in_quotes)
    throw FormatError("unterminated quote in line " + std::to_string(line_no));
  fields.push_back(cur);
  return fields;
}

Dataset build_dataset(const std::string& path,
                      const std::unordered_map<std::string,
                                               std::vector<std::string>>*
                          declared,
                      bool require_declared) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open `" + path + "`");

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw FormatError("empty file `" + path + "`");
  ++line_no;
  const auto header = split_csv_line(line, line_no);
  const int ncols = static_cast<int>(header.size());

  std::vector<std::vector<std::string>> cells(ncols);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.eof()) break;
    const auto fields = split_csv_line(line, line_no);
    if (static_cast<int>(fields.size()) != ncols)
      throw FormatError("ragged row at line " + std::to_string(line_no) +
                        ": expected " + std::to_string(ncols) + " fields, got " +
                        std::to_string(fields.size()));
    for (int i = 0; i < ncols; ++i) {
      if (fields[i].empty())
        throw MissingDataError("missing value at line " +
                               std::to_string(line_no) + ", column `" +
                               header[i] + "`");
      cells[i].push_back(fields[i]);
    }
  }
  const std::int64_t nrows = static_cast<std::int64_t>(cells.empty() ? 0 : cells[0].size());

  std::vector<VariableSchema> schema(ncols);
  for (int i = 0; i < ncols; ++i) {
    schema[i].name = header[i];
    const std::vector<std::string>* levels = nullptr;
    if (declared) {
      auto it = declared->find(header[i]);
      if (it != declared->end())
        levels = &it->second;
      else if (require_declared)
        throw SchemaViolation("column `" + header[i] +
                              "` not declared in schema");
    }
    if (levels) {
      schema[i].levels = *levels;
    } else {
      std::set<std::string> observed(cells[i].begin(), cells[i].end());
      schema[i].levels.assign(observed.begin(), observed.end());
      if (schema[i].levels.empty())
        schema[i].levels.push_back("0");  // empty column in an empty file
    }
  }

  DataMatrix rows(nrows, ncols);
  for (int i = 0; i < ncols; ++i) {
    std::unordered_map<std::string, int> index;
    for (std::size_t k = 0; k < schema[i].levels.size(); ++k)
      index[schema[i].levels[k]] = static_cast<int>(k);
    for (std::int64_t t = 0; t < nrows; ++t) {
      auto it = index.find(cells[i][t]);
      if (it == index.end())
        throw SchemaViolation("level `" + cells[i][t] +
                              "` of column `" + header[i] +
                              "` is not declared in the schema");
      rows(t, i) = it->second;
    }
  }
  return Dataset(std::move(schema), std::move(rows));
}

}  // namespace

std::vector<VariableSchema> read_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open schema file `" + path + "`");
  std::vector<VariableSchema> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw FormatError("schema line " + std::to_string(line_no) +
                        " lacks `name: levels`");
    VariableSchema var;
    var.name = line.substr(0, colon);
    while (!var.name.empty() && var.name.back() == ' ') var.name.pop_back();
    std::string rest = line.substr(colon + 1);
    std::istringstream ls(rest);
    std::string level;
    while (std::getline(ls, level, ',')) {
      while (!level.empty() && level.front() == ' ') level.erase(level.begin());
      while (!level.empty() && level.back() == ' ') level.pop_back();
      if (!level.empty()) var.levels.push_back(level);
    }
    if (var.levels.empty())
      throw FormatError("schema line " + std::to_string(line_no) +
                        " declares no levels");
    out.push_back(std::move(var));
  }
  return out;
}

Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& schema_path) {
  if (!schema_path) return build_dataset(path, nullptr, false);
  const auto declared_list = read_schema_file(*schema_path);
  std::unordered_map<std::string, std::vector<std::string>> declared;
  for (const auto& var : declared_list) declared[var.name] = var.levels;
  return build_dataset(path, &declared, false);
}

Dataset load_csv_with_schema(const std::string& path,
                             const std::vector<VariableSchema>& schema) {
  std::unordered_map<std::string, std::vector<std::string>> declared;
  for (const auto& var : schema) declared[var.name] = var.levels;
  return build_dataset(path, &declared, true);
}

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\n") != std::string::npos;
}

void write_field(std::ostream& out, const std::string& field) {
  if (!needs_quoting(field)) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::string to_csv(const Dataset& data) {
  std::ostringstream out;
  for (int i = 0; i < data.variable_count(); ++i) {
    if (i) out << ',';
    write_field(out, data.variable(i).name);
  }
  out << '\n';
  for (std::int64_t t = 0; t < data.row_count(); ++t) {
    for (int i = 0; i < data.variable_count(); ++i) {
      if (i) out << ',';
      write_field(out, data.variable(i).levels[data.value(t, i)]);
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write `" + path + "`");
  out << to_csv(data);
}

ContingencyTable count_contingency(const Dataset& data, int child,
                                   const std::vector<int>& parents,
                                   std::int64_t config_cap) {
  const int nvars = data.variable_count();
  if (child < 0 || child >= nvars)
    throw DimensionError("child index out of range");
  for (std::size_t a = 0; a < parents.size(); ++a) {
    const int p = parents[a];
    if (p < 0 || p >= nvars) throw DimensionError("parent index out of range");
    if (p == child) throw DimensionError("child cannot be its own parent");
    for (std::size_t b = a + 1; b < parents.size(); ++b)
      if (parents[b] == p) throw DimensionError("duplicate parent index");
  }

  std::int64_t q = 1;
  for (int p : parents) {
    q *= data.cardinality(p);
    if (q > config_cap)
      throw ConfigSpaceOverflow("parent configuration space exceeds cap of " +
                                std::to_string(config_cap));
  }

  ContingencyTable t;
  t.child = child;
  t.parents = parents;
  t.cardinality = data.cardinality(child);
  t.config_count = q;
  t.counts = CountMatrix::Zero(q, t.cardinality);
  t.margins = CountVector::Zero(q);

  for (std::int64_t row = 0; row < data.row_count(); ++row) {
    std::int64_t j = 0;
    for (int p : parents) j = j * data.cardinality(p) + data.value(row, p);
    const int k = data.value(row, child);
    ++t.counts(j, k);
    ++t.margins(j);
  }
  t.observed_config_count = (t.margins.array() > 0).count();
  return t;
}

}  // namespace bnsl
