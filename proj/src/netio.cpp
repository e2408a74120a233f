#include "bnsl/netio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace bnsl {

namespace {

struct Token {
  enum class Kind { Word, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0;
  int col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  Token expect_punct(const std::string& p) {
    if (current_.kind != Token::Kind::Punct || current_.text != p)
      throw ParseError("expected `" + p + "`, got `" + current_.text + "`",
                       current_.line, current_.col);
    return take();
  }

  Token expect_word() {
    if (current_.kind != Token::Kind::Word)
      throw ParseError("expected identifier, got `" + current_.text + "`",
                       current_.line, current_.col);
    return take();
  }

  Token expect_keyword(const std::string& kw) {
    Token t = expect_word();
    if (t.text != kw)
      throw ParseError("expected `" + kw + "`, got `" + t.text + "`", t.line,
                       t.col);
    return t;
  }

  bool at_end() const { return current_.kind == Token::Kind::End; }

 private:
  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-' || c == '.' || c == '+';
  }

  void advance() {
    // skip whitespace and // comments
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++col_;
        ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    current_ = Token{Token::Kind::End, "", line_, col_};
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    current_.line = line_;
    current_.col = col_;
    if (word_char(c)) {
      std::string word;
      while (pos_ < text_.size() && word_char(text_[pos_])) {
        word.push_back(text_[pos_++]);
        ++col_;
      }
      current_.kind = Token::Kind::Word;
      current_.text = std::move(word);
      return;
    }
    static const std::string punct = "{}()[]|,;";
    if (punct.find(c) != std::string::npos) {
      current_.kind = Token::Kind::Punct;
      current_.text = std::string(1, c);
      ++pos_;
      ++col_;
      return;
    }
    throw ParseError(std::string("unexpected character `") + c + "`", line_,
                     col_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

double parse_probability(const Token& t) {
  char* end = nullptr;
  const double v = std::strtod(t.text.c_str(), &end);
  if (end == t.text.c_str() || *end != '\0')
    throw ParseError("expected a number, got `" + t.text + "`", t.line, t.col);
  return v;
}

struct PendingCpt {
  std::vector<int> parents;
  ProbMatrix table;                 // q x r
  std::vector<std::uint8_t> seen;   // rows assigned so far
  int line = 0;
};

// Validates the sum, renormalises, stores.
void store_row(PendingCpt& p, std::int64_t j, const std::vector<double>& row,
               const std::string& child_name, int line) {
  if (p.seen[j])
    throw ParseError("duplicate probability row for `" + child_name + "`",
                     line, 1);
  double sum = 0.0;
  for (double v : row) {
    if (v < 0.0)
      throw InvalidDistribution("negative probability for `" + child_name +
                                "`");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw InvalidDistribution("probability row of `" + child_name +
                              "` sums to " + std::to_string(sum));
  for (std::size_t k = 0; k < row.size(); ++k) p.table(j, k) = row[k] / sum;
  p.seen[j] = 1;
}

DiscreteBn assemble(std::vector<VariableSchema> schema,
                    std::unordered_map<int, PendingCpt> pending) {
  const int n = static_cast<int>(schema.size());
  std::vector<std::pair<int, int>> arcs;
  for (const auto& [child, cpt] : pending)
    for (int p : cpt.parents) arcs.emplace_back(p, child);
  Dag g(n);
  try {
    g = Dag::from_arcs(n, arcs);
  } catch (const InvalidMove&) {
    // parsers reject duplicate parents, so mutual adjacency is a two-cycle
    throw CycleError("structure contains a directed cycle");
  }

  std::vector<Cpt> cpts(n);
  for (int i = 0; i < n; ++i) {
    auto it = pending.find(i);
    if (it == pending.end())
      throw IncompleteTable("no probability block for `" + schema[i].name +
                            "`");
    PendingCpt& p = it->second;
    for (std::size_t j = 0; j < p.seen.size(); ++j)
      if (!p.seen[j])
        throw IncompleteTable("missing parent configuration " +
                              std::to_string(j) + " for `" + schema[i].name +
                              "`");
    cpts[i] = Cpt{i, p.parents, std::move(p.table)};
    // CPT parent lists are kept in graph (ascending) order.
    if (cpts[i].parents != g.parents(i)) {
      // Reorder rows from the declared parent order to ascending order.
      const auto declared = cpts[i].parents;
      const auto target = g.parents(i);
      std::vector<int> radix_declared, radix_target;
      for (int pvar : declared) radix_declared.push_back(schema[pvar].cardinality());
      for (int pvar : target) radix_target.push_back(schema[pvar].cardinality());
      const Eigen::Index q = cpts[i].table.rows();
      ProbMatrix reordered(q, cpts[i].table.cols());
      std::vector<int> levels(declared.size());
      for (Eigen::Index j = 0; j < q; ++j) {
        // decode j under the declared order
        std::int64_t rest = j;
        for (int d = static_cast<int>(declared.size()) - 1; d >= 0; --d) {
          levels[d] = static_cast<int>(rest % radix_declared[d]);
          rest /= radix_declared[d];
        }
        // re-encode under the ascending order
        std::int64_t jt = 0;
        for (std::size_t d = 0; d < target.size(); ++d) {
          const auto pos = std::find(declared.begin(), declared.end(),
                                     target[d]) -
                           declared.begin();
          jt = jt * radix_target[d] + levels[pos];
        }
        reordered.row(jt) = cpts[i].table.row(j);
      }
      cpts[i].table = std::move(reordered);
      cpts[i].parents = target;
    }
  }
  return DiscreteBn(std::move(g), std::move(schema), std::move(cpts));
}

}  // namespace

DiscreteBn parse_bif(const std::string& text) {
  Lexer lex(text);

  lex.expect_keyword("network");
  lex.expect_word();  // network name
  lex.expect_punct("{");
  lex.expect_punct("}");

  std::vector<VariableSchema> schema;
  std::unordered_map<std::string, int> index;
  std::unordered_map<int, PendingCpt> pending;

  while (!lex.at_end()) {
    Token head = lex.expect_word();
    if (head.text == "variable") {
      Token name = lex.expect_word();
      if (index.count(name.text))
        throw ParseError("variable `" + name.text + "` declared twice",
                         name.line, name.col);
      lex.expect_punct("{");
      lex.expect_keyword("type");
      lex.expect_keyword("discrete");
      lex.expect_punct("[");
      Token card = lex.expect_word();
      lex.expect_punct("]");
      lex.expect_punct("{");
      VariableSchema var;
      var.name = name.text;
      while (true) {
        var.levels.push_back(lex.expect_word().text);
        if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == ",") {
          lex.take();
          continue;
        }
        break;
      }
      lex.expect_punct("}");
      lex.expect_punct(";");
      lex.expect_punct("}");
      const long declared = std::strtol(card.text.c_str(), nullptr, 10);
      if (declared != static_cast<long>(var.levels.size()))
        throw ParseError("variable `" + var.name + "` declares " +
                             card.text + " states but lists " +
                             std::to_string(var.levels.size()),
                         card.line, card.col);
      index[var.name] = static_cast<int>(schema.size());
      schema.push_back(std::move(var));
    } else if (head.text == "probability") {
      lex.expect_punct("(");
      Token child_tok = lex.expect_word();
      auto child_it = index.find(child_tok.text);
      if (child_it == index.end())
        throw ParseError("probability block references undeclared variable `" +
                             child_tok.text + "`",
                         child_tok.line, child_tok.col);
      const int child = child_it->second;
      if (pending.count(child))
        throw ParseError("second probability block for `" + child_tok.text +
                             "`",
                         child_tok.line, child_tok.col);

      PendingCpt cpt;
      cpt.line = child_tok.line;
      if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == "|") {
        lex.take();
        while (true) {
          Token ptok = lex.expect_word();
          auto pit = index.find(ptok.text);
          if (pit == index.end())
            throw ParseError("probability block references undeclared parent `" +
                                 ptok.text + "`",
                             ptok.line, ptok.col);
          if (pit->second == child)
            throw ParseError("`" + ptok.text + "` cannot be its own parent",
                             ptok.line, ptok.col);
          if (std::find(cpt.parents.begin(), cpt.parents.end(), pit->second) !=
              cpt.parents.end())
            throw ParseError("duplicate parent `" + ptok.text + "`", ptok.line,
                             ptok.col);
          cpt.parents.push_back(pit->second);
          if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == ",") {
            lex.take();
            continue;
          }
          break;
        }
      }
      lex.expect_punct(")");

      std::int64_t q = 1;
      for (int p : cpt.parents) q *= schema[p].cardinality();
      const int r = schema[child].cardinality();
      cpt.table = ProbMatrix::Zero(q, r);
      cpt.seen.assign(q, 0);

      lex.expect_punct("{");
      if (cpt.parents.empty()) {
        Token tbl = lex.expect_keyword("table");
        std::vector<double> row;
        while (true) {
          row.push_back(parse_probability(lex.expect_word()));
          if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == ",") {
            lex.take();
            continue;
          }
          break;
        }
        lex.expect_punct(";");
        if (static_cast<int>(row.size()) != r)
          throw ParseError("table row of `" + child_tok.text + "` has " +
                               std::to_string(row.size()) + " entries, needs " +
                               std::to_string(r),
                           tbl.line, tbl.col);
        store_row(cpt, 0, row, child_tok.text, tbl.line);
      } else {
        while (!(lex.peek().kind == Token::Kind::Punct &&
                 lex.peek().text == "}")) {
          Token open = lex.expect_punct("(");
          std::vector<int> levels;
          for (std::size_t d = 0; d < cpt.parents.size(); ++d) {
            Token ltok = lex.expect_word();
            const int li = schema[cpt.parents[d]].level_index(ltok.text);
            if (li < 0)
              throw ParseError("`" + ltok.text + "` is not a level of `" +
                                   schema[cpt.parents[d]].name + "`",
                               ltok.line, ltok.col);
            levels.push_back(li);
            if (d + 1 < cpt.parents.size()) lex.expect_punct(",");
          }
          lex.expect_punct(")");
          std::vector<double> row;
          while (true) {
            row.push_back(parse_probability(lex.expect_word()));
            if (lex.peek().kind == Token::Kind::Punct &&
                lex.peek().text == ",") {
              lex.take();
              continue;
            }
            break;
          }
          lex.expect_punct(";");
          if (static_cast<int>(row.size()) != r)
            throw ParseError("probability row of `" + child_tok.text +
                                 "` has " + std::to_string(row.size()) +
                                 " entries, needs " + std::to_string(r),
                             open.line, open.col);
          std::int64_t j = 0;
          for (std::size_t d = 0; d < cpt.parents.size(); ++d)
            j = j * schema[cpt.parents[d]].cardinality() + levels[d];
          store_row(cpt, j, row, child_tok.text, open.line);
        }
      }
      lex.expect_punct("}");
      pending.emplace(child, std::move(cpt));
    } else {
      throw ParseError("unsupported construct `" + head.text + "`", head.line,
                       head.col);
    }
  }

  return assemble(std::move(schema), std::move(pending));
}

DiscreteBn read_bif_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open `" + path + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bif(buf.str());
}

namespace {

std::string format_probability(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_token_safe(const std::string& name) {
  if (name.empty() ||
      name.find_first_of(" \t\n\r,") != std::string::npos)
    throw FormatError("name `" + name +
                      "` cannot be represented in this format");
}

}  // namespace

std::string write_bif(const DiscreteBn& bn) {
  std::ostringstream out;
  out << "network unnamed {\n}\n";
  for (int i = 0; i < bn.node_count(); ++i) {
    const auto& var = bn.variable(i);
    check_token_safe(var.name);
    out << "variable " << var.name << " {\n  type discrete [ "
        << var.cardinality() << " ] { ";
    for (int k = 0; k < var.cardinality(); ++k) {
      check_token_safe(var.levels[k]);
      if (k) out << ", ";
      out << var.levels[k];
    }
    out << " };\n}\n";
  }
  for (int i = 0; i < bn.node_count(); ++i) {
    const Cpt& c = bn.cpt(i);
    out << "probability ( " << bn.variable(i).name;
    if (!c.parents.empty()) {
      out << " |";
      for (std::size_t d = 0; d < c.parents.size(); ++d)
        out << (d ? ", " : " ") << bn.variable(c.parents[d]).name;
    }
    out << " ) {\n";
    if (c.parents.empty()) {
      out << "  table";
      for (Eigen::Index k = 0; k < c.table.cols(); ++k)
        out << (k ? ", " : " ") << format_probability(c.table(0, k));
      out << ";\n";
    } else {
      for (Eigen::Index j = 0; j < c.table.rows(); ++j) {
        // decode j into parent levels, first parent most significant
        std::vector<int> levels(c.parents.size());
        std::int64_t rest = j;
        for (int d = static_cast<int>(c.parents.size()) - 1; d >= 0; --d) {
          const int card = bn.variable(c.parents[d]).cardinality();
          levels[d] = static_cast<int>(rest % card);
          rest /= card;
        }
        out << "  (";
        for (std::size_t d = 0; d < c.parents.size(); ++d)
          out << (d ? ", " : "")
              << bn.variable(c.parents[d]).levels[levels[d]];
        out << ")";
        for (Eigen::Index k = 0; k < c.table.cols(); ++k)
          out << (k ? ", " : " ") << format_probability(c.table(j, k));
        out << ";\n";
      }
    }
    out << "}\n";
  }
  return out.str();
}

std::string write_native(const DiscreteBn& bn) {
  std::ostringstream out;
  out << "bn " << bn.node_count() << '\n';
  for (int i = 0; i < bn.node_count(); ++i) {
    const auto& var = bn.variable(i);
    check_token_safe(var.name);
    out << "var " << var.name << ' ';
    for (int k = 0; k < var.cardinality(); ++k) {
      check_token_safe(var.levels[k]);
      out << (k ? "," : "") << var.levels[k];
    }
    out << '\n';
  }
  for (int i = 0; i < bn.node_count(); ++i) {
    const Cpt& c = bn.cpt(i);
    out << "parents " << bn.variable(i).name;
    if (!c.parents.empty()) {
      out << ' ';
      for (std::size_t d = 0; d < c.parents.size(); ++d)
        out << (d ? "," : "") << bn.variable(c.parents[d]).name;
    }
    out << '\n';
    for (Eigen::Index j = 0; j < c.table.rows(); ++j) {
      out << "cpt " << bn.variable(i).name << ' ' << j;
      for (Eigen::Index k = 0; k < c.table.cols(); ++k)
        out << ' ' << format_probability(c.table(j, k));
      out << '\n';
    }
  }
  return out.str();
}

DiscreteBn read_native(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  auto next_line = [&](std::istringstream& ls) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      ls.clear();
      ls.str(line);
      return true;
    }
    return false;
  };

  std::istringstream ls;
  if (!next_line(ls)) throw ParseError("empty network file", 1, 1);
  std::string tag;
  int n = 0;
  if (!(ls >> tag >> n) || tag != "bn" || n < 0)
    throw ParseError("expected `bn <N>` header", line_no, 1);

  std::vector<VariableSchema> schema;
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < n; ++i) {
    if (!next_line(ls)) throw ParseError("truncated file: expected `var` line",
                                         line_no + 1, 1);
    std::string name, levels;
    if (!(ls >> tag >> name >> levels) || tag != "var")
      throw ParseError("expected `var <name> <levels>`", line_no, 1);
    VariableSchema var;
    var.name = name;
    std::istringstream lvls(levels);
    std::string lvl;
    while (std::getline(lvls, lvl, ','))
      if (!lvl.empty()) var.levels.push_back(lvl);
    if (var.levels.empty())
      throw ParseError("variable `" + name + "` lists no levels", line_no, 1);
    if (index.count(name))
      throw ParseError("variable `" + name + "` declared twice", line_no, 1);
    index[name] = i;
    schema.push_back(std::move(var));
  }

  std::unordered_map<int, PendingCpt> pending;
  int current = -1;
  while (next_line(ls)) {
    if (!(ls >> tag)) continue;
    if (tag == "parents") {
      std::string child_name;
      if (!(ls >> child_name))
        throw ParseError("expected `parents <child> [...]`", line_no, 1);
      auto cit = index.find(child_name);
      if (cit == index.end())
        throw ParseError("unknown variable `" + child_name + "`", line_no, 1);
      current = cit->second;
      if (pending.count(current))
        throw ParseError("second `parents` line for `" + child_name + "`",
                         line_no, 1);
      PendingCpt cpt;
      std::string plist;
      if (ls >> plist) {
        std::istringstream ps(plist);
        std::string pname;
        while (std::getline(ps, pname, ',')) {
          if (pname.empty()) continue;
          auto pit = index.find(pname);
          if (pit == index.end())
            throw ParseError("unknown parent `" + pname + "`", line_no, 1);
          if (pit->second == current)
            throw ParseError("`" + pname + "` cannot be its own parent",
                             line_no, 1);
          if (std::find(cpt.parents.begin(), cpt.parents.end(), pit->second) !=
              cpt.parents.end())
            throw ParseError("duplicate parent `" + pname + "`", line_no, 1);
          cpt.parents.push_back(pit->second);
        }
      }
      std::int64_t q = 1;
      for (int p : cpt.parents) q *= schema[p].cardinality();
      cpt.table = ProbMatrix::Zero(q, schema[current].cardinality());
      cpt.seen.assign(q, 0);
      cpt.line = line_no;
      pending.emplace(current, std::move(cpt));
    } else if (tag == "cpt") {
      std::string child_name;
      std::int64_t j = -1;
      if (!(ls >> child_name >> j))
        throw ParseError("expected `cpt <child> <row> <p...>`", line_no, 1);
      auto cit = index.find(child_name);
      if (cit == index.end())
        throw ParseError("unknown variable `" + child_name + "`", line_no, 1);
      auto pit = pending.find(cit->second);
      if (pit == pending.end())
        throw ParseError("`cpt` before `parents` for `" + child_name + "`",
                         line_no, 1);
      PendingCpt& cpt = pit->second;
      if (j < 0 || j >= static_cast<std::int64_t>(cpt.seen.size()))
        throw ParseError("row index out of range for `" + child_name + "`",
                         line_no, 1);
      std::vector<double> row;
      double v;
      while (ls >> v) row.push_back(v);
      if (static_cast<int>(row.size()) != schema[cit->second].cardinality())
        throw ParseError("row of `" + child_name + "` has " +
                             std::to_string(row.size()) + " entries, needs " +
                             std::to_string(schema[cit->second].cardinality()),
                         line_no, 1);
      store_row(cpt, j, row, child_name, line_no);
    } else {
      throw ParseError("unknown directive `" + tag + "`", line_no, 1);
    }
  }

  if (static_cast<int>(pending.size()) != n)
    throw ParseError("truncated file: missing `parents`/`cpt` blocks",
                     line_no, 1);
  return assemble(std::move(schema), std::move(pending));
}

DiscreteBn read_network_file(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".bif")
    return read_bif_file(path);
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open `" + path + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_native(buf.str());
}

void write_native_file(const DiscreteBn& bn, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write `" + path + "`");
  out << write_native(bn);
}

}  // namespace bnsl
