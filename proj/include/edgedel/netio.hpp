#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "edgedel/deletion.hpp"
#include "edgedel/error.hpp"
#include "edgedel/model.hpp"
#include "edgedel/tags.hpp"

namespace edgedel {

namespace io_detail {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

inline bool is_punct(char c) { return c == ':' || c == '|' || c == '='; }

// Splits one line of a line-oriented format. `#` starts a comment; ':', '|'
// and '=' are always separate tokens.
inline std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (is_punct(c)) {
      out.push_back({std::string(1, c), line_no, i + 1});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#' &&
           !is_punct(line[i]))
      ++i;
    out.push_back({std::string(line.substr(start, i - start)), line_no, start + 1});
  }
  return out;
}

inline std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    ++line_no;
    auto toks = tokenize_line(text.substr(pos, end - pos), line_no);
    if (!toks.empty()) lines.push_back(std::move(toks));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

inline double parse_number(const Token& t) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError("expected a number, found '" + t.text + "'", t.line, t.column);
  return v;
}

inline bool looks_numeric(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool valid_name(const std::string& s) { return !s.empty() && s != "->"; }

// Shortest decimal text that reads back to the same double.
inline std::string format_exact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string format_12g(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Canonical network document
//
//   kind original|augmented|approximate      (optional, default original)
//   variables
//     <name> : <state> <state> ...
//   cpts
//     <child> [| <parent> ...] : <p> <p> ...
//   links                                    (optional)
//     <parent> -> <child> via <clone> [se <soft-evidence>]
//
// One declaration per line. CPT entries follow the library index convention.
// ---------------------------------------------------------------------------

inline Network parse_network(std::string_view text) {
  using io_detail::Token;
  Network net;
  enum class Section { preamble, variables, cpts, links } sec = Section::preamble;
  std::vector<char> has_cpt;
  struct PendingCpt {
    Token child;
    std::vector<Token> parents;
    std::vector<double> values;
  };
  std::vector<PendingCpt> pending;
  struct PendingLink {
    Token parent, child, clone;
    std::optional<Token> se;
  };
  std::vector<PendingLink> links;

  for (const auto& toks : io_detail::tokenize_lines(text)) {
    const Token& head = toks.front();
    if (toks.size() == 1 && (head.text == "variables" || head.text == "cpts" || head.text == "links")) {
      const Section next = head.text == "variables" ? Section::variables
                           : head.text == "cpts"    ? Section::cpts
                                                    : Section::links;
      if (static_cast<int>(next) <= static_cast<int>(sec))
        throw ParseError("section '" + head.text + "' out of order", head.line, head.column);
      sec = next;
      continue;
    }
    switch (sec) {
      case Section::preamble: {
        if (head.text != "kind" || toks.size() != 2)
          throw ParseError("expected 'kind <tag>' or 'variables'", head.line, head.column);
        const auto& k = toks[1].text;
        if (k == "original")
          net.kind = NetworkKind::original;
        else if (k == "augmented")
          net.kind = NetworkKind::augmented;
        else if (k == "approximate")
          net.kind = NetworkKind::approximate;
        else
          throw ParseError("unknown network kind '" + k + "'", toks[1].line, toks[1].column);
        break;
      }
      case Section::variables: {
        if (toks.size() < 3 || toks[1].text != ":")
          throw ParseError("expected '<name> : <state> ...'", head.line, head.column);
        if (!io_detail::valid_name(head.text)) throw ParseError("invalid variable name", head.line, head.column);
        if (net.find(head.text)) throw SemanticError("variable '" + head.text + "' declared twice");
        std::vector<std::string> states;
        for (std::size_t i = 2; i < toks.size(); ++i) {
          if (io_detail::is_punct(toks[i].text[0]))
            throw ParseError("unexpected '" + toks[i].text + "'", toks[i].line, toks[i].column);
          states.push_back(toks[i].text);
        }
        net.add_variable(head.text, std::move(states));
        break;
      }
      case Section::cpts: {
        PendingCpt pc{head, {}, {}};
        std::size_t i = 1;
        if (i < toks.size() && toks[i].text == "|") {
          ++i;
          while (i < toks.size() && toks[i].text != ":") {
            if (io_detail::is_punct(toks[i].text[0]))
              throw ParseError("unexpected '" + toks[i].text + "'", toks[i].line, toks[i].column);
            pc.parents.push_back(toks[i++]);
          }
          if (pc.parents.empty()) throw ParseError("'|' must be followed by parents", head.line, head.column);
        }
        if (i >= toks.size() || toks[i].text != ":")
          throw ParseError("expected ':' before the table", head.line, head.column);
        ++i;
        if (i >= toks.size()) throw ParseError("empty table", head.line, head.column);
        for (; i < toks.size(); ++i) pc.values.push_back(io_detail::parse_number(toks[i]));
        pending.push_back(std::move(pc));
        break;
      }
      case Section::links: {
        if (toks.size() != 5 && toks.size() != 7)
          throw ParseError("expected '<parent> -> <child> via <clone> [se <node>]'", head.line, head.column);
        if (toks[1].text != "->") throw ParseError("expected '->'", toks[1].line, toks[1].column);
        if (toks[3].text != "via") throw ParseError("expected 'via'", toks[3].line, toks[3].column);
        PendingLink l{toks[0], toks[2], toks[4], std::nullopt};
        if (toks.size() == 7) {
          if (toks[5].text != "se") throw ParseError("expected 'se'", toks[5].line, toks[5].column);
          l.se = toks[6];
        }
        links.push_back(std::move(l));
        break;
      }
    }
  }
  if (sec == Section::preamble) throw ParseError("missing 'variables' section", 1, 1);

  has_cpt.assign(net.size(), 0);
  auto lookup = [&](const Token& t, const std::string& ctx) -> VarId {
    auto v = net.find(t.text);
    if (!v) throw SemanticError(ctx + ": unknown variable '" + t.text + "' (line " + std::to_string(t.line) + ")");
    return *v;
  };
  for (auto& pc : pending) {
    const VarId child = lookup(pc.child, "cpt");
    const std::string ctx = "cpt '" + pc.child.text + "'";
    if (has_cpt[child]) throw SemanticError(ctx + " defined twice");
    has_cpt[child] = 1;
    Cpt& c = net.cpts[child];
    for (const auto& p : pc.parents) c.parents.push_back(lookup(p, ctx));
    std::size_t expected = net.cardinality(child);
    for (auto p : c.parents) expected *= net.cardinality(p);
    if (pc.values.size() != expected)
      throw SemanticError(ctx + ": table has " + std::to_string(pc.values.size()) + " entries, expected " +
                          std::to_string(expected));
    c.table = std::move(pc.values);
  }
  for (VarId v = 0; v < net.size(); ++v)
    if (!has_cpt[v]) throw SemanticError("variable '" + net.variables[v].name + "' has no cpt");
  for (const auto& l : links) {
    AuxEdge a{lookup(l.parent, "link"), lookup(l.clone, "link"), lookup(l.child, "link"), std::nullopt};
    if (l.se) a.soft_evidence = lookup(*l.se, "link");
    net.aux_edges.push_back(a);
  }
  auto violations = validate_network(net);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw SemanticError("cpt '" + v.variable + "': " + v.rule + " violated (" + v.detail + ")");
  }
  return net;
}

inline std::string serialize_network(const Network& net) {
  std::ostringstream os;
  os << "kind " << to_string(net.kind) << "\nvariables\n";
  for (const auto& v : net.variables) {
    os << "  " << v.name << " :";
    for (const auto& s : v.states) os << ' ' << s;
    os << '\n';
  }
  os << "cpts\n";
  for (const auto& c : net.cpts) {
    os << "  " << net.variables[c.child].name;
    if (!c.parents.empty()) {
      os << " |";
      for (auto p : c.parents) os << ' ' << net.variables[p].name;
    }
    os << " :";
    for (double x : c.table) os << ' ' << io_detail::format_exact(x);
    os << '\n';
  }
  if (!net.aux_edges.empty()) {
    os << "links\n";
    for (const auto& a : net.aux_edges) {
      os << "  " << net.variables[a.parent].name << " -> " << net.variables[a.child].name << " via "
         << net.variables[a.clone].name;
      if (a.soft_evidence) os << " se " << net.variables[*a.soft_evidence].name;
      os << '\n';
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Hugin .net subset: `node`/`discrete node` blocks with `states`, and
// `potential` blocks with a dense `data` table. Other node and network
// attributes are skipped.
// ---------------------------------------------------------------------------

namespace io_detail {

class HuginLexer {
 public:
  explicit HuginLexer(std::string_view text) : text_(text) {}

  struct Tok {
    enum Kind { ident, string, number, punct, end } kind;
    std::string text;
    std::size_t line, column;
  };

  Tok next() {
    skip();
    if (pos_ >= text_.size()) return {Tok::end, "", line_, col_};
    const std::size_t l = line_, c = col_;
    const char ch = text_[pos_];
    if (ch == '"') {
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        s += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", l, c);
      advance();
      return {Tok::string, s, l, c};
    }
    if (ch == '(' || ch == ')' || ch == '{' || ch == '}' || ch == '=' || ch == ';' || ch == '|') {
      advance();
      return {Tok::punct, std::string(1, ch), l, c};
    }
    std::string s;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (d == ' ' || d == '\t' || d == '\r' || d == '\n' || d == '(' || d == ')' || d == '{' || d == '}' ||
          d == '=' || d == ';' || d == '|' || d == '"' || d == '%')
        break;
      s += d;
      advance();
    }
    if (s.empty()) throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
    return {looks_numeric(s) ? Tok::number : Tok::ident, s, l, c};
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

}  // namespace io_detail

inline Network parse_hugin_subset(std::string_view text) {
  using Tok = io_detail::HuginLexer::Tok;
  io_detail::HuginLexer lex(text);
  Tok tok = lex.next();
  auto advance = [&] { tok = lex.next(); };
  auto fail = [&](const std::string& what) -> ParseError { return ParseError(what, tok.line, tok.column); };
  auto expect = [&](const std::string& p) {
    if (tok.kind != Tok::punct || tok.text != p) throw fail("expected '" + p + "', found '" + tok.text + "'");
    advance();
  };
  // Skips a value: a scalar token or a balanced parenthesised list.
  auto skip_value = [&] {
    if (tok.kind == Tok::punct && tok.text == "(") {
      int depth = 0;
      do {
        if (tok.kind == Tok::end) throw fail("unterminated list");
        if (tok.kind == Tok::punct && tok.text == "(") ++depth;
        if (tok.kind == Tok::punct && tok.text == ")") --depth;
        advance();
      } while (depth > 0);
    } else if (tok.kind == Tok::end) {
      throw fail("unexpected end of input");
    } else {
      advance();
    }
  };

  Network net;
  struct PendingPotential {
    std::string child;
    std::vector<std::string> parents;
    std::vector<double> data;
    bool has_data = false;
  };
  std::vector<PendingPotential> potentials;

  while (tok.kind != Tok::end) {
    if (tok.kind != Tok::ident) throw fail("expected a block keyword, found '" + tok.text + "'");
    const std::string kw = tok.text;
    if (kw == "continuous" || kw == "decision" || kw == "utility" || kw == "class" || kw == "instance" ||
        kw == "temporal")
      throw UnsupportedFeature("unsupported feature '" + kw + "' at line " + std::to_string(tok.line));
    if (kw == "net") {
      advance();
      expect("{");
      while (!(tok.kind == Tok::punct && tok.text == "}")) {
        if (tok.kind == Tok::end) throw fail("unterminated net block");
        advance();
        if (tok.kind == Tok::punct && tok.text == "=") {
          advance();
          skip_value();
          expect(";");
        }
      }
      advance();
    } else if (kw == "node" || kw == "discrete") {
      if (kw == "discrete") {
        advance();
        if (tok.kind != Tok::ident || tok.text != "node") throw fail("expected 'node' after 'discrete'");
      }
      advance();
      if (tok.kind != Tok::ident) throw fail("expected node name");
      const std::string name = tok.text;
      if (net.find(name)) throw SemanticError("node '" + name + "' declared twice");
      advance();
      expect("{");
      std::vector<std::string> states;
      bool has_states = false;
      while (!(tok.kind == Tok::punct && tok.text == "}")) {
        if (tok.kind != Tok::ident) throw fail("expected attribute name in node '" + name + "'");
        const std::string attr = tok.text;
        advance();
        expect("=");
        if (attr == "states") {
          expect("(");
          while (!(tok.kind == Tok::punct && tok.text == ")")) {
            if (tok.kind != Tok::string) throw fail("state labels must be quoted strings");
            states.push_back(tok.text);
            advance();
          }
          advance();
          has_states = true;
        } else if (attr == "subtype" && tok.kind == Tok::ident && tok.text != "label") {
          throw UnsupportedFeature("unsupported feature 'subtype = " + tok.text + "' in node '" + name + "'");
        } else {
          skip_value();
        }
        expect(";");
      }
      advance();
      if (!has_states) throw SemanticError("node '" + name + "' declares no states");
      net.add_variable(name, std::move(states));
    } else if (kw == "potential") {
      advance();
      expect("(");
      PendingPotential pp;
      if (tok.kind != Tok::ident) throw fail("expected child name in potential");
      pp.child = tok.text;
      advance();
      if (tok.kind == Tok::ident) throw UnsupportedFeature("joint potentials over several heads are unsupported");
      if (tok.kind == Tok::punct && tok.text == "|") {
        advance();
        while (tok.kind == Tok::ident) {
          pp.parents.push_back(tok.text);
          advance();
        }
      }
      expect(")");
      expect("{");
      while (!(tok.kind == Tok::punct && tok.text == "}")) {
        if (tok.kind != Tok::ident) throw fail("expected attribute name in potential");
        const std::string attr = tok.text;
        advance();
        expect("=");
        if (attr == "data") {
          int depth = 0;
          do {
            if (tok.kind == Tok::end) throw fail("unterminated data table");
            if (tok.kind == Tok::punct && tok.text == "(") {
              ++depth;
            } else if (tok.kind == Tok::punct && tok.text == ")") {
              --depth;
            } else if (tok.kind == Tok::number) {
              pp.data.push_back(std::stod(tok.text));
            } else {
              throw fail("unexpected '" + tok.text + "' in data table");
            }
            advance();
          } while (depth > 0);
          pp.has_data = true;
        } else if (attr == "model_nodes" || attr == "model_data" || attr == "samples_per_interval") {
          throw UnsupportedFeature("unsupported feature '" + attr + "' in potential for '" + pp.child + "'");
        } else {
          skip_value();
        }
        expect(";");
      }
      advance();
      potentials.push_back(std::move(pp));
    } else {
      throw UnsupportedFeature("unsupported feature '" + kw + "' at line " + std::to_string(tok.line));
    }
  }

  std::vector<char> seen(net.size(), 0);
  for (auto& pp : potentials) {
    const std::string ctx = "potential for '" + pp.child + "'";
    auto child = net.find(pp.child);
    if (!child) throw SemanticError(ctx + ": unknown node");
    if (seen[*child]) throw SemanticError(ctx + " given twice");
    seen[*child] = 1;
    if (!pp.has_data) throw SemanticError(ctx + " has no data");
    Cpt& c = net.cpts[*child];
    std::size_t expected = net.cardinality(*child);
    for (const auto& p : pp.parents) {
      auto pv = net.find(p);
      if (!pv) throw SemanticError(ctx + ": unknown parent '" + p + "'");
      c.parents.push_back(*pv);
      expected *= net.cardinality(*pv);
    }
    if (pp.data.size() != expected)
      throw SemanticError(ctx + ": data has " + std::to_string(pp.data.size()) + " entries, expected " +
                          std::to_string(expected));
    c.table = std::move(pp.data);
  }
  for (VarId v = 0; v < net.size(); ++v)
    if (!seen[v]) throw SemanticError("node '" + net.variables[v].name + "' has no potential");
  auto violations = validate_network(net);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw SemanticError("potential for '" + v.variable + "': " + v.rule + " violated (" + v.detail + ")");
  }
  return net;
}

// ---------------------------------------------------------------------------
// Evidence: one `variable = state` per line.
// ---------------------------------------------------------------------------

inline Evidence parse_evidence(const Network& net, std::string_view text) {
  Evidence ev;
  for (const auto& toks : io_detail::tokenize_lines(text)) {
    if (toks.size() != 3 || toks[1].text != "=")
      throw ParseError("expected '<variable> = <state>'", toks.front().line, toks.front().column);
    auto v = net.find(toks[0].text);
    if (!v) throw ParseError("unknown variable '" + toks[0].text + "'", toks[0].line, toks[0].column);
    auto s = net.variables[*v].state_index(toks[2].text);
    if (!s)
      throw ParseError("variable '" + toks[0].text + "' has no state '" + toks[2].text + "'", toks[2].line,
                       toks[2].column);
    if (ev.contains(*v)) throw ParseError("variable '" + toks[0].text + "' observed twice", toks[0].line, toks[0].column);
    ev.set(*v, *s);
  }
  return ev;
}

inline std::string serialize_evidence(const Network& net, const Evidence& ev) {
  std::string out;
  for (const auto& [v, s] : ev) out += net.variables.at(v).name + " = " + net.variables[v].states.at(s) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Deletion plan: `parent -> child [pm <p>... se <s>...]` per line.
// ---------------------------------------------------------------------------

struct ParsedPlan {
  DeletionPlan plan;
  std::vector<bool> has_params;  // per entry: PM/SE were given in the file
};

inline ParsedPlan parse_plan(const Network& net, std::string_view text) {
  ParsedPlan out;
  for (const auto& toks : io_detail::tokenize_lines(text)) {
    if (toks.size() < 3 || toks[1].text != "->")
      throw ParseError("expected '<parent> -> <child>'", toks.front().line, toks.front().column);
    auto p = net.find(toks[0].text);
    if (!p) throw ParseError("unknown variable '" + toks[0].text + "'", toks[0].line, toks[0].column);
    auto c = net.find(toks[2].text);
    if (!c) throw ParseError("unknown variable '" + toks[2].text + "'", toks[2].line, toks[2].column);
    const std::size_t n = net.cardinality(*p);
    PlannedDeletion pd{{*p, *c}, EdgeParams::uniform(n)};
    bool given = false;
    if (toks.size() > 3) {
      if (toks.size() != 5 + 2 * n || toks[3].text != "pm" || toks[4 + n].text != "se")
        throw ParseError("expected 'pm' followed by " + std::to_string(n) + " numbers and 'se' followed by " +
                             std::to_string(n) + " numbers",
                         toks[3].line, toks[3].column);
      for (std::size_t i = 0; i < n; ++i) {
        pd.params.pm[i] = io_detail::parse_number(toks[4 + i]);
        pd.params.se[i] = io_detail::parse_number(toks[5 + n + i]);
      }
      given = true;
    }
    for (const auto& e : out.plan.entries)
      if (e.edge == pd.edge) throw ParseError("edge listed twice", toks.front().line, toks.front().column);
    out.plan.entries.push_back(std::move(pd));
    out.has_params.push_back(given);
  }
  return out;
}

inline std::string serialize_plan(const Network& net, const DeletionPlan& plan, bool with_params = true) {
  std::string out;
  for (const auto& e : plan.entries) {
    out += net.variables.at(e.edge.parent).name + " -> " + net.variables.at(e.edge.child).name;
    if (with_params) {
      out += " pm";
      for (double x : e.params.pm) out += " " + io_detail::format_exact(x);
      out += " se";
      for (double x : e.params.se) out += " " + io_detail::format_exact(x);
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment report (CSV)
// ---------------------------------------------------------------------------

struct ReportRow {
  std::string network_id;
  std::size_t instance_id = 0;
  Method method = Method::ed_kl;
  Selection selection = Selection::rand;
  std::size_t edges_deleted = 0;
  std::size_t iterations = 0;
  bool converged = false;
  double kl_bound = 0.0;
  std::optional<double> exact_kl;
  std::optional<double> map_ratio;
  std::size_t constrained_treewidth = 0;
  long long wall_time_ms = 0;
};

inline constexpr const char* kReportHeader =
    "network,instance,method,selection,edges_deleted,iterations,converged,kl_bound,exact_kl,map_ratio,"
    "constrained_treewidth,wall_time_ms";

inline void validate_row(const ReportRow& r) {
  if (std::isnan(r.kl_bound) || r.kl_bound < -1e-9) throw InvalidArgument("report row: kl_bound must be >= 0");
  if (r.exact_kl && !(*r.exact_kl <= r.kl_bound + 1e-9))
    throw InvalidArgument("report row: exact_kl " + io_detail::format_12g(*r.exact_kl) + " exceeds kl_bound " +
                          io_detail::format_12g(r.kl_bound));
  if (r.map_ratio && !(*r.map_ratio >= 0.0 && *r.map_ratio <= 1.0))
    throw InvalidArgument("report row: map_ratio outside [0,1]");
  if (r.network_id.find_first_of(",\n") != std::string::npos)
    throw InvalidArgument("report row: network id may not contain ',' or newlines");
}

inline std::string format_row(const ReportRow& r) {
  validate_row(r);
  std::string s;
  s += r.network_id + ',' + std::to_string(r.instance_id) + ',' + to_string(r.method) + ',' + to_string(r.selection) +
       ',' + std::to_string(r.edges_deleted) + ',' + std::to_string(r.iterations) + ',' +
       (r.converged ? "true" : "false") + ',' + io_detail::format_12g(r.kl_bound) + ',';
  if (r.exact_kl) s += io_detail::format_12g(*r.exact_kl);
  s += ',';
  if (r.map_ratio) s += io_detail::format_12g(*r.map_ratio);
  s += ',' + std::to_string(r.constrained_treewidth) + ',' + std::to_string(r.wall_time_ms);
  return s;
}

// Writes the header and one line per row; returns the byte count.
inline std::size_t write_report(const std::vector<ReportRow>& rows, std::ostream& sink) {
  std::string text = std::string(kReportHeader) + "\n";
  for (const auto& r : rows) text += format_row(r) + "\n";
  sink.write(text.data(), static_cast<std::streamsize>(text.size()));
  sink.flush();
  if (!sink) throw Error("report sink write failed");
  return text.size();
}

}  // namespace edgedel
