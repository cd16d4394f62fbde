#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "json_util.hpp"
#include "sfc/mip.hpp"

namespace sfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kTermsPerLine = 6;

std::string num(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_number(std::string_view s, std::string_view what) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity" || lower == "+infinity") return kInf;
  if (lower == "-inf" || lower == "-infinity") return -kInf;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InputError(std::string(what) + ": expected a number, got \"" + std::string(s) + "\"");
  }
  return v;
}

bool is_number(std::string_view s) {
  if (s.empty()) return false;
  double v;
  std::string_view t = s;
  if (t.front() == '+') t.remove_prefix(1);
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec == std::errc() && res.ptr == t.data() + t.size()) return true;
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower == "inf" || lower == "+inf" || lower == "-inf" || lower == "infinity" || lower == "-infinity";
}

int family_of(std::string_view row) {
  if (row == "budget") return kBudgetFamily;
  if (row.size() > 2 && row.front() == 'c') {
    const auto us = row.find('_');
    int f = 0;
    auto res = std::from_chars(row.data() + 1, row.data() + (us == std::string_view::npos ? row.size() : us), f);
    if (res.ec == std::errc() && us != std::string_view::npos && res.ptr == row.data() + us) return f;
  }
  return -1;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

void write_terms(std::ostringstream& out, const MipModel& m, const std::vector<Term>& terms) {
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (k > 0 && k % kTermsPerLine == 0) out << "\n   ";
    const double c = terms[k].coef;
    const char* sign = c < 0 ? "-" : "+";
    const double mag = std::abs(c);
    if (k > 0 || c < 0) out << ' ' << sign;
    out << ' ';
    if (mag != 1.0) out << num(mag) << ' ';
    out << m.variables[terms[k].var].name;
  }
}

const char* sense_lp(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

// Collects variables in declaration order while parsing.
class VariableTable {
 public:
  std::size_t get(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    const std::size_t id = vars.size();
    vars.push_back({std::string(name), 0.0, kInf, false});
    index_.emplace(vars.back().name, id);
    return id;
  }
  std::vector<Variable> vars;

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace

ModelFormat parse_model_format(std::string_view text) {
  if (text == "lp" || text == "LP") return ModelFormat::Lp;
  if (text == "mps" || text == "MPS") return ModelFormat::Mps;
  throw InputError("unknown model format \"" + std::string(text) + "\" (expected lp or mps)");
}

std::string export_model(const MipModel& model, ModelFormat format) {
  return format == ModelFormat::Lp ? export_lp(model) : export_mps(model);
}

std::string export_lp(const MipModel& m) {
  std::ostringstream out;
  out << "\\ model " << m.name << "\n";
  out << (m.maximize ? "Maximize" : "Minimize") << "\n obj:";
  write_terms(out, m, m.objective);
  out << "\nSubject To\n";
  for (const Constraint& c : m.constraints) {
    out << ' ' << c.name << ':';
    write_terms(out, m, c.terms);
    out << ' ' << sense_lp(c.sense) << ' ' << num(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const Variable& v : m.variables) {
    if (v.lower == -kInf && v.upper == kInf) {
      out << ' ' << v.name << " free\n";
    } else if (v.upper == kInf) {
      out << ' ' << v.name << " >= " << num(v.lower) << '\n';
    } else {
      out << ' ' << num(v.lower) << " <= " << v.name << " <= " << num(v.upper) << '\n';
    }
  }
  bool any_int = std::any_of(m.variables.begin(), m.variables.end(), [](const Variable& v) { return v.integer; });
  if (any_int) {
    out << "Generals\n";
    std::size_t k = 0;
    for (const Variable& v : m.variables) {
      if (!v.integer) continue;
      out << (k % 8 == 0 ? (k == 0 ? " " : "\n ") : " ") << v.name;
      ++k;
    }
    out << '\n';
  }
  out << "End\n";
  return out.str();
}

MipModel parse_lp(std::string_view text) {
  enum class Section { None, Objective, Constraints, Bounds, Integers, End };
  MipModel m;
  VariableTable table;

  // Join section bodies into token streams; statements are delimited by
  // "name:" labels (rows) or by lines (bounds).
  Section section = Section::None;
  std::vector<std::string_view> body;
  std::vector<std::vector<std::string_view>> bound_lines;
  std::vector<std::string_view> ints;

  for (std::string_view line : lines_of(text)) {
    if (auto bs = line.find('\\'); bs != std::string_view::npos) line = line.substr(0, bs);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    std::string head;
    for (auto t : toks) {
      if (!head.empty()) head += ' ';
      head += t;
    }
    std::string lower = head;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "minimize" || lower == "minimise" || lower == "min") {
      section = Section::Objective;
      m.maximize = false;
      continue;
    }
    if (lower == "maximize" || lower == "maximise" || lower == "max") {
      section = Section::Objective;
      m.maximize = true;
      continue;
    }
    if (lower == "subject to" || lower == "st" || lower == "s.t." || lower == "such that") {
      section = Section::Constraints;
      body.push_back("\x01");  // separator between objective and rows
      continue;
    }
    if (lower == "bounds") {
      section = Section::Bounds;
      continue;
    }
    if (lower == "generals" || lower == "general" || lower == "binaries" || lower == "binary" || lower == "integers") {
      section = Section::Integers;
      continue;
    }
    if (lower == "end") {
      section = Section::End;
      continue;
    }
    switch (section) {
      case Section::Objective:
      case Section::Constraints:
        body.insert(body.end(), toks.begin(), toks.end());
        break;
      case Section::Bounds:
        bound_lines.push_back(toks);
        break;
      case Section::Integers:
        ints.insert(ints.end(), toks.begin(), toks.end());
        break;
      case Section::None:
      case Section::End:
        throw InputError("lp: content outside of a section: \"" + head + "\"");
    }
  }

  // Split the token stream into labelled statements.
  struct Statement {
    std::string label;
    std::vector<std::string_view> tokens;
    bool is_objective;
  };
  std::vector<Statement> statements;
  bool in_objective = true;
  for (std::string_view tok : body) {
    if (tok == "\x01") {
      in_objective = false;
      continue;
    }
    if (tok.size() > 1 && tok.back() == ':') {
      statements.push_back({std::string(tok.substr(0, tok.size() - 1)), {}, in_objective});
      continue;
    }
    if (statements.empty() || statements.back().is_objective != in_objective) {
      statements.push_back({in_objective ? "obj" : "", {}, in_objective});
    }
    statements.back().tokens.push_back(tok);
  }

  auto parse_terms = [&](const std::vector<std::string_view>& toks, std::size_t end, std::vector<Term>& terms) {
    double sign = 1.0;
    double coef = 1.0;
    bool have_coef = false;
    for (std::size_t k = 0; k < end; ++k) {
      std::string_view t = toks[k];
      if (t == "+") continue;
      if (t == "-") {
        sign = -sign;
        continue;
      }
      if (is_number(t)) {
        coef = parse_number(t, "lp");
        have_coef = true;
        continue;
      }
      terms.push_back({table.get(t), sign * (have_coef ? coef : 1.0)});
      sign = 1.0;
      coef = 1.0;
      have_coef = false;
    }
  };

  std::size_t anonymous = 0;
  for (Statement& st : statements) {
    if (st.is_objective) {
      parse_terms(st.tokens, st.tokens.size(), m.objective);
      continue;
    }
    auto op = std::find_if(st.tokens.begin(), st.tokens.end(),
                           [](std::string_view t) { return t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>" || t == "<" || t == ">"; });
    if (op == st.tokens.end()) throw InputError("lp: row \"" + st.label + "\" has no relation");
    Constraint c;
    c.name = st.label.empty() ? "r" + std::to_string(anonymous++) : st.label;
    c.family = family_of(c.name);
    const std::string_view rel = *op;
    c.sense = rel == "=" ? Sense::Equal : (rel.front() == '<' || rel == "=<") ? Sense::LessEqual : Sense::GreaterEqual;
    parse_terms(st.tokens, static_cast<std::size_t>(op - st.tokens.begin()), c.terms);
    double sign = 1.0;
    bool got = false;
    for (auto it = op + 1; it != st.tokens.end(); ++it) {
      if (*it == "-") {
        sign = -sign;
      } else if (*it != "+") {
        c.rhs = sign * parse_number(*it, "lp");
        got = true;
      }
    }
    if (!got) throw InputError("lp: row \"" + c.name + "\" has no right-hand side");
    m.constraints.push_back(std::move(c));
  }

  std::vector<std::size_t> order;  // bound statement order
  for (const auto& toks : bound_lines) {
    if (toks.size() == 2 && (toks[1] == "free" || toks[1] == "Free" || toks[1] == "FREE")) {
      const std::size_t v = table.get(toks[0]);
      table.vars[v].lower = -kInf;
      table.vars[v].upper = kInf;
      order.push_back(v);
    } else if (toks.size() == 3 && !is_number(toks[0])) {
      const std::size_t v = table.get(toks[0]);
      const double val = parse_number(toks[2], "lp bounds");
      if (toks[1] == ">=") {
        table.vars[v].lower = val;
      } else if (toks[1] == "<=") {
        table.vars[v].upper = val;
      } else if (toks[1] == "=") {
        table.vars[v].lower = table.vars[v].upper = val;
      } else {
        throw InputError("lp: bad bound line for " + std::string(toks[0]));
      }
      order.push_back(v);
    } else if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=") {
      const std::size_t v = table.get(toks[2]);
      table.vars[v].lower = parse_number(toks[0], "lp bounds");
      table.vars[v].upper = parse_number(toks[4], "lp bounds");
      order.push_back(v);
    } else {
      throw InputError("lp: unsupported bound line");
    }
  }
  for (std::string_view name : ints) table.vars[table.get(name)].integer = true;

  // Variable order: as listed in Bounds, then any others in first-use order.
  std::vector<std::size_t> remap(table.vars.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t v : order) {
    if (remap[v] == std::numeric_limits<std::size_t>::max()) {
      remap[v] = m.variables.size();
      m.variables.push_back(table.vars[v]);
    }
  }
  for (std::size_t v = 0; v < table.vars.size(); ++v) {
    if (remap[v] == std::numeric_limits<std::size_t>::max()) {
      remap[v] = m.variables.size();
      m.variables.push_back(table.vars[v]);
    }
  }
  auto apply = [&](std::vector<Term>& terms) {
    for (Term& t : terms) t.var = remap[t.var];
  };
  apply(m.objective);
  for (Constraint& c : m.constraints) apply(c.terms);
  for (std::string_view line : lines_of(text)) {
    if (line.starts_with("\\ model ")) {
      m.name = std::string(line.substr(8));
      break;
    }
  }
  return m;
}

std::string export_mps(const MipModel& m) {
  std::ostringstream out;
  out << "NAME " << m.name << "\n";
  out << "OBJSENSE\n    " << (m.maximize ? "MAX" : "MIN") << "\n";
  out << "ROWS\n N obj\n";
  for (const Constraint& c : m.constraints) {
    const char* t = c.sense == Sense::LessEqual ? "L" : c.sense == Sense::GreaterEqual ? "G" : "E";
    out << ' ' << t << ' ' << c.name << '\n';
  }
  // Column-major view.
  std::vector<std::vector<std::pair<std::size_t, double>>> columns(m.variables.size());
  for (const Term& t : m.objective) columns[t.var].push_back({0, t.coef});
  for (std::size_t r = 0; r < m.constraints.size(); ++r) {
    for (const Term& t : m.constraints[r].terms) columns[t.var].push_back({r + 1, t.coef});
  }
  out << "COLUMNS\n";
  bool in_int = false;
  std::size_t marker = 0;
  for (std::size_t v = 0; v < m.variables.size(); ++v) {
    const Variable& var = m.variables[v];
    if (var.integer != in_int) {
      out << "    MARKER" << marker++ << " 'MARKER' " << (var.integer ? "'INTORG'" : "'INTEND'") << '\n';
      in_int = var.integer;
    }
    if (columns[v].empty()) {
      out << "    " << var.name << " obj 0\n";
      continue;
    }
    for (const auto& [row, coef] : columns[v]) {
      out << "    " << var.name << ' ' << (row == 0 ? std::string("obj") : m.constraints[row - 1].name) << ' ' << num(coef)
          << '\n';
    }
  }
  if (in_int) out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";
  out << "RHS\n";
  for (const Constraint& c : m.constraints) {
    if (c.rhs != 0.0) out << "    RHS " << c.name << ' ' << num(c.rhs) << '\n';
  }
  out << "BOUNDS\n";
  for (const Variable& v : m.variables) {
    if (v.lower == -kInf && v.upper == kInf) {
      out << " FR BND " << v.name << '\n';
      continue;
    }
    if (v.lower == -kInf) {
      out << " MI BND " << v.name << '\n';
    } else if (v.lower != 0.0 || v.integer) {
      out << " LO BND " << v.name << ' ' << num(v.lower) << '\n';
    }
    if (v.upper != kInf) {
      out << " UP BND " << v.name << ' ' << num(v.upper) << '\n';
    } else if (v.integer) {
      out << " PL BND " << v.name << '\n';
    }
  }
  out << "ENDATA\n";
  return out.str();
}

MipModel parse_mps(std::string_view text) {
  enum class Section { None, Objsense, Rows, Columns, Rhs, Ranges, Bounds, End };
  MipModel m;
  Section section = Section::None;
  std::string objective_row;
  std::unordered_map<std::string, std::size_t> rows;  // name -> constraint index
  VariableTable table;
  bool in_int = false;
  std::vector<std::pair<std::size_t, Term>> entries;  // row (npos = objective), term

  for (std::string_view line : lines_of(text)) {
    if (line.empty() || line.front() == '*') continue;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(line.front()))) {
      const std::string_view head = toks[0];
      if (head == "NAME") {
        if (toks.size() > 1) m.name = std::string(toks[1]);
        section = Section::None;
      } else if (head == "OBJSENSE") {
        section = Section::Objsense;
        if (toks.size() > 1) m.maximize = toks[1] == "MAX" || toks[1] == "MAXIMIZE";
      } else if (head == "ROWS") {
        section = Section::Rows;
      } else if (head == "COLUMNS") {
        section = Section::Columns;
      } else if (head == "RHS") {
        section = Section::Rhs;
      } else if (head == "RANGES") {
        throw InputError("mps: RANGES are not supported");
      } else if (head == "BOUNDS") {
        section = Section::Bounds;
      } else if (head == "ENDATA") {
        section = Section::End;
      } else {
        throw InputError("mps: unknown section " + std::string(head));
      }
      continue;
    }
    switch (section) {
      case Section::Objsense:
        m.maximize = toks[0] == "MAX" || toks[0] == "MAXIMIZE";
        break;
      case Section::Rows: {
        if (toks.size() != 2) throw InputError("mps: bad ROWS line");
        if (toks[0] == "N") {
          if (objective_row.empty()) objective_row = std::string(toks[1]);
          break;
        }
        Constraint c;
        c.name = std::string(toks[1]);
        c.family = family_of(c.name);
        if (toks[0] == "L") {
          c.sense = Sense::LessEqual;
        } else if (toks[0] == "G") {
          c.sense = Sense::GreaterEqual;
        } else if (toks[0] == "E") {
          c.sense = Sense::Equal;
        } else {
          throw InputError("mps: bad row type " + std::string(toks[0]));
        }
        rows.emplace(c.name, m.constraints.size());
        m.constraints.push_back(std::move(c));
        break;
      }
      case Section::Columns: {
        if (toks.size() >= 3 && toks[1] == "'MARKER'") {
          in_int = toks[2] == "'INTORG'";
          break;
        }
        if (toks.size() != 3 && toks.size() != 5) throw InputError("mps: bad COLUMNS line");
        const std::size_t v = table.get(toks[0]);
        if (in_int) table.vars[v].integer = true;
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          const double coef = parse_number(toks[k + 1], "mps");
          if (toks[k] == objective_row) {
            if (coef != 0.0) entries.push_back({std::string_view::npos, {v, coef}});
            continue;
          }
          auto it = rows.find(std::string(toks[k]));
          if (it == rows.end()) throw InputError("mps: unknown row " + std::string(toks[k]));
          entries.push_back({it->second, {v, coef}});
        }
        break;
      }
      case Section::Rhs: {
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          if (toks[k] == objective_row) continue;
          auto it = rows.find(std::string(toks[k]));
          if (it == rows.end()) throw InputError("mps: unknown row " + std::string(toks[k]));
          m.constraints[it->second].rhs = parse_number(toks[k + 1], "mps");
        }
        break;
      }
      case Section::Bounds: {
        if (toks.size() < 3) throw InputError("mps: bad BOUNDS line");
        const std::size_t v = table.get(toks[2]);
        Variable& var = table.vars[v];
        const std::string_view type = toks[0];
        auto value = [&] {
          if (toks.size() < 4) throw InputError("mps: bound without value");
          return parse_number(toks[3], "mps");
        };
        if (type == "UP") {
          var.upper = value();
        } else if (type == "LO") {
          var.lower = value();
        } else if (type == "FX") {
          var.lower = var.upper = value();
        } else if (type == "FR") {
          var.lower = -kInf;
          var.upper = kInf;
        } else if (type == "MI") {
          var.lower = -kInf;
        } else if (type == "PL") {
          var.upper = kInf;
        } else if (type == "BV") {
          var.lower = 0.0;
          var.upper = 1.0;
          var.integer = true;
        } else {
          throw InputError("mps: unsupported bound type " + std::string(type));
        }
        break;
      }
      case Section::Ranges:
      case Section::None:
      case Section::End:
        throw InputError("mps: unexpected line");
    }
  }
  m.variables = std::move(table.vars);
  for (auto& [row, term] : entries) {
    if (row == std::string_view::npos) {
      m.objective.push_back(term);
    } else {
      m.constraints[row].terms.push_back(term);
    }
  }
  return m;
}

VariableValues parse_values(std::string_view text) {
  VariableValues out;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    const auto doc = detail::parse_json(text, "values");
    if (!doc.is_object()) throw InputError("values: expected a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (!it.value().is_number()) throw InputError("values: \"" + it.key() + "\" is not a number");
      out[it.key()] = it.value().get<double>();
    }
    return out;
  }
  std::size_t lineno = 0;
  for (std::string_view line : lines_of(text)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    // "name value", or an indexed "i name value [...]" line.
    if (toks.size() >= 3 && is_number(toks[0]) && !is_number(toks[1]) && is_number(toks[2])) {
      out[std::string(toks[1])] = parse_number(toks[2], "values");
    } else if (toks.size() >= 2 && is_number(toks[1])) {
      out[std::string(toks[0])] = parse_number(toks[1], "values");
    } else if (lineno == 1) {
      continue;  // solver status header
    } else {
      throw InputError("values: cannot read line " + std::to_string(lineno));
    }
  }
  return out;
}

std::string values_json(const VariableValues& values) {
  detail::json doc = detail::json::object();
  for (const auto& [name, v] : values) doc[name] = v;
  return detail::dump(doc);
}

}  // namespace sfc
