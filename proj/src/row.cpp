#include "entrocone/row.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace entrocone {

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::runtime_error("empty rational");
  size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string num, den = "1";
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
    num += text[pos++];
  if (num.empty()) throw std::runtime_error("malformed rational '" + text + "'");
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den.clear();
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos])))
      den += text[pos++];
    if (den.empty())
      throw std::runtime_error("malformed rational '" + text + "'");
  }
  if (pos != text.size())
    throw std::runtime_error("malformed rational '" + text + "'");
  const Int numerator(num);
  const Int denominator(den);
  if (denominator == 0) throw std::runtime_error("zero denominator");
  Rat value(numerator, denominator);
  value.canonicalize();
  return negative ? Rat(-value) : value;
}

std::string rat_to_string(const Rat& value) { return value.get_str(); }

const char* origin_name(RowOrigin origin) {
  switch (origin) {
    case RowOrigin::Submodularity: return "submodularity";
    case RowOrigin::Monotonicity: return "monotonicity";
    case RowOrigin::WeakMonotonicity: return "weak-monotonicity";
    case RowOrigin::Independence: return "independence";
    case RowOrigin::DataProcessing: return "data-processing";
    case RowOrigin::User: return "user";
    case RowOrigin::Derived: return "derived";
  }
  return "?";
}

Rat ConstraintRow::coeff(int coord) const {
  auto it = std::lower_bound(
      terms.begin(), terms.end(), coord,
      [](const std::pair<int, Rat>& t, int c) { return t.first < c; });
  if (it != terms.end() && it->first == coord) return it->second;
  return Rat(0);
}

ConstraintRow canonicalize_row(const ConstraintRow& row) {
  ConstraintRow out;
  out.rel = row.rel;
  out.origin = row.origin;
  out.terms = row.terms;
  std::sort(out.terms.begin(), out.terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Merge duplicates, drop zeros.
  std::vector<std::pair<int, Rat>> merged;
  for (auto& term : out.terms) {
    if (!merged.empty() && merged.back().first == term.first) {
      merged.back().second += term.second;
    } else {
      merged.push_back(term);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& t) { return t.second == 0; }),
               merged.end());
  out.terms = std::move(merged);
  if (out.terms.empty()) return out;

  // Scale to coprime integers.
  Int lcm_den = 1;
  for (const auto& [c, v] : out.terms) {
    Int den = v.get_den();
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
  }
  Int gcd_num = 0;
  std::vector<Int> nums;
  nums.reserve(out.terms.size());
  for (const auto& [c, v] : out.terms) {
    Int n = v.get_num() * (lcm_den / v.get_den());
    mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), n.get_mpz_t());
    nums.push_back(std::move(n));
  }
  const bool flip = out.rel == Relation::EqZero && nums.front() < 0;
  for (size_t i = 0; i < out.terms.size(); ++i) {
    Int v = nums[i] / gcd_num;
    out.terms[i].second = Rat(flip ? Int(-v) : v);
  }
  return out;
}

std::string row_key(const ConstraintRow& row) {
  ConstraintRow canon = canonicalize_row(row);
  std::string key = canon.rel == Relation::EqZero ? "=|" : ">|";
  for (const auto& [c, v] : canon.terms) {
    key += std::to_string(c);
    key += ':';
    key += v.get_str();
    key += ',';
  }
  return key;
}

ConstraintRow combine_rows(const ConstraintRow& a, const Rat& ca,
                           const ConstraintRow& b, const Rat& cb) {
  ConstraintRow out;
  out.rel = (a.rel == Relation::EqZero && b.rel == Relation::EqZero)
                ? Relation::EqZero
                : Relation::GeqZero;
  out.origin = RowOrigin::Derived;
  out.terms.reserve(a.terms.size() + b.terms.size());
  size_t i = 0, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j >= b.terms.size() ||
        (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
      Rat v = ca * a.terms[i].second;
      if (v != 0) out.terms.emplace_back(a.terms[i].first, std::move(v));
      ++i;
    } else if (i >= a.terms.size() || b.terms[j].first < a.terms[i].first) {
      Rat v = cb * b.terms[j].second;
      if (v != 0) out.terms.emplace_back(b.terms[j].first, std::move(v));
      ++j;
    } else {
      Rat v = ca * a.terms[i].second + cb * b.terms[j].second;
      if (v != 0) out.terms.emplace_back(a.terms[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

Rat dot(const ConstraintRow& row, const std::vector<Rat>& h) {
  Rat acc = 0;
  for (const auto& [c, v] : row.terms) acc += v * h.at(static_cast<size_t>(c));
  return acc;
}

void TermBuilder::add_entropy(Mask s, const Rat& coeff) {
  if (s == 0 || coeff == 0) return;
  acc_[s] += coeff;
  if (acc_[s] == 0) acc_.erase(s);
}

void TermBuilder::add_conditional(Mask s, Mask t, const Rat& coeff) {
  add_entropy(s | t, coeff);
  add_entropy(t, -coeff);
}

void TermBuilder::add_mutual(Mask a, Mask b, Mask z, const Rat& coeff) {
  add_entropy(a | z, coeff);
  add_entropy(b | z, coeff);
  add_entropy(a | b | z, -coeff);
  add_entropy(z, -coeff);
}

bool TermBuilder::empty() const { return acc_.empty(); }

bool TermBuilder::supported(const SubsetIndex& index) const {
  for (const auto& [mask, coeff] : acc_) {
    if (!index.contains(mask)) return false;
  }
  return true;
}

ConstraintRow TermBuilder::to_row(const SubsetIndex& index, Relation rel,
                                  RowOrigin origin) const {
  ConstraintRow row;
  row.rel = rel;
  row.origin = origin;
  row.terms.reserve(acc_.size());
  for (const auto& [mask, coeff] : acc_) {
    row.terms.emplace_back(index.id(mask), coeff);
  }
  std::sort(row.terms.begin(), row.terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return row;
}

std::string row_to_text(const ConstraintRow& row, const SubsetIndex& index) {
  if (row.terms.empty())
    return row.rel == Relation::EqZero ? "0 = 0" : "0 >= 0";
  std::string out;
  bool first = true;
  for (const auto& [c, v] : row.terms) {
    Rat a = abs(v);
    if (first) {
      if (v < 0) out += "-";
      first = false;
    } else {
      out += v < 0 ? " - " : " + ";
    }
    if (a != 1) {
      out += a.get_str();
      out += ' ';
    }
    out += "H(" + index.label(index.subset(c)) + ")";
  }
  out += row.rel == Relation::EqZero ? " = 0" : " >= 0";
  return out;
}

namespace {

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      if (cur.empty()) throw std::runtime_error("empty name in set");
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

ConstraintRow row_from_text(const std::string& text, const SubsetIndex& index) {
  TermBuilder builder;
  Relation rel = Relation::GeqZero;
  size_t pos = 0;
  const auto skip_space = [&] {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  bool done = false;
  while (!done) {
    skip_space();
    if (pos >= text.size()) throw std::runtime_error("missing relation in row");
    Rat sign = 1;
    if (text[pos] == '+') {
      ++pos;
    } else if (text[pos] == '-') {
      sign = -1;
      ++pos;
    }
    skip_space();
    // Optional rational coefficient.
    std::string coef_text;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '/')) {
      coef_text += text[pos++];
    }
    Rat coeff = coef_text.empty() ? Rat(1) : parse_rational(coef_text);
    skip_space();
    if (coef_text == "0" && (pos >= text.size() || text[pos] != 'H')) {
      // Bare zero term ("0 >= 0").
    } else {
      if (pos >= text.size() || text[pos] != 'H')
        throw std::runtime_error("expected H(...) in row '" + text + "'");
      ++pos;
      skip_space();
      if (pos >= text.size() || text[pos] != '(')
        throw std::runtime_error("expected '(' in row");
      const size_t close = text.find(')', pos);
      if (close == std::string::npos)
        throw std::runtime_error("unbalanced parenthesis in row");
      const std::string inner = text.substr(pos + 1, close - pos - 1);
      pos = close + 1;
      builder.add_entropy(index.mask_of(split_names(inner)), sign * coeff);
    }
    skip_space();
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) continue;
    if (pos + 1 < text.size() && text[pos] == '>' && text[pos + 1] == '=') {
      rel = Relation::GeqZero;
      pos += 2;
    } else if (pos < text.size() && text[pos] == '=') {
      rel = Relation::EqZero;
      pos += 1;
    } else {
      throw std::runtime_error("expected '>= 0' or '= 0' in row '" + text +
                               "'");
    }
    skip_space();
    if (pos >= text.size() || text[pos] != '0')
      throw std::runtime_error("row right-hand side must be 0");
    ++pos;
    skip_space();
    if (pos != text.size()) throw std::runtime_error("trailing text in row");
    done = true;
  }
  return canonicalize_row(builder.to_row(index, rel, RowOrigin::User));
}

void write_system(std::ostream& out, const ConstraintSystem& system) {
  out << "variables";
  for (const auto& name : system.index.names()) out << ' ' << name;
  out << '\n';
  out << "coordinates " << system.index.size() << '\n';
  for (int i = 0; i < system.index.size(); ++i) {
    out << "  h" << i << " = H(" << system.index.label(system.index.subset(i))
        << ")\n";
  }
  out << "rows " << system.rows.size() << '\n';
  for (const auto& row : system.rows) {
    out << "  " << row_to_text(row, system.index) << "  # "
        << origin_name(row.origin) << '\n';
  }
}

ConstraintSystem read_system(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("variables", 0) != 0)
    throw std::runtime_error("system dump: missing variables line");
  std::istringstream head(line);
  std::string tok;
  head >> tok;
  std::vector<std::string> names;
  while (head >> tok) names.push_back(tok);

  if (!std::getline(in, line) || line.rfind("coordinates", 0) != 0)
    throw std::runtime_error("system dump: missing coordinates line");
  int ncoords = std::stoi(line.substr(std::string("coordinates").size()));
  SubsetIndex probe(names, {});
  std::vector<Mask> subsets;
  subsets.reserve(static_cast<size_t>(ncoords));
  for (int i = 0; i < ncoords; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("system dump: truncated coordinate list");
    const size_t open = line.find("H(");
    const size_t close = line.rfind(')');
    if (open == std::string::npos || close == std::string::npos)
      throw std::runtime_error("system dump: malformed coordinate line");
    const std::string inner = line.substr(open + 2, close - open - 2);
    subsets.push_back(probe.mask_of(split_names(inner)));
  }
  SubsetIndex index(names, subsets);

  if (!std::getline(in, line) || line.rfind("rows", 0) != 0)
    throw std::runtime_error("system dump: missing rows line");
  int nrows = std::stoi(line.substr(std::string("rows").size()));
  ConstraintSystem system{index, {}};
  system.rows.reserve(static_cast<size_t>(nrows));
  for (int i = 0; i < nrows; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("system dump: truncated row list");
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    system.rows.push_back(row_from_text(line, index));
  }
  return system;
}

}  // namespace entrocone
