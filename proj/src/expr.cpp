#include "entrocone/expr.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "entrocone/model.hpp"

namespace entrocone {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out += ",";
    out += names[i];
  }
  return out;
}

}  // namespace

std::string ExprTerm::text() const {
  std::string atom;
  switch (kind) {
    case Kind::Entropy:
      atom = "H(" + join(s) + ")";
      break;
    case Kind::Conditional:
      atom = "H(" + join(s) + "|" + join(t) + ")";
      break;
    case Kind::Mutual:
      atom = "I(" + join(s) + ":" + join(t) + ")";
      break;
    case Kind::ConditionalMutual:
      atom = "I(" + join(s) + ":" + join(t) + "|" + join(u) + ")";
      break;
  }
  if (coeff == 1) return atom;
  if (coeff == -1) return "-" + atom;
  return rat_to_string(coeff) + " " + atom;
}

std::string LinearExpression::text() const {
  auto side = [](const std::vector<ExprTerm>& terms) {
    if (terms.empty()) return std::string("0");
    std::string out;
    for (size_t i = 0; i < terms.size(); ++i) {
      std::string t = terms[i].text();
      if (i == 0) {
        out = t;
        continue;
      }
      if (!t.empty() && t[0] == '-') {
        out += " - " + t.substr(1);
      } else {
        out += " + " + t;
      }
    }
    return out;
  };
  const char* rel_text = rel == RelOp::Le ? "<=" : rel == RelOp::Ge ? ">=" : "=";
  return side(lhs) + " " + rel_text + " " + side(rhs);
}

namespace {

class ExprCursor {
 public:
  explicit ExprCursor(const std::string& text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  char get() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    return text_[pos_++];
  }
  void expect(char c) {
    const char got = get();
    if (got != c)
      fail(std::string("expected '") + c + "', found '" + got + "'");
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(1, static_cast<int>(pos_) + 1, message);
  }

  // name := [A-Za-z_][A-Za-z0-9_']*
  std::string name() {
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')
        ++pos_;
      else
        break;
    }
    if (start == pos_) fail("expected a variable name");
    if (std::isdigit(static_cast<unsigned char>(text_[start])))
      fail("variable names must not start with a digit");
    return text_.substr(start, pos_ - start);
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> out;
    out.push_back(name());
    while (peek() == ',') {
      get();
      out.push_back(name());
    }
    return out;
  }

  bool at_number() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c));
  }

  Rat number() {
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '/'))
      ++pos_;
    if (start == pos_) fail("expected a number");
    return parse_rational(text_.substr(start, pos_ - start));
  }

  size_t position() const { return pos_; }

 private:
  const std::string& text_;
  size_t pos_ = 0;
};

ExprTerm parse_atom(ExprCursor& cur) {
  ExprTerm term;
  const char head = cur.get();
  if (head != 'H' && head != 'I') cur.fail("expected H(...) or I(...)");
  cur.expect('(');
  term.s = cur.name_list();
  if (head == 'H') {
    if (cur.peek() == '|') {
      cur.get();
      term.t = cur.name_list();
      term.kind = ExprTerm::Kind::Conditional;
    } else {
      term.kind = ExprTerm::Kind::Entropy;
    }
  } else {
    cur.expect(':');
    term.t = cur.name_list();
    if (cur.peek() == '|') {
      cur.get();
      term.u = cur.name_list();
      term.kind = ExprTerm::Kind::ConditionalMutual;
    } else {
      term.kind = ExprTerm::Kind::Mutual;
    }
  }
  cur.expect(')');
  return term;
}

std::vector<ExprTerm> parse_sum(ExprCursor& cur) {
  std::vector<ExprTerm> terms;
  bool first = true;
  while (true) {
    Rat sign = 1;
    char c = cur.peek();
    if (c == '+' || c == '-') {
      cur.get();
      if (c == '-') sign = -1;
    } else if (!first) {
      break;
    }
    ExprTerm term;
    if (cur.at_number()) {
      const Rat value = cur.number();
      if (cur.peek() == '*') cur.get();
      const char nxt = cur.peek();
      if (nxt == 'H' || nxt == 'I') {
        term = parse_atom(cur);
        term.coeff = sign * value;
        terms.push_back(std::move(term));
      } else if (value == 0) {
        // A bare 0 contributes nothing.
      } else {
        cur.fail("nonzero constant terms are not allowed");
      }
    } else {
      term = parse_atom(cur);
      term.coeff = sign;
      terms.push_back(std::move(term));
    }
    first = false;
    const char nxt = cur.peek();
    if (nxt != '+' && nxt != '-') break;
  }
  return terms;
}

}  // namespace

LinearExpression parse_inequality(const std::string& text) {
  ExprCursor cur(text);
  LinearExpression expr;
  expr.lhs = parse_sum(cur);
  const char c = cur.get();
  if (c == '<') {
    cur.expect('=');
    expr.rel = RelOp::Le;
  } else if (c == '>') {
    cur.expect('=');
    expr.rel = RelOp::Ge;
  } else if (c == '=') {
    if (cur.peek() == '=') cur.get();
    expr.rel = RelOp::Eq;
  } else {
    cur.fail("expected <=, >= or =");
  }
  expr.rhs = parse_sum(cur);
  if (!cur.done()) cur.fail("trailing input after the inequality");
  return expr;
}

namespace {

void accumulate(TermBuilder& builder, const std::vector<ExprTerm>& terms,
                const SubsetIndex& index, const Rat& scale) {
  auto mask_of = [&](const std::vector<std::string>& names) {
    Mask m = 0;
    for (const auto& name : names) {
      const int bit = index.bit_of(name);
      if (bit < 0)
        throw std::runtime_error("unknown variable '" + name + "'");
      m |= Mask{1} << bit;
    }
    return m;
  };
  for (const auto& term : terms) {
    const Rat c = term.coeff * scale;
    switch (term.kind) {
      case ExprTerm::Kind::Entropy:
        builder.add_entropy(mask_of(term.s), c);
        break;
      case ExprTerm::Kind::Conditional:
        builder.add_conditional(mask_of(term.s), mask_of(term.t), c);
        break;
      case ExprTerm::Kind::Mutual:
        builder.add_mutual(mask_of(term.s), mask_of(term.t), 0, c);
        break;
      case ExprTerm::Kind::ConditionalMutual:
        builder.add_mutual(mask_of(term.s), mask_of(term.t), mask_of(term.u),
                           c);
        break;
    }
  }
}

}  // namespace

ConstraintRow to_row(const LinearExpression& expr, const SubsetIndex& index) {
  TermBuilder builder;
  // Normalized orientation: Ge/Eq keep lhs - rhs, Le flips to rhs - lhs,
  // so GeqZero rows always state the claimed inequality.
  const Rat lhs_scale = expr.rel == RelOp::Le ? -1 : 1;
  accumulate(builder, expr.lhs, index, lhs_scale);
  accumulate(builder, expr.rhs, index, -lhs_scale);
  const Relation rel =
      expr.rel == RelOp::Eq ? Relation::EqZero : Relation::GeqZero;
  return canonicalize_row(builder.to_row(index, rel, RowOrigin::User));
}

std::vector<Candidate> to_candidates(const LinearExpression& expr,
                                     const SubsetIndex& index) {
  const ConstraintRow row = to_row(expr, index);
  std::vector<Candidate> out;
  Candidate c;
  c.terms = row.terms;
  out.push_back(c);
  if (expr.rel == RelOp::Eq) {
    for (auto& [coord, val] : c.terms) val = -val;
    out.push_back(std::move(c));
  }
  return out;
}

double eval_slack(const LinearExpression& expr, const SubsetIndex& index,
                  const std::vector<double>& h) {
  if (h.size() != static_cast<size_t>(index.size()))
    throw std::runtime_error("eval_slack: vector length mismatch");
  TermBuilder builder;
  accumulate(builder, expr.lhs, index, 1);
  accumulate(builder, expr.rhs, index, -1);
  double value = 0;
  for (const auto& [mask, coeff] : builder.terms()) {
    if (coeff == 0 || mask == 0) continue;
    const int id = index.find(mask);
    if (id < 0)
      throw std::runtime_error("eval_slack: no coordinate for subset " +
                               index.label(mask));
    value += coeff.get_d() * h[static_cast<size_t>(id)];
  }
  if (expr.rel == RelOp::Eq) return std::abs(value);
  if (expr.rel == RelOp::Ge) return -value;
  return value;
}

}  // namespace entrocone
