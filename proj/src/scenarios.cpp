#include "entrocone/scenarios.hpp"

#include <sstream>
#include <stdexcept>

namespace entrocone {

namespace {

struct Builder {
  CausalStructure s;

  int sys(const std::string& name, SystemKind kind) {
    s.systems.push_back({name, kind});
    return s.n() - 1;
  }
  void prepare(std::vector<int> ids) { s.preparations.push_back({std::move(ids)}); }
  int op(const std::string& name, std::vector<int> in, std::vector<int> out) {
    s.operations.push_back({name, std::move(in), std::move(out)});
    return static_cast<int>(s.operations.size()) - 1;
  }
  void exclusive(std::vector<int> ops) {
    s.exclusivity.push_back({std::move(ops)});
  }
  void marginal(std::vector<int> ids) {
    s.marginal_contexts.push_back(std::move(ids));
  }

  CausalStructure take() {
    const ValidationReport report = validate(s);
    if (!report.ok())
      throw std::runtime_error("scenario construction: " + report.summary());
    return std::move(s);
  }
};

}  // namespace

CausalStructure build_triangle(bool classical_roots) {
  const SystemKind root =
      classical_roots ? SystemKind::Classical : SystemKind::Quantum;
  Builder b;
  const int a1 = b.sys("A1", root);
  const int b1 = b.sys("B1", root);
  const int a2 = b.sys("A2", root);
  const int c1 = b.sys("C1", root);
  const int b2 = b.sys("B2", root);
  const int c2 = b.sys("C2", root);
  const int a = b.sys("A", SystemKind::Classical);
  const int bb = b.sys("B", SystemKind::Classical);
  const int c = b.sys("C", SystemKind::Classical);
  b.prepare({a1, b1});
  b.prepare({a2, c1});
  b.prepare({b2, c2});
  b.op("A_out", {a1, a2}, {a});
  b.op("B_out", {b1, b2}, {bb});
  b.op("C_out", {c1, c2}, {c});
  b.marginal({a, bb, c});
  return b.take();
}

CausalStructure build_ic(int n, IcVariant variant, bool restricted_marginal) {
  if (n < 1) throw std::runtime_error("information causality: need n >= 1");
  if (n > 8) throw std::runtime_error("information causality: n too large");
  Builder b;
  std::vector<int> xs;
  for (int i = 1; i <= n; ++i)
    xs.push_back(b.sys("X" + std::to_string(i), SystemKind::Classical));
  const bool quantum = variant != IcVariant::Classical;
  int res_a = -1, res_b = -1, res_l = -1;
  if (quantum) {
    res_a = b.sys("A", SystemKind::Quantum);
    res_b = b.sys("B", SystemKind::Quantum);
  } else {
    res_l = b.sys("L", SystemKind::Classical);
  }
  const int m = b.sys("M", variant == IcVariant::DenseCoding
                               ? SystemKind::Quantum
                               : SystemKind::Classical);
  std::vector<int> ys;
  for (int i = 1; i <= n; ++i)
    ys.push_back(b.sys("Y" + std::to_string(i), SystemKind::Classical));

  b.prepare(xs);
  if (quantum)
    b.prepare({res_a, res_b});
  else
    b.prepare({res_l});

  std::vector<int> enc_in = xs;
  enc_in.push_back(quantum ? res_a : res_l);
  b.op("enc", std::move(enc_in), {m});
  std::vector<int> decoders;
  for (int i = 0; i < n; ++i) {
    decoders.push_back(b.op("dec" + std::to_string(i + 1),
                            {m, quantum ? res_b : res_l}, {ys[static_cast<size_t>(i)]}));
  }
  if (quantum && n > 1) b.exclusive(decoders);

  if (restricted_marginal) {
    for (int i = 0; i < n; ++i)
      b.marginal({xs[static_cast<size_t>(i)], ys[static_cast<size_t>(i)]});
    b.marginal({m});
  } else if (variant == IcVariant::DenseCoding) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> ctx = xs;
      ctx.push_back(ys[static_cast<size_t>(i)]);
      b.marginal(std::move(ctx));
    }
    b.marginal({m});
  } else {
    for (int i = 0; i < n; ++i) {
      std::vector<int> ctx = xs;
      ctx.push_back(m);
      ctx.push_back(ys[static_cast<size_t>(i)]);
      b.marginal(std::move(ctx));
    }
  }
  return b.take();
}

CausalStructure build_network(int n, int m, bool classical_roots) {
  if (n < 2 || m < 1 || m > n)
    throw std::runtime_error("network: bad shape");
  if (n > 9) throw std::runtime_error("network: at most 9 observers");
  const SystemKind root =
      classical_roots ? SystemKind::Classical : SystemKind::Quantum;
  Builder b;

  // Shares first: one preparation per m-subset, ascending; observer V_i
  // consumes the share named after it.
  std::vector<std::vector<int>> inputs(static_cast<size_t>(n));
  std::vector<int> pick(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) pick[static_cast<size_t>(j)] = j;
  while (true) {
    std::string tag = "R";
    for (int member : pick) tag += std::to_string(member + 1);
    std::vector<int> shares;
    for (int member : pick) {
      const int id = b.sys(tag + "_" + std::to_string(member + 1), root);
      shares.push_back(id);
      inputs[static_cast<size_t>(member)].push_back(id);
    }
    b.prepare(std::move(shares));
    int j = m - 1;
    while (j >= 0 && pick[static_cast<size_t>(j)] == n - m + j) --j;
    if (j < 0) break;
    ++pick[static_cast<size_t>(j)];
    for (int t = j + 1; t < m; ++t)
      pick[static_cast<size_t>(t)] = pick[static_cast<size_t>(t - 1)] + 1;
  }

  std::vector<int> outs;
  for (int i = 0; i < n; ++i)
    outs.push_back(b.sys("V" + std::to_string(i + 1), SystemKind::Classical));
  for (int i = 0; i < n; ++i) {
    b.op("V" + std::to_string(i + 1) + "_out",
         inputs[static_cast<size_t>(i)], {outs[static_cast<size_t>(i)]});
  }
  b.marginal(outs);
  return b.take();
}

JointDistribution witness_distribution(int k) {
  JointDistribution dist;
  switch (k) {
    case 1: {
      // A a fair coin, B and C constant.
      dist.vars = {{"A", 2}, {"B", 2}, {"C", 2}};
      dist.p.assign(8, Rat(0));
      dist.p[dist.offset({0, 0, 0})] = Rat(1, 2);
      dist.p[dist.offset({1, 0, 0})] = Rat(1, 2);
      return dist;
    }
    case 2: {
      // A and B perfectly correlated fair coins, C constant.
      dist.vars = {{"A", 2}, {"B", 2}, {"C", 2}};
      dist.p.assign(8, Rat(0));
      dist.p[dist.offset({0, 0, 0})] = Rat(1, 2);
      dist.p[dist.offset({1, 1, 0})] = Rat(1, 2);
      return dist;
    }
    case 3: {
      // Uniform even-parity bits.
      dist.vars = {{"A", 2}, {"B", 2}, {"C", 2}};
      dist.p.assign(8, Rat(0));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          dist.p[dist.offset({a, b, a ^ b})] = Rat(1, 4);
      return dist;
    }
    case 4: {
      // Shared uniform bit s plus private uniform bits: A = (s, x),
      // B = (s, y1, y2), C = (s, z1, z2); 64 equiprobable points.
      dist.vars = {{"A", 4}, {"B", 8}, {"C", 8}};
      dist.p.assign(4 * 8 * 8, Rat(0));
      for (int s = 0; s < 2; ++s)
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 4; ++y)
            for (int z = 0; z < 4; ++z)
              dist.p[dist.offset({2 * s + x, 4 * s + y, 4 * s + z})] =
                  Rat(1, 64);
      return dist;
    }
    default:
      throw std::runtime_error("witness index must lie in 1..4");
  }
}

namespace {

LinearExpression parse_named(const std::string& text) {
  return parse_inequality(text);
}

std::string factorial_ratio(int m) {
  // (m! - 2) / (m-1)! as a rational literal.
  Rat fact(1);
  for (int j = 2; j <= m; ++j) fact *= j;
  Rat fact1(1);
  for (int j = 2; j <= m - 1; ++j) fact1 *= j;
  return rat_to_string((fact - 2) / fact1);
}

}  // namespace

NamedInequality ic_original(int n) {
  if (n < 1) throw std::runtime_error("IC_original: need n >= 1");
  std::string lhs;
  for (int s = 1; s <= n; ++s) {
    if (s > 1) lhs += " + ";
    lhs += "I(X" + std::to_string(s) + ":Y" + std::to_string(s) + ")";
  }
  return {"IC_original(" + std::to_string(n) + ")",
          parse_named(lhs + " <= H(M)")};
}

NamedInequality ic_marginal_nontrivial(int s) {
  if (s < 1) throw std::runtime_error("IC_marginal: need s >= 1");
  const std::string i = std::to_string(s);
  return {"IC_marginal(" + i + ")",
          parse_named("I(X" + i + ":Y" + i + ") <= H(M)")};
}

NamedInequality ic_tight() {
  return {"IC_tight",
          parse_named(
              "I(X1:Y1,M) + I(X2:Y2,M) + I(X1:X2|Y2,M) <= H(M) + I(X1:X2)")};
}

NamedInequality ic_tight_n(int n) {
  if (n < 2) throw std::runtime_error("IC_tight: need n >= 2");
  std::string lhs, rhs = "H(M)";
  std::string all;
  for (int i = 1; i <= n; ++i) {
    const std::string xi = "X" + std::to_string(i);
    if (i > 1) {
      lhs += " + ";
      all += ",";
    }
    lhs += "I(" + xi + ":Y" + std::to_string(i) + ",M)";
    all += xi;
    rhs += " + H(" + xi + ")";
  }
  for (int i = 2; i <= n; ++i) {
    lhs += " + I(X1:X" + std::to_string(i) + "|Y" + std::to_string(i) + ",M)";
  }
  rhs += " - H(" + all + ")";
  return {"IC_tight(" + std::to_string(n) + ")", parse_named(lhs + " <= " + rhs)};
}

NamedInequality ic_dense(int n) {
  if (n < 2) throw std::runtime_error("IC_dense: need n >= 2");
  std::string lhs, rhs = "2 H(M)";
  std::string all;
  for (int i = 1; i <= n; ++i) {
    const std::string xi = "X" + std::to_string(i);
    if (i > 1) {
      lhs += " + ";
      all += ",";
    }
    lhs += "I(" + xi + ":Y" + std::to_string(i) + ")";
    all += xi;
    rhs += " + H(" + xi + ")";
  }
  for (int i = 2; i <= n; ++i) {
    lhs += " + I(X1:X" + std::to_string(i) + "|Y" + std::to_string(i) + ")";
  }
  rhs += " - H(" + all + ")";
  return {"IC_dense(" + std::to_string(n) + ")", parse_named(lhs + " <= " + rhs)};
}

NamedInequality monogamy(int n, int j) {
  if (n < 2 || j < 1 || j > n)
    throw std::runtime_error("monogamy: need n >= 2 and 1 <= j <= n");
  std::string lhs;
  const std::string vj = "V" + std::to_string(j);
  bool first = true;
  for (int i = 1; i <= n; ++i) {
    if (i == j) continue;
    if (!first) lhs += " + ";
    lhs += "I(V" + std::to_string(i) + ":" + vj + ")";
    first = false;
  }
  return {"monogamy(" + std::to_string(n) + "," + std::to_string(j) + ")",
          parse_named(lhs + " <= H(" + vj + ")")};
}

NamedInequality triangle_ineq(int k) {
  switch (k) {
    case 1:
      return {"triangle_1", parse_named("I(A:B) + I(A:C) <= H(A)")};
    case 2:
      return {"triangle_2",
              parse_named("3 H(A) + 3 H(B) + 3 H(C) + H(A,B,C) <= "
                          "3 H(A,B) + 2 H(A,C) + 2 H(B,C)")};
    case 3:
      return {"triangle_3",
              parse_named("5 H(A) + 5 H(B) + 5 H(C) + 2 H(A,B,C) <= "
                          "4 H(A,B) + 4 H(A,C) + 4 H(B,C)")};
    default:
      throw std::runtime_error("triangle inequality index must lie in 1..3");
  }
}

NamedInequality network_bound(int m) {
  if (m < 2) throw std::runtime_error("network_bound: need m >= 2");
  std::string lhs;
  for (int k = 2; k <= m + 1; ++k) {
    if (k > 2) lhs += " + ";
    lhs += "I(V1:V" + std::to_string(k) + ")";
  }
  const std::string coeff = factorial_ratio(m);
  const std::string rhs = coeff == "0" ? "0" : coeff + " H(V1)";
  return {"network_bound(" + std::to_string(m) + ")",
          parse_named(lhs + " <= " + rhs)};
}

namespace {

// "name", "name(3)" or "name(3,1)".
bool split_call(const std::string& text, std::string& name,
                std::vector<int>& args) {
  const size_t open = text.find('(');
  if (open == std::string::npos) {
    name = text;
    return true;
  }
  if (text.back() != ')') return false;
  name = text.substr(0, open);
  std::string body = text.substr(open + 1, text.size() - open - 2);
  std::istringstream in(body);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      size_t used = 0;
      const int value = std::stoi(part, &used);
      if (used != part.size()) return false;
      args.push_back(value);
    } catch (const std::exception&) {
      return false;
    }
  }
  return !args.empty();
}

}  // namespace

std::optional<NamedInequality> named_inequality(const std::string& text) {
  std::string name;
  std::vector<int> args;
  if (!split_call(text, name, args)) return std::nullopt;
  try {
    if (name == "IC_original" && args.size() == 1) return ic_original(args[0]);
    if (name == "IC_marginal" && args.size() == 1)
      return ic_marginal_nontrivial(args[0]);
    if (name == "IC_tight" && args.empty()) return ic_tight();
    if (name == "IC_tight" && args.size() == 1) return ic_tight_n(args[0]);
    if (name == "IC_dense" && args.size() == 1) return ic_dense(args[0]);
    if (name == "monogamy" && args.size() == 2)
      return monogamy(args[0], args[1]);
    if (name == "triangle_1" && args.empty()) return triangle_ineq(1);
    if (name == "triangle_2" && args.empty()) return triangle_ineq(2);
    if (name == "triangle_3" && args.empty()) return triangle_ineq(3);
    if (name == "network_bound" && args.size() == 1)
      return network_bound(args[0]);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::string> named_inequality_help() {
  return {
      "IC_original(n)     sum_s I(X_s:Y_s) <= H(M)",
      "IC_marginal(s)     I(X_s:Y_s) <= H(M), restricted-scenario facet",
      "IC_tight           two-receiver bound with message-side terms",
      "IC_tight(n)        n-receiver generalization",
      "IC_dense(n)        quantum-message variant with doubled H(M)",
      "monogamy(n,j)      sum_{i!=j} I(V_i:V_j) <= H(V_j)",
      "triangle_1..3      marginal facets over A, B, C",
      "network_bound(m)   sum_k I(V1:V_k) <= (m - 2/(m-1)!) H(V1)",
  };
}

std::optional<CausalStructure> named_scenario(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == '-') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  auto as_int = [](const std::string& s, int& out) {
    try {
      size_t used = 0;
      out = std::stoi(s, &used);
      return used == s.size();
    } catch (const std::exception&) {
      return false;
    }
  };
  try {
    if (parts[0] == "triangle") {
      if (parts.size() == 1) return build_triangle(false);
      if (parts.size() == 2 && parts[1] == "classical")
        return build_triangle(true);
      return std::nullopt;
    }
    if (parts[0] == "ic" && parts.size() >= 2) {
      int n = 0;
      if (!as_int(parts[1], n)) return std::nullopt;
      if (parts.size() == 2) return build_ic(n, IcVariant::Quantum);
      if (parts.size() == 3 && parts[2] == "classical")
        return build_ic(n, IcVariant::Classical);
      if (parts.size() == 3 && parts[2] == "restricted")
        return build_ic(n, IcVariant::Quantum, true);
      if (parts.size() == 3 && parts[2] == "dense")
        return build_ic(n, IcVariant::DenseCoding);
      if (parts.size() == 4 && parts[2] == "classical" &&
          parts[3] == "restricted")
        return build_ic(n, IcVariant::Classical, true);
      return std::nullopt;
    }
    if (parts[0] == "network" && parts.size() >= 3) {
      int n = 0, m = 0;
      if (!as_int(parts[1], n) || !as_int(parts[2], m)) return std::nullopt;
      if (parts.size() == 3) return build_network(n, m, false);
      if (parts.size() == 4 && parts[3] == "classical")
        return build_network(n, m, true);
      return std::nullopt;
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::string> named_scenario_help() {
  return {
      "triangle[-classical]       three pairwise shared roots, observers A,B,C",
      "ic-<n>[-classical]         n-receiver coding scenario",
      "ic-<n>[-classical]-restricted  per-pair marginal contexts plus {M}",
      "ic-<n>-dense               quantum message variant",
      "network-<n>-<m>[-classical] complete m-uniform ancestor hypergraph",
  };
}

}  // namespace entrocone
