#include "entrocone/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace entrocone {

std::size_t JointDistribution::states() const {
  std::size_t n = 1;
  for (const auto& [name, card] : vars) {
    (void)name;
    n *= static_cast<std::size_t>(card);
  }
  return n;
}

std::size_t JointDistribution::offset(const std::vector<int>& outcome) const {
  if (outcome.size() != vars.size())
    throw std::runtime_error("distribution: outcome arity mismatch");
  std::size_t off = 0;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (outcome[i] < 0 || outcome[i] >= vars[i].second)
      throw std::runtime_error("distribution: outcome out of range for '" +
                               vars[i].first + "'");
    off = off * static_cast<std::size_t>(vars[i].second) +
          static_cast<std::size_t>(outcome[i]);
  }
  return off;
}

void JointDistribution::check() const {
  if (vars.empty()) throw std::runtime_error("distribution: no variables");
  for (const auto& [name, card] : vars) {
    if (card < 1)
      throw std::runtime_error("distribution: cardinality of '" + name +
                               "' must be at least 1");
  }
  if (p.size() != states())
    throw std::runtime_error("distribution: probability table has " +
                             std::to_string(p.size()) + " entries, expected " +
                             std::to_string(states()));
  Rat total(0);
  for (const Rat& v : p) {
    if (v < 0) throw std::runtime_error("distribution: negative probability");
    total += v;
  }
  if (total != 1)
    throw std::runtime_error("distribution: probabilities sum to " +
                             rat_to_string(total) + ", expected 1");
}

namespace {

// Iterates outcomes row-major (last variable fastest).
bool next_outcome(std::vector<int>& outcome,
                  const std::vector<std::pair<std::string, int>>& vars) {
  for (size_t i = outcome.size(); i-- > 0;) {
    if (++outcome[i] < vars[i].second) return true;
    outcome[i] = 0;
  }
  return false;
}

}  // namespace

JointDistribution marginal(const JointDistribution& dist, Mask keep) {
  const int arity = dist.arity();
  if (keep >> arity)
    throw std::runtime_error("marginal: mask names a missing variable");
  JointDistribution out;
  std::vector<int> kept;
  for (int i = 0; i < arity; ++i) {
    if (keep & (Mask{1} << i)) {
      out.vars.push_back(dist.vars[static_cast<size_t>(i)]);
      kept.push_back(i);
    }
  }
  if (kept.empty()) throw std::runtime_error("marginal: empty mask");
  out.p.assign(out.states(), Rat(0));
  std::vector<int> outcome(static_cast<size_t>(arity), 0);
  std::size_t off = 0;
  do {
    std::size_t reduced = 0;
    for (size_t j = 0; j < kept.size(); ++j) {
      reduced = reduced * static_cast<std::size_t>(
                              out.vars[j].second) +
                static_cast<std::size_t>(outcome[static_cast<size_t>(kept[j])]);
    }
    out.p[reduced] += dist.p[off];
    ++off;
  } while (next_outcome(outcome, dist.vars));
  return out;
}

double shannon_entropy(const JointDistribution& dist, Mask keep) {
  const JointDistribution m = marginal(dist, keep);
  double h = 0;
  for (const Rat& v : m.p) {
    if (v == 0) continue;
    const double p = v.get_d();
    h -= p * std::log2(p);
  }
  return h;
}

EntropyVector entropy_vector(const JointDistribution& dist,
                             const std::vector<Mask>& contexts) {
  std::set<Mask> subsets;
  for (Mask context : contexts) {
    if (context >> dist.arity())
      throw std::runtime_error("entropy_vector: context names a missing variable");
    for (Mask s = context; s; s = (s - 1) & context) subsets.insert(s);
  }
  if (subsets.empty())
    throw std::runtime_error("entropy_vector: no nonempty context");
  std::vector<std::string> names;
  for (const auto& [name, card] : dist.vars) {
    (void)card;
    names.push_back(name);
  }
  SubsetIndex index(names, {subsets.begin(), subsets.end()});
  EntropyVector out{index, {}};
  out.h.reserve(static_cast<size_t>(index.size()));
  for (int id = 0; id < index.size(); ++id)
    out.h.push_back(shannon_entropy(dist, index.subset(id)));
  return out;
}

EntropyVector entropy_vector_full(const JointDistribution& dist) {
  if (dist.arity() > 20)
    throw std::runtime_error("entropy_vector_full: too many variables");
  return entropy_vector(dist, {(Mask{1} << dist.arity()) - 1});
}

JointDistribution dist_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  JointDistribution dist;
  for (const auto& item : doc.at("vars")) {
    dist.vars.emplace_back(item.at(0).get<std::string>(), item.at(1).get<int>());
  }
  std::function<void(const nlohmann::json&)> flatten =
      [&](const nlohmann::json& node) {
        if (node.is_array()) {
          for (const auto& child : node) flatten(child);
        } else if (node.is_string()) {
          dist.p.push_back(parse_rational(node.get<std::string>()));
        } else if (node.is_number_integer()) {
          dist.p.push_back(Rat(node.get<long>()));
        } else {
          throw std::runtime_error(
              "distribution: probabilities must be rational strings or integers");
        }
      };
  flatten(doc.at("p"));
  dist.check();
  return dist;
}

std::string dist_to_json(const JointDistribution& dist) {
  nlohmann::json doc;
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& [name, card] : dist.vars) vars.push_back({name, card});
  doc["vars"] = std::move(vars);
  nlohmann::json p = nlohmann::json::array();
  for (const Rat& v : dist.p) p.push_back(rat_to_string(v));
  doc["p"] = std::move(p);
  return doc.dump(2);
}

JointDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return dist_from_json(buffer.str());
}

// ---------------------------------------------------------------------------
// No-signalling boxes and the coding protocol.

void Box::check() const {
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      Rat total(0);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if (p[x][y][a][b] < 0)
            throw std::runtime_error("box: negative probability");
          total += p[x][y][a][b];
        }
      }
      if (total != 1) throw std::runtime_error("box: rows must sum to 1");
    }
  }
  for (int x = 0; x < 2; ++x) {
    for (int a = 0; a < 2; ++a) {
      const Rat lhs = p[x][0][a][0] + p[x][0][a][1];
      const Rat rhs = p[x][1][a][0] + p[x][1][a][1];
      if (lhs != rhs)
        throw std::runtime_error("box: signalling from the second input");
    }
  }
  for (int y = 0; y < 2; ++y) {
    for (int b = 0; b < 2; ++b) {
      const Rat lhs = p[0][y][0][b] + p[0][y][1][b];
      const Rat rhs = p[1][y][0][b] + p[1][y][1][b];
      if (lhs != rhs)
        throw std::runtime_error("box: signalling from the first input");
    }
  }
}

Box pr_box() {
  Box box;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          box.p[x][y][a][b] = ((a ^ b) == (x & y)) ? Rat(1, 2) : Rat(0);
  return box;
}

Box white_box() {
  Box box;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) box.p[x][y][a][b] = Rat(1, 4);
  return box;
}

Box det_box() {
  Box box;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          box.p[x][y][a][b] = (a == 0 && b == 0) ? Rat(1) : Rat(0);
  return box;
}

Box mix_box(const Rat& gamma, const Rat& eps) {
  if (gamma < 0 || eps < 0 || gamma + eps > 1)
    throw std::runtime_error("mix_box: weights must be a convex mixture");
  const Box pr = pr_box();
  const Box det = det_box();
  const Box white = white_box();
  const Rat rest = Rat(1) - gamma - eps;
  Box box;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          box.p[x][y][a][b] = gamma * pr.p[x][y][a][b] +
                              eps * det.p[x][y][a][b] +
                              rest * white.p[x][y][a][b];
  return box;
}

JointDistribution ic_protocol(const Box& box, int s) {
  if (s != 1 && s != 2) throw std::runtime_error("ic_protocol: s must be 1 or 2");
  box.check();
  const int y = s - 1;
  JointDistribution dist;
  dist.vars = {{"X1", 2}, {"X2", 2}, {"M", 2}, {s == 1 ? "Y1" : "Y2", 2}};
  dist.p.assign(16, Rat(0));
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      const int x = x1 ^ x2;
      for (int m = 0; m < 2; ++m) {
        const int a = x1 ^ m;
        for (int yv = 0; yv < 2; ++yv) {
          const int b = m ^ yv;
          dist.p[dist.offset({x1, x2, m, yv})] =
              Rat(1, 4) * box.p[x][y][a][b];
        }
      }
    }
  }
  return dist;
}

EntropyVector ic_entropy_vector(const Box& box) {
  const JointDistribution d1 = ic_protocol(box, 1);
  const JointDistribution d2 = ic_protocol(box, 2);
  const std::vector<std::string> names = {"X1", "X2", "M", "Y1", "Y2"};
  const Mask y1 = Mask{1} << 3;
  const Mask y2 = Mask{1} << 4;
  const Mask ctx1 = 0b01111;  // X1,X2,M,Y1
  const Mask ctx2 = 0b10111;  // X1,X2,M,Y2
  std::set<Mask> subsets;
  for (Mask s = ctx1; s; s = (s - 1) & ctx1) subsets.insert(s);
  for (Mask s = ctx2; s; s = (s - 1) & ctx2) subsets.insert(s);
  SubsetIndex index(names, {subsets.begin(), subsets.end()});
  EntropyVector out{index, {}};
  out.h.reserve(static_cast<size_t>(index.size()));
  for (int id = 0; id < index.size(); ++id) {
    const Mask m = index.subset(id);
    // Both protocol joints share the (X1,X2,M) block; Y2 replaces Y1 at bit 3
    // of the second joint's variable order.
    if (m & y2) {
      const Mask local = (m & 0b00111) | ((m & y2) >> 1);
      out.h.push_back(shannon_entropy(d2, local));
    } else {
      out.h.push_back(shannon_entropy(d1, m));
    }
  }
  return out;
}

double evaluate(const LinearExpression& expr, const EntropyVector& vector) {
  return eval_slack(expr, vector.index, vector.h);
}

double causal_influence_bound(const EntropyVector& vector) {
  static const LinearExpression bound = parse_inequality(
      "I(X1:Y1,M) + I(X2:Y2,M) + I(X1:X2|Y2,M) <= H(M) + I(X1:X2)");
  return std::max(0.0, evaluate(bound, vector));
}

std::vector<ScanPoint> scan_boundary(const LinearExpression& expr,
                                     const Rat& step) {
  if (step <= 0 || step > Rat(1, 8))
    throw std::runtime_error("scan_boundary: step must lie in (0, 1/8]");
  constexpr double kTol = 1e-9;
  constexpr double kResolution = 1e-6;
  auto violated = [&](double gamma, const Rat& eps) {
    const Rat g(gamma);
    return evaluate(expr, ic_entropy_vector(mix_box(g, eps))) > kTol;
  };
  std::vector<ScanPoint> points;
  for (Rat eps(0); eps <= 1; eps += step) {
    ScanPoint point{eps, std::nullopt};
    const double top = Rat(Rat(1) - eps).get_d();
    if (violated(top, eps)) {
      if (violated(0.0, eps)) {
        point.gamma = 0.0;
      } else {
        double lo = 0.0, hi = top;
        while (hi - lo > kResolution) {
          const double mid = (lo + hi) / 2;
          (violated(mid, eps) ? hi : lo) = mid;
        }
        point.gamma = hi;
      }
    }
    points.push_back(std::move(point));
  }
  return points;
}

void write_scan_csv(std::ostream& out, const std::string& candidate_name,
                    const Rat& step, const std::vector<ScanPoint>& points) {
  out << "candidate,step,eps,gamma\n";
  for (const auto& point : points) {
    out << '"' << candidate_name << '"' << ',' << rat_to_string(step) << ','
        << rat_to_string(point.eps) << ',';
    if (point.gamma) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.7f", *point.gamma);
      out << buf;
    }
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Classical networks on the complete m-uniform hypergraph.

void NetworkSpec::check() const {
  if (n < 2) throw std::runtime_error("network: need at least two observers");
  if (m < 1 || m > n)
    throw std::runtime_error("network: ancestor arity out of range");
  if (responses.size() != static_cast<size_t>(n))
    throw std::runtime_error("network: one response table per observer required");
  std::vector<std::size_t> incident_states(static_cast<size_t>(n), 1);
  for (const auto& anc : ancestors) {
    if (anc.members.empty() || anc.members.size() != anc.cards.size())
      throw std::runtime_error("network: malformed ancestor");
    if (!std::is_sorted(anc.members.begin(), anc.members.end()) ||
        std::adjacent_find(anc.members.begin(), anc.members.end()) !=
            anc.members.end())
      throw std::runtime_error("network: ancestor members must be ascending");
    std::size_t states = 1;
    for (size_t j = 0; j < anc.members.size(); ++j) {
      const int member = anc.members[j];
      if (member < 0 || member >= n)
        throw std::runtime_error("network: ancestor member out of range");
      if (anc.cards[j] < 1)
        throw std::runtime_error("network: share cardinality must be positive");
      states *= static_cast<std::size_t>(anc.cards[j]);
      incident_states[static_cast<size_t>(member)] *=
          static_cast<std::size_t>(anc.cards[j]);
    }
    if (anc.p.size() != states)
      throw std::runtime_error("network: ancestor table size mismatch");
    Rat total(0);
    for (const Rat& v : anc.p) {
      if (v < 0) throw std::runtime_error("network: negative ancestor mass");
      total += v;
    }
    if (total != 1)
      throw std::runtime_error("network: ancestor mass must sum to 1");
  }
  for (int i = 0; i < n; ++i) {
    const auto& resp = responses[static_cast<size_t>(i)];
    if (resp.card < 1)
      throw std::runtime_error("network: response cardinality must be positive");
    const std::size_t expected =
        incident_states[static_cast<size_t>(i)] *
        static_cast<std::size_t>(resp.card);
    if (resp.table.size() != expected)
      throw std::runtime_error("network: response table size mismatch");
    for (std::size_t row = 0; row < incident_states[static_cast<size_t>(i)];
         ++row) {
      Rat total(0);
      for (int v = 0; v < resp.card; ++v) {
        const Rat& value =
            resp.table[row * static_cast<std::size_t>(resp.card) +
                       static_cast<std::size_t>(v)];
        if (value < 0)
          throw std::runtime_error("network: negative response mass");
        total += value;
      }
      if (total != 1)
        throw std::runtime_error("network: response rows must sum to 1");
    }
  }
}

JointDistribution network_joint(const NetworkSpec& spec) {
  spec.check();
  JointDistribution out;
  for (int i = 0; i < spec.n; ++i) {
    out.vars.emplace_back("V" + std::to_string(i + 1),
                          spec.responses[static_cast<size_t>(i)].card);
  }
  out.p.assign(out.states(), Rat(0));

  // Odometer over every ancestor's joint outcome.
  std::vector<std::vector<int>> share(spec.ancestors.size());
  for (size_t a = 0; a < spec.ancestors.size(); ++a)
    share[a].assign(spec.ancestors[a].members.size(), 0);
  auto advance = [&]() {
    for (size_t a = share.size(); a-- > 0;) {
      for (size_t j = share[a].size(); j-- > 0;) {
        if (++share[a][j] < spec.ancestors[a].cards[j]) return true;
        share[a][j] = 0;
      }
    }
    return false;
  };

  do {
    Rat weight(1);
    for (size_t a = 0; a < spec.ancestors.size(); ++a) {
      std::size_t off = 0;
      for (size_t j = 0; j < share[a].size(); ++j)
        off = off * static_cast<std::size_t>(spec.ancestors[a].cards[j]) +
              static_cast<std::size_t>(share[a][j]);
      weight *= spec.ancestors[a].p[off];
      if (weight == 0) break;
    }
    if (weight == 0) continue;

    // Row of each observer's response table for these shares.
    std::vector<std::size_t> row(static_cast<size_t>(spec.n), 0);
    for (size_t a = 0; a < spec.ancestors.size(); ++a) {
      for (size_t j = 0; j < spec.ancestors[a].members.size(); ++j) {
        const int member = spec.ancestors[a].members[j];
        row[static_cast<size_t>(member)] =
            row[static_cast<size_t>(member)] *
                static_cast<std::size_t>(spec.ancestors[a].cards[j]) +
            static_cast<std::size_t>(share[a][j]);
      }
    }
    std::vector<int> outcome(static_cast<size_t>(spec.n), 0);
    do {
      Rat mass = weight;
      for (int i = 0; i < spec.n && mass != 0; ++i) {
        const auto& resp = spec.responses[static_cast<size_t>(i)];
        mass *= resp.table[row[static_cast<size_t>(i)] *
                               static_cast<std::size_t>(resp.card) +
                           static_cast<std::size_t>(outcome[static_cast<size_t>(i)])];
      }
      if (mass != 0) out.p[out.offset(outcome)] += mass;
    } while (next_outcome(outcome, out.vars));
  } while (advance());
  return out;
}

NetworkSpec cut_spec(const NetworkSpec& spec, int i) {
  spec.check();
  if (i < 0 || i >= spec.n)
    throw std::runtime_error("cut: observer index out of range");
  NetworkSpec out;
  out.n = spec.n;
  out.m = spec.m;
  out.responses = spec.responses;
  for (const auto& anc : spec.ancestors) {
    const bool keeps =
        std::find(anc.members.begin(), anc.members.end(), i) != anc.members.end();
    if (keeps) {
      out.ancestors.push_back(anc);
      continue;
    }
    // Two independent copies: the first member keeps reading its own share's
    // marginal, the remaining members read the complementary marginal.
    JointDistribution joint;
    for (size_t j = 0; j < anc.members.size(); ++j)
      joint.vars.emplace_back("s" + std::to_string(j), anc.cards[j]);
    joint.p = anc.p;

    NetworkSpec::Ancestor head;
    head.members = {anc.members.front()};
    head.cards = {anc.cards.front()};
    head.p = marginal(joint, Mask{1}).p;
    out.ancestors.push_back(std::move(head));

    NetworkSpec::Ancestor tail;
    tail.members.assign(anc.members.begin() + 1, anc.members.end());
    tail.cards.assign(anc.cards.begin() + 1, anc.cards.end());
    const Mask rest = ((Mask{1} << anc.members.size()) - 1) & ~Mask{1};
    tail.p = marginal(joint, rest).p;
    out.ancestors.push_back(std::move(tail));
  }
  return out;
}

JointDistribution cut_transform(const NetworkSpec& spec, int i) {
  return network_joint(cut_spec(spec, i));
}

MonogamyCheck network_monogamy_check(int m) {
  if (m < 2)
    throw std::runtime_error("monogamy check: ancestor arity must be >= 2");
  MonogamyCheck check{Rat(m), Rat(0), false};
  // sum_{k=0}^{m-3} (m-k-1) (m-k-1)! / (m-1)!
  Rat factorial(1);
  for (int j = 2; j <= m - 1; ++j) factorial *= j;  // (m-1)!
  for (int k = 0; k <= m - 3; ++k) {
    const int j = m - k - 1;
    Rat jf(1);
    for (int t = 2; t <= j; ++t) jf *= t;
    check.rhs += Rat(j) * jf / factorial;
  }
  check.violated = check.lhs > check.rhs;
  return check;
}

namespace {

std::vector<Rat> random_simplex(std::mt19937_64& rng, std::size_t size) {
  std::uniform_int_distribution<int> weight(1, 8);
  std::vector<Rat> p(size);
  long total = 0;
  std::vector<int> w(size);
  for (auto& x : w) {
    x = weight(rng);
    total += x;
  }
  for (size_t i = 0; i < size; ++i) p[i] = Rat(w[i]) / Rat(total);
  return p;
}

}  // namespace

JointDistribution random_network_distribution(std::mt19937_64& rng,
                                              const CausalStructure& structure,
                                              int max_card) {
  if (max_card < 2)
    throw std::runtime_error("random distribution: max cardinality must be >= 2");
  const ValidationReport report = validate(structure);
  if (!report.ok())
    throw std::runtime_error("random distribution: structure is invalid");
  for (const auto& sys : structure.systems) {
    if (sys.kind != SystemKind::Classical)
      throw std::runtime_error(
          "random distribution: only all-classical structures are samplable");
  }
  const int n = structure.n();
  std::uniform_int_distribution<int> card_dist(2, max_card);
  std::vector<int> card(static_cast<size_t>(n));
  for (auto& c : card) c = card_dist(rng);

  // Joint table per preparation, kernel rows per operation input combo.
  std::vector<std::vector<Rat>> prep_tables;
  for (const auto& prep : structure.preparations) {
    std::size_t states = 1;
    for (int id : prep.systems)
      states *= static_cast<std::size_t>(card[static_cast<size_t>(id)]);
    prep_tables.push_back(random_simplex(rng, states));
  }
  std::vector<std::vector<std::vector<Rat>>> op_tables;
  for (const auto& op : structure.operations) {
    std::size_t in_states = 1, out_states = 1;
    for (int id : op.inputs)
      in_states *= static_cast<std::size_t>(card[static_cast<size_t>(id)]);
    for (int id : op.outputs)
      out_states *= static_cast<std::size_t>(card[static_cast<size_t>(id)]);
    std::vector<std::vector<Rat>> rows;
    rows.reserve(in_states);
    for (std::size_t r = 0; r < in_states; ++r)
      rows.push_back(random_simplex(rng, out_states));
    op_tables.push_back(std::move(rows));
  }

  JointDistribution out;
  for (int i = 0; i < n; ++i)
    out.vars.emplace_back(structure.systems[static_cast<size_t>(i)].name,
                          card[static_cast<size_t>(i)]);
  out.p.assign(out.states(), Rat(0));
  std::vector<int> outcome(static_cast<size_t>(n), 0);
  auto pack = [&](const std::vector<int>& ids) {
    std::size_t off = 0;
    for (int id : ids)
      off = off * static_cast<std::size_t>(card[static_cast<size_t>(id)]) +
            static_cast<std::size_t>(outcome[static_cast<size_t>(id)]);
    return off;
  };
  std::size_t off = 0;
  do {
    Rat mass(1);
    for (size_t p = 0; p < structure.preparations.size() && mass != 0; ++p)
      mass *= prep_tables[p][pack(structure.preparations[p].systems)];
    for (size_t o = 0; o < structure.operations.size() && mass != 0; ++o)
      mass *= op_tables[o][pack(structure.operations[o].inputs)]
                          [pack(structure.operations[o].outputs)];
    out.p[off] = mass;
    ++off;
  } while (next_outcome(outcome, out.vars));
  return out;
}

NetworkSpec random_network_spec(std::mt19937_64& rng, int n, int m,
                                int max_card) {
  if (n < 2 || m < 1 || m > n)
    throw std::runtime_error("random network: bad shape");
  if (max_card < 2)
    throw std::runtime_error("random network: max cardinality must be >= 2");
  std::uniform_int_distribution<int> card_dist(2, max_card);
  NetworkSpec spec;
  spec.n = n;
  spec.m = m;
  // All m-subsets of {0..n-1}, ascending.
  std::vector<int> pick(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) pick[static_cast<size_t>(j)] = j;
  while (true) {
    NetworkSpec::Ancestor anc;
    anc.members = pick;
    std::size_t states = 1;
    for (int j = 0; j < m; ++j) {
      anc.cards.push_back(card_dist(rng));
      states *= static_cast<std::size_t>(anc.cards.back());
    }
    anc.p = random_simplex(rng, states);
    spec.ancestors.push_back(std::move(anc));
    int j = m - 1;
    while (j >= 0 && pick[static_cast<size_t>(j)] == n - m + j) --j;
    if (j < 0) break;
    ++pick[static_cast<size_t>(j)];
    for (int t = j + 1; t < m; ++t)
      pick[static_cast<size_t>(t)] = pick[static_cast<size_t>(t - 1)] + 1;
  }
  for (int i = 0; i < n; ++i) {
    NetworkSpec::Response resp;
    resp.card = card_dist(rng);
    std::size_t rows = 1;
    for (const auto& anc : spec.ancestors) {
      for (size_t j = 0; j < anc.members.size(); ++j)
        if (anc.members[j] == i)
          rows *= static_cast<std::size_t>(anc.cards[j]);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = random_simplex(rng, static_cast<std::size_t>(resp.card));
      resp.table.insert(resp.table.end(), row.begin(), row.end());
    }
    spec.responses.push_back(std::move(resp));
  }
  spec.check();
  return spec;
}

}  // namespace entrocone
