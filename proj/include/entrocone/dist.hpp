#pragma once

#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "entrocone/expr.hpp"
#include "entrocone/model.hpp"
#include "entrocone/rational.hpp"
#include "entrocone/subset.hpp"

namespace entrocone {

// Exact joint distribution, probabilities row-major in variable declaration
// order (last variable fastest).
struct JointDistribution {
  std::vector<std::pair<std::string, int>> vars;  // name, cardinality >= 1
  std::vector<Rat> p;

  int arity() const { return static_cast<int>(vars.size()); }
  std::size_t states() const;
  std::size_t offset(const std::vector<int>& outcome) const;
  void check() const;  // throws: wrong size, negative mass, sum != 1
};

JointDistribution marginal(const JointDistribution& dist, Mask keep);

// Shannon entropy of the marginal on `keep`, in bits.  This is the single
// exact-to-float boundary of the library.
double shannon_entropy(const JointDistribution& dist, Mask keep);

struct EntropyVector {
  SubsetIndex index;
  std::vector<double> h;
  double at(Mask m) const { return h.at(static_cast<size_t>(index.id(m))); }
};

// Coordinates: union of the power sets of the contexts (masks over the
// distribution's variables).
EntropyVector entropy_vector(const JointDistribution& dist,
                             const std::vector<Mask>& contexts);
EntropyVector entropy_vector_full(const JointDistribution& dist);

// JSON: {"vars":[["A",2],...],"p":["1/2","0",...]} row-major; nested arrays
// in "p" are flattened.
JointDistribution dist_from_json(const std::string& text);
std::string dist_to_json(const JointDistribution& dist);
JointDistribution load_distribution(const std::string& path);

// Two-input/two-output no-signalling box p(a,b|x,y), all entries rational.
struct Box {
  Rat p[2][2][2][2];  // [x][y][a][b]
  void check() const;  // normalization, nonnegativity, no-signalling
};

Box pr_box();     // (1/2) [a xor b = xy]
Box white_box();  // 1/4
Box det_box();    // [a=0][b=0]
// gamma * PR + eps * det + (1 - gamma - eps) * white; requires a valid mixture.
Box mix_box(const Rat& gamma, const Rat& eps);

// van Dam / Pawlowski coding: Alice holds uniform independent bits X1, X2,
// inputs x = X1 xor X2 into the box, sends M = X1 xor a; Bob aims at X_s via
// y = s - 1, Y_s = M xor b.  Returns the exact joint of (X1, X2, M, Y_s).
JointDistribution ic_protocol(const Box& box, int s);

// Entropy vector over the n=2 information-causality marginal scenario
// ({X1,X2,M,Y1} and {X1,X2,M,Y2}); shared marginals agree exactly by
// no-signalling.
EntropyVector ic_entropy_vector(const Box& box);

// Slack of Eq-style expressions against an entropy vector ("LHS - RHS <= 0").
double evaluate(const LinearExpression& expr, const EntropyVector& vector);

// max(0, slack of the two-receiver bound): lower bound on direct causal
// influence needed to explain the statistics.
double causal_influence_bound(const EntropyVector& vector);

struct ScanPoint {
  Rat eps;
  std::optional<double> gamma;  // smallest violating gamma, nullopt if none
};

// For eps on the grid {0, step, 2 step, ...} with eps <= 1: smallest gamma in
// [0, 1-eps] violating the expression on the protocol entropy vector,
// bisected to resolution 1e-6.  Requires 0 < step <= 1/8.
std::vector<ScanPoint> scan_boundary(const LinearExpression& expr,
                                     const Rat& step);

void write_scan_csv(std::ostream& out, const std::string& candidate_name,
                    const Rat& step, const std::vector<ScanPoint>& points);

// Classical network over the complete m-uniform hypergraph on n observers:
// one ancestor per m-subset, observer V_i reads one share of each incident
// ancestor.  Response tables are row-stochastic and rational.
struct NetworkSpec {
  struct Ancestor {
    std::vector<int> members;        // ascending observer ids (0-based)
    std::vector<int> cards;          // per-share cardinality, same length
    std::vector<Rat> p;              // joint over the shares, row-major
  };
  struct Response {
    int card = 2;                    // outcomes of V_i
    // p(v | shares) row-major over the shares of the incident ancestors in
    // ancestor declaration order, outcome fastest.
    std::vector<Rat> table;
  };
  int n = 0;
  int m = 0;
  std::vector<Ancestor> ancestors;
  std::vector<Response> responses;
  void check() const;
};

// Exact joint of (V_1, ..., V_n).
JointDistribution network_joint(const NetworkSpec& spec);

// Ancestor surgery for observer i (0-based): ancestors containing i stay;
// every other ancestor is split into two independent copies, one feeding
// only its first share's observer, the other feeding the rest.  Bivariate
// marginals involving V_i are preserved exactly.
JointDistribution cut_transform(const NetworkSpec& spec, int i);
NetworkSpec cut_spec(const NetworkSpec& spec, int i);

// Maximally-correlated-coins certificate for the G_{m+1,m} bound: returns
// (sum_{k=2}^{m+1} I(V_1:V_k), sum_{k=0}^{m-3} (m-k-1)(m-k-1)!/(m-1)!) on
// unit-entropy observers = (m, m - 2/(m-1)!), exact.
struct MonogamyCheck {
  Rat lhs;
  Rat rhs;
  bool violated;
};
MonogamyCheck network_monogamy_check(int m);

// Random classical network over a validated all-classical structure: random
// cardinalities in [2, max_card], random rational kernels.  Joint over all
// systems (latents included).
JointDistribution random_network_distribution(std::mt19937_64& rng,
                                              const CausalStructure& structure,
                                              int max_card);
NetworkSpec random_network_spec(std::mt19937_64& rng, int n, int m,
                                int max_card);

}  // namespace entrocone
