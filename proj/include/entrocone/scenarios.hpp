#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entrocone/dist.hpp"
#include "entrocone/expr.hpp"
#include "entrocone/model.hpp"

namespace entrocone {

// Triangle: three pairwise-shared roots (A1,B1), (A2,C1), (B2,C2) feeding
// observers A, B, C; marginal scenario {A,B,C}.
CausalStructure build_triangle(bool classical_roots);

enum class IcVariant {
  Classical,    // single classical shared root L, no exclusivity
  Quantum,      // quantum pair (A,B), classical message
  DenseCoding,  // quantum pair (A,B), quantum message
};

// Information causality with n receivers: joint input preparation
// {X1..Xn}, shared resource, encoder -> M, n alternative decoders -> Y_s.
// Default marginal scenario: one context {X1..Xn, M, Y_s} per s; the
// restricted variant declares {X_s, Y_s} per s plus {M}.
CausalStructure build_ic(int n, IcVariant variant,
                         bool restricted_marginal = false);

// G_{n,m}: one preparation per m-subset of the n observers; observer V_i
// consumes one share of each incident preparation.  Marginal scenario
// {V_1..V_n}.
CausalStructure build_network(int n, int m, bool classical_roots);

// Triangle extreme-ray witnesses p1..p4 (k in 1..4), dyadic probabilities.
JointDistribution witness_distribution(int k);

struct NamedInequality {
  std::string name;
  LinearExpression expr;
};

NamedInequality ic_original(int n);           // sum_s I(X_s:Y_s) <= H(M)
NamedInequality ic_marginal_nontrivial(int s);  // restricted-scenario facet
NamedInequality ic_tight();                   // two-receiver bound, Eq.-4 form
NamedInequality ic_tight_n(int n);            // n-receiver generalization
NamedInequality ic_dense(int n);              // quantum-message variant, 2 H(M)
NamedInequality monogamy(int n, int j);       // sum_{i!=j} I(V_i:V_j) <= H(V_j)
NamedInequality triangle_ineq(int k);         // k in 1..3, over A, B, C
NamedInequality network_bound(int m);         // G_{m+1,m} weighted bound

// "IC_original(2)", "IC_tight", "monogamy(3,1)", "triangle_2", ... ->
// inequality; nullopt when the text is not a registered name.
std::optional<NamedInequality> named_inequality(const std::string& text);
std::vector<std::string> named_inequality_help();

// "triangle", "triangle-classical", "ic-2", "ic-2-classical",
// "ic-2-restricted", "ic-2-dense", "network-3-2", ... -> structure.
std::optional<CausalStructure> named_scenario(const std::string& text);
std::vector<std::string> named_scenario_help();

}  // namespace entrocone
