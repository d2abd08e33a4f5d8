#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "entrocone/subset.hpp"

namespace entrocone {

enum class SystemKind { Classical, Quantum };

struct System {
  std::string name;
  SystemKind kind = SystemKind::Classical;
};

// Jointly prepared root systems; correlation between members is allowed,
// distinct preparations are mutually independent.
struct Preparation {
  std::vector<int> systems;
};

// A channel consuming its inputs and producing its outputs jointly.  Quantum
// inputs are consumed: a quantum system may feed at most one operation unless
// the consumers form one exclusivity group (alternative settings).
struct Operation {
  std::string name;
  std::vector<int> inputs;
  std::vector<int> outputs;
};

struct ExclusivityGroup {
  std::vector<int> operations;
};

struct CausalStructure {
  std::vector<System> systems;
  std::vector<Preparation> preparations;
  std::vector<Operation> operations;
  std::vector<ExclusivityGroup> exclusivity;
  // Declared marginal scenario; each context is a list of system ids.
  std::vector<std::vector<int>> marginal_contexts;

  int n() const { return static_cast<int>(systems.size()); }
  // -1 when absent.
  int system_id(const std::string& name) const;
  int operation_id(const std::string& name) const;
  Mask mask_of(const std::vector<int>& ids) const;
  std::vector<std::string> system_names() const;
  std::string label(Mask m) const;
  bool is_quantum(int id) const {
    return systems[static_cast<size_t>(id)].kind == SystemKind::Quantum;
  }
};

struct Violation {
  enum class Kind {
    UndeclaredSystem,
    DuplicateSystem,
    DuplicateProducer,
    MissingProducer,
    Cycle,
    NoCloning,
    BadExclusivity,
    NonCoexistingContext,
    EmptyMember,
  };
  Kind kind;
  std::string detail;
};

const char* violation_name(Violation::Kind kind);

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate(const CausalStructure& structure);

// Derived facts about a structurally valid causal structure.
struct StructureInfo {
  Mask quantum = 0;
  Mask roots = 0;
  // Per system: producing preparation id or -1 / producing operation id or -1.
  std::vector<int> producer_prep;
  std::vector<int> producer_op;
  // Strict descendants per system (through operation input -> output edges).
  std::vector<Mask> descendants;
  // Operations on some directed path into the system (including its producer).
  std::vector<std::vector<int>> ancestor_ops;
  // Systems that cannot share a coexisting set with this one.
  std::vector<Mask> conflicts;
  // Ancestry meets two distinct operations of one exclusivity group: the
  // system belongs to no coexisting set at all.
  std::vector<char> self_conflict;
};

StructureInfo analyze(const CausalStructure& structure);

// Coexisting-set test: no member is a strict descendant of a quantum member
// and no two members depend on distinct operations of one exclusivity group.
bool coexisting(const StructureInfo& info, Mask set);

// All maximal coexisting sets, ascending mask order.
std::vector<Mask> coexisting_sets(const CausalStructure& structure);

// Entropy coordinates: every nonempty coexisting subset.
SubsetIndex subset_coordinates(const CausalStructure& structure);

// Every relabeling of the systems that preserves kinds, preparations,
// operations, and exclusivity groups (marginal contexts are ignored), as
// perm[old bit] = new bit; the identity comes first.  Such a relabeling maps
// the assembled constraint system onto itself, which lets implication checks
// work in the quotient by any subgroup fixing the candidate.  The search
// gives up early on pathological inputs and returns whatever it found.
std::vector<std::vector<int>> structure_automorphisms(
    const CausalStructure& structure);

// Marginal coordinate set: union of the power sets of the declared contexts.
SubsetIndex marginal_coordinates(const CausalStructure& structure);

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line, int column, const std::string& message);
};

// Text syntax:
//   system <name> classical|quantum
//   prepare {a, b, ...}
//   op <name> in {a, ...} out {b, ...}
//   exclusive {op1, op2, ...}
//   marginal {a, b, ...}
// with '#' comments.  Declaration order defines bit order.
CausalStructure parse_structure(const std::string& text);
CausalStructure load_structure(const std::string& path);
std::string emit_structure(const CausalStructure& structure);

}  // namespace entrocone
