#include "entrocone/model.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace entrocone {

int CausalStructure::system_id(const std::string& name) const {
  for (size_t i = 0; i < systems.size(); ++i) {
    if (systems[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int CausalStructure::operation_id(const std::string& name) const {
  for (size_t i = 0; i < operations.size(); ++i) {
    if (operations[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

Mask CausalStructure::mask_of(const std::vector<int>& ids) const {
  Mask m = 0;
  for (int id : ids) m |= Mask{1} << id;
  return m;
}

std::vector<std::string> CausalStructure::system_names() const {
  std::vector<std::string> names;
  names.reserve(systems.size());
  for (const auto& s : systems) names.push_back(s.name);
  return names;
}

std::string CausalStructure::label(Mask m) const {
  std::string out;
  for (int i = 0; i < n(); ++i) {
    if (m & (Mask{1} << i)) {
      if (!out.empty()) out += ',';
      out += systems[static_cast<size_t>(i)].name;
    }
  }
  return out;
}

const char* violation_name(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::UndeclaredSystem: return "undeclared-system";
    case Violation::Kind::DuplicateSystem: return "duplicate-system";
    case Violation::Kind::DuplicateProducer: return "duplicate-producer";
    case Violation::Kind::MissingProducer: return "missing-producer";
    case Violation::Kind::Cycle: return "cycle";
    case Violation::Kind::NoCloning: return "no-cloning";
    case Violation::Kind::BadExclusivity: return "bad-exclusivity";
    case Violation::Kind::NonCoexistingContext: return "non-coexisting-context";
    case Violation::Kind::EmptyMember: return "empty-member";
  }
  return "?";
}

std::string ValidationReport::summary() const {
  if (violations.empty()) return "ok\n";
  std::string out;
  for (const auto& v : violations) {
    out += violation_name(v.kind);
    out += ": ";
    out += v.detail;
    out += '\n';
  }
  return out;
}

namespace {

bool structurally_sound(const CausalStructure& s,
                        std::vector<Violation>* violations) {
  // Everything needed before analyze() may run: ids in range, unique names,
  // unique producers, no dangling references.
  bool sound = true;
  auto flag = [&](Violation::Kind kind, const std::string& detail) {
    violations->push_back({kind, detail});
    sound = false;
  };

  for (int i = 0; i < s.n(); ++i) {
    for (int j = i + 1; j < s.n(); ++j) {
      if (s.systems[i].name == s.systems[j].name) {
        flag(Violation::Kind::DuplicateSystem,
             "system '" + s.systems[i].name + "' declared twice");
      }
    }
    if (s.systems[static_cast<size_t>(i)].name.empty()) {
      flag(Violation::Kind::EmptyMember, "system with empty name");
    }
  }
  auto check_ids = [&](const std::vector<int>& ids, const std::string& where) {
    for (int id : ids) {
      if (id < 0 || id >= s.n()) {
        flag(Violation::Kind::UndeclaredSystem,
             "undeclared system referenced by " + where);
      }
    }
  };
  std::vector<int> producer(static_cast<size_t>(s.n()), -1);
  auto claim = [&](int id, const std::string& who) {
    if (id < 0 || id >= s.n()) return;
    if (producer[static_cast<size_t>(id)] >= 0) {
      flag(Violation::Kind::DuplicateProducer,
           "system '" + s.systems[static_cast<size_t>(id)].name +
               "' produced more than once (" + who + ")");
    }
    producer[static_cast<size_t>(id)] = 1;
  };
  for (size_t p = 0; p < s.preparations.size(); ++p) {
    const auto& prep = s.preparations[p];
    if (prep.systems.empty())
      flag(Violation::Kind::EmptyMember, "empty preparation");
    check_ids(prep.systems, "preparation #" + std::to_string(p));
    for (int id : prep.systems) claim(id, "preparation #" + std::to_string(p));
  }
  for (const auto& op : s.operations) {
    if (op.inputs.empty() || op.outputs.empty()) {
      flag(Violation::Kind::EmptyMember,
           "operation '" + op.name + "' needs inputs and outputs");
    }
    check_ids(op.inputs, "operation '" + op.name + "'");
    check_ids(op.outputs, "operation '" + op.name + "'");
    for (int id : op.outputs) claim(id, "operation '" + op.name + "'");
  }
  for (size_t i = 0; i < s.operations.size(); ++i) {
    for (size_t j = i + 1; j < s.operations.size(); ++j) {
      if (s.operations[i].name == s.operations[j].name) {
        flag(Violation::Kind::DuplicateSystem,
             "operation '" + s.operations[i].name + "' declared twice");
      }
    }
  }
  for (int id = 0; id < s.n(); ++id) {
    if (producer[static_cast<size_t>(id)] < 0) {
      flag(Violation::Kind::MissingProducer,
           "system '" + s.systems[static_cast<size_t>(id)].name +
               "' is never prepared or produced");
    }
  }
  for (const auto& group : s.exclusivity) {
    for (int op : group.operations) {
      if (op < 0 || op >= static_cast<int>(s.operations.size())) {
        flag(Violation::Kind::BadExclusivity,
             "exclusivity group references an unknown operation");
      }
    }
  }
  for (const auto& context : s.marginal_contexts) {
    check_ids(context, "marginal context");
  }
  return sound;
}

}  // namespace

ValidationReport validate(const CausalStructure& s) {
  ValidationReport report;
  if (!structurally_sound(s, &report.violations)) return report;
  auto flag = [&](Violation::Kind kind, const std::string& detail) {
    report.violations.push_back({kind, detail});
  };

  // Acyclicity of the system dependency graph (input -> output).
  std::vector<std::vector<int>> children(static_cast<size_t>(s.n()));
  for (const auto& op : s.operations) {
    for (int in : op.inputs) {
      for (int out : op.outputs)
        children[static_cast<size_t>(in)].push_back(out);
    }
  }
  {
    std::vector<int> state(static_cast<size_t>(s.n()), 0);
    bool cyclic = false;
    std::function<void(int)> visit = [&](int v) {
      if (cyclic || state[static_cast<size_t>(v)] == 2) return;
      if (state[static_cast<size_t>(v)] == 1) {
        cyclic = true;
        return;
      }
      state[static_cast<size_t>(v)] = 1;
      for (int c : children[static_cast<size_t>(v)]) visit(c);
      state[static_cast<size_t>(v)] = 2;
    };
    for (int v = 0; v < s.n() && !cyclic; ++v) visit(v);
    if (cyclic) {
      flag(Violation::Kind::Cycle, "operation graph contains a directed cycle");
    }
  }

  // No-cloning: a quantum system feeds at most one operation unless all of
  // its consumers sit in one exclusivity group.
  std::vector<int> group_of(s.operations.size(), -1);
  for (size_t g = 0; g < s.exclusivity.size(); ++g) {
    const auto& group = s.exclusivity[g];
    if (group.operations.size() < 2) {
      flag(Violation::Kind::BadExclusivity,
           "exclusivity group needs at least two operations");
    }
    for (int op : group.operations) {
      if (group_of[static_cast<size_t>(op)] >= 0) {
        flag(Violation::Kind::BadExclusivity,
             "operation '" + s.operations[static_cast<size_t>(op)].name +
                 "' in two exclusivity groups");
      }
      group_of[static_cast<size_t>(op)] = static_cast<int>(g);
    }
  }
  for (int id = 0; id < s.n(); ++id) {
    if (!s.is_quantum(id)) continue;
    std::vector<int> consumers;
    for (size_t o = 0; o < s.operations.size(); ++o) {
      const auto& in = s.operations[o].inputs;
      if (std::find(in.begin(), in.end(), id) != in.end())
        consumers.push_back(static_cast<int>(o));
    }
    if (consumers.size() < 2) continue;
    const int g = group_of[static_cast<size_t>(consumers.front())];
    bool one_group = g >= 0;
    for (int c : consumers) one_group &= group_of[static_cast<size_t>(c)] == g;
    if (!one_group) {
      flag(Violation::Kind::NoCloning,
           "quantum system '" + s.systems[static_cast<size_t>(id)].name +
               "' consumed by several operations outside one exclusivity "
               "group");
    }
  }

  // Exclusivity groups model alternative settings: the members must contend
  // for at least one common quantum input, pairwise.
  for (const auto& group : s.exclusivity) {
    for (size_t i = 0; i < group.operations.size(); ++i) {
      for (size_t j = i + 1; j < group.operations.size(); ++j) {
        const auto& a = s.operations[static_cast<size_t>(group.operations[i])];
        const auto& b = s.operations[static_cast<size_t>(group.operations[j])];
        bool shared = false;
        for (int in : a.inputs) {
          if (!s.is_quantum(in)) continue;
          shared |= std::find(b.inputs.begin(), b.inputs.end(), in) !=
                    b.inputs.end();
        }
        if (!shared) {
          flag(Violation::Kind::BadExclusivity,
               "operations '" + a.name + "' and '" + b.name +
                   "' share no quantum input");
        }
      }
    }
  }

  if (!report.ok()) return report;

  // Marginal contexts must be coexisting.
  const StructureInfo info = analyze(s);
  for (const auto& context : s.marginal_contexts) {
    const Mask m = s.mask_of(context);
    if (!coexisting(info, m)) {
      flag(Violation::Kind::NonCoexistingContext,
           "marginal context {" + s.label(m) + "} is not a coexisting set");
    }
  }
  return report;
}

StructureInfo analyze(const CausalStructure& s) {
  StructureInfo info;
  const size_t n = static_cast<size_t>(s.n());
  info.producer_prep.assign(n, -1);
  info.producer_op.assign(n, -1);
  info.descendants.assign(n, 0);
  info.ancestor_ops.assign(n, {});
  info.conflicts.assign(n, 0);
  info.self_conflict.assign(n, 0);

  for (size_t i = 0; i < n; ++i) {
    if (s.systems[i].kind == SystemKind::Quantum)
      info.quantum |= Mask{1} << i;
  }
  for (size_t p = 0; p < s.preparations.size(); ++p) {
    for (int id : s.preparations[p].systems) {
      info.producer_prep[static_cast<size_t>(id)] = static_cast<int>(p);
      info.roots |= Mask{1} << id;
    }
  }
  for (size_t o = 0; o < s.operations.size(); ++o) {
    for (int id : s.operations[o].outputs)
      info.producer_op[static_cast<size_t>(id)] = static_cast<int>(o);
  }

  // descendants via reverse topological accumulation (graph is acyclic for
  // validated structures; memoized DFS).
  std::vector<char> done(n, 0);
  std::function<void(int)> visit = [&](int v) {
    if (done[static_cast<size_t>(v)]) return;
    done[static_cast<size_t>(v)] = 1;
    Mask acc = 0;
    for (const auto& op : s.operations) {
      if (std::find(op.inputs.begin(), op.inputs.end(), v) == op.inputs.end())
        continue;
      for (int out : op.outputs) {
        visit(out);
        acc |= Mask{1} << out;
        acc |= info.descendants[static_cast<size_t>(out)];
      }
    }
    info.descendants[static_cast<size_t>(v)] = acc;
  };
  for (size_t v = 0; v < n; ++v) visit(static_cast<int>(v));

  // Operations in the ancestry of each system: the producer plus everything
  // upstream of the producer's inputs.
  for (size_t v = 0; v < n; ++v) {
    std::vector<char> seen(s.operations.size(), 0);
    std::function<void(int)> up = [&](int sys) {
      const int op = info.producer_op[static_cast<size_t>(sys)];
      if (op < 0 || seen[static_cast<size_t>(op)]) return;
      seen[static_cast<size_t>(op)] = 1;
      for (int in : s.operations[static_cast<size_t>(op)].inputs) up(in);
    };
    up(static_cast<int>(v));
    for (size_t o = 0; o < seen.size(); ++o) {
      if (seen[o]) info.ancestor_ops[v].push_back(static_cast<int>(o));
    }
  }

  // Pairwise conflicts.
  for (size_t u = 0; u < n; ++u) {
    if (s.systems[u].kind == SystemKind::Quantum)
      info.conflicts[u] |= info.descendants[u];
  }
  for (size_t u = 0; u < n; ++u) {
    for (size_t v = 0; v < n; ++v) {
      if (info.conflicts[u] & (Mask{1} << v)) info.conflicts[v] |= Mask{1} << u;
    }
  }
  for (const auto& group : s.exclusivity) {
    // Which member (if any) of this group each system depends on; depending
    // on two members means the system never coexists with anything.
    std::vector<int> member(n, -1);
    std::vector<char> clash(n, 0);
    for (size_t v = 0; v < n; ++v) {
      for (int op : info.ancestor_ops[v]) {
        const auto it =
            std::find(group.operations.begin(), group.operations.end(), op);
        if (it == group.operations.end()) continue;
        if (member[v] >= 0 && member[v] != op) clash[v] = 1;
        member[v] = op;
      }
      if (clash[v]) info.self_conflict[v] = 1;
    }
    for (size_t u = 0; u < n; ++u) {
      if (member[u] < 0) continue;
      for (size_t v = u + 1; v < n; ++v) {
        if (member[v] < 0 || member[v] == member[u]) continue;
        info.conflicts[u] |= Mask{1} << v;
        info.conflicts[v] |= Mask{1} << u;
      }
    }
  }
  return info;
}

bool coexisting(const StructureInfo& info, Mask set) {
  for (Mask rest = set; rest;) {
    const int v = __builtin_ctzll(rest);
    rest &= rest - 1;
    if (info.self_conflict[static_cast<size_t>(v)]) return false;
    if (info.conflicts[static_cast<size_t>(v)] & set) return false;
  }
  return true;
}

namespace {

// Maximal independent sets of the conflict graph, Bron-Kerbosch with pivot.
void maximal_independent_sets(const std::vector<Mask>& non_conflict,
                              Mask candidates, Mask excluded, Mask current,
                              std::vector<Mask>* out) {
  if (candidates == 0 && excluded == 0) {
    if (current) out->push_back(current);
    return;
  }
  // Pivot: vertex of candidates|excluded with the most candidate neighbours.
  int pivot = -1, best = -1;
  for (Mask rest = candidates | excluded; rest;) {
    const int v = __builtin_ctzll(rest);
    rest &= rest - 1;
    const int deg = popcount(candidates & non_conflict[static_cast<size_t>(v)]);
    if (deg > best) {
      best = deg;
      pivot = v;
    }
  }
  Mask work = candidates & ~non_conflict[static_cast<size_t>(pivot)];
  while (work) {
    const int v = __builtin_ctzll(work);
    work &= work - 1;
    const Mask bit = Mask{1} << v;
    maximal_independent_sets(non_conflict, candidates & non_conflict[static_cast<size_t>(v)],
                             excluded & non_conflict[static_cast<size_t>(v)],
                             current | bit, out);
    candidates &= ~bit;
    excluded |= bit;
  }
}

}  // namespace

std::vector<Mask> coexisting_sets(const CausalStructure& s) {
  const StructureInfo info = analyze(s);
  const size_t n = static_cast<size_t>(s.n());
  std::vector<Mask> non_conflict(n, 0);
  Mask vertices = 0;
  for (size_t v = 0; v < n; ++v) {
    if (info.self_conflict[v]) continue;
    vertices |= Mask{1} << v;
  }
  for (size_t v = 0; v < n; ++v) {
    non_conflict[v] = vertices & ~info.conflicts[v] & ~(Mask{1} << v);
  }
  std::vector<Mask> out;
  maximal_independent_sets(non_conflict, vertices, 0, 0, &out);
  std::sort(out.begin(), out.end());
  return out;
}

SubsetIndex subset_coordinates(const CausalStructure& s) {
  std::vector<Mask> subsets;
  for (Mask top : coexisting_sets(s)) {
    if (popcount(top) > 24) {
      throw std::runtime_error(
          "coexisting set too large to enumerate coordinates");
    }
    // All nonempty submasks of top.
    for (Mask sub = top; sub; sub = (sub - 1) & top) subsets.push_back(sub);
  }
  return SubsetIndex(s.system_names(), std::move(subsets));
}

namespace {

// Backtracking state for the automorphism search over system labels.
struct AutSearch {
  const CausalStructure* s = nullptr;
  int n = 0;
  std::vector<int> color;          // per system; images must match colors
  std::vector<int> order;          // assignment order, small classes first
  std::vector<int> prep_of;        // producing preparation id or -1
  std::vector<std::vector<int>> ops_of;  // ops touching the system
  std::map<std::vector<int>, int> prep_by_members;
  std::map<std::vector<int>, int> op_by_io;
  std::set<std::vector<int>> excl_sets;
  std::vector<int> image;          // partial permutation, -1 = unassigned
  std::vector<char> used;
  std::vector<int> op_image;
  std::vector<std::vector<int>> found;
  long nodes = 0;
  static constexpr long kNodeCap = 200000;
  static constexpr size_t kResultCap = 40320;

  std::vector<int> key_of_op(int o, const std::vector<int>& map) const {
    const Operation& op = s->operations[static_cast<size_t>(o)];
    std::vector<int> key;
    for (int v : op.inputs) key.push_back(map[static_cast<size_t>(v)]);
    std::sort(key.begin(), key.end());
    key.push_back(-1);
    const size_t mid = key.size();
    for (int v : op.outputs) key.push_back(map[static_cast<size_t>(v)]);
    std::sort(key.begin() + static_cast<long>(mid), key.end());
    return key;
  }

  // True when every system an entity touches has an image already.
  bool fully_mapped(const std::vector<int>& members) const {
    for (int v : members)
      if (image[static_cast<size_t>(v)] < 0) return false;
    return true;
  }

  bool consistent_after(int v) {
    if (prep_of[static_cast<size_t>(v)] >= 0) {
      const Preparation& p =
          s->preparations[static_cast<size_t>(prep_of[static_cast<size_t>(v)])];
      if (fully_mapped(p.systems)) {
        std::vector<int> key;
        for (int m : p.systems) key.push_back(image[static_cast<size_t>(m)]);
        std::sort(key.begin(), key.end());
        if (!prep_by_members.count(key)) return false;
      }
    }
    for (int o : ops_of[static_cast<size_t>(v)]) {
      const Operation& op = s->operations[static_cast<size_t>(o)];
      if (!fully_mapped(op.inputs) || !fully_mapped(op.outputs)) continue;
      const auto it = op_by_io.find(key_of_op(o, image));
      if (it == op_by_io.end()) return false;
      op_image[static_cast<size_t>(o)] = it->second;
    }
    return true;
  }

  bool leaf_consistent() const {
    for (const ExclusivityGroup& g : s->exclusivity) {
      std::vector<int> key;
      for (int o : g.operations)
        key.push_back(op_image[static_cast<size_t>(o)]);
      std::sort(key.begin(), key.end());
      if (!excl_sets.count(key)) return false;
    }
    return true;
  }

  void run(size_t depth) {
    if (++nodes > kNodeCap || found.size() >= kResultCap) return;
    if (depth == order.size()) {
      if (leaf_consistent()) found.push_back(image);
      return;
    }
    const int v = order[depth];
    for (int u = 0; u < n; ++u) {
      if (used[static_cast<size_t>(u)]) continue;
      if (color[static_cast<size_t>(u)] != color[static_cast<size_t>(v)])
        continue;
      image[static_cast<size_t>(v)] = u;
      used[static_cast<size_t>(u)] = 1;
      if (consistent_after(v)) run(depth + 1);
      image[static_cast<size_t>(v)] = -1;
      used[static_cast<size_t>(u)] = 0;
    }
  }
};

}  // namespace

std::vector<std::vector<int>> structure_automorphisms(
    const CausalStructure& s) {
  AutSearch a;
  a.s = &s;
  a.n = s.n();
  const size_t n = static_cast<size_t>(a.n);
  a.prep_of.assign(n, -1);
  a.ops_of.assign(n, {});
  for (size_t p = 0; p < s.preparations.size(); ++p) {
    std::vector<int> key = s.preparations[p].systems;
    for (int v : key) a.prep_of[static_cast<size_t>(v)] = static_cast<int>(p);
    std::sort(key.begin(), key.end());
    a.prep_by_members.emplace(std::move(key), static_cast<int>(p));
  }
  std::vector<int> ident(n);
  for (size_t v = 0; v < n; ++v) ident[v] = static_cast<int>(v);
  for (size_t o = 0; o < s.operations.size(); ++o) {
    for (int v : s.operations[o].inputs)
      a.ops_of[static_cast<size_t>(v)].push_back(static_cast<int>(o));
    for (int v : s.operations[o].outputs)
      a.ops_of[static_cast<size_t>(v)].push_back(static_cast<int>(o));
    a.op_by_io.emplace(a.key_of_op(static_cast<int>(o), ident),
                       static_cast<int>(o));
  }
  for (const ExclusivityGroup& g : s.exclusivity) {
    std::vector<int> key = g.operations;
    std::sort(key.begin(), key.end());
    a.excl_sets.insert(std::move(key));
  }

  // Color = local shape of the system: kind, preparation arity, producing
  // operation signature, and the signatures of the operations it feeds.
  std::map<std::vector<int>, int> palette;
  a.color.resize(n);
  for (size_t v = 0; v < n; ++v) {
    std::vector<int> sig;
    sig.push_back(s.systems[v].kind == SystemKind::Quantum ? 1 : 0);
    const int p = a.prep_of[v];
    sig.push_back(p < 0 ? -1
                        : static_cast<int>(
                              s.preparations[static_cast<size_t>(p)]
                                  .systems.size()));
    std::vector<int> shapes;
    for (int o : a.ops_of[v]) {
      const Operation& op = s.operations[static_cast<size_t>(o)];
      const bool produces =
          std::find(op.outputs.begin(), op.outputs.end(),
                    static_cast<int>(v)) != op.outputs.end();
      shapes.push_back((produces ? 1 : 2) * 100 +
                       static_cast<int>(op.inputs.size()) * 10 +
                       static_cast<int>(op.outputs.size()));
    }
    std::sort(shapes.begin(), shapes.end());
    sig.insert(sig.end(), shapes.begin(), shapes.end());
    const auto it = palette.emplace(std::move(sig),
                                    static_cast<int>(palette.size()));
    a.color[v] = it.first->second;
  }

  // Assign tightly colored systems first so preparation and operation checks
  // fire as early as possible.
  std::vector<int> class_size(palette.size(), 0);
  for (size_t v = 0; v < n; ++v) ++class_size[static_cast<size_t>(a.color[v])];
  a.order.resize(n);
  for (size_t v = 0; v < n; ++v) a.order[v] = static_cast<int>(v);
  std::sort(a.order.begin(), a.order.end(), [&](int x, int y) {
    const int cx = class_size[static_cast<size_t>(a.color[static_cast<size_t>(x)])];
    const int cy = class_size[static_cast<size_t>(a.color[static_cast<size_t>(y)])];
    if (cx != cy) return cx < cy;
    return x < y;
  });

  a.image.assign(n, -1);
  a.used.assign(n, 0);
  a.op_image.assign(s.operations.size(), -1);
  a.run(0);

  std::vector<std::vector<int>> out;
  out.push_back(ident);
  for (auto& perm : a.found)
    if (perm != ident) out.push_back(std::move(perm));
  return out;
}

SubsetIndex marginal_coordinates(const CausalStructure& s) {
  if (s.marginal_contexts.empty()) {
    throw std::runtime_error("structure declares no marginal contexts");
  }
  std::vector<Mask> subsets;
  for (const auto& context : s.marginal_contexts) {
    const Mask top = s.mask_of(context);
    for (Mask sub = top; sub; sub = (sub - 1) & top) subsets.push_back(sub);
  }
  return SubsetIndex(s.system_names(), std::move(subsets));
}

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line(line),
      column(column) {}

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  void skip_blank() {
    while (!eof()) {
      const char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line, col, message);
  }
  std::string word() {
    skip_blank();
    if (eof()) fail("unexpected end of input");
    std::string out;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                      peek() == '_' || peek() == '-' || peek() == '.')) {
      out += peek();
      advance();
    }
    if (out.empty()) fail("expected a name");
    return out;
  }
  void expect(char c) {
    skip_blank();
    if (eof() || peek() != c)
      fail(std::string("expected '") + c + "'");
    advance();
  }
  std::vector<std::string> braced_list() {
    expect('{');
    std::vector<std::string> out;
    while (true) {
      skip_blank();
      if (!eof() && peek() == '}') {
        advance();
        break;
      }
      out.push_back(word());
      skip_blank();
      if (!eof() && peek() == ',') {
        advance();
        continue;
      }
      expect('}');
      break;
    }
    return out;
  }
};

}  // namespace

CausalStructure parse_structure(const std::string& text) {
  CausalStructure s;
  Cursor cur{text};
  auto lookup = [&](const std::string& name, Cursor& at) {
    const int id = s.system_id(name);
    if (id < 0) at.fail("unknown system '" + name + "'");
    return id;
  };
  while (true) {
    cur.skip_blank();
    if (cur.eof()) break;
    const int kw_line = cur.line, kw_col = cur.col;
    const std::string keyword = cur.word();
    if (keyword == "system") {
      System sys;
      sys.name = cur.word();
      const std::string kind = cur.word();
      if (kind == "classical") {
        sys.kind = SystemKind::Classical;
      } else if (kind == "quantum") {
        sys.kind = SystemKind::Quantum;
      } else {
        cur.fail("system kind must be 'classical' or 'quantum'");
      }
      if (s.system_id(sys.name) >= 0)
        throw ParseError(kw_line, kw_col,
                         "system '" + sys.name + "' declared twice");
      if (s.n() >= 64) throw ParseError(kw_line, kw_col, "too many systems");
      s.systems.push_back(std::move(sys));
    } else if (keyword == "prepare") {
      Preparation prep;
      for (const auto& name : cur.braced_list())
        prep.systems.push_back(lookup(name, cur));
      s.preparations.push_back(std::move(prep));
    } else if (keyword == "op") {
      Operation op;
      op.name = cur.word();
      if (cur.word() != "in") cur.fail("expected 'in'");
      for (const auto& name : cur.braced_list())
        op.inputs.push_back(lookup(name, cur));
      if (cur.word() != "out") cur.fail("expected 'out'");
      for (const auto& name : cur.braced_list())
        op.outputs.push_back(lookup(name, cur));
      if (s.operation_id(op.name) >= 0)
        throw ParseError(kw_line, kw_col,
                         "operation '" + op.name + "' declared twice");
      s.operations.push_back(std::move(op));
    } else if (keyword == "exclusive") {
      ExclusivityGroup group;
      for (const auto& name : cur.braced_list()) {
        const int id = s.operation_id(name);
        if (id < 0) cur.fail("unknown operation '" + name + "'");
        group.operations.push_back(id);
      }
      s.exclusivity.push_back(std::move(group));
    } else if (keyword == "marginal") {
      std::vector<int> context;
      for (const auto& name : cur.braced_list())
        context.push_back(lookup(name, cur));
      s.marginal_contexts.push_back(std::move(context));
    } else {
      throw ParseError(kw_line, kw_col, "unknown keyword '" + keyword + "'");
    }
  }
  return s;
}

CausalStructure load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_structure(buffer.str());
}

std::string emit_structure(const CausalStructure& s) {
  std::ostringstream out;
  for (const auto& sys : s.systems) {
    out << "system " << sys.name << ' '
        << (sys.kind == SystemKind::Quantum ? "quantum" : "classical") << '\n';
  }
  auto list = [&](const std::vector<int>& ids) {
    std::string text = "{";
    for (size_t i = 0; i < ids.size(); ++i) {
      if (i) text += ", ";
      text += s.systems[static_cast<size_t>(ids[i])].name;
    }
    return text + "}";
  };
  for (const auto& prep : s.preparations)
    out << "prepare " << list(prep.systems) << '\n';
  for (const auto& op : s.operations) {
    out << "op " << op.name << " in " << list(op.inputs) << " out "
        << list(op.outputs) << '\n';
  }
  for (const auto& group : s.exclusivity) {
    out << "exclusive {";
    for (size_t i = 0; i < group.operations.size(); ++i) {
      if (i) out << ", ";
      out << s.operations[static_cast<size_t>(group.operations[i])].name;
    }
    out << "}\n";
  }
  for (const auto& context : s.marginal_contexts)
    out << "marginal " << list(context) << '\n';
  return out.str();
}

}  // namespace entrocone
