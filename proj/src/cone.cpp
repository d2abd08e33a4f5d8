#include "entrocone/cone.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace entrocone {

namespace {

// Preparations and joint operation outputs collapse to one vertex each:
// members of a preparation (and joint outputs of one operation) are created
// together and are never conditionally independent by construction.
struct CollapsedDag {
  // vertex = preparation id, or #preparations + operation id
  int nvert = 0;
  std::vector<Mask> systems;               // systems living on each vertex
  std::vector<int> vertex_of;              // per system
  std::vector<std::vector<int>> parents;   // unique, sorted
  std::vector<std::vector<int>> children;  // unique, sorted
};

CollapsedDag collapse(const CausalStructure& s) {
  CollapsedDag dag;
  const int nprep = static_cast<int>(s.preparations.size());
  dag.nvert = nprep + static_cast<int>(s.operations.size());
  dag.systems.assign(static_cast<size_t>(dag.nvert), 0);
  dag.vertex_of.assign(static_cast<size_t>(s.n()), -1);
  dag.parents.assign(static_cast<size_t>(dag.nvert), {});
  dag.children.assign(static_cast<size_t>(dag.nvert), {});
  for (int p = 0; p < nprep; ++p) {
    for (int id : s.preparations[static_cast<size_t>(p)].systems) {
      dag.systems[static_cast<size_t>(p)] |= Mask{1} << id;
      dag.vertex_of[static_cast<size_t>(id)] = p;
    }
  }
  for (size_t o = 0; o < s.operations.size(); ++o) {
    const int v = nprep + static_cast<int>(o);
    for (int id : s.operations[o].outputs) {
      dag.systems[static_cast<size_t>(v)] |= Mask{1} << id;
      dag.vertex_of[static_cast<size_t>(id)] = v;
    }
  }
  for (size_t o = 0; o < s.operations.size(); ++o) {
    const int v = nprep + static_cast<int>(o);
    for (int id : s.operations[o].inputs) {
      const int u = dag.vertex_of[static_cast<size_t>(id)];
      dag.parents[static_cast<size_t>(v)].push_back(u);
      dag.children[static_cast<size_t>(u)].push_back(v);
    }
  }
  for (auto& adj : dag.parents) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  for (auto& adj : dag.children) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return dag;
}

std::vector<char> vertex_set(const CollapsedDag& dag, Mask systems) {
  std::vector<char> out(static_cast<size_t>(dag.nvert), 0);
  for (Mask rest = systems; rest;) {
    const int id = __builtin_ctzll(rest);
    rest &= rest - 1;
    out[static_cast<size_t>(dag.vertex_of[static_cast<size_t>(id)])] = 1;
  }
  return out;
}

}  // namespace

bool d_separated(const CausalStructure& s, Mask x, Mask y, Mask z) {
  if (x == 0 || y == 0)
    throw std::runtime_error("d-separation: X and Y must be nonempty");
  const CollapsedDag dag = collapse(s);
  const auto in_x = vertex_set(dag, x);
  const auto in_y = vertex_set(dag, y);
  const auto in_z = vertex_set(dag, z);
  for (int v = 0; v < dag.nvert; ++v) {
    const int hits = in_x[static_cast<size_t>(v)] +
                     in_y[static_cast<size_t>(v)] +
                     in_z[static_cast<size_t>(v)];
    if (hits > 1) {
      throw std::runtime_error(
          "d-separation: X, Y, Z overlap after collapsing joint vertices");
    }
  }

  // Ancestors of Z (including Z) for collider activation.
  std::vector<char> anc_z(static_cast<size_t>(dag.nvert), 0);
  {
    std::deque<int> queue;
    for (int v = 0; v < dag.nvert; ++v) {
      if (in_z[static_cast<size_t>(v)]) {
        anc_z[static_cast<size_t>(v)] = 1;
        queue.push_back(v);
      }
    }
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int p : dag.parents[static_cast<size_t>(v)]) {
        if (!anc_z[static_cast<size_t>(p)]) {
          anc_z[static_cast<size_t>(p)] = 1;
          queue.push_back(p);
        }
      }
    }
  }

  // Active-trail reachability over (vertex, arrival direction) states.
  constexpr int kUp = 0, kDown = 1;
  std::vector<char> visited(static_cast<size_t>(dag.nvert) * 2, 0);
  std::deque<std::pair<int, int>> queue;
  for (int v = 0; v < dag.nvert; ++v) {
    if (in_x[static_cast<size_t>(v)]) queue.emplace_back(v, kUp);
  }
  while (!queue.empty()) {
    const auto [v, dir] = queue.front();
    queue.pop_front();
    char& mark = visited[static_cast<size_t>(v) * 2 + static_cast<size_t>(dir)];
    if (mark) continue;
    mark = 1;
    if (!in_z[static_cast<size_t>(v)] && in_y[static_cast<size_t>(v)])
      return false;
    if (dir == kUp && !in_z[static_cast<size_t>(v)]) {
      for (int p : dag.parents[static_cast<size_t>(v)])
        queue.emplace_back(p, kUp);
      for (int c : dag.children[static_cast<size_t>(v)])
        queue.emplace_back(c, kDown);
    } else if (dir == kDown) {
      if (!in_z[static_cast<size_t>(v)]) {
        for (int c : dag.children[static_cast<size_t>(v)])
          queue.emplace_back(c, kDown);
      }
      if (anc_z[static_cast<size_t>(v)]) {
        for (int p : dag.parents[static_cast<size_t>(v)])
          queue.emplace_back(p, kUp);
      }
    }
  }
  return true;
}

namespace {

class RowCollector {
 public:
  explicit RowCollector(const SubsetIndex& index) : index_(index) {}

  void add(const TermBuilder& builder, Relation rel, RowOrigin origin) {
    if (builder.empty()) return;
    ConstraintRow row =
        canonicalize_row(builder.to_row(index_, rel, origin));
    row.origin = origin;
    if (row.trivial()) return;
    if (seen_.insert(row_key(row)).second) rows_.push_back(std::move(row));
  }

  void add_row(const ConstraintRow& raw) {
    ConstraintRow row = canonicalize_row(raw);
    row.origin = raw.origin;
    if (row.trivial()) return;
    if (seen_.insert(row_key(row)).second) rows_.push_back(std::move(row));
  }

  std::vector<ConstraintRow> take() { return std::move(rows_); }

 private:
  const SubsetIndex& index_;
  std::unordered_set<std::string> seen_;
  std::vector<ConstraintRow> rows_;
};

}  // namespace

ConstraintSystem elemental_inequalities(const CausalStructure& s) {
  ConstraintSystem system{subset_coordinates(s), {}};
  RowCollector rows(system.index);

  for (const Mask top : coexisting_sets(s)) {
    if (popcount(top) > 14) {
      throw std::runtime_error(
          "coexisting set {" + s.label(top) +
          "} too large for elemental generation");
    }
    // Submodularity: I(i : j | K) >= 0.
    for (Mask rest = top; rest;) {
      const int i = __builtin_ctzll(rest);
      rest &= rest - 1;
      for (Mask rest2 = rest; rest2;) {
        const int j = __builtin_ctzll(rest2);
        rest2 &= rest2 - 1;
        const Mask pairless = top & ~(Mask{1} << i) & ~(Mask{1} << j);
        Mask k = 0;
        while (true) {
          TermBuilder b;
          b.add_mutual(Mask{1} << i, Mask{1} << j, k, 1);
          rows.add(b, Relation::GeqZero, RowOrigin::Submodularity);
          if (k == pairless) break;
          k = (k - pairless) & pairless;  // next submask of pairless
        }
      }
    }
    for (Mask rest = top; rest;) {
      const int v = __builtin_ctzll(rest);
      rest &= rest - 1;
      const Mask others = top & ~(Mask{1} << v);
      if (!s.is_quantum(v)) {
        // Classical monotonicity: H(v | top \ v) >= 0.
        TermBuilder b;
        b.add_conditional(Mask{1} << v, others, 1);
        rows.add(b, Relation::GeqZero, RowOrigin::Monotonicity);
      } else {
        // Weak monotonicity over every unordered bipartition (W, W') of
        // top \ {v}:  H(vW) + H(vW') - H(W) - H(W') >= 0.
        Mask w = 0;
        while (true) {
          const Mask w2 = others & ~w;
          if (w <= w2) {
            TermBuilder b;
            b.add_entropy((Mask{1} << v) | w, 1);
            b.add_entropy((Mask{1} << v) | w2, 1);
            b.add_entropy(w, -1);
            b.add_entropy(w2, -1);
            rows.add(b, Relation::GeqZero, RowOrigin::WeakMonotonicity);
          }
          if (w == others) break;
          w = (w - others) & others;
        }
      }
    }
  }
  system.rows = rows.take();
  return system;
}

ConstraintSystem conditional_independencies(const CausalStructure& s) {
  const StructureInfo info = analyze(s);
  const CollapsedDag dag = collapse(s);
  ConstraintSystem system{subset_coordinates(s), {}};
  RowCollector rows(system.index);
  const int nprep = static_cast<int>(s.preparations.size());

  // Vertex-level descendants.
  std::vector<Mask> vdesc(static_cast<size_t>(dag.nvert), 0);
  for (int v = dag.nvert - 1; v >= 0; --v) {
    for (int c : dag.children[static_cast<size_t>(v)]) {
      vdesc[static_cast<size_t>(v)] |= Mask{1} << c;
      vdesc[static_cast<size_t>(v)] |= vdesc[static_cast<size_t>(c)];
    }
  }
  // children/parents lists are only forward edges, so a reverse pass is
  // enough: operations are declared after their inputs' producers only in
  // well-formed files, but do not rely on it.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < dag.nvert; ++v) {
      Mask acc = vdesc[static_cast<size_t>(v)];
      for (int c : dag.children[static_cast<size_t>(v)]) {
        acc |= Mask{1} << c;
        acc |= vdesc[static_cast<size_t>(c)];
      }
      if (acc != vdesc[static_cast<size_t>(v)]) {
        vdesc[static_cast<size_t>(v)] = acc;
        changed = true;
      }
    }
  }

  // Local Markov for each produced (operation) vertex, preparations
  // collapsed; only statements with coexisting support survive.
  for (size_t o = 0; o < s.operations.size(); ++o) {
    const int v = nprep + static_cast<int>(o);
    Mask x = dag.systems[static_cast<size_t>(v)];
    Mask z = 0;
    for (int p : dag.parents[static_cast<size_t>(v)])
      z |= dag.systems[static_cast<size_t>(p)];
    Mask y = 0;
    for (int u = 0; u < dag.nvert; ++u) {
      if (u == v) continue;
      if (vdesc[static_cast<size_t>(v)] & (Mask{1} << u)) continue;
      const bool is_parent =
          std::find(dag.parents[static_cast<size_t>(v)].begin(),
                    dag.parents[static_cast<size_t>(v)].end(),
                    u) != dag.parents[static_cast<size_t>(v)].end();
      if (is_parent) continue;
      y |= dag.systems[static_cast<size_t>(u)];
    }
    if (y == 0) continue;
    if (!coexisting(info, x | y | z)) continue;
    TermBuilder b;
    b.add_mutual(x, y, z, 1);
    rows.add(b, Relation::EqZero, RowOrigin::Independence);
  }

  // Mutual independence of all preparations.
  if (s.preparations.size() >= 2) {
    TermBuilder b;
    Mask all = 0;
    for (const auto& prep : s.preparations) {
      const Mask m = s.mask_of(prep.systems);
      b.add_entropy(m, -1);
      all |= m;
    }
    b.add_entropy(all, 1);
    rows.add(b, Relation::EqZero, RowOrigin::Independence);
  }

  system.rows = rows.take();
  return system;
}

ConstraintSystem data_processing_inequalities(const CausalStructure& s) {
  const StructureInfo info = analyze(s);
  ConstraintSystem system{subset_coordinates(s), {}};
  RowCollector rows(system.index);
  const std::vector<Mask> maximal = coexisting_sets(s);

  struct QuadHash {
    size_t operator()(const std::array<Mask, 4>& q) const {
      size_t h = 0;
      for (Mask m : q) h = h * 1000003u + std::hash<Mask>()(m);
      return h;
    }
  };
  std::unordered_set<std::array<Mask, 4>, QuadHash> emitted;

  for (const auto& op : s.operations) {
    const Mask p = s.mask_of(op.inputs);
    const Mask o = s.mask_of(op.outputs);
    // The operation's fresh randomness is independent of everything that
    // does not causally depend on its outputs -- and of nothing else.  (W, Z)
    // must therefore avoid strict descendants of O: conditioning on a
    // downstream system can correlate W with the noise and break the row.
    Mask odesc = 0;
    for (int id : op.outputs)
      odesc |= info.descendants[static_cast<size_t>(id)];
    odesc &= ~o;
    for (const Mask top : maximal) {
      if (!subset_of(o, top)) continue;
      if (!coexisting(info, (top & ~o) | p)) continue;
      const Mask r = top & ~o & ~odesc;
      // All disjoint pairs (W, Z) within r, W nonempty.
      Mask w = r;
      for (; w; w = (w - 1) & r) {
        const Mask zspace = r & ~w;
        Mask z = 0;
        while (true) {
          if (emitted.insert({w, z, o, p}).second) {
            TermBuilder b;
            b.add_mutual(w, p | z, 0, 1);
            b.add_mutual(w, o | z, 0, -1);
            rows.add(b, Relation::GeqZero, RowOrigin::DataProcessing);
          }
          if (z == zspace) break;
          z = (z - zspace) & zspace;
        }
      }
    }
  }
  system.rows = rows.take();
  return system;
}

ConstraintSystem assemble(const CausalStructure& s,
                          const std::vector<ConstraintRow>& extra) {
  ConstraintSystem system{subset_coordinates(s), {}};
  RowCollector rows(system.index);
  for (auto& row : elemental_inequalities(s).rows) rows.add_row(row);
  for (auto& row : conditional_independencies(s).rows) rows.add_row(row);
  for (auto& row : data_processing_inequalities(s).rows) rows.add_row(row);
  for (const auto& row : extra) rows.add_row(row);
  system.rows = rows.take();
  return system;
}

}  // namespace entrocone
