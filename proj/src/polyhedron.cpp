#include "entrocone/polyhedron.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "entrocone/verify.hpp"
#include "lp_core.hpp"

namespace entrocone {

namespace {

// ---------------------------------------------------------------------------
// Budgeted implication probe: is `target` a nonnegative/free combination of
// the other rows?  Working-set growth mirrors is_valid_ex but with a pivot
// cap so that intermediate Fourier-Motzkin pruning stays cheap.  Returns
// +1 implied, -1 not implied, 0 unknown (budget hit).

int implied_probe(const std::vector<ConstraintRow>& rows, int skip, int dim,
                  const std::vector<std::pair<int, Rat>>& target,
                  int max_rounds, long max_pivots,
                  std::vector<Rat>* witness = nullptr) {
  std::vector<char> in_set(static_cast<size_t>(dim), 0);
  auto touch = [&](const std::vector<std::pair<int, Rat>>& terms) {
    for (const auto& [coord, val] : terms)
      if (val != 0) in_set[static_cast<size_t>(coord)] = 1;
  };
  touch(target);

  std::vector<char> admitted(rows.size(), 0);
  std::vector<detail::LpRow> lp_rows;
  auto collect = [&]() {
    for (size_t i = 0; i < rows.size(); ++i) {
      if (admitted[i] || static_cast<int>(i) == skip) continue;
      bool inside = true;
      for (const auto& [coord, val] : rows[i].terms) {
        if (val != 0 && !in_set[static_cast<size_t>(coord)]) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      admitted[i] = 1;
      lp_rows.push_back({rows[i].terms, rows[i].rel == Relation::EqZero});
    }
  };
  collect();

  for (int round = 0;; ++round) {
    if (max_rounds > 0 && round >= max_rounds) return 0;
    detail::FarkasOutcome lp =
        detail::farkas_membership(lp_rows, target, dim, max_pivots);
    if (lp.pivot_budget_hit) return 0;
    if (lp.feasible) return 1;
    int added = 0;
    for (size_t i = 0; i < rows.size() && added < 256; ++i) {
      if (admitted[i] || static_cast<int>(i) == skip) continue;
      Rat v(0);
      bool outside = false;
      for (const auto& [coord, val] : rows[i].terms) {
        v += val * lp.h[static_cast<size_t>(coord)];
        if (val != 0 && !in_set[static_cast<size_t>(coord)]) outside = true;
      }
      const bool violated =
          rows[i].rel == Relation::EqZero ? v != 0 : v < 0;
      if (violated && outside) {
        touch(rows[i].terms);
        ++added;
      }
    }
    if (added == 0) {
      if (witness != nullptr) *witness = std::move(lp.h);
      return -1;
    }
    collect();
  }
}

// ---------------------------------------------------------------------------
// Exact rational Gaussian elimination helpers.

struct Echelon {
  std::vector<std::vector<Rat>> rows;  // reduced row echelon, nonzero rows
  std::vector<int> pivots;             // pivot column per row
};

Echelon rref(std::vector<std::vector<Rat>> m, int width) {
  Echelon e;
  int lead = 0;
  for (size_t r = 0; r < m.size() && lead < width;) {
    size_t sel = r;
    while (sel < m.size() && m[sel][static_cast<size_t>(lead)] == 0) ++sel;
    if (sel == m.size()) {
      ++lead;
      continue;
    }
    std::swap(m[r], m[sel]);
    const Rat piv = m[r][static_cast<size_t>(lead)];
    for (int j = 0; j < width; ++j) m[r][static_cast<size_t>(j)] /= piv;
    for (size_t k = 0; k < m.size(); ++k) {
      if (k == r) continue;
      const Rat f = m[k][static_cast<size_t>(lead)];
      if (f == 0) continue;
      for (int j = 0; j < width; ++j)
        m[k][static_cast<size_t>(j)] -= f * m[r][static_cast<size_t>(j)];
    }
    e.pivots.push_back(lead);
    ++r;
    ++lead;
  }
  e.rows.assign(m.begin(), m.begin() + static_cast<long>(e.pivots.size()));
  return e;
}

// Basis of {x : M x = 0}; one vector per non-pivot column.
std::vector<std::vector<Rat>> null_space(const Echelon& e, int width) {
  std::vector<char> is_pivot(static_cast<size_t>(width), 0);
  for (int p : e.pivots) is_pivot[static_cast<size_t>(p)] = 1;
  std::vector<std::vector<Rat>> basis;
  for (int f = 0; f < width; ++f) {
    if (is_pivot[static_cast<size_t>(f)]) continue;
    std::vector<Rat> v(static_cast<size_t>(width), Rat(0));
    v[static_cast<size_t>(f)] = 1;
    for (size_t r = 0; r < e.rows.size(); ++r)
      v[static_cast<size_t>(e.pivots[r])] = -e.rows[r][static_cast<size_t>(f)];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Rat> ray_to_rat(const Ray& ray) {
  std::vector<Rat> v;
  v.reserve(ray.coords.size());
  for (const Int& x : ray.coords) v.emplace_back(x);
  return v;
}

// Scale to coprime integers, preserving direction.
Ray primitive_ray(const std::vector<Rat>& v) {
  Int lcm(1);
  for (const Rat& x : v)
    if (x != 0) lcm = lcm / gcd(lcm, x.get_den()) * x.get_den();
  std::vector<Int> w;
  w.reserve(v.size());
  Int g(0);
  for (const Rat& x : v) {
    Rat scaled = x * Rat(lcm);
    w.push_back(scaled.get_num());
    g = gcd(g, w.back());
  }
  if (g != 0)
    for (Int& x : w) x /= g;
  return Ray{std::move(w)};
}

bool ray_less(const Ray& a, const Ray& b) {
  return std::lexicographical_compare(a.coords.begin(), a.coords.end(),
                                      b.coords.begin(), b.coords.end());
}

// ---------------------------------------------------------------------------

std::vector<ConstraintRow> canonical_unique(
    const std::vector<ConstraintRow>& rows) {
  std::vector<ConstraintRow> out;
  std::unordered_set<std::string> seen;
  for (const auto& raw : rows) {
    ConstraintRow row = canonicalize_row(raw);
    if (row.trivial()) continue;
    if (seen.insert(row_key(row)).second) out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

ConstraintSystem fm_eliminate(const ConstraintSystem& system,
                              const std::vector<int>& drop,
                              const FmOptions& options) {
  const int dim = system.index.size();
  std::vector<char> dropping(static_cast<size_t>(dim), 0);
  for (int id : drop) {
    if (id < 0 || id >= dim)
      throw std::runtime_error("fm_eliminate: coordinate id out of range");
    dropping[static_cast<size_t>(id)] = 1;
  }

  std::vector<ConstraintRow> rows = canonical_unique(system.rows);

  // Independence saturation: an equality row shaped like a conditional
  // independence implies a zero statement for every coordinate inside its
  // support, which the Gaussian phase can spend as a substitution.
  //   split shape  sum_i H(g_i) = H(g_1..g_k)  ->  H(U) = H(U&g) + H(U\g)
  //   cmi shape    I(X:Y|Z) = 0                ->  H(U) = H((U&X)Z) +
  //                                                H((U&Y)Z) - H(Z), Z <= U
  // The sub-statements are chain-rule consequences of the pattern row minus
  // submodularity elementals inside its support, so a pattern is used only
  // when every such elemental is present; that keeps the projection exact
  // even on hand-built systems.
  struct CmiPattern {
    Mask x, y, z;
  };
  struct SplitPattern {
    std::vector<Mask> groups;
    Mask all;
  };
  std::vector<CmiPattern> cmis;
  std::vector<SplitPattern> splits;
  std::unordered_set<std::string> have_keys;
  for (const auto& row : rows) have_keys.insert(row_key(row));
  auto submodular_within = [&](Mask support) {
    std::vector<int> members;
    for (int i = 0; i < 64; ++i)
      if (support >> i & 1) members.push_back(i);
    for (size_t a = 0; a < members.size(); ++a) {
      for (size_t b = a + 1; b < members.size(); ++b) {
        const Mask mi = Mask(1) << members[a];
        const Mask mj = Mask(1) << members[b];
        const Mask rest = support & ~(mi | mj);
        for (Mask k = rest;; k = (k - 1) & rest) {
          ConstraintRow r;
          r.rel = Relation::GeqZero;
          const int iik = system.index.find(mi | k);
          const int ijk = system.index.find(mj | k);
          const int iijk = system.index.find(mi | mj | k);
          const int ik = k ? system.index.find(k) : -2;
          if (iik < 0 || ijk < 0 || iijk < 0 || ik == -1) return false;
          r.terms.emplace_back(iik, Rat(1));
          r.terms.emplace_back(ijk, Rat(1));
          r.terms.emplace_back(iijk, Rat(-1));
          if (k) r.terms.emplace_back(ik, Rat(-1));
          if (!have_keys.count(row_key(canonicalize_row(r)))) return false;
          if (k == 0) break;
        }
      }
    }
    return true;
  };
  for (const auto& row : rows) {
    if (row.rel != Relation::EqZero) continue;
    const auto& t = row.terms;
    {
      std::vector<Mask> groups;
      Mask neg = 0, uni = 0;
      int negs = 0;
      bool ok = t.size() >= 3;
      for (const auto& [c, v] : t) {
        const Mask m = system.index.subset(c);
        if (v == 1) {
          if (uni & m) ok = false;
          groups.push_back(m);
          uni |= m;
        } else if (v == -1) {
          ++negs;
          neg = m;
        } else {
          ok = false;
        }
      }
      if (ok && negs == 1 && neg == uni && groups.size() >= 2 &&
          submodular_within(uni)) {
        splits.push_back({std::move(groups), uni});
        continue;
      }
    }
    if (t.size() == 4 && t[0].second == 1 && t[1].second == -1 &&
        t[2].second == -1 && t[3].second == 1) {
      const Mask z = system.index.subset(t[0].first);
      const Mask a = system.index.subset(t[1].first);
      const Mask b = system.index.subset(t[2].first);
      const Mask u = system.index.subset(t[3].first);
      if ((a & b) == z && (a | b) == u && a != z && b != z &&
          submodular_within(u))
        cmis.push_back({a & ~z, b & ~z, z});
    }
  }
  if (!cmis.empty() || !splits.empty()) {
    std::vector<int> order;
    for (int id = 0; id < dim; ++id)
      if (dropping[static_cast<size_t>(id)]) order.push_back(id);
    std::sort(order.begin(), order.end(), [&](int l, int r) {
      return popcount(system.index.subset(l)) >
             popcount(system.index.subset(r));
    });
    for (int id : order) {
      const Mask u = system.index.subset(id);
      Mask a = 0, b = 0, z = 0;
      for (const auto& s : splits) {
        if ((u & ~s.all) != 0) continue;
        for (Mask g : s.groups) {
          if ((u & g) != 0 && (u & ~g) != 0) {
            a = u & g;
            b = u & ~g;
            break;
          }
        }
        if (a) break;
      }
      if (!a) {
        for (const auto& c : cmis) {
          if ((c.z & ~u) != 0 || (u & ~(c.x | c.y | c.z)) != 0) continue;
          if ((u & c.x) == 0 || (u & c.y) == 0) continue;
          a = (u & c.x) | c.z;
          b = (u & c.y) | c.z;
          z = c.z;
          break;
        }
      }
      if (!a) continue;
      const int ia = system.index.find(a);
      const int ib = system.index.find(b);
      const int iz = z ? system.index.find(z) : -2;
      if (ia < 0 || ib < 0 || iz == -1) continue;
      ConstraintRow red;
      red.rel = Relation::EqZero;
      red.origin = RowOrigin::Derived;
      red.terms.emplace_back(id, Rat(1));
      red.terms.emplace_back(ia, Rat(-1));
      red.terms.emplace_back(ib, Rat(-1));
      if (z) red.terms.emplace_back(iz, Rat(1));
      rows.push_back(canonicalize_row(red));
    }
    rows = canonical_unique(rows);
  }

  // Gaussian phase: spend equalities as pivots on dropped coordinates,
  // widest coordinate first so substitutions rewrite toward smaller subsets.
  {
    std::vector<ConstraintRow> eqs, ineqs;
    for (auto& r : rows)
      (r.rel == Relation::EqZero ? eqs : ineqs).push_back(std::move(r));
    auto width = [&](int id) {
      return popcount(system.index.subset(id));
    };
    auto widest_dropped = [&](const ConstraintRow& r) {
      int best = -1;
      for (const auto& [c, v] : r.terms)
        if (dropping[static_cast<size_t>(c)] &&
            (best < 0 || width(c) > width(best)))
          best = c;
      return best;
    };
    std::stable_sort(eqs.begin(), eqs.end(),
                     [&](const ConstraintRow& l, const ConstraintRow& r) {
                       const int wl = widest_dropped(l);
                       const int wr = widest_dropped(r);
                       return (wl < 0 ? -1 : width(wl)) >
                              (wr < 0 ? -1 : width(wr));
                     });
    std::map<int, ConstraintRow> pivots;
    auto reduce = [&](ConstraintRow row) {
      bool changed = true;
      while (changed && !row.terms.empty()) {
        changed = false;
        for (const auto& [c, v] : row.terms) {
          auto it = pivots.find(c);
          if (it == pivots.end()) continue;
          row = combine_rows(row, Rat(1), it->second,
                             Rat(-v / it->second.coeff(c)));
          changed = true;
          break;
        }
      }
      return row;
    };
    std::vector<ConstraintRow> kept_eqs;
    for (auto& eq : eqs) {
      const Relation rel = eq.rel;
      ConstraintRow r = reduce(std::move(eq));
      if (r.terms.empty()) continue;
      r.rel = rel;
      const int p = widest_dropped(r);
      if (p < 0) {
        kept_eqs.push_back(std::move(r));
        continue;
      }
      const Rat pc = r.coeff(p);
      for (auto& [c, prow] : pivots) {
        const Rat f = prow.coeff(p);
        if (f != 0) prow = combine_rows(prow, Rat(1), r, Rat(-f / pc));
      }
      pivots.emplace(p, std::move(r));
    }
    std::vector<ConstraintRow> next;
    next.reserve(kept_eqs.size() + ineqs.size());
    for (auto& r : kept_eqs) next.push_back(std::move(r));
    for (auto& r : ineqs) {
      ConstraintRow red = reduce(std::move(r));
      red.rel = Relation::GeqZero;
      next.push_back(std::move(red));
    }
    rows = canonical_unique(next);
  }

  // Remaining dropped coordinates touch inequality rows only.
  std::vector<int> todo;
  for (int id = 0; id < dim; ++id) {
    if (!dropping[static_cast<size_t>(id)]) continue;
    todo.push_back(id);
  }

  struct WorkRow {
    ConstraintRow row;
    char essential = 0;  // survived a prune as certified-irredundant
  };
  std::vector<WorkRow> work;
  work.reserve(rows.size());
  for (auto& r : rows) work.push_back({std::move(r), 0});

  std::vector<char> pending(static_cast<size_t>(dim), 0);
  for (int id : todo) pending[static_cast<size_t>(id)] = 1;

  // Incremental redundancy removal.  Rows marked essential were certified
  // irredundant in an earlier pass, and that verdict survives elimination
  // steps: every combination row is a positive combination of the previous
  // pos/neg rows, so a later implication of an untouched row would already
  // have held before.  They enter the certified core unverified.  Each
  // remaining candidate is first probed against the core alone -- implied
  // there means implied everywhere, an exact deletion.  Otherwise the
  // probe's separating witness satisfies the whole core; if it satisfies
  // every other live row too it certifies the candidate essential without a
  // full-system probe.  Only candidates failing both shortcuts pay for a
  // full probe, and only an exhaustive "not implied" verdict (never a
  // budget hit) marks them essential.
  auto prune = [&](std::vector<WorkRow>& current) {
    const size_t n = current.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      auto rank = [&](size_t i) {
        if (current[i].row.rel == Relation::EqZero) return 0;
        return current[i].essential ? 1 : 2;
      };
      return rank(a) < rank(b);
    });
    std::vector<char> dead(n, 0);
    std::vector<ConstraintRow> core_rows;
    auto core_push = [&](size_t i, bool certified) {
      core_rows.push_back(current[i].row);
      if (certified) current[i].essential = 1;
    };
    size_t n_core_kill = 0, n_witness = 0, n_full = 0;
    for (size_t k = 0; k < n; ++k) {
      const size_t i = order[k];
      if (current[i].row.rel == Relation::EqZero || current[i].essential) {
        core_push(i, true);
        continue;
      }
      std::vector<Rat> h;
      const int vs_core =
          implied_probe(core_rows, -1, dim, current[i].row.terms, 0, 0, &h);
      if (vs_core == 1) {
        dead[i] = 1;
        ++n_core_kill;
        continue;
      }
      bool lone = !h.empty();
      for (size_t j = 0; j < n && lone; ++j) {
        if (dead[j] || j == i) continue;
        Rat v(0);
        for (const auto& [c, val] : current[j].row.terms)
          v += val * h[static_cast<size_t>(c)];
        if (current[j].row.rel == Relation::EqZero ? v != 0 : v < 0)
          lone = false;
      }
      if (lone) {
        core_push(i, true);
        ++n_witness;
        continue;
      }
      std::vector<ConstraintRow> alive;
      alive.reserve(n - 1);
      for (size_t j = 0; j < n; ++j) {
        if (dead[j] || j == i) continue;
        alive.push_back(current[j].row);
      }
      ++n_full;
      const int verdict = implied_probe(alive, -1, dim, current[i].row.terms,
                                        options.prune_rounds_budget, 2000);
      if (verdict == 1)
        dead[i] = 1;
      else
        core_push(i, verdict == -1);
    }
    if (std::getenv("ENTROCONE_FM_TRACE") != nullptr)
      std::fprintf(stderr,
                   "fm:   prune core-kill=%zu witness=%zu full=%zu\n",
                   n_core_kill, n_witness, n_full);
    std::vector<WorkRow> kept;
    for (size_t i = 0; i < n; ++i)
      if (!dead[i]) kept.push_back(std::move(current[i]));
    current = std::move(kept);
  };

  const bool trace = std::getenv("ENTROCONE_FM_TRACE") != nullptr;
  if (trace)
    std::fprintf(stderr, "fm: start rows=%zu eliminate=%zu\n", work.size(),
                 todo.size());
  size_t steps_done = 0;
  while (!todo.empty()) {
    // Greedy coordinate choice: fewest pos x neg products.
    std::map<int, std::pair<size_t, size_t>> counts;
    for (int x : todo) counts[x] = {0, 0};
    for (const auto& w : work) {
      for (const auto& [c, v] : w.row.terms) {
        if (!pending[static_cast<size_t>(c)]) continue;
        auto& pn = counts[c];
        (v > 0 ? pn.first : pn.second) += 1;
      }
    }
    int best = -1;
    size_t best_score = 0;
    for (int x : todo) {
      const auto& pn = counts[x];
      const size_t score = pn.first * pn.second;
      if (best < 0 || score < best_score) {
        best = x;
        best_score = score;
      }
    }
    const int x = best;
    todo.erase(std::find(todo.begin(), todo.end(), x));
    pending[static_cast<size_t>(x)] = 0;
    ++steps_done;

    std::vector<WorkRow> zero;
    std::vector<WorkRow> pos;
    std::vector<WorkRow> neg;
    for (auto& w : work) {
      const Rat c = w.row.coeff(x);
      if (c == 0)
        zero.push_back(std::move(w));
      else if (c > 0)
        pos.push_back(std::move(w));
      else
        neg.push_back(std::move(w));
    }
    std::unordered_set<std::string> seen;
    for (const auto& w : zero) seen.insert(row_key(w.row));
    size_t n_new = 0;
    for (const auto& p : pos) {
      const Rat px = p.row.coeff(x);
      for (const auto& n : neg) {
        const Rat nx = n.row.coeff(x);
        ConstraintRow combined = combine_rows(p.row, -nx, n.row, px);
        combined.rel = Relation::GeqZero;
        combined = canonicalize_row(combined);
        if (combined.trivial()) continue;
        if (!seen.insert(row_key(combined)).second) continue;
        zero.push_back({std::move(combined), 0});
        ++n_new;
      }
    }
    work = std::move(zero);
    if (trace)
      std::fprintf(stderr, "fm: step %zu/%zu coord=%s rows=%zu new=%zu\n",
                   steps_done, steps_done + todo.size(),
                   system.index.label(system.index.subset(x)).c_str(),
                   work.size(), n_new);
    // Removal-only steps keep a minimal system minimal; nothing to prune.
    if (options.lp_prune && n_new > 0) {
      prune(work);
      if (trace)
        std::fprintf(stderr, "fm: pruned to %zu rows\n", work.size());
    }
  }

  // Re-index onto the surviving coordinates.
  std::vector<Mask> kept;
  std::vector<int> old_of_new;
  for (int id = 0; id < dim; ++id) {
    if (dropping[static_cast<size_t>(id)]) continue;
    kept.push_back(system.index.subset(id));
    old_of_new.push_back(id);
  }
  SubsetIndex reduced(system.index.names(), kept);
  std::vector<int> new_of_old(static_cast<size_t>(dim), -1);
  for (size_t j = 0; j < old_of_new.size(); ++j)
    new_of_old[static_cast<size_t>(old_of_new[j])] =
        reduced.id(kept[j]);

  ConstraintSystem out{std::move(reduced), {}};
  for (const auto& w : work) {
    ConstraintRow row;
    row.rel = w.row.rel;
    row.origin = RowOrigin::Derived;
    for (const auto& [coord, val] : w.row.terms) {
      const int nid = new_of_old[static_cast<size_t>(coord)];
      if (nid < 0)
        throw std::runtime_error("fm_eliminate: dropped coordinate survived");
      row.terms.emplace_back(nid, val);
    }
    std::sort(row.terms.begin(), row.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.rows.push_back(canonicalize_row(row));
  }
  out.rows = canonical_unique(out.rows);
  if (options.final_minimize) return remove_redundant(out);
  return out;
}

ConstraintSystem remove_redundant(const ConstraintSystem& system) {
  const int dim = system.index.size();
  std::vector<ConstraintRow> rows = canonical_unique(system.rows);

  // Independent equality basis.
  auto rebuild_equalities = [&](std::vector<ConstraintRow>& all) {
    std::vector<std::vector<Rat>> eq;
    std::vector<ConstraintRow> ineq;
    for (auto& row : all) {
      if (row.rel == Relation::EqZero) {
        std::vector<Rat> dense(static_cast<size_t>(dim), Rat(0));
        for (const auto& [coord, val] : row.terms)
          dense[static_cast<size_t>(coord)] = val;
        eq.push_back(std::move(dense));
      } else {
        ineq.push_back(std::move(row));
      }
    }
    std::vector<ConstraintRow> out;
    if (!eq.empty()) {
      const Echelon e = rref(std::move(eq), dim);
      for (const auto& r : e.rows) {
        ConstraintRow row;
        row.rel = Relation::EqZero;
        row.origin = RowOrigin::Derived;
        for (int j = 0; j < dim; ++j)
          if (r[static_cast<size_t>(j)] != 0)
            row.terms.emplace_back(j, r[static_cast<size_t>(j)]);
        out.push_back(canonicalize_row(row));
      }
    }
    for (auto& row : ineq) out.push_back(std::move(row));
    return out;
  };
  rows = rebuild_equalities(rows);

  // Inequalities that hold with equality everywhere become equality rows.
  bool promoted = true;
  while (promoted) {
    promoted = false;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].rel != Relation::GeqZero) continue;
      std::vector<std::pair<int, Rat>> neg = rows[i].terms;
      for (auto& [coord, val] : neg) val = -val;
      if (implied_probe(rows, -1, dim, neg, 0, 0) == 1) {
        rows[i].rel = Relation::EqZero;
        rows = rebuild_equalities(rows);
        rows = canonical_unique(rows);
        promoted = true;
        break;
      }
    }
  }

  // Drop inequalities implied by the rest.
  for (size_t i = rows.size(); i-- > 0;) {
    if (rows[i].rel != Relation::GeqZero) continue;
    if (implied_probe(rows, static_cast<int>(i), dim, rows[i].terms, 0, 0) ==
        1) {
      rows.erase(rows.begin() + static_cast<long>(i));
    }
  }

  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.rel != b.rel) return a.rel == Relation::EqZero;
    return row_key(a) < row_key(b);
  });
  return ConstraintSystem{system.index, std::move(rows)};
}

bool same_cone(const ConstraintSystem& a, const ConstraintSystem& b) {
  if (!a.index.same_universe(b.index) ||
      a.index.subsets() != b.index.subsets()) {
    throw std::runtime_error("same_cone: systems use different coordinates");
  }
  auto contains = [](const ConstraintSystem& outer,
                     const ConstraintSystem& inner) {
    for (const auto& row : inner.rows) {
      Candidate c;
      c.terms = row.terms;
      if (!is_valid(outer, c).valid()) return false;
      if (row.rel == Relation::EqZero) {
        for (auto& [coord, val] : c.terms) val = -val;
        if (!is_valid(outer, c).valid()) return false;
      }
    }
    return true;
  };
  return contains(a, b) && contains(b, a);
}

namespace {

// Double description on a pointed cone {u : A u >= 0} with rank(A) == r and
// u in Q^r.  Returns the extreme rays.
std::vector<std::vector<Rat>> dd_pointed(
    const std::vector<std::vector<Rat>>& a, int r) {
  // Initial simplicial cone from r independent rows.
  std::vector<std::vector<Rat>> basis;
  std::vector<size_t> basis_rows;
  {
    std::vector<std::vector<Rat>> probe;
    for (size_t i = 0; i < a.size(); ++i) {
      auto trial = probe;
      trial.push_back(a[i]);
      if (static_cast<int>(rref(trial, r).pivots.size()) >
          static_cast<int>(probe.size())) {
        probe = std::move(trial);
        basis_rows.push_back(i);
        basis.push_back(a[i]);
        if (static_cast<int>(basis.size()) == r) break;
      }
    }
  }
  if (static_cast<int>(basis.size()) != r)
    throw std::runtime_error("extreme_rays: inequality rank collapsed");

  // Invert the basis; the initial rays are its inverse's columns.
  std::vector<std::vector<Rat>> inv(
      static_cast<size_t>(r),
      std::vector<Rat>(static_cast<size_t>(r), Rat(0)));
  {
    std::vector<std::vector<Rat>> m = basis;
    for (int i = 0; i < r; ++i)
      inv[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    for (int col = 0; col < r; ++col) {
      int sel = -1;
      for (int row = col; row < r; ++row) {
        if (m[static_cast<size_t>(row)][static_cast<size_t>(col)] != 0) {
          sel = row;
          break;
        }
      }
      if (sel < 0) throw std::runtime_error("extreme_rays: singular basis");
      std::swap(m[static_cast<size_t>(sel)], m[static_cast<size_t>(col)]);
      std::swap(inv[static_cast<size_t>(sel)], inv[static_cast<size_t>(col)]);
      const Rat piv = m[static_cast<size_t>(col)][static_cast<size_t>(col)];
      for (int j = 0; j < r; ++j) {
        m[static_cast<size_t>(col)][static_cast<size_t>(j)] /= piv;
        inv[static_cast<size_t>(col)][static_cast<size_t>(j)] /= piv;
      }
      for (int row = 0; row < r; ++row) {
        if (row == col) continue;
        const Rat f = m[static_cast<size_t>(row)][static_cast<size_t>(col)];
        if (f == 0) continue;
        for (int j = 0; j < r; ++j) {
          m[static_cast<size_t>(row)][static_cast<size_t>(j)] -=
              f * m[static_cast<size_t>(col)][static_cast<size_t>(j)];
          inv[static_cast<size_t>(row)][static_cast<size_t>(j)] -=
              f * inv[static_cast<size_t>(col)][static_cast<size_t>(j)];
        }
      }
    }
  }

  struct DdRay {
    std::vector<Rat> u;
    std::vector<char> tight;  // per processed row
  };

  std::vector<size_t> processed = basis_rows;
  auto dot_u = [&](const std::vector<Rat>& row, const std::vector<Rat>& u) {
    Rat acc(0);
    for (int j = 0; j < r; ++j)
      acc += row[static_cast<size_t>(j)] * u[static_cast<size_t>(j)];
    return acc;
  };

  std::vector<DdRay> rays;
  for (int j = 0; j < r; ++j) {
    DdRay ray;
    ray.u.assign(static_cast<size_t>(r), Rat(0));
    for (int i = 0; i < r; ++i)
      ray.u[static_cast<size_t>(i)] = inv[static_cast<size_t>(i)][static_cast<size_t>(j)];
    ray.tight.assign(processed.size(), 0);
    for (size_t k = 0; k < processed.size(); ++k)
      ray.tight[k] = dot_u(a[processed[k]], ray.u) == 0 ? 1 : 0;
    rays.push_back(std::move(ray));
  }

  std::vector<char> in_basis(a.size(), 0);
  for (size_t i : basis_rows) in_basis[i] = 1;

  for (size_t next = 0; next < a.size(); ++next) {
    if (in_basis[next]) continue;
    std::vector<Rat> slack(rays.size());
    for (size_t i = 0; i < rays.size(); ++i)
      slack[i] = dot_u(a[next], rays[i].u);
    std::vector<size_t> pos, neg, zero;
    for (size_t i = 0; i < rays.size(); ++i) {
      if (slack[i] > 0)
        pos.push_back(i);
      else if (slack[i] < 0)
        neg.push_back(i);
      else
        zero.push_back(i);
    }
    // Adjacent (positive, negative) pairs spawn the boundary rays.
    std::vector<DdRay> born;
    for (size_t pi : pos) {
      for (size_t ni : neg) {
        bool adjacent = true;
        for (size_t qi = 0; qi < rays.size() && adjacent; ++qi) {
          if (qi == pi || qi == ni) continue;
          bool covers = true;
          for (size_t k = 0; k < processed.size(); ++k) {
            if (rays[pi].tight[k] && rays[ni].tight[k] &&
                !rays[qi].tight[k]) {
              covers = false;
              break;
            }
          }
          if (covers) adjacent = false;
        }
        if (!adjacent) continue;
        DdRay fresh;
        fresh.u.assign(static_cast<size_t>(r), Rat(0));
        for (int j = 0; j < r; ++j) {
          fresh.u[static_cast<size_t>(j)] =
              slack[pi] * rays[ni].u[static_cast<size_t>(j)] -
              slack[ni] * rays[pi].u[static_cast<size_t>(j)];
        }
        born.push_back(std::move(fresh));
      }
    }
    std::vector<DdRay> updated;
    updated.reserve(pos.size() + zero.size() + born.size());
    for (size_t i : pos) updated.push_back(std::move(rays[i]));
    for (size_t i : zero) updated.push_back(std::move(rays[i]));
    const size_t kept = updated.size();
    for (auto& b : born) updated.push_back(std::move(b));
    // Extend tight sets over the newly processed row.
    processed.push_back(next);
    for (size_t i = 0; i < updated.size(); ++i) {
      auto& ray = updated[i];
      if (i < kept) {
        ray.tight.push_back(dot_u(a[next], ray.u) == 0 ? 1 : 0);
      } else {
        ray.tight.assign(processed.size(), 0);
        for (size_t k = 0; k < processed.size(); ++k)
          ray.tight[k] = dot_u(a[processed[k]], ray.u) == 0 ? 1 : 0;
      }
    }
    rays = std::move(updated);
  }

  std::vector<std::vector<Rat>> out;
  out.reserve(rays.size());
  for (auto& ray : rays) out.push_back(std::move(ray.u));
  return out;
}

}  // namespace

ConeVRep extreme_rays(const ConstraintSystem& system) {
  const int dim = system.index.size();
  std::vector<ConstraintRow> rows = canonical_unique(system.rows);

  // Equalities restrict to a subspace: h = N t.
  std::vector<std::vector<Rat>> eq;
  std::vector<ConstraintRow> ineq;
  for (const auto& row : rows) {
    std::vector<Rat> dense(static_cast<size_t>(dim), Rat(0));
    for (const auto& [coord, val] : row.terms)
      dense[static_cast<size_t>(coord)] = val;
    if (row.rel == Relation::EqZero)
      eq.push_back(std::move(dense));
    else
      ineq.push_back(row);
  }
  std::vector<std::vector<Rat>> n_basis;  // columns of N, as vectors in h-space
  if (eq.empty()) {
    for (int i = 0; i < dim; ++i) {
      std::vector<Rat> v(static_cast<size_t>(dim), Rat(0));
      v[static_cast<size_t>(i)] = 1;
      n_basis.push_back(std::move(v));
    }
  } else {
    n_basis = null_space(rref(std::move(eq), dim), dim);
  }
  const int k = static_cast<int>(n_basis.size());
  ConeVRep out{system.index, {}, {}};
  if (k == 0) return out;  // only the origin satisfies the equalities

  // Project the inequalities into t-space: a'_j = sum_i a_i N[i][j].
  std::vector<std::vector<Rat>> at;
  for (const auto& row : ineq) {
    std::vector<Rat> v(static_cast<size_t>(k), Rat(0));
    bool nonzero = false;
    for (int j = 0; j < k; ++j) {
      Rat acc(0);
      for (const auto& [coord, val] : row.terms)
        acc += val * n_basis[static_cast<size_t>(j)][static_cast<size_t>(coord)];
      v[static_cast<size_t>(j)] = acc;
      if (acc != 0) nonzero = true;
    }
    if (nonzero) at.push_back(std::move(v));
  }

  auto to_h = [&](const std::vector<Rat>& t) {
    std::vector<Rat> h(static_cast<size_t>(dim), Rat(0));
    for (int j = 0; j < k; ++j) {
      if (t[static_cast<size_t>(j)] == 0) continue;
      for (int i = 0; i < dim; ++i)
        h[static_cast<size_t>(i)] +=
            t[static_cast<size_t>(j)] * n_basis[static_cast<size_t>(j)][static_cast<size_t>(i)];
    }
    return h;
  };

  // Lineality of {A t >= 0} is null(A); the pointed part lives in row space.
  const Echelon arr = at.empty() ? Echelon{} : rref(at, k);
  const int r = static_cast<int>(arr.pivots.size());
  std::vector<std::vector<Rat>> lin_t =
      at.empty()
          ? [&] {
              std::vector<std::vector<Rat>> full;
              for (int j = 0; j < k; ++j) {
                std::vector<Rat> v(static_cast<size_t>(k), Rat(0));
                v[static_cast<size_t>(j)] = 1;
                full.push_back(std::move(v));
              }
              return full;
            }()
          : null_space(arr, k);

  for (const auto& t : lin_t) out.lineality.push_back(primitive_ray(to_h(t)));
  std::sort(out.lineality.begin(), out.lineality.end(), ray_less);

  if (r > 0) {
    // u-space: t = R^T u with R the reduced row basis of A.
    std::vector<std::vector<Rat>> au;
    au.reserve(at.size());
    for (const auto& row : at) {
      std::vector<Rat> v(static_cast<size_t>(r), Rat(0));
      for (int i = 0; i < r; ++i) {
        Rat acc(0);
        for (int j = 0; j < k; ++j)
          acc += row[static_cast<size_t>(j)] *
                 arr.rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        v[static_cast<size_t>(i)] = acc;
      }
      au.push_back(std::move(v));
    }
    for (const auto& u : dd_pointed(au, r)) {
      std::vector<Rat> t(static_cast<size_t>(k), Rat(0));
      for (int i = 0; i < r; ++i) {
        if (u[static_cast<size_t>(i)] == 0) continue;
        for (int j = 0; j < k; ++j)
          t[static_cast<size_t>(j)] +=
              u[static_cast<size_t>(i)] *
              arr.rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
      }
      Ray ray = primitive_ray(to_h(t));
      bool zero = true;
      for (const Int& c : ray.coords)
        if (c != 0) zero = false;
      if (!zero) out.rays.push_back(std::move(ray));
    }
    std::sort(out.rays.begin(), out.rays.end(), ray_less);
    out.rays.erase(std::unique(out.rays.begin(), out.rays.end(),
                               [](const Ray& a, const Ray& b) {
                                 return a.coords == b.coords;
                               }),
                   out.rays.end());
  }
  return out;
}

ConstraintSystem hrep_from_vrep(const ConeVRep& vrep) {
  ConstraintSystem dual{vrep.index, {}};
  auto as_row = [](const Ray& ray, Relation rel) {
    ConstraintRow row;
    row.rel = rel;
    row.origin = RowOrigin::Derived;
    for (size_t i = 0; i < ray.coords.size(); ++i)
      if (ray.coords[i] != 0)
        row.terms.emplace_back(static_cast<int>(i), Rat(ray.coords[i]));
    return row;
  };
  for (const auto& ray : vrep.rays)
    dual.rows.push_back(as_row(ray, Relation::GeqZero));
  for (const auto& ray : vrep.lineality)
    dual.rows.push_back(as_row(ray, Relation::EqZero));

  const ConeVRep facets = extreme_rays(dual);
  ConstraintSystem out{vrep.index, {}};
  for (const auto& ray : facets.lineality)
    out.rows.push_back(canonicalize_row(as_row(ray, Relation::EqZero)));
  for (const auto& ray : facets.rays)
    out.rows.push_back(canonicalize_row(as_row(ray, Relation::GeqZero)));
  std::sort(out.rows.begin(), out.rows.end(),
            [](const auto& a, const auto& b) {
              if (a.rel != b.rel) return a.rel == Relation::EqZero;
              return row_key(a) < row_key(b);
            });
  return out;
}

// ---------------------------------------------------------------------------
// Text formats.

namespace {

void write_legend(std::ostream& out, const SubsetIndex& index) {
  out << "DIM " << index.size() << "\n";
  out << "VARIABLES";
  for (const auto& name : index.names()) out << " " << name;
  out << "\n";
  out << "COORDINATES\n";
  for (int i = 0; i < index.size(); ++i)
    out << (i + 1) << " " << index.label(index.subset(i)) << "\n";
}

SubsetIndex read_legend(std::istream& in, int& dim) {
  std::string tok;
  in >> tok;
  if (tok != "DIM") throw std::runtime_error("legend: expected DIM");
  in >> dim;
  in >> tok;
  if (tok != "VARIABLES") throw std::runtime_error("legend: expected VARIABLES");
  std::string line;
  std::getline(in, line);
  std::istringstream vars(line);
  std::vector<std::string> names;
  while (vars >> tok) names.push_back(tok);
  in >> tok;
  if (tok != "COORDINATES")
    throw std::runtime_error("legend: expected COORDINATES");
  SubsetIndex tmp(names, {});
  std::vector<Mask> subsets;
  for (int i = 0; i < dim; ++i) {
    int idx;
    std::string label;
    in >> idx >> label;
    if (idx != i + 1) throw std::runtime_error("legend: bad coordinate order");
    std::vector<std::string> parts;
    std::string cur;
    for (char c : label) {
      if (c == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) parts.push_back(cur);
    subsets.push_back(tmp.mask_of(parts));
  }
  return SubsetIndex(names, subsets);
}

}  // namespace

void write_ieq(std::ostream& out, const ConstraintSystem& system) {
  std::vector<ConstraintRow> eqs, ineqs;
  for (const auto& raw : system.rows) {
    ConstraintRow row = canonicalize_row(raw);
    if (row.trivial()) continue;
    (row.rel == Relation::EqZero ? eqs : ineqs).push_back(std::move(row));
  }
  write_legend(out, system.index);
  auto dump = [&](const std::vector<ConstraintRow>& rows, const char* tail) {
    for (const auto& row : rows) {
      std::vector<Rat> dense(static_cast<size_t>(system.index.size()), Rat(0));
      for (const auto& [coord, val] : row.terms)
        dense[static_cast<size_t>(coord)] = val;
      for (const auto& v : dense) out << rat_to_string(v) << " ";
      out << tail << "\n";
    }
  };
  out << "INEQUALITIES " << ineqs.size() << "\n";
  dump(ineqs, ">= 0");
  out << "EQUALITIES " << eqs.size() << "\n";
  dump(eqs, "= 0");
  out << "END\n";
}

ConstraintSystem read_ieq(std::istream& in) {
  int dim = 0;
  SubsetIndex index = read_legend(in, dim);
  ConstraintSystem system{index, {}};
  std::string tok;
  auto read_rows = [&](Relation rel, size_t count) {
    for (size_t i = 0; i < count; ++i) {
      ConstraintRow row;
      row.rel = rel;
      for (int j = 0; j < dim; ++j) {
        std::string val;
        in >> val;
        const Rat v = parse_rational(val);
        if (v != 0) row.terms.emplace_back(j, v);
      }
      std::string cmp, zero;
      in >> cmp >> zero;
      if (zero != "0" || (cmp != ">=" && cmp != "="))
        throw std::runtime_error("ieq: malformed row tail");
      system.rows.push_back(canonicalize_row(row));
    }
  };
  while (in >> tok) {
    if (tok == "INEQUALITIES") {
      size_t count;
      in >> count;
      read_rows(Relation::GeqZero, count);
    } else if (tok == "EQUALITIES") {
      size_t count;
      in >> count;
      read_rows(Relation::EqZero, count);
    } else if (tok == "END") {
      return system;
    } else {
      throw std::runtime_error("ieq: unexpected token '" + tok + "'");
    }
  }
  throw std::runtime_error("ieq: missing END");
}

void write_poi(std::ostream& out, const ConeVRep& vrep) {
  write_legend(out, vrep.index);
  auto dump = [&](const std::vector<Ray>& rays) {
    for (const auto& ray : rays) {
      for (const auto& c : ray.coords) out << c.get_str() << " ";
      out << "\n";
    }
  };
  out << "RAYS " << vrep.rays.size() << "\n";
  dump(vrep.rays);
  out << "LINEALITY " << vrep.lineality.size() << "\n";
  dump(vrep.lineality);
  out << "END\n";
}

ConeVRep read_poi(std::istream& in) {
  int dim = 0;
  SubsetIndex index = read_legend(in, dim);
  ConeVRep vrep{index, {}, {}};
  std::string tok;
  auto read_rays = [&](std::vector<Ray>& into, size_t count) {
    for (size_t i = 0; i < count; ++i) {
      Ray ray;
      for (int j = 0; j < dim; ++j) {
        std::string val;
        in >> val;
        ray.coords.emplace_back(val);
      }
      into.push_back(std::move(ray));
    }
  };
  while (in >> tok) {
    if (tok == "RAYS") {
      size_t count;
      in >> count;
      read_rays(vrep.rays, count);
    } else if (tok == "LINEALITY") {
      size_t count;
      in >> count;
      read_rays(vrep.lineality, count);
    } else if (tok == "END") {
      return vrep;
    } else {
      throw std::runtime_error("poi: unexpected token '" + tok + "'");
    }
  }
  throw std::runtime_error("poi: missing END");
}

}  // namespace entrocone
