#include "entrocone/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <istream>
#include <stdexcept>

#include "lp_core.hpp"
#include "nlohmann/json.hpp"

namespace entrocone {

Candidate candidate_from_row(const ConstraintRow& row) {
  if (row.rel != Relation::GeqZero)
    throw std::runtime_error("candidate_from_row: expected an inequality row");
  Candidate c;
  c.terms = row.terms;
  return c;
}

namespace {

Rat sparse_dot(const std::vector<std::pair<int, Rat>>& terms,
               const std::vector<Rat>& h) {
  Rat acc(0);
  for (const auto& [coord, val] : terms)
    acc += val * h[static_cast<size_t>(coord)];
  return acc;
}

struct SepResult {
  Certificate::Verdict verdict = Certificate::Verdict::NotImplied;
  std::vector<std::pair<int, Rat>> multipliers;  // indices into the row list
  std::vector<Rat> witness;
  bool budget_exhausted = false;
};

SepResult separate_rows(int dim, const std::vector<ConstraintRow>& rows,
                        const std::vector<std::pair<int, Rat>>& cand,
                        const VerifyOptions& options) {
  SepResult result;

  // Cutting-plane loop: the LP only ever holds rows that rejected an earlier
  // separating vector, and the solver resumes from its previous basis when
  // new rows arrive.  Rows whose support stays inside the coordinates already
  // touched are preferred: they cut without enlarging the LP's equation set.
  detail::FarkasSolver solver(dim, cand);
  std::vector<char> in_set(static_cast<size_t>(dim), 0);
  for (const auto& [coord, val] : cand)
    if (val != 0) in_set[static_cast<size_t>(coord)] = 1;

  std::vector<std::vector<int>> rows_on_coord(static_cast<size_t>(dim));
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& [coord, val] : rows[i].terms)
      if (val != 0) rows_on_coord[static_cast<size_t>(coord)].push_back(static_cast<int>(i));

  std::vector<char> admitted(rows.size(), 0);
  std::vector<int> admitted_ids;
  auto admit = [&](int id) {
    admitted[static_cast<size_t>(id)] = 1;
    admitted_ids.push_back(id);
    const ConstraintRow& row = rows[static_cast<size_t>(id)];
    for (const auto& [coord, val] : row.terms)
      if (val != 0) in_set[static_cast<size_t>(coord)] = 1;
    solver.add_row({row.terms, row.rel == Relation::EqZero});
  };

  const bool trace = std::getenv("ENTROCONE_LP_TRACE") != nullptr;
  std::vector<int> seen(rows.size(), -1);
  std::vector<double> hd(static_cast<size_t>(dim), 0.0);

  for (int round = 0;; ++round) {
    if (options.max_rounds > 0 && round >= options.max_rounds) {
      result.budget_exhausted = true;
      result.verdict = Certificate::Verdict::NotImplied;
      return result;
    }
    if (solver.solve() == detail::FarkasSolver::Status::Feasible) {
      result.verdict = Certificate::Verdict::Valid;
      const std::vector<Rat> mults = solver.multipliers();
      for (size_t k = 0; k < mults.size(); ++k) {
        if (mults[k] != 0)
          result.multipliers.emplace_back(admitted_ids[k], mults[k]);
      }
      std::sort(result.multipliers.begin(), result.multipliers.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      return result;
    }
    const std::vector<Rat> h = solver.witness();

    // Only rows meeting a nonzero coordinate of h can reject it; gather them
    // through the coordinate index.  A double-precision pass weeds out rows
    // that are clearly satisfied; anything near the guard band is re-checked
    // exactly, so the verdict never rests on floating point.
    double hmax = 0.0;
    std::vector<int> possible;
    for (int c = 0; c < dim; ++c) {
      if (h[static_cast<size_t>(c)] == 0) continue;
      hd[static_cast<size_t>(c)] = h[static_cast<size_t>(c)].get_d();
      const double a = std::abs(hd[static_cast<size_t>(c)]);
      if (a > hmax) hmax = a;
      for (int id : rows_on_coord[static_cast<size_t>(c)]) {
        if (!admitted[static_cast<size_t>(id)] && seen[static_cast<size_t>(id)] != round) {
          seen[static_cast<size_t>(id)] = round;
          possible.push_back(id);
        }
      }
    }
    struct Violated {
      int fresh;    // support coordinates outside the touched set
      double depth; // violation scaled by row and witness magnitude; < 0
      int id;
    };
    std::vector<Violated> violated;
    auto push_violated = [&](int id, double depth) {
      const ConstraintRow& row = system.rows[static_cast<size_t>(id)];
      int fresh = 0;
      for (const auto& [coord, val] : row.terms)
        if (val != 0 && !in_set[static_cast<size_t>(coord)]) ++fresh;
      violated.push_back({fresh, depth, id});
    };
    // Admission does not need exact arithmetic: an extra satisfied row is
    // merely an unused column.  Exactness is required only before concluding
    // NotImplied, which gets a full exact rescan below.
    std::vector<int> ambiguous;
    for (int id : possible) {
      const ConstraintRow& row = system.rows[static_cast<size_t>(id)];
      double acc = 0.0;
      double mag = 0.0;
      for (const auto& [coord, val] : row.terms) {
        const double dv = val.get_d();
        acc += dv * hd[static_cast<size_t>(coord)];
        mag += std::abs(dv);
      }
      const double scale = mag * hmax;
      const double depth = scale > 0 ? acc / scale : 0.0;
      if (!std::isfinite(depth) || std::abs(depth) <= 1e-7) {
        ambiguous.push_back(id);
        continue;
      }
      if (row.rel == Relation::EqZero)
        push_violated(id, -std::abs(depth));
      else if (depth < 0)
        push_violated(id, depth);
    }
    for (int id : ambiguous) {
      const ConstraintRow& row = system.rows[static_cast<size_t>(id)];
      const Rat v = sparse_dot(row.terms, h);
      if (row.rel == Relation::EqZero ? v != 0 : v < 0)
        push_violated(id, 0.0);
    }
    if (violated.empty()) {
      // The prefilter may only skip rows it believes satisfied; confirm the
      // no-violation conclusion with exact arithmetic before concluding.
      for (int id : possible) {
        const ConstraintRow& row = system.rows[static_cast<size_t>(id)];
        const Rat v = sparse_dot(row.terms, h);
        if (row.rel == Relation::EqZero ? v != 0 : v < 0)
          push_violated(id, 0.0);
      }
    }
    for (int c = 0; c < dim; ++c)
      if (h[static_cast<size_t>(c)] != 0) hd[static_cast<size_t>(c)] = 0.0;
    if (violated.empty()) {
      result.certificate.verdict = Certificate::Verdict::NotImplied;
      result.certificate.witness = h;
      return result;
    }
    // Deepest cuts first; pure cuts (no new coordinates) ahead of rows that
    // enlarge the equation set, which share a per-round budget of fresh
    // coordinates so the LP grows in controlled steps.
    std::sort(violated.begin(), violated.end(), [](const Violated& a, const Violated& b) {
      const bool ap = a.fresh == 0;
      const bool bp = b.fresh == 0;
      if (ap != bp) return ap;
      if (a.depth != b.depth) return a.depth < b.depth;
      return a.id < b.id;
    });
    int added = 0;
    int fresh_budget = 48;
    const int cut_cap = std::min(options.max_new_rows_per_round, 96);
    for (const Violated& v : violated) {
      if (added >= cut_cap) break;
      if (v.fresh > 0) {
        if (v.fresh > fresh_budget) continue;
        fresh_budget -= v.fresh;
      }
      admit(v.id);
      ++added;
    }
    if (trace)
      std::fprintf(stderr,
                   "lp: round=%d admitted=%zu eqs=%d pivots=%ld possible=%zu violated=%zu added=%d\n",
                   round, admitted_ids.size(), solver.equation_count(),
                   solver.pivot_count(), possible.size(), violated.size(), added);
  }
}

Certificate is_valid(const ConstraintSystem& system,
                     const Candidate& candidate) {
  return is_valid_ex(system, candidate, {}).certificate;
}

bool replay(const ConstraintSystem& system, const Candidate& candidate,
            const Certificate& certificate) {
  const int dim = static_cast<int>(system.index.size());
  if (certificate.verdict == Certificate::Verdict::Valid) {
    std::map<int, Rat> acc;
    for (const auto& [row_id, mult] : certificate.multipliers) {
      if (row_id < 0 || row_id >= static_cast<int>(system.rows.size()))
        return false;
      const ConstraintRow& row = system.rows[static_cast<size_t>(row_id)];
      if (row.rel == Relation::GeqZero && mult < 0) return false;
      for (const auto& [coord, val] : row.terms) acc[coord] += mult * val;
    }
    for (const auto& [coord, val] : candidate.terms) acc[coord] -= val;
    for (const auto& [coord, val] : acc) {
      (void)coord;
      if (val != 0) return false;
    }
    return true;
  }
  if (certificate.witness.size() != static_cast<size_t>(dim)) return false;
  for (const auto& row : system.rows) {
    const Rat v = sparse_dot(row.terms, certificate.witness);
    if (row.rel == Relation::EqZero ? v != 0 : v < 0) return false;
  }
  return sparse_dot(candidate.terms, certificate.witness) < 0;
}

void write_certificate(std::ostream& out, const ConstraintSystem& system,
                       const Candidate& candidate,
                       const Certificate& certificate) {
  nlohmann::json doc;
  doc["verdict"] =
      certificate.valid() ? "valid" : "not_implied";
  nlohmann::json cand = nlohmann::json::array();
  for (const auto& [coord, val] : candidate.terms) {
    cand.push_back({{"coordinate", system.index.label(system.index.subset(coord))},
                    {"value", rat_to_string(val)}});
  }
  doc["candidate"] = std::move(cand);
  if (certificate.valid()) {
    nlohmann::json mults = nlohmann::json::array();
    for (const auto& [row_id, mult] : certificate.multipliers) {
      mults.push_back({{"row", row_id},
                       {"text", row_to_text(system.rows[static_cast<size_t>(row_id)],
                                            system.index)},
                       {"value", rat_to_string(mult)}});
    }
    doc["multipliers"] = std::move(mults);
  } else {
    nlohmann::json wit = nlohmann::json::array();
    for (size_t i = 0; i < certificate.witness.size(); ++i) {
      if (certificate.witness[i] != 0) {
        wit.push_back(
            {{"coordinate",
              system.index.label(system.index.subset(static_cast<int>(i)))},
             {"value", rat_to_string(certificate.witness[i])}});
      }
    }
    doc["witness"] = std::move(wit);
    nlohmann::json dense = nlohmann::json::array();
    for (const Rat& v : certificate.witness) dense.push_back(rat_to_string(v));
    doc["witness_dense"] = std::move(dense);
  }
  out << doc.dump(2) << "\n";
}

Certificate read_certificate(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  Certificate cert;
  const std::string verdict = doc.at("verdict").get<std::string>();
  if (verdict == "valid") {
    cert.verdict = Certificate::Verdict::Valid;
    for (const auto& item : doc.value("multipliers", nlohmann::json::array())) {
      cert.multipliers.emplace_back(
          item.at("row").get<int>(),
          parse_rational(item.at("value").get<std::string>()));
    }
  } else if (verdict == "not_implied") {
    cert.verdict = Certificate::Verdict::NotImplied;
    for (const auto& item : doc.value("witness_dense", nlohmann::json::array()))
      cert.witness.push_back(parse_rational(item.get<std::string>()));
  } else {
    throw std::runtime_error("certificate: unknown verdict '" + verdict + "'");
  }
  return cert;
}

}  // namespace entrocone
