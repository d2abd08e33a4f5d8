#include "entrocone/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

#include "entrocone/cone.hpp"

namespace entrocone {

namespace {

MergeResult identity_result(const CausalStructure& structure) {
  MergeResult r;
  r.structure = structure;
  r.system_map.resize(static_cast<size_t>(structure.n()));
  for (int id = 0; id < structure.n(); ++id)
    r.system_map[static_cast<size_t>(id)] = id;
  r.changed = false;
  return r;
}

}  // namespace

MergeResult merge_classical_sources(const CausalStructure& structure,
                                    Mask keep_separate) {
  for (const auto& sys : structure.systems)
    if (sys.kind == SystemKind::Quantum) return identity_result(structure);

  Mask protected_mask = keep_separate;
  for (const auto& ctx : structure.marginal_contexts)
    protected_mask |= structure.mask_of(ctx);

  std::vector<char> merge(structure.preparations.size(), 0);
  bool any = false;
  for (size_t p = 0; p < structure.preparations.size(); ++p) {
    const auto& prep = structure.preparations[p];
    if (prep.systems.size() < 2) continue;
    if ((structure.mask_of(prep.systems) & protected_mask) != 0) continue;
    merge[p] = 1;
    any = true;
  }
  if (!any) return identity_result(structure);

  // Each merged preparation keeps its lowest member id as the merged
  // system's position; the other members disappear.
  std::vector<int> rep_of_prep(structure.preparations.size(), -1);
  std::vector<int> prep_of_system(static_cast<size_t>(structure.n()), -1);
  for (size_t p = 0; p < structure.preparations.size(); ++p) {
    if (!merge[p]) continue;
    const auto& members = structure.preparations[p].systems;
    rep_of_prep[p] = *std::min_element(members.begin(), members.end());
    for (int id : members) prep_of_system[static_cast<size_t>(id)] = static_cast<int>(p);
  }

  MergeResult result;
  result.changed = true;
  result.system_map.assign(static_cast<size_t>(structure.n()), -1);
  for (int id = 0; id < structure.n(); ++id) {
    const int p = prep_of_system[static_cast<size_t>(id)];
    if (p >= 0 && id != rep_of_prep[static_cast<size_t>(p)]) continue;
    const int nid = static_cast<int>(result.structure.systems.size());
    if (p >= 0) {
      std::vector<int> members = structure.preparations[static_cast<size_t>(p)].systems;
      std::sort(members.begin(), members.end());
      std::string name;
      for (int m : members) {
        if (!name.empty()) name += '+';
        name += structure.systems[static_cast<size_t>(m)].name;
      }
      result.structure.systems.push_back({name, SystemKind::Classical});
    } else {
      result.structure.systems.push_back(structure.systems[static_cast<size_t>(id)]);
    }
    result.system_map[static_cast<size_t>(id)] = nid;
  }
  for (int id = 0; id < structure.n(); ++id) {
    const int p = prep_of_system[static_cast<size_t>(id)];
    if (p >= 0)
      result.system_map[static_cast<size_t>(id)] =
          result.system_map[static_cast<size_t>(rep_of_prep[static_cast<size_t>(p)])];
  }

  auto remap = [&](const std::vector<int>& ids) {
    std::vector<int> out;
    out.reserve(ids.size());
    for (int id : ids) {
      const int nid = result.system_map[static_cast<size_t>(id)];
      if (std::find(out.begin(), out.end(), nid) == out.end()) out.push_back(nid);
    }
    return out;
  };

  for (size_t p = 0; p < structure.preparations.size(); ++p)
    result.structure.preparations.push_back(
        {remap(structure.preparations[p].systems)});
  for (const auto& op : structure.operations)
    result.structure.operations.push_back(
        {op.name, remap(op.inputs), remap(op.outputs)});
  result.structure.exclusivity = structure.exclusivity;
  for (const auto& ctx : structure.marginal_contexts)
    result.structure.marginal_contexts.push_back(remap(ctx));
  return result;
}

ConstraintSystem marginal_cone(const CausalStructure& structure,
                               const std::vector<ConstraintRow>& extra,
                               const FmOptions& options) {
  if (structure.marginal_contexts.empty())
    throw std::runtime_error("marginal_cone: no marginal contexts declared");

  const StructureInfo info = analyze(structure);
  const bool classical = info.quantum == 0;

  // Systems appearing in caller-supplied rows must survive the rewrite.
  Mask pinned = 0;
  if (!extra.empty()) {
    const SubsetIndex full = subset_coordinates(structure);
    for (const auto& row : extra)
      for (const auto& [coord, val] : row.terms)
        if (val != 0) pinned |= full.subset(coord);
  }

  const MergeResult merged = classical
                                 ? merge_classical_sources(structure, pinned)
                                 : identity_result(structure);
  const CausalStructure& s = merged.structure;

  std::vector<ConstraintRow> extra_rows = extra;
  if (merged.changed && !extra.empty()) {
    const SubsetIndex full_old = subset_coordinates(structure);
    const SubsetIndex full_new = subset_coordinates(s);
    for (auto& row : extra_rows) {
      for (auto& [coord, val] : row.terms) {
        const Mask old_mask = full_old.subset(coord);
        Mask new_mask = 0;
        for (int id = 0; id < structure.n(); ++id)
          if ((old_mask >> id) & 1)
            new_mask |= Mask(1) << merged.system_map[static_cast<size_t>(id)];
        coord = full_new.id(new_mask);
      }
      std::sort(row.terms.begin(), row.terms.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    }
  }

  ConstraintSystem sys;
  if (classical) {
    // Data-processing rows are implied here (local-independence row plus
    // submodularity), so assembling them would only slow the projection.
    sys.index = subset_coordinates(s);
    ConstraintSystem el = elemental_inequalities(s);
    ConstraintSystem ci = conditional_independencies(s);
    sys.rows = std::move(el.rows);
    for (auto& r : ci.rows) sys.rows.push_back(std::move(r));
    for (const auto& r : extra_rows) sys.rows.push_back(r);
  } else {
    sys = assemble(s, extra_rows);
  }

  const SubsetIndex marginal = marginal_coordinates(s);
  std::vector<int> drop;
  for (int id = 0; id < sys.index.size(); ++id)
    if (marginal.find(sys.index.subset(id)) < 0) drop.push_back(id);
  return fm_eliminate(sys, drop, options);
}

}  // namespace entrocone
