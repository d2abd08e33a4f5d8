#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace entrocone {

// A set of variables, bit i = i-th variable of the owning universe.
using Mask = std::uint64_t;

inline int popcount(Mask m) { return __builtin_popcountll(m); }
inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

// Dense index over a family of nonempty variable subsets.  Coordinate order
// is the canonical one used by every serialized artifact: ascending mask
// value, where bit i belongs to the i-th declared variable.
class SubsetIndex {
 public:
  SubsetIndex() = default;
  SubsetIndex(std::vector<std::string> names, std::vector<Mask> subsets);

  // All nonempty subsets of the given universe.
  static SubsetIndex full_lattice(std::vector<std::string> names);

  int size() const { return static_cast<int>(subsets_.size()); }
  int universe_size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Mask>& subsets() const { return subsets_; }
  Mask subset(int id) const { return subsets_.at(static_cast<size_t>(id)); }

  bool contains(Mask m) const { return position_.count(m) != 0; }
  // Throws std::runtime_error if the subset has no coordinate.
  int id(Mask m) const;
  // -1 if the subset has no coordinate.
  int find(Mask m) const;

  // -1 if the name is not part of the universe.
  int bit_of(const std::string& name) const;
  Mask mask_of(const std::vector<std::string>& names) const;

  // "A,B" in declaration order; "{}" for the empty mask.
  std::string label(Mask m) const;

  bool same_universe(const SubsetIndex& other) const {
    return names_ == other.names_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Mask> subsets_;
  std::unordered_map<Mask, int> position_;
  std::unordered_map<std::string, int> bit_;
};

}  // namespace entrocone
