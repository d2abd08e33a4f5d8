#include "entrocone/subset.hpp"

#include <algorithm>
#include <stdexcept>

namespace entrocone {

SubsetIndex::SubsetIndex(std::vector<std::string> names,
                         std::vector<Mask> subsets)
    : names_(std::move(names)), subsets_(std::move(subsets)) {
  if (names_.size() > 64) {
    throw std::runtime_error("subset index: more than 64 variables");
  }
  const Mask universe =
      names_.size() == 64 ? ~Mask{0} : ((Mask{1} << names_.size()) - 1);
  std::sort(subsets_.begin(), subsets_.end());
  subsets_.erase(std::unique(subsets_.begin(), subsets_.end()),
                 subsets_.end());
  position_.reserve(subsets_.size() * 2);
  for (size_t i = 0; i < subsets_.size(); ++i) {
    const Mask m = subsets_[i];
    if (m == 0) throw std::runtime_error("subset index: empty subset");
    if (!subset_of(m, universe)) {
      throw std::runtime_error("subset index: subset outside the universe");
    }
    position_.emplace(m, static_cast<int>(i));
  }
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) {
      throw std::runtime_error("subset index: empty variable name");
    }
    if (!bit_.emplace(names_[i], static_cast<int>(i)).second) {
      throw std::runtime_error("subset index: duplicate variable name '" +
                               names_[i] + "'");
    }
  }
}

SubsetIndex SubsetIndex::full_lattice(std::vector<std::string> names) {
  if (names.size() > 24) {
    throw std::runtime_error("full lattice limited to 24 variables");
  }
  const Mask total = Mask{1} << names.size();
  std::vector<Mask> subsets;
  subsets.reserve(static_cast<size_t>(total) - 1);
  for (Mask m = 1; m < total; ++m) subsets.push_back(m);
  return SubsetIndex(std::move(names), std::move(subsets));
}

int SubsetIndex::id(Mask m) const {
  auto it = position_.find(m);
  if (it == position_.end()) {
    throw std::runtime_error("no coordinate for subset {" + label(m) + "}");
  }
  return it->second;
}

int SubsetIndex::find(Mask m) const {
  auto it = position_.find(m);
  return it == position_.end() ? -1 : it->second;
}

int SubsetIndex::bit_of(const std::string& name) const {
  auto it = bit_.find(name);
  return it == bit_.end() ? -1 : it->second;
}

Mask SubsetIndex::mask_of(const std::vector<std::string>& names) const {
  Mask m = 0;
  for (const auto& name : names) {
    const int bit = bit_of(name);
    if (bit < 0) throw std::runtime_error("unknown variable '" + name + "'");
    m |= Mask{1} << bit;
  }
  return m;
}

std::string SubsetIndex::label(Mask m) const {
  if (m == 0) return "{}";
  std::string out;
  for (size_t i = 0; i < names_.size(); ++i) {
    if (m & (Mask{1} << i)) {
      if (!out.empty()) out += ',';
      out += names_[i];
    }
  }
  Mask extra = m >> names_.size();
  if (names_.size() < 64 && extra) out += ",?";
  return out;
}

}  // namespace entrocone
