#pragma once

#include <cstddef>

#include "settype/type_system.hpp"

namespace settype {

/// 2|A^B| / (|A| + |B|), with two empty sets counting as a perfect match.
inline double set_f1(std::size_t intersection, std::size_t predicted, std::size_t gold) {
  if (predicted + gold == 0) return 1.0;
  return 2.0 * static_cast<double>(intersection) / static_cast<double>(predicted + gold);
}

/// 1 - set-F1.
inline double set_f1_loss(std::size_t intersection, std::size_t predicted, std::size_t gold) {
  return 1.0 - set_f1(intersection, predicted, gold);
}

inline double set_f1_loss(const TypeSet& predicted, const TypeSet& gold) {
  return set_f1_loss(predicted.intersection_size(gold), predicted.size(), gold.size());
}

}  // namespace settype
