#include "siamese/counter_group.hpp"

#include "siamese/error.hpp"

namespace siamese {

GroupState GroupState::from_code(std::uint8_t code) {
  if (code >= kCount) throw FormatError("illegal counter-group state code " + std::to_string(code));
  return GroupState(code);
}

std::string GroupState::name() const {
  if (code_ == kMerged32) return "merged-32";
  if (code_ == kShared16) return "shared-16";
  auto pair_name = [](PairState s) -> std::string {
    switch (s) {
      case PairState::kIndependent: return "independent";
      case PairState::kShared: return "lsb-shared";
      case PairState::kMerged: return "merged-16";
    }
    return "?";
  };
  return "(" + pair_name(pair(0)) + ", " + pair_name(pair(1)) + ")";
}

}  // namespace siamese
