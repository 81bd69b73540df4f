#pragma once

#include <stdexcept>

namespace lgp {

/// A discrete object could not be built from otherwise valid arguments
/// (empty interior, a point without neighbours, ...).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lgp
