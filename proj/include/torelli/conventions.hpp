#pragma once

#include <stdexcept>

namespace torelli {

/// Global sign conventions.
///   omega_sign: value of the symplectic pairing on (a_i, b_i).
///   weld_sign : orientation sign of the tree-welding bracket.
/// The shipped default (-1, -1) is the calibrated pair; the calibration test
/// re-derives it by exhaustive search over the four candidates.
struct Conventions {
  int omega_sign = -1;
  int weld_sign = -1;

  Conventions() = default;
  Conventions(int os, int ws) : omega_sign(os), weld_sign(ws) {
    if ((os != 1 && os != -1) || (ws != 1 && ws != -1))
      throw std::invalid_argument("Conventions: signs must be +1 or -1");
  }

  bool operator==(const Conventions&) const = default;
};

}  // namespace torelli
