#pragma once

#include <optional>
#include <string>

#include "rescat/chain_spec.hpp"

namespace rescat {

enum class PoleMethod { transcendental, determinant, fixed_point };
enum class PoleClass { physical, cutoff, unclassified };

/// A located S-matrix pole in the complex energy plane.
struct PoleEstimate {
  Complex energy;
  std::optional<Complex> momentum;  // k-plane location, when the method has one
  PoleMethod method = PoleMethod::transcendental;
  double residual = 0.0;
  PoleClass classification = PoleClass::unclassified;
};

/// Axis-aligned search window in the complex E plane.
struct Rectangle {
  double re_min, re_max;
  double im_min, im_max;

  bool contains(Complex e, double slack = 0.0) const {
    return e.real() >= re_min - slack && e.real() <= re_max + slack &&
           e.imag() >= im_min - slack && e.imag() <= im_max + slack;
  }
};

struct GridSize {
  int n_re, n_im;
};

inline std::string to_string(PoleMethod m) {
  switch (m) {
    case PoleMethod::transcendental: return "transcendental";
    case PoleMethod::determinant: return "determinant";
    case PoleMethod::fixed_point: return "fixed_point";
  }
  return "?";
}

inline std::string to_string(PoleClass c) {
  switch (c) {
    case PoleClass::physical: return "physical";
    case PoleClass::cutoff: return "cutoff";
    case PoleClass::unclassified: return "unclassified";
  }
  return "?";
}

}  // namespace rescat
