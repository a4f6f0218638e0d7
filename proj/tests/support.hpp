#pragma once

#include <complex>

#include "isospec/jmap.hpp"

namespace fixture {

using isospec::Complex;
using isospec::ComplexMatrix;

inline constexpr Complex I{0.0, 1.0};

/// Fixed sample map in su(3) used for frozen reference values.
inline isospec::JMap sample_jmap() {
    ComplexMatrix a(3, 3), b(3, 3);
    a << I, 1.0 + 2.0 * I, -0.5, -1.0 + 2.0 * I, -2.0 * I, 0.3 * I, 0.5, 0.3 * I, I;
    b << 2.0 * I, 0.5 - 1.0 * I, 1.5 * I, -0.5 - 1.0 * I, -0.5 * I, 2.0, 1.5 * I, -2.0, -1.5 * I;
    return isospec::JMap(isospec::validate_su(a), isospec::validate_su(b));
}

}  // namespace fixture
