#pragma once

#include <string>

#include "poly.hpp"

namespace ptast {

// SMT-LIB2 rendering of the coefficient conditions: logic QF_NIA, unknowns as
// nonnegative integer constants, disjunction groups as or-terms. Byte-stable
// for a fixed constraint set.
std::string smt_export(const ConstraintSet& cs);

}  // namespace ptast
