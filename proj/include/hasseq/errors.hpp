#pragma once

#include <stdexcept>
#include <string>

namespace hasseq {

// Raised for d in {2,3}: Q(sqrt(d), i) has extra roots of unity, so the
// unit-index criterion for |T_L| = 4 does not apply. Callers decide how
// to handle these two values; they are never silently mapped to Q = 1.
class torsion_error : public std::domain_error {
public:
    explicit torsion_error(const std::string& what) : std::domain_error(what) {}
};

// Raised when a computed quantity violates a structural guarantee
// (e.g. a divisor sum that must be a positive power of two is not).
// Signals an implementation bug, never bad input.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace hasseq
