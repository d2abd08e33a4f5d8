#pragma once

#include <gmpxx.h>

#include <string>

namespace entrocone {

// Exact rational scalar used everywhere outside the entropy-of-distribution
// boundary (which is the only place floating point is allowed).
using Rat = mpq_class;
using Int = mpz_class;

// Parses "p", "-p", "p/q" with q > 0 after normalization.  Throws
// std::runtime_error on malformed input or zero denominator.
Rat parse_rational(const std::string& text);

std::string rat_to_string(const Rat& value);

}  // namespace entrocone
