// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace thetaslab {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", "p", optionally signed. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Always "p/q", e.g. "0/1", "-3/1", "7/2".
std::string to_fraction(const Rational& r);

std::int64_t to_int64(const Integer& z);
Integer floor_of(const Rational& r);
Integer ceil_of(const Rational& r);

Rational ratio(std::int64_t num, std::int64_t den);

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

std::int64_t lcm64(std::int64_t a, std::int64_t b);

Rational factorial(long n);

}  // namespace thetaslab
