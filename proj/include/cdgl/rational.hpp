#pragma once
#include <gmpxx.h>

#include <string>

namespace cdgl {

using Rat = mpq_class;
using Int = mpz_class;

Rat rat(long p, long q = 1);
std::string to_string(const Rat& r);
Rat parse_rat(const std::string& s);
Rat factorial(int n);
Rat binomial(int n, int k);
// Bernoulli numbers with B_1 = -1/2.
Rat bernoulli(int n);
inline int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace cdgl
