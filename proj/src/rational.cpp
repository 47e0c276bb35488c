#include "cdgl/rational.hpp"

#include <cstdlib>
#include <vector>

#include "cdgl/error.hpp"

namespace cdgl {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Shape: return "shape";
    case ErrorKind::IllFormedComplex: return "ill-formed-complex";
    case ErrorKind::IllFormedDifferential: return "ill-formed-differential";
    case ErrorKind::Degree: return "degree";
    case ErrorKind::NotInSpan: return "not-in-span";
    case ErrorKind::MCViolation: return "mc-violation";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::InvalidSubgroup: return "invalid-subgroup";
    case ErrorKind::Exactness: return "exactness-violation";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

namespace {
std::size_t g_limit = 0;
}

std::size_t resource_limit() {
  if (g_limit == 0) {
    g_limit = 20000;
    if (const char* env = std::getenv("CDGL_RESOURCE_LIMIT")) {
      long v = std::strtol(env, nullptr, 10);
      if (v > 0) g_limit = static_cast<std::size_t>(v);
    }
  }
  return g_limit;
}

void set_resource_limit(std::size_t n) { g_limit = n; }

void check_resource(std::size_t size, const std::string& what) {
  if (size > resource_limit())
    throw Error(ErrorKind::Resource, what + " has size " + std::to_string(size) +
                                         " exceeding the resource limit " +
                                         std::to_string(resource_limit()));
}

Rat rat(long p, long q) {
  Rat r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

Rat parse_rat(const std::string& s) {
  Rat r(s);
  r.canonicalize();
  return r;
}

Rat factorial(int n) {
  Int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rat(f);
}

Rat binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rat(b);
}

Rat bernoulli(int n) {
  static std::vector<Rat> cache{Rat(1)};
  while (static_cast<int>(cache.size()) <= n) {
    int m = static_cast<int>(cache.size());
    Rat s = 0;
    for (int k = 0; k < m; ++k) s += binomial(m + 1, k) * cache[k];
    Rat b = -s / (m + 1);
    b.canonicalize();
    cache.push_back(b);
  }
  return cache[n];
}

}  // namespace cdgl
