#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ftl {

// All cut values, node weightings, demands and flow values are exact
// rationals. Shortest-path lengths stay integral throughout (cut values are
// multiples of 1/h and are applied scaled by h), so distances use Len.
using Rat = mpq_class;
using Len = long long;

inline constexpr Len kInfLen = (1LL << 60);

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
// LP/path-enumeration budget exceeded. Never converted into a certificate.
struct ResourceError : Error {
  explicit ResourceError(const std::string& msg) : Error(msg) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};
struct CorruptLabelError : Error {
  explicit CorruptLabelError(const std::string& msg) : Error(msg) {}
};
struct ConstructionError : Error {
  explicit ConstructionError(const std::string& msg) : Error(msg) {}
};
struct UsageError : Error {
  explicit UsageError(const std::string& msg) : Error(msg) {}
};

inline Rat rat_of(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Len is long long; gmpxx only overloads long, so convert explicitly.
inline Rat rat_len(Len x) { return Rat(static_cast<long>(x)); }

inline bool rat_is_int(const Rat& r) { return r.get_den() == 1; }

// floor(r) as integer rational
inline mpz_class rat_floor(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

inline mpz_class rat_ceil(const Rat& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

// Smallest rational with denominator 2^32 that is >= x. Used to upper-bound
// logarithms so that downstream thresholds stay exact and conservative.
inline Rat rat_upper_fixed(double x) {
  if (x < 0) throw Error("rat_upper_fixed: negative input");
  static const double kScale = 4294967296.0;  // 2^32
  mpz_class num;
  mpf_class scaled(x, 128);
  scaled *= kScale;
  mpz_cdiv_q(num.get_mpz_t(), mpz_class(mpf_class(ceil(scaled))).get_mpz_t(),
             mpz_class(1).get_mpz_t());
  Rat r(num, mpz_class(1) << 32);
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline Rat rat_parse(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw ParseError("bad rational: " + s);
  r.canonicalize();
  return r;
}

inline double rat_double(const Rat& r) { return r.get_d(); }

}  // namespace ftl
