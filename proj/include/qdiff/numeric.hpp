#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace qdiff {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown when a mathematical precondition fails (zero input to a norm,
// mixed operator forms, truncation underflow, ...).
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the operator/series text readers.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

inline Int int_pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat rat_pow(const Rat& base, long e) {
  if (e >= 0) {
    Rat r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(),
               static_cast<unsigned long>(e));
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(),
               static_cast<unsigned long>(e));
    r.canonicalize();
    return r;
  }
  if (base == 0) throw domain_error("rat_pow: negative power of zero");
  Rat inv = 1 / base;
  return rat_pow(inv, -e);
}

}  // namespace qdiff
