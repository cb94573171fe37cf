#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace symcoh {

// Base error; subclasses distinguish contract violations from scale guards.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Wrong coefficient ring for an operation (e.g. epsilon over Z).
class ModeError : public Error {
 public:
  explicit ModeError(const std::string& what) : Error(what) {}
};

// Feasibility guard exceeded. Never silently truncate; throw this instead.
class ScaleError : public Error {
 public:
  explicit ScaleError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

using Int = mpz_class;

enum class RingMode { field, integers };

// The coefficient ring: a prime field F_p (p < 2^31) or the integers.
// Field elements are kept reduced to their canonical representative in [0, p).
class Ring {
 public:
  static Ring Fp(std::uint32_t p);
  static Ring Z() { return Ring(RingMode::integers, 0); }

  RingMode mode() const { return mode_; }
  bool is_field() const { return mode_ == RingMode::field; }
  std::uint32_t p() const { return p_; }
  std::uint32_t characteristic() const { return is_field() ? p_ : 0; }

  bool operator==(const Ring& o) const = default;

  // Canonical representative (reduces mod p in field mode).
  Int normalize(const Int& v) const;
  bool is_zero(const Int& v) const;
  Int add(const Int& a, const Int& b) const { return normalize(a + b); }
  Int sub(const Int& a, const Int& b) const { return normalize(a - b); }
  Int mul(const Int& a, const Int& b) const { return normalize(a * b); }
  Int neg(const Int& a) const { return normalize(-a); }
  // Multiplicative inverse; field mode only, a nonzero mod p.
  Int inv(const Int& a) const;

  // binom(n, k) in this ring: Lucas' theorem in field mode, exact over Z.
  Int binomial(unsigned long n, unsigned long k) const;

  std::string name() const;

 private:
  Ring(RingMode m, std::uint32_t p) : mode_(m), p_(p) {}
  RingMode mode_;
  std::uint32_t p_;
};

bool is_prime_u32(std::uint32_t n);

// binom(n, k) mod p by Lucas' theorem.
std::uint32_t binomial_mod_p(unsigned long n, unsigned long k, std::uint32_t p);

// Exact integer binomial.
Int binomial_z(unsigned long n, unsigned long k);

}  // namespace symcoh
