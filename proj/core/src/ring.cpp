#include "symcoh/ring.hpp"

namespace symcoh {

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring Ring::Fp(std::uint32_t p) {
  if (!is_prime_u32(p)) throw ModeError("field characteristic must be prime, got " + std::to_string(p));
  if (p >= (1u << 31)) throw ModeError("field characteristic must be < 2^31");
  return Ring(RingMode::field, p);
}

Int Ring::normalize(const Int& v) const {
  if (mode_ == RingMode::integers) return v;
  Int r = v % p_;
  if (r < 0) r += p_;
  return r;
}

bool Ring::is_zero(const Int& v) const {
  if (mode_ == RingMode::integers) return v == 0;
  return mpz_divisible_ui_p(v.get_mpz_t(), p_) != 0;
}

Int Ring::inv(const Int& a) const {
  if (!is_field()) throw ModeError("inverse requires field mode");
  Int r, m = p_;
  if (mpz_invert(r.get_mpz_t(), normalize(a).get_mpz_t(), m.get_mpz_t()) == 0)
    throw Error("not invertible mod " + std::to_string(p_));
  return r;
}

std::uint32_t binomial_mod_p(unsigned long n, unsigned long k, std::uint32_t p) {
  if (k > n) return 0;
  // Lucas: binom(n, k) = prod over base-p digits of binom(n_i, k_i).
  std::uint64_t result = 1;
  while (k > 0 || n > 0) {
    unsigned long ni = n % p, ki = k % p;
    if (ki > ni) return 0;
    // small digit binomial, all values < p < 2^31
    std::uint64_t digit = 1;
    for (unsigned long j = 0; j < ki; ++j) {
      digit = digit * ((ni - j) % p) % p;
      // divide by (j+1) mod p: j+1 < p so invertible
      std::uint64_t inv = 1, base = (j + 1) % p, e = p - 2;
      while (e) {
        if (e & 1) inv = inv * base % p;
        base = base * base % p;
        e >>= 1;
      }
      digit = digit * inv % p;
    }
    result = result * digit % p;
    n /= p;
    k /= p;
  }
  return static_cast<std::uint32_t>(result);
}

Int binomial_z(unsigned long n, unsigned long k) {
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Int Ring::binomial(unsigned long n, unsigned long k) const {
  if (is_field()) return Int(binomial_mod_p(n, k, p_));
  return binomial_z(n, k);
}

std::string Ring::name() const {
  return is_field() ? "F_" + std::to_string(p_) : "Z";
}

}  // namespace symcoh
