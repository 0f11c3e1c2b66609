#pragma once

// Exact solution of integral sparse systems by one factorization modulo a
// 62-bit prime, p-adic lifting and rational reconstruction. The reconstructed vector is accepted only after it
// satisfies every equation in exact rational arithmetic.

#include <cstdint>
#include <vector>

#include "superstar/linear_solve.hpp"
#include "superstar/rational.hpp"

namespace superstar {

namespace detail {
struct MontgomeryField {
  std::uint64_t p = 0;
  std::uint64_t neg_inv = 0;  // -p^-1 mod 2^64
  std::uint64_t r2 = 0;       // 2^128 mod p
};
}  // namespace detail

/// Element of Z/pZ for the odd prime p < 2^62 installed by ModularScope on
/// this thread. Values are held in Montgomery form (a 2^64 mod p).
class ModP {
 public:
  ModP() = default;
  ModP(std::uint64_t value) : v_(to_montgomery(value % field_.p)) {}
  static ModP from_integer(const mpz_class& z);

  std::uint64_t value() const noexcept { return reduce(v_); }
  static std::uint64_t modulus() noexcept { return field_.p; }

  ModP inverse() const;

  friend ModP operator+(ModP a, ModP b) {
    std::uint64_t s = a.v_ + b.v_;
    if (s >= field_.p) s -= field_.p;
    return raw(s);
  }
  friend ModP operator-(ModP a, ModP b) { return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + field_.p - b.v_); }
  friend ModP operator-(ModP a) { return raw(a.v_ == 0 ? 0 : field_.p - a.v_); }
  friend ModP operator*(ModP a, ModP b) { return raw(reduce(static_cast<unsigned __int128>(a.v_) * b.v_)); }
  friend ModP operator/(ModP a, ModP b) { return a * b.inverse(); }
  ModP& operator+=(ModP b) { return *this = *this + b; }
  ModP& operator-=(ModP b) { return *this = *this - b; }
  ModP& operator*=(ModP b) { return *this = *this * b; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }
  friend int sgn(ModP a) { return a.v_ != 0; }

 private:
  friend class ModularScope;
  using Field = detail::MontgomeryField;
  static Field make_field(std::uint64_t prime);

  static std::uint64_t reduce(unsigned __int128 t) {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * field_.neg_inv;
    std::uint64_t u = static_cast<std::uint64_t>((t + static_cast<unsigned __int128>(m) * field_.p) >> 64);
    return u >= field_.p ? u - field_.p : u;
  }
  static std::uint64_t to_montgomery(std::uint64_t a) { return reduce(static_cast<unsigned __int128>(a) * field_.r2); }
  static ModP raw(std::uint64_t v) {
    ModP out;
    out.v_ = v;
    return out;
  }
  std::uint64_t v_ = 0;
  static inline thread_local Field field_{};
};

/// Installs a prime modulus for ModP on the current thread; restores the
/// previous one on destruction.
class ModularScope {
 public:
  explicit ModularScope(std::uint64_t prime) : saved_(ModP::field_) { ModP::field_ = ModP::make_field(prime); }
  ~ModularScope() { ModP::field_ = saved_; }
  ModularScope(const ModularScope&) = delete;
  ModularScope& operator=(const ModularScope&) = delete;

 private:
  ModP::Field saved_;
};

/// Smallest a/b with |a|, b <= sqrt(m / 2) and a = u b (mod m), if any.
bool rational_reconstruct(const mpz_class& u, const mpz_class& m, Rational& out);

/// Exact solution of a nonsingular integral system, row i holding the
/// pivot for variable i, eliminated in `order` without pivoting (see
/// factor_sparse_in_order). The matrix is factored once modulo a prime
/// p near 2^61 (the next prime is tried if a pivot vanishes), the solution
/// is lifted p-adically and recovered by rational reconstruction once
/// stable. Throws SingularSystem if no usable prime is found and
/// std::runtime_error if no verified solution emerges within `max_lifts`
/// p-adic digits.
std::vector<Rational> solve_sparse_exact(const std::vector<SparseRow<mpz_class>>& rows,
                                         const std::vector<std::uint32_t>& order, std::size_t max_lifts = 4096);

}  // namespace superstar
