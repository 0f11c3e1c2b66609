#include "superstar/modular.hpp"

#include <optional>
#include <stdexcept>

namespace superstar {

ModP::Field ModP::make_field(std::uint64_t prime) {
  if (prime % 2 == 0 || prime >= (std::uint64_t{1} << 62)) throw std::invalid_argument("modulus must be odd and below 2^62");
  Field f;
  f.p = prime;
  std::uint64_t inv = 1;  // Newton iteration for p^-1 mod 2^64
  for (int i = 0; i < 6; ++i) inv *= 2 - prime * inv;
  f.neg_inv = ~inv + 1;
  const unsigned __int128 r = (static_cast<unsigned __int128>(1) << 64) % prime;
  f.r2 = static_cast<std::uint64_t>(r * r % prime);
  return f;
}

ModP ModP::from_integer(const mpz_class& z) {
  return raw(to_montgomery(mpz_fdiv_ui(z.get_mpz_t(), field_.p)));
}

ModP ModP::inverse() const {
  if (v_ == 0) throw std::domain_error("inverse of zero modulo p");
  std::int64_t t0 = 0, t1 = 1;
  std::int64_t r0 = static_cast<std::int64_t>(field_.p), r1 = static_cast<std::int64_t>(v_);
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t next = r0 - q * r1;
    r0 = r1;
    r1 = next;
    next = t0 - q * t1;
    t0 = t1;
    t1 = next;
  }
  if (t0 < 0) t0 += static_cast<std::int64_t>(field_.p);
  // t0 = (a R)^-1 = a^-1 R^-1; two Montgomery products with R^2 give a^-1 R.
  const ModP r2 = raw(field_.r2);
  return raw(static_cast<std::uint64_t>(t0)) * r2 * r2;
}

bool rational_reconstruct(const mpz_class& u, const mpz_class& m, Rational& out) {
  mpz_class bound = m / 2;
  mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());
  mpz_class r0 = m, r1 = u % m;
  if (r1 < 0) r1 += m;
  mpz_class t0 = 0, t1 = 1, q, tmp;
  while (r1 > bound) {
    mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
    tmp = r0 - q * r1;
    r0.swap(r1);
    r1.swap(tmp);
    tmp = t0 - q * t1;
    t0.swap(t1);
    t1.swap(tmp);
  }
  if (abs(t1) > bound || t1 == 0) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return false;
  out = Rational(r1, t1);
  out.canonicalize();
  return true;
}

namespace {

bool satisfies(const std::vector<SparseRow<mpz_class>>& rows, const std::vector<Rational>& x) {
  Rational acc;
  for (const auto& row : rows) {
    acc = 0;
    for (std::size_t k = 0; k < row.cols.size(); ++k) acc += row.vals[k] * x[row.cols[k]];
    if (acc != row.rhs) return false;
  }
  return true;
}

/// Reconstructs every component, first trying the running common
/// denominator and falling back to a full reconstruction.
bool reconstruct_all(const std::vector<mpz_class>& residues, const mpz_class& m, std::vector<Rational>& out) {
  out.resize(residues.size());
  mpz_class denominator = 1;
  mpz_class half = m / 2;
  mpz_class bound;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class y;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    y = residues[i] * denominator % m;
    if (y > half) y -= m;
    if (abs(y) <= bound) {
      out[i] = Rational(y, denominator);
      out[i].canonicalize();
      continue;
    }
    if (!rational_reconstruct(residues[i], m, out[i])) return false;
    mpz_lcm(denominator.get_mpz_t(), denominator.get_mpz_t(), out[i].get_den_mpz_t());
  }
  return true;
}

}  // namespace

std::vector<Rational> solve_sparse_exact(const std::vector<SparseRow<mpz_class>>& rows,
                                         const std::vector<std::uint32_t>& order, std::size_t max_lifts) {
  const std::size_t n = rows.size();
  if (n == 0) return {};
  mpz_class prime = mpz_class(1) << 61;
  std::vector<SparseRow<ModP>> reduced(n);

  for (int attempt = 0; attempt < 64; ++attempt) {
    mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
    const std::uint64_t p = prime.get_ui();
    ModularScope scope(p);
    for (std::size_t i = 0; i < n; ++i) {
      reduced[i].cols = rows[i].cols;
      reduced[i].vals.resize(rows[i].vals.size());
      for (std::size_t k = 0; k < rows[i].vals.size(); ++k) reduced[i].vals[k] = ModP::from_integer(rows[i].vals[k]);
    }
    SparseFactorization<ModP> factors;
    try {
      factors = factor_sparse_in_order(reduced, order);
    } catch (const SingularSystem&) {
      continue;  // p divides a leading minor; another prime will do
    }

    // p-adic expansion of the solution: x = sum_i digit_i p^i, with the
    // integral residual r_{i+1} = (r_i - A digit_i) / p.
    std::vector<mpz_class> residual(n), expansion(n, mpz_class(0));
    for (std::size_t i = 0; i < n; ++i) residual[i] = rows[i].rhs;
    mpz_class power = 1;
    std::vector<ModP> b(n);
    std::optional<Rational> previous_probe;
    std::vector<Rational> candidate;
    mpz_class acc;
    for (std::size_t lift = 0; lift < max_lifts; ++lift) {
      for (std::size_t i = 0; i < n; ++i) b[i] = ModP::from_integer(residual[i]);
      const auto digit = factors.solve(b);
      for (std::size_t i = 0; i < n; ++i) {
        const unsigned long d = digit[i].value();
        if (d != 0) mpz_addmul_ui(expansion[i].get_mpz_t(), power.get_mpz_t(), d);
      }
      for (std::size_t i = 0; i < n; ++i) {
        acc = residual[i];
        const auto& row = rows[i];
        for (std::size_t k = 0; k < row.cols.size(); ++k) {
          mpz_submul_ui(acc.get_mpz_t(), row.vals[k].get_mpz_t(), digit[row.cols[k]].value());
        }
        mpz_divexact_ui(residual[i].get_mpz_t(), acc.get_mpz_t(), p);
      }
      power *= p;

      Rational probe;
      if (!rational_reconstruct(expansion[0], power, probe)) continue;
      if (previous_probe && *previous_probe == probe && reconstruct_all(expansion, power, candidate) &&
          satisfies(rows, candidate)) {
        return candidate;
      }
      previous_probe = probe;
    }
    throw std::runtime_error("p-adic lifting did not converge");
  }
  throw SingularSystem();
}

}  // namespace superstar
