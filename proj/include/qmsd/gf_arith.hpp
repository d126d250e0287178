#pragma once

// Arithmetic over Z_d for odd prime d and the groups SL(2, Z_d), PSL(2, Z_d).

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "qmsd/errors.hpp"

namespace qmsd {

inline constexpr int kQutrit = 3;

inline bool is_odd_prime(int d) {
  if (d < 3 || d % 2 == 0) return false;
  for (int f = 3; f * f <= d; f += 2)
    if (d % f == 0) return false;
  return true;
}

inline int mod(long long v, int d) {
  long long r = v % d;
  return static_cast<int>(r < 0 ? r + d : r);
}

/// Element of Z_d; the value is always kept reduced into [0, d).
class Zd {
 public:
  Zd() = default;
  Zd(long long value, int modulus) : modulus_(modulus) {
    if (!is_odd_prime(modulus))
      throw DomainError("Zd: modulus " + std::to_string(modulus) + " is not an odd prime");
    value_ = mod(value, modulus);
  }

  int value() const { return value_; }
  int modulus() const { return modulus_; }

  friend Zd operator+(Zd a, Zd b) { return {a.value_ + b.value_, a.modulus_}; }
  friend Zd operator-(Zd a, Zd b) { return {a.value_ - b.value_, a.modulus_}; }
  friend Zd operator*(Zd a, Zd b) { return {static_cast<long long>(a.value_) * b.value_, a.modulus_}; }
  Zd operator-() const { return {-value_, modulus_}; }

  friend bool operator==(const Zd&, const Zd&) = default;
  friend auto operator<=>(const Zd&, const Zd&) = default;

 private:
  int value_ = 0;
  int modulus_ = kQutrit;
};

/// Multiplicative inverse; throws NonInvertible for zero.
inline Zd inv(Zd a) {
  if (a.value() == 0) throw NonInvertible("inv: zero has no inverse in Z_" + std::to_string(a.modulus()));
  // Fermat: a^(d-2).
  Zd result{1, a.modulus()};
  Zd base = a;
  for (int e = a.modulus() - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    base = base * base;
  }
  return result;
}

/// Integer convenience: inverse of a modulo d.
inline int inv_mod(int a, int d) { return inv(Zd{a, d}).value(); }

/// F = (alpha beta; gamma delta) with unit determinant over Z_d.
struct SymplecticMat2 {
  int alpha = 1;
  int beta = 0;
  int gamma = 0;
  int delta = 1;
  int d = kQutrit;

  static SymplecticMat2 identity(int d = kQutrit) { return {1, 0, 0, 1, d}; }

  /// Validating constructor.
  static SymplecticMat2 make(int alpha, int beta, int gamma, int delta, int d = kQutrit) {
    if (!is_odd_prime(d)) throw DomainError("SymplecticMat2: modulus is not an odd prime");
    SymplecticMat2 f{mod(alpha, d), mod(beta, d), mod(gamma, d), mod(delta, d), d};
    if (f.det() != 1) throw DomainError("SymplecticMat2: determinant is not 1");
    return f;
  }

  int det() const { return mod(static_cast<long long>(alpha) * delta - static_cast<long long>(beta) * gamma, d); }

  std::array<int, 4> entries() const { return {alpha, beta, gamma, delta}; }

  SymplecticMat2 negated() const { return {mod(-alpha, d), mod(-beta, d), mod(-gamma, d), mod(-delta, d), d}; }

  /// Image of the phase-space column vector (x, z).
  std::array<int, 2> apply(int x, int z) const {
    return {mod(static_cast<long long>(alpha) * x + static_cast<long long>(beta) * z, d),
            mod(static_cast<long long>(gamma) * x + static_cast<long long>(delta) * z, d)};
  }

  friend bool operator==(const SymplecticMat2& a, const SymplecticMat2& b) {
    return a.d == b.d && a.entries() == b.entries();
  }
  friend bool operator<(const SymplecticMat2& a, const SymplecticMat2& b) { return a.entries() < b.entries(); }

  friend std::ostream& operator<<(std::ostream& os, const SymplecticMat2& f) {
    return os << '(' << f.alpha << ',' << f.beta << ';' << f.gamma << ',' << f.delta << ')';
  }
};

inline SymplecticMat2 symplectic_mul(const SymplecticMat2& f, const SymplecticMat2& g) {
  const int d = f.d;
  return {mod(f.alpha * g.alpha + f.beta * g.gamma, d), mod(f.alpha * g.beta + f.beta * g.delta, d),
          mod(f.gamma * g.alpha + f.delta * g.gamma, d), mod(f.gamma * g.beta + f.delta * g.delta, d), d};
}

/// Inverse of a unit-determinant 2x2 matrix is its adjugate.
inline SymplecticMat2 symplectic_inv(const SymplecticMat2& f) {
  return {f.delta, mod(-f.beta, f.d), mod(-f.gamma, f.d), f.alpha, f.d};
}

/// All of SL(2, Z_d) in lexicographic order of (alpha, beta, gamma, delta).
inline std::vector<SymplecticMat2> enumerate_sl2(int d = kQutrit) {
  if (!is_odd_prime(d)) throw DomainError("enumerate_sl2: d must be an odd prime");
  std::vector<SymplecticMat2> out;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          SymplecticMat2 f{a, b, c, e, d};
          if (f.det() == 1) out.push_back(f);
        }
  return out;
}

/// Representative of {F, -F}: the lexicographically smaller entry tuple.
inline SymplecticMat2 psl_canonical(const SymplecticMat2& f) {
  SymplecticMat2 neg = f.negated();
  return neg < f ? neg : f;
}

/// One representative per {F, -F} pair, in lexicographic order.
inline std::vector<SymplecticMat2> enumerate_psl2(int d = kQutrit) {
  std::vector<SymplecticMat2> out;
  for (const auto& f : enumerate_sl2(d))
    if (psl_canonical(f) == f) out.push_back(f);
  return out;
}

}  // namespace qmsd
