#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include <Eigen/Core>

#include "tropeig/errors.hpp"

namespace tropeig {

using Rational = mpq_class;

inline int sign_of(const Rational& q) { return sgn(q); }

inline std::strong_ordering compare(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

/// Tag for writing ε in matrix literals: `MaxMatrix m{{0, eps}, {eps, 0}}`.
struct EpsilonTag {};
inline constexpr EpsilonTag eps{};

/// Element of R ∪ {ε} with an exact rational finite part.
///
/// ε is a separate state rather than a sentinel number, so ε ⊗ a = ε and
/// ε ⊕ a = a hold without any special-casing by callers. Default-constructed
/// values are ε, which makes freshly allocated Eigen matrices the zero matrix.
class MaxScalar {
 public:
  MaxScalar() = default;
  MaxScalar(EpsilonTag) {}
  MaxScalar(const Rational& v) : value_(v) { value_->canonicalize(); }
  MaxScalar(long v) : value_(Rational(v)) {}
  MaxScalar(int v) : value_(Rational(v)) {}

  static MaxScalar epsilon() { return {}; }
  static MaxScalar unit() { return MaxScalar(0L); }

  bool is_finite() const noexcept { return value_.has_value(); }
  bool is_epsilon() const noexcept { return !value_.has_value(); }

  const Rational& value() const {
    if (!value_) throw ArgumentError("value() requested on ε");
    return *value_;
  }

  friend MaxScalar oplus(const MaxScalar& a, const MaxScalar& b) { return a < b ? b : a; }

  friend MaxScalar otimes(const MaxScalar& a, const MaxScalar& b) {
    if (!a.value_ || !b.value_) return {};
    return MaxScalar(Rational(*a.value_ + *b.value_));
  }

  /// Multiplicative inverse (negation); ε has none.
  MaxScalar inverse() const { return MaxScalar(Rational(-value())); }

  /// k-th tropical power, i.e. k·a. pow(0) is e even for ε.
  MaxScalar pow(long k) const {
    if (k == 0) return unit();
    if (!value_) return {};
    return MaxScalar(Rational(*value_ * k));
  }

  /// m-th tropical root, i.e. a/m.
  MaxScalar root(long m) const {
    if (!value_) return {};
    return MaxScalar(Rational(*value_ / m));
  }

  /// a ⊗ b⁻¹ for finite b.
  MaxScalar over(const MaxScalar& b) const { return otimes(*this, b.inverse()); }

  friend std::strong_ordering operator<=>(const MaxScalar& a, const MaxScalar& b) {
    if (!a.value_ || !b.value_) return a.is_finite() <=> b.is_finite();
    return compare(*a.value_, *b.value_);
  }
  friend bool operator==(const MaxScalar& a, const MaxScalar& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  /// "-inf" for ε, "p/q" or "p" otherwise.
  std::string str() const { return value_ ? value_->get_str() : std::string("-inf"); }

  friend std::ostream& operator<<(std::ostream& os, const MaxScalar& a) { return os << a.str(); }

 private:
  std::optional<Rational> value_;
};

/// First-order infinitesimal a − g·δ with δ → +0.
///
/// Ordered lexicographically by value, and on equal finite values the one
/// with the smaller grade is larger. ε always carries grade 0. Grades of
/// perturbed entries lie in [0,1]; products, inverses and roots of such
/// entries may leave that range, so the general type admits any rational.
class JetScalar {
 public:
  JetScalar() = default;
  JetScalar(EpsilonTag) {}
  JetScalar(const MaxScalar& v) : value_(v) {}
  JetScalar(const MaxScalar& v, const Rational& grade) : value_(v) {
    if (v.is_finite()) {
      grade_ = grade;
      grade_.canonicalize();
    }
  }
  JetScalar(long v) : value_(v) {}
  JetScalar(int v) : value_(v) {}

  /// Entry a − ζδ of a perturbed matrix; requires ζ ∈ [0,1].
  static JetScalar perturbed(const MaxScalar& a, const Rational& zeta) {
    if (sign_of(zeta) < 0 || zeta > 1) throw ArgumentError("perturbation grade outside [0,1]");
    return JetScalar(a, zeta);
  }

  static JetScalar epsilon() { return {}; }
  static JetScalar unit() { return JetScalar(MaxScalar::unit()); }

  bool is_finite() const noexcept { return value_.is_finite(); }
  bool is_epsilon() const noexcept { return value_.is_epsilon(); }

  const MaxScalar& value() const noexcept { return value_; }
  const Rational& grade() const noexcept { return grade_; }

  /// Entrywise δ → +0.
  const MaxScalar& limit() const noexcept { return value_; }

  friend JetScalar oplus(const JetScalar& a, const JetScalar& b) { return a < b ? b : a; }

  friend JetScalar otimes(const JetScalar& a, const JetScalar& b) {
    if (a.is_epsilon() || b.is_epsilon()) return {};
    return JetScalar(otimes(a.value_, b.value_), Rational(a.grade_ + b.grade_));
  }

  JetScalar inverse() const { return JetScalar(value_.inverse(), Rational(-grade_)); }

  JetScalar pow(long k) const {
    if (k == 0) return unit();
    if (is_epsilon()) return {};
    return JetScalar(value_.pow(k), Rational(grade_ * k));
  }

  JetScalar root(long m) const {
    if (is_epsilon()) return {};
    return JetScalar(value_.root(m), Rational(grade_ / m));
  }

  JetScalar over(const JetScalar& b) const { return otimes(*this, b.inverse()); }

  friend std::strong_ordering operator<=>(const JetScalar& a, const JetScalar& b) {
    if (auto c = a.value_ <=> b.value_; c != 0) return c;
    if (a.is_epsilon()) return std::strong_ordering::equal;
    return compare(b.grade_, a.grade_);
  }
  friend bool operator==(const JetScalar& a, const JetScalar& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  std::string str() const {
    if (is_epsilon() || sign_of(grade_) == 0) return value_.str();
    if (sign_of(grade_) > 0) return value_.str() + "-" + grade_.get_str() + "d";
    return value_.str() + "+" + Rational(-grade_).get_str() + "d";
  }

  friend std::ostream& operator<<(std::ostream& os, const JetScalar& a) { return os << a.str(); }

 private:
  MaxScalar value_;
  Rational grade_{0};
};

/// Requirements shared by the two scalar types; every algorithm in the
/// library is written against this.
template <class S>
concept MaxPlusScalar = requires(const S& a, const S& b, long k) {
  { S::epsilon() } -> std::same_as<S>;
  { S::unit() } -> std::same_as<S>;
  { a.is_finite() } -> std::same_as<bool>;
  { oplus(a, b) } -> std::same_as<S>;
  { otimes(a, b) } -> std::same_as<S>;
  { a.inverse() } -> std::same_as<S>;
  { a.pow(k) } -> std::same_as<S>;
  { a.root(k) } -> std::same_as<S>;
  { a <=> b } -> std::same_as<std::strong_ordering>;
};

static_assert(MaxPlusScalar<MaxScalar>);
static_assert(MaxPlusScalar<JetScalar>);

/// Converts a plain max-plus scalar into scalar type S (grade 0 for jets).
template <MaxPlusScalar S>
S lift(const MaxScalar& a) {
  return S(a);
}

}  // namespace tropeig

namespace Eigen {

template <>
struct NumTraits<tropeig::MaxScalar> : GenericNumTraits<tropeig::MaxScalar> {
  using Real = tropeig::MaxScalar;
  using NonInteger = tropeig::MaxScalar;
  using Literal = tropeig::MaxScalar;
  using Nested = tropeig::MaxScalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 4
  };
};

template <>
struct NumTraits<tropeig::JetScalar> : GenericNumTraits<tropeig::JetScalar> {
  using Real = tropeig::JetScalar;
  using NonInteger = tropeig::JetScalar;
  using Literal = tropeig::JetScalar;
  using Nested = tropeig::JetScalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 8
  };
};

}  // namespace Eigen
