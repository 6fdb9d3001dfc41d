#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace opf {

using rational = boost::multiprecision::mpq_rational;

// Coefficient field: the rationals (p == 0) or F_p for a prime p.
struct field {
    uint32_t p = 0;

    bool is_rational() const { return p == 0; }
    bool operator==(const field& o) const { return p == o.p; }
    bool operator!=(const field& o) const { return p != o.p; }

    static field rationals() { return field{0}; }
    static field prime(uint32_t p);

    std::string name() const { return p == 0 ? "q" : "f" + std::to_string(p); }
    static field parse(const std::string& s);
};

// Exact field element.  Rationals are shared immutable GMP values (nullptr
// means zero), residues mod p are plain machine ints, so the F_p arithmetic
// path never allocates.
class scalar {
  public:
    scalar() = default;  // zero, field-agnostic
    scalar(const field& f, long value);
    scalar(const field& f, const rational& value);

    static scalar zero(const field& f) { return scalar(f, 0); }
    static scalar one(const field& f) { return scalar(f, 1); }

    bool is_zero() const;
    bool is_one() const;
    uint32_t char_p() const { return p_; }

    scalar operator+(const scalar& o) const;
    scalar operator-(const scalar& o) const;
    scalar operator-() const;
    scalar operator*(const scalar& o) const;
    scalar operator/(const scalar& o) const;
    scalar inverse() const;

    bool operator==(const scalar& o) const;
    bool operator!=(const scalar& o) const { return !(*this == o); }

    // Canonical encoding: "num/den" over Q (lowest terms, positive
    // denominator), decimal residue over F_p.
    std::string str() const;
    static scalar parse(const field& f, const std::string& s);

    const rational& rat() const;

  private:
    uint32_t p_ = 0;
    int64_t r_ = 0;
    std::shared_ptr<const rational> q_;

    field fld_of_pair(const scalar& o) const;
};

int64_t mod_inverse(int64_t a, int64_t p);

}  // namespace opf
