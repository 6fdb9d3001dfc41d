#include "operadforge/field.hpp"

namespace opf {

static bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

field field::prime(uint32_t p) {
    if (!is_prime_u32(p)) throw std::invalid_argument("field::prime: " + std::to_string(p) + " is not prime");
    return field{p};
}

field field::parse(const std::string& s) {
    if (s == "q" || s == "Q") return rationals();
    if (s.size() >= 2 && (s[0] == 'f' || s[0] == 'F')) return prime(static_cast<uint32_t>(std::stoul(s.substr(1))));
    throw std::invalid_argument("field::parse: bad field spec '" + s + "'");
}

int64_t mod_inverse(int64_t a, int64_t p) {
    int64_t t = 0, new_t = 1, r = p, new_r = a % p;
    if (new_r < 0) new_r += p;
    while (new_r != 0) {
        int64_t q = r / new_r;
        t -= q * new_t; std::swap(t, new_t);
        r -= q * new_r; std::swap(r, new_r);
    }
    if (r != 1) throw std::domain_error("mod_inverse: not invertible");
    return t < 0 ? t + p : t;
}

scalar::scalar(const field& f, long value) : p_(f.p) {
    if (p_ == 0) {
        if (value != 0) q_ = std::make_shared<const rational>(value);
    } else {
        r_ = value % static_cast<int64_t>(p_);
        if (r_ < 0) r_ += p_;
    }
}

scalar::scalar(const field& f, const rational& value) : p_(f.p) {
    if (p_ == 0) {
        if (value != 0) q_ = std::make_shared<const rational>(value);
    } else {
        using boost::multiprecision::mpz_int;
        mpz_int num = numerator(value), den = denominator(value);
        int64_t n = static_cast<int64_t>(num % p_), d = static_cast<int64_t>(den % p_);
        if (n < 0) n += p_;
        if (d < 0) d += p_;
        if (d == 0) throw std::domain_error("scalar: denominator not invertible mod p");
        r_ = (n * mod_inverse(d, p_)) % p_;
    }
}

bool scalar::is_zero() const { return p_ == 0 ? q_ == nullptr || *q_ == 0 : r_ == 0; }

bool scalar::is_one() const { return p_ == 0 ? (q_ != nullptr && *q_ == 1) : r_ == 1; }

const rational& scalar::rat() const {
    static const rational zero_rat(0);
    if (p_ != 0) throw std::logic_error("scalar::rat on F_p value");
    return q_ ? *q_ : zero_rat;
}

field scalar::fld_of_pair(const scalar& o) const {
    // Field-agnostic zeros adopt the other operand's field.
    if (p_ == o.p_) return field{p_};
    if (is_zero() && q_ == nullptr && p_ == 0) return field{o.p_};
    if (o.is_zero() && o.q_ == nullptr && o.p_ == 0) return field{p_};
    throw std::logic_error("scalar arithmetic across different fields");
}

scalar scalar::operator+(const scalar& o) const {
    field f = fld_of_pair(o);
    if (f.p != 0) {
        scalar out; out.p_ = f.p; out.r_ = (r_ + o.r_) % f.p; return out;
    }
    if (is_zero()) return scalar(f, o.is_zero() ? rational(0) : o.rat());
    if (o.is_zero()) return *this;
    return scalar(f, rat() + o.rat());
}

scalar scalar::operator-(const scalar& o) const { return *this + (-o); }

scalar scalar::operator-() const {
    if (p_ != 0) { scalar out; out.p_ = p_; out.r_ = r_ == 0 ? 0 : p_ - r_; return out; }
    if (is_zero()) return *this;
    return scalar(field{0}, rational(-rat()));
}

scalar scalar::operator*(const scalar& o) const {
    field f = fld_of_pair(o);
    if (f.p != 0) {
        scalar out; out.p_ = f.p; out.r_ = (r_ * o.r_) % f.p; return out;
    }
    if (is_zero() || o.is_zero()) return scalar(f, 0);
    return scalar(f, rat() * o.rat());
}

scalar scalar::inverse() const {
    if (is_zero()) throw std::domain_error("scalar::inverse of zero");
    if (p_ != 0) { scalar out; out.p_ = p_; out.r_ = mod_inverse(r_, p_); return out; }
    return scalar(field{0}, rational(1) / rat());
}

scalar scalar::operator/(const scalar& o) const { return *this * o.inverse(); }

bool scalar::operator==(const scalar& o) const {
    if (p_ != o.p_) {
        // only comparable when one side is an agnostic zero
        return is_zero() && o.is_zero();
    }
    if (p_ != 0) return r_ == o.r_;
    if (is_zero()) return o.is_zero();
    if (o.is_zero()) return false;
    return rat() == o.rat();
}

std::string scalar::str() const {
    if (p_ != 0) return std::to_string(r_);
    const rational& v = rat();
    return numerator(v).str() + "/" + denominator(v).str();
}

scalar scalar::parse(const field& f, const std::string& s) {
    if (f.p != 0) return scalar(f, std::stol(s));
    auto slash = s.find('/');
    if (slash == std::string::npos) return scalar(f, rational(s));
    return scalar(f, rational(s));  // mpq parses "a/b" directly
}

}  // namespace opf
