#include "commop/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace commop {

Rational::Rational(long n, long d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");

  if (const auto dot = s.find('.'); dot != std::string::npos) {
    if (s.find_first_of("eE/") != std::string::npos) {
      throw std::invalid_argument("Rational::parse: unsupported number '" + s + "'");
    }
    bool neg = false;
    std::string body = s;
    if (body[0] == '-' || body[0] == '+') {
      neg = body[0] == '-';
      body = body.substr(1);
    }
    const auto d = body.find('.');
    std::string digits = body.substr(0, d) + body.substr(d + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("Rational::parse: malformed decimal '" + s + "'");
    }
    const size_t frac_len = body.size() - d - 1;
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(neg ? mpq_class(-q) : q);
  }

  const auto check = [&](const std::string& part) {
    std::string p = part;
    if (!p.empty() && (p[0] == '-' || p[0] == '+')) p = p.substr(1);
    if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("Rational::parse: malformed '" + s + "'");
    }
  };
  const auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  check(num);
  if (num[0] == '+') num = num.substr(1);
  if (slash == std::string::npos) return Rational(mpq_class(mpz_class(num, 10)));
  std::string den = s.substr(slash + 1);
  check(den);
  if (den[0] == '+') den = den.substr(1);
  mpz_class dz(den, 10);
  if (dz == 0) throw std::invalid_argument("Rational::parse: zero denominator");
  return Rational(mpq_class(mpz_class(num, 10), dz));
}

Rational Rational::pow(int e) const {
  if (e < 0) {
    if (is_zero()) throw std::domain_error("Rational::pow: zero to negative power");
    return (Rational(1) / *this).pow(-e);
  }
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rational(mpq_class(n, d));
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

}  // namespace commop
