#include "taut/rational.hpp"

#include <stdexcept>

namespace taut {

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0)
    throw std::invalid_argument("malformed rational: " + s);
  q.canonicalize();
  return q;
}

Rational ratio(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative number");
  Integer r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return Rational(r);
}

Rational double_factorial(int n) {
  if (n < -1 || (n % 2 == 0 && n != 0))
    throw std::invalid_argument("double factorial only for odd n >= -1");
  Integer r = 1;
  for (int i = n; i > 1; i -= 2) r *= i;
  return Rational(r);
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

}  // namespace taut
