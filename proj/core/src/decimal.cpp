#include "takum/decimal.hpp"

#include <optional>

#include "takum/error.hpp"

namespace takum {

namespace {

std::string format_digits(const std::string& raw, mpfr_exp_t exp10) {
  std::string digits = raw;
  std::string sign;
  if (!digits.empty() && digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  std::string out = sign + digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  out += "e" + std::to_string(static_cast<long>(exp10) - 1);
  return out;
}

std::optional<std::string> rounded_digits(mpfr_srcptr v, int digits, mpfr_exp_t& e) {
  char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v, MPFR_RNDN);
  if (!s) return std::nullopt;
  std::string r(s);
  mpfr_free_str(s);
  return r;
}

mpq_class pow10q(long k) {
  mpz_class t;
  mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? mpq_class(1, t) : mpq_class(t);
}

// Exact ties-to-even rounding of a nonzero rational.
std::string rational_decimal(const mpq_class& q, int digits) {
  mpq_class a = abs(q);
  Mpfr approx(64);
  mpfr_set_q(approx.get(), a.get_mpq_t(), MPFR_RNDN);
  mpfr_log10(approx.get(), approx.get(), MPFR_RNDN);
  long e10 = mpfr_get_si(approx.get(), MPFR_RNDD);
  while (a < pow10q(e10)) --e10;
  while (a >= pow10q(e10 + 1)) ++e10;
  mpq_class scaled = a * pow10q(digits - 1 - e10);
  mpz_class n = scaled.get_num() / scaled.get_den();
  mpq_class rem = scaled - mpq_class(n);
  int c = cmp(rem, mpq_class(1, 2));
  if (c > 0 || (c == 0 && mpz_odd_p(n.get_mpz_t()))) ++n;
  if (n == pow10q(digits).get_num()) {
    n /= 10;
    ++e10;
  }
  std::string ds = n.get_str();
  std::string out = (q < 0 ? "-" : "") + ds.substr(0, 1);
  if (ds.size() > 1) out += "." + ds.substr(1);
  return out + "e" + std::to_string(e10);
}

}  // namespace

std::string to_decimal(const BigReal& x, int digits) {
  if (digits < 1) throw Error(ErrorKind::DomainError, "digit count must be positive");
  if (x.is_zero()) return "0";
  if (const mpq_class* q = x.rational()) return rational_decimal(*q, digits);
  return escalate([&](mpfr_prec_t p) -> std::optional<std::string> {
    Interval iv = x.enclose(p);
    mpfr_exp_t e1 = 0, e2 = 0;
    auto a = rounded_digits(iv.lo.get(), digits, e1);
    auto b = rounded_digits(iv.hi.get(), digits, e2);
    if (!a || !b || *a != *b || e1 != e2) return std::nullopt;
    return format_digits(*a, e1);
  });
}

std::string to_decimal_two_step(const BigReal& x, int digits) {
  if (digits < 1) throw Error(ErrorKind::DomainError, "digit count must be positive");
  if (x.is_zero()) return "0";
  std::string wide = to_decimal(x, digits + 1);
  std::size_t epos = wide.find('e');
  std::string sign = wide[0] == '-' ? "-" : "";
  std::string mant = wide.substr(sign.size(), epos - sign.size());
  long exp10 = std::stol(wide.substr(epos + 1));
  std::string ds;
  for (char ch : mant)
    if (ch != '.') ds += ch;
  char last = ds.back();
  ds.pop_back();
  bool up = last > '5' || (last == '5' && (ds.back() - '0') % 2 == 1);
  if (up) {
    int i = static_cast<int>(ds.size()) - 1;
    while (i >= 0 && ds[static_cast<size_t>(i)] == '9') ds[static_cast<size_t>(i--)] = '0';
    if (i < 0) {
      ds.insert(ds.begin(), '1');
      ds.pop_back();
      ++exp10;
    } else {
      ++ds[static_cast<size_t>(i)];
    }
  }
  std::string out = sign + ds.substr(0, 1);
  if (ds.size() > 1) out += "." + ds.substr(1);
  return out + "e" + std::to_string(exp10);
}

std::string to_shortest(const BigReal& x) {
  if (x.is_zero()) return "0";
  constexpr mpfr_prec_t kBits = 80;
  Mpfr target(kBits);
  escalate([&](mpfr_prec_t p) -> std::optional<bool> {
    Interval iv = x.enclose(p);
    Mpfr a(kBits), b(kBits);
    mpfr_set(a.get(), iv.lo.get(), MPFR_RNDN);
    mpfr_set(b.get(), iv.hi.get(), MPFR_RNDN);
    if (!mpfr_equal_p(a.get(), b.get())) return std::nullopt;
    mpfr_set(target.get(), a.get(), MPFR_RNDN);
    return true;
  });
  for (int d = 1; d < 40; ++d) {
    std::string s = to_decimal(x, d);
    Mpfr back(kBits);
    mpq_class q = parse_decimal_exact(s);
    mpfr_set_q(back.get(), q.get_mpq_t(), MPFR_RNDN);
    if (mpfr_equal_p(back.get(), target.get())) return s;
  }
  return to_decimal(x, 40);
}

}  // namespace takum
