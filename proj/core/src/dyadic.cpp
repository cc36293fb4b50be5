#include "takum/dyadic.hpp"

#include <cctype>
#include <stdexcept>

#include "takum/error.hpp"

namespace takum {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::IsNaR: return "IsNaR";
    case ErrorKind::WidthMismatch: return "WidthMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::UnknownConstant: return "UnknownConstant";
    case ErrorKind::UnknownFormat: return "UnknownFormat";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "?";
}

namespace {

constexpr int kMaxBits = 122;

int abs_bits(i128 v) { return bit_length(static_cast<u128>(v < 0 ? -v : v)); }

}  // namespace

int bit_length(u128 v) {
  int n = 0;
  while (v) {
    v >>= 1;
    ++n;
  }
  return n;
}

Dyadic::Dyadic(i128 num, int exp) : num_(num), exp_(exp) {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while ((num_ & 1) == 0) {
    num_ >>= 1;
    ++exp_;
  }
  if (abs_bits(num_) > kMaxBits) throw std::overflow_error("dyadic numerator overflow");
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  if (num_ == 0) return o;
  if (o.num_ == 0) return *this;
  int e = std::min(exp_, o.exp_);
  int sa = exp_ - e, sb = o.exp_ - e;
  if (abs_bits(num_) + sa > kMaxBits || abs_bits(o.num_) + sb > kMaxBits)
    throw std::overflow_error("dyadic addition overflow");
  return Dyadic((num_ << sa) + (o.num_ << sb), e);
}

Dyadic Dyadic::operator*(const Dyadic& o) const {
  if (abs_bits(num_) + abs_bits(o.num_) > kMaxBits) throw std::overflow_error("dyadic product overflow");
  return Dyadic(num_ * o.num_, exp_ + o.exp_);
}

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
  int s = (*this - o).sign();
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

i128 Dyadic::floor_scaled(int j) const {
  int e = exp_ + j;
  if (e >= 0) {
    if (abs_bits(num_) + e > 126) throw std::overflow_error("dyadic scale overflow");
    return num_ << e;
  }
  if (-e >= 127) return num_ < 0 ? -1 : 0;
  return num_ >> -e;  // arithmetic shift floors
}

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  mpz_class hi(static_cast<unsigned long>(u >> 64));
  mpz_class lo(static_cast<unsigned long>(u & ~std::uint64_t{0}));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

i128 to_i128(const mpz_class& z) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 126) throw std::overflow_error("integer exceeds 126 bits");
  mpz_class a = abs(z);
  mpz_class hi = a >> 64;
  mpz_class lo = a - (hi << 64);
  u128 u = (static_cast<u128>(hi.get_ui()) << 64) | lo.get_ui();
  return sgn(z) < 0 ? -static_cast<i128>(u) : static_cast<i128>(u);
}

mpq_class Dyadic::to_mpq() const {
  mpq_class q(to_mpz(num_));
  if (exp_ >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), exp_);
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), -exp_);
  }
  return q;
}

double Dyadic::to_double() const { return to_mpq().get_d(); }

Dyadic Dyadic::from_mpq(const mpq_class& q) {
  mpz_class den = q.get_den();
  size_t k = mpz_scan1(den.get_mpz_t(), 0);
  if (mpz_sizeinbase(den.get_mpz_t(), 2) != k + 1) throw Error(ErrorKind::ParseError, "value is not dyadic");
  mpz_class num = q.get_num();
  long shift = -static_cast<long>(k);
  if (num != 0 && k == 0) {
    size_t tz = mpz_scan1(num.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), tz);
    shift = static_cast<long>(tz);
  }
  return Dyadic(to_i128(num), static_cast<int>(shift));
}

namespace {

// Exact rational from decimal/fraction text.
mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return Error(ErrorKind::ParseError, "cannot parse number: " + s); };
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw bad();
    if (q.get_den() == 0) throw bad();
    q.canonicalize();
    return q;
  }
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false, any = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits += ch;
      any = true;
      if (seen_dot) ++frac_digits;
    } else if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) throw bad();
  long exp10 = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw bad();
    std::string rest = s.substr(i + 1);
    if (rest.empty()) throw bad();
    size_t used = 0;
    try {
      exp10 = std::stol(rest, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != rest.size()) throw bad();
  }
  exp10 -= frac_digits;
  mpz_class m(digits, 10);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  mpq_class q = exp10 >= 0 ? mpq_class(m * p) : mpq_class(m, p);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

}  // namespace

Dyadic Dyadic::parse(std::string_view text) { return from_mpq(parse_rational(text)); }

std::string Dyadic::to_string() const {
  if (exp_ >= 0) return to_mpz(num_ << exp_).get_str();
  int k = -exp_;
  mpz_class five;
  mpz_ui_pow_ui(five.get_mpz_t(), 5, static_cast<unsigned long>(k));
  mpz_class scaled = abs(to_mpz(num_)) * five;  // value * 10^k
  std::string d = scaled.get_str();
  if (static_cast<int>(d.size()) <= k) d.insert(0, static_cast<size_t>(k + 1 - static_cast<int>(d.size())), '0');
  d.insert(d.size() - static_cast<size_t>(k), ".");
  return (num_ < 0 ? "-" : "") + d;
}

mpq_class parse_decimal_exact(std::string_view text) { return parse_rational(text); }

}  // namespace takum
