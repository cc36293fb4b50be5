// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../unit/helpers.hpp"
#include "takum/analysis.hpp"
#include "takum/arith.hpp"
#include "takum/closure.hpp"
#include "takum/codec.hpp"
#include "takum/constants.hpp"
#include "takum/linear.hpp"

using namespace takum;
using takum::testing::value_key;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %d: %s %s (%.1fs)\n", id, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void run(int id, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, ok, detail, s);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

BigReal range_limit() { return BigReal::exp_half(0, Dyadic(255)); }

bool in_range(const BigReal& x) {
  static const BigReal lim = range_limit();
  static const BigReal inv = reciprocal(lim);
  BigReal a = x.abs();
  return compare(a, lim) < 0 && compare(a, inv) > 0;
}

// Random real inside the open dynamic range: rationals and irrational sqrt(e)^l alternately.
BigReal random_in_range(int i) {
  for (;;) {
    BigReal x = (i % 2) ? takum::testing::random_real(-184, 184) : takum::testing::random_exp_half(-254.99, 254.99);
    if (in_range(x)) return x;
  }
}

bool structural(std::string& d) {
  for (unsigned n = 2; n <= 16; ++n) {
    const std::uint64_t count = std::uint64_t{1} << n;
    std::set<std::pair<int, Dyadic>> seen;
    std::optional<takum::testing::ValueKey> prev;
    for (std::uint64_t i = 0; i < count; ++i) {
      std::uint64_t p = (i + (count >> 1)) & (count - 1);
      TakumBits b = TakumBits::make(n, p);
      TakumValue v = decode_value(b);
      auto key = value_key(v);
      auto where = [&](const char* what) {
        d = std::string(what) + " fails at n=" + std::to_string(n) + " payload=" + std::to_string(p);
        return false;
      };
      if (!seen.emplace(key.band, key.key).second) return where("uniqueness");
      if (prev && !(*prev < key)) return where("monotonicity");
      prev = key;
      if (decode_value(negate_bits(b)) != v.negated()) return where("negation");
      if (v.is_finite()) {
        if (decode_value(invert_bits(b)) != TakumValue::finite(v.sign_bit(), -v.ell())) return where("inversion");
        if (decode_value(flip_sign_bit(b)) != TakumValue::finite(1 - v.sign_bit(), -v.ell()))
          return where("inversion-negation");
      }
      if (v.is_zero() && !invert_bits(b).is_nar()) return where("inversion of zero");
      if (!v.is_nar() && round(v, n) != b) return where("round idempotence");
    }
  }
  d = "n=2..16, all patterns: unique, ordered, negation, inversion, -1/x by sign flip, round idempotent";
  return true;
}

bool mantissa_counts(std::string& d) {
  for (unsigned n : {12u, 16u}) {
    for (std::uint64_t p = 1; p < (std::uint64_t{1} << n); ++p) {
      Decoded dec = decode(TakumBits::make(n, p));
      if (!dec.value.is_finite()) continue;
      if (mantissa_bit_count(dec.value, n) != dec.fields.mantissa_bits) {
        d = "formula mismatch n=" + std::to_string(n) + " payload=" + std::to_string(p);
        return false;
      }
    }
  }
  long violations = 0;
  for (unsigned n : {12u, 16u}) {
    for (int i = 0; i < 100000; ++i) {
      BigReal x = random_in_range(i);
      if (decode(round(x, n)).fields.mantissa_bits < mantissa_bit_count_lower_bound(x, n)) ++violations;
    }
  }
  d = "formula = decoded p on all finite takum12/takum16; lower bound violations on 2x10^5 reals: " +
      std::to_string(violations);
  return violations == 0;
}

// |x - round(x)| / |x| against lambda(p); returns (provably above, p used)
bool exceeds_lambda(const BigReal& x, const Decoded& dec, int p) {
  Interval e = relative_error(dec.value.to_real(), x, 160);
  Interval lam = lambda(p).enclose(160);
  Mpfr lo(160);
  if (mpfr_sgn(e.lo.get()) > 0) {
    mpfr_set(lo.get(), e.lo.get(), MPFR_RNDD);
  } else if (mpfr_sgn(e.hi.get()) < 0) {
    mpfr_neg(lo.get(), e.hi.get(), MPFR_RNDD);
  } else {
    return false;
  }
  return mpfr_cmp(lo.get(), lam.hi.get()) > 0;
}

bool machine_precision(std::string& d) {
  for (int p = 0; p <= 64; ++p) {
    if (compare(lambda(p), mpq_class(2, 3) * epsilon(p)) >= 0) {
      d = "lambda(p) >= 2/3 eps(p) at p=" + std::to_string(p);
      return false;
    }
  }
  std::ostringstream os;
  os << "lambda(p) < 2/3 eps(p) for p=0..64;";
  bool ok = true;
  for (unsigned n : {12u, 16u, 32u}) {
    long over = 0, clamped = 0, boundary = 0, other = 0;
    std::string example;
    const std::uint64_t maxp = width_mask(n - 1);
    for (int i = 0; i < 10000; ++i) {
      BigReal x = random_in_range(i);
      TakumBits r = round(x, n);
      Decoded dec = decode(r);
      if (!exceeds_lambda(x, dec, dec.fields.mantissa_bits)) continue;
      ++over;
      std::uint64_t mag = r.sign_bit() ? (~r.payload + 1) & width_mask(n) : r.payload;
      bool beyond = compare(x.abs(), dec.value.to_real().abs()) * (mag == 1 ? -1 : 1) > 0;
      int p = dec.fields.mantissa_bits;
      for (std::uint64_t nb : {r.payload - 1, r.payload + 1}) {
        TakumBits b = TakumBits::make(n, nb & width_mask(n));
        if (!b.is_nar() && !b.is_zero()) p = std::min(p, decode(b).fields.mantissa_bits);
      }
      if ((mag == 1 || mag == maxp) && beyond) {
        ++clamped;
      } else if (!exceeds_lambda(x, dec, p)) {
        ++boundary;
      } else {
        ++other;
      }
      if (example.empty()) {
        Interval l = x.enclose_log(64);
        example = fmt(" first: l=%.6f -> l=%.6f", mpfr_get_d(l.lo.get(), MPFR_RNDN), dec.value.ell().to_double()) +
                  " p=" + std::to_string(dec.fields.mantissa_bits);
      }
    }
    os << " n=" << n << ": " << over << "/10000 above lambda(result p)";
    if (over) {
      os << " (" << clamped << " clamped past the extreme pattern, " << boundary
         << " below a regime boundary within the coarser neighbour's bound, " << other << " other;" << example << ")";
    }
    os << ";";
    if (over) ok = false;
  }
  d = os.str();
  return ok;
}

bool waste_table(std::string& d) {
  struct Row {
    const char* name;
    double pct;
  };
  const Row rows[] = {{"float8", 5.08},  {"float16", 3.12}, {"bfloat16", 0.78}, {"TF32", 0.78},
                      {"float32", 0.39}, {"float64", 82.03}, {"float128", 98.88}, {"float256", 99.93}};
  std::ostringstream os;
  bool ok = true;
  for (const auto& r : rows) {
    FormatDescriptor fd = *ieee_format(r.name);
    double got = 100.0 * ieee_waste_ratio(fd.exponent_bits, fd.fraction_bits, fd.subnormals).get_d();
    bool good = std::fabs(got - r.pct) <= 0.01 + 1e-12;
    ok = ok && good;
    os << r.name << "=" << fmt("%.4f", got) << (good ? "" : "!") << " ";
  }
  d = os.str();
  return ok;
}

bool posit_waste(std::string& d) {
  mpq_class t(1, mpz_class(1) << 46);
  bool ok = posit_waste_ratio(47) == 0 && posit_waste_ratio(48) == t && posit_waste_ratio(64) == t;
  d = "n=47 -> 0, n=48,64 -> 2^-46";
  return ok;
}

bool coding_anchors(std::string& d) {
  bool ok = true;
  for (int v = 16; v <= 30; ++v) {
    ok = ok && coding_cost(CodingScheme::Takum, v) == 8 && coding_cost_by_encoding(CodingScheme::Takum, v) == 8;
  }
  ok = ok && coding_cost(CodingScheme::Takum, 254) == 11 && coding_cost_by_encoding(CodingScheme::Takum, 254) == 11;
  ok = ok && coding_cost(CodingScheme::Posit, 30) == 11 && coding_cost_by_encoding(CodingScheme::Posit, 30) == 11;
  for (int v = 0; v <= 254; ++v) ok = ok && coding_cost(CodingScheme::Takum, v) == coding_cost_by_encoding(CodingScheme::Takum, v);
  for (int v = 0; v <= 235; ++v) ok = ok && coding_cost(CodingScheme::Posit, v) == coding_cost_by_encoding(CodingScheme::Posit, v);
  d = "takum 8 bits for v=16..30, 11 at 254; posit 11 at 30; closed forms match the encoders";
  return ok;
}

bool constant_tables(std::string& d) {
  static const char* const expected =
      "format,h,k,e,c,dnu,NA,Lambda,M\n"
      "float8,0,0,0,∞,∞,∞,0,∞\n"
      "posit8,5.96046448e-8,5.960464e-8,5.960464478e-8,1.67772160e7,1.677721600e7,1.67772160e7,5.9605e-8,1.7e7\n"
      "takum8,2.97569687e-35,4.303623e-23,1.282891824e-19,2.94267566e8,1.606646472e10,1.26865561e24,1.2642e-52,7.9e51\n"
      "float16,0,0,0,∞,∞,∞,0,∞\n"
      "bfloat16,6.62038418e-34,1.385528e-23,1.600892270e-19,2.99892736e8,9.193914368e9,6.02101727e23,0,∞\n"
      "posit16,1.38777878e-17,1.387779e-17,1.387778781e-17,3.01989888e8,9.663676416e9,7.20575940e16,1.3878e-17,7.2e16\n"
      "takum16,6.56428218e-34,1.375520e-23,1.596584671e-19,2.98901606e8,9.226194467e9,5.99270479e23,1.1156e-52,1.5e53\n"
      "TF32,6.62790735e-34,1.380358e-23,1.601951062e-19,2.99892736e8,9.193914368e9,6.02101727e23,0,∞\n"
      "posit19,3.38813179e-21,3.388132e-21,2.168404345e-19,2.99892736e8,9.126805504e9,2.95147905e20,3.3881e-21,3.0e20\n"
      "takum19,6.61576649e-34,1.380904e-23,1.602833526e-19,2.99778578e8,9.190224944e9,6.02792137e23,1.1070e-52,1.5e53\n"
      "float32,6.62607018e-34,1.380649e-23,1.602176598e-19,2.99792448e8,9.192631296e9,6.02214064e23,0,∞\n"
      "posit32,7.70371978e-34,1.380358e-23,1.602215759e-19,2.99792384e8,9.192636416e9,6.02101727e23,7.5232e-37,1.3e36\n"
      "takum32,6.62607126e-34,1.380649e-23,1.602176753e-19,2.99792444e8,9.192632204e9,6.02214098e23,1.1056e-52,1.5e53\n";
  auto t0 = std::chrono::steady_clock::now();
  std::string got = constants_csv(named_constants());
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int bad = 0;
  std::istringstream g(got), e(expected);
  std::string gl, el;
  while (std::getline(e, el)) {
    if (!std::getline(g, gl)) gl.clear();
    std::istringstream gc(gl), ec(el);
    std::string a, b;
    while (std::getline(ec, b, ',')) {
      if (!std::getline(gc, a, ',')) a.clear();
      if (a != b) ++bad;
    }
  }
  d = std::to_string(bad) + " mismatched cells of 13x8 + header" + fmt(", %.3fs", s);
  return bad == 0 && s < 1.0;
}

struct Target {
  const char* format;
  const char* op;
  double pct;
};

// Position of the last exact entry on the curve's fraction axis.
double curve_percent(std::uint64_t k, std::uint64_t L) {
  if (k == 0) return 0.0;
  if (L <= 1) return 100.0;
  return 100.0 * static_cast<double>(k - 1) / static_cast<double>(L - 1);
}

bool check_targets(const std::vector<Target>& targets, bool sixteen, std::string& d) {
  std::ostringstream os;
  bool ok = true;
  for (const auto& t : targets) {
    SweepFormat fmt_ = parse_sweep_format(t.format);
    Op op = parse_op(t.op);
    std::uint64_t k, L;
    if (!sixteen || is_unary(op)) {
      SweepOptions o;
      o.jobs = jobs();
      o.check_oracle = !sixteen;
      SweepResult r = sweep(op, fmt_, o);
      k = r.curve.exact_count;
      L = r.records.size();
      if (!sixteen) {
        auto [k2, L2] = count_exact(op, fmt_);
        if (k2 != k || L2 != L) {
          os << t.format << " " << t.op << " sweep/count disagree; ";
          ok = false;
        }
      }
    } else {
      std::tie(k, L) = count_exact(op, fmt_);
    }
    double pos = curve_percent(k, L);
    double plain = L ? 100.0 * static_cast<double>(k) / static_cast<double>(L) : 0.0;
    bool good = t.pct == 0.0 ? pos <= 0.05 : std::fabs(pos - t.pct) <= 0.1 + 1e-9;
    ok = ok && good;
    os << t.format << " " << t.op << " " << fmt("%.3f", pos) << (good ? "" : "!") << " (k/L " << fmt("%.3f", plain)
       << ", want " << fmt("%.1f", t.pct) << "); ";
  }
  d = os.str();
  return ok;
}

bool closure8(std::string& d) {
  const std::vector<Target> t = {
      {"takum8", "add", 0.0},    {"posit8", "add", 7.5},     {"takum8", "sub", 1.9},    {"posit8", "sub", 15.9},
      {"takum8", "mul", 40.3},   {"posit8", "mul", 25.6},    {"takum8", "div", 40.3},   {"posit8", "div", 25.6},
      {"takum8", "inv", 100.0},  {"posit8", "inv", 30.2},    {"takum8", "sqrt", 58.8},  {"posit8", "sqrt", 20.6},
      {"takum8", "square", 60.0}, {"posit8", "square", 20.6},
  };
  return check_targets(t, false, d);
}

bool closure16(std::string& d) {
  const std::vector<Target> t = {
      {"takum16", "inv", 100.0}, {"posit16", "inv", 0.3},  {"bfloat16", "inv", 0.8},
      {"takum16", "sqrt", 84.1}, {"posit16", "sqrt", 1.3}, {"bfloat16", "sqrt", 3.1},
      {"takum16", "add", 0.0},   {"posit16", "add", 8.5},  {"bfloat16", "add", 1.7},
      {"takum16", "sub", 0.0},   {"posit16", "sub", 16.7}, {"bfloat16", "sub", 3.5},
      {"takum16", "mul", 36.6},  {"posit16", "mul", 3.3},  {"bfloat16", "mul", 2.7},
      {"takum16", "div", 36.7},  {"posit16", "div", 3.3},  {"bfloat16", "div", 2.7},
  };
  return check_targets(t, true, d);
}

bool nar_propagation(std::string& d) {
  const unsigned n = 8;
  TakumValue nar = TakumValue::nar();
  long checked = 0;
  for (std::uint64_t p = 0; p < 256; ++p) {
    TakumValue x = decode_value(TakumBits::make(n, p));
    const std::vector<std::function<TakumBits(const TakumValue&, const TakumValue&)>> ops = {
        [](auto& a, auto& b) { return add(a, b, 8); }, [](auto& a, auto& b) { return sub(a, b, 8); },
        [](auto& a, auto& b) { return mul(a, b, 8); }, [](auto& a, auto& b) { return div(a, b, 8); }};
    for (const auto& f : ops) {
      if (!f(x, nar).is_nar() || !f(nar, x).is_nar()) {
        d = "non-NaR result with a NaR operand, payload " + std::to_string(p);
        return false;
      }
      checked += 2;
    }
  }
  bool ok = inv(nar, n).is_nar() && sqrt_abs(nar, n).is_nar() && square(nar, n).is_nar();
  d = "add/sub/mul/div over all " + std::to_string(checked) + " pairs with a NaR operand, inv/sqrt/square of NaR";
  return ok;
}

bool linear_suite(std::string& d) {
  for (unsigned n = 2; n <= 16; ++n) {
    const std::uint64_t count = std::uint64_t{1} << n;
    bool have = false;
    mpq_class prev;
    for (std::uint64_t i = 1; i < count; ++i) {  // skip NaR at i = 0
      std::uint64_t p = (i + (count >> 1)) & (count - 1);
      TakumBits b = TakumBits::make(n, p);
      mpq_class v = lin_decode(b).to_rational();
      if (have && !(prev < v)) {
        d = "linear order/uniqueness fails n=" + std::to_string(n) + " payload=" + std::to_string(p);
        return false;
      }
      prev = v;
      have = true;
      if (lin_decode(negate_bits(b)).to_rational() != -v) {
        d = "linear negation fails n=" + std::to_string(n) + " payload=" + std::to_string(p);
        return false;
      }
    }
    if (!lin_decode(TakumBits::nar(n)).is_nar() || !lin_decode(negate_bits(TakumBits::nar(n))).is_nar()) return false;
  }
  // 1.5 at n = 12: the logarithmic inversion rule yields 0.75, not 2/3
  TakumBits x = TakumBits::make(12, 0x440);
  mpq_class got = lin_decode(invert_bits(x)).to_rational();
  bool counter = lin_decode(x).to_rational() == mpq_class(3, 2) && got != mpq_class(2, 3);
  d = "n=2..16 unique, ordered, negation exact; inversion rule maps 1.5 to " + got.get_str() + " instead of 2/3";
  return counter;
}

}  // namespace

int main() {
  run(1, structural);
  run(2, mantissa_counts);
  run(3, machine_precision);
  run(4, waste_table);
  run(5, posit_waste);
  run(6, coding_anchors);
  run(7, constant_tables);
  run(8, closure8);
  run(9, closure16);
  run(10, nar_propagation);
  run(11, linear_suite);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures ? 1 : 0;
}
