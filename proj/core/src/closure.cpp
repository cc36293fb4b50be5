#include "takum/closure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <thread>

#include <unistd.h>

#include "takum/error.hpp"
#include "takum/posit.hpp"

namespace takum {

namespace {

constexpr unsigned kMaxSweepWidth = 20;

mpq_class pow2(long e) {
  mpq_class q(1);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  return q;
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Enclosure of rounded - exact contains zero at baseline precision.
bool oracle_says_exact(const BigReal& rounded, const BigReal& exact) {
  mpfr_prec_t p = oracle_bits();
  Interval r = rounded.enclose(p), x = exact.enclose(p);
  Mpfr dlo(p + 8), dhi(p + 8);
  mpfr_sub(dlo.get(), r.lo.get(), x.hi.get(), MPFR_RNDD);
  mpfr_sub(dhi.get(), r.hi.get(), x.lo.get(), MPFR_RNDU);
  return mpfr_sgn(dlo.get()) <= 0 && mpfr_sgn(dhi.get()) >= 0;
}

std::optional<std::uint64_t> positive_pattern_limit(const SweepFormat& fmt) {
  switch (fmt.family) {
    case SweepFormat::Family::Takum:
    case SweepFormat::Family::Posit:
      return width_mask(fmt.width - 1);
    case SweepFormat::Family::Ieee:
      return (width_mask(static_cast<unsigned>(fmt.ieee.exponent_bits)) << fmt.ieee.fraction_bits) - 1;
  }
  return std::nullopt;
}

BigReal value_of(const SweepFormat& fmt, std::uint64_t payload) {
  switch (fmt.family) {
    case SweepFormat::Family::Takum:
      return decode_value(TakumBits::make(fmt.width, payload)).to_real();
    case SweepFormat::Family::Posit:
      return BigReal(posit_value(PositBits::make(fmt.width, payload)));
    case SweepFormat::Family::Ieee: {
      IeeeValue v = ieee_decode(fmt.ieee, payload);
      return BigReal(v.kind == IeeeValue::Kind::Finite ? v.value : mpq_class(0));
    }
  }
  return BigReal::zero();
}

// ---- integer representability tests for count_exact -------------------

// Takum: l held as fixed point with kFix fractional bits.
constexpr int kFix = 24;

struct TakumGrid {
  int mbits[510];  // by c + 255; -1 when the characteristic is absent
  explicit TakumGrid(unsigned n) {
    std::fill(std::begin(mbits), std::end(mbits), -1);
    for (std::uint64_t p = 1; p <= width_mask(n - 1); ++p) {
      DecodedFields f = decode(TakumBits::make(n, p)).fields;
      int& slot = mbits[f.characteristic + 255];
      slot = std::max(slot, f.mantissa_bits);
    }
  }
  bool representable(std::int64_t fixed) const {
    std::int64_t c = fixed >> kFix;  // floor
    if (c < -255 || c > 254) return false;
    int mb = mbits[c + 255];
    if (mb < 0) return false;
    std::int64_t frac = fixed & ((std::int64_t{1} << kFix) - 1);
    return (frac & ((std::int64_t{1} << (kFix - mb)) - 1)) == 0;
  }
};

// Linear formats: value M * 2^E with M odd.
struct Odd {
  std::uint64_t m;
  int e;
};

Odd normalize(u128 s, int e) {
  if (s == 0) return {0, 0};
  auto low = static_cast<std::uint64_t>(s);
  int tz = low ? std::countr_zero(low) : 64 + std::countr_zero(static_cast<std::uint64_t>(s >> 64));
  s >>= tz;
  e += tz;
  if (s >> 63) return {~std::uint64_t{0}, e};  // too wide for any sweep format
  return {static_cast<std::uint64_t>(s), e};
}

struct LinearGrid {
  std::map<int, int> fbits;  // binade -> fraction bits
  int lo = 0, hi = -1;
  std::vector<int> table;
  explicit LinearGrid(const SweepFormat& fmt) {
    std::uint64_t lim = *positive_pattern_limit(fmt);
    for (std::uint64_t p = 1; p <= lim; ++p) {
      BigReal v = value_of(fmt, p);
      if (v.is_zero()) continue;
      Dyadic d = Dyadic::from_mpq(*v.rational());
      int len = bit_length(static_cast<u128>(d.numerator()));
      int b = d.exponent() + len - 1;
      auto [it, fresh] = fbits.emplace(b, len - 1);
      if (!fresh) it->second = std::max(it->second, len - 1);
    }
    lo = fbits.begin()->first;
    hi = fbits.rbegin()->first;
    table.assign(static_cast<size_t>(hi - lo + 1), -1);
    for (auto [b, f] : fbits) table[static_cast<size_t>(b - lo)] = f;
  }
  bool representable(Odd v) const {
    if (v.m == ~std::uint64_t{0}) return false;
    int len = std::bit_width(v.m);
    int b = v.e + len - 1;
    if (b < lo || b > hi) return false;
    int f = table[static_cast<size_t>(b - lo)];
    return f >= 0 && f >= len - 1;
  }
};

std::uint64_t isqrt_exact(std::uint64_t m, bool& ok) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)));
  while (r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  ok = r * r == m;
  return r;
}

bool linear_exact(Op op, const LinearGrid& g, Odd x, Odd y) {
  switch (op) {
    case Op::Mul:
      return g.representable(normalize(static_cast<u128>(x.m) * y.m, x.e + y.e));
    case Op::Div:
      if (x.m % y.m) return false;
      return g.representable(normalize(x.m / y.m, x.e - y.e));
    case Op::Inv:
      return x.m == 1 && g.representable({1, -x.e});
    case Op::Sqrt: {
      if (x.e % 2) return false;
      bool ok = false;
      std::uint64_t r = isqrt_exact(x.m, ok);
      return ok && g.representable({r, x.e / 2});
    }
    case Op::Square:
      return g.representable(normalize(static_cast<u128>(x.m) * x.m, 2 * x.e));
    case Op::Add:
    case Op::Sub: {
      int e = std::min(x.e, y.e);
      u128 a = static_cast<u128>(x.m) << (x.e - e);
      u128 b = static_cast<u128>(y.m) << (y.e - e);
      if (op == Op::Add) return g.representable(normalize(a + b, e));
      if (a == b) return true;  // exact zero
      return g.representable(normalize(a > b ? a - b : b - a, e));
    }
  }
  return false;
}

}  // namespace

Op parse_op(std::string_view name) {
  static const std::pair<const char*, Op> table[] = {{"add", Op::Add}, {"sub", Op::Sub},   {"mul", Op::Mul},
                                                     {"div", Op::Div}, {"inv", Op::Inv},   {"sqrt", Op::Sqrt},
                                                     {"square", Op::Square}};
  for (auto& [n, op] : table)
    if (name == n) return op;
  throw Error(ErrorKind::ParseError, "unknown operation: " + std::string(name));
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Inv: return "inv";
    case Op::Sqrt: return "sqrt";
    case Op::Square: return "square";
  }
  return "?";
}

bool is_unary(Op op) { return op == Op::Inv || op == Op::Sqrt || op == Op::Square; }
bool is_log_domain(Op op) { return op != Op::Add && op != Op::Sub; }

SweepFormat parse_sweep_format(std::string_view name) {
  SweepFormat f;
  f.name = std::string(name);
  auto width_after = [&](std::string_view prefix) -> std::optional<unsigned> {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    std::string rest(name.substr(prefix.size()));
    if (rest.empty() || rest.size() > 2 || rest.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    return static_cast<unsigned>(std::stoul(rest));
  };
  if (auto w = width_after("takum")) {
    f.family = SweepFormat::Family::Takum;
    f.width = *w;
  } else if (auto w2 = width_after("posit")) {
    f.family = SweepFormat::Family::Posit;
    f.width = *w2;
  } else if (auto fd = ieee_format(name)) {
    f.family = SweepFormat::Family::Ieee;
    f.ieee = *fd;
    f.width = static_cast<unsigned>(fd->width());
  } else {
    throw Error(ErrorKind::UnsupportedFormat, "unsupported sweep format: " + std::string(name));
  }
  if (f.width < 2 || f.width > kMaxSweepWidth)
    throw Error(ErrorKind::UnsupportedFormat, "sweeps support widths 2..20: " + std::string(name));
  return f;
}

std::pair<mpq_class, mpq_class> default_range(unsigned width) {
  long e = 4L * static_cast<long>(width) - 8;
  return {pow2(-e), pow2(e)};
}

std::vector<Operand> operands(const SweepFormat& fmt, const mpq_class& lo, const mpq_class& hi) {
  std::vector<Operand> out;
  std::uint64_t lim = *positive_pattern_limit(fmt);
  for (std::uint64_t p = 1; p <= lim; ++p) {
    BigReal v = value_of(fmt, p);
    if (v.is_zero()) continue;
    if (compare(v, lo) < 0 || compare(v, hi) > 0) continue;
    out.push_back({p, v});
  }
  return out;
}

Rounded round_into(const SweepFormat& fmt, const BigReal& x) {
  Rounded r;
  switch (fmt.family) {
    case SweepFormat::Family::Takum: {
      TakumBits b = round(x, fmt.width);
      r.payload = b.payload;
      TakumValue v = decode_value(b);
      r.special = v.is_nar();
      if (!r.special) r.value = v.to_real();
      break;
    }
    case SweepFormat::Family::Posit: {
      PositBits b = posit_round(x, fmt.width);
      r.payload = b.payload;
      r.value = BigReal(posit_value(b));
      break;
    }
    case SweepFormat::Family::Ieee: {
      r.payload = ieee_round(fmt.ieee, x);
      IeeeValue v = ieee_decode(fmt.ieee, r.payload);
      r.special = v.kind == IeeeValue::Kind::Infinite || v.kind == IeeeValue::Kind::NaN;
      if (v.kind == IeeeValue::Kind::Finite) r.value = BigReal(v.value);
      break;
    }
  }
  return r;
}

BigReal apply(Op op, const BigReal& x, const BigReal& y) {
  switch (op) {
    case Op::Add: return x + y;
    case Op::Sub: return x - y;
    case Op::Mul: return x * y;
    case Op::Div: return x / y;
    case Op::Inv: return reciprocal(x);
    case Op::Sqrt: return sqrt(x);
    case Op::Square: return square(x);
  }
  return x;
}

double eta(double e_rel) {
  if (e_rel == 0) return std::numeric_limits<double>::infinity();
  double v = -std::log2(std::fabs(e_rel));
  return std::log2(std::max(1.0, v));
}

double PrecisionCurve::exactness_ratio() const {
  return eta.empty() ? 0.0 : static_cast<double>(exact_count) / static_cast<double>(eta.size());
}

double PrecisionCurve::exact_curve_fraction() const {
  if (exact_count == 0) return 0.0;
  if (eta.size() <= 1) return 1.0;
  return static_cast<double>(exact_count - 1) / static_cast<double>(eta.size() - 1);
}

double PrecisionCurve::fraction_at(std::size_t i) const {
  return eta.size() <= 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(eta.size() - 1);
}

PrecisionCurve make_curve(const std::vector<ErrorRecord>& records) {
  PrecisionCurve c;
  c.eta.reserve(records.size());
  for (const auto& r : records) {
    c.eta.push_back(r.exact_flag ? std::numeric_limits<double>::infinity() : eta(r.e_rel));
    if (r.exact_flag) ++c.exact_count;
  }
  std::sort(c.eta.begin(), c.eta.end(), std::greater<>());
  return c;
}

SweepResult sweep(Op op, const SweepFormat& fmt, const SweepOptions& opts) {
  SweepResult res;
  res.format = fmt;
  res.op = op;
  auto [lo, hi] = opts.range ? *opts.range : default_range(fmt.width);
  std::vector<Operand> all = operands(fmt, lo, hi);
  std::size_t stride = std::max<std::size_t>(1, opts.stride);
  for (std::size_t i = 0; i < all.size(); i += stride) res.xs.push_back(all[i]);
  const std::size_t n = res.xs.size();
  const bool unary = is_unary(op);
  const std::size_t cols = unary ? 1 : n;
  res.records.resize(n * cols);

  auto run_row = [&](std::size_t i) {
    for (std::size_t j = 0; j < cols; ++j) {
      ErrorRecord& rec = res.records[i * cols + j];
      const BigReal& x = res.xs[i].value;
      const BigReal& y = unary ? x : res.xs[j].value;
      rec.x_index = i;
      if (!unary) rec.y_index = j;
      rec.x = x.to_double();
      rec.y = unary ? 0.0 : y.to_double();
      rec.exact = apply(op, x, y);
      if (rec.exact.is_zero()) {
        rec.rounded = BigReal::zero();
        rec.exact_flag = rec.oracle_exact_flag = true;
        continue;
      }
      Rounded r = round_into(fmt, rec.exact);
      if (r.special) {
        rec.e_rel = std::numeric_limits<double>::infinity();
        rec.e_abs = std::numeric_limits<double>::infinity();
        continue;
      }
      rec.rounded = r.value;
      rec.exact_flag = exactly_equal(r.value, rec.exact);
      if (opts.check_oracle && is_log_domain(op)) rec.oracle_exact_flag = oracle_says_exact(r.value, rec.exact);
      if (rec.exact_flag) continue;
      Interval e = relative_error(r.value, rec.exact, 64);
      Mpfr mid(64);
      mpfr_add(mid.get(), e.lo.get(), e.hi.get(), MPFR_RNDN);
      mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
      rec.e_rel = mid.to_double();
      rec.e_abs = rec.e_rel * rec.exact.to_double();
    }
  };

  unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) run_row(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += jobs) run_row(i);
      });
    for (auto& th : pool) th.join();
  }
  res.curve = make_curve(res.records);
  return res;
}

std::pair<std::uint64_t, std::uint64_t> count_exact(Op op, const SweepFormat& fmt,
                                                    std::optional<std::pair<mpq_class, mpq_class>> range) {
  auto [lo, hi] = range ? *range : default_range(fmt.width);
  std::vector<Operand> xs = operands(fmt, lo, hi);
  const std::uint64_t n = xs.size();
  const bool unary = is_unary(op);
  const std::uint64_t total = unary ? n : n * n;
  std::uint64_t k = 0;

  if (fmt.family == SweepFormat::Family::Takum) {
    TakumGrid g(fmt.width);
    std::vector<std::int64_t> ls;
    for (const auto& o : xs) ls.push_back(static_cast<std::int64_t>(o.value.exp_half_form()->second.floor_scaled(kFix)));
    switch (op) {
      case Op::Inv:
        for (auto l : ls) k += g.representable(-l);
        break;
      case Op::Sqrt:
        for (auto l : ls) k += g.representable(l / 2);
        break;
      case Op::Square:
        for (auto l : ls) k += g.representable(2 * l);
        break;
      case Op::Mul:
        for (auto a : ls)
          for (auto b : ls) k += g.representable(a + b);
        break;
      case Op::Div:
        for (auto a : ls)
          for (auto b : ls) k += g.representable(a - b);
        break;
      case Op::Add:
        break;  // sums of distinct powers of sqrt(e) are never takums
      case Op::Sub:
        k = n;  // only x - x
        break;
    }
    return {k, total};
  }

  LinearGrid g(fmt);
  std::vector<Odd> vs;
  for (const auto& o : xs) {
    Dyadic d = Dyadic::from_mpq(*o.value.rational());
    vs.push_back({static_cast<std::uint64_t>(d.numerator()), d.exponent()});
  }
  if (unary) {
    for (const auto& v : vs) k += linear_exact(op, g, v, v);
  } else {
    for (const auto& a : vs)
      for (const auto& b : vs) k += linear_exact(op, g, a, b);
  }
  return {k, total};
}

std::string matrix_csv(const SweepResult& r) {
  std::string out = "x,y,e_rel\n";
  for (const auto& rec : r.records) {
    out += fmt_double(rec.x);
    out += ',';
    if (rec.y_index) out += fmt_double(rec.y);
    out += ',';
    out += fmt_double(rec.exact_flag ? 0.0 : rec.e_rel);
    out += '\n';
  }
  return out;
}

std::string curve_csv(const PrecisionCurve& c) {
  std::string out = "fraction,eta\n";
  for (std::size_t i = 0; i < c.eta.size(); ++i) {
    out += fmt_double(c.fraction_at(i));
    out += ',';
    out += fmt_double(c.eta[i]);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::DomainError, "cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::DomainError, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::DomainError, "cannot rename into " + target.string());
  }
}

}  // namespace takum
