#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "takum/analysis.hpp"
#include "takum/bits.hpp"
#include "takum/closure.hpp"
#include "takum/codec.hpp"
#include "takum/constants.hpp"
#include "takum/decimal.hpp"
#include "takum/error.hpp"
#include "takum/ieee.hpp"
#include "takum/linear.hpp"
#include "takum/posit.hpp"

namespace fs = std::filesystem;
using namespace takum;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;

struct Format {
  enum class Kind { Takum, Linear, Posit, Ieee };
  Kind kind = Kind::Takum;
  unsigned width = 0;
  FormatDescriptor ieee;
  std::string tag;
};

std::optional<unsigned> width_after(const std::string& name, const std::string& prefix) {
  if (name.rfind(prefix, 0) != 0) return std::nullopt;
  std::string rest = name.substr(prefix.size());
  if (rest.empty() || rest.size() > 2 || rest.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  return static_cast<unsigned>(std::stoul(rest));
}

Format parse_format(const std::string& name) {
  Format f;
  f.tag = name;
  if (auto w = width_after(name, "lintakum")) {
    f.kind = Format::Kind::Linear;
    f.width = *w;
  } else if (auto w2 = width_after(name, "takum")) {
    f.kind = Format::Kind::Takum;
    f.width = *w2;
  } else if (auto w3 = width_after(name, "posit")) {
    f.kind = Format::Kind::Posit;
    f.width = *w3;
  } else if (auto fd = ieee_format(name)) {
    f.kind = Format::Kind::Ieee;
    f.ieee = *fd;
    f.width = static_cast<unsigned>(fd->width());
    return f;
  } else {
    throw Error(ErrorKind::UnknownFormat, "unknown format: " + name);
  }
  check_width(f.width);
  return f;
}

// Decimal text, a/b, or l=<dyadic> / -l=<dyadic> for sqrt(e)^l.
BigReal parse_value(const std::string& text) {
  if (text.rfind("l=", 0) == 0) return BigReal::exp_half(0, Dyadic::parse(text.substr(2)));
  if (text.rfind("-l=", 0) == 0) return BigReal::exp_half(1, Dyadic::parse(text.substr(3)));
  return BigReal::from_decimal(text);
}

// Significant digits written in a plain decimal literal, if it is one.
std::optional<int> literal_digits(const std::string& text) {
  std::string s = text;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.erase(0, 1);
  if (auto e = s.find_first_of("eE"); e != std::string::npos) s.resize(e);
  std::string digits;
  for (char c : s) {
    if (c == '.') continue;
    if (c < '0' || c > '9') return std::nullopt;
    digits += c;
  }
  auto nz = digits.find_first_not_of('0');
  if (nz == std::string::npos) return std::nullopt;
  return static_cast<int>(digits.size() - nz);
}

std::string payload_text(const Format& f, std::uint64_t payload) {
  return f.tag + ":" + hex_payload(payload);
}

std::string value_text(const BigReal& v, std::optional<int> digits) {
  if (v.is_zero()) return "0";
  return digits ? to_decimal(v, *digits) : to_shortest(v);
}

// Value of a payload; nullopt for NaR/NaN/inf (printed separately).
std::optional<BigReal> payload_value(const Format& f, std::uint64_t p) {
  switch (f.kind) {
    case Format::Kind::Takum: {
      TakumValue v = decode_value(TakumBits::make(f.width, p));
      if (v.is_nar()) return std::nullopt;
      return v.to_real();
    }
    case Format::Kind::Linear: {
      LinearTakumValue v = lin_decode(TakumBits::make(f.width, p));
      if (v.is_nar()) return std::nullopt;
      return BigReal(v.to_rational());
    }
    case Format::Kind::Posit: {
      PositBits b = PositBits::make(f.width, p);
      if (b.is_nar()) return std::nullopt;
      return BigReal(posit_value(b));
    }
    case Format::Kind::Ieee: {
      IeeeValue v = ieee_decode(f.ieee, p);
      if (v.kind == IeeeValue::Kind::Zero) return BigReal::zero();
      if (v.kind != IeeeValue::Kind::Finite) return std::nullopt;
      return BigReal(v.value);
    }
  }
  return std::nullopt;
}

std::string special_text(const Format& f, std::uint64_t p) {
  if (f.kind != Format::Kind::Ieee) return "NaR";
  IeeeValue v = ieee_decode(f.ieee, p);
  if (v.kind == IeeeValue::Kind::Infinite) return v.sign ? "-inf" : "inf";
  return "NaN";
}

void print_payload(const Format& f, std::uint64_t p, std::optional<int> digits = std::nullopt) {
  std::cout << payload_text(f, p) << "\n";
  auto v = payload_value(f, p);
  std::cout << "value=" << (v ? value_text(*v, digits) : special_text(f, p)) << "\n";
}

std::uint64_t round_into(const Format& f, const std::string& text) {
  if (text == "NaR" || text == "nan" || text == "NaN") {
    switch (f.kind) {
      case Format::Kind::Ieee: return ieee_nan(f.ieee);
      default: return round_nar(f.width).payload;
    }
  }
  BigReal x = parse_value(text);
  switch (f.kind) {
    case Format::Kind::Takum: return round(x, f.width).payload;
    case Format::Kind::Linear: return lin_round(x, f.width).payload;
    case Format::Kind::Posit: return posit_round(x, f.width).payload;
    case Format::Kind::Ieee: return ieee_round(f.ieee, x);
  }
  return 0;
}

// ---- codec ----------------------------------------------------------------

void codec_decode(const Format& f, const std::string& payload) {
  std::uint64_t p = parse_payload(payload, f.width);
  switch (f.kind) {
    case Format::Kind::Takum: std::cout << dump(TakumBits::make(f.width, p)); break;
    case Format::Kind::Linear: std::cout << lin_dump(TakumBits::make(f.width, p)); break;
    case Format::Kind::Posit: std::cout << posit_dump(PositBits::make(f.width, p)); break;
    case Format::Kind::Ieee: std::cout << ieee_dump(f.ieee, p); break;
  }
}

void print_encoding(const TakumEncoding& e) {
  std::cout << "S=" << e.sign() << " D=" << e.direction() << " r=" << e.regime() << " c=" << e.characteristic();
  if (auto p = e.mantissa_bits()) {
    std::cout << " p=" << *p << "\n";
  } else {
    u128 prefix = e.mantissa_prefix(64);
    std::string bits;
    for (int i = 63; i >= 0; --i) bits += static_cast<char>('0' + static_cast<int>((prefix >> i) & 1));
    std::cout << " p=unbounded\nM=" << bits << "...\n";
  }
}

void codec_encode(const Format& f, const std::string& text) {
  BigReal x = parse_value(text);
  switch (f.kind) {
    case Format::Kind::Takum: {
      if (x.is_zero()) {
        print_payload(f, 0);
        return;
      }
      TakumEncoding e = encode_exact(x);
      print_encoding(e);
      if (auto form = x.exp_half_form()) {
        TakumBits b = encode_minimal(TakumValue::finite(form->first, form->second));
        std::cout << to_text(b) << "\n";
      }
      return;
    }
    case Format::Kind::Linear: {
      const mpq_class* q = x.rational();
      if (!q) throw Error(ErrorKind::DomainError, "linear takums encode dyadic rationals only");
      if (*q == 0) {
        print_payload(f, 0);
        return;
      }
      Dyadic d = Dyadic::from_mpq(*q);
      int s = d.sign() < 0 ? 1 : 0;
      Dyadic a = s ? -d : d;
      int h = bit_length(static_cast<u128>(a.numerator())) - 1 + a.exponent();
      Dyadic g = a.ldexp(-h) - Dyadic(1);
      std::cout << lin_dump(lin_pattern(lin_encode(DyadicTriple{s, g, h})));
      return;
    }
    case Format::Kind::Posit:
    case Format::Kind::Ieee: {
      std::uint64_t p = round_into(f, text);
      auto v = payload_value(f, p);
      if (!v || !exactly_equal(*v, x)) throw Error(ErrorKind::DomainError, "value is not representable in " + f.tag);
      print_payload(f, p);
      return;
    }
  }
}

void codec_negate(const Format& f, const std::string& payload) {
  std::uint64_t p = parse_payload(payload, f.width);
  std::uint64_t r = 0;
  switch (f.kind) {
    case Format::Kind::Takum:
    case Format::Kind::Linear: r = negate_bits(TakumBits::make(f.width, p)).payload; break;
    case Format::Kind::Posit: r = posit_negate(PositBits::make(f.width, p)).payload; break;
    case Format::Kind::Ieee: r = p ^ (std::uint64_t{1} << (f.width - 1)); break;
  }
  print_payload(f, r);
}

void codec_invert(const Format& f, const std::string& payload) {
  if (f.kind != Format::Kind::Takum)
    throw Error(ErrorKind::UnsupportedFormat, "bitwise inversion is exact only for logarithmic takums");
  print_payload(f, invert_bits(TakumBits::make(f.width, parse_payload(payload, f.width))).payload);
}

void codec_resize(const Format& f, const std::string& payload, unsigned n2) {
  std::uint64_t p = parse_payload(payload, f.width);
  check_width(n2);
  Format g = f;
  g.width = n2;
  switch (f.kind) {
    case Format::Kind::Takum:
      g.tag = "takum" + std::to_string(n2);
      print_payload(g, resize(TakumBits::make(f.width, p), n2).payload);
      return;
    case Format::Kind::Linear:
    case Format::Kind::Posit: {
      g.tag = (f.kind == Format::Kind::Linear ? "lintakum" : "posit") + std::to_string(n2);
      std::uint64_t r;
      if (n2 >= f.width) {
        r = p << (n2 - f.width);
      } else {
        auto v = payload_value(f, p);
        if (!v) {
          r = std::uint64_t{1} << (n2 - 1);
        } else if (f.kind == Format::Kind::Linear) {
          r = lin_round(*v, n2).payload;
        } else {
          r = posit_round(*v, n2).payload;
        }
      }
      print_payload(g, r);
      return;
    }
    case Format::Kind::Ieee:
      throw Error(ErrorKind::UnsupportedFormat, "resize applies to takum, lintakum and posit formats");
  }
}

void codec_compare(const Format& f, const std::string& a, const std::string& b) {
  std::uint64_t pa = parse_payload(a, f.width), pb = parse_payload(b, f.width);
  auto sym = [](std::strong_ordering o) { return o < 0 ? "<" : (o > 0 ? ">" : "="); };
  if (f.kind == Format::Kind::Ieee) {
    auto va = payload_value(f, pa), vb = payload_value(f, pb);
    IeeeValue da = ieee_decode(f.ieee, pa), db = ieee_decode(f.ieee, pb);
    if (da.kind == IeeeValue::Kind::NaN || db.kind == IeeeValue::Kind::NaN) {
      std::cout << "unordered\n";
      return;
    }
    auto rank = [](const IeeeValue& v) { return v.kind == IeeeValue::Kind::Infinite ? (v.sign ? -1 : 1) : 0; };
    int ra = rank(da), rb = rank(db);
    if (ra != rb || ra != 0) {
      std::cout << sym(ra <=> rb) << "\n";
      return;
    }
    int c = compare(*va, *vb);
    std::cout << sym(c <=> 0) << "\n";
    return;
  }
  // takum, linear takum and posit share two's-complement ordering with NaR lowest
  std::cout << sym(compare(TakumBits::make(f.width, pa), TakumBits::make(f.width, pb))) << "\n";
}

// ---- report ---------------------------------------------------------------

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  fs::path p = dir / name;
  write_file_atomic(p.string(), content);
  std::cout << "wrote " << p.string() << "\n";
}

void report_waste(const fs::path& out) {
  std::string csv = "format,exponent_bits,fraction_bits,subnormals,waste_percent\n";
  for (const auto& fd : ieee_formats()) {
    mpq_class r = ieee_waste_ratio(fd.exponent_bits, fd.fraction_bits, fd.subnormals);
    double pct = mpq_class(r * 100).get_d();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", pct);
    csv += fd.name + "," + std::to_string(fd.exponent_bits) + "," + std::to_string(fd.fraction_bits) + "," +
           (fd.subnormals ? "true" : "false") + "," + buf + "\n";
  }
  emit(out, "waste.csv", csv);
  std::string posit = "n,waste_ratio\n";
  for (unsigned n = 2; n <= 64; ++n) posit += std::to_string(n) + "," + fmt_g(posit_waste_ratio(n).get_d()) + "\n";
  emit(out, "posit_waste.csv", posit);
}

void report_cost(const fs::path& out) {
  std::string csv = "value,takum,posit,elias_gamma,elias_delta\n";
  for (int v = 0; v <= 254; ++v) {
    csv += std::to_string(v) + "," + std::to_string(coding_cost(CodingScheme::Takum, v)) + "," +
           std::to_string(coding_cost(CodingScheme::Posit, v)) + "," +
           std::to_string(coding_cost(CodingScheme::EliasGamma, v)) + "," +
           std::to_string(coding_cost(CodingScheme::EliasDelta, v)) + "\n";
  }
  emit(out, "cost.csv", csv);
}

void report_dynrange(const fs::path& out) {
  std::string csv = "n,takum_min,takum_max,posit_min,posit_max,ieee_normal_min,ieee_subnormal_min,ieee_max\n";
  for (unsigned n = 2; n <= 64; ++n) {
    DynamicRange t = takum_dynamic_range(n), p = posit_dynamic_range(n);
    csv += std::to_string(n) + "," + to_shortest(t.min_positive) + "," + to_shortest(t.max_positive) + "," +
           to_shortest(p.min_positive) + "," + to_shortest(p.max_positive);
    const char* ieee = n == 8 ? "float8" : n == 16 ? "float16" : n == 32 ? "float32" : n == 64 ? "float64" : nullptr;
    if (ieee) {
      FormatDescriptor fd = *ieee_format(ieee);
      csv += "," + to_shortest(BigReal(ieee_normal_min(fd))) + "," + to_shortest(BigReal(ieee_subnormal_min(fd))) +
             "," + to_shortest(BigReal(ieee_max(fd)));
    } else {
      csv += ",,,";
    }
    csv += "\n";
  }
  emit(out, "dynamic_range.csv", csv);
}

void report_constants(const fs::path& out) {
  std::vector<NamedConstant> si, large;
  for (const auto& c : named_constants()) (c.symbol == "Lambda" || c.symbol == "M" ? large : si).push_back(c);
  emit(out, "constants.csv", constants_csv(si));
  emit(out, "constants_large.csv", constants_csv(large));
}

struct ClosureArgs {
  std::vector<std::string> ops;
  std::vector<std::string> formats;
  bool full = false;
  std::size_t stride = 0;
  unsigned jobs = 1;
  bool matrix = true;
};

void report_closure(const fs::path& out, const ClosureArgs& a) {
  std::vector<std::string> ops = a.ops;
  if (ops.empty()) ops = {"add", "sub", "mul", "div", "inv", "sqrt", "square"};
  std::vector<std::string> formats = a.formats;
  if (formats.empty()) formats = {"takum8", "posit8", "takum16", "posit16", "bfloat16"};
  for (const auto& fname : formats) {
    SweepFormat fmt = parse_sweep_format(fname);
    for (const auto& oname : ops) {
      Op op = parse_op(oname);
      SweepOptions opts;
      opts.jobs = a.jobs;
      opts.stride = a.stride;
      if (opts.stride == 0) opts.stride = (fmt.width > 12 && !is_unary(op) && !a.full) ? 64 : 1;
      SweepResult r = sweep(op, fmt, opts);
      std::string stem = std::string(op_name(op)) + "-" + fmt.name;
      emit(out, stem + ".csv", curve_csv(r.curve));
      if (a.matrix) emit(out, stem + "-matrix.csv", matrix_csv(r));
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s %s: exact %zu/%zu, k/L %.4f%%, curve position %.4f%%%s\n", op_name(op),
                    fmt.name.c_str(), r.curve.exact_count, r.curve.eta.size(), 100 * r.curve.exactness_ratio(),
                    100 * r.curve.exact_curve_fraction(), opts.stride > 1 ? " (strided)" : "");
      std::cout << buf;
    }
  }
}

int run(int argc, char** argv) {
  CLI::App app{"takum-eval: takum codec and evaluation datasets"};
  app.require_subcommand(1);

  // codec
  auto* codec = app.add_subcommand("codec", "bit-level codec operations");
  codec->require_subcommand(1);
  std::string fmt_name, arg1, arg2;
  unsigned width2 = 0;

  auto add_fmt = [&](CLI::App* sc) { sc->add_option("format", fmt_name, "takum<n>, lintakum<n>, posit<n> or an IEEE name")->required(); };
  auto* c_decode = codec->add_subcommand("decode", "decode a payload");
  add_fmt(c_decode);
  c_decode->add_option("payload", arg1, "0x..., 0b... or decimal")->required();
  auto* c_encode = codec->add_subcommand("encode", "lossless encoding of a value");
  add_fmt(c_encode);
  c_encode->add_option("value", arg1, "decimal, a/b, or l=<log value>")->required();
  auto* c_round = codec->add_subcommand("round", "round a value to the format");
  add_fmt(c_round);
  c_round->add_option("value", arg1)->required();
  auto* c_negate = codec->add_subcommand("negate", "bitwise negation");
  add_fmt(c_negate);
  c_negate->add_option("payload", arg1)->required();
  auto* c_invert = codec->add_subcommand("invert", "bitwise inversion (takum only)");
  add_fmt(c_invert);
  c_invert->add_option("payload", arg1)->required();
  auto* c_resize = codec->add_subcommand("resize", "convert to another width");
  add_fmt(c_resize);
  c_resize->add_option("payload", arg1)->required();
  c_resize->add_option("-n,--width", width2, "target width")->required();
  auto* c_compare = codec->add_subcommand("compare", "order two payloads");
  add_fmt(c_compare);
  c_compare->add_option("a", arg1)->required();
  c_compare->add_option("b", arg2)->required();

  // report
  auto* report = app.add_subcommand("report", "write evaluation datasets as CSV");
  report->require_subcommand(1);
  std::string out_dir = "out";
  report->add_option("--out", out_dir, "output directory")->capture_default_str();
  auto* r_waste = report->add_subcommand("waste", "IEEE and posit waste ratios");
  auto* r_cost = report->add_subcommand("cost", "exponent coding costs");
  auto* r_dyn = report->add_subcommand("dynrange", "dynamic ranges per width");
  auto* r_bounds = report->add_subcommand("bounds", "relative error bounds");
  int per_decade = 10;
  r_bounds->add_option("--per-decade", per_decade, "samples per decade")->check(CLI::Range(1, 1000));
  auto* r_const = report->add_subcommand("constants", "physical constant tables");
  auto* r_closure = report->add_subcommand("closure", "closure sweeps");
  ClosureArgs ca;
  r_closure->add_option("--op", ca.ops, "operation(s); all when omitted");
  r_closure->add_option("--format", ca.formats, "format(s); default set when omitted");
  r_closure->add_flag("--full", ca.full, "exhaustive 16-bit binary sweeps");
  r_closure->add_option("--stride", ca.stride, "operand stride (overrides the default)");
  r_closure->add_option("--jobs", ca.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  bool no_matrix = false;
  r_closure->add_flag("--no-matrix", no_matrix, "skip matrix CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    if (codec->parsed()) {
      Format f = parse_format(fmt_name);
      if (c_decode->parsed()) codec_decode(f, arg1);
      if (c_encode->parsed()) codec_encode(f, arg1);
      if (c_round->parsed()) print_payload(f, round_into(f, arg1), literal_digits(arg1));
      if (c_negate->parsed()) codec_negate(f, arg1);
      if (c_invert->parsed()) codec_invert(f, arg1);
      if (c_resize->parsed()) codec_resize(f, arg1, width2);
      if (c_compare->parsed()) codec_compare(f, arg1, arg2);
    } else if (report->parsed()) {
      fs::path out(out_dir);
      if (r_waste->parsed()) report_waste(out);
      if (r_cost->parsed()) report_cost(out);
      if (r_dyn->parsed()) report_dynrange(out);
      if (r_bounds->parsed()) emit(out, "error_bounds.csv", error_bounds_csv(-60, 60, per_decade));
      if (r_const->parsed()) report_constants(out);
      if (r_closure->parsed()) {
        ca.matrix = !no_matrix;
        report_closure(out, ca);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ParseError:
      case ErrorKind::UnknownFormat:
      case ErrorKind::UnknownConstant: return kExitParse;
      default: return kExitDomain;
    }
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
