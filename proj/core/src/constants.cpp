#include "takum/constants.hpp"

#include "takum/codec.hpp"
#include "takum/decimal.hpp"
#include "takum/error.hpp"
#include "takum/ieee.hpp"
#include "takum/posit.hpp"

namespace takum {

namespace {

std::optional<unsigned> width_suffix(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string rest(name.substr(prefix.size()));
  if (rest.empty() || rest.size() > 2 || rest.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  return static_cast<unsigned>(std::stoul(rest));
}

std::string render(const BigReal& v, int digits) {
  if (v.is_zero()) return "0";
  return to_decimal_two_step(v, digits);
}

}  // namespace

const std::vector<NamedConstant>& named_constants() {
  static const std::vector<NamedConstant> list = {
      {"Planck constant", "h", "6.62607015e-34", 9},
      {"Boltzmann constant", "k", "1.380649e-23", 7},
      {"elementary charge", "e", "1.602176634e-19", 10},
      {"speed of light", "c", "2.99792458e8", 9},
      {"caesium standard", "dnu", "9.192631770e9", 10},
      {"Avogadro constant", "NA", "6.02214076e23", 9},
      {"cosmological constant", "Lambda", "1.1056e-52", 5},
      {"mass of the universe", "M", "1.5e53", 2},
  };
  return list;
}

const NamedConstant& named_constant(std::string_view symbol) {
  for (const auto& c : named_constants())
    if (c.symbol == symbol) return c;
  throw Error(ErrorKind::UnknownConstant, "unknown constant: " + std::string(symbol));
}

const std::vector<std::string>& constant_table_formats() {
  static const std::vector<std::string> list = {"float8",  "posit8",  "takum8",  "float16", "bfloat16",
                                                "posit16", "takum16", "TF32",    "posit19", "takum19",
                                                "float32", "posit32", "takum32"};
  return list;
}

std::string represent(const NamedConstant& c, std::string_view format) {
  BigReal x = c.exact();
  if (auto n = width_suffix(format, "takum")) {
    TakumValue v = decode_value(round(x, *n));
    return render(v.to_real(), c.digits);
  }
  if (auto n = width_suffix(format, "posit")) {
    return render(BigReal(posit_value(posit_round(x, *n))), c.digits);
  }
  if (auto fd = ieee_format(format)) {
    IeeeValue v = ieee_decode(*fd, ieee_round(*fd, x));
    switch (v.kind) {
      case IeeeValue::Kind::Zero: return "0";
      case IeeeValue::Kind::Infinite: return v.sign ? "-∞" : "∞";
      case IeeeValue::Kind::NaN: return "NaN";
      case IeeeValue::Kind::Finite: return render(BigReal(v.value), c.digits);
    }
  }
  throw Error(ErrorKind::UnknownFormat, "unknown format: " + std::string(format));
}

std::string constants_csv(const std::vector<NamedConstant>& cs) {
  std::string out = "format";
  for (const auto& c : cs) out += "," + c.symbol;
  out += '\n';
  for (const auto& f : constant_table_formats()) {
    out += f;
    for (const auto& c : cs) out += "," + represent(c, f);
    out += '\n';
  }
  return out;
}

}  // namespace takum
