#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "takum/codec.hpp"
#include "takum/ieee.hpp"
#include "takum/oracle.hpp"

namespace takum {

enum class Op { Add, Sub, Mul, Div, Inv, Sqrt, Square };
Op parse_op(std::string_view name);
const char* op_name(Op op);
bool is_unary(Op op);
// mul, div, inv, sqrt, square: exact in the logarithmic domain
bool is_log_domain(Op op);

struct SweepFormat {
  enum class Family { Takum, Posit, Ieee };
  Family family = Family::Takum;
  unsigned width = 0;
  FormatDescriptor ieee;  // Family::Ieee only
  std::string name;
};
// takum<n>, posit<n> (n <= 20) or an IEEE name with width <= 20.
SweepFormat parse_sweep_format(std::string_view name);

struct Operand {
  std::uint64_t payload = 0;
  BigReal value;
};

// Common positive range used for a format width: [2^-24, 2^24] at 8 bits,
// [2^-56, 2^56] at 16 bits (posit's range at that width).
std::pair<mpq_class, mpq_class> default_range(unsigned width);
// Positive representable values of fmt inside [lo, hi], ascending.
std::vector<Operand> operands(const SweepFormat& fmt, const mpq_class& lo, const mpq_class& hi);

struct Rounded {
  std::uint64_t payload = 0;
  BigReal value;
  bool special = false;  // NaR / inf / NaN
};
Rounded round_into(const SweepFormat& fmt, const BigReal& x);

BigReal apply(Op op, const BigReal& x, const BigReal& y);

struct ErrorRecord {
  std::size_t x_index = 0;
  std::optional<std::size_t> y_index;
  double x = 0, y = 0;
  BigReal exact;
  BigReal rounded;
  double e_abs = 0;
  double e_rel = 0;
  bool exact_flag = false;
  // Second opinion from the oracle enclosure (log-domain ops).
  bool oracle_exact_flag = false;
};

// log2(max(1, -log2|e|)); +inf when e == 0
double eta(double e_rel);

struct PrecisionCurve {
  std::vector<double> eta;  // non-increasing, exact entries (+inf) first
  std::size_t exact_count = 0;
  // k / L
  double exactness_ratio() const;
  // fraction-axis position of the last exact entry, (k - 1) / (L - 1)
  double exact_curve_fraction() const;
  double fraction_at(std::size_t i) const;
};

PrecisionCurve make_curve(const std::vector<ErrorRecord>& records);

struct SweepOptions {
  std::optional<std::pair<mpq_class, mpq_class>> range;
  std::size_t stride = 1;  // keep every stride-th operand on each axis
  unsigned jobs = 1;
  bool check_oracle = true;
};

struct SweepResult {
  SweepFormat format;
  Op op = Op::Mul;
  std::vector<Operand> xs;
  std::vector<ErrorRecord> records;
  PrecisionCurve curve;
};

SweepResult sweep(Op op, const SweepFormat& fmt, const SweepOptions& opts = {});

// Exhaustive exact-result count over all operand tuples in the range,
// using integer representability tests (no records). Returns (k, L).
std::pair<std::uint64_t, std::uint64_t> count_exact(Op op, const SweepFormat& fmt,
                                                    std::optional<std::pair<mpq_class, mpq_class>> range = {});

std::string matrix_csv(const SweepResult& r);
std::string curve_csv(const PrecisionCurve& c);

// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace takum
