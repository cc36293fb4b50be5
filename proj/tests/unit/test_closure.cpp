#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "takum/closure.hpp"
#include "takum/error.hpp"

using namespace takum;

namespace {

mpq_class p2(long k) {
  mpz_class one(1);
  return k >= 0 ? mpq_class(one << k) : mpq_class(1, one << -k);
}

const Op kOps[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Inv, Op::Sqrt, Op::Square};

}  // namespace

TEST(Closure, Eta) {
  EXPECT_TRUE(std::isinf(eta(0.0)));
  EXPECT_EQ(eta(0.5), 0.0);
  EXPECT_EQ(eta(-0.75), 0.0);
  EXPECT_EQ(eta(2.0), 0.0);
  EXPECT_DOUBLE_EQ(eta(1.0 / 16), 2.0);
  EXPECT_DOUBLE_EQ(eta(-std::ldexp(1.0, -256)), 8.0);
}

TEST(Closure, ParseNames) {
  EXPECT_EQ(parse_op("sqrt"), Op::Sqrt);
  EXPECT_STREQ(op_name(Op::Square), "square");
  EXPECT_THROW(parse_op("pow"), Error);
  EXPECT_TRUE(is_unary(Op::Inv));
  EXPECT_FALSE(is_unary(Op::Div));
  EXPECT_TRUE(is_log_domain(Op::Square));
  EXPECT_FALSE(is_log_domain(Op::Sub));
  EXPECT_EQ(parse_sweep_format("takum8").family, SweepFormat::Family::Takum);
  EXPECT_EQ(parse_sweep_format("bfloat16").width, 16u);
  EXPECT_THROW(parse_sweep_format("float32"), Error);
  EXPECT_THROW(parse_sweep_format("takum33"), Error);
  EXPECT_THROW(parse_sweep_format("decimal8"), Error);
}

TEST(Closure, RangesAndOperands) {
  auto r8 = default_range(8);
  EXPECT_EQ(r8.first, p2(-24));
  EXPECT_EQ(r8.second, p2(24));
  auto r16 = default_range(16);
  EXPECT_EQ(r16.first, p2(-56));
  EXPECT_EQ(r16.second, p2(56));
  EXPECT_EQ(operands(parse_sweep_format("takum8"), r8.first, r8.second).size(), 81u);
  EXPECT_EQ(operands(parse_sweep_format("posit8"), r8.first, r8.second).size(), 127u);
  EXPECT_EQ(operands(parse_sweep_format("takum16"), r16.first, r16.second).size(), 25513u);
  EXPECT_EQ(operands(parse_sweep_format("posit16"), r16.first, r16.second).size(), 32767u);
  EXPECT_EQ(operands(parse_sweep_format("bfloat16"), r16.first, r16.second).size(), 14337u);
  auto xs = operands(parse_sweep_format("posit8"), r8.first, r8.second);
  for (std::size_t i = 1; i < xs.size(); ++i) ASSERT_LT(compare(xs[i - 1].value, xs[i].value), 0);
  EXPECT_EQ(*xs.front().value.rational(), p2(-24));
  EXPECT_EQ(*xs.back().value.rational(), p2(24));
}

TEST(Closure, InverseOfTakumIsAlwaysExact) {
  for (const char* f : {"takum8", "takum16"}) {
    SweepResult r = sweep(Op::Inv, parse_sweep_format(f));
    EXPECT_EQ(r.curve.exact_count, r.records.size()) << f;
    EXPECT_DOUBLE_EQ(r.curve.exactness_ratio(), 1.0);
    for (double e : r.curve.eta) ASSERT_TRUE(std::isinf(e));
  }
}

TEST(Closure, SweepAgreesWithCountExact8) {
  for (const char* f : {"takum8", "posit8"}) {
    SweepFormat fmt = parse_sweep_format(f);
    for (Op op : kOps) {
      SweepOptions o;
      o.jobs = 4;
      SweepResult r = sweep(op, fmt, o);
      auto [k, L] = count_exact(op, fmt);
      EXPECT_EQ(r.curve.exact_count, k) << f << " " << op_name(op);
      EXPECT_EQ(r.records.size(), L) << f << " " << op_name(op);
      if (is_log_domain(op)) {
        for (const auto& rec : r.records) ASSERT_EQ(rec.exact_flag, rec.oracle_exact_flag) << f << " " << op_name(op);
      }
    }
  }
}

TEST(Closure, SweepAgreesWithCountExactUnary16) {
  for (const char* f : {"takum16", "posit16", "bfloat16"}) {
    SweepFormat fmt = parse_sweep_format(f);
    for (Op op : {Op::Inv, Op::Sqrt, Op::Square}) {
      SweepOptions o;
      o.jobs = 8;
      SweepResult r = sweep(op, fmt, o);
      auto [k, L] = count_exact(op, fmt);
      EXPECT_EQ(r.curve.exact_count, k) << f << " " << op_name(op);
      EXPECT_EQ(r.records.size(), L) << f << " " << op_name(op);
    }
  }
}

TEST(Closure, KnownExactCounts8) {
  SweepFormat t8 = parse_sweep_format("takum8"), p8 = parse_sweep_format("posit8");
  EXPECT_EQ(count_exact(Op::Add, t8).first, 0u);
  EXPECT_EQ(count_exact(Op::Sub, t8).first, 81u);  // only x - x
  EXPECT_EQ(count_exact(Op::Inv, t8).first, 81u);
  EXPECT_EQ(count_exact(Op::Inv, p8).first, 39u);
  EXPECT_EQ(count_exact(Op::Mul, t8), count_exact(Op::Div, t8));
}

TEST(Closure, CurveShape) {
  SweepResult r = sweep(Op::Mul, parse_sweep_format("posit8"));
  const auto& c = r.curve;
  ASSERT_EQ(c.eta.size(), r.records.size());
  for (std::size_t i = 1; i < c.eta.size(); ++i) ASSERT_GE(c.eta[i - 1], c.eta[i]);
  for (double e : c.eta) ASSERT_GE(e, 0.0);
  for (std::size_t i = 0; i < c.exact_count; ++i) ASSERT_TRUE(std::isinf(c.eta[i]));
  EXPECT_DOUBLE_EQ(c.fraction_at(0), 0.0);
  EXPECT_DOUBLE_EQ(c.fraction_at(c.eta.size() - 1), 1.0);
  double L = static_cast<double>(c.eta.size()), k = static_cast<double>(c.exact_count);
  EXPECT_DOUBLE_EQ(c.exactness_ratio(), k / L);
  EXPECT_DOUBLE_EQ(c.exact_curve_fraction(), (k - 1) / (L - 1));
  for (const auto& rec : r.records) {
    if (rec.exact_flag) {
      ASSERT_EQ(rec.e_rel, 0.0);
    } else {
      ASSERT_NE(rec.e_rel, 0.0);
    }
  }
}

TEST(Closure, SubtractionDiagonalIsExact) {
  SweepResult r = sweep(Op::Sub, parse_sweep_format("takum8"));
  for (const auto& rec : r.records) {
    if (rec.y_index && *rec.y_index == rec.x_index) {
      ASSERT_TRUE(rec.exact_flag);
      ASSERT_EQ(rec.e_rel, 0.0);
    }
  }
}

TEST(Closure, OutputIndependentOfThreadCount) {
  SweepFormat fmt = parse_sweep_format("takum8");
  SweepOptions one, many;
  many.jobs = 7;
  SweepResult a = sweep(Op::Add, fmt, one), b = sweep(Op::Add, fmt, many);
  EXPECT_EQ(matrix_csv(a), matrix_csv(b));
  EXPECT_EQ(curve_csv(a.curve), curve_csv(b.curve));
}

TEST(Closure, StrideAndCustomRange) {
  SweepFormat fmt = parse_sweep_format("posit8");
  SweepOptions o;
  o.stride = 4;
  SweepResult r = sweep(Op::Mul, fmt, o);
  EXPECT_EQ(r.xs.size(), 32u);
  EXPECT_EQ(r.records.size(), 32u * 32u);
  SweepOptions q;
  q.range = std::make_pair(mpq_class(1), mpq_class(2));
  SweepResult s = sweep(Op::Sqrt, fmt, q);
  for (const auto& x : s.xs) {
    ASSERT_GE(compare(x.value, mpq_class(1)), 0);
    ASSERT_LE(compare(x.value, mpq_class(2)), 0);
  }
}

TEST(Closure, CsvLayout) {
  SweepResult r = sweep(Op::Inv, parse_sweep_format("posit8"));
  std::string m = matrix_csv(r);
  EXPECT_EQ(m.substr(0, m.find('\n')), "x,y,e_rel");
  std::istringstream is(m);
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  EXPECT_NE(line.find(",,"), std::string::npos);  // unary: empty y
  std::string c = curve_csv(r.curve);
  EXPECT_EQ(c.substr(0, c.find('\n')), "fraction,eta");
  EXPECT_NE(c.find("inf"), std::string::npos);
  EXPECT_EQ(static_cast<std::size_t>(std::count(c.begin(), c.end(), '\n')), r.records.size() + 1);
}

TEST(Closure, AtomicWrite) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("takum_atomic_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string path = (dir / "out.csv").string();
  write_file_atomic(path, "a,b\n1,2\n");
  write_file_atomic(path, "a,b\n3,4\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "a,b\n3,4\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  fs::remove_all(dir);
  EXPECT_THROW(write_file_atomic((dir / "missing" / "x.csv").string(), "x"), std::exception);
}
