#include "heislab/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace heislab;

namespace {

std::string fixture_text(const FiniteAbelianGroup& e, int copies) {
  std::ostringstream os;
  write_representation(os, conjugated_copies(e, copies, 5));
  return os.str();
}

RepresentationFile parse(const std::string& text) {
  std::istringstream in(text);
  return read_representation(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const RepFormatError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(RepIo, RoundTrip) {
  const FiniteAbelianGroup e({4, 2});
  const HeisenbergAction rho = conjugated_copies(e, 2, 5);
  const RepresentationFile f = parse(fixture_text(e, 2));
  EXPECT_EQ(f.group, e);
  ASSERT_EQ(f.u.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT(norm_max(f.u[i] - rho.u_generators()[i]), 1e-15);
    EXPECT_LT(norm_max(f.v[i] - rho.v_generators()[i]), 1e-15);
  }
}

TEST(RepIo, CommentsAndBlankLines) {
  const std::string text = "# c\nheislab-rep 1\n\ngroup Z1\n# another\ndim 1\nV 0\n1 0\nU 0\n  1 0\n";
  const RepresentationFile f = parse(text);
  EXPECT_EQ(f.u[0](0, 0), cplx(1, 0));
}

TEST(RepIo, Malformed) {
  EXPECT_EQ(error_line("nope\n"), 1);
  EXPECT_EQ(error_line("heislab-rep 1\ngroup Z0\n"), 2);
  EXPECT_EQ(error_line("heislab-rep 1\ngroup Z2\ndim 0\n"), 3);
  EXPECT_EQ(error_line("heislab-rep 1\ngroup Z2\ndim 1\nU 0\n1 0\nU 0\n1 0\n"), 6);
  EXPECT_EQ(error_line("heislab-rep 1\ngroup Z2\ndim 1\nU 3\n"), 4);
  EXPECT_EQ(error_line("heislab-rep 1\ngroup Z2\ndim 2\nU 0\n1 0 0\n"), 5);
  EXPECT_EQ(error_line("heislab-rep 1\ngroup Z2\ndim 1\nU 0\n1 0 0\n"), 5);
  EXPECT_EQ(error_line("heislab-rep 1\ngroup Z2\ndim 1\nU 0\nnan 0\n"), 5);
  EXPECT_GT(error_line("heislab-rep 1\ngroup Z2\ndim 1\nU 0\n1 0\n"), 0);  // missing V 0
  EXPECT_THROW(read_representation_file("/nonexistent/file"), RepFormatError);
}

TEST(Report, RecordsAndJson) {
  VerificationReport rep("demo");
  rep.add_max("a", 1e-12, 1e-10);
  rep.add_min("b", 5.0, 4.0);
  rep.add_exact("c", 3, 3);
  rep.add_flag("d", true);
  EXPECT_TRUE(rep.pass());
  rep.add_max("nan", std::nan(""), 1.0);
  EXPECT_FALSE(rep.pass());
  const auto j = rep.to_json();
  EXPECT_EQ(j["schema"], "heislab-report/1");
  EXPECT_EQ(j["records"].size(), 5u);
  EXPECT_TRUE(j["records"][4]["metric_value"].is_null());
  EXPECT_FALSE(j["overall_pass"].get<bool>());
}

TEST(Suites, VerifyFiniteSmall) {
  const FiniteAbelianGroup e({4});
  const VerificationReport rep = verify_finite(parse_subgroup(e, "[2]"), SuiteOptions{});
  for (const auto& r : rep.records()) EXPECT_TRUE(r.pass) << r.check_id << " " << r.metric_value;
}

TEST(Suites, VerifyFiniteTrivialGroup) {
  const VerificationReport rep = verify_finite(Subgroup::trivial(FiniteAbelianGroup({1})), SuiteOptions{});
  EXPECT_TRUE(rep.pass());
}

TEST(Suites, DualitySmall) { EXPECT_TRUE(verify_duality(8, SuiteOptions{}).pass()); }

TEST(Suites, DecomposeFixture) {
  const FiniteAbelianGroup e({3});
  const VerificationReport rep = verify_decompose(parse(fixture_text(e, 2)), Subgroup::trivial(e), SuiteOptions{});
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.to_json()["data"]["multiplicity"], 2);
}

TEST(Suites, DecomposeRejectsViolation) {
  const std::string text = "heislab-rep 1\ngroup Z2\ndim 2\nU 0\n0 0 1 0\n1 0 0 0\nV 0\n0 0 1 0\n1 0 0 0\n";
  EXPECT_THROW(verify_decompose(parse(text), Subgroup::trivial(FiniteAbelianGroup({2})), SuiteOptions{}),
               HypothesisViolation);
  const std::string odd = "heislab-rep 1\ngroup Z2\ndim 1\nU 0\n1 0\nV 0\n1 0\n";
  EXPECT_THROW(verify_decompose(parse(odd), Subgroup::trivial(FiniteAbelianGroup({2})), SuiteOptions{}),
               HypothesisViolation);
}

TEST(Suites, RealRejectsGridOutOfRange) {
  EXPECT_THROW(verify_real(GridSpec{1, 4, 0.5}, SuiteOptions{}), StructuralError);
}
