#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sqss/io/attack_spec.hpp"
#include "sqss/io/config.hpp"

using namespace sqss;
using namespace sqss::io;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("sqss_io_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Parse, Values) {
  EXPECT_EQ(parse_value<int>(" 42 "), 42);
  EXPECT_DOUBLE_EQ(parse_value<double>("0.25"), 0.25);
  EXPECT_THROW(parse_value<int>("4x"), UsageError);
  EXPECT_THROW(parse_value<int>(""), UsageError);
  EXPECT_THROW(parse_value<unsigned>("-1"), UsageError);
}

TEST(Parse, Lists) {
  EXPECT_EQ(parse_list<int>("1, 2,3"), (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(parse_list<int>("  ").empty());
  EXPECT_THROW(parse_list<int>("1,,2"), UsageError);
}

TEST(Parse, Ranges) {
  EXPECT_EQ(parse_range("3"), (std::vector<std::uint64_t>{3}));
  EXPECT_EQ(parse_range("1..4"), (std::vector<std::uint64_t>{1, 2, 3, 4}));
  EXPECT_EQ(parse_range("2,7"), (std::vector<std::uint64_t>{2, 7}));
  EXPECT_THROW(parse_range("5..1"), UsageError);
  EXPECT_THROW(parse_range("0..99999999"), UsageError);
}

TEST(Matrix, ParsesHadamardWithComments) {
  const double h = 1 / std::sqrt(2.0);
  const std::string text = "# hadamard\n" + std::to_string(h) + ",0 " + std::to_string(h) +
                           ",0\n" + std::to_string(h) + ",0 " + std::to_string(-h) + ",0\n";
  const Matrix m = parse_matrix(text);
  ASSERT_EQ(m.dim(), 2U);
  EXPECT_NEAR(m(1, 1).real(), -h, 1e-6);
  EXPECT_TRUE(m.is_unitary(1e-5));
}

TEST(Matrix, ImaginaryParts) {
  const Matrix m = parse_matrix("0,0 0,-1\n0,1 0,0");
  EXPECT_EQ(m(0, 1), Amplitude(0, -1));
  EXPECT_EQ(m(1, 0), Amplitude(0, 1));
}

TEST(Matrix, Rejects) {
  EXPECT_THROW(parse_matrix("1,0 0,0 0,0"), UsageError);
  EXPECT_THROW(parse_matrix(""), UsageError);
  EXPECT_THROW(parse_matrix("1 0"), UsageError);
  EXPECT_THROW(load_matrix_file("/nonexistent/ue.txt"), IoError);
}

TEST(AttackSpec, BuildsEveryNamedAttack) {
  for (auto name : kAttackNames) {
    AttackSpec spec;
    spec.name = std::string(name);
    if (name == "collusion") spec.colluders = "1";
    const auto model = build_attack(spec, 2);
    EXPECT_EQ(attack_name(model), name);
  }
}

TEST(AttackSpec, CollusionIndicesAreOneBased) {
  AttackSpec spec;
  spec.name = "collusion";
  spec.colluders = "1,3";
  const auto model = build_attack(spec, 3);
  EXPECT_EQ(std::get<Collusion>(model).dishonest, (std::vector<std::size_t>{0, 2}));
  spec.colluders = "0";
  EXPECT_THROW(build_attack(spec, 3), UsageError);
  spec.colluders = "";
  EXPECT_THROW(build_attack(spec, 3), UsageError);
  spec.colluders = "1,2,3";
  EXPECT_THROW(build_attack(spec, 3), UsageError);
  spec.colluders = "4";
  EXPECT_THROW(build_attack(spec, 3), UsageError);
}

TEST(AttackSpec, Errors) {
  AttackSpec spec;
  spec.name = "photon-number-splitting";
  EXPECT_THROW(build_attack(spec, 2), UsageError);
  spec.name = "em";
  spec.mu = "1,1,1";
  EXPECT_THROW(build_attack(spec, 2), UsageError);
  spec.mu = "1,1,1,1";
  spec.probe_map = "sideways";
  EXPECT_THROW(build_attack(spec, 2), UsageError);
  spec.probe_map = "constant";
  spec.alpha = 1.5;
  EXPECT_THROW(build_attack(spec, 2), ValidationError);
  spec.alpha = 1.0;
  spec.ue_path = "/tmp/only-one.txt";
  EXPECT_THROW(build_attack(spec, 2), UsageError);
}

TEST(AttackSpec, MatrixFiles) {
  AttackSpec spec;
  spec.name = "em";
  // Identity on target x 2-level probe.
  const std::string id4 = "1,0 0,0 0,0 0,0\n0,0 1,0 0,0 0,0\n0,0 0,0 1,0 0,0\n0,0 0,0 0,0 1,0\n";
  spec.ue_path = temp_file("ue.txt", id4);
  spec.uf_path = temp_file("uf.txt", id4);
  EXPECT_EQ(attack_name(build_attack(spec, 2)), "em");
  spec.uf_path = temp_file("bad.txt", "1,0 1,0 0,0 0,0\n0,0 1,0 0,0 0,0\n0,0 0,0 1,0 0,0\n0,0 0,0 0,0 1,0\n");
  EXPECT_THROW(build_attack(spec, 2), ValidationError);
  spec.uf_path = "/nonexistent/uf.txt";
  EXPECT_THROW(build_attack(spec, 2), IoError);
}
