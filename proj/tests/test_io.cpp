#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <string>

#include "cheb/instance_io.hpp"
#include "cheb/model.hpp"
#include "cheb/presets.hpp"

using cheb::ProblemInstance;

namespace {

const char* minimal = R"({
  "dim": 2,
  "m": 1,
  "lambda": [[1.0, 0.0]],
  "projector": [[0.0, 0.0], [0.0, 1.0]]
})";

}  // namespace

TEST_CASE("defaults fill in everything optional") {
  const ProblemInstance inst = cheb::parse_instance(minimal);
  CHECK(inst.n == 2);
  CHECK(inst.m == 1);
  CHECK(inst.epsilon == 1.0);
  CHECK(inst.eta == 1.0);
  CHECK(inst.s_is_identity());
  CHECK(inst.q_is_identity());
  CHECK(inst.y.size() == 1);
  CHECK(inst.y[0] == 0.0);
  CHECK_FALSE(inst.class_hint.has_value());
  CHECK(cheb::validate(inst).specific());
}

TEST_CASE("unknown fields are rejected, not ignored") {
  const std::string text = std::string(minimal).insert(1, "\"epsilonn\": 2,");
  CHECK_THROWS_WITH_AS(cheb::parse_instance(text),
                       doctest::Contains("unknown field"), cheb::IoError);
}

TEST_CASE("the model map must be specified exactly once") {
  SUBCASE("not at all") {
    CHECK_THROWS_AS(
        cheb::parse_instance(R"({"dim": 2, "m": 1, "lambda": [[1.0, 0.0]]})"),
        cheb::IoError);
  }
  SUBCASE("twice over") {
    const std::string text = std::string(minimal).insert(
        1, "\"subspace_basis\": [[0.0, 1.0]],");
    CHECK_THROWS_AS(cheb::parse_instance(text), cheb::IoError);
  }
}

TEST_CASE("malformed input names the problem") {
  CHECK_THROWS_AS(cheb::parse_instance("{nope}"), cheb::IoError);
  CHECK_THROWS_AS(cheb::parse_instance("[1, 2, 3]"), cheb::IoError);
  CHECK_THROWS_AS(
      cheb::parse_instance(
          R"({"dim": 2, "m": 1, "lambda": [[1, 0]], "projector": [[0, 0]]})"),
      cheb::IoError);
  CHECK_THROWS_AS(
      cheb::parse_instance(
          R"({"dim": "two", "m": 1, "lambda": [[1, 0]], "R": [[0, 0], [0, 1]]})"),
      cheb::IoError);
  CHECK_THROWS_AS(
      cheb::parse_instance(std::string(minimal).insert(1, "\"class_hint\": \"odd\",")),
      cheb::IoError);
}

TEST_CASE("two spellings of the same model map hash identically") {
  // The canonical form always writes the projector matrix itself, so giving
  // the spanning vector instead must not change the digest.
  const std::string via_projector = R"({
    "dim": 2, "m": 1, "lambda": [[1.0, 0.0]],
    "projector": [[0.5, -0.5], [-0.5, 0.5]]
  })";
  const std::string via_basis = R"({
    "dim": 2, "m": 1, "lambda": [[1.0, 0.0]],
    "subspace_basis": [[1.0, 1.0]]
  })";
  const auto a = cheb::parse_instance(via_projector);
  const auto b = cheb::parse_instance(via_basis);
  CHECK(cheb::instance_digest(a) == cheb::instance_digest(b));
  CHECK(cheb::instance_digest(a).rfind("fnv1a64:", 0) == 0);
  CHECK(cheb::instance_digest(a).size() == 8 + 16);

  // Different data, different digest.
  auto c = a;
  c.epsilon = 2.0;
  CHECK(cheb::instance_digest(c) != cheb::instance_digest(a));
}

TEST_CASE("serialization round-trips bit for bit") {
  for (const ProblemInstance& inst :
       {cheb::rec2(), cheb::ball1(), cheb::random_specific(5, 3, 77),
        cheb::random_general(4, 2, 78)}) {
    const std::string text = cheb::instance_to_json(inst);
    const ProblemInstance back = cheb::parse_instance(text);
    CHECK(back.n == inst.n);
    CHECK(back.m == inst.m);
    CHECK((back.R - inst.R).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.Lambda - inst.Lambda).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.S - inst.S).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.Q - inst.Q).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.y - inst.y).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.epsilon == inst.epsilon);
    CHECK(back.eta == inst.eta);
    // And therefore the digest is reproduced too.
    CHECK(cheb::instance_digest(back) == cheb::instance_digest(inst));
  }
}

TEST_CASE("file round-trip and error paths") {
  const std::string path = "io_roundtrip_tmp.json";
  const ProblemInstance inst = cheb::random_specific(4, 2, 9);
  cheb::save_instance(inst, path);
  const ProblemInstance back = cheb::load_instance(path);
  CHECK(cheb::instance_digest(back) == cheb::instance_digest(inst));
  std::remove(path.c_str());

  CHECK_THROWS_AS(cheb::load_instance("definitely/not/here.json"), cheb::IoError);
}
