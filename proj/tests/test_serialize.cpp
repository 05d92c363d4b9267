#include "doctest.h"

#include <cstring>
#include <filesystem>

#include "kframes/serialize.hpp"

using namespace kframes;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NotHermitian;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("matrix schema") {
  CMat m(2, 3);
  m << Complex(1, 2), Complex(3, 4), Complex(5, 6), Complex(7, 8), Complex(9, 10), Complex(11, 12);
  const Json j = matrix_to_json(m);
  CHECK(j["rows"] == 2);
  CHECK(j["cols"] == 3);
  CHECK(j["re"] == Json({1, 3, 5, 7, 9, 11}));
  CHECK(j["im"] == Json({2, 4, 6, 8, 10, 12}));
  CHECK(matrix_from_json(j) == m);
}

TEST_CASE("round trip is bit exact") {
  Rng rng(1);
  const CMat m = rng.gaussian(4, 7) * 1e-3 + rng.gaussian(4, 7) * 1e5;
  const CMat back = matrix_from_json(Json::parse(matrix_to_json(m).dump()));
  CHECK(std::memcmp(m.data(), back.data(), sizeof(Complex) * 28) == 0);

  const KFrame f(m, "probe");
  const KFrame g = frame_from_json(Json::parse(frame_to_json(f).dump()));
  CHECK(g.label() == "probe");
  CHECK(std::memcmp(f.vectors().data(), g.vectors().data(), sizeof(Complex) * 28) == 0);
  const Json fj = frame_to_json(f);
  CHECK(fj["dim"] == 4);
  CHECK(fj["count"] == 7);
}

TEST_CASE("malformed input") {
  CHECK(code_of([] { matrix_from_json(Json::parse(R"({"rows":1,"cols":2,"re":[1],"im":[0,0]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { matrix_from_json(Json::parse(R"({"rows":1,"re":[1],"im":[0]})")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"re":["a"],"im":[0]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { matrix_from_json(Json::parse(R"({"rows":0,"cols":1,"re":[],"im":[]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] {
          frame_from_json(Json::parse(R"({"rows":1,"cols":1,"re":[1],"im":[0],"dim":2,"count":1})"));
        }) == ErrorCode::ParseError);
  CHECK(code_of([] { read_json_file("/nonexistent/file.json"); }) == ErrorCode::ParseError);
  const auto path = std::filesystem::temp_directory_path() / "kframes_bad.json";
  write_text_file(path, "{not json");
  CHECK(code_of([&] { read_json_file(path); }) == ErrorCode::ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("generator config") {
  GenConfig g;
  g.seed = 18446744073709551615ULL;
  g.dim = 5;
  g.subset_policy = SubsetPolicy::ExhaustiveSmall;
  const GenConfig back = gen_config_from_json(Json::parse(gen_config_to_json(g).dump()));
  CHECK(back.seed == g.seed);
  CHECK(back.dim == 5);
  CHECK(back.subset_policy == SubsetPolicy::ExhaustiveSmall);
  const GenConfig partial = gen_config_from_json(Json::parse(R"({"trials": 7})"));
  CHECK(partial.trials == 7);
  CHECK(partial.dim == GenConfig{}.dim);
  CHECK(code_of([] { gen_config_from_json(Json::parse(R"({"dim": "four"})")); }) == ErrorCode::ParseError);
}
