#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "obsdev/json_io.hpp"
#include "obsdev/random.hpp"
#include "obsdev/suite.hpp"
#include "test_util.hpp"

using namespace obsdev;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an obsdev::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("json_io") {

TEST_CASE("matrices, states, forms and maps round-trip exactly") {
  const HermitianMatrix a = gen_hermitian(4, 1u);
  CHECK(max_abs_diff(hermitian_from_json(to_json(a)).matrix(), a.matrix()) == 0.0);

  Rng rng(2);
  const StateVector phi = gen_state(5, rng);
  CHECK((state_from_json(to_json(phi)).amplitudes() - phi.amplitudes()).norm() == 0.0);

  PreserverForm form = PreserverForm::identity(3);
  form.sign = -1;
  form.antiunitary = true;
  form.u = gen_haar_unitary(3, 3u);
  form.f = gen_hermitian(3, 4u);
  form.x = gen_hermitian(3, 5u);
  const PreserverForm back = form_from_json(Json::parse(to_json(form).dump()));
  CHECK(back.sign == -1);
  CHECK(back.antiunitary);
  CHECK(max_abs_diff(back.u, form.u) == 0.0);
  CHECK(max_abs_diff(back.f.matrix(), form.f.matrix()) == 0.0);
  CHECK(max_abs_diff(back.x.matrix(), form.x.matrix()) == 0.0);

  const LinearMapOnHermitians map = to_map(form).linear;
  const LinearMapOnHermitians mback = map_from_json(Json::parse(to_json(map).dump()));
  CHECK(mback.dim == 3);
  CHECK(mback.matrix == map.matrix);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "obsdev_json_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "a.json";
  const HermitianMatrix a = gen_hermitian(3, 9u);
  write_json_file(path, to_json(a));
  CHECK(max_abs_diff(hermitian_from_json(read_json_file(path)).matrix(), a.matrix()) == 0.0);

  const auto garbage = dir / "garbage.json";
  {
    std::ofstream out(garbage);
    out << "{ not json";
  }
  CHECK(code_of([&] { read_json_file(garbage); }) == ErrorCode::InputError);
  CHECK(code_of([&] { read_json_file(dir / "missing.json"); }) == ErrorCode::InputError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed documents are input errors") {
  CHECK(code_of([] { matrix_from_json(Json{{"re", {{1.0}}}}); }) == ErrorCode::InputError);
  CHECK(code_of([] { matrix_from_json(Json{{"dim", 0}, {"re", Json::array()}, {"im", Json::array()}}); }) ==
        ErrorCode::InputError);
  CHECK(code_of([] {
          matrix_from_json(Json{{"dim", 2}, {"re", {{1.0, 0.0}}}, {"im", {{0.0, 0.0}, {0.0, 0.0}}}});
        }) == ErrorCode::InputError);
  CHECK(code_of([] {
          matrix_from_json(
              Json{{"dim", 1}, {"re", {{"x"}}}, {"im", {{0.0}}}});
        }) == ErrorCode::InputError);
  CHECK(code_of([] {
          hermitian_from_json(Json{{"dim", 2}, {"re", {{0.0, 1.0}, {0.0, 0.0}}},
                                   {"im", {{0.0, 0.0}, {0.0, 0.0}}}});
        }) == ErrorCode::DefectTooLarge);

  Json form = to_json(PreserverForm::identity(2));
  form["sign"] = 3;
  CHECK(code_of([&] { form_from_json(form); }) == ErrorCode::InputError);
  form["sign"] = 1;
  form["U"]["re"][0][0] = 2.0;
  CHECK(code_of([&] { form_from_json(form); }) == ErrorCode::InputError);

  Json map = to_json(LinearMapOnHermitians::identity(2));
  map["basis"] = "pauli";
  CHECK(code_of([&] { map_from_json(map); }) == ErrorCode::InputError);
}

TEST_CASE("suite configuration") {
  SuiteConfig c = SuiteConfig::defaults();
  c.dims = {2, 3, 5};
  c.samples_per_case = 17;
  c.suites = {"lemma1", "theorem3"};
  c.tolerances["lemma1.variational_gap"] = 1e-7;
  const SuiteConfig back = config_from_json(Json::parse(to_json(c).dump()));
  CHECK(back.dims == c.dims);
  CHECK(back.samples_per_case == 17);
  CHECK(back.seed == c.seed);
  CHECK(back.suites == c.suites);
  CHECK(back.tolerances == c.tolerances);

  CHECK(code_of([] { config_from_json(Json{{"dims", {0}}}); }) == ErrorCode::InputError);
  CHECK(code_of([] { config_from_json(Json{{"suites", {"nope"}}}); }) == ErrorCode::InputError);
  CHECK(code_of([] { config_from_json(Json{{"samples_per_case", "many"}}); }) ==
        ErrorCode::InputError);
}

}  // TEST_SUITE
