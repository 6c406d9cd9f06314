#include "bltt/properties.hpp"
#include "bltt/transforms.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

namespace {

const bltt::PropertyResult* find(const std::vector<bltt::PropertyResult>& rs,
                                 const std::string& name) {
  auto it = std::find_if(rs.begin(), rs.end(), [&](const auto& r) { return r.name == name; });
  return it == rs.end() ? nullptr : &*it;
}

bltt::PropertySuiteOptions small_options(std::uint64_t seed) {
  bltt::PropertySuiteOptions o;
  o.seed = seed;
  o.sizes = {{3, 1, 4}, {2, 2, 8}};
  return o;
}

} // namespace

TEST_CASE("random operators are admissible") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto op = bltt::random_admissible_operator({3, 2, 5}, rng);
    CHECK(bltt::check_admissible(op).c0 >= 0.5);
  }
}

TEST_CASE("default property suite passes") {
  const auto results = bltt::run_property_suite();
  for (const auto& r : results) {
    INFO(r.name << ": " << r.value << " vs " << r.threshold << " " << r.detail);
    CHECK(r.passed);
    CHECK(r.cases > 0);
  }
  CHECK(bltt::all_passed(results));
  for (const char* name : {"dft-unitarity", "structured-matvec-vs-dense", "q-alpha-orthogonal",
                           "sqrt-realness", "y-sqrt-symmetry", "spectrum-inclusion",
                           "e-alpha-bound", "preconditioner-vs-dense"})
    CHECK(find(results, name) != nullptr);
}

TEST_CASE("suite is deterministic for a fixed seed") {
  const auto a = bltt::run_property_suite(small_options(99));
  const auto b = bltt::run_property_suite(small_options(99));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].value == b[i].value);
    CHECK(a[i].passed == b[i].passed);
  }
}

TEST_CASE("a broken DFT normalization is caught") {
  bltt::detail::inject_fault(bltt::detail::Fault::DftNormalization);
  const auto results = bltt::run_property_suite(small_options(5));
  bltt::detail::inject_fault(bltt::detail::Fault::None);
  CHECK_FALSE(bltt::all_passed(results));
  const auto* unitarity = find(results, "dft-unitarity");
  REQUIRE(unitarity != nullptr);
  CHECK_FALSE(unitarity->passed);

  CHECK(bltt::all_passed(bltt::run_property_suite(small_options(5))));
}
