#include <doctest.h>

#include <algorithm>
#include <cstdlib>

#include "hopf_flow/error.hpp"
#include "hopf_flow/parallel.hpp"
#include "hopf_flow/verify.hpp"

using namespace hopf_flow;

TEST_CASE("--only selects a single report") {
  VerifyOptions opt;
  opt.only = {"unit-norm"};
  const VerifyOutcome out = run_verify(opt);
  REQUIRE(out.criteria.size() == 1);
  REQUIRE(out.criteria[0].reports.size() == 1);
  CHECK(out.criteria[0].reports[0].name == "unit-norm");
  CHECK(out.ok());
  CHECK(out.exit_code() == 0);
}

TEST_CASE("unknown check names are usage errors") {
  VerifyOptions opt;
  opt.only = {"no-such-check"};
  CHECK_THROWS_AS(run_verify(opt), UsageError);
  opt.only.clear();
  opt.tol_scale = 0.0;
  CHECK_THROWS_AS(run_verify(opt), UsageError);
}

TEST_CASE("every report name is unique") {
  auto names = check_names();
  std::sort(names.begin(), names.end());
  CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
  for (const auto& a : documented_allowlist()) CHECK(std::find(names.begin(), names.end(), a) != names.end());
}

TEST_CASE("tightened tolerances make checks fail") {
  VerifyOptions opt;
  opt.tol_scale = 1e-3;
  opt.only = {"unit-norm", "rate-arctan-fd", "spherical-trajectory-match"};
  const VerifyOutcome out = run_verify(opt);
  CHECK_FALSE(out.ok());
  CHECK(out.exit_code() == 1);
}

TEST_CASE("documented discrepancies are allowlisted, failures are not") {
  VerifyOptions opt;
  opt.only = {"pde-reference", "pde-reference-stability", "legendre-identity"};
  const VerifyOutcome out = run_verify(opt);
  REQUIRE(out.criteria.size() == 1);
  const auto& reps = out.criteria[0].reports;
  REQUIRE(reps.size() == 3);
  CHECK(reps[0].verdict == Verdict::DocumentedDiscrepancy);
  CHECK(is_allowlisted(reps[0].name));
  CHECK(reps[1].passed());
  CHECK(out.ok());
  const auto j = out.to_json();
  CHECK(j["reports"].size() == 3);
  CHECK(j["ok"] == true);
}

TEST_CASE("results do not depend on the thread count") {
  VerifyOptions opt;
  opt.only = {"relation-v", "h-pde-v"};
  setenv("HOPF_FLOW_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const auto a = run_verify(opt).to_json()["reports"];
  setenv("HOPF_FLOW_THREADS", "4", 1);
  const auto b = run_verify(opt).to_json()["reports"];
  unsetenv("HOPF_FLOW_THREADS");
  CHECK(a == b);
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(100,
                               [](std::size_t i) {
                                 if (i == 57) throw DomainError("boom");
                               }),
                  DomainError);
}
