#pragma once
// Cross-module identity suites behind the `verify` CLI subcommand: each one
// checks an exact identity or bound against an independent oracle and
// reports PASS/FAIL.

#include <string>
#include <vector>

#include "alsv/sum_engine.hpp"

namespace alsv::verify {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// holder, cn1, rsum, mertens, rk, btransform, dirichlet, xval
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, const EngineOptions& opts = {});
std::vector<SuiteResult> run_all(const EngineOptions& opts = {});

}  // namespace alsv::verify
