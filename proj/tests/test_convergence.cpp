// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/convergence.hpp"

#include <sstream>

#include "doctest.h"

using namespace vpshield;

namespace {

Ensemble torus_base(std::size_t n, std::uint64_t seed) {
  InitialData init;
  init.lambda = 0.01;
  init.q = 2.9;
  init.alpha_decay = 2.8;
  init.d0 = 0.2;
  init.N_cut = 32.0;
  init.R_dom = 20.0;
  return sample_initial(init, {{1.0, 1.0, n}},
                        ShieldGeometry::torus(2.0, 0.5, 4.0), seed);
}

}  // namespace

TEST_CASE("identical cutoffs give an identically zero gap") {
  const Ensemble base = torus_base(60, 7);
  FieldParams fp;
  fp.epsilon = 0.3;
  fp.workers = 1;
  StepPolicy sp;
  sp.dt_macro = 0.05;
  const PairRunReport rep =
      run_pair(base, 5.0, 5.0, ShieldGeometry::torus(2.0, 0.5, 4.0), fp, sp,
               0.2);
  for (double s : rep.sigma_series) CHECK(s == 0.0);
  CHECK(rep.sigma == 0.0);
}

TEST_CASE("cutoffs beyond every speed give an identically zero gap") {
  const Ensemble base = torus_base(60, 7);
  FieldParams fp;
  fp.epsilon = 0.3;
  fp.workers = 1;
  StepPolicy sp;
  sp.dt_macro = 0.05;
  const PairRunReport rep =
      run_pair(base, 100.0, 200.0, ShieldGeometry::torus(2.0, 0.5, 4.0), fp,
               sp, 0.2);
  CHECK(rep.sigma == 0.0);
}

TEST_CASE("the gap starts at zero and the series are aligned") {
  const Ensemble base = torus_base(80, 11);
  FieldParams fp;
  fp.epsilon = 0.3;
  fp.workers = 1;
  StepPolicy sp;
  sp.dt_macro = 0.05;
  const PairRunReport rep =
      run_pair(base, 4.0, 8.0, ShieldGeometry::torus(2.0, 0.5, 4.0), fp, sp,
               0.25);
  REQUIRE(!rep.times.empty());
  CHECK(rep.times.front() == 0.0);
  CHECK(rep.sigma_series.front() == 0.0);
  CHECK(rep.times.size() == rep.delta_series.size());
  CHECK(rep.times.size() == rep.eta_series.size());
  CHECK(rep.sigma == rep.sigma_series.back());
  CHECK(rep.sigma == doctest::Approx(rep.delta + rep.eta));
  // removing fast particles changes the field every slow particle feels
  CHECK(rep.sigma > 0.0);
}

TEST_CASE("cauchy table reports rung ratios") {
  std::vector<PairRunReport> ladder(3);
  ladder[0].N_small = 4;
  ladder[0].N_large = 8;
  ladder[0].sigma = 0.4;
  ladder[1].N_small = 8;
  ladder[1].N_large = 16;
  ladder[1].sigma = 0.1;
  ladder[2].N_small = 16;
  ladder[2].N_large = 32;
  ladder[2].sigma = 0.02;
  const auto rows = cauchy_report(ladder);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ratio == 1.0);
  CHECK(rows[1].ratio == doctest::Approx(0.25));
  CHECK(rows[2].ratio == doctest::Approx(0.2));
}

TEST_CASE("pair CSV has one row per rung and step") {
  const Ensemble base = torus_base(30, 3);
  FieldParams fp;
  fp.epsilon = 0.3;
  fp.workers = 1;
  StepPolicy sp;
  sp.dt_macro = 0.1;
  std::vector<PairRunReport> ladder;
  ladder.push_back(run_pair(base, 4.0, 8.0,
                            ShieldGeometry::torus(2.0, 0.5, 4.0), fp, sp,
                            0.2));
  std::ostringstream out;
  write_pair_csv(out, ladder);
  std::size_t rows = 0;
  std::string line;
  std::istringstream in(out.str());
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 1 + ladder[0].times.size());
}
