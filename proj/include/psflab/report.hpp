#pragma once
// One verification run -> one machine-readable line. Field order is part of
// the interface; numbers render deterministically (shortest round-trip).

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "psflab/engine.hpp"

namespace psflab::report {

struct RunReport {
  std::string identity;
  std::vector<std::pair<std::string, double>> params;
  std::complex<double> lhs{0.0, 0.0};
  std::complex<double> rhs{0.0, 0.0};
  double abs_discrepancy = 0.0;
  double lhs_tail = 0.0;
  double rhs_tail = 0.0;
  int shells_lhs = 0;
  int shells_rhs = 0;
  std::string chosen_side;
  bool passed = false;
  double wall_time_ms = 0.0;  // 0 unless timing was requested
  std::string engine_version;

  static RunReport from(std::string identity,
                        std::vector<std::pair<std::string, double>> params,
                        const engine::DualEvaluation& ev);

  // {"identity":..., "params":{...}, "lhs":[re,im], "rhs":[re,im],
  //  "abs_discrepancy":..., "lhs_tail":..., "rhs_tail":...,
  //  "shells_used":[lhs,rhs], "chosen_side":..., "passed":...,
  //  "wall_time_ms":..., "engine_version":...}
  std::string json_line() const;

  std::string csv_line() const;
  static std::string csv_header();
};

}  // namespace psflab::report
