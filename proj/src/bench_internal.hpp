#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "precis/bench.hpp"

namespace precis::detail {

inline constexpr int kMaxRetries = 5;

std::uint64_t experiment_tag(Experiment e);

/// Runs body(attempt) until it returns without a runtime_error, at most
/// kMaxRetries + 1 times. On final failure `failed()` supplies the rows,
/// which are then stamped with the failure status.
std::vector<SweepRecord> with_retries(const std::function<std::vector<SweepRecord>(int)>& body,
                                      const std::function<std::vector<SweepRecord>()>& failed);

/// Calibrates `method` to the true edge count and scores the result. The
/// estimate itself is moved into `keep` when given.
SweepRecord score_method(Method method, const SymMatrix& s, const SupportSet& truth,
                         const SweepConfig& cfg, SweepRecord proto, EstimateResult* keep = nullptr);

CalibrationConfig calibration_for(const SweepConfig& cfg);

std::vector<SweepRecord> failed_rows(const SweepConfig& cfg, SweepRecord proto);

}  // namespace precis::detail
