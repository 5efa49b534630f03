// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <string_view>

namespace negofs {

// How cost time of update and merge code paths is measured.
//   kThreadCpu: CPU time of the calling thread.
//   kWorkUnits: a deterministic proxy, one nanosecond per stored entry touched.
enum class Timing { kThreadCpu, kWorkUnits };

inline constexpr double kSecondsPerWorkUnit = 1e-9;

double thread_cpu_seconds();

// Measures one code path. stop() takes the number of entries touched, which
// is only used in work-unit mode.
class CostMeter {
 public:
  explicit CostMeter(Timing timing);
  double stop(std::size_t work_units) const;

 private:
  Timing timing_;
  double start_ = 0.0;
};

Timing parse_timing(std::string_view name);
std::string_view timing_name(Timing timing);

}  // namespace negofs
