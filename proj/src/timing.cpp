// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/timing.hpp"

#include <ctime>
#include <stdexcept>
#include <string>

namespace negofs {

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

CostMeter::CostMeter(Timing timing) : timing_(timing) {
  if (timing_ == Timing::kThreadCpu) start_ = thread_cpu_seconds();
}

double CostMeter::stop(std::size_t work_units) const {
  if (timing_ == Timing::kWorkUnits)
    return kSecondsPerWorkUnit * static_cast<double>(work_units);
  return thread_cpu_seconds() - start_;
}

Timing parse_timing(std::string_view name) {
  if (name == "cpu") return Timing::kThreadCpu;
  if (name == "work") return Timing::kWorkUnits;
  throw std::invalid_argument("unknown timing mode '" + std::string(name) +
                              "' (expected cpu|work)");
}

std::string_view timing_name(Timing timing) {
  return timing == Timing::kThreadCpu ? "cpu" : "work";
}

}  // namespace negofs
