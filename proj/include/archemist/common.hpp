#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace archemist {

using Tick = std::int64_t;  // 1 tick = 1 simulated second
using SampleId = std::uint32_t;
using JobId = std::uint32_t;
using AlertId = std::uint32_t;
using Revision = std::uint64_t;

/// A measured value; `unit` is free-form for readings (mg, g, mL, NTU, 1).
struct Reading {
  double value = 0.0;
  std::string unit;

  friend bool operator==(const Reading&, const Reading&) = default;
};

using Readings = std::map<std::string, Reading>;

}  // namespace archemist
