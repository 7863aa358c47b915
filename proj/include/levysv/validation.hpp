#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levysv/drift.hpp"

namespace levysv {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Worst relative violation of flow(v0, s+t) == flow(flow(v0, s), t) over a
// (v0, s, t) grid, for an injectable flow implementation. Exposing the flow
// callable lets tests confirm the check catches a deliberately corrupted
// flow, so a silent weakening of the invariant cannot go unnoticed.
using FlowFn = std::function<double(double, double, const DriftSpec&)>;
double flow_semigroup_max_rel_error(const DriftSpec& drift,
                                    const FlowFn& flow_fn);

// Fast invariant suite (closed forms, quadrature, scaling-law algebra,
// small-sample statistics); aims for under a minute.
std::vector<CheckResult> validate_quick(unsigned workers);

// The release gate: every statistical and exactness criterion at full sample
// sizes. Several minutes of runtime.
std::vector<CheckResult> validate_full(unsigned workers);

}  // namespace levysv
