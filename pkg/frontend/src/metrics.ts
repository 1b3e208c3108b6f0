// Display mapping for constraint metrics. Values pass through String() with
// no rounding: what the server sent is what the tester reads, and the
// interception tests compare these strings against the raw response body.

import type { ConstraintMetrics } from "./types.js";

export function metricsDisplay(metrics: ConstraintMetrics): Record<string, string> {
  return {
    support: String(metrics.support),
    precision: String(metrics.precision),
    coverage: String(metrics.coverage),
    in_region: String(metrics.in_region_trial_ids.length),
  };
}
