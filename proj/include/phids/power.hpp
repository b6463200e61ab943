#pragma once

#include <algorithm>
#include <optional>

#include "phids/errors.hpp"

namespace phids {

/// Battery and consumption model for one node.
///   bpr    — battery power remaining, joules
///   tec    — consumption rate before the node takes the monitor role, watts
///   tec_nm — consumption rate with monitoring processes running, watts
struct BatteryState {
    double bpr = 0.0;
    double tec = 0.0;
    std::optional<double> tec_nm;

    BatteryState() = default;
    BatteryState(double bpr_joules, double tec_watts,
                 std::optional<double> tec_nm_watts = std::nullopt)
        : bpr(bpr_joules), tec(tec_watts), tec_nm(tec_nm_watts) {
        if (bpr < 0) throw phids_error("bpr must be >= 0");
        if (tec <= 0) throw phids_error("tec must be > 0");
        if (tec_nm && *tec_nm < tec) throw phids_error("tec_nm must be >= tec");
    }
};

/// Seconds the node can sustain the monitor role: bpr / tec_nm.
inline double plane(const BatteryState& b) {
    if (!b.tec_nm) throw missing_monitoring_rate();
    return b.bpr / *b.tec_nm;
}

/// Fallback estimate when the monitoring rate is unmeasured: bpr / tec.
inline double plane_prime(const BatteryState& b) {
    return b.bpr / b.tec;
}

/// plane() when the monitoring rate is known, plane_prime() otherwise.
inline double effective_plane(const BatteryState& b) {
    return b.tec_nm ? plane(b) : plane_prime(b);
}

/// Battery after running at `rate` watts for `dt` seconds. Floors at zero.
inline BatteryState drain(const BatteryState& b, double rate, double dt) {
    if (rate < 0) throw phids_error("drain rate must be >= 0");
    if (dt < 0) throw phids_error("drain duration must be >= 0");
    BatteryState out = b;
    out.bpr = std::max(0.0, b.bpr - rate * dt);
    return out;
}

}  // namespace phids
