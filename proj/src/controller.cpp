#include "mgsim/controller.hpp"

#include <algorithm>
#include <cmath>

#include "mgsim/errors.hpp"

namespace mgsim {

std::vector<double> gl_weights(double order, std::size_t len) {
    std::vector<double> w(len + 1);
    w[0] = 1.0;
    for (std::size_t j = 1; j <= len; ++j)
        w[j] = w[j - 1] * (1.0 - (order + 1.0) / static_cast<double>(j));
    return w;
}

double gl_fractional_op(const std::vector<double>& history, double order, double dt_s,
                        std::size_t memory_len) {
    if (history.empty()) throw_sim("gl_fractional_op: empty history");
    std::size_t n = std::min(history.size(), memory_len + 1);
    std::vector<double> w = gl_weights(order, n - 1);
    double sum = 0.0;
    // Newest-last layout: e[k-j] = history[size-1-j].
    for (std::size_t j = 0; j < n; ++j) sum += w[j] * history[history.size() - 1 - j];
    return sum * std::pow(dt_s, -order);
}

void ControllerState::push_error(double e) {
    if (error_ring.empty()) error_ring.assign(1, 0.0);
    error_ring[head] = e;
    head = (head + 1) % error_ring.size();
    if (count < error_ring.size()) ++count;
}

std::vector<double> ControllerState::history() const {
    std::vector<double> h(count);
    for (std::size_t j = 0; j < count; ++j)
        h[count - 1 - j] = error_ring[(head + error_ring.size() - 1 - j) % error_ring.size()];
    return h;
}

double dead_band_filter(double delta_f_hz, double f_nom_hz, double dead_band_pu, bool offset) {
    double band_hz = dead_band_pu * f_nom_hz;
    if (std::abs(delta_f_hz) <= band_hz) return 0.0;
    if (!offset) return delta_f_hz;
    return delta_f_hz > 0.0 ? delta_f_hz - band_hz : delta_f_hz + band_hz;
}

namespace {

// Truncated GL sum straight off the ring, newest-first, without materializing
// the history (hot path: once per integrator step).
double gl_ring(const ControllerState& s, const std::vector<double>& w, double dt_pow) {
    std::size_t n = std::min(s.count, w.size());
    double sum = 0.0;
    std::size_t idx = s.head;
    const std::size_t cap = s.error_ring.size();
    for (std::size_t j = 0; j < n; ++j) {
        idx = (idx + cap - 1) % cap;
        sum += w[j] * s.error_ring[idx];
    }
    return sum * dt_pow;
}

}  // namespace

double fopid_output(ControllerState& state, double filtered_error_hz, const FopidParams& p,
                    double dt_s) {
    if (!std::isfinite(filtered_error_hz)) throw_sim("fopid_output: non-finite error");
    double e = filtered_error_hz;
    double prev = state.count > 0 ? state.prev_error : 0.0;
    state.push_error(e);
    state.running_error_sum += e;

    double i_term;
    if (p.lambda == 1.0) {
        i_term = state.running_error_sum * dt_s;  // exact backward-Euler sum
    } else if (p.lambda == 0.0) {
        i_term = e;
    } else {
        if (state.wi_order != -p.lambda || state.wi.size() != p.memory_len + 1) {
            state.wi = gl_weights(-p.lambda, p.memory_len);
            state.wi_order = -p.lambda;
        }
        i_term = gl_ring(state, state.wi, std::pow(dt_s, p.lambda));
    }

    double d_term;
    if (p.mu == 1.0) {
        d_term = (e - prev) / dt_s;  // backward difference
    } else if (p.mu == 0.0) {
        d_term = e;
    } else {
        if (state.wd_order != p.mu || state.wd.size() != p.memory_len + 1) {
            state.wd = gl_weights(p.mu, p.memory_len);
            state.wd_order = p.mu;
        }
        d_term = gl_ring(state, state.wd, std::pow(dt_s, -p.mu));
    }

    state.prev_error = e;
    return p.kp * e + p.ki * i_term + p.kd * d_term;
}

FleetMode select_mode(double p_t_mw, double u_signal_mw, double se_pct, const FopidParams& p,
                      double dt_s) {
    double u_scale = p.k1 / dt_s;  // rate-of-change comparison constant
    double threshold = p.k2_threshold * u_scale;
    // Surplus must clear the same threshold, or the fleet would slowly soak up
    // every dispatch-lag crumb and sit pinned at soc_max when an event hits.
    if (p_t_mw > threshold) return FleetMode::Charging;
    if (p_t_mw < 0.0 && std::abs(u_signal_mw) > threshold && se_pct > 0.0)
        return FleetMode::Regulation;
    return FleetMode::Idle;
}

double apply_limiters(double raw_cmd_mw, double last_output_mw, const DispatchLimits& limits,
                      double rate_limit_mw_per_s, double dt_s) {
    double max_delta = rate_limit_mw_per_s * dt_s;
    double out = std::clamp(raw_cmd_mw, last_output_mw - max_delta, last_output_mw + max_delta);
    return std::clamp(out, -limits.max_discharge_mw, limits.max_charge_mw);
}

double controller_step(ControllerState& state, double delta_f_hz, double p_t_mw, double se_pct,
                       const DispatchLimits& limits, const FopidParams& p, double f_nom_hz,
                       double k_ev, double dt_s) {
    if (!std::isfinite(delta_f_hz) || !std::isfinite(p_t_mw))
        throw_sim("controller_step: non-finite input");
    double e = -dead_band_filter(delta_f_hz, f_nom_hz, p.dead_band_pu, p.dead_band_offset);
    // Conditional integration: while the error sits inside the dead band, bleed
    // the accumulated integral so the fleet does not hold a stale command into
    // the next disturbance.
    if (e == 0.0 && p.aw_leak_t_s > 0.0)
        state.running_error_sum *= 1.0 - std::min(dt_s / p.aw_leak_t_s, 1.0);
    double u = fopid_output(state, e, p, dt_s);
    // Under-frequency: e > 0, u > 0, g1 = -1 maps it to a discharge command.
    double desired_mw = p.g1 * u * p.output_gain_mw_per_hz;

    FleetMode mode = select_mode(p_t_mw, desired_mw, se_pct, p, dt_s);
    double raw = 0.0;
    switch (mode) {
        case FleetMode::Regulation: raw = desired_mw; break;
        case FleetMode::Charging: raw = std::min(p_t_mw, limits.max_charge_mw); break;
        case FleetMode::Idle: raw = 0.0; break;
    }
    double out = apply_limiters(raw, state.last_output_mw, limits, p.rate_limit_mw_per_s, dt_s);
    state.last_output_mw = out;
    state.mode = mode;
    if (p.gain_compensation && k_ev > 0.0) return out / k_ev;
    return out;
}

}  // namespace mgsim
