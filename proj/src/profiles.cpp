#include "mgsim/profiles.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>

#include "mgsim/errors.hpp"

namespace mgsim {

double ZohProfile::at(double t_s) const {
    if (values.empty()) return 0.0;
    if (t_s <= 0.0) return values.front();
    auto idx = static_cast<std::size_t>(std::floor(t_s / step_s + 1e-9));
    if (idx >= values.size()) idx = values.size() - 1;
    return values[idx];
}

namespace {
constexpr double kDay = 86400.0;

ZohProfile make_day_profile(double step_s, double (*f)(double, const double*), const double* args) {
    ZohProfile p;
    p.step_s = step_s;
    auto n = static_cast<std::size_t>(kDay / step_s);
    p.values.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) p.values.push_back(f(static_cast<double>(k) * step_s, args));
    return p;
}
}  // namespace

ZohProfile default_irradiance_profile(double sunrise_s, double sunset_s, double peak_w_m2) {
    const double args[3] = {sunrise_s, sunset_s, peak_w_m2};
    return make_day_profile(60.0,
                            [](double t, const double* a) {
                                if (t <= a[0] || t >= a[1]) return 0.0;
                                return a[2] * std::sin(M_PI * (t - a[0]) / (a[1] - a[0]));
                            },
                            args);
}

ZohProfile default_wind_profile(double v_nominal_m_s) {
    const double args[1] = {v_nominal_m_s};
    return make_day_profile(60.0, [](double, const double* a) { return a[0]; }, args);
}

ZohProfile default_load_profile() {
    // Overnight base 0.7 pu, morning rise to an industrial midday peak of
    // 1.35 pu, easing to 1.0 pu through the evening and back down after 22:00.
    return make_day_profile(60.0,
                            [](double t, const double*) {
                                auto lerp = [](double t0, double t1, double v0, double v1, double t) {
                                    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
                                };
                                if (t < 21600.0) return 0.7;                              // 00-06
                                if (t < 39600.0) return lerp(21600, 39600, 0.7, 1.35, t);  // 06-11
                                if (t < 50400.0) return 1.35;                             // 11-14
                                if (t < 61200.0) return lerp(50400, 61200, 1.35, 1.0, t);  // 14-17
                                if (t < 79200.0) return 1.0;                              // 17-22
                                return lerp(79200, 86400, 1.0, 0.7, t);                   // 22-24
                            },
                            nullptr);
}

ZohProfile constant_profile(double value, double duration_s, double step_s) {
    ZohProfile p;
    p.step_s = step_s;
    auto n = static_cast<std::size_t>(std::ceil(duration_s / step_s)) + 1;
    p.values.assign(n, value);
    return p;
}

ZohProfile load_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open profile file: " + path);
    ZohProfile p;
    p.step_s = 0.0;
    std::string line;
    double prev_t = 0.0;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string t_str, v_str;
        if (!std::getline(ss, t_str, ',') || !std::getline(ss, v_str)) continue;
        double t, v;
        try {
            t = std::stod(t_str);
            v = std::stod(v_str);
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header row
            throw_config("malformed profile row in " + path + " line " + std::to_string(lineno));
        }
        if (first) {
            if (t != 0.0) throw_config("profile " + path + " must start at t = 0");
            first = false;
        } else {
            double step = t - prev_t;
            if (step <= 0.0) throw_config("profile " + path + " times must increase");
            if (p.step_s == 0.0)
                p.step_s = step;
            else if (std::abs(step - p.step_s) > 1e-6)
                throw_config("profile " + path + " must be equally spaced");
        }
        p.values.push_back(v);
        prev_t = t;
    }
    if (p.values.empty()) throw_config("profile " + path + " has no samples");
    if (p.step_s == 0.0) p.step_s = 60.0;
    return p;
}

}  // namespace mgsim
