// SPDX-License-Identifier: Apache-2.0

#include "lcr/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "lcr/error.hpp"

namespace lcr {

void InterfererProfile::validate() const {
    if (powers.empty()) {
        throw InvalidArgument("profile: no interferers");
    }
    if (powers.size() != doppler_hz.size()) {
        throw InvalidArgument("profile: powers and doppler_hz differ in length");
    }
    auto bad = [](double v) { return !std::isfinite(v) || !(v > 0.0); };
    if (std::any_of(powers.begin(), powers.end(), bad)) {
        throw InvalidArgument("profile: powers must be finite and positive");
    }
    if (std::any_of(doppler_hz.begin(), doppler_hz.end(), bad)) {
        throw InvalidArgument("profile: doppler_hz must be finite and positive");
    }
    if (!std::isfinite(rician_k_linear) || rician_k_linear < 0.0) {
        throw InvalidArgument("profile: rician_k_linear must be finite and >= 0");
    }
}

double InterfererProfile::total_power() const {
    return std::accumulate(powers.begin(), powers.end(), 0.0);
}

double InterfererProfile::largest_share() const {
    if (powers.empty()) return 0.0;
    return *std::max_element(powers.begin(), powers.end()) / total_power();
}

std::optional<double> InterfererProfile::common_doppler() const {
    if (doppler_hz.empty()) return std::nullopt;
    const double f = doppler_hz.front();
    for (double d : doppler_hz) {
        if (d != f) return std::nullopt;
    }
    return f;
}

InterfererProfile InterfererProfile::with_doppler(double f) const {
    InterfererProfile p = *this;
    std::fill(p.doppler_hz.begin(), p.doppler_hz.end(), f);
    return p;
}

InterfererProfile InterfererProfile::with_k(double k_linear) const {
    InterfererProfile p = *this;
    p.rician_k_linear = k_linear;
    return p;
}

std::string profile_to_json(const InterfererProfile& profile) {
    nlohmann::ordered_json j;
    j["powers"] = profile.powers;
    j["doppler_hz"] = profile.doppler_hz;
    j["rician_k_linear"] = profile.rician_k_linear;
    return j.dump(2) + "\n";
}

InterfererProfile profile_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        InterfererProfile p;
        p.powers = j.at("powers").get<std::vector<double>>();
        p.doppler_hz = j.at("doppler_hz").get<std::vector<double>>();
        p.rician_k_linear = j.value("rician_k_linear", 0.0);
        p.validate();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("profile JSON: ") + e.what());
    }
}

InterfererProfile read_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open profile " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return profile_from_json(buf.str());
}

void write_profile(const std::filesystem::path& path, const InterfererProfile& profile) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument("cannot write profile " + path.string());
    }
    out << profile_to_json(profile);
}

}  // namespace lcr
