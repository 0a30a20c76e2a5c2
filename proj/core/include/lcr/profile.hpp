// SPDX-License-Identifier: Apache-2.0
//
// The interferer profile is the input to every analytic and simulated
// quantity: long-term powers I_1..I_N at the primary receiver (linear,
// noise-normalized), one Doppler frequency per interferer and a shared
// Rician K-factor.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcr {

struct InterfererProfile {
    std::vector<double> powers;
    std::vector<double> doppler_hz;
    double rician_k_linear = 0.0;  // 0 means Rayleigh

    // Throws lcr::InvalidArgument if the profile is empty, mismatched in
    // length, or holds non-positive / non-finite entries.
    void validate() const;

    std::size_t size() const { return powers.size(); }
    double total_power() const;
    double largest_share() const;

    // The Doppler shared by every interferer, if there is one.
    std::optional<double> common_doppler() const;

    // Copy with every interferer moved to `doppler_hz`.
    InterfererProfile with_doppler(double doppler_hz) const;
    InterfererProfile with_k(double k_linear) const;
};

// {"powers":[...], "doppler_hz":[...], "rician_k_linear": x}
std::string profile_to_json(const InterfererProfile& profile);
InterfererProfile profile_from_json(std::string_view text);

InterfererProfile read_profile(const std::filesystem::path& path);
void write_profile(const std::filesystem::path& path, const InterfererProfile& profile);

}  // namespace lcr
