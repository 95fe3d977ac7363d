// Copyright 2026 The hypercnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace hypercnot {

enum class Pol : std::uint8_t { R = 0, L = 1 };
enum class Spatial : std::uint8_t { mode1 = 0, mode2 = 1 };
enum class Spin : std::uint8_t { up = 0, down = 1 };
enum class SpinId : std::uint8_t { qd1 = 0, qd2 = 1 };

/// Which of the three probability sinks a removed branch lands in.
enum class SinkId : std::uint8_t { detector_B1 = 0, detector_B2 = 1, absorbed = 2 };
inline constexpr std::size_t kNumSinks = 3;

inline const char *to_string(SinkId s) {
    switch (s) {
    case SinkId::detector_B1:
        return "detector_B1";
    case SinkId::detector_B2:
        return "detector_B2";
    case SinkId::absorbed:
        return "absorbed";
    }
    return "?";
}

inline const char *to_string(Pol p) { return p == Pol::R ? "R" : "L"; }
inline const char *to_string(Spin s) { return s == Spin::up ? "up" : "down"; }

/// Packed computational-basis label.
///
/// Bit layout (least significant first): photon 0 polarization, photon 0
/// spatial mode, photon 1 polarization, ..., then spin QD1 and spin QD2 when
/// the state still carries spins. A set bit means L, mode 2, or spin down.
/// The layout is part of the public contract; serialized states and the
/// dense oracle both rely on it.
class BasisLabel {
  public:
    using Bits = std::uint64_t;
    static constexpr std::size_t kMaxPhotons = 31;

    constexpr BasisLabel() = default;
    constexpr explicit BasisLabel(Bits bits) : bits_(bits) {}

    static constexpr std::size_t pol_bit(std::size_t photon) { return 2 * photon; }
    static constexpr std::size_t spatial_bit(std::size_t photon) {
        return 2 * photon + 1;
    }
    static constexpr std::size_t spin_bit(std::size_t n_photons, SpinId s) {
        return 2 * n_photons + static_cast<std::size_t>(s);
    }

    constexpr Bits bits() const { return bits_; }
    constexpr bool test(std::size_t bit) const { return (bits_ >> bit) & 1U; }
    constexpr BasisLabel flipped(std::size_t bit) const {
        return BasisLabel(bits_ ^ (Bits{1} << bit));
    }
    constexpr BasisLabel with(std::size_t bit, bool value) const {
        return BasisLabel(value ? bits_ | (Bits{1} << bit)
                                : bits_ & ~(Bits{1} << bit));
    }

    constexpr Pol pol(std::size_t photon) const {
        return test(pol_bit(photon)) ? Pol::L : Pol::R;
    }
    constexpr Spatial spatial(std::size_t photon) const {
        return test(spatial_bit(photon)) ? Spatial::mode2 : Spatial::mode1;
    }
    constexpr Spin spin(std::size_t n_photons, SpinId s) const {
        return test(spin_bit(n_photons, s)) ? Spin::down : Spin::up;
    }

    friend constexpr auto operator<=>(BasisLabel, BasisLabel) = default;

  private:
    Bits bits_{0};
};

/// Human-readable label: photon 0 is `a`, later photons `b`, `c`, ...;
/// e.g. `a:R,1 b:L,2 | up,down`.
inline std::string format_label(BasisLabel label, std::size_t n_photons,
                                std::size_t n_spins) {
    std::string out;
    for (std::size_t p = 0; p < n_photons; ++p) {
        if (p)
            out += ' ';
        out += static_cast<char>('a' + (p % 26));
        if (p >= 26)
            out += std::to_string(p / 26);
        out += ':';
        out += to_string(label.pol(p));
        out += label.spatial(p) == Spatial::mode1 ? ",1" : ",2";
    }
    if (n_spins == 2) {
        out += " | ";
        out += to_string(label.spin(n_photons, SpinId::qd1));
        out += ',';
        out += to_string(label.spin(n_photons, SpinId::qd2));
    }
    return out;
}

} // namespace hypercnot
