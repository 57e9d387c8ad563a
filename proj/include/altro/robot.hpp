#pragma once

#include <cstdint>
#include <vector>

namespace altro {

// Capability slots for the two-capability fire application. The core
// types are capability-agnostic; only these index names are fire-specific.
inline constexpr int kCapSensing = 0;
inline constexpr int kCapFighting = 1;

struct Robot {
    int id = 0;
    std::vector<uint8_t> capability;  // length Q, binary entries
    double speed = 1.0;               // m/s, > 0
    double capacity = 0.0;            // suppression units, 0 for sensing robots

    bool has_capability(int slot) const {
        return slot < static_cast<int>(capability.size()) && capability[slot] != 0;
    }
    bool is_sensing() const { return has_capability(kCapSensing); }
    bool is_fighting() const { return has_capability(kCapFighting); }
};

inline Robot make_sensing_robot(int id, double speed) {
    return Robot{id, {1, 0}, speed, 0.0};
}

inline Robot make_fighting_robot(int id, double speed, double capacity) {
    return Robot{id, {0, 1}, speed, capacity};
}

}  // namespace altro
