#pragma once

#include <stdexcept>
#include <string>

namespace gridmpc {

struct ConfigInvalid : std::runtime_error {
    explicit ConfigInvalid(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalBlowup : std::runtime_error {
    explicit NumericalBlowup(const std::string& what, double at_time = -1.0)
        : std::runtime_error(what), time(at_time) {}
    double time;
};

struct ControlSetTooLarge : std::runtime_error {
    explicit ControlSetTooLarge(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gridmpc
