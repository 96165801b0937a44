#pragma once

#include "ghost/config.hpp"

namespace ghost {

// Exit codes shared by all commands: 0 success, 1 usage, 2 config invalid,
// 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr const char* kToolkitVersion = "0.1.0";

int cmd_simulate(const RunConfig& cfg);
int cmd_reconstruct(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_metrics(const RunConfig& cfg);

}  // namespace ghost
