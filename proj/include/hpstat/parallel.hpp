#pragma once

namespace hpstat {

/// Sets the worker count used by every parallel routine; 0 means all
/// available cores. Results never depend on this value.
void set_thread_count(int threads);

int thread_count();

}  // namespace hpstat
