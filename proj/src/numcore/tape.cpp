#include "numcore/tape.hpp"

namespace kplug::numcore {

namespace {
thread_local Tape* g_active = nullptr;
}

Tape* active_tape() { return g_active; }

TapeScope::TapeScope() : prev_(g_active) { g_active = &tape_; }

TapeScope::~TapeScope() { g_active = prev_; }

} // namespace kplug::numcore
