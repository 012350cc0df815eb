#pragma once

#include <functional>
#include <vector>

namespace kplug::numcore {

// Reverse-mode tape. One tape is active per thread at a time; ops record a
// backward closure when any input requires a gradient. backward() replays the
// closures in reverse and clears the tape, so a training step is
// forward -> backward -> optimizer, all inside one TapeScope.
class Tape {
  public:
    void record(std::function<void()> fn) { nodes_.push_back(std::move(fn)); }
    size_t size() const { return nodes_.size(); }
    void run_reverse() {
        for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
    }
    void clear() { nodes_.clear(); }

  private:
    std::vector<std::function<void()>> nodes_;
};

Tape* active_tape();

class TapeScope {
  public:
    TapeScope();
    ~TapeScope();
    TapeScope(const TapeScope&) = delete;
    TapeScope& operator=(const TapeScope&) = delete;
    Tape& tape() { return tape_; }

  private:
    Tape tape_;
    Tape* prev_;
};

} // namespace kplug::numcore
