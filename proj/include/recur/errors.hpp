#pragma once

#include <stdexcept>
#include <string>

namespace recur {

// Refusals are hard failures with distinct CLI exit codes; callers that want
// to continue past one must catch the specific type.
class refusal : public std::runtime_error {
  public:
    explicit refusal(const std::string& what) : std::runtime_error(what) {}
};

// Accumulated arithmetic error would exceed one tenth of the entourage
// radius; the operation refuses instead of degrading silently.
class budget_error : public refusal {
  public:
    budget_error(const std::string& context, double accumulated, double limit)
        : refusal(context + ": accumulated error " + std::to_string(accumulated) +
                  " exceeds budget " + std::to_string(limit)),
          accumulated_(accumulated), limit_(limit) {}
    double accumulated() const { return accumulated_; }
    double limit() const { return limit_; }

  private:
    double accumulated_;
    double limit_;
};

// Covering-constant search failed (orbit not dense at this entourage, or the
// step cap was exhausted).
class covering_error : public refusal {
  public:
    explicit covering_error(const std::string& what) : refusal(what) {}
};

// Bad configuration or malformed input document.
class config_error : public refusal {
  public:
    explicit config_error(const std::string& what, int line = -1, int column = -1)
        : refusal(what), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

// Checks the radius/10 rule shared by every entourage-consuming scan.
inline void require_budget(const std::string& context, double accumulated_error, double radius) {
    if (!(accumulated_error <= radius / 10.0))
        throw budget_error(context, accumulated_error, radius / 10.0);
}

}  // namespace recur
